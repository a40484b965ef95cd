//! The thin command-line front end.
//!
//! Every subcommand is an adapter over the library: no probability
//! arithmetic lives here. Identical invocations (same flags and seed)
//! produce byte-identical output. Exit codes: 0 success, 1 validation or
//! semantic failure, 2 I/O failure, 3 bad flags.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::builtin;
use crate::constructions::{
    exist_twin_2qcca, siam_twins_pebble, transform_with_audit, ReachabilityBound,
};
use crate::engines::{
    classify_mode, exact_probability, monte_carlo, round_absorption, run_deterministic,
    AbsorbOptions, ExactOptions, LabeledReport, MCOptions, MachineSystem,
};
use crate::exactmath::Rational;
use crate::machines::{parse_machine, print_machine, validate_head_safety, MachineSpec};
use crate::protocols::{
    adversarial_provers, honest_prover, one_way_verifier, run_session, two_way_verifier,
    ProtocolParams, Prover, SessionMethod,
};

#[derive(Parser)]
#[command(
    name = "counterlab",
    about = "Exact simulation workbench for counter automata and interactive proof sessions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and fully validate a machine file.
    Validate { file: String },
    /// Run a deterministic machine (2dca or 1d2ca) on an input.
    Run {
        file: String,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: u64,
        /// Print the configuration trace.
        #[arg(long)]
        trace: bool,
    },
    /// Acceptance/rejection probabilities with certified bounds.
    Prob {
        /// Machine file, or @twin / @exist-twin / @siam-twins for builtins.
        file: String,
        #[arg(long, default_value = "")]
        input: String,
        /// exact (truncation), round (per-round absorption and limits), or mc.
        #[arg(long, default_value = "exact")]
        method: String,
        /// Truncation tolerance, e.g. 1e-9 or 1/1000000000.
        #[arg(long, default_value = "1e-9")]
        tol: String,
        #[arg(long, default_value_t = 1_000_000)]
        horizon: u64,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long)]
        json: bool,
    },
    /// Breadth-first reachability of a nondeterministic machine under the
    /// standard caps (counter M, path length M^2).
    Reach {
        file: String,
        #[arg(long, default_value = "")]
        input: String,
        /// Override the counter cap.
        #[arg(long)]
        counter_cap: Option<i64>,
        /// Override the path-length cap.
        #[arg(long)]
        step_cap: Option<u64>,
    },
    /// Transform a nondeterministic one-counter machine into a bounded-error
    /// probabilistic one.
    Transform {
        file: String,
        /// Audit inputs (comma separated) for the three-to-one acceptance
        /// check.
        #[arg(long, default_value = "")]
        audit: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Emit a built-in machine file (twin, exist-twin, siam-twins).
    Build {
        name: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run an interactive-proof session.
    Ips {
        /// two-way (restarting) or one-way (single pass).
        #[arg(long, default_value = "two-way")]
        verifier: String,
        /// Target 1d2ca machine file, or @anbn for the built-in target.
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "")]
        input: String,
        /// honest, flatline, off-by-one, stall, wrong-branch, accept-rusher.
        #[arg(long, default_value = "honest")]
        prover: String,
        /// Input whose honest trace the wrong-branch prover streams.
        #[arg(long)]
        alt_input: Option<String>,
        #[arg(long, default_value_t = 16)]
        k: u32,
        #[arg(long, default_value = "exact")]
        method: String,
        #[arg(long, default_value = "1e-9")]
        tol: String,
        #[arg(long, default_value_t = 100_000)]
        horizon: u64,
        #[command(flatten)]
        mc: McArgs,
        /// Write the sampled transcript to this file.
        #[arg(long)]
        transcript: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Classify the recognition mode from certified reports on labeled
    /// samples.
    Classify {
        file: String,
        /// Comma-separated member inputs.
        #[arg(long, default_value = "")]
        members: String,
        /// Comma-separated nonmember inputs.
        #[arg(long, default_value = "")]
        nonmembers: String,
        #[arg(long, default_value = "1/5")]
        epsilon: String,
        /// round (absorption limits) or exact (truncation).
        #[arg(long, default_value = "round")]
        method: String,
        #[arg(long, default_value_t = 100_000)]
        horizon: u64,
    },
}

#[derive(Args)]
struct McArgs {
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Defaults to the COUNTERLAB_SEED environment variable, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100_000)]
    step_cap: u64,
}

impl McArgs {
    fn options(&self) -> MCOptions {
        let seed = self.seed.unwrap_or_else(|| {
            std::env::var("COUNTERLAB_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
                .unwrap_or(0)
        });
        MCOptions {
            trials: self.trials,
            seed,
            step_cap: self.step_cap,
        }
    }
}

pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let code = match e.kind() {
                DisplayHelp | DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::from(0),
        Err(CliError::Semantic(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(CliError::Flags(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(3)
        }
    }
}

enum CliError {
    Semantic(String),
    Io(String),
    Flags(String),
}

fn sem(e: impl std::fmt::Display) -> CliError {
    CliError::Semantic(e.to_string())
}

fn load_spec(path: &str) -> Result<MachineSpec, CliError> {
    match path {
        "@twin" => Ok(builtin::twin_spec()),
        "@exist-twin" => Ok(exist_twin_2qcca()),
        "@siam-twins" => Ok(siam_twins_pebble()),
        "@anbn" => Ok(builtin::fixtures::anbn_1d2ca()),
        "@anbn-2dca" => Ok(builtin::fixtures::anbn_2dca()),
        "@anbn-2nca" => Ok(builtin::fixtures::anbn_guess_2nca()),
        "@contains-aa" => Ok(builtin::fixtures::contains_aa_2nca()),
        "@fair-coin" => Ok(builtin::fixtures::fair_coin_2pca()),
        p if p.starts_with('@') => Err(CliError::Flags(format!("unknown builtin {p:?}"))),
        p => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Io(format!("cannot read {p:?}: {e}")))?;
            parse_machine(&text).map_err(sem)
        }
    }
}

fn parse_rational(s: &str, what: &str) -> Result<Rational, CliError> {
    s.parse()
        .map_err(|e| CliError::Flags(format!("bad {what} {s:?}: {e}")))
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(str::to_string)
        .collect()
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Validate { file } => {
            let text = match file.as_str() {
                p if p.starts_with('@') => print_machine(&load_spec(p)?),
                p => fs::read_to_string(p)
                    .map_err(|e| CliError::Io(format!("cannot read {p:?}: {e}")))?,
            };
            let raw = crate::machines::parse_raw(&text).map_err(sem)?;
            for v in validate_head_safety(&raw) {
                eprintln!("head safety: {v}");
            }
            let spec = raw.validate().map_err(sem)?;
            println!("valid: {spec}");
            Ok(())
        }
        Command::Run {
            file,
            input,
            max_steps,
            trace,
        } => {
            let spec = load_spec(&file)?;
            let result = run_deterministic(&spec, &input, max_steps, trace).map_err(sem)?;
            if let Some(t) = &result.trace {
                for (i, c) in t.iter().enumerate() {
                    println!(
                        "step {i}: state={} head={} counters={:?}",
                        spec.state_name(c.state),
                        c.head,
                        c.counters
                    );
                }
            }
            println!(
                "decision = {:?} after {} steps",
                result.decision, result.steps
            );
            Ok(())
        }
        Command::Prob {
            file,
            input,
            method,
            tol,
            horizon,
            mc,
            json,
        } => {
            let spec = load_spec(&file)?;
            let sys = MachineSystem::new(&spec, &input).map_err(sem)?;
            match method.as_str() {
                "exact" => {
                    let opts = ExactOptions::with_tolerance(parse_rational(&tol, "tolerance")?)
                        .horizon(horizon);
                    let report = exact_probability(&sys, &opts).map_err(sem)?;
                    if json {
                        println!("{}", serde_json::to_string_pretty(&report).unwrap());
                    } else {
                        println!("{report}");
                    }
                }
                "round" => {
                    let round = round_absorption(&sys, &AbsorbOptions::default()).map_err(sem)?;
                    let totals = round.totals_with_bounds();
                    if json {
                        #[derive(serde::Serialize)]
                        struct Out<'a> {
                            round: &'a crate::engines::RoundReport,
                            totals: &'a crate::engines::ProbabilityReport,
                        }
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&Out {
                                round: &round,
                                totals: &totals
                            })
                            .unwrap()
                        );
                    } else {
                        print!("{round}");
                        println!("-- limits over rounds --");
                        println!("{totals}");
                    }
                }
                "mc" => {
                    let est = monte_carlo(&sys, &mc.options()).map_err(sem)?;
                    if json {
                        println!("{}", serde_json::to_string_pretty(&est).unwrap());
                    } else {
                        println!("{est}");
                    }
                }
                other => return Err(CliError::Flags(format!("unknown method {other:?}"))),
            }
            Ok(())
        }
        Command::Reach {
            file,
            input,
            counter_cap,
            step_cap,
        } => {
            let spec = load_spec(&file)?;
            let bound = ReachabilityBound::for_input(&spec, &input);
            let counter_cap = counter_cap.unwrap_or(bound.counter_cap);
            let step_cap = step_cap.unwrap_or(bound.path_cap);
            let result =
                crate::engines::explore_nondeterministic(&spec, &input, counter_cap, step_cap)
                    .map_err(sem)?;
            println!(
                "caps: counter {counter_cap}, path length {step_cap} (M = {})",
                bound.m
            );
            let mut names: Vec<&str> = result
                .reachable
                .iter()
                .map(|&s| spec.state_name(s))
                .collect();
            names.sort_unstable();
            println!("reachable states: {}", names.join(", "));
            match result.accepting_path {
                Some(path) => {
                    println!("accepting path ({} configurations):", path.len());
                    for c in path {
                        println!(
                            "  state={} head={} counter={}",
                            spec.state_name(c.state),
                            c.head,
                            c.counters[0]
                        );
                    }
                }
                None => println!("no accepting path within the caps"),
            }
            Ok(())
        }
        Command::Transform { file, audit, out } => {
            let spec = load_spec(&file)?;
            let audit_inputs = split_list(&audit);
            let refs: Vec<&str> = audit_inputs.iter().map(String::as_str).collect();
            let (t, reports) = transform_with_audit(&spec, &refs, 8).map_err(sem)?;
            println!(
                "transformed: fan-out k = {}, cascade exponent c = {}",
                t.k, t.c
            );
            for (input, round) in &reports {
                println!("audit {input:?}:");
                print!("{round}");
            }
            let text = print_machine(&t.spec);
            match out {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| CliError::Io(format!("cannot write {path:?}: {e}")))?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Build { name, out } => {
            let spec = load_spec(&format!("@{}", name.trim_start_matches('@')))?;
            let text = print_machine(&spec);
            match out {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| CliError::Io(format!("cannot write {path:?}: {e}")))?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Ips {
            verifier,
            target,
            input,
            prover,
            alt_input,
            k,
            method,
            tol,
            horizon,
            mc,
            transcript,
            json,
        } => {
            let target_spec = load_spec(&target)?;
            let params = ProtocolParams {
                k,
                ..ProtocolParams::default()
            };
            let built = match verifier.as_str() {
                "two-way" => two_way_verifier(&target_spec, params).map_err(sem)?,
                "one-way" => one_way_verifier(&target_spec, params).map_err(sem)?,
                other => return Err(CliError::Flags(format!("unknown verifier {other:?}"))),
            };
            let alt = alt_input.unwrap_or_else(|| input.clone());
            let prover_box: Box<dyn Prover> = match prover.as_str() {
                "honest" => Box::new(honest_prover(&target_spec, &input, 100_000).map_err(sem)?),
                name => {
                    let mut fixtures =
                        adversarial_provers(&target_spec, &input, &alt, 100_000).map_err(sem)?;
                    match fixtures.iter().position(|p| p.name() == name) {
                        Some(i) => fixtures.swap_remove(i),
                        None => return Err(CliError::Flags(format!("unknown prover {name:?}"))),
                    }
                }
            };
            let method = match method.as_str() {
                "exact" => SessionMethod::Exact(
                    ExactOptions::with_tolerance(parse_rational(&tol, "tolerance")?)
                        .horizon(horizon),
                ),
                "mc" => SessionMethod::Mc(mc.options()),
                other => return Err(CliError::Flags(format!("unknown method {other:?}"))),
            };
            let outcome = run_session(&built, prover_box.as_ref(), &input, &method).map_err(sem)?;

            if json {
                #[derive(serde::Serialize)]
                struct Out<'a> {
                    report: &'a Option<crate::engines::ProbabilityReport>,
                    estimate: &'a Option<crate::engines::MCEstimate>,
                    round: &'a Option<crate::engines::RoundReport>,
                }
                println!(
                    "{}",
                    serde_json::to_string_pretty(&Out {
                        report: &outcome.report,
                        estimate: &outcome.estimate,
                        round: &outcome.round,
                    })
                    .unwrap()
                );
            } else {
                println!(
                    "verifier = {verifier}, prover = {}, k = {k}",
                    prover_box.name()
                );
                if let Some(l) = outcome.predicted.honest_len {
                    println!("honest stream length l = {l}");
                }
                if let Some(w) = &outcome.predicted.per_round_accept {
                    println!(
                        "predicted per-round accept (member, honest) = {}",
                        w.display_with_approx()
                    );
                }
                if let Some(w) = &outcome.predicted.per_round_reject {
                    println!(
                        "predicted per-round reject (nonmember, honest) = {}",
                        w.display_with_approx()
                    );
                }
                if let Some(w) = &outcome.predicted.upfront_reject {
                    println!("predicted upfront reject = {}", w.display_with_approx());
                }
                if let Some(w) = &outcome.predicted.member_accept {
                    println!(
                        "predicted member accept (honest) = {}",
                        w.display_with_approx()
                    );
                }
                if let Some(round) = &outcome.round {
                    println!("-- measured per-round weights --");
                    print!("{round}");
                }
                if let Some(report) = &outcome.report {
                    println!("-- certified session bounds --");
                    println!("{report}");
                }
                if let Some(est) = &outcome.estimate {
                    println!("{est}");
                }
            }
            if let Some(path) = transcript {
                fs::write(&path, outcome.transcript.to_string())
                    .map_err(|e| CliError::Io(format!("cannot write {path:?}: {e}")))?;
            }
            Ok(())
        }
        Command::Classify {
            file,
            members,
            nonmembers,
            epsilon,
            method,
            horizon,
        } => {
            let spec = load_spec(&file)?;
            let eps = parse_rational(&epsilon, "epsilon")?;
            let mut reports = Vec::new();
            let labeled = split_list(&members)
                .into_iter()
                .map(|i| (i, true))
                .chain(split_list(&nonmembers).into_iter().map(|i| (i, false)));
            for (input, member) in labeled {
                let sys = MachineSystem::new(&spec, &input).map_err(sem)?;
                let report = match method.as_str() {
                    "round" => round_absorption(&sys, &AbsorbOptions::default())
                        .map_err(sem)?
                        .totals_with_bounds(),
                    "exact" => exact_probability(&sys, &ExactOptions::default().horizon(horizon))
                        .map_err(sem)?,
                    other => return Err(CliError::Flags(format!("unknown method {other:?}"))),
                };
                println!(
                    "{} {:?}:",
                    if member { "member" } else { "nonmember" },
                    input
                );
                println!("{report}");
                reports.push(LabeledReport {
                    input,
                    member,
                    report,
                });
            }
            let mode = classify_mode(&reports, &eps).map_err(sem)?;
            println!("mode = {mode}");
            Ok(())
        }
    }
}
