//! The machine file format.
//!
//! Machine files are TOML text with `#` comments. Every probability and
//! matrix entry is a `"p/q"` string; floating-point literals are rejected
//! anywhere in the file. Specs printed by [`print_machine`] are canonical:
//! parsing the output reproduces the spec exactly, byte-stable across runs.

use std::fmt::Write as _;

use toml::Value;

use crate::exactmath::{QMatrix, Rational, Superoperator};

use super::kind::Kind;
use super::spec::{
    Action, CounterStatus, MachineSpec, Move, PebbleAction, RawAction, RawMachine, RawOp,
    RawQuantum, RawRhs, RawRow, Rhs,
};
use super::MachineError;

/// Parses and fully validates a machine file.
pub fn parse_machine(text: &str) -> Result<MachineSpec, MachineError> {
    parse_raw(text)?.validate()
}

/// Parses a machine file into its unvalidated form.
pub fn parse_raw(text: &str) -> Result<RawMachine, MachineError> {
    let value: Value = text
        .parse()
        .map_err(|e| MachineError::Syntax(format!("{e}")))?;
    reject_floats(&value, "")?;
    let root = value
        .as_table()
        .ok_or_else(|| syntax("machine file must be a table"))?;

    let mut raw = RawMachine {
        kind: Some(
            get_str(root, "kind")?
                .parse::<Kind>()
                .map_err(MachineError::Syntax)?,
        ),
        states: get_str_array(root, "states")?,
        accept: get_str(root, "accept")?.to_string(),
        reject: get_str(root, "reject")?.to_string(),
        sigma: get_char_array(root, "sigma")?,
        ..RawMachine::default()
    };
    let sig = raw.kind.unwrap().signature();

    if let Some(v) = root.get("comm_alphabet") {
        raw.comm_alphabet = chars_of(v, "comm_alphabet")?;
    }
    if let Some(v) = root.get("comm") {
        for (i, item) in array_of(v, "comm")?.iter().enumerate() {
            let t = table_of(item, &format!("comm[{i}]"))?;
            raw.comm
                .push((get_str(t, "state")?.to_string(), get_char(t, "emit")?));
        }
    }

    if let Some(v) = root.get("transitions") {
        for (i, item) in array_of(v, "transitions")?.iter().enumerate() {
            let at = format!("transitions[{i}]");
            let t = table_of(item, &at)?;
            let statuses = match t.get("status") {
                Some(v) => statuses_of(v, &at)?,
                None => vec![],
            };
            let pebble = match t.get("pebble_sense") {
                Some(Value::Boolean(b)) => Some(*b),
                Some(_) => return Err(syntax(&format!("{at}.pebble_sense must be a boolean"))),
                None => None,
            };
            let rhs = if t.contains_key("outcomes") {
                let mut list = Vec::new();
                for (j, o) in array_of(&t["outcomes"], &format!("{at}.outcomes"))?
                    .iter()
                    .enumerate()
                {
                    let ot = table_of(o, &format!("{at}.outcomes[{j}]"))?;
                    let p = rational_of(
                        ot.get("p")
                            .ok_or_else(|| syntax(&format!("{at}.outcomes[{j}] needs p")))?,
                        &format!("{at}.outcomes[{j}].p"),
                    )?;
                    list.push((p, action_of(ot, &format!("{at}.outcomes[{j}]"), &sig)?));
                }
                RawRhs::Prob(list)
            } else if t.contains_key("choices") {
                let mut list = Vec::new();
                for (j, o) in array_of(&t["choices"], &format!("{at}.choices"))?
                    .iter()
                    .enumerate()
                {
                    let ot = table_of(o, &format!("{at}.choices[{j}]"))?;
                    list.push(action_of(ot, &format!("{at}.choices[{j}]"), &sig)?);
                }
                RawRhs::Nondet(list)
            } else if t.contains_key("actions") {
                let arr = array_of(&t["actions"], &format!("{at}.actions"))?;
                let mut labeled = Vec::new();
                for (j, o) in arr.iter().enumerate() {
                    let ot = table_of(o, &format!("{at}.actions[{j}]"))?;
                    let label = match ot.get("outcome") {
                        Some(Value::Integer(n)) if *n >= 1 => *n as usize,
                        _ => {
                            return Err(syntax(&format!(
                                "{at}.actions[{j}] needs a positive integer outcome"
                            )))
                        }
                    };
                    labeled.push((label, action_of(ot, &format!("{at}.actions[{j}]"), &sig)?));
                }
                labeled.sort_by_key(|(l, _)| *l);
                for (want, (got, _)) in (1..).zip(labeled.iter()) {
                    if *got != want {
                        return Err(syntax(&format!(
                            "{at}.actions must label outcomes 1..{} exactly once",
                            labeled.len()
                        )));
                    }
                }
                RawRhs::QuantumOutcomes(labeled.into_iter().map(|(_, a)| a).collect())
            } else {
                RawRhs::Det(action_of(t, &at, &sig)?)
            };
            raw.rows.push(RawRow {
                state: get_str(t, "state")?.to_string(),
                symbol: get_char(t, "symbol")?,
                statuses,
                pebble,
                rhs,
            });
        }
    }

    if let Some(v) = root.get("quantum") {
        let qt = table_of(v, "quantum")?;
        let mut ops = Vec::new();
        if let Some(sv) = qt.get("superoperators") {
            for (i, item) in array_of(sv, "quantum.superoperators")?.iter().enumerate() {
                let at = format!("quantum.superoperators[{i}]");
                let t = table_of(item, &at)?;
                let statuses = match t.get("status") {
                    Some(v) => statuses_of(v, &at)?,
                    None => vec![],
                };
                let pebble = match t.get("pebble_sense") {
                    Some(Value::Boolean(b)) => Some(*b),
                    Some(_) => return Err(syntax(&format!("{at}.pebble_sense must be a boolean"))),
                    None => None,
                };
                let elements_v = t
                    .get("elements")
                    .ok_or_else(|| syntax(&format!("{at} needs elements")))?;
                let mut elements = Vec::new();
                for (j, m) in array_of(elements_v, &format!("{at}.elements"))?.iter().enumerate() {
                    elements.push(matrix_of(m, &format!("{at}.elements[{j}]"))?);
                }
                let op = Superoperator::new(elements)
                    .map_err(|e| syntax(&format!("{at}: {e}")))?;
                ops.push(RawOp {
                    state: get_str(t, "state")?.to_string(),
                    symbol: get_char(t, "symbol")?,
                    statuses,
                    pebble,
                    op,
                });
            }
        }
        raw.quantum = Some(RawQuantum {
            states: get_str_array(qt, "states")?,
            initial: get_str(qt, "initial")?.to_string(),
            ops,
        });
    }

    Ok(raw)
}

fn syntax(msg: &str) -> MachineError {
    MachineError::Syntax(msg.to_string())
}

fn reject_floats(v: &Value, path: &str) -> Result<(), MachineError> {
    match v {
        Value::Float(_) => Err(syntax(&format!(
            "floating-point literal at {path}; probabilities and entries must be \"p/q\" strings"
        ))),
        Value::Datetime(_) => Err(syntax(&format!("unexpected datetime at {path}"))),
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                reject_floats(x, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        Value::Table(t) => {
            for (k, x) in t {
                reject_floats(x, &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

type Table = toml::map::Map<String, Value>;

fn table_of<'a>(v: &'a Value, at: &str) -> Result<&'a Table, MachineError> {
    v.as_table().ok_or_else(|| syntax(&format!("{at} must be a table")))
}

fn array_of<'a>(v: &'a Value, at: &str) -> Result<&'a [Value], MachineError> {
    v.as_array()
        .map(|a| a.as_slice())
        .ok_or_else(|| syntax(&format!("{at} must be an array")))
}

fn get_str<'a>(t: &'a Table, key: &str) -> Result<&'a str, MachineError> {
    t.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| syntax(&format!("missing or non-string field {key:?}")))
}

fn get_char(t: &Table, key: &str) -> Result<char, MachineError> {
    let s = get_str(t, key)?;
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(syntax(&format!("field {key:?} must be a single character, got {s:?}"))),
    }
}

fn get_str_array(t: &Table, key: &str) -> Result<Vec<String>, MachineError> {
    let arr = t
        .get(key)
        .ok_or_else(|| syntax(&format!("missing field {key:?}")))?;
    array_of(arr, key)?
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| syntax(&format!("{key} entries must be strings")))
        })
        .collect()
}

fn get_char_array(t: &Table, key: &str) -> Result<Vec<char>, MachineError> {
    match t.get(key) {
        Some(v) => chars_of(v, key),
        None => Err(syntax(&format!("missing field {key:?}"))),
    }
}

fn chars_of(v: &Value, at: &str) -> Result<Vec<char>, MachineError> {
    array_of(v, at)?
        .iter()
        .map(|x| match x.as_str() {
            Some(s) if s.chars().count() == 1 => Ok(s.chars().next().unwrap()),
            _ => Err(syntax(&format!("{at} entries must be single-character strings"))),
        })
        .collect()
}

fn statuses_of(v: &Value, at: &str) -> Result<Vec<CounterStatus>, MachineError> {
    array_of(v, &format!("{at}.status"))?
        .iter()
        .map(|x| match x.as_str() {
            Some("zero") => Ok(CounterStatus::Zero),
            Some("nonzero") => Ok(CounterStatus::Nonzero),
            _ => Err(syntax(&format!("{at}.status entries must be \"zero\" or \"nonzero\""))),
        })
        .collect()
}

fn rational_of(v: &Value, at: &str) -> Result<Rational, MachineError> {
    match v {
        Value::String(s) => s
            .parse::<Rational>()
            .map_err(|e| syntax(&format!("{at}: {e}"))),
        Value::Integer(n) => Ok(Rational::int(*n)),
        _ => Err(syntax(&format!("{at} must be a \"p/q\" string or integer"))),
    }
}

fn matrix_of(v: &Value, at: &str) -> Result<QMatrix, MachineError> {
    let rows = array_of(v, at)?;
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let entries = array_of(row, &format!("{at}[{i}]"))?;
        let mut r = Vec::new();
        for (j, e) in entries.iter().enumerate() {
            r.push(rational_of(e, &format!("{at}[{i}][{j}]"))?);
        }
        out.push(r);
    }
    QMatrix::new(out).map_err(|e| syntax(&format!("{at}: {e}")))
}

fn action_of(
    t: &Table,
    at: &str,
    sig: &super::kind::StepSignature,
) -> Result<RawAction, MachineError> {
    if let Some(v) = t.get("restart") {
        match v {
            Value::Boolean(true) => return Ok(RawAction::restart()),
            Value::Boolean(false) => {}
            _ => return Err(syntax(&format!("{at}.restart must be a boolean"))),
        }
    }
    let next = match t.get("next") {
        Some(v) => Some(
            v.as_str()
                .ok_or_else(|| syntax(&format!("{at}.next must be a string")))?
                .to_string(),
        ),
        None => None,
    };
    let mv = match t.get("move") {
        Some(v) => {
            let s = v
                .as_str()
                .ok_or_else(|| syntax(&format!("{at}.move must be a string")))?;
            Move::parse(s).ok_or_else(|| {
                syntax(&format!("{at}.move must be \"left\", \"stay\" or \"right\""))
            })?
        }
        None => Move::Stay,
    };
    let deltas = match t.get("delta") {
        Some(v) => array_of(v, &format!("{at}.delta"))?
            .iter()
            .map(|x| match x {
                Value::Integer(n) if (-1..=1).contains(n) => Ok(*n as i8),
                _ => Err(syntax(&format!("{at}.delta entries must be -1, 0 or 1"))),
            })
            .collect::<Result<Vec<i8>, _>>()?,
        None => vec![0; sig.counters],
    };
    let pebble = match t.get("pebble") {
        Some(v) => match v.as_str() {
            Some("place") => PebbleAction::Place,
            Some("lift") => PebbleAction::Lift,
            Some("none") => PebbleAction::None,
            _ => return Err(syntax(&format!("{at}.pebble must be \"place\", \"lift\" or \"none\""))),
        },
        None => PebbleAction::None,
    };
    if next.is_none() {
        return Err(syntax(&format!("{at} needs next = \"<state>\" or restart = true")));
    }
    Ok(RawAction {
        restart: false,
        state: next,
        mv,
        deltas,
        pebble,
    })
}

// ---------------------------------------------------------------------------
// canonical printing
// ---------------------------------------------------------------------------

fn toml_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn fmt_action(
    spec: &MachineSpec,
    a: &Action,
    with_outcome: Option<usize>,
    with_p: Option<&Rational>,
) -> String {
    let mut fields = Vec::new();
    if let Some(o) = with_outcome {
        fields.push(format!("outcome = {o}"));
    }
    if let Some(p) = with_p {
        fields.push(format!("p = {}", toml_str(&p.to_string())));
    }
    match a {
        Action::Restart => fields.push("restart = true".to_string()),
        Action::Go {
            state,
            mv,
            deltas,
            pebble,
        } => {
            fields.push(format!("next = {}", toml_str(spec.state_name(*state))));
            fields.push(format!("move = {}", toml_str(mv.name())));
            if !deltas.is_empty() {
                let ds: Vec<String> = deltas.iter().map(|d| d.to_string()).collect();
                fields.push(format!("delta = [{}]", ds.join(", ")));
            }
            if *pebble != PebbleAction::None {
                let p = match pebble {
                    PebbleAction::Place => "place",
                    PebbleAction::Lift => "lift",
                    PebbleAction::None => unreachable!(),
                };
                fields.push(format!("pebble = {}", toml_str(p)));
            }
        }
    }
    format!("{{ {} }}", fields.join(", "))
}

fn fmt_key_fields(spec: &MachineSpec, out: &mut String, key: &super::spec::RowKey) {
    let _ = writeln!(out, "state = {}", toml_str(spec.state_name(key.state)));
    let _ = writeln!(out, "symbol = {}", toml_str(&key.symbol.to_string()));
    if !key.statuses.is_empty() {
        let ss: Vec<String> = key.statuses.iter().map(|s| toml_str(s.name())).collect();
        let _ = writeln!(out, "status = [{}]", ss.join(", "));
    }
    if let Some(p) = key.pebble {
        let _ = writeln!(out, "pebble_sense = {p}");
    }
}

/// Canonical text form of a validated spec. `parse_machine(print_machine(s))`
/// reproduces `s` exactly.
pub fn print_machine(spec: &MachineSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind = {}", toml_str(spec.kind().name()));
    let states: Vec<String> = spec.states().iter().map(|s| toml_str(s)).collect();
    let _ = writeln!(out, "states = [{}]", states.join(", "));
    let _ = writeln!(out, "accept = {}", toml_str(spec.state_name(spec.accept_state())));
    let _ = writeln!(out, "reject = {}", toml_str(spec.state_name(spec.reject_state())));
    let sigma: Vec<String> = spec
        .alphabet()
        .sigma()
        .iter()
        .map(|c| toml_str(&c.to_string()))
        .collect();
    let _ = writeln!(out, "sigma = [{}]", sigma.join(", "));
    if !spec.comm_alphabet().is_empty() {
        let ca: Vec<String> = spec
            .comm_alphabet()
            .iter()
            .map(|c| toml_str(&c.to_string()))
            .collect();
        let _ = writeln!(out, "comm_alphabet = [{}]", ca.join(", "));
    }
    for (&state, &emit) in &spec.comm {
        let _ = writeln!(out, "\n[[comm]]");
        let _ = writeln!(out, "state = {}", toml_str(spec.state_name(state)));
        let _ = writeln!(out, "emit = {}", toml_str(&emit.to_string()));
    }

    for (key, rhs) in spec.rows() {
        let _ = writeln!(out, "\n[[transitions]]");
        fmt_key_fields(spec, &mut out, key);
        match rhs {
            Rhs::Det(a) => match a {
                Action::Restart => {
                    let _ = writeln!(out, "restart = true");
                }
                Action::Go {
                    state,
                    mv,
                    deltas,
                    pebble,
                } => {
                    let _ = writeln!(out, "next = {}", toml_str(spec.state_name(*state)));
                    let _ = writeln!(out, "move = {}", toml_str(mv.name()));
                    if !deltas.is_empty() {
                        let ds: Vec<String> = deltas.iter().map(|d| d.to_string()).collect();
                        let _ = writeln!(out, "delta = [{}]", ds.join(", "));
                    }
                    if *pebble != PebbleAction::None {
                        let p = if *pebble == PebbleAction::Place { "place" } else { "lift" };
                        let _ = writeln!(out, "pebble = {}", toml_str(p));
                    }
                }
            },
            Rhs::Prob(list) => {
                let _ = writeln!(out, "outcomes = [");
                for (p, a) in list {
                    let _ = writeln!(out, "  {},", fmt_action(spec, a, None, Some(p)));
                }
                let _ = writeln!(out, "]");
            }
            Rhs::Nondet(list) => {
                let _ = writeln!(out, "choices = [");
                for a in list {
                    let _ = writeln!(out, "  {},", fmt_action(spec, a, None, None));
                }
                let _ = writeln!(out, "]");
            }
            Rhs::Quantum { outcomes, .. } => {
                let _ = writeln!(out, "actions = [");
                for (i, a) in outcomes.iter().enumerate() {
                    let _ = writeln!(out, "  {},", fmt_action(spec, a, Some(i + 1), None));
                }
                let _ = writeln!(out, "]");
            }
        }
    }

    if let Some(q) = spec.quantum() {
        let _ = writeln!(out, "\n[quantum]");
        let qs: Vec<String> = q.states.iter().map(|s| toml_str(s)).collect();
        let _ = writeln!(out, "states = [{}]", qs.join(", "));
        let _ = writeln!(out, "initial = {}", toml_str(&q.states[q.initial]));
        for (key, rhs) in spec.rows() {
            if let Rhs::Quantum { op, .. } = rhs {
                let _ = writeln!(out, "\n[[quantum.superoperators]]");
                fmt_key_fields(spec, &mut out, key);
                let _ = writeln!(out, "elements = [");
                for e in op.elements() {
                    let rows: Vec<String> = e
                        .rows()
                        .map(|r| {
                            let cells: Vec<String> =
                                r.iter().map(|x| toml_str(&x.to_string())).collect();
                            format!("[{}]", cells.join(", "))
                        })
                        .collect();
                    let _ = writeln!(out, "  [{}],", rows.join(", "));
                }
                let _ = writeln!(out, "]");
            }
        }
    }

    out
}
