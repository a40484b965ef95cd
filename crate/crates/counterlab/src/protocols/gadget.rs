//! The configuration-length checking gadget.
//!
//! A prover streams a machine computation as configurations separated by
//! `$$`. The gadget measures each configuration length on a classical counter
//! and compares consecutive lengths against the delta that the configuration
//! itself determines (0 or +1 here). One of two parity choices is drawn per
//! round: compare pairs (1,2), (3,4), ... or pairs (2,3), (4,5), ...; a
//! single length lie always disturbs at least one compared pair. The initial
//! configuration's length is anchored against the input length directly, and
//! a prover that stops sending separators is flagged once the measured length
//! exceeds the expected one by more than the maximal growth.

use super::dtm::MiniDtm;
use super::ProtocolError;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParityChoice {
    /// Compare configurations (2i-1, 2i): load odd, check even.
    OddEven,
    /// Compare configurations (2i, 2i+1): load even, check odd.
    EvenOdd,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Role {
    Idle,
    Load,
    Check,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GadgetStatus {
    Running,
    /// A defect was detected (with the position and reason).
    Flagged(String),
    /// The stream ended cleanly (stream exhausted at a separator boundary).
    Clean,
}

/// One deterministic run of the gadget under a fixed parity choice. The
/// random part of the verifier is the equiprobable parity draw; callers
/// enumerate both branches or draw one.
pub struct GadgetRun<'a> {
    dtm: &'a MiniDtm,
    parity: ParityChoice,
    expected_first_len: i64,
    counter: i64,
    role: Role,
    config_index: usize,
    /// symbols of the configuration currently streaming
    current: String,
    current_len: i64,
    pending_delta: Option<i8>,
    separators_seen: u8,
    status: GadgetStatus,
    symbols_fed: u64,
}

impl<'a> GadgetRun<'a> {
    pub fn new(dtm: &'a MiniDtm, parity: ParityChoice, input_len: usize) -> Self {
        GadgetRun {
            dtm,
            parity,
            expected_first_len: input_len.max(1) as i64 + 1,
            counter: 0,
            role: match parity {
                ParityChoice::OddEven => Role::Load,
                ParityChoice::EvenOdd => Role::Idle,
            },
            config_index: 1,
            current: String::new(),
            current_len: 0,
            pending_delta: None,
            separators_seen: 0,
            status: GadgetStatus::Running,
            symbols_fed: 0,
        }
    }

    pub fn status(&self) -> &GadgetStatus {
        &self.status
    }

    pub fn parity(&self) -> ParityChoice {
        self.parity
    }

    pub fn symbols_fed(&self) -> u64 {
        self.symbols_fed
    }

    fn flag(&mut self, reason: String) {
        if self.status == GadgetStatus::Running {
            self.status = GadgetStatus::Flagged(format!(
                "config {} after {} symbols: {reason}",
                self.config_index, self.symbols_fed
            ));
        }
    }

    /// Feeds one cell symbol from the prover.
    pub fn feed(&mut self, sym: char) -> Result<(), ProtocolError> {
        if !matches!(self.status, GadgetStatus::Running) {
            return Ok(());
        }
        self.symbols_fed += 1;
        let config_char =
            self.dtm.tape_alphabet.contains(&sym) || self.dtm.state_chars.contains(&sym);
        if sym == '$' {
            self.separators_seen += 1;
            if self.separators_seen == 2 {
                self.end_of_config()?;
                self.separators_seen = 0;
            }
            return Ok(());
        }
        if !config_char {
            return Err(ProtocolError::MalformedStream(format!(
                "symbol {sym:?} outside the configuration alphabet"
            )));
        }
        if self.separators_seen == 1 {
            // single $ inside a configuration
            self.flag("lone separator".into());
            return Ok(());
        }
        self.current.push(sym);
        self.current_len += 1;
        match self.role {
            Role::Load => {
                self.counter += 1;
            }
            Role::Check => {
                self.counter -= 1;
                // growth per step is at most one cell; further symbols can
                // only mean the separator is being withheld
                if self.counter < -1 {
                    self.flag("measured length exceeds the expected length".into());
                }
            }
            Role::Idle => {}
        }
        // the initial configuration's length is known outright
        if self.config_index == 1 && self.current_len > self.expected_first_len {
            self.flag("initial configuration longer than the input".into());
        }
        Ok(())
    }

    fn end_of_config(&mut self) -> Result<(), ProtocolError> {
        if self.config_index == 1 && self.current_len != self.expected_first_len {
            self.flag(format!(
                "initial configuration has length {}, input fixes {}",
                self.current_len, self.expected_first_len
            ));
        }
        match self.role {
            Role::Check => {
                let d = self.pending_delta.take().unwrap_or(0);
                if self.counter + d as i64 != 0 {
                    self.flag(format!(
                        "length mismatch: off by {}",
                        -(self.counter + d as i64)
                    ));
                }
                self.counter = 0;
                self.role = Role::Load;
            }
            Role::Load => {
                // the delta to verify against comes from this configuration
                self.pending_delta = Some(self.dtm.expected_delta(&self.current)?);
                self.role = Role::Check;
            }
            Role::Idle => {
                self.role = Role::Load;
            }
        }
        self.config_index += 1;
        self.current.clear();
        self.current_len = 0;
        Ok(())
    }

    /// Declares the stream finished; a configuration still streaming is
    /// closed as if a separator followed.
    pub fn finish(&mut self) -> &GadgetStatus {
        if self.status == GadgetStatus::Running && !self.current.is_empty() {
            if self.end_of_config().is_err() {
                self.flag("malformed final configuration".into());
            }
        }
        if self.status == GadgetStatus::Running {
            self.status = GadgetStatus::Clean;
        }
        &self.status
    }
}

/// The gadget bound to one machine: runs streams under one or both parities.
pub struct LengthGadget<'a> {
    dtm: &'a MiniDtm,
}

impl<'a> LengthGadget<'a> {
    pub fn new(dtm: &'a MiniDtm) -> Self {
        LengthGadget { dtm }
    }

    pub fn run(&self, parity: ParityChoice, input_len: usize) -> GadgetRun<'a> {
        GadgetRun::new(self.dtm, parity, input_len)
    }

    /// Feeds a whole stream under one parity; true means flagged.
    pub fn flags_stream(
        &self,
        parity: ParityChoice,
        input_len: usize,
        stream: &str,
    ) -> Result<bool, ProtocolError> {
        let mut run = self.run(parity, input_len);
        for sym in stream.chars() {
            run.feed(sym)?;
            if matches!(run.status(), GadgetStatus::Flagged(_)) {
                return Ok(true);
            }
        }
        Ok(matches!(run.finish(), GadgetStatus::Flagged(_)))
    }

    /// Runs both parity branches; returns (odd-even flagged, even-odd
    /// flagged).
    pub fn check_both(
        &self,
        input_len: usize,
        stream: &str,
    ) -> Result<(bool, bool), ProtocolError> {
        Ok((
            self.flags_stream(ParityChoice::OddEven, input_len, stream)?,
            self.flags_stream(ParityChoice::EvenOdd, input_len, stream)?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::super::dtm::demo_dtm;
    use super::*;

    #[test]
    fn honest_streams_never_flagged() {
        let dtm = demo_dtm();
        let gadget = LengthGadget::new(&dtm);
        for input in ["0", "01", "110", "0000"] {
            let stream = dtm.honest_stream(input, 100).unwrap();
            let (a, b) = gadget.check_both(input.len(), &stream).unwrap();
            assert!(!a && !b, "honest stream for {input} flagged");
        }
    }

    #[test]
    fn single_length_lie_is_flagged_in_some_branch() {
        let dtm = demo_dtm();
        let gadget = LengthGadget::new(&dtm);
        let input = "010";
        let configs = dtm.run_configs(input, 100).unwrap();
        for lie_at in 0..configs.len() {
            for grow in [true, false] {
                let mut forged = configs.clone();
                if grow {
                    // insert a tape cell before the end
                    forged[lie_at].insert(0, dtm.blank);
                } else if forged[lie_at].chars().count() > 2 {
                    // drop the first cell that is not the state character
                    let mut removed = false;
                    let keep: String = forged[lie_at]
                        .chars()
                        .filter(|c| {
                            if !removed && !dtm.state_chars.contains(c) {
                                removed = true;
                                false
                            } else {
                                true
                            }
                        })
                        .collect();
                    forged[lie_at] = keep;
                } else {
                    continue;
                }
                let stream = forged.join("$$");
                let (a, b) = gadget.check_both(input.len(), &stream).unwrap();
                assert!(
                    a || b,
                    "lie at config {lie_at} (grow: {grow}) escaped both parities"
                );
            }
        }
    }

    #[test]
    fn withheld_separators_are_flagged() {
        let dtm = demo_dtm();
        let gadget = LengthGadget::new(&dtm);
        let input = "01";
        let configs = dtm.run_configs(input, 100).unwrap();
        // honest first config, then symbols forever without $$
        let stream = format!("{}$${}", configs[0], "1".repeat(40));
        let flagged = gadget
            .flags_stream(ParityChoice::OddEven, input.len(), &stream)
            .unwrap();
        assert!(flagged);
    }
}
