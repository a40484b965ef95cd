//! A minimal single-tape deterministic Turing machine, used only to drive the
//! configuration-length gadget.

use std::collections::BTreeMap;

use super::ProtocolError;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TapeMove {
    L,
    R,
}

/// One-tape DTM over a char tape alphabet. Configurations are rendered as
/// strings with a dedicated state character inserted immediately left of the
/// head cell, so `|c| = tape length + 1`.
#[derive(Clone, Debug)]
pub struct MiniDtm {
    /// One display character per state; must be disjoint from the tape
    /// alphabet.
    pub state_chars: Vec<char>,
    pub initial: usize,
    pub accept: usize,
    pub reject: usize,
    pub blank: char,
    pub tape_alphabet: Vec<char>,
    /// (state, scanned) -> (state', written, move); total on non-halting
    /// states.
    pub rules: BTreeMap<(usize, char), (usize, char, TapeMove)>,
}

impl MiniDtm {
    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.accept == self.reject {
            return Err(ProtocolError::ConfigError("accept and reject must differ".into()));
        }
        if !self.tape_alphabet.contains(&self.blank) {
            return Err(ProtocolError::ConfigError("blank must be in the tape alphabet".into()));
        }
        for c in &self.state_chars {
            if self.tape_alphabet.contains(c) {
                return Err(ProtocolError::ConfigError(format!(
                    "state char {c:?} collides with the tape alphabet"
                )));
            }
        }
        for s in 0..self.state_chars.len() {
            if s == self.accept || s == self.reject {
                continue;
            }
            for &t in &self.tape_alphabet {
                if !self.rules.contains_key(&(s, t)) {
                    return Err(ProtocolError::ConfigError(format!(
                        "missing rule ({s}, {t:?})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn config_string(&self, tape: &[char], head: usize, state: usize) -> String {
        let mut out = String::new();
        for (i, &c) in tape.iter().enumerate() {
            if i == head {
                out.push(self.state_chars[state]);
            }
            out.push(c);
        }
        out
    }

    /// The configurations of the halting run on `input`, starting with the
    /// initial one.
    pub fn run_configs(&self, input: &str, max_steps: usize) -> Result<Vec<String>, ProtocolError> {
        self.validate()?;
        let mut tape: Vec<char> = input.chars().collect();
        if tape.is_empty() {
            tape.push(self.blank);
        }
        for &c in &tape {
            if !self.tape_alphabet.contains(&c) {
                return Err(ProtocolError::ConfigError(format!("input symbol {c:?} not on tape")));
            }
        }
        let mut head = 0usize;
        let mut state = self.initial;
        let mut configs = vec![self.config_string(&tape, head, state)];
        for _ in 0..max_steps {
            if state == self.accept || state == self.reject {
                return Ok(configs);
            }
            let (s2, write, mv) = self.rules[&(state, tape[head])];
            tape[head] = write;
            state = s2;
            match mv {
                TapeMove::R => {
                    head += 1;
                    if head == tape.len() {
                        tape.push(self.blank);
                    }
                }
                TapeMove::L => head = head.saturating_sub(1),
            }
            configs.push(self.config_string(&tape, head, state));
        }
        Err(ProtocolError::NonHalting {
            cap: max_steps as u64,
        })
    }

    /// The length change of the successor configuration, computed from a
    /// configuration string alone: +1 exactly when the head sits on the last
    /// cell and the applicable rule moves right.
    pub fn expected_delta(&self, config: &str) -> Result<i8, ProtocolError> {
        let chars: Vec<char> = config.chars().collect();
        let pos = chars
            .iter()
            .position(|c| self.state_chars.contains(c))
            .ok_or_else(|| ProtocolError::MalformedStream("configuration without a state".into()))?;
        let state = self
            .state_chars
            .iter()
            .position(|c| *c == chars[pos])
            .unwrap();
        if state == self.accept || state == self.reject {
            return Ok(0);
        }
        let scanned = *chars
            .get(pos + 1)
            .ok_or_else(|| ProtocolError::MalformedStream("head cell missing".into()))?;
        let (_, _, mv) = self
            .rules
            .get(&(state, scanned))
            .ok_or_else(|| ProtocolError::MalformedStream(format!("no rule for {scanned:?}")))?;
        let at_end = pos + 2 == chars.len();
        Ok(if *mv == TapeMove::R && at_end { 1 } else { 0 })
    }

    /// The honest prover stream: configurations separated by `$$`.
    pub fn honest_stream(&self, input: &str, max_steps: usize) -> Result<String, ProtocolError> {
        Ok(self.run_configs(input, max_steps)?.join("$$"))
    }
}

/// A tiny demonstration machine: sweeps right flipping 0s to 1s, accepts at
/// the first blank. Its runs grow the tape by one cell at the end.
pub fn demo_dtm() -> MiniDtm {
    let mut rules = BTreeMap::new();
    // state 0 = sweep
    rules.insert((0, '0'), (0, '1', TapeMove::R));
    rules.insert((0, '1'), (0, '1', TapeMove::R));
    rules.insert((0, '_'), (1, '_', TapeMove::R));
    MiniDtm {
        state_chars: vec!['S', 'A', 'R'],
        initial: 0,
        accept: 1,
        reject: 2,
        blank: '_',
        tape_alphabet: vec!['0', '1', '_'],
        rules,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_run_and_deltas() {
        let m = demo_dtm();
        let configs = m.run_configs("01", 100).unwrap();
        assert_eq!(configs[0], "S01");
        assert_eq!(configs[1], "1S1");
        assert_eq!(configs[2], "11S_");
        assert_eq!(configs[3], "11_A_");
        for pair in configs.windows(2) {
            let d = m.expected_delta(&pair[0]).unwrap() as i64;
            assert_eq!(
                pair[1].chars().count() as i64,
                pair[0].chars().count() as i64 + d
            );
        }
    }
}
