//! Recognizers built around black-box machines.
//!
//! These are runnable systems rather than compiled specs: the embedded
//! recognizer is consulted through its error contract, and the counter/pebble
//! choreography that prepares its virtual input is replayed symbol by symbol
//! so the fed input can be audited exactly.

use crate::builtin::{BlackBoxRecognizer, ErrorKind, Language};
use crate::engines::{Child, EngineError, System};
use crate::exactmath::Rational;

use super::ConstructionError;

// ---------------------------------------------------------------------------
// unary squares via an a^n b^(n^2) recognizer
// ---------------------------------------------------------------------------

/// Recognizes b^(n^2) by iteratively splitting the input as b^i b^(|x|-i)
/// with the counter and feeding the virtual input a^i b^|x| to a black box
/// for a^n b^(n^2); terminal acceptance weight is exactly (1/3)^(2|x|).
pub struct USquareRecognizer {
    bb: BlackBoxRecognizer,
}

impl USquareRecognizer {
    pub fn new(bb: BlackBoxRecognizer) -> Result<Self, ConstructionError> {
        if bb.language() != Language::Square || bb.error_kind() != ErrorKind::NegativeOneSided {
            return Err(ConstructionError::BadBlackBox(
                "needs a negative-one-sided recognizer for SQUARE".into(),
            ));
        }
        Ok(USquareRecognizer { bb })
    }

    /// The virtual input for split i, replayed through the counter
    /// choreography: the first i squares are read as a's, then the whole
    /// block as b's.
    pub fn virtual_input(&self, input_len: usize, i: usize) -> String {
        let mut out = String::new();
        let mut counter = i;
        let mut pos = 0;
        while counter > 0 && pos < input_len {
            out.push('a');
            counter -= 1;
            pos += 1;
        }
        for _ in 0..input_len {
            out.push('b');
        }
        out
    }

    pub fn system<'a>(&'a self, input: &'a str) -> Result<USquareSystem<'a>, ConstructionError> {
        Ok(USquareSystem {
            rec: self,
            len: input.chars().count(),
            input,
        })
    }
}

pub struct USquareSystem<'a> {
    rec: &'a USquareRecognizer,
    input: &'a str,
    len: usize,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum USqConfig {
    Format(usize),
    Split(usize),
    Terminal,
}

impl System for USquareSystem<'_> {
    type Config = USqConfig;

    fn initial(&self) -> USqConfig {
        USqConfig::Format(0)
    }

    fn step(&self, c: &USqConfig) -> Result<Vec<(Rational, Child<USqConfig>)>, EngineError> {
        let one = Rational::one;
        Ok(match c {
            USqConfig::Format(i) => {
                if *i < self.len {
                    if self.input.as_bytes()[*i] == b'b' {
                        vec![(one(), Child::Config(USqConfig::Format(i + 1)))]
                    } else {
                        vec![(one(), Child::Reject)]
                    }
                } else if self.len == 0 {
                    vec![(one(), Child::Reject)]
                } else {
                    vec![(one(), Child::Config(USqConfig::Split(1)))]
                }
            }
            USqConfig::Split(i) => {
                let virt = self.rec.virtual_input(self.len, *i);
                let (p_acc, p_rej) = self.rec.bb.decision_distribution(&virt);
                let mut children = Vec::new();
                if !p_acc.is_zero() {
                    children.push((p_acc, Child::Config(USqConfig::Terminal)));
                }
                if !p_rej.is_zero() {
                    let next = if *i == self.len {
                        Child::Reject
                    } else {
                        Child::Config(USqConfig::Split(i + 1))
                    };
                    children.push((p_rej, next));
                }
                children
            }
            USqConfig::Terminal => {
                let q = Rational::ratio(1, 3).pow(2 * self.len as u32);
                vec![
                    (q.clone(), Child::Accept),
                    (Rational::one() - q, Child::Config(USqConfig::Format(0))),
                ]
            }
        })
    }
}

// ---------------------------------------------------------------------------
// a^m b^n with m > n^2, via a pebble-replayed GREATER black box
// ---------------------------------------------------------------------------

/// Recognizes a^m b^n with m > n^2 > 0 by replaying the b block n times with
/// the pebble, presenting a^m b^(n^2) to a bounded-error GREATER black box;
/// the decision is the black box's decision.
pub struct GreaterSquareRecognizer {
    bb: BlackBoxRecognizer,
}

impl GreaterSquareRecognizer {
    pub fn new(bb: BlackBoxRecognizer) -> Result<Self, ConstructionError> {
        if bb.language() != Language::Greater || bb.error_kind() != ErrorKind::Bounded {
            return Err(ConstructionError::BadBlackBox(
                "needs a bounded-error recognizer for GREATER".into(),
            ));
        }
        Ok(GreaterSquareRecognizer { bb })
    }

    pub fn epsilon(&self) -> &Rational {
        self.bb.epsilon()
    }

    /// Parses a^m b^n (m, n >= 1) and replays the pebble choreography: one
    /// pass over the a block, then n passes over the b block (the pebble
    /// advances one square per pass). Returns the exact symbol sequence fed
    /// to the black box.
    pub fn virtual_input(&self, input: &str) -> Option<String> {
        let (m, n) = parse_two_blocks(input, 'a', 'b')?;
        if m == 0 || n == 0 {
            return None;
        }
        let mut out = String::new();
        for _ in 0..m {
            out.push('a');
        }
        for _pebble_pos in 1..=n {
            for _ in 0..n {
                out.push('b');
            }
        }
        Some(out)
    }

    /// Exact decision distribution on one input: (accept, reject).
    pub fn decision_distribution(&self, input: &str) -> (Rational, Rational) {
        match self.virtual_input(input) {
            None => (Rational::zero(), Rational::one()),
            Some(v) => self.bb.decision_distribution(&v),
        }
    }

    pub fn system<'a>(&'a self, input: &'a str) -> GreaterSquareSystem<'a> {
        GreaterSquareSystem { rec: self, input }
    }
}

pub struct GreaterSquareSystem<'a> {
    rec: &'a GreaterSquareRecognizer,
    input: &'a str,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum OneShotConfig {
    Start,
    Call(u8),
}

impl System for GreaterSquareSystem<'_> {
    type Config = OneShotConfig;

    fn initial(&self) -> OneShotConfig {
        OneShotConfig::Start
    }

    fn step(&self, c: &OneShotConfig) -> Result<Vec<(Rational, Child<OneShotConfig>)>, EngineError> {
        match c {
            OneShotConfig::Start => Ok(vec![(Rational::one(), Child::Config(OneShotConfig::Call(1)))]),
            OneShotConfig::Call(_) => {
                let (p_acc, p_rej) = self.rec.decision_distribution(self.input);
                let mut out = Vec::new();
                if !p_acc.is_zero() {
                    out.push((p_acc, Child::Accept));
                }
                if !p_rej.is_zero() {
                    out.push((p_rej, Child::Reject));
                }
                Ok(out)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// a^m b^n c^p with m^4 > n^2 > p, by two reductions through the above
// ---------------------------------------------------------------------------

/// Recognizes a^m b^n c^p with m^4 > n^2 > p > 0 via two calls to the
/// a^m b^n (m > n^2) recognizer:
/// m^4 > n^2 is decided on a^(m^4) b^n, and n^2 > p is the negation of the
/// decision on a^(p+1) b^n.
pub struct LapinsRecognizer {
    gsq: GreaterSquareRecognizer,
}

impl LapinsRecognizer {
    pub fn new(gsq: GreaterSquareRecognizer) -> Self {
        LapinsRecognizer { gsq }
    }

    /// The two reduction inputs, recorded for audit. None if the input is not
    /// a^+ b^+ c^+ or too large to replay.
    pub fn reduction_inputs(&self, input: &str) -> Option<(String, String)> {
        let (m, n, p) = parse_three_blocks(input)?;
        if m == 0 || n == 0 || p == 0 || m > 32 {
            return None;
        }
        let m4 = m * m * m * m;
        let red1 = format!("{}{}", "a".repeat(m4), "b".repeat(n));
        let red2 = format!("{}{}", "a".repeat(p + 1), "b".repeat(n));
        Some((red1, red2))
    }

    pub fn system<'a>(&'a self, input: &'a str) -> LapinsSystem<'a> {
        LapinsSystem { rec: self, input }
    }
}

pub struct LapinsSystem<'a> {
    rec: &'a LapinsRecognizer,
    input: &'a str,
}

impl System for LapinsSystem<'_> {
    type Config = OneShotConfig;

    fn initial(&self) -> OneShotConfig {
        OneShotConfig::Start
    }

    fn step(&self, c: &OneShotConfig) -> Result<Vec<(Rational, Child<OneShotConfig>)>, EngineError> {
        let Some((red1, red2)) = self.rec.reduction_inputs(self.input) else {
            return Ok(vec![(Rational::one(), Child::Reject)]);
        };
        Ok(match c {
            OneShotConfig::Start => {
                // first reduction: m^4 > n^2
                let (p_acc, p_rej) = self.rec.gsq.decision_distribution(&red1);
                let mut out = Vec::new();
                if !p_acc.is_zero() {
                    out.push((p_acc, Child::Config(OneShotConfig::Call(2))));
                }
                if !p_rej.is_zero() {
                    out.push((p_rej, Child::Reject));
                }
                out
            }
            OneShotConfig::Call(_) => {
                // second reduction, negated: accept iff NOT (p+1 > n^2)
                let (p_acc, p_rej) = self.rec.gsq.decision_distribution(&red2);
                let mut out = Vec::new();
                if !p_acc.is_zero() {
                    out.push((p_acc, Child::Reject));
                }
                if !p_rej.is_zero() {
                    out.push((p_rej, Child::Accept));
                }
                out
            }
        })
    }
}

fn parse_two_blocks(x: &str, s0: char, s1: char) -> Option<(usize, usize)> {
    let mut counts = (0usize, 0usize);
    let mut phase = 0;
    for c in x.chars() {
        if c == s0 && phase == 0 {
            counts.0 += 1;
        } else if c == s1 {
            phase = 1;
            counts.1 += 1;
        } else {
            return None;
        }
    }
    Some(counts)
}

fn parse_three_blocks(x: &str) -> Option<(usize, usize, usize)> {
    let syms = ['a', 'b', 'c'];
    let mut counts = [0usize; 3];
    let mut phase = 0usize;
    for c in x.chars() {
        let k = syms.iter().position(|&s| s == c)?;
        if k < phase {
            return None;
        }
        phase = k;
        counts[k] += 1;
    }
    Some((counts[0], counts[1], counts[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::{round_absorption, AbsorbOptions};

    fn square_bb() -> BlackBoxRecognizer {
        BlackBoxRecognizer::new(
            Language::Square,
            ErrorKind::NegativeOneSided,
            Rational::ratio(1, 3),
            11,
        )
        .unwrap()
    }

    fn greater_bb() -> BlackBoxRecognizer {
        BlackBoxRecognizer::new(Language::Greater, ErrorKind::Bounded, Rational::ratio(1, 4), 5)
            .unwrap()
    }

    #[test]
    fn usquare_members_accepted_in_the_limit() {
        let rec = USquareRecognizer::new(square_bb()).unwrap();
        let input = "bbbb"; // 4 = 2^2
        let sys = rec.system(input).unwrap();
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        assert!(round.reject.is_zero());
        let totals = round.totals().unwrap();
        assert!(totals.accept_lo.is_one());
    }

    #[test]
    fn usquare_nonmembers_reject_dominantly() {
        let rec = USquareRecognizer::new(square_bb()).unwrap();
        let sys = rec.system("bbb").unwrap();
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        // every split rejects with >= 2/3; round reject weight >= (2/3)^|x|
        assert!(round.reject >= Rational::ratio(2, 3).pow(3));
        assert!(round.accept <= Rational::ratio(1, 3).pow(6));
        let totals = round.totals().unwrap();
        assert!(totals.reject_lo > Rational::ratio(99, 100));
    }

    #[test]
    fn usquare_rejects_empty_and_nonunary() {
        let rec = USquareRecognizer::new(square_bb()).unwrap();
        for input in ["", "ab"] {
            let sys = rec.system(input).unwrap();
            let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
            assert!(round.reject.is_one(), "{input:?}");
        }
    }

    #[test]
    fn greater_square_recorder_feeds_exact_replays() {
        let rec = GreaterSquareRecognizer::new(greater_bb()).unwrap();
        assert_eq!(rec.virtual_input("aab").unwrap(), "aab");
        assert_eq!(
            rec.virtual_input("aaaaabb").unwrap(),
            format!("{}{}", "a".repeat(5), "b".repeat(4))
        );
        assert!(rec.virtual_input("ba").is_none());
        assert!(rec.virtual_input("aaa").is_none());
    }

    #[test]
    fn greater_square_decisions_follow_the_contract() {
        let rec = GreaterSquareRecognizer::new(greater_bb()).unwrap();
        // member: 5 > 4
        let (acc, _) = rec.decision_distribution("aaaaabb");
        assert_eq!(acc, Rational::ratio(3, 4));
        // nonmember: 4 > 4 fails
        let (acc, rej) = rec.decision_distribution("aaaabb");
        assert_eq!(acc, Rational::ratio(1, 4));
        assert_eq!(rej, Rational::ratio(3, 4));
    }

    #[test]
    fn lapins_reductions_and_decisions() {
        let rec = LapinsRecognizer::new(GreaterSquareRecognizer::new(greater_bb()).unwrap());
        // member: m=2, n=3, p=8: 16 > 9 > 8 > 0
        let input = format!("aa{}{}", "b".repeat(3), "c".repeat(8));
        let (red1, red2) = rec.reduction_inputs(&input).unwrap();
        assert_eq!(red1, format!("{}{}", "a".repeat(16), "b".repeat(3)));
        assert_eq!(red2, format!("{}{}", "a".repeat(9), "b".repeat(3)));
        let sys = rec.system(&input);
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        // both reductions answered correctly with probability 3/4 each
        assert_eq!(round.accept, Rational::ratio(9, 16));

        // nonmember: 1 > 1 fails
        let sys = rec.system("abc");
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        assert!(round.reject > Rational::ratio(1, 2));

        // malformed shapes are rejected outright
        let sys = rec.system("acb");
        let round = round_absorption(&sys, &AbsorbOptions::default()).unwrap();
        assert!(round.reject.is_one());
    }
}
