//! Named test languages and their exact membership oracles, plus the base-2
//! word encoding used by the quantum comparison machines.

use num_bigint::BigUint;
use std::fmt;
use std::str::FromStr;

use super::BuiltinError;

/// Languages shipped as exact membership oracles. They drive tests and
/// black-box recognizers; none of them is decided probabilistically here.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Language {
    /// u#u over {a,b}
    Twin,
    /// u#v1#...#vk with some vi = u
    ExistTwin,
    /// b^(n^2), n >= 1
    USquare,
    /// a^n b^(n^2), n >= 1
    Square,
    /// uu over {a,b}
    SiamTwins,
    /// a^m b^n with m > n > 0
    Greater,
    /// a^m b^n with m > n^2 > 0
    GreaterSquare,
    /// a^m b^n c^p with m^4 > n^2 > p > 0
    Lapins,
    /// strings over {a,b} of odd length with b in the center
    Center,
    /// x = x1 b x2 = y1 b y2 with |x1| = |y2|
    Say,
}

impl Language {
    pub const ALL: [Language; 10] = [
        Language::Twin,
        Language::ExistTwin,
        Language::USquare,
        Language::Square,
        Language::SiamTwins,
        Language::Greater,
        Language::GreaterSquare,
        Language::Lapins,
        Language::Center,
        Language::Say,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Language::Twin => "TWIN",
            Language::ExistTwin => "EXIST-TWIN",
            Language::USquare => "USQUARE",
            Language::Square => "SQUARE",
            Language::SiamTwins => "SIAM-TWINS",
            Language::Greater => "GREATER",
            Language::GreaterSquare => "GREATER-SQUARE",
            Language::Lapins => "LAPINS",
            Language::Center => "CENTER",
            Language::Say => "SAY",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Language {
    type Err = BuiltinError;
    fn from_str(s: &str) -> Result<Self, BuiltinError> {
        Language::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| BuiltinError::UnknownLanguage(s.to_string()))
    }
}

/// The base-2 reading of `1u` with a -> 0 and b -> 1. Prepending the 1 makes
/// the encoding injective: u1 = u2 iff encode(u1) = encode(u2).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EncodedString {
    pub value: BigUint,
}

pub fn encode(u: &str) -> Result<EncodedString, BuiltinError> {
    let mut value = BigUint::from(1u32);
    for c in u.chars() {
        match c {
            'a' => value = &value * 2u32,
            'b' => value = &value * 2u32 + 1u32,
            other => return Err(BuiltinError::BadSymbol(other)),
        }
    }
    Ok(EncodedString { value })
}

/// Exact membership by direct definition.
pub fn membership(lang: Language, x: &str) -> bool {
    match lang {
        Language::Twin => match split_once_hash(x) {
            Some((u, v)) => is_ab(u) && u == v,
            None => false,
        },
        Language::ExistTwin => {
            let blocks: Vec<&str> = x.split('#').collect();
            blocks.len() >= 2
                && blocks.iter().all(|b| is_ab(b))
                && blocks[1..].iter().any(|v| *v == blocks[0])
        }
        Language::USquare => !x.is_empty() && x.chars().all(|c| c == 'b') && is_square(x.len()),
        Language::Square => match block_lengths(x, &['a', 'b']) {
            Some([m, n]) => m >= 1 && n == m * m,
            None => false,
        },
        Language::SiamTwins => {
            is_ab(x) && x.len() % 2 == 0 && x[..x.len() / 2] == x[x.len() / 2..]
        }
        Language::Greater => match block_lengths(x, &['a', 'b']) {
            Some([m, n]) => m > n && n > 0,
            None => false,
        },
        Language::GreaterSquare => match block_lengths(x, &['a', 'b']) {
            Some([m, n]) => n > 0 && m > n * n,
            None => false,
        },
        Language::Lapins => match block_lengths3(x) {
            Some([m, n, p]) => {
                let m = m as u128;
                let n = n as u128;
                let p = p as u128;
                p > 0 && m * m * m * m > n * n && n * n > p
            }
            None => false,
        },
        Language::Center => {
            is_ab(x) && x.len() % 2 == 1 && x.as_bytes()[x.len() / 2] == b'b'
        }
        Language::Say => {
            let b = x.as_bytes();
            is_ab(x)
                && (0..b.len()).any(|i| b[i] == b'b' && b[b.len() - 1 - i] == b'b')
        }
    }
}

fn is_ab(s: &str) -> bool {
    s.chars().all(|c| c == 'a' || c == 'b')
}

fn split_once_hash(x: &str) -> Option<(&str, &str)> {
    let mut it = x.split('#');
    let u = it.next()?;
    let v = it.next()?;
    if it.next().is_some() {
        return None; // more than one #
    }
    Some((u, v))
}

fn is_square(n: usize) -> bool {
    let r = (n as f64).sqrt().round() as usize;
    (r.saturating_sub(1)..=r + 1).any(|k| k * k == n)
}

/// Parses x as sym0^i sym1^j (either block possibly empty), or None if other
/// symbols or an interleaving appears.
fn block_lengths(x: &str, syms: &[char; 2]) -> Option<[usize; 2]> {
    let mut counts = [0usize; 2];
    let mut phase = 0usize;
    for c in x.chars() {
        let k = syms.iter().position(|&s| s == c)?;
        if k < phase {
            return None;
        }
        phase = k;
        counts[k] += 1;
    }
    Some(counts)
}

fn block_lengths3(x: &str) -> Option<[usize; 3]> {
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
    Some(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_examples() {
        assert_eq!(encode("").unwrap().value, 1u32.into());
        assert_eq!(encode("aa").unwrap().value, 4u32.into()); // 100
        assert_eq!(encode("ab").unwrap().value, 5u32.into()); // 101
        assert_eq!(encode("bb").unwrap().value, 7u32.into()); // 111
        assert!(encode("abc").is_err());
    }

    #[test]
    fn encoding_injective_on_short_words() {
        let mut seen = std::collections::HashSet::new();
        for len in 0..=6 {
            for i in 0..(1u32 << len) {
                let w: String = (0..len)
                    .map(|k| if i >> k & 1 == 1 { 'b' } else { 'a' })
                    .collect();
                assert!(seen.insert(encode(&w).unwrap().value), "collision at {w}");
            }
        }
    }

    #[test]
    fn membership_examples() {
        use Language::*;
        assert!(membership(Twin, "ab#ab"));
        assert!(!membership(Twin, "a#b"));
        assert!(!membership(Twin, "abab"));
        assert!(membership(ExistTwin, "ab#b#ab"));
        assert!(!membership(ExistTwin, "ab#b#a"));
        assert!(membership(USquare, &"b".repeat(9)));
        assert!(!membership(USquare, &"b".repeat(8)));
        assert!(membership(Square, "ab")); // n=1
        assert!(membership(Square, "aabbbb"));
        assert!(!membership(Square, "abb"));
        assert!(membership(SiamTwins, ""));
        assert!(membership(SiamTwins, "abab"));
        assert!(!membership(SiamTwins, "aab"));
        assert!(membership(Greater, "aab"));
        assert!(!membership(Greater, "ab"));
        assert!(membership(GreaterSquare, "aaaaabb")); // 5 > 4
        assert!(!membership(GreaterSquare, "aaaabb")); // 4 > 4 fails
        assert!(membership(Lapins, "aabbbcccccccc")); // 16 > 9 > 8 > 0
        assert!(!membership(Lapins, "abc")); // 1 > 1 fails
        assert!(membership(Center, "aba")); // center symbol is b
        assert!(membership(Center, "abb"));
        assert!(!membership(Center, "bab"));
        assert!(!membership(Center, "ab")); // even length
        assert!(membership(Say, "bb")); // x1="", y2="": both splits at a b
        assert!(!membership(Say, "ba"));
    }
}
