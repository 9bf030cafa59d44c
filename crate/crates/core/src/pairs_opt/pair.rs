use super::rational::{q, Rational};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Starting points for A/B words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "String")]
pub enum Seed {
    /// `(0, 1)`
    Trivial,
    /// `(1/2, 1/2) = B(0, 1)`
    VanDerCorput,
    /// `(1/6, 2/3) = AB(0, 1)`
    Classic,
    /// `(13/84 + ε, 55/84 + ε)`
    Bourgain,
    /// Heath-Brown's pair for `m ≥ 3`
    HeathBrown(u32),
    /// A pair supplied directly.
    Custom,
}

impl From<Seed> for String {
    fn from(s: Seed) -> String {
        s.to_string()
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seed::Trivial => write!(f, "trivial"),
            Seed::VanDerCorput => write!(f, "vdc"),
            Seed::Classic => write!(f, "classic"),
            Seed::Bourgain => write!(f, "bourgain"),
            Seed::HeathBrown(m) => write!(f, "hb:{m}"),
            Seed::Custom => write!(f, "custom"),
        }
    }
}

impl Seed {
    pub fn pair(self) -> Result<ExponentPair> {
        match self {
            Seed::Trivial => ExponentPair::seeded(Seed::Trivial, q(0, 1), q(1, 1), false),
            Seed::VanDerCorput => ExponentPair::seeded(Seed::VanDerCorput, q(1, 2), q(1, 2), false),
            Seed::Classic => ExponentPair::seeded(Seed::Classic, q(1, 6), q(2, 3), false),
            Seed::Bourgain => ExponentPair::seeded(Seed::Bourgain, q(13, 84), q(55, 84), true),
            Seed::HeathBrown(m) => heath_brown_pair(m),
            Seed::Custom => Err(Error::InvalidArgument("a custom seed has no fixed pair".into())),
        }
    }

    /// Parses a comma-separated seed list; `hb:a..b` expands to `hb:a`, ..., `hb:b`.
    pub fn parse_list(s: &str) -> Result<Vec<Seed>> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if let Some((a, b)) = item.strip_prefix("hb:").and_then(|r| r.split_once("..")) {
                let parse = |t: &str| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad Heath-Brown range '{item}'")));
                let (a, b) = (parse(a)?, parse(b)?);
                if a > b {
                    return Err(Error::Parse(format!("empty Heath-Brown range '{item}'")));
                }
                out.extend((a..=b).map(Seed::HeathBrown));
            } else {
                out.push(item.parse()?);
            }
        }
        Ok(out)
    }
}

impl FromStr for Seed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "trivial" => Ok(Seed::Trivial),
            "vdc" => Ok(Seed::VanDerCorput),
            "classic" => Ok(Seed::Classic),
            "bourgain" => Ok(Seed::Bourgain),
            t => match t.strip_prefix("hb:").map(str::parse::<u32>) {
                Some(Ok(m)) => Ok(Seed::HeathBrown(m)),
                _ => Err(Error::Parse(format!(
                    "unknown seed '{s}' (trivial|vdc|classic|bourgain|hb:<m>)"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Process {
    A,
    B,
}

/// An exponent pair `(k, ℓ)` with the word that produced it. The word is in
/// composition order: `"BA"` means `B(A(seed))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ExponentPair {
    pub k: Rational,
    pub l: Rational,
    /// The pair only holds as `(k + ε, ℓ + ε)`.
    pub eps_carrier: bool,
    pub seed: Seed,
    pub word: String,
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k, self.l)?;
        if self.eps_carrier {
            write!(f, " + ε")?;
        }
        Ok(())
    }
}

fn check_box(k: &Rational, l: &Rational) -> Result<()> {
    let half = q(1, 2);
    if k.is_negative() || *k > half || *l < half || *l > Rational::one() {
        return Err(Error::InvalidArgument(format!(
            "({k}, {l}) is outside 0 <= k <= 1/2 <= l <= 1"
        )));
    }
    Ok(())
}

impl ExponentPair {
    /// A pair given by its coordinates, with an empty word.
    pub fn new(k: Rational, l: Rational, eps_carrier: bool) -> Result<Self> {
        Self::seeded(Seed::Custom, k, l, eps_carrier)
    }

    fn seeded(seed: Seed, k: Rational, l: Rational, eps_carrier: bool) -> Result<Self> {
        check_box(&k, &l)?;
        Ok(ExponentPair {
            k,
            l,
            eps_carrier,
            seed,
            word: String::new(),
        })
    }

    /// Parses `k,l` (each `p/q`), for example `13/194,76/97`.
    pub fn parse_coordinates(s: &str, eps_carrier: bool) -> Result<Self> {
        let (k, l) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("pair '{s}' should read k,l")))?;
        Self::new(k.parse()?, l.parse()?, eps_carrier)
    }

    pub fn key(&self) -> (Rational, Rational) {
        (self.k.clone(), self.l.clone())
    }

    pub fn same_point(&self, other: &ExponentPair) -> bool {
        self.k == other.k && self.l == other.l
    }

    pub fn apply(&self, p: Process) -> ExponentPair {
        match p {
            Process::A => apply_a(self),
            Process::B => apply_b(self),
        }
    }

    /// Applies `word` (composition order) on top of this pair.
    pub fn apply_word(&self, word: &str) -> Result<ExponentPair> {
        let mut p = self.clone();
        for c in word.chars().rev() {
            p = match c {
                'A' | 'a' => apply_a(&p),
                'B' | 'b' => apply_b(&p),
                _ => return Err(Error::Parse(format!("word '{word}' may only contain A and B"))),
            };
        }
        Ok(p)
    }

    /// Recomputes the pair from its seed and word.
    pub fn replay(&self) -> Result<ExponentPair> {
        match self.seed {
            Seed::Custom => Err(Error::InvalidArgument("custom pairs cannot be replayed".into())),
            s => s.pair()?.apply_word(&self.word),
        }
    }
}

/// `A(k, ℓ) = (k/(2k+2), (k+ℓ+1)/(2k+2))`.
pub fn apply_a(p: &ExponentPair) -> ExponentPair {
    let d = &p.k * Rational::int(2) + Rational::int(2);
    ExponentPair {
        k: &p.k / &d,
        l: (&p.k + &p.l + Rational::one()) / &d,
        eps_carrier: p.eps_carrier,
        seed: p.seed,
        word: format!("A{}", p.word),
    }
}

/// `B(k, ℓ) = (ℓ − 1/2, k + 1/2)`.
pub fn apply_b(p: &ExponentPair) -> ExponentPair {
    let half = q(1, 2);
    ExponentPair {
        k: &p.l - &half,
        l: &p.k + &half,
        eps_carrier: p.eps_carrier,
        seed: p.seed,
        word: format!("B{}", p.word),
    }
}

/// `(2/((m−1)²(m+2)), 1 − (3m−2)/(m(m−1)(m+2)))`, holding up to `+ε`.
pub fn heath_brown_pair(m: u32) -> Result<ExponentPair> {
    if m < 3 {
        return Err(Error::InvalidArgument(format!("Heath-Brown pair needs m >= 3, got {m}")));
    }
    let m = i64::from(m);
    let k = q(2, (m - 1) * (m - 1) * (m + 2));
    let l = Rational::one() - q(3 * m - 2, m * (m - 1) * (m + 2));
    ExponentPair::seeded(Seed::HeathBrown(m as u32), k, l, true)
}

pub const MAX_DEPTH: u32 = 20;

/// Every distinct pair reachable from `seeds` by words of length ≤ `depth`,
/// sorted by `(k, ℓ)`. Each point keeps the shortest word that reaches it,
/// ties broken by seed order and then by word.
pub fn enumerate_pairs(seeds: &[ExponentPair], depth: u32) -> Result<Vec<ExponentPair>> {
    if depth > MAX_DEPTH {
        return Err(Error::Budget {
            what: "depth",
            requested: u64::from(depth),
            limit: u64::from(MAX_DEPTH),
        });
    }
    let mut seen: BTreeMap<(Rational, Rational), ExponentPair> = BTreeMap::new();
    let mut frontier = Vec::new();
    for s in seeds {
        if !seen.contains_key(&s.key()) {
            seen.insert(s.key(), s.clone());
            frontier.push(s.clone());
        }
    }
    for _ in 0..depth {
        let next: Vec<ExponentPair> = frontier
            .par_iter()
            .flat_map_iter(|p| [apply_a(p), apply_b(p)])
            .collect();
        frontier = Vec::new();
        for p in next {
            if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(p.key()) {
                e.insert(p.clone());
                frontier.push(p);
            }
        }
        if frontier.is_empty() {
            break;
        }
    }
    Ok(seen.into_values().collect())
}
