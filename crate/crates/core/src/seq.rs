//! Greedy generation of Stanley sequences.
//!
//! A [`GeneratedSequence`] owns the terms produced so far together with a
//! coverage sieve: bit `x` is set once some pair of earlier terms `y < z`
//! satisfies `2z - y = x`. Appending a term `a` marks `2a - a_i` for every
//! earlier term, so the next term is simply the first clear bit above `a`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sieve::CoverageSieve;

/// Largest admissible term value. Keeps `2a` and `2z - y` inside `u64`.
pub const MAX_TERM: u64 = 1 << 62;

/// Default sieve memory cap, in MiB.
pub const DEFAULT_MEM_CAP_MB: usize = 2048;

/// Environment variable overriding [`DEFAULT_MEM_CAP_MB`].
pub const MEM_CAP_ENV: &str = "STANLEY_MEM_CAP_MB";

fn check_sorted(set: &[u64], what: &str) -> Result<()> {
    for w in set.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Input(format!(
                "{what} must be strictly increasing (found {} before {})",
                w[0], w[1]
            )));
        }
    }
    if let Some(&last) = set.last() {
        if last > MAX_TERM {
            return Err(Error::Input(format!("{what} value {last} exceeds 2^62")));
        }
    }
    Ok(())
}

/// Finds a 3-term AP in a sorted set, scanning outward from each middle element.
fn find_progression(set: &[u64]) -> Option<(u64, u64, u64)> {
    let n = set.len();
    for j in 1..n.saturating_sub(1) {
        let target = 2 * set[j] as u128;
        let (mut i, mut l) = (j as isize - 1, j + 1);
        while i >= 0 && l < n {
            let left = set[i as usize];
            match (left as u128 + set[l] as u128).cmp(&target) {
                std::cmp::Ordering::Less => l += 1,
                std::cmp::Ordering::Greater => i -= 1,
                std::cmp::Ordering::Equal => return Some((left, set[j], set[l])),
            }
        }
    }
    None
}

/// Returns true iff the sorted set contains no 3-term arithmetic progression.
pub fn is_three_free(set: &[u64]) -> Result<bool> {
    check_sorted(set, "set")?;
    Ok(find_progression(set).is_none())
}

/// Returns true iff `x = 2z - y` for some `y < z < x` drawn from `set`.
pub fn covered_by(x: u64, set: &[u64]) -> Result<bool> {
    jointly_covered(x, set, set)
}

/// Returns true iff `x = 2z - y` for some `y` in `s`, `z` in `t`, `y < z < x`.
pub fn jointly_covered(x: u64, s: &[u64], t: &[u64]) -> Result<bool> {
    check_sorted(s, "first set")?;
    check_sorted(t, "second set")?;
    Ok(jointly_covered_unchecked(x, s, t))
}

pub(crate) fn jointly_covered_unchecked(x: u64, s: &[u64], t: &[u64]) -> bool {
    let below = t.partition_point(|&z| z < x);
    t[..below].iter().any(|&z| {
        // z < x implies y < z; y must still be nonnegative.
        let twice = 2 * z as u128;
        twice >= x as u128 && s.binary_search(&((twice - x as u128) as u64)).is_ok()
    })
}

/// The `n`-th term of S(0): the binary digits of `n` read in base 3.
pub fn s0_term(n: u64) -> u128 {
    let mut value = 0u128;
    let mut place = 1u128;
    let mut rest = n;
    while rest != 0 {
        if rest & 1 == 1 {
            value += place;
        }
        rest >>= 1;
        if rest != 0 {
            place *= 3;
        }
    }
    value
}

/// A finite 3-free set of nonnegative integers starting at 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct SeedSet(Vec<u64>);

impl SeedSet {
    pub fn new(elements: Vec<u64>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Input("seed must not be empty".into()));
        }
        if elements[0] != 0 {
            return Err(Error::Input(format!(
                "seed must start at 0 (found {})",
                elements[0]
            )));
        }
        check_sorted(&elements, "seed")?;
        if let Some((x, y, z)) = find_progression(&elements) {
            return Err(Error::Input(format!(
                "seed is not 3-free: {x}, {y}, {z} is an arithmetic progression"
            )));
        }
        Ok(SeedSet(elements))
    }

    /// The single-element seed `{0}`.
    pub fn zero() -> Self {
        SeedSet(vec![0])
    }

    pub fn elements(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max(&self) -> u64 {
        *self.0.last().expect("seed is never empty")
    }

    pub fn into_inner(self) -> Vec<u64> {
        self.0
    }
}

impl TryFrom<Vec<u64>> for SeedSet {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        SeedSet::new(v)
    }
}

impl From<SeedSet> for Vec<u64> {
    fn from(s: SeedSet) -> Self {
        s.0
    }
}

impl FromStr for SeedSet {
    type Err = Error;

    /// Parses a comma separated list such as `0,1,7`.
    fn from_str(s: &str) -> Result<Self> {
        let elements = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<u64>()
                    .map_err(|_| Error::Input(format!("not a nonnegative integer: {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        SeedSet::new(elements)
    }
}

impl fmt::Display for SeedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Limits applied while growing a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    pub mem_cap_bytes: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            mem_cap_bytes: DEFAULT_MEM_CAP_MB << 20,
        }
    }
}

impl SieveConfig {
    /// Reads `STANLEY_MEM_CAP_MB`, falling back to the default.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MEM_CAP_ENV) {
            Ok(v) => {
                let mb: usize = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Input(format!("{MEM_CAP_ENV} must be an integer, got {v:?}")))?;
                Ok(SieveConfig {
                    mem_cap_bytes: mb.saturating_mul(1 << 20),
                })
            }
            Err(_) => Ok(SieveConfig::default()),
        }
    }
}

/// The first terms of S(A) together with the sieve needed to continue it.
#[derive(Debug, Clone)]
pub struct GeneratedSequence {
    seed: SeedSet,
    terms: Vec<u64>,
    sieve: CoverageSieve,
    config: SieveConfig,
}

/// Generates the first `count` terms of S(seed).
pub fn generate(seed: &SeedSet, count: usize) -> Result<GeneratedSequence> {
    GeneratedSequence::generate_with(seed, count, SieveConfig::default())
}

impl GeneratedSequence {
    pub fn generate_with(seed: &SeedSet, count: usize, config: SieveConfig) -> Result<Self> {
        if count < seed.len() {
            return Err(Error::Precondition(format!(
                "count {count} is smaller than the seed ({} elements)",
                seed.len()
            )));
        }
        let mut sieve = CoverageSieve::new();
        sieve
            .reserve_through(2 * seed.max() + 1, config.mem_cap_bytes)
            .map_err(|reason| Error::Resource { completed: 0, reason })?;
        let terms = seed.elements().to_vec();
        for (j, &z) in terms.iter().enumerate() {
            for &y in &terms[..j] {
                sieve.set(2 * z - y);
            }
        }
        let mut seq = GeneratedSequence {
            seed: seed.clone(),
            terms,
            sieve,
            config,
        };
        seq.extend(count - seed.len())?;
        Ok(seq)
    }

    /// Appends `additional` more greedy terms.
    ///
    /// On a resource error the terms produced before the cap was hit are kept.
    pub fn extend(&mut self, additional: usize) -> Result<()> {
        self.terms.reserve(additional);
        for _ in 0..additional {
            let last = *self.terms.last().expect("terms contain the seed");
            // 2*last + 1 is never covered, so the scan always terminates in range.
            let next = self.sieve.next_clear_after(last);
            if next > MAX_TERM {
                return Err(Error::Resource {
                    completed: self.terms.len(),
                    reason: format!("next term {next} exceeds 2^62"),
                });
            }
            self.sieve
                .reserve_through(2 * next + 1, self.config.mem_cap_bytes)
                .map_err(|reason| Error::Resource {
                    completed: self.terms.len(),
                    reason,
                })?;
            let twice = 2 * next;
            for &y in &self.terms {
                self.sieve.set(twice - y);
            }
            self.terms.push(next);
        }
        Ok(())
    }

    pub fn seed(&self) -> &SeedSet {
        &self.seed
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn seed_len(&self) -> usize {
        self.seed.len()
    }

    /// Term `n`, or a needs-more-terms error.
    pub fn term(&self, n: usize) -> Result<u64> {
        self.terms.get(n).copied().ok_or(Error::NeedsMoreTerms {
            required: n + 1,
            available: self.terms.len(),
        })
    }

    /// Sieve lookup: is `x` covered by two generated terms below it?
    ///
    /// Exact for every `x <= 2 * last term`; beyond that nothing is marked.
    pub fn is_covered(&self, x: u64) -> bool {
        self.sieve.get(x)
    }

    /// O(A) read off the sieve. Bits below `max(seed)` only depend on seed pairs.
    pub fn obstruction(&self) -> ObstructionReport {
        let seed = self.seed.elements();
        let members: Vec<u64> = (0..self.seed.max())
            .filter(|x| seed.binary_search(x).is_err() && !self.sieve.get(*x))
            .collect();
        ObstructionReport::from_members(members)
    }
}

/// The obstruction set O(A) and its maximum ω(A).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub members: Vec<u64>,
    /// `max(members)`, or -1 when O(A) is empty.
    pub omega: i64,
}

impl ObstructionReport {
    fn from_members(members: Vec<u64>) -> Self {
        let omega = members.last().map_or(-1, |&m| m as i64);
        ObstructionReport { members, omega }
    }
}

/// Integers below `max(seed)` that are neither seed elements nor covered by the seed.
///
/// Greedy terms beyond the seed cover everything they skip, so this is all of O(A).
pub fn obstruction_set(seed: &SeedSet) -> ObstructionReport {
    let elems = seed.elements();
    let limit = seed.max();
    let mut covered = CoverageSieve::new();
    covered
        .reserve_through(limit, usize::MAX)
        .expect("uncapped reservation");
    for (j, &z) in elems.iter().enumerate() {
        // Only pairs landing below max(seed) matter; 2z - y < limit iff y > 2z - limit.
        let start = match (2 * z).checked_sub(limit) {
            Some(floor) => elems[..j].partition_point(|&y| y <= floor),
            None => 0,
        };
        for &y in &elems[start..j] {
            covered.set(2 * z - y);
        }
    }
    let members = (0..limit)
        .filter(|x| elems.binary_search(x).is_err() && !covered.get(*x))
        .collect();
    ObstructionReport::from_members(members)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed(v: &[u64]) -> SeedSet {
        SeedSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn three_free_examples() {
        assert!(is_three_free(&[0, 1, 3, 4]).unwrap());
        assert!(!is_three_free(&[0, 1, 2]).unwrap());
        assert!(is_three_free(&[0, 1, 7, 8, 10]).unwrap());
        assert!(is_three_free(&[]).unwrap());
        assert!(!is_three_free(&[0, 5, 9, 10, 20]).unwrap());
        assert!(matches!(is_three_free(&[0, 3, 3]), Err(Error::Input(_))));
        assert!(matches!(is_three_free(&[4, 1]), Err(Error::Input(_))));
    }

    #[test]
    fn three_free_matches_triple_scan() {
        // Every subset of {0..11} containing 0.
        for mask in 0u32..(1 << 11) {
            let set: Vec<u64> = std::iter::once(0)
                .chain((1..12).filter(|b| mask >> (b - 1) & 1 == 1))
                .collect();
            let mut brute = true;
            for i in 0..set.len() {
                for j in i + 1..set.len() {
                    for l in j + 1..set.len() {
                        if set[i] + set[l] == 2 * set[j] {
                            brute = false;
                        }
                    }
                }
            }
            assert_eq!(is_three_free(&set).unwrap(), brute, "{set:?}");
        }
    }

    #[test]
    fn coverage_examples() {
        assert!(covered_by(2, &[0, 1]).unwrap());
        assert!(covered_by(9, &[0, 1, 7, 8]).unwrap());
        assert!(!covered_by(8, &[0, 1, 7]).unwrap());
        assert!(jointly_covered(4, &[0], &[2]).unwrap());
        assert!(!jointly_covered(4, &[2], &[0]).unwrap());
        assert!(jointly_covered(23, &[1], &[12]).unwrap());
        assert!(covered_by(1, &[1, 3]).is_ok_and(|c| !c));
    }

    #[test]
    fn seed_validation() {
        assert!(matches!(SeedSet::new(vec![]), Err(Error::Input(_))));
        assert!(matches!(SeedSet::new(vec![1, 2]), Err(Error::Input(_))));
        assert!(matches!(SeedSet::new(vec![0, 1, 2]), Err(Error::Input(_))));
        assert!(matches!(SeedSet::new(vec![0, 4, 4]), Err(Error::Input(_))));
        assert_eq!("0, 1,7".parse::<SeedSet>().unwrap(), seed(&[0, 1, 7]));
        assert!("0,x".parse::<SeedSet>().is_err());
        assert!("0,-1".parse::<SeedSet>().is_err());
        assert_eq!(seed(&[0, 1, 7]).to_string(), "0,1,7");
    }

    #[test]
    fn generate_examples() {
        let s0 = generate(&SeedSet::zero(), 9).unwrap();
        assert_eq!(s0.terms(), &[0, 1, 3, 4, 9, 10, 12, 13, 27]);
        assert_eq!(generate(&SeedSet::zero(), 1).unwrap().terms(), &[0]);
        assert_eq!(
            generate(&seed(&[0, 1, 7]), 5).unwrap().terms(),
            &[0, 1, 7, 8, 10]
        );
        assert_eq!(
            generate(&seed(&[0, 4]), 6).unwrap().terms(),
            &[0, 4, 5, 7, 11, 12]
        );
        assert!(matches!(
            generate(&seed(&[0, 1, 7]), 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn extend_continues_generation() {
        let mut s = generate(&SeedSet::zero(), 4).unwrap();
        s.extend(5).unwrap();
        assert_eq!(s.terms(), generate(&SeedSet::zero(), 9).unwrap().terms());
        let before = s.terms().to_vec();
        s.extend(0).unwrap();
        assert_eq!(s.terms(), &before[..]);
        let mut t = generate(&seed(&[0, 1, 7]), 3).unwrap();
        t.extend(2).unwrap();
        assert_eq!(t.terms(), &[0, 1, 7, 8, 10]);
    }

    #[test]
    fn memory_cap_reports_progress() {
        let cfg = SieveConfig { mem_cap_bytes: 64 };
        let mut s = GeneratedSequence::generate_with(&SeedSet::zero(), 1, cfg).unwrap();
        match s.extend(100) {
            Err(Error::Resource { completed, .. }) => {
                assert_eq!(completed, s.len());
                assert!(completed > 1 && completed < 101);
            }
            other => panic!("expected resource error, got {other:?}"),
        }
        assert!(is_three_free(s.terms()).unwrap());
    }

    #[test]
    fn s0_closed_form() {
        assert_eq!(s0_term(0), 0);
        assert_eq!(s0_term(7), 13);
        assert_eq!(s0_term(5), 10);
        let s = generate(&SeedSet::zero(), 6).unwrap();
        assert_eq!(s.terms()[5] as u128, s0_term(5));
        assert_eq!(s0_term(u64::MAX), (3u128.pow(64) - 1) / 2);
    }

    #[test]
    fn obstruction_examples() {
        let r = obstruction_set(&SeedSet::zero());
        assert_eq!((r.members.as_slice(), r.omega), (&[][..], -1));
        let r = obstruction_set(&seed(&[0, 4]));
        assert_eq!((r.members.as_slice(), r.omega), (&[1, 2, 3][..], 3));
        let r = obstruction_set(&seed(&[0, 1]));
        assert_eq!(r.omega, -1);
        // 2 is covered by 0,1; 3..=6 are not.
        let r = obstruction_set(&seed(&[0, 1, 7]));
        assert_eq!(r.members, vec![3, 4, 5, 6]);
        for s in [seed(&[0, 4]), seed(&[0, 1, 7]), seed(&[0, 2, 7, 9, 10])] {
            assert_eq!(obstruction_set(&s), generate(&s, s.len()).unwrap().obstruction());
        }
    }
}
