//! Brute-force validators for the fast paths.
//!
//! Nothing here uses the coverage sieve: terms are found by testing each
//! candidate against the whole prefix, cover claims by enumerating every member
//! of the claimed set.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analyzer::{certify_with, CertifyOptions, IndependenceCertificate};
use crate::constructor::adk;
use crate::error::{Error, Result};
use crate::seq::{
    generate, is_three_free, jointly_covered_unchecked, GeneratedSequence, SeedSet, MAX_TERM,
};
use crate::triadic::Triadic;

/// S(seed) by the definition: each candidate is tested against the full prefix.
pub fn naive_generate(seed: &SeedSet, count: usize) -> Result<Vec<u64>> {
    if count < seed.len() {
        return Err(Error::Precondition(format!(
            "count {count} is smaller than the seed ({} elements)",
            seed.len()
        )));
    }
    let mut terms = seed.elements().to_vec();
    terms.reserve(count - terms.len());
    while terms.len() < count {
        let mut x = terms[terms.len() - 1] + 1;
        while jointly_covered_unchecked(x, &terms, &terms) {
            x += 1;
        }
        if x > MAX_TERM {
            return Err(Error::Resource {
                completed: terms.len(),
                reason: format!("next term exceeds 2^62 after {} terms", terms.len()),
            });
        }
        terms.push(x);
    }
    Ok(terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverPart {
    A,
    B,
    C,
    D,
    E,
}

impl CoverPart {
    pub const ALL: [CoverPart; 5] = [CoverPart::A, CoverPart::B, CoverPart::C, CoverPart::D, CoverPart::E];

    /// Parts (b) and (d) are about joint coverage and need a second offset `y > x`.
    pub fn is_joint(self) -> bool {
        matches!(self, CoverPart::B | CoverPart::D)
    }
}

impl fmt::Display for CoverPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CoverPart::A => "a",
            CoverPart::B => "b",
            CoverPart::C => "c",
            CoverPart::D => "d",
            CoverPart::E => "e",
        };
        f.write_str(s)
    }
}

impl FromStr for CoverPart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(CoverPart::A),
            "b" => Ok(CoverPart::B),
            "c" => Ok(CoverPart::C),
            "d" => Ok(CoverPart::D),
            "e" => Ok(CoverPart::E),
            _ => Err(Error::Input(format!("cover part must be one of a-e, got {s:?}"))),
        }
    }
}

/// One instance of the cover lemma: which part, and the offsets `x` (and `y`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverClaim {
    pub part: CoverPart,
    pub x: i64,
    pub y: Option<i64>,
}

/// A claimed set: `[low, high)` minus translated copies of `A_k` and `O(A)`,
/// plus one translated copy of `O(A)`.
///
/// Offsets are multiples of `c` plus `x` or `2y - x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedSet {
    pub low: i64,
    pub high: i64,
    pub excluded_prefix_offsets: Vec<i64>,
    pub excluded_obstruction_offset: i64,
    pub included_obstruction_offset: i64,
}

impl ExpectedSet {
    /// Every member, sorted.
    pub fn members(&self, prefix: &[u64], obstruction: &[u64]) -> Vec<i64> {
        let shifted = |set: &[u64], off: i64| -> Vec<i64> { set.iter().map(|&v| v as i64 + off).collect() };
        let mut excluded: Vec<i64> = self
            .excluded_prefix_offsets
            .iter()
            .flat_map(|&off| shifted(prefix, off))
            .chain(shifted(obstruction, self.excluded_obstruction_offset))
            .collect();
        excluded.sort_unstable();
        let mut out: Vec<i64> = (self.low..self.high)
            .filter(|v| excluded.binary_search(v).is_err())
            .chain(shifted(obstruction, self.included_obstruction_offset))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Translated copies of `A_k` that do the covering: `first` for parts (a), (c),
/// (e) and the `y`-values of joint parts, `second` for the `z`-values.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Coverers {
    first: Vec<i64>,
    second: Vec<i64>,
}

impl CoverClaim {
    /// The claimed set and the covering copies, for `c = a_{2^k}`.
    fn layout(&self, c: i64) -> Result<(ExpectedSet, Coverers)> {
        let x = self.x;
        let y = match (self.part.is_joint(), self.y) {
            (true, Some(y)) if y > x => Some(y),
            (true, Some(y)) => {
                return Err(Error::Precondition(format!("part ({}) needs x < y, got x={x}, y={y}", self.part)))
            }
            (true, None) => return Err(Error::Input(format!("part ({}) needs y", self.part))),
            (false, _) => None,
        };
        let set = |low: i64, width: i64, excluded_prefix: Vec<i64>| ExpectedSet {
            low,
            high: low + width,
            excluded_prefix_offsets: excluded_prefix,
            excluded_obstruction_offset: low,
            included_obstruction_offset: low + width,
        };
        Ok(match (self.part, y) {
            (CoverPart::A, _) => (
                set(x, c, vec![x]),
                Coverers { first: vec![x], second: vec![x] },
            ),
            (CoverPart::B, Some(y)) => (
                set(2 * y - x, c, vec![]),
                Coverers { first: vec![x], second: vec![y] },
            ),
            (CoverPart::C, _) => {
                let blocks = vec![x, x + c];
                (set(x, 3 * c, blocks.clone()), Coverers { first: blocks.clone(), second: blocks })
            }
            (CoverPart::D, Some(y)) => (
                set(2 * y - x, 3 * c, vec![]),
                Coverers {
                    first: vec![x, x + c],
                    second: vec![y, y + c],
                },
            ),
            (CoverPart::E, _) => {
                // The fourth block is A_k + 4c: part (e) is part (a) at k + 2.
                let blocks = vec![x, x + c, x + 3 * c, x + 4 * c];
                (set(x, 9 * c, blocks.clone()), Coverers { first: blocks.clone(), second: blocks })
            }
            _ => unreachable!("joint parts always carry y"),
        })
    }

    /// The claimed set for `c = a_{2^k}`, without checking it.
    pub fn expected_set(&self, c: u64) -> Result<ExpectedSet> {
        Ok(self.layout(c as i64)?.0)
    }
}

/// Prefix `A_k`, pivot `c`, and obstruction members after checking the lemma's hypotheses.
fn lemma_context<'a>(
    seq: &'a GeneratedSequence,
    cert: &IndependenceCertificate,
    k: u32,
) -> Result<(&'a [u64], u64, Vec<u64>)> {
    if k < cert.kappa {
        return Err(Error::Precondition(format!("k = {k} is below kappa = {}", cert.kappa)));
    }
    let len = 1usize << k;
    let needed = 4 * len;
    if seq.len() < needed {
        return Err(Error::NeedsMoreTerms {
            required: needed,
            available: seq.len(),
        });
    }
    let obstruction = seq.obstruction();
    let terms = seq.terms();
    let before = terms[len - 1] as i128;
    if before < cert.lambda as i128 + obstruction.omega as i128 {
        return Err(Error::Precondition(format!(
            "a_(2^k - 1) = {before} is below lambda + omega = {}",
            cert.lambda as i128 + obstruction.omega as i128
        )));
    }
    Ok((&terms[..len], terms[len], obstruction.members))
}

/// Checks one instance of the cover lemma by enumerating the claimed set.
pub fn check_cover_claim(
    seq: &GeneratedSequence,
    cert: &IndependenceCertificate,
    k: u32,
    claim: &CoverClaim,
) -> Result<bool> {
    let (prefix, c, obstruction) = lemma_context(seq, cert, k)?;
    let (expected, coverers) = claim.layout(c as i64)?;
    let members = expected.members(prefix, &obstruction);

    // Coverage is translation invariant: move the smallest value involved to 0.
    let shift = coverers
        .first
        .iter()
        .chain(&coverers.second)
        .copied()
        .chain(members.first().copied())
        .min()
        .unwrap_or(0);
    let build = |offsets: &[i64]| -> Vec<u64> {
        let mut v: Vec<u64> = offsets
            .iter()
            .flat_map(|&off| prefix.iter().map(move |&a| (a as i64 + off - shift) as u64))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let first = build(&coverers.first);
    let second = build(&coverers.second);
    Ok(members
        .iter()
        .all(|&m| jointly_covered_unchecked((m - shift) as u64, &first, &second)))
}

/// The sixteen block offsets of the main-proposition prefix, as `(multiple of c, multiple of d)`.
pub const MAIN_PREFIX_OFFSETS: [(i64, i64); 16] = [
    (0, 0),
    (1, 0),
    (7, 1),
    (8, 1),
    (10, 1),
    (11, 1),
    (17, 2),
    (18, 2),
    (30, 3),
    (31, 3),
    (37, 4),
    (38, 4),
    (40, 4),
    (41, 4),
    (47, 5),
    (48, 5),
];

/// Checks that the sixteen translated copies of `A_k` form a 3-free set equal to
/// the first `2^(k+4)` terms of `S(A^d_k)`, computed without the sieve.
pub fn check_main_prefix(
    seq: &GeneratedSequence,
    cert: &IndependenceCertificate,
    omega: i64,
    k: u32,
    d: i64,
) -> Result<bool> {
    let construction = adk(seq, cert, omega, k, d)?;
    let len = 1usize << k;
    let prefix = &seq.terms()[..len];
    let c = seq.terms()[len] as i64;
    let mut j: Vec<u64> = MAIN_PREFIX_OFFSETS
        .iter()
        .flat_map(|&(mc, md)| {
            let off = mc * c - md * d;
            prefix.iter().map(move |&a| (a as i64 + off) as u64)
        })
        .collect();
    j.sort_unstable();
    let distinct = j.windows(2).all(|w| w[0] < w[1]);
    if !distinct || !is_three_free(&j)? {
        return Ok(false);
    }
    let naive = naive_generate(&construction.seed, j.len())?;
    Ok(naive == j)
}

/// Measured against predicted parameters for one constructed seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub seed: SeedSet,
    pub horizon: usize,
    pub predicted_rho: Option<u64>,
    pub predicted_alpha: Triadic,
    pub measured_rho: Option<u64>,
    pub measured_alpha: Option<Triadic>,
    pub proven: bool,
    pub pass: bool,
    /// Why the check failed, when it did.
    pub note: Option<String>,
}

/// Generates `horizon` terms of `S(seed)`, certifies, and compares with the predictions.
///
/// Certification failures are reported, not returned as errors.
pub fn validate_construction(
    seed: &SeedSet,
    predicted_rho: Option<u64>,
    predicted_alpha: Triadic,
    horizon: usize,
) -> Result<ValidationReport> {
    let seq = generate(seed, horizon)?;
    let omega = seq.obstruction().omega;
    let cert = certify_with(&seq, omega, CertifyOptions { kmax: 62 })?;
    let mut report = ValidationReport {
        seed: seed.clone(),
        horizon,
        predicted_rho,
        predicted_alpha,
        measured_rho: cert.as_ref().map(|c| c.rho),
        measured_alpha: cert.as_ref().map(|c| c.alpha),
        proven: cert.as_ref().is_some_and(|c| c.proven),
        pass: false,
        note: None,
    };
    report.note = match &cert {
        None => Some(format!("no independence certificate within {horizon} terms")),
        Some(c) if !c.proven => Some("certificate not proven within the horizon".into()),
        Some(c) if predicted_rho.is_some_and(|r| r != c.rho) => {
            Some(format!("rho: predicted {}, measured {}", predicted_rho.unwrap_or(0), c.rho))
        }
        Some(c) if c.alpha != predicted_alpha => {
            Some(format!("alpha: predicted {predicted_alpha}, measured {}", c.alpha))
        }
        Some(_) => None,
    };
    report.pass = report.note.is_none();
    Ok(report)
}

/// A random 3-free seed containing 0 with elements in `[0, max_value]`.
///
/// Candidates are visited in random order and kept with probability `density`
/// when they keep the set 3-free.
pub fn random_seed<R: Rng>(rng: &mut R, max_value: u64, density: f64) -> SeedSet {
    let mut candidates: Vec<u64> = (1..=max_value).collect();
    candidates.shuffle(rng);
    let mut elems = vec![0u64];
    for x in candidates {
        if !rng.gen_bool(density) {
            continue;
        }
        let pos = elems.partition_point(|&e| e < x);
        elems.insert(pos, x);
        if !is_three_free(&elems).unwrap_or(false) {
            elems.remove(pos);
        }
    }
    SeedSet::new(elems).expect("built 3-free with 0")
}

/// `trials` random seeds from a ChaCha8 stream seeded with `rng_seed`.
///
/// Each seed draws its own density in `[0.05, 0.5)`, so the corpus mixes sparse
/// and dense seeds.
pub fn random_seeds(rng_seed: u64, trials: usize, max_value: u64) -> Vec<SeedSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    (0..trials)
        .map(|_| {
            let density = rng.gen_range(0.05..0.5);
            random_seed(&mut rng, max_value, density)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleMismatch {
    pub trial: usize,
    pub seed: SeedSet,
    pub index: usize,
    pub fast: u64,
    pub naive: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRunReport {
    pub rng_seed: u64,
    pub trials: usize,
    pub max_seed_value: u64,
    pub terms: usize,
    /// First differing term of each failing trial, by trial index.
    pub mismatches: Vec<OracleMismatch>,
}

impl OracleRunReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn compare_one(trial: usize, seed: &SeedSet, terms: usize) -> Result<Option<OracleMismatch>> {
    let fast = generate(seed, terms)?;
    let naive = naive_generate(seed, terms)?;
    Ok(fast
        .terms()
        .iter()
        .zip(&naive)
        .position(|(a, b)| a != b)
        .map(|index| OracleMismatch {
            trial,
            seed: seed.clone(),
            index,
            fast: fast.terms()[index],
            naive: naive[index],
        }))
}

/// Compares `generate` with [`naive_generate`] on `trials` random seeds.
///
/// Trials run on all available cores; the report is ordered by trial index.
pub fn oracle_equivalence(
    rng_seed: u64,
    trials: usize,
    max_seed_value: u64,
    terms: usize,
) -> Result<OracleRunReport> {
    let seeds = random_seeds(rng_seed, trials, max_seed_value);
    let terms = terms.max(seeds.iter().map(SeedSet::len).max().unwrap_or(1));
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(trials.max(1));
    let results: Vec<Result<Option<OracleMismatch>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let seeds = &seeds;
                scope.spawn(move || {
                    (w..seeds.len())
                        .step_by(workers)
                        .map(|i| (i, compare_one(i, &seeds[i], terms)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut all: Vec<_> = handles
            .into_iter()
            .flat_map(|h| h.join().expect("oracle worker panicked"))
            .collect();
        all.sort_by_key(|(i, _)| *i);
        all.into_iter().map(|(_, r)| r).collect()
    });
    let mut mismatches = Vec::new();
    for r in results {
        if let Some(m) = r? {
            mismatches.push(m);
        }
    }
    Ok(OracleRunReport {
        rng_seed,
        trials,
        max_seed_value,
        terms,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::certify;

    fn seed(v: &[u64]) -> SeedSet {
        SeedSet::new(v.to_vec()).unwrap()
    }

    fn certified(v: &[u64], n: usize) -> (GeneratedSequence, IndependenceCertificate) {
        let seq = generate(&seed(v), n).unwrap();
        let cert = certify(&seq).unwrap().unwrap();
        (seq, cert)
    }

    #[test]
    fn naive_examples() {
        assert_eq!(naive_generate(&SeedSet::zero(), 9).unwrap(), [0, 1, 3, 4, 9, 10, 12, 13, 27]);
        assert_eq!(naive_generate(&seed(&[0, 4]), 6).unwrap(), [0, 4, 5, 7, 11, 12]);
        assert!(matches!(naive_generate(&seed(&[0, 4]), 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn cover_examples() {
        let (seq, cert) = certified(&[0], 64);
        let a = CoverClaim { part: CoverPart::A, x: 0, y: None };
        assert!(check_cover_claim(&seq, &cert, 2, &a).unwrap());
        let expected = a.expected_set(9).unwrap().members(&[0, 1, 3, 4], &[]);
        assert_eq!(expected, [2, 5, 6, 7, 8]);

        let b = CoverClaim { part: CoverPart::B, x: 0, y: Some(9) };
        assert!(check_cover_claim(&seq, &cert, 2, &b).unwrap());
        assert_eq!(b.expected_set(9).unwrap().low, 18);
        assert_eq!(b.expected_set(9).unwrap().high, 27);

        let c = CoverClaim { part: CoverPart::C, x: 0, y: None };
        assert!(check_cover_claim(&seq, &cert, 2, &c).unwrap());
        assert_eq!(c.expected_set(9).unwrap().high, 27);
    }

    #[test]
    fn cover_claims_reject_bad_input() {
        let (seq, cert) = certified(&[0], 64);
        let b = CoverClaim { part: CoverPart::B, x: 3, y: Some(3) };
        assert!(matches!(check_cover_claim(&seq, &cert, 2, &b), Err(Error::Precondition(_))));
        let b = CoverClaim { part: CoverPart::B, x: 3, y: None };
        assert!(matches!(check_cover_claim(&seq, &cert, 2, &b), Err(Error::Input(_))));
        let short = generate(&SeedSet::zero(), 8).unwrap();
        let a = CoverClaim { part: CoverPart::A, x: 0, y: None };
        assert!(matches!(check_cover_claim(&short, &cert, 2, &a), Err(Error::NeedsMoreTerms { .. })));
    }

    #[test]
    fn a_wrong_claim_is_detected() {
        // The uncorrected fourth block A_k + 4 leaves members of part (e) uncovered.
        let (seq, cert) = certified(&[0], 256);
        let (prefix, c, obstruction) = lemma_context(&seq, &cert, 2).unwrap();
        let claim = CoverClaim { part: CoverPart::E, x: 0, y: None };
        let members = claim.expected_set(c).unwrap().members(prefix, &obstruction);
        let mut typo: Vec<u64> = [0, c, 3 * c, 4]
            .iter()
            .flat_map(|&off| prefix.iter().map(move |&a| a + off))
            .collect();
        typo.sort_unstable();
        typo.dedup();
        assert!(!members.iter().all(|&m| jointly_covered_unchecked(m as u64, &typo, &typo)));
        assert!(check_cover_claim(&seq, &cert, 2, &claim).unwrap());
    }

    #[test]
    fn main_prefix_examples() {
        let (seq, cert) = certified(&[0], 64);
        for (k, d) in [(2, 2), (2, 0), (3, 5)] {
            assert!(check_main_prefix(&seq, &cert, -1, k, d).unwrap(), "k={k} d={d}");
        }
        assert!(matches!(check_main_prefix(&seq, &cert, -1, 2, 10), Err(Error::Precondition(_))));
    }

    #[test]
    fn validation_examples() {
        let s = seed(&[0, 1, 3, 4, 9, 10, 12, 13, 61, 62, 64, 65, 70, 71, 73, 74]);
        let good = validate_construction(&s, Some(88), Triadic::new(88, 4), 1024).unwrap();
        assert!(good.pass, "{good:?}");
        let bad = validate_construction(&s, Some(87), Triadic::new(88, 4), 1024).unwrap();
        assert!(!bad.pass);
        assert_eq!(bad.measured_rho, Some(88));
        let prod = validate_construction(&seed(&[0, 1, 3, 4, 9, 10, 12, 13]), None, Triadic::ONE, 256).unwrap();
        assert!(prod.pass);
    }

    #[test]
    fn random_seeds_are_reproducible() {
        let a = random_seeds(7, 20, 50);
        assert_eq!(a, random_seeds(7, 20, 50));
        assert_ne!(a, random_seeds(8, 20, 50));
        assert!(a.iter().all(|s| s.max() <= 50));
        assert!(a.iter().any(|s| s.len() > 3));
    }

    #[test]
    fn small_equivalence_run() {
        let report = oracle_equivalence(1, 8, 30, 200).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches);
        assert_eq!(report.trials, 8);
    }
}
