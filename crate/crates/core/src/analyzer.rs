//! Independence certificates and the structure they imply.
//!
//! A sequence is independent when, for every `k >= kappa`,
//! `a[2^k + i] = a[2^k] + a[i]` for `i < 2^k` and `a[2^k] = 2 a[2^k - 1] + 1 - lambda`.
//! Those two conditions at a single `k`, together with `a[2^k - 1] >= lambda + omega`,
//! already force them for all larger `k`; certificates witnessing that are marked
//! `proven`, the rest are window-limited evidence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::{s0_term, GeneratedSequence, SeedSet};
use crate::triadic::Triadic;

/// Default bound on the threshold index `kappa` searched by [`certify`].
pub const DEFAULT_KMAX: u32 = 12;

/// Result of testing the two independence conditions at one `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndependenceAt {
    pub lambda: i64,
    /// `a[2^k - 1] >= lambda + omega`: the conditions hold for every larger `k` too.
    pub proven: bool,
}

/// Tests both independence conditions at `k`.
///
/// Returns `None` when either condition fails. Needs `2^(k+1)` terms.
pub fn check_independence_at(
    seq: &GeneratedSequence,
    k: u32,
    omega: i64,
) -> Result<Option<IndependenceAt>> {
    let half = 1usize
        .checked_shl(k)
        .filter(|h| h.checked_mul(2).is_some())
        .ok_or_else(|| Error::Precondition(format!("k = {k} is too large")))?;
    let terms = seq.terms();
    if terms.len() < 2 * half {
        return Err(Error::NeedsMoreTerms {
            required: 2 * half,
            available: terms.len(),
        });
    }
    let pivot = terms[half];
    let repeats = (0..half).all(|i| terms[half + i] == pivot + terms[i]);
    if !repeats {
        return Ok(None);
    }
    let before = terms[half - 1] as i128;
    let lambda = 2 * before + 1 - pivot as i128;
    let lambda = i64::try_from(lambda)
        .map_err(|_| Error::Inconsistency(format!("lambda {lambda} overflows i64")))?;
    let proven = before >= lambda as i128 + omega as i128;
    Ok(Some(IndependenceAt { lambda, proven }))
}

/// The Type-1 fingerprint of an independent sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceCertificate {
    pub seed: SeedSet,
    pub horizon: usize,
    pub kappa: u32,
    pub lambda: i64,
    /// `a[2^kappa]`.
    pub rho: u64,
    /// `rho / 3^kappa`.
    pub alpha: Triadic,
    pub proven: bool,
    /// Smallest `k` at which the sufficient condition was witnessed.
    #[serde(skip)]
    pub certifying_k: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Largest `kappa` accepted.
    pub kmax: u32,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { kmax: DEFAULT_KMAX }
    }
}

/// Certifies `seq` with the default options and ω read from its own sieve.
pub fn certify(seq: &GeneratedSequence) -> Result<Option<IndependenceCertificate>> {
    certify_with(seq, seq.obstruction().omega, CertifyOptions::default())
}

/// Finds the minimal `kappa` such that the independence conditions hold, with one
/// common `lambda`, at every `k` from `kappa` up to the largest testable `k`.
pub fn certify_with(
    seq: &GeneratedSequence,
    omega: i64,
    opts: CertifyOptions,
) -> Result<Option<IndependenceCertificate>> {
    let n = seq.len();
    if n < 2 {
        return Err(Error::NeedsMoreTerms {
            required: 2,
            available: n,
        });
    }
    // Largest k with 2^(k+1) <= n.
    let top = n.ilog2() - 1;
    let Some(first) = check_independence_at(seq, top, omega)? else {
        return Ok(None);
    };
    let lambda = first.lambda;
    let mut kappa = top;
    let mut certifying_k = first.proven.then_some(top);
    for k in (0..top).rev() {
        match check_independence_at(seq, k, omega)? {
            Some(at) if at.lambda == lambda => {
                kappa = k;
                if at.proven {
                    certifying_k = Some(k);
                }
            }
            _ => break,
        }
    }
    if kappa > opts.kmax {
        return Ok(None);
    }
    let rho = seq.terms()[1 << kappa];
    Ok(Some(IndependenceCertificate {
        seed: seq.seed().clone(),
        horizon: n,
        kappa,
        lambda,
        rho,
        alpha: Triadic::new(rho as i128, kappa),
        proven: certifying_k.is_some(),
        certifying_k,
    }))
}

/// `a_n = alpha * s_n + b[n mod 2^kappa]`, with `s_n` the terms of S(0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingDecomposition {
    pub alpha: Triadic,
    pub b: Vec<Triadic>,
    pub period: usize,
}

impl ScalingDecomposition {
    /// Reconstructs `a_n` from the decomposition.
    pub fn term(&self, n: u64) -> Triadic {
        self.alpha * Triadic::from_int(s0_term(n) as i128) + self.b[(n % self.period as u64) as usize]
    }
}

/// Computes the periodic residues and verifies them over the whole window.
pub fn scaling_decomposition(
    seq: &GeneratedSequence,
    cert: &IndependenceCertificate,
) -> Result<ScalingDecomposition> {
    let period = 1usize << cert.kappa;
    let terms = seq.terms();
    if terms.len() < period {
        return Err(Error::NeedsMoreTerms {
            required: period,
            available: terms.len(),
        });
    }
    let residue = |n: usize| {
        Triadic::from_int(terms[n] as i128) - cert.alpha * Triadic::from_int(s0_term(n as u64) as i128)
    };
    let b: Vec<Triadic> = (0..period).map(residue).collect();
    if let Some(n) = (period..terms.len()).find(|&n| residue(n) != b[n % period]) {
        return Err(Error::Inconsistency(format!(
            "a_{n} = {} does not match alpha * s_n + b[{}]",
            terms[n],
            n % period
        )));
    }
    if period > 1 {
        let half = period / 2;
        if (0..half).all(|i| b[i] == b[i + half]) {
            return Err(Error::Inconsistency(format!(
                "residues repeat with period {half}, so kappa = {} is not minimal",
                cert.kappa
            )));
        }
    }
    Ok(ScalingDecomposition {
        alpha: cert.alpha,
        b,
        period,
    })
}

/// Checks that the generated terms are exactly `{rho * x + y}` for `x` in S(0) and
/// `y` among the first `2^kappa` terms, on the window `[0, last term]`.
pub fn repeat_structure_check(seq: &GeneratedSequence, cert: &IndependenceCertificate) -> bool {
    let terms = seq.terms();
    let base_len = 1usize << cert.kappa;
    if terms.len() < base_len {
        return false;
    }
    let base = &terms[..base_len];
    let limit = *terms.last().expect("nonempty") as u128;
    let rho = cert.rho as u128;
    let mut expected = Vec::with_capacity(terms.len());
    // y < rho for every base element, so the values come out sorted by (x, y).
    for x in (0u64..).map(s0_term) {
        let offset = rho * x;
        if offset > limit {
            break;
        }
        expected.extend(
            base.iter()
                .map(|&y| offset + y as u128)
                .take_while(|&v| v <= limit),
        );
    }
    expected.len() == terms.len() && expected.iter().zip(terms).all(|(&e, &t)| e == t as u128)
}

/// Checks `a[2^(k+1)] = 3 a[2^k]` for every testable `k >= kappa`.
pub fn triple_growth_check(seq: &GeneratedSequence, cert: &IndependenceCertificate) -> Result<bool> {
    let terms = seq.terms();
    let required = (1usize << (cert.kappa + 1)) + 1;
    if terms.len() < required {
        return Err(Error::NeedsMoreTerms {
            required,
            available: terms.len(),
        });
    }
    let mut k = cert.kappa;
    while (1usize << (k + 1)) < terms.len() {
        if terms[1 << (k + 1)] as u128 != 3 * terms[1 << k] as u128 {
            return Ok(false);
        }
        k += 1;
    }
    Ok(true)
}

/// Indices `100 <= n < len` with `a_n > n^2 / 2`.
pub fn moy_violations(seq: &GeneratedSequence) -> Vec<(usize, u64)> {
    seq.terms()
        .iter()
        .enumerate()
        .skip(100)
        .filter(|&(n, &a)| 2 * a as u128 > (n as u128) * (n as u128))
        .map(|(n, &a)| (n, a))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{generate, obstruction_set};

    fn seq(seed: &[u64], n: usize) -> GeneratedSequence {
        generate(&SeedSet::new(seed.to_vec()).unwrap(), n).unwrap()
    }

    #[test]
    fn independence_at_examples() {
        let s0 = seq(&[0], 4);
        assert_eq!(
            check_independence_at(&s0, 1, -1).unwrap(),
            Some(IndependenceAt {
                lambda: 0,
                proven: true
            })
        );
        let lindhurst = seq(&[0, 4], 4);
        assert_eq!(check_independence_at(&lindhurst, 1, 3).unwrap(), None);
        let s017 = seq(&[0, 1, 7], 8);
        let omega = obstruction_set(s017.seed()).omega;
        let at = check_independence_at(&s017, 2, omega).unwrap().unwrap();
        assert_eq!(s017.terms()[4], 10);
        // a_3 = 8, a_4 = 10: lambda = 2*8 + 1 - 10 = 7; 8 >= 7 + 6 fails.
        assert_eq!(at, IndependenceAt { lambda: 7, proven: false });
        assert!(matches!(
            check_independence_at(&s017, 3, omega),
            Err(Error::NeedsMoreTerms { required: 16, available: 8 })
        ));
    }

    #[test]
    fn certify_classical_seeds() {
        let c = certify(&seq(&[0], 64)).unwrap().unwrap();
        assert_eq!((c.kappa, c.lambda, c.rho, c.alpha, c.proven), (0, 0, 1, Triadic::ONE, true));
        let c = certify(&seq(&[0, 9], 256)).unwrap().unwrap();
        assert_eq!((c.rho, c.alpha), (27, Triadic::ONE));
        let c = certify(&seq(&[0, 1, 7], 256)).unwrap().unwrap();
        assert_eq!(c.alpha, Triadic::new(10, 2));
        assert!(c.proven);
        assert!(matches!(
            certify(&seq(&[0], 1)),
            Err(Error::NeedsMoreTerms { .. })
        ));
    }

    #[test]
    fn kmax_bounds_kappa() {
        let s = seq(&[0, 81], 512);
        let c = certify(&s).unwrap().unwrap();
        assert_eq!(c.rho, 243);
        let tight = certify_with(&s, -1, CertifyOptions { kmax: c.kappa - 1 }).unwrap();
        assert!(tight.is_none());
    }

    #[test]
    fn decomposition_s0_and_s017() {
        let s0 = seq(&[0], 128);
        let c = certify(&s0).unwrap().unwrap();
        let d = scaling_decomposition(&s0, &c).unwrap();
        assert_eq!(d.b, vec![Triadic::ZERO]);

        let s = seq(&[0, 1, 7], 1024);
        let c = certify(&s).unwrap().unwrap();
        let d = scaling_decomposition(&s, &c).unwrap();
        assert_eq!(d.period, 4);
        // a = 0,1,7,8 and s = 0,1,3,4 with alpha = 10/9.
        let expected: Vec<Triadic> = ["0", "-1/9", "11/3", "32/9"]
            .iter()
            .map(|x| x.parse().unwrap())
            .collect();
        assert_eq!(d.b, expected);
        for n in (0..1024).step_by(7) {
            assert_eq!(d.term(n as u64), Triadic::from_int(s.terms()[n] as i128));
        }
    }

    #[test]
    fn decomposition_rejects_false_certificate() {
        let s = seq(&[0, 1, 7], 256);
        let mut c = certify(&s).unwrap().unwrap();
        c.kappa -= 1;
        c.rho = s.terms()[1 << c.kappa];
        c.alpha = Triadic::new(c.rho as i128, c.kappa);
        assert!(matches!(
            scaling_decomposition(&s, &c),
            Err(Error::Inconsistency(_))
        ));
    }

    #[test]
    fn repeat_structure() {
        let s0 = seq(&[0], 64);
        assert!(repeat_structure_check(&s0, &certify(&s0).unwrap().unwrap()));
        let s = seq(&[0, 9], 64);
        let c = certify(&s).unwrap().unwrap();
        assert!(repeat_structure_check(&s, &c));
        let mut wrong = c.clone();
        wrong.rho += 1;
        assert!(!repeat_structure_check(&s, &wrong));
    }

    #[test]
    fn tripling() {
        let s0 = seq(&[0], 1025);
        let c = certify(&s0).unwrap().unwrap();
        assert!(triple_growth_check(&s0, &c).unwrap());
        let s = seq(&[0, 1, 7], 64);
        assert_eq!((s.terms()[4], s.terms()[8]), (10, 30));
        let c = certify(&s).unwrap().unwrap();
        assert!(triple_growth_check(&s, &c).unwrap());
        let s = seq(&[0, 81], 256);
        let mut c = certify(&s).unwrap().unwrap();
        c.kappa = 0;
        assert!(!triple_growth_check(&s, &c).unwrap());
    }

    #[test]
    fn certificate_json_fields() {
        let c = certify(&seq(&[0, 1, 7], 64)).unwrap().unwrap();
        let v = serde_json::to_value(&c).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            ["alpha", "horizon", "kappa", "lambda", "proven", "rho", "seed"]
        );
        assert_eq!(v["alpha"], serde_json::json!({"num": 10, "den_pow3": 2}));
    }

    #[test]
    fn zero_two_repeats_from_kappa_one() {
        // S(0,2) = 3 S(0) + {0,2}, so both conditions already hold at k = 1.
        let seed = SeedSet::new(vec![0, 2]).unwrap();
        let naive = crate::oracle::naive_generate(&seed, 16).unwrap();
        assert_eq!(naive[..8], [0, 2, 3, 5, 9, 11, 12, 14]);
        let s = seq(&[0, 2], 256);
        assert_eq!(s.terms()[..16], naive[..]);
        let cert = certify(&s).unwrap().unwrap();
        assert_eq!((cert.kappa, cert.lambda, cert.rho), (1, 2, 3));
        assert_eq!(check_independence_at(&s, 0, -1).unwrap().map(|a| a.lambda), Some(-1));
    }

    #[test]
    fn two_times_power_of_three_from_k_two() {
        for k in 2..=4u32 {
            let s = seq(&[0, 2 * 3u64.pow(k - 1)], 1024);
            assert_eq!(certify(&s).unwrap().unwrap().rho, 3u64.pow(k + 1), "k = {k}");
        }
    }
}
