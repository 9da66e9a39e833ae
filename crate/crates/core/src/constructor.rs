//! Seeds for new independent sequences: the `⊗_k` product and the
//! interpolating `A^d_k` construction.
//!
//! Both take a certified sequence S(A) and its prefix `A_k = {a_0, ..., a_{2^k - 1}}`
//! together with `c = a_{2^k}`.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::analyzer::{certify_with, CertifyOptions, IndependenceCertificate};
use crate::error::{Error, Result};
use crate::seq::{GeneratedSequence, ObstructionReport, SeedSet, SieveConfig};
use crate::triadic::Triadic;

/// A generated sequence with a proven certificate and its obstruction set.
#[derive(Debug, Clone)]
pub struct CertifiedSeed {
    pub seq: GeneratedSequence,
    pub cert: IndependenceCertificate,
    pub obstruction: ObstructionReport,
}

/// Largest horizon [`CertifiedSeed::materialize`] tries before giving up.
pub const MAX_CERTIFY_HORIZON: usize = 1 << 18;

impl CertifiedSeed {
    /// Generates and certifies `S(seed)`, doubling the horizon until the certificate
    /// is proven or `max_horizon` is reached.
    ///
    /// The first horizon is twice the seed size rounded up to a power of two,
    /// enough to certify seeds that are exactly one period long.
    pub fn materialize(seed: &SeedSet, max_horizon: usize) -> Result<Self> {
        let max_horizon = max_horizon.max(seed.len());
        let mut horizon = (2 * seed.len().next_power_of_two()).clamp(64, max_horizon);
        let opts = CertifyOptions { kmax: 62 };
        let mut seq = GeneratedSequence::generate_with(seed, horizon, SieveConfig::from_env()?)?;
        // The generation sieve already holds every pair of seed elements.
        let obstruction = seq.obstruction();
        loop {
            if let Some(cert) = certify_with(&seq, obstruction.omega, opts)? {
                if cert.proven {
                    return Ok(CertifiedSeed {
                        seq,
                        cert,
                        obstruction,
                    });
                }
            }
            if horizon >= max_horizon {
                return Err(Error::OutOfRange(format!(
                    "no proven certificate for a {}-element seed within {max_horizon} terms",
                    seed.len()
                )));
            }
            let next = (horizon * 2).min(max_horizon);
            seq.extend(next - seq.len())?;
            horizon = next;
        }
    }

    pub fn seed(&self) -> &SeedSet {
        self.seq.seed()
    }

    pub fn omega(&self) -> i64 {
        self.obstruction.omega
    }
}

fn prefix_and_pivot(seq: &GeneratedSequence, k: u32) -> Result<(&[u64], u64)> {
    let len = 1usize
        .checked_shl(k)
        .ok_or_else(|| Error::Precondition(format!("k = {k} is too large")))?;
    let terms = seq.terms();
    if terms.len() <= len {
        return Err(Error::NeedsMoreTerms {
            required: len + 1,
            available: terms.len(),
        });
    }
    Ok((&terms[..len], terms[len]))
}

/// `A ⊗_k B = { a_{2^k} b + a : a in A_k, b in B }`.
pub fn product(
    seq_a: &GeneratedSequence,
    cert_a: &IndependenceCertificate,
    k: u32,
    seed_b: &SeedSet,
) -> Result<SeedSet> {
    if k < cert_a.kappa {
        return Err(Error::Precondition(format!(
            "product needs k >= kappa(A) = {}, got {k}",
            cert_a.kappa
        )));
    }
    let (prefix, c) = prefix_and_pivot(seq_a, k)?;
    let mut elements = Vec::with_capacity(prefix.len() * seed_b.len());
    for &b in seed_b.elements() {
        let base = c
            .checked_mul(b)
            .ok_or_else(|| Error::Precondition("product overflows u64".into()))?;
        // a < c, so each block of |A_k| values lies strictly below the next.
        elements.extend(prefix.iter().map(|&a| base + a));
    }
    SeedSet::new(elements).map_err(|e| Error::Precondition(format!("product seed rejected: {e}")))
}

/// The scaling factor of `S(A ⊗_k B)`: `alpha(A) * alpha(B)`.
pub fn product_alpha(cert_a: &IndependenceCertificate, cert_b: &IndependenceCertificate) -> Triadic {
    cert_a.alpha * cert_b.alpha
}

/// Admissible values of `d` for the `A^d_k` construction, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DRange {
    pub low: i64,
    pub high: i64,
}

impl DRange {
    pub fn is_empty(&self) -> bool {
        self.low > self.high
    }

    pub fn contains(&self, d: i64) -> bool {
        self.low <= d && d <= self.high
    }

    pub fn iter(&self) -> RangeInclusive<i64> {
        self.low..=self.high
    }
}

struct AdkContext<'a> {
    prefix: &'a [u64],
    c: u64,
    range: DRange,
}

fn adk_context<'a>(
    seq_a: &'a GeneratedSequence,
    cert_a: &IndependenceCertificate,
    omega: i64,
    k: u32,
) -> Result<AdkContext<'a>> {
    if k <= cert_a.kappa {
        return Err(Error::Precondition(format!(
            "A^d_k needs k > kappa(A) = {}, got {k}",
            cert_a.kappa
        )));
    }
    let (prefix, c) = prefix_and_pivot(seq_a, k)?;
    let last = *prefix.last().expect("2^k >= 1") as i128;
    if last < cert_a.lambda as i128 + omega as i128 {
        return Err(Error::Precondition(format!(
            "a_(2^k - 1) = {last} is below lambda + omega = {}",
            cert_a.lambda as i128 + omega as i128
        )));
    }
    let high = c as i128 - cert_a.lambda as i128;
    let high = i64::try_from(high)
        .map_err(|_| Error::Precondition(format!("d bound {high} overflows")))?;
    Ok(AdkContext {
        prefix,
        c,
        range: DRange {
            low: omega + 1,
            high,
        },
    })
}

/// `omega(A) < d <= a_{2^k} - lambda(A)`.
pub fn admissible_d_range(
    seq_a: &GeneratedSequence,
    cert_a: &IndependenceCertificate,
    omega: i64,
    k: u32,
) -> Result<DRange> {
    Ok(adk_context(seq_a, cert_a, omega, k)?.range)
}

/// An `A^d_k` seed with its predicted repeat and scaling factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdkConstruction {
    pub seed: SeedSet,
    pub k: u32,
    pub d: i64,
    pub predicted_rho: u64,
    pub predicted_alpha: Triadic,
}

/// `A_k ∪ (A_k + c) ∪ (A_k + 7c - d) ∪ (A_k + 8c - d)` with `c = a_{2^k}`.
///
/// The resulting sequence has repeat factor `10c - d` and scaling factor
/// `10 alpha(A) / 9 - d / 3^(k+2)`.
pub fn adk(
    seq_a: &GeneratedSequence,
    cert_a: &IndependenceCertificate,
    omega: i64,
    k: u32,
    d: i64,
) -> Result<AdkConstruction> {
    let ctx = adk_context(seq_a, cert_a, omega, k)?;
    if !ctx.range.contains(d) {
        return Err(Error::Precondition(format!(
            "d = {d} outside the admissible range [{}, {}]",
            ctx.range.low, ctx.range.high
        )));
    }
    let c = ctx.c as i128;
    let offsets = [0, c, 7 * c - d as i128, 8 * c - d as i128];
    let mut elements = Vec::with_capacity(4 * ctx.prefix.len());
    for off in offsets {
        for &a in ctx.prefix {
            let v = off + a as i128;
            elements.push(
                u64::try_from(v)
                    .map_err(|_| Error::Precondition(format!("seed value {v} out of range")))?,
            );
        }
    }
    elements.sort_unstable();
    let seed = SeedSet::new(elements)
        .map_err(|e| Error::Inconsistency(format!("A^d_k seed is invalid: {e}")))?;
    let predicted_rho = u64::try_from(10 * c - d as i128)
        .map_err(|_| Error::Precondition("predicted rho overflows".into()))?;
    Ok(AdkConstruction {
        seed,
        k,
        d,
        predicted_rho,
        predicted_alpha: adk_alpha(cert_a.alpha, k, d),
    })
}

/// `10 alpha / 9 - d / 3^(k+2)`.
pub fn adk_alpha(alpha: Triadic, k: u32, d: i64) -> Triadic {
    alpha * Triadic::new(10, 2) - Triadic::new(d as i128, k + 2)
}

/// Every repeat factor `10 a_{2^k} - d` reachable with an admissible `d`:
/// `[9 a_{2^k} + lambda, 10 a_{2^k} - omega - 1]`.
pub fn repeat_interval(
    seq_a: &GeneratedSequence,
    cert_a: &IndependenceCertificate,
    omega: i64,
    k: u32,
) -> Result<RangeInclusive<u64>> {
    let ctx = adk_context(seq_a, cert_a, omega, k)?;
    if ctx.range.is_empty() {
        return Err(Error::Precondition(format!(
            "no admissible d at k = {k}: [{}, {}] is empty",
            ctx.range.low, ctx.range.high
        )));
    }
    let c = ctx.c as i128;
    let low = 10 * c - ctx.range.high as i128;
    let high = 10 * c - ctx.range.low as i128;
    let to_u64 = |v: i128| {
        u64::try_from(v).map_err(|_| Error::Precondition(format!("repeat factor {v} out of range")))
    };
    Ok(to_u64(low)?..=to_u64(high)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::certify;
    use crate::seq::generate;

    fn seed(v: &[u64]) -> SeedSet {
        SeedSet::new(v.to_vec()).unwrap()
    }

    fn certified(v: &[u64]) -> CertifiedSeed {
        CertifiedSeed::materialize(&seed(v), MAX_CERTIFY_HORIZON).unwrap()
    }

    #[test]
    fn product_examples() {
        let zero = certified(&[0]);
        let b = seed(&[0, 1, 7]);
        assert_eq!(product(&zero.seq, &zero.cert, 0, &b).unwrap(), b);
        assert_eq!(
            product(&zero.seq, &zero.cert, 2, &seed(&[0, 1])).unwrap().elements(),
            &[0, 1, 3, 4, 9, 10, 12, 13]
        );
        let a = certified(&[0, 1, 7]);
        assert!(matches!(
            product(&a.seq, &a.cert, 1, &b),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn iterated_products_scale_by_ten_ninths() {
        let a = certified(&[0, 1, 7]);
        let mut current = seed(&[0, 1, 7]);
        let mut expected = Triadic::new(10, 2);
        for _ in 0..2 {
            let cur = certified(current.elements());
            assert_eq!(cur.cert.alpha, expected);
            expected = expected * Triadic::new(10, 2);
            assert_eq!(product_alpha(&a.cert, &cur.cert), expected);
            current = product(&a.seq, &a.cert, a.cert.kappa, &current).unwrap();
        }
        let last = CertifiedSeed::materialize(&current, MAX_CERTIFY_HORIZON).unwrap();
        assert_eq!(last.cert.alpha, Triadic::new(1000, 6));
    }

    #[test]
    fn d_range_examples() {
        let zero = certified(&[0]);
        assert_eq!(
            admissible_d_range(&zero.seq, &zero.cert, zero.omega(), 2).unwrap(),
            DRange { low: 0, high: 9 }
        );
        assert_eq!(
            admissible_d_range(&zero.seq, &zero.cert, zero.omega(), 3).unwrap(),
            DRange { low: 0, high: 27 }
        );
        assert!(matches!(
            admissible_d_range(&zero.seq, &zero.cert, zero.omega(), 0),
            Err(Error::Precondition(_))
        ));
        // S(0,4) is not independent, but its omega still fixes the low end.
        let s04 = generate(&seed(&[0, 4]), 8).unwrap();
        assert_eq!(s04.obstruction().omega + 1, 4);
    }

    #[test]
    fn adk_examples() {
        let zero = certified(&[0]);
        let c = adk(&zero.seq, &zero.cert, -1, 2, 0).unwrap();
        assert_eq!(
            c.seed.elements(),
            &[0, 1, 3, 4, 9, 10, 12, 13, 63, 64, 66, 67, 72, 73, 75, 76]
        );
        assert_eq!((c.predicted_rho, c.predicted_alpha), (90, Triadic::new(10, 2)));
        let c = adk(&zero.seq, &zero.cert, -1, 2, 2).unwrap();
        assert_eq!(
            c.seed.elements(),
            &[0, 1, 3, 4, 9, 10, 12, 13, 61, 62, 64, 65, 70, 71, 73, 74]
        );
        assert_eq!((c.predicted_rho, c.predicted_alpha), (88, Triadic::new(88, 4)));
        let c = adk(&zero.seq, &zero.cert, -1, 2, 6).unwrap();
        assert_eq!(c.predicted_alpha, Triadic::new(28, 3));
        let built = CertifiedSeed::materialize(&c.seed, MAX_CERTIFY_HORIZON).unwrap();
        assert_eq!((built.cert.rho, built.cert.alpha), (84, Triadic::new(28, 3)));
        assert!(matches!(
            adk(&zero.seq, &zero.cert, -1, 2, 10),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            adk(&zero.seq, &zero.cert, -1, 2, -1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn adk_d0_matches_product_endpoint() {
        let zero = certified(&[0]);
        let a = certified(&[0, 1, 7]);
        for (base, k) in [(&zero, 2), (&zero, 3), (&a, 3)] {
            let d0 = adk(&base.seq, &base.cert, base.omega(), k, 0);
            let Ok(d0) = d0 else { continue };
            let prod = product(&base.seq, &base.cert, k, &seed(&[0, 1, 7, 8])).unwrap();
            assert_eq!(d0.seed, prod);
        }
        // d = c is admissible for S(0) (lambda = 0) and gives A ⊗_k {0,1,6,7}.
        let c = adk(&zero.seq, &zero.cert, -1, 2, 9).unwrap();
        let prod = product(&zero.seq, &zero.cert, 2, &seed(&[0, 1, 6, 7])).unwrap();
        assert_eq!(c.seed, prod);
    }

    #[test]
    fn repeat_interval_examples() {
        let zero = certified(&[0]);
        assert_eq!(repeat_interval(&zero.seq, &zero.cert, -1, 2).unwrap(), 81..=90);
        assert_eq!(repeat_interval(&zero.seq, &zero.cert, -1, 3).unwrap(), 243..=270);
    }

    #[test]
    fn adk_predictions_hold_for_s017() {
        let a = certified(&[0, 1, 7]);
        let k = a.cert.kappa + 1;
        let range = admissible_d_range(&a.seq, &a.cert, a.omega(), k).unwrap();
        for d in [range.low, (range.low + range.high) / 2, range.high] {
            let c = adk(&a.seq, &a.cert, a.omega(), k, d).unwrap();
            let s = generate(&c.seed, 1 << (k + 5)).unwrap();
            let cert = certify(&s).unwrap().unwrap();
            assert_eq!((cert.rho, cert.alpha), (c.predicted_rho, c.predicted_alpha), "d = {d}");
        }
    }
}
