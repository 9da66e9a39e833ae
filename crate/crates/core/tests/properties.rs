use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stanley::analyzer::{certify, check_independence_at};
use stanley::constructor::{adk, admissible_d_range, product, CertifiedSeed, MAX_CERTIFY_HORIZON};
use stanley::oracle::{naive_generate, random_seed};
use stanley::{generate, is_three_free, obstruction_set, SeedSet};

fn seed_strategy(max_value: u64) -> impl Strategy<Value = SeedSet> {
    (any::<u64>(), 0.05f64..0.5).prop_map(move |(s, density)| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        random_seed(&mut rng, max_value, density)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sieve_matches_naive(seed in seed_strategy(40), count in 1usize..300) {
        let count = count.max(seed.len());
        let fast = generate(&seed, count).unwrap();
        let naive = naive_generate(&seed, count).unwrap();
        prop_assert_eq!(fast.terms(), &naive[..]);
    }

    #[test]
    fn generated_prefix_is_three_free(seed in seed_strategy(40)) {
        let seq = generate(&seed, 256.max(seed.len())).unwrap();
        prop_assert!(is_three_free(seq.terms()).unwrap());
        prop_assert!(seq.terms().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn obstruction_agrees_with_sieve(seed in seed_strategy(40)) {
        let seq = generate(&seed, seed.len() + 16).unwrap();
        prop_assert_eq!(seq.obstruction(), obstruction_set(&seed));
    }

    #[test]
    fn certificate_is_sound_and_minimal(seed in seed_strategy(30)) {
        let seq = generate(&seed, 2048).unwrap();
        let Some(cert) = certify(&seq).unwrap() else { return Ok(()); };
        let omega = seq.obstruction().omega;
        let top = seq.len().ilog2() - 1;
        for k in cert.kappa..=top {
            let at = check_independence_at(&seq, k, omega).unwrap();
            prop_assert_eq!(at.map(|a| a.lambda), Some(cert.lambda));
        }
        if cert.kappa > 0 {
            let below = check_independence_at(&seq, cert.kappa - 1, omega).unwrap();
            prop_assert_ne!(below.map(|a| a.lambda), Some(cert.lambda));
        }
        prop_assert_eq!(cert.rho, seq.terms()[1 << cert.kappa]);
    }

    #[test]
    fn product_seed_is_three_free(a in seed_strategy(12), b in seed_strategy(12), extra in 0u32..2) {
        let Ok(ca) = CertifiedSeed::materialize(&a, 1 << 14) else { return Ok(()); };
        let k = ca.cert.kappa + extra;
        let mut seq = ca.seq.clone();
        let need = (1usize << k) + 1;
        if seq.len() < need {
            seq.extend(need - seq.len()).unwrap();
        }
        let p = product(&seq, &ca.cert, k, &b).unwrap();
        prop_assert!(is_three_free(p.elements()).unwrap());
        prop_assert_eq!(p.len(), b.len() << k);
    }

    #[test]
    fn adk_seed_is_three_free(a in seed_strategy(12), extra in 1u32..3, pick in any::<u64>()) {
        let Ok(ca) = CertifiedSeed::materialize(&a, 1 << 14) else { return Ok(()); };
        let k = ca.cert.kappa + extra;
        let mut seq = ca.seq.clone();
        let need = (1usize << k) + 1;
        if seq.len() < need {
            seq.extend(need - seq.len()).unwrap();
        }
        let Ok(range) = admissible_d_range(&seq, &ca.cert, ca.omega(), k) else { return Ok(()); };
        if range.is_empty() {
            return Ok(());
        }
        let span = (range.high - range.low) as u64 + 1;
        let d = range.low + (pick % span) as i64;
        let built = adk(&seq, &ca.cert, ca.omega(), k, d).unwrap();
        prop_assert!(is_three_free(built.seed.elements()).unwrap());
    }
}

#[test]
fn adk_predictions_hold_for_classical_seeds() {
    for seed in [vec![0], vec![0, 1, 7], vec![0, 9]] {
        let seed = SeedSet::new(seed).unwrap();
        let a = CertifiedSeed::materialize(&seed, MAX_CERTIFY_HORIZON).unwrap();
        let k = a.cert.kappa + 1;
        let mut seq = a.seq.clone();
        let need = (1usize << k) + 1;
        if seq.len() < need {
            seq.extend(need - seq.len()).unwrap();
        }
        let range = admissible_d_range(&seq, &a.cert, a.omega(), k).unwrap();
        for d in [range.low, range.high] {
            let built = adk(&seq, &a.cert, a.omega(), k, d).unwrap();
            let out = CertifiedSeed::materialize(&built.seed, MAX_CERTIFY_HORIZON).unwrap();
            assert_eq!(out.cert.rho, built.predicted_rho, "{seed:?} k={k} d={d}");
            assert_eq!(out.cert.alpha, built.predicted_alpha, "{seed:?} k={k} d={d}");
        }
    }
}
