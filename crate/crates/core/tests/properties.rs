use std::sync::Arc;

use proptest::prelude::*;

use grouplin::catalog;
use grouplin::fourier::{convolve, inverse, transform, MatrixFn, ScalarFn};
use grouplin::group::{coset_data, fold, is_folded};
use grouplin::io::{self, SystemFile};
use grouplin::rational::ratio;
use grouplin::reduction::{evaluate, Side};
use grouplin::rep::{self, CMatrix, C64, DEFAULT_TOL};
use grouplin::solvers;
use grouplin::PowerGroup;

fn template_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(catalog::TEMPLATE_NAMES.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn folding_is_idempotent(name in template_name(), seed in any::<u64>()) {
        let t = catalog::template(name).unwrap();
        let power = PowerGroup::new(t.g1.clone(), 2);
        let table: Vec<usize> = (0..power.size())
            .map(|i| ((seed >> (i % 60)) as usize ^ i) % t.g2.order())
            .collect();
        let folded = fold(&table, &t.phi, 2);
        prop_assert!(is_folded(&folded, &t.phi, 2));
        prop_assert_eq!(fold(&folded, &t.phi, 2), folded);
    }

    #[test]
    fn coset_representatives_are_shared(name in template_name(), a in 0usize..64, b in 0usize..64, h in 0usize..8) {
        let t = catalog::template(name).unwrap();
        let power = PowerGroup::new(t.g1.clone(), 2);
        let g = power.decode((a * 64 + b) % power.size());
        let hm = t.h1.members()[h % t.h1.order()];
        let shifted = power.mul(&[hm, hm], &g);
        let (rep_g, hg) = coset_data(&t.h1, &g);
        prop_assert_eq!(&coset_data(&t.h1, &shifted).0, &rep_g);
        prop_assert_eq!(power.mul(&[hg, hg], &g), rep_g);
    }

    #[test]
    fn derandomization_never_loses(name in template_name(), vars in 1usize..6, eqs in 1usize..10, seed in any::<u64>()) {
        let t = catalog::template(name).unwrap();
        let s = solvers::random_system(&t, vars, eqs, seed);
        for side in [Side::G1, Side::G2] {
            let (assignment, value) = solvers::derandomize(&s, side);
            prop_assert!(value >= solvers::random_expectation(&s, side));
            prop_assert_eq!(evaluate(&s, &assignment, side).unwrap(), value);
        }
    }

    #[test]
    fn brute_force_dominates(vars in 1usize..5, eqs in 1usize..8, seed in any::<u64>()) {
        let t = catalog::template("id-S3").unwrap();
        let s = solvers::random_system(&t, vars, eqs, seed);
        let (best, _) = solvers::brute_force_opt(&s, Side::G1, solvers::BRUTE_FORCE_CAP).unwrap();
        let (_, derand) = solvers::derandomize(&s, Side::G1);
        prop_assert!(best >= derand);
        prop_assert!(best <= ratio(1, 1));
    }

    #[test]
    fn system_files_round_trip(name in template_name(), vars in 1usize..5, eqs in 1usize..6, seed in any::<u64>()) {
        let t = catalog::template(name).unwrap();
        let s = solvers::random_system(&t, vars, eqs, seed);
        let reference = format!("catalog:{name}");
        let text = io::canonical(&SystemFile::from_system(&s, &reference)).unwrap();
        let parsed: SystemFile = serde_json::from_str(&text).unwrap();
        let back = parsed.to_system(std::path::Path::new(".")).unwrap();
        prop_assert_eq!(&back.equations, &s.equations);
        prop_assert_eq!(io::canonical(&SystemFile::from_system(&back, &reference)).unwrap(), text);
    }

    #[test]
    fn fourier_inversion_on_random_q8_functions(values in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8)) {
        let set = Arc::new(rep::irreps(&Arc::new(catalog::quaternion()), 0, DEFAULT_TOL).unwrap());
        let power = PowerGroup::new(set.group().clone(), 1);
        let f = ScalarFn::new(power, values.iter().map(|&(a, b)| C64::new(a, b)).collect()).unwrap().to_matrix_fn();
        prop_assert!(inverse(&transform(&f, &set).unwrap()).unwrap().max_diff(&f) < 1e-9);
    }

    #[test]
    fn convolution_is_associative_over_d4(seed in any::<u64>()) {
        let g = Arc::new(catalog::dihedral4());
        let power = PowerGroup::new(g, 1);
        let mut k = seed;
        let mut next = move || {
            k = k.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            C64::new(((k >> 33) as f64) / 2f64.powi(31) - 1.0, 0.0)
        };
        let mut m = || MatrixFn::from_fn(power.clone(), |_| CMatrix::from_fn(2, 2, |_, _| next())).unwrap();
        let (a, b, c) = (m(), m(), m());
        let left = convolve(&convolve(&a, &b).unwrap(), &c).unwrap();
        let right = convolve(&a, &convolve(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_diff(&right) < 1e-9);
    }
}
