//! Property tests: group laws, invariance of cross-ratios and of `Bₙ`,
//! dilogarithm symmetries and the `Φ₃` round trip.
//!
//! Random objects are drawn from seeded streams so that a shrunk failure is
//! reproducible from the printed seed.

use approx::assert_abs_diff_eq;
use fsl_core::cross_ratios::{cross_ratios4, four_tuple_identities, max_residual, pi3, random_generic_tuple};
use fsl_core::dilog::{bloch_wigner, symmetry_residual, v_max};
use fsl_core::flags::{b_n, b_n_j, AffineFlag};
use fsl_core::forms::FormedSpace;
use fsl_core::linalg::{c, max_abs, CMatrix};
use fsl_core::reduction::{check_omega3, phi3, reduce_quadruple, reduce_triple};
use fsl_core::rng::{complex_normal, stream};
use fsl_core::Complex64;
use proptest::prelude::*;

fn spaces() -> impl Strategy<Value = FormedSpace> {
    (prop_oneof![Just(1i8), Just(-1i8)], 0u8..=1, 2usize..=4)
        .prop_filter("alternating forms live in even dimension", |&(eps, d, _)| eps == 1 || d == 0)
        .prop_map(|(eps, d, r)| FormedSpace::new(eps, d, r).unwrap())
}

fn relative(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / x.norm().max(y.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_is_closed_under_products_and_inverses(space in spaces(), seed in any::<u64>()) {
        let mut rng = stream(seed, "prop-group", 0);
        let g = space.random_group_element(&mut rng).unwrap();
        let h = space.random_group_element(&mut rng).unwrap();
        let gh = g.compose(&h);
        prop_assert!(space.group_residual(gh.matrix()) <= 1e-9);
        let id = g.inverse(&space).compose(&g);
        let dim = space.dim();
        let err = max_abs(&(id.matrix() - CMatrix::identity(dim, dim)));
        prop_assert!(err <= 1e-9 * max_abs(g.matrix()).powi(2).max(1.0), "{err}");
    }

    #[test]
    fn cross_ratios_are_group_invariant(space in spaces(), seed in any::<u64>()) {
        let mut rng = stream(seed, "prop-cr", 0);
        let t = random_generic_tuple(&space, 4, &mut rng).unwrap();
        let g = space.random_group_element(&mut rng).unwrap();
        let before = cross_ratios4(&t).unwrap();
        let after = cross_ratios4(&t.transform(&g).unwrap()).unwrap();
        for j in 0..3 {
            prop_assert!(relative(before.get(j), after.get(j)) <= 1e-7, "CR{j}");
        }
        assert_abs_diff_eq!(before.product().re, f64::from(space.epsilon()), epsilon = 1e-8);
        prop_assert!(max_residual(&four_tuple_identities(&t).unwrap()) <= 1e-8);
    }

    #[test]
    fn reductions_land_on_canonical_forms(space in spaces(), seed in any::<u64>()) {
        let mut rng = stream(seed, "prop-reduce", 0);
        let t3 = random_generic_tuple(&space, 3, &mut rng).unwrap();
        prop_assert!(reduce_triple(&t3).unwrap().residual <= 1e-8);
        let t4 = random_generic_tuple(&space, 4, &mut rng).unwrap();
        let res = reduce_quadruple(&t4).unwrap();
        prop_assert!(res.residual <= 1e-8);
        prop_assert!(space.group_residual(res.g.matrix()) <= 1e-9);
        // the canonical form is determined by the cross-ratios
        let (a, b) = (pi3(&t4).unwrap(), pi3(&res.canonical).unwrap());
        prop_assert!(relative(a.0, b.0) <= 1e-7 && relative(a.1, b.1) <= 1e-7);
    }

    #[test]
    fn phi3_then_pi3_is_the_identity(
        space in spaces(),
        a1 in (-3.0f64..3.0, -3.0f64..3.0),
        a2 in (-3.0f64..3.0, -3.0f64..3.0),
    ) {
        let a = (c(a1.0, a1.1), c(a2.0, a2.1));
        prop_assume!(check_omega3(space.epsilon(), a).is_ok());
        let t = phi3(&space, a).unwrap();
        let back = pi3(&t).unwrap();
        prop_assert!(relative(a.0, back.0) <= 1e-10 && relative(a.1, back.1) <= 1e-10);
    }

    #[test]
    fn bloch_wigner_symmetries(re in -4.0f64..4.0, im in -4.0f64..4.0) {
        let z = c(re, im);
        prop_assume!(z.norm() > 1e-3 && (z - c(1.0, 0.0)).norm() > 1e-3);
        prop_assert!(symmetry_residual(z) <= 1e-10);
        prop_assert!(bloch_wigner(z).abs() <= v_max() + 1e-12);
        prop_assert_eq!(bloch_wigner(c(re, 0.0)), 0.0);
    }

    #[test]
    fn volume_cocycle_is_projectively_invariant(n in 2usize..=4, seed in any::<u64>()) {
        let mut rng = stream(seed, "prop-flags", 0);
        let flags: [AffineFlag; 4] = std::array::from_fn(|_| AffineFlag::random(n, &mut rng));
        let g = CMatrix::from_fn(n, n, |_, _| complex_normal(&mut rng));
        let value = b_n(&flags).unwrap();
        let moved: [AffineFlag; 4] = std::array::from_fn(|i| {
            let factors: Vec<Complex64> = (0..n).map(|_| complex_normal(&mut rng)).collect();
            flags[i].transform(&g).unwrap().rescale(&factors)
        });
        prop_assert!((b_n(&moved).unwrap() - value).abs() <= 1e-8 * value.abs().max(1.0));
        // swapping two flags flips the sign
        let swapped = [flags[1].clone(), flags[0].clone(), flags[2].clone(), flags[3].clone()];
        prop_assert!((b_n(&swapped).unwrap() + value).abs() <= 1e-8 * value.abs().max(1.0));
        let by_class: f64 = fsl_core::flags::all_indices(n).map(|j| b_n_j(&flags, j).unwrap()).sum();
        prop_assert!((by_class - value).abs() <= 1e-9 * value.abs().max(1.0));
    }
}
