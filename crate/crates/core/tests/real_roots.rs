use polyroots::oracle::{durand_kerner, real_parts_of_real_roots};
use polyroots::realroots::{multiplicity, multiplicity_by_derivatives, poly_from_real_roots, ZERO_RESIDUAL_REL};
use polyroots::{real_roots, RealPoly, Tolerances};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn coeffs(max_degree: usize) -> impl Strategy<Value = Vec<f64>> {
    (1..=max_degree).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0..10.0f64, n),
            prop_oneof![-10.0..-0.1f64, 0.1..10.0f64],
        )
            .prop_map(|(mut c, lead)| {
                c.push(lead);
                c
            })
    })
}

fn separated_roots(rng: &mut StdRng, n: usize, gap: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[1] - w[0] >= gap) {
            return v;
        }
    }
}

#[test]
fn matches_oracle_on_well_separated_roots() {
    let mut rng = StdRng::seed_from_u64(11);
    let otol = Tolerances {
        root_tol: 1e-14,
        max_iter: 5000,
        ..tol()
    };
    for _ in 0..300 {
        let n = rng.random_range(1..=8);
        let roots = separated_roots(&mut rng, n, 0.05);
        let p = poly_from_real_roots(&roots.iter().map(|&r| (r, 1)).collect::<Vec<_>>());
        let got = real_roots(&p, &tol()).unwrap();
        let want = real_parts_of_real_roots(&durand_kerner(&p.to_complex(), &otol).roots, 1e-6);
        assert_eq!(got.len(), want.len(), "{roots:?}");
        for (g, w) in got.iter().zip(&want) {
            assert!((g.value - w).abs() <= 1e-6, "{} vs {w}", g.value);
        }
    }
}

#[test]
fn ignores_complex_pairs() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..100 {
        let n = rng.random_range(1..=4);
        let roots = separated_roots(&mut rng, n, 0.05);
        let mut p = poly_from_real_roots(&roots.iter().map(|&r| (r, 1)).collect::<Vec<_>>());
        // (x - a)^2 + b^2 with b well away from zero
        for _ in 0..rng.random_range(1..=2) {
            let (a, b) = (rng.random_range(-3.0..3.0), rng.random_range(0.5..3.0));
            p = &p * &RealPoly::new(vec![a * a + b * b, -2.0 * a, 1.0]);
        }
        let got = real_roots(&p, &tol()).unwrap();
        assert_eq!(got.len(), roots.len());
        for (g, r) in got.iter().zip(&roots) {
            assert!((g.value - r).abs() <= 1e-6);
        }
    }
}

#[test]
fn multiplicities_of_constructed_real_roots() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..100 {
        let n = rng.random_range(1..=3);
        let roots = separated_roots(&mut rng, n, 0.5);
        let factors: Vec<(f64, usize)> = roots.iter().map(|&r| (r, rng.random_range(1..=3))).collect();
        let p = poly_from_real_roots(&factors);
        let got = real_roots(&p, &tol()).unwrap();
        assert_eq!(got.len(), factors.len(), "{factors:?} -> {got:?}");
        for (g, &(r, m)) in got.iter().zip(&factors) {
            assert_eq!(g.multiplicity, m, "{factors:?}");
            // A root of multiplicity m is only determined to about eps^(1/m).
            assert!((g.value - r).abs() <= 1e-4, "{} vs {r}", g.value);
            assert_eq!(multiplicity(&p, r, &tol()).unwrap(), m);
            assert_eq!(multiplicity_by_derivatives(&p, r, &tol()).unwrap(), m);
        }
    }
}

proptest! {
    #[test]
    fn reported_roots_vanish(c in coeffs(9)) {
        let p = RealPoly::new(c);
        for r in real_roots(&p, &tol()).unwrap() {
            let limit = 1e3 * ZERO_RESIDUAL_REL * p.scale_at(r.value.abs());
            prop_assert!(p.eval(r.value).abs() <= limit, "p({}) = {}", r.value, p.eval(r.value));
        }
    }

    #[test]
    fn roots_are_sorted_distinct_and_bounded(c in coeffs(9)) {
        let p = RealPoly::new(c);
        let roots = real_roots(&p, &tol()).unwrap();
        let bound = p.root_bound().unwrap();
        let total: usize = roots.iter().map(|r| r.multiplicity).sum();
        prop_assert!(total <= p.degree().unwrap());
        prop_assert!(roots.windows(2).all(|w| w[0].value < w[1].value));
        prop_assert!(roots.iter().all(|r| r.value.abs() <= bound));
    }

    #[test]
    fn derivative_root_between_consecutive_roots(c in coeffs(9)) {
        let p = RealPoly::new(c);
        prop_assume!(p.degree().unwrap() >= 2);
        let roots = real_roots(&p, &tol()).unwrap();
        let critical = real_roots(&p.derivative(), &tol()).unwrap();
        for w in roots.windows(2) {
            let (a, b) = (w[0].value, w[1].value);
            prop_assert!(
                critical.iter().any(|c| c.value >= a - 1e-9 && c.value <= b + 1e-9),
                "no critical point in [{a}, {b}]"
            );
        }
        // A multiple root is also a root of the derivative.
        for r in roots.iter().filter(|r| r.multiplicity > 1) {
            prop_assert!(critical.iter().any(|c| (c.value - r.value).abs() <= 1e-4));
        }
    }

    #[test]
    fn odd_degree_has_a_real_root(c in coeffs(9)) {
        let p = RealPoly::new(c);
        prop_assume!(p.degree().unwrap() % 2 == 1);
        prop_assert!(!real_roots(&p, &tol()).unwrap().is_empty());
    }
}
