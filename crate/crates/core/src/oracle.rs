//! Reference root finders for tests.
//!
//! Nothing here is used by the staged pipeline. The simultaneous iteration
//! shares only the [`ComplexPoly`] container with the rest of the crate; its
//! evaluation and starting radius are computed locally.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub roots: Vec<Complex64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Angular offset of the starting circle; any value that avoids symmetric
/// placements works.
const START_ANGLE: f64 = 0.4;

/// Weierstrass (Durand-Kerner) simultaneous iteration on all roots at once.
///
/// Coefficients are made monic first. Iteration stops when every update is
/// smaller than `root_tol * max(1, |z|)` or after `max_iter` sweeps.
pub fn durand_kerner(p: &ComplexPoly, tol: &Tolerances) -> OracleResult {
    let mut coeffs: Vec<Complex64> = p.coeffs().to_vec();
    let cutoff = tol.zero_eps * coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    while coeffs.last().is_some_and(|c| c.norm() <= cutoff) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return OracleResult {
            roots: Vec::new(),
            converged: true,
            iterations: 0,
        };
    }
    let lead = *coeffs.last().unwrap();
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();
    let n = monic.len() - 1;

    // Cauchy radius 1 + max |a_k / a_n| encloses every root.
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * radius, START_ANGLE + TAU * k as f64 / n as f64))
        .collect();

    let horner = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < tol.max_iter {
        iterations += 1;
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(f64::EPSILON, 0.0);
            }
            let step = horner(z[i]) / denom;
            z[i] -= step;
            worst = worst.max(step.norm() / z[i].norm().max(1.0));
        }
        if worst < tol.root_tol {
            converged = true;
            break;
        }
    }
    OracleResult {
        roots: z,
        converged,
        iterations,
    }
}

/// `cos(2 pi k / n) + i sin(2 pi k / n)` for `k = 0..n`.
pub fn roots_of_unity(n: usize) -> Result<Vec<Complex64>> {
    if n < 1 {
        return Err(Error::InvalidInput("roots_of_unity needs n >= 1".into()));
    }
    Ok((0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            Complex64::new(t.cos(), t.sin())
        })
        .collect())
}

/// The real members of an oracle root list, sorted ascending.
pub fn real_parts_of_real_roots(roots: &[Complex64], imag_tol: f64) -> Vec<f64> {
    let mut v: Vec<f64> = roots.iter().filter(|z| z.im.abs() <= imag_tol).map(|z| z.re).collect();
    v.sort_by(f64::total_cmp);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn oracle_tol() -> Tolerances {
        Tolerances {
            root_tol: 1e-14,
            max_iter: 2000,
            ..Default::default()
        }
    }

    fn contains(roots: &[Complex64], target: Complex64, eps: f64) -> bool {
        roots.iter().any(|r| (r - target).norm() <= eps)
    }

    #[test]
    fn quadratic() {
        let res = durand_kerner(&Poly::new(vec![c(2.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)]), &oracle_tol());
        assert!(res.converged);
        assert!(contains(&res.roots, c(1.0, 0.0), 1e-10));
        assert!(contains(&res.roots, c(2.0, 0.0), 1e-10));
    }

    #[test]
    fn cube_roots_of_unity() {
        let p = Poly::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let res = durand_kerner(&p, &oracle_tol());
        assert!(res.converged);
        for w in roots_of_unity(3).unwrap() {
            assert!(contains(&res.roots, w, 1e-10));
        }
    }

    #[test]
    fn linear() {
        let target = c(-2.5, 0.75);
        let res = durand_kerner(&Poly::new(vec![-target, c(1.0, 0.0)]), &oracle_tol());
        assert_eq!(res.roots.len(), 1);
        assert!((res.roots[0] - target).norm() < 1e-12);
    }

    #[test]
    fn unity_fixtures() {
        assert_eq!(roots_of_unity(1).unwrap(), vec![c(1.0, 0.0)]);
        let two = roots_of_unity(2).unwrap();
        assert!((two[1] - c(-1.0, 0.0)).norm() < 1e-15);
        let four = roots_of_unity(4).unwrap();
        for (w, want) in four.iter().zip([c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]) {
            assert!((w - want).norm() < 1e-15);
        }
        assert!(roots_of_unity(0).is_err());
    }

    #[test]
    fn unity_residuals() {
        for n in 1..=16 {
            for w in roots_of_unity(n).unwrap() {
                assert!((w.powu(n as u32) - 1.0).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn recovers_constructed_roots() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.random_range(1..=8);
            let roots: Vec<Complex64> = loop {
                let cand: Vec<Complex64> = (0..n)
                    .map(|_| c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
                    .collect();
                let separated = cand
                    .iter()
                    .enumerate()
                    .all(|(i, a)| cand[..i].iter().all(|b| (a - b).norm() > 0.1));
                if separated {
                    break cand;
                }
            };
            let p = Poly::from_roots(&roots);
            let res = durand_kerner(&p, &oracle_tol());
            assert!(res.converged, "no convergence for {roots:?}");
            for r in &roots {
                assert!(contains(&res.roots, *r, 1e-8), "missed {r} in {:?}", res.roots);
            }
            let scale = p.scale_at(res.roots.iter().map(|z| z.norm()).fold(0.0, f64::max));
            for z in &res.roots {
                assert!(p.eval(*z).norm() <= 1e-9 * scale);
            }
        }
    }
}
