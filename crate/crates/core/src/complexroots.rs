//! Complex roots through the real system `Re p(x+iy) = 0, Im p(x+iy) = 0`.

use num_complex::Complex64;

use crate::bivariate::{solve_system, BivarPoly};
use crate::error::{Error, Result};
use crate::poly::{ComplexPoly, Poly};
use crate::realroots::{multiplicity, residual_threshold, ZERO_RESIDUAL_REL};
use crate::tolerances::Tolerances;

const POLISH_STEPS: usize = 30;

/// Relative distance within which nearby roots are tested as one multiple root.
const MERGE_RADIUS: f64 = 1e-3;

/// Real and imaginary parts of `p(x + iy)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPair {
    pub re_part: BivarPoly,
    pub im_part: BivarPoly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexRootReport {
    pub value: Complex64,
    pub multiplicity: usize,
    /// `|p(value)|`
    pub residual: f64,
}

/// Expands `p(x + iy)` term by term with the binomial theorem.
pub fn split(p: &ComplexPoly) -> Result<SplitPair> {
    let Some(n) = p.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    let mut re = vec![vec![0.0; n + 1]; n + 1];
    let mut im = vec![vec![0.0; n + 1]; n + 1];
    let mut binom = vec![1.0f64];
    for (k, alpha) in p.coeffs().iter().enumerate() {
        if k > 0 {
            let mut next = vec![1.0; k + 1];
            for j in 1..k {
                next[j] = binom[j - 1] + binom[j];
            }
            binom = next;
        }
        // (x + iy)^k = sum_j C(k, j) x^(k-j) i^j y^j
        for (j, &c) in binom.iter().enumerate() {
            let (unit_re, unit_im) = match j % 4 {
                0 => (c, 0.0),
                1 => (0.0, c),
                2 => (-c, 0.0),
                _ => (0.0, -c),
            };
            // (beta + i gamma)(unit_re + i unit_im)
            re[k - j][j] += alpha.re * unit_re - alpha.im * unit_im;
            im[k - j][j] += alpha.re * unit_im + alpha.im * unit_re;
        }
    }
    Ok(SplitPair {
        re_part: BivarPoly::new(re),
        im_part: BivarPoly::new(im),
    })
}

/// Every root of `p` with multiplicity; multiplicities sum to `deg p`.
pub fn complex_roots(p: &ComplexPoly, tol: &Tolerances) -> Result<Vec<ComplexRootReport>> {
    tol.validate()?;
    let p = p.normalized(tol.zero_eps);
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        found => return Err(Error::DegreeTooLow { found, min: 1 }),
    };

    // Stage 2 locates roots of the current quotient; each one is divided out
    // as often as it vanishes, and whatever remains is solved again.
    let mut found: Vec<(Complex64, usize)> = Vec::new();
    let mut remaining = p.clone();
    while remaining.degree().is_some_and(|d| d >= 1) {
        let before = remaining.degree();
        let candidates = match locate(&remaining, tol) {
            Ok(c) => c,
            // Anything Stage 2 cannot finish surfaces as a short root count.
            Err(e @ Error::InfiniteSolutions { .. }) => return Err(e),
            Err(_) => break,
        };
        for z in candidates {
            let Ok(m) = multiplicity(&remaining, z, tol) else {
                continue;
            };
            let z = polish(&p, z, m);
            for _ in 0..m {
                remaining = remaining.deflate(z)?.quotient;
            }
            found.push((z, m));
            if remaining.degree().unwrap_or(0) == 0 {
                break;
            }
        }
        if remaining.degree() == before {
            break;
        }
    }

    let reports = merge(&p, found, tol);
    let total: usize = reports.iter().map(|r| r.multiplicity).sum();
    if total != deg {
        return Err(Error::IncompleteRootSet {
            found: total,
            expected: deg,
        });
    }
    if let Some(bad) = reports.iter().find(|r| r.residual > loose_threshold(&p, r.value)) {
        return Err(Error::NotARoot {
            residual: bad.residual,
            threshold: loose_threshold(&p, bad.value),
        });
    }
    Ok(reports)
}

/// Candidate roots of `p` from its split system, best residual first.
fn locate(p: &ComplexPoly, tol: &Tolerances) -> Result<Vec<Complex64>> {
    if p.degree() == Some(1) {
        return Ok(vec![-p.coeff(0) / p.coeff(1)]);
    }
    let pair = split(p)?;
    let solutions = match solve_system(&pair.re_part, &pair.im_part, tol) {
        Ok(s) => s,
        Err(Error::InfiniteSolutions { diagnostic }) => {
            return Err(Error::InfiniteSolutions {
                diagnostic: format!("internal inconsistency: split of a non-zero polynomial reported {diagnostic}"),
            })
        }
        Err(e) => return Err(e),
    };
    let quality = |z: &Complex64| p.eval(*z).norm() / p.scale_at(z.norm());
    let mut out: Vec<Complex64> = solutions.points.iter().map(|s| Complex64::new(s.x, s.y)).collect();
    out.retain(|&z| p.eval(z).norm() <= loose_threshold(p, z));
    out.sort_by(|a, b| quality(a).total_cmp(&quality(b)));
    Ok(out)
}

/// Refines `z` as a root of multiplicity `m` of the original polynomial.
///
/// Such a root is a simple root of `p^(m-1)`, where Newton's method is well
/// conditioned; steps are kept while `|p^(m-1)|` decreases. Working on the
/// original polynomial also removes the error that deflation accumulates.
fn polish(p: &ComplexPoly, mut z: Complex64, m: usize) -> Complex64 {
    let q = p.nth_derivative(m.saturating_sub(1));
    let dq = q.derivative();
    let mut value = q.eval(z).norm();
    for _ in 0..POLISH_STEPS {
        let slope = dq.eval(z);
        if value == 0.0 || slope == Complex64::new(0.0, 0.0) {
            break;
        }
        let next = z - q.eval(z) / slope;
        let next_value = q.eval(next).norm();
        if !(next_value < value) {
            break;
        }
        (z, value) = (next, next_value);
    }
    z
}

/// Root acceptance on the complex polynomial itself, matching the
/// bivariate acceptance level.
fn loose_threshold(p: &ComplexPoly, z: Complex64) -> f64 {
    residual_threshold(p, z) / ZERO_RESIDUAL_REL * crate::bivariate::ACCEPT_RESIDUAL_REL
}

/// Clusters roots found across deflation rounds and reports residuals on `p`.
///
/// Rounding splits a root of multiplicity `k` into `k` nearby simple roots
/// roughly `eps^(1/k)` apart. Two reported roots within [`MERGE_RADIUS`] are
/// replaced by their weighted centroid when `p` vanishes there to the
/// combined multiplicity.
fn merge(p: &ComplexPoly, found: Vec<(Complex64, usize)>, tol: &Tolerances) -> Vec<ComplexRootReport> {
    let mut roots: Vec<(Complex64, usize)> = Vec::new();
    for (z, m) in found {
        match roots.iter_mut().find(|(w, _)| (w - z).norm() <= tol.cluster_tol) {
            Some((_, k)) => *k += m,
            None => roots.push((z, m)),
        }
    }

    let mut refused: Vec<(Complex64, Complex64)> = Vec::new();
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let (a, b) = (roots[i].0, roots[j].0);
                let dist = (a - b).norm();
                let reach = MERGE_RADIUS * a.norm().max(b.norm()).max(1.0);
                if dist <= reach && !refused.contains(&(a, b)) && best.is_none_or(|(d, _, _)| dist < d) {
                    best = Some((dist, i, j));
                }
            }
        }
        let Some((_, i, j)) = best else { break };
        let ((a, ma), (b, mb)) = (roots[i], roots[j]);
        let k = ma + mb;
        let centroid = polish(p, (a * ma as f64 + b * mb as f64) / k as f64, k);
        if multiplicity(p, centroid, tol).is_ok_and(|m| m >= k) {
            roots[i] = (centroid, k);
            roots.remove(j);
        } else {
            refused.push((a, b));
        }
    }

    let mut reports: Vec<ComplexRootReport> = roots
        .into_iter()
        .map(|(value, multiplicity)| ComplexRootReport {
            value,
            multiplicity,
            residual: p.eval(value).norm(),
        })
        .collect();
    reports.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    reports
}

/// Expands `(z - r)^m` products; handy for tests and examples.
pub fn poly_from_complex_roots(roots: &[(Complex64, usize)]) -> ComplexPoly {
    let expanded: Vec<Complex64> = roots.iter().flat_map(|&(r, m)| std::iter::repeat_n(r, m)).collect();
    Poly::from_roots(&expanded)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn assert_roots(got: &[ComplexRootReport], want: &[(Complex64, usize)]) {
        assert_eq!(got.len(), want.len(), "got {got:?}");
        for &(z, m) in want {
            let hit = got
                .iter()
                .find(|r| (r.value - z).norm() <= 1e-6)
                .unwrap_or_else(|| panic!("missing {z} in {got:?}"));
            assert_eq!(hit.multiplicity, m, "multiplicity of {z}");
        }
    }

    #[test]
    fn split_examples() {
        let z2 = Poly::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let s = split(&z2).unwrap();
        assert_eq!(s.re_part, BivarPoly::from_terms(&[(2, 0, 1.0), (0, 2, -1.0)]));
        assert_eq!(s.im_part, BivarPoly::from_terms(&[(1, 1, 2.0)]));

        let z = Poly::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let s = split(&z).unwrap();
        assert_eq!(s.re_part, BivarPoly::from_terms(&[(1, 0, 1.0)]));
        assert_eq!(s.im_part, BivarPoly::from_terms(&[(0, 1, 1.0)]));

        let iz = Poly::new(vec![c(0.0, 0.0), c(0.0, 1.0)]);
        let s = split(&iz).unwrap();
        assert_eq!(s.re_part, BivarPoly::from_terms(&[(0, 1, -1.0)]));
        assert_eq!(s.im_part, BivarPoly::from_terms(&[(1, 0, 1.0)]));

        assert!(matches!(split(&ComplexPoly::zero()), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn split_real_coefficients() {
        let p = Poly::new(vec![c(-6.0, 0.0), c(11.0, 0.0), c(-6.0, 0.0), c(1.0, 0.0)]);
        let s = split(&p).unwrap();
        assert!(s.im_part.at_y(0.0).is_zero());
        assert_eq!(s.re_part.at_y(0.0).coeffs(), &[-6.0, 11.0, -6.0, 1.0]);
    }

    #[test]
    fn roots_of_z2_plus_1() {
        let p = Poly::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_roots(
            &complex_roots(&p, &tol()).unwrap(),
            &[(c(0.0, 1.0), 1), (c(0.0, -1.0), 1)],
        );
    }

    #[test]
    fn fourth_roots_of_unity() {
        let p = Poly::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let want: Vec<_> = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]
            .into_iter()
            .map(|z| (z, 1))
            .collect();
        assert_roots(&complex_roots(&p, &tol()).unwrap(), &want);
    }

    #[test]
    fn double_complex_root() {
        let r = c(1.0, 2.0);
        let p = Poly::new(vec![c(-3.0, 4.0), c(-2.0, -4.0), c(1.0, 0.0)]);
        assert_eq!(p, poly_from_complex_roots(&[(r, 2)]));
        assert_roots(&complex_roots(&p, &tol()).unwrap(), &[(r, 2)]);
    }

    #[test]
    fn linear_and_constant() {
        let p = Poly::new(vec![c(2.0, -1.0), c(0.0, 1.0)]);
        let roots = complex_roots(&p, &tol()).unwrap();
        assert_roots(&roots, &[(c(1.0, 2.0), 1)]);
        assert!(matches!(
            complex_roots(&Poly::new(vec![c(3.0, 0.0)]), &tol()),
            Err(Error::DegreeTooLow { .. })
        ));
    }

    #[test]
    fn conjugate_closure_for_real_coefficients() {
        // (z^2 + 1)(z - 2)(z^2 - 2z + 5)
        let p = &(&Poly::new(vec![-2.0, 1.0]) * &Poly::new(vec![1.0, 0.0, 1.0])) * &Poly::new(vec![5.0, -2.0, 1.0]);
        let p = p.to_complex();
        assert!(p.to_real().is_some());
        let roots = complex_roots(&p, &tol()).unwrap();
        assert_roots(
            &roots,
            &[
                (c(0.0, 1.0), 1),
                (c(0.0, -1.0), 1),
                (c(2.0, 0.0), 1),
                (c(1.0, 2.0), 1),
                (c(1.0, -2.0), 1),
            ],
        );
        for r in &roots {
            assert!(roots
                .iter()
                .any(|s| (s.value - r.value.conj()).norm() <= 1e-6 && s.multiplicity == r.multiplicity));
        }
    }

    #[test]
    fn residuals_within_bound() {
        let p = poly_from_complex_roots(&[(c(0.5, -1.5), 1), (c(-2.0, 0.25), 2), (c(1.0, 1.0), 1)]);
        for r in complex_roots(&p, &tol()).unwrap() {
            assert!(r.residual <= 1e-6 * p.scale_at(r.value.norm()), "{r:?}");
        }
    }

    #[test]
    fn split_multiple_roots_are_merged() {
        let want = [(c(1.25, -0.5), 3), (c(-0.75, 2.0), 4), (c(2.0, 2.0), 1)];
        let p = poly_from_complex_roots(&want);
        let got = complex_roots(&p, &tol()).unwrap();
        assert_roots(&got, &want);
        assert_eq!(got.iter().map(|r| r.multiplicity).sum::<usize>(), 8);
    }

    #[test]
    fn degree_eight_real_coefficients() {
        let p = poly_from_complex_roots(&[
            (c(-3.0, 0.0), 1),
            (c(-1.0, 0.0), 1),
            (c(0.5, 0.0), 1),
            (c(4.0, 0.0), 1),
            (c(1.0, 1.0), 1),
            (c(1.0, -1.0), 1),
            (c(-2.0, 0.5), 1),
            (c(-2.0, -0.5), 1),
        ]);
        let got = complex_roots(&p, &tol()).unwrap();
        assert_eq!(got.len(), 8);
        assert!(got.iter().all(|r| r.multiplicity == 1));
    }
}
