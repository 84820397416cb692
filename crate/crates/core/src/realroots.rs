//! Real roots of real polynomials by recursion on the derivative chain.
//!
//! The real roots of `p'` cut the line into intervals on which `p` is
//! monotone. Each such interval holds at most one root of `p`, found by
//! bisection whenever the endpoint values have strictly opposite signs. A
//! critical point where `p` (numerically) vanishes is itself a root of
//! multiplicity at least two. The recursion bottoms out at degree two with
//! the closed-form formulas.

use crate::error::{Error, Result};
use crate::poly::{Coeff, Poly, RealPoly};
use crate::tolerances::Tolerances;

/// Relative residual below which a polynomial value counts as zero.
pub const ZERO_RESIDUAL_REL: f64 = 1e-9;

/// One real root.
#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    pub value: f64,
    /// Final bisection interval; `None` when the root came from a closed form.
    pub bracket: Option<(f64, f64)>,
    pub multiplicity: usize,
    /// `|p(value)|`
    pub residual: f64,
}

/// `|p(x)| <= ZERO_RESIDUAL_REL * scale(p, x)`
pub(crate) fn vanishes_at<T: Coeff>(p: &Poly<T>, x: T) -> bool {
    p.eval(x).magnitude() <= residual_threshold(p, x)
}

pub(crate) fn residual_threshold<T: Coeff>(p: &Poly<T>, x: T) -> f64 {
    ZERO_RESIDUAL_REL * p.scale_at(x.magnitude())
}

/// Bound on the rounding error of Horner evaluation at `x`.
fn rounding_level(p: &RealPoly, x: f64) -> f64 {
    let n = p.degree().unwrap_or(0) as f64;
    4.0 * (n + 1.0) * f64::EPSILON * p.scale_at(x.abs())
}

/// Bisection on a bracketing interval of a continuous function.
///
/// Halves until the interval is no wider than `root_tol * max(1, |mid|)` and
/// returns its midpoint.
pub fn bisect<F>(f: F, lo: f64, hi: f64, tol: &Tolerances) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    bisect_bracket(f, lo, hi, tol).map(|(_, mid, _)| mid)
}

/// Like [`bisect`], also returning the final interval `(lo, mid, hi)`.
pub(crate) fn bisect_bracket<F>(f: F, mut lo: f64, mut hi: f64, tol: &Tolerances) -> Result<(f64, f64, f64)>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!(
            "bisection needs lo < hi, got [{lo}, {hi}]"
        )));
    }
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok((lo, lo, lo));
    }
    if f_hi == 0.0 {
        return Ok((hi, hi, hi));
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoSignChange { lo, hi });
    }
    let lo_negative = f_lo < 0.0;
    for _ in 0..tol.max_iter {
        let mid = lo + (hi - lo) / 2.0;
        if hi - lo <= tol.root_tol * mid.abs().max(1.0) || mid <= lo || mid >= hi {
            return Ok((lo, mid, hi));
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok((mid, mid, mid));
        }
        if (f_mid < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = lo + (hi - lo) / 2.0;
    if hi - lo <= tol.root_tol * mid.abs().max(1.0) {
        Ok((lo, mid, hi))
    } else {
        Err(Error::MaxIterExceeded {
            iterations: tol.max_iter,
        })
    }
}

/// Roots of a linear or quadratic polynomial.
pub fn closed_form_roots(p: &RealPoly) -> Result<Vec<RootReport>> {
    let report = |value: f64, multiplicity: usize| RootReport {
        value,
        bracket: None,
        multiplicity,
        residual: p.eval(value).abs(),
    };
    match p.degree() {
        Some(1) => Ok(vec![report(-p.coeff(0) / p.coeff(1), 1)]),
        Some(2) => {
            let (c, b, a) = (p.coeff(0), p.coeff(1), p.coeff(2));
            let vertex = -b / (2.0 * a);
            if vanishes_at(p, vertex) {
                return Ok(vec![report(vertex, 2)]);
            }
            let disc = b * b - 4.0 * a * c;
            if disc < 0.0 {
                return Ok(Vec::new());
            }
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            let (mut r1, mut r2) = (q / a, c / q);
            if r1 > r2 {
                std::mem::swap(&mut r1, &mut r2);
            }
            Ok(vec![report(r1, 1), report(r2, 1)])
        }
        Some(d) if d > 2 => Err(Error::DegreeTooHigh { found: d, max: 2 }),
        found => Err(Error::DegreeTooLow { found, min: 1 }),
    }
}

/// All real roots of `p`, ascending, with multiplicities.
pub fn real_roots(p: &RealPoly, tol: &Tolerances) -> Result<Vec<RootReport>> {
    tol.validate()?;
    if p.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("polynomial has non-finite coefficients".into()));
    }
    let p = p.normalized(tol.zero_eps);
    match p.degree() {
        Some(d) if d >= 1 => {}
        found => return Err(Error::DegreeTooLow { found, min: 1 }),
    }
    let roots = roots_by_derivative_chain(&p, tol)?;
    finish(&p, roots, tol)
}

fn roots_by_derivative_chain(p: &RealPoly, tol: &Tolerances) -> Result<Vec<RootReport>> {
    if p.degree().unwrap_or(0) <= 2 {
        return closed_form_roots(p);
    }
    // Rescaling leaves the roots alone and keeps k!-sized factors from
    // overflowing deep in the chain.
    let critical = real_roots(&p.derivative().unit_scaled(), tol)?;
    let bound = p.root_bound()?;

    // Critical points sorted ascending, framed by the outer bounds.
    let mut points: Vec<(f64, Option<(f64, f64)>)> = Vec::with_capacity(critical.len() + 2);
    points.push((-bound, None));
    points.extend(
        critical
            .iter()
            .filter(|c| c.value > -bound && c.value < bound)
            .map(|c| (c.value, c.bracket)),
    );
    points.push((bound, None));

    let values: Vec<f64> = points.iter().map(|&(x, _)| p.eval(x)).collect();
    let is_root: Vec<bool> = points
        .iter()
        .enumerate()
        .map(|(i, &(x, _))| {
            if i == 0 || i == points.len() - 1 || !vanishes_at(p, x) {
                return false;
            }
            // A small value of clear sign, opposite to both neighbours, is a
            // pair of close simple roots rather than one double root.
            let v = values[i];
            let straddled = values[i - 1] * v < 0.0 && values[i + 1] * v < 0.0;
            !(straddled && v.abs() > rounding_level(p, x))
        })
        .collect();

    let mut found = Vec::new();
    for i in 0..points.len() {
        if is_root[i] {
            found.push(RootReport {
                value: points[i].0,
                bracket: points[i].1,
                multiplicity: 0,
                residual: 0.0,
            });
        }
        if i + 1 == points.len() || is_root[i] || is_root[i + 1] {
            continue;
        }
        let (lo, hi) = (points[i].0, points[i + 1].0);
        let (f_lo, f_hi) = (values[i], values[i + 1]);
        if f_lo.signum() != f_hi.signum() && f_lo != 0.0 && f_hi != 0.0 && lo < hi {
            let (blo, mid, bhi) = bisect_bracket(|x| p.eval(x), lo, hi, tol)?;
            found.push(RootReport {
                value: mid,
                bracket: (blo < bhi).then_some((blo, bhi)),
                multiplicity: 0,
                residual: 0.0,
            });
        }
    }
    Ok(found)
}

/// Sorts, merges roots closer than `cluster_tol` and attaches multiplicities.
fn finish(p: &RealPoly, mut roots: Vec<RootReport>, tol: &Tolerances) -> Result<Vec<RootReport>> {
    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut merged: Vec<RootReport> = Vec::with_capacity(roots.len());
    for r in roots {
        match merged.last_mut() {
            Some(last) if (r.value - last.value).abs() <= tol.cluster_tol => {
                if p.eval(r.value).abs() < p.eval(last.value).abs() {
                    *last = r;
                }
            }
            _ => merged.push(r),
        }
    }
    for r in &mut merged {
        r.residual = p.eval(r.value).abs();
        if r.multiplicity == 0 || p.degree().unwrap_or(0) > 2 {
            r.multiplicity = multiplicity_by_derivatives(p, r.value, tol).unwrap_or(1);
        }
    }
    Ok(merged)
}

/// Multiplicity by repeated deflation: the number of times `(z - r)` can be
/// divided out while the quotient still vanishes at `r`.
pub fn multiplicity<T: Coeff>(p: &Poly<T>, r: T, tol: &Tolerances) -> Result<usize> {
    let p = p.normalized(tol.zero_eps);
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        found => return Err(Error::DegreeTooLow { found, min: 1 }),
    };
    ensure_root(&p, r)?;
    let mut q = p;
    let mut m = 0;
    while m < deg && vanishes_at(&q, r) {
        q = q.deflate(r)?.quotient;
        m += 1;
    }
    Ok(m.max(1))
}

/// Multiplicity as the order of the first derivative that does not vanish at `r`.
pub fn multiplicity_by_derivatives<T: Coeff>(p: &Poly<T>, r: T, tol: &Tolerances) -> Result<usize> {
    let p = p.normalized(tol.zero_eps);
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        found => return Err(Error::DegreeTooLow { found, min: 1 }),
    };
    ensure_root(&p, r)?;
    let mut d = p.derivative();
    let mut m = 1;
    while m < deg && vanishes_at(&d, r) {
        d = d.derivative();
        m += 1;
    }
    Ok(m)
}

fn ensure_root<T: Coeff>(p: &Poly<T>, r: T) -> Result<()> {
    let residual = p.eval(r).magnitude();
    let threshold = residual_threshold(p, r);
    if residual <= threshold {
        Ok(())
    } else {
        Err(Error::NotARoot { residual, threshold })
    }
}

/// The positive solution of `x^n = a`.
pub fn nth_root(a: f64, n: u32, tol: &Tolerances) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidInput(format!("nth_root needs a > 0, got {a}")));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("nth_root needs n >= 2, got {n}")));
    }
    if a == 1.0 {
        return Ok(1.0);
    }
    let f = |x: f64| x.powi(n as i32) - a;
    let (lo, hi) = if a > 1.0 { (1.0, a) } else { (0.0, 1.0) };
    bisect(f, lo, hi, tol)
}

/// Convenience: real roots of `prod (x - r_i)^{m_i}`.
pub fn poly_from_real_roots(roots: &[(f64, usize)]) -> RealPoly {
    let expanded: Vec<f64> = roots.iter().flat_map(|&(r, m)| std::iter::repeat_n(r, m)).collect();
    Poly::from_roots(&expanded)
}
