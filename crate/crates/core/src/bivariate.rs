//! Real solutions of two bivariate polynomial equations.
//!
//! Both equations are viewed as polynomials in `y` whose coefficients are
//! polynomials in `x`. Writing the top two retained `y`-terms of each as
//!
//! ```text
//! p1 = a_m(x) y^m + a_v(x) y^v + q1(x, y)
//! p2 = b_m(x) y^m + b_v(x) y^v + q2(x, y)
//! ```
//!
//! the 2x2 determinants `D = a_m b_v - a_v b_m`, `D1 = a_v q2 - b_v q1` and
//! `D2 = b_m q1 - a_m q2` give the replacement pair
//! `{D y^v - D2, D2 y^(m-v) - D1}`, both of `y`-degree below `m` and both
//! polynomial combinations of `p1` and `p2`. Repeating this until one
//! equation is free of `y` yields an eliminant whose real roots contain every
//! solution's `x`. When `D` vanishes identically the pair `{p1, D1}` is used
//! instead, and when `D1` vanishes too the equations are proportional and the
//! single equation `F` is replaced by `{F, dF/dy}`: a finite zero set of `F`
//! consists of extrema, where the gradient vanishes.
//!
//! Every candidate abscissa (eliminant roots, roots of the leading and
//! determinant coefficients, and the line `y = 0`) is checked by substituting
//! into the original equations, solving in the remaining variable with
//! [`real_roots`], and keeping points whose residuals are small.

use crate::error::{Error, Result};
use crate::poly::{Poly, RealPoly};
use crate::realroots::{real_roots, ZERO_RESIDUAL_REL};
use crate::tolerances::Tolerances;

/// Relative residual a point must reach on both original equations.
pub const ACCEPT_RESIDUAL_REL: f64 = 1e-6;

/// Number of sample points used to decide whether a polynomial changes sign.
const SIGN_SAMPLES: usize = 1000;

/// A division by a known factor in `x` is accepted when every remainder
/// coefficient is this small relative to the dividend.
const EXACT_DIVISION_REL: f64 = 1e-9;

/// Relative distance within which two accepted points may be one smeared
/// multiple zero.
const MERGE_RADIUS: f64 = 1e-5;

/// Newton iterations spent refining each candidate point.
const POLISH_STEPS: usize = 30;

/// Largest `x`-degree an intermediate pair may reach before elimination gives up.
pub const MAX_ELIMINANT_DEGREE: usize = 400;

/// Dense real polynomial in `x` and `y`; `grid[i][j]` multiplies `x^i y^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivarPoly {
    grid: Vec<Vec<f64>>,
}

impl BivarPoly {
    /// Builds from a possibly ragged grid, dropping exact trailing zeros.
    pub fn new(grid: Vec<Vec<f64>>) -> Self {
        let width = grid.iter().map(Vec::len).max().unwrap_or(0);
        let grid = grid
            .into_iter()
            .map(|mut row| {
                row.resize(width, 0.0);
                row
            })
            .collect();
        let mut p = Self { grid };
        p.trim_exact();
        p
    }

    pub fn zero() -> Self {
        Self { grid: Vec::new() }
    }

    /// Sum of `c x^i y^j` terms; repeated exponents accumulate.
    pub fn from_terms(terms: &[(usize, usize, f64)]) -> Self {
        let rows = terms.iter().map(|t| t.0 + 1).max().unwrap_or(0);
        let cols = terms.iter().map(|t| t.1 + 1).max().unwrap_or(0);
        let mut grid = vec![vec![0.0; cols]; rows];
        for &(i, j, c) in terms {
            grid[i][j] += c;
        }
        Self::new(grid)
    }

    pub fn from_x_poly(p: &RealPoly) -> Self {
        Self::new(p.coeffs().iter().map(|&c| vec![c]).collect())
    }

    pub fn from_y_poly(p: &RealPoly) -> Self {
        Self::new(vec![p.coeffs().to_vec()])
    }

    pub fn grid(&self) -> &[Vec<f64>] {
        &self.grid
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        self.grid.get(i).and_then(|row| row.get(j)).copied().unwrap_or(0.0)
    }

    /// Non-zero terms as `(i, j, c)`, ordered by `i` then `j`.
    pub fn terms(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (i, row) in self.grid.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c != 0.0 {
                    out.push((i, j, c));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn deg_x(&self) -> Option<usize> {
        self.grid.len().checked_sub(1)
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.grid.first().map(|row| row.len() - 1)
    }

    /// Degree at least one in each variable.
    pub fn is_pure(&self) -> bool {
        self.deg_x().unwrap_or(0) >= 1 && self.deg_y().unwrap_or(0) >= 1
    }

    pub fn is_y_free(&self) -> bool {
        self.deg_y().unwrap_or(0) == 0
    }

    pub fn is_x_free(&self) -> bool {
        self.deg_x().unwrap_or(0) == 0
    }

    pub fn max_abs(&self) -> f64 {
        self.grid.iter().flatten().map(|c| c.abs()).fold(0.0, f64::max)
    }

    fn is_finite(&self) -> bool {
        self.grid.iter().flatten().all(|c| c.is_finite())
    }

    fn norm1(&self) -> f64 {
        self.grid.iter().flatten().map(|c| c.abs()).sum()
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.grid
            .iter()
            .rev()
            .fold(0.0, |acc, row| acc * x + row.iter().rev().fold(0.0, |a, &c| a * y + c))
    }

    /// `max(1, sum |c_ij| max(1,|x|)^i max(1,|y|)^j)`
    pub fn scale_at(&self, x: f64, y: f64) -> f64 {
        let (ax, ay) = (x.abs().max(1.0), y.abs().max(1.0));
        self.grid
            .iter()
            .rev()
            .fold(0.0, |acc, row| {
                acc * ax + row.iter().rev().fold(0.0, |a, &c| a * ay + c.abs())
            })
            .max(1.0)
    }

    /// Drops every coefficient with magnitude `<= zero_eps * max |c_ij|`.
    pub fn normalized(&self, zero_eps: f64) -> Self {
        let cutoff = zero_eps * self.max_abs();
        Self::new(
            self.grid
                .iter()
                .map(|row| row.iter().map(|&c| if c.abs() <= cutoff { 0.0 } else { c }).collect())
                .collect(),
        )
    }

    /// Same zero set, largest coefficient magnitude 1.
    pub fn unit_scaled(&self) -> Self {
        let m = self.max_abs();
        if m == 0.0 {
            return self.clone();
        }
        self.scale(1.0 / m)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(
            self.grid
                .iter()
                .map(|row| row.iter().map(|&a| a * c).collect())
                .collect(),
        )
    }

    pub fn partial_y(&self) -> Self {
        Self::new(
            self.grid
                .iter()
                .map(|row| row.iter().enumerate().skip(1).map(|(j, &c)| j as f64 * c).collect())
                .collect(),
        )
    }

    pub fn partial_x(&self) -> Self {
        Self::new(
            self.grid
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, row)| row.iter().map(|&c| i as f64 * c).collect())
                .collect(),
        )
    }

    /// `p(y, x)`
    pub fn swap_xy(&self) -> Self {
        let Some(dy) = self.deg_y() else { return Self::zero() };
        Self::new((0..=dy).map(|j| self.grid.iter().map(|row| row[j]).collect()).collect())
    }

    /// Coefficient of `y^k` as a polynomial in `x`.
    pub fn y_coeff(&self, k: usize) -> RealPoly {
        Poly::new(self.grid.iter().map(|row| row.get(k).copied().unwrap_or(0.0)).collect())
    }

    pub fn y_expand(&self) -> YExpansion {
        let n = self.deg_y().map_or(0, |d| d + 1);
        YExpansion {
            coeffs_in_x: (0..n).map(|k| self.y_coeff(k)).collect(),
        }
    }

    /// `p(x0, y)` as a polynomial in `y`.
    pub fn at_x(&self, x0: f64) -> RealPoly {
        let n = self.deg_y().map_or(0, |d| d + 1);
        Poly::new((0..n).map(|k| self.y_coeff(k).eval(x0)).collect())
    }

    /// `p(x, y0)` as a polynomial in `x`.
    pub fn at_y(&self, y0: f64) -> RealPoly {
        Poly::new(
            self.grid
                .iter()
                .map(|row| row.iter().rev().fold(0.0, |a, &c| a * y0 + c))
                .collect(),
        )
    }

    /// `y^k * p`
    pub fn mul_y_pow(&self, k: usize) -> Self {
        Self::new(
            self.grid
                .iter()
                .map(|row| {
                    let mut shifted = vec![0.0; k];
                    shifted.extend_from_slice(row);
                    shifted
                })
                .collect(),
        )
    }

    /// `a(x) * p`
    pub fn mul_x_poly(&self, a: &RealPoly) -> Self {
        if self.is_zero() || a.is_zero() {
            return Self::zero();
        }
        let width = self.grid[0].len();
        let mut grid = vec![vec![0.0; width]; self.grid.len() + a.coeffs().len() - 1];
        for (i, row) in self.grid.iter().enumerate() {
            for (k, &ak) in a.coeffs().iter().enumerate() {
                for (j, &c) in row.iter().enumerate() {
                    grid[i + k][j] += ak * c;
                }
            }
        }
        Self::new(grid)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut grid =
            vec![vec![0.0; self.grid[0].len() + rhs.grid[0].len() - 1]; self.grid.len() + rhs.grid.len() - 1];
        for (i, row) in self.grid.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (k, rrow) in rhs.grid.iter().enumerate() {
                    for (l, &b) in rrow.iter().enumerate() {
                        grid[i + k][j + l] += a * b;
                    }
                }
            }
        }
        Self::new(grid)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a - b)
    }

    /// Terms with `y`-power below `v`.
    fn below_y(&self, v: usize) -> Self {
        Self::new(
            self.grid
                .iter()
                .map(|row| row.iter().take(v).copied().collect())
                .collect(),
        )
    }

    /// Largest `k` with `y^k` dividing `p` (0 for the zero polynomial).
    fn y_power_content(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        let width = self.grid[0].len();
        (0..width)
            .find(|&j| self.grid.iter().any(|row| row[j] != 0.0))
            .unwrap_or(0)
    }

    fn div_y_pow(&self, k: usize) -> Self {
        Self::new(self.grid.iter().map(|row| row[k.min(row.len())..].to_vec()).collect())
    }

    /// Largest `k` with `x^k` dividing `p`.
    fn x_power_content(&self) -> usize {
        self.grid
            .iter()
            .position(|row| row.iter().any(|&c| c != 0.0))
            .unwrap_or(0)
    }

    fn div_x_pow(&self, k: usize) -> Self {
        Self::new(self.grid[k.min(self.grid.len())..].to_vec())
    }

    /// `p / c(x)` when `c` divides every `y`-coefficient up to rounding.
    fn div_x_factor(&self, c: &RealPoly) -> Option<Self> {
        let expansion = self.y_expand();
        let mut columns = Vec::with_capacity(expansion.coeffs_in_x.len());
        for col in &expansion.coeffs_in_x {
            if col.is_zero() {
                columns.push(RealPoly::zero());
                continue;
            }
            let (q, r) = col.div_rem(c).ok()?;
            let finite = q.coeffs().iter().chain(r.coeffs()).all(|c| c.is_finite());
            if !finite || r.max_abs() > EXACT_DIVISION_REL * col.max_abs() {
                return None;
            }
            columns.push(q);
        }
        Some(YExpansion { coeffs_in_x: columns }.to_bivar())
    }

    fn combine(&self, rhs: &Self, op: impl Fn(f64, f64) -> f64) -> Self {
        let rows = self.grid.len().max(rhs.grid.len());
        let cols = self
            .grid
            .first()
            .map_or(0, Vec::len)
            .max(rhs.grid.first().map_or(0, Vec::len));
        Self::new(
            (0..rows)
                .map(|i| (0..cols).map(|j| op(self.coeff(i, j), rhs.coeff(i, j))).collect())
                .collect(),
        )
    }

    fn trim_exact(&mut self) {
        while self.grid.last().is_some_and(|row| row.iter().all(|&c| c == 0.0)) {
            self.grid.pop();
        }
        loop {
            let last_col_zero = self
                .grid
                .first()
                .is_some_and(|row| !row.is_empty() && self.grid.iter().all(|r| *r.last().unwrap() == 0.0));
            if !last_col_zero {
                break;
            }
            for row in &mut self.grid {
                row.pop();
            }
        }
        if self.grid.first().is_some_and(Vec::is_empty) {
            self.grid.clear();
        }
    }
}

/// `p(x, y) = sum_k coeffs_in_x[k](x) * y^k`
#[derive(Debug, Clone, PartialEq)]
pub struct YExpansion {
    pub coeffs_in_x: Vec<RealPoly>,
}

impl YExpansion {
    pub fn deg_y(&self) -> Option<usize> {
        self.coeffs_in_x.iter().rposition(|c| !c.is_zero())
    }

    pub fn coeff(&self, k: usize) -> RealPoly {
        self.coeffs_in_x.get(k).cloned().unwrap_or_else(RealPoly::zero)
    }

    pub fn to_bivar(&self) -> BivarPoly {
        let rows = self.coeffs_in_x.iter().map(|c| c.coeffs().len()).max().unwrap_or(0);
        BivarPoly::new(
            (0..rows)
                .map(|i| self.coeffs_in_x.iter().map(|c| c.coeff(i)).collect())
                .collect(),
        )
    }
}

/// Determinants of one elimination step; `D` is free of `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationTriple {
    pub d: BivarPoly,
    pub d1: BivarPoly,
    pub d2: BivarPoly,
    /// `m`: the shared top `y`-degree.
    pub top: usize,
    /// `v`: the next `y`-power present in either equation.
    pub next: usize,
    /// `|a_m| |b_v| + |a_v| |b_m|` in 1-norms, the magnitude `D` is judged against.
    d_scale: f64,
    /// Same for `D1`.
    d1_scale: f64,
}

impl EliminationTriple {
    pub fn d_vanishes(&self, zero_eps: f64) -> bool {
        self.d.max_abs() <= zero_eps * self.d_scale
    }

    pub fn d1_vanishes(&self, zero_eps: f64) -> bool {
        self.d1.max_abs() <= zero_eps * self.d1_scale
    }
}

/// The determinants over the top two `y`-terms of two expansions of equal
/// `y`-degree.
pub fn cramer_triple(e1: &YExpansion, e2: &YExpansion) -> Result<EliminationTriple> {
    let (m1, m2) = (e1.deg_y().unwrap_or(0), e2.deg_y().unwrap_or(0));
    if m1 == 0 && m2 == 0 {
        return Err(Error::NotEliminable);
    }
    if m1 != m2 {
        return Err(Error::InvalidInput(format!(
            "top y-degrees must match before elimination, got {m1} and {m2}"
        )));
    }
    let m = m1;
    let v = (0..m)
        .rev()
        .find(|&k| !e1.coeff(k).is_zero() || !e2.coeff(k).is_zero())
        .unwrap_or(0);
    let (am, av, bm, bv) = (e1.coeff(m), e1.coeff(v), e2.coeff(m), e2.coeff(v));
    let q1 = e1.to_bivar().below_y(v);
    let q2 = e2.to_bivar().below_y(v);

    let d = BivarPoly::from_x_poly(&(&(&am * &bv) - &(&av * &bm)));
    let d1 = q2.mul_x_poly(&av).sub(&q1.mul_x_poly(&bv));
    let d2 = q1.mul_x_poly(&bm).sub(&q2.mul_x_poly(&am));

    let n1 = |p: &RealPoly| p.coeffs().iter().map(|c| c.abs()).sum::<f64>();
    let d_scale = n1(&am) * n1(&bv) + n1(&av) * n1(&bm);
    let d1_scale = n1(&av) * q2.norm1() + n1(&bv) * q1.norm1();
    Ok(EliminationTriple {
        d,
        d1,
        d2,
        top: m,
        next: v,
        d_scale,
        d1_scale,
    })
}

/// Which construction produced a reduced pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `D` not identically zero: `{D y^v - D2, D2 y^(m-v) - D1}`.
    Cramer,
    /// `D` identically zero, `D1` not: `{p1, D1}`, lowered by one pseudo-division.
    Singular,
    /// Proportional equations: the gradient pair `{F, dF/dy}`, then reduced.
    Gradient,
}

/// One degree-lowering step.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub q1: BivarPoly,
    pub q2: BivarPoly,
    /// Polynomials in `x` whose roots must be checked separately: leading and
    /// next coefficients and `D`.
    pub guards: Vec<RealPoly>,
    /// A factor of `y` was divided out or multiplied in, so `y = 0` must be
    /// checked separately.
    pub y_zero: bool,
    pub branch: Branch,
}

/// Replaces `{p1, p2}` by a pair of strictly smaller top `y`-degree whose
/// solution set contains the original one.
pub fn reduce_once(p1: &BivarPoly, p2: &BivarPoly, tol: &Tolerances) -> Result<Reduction> {
    reduce_step(p1, p2, tol, false)
}

fn reduce_step(p1: &BivarPoly, p2: &BivarPoly, tol: &Tolerances, in_gradient: bool) -> Result<Reduction> {
    let (f, kf) = strip_y_power(&p1.normalized(tol.zero_eps));
    let (g, kg) = strip_y_power(&p2.normalized(tol.zero_eps));
    let mut y_zero = kf > 0 || kg > 0;
    let (mf, mg) = (f.deg_y().unwrap_or(0), g.deg_y().unwrap_or(0));
    if mf == 0 && mg == 0 {
        return Err(Error::NotEliminable);
    }
    let (hi, lo) = if mf >= mg { (f, g) } else { (g, f) };
    let m = hi.deg_y().unwrap_or(0);
    let lo_deg = lo.deg_y().unwrap_or(0);
    let lo_eq = if lo_deg < m && !lo.is_zero() {
        y_zero = true;
        lo.mul_y_pow(m - lo_deg)
    } else {
        lo.clone()
    };

    let e1 = hi.y_expand();
    let e2 = lo_eq.y_expand();
    let triple = cramer_triple(&e1, &e2)?;
    let v = triple.next;
    let mut guards: Vec<RealPoly> = [e1.coeff(m), e2.coeff(m), e1.coeff(v), e2.coeff(v)]
        .into_iter()
        .filter(|c| c.degree().unwrap_or(0) >= 1)
        .collect();

    if !triple.d_vanishes(tol.zero_eps) {
        guards.push(triple.d.y_coeff(0));
        let r1 = triple.d.mul_y_pow(v).sub(&triple.d2);
        let r2 = triple.d2.mul_y_pow(m - v).sub(&triple.d1);
        let scale1 = triple.d.norm1() + triple.d2.norm1();
        let scale2 = triple.d2.norm1() + triple.d1.norm1();
        let r1 = clean(&r1, scale1, tol);
        let r2 = clean(&r2, scale2, tol);
        let (q1, q2) = match (r1.is_zero(), r2.is_zero()) {
            (false, false) => (r1, r2),
            (false, true) => complete_pair(r1, &hi, &lo, tol),
            (true, false) => complete_pair(r2, &hi, &lo, tol),
            (true, true) => (r1, r2),
        };
        let (q1, q2) = strip_x_factors(q1, q2, &mut guards);
        return Ok(Reduction {
            q1,
            q2,
            guards,
            y_zero,
            branch: Branch::Cramer,
        });
    }

    if !triple.d1_vanishes(tol.zero_eps) {
        let d1 = triple.d1.unit_scaled();
        let (q1, q2) = complete_pair(d1, &hi, &lo, tol);
        let (q1, q2) = strip_x_factors(q1, q2, &mut guards);
        return Ok(Reduction {
            q1,
            q2,
            guards,
            y_zero,
            branch: Branch::Singular,
        });
    }

    // Proportional equations: only the single equation `hi` remains.
    if in_gradient {
        return Err(Error::InfiniteSolutions {
            diagnostic: "the equations stay proportional after passing to the gradient system".into(),
        });
    }
    if let Some((a, b)) = sign_change(&hi, tol) {
        return Err(Error::InfiniteSolutions {
            diagnostic: format!(
                "the equations are proportional and the common equation changes sign between ({}, {}) and ({}, {})",
                a.0, a.1, b.0, b.1
            ),
        });
    }
    let mut inner = reduce_step(&hi, &hi.partial_y(), tol, true)?;
    inner.guards.extend(guards);
    inner.y_zero |= y_zero;
    inner.branch = Branch::Gradient;
    Ok(inner)
}

/// Divides powers of `x` out of both members; `x = 0` then becomes a guard.
fn strip_x_factors(q1: BivarPoly, q2: BivarPoly, guards: &mut Vec<RealPoly>) -> (BivarPoly, BivarPoly) {
    let mut strip = |q: BivarPoly| {
        let k = q.x_power_content();
        if k == 0 {
            return q;
        }
        guards.push(Poly::new(vec![0.0, 1.0]));
        q.div_x_pow(k)
    };
    let q1 = strip(q1);
    let q2 = strip(q2);
    (q1, q2)
}

/// Divides out the largest power of `y`.
fn strip_y_power(p: &BivarPoly) -> (BivarPoly, usize) {
    let k = p.y_power_content();
    if k == 0 {
        (p.clone(), 0)
    } else {
        (p.div_y_pow(k), k)
    }
}

/// Zeroes coefficients negligible against `scale` and rescales to unit
/// magnitude.
fn clean(p: &BivarPoly, scale: f64, tol: &Tolerances) -> BivarPoly {
    let cutoff = tol.zero_eps * scale;
    let p = BivarPoly::new(
        p.grid
            .iter()
            .map(|row| row.iter().map(|&c| if c.abs() <= cutoff { 0.0 } else { c }).collect())
            .collect(),
    );
    p.unit_scaled()
}

/// Pairs a lower-degree member `r` of the ideal with a pseudo-remainder of
/// one of the inputs by `r`, so that both members sit below the input degree.
fn complete_pair(r: BivarPoly, hi: &BivarPoly, lo: &BivarPoly, tol: &Tolerances) -> (BivarPoly, BivarPoly) {
    if r.is_y_free() {
        return (r, BivarPoly::zero());
    }
    for source in [hi, lo] {
        if source.is_zero() {
            continue;
        }
        let rem = pseudo_remainder(source, &r, tol);
        if !rem.is_zero() {
            return (r, rem);
        }
    }
    (r, BivarPoly::zero())
}

/// Pseudo-remainder of `f` by `g` in `y`; a combination `c(x) f - Q g` of
/// `y`-degree below `deg_y g`.
fn pseudo_remainder(f: &BivarPoly, g: &BivarPoly, tol: &Tolerances) -> BivarPoly {
    let dg = g.deg_y().unwrap_or(0);
    if dg == 0 {
        return BivarPoly::zero();
    }
    let lead = g.y_coeff(dg);
    let mut r = f.clone();
    while let Some(dr) = r.deg_y() {
        if dr < dg || r.is_zero() {
            break;
        }
        let lr = r.y_coeff(dr);
        let scale = r.norm1() * lead.coeffs().iter().map(|c| c.abs()).sum::<f64>()
            + g.norm1() * lr.coeffs().iter().map(|c| c.abs()).sum::<f64>();
        let next = r.mul_x_poly(&lead).sub(&g.mul_x_poly(&lr).mul_y_pow(dr - dg));
        // The top column cancels exactly in exact arithmetic.
        let next = BivarPoly::new(
            next.grid
                .iter()
                .map(|row| {
                    let mut row = row.clone();
                    if row.len() > dr {
                        row[dr] = 0.0;
                    }
                    row
                })
                .collect(),
        );
        r = clean(&next, scale, tol);
    }
    r
}

/// Two sample points where `p` has strictly opposite signs, if any are found.
fn sign_change(p: &BivarPoly, _tol: &Tolerances) -> Option<((f64, f64), (f64, f64))> {
    let mut pos = None;
    let mut neg = None;
    for (x, y) in sample_points(SIGN_SAMPLES) {
        let value = p.eval(x, y);
        let threshold = ZERO_RESIDUAL_REL * p.scale_at(x, y);
        if value > threshold {
            pos.get_or_insert((x, y));
        } else if value < -threshold {
            neg.get_or_insert((x, y));
        }
        if let (Some(a), Some(b)) = (pos, neg) {
            return Some((a, b));
        }
    }
    None
}

/// Deterministic Halton points spread over boxes of growing half-width.
fn sample_points(n: usize) -> impl Iterator<Item = (f64, f64)> {
    const RADII: [f64; 5] = [0.5, 2.0, 8.0, 32.0, 128.0];
    (0..n).map(move |k| {
        let r = RADII[k % RADII.len()];
        let u = halton(k as u64 + 1, 2);
        let v = halton(k as u64 + 1, 3);
        ((2.0 * u - 1.0) * r, (2.0 * v - 1.0) * r)
    })
}

fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

/// One verified solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solution {
    pub x: f64,
    pub y: f64,
    pub residual1: f64,
    pub residual2: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolutionSet {
    pub points: Vec<Solution>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The finite set of real solutions of `{p1 = 0, p2 = 0}`.
pub fn solve_system(p1: &BivarPoly, p2: &BivarPoly, tol: &Tolerances) -> Result<SolutionSet> {
    tol.validate()?;
    let p1 = p1.normalized(tol.zero_eps);
    let p2 = p2.normalized(tol.zero_eps);
    if p1.is_zero() && p2.is_zero() {
        return Err(Error::BothZero);
    }
    let mut verifier = Verifier::new(&p1, &p2, tol);

    // A non-zero constant has no zeros.
    let constant = |p: &BivarPoly| !p.is_zero() && p.is_x_free() && p.is_y_free();
    if constant(&p1) || constant(&p2) {
        return Ok(SolutionSet::default());
    }

    if p1.is_zero() || p2.is_zero() {
        let f = if p1.is_zero() { &p2 } else { &p1 };
        if let Some((a, b)) = sign_change(f, tol) {
            return Err(Error::InfiniteSolutions {
                diagnostic: format!(
                    "a single equation that changes sign between ({}, {}) and ({}, {}) has a curve of zeros",
                    a.0, a.1, b.0, b.1
                ),
            });
        }
        if f.is_y_free() {
            verifier.add_x_roots(&f.y_coeff(0))?;
        } else {
            eliminate(f, &f.partial_y(), &mut verifier, tol)?;
        }
    } else if p1.is_y_free() || p2.is_y_free() {
        for p in [&p1, &p2] {
            if p.is_y_free() {
                verifier.add_x_roots(&p.y_coeff(0))?;
            }
        }
    } else if p1.is_x_free() || p2.is_x_free() {
        for p in [&p1, &p2] {
            if p.is_x_free() {
                verifier.add_y_roots(&p.at_x(0.0))?;
            }
        }
    } else {
        eliminate(&p1, &p2, &mut verifier, tol)?;
    }
    verifier.y_candidates.push(0.0);
    verifier.finish()
}

/// Runs the reduction loop, registering eliminant and guard roots as candidates.
fn eliminate(p1: &BivarPoly, p2: &BivarPoly, verifier: &mut Verifier, tol: &Tolerances) -> Result<()> {
    let limit = p1.deg_y().unwrap_or(0) + p2.deg_y().unwrap_or(0) + 1;
    let (mut f, mut g) = (p1.unit_scaled(), p2.unit_scaled());
    let mut factors: Vec<RealPoly> = Vec::new();
    for _ in 0..=limit {
        if let Some(e) = [&f, &g].into_iter().find(|p| !p.is_zero() && p.is_y_free()) {
            return verifier.add_x_roots(&e.y_coeff(0));
        }
        if f.is_zero() || g.is_zero() {
            // Both members of the pair share a factor with the inputs; treat
            // the survivor as a single equation.
            let survivor = if f.is_zero() { &g } else { &f };
            if survivor.is_zero() {
                return Err(Error::InfiniteSolutions {
                    diagnostic: "the elimination collapsed to the zero polynomial".into(),
                });
            }
            return single_equation(survivor, verifier, tol);
        }
        let red = reduce_once(&f, &g, tol)?;
        for guard in &red.guards {
            verifier.add_x_roots(guard)?;
            remember_factor(&mut factors, guard, tol);
        }
        if red.y_zero {
            verifier.y_candidates.push(0.0);
        }
        f = divide_known_factors(red.q1, &factors);
        g = divide_known_factors(red.q2, &factors);
        if !(f.is_finite() && g.is_finite()) {
            return Err(Error::DegreeTooHigh {
                found: f.deg_x().max(g.deg_x()).unwrap_or(0),
                max: MAX_ELIMINANT_DEGREE,
            });
        }
        let dx = f.deg_x().max(g.deg_x()).unwrap_or(0);
        if dx > MAX_ELIMINANT_DEGREE {
            return Err(Error::DegreeTooHigh {
                found: dx,
                max: MAX_ELIMINANT_DEGREE,
            });
        }
    }
    Err(Error::InvalidInput(
        "elimination did not terminate within its degree budget".into(),
    ))
}

/// Keeps `guard` (normalized, degree at least one) for later exact division.
fn remember_factor(factors: &mut Vec<RealPoly>, guard: &RealPoly, tol: &Tolerances) {
    let g = guard.normalized(tol.zero_eps).unit_scaled();
    if g.degree().unwrap_or(0) >= 1 && !factors.contains(&g) {
        factors.push(g);
    }
}

/// Divides out every known `x`-factor the member is exactly divisible by.
///
/// Roots of the factors are already candidates, so removing them loses no
/// solution; it only stops the `x`-degree from compounding across steps.
fn divide_known_factors(mut q: BivarPoly, factors: &[RealPoly]) -> BivarPoly {
    if q.is_zero() {
        return q;
    }
    for c in factors {
        while q.deg_x().unwrap_or(0) >= c.degree().unwrap_or(0) {
            match q.div_x_factor(c) {
                Some(next) if !next.is_zero() => q = next,
                _ => break,
            }
        }
    }
    q.unit_scaled()
}

/// Zeros of a single equation, assumed finite: `{F, dF/dy}`.
fn single_equation(f: &BivarPoly, verifier: &mut Verifier, tol: &Tolerances) -> Result<()> {
    if let Some((a, b)) = sign_change(f, tol) {
        return Err(Error::InfiniteSolutions {
            diagnostic: format!(
                "the equations share a factor that changes sign between ({}, {}) and ({}, {})",
                a.0, a.1, b.0, b.1
            ),
        });
    }
    let fy = f.partial_y();
    if fy.is_zero() {
        return verifier.add_x_roots(&f.y_coeff(0));
    }
    let red = reduce_step(f, &fy, tol, true)?;
    for guard in &red.guards {
        verifier.add_x_roots(guard)?;
    }
    verifier.y_candidates.push(0.0);
    // One gradient step brings the pair below deg_y F; finish with the main loop.
    let (q1, q2) = (red.q1, red.q2);
    if q1.is_zero() || q2.is_zero() {
        let survivor = if q1.is_zero() { q2 } else { q1 };
        if survivor.is_y_free() && !survivor.is_zero() {
            return verifier.add_x_roots(&survivor.y_coeff(0));
        }
        return Err(Error::InfiniteSolutions {
            diagnostic: "the gradient system of the common factor collapsed".into(),
        });
    }
    eliminate(&q1, &q2, verifier, tol)
}

/// Collects candidate coordinates and checks them against the original pair.
struct Verifier<'a> {
    p1: &'a BivarPoly,
    p2: &'a BivarPoly,
    tol: &'a Tolerances,
    /// Partial derivatives `[d/dx p1, d/dy p1, d/dx p2, d/dy p2]`.
    jacobian: [BivarPoly; 4],
    /// `[xx, xy, yy]` second partials of each equation.
    hessians: [[BivarPoly; 3]; 2],
    x_candidates: Vec<f64>,
    y_candidates: Vec<f64>,
    cap: usize,
}

impl<'a> Verifier<'a> {
    fn new(p1: &'a BivarPoly, p2: &'a BivarPoly, tol: &'a Tolerances) -> Self {
        let dx = p1.deg_x().unwrap_or(0).max(p2.deg_x().unwrap_or(0));
        let dy = p1.deg_y().unwrap_or(0).max(p2.deg_y().unwrap_or(0));
        Self {
            p1,
            p2,
            tol,
            jacobian: [p1.partial_x(), p1.partial_y(), p2.partial_x(), p2.partial_y()],
            hessians: [p1, p2].map(|p| {
                let (px, py) = (p.partial_x(), p.partial_y());
                [px.partial_x(), px.partial_y(), py.partial_y()]
            }),
            x_candidates: Vec::new(),
            y_candidates: Vec::new(),
            cap: 10 * (dx + 1) * (dy + 1),
        }
    }

    fn add_x_roots(&mut self, p: &RealPoly) -> Result<()> {
        let p = p.normalized(self.tol.zero_eps);
        if p.degree().unwrap_or(0) >= 1 {
            self.x_candidates
                .extend(real_roots(&p, self.tol)?.iter().map(|r| r.value));
        }
        Ok(())
    }

    fn add_y_roots(&mut self, p: &RealPoly) -> Result<()> {
        let p = p.normalized(self.tol.zero_eps);
        if p.degree().unwrap_or(0) >= 1 {
            self.y_candidates
                .extend(real_roots(&p, self.tol)?.iter().map(|r| r.value));
        }
        Ok(())
    }

    fn finish(mut self) -> Result<SolutionSet> {
        let xs = dedup(std::mem::take(&mut self.x_candidates), self.tol.cluster_tol);
        let ys = dedup(std::mem::take(&mut self.y_candidates), self.tol.cluster_tol);
        let count = xs.len() + ys.len();
        if count > self.cap {
            return Err(Error::CandidateOverflow { count, cap: self.cap });
        }
        let mut points = Vec::new();
        for &x in &xs {
            let (a, b) = (specialize(self.p1, x, false), specialize(self.p2, x, false));
            for y in self.line_roots(&a, &b, &format!("x = {x}"))? {
                self.accept(x, y, &mut points);
            }
        }
        for &y in &ys {
            let (a, b) = (specialize(self.p1, y, true), specialize(self.p2, y, true));
            for x in self.line_roots(&a, &b, &format!("y = {y}"))? {
                self.accept(x, y, &mut points);
            }
        }
        Ok(SolutionSet {
            points: self.cluster(points),
        })
    }

    /// Roots of both restrictions to a line; the line itself when both vanish.
    fn line_roots(&self, a: &RealPoly, b: &RealPoly, line: &str) -> Result<Vec<f64>> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InfiniteSolutions {
                diagnostic: format!("every point of the line {line} solves both equations"),
            });
        }
        let mut out = Vec::new();
        for p in [a, b] {
            let p = p.normalized(self.tol.zero_eps);
            if p.degree().unwrap_or(0) >= 1 {
                out.extend(real_roots(&p, self.tol)?.iter().map(|r| r.value));
            }
        }
        Ok(out)
    }

    /// Scaled residual used to compare nearby candidates.
    fn badness(&self, x: f64, y: f64) -> f64 {
        self.p1.eval(x, y).abs() / self.p1.scale_at(x, y) + self.p2.eval(x, y).abs() / self.p2.scale_at(x, y)
    }

    /// Newton steps on the original pair, kept only while they lower the
    /// residual. Where the Jacobian is singular (duplicated, proportional or
    /// tangent equations) the step instead seeks a critical point of the
    /// worse equation: a zero of a one-signed equation is an extremum.
    fn polish(&self, mut x: f64, mut y: f64) -> (f64, f64) {
        let mut bad = self.badness(x, y);
        for _ in 0..POLISH_STEPS {
            if bad == 0.0 {
                break;
            }
            let Some((nx, ny)) = self.newton_step(x, y).or_else(|| self.extremum_step(x, y)) else {
                break;
            };
            let next = self.badness(nx, ny);
            if !(next < bad) {
                break;
            }
            (x, y, bad) = (nx, ny, next);
        }
        (x, y)
    }

    fn newton_step(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        let [ax, ay, bx, by] = self.jacobian.each_ref().map(|d| d.eval(x, y));
        let (r1, r2) = (self.p1.eval(x, y), self.p2.eval(x, y));
        solve2(ax, ay, bx, by, r1, r2).map(|(dx, dy)| (x - dx, y - dy))
    }

    fn extremum_step(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        let first = self.p1.eval(x, y).abs() / self.p1.scale_at(x, y);
        let second = self.p2.eval(x, y).abs() / self.p2.scale_at(x, y);
        let k = usize::from(second > first);
        let [fxx, fxy, fyy] = self.hessians[k].each_ref().map(|d| d.eval(x, y));
        let (gx, gy) = (self.jacobian[2 * k].eval(x, y), self.jacobian[2 * k + 1].eval(x, y));
        solve2(fxx, fxy, fxy, fyy, gx, gy).map(|(dx, dy)| (x - dx, y - dy))
    }

    /// Keeps the best point of each group. Points closer than `cluster_tol`
    /// always merge; points within [`MERGE_RADIUS`] merge when the residual
    /// shows no bump between them, which is how one multiple zero smeared by
    /// rounding looks, as opposed to two distinct zeros.
    fn cluster(&self, mut points: Vec<Solution>) -> Vec<Solution> {
        let bad = |s: &Solution| self.badness(s.x, s.y);
        points.sort_by(|a, b| bad(a).total_cmp(&bad(b)));
        let mut kept: Vec<Solution> = Vec::new();
        for s in points {
            let same = kept.iter().any(|k| {
                let dist = (k.x - s.x).hypot(k.y - s.y);
                if dist <= self.tol.cluster_tol {
                    return true;
                }
                let reach = MERGE_RADIUS * k.x.abs().max(k.y.abs()).max(1.0);
                dist <= reach && !self.bump_between(k, &s)
            });
            if !same {
                kept.push(s);
            }
        }
        kept.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        kept
    }

    fn bump_between(&self, a: &Solution, b: &Solution) -> bool {
        let ends = self.badness(a.x, a.y).max(self.badness(b.x, b.y));
        let floor = 64.0 * f64::EPSILON;
        (1..8).any(|k| {
            let t = k as f64 / 8.0;
            let (x, y) = (a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
            self.badness(x, y) > 4.0 * ends + floor
        })
    }

    fn accept(&self, x: f64, y: f64, points: &mut Vec<Solution>) {
        let (x, y) = self.polish(x, y);
        let residual1 = self.p1.eval(x, y).abs();
        let residual2 = self.p2.eval(x, y).abs();
        if residual1 <= ACCEPT_RESIDUAL_REL * self.p1.scale_at(x, y)
            && residual2 <= ACCEPT_RESIDUAL_REL * self.p2.scale_at(x, y)
        {
            points.push(Solution {
                x,
                y,
                residual1,
                residual2,
            });
        }
    }
}

/// Solves `[[a, b], [c, d]] (u, v) = (e, f)`; `None` when nearly singular.
fn solve2(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Option<(f64, f64)> {
    let det = a * d - b * c;
    if det == 0.0 || det.abs() <= 1e-12 * (a * d).abs().max((b * c).abs()) {
        return None;
    }
    Some(((d * e - b * f) / det, (a * f - c * e) / det))
}

/// Restriction to `x = c` (or `y = c` when `along_x`), with coefficients
/// dropped when they are negligible against the magnitudes that formed them.
fn specialize(p: &BivarPoly, c: f64, along_x: bool) -> RealPoly {
    let source = if along_x { p.swap_xy() } else { p.clone() };
    let n = source.deg_y().map_or(0, |d| d + 1);
    let coeffs: Vec<f64> = (0..n)
        .map(|k| {
            let col = source.y_coeff(k);
            let value = col.eval(c);
            let magnitude = col.coeffs().iter().rev().fold(0.0, |acc, a| acc * c.abs() + a.abs());
            if value.abs() <= ZERO_RESIDUAL_REL * magnitude {
                0.0
            } else {
                value
            }
        })
        .collect();
    Poly::new(coeffs)
}

fn dedup(mut v: Vec<f64>, eps: f64) -> Vec<f64> {
    v.retain(|x| x.is_finite());
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= eps);
    v
}
