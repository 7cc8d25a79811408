//! Precision-controlled series summation, polynomial root finding, and the
//! two-variable Laurent polynomial type shared by every other module.
//!
//! Everything here is pure f64/Complex64 arithmetic with explicit budgets; no
//! operation may return a non-finite value without an error.

use crate::{Cx, Error, Real, Result};

/// Absolute tail target and term cap for series and products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesBudget {
    pub eps: Real,
    pub max_terms: usize,
}

impl SeriesBudget {
    pub fn new(eps: Real, max_terms: usize) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::Domain(format!("budget eps must be > 0, got {eps}")));
        }
        if max_terms < 8 {
            return Err(Error::Domain(format!(
                "budget max_terms must be >= 8, got {max_terms}"
            )));
        }
        Ok(SeriesBudget { eps, max_terms })
    }
}

impl Default for SeriesBudget {
    fn default() -> Self {
        // Generous default: tight tail for f64, large cap so slowly
        // converging 2F1 arguments near the unit circle still finish.
        SeriesBudget { eps: 1e-15, max_terms: 20_000 }
    }
}

/// A converged partial sum together with the tail bound it achieved.
#[derive(Debug, Clone, Copy)]
pub struct SeriesSum {
    pub value: Cx,
    /// Bound on the neglected tail, from the three last term magnitudes.
    pub tail_bound: Real,
    pub terms: usize,
}

/// Sum `term(0) + term(1) + ...` until three consecutive terms all have
/// magnitude below `budget.eps`.
///
/// The three-in-a-row rule survives the alternating-zero patterns of lacunary
/// q-series (characters vanish on whole residue classes), where a single
/// small term says nothing about the tail.
pub fn sum_series(mut term: impl FnMut(usize) -> Cx, budget: SeriesBudget) -> Result<SeriesSum> {
    let mut sum = Cx::new(0.0, 0.0);
    let mut small_run = 0usize;
    let mut last = f64::INFINITY;
    for n in 0..budget.max_terms {
        let t = term(n);
        if !t.is_finite() {
            return Err(Error::Domain(format!("non-finite term at index {n}")));
        }
        sum += t;
        last = t.norm();
        if last < budget.eps {
            small_run += 1;
            if small_run >= 3 {
                return Ok(SeriesSum { value: sum, tail_bound: 3.0 * budget.eps, terms: n + 1 });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::BudgetExceeded { terms: budget.max_terms, last })
}

/// Evaluate a polynomial with ascending coefficients at `z` (Horner).
pub fn poly_eval(coeffs: &[Cx], z: Cx) -> Cx {
    let mut acc = Cx::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn poly_derivative(coeffs: &[Cx]) -> Vec<Cx> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * (k as Real))
        .collect()
}

// p(z) and p'(z), switching to the reversed polynomial for |z| > 1 so large
// iterates cannot overflow: p(z) = z^d rev(1/z), p'(z)/p(z) stays correct
// through the Newton ratio computed from the same scaling.
fn eval_scaled(coeffs: &[Cx], deriv: &[Cx], z: Cx) -> (Cx, Cx) {
    if z.norm() <= 1e140 {
        let p = poly_eval(coeffs, z);
        let dp = poly_eval(deriv, z);
        if p.is_finite() && dp.is_finite() {
            return (p, dp);
        }
    }
    // Overflow territory: return a ratio that pulls the iterate inward.
    (z, Cx::new(1.0, 0.0))
}

/// All complex roots of `c[0] + c[1] z + ... + c[d] z^d`, with multiplicity.
///
/// Aberth–Ehrlich simultaneous iteration from Fujiwara-bound initial
/// guesses, followed by the exact Vieta translation (the root sum is pinned
/// to -c_{d-1}/c_d, which also recenters root clusters). Root ordering is
/// unspecified.
pub fn poly_roots(coeffs: &[Cx]) -> Result<Vec<Cx>> {
    let max_mag = coeffs.iter().map(|c| c.norm()).fold(0.0, Real::max);
    if max_mag == 0.0 {
        return Err(Error::Domain("zero polynomial has no root set".into()));
    }
    let lead = coeffs.last().copied().unwrap_or_default();
    let ratio = lead.norm() / max_mag;
    if ratio < 1e-14 {
        return Err(Error::DegenerateLeading { ratio });
    }
    roots_unguarded(coeffs)
}

/// Root finder without the relative-leading-coefficient guard. The Jensen
/// integrator needs this: near an x where the leading y-coefficient
/// vanishes, the polynomial legitimately has a group of huge roots (whose
/// log-moduli cancel the log of the leading coefficient in the integrand),
/// and those roots remain well-conditioned targets for Aberth.
pub(crate) fn roots_unguarded(coeffs: &[Cx]) -> Result<Vec<Cx>> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }

    // Trailing zero coefficients are exact roots at the origin.
    let zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let mut roots = vec![Cx::new(0.0, 0.0); zeros];
    let work: Vec<Cx> = coeffs[zeros..].to_vec();
    let d = work.len() - 1;
    if d == 0 {
        return Ok(roots);
    }
    if d == 1 {
        roots.push(-work[0] / work[1]);
        return Ok(roots);
    }
    if d == 2 {
        // Stable quadratic formula: the larger root first, the other from
        // the product, avoiding cancellation.
        let (c, b, a) = (work[0], work[1], work[2]);
        let disc = (b * b - 4.0 * a * c).sqrt();
        let s = if (b + disc).norm() >= (b - disc).norm() { b + disc } else { b - disc };
        let r1 = -s / (2.0 * a);
        let r2 = if r1.norm() > 0.0 { c / (a * r1) } else { -b / a };
        roots.push(r1);
        roots.push(r2);
        return Ok(roots);
    }

    let deriv = poly_derivative(&work);
    // Fujiwara bound: 2 max_k |c_{d-k}/c_d|^(1/k). Far tighter than the
    // Cauchy bound when coefficients span many orders of magnitude.
    let lead = work[d];
    let radius = 2.0
        * (1..=d)
            .map(|k| (work[d - k] / lead).norm().powf(1.0 / k as Real))
            .fold(0.0, Real::max)
        + 1e-12;
    let mut z: Vec<Cx> = (0..d)
        .map(|k| {
            // Slightly eccentric start breaks symmetric stalls.
            let ang = 2.0 * std::f64::consts::PI * (k as Real + 0.354) / d as Real;
            Cx::from_polar(radius * (0.5 + 0.5 * (k as Real + 1.0) / d as Real), ang)
        })
        .collect();

    // Jacobi-style sweeps: all corrections are computed from the same
    // configuration before any is applied, which keeps root clusters
    // balanced (their centroid then tracks the Vieta sum).
    let mut steps = vec![Cx::new(0.0, 0.0); d];
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let (p, dp) = eval_scaled(&work, &deriv, z[i]);
            let newton = if dp.norm() > 0.0 { p / dp } else { Cx::new(1e-8, 1e-8) };
            let mut rep = Cx::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 1e-300 {
                        rep += Cx::new(1.0, 0.0) / diff;
                    }
                }
            }
            let denom = Cx::new(1.0, 0.0) - newton * rep;
            let mut step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            if !step.is_finite() {
                // Runaway iterate: fall back to pulling it inward.
                step = z[i] * 0.5;
            }
            steps[i] = step;
        }
        for i in 0..d {
            z[i] -= steps[i];
            if !z[i].is_finite() {
                z[i] = Cx::from_polar(radius, 2.6 * i as Real);
            }
            let rel = steps[i].norm() / (1.0 + z[i].norm());
            max_step = max_step.max(rel);
        }
        if max_step <= 1e-15 {
            break;
        }
    }

    // Exact Vieta translation: pin the root sum to -c_{d-1}/c_d. For
    // separated roots the shift is rounding-sized; for clusters it recenters
    // the centroid the iteration cannot resolve below eps^(1/multiplicity).
    let target_sum = -work[d - 1] / work[d];
    let sum: Cx = z.iter().sum();
    let shift = (target_sum - sum) / d as Real;
    if shift.is_finite() {
        for r in z.iter_mut() {
            *r += shift;
        }
    }

    // Residual contract: |p(r)| below 1e-10 * max|c| after removing the
    // |z|^d growth. For |r| > 1 the reversed polynomial at 1/r measures the
    // same backward error without overflow. Clusters of multiplicity m only
    // locate roots to eps^(1/m), but their residuals stay far below this.
    let scale = work.iter().map(|c| c.norm()).fold(0.0, Real::max);
    let reversed: Vec<Cx> = work.iter().rev().copied().collect();
    for &r in &z {
        let res = if r.norm() <= 1.0 {
            poly_eval(&work, r).norm()
        } else {
            poly_eval(&reversed, Cx::new(1.0, 0.0) / r).norm()
        };
        if !(res <= 1e-10 * scale) {
            return Err(Error::NoConvergence(format!(
                "root residual {res:.3e} exceeds bound (scale {scale:.3e})"
            )));
        }
    }
    roots.extend(z);
    Ok(roots)
}

/// Finitely supported Laurent polynomial in two variables with complex
/// coefficients. Terms are kept sorted with distinct exponent pairs and no
/// stored zero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    terms: Vec<(i64, i64, Cx)>,
}

impl LaurentPoly {
    /// Build from raw terms; merges duplicates and drops exact zeros.
    pub fn new(raw: impl IntoIterator<Item = (i64, i64, Cx)>) -> Result<Self> {
        let mut terms: Vec<(i64, i64, Cx)> = raw.into_iter().collect();
        terms.sort_by_key(|&(i, j, _)| (i, j));
        let mut merged: Vec<(i64, i64, Cx)> = Vec::with_capacity(terms.len());
        for (i, j, c) in terms {
            if let Some(last) = merged.last_mut() {
                if last.0 == i && last.1 == j {
                    last.2 += c;
                    continue;
                }
            }
            merged.push((i, j, c));
        }
        merged.retain(|&(_, _, c)| c.norm() != 0.0);
        if merged.is_empty() {
            return Err(Error::Domain("Laurent polynomial must have at least one term".into()));
        }
        Ok(LaurentPoly { terms: merged })
    }

    pub fn constant(c: Cx) -> Result<Self> {
        Self::new([(0, 0, c)])
    }

    pub fn terms(&self) -> &[(i64, i64, Cx)] {
        &self.terms
    }

    pub fn eval(&self, x: Cx, y: Cx) -> Cx {
        self.terms
            .iter()
            .map(|&(i, j, c)| c * pow_i64(x, i) * pow_i64(y, j))
            .sum()
    }

    /// Range of y-exponents (min, max).
    pub fn y_span(&self) -> (i64, i64) {
        let min = self.terms.iter().map(|t| t.1).min().unwrap();
        let max = self.terms.iter().map(|t| t.1).max().unwrap();
        (min, max)
    }

    /// Coefficients of y^jmin .. y^jmax as Laurent polynomials in x alone,
    /// evaluated at `x`. Index 0 corresponds to y^jmin.
    pub fn y_coefficients_at(&self, x: Cx) -> Vec<Cx> {
        let (jmin, jmax) = self.y_span();
        let mut out = vec![Cx::new(0.0, 0.0); (jmax - jmin + 1) as usize];
        for &(i, j, c) in &self.terms {
            out[(j - jmin) as usize] += c * pow_i64(x, i);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(i1, j1, c1) in &self.terms {
            for &(i2, j2, c2) in &other.terms {
                raw.push((i1 + i2, j1 + j2, c1 * c2));
            }
        }
        // A product of nonzero polynomials is nonzero up to rounding; if all
        // coefficients cancel numerically, keep an explicit zero constant.
        LaurentPoly::new(raw).unwrap_or(LaurentPoly { terms: vec![(0, 0, Cx::new(0.0, 0.0))] })
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        LaurentPoly::new(self.terms.iter().chain(other.terms.iter()).copied())
    }

    pub fn scale(&self, c: Cx) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|&(i, j, a)| (i, j, a * c)).collect(),
        }
    }

    pub fn powi(&self, n: usize) -> LaurentPoly {
        let mut acc = LaurentPoly { terms: vec![(0, 0, Cx::new(1.0, 0.0))] };
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// P(1/x, 1/y) multiplied by the monomial clearing its denominators.
    /// Mahler measure is invariant under this flip.
    pub fn reciprocal_cleared(&self) -> LaurentPoly {
        let imax = self.terms.iter().map(|t| t.0).max().unwrap();
        let jmax = self.terms.iter().map(|t| t.1).max().unwrap();
        LaurentPoly {
            terms: {
                let mut t: Vec<_> = self
                    .terms
                    .iter()
                    .map(|&(i, j, c)| (imax - i, jmax - j, c))
                    .collect();
                t.sort_by_key(|&(i, j, _)| (i, j));
                t
            },
        }
    }
}

/// Integer power of a complex number by repeated squaring (negative allowed).
pub fn pow_i64(z: Cx, n: i64) -> Cx {
    if n == 0 {
        return Cx::new(1.0, 0.0);
    }
    let neg = n < 0;
    let mut e = n.unsigned_abs();
    let mut base = z;
    let mut acc = Cx::new(1.0, 0.0);
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    if neg {
        Cx::new(1.0, 0.0) / acc
    } else {
        acc
    }
}
