//! Generalized hypergeometric series and the closed forms built on them:
//! the 4F3 expressions for mu(t), n(t), g(t), the omega and phi series with
//! their 2F1 closed forms, and Stienstra's integral route to r(t).
//!
//! Everything is Taylor summation strictly inside the unit disk; arguments on
//! or beyond the boundary are refused rather than resummed. In particular the
//! 4F3 reformulation of the conductor-15 measure conjecture, which needs the
//! series at argument 16, is out of this module's reach by design.

use crate::numkit::{sum_series, SeriesBudget};
use crate::{Cx, Error, Real, Result};

/// Parameters of a generalized hypergeometric pFq.
#[derive(Debug, Clone)]
pub struct HypParams {
    pub upper: Vec<Real>,
    pub lower: Vec<Real>,
    pub z: Cx,
}

impl HypParams {
    pub fn new(upper: Vec<Real>, lower: Vec<Real>, z: Cx) -> Result<Self> {
        if lower.iter().any(|&c| c <= 0.0 && c.fract() == 0.0) {
            return Err(Error::Domain("lower parameter is a non-positive integer".into()));
        }
        Ok(HypParams { upper, lower, z })
    }
}

/// Taylor evaluation of pFq(upper; lower; z) for |z| < 1 (strict).
pub fn hyp(p: &HypParams, budget: SeriesBudget) -> Result<Cx> {
    if p.z.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "pFq series argument must satisfy |z| < 1, got {}",
            p.z.norm()
        )));
    }
    let mut term = Cx::new(1.0, 0.0);
    let mut n = 0usize;
    sum_series(
        |_| {
            let t = term;
            let mut ratio = Cx::new(1.0, 0.0);
            for &a in &p.upper {
                ratio *= Cx::new(a + n as Real, 0.0);
            }
            for &c in &p.lower {
                ratio /= Cx::new(c + n as Real, 0.0);
            }
            ratio *= p.z / (n as Real + 1.0);
            term *= ratio;
            n += 1;
            t
        },
        budget,
    )
    .map(|s| s.value)
}

/// Gauss 2F1(a, b; c; z).
pub fn hyp2f1(a: Real, b: Real, c: Real, z: Cx) -> Result<Cx> {
    hyp(&HypParams::new(vec![a, b], vec![c], z)?, SeriesBudget::default())
}

/// 2F1(a, 1-a; 1; z) — the zero-balanced case driving the elliptic nomes.
///
/// Near z = 1 the Taylor series degrades logarithmically (c - a - b = 0), so
/// for |1-z| < |z| this switches to the standard connection series
///
/// ```text
/// F = (sin(pi a)/pi) * sum_n P_n w^n (c_n - log w),   w = 1 - z,
/// P_n = ((a)_n (1-a)_n / (n!)^2),
/// c_0 = -psi(a) - psi(1-a) - 2 gamma,
/// c_n = c_{n-1} + 2/n - 1/(a+n-1) - 1/(1-a+n-1),
/// ```
///
/// with c_0 in closed form for a = 1/j, j in {2,3,4,6} (the Euler gamma
/// cancels against 2 psi(1)).
pub fn hyp2f1_zero_balanced(j: u8, z: Cx) -> Result<Cx> {
    let a = 1.0 / j as Real;
    let w = Cx::new(1.0, 0.0) - z;
    if z.norm() >= 1.0 || w.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "zero-balanced 2F1 needs |z| < 1 and |1-z| < 1, got |z| = {}, |1-z| = {}",
            z.norm(),
            w.norm()
        )));
    }
    if w.norm() >= z.norm() {
        return hyp2f1(a, 1.0 - a, 1.0, z);
    }
    let ln2 = std::f64::consts::LN_2;
    let ln3 = 3.0f64.ln();
    let c0 = match j {
        2 => 4.0 * ln2,
        3 => 3.0 * ln3,
        4 => 6.0 * ln2,
        6 => 4.0 * ln2 + 3.0 * ln3,
        _ => return Err(Error::Domain(format!("unsupported signature {j}"))),
    };
    let log_w = w.ln();
    let mut p = Cx::new(1.0, 0.0);
    let mut c = Cx::new(c0, 0.0);
    let mut wn = Cx::new(1.0, 0.0);
    let mut n = 0usize;
    let s = sum_series(
        |_| {
            let t = p * wn * (c - log_w);
            let nf = n as Real;
            p *= (a + nf) * (1.0 - a + nf) / ((nf + 1.0) * (nf + 1.0));
            c += 2.0 / (nf + 1.0) - 1.0 / (a + nf) - 1.0 / (1.0 - a + nf);
            wn *= w;
            n += 1;
            t
        },
        SeriesBudget::default(),
    )?;
    Ok(s.value * ((std::f64::consts::PI * a).sin() / std::f64::consts::PI))
}

fn hyp4f3(upper: [Real; 4], z: Cx) -> Result<Cx> {
    hyp(
        &HypParams::new(upper.to_vec(), vec![2.0, 2.0, 2.0], z)?,
        SeriesBudget::default(),
    )
}

/// mu(t) = -Re[ (t/8) 4F3(3/2,3/2,1,1; 2,2,2; t) + log(t/16)/2 ], |t| < 1.
pub fn mu_hyp(t: Cx) -> Result<Real> {
    if t.norm() == 0.0 {
        return Err(Error::Domain("mu(t) requires t != 0".into()));
    }
    let f = hyp4f3([1.5, 1.5, 1.0, 1.0], t)?;
    Ok(-(t / 8.0 * f + (t / 16.0).ln() * 0.5).re)
}

/// n(t) = -Re[ (2t/27) 4F3(4/3,5/3,1,1; 2,2,2; t) + log(t/27)/3 ], |t| < 1.
pub fn n_hyp(t: Cx) -> Result<Real> {
    if t.norm() == 0.0 {
        return Err(Error::Domain("n(t) requires t != 0".into()));
    }
    let f = hyp4f3([4.0 / 3.0, 5.0 / 3.0, 1.0, 1.0], t)?;
    Ok(-(2.0 * t / 27.0 * f + (t / 27.0).ln() / 3.0).re)
}

/// g(t) from the two-term 4F3 combination, i.e. one third of
///
/// ```text
/// -Re[ 2t/(1+4t)^3 F(27t/(1+4t)^3) + 8t^2/(1-2t)^3 F(27t^2/(1-2t)^3)
///      + log(t^3 / ((1+4t)(1-2t)^4)) ]
/// ```
///
/// The bracket evaluates 3 g(t) = n(27t/(1+4t)^3) + 4 n(27t^2/(1-2t)^3);
/// dividing by three matches the q-series and the torus integral.
pub fn g_hyp(t: Cx) -> Result<Real> {
    if t.norm() == 0.0 {
        return Err(Error::Domain("g(t) requires t != 0".into()));
    }
    let one = Cx::new(1.0, 0.0);
    if (one + 4.0 * t).norm() < 1e-12 || (one - 2.0 * t).norm() < 1e-12 {
        return Err(Error::Domain("g(t) undefined at t = -1/4, 1/2".into()));
    }
    let s1 = 27.0 * t / (one + 4.0 * t).powi(3);
    let s2 = 27.0 * t * t / (one - 2.0 * t).powi(3);
    if s1.norm() >= 1.0 || s2.norm() >= 1.0 {
        return Err(Error::Domain(
            "g(t) arguments 27t/(1+4t)^3, 27t^2/(1-2t)^3 must stay in the unit disk".into(),
        ));
    }
    let f1 = hyp4f3([4.0 / 3.0, 5.0 / 3.0, 1.0, 1.0], s1)?;
    let f2 = hyp4f3([4.0 / 3.0, 5.0 / 3.0, 1.0, 1.0], s2)?;
    let logs = (t.powi(3) / ((one + 4.0 * t) * (one - 2.0 * t).powi(4))).ln();
    let bracket = 2.0 * t / (one + 4.0 * t).powi(3) * f1 + 8.0 * t * t / (one - 2.0 * t).powi(3) * f2 + logs;
    Ok(-bracket.re / 3.0)
}

/// Evaluation route selector for omega.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaMode {
    /// Power series sum t^n sum_k C(n,k)^3, |t| < 1/8.
    Series,
    /// 1/(1-2t) 2F1(1/3, 2/3; 1; 27 t^2/(1-2t)^3).
    Closed,
}

/// omega(t) = sum_n t^n sum_k C(n,k)^3 by the selected route.
pub fn omega(t: Cx, mode: OmegaMode) -> Result<Cx> {
    match mode {
        OmegaMode::Series => {
            if t.norm() >= 0.125 {
                return Err(Error::Domain(format!(
                    "omega series needs |t| < 1/8, got {}",
                    t.norm()
                )));
            }
            let mut tn = Cx::new(1.0, 0.0);
            sum_series(
                |n| {
                    let c = central_cube_sum(n);
                    let term = tn * c;
                    tn *= t;
                    term
                },
                SeriesBudget::default(),
            )
            .map(|s| s.value)
        }
        OmegaMode::Closed => {
            let one = Cx::new(1.0, 0.0);
            let d = one - 2.0 * t;
            if d.norm() < 1e-12 {
                return Err(Error::Domain("omega closed form undefined at t = 1/2".into()));
            }
            let arg = 27.0 * t * t / d.powi(3);
            Ok(hyp2f1(1.0 / 3.0, 2.0 / 3.0, 1.0, arg)? / d)
        }
    }
}

/// sum_k C(n,k)^3: 1, 2, 10, 56, 346, ...
pub fn central_cube_sum(n: usize) -> Real {
    let mut c = 1.0f64; // C(n,0)
    let mut s = 1.0f64;
    for k in 0..n {
        c = c * (n - k) as Real / (k + 1) as Real;
        s += c * c * c;
    }
    s
}

/// sum_k C(n,k)^2 C(n+k,k): 1, 3, 19, 147, ...
pub fn phi_coefficient(n: usize) -> Real {
    let mut b = 1.0f64; // C(n,k)
    let mut c = 1.0f64; // C(n+k,k)
    let mut s = 1.0f64;
    for k in 0..n {
        b = b * (n - k) as Real / (k + 1) as Real;
        c = c * (n + k + 1) as Real / (k + 1) as Real;
        s += b * b * c;
    }
    s
}

/// Evaluation route selector for phi.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiMode {
    /// Power series, |t| < 0.09 (the true radius is 1/phi_golden^5 = 0.0902).
    Series,
    /// Closed form anchored at t = k(1-k)^2/(1+k)^2 with the small-k branch.
    Closed1,
    /// Closed form anchored at t = k^2(1+k)/(1-k).
    Closed2,
}

/// Radius enforced for the phi power series; the coefficient growth is
/// ((1+sqrt 5)/2)^(5n), so the series diverges just above 0.0902.
pub const PHI_SERIES_RADIUS: Real = 0.09;

/// phi(t) = sum_n t^n sum_k C(n,k)^2 C(n+k,k) by the selected route.
pub fn phi(t: Cx, mode: PhiMode) -> Result<Cx> {
    match mode {
        PhiMode::Series => {
            if t.norm() >= PHI_SERIES_RADIUS {
                return Err(Error::Domain(format!(
                    "phi series needs |t| < {PHI_SERIES_RADIUS}, got {}",
                    t.norm()
                )));
            }
            let mut tn = Cx::new(1.0, 0.0);
            sum_series(
                |n| {
                    let term = tn * phi_coefficient(n);
                    tn *= t;
                    term
                },
                SeriesBudget::default(),
            )
            .map(|s| s.value)
        }
        PhiMode::Closed1 => {
            let k = solve_small_branch_cubic(
                // k(1-k)^2 - t(1+k)^2 = k^3 - (2+t)k^2 + (1-2t)k - t
                [-t, Cx::new(1.0, 0.0) - 2.0 * t, -(Cx::new(2.0, 0.0) + t), Cx::new(1.0, 0.0)],
            )?;
            phi_closed1_at(k)
        }
        PhiMode::Closed2 => {
            let k = solve_small_branch_cubic(
                // k^3 + k^2 + t k - t = 0
                [-t, t, Cx::new(1.0, 0.0), Cx::new(1.0, 0.0)],
            )?;
            phi_closed2_at(k)
        }
    }
}

/// phi(k(1-k)^2/(1+k)^2) written directly in the auxiliary variable k.
pub fn phi_closed1_at(k: Cx) -> Result<Cx> {
    let one = Cx::new(1.0, 0.0);
    let rad = (one + k * k) * ((one - k - k * k).powi(2) - 5.0 * k * k);
    let arg = 64.0 * k.powi(5) * (one + k - k * k)
        / ((one + k * k).powi(2) * ((one - k - k * k).powi(2) - 5.0 * k * k).powi(2));
    Ok((one + k).powi(2) / rad.sqrt() * hyp2f1(0.25, 0.75, 1.0, arg)?)
}

/// phi(k^2(1+k)/(1-k)) written directly in the auxiliary variable k.
pub fn phi_closed2_at(k: Cx) -> Result<Cx> {
    let one = Cx::new(1.0, 0.0);
    let rad = (one + k * k) * ((one + 11.0 * k - k * k).powi(2) - 125.0 * k * k);
    let arg = 64.0 * k * (one + k - k * k).powi(5)
        / ((one + k * k).powi(2) * ((one + 11.0 * k - k * k).powi(2) - 125.0 * k * k).powi(2));
    Ok((one - k) / rad.sqrt() * hyp2f1(0.25, 0.75, 1.0, arg)?)
}

/// Smallest-magnitude root of a cubic (ascending coefficients), requiring a
/// clear margin to the next root and |root| < 0.5.
pub fn solve_small_branch_cubic(coeffs: [Cx; 4]) -> Result<Cx> {
    let mut roots = crate::numkit::poly_roots(&coeffs)?;
    roots.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
    let k = roots[0];
    if roots.len() > 1 && roots[1].norm() - k.norm() < 1e-12 {
        return Err(Error::BranchAmbiguous(
            "two auxiliary roots of equal magnitude".into(),
        ));
    }
    if k.norm() >= 0.5 {
        return Err(Error::BranchAmbiguous(format!(
            "no auxiliary root with |k| < 0.5 (smallest {})",
            k.norm()
        )));
    }
    Ok(k)
}

/// r(t) = -[ log t + sum_{n>=1} phi_n t^n / n ] for 0 < t < 0.09
/// (term-by-term integration of Stienstra's (phi(u)-1)/u integrand).
pub fn r_via_phi(t: Real) -> Result<Real> {
    if !(t > 0.0 && t < PHI_SERIES_RADIUS) {
        return Err(Error::Domain(format!(
            "r(t) via phi needs 0 < t < {PHI_SERIES_RADIUS}, got {t}"
        )));
    }
    let tc = Cx::new(t, 0.0);
    let mut tn = tc;
    let s = sum_series(
        |n| {
            let j = n + 1;
            let term = tn * (phi_coefficient(j) / j as Real);
            tn *= tc;
            term
        },
        SeriesBudget::default(),
    )?;
    Ok(-(t.ln() + s.value.re))
}

/// Arithmetic-geometric mean of two positive reals; 2F1(1/2,1/2;1;z) equals
/// 1/agm(1, sqrt(1-z)). Used as an independent oracle in tests and by callers
/// wanting a fast K(m).
pub fn agm(a0: Real, b0: Real) -> Real {
    let mut a = a0;
    let mut b = b0;
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() < 1e-16 * an.abs() {
            return an;
        }
        a = an;
        b = bn;
    }
    a
}
