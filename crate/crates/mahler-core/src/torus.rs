//! Ground-truth Mahler measures by Jensen-reduced one-dimensional torus
//! integration.
//!
//! Writing P as a polynomial in y with Laurent-in-x coefficients c_0..c_d,
//! Jensen's formula turns the two-dimensional average of log|P| into
//!
//! ```text
//! m(P) = (1/2pi) \int [ log|c_d(e^{i t})| + sum_roots log+ |y_i(t)| ] dt,
//! ```
//!
//! which stays valid when the zero variety meets the torus: a root modulus
//! crossing 1 only produces a kink in log+, not a singularity (the vanishing
//! of c_d is cancelled by the escaping root inside the combined integrand).
//! The trapezoid rule on midpoint-offset uniform grids is spectrally accurate
//! away from crossings and O(h^2) across them; node-doubling with Richardson
//! extrapolation recovers the tail.

use crate::numkit::{roots_unguarded, LaurentPoly};
use crate::qseries::FamilyId;
use crate::{Cx, Error, Real, Result};

/// The family's Laurent polynomial at parameter t:
/// Mu: 4/sqrt(t) + x + 1/x + y + 1/y (principal square root);
/// N: x^3 + y^3 + 1 - (3/t^(1/3)) x y (principal cube root);
/// G: (x+y)(x+1)(y+1) - x y / t;
/// R: (x+y+1)(x+1)(y+1) - x y / t.
pub fn family_polynomial(f: FamilyId, t: Cx) -> Result<LaurentPoly> {
    if t.norm() == 0.0 {
        return Err(Error::Domain("family polynomial needs t != 0".into()));
    }
    let one = Cx::new(1.0, 0.0);
    match f {
        FamilyId::Mu => mu_family_polynomial(4.0 * one / t.sqrt()),
        FamilyId::N => LaurentPoly::new([
            (3, 0, one),
            (0, 3, one),
            (0, 0, one),
            (1, 1, -3.0 * one / t.powf(1.0 / 3.0)),
        ]),
        FamilyId::G => LaurentPoly::new([
            (2, 1, one),
            (1, 2, one),
            (2, 0, one),
            (0, 2, one),
            (1, 1, 2.0 * one - one / t),
            (1, 0, one),
            (0, 1, one),
        ]),
        FamilyId::R => LaurentPoly::new([
            (2, 1, one),
            (1, 2, one),
            (2, 0, one),
            (0, 2, one),
            (1, 1, 3.0 * one - one / t),
            (1, 0, 2.0 * one),
            (0, 1, 2.0 * one),
            (0, 0, one),
        ]),
    }
}

/// k + x + 1/x + y + 1/y for any complex k (the m(k) family itself).
pub fn mu_family_polynomial(k: Cx) -> Result<LaurentPoly> {
    let one = Cx::new(1.0, 0.0);
    let mut terms = vec![(1i64, 0i64, one), (-1, 0, one), (0, 1, one), (0, -1, one)];
    if k.norm() != 0.0 {
        terms.push((0, 0, k));
    }
    LaurentPoly::new(terms)
}

// Roots whose modulus sits within this band of 1 count as on-circle and
// contribute zero to log+.
const ON_CIRCLE_BAND: Real = 1e-13;

fn log_plus(m: Real) -> Real {
    if (m - 1.0).abs() <= ON_CIRCLE_BAND || m <= 1.0 {
        0.0
    } else {
        m.ln()
    }
}

fn jensen_level(p: &LaurentPoly, n: usize, offset: Real) -> Result<Real> {
    let (jmin, jmax) = p.y_span();
    let d = (jmax - jmin) as usize;
    if d == 0 {
        return Err(Error::Domain(
            "polynomial has no y-dependence; use the grid oracle".into(),
        ));
    }
    let mut total = 0.0f64;
    for s in 0..n {
        let theta = 2.0 * std::f64::consts::PI * (s as Real + offset) / n as Real;
        let x = Cx::from_polar(1.0, theta);
        let coeffs = p.y_coefficients_at(x);
        let lead = coeffs[d];
        // A tiny-but-nonzero leading coefficient is legitimate (its log is
        // cancelled by the escaping roots); only an exact zero breaks the
        // degree structure and triggers the perturb-once path.
        if lead.norm() == 0.0 {
            return Err(Error::LeadingVanishes);
        }
        let roots = roots_unguarded(&coeffs)?;
        let mut val = lead.norm().ln();
        for r in roots {
            val += log_plus(r.norm());
        }
        total += val;
    }
    Ok(total / n as Real)
}

/// Mahler measure of P via Jensen reduction, doubling from `n_nodes` until
/// successive levels differ by less than 1e-7 (the default contract).
pub fn mahler_jensen(p: &LaurentPoly, n_nodes: usize) -> Result<Real> {
    mahler_jensen_tol(p, n_nodes, 1e-7)
}

/// Jensen evaluation with an explicit stabilization threshold. Returns the
/// Richardson extrapolation of the last two levels.
pub fn mahler_jensen_tol(p: &LaurentPoly, n_nodes: usize, tol: Real) -> Result<Real> {
    // Midpoint offset keeps rational singular angles (x = +-1, +-i) off the
    // grid for the polynomial classes handled here; if a leading-coefficient
    // zero is still hit, the node set is perturbed once.
    let mut offset = 0.5;
    let n0 = n_nodes.next_power_of_two().max(64);
    let mut prev = match jensen_level(p, n0, offset) {
        Err(Error::LeadingVanishes) => {
            offset = 0.5 + 1.0 / (2.0 * std::f64::consts::PI);
            jensen_level(p, n0, offset)?
        }
        other => other?,
    };
    let mut n = n0 * 2;
    loop {
        let cur = jensen_level(p, n, offset)?;
        if (cur - prev).abs() < tol {
            return Ok(cur + (cur - prev) / 3.0);
        }
        if n >= (1 << 22) {
            return Err(Error::NoConvergence(format!(
                "Jensen quadrature not stable at {n} nodes (delta {:.3e})",
                (cur - prev).abs()
            )));
        }
        prev = cur;
        n *= 2;
    }
}

/// The Jensen integrand sampled on n midpoint nodes: (theta, value) pairs
/// with value = log|c_d(e^{i theta})| + sum log+ |y_i(theta)|. Intended for
/// dumping grids to external plotting tools.
pub fn jensen_integrand_grid(p: &LaurentPoly, n: usize) -> Result<Vec<(Real, Real)>> {
    let (jmin, jmax) = p.y_span();
    let d = (jmax - jmin) as usize;
    if d == 0 {
        return Err(Error::Domain("polynomial has no y-dependence".into()));
    }
    let mut out = Vec::with_capacity(n);
    for s in 0..n {
        let theta = 2.0 * std::f64::consts::PI * (s as Real + 0.5) / n as Real;
        let x = Cx::from_polar(1.0, theta);
        let coeffs = p.y_coefficients_at(x);
        if coeffs[d].norm() == 0.0 {
            return Err(Error::LeadingVanishes);
        }
        let roots = roots_unguarded(&coeffs)?;
        let mut val = coeffs[d].norm().ln();
        for r in roots {
            val += log_plus(r.norm());
        }
        out.push((theta, val));
    }
    Ok(out)
}

/// Plain n-by-n grid average of log|P| over the torus. A slow sanity oracle
/// with no accuracy guarantee beyond observed stabilization; grid points
/// landing on zeros are clamped.
pub fn mahler_grid(p: &LaurentPoly, n: usize) -> Real {
    let mut total = 0.0f64;
    for a in 0..n {
        let x = Cx::from_polar(1.0, 2.0 * std::f64::consts::PI * (a as Real + 0.5) / n as Real);
        for b in 0..n {
            let y = Cx::from_polar(1.0, 2.0 * std::f64::consts::PI * (b as Real + 0.5) / n as Real);
            let v = p.eval(x, y).norm().max(1e-300);
            total += v.ln();
        }
    }
    total / (n * n) as Real
}

/// The modular polynomial G3(alpha, beta) with alpha = (x+1/x)^2 (y+1/y)^2 / 16
/// and beta constant, expanded as a Laurent polynomial:
///
/// ```text
/// G3(a, b) = (a^2 + b^2 + 6ab)^2 - 16 a b (4(1 + ab) - 3(a + b))^2
/// ```
pub fn g3_modular_poly(beta: Cx) -> LaurentPoly {
    let one = Cx::new(1.0, 0.0);
    let xpart = LaurentPoly::new([(1, 0, one), (-1, 0, one)]).unwrap();
    let ypart = LaurentPoly::new([(0, 1, one), (0, -1, one)]).unwrap();
    let alpha = xpart.powi(2).mul(&ypart.powi(2)).scale(one / 16.0);
    let a2 = alpha.powi(2);
    let first = a2
        .add(&LaurentPoly::constant(beta * beta).unwrap())
        .unwrap()
        .add(&alpha.scale(6.0 * beta))
        .unwrap();
    // 4(1 + ab) - 3(a + b) = (4 - 3b) + (4b - 3) a
    let inner = LaurentPoly::constant(4.0 * one - 3.0 * beta)
        .unwrap()
        .add(&alpha.scale(4.0 * beta - 3.0 * one))
        .unwrap();
    let second = alpha.scale(16.0 * beta).mul(&inner.powi(2));
    first.powi(2).add(&second.scale(-one)).unwrap()
}
