//! The four base q-products M, N, G, R and the Mahler-measure q-expansions
//! they parameterize.
//!
//! With (x;q)_inf = (1-x)(1-xq)(1-xq^2)...:
//!
//! ```text
//! M(q) = 16 q (q;q)^8 (q^4;q^4)^16 / (q^2;q^2)^24
//! N(q) = 27 q (q^3;q^3)^12 / [ (q;q)^12 + 27 q (q^3;q^3)^12 ]
//! G(q) = q^(1/3) (q;q^2) / (q^3;q^6)^3
//! R(q) = q^(1/5) (q;q^5)(q^4;q^5) / [ (q^2;q^5)(q^3;q^5) ]
//! ```
//!
//! and the measures attached to them are lacunary log-series in q, e.g.
//! mu(M(q)) = -Re[ log(q)/2 + 2 sum j chi_{-4}(j) log(1-q^j) ]. G and R enter
//! the measures only through G^3 and R^5, which are single-valued in q; the
//! fractional powers in G, R themselves use principal branches.

use crate::numkit::{pow_i64, sum_series, SeriesBudget};
use crate::{Cx, Error, Real, Result};

/// Which of the four Mahler-measure families is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyId {
    /// mu(t) = m(4/sqrt(t) + x + 1/x + y + 1/y), parameterized by t = M(q).
    Mu,
    /// n(t) = m(x^3 + y^3 + 1 - (3/t^(1/3)) x y), t = N(q).
    N,
    /// g(t) = m((x+y)(x+1)(y+1) - x y / t), t = G^3(q).
    G,
    /// r(t) = m((x+y+1)(x+1)(y+1) - x y / t), t = R^5(q).
    R,
}

impl FamilyId {
    pub const ALL: [FamilyId; 4] = [FamilyId::Mu, FamilyId::N, FamilyId::G, FamilyId::R];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Mu => "mu",
            FamilyId::N => "n",
            FamilyId::G => "g",
            FamilyId::R => "r",
        }
    }
}

/// Dirichlet characters appearing in the q-expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharacterId {
    /// chi_{-4}: 0, 1, 0, -1 on residues 0..4.
    ChiM4,
    /// chi_{-3}: 0, 1, -1 on residues 0..3.
    ChiM3,
    /// The conductor-five character with chi(2) = i.
    ChiR,
}

/// Character value at n (0 on non-coprime residues).
pub fn character(c: CharacterId, n: i64) -> Cx {
    match c {
        CharacterId::ChiM4 => match n.rem_euclid(4) {
            1 => Cx::new(1.0, 0.0),
            3 => Cx::new(-1.0, 0.0),
            _ => Cx::new(0.0, 0.0),
        },
        CharacterId::ChiM3 => match n.rem_euclid(3) {
            1 => Cx::new(1.0, 0.0),
            2 => Cx::new(-1.0, 0.0),
            _ => Cx::new(0.0, 0.0),
        },
        CharacterId::ChiR => match n.rem_euclid(5) {
            1 => Cx::new(1.0, 0.0),
            2 => Cx::new(0.0, 1.0),
            3 => Cx::new(0.0, -1.0),
            4 => Cx::new(-1.0, 0.0),
            _ => Cx::new(0.0, 0.0),
        },
    }
}

/// Re[(2-i) chi_r(j)] as a function of j mod 5: the weight of the r-series.
pub fn r_series_weight(j: i64) -> Real {
    match j.rem_euclid(5) {
        1 => 2.0,
        2 => 1.0,
        3 => -1.0,
        4 => -2.0,
        _ => 0.0,
    }
}

/// A q-series evaluation point: |q| strictly inside the unit disk plus the
/// truncation budget all series at this point share.
#[derive(Debug, Clone, Copy)]
pub struct QPoint {
    pub q: Cx,
    pub budget: SeriesBudget,
}

impl QPoint {
    pub fn new(q: Cx, budget: SeriesBudget) -> Result<Self> {
        let n = q.norm();
        if !(n > 0.0 && n < 1.0) {
            return Err(Error::Domain(format!("|q| must lie in (0,1), got {n}")));
        }
        Ok(QPoint { q, budget })
    }

    /// Shorthand with the default budget.
    pub fn auto(q: Cx) -> Result<Self> {
        Self::new(q, SeriesBudget::default())
    }

    pub fn real(q: Real) -> Result<Self> {
        Self::auto(Cx::new(q, 0.0))
    }
}

/// Infinite q-Pochhammer product (x; q)_inf, truncated once the factor tail
/// is below the budget's eps.
pub fn qpochhammer(x: Cx, base: Cx, budget: SeriesBudget) -> Result<Cx> {
    let bn = base.norm();
    if bn >= 1.0 {
        return Err(Error::Domain(format!("|q| must be < 1 in (x;q)_inf, got {bn}")));
    }
    let mut prod = Cx::new(1.0, 0.0);
    let mut xqn = x;
    for n in 0..budget.max_terms {
        // Tail bound: |prod_{m>n}(1-xq^m) - 1| <= exp(s) - 1 ~ s with
        // s = |x||q|^(n+1)/(1-|q|).
        let tail = xqn.norm() * bn / (1.0 - bn);
        if tail < budget.eps {
            return Ok(prod * (Cx::new(1.0, 0.0) - xqn));
        }
        prod *= Cx::new(1.0, 0.0) - xqn;
        xqn *= base;
        let _ = n;
    }
    Err(Error::BudgetExceeded { terms: budget.max_terms, last: xqn.norm() })
}

fn poch_q(qp: QPoint, scale: u32) -> Result<Cx> {
    let b = pow_i64(qp.q, scale as i64);
    qpochhammer(b, b, qp.budget)
}

/// M(q), N(q), G(q), R(q). G and R take principal fractional powers of q.
pub fn base_function(f: FamilyId, qp: QPoint) -> Result<Cx> {
    let q = qp.q;
    match f {
        FamilyId::Mu => {
            let p1 = poch_q(qp, 1)?;
            let p2 = poch_q(qp, 2)?;
            let p4 = poch_q(qp, 4)?;
            Ok(16.0 * q * pow_i64(p1, 8) * pow_i64(p4, 16) / pow_i64(p2, 24))
        }
        FamilyId::N => {
            let p1 = poch_q(qp, 1)?;
            let p3 = poch_q(qp, 3)?;
            let num = 27.0 * q * pow_i64(p3, 12);
            Ok(num / (pow_i64(p1, 12) + num))
        }
        FamilyId::G => Ok(q.powf(1.0 / 3.0) * g_unit_part(qp)?),
        FamilyId::R => Ok(q.powf(1.0 / 5.0) * r_unit_part(qp)?),
    }
}

// G(q) = q^(1/3) * g_unit_part(q), a power series with constant term 1.
fn g_unit_part(qp: QPoint) -> Result<Cx> {
    let q = qp.q;
    let a = qpochhammer(q, pow_i64(q, 2), qp.budget)?;
    let b = qpochhammer(pow_i64(q, 3), pow_i64(q, 6), qp.budget)?;
    Ok(a / pow_i64(b, 3))
}

// R(q) = q^(1/5) * r_unit_part(q).
fn r_unit_part(qp: QPoint) -> Result<Cx> {
    let q5 = pow_i64(qp.q, 5);
    let a = qpochhammer(qp.q, q5, qp.budget)?;
    let b = qpochhammer(pow_i64(qp.q, 4), q5, qp.budget)?;
    let c = qpochhammer(pow_i64(qp.q, 2), q5, qp.budget)?;
    let d = qpochhammer(pow_i64(qp.q, 3), q5, qp.budget)?;
    Ok(a * b / (c * d))
}

/// The measure argument of the family at q: M(q), N(q), G^3(q), or R^5(q).
///
/// For G and R this is computed as q * (unit part)^k, which is single-valued
/// in q; identities that sample q at roots of unity rely on that.
pub fn measure_argument(f: FamilyId, qp: QPoint) -> Result<Cx> {
    match f {
        FamilyId::Mu | FamilyId::N => base_function(f, qp),
        FamilyId::G => Ok(qp.q * pow_i64(g_unit_part(qp)?, 3)),
        FamilyId::R => Ok(qp.q * pow_i64(r_unit_part(qp)?, 5)),
    }
}

/// Default convergence radius enforced by [`mahler_qseries`]. The log series
/// converge in the whole unit disk, but the budget explodes near |q| = 1.
pub const DEFAULT_Q_RADIUS: Real = 0.25;

/// The Mahler measure of the family member parameterized by q:
/// mu(M(q)), n(N(q)), g(G^3(q)), or r(R^5(q)).
pub fn mahler_qseries(f: FamilyId, qp: QPoint) -> Result<Real> {
    mahler_qseries_in_radius(f, qp, DEFAULT_Q_RADIUS)
}

/// Same with an explicit radius guard (config knob).
pub fn mahler_qseries_in_radius(f: FamilyId, qp: QPoint, radius: Real) -> Result<Real> {
    let q = qp.q;
    if q.norm() > radius {
        return Err(Error::Domain(format!(
            "|q| = {} exceeds the configured q-series radius {radius}",
            q.norm()
        )));
    }
    let (log_coeff, series_scale): (Real, Real) = match f {
        FamilyId::Mu => (0.5, 2.0),
        FamilyId::N => (1.0 / 3.0, 3.0),
        FamilyId::G | FamilyId::R => (1.0, 1.0),
    };
    let weight = |j: i64| -> Real {
        match f {
            FamilyId::Mu => character(CharacterId::ChiM4, j).re,
            FamilyId::N => character(CharacterId::ChiM3, j).re,
            // (-1)^(j-1) chi_{-3}(j)
            FamilyId::G => {
                let s = if j % 2 == 0 { -1.0 } else { 1.0 };
                s * character(CharacterId::ChiM3, j).re
            }
            FamilyId::R => r_series_weight(j),
        }
    };
    let s = sum_series(
        |n| {
            let j = n as i64 + 1;
            let w = weight(j);
            if w == 0.0 {
                return Cx::new(0.0, 0.0);
            }
            let qj = pow_i64(q, j);
            debug_assert!(qj.norm() < 1.0);
            (Cx::new(1.0, 0.0) - qj).ln() * (w * j as Real)
        },
        qp.budget,
    )?;
    let total = q.ln() * log_coeff + s.value * series_scale;
    Ok(-total.re)
}
