//! The Bloch–Wigner dilogarithm, the elliptic functions J_tau, D_tau, R_tau
//! on C*/q^Z, and the Kronecker–Eisenstein lattice sums that express the four
//! family measures.
//!
//! Conventions:
//!
//! ```text
//! D(z)     = Im Li2(z) + arg(1-z) log|z|
//! J(z)     = log|z| log|1-z|
//! J_tau(z) = sum_{n>=0} J(z q^n) - sum_{n>=1} J(q^n / z)
//!            + (log^2|q| / 3) B3(log|z| / log|q|)
//! D_tau(z) = sum_{n in Z} D(z q^n)
//! R_tau    = D_tau - i J_tau
//! ```
//!
//! with q = e^{2 pi i tau} and B3 the third Bernoulli polynomial. The direct
//! lattice evaluator computes
//!
//! ```text
//! R_tau(e^{2 pi i (a + b tau)})
//!   = -(y_tau^2 / pi) sum' e^{2 pi i (b n - a m)} / ((m tau + n)^2 (m tau- + n))
//! ```
//!
//! by square symmetric truncation with M-doubling; the leading sign makes the
//! two routes agree (the orientation choice is fixed once, numerically, and
//! applied uniformly).
//!
//! The family measures are exact combinations of J_tau at torsion points; in
//! lattice form, with mu = log(q)/(2 pi i) for the family's nome q and
//! S_N(w) = sum' w(n) / ((N mu m + n)^2 (N mu- m + n)):
//!
//! ```text
//! m-family: (16 y/pi^2)        Re S_4(chi_{-4})
//! n-family: (27 sqrt3 y/4pi^2) Re S_3(chi_{-3})
//! g-family: (18 sqrt3 y/pi^2)  Re S_6(chi_{-3}) + (9 sqrt3 y/4pi^2) Re S_3(chi_{-3})
//! r-family: (25 y/2pi^2)       Re S_5(2 sin(2 pi n/5) + sin(4 pi n/5))
//! ```
//!
//! each derived from the exact J-combinations m = (1/pi y) J_{4mu}(q),
//! n = (3/2pi y) J_{3mu}(q), g = (1/2pi y)(J_{6mu}(q) + J_{6mu}(q^2)),
//! r = (1/2pi y)(2 J_{5mu}(q) + J_{5mu}(q^2)).

use crate::numkit::{sum_series, SeriesBudget};
use crate::qseries::FamilyId;
use crate::{Cx, Error, Real, Result};

const PI: Real = std::f64::consts::PI;

/// A point tau in the upper half-plane with its nome q = e^{2 pi i tau}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPeriod {
    tau: Cx,
}

impl HalfPeriod {
    pub fn new(tau: Cx) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::Domain(format!("Im(tau) must be positive, got {}", tau.im)));
        }
        Ok(HalfPeriod { tau })
    }

    pub fn tau(self) -> Cx {
        self.tau
    }

    /// q = e^{2 pi i tau}, |q| < 1.
    pub fn nome(self) -> Cx {
        (Cx::new(0.0, 2.0 * PI) * self.tau).exp()
    }

    pub fn y(self) -> Real {
        self.tau.im
    }

    /// The half-period whose nome is the given q (principal logarithm):
    /// tau = log(q) / (2 pi i).
    pub fn from_nome(q: Cx) -> Result<Self> {
        let n = q.norm();
        if !(n > 0.0 && n < 1.0) {
            return Err(Error::Domain(format!("|q| must lie in (0,1), got {n}")));
        }
        Self::new(q.ln() / Cx::new(0.0, 2.0 * PI))
    }
}

/// A point z on C*/q^Z, normalized into the band |q| < |z| <= 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    z: Cx,
}

impl TorusPoint {
    /// Normalize z by powers of q into the band.
    pub fn normalized(z: Cx, tau: HalfPeriod) -> Result<Self> {
        if z.norm() == 0.0 {
            return Err(Error::Domain("torus point must be nonzero".into()));
        }
        let q = tau.nome();
        let t = z.norm().ln() / q.norm().ln();
        let k = -t.floor() as i32;
        let zn = z * q.powi(k);
        debug_assert!(zn.norm() > q.norm() * (1.0 - 1e-12) && zn.norm() <= 1.0 + 1e-12);
        Ok(TorusPoint { z: zn })
    }

    pub fn z(self) -> Cx {
        self.z
    }
}

/// Complex dilogarithm Li2, accurate over the whole plane.
///
/// Strategy: inversion for |z| > 1, reflection for Re z > 1/2, Taylor series
/// for |z| <= 1/2, and the Bernoulli series in u = -log(1-z) for the
/// remaining lens (where plain Taylor degenerates near the unit circle).
pub fn dilog(z: Cx) -> Cx {
    let one = Cx::new(1.0, 0.0);
    let pi2_6 = PI * PI / 6.0;
    if z.norm() == 0.0 {
        return Cx::new(0.0, 0.0);
    }
    if (z - one).norm() == 0.0 {
        return Cx::new(pi2_6, 0.0);
    }
    if z.norm() > 1.0 {
        let l = (-z).ln();
        return -Cx::new(pi2_6, 0.0) - 0.5 * l * l - dilog(one / z);
    }
    if z.re > 0.5 {
        return Cx::new(pi2_6, 0.0) - z.ln() * (one - z).ln() - dilog(one - z);
    }
    if z.norm() <= 0.5 {
        let mut zn = z;
        let s = sum_series(
            |n| {
                let k = (n + 1) as Real;
                let t = zn / (k * k);
                zn *= z;
                t
            },
            SeriesBudget::default(),
        )
        .expect("dilog Taylor series converges for |z| <= 1/2");
        return s.value;
    }
    // Bernoulli series: Li2(z) = sum_k B_k u^{k+1} / (k+1)!, u = -log(1-z).
    // Only B_0 = 1, B_1 = -1/2 and the even Bernoulli numbers contribute:
    // Li2 = u - u^2/4 + sum_{j>=1} B_{2j} u^{2j+1} / (2j+1)!.
    let u = -(one - z).ln();
    let u2 = u * u;
    let mut sum = u - u2 / 4.0;
    let mut upow = u; // runs through u^{2j+1}
    let mut fact = 1.0f64; // runs through (2j+1)!
    for (j, &b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_j = 2.0 * (j as Real + 1.0);
        upow *= u2;
        fact *= two_j * (two_j + 1.0);
        let t = upow * (b / fact);
        sum += t;
        if t.norm() < 1e-17 * sum.norm().max(1e-30) {
            break;
        }
    }
    sum
}

// B_2, B_4, ..., B_28: far more than the lens region ever needs.
const BERNOULLI_EVEN: [f64; 14] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
];

/// Bloch–Wigner dilogarithm D(z) = Im(Li2(z)) + arg(1-z) log|z|.
pub fn bloch_wigner(z: Cx) -> Result<Real> {
    if z.norm() == 0.0 || (z - Cx::new(1.0, 0.0)).norm() == 0.0 {
        return Err(Error::Domain("Bloch-Wigner D undefined at 0, 1".into()));
    }
    if z.im == 0.0 {
        // D vanishes identically on the real line.
        return Ok(0.0);
    }
    Ok(dilog(z).im + (Cx::new(1.0, 0.0) - z).arg() * z.norm().ln())
}

/// J(z) = log|z| log|1-z|.
pub fn jfun(z: Cx) -> Result<Real> {
    if z.norm() == 0.0 || (z - Cx::new(1.0, 0.0)).norm() == 0.0 {
        return Err(Error::Domain("J undefined at 0, 1".into()));
    }
    Ok(z.norm().ln() * (Cx::new(1.0, 0.0) - z).norm().ln())
}

fn bernoulli3(x: Real) -> Real {
    x * x * x - 1.5 * x * x + 0.5 * x
}

// |J(w)| and |D(w)| are both O(|w| (1 + |log|w||)) as w -> 0; below this
// threshold a term (and the geometric tail it starts) is far under 1e-16.
fn small_term_bound(w: Cx) -> Real {
    let n = w.norm();
    if n == 0.0 {
        0.0
    } else {
        n * (1.0 + n.ln().abs())
    }
}

/// J_tau(z) on the torus point's normalized representative.
pub fn j_tau(tau: HalfPeriod, z: TorusPoint) -> Result<Real> {
    let q = tau.nome();
    let z = z.z();
    let lq = q.norm().ln();
    let mut qn = Cx::new(1.0, 0.0);
    let mut total = 0.0f64;
    let budget = SeriesBudget::default();
    for n in 0..budget.max_terms {
        let up = z * qn;
        let down = qn / z;
        if n >= 2 && small_term_bound(up) < 1e-19 && small_term_bound(down) < 1e-19 {
            total += lq * lq / 3.0 * bernoulli3(z.norm().ln() / lq);
            return Ok(total);
        }
        total += jfun(up)?;
        if n >= 1 {
            total -= jfun(down)?;
        }
        qn *= q;
    }
    Err(Error::BudgetExceeded { terms: budget.max_terms, last: qn.norm() })
}

/// Elliptic dilogarithm D_tau(z) = sum over n in Z of D(z q^n).
pub fn d_tau(tau: HalfPeriod, z: TorusPoint) -> Result<Real> {
    let q = tau.nome();
    let z = z.z();
    let mut total = bloch_wigner(z)?;
    let mut qn = q;
    let budget = SeriesBudget::default();
    for _n in 1..budget.max_terms {
        let up = z * qn;
        let down = qn / z;
        if small_term_bound(up) < 1e-19 && small_term_bound(down) < 1e-19 {
            return Ok(total);
        }
        // D(z q^{-n}) = -D(q^n / z) by the inversion oddness.
        total += bloch_wigner(up)? - bloch_wigner(down)?;
        qn *= q;
    }
    Err(Error::BudgetExceeded { terms: budget.max_terms, last: qn.norm() })
}

/// R_tau(z) = D_tau(z) - i J_tau(z).
pub fn r_tau(tau: HalfPeriod, z: TorusPoint) -> Result<Cx> {
    Ok(Cx::new(d_tau(tau, z)?, -j_tau(tau, z)?))
}

/// R_tau by the direct Kronecker–Eisenstein double sum (square symmetric
/// truncation, M-doubling until 1e-7 stabilization). Must agree with
/// [`r_tau`]; the slow route exists as its independent check.
pub fn r_tau_lattice(tau: HalfPeriod, z: TorusPoint) -> Result<Cx> {
    // Recover (a, b) with z = e^{2 pi i (a + b tau)}.
    let w = z.z().ln() / Cx::new(0.0, 2.0 * PI);
    let b = w.im / tau.y();
    let a = w.re - b * tau.tau().re;
    let t = tau.tau();
    let mut prev: Option<Cx> = None;
    let mut m_max = 128usize;
    while m_max <= 16384 {
        let s = eisenstein_phase_sum(t, a, b, m_max);
        let val = -(tau.y() * tau.y() / PI) * s;
        if let Some(p) = prev {
            if (val - p).norm() < 1e-7 {
                return Ok(val);
            }
        }
        prev = Some(val);
        m_max *= 2;
    }
    Err(Error::NoConvergence("Eisenstein truncation for R_tau not stable".into()))
}

// sum'_{|m|,|n| <= M} e^{2 pi i (b n - a m)} / ((m tau + n)^2 (m tau- + n))
fn eisenstein_phase_sum(tau: Cx, a: Real, b: Real, m_max: usize) -> Cx {
    let mm = m_max as i64;
    let mut total = Cx::new(0.0, 0.0);
    for m in -mm..=mm {
        let base = tau * m as Real;
        let base_c = tau.conj() * m as Real;
        let phase_m = Cx::from_polar(1.0, -2.0 * PI * a * m as Real);
        let mut row = Cx::new(0.0, 0.0);
        for n in -mm..=mm {
            if m == 0 && n == 0 {
                continue;
            }
            let u = base + n as Real;
            let v = base_c + n as Real;
            let phase = Cx::from_polar(1.0, 2.0 * PI * b * n as Real);
            row += phase / (u * u * v);
        }
        total += phase_m * row;
    }
    total
}

/// Real-weighted Eisenstein sum S = sum' w(n) / ((omega m + n)^2 (omega- m + n)).
fn eisenstein_weighted_sum(omega: Cx, weight: impl Fn(i64) -> Real, m_max: usize) -> Cx {
    let mm = m_max as i64;
    let wtab: Vec<Real> = (0..60).map(&weight).collect();
    let period = wtab
        .iter()
        .enumerate()
        .skip(1)
        .find(|&(p, _)| (0..30).all(|n| (wtab[n] - weight(n as i64 + p as i64)).abs() < 1e-14))
        .map(|(p, _)| p as i64)
        .unwrap_or(1);
    let mut total = Cx::new(0.0, 0.0);
    for m in -mm..=mm {
        let base = omega * m as Real;
        let base_c = omega.conj() * m as Real;
        let mut row = Cx::new(0.0, 0.0);
        for n in -mm..=mm {
            if m == 0 && n == 0 {
                continue;
            }
            let w = wtab[(n.rem_euclid(period)) as usize];
            if w == 0.0 {
                continue;
            }
            let u = base + n as Real;
            let v = base_c + n as Real;
            row += w / (u * u * v);
        }
        total += row;
    }
    total
}

/// Lattice level multiplying mu per family.
pub fn lattice_level(f: FamilyId) -> u32 {
    match f {
        FamilyId::Mu => 4,
        FamilyId::N => 3,
        FamilyId::G => 6,
        FamilyId::R => 5,
    }
}

fn chi_m4_weight(n: i64) -> Real {
    match n.rem_euclid(4) {
        1 => 1.0,
        3 => -1.0,
        _ => 0.0,
    }
}

fn chi_m3_weight(n: i64) -> Real {
    match n.rem_euclid(3) {
        1 => 1.0,
        2 => -1.0,
        _ => 0.0,
    }
}

// 2 sin(2 pi n / 5) + sin(4 pi n / 5), the exact real form of the
// zeta_5 combination 2(z^n - z^-n) + z^{2n} - z^{-2n} = 2i * this.
fn zeta5_weight(n: i64) -> Real {
    let r = n.rem_euclid(5) as Real;
    2.0 * (2.0 * PI * r / 5.0).sin() + (4.0 * PI * r / 5.0).sin()
}

/// The family's Mahler measure as a Kronecker–Eisenstein double sum at the
/// half-period mu (Eisenstein summation, M-doubling to 1e-6 stabilization).
///
/// mu is the half-period with e^{2 pi i mu} equal to the family's nome; use
/// [`HalfPeriod::from_nome`] to build it from a q-series anchor.
pub fn family_lattice(f: FamilyId, mu: HalfPeriod) -> Result<Real> {
    let y = mu.y();
    let level = lattice_level(f) as Real;
    let omega = mu.tau() * level;
    let eval = |m_max: usize| -> Real {
        match f {
            FamilyId::Mu => {
                16.0 * y / (PI * PI) * eisenstein_weighted_sum(omega, chi_m4_weight, m_max).re
            }
            FamilyId::N => {
                27.0 * 3.0f64.sqrt() * y / (4.0 * PI * PI)
                    * eisenstein_weighted_sum(omega, chi_m3_weight, m_max).re
            }
            FamilyId::G => {
                let s6 = eisenstein_weighted_sum(omega, chi_m3_weight, m_max).re;
                let s3 = eisenstein_weighted_sum(mu.tau() * 3.0, chi_m3_weight, m_max).re;
                18.0 * 3.0f64.sqrt() * y / (PI * PI) * s6
                    + 9.0 * 3.0f64.sqrt() * y / (4.0 * PI * PI) * s3
            }
            FamilyId::R => 25.0 * y / (2.0 * PI * PI)
                * eisenstein_weighted_sum(omega, zeta5_weight, m_max).re,
        }
    };
    let mut m_max = 256usize;
    let mut prev = eval(m_max);
    while m_max <= 8192 {
        m_max *= 2;
        let cur = eval(m_max);
        if (cur - prev).abs() < 1e-6 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence("family lattice sum not stable at M = 16384".into()))
}
