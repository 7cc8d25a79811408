//! Elliptic nomes q_j and the inversion formulas recovering q from a base
//! function value.
//!
//! For j in {2, 3, 4, 6},
//!
//! ```text
//! q_j(alpha) = exp( -pi / sin(pi/j) * 2F1(1/j, 1-1/j; 1; 1-alpha)
//!                                   / 2F1(1/j, 1-1/j; 1; alpha) )
//! ```
//!
//! and the inversion table is: M(q)=alpha -> q = q_2(alpha);
//! N(q)=alpha -> q_3(alpha); G(q)=alpha -> q_2(u(2+u)^3/(1+2u)^3) where
//! alpha^3 = u/(2(1+u)^2); R(q)=alpha -> q_4 at the degree-24 rational
//! expression in k, where alpha^5 = k(1-k)^2/(1+k)^2. The auxiliary solves
//! pick the branch through u, k -> 0 as q -> 0.

use crate::hypergeom::{hyp2f1_zero_balanced, solve_small_branch_cubic};
use crate::numkit::poly_roots;
use crate::qseries::FamilyId;
use crate::{Cx, Error, Real, Result};

/// Signature of the nome: j in {2, 3, 4, 6}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NomeSignature(u8);

impl NomeSignature {
    pub fn new(j: u8) -> Result<Self> {
        match j {
            2 | 3 | 4 | 6 => Ok(NomeSignature(j)),
            _ => Err(Error::Domain(format!("nome signature must be 2, 3, 4, or 6, got {j}"))),
        }
    }

    pub fn j(self) -> u8 {
        self.0
    }
}

fn nome_f(j: u8, z: Cx) -> Result<Cx> {
    hyp2f1_zero_balanced(j, z)
}

/// The elliptic nome q_j(alpha). Requires both 2F1 arguments strictly inside
/// the unit disk (|alpha| < 1 and |1 - alpha| < 1); no analytic continuation.
pub fn nome_qj(sig: NomeSignature, alpha: Cx) -> Result<Cx> {
    let one = Cx::new(1.0, 0.0);
    if alpha.norm() == 0.0 || (one - alpha).norm() == 0.0 {
        return Err(Error::Domain("nome undefined at alpha = 0, 1".into()));
    }
    if alpha.norm() >= 1.0 || (one - alpha).norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "nome needs |alpha| < 1 and |1-alpha| < 1, got |a| = {}, |1-a| = {}",
            alpha.norm(),
            (one - alpha).norm()
        )));
    }
    let j = sig.j();
    let num = nome_f(j, one - alpha)?;
    let den = nome_f(j, alpha)?;
    let s = (std::f64::consts::PI / j as Real).sin();
    Ok((-std::f64::consts::PI / s * num / den).exp())
}

/// Invert a base function: the q with base_function(f, q) = alpha, for alpha
/// in the small-argument regime (the u, k -> 0 branch).
pub fn invert_base(f: FamilyId, alpha: Cx) -> Result<Cx> {
    let one = Cx::new(1.0, 0.0);
    match f {
        FamilyId::Mu => nome_qj(NomeSignature(2), alpha),
        FamilyId::N => nome_qj(NomeSignature(3), alpha),
        FamilyId::G => {
            // alpha^3 = u / (2(1+u)^2): 2 a3 u^2 + (4 a3 - 1) u + 2 a3 = 0.
            let a3 = alpha.powi(3);
            let mut roots = poly_roots(&[2.0 * a3, 4.0 * a3 - one, 2.0 * a3])?;
            roots.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
            let u = roots[0];
            if roots.len() > 1 && roots[1].norm() - u.norm() < 1e-12 {
                return Err(Error::BranchAmbiguous("G inversion: equal-magnitude roots".into()));
            }
            if u.norm() >= 0.5 {
                return Err(Error::BranchAmbiguous(format!(
                    "G inversion: smallest root |u| = {} not < 0.5",
                    u.norm()
                )));
            }
            nome_qj(
                NomeSignature(2),
                u * (2.0 * one + u).powi(3) / (one + 2.0 * u).powi(3),
            )
        }
        FamilyId::R => {
            // alpha^5 = k(1-k)^2/(1+k)^2:
            // k^3 - (2 + a5) k^2 + (1 - 2 a5) k - a5 = 0.
            let a5 = alpha.powi(5);
            let k = solve_small_branch_cubic([
                -a5,
                one - 2.0 * a5,
                -(2.0 * one + a5),
                one,
            ])?;
            let arg = 64.0 * k * (one + k - k * k).powi(5)
                / ((one + k * k).powi(2)
                    * ((one + 11.0 * k - k * k).powi(2) - 125.0 * k * k).powi(2));
            nome_qj(NomeSignature(4), arg)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeom::agm;
    use crate::qseries::{base_function, QPoint};

    #[test]
    fn q2_at_symmetric_point() {
        // alpha = 1/2 forces the 2F1 ratio to one: q_2(1/2) = e^{-pi}.
        let q = nome_qj(NomeSignature::new(2).unwrap(), Cx::new(0.5, 0.0)).unwrap();
        assert!((q.re - (-std::f64::consts::PI).exp()).abs() < 1e-12, "{}", q.re);
    }

    #[test]
    fn q4_at_symmetric_point() {
        // sin(pi/4) = sqrt(2)/2, so q_4(1/2) = exp(-sqrt(2) pi).
        let q = nome_qj(NomeSignature::new(4).unwrap(), Cx::new(0.5, 0.0)).unwrap();
        let expect = (-(2.0f64).sqrt() * std::f64::consts::PI).exp();
        assert!((q.re - expect).abs() < 1e-12, "{} vs {expect}", q.re);
    }

    #[test]
    fn q2_of_one_tenth_against_agm_nome() {
        // Classical nome exp(-pi K(1-m)/K(m)) via AGM as an independent oracle.
        let m = 0.1f64;
        let k_of = |mm: f64| std::f64::consts::PI / (2.0 * agm(1.0, (1.0 - mm).sqrt()));
        let oracle = (-std::f64::consts::PI * k_of(1.0 - m) / k_of(m)).exp();
        let q = nome_qj(NomeSignature::new(2).unwrap(), Cx::new(m, 0.0)).unwrap();
        assert!((q.re - oracle).abs() < 1e-13);
        // Frozen value; the often-quoted ".01975" is 3x this and inconsistent
        // with mu(1/10) = 2.524718.
        assert!((q.re - 0.006_584_651_553_858_37).abs() < 5e-5);
        assert!((q.re - 0.006_584_651_553_858_37).abs() < 1e-12);
    }

    #[test]
    fn nome_domain_errors() {
        let s2 = NomeSignature::new(2).unwrap();
        assert!(nome_qj(s2, Cx::new(0.0, 0.0)).is_err());
        assert!(nome_qj(s2, Cx::new(1.0, 0.0)).is_err());
        assert!(nome_qj(s2, Cx::new(-0.5, 0.0)).is_err()); // |1 - alpha| = 1.5
        assert!(NomeSignature::new(5).is_err());
    }

    #[test]
    fn round_trips_all_families() {
        for &f in &FamilyId::ALL {
            for &q0 in &[0.01, 0.03, 0.08] {
                let alpha = base_function(f, QPoint::real(q0).unwrap()).unwrap();
                let q = invert_base(f, alpha).unwrap();
                assert!(
                    (q - Cx::new(q0, 0.0)).norm() < 1e-8,
                    "{f:?} q0={q0}: got {q}"
                );
            }
        }
    }

    #[test]
    fn mu_inversion_at_one_tenth() {
        let q = invert_base(FamilyId::Mu, Cx::new(0.1, 0.0)).unwrap();
        assert!((q.re - 0.006_584_651_553_858_37).abs() < 1e-12);
        let back = base_function(FamilyId::Mu, QPoint::auto(q).unwrap()).unwrap();
        assert!((back.re - 0.1).abs() < 1e-10);
    }

    #[test]
    fn branch_ambiguity_is_surfaced() {
        // For alpha^3 > 1/8 the auxiliary quadratic of the G inversion has a
        // complex-conjugate root pair of equal magnitude: no small branch.
        let r = invert_base(FamilyId::G, Cx::new(0.52, 0.0));
        assert!(matches!(r, Err(Error::BranchAmbiguous(_))), "{r:?}");
    }

    #[test]
    fn quintic_nome_relation() {
        // q4(64z(1+z)^5/((1+4z^2)((1+11z)^2-125 z^2)^2))^5
        //   = q4(64z^5(1+z)/((1+4z^2)((1-z)^2-5z^2)^2))
        let s4 = NomeSignature::new(4).unwrap();
        for &zz in &[0.01, 0.03, 0.05] {
            let z = Cx::new(zz, 0.0);
            let one = Cx::new(1.0, 0.0);
            let c = one + 4.0 * z * z;
            let a = (one + 11.0 * z).powi(2) - 125.0 * z * z;
            let b = (one - z).powi(2) - 5.0 * z * z;
            let qa = nome_qj(s4, 64.0 * z * (one + z).powi(5) / (c * a * a)).unwrap();
            let qb = nome_qj(s4, 64.0 * z.powi(5) * (one + z) / (c * b * b)).unwrap();
            assert!((qa.powi(5) - qb).norm() < 1e-9, "z={zz}: {}", (qa.powi(5) - qb).norm());
        }
    }
}
