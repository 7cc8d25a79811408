//! Every named identity as a runnable residual check, plus modular-equation
//! parameterization certificates.
//!
//! Each identity carries an explicit routing entry (which numerical backend
//! evaluates it, its default tolerance, whether it is conjectural) so that a
//! failure localizes immediately. Conjectural identities never gate a suite:
//! they report residuals only.
//!
//! Reports are plain data with a stable serialized shape:
//! `{id, samples: [{params, lhs, rhs, residual}], max_residual, tol, passed,
//! conjectural, error}`.

use crate::hypergeom::{hyp2f1, mu_hyp, omega, phi, phi_closed1_at, OmegaMode, PhiMode};
use crate::lfun::{curve_from_k2, lprime_at_0, validated_l_object};
use crate::nome::{invert_base, nome_qj, NomeSignature};
use crate::qseries::{base_function, mahler_qseries, measure_argument, FamilyId, QPoint};

use crate::torus::{g3_modular_poly, mahler_jensen_tol, mu_family_polynomial};
use crate::{Cx, Error, Real, Result};
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

const PI: Real = std::f64::consts::PI;

/// Identity identifiers. The Hecke relation is parameterized by family and
/// prime; the registry instantiates the four standard combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// m(4k^2) + m(4/k^2) = 2 m(2(k + 1/k)).
    Ko,
    /// m(2(k+1/k)) + m(2i(k-1/k)) = m(4/k^2), 0 < |k| < 1.
    First,
    /// m(2) = L'(E, 0), conductor 24.
    Thm11A,
    /// m(8) = 4 L'(E, 0), conductor 24.
    Thm11B,
    /// m(4 sqrt 2) = L'(E, 0), conductor 64.
    Frv1,
    /// m(3 sqrt 2) = (5/2) L'(E, 0), conductor 24.
    Frv2,
    /// mu(4k^2/(1+k^2)^2) + mu(-4k^2/(1-k^2)^2) = mu(k^4).
    MuP2,
    /// Degree-2 functional equation of n.
    NP2,
    /// n(u^3) = sum_j n(Y(zeta_3^j u)).
    NP3,
    /// g(u^3) = sum_j g(Y(zeta_3^j u)).
    GP3,
    /// r(u^5) = sum_j r(Y(zeta_5^j u)).
    RP5,
    /// 3 g(p) = n(27p/(1+4p)^3) + 4 n(27p^2/(1-2p)^3).
    GFromN,
    /// 3 n(...) = g(u/(2(1+u)^2)) - 8 g(-u(1+u)/2) + 4 g(u^2/(4(1+u))).
    NFromG,
    /// Both mixed g/n relations along real q.
    MixedGn,
    /// sum_{j<p} f(zeta_p^j q) = (1 + p^2 chi(p)) f(q^p) - p chi(p) f(q^{p^2}).
    Hecke(FamilyId, u8),
    /// Mahler measure of the degree-3 modular polynomial G3.
    G3ModPoly,
    /// 5 m(i sqrt 2) = 3 m(3 sqrt 2).
    Sqrt2Ratio,
    /// m(5) = 6 m(1) (conjectural).
    Boyd5,
    /// m(8) = 4 m(2).
    Boyd8,
    /// m(1) = L'(E, 0), conductor 15 (conjectural).
    Boyd1,
    /// omega(p/(2(1+p)^2)) = (1+p) omega(p^2/(4(1+p))).
    OmegaFe,
    /// phi(k^2(1+k)/(1-k)) = (1-k)/(1+k)^2 phi(k(1-k)^2/(1+k)^2).
    PhiFe,
    /// The series/2F1 transformation behind the phi closed form.
    Pf2F1,
    /// sqrt-ratio 2F1 transformation in z.
    HypZ,
    /// Fifth-power relation between signature-4 nomes.
    Nome4Q,
}

/// Modular-equation certificates: base-function values plugged into the
/// stated polynomial relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModularParamId {
    /// 27ab(1-a)(1-b) = (a+b-2ab)^3 with a = N(q), b = N(q^2).
    Sig3Deg2,
    /// a = 1 - ((1-b^(1/3))/(1+2b^(1/3)))^3 with a = N(q), b = N(q^3).
    Sig3Deg3,
    /// a^3 = b(1-b+b^2)/(1+2b+4b^2) with a = G(q), b = G(q^3).
    CubicCf,
    /// a^5 = b(1-2b+4b^2-3b^3+b^4)/(1+3b+4b^2+2b^3+b^4), a = R(q), b = R(q^5).
    QuinticRr,
    /// 4M(q^2)/(1+M(q^2))^2 = (M(q)/(M(q)-2))^2.
    ClassicalDeg2,
}

impl ModularParamId {
    pub const ALL: [ModularParamId; 5] = [
        ModularParamId::Sig3Deg2,
        ModularParamId::Sig3Deg3,
        ModularParamId::CubicCf,
        ModularParamId::QuinticRr,
        ModularParamId::ClassicalDeg2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModularParamId::Sig3Deg2 => "sig3-deg2",
            ModularParamId::Sig3Deg3 => "sig3-deg3",
            ModularParamId::CubicCf => "cubic-cf",
            ModularParamId::QuinticRr => "quintic-rr",
            ModularParamId::ClassicalDeg2 => "classical-deg2",
        }
    }
}

/// One sampled parameter point with both sides and the residual.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SampleResidual {
    pub params: Vec<Real>,
    pub lhs: Real,
    pub rhs: Real,
    pub residual: Real,
}

/// Outcome of verifying one identity.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerificationReport {
    pub id: String,
    pub samples: Vec<SampleResidual>,
    pub max_residual: Real,
    pub tol: Real,
    pub passed: bool,
    pub conjectural: bool,
    /// Populated when the evaluation itself failed (never by a residual).
    pub error: Option<String>,
}

impl VerificationReport {
    fn from_samples(
        id: String,
        samples: Vec<SampleResidual>,
        tol: Real,
        conjectural: bool,
    ) -> Self {
        let max_residual = samples.iter().map(|s| s.residual).fold(0.0, Real::max);
        VerificationReport {
            id,
            max_residual,
            tol,
            passed: max_residual < tol,
            conjectural,
            samples,
            error: None,
        }
    }

    fn failed(id: String, tol: Real, conjectural: bool, err: &Error) -> Self {
        VerificationReport {
            id,
            samples: Vec::new(),
            max_residual: Real::MAX,
            tol,
            passed: false,
            conjectural,
            error: Some(err.to_string()),
        }
    }
}

/// Routing metadata: the numerical backend per identity is fixed data, not a
/// heuristic, so failures localize.
#[derive(Debug, Clone, Copy)]
pub struct IdentityInfo {
    pub tol: Real,
    pub conjectural: bool,
    pub route: &'static str,
    pub default_samples: usize,
}

impl IdentityId {
    /// Registry order used by `verify_all`.
    pub fn all() -> Vec<IdentityId> {
        use IdentityId::*;
        vec![
            Ko,
            First,
            Thm11A,
            Thm11B,
            Frv1,
            Frv2,
            MuP2,
            NP2,
            NP3,
            GP3,
            RP5,
            GFromN,
            NFromG,
            MixedGn,
            Hecke(FamilyId::Mu, 3),
            Hecke(FamilyId::N, 2),
            Hecke(FamilyId::G, 3),
            Hecke(FamilyId::R, 5),
            G3ModPoly,
            Sqrt2Ratio,
            Boyd8,
            OmegaFe,
            PhiFe,
            Pf2F1,
            HypZ,
            Nome4Q,
            Boyd5,
            Boyd1,
        ]
    }

    pub fn name(self) -> String {
        use IdentityId::*;
        match self {
            Ko => "ko".into(),
            First => "first".into(),
            Thm11A => "thm11-a".into(),
            Thm11B => "thm11-b".into(),
            Frv1 => "frv1".into(),
            Frv2 => "frv2".into(),
            MuP2 => "mu-p2".into(),
            NP2 => "n-p2".into(),
            NP3 => "n-p3".into(),
            GP3 => "g-p3".into(),
            RP5 => "r-p5".into(),
            GFromN => "g-from-n".into(),
            NFromG => "n-from-g".into(),
            MixedGn => "mixed-gn".into(),
            Hecke(f, p) => format!("hecke-{}-{p}", f.name()),
            G3ModPoly => "g3-modpoly".into(),
            Sqrt2Ratio => "sqrt2-ratio".into(),
            Boyd5 => "boyd5".into(),
            Boyd8 => "boyd8".into(),
            Boyd1 => "boyd1".into(),
            OmegaFe => "omega-fe".into(),
            PhiFe => "phi-fe".into(),
            Pf2F1 => "pf-2f1".into(),
            HypZ => "hyp-z".into(),
            Nome4Q => "nome4-q".into(),
        }
    }

    pub fn parse(s: &str) -> Option<IdentityId> {
        use IdentityId::*;
        if let Some(rest) = s.strip_prefix("hecke-") {
            let (fam, p) = rest.rsplit_once('-')?;
            let f = match fam {
                "mu" => FamilyId::Mu,
                "n" => FamilyId::N,
                "g" => FamilyId::G,
                "r" => FamilyId::R,
                _ => return None,
            };
            return Some(Hecke(f, p.parse().ok()?));
        }
        Some(match s {
            "ko" => Ko,
            "first" => First,
            "thm11-a" => Thm11A,
            "thm11-b" => Thm11B,
            "frv1" => Frv1,
            "frv2" => Frv2,
            "mu-p2" => MuP2,
            "n-p2" => NP2,
            "n-p3" => NP3,
            "g-p3" => GP3,
            "r-p5" => RP5,
            "g-from-n" => GFromN,
            "n-from-g" => NFromG,
            "mixed-gn" => MixedGn,
            "g3-modpoly" => G3ModPoly,
            "sqrt2-ratio" => Sqrt2Ratio,
            "boyd5" => Boyd5,
            "boyd8" => Boyd8,
            "boyd1" => Boyd1,
            "omega-fe" => OmegaFe,
            "phi-fe" => PhiFe,
            "pf-2f1" => Pf2F1,
            "hyp-z" => HypZ,
            "nome4-q" => Nome4Q,
            _ => return None,
        })
    }

    pub fn info(self) -> IdentityInfo {
        use IdentityId::*;
        let (tol, conjectural, route, default_samples) = match self {
            Ko => (1e-7, false, "torus", 5),
            First => (1e-7, false, "torus (complex coefficients)", 5),
            Thm11A | Thm11B | Frv1 | Frv2 => (1e-6, false, "torus + lfun", 1),
            MuP2 | NP2 | NP3 | GP3 | RP5 => (1e-9, false, "qseries + nome", 5),
            GFromN | NFromG => (1e-9, false, "qseries + nome", 2),
            MixedGn => (1e-9, false, "qseries", 5),
            Hecke(..) => (1e-9, false, "qseries", 2),
            G3ModPoly => (1e-5, false, "torus (degree 16) + hyp", 1),
            Sqrt2Ratio | Boyd8 => (1e-7, false, "torus", 1),
            Boyd5 => (1e-5, true, "torus", 1),
            Boyd1 => (1e-5, true, "torus + lfun", 1),
            OmegaFe | PhiFe => (1e-11, false, "hyp series", 3),
            Pf2F1 => (1e-10, false, "hyp series vs closed", 2),
            HypZ => (1e-10, false, "hyp", 2),
            Nome4Q => (1e-9, false, "nome", 3),
        };
        IdentityInfo { tol, conjectural, route, default_samples }
    }
}

/// Identities registered but deliberately not implemented: the degree-11
/// resultant identity for r(t), whose verification would require expanding
/// the resultant of z^5 - xy/((x+1)(y+1)(x+y+1)) against the degree-11
/// modular polynomial P(u, v) = uv(1-11v^5-v^10)(1-11u^5-u^10) - (u-v)^12 of
/// the Rogers-Ramanujan pair R(q), R(q^11). Documented here so coverage is
/// explicit without a fake test.
pub const KNOWN_UNIMPLEMENTED: &[(&str, &str)] = &[(
    "resultant-r-p11",
    "Mahler measure of the degree-11 Rogers-Ramanujan resultant identity; \
     registered unimplemented (no numeric verification attempted)",
)];

fn cx(re: Real) -> Cx {
    Cx::new(re, 0.0)
}

fn qf(f: FamilyId, q: Cx) -> Result<Real> {
    mahler_qseries(f, QPoint::auto(q)?)
}

fn arg_of(f: FamilyId, q: Cx) -> Result<Cx> {
    measure_argument(f, QPoint::auto(q)?)
}

fn m_torus(k: Cx) -> Result<Real> {
    mahler_jensen_tol(&mu_family_polynomial(k)?, 4096, 1e-8)
}

type CachedReal = OnceLock<std::result::Result<Real, Error>>;

fn cached(cell: &CachedReal, compute: impl FnOnce() -> Result<Real>) -> Result<Real> {
    cell.get_or_init(compute).clone()
}

static M_OF_1: CachedReal = OnceLock::new();
static M_OF_2: CachedReal = OnceLock::new();
static M_OF_5: CachedReal = OnceLock::new();
static M_OF_8: CachedReal = OnceLock::new();
static M_3SQRT2: CachedReal = OnceLock::new();
static M_4SQRT2: CachedReal = OnceLock::new();
static M_ISQRT2: CachedReal = OnceLock::new();
static LPRIME_15: CachedReal = OnceLock::new();
static LPRIME_24: CachedReal = OnceLock::new();
static LPRIME_64: CachedReal = OnceLock::new();

/// Shared measure constants (memoized; all torus-oracle evaluations).
pub fn measure_constant(name: &str) -> Result<Real> {
    match name {
        "m1" => cached(&M_OF_1, || {
            mahler_jensen_tol(&mu_family_polynomial(cx(1.0))?, 16384, 1e-8)
        }),
        "m2" => cached(&M_OF_2, || {
            mahler_jensen_tol(&mu_family_polynomial(cx(2.0))?, 16384, 1e-8)
        }),
        "m5" => cached(&M_OF_5, || m_torus(cx(5.0))),
        "m8" => cached(&M_OF_8, || m_torus(cx(8.0))),
        "m3sqrt2" => cached(&M_3SQRT2, || m_torus(cx(3.0 * 2.0f64.sqrt()))),
        "m4sqrt2" => cached(&M_4SQRT2, || m_torus(cx(4.0 * 2.0f64.sqrt()))),
        "misqrt2" => cached(&M_ISQRT2, || m_torus(Cx::new(0.0, 2.0f64.sqrt()))),
        _ => Err(Error::Domain(format!("unknown measure constant {name}"))),
    }
}

/// L'(E, 0) for the three validated k^2 values (memoized).
pub fn lprime_constant(k2: i64) -> Result<Real> {
    let cell = match k2 {
        1 => &LPRIME_15,
        18 => &LPRIME_24,
        32 => &LPRIME_64,
        _ => return Err(Error::Domain(format!("no validated conductor for k^2 = {k2}"))),
    };
    cached(cell, || {
        let curve = curve_from_k2(k2)?;
        let obj = validated_l_object(k2).expect("validated k2");
        lprime_at_0(&curve, obj.conductor, 100_000)
    })
}

fn zeta(p: u8, j: u8) -> Cx {
    Cx::from_polar(1.0, 2.0 * PI * j as Real / p as Real)
}

fn hecke_chi(f: FamilyId, p: u8) -> Result<Real> {
    // The character from the family's q-series, restricted to primes where
    // it is real: p != 2 for g, p = 0, +-1 mod 5 for r.
    let v = match f {
        FamilyId::Mu => [0.0, 1.0, 0.0, -1.0][(p % 4) as usize],
        FamilyId::N => [0.0, 1.0, -1.0][(p % 3) as usize],
        FamilyId::G => {
            if p == 2 {
                return Err(Error::Domain("Hecke relation for g excludes p = 2".into()));
            }
            [0.0, 1.0, -1.0][(p % 3) as usize]
        }
        FamilyId::R => match p % 5 {
            0 => 0.0,
            1 => 1.0,
            4 => -1.0,
            _ => {
                return Err(Error::Domain(
                    "Hecke relation for r needs p = 0, +-1 mod 5".into(),
                ))
            }
        },
    };
    Ok(v)
}

// Per-identity residual evaluation at one parameter point.
fn eval_identity(id: IdentityId, x: Real) -> Result<SampleResidual> {
    use IdentityId::*;
    let one = cx(1.0);
    let sample = |params: Vec<Real>, lhs: Real, rhs: Real| SampleResidual {
        params,
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    };
    match id {
        Ko => {
            let k = x;
            let lhs = m_torus(cx(4.0 * k * k))? + m_torus(cx(4.0 / (k * k)))?;
            let rhs = 2.0 * m_torus(cx(2.0 * (k + 1.0 / k)))?;
            Ok(sample(vec![k], lhs, rhs))
        }
        First => {
            let k = x;
            let lhs = m_torus(cx(2.0 * (k + 1.0 / k)))?
                + m_torus(Cx::new(0.0, 2.0 * (k - 1.0 / k)))?;
            let rhs = m_torus(cx(4.0 / (k * k)))?;
            Ok(sample(vec![k], lhs, rhs))
        }
        Thm11A => Ok(sample(vec![], measure_constant("m2")?, lprime_constant(18)?)),
        Thm11B => Ok(sample(vec![], measure_constant("m8")?, 4.0 * lprime_constant(18)?)),
        Frv1 => Ok(sample(vec![], measure_constant("m4sqrt2")?, lprime_constant(32)?)),
        Frv2 => Ok(sample(vec![], measure_constant("m3sqrt2")?, 2.5 * lprime_constant(18)?)),
        MuP2 => {
            let k = x;
            let a1 = 4.0 * k * k / (1.0 + k * k).powi(2);
            let q = invert_base(FamilyId::Mu, cx(a1))?;
            let meas = (qf(FamilyId::Mu, q)? + qf(FamilyId::Mu, -q)?
                - qf(FamilyId::Mu, q * q)?)
            .abs();
            let p1 = (arg_of(FamilyId::Mu, -q)? - cx(-4.0 * k * k / (1.0 - k * k).powi(2))).norm();
            let p2 = (arg_of(FamilyId::Mu, q * q)? - cx(k.powi(4))).norm();
            Ok(SampleResidual {
                params: vec![k],
                lhs: meas,
                rhs: 0.0,
                residual: meas.max(p1).max(p2),
            })
        }
        NP2 => {
            let u = x;
            let nq = 27.0 * u * (1.0 + u).powi(4) / (2.0 * (1.0 + 4.0 * u + u * u).powi(3));
            let q = nome_qj(NomeSignature::new(3)?, cx(nq))?;
            let meas = (qf(FamilyId::N, q)? + qf(FamilyId::N, -q)?
                - 2.0 * qf(FamilyId::N, q.powi(4))?
                + 3.0 * qf(FamilyId::N, q * q)?)
            .abs();
            let p1 = (arg_of(FamilyId::N, -q)?
                - cx(-27.0 * u * (1.0 + u) / (2.0 * (1.0 - 2.0 * u - 2.0 * u * u).powi(3))))
            .norm();
            let p2 = (arg_of(FamilyId::N, q * q)?
                - cx(27.0 * u * u * (1.0 + u).powi(2) / (4.0 * (1.0 + u + u * u).powi(3))))
            .norm();
            let p3 = (arg_of(FamilyId::N, q.powi(4))?
                - cx(27.0 * u.powi(4) * (1.0 + u) / (2.0 * (2.0 + 2.0 * u - u * u).powi(3))))
            .norm();
            Ok(SampleResidual {
                params: vec![u],
                lhs: meas,
                rhs: 0.0,
                residual: meas.max(p1).max(p2).max(p3),
            })
        }
        NP3 => {
            let u = x;
            let qc = nome_qj(NomeSignature::new(3)?, cx(u.powi(3)))?;
            let q = qc.powf(1.0 / 3.0);
            let y = |t: Cx| one - ((one - t) / (one + 2.0 * t)).powi(3);
            let mut lhs = 0.0;
            let mut pmax: Real = 0.0;
            for j in 0..3u8 {
                let qq = zeta(3, j) * q;
                lhs += qf(FamilyId::N, qq)?;
                pmax = pmax.max((arg_of(FamilyId::N, qq)? - y(zeta(3, j) * cx(u))).norm());
            }
            let rhs = qf(FamilyId::N, qc)?;
            Ok(SampleResidual {
                params: vec![u],
                lhs,
                rhs,
                residual: (lhs - rhs).abs().max(pmax),
            })
        }
        GP3 => {
            let u = x;
            let qc = invert_base(FamilyId::G, cx(u))?;
            let q = qc.powf(1.0 / 3.0);
            let y = |t: Cx| t * (one - t + t * t) / (one + 2.0 * t + 4.0 * t * t);
            let mut lhs = 0.0;
            let mut pmax: Real = 0.0;
            for j in 0..3u8 {
                let qq = zeta(3, j) * q;
                lhs += qf(FamilyId::G, qq)?;
                pmax = pmax.max((arg_of(FamilyId::G, qq)? - y(zeta(3, j) * cx(u))).norm());
            }
            let rhs = qf(FamilyId::G, qc)?;
            Ok(SampleResidual {
                params: vec![u],
                lhs,
                rhs,
                residual: (lhs - rhs).abs().max(pmax),
            })
        }
        RP5 => {
            let u = x;
            let qc = invert_base(FamilyId::R, cx(u))?;
            let q = qc.powf(1.0 / 5.0);
            let y = |t: Cx| {
                t * (one - 2.0 * t + 4.0 * t * t - 3.0 * t.powi(3) + t.powi(4))
                    / (one + 3.0 * t + 4.0 * t * t + 2.0 * t.powi(3) + t.powi(4))
            };
            let mut lhs = 0.0;
            let mut pmax: Real = 0.0;
            for j in 0..5u8 {
                let qq = zeta(5, j) * q;
                lhs += qf(FamilyId::R, qq)?;
                pmax = pmax.max((arg_of(FamilyId::R, qq)? - y(zeta(5, j) * cx(u))).norm());
            }
            let rhs = qf(FamilyId::R, qc)?;
            Ok(SampleResidual {
                params: vec![u],
                lhs,
                rhs,
                residual: (lhs - rhs).abs().max(pmax),
            })
        }
        GFromN => {
            let p = x;
            let qg = invert_base(FamilyId::G, cx(p.powf(1.0 / 3.0)))?;
            let g = qf(FamilyId::G, qg)?;
            let s1 = 27.0 * p / (1.0 + 4.0 * p).powi(3);
            let s2 = 27.0 * p * p / (1.0 - 2.0 * p).powi(3);
            let n1 = qf(FamilyId::N, nome_qj(NomeSignature::new(3)?, cx(s1))?)?;
            let n2 = qf(FamilyId::N, nome_qj(NomeSignature::new(3)?, cx(s2))?)?;
            Ok(sample(vec![p], 3.0 * g, n1 + 4.0 * n2))
        }
        NFromG => {
            let u = x;
            let alpha = u * (2.0 + u).powi(3) / (1.0 + 2.0 * u).powi(3);
            let q = nome_qj(NomeSignature::new(2)?, cx(alpha))?;
            let lhs = 3.0 * qf(FamilyId::N, q)?;
            let rhs = qf(FamilyId::G, q)? - 8.0 * qf(FamilyId::G, -q)?
                + 4.0 * qf(FamilyId::G, q * q)?;
            let p1 = (arg_of(FamilyId::G, q)? - cx(u / (2.0 * (1.0 + u).powi(2)))).norm();
            let p2 = (arg_of(FamilyId::G, -q)? - cx(-u * (1.0 + u) / 2.0)).norm();
            let p3 = (arg_of(FamilyId::G, q * q)? - cx(u * u / (4.0 * (1.0 + u)))).norm();
            let p4 = (arg_of(FamilyId::N, q)?
                - cx(27.0 * u * (1.0 + u).powi(4) / (2.0 * (1.0 + 4.0 * u + u * u).powi(3))))
            .norm();
            Ok(SampleResidual {
                params: vec![u],
                lhs,
                rhs,
                residual: (lhs - rhs).abs().max(p1).max(p2).max(p3).max(p4),
            })
        }
        MixedGn => {
            let q = cx(x);
            let nq = qf(FamilyId::N, q)?;
            let nq2 = qf(FamilyId::N, q * q)?;
            let gq = qf(FamilyId::G, q)?;
            let gmq = qf(FamilyId::G, -q)?;
            let gq2 = qf(FamilyId::G, q * q)?;
            let r1 = (3.0 * nq - (gq - 8.0 * gmq + 4.0 * gq2)).abs();
            let r2 = (3.0 * gq - (nq + 4.0 * nq2)).abs();
            Ok(SampleResidual {
                params: vec![x],
                lhs: r1,
                rhs: r2,
                residual: r1.max(r2),
            })
        }
        Hecke(f, p) => {
            let chi = hecke_chi(f, p)?;
            let q0 = cx(x);
            let pf = p as Real;
            let mut lhs = 0.0;
            for j in 0..p {
                lhs += qf(f, zeta(p, j) * q0)?;
            }
            let rhs = (1.0 + pf * pf * chi) * qf(f, q0.powi(p as i32))?
                - pf * chi * qf(f, q0.powi((p * p) as i32))?;
            Ok(sample(vec![x], lhs, rhs))
        }
        G3ModPoly => {
            let p = x;
            let beta = (1.0 / p) * ((1.0 + 2.0 * p) / (2.0 + p)).powi(3);
            let poly = g3_modular_poly(cx(beta));
            let lhs = mahler_jensen_tol(&poly, 2048, 1e-6)?;
            let rhs = -16.0 * 2.0f64.ln()
                - 16.0 * mu_hyp(cx(p * ((2.0 + p) / (1.0 + 2.0 * p)).powi(3)))?
                + 8.0 * mu_hyp(cx(p.powi(3) * (2.0 + p) / (1.0 + 2.0 * p)))?;
            Ok(sample(vec![p], lhs, rhs))
        }
        Sqrt2Ratio => Ok(sample(
            vec![],
            5.0 * measure_constant("misqrt2")?,
            3.0 * measure_constant("m3sqrt2")?,
        )),
        Boyd5 => Ok(sample(vec![], measure_constant("m5")?, 6.0 * measure_constant("m1")?)),
        Boyd8 => Ok(sample(vec![], measure_constant("m8")?, 4.0 * measure_constant("m2")?)),
        Boyd1 => Ok(sample(vec![], measure_constant("m1")?, lprime_constant(1)?)),
        OmegaFe => {
            let p = cx(x);
            let lhs = omega(p / (2.0 * (one + p).powi(2)), OmegaMode::Series)?;
            let rhs = (one + p) * omega(p * p / (4.0 * (one + p)), OmegaMode::Series)?;
            Ok(sample(vec![x], lhs.re, rhs.re))
        }
        PhiFe => {
            let k = cx(x);
            let lhs = phi(k * k * (one + k) / (one - k), PhiMode::Series)?;
            let rhs = (one - k) / (one + k).powi(2)
                * phi(k * (one - k).powi(2) / (one + k).powi(2), PhiMode::Series)?;
            Ok(sample(vec![x], lhs.re, rhs.re))
        }
        Pf2F1 => {
            let k = cx(x);
            let lhs = phi(k * (one - k).powi(2) / (one + k).powi(2), PhiMode::Series)?;
            let rhs = phi_closed1_at(k)?;
            Ok(sample(vec![x], lhs.re, rhs.re))
        }
        HypZ => {
            let z = cx(x);
            let a = (one + 11.0 * z).powi(2) - 125.0 * z * z;
            let b = (one - z).powi(2) - 5.0 * z * z;
            let c = one + 4.0 * z * z;
            let lhs = (a / b).sqrt()
                * hyp2f1(0.25, 0.75, 1.0, 64.0 * z.powi(5) * (one + z) / (c * b * b))?;
            let rhs = hyp2f1(0.25, 0.75, 1.0, 64.0 * z * (one + z).powi(5) / (c * a * a))?;
            Ok(sample(vec![x], lhs.re, rhs.re))
        }
        Nome4Q => {
            let z = cx(x);
            let a = (one + 11.0 * z).powi(2) - 125.0 * z * z;
            let b = (one - z).powi(2) - 5.0 * z * z;
            let c = one + 4.0 * z * z;
            let s4 = NomeSignature::new(4)?;
            let qa = nome_qj(s4, 64.0 * z * (one + z).powi(5) / (c * a * a))?;
            let qb = nome_qj(s4, 64.0 * z.powi(5) * (one + z) / (c * b * b))?;
            let lhs = qa.powi(5);
            Ok(SampleResidual {
                params: vec![x],
                lhs: lhs.re,
                rhs: qb.re,
                residual: (lhs - qb).norm(),
            })
        }
    }
}

// Parameter sampler: pinned reference points first, then seeded jitter
// within the identity's stated domain.
fn sample_points(id: IdentityId, n: usize, seed: u64) -> Vec<Real> {
    use IdentityId::*;
    let (pinned, lo, hi): (&[Real], Real, Real) = match id {
        Ko => (&[0.7, 1.3], 0.55, 1.45),
        First => (&[0.4, 0.7], 0.35, 0.8),
        MuP2 => (&[0.3], 0.1, 0.45),
        NP2 => (&[0.02, 0.05], 0.01, 0.055),
        NP3 => (&[0.3], 0.1, 0.33),
        GP3 => (&[0.2], 0.08, 0.22),
        RP5 => (&[0.2], 0.08, 0.22),
        GFromN => (&[0.02, 0.05], 0.01, 0.05),
        NFromG => (&[0.02, 0.05], 0.01, 0.055),
        MixedGn => (&[0.05, 0.1], 0.02, 0.1),
        Hecke(..) => (&[0.02, 0.05], 0.015, 0.055),
        G3ModPoly => (&[0.02], 0.005, 0.02),
        OmegaFe => (&[0.02, 0.05, 0.1], 0.01, 0.1),
        PhiFe => (&[0.02, 0.05, 0.1], 0.01, 0.1),
        Pf2F1 => (&[0.02, 0.05], 0.01, 0.06),
        HypZ => (&[0.01, 0.03], 0.005, 0.04),
        Nome4Q => (&[0.01, 0.03, 0.05], 0.005, 0.05),
        // Fixed-point identities ignore the sampler.
        _ => return vec![0.0],
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x6d61686c6572);
    let mut out: Vec<Real> = pinned.iter().copied().take(n).collect();
    while out.len() < n {
        let x = rng.gen_range(lo..hi);
        // KO degenerates at k = 1 (4k^2 = 4/k^2); keep a margin.
        if matches!(id, Ko) && (x - 1.0).abs() < 0.03 {
            continue;
        }
        out.push(x);
    }
    out
}

/// Verify one identity over `n_samples` in-domain parameter points.
pub fn verify(id: IdentityId, n_samples: usize, tol: Real, seed: u64) -> VerificationReport {
    let info = id.info();
    let points = sample_points(id, n_samples.max(1), seed);
    let mut samples = Vec::with_capacity(points.len());
    for &x in &points {
        match eval_identity(id, x) {
            Ok(s) => samples.push(s),
            Err(e) => return VerificationReport::failed(id.name(), tol, info.conjectural, &e),
        }
    }
    VerificationReport::from_samples(id.name(), samples, tol, info.conjectural)
}

/// Certificate check: plug base-function values at q into the stated
/// polynomial relation.
pub fn verify_modular_param(id: ModularParamId, q: Real) -> Result<VerificationReport> {
    if !(q > 0.0 && q <= 0.1) {
        return Err(Error::Domain(format!("modular certificates sample 0 < q <= 0.1, got {q}")));
    }
    let bf = |qq: Real| base_function_real(id, qq);
    let residual = match id {
        ModularParamId::Sig3Deg2 => {
            let a = bf(q)?;
            let b = bf(q * q)?;
            (27.0 * a * b * (1.0 - a) * (1.0 - b) - (a + b - 2.0 * a * b).powi(3)).abs()
        }
        ModularParamId::Sig3Deg3 => {
            let a = bf(q)?;
            let b = bf(q.powi(3))?;
            let c = b.powf(1.0 / 3.0);
            (a - (1.0 - ((1.0 - c) / (1.0 + 2.0 * c)).powi(3))).abs()
        }
        ModularParamId::CubicCf => {
            let a = bf(q)?;
            let b = bf(q.powi(3))?;
            (a.powi(3) - b * (1.0 - b + b * b) / (1.0 + 2.0 * b + 4.0 * b * b)).abs()
        }
        ModularParamId::QuinticRr => {
            let a = bf(q)?;
            let b = bf(q.powi(5))?;
            (a.powi(5)
                - b * (1.0 - 2.0 * b + 4.0 * b * b - 3.0 * b.powi(3) + b.powi(4))
                    / (1.0 + 3.0 * b + 4.0 * b * b + 2.0 * b.powi(3) + b.powi(4)))
            .abs()
        }
        ModularParamId::ClassicalDeg2 => {
            let a = bf(q)?;
            let b = bf(q * q)?;
            (4.0 * b / (1.0 + b).powi(2) - (a / (a - 2.0)).powi(2)).abs()
        }
    };
    Ok(VerificationReport::from_samples(
        id.name().into(),
        vec![SampleResidual { params: vec![q], lhs: residual, rhs: 0.0, residual }],
        1e-10,
        false,
    ))
}

fn base_function_real(id: ModularParamId, q: Real) -> Result<Real> {
    let f = match id {
        ModularParamId::Sig3Deg2 | ModularParamId::Sig3Deg3 => FamilyId::N,
        ModularParamId::CubicCf => FamilyId::G,
        ModularParamId::QuinticRr => FamilyId::R,
        ModularParamId::ClassicalDeg2 => FamilyId::Mu,
    };
    Ok(base_function(f, QPoint::real(q)?)?.re)
}

/// Tolerance profile for a full run: scales every default tolerance.
#[derive(Debug, Clone, Copy)]
pub struct TolProfile {
    pub scale: Real,
    pub seed: u64,
}

impl Default for TolProfile {
    fn default() -> Self {
        TolProfile { scale: 1.0, seed: 0 }
    }
}

/// Run every identity and every modular certificate with default samplers
/// and tolerances. Failures are reported, never thrown; conjectural entries
/// can only inform.
pub fn verify_all(profile: TolProfile) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for id in IdentityId::all() {
        let info = id.info();
        out.push(verify(id, info.default_samples, info.tol * profile.scale, profile.seed));
    }
    for id in ModularParamId::ALL {
        for &q in &[0.03, 0.06] {
            match verify_modular_param(id, q) {
                Ok(mut r) => {
                    r.tol *= profile.scale;
                    r.passed = r.max_residual < r.tol;
                    out.push(r);
                }
                Err(e) => {
                    out.push(VerificationReport::failed(id.name().into(), 1e-10, false, &e))
                }
            }
        }
    }
    out
}

/// Whether a full run passes: every non-conjectural report green.
pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.conjectural || r.passed)
}

/// Human-readable CSV summary (header + one row per report).
pub fn reports_to_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from("id,passed,conjectural,max_residual,tol,samples,error\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{:.6e},{:.1e},{},{}\n",
            r.id,
            r.passed,
            r.conjectural,
            r.max_residual,
            r.tol,
            r.samples.len(),
            r.error.as_deref().unwrap_or("")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_names_round_trip() {
        for id in IdentityId::all() {
            assert_eq!(IdentityId::parse(&id.name()), Some(id), "{}", id.name());
        }
        assert_eq!(IdentityId::parse("nonsense"), None);
    }

    #[test]
    fn hecke_restrictions_enforced() {
        assert!(hecke_chi(FamilyId::G, 2).is_err());
        assert!(hecke_chi(FamilyId::R, 7).is_err());
        assert_eq!(hecke_chi(FamilyId::R, 11).unwrap(), 1.0);
        assert_eq!(hecke_chi(FamilyId::Mu, 3).unwrap(), -1.0);
    }

    #[test]
    fn qseries_identities_verify() {
        for id in [
            IdentityId::MuP2,
            IdentityId::NP2,
            IdentityId::NP3,
            IdentityId::GP3,
            IdentityId::RP5,
            IdentityId::MixedGn,
            IdentityId::GFromN,
            IdentityId::NFromG,
        ] {
            let r = verify(id, 3, 1e-9, 1);
            assert!(r.passed, "{}: {:?} {:?}", r.id, r.max_residual, r.error);
        }
    }

    #[test]
    fn hecke_identities_verify() {
        for id in [
            IdentityId::Hecke(FamilyId::Mu, 3),
            IdentityId::Hecke(FamilyId::N, 2),
            IdentityId::Hecke(FamilyId::G, 3),
            IdentityId::Hecke(FamilyId::R, 5),
        ] {
            let r = verify(id, 2, 1e-9, 1);
            assert!(r.passed, "{}: {:?} {:?}", r.id, r.max_residual, r.error);
        }
    }

    #[test]
    fn hyp_and_nome_identities_verify() {
        for id in [
            IdentityId::OmegaFe,
            IdentityId::PhiFe,
            IdentityId::Pf2F1,
            IdentityId::HypZ,
            IdentityId::Nome4Q,
        ] {
            let info = id.info();
            let r = verify(id, 3, info.tol, 1);
            assert!(r.passed, "{}: {:?} {:?}", r.id, r.max_residual, r.error);
        }
    }

    #[test]
    fn modular_certificates_verify() {
        for id in ModularParamId::ALL {
            for &q in &[0.03, 0.06] {
                let r = verify_modular_param(id, q).unwrap();
                assert!(r.passed, "{} at q={q}: {}", r.id, r.max_residual);
            }
        }
        assert!(verify_modular_param(ModularParamId::Sig3Deg2, 0.2).is_err());
    }

    #[test]
    fn first_and_mu_p2_are_the_same_identity() {
        // Relabeling t = 16/k^2 maps the FIRST arguments onto the MuP2 ones:
        // mu(4k^2/(1+k^2)^2) = m(2(k+1/k)), mu(-4k^2/(1-k^2)^2) = m(2i(k-1/k)),
        // mu(k^4) = m(4/k^2). Computing both residuals through the q-series
        // route must agree to rounding.
        let k: Real = 0.3;
        let a1 = 4.0 * k * k / (1.0 + k * k).powi(2);
        let q = invert_base(FamilyId::Mu, cx(a1)).unwrap();
        let r_mu = qf(FamilyId::Mu, q).unwrap() + qf(FamilyId::Mu, -q).unwrap()
            - qf(FamilyId::Mu, q * q).unwrap();
        // FIRST via the same mu-values addressed through 4/sqrt(t):
        let m_of = |t: Real| -> Real {
            let kk = 4.0 / t.sqrt();
            // guard: this is exactly mu(t) by definition
            assert!(kk.is_finite());
            qf(FamilyId::Mu, invert_base(FamilyId::Mu, cx(t)).unwrap()).unwrap()
        };
        let lhs = m_of(a1);
        let rhs = qf(FamilyId::Mu, q * q).unwrap() - qf(FamilyId::Mu, -q).unwrap();
        let r_first = lhs - rhs;
        assert!((r_mu - r_first).abs() < 1e-12, "{r_mu} vs {r_first}");
    }

    #[test]
    fn registry_is_complete() {
        assert_eq!(IdentityId::all().len(), 28);
        assert_eq!(KNOWN_UNIMPLEMENTED.len(), 1);
        // Conjectural entries are flagged and never counted as failures.
        let boyd5 = IdentityId::Boyd5.info();
        assert!(boyd5.conjectural);
        let reports = vec![VerificationReport {
            id: "boyd5".into(),
            samples: vec![],
            max_residual: 1.0,
            tol: 1e-5,
            passed: false,
            conjectural: true,
            error: None,
        }];
        assert!(all_passed(&reports));
    }

    #[test]
    fn reports_are_deterministic_for_a_seed() {
        let a = verify(IdentityId::MixedGn, 5, 1e-9, 99);
        let b = verify(IdentityId::MixedGn, 5, 1e-9, 99);
        assert_eq!(a, b);
        let c = verify(IdentityId::MixedGn, 5, 1e-9, 100);
        assert_ne!(a.samples[4].params, c.samples[4].params);
    }

    #[test]
    fn report_json_round_trip() {
        let r = verify(IdentityId::OmegaFe, 2, 1e-11, 3);
        let text = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(r, back);
        let csv = reports_to_csv(&[r]);
        assert!(csv.starts_with("id,passed"));
        assert!(csv.lines().count() == 2);
    }
}
