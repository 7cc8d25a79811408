//! mahlerlab: evaluate the four genus-one Mahler measure families by any of
//! four methods, verify the identity catalogue, and compute L'(E, 0).
//!
//! Exit codes are a stable contract: 0 success, 1 verification failure,
//! 2 domain error, 3 convergence failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use mahler_core::harness::{
    reports_to_csv, verify, verify_all, verify_modular_param, IdentityId, ModularParamId,
    TolProfile, VerificationReport, KNOWN_UNIMPLEMENTED,
};
use mahler_core::hypergeom::{g_hyp, mu_hyp, n_hyp, r_via_phi};
use mahler_core::lfun::{
    curve_from_k2, format_ap_cache, lprime_at_0_cached, parse_ap_cache, validated_l_object,
};
use mahler_core::nome::invert_base;
use mahler_core::qseries::{mahler_qseries, measure_argument, FamilyId, QPoint};
use mahler_core::regulator::{family_lattice, HalfPeriod};
use mahler_core::torus::{
    family_polynomial, jensen_integrand_grid, mahler_jensen_tol, mu_family_polynomial,
};
use mahler_core::{Cx, Error};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mahlerlab", version, about = "Mahler measure laboratory for genus-one families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a family measure at a parameter by one or all methods.
    Eval(EvalArgs),
    /// Verify identities and modular-equation certificates.
    Verify(VerifyArgs),
    /// Elliptic-curve L-function values from the validated curve table.
    Lfun(LfunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Mu,
    N,
    G,
    R,
}

impl From<FamilyArg> for FamilyId {
    fn from(f: FamilyArg) -> FamilyId {
        match f {
            FamilyArg::Mu => FamilyId::Mu,
            FamilyArg::N => FamilyId::N,
            FamilyArg::G => FamilyId::G,
            FamilyArg::R => FamilyId::R,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Method {
    Auto,
    Qseries,
    Hyp,
    Integral,
    Lattice,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Args)]
struct EvalArgs {
    /// Which measure family to evaluate.
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Family parameter t (mutually exclusive with --k, --q).
    #[arg(long)]
    t: Option<f64>,
    /// k with t = 16/k^2 (mu family only).
    #[arg(long, conflicts_with = "t")]
    k: Option<f64>,
    /// Nome q in (0, 1) (evaluates the family at its q-parameterization).
    #[arg(long, conflicts_with_all = ["t", "k"])]
    q: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    /// Precision class; only "double" is built.
    #[arg(long, default_value = "double")]
    prec: String,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    /// Write the Jensen integrand samples (theta, value) as CSV.
    #[arg(long)]
    dump_grid: Option<PathBuf>,
    /// Node count for the grid dump.
    #[arg(long, default_value = "1024")]
    grid_nodes: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity or certificate id (e.g. ko, hecke-mu-3, sig3-deg2).
    #[arg(long, conflicts_with = "all")]
    id: Option<String>,
    /// Run the whole catalogue.
    #[arg(long)]
    all: bool,
    #[arg(long, default_value = "5")]
    samples: usize,
    /// Override the default tolerance (single-id mode only).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value = "0")]
    seed: u64,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
}

#[derive(Args)]
struct LfunArgs {
    /// k^2 selecting the curve v^2 = u^3 + (k^2-8)u^2 + 16u.
    #[arg(long)]
    k2: i64,
    /// Compute L'(E, 0) (the only evaluation offered).
    #[arg(long)]
    deriv0: bool,
    /// Number of Dirichlet coefficients.
    #[arg(long, default_value = "100000")]
    terms: usize,
    /// Directory for a_p cache files (overrides MAHLERLAB_CACHE_DIR).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(prec) = std::env::var("MAHLERLAB_PREC") {
        if prec != "double" {
            eprintln!("error: MAHLERLAB_PREC={prec} is not available; only \"double\" is built");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Lfun(args) => cmd_lfun(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_domain() { 2 } else { 3 })
        }
    }
}

#[derive(Serialize)]
struct RouteValue {
    method: String,
    value: f64,
    /// Method-level estimate of the absolute error.
    est_tolerance: f64,
}

#[derive(Serialize)]
struct EvalPayload {
    family: String,
    argument_kind: String,
    argument: f64,
    method: String,
    value: f64,
    routes: Vec<RouteValue>,
    max_route_diff: f64,
}

fn cmd_eval(args: EvalArgs) -> Result<u8, Error> {
    if args.prec != "double" {
        return Err(Error::Domain(format!(
            "precision class {:?} is not available; only \"double\" is built",
            args.prec
        )));
    }
    let family: FamilyId = args.family.into();
    let (kind, raw) = match (args.t, args.k, args.q) {
        (Some(t), None, None) => ("t", t),
        (None, Some(k), None) => ("k", k),
        (None, None, Some(q)) => ("q", q),
        _ => {
            return Err(Error::Domain(
                "exactly one of --t, --k, --q must be given".into(),
            ))
        }
    };
    if kind == "k" && !matches!(family, FamilyId::Mu) {
        return Err(Error::Domain("--k applies to the mu family only".into()));
    }

    // Resolve t and q views of the argument where each exists.
    let t_val: Option<Cx> = match kind {
        "t" => Some(Cx::new(raw, 0.0)),
        "k" => {
            if raw == 0.0 {
                None // t would be infinite; only the integral route applies
            } else {
                Some(Cx::new(16.0 / (raw * raw), 0.0))
            }
        }
        _ => Some(measure_argument(family, QPoint::real(raw)?)?),
    };
    let q_val: Option<Cx> = match kind {
        "q" => Some(Cx::new(raw, 0.0)),
        _ => t_val.and_then(|t| nome_for(family, t).ok()),
    };

    let mut routes: Vec<RouteValue> = Vec::new();
    let want = |m: Method| args.method == Method::Auto || args.method == m;

    if want(Method::Qseries) {
        if let Some(q) = q_val {
            let v = mahler_qseries(family, QPoint::auto(q)?)?;
            routes.push(RouteValue { method: "qseries".into(), value: v, est_tolerance: 1e-13 });
        } else if args.method == Method::Qseries {
            return Err(Error::Domain("no q-series route for this argument".into()));
        }
    }
    if want(Method::Hyp) {
        match t_val {
            Some(t) => match hyp_route(family, t) {
                Ok(v) => {
                    routes.push(RouteValue { method: "hyp".into(), value: v, est_tolerance: 1e-13 })
                }
                Err(e) => {
                    if args.method == Method::Hyp {
                        return Err(e);
                    }
                }
            },
            None if args.method == Method::Hyp => {
                return Err(Error::Domain("no hypergeometric route for this argument".into()))
            }
            None => {}
        }
    }
    if want(Method::Integral) {
        let poly = if kind == "k" {
            mu_family_polynomial(Cx::new(raw, 0.0))?
        } else {
            family_polynomial(family, t_val.expect("t exists for non-k arguments"))?
        };
        let v = mahler_jensen_tol(&poly, 4096, 1e-8)?;
        routes.push(RouteValue { method: "integral".into(), value: v, est_tolerance: 1e-8 });
        if let Some(path) = &args.dump_grid {
            let grid = jensen_integrand_grid(&poly, args.grid_nodes)?;
            let mut text = String::from("theta,integrand\n");
            for (th, v) in grid {
                text.push_str(&format!("{th},{v}\n"));
            }
            std::fs::write(path, text)
                .map_err(|e| Error::Domain(format!("cannot write grid: {e}")))?;
        }
    }
    if want(Method::Lattice) {
        if let Some(q) = q_val {
            let mu = HalfPeriod::from_nome(q)?;
            let v = family_lattice(family, mu)?;
            routes.push(RouteValue { method: "lattice".into(), value: v, est_tolerance: 1e-6 });
        } else if args.method == Method::Lattice {
            return Err(Error::Domain("no lattice route for this argument".into()));
        }
    }

    if routes.is_empty() {
        return Err(Error::Domain("no applicable evaluation route".into()));
    }
    let mut max_diff = 0.0f64;
    for i in 0..routes.len() {
        for j in (i + 1)..routes.len() {
            max_diff = max_diff.max((routes[i].value - routes[j].value).abs());
        }
    }
    let payload = EvalPayload {
        family: family.name().into(),
        argument_kind: kind.into(),
        argument: raw,
        method: match args.method {
            Method::Auto => "auto".into(),
            _ => routes[0].method.clone(),
        },
        value: routes[0].value,
        max_route_diff: max_diff,
        routes,
    };
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&payload).unwrap()),
        Format::Csv => {
            println!("family,argument_kind,argument,method,value,max_route_diff");
            println!(
                "{},{},{},{},{:.15e},{:.3e}",
                payload.family,
                payload.argument_kind,
                payload.argument,
                payload.method,
                payload.value,
                payload.max_route_diff
            );
        }
        Format::Plain => {
            for r in &payload.routes {
                println!(
                    "{}({} = {}) = {:.12}   [{}, est tol {:.0e}]",
                    payload.family, kind, raw, r.value, r.method, r.est_tolerance
                );
            }
            if payload.routes.len() > 1 {
                println!("max route difference: {:.3e}", payload.max_route_diff);
            }
        }
    }
    Ok(0)
}

fn nome_for(family: FamilyId, t: Cx) -> Result<Cx, Error> {
    match family {
        FamilyId::Mu | FamilyId::N => invert_base(family, t),
        FamilyId::G => invert_base(family, t.powf(1.0 / 3.0)),
        FamilyId::R => invert_base(family, t.powf(1.0 / 5.0)),
    }
}

fn hyp_route(family: FamilyId, t: Cx) -> Result<f64, Error> {
    match family {
        FamilyId::Mu => mu_hyp(t),
        FamilyId::N => n_hyp(t),
        FamilyId::G => g_hyp(t),
        FamilyId::R => {
            if t.im != 0.0 {
                return Err(Error::Domain("r(t) route needs real t".into()));
            }
            r_via_phi(t.re)
        }
    }
}

fn print_reports(reports: &[VerificationReport], format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(reports).unwrap()),
        Format::Csv => print!("{}", reports_to_csv(reports)),
        Format::Plain => {
            for r in reports {
                let status = if r.passed {
                    "pass"
                } else if r.conjectural {
                    "conjectural"
                } else {
                    "FAIL"
                };
                match &r.error {
                    Some(e) => println!("{:<16} {:<12} error: {e}", r.id, status),
                    None => println!(
                        "{:<16} {:<12} max residual {:.3e} (tol {: <8.1e} samples {})",
                        r.id,
                        status,
                        r.max_residual,
                        r.tol,
                        r.samples.len()
                    ),
                }
            }
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Error> {
    if args.all {
        let reports = verify_all(TolProfile { scale: 1.0, seed: args.seed });
        print_reports(&reports, args.format);
        for (name, doc) in KNOWN_UNIMPLEMENTED {
            eprintln!("note: {name} registered unimplemented: {doc}");
        }
        let ok = mahler_core::harness::all_passed(&reports);
        return Ok(if ok { 0 } else { 1 });
    }
    let id_str = args
        .id
        .ok_or_else(|| Error::Domain("give --id <identity> or --all".into()))?;
    if let Some(id) = IdentityId::parse(&id_str) {
        let info = id.info();
        let tol = args.tol.unwrap_or(info.tol);
        let r = verify(id, args.samples, tol, args.seed);
        print_reports(std::slice::from_ref(&r), args.format);
        if let Some(e) = &r.error {
            return Err(Error::NoConvergence(e.clone()));
        }
        return Ok(if r.passed || r.conjectural { 0 } else { 1 });
    }
    let modular = ModularParamId::ALL.iter().find(|m| m.name() == id_str);
    if let Some(&m) = modular {
        let mut reports = Vec::new();
        for &q in &[0.03, 0.06] {
            reports.push(verify_modular_param(m, q)?);
        }
        let ok = reports.iter().all(|r| r.passed);
        print_reports(&reports, args.format);
        return Ok(if ok { 0 } else { 1 });
    }
    Err(Error::Domain(format!("unknown identity id {id_str:?}")))
}

fn cmd_lfun(args: LfunArgs) -> Result<u8, Error> {
    if !args.deriv0 {
        return Err(Error::Domain(
            "only the derivative value is offered; pass --deriv0".into(),
        ));
    }
    let curve = curve_from_k2(args.k2)?;
    let obj = validated_l_object(args.k2).ok_or_else(|| {
        Error::Domain(format!("no validated conductor for k^2 = {}", args.k2))
    })?;

    let cache_dir = args
        .cache_dir
        .or_else(|| std::env::var("MAHLERLAB_CACHE_DIR").ok().map(PathBuf::from));
    let cache_path = cache_dir.map(|d| d.join(format!("{}.ap", curve.label)));
    let mut cache: BTreeMap<u64, i64> = match &cache_path {
        Some(p) if p.exists() => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Domain(format!("cannot read cache {p:?}: {e}")))?;
            parse_ap_cache(&text)?
        }
        _ => BTreeMap::new(),
    };

    let value = lprime_at_0_cached(&curve, obj.conductor, args.terms, &mut cache)?;

    if let Some(p) = &cache_path {
        if let Some(dir) = p.parent() {
            std::fs::create_dir_all(dir)
                .map_err(|e| Error::Domain(format!("cannot create cache dir: {e}")))?;
        }
        std::fs::write(p, format_ap_cache(&cache))
            .map_err(|e| Error::Domain(format!("cannot write cache {p:?}: {e}")))?;
    }

    #[derive(Serialize)]
    struct LfunPayload {
        k2: i64,
        curve: String,
        conductor: u64,
        terms: usize,
        lprime_at_0: f64,
    }
    let payload = LfunPayload {
        k2: args.k2,
        curve: format!("v^2 = u^3 + {}u^2 + {}u", curve.a, curve.b),
        conductor: obj.conductor,
        terms: args.terms,
        lprime_at_0: value,
    };
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&payload).unwrap()),
        Format::Csv => {
            println!("k2,conductor,terms,lprime_at_0");
            println!("{},{},{},{:.15e}", payload.k2, payload.conductor, payload.terms, value);
        }
        Format::Plain => println!(
            "L'(E, 0) = {value:.12}   (k^2 = {}, conductor {}, {} coefficients)",
            args.k2, obj.conductor, args.terms
        ),
    }
    Ok(0)
}
