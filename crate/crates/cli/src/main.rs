//! `pcf`: command-line front end to pcf-core.
//!
//! Every run prints one JSON manifest on stdout. Exit code 0 means the
//! result was produced and certified, 2 a verified negative answer, 1 an
//! error.

mod parse;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pcf_core::algsets::{belyi_with, BelyiOptions};
use pcf_core::construct::{construct_postcritical_with, postcritical_orbit, ConstructOptions, OrbitSet, Tier};
use pcf_core::exact::{format_poly, parse_poly};
use pcf_core::numeric::DEFAULT_PRECISION;
use pcf_core::passports::{
    build_dessin, dessin_invariants, extend_to_polynomial_passport, extend_to_rational_passport, mate,
    realize_polynomial_constellation, Passport, RationalRealization,
};
use pcf_core::thurston::{
    h_poly_for_set, multiplicity_plan, solve_thurston, verify_table_case, Configuration, HPolyPoint,
    MarkedSelfMap, RealizedMap, TableCase, ThurstonOptions,
};
use pcf_core::Error;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use render::{sci, sphere};

const SCHEMA: &str = "pcf-run/1";

#[derive(Parser, Debug)]
#[command(name = "pcf", version, about = "Postcritically finite maps: construction and certification")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Output::Json, global = true)]
    output: Output,
    /// Working precision for numeric stages.
    #[arg(long, default_value_t = DEFAULT_PRECISION, global = true)]
    precision_bits: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Belyi polynomial sending a set into {0, 1}.
    Belyi {
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 1024)]
        budget: usize,
    },
    /// Polynomial whose finite postcritical set is the given set.
    Construct {
        #[arg(long)]
        set: String,
        #[arg(long, value_enum, default_value_t = TierArg::Auto)]
        tier: TierArg,
        #[arg(long, default_value_t = 1024)]
        budget: usize,
    },
    /// Forward orbit of the critical values of a rational polynomial.
    Orbit {
        /// Coefficients, lowest degree first.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 512)]
        budget: usize,
    },
    /// Passport extension and realization.
    #[command(subcommand)]
    Passport(PassportCmd),
    /// Thurston pullback for a marked self-map of a point configuration.
    Thurston(ThurstonArgs),
    /// Verify one of the seven three-point table maps.
    Table {
        #[arg(long)]
        case: TableCase,
    },
    /// Polynomial with two postcritical points absorbing a set.
    Hpoly {
        #[arg(long)]
        set: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TierArg {
    Exact,
    Auto,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Polynomial,
    Rational,
}

#[derive(Subcommand, Debug)]
enum PassportCmd {
    /// Extend partitions to a passport and realize it.
    Extend {
        /// JSON array of partitions, e.g. `[[2,1],[3]]`.
        #[arg(long)]
        parts: String,
        #[arg(long, value_enum, default_value_t = Target::Polynomial)]
        target: Target,
    },
    /// Realize a polynomial passport by a constellation.
    Realize {
        #[arg(long)]
        parts: String,
    },
    /// Mate two polynomial passports.
    Mate {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Dessin for three partitions over 0, 1 and ∞.
    Dessin {
        #[arg(long)]
        parts: String,
    },
}

#[derive(Args, Debug)]
struct ThurstonArgs {
    /// JSON array of points; the labels 0, 1, ∞ must be present.
    #[arg(long)]
    points: String,
    /// `x:F(x)` pairs, e.g. `0:1,1:2,2:0`.
    #[arg(long)]
    map: String,
    /// `x:M(x)` pairs; unlisted labels have multiplicity 1.
    #[arg(long)]
    mults: Option<String>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    seed_n: Option<u32>,
    #[arg(long, default_value_t = 0.05)]
    delta0: f64,
}

/// What a command reports: its result and whether it is a negative verdict.
struct Outcome {
    result: Value,
    accepted: bool,
}

fn ok(result: Value) -> pcf_core::Result<Outcome> {
    Ok(Outcome { result, accepted: true })
}

fn verdict(result: Value, accepted: bool) -> pcf_core::Result<Outcome> {
    Ok(Outcome { result, accepted })
}

fn cmd_belyi(set: &str, budget: usize) -> pcf_core::Result<Outcome> {
    let s = parse::set(set)?;
    let opts = BelyiOptions {
        degree_budget: budget,
        ..Default::default()
    };
    let b = belyi_with(&s, &opts)?;
    let accepted = b.verdict();
    verdict(json!({"set": render::set(&s), "belyi": render::belyi(&b)}), accepted)
}

fn cmd_construct(set: &str, tier: TierArg, budget: usize, prec: u32) -> pcf_core::Result<Outcome> {
    let s = parse::set(set)?;
    let opts = ConstructOptions {
        tier: match tier {
            TierArg::Exact => Tier::Exact,
            TierArg::Auto => Tier::Auto,
        },
        prec,
        belyi: BelyiOptions {
            degree_budget: budget,
            ..Default::default()
        },
    };
    let c = construct_postcritical_with(&s, &opts)?;
    verdict(
        json!({
            "set": render::set(&s),
            "exact": c.is_exact(),
            "degree": c.degree(),
            "belyi_degree": c.belyi_degree(),
            "g_degree": c.g_degree(),
            "path": c.path.to_string(),
            "beta": format_poly(&c.beta),
            "g": render::coeffs(&c.g),
            "f": render::coeffs(&c.f),
            "certificate": render::certificate(&c.report),
        }),
        c.verdict(),
    )
}

fn cmd_orbit(poly: &str, budget: usize) -> pcf_core::Result<Outcome> {
    let f = parse_poly(poly)?;
    if f.deg() < 2 {
        return Err(Error::InvalidInput("orbit needs a polynomial of degree at least 2".into()));
    }
    let r = postcritical_orbit(&f, budget)?;
    let set = match &r.set {
        OrbitSet::Exact(s) => render::set(s),
        OrbitSet::Numeric(pts) => json!({"numeric": pts.iter().map(render::complex).collect::<Vec<_>>()}),
    };
    verdict(
        json!({
            "poly": format_poly(&f),
            "finite": r.finite,
            "steps": r.steps,
            "budget": r.budget,
            "postcritical": set,
        }),
        r.finite,
    )
}

fn parts_arg(text: &str) -> pcf_core::Result<Passport> {
    Passport::new(parse::partitions(text)?)
}

fn cmd_passport(cmd: &PassportCmd) -> pcf_core::Result<Outcome> {
    match cmd {
        PassportCmd::Extend { parts, target } => {
            let p = parse::partitions(parts)?;
            match target {
                Target::Polynomial => {
                    let q = extend_to_polynomial_passport(&p)?;
                    let c = realize_polynomial_constellation(&q)?;
                    ok(json!({
                        "target": "polynomial",
                        "extends": q.extends(&p),
                        "passport": render::passport(&q),
                        "constellation": render::constellation(&c),
                    }))
                }
                Target::Rational => {
                    let r = extend_to_rational_passport(&p)?;
                    let q = r.passport();
                    let c = r.constellation();
                    let mut v = json!({
                        "target": "rational",
                        "extends": q.extends(&p),
                        "passport": render::passport(&q),
                        "constellation": render::constellation(&c),
                    });
                    match &r {
                        RationalRealization::Mated { left, right, .. } => {
                            v["method"] = json!("mating");
                            v["left"] = render::passport(left);
                            v["right"] = render::passport(right);
                        }
                        RationalRealization::Dessin(_) => v["method"] = json!("dessin"),
                    }
                    let accepted = c.is_rational() && q.extends(&p);
                    verdict(v, accepted)
                }
            }
        }
        PassportCmd::Realize { parts } => {
            let q = parts_arg(parts)?;
            let c = realize_polynomial_constellation(&q)?;
            let accepted = c.is_polynomial() && c.passport().extends(q.partitions());
            verdict(
                json!({"passport": render::passport(&q), "constellation": render::constellation(&c)}),
                accepted,
            )
        }
        PassportCmd::Mate { left, right } => {
            let (a, b) = (parts_arg(left)?, parts_arg(right)?);
            let (a2, b2) = pcf_core::passports::match_degrees(&a, &b)?;
            let ca = realize_polynomial_constellation(&a2)?;
            let cb = realize_polynomial_constellation(&b2)?;
            let m = mate(&ca, &cb)?;
            verdict(
                json!({
                    "left": render::passport(&a2),
                    "right": render::passport(&b2),
                    "mated": render::constellation(&m),
                }),
                m.is_rational(),
            )
        }
        PassportCmd::Dessin { parts } => {
            let p = parse::partitions(parts)?;
            if p.len() != 3 {
                return Err(Error::InvalidInput(format!("dessin needs three partitions, got {}", p.len())));
            }
            let d = build_dessin(&p[0], &p[1], &p[2]);
            let inv = dessin_invariants(&d);
            let extends = pcf_core::passports::collection_extends(&inv.passport, &p);
            verdict(
                json!({
                    "degree": d.degree(),
                    "sigma0": render::perm(&d.sigma0),
                    "sigma1": render::perm(&d.sigma1),
                    "faces": render::perm(&d.faces()),
                    "genus": inv.genus,
                    "connected": inv.connected,
                    "passport": inv.passport.iter().map(render::partition).collect::<Vec<_>>(),
                    "extends": extends,
                    "centers_intact": d.centers_intact(),
                }),
                inv.genus == 0 && inv.connected && extends && d.centers_intact(),
            )
        }
    }
}

fn cmd_thurston(a: &ThurstonArgs, prec: u32) -> pcf_core::Result<Outcome> {
    let pts = parse::points(&a.points, prec)?;
    let n = pts.len();
    let map = parse::label_map(&a.map, n, None)?;
    let mults: Vec<u32> = match &a.mults {
        Some(m) => parse::label_map(m, n, Some(1))?.into_iter().map(|k| k as u32).collect(),
        None => vec![1; n],
    };
    let f = MarkedSelfMap::with_mults(map, mults)?;
    let plan = multiplicity_plan(&f);
    let plan_json = json!({
        "partitions": plan.partitions.iter().map(render::partition).collect::<Vec<_>>(),
        "padded": plan.padded.iter().map(render::partition).collect::<Vec<_>>(),
        "padded_count": plan.padded_count,
        "count_check": plan.count_check,
        "passport": plan.passport.as_ref().map(render::passport),
        "requirements": plan.requirements,
        "verdict": format!("{:?}", plan.verdict),
    });
    if !plan.is_realizable() {
        return Err(Error::InvalidInput(format!(
            "multiplicities need a template for passport {}; only the plan is available",
            plan.passport.map(|p| p.to_string()).unwrap_or_else(|| "(none)".into())
        )));
    }
    let x0 = Configuration::new(pts, a.tol)?;
    let opts = ThurstonOptions {
        prec,
        tol: a.tol,
        seed_n: a.seed_n,
        delta0: a.delta0,
        ..Default::default()
    };
    let r = solve_thurston(&x0, &f, &opts)?;
    let realized = match &r.realized {
        RealizedMap::Iterated { g, n, .. } => json!({
            "kind": "iterated",
            "n": n,
            "g_degree": g.template.degree,
            "g_coeffs": g.poly.coeffs.iter().map(render::complex).collect::<Vec<_>>(),
            "g_residual": sci(g.residual),
        }),
        RealizedMap::Fixture { case, perm, .. } => json!({
            "kind": "fixture",
            "case": case.to_string(),
            "formula": case.formula(),
            "perm": perm,
        }),
    };
    verdict(
        json!({
            "map": f.map,
            "mults": f.mults,
            "plan": plan_json,
            "accepted": r.accepted,
            "degree": r.degree,
            "n": r.n,
            "prec": r.prec,
            "points": r.configuration.points.iter().map(sphere).collect::<Vec<_>>(),
            "distinguished": r.configuration.distinguished,
            "realized": realized,
            "r_dyn": sci(r.r_dyn),
            "r_crit": sci(r.r_crit),
            "trace": r.trace.iter().map(|x| sci(*x)).collect::<Vec<_>>(),
            "lambda_hat": r.lambda_hat.map(sci),
            "lambda_max": r.lambda_max.map(sci),
            "epsilon0": sci(r.epsilon0),
            "distance_to_initial": sci(r.distance_to_initial),
            "bound_holds": r.bound_holds,
            "monotone_tail": r.monotone_tail,
            "lattes_guard": r.lattes_guard,
            "attempts": r.attempts,
        }),
        r.accepted,
    )
}

fn cmd_table(case: TableCase) -> pcf_core::Result<Outcome> {
    let t = verify_table_case(case);
    verdict(
        json!({
            "case": t.case.to_string(),
            "formula": t.formula,
            "field": t.field,
            "degree": t.report.degree,
            "critical_point_poly": t.report.critical_point_poly,
            "infinity_critical": t.report.infinity_critical,
            "critical_values": t.report.critical_values,
            "postcritical": t.report.postcritical,
            "graph": t.report.graph,
            "expected_graph": t.expected_graph,
            "edges": t.edges(),
            "certificate": render::certificate(&t.report.certificate),
        }),
        t.verdict(),
    )
}

fn hpoint(p: &HPolyPoint) -> Value {
    match p {
        HPolyPoint::Rational(q) => json!(q.to_string()),
        HPolyPoint::Numeric(z) => render::complex(z),
    }
}

fn cmd_hpoly(set: &str) -> pcf_core::Result<Outcome> {
    let s = parse::set(set)?;
    let h = h_poly_for_set(&s)?;
    verdict(
        json!({
            "set": render::set(&h.set),
            "enlarged": render::set(&h.enlarged),
            "exact": h.is_exact(),
            "a": hpoint(&h.a),
            "b": hpoint(&h.b),
            "fixed_pointwise": h.fixed_pointwise,
            "belyi_degree": h.belyi.degree,
            "h": render::coeffs(&h.h),
            "certificate": render::certificate(&h.certificate),
        }),
        h.certificate.verdict(),
    )
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Belyi { .. } => "belyi",
        Command::Construct { .. } => "construct",
        Command::Orbit { .. } => "orbit",
        Command::Passport(PassportCmd::Extend { .. }) => "passport extend",
        Command::Passport(PassportCmd::Realize { .. }) => "passport realize",
        Command::Passport(PassportCmd::Mate { .. }) => "passport mate",
        Command::Passport(PassportCmd::Dessin { .. }) => "passport dessin",
        Command::Thurston(_) => "thurston",
        Command::Table { .. } => "table",
        Command::Hpoly { .. } => "hpoly",
    }
}

fn run(cli: &Cli) -> pcf_core::Result<Outcome> {
    let prec = cli.precision_bits;
    if !(32..=1 << 16).contains(&prec) {
        return Err(Error::InvalidInput(format!("precision {prec} outside 32..=65536 bits")));
    }
    match &cli.command {
        Command::Belyi { set, budget } => cmd_belyi(set, *budget),
        Command::Construct { set, tier, budget } => cmd_construct(set, *tier, *budget, prec),
        Command::Orbit { poly, budget } => cmd_orbit(poly, *budget),
        Command::Passport(p) => cmd_passport(p),
        Command::Thurston(a) => cmd_thurston(a, prec),
        Command::Table { case } => cmd_table(*case),
        Command::Hpoly { set } => cmd_hpoly(set),
    }
}

fn digest(args: &[String]) -> String {
    let mut h = Sha256::new();
    for a in args {
        h.update(a.as_bytes());
        h.update([0u8]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({"kind": format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or(""), "message": e.to_string()});
    if let Error::Parse { token, position, .. } = e {
        v["token"] = json!(token);
        v["position"] = json!(position);
    }
    v
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            // Usage errors exit 1; 2 is reserved for negative verdicts.
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = run(&cli);
    let (status, code, body) = match &outcome {
        Ok(o) if o.accepted => ("accepted", 0u8, json!({"result": o.result})),
        Ok(o) => ("negative", 2, json!({"result": o.result})),
        Err(e) => ("error", 1, json!({"error": error_json(e)})),
    };
    let mut manifest = json!({
        "schema": SCHEMA,
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": subcommand_name(&cli.command),
        "input_digest": digest(&args[1..]),
        "options": {
            "output": format!("{:?}", cli.output).to_lowercase(),
            "precision_bits": cli.precision_bits,
        },
        "outcome": {"status": status, "exit_code": code},
    });
    manifest.as_object_mut().unwrap().extend(body.as_object().unwrap().clone());
    let text = match cli.output {
        Output::Json => serde_json::to_string_pretty(&manifest).expect("serializable") + "\n",
        Output::Text => {
            let mut s = String::new();
            render::text(&manifest, "", &mut s);
            s
        }
    };
    // A closed pipe is not an error of the computation.
    let _ = std::io::stdout().write_all(text.as_bytes());
    if let Err(e) = &outcome {
        eprintln!("pcf: {e}");
    }
    ExitCode::from(code)
}
