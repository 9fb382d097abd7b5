use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use superw::rational::Q;
use superw::report::{check_report, darboux_report, factorization_report, walgebra_report, Method, Report};
use superw::supercore::{Monomial, SuperPoly, Universe};
use superw::wslice::{bundled_names, load_algebra, parse_algebra, resolve_text, LieSuperalgebraData, WContext};
use superw::Error;

const DEFAULT_SEED: u64 = 0x5eed;

/// Super Darboux–Weinstein charts and finite W-superalgebras, exactly.
#[derive(Debug, Parser)]
#[command(name = "superw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate an algebra document and the Jacobi identity of its bracket.
    Check(Common),
    /// Classical and quantum Darboux charts at chi.
    Darboux(Common),
    /// The W-algebra through the Whittaker model, the slice, or both.
    Walgebra {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Every property check, with randomized samples drawn from the seed.
    Suite(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Catalog name or path to an algebra document.
    #[arg(long)]
    algebra: Option<String>,
    /// Truncation order N.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    order: u32,
    /// Extra working order on top of N.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(2..))]
    guard: u32,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Whittaker,
    Slice,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Whittaker => Method::Whittaker,
            MethodArg::Slice => Method::Slice,
            MethodArg::Both => Method::Both,
        }
    }
}

/// Failures that end the run before a report exists.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Check(e.to_string())
    }
}

fn source_text(spec: &str) -> Result<String, Failure> {
    resolve_text(spec).map_err(|e| match e {
        Error::Io(_) | Error::Document(_) => Failure::Usage(e.to_string()),
        other => Failure::Check(other.to_string()),
    })
}

fn required(common: &Common) -> Result<&str, Failure> {
    common.algebra.as_deref().ok_or_else(|| Failure::Usage("--algebra is required".into()))
}

fn validated(spec: &str) -> Result<LieSuperalgebraData, Failure> {
    Ok(load_algebra(&source_text(spec)?)?)
}

fn random_element(rng: &mut ChaCha8Rng, u: &Universe, odd: bool) -> SuperPoly {
    let n = u.len();
    let mut p = SuperPoly::zero();
    let terms = rng.gen_range(1..=3);
    while p.len() < terms {
        let mut e = vec![0u16; n];
        for _ in 0..rng.gen_range(0..=2) {
            let v = rng.gen_range(0..n);
            e[v] = if u.is_odd(v) { 1 } else { e[v] + 1 };
        }
        let m = Monomial::from_exponents(&e);
        let num: i64 = rng.gen_range(-4..=4);
        if m.parity(u).is_odd() != odd || num == 0 {
            continue;
        }
        p.add_term(m, Q::new(num.into(), rng.gen_range(1i64..=3).into()));
    }
    p
}

/// Poisson axioms on `count` random homogeneous triples.
fn axiom_samples(g: &LieSuperalgebraData, rng: &mut ChaCha8Rng, count: usize) -> Result<Value, Failure> {
    let p = WContext::new(g, false)?.setup.poisson()?;
    let u = p.universe().clone();
    let has_odd = (0..u.len()).any(|v| u.is_odd(v));
    let mut failures = Vec::new();
    for _ in 0..count {
        let mut pick = || has_odd && rng.gen_bool(0.5);
        let (pf, pg, ph) = (pick(), pick(), pick());
        let f = random_element(rng, &u, pf);
        let g = random_element(rng, &u, pg);
        let h = random_element(rng, &u, ph);
        for axiom in p.axiom_violations(&f, &g, &h)? {
            failures.push(json!({
                "axiom": axiom,
                "triple": [f.render(&u), g.render(&u), h.render(&u)],
            }));
        }
    }
    Ok(json!({ "samples": count, "failures": failures }))
}

fn suite(common: &Common) -> Result<Report, Failure> {
    let names: Vec<String> = match &common.algebra {
        Some(a) => vec![a.clone()],
        None => bundled_names().into_iter().map(String::from).collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let (n, guard) = (common.order, common.guard);
    let mut runs = serde_json::Map::new();
    let mut pass = true;
    for spec in &names {
        let g = parse_algebra(&source_text(spec)?)?;
        let check = check_report(&g, n);
        let mut entry = json!({ "check": check.value });
        pass &= check.pass;
        if check.pass {
            let samples = axiom_samples(&g, &mut rng, 50)?;
            pass &= samples["failures"].as_array().is_some_and(Vec::is_empty);
            let seed = rng.gen::<u64>();
            let reports = [
                ("samples", Report { pass: true, value: samples }),
                ("darboux", darboux_report(&g, n, n, guard)?),
                ("walgebra", walgebra_report(&g, n, n, guard, Method::Both, seed)?),
                ("factorization", factorization_report(&g, n, n, 1, guard)?),
            ];
            for (key, r) in reports {
                pass &= r.pass;
                entry[key] = r.value;
            }
        }
        runs.insert(g.name.clone(), entry);
    }
    let value = json!({ "seed": common.seed, "order": n, "guard": guard, "runs": runs, "pass": pass });
    Ok(Report { value, pass })
}

fn run(cli: &Cli) -> Result<(Report, &Common), Failure> {
    Ok(match &cli.command {
        Command::Check(c) => {
            let g = parse_algebra(&source_text(required(c)?)?)?;
            (check_report(&g, c.order), c)
        }
        Command::Darboux(c) => {
            let g = validated(required(c)?)?;
            (darboux_report(&g, c.order, c.order, c.guard)?, c)
        }
        Command::Walgebra { common: c, method } => {
            let g = validated(required(c)?)?;
            (walgebra_report(&g, c.order, c.order, c.guard, (*method).into(), c.seed)?, c)
        }
        Command::Suite(c) => (suite(c)?, c),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, common)) => {
            let text = report.to_json();
            match &common.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(if report.pass { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
