//! Command-line front end: diagram ingestion, limit computation, hyperspace
//! enumeration, and certification runs.
//!
//! Exit status: 0 on pass, 1 when a certification fails its thresholds,
//! 2 on usage, parse, or validation errors. Every error path prints one
//! machine-parsable `error: <kind>: <message>` line on stderr. Reruns with
//! the same configuration and seed produce byte-identical outputs.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use omcert_core::category::{compute_limit, LimitCarrier, MapKind};
use omcert_core::certify::{
    certify_composition, certify_open, certify_surjective, render_report, CompositionReport,
    FunctorId, OpennessReport, SurjectivityReport, DEFAULT_ENUM_BOUND,
};
use omcert_core::hyperspace::{exp_space, g_space, lambda_space};
use omcert_core::io::read_diagram;
use omcert_core::rat::{fmt_point, fmt_rat, parse_rat, rint, Rat};
use omcert_core::Error;

#[derive(Parser)]
#[command(name = "omcert", version, about = "Exact limits, hyperspace enumeration, and openness certification for finite diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the limit of a diagram and write its carrier.
    Limit(LimitArgs),
    /// Enumerate a hyperspace functor on a finite space.
    Enumerate(EnumerateArgs),
    /// Certify surjectivity and openness of a characteristic map.
    Certify(CertifyArgs),
}

#[derive(Args)]
struct LimitArgs {
    /// Diagram specification file (JSON).
    #[arg(long)]
    diagram: PathBuf,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Functor to enumerate: exp, G, or lambda.
    #[arg(long)]
    functor: String,
    /// Base space size.
    #[arg(long)]
    points: usize,
    /// Enumeration bound for the family functors.
    #[arg(long, default_value_t = DEFAULT_ENUM_BOUND)]
    bound: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Diagram specification file (JSON).
    #[arg(long)]
    diagram: PathBuf,
    /// Functor id: exp, G, lambda, P, cc, G_cc, lambda_cc, ccP, G_ccP, lambda_ccP.
    #[arg(long)]
    functor: String,
    /// Seed for all sampled phases.
    #[arg(long)]
    seed: u64,
    /// Sample budget per phase.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Radius grid for the openness probe, e.g. "1/10,1/100".
    #[arg(long, default_value = "1/10,1/100")]
    eps: String,
    /// Enumeration bound for family hyperspaces.
    #[arg(long, default_value_t = DEFAULT_ENUM_BOUND)]
    bound: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Limit(args) => cmd_limit(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Certify(args) => cmd_certify(args),
    };
    match outcome {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}: {e}", error_kind(&e));
            ExitCode::from(2)
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::MalformedCategory { .. } => "malformed-category",
        Error::MalformedDiagram(_) => "malformed-diagram",
        Error::DiagramFile(_) => "diagram-file",
        Error::ParseRational(_) => "parse-rational",
        Error::EnumerationTooLarge(_) => "enumeration-too-large",
        Error::InapplicableFunctor { .. } => "inapplicable-functor",
        Error::EmptyLimit => "empty-limit",
        Error::Io(_) => "io",
        _ => "internal",
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_limit(args: LimitArgs) -> Result<bool, Error> {
    let d = read_diagram(&args.diagram)?;
    let lim = compute_limit(&d)?;
    let mut text = String::new();
    text.push_str(&format!(
        "digest: {}\n",
        omcert_core::io::diagram_digest(&d)
    ));
    text.push_str(&format!("objects: {}\n", d.shape().objects().join(" ")));
    text.push_str(&format!("empty: {}\n", lim.is_empty()));
    match &lim.carrier {
        LimitCarrier::Finite { tuples } => {
            text.push_str(&format!("kind: finite\ntuples: {}\n", tuples.len()));
            for t in tuples {
                let shown: Vec<String> = t.iter().map(|p| (p + 1).to_string()).collect();
                text.push_str(&format!("  ({})\n", shown.join(", ")));
            }
        }
        LimitCarrier::Poly {
            polytope, hrep, ..
        } => {
            text.push_str("kind: polytope\n");
            text.push_str(&format!(
                "equalities: {}\ninequalities: {}\n",
                hrep.equalities.len(),
                hrep.inequalities.len()
            ));
            for f in &hrep.equalities {
                text.push_str(&format!(
                    "  = {} : {}\n",
                    fmt_point(&f.coeffs),
                    fmt_rat(&f.rhs)
                ));
            }
            for f in &hrep.inequalities {
                text.push_str(&format!(
                    "  <= {} : {}\n",
                    fmt_point(&f.coeffs),
                    fmt_rat(&f.rhs)
                ));
            }
            match polytope {
                Some(p) => {
                    text.push_str(&format!("vertices: {}\n", p.vertices().len()));
                    for v in p.vertices() {
                        text.push_str(&format!("  {}\n", fmt_point(v)));
                    }
                }
                None => text.push_str("vertices: 0\n"),
            }
        }
    }
    // Projections, one line per object.
    for (o, id) in d.shape().objects().iter().enumerate() {
        match &lim.projections[o] {
            MapKind::Table(t) => {
                let shown: Vec<String> = t.iter().map(|p| (p + 1).to_string()).collect();
                text.push_str(&format!("proj {id}: table [{}]\n", shown.join(",")));
            }
            MapKind::Affine(_) => {
                text.push_str(&format!("proj {id}: block projection\n"));
            }
        }
    }
    emit(&args.out, &text)?;
    Ok(true)
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<bool, Error> {
    let mut text = String::new();
    match args.functor.as_str() {
        "exp" => {
            let subs = exp_space(args.points)?;
            text.push_str(&format!(
                "# functor=exp n={} count={}\n",
                args.points,
                subs.len()
            ));
            for s in &subs {
                text.push_str(&format!("{s}\n"));
            }
        }
        "G" | "lambda" => {
            let fams = if args.functor == "G" {
                g_space(args.points, args.bound)?
            } else {
                lambda_space(args.points, args.bound)?
            };
            text.push_str(&format!(
                "# functor={} n={} count={}\n",
                args.functor,
                args.points,
                fams.len()
            ));
            for f in &fams {
                text.push_str(&format!("{f}\n"));
            }
        }
        other => {
            return Err(Error::InapplicableFunctor {
                functor: other.into(),
                reason: "enumeration covers exp, G, lambda".into(),
            })
        }
    }
    emit(&args.out, &text)?;
    Ok(true)
}

#[derive(Serialize)]
struct CertifyBundle {
    surjectivity: SurjectivityReport,
    openness: OpennessReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    composition: Option<CompositionReport>,
}

fn cmd_certify(args: CertifyArgs) -> Result<bool, Error> {
    let functor = FunctorId::parse(&args.functor).ok_or_else(|| Error::InapplicableFunctor {
        functor: args.functor.clone(),
        reason: "unknown functor id".into(),
    })?;
    let d = read_diagram(&args.diagram)?;
    let eps_grid: Vec<Rat> = args
        .eps
        .split(',')
        .map(parse_rat)
        .collect::<Result<_, _>>()?;
    if eps_grid.iter().any(|e| e <= &rint(0)) {
        return Err(Error::ParseRational(format!(
            "radius grid must be strictly positive: {}",
            args.eps
        )));
    }

    let surjectivity = certify_surjective(functor, &d, args.samples, args.seed, args.bound)?;
    let openness = certify_open(functor, &d, None, &eps_grid, args.samples, args.seed)?;
    let composition = if functor.factors().is_some() {
        Some(certify_composition(functor, &d, args.samples, args.seed)?)
    } else {
        None
    };

    let pass = surjectivity.pass()
        && openness.pass()
        && composition.as_ref().map(|c| c.pass()).unwrap_or(true);
    let bundle = CertifyBundle {
        surjectivity,
        openness,
        composition,
    };
    emit(&args.out, &render_report(&bundle))?;
    println!(
        "certify {} {}: {}",
        functor,
        args.diagram.display(),
        if pass { "pass" } else { "FAIL" }
    );
    Ok(pass)
}
