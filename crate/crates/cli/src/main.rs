//! `holosphere`: verify, construct, check, solve and sample constantly curved two-spheres.
//!
//! Exit codes: 0 success, 1 negative check or solve result, 2 input error.

mod builtin;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use holosphere::curve::AnyCurve;
use holosphere::family::{degenerate_identification, family_curve, FamilyParam};
use holosphere::scalars::{Complex64, RadicalComplex, Rat, Scalar};
use holosphere::solver::{solve_detailed, CMode, Problem, SolveReport};
use holosphere::veronese::{f_closed, f_gram_schmidt, osculating, projector_distance, sequence_constants};
use serde_json::json;

use report::{analyze, Num, Report, Tagged};

#[derive(Parser)]
#[command(name = "holosphere", version, about = "Constantly curved holomorphic two-spheres in G(2, n+2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Builds the family member at rational t in (0, 3] and verifies it exactly.
    VerifyFamily {
        #[arg(long)]
        t: String,
    },
    /// Runs the full check pipeline on a curve file or builtin name.
    Check { source: String },
    /// Harmonic-sequence constants of V_0^(n) or the degree of an osculating wedge.
    Veronese {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "osculating", required_unless_present = "osculating")]
        i: Option<usize>,
        #[arg(long)]
        osculating: Option<usize>,
    },
    /// Searches for coefficient matrices solving UU* = L1, QQ* = L2.
    Solve(SolveArgs),
    /// Samples r^2 and |det A_1|^2 along a ray as tab-separated values.
    PlotData {
        source: String,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long, default_value_t = 2.0)]
        r_max: f64,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with = "free_c", required_unless_present = "free_c", allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long)]
    free_c: bool,
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    /// Solve-report path; defaults to `solve-report.json`.
    #[arg(long, default_value = "solve-report.json")]
    out: std::path::PathBuf,
}

enum Failure {
    Negative,
    Input(String),
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn emit(report: &Report) {
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(report).expect("serializable"));
}

fn verify_family(t: &str) -> Outcome {
    let t: Rat = t.parse().map_err(input)?;
    let p = FamilyParam::new(t.clone()).map_err(input)?;
    let mut report = Report::new("verify-family", &format!("family:{t}"));
    let curve = family_curve(&p);
    analyze(&mut report, &curve);
    let inv = curve.invariant_chain().ok();
    let expect = |got: Option<&RadicalComplex>, want: Rat| got.is_some_and(|g| *g == RadicalComplex::from_rat(want));
    report.check("c_closed_form", expect(inv.as_ref().map(|i| &i.c), p.c()), f64::NAN);
    report.check("s_closed_form", expect(inv.as_ref().map(|i| &i.s), p.s()), f64::NAN);
    let mut details = json!({ "t": t.to_string(), "c": Num::rat(&p.c()), "s": Num::rat(&p.s()) });
    if let Ok(id) = degenerate_identification(&t) {
        let (a, b) = id.summands;
        report.notes.push(format!("V\u{2080}\u{207D}{}\u{207E}\u{2295}V\u{2080}\u{207D}{}\u{207E}", sup(a), sup(b)));
        report.check("degenerate_identification", id.verified, f64::NAN);
        details["identification"] = serde_json::to_value(&id).expect("serializable");
    }
    report.details = details;
    emit(&report);
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn sup(k: usize) -> char {
    ['\u{2070}', '\u{00B9}', '\u{00B2}', '\u{00B3}', '\u{2074}', '\u{2075}', '\u{2076}', '\u{2077}', '\u{2078}', '\u{2079}'][k % 10]
}

fn check(source: &str) -> Outcome {
    let b = builtin::load(source).map_err(Failure::Input)?;
    let mut report = Report::new("check", source);
    match &b.curve {
        AnyCurve::Exact(c) => analyze(&mut report, c),
        AnyCurve::Float(c) => analyze(&mut report, c),
    }
    report.notes.extend(b.notes);
    emit(&report);
    if report.passed("plucker_binomial") {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn veronese(n: usize, i: Option<usize>, k: Option<usize>) -> Outcome {
    if n == 0 {
        return Err(Failure::Input("n must be positive".into()));
    }
    let mut report = Report::new("veronese", &format!("V_0^({n})"));
    report.mode = Some(holosphere::curve::Mode::Exact);
    if let Some(k) = k {
        let o = osculating::<RadicalComplex>(n, k).map_err(input)?;
        report.details = json!({ "n": n, "osculating": k, "degree": o.degree, "c0": o.c0.tag() });
    } else {
        let i = i.expect("clap enforces one of --i, --osculating");
        let constants = sequence_constants(n, i).map_err(input)?;
        let mut worst: f64 = 0.0;
        for z in [Complex64::new(0.0, 0.0), Complex64::new(0.3, -0.2), Complex64::new(-1.1, 0.7), Complex64::new(2.5, 1.5)] {
            let a = f_closed(n, i, z).map_err(input)?;
            let g = f_gram_schmidt(n, i, z).map_err(input)?;
            worst = worst.max(projector_distance(&a, &g));
        }
        report.check("closed_form_matches_gram_schmidt", worst < 1e-10, worst);
        report.details = json!({
            "n": n,
            "i": i,
            "k": Num::rat(&constants.k),
            "cos_alpha": Num::rat(&constants.cos_alpha),
            "projector_distance": worst,
        });
    }
    emit(&report);
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn solve(args: &SolveArgs) -> Outcome {
    let problem = Problem {
        d: args.d,
        n: args.n,
        c_mode: if args.free_c { CMode::Free } else { CMode::Fixed(args.c.expect("clap enforces --c or --free-c")) },
        restarts: args.restarts,
        seed: args.seed,
        tol: args.tol,
        max_iter: args.max_iter,
    };
    let outcome = solve_detailed(&problem).map_err(input)?;
    let solve_report = SolveReport::new(&problem, &outcome);
    let text = serde_json::to_string_pretty(&solve_report).expect("serializable");
    std::fs::write(&args.out, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", args.out.display())))?;

    let mut report = Report::new("solve", &args.out.display().to_string());
    report.mode = Some(holosphere::curve::Mode::Float);
    report.check("solutions_found", !outcome.solutions.is_empty(), outcome.best_residual());
    report.details = json!({
        "problem": problem,
        "converged_restarts": solve_report.converged_restarts,
        "solutions": solve_report.solutions.iter().map(|s| json!({
            "residual": s.residual,
            "c": s.c,
            "s": s.s,
            "fingerprint": s.fingerprint,
            "family": s.family,
        })).collect::<Vec<_>>(),
    });
    emit(&report);
    if outcome.solutions.is_empty() {
        Err(Failure::Negative)
    } else {
        Ok(())
    }
}

/// `(r^2, |det A_1|^2(r))` with `|det A_1|^2 = |w|^2 / (d^2 (1 + r^2)^(2d - 4))`.
fn plot_rows<S: Scalar>(curve: &holosphere::curve::CurveForm<S>, samples: usize, r_max: f64) -> Result<Vec<(f64, f64)>, Failure> {
    let d = curve.curvature_degree().unwrap_or_else(|| curve.plucker_degree());
    if d < 2 {
        return Err(Failure::Input(format!("Plücker degree {d} leaves |det A_1|^2 undefined")));
    }
    let h = curve.second_surface();
    (0..samples)
        .map(|k| {
            let r = if samples == 1 { 0.0 } else { r_max * k as f64 / (samples - 1) as f64 };
            let u = r * r;
            let w = h.eval(Complex64::new(r, 0.0)).map_err(input)?;
            Ok((u, w / ((d * d) as f64 * (1.0 + u).powi(2 * d as i32 - 4))))
        })
        .collect()
}

fn plot_data(source: &str, samples: usize, r_max: f64, out: Option<&std::path::Path>) -> Outcome {
    if samples == 0 {
        return Err(Failure::Input("samples must be positive".into()));
    }
    if !(r_max.is_finite() && r_max >= 0.0) {
        return Err(Failure::Input("r-max must be finite and nonnegative".into()));
    }
    let b = builtin::load(source).map_err(Failure::Input)?;
    let rows = match &b.curve {
        AnyCurve::Exact(c) => plot_rows(c, samples, r_max)?,
        AnyCurve::Float(c) => plot_rows(c, samples, r_max)?,
    };
    let mut text = String::from("r2\tdet_a1_sq\n");
    for (u, v) in rows {
        text.push_str(&format!("{u}\t{v}\n"));
    }
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(input),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::VerifyFamily { t } => verify_family(t),
        Command::Check { source } => check(source),
        Command::Veronese { n, i, osculating } => veronese(*n, *i, *osculating),
        Command::Solve(args) => solve(args),
        Command::PlotData { source, samples, r_max, out } => plot_data(source, *samples, *r_max, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
