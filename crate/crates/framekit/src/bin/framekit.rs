//! Command-line front end: analysis, R-dual construction and checking,
//! Gabor duality reports, and reproduction of the classical example
//! families.
//!
//! Exit codes: 0 yes/success, 1 verified-no, 2 usage or data error,
//! 3 unknown.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use framekit::frames::{is_biorthogonal, VectorSequence};
use framekit::gabor::{
    cardinality_report, commutation_check, duality_check, named_window, Lattice,
};
use framekit::io::{load_matrix, load_sequence, matrix_to_json, MatrixJson};
use framekit::linalg::{psd_inv_sqrt_on_range, CVec, Tol};
use framekit::patterns::{
    alpha_dual_family, repeated_first_frame, sqrt2_pattern_frame, sqrt2_pattern_riesz,
};
use framekit::rduals::{
    canonical_q, check_type1_tight, check_type2, check_type3, construct_type1, construct_type2,
    construct_type2_extended, construct_type3, construct_type4, CheckReport, Verdict,
};
use framekit::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Parser)]
#[command(name = "framekit", version, about = "Finite frame theory toolkit")]
struct Cli {
    /// Relative equality tolerance (overrides FRAMEKIT_TOL).
    #[arg(long, global = true)]
    tau_eq: Option<f64>,

    /// Relative rank tolerance.
    #[arg(long, global = true)]
    tau_rank: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Random seed (accepted for interface stability; all commands are
    /// deterministic).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a vector family and report its spectral data.
    Analyze { file: PathBuf },

    /// Construct an R-dual of the given type and write its synthesis matrix.
    Rdual {
        frame: PathBuf,
        #[arg(long = "type", value_parser = clap::value_parser!(u8).range(1..=4))]
        dual_type: u8,
        /// First basis (orthonormal for types 1-3, Riesz for type 4).
        #[arg(long)]
        e: PathBuf,
        /// Second basis.
        #[arg(long)]
        h: PathBuf,
        /// Bounded bijection for type 3 (defaults to the canonical S^{1/2}).
        #[arg(long)]
        q: Option<PathBuf>,
        /// Output file for the dual's synthesis matrix (stdout when absent).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },

    /// Decide R-dual membership of a candidate sequence.
    Check {
        frame: PathBuf,
        omega: PathBuf,
        #[arg(long = "type", value_parser = clap::value_parser!(u8).range(1..=3))]
        dual_type: u8,
    },

    /// Verify the finite duality principle for a Gabor system.
    Gabor {
        #[arg(long = "L")]
        l: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// Named window (dirac, constant, gaussian) or a vector file.
        #[arg(long)]
        window: String,
    },

    /// Reproduce one of the classical example families.
    Example {
        /// ex-typeI-counterexample, ex-typeII, ex-typeI-not-II, or
        /// ex-alpha-family.
        name: String,
        #[arg(long, default_value_t = 8)]
        dim: usize,
        /// Single alpha to test (ex-alpha-family only; defaults to the
        /// sample set 0.25, 0.5, 0.7, 1.0).
        #[arg(long)]
        alpha: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = resolve_tol(&cli);
    match run(&cli, &tol) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn resolve_tol(cli: &Cli) -> Tol {
    let mut tol = Tol::default();
    if let Ok(v) = std::env::var("FRAMEKIT_TOL") {
        if let Ok(x) = v.parse::<f64>() {
            if x > 0.0 {
                tol.eq = x;
            }
        }
    }
    if let Some(x) = cli.tau_eq {
        tol.eq = x;
    }
    if let Some(x) = cli.tau_rank {
        tol.rank = x;
    }
    tol
}

fn run(cli: &Cli, tol: &Tol) -> Result<u8> {
    match &cli.cmd {
        Cmd::Analyze { file } => cmd_analyze(file, cli.format, tol),
        Cmd::Rdual {
            frame,
            dual_type,
            e,
            h,
            q,
            output,
        } => cmd_rdual(frame, *dual_type, e, h, q.as_deref(), output.as_deref(), cli.format, tol),
        Cmd::Check {
            frame,
            omega,
            dual_type,
        } => cmd_check(frame, omega, *dual_type, cli.format, tol),
        Cmd::Gabor { l, a, b, window } => cmd_gabor(*l, *a, *b, window, cli.format, tol),
        Cmd::Example { name, dim, alpha } => cmd_example(name, *dim, *alpha, cli.format, tol),
    }
}

fn cmd_analyze(file: &PathBuf, format: Format, tol: &Tol) -> Result<u8> {
    let seq = load_sequence(file)?;
    seq.optimal_bounds(tol)?;
    let c = seq.classify(tol);
    let summary = seq.spectral_summary(tol);
    match format {
        Format::Json => {
            let v = json!({
                "ambient_dim": seq.ambient_dim(),
                "count": seq.len(),
                "classification": {
                    "is_frame_for_h": c.is_frame_for_h,
                    "is_frame_sequence": c.is_frame_sequence,
                    "is_riesz_sequence": c.is_riesz_sequence,
                    "is_riesz_basis": c.is_riesz_basis,
                    "is_onb": c.is_onb,
                    "is_tight": c.is_tight,
                    "excess": c.excess,
                    "deficit": c.deficit,
                    "bounds": [c.bounds.0, c.bounds.1],
                },
                "singular_values": summary.singular_values,
                "rank": summary.rank,
            });
            println!("{v}");
        }
        Format::Human => {
            println!("dimension {}, count {}", seq.ambient_dim(), seq.len());
            let mut kinds = Vec::new();
            if c.is_onb {
                kinds.push("orthonormal basis");
            } else if c.is_riesz_basis {
                kinds.push("Riesz basis");
            } else {
                if c.is_frame_for_h {
                    kinds.push("frame for the space");
                } else if c.is_frame_sequence {
                    kinds.push("frame sequence");
                }
                if c.is_riesz_sequence {
                    kinds.push("Riesz sequence");
                }
            }
            if c.is_tight {
                kinds.push("tight");
            }
            println!("classification: {}", kinds.join(", "));
            println!("optimal bounds: ({:.12}, {:.12})", c.bounds.0, c.bounds.1);
            println!("excess {}, deficit {}", c.excess, c.deficit);
            println!(
                "singular values: {}",
                summary
                    .singular_values
                    .iter()
                    .map(|s| format!("{s:.12}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            );
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_rdual(
    frame: &PathBuf,
    dual_type: u8,
    e_file: &std::path::Path,
    h_file: &std::path::Path,
    q_file: Option<&std::path::Path>,
    output: Option<&std::path::Path>,
    format: Format,
    tol: &Tol,
) -> Result<u8> {
    let f = load_sequence(frame)?;
    let e = VectorSequence::from_matrix(load_matrix(e_file)?);
    let h = VectorSequence::from_matrix(load_matrix(h_file)?);
    let omega = match dual_type {
        1 => construct_type1(&f, &e, &h, tol)?,
        2 => construct_type2(&f, &e, &h, tol)?,
        3 => {
            let q = match q_file {
                Some(p) => load_matrix(p)?,
                None => canonical_q(&f, tol)?,
            };
            construct_type3(&f, &e, &h, &q, tol)?
        }
        4 => construct_type4(&f, &e, &h, tol)?,
        _ => unreachable!("clap range"),
    };
    let (af, bf) = f.optimal_bounds(tol)?;
    let (ao, bo) = omega.optimal_bounds(tol)?;
    let serialized = matrix_to_json(omega.synthesis());
    if let Some(path) = output {
        std::fs::write(path, &serialized)?;
    }
    match format {
        Format::Json => {
            let v = json!({
                "primal_bounds": [af, bf],
                "dual_bounds": [ao, bo],
                "omega": MatrixJson::from_matrix(omega.synthesis()),
            });
            println!("{v}");
        }
        Format::Human => {
            println!("primal bounds: ({af:.12}, {bf:.12})");
            println!("dual bounds:   ({ao:.12}, {bo:.12})");
            match output {
                Some(path) => println!("wrote {}", path.display()),
                None => println!("{serialized}"),
            }
        }
    }
    Ok(0)
}

fn verdict_exit(v: Verdict) -> u8 {
    match v {
        Verdict::Yes => 0,
        Verdict::No => 1,
        Verdict::Unknown => 3,
    }
}

fn print_report(report: &CheckReport, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Human => {
            println!("verdict: {:?}", report.verdict);
            for c in &report.conditions {
                println!(
                    "  [{}] {} (lhs {:.6e}, rhs {:.6e})",
                    if c.pass { "pass" } else { "fail" },
                    c.name,
                    c.lhs,
                    c.rhs
                );
            }
            if let Some(w) = &report.witness {
                println!("witness: type {:?} with bases E, H{}", w.dual_type,
                    if w.q.is_some() { " and operator Q" } else { "" });
            }
        }
    }
}

fn cmd_check(
    frame: &PathBuf,
    omega: &PathBuf,
    dual_type: u8,
    format: Format,
    tol: &Tol,
) -> Result<u8> {
    let f = load_sequence(frame)?;
    let o = load_sequence(omega)?;
    let report = match dual_type {
        1 => check_type1_tight(&f, &o, tol.eq, tol)?,
        2 => check_type2(&f, &o, tol.eq, tol)?,
        3 => check_type3(&f, &o, tol.eq, tol)?,
        _ => unreachable!("clap range"),
    };
    print_report(&report, format);
    Ok(verdict_exit(report.verdict))
}

fn resolve_window(spec: &str, l: usize) -> Result<CVec> {
    if let Some(g) = named_window(spec, l) {
        return Ok(g);
    }
    let m = load_matrix(std::path::Path::new(spec))?;
    let v = if m.ncols() == 1 {
        m.column(0).into_owned()
    } else if m.nrows() == 1 {
        m.transpose().column(0).map(|z| z.conj())
    } else {
        return Err(Error::DimensionMismatch {
            context: format!("window file must be a vector, got {}x{}", m.nrows(), m.ncols()),
        });
    };
    Ok(v)
}

fn cmd_gabor(l: usize, a: usize, b: usize, window: &str, format: Format, tol: &Tol) -> Result<u8> {
    let lattice = Lattice::new(l, a, b)?;
    let g = resolve_window(window, l)?;
    let duality = duality_check(&g, &lattice, tol.eq, tol)?;
    let cardinality = cardinality_report(&g, &lattice, tol)?;
    let commutation = commutation_check(&g, &lattice, tol)?;
    match format {
        Format::Json => {
            let v = json!({
                "lattice": lattice,
                "duality": duality,
                "cardinality": cardinality,
                "commutation": commutation,
            });
            println!("{v}");
        }
        Format::Human => {
            println!(
                "lattice L={l} a={a} b={b}: system {} elements, adjoint {}",
                lattice.system_size(),
                lattice.adjoint_size()
            );
            println!(
                "frame bounds ({:.12}, {:.12}), adjoint bounds ({:.12}, {:.12})",
                duality.frame_bounds.0,
                duality.frame_bounds.1,
                duality.adjoint_bounds.0,
                duality.adjoint_bounds.1
            );
            println!(
                "duality verdict: {} (kernel {}, adjoint deficit {})",
                duality.verdict, duality.ker_dim, duality.adjoint_deficit
            );
            if cardinality.not_frame_for_h {
                println!(
                    "flagged: system rank {} below dimension {l}, not a frame for the space",
                    cardinality.system_rank
                );
            }
            println!(
                "critical density: {}; literal R-dual relation possible: {}",
                cardinality.critical_density, cardinality.literal_rdual_possible
            );
            println!("commutation pass: {}", commutation.pass);
        }
    }
    Ok(if duality.verdict && commutation.pass { 0 } else { 1 })
}

struct Assertion {
    name: String,
    pass: bool,
    detail: String,
}

fn assert_close(name: &str, got: f64, want: f64, tau: f64) -> Assertion {
    Assertion {
        name: name.into(),
        pass: (got - want).abs() <= tau * want.abs().max(1.0),
        detail: format!("got {got:.12}, want {want:.12}"),
    }
}

fn assert_verdict(name: &str, got: Verdict, want: Verdict) -> Assertion {
    Assertion {
        name: name.into(),
        pass: got == want,
        detail: format!("got {got:?}, want {want:?}"),
    }
}

fn unit(d: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[i] = C64::new(1.0, 0.0);
    v
}

fn example_assertions(
    name: &str,
    n: usize,
    alpha: Option<f64>,
    tol: &Tol,
) -> Result<(Vec<Assertion>, Vec<String>)> {
    let tau = 1e-9;
    let e = VectorSequence::standard_basis(n);
    let mut out = Vec::new();
    let mut notes = Vec::new();
    match name {
        "ex-typeII" => {
            let f = repeated_first_frame(n);
            let (a, b) = f.optimal_bounds(tol)?;
            out.push(assert_close("primal_lower_bound", a, 1.0, tau));
            out.push(assert_close("primal_upper_bound", b, 2.0, tau));
            let omega = construct_type2_extended(&f, &e, &e, tol)?;
            let expected = unit(n, 0) + unit(n, 1) * C64::new(1.0 / 2.0f64.sqrt(), 0.0);
            out.push(assert_close(
                "omega1_value",
                (omega.vector(0) - expected).norm(),
                0.0,
                tau,
            ));
            let interior = omega.prefix(n - 1);
            let (ai, bi) = interior.optimal_bounds(tol)?;
            out.push(assert_close("interior_dual_lower_bound", ai, 1.0, tau));
            out.push(assert_close("interior_dual_upper_bound", bi, 1.5, tau));
            notes.push(format!(
                "boundary artifact: ||omega_{n}|| = {:.3e} (trailing zero of the truncation)",
                omega.vector(n - 1).norm()
            ));
        }
        "ex-typeI-not-II" => {
            let f = repeated_first_frame(n);
            let nu = construct_type1(&f, &e, &e, tol)?;
            let expected = unit(n, 0) + unit(n, 1);
            out.push(assert_close(
                "nu1_value",
                (nu.vector(0) - expected).norm(),
                0.0,
                tau,
            ));
            let s_inv_sqrt = psd_inv_sqrt_on_range(&f.frame_operator(), tol)?;
            let norm_sq = (&s_inv_sqrt * nu.vector(0)).norm_squared();
            out.push(assert_close("normalized_nu1_norm_sq", norm_sq, 1.5, tau));
            let r2 = check_type2(&f, &nu, tau, tol)?;
            out.push(assert_verdict("check_type2", r2.verdict, Verdict::No));
            let r3 = check_type3(&f, &nu, tau, tol)?;
            out.push(assert_verdict("check_type3", r3.verdict, Verdict::Yes));
        }
        "ex-typeI-counterexample" => {
            let f = sqrt2_pattern_frame(n);
            let g = sqrt2_pattern_riesz(n);
            for (label, seq) in [("frame", &f), ("candidate", &g)] {
                let (a, b) = seq.optimal_bounds(tol)?;
                out.push(assert_close(&format!("{label}_lower_bound"), a, 1.0, tau));
                out.push(assert_close(&format!("{label}_upper_bound"), b, 2.0, tau));
            }
            let r3 = check_type3(&f, &g, tau, tol)?;
            out.push(assert_verdict("check_type3", r3.verdict, Verdict::Yes));
            let r2 = check_type2(&f, &g, tau, tol)?;
            out.push(assert_verdict("check_type2", r2.verdict, Verdict::No));
            let s_inv_sqrt = psd_inv_sqrt_on_range(&f.frame_operator(), tol)?;
            let witness = (&s_inv_sqrt * g.vector(2)).norm();
            out.push(assert_close(
                "normalized_g3_norm",
                witness,
                1.0 / 2.0f64.sqrt(),
                tau,
            ));
            let r1 = check_type1_tight(&f, &g, tau, tol)?;
            out.push(assert_verdict("check_type1", r1.verdict, Verdict::Unknown));
        }
        "ex-alpha-family" => {
            let f = repeated_first_frame(n);
            let omega = construct_type2_extended(&f, &e, &e, tol)?;
            let alphas = match alpha {
                Some(x) => vec![x],
                None => vec![0.25, 0.5, 0.7, 1.0],
            };
            for a in alphas {
                let g = alpha_dual_family(n, a);
                let gamma = construct_type2_extended(&g, &e, &e, tol)?;
                // The last two indices carry truncation artifacts: the
                // trailing zero dual vector and the kernel fill of the
                // extended S^{1/2}.
                let observed =
                    is_biorthogonal(&omega.prefix(n - 2), &gamma.prefix(n - 2), tau)?;
                let c = (a * a + (1.0 - a) * (1.0 - a)).sqrt();
                let expected =
                    (a + (1.0 - a) / (2.0f64.sqrt() * c) - 1.0).abs() <= tau;
                out.push(Assertion {
                    name: format!("biorthogonal_alpha_{a}"),
                    pass: observed == expected,
                    detail: format!("observed {observed}, expected {expected}"),
                });
            }
        }
        other => {
            return Err(Error::Parse {
                line: 0,
                col: 0,
                msg: format!("unknown example {other:?}"),
            })
        }
    }
    Ok((out, notes))
}

fn cmd_example(
    name: &str,
    dim: usize,
    alpha: Option<f64>,
    format: Format,
    tol: &Tol,
) -> Result<u8> {
    if dim < 4 {
        return Err(Error::Parse {
            line: 0,
            col: 0,
            msg: "example dimension must be at least 4".into(),
        });
    }
    let (assertions, notes) = example_assertions(name, dim, alpha, tol)?;
    match format {
        Format::Json => {
            let v = json!({
                "example": name,
                "dim": dim,
                "assertions": assertions
                    .iter()
                    .map(|a| json!({"name": a.name, "pass": a.pass, "detail": a.detail}))
                    .collect::<Vec<_>>(),
                "notes": notes,
                "pass": assertions.iter().all(|a| a.pass),
            });
            println!("{v}");
        }
        Format::Human => {
            for a in &assertions {
                println!(
                    "[{}] {}: {}",
                    if a.pass { "pass" } else { "FAIL" },
                    a.name,
                    a.detail
                );
            }
            for note in &notes {
                println!("note: {note}");
            }
        }
    }
    if let Some(first) = assertions.iter().find(|a| !a.pass) {
        eprintln!(
            "error: {}",
            Error::AssertionFailure(format!("{}: {}", first.name, first.detail))
        );
        return Ok(1);
    }
    Ok(0)
}
