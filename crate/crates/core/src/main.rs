use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use gorenstein::apolarity::{sperner_stats, GorensteinAlgebra};
use gorenstein::exactla::{has_full_rank, rank, symbolic_det_capped};
use gorenstein::families::{classify, normalize};
use gorenstein::harness::suite::run_suite;
use gorenstein::harness::{run_sweep, SweepBounds};
use gorenstein::lefschetz::{
    decide_slp_in, decide_wlp_in, is_sl_element_in, is_wl_element_in, mixed_hessian_in, DecideOptions, LinearForm, Mode,
    Property,
};
use gorenstein::{DualPolynomial, Error, Result};

#[derive(Parser)]
#[command(name = "gorenstein", about = "Lefschetz properties of Artinian Gorenstein algebras with binomial dual generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// h-vector and Sperner statistics of A_F.
    Hilbert {
        f: String,
        #[arg(long)]
        json: bool,
    },
    /// Monomial basis of (A_F)_t.
    Basis {
        f: String,
        #[arg(long)]
        degree: u32,
    },
    /// Mixed Hessian of order (s, t); s defaults to t.
    Hessian {
        f: String,
        #[arg(long = "t")]
        t: u32,
        #[arg(long = "s")]
        s: Option<u32>,
        /// Evaluate at a point, e.g. 1,0,-2/3.
        #[arg(long)]
        eval: Option<String>,
        /// Compute the determinant symbolically.
        #[arg(long)]
        symbolic: bool,
    },
    /// Decide the weak Lefschetz property, or test one element with --ell.
    Wlp(DecideArgs),
    /// Decide the strong Lefschetz property, or test one element with --ell.
    Slp(DecideArgs),
    /// Match a binomial against the sufficient conditions.
    Classify { f: String },
    /// Cross-check all binomial specs within bounds, writing JSONL.
    Search {
        #[arg(long, default_value_t = 2)]
        min_vars: usize,
        #[arg(long)]
        max_vars: usize,
        #[arg(long)]
        max_degree: u32,
        #[arg(long)]
        max_gcd_degree: Option<u32>,
        /// Keep only specs with deg g >= floor((d-1)/2).
        #[arg(long)]
        big_gcd: bool,
        #[arg(long)]
        certify: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run the acceptance suite.
    VerifyPaper {
        /// Where the codimension-4 search writes its records.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct DecideArgs {
    f: String,
    #[arg(long)]
    ell: Option<String>,
    #[arg(long)]
    certify: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn algebra(f: &str) -> Result<GorensteinAlgebra> {
    GorensteinAlgebra::new(&DualPolynomial::parse(f)?)
}

fn decide(args: &DecideArgs, property: Property) -> Result<u8> {
    let alg = algebra(&args.f)?;
    if let Some(ell) = &args.ell {
        let ell = LinearForm::parse(ell)?;
        let ok = match property {
            Property::Wlp => is_wl_element_in(&alg, &ell)?,
            Property::Slp => is_sl_element_in(&alg, &ell)?,
        };
        println!("{}", json!({ "property": property, "ell": ell, "lefschetz_element": ok }));
        return Ok(0);
    }
    let mode = if args.certify { Mode::Certify } else { Mode::Fast };
    let opts = DecideOptions::new(mode, args.seed);
    let verdict = match property {
        Property::Wlp => decide_wlp_in(&alg, &opts)?,
        Property::Slp => decide_slp_in(&alg, &opts)?,
    };
    println!("{}", serde_json::to_string_pretty(&verdict)?);
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Hilbert { f, json } => {
            let alg = algebra(&f)?;
            let stats = sperner_stats(alg.hvector());
            if json {
                println!("{}", json!({ "hvector": alg.hvector(), "sperner": stats }));
            } else {
                println!("h = {}", alg.hvector());
                println!("sperner = {}", stats.sperner);
                println!("flat = {} (degrees {}..{})", stats.flat_length, stats.flat_start, stats.flat_end);
            }
        }
        Command::Basis { f, degree } => {
            let alg = algebra(&f)?;
            if degree > alg.socle_degree() {
                return Err(Error::input(format!("degree {} exceeds socle degree {}", degree, alg.socle_degree())));
            }
            println!("{}", alg.basis(degree));
        }
        Command::Hessian { f, t, s, eval, symbolic } => {
            let alg = algebra(&f)?;
            let h = mixed_hessian_in(&alg, s.unwrap_or(t), t)?;
            println!("rows: {}", h.row_basis);
            println!("cols: {}", h.col_basis);
            for i in 0..h.matrix.rows() {
                let row: Vec<String> = (0..h.matrix.cols()).map(|j| h.matrix.get(i, j).to_string()).collect();
                println!("[{}]", row.join(", "));
            }
            if let Some(point) = eval {
                let point = LinearForm::parse(&point)?;
                if point.nvars() != alg.nvars() {
                    return Err(Error::input(format!("point has {} coordinates, expected {}", point.nvars(), alg.nvars())));
                }
                let m = h.matrix.evaluate(point.coefficients());
                println!("rank at point: {} of {}x{} (full rank: {})", rank(&m), m.rows(), m.cols(), has_full_rank(&m));
            }
            if symbolic {
                if !h.matrix.is_square() {
                    return Err(Error::input("symbolic determinant needs a square Hessian (s = t)"));
                }
                println!("det = {}", symbolic_det_capped(&h.matrix, DecideOptions::default().symbolic_cap)?);
            }
        }
        Command::Wlp(args) => return decide(&args, Property::Wlp),
        Command::Slp(args) => return decide(&args, Property::Slp),
        Command::Classify { f } => {
            let (spec, _) = normalize(&DualPolynomial::parse(&f)?)?;
            println!("{}", serde_json::to_string_pretty(&classify(&spec.canonical()))?);
        }
        Command::Search { min_vars, max_vars, max_degree, max_gcd_degree, big_gcd, certify, out, seed, jobs } => {
            let mut bounds = SweepBounds::new(max_vars, max_degree);
            bounds.min_vars = min_vars;
            bounds.max_gcd_degree = max_gcd_degree;
            bounds.big_gcd = big_gcd;
            bounds.mode = if certify { Mode::Certify } else { Mode::Fast };
            bounds.seed = seed;
            if let Some(j) = jobs {
                bounds.jobs = j;
            }
            let summary = run_sweep(&bounds, &out)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            if summary.disagreements > 0 {
                return Ok(4);
            }
        }
        Command::VerifyPaper { out, seed } => {
            let scratch = out.is_none();
            let out = out.unwrap_or_else(|| std::env::temp_dir().join(format!("gorenstein-search-{}.jsonl", std::process::id())));
            let reports = run_suite(&out, seed, &mut |r| println!("{}", r));
            if scratch {
                let _ = std::fs::remove_file(&out);
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            println!("{} passed, {} failed", reports.len() - failed, failed);
            if failed > 0 {
                return Ok(4);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
