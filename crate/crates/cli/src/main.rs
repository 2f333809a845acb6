//! `chebpot` command-line front end.
//!
//! Results go to stdout as JSON (CSV for curves). Library errors exit with
//! status 1 and print `{"error": kind, "message": …}` to stderr; malformed
//! arguments or unreadable inputs exit with status 2.

mod input;

use std::io::Write;
use std::process::ExitCode;

use chebpot::{
    affine_in_t_test, bergman_exactness_defect, bergman_geodesic_eval, bergman_spectrum, cheb_closed_form,
    cheb_finite_m, counterexample_report, energy_okounkov, energy_report, gram_exact, gram_numeric,
    lattice_points, mu_vector, simultaneous_diagonalize, trailing_minor_det, ChartGrid, ChebyshevPotentialFs,
    QuadratureScheme, QuadratureSpec, AFFINE_TOL,
};
use clap::{Args, Parser, Subcommand};
use input::{Failure, UsageError};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "chebpot", version, about = "Chebyshev potentials of Fubini–Study metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Quadrature {
    /// Radial tanh-sinh nodes per coordinate.
    #[arg(long, default_value_t = 200)]
    radial: usize,
    /// Angular trapezoid nodes per coordinate (even).
    #[arg(long, default_value_t = 64)]
    angular: usize,
    /// Use a randomly shifted lattice rule with this many samples instead.
    #[arg(long)]
    qmc: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fail if the error estimate exceeds this.
    #[arg(long)]
    tol: Option<f64>,
}

impl Quadrature {
    fn spec(&self) -> QuadratureSpec {
        let scheme = match self.qmc {
            Some(samples) => QuadratureScheme::QuasiMonteCarlo { samples, seed: self.seed },
            None => QuadratureScheme::product(self.radial, self.angular),
        };
        QuadratureSpec { scheme, tol: self.tol }
    }
}

#[derive(Subcommand)]
enum Command {
    /// μ-vector and trailing minors of a matrix.
    Mu {
        #[arg(long)]
        p: String,
    },
    /// Lex-ordered lattice points of degree m on ℙⁿ.
    Okounkov {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
    },
    /// Geodesic (A, D) joining two matrices.
    Geodesic {
        #[arg(long)]
        p0: String,
        #[arg(long)]
        p1: String,
    },
    /// Gram matrix of degree-m monomials.
    Gram {
        #[arg(long)]
        p: String,
        #[arg(long)]
        m: u32,
        /// Integrate over the chart instead of using the closed form.
        #[arg(long)]
        numeric: bool,
        #[command(flatten)]
        quadrature: Quadrature,
    },
    /// Chebyshev potential at α, or its curve along a geodesic as CSV.
    Cheb {
        #[arg(long, required_unless_present = "curve")]
        p: Option<String>,
        /// Comma-separated coordinates of α.
        #[arg(long)]
        alpha: String,
        /// Finite level instead of the limit.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, requires_all = ["path", "ts"])]
        curve: bool,
        /// Path file, or `counterexample`.
        #[arg(long)]
        path: Option<String>,
        /// `start:stop:count` or a comma list.
        #[arg(long)]
        ts: Option<String>,
    },
    /// Whether t ↦ c[φ_P(t)](α) is affine for each α.
    AffineTest {
        #[arg(long)]
        path: String,
        /// Repeat for several points.
        #[arg(long, required = true)]
        alpha: Vec<String>,
        #[arg(long)]
        ts: String,
        #[arg(long, default_value_t = AFFINE_TOL)]
        tol: f64,
    },
    /// Bergman geodesic φ_m(t, z).
    Bergman {
        #[arg(long)]
        p0: String,
        #[arg(long)]
        p1: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        t: f64,
        /// `re,im[,re,im…]`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Bergman geodesic from I to e^D against φ_{e^{tD}}, one row per level.
    BergmanDefect {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        /// Comma-separated levels.
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = 11)]
        t_count: usize,
        #[arg(long, default_value_t = 11)]
        z_count: usize,
        #[arg(long, default_value_t = 3.0)]
        z_max: f64,
    },
    /// Aubin–Mabuchi energy between two matrices.
    Energy {
        #[arg(long)]
        p0: String,
        #[arg(long)]
        p1: String,
        /// Also integrate over the chart and compare.
        #[arg(long)]
        chart: bool,
        #[command(flatten)]
        quadrature: Quadrature,
    },
    /// The cosh/sinh geodesic: non-affine potential, affine energy.
    Counterexample,
}

enum Output {
    Json(serde_json::Value),
    Csv(String),
}

fn to_json<T: Serialize>(v: &T) -> Output {
    Output::Json(serde_json::to_value(v).expect("serialisable output"))
}

fn run(cmd: Command) -> Result<Output, Failure> {
    Ok(match cmd {
        Command::Mu { p } => {
            let p = input::matrix(&p)?;
            let minors = (0..=p.order())
                .map(|i| trailing_minor_det(&p, i))
                .collect::<chebpot::Result<Vec<_>>>()?;
            Output::Json(json!({ "mu": mu_vector(&p), "trailing_minors": minors }))
        }
        Command::Okounkov { n, m } => {
            if n == 0 || m == 0 {
                return Err(UsageError("n and m must be positive".into()).into());
            }
            to_json(&lattice_points(n, m))
        }
        Command::Geodesic { p0, p1 } => {
            let path = simultaneous_diagonalize(&input::matrix(&p0)?, &input::matrix(&p1)?)?;
            to_json(&path)
        }
        Command::Gram { p, m, numeric, quadrature } => {
            let p = input::matrix(&p)?;
            if numeric {
                let g = gram_numeric(&p, m, &quadrature.spec())?;
                Output::Json(json!({ "gram": g.gram, "error_estimate": g.error_estimate }))
            } else {
                to_json(&gram_exact(&p, m)?)
            }
        }
        Command::Cheb { p, alpha, m, curve, path, ts } => {
            let alpha = input::simplex_point(&alpha)?;
            if curve {
                let path = input::path(path.as_deref().expect("required by clap"))?;
                let ts = input::times(ts.as_deref().expect("required by clap"))?;
                let mut out = String::from("t,value\n");
                for t in ts {
                    let pt = path.eval(t)?;
                    let v = match m {
                        Some(m) => cheb_finite_m(&pt, m, &alpha)?,
                        None => cheb_closed_form(&ChebyshevPotentialFs::from_matrix(&pt), &alpha)?,
                    };
                    out.push_str(&format!("{t},{v}\n"));
                }
                Output::Csv(out)
            } else {
                let p = input::matrix(p.as_deref().expect("required by clap"))?;
                let value = match m {
                    Some(m) => cheb_finite_m(&p, m, &alpha)?,
                    None => cheb_closed_form(&ChebyshevPotentialFs::from_matrix(&p), &alpha)?,
                };
                Output::Json(json!({ "alpha": alpha, "m": m, "value": value }))
            }
        }
        Command::AffineTest { path, alpha, ts, tol } => {
            let path = input::path(&path)?;
            let alphas = alpha
                .iter()
                .map(|a| input::simplex_point(a))
                .collect::<Result<Vec<_>, _>>()?;
            let ts = input::times(&ts)?;
            to_json(&affine_in_t_test(&path, &alphas, &ts, tol)?)
        }
        Command::Bergman { p0, p1, m, t, z } => {
            let spec = bergman_spectrum(&input::matrix(&p0)?, &input::matrix(&p1)?, m)?;
            let value = bergman_geodesic_eval(&spec, t, &input::chart_point(&z)?)?;
            Output::Json(json!({ "m": m, "t": t, "value": value }))
        }
        Command::BergmanDefect { d, m, t_count, z_count, z_max } => {
            let d = input::reals(&d)?;
            let grid = ChartGrid { t_count, z_count, z_max };
            let levels = input::reals(&m)?;
            let rows = levels
                .iter()
                .map(|&m| {
                    if m < 1.0 || m.fract() != 0.0 {
                        return Err(Failure::Usage(UsageError(format!("level {m} is not a positive integer"))));
                    }
                    Ok(bergman_exactness_defect(&d, m as u32, &grid)?)
                })
                .collect::<Result<Vec<_>, _>>()?;
            to_json(&rows)
        }
        Command::Energy { p0, p1, chart, quadrature } => {
            let (p0, p1) = (input::matrix(&p0)?, input::matrix(&p1)?);
            if chart {
                to_json(&energy_report(&p0, &p1, &quadrature.spec())?)
            } else {
                Output::Json(json!({ "okounkov_value": energy_okounkov(&p0, &p1)? }))
            }
        }
        Command::Counterexample => to_json(&counterexample_report()?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let text = match out {
                Output::Json(v) => format!("{}\n", serde_json::to_string_pretty(&v).expect("valid JSON")),
                Output::Csv(s) => s,
            };
            // A closed pipe is not worth a panic.
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(1)
        }
    }
}
