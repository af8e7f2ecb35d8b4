use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use cq_spde::noise::write_path;
use cq_spde::study::DEFAULT_SEED;
use cq_spde::{
    cq_weights, run_study, sample_path, Error, FractionalOrder, Initial, Mesh1D, NoiseConfig, PiecewiseConstant,
    Scheme, SchemeConfig, Source, StudyConfig, StudyKind,
};

#[derive(Parser)]
#[command(name = "cq-spde", version, about = "Convergence studies for a stochastic fractional PDE in 1D")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Spatial,
    Temporal,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo convergence study over dyadic refinement levels.
    Study {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        alpha: f64,
        /// Refinement exponents as `k1..k2` (inclusive).
        #[arg(long)]
        levels: Option<String>,
        /// Exponent of the fixed axis: tau = T 2^-fixed (spatial) or h = 2^-fixed (temporal).
        #[arg(long)]
        fixed: Option<u32>,
        #[arg(long)]
        realizations: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long = "final-time", default_value_t = 1.0)]
        final_time: f64,
        /// tau = 2^-14 / h = 2^-10 and 10^4 realizations.
        #[arg(long)]
        paper_scale: bool,
        #[arg(long)]
        workers: Option<usize>,
        /// Directory for the CSV, markdown table and run manifest.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print convolution quadrature weights b_0..b_n.
    Weights {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n: usize,
    },
    /// Solve one trajectory of the reference problem and dump psi at the final time.
    Solve {
        #[arg(long)]
        alpha: f64,
        /// Mesh exponent: h = 2^-mesh.
        #[arg(long, default_value_t = 5)]
        mesh: u32,
        /// Step exponent: N = 2^steps over [0, T].
        #[arg(long, default_value_t = 10)]
        steps: u32,
        #[arg(long = "final-time", default_value_t = 1.0)]
        final_time: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        realization: u64,
        /// Write every time level instead of only the last.
        #[arg(long)]
        all_steps: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the noise path in the binary dump format.
        #[arg(long)]
        noise_dump: Option<PathBuf>,
    },
}

fn parse_levels(s: &str) -> Result<Vec<u32>, Error> {
    let bad = || Error::Config(format!("levels must look like k1..k2, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if b <= a {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonFinite(_) | Error::SingularPivot { .. } => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Study {
            kind,
            alpha,
            levels,
            fixed,
            realizations,
            seed,
            sigma,
            final_time,
            paper_scale,
            workers,
            out,
        } => {
            let alpha = FractionalOrder::new(alpha)?;
            let mut config = match kind {
                Kind::Spatial => StudyConfig::spatial(alpha),
                Kind::Temporal => StudyConfig::temporal(alpha),
            };
            if paper_scale {
                config = config.paper_scale();
            }
            if let Some(l) = levels {
                config.levels = parse_levels(&l)?;
            }
            if let Some(f) = fixed {
                config.fixed = f;
            }
            if let Some(i) = realizations {
                config.realizations = i;
            }
            config.master_seed = seed;
            config.sigma = sigma;
            config.horizon = final_time;
            config.workers = workers;
            config.validate()?;
            let report = run_study(&config)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            println!("{}", report.to_markdown());
            match out {
                Some(dir) => {
                    for p in report.write_to_dir(&dir)? {
                        eprintln!("wrote {}", p.display());
                    }
                }
                None => print!("{}", report.to_csv()),
            }
            eprintln!(
                "{} study, alpha={}, {} realizations: {:.1}s",
                match config.kind {
                    StudyKind::Spatial => "spatial",
                    StudyKind::Temporal => "temporal",
                },
                alpha.value(),
                config.realizations,
                report.wall_time_secs
            );
        }
        Command::Weights { alpha, n } => {
            let w = cq_weights(FractionalOrder::new(alpha)?, n)?;
            let stdout = std::io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            for (j, b) in w.as_slice().iter().enumerate() {
                writeln!(out, "{j} {b:.17e}")?;
            }
        }
        Command::Solve {
            alpha,
            mesh,
            steps,
            final_time,
            sigma,
            seed,
            realization,
            all_steps,
            out,
            noise_dump,
        } => {
            let alpha = FractionalOrder::new(alpha)?;
            let mesh = Mesh1D::dyadic(mesh)?;
            if steps > 24 {
                return Err(Error::Config("step exponent must not exceed 24".into()));
            }
            let n = 1usize << steps;
            let config = SchemeConfig::new(alpha, mesh, final_time / n as f64, n)
                .with_sigma(sigma)
                .with_initial(Initial::Function(Arc::new(|x| x * (1.0 - x))))
                .with_source(Source::PiecewiseConstant(PiecewiseConstant::sign_step()));
            let scheme = Scheme::new(&config)?;
            let path = (sigma > 0.0)
                .then(|| NoiseConfig::for_mesh(&mesh, n, final_time, seed, realization).map(|c| sample_path(&c)))
                .transpose()?;
            if let (Some(p), Some(file)) = (&path, noise_dump) {
                write_path(p, BufWriter::new(File::create(file)?))?;
            }
            let traj = scheme.run(path.as_ref(), all_steps)?;
            let mut sink: Box<dyn Write> = match out {
                Some(p) => Box::new(BufWriter::new(File::create(p)?)),
                None => Box::new(BufWriter::new(std::io::stdout().lock())),
            };
            let x = mesh.interior_positions();
            let tau = scheme.tau();
            writeln!(sink, "t,x,psi")?;
            let levels: Vec<(usize, Vec<f64>)> = match traj.states {
                Some(s) => s.into_iter().enumerate().collect(),
                None => vec![(n, traj.final_psi)],
            };
            for (step, psi) in levels {
                let t = step as f64 * tau;
                for (xi, v) in x.iter().zip(&psi) {
                    if !v.is_finite() {
                        return Err(Error::NonFinite(format!("psi at t={t}, x={xi}")));
                    }
                    writeln!(sink, "{t},{xi},{v:.17e}")?;
                }
            }
            sink.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
