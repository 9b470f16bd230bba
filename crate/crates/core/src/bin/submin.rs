use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use submin::decomp::{decompose, decompose_exhaustive, violation_eps, VIOLATION_LIMIT};
use submin::exhaustive::{brute_force_min, estimate_dr_parameters, Monotonicity};
use submin::experiment::{run_experiment, ExperimentConfig};
use submin::instance::InstanceSpec;
use submin::noise::{minimize_noisy, NoiseSpec};
use submin::oracle::{Counted, SetFunction, ValueOracle};
use submin::pgm::{minimize, PgmConfig, StepRule};
use submin::set::{GroundSet, Subset};
use submin::verify::{verify_suite, Level};
use submin::{Error, Result};

#[derive(Parser)]
#[command(name = "submin", version, about = "Approximately submodular minimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the projected subgradient method on one instance.
    Minimize {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
        /// fixed-theorem, sqrt or polyak
        #[arg(long, default_value = "fixed-theorem")]
        step: String,
        /// Step scale for the sqrt rule.
        #[arg(long, default_value_t = 1.0)]
        step_scale: f64,
        /// Known Lipschitz bound; estimated from the run when absent.
        #[arg(long)]
        lipschitz: Option<f64>,
        /// Standard deviation of multiplicative Gaussian(1, σ) query noise.
        #[arg(long)]
        noise_sigma: Option<f64>,
        /// Noisy samples averaged per query.
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also report the brute-force optimum (d <= 20).
        #[arg(long)]
        audit: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run an experiment sweep from a JSON config and write CSV.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config output path; stdout if neither is set.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the self-check suite; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value = "fast")]
        level: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Split an instance into F - G and tabulate all three.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Lower bound on the violation; computed exhaustively when absent.
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive weak-DR parameters and violation of an instance.
    Params {
        #[command(flatten)]
        input: Input,
        /// Treat the function as non-increasing.
        #[arg(long)]
        nonincreasing: bool,
        /// Also report the violation for this α.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// JSON instance description.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// DIMACS max-flow file, read as a cut instance.
    #[arg(long)]
    dimacs: Option<PathBuf>,
}

impl Input {
    /// Instance parameters out of their domain are reported as config errors.
    fn build(&self) -> Result<Box<dyn SetFunction>> {
        let built = match (&self.instance, &self.dimacs) {
            (Some(p), _) => InstanceSpec::load(p)?.build(),
            (None, Some(p)) => InstanceSpec::Dimacs { path: p.clone() }.build(),
            (None, None) => Err(Error::InvalidConfig("no input given".into())),
        };
        built.map_err(|e| match e {
            Error::Domain(m) => Error::InvalidConfig(m),
            Error::NoFreeNodes => Error::InvalidConfig(e.to_string()),
            e => e,
        })
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn set_label(s: Subset) -> String {
    s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

fn step_rule(name: &str, scale: f64) -> Result<StepRule> {
    match name {
        "fixed-theorem" => Ok(StepRule::FixedTheorem),
        "sqrt" => Ok(StepRule::FixedSqrt { c: scale }),
        "polyak" => Ok(StepRule::Polyak),
        _ => Err(Error::InvalidConfig(format!("unknown step rule '{name}'"))),
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Minimize {
            input,
            iterations,
            step,
            step_scale,
            lipschitz,
            noise_sigma,
            samples,
            seed,
            audit,
            output,
        } => {
            let h = Counted::new(input.build()?);
            let mut cfg = PgmConfig::new(iterations).with_step_rule(step_rule(&step, step_scale)?);
            if let Some(l) = lipschitz {
                cfg = cfg.with_lipschitz(l);
            }
            cfg.validate(h.dim())?;
            let (result, value, calls) = match noise_sigma {
                Some(sigma) => {
                    let r = minimize_noisy(&h, NoiseSpec::multiplicative_gaussian(1.0, sigma, seed), samples, &cfg)?;
                    (r.result, r.true_value, r.noisy_calls * samples as u64)
                }
                None => {
                    let r = minimize(&h, &cfg)?;
                    let v = h.function().value(r.rounded_set)?;
                    let calls = r.oracle_calls;
                    (r, v, calls)
                }
            };
            let optimum = if audit { Some(brute_force_min(&Counted::new(h.function()))?) } else { None };
            let mut w = csv::Writer::from_writer(sink(output.as_deref())?);
            w.write_record(["d", "set", "value", "best_lovasz", "best_iteration", "lipschitz", "oracle_calls", "optimum", "optimal_set"])?;
            w.write_record([
                h.dim().to_string(),
                set_label(result.rounded_set),
                value.to_string(),
                result.best_lovasz.to_string(),
                result.best_iteration.to_string(),
                result.lipschitz.to_string(),
                calls.to_string(),
                optimum.map_or(String::new(), |o| o.1.to_string()),
                optimum.map_or(String::new(), |o| set_label(o.0)),
            ])?;
            w.flush()?;
            Ok(true)
        }
        Command::Experiment { config, seed, output } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let out = run_experiment(&cfg)?;
            out.write_csv(sink(output.as_deref().or(cfg.output.as_deref()))?)?;
            Ok(out.report.as_ref().is_none_or(|r| r.passed()))
        }
        Command::Verify { level, output } => {
            let report = verify_suite(level.parse::<Level>()?);
            report.write_csv(sink(output.as_deref())?)?;
            for c in report.failures() {
                eprintln!("FAIL {}: {}", c.name, c.counterexample.as_deref().unwrap_or(""));
            }
            Ok(report.passed())
        }
        Command::Decompose { input, alpha, beta, eps, output } => {
            let h = Counted::new(input.build()?);
            let d = h.dim();
            let dec = match eps {
                Some(e) => decompose(&h, alpha, beta, e)?,
                None => decompose_exhaustive(&h, alpha, beta)?,
            };
            eprintln!("{}", serde_json::to_string(dec.spec())?);
            if d > VIOLATION_LIMIT {
                return Err(Error::InvalidConfig(format!("tabulation needs d <= {VIOLATION_LIMIT}, got {d}")));
            }
            let mut w = csv::Writer::from_writer(sink(output.as_deref())?);
            w.write_record(["set", "h", "f", "g"])?;
            for s in GroundSet::new(d)?.subsets() {
                let hv = h.evaluate(s)?;
                w.write_record([set_label(s), hv.to_string(), dec.f_value(s)?.to_string(), dec.spec().g_value(s).to_string()])?;
            }
            w.flush()?;
            Ok(true)
        }
        Command::Params { input, nonincreasing, alpha, output } => {
            let h = Counted::new(input.build()?);
            let dir = if nonincreasing { Monotonicity::NonIncreasing } else { Monotonicity::NonDecreasing };
            let eps = alpha.map(|a| violation_eps(&h, a)).transpose()?;
            // a non-monotone function still has a violation to report
            let p = match estimate_dr_parameters(&h, dir) {
                Ok(p) => Some(p),
                Err(Error::NotMonotone { direction, element, set, marginal }) => {
                    eprintln!("not {direction}: H({element}|{set}) = {marginal}");
                    None
                }
                Err(e) => return Err(e),
            };
            let mut w = csv::Writer::from_writer(sink(output.as_deref())?);
            w.write_record(["d", "monotone", "alpha", "beta", "alpha_witness", "beta_witness", "skipped_alpha_pairs", "skipped_beta_pairs", "violation_alpha", "violation"])?;
            let witness = |x: &submin::exhaustive::DrWitness| format!("i={} A={{{}}} B={{{}}}", x.element, set_label(x.a), set_label(x.b));
            let field = |f: &dyn Fn(&submin::exhaustive::DrParameters) -> String| p.as_ref().map_or(String::new(), f);
            w.write_record([
                h.dim().to_string(),
                p.is_some().to_string(),
                field(&|p| p.alpha.to_string()),
                field(&|p| p.beta.to_string()),
                field(&|p| witness(&p.witness_alpha)),
                field(&|p| witness(&p.witness_beta)),
                field(&|p| p.skipped_alpha_pairs.to_string()),
                field(&|p| p.skipped_beta_pairs.to_string()),
                alpha.map_or(String::new(), |a| a.to_string()),
                eps.map_or(String::new(), |e| e.to_string()),
            ])?;
            w.flush()?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { 2 } else { 1 })
        }
    }
}
