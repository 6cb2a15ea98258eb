mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use wassvar::experiments::{self, ExperimentReport, VerifyConfig};
use wassvar::frechet::{frechet_mean_with, MeanOptions};
use wassvar::interpolate::{convexity_certificate_with, displacement_path, linear_path, uniform_grid, MeasurePath};
use wassvar::measure::{DiscreteMeasure, MeasureEnsemble};
use wassvar::symmetry::{sandwich_report, GroupSpec, IsometryGroup};
use wassvar::transport::solve_ot;
use wassvar::wbarycenter::{jensen_gap, w2_barycenter_multistart, w2_barycenter_with, BarycenterOptions, EnsembleBarycenterResult};
use wassvar::{CutLocusPolicy, Tolerances};

use io::{csv_field, emit, parse_space, read_json};

#[derive(Parser)]
#[command(name = "wassvar", version, about = "Optimal transport, barycenters and variance certificates on model geometries")]
struct Cli {
    /// Space for inputs whose measures omit one (JSON object or shorthand like `sphere:2:6.283`).
    #[arg(long, global = true)]
    space: Option<String>,
    /// Seed for randomized experiments.
    #[arg(long, global = true, default_value_t = 20_240_601)]
    seed: u64,
    /// Tolerance override: barycenter decrease, Karcher residual or convexity threshold.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PathArg {
    Displacement,
    Linear,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal coupling and W2 distance between two measures.
    W2 { mu: PathBuf, nu: PathBuf },
    /// Displacement or linear interpolation with the variance along the path.
    Interp {
        mu: PathBuf,
        nu: PathBuf,
        #[arg(long, default_value_t = wassvar::interpolate::DEFAULT_GRID)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = PathArg::Displacement)]
        path: PathArg,
        /// Resolve cut-locus ties with the lexicographically largest direction.
        #[arg(long)]
        lex_ties: bool,
    },
    /// Fréchet mean and variance of a measure.
    Frechet { mu: PathBuf },
    /// Free-support W2 barycenter of an ensemble.
    Barycenter {
        ensemble: PathBuf,
        /// `heaviest`, `multistart`, or a measure JSON file.
        #[arg(long, default_value = "heaviest")]
        init: String,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        /// Also write the objective history as CSV.
        #[arg(long)]
        history: Option<PathBuf>,
    },
    /// Variance sandwich for the projections of a measure onto a group's invariant set.
    Symmetry { group: PathBuf, mu: PathBuf },
    /// Every example and property suite.
    Verify {
        #[arg(long, default_value_t = 100)]
        convexity_trials: usize,
        #[arg(long, default_value_t = 50)]
        jensen_trials: usize,
        #[arg(long, default_value_t = 50)]
        projection_trials: usize,
    },
    /// One named example: sphere, balloon, cylinder, curvature or reflection.
    Example {
        name: String,
        /// Balloon offset from the north pole, in (0, 1/4).
        #[arg(long)]
        eps: Option<f64>,
        /// Cylinder circumference.
        #[arg(long)]
        circumference: Option<f64>,
        /// Cylinder offset from the cut locus, in (0, c/4).
        #[arg(long)]
        delta: Option<f64>,
    },
}

/// What a subcommand produced and whether its assertions held.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, passed: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => match emit(cli.out.as_ref(), &o.text) {
            Ok(()) if o.passed => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let space = cli.space.as_deref().map(parse_space).transpose()?;
    let space = space.as_ref();
    match &cli.command {
        Command::W2 { mu, nu } => {
            let mu: DiscreteMeasure = read_json(mu, space)?;
            let nu: DiscreteMeasure = read_json(nu, space)?;
            let c = solve_ot(&mu, &nu)?;
            Ok(Outcome::ok(match cli.format {
                Format::Json => pretty(&json!({
                    "w2": c.cost().max(0.0).sqrt(),
                    "cost": c.cost(),
                    "entries": c.entries(),
                }))?,
                Format::Csv => {
                    let mut s = String::from("source,target,mass\n");
                    for e in c.entries() {
                        s.push_str(&format!("{},{},{}\n", e.source, e.target, e.mass));
                    }
                    s
                }
            }))
        }
        Command::Interp {
            mu,
            nu,
            grid,
            path,
            lex_ties,
        } => {
            let mu: DiscreteMeasure = read_json(mu, space)?;
            let nu: DiscreteMeasure = read_json(nu, space)?;
            if *grid < 2 {
                bail!("--grid needs at least 2 points");
            }
            let ts = uniform_grid(*grid);
            let p: MeasurePath = match path {
                PathArg::Displacement => {
                    let policy = if *lex_ties {
                        CutLocusPolicy::LexLargest
                    } else {
                        CutLocusPolicy::Error
                    };
                    displacement_path(&solve_ot(&mu, &nu)?, &ts, policy)?
                }
                PathArg::Linear => linear_path(&mu, &nu, &ts)?,
            };
            Ok(Outcome::ok(match cli.format {
                Format::Csv => p.to_csv(),
                Format::Json => {
                    let variances = p.map(wassvar::frechet::variance)?;
                    let cert = (variances.len() >= 3)
                        .then(|| convexity_certificate_with(&variances, cli.tol.unwrap_or(Tolerances::DEFAULT.convexity)))
                        .transpose()?;
                    pretty(&json!({"path": p, "variances": variances, "convexity": cert}))?
                }
            }))
        }
        Command::Frechet { mu } => {
            let mu: DiscreteMeasure = read_json(mu, space)?;
            let mut opts = MeanOptions::default();
            if let Some(t) = cli.tol {
                opts.tol = t;
            }
            let r = frechet_mean_with(&mu, &opts)?;
            Ok(Outcome::ok(match cli.format {
                Format::Json => pretty(&r)?,
                Format::Csv => {
                    let coords: Vec<String> = r.point.chart.iter().map(|x| x.to_string()).collect();
                    let tag = serde_json::to_value(r.point.tag)?;
                    format!(
                        "value,residual,iterations,multiplicity,tag,point\n{},{},{},{},{},{}\n",
                        r.value,
                        r.residual,
                        r.iterations,
                        r.multiplicity,
                        tag.as_str().unwrap_or(""),
                        csv_field(&coords.join(" "))
                    )
                }
            }))
        }
        Command::Barycenter {
            ensemble,
            init,
            max_iter,
            history,
        } => {
            let ens: MeasureEnsemble = read_json(ensemble, space)?;
            let opts = BarycenterOptions {
                max_iter: *max_iter,
                tol: cli.tol.unwrap_or(Tolerances::DEFAULT.barycenter_decrease),
            };
            let r = match init.as_str() {
                "heaviest" => w2_barycenter_with(&ens, &ens.entries()[ens.heaviest()].1, &opts)?,
                "multistart" => w2_barycenter_multistart(&ens, &opts)?,
                file => {
                    let start: DiscreteMeasure = read_json(&PathBuf::from(file), space)?;
                    w2_barycenter_with(&ens, &start, &opts)?
                }
            };
            let csv = history_csv(&r);
            if let Some(p) = history {
                std::fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(Outcome::ok(match cli.format {
                Format::Csv => csv,
                Format::Json => {
                    let jensen = jensen_gap(&ens, &r)?;
                    pretty(&json!({"result": r, "jensen": jensen}))?
                }
            }))
        }
        Command::Symmetry { group, mu } => {
            let spec: GroupSpec = read_json(group, None)?;
            let mu: DiscreteMeasure = read_json(mu, space.or(Some(&spec.space)))?;
            let g = IsometryGroup::from_spec(&spec)?;
            let rep = sandwich_report(&g, &mu)?;
            let passed = rep.passed();
            Ok(Outcome {
                text: match cli.format {
                    Format::Json => pretty(&json!({"order": g.len(), "report": rep}))?,
                    Format::Csv => format!(
                        "order,var_w,var_mu,var_l2,left_holds,right_holds,invariant\n{},{},{},{},{},{},{}\n",
                        g.len(),
                        rep.var_w,
                        rep.var_mu,
                        rep.var_l2,
                        rep.left_holds.map_or("n/a".into(), |b| b.to_string()),
                        rep.right_holds,
                        rep.invariant
                    ),
                },
                passed,
            })
        }
        Command::Verify {
            convexity_trials,
            jensen_trials,
            projection_trials,
        } => {
            let cfg = VerifyConfig {
                convexity_trials: *convexity_trials,
                jensen_trials: *jensen_trials,
                projection_trials: *projection_trials,
            };
            let reports = experiments::verify_all(cli.seed, cfg)?;
            reports_outcome(cli, &reports)
        }
        Command::Example {
            name,
            eps,
            circumference,
            delta,
        } => {
            let rep = match (name.as_str(), eps, circumference.or(*delta)) {
                ("balloon", Some(e), None) => experiments::run_balloon_example(*e)?,
                ("cylinder", None, _) => {
                    experiments::run_cylinder_counterexample(circumference.unwrap_or(1.0), delta.unwrap_or(0.1))?
                }
                (_, None, None) => experiments::run_example(name, cli.seed)?,
                _ => bail!("--eps applies to the balloon example, --circumference and --delta to the cylinder"),
            };
            reports_outcome(cli, std::slice::from_ref(&rep))
        }
    }
}

fn history_csv(r: &EnsembleBarycenterResult) -> String {
    let mut s = String::from("iteration,objective\n");
    for (i, v) in r.history.iter().enumerate() {
        s.push_str(&format!("{i},{v}\n"));
    }
    s
}

/// JSON or CSV of the reports; the plain-text table goes to the terminal.
fn reports_outcome(cli: &Cli, reports: &[ExperimentReport]) -> Result<Outcome> {
    let table: String = reports.iter().map(ExperimentReport::render).collect();
    let passed = reports.iter().all(ExperimentReport::passed);
    let summary = format!(
        "{} of {} reports passed\n",
        reports.iter().filter(|r| r.passed()).count(),
        reports.len()
    );
    if cli.out.is_some() {
        print!("{table}{summary}");
    } else {
        eprint!("{table}{summary}");
    }
    let text = match cli.format {
        Format::Json => pretty(&reports)?,
        Format::Csv => {
            let mut s = String::from("report,check,computed,relation,expected,tolerance,provenance,pass\n");
            for r in reports {
                for c in &r.checks {
                    let rel = serde_json::to_value(c.relation)?;
                    let prov = serde_json::to_value(c.provenance)?;
                    s.push_str(&format!(
                        "{},{},{},{},{},{},{},{}\n",
                        csv_field(&r.name),
                        csv_field(&c.name),
                        c.computed,
                        rel.as_str().unwrap_or(""),
                        c.expected,
                        c.tolerance,
                        prov.as_str().unwrap_or(""),
                        c.pass
                    ));
                }
            }
            s
        }
    };
    Ok(Outcome { text, passed })
}
