use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chessbisect::arrangement::{signature, FamilySpec};
use chessbisect::config::ColoredPointConfig;
use chessbisect::deform::{random_path, DeformationPath, verify_parity_invariance};
use chessbisect::error::{Error, Result};
use chessbisect::io::{parse_problem, ProblemFile, ProblemInput};
use chessbisect::linalg::Subspace;
use chessbisect::measures::converge::{convergence_run, ConvergeOptions};
use chessbisect::measures::counter::{certify_no_bisection_fixed_directions, counterexample_config, is_well_separated};
use chessbisect::measures::lift::{circles_bisection, CirclesOptions};
use chessbisect::measures::{sample_odd, MeasureSpec};
use chessbisect::oracle::{enumerate_bisectors, precheck_generic};
use chessbisect::parity::{compute_n, table_text, stirling_parity_table};
use chessbisect::rat::{self, Rat};
use chessbisect::solve::{solve, Engine, SolveOptions};
use chessbisect::svg::{render_parity_table, render_svg};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Default sample parameter when a measure input is turned into points.
const DEFAULT_SAMPLE_R: usize = 20;
/// Default point count up to which deformation replays are checked by enumeration.
const DEFAULT_DEFORM_ORACLE_POINTS: u64 = 40;

#[derive(Parser)]
#[command(name = "chessbisect", version, about = "Exact chessboard bisections by families of parallel hyperplanes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Random seed; overrides the problem file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Oracle cross-check bound; overrides the problem file.
    #[arg(long = "oracle-bound", global = true)]
    oracle_bound: Option<u64>,
    /// Write the event log to this file as JSON.
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    /// Write the main output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    PathFollowing,
    Tracked,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::PathFollowing => Engine::PathFollowing,
            EngineArg::Tracked => Engine::Tracked,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Count N of bisecting classes and its parity, or the parity table of one family.
    Parity {
        #[arg(long, required_unless_present = "table", conflicts_with = "table")]
        problem: Option<PathBuf>,
        /// Table of S(d+k-1, k) mod 2 for d <= D and k <= K; --out writes it as SVG.
        #[arg(long, num_args = 2, value_names = ["D", "K"])]
        table: Option<Vec<usize>>,
    },
    /// Find one bisecting arrangement.
    Solve {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, value_enum, default_value = "path-following")]
        engine: EngineArg,
    },
    /// List every bisecting arrangement by exhaustive search.
    Enumerate {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Replay a deformation and report the tracked counts.
    Deform {
        /// Families, and the base points when no path is given.
        #[arg(long)]
        problem: PathBuf,
        /// Deformation path JSON with `base` and `moves`; random when absent.
        #[arg(long)]
        path: Option<PathBuf>,
        /// Number of random moves when no path is given.
        #[arg(long, default_value_t = 6)]
        moves: usize,
        /// Fail unless parity, deltas and oracle agreement all hold.
        #[arg(long)]
        verify: bool,
    },
    /// Bisect measures through samples of growing size.
    Converge {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [10, 40, 160])]
        r: Vec<usize>,
    },
    /// Bisect seven planar measures by two concentric circles and two lines.
    Lift {
        /// JSON list of seven planar measures.
        #[arg(long)]
        measures: PathBuf,
        #[arg(long = "sample-r", default_value_t = DEFAULT_SAMPLE_R)]
        sample_r: usize,
    },
    /// Segment measures that no arrangement with fixed directions bisects.
    Counterexample {
        #[arg(long)]
        d: usize,
        /// Hyperplane counts, one per direction.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        /// Directions as `x,y;x,y`; defaults to the coordinate axes.
        #[arg(long)]
        directions: Option<String>,
        /// Decide bisectability exactly.
        #[arg(long)]
        certify: bool,
    },
    /// Solve a planar problem and draw the coloring as SVG.
    Render {
        #[arg(long)]
        problem: PathBuf,
    },
}

fn load(path: &Path) -> Result<(ProblemFile, Vec<FamilySpec>)> {
    let problem = parse_problem(path)?;
    let specs = problem.specs()?;
    Ok((problem, specs))
}

/// The problem's points, sampling non-atomic measures.
fn points(problem: &ProblemFile, seed: u64) -> Result<ColoredPointConfig> {
    match &problem.input {
        ProblemInput::Colors(_) => problem.config(),
        ProblemInput::Measures(ms) => {
            let r = problem.options.sample_r.unwrap_or(DEFAULT_SAMPLE_R);
            let colors = ms
                .iter()
                .enumerate()
                .map(|(i, m)| match m {
                    MeasureSpec::Points { points, .. } => Ok(points.clone()),
                    _ => sample_odd(m, r, seed.wrapping_add(1 + i as u64)),
                })
                .collect::<Result<Vec<_>>>()?;
            ColoredPointConfig::new(problem.dimension, colors)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json(out: &Option<PathBuf>, value: &Value) -> Result<()> {
    emit(out, &format!("{}\n", serde_json::to_string_pretty(value).expect("json values serialize")))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn solve_options(cli: &Cli, problem: &ProblemFile, engine: Engine) -> SolveOptions {
    let mut options = SolveOptions { engine, seed: seed(cli, problem), ..SolveOptions::default() };
    if let Some(b) = cli.oracle_bound.or(problem.options.oracle_bound) {
        options.oracle_budget = b as f64;
    }
    options
}

fn seed(cli: &Cli, problem: &ProblemFile) -> u64 {
    cli.seed.or(problem.options.seed).unwrap_or(0)
}

fn parse_directions(text: &str, d: usize) -> Result<Vec<Vec<Rat>>> {
    text.split(';')
        .map(|v| {
            let v: Vec<Rat> = v.split(',').map(|x| rat::parse(x.trim())).collect::<Result<_>>()?;
            if v.len() != d {
                return Err(Error::Dimension { expected: d, got: v.len() });
            }
            Ok(v)
        })
        .collect()
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Parity { problem, table } => {
            if let Some(t) = table {
                let grid = stirling_parity_table(t[0], t[1]);
                if let Some(path) = &cli.out {
                    std::fs::write(path, render_parity_table(&grid))?;
                }
                let text = table_text(&grid);
                print!("{}", serde_json::to_string_pretty(&json!({ "d_max": t[0], "k_max": t[1], "rows": grid, "text": text })).expect("json"));
                println!();
                return Ok(());
            }
            let (_, specs) = load(problem.as_deref().expect("clap requires a problem"))?;
            let report = compute_n(&signature(&specs)?)?;
            emit_json(
                &cli.out,
                &json!({
                    "n": report.n.to_string(),
                    "n_mod2": report.n_mod2,
                    "total": report.total,
                    "parts": report.parts,
                    "multinomial": report.multinomial.to_string(),
                    "stirling": report.stirling.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "group_order": report.group_order.to_string(),
                    "closed_form_mod2": report.closed_form_mod2,
                }),
            )
        }
        Command::Solve { problem, engine } => {
            let (problem, specs) = load(problem)?;
            let options = solve_options(cli, &problem, (*engine).into());
            let config = points(&problem, options.seed)?;
            let mut solution = solve(&config, &specs, &options)?;
            let events = std::mem::take(&mut solution.events);
            if let Some(path) = &cli.trace {
                std::fs::write(path, serde_json::to_string_pretty(&events).expect("events serialize"))?;
            }
            let mut value = to_value(&solution);
            value["events"] = json!(events.len());
            value["hyperplanes"] = to_value(&solution.arrangement.hyperplanes());
            emit_json(&cli.out, &value)
        }
        Command::Enumerate { problem } => {
            let (problem, specs) = load(problem)?;
            let config = problem.config()?;
            precheck_generic(&config, &specs)?;
            let all = enumerate_bisectors(&config, &specs);
            let bisectors: Vec<Value> = all
                .iter()
                .map(|b| json!({ "assignment": b.assignment.color_notation(), "arrangement": to_value(&b.arrangement) }))
                .collect();
            let n = compute_n(&signature(&specs)?)?;
            emit_json(&cli.out, &json!({ "count": all.len(), "n": n.n.to_string(), "bisectors": bisectors }))
        }
        Command::Deform { problem, path, moves, verify } => {
            let (problem, specs) = load(problem)?;
            let seed = seed(cli, &problem);
            let path = match path {
                Some(p) => {
                    let path: DeformationPath = serde_json::from_str(&std::fs::read_to_string(p)?).map_err(|e| Error::Parse(e.to_string()))?;
                    path.base.validate()?;
                    path
                }
                None => {
                    let config = problem.config()?;
                    let extent = config
                        .colors
                        .iter()
                        .flatten()
                        .flatten()
                        .map(|x| rat::to_f64(x).abs())
                        .fold(1.0, f64::max);
                    let range = (extent * 1024.0).ceil().min(1e12) as i64;
                    random_path(&config, *moves, range, seed)
                }
            };
            let bound = cli.oracle_bound.or(problem.options.oracle_bound).unwrap_or(DEFAULT_DEFORM_ORACLE_POINTS);
            let report = verify_parity_invariance(&path, &specs, bound as usize, seed)?;
            if let Some(trace) = &cli.trace {
                std::fs::write(trace, serde_json::to_string_pretty(&report.events).expect("events serialize"))?;
            }
            let mut value = to_value(&report);
            value["events"] = json!(report.events.len());
            emit_json(&cli.out, &value)?;
            if *verify && !(report.parity_constant && report.deltas_even && report.oracle_agrees) {
                return Err(Error::Invariant(format!(
                    "parity constant {}, deltas even {}, oracle agrees {}",
                    report.parity_constant, report.deltas_even, report.oracle_agrees
                )));
            }
            Ok(())
        }
        Command::Converge { problem, r } => {
            let (problem, specs) = load(problem)?;
            let mut options = ConvergeOptions::default();
            if let Some(m) = &problem.options.perturb_magnitude {
                options.perturb_magnitude = m.clone();
            }
            if let Some(b) = cli.oracle_bound.or(problem.options.oracle_bound) {
                options.solve.oracle_budget = b as f64;
            }
            let report = convergence_run(&problem.measures(), &specs, r, seed(cli, &problem), &options)?;
            emit_json(&cli.out, &to_value(&report))
        }
        Command::Lift { measures, sample_r } => {
            let measures: Vec<MeasureSpec> =
                serde_json::from_str(&std::fs::read_to_string(measures)?).map_err(|e| Error::Parse(e.to_string()))?;
            for m in &measures {
                m.validate()?;
            }
            let mut options = CirclesOptions { seed: cli.seed.unwrap_or(0), sample_r: *sample_r, ..CirclesOptions::default() };
            if let Some(b) = cli.oracle_bound {
                options.solve.oracle_budget = b as f64;
            }
            let report = circles_bisection(&measures, &options)?;
            emit_json(&cli.out, &to_value(&report))
        }
        Command::Counterexample { d, k, directions, certify } => {
            let dirs = match directions {
                Some(text) => parse_directions(text, *d)?,
                None => (0..k.len().min(*d))
                    .map(|i| (0..*d).map(|j| rat::int(i64::from(i == j))).collect())
                    .collect(),
            };
            if dirs.len() != k.len() {
                return Err(Error::InvalidInput(format!("{} directions for {} hyperplane counts", dirs.len(), k.len())));
            }
            let specs = dirs
                .into_iter()
                .zip(k)
                .map(|(v, &k)| FamilySpec::new(Subspace::from_basis(*d, vec![v])?, k))
                .collect::<Result<Vec<_>>>()?;
            let ce = counterexample_config(&specs, cli.seed.unwrap_or(0))?;
            let mut value = json!({ "counterexample": to_value(&ce), "well_separated": is_well_separated(&specs, &ce)? });
            if *certify {
                value["certification"] = to_value(&certify_no_bisection_fixed_directions(&specs, &ce.measures)?);
            }
            emit_json(&cli.out, &value)
        }
        Command::Render { problem } => {
            let (problem, specs) = load(problem)?;
            let options = solve_options(cli, &problem, Engine::PathFollowing);
            let config = points(&problem, options.seed)?;
            let solution = solve(&config, &specs, &options)?;
            emit(&cli.out, &render_svg(&config, &solution.arrangement)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ParityZeroNoWitness(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
