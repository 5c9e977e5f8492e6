use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wardplan::bench::{run_bench, BenchConfig};
use wardplan::heuristic::{solve_heuristic, HeuristicConfig};
use wardplan::instgen::presets::{preset_config, PRESETS};
use wardplan::instgen::{generate_batch, GenConfig, MIX_THREE_LEVELS};
use wardplan::lp::{
    export_full_mip, export_npa, export_pra, export_roster_bip, write_lp, write_mps, ExportOptions, LinearModel,
};
use wardplan::oracle::{enumerate_optimal, OracleLimits, DEFAULT_ORACLE_NODES};
use wardplan::report::{render_report, render_violations};
use wardplan::roster::{apportion, automatic_nurse_count, skills_for, solve_roster, Roster, RosterRequest};
use wardplan::{check_feasibility, evaluate, Assignment, Instance, ModelError, Solution, SolveError, Ward};

#[derive(Parser)]
#[command(name = "wardplan", version, about = "Patient-to-room and nurse-to-patient planning for hospital wards")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random instances from a preset or a generator config.
    Generate {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        weeks: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        /// Output file, or a directory when more than one instance is made.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a nurse roster.
    Roster {
        #[command(flatten)]
        roster: RosterArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Heuristic)]
        method: MethodArg,
        /// Accepted for uniformity; both methods are deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_triples: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_ORACLE_NODES)]
        max_nodes: u64,
        #[arg(long)]
        no_timestamps: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a solution.
    Evaluate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a linear model for an external solver.
    Export {
        #[arg(long, value_enum, default_value_t = ModelArg::Full)]
        model: ModelArg,
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Room plan (solution file) fixed in the nurse model.
        #[arg(long)]
        rooms: Option<PathBuf>,
        #[command(flatten)]
        roster: RosterArgs,
        #[arg(long, value_enum, default_value_t = FormatArg::Lp)]
        format: FormatArg,
        /// Leave out the age-ordering rows.
        #[arg(long)]
        no_age_order: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search on tiny instances.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORACLE_NODES)]
        max_nodes: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the heuristic over a grid of presets, horizons and seeds.
    Bench {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "preset")]
        presets: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        weeks: Option<Vec<usize>>,
        /// Number of seeds, starting at `--seed`.
        #[arg(long)]
        seeds: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        no_timestamps: bool,
        /// Directory for runs.csv, summary.csv and bench.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a readable plan.
    Report {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A roster request, either from a file or from flags.
#[derive(Args)]
struct RosterArgs {
    /// Roster request JSON.
    #[arg(long, alias = "config")]
    request: Option<PathBuf>,
    #[arg(long)]
    days: Option<usize>,
    /// Nurses needed on every shift per skill level, e.g. `1:0,2:2,3:1`.
    #[arg(long)]
    per_shift: Option<String>,
    /// Shifts per nurse over the whole horizon.
    #[arg(long, default_value_t = 5)]
    max_shifts: usize,
    #[arg(long, conflicts_with = "auto")]
    nurses: Option<usize>,
    /// Smallest staff that admits a roster.
    #[arg(long)]
    auto: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Heuristic,
    Oracle,
}

#[derive(Serialize)]
struct RosterOutput<'a> {
    nurse_skills: &'a [u8],
    shifts: &'a [Vec<usize>],
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Full,
    Pra,
    Npa,
    Roster,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Lp,
    Mps,
}

enum Failure {
    Infeasible(String),
    Budget(String),
    BadInput(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Infeasible(_) => 2,
            Failure::Budget(_) => 3,
            Failure::BadInput(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Infeasible(m) | Failure::Budget(m) | Failure::BadInput(m) => m,
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let msg = e.to_string();
        match e {
            SolveError::Infeasible { .. } | SolveError::InfeasibleSolution(_) | SolveError::RosterInfeasible { .. } => {
                Failure::Infeasible(msg)
            }
            SolveError::BudgetExceeded { .. } => Failure::Budget(msg),
            SolveError::Model(_) | SolveError::Mismatch(_) | SolveError::Config(_) => Failure::BadInput(msg),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure::BadInput(e.to_string())
    }
}

fn bad(msg: impl Into<String>) -> Failure {
    Failure::BadInput(msg.into())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| bad(format!("{}: {e}", path.display()))),
        None => {
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))
}

fn load_ward(path: &Path) -> Result<(Instance, Ward), Failure> {
    let inst = Instance::load(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    let ward = Ward::compile(&inst)?;
    Ok((inst, ward))
}

fn instance_ref(inst: &Instance, path: &Path) -> String {
    inst.name.clone().unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default())
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn parse_per_shift(text: &str) -> Result<[u32; 3], Failure> {
    let mut need = [0u32; 3];
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (level, count) = part.split_once(':').ok_or_else(|| bad(format!("expected level:count, got `{part}`")))?;
        let level: usize = level.trim().parse().map_err(|_| bad(format!("bad skill level `{level}`")))?;
        if !(1..=3).contains(&level) {
            return Err(bad(format!("skill level {level} outside 1..=3")));
        }
        need[level - 1] = count.trim().parse().map_err(|_| bad(format!("bad count `{count}`")))?;
    }
    Ok(need)
}

/// Builds the request; with `--auto` the staff search already yields a roster.
fn roster_request(args: &RosterArgs) -> Result<(RosterRequest, Option<Roster>), Failure> {
    let mut req = match &args.request {
        Some(path) => read_json(path)?,
        None => {
            let days = args.days.ok_or_else(|| bad("--days or --request is required"))?;
            let need = parse_per_shift(args.per_shift.as_deref().ok_or_else(|| bad("--per-shift is required"))?)?;
            let skills = args.nurses.map(|n| skills_for(apportion(n, MIX_THREE_LEVELS))).unwrap_or_default();
            if args.nurses.is_none() && !args.auto {
                return Err(bad("give --nurses N or --auto"));
            }
            RosterRequest::uniform(days, skills, [need; 3], args.max_shifts)
        }
    };
    if args.seed.is_some() {
        req.seed = args.seed;
    }
    if !args.auto {
        return Ok((req, None));
    }
    let (_, skills, roster) = automatic_nurse_count(&req, MIX_THREE_LEVELS)?;
    req.nurse_skills = skills;
    Ok((req, Some(roster)))
}

fn generate(
    preset: Option<String>,
    config: Option<PathBuf>,
    seed: u64,
    weeks: Option<usize>,
    count: Option<usize>,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let mut cfg: GenConfig = match (preset, config) {
        (Some(_), Some(_)) => return Err(bad("use either --preset or --config")),
        (Some(name), None) => preset_config(&name)
            .ok_or_else(|| bad(format!("unknown preset `{name}`; known: {}", PRESETS.join(", "))))?,
        (None, Some(path)) => read_json(&path)?,
        (None, None) => GenConfig::default(),
    };
    if let Some(w) = weeks {
        cfg.weeks = w;
    }
    if let Some(c) = count {
        cfg.num_instances = c;
    }
    let batch = generate_batch(&cfg, seed)?;
    if batch.len() == 1 {
        return emit(out.as_deref(), &(batch[0].to_json() + "\n"));
    }
    let dir = out.ok_or_else(|| bad("--out <dir> is required for more than one instance"))?;
    fs::create_dir_all(&dir).map_err(|e| bad(format!("{}: {e}", dir.display())))?;
    let stem = cfg.name.clone().unwrap_or_else(|| "instance".into());
    for (k, inst) in batch.iter().enumerate() {
        let path = dir.join(format!("{stem}-{}.json", seed.wrapping_add(k as u64)));
        inst.save(&path)?;
    }
    Ok(())
}

fn export(
    model: ModelArg,
    instance: Option<PathBuf>,
    rooms: Option<PathBuf>,
    roster: RosterArgs,
    format: FormatArg,
    no_age_order: bool,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let opts = ExportOptions { age_order_rows: !no_age_order };
    let (lp, name): (LinearModel, String) = if let ModelArg::Roster = model {
        let (req, _) = roster_request(&roster)?;
        (export_roster_bip(&req), "roster".into())
    } else {
        let path = instance.ok_or_else(|| bad("--instance is required"))?;
        let (inst, ward) = load_ward(&path)?;
        let name = instance_ref(&inst, &path);
        let lp = match model {
            ModelArg::Full => export_full_mip(&ward, opts)?,
            ModelArg::Pra => export_pra(&ward, opts)?,
            ModelArg::Npa => {
                let rooms = rooms.ok_or_else(|| bad("--rooms is required for the nurse model"))?;
                let sol = Solution::load(&rooms)?;
                export_npa(&ward, &Assignment::from_solution(&ward, &sol)?, opts)?
            }
            ModelArg::Roster => unreachable!("handled above"),
        };
        (lp, name)
    };
    let text = match format {
        FormatArg::Lp => write_lp(&lp),
        FormatArg::Mps => write_mps(&lp, if name.is_empty() { "wardplan" } else { &name }),
    };
    emit(out.as_deref(), &text)
}

#[allow(clippy::too_many_arguments)]
fn bench(
    config: Option<PathBuf>,
    presets: Vec<String>,
    weeks: Option<Vec<usize>>,
    seeds: Option<u64>,
    seed: u64,
    jobs: Option<usize>,
    no_timestamps: bool,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let mut cfg: BenchConfig = match config {
        Some(path) => read_json(&path)?,
        None => BenchConfig::default(),
    };
    if !presets.is_empty() {
        cfg.presets = presets;
    }
    if let Some(w) = weeks {
        cfg.weeks = w;
    }
    if let Some(n) = seeds {
        cfg.seeds = (seed..seed + n).collect();
    }
    if let Some(j) = jobs {
        cfg.jobs = j;
    }
    cfg.no_timestamps |= no_timestamps;
    if let Some(p) = cfg.presets.iter().find(|p| preset_config(p).is_none()) {
        return Err(bad(format!("unknown preset `{p}`")));
    }
    let report = run_bench(&cfg);
    match out {
        Some(dir) => {
            fs::create_dir_all(&dir).map_err(|e| bad(format!("{}: {e}", dir.display())))?;
            for (file, text) in [
                ("runs.csv", report.runs_csv()),
                ("summary.csv", report.summary_csv()),
                ("bench.json", report.to_json() + "\n"),
            ] {
                fs::write(dir.join(file), text).map_err(|e| bad(format!("{file}: {e}")))?;
            }
        }
        None => emit(None, &report.summary_csv())?,
    }
    for r in &report.runtime_ratios {
        if let Some(x) = r.ratio {
            eprintln!("{}: {}wk/{}wk runtime ratio {x:.2}", r.preset, r.long_weeks, r.short_weeks);
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { preset, config, seed, weeks, count, out } => {
            generate(preset, config, seed, weeks, count, out)
        }
        Command::Roster { roster, out } => {
            let (req, found) = roster_request(&roster)?;
            let roster = match found {
                Some(r) => r,
                None => solve_roster(&req)?,
            };
            let view = RosterOutput { nurse_skills: &req.nurse_skills, shifts: &roster.shifts };
            emit(out.as_deref(), &(serde_json::to_string_pretty(&view).expect("roster serializes") + "\n"))
        }
        Command::Solve { instance, method, seed: _, max_triples, max_nodes, no_timestamps, out } => {
            let (inst, ward) = load_ward(&instance)?;
            let start = Instant::now();
            let (assignment, breakdown) = match method {
                MethodArg::Heuristic => {
                    let res = solve_heuristic(&ward, &HeuristicConfig { max_triples_per_patient: max_triples })?;
                    (res.assignment, res.breakdown)
                }
                MethodArg::Oracle => {
                    let res = enumerate_optimal(&ward, OracleLimits { max_nodes, ..OracleLimits::default() })?;
                    (res.assignment, res.breakdown)
                }
            };
            let millis = start.elapsed().as_secs_f64() * 1e3;
            eprint!("{}", breakdown.to_table());
            if !no_timestamps {
                eprintln!("wall-clock {millis:.1} ms");
            }
            emit(out.as_deref(), &(assignment.to_solution(&ward, instance_ref(&inst, &instance)).to_json() + "\n"))
        }
        Command::Evaluate { instance, solution, out } => {
            let (_, ward) = load_ward(&instance)?;
            let sol = Solution::load(&solution)?;
            let feas = check_feasibility(&ward, &sol)?;
            if !feas.is_feasible() {
                eprint!("{}", render_violations(&feas));
                return Err(Failure::Infeasible(format!("{} hard-constraint violation(s)", feas.violations.len())));
            }
            let b = evaluate(&ward, &Assignment::from_solution(&ward, &sol)?);
            let json = serde_json::to_string_pretty(&b).expect("breakdown serializes");
            emit(out.as_deref(), &format!("{json}\n\n{}", with_newline(b.to_table())))
        }
        Command::Export { model, instance, rooms, roster, format, no_age_order, out } => {
            export(model, instance, rooms, roster, format, no_age_order, out)
        }
        Command::Oracle { instance, max_nodes, out } => {
            let (inst, ward) = load_ward(&instance)?;
            let res = enumerate_optimal(&ward, OracleLimits { max_nodes, ..OracleLimits::default() })?;
            eprintln!("nodes {} leaves {}", res.nodes, res.leaves);
            eprint!("{}", res.breakdown.to_table());
            emit(out.as_deref(), &(res.assignment.to_solution(&ward, instance_ref(&inst, &instance)).to_json() + "\n"))
        }
        Command::Bench { config, presets, weeks, seeds, seed, jobs, no_timestamps, out } => {
            bench(config, presets, weeks, seeds, seed, jobs, no_timestamps, out)
        }
        Command::Report { instance, solution, out } => {
            let (_, ward) = load_ward(&instance)?;
            let sol = Solution::load(&solution)?;
            let feas = check_feasibility(&ward, &sol)?;
            if !feas.is_feasible() {
                emit(out.as_deref(), &render_violations(&feas))?;
                return Err(Failure::Infeasible(format!("{} hard-constraint violation(s)", feas.violations.len())));
            }
            emit(out.as_deref(), &render_report(&ward, &sol)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
