use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use capjob::{
    instance_id, read_rows_from, read_solution, run_grid, run_solver, summarize, write_solution, BenchOptions,
    ExperimentRow, GridSpec, InstanceFile, Meta, RowWriter, SolverKind, SolverSettings,
};
use capjob_core::{
    build_model, compute_time_windows, export_lp, generate_instance, validate_schedule, CapFactor, GenParams, IntRange,
    JobOrdering,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "capjob", version, about = "Order acceptance in capacitated job shops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one instance from flags, or every instance of a grid spec.
    Generate(GenerateArgs),
    /// Solve an instance, write the solution and optionally append a CSV row.
    Solve(SolveArgs),
    /// Write the time-indexed model of an instance in LP format.
    Export(ExportArgs),
    /// Check a solution; exits 0 when feasible and 1 otherwise.
    Validate(ValidateArgs),
    /// Run a grid spec and print the summary tables.
    Bench(BenchArgs),
    /// Print the summary tables of an existing results CSV.
    Summarize(SummarizeArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Grid spec JSON; when given, all its instances are written to --out-dir.
    #[arg(long, conflicts_with_all = ["n", "out"])]
    grid: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 5)]
    m: usize,
    /// Window slack added to release plus total processing time.
    #[arg(long, default_value_t = 10)]
    w: u32,
    /// Capacity factor.
    #[arg(long, default_value_t = 1.0)]
    f: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Unit usages and unit capacities.
    #[arg(long)]
    job_shop: bool,
    #[arg(long, num_args = 2, value_names = ["LOW", "HIGH"], default_values_t = [1, 5])]
    proc_range: Vec<u32>,
    #[arg(long, num_args = 2, value_names = ["LOW", "HIGH"], default_values_t = [20, 30])]
    usage_range: Vec<u32>,
    #[arg(long, num_args = 2, value_names = ["LOW", "HIGH"], default_values_t = [1, 20])]
    release_range: Vec<u32>,
    /// Output file for a single instance.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, default_value = "exact")]
    solver: SolverKind,
    /// Solution file; defaults to `<instance stem>.<solver>.solution.json` next to the instance.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Results CSV to append a row to.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Identifier recorded in the row; defaults to the instance file stem.
    #[arg(long)]
    id: Option<String>,
    #[arg(long, default_value_t = 1_000_000)]
    max_nodes: u64,
    #[arg(long, default_value_t = 1200.0)]
    time_limit: f64,
    /// Skip the heuristic incumbent in the exact solver.
    #[arg(long)]
    no_warm_start: bool,
    #[arg(long, default_value_t = 50)]
    ls_iterations: u32,
    /// due-date, release, workload or index.
    #[arg(long, default_value = "due-date")]
    ordering: String,
}

#[derive(Args)]
struct ExportArgs {
    instance: PathBuf,
    /// Defaults to the instance path with extension `.lp`.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    instance: PathBuf,
    solution: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    grid: PathBuf,
    /// Results CSV, overwritten.
    #[arg(long, default_value = "results.csv")]
    csv: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Also write every generated instance here.
    #[arg(long)]
    instances_dir: Option<PathBuf>,
    /// Add the table by window slack.
    #[arg(long)]
    by_w: bool,
}

#[derive(Args)]
struct SummarizeArgs {
    csv: PathBuf,
    #[arg(long)]
    by_w: bool,
}

fn range(v: &[u32]) -> IntRange {
    IntRange::new(v[0], v[1])
}

fn generate(args: GenerateArgs) -> Result<()> {
    if let Some(grid) = &args.grid {
        let spec = GridSpec::read(grid)?;
        for cell in spec.cells() {
            let instance = generate_instance(&cell.params).map_err(|e| anyhow::anyhow!("{}: {e}", cell.id))?;
            let path = args.out_dir.join(format!("{}.json", cell.id));
            InstanceFile { instance, meta: Some(Meta::from_params(&cell.params)) }.write(&path)?;
            println!("{}", path.display());
        }
        return Ok(());
    }
    let Some(n) = args.n else { bail!("either --n or --grid is required") };
    let Some(cap_factor) = CapFactor::from_f64(args.f) else { bail!("capacity factor must be positive, got {}", args.f) };
    let params = GenParams {
        num_jobs: n,
        num_machines: args.m,
        proc_range: range(&args.proc_range),
        usage_range: range(&args.usage_range),
        release_range: range(&args.release_range),
        window: args.w,
        cap_factor,
        job_shop: args.job_shop,
        seed: args.seed,
    };
    let instance = generate_instance(&params).map_err(|e| anyhow::anyhow!("invalid parameters: {e}"))?;
    let id = instance_id(n, args.m, args.w, (!args.job_shop).then_some(cap_factor), args.seed);
    let path = args.out.unwrap_or_else(|| args.out_dir.join(format!("{id}.json")));
    InstanceFile { instance, meta: Some(Meta::from_params(&params)) }.write(&path)?;
    println!("{}", path.display());
    Ok(())
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "instance".into())
}

fn solve(args: SolveArgs) -> Result<()> {
    let file = InstanceFile::read(&args.instance)?;
    let windows = compute_time_windows(&file.instance);
    let Some(ordering) = JobOrdering::from_name(&args.ordering) else { bail!("unknown ordering '{}'", args.ordering) };
    let mut settings = SolverSettings::default();
    settings.limits.max_nodes = args.max_nodes;
    settings.limits.time_limit_secs = args.time_limit;
    settings.limits.warm_start = !args.no_warm_start;
    settings.heuristic.iterations = args.ls_iterations;
    settings.heuristic.ordering = ordering;

    let outcome = run_solver(&file.instance, &windows, args.solver, &settings);
    let id = args.id.unwrap_or_else(|| stem(&args.instance));
    let row = ExperimentRow::new(&id, &file.instance, file.meta.as_ref(), args.solver, &outcome);
    let out = args.out.unwrap_or_else(|| {
        args.instance.with_file_name(format!("{}.{}.solution.json", stem(&args.instance), args.solver.name()))
    });
    write_solution(&out, &outcome.solution)?;
    if let Some(csv) = &args.csv {
        let mut writer = RowWriter::append(csv).with_context(|| csv.display().to_string())?;
        writer.write(&row)?;
    }
    println!("solution: {}", out.display());
    println!(
        "throughput: {} of {}  upper_bound: {}  gap: {:.4}  optimal: {}  runtime_ms: {:.2}",
        row.throughput, row.n, row.upper_bound, row.gap, row.optimal, row.runtime_ms
    );
    if let Some(nodes) = row.node_count {
        println!("nodes: {nodes}");
    }
    Ok(())
}

fn export(args: ExportArgs) -> Result<()> {
    let file = InstanceFile::read(&args.instance)?;
    let windows = compute_time_windows(&file.instance);
    let model = build_model(&file.instance, &windows);
    let comments = vec![
        format!("capjob model of {}", args.instance.display()),
        format!("jobs {} machines {} horizon {}", model.num_jobs(), model.num_machines(), model.horizon()),
    ];
    let lp = export_lp(&model, &comments);
    let out = args.out.unwrap_or_else(|| args.instance.with_extension("lp"));
    capjob::io::write_string(&out, &lp.text)?;
    println!("model: {}", out.display());
    println!("variables: {} (x: {}, z: {})", model.num_vars(), model.num_x_vars(), model.num_z_vars());
    println!(
        "rows: {} (assignment: {}, precedence: {}, capacity: {}, reject: {})",
        model.rows().len(),
        model.num_assignment_rows(),
        model.num_precedence_rows(),
        model.num_capacity_rows(),
        model.num_reject_rows()
    );
    println!("empty capacity rows not written: {}", lp.dropped_empty_rows);
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<bool> {
    let file = InstanceFile::read(&args.instance)?;
    let solution = read_solution(&args.solution)?;
    let windows = compute_time_windows(&file.instance);
    let report = validate_schedule(&file.instance, &windows, &solution);
    print!("{report}");
    Ok(report.is_feasible())
}

fn bench(args: BenchArgs) -> Result<()> {
    let spec = GridSpec::read(&args.grid)?;
    let mut writer = RowWriter::create(&args.csv).with_context(|| args.csv.display().to_string())?;
    let opts = BenchOptions { workers: args.workers, instances_dir: args.instances_dir };
    let mut write_error = None;
    let rows = run_grid(&spec, &opts, |row| {
        if let Err(e) = writer.write(row) {
            write_error.get_or_insert(e);
        }
    });
    if let Some(e) = write_error {
        bail!("{}: {e}", args.csv.display());
    }
    eprintln!("{} rows written to {}", rows.len(), args.csv.display());
    print!("{}", summarize(&rows).render(args.by_w));
    Ok(())
}

fn run() -> Result<bool> {
    match Cli::parse().command {
        Command::Generate(a) => generate(a)?,
        Command::Solve(a) => solve(a)?,
        Command::Export(a) => export(a)?,
        Command::Validate(a) => return validate(a),
        Command::Bench(a) => bench(a)?,
        Command::Summarize(a) => {
            let rows = read_rows_from(&a.csv).with_context(|| a.csv.display().to_string())?;
            print!("{}", summarize(&rows).render(a.by_w));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
