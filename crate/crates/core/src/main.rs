//! Command-line entry point: seeded experiment batches from TOML configs,
//! CSV metrics, optional PGM frame dumps.

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use plasmo::batch::{run_batch, write_outputs, BatchOutcome, ExperimentSpec};
use plasmo::config::ExperimentFile;
use plasmo::experiments::Sim;
use plasmo::raster::render_frame;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "plasmo",
    about = "Virtual plasmodium simulator: centroid, arithmetic-mean and tracking experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shrink a shaped blob to approximate the shape centroid.
    Centroid(RunArgs),
    /// Read the arithmetic mean of an encoded series off the final blob.
    Mean(RunArgs),
    /// Track a moving target under +ve/-ve/alternating stimuli.
    Track(RunArgs),
    /// Run every experiment config (*.toml) in a directory.
    Sweep(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config file (a directory for `sweep`).
    #[arg(long)]
    config: PathBuf,
    /// Base seed; run i uses seed + i. Overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of seeded runs. Overrides the config.
    #[arg(long)]
    runs: Option<usize>,
    /// Output directory for CSVs and frames.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dump a PGM frame every K steps ("off" to disable).
    #[arg(long, default_value = "off", value_parser = parse_frames)]
    frames: Frames,
}

#[derive(Clone, Copy, Debug)]
enum Frames {
    Off,
    Every(u64),
}

fn parse_frames(s: &str) -> Result<Frames, String> {
    if s.eq_ignore_ascii_case("off") {
        return Ok(Frames::Off);
    }
    s.parse::<u64>()
        .ok()
        .filter(|&k| k > 0)
        .map(Frames::Every)
        .ok_or_else(|| format!("expected a positive step count or 'off', got '{s}'"))
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Centroid(args) => run_one(&args, Some("centroid")),
        Command::Mean(args) => run_one(&args, Some("mean")),
        Command::Track(args) => run_one(&args, Some("track")),
        Command::Sweep(args) => run_sweep(&args),
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

/// Output directory resolution: the environment override wins, then --out.
fn out_dir(args: &RunArgs) -> Option<PathBuf> {
    std::env::var_os("PLASMO_OUT_DIR")
        .map(PathBuf::from)
        .or_else(|| args.out.clone())
}

fn load_spec(path: &Path, expect_kind: Option<&str>) -> anyhow::Result<(ExperimentSpec, usize)> {
    let file = ExperimentFile::load(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let spec = file.resolve(base)?;
    if let Some(kind) = expect_kind {
        if spec.kind() != kind {
            bail!(
                "config {} declares experiment '{}' but the subcommand expects '{kind}'",
                path.display(),
                spec.kind()
            );
        }
    }
    Ok((spec, file.runs))
}

fn run_one(args: &RunArgs, expect_kind: Option<&str>) -> anyhow::Result<()> {
    let (spec, config_runs) = load_spec(&args.config, expect_kind)?;
    let runs = args.runs.unwrap_or(config_runs);
    let base_seed = args.seed.unwrap_or(spec.seed());
    let dir = out_dir(args);

    let outcome = execute(&spec, runs, base_seed, dir.as_deref(), args.frames)?;
    report(&spec, runs, base_seed, &outcome);
    if let Some(dir) = &dir {
        write_outputs(dir, spec.kind(), &outcome)?;
        eprintln!("wrote {} run traces to {}", outcome.runs.len(), dir.display());
    }
    Ok(())
}

fn run_sweep(args: &RunArgs) -> anyhow::Result<()> {
    let mut configs: Vec<PathBuf> = if args.config.is_dir() {
        std::fs::read_dir(&args.config)
            .with_context(|| format!("cannot read {}", args.config.display()))?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "toml"))
            .collect()
    } else {
        vec![args.config.clone()]
    };
    configs.sort();
    if configs.is_empty() {
        bail!("no .toml configs under {}", args.config.display());
    }

    let dir = out_dir(args);
    let mut rows = Vec::new();
    for path in &configs {
        let (spec, config_runs) = load_spec(path, None)?;
        let runs = args.runs.unwrap_or(config_runs);
        let base_seed = args.seed.unwrap_or(spec.seed());
        let sub = dir
            .as_ref()
            .map(|d| d.join(path.file_stem().unwrap().to_string_lossy().as_ref()));
        let outcome = execute(&spec, runs, base_seed, sub.as_deref(), args.frames)?;
        report(&spec, runs, base_seed, &outcome);
        if let Some(sub) = &sub {
            write_outputs(sub, spec.kind(), &outcome)?;
        }
        rows.push((
            path.file_name().unwrap().to_string_lossy().into_owned(),
            spec.kind().to_string(),
            outcome.summary.clone(),
        ));
    }

    if let Some(dir) = &dir {
        std::fs::create_dir_all(dir)?;
        let mut w = csv::Writer::from_path(dir.join("sweep_summary.csv"))?;
        w.write_record(["config", "experiment", "n_runs", "mae", "sigma_population", "pearson"])?;
        for (name, kind, s) in &rows {
            w.write_record([
                name.clone(),
                kind.clone(),
                s.n.to_string(),
                s.mae.to_string(),
                s.sigma.to_string(),
                s.pearson.map(|p| p.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
    }
    Ok(())
}

fn execute(
    spec: &ExperimentSpec,
    runs: usize,
    base_seed: u64,
    dir: Option<&Path>,
    frames: Frames,
) -> anyhow::Result<BatchOutcome> {
    match (frames, dir) {
        (Frames::Every(k), Some(dir)) => {
            // frame dumps force the stepping path; runs stay sequential
            let mut outcomes = Vec::with_capacity(runs);
            for i in 0..runs {
                let seeded = spec.with_seed(base_seed + i as u64);
                let frame_dir = dir.join(format!("frames_run{i:03}"));
                std::fs::create_dir_all(&frame_dir)?;
                let mut sim = seeded.make_sim()?;
                dump_frame(&sim, &frame_dir, 0)?;
                while sim.step() {
                    let step = sim.world().step_count();
                    if step % k == 0 {
                        dump_frame(&sim, &frame_dir, step)?;
                    }
                }
                dump_frame(&sim, &frame_dir, sim.world().step_count())?;
                outcomes.push(plasmo::batch::finish_sim(sim));
            }
            let summary = plasmo::batch::summarize(&outcomes)?;
            Ok(BatchOutcome {
                runs: outcomes,
                summary,
            })
        }
        _ => Ok(run_batch(spec, runs, base_seed)?),
    }
}

fn dump_frame(sim: &impl Sim, dir: &Path, step: u64) -> anyhow::Result<()> {
    let img = render_frame(sim.world());
    img.write_pgm_file(&dir.join(format!("frame_{step:06}.pgm")))?;
    Ok(())
}

fn report(spec: &ExperimentSpec, runs: usize, base_seed: u64, outcome: &BatchOutcome) {
    let s = &outcome.summary;
    println!(
        "{}: {} runs (seed {}..{}), MAE {:.3} px, sigma {:.3}{}",
        spec.kind(),
        runs,
        base_seed,
        base_seed + runs as u64 - 1,
        s.mae,
        s.sigma,
        s.pearson
            .map(|p| format!(", pearson {p:.3}"))
            .unwrap_or_default()
    );
}
