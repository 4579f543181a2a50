mod args;
mod svg;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use disco_core::benchmark::{
    aggregate, factors_for, mood_all_pairs, read_results_csv, run_benchmark, run_simulation, timing_study,
    write_mood_csv, write_results_csv, write_summary_csv, TimingConfig,
};
use disco_core::discrepancy::{compute, MeasureKind};
use disco_core::distributions::InputDistribution;
use disco_core::sampling::{generate, SamplerKind};
use disco_core::sensitivity::{discrepancy_importance, jansen_total_order, savage_scores};
use disco_core::{Error, Matrix};

use args::{AnalyzeArgs, BenchmarkCommand, Cli, Command, DiscrepancyArgs, Method, RunArgs, SampleArgs, SensitivityArgs, TimingArgs};

fn main() -> ExitCode {
    let argv = match args::expand_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Usage(_) => 2,
                _ => 1,
            })
        }
    }
}

fn run(command: Command) -> disco_core::Result<()> {
    match command {
        Command::Sample(a) => cmd_sample(a),
        Command::Discrepancy(a) => cmd_discrepancy(a),
        Command::Sensitivity(a) => cmd_sensitivity(a),
        Command::Benchmark(BenchmarkCommand::Run(a)) => cmd_run(a),
        Command::Benchmark(BenchmarkCommand::Analyze(a)) => cmd_analyze(a),
        Command::Benchmark(BenchmarkCommand::Timing(a)) | Command::Timing(a) => cmd_timing(a),
    }
}

/// File at `path`, or standard output.
fn sink(path: Option<&Path>) -> disco_core::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_matrix(path: &Path) -> disco_core::Result<Matrix> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Matrix::read_csv(file).map_err(|e| match e {
        Error::Domain(msg) => Error::Domain(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn measures(spec: &str) -> disco_core::Result<Vec<MeasureKind>> {
    if spec == "all" {
        Ok(MeasureKind::ALL.to_vec())
    } else {
        spec.parse::<MeasureKind>()
            .map(|k| vec![k])
            .map_err(|_| Error::Usage(format!("unknown measure '{spec}'")))
    }
}

fn cmd_sample(a: SampleArgs) -> disco_core::Result<()> {
    let kind = match a.method {
        Method::Random => SamplerKind::random(a.seed),
        Method::Sobol => SamplerKind::sobol(a.seed, a.scramble),
    };
    let points = generate(kind, a.n as usize, a.d as usize)?;
    let mut out = sink(a.out.as_deref())?;
    points.write_csv(&mut out)?;
    out.flush()?;
    if let Some(path) = a.svg {
        let x = points.column(0);
        let y = if points.cols() > 1 { points.column(1) } else { vec![0.5; x.len()] };
        std::fs::write(path, svg::scatter(&x, &y, (x.len() as f64).sqrt().ceil() as usize))?;
    }
    Ok(())
}

/// Twelve significant digits.
fn sig12(v: f64) -> String {
    format!("{:.11e}", v)
        .parse::<f64>()
        .map(|r| r.to_string())
        .unwrap_or_else(|_| v.to_string())
}

fn cmd_discrepancy(a: DiscrepancyArgs) -> disco_core::Result<()> {
    let kinds = measures(&a.measure)?;
    let points = read_matrix(&a.points)?;
    points.check_closed_unit()?;
    let mut out = io::stdout().lock();
    if kinds.len() == 1 {
        let kind = kinds[0];
        if kind == MeasureKind::SErsatz && points.cols() != 2 {
            return Err(Error::Usage(format!(
                "ersatz needs exactly 2 columns, the file has {}",
                points.cols()
            )));
        }
        writeln!(out, "{}", sig12(compute(kind, &points)?.value))?;
        return Ok(());
    }
    for kind in kinds {
        let value = if kind == MeasureKind::SErsatz && points.cols() != 2 {
            "NA".to_string()
        } else {
            sig12(compute(kind, &points)?.value)
        };
        writeln!(out, "{kind}: {value}")?;
    }
    Ok(())
}

fn cmd_sensitivity(a: SensitivityArgs) -> disco_core::Result<()> {
    let kinds = measures(&a.measure)?;
    let inputs = read_matrix(&a.inputs)?;
    inputs.check_closed_unit()?;
    let outputs = read_matrix(&a.outputs)?;
    if outputs.cols() != 1 {
        return Err(Error::Domain(format!(
            "outputs file must have one column, found {}",
            outputs.cols()
        )));
    }
    if outputs.rows() != inputs.rows() {
        return Err(Error::Domain(format!(
            "row-count mismatch: {} input rows, {} output rows",
            inputs.rows(),
            outputs.rows()
        )));
    }
    let y = outputs.into_vec();

    let total = match (&a.jansen, a.n_base) {
        (Some(path), Some(n_base)) => {
            let yj = read_matrix(path)?.into_vec();
            Some(jansen_total_order(&yj, n_base as usize, inputs.cols())?)
        }
        _ => None,
    };

    let mut wtr = csv::Writer::from_writer(sink(a.out.as_deref())?);
    wtr.write_record(["input", "measure", "score", "savage", "rank"])?;
    for kind in kinds {
        let imp = discrepancy_importance(kind, &inputs, &y)?;
        write_ranked(&mut wtr, &kind.to_string(), &imp.scores)?;
    }
    if let Some(t) = total {
        write_ranked(&mut wtr, "jansen", &t.t)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Rows sorted by importance, most influential first; inputs are 1-based.
fn write_ranked<W: Write>(wtr: &mut csv::Writer<W>, label: &str, scores: &[f64]) -> disco_core::Result<()> {
    let savage = savage_scores(scores, true);
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]).then(i.cmp(&j)));
    for (rank, &k) in order.iter().enumerate() {
        wtr.write_record([
            (k + 1).to_string(),
            label.to_string(),
            scores[k].to_string(),
            savage[k].to_string(),
            (rank + 1).to_string(),
        ])?;
    }
    Ok(())
}

fn cmd_run(a: RunArgs) -> disco_core::Result<()> {
    let jobs = a
        .jobs
        .map(|j| j as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if let Some(sim_id) = a.replay {
        return replay(sim_id, a.seed);
    }
    let records = run_benchmark(a.sims as usize, a.seed, jobs)?;
    let mut out = sink(a.out.as_deref())?;
    write_results_csv(&records, &mut out)?;
    out.flush()?;
    Ok(())
}

fn replay(sim_id: u64, seed: u64) -> disco_core::Result<()> {
    let f = factors_for(sim_id, seed)?;
    let record = run_simulation(&f);
    let sampler = f.sampler();
    let model = f.metafunction()?;
    let distribution = InputDistribution::from_phi(f.phi)?;
    let doc = json!({
        "factors": f,
        "seeds": {
            "master": seed,
            "design": sampler.seed,
            "distribution": f.distribution_seed(),
            "metafunction": f.epsilon,
        },
        "sampler": { "tag": sampler.tag, "scrambling": sampler.scrambling },
        "distribution": distribution.name(),
        "metafunction": serde_json::from_str::<serde_json::Value>(&model.to_json())
            .map_err(|e| Error::Io(e.to_string()))?,
        "r": record.r_by_measure,
    });
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn cmd_analyze(a: AnalyzeArgs) -> disco_core::Result<()> {
    let file = File::open(&a.results).map_err(|e| Error::Io(format!("{}: {e}", a.results.display())))?;
    let records = read_results_csv(file)?;
    let summaries = aggregate(&records)?;
    let mood = mood_all_pairs(&records)?;

    let mut out = sink(a.out.as_deref())?;
    write_summary_csv(&summaries, &mut out)?;
    out.flush()?;
    match &a.mood_out {
        Some(path) => write_mood_csv(&mood, BufWriter::new(File::create(path)?))?,
        None => {
            let mut out = io::stdout().lock();
            writeln!(out)?;
            write_mood_csv(&mood, &mut out)?;
        }
    }
    if let Some(path) = a.svg {
        let groups: Vec<(String, Vec<f64>)> = MeasureKind::ALL
            .iter()
            .map(|&k| (k.to_string(), records.iter().filter_map(|r| r.r(k)).collect()))
            .collect();
        std::fs::write(path, svg::boxplot(&groups))?;
    }
    Ok(())
}

fn cmd_timing(a: TimingArgs) -> disco_core::Result<()> {
    let mut cfg = if a.quick { TimingConfig::quick() } else { TimingConfig::default() };
    if let Some(reps) = a.reps {
        cfg.reps = reps as usize;
    }
    let report = timing_study(&cfg)?;
    let mut out = sink(a.out.as_deref())?;
    report.write_csv(&mut out)?;
    out.flush()?;
    if let Some(path) = a.svg {
        std::fs::write(path, svg::loglog(&report))?;
    }
    Ok(())
}
