use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use dbmc::analytic::{impulse_curve, uniform_grid};
use dbmc::config::ScenarioConfig;
use dbmc::detection::{GaussianForm, Method};
use dbmc::io;
use dbmc::presets;
use dbmc::sim::{aggregate, Simulator, BUDGET_ENV, DEFAULT_BUDGET};
use dbmc::summary::{
    check_comparable, compare_rows, summarize, summarize_analytic, SignalSummary, SummaryOptions,
};
use dbmc::Error;

use crate::manifest::{ConfigRecord, OutputDir};
use crate::{Command, Detection, GaussianArg, MethodArg, Source};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Core(Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        )))
    }

    /// 2 bad arguments, 3 invalid config, 4 budget, 5 I/O, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::Parse(_) | Error::Invalid(_) => 3,
                Error::BudgetExceeded { .. } => 4,
                Error::Io(_) | Error::Csv { .. } => 5,
                Error::Domain { .. } | Error::UndefinedMetric(_) => 1,
            },
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(Error::Invalid(v)) => {
                write!(f, "invalid configuration:")?;
                for v in v {
                    write!(f, "\n  {v}")?;
                }
                Ok(())
            }
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Analytic {
            source,
            grid,
            output,
        } => analytic(&source, grid.as_deref(), &output.out),
        Command::Simulate {
            source,
            workers,
            output,
        } => simulate(&source, workers, &output.out),
        Command::Metrics {
            inputs,
            source,
            detection,
            output,
        } => metrics(&inputs, &source, &detection, &output.out),
        Command::Compare {
            configs,
            presets,
            seed,
            simulate,
            workers,
            detection,
            output,
        } => compare(
            &configs,
            &presets,
            seed,
            simulate,
            workers,
            &detection,
            &output.out,
        ),
    }
}

fn load_file(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(ScenarioConfig::from_toml_str(&text)?)
}

fn load_preset(name: &str) -> Result<ScenarioConfig> {
    presets::preset(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown preset `{name}`; available: {}",
            presets::NAMES.join(", ")
        ))
    })
}

fn load(source: &Source) -> Result<(String, ScenarioConfig)> {
    let (label, mut cfg) = match (&source.config, &source.preset) {
        (Some(path), _) => (path.display().to_string(), load_file(path)?),
        (None, Some(name)) => (format!("preset:{name}"), load_preset(name)?),
        (None, None) => ("preset:desk-none".to_string(), load_preset("desk-none")?),
    };
    if let Some(s) = source.scenario {
        cfg = cfg.with_scenario(s.into());
    }
    if let Some(seed) = source.seed {
        cfg = cfg.with_seed(seed);
    }
    Ok((label, cfg.validated()?))
}

fn budget() -> Result<u128> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{BUDGET_ENV} must be a non-negative integer, got `{v}`"
            ))
        }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || {
        CliError::Usage(format!(
            "--grid expects start:stop:step in seconds, got `{text}`"
        ))
    };
    let [a, b, c] = parts.as_slice() else {
        return Err(bad());
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let (start, stop, step) = (num(a)?, num(b)?, num(c)?);
    uniform_grid(start, stop, step).map_err(|e| CliError::Usage(format!("--grid: {e}")))
}

fn parse_zeta(text: &str) -> Result<std::ops::RangeInclusive<u64>> {
    let bad = || {
        CliError::Usage(format!(
            "--zeta expects start:stop with start <= stop, got `{text}`"
        ))
    };
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let start: u64 = a.trim().parse().map_err(|_| bad())?;
    let stop: u64 = b.trim().parse().map_err(|_| bad())?;
    if start > stop {
        return Err(bad());
    }
    Ok(start..=stop)
}

fn methods(m: MethodArg) -> Vec<Method> {
    match m {
        MethodArg::Binomial => vec![Method::Binomial],
        MethodArg::Poisson => vec![Method::Poisson],
        MethodArg::Gaussian => vec![Method::Gaussian],
        MethodArg::All => Method::ALL.to_vec(),
    }
}

fn options(d: &Detection) -> Result<SummaryOptions> {
    if let Some(ts) = d.ts {
        if !ts.is_finite() || ts < 0.0 {
            return Err(CliError::Usage(format!(
                "--ts must be a non-negative time, got {ts}"
            )));
        }
    }
    Ok(SummaryOptions {
        t_s: d.ts,
        zetas: parse_zeta(&d.zeta)?,
        methods: methods(d.method),
        form: match d.gaussian {
            GaussianArg::UpperTail => GaussianForm::UpperTail,
            GaussianArg::AsPrinted => GaussianForm::AsPrinted,
        },
        eval_time: d.at,
    })
}

fn seconds(since: Instant) -> f64 {
    since.elapsed().as_secs_f64()
}

fn analytic(source: &Source, grid: Option<&str>, out: &Path) -> Result<()> {
    let start = Instant::now();
    let (label, cfg) = load(source)?;
    let times = match grid {
        Some(g) => parse_grid(g)?,
        None => cfg.simulation.sample_times(),
    };
    let scenario = cfg.simulation.scenario;
    let curve = impulse_curve(scenario, &cfg, &times)?;
    let mut dir = OutputDir::create(out, "analytic")?;
    let path = dir.write_with(&format!("{scenario}_curve.csv"), |b| {
        io::write_curve(b, &curve)
    })?;
    if let Some((t, c)) = curve.peak() {
        println!(
            "{scenario}: peak {} at t = {} s -> {}",
            io::sig9(c),
            io::sig9(t),
            path.display()
        );
    }
    dir.record_config(ConfigRecord::new(label, &cfg));
    dir.record_timing("total", seconds(start));
    dir.finish()?;
    Ok(())
}

fn simulate(source: &Source, workers: usize, out: &Path) -> Result<()> {
    let start = Instant::now();
    let (label, cfg) = load(source)?;
    let sim = Simulator::new(budget()?);
    sim.preflight(&cfg)?;
    let mut dir = OutputDir::create(out, "simulate")?;
    let series = sim.run_all(&cfg, workers.max(1))?;
    dir.record_timing("simulation", seconds(start));
    let agg = aggregate(&series)?;
    let (scenario, seed) = (cfg.simulation.scenario.as_str(), cfg.simulation.master_seed);
    for s in &series {
        dir.write_with(
            &io::series_file_name(scenario, seed, s.repetition_index),
            |b| io::write_series(b, s),
        )?;
    }
    let path = dir.write_with(&format!("{scenario}_{seed}_aggregate.csv"), |b| {
        io::write_aggregate(b, &agg)
    })?;
    if let Some((t, m)) = agg.peak() {
        println!(
            "{scenario}: {} repetitions, peak mean {} at t = {} s -> {}",
            agg.repetitions,
            io::sig9(m),
            io::sig9(t),
            path.display()
        );
    }
    dir.record_config(ConfigRecord::new(label, &cfg));
    dir.record_timing("total", seconds(start));
    dir.finish()?;
    Ok(())
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "input".to_string(), |s| s.to_string_lossy().into_owned())
}

fn metrics(inputs: &[PathBuf], source: &Source, detection: &Detection, out: &Path) -> Result<()> {
    let start = Instant::now();
    let (label, cfg) = load(source)?;
    let opts = options(detection)?;
    let mut dir = OutputDir::create(out, "metrics")?;
    for input in inputs {
        let file = fs::File::open(input).map_err(|e| CliError::io(input, e))?;
        let signal = io::read_signal(std::io::BufReader::new(file))?;
        let name = stem(input);
        let s = summarize(
            &cfg,
            &signal.times,
            &signal.values,
            signal.is_curve(),
            &opts,
        )?;
        dir.write_with(&format!("{name}_itr.csv"), |b| {
            io::write_itr(b, &[(s.itr, name.clone())])
        })?;
        dir.write_with(&format!("{name}_pe.csv"), |b| {
            io::write_detection(b, &s.sweep.results, &name)
        })?;
        print_summary(&name, &s, &opts.methods);
    }
    dir.record_config(ConfigRecord::new(label, &cfg));
    dir.record_timing("total", seconds(start));
    dir.finish()?;
    Ok(())
}

fn print_summary(name: &str, s: &SignalSummary, methods: &[Method]) {
    print!("{name}: ITR {}", io::sig9(s.itr.value));
    for &m in methods {
        if let Some(b) = s.sweep.best(m) {
            print!(
                ", min Pe[{m}] {} at zeta {}",
                io::sig9(b.p_error),
                b.threshold_zeta
            );
        }
    }
    println!();
}

const COMPARE_HEADER: [&str; 8] = [
    "scenario",
    "method",
    "peak_mean",
    "peak_time_s",
    "amplitude_ratio",
    "itr",
    "min_pe",
    "argmin_zeta",
];

fn compare(
    configs: &[PathBuf],
    preset_names: &[String],
    seed: Option<u64>,
    simulate: bool,
    workers: usize,
    detection: &Detection,
    out: &Path,
) -> Result<()> {
    let start = Instant::now();
    let opts = options(detection)?;
    let mut loaded = Vec::new();
    for path in configs {
        loaded.push((path.display().to_string(), load_file(path)?));
    }
    for name in preset_names {
        loaded.push((format!("preset:{name}"), load_preset(name)?));
    }
    if loaded.is_empty() {
        for name in ["desk-none", "desk-enzyme", "desk-photolysis"] {
            loaded.push((format!("preset:{name}"), load_preset(name)?));
        }
    }
    let mut cfgs = Vec::new();
    for (_, cfg) in &mut loaded {
        if let Some(seed) = seed {
            *cfg = cfg.clone().with_seed(seed);
        }
        cfgs.push(cfg.clone().validated()?);
    }
    check_comparable(&cfgs)?;

    let sim = Simulator::new(budget()?);
    if simulate {
        for cfg in &cfgs {
            sim.preflight(cfg)?;
        }
    }
    let mut summaries = Vec::new();
    for cfg in &cfgs {
        summaries.push(if simulate {
            let agg = sim.run_aggregated(cfg, workers.max(1))?;
            summarize(cfg, &agg.sample_times, &agg.mean, false, &opts)?
        } else {
            summarize_analytic(cfg, &opts)?
        });
    }
    let rows = compare_rows(&summaries, &opts.methods);

    let mut table = vec![COMPARE_HEADER
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()];
    for r in &rows {
        table.push(vec![
            r.scenario.to_string(),
            r.method.to_string(),
            io::sig9(r.peak_mean),
            io::sig9(r.peak_time),
            io::sig9(r.amplitude_ratio),
            io::sig9(r.itr),
            io::sig9(r.min_pe),
            r.argmin_zeta.to_string(),
        ]);
    }
    let widths: Vec<usize> = (0..COMPARE_HEADER.len())
        .map(|c| table.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    for row in &table {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        println!("{}", line.join("  ").trim_end());
    }

    let mut dir = OutputDir::create(
        out,
        if simulate {
            "compare --simulate"
        } else {
            "compare"
        },
    )?;
    let csv: String = table.iter().map(|row| row.join(",") + "\n").collect();
    dir.write("compare.csv", csv.as_bytes())?;
    for (label, cfg) in loaded.into_iter().map(|(l, _)| l).zip(&cfgs) {
        dir.record_config(ConfigRecord::new(label, cfg));
    }
    dir.record_timing("total", seconds(start));
    dir.finish()?;
    Ok(())
}
