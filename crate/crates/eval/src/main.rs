//! `semloc`: command-line workbench around the localisation crates.
//!
//! One binary covers the whole workflow: describe a target from a recorded
//! distance matrix (`locate`), generate ranging traces (`simulate rail`),
//! reproduce the study-agreement and alignment evaluations (`eval`), run
//! the live bus service (`serve`), and inspect the effective configuration
//! (`config show`).
//!
//! Every subcommand exits 0 on success and 2 on any error, printing the
//! error chain to stderr.

use std::fs::File;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc::Receiver;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use semloc_core::{DistanceSemantics, ObjectId, Sod, Spd};
use semloc_engine::{
    Bus, BusMessage, Engine, EngineConfig, LoopbackBus, MqttBus, RangingMessage, Server,
};
use semloc_eval::{
    agreement_rate, alignment_report, all_options, load_distances, render_agreement,
    render_alignment, AgreementLine, AgreementOptions, Format, StudyDataset,
};
use semloc_sim::{
    load_noise_model, load_scenario, read_trace_file, run_rail_scenario, write_trace,
    write_trace_file, NoiseModel, DEFAULT_MAX_PLAUSIBLE_M,
};
use semloc_spd::AlignmentConfig;

#[derive(Parser)]
#[command(
    name = "semloc",
    version,
    about = "Semantic indoor localisation workbench"
)]
struct Cli {
    /// Output format for descriptions and reports.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(format: OutputFormat) -> Self {
        match format {
            OutputFormat::Table => Format::Table,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SemanticsArg {
    /// Measurements are distances between object surfaces.
    Edge,
    /// Measurements are distances between object centres.
    Inter,
}

impl From<SemanticsArg> for DistanceSemantics {
    fn from(arg: SemanticsArg) -> Self {
        match arg {
            SemanticsArg::Edge => DistanceSemantics::EdgeToEdge,
            SemanticsArg::Inter => DistanceSemantics::InterCentre,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Describe where a target is, from a recorded distance matrix.
    Locate {
        /// Object to describe.
        target: String,
        /// Distance matrix file (same layout as fixtures/study/kitchen_distances.json).
        #[arg(long)]
        distances: PathBuf,
        /// Semantic object descriptor file.
        #[arg(long)]
        sod: PathBuf,
        /// Engine configuration file; omitted means defaults.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Generate ranging traces.
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// Reproduce the evaluation reports.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Run the engine against a message bus.
    Serve {
        /// Semantic object descriptor file.
        #[arg(long)]
        sod: PathBuf,
        /// Engine configuration file; omitted means defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// `loopback` or an MQTT broker URL such as `mqtt://localhost:1883`.
        #[arg(long, default_value = "loopback")]
        bus: String,
        /// Replay a recorded session file (one ranging payload per line),
        /// print what got published, and exit instead of serving.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Inspect configuration.
    #[command(subcommand)]
    Config(ConfigCommand),
}

#[derive(Subcommand)]
enum SimulateCommand {
    /// Step a mobile node along the rail and record ranging bursts.
    Rail {
        /// Scenario description file.
        #[arg(long)]
        scenario: PathBuf,
        /// Noise model file; omitted means the default model.
        #[arg(long)]
        noise: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the scenario's step count.
        #[arg(long)]
        steps: Option<usize>,
        /// Trace output file; omitted means stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum EvalCommand {
    /// Agreement between computed descriptions and study responses.
    Study {
        /// Study fixture directory.
        #[arg(long, default_value = "fixtures/study")]
        data: PathBuf,
        /// Distance semantics to score; omitted means every combination.
        #[arg(long, value_enum)]
        semantics: Option<SemanticsArg>,
        /// Score only the nearest reference of each situation.
        #[arg(long, requires = "semantics")]
        r2: bool,
        /// Keep participant "not related" answers in scope.
        #[arg(long, requires = "semantics")]
        include_nr: bool,
    },
    /// Alignment verdicts of both decision variants over a trace.
    Alignment {
        /// Trace file produced by `simulate rail`.
        #[arg(long)]
        trace: PathBuf,
        /// Scenario the trace was generated from.
        #[arg(long)]
        scenario: PathBuf,
        /// Fixed-node pair to test; omitted means the scenario's first two.
        #[arg(long, num_args = 2, value_names = ["B", "C"])]
        pair: Option<Vec<String>>,
        /// Samples above this distance in metres count as removed.
        #[arg(long, default_value_t = DEFAULT_MAX_PLAUSIBLE_M)]
        max_plausible: f64,
        /// Angle threshold in degrees.
        #[arg(long, default_value_t = 30.0)]
        threshold: f64,
    },
}

#[derive(Subcommand)]
enum ConfigCommand {
    /// Print the effective engine configuration as JSON.
    Show {
        /// Engine configuration file; omitted means defaults.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn main() {
    // Rust ignores SIGPIPE, which turns `semloc ... | head` into a write
    // panic; restore the default so a closed pipe ends the process quietly.
    // SAFETY: resetting a signal disposition has no other effect.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    env_logger::init();
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(2);
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Locate {
            target,
            distances,
            sod,
            config,
        } => locate(&target, &distances, &sod, config.as_deref(), cli.format),
        Command::Simulate(SimulateCommand::Rail {
            scenario,
            noise,
            seed,
            steps,
            out,
        }) => simulate_rail(&scenario, noise.as_deref(), seed, steps, out.as_deref()),
        Command::Eval(EvalCommand::Study {
            data,
            semantics,
            r2,
            include_nr,
        }) => eval_study(&data, semantics, r2, include_nr, cli.format),
        Command::Eval(EvalCommand::Alignment {
            trace,
            scenario,
            pair,
            max_plausible,
            threshold,
        }) => eval_alignment(
            &trace,
            &scenario,
            pair.as_deref(),
            max_plausible,
            threshold,
            cli.format,
        ),
        Command::Serve {
            sod,
            config,
            bus,
            replay,
        } => serve(&sod, config.as_deref(), &bus, replay.as_deref()),
        Command::Config(ConfigCommand::Show { config }) => config_show(config.as_deref()),
    }
}

fn load_engine_config(path: Option<&Path>) -> anyhow::Result<EngineConfig> {
    match path {
        Some(path) => EngineConfig::from_json_file(path)
            .with_context(|| format!("loading configuration {}", path.display())),
        None => Ok(EngineConfig::default()),
    }
}

fn locate(
    target: &str,
    distances: &Path,
    sod_path: &Path,
    config: Option<&Path>,
    format: OutputFormat,
) -> anyhow::Result<()> {
    let sod = Sod::from_json_file(sod_path)
        .with_context(|| format!("loading sod {}", sod_path.display()))?;
    let config = load_engine_config(config)?;
    let table = load_distances(distances)?;
    let target: ObjectId = target.into();
    anyhow::ensure!(
        table.contains(&target),
        "target `{target}` is not in the distance table"
    );

    let semantics = config.semantics;
    let mut engine = Engine::new(sod, config)?;
    // Feed the whole matrix as one synchronous snapshot. Pairs the SOD
    // does not know are dropped by the normal ingest path.
    for (i, a) in table.objects.iter().enumerate() {
        for b in &table.objects[i + 1..] {
            engine.ingest(&RangingMessage {
                a: a.clone(),
                b: b.clone(),
                distance_m: table.distance_m(a, b, semantics)?,
                timestamp: 0.0,
                sample_count: 1,
            });
        }
    }

    let spd = engine.evaluate(&target)?;
    match format {
        OutputFormat::Table => println!("{}", spd.rendered),
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&spd)?),
    }
    Ok(())
}

fn simulate_rail(
    scenario_path: &Path,
    noise: Option<&Path>,
    seed: u64,
    steps: Option<usize>,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let mut scenario = load_scenario(scenario_path)
        .with_context(|| format!("loading scenario {}", scenario_path.display()))?;
    if let Some(steps) = steps {
        scenario.step_count = steps;
        scenario.validate()?;
    }
    let model = match noise {
        Some(path) => load_noise_model(path)
            .with_context(|| format!("loading noise model {}", path.display()))?,
        None => NoiseModel::default(),
    };
    let trace = run_rail_scenario(&scenario, &model, seed)?;
    match out {
        Some(path) => {
            write_trace_file(&trace, path)
                .with_context(|| format!("writing trace {}", path.display()))?;
            eprintln!(
                "wrote {} positions x {} samples to {}",
                trace.entries.len(),
                scenario.samples_per_position,
                path.display()
            );
        }
        None => write_trace(&trace, std::io::stdout().lock())?,
    }
    Ok(())
}

fn eval_study(
    data: &Path,
    semantics: Option<SemanticsArg>,
    r2: bool,
    include_nr: bool,
    format: OutputFormat,
) -> anyhow::Result<()> {
    let dataset = StudyDataset::load_dir(data)
        .with_context(|| format!("loading study data {}", data.display()))?;
    let options: Vec<AgreementOptions> = match semantics {
        Some(semantics) => vec![AgreementOptions {
            include_nr,
            nearest_only: r2,
            semantics: semantics.into(),
        }],
        None => all_options().to_vec(),
    };
    let lines: Vec<AgreementLine> = options
        .iter()
        .map(|options| {
            Ok(AgreementLine::new(
                options,
                &agreement_rate(&dataset, options)?,
            ))
        })
        .collect::<anyhow::Result<_>>()?;
    println!("{}", render_agreement(&lines, format.into()).trim_end());
    Ok(())
}

fn eval_alignment(
    trace_path: &Path,
    scenario_path: &Path,
    pair: Option<&[String]>,
    max_plausible: f64,
    threshold: f64,
    format: OutputFormat,
) -> anyhow::Result<()> {
    let scenario = load_scenario(scenario_path)
        .with_context(|| format!("loading scenario {}", scenario_path.display()))?;
    let trace = read_trace_file(trace_path)
        .with_context(|| format!("reading trace {}", trace_path.display()))?;
    let (b, c): (ObjectId, ObjectId) = match pair {
        Some([b, c]) => (b.as_str().into(), c.as_str().into()),
        Some(_) => unreachable!("clap enforces exactly two names"),
        None => {
            anyhow::ensure!(
                scenario.fixed_nodes.len() >= 2,
                "scenario has fewer than two fixed nodes; pass --pair"
            );
            (
                scenario.fixed_nodes[0].id.clone(),
                scenario.fixed_nodes[1].id.clone(),
            )
        }
    };
    let config = AlignmentConfig {
        angle_threshold_deg: threshold,
        ..AlignmentConfig::default()
    };
    let report = alignment_report(&trace, &scenario, &b, &c, &config, max_plausible)?;
    println!("{}", render_alignment(&report, format.into()).trim_end());
    Ok(())
}

fn serve(
    sod_path: &Path,
    config: Option<&Path>,
    bus: &str,
    replay: Option<&Path>,
) -> anyhow::Result<()> {
    let sod = Sod::from_json_file(sod_path)
        .with_context(|| format!("loading sod {}", sod_path.display()))?;
    let config = load_engine_config(config)?;
    let engine = Engine::new(sod, config)?;
    if bus == "loopback" {
        let bus = LoopbackBus::new();
        let echo = bus.clone().subscribe(&["spd/#"])?;
        run_server(Server::new(engine, bus), replay, Some(echo))
    } else {
        let bus =
            MqttBus::connect(bus, "semloc").with_context(|| format!("connecting to bus {bus}"))?;
        run_server(Server::new(engine, bus), replay, None)
    }
}

fn run_server<B: Bus>(
    mut server: Server<B>,
    replay: Option<&Path>,
    echo: Option<Receiver<BusMessage>>,
) -> anyhow::Result<()> {
    if let Some(path) = replay {
        let file =
            File::open(path).with_context(|| format!("opening session {}", path.display()))?;
        let stats = server.replay_session(file)?;
        if let Some(echo) = &echo {
            for message in echo.try_iter() {
                let spd: Spd = serde_json::from_slice(&message.payload)?;
                println!("{}  {}", message.topic, spd.rendered);
            }
        }
        eprintln!(
            "replayed {}: {} ingested, {} rejected, {} published",
            path.display(),
            stats.ingested,
            stats.rejected,
            stats.published
        );
        return Ok(());
    }
    install_signal_handlers();
    log::info!("serving; ctrl-c to stop");
    server.run(&STOP)?;
    Ok(())
}

fn config_show(config: Option<&Path>) -> anyhow::Result<()> {
    let config = load_engine_config(config)?;
    println!("{}", serde_json::to_string_pretty(&config)?);
    Ok(())
}

static STOP: AtomicBool = AtomicBool::new(false);

extern "C" fn request_stop(_signal: libc::c_int) {
    STOP.store(true, Ordering::SeqCst);
}

fn install_signal_handlers() {
    // SAFETY: the handler only performs an atomic store, which is
    // async-signal-safe.
    let handler = request_stop as *const () as libc::sighandler_t;
    unsafe {
        libc::signal(libc::SIGINT, handler);
        libc::signal(libc::SIGTERM, handler);
    }
}
