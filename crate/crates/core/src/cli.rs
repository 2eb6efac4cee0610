//! Command-line front end: `train`, `predict`, `rules`, `experiment`, `ucp`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::data::{load_dataset, load_table, LoadOptions, DEFAULT_TARGET};
use crate::error::{Error, Result};
use crate::evaluation::{rmse, run_experiment, ExperimentConfig};
use crate::fuzzification::MembershipFamily;
use crate::model::{load_model, save_model, train, TrainConfig};
use crate::persist::write_atomic;
use crate::rules::{render_rule, rule_base, LabelScheme};
use crate::selection::Penalty;
use crate::ucp::{parse_ratings, UcpInput, UcpReport};

#[derive(Debug, Parser)]
#[command(name = "rfnn", version, about = "Fuzzy neural network effort estimation from Use Case Point features")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model on a CSV file and save it as JSON.
    Train(TrainCmd),
    /// Predict effort for every row of a CSV file.
    Predict(PredictCmd),
    /// Print the fuzzy rule base of a saved model.
    Rules(RulesCmd),
    /// Repeated random-split train/test experiment.
    Experiment(ExperimentCmd),
    /// Compute Use Case Points from counts and factor ratings.
    Ucp(UcpCmd),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Membership functions per feature.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value = "triangular", value_parser = parse_family)]
    pub family: MembershipFamily,
    /// Number of candidate and-neurons.
    #[arg(long, default_value_t = 100)]
    pub pool_size: usize,
    #[arg(long, default_value_t = 16)]
    pub bootstraps: usize,
    /// Bolasso consensus threshold.
    #[arg(long, default_value_t = 0.7)]
    pub consensus: f64,
    /// Leaky-ReLU slope of the output neuron.
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Lasso penalty: `cv` or a number.
    #[arg(long, default_value = "cv", value_parser = parse_penalty)]
    pub penalty: Penalty,
    #[arg(long, env = "RFNN_SEED", default_value_t = 0)]
    pub seed: u64,
}

impl ModelArgs {
    fn config(&self) -> TrainConfig {
        TrainConfig {
            m: self.m,
            family: self.family,
            pool_size: self.pool_size,
            bootstraps: self.bootstraps,
            consensus: self.consensus,
            alpha: self.alpha,
            seed: self.seed,
            penalty: self.penalty,
            ..TrainConfig::default()
        }
    }
}

fn parse_family(s: &str) -> std::result::Result<MembershipFamily, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_penalty(s: &str) -> std::result::Result<Penalty, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct TrainCmd {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value = DEFAULT_TARGET)]
    pub target: String,
    /// Where to write the model file.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Print the summary as JSON.
    #[arg(long)]
    pub json: bool,
    /// Suppress timing lines.
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Debug, Args)]
pub struct PredictCmd {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct RulesCmd {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    /// Decimal places for weights and consequents.
    #[arg(long, default_value_t = 2)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct ExperimentCmd {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value = DEFAULT_TARGET)]
    pub target: String,
    #[arg(long, default_value_t = 30)]
    pub reps: usize,
    #[arg(long, default_value_t = 0.7)]
    pub train_ratio: f64,
    /// Worker threads for repetitions.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Also write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Debug, Args)]
pub struct UcpCmd {
    /// `key = value` file; flags given alongside override its entries.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Simple, average, complex actor counts, e.g. `2,0,1`.
    #[arg(long, allow_hyphen_values = true)]
    pub actors: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub use_cases: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub actor_weights: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub use_case_weights: Option<String>,
    /// Technical factor ratings as `weight:value` pairs.
    #[arg(long, allow_hyphen_values = true)]
    pub technical: Option<String>,
    /// Environmental factor ratings as `weight:value` pairs.
    #[arg(long, allow_hyphen_values = true)]
    pub environmental: Option<String>,
    /// TCF intercept and slope.
    #[arg(long, allow_hyphen_values = true)]
    pub tcf_constants: Option<String>,
    /// EF intercept and slope.
    #[arg(long, allow_hyphen_values = true)]
    pub ef_constants: Option<String>,
    /// Print only JSON.
    #[arg(long)]
    pub json: bool,
}

/// Parse `args` and run; returns the process exit code
/// (0 success, 1 numerical failure, 2 usage or input error).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(stdout, "{}", e.render())
            } else {
                write!(stderr, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Train(c) => cmd_train(&c, out),
        Command::Predict(c) => cmd_predict(&c, out),
        Command::Rules(c) => cmd_rules(&c, out),
        Command::Experiment(c) => cmd_experiment(&c, out),
        Command::Ucp(c) => cmd_ucp(&c, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

fn emit_or_write(path: Option<&Path>, out: &mut dyn Write, text: &str) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => emit(out, text),
    }
}

fn ensure_readable(path: &Path) -> Result<()> {
    std::fs::metadata(path).map(|_| ()).map_err(|e| Error::io(path, e))
}

pub fn cmd_train(c: &TrainCmd, out: &mut dyn Write) -> Result<()> {
    let config = c.model.config();
    config.validate()?;
    ensure_readable(&c.data)?;
    let started = Instant::now();
    let data = load_dataset(&c.data, &c.target)?;
    let model = train(&data, &config)?;
    let train_rmse = rmse(&data.targets, &model.predict_rows(&data.rows)?)?;
    save_model(&model, &c.out)?;

    if c.json {
        let summary = serde_json::json!({
            "selected": model.n_selected(),
            "candidates": model.candidate_count,
            "rmse_train": train_rmse,
            "seed": config.seed,
            "model": c.out,
        });
        emit(out, &format!("{}\n", serde_json::to_string_pretty(&summary)?))?;
    } else {
        emit(
            out,
            &format!(
                "selected neurons (L_s): {} of {}\ntrain RMSE: {:.4}\nseed: {}\nmodel: {}\n",
                model.n_selected(),
                model.candidate_count,
                train_rmse,
                config.seed,
                c.out.display()
            ),
        )?;
    }
    if !c.deterministic && !c.json {
        emit(out, &format!("elapsed: {:.3} s\n", started.elapsed().as_secs_f64()))?;
    }
    Ok(())
}

pub fn cmd_predict(c: &PredictCmd, out: &mut dyn Write) -> Result<()> {
    let model = load_model(&c.model)?;
    let table = load_table(&c.data, &LoadOptions::default())?;
    let rows = table.select(&model.feature_names, &[model.target_name.as_str()])?;
    let predictions = model.predict_rows(&rows)?;

    let text = if c.json {
        let items: Vec<serde_json::Value> = predictions
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut obj = serde_json::Map::new();
                obj.insert("row".into(), (i + 1).into());
                obj.insert(model.target_name.clone(), serde_json::json!(p));
                serde_json::Value::Object(obj)
            })
            .collect();
        format!("{}\n", serde_json::to_string_pretty(&items)?)
    } else {
        let mut s = format!("row,{}\n", model.target_name);
        for (i, p) in predictions.iter().enumerate() {
            s.push_str(&format!("{},{}\n", i + 1, p));
        }
        s
    };
    emit_or_write(c.out.as_deref(), out, &text)
}

pub fn cmd_rules(c: &RulesCmd, out: &mut dyn Write) -> Result<()> {
    let model = load_model(&c.model)?;
    let base = rule_base(&model, &LabelScheme::default())?;
    let text = if c.json {
        format!("{}\n", serde_json::to_string_pretty(&base)?)
    } else {
        base.rules
            .iter()
            .map(|r| format!("{}\n", render_rule(r, c.precision)))
            .collect()
    };
    emit_or_write(c.out.as_deref(), out, &text)
}

pub fn cmd_experiment(c: &ExperimentCmd, out: &mut dyn Write) -> Result<()> {
    let train_config = c.model.config();
    train_config.validate()?;
    ensure_readable(&c.data)?;
    let started = Instant::now();
    let data = load_dataset(&c.data, &c.target)?;
    let config = ExperimentConfig {
        repetitions: c.reps,
        train_ratio: c.train_ratio,
        train_config,
        base_seed: c.model.seed,
        threads: c.threads,
    };
    let report = run_experiment(&data, &config)?;
    let json = format!("{}\n", serde_json::to_string_pretty(&report)?);
    if let Some(p) = &c.out {
        write_atomic(p, json.as_bytes())?;
    }
    if c.json {
        emit(out, &json)?;
    } else {
        emit(out, &report.to_table())?;
        if !c.deterministic {
            emit(out, &format!("elapsed: {:.3} s\n", started.elapsed().as_secs_f64()))?;
        }
    }
    Ok(())
}

pub fn cmd_ucp(c: &UcpCmd, out: &mut dyn Write) -> Result<()> {
    let mut input = match &c.input {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Error::io(p, e))?
            .parse::<UcpInput>()?,
        None => UcpInput::default(),
    };
    let flags = [
        ("actors", &c.actors),
        ("use_cases", &c.use_cases),
        ("actor_weights", &c.actor_weights),
        ("use_case_weights", &c.use_case_weights),
        ("tcf_constants", &c.tcf_constants),
        ("ef_constants", &c.ef_constants),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            input.set(key, v)?;
        }
    }
    if let Some(v) = &c.technical {
        input.technical = parse_ratings(v)?;
    }
    if let Some(v) = &c.environmental {
        input.environmental = parse_ratings(v)?;
    }
    let report = input.evaluate()?;
    let json = format!("{}\n", serde_json::to_string_pretty(&report)?);
    if c.json {
        emit(out, &json)
    } else {
        emit(out, &ucp_table(&report))?;
        emit(out, &json)
    }
}

fn ucp_table(r: &UcpReport) -> String {
    let b = &r.breakdown;
    [
        ("UAW", b.uaw),
        ("UUCW", b.uucw),
        ("UUCP", b.uucp),
        ("TFactor", r.tfactor),
        ("TCF", b.tcf),
        ("EFactor", r.efactor),
        ("EF", b.ef),
        ("UCP", b.ucp),
    ]
    .iter()
    .map(|(k, v)| format!("{k:<8} {v}\n"))
    .collect()
}
