use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use poqa_core::domain::SceneGraph;
use poqa_core::dsl::{parse_environment, parse_question, Environment, QuestionForm};
use poqa_core::forge::{generate_environments, GenerationConfig};
use poqa_core::harness::dataset::{parse_scene, read_instance};
use poqa_core::harness::eval::{evaluate, parse_records};
use poqa_core::harness::pipeline::{
    generate_dataset, read_dataset, write_dataset, write_environments, write_prompts,
};
use poqa_core::harness::prompt::{emit_prompt, PromptStyle};
use poqa_core::harness::stats::dataset_stats;
use poqa_core::harness::validate::validate_dataset;
use poqa_core::oracle::solve;

#[derive(Parser)]
#[command(
    name = "poqa",
    version,
    about = "Partially observable scene question generator and solver"
)]
struct Cli {
    /// Master seed; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// TOML generation config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate environments only.
    GenEnvs,
    /// Generate a full dataset.
    GenDataset {
        #[arg(long, default_value_t = 2000)]
        count: usize,
    },
    /// Print the answer set for a question.
    Solve(ProblemArgs),
    /// Print the reasoning steps behind an answer set.
    Explain(ProblemArgs),
    /// Re-check every instance of a dataset.
    Validate {
        #[arg(long)]
        dataset: PathBuf,
    },
    /// Distribution summary of a dataset.
    Stats {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Score predictions against gold answers.
    Eval {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write prompts for every instance of a dataset into <out>/prompts.
    EmitPrompts {
        #[arg(long)]
        dataset: PathBuf,
        /// standalone, parser, or both.
        #[arg(long, default_value = "both")]
        style: String,
    },
}

#[derive(Args)]
struct ProblemArgs {
    /// A dataset instance file; replaces the three inputs below.
    #[arg(long, conflicts_with_all = ["env", "scene", "question"])]
    instance: Option<PathBuf>,
    /// Environment rules.
    #[arg(long, requires_all = ["scene", "question"])]
    env: Option<PathBuf>,
    /// Partial scene graph (JSON or dictionary notation).
    #[arg(long)]
    scene: Option<PathBuf>,
    /// Question logical form.
    #[arg(long)]
    question: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_config(cli: &Cli) -> Result<GenerationConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            toml::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?
        }
        None => GenerationConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load_problem(args: &ProblemArgs) -> Result<(SceneGraph, Environment, QuestionForm)> {
    if let Some(path) = &args.instance {
        let inst = read_instance(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok((inst.partial, inst.environment, inst.form));
    }
    let (Some(env), Some(scene), Some(question)) = (&args.env, &args.scene, &args.question) else {
        bail!("give --instance, or all of --env, --scene and --question");
    };
    let env_path = env;
    let scene = parse_scene(&read(scene)?).context("parsing scene")?;
    let mut env = parse_environment(&read(env_path)?).context("parsing environment")?;
    env.id = env_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    if env.object_count.is_none() {
        env.object_count = Some(scene.len() + 1);
    }
    let form = parse_question(&read(question)?).context("parsing question")?;
    Ok((scene, env, form))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::GenEnvs => {
            let cfg = load_config(&cli)?;
            let envs: Vec<Environment> = generate_environments(&cfg)?
                .iter()
                .map(Environment::with_line_numbers)
                .collect();
            write_environments(&cli.out, &envs)?;
            println!("wrote {} environments to {}", envs.len(), cli.out.display());
        }
        Command::GenDataset { count } => {
            let cfg = load_config(&cli)?;
            let ds = generate_dataset(&cfg, *count)?;
            write_dataset(&cli.out, &ds)?;
            println!(
                "wrote {} instances over {} environments to {}",
                ds.instances.len(),
                ds.environments.len(),
                cli.out.display()
            );
        }
        Command::Solve(args) => {
            let (partial, env, form) = load_problem(args)?;
            let (answer, _) = solve(&partial, &env, &form)?;
            println!("{answer}");
        }
        Command::Explain(args) => {
            let (partial, env, form) = load_problem(args)?;
            let (answer, trace) = solve(&partial, &env, &form)?;
            for line in trace.render(&env) {
                println!("{line}");
            }
            println!("answer: {answer}");
        }
        Command::Validate { dataset } => {
            let instances = read_dataset(dataset)?;
            let report = validate_dataset(&instances);
            for p in &report.problems {
                println!("{p}");
            }
            println!(
                "instances {}  constraint violations {}  structural violations {}  answer mismatches {}  validity violations {}",
                report.instances,
                report.constraint_violations,
                report.structural_violations,
                report.answer_mismatches,
                report.validity_violations
            );
            if !report.is_clean() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Stats { dataset, json } => {
            let instances = read_dataset(dataset)?;
            let stats = dataset_stats(&instances);
            if *json {
                println!("{}", serde_json::to_string_pretty(&stats)?);
            } else {
                print!("{}", stats.table());
            }
        }
        Command::Eval {
            gold,
            predictions,
            json,
        } => {
            let gold = parse_records(&read(gold)?)?;
            let predictions = parse_records(&read(predictions)?)?;
            let result = evaluate(&gold, &predictions)?;
            if *json {
                println!("{}", serde_json::to_string_pretty(&result)?);
            } else {
                print!("{}", result.table());
            }
        }
        Command::EmitPrompts { dataset, style } => {
            let instances = read_dataset(dataset)?;
            let styles = match style.as_str() {
                "both" => None,
                s => Some(
                    PromptStyle::parse(s).with_context(|| format!("unknown prompt style `{s}`"))?,
                ),
            };
            let dir = cli.out.join("prompts");
            fs::create_dir_all(&dir)?;
            for inst in &instances {
                match styles {
                    None => write_prompts(&cli.out, inst)?,
                    Some(s) => fs::write(
                        dir.join(format!("{}.{}.txt", inst.id, s.name())),
                        emit_prompt(inst, s),
                    )?,
                }
            }
            println!(
                "wrote prompts for {} instances to {}",
                instances.len(),
                dir.display()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
