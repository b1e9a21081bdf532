//! Dataset generation end to end and the output directory layout.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{DatasetInstance, QuestionRecord, SCHEMA_VERSION};
use super::prompt::{emit_prompt, PromptStyle};
use super::HarnessError;
use crate::dsl::{Environment, GENERIC_RULES_NL};
use crate::forge::{derive_seed, generate_environments, streams, GenerationConfig};
use crate::question_forge::{generate_instance, query_schedule, InstanceDraft};

pub fn instance_id(i: usize) -> String {
    format!("q{i:06}")
}

/// Turns an accepted draft into a dataset instance.
pub fn assemble(id: String, draft: InstanceDraft) -> DatasetInstance {
    let environment = draft.environment.with_line_numbers();
    let attr = draft.question.form.query_attribute;
    let question = QuestionRecord {
        id: id.clone(),
        environment_id: environment.id.clone(),
        scene_id: id.clone(),
        template: draft.question.template.id.to_string(),
        text: draft.question.text.clone(),
        logical_form: draft.question.form.render(),
        query_attribute: attr,
        answer: draft.answer.values.iter().copied().collect(),
        ground_truth: draft.hidden.get(attr),
    };
    DatasetInstance {
        id,
        environment,
        complete: draft.complete,
        partial: draft.partial,
        hidden: draft.hidden,
        question,
        form: draft.question.form,
        answer: draft.answer,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub config: GenerationConfig,
    pub environments: Vec<Environment>,
    pub instances: Vec<DatasetInstance>,
}

/// Object count for instance `i`, uniform over the configured range.
pub fn object_count_for(cfg: &GenerationConfig, seed: u64) -> usize {
    ChaCha8Rng::seed_from_u64(seed).gen_range(cfg.object_count_range())
}

/// Generates `count` instances with environments assigned round-robin.
/// Instances are built in parallel from per-instance seeds; the result
/// does not depend on the thread count.
pub fn generate_dataset(cfg: &GenerationConfig, count: usize) -> Result<Dataset, HarnessError> {
    let environments: Vec<Environment> = generate_environments(cfg)?
        .iter()
        .map(Environment::with_line_numbers)
        .collect();
    let schedule = query_schedule(cfg.question_mix, count);
    let instances = generate_instances(cfg, &environments, &schedule)?;
    Ok(Dataset {
        config: cfg.clone(),
        environments,
        instances,
    })
}

pub fn generate_instances(
    cfg: &GenerationConfig,
    environments: &[Environment],
    schedule: &[crate::domain::Attribute],
) -> Result<Vec<DatasetInstance>, HarnessError> {
    schedule
        .par_iter()
        .enumerate()
        .map(|(i, &attr)| {
            let seed = derive_seed(cfg.master_seed, streams::INSTANCE, i as u64);
            let env = &environments[i % environments.len()];
            let n = object_count_for(cfg, seed);
            let draft = generate_instance(env, n, attr, seed)?;
            Ok(assemble(instance_id(i), draft))
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    schema_version: u32,
    config: GenerationConfig,
    instances: Vec<String>,
    environments: Vec<String>,
}

pub fn environment_nl(env: &Environment) -> String {
    let mut out: String = GENERIC_RULES_NL.iter().map(|s| format!("{s}\n")).collect();
    out.push_str(&env.render_nl());
    out
}

/// One line per instance: id, then the answer values.
pub fn answer_line(inst: &DatasetInstance) -> String {
    let mut line = inst.id.clone();
    for v in &inst.answer.values {
        line.push(' ');
        line.push_str(v.name());
    }
    line
}

fn write(path: &Path, text: &str) -> Result<(), HarnessError> {
    fs::write(path, text)?;
    Ok(())
}

pub fn write_environments(out: &Path, environments: &[Environment]) -> Result<(), HarnessError> {
    let dir = out.join("environments");
    fs::create_dir_all(&dir)?;
    for env in environments {
        write(&dir.join(format!("{}.lp", env.id)), &env.render_program())?;
        write(&dir.join(format!("{}.txt", env.id)), &environment_nl(env))?;
    }
    Ok(())
}

/// Writes the full output tree under `out`.
pub fn write_dataset(out: &Path, ds: &Dataset) -> Result<(), HarnessError> {
    write_environments(out, &ds.environments)?;
    for sub in ["scenes", "questions", "answers", "instances", "prompts"] {
        fs::create_dir_all(out.join(sub))?;
    }
    let mut gold = String::new();
    for inst in &ds.instances {
        let id = &inst.id;
        write(
            &out.join("scenes").join(format!("{id}.complete.json")),
            &(super::dataset::scene_to_json(&inst.complete) + "\n"),
        )?;
        write(
            &out.join("scenes").join(format!("{id}.partial.json")),
            &(super::dataset::scene_to_json(&inst.partial) + "\n"),
        )?;
        write(
            &out.join("questions").join(format!("{id}.json")),
            &(serde_json::to_string_pretty(&inst.question)? + "\n"),
        )?;
        write(
            &out.join("instances").join(format!("{id}.json")),
            &inst.to_json(),
        )?;
        write_prompts(out, inst)?;
        gold.push_str(&answer_line(inst));
        gold.push('\n');
    }
    write(&out.join("answers").join("gold.txt"), &gold)?;
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        config: ds.config.clone(),
        instances: ds.instances.iter().map(|i| i.id.clone()).collect(),
        environments: ds.environments.iter().map(|e| e.id.clone()).collect(),
    };
    write(
        &out.join("dataset.json"),
        &(serde_json::to_string_pretty(&manifest)? + "\n"),
    )?;
    Ok(())
}

pub fn write_prompts(out: &Path, inst: &DatasetInstance) -> Result<(), HarnessError> {
    let dir = out.join("prompts");
    fs::create_dir_all(&dir)?;
    for style in [PromptStyle::Standalone, PromptStyle::Parser] {
        write(
            &dir.join(format!("{}.{}.txt", inst.id, style.name())),
            &emit_prompt(inst, style),
        )?;
    }
    Ok(())
}

/// Reads every instance listed in the manifest under `dir`, or every file
/// in `dir/instances` when there is no manifest.
pub fn read_dataset(dir: &Path) -> Result<Vec<DatasetInstance>, HarnessError> {
    let manifest = dir.join("dataset.json");
    let names: Vec<String> = if manifest.exists() {
        let m: Manifest = serde_json::from_str(&fs::read_to_string(&manifest)?)?;
        m.instances
            .into_iter()
            .map(|id| format!("{id}.json"))
            .collect()
    } else {
        let mut names: Vec<String> = fs::read_dir(dir.join("instances"))?
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .filter(|n| n.ends_with(".json"))
            .collect();
        names.sort();
        names
    };
    names
        .par_iter()
        .map(|n| super::dataset::read_instance(&dir.join("instances").join(n)))
        .collect()
}
