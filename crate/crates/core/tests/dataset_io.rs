mod common;

use std::fs;

use common::*;
use poqa_core::domain::{Relation, Value};
use poqa_core::forge::GenerationConfig;
use poqa_core::harness::dataset::{parse_scene, read_instance, scene_to_json, DatasetInstance};
use poqa_core::harness::eval::{evaluate, parse_records};
use poqa_core::harness::pipeline::{generate_dataset, read_dataset, write_dataset, Dataset};
use poqa_core::harness::prompt::{answer_envelope, emit_prompt, PromptStyle};
use poqa_core::harness::stats::dataset_stats;
use poqa_core::harness::validate::validate_dataset;
use poqa_core::harness::HarnessError;

fn small() -> Dataset {
    let cfg = GenerationConfig {
        environment_count: 3,
        master_seed: 11,
        ..GenerationConfig::default()
    };
    generate_dataset(&cfg, 24).unwrap()
}

#[test]
fn dict_scene_parses() {
    let scene = parse_scene(DICT_SCENE).unwrap();
    assert_eq!(scene.len(), 6);
    assert_eq!(scene.relations.lists(Relation::Left)[0], vec![4]);
    assert!(scene.relations.holds(Relation::Behind, 5, 4));
    assert_eq!(scene.objects[3].material, Value::Rubber);
    assert_eq!(scene.objects[1].region.index(), 3);
    assert!(scene.structural_violations().is_empty());
    // JSON output reads back to the same graph.
    assert_eq!(parse_scene(&scene_to_json(&scene)).unwrap(), scene);
}

#[test]
fn instance_round_trip() {
    let ds = small();
    for inst in &ds.instances {
        let back = DatasetInstance::from_json(&inst.to_json()).unwrap();
        assert_eq!(&back, inst);
    }
}

#[test]
fn directory_round_trip() {
    let ds = small();
    let dir = tempfile::tempdir().unwrap();
    write_dataset(dir.path(), &ds).unwrap();
    let back = read_dataset(dir.path()).unwrap();
    assert_eq!(back, ds.instances);

    let report = validate_dataset(&back);
    assert!(report.is_clean(), "{:?}", report.problems);
    assert_eq!(dataset_stats(&back).instances, 24);

    for sub in [
        "environments/env-00.lp",
        "environments/env-00.txt",
        "answers/gold.txt",
        "dataset.json",
    ] {
        assert!(dir.path().join(sub).exists(), "{sub}");
    }
    let first = &ds.instances[0].id;
    for f in [
        format!("scenes/{first}.complete.json"),
        format!("scenes/{first}.partial.json"),
        format!("questions/{first}.json"),
        format!("prompts/{first}.standalone.txt"),
        format!("prompts/{first}.parser.txt"),
    ] {
        assert!(dir.path().join(&f).exists(), "{f}");
    }

    // Gold answers score perfectly against themselves.
    let gold =
        parse_records(&fs::read_to_string(dir.path().join("answers/gold.txt")).unwrap()).unwrap();
    let result = evaluate(&gold, &gold).unwrap();
    assert_eq!(result.overall.exact, 1.0);
    assert_eq!(result.overall.jaccard, 1.0);
}

#[test]
fn truncated_instance_is_an_error() {
    let ds = small();
    let dir = tempfile::tempdir().unwrap();
    let text = ds.instances[0].to_json();
    let path = dir.path().join("cut.json");
    fs::write(&path, &text[..text.len() / 2]).unwrap();
    assert!(matches!(read_instance(&path), Err(HarnessError::Json(_))));
    assert!(matches!(
        read_instance(&dir.path().join("missing.json")),
        Err(HarnessError::Io(_))
    ));
}

#[test]
fn schema_mismatches_are_rejected() {
    let ds = small();
    let text = ds.instances[0].to_json();

    let newer = text.replacen("\"schema_version\": 1", "\"schema_version\": 2", 1);
    assert!(matches!(
        DatasetInstance::from_json(&newer),
        Err(HarnessError::Schema(_))
    ));

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["surprise"] = serde_json::json!(true);
    assert!(DatasetInstance::from_json(&v.to_string()).is_err());

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["object_count"] = serde_json::json!(99);
    assert!(matches!(
        DatasetInstance::from_json(&v.to_string()),
        Err(HarnessError::Schema(_))
    ));

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["partial"]["objects"][0]["color"] = serde_json::json!("teal");
    assert!(DatasetInstance::from_json(&v.to_string()).is_err());
}

#[test]
fn prompts_carry_scene_rules_and_answer() {
    let ds = small();
    let inst = &ds.instances[0];
    let standalone = emit_prompt(inst, PromptStyle::Standalone);
    assert!(standalone.contains(&inst.question.text));
    assert!(standalone.contains("\"relationships\""));
    assert!(standalone
        .trim_end()
        .ends_with(&answer_envelope(&inst.answer)));
    for line in inst.environment.nl_sentences() {
        assert!(standalone.contains(&line), "{line}");
    }
    let parser = emit_prompt(inst, PromptStyle::Parser);
    assert!(parser.contains(&inst.question.logical_form));
    assert!(!parser.contains("\"relationships\""));
}
