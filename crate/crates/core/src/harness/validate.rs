//! Re-checking stored instances from scratch.

use serde::Serialize;

use super::dataset::DatasetInstance;
use crate::forge::reassemble;
use crate::oracle::{brute_force_solve, naive_scene_ok, solve};
use crate::solver::check_scene;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub instances: usize,
    pub constraint_violations: usize,
    pub structural_violations: usize,
    pub answer_mismatches: usize,
    pub validity_violations: usize,
    /// One line per problem, prefixed with the instance id.
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Re-checks one instance and adds whatever it finds to `report`.
pub fn check_instance(inst: &DatasetInstance, report: &mut ValidationReport) {
    let id = &inst.id;
    let env = &inst.environment;
    report.instances += 1;
    let mut problem = |counter: fn(&mut ValidationReport) -> &mut usize, msg: String| {
        *counter(report) += 1;
        report.problems.push(format!("{id}: {msg}"));
    };

    let checked = check_scene(&inst.complete, env);
    if !checked.satisfied() {
        problem(
            |r| &mut r.constraint_violations,
            format!("complete scene violates {:?}", checked.violations),
        );
    }
    if !naive_scene_ok(&inst.complete, env) {
        problem(
            |r| &mut r.constraint_violations,
            "complete scene fails the naive checker".into(),
        );
    }
    for (name, scene) in [("complete", &inst.complete), ("partial", &inst.partial)] {
        for v in scene.structural_violations() {
            problem(
                |r| &mut r.structural_violations,
                format!("{name} scene: {v}"),
            );
        }
    }
    let rebuilt = reassemble(&inst.partial, &inst.hidden);
    if rebuilt != inst.complete {
        problem(
            |r| &mut r.structural_violations,
            "partial scene and hidden object do not reassemble".into(),
        );
    }
    if !naive_scene_ok(&rebuilt, env) {
        problem(
            |r| &mut r.constraint_violations,
            "reassembled scene fails the naive checker".into(),
        );
    }

    match solve(&inst.partial, env, &inst.form) {
        Ok((answer, _)) if answer == inst.answer => {}
        Ok((answer, _)) => problem(
            |r| &mut r.answer_mismatches,
            format!("stored answer {} but solver gives {answer}", inst.answer),
        ),
        Err(e) => problem(|r| &mut r.answer_mismatches, format!("solver fails: {e}")),
    }
    match brute_force_solve(&inst.partial, env, &inst.form) {
        Ok(answer) if answer == inst.answer => {}
        Ok(answer) => problem(
            |r| &mut r.answer_mismatches,
            format!(
                "stored answer {} but brute force gives {answer}",
                inst.answer
            ),
        ),
        Err(e) => problem(
            |r| &mut r.answer_mismatches,
            format!("brute force fails: {e}"),
        ),
    }
    if inst.answer.is_empty() || inst.answer.is_full() {
        problem(
            |r| &mut r.validity_violations,
            format!("answer set {} is empty or complete", inst.answer),
        );
    }
    let truth = inst.hidden.get(inst.answer.attribute);
    if !inst.answer.contains(truth) || inst.question.ground_truth != truth {
        problem(
            |r| &mut r.validity_violations,
            format!("ground truth {truth} missing from {}", inst.answer),
        );
    }
}

pub fn validate_dataset(instances: &[DatasetInstance]) -> ValidationReport {
    let mut report = ValidationReport::default();
    for inst in instances {
        check_instance(inst, &mut report);
    }
    report
}
