//! Distribution summaries of a dataset.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use super::dataset::DatasetInstance;

pub type Histogram = BTreeMap<String, usize>;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DatasetStats {
    pub instances: usize,
    pub templates: Histogram,
    pub query_attributes: Histogram,
    pub object_counts: Histogram,
    pub environments: Histogram,
    pub answer_sizes: Histogram,
    /// Answer sets per query attribute, keyed like `{small, medium}`.
    pub answer_sets: BTreeMap<String, Histogram>,
    /// Distinct (attribute, answer set) pairs that occur.
    pub solution_space: usize,
}

fn bump(h: &mut Histogram, key: impl Into<String>) {
    *h.entry(key.into()).or_default() += 1;
}

pub fn dataset_stats(dataset: &[DatasetInstance]) -> DatasetStats {
    let mut s = DatasetStats {
        instances: dataset.len(),
        ..DatasetStats::default()
    };
    for inst in dataset {
        bump(&mut s.templates, inst.question.template.clone());
        bump(&mut s.query_attributes, inst.answer.attribute.name());
        bump(&mut s.object_counts, format!("{:02}", inst.complete.len()));
        bump(&mut s.environments, inst.environment.id.clone());
        bump(&mut s.answer_sizes, format!("{:02}", inst.answer.len()));
        bump(
            s.answer_sets
                .entry(inst.answer.attribute.name().to_string())
                .or_default(),
            inst.answer.to_string(),
        );
    }
    s.solution_space = s.answer_sets.values().map(|h| h.len()).sum();
    s
}

impl DatasetStats {
    pub fn table(&self) -> String {
        let mut out = String::new();
        let total = self.instances.max(1) as f64;
        let mut section = |title: &str, h: &Histogram| {
            let _ = writeln!(out, "{title}");
            for (k, v) in h {
                let _ = writeln!(out, "  {k:<32} {v:>7} {:>6.1}%", 100.0 * *v as f64 / total);
            }
        };
        section("query attribute", &self.query_attributes);
        section("template", &self.templates);
        section("object count", &self.object_counts);
        section("environment", &self.environments);
        section("answer size", &self.answer_sizes);
        for (attr, h) in &self.answer_sets {
            section(&format!("answer sets ({attr})"), h);
        }
        let _ = writeln!(out, "instances {}", self.instances);
        let _ = writeln!(out, "distinct answer sets {}", self.solution_space);
        out
    }
}
