//! Scoring predicted answer sets: exact match and Jaccard index.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::HarnessError;
use crate::domain::{Attribute, Value};

pub type ValueSet = BTreeSet<Value>;

/// 1 when the sets are equal, else 0.
pub fn exact_accuracy(actual: &ValueSet, predicted: &ValueSet) -> f64 {
    if actual == predicted {
        1.0
    } else {
        0.0
    }
}

/// |A ∩ P| / |A ∪ P|; two empty sets score 1.
pub fn jaccard_index(actual: &ValueSet, predicted: &ValueSet) -> f64 {
    let union = actual.union(predicted).count();
    if union == 0 {
        return 1.0;
    }
    actual.intersection(predicted).count() as f64 / union as f64
}

/// A line of a gold or prediction file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub id: String,
    pub values: ValueSet,
}

/// Parses one record per line: an id, then labels separated by spaces or
/// commas. Braces and `#` fences around the labels are ignored, as is
/// letter case. Blank lines are skipped.
pub fn parse_records(text: &str) -> Result<Vec<Record>, HarnessError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (id, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let mut values = BTreeSet::new();
        for label in rest
            .split(|c: char| c.is_whitespace() || matches!(c, ',' | '{' | '}' | '#'))
            .filter(|s| !s.is_empty())
        {
            let v = Value::parse_label(label).map_err(|_| HarnessError::UnknownLabel {
                line: n + 1,
                label: label.to_string(),
            })?;
            values.insert(v);
        }
        out.push(Record {
            id: id.to_string(),
            values,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceScore {
    pub id: String,
    pub attribute: Option<Attribute>,
    pub exact: f64,
    pub jaccard: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Aggregate {
    pub count: usize,
    pub exact: f64,
    pub jaccard: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalResult {
    pub overall: Aggregate,
    pub by_attribute: BTreeMap<String, Aggregate>,
    pub instances: Vec<InstanceScore>,
}

impl EvalResult {
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<10} {:>7} {:>8} {:>8}\n",
            "attribute", "count", "exact", "jaccard"
        );
        let row = |name: &str, a: &Aggregate| {
            format!(
                "{:<10} {:>7} {:>8.4} {:>8.4}\n",
                name, a.count, a.exact, a.jaccard
            )
        };
        for (name, a) in &self.by_attribute {
            out.push_str(&row(name, a));
        }
        out.push_str(&row("all", &self.overall));
        out
    }
}

fn aggregate<'a>(scores: impl Iterator<Item = &'a InstanceScore>) -> Aggregate {
    let mut a = Aggregate::default();
    for s in scores {
        a.count += 1;
        a.exact += s.exact;
        a.jaccard += s.jaccard;
    }
    if a.count > 0 {
        a.exact /= a.count as f64;
        a.jaccard /= a.count as f64;
    }
    a
}

/// Scores predictions against gold answers, matched by id. Every gold id
/// needs exactly one prediction and vice versa. The query attribute of a
/// gold record is read off its values.
pub fn evaluate(gold: &[Record], predictions: &[Record]) -> Result<EvalResult, HarnessError> {
    let mut predicted: HashMap<&str, &ValueSet> = HashMap::new();
    for p in predictions {
        if predicted.insert(p.id.as_str(), &p.values).is_some() {
            return Err(HarnessError::IdMismatch(format!(
                "duplicate prediction for `{}`",
                p.id
            )));
        }
    }
    if predictions.len() != gold.len() {
        let gold_ids: BTreeSet<&str> = gold.iter().map(|g| g.id.as_str()).collect();
        if let Some(extra) = predictions
            .iter()
            .find(|p| !gold_ids.contains(p.id.as_str()))
        {
            return Err(HarnessError::IdMismatch(format!(
                "no gold answer for `{}`",
                extra.id
            )));
        }
    }
    let mut instances = Vec::with_capacity(gold.len());
    for g in gold {
        let p = predicted
            .get(g.id.as_str())
            .ok_or_else(|| HarnessError::IdMismatch(format!("no prediction for `{}`", g.id)))?;
        instances.push(InstanceScore {
            id: g.id.clone(),
            attribute: g.values.iter().next().map(|v| v.attribute()),
            exact: exact_accuracy(&g.values, p),
            jaccard: jaccard_index(&g.values, p),
        });
    }
    let mut by_attribute = BTreeMap::new();
    for a in Attribute::ALL {
        let group: Vec<&InstanceScore> = instances
            .iter()
            .filter(|s| s.attribute == Some(a))
            .collect();
        if !group.is_empty() {
            by_attribute.insert(a.name().to_string(), aggregate(group.into_iter()));
        }
    }
    Ok(EvalResult {
        overall: aggregate(instances.iter()),
        by_attribute,
        instances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[Value]) -> ValueSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn metric_cases() {
        use Value::*;
        let a = set(&[Small, Medium]);
        assert_eq!((exact_accuracy(&a, &a), jaccard_index(&a, &a)), (1.0, 1.0));
        let p = set(&[Small]);
        assert_eq!((exact_accuracy(&a, &p), jaccard_index(&a, &p)), (0.0, 0.5));
        let (r, b) = (set(&[Red]), set(&[Blue]));
        assert_eq!((exact_accuracy(&r, &b), jaccard_index(&r, &b)), (0.0, 0.0));
    }

    #[test]
    fn record_parsing() {
        let recs = parse_records("q1 small, Medium\n\nq2 ###{Gray}###\nq3\n").unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0].values, set(&[Value::Small, Value::Medium]));
        assert_eq!(recs[1].values, set(&[Value::Gray]));
        assert!(recs[2].values.is_empty());
        assert!(matches!(
            parse_records("q1 magenta"),
            Err(HarnessError::UnknownLabel { line: 1, .. })
        ));
    }

    #[test]
    fn id_alignment() {
        let gold = parse_records("a red\nb cube").unwrap();
        let pred = parse_records("b cube\na red blue").unwrap();
        let r = evaluate(&gold, &pred).unwrap();
        assert_eq!(r.overall.count, 2);
        assert_eq!(r.overall.exact, 0.5);
        assert_eq!(r.overall.jaccard, 0.75);
        assert!(evaluate(&gold, &parse_records("a red").unwrap()).is_err());
        assert!(evaluate(&gold, &parse_records("a red\nb cube\nc red").unwrap()).is_err());
        assert!(evaluate(&gold, &parse_records("a red\na red\nb cube").unwrap()).is_err());
    }
}
