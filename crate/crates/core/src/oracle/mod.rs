//! Answer sets for questions about the hidden object, with a step-by-step
//! account of which completions were ruled out and why.

pub mod naive;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{Attribute, HiddenCandidate, Region, SceneGraph, Value};
use crate::dsl::{render_constraint_nl, ConstraintInstance, Environment, QuestionForm};
use crate::solver::{
    check_scene, enumerate_hidden_candidates, QuestionFilter, RuleRef, SolveError,
};

pub use naive::{brute_force_solve, naive_scene_ok};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("no completion of the scene satisfies the question")]
    EmptyAnswer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerSet {
    pub attribute: Attribute,
    pub values: BTreeSet<Value>,
}

impl AnswerSet {
    pub fn new(attribute: Attribute, values: impl IntoIterator<Item = Value>) -> AnswerSet {
        AnswerSet {
            attribute,
            values: values.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Every value of the attribute is possible.
    pub fn is_full(&self) -> bool {
        self.values.len() == self.attribute.cardinality()
    }

    pub fn contains(&self, v: Value) -> bool {
        self.values.contains(&v)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.values.iter().map(|v| v.name()).collect()
    }
}

impl fmt::Display for AnswerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(", "))
    }
}

/// How a property of the hidden object became known.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FactSource {
    /// Named directly in the question.
    Stated,
    /// Copied from a visible object through a same-property atom.
    Derived,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// No completion matching the question lies in this group.
    Question,
    Rules(Vec<RuleRef>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Admitted,
    Eliminated(Witness),
}

impl Verdict {
    pub fn is_admitted(&self) -> bool {
        matches!(self, Verdict::Admitted)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceStep {
    Fixed {
        attribute: Attribute,
        value: Value,
        source: FactSource,
    },
    Region {
        region: Region,
        verdict: Verdict,
    },
    Value {
        value: Value,
        verdict: Verdict,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationTrace {
    pub query_attribute: Attribute,
    pub steps: Vec<TraceStep>,
}

impl EliminationTrace {
    pub fn fixed(&self) -> Vec<(Attribute, Value, FactSource)> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                TraceStep::Fixed {
                    attribute,
                    value,
                    source,
                } => Some((*attribute, *value, *source)),
                _ => None,
            })
            .collect()
    }

    pub fn region_verdict(&self, r: Region) -> Option<&Verdict> {
        self.steps.iter().find_map(|s| match s {
            TraceStep::Region { region, verdict } if *region == r => Some(verdict),
            _ => None,
        })
    }

    pub fn value_verdict(&self, v: Value) -> Option<&Verdict> {
        self.steps.iter().find_map(|s| match s {
            TraceStep::Value { value, verdict } if *value == v => Some(verdict),
            _ => None,
        })
    }

    pub fn admitted_regions(&self) -> Vec<Region> {
        Region::ALL
            .into_iter()
            .filter(|r| self.region_verdict(*r).is_some_and(Verdict::is_admitted))
            .collect()
    }

    pub fn admitted_values(&self) -> Vec<Value> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                TraceStep::Value {
                    value,
                    verdict: Verdict::Admitted,
                } => Some(*value),
                _ => None,
            })
            .collect()
    }

    /// Plain-text reasoning steps.
    pub fn render(&self, env: &Environment) -> Vec<String> {
        let mut out = Vec::new();
        let fixed = self.fixed();
        for (attr, value, source) in &fixed {
            out.push(match source {
                FactSource::Stated => format!("The missing object's {attr} is {value}."),
                FactSource::Derived => {
                    format!("=> The missing object's {attr} is {value}, as the reference object's.")
                }
            });
        }
        let desc = describe_fixed(&fixed);
        if !fixed.is_empty() {
            out.push(format!("=> The missing object is a {desc}."));
        }
        let cap = capitalize(&format!("a {desc}"));
        for r in Region::ALL {
            match self.region_verdict(r) {
                Some(Verdict::Admitted) => {
                    let local: Vec<String> = env
                        .constraints()
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| c.is_region_local() && c.scope().contains(&r))
                        .filter_map(|(k, _)| env.source_lines(k).map(span))
                        .collect();
                    if local.is_empty() {
                        out.push(format!("{cap} CAN be located at region {r}."));
                    } else {
                        out.push(format!(
                            "{cap} CAN be located at region {r}, as none of the constraints in lines {} is violated.",
                            join(&local)
                        ));
                    }
                }
                Some(Verdict::Eliminated(Witness::Question)) => out.push(format!(
                    "{cap} CAN'T be located in region {r}, as the question rules it out."
                )),
                Some(Verdict::Eliminated(Witness::Rules(rules))) => out.push(format!(
                    "{cap} CAN'T be located in region {r}, as it violates {}.",
                    cite(env, rules)
                )),
                None => {}
            }
        }
        let regions = self.admitted_regions();
        let region_list = join(&regions.iter().map(|r| r.to_string()).collect::<Vec<_>>());
        let region_word = if regions.len() == 1 {
            "region"
        } else {
            "regions"
        };
        out.push(format!(
            "=> The missing {desc} is located at {region_word} {region_list}."
        ));

        let attr = self.query_attribute;
        let catalog: Vec<&str> = attr.values().iter().map(|v| v.name()).collect();
        out.push(format!(
            "There are {} possible values for the {attr} property: {}.",
            catalog.len(),
            catalog.join(", ")
        ));
        for step in &self.steps {
            if let TraceStep::Value {
                value,
                verdict: Verdict::Eliminated(w),
            } = step
            {
                out.push(match w {
                    Witness::Question => format!("The question discards the {value} {attr}."),
                    Witness::Rules(rules) => format!(
                        "The environment {} the {value} {attr} for {region_word} {region_list}.",
                        cite_discard(env, rules)
                    ),
                });
            }
        }
        let values: Vec<&str> = self.admitted_values().iter().map(|v| v.name()).collect();
        out.push(format!(
            "=> The possible answer set for Q is: {}.",
            values.join(", ")
        ));
        out
    }
}

fn describe_fixed(fixed: &[(Attribute, Value, FactSource)]) -> String {
    let get = |a: Attribute| fixed.iter().find(|f| f.0 == a).map(|f| f.1.name());
    let mut words: Vec<&str> = [Attribute::Size, Attribute::Color, Attribute::Material]
        .into_iter()
        .filter_map(get)
        .collect();
    words.push(get(Attribute::Shape).unwrap_or("object"));
    words.join(" ")
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn span((a, b): (usize, usize)) -> String {
    if a == b {
        a.to_string()
    } else {
        format!("{a}-{b}")
    }
}

fn join(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [a] => a.clone(),
        [a, b] => format!("{a} and {b}"),
        [init @ .., last] => format!("{}, and {last}", init.join(", ")),
    }
}

fn rule_text(env: &Environment, rule: RuleRef) -> String {
    match rule {
        RuleRef::Generic(g) => format!("the generic rule \"{}\"", g.describe()),
        RuleRef::Constraint(k) => format!(
            "the constraint \"{}\"",
            render_constraint_nl(&env.constraints()[k])
        ),
    }
}

fn line_spans(env: &Environment, rules: &[RuleRef]) -> Option<Vec<(usize, usize)>> {
    rules
        .iter()
        .map(|r| match r {
            RuleRef::Constraint(k) => env.source_lines(*k),
            RuleRef::Generic(_) => None,
        })
        .collect()
}

/// "the constraint at line 50", "the constraints in lines 53, 54, and 55".
fn cite(env: &Environment, rules: &[RuleRef]) -> String {
    match line_spans(env, rules) {
        Some(spans) => {
            let texts: Vec<String> = spans.iter().copied().map(span).collect();
            if spans.len() == 1 && spans[0].0 == spans[0].1 {
                format!("the constraint at line {}", texts[0])
            } else {
                format!("the constraints in lines {}", join(&texts))
            }
        }
        None => join(&rules.iter().map(|r| rule_text(env, *r)).collect::<Vec<_>>()),
    }
}

fn cite_discard(env: &Environment, rules: &[RuleRef]) -> String {
    match line_spans(env, rules) {
        Some(spans) => {
            let texts: Vec<String> = spans.iter().copied().map(span).collect();
            if spans.len() == 1 && spans[0].0 == spans[0].1 {
                format!("constraint at line {} discards", texts[0])
            } else {
                format!("constraints at lines {} discard", join(&texts))
            }
        }
        None => format!(
            "{} discard{}",
            join(&rules.iter().map(|r| rule_text(env, *r)).collect::<Vec<_>>()),
            if rules.len() == 1 { "s" } else { "" }
        ),
    }
}

/// Computes the answer set and an elimination trace.
pub fn solve(
    partial: &SceneGraph,
    env: &Environment,
    q: &QuestionForm,
) -> Result<(AnswerSet, EliminationTrace), OracleError> {
    let admitted = enumerate_hidden_candidates(partial, env, Some(q))?;
    if admitted.is_empty() {
        return Err(OracleError::EmptyAnswer);
    }
    let attr = q.query_attribute;
    let answer = AnswerSet::new(attr, admitted.iter().map(|h| h.get(attr)));

    let filter = QuestionFilter::new(partial, q);
    let consistent: Vec<HiddenCandidate> = HiddenCandidate::all()
        .filter(|h| filter.admits(h))
        .collect();
    let mut steps = Vec::new();

    let stated = q.stated(0);
    for a in Attribute::ALL {
        let values: BTreeSet<Value> = consistent.iter().map(|h| h.get(a)).collect();
        if values.len() == 1 {
            let value = *values.iter().next().expect("one value");
            let source = if stated.contains(&value) {
                FactSource::Stated
            } else {
                FactSource::Derived
            };
            steps.push(TraceStep::Fixed {
                attribute: a,
                value,
                source,
            });
        }
    }

    let admitted_regions: Vec<Region> = Region::ALL
        .into_iter()
        .filter(|r| admitted.iter().any(|h| h.region == *r))
        .collect();
    for r in Region::ALL {
        let verdict = if admitted_regions.contains(&r) {
            Verdict::Admitted
        } else {
            let group: Vec<HiddenCandidate> = consistent
                .iter()
                .copied()
                .filter(|h| h.region == r)
                .collect();
            Verdict::Eliminated(witness(partial, env, &group))
        };
        steps.push(TraceStep::Region { region: r, verdict });
    }
    for &v in attr.values() {
        let verdict = if answer.contains(v) {
            Verdict::Admitted
        } else {
            let group: Vec<HiddenCandidate> = consistent
                .iter()
                .copied()
                .filter(|h| h.get(attr) == v && admitted_regions.contains(&h.region))
                .collect();
            Verdict::Eliminated(witness(partial, env, &group))
        };
        steps.push(TraceStep::Value { value: v, verdict });
    }
    Ok((
        answer,
        EliminationTrace {
            query_attribute: attr,
            steps,
        },
    ))
}

/// The rules every completion in `group` breaks; failing a common rule,
/// the first rule each breaks.
fn witness(partial: &SceneGraph, env: &Environment, group: &[HiddenCandidate]) -> Witness {
    if group.is_empty() {
        return Witness::Question;
    }
    let hidden = partial.len();
    let mut common: Option<BTreeSet<RuleRef>> = None;
    let mut firsts = BTreeSet::new();
    for h in group {
        let mut objects = partial.objects.clone();
        objects.push(h.to_object(hidden));
        let scene = SceneGraph {
            relations: crate::domain::Relations::empty(objects.len()),
            objects,
            completeness: crate::domain::Completeness::Complete,
            hidden_ref: None,
        };
        let report = check_scene(&scene, env);
        let relevant: BTreeSet<RuleRef> = report
            .violations
            .iter()
            .filter(|v| v.witnesses.contains(&hidden) || is_aggregate(env, v.rule))
            .map(|v| v.rule)
            .collect();
        let relevant = if relevant.is_empty() {
            report.rules().collect()
        } else {
            relevant
        };
        if let Some(first) = relevant.iter().next() {
            firsts.insert(*first);
        }
        common = Some(match common {
            None => relevant,
            Some(c) => c.intersection(&relevant).copied().collect(),
        });
    }
    let common = common.unwrap_or_default();
    let chosen = if common.is_empty() { firsts } else { common };
    Witness::Rules(chosen.into_iter().collect())
}

fn is_aggregate(env: &Environment, rule: RuleRef) -> bool {
    match rule {
        RuleRef::Constraint(k) => matches!(
            env.constraints()[k],
            ConstraintInstance::ExactlyN { .. }
                | ConstraintInstance::AtLeastNPairs { .. }
                | ConstraintInstance::AtMostNPairs { .. }
        ),
        RuleRef::Generic(_) => false,
    }
}
