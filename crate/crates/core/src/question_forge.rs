//! Questions about the hidden object: template instantiation, the
//! validity bound on answer sets, and query-attribute balancing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{Attribute, ObjectSpec, Relation, SceneGraph, Value};
use crate::dsl::{Environment, QAtom, QuestionForm};
use crate::forge::{derive_seed, generate_complete_scene, make_partial, ForgeError};
use crate::oracle::{solve, AnswerSet, OracleError};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TemplateStyle {
    Relational,
    SameProperty,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct QuestionTemplate {
    pub id: &'static str,
    pub style: TemplateStyle,
    /// Slots: `{hidden}`, `{reference}`, `{relation}`, `{same}`, `{query}`.
    pub pattern: &'static str,
    /// Noun used when a descriptor names no shape.
    pub noun: &'static str,
}

pub const TEMPLATES: [QuestionTemplate; 6] = [
    QuestionTemplate {
        id: "rel-what",
        style: TemplateStyle::Relational,
        pattern: "What {query} is the {hidden} that is {relation} the {reference}?",
        noun: "thing",
    },
    QuestionTemplate {
        id: "rel-is-what",
        style: TemplateStyle::Relational,
        pattern: "The {hidden} that is {relation} the {reference} is what {query}?",
        noun: "thing",
    },
    QuestionTemplate {
        id: "rel-there-is",
        style: TemplateStyle::Relational,
        pattern: "There is a {hidden} {relation} the {reference}; what is its {query}?",
        noun: "thing",
    },
    QuestionTemplate {
        id: "same-what",
        style: TemplateStyle::SameProperty,
        pattern: "What is the {query} of the other {hidden} that is the same {same} as the {reference}?",
        noun: "thing",
    },
    QuestionTemplate {
        id: "same-there-is",
        style: TemplateStyle::SameProperty,
        pattern: "There is another {hidden} that is the same {same} as the {reference}; what {query} is it?",
        noun: "object",
    },
    QuestionTemplate {
        id: "same-is-what",
        style: TemplateStyle::SameProperty,
        pattern: "The other {hidden} that is the same {same} as the {reference} is what {query}?",
        noun: "thing",
    },
];

pub fn template(id: &str) -> Option<&'static QuestionTemplate> {
    TEMPLATES.iter().find(|t| t.id == id)
}

/// Running query-attribute counts against target fractions.
#[derive(Clone, Debug, PartialEq)]
pub struct BalanceLedger {
    pub counts: [u64; 4],
    pub targets: [f64; 4],
}

impl BalanceLedger {
    pub fn new(targets: [f64; 4]) -> Self {
        BalanceLedger {
            counts: [0; 4],
            targets,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn record(&mut self, attr: Attribute) {
        self.counts[attr.index()] += 1;
    }

    pub fn fractions(&self) -> [f64; 4] {
        let total = self.total().max(1) as f64;
        self.counts.map(|c| c as f64 / total)
    }
}

/// The attribute whose realized fraction falls furthest below its target,
/// ties going to the earlier attribute.
pub fn choose_query_attribute(ledger: &BalanceLedger) -> Attribute {
    let realized = ledger.fractions();
    let mut best = Attribute::Color;
    let mut best_deficit = f64::NEG_INFINITY;
    for a in Attribute::ALL {
        let deficit = ledger.targets[a.index()] - realized[a.index()];
        if deficit > best_deficit + 1e-12 {
            best = a;
            best_deficit = deficit;
        }
    }
    best
}

/// Query attributes for `count` questions, each chosen with feedback
/// from the ones before.
pub fn query_schedule(targets: [f64; 4], count: usize) -> Vec<Attribute> {
    let mut ledger = BalanceLedger::new(targets);
    (0..count)
        .map(|_| {
            let a = choose_query_attribute(&ledger);
            ledger.record(a);
            a
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedQuestion {
    pub template: &'static QuestionTemplate,
    pub form: QuestionForm,
    pub text: String,
}

fn relation_phrase(rel: Relation) -> &'static str {
    match rel {
        Relation::Left => "left of",
        Relation::Right => "right of",
        Relation::Front => "in front of",
        Relation::Behind => "behind",
    }
}

/// Noun phrase in size, color, material, shape order.
pub fn noun_phrase(values: &[Value], noun: &str) -> String {
    let get = |a: Attribute| values.iter().find(|v| v.attribute() == a).copied();
    let mut words: Vec<&str> = Vec::new();
    if let Some(s) = get(Attribute::Size) {
        words.push(if s == Value::Large { "big" } else { s.name() });
    }
    for a in [Attribute::Color, Attribute::Material] {
        if let Some(v) = get(a) {
            words.push(v.name());
        }
    }
    words.push(get(Attribute::Shape).map_or(noun, |v| v.name()));
    words.join(" ")
}

/// Surface text of a form produced by [`instantiate_question`].
pub fn render_text(t: &QuestionTemplate, form: &QuestionForm) -> String {
    let hidden = noun_phrase(&form.stated(0), t.noun);
    let reference = noun_phrase(&form.stated(1), t.noun);
    let mut text = t
        .pattern
        .replace("{hidden}", &hidden)
        .replace("{reference}", &reference)
        .replace("{query}", form.query_attribute.name());
    for atom in &form.atoms {
        match atom {
            QAtom::Rel { rel, .. } => text = text.replace("{relation}", relation_phrase(*rel)),
            QAtom::Same { attr, .. } => text = text.replace("{same}", attr.name()),
            _ => {}
        }
    }
    text
}

fn random_subset<T: Copy>(rng: &mut ChaCha8Rng, pool: &[T]) -> Vec<T> {
    loop {
        let picked: Vec<T> = pool.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if !picked.is_empty() {
            return picked;
        }
    }
}

/// A descriptor for `target` over `pool`, preferring the smallest one that
/// singles it out among `others`.
fn reference_descriptor(
    rng: &mut ChaCha8Rng,
    target: &ObjectSpec,
    others: &[&ObjectSpec],
    pool: &[Attribute],
) -> Vec<Value> {
    let mut subsets: Vec<Vec<Attribute>> = (1u32..(1 << pool.len()))
        .map(|mask| {
            pool.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| *a)
                .collect()
        })
        .collect();
    subsets.shuffle(rng);
    subsets.sort_by_key(Vec::len);
    let values = |s: &[Attribute]| -> Vec<Value> { s.iter().map(|a| target.get(*a)).collect() };
    subsets
        .iter()
        .find(|s| {
            !others
                .iter()
                .any(|o| s.iter().all(|a| o.get(*a) == target.get(*a)))
        })
        .map(|s| values(s))
        .unwrap_or_else(|| values(pool))
}

fn has_atoms(var: u8, values: &[Value]) -> impl Iterator<Item = QAtom> + '_ {
    values.iter().map(move |&value| QAtom::Has { var, value })
}

/// Draws a question about `hidden` (an object of `complete`) asking for
/// `attr`. Relational templates fall back to the same-property style when
/// no object relates to the hidden one.
pub fn instantiate_question(
    complete: &SceneGraph,
    hidden: &ObjectSpec,
    attr: Attribute,
    seed: u64,
) -> Result<GeneratedQuestion, ForgeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = complete
        .objects
        .iter()
        .position(|o| o.profile() == hidden.profile())
        .ok_or_else(|| ForgeError::InvalidConfig("hidden object is not in the scene".into()))?;
    let mut t = TEMPLATES.choose(&mut rng).expect("templates");
    let visible: Vec<usize> = (0..complete.len()).filter(|&i| i != h).collect();

    if t.style == TemplateStyle::Relational {
        let mut rels = Relation::ALL;
        rels.shuffle(&mut rng);
        for rel in rels {
            // Objects the hidden one stands in `rel` to.
            let refs: Vec<usize> = visible
                .iter()
                .copied()
                .filter(|&j| complete.relations.holds(rel, j, h))
                .collect();
            let Some(&r) = refs.choose(&mut rng) else {
                continue;
            };
            let pool: Vec<Attribute> = Attribute::ALL.into_iter().filter(|a| *a != attr).collect();
            let hidden_desc: Vec<Value> = random_subset(&mut rng, &pool)
                .iter()
                .map(|a| hidden.get(*a))
                .collect();
            let others: Vec<&ObjectSpec> = visible
                .iter()
                .filter(|&&j| j != r)
                .map(|&j| &complete.objects[j])
                .collect();
            let ref_desc =
                reference_descriptor(&mut rng, &complete.objects[r], &others, &Attribute::ALL);
            let mut atoms: Vec<QAtom> = has_atoms(0, &hidden_desc).collect();
            atoms.extend(has_atoms(1, &ref_desc));
            atoms.push(QAtom::Rel { rel, a: 1, b: 0 });
            let form = QuestionForm::new(attr, atoms).expect("well-formed relational question");
            let text = render_text(t, &form);
            return Ok(GeneratedQuestion {
                template: t,
                form,
                text,
            });
        }
        let same_style: Vec<&QuestionTemplate> = TEMPLATES
            .iter()
            .filter(|t| t.style == TemplateStyle::SameProperty)
            .collect();
        t = same_style
            .choose(&mut rng)
            .expect("same-property templates");
    }

    let mut sames: Vec<Attribute> = Attribute::ALL.into_iter().filter(|a| *a != attr).collect();
    sames.shuffle(&mut rng);
    for same in sames {
        let partners: Vec<usize> = visible
            .iter()
            .copied()
            .filter(|&j| complete.objects[j].get(same) == hidden.get(same))
            .collect();
        let Some(&r) = partners.choose(&mut rng) else {
            continue;
        };
        let pool: Vec<Attribute> = Attribute::ALL
            .into_iter()
            .filter(|a| *a != attr && *a != same)
            .collect();
        let hidden_desc: Vec<Value> = random_subset(&mut rng, &pool)
            .iter()
            .map(|a| hidden.get(*a))
            .collect();
        let others: Vec<&ObjectSpec> = visible
            .iter()
            .filter(|&&j| j != r)
            .map(|&j| &complete.objects[j])
            .collect();
        let ref_pool: Vec<Attribute> = Attribute::ALL.into_iter().filter(|a| *a != same).collect();
        let ref_desc = reference_descriptor(&mut rng, &complete.objects[r], &others, &ref_pool);
        let mut atoms: Vec<QAtom> = has_atoms(0, &hidden_desc).collect();
        atoms.extend(has_atoms(1, &ref_desc));
        atoms.push(QAtom::Same {
            a: 0,
            b: 1,
            attr: same,
        });
        atoms.push(QAtom::NotEqual { a: 0, b: 1 });
        let form = QuestionForm::new(attr, atoms).expect("well-formed same-property question");
        let text = render_text(t, &form);
        return Ok(GeneratedQuestion {
            template: t,
            form,
            text,
        });
    }
    Err(ForgeError::QuestionBudget(
        "no object shares a property with the hidden one".into(),
    ))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Invalid {
    /// Every value of the attribute is possible.
    Full,
    /// No value is possible; the question contradicts the scene.
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuestionVerdict {
    Valid(AnswerSet),
    Invalid(Invalid),
}

/// Accepts a question iff its answer set is nonempty and proper.
pub fn validate_question(
    q: &QuestionForm,
    partial: &SceneGraph,
    env: &Environment,
) -> QuestionVerdict {
    match solve(partial, env, q) {
        Ok((answer, _)) if answer.is_full() => QuestionVerdict::Invalid(Invalid::Full),
        Ok((answer, _)) => QuestionVerdict::Valid(answer),
        Err(OracleError::EmptyAnswer) | Err(OracleError::Solve(_)) => {
            QuestionVerdict::Invalid(Invalid::Empty)
        }
    }
}

/// One accepted (scene, hidden object, question) triple.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceDraft {
    pub environment: Environment,
    pub complete: SceneGraph,
    pub partial: SceneGraph,
    pub hidden: ObjectSpec,
    pub question: GeneratedQuestion,
    pub answer: AnswerSet,
}

pub const QUESTION_ATTEMPTS: u64 = 50;
pub const HIDDEN_DRAWS: u64 = 6;
pub const SCENE_DRAWS: u64 = 40;

/// Generates a scene with `n` objects in `env`, hides one object and finds
/// a valid question about it asking for `attr`. Up to
/// [`QUESTION_ATTEMPTS`] questions are tried per hidden object, then the
/// hidden object is redrawn, then the scene.
pub fn generate_instance(
    env: &Environment,
    n: usize,
    attr: Attribute,
    seed: u64,
) -> Result<InstanceDraft, ForgeError> {
    let env = env.with_object_count(n);
    for s in 0..SCENE_DRAWS {
        let complete = generate_complete_scene(&env, n, derive_seed(seed, 1, s))?;
        for d in 0..HIDDEN_DRAWS {
            let (partial, hidden) = make_partial(&complete, derive_seed(seed, 2 + s, d))?;
            for k in 0..QUESTION_ATTEMPTS {
                let qs = derive_seed(seed, 1000 + s * HIDDEN_DRAWS + d, k);
                let Ok(question) = instantiate_question(&complete, &hidden, attr, qs) else {
                    break;
                };
                if let QuestionVerdict::Valid(answer) =
                    validate_question(&question.form, &partial, &env)
                {
                    return Ok(InstanceDraft {
                        environment: env,
                        complete,
                        partial,
                        hidden,
                        question,
                        answer,
                    });
                }
            }
        }
    }
    Err(ForgeError::QuestionBudget(env.id.clone()))
}
