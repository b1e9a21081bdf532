//! Environment and scene generation.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{Attribute, Completeness, ObjectSpec, Region, SceneGraph, Value};
use crate::dsl::{ConstraintInstance, Environment};
use crate::solver::{sample_scene, SearchBudget, SolveError, MAX_OBJECTS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ForgeError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no satisfiable environment found after {0} attempts")]
    EnvironmentBudget(u32),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("cannot hide an object in a scene with {0} objects")]
    TooFewObjects(usize),
    #[error("no valid question found for environment {0}")]
    QuestionBudget(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerationConfig {
    pub environment_count: usize,
    pub max_instantiations: usize,
    pub min_per_region: usize,
    /// Inclusive object-count range.
    pub object_counts: [usize; 2],
    pub master_seed: u64,
    /// Target query-attribute fractions in color, shape, size, material order.
    pub question_mix: [f64; 4],
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            environment_count: 30,
            max_instantiations: 15,
            min_per_region: 2,
            object_counts: [5, 9],
            master_seed: 0,
            question_mix: [0.4, 0.4, 0.1, 0.1],
        }
    }
}

impl GenerationConfig {
    pub fn validate(&self) -> Result<(), ForgeError> {
        let bad = |m: &str| Err(ForgeError::InvalidConfig(m.to_string()));
        let [lo, hi] = self.object_counts;
        if lo < 2 || lo > hi || hi > MAX_OBJECTS {
            return bad("object_counts must satisfy 2 <= min <= max <= 12");
        }
        if self.environment_count == 0 {
            return bad("environment_count must be positive");
        }
        if self.min_per_region * 4 > self.max_instantiations {
            return bad("min_per_region * 4 exceeds max_instantiations");
        }
        if self.question_mix.iter().any(|f| !(0.0..=1.0).contains(f))
            || (self.question_mix.iter().sum::<f64>() - 1.0).abs() > 1e-9
        {
            return bad("question_mix must be fractions summing to 1");
        }
        Ok(())
    }

    pub fn object_count_range(&self) -> std::ops::RangeInclusive<usize> {
        self.object_counts[0]..=self.object_counts[1]
    }
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent seed for item `index` of stream `stream`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(stream)) ^ index)
}

pub mod streams {
    pub const ENVIRONMENT: u64 = 1;
    pub const INSTANCE: u64 = 2;
    pub const ENV_ATTEMPT: u64 = 3;
    pub const ENV_CHECK: u64 = 4;
}

const ENV_ATTEMPTS: u32 = 500;

/// Sampling budget for screening drafts. Admissible environments sample in
/// a few hundred steps; drafts that need more are discarded.
fn check_budget(seed: u64) -> SearchBudget {
    SearchBudget {
        max_restarts: 10,
        max_steps: 5_000,
        seed,
    }
}

fn random_value(rng: &mut ChaCha8Rng, attr: Attribute) -> Value {
    *attr.values().choose(rng).expect("nonempty catalog")
}

fn single_region_template(
    rng: &mut ChaCha8Rng,
    region: Region,
    attr: Attribute,
) -> ConstraintInstance {
    let value = random_value(rng, attr);
    match rng.gen_range(0..20) {
        0..=10 => ConstraintInstance::Negation { region, value },
        11..=13 => ConstraintInstance::ValueRestriction { region, value },
        14..=16 => {
            let mut other = random_value(rng, attr);
            while other == value {
                other = random_value(rng, attr);
            }
            ConstraintInstance::Or {
                region,
                values: [value, other],
            }
        }
        _ => ConstraintInstance::ExactlyN {
            region,
            value,
            count: rng.gen_range(1..=2),
        },
    }
}

fn pair_template(rng: &mut ChaCha8Rng) -> ConstraintInstance {
    let r1 = Region::ALL[rng.gen_range(0..4)];
    let mut r2 = Region::ALL[rng.gen_range(0..4)];
    while r2 == r1 {
        r2 = Region::ALL[rng.gen_range(0..4)];
    }
    let same = Attribute::ALL[rng.gen_range(0..4)];
    let filter = if rng.gen_bool(0.5) {
        let others: Vec<Attribute> = Attribute::ALL.into_iter().filter(|a| *a != same).collect();
        let attr = others[rng.gen_range(0..others.len())];
        Some(random_value(rng, attr))
    } else {
        None
    };
    if rng.gen_bool(0.5) {
        ConstraintInstance::AtLeastNPairs {
            regions: (r1, r2),
            same,
            filter,
            count: 1,
        }
    } else {
        ConstraintInstance::AtMostNPairs {
            regions: (r1, r2),
            same,
            filter,
            count: rng.gen_range(0..=1),
        }
    }
}

fn draft_environment(cfg: &GenerationConfig, rng: &mut ChaCha8Rng) -> Environment {
    let mut seen = HashSet::new();
    let mut env = Environment::default();
    let mut push = |env: &mut Environment, c: ConstraintInstance| {
        if seen.insert(c.clone()) {
            env.push(c);
        }
    };
    // Floor templates cycle through the attributes so that every attribute
    // is constrained somewhere.
    let mut attrs: Vec<Attribute> = Vec::new();
    while attrs.len() < 4 * cfg.min_per_region {
        let mut round = Attribute::ALL.to_vec();
        round.shuffle(rng);
        attrs.extend(round);
    }
    let mut k = 0;
    for region in Region::ALL {
        for _ in 0..cfg.min_per_region {
            let before = env.instantiation_count();
            while env.instantiation_count() == before {
                let c = single_region_template(rng, region, attrs[k]);
                push(&mut env, c);
            }
            k += 1;
        }
    }
    let extra = rng.gen_range(0..=cfg.max_instantiations - env.instantiation_count());
    for _ in 0..extra {
        let c = if rng.gen_bool(0.6) {
            let region = Region::ALL[rng.gen_range(0..4)];
            let attr = Attribute::ALL[rng.gen_range(0..4)];
            single_region_template(rng, region, attr)
        } else {
            pair_template(rng)
        };
        push(&mut env, c);
    }
    env
}

fn scene_key(scene: &SceneGraph) -> Vec<(Region, usize)> {
    let mut key: Vec<(Region, usize)> = scene
        .objects
        .iter()
        .map(|o| (o.region, o.profile().index()))
        .collect();
    key.sort_unstable();
    key
}

/// Whether `env` admits at least two distinct scenes for every object
/// count in the configured range.
fn flexible_enough(cfg: &GenerationConfig, env: &Environment, seed: u64) -> bool {
    cfg.object_count_range().all(|n| {
        let mut first = None;
        for i in 0..6u64 {
            let s = derive_seed(seed, n as u64, i);
            match sample_scene(env, n, check_budget(s)) {
                Ok(scene) => {
                    let key = scene_key(&scene);
                    match &first {
                        None => first = Some(key),
                        Some(k) if *k != key => return true,
                        Some(_) => {}
                    }
                }
                Err(_) => return false,
            }
        }
        false
    })
}

/// Draws template instantiations until the result is satisfiable and
/// flexible for every object count in range. Deterministic per seed.
pub fn generate_environment(
    cfg: &GenerationConfig,
    env_seed: u64,
) -> Result<Environment, ForgeError> {
    cfg.validate()?;
    for attempt in 0..ENV_ATTEMPTS {
        let mut rng =
            ChaCha8Rng::seed_from_u64(derive_seed(env_seed, streams::ENV_ATTEMPT, attempt as u64));
        let env = draft_environment(cfg, &mut rng);
        let check = derive_seed(env_seed, streams::ENV_CHECK, attempt as u64);
        if flexible_enough(cfg, &env, check) {
            return Ok(env);
        }
    }
    Err(ForgeError::EnvironmentBudget(ENV_ATTEMPTS))
}

pub fn environment_id(index: usize) -> String {
    format!("env-{index:02}")
}

/// The configured number of environments, ids `env-00`, `env-01`, ...
pub fn generate_environments(cfg: &GenerationConfig) -> Result<Vec<Environment>, ForgeError> {
    cfg.validate()?;
    (0..cfg.environment_count)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(cfg.master_seed, streams::ENVIRONMENT, i as u64);
            generate_environment(cfg, seed).map(|e| e.with_id(environment_id(i)))
        })
        .collect()
}

pub fn generate_complete_scene(
    env: &Environment,
    n: usize,
    seed: u64,
) -> Result<SceneGraph, ForgeError> {
    if !(1..=MAX_OBJECTS).contains(&n) {
        return Err(SolveError::InvalidObjectCount(n).into());
    }
    Ok(sample_scene(env, n, SearchBudget::with_seed(seed))?)
}

/// Removes a uniformly drawn object.
pub fn make_partial(scene: &SceneGraph, seed: u64) -> Result<(SceneGraph, ObjectSpec), ForgeError> {
    if scene.len() < 2 {
        return Err(ForgeError::TooFewObjects(scene.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    make_partial_at(scene, rng.gen_range(0..scene.len()))
}

/// Removes object `index`; survivors are re-indexed densely and their
/// relation lists restricted accordingly. The hidden object keeps its id
/// from the complete scene.
pub fn make_partial_at(
    scene: &SceneGraph,
    index: usize,
) -> Result<(SceneGraph, ObjectSpec), ForgeError> {
    if scene.len() < 2 {
        return Err(ForgeError::TooFewObjects(scene.len()));
    }
    let keep: Vec<usize> = (0..scene.len()).filter(|&i| i != index).collect();
    let objects: Vec<ObjectSpec> = keep
        .iter()
        .enumerate()
        .map(|(new_id, &old)| ObjectSpec {
            id: new_id,
            ..scene.objects[old].clone()
        })
        .collect();
    let relations = scene.relations.restrict(&keep);
    let partial = SceneGraph {
        objects,
        relations,
        completeness: Completeness::Partial,
        hidden_ref: Some(index),
    };
    Ok((partial, scene.objects[index].clone()))
}

/// Inverse of [`make_partial_at`]: puts `hidden` back at its original index
/// and recomputes relations from positions when available.
pub fn reassemble(partial: &SceneGraph, hidden: &ObjectSpec) -> SceneGraph {
    let at = partial
        .hidden_ref
        .unwrap_or(partial.len())
        .min(partial.len());
    let mut objects = partial.objects.clone();
    objects.insert(at, hidden.clone());
    for (i, o) in objects.iter_mut().enumerate() {
        o.id = i;
    }
    match SceneGraph::positioned(objects.clone()) {
        Ok(scene) => scene,
        Err(_) => SceneGraph {
            relations: crate::domain::Relations::empty(objects.len()),
            objects,
            completeness: Completeness::Complete,
            hidden_ref: None,
        },
    }
}
