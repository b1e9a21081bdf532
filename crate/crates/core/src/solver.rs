//! Finite-domain reasoning over the fixed ontology: checking scenes against
//! an environment, enumerating completions of a partial scene, and
//! sampling complete scenes.
//!
//! The domain is tiny (768 placements per object, at most 12 objects), so
//! everything works on a compiled form of the environment: a per-region
//! table of admissible profiles for the one-object templates plus counters
//! for the aggregate templates, updated incrementally as objects are added.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::domain::{
    region_relation, Attribute, HiddenCandidate, ObjectSpec, Position, Profile, Region, RegionSet,
    SceneGraph, Value,
};
use crate::dsl::{ConstraintInstance, Environment, QAtom, QuestionForm};

/// Objects a region may hold under the generic capacity rule.
pub const REGION_CAPACITY: usize = 3;
pub const MAX_OBJECTS: usize = 4 * REGION_CAPACITY;

/// Minimum distance between sampled object positions.
pub const MIN_SEPARATION: f64 = 0.4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("environment expects {expected} objects but the scene implies {found}")]
    ObjectCountMismatch { expected: usize, found: usize },
    #[error("object count {0} outside 1..={MAX_OBJECTS}")]
    InvalidObjectCount(usize),
    #[error("environment admits no scene with {0} objects")]
    Unsatisfiable(usize),
    #[error("search budget exhausted after {restarts} restarts and {steps} steps")]
    BudgetExhausted { restarts: u32, steps: u64 },
}

/// Generic rules that hold in every environment.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenericRule {
    Distinctness,
    RegionCapacity,
    ObjectCount,
}

impl GenericRule {
    pub fn describe(self) -> &'static str {
        match self {
            GenericRule::Distinctness => {
                "Two different objects cannot have the same values for all the 4 properties."
            }
            GenericRule::RegionCapacity => "Every region can have at most 3 objects.",
            GenericRule::ObjectCount => "The scene must hold the stated number of objects.",
        }
    }
}

/// A rule that can be violated: a generic rule or the environment's
/// constraint at the given index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleRef {
    Generic(GenericRule),
    Constraint(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: RuleRef,
    /// Indices of the objects involved, ascending.
    pub witnesses: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintReport {
    pub violations: Vec<Violation>,
}

impl ConstraintReport {
    pub fn satisfied(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn rules(&self) -> impl Iterator<Item = RuleRef> + '_ {
        self.violations.iter().map(|v| v.rule)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_restarts: u32,
    pub max_steps: u64,
    pub seed: u64,
}

impl SearchBudget {
    pub fn with_seed(seed: u64) -> Self {
        SearchBudget {
            seed,
            ..SearchBudget::default()
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_restarts: 10_000,
            max_steps: 1_000_000,
            seed: 0,
        }
    }
}

fn pair_matches(
    a: (Region, Profile),
    b: (Region, Profile),
    regions: (Region, Region),
    same: Attribute,
    filter: Option<Value>,
) -> bool {
    a.0 == regions.0
        && b.0 == regions.1
        && a.1.get(same) == b.1.get(same)
        && filter.is_none_or(|v| a.1.get(v.attribute()) == v && b.1.get(v.attribute()) == v)
}

fn locally_violates(c: &ConstraintInstance, region: Region, p: &Profile) -> bool {
    match c {
        ConstraintInstance::ValueRestriction { region: r, value } => {
            *r == region && p.get(value.attribute()) != *value
        }
        ConstraintInstance::Negation { region: r, value } => {
            *r == region && p.get(value.attribute()) == *value
        }
        ConstraintInstance::Or { region: r, values } => {
            *r == region && values.iter().all(|v| p.get(v.attribute()) != *v)
        }
        _ => false,
    }
}

/// Evaluates every generic rule and every constraint of `env` against a
/// complete scene, reporting all violations.
pub fn check_scene(scene: &SceneGraph, env: &Environment) -> ConstraintReport {
    let objs: Vec<(Region, Profile)> = scene
        .objects
        .iter()
        .map(|o| (o.region, o.profile()))
        .collect();
    let n = objs.len();
    let mut violations = Vec::new();

    for i in 0..n {
        for j in i + 1..n {
            if objs[i].1 == objs[j].1 {
                violations.push(Violation {
                    rule: RuleRef::Generic(GenericRule::Distinctness),
                    witnesses: vec![i, j],
                });
            }
        }
    }
    for r in Region::ALL {
        let members: Vec<usize> = (0..n).filter(|&i| objs[i].0 == r).collect();
        if members.len() > REGION_CAPACITY {
            violations.push(Violation {
                rule: RuleRef::Generic(GenericRule::RegionCapacity),
                witnesses: members,
            });
        }
    }
    if let Some(expected) = env.object_count {
        if expected != n {
            violations.push(Violation {
                rule: RuleRef::Generic(GenericRule::ObjectCount),
                witnesses: Vec::new(),
            });
        }
    }

    for (k, c) in env.constraints().iter().enumerate() {
        let rule = RuleRef::Constraint(k);
        let witnesses: Option<Vec<usize>> = match c {
            _ if c.is_region_local() => {
                let bad: Vec<usize> = (0..n)
                    .filter(|&i| locally_violates(c, objs[i].0, &objs[i].1))
                    .collect();
                (!bad.is_empty()).then_some(bad)
            }
            ConstraintInstance::ExactlyN {
                region,
                value,
                count,
            } => {
                let hits: Vec<usize> = (0..n)
                    .filter(|&i| objs[i].0 == *region && objs[i].1.get(value.attribute()) == *value)
                    .collect();
                (hits.len() != *count as usize).then_some(hits)
            }
            ConstraintInstance::AtLeastNPairs {
                regions,
                same,
                filter,
                count,
            }
            | ConstraintInstance::AtMostNPairs {
                regions,
                same,
                filter,
                count,
            } => {
                let mut pairs = 0u32;
                let mut involved = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        if i != j && pair_matches(objs[i], objs[j], *regions, *same, *filter) {
                            pairs += 1;
                            involved.extend([i, j]);
                        }
                    }
                }
                involved.sort_unstable();
                involved.dedup();
                let at_least = matches!(c, ConstraintInstance::AtLeastNPairs { .. });
                let bad = if at_least {
                    pairs < *count
                } else {
                    pairs > *count
                };
                bad.then_some(involved)
            }
            ConstraintInstance::RegionCapacity { max } => {
                let mut bad = Vec::new();
                for r in Region::ALL {
                    let members: Vec<usize> = (0..n).filter(|&i| objs[i].0 == r).collect();
                    if members.len() > *max as usize {
                        bad.extend(members);
                    }
                }
                (!bad.is_empty()).then_some(bad)
            }
            ConstraintInstance::ObjectCount { count } => {
                (*count as usize != n).then_some(Vec::new())
            }
            ConstraintInstance::Distinctness => {
                let mut bad = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        if objs[i].1 == objs[j].1 {
                            bad.extend([i, j]);
                        }
                    }
                }
                bad.sort_unstable();
                bad.dedup();
                (!bad.is_empty()).then_some(bad)
            }
            _ => None,
        };
        if let Some(witnesses) = witnesses {
            violations.push(Violation { rule, witnesses });
        }
    }
    ConstraintReport { violations }
}

#[derive(Clone, Debug)]
struct PairRule {
    regions: (Region, Region),
    same: Attribute,
    filter: Option<Value>,
    at_least: Option<u32>,
    at_most: Option<u32>,
}

/// Environment compiled for incremental evaluation.
struct Compiled {
    local_ok: Vec<[bool; Profile::COUNT]>,
    exact: Vec<(Region, Value, u32)>,
    pairs: Vec<PairRule>,
    capacity: usize,
}

impl Compiled {
    fn new(env: &Environment) -> Compiled {
        let mut local_ok = vec![[true; Profile::COUNT]; 4];
        let mut exact = Vec::new();
        let mut pairs = Vec::new();
        let mut capacity = REGION_CAPACITY;
        for c in env.constraints() {
            match c {
                _ if c.is_region_local() => {
                    for r in Region::ALL {
                        for (i, ok) in local_ok[r.index()].iter_mut().enumerate() {
                            if locally_violates(c, r, &Profile::from_index(i)) {
                                *ok = false;
                            }
                        }
                    }
                }
                ConstraintInstance::ExactlyN {
                    region,
                    value,
                    count,
                } => exact.push((*region, *value, *count)),
                ConstraintInstance::AtLeastNPairs {
                    regions,
                    same,
                    filter,
                    count,
                } => pairs.push(PairRule {
                    regions: *regions,
                    same: *same,
                    filter: *filter,
                    at_least: Some(*count),
                    at_most: None,
                }),
                ConstraintInstance::AtMostNPairs {
                    regions,
                    same,
                    filter,
                    count,
                } => pairs.push(PairRule {
                    regions: *regions,
                    same: *same,
                    filter: *filter,
                    at_least: None,
                    at_most: Some(*count),
                }),
                ConstraintInstance::RegionCapacity { max } => {
                    capacity = capacity.min(*max as usize)
                }
                // Distinctness is always enforced; an ObjectCount inside the
                // constraint list is checked by the callers against n.
                _ => {}
            }
        }
        Compiled {
            local_ok,
            exact,
            pairs,
            capacity,
        }
    }
}

/// Running counters for a growing set of placed objects.
#[derive(Clone)]
struct State<'c> {
    compiled: &'c Compiled,
    placed: Vec<(Region, Profile)>,
    occupancy: [usize; 4],
    used: Vec<bool>,
    exact: Vec<u32>,
    pairs: Vec<u32>,
}

impl<'c> State<'c> {
    fn new(compiled: &'c Compiled) -> State<'c> {
        State {
            compiled,
            placed: Vec::new(),
            occupancy: [0; 4],
            used: vec![false; Profile::COUNT],
            exact: vec![0; compiled.exact.len()],
            pairs: vec![0; compiled.pairs.len()],
        }
    }

    fn exact_delta(&self, k: usize, c: (Region, Profile)) -> u32 {
        let (r, v, _) = self.compiled.exact[k];
        u32::from(c.0 == r && c.1.get(v.attribute()) == v)
    }

    fn pair_delta(&self, k: usize, c: (Region, Profile)) -> u32 {
        let rule = &self.compiled.pairs[k];
        self.placed
            .iter()
            .map(|o| {
                u32::from(pair_matches(c, *o, rule.regions, rule.same, rule.filter))
                    + u32::from(pair_matches(*o, c, rule.regions, rule.same, rule.filter))
            })
            .sum()
    }

    /// Whether `c` can be added without breaking a one-object rule, a
    /// generic rule, or an upper bound, leaving `remaining` more objects
    /// to place afterwards.
    fn admits(&self, c: (Region, Profile), remaining: usize) -> bool {
        let pi = c.1.index();
        if !self.compiled.local_ok[c.0.index()][pi]
            || self.used[pi]
            || self.occupancy[c.0.index()] >= self.compiled.capacity
        {
            return false;
        }
        for (k, &(_, _, n)) in self.compiled.exact.iter().enumerate() {
            let count = self.exact[k] + self.exact_delta(k, c);
            if count > n || (count as usize + remaining) < n as usize {
                return false;
            }
        }
        for (k, rule) in self.compiled.pairs.iter().enumerate() {
            if let Some(max) = rule.at_most {
                if self.pairs[k] + self.pair_delta(k, c) > max {
                    return false;
                }
            }
        }
        true
    }

    /// Lower bounds that can only be judged once every object is placed.
    fn lower_bounds_hold(&self) -> bool {
        self.compiled
            .exact
            .iter()
            .zip(&self.exact)
            .all(|(&(_, _, n), &c)| c == n)
            && self
                .compiled
                .pairs
                .iter()
                .zip(&self.pairs)
                .all(|(rule, &c)| rule.at_least.is_none_or(|min| c >= min))
    }

    fn has_deficit(&self) -> bool {
        self.compiled
            .exact
            .iter()
            .zip(&self.exact)
            .any(|(&(_, _, n), &c)| c < n)
            || self
                .compiled
                .pairs
                .iter()
                .zip(&self.pairs)
                .any(|(rule, &c)| rule.at_least.is_some_and(|min| c < min))
    }

    fn closes_deficit(&self, c: (Region, Profile)) -> bool {
        let exact = self
            .compiled
            .exact
            .iter()
            .enumerate()
            .any(|(k, &(_, _, n))| self.exact[k] < n && self.exact_delta(k, c) > 0);
        exact
            || self.compiled.pairs.iter().enumerate().any(|(k, rule)| {
                rule.at_least.is_some_and(|min| self.pairs[k] < min) && self.pair_delta(k, c) > 0
            })
    }

    fn push(&mut self, c: (Region, Profile)) {
        for k in 0..self.exact.len() {
            self.exact[k] += self.exact_delta(k, c);
        }
        for k in 0..self.pairs.len() {
            self.pairs[k] += self.pair_delta(k, c);
        }
        self.used[c.1.index()] = true;
        self.occupancy[c.0.index()] += 1;
        self.placed.push(c);
    }

    fn pop(&mut self) {
        let c = self.placed.pop().expect("pop on empty state");
        self.occupancy[c.0.index()] -= 1;
        self.used[c.1.index()] = false;
        for k in 0..self.pairs.len() {
            self.pairs[k] -= self.pair_delta(k, c);
        }
        for k in 0..self.exact.len() {
            self.exact[k] -= self.exact_delta(k, c);
        }
    }

    /// Whether the placed objects themselves respect the one-object and
    /// generic rules.
    fn placed_consistent(&self) -> bool {
        let mut seen = HashSet::new();
        let mut occupancy = [0usize; 4];
        self.placed.iter().all(|(r, p)| {
            occupancy[r.index()] += 1;
            self.compiled.local_ok[r.index()][p.index()]
                && seen.insert(p.index())
                && occupancy[r.index()] <= self.compiled.capacity
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct HiddenPattern {
    fixed: [Option<Value>; 4],
    regions: RegionSet,
}

impl HiddenPattern {
    fn matches(&self, h: &HiddenCandidate) -> bool {
        self.regions.contains(h.region)
            && Attribute::ALL
                .iter()
                .all(|a| self.fixed[a.index()].is_none_or(|v| h.get(*a) == v))
    }

    fn fix(&mut self, v: Value) -> bool {
        let slot = &mut self.fixed[v.attribute().index()];
        match slot {
            Some(old) => *old == v,
            None => {
                *slot = Some(v);
                true
            }
        }
    }
}

/// The question atoms compiled against a partial scene: the set of
/// hidden-object completions under which some injective binding of the
/// other variables to visible objects satisfies every atom. Relations
/// involving the hidden object are judged at region level.
#[derive(Clone, Debug)]
pub struct QuestionFilter {
    patterns: Vec<HiddenPattern>,
}

impl QuestionFilter {
    pub fn new(partial: &SceneGraph, q: &QuestionForm) -> QuestionFilter {
        let k = q.var_count();
        let domains: Vec<Vec<usize>> = (0..k)
            .map(|v| {
                let stated = q.stated(v as u8);
                (0..partial.len())
                    .filter(|&i| {
                        stated
                            .iter()
                            .all(|s| partial.objects[i].get(s.attribute()) == *s)
                    })
                    .collect()
            })
            .collect();
        let mut binding = vec![usize::MAX; k];
        let mut patterns = Vec::new();
        bind(partial, q, &domains, 1, &mut binding, &mut patterns);
        let mut seen = HashSet::new();
        patterns.retain(|p| seen.insert(p.clone()));
        QuestionFilter { patterns }
    }

    pub fn admits(&self, h: &HiddenCandidate) -> bool {
        self.patterns.iter().any(|p| p.matches(h))
    }

    /// True when no completion at all can satisfy the question.
    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

fn visible_atom_holds(partial: &SceneGraph, atom: &QAtom, binding: &[usize]) -> bool {
    match *atom {
        QAtom::Has { .. } => true,
        QAtom::Same { a, b, attr } => {
            let (i, j) = (binding[a as usize], binding[b as usize]);
            i != j && partial.objects[i].get(attr) == partial.objects[j].get(attr)
        }
        QAtom::Rel { rel, a, b } => {
            partial
                .relations
                .holds(rel, binding[a as usize], binding[b as usize])
        }
        QAtom::NotEqual { a, b } => binding[a as usize] != binding[b as usize],
    }
}

fn bind(
    partial: &SceneGraph,
    q: &QuestionForm,
    domains: &[Vec<usize>],
    var: usize,
    binding: &mut Vec<usize>,
    out: &mut Vec<HiddenPattern>,
) {
    if var == domains.len() {
        if let Some(p) = hidden_pattern(partial, q, binding) {
            out.push(p);
        }
        return;
    }
    for &obj in &domains[var] {
        if binding[1..var].contains(&obj) {
            continue;
        }
        binding[var] = obj;
        // Check the atoms among visible variables that are now all bound.
        let ok = q.atoms.iter().all(|a| {
            let vs = atom_vars(a);
            if vs.contains(&0)
                || vs.iter().any(|v| *v as usize > var)
                || vs.iter().all(|v| (*v as usize) < var)
            {
                true
            } else {
                visible_atom_holds(partial, a, binding)
            }
        });
        if ok {
            bind(partial, q, domains, var + 1, binding, out);
        }
    }
    binding[var] = usize::MAX;
}

fn atom_vars(a: &QAtom) -> [u8; 2] {
    match *a {
        QAtom::Has { var, .. } => [var, var],
        QAtom::Same { a, b, .. } | QAtom::Rel { a, b, .. } | QAtom::NotEqual { a, b } => [a, b],
    }
}

fn hidden_pattern(
    partial: &SceneGraph,
    q: &QuestionForm,
    binding: &[usize],
) -> Option<HiddenPattern> {
    let mut p = HiddenPattern {
        fixed: [None; 4],
        regions: RegionSet::FULL,
    };
    for atom in &q.atoms {
        match *atom {
            QAtom::Has { var: 0, value } => {
                if !p.fix(value) {
                    return None;
                }
            }
            QAtom::Same { a: 0, b: 0, .. }
            | QAtom::Rel { a: 0, b: 0, .. }
            | QAtom::NotEqual { a: 0, b: 0 } => return None,
            QAtom::Same { a: 0, b, attr } => {
                if !p.fix(partial.objects[binding[b as usize]].get(attr)) {
                    return None;
                }
            }
            QAtom::Rel { rel, a: 0, b } => {
                let other = partial.objects[binding[b as usize]].region;
                p.regions = p.regions.intersect(region_relation(rel.inverse(), other));
            }
            QAtom::Rel { rel, a, b: 0 } => {
                let other = partial.objects[binding[a as usize]].region;
                p.regions = p.regions.intersect(region_relation(rel, other));
            }
            _ => {}
        }
    }
    (!p.regions.is_empty()).then_some(p)
}

/// Every placement of one extra object that, together with `partial`,
/// satisfies `env` (generic rules included) and, when a question is
/// given, admits a binding of the question atoms with the queried
/// variable on the extra object.
pub fn enumerate_hidden_candidates(
    partial: &SceneGraph,
    env: &Environment,
    question: Option<&QuestionForm>,
) -> Result<Vec<HiddenCandidate>, SolveError> {
    let n = partial.len() + 1;
    if let Some(expected) = env.object_count {
        if expected != n {
            return Err(SolveError::ObjectCountMismatch { expected, found: n });
        }
    }
    let compiled = Compiled::new(env);
    let mut state = State::new(&compiled);
    for o in &partial.objects {
        state.push((o.region, o.profile()));
    }
    if !state.placed_consistent() || !fixed_count_holds(env, n) {
        return Ok(Vec::new());
    }
    let filter = question.map(|q| QuestionFilter::new(partial, q));
    let mut out = Vec::new();
    for region in Region::ALL {
        for (pi, ok) in compiled.local_ok[region.index()].iter().enumerate() {
            if !ok {
                continue;
            }
            let h = HiddenCandidate {
                region,
                profile: Profile::from_index(pi),
            };
            if filter.as_ref().is_some_and(|f| !f.admits(&h)) {
                continue;
            }
            let c = (region, h.profile);
            if !state.admits(c, 0) {
                continue;
            }
            state.push(c);
            let ok = state.lower_bounds_hold();
            state.pop();
            if ok {
                out.push(h);
            }
        }
    }
    Ok(out)
}

fn fixed_count_holds(env: &Environment, n: usize) -> bool {
    env.constraints().iter().all(|c| match c {
        ConstraintInstance::ObjectCount { count } => *count as usize == n,
        _ => true,
    })
}

enum Search {
    Found,
    Exhausted,
    Cutoff,
}

/// Nodes one randomized descent may visit before restarting.
const NODES_PER_RESTART: u64 = 4_000;

/// Samples a complete positioned scene with `n` objects satisfying `env`.
///
/// Each restart is a depth-first descent that places objects one at a time,
/// choosing uniformly among placements that keep every one-object rule,
/// generic rule and upper bound intact; exact counts and lower bounds are
/// judged on the full scene. A descent that exhausts its tree proves the
/// environment unsatisfiable for `n`.
pub fn sample_scene(
    env: &Environment,
    n: usize,
    budget: SearchBudget,
) -> Result<SceneGraph, SolveError> {
    if !(1..=MAX_OBJECTS).contains(&n) {
        return Err(SolveError::InvalidObjectCount(n));
    }
    if let Some(expected) = env.object_count {
        if expected != n {
            return Err(SolveError::ObjectCountMismatch { expected, found: n });
        }
    }
    if !fixed_count_holds(env, n) {
        return Err(SolveError::Unsatisfiable(n));
    }
    let compiled = Compiled::new(env);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut steps = 0u64;
    let candidates: Vec<(Region, Profile)> = HiddenCandidate::all()
        .map(|h| (h.region, h.profile))
        .filter(|(r, p)| compiled.local_ok[r.index()][p.index()])
        .collect();
    for restart in 0..budget.max_restarts {
        let mut state = State::new(&compiled);
        let mut nodes = 0u64;
        match descend(&mut state, n, &candidates, &mut rng, &mut nodes) {
            Search::Found => {
                let objects = place(&state.placed, &mut rng);
                return Ok(SceneGraph::positioned(objects).expect("sampled positions are distinct"));
            }
            Search::Exhausted => return Err(SolveError::Unsatisfiable(n)),
            Search::Cutoff => {}
        }
        steps += nodes;
        if steps >= budget.max_steps {
            return Err(SolveError::BudgetExhausted {
                restarts: restart + 1,
                steps,
            });
        }
    }
    Err(SolveError::BudgetExhausted {
        restarts: budget.max_restarts,
        steps,
    })
}

fn descend(
    state: &mut State<'_>,
    n: usize,
    candidates: &[(Region, Profile)],
    rng: &mut ChaCha8Rng,
    nodes: &mut u64,
) -> Search {
    let depth = state.placed.len();
    if depth == n {
        return if state.lower_bounds_hold() {
            Search::Found
        } else {
            Search::Exhausted
        };
    }
    let remaining = n - depth - 1;
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.shuffle(rng);
    // Placements that reduce an unmet lower bound are tried first.
    let prefer = state.has_deficit();
    for pass in [true, false] {
        if pass && !prefer {
            continue;
        }
        for &i in &order {
            let c = candidates[i];
            if prefer && state.closes_deficit(c) != pass {
                continue;
            }
            if !state.admits(c, remaining) {
                continue;
            }
            *nodes += 1;
            if *nodes > NODES_PER_RESTART {
                return Search::Cutoff;
            }
            state.push(c);
            let r = descend(state, n, candidates, rng, nodes);
            if !matches!(r, Search::Exhausted) {
                return r;
            }
            state.pop();
        }
    }
    Search::Exhausted
}

/// Assigns positions inside each object's quadrant, keeping objects at
/// least [`MIN_SEPARATION`] apart and off each other's axes.
fn place(placed: &[(Region, Profile)], rng: &mut ChaCha8Rng) -> Vec<ObjectSpec> {
    let mut objects: Vec<ObjectSpec> = Vec::with_capacity(placed.len());
    for (id, (region, profile)) in placed.iter().enumerate() {
        let (x0, x1, y0, y1) = region.quadrant();
        let position = loop {
            let p = Position::new(round2(rng.gen_range(x0..x1)), round2(rng.gen_range(y0..y1)));
            let clear = objects.iter().all(|o| {
                let q = o.position.expect("placed");
                q.x != p.x && q.y != p.y && q.distance(p) >= MIN_SEPARATION
            });
            if clear && Region::containing(p) == Some(*region) {
                break p;
            }
        };
        objects.push(ObjectSpec::new(id, *profile, *region).with_position(position));
    }
    objects
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}
