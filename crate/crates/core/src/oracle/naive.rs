//! A deliberately plain second implementation of scene checking and
//! answering, sharing no evaluation code with the solver. Used to
//! cross-check it.

use crate::domain::{Attribute, HiddenCandidate, Relation, SceneGraph, Value};
use crate::dsl::{ConstraintInstance, Environment, QAtom, QuestionForm};
use crate::solver::SolveError;

use super::{AnswerSet, OracleError};

// Regions a second object may occupy when it stands in the relation to a
// first object in the row's region (row = first object's region).
const LEFT: [[bool; 4]; 4] = [
    [true, false, true, false],
    [true, true, true, true],
    [true, false, true, false],
    [true, true, true, true],
];
const RIGHT: [[bool; 4]; 4] = [
    [true, true, true, true],
    [false, true, false, true],
    [true, true, true, true],
    [false, true, false, true],
];
const FRONT: [[bool; 4]; 4] = [
    [true, true, true, true],
    [true, true, true, true],
    [false, false, true, true],
    [false, false, true, true],
];
const BEHIND: [[bool; 4]; 4] = [
    [true, true, false, false],
    [true, true, false, false],
    [true, true, true, true],
    [true, true, true, true],
];

fn table(rel: Relation) -> &'static [[bool; 4]; 4] {
    match rel {
        Relation::Left => &LEFT,
        Relation::Right => &RIGHT,
        Relation::Front => &FRONT,
        Relation::Behind => &BEHIND,
    }
}

fn opposite(rel: Relation) -> Relation {
    match rel {
        Relation::Left => Relation::Right,
        Relation::Right => Relation::Left,
        Relation::Front => Relation::Behind,
        Relation::Behind => Relation::Front,
    }
}

#[derive(Clone, Copy)]
struct Obj {
    region: usize,
    color: Value,
    shape: Value,
    size: Value,
    material: Value,
}

impl Obj {
    fn has(&self, v: Value) -> bool {
        self.color == v || self.shape == v || self.size == v || self.material == v
    }

    fn prop(&self, a: Attribute) -> Value {
        match a {
            Attribute::Color => self.color,
            Attribute::Shape => self.shape,
            Attribute::Size => self.size,
            Attribute::Material => self.material,
        }
    }
}

fn objs(scene: &SceneGraph) -> Vec<Obj> {
    scene
        .objects
        .iter()
        .map(|o| Obj {
            region: o.region.index(),
            color: o.color,
            shape: o.shape,
            size: o.size,
            material: o.material,
        })
        .collect()
}

fn all_ok(objs: &[Obj], env: &Environment) -> bool {
    let n = objs.len();
    if let Some(k) = env.object_count {
        if k != n {
            return false;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j
                && objs[i].color == objs[j].color
                && objs[i].shape == objs[j].shape
                && objs[i].size == objs[j].size
                && objs[i].material == objs[j].material
            {
                return false;
            }
        }
    }
    for r in 0..4 {
        if objs.iter().filter(|o| o.region == r).count() > 3 {
            return false;
        }
    }
    for c in env.constraints() {
        let ok = match c {
            ConstraintInstance::Negation { region, value } => !objs
                .iter()
                .any(|o| o.region == region.index() && o.has(*value)),
            ConstraintInstance::ValueRestriction { region, value } => objs
                .iter()
                .filter(|o| o.region == region.index())
                .all(|o| o.has(*value)),
            ConstraintInstance::Or { region, values } => objs
                .iter()
                .filter(|o| o.region == region.index())
                .all(|o| o.has(values[0]) || o.has(values[1])),
            ConstraintInstance::ExactlyN {
                region,
                value,
                count,
            } => {
                let mut k = 0;
                for o in objs {
                    if o.region == region.index() && o.has(*value) {
                        k += 1;
                    }
                }
                k == *count
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
                let mut k = 0;
                for i in 0..n {
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let (a, b) = (objs[i], objs[j]);
                        if a.region != regions.0.index() || b.region != regions.1.index() {
                            continue;
                        }
                        if a.prop(*same) != b.prop(*same) {
                            continue;
                        }
                        if let Some(f) = filter {
                            if !a.has(*f) || !b.has(*f) {
                                continue;
                            }
                        }
                        k += 1;
                    }
                }
                if matches!(c, ConstraintInstance::AtLeastNPairs { .. }) {
                    k >= *count
                } else {
                    k <= *count
                }
            }
            ConstraintInstance::RegionCapacity { max } => {
                (0..4).all(|r| objs.iter().filter(|o| o.region == r).count() as u32 <= *max)
            }
            ConstraintInstance::ObjectCount { count } => n == *count as usize,
            ConstraintInstance::Distinctness => true,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Whether a complete scene satisfies every rule of `env`.
pub fn naive_scene_ok(scene: &SceneGraph, env: &Environment) -> bool {
    all_ok(&objs(scene), env)
}

/// Tries every injective assignment of the visible variables.
fn question_ok(scene: &SceneGraph, visible: &[Obj], hidden: Obj, q: &QuestionForm) -> bool {
    let k = q.var_count();
    let mut assignment = vec![0usize; k];
    search(scene, visible, hidden, q, 1, &mut assignment)
}

fn search(
    scene: &SceneGraph,
    visible: &[Obj],
    hidden: Obj,
    q: &QuestionForm,
    var: usize,
    assignment: &mut Vec<usize>,
) -> bool {
    if var == assignment.len() {
        return q
            .atoms
            .iter()
            .all(|a| atom_ok(scene, visible, hidden, assignment, a));
    }
    for i in 0..visible.len() {
        if assignment[1..var].contains(&i) {
            continue;
        }
        assignment[var] = i;
        if search(scene, visible, hidden, q, var + 1, assignment) {
            return true;
        }
    }
    false
}

fn atom_ok(scene: &SceneGraph, visible: &[Obj], hidden: Obj, asg: &[usize], atom: &QAtom) -> bool {
    let get = |v: u8| {
        if v == 0 {
            hidden
        } else {
            visible[asg[v as usize]]
        }
    };
    match *atom {
        QAtom::Has { var, value } => get(var).has(value),
        QAtom::NotEqual { a, b } => {
            if a == 0 || b == 0 {
                a != b
            } else {
                asg[a as usize] != asg[b as usize]
            }
        }
        QAtom::Same { a, b, attr } => {
            let distinct = if a == 0 || b == 0 {
                a != b
            } else {
                asg[a as usize] != asg[b as usize]
            };
            distinct && get(a).prop(attr) == get(b).prop(attr)
        }
        QAtom::Rel { rel, a, b } => {
            if a == 0 && b == 0 {
                false
            } else if b == 0 {
                table(rel)[get(a).region][hidden.region]
            } else if a == 0 {
                table(opposite(rel))[get(b).region][hidden.region]
            } else {
                let lists = match rel {
                    Relation::Left => &scene.relations.left,
                    Relation::Right => &scene.relations.right,
                    Relation::Front => &scene.relations.front,
                    Relation::Behind => &scene.relations.behind,
                };
                lists[asg[a as usize]].contains(&asg[b as usize])
            }
        }
    }
}

/// Answers by trying all 768 completions one by one.
pub fn brute_force_solve(
    partial: &SceneGraph,
    env: &Environment,
    q: &QuestionForm,
) -> Result<AnswerSet, OracleError> {
    let n = partial.len() + 1;
    if let Some(expected) = env.object_count {
        if expected != n {
            return Err(SolveError::ObjectCountMismatch { expected, found: n }.into());
        }
    }
    let visible = objs(partial);
    let mut values = Vec::new();
    for h in HiddenCandidate::all() {
        let hidden = Obj {
            region: h.region.index(),
            color: h.profile.color,
            shape: h.profile.shape,
            size: h.profile.size,
            material: h.profile.material,
        };
        if !question_ok(partial, &visible, hidden, q) {
            continue;
        }
        let mut all = visible.clone();
        all.push(hidden);
        if all_ok(&all, env) {
            values.push(hidden.prop(q.query_attribute));
        }
    }
    if values.is_empty() {
        return Err(OracleError::EmptyAnswer);
    }
    Ok(AnswerSet::new(q.query_attribute, values))
}
