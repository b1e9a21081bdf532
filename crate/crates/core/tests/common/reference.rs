//! Test-side reference semantics, written from the rule definitions
//! without the library's solver or naive module. Relations touching the
//! hidden object are judged from quadrant halves rather than tables.

use std::collections::BTreeSet;

use poqa_core::domain::{Attribute, HiddenCandidate, Profile, Relation, SceneGraph, Value};
use poqa_core::dsl::{ConstraintInstance as C, Environment, QAtom, QuestionForm};

#[derive(Clone, Copy, Debug)]
pub struct Thing {
    pub region: usize,
    pub p: Profile,
}

impl Thing {
    fn is(&self, v: Value) -> bool {
        self.p.get(v.attribute()) == v
    }
    fn right_half(&self) -> bool {
        self.region % 2 == 1
    }
    fn front_half(&self) -> bool {
        self.region >= 2
    }
}

pub fn things(scene: &SceneGraph) -> Vec<Thing> {
    scene
        .objects
        .iter()
        .map(|o| Thing {
            region: o.region.index(),
            p: o.profile(),
        })
        .collect()
}

fn count_pairs(ts: &[Thing], r: (usize, usize), same: Attribute, filter: Option<Value>) -> usize {
    let mut k = 0;
    for (i, a) in ts.iter().enumerate() {
        for (j, b) in ts.iter().enumerate() {
            let ok = i != j
                && a.region == r.0
                && b.region == r.1
                && a.p.get(same) == b.p.get(same)
                && filter.is_none_or(|f| a.is(f) && b.is(f));
            k += ok as usize;
        }
    }
    k
}

pub fn satisfies(ts: &[Thing], env: &Environment) -> bool {
    if env.object_count.is_some_and(|n| n != ts.len()) {
        return false;
    }
    let profiles: BTreeSet<usize> = ts.iter().map(|t| t.p.index()).collect();
    if profiles.len() != ts.len() {
        return false;
    }
    let per_region = |r: usize| ts.iter().filter(|t| t.region == r).count();
    if (0..4).any(|r| per_region(r) > 3) {
        return false;
    }
    env.constraints().iter().all(|c| match *c {
        C::Negation { region, value } => ts
            .iter()
            .filter(|t| t.region == region.index())
            .all(|t| !t.is(value)),
        C::ValueRestriction { region, value } => ts
            .iter()
            .filter(|t| t.region == region.index())
            .all(|t| t.is(value)),
        C::Or { region, values } => ts
            .iter()
            .filter(|t| t.region == region.index())
            .all(|t| t.is(values[0]) || t.is(values[1])),
        C::ExactlyN {
            region,
            value,
            count,
        } => {
            ts.iter()
                .filter(|t| t.region == region.index() && t.is(value))
                .count()
                == count as usize
        }
        C::AtLeastNPairs {
            regions,
            same,
            filter,
            count,
        } => {
            count_pairs(ts, (regions.0.index(), regions.1.index()), same, filter) >= count as usize
        }
        C::AtMostNPairs {
            regions,
            same,
            filter,
            count,
        } => {
            count_pairs(ts, (regions.0.index(), regions.1.index()), same, filter) <= count as usize
        }
        C::RegionCapacity { max } => (0..4).all(|r| per_region(r) <= max as usize),
        C::ObjectCount { count } => ts.len() == count as usize,
        C::Distinctness => true,
    })
}

/// Can `x` stand in `rel` to `y`, going by halves of the scene?
fn possible(rel: Relation, y: Thing, x: Thing) -> bool {
    match rel {
        Relation::Right => x.right_half() || !y.right_half(),
        Relation::Left => !x.right_half() || y.right_half(),
        Relation::Front => x.front_half() || !y.front_half(),
        Relation::Behind => !x.front_half() || y.front_half(),
    }
}

fn atom_holds(
    scene: &SceneGraph,
    vis: &[Thing],
    hidden: Thing,
    bind: &[Option<usize>],
    atom: &QAtom,
) -> bool {
    // `None` is the hidden object.
    let thing = |v: u8| bind[v as usize].map_or(hidden, |i| vis[i]);
    match *atom {
        QAtom::Has { var, value } => thing(var).is(value),
        QAtom::NotEqual { a, b } => bind[a as usize] != bind[b as usize],
        QAtom::Same { a, b, attr } => {
            bind[a as usize] != bind[b as usize] && thing(a).p.get(attr) == thing(b).p.get(attr)
        }
        QAtom::Rel { rel, a, b } => match (bind[a as usize], bind[b as usize]) {
            (None, None) => false,
            (Some(_), None) => possible(rel, thing(a), hidden),
            (None, Some(_)) => possible(rel.inverse(), thing(b), hidden),
            (Some(i), Some(j)) => scene.relations.holds(rel, i, j),
        },
    }
}

fn exists_binding(
    scene: &SceneGraph,
    vis: &[Thing],
    hidden: Thing,
    q: &QuestionForm,
    bind: &mut Vec<Option<usize>>,
) -> bool {
    if bind.len() == q.var_count() {
        return q
            .atoms
            .iter()
            .all(|a| atom_holds(scene, vis, hidden, bind, a));
    }
    for i in 0..vis.len() {
        if bind.contains(&Some(i)) {
            continue;
        }
        bind.push(Some(i));
        let found = exists_binding(scene, vis, hidden, q, bind);
        bind.pop();
        if found {
            return true;
        }
    }
    false
}

/// Completions of `partial` consistent with the question and environment.
pub fn completions(
    partial: &SceneGraph,
    env: &Environment,
    q: Option<&QuestionForm>,
) -> Vec<HiddenCandidate> {
    let vis = things(partial);
    HiddenCandidate::all()
        .filter(|h| {
            let hidden = Thing {
                region: h.region.index(),
                p: h.profile,
            };
            if let Some(q) = q {
                if !exists_binding(partial, &vis, hidden, q, &mut vec![None]) {
                    return false;
                }
            }
            let mut all = vis.clone();
            all.push(hidden);
            satisfies(&all, env)
        })
        .collect()
}

pub fn answer(partial: &SceneGraph, env: &Environment, q: &QuestionForm) -> BTreeSet<Value> {
    completions(partial, env, Some(q))
        .iter()
        .map(|h| h.get(q.query_attribute))
        .collect()
}
