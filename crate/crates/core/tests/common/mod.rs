#![allow(dead_code)]

pub mod reference;
pub mod strategies;

use poqa_core::domain::{ObjectSpec, Position, Profile, Region, SceneGraph, Value};
use poqa_core::dsl::{parse_environment, parse_question, Environment, QuestionForm};
use poqa_core::forge::make_partial_at;

pub const WORKED_ENV: &str = include_str!("../fixtures/worked_env.lp");
pub const WORKED_QUESTION: &str = include_str!("../fixtures/worked_question.lp");
pub const DICT_SCENE: &str = include_str!("../fixtures/dict_scene.txt");

/// Index of the small red rubber sphere in [`worked_complete`].
pub const WORKED_HIDDEN: usize = 1;

pub fn worked_env() -> Environment {
    parse_environment(WORKED_ENV).unwrap().with_id("worked")
}

pub fn worked_question() -> QuestionForm {
    parse_question(WORKED_QUESTION).unwrap()
}

fn object(id: usize, props: [Value; 4], region: i64, x: f64, y: f64) -> ObjectSpec {
    let [size, color, material, shape] = props;
    ObjectSpec::new(
        id,
        Profile {
            color,
            shape,
            size,
            material,
        },
        Region::new(region).unwrap(),
    )
    .with_position(Position::new(x, y))
}

/// Five objects consistent with the worked environment, the small red
/// rubber sphere among them.
pub fn worked_complete() -> SceneGraph {
    use Value::*;
    SceneGraph::positioned(vec![
        object(0, [Medium, Gray, Metal, Cube], 0, -1.0, -2.2),
        object(1, [Small, Red, Rubber, Sphere], 0, -2.0, -1.0),
        object(2, [Large, Purple, Metal, Sphere], 1, 1.5, -1.5),
        object(3, [Medium, Blue, Metal, Cylinder], 2, -1.8, 1.7),
        object(4, [Large, Green, Metal, Cube], 3, 2.1, 2.4),
    ])
    .unwrap()
}

pub fn worked_partial() -> (SceneGraph, ObjectSpec) {
    make_partial_at(&worked_complete(), WORKED_HIDDEN).unwrap()
}
