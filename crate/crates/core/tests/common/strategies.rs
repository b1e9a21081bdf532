//! Proptest strategies for constraint instances, environments and
//! question forms.

use poqa_core::domain::{Attribute, Region, Relation, Value};
use poqa_core::dsl::{ConstraintInstance, Environment, QAtom, QuestionForm};
use proptest::prelude::*;

pub fn region() -> impl Strategy<Value = Region> {
    (0i64..4).prop_map(|r| Region::new(r).unwrap())
}

pub fn value() -> impl Strategy<Value = Value> {
    (0usize..17).prop_map(|i| Value::ALL[i])
}

pub fn attribute() -> impl Strategy<Value = Attribute> {
    (0usize..4).prop_map(|i| Attribute::ALL[i])
}

pub fn pair_parts() -> impl Strategy<Value = ((Region, Region), Attribute, Option<Value>)> {
    (
        (region(), region()),
        attribute(),
        proptest::option::of(value()),
    )
}

/// Any instance of a scene-level template.
pub fn constraint() -> impl Strategy<Value = ConstraintInstance> {
    prop_oneof![
        (region(), value())
            .prop_map(|(region, value)| ConstraintInstance::Negation { region, value }),
        (region(), value())
            .prop_map(|(region, value)| ConstraintInstance::ValueRestriction { region, value }),
        (region(), value(), value())
            .prop_filter("distinct", |(_, a, b)| a != b)
            .prop_map(|(region, a, b)| ConstraintInstance::Or {
                region,
                values: [a, b]
            }),
        (region(), value(), 0u32..4).prop_map(|(region, value, count)| {
            ConstraintInstance::ExactlyN {
                region,
                value,
                count,
            }
        }),
        (pair_parts(), 1u32..4).prop_map(|((regions, same, filter), count)| {
            ConstraintInstance::AtLeastNPairs {
                regions,
                same,
                filter,
                count,
            }
        }),
        (pair_parts(), 0u32..4).prop_map(|((regions, same, filter), count)| {
            ConstraintInstance::AtMostNPairs {
                regions,
                same,
                filter,
                count,
            }
        }),
    ]
}

pub fn environment(max: usize) -> impl Strategy<Value = Environment> {
    proptest::collection::vec(constraint(), 0..max).prop_map(|cs| Environment::new("prop", cs))
}

/// A random logical form over up to three visible variables.
pub fn question_form() -> impl Strategy<Value = QuestionForm> {
    let atom = prop_oneof![
        (0u8..4, value()).prop_map(|(var, value)| vec![QAtom::Has { var, value }]),
        (0u8..4, 0u8..4, attribute())
            .prop_filter("distinct", |(a, b, _)| a != b)
            .prop_map(|(a, b, attr)| vec![
                QAtom::Same {
                    a: a.min(b),
                    b: a.max(b),
                    attr
                },
                QAtom::NotEqual {
                    a: a.min(b),
                    b: a.max(b)
                },
            ]),
        (0usize..4, 0u8..4, 0u8..4)
            .prop_filter("distinct", |(_, a, b)| a != b)
            .prop_map(|(r, a, b)| vec![QAtom::Rel {
                rel: Relation::ALL[r],
                a,
                b
            }]),
    ];
    (
        attribute(),
        proptest::collection::vec(atom, 1..6),
        proptest::collection::vec(value(), 4),
    )
        .prop_filter_map("well-formed", |(attr, groups, fill)| {
            let mut atoms: Vec<QAtom> = groups.into_iter().flatten().collect();
            // Give every visible variable a property so the form validates.
            for v in 1u8..4 {
                let used = atoms.iter().any(|a| match *a {
                    QAtom::Has { var, .. } => var == v,
                    QAtom::Same { a, b, .. }
                    | QAtom::Rel { a, b, .. }
                    | QAtom::NotEqual { a, b } => a == v || b == v,
                });
                if used {
                    atoms.push(QAtom::Has {
                        var: v,
                        value: fill[v as usize],
                    });
                }
            }
            atoms.retain(
                |a| !matches!(a, QAtom::Has { var: 0, value } if value.attribute() == attr),
            );
            atoms.dedup();
            QuestionForm::new(attr, atoms).ok()
        })
}
