use std::collections::HashMap;
use std::fmt;

use super::asp::{parse_program, CmpOp, Head, Literal, Term};
use super::DslError;
use crate::domain::{Attribute, Relation, Value};

/// Question variable. `0` is the queried (hidden) object.
pub type QVar = u8;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum QAtom {
    Has {
        var: QVar,
        value: Value,
    },
    /// Symmetric; stored with `a < b`.
    Same {
        a: QVar,
        b: QVar,
        attr: Attribute,
    },
    /// `b` stands in `rel` to `a`, written `rel(a, b)`.
    Rel {
        rel: Relation,
        a: QVar,
        b: QVar,
    },
    /// Symmetric; stored with `a < b`.
    NotEqual {
        a: QVar,
        b: QVar,
    },
}

impl QAtom {
    fn vars(&self) -> [QVar; 2] {
        match *self {
            QAtom::Has { var, .. } => [var, var],
            QAtom::Same { a, b, .. } | QAtom::Rel { a, b, .. } | QAtom::NotEqual { a, b } => [a, b],
        }
    }

    fn map_vars(self, f: impl Fn(QVar) -> QVar) -> QAtom {
        match self {
            QAtom::Has { var, value } => QAtom::Has { var: f(var), value },
            QAtom::Same { a, b, attr } => {
                let (a, b) = (f(a), f(b));
                QAtom::Same {
                    a: a.min(b),
                    b: a.max(b),
                    attr,
                }
            }
            QAtom::Rel { rel, a, b } => QAtom::Rel {
                rel,
                a: f(a),
                b: f(b),
            },
            QAtom::NotEqual { a, b } => {
                let (a, b) = (f(a), f(b));
                QAtom::NotEqual {
                    a: a.min(b),
                    b: a.max(b),
                }
            }
        }
    }
}

pub fn var_name(v: QVar) -> String {
    const NAMES: [&str; 6] = ["X", "Y", "Z", "W", "V", "U"];
    NAMES
        .get(v as usize)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("Y{v}"))
}

/// Logical form of an attribute query about the hidden object: the value
/// of `query_attribute` on variable `X` (0) such that every atom holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuestionForm {
    pub query_attribute: Attribute,
    pub atoms: Vec<QAtom>,
}

impl QuestionForm {
    /// Builds a form, renumbering variables by first appearance and
    /// checking its invariants.
    pub fn new(query_attribute: Attribute, atoms: Vec<QAtom>) -> Result<QuestionForm, DslError> {
        let mut order: Vec<QVar> = vec![0];
        for a in &atoms {
            for v in a.vars() {
                if !order.contains(&v) {
                    order.push(v);
                }
            }
        }
        let renumber = |v: QVar| order.iter().position(|o| *o == v).expect("seen") as QVar;
        let atoms = atoms.into_iter().map(|a| a.map_vars(renumber)).collect();
        let form = QuestionForm {
            query_attribute,
            atoms,
        };
        form.validate()?;
        Ok(form)
    }

    fn validate(&self) -> Result<(), DslError> {
        for a in &self.atoms {
            match *a {
                QAtom::Has { var: 0, value } if value.attribute() == self.query_attribute => {
                    return Err(DslError::QueryAttributeBound(
                        self.query_attribute.name().to_string(),
                    ))
                }
                QAtom::Same { a, b, .. } if !self.atoms.contains(&QAtom::NotEqual { a, b }) => {
                    return Err(DslError::MalformedQuestion(format!(
                        "same-property atom on {} and {} without an inequality",
                        var_name(a),
                        var_name(b)
                    )));
                }
                _ => {}
            }
        }
        for v in 1..self.var_count() as QVar {
            let constrained = self
                .atoms
                .iter()
                .any(|a| matches!(a, QAtom::Has { var, .. } if *var == v));
            if !constrained {
                return Err(DslError::MalformedQuestion(format!(
                    "variable {} has no property atom",
                    var_name(v)
                )));
            }
        }
        Ok(())
    }

    /// Number of distinct variables, the queried one included.
    pub fn var_count(&self) -> usize {
        self.atoms
            .iter()
            .flat_map(|a| a.vars())
            .max()
            .map_or(1, |m| m as usize + 1)
    }

    /// Property values the form states directly for `var`.
    pub fn stated(&self, var: QVar) -> Vec<Value> {
        self.atoms
            .iter()
            .filter_map(|a| match *a {
                QAtom::Has { var: v, value } if v == var => Some(value),
                _ => None,
            })
            .collect()
    }

    /// Rule text with `missing(Q)` as head.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for QuestionForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "missing(Q) :- hasProperty(X, {}, Q)",
            self.query_attribute
        )?;
        for a in &self.atoms {
            f.write_str(", ")?;
            match *a {
                QAtom::Has { var, value } => write!(
                    f,
                    "hasProperty({}, {}, {value})",
                    var_name(var),
                    value.attribute()
                )?,
                QAtom::Same { a, b, attr } => {
                    write!(f, "same_{attr}({}, {})", var_name(a), var_name(b))?
                }
                QAtom::Rel { rel, a, b } => write!(f, "{rel}({}, {})", var_name(a), var_name(b))?,
                QAtom::NotEqual { a, b } => write!(f, "{} != {}", var_name(a), var_name(b))?,
            }
        }
        f.write_str(".")
    }
}

/// Parses a question program whose head is `missing(Q)` or `query(Q)`
/// (`unknown(Q)` is accepted as well).
pub fn parse_question(text: &str) -> Result<QuestionForm, DslError> {
    let rules = parse_program(text)?;
    let [rule] = rules.as_slice() else {
        return Err(DslError::StatementCount(rules.len()));
    };
    let answer = match &rule.head {
        Head::Atom(h) if matches!(h.pred.as_str(), "missing" | "query" | "unknown") => {
            match h.args.as_slice() {
                [Term::Var(q)] => q.clone(),
                _ => return Err(DslError::MalformedQuestion(format!("bad head `{h}`"))),
            }
        }
        _ => {
            return Err(DslError::MalformedQuestion(
                "head must be missing(Q) or query(Q)".into(),
            ))
        }
    };

    let mut vars: HashMap<String, QVar> = HashMap::new();
    let mut query: Option<(String, Attribute)> = None;
    // The queried variable is numbered 0, others by first appearance.
    for lit in &rule.body {
        if let Literal::Pos(a) = lit {
            if a.pred == "hasProperty" && a.args.get(2) == Some(&Term::Var(answer.clone())) {
                if query.is_some() {
                    return Err(DslError::QueryVariableMisuse);
                }
                let (Term::Var(x), Term::Sym(attr)) = (&a.args[0], &a.args[1]) else {
                    return Err(DslError::MalformedQuestion(format!("bad query atom `{a}`")));
                };
                let attr = Attribute::parse(attr)
                    .map_err(|e| DslError::MalformedQuestion(e.to_string()))?;
                query = Some((x.clone(), attr));
            }
        }
    }
    let (query_var, query_attribute) = query.ok_or(DslError::NoQueryAtom)?;
    vars.insert(query_var.clone(), 0);

    let var = |t: &Term, vars: &mut HashMap<String, QVar>| -> Result<QVar, DslError> {
        match t {
            Term::Var(v) if *v == answer => Err(DslError::QueryVariableMisuse),
            Term::Var(v) => {
                let next = vars.len() as QVar;
                Ok(*vars.entry(v.clone()).or_insert(next))
            }
            other => Err(DslError::MalformedQuestion(format!(
                "expected a variable, found `{other}`"
            ))),
        }
    };

    let mut atoms = Vec::new();
    for lit in &rule.body {
        match lit {
            Literal::Pos(a) => match (a.pred.as_str(), a.args.as_slice()) {
                ("hasProperty", [_, _, Term::Var(q)]) if *q == answer => {}
                ("hasProperty", [x, Term::Sym(attr), Term::Sym(val)]) => {
                    let attr = Attribute::parse(attr)
                        .map_err(|e| DslError::MalformedQuestion(e.to_string()))?;
                    let value = Value::parse_for(attr, val)
                        .map_err(|e| DslError::MalformedQuestion(e.to_string()))?;
                    atoms.push(QAtom::Has {
                        var: var(x, &mut vars)?,
                        value,
                    });
                }
                ("sameProperty", [x, y, Term::Sym(attr)]) => {
                    let attr = Attribute::parse(attr)
                        .map_err(|e| DslError::MalformedQuestion(e.to_string()))?;
                    atoms.push(same(var(x, &mut vars)?, var(y, &mut vars)?, attr));
                }
                (p, [x, y]) if p.starts_with("same_") => {
                    let attr = Attribute::parse(&p["same_".len()..])
                        .map_err(|_| DslError::UnknownPredicate(p.to_string()))?;
                    atoms.push(same(var(x, &mut vars)?, var(y, &mut vars)?, attr));
                }
                (p, [x, y]) if Relation::parse(p).is_some() => {
                    atoms.push(QAtom::Rel {
                        rel: Relation::parse(p).expect("checked"),
                        a: var(x, &mut vars)?,
                        b: var(y, &mut vars)?,
                    });
                }
                ("object", [x]) => {
                    var(x, &mut vars)?;
                }
                (p, _) => return Err(DslError::UnknownPredicate(p.to_string())),
            },
            Literal::Cmp(x, CmpOp::Ne, y) => {
                let (a, b) = (var(x, &mut vars)?, var(y, &mut vars)?);
                atoms.push(QAtom::NotEqual {
                    a: a.min(b),
                    b: a.max(b),
                });
            }
            other => {
                return Err(DslError::MalformedQuestion(format!(
                    "unsupported literal `{other}`"
                )))
            }
        }
    }
    QuestionForm::new(query_attribute, atoms)
}

fn same(a: QVar, b: QVar, attr: Attribute) -> QAtom {
    QAtom::Same {
        a: a.min(b),
        b: a.max(b),
        attr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RELATIONAL_EXAMPLE: &str =
        "query(Q):- hasProperty(X,color,Q), hasProperty(X,shape,cylinder), \
        hasProperty(Y,size,medium), hasProperty(Y,color,red), same_material(Y,X), X!=Y.";

    const WORKED_EXAMPLE: &str = "missing(Q) :- hasProperty(X,size,Q), hasProperty(X,material,rubber), \
        hasProperty(X,color,red), hasProperty(Y,color,purple), hasProperty(Y,size,large), X!=Y, same_shape(Y,X).";

    #[test]
    fn parses_attribute_query() {
        let q = parse_question(RELATIONAL_EXAMPLE).unwrap();
        assert_eq!(q.query_attribute, Attribute::Color);
        assert_eq!(
            q.atoms,
            vec![
                QAtom::Has {
                    var: 0,
                    value: Value::Cylinder
                },
                QAtom::Has {
                    var: 1,
                    value: Value::Medium
                },
                QAtom::Has {
                    var: 1,
                    value: Value::Red
                },
                QAtom::Same {
                    a: 0,
                    b: 1,
                    attr: Attribute::Material
                },
                QAtom::NotEqual { a: 0, b: 1 },
            ]
        );
    }

    #[test]
    fn parses_missing_head() {
        let q = parse_question(WORKED_EXAMPLE).unwrap();
        assert_eq!(q.query_attribute, Attribute::Size);
        assert_eq!(q.stated(0), vec![Value::Rubber, Value::Red]);
        assert_eq!(q.stated(1), vec![Value::Purple, Value::Large]);
        assert!(q.atoms.contains(&QAtom::Same {
            a: 0,
            b: 1,
            attr: Attribute::Shape
        }));
    }

    #[test]
    fn render_roundtrip() {
        for src in [RELATIONAL_EXAMPLE, WORKED_EXAMPLE] {
            let q = parse_question(src).unwrap();
            assert_eq!(parse_question(&q.render()).unwrap(), q);
        }
    }

    #[test]
    fn relational_question_with_other_head() {
        let q = parse_question(
            "unknown(Q):-hasProperty(X, color, Q), hasProperty(X, shape, cylinder), \
             hasProperty(X1, color, blue), hasProperty(X1, shape, sphere), right(X1, X).",
        )
        .unwrap();
        assert!(q.atoms.contains(&QAtom::Rel {
            rel: Relation::Right,
            a: 1,
            b: 0
        }));
        assert!(q.render().contains("right(Y, X)"));
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_question("missing(Q) :- hasProperty(X, color, Q), hasProperty(X, color, red).")
                .unwrap_err(),
            DslError::QueryAttributeBound("color".into())
        );
        assert_eq!(
            parse_question("missing(Q) :- hasProperty(X, color, red).").unwrap_err(),
            DslError::NoQueryAtom
        );
        assert_eq!(
            parse_question("missing(Q) :- hasProperty(X, color, Q), hasProperty(Y, size, Q).")
                .unwrap_err(),
            DslError::QueryVariableMisuse
        );
        assert_eq!(
            parse_question("missing(Q) :- hasProperty(X, color, Q), near(X, Y).").unwrap_err(),
            DslError::UnknownPredicate("near".into())
        );
        assert!(matches!(
            parse_question("missing(Q) :- hasProperty(X, color, Q), hasProperty(Y, size, large), same_shape(X, Y).")
                .unwrap_err(),
            DslError::MalformedQuestion(_)
        ));
    }
}
