use std::collections::HashSet;
use std::sync::OnceLock;

use super::asp::{parse_program, Atom, CmpOp, Head, Literal, Rule, Term};
use super::DslError;
use crate::domain::{region_pair_allowed, Attribute, Region, Relation, Value};

/// Rules shared by every environment, one numbered line per source line
/// so that environment-specific rules appended after them start at 44.
pub const GENERIC_RULES: &str = "\
property(color, gray). property(color, red).
property(color, blue). property(color, green).
property(color, brown). property(color, purple).
property(color, cyan). property(color, yellow).
property(shape, cube). property(shape, cylinder).
property(shape, sphere). property(shape, cone).
property(size, small). property(size, medium).
property(size, large).
property(material, rubber). property(material, metal).
region(0). region(1). region(2). region(3).
right_R(0, 0). right_R(0, 1). right_R(0, 2). right_R(0, 3).
right_R(1, 1). right_R(1, 3).
right_R(2, 0). right_R(2, 1). right_R(2, 2). right_R(2, 3).
right_R(3, 1). right_R(3, 3).
left_R(R1, R2) :- right_R(R2, R1).
front_R(0, 0). front_R(0, 1). front_R(0, 2). front_R(0, 3).
front_R(1, 0). front_R(1, 1). front_R(1, 2). front_R(1, 3).
front_R(2, 2). front_R(2, 3).
front_R(3, 2). front_R(3, 3).
behind_R(R1, R2) :- front_R(R2, R1).
sameProperty(X1, X2, P) :- hasProperty(X1, P, V),
    hasProperty(X2, P, V), X1 != X2.
same_color(X, Y) :- sameProperty(X, Y, color).
same_size(X, Y) :- sameProperty(X, Y, size).
same_shape(X, Y) :- sameProperty(X, Y, shape).
same_material(X, Y) :- sameProperty(X, Y, material).
1{hasProperty(X, color, V) :
    property(color, V)}1 :- object(X).
1{hasProperty(X, material, V) :
    property(material, V)}1 :- object(X).
1{hasProperty(X, shape, V) :
    property(shape, V)}1 :- object(X).
1{hasProperty(X, size, V) :
    property(size, V)}1 :- object(X).
1{at(X, R) : region(R)}1 :- object(X).
:- sameProperty(X1, X2, color),
    sameProperty(X1, X2, material),
    sameProperty(X1, X2, size),
    sameProperty(X1, X2, shape),
    object(X1), object(X2), X1 != X2.
exceed_region_capacity(R) :-
    #count{X: object(X), at(X, R)} >= 4, region(R).
:- exceed_region_capacity(_).
";

/// English reading of the generic rules, as given to language models.
pub const GENERIC_RULES_NL: &[&str] = &[
    "Objects must have 4 properties. They are color, shape, size, and material.",
    "Objects can be in one of the 8 colors. It can be gray, or red, or blue, or green, or brown, or purple, or cyan, or yellow.",
    "Objects can be in one of the 4 shapes. It can be a cube, cylinder, sphere, or cone.",
    "Objects can be in one of the 3 sizes. It can be small, medium, or large.",
    "Objects can be in one of the 2 materials. It can be rubber or metal.",
    "The scene is divided into 4 regions. They are named 0, 1, 2, 3.",
    "If there are two objects and the first object is located in region 0 and the second object is to the right of the first object, then the location of the second object is either in region 0, 1, 2, or 3.",
    "If there are two objects and the first object is located in region 1 and the second object is to the right of the first object, then the location of the second object is either in region 1, or 3.",
    "If there are two objects and the first object is located in region 2 and the second object is to the right of the first object, then the location of the second object is either in region 0, 1, 2, or 3.",
    "If there are two objects and the first object is located in region 3 and the second object is to the right of the first object, then the location of the second object is either in region 1, or 3.",
    "If there are two objects and the first object is to the right of the second object, then the second object is to the left of the first object.",
    "If there are two objects and the first object is located in region 0 and the second object is in front of the first object, then the location of the second object is either in region 0, 1, 2, or 3.",
    "If there are two objects and the first object is located in region 1 and the second object is in front of the first object, then the location of the second object is either in region 0, 1, 2, or 3.",
    "If there are two objects and the first object is located in region 2 and the second object is in front of the first object, then the location of the second object is either in region 2, or 3.",
    "If there are two objects and the first object is located in region 3 and the second object is in front of the first object, then the location of the second object is either in region 2, or 3.",
    "If there are two objects and the first object is in front of the second object, then the second object is behind the first object.",
    "Every object must be assigned exactly one value for color.",
    "Every object must be assigned exactly one value for material.",
    "Every object must be assigned exactly one value for shape.",
    "Every object must be assigned exactly one value for size.",
    "Every object must be assigned exactly one value for region.",
    "Two different objects cannot have the same values for all the 4 properties.",
    "Every region can have at most 3 objects.",
];

/// One instantiated constraint template.
///
/// Pair templates count ordered pairs `(X1, X2)` of distinct objects with
/// `X1` in the first region and `X2` in the second that agree on `same`;
/// when `filter` is set both objects must also carry that value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConstraintInstance {
    /// All objects in `region` have `value`.
    ValueRestriction {
        region: Region,
        value: Value,
    },
    /// No object in `region` has `value`.
    Negation {
        region: Region,
        value: Value,
    },
    /// Exactly `count` objects in `region` have `value`.
    ExactlyN {
        region: Region,
        value: Value,
        count: u32,
    },
    AtLeastNPairs {
        regions: (Region, Region),
        same: Attribute,
        filter: Option<Value>,
        count: u32,
    },
    AtMostNPairs {
        regions: (Region, Region),
        same: Attribute,
        filter: Option<Value>,
        count: u32,
    },
    /// Every object in `region` has at least one of the two values.
    Or {
        region: Region,
        values: [Value; 2],
    },
    /// No region holds more than `max` objects.
    RegionCapacity {
        max: u32,
    },
    ObjectCount {
        count: u32,
    },
    /// No two objects agree on all four properties.
    Distinctness,
}

impl ConstraintInstance {
    /// Regions the constraint is scoped to; empty for scene-wide rules.
    pub fn scope(&self) -> Vec<Region> {
        use ConstraintInstance::*;
        match self {
            ValueRestriction { region, .. }
            | Negation { region, .. }
            | ExactlyN { region, .. }
            | Or { region, .. } => vec![*region],
            AtLeastNPairs { regions, .. } | AtMostNPairs { regions, .. } => {
                if regions.0 == regions.1 {
                    vec![regions.0]
                } else {
                    vec![regions.0, regions.1]
                }
            }
            RegionCapacity { .. } | ObjectCount { .. } | Distinctness => Vec::new(),
        }
    }

    /// Whether the constraint only ever looks at one object at a time.
    pub fn is_region_local(&self) -> bool {
        matches!(
            self,
            ConstraintInstance::ValueRestriction { .. }
                | ConstraintInstance::Negation { .. }
                | ConstraintInstance::Or { .. }
        )
    }

    pub fn template_name(&self) -> &'static str {
        use ConstraintInstance::*;
        match self {
            ValueRestriction { .. } => "value-restriction",
            Negation { .. } => "negation",
            ExactlyN { .. } => "exactly-n",
            AtLeastNPairs { .. } => "at-least-n-pairs",
            AtMostNPairs { .. } => "at-most-n-pairs",
            Or { .. } => "or",
            RegionCapacity { .. } => "region-capacity",
            ObjectCount { .. } => "object-count",
            Distinctness => "distinctness",
        }
    }
}

/// First and last source line of a parsed rule.
pub type LineSpan = (usize, usize);

/// A named set of constraint instances. The generic rules are implicit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Environment {
    pub id: String,
    pub object_count: Option<usize>,
    constraints: Vec<ConstraintInstance>,
    lines: Vec<Option<LineSpan>>,
}

impl Environment {
    pub fn new(id: impl Into<String>, constraints: Vec<ConstraintInstance>) -> Environment {
        let lines = vec![None; constraints.len()];
        Environment {
            id: id.into(),
            object_count: None,
            constraints,
            lines,
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn with_object_count(&self, n: usize) -> Environment {
        let mut env = self.clone();
        env.object_count = Some(n);
        env
    }

    pub fn push(&mut self, c: ConstraintInstance) {
        self.constraints.push(c);
        self.lines.push(None);
    }

    pub fn constraints(&self) -> &[ConstraintInstance] {
        &self.constraints
    }

    /// Source lines of constraint `i`, when parsed from text.
    pub fn source_lines(&self, i: usize) -> Option<LineSpan> {
        self.lines.get(i).copied().flatten()
    }

    /// Number of template instantiations (the object count excluded).
    pub fn instantiation_count(&self) -> usize {
        self.constraints.len()
    }

    /// How many constraints are scoped to each region.
    pub fn region_scope_counts(&self) -> [usize; 4] {
        let mut counts = [0; 4];
        for c in &self.constraints {
            for r in c.scope() {
                counts[r.index()] += 1;
            }
        }
        counts
    }

    /// Rule text: an optional object-count fact, then one rule per line.
    pub fn render_asp(&self) -> String {
        let mut out = String::new();
        if let Some(n) = self.object_count {
            out.push_str(&render_constraint_asp(&ConstraintInstance::ObjectCount {
                count: n as u32,
            }));
            out.push('\n');
        }
        for c in &self.constraints {
            out.push_str(&render_constraint_asp(c));
            out.push('\n');
        }
        out
    }

    /// Complete program: the generic rules followed by [`Environment::render_asp`],
    /// so that environment rules start at line 44.
    pub fn render_program(&self) -> String {
        format!("{GENERIC_RULES}{}", self.render_asp())
    }

    /// The same environment with source line numbers as laid out by
    /// [`Environment::render_program`].
    pub fn with_line_numbers(&self) -> Environment {
        parse_environment(&self.render_program())
            .expect("rendered environments parse")
            .with_id(self.id.clone())
    }

    /// One English sentence per line, same order as [`Environment::render_asp`].
    pub fn render_nl(&self) -> String {
        self.nl_sentences().into_iter().map(|s| s + "\n").collect()
    }

    pub fn nl_sentences(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(n) = self.object_count {
            out.push(render_constraint_nl(&ConstraintInstance::ObjectCount {
                count: n as u32,
            }));
        }
        out.extend(self.constraints.iter().map(render_constraint_nl));
        out
    }
}

fn generic_canonical() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| {
        parse_program(GENERIC_RULES)
            .expect("generic rules parse")
            .iter()
            .map(Rule::canonical)
            .collect()
    })
}

fn distinctness_canonical() -> &'static str {
    static S: OnceLock<String> = OnceLock::new();
    S.get_or_init(|| {
        parse_program(&render_constraint_asp(&ConstraintInstance::Distinctness)).expect("parse")[0]
            .canonical()
    })
}

enum Statement {
    Generic,
    Instance(ConstraintInstance),
}

/// Parses an environment file. Generic rules are recognized and absorbed;
/// the object-count fact sets [`Environment::object_count`]; every other
/// statement must be an instance of a known template.
pub fn parse_environment(text: &str) -> Result<Environment, DslError> {
    let mut env = Environment::default();
    for rule in parse_program(text)? {
        match classify(&rule)? {
            Statement::Generic => {}
            Statement::Instance(ConstraintInstance::ObjectCount { count }) => {
                if env.object_count.is_some() {
                    return Err(DslError::DuplicateObjectCount { line: rule.lines.0 });
                }
                env.object_count = Some(count as usize);
            }
            Statement::Instance(ConstraintInstance::Distinctness)
            | Statement::Instance(ConstraintInstance::RegionCapacity { max: 3 }) => {}
            Statement::Instance(c) => {
                env.constraints.push(c);
                env.lines.push(Some(rule.lines));
            }
        }
    }
    Ok(env)
}

/// Parses a single statement as a constraint instance.
pub fn parse_constraint(text: &str) -> Result<ConstraintInstance, DslError> {
    let rules = parse_program(text)?;
    if rules.len() != 1 {
        return Err(DslError::StatementCount(rules.len()));
    }
    match classify(&rules[0])? {
        Statement::Instance(c) => Ok(c),
        Statement::Generic => Err(DslError::UnrecognizedRule {
            line: rules[0].lines.0,
            rule: rules[0].to_string(),
        }),
    }
}

fn classify(rule: &Rule) -> Result<Statement, DslError> {
    let line = rule.lines.0;
    let canonical = rule.canonical();
    if canonical == distinctness_canonical() {
        return Ok(Statement::Instance(ConstraintInstance::Distinctness));
    }
    if generic_canonical().contains(&canonical) {
        return Ok(Statement::Generic);
    }
    match (&rule.head, rule.body.as_slice()) {
        (Head::Atom(a), []) if a.pred == "object" => object_count(a, line),
        (Head::Atom(a), []) => Err(bad_fact(a, line)),
        (Head::None, [Literal::Count(agg)]) => {
            let conds = Conds::collect(&agg.conds, line)?;
            match agg.vars.as_slice() {
                [Term::Var(x)] => exactly_n(&conds, x, agg.op, agg.bound, line),
                [Term::Var(x1), Term::Var(x2)] => pairs(&conds, x1, x2, agg.op, agg.bound, line),
                _ => Err(mismatch(line, "aggregates count one or two variables")),
            }
        }
        (Head::None, [Literal::Count(agg), Literal::Pos(region)]) if region.pred == "region" => {
            capacity(agg, region, line)
        }
        (Head::None, body) => region_local(body, line),
        _ => Err(unrecognized(rule)),
    }
}

fn unrecognized(rule: &Rule) -> DslError {
    DslError::UnrecognizedRule {
        line: rule.lines.0,
        rule: rule.to_string(),
    }
}

fn mismatch(line: usize, message: impl Into<String>) -> DslError {
    DslError::TemplateMismatch {
        line,
        message: message.into(),
    }
}

fn object_count(a: &Atom, line: usize) -> Result<Statement, DslError> {
    match a.args.as_slice() {
        [Term::Range(0, hi)] if *hi >= 0 => {
            Ok(Statement::Instance(ConstraintInstance::ObjectCount {
                count: (*hi + 1) as u32,
            }))
        }
        _ => Err(mismatch(line, "object count must read `object(0..N)`")),
    }
}

/// Explains why a ground fact is not one of the generic facts.
fn bad_fact(a: &Atom, line: usize) -> DslError {
    let ints: Vec<i64> = a
        .args
        .iter()
        .filter_map(|t| match t {
            Term::Int(i) => Some(*i),
            _ => None,
        })
        .collect();
    match (a.pred.as_str(), a.args.as_slice()) {
        ("property", [Term::Sym(attr), Term::Sym(val)]) => match Attribute::parse(attr) {
            Err(_) => DslError::UnknownAttribute {
                line,
                name: attr.clone(),
            },
            Ok(_) => DslError::UnknownValue {
                line,
                attribute: attr.clone(),
                value: val.clone(),
            },
        },
        ("region", [Term::Int(r)]) => DslError::RegionOutOfRange { line, region: *r },
        ("right_R" | "front_R", [Term::Int(_), Term::Int(_)]) => {
            if let Some(r) = ints.iter().find(|r| !(0..4).contains(*r)) {
                return DslError::RegionOutOfRange { line, region: *r };
            }
            let rel = if a.pred == "right_R" {
                Relation::Right
            } else {
                Relation::Front
            };
            let (s, t) = (Region::new(ints[0]).unwrap(), Region::new(ints[1]).unwrap());
            debug_assert!(!region_pair_allowed(rel, s, t));
            mismatch(line, format!("`{a}` contradicts the fixed region topology"))
        }
        _ => DslError::UnrecognizedRule {
            line,
            rule: format!("{a}."),
        },
    }
}

fn region_of(t: &Term, line: usize) -> Result<Region, DslError> {
    match t {
        Term::Int(i) => {
            Region::new(*i).map_err(|_| DslError::RegionOutOfRange { line, region: *i })
        }
        other => Err(mismatch(
            line,
            format!("expected a region number, found `{other}`"),
        )),
    }
}

fn value_of(attr: &Term, val: &Term, line: usize) -> Result<Value, DslError> {
    let (Term::Sym(attr), Term::Sym(val)) = (attr, val) else {
        return Err(mismatch(
            line,
            "hasProperty needs a ground attribute and value",
        ));
    };
    let a = Attribute::parse(attr).map_err(|_| DslError::UnknownAttribute {
        line,
        name: attr.clone(),
    })?;
    Value::parse_for(a, val).map_err(|_| DslError::UnknownValue {
        line,
        attribute: attr.clone(),
        value: val.clone(),
    })
}

fn attribute_of(t: &Term, line: usize) -> Result<Attribute, DslError> {
    match t {
        Term::Sym(s) => Attribute::parse(s).map_err(|_| DslError::UnknownAttribute {
            line,
            name: s.clone(),
        }),
        other => Err(mismatch(
            line,
            format!("expected an attribute, found `{other}`"),
        )),
    }
}

/// Body literals of a template, sorted by predicate.
#[derive(Default)]
struct Conds {
    objects: Vec<String>,
    at: Vec<(String, Region)>,
    has: Vec<(String, Value, bool)>,
    same: Vec<(String, String, Attribute)>,
}

impl Conds {
    fn collect(lits: &[Literal], line: usize) -> Result<Conds, DslError> {
        let mut c = Conds::default();
        for lit in lits {
            let (atom, negated) = match lit {
                Literal::Pos(a) => (a, false),
                Literal::Neg(a) => (a, true),
                other => return Err(mismatch(line, format!("unexpected literal `{other}`"))),
            };
            let var = |t: &Term| match t {
                Term::Var(v) => Ok(v.clone()),
                other => Err(mismatch(
                    line,
                    format!("expected a variable, found `{other}`"),
                )),
            };
            match (atom.pred.as_str(), atom.args.as_slice(), negated) {
                ("object", [x], false) => c.objects.push(var(x)?),
                ("at", [x, r], false) => c.at.push((var(x)?, region_of(r, line)?)),
                ("hasProperty", [x, a, v], neg) => {
                    c.has.push((var(x)?, value_of(a, v, line)?, neg))
                }
                ("sameProperty", [x, y, a], false) => {
                    c.same.push((var(x)?, var(y)?, attribute_of(a, line)?))
                }
                (p, args, _) if p.starts_with("same_") && args.len() == 2 && !negated => {
                    let attr = Attribute::parse(&p["same_".len()..]).map_err(|_| {
                        DslError::UnknownAttribute {
                            line,
                            name: p["same_".len()..].to_string(),
                        }
                    })?;
                    c.same.push((var(&args[0])?, var(&args[1])?, attr))
                }
                ("object" | "at" | "hasProperty" | "sameProperty", _, _) => {
                    return Err(mismatch(line, format!("bad use of `{atom}`")))
                }
                _ => {
                    return Err(DslError::UnrecognizedRule {
                        line,
                        rule: lit.to_string(),
                    })
                }
            }
        }
        Ok(c)
    }

    fn region_for(&self, var: &str) -> Option<Region> {
        self.at.iter().find(|(v, _)| v == var).map(|(_, r)| *r)
    }
}

fn region_local(body: &[Literal], line: usize) -> Result<Statement, DslError> {
    let c = Conds::collect(body, line)?;
    let [(x, region)] = c.at.as_slice() else {
        return Err(mismatch(
            line,
            "region constraints need exactly one `at` literal",
        ));
    };
    if c.objects.as_slice() != [x.clone()] || !c.same.is_empty() {
        return Err(mismatch(
            line,
            "region constraints read `object(X), at(X, R), ...`",
        ));
    }
    if c.has.iter().any(|(v, _, _)| v != x) {
        return Err(mismatch(
            line,
            "all literals must talk about the same object",
        ));
    }
    let pos: Vec<Value> = c.has.iter().filter(|h| !h.2).map(|h| h.1).collect();
    let neg: Vec<Value> = c.has.iter().filter(|h| h.2).map(|h| h.1).collect();
    let region = *region;
    let inst = match (pos.as_slice(), neg.as_slice()) {
        ([v], []) => ConstraintInstance::Negation { region, value: *v },
        ([], [v]) => ConstraintInstance::ValueRestriction { region, value: *v },
        ([], [a, b]) if a != b => ConstraintInstance::Or {
            region,
            values: [*a, *b],
        },
        _ => {
            return Err(mismatch(
                line,
                format!(
                    "{} positive and {} negated hasProperty literals match no template",
                    pos.len(),
                    neg.len()
                ),
            ))
        }
    };
    Ok(Statement::Instance(inst))
}

fn exactly_n(
    c: &Conds,
    x: &str,
    op: CmpOp,
    bound: i64,
    line: usize,
) -> Result<Statement, DslError> {
    let ok_shape = c.objects.as_slice() == [x.to_string()]
        && c.at.len() == 1
        && c.at[0].0 == x
        && c.has.len() == 1
        && c.has[0].0 == x
        && !c.has[0].2
        && c.same.is_empty();
    if !ok_shape || op != CmpOp::Ne || bound < 0 {
        return Err(mismatch(
            line,
            "exactly-N reads `#count{X: hasProperty(X, P, V), object(X), at(X, R)} != N`",
        ));
    }
    Ok(Statement::Instance(ConstraintInstance::ExactlyN {
        region: c.at[0].1,
        value: c.has[0].1,
        count: bound as u32,
    }))
}

fn pairs(
    c: &Conds,
    x1: &str,
    x2: &str,
    op: CmpOp,
    bound: i64,
    line: usize,
) -> Result<Statement, DslError> {
    let shape_err = || {
        mismatch(
            line,
            "pair count needs sameProperty(X1, X2, P), object and at literals for both variables",
        )
    };
    let [(s1, s2, same)] = c.same.as_slice() else {
        return Err(shape_err());
    };
    if s1 != x1 || s2 != x2 || x1 == x2 || c.objects.len() != 2 || c.at.len() != 2 {
        return Err(shape_err());
    }
    if !c.objects.iter().any(|o| o == x1) || !c.objects.iter().any(|o| o == x2) {
        return Err(shape_err());
    }
    let (Some(r1), Some(r2)) = (c.region_for(x1), c.region_for(x2)) else {
        return Err(shape_err());
    };
    let filter = match c.has.as_slice() {
        [] => None,
        [(a, va, false), (b, vb, false)]
            if va == vb
                && a != b
                && [a, b].contains(&&x1.to_string())
                && [a, b].contains(&&x2.to_string()) =>
        {
            Some(*va)
        }
        _ => {
            return Err(mismatch(
                line,
                "pair filters must put the same value on both objects",
            ))
        }
    };
    let regions = (r1, r2);
    let same = *same;
    let inst = match op {
        CmpOp::Lt if bound >= 0 => ConstraintInstance::AtLeastNPairs {
            regions,
            same,
            filter,
            count: bound as u32,
        },
        CmpOp::Ge if bound >= 1 => ConstraintInstance::AtMostNPairs {
            regions,
            same,
            filter,
            count: (bound - 1) as u32,
        },
        _ => return Err(mismatch(line, "pair counts compare with `< N` or `>= N`")),
    };
    Ok(Statement::Instance(inst))
}

fn capacity(
    agg: &super::asp::Aggregate,
    region: &Atom,
    line: usize,
) -> Result<Statement, DslError> {
    let ok = match (
        agg.vars.as_slice(),
        region.args.as_slice(),
        agg.conds.as_slice(),
    ) {
        ([Term::Var(x)], [Term::Var(r)], [a, b]) => {
            let object = Literal::Pos(Atom {
                pred: "object".into(),
                args: vec![Term::Var(x.clone())],
            });
            let at = Literal::Pos(Atom {
                pred: "at".into(),
                args: vec![Term::Var(x.clone()), Term::Var(r.clone())],
            });
            (*a == object && *b == at) || (*a == at && *b == object)
        }
        _ => false,
    };
    if !ok || agg.op != CmpOp::Ge || agg.bound < 1 {
        return Err(mismatch(
            line,
            "capacity reads `#count{X: object(X), at(X, R)} >= K, region(R)`",
        ));
    }
    Ok(Statement::Instance(ConstraintInstance::RegionCapacity {
        max: (agg.bound - 1) as u32,
    }))
}

fn has(var: &str, v: Value) -> String {
    format!("hasProperty({var}, {}, {v})", v.attribute())
}

/// Renders an instance as a single rule statement.
pub fn render_constraint_asp(c: &ConstraintInstance) -> String {
    use ConstraintInstance::*;
    match c {
        ValueRestriction { region, value } => {
            format!(":- object(X), at(X, {region}), not {}.", has("X", *value))
        }
        Negation { region, value } => {
            format!(":- object(X), at(X, {region}), {}.", has("X", *value))
        }
        Or { region, values } => format!(
            ":- object(X), at(X, {region}), not {}, not {}.",
            has("X", values[0]),
            has("X", values[1])
        ),
        ExactlyN {
            region,
            value,
            count,
        } => format!(
            ":- #count{{X: {}, object(X), at(X, {region})}} != {count}.",
            has("X", *value)
        ),
        AtLeastNPairs {
            regions,
            same,
            filter,
            count,
        } => pair_rule(*regions, *same, *filter, &format!("< {count}")),
        AtMostNPairs {
            regions,
            same,
            filter,
            count,
        } => pair_rule(*regions, *same, *filter, &format!(">= {}", count + 1)),
        RegionCapacity { max } => format!(
            ":- #count{{X: object(X), at(X, R)}} >= {}, region(R).",
            max + 1
        ),
        ObjectCount { count } => format!("object(0..{}).", *count as i64 - 1),
        Distinctness => ":- sameProperty(X1, X2, color), sameProperty(X1, X2, material), \
sameProperty(X1, X2, size), sameProperty(X1, X2, shape), object(X1), object(X2), X1 != X2."
            .to_string(),
    }
}

fn pair_rule(
    regions: (Region, Region),
    same: Attribute,
    filter: Option<Value>,
    cmp: &str,
) -> String {
    let mut s = format!(
        ":- #count{{X1, X2: sameProperty(X1, X2, {same}), object(X1), object(X2), at(X1, {}), at(X2, {})",
        regions.0, regions.1
    );
    if let Some(v) = filter {
        s.push_str(&format!(", {}, {}", has("X1", v), has("X2", v)));
    }
    s.push_str(&format!("}} {cmp}."));
    s
}

/// One English sentence per instance.
pub fn render_constraint_nl(c: &ConstraintInstance) -> String {
    use ConstraintInstance::*;
    let phrase = |v: &Value| format!("{v} {}", v.attribute());
    match c {
        ValueRestriction { region, value } => {
            format!("All objects in region {region} have {}.", phrase(value))
        }
        Negation { region, value } => {
            format!("There are no {} objects in region {region}.", phrase(value))
        }
        Or { region, values } => format!(
            "All objects in region {region} have either {} or {}.",
            phrase(&values[0]),
            phrase(&values[1])
        ),
        ExactlyN {
            region,
            value,
            count,
        } => format!(
            "There are exactly {count} {} objects in region {region}.",
            phrase(value)
        ),
        AtLeastNPairs {
            regions,
            same,
            filter,
            count,
        } => pair_sentence(
            "at least",
            *count,
            if *count == 1 { "pair" } else { "pairs" },
            *regions,
            *same,
            *filter,
        ),
        AtMostNPairs {
            regions,
            same,
            filter,
            count,
        } => pair_sentence("at most", *count, "pairs", *regions, *same, *filter),
        RegionCapacity { max } => format!("Every region can have at most {max} objects."),
        ObjectCount { count } => format!("There are {count} objects in the scene."),
        Distinctness => {
            "Two different objects cannot have the same values for all the 4 properties."
                .to_string()
        }
    }
}

fn pair_sentence(
    bound: &str,
    count: u32,
    noun: &str,
    regions: (Region, Region),
    same: Attribute,
    filter: Option<Value>,
) -> String {
    let filter = filter
        .map(|v| format!("{} {v} ", v.attribute()))
        .unwrap_or_default();
    format!(
        "There are {bound} {count} {noun} of {filter}objects with the same {same} in regions {} and {} together.",
        regions.0, regions.1
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(i: i64) -> Region {
        Region::new(i).unwrap()
    }

    #[test]
    fn parses_table_instantiations() {
        assert_eq!(
            parse_constraint(":- object(X), at(X, 0), hasProperty(X, material, metal).").unwrap(),
            ConstraintInstance::Negation {
                region: r(0),
                value: Value::Metal
            }
        );
        assert_eq!(
            parse_constraint(
                ":- object(X), at(X, 1), not hasProperty(X, color, yellow), not hasProperty(X, color, blue)."
            )
            .unwrap(),
            ConstraintInstance::Or {
                region: r(1),
                values: [Value::Yellow, Value::Blue]
            }
        );
        assert_eq!(
            parse_constraint(":- object(X),at(X, 0), not hasProperty(X, color, red).").unwrap(),
            ConstraintInstance::ValueRestriction {
                region: r(0),
                value: Value::Red
            }
        );
        assert_eq!(
            parse_constraint(
                ":- #count{X1, X2: sameProperty(X1, X2, shape), object(X1), object(X2), at(X1, 1), at(X2, 2)}<1."
            )
            .unwrap(),
            ConstraintInstance::AtLeastNPairs {
                regions: (r(1), r(2)),
                same: Attribute::Shape,
                filter: None,
                count: 1
            }
        );
    }

    #[test]
    fn region_out_of_range() {
        let err =
            parse_constraint(":- object(X), at(X, 5), hasProperty(X, size, large).").unwrap_err();
        assert_eq!(err, DslError::RegionOutOfRange { line: 1, region: 5 });
    }

    #[test]
    fn unknown_attribute_and_value() {
        assert!(matches!(
            parse_constraint(":- object(X), at(X, 1), hasProperty(X, colour, red).").unwrap_err(),
            DslError::UnknownAttribute { .. }
        ));
        assert!(matches!(
            parse_constraint(":- object(X), at(X, 1), hasProperty(X, color, cube).").unwrap_err(),
            DslError::UnknownValue { .. }
        ));
    }

    #[test]
    fn arity_mismatch() {
        assert!(matches!(
            parse_constraint(
                ":- object(X), at(X, 1), hasProperty(X, color, red), hasProperty(X, size, large)."
            )
            .unwrap_err(),
            DslError::TemplateMismatch { .. }
        ));
        assert!(matches!(
            parse_constraint(":- object(X), at(X, 1), at(X, 2), hasProperty(X, size, large).")
                .unwrap_err(),
            DslError::TemplateMismatch { .. }
        ));
    }

    #[test]
    fn rendering_examples() {
        assert_eq!(
            render_constraint_asp(&ConstraintInstance::Negation {
                region: r(0),
                value: Value::Cone
            }),
            ":- object(X), at(X, 0), hasProperty(X, shape, cone)."
        );
        assert_eq!(
            render_constraint_asp(&ConstraintInstance::ValueRestriction {
                region: r(2),
                value: Value::Medium
            }),
            ":- object(X), at(X, 2), not hasProperty(X, size, medium)."
        );
        let at_most = ConstraintInstance::AtMostNPairs {
            regions: (r(0), r(3)),
            same: Attribute::Color,
            filter: None,
            count: 0,
        };
        let text = render_constraint_asp(&at_most);
        assert!(text.ends_with("} >= 1."), "{text}");
        assert_eq!(parse_constraint(&text).unwrap(), at_most);
    }

    #[test]
    fn nl_examples() {
        assert_eq!(
            render_constraint_nl(&ConstraintInstance::Negation {
                region: r(1),
                value: Value::Rubber
            }),
            "There are no rubber material objects in region 1."
        );
        assert_eq!(
            render_constraint_nl(&ConstraintInstance::ValueRestriction {
                region: r(2),
                value: Value::Metal
            }),
            "All objects in region 2 have metal material."
        );
        assert_eq!(
            render_constraint_nl(&ConstraintInstance::Or {
                region: r(3),
                values: [Value::Metal, Value::Blue]
            }),
            "All objects in region 3 have either metal material or blue color."
        );
        assert_eq!(
            render_constraint_nl(&ConstraintInstance::AtLeastNPairs {
                regions: (r(0), r(2)),
                same: Attribute::Size,
                filter: Some(Value::Red),
                count: 1
            }),
            "There are at least 1 pair of color red objects with the same size in regions 0 and 2 together."
        );
        assert_eq!(
            render_constraint_nl(&ConstraintInstance::AtMostNPairs {
                regions: (r(0), r(3)),
                same: Attribute::Color,
                filter: None,
                count: 0
            }),
            "There are at most 0 pairs of objects with the same color in regions 0 and 3 together."
        );
    }

    #[test]
    fn generic_rules_are_absorbed() {
        let env = parse_environment(GENERIC_RULES).unwrap();
        assert!(env.constraints().is_empty());
        assert_eq!(env.object_count, None);
        assert_eq!(GENERIC_RULES.lines().count(), 43);
    }

    #[test]
    fn generic_fact_conflicts() {
        assert!(matches!(
            parse_environment("right_R(1, 0).").unwrap_err(),
            DslError::TemplateMismatch { .. }
        ));
        assert!(matches!(
            parse_environment("property(color, pink).").unwrap_err(),
            DslError::UnknownValue { .. }
        ));
        assert!(matches!(
            parse_environment("region(4).").unwrap_err(),
            DslError::RegionOutOfRange { region: 4, .. }
        ));
        assert!(matches!(
            parse_environment("foo(bar).").unwrap_err(),
            DslError::UnrecognizedRule { .. }
        ));
    }

    #[test]
    fn object_count_and_lines() {
        let env = parse_environment(
            "object(0..4).\n% note\n:- object(X), at(X, 0),\n   hasProperty(X, size, large).\n",
        )
        .unwrap();
        assert_eq!(env.object_count, Some(5));
        assert_eq!(env.source_lines(0), Some((3, 4)));
        assert!(matches!(
            parse_environment("object(0..4). object(0..2).").unwrap_err(),
            DslError::DuplicateObjectCount { .. }
        ));
    }

    #[test]
    fn capacity_variants() {
        let text = render_constraint_asp(&ConstraintInstance::RegionCapacity { max: 2 });
        assert_eq!(
            parse_constraint(&text).unwrap(),
            ConstraintInstance::RegionCapacity { max: 2 }
        );
        let env = parse_environment(&render_constraint_asp(
            &ConstraintInstance::RegionCapacity { max: 3 },
        ))
        .unwrap();
        assert!(env.constraints().is_empty());
    }
}
