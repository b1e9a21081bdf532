//! The fixed ontology: attributes and their values, the four scene regions
//! with their possibilistic spatial relations, objects, and scene graphs.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("objects {0} and {1} share a coordinate on the {2} axis")]
    DegeneratePosition(usize, usize, char),
    #[error("object {0} has no position")]
    MissingPosition(usize),
    #[error("region {0} out of range (expected 0..=3)")]
    RegionOutOfRange(i64),
    #[error("unknown value `{0}`")]
    UnknownValue(String),
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("relation lists are malformed: {0}")]
    MalformedRelations(String),
}

/// One of the four object attributes, in the fixed catalog order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attribute {
    Color,
    Shape,
    Size,
    Material,
}

impl Attribute {
    pub const ALL: [Attribute; 4] = [
        Attribute::Color,
        Attribute::Shape,
        Attribute::Size,
        Attribute::Material,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Attribute::Color => "color",
            Attribute::Shape => "shape",
            Attribute::Size => "size",
            Attribute::Material => "material",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn parse(name: &str) -> Result<Attribute, DomainError> {
        Attribute::ALL
            .into_iter()
            .find(|a| a.name() == name)
            .ok_or_else(|| DomainError::UnknownAttribute(name.to_string()))
    }

    /// Values of this attribute in catalog order.
    pub fn values(self) -> &'static [Value] {
        let start = CATALOG_OFFSETS[self.index()];
        let end = start + self.cardinality();
        &Value::ALL[start..end]
    }

    /// `|A|`: how many values the attribute can take.
    pub fn cardinality(self) -> usize {
        match self {
            Attribute::Color => 8,
            Attribute::Shape => 4,
            Attribute::Size => 3,
            Attribute::Material => 2,
        }
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const CATALOG_OFFSETS: [usize; 4] = [0, 8, 12, 15];

/// A catalog value. Value names are disjoint across attributes, so a value
/// determines its attribute.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Gray,
    Red,
    Blue,
    Green,
    Brown,
    Purple,
    Cyan,
    Yellow,
    Cube,
    Cylinder,
    Sphere,
    Cone,
    Small,
    Medium,
    Large,
    Rubber,
    Metal,
}

impl Value {
    pub const ALL: [Value; 17] = [
        Value::Gray,
        Value::Red,
        Value::Blue,
        Value::Green,
        Value::Brown,
        Value::Purple,
        Value::Cyan,
        Value::Yellow,
        Value::Cube,
        Value::Cylinder,
        Value::Sphere,
        Value::Cone,
        Value::Small,
        Value::Medium,
        Value::Large,
        Value::Rubber,
        Value::Metal,
    ];

    pub fn attribute(self) -> Attribute {
        let i = self as usize;
        if i < 8 {
            Attribute::Color
        } else if i < 12 {
            Attribute::Shape
        } else if i < 15 {
            Attribute::Size
        } else {
            Attribute::Material
        }
    }

    /// Position of the value inside its attribute's value list.
    pub fn ordinal(self) -> usize {
        self as usize - CATALOG_OFFSETS[self.attribute().index()]
    }

    pub fn name(self) -> &'static str {
        match self {
            Value::Gray => "gray",
            Value::Red => "red",
            Value::Blue => "blue",
            Value::Green => "green",
            Value::Brown => "brown",
            Value::Purple => "purple",
            Value::Cyan => "cyan",
            Value::Yellow => "yellow",
            Value::Cube => "cube",
            Value::Cylinder => "cylinder",
            Value::Sphere => "sphere",
            Value::Cone => "cone",
            Value::Small => "small",
            Value::Medium => "medium",
            Value::Large => "large",
            Value::Rubber => "rubber",
            Value::Metal => "metal",
        }
    }

    pub fn parse(name: &str) -> Result<Value, DomainError> {
        Value::ALL
            .into_iter()
            .find(|v| v.name() == name)
            .ok_or_else(|| DomainError::UnknownValue(name.to_string()))
    }

    /// Case-insensitive lookup, for labels coming from model output.
    pub fn parse_label(label: &str) -> Result<Value, DomainError> {
        Value::parse(&label.trim().to_ascii_lowercase())
    }

    /// Parses `name` and requires it to belong to `attr`.
    pub fn parse_for(attr: Attribute, name: &str) -> Result<Value, DomainError> {
        let v = Value::parse(name)?;
        if v.attribute() == attr {
            Ok(v)
        } else {
            Err(DomainError::UnknownValue(format!("{attr} {name}")))
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Value::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// One of the four scene quadrants.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region(u8);

impl Region {
    pub const ALL: [Region; 4] = [Region(0), Region(1), Region(2), Region(3)];

    pub fn new(id: i64) -> Result<Region, DomainError> {
        if (0..4).contains(&id) {
            Ok(Region(id as u8))
        } else {
            Err(DomainError::RegionOutOfRange(id))
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Open box `(x_lo, x_hi, y_lo, y_hi)` of the quadrant. Region 0 is
    /// back-left, 1 back-right, 2 front-left, 3 front-right.
    pub fn quadrant(self) -> (f64, f64, f64, f64) {
        const NEG: (f64, f64) = (-QUADRANT_EXTENT, -QUADRANT_MARGIN);
        const POS: (f64, f64) = (QUADRANT_MARGIN, QUADRANT_EXTENT);
        let (x, y) = match self.0 {
            0 => (NEG, NEG),
            1 => (POS, NEG),
            2 => (NEG, POS),
            _ => (POS, POS),
        };
        (x.0, x.1, y.0, y.1)
    }

    /// The region whose quadrant contains `p`, if `p` lies off both axes.
    pub fn containing(p: Position) -> Option<Region> {
        if p.x == 0.0 || p.y == 0.0 {
            return None;
        }
        let right = p.x > 0.0;
        let front = p.y > 0.0;
        Some(Region(u8::from(right) + 2 * u8::from(front)))
    }
}

pub const QUADRANT_EXTENT: f64 = 3.0;
pub const QUADRANT_MARGIN: f64 = 0.3;

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.0)
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Region::new(v).map_err(serde::de::Error::custom)
    }
}

/// A set of regions as a 4-bit mask.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RegionSet(u8);

impl RegionSet {
    pub const EMPTY: RegionSet = RegionSet(0);
    pub const FULL: RegionSet = RegionSet(0b1111);

    pub fn of(regions: &[Region]) -> RegionSet {
        regions.iter().fold(RegionSet::EMPTY, |s, r| s.with(*r))
    }

    pub fn with(self, r: Region) -> RegionSet {
        RegionSet(self.0 | (1 << r.0))
    }

    pub fn contains(self, r: Region) -> bool {
        self.0 & (1 << r.0) != 0
    }

    pub fn intersect(self, other: RegionSet) -> RegionSet {
        RegionSet(self.0 & other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Region> {
        Region::ALL.into_iter().filter(move |r| self.contains(*r))
    }
}

/// Spatial relation between two objects.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Left,
    Right,
    Front,
    Behind,
}

impl Relation {
    pub const ALL: [Relation; 4] = [
        Relation::Left,
        Relation::Right,
        Relation::Front,
        Relation::Behind,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::Left => "left",
            Relation::Right => "right",
            Relation::Front => "front",
            Relation::Behind => "behind",
        }
    }

    pub fn parse(name: &str) -> Option<Relation> {
        Relation::ALL.into_iter().find(|r| r.name() == name)
    }

    pub fn inverse(self) -> Relation {
        match self {
            Relation::Left => Relation::Right,
            Relation::Right => Relation::Left,
            Relation::Front => Relation::Behind,
            Relation::Behind => Relation::Front,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// right_R(R1, R2): an object in R2 may stand right of an object in R1.
const RIGHT_R: [[bool; 4]; 4] = [
    [true, true, true, true],
    [false, true, false, true],
    [true, true, true, true],
    [false, true, false, true],
];

// front_R(R1, R2): an object in R2 may stand in front of an object in R1.
const FRONT_R: [[bool; 4]; 4] = [
    [true, true, true, true],
    [true, true, true, true],
    [false, false, true, true],
    [false, false, true, true],
];

/// Whether an object in `target` can stand in `rel` to an object in `source`.
pub fn region_pair_allowed(rel: Relation, source: Region, target: Region) -> bool {
    let (s, t) = (source.index(), target.index());
    match rel {
        Relation::Right => RIGHT_R[s][t],
        Relation::Left => RIGHT_R[t][s],
        Relation::Front => FRONT_R[s][t],
        Relation::Behind => FRONT_R[t][s],
    }
}

/// All regions `R` such that an object in `R` can stand in `rel` to an
/// object located in `source`.
pub fn region_relation(rel: Relation, source: Region) -> RegionSet {
    Region::ALL
        .into_iter()
        .filter(|t| region_pair_allowed(rel, source, *t))
        .fold(RegionSet::EMPTY, RegionSet::with)
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }

    pub fn distance(self, other: Position) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// The four properties of an object, without placement.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    pub color: Value,
    pub shape: Value,
    pub size: Value,
    pub material: Value,
}

impl Profile {
    pub const COUNT: usize = 8 * 4 * 3 * 2;

    pub fn get(&self, attr: Attribute) -> Value {
        match attr {
            Attribute::Color => self.color,
            Attribute::Shape => self.shape,
            Attribute::Size => self.size,
            Attribute::Material => self.material,
        }
    }

    /// Dense index in `0..Profile::COUNT`.
    pub fn index(&self) -> usize {
        ((self.color.ordinal() * 4 + self.shape.ordinal()) * 3 + self.size.ordinal()) * 2
            + self.material.ordinal()
    }

    pub fn from_index(i: usize) -> Profile {
        debug_assert!(i < Profile::COUNT);
        let material = i % 2;
        let size = (i / 2) % 3;
        let shape = (i / 6) % 4;
        let color = i / 24;
        Profile {
            color: Attribute::Color.values()[color],
            shape: Attribute::Shape.values()[shape],
            size: Attribute::Size.values()[size],
            material: Attribute::Material.values()[material],
        }
    }

    pub fn all() -> impl Iterator<Item = Profile> {
        (0..Profile::COUNT).map(Profile::from_index)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObjectSpec {
    pub id: usize,
    pub color: Value,
    pub shape: Value,
    pub size: Value,
    pub material: Value,
    pub region: Region,
    pub position: Option<Position>,
}

impl ObjectSpec {
    pub fn new(id: usize, profile: Profile, region: Region) -> Self {
        ObjectSpec {
            id,
            color: profile.color,
            shape: profile.shape,
            size: profile.size,
            material: profile.material,
            region,
            position: None,
        }
    }

    pub fn with_position(mut self, p: Position) -> Self {
        self.position = Some(p);
        self
    }

    pub fn profile(&self) -> Profile {
        Profile {
            color: self.color,
            shape: self.shape,
            size: self.size,
            material: self.material,
        }
    }

    pub fn get(&self, attr: Attribute) -> Value {
        self.profile().get(attr)
    }

    /// "small red rubber sphere"
    pub fn describe(&self) -> String {
        format!(
            "{} {} {} {}",
            self.size, self.color, self.material, self.shape
        )
    }
}

/// A hidden-object completion: four properties plus a region.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HiddenCandidate {
    pub region: Region,
    pub profile: Profile,
}

impl HiddenCandidate {
    pub const COUNT: usize = Profile::COUNT * 4;

    pub fn get(&self, attr: Attribute) -> Value {
        self.profile.get(attr)
    }

    /// All 768 candidates, region-major.
    pub fn all() -> impl Iterator<Item = HiddenCandidate> {
        Region::ALL.into_iter().flat_map(|region| {
            Profile::all().map(move |profile| HiddenCandidate { region, profile })
        })
    }

    pub fn to_object(self, id: usize) -> ObjectSpec {
        ObjectSpec::new(id, self.profile, self.region)
    }
}

/// Per-object relation lists: `lists(rel)[i]` holds the objects standing
/// in `rel` to object `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relations {
    pub left: Vec<Vec<usize>>,
    pub front: Vec<Vec<usize>>,
    pub behind: Vec<Vec<usize>>,
    pub right: Vec<Vec<usize>>,
}

impl Relations {
    pub fn empty(n: usize) -> Self {
        Relations {
            left: vec![Vec::new(); n],
            front: vec![Vec::new(); n],
            behind: vec![Vec::new(); n],
            right: vec![Vec::new(); n],
        }
    }

    pub fn lists(&self, rel: Relation) -> &Vec<Vec<usize>> {
        match rel {
            Relation::Left => &self.left,
            Relation::Right => &self.right,
            Relation::Front => &self.front,
            Relation::Behind => &self.behind,
        }
    }

    fn lists_mut(&mut self, rel: Relation) -> &mut Vec<Vec<usize>> {
        match rel {
            Relation::Left => &mut self.left,
            Relation::Right => &mut self.right,
            Relation::Front => &mut self.front,
            Relation::Behind => &mut self.behind,
        }
    }

    /// Whether object `j` stands in `rel` to object `i`.
    pub fn holds(&self, rel: Relation, i: usize, j: usize) -> bool {
        self.lists(rel).get(i).is_some_and(|l| l.contains(&j))
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    /// Keeps only the listed objects, re-indexing them densely in the
    /// given order.
    pub fn restrict(&self, keep: &[usize]) -> Relations {
        let mut out = Relations::empty(keep.len());
        for rel in Relation::ALL {
            let src = self.lists(rel);
            let dst = out.lists_mut(rel);
            for (new_i, &old_i) in keep.iter().enumerate() {
                dst[new_i] = src[old_i]
                    .iter()
                    .filter_map(|old_j| keep.iter().position(|k| k == old_j))
                    .collect();
                dst[new_i].sort_unstable();
            }
        }
        out
    }

    /// Checks shape, index bounds, irreflexivity and inverse closure.
    pub fn validate(&self, n: usize) -> Result<(), DomainError> {
        for rel in Relation::ALL {
            let lists = self.lists(rel);
            if lists.len() != n {
                return Err(DomainError::MalformedRelations(format!(
                    "`{rel}` has {} lists for {n} objects",
                    lists.len()
                )));
            }
            for (i, l) in lists.iter().enumerate() {
                for &j in l {
                    if j >= n || j == i {
                        return Err(DomainError::MalformedRelations(format!(
                            "`{rel}`[{i}] refers to {j}"
                        )));
                    }
                    if !self.holds(rel.inverse(), j, i) {
                        return Err(DomainError::MalformedRelations(format!(
                            "{j} in {rel}[{i}] but {i} not in {}[{j}]",
                            rel.inverse()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Derives left/right/front/behind lists from planar positions:
/// `j ∈ right[i]` iff `x(j) > x(i)` and `j ∈ front[i]` iff `y(j) > y(i)`.
pub fn relations_from_positions(objects: &[ObjectSpec]) -> Result<Relations, DomainError> {
    let positions = objects
        .iter()
        .enumerate()
        .map(|(i, o)| o.position.ok_or(DomainError::MissingPosition(i)))
        .collect::<Result<Vec<_>, _>>()?;
    let n = positions.len();
    let mut rel = Relations::empty(n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = (positions[i], positions[j]);
            if a.x == b.x {
                return Err(DomainError::DegeneratePosition(i.min(j), i.max(j), 'x'));
            }
            if a.y == b.y {
                return Err(DomainError::DegeneratePosition(i.min(j), i.max(j), 'y'));
            }
            if b.x > a.x {
                rel.right[i].push(j);
            } else {
                rel.left[i].push(j);
            }
            if b.y > a.y {
                rel.front[i].push(j);
            } else {
                rel.behind[i].push(j);
            }
        }
    }
    Ok(rel)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Completeness {
    Complete,
    Partial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SceneGraph {
    pub objects: Vec<ObjectSpec>,
    pub relations: Relations,
    pub completeness: Completeness,
    /// Id the removed object had in the complete scene.
    pub hidden_ref: Option<usize>,
}

impl SceneGraph {
    /// A complete scene whose relation lists are derived from positions.
    pub fn positioned(objects: Vec<ObjectSpec>) -> Result<SceneGraph, DomainError> {
        let relations = relations_from_positions(&objects)?;
        Ok(SceneGraph {
            objects,
            relations,
            completeness: Completeness::Complete,
            hidden_ref: None,
        })
    }

    pub fn from_parts(
        objects: Vec<ObjectSpec>,
        relations: Relations,
        completeness: Completeness,
        hidden_ref: Option<usize>,
    ) -> Result<SceneGraph, DomainError> {
        relations.validate(objects.len())?;
        Ok(SceneGraph {
            objects,
            relations,
            completeness,
            hidden_ref,
        })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn is_positioned(&self) -> bool {
        !self.objects.is_empty() && self.objects.iter().all(|o| o.position.is_some())
    }

    pub fn region_counts(&self) -> [usize; 4] {
        let mut counts = [0; 4];
        for o in &self.objects {
            counts[o.region.index()] += 1;
        }
        counts
    }

    /// Structural invariants: distinct profiles, region capacity, relation
    /// inverse closure and antisymmetry, positions inside their quadrants,
    /// relation lists agreeing with positions, and quadrant consistency.
    /// Returns one message per violation.
    pub fn structural_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.objects.len();
        for i in 0..n {
            for j in i + 1..n {
                if self.objects[i].profile() == self.objects[j].profile() {
                    out.push(format!("objects {i} and {j} share all four properties"));
                }
            }
        }
        for (r, c) in self.region_counts().iter().enumerate() {
            if *c > 3 {
                out.push(format!("region {r} holds {c} objects"));
            }
        }
        if let Err(e) = self.relations.validate(n) {
            out.push(e.to_string());
            return out;
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let lr = self.relations.holds(Relation::Left, i, j) as u8
                    + self.relations.holds(Relation::Right, i, j) as u8;
                let fb = self.relations.holds(Relation::Front, i, j) as u8
                    + self.relations.holds(Relation::Behind, i, j) as u8;
                if lr != 1 || fb != 1 {
                    out.push(format!(
                        "pair ({i}, {j}) is not related exactly once per axis"
                    ));
                }
                for rel in Relation::ALL {
                    if self.relations.holds(rel, i, j)
                        && !region_pair_allowed(rel, self.objects[i].region, self.objects[j].region)
                    {
                        out.push(format!(
                            "{j} is {rel} of {i} but regions {} -> {} forbid it",
                            self.objects[i].region, self.objects[j].region
                        ));
                    }
                }
            }
        }
        if self.is_positioned() {
            for (i, o) in self.objects.iter().enumerate() {
                let p = o.position.expect("positioned");
                if Region::containing(p) != Some(o.region) {
                    out.push(format!("object {i} lies outside region {}", o.region));
                }
            }
            match relations_from_positions(&self.objects) {
                Ok(derived) if derived != self.relations => {
                    out.push("relation lists disagree with positions".to_string())
                }
                Ok(_) => {}
                Err(e) => out.push(e.to_string()),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regions(s: RegionSet) -> Vec<usize> {
        s.iter().map(Region::index).collect()
    }

    #[test]
    fn catalog_shape() {
        assert_eq!(Attribute::Color.values().len(), 8);
        assert_eq!(Attribute::Shape.values().len(), 4);
        assert_eq!(Attribute::Size.values().len(), 3);
        assert_eq!(Attribute::Material.values().len(), 2);
        for a in Attribute::ALL {
            assert_eq!(a.values().len(), a.cardinality());
            for v in a.values() {
                assert_eq!(v.attribute(), a);
            }
        }
        assert_eq!(Attribute::Color.values()[6], Value::Cyan);
    }

    #[test]
    fn region_relation_examples() {
        assert_eq!(
            regions(region_relation(Relation::Right, Region(1))),
            vec![1, 3]
        );
        assert_eq!(
            regions(region_relation(Relation::Front, Region(2))),
            vec![2, 3]
        );
        assert_eq!(
            regions(region_relation(Relation::Behind, Region(0))),
            vec![0, 1]
        );
    }

    #[test]
    fn region_relations_reflexive_and_inverse() {
        for rel in Relation::ALL {
            for a in Region::ALL {
                assert!(region_pair_allowed(rel, a, a));
                for b in Region::ALL {
                    assert_eq!(
                        region_pair_allowed(rel, a, b),
                        region_pair_allowed(rel.inverse(), b, a)
                    );
                }
            }
        }
    }

    #[test]
    fn profile_index_roundtrip() {
        for i in 0..Profile::COUNT {
            assert_eq!(Profile::from_index(i).index(), i);
        }
        assert_eq!(HiddenCandidate::all().count(), 768);
    }

    #[test]
    fn single_object_has_no_relations() {
        let o = ObjectSpec::new(0, Profile::from_index(0), Region(0))
            .with_position(Position::new(-1.0, -1.0));
        let rel = relations_from_positions(&[o]).unwrap();
        for r in Relation::ALL {
            assert_eq!(rel.lists(r), &vec![Vec::<usize>::new()]);
        }
    }

    #[test]
    fn two_objects_unrolled() {
        let a = ObjectSpec::new(0, Profile::from_index(0), Region(0))
            .with_position(Position::new(-2.0, -2.0));
        let b = ObjectSpec::new(1, Profile::from_index(1), Region(3))
            .with_position(Position::new(1.0, 1.0));
        let rel = relations_from_positions(&[a, b]).unwrap();
        assert_eq!(rel.right, vec![vec![1], vec![]]);
        assert_eq!(rel.left, vec![vec![], vec![0]]);
        assert_eq!(rel.front, vec![vec![1], vec![]]);
        assert_eq!(rel.behind, vec![vec![], vec![0]]);
    }

    #[test]
    fn coincident_coordinate_is_degenerate() {
        let a = ObjectSpec::new(0, Profile::from_index(0), Region(0))
            .with_position(Position::new(-1.0, -2.0));
        let b = ObjectSpec::new(1, Profile::from_index(1), Region(0))
            .with_position(Position::new(-1.0, -1.0));
        assert!(matches!(
            relations_from_positions(&[a, b]),
            Err(DomainError::DegeneratePosition(0, 1, 'x'))
        ));
    }

    #[test]
    fn quadrant_layout() {
        assert_eq!(
            Region::containing(Position::new(-1.0, -1.0)),
            Some(Region(0))
        );
        assert_eq!(
            Region::containing(Position::new(1.0, -1.0)),
            Some(Region(1))
        );
        assert_eq!(
            Region::containing(Position::new(-1.0, 1.0)),
            Some(Region(2))
        );
        assert_eq!(Region::containing(Position::new(1.0, 1.0)), Some(Region(3)));
        for r in Region::ALL {
            let (x0, x1, y0, y1) = r.quadrant();
            let mid = Position::new((x0 + x1) / 2.0, (y0 + y1) / 2.0);
            assert_eq!(Region::containing(mid), Some(r));
        }
    }

    #[test]
    fn region_out_of_range() {
        assert!(Region::new(4).is_err());
        assert!(Region::new(-1).is_err());
    }
}
