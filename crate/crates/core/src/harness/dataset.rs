//! On-disk formats: scene graphs in the dictionary layout language models
//! are shown, and whole dataset instances.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};

use super::HarnessError;
use crate::domain::{
    Attribute, Completeness, ObjectSpec, Position, Region, Relations, SceneGraph, Value,
};
use crate::dsl::{parse_environment, parse_question, Environment, QuestionForm};
use crate::oracle::AnswerSet;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectRecord {
    pub material: Value,
    pub color: Value,
    pub size: Value,
    #[serde(serialize_with = "region_str", deserialize_with = "region_any")]
    pub region: Region,
    pub shape: Value,
}

fn region_str<S: serde::Serializer>(r: &Region, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn region_any<'de, D: Deserializer<'de>>(d: D) -> Result<Region, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(i64),
        Text(String),
    }
    let n = match Raw::deserialize(d)? {
        Raw::Num(n) => n,
        Raw::Text(s) => s
            .trim()
            .parse()
            .map_err(|_| serde::de::Error::custom(format!("bad region `{s}`")))?,
    };
    Region::new(n).map_err(serde::de::Error::custom)
}

impl ObjectRecord {
    pub fn from_spec(o: &ObjectSpec) -> Self {
        ObjectRecord {
            material: o.material,
            color: o.color,
            size: o.size,
            region: o.region,
            shape: o.shape,
        }
    }

    fn check(&self) -> Result<(), HarnessError> {
        for (attr, v) in [
            (Attribute::Material, self.material),
            (Attribute::Color, self.color),
            (Attribute::Size, self.size),
            (Attribute::Shape, self.shape),
        ] {
            if v.attribute() != attr {
                return Err(HarnessError::Schema(format!("`{v}` is not a {attr}")));
            }
        }
        Ok(())
    }

    pub fn to_spec(&self, id: usize, position: Option<Position>) -> ObjectSpec {
        ObjectSpec {
            id,
            color: self.color,
            shape: self.shape,
            size: self.size,
            material: self.material,
            region: self.region,
            position,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneMeta {
    pub completeness: Completeness,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<[f64; 2]>>,
    /// Index of the removed object in the complete scene.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneRecord {
    pub objects: Vec<ObjectRecord>,
    pub relationships: Relations,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<SceneMeta>,
}

impl SceneRecord {
    pub fn from_scene(scene: &SceneGraph) -> Self {
        let positions = scene.is_positioned().then(|| {
            scene
                .objects
                .iter()
                .map(|o| {
                    let p = o.position.expect("positioned");
                    [p.x, p.y]
                })
                .collect()
        });
        SceneRecord {
            objects: scene.objects.iter().map(ObjectRecord::from_spec).collect(),
            relationships: scene.relations.clone(),
            meta: Some(SceneMeta {
                completeness: scene.completeness,
                positions,
                hidden: scene.hidden_ref,
            }),
        }
    }

    /// Without the meta block: only what an observer is shown.
    pub fn observed(scene: &SceneGraph) -> Self {
        SceneRecord {
            meta: None,
            ..SceneRecord::from_scene(scene)
        }
    }

    pub fn to_scene(&self) -> Result<SceneGraph, HarnessError> {
        let meta = self.meta.clone().unwrap_or(SceneMeta {
            completeness: Completeness::Complete,
            positions: None,
            hidden: None,
        });
        if let Some(ps) = &meta.positions {
            if ps.len() != self.objects.len() {
                return Err(HarnessError::Schema(format!(
                    "{} positions for {} objects",
                    ps.len(),
                    self.objects.len()
                )));
            }
        }
        let mut objects = Vec::with_capacity(self.objects.len());
        for (i, o) in self.objects.iter().enumerate() {
            o.check()?;
            let p = meta
                .positions
                .as_ref()
                .map(|ps| Position::new(ps[i][0], ps[i][1]));
            objects.push(o.to_spec(i, p));
        }
        Ok(SceneGraph::from_parts(
            objects,
            self.relationships.clone(),
            meta.completeness,
            meta.hidden,
        )?)
    }
}

pub fn scene_to_json(scene: &SceneGraph) -> String {
    serde_json::to_string_pretty(&SceneRecord::from_scene(scene)).expect("scene serializes")
}

/// Reads a scene in JSON, or in the single-quoted dictionary notation
/// scene graphs are often printed in.
pub fn parse_scene(text: &str) -> Result<SceneGraph, HarnessError> {
    let record: SceneRecord = match serde_json::from_str(text) {
        Ok(r) => r,
        Err(e) if !text.contains('"') && text.contains('\'') => {
            serde_json::from_str(&text.replace('\'', "\"")).map_err(|_| HarnessError::Json(e))?
        }
        Err(e) => return Err(HarnessError::Json(e)),
    };
    record.to_scene()
}

/// Question with its provenance and answer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuestionRecord {
    pub id: String,
    pub environment_id: String,
    pub scene_id: String,
    pub template: String,
    pub text: String,
    pub logical_form: String,
    pub query_attribute: Attribute,
    pub answer: Vec<Value>,
    pub ground_truth: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HiddenRecord {
    pub index: usize,
    pub object: ObjectRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    schema_version: u32,
    id: String,
    environment_id: String,
    object_count: usize,
    environment: String,
    complete: SceneRecord,
    partial: SceneRecord,
    hidden: HiddenRecord,
    question: QuestionRecord,
}

/// One question with everything needed to re-derive its answer.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetInstance {
    pub id: String,
    /// Carries the object count and source line numbers.
    pub environment: Environment,
    pub complete: SceneGraph,
    pub partial: SceneGraph,
    pub hidden: ObjectSpec,
    pub question: QuestionRecord,
    pub form: QuestionForm,
    pub answer: AnswerSet,
}

impl DatasetInstance {
    pub fn hidden_index(&self) -> usize {
        self.partial.hidden_ref.unwrap_or(self.hidden.id)
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            schema_version: SCHEMA_VERSION,
            id: self.id.clone(),
            environment_id: self.environment.id.clone(),
            object_count: self.complete.len(),
            environment: self.environment.render_program(),
            complete: SceneRecord::from_scene(&self.complete),
            partial: SceneRecord::from_scene(&self.partial),
            hidden: HiddenRecord {
                index: self.hidden_index(),
                object: ObjectRecord::from_spec(&self.hidden),
                position: self.hidden.position.map(|p| [p.x, p.y]),
            },
            question: self.question.clone(),
        };
        serde_json::to_string_pretty(&file).expect("instance serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<DatasetInstance, HarnessError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("schema_version").and_then(|v| v.as_u64()) {
            Some(v) if v == SCHEMA_VERSION as u64 => {}
            Some(v) => {
                return Err(HarnessError::Schema(format!(
                    "schema version {v}, expected {SCHEMA_VERSION}"
                )))
            }
            None => return Err(HarnessError::Schema("missing schema_version".into())),
        }
        let file: InstanceFile = serde_json::from_value(value)?;
        let environment =
            parse_environment(&file.environment)?.with_id(file.environment_id.clone());
        if environment.object_count != Some(file.object_count) {
            return Err(HarnessError::Schema(
                "object count disagrees with environment".into(),
            ));
        }
        let complete = file.complete.to_scene()?;
        let partial = file.partial.to_scene()?;
        if complete.len() != file.object_count || partial.len() + 1 != file.object_count {
            return Err(HarnessError::Schema(
                "scene sizes disagree with object count".into(),
            ));
        }
        file.hidden.object.check()?;
        let hidden = file.hidden.object.to_spec(
            file.hidden.index,
            file.hidden.position.map(|p| Position::new(p[0], p[1])),
        );
        let form = parse_question(&file.question.logical_form)?;
        if form.query_attribute != file.question.query_attribute {
            return Err(HarnessError::Schema(
                "query attribute disagrees with logical form".into(),
            ));
        }
        let answer = AnswerSet::new(form.query_attribute, file.question.answer.iter().copied());
        Ok(DatasetInstance {
            id: file.id,
            environment,
            complete,
            partial,
            hidden,
            question: file.question,
            form,
            answer,
        })
    }
}

pub fn write_instance(path: &Path, inst: &DatasetInstance) -> Result<(), HarnessError> {
    fs::write(path, inst.to_json())?;
    Ok(())
}

pub fn read_instance(path: &Path) -> Result<DatasetInstance, HarnessError> {
    DatasetInstance::from_json(&fs::read_to_string(path)?)
}
