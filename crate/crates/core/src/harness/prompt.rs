//! Text prompts for language models.

use super::dataset::{DatasetInstance, SceneRecord};
use crate::dsl::GENERIC_RULES_NL;
use crate::oracle::AnswerSet;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PromptStyle {
    /// Scene, constraints and question; the model answers directly.
    Standalone,
    /// Question to logical-form translation.
    Parser,
}

impl PromptStyle {
    pub fn name(self) -> &'static str {
        match self {
            PromptStyle::Standalone => "standalone",
            PromptStyle::Parser => "parser",
        }
    }

    pub fn parse(s: &str) -> Option<PromptStyle> {
        match s {
            "standalone" => Some(PromptStyle::Standalone),
            "parser" => Some(PromptStyle::Parser),
            _ => None,
        }
    }
}

const STANDALONE_TASK: &str = "Task description: Answer a question about an object hidden from a scene. \
The visible part of the scene is given as a JSON scene graph. Under \"objects\" each entry lists an \
object's material, color, size, region and shape. Under \"relationships\" the lists \"left\", \"right\", \
\"front\" and \"behind\" give, for the object at each index, the indices of the objects standing in that \
relation to it; relationships[\"front\"][0] lists the objects in front of object 0. Give every value the \
hidden object's property could take without breaking a constraint.";

const PARSER_TASK: &str =
    "Task description: Translate each English question into an ASP rule over the scene predicates.";

/// `###{Small, Medium}###`
pub fn answer_envelope(answer: &AnswerSet) -> String {
    let labels: Vec<String> = answer.values.iter().map(|v| capitalize(v.name())).collect();
    format!("###{{{}}}###", labels.join(", "))
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// The prompt body up to and including `Answer:`.
pub fn prompt_body(inst: &DatasetInstance, style: PromptStyle) -> String {
    match style {
        PromptStyle::Standalone => {
            let scene = serde_json::to_string_pretty(&SceneRecord::observed(&inst.partial))
                .expect("scene serializes");
            let mut out = String::new();
            out.push_str(STANDALONE_TASK);
            out.push_str("\n\nScene Observed: The following is the scene graph:\n");
            out.push_str(&scene);
            out.push_str(
                "\n\nConstraints: Besides the visible objects the scene holds one hidden object. \
                 The scene satisfies the following constraints.\n\n",
            );
            for s in GENERIC_RULES_NL
                .iter()
                .map(|s| s.to_string())
                .chain(inst.environment.nl_sentences())
            {
                out.push_str(&s);
                out.push_str("\n\n");
            }
            out.push_str("Question: Answer the following question about the hidden object. ");
            out.push_str("The answer must satisfy the constraints. ");
            out.push_str(&inst.question.text);
            out.push_str("\n\nAnswer:");
            out
        }
        PromptStyle::Parser => format!("{PARSER_TASK}\n\nQuestion: {}\n\nASP:", inst.question.text),
    }
}

/// A complete prompt with its gold completion.
pub fn emit_prompt(inst: &DatasetInstance, style: PromptStyle) -> String {
    let body = prompt_body(inst, style);
    match style {
        PromptStyle::Standalone => format!("{body} {}\n", answer_envelope(&inst.answer)),
        PromptStyle::Parser => format!("{body}\n###\n{}\n###\n", inst.question.logical_form),
    }
}
