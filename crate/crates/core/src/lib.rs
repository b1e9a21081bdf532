pub mod domain;
pub mod dsl;
pub mod forge;
pub mod harness;
pub mod oracle;
pub mod question_forge;
pub mod solver;
