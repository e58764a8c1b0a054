//! Text, JSON, DOT and source-code output.

mod dot;
mod json;
mod source;
mod text;

use std::fmt;
use std::str::FromStr;

pub use dot::{explanations_to_dot, tree_to_dot};
pub use json::{answer_set_to_json, explanation_to_json, explanations_to_json, tree_to_json};
pub use source::{program_to_source, rule_to_source};
pub use text::{answer_set_to_text, explanation_to_text, explanations_to_text, tree_to_text};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Dot,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            other => Err(format!(
                "unknown format `{other}` (expected text, json or dot)"
            )),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Dot => "dot",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderOptions {
    pub format: Format,
    pub show_test_leaves: bool,
    /// Wrap explanation lines longer than this at their `-` separators.
    pub max_width: Option<usize>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            format: Format::Text,
            show_test_leaves: true,
            max_width: None,
        }
    }
}
