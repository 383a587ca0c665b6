//! Result documents: a header line followed by typed lines, one JSON object
//! per line, keys in a fixed order.

use serde::Serialize;

pub const RESULT_FORMAT: &str = "pne-result";

#[derive(Debug, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ResultLine {
    Header {
        format: &'static str,
        version: u32,
        tool: String,
        command: &'static str,
        input_sha256: String,
    },
    Summary {
        existence: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        count: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        listed: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        complete: Option<bool>,
    },
    /// Counting marginal of a significant clique, members numbered from 1.
    Clique {
        members: Vec<usize>,
        table: Vec<String>,
    },
    Potential {
        semiring: &'static str,
        members: Vec<usize>,
        table: Vec<String>,
    },
    Equilibrium {
        profile: Vec<String>,
    },
    Map {
        epsilon: f64,
        /// `None` only if every profile has zero weight, which cannot happen.
        exponent: Option<u64>,
        value: f64,
        equilibrium: bool,
        profile: Vec<String>,
    },
    Chain {
        seed: u64,
        steps: u64,
        best_unsatisfied: usize,
        found_equilibrium: bool,
        pne_hit_step: Option<u64>,
        proposed: u64,
        accepted: u64,
        acceptance_rate: f64,
        level_visits: Vec<u64>,
        best_profile: Vec<String>,
        final_profile: Vec<String>,
    },
    Best {
        seed: u64,
        best_unsatisfied: usize,
        found_equilibrium: bool,
        profile: Vec<String>,
    },
    Stats {
        source: &'static str,
        width: usize,
        nodes: usize,
        messages: usize,
        notices: Vec<String>,
    },
    Timings {
        /// `(stage, milliseconds)` pairs.
        stages: Vec<(String, f64)>,
    },
    Validation {
        subject: &'static str,
        valid: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        players: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        hypergraph_acyclic: Option<bool>,
        #[serde(skip_serializing_if = "Option::is_none")]
        width: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        lifted_width: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        width_bound: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        violation: Option<Violation>,
    },
}

#[derive(Debug, Serialize)]
pub struct Violation {
    pub condition: String,
    pub detail: String,
}

/// Lines rendered into one buffer so output is written in a single call.
#[derive(Debug, Default)]
pub struct Document {
    text: String,
}

impl Document {
    pub fn push(&mut self, line: &ResultLine) {
        self.text.push_str(&serde_json::to_string(line).expect("result lines serialize"));
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}
