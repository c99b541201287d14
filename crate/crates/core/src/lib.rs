//! Building blocks for a Chinese gender-bias processing pipeline: corpus
//! handling with class-rebalanced expert datasets, prompt rendering, chat
//! model clients (HTTP and deterministic mock) with a persistent response
//! cache, six-expert majority voting, and natively implemented text
//! generation metrics (BLEU, METEOR, ROUGE-L) plus classification reports.

pub mod backend;
pub mod corpus;
pub mod digest;
pub mod ensemble;
pub mod metrics;
pub mod prompting;

use serde::{Deserialize, Serialize};

/// The three pipeline subtasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    /// Boolean judgment: does the sentence contain gender bias?
    Detect,
    /// Multi-hot bias-type assignment over the AC / DI / ANB categories.
    Classify,
    /// Rewrite a biased sentence so the bias is removed.
    Mitigate,
}

impl Task {
    pub const ALL: [Task; 3] = [Task::Detect, Task::Classify, Task::Mitigate];

    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Detect => "detect",
            Task::Classify => "classify",
            Task::Mitigate => "mitigate",
        }
    }
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "detect" | "task1" | "1" => Ok(Task::Detect),
            "classify" | "task2" | "2" => Ok(Task::Classify),
            "mitigate" | "task3" | "3" => Ok(Task::Mitigate),
            other => Err(format!("unknown task {other:?}")),
        }
    }
}
