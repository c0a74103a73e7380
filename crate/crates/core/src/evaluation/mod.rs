//! Translation evaluation: BLEU, paired bootstrap, contrastive pronoun accuracy.

pub mod bleu;
pub mod bootstrap;
pub mod contrastive;

pub use bleu::{bleu, segment_stats, tokenize_simple, tokenize_whitespace, BleuReport, BleuStats};
pub use bootstrap::{paired_bootstrap, BootstrapResult};
pub use contrastive::{
    accuracy_by_location, contrastive_score, read_instances, read_scores, Accuracy,
    ContrastiveInstance, ContrastiveReport, LocationReport, ScoreTable,
};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("segment counts differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("{n} resamples requested, at least {min} required")]
    TooFewResamples { n: usize, min: usize },
    #[error("instances line {line}: {reason}")]
    Instance { line: usize, reason: String },
    #[error("scores line {line}: {reason}")]
    Score { line: usize, reason: String },
    #[error("missing scores for instance(s): {}", .0.join(", "))]
    MissingScores(Vec<String>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl PartialEq for EvalError {
    fn eq(&self, other: &Self) -> bool {
        self.to_string() == other.to_string()
    }
}
