//! Contrastive pronoun accuracy from externally produced candidate scores.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::EvalError;

pub const MAX_CONTEXT: usize = 5;
pub const PRONOUN_CLASSES: [&str; 3] = ["es", "er", "sie"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextSentence {
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContrastiveInstance {
    pub instance_id: String,
    #[serde(default)]
    pub context_sentences: Vec<ContextSentence>,
    pub source: String,
    pub correct_translation: String,
    pub contrastive_translations: Vec<String>,
    pub pronoun_class: String,
    pub antecedent_distance: u32,
}

impl ContrastiveInstance {
    pub fn validate(&self) -> Result<(), String> {
        if self.contrastive_translations.is_empty() {
            return Err("no contrastive translations".into());
        }
        if !PRONOUN_CLASSES.contains(&self.pronoun_class.as_str()) {
            return Err(format!(
                "pronoun class {:?} not in es/er/sie",
                self.pronoun_class
            ));
        }
        if self.context_sentences.len() > MAX_CONTEXT {
            return Err(format!(
                "{} context sentences, at most {MAX_CONTEXT}",
                self.context_sentences.len()
            ));
        }
        Ok(())
    }

    /// Candidate 0 is the correct translation.
    pub fn num_candidates(&self) -> usize {
        1 + self.contrastive_translations.len()
    }
}

pub fn read_instances(reader: impl BufRead) -> Result<Vec<ContrastiveInstance>, EvalError> {
    let mut out = Vec::new();
    let mut ids = BTreeSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: String| EvalError::Instance {
            line: i + 1,
            reason,
        };
        let inst: ContrastiveInstance =
            serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
        inst.validate().map_err(bad)?;
        if !ids.insert(inst.instance_id.clone()) {
            return Err(bad(format!("duplicate instance id {:?}", inst.instance_id)));
        }
        out.push(inst);
    }
    Ok(out)
}

/// Log scores keyed by instance id, indexed by candidate.
pub type ScoreTable = HashMap<String, BTreeMap<usize, f64>>;

/// Reads `instance_id \t candidate_index \t log_score` lines.
pub fn read_scores(reader: impl BufRead) -> Result<ScoreTable, EvalError> {
    let mut table = ScoreTable::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: &str| EvalError::Score {
            line: i + 1,
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [id, idx, score] = fields[..] else {
            return Err(bad("expected 3 tab-separated fields"));
        };
        let idx: usize = idx.trim().parse().map_err(|_| bad("bad candidate index"))?;
        let score: f64 = score.trim().parse().map_err(|_| bad("bad log score"))?;
        if score.is_nan() {
            return Err(bad("log score is NaN"));
        }
        if table
            .entry(id.to_string())
            .or_default()
            .insert(idx, score)
            .is_some()
        {
            return Err(bad("candidate scored twice"));
        }
    }
    Ok(table)
}

/// Correct iff candidate 0 scores strictly higher than every contrastive
/// candidate. Errors list every instance without complete scores.
pub fn judge(
    instances: &[ContrastiveInstance],
    scores: &ScoreTable,
) -> Result<Vec<bool>, EvalError> {
    let mut missing = Vec::new();
    let mut out = Vec::with_capacity(instances.len());
    for inst in instances {
        let row = scores.get(&inst.instance_id);
        let all: Option<Vec<f64>> = (0..inst.num_candidates())
            .map(|c| row.and_then(|r| r.get(&c)).copied())
            .collect();
        match all {
            Some(s) => out.push(s[1..].iter().all(|&x| s[0] > x)),
            None => missing.push(inst.instance_id.clone()),
        }
    }
    if missing.is_empty() {
        Ok(out)
    } else {
        Err(EvalError::MissingScores(missing))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Accuracy {
    pub correct: usize,
    pub total: usize,
    /// `None` for an empty group.
    pub accuracy: Option<f64>,
}

impl Accuracy {
    fn of(outcomes: impl Iterator<Item = bool>) -> Self {
        let (mut correct, mut total) = (0, 0);
        for ok in outcomes {
            total += 1;
            correct += ok as usize;
        }
        Accuracy {
            correct,
            total,
            accuracy: (total > 0).then(|| correct as f64 / total as f64),
        }
    }

    pub fn display(&self) -> String {
        self.accuracy
            .map(|a| format!("{a:.3}"))
            .unwrap_or_else(|| "NA".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContrastiveReport {
    pub total: Accuracy,
    pub by_class: BTreeMap<String, Accuracy>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocationReport {
    pub inside: Accuracy,
    pub outside: Accuracy,
}

pub fn contrastive_score(
    instances: &[ContrastiveInstance],
    scores: &ScoreTable,
) -> Result<ContrastiveReport, EvalError> {
    let verdicts = judge(instances, scores)?;
    let by_class = PRONOUN_CLASSES
        .iter()
        .map(|&c| {
            let acc = Accuracy::of(
                instances
                    .iter()
                    .zip(&verdicts)
                    .filter(|(i, _)| i.pronoun_class == c)
                    .map(|(_, &v)| v),
            );
            (c.to_string(), acc)
        })
        .collect();
    Ok(ContrastiveReport {
        total: Accuracy::of(verdicts.iter().copied()),
        by_class,
    })
}

/// Antecedent distance 0 is inside the current sentence, anything else outside.
pub fn accuracy_by_location(
    instances: &[ContrastiveInstance],
    scores: &ScoreTable,
) -> Result<LocationReport, EvalError> {
    let verdicts = judge(instances, scores)?;
    let part = |inside: bool| {
        Accuracy::of(
            instances
                .iter()
                .zip(&verdicts)
                .filter(|(i, _)| (i.antecedent_distance == 0) == inside)
                .map(|(_, &v)| v),
        )
    };
    Ok(LocationReport {
        inside: part(true),
        outside: part(false),
    })
}
