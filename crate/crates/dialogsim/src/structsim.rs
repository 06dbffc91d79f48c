//! Conversational structure: cycle detection and per-dialog metrics.
//!
//! A cycle is a stretch of conversation where a participant keeps rephrasing
//! the same content. Operationally it is a maximal run of two or more
//! consecutive turns in which every adjacent pair of turns is similar enough
//! (binary-presence cosine over stopword-filtered terms at threshold `tau`).
//!
//! Four metrics summarize a dialog: turn count, mean words per turn, cycle
//! count and mean turns per cycle. Structural distance between dialogs is
//! the Euclidean distance of those metrics after per-corpus min-max
//! normalization, so no single metric dominates by scale.

use std::collections::HashSet;
use std::io::Write;

use rayon::prelude::*;

use crate::corpus::{Corpus, Dialog, Stoplist, Turn, content_tokens, word_count};
use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;

/// Default adjacent-turn similarity threshold for cycle detection.
pub const DEFAULT_TAU: f64 = 0.5;

/// An inclusive range of turn indices forming one cycle; spans at least 2
/// turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleSpan {
    pub start_turn: usize,
    pub end_turn: usize,
}

impl CycleSpan {
    /// Number of turns covered.
    pub fn len(&self) -> usize {
        self.end_turn - self.start_turn + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// The four structural metrics of one dialog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralFeatures<S> {
    pub num_turns: usize,
    pub avg_words_per_turn: S,
    pub num_cycles: usize,
    /// Mean cycle length in turns; 0 when the dialog has no cycles.
    pub avg_turns_per_cycle: S,
}

impl<S: Scalar> StructuralFeatures<S> {
    /// The metrics as a point in feature space.
    pub fn as_vector(&self) -> [S; 4] {
        [
            S::from_count(self.num_turns),
            self.avg_words_per_turn,
            S::from_count(self.num_cycles),
            self.avg_turns_per_cycle,
        ]
    }
}

/// Cosine similarity of two turns over binary term-presence vectors.
///
/// Tokens are stopword-filtered; if either turn has no content terms left
/// the similarity is 0.
pub fn turn_similarity<S: Scalar>(a: &Turn, b: &Turn, stoplist: &Stoplist) -> S {
    let set_a: HashSet<String> = content_tokens(&a.text, stoplist).into_iter().collect();
    let set_b: HashSet<String> = content_tokens(&b.text, stoplist).into_iter().collect();
    binary_cosine(&set_a, &set_b)
}

fn binary_cosine<S: Scalar>(a: &HashSet<String>, b: &HashSet<String>) -> S {
    if a.is_empty() || b.is_empty() {
        return S::zero();
    }
    let shared = a.intersection(b).count();
    let sim = S::from_count(shared) / (S::from_count(a.len()) * S::from_count(b.len())).sqrt();
    sim.min(S::one())
}

/// Finds all cycles of a dialog at threshold `tau`.
///
/// Returned spans are disjoint and in increasing turn order. `tau` is meant
/// to lie in `(0, 1]`; the default is [`DEFAULT_TAU`].
pub fn detect_cycles<S: Scalar>(dialog: &Dialog, tau: S, stoplist: &Stoplist) -> Vec<CycleSpan> {
    let term_sets: Vec<HashSet<String>> = dialog
        .turns()
        .iter()
        .map(|t| content_tokens(&t.text, stoplist).into_iter().collect())
        .collect();
    let mut cycles = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 0..dialog.len().saturating_sub(1) {
        let sim: S = binary_cosine(&term_sets[i], &term_sets[i + 1]);
        if sim >= tau {
            run_start.get_or_insert(i);
        } else if let Some(start) = run_start.take() {
            cycles.push(CycleSpan {
                start_turn: start,
                end_turn: i,
            });
        }
    }
    if let Some(start) = run_start {
        cycles.push(CycleSpan {
            start_turn: start,
            end_turn: dialog.len() - 1,
        });
    }
    cycles
}

/// Computes the four structural metrics of a dialog.
pub fn structural_features<S: Scalar>(
    dialog: &Dialog,
    tau: S,
    stoplist: &Stoplist,
) -> StructuralFeatures<S> {
    let num_turns = dialog.len();
    let total_words: usize = dialog.turns().iter().map(word_count).sum();
    let avg_words_per_turn = S::from_count(total_words) / S::from_count(num_turns);
    let cycles = detect_cycles(dialog, tau, stoplist);
    let num_cycles = cycles.len();
    let avg_turns_per_cycle = if num_cycles == 0 {
        S::zero()
    } else {
        let total: usize = cycles.iter().map(CycleSpan::len).sum();
        S::from_count(total) / S::from_count(num_cycles)
    };
    StructuralFeatures {
        num_turns,
        avg_words_per_turn,
        num_cycles,
        avg_turns_per_cycle,
    }
}

/// Euclidean distance matrix over min-max normalized feature vectors.
///
/// Each feature dimension is normalized to `[0, 1]` across the rows;
/// dimensions that are constant over the corpus contribute 0. Entries are
/// therefore bounded by 2 (four unit dimensions).
pub fn features_distance_matrix<S: Scalar>(
    labels: Vec<String>,
    features: &[StructuralFeatures<S>],
) -> Result<DistanceMatrix<S>> {
    if labels.len() != features.len() {
        return Err(Error::ShapeMismatch {
            left: labels.len(),
            right: features.len(),
        });
    }
    let points: Vec<[S; 4]> = features.iter().map(StructuralFeatures::as_vector).collect();
    let mut lo = points[0];
    let mut hi = points[0];
    for p in &points {
        for d in 0..4 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    let normalized: Vec<[S; 4]> = points
        .iter()
        .map(|p| {
            std::array::from_fn(|d| {
                if hi[d] > lo[d] {
                    (p[d] - lo[d]) / (hi[d] - lo[d])
                } else {
                    S::zero()
                }
            })
        })
        .collect();
    Ok(DistanceMatrix::symmetric_from_fn(labels, |i, j| {
        let (a, b) = (&normalized[i], &normalized[j]);
        (0..4)
            .map(|d| (a[d] - b[d]) * (a[d] - b[d]))
            .fold(S::zero(), |acc, v| acc + v)
            .sqrt()
    }))
}

/// Structural distance matrix of a corpus; features are extracted per dialog
/// in parallel, then normalized corpus-wide.
pub fn structure_distance_matrix<S: Scalar>(
    corpus: &Corpus,
    tau: S,
    stoplist: &Stoplist,
) -> Result<DistanceMatrix<S>> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let features: Vec<StructuralFeatures<S>> = corpus
        .dialogs()
        .par_iter()
        .map(|d| structural_features(d, tau, stoplist))
        .collect();
    features_distance_matrix(corpus.labels(), &features)
}

/// Writes a feature report as CSV with columns
/// `id,num_turns,avg_words_per_turn,num_cycles,avg_turns_per_cycle`.
pub fn write_features_csv<S: Scalar, W: Write>(
    rows: &[(String, StructuralFeatures<S>)],
    w: W,
) -> Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    writer.write_record([
        "id",
        "num_turns",
        "avg_words_per_turn",
        "num_cycles",
        "avg_turns_per_cycle",
    ])?;
    for (id, f) in rows {
        writer.write_record([
            id.clone(),
            f.num_turns.to_string(),
            f.avg_words_per_turn.to_string(),
            f.num_cycles.to_string(),
            f.avg_turns_per_cycle.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
