//! Evaluation utilities: rank MSE, perturbation baselines, term profiles
//! and the machine-readable evaluation report.
//!
//! All randomness is seeded ChaCha; results are bit-reproducible for a given
//! seed regardless of thread count.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Dialog, Stoplist, content_tokens};
use crate::error::{Error, Result};
use crate::matrix::{DistanceMatrix, RankingMatrix, check_same_labels};
use crate::pipeline::compute_matrices;
use crate::scalar::Scalar;
use crate::structsim::{StructuralFeatures, structural_features};

/// Swap counts of the standard perturbation sweep: `50 * 2^i` for `i` in
/// `1..=5`.
pub const PERTURBATION_SWAP_COUNTS: [u64; 5] = [100, 200, 400, 800, 1600];

/// Default number of top terms kept per dialog profile.
pub const DEFAULT_TOP_TERMS: usize = 30;

/// Mean squared difference over all n² cells of two ranking matrices.
///
/// Ranks are integers, so the sum of squared differences is accumulated
/// exactly in `u64` before the final division.
pub fn ranking_mse<S: Scalar>(a: &RankingMatrix, b: &RankingMatrix) -> Result<S> {
    check_same_labels(a.labels(), b.labels())?;
    let sum: u64 = a
        .ranks()
        .iter()
        .zip(b.ranks())
        .map(|(&x, &y)| {
            let d = i64::from(x) - i64::from(y);
            (d * d) as u64
        })
        .sum();
    let cells = (a.n() * a.n()) as u64;
    Ok(S::from_u64(sum).expect("sum representable") / S::from_u64(cells).expect("cells"))
}

/// Swaps `swaps` uniformly chosen pairs of distinct cells of the matrix.
///
/// Swapped cells are drawn over the whole matrix, so rows of the result need
/// not be permutations anymore. Deterministic for a given seed.
pub fn perturb_ranking(r: &RankingMatrix, swaps: u64, seed: u64) -> RankingMatrix {
    let mut out = r.clone();
    let cells = r.n() * r.n();
    if cells < 2 {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = out.ranks_mut();
    for _ in 0..swaps {
        let a = rng.random_range(0..cells);
        let mut b = rng.random_range(0..cells - 1);
        if b >= a {
            b += 1;
        }
        values.swap(a, b);
    }
    out
}

/// MSE between a ranking matrix and increasingly perturbed copies of itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationCurve<S> {
    /// `(swap count, mse)` pairs in increasing swap order.
    pub points: Vec<(u64, S)>,
    pub seed: u64,
}

/// The standard sweep over [`PERTURBATION_SWAP_COUNTS`].
pub fn perturbation_curve<S: Scalar>(r: &RankingMatrix, seed: u64) -> PerturbationCurve<S> {
    perturbation_curve_with_counts(r, &PERTURBATION_SWAP_COUNTS, seed)
}

/// Perturbation sweep at explicit swap counts; each point uses the derived
/// seed `seed + count` so points are independent of each other.
pub fn perturbation_curve_with_counts<S: Scalar>(
    r: &RankingMatrix,
    counts: &[u64],
    seed: u64,
) -> PerturbationCurve<S> {
    let points = counts
        .iter()
        .map(|&count| {
            let perturbed = perturb_ranking(r, count, seed.wrapping_add(count));
            let mse = ranking_mse(r, &perturbed).expect("same shape by construction");
            (count, mse)
        })
        .collect();
    PerturbationCurve { points, seed }
}

/// The most frequent content terms of one dialog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermProfile {
    pub dialog_id: String,
    /// `(term, frequency)` pairs, frequencies non-increasing; ties are
    /// ordered alphabetically so profiles are deterministic.
    pub top_terms: Vec<(String, usize)>,
}

impl TermProfile {
    pub fn term_set(&self) -> BTreeSet<&str> {
        self.top_terms.iter().map(|(t, _)| t.as_str()).collect()
    }
}

/// Builds the top-`k` term profile of a dialog after stopword filtering.
pub fn term_profile(dialog: &Dialog, stoplist: &Stoplist, k: usize) -> TermProfile {
    let mut counts: HashMap<String, usize> = HashMap::new();
    for turn in dialog.turns() {
        for token in content_tokens(&turn.text, stoplist) {
            *counts.entry(token).or_insert(0) += 1;
        }
    }
    let mut top_terms: Vec<(String, usize)> = counts.into_iter().collect();
    top_terms.sort_unstable_by(|(ta, ca), (tb, cb)| cb.cmp(ca).then(ta.cmp(tb)));
    top_terms.truncate(k);
    TermProfile {
        dialog_id: dialog.id().to_string(),
        top_terms,
    }
}

/// Intersection of the profiles' term sets.
pub fn term_intersection(profiles: &[TermProfile]) -> BTreeSet<String> {
    let Some(first) = profiles.first() else {
        return BTreeSet::new();
    };
    let mut terms: BTreeSet<String> =
        first.term_set().into_iter().map(str::to_string).collect();
    for profile in &profiles[1..] {
        let other = profile.term_set();
        terms.retain(|t| other.contains(t.as_str()));
    }
    terms
}

/// Structural features for the requested dialog ids, in request order.
pub fn feature_report<S: Scalar>(
    corpus: &Corpus,
    ids: &[String],
    tau: S,
    stoplist: &Stoplist,
) -> Result<Vec<(String, StructuralFeatures<S>)>> {
    ids.iter()
        .map(|id| {
            let dialog = corpus
                .get(id)
                .ok_or_else(|| Error::UnknownId(id.clone()))?;
            Ok((id.clone(), structural_features(dialog, tau, stoplist)))
        })
        .collect()
}

/// Symmetric zero-diagonal matrix with uniform(0,1) off-diagonal entries.
pub fn random_distance_matrix<S: Scalar>(labels: Vec<String>, seed: u64) -> DistanceMatrix<S> {
    let n = labels.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![S::zero(); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = S::from_f64(rng.random::<f64>()).expect("uniform sample");
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    DistanceMatrix::from_parts(labels, values).expect("square by construction")
}

/// Ranking matrix whose rows are independent uniform random permutations of
/// `1..=n`. This is the "random ranking" null model behind the `(n²−1)/6`
/// expected per-cell squared rank difference.
pub fn random_ranking_matrix(labels: Vec<String>, seed: u64) -> RankingMatrix {
    let n = labels.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ranks = Vec::with_capacity(n * n);
    let mut row: Vec<u32> = (1..=n as u32).collect();
    for _ in 0..n {
        row.shuffle(&mut rng);
        ranks.extend_from_slice(&row);
    }
    RankingMatrix::from_parts(labels, ranks).expect("square by construction")
}

/// Ranking matrix with index-ordered rows: row `i` ranks dialog `i` first
/// and the rest in cyclic column order.
pub fn ordered_ranking_matrix(labels: Vec<String>) -> RankingMatrix {
    let n = labels.len();
    let mut ranks = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            ranks.push(((j + n - i) % n) as u32 + 1);
        }
    }
    RankingMatrix::from_parts(labels, ranks).expect("square by construction")
}

/// Which matrix the perturbation sweep starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CurveBaseline {
    /// Rank transform of a seeded random distance matrix.
    #[default]
    Random,
    /// Index-ordered rows, see [`ordered_ranking_matrix`].
    Ordered,
}

/// Options for [`evaluate`].
#[derive(Debug, Clone)]
pub struct EvalOptions<S> {
    pub tau: S,
    pub seed: u64,
    pub baseline: CurveBaseline,
    pub top_terms: usize,
    /// Dialog ids to compute term intersections for; empty for none.
    pub ids: Vec<String>,
}

impl<S: Scalar> Default for EvalOptions<S> {
    fn default() -> Self {
        Self {
            tau: S::from_f64(crate::structsim::DEFAULT_TAU).unwrap(),
            seed: 42,
            baseline: CurveBaseline::default(),
            top_terms: DEFAULT_TOP_TERMS,
            ids: Vec::new(),
        }
    }
}

/// Pairwise MSEs among the textual, structural and Borda rankings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairwiseMse<S> {
    pub t_s: S,
    pub t_b: S,
    pub s_b: S,
}

/// The evaluation report emitted as JSON by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport<S> {
    pub pairwise_mse: PairwiseMse<S>,
    /// `[swap count, mse]` points of the perturbation sweep.
    pub curve: Vec<(u64, S)>,
    /// Term intersections keyed by `"id1&id2"` (and `"all"` for three or
    /// more ids); empty when no ids were requested.
    pub intersections: BTreeMap<String, Vec<String>>,
}

impl<S: Scalar + Serialize> EvalReport<S> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs the full evaluation over a corpus: matrices, pairwise MSEs, the
/// perturbation sweep of the chosen baseline and optional term
/// intersections.
pub fn evaluate<S: Scalar>(
    corpus: &Corpus,
    stoplist: &Stoplist,
    options: &EvalOptions<S>,
) -> Result<EvalReport<S>> {
    let matrices = compute_matrices(corpus, options.tau, stoplist)?;
    let pairwise_mse = PairwiseMse {
        t_s: ranking_mse(&matrices.r_text, &matrices.r_structure)?,
        t_b: ranking_mse(&matrices.r_text, &matrices.r_borda)?,
        s_b: ranking_mse(&matrices.r_structure, &matrices.r_borda)?,
    };
    let baseline = match options.baseline {
        CurveBaseline::Random => {
            ranking_matrix_of_random(corpus.labels(), options.seed)
        }
        CurveBaseline::Ordered => ordered_ranking_matrix(corpus.labels()),
    };
    let curve = perturbation_curve::<S>(&baseline, options.seed).points;

    let mut intersections = BTreeMap::new();
    if options.ids.len() >= 2 {
        let profiles: Vec<TermProfile> = options
            .ids
            .iter()
            .map(|id| {
                let dialog = corpus
                    .get(id)
                    .ok_or_else(|| Error::UnknownId(id.clone()))?;
                Ok(term_profile(dialog, stoplist, options.top_terms))
            })
            .collect::<Result<_>>()?;
        for i in 0..profiles.len() {
            for j in (i + 1)..profiles.len() {
                let key = format!("{}&{}", profiles[i].dialog_id, profiles[j].dialog_id);
                let terms =
                    term_intersection(&[profiles[i].clone(), profiles[j].clone()]);
                intersections.insert(key, terms.into_iter().collect());
            }
        }
        if profiles.len() > 2 {
            intersections.insert(
                "all".to_string(),
                term_intersection(&profiles).into_iter().collect(),
            );
        }
    }
    Ok(EvalReport {
        pairwise_mse,
        curve,
        intersections,
    })
}

fn ranking_matrix_of_random(labels: Vec<String>, seed: u64) -> RankingMatrix {
    let d: DistanceMatrix<f64> = random_distance_matrix(labels, seed);
    crate::fusion::ranking_matrix(&d)
}
