//! End-to-end matrix computation shared by the CLI and the evaluation.

use crate::corpus::{Corpus, Stoplist};
use crate::error::Result;
use crate::fusion::{borda_sum, ranking_matrix};
use crate::matrix::{DistanceMatrix, RankingMatrix};
use crate::scalar::Scalar;
use crate::structsim::structure_distance_matrix;
use crate::textsim::{build_vocabulary, text_distance_matrix};

/// All six matrices of the combined pipeline.
#[derive(Debug, Clone)]
pub struct MatrixSet<S> {
    pub d_text: DistanceMatrix<S>,
    pub r_text: RankingMatrix,
    pub d_structure: DistanceMatrix<S>,
    pub r_structure: RankingMatrix,
    pub d_borda: DistanceMatrix<S>,
    pub r_borda: RankingMatrix,
}

/// Computes textual and structural distances, their rankings, and the
/// Borda-fused ranking for a corpus.
pub fn compute_matrices<S: Scalar>(
    corpus: &Corpus,
    tau: S,
    stoplist: &Stoplist,
) -> Result<MatrixSet<S>> {
    let vocab = build_vocabulary(corpus, stoplist)?;
    let d_text = text_distance_matrix(corpus, &vocab, stoplist)?;
    let r_text = ranking_matrix(&d_text);
    let d_structure = structure_distance_matrix(corpus, tau, stoplist)?;
    let r_structure = ranking_matrix(&d_structure);
    let d_borda = borda_sum(&r_text, &r_structure)?;
    let r_borda = ranking_matrix(&d_borda);
    Ok(MatrixSet {
        d_text,
        r_text,
        d_structure,
        r_structure,
        d_borda,
        r_borda,
    })
}
