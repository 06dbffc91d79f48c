//! Rank transforms and Borda-count fusion of distance matrices.
//!
//! Each row of a distance matrix is turned into similarity ranks: a dialog
//! is always rank 1 against itself, the remaining entries are ranked by
//! ascending distance with ties broken by ascending column index. Two
//! ranking matrices are fused by summing them entrywise (the Borda count)
//! and ranking the sums again.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{DistanceMatrix, RankingMatrix, check_same_labels};
use crate::scalar::Scalar;

/// Per-row rank transform of a distance matrix.
///
/// Every row of the result is a permutation of `1..=n` with the self-entry
/// at rank 1.
pub fn ranking_matrix<S: Scalar>(d: &DistanceMatrix<S>) -> RankingMatrix {
    let n = d.n();
    let mut ranks = vec![0u32; n * n];
    ranks.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
        rank_row(d.row(i), i, out);
    });
    RankingMatrix::from_parts(d.labels().to_vec(), ranks).expect("square by construction")
}

fn rank_row<S: Scalar>(row: &[S], self_index: usize, out: &mut [u32]) {
    let mut order: Vec<usize> = (0..row.len()).filter(|&j| j != self_index).collect();
    order.sort_unstable_by(|&a, &b| {
        row[a]
            .partial_cmp(&row[b])
            .expect("distance values must not be NaN")
            .then(a.cmp(&b))
    });
    out[self_index] = 1;
    for (pos, &j) in order.iter().enumerate() {
        out[j] = pos as u32 + 2;
    }
}

/// Entrywise sum of two ranking matrices.
///
/// The result is treated as a distance matrix for re-ranking. It is not
/// symmetric and its diagonal is the constant 2 (both self-ranks are 1);
/// [`ranking_matrix`] handles that by always forcing the self-entry first.
pub fn borda_sum<S: Scalar>(
    r_text: &RankingMatrix,
    r_structure: &RankingMatrix,
) -> Result<DistanceMatrix<S>> {
    check_same_labels(r_text.labels(), r_structure.labels())?;
    let values: Vec<S> = r_text
        .ranks()
        .iter()
        .zip(r_structure.ranks())
        .map(|(&a, &b)| S::from_count(a as usize + b as usize))
        .collect();
    DistanceMatrix::from_parts(r_text.labels().to_vec(), values)
}

/// Borda-count fusion: rank the entrywise sum of the two rankings.
pub fn combined_ranking(
    r_text: &RankingMatrix,
    r_structure: &RankingMatrix,
) -> Result<RankingMatrix> {
    let sums: DistanceMatrix<f64> = borda_sum(r_text, r_structure)?;
    Ok(ranking_matrix(&sums))
}

/// The `k` nearest dialogs to `dialog_id` by rank, best first.
///
/// The dialog itself is excluded; `k` must satisfy `1 <= k < n`.
pub fn top_k_similar(
    ranking: &RankingMatrix,
    dialog_id: &str,
    k: usize,
) -> Result<Vec<(String, u32)>> {
    let n = ranking.n();
    let i = ranking
        .labels()
        .iter()
        .position(|l| l == dialog_id)
        .ok_or_else(|| Error::UnknownId(dialog_id.to_string()))?;
    if k == 0 || k >= n {
        return Err(Error::InvalidK { k, n });
    }
    let mut neighbors: Vec<(usize, u32)> = ranking
        .row(i)
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(j, &r)| (j, r))
        .collect();
    neighbors.sort_unstable_by_key(|&(j, r)| (r, j));
    Ok(neighbors
        .into_iter()
        .take(k)
        .map(|(j, r)| (ranking.labels()[j].clone(), r))
        .collect())
}
