//! Textual similarity: TF-IDF weighting and cosine distance.
//!
//! Each dialog is flattened to a free-form document (its turns joined in
//! order), tokenized and stopword-filtered. A term `j` occurring `tf(j)`
//! times in a document is weighted `tf(j) * log2(N / df(j))`, where `N` is
//! the corpus size and `df(j)` the number of dialogs containing the term.
//! Dialog similarity is the cosine of the weight vectors; textual distance
//! is one minus that.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::corpus::{Corpus, Dialog, Stoplist, content_tokens};
use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;

/// Corpus-global document frequencies.
///
/// The vocabulary is closed: terms unseen at build time are ignored when
/// vectorizing.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, u32>,
    df: Vec<u32>,
    n_docs: usize,
}

impl Vocabulary {
    /// Number of documents (dialogs) the vocabulary was built over.
    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    /// Number of distinct terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_id(&self, term: &str) -> Option<u32> {
        self.index.get(term).copied()
    }

    pub fn term(&self, id: u32) -> &str {
        &self.terms[id as usize]
    }

    /// Document frequency of a term, if present.
    pub fn df(&self, term: &str) -> Option<u32> {
        self.term_id(term).map(|id| self.df[id as usize])
    }

    fn idf<S: Scalar>(&self, id: u32) -> S {
        let n = S::from_count(self.n_docs);
        let df = S::from_count(self.df[id as usize] as usize);
        (n / df).log2()
    }
}

/// Counts document frequencies over the stopword-filtered dialog documents.
pub fn build_vocabulary(corpus: &Corpus, stoplist: &Stoplist) -> Result<Vocabulary> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut terms: Vec<String> = Vec::new();
    let mut index: HashMap<String, u32> = HashMap::new();
    let mut df: Vec<u32> = Vec::new();
    for dialog in corpus.dialogs() {
        let mut seen = std::collections::HashSet::new();
        for token in dialog_tokens(dialog, stoplist) {
            let id = *index.entry(token.clone()).or_insert_with(|| {
                terms.push(token);
                df.push(0);
                (terms.len() - 1) as u32
            });
            if seen.insert(id) {
                df[id as usize] += 1;
            }
        }
    }
    Ok(Vocabulary {
        terms,
        index,
        df,
        n_docs: corpus.len(),
    })
}

fn dialog_tokens(dialog: &Dialog, stoplist: &Stoplist) -> Vec<String> {
    dialog
        .turns()
        .iter()
        .flat_map(|t| content_tokens(&t.text, stoplist))
        .collect()
}

/// Sparse TF-IDF vector of one dialog.
///
/// Entries are sorted by term id and hold strictly positive weights; terms
/// present in every document (zero idf) are omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfVector<S> {
    entries: Vec<(u32, S)>,
    norm: S,
}

impl<S: Scalar> TfIdfVector<S> {
    /// Euclidean norm of the weights.
    pub fn norm(&self) -> S {
        self.norm
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(term id, weight)` pairs in ascending id order.
    pub fn entries(&self) -> &[(u32, S)] {
        &self.entries
    }

    pub fn weight(&self, id: u32) -> S {
        match self.entries.binary_search_by_key(&id, |&(i, _)| i) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => S::zero(),
        }
    }
}

/// Weights one dialog against a vocabulary: `w(j) = tf(j) * log2(N/df(j))`
/// with `tf(j)` the raw in-document term count.
pub fn tfidf_vector<S: Scalar>(
    dialog: &Dialog,
    vocab: &Vocabulary,
    stoplist: &Stoplist,
) -> TfIdfVector<S> {
    let mut counts: HashMap<u32, usize> = HashMap::new();
    for token in dialog_tokens(dialog, stoplist) {
        if let Some(id) = vocab.term_id(&token) {
            *counts.entry(id).or_insert(0) += 1;
        }
    }
    let mut entries: Vec<(u32, S)> = counts
        .into_iter()
        .filter_map(|(id, tf)| {
            let weight = S::from_count(tf) * vocab.idf::<S>(id);
            (weight > S::zero()).then_some((id, weight))
        })
        .collect();
    entries.sort_unstable_by_key(|&(id, _)| id);
    let norm = entries
        .iter()
        .map(|&(_, w)| w * w)
        .fold(S::zero(), |acc, w| acc + w)
        .sqrt();
    TfIdfVector { entries, norm }
}

/// Cosine similarity of two weight vectors, in `[0, 1]`.
///
/// Zero-norm vectors have similarity 0 against anything.
pub fn cosine_similarity<S: Scalar>(a: &TfIdfVector<S>, b: &TfIdfVector<S>) -> S {
    if a.norm == S::zero() || b.norm == S::zero() {
        return S::zero();
    }
    let mut dot = S::zero();
    let (mut i, mut j) = (0, 0);
    while i < a.entries.len() && j < b.entries.len() {
        let (ia, wa) = a.entries[i];
        let (ib, wb) = b.entries[j];
        match ia.cmp(&ib) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                dot = dot + wa * wb;
                i += 1;
                j += 1;
            }
        }
    }
    (dot / (a.norm * b.norm)).min(S::one())
}

/// Pairwise textual distance `1 − cosine`; symmetric with zero diagonal.
pub fn text_distance_matrix<S: Scalar>(
    corpus: &Corpus,
    vocab: &Vocabulary,
    stoplist: &Stoplist,
) -> Result<DistanceMatrix<S>> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let vectors: Vec<TfIdfVector<S>> = corpus
        .dialogs()
        .par_iter()
        .map(|d| tfidf_vector(d, vocab, stoplist))
        .collect();
    Ok(DistanceMatrix::symmetric_from_fn(corpus.labels(), |i, j| {
        S::one() - cosine_similarity(&vectors[i], &vectors[j])
    }))
}
