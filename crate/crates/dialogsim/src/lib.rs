//! Similarity between text dialogs from two complementary signals: TF-IDF
//! cosine similarity over the dialog text, and structural metrics of the
//! conversation (turns, word rates, repetition cycles). The two views are
//! fused at ranking level with a Borda count, which sidesteps scale
//! mismatches between the underlying distances.
//!
//! The typical flow:
//!
//! ```
//! use dialogsim::{Stoplist, corpus, fusion, pipeline};
//!
//! let input = r#"{"id": "a", "turns": [{"speaker": "A", "text": "recycling bins"}]}
//! {"id": "b", "turns": [{"speaker": "A", "text": "recycling cans"}]}
//! {"id": "c", "turns": [{"speaker": "B", "text": "quasar spectra"}]}
//! "#;
//! let c = corpus::parse_corpus(input.as_bytes(), corpus::CorpusFormat::Jsonl).unwrap();
//! let m = pipeline::compute_matrices::<f64>(&c, 0.5, &Stoplist::default()).unwrap();
//! let nearest = fusion::top_k_similar(&m.r_borda, "a", 1).unwrap();
//! assert_eq!(nearest[0].0, "b");
//! ```
//!
//! All real-valued computation is generic over the scalar type (`f32` or
//! `f64`, see [`Scalar`]); the `*64`/`*32` aliases below pin the common
//! configurations. Ranks are integers throughout.

pub mod corpus;
pub mod error;
pub mod evalx;
pub mod fusion;
pub mod matrix;
pub mod pipeline;
pub mod scalar;
pub mod structsim;
pub mod textsim;

#[cfg(test)]
pub(crate) mod testdata;

pub use corpus::{Corpus, CorpusFormat, Dialog, Stoplist, Turn};
pub use error::{Error, Result};
pub use matrix::{DistanceMatrix, RankingMatrix};
pub use scalar::Scalar;

/// Double-precision aliases; the CLI and the reference numbers use these.
pub type DistanceMatrix64 = DistanceMatrix<f64>;
pub type TfIdfVector64 = textsim::TfIdfVector<f64>;
pub type StructuralFeatures64 = structsim::StructuralFeatures<f64>;
pub type MatrixSet64 = pipeline::MatrixSet<f64>;
pub type PerturbationCurve64 = evalx::PerturbationCurve<f64>;
pub type EvalReport64 = evalx::EvalReport<f64>;

/// Single-precision aliases.
pub type DistanceMatrix32 = DistanceMatrix<f32>;
pub type TfIdfVector32 = textsim::TfIdfVector<f32>;
pub type StructuralFeatures32 = structsim::StructuralFeatures<f32>;
pub type MatrixSet32 = pipeline::MatrixSet<f32>;
pub type PerturbationCurve32 = evalx::PerturbationCurve<f32>;
pub type EvalReport32 = evalx::EvalReport<f32>;
