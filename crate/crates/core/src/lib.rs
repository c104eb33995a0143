//! Core algorithms for mining similes from Serbian text.
//!
//! Everything in this crate is pure and allocation-only (`no_std` + `alloc`):
//!
//! - [`tagger`]: sentence/token segmentation and coarse POS tagging.
//! - [`extractor`]: the `(V|A|V se) (kao|ko|k'o) ((A|N)*) (N)` matcher.
//! - [`stemmer`]: data-driven suffix stripping.
//! - [`classifier`]: lexical features, multinomial naive Bayes, SMO-trained SVM,
//!   metrics and cross-validation.
//! - [`corpus`]: canonical keys, the curated record state machine, search,
//!   merging and statistics.
//!
//! IO, persistence, crawling and the HTTP service live in the `simile` crate.

#![no_std]

extern crate alloc;

pub mod classifier;
pub mod corpus;
pub mod extractor;
pub mod stemmer;
pub mod tagger;
mod text;

pub use classifier::{FeatureVector, Label, Metrics, TrainedModel};
pub use corpus::{Corpus, RecordId, SimileRecord, Source, Status, Timestamp};
pub use extractor::{match_candidates, normalize_connector, CandidateKind, CandidateSimile};
pub use stemmer::{stem, stem_phrase, StemRuleSet};
pub use tagger::{tag_tokens, tokenize, Lexicon, Tag, TaggedToken};
