//! Authoring core: dependency-parse ingestion, factuality checking, POS
//! correction, paraphrase normalization, frame learning and triggering,
//! synset disambiguation, and ULR construction.

pub mod adapter;
pub mod conllu;
pub mod correction;
pub mod disambig;
pub mod entities;
pub mod error;
pub mod eval;
pub mod facts;
pub mod factuality;
pub mod frames;
pub mod loader;
pub mod paraparse;
pub mod parse;
pub mod pipeline;
pub mod term;
pub mod ulr;

pub use error::{Error, Result};
