//! IO, persistence, crawling and the HTTP service around `simile_core`.
//!
//! Pipeline stages exchange JSON-lines and TSV files; see [`formats`]. The
//! curated corpus lives in a journaled single-file [`store`], served over HTTP
//! by [`service`] and driven from the command line by [`cli`].

pub mod cli;
pub mod extract;
pub mod formats;
pub mod harvester;
pub mod service;
pub mod store;

pub use simile_core as core;
