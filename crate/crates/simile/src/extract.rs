//! Candidate extraction over a stream of harvested documents.

use serde::Serialize;
use simile_core::extractor::{extract_document, ExtractOptions};
use simile_core::{CandidateSimile, Lexicon};

use crate::harvester::Document;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ExtractReport {
    pub documents: usize,
    pub failed_documents: usize,
    pub candidates: usize,
}

/// Tokenize, tag and match every document. Unreadable documents are counted
/// and skipped. Stops after `limit` documents when given.
pub fn extract_corpus<I, E, F, W>(
    documents: I,
    lex: &Lexicon,
    opts: &ExtractOptions,
    limit: Option<usize>,
    mut emit: F,
) -> Result<ExtractReport, W>
where
    I: IntoIterator<Item = Result<Document, E>>,
    E: std::fmt::Display,
    F: FnMut(CandidateSimile) -> Result<(), W>,
{
    let mut report = ExtractReport::default();
    for doc in documents.into_iter().take(limit.unwrap_or(usize::MAX)) {
        let doc = match doc {
            Ok(d) => d,
            Err(e) => {
                tracing::warn!(error = %e, "skipping unreadable document");
                report.failed_documents += 1;
                continue;
            }
        };
        report.documents += 1;
        for candidate in extract_document(&doc.text, &doc.url, lex, *opts) {
            report.candidates += 1;
            emit(candidate)?;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::Utc;
    use std::convert::Infallible;

    fn doc(url: &str, text: &str) -> Result<Document, String> {
        Ok(Document {
            url: url.into(),
            site_id: "t".into(),
            fetched_at: Utc::now(),
            text: text.into(),
        })
    }

    fn run(docs: Vec<Result<Document, String>>) -> (ExtractReport, Vec<CandidateSimile>) {
        let lex = Lexicon::default_serbian();
        let mut out = Vec::new();
        let report = extract_corpus(docs, &lex, &ExtractOptions::default(), None, |c| {
            out.push(c);
            Ok::<_, Infallible>(())
        })
        .unwrap();
        (report, out)
    }

    #[test]
    fn one_document_one_candidate() {
        let (r, c) = run(vec![doc("u", "Radi kao konj.")]);
        assert_eq!(r.candidates, 1);
        assert_eq!(c[0].phrase, "Radi kao konj");
        assert_eq!(c[0].doc_url, "u");
    }

    #[test]
    fn empty_input_and_failures() {
        let (r, c) = run(vec![]);
        assert_eq!((r, c.len()), (ExtractReport::default(), 0));
        let (r, _) = run(vec![Err("bad line".into()), doc("u", "nema poređenja")]);
        assert_eq!(r, ExtractReport { documents: 1, failed_documents: 1, candidates: 0 });
    }
}
