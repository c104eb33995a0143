use ego_tree::iter::Edge;
use encoding_rs::{Encoding, UTF_8};
use scraper::{Html, Node, Selector};
use thiserror::Error;
use url::Url;

use super::{canonicalize, ContentSelector};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("page bytes are not valid {encoding}")]
pub struct DecodeError {
    pub encoding: &'static str,
}

fn charset_param(content_type: &str) -> Option<&'static Encoding> {
    content_type.split(';').skip(1).find_map(|param| {
        let (k, v) = param.split_once('=')?;
        if k.trim().eq_ignore_ascii_case("charset") {
            Encoding::for_label(v.trim().trim_matches(|c| c == '"' || c == '\'').as_bytes())
        } else {
            None
        }
    })
}

/// `charset` from a `<meta charset=...>` or `<meta http-equiv ... content="...; charset=...">`
/// in the first 4 KiB.
fn meta_charset(bytes: &[u8]) -> Option<&'static Encoding> {
    let head = &bytes[..bytes.len().min(4096)];
    let lower: Vec<u8> = head.to_ascii_lowercase();
    let mut from = 0;
    while let Some(pos) = find(&lower[from..], b"<meta") {
        let start = from + pos;
        let end = find(&lower[start..], b">").map_or(lower.len(), |e| start + e);
        let tag = &lower[start..end];
        if let Some(c) = find(tag, b"charset") {
            let rest = &tag[c + "charset".len()..];
            let rest = trim_start(rest);
            if let Some(rest) = rest.strip_prefix(b"=") {
                let rest = trim_start(rest);
                let rest = rest.strip_prefix(b"\"").or_else(|| rest.strip_prefix(b"'")).unwrap_or(rest);
                let label: Vec<u8> = rest
                    .iter()
                    .copied()
                    .take_while(|b| b.is_ascii_alphanumeric() || b"-_:.".contains(b))
                    .collect();
                if let Some(enc) = Encoding::for_label(&label) {
                    return Some(enc);
                }
            }
        }
        from = end;
    }
    None
}

fn find(hay: &[u8], needle: &[u8]) -> Option<usize> {
    hay.windows(needle.len()).position(|w| w == needle)
}

fn trim_start(s: &[u8]) -> &[u8] {
    let n = s.iter().take_while(|b| b.is_ascii_whitespace()).count();
    &s[n..]
}

/// Decode page bytes. A byte-order mark wins, then the `Content-Type`
/// charset, then a `<meta>` charset, then UTF-8. Malformed input is an error
/// rather than being patched with replacement characters.
pub fn decode_html(bytes: &[u8], content_type: Option<&str>) -> Result<String, DecodeError> {
    let (encoding, body) = match Encoding::for_bom(bytes) {
        Some((enc, bom_len)) => (enc, &bytes[bom_len..]),
        None => {
            let enc = content_type
                .and_then(charset_param)
                .or_else(|| meta_charset(bytes))
                .unwrap_or(UTF_8);
            (enc, bytes)
        }
    };
    encoding
        .decode_without_bom_handling_and_without_replacement(body)
        .map(|s| s.into_owned())
        .ok_or(DecodeError {
            encoding: encoding.name(),
        })
}

const SKIPPED: &[&str] = &["script", "style", "noscript", "template"];

const BLOCKS: &[&str] = &[
    "address", "article", "aside", "blockquote", "br", "dd", "div", "dl", "dt", "fieldset",
    "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr",
    "li", "main", "nav", "ol", "p", "pre", "section", "table", "td", "th", "tr", "ul",
];

fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Text of the first element matching `selector`, scripts and styles
/// dropped, block boundaries treated as spaces, whitespace collapsed.
/// Empty when nothing matches.
pub fn extract_text(html: &str, selector: &ContentSelector) -> String {
    let doc = Html::parse_document(html);
    container_text(&doc, selector)
}

fn container_text(doc: &Html, selector: &ContentSelector) -> String {
    let Ok(sel) = Selector::parse(&selector.to_css()) else {
        return String::new();
    };
    let Some(root) = doc.select(&sel).next() else {
        return String::new();
    };
    let mut raw = String::new();
    let mut skip_depth = 0usize;
    for edge in root.traverse() {
        match edge {
            Edge::Open(node) => match node.value() {
                Node::Element(e) if SKIPPED.contains(&e.name()) => skip_depth += 1,
                Node::Element(e) if BLOCKS.contains(&e.name()) => raw.push(' '),
                Node::Text(t) if skip_depth == 0 => raw.push_str(t),
                _ => {}
            },
            Edge::Close(node) => match node.value() {
                Node::Element(e) if SKIPPED.contains(&e.name()) => skip_depth -= 1,
                Node::Element(e) if BLOCKS.contains(&e.name()) => raw.push(' '),
                _ => {}
            },
        }
    }
    collapse(&raw)
}

/// Absolute http(s) links of the whole page, fragments removed.
pub fn extract_links(html: &str, base: &Url) -> Vec<Url> {
    links_of(&Html::parse_document(html), base)
}

fn links_of(doc: &Html, base: &Url) -> Vec<Url> {
    let anchors = Selector::parse("a[href]").expect("static selector");
    let base = doc
        .select(&Selector::parse("base[href]").expect("static selector"))
        .next()
        .and_then(|b| base.join(b.value().attr("href")?).ok())
        .unwrap_or_else(|| base.clone());
    doc.select(&anchors)
        .filter_map(|a| base.join(a.value().attr("href")?.trim()).ok())
        .filter(|u| matches!(u.scheme(), "http" | "https"))
        .map(canonicalize)
        .collect()
}

/// Container text and outgoing links from one parse.
pub(crate) fn process_page(html: &str, base: &Url, selector: &ContentSelector) -> (String, Vec<Url>) {
    let doc = Html::parse_document(html);
    (container_text(&doc, selector), links_of(&doc, base))
}
