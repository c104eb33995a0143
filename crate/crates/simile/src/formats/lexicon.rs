use std::path::Path;

use anyhow::Context;
use simile_core::tagger::Lexicon;

pub const LEXICON_FILE: &str = "lexicon.tsv";
pub const SUFFIX_FILE: &str = "suffixes.tsv";

/// Load `lexicon.tsv` and `suffixes.tsv` from a directory.
pub fn load_lexicon_dir(dir: &Path) -> anyhow::Result<Lexicon> {
    let read = |name: &str| {
        let p = dir.join(name);
        std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))
    };
    let lexicon = read(LEXICON_FILE)?;
    let suffixes = read(SUFFIX_FILE)?;
    Lexicon::parse(&lexicon, &suffixes).with_context(|| format!("parsing lexicon in {}", dir.display()))
}
