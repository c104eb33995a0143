//! The `simile` command line. Stages talk only through files; each prints one
//! JSON report on stdout and logs JSON events on stderr. A failed stage exits
//! 1 with `{"command": ..., "error": ...}` on stderr; bad flags exit 2.

use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use simile_core::classifier::synthetic::{generate, SyntheticConfig};
use simile_core::classifier::{cross_validate, evaluate, Kernel, Label, SvmParams, TrainerSpec};
use simile_core::corpus::{SimileKind, UpsertOutcome, UpsertRequest};
use simile_core::extractor::ExtractOptions;
use simile_core::{CandidateSimile, Lexicon, SimileRecord, Source, StemRuleSet};

use crate::extract::extract_corpus;
use crate::formats::import::load_import;
use crate::formats::labeled::{load_labeled, write_labeled};
use crate::formats::lexicon::load_lexicon_dir;
use crate::formats::model::{ModelFile, Scorer};
use crate::formats::{read_jsonl, write_atomic, ClassifiedCandidate};
use crate::harvester::{crawl, CrawlOptions, Document, SiteConfig};
use crate::service::{self, ServiceConfig};
use crate::store::{now, Role, Store, StoreOptions};

pub const DEFAULT_STORE: &str = "simile.journal";

#[derive(Debug, Parser)]
#[command(name = "simile", version, about = "Mine, classify and curate Serbian similes")]
pub struct Cli {
    /// Corpus store file.
    #[arg(long, global = true)]
    pub store: Option<PathBuf>,
    /// Minimum log level on stderr.
    #[arg(long, global = true, default_value = "info")]
    pub log_level: tracing::Level,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Learner {
    Nb,
    Svm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Linear,
    Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Www,
    Karadzic,
    Manual,
}

impl From<SourceArg> for Source {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Www => Source::Www,
            SourceArg::Karadzic => Source::Karadzic,
            SourceArg::Manual => Source::Manual,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Crawl one site into a JSON-lines file of documents.
    Crawl {
        #[arg(long)]
        site: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Stop after this many fetched pages.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, default_value_t = 30)]
        timeout_secs: u64,
    },
    /// Tag documents and extract candidate similes.
    Extract {
        #[arg(long = "in")]
        input: PathBuf,
        /// Directory holding lexicon.tsv and suffixes.tsv; built-in when omitted.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Stop after this many documents.
        #[arg(long)]
        limit: Option<usize>,
        /// Keep Cyrillic text as is instead of transliterating it.
        #[arg(long)]
        no_transliterate: bool,
    },
    /// Fit a classifier on labeled TSV data.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        model: Learner,
        #[arg(long)]
        out: PathBuf,
        /// NB smoothing.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// SVM box constraint.
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, value_enum, default_value_t = KernelArg::Poly)]
        kernel: KernelArg,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Stemmer rule file to use and embed in the model.
        #[arg(long)]
        stem_rules: Option<PathBuf>,
    },
    /// Label extracted candidates with a trained model.
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Positive iff score > threshold.
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
    },
    /// Stratified k-fold cross-validation with the model's hyperparameters.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Merge a one-simile-per-line corpus file into the store.
    ImportCorpus {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        source: SourceArg,
        /// Approve imported records immediately.
        #[arg(long)]
        trusted: bool,
    },
    /// Add classified positives to the store as pending www records.
    LoadCandidates {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Record counts by source and status.
    Stats,
    /// Write every record as JSON lines.
    Export {
        #[arg(long)]
        out: PathBuf,
    },
    /// Load records written by `export` (ids are reassigned).
    ImportRecords {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run the HTTP service.
    Serve {
        /// TOML config; SIMILE_* environment variables override it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Create a curator account. The password is read from stdin.
    UserAdd {
        #[arg(long)]
        name: String,
        #[arg(long, value_enum, default_value_t = Role::Curator)]
        role: Role,
    },
    /// Write a synthetic labeled dataset.
    SynthData {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 300)]
        per_class: usize,
        #[arg(long, default_value_t = 0.10)]
        label_noise: f64,
        #[arg(long, default_value_t = 0.0)]
        modifier_rate: f64,
        #[arg(long, default_value_t = 1.0)]
        head_skew: f64,
        #[arg(long, default_value_t = 32)]
        vocabulary: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Crawl { .. } => "crawl",
            Command::Extract { .. } => "extract",
            Command::Train { .. } => "train",
            Command::Classify { .. } => "classify",
            Command::Eval { .. } => "eval",
            Command::ImportCorpus { .. } => "import-corpus",
            Command::LoadCandidates { .. } => "load-candidates",
            Command::Stats => "stats",
            Command::Export { .. } => "export",
            Command::ImportRecords { .. } => "import-records",
            Command::Serve { .. } => "serve",
            Command::UserAdd { .. } => "user-add",
            Command::SynthData { .. } => "synth-data",
        }
    }
}

/// Parse arguments, run, report. Returns the process exit code.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    tracing_subscriber::fmt()
        .json()
        .with_max_level(cli.log_level)
        .with_writer(io::stderr)
        .init();
    let name = cli.command.name();
    let started = Instant::now();
    match run(cli) {
        Ok(report) => {
            tracing::info!(
                command = name,
                elapsed_ms = started.elapsed().as_millis() as u64,
                "stage finished"
            );
            if !report.is_null() {
                println!("{report}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            tracing::error!(command = name, error = %format!("{e:#}"), "stage failed");
            eprintln!("{}", json!({ "command": name, "error": format!("{e:#}") }));
            ExitCode::FAILURE
        }
    }
}

fn to_value(report: impl Serialize) -> anyhow::Result<serde_json::Value> {
    Ok(serde_json::to_value(report)?)
}

fn open_store(cli_store: Option<&Path>) -> anyhow::Result<Store> {
    let path = cli_store.unwrap_or(Path::new(DEFAULT_STORE));
    Store::open(path, StoreOptions::default()).with_context(|| format!("opening store {}", path.display()))
}

/// Iterate a JSON-lines file, counting and skipping malformed lines.
fn jsonl_values<T: serde::de::DeserializeOwned>(
    path: &Path,
    malformed: &mut usize,
) -> anyhow::Result<Vec<T>> {
    let mut out = Vec::new();
    for item in read_jsonl::<T>(path).with_context(|| format!("opening {}", path.display()))? {
        let (line, parsed) = item.with_context(|| format!("reading {}", path.display()))?;
        match parsed {
            Ok(v) => out.push(v),
            Err(e) => {
                tracing::warn!(file = %path.display(), line, error = %e, "skipping malformed line");
                *malformed += 1;
            }
        }
    }
    Ok(out)
}

pub fn run(cli: Cli) -> anyhow::Result<serde_json::Value> {
    let store_path = cli.store.as_deref();
    match cli.command {
        Command::Crawl {
            site,
            out,
            limit,
            timeout_secs,
        } => {
            let cfg = SiteConfig::load(&site)?;
            let opts = CrawlOptions {
                timeout: Duration::from_secs(timeout_secs),
                limit,
                ..CrawlOptions::default()
            };
            let rt = tokio::runtime::Runtime::new()?;
            let mut report = None;
            write_atomic(&out, |w| {
                let r = rt.block_on(crawl(&cfg, &opts, |doc: Document| {
                    serde_json::to_writer(&mut *w, &doc)?;
                    w.write_all(b"\n")
                }))?;
                report = Some(r);
                Ok(())
            })
            .with_context(|| format!("writing {}", out.display()))?;
            to_value(json!({ "site": cfg.site_id, "out": out, "crawl": report }))
        }

        Command::Extract {
            input,
            lexicon,
            out,
            limit,
            no_transliterate,
        } => {
            let lex = match &lexicon {
                Some(dir) => load_lexicon_dir(dir)?,
                None => Lexicon::default_serbian(),
            };
            let opts = ExtractOptions {
                transliterate: !no_transliterate,
            };
            let reader = read_jsonl::<Document>(&input).with_context(|| format!("opening {}", input.display()))?;
            let mut io_error = None;
            let docs = reader.map_while(|item| match item {
                Ok((_, Ok(doc))) => Some(Ok(doc)),
                Ok((line, Err(e))) => Some(Err(format!("line {line}: {e}"))),
                Err(e) => {
                    io_error = Some(e);
                    None
                }
            });
            let mut report = None;
            write_atomic(&out, |w| {
                report = Some(extract_corpus(docs, &lex, &opts, limit, |c: CandidateSimile| {
                    serde_json::to_writer(&mut *w, &c)?;
                    w.write_all(b"\n")
                })?);
                Ok(())
            })
            .with_context(|| format!("writing {}", out.display()))?;
            if let Some(e) = io_error {
                return Err(e).with_context(|| format!("reading {}", input.display()));
            }
            to_value(report)
        }

        Command::Train {
            data,
            model,
            out,
            alpha,
            c,
            kernel,
            degree,
            tol,
            stem_rules,
        } => {
            let rules_text = stem_rules
                .as_deref()
                .map(|p| std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())))
                .transpose()?;
            let rules = match &rules_text {
                Some(t) => StemRuleSet::parse(t).map_err(|e| anyhow::anyhow!("stemmer rules: {e}"))?,
                None => StemRuleSet::default_serbian(),
            };
            let phrases = load_labeled(&data).with_context(|| format!("reading {}", data.display()))?;
            let examples: Vec<_> = phrases.iter().map(|p| p.to_example(&rules)).collect();
            let spec = match model {
                Learner::Nb => TrainerSpec::Nb { alpha },
                Learner::Svm => TrainerSpec::Svm(SvmParams {
                    c,
                    kernel: match kernel {
                        KernelArg::Linear => Kernel::Linear,
                        KernelArg::Poly => Kernel::Polynomial { degree },
                    },
                    tol,
                    max_iter: None,
                }),
            };
            let trained = spec.train(&examples).map_err(|e| anyhow::anyhow!("training failed: {e}"))?;
            let training = evaluate(&trained, &examples);
            ModelFile::new(trained, rules_text)
                .save(&out)
                .with_context(|| format!("writing {}", out.display()))?;
            let positives = examples.iter().filter(|e| e.label == Label::Positive).count();
            to_value(json!({
                "learner": spec_name(&spec),
                "examples": examples.len(),
                "positives": positives,
                "negatives": examples.len() - positives,
                "training": training,
                "out": out,
            }))
        }

        Command::Classify {
            model,
            input,
            out,
            threshold,
        } => {
            let file = ModelFile::load(&model).with_context(|| format!("loading {}", model.display()))?;
            let scorer = Scorer::new(file)?;
            let mut malformed = 0;
            let candidates: Vec<CandidateSimile> = jsonl_values(&input, &mut malformed)?;
            let mut positives = 0;
            let classified: Vec<ClassifiedCandidate> = candidates
                .into_iter()
                .map(|candidate| {
                    let p = scorer.classify(&candidate, threshold);
                    positives += usize::from(p.label == Label::Positive);
                    ClassifiedCandidate {
                        candidate,
                        label: p.label,
                        score: p.score,
                    }
                })
                .collect();
            let n = crate::formats::write_jsonl(&out, &classified)
                .with_context(|| format!("writing {}", out.display()))?;
            to_value(json!({
                "model": scorer.model.kind_name(),
                "threshold": threshold,
                "classified": n,
                "positives": positives,
                "negatives": n - positives,
                "malformed_lines": malformed,
            }))
        }

        Command::Eval {
            model,
            data,
            folds,
            seed,
        } => {
            let file = ModelFile::load(&model).with_context(|| format!("loading {}", model.display()))?;
            let rules = file.rules()?;
            let spec = file.trainer();
            let phrases = load_labeled(&data).with_context(|| format!("reading {}", data.display()))?;
            let examples: Vec<_> = phrases.iter().map(|p| p.to_example(&rules)).collect();
            let cv = cross_validate(&examples, folds, seed, &spec)
                .map_err(|e| anyhow::anyhow!("cross-validation failed: {e}"))?;
            to_value(json!({
                "learner": spec_name(&spec),
                "examples": examples.len(),
                "k": cv.k,
                "seed": cv.seed,
                "stratified": cv.stratified,
                "precision": cv.mean_precision,
                "recall": cv.mean_recall,
                "f_measure": cv.mean_f_measure,
                "pooled": cv.pooled,
                "folds": cv.folds,
            }))
        }

        Command::ImportCorpus { file, source, trusted } => {
            let lines = load_import(&file).with_context(|| format!("reading {}", file.display()))?;
            let store = open_store(store_path)?;
            let report = store.merge(lines.iter().map(|l| l.phrase.as_str()), source.into(), trusted, now());
            for e in &report.errors {
                let line = lines.get(e.position - 1).map_or(0, |l| l.line);
                tracing::warn!(line, phrase = %e.phrase, error = %e.message, "phrase not imported");
            }
            to_value(report)
        }

        Command::LoadCandidates { input } => {
            let mut malformed = 0;
            let rows: Vec<ClassifiedCandidate> = jsonl_values(&input, &mut malformed)?;
            let store = open_store(store_path)?;
            let (mut positives, mut created, mut duplicates, mut errors) = (0, 0, 0, 0);
            let at = now();
            for row in rows.iter().filter(|r| r.label == Label::Positive) {
                positives += 1;
                let c = &row.candidate;
                let req = UpsertRequest {
                    kind: SimileKind::from(c.kind),
                    doc_url: Some(c.doc_url.as_str()).filter(|u| !u.is_empty()),
                    count: c.count,
                    ..UpsertRequest::new(&c.phrase, Source::Www)
                };
                match store.upsert(&req, at) {
                    Ok(UpsertOutcome::Created(_)) => created += 1,
                    Ok(UpsertOutcome::Duplicate(_)) => duplicates += 1,
                    Err(e @ crate::store::StoreError::Corpus(_)) => {
                        tracing::warn!(phrase = %c.phrase, error = %e, "candidate not loaded");
                        errors += 1;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            to_value(json!({
                "read": rows.len(),
                "malformed_lines": malformed,
                "positives": positives,
                "created": created,
                "duplicates": duplicates,
                "errors": errors,
            }))
        }

        Command::Stats => {
            let store = open_store(store_path)?;
            to_value(store.read(|s| s.corpus.stats()))
        }

        Command::Export { out } => {
            let store = open_store(store_path)?;
            let records = store.export_records();
            let n = crate::formats::write_jsonl(&out, &records)
                .with_context(|| format!("writing {}", out.display()))?;
            to_value(json!({ "exported": n, "out": out }))
        }

        Command::ImportRecords { input } => {
            let mut malformed = 0;
            let mut records: Vec<SimileRecord> = jsonl_values(&input, &mut malformed)?;
            records.sort_by_key(|r| r.id);
            let store = open_store(store_path)?;
            let mut restored = 0;
            let mut errors = 0;
            for r in &records {
                match store.restore(r) {
                    Ok(_) => restored += 1,
                    Err(e @ crate::store::StoreError::Corpus(_)) => {
                        tracing::warn!(id = %r.id, error = %e, "record not restored");
                        errors += 1;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            to_value(json!({
                "read": records.len(),
                "malformed_lines": malformed,
                "restored": restored,
                "errors": errors,
            }))
        }

        Command::Serve { config } => {
            let mut cfg = match &config {
                Some(p) => ServiceConfig::load(p)?,
                None => ServiceConfig::default(),
            };
            cfg.apply_env(std::env::vars())?;
            if let Some(p) = store_path {
                cfg.store = p.to_path_buf();
            }
            tokio::runtime::Runtime::new()?.block_on(service::serve(&cfg))?;
            Ok(serde_json::Value::Null)
        }

        Command::UserAdd { name, role } => {
            let mut password = String::new();
            io::stdin().lock().read_line(&mut password)?;
            let password = password.trim_end_matches(['\r', '\n']);
            if password.is_empty() {
                bail!("empty password on stdin");
            }
            if name.trim().is_empty() {
                bail!("empty user name");
            }
            let store = open_store(store_path)?;
            store.add_user(&name, role, password, now())?;
            to_value(json!({ "user": name, "role": role }))
        }

        Command::SynthData {
            out,
            per_class,
            label_noise,
            modifier_rate,
            head_skew,
            vocabulary,
            seed,
        } => {
            if !(0.0..=1.0).contains(&label_noise) || !(0.0..=1.0).contains(&modifier_rate) {
                bail!("label_noise and modifier_rate must lie in [0, 1]");
            }
            let data = generate(&SyntheticConfig {
                per_class,
                label_noise,
                modifier_rate,
                head_skew,
                vocabulary,
                seed,
            });
            write_atomic(&out, |w| write_labeled(w, &data))
                .with_context(|| format!("writing {}", out.display()))?;
            to_value(json!({ "examples": data.len(), "out": out }))
        }
    }
}

fn spec_name(spec: &TrainerSpec) -> &'static str {
    match spec {
        TrainerSpec::Nb { .. } => "nb",
        TrainerSpec::Svm(_) => "svm",
    }
}
