//! Seeded synthetic labeled candidates.
//!
//! Positives compare with typical simile vehicles (animals, substances,
//! objects); negatives name roles and professions ("radi kao pravnik"). Left
//! sides are drawn from one shared, Zipf-weighted pool so they carry no class
//! signal. A fixed fraction of labels is then flipped.
//!
//! Modified right sides ("pravi konj") become whole-string features no other
//! example shares, so raising `modifier_rate` mostly measures unseen-feature
//! behaviour rather than class correlation.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Label, LabeledPhrase};

const HEADS: &[&str] = &[
    "radi", "spava", "trči", "peva", "skače", "ponaša se", "drži se", "izgleda", "govori", "živi",
    "ćuti", "gleda", "jede", "pije", "plače", "hoda", "pliva", "sija", "viče", "služi", "beo", "bela",
    "brz", "brza", "crven", "crvena", "miran", "mirna", "lep", "lepa", "jak", "jaka", "tvrd", "tvrda",
    "hladan", "hladna", "gladan", "gladna", "ljut", "ljuta", "vredan", "vredna", "pametan", "glup",
    "star", "mlad", "hrabar", "spor", "visok", "tužan",
];

const VEHICLES: &[&str] = &[
    "konj", "vuk", "zec", "sneg", "med", "kamen", "pero", "krv", "ovca", "ris", "vampir", "cvet",
    "krastavac", "zmaj", "mrav", "pas", "bik", "lav", "tigar", "medved", "orao", "golub", "puž",
    "led", "grom", "vetar", "hleb", "šećer", "čelik", "kristal", "zmija", "lisica", "pčela", "muva",
    "žaba", "kornjača", "svinja", "stena", "vatra", "smrt", "noć", "zemlja", "munja", "sveća",
    "mleko", "sunce", "drvo", "olovo",
];

const ROLES: &[&str] = &[
    "pravnik", "lekar", "učitelj", "vojnik", "direktor", "inženjer", "profesor", "kuvar", "vozač",
    "prodavac", "advokat", "sudija", "trener", "glumac", "pevač", "pisac", "novinar", "konobar",
    "radnik", "seljak", "student", "gost", "brat", "otac", "sin", "drug", "volonter", "savetnik",
    "tehničar", "menadžer", "učiteljica", "sekretarica", "prodavačica", "nevesta", "majka", "sestra",
    "domaćin", "predsednik", "ministar", "sekretar", "stažista", "pomoćnik", "čuvar", "portir",
    "dobrovoljac", "kapiten", "zamenik", "službenik",
];

const MODIFIERS: &[&str] = &["pravi", "stari", "mladi", "veliki", "mali", "dobar", "obični", "pravi pravcati"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticConfig {
    pub per_class: usize,
    pub label_noise: f64,
    /// Probability of prefixing the right side with a modifier.
    pub modifier_rate: f64,
    /// Zipf exponent for head word frequencies; 0 draws heads uniformly.
    pub head_skew: f64,
    /// Nouns drawn per class, a prefix of the built-in lists.
    pub vocabulary: usize,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            per_class: 300,
            label_noise: 0.10,
            modifier_rate: 0.0,
            head_skew: 1.0,
            vocabulary: 32,
            seed: 7,
        }
    }
}

fn connector(rng: &mut ChaCha8Rng) -> &'static str {
    match rng.random_range(0..10) {
        0 => "k'o",
        1 => "ko",
        _ => "kao",
    }
}

fn right_side(rng: &mut ChaCha8Rng, pool: &[&str], modifier_rate: f64) -> String {
    let noun = pool.choose(rng).copied().unwrap_or("konj");
    if rng.random_bool(modifier_rate) {
        let m = MODIFIERS.choose(rng).copied().unwrap_or("pravi");
        format!("{m} {noun}")
    } else {
        noun.to_string()
    }
}

/// `2 * per_class` phrases, positives first, with `round(noise * n)` labels flipped.
pub fn generate(cfg: &SyntheticConfig) -> Vec<LabeledPhrase> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let head_weights: Vec<f64> = (1..=HEADS.len())
        .map(|rank| libm::pow(rank as f64, -cfg.head_skew.max(0.0)))
        .collect();
    let heads = WeightedIndex::new(&head_weights).expect("weights are positive and finite");
    let mut out = Vec::with_capacity(cfg.per_class * 2);
    for (label, pool) in [(Label::Positive, VEHICLES), (Label::Negative, ROLES)] {
        for _ in 0..cfg.per_class {
            let left = HEADS[heads.sample(&mut rng)].to_string();
            let connector_surface = connector(&mut rng).to_string();
            let pool = &pool[..cfg.vocabulary.clamp(1, pool.len())];
            let right = right_side(&mut rng, pool, cfg.modifier_rate);
            out.push(LabeledPhrase {
                label,
                left,
                connector_surface,
                right,
            });
        }
    }
    let flips = libm::round(cfg.label_noise.clamp(0.0, 1.0) * out.len() as f64) as usize;
    let mut idx: Vec<usize> = (0..out.len()).collect();
    idx.shuffle(&mut rng);
    for &i in idx.iter().take(flips) {
        out[i].label = match out[i].label {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        };
    }
    out
}
