use std::collections::BTreeMap;

use proptest::prelude::*;
use simile_core::corpus::{Corpus, CorpusEvent, RecordId, Source, Status, Timestamp, UpsertRequest};
use simile_core::stemmer::StemRuleSet;

const PHRASES: &[&str] = &[
    "beo kao sneg", "bela kao sneg", "belo ko sneg", "brz kao zec", "brza k'o zec", "lep kao cvet",
    "lepa kao cvet", "radi kao konj", "radila kao konj", "hladan kao led", "konj", "sladak kao šećer",
];

#[derive(Debug, Clone)]
enum Op {
    Upsert { phrase: usize, source: usize, trusted: bool },
    Status { id: u64, approve: bool },
    Edit { id: u64, phrase: usize },
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        3 => (0..PHRASES.len(), 0usize..3, any::<bool>())
            .prop_map(|(phrase, source, trusted)| Op::Upsert { phrase, source, trusted }),
        2 => (1u64..10, any::<bool>()).prop_map(|(id, approve)| Op::Status { id, approve }),
        1 => (1u64..10, 0..PHRASES.len()).prop_map(|(id, phrase)| Op::Edit { id, phrase }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn invariants_hold_under_any_command_sequence(ops in proptest::collection::vec(op(), 0..40)) {
        let mut c = Corpus::new(StemRuleSet::default_serbian());
        let mut log: Vec<CorpusEvent> = Vec::new();
        for (t, op) in ops.iter().enumerate() {
            let now = Timestamp(t as i64);
            let events = match *op {
                Op::Upsert { phrase, source, trusted } => {
                    let req = UpsertRequest { trusted, ..UpsertRequest::new(PHRASES[phrase], Source::ALL[source]) };
                    c.plan_upsert(&req, now).map(|p| p.events)
                }
                Op::Status { id, approve } => {
                    let to = if approve { Status::Approved } else { Status::Rejected };
                    c.plan_set_status(RecordId(id), to, "cur", now).map(|p| p.events)
                }
                Op::Edit { id, phrase } => c.plan_edit(RecordId(id), PHRASES[phrase], "cur", now).map(|p| p.events),
            };
            if let Ok(events) = events {
                for e in &events {
                    c.apply(e);
                }
                log.extend(events);
            }
        }

        // One live record per canonical key, and it is the one the index returns.
        let mut live: BTreeMap<&str, RecordId> = BTreeMap::new();
        for r in c.records().filter(|r| r.status != Status::Rejected) {
            prop_assert!(live.insert(&r.canonical_key, r.id).is_none(), "key {} twice", r.canonical_key);
            prop_assert_eq!(c.by_key(&r.canonical_key).map(|x| x.id), Some(r.id));
        }

        // Search only ever returns approved records.
        for q in ["", "sneg", "kao", "brza kao zec"] {
            prop_assert!(c.search(q).iter().all(|r| r.status == Status::Approved));
        }

        let s = c.stats();
        prop_assert_eq!(s.total, c.len());
        prop_assert_eq!(s.total_approved, c.list_approved().len());
        prop_assert_eq!(s.total_approved, c.search("").len());
        let by_source: usize = Source::ALL.iter().map(|&src| s.for_source(src).total()).sum();
        prop_assert_eq!(by_source, s.total);

        // Replaying any prefix is consistent; replaying all of it is identical.
        let mut replay = Corpus::new(StemRuleSet::default_serbian());
        for e in &log {
            replay.apply(e);
        }
        prop_assert_eq!(replay.records().collect::<Vec<_>>(), c.records().collect::<Vec<_>>());
        prop_assert_eq!(replay.revisions(), c.revisions());
    }

    #[test]
    fn only_pending_records_change_status(first in any::<bool>(), second in any::<bool>()) {
        let mut c = Corpus::new(StemRuleSet::default_serbian());
        let id = c.upsert(&UpsertRequest::new("brz kao zec", Source::Manual), Timestamp(0)).unwrap().record().id;
        let to = |b| if b { Status::Approved } else { Status::Rejected };
        prop_assert!(c.set_status(id, to(first), "a", Timestamp(1)).is_ok());
        prop_assert!(c.set_status(id, to(second), "b", Timestamp(2)).is_err());
        prop_assert_eq!(c.get(id).unwrap().status, to(first));
    }
}
