use std::sync::Arc;

use stego_core::{
    Framing, HashStub, SkipRules, StegoConfig, Stegosystem, StopwordList, TableStub, Vocab,
    WordPiece,
};
use stego_harness::{
    audit_distortion, measure_capacity, sweep, synthetic_corpus, write_csv, Corpus,
};

fn system(config: StegoConfig) -> Stegosystem {
    Stegosystem::new(
        config,
        WordPiece::new(Arc::new(Vocab::demo())),
        Arc::new(StopwordList::english()),
    )
    .unwrap()
}

fn table(text: &str) -> TableStub {
    TableStub::parse(text, &Vocab::demo()).unwrap()
}

#[test]
fn one_bit_every_three_words() {
    // "It was dogs." plans only "dogs", which has two candidates
    let cover = vec!["It was dogs."; 40].join(" ");
    let rows: String = (1..=40).map(|k| format!("d1.s{k}\t2\tdogs:0.5,cats:0.4\n")).collect();
    let sys = system(StegoConfig::default().with_interval(1));
    let report = measure_capacity(&Corpus::new(vec![cover]), &sys, &table(&rows), 32, 5).unwrap();
    assert_eq!(report.documents_processed, 1);
    assert_eq!(report.documents_skipped, 0);
    assert_eq!(report.message_bits, 32);
    assert_eq!(report.words, 96);
    assert_eq!(report.positions_total, 32);
    assert_eq!(report.positions_zero_capacity, 0);
    assert!((report.bits_per_word - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn all_stopword_corpus_has_no_capacity() {
    let corpus = Corpus::parse("It was the one.\n\nShe is with them.\n");
    let sys = system(StegoConfig::default());
    let model = HashStub::new(1, Vocab::demo().len()).unwrap();
    let report = measure_capacity(&corpus, &sys, &model, 32, 0).unwrap();
    assert_eq!(report.bits_per_word, 0.0);
    assert_eq!(report.documents_processed, 0);
    assert_eq!(report.documents_skipped, 2);
}

#[test]
fn capacity_report_arithmetic() {
    let corpus = synthetic_corpus(11, 6, 300);
    let sys = system(StegoConfig::default());
    let model = HashStub::new(4, Vocab::demo().len()).unwrap();
    let report = measure_capacity(&corpus, &sys, &model, 32, 9).unwrap();
    assert_eq!(report.documents_processed + report.documents_skipped, corpus.len());
    assert_eq!(report.message_bits, 32 * report.documents_processed);
    assert!(report.positions_zero_capacity <= report.positions_total);
    assert!((report.bits_per_word * report.words as f64 - report.message_bits as f64).abs() < 1e-6);
    assert_eq!(report, measure_capacity(&corpus, &sys, &model, 32, 9).unwrap());
}

#[test]
fn audit_with_one_unsafe_position_of_two() {
    let skip = SkipRules {
        subwords: false,
        ..SkipRules::default()
    };
    let sys = system(StegoConfig::default().with_interval(2).with_skip(skip));
    // eligible: un ##break ##able dogs; f = 2 masks ##break and dogs
    let stub = table("d1.s1\t3\t##us:0.5,##break:0.4\nd1.s1\t5\tcats:0.5,dogs:0.4\n");
    let corpus = Corpus::new(vec!["It is unbreakable dogs.".into()]);
    let report = audit_distortion(&corpus, &sys, &stub).unwrap();
    assert_eq!(report.masked_positions, 2);
    assert_eq!(report.positions_with_unsafe_candidate, 1);
    assert_eq!(report.rate, 0.5);
}

#[test]
fn audit_of_whole_word_candidates_is_clean() {
    let sys = system(StegoConfig::default().with_interval(1));
    let stub = table("d1.s1\t1\tcats:0.5,dogs:0.4\nd1.s2\t1\tbook:0.5,car:0.4\n");
    let corpus = Corpus::new(vec!["We dogs. We book.".into()]);
    let report = audit_distortion(&corpus, &sys, &stub).unwrap();
    assert_eq!(report.masked_positions, 2);
    assert_eq!(report.rate, 0.0);
}

fn bpw(rows: &[stego_harness::SweepRow], f: usize, p: f64) -> f64 {
    rows.iter()
        .find(|r| r.f == f && r.p == p)
        .and_then(|r| r.bits_per_word)
        .unwrap()
}

#[test]
fn sweep_examples() {
    let corpus = synthetic_corpus(2, 8, 400);
    let sys = system(StegoConfig::default());
    let model = HashStub::new(8, Vocab::demo().len()).unwrap();

    let rows = sweep(&corpus, &sys, &model, &[2, 4], &[0.02], 32, 0);
    assert!(bpw(&rows, 4, 0.02) <= bpw(&rows, 2, 0.02));

    let rows = sweep(&corpus, &sys, &model, &[3], &[0.5, 0.02], 32, 0);
    assert!(bpw(&rows, 3, 0.5) <= bpw(&rows, 3, 0.02));
}

#[test]
fn full_grid_smoke_run_is_deterministic() {
    let corpus = synthetic_corpus(5, 3, 200);
    let sys = system(StegoConfig::default());
    let model = HashStub::new(1, Vocab::demo().len()).unwrap();
    let f: Vec<usize> = (1..=8).collect();
    let p = [0.01, 0.02, 0.05, 0.1];
    let rows = sweep(&corpus, &sys, &model, &f, &p, 32, 0);
    assert_eq!(rows.len(), 32);
    assert_eq!((rows[0].f, rows[0].p), (1, 0.01));
    assert_eq!((rows[31].f, rows[31].p), (8, 0.1));

    let mut a = Vec::new();
    let mut b = Vec::new();
    write_csv(&mut a, &rows).unwrap();
    write_csv(&mut b, &sweep(&corpus, &sys, &model, &f, &p, 32, 0)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn failing_cell_lands_in_the_error_column() {
    let corpus = Corpus::new(vec!["She will marry him.".into()]);
    let sys = system(StegoConfig::default().with_interval(1).with_framing(Framing::Fixed(1)));
    let stub = table("d1.s1\t2\tmarry:0.6,wed:0.3\n");
    let rows = sweep(&corpus, &sys, &stub, &[1, 0], &[0.02], 1, 0);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].bits_per_word, Some(0.25));
    assert!(rows[0].errors.is_empty());
    assert_eq!(rows[1].bits_per_word, None);
    assert!(rows[1].errors.starts_with("invalid-config"), "{}", rows[1].errors);
}
