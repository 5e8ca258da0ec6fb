use std::time::Instant;

use logres_core::corpus::{corpus, run};

#[test]
fn corpus_matches_expected_verdicts() {
    let mut failed = Vec::new();
    for entry in corpus() {
        let start = Instant::now();
        let outcome = run(&entry);
        println!("{:<22} {:>8.2?} {}", entry.name, start.elapsed(), if outcome.passed() { "ok" } else { "FAIL" });
        for f in &outcome.failures {
            println!("    {f}");
        }
        if !outcome.passed() {
            failed.push(entry.name);
        }
    }
    assert!(failed.is_empty(), "failing corpus entries: {failed:?}");
}
