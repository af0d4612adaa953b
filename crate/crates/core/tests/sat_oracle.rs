mod common;

use std::time::Duration;

use permlogic::logic::{eval_formula, Assignment};
use permlogic::oracle::{brute_sat, SearchBudget, Verdict};
use permlogic::sat::{decide_sat, SatBounds, SatOutcome};

#[test]
fn structured_procedure_finds_every_small_model() {
    let mut rng = common::rng(5);
    let bounds = SatBounds { max_fingerprints: 6, max_block_len: 3, ..SatBounds::default() };
    let budget = SearchBudget { max_n: 5, max_letters: 2, time_cap: Duration::from_secs(120) };
    let mut misses = Vec::new();
    for case in 0..30 {
        let phi = if case % 3 == 0 { common::random_formula(&mut rng, 4, 2, &[]) } else { common::random_sentence(&mut rng, 2, 2, 2) };
        let structured = decide_sat(&phi, &bounds).unwrap();
        let brute = brute_sat(&phi, &budget).unwrap();
        if let SatOutcome::Sat { model, .. } = &structured {
            assert!(eval_formula(model, &phi, &Assignment::default()).unwrap());
        }
        if matches!(brute, Verdict::Found(_)) && !matches!(structured, SatOutcome::Sat { .. }) {
            misses.push(phi.to_string());
        }
    }
    assert!(misses.is_empty(), "{misses:?}");
}
