mod common;

use std::time::Duration;

use permlogic::oracle::{brute_rlp, Verdict};
use permlogic::rlp::{solve_rlp, verify_witness, RlpOutcome, SolveOptions};

#[test]
fn solver_matches_exhaustive_search_at_threshold_one() {
    let mut rng = common::rng(7);
    let opts = SolveOptions { theta: 1, ..SolveOptions::default() };
    let mut mismatches = Vec::new();
    for case in 0..300 {
        let inst = common::random_rlp(&mut rng);
        let fast = solve_rlp(&inst, &opts).unwrap();
        let slow = brute_rlp(&inst, 8, Duration::from_secs(30)).unwrap();
        if let RlpOutcome::Witness(lp) = &fast {
            assert!(verify_witness(lp, &inst).unwrap());
        }
        let (a, b) = (matches!(fast, RlpOutcome::Witness(_)), matches!(slow, Verdict::Found(_)));
        if a != b {
            mismatches.push((case, a, b, permlogic::rlp::write_rlp(&inst)));
        }
    }
    for m in &mismatches {
        eprintln!("mismatch case {} solver={} brute={}\n{}", m.0, m.1, m.2, m.3);
    }
    assert!(mismatches.is_empty());
}

fn random_word_language(rng: &mut rand::rngs::StdRng, al: &[String], words: usize, len: std::ops::RangeInclusive<usize>) -> permlogic::automata::Nfa {
    use permlogic::automata::{compile_regex, Regex};
    use rand::RngExt;
    let alts = (0..words)
        .map(|_| {
            let n = rng.random_range(len.clone());
            Regex::Concat((0..n).map(|_| Regex::Letter(al[rng.random_range(0..al.len())].clone())).collect())
        })
        .collect();
    compile_regex(&Regex::Union(alts), al).unwrap()
}

#[test]
fn solver_matches_exhaustive_search_on_longer_words() {
    use permlogic::rlp::RlpInstance;
    let mut rng = common::rng(11);
    let opts = SolveOptions { theta: 1, ..SolveOptions::default() };
    let mut mismatches = Vec::new();
    for case in 0..150 {
        let al = common::alphabet(2);
        let l1 = random_word_language(&mut rng, &al, 3, 3..=7);
        let l2 = random_word_language(&mut rng, &al, 3, 3..=7);
        let rs = common::random_restrictions(&mut rng, 2, 0.3);
        let inst = RlpInstance::new(al, rs, l1, l2).unwrap();
        let fast = solve_rlp(&inst, &opts).unwrap();
        let slow = brute_rlp(&inst, 8, Duration::from_secs(30)).unwrap();
        let (a, b) = (matches!(fast, RlpOutcome::Witness(_)), matches!(slow, Verdict::Found(_)));
        if a != b {
            mismatches.push((case, a, b, permlogic::rlp::write_rlp(&inst)));
        }
    }
    for m in &mismatches {
        eprintln!("mismatch case {} solver={} brute={}\n{}", m.0, m.1, m.2, m.3);
    }
    assert!(mismatches.is_empty());
}
