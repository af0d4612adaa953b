mod common;

use permlogic::rlp::{shuffle_check, ShuffleMethod, SolveOptions};
use rand::RngExt;

#[test]
fn shuffle_methods_agree_on_random_languages() {
    let mut rng = common::rng(71);
    let opts = SolveOptions { theta: 1, ..SolveOptions::default() };
    for _ in 0..150 {
        let al = common::alphabet(rng.random_range(1..=2));
        let l1 = common::random_nfa(&mut rng, &al, 3, 0.4);
        let l2 = common::random_nfa(&mut rng, &al, 3, 0.4);
        let max_n = rng.random_range(1..=7);
        let brute = shuffle_check(&l1, &l2, max_n, ShuffleMethod::Brute, &opts).unwrap();
        let rlp = shuffle_check(&l1, &l2, max_n, ShuffleMethod::Rlp, &opts).unwrap();
        for w in [&brute, &rlp].into_iter().flatten() {
            assert!(l1.accepts(&w.word));
            let image: Vec<usize> = w.p.iter().map(|&i| w.word[i - 1]).collect();
            assert!(l2.accepts(&image));
            assert!(w.p.windows(2).all(|x| x[0].abs_diff(x[1]) > 1));
        }
        // the solver is not size-bounded, so it may succeed beyond max_n
        match (&brute, &rlp) {
            (Some(_), None) => panic!("solver missed a witness of size at most {max_n}"),
            (None, Some(w)) => assert!(w.word.len() > max_n, "brute search missed {:?}", w.word),
            _ => {}
        }
    }
}
