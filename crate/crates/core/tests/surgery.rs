mod common;

use common::*;
use permlogic::perm::{cut_region, replace_block, Valuation, ValuedPermutation};
use rand::RngExt;

fn palette() -> Vec<Valuation> {
    vec![Valuation::of(&["p"]), Valuation::empty()]
}

#[test]
fn cut_keeps_models_under_the_matching_rows_hypothesis() {
    let mut rng = rng(17);
    let mut checked = 0;
    while checked < 150 {
        let n = rng.random_range(7..=8);
        let len = rng.random_range(6..=n);
        let p = perm_with_run(&mut rng, n, len);
        let m = ValuedPermutation::new(p, skewed_sigma(&mut rng, n, &palette(), 0.6)).unwrap();
        let cands = cut_candidates(&m);
        let Some(&(r, r2)) = cands.first() else { continue };
        let Some(f) = sentence_for(&mut rng, &m, 1, 200) else { continue };
        let out = cut_region(&m, r, m.perm().col_of(r), r2, m.perm().col_of(r2)).unwrap();
        assert_eq!(out.n(), m.n() - (r2 - r));
        assert!(holds(&out, &f), "{f} fails after cutting rows {}..={r2} of {m:?}", r + 1);
        checked += 1;
    }
}

#[test]
fn replacing_unmarked_blocks_with_green_ones_keeps_models() {
    let mut rng = rng(19);
    let mut checked = 0;
    while checked < 80 {
        let n = rng.random_range(9..=14);
        let len = rng.random_range(1..=3);
        let p = perm_with_run(&mut rng, n, len);
        let m = ValuedPermutation::new(p, skewed_sigma(&mut rng, n, &palette(), 0.3)).unwrap();
        let cands = replace_candidates(&m, 4);
        if cands.is_empty() {
            continue;
        }
        let Some(f) = sentence_for(&mut rng, &m, 1, 200) else { continue };
        for (target, donor) in &cands {
            let out = replace_block(&m, target, donor).unwrap();
            assert!(holds(&out, &f), "{f} fails after replacing {target:?} in {m:?}");
        }
        checked += 1;
    }
}
