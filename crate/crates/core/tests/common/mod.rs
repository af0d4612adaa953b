//! Random generators shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use permlogic::automata::Nfa;
use permlogic::rlp::{Diagonal, LabelRestriction, RlpInstance};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn alphabet(k: usize) -> Vec<String> {
    (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

pub fn random_nfa(rng: &mut StdRng, alphabet: &[String], max_states: usize, density: f64) -> Nfa {
    let states = rng.random_range(1..=max_states);
    let mut initial: BTreeSet<usize> = [0].into();
    if rng.random_bool(0.2) {
        initial.insert(rng.random_range(0..states));
    }
    // keep the initial state rejecting most of the time so short words are rarer
    let accepting: BTreeSet<usize> = (0..states).filter(|&q| rng.random_bool(if q == 0 { 0.15 } else { 0.6 })).collect();
    let mut transitions = BTreeSet::new();
    for p in 0..states {
        for a in 0..alphabet.len() {
            for q in 0..states {
                if rng.random_bool(density) {
                    transitions.insert((p, a, q));
                }
            }
        }
    }
    Nfa::new(alphabet.to_vec(), states, initial, accepting, transitions).unwrap()
}

pub fn random_restrictions(rng: &mut StdRng, k: usize, p: f64) -> BTreeSet<LabelRestriction> {
    let mut out = BTreeSet::new();
    for a in 0..k {
        for b in 0..k {
            for t in [Diagonal::NE, Diagonal::SE] {
                if rng.random_bool(p) {
                    out.insert(LabelRestriction { a, t, b });
                }
            }
        }
    }
    out
}

pub fn random_rlp(rng: &mut StdRng) -> RlpInstance {
    let k = rng.random_range(1..=2);
    let al = alphabet(k);
    let nfa1 = random_nfa(rng, &al, 3, 0.5);
    let nfa2 = random_nfa(rng, &al, 3, 0.5);
    let rs = random_restrictions(rng, k, 0.4);
    RlpInstance::new(al, rs, nfa1, nfa2).unwrap()
}

use permlogic::logic::{Formula, Var};
use permlogic::perm::{all_permutations, Valuation, ValuedPermutation};

const LETTERS: [&str; 2] = ["p", "q"];

/// Quantifier-free formula over `x` and `y`.
pub fn random_qf(rng: &mut StdRng, depth: usize, letters: usize) -> Formula {
    let var = |rng: &mut StdRng| if rng.random_bool(0.5) { Var::X } else { Var::Y };
    if depth == 0 || rng.random_bool(0.3) {
        return match rng.random_range(0..4) {
            0 | 1 => Formula::pred(LETTERS[rng.random_range(0..letters)], var(rng)),
            2 => {
                let a = var(rng);
                Formula::succ_r(a, a.other())
            }
            _ => {
                let a = var(rng);
                Formula::succ_d(a, a.other())
            }
        };
    }
    match rng.random_range(0..3) {
        0 => Formula::not(random_qf(rng, depth - 1, letters)),
        1 => Formula::and(random_qf(rng, depth - 1, letters), random_qf(rng, depth - 1, letters)),
        _ => Formula::or(random_qf(rng, depth - 1, letters), random_qf(rng, depth - 1, letters)),
    }
}

/// Formula whose free variables are among `bound`.
pub fn random_formula(rng: &mut StdRng, depth: usize, letters: usize, bound: &[Var]) -> Formula {
    let must_quantify = bound.is_empty();
    if depth == 0 || (!must_quantify && rng.random_bool(0.25)) {
        if must_quantify {
            let v = Var::X;
            let body = Formula::pred(LETTERS[rng.random_range(0..letters)], v);
            return if rng.random_bool(0.5) { Formula::exists(v, body) } else { Formula::forall(v, body) };
        }
        let pick = |rng: &mut StdRng| bound[rng.random_range(0..bound.len())];
        return match rng.random_range(0..4) {
            0 | 1 => Formula::pred(LETTERS[rng.random_range(0..letters)], pick(rng)),
            k if bound.len() == 2 => {
                let a = pick(rng);
                if k == 2 { Formula::succ_r(a, a.other()) } else { Formula::succ_d(a, a.other()) }
            }
            _ => Formula::pred(LETTERS[rng.random_range(0..letters)], pick(rng)),
        };
    }
    let choice = if must_quantify { 3 + rng.random_range(0..2) } else { rng.random_range(0..5) };
    match choice {
        0 => Formula::not(random_formula(rng, depth - 1, letters, bound)),
        1 => Formula::and(random_formula(rng, depth - 1, letters, bound), random_formula(rng, depth - 1, letters, bound)),
        2 => Formula::or(random_formula(rng, depth - 1, letters, bound), random_formula(rng, depth - 1, letters, bound)),
        _ => {
            let v = if rng.random_bool(0.5) { Var::X } else { Var::Y };
            let mut inner: Vec<Var> = bound.iter().copied().filter(|w| *w != v).collect();
            inner.push(v);
            let body = random_formula(rng, depth - 1, letters, &inner);
            if choice == 3 { Formula::exists(v, body) } else { Formula::forall(v, body) }
        }
    }
}

pub fn random_model(rng: &mut StdRng, max_n: usize, letters: usize) -> ValuedPermutation {
    let n = rng.random_range(1..=max_n);
    let perms = all_permutations(n);
    let p = perms[rng.random_range(0..perms.len())].clone();
    let sigma = (0..n)
        .map(|_| Valuation::of(&LETTERS[..letters].iter().filter(|_| rng.random_bool(0.5)).collect::<Vec<_>>()))
        .collect();
    ValuedPermutation::new(p, sigma).unwrap()
}

/// Conjunction of `parts` sentences `Q1 x Q2 y. qf(x, y)`.
pub fn random_sentence(rng: &mut StdRng, parts: usize, qf_depth: usize, letters: usize) -> Formula {
    let conj: Vec<Formula> = (0..parts)
        .map(|_| {
            let body = random_qf(rng, qf_depth, letters);
            let inner = if rng.random_bool(0.5) { Formula::exists(Var::Y, body) } else { Formula::forall(Var::Y, body) };
            if rng.random_bool(0.7) { Formula::forall(Var::X, inner) } else { Formula::exists(Var::X, inner) }
        })
        .collect();
    Formula::conj(conj)
}

use permlogic::logic::eval_formula;
use permlogic::logic::Assignment;
use permlogic::perm::{fingerprint_of, maximal_blocks, Block, BlockType, Fingerprint, Permutation};

/// `forall x forall y. qf` plus one or two `forall x exists y. qf` conjuncts.
pub fn random_snf_sentence(rng: &mut StdRng, qf_depth: usize, letters: usize) -> Formula {
    let mut conj = vec![Formula::forall(Var::X, Formula::forall(Var::Y, random_qf(rng, qf_depth, letters)))];
    for _ in 0..rng.random_range(1..=2) {
        conj.push(Formula::forall(Var::X, Formula::exists(Var::Y, random_qf(rng, qf_depth, letters))));
    }
    Formula::conj(conj)
}

pub fn holds(m: &ValuedPermutation, f: &Formula) -> bool {
    eval_formula(m, f, &Assignment::default()).unwrap()
}

/// Size-`n` permutation containing a `↘` run of length `len` at a random
/// position; the remaining rows go to the remaining columns at random.
pub fn perm_with_run(rng: &mut StdRng, n: usize, len: usize) -> Permutation {
    let i = rng.random_range(1..=n - len + 1);
    let j = rng.random_range(1..=n - len + 1);
    let mut rest: Vec<usize> = (1..=n).filter(|c| *c < j || *c >= j + len).collect();
    rest.shuffle(rng);
    let mut it = rest.into_iter();
    let row_to_col = (1..=n).map(|r| if r >= i && r < i + len { j + r - i } else { it.next().unwrap() }).collect();
    Permutation::from_row_to_col(row_to_col).unwrap()
}

/// Valuations drawn from `palette` with the first entry favoured.
pub fn skewed_sigma(rng: &mut StdRng, n: usize, palette: &[Valuation], bias: f64) -> Vec<Valuation> {
    (0..n)
        .map(|_| if rng.random_bool(bias) { palette[0].clone() } else { palette[rng.random_range(0..palette.len())].clone() })
        .collect()
}

/// A sentence of the shape from [`random_snf_sentence`] that `m` satisfies
/// and some other random model of the same letters does not.
pub fn sentence_for(rng: &mut StdRng, m: &ValuedPermutation, letters: usize, tries: usize) -> Option<Formula> {
    for _ in 0..tries {
        let f = random_snf_sentence(rng, 2, letters);
        if !holds(m, &f) {
            continue;
        }
        let falsified = (0..20).any(|_| !holds(&random_model(rng, 4, letters), &f));
        if falsified {
            return Some(f);
        }
    }
    None
}

/// An instance of the cut hypothesis: rows `r < r2` of a `↘` block, with
/// row `r2 + 1` still in the block, matching valuations at rows r-1/r2-1,
/// r/r2 and r+1/r2+1, and three copies of every valuation of rows r..=r2
/// left in the block outside those rows.
pub fn cut_candidates(m: &ValuedPermutation) -> Vec<(usize, usize)> {
    let s = |r: usize| m.at_row(r).clone();
    let mut out = Vec::new();
    for b in maximal_blocks(m.perm()).into_iter().filter(|b| b.btype == BlockType::Desc) {
        let last = b.i + b.k;
        for r in b.i.max(2)..last {
            for r2 in r + 1..last {
                if s(r) != s(r2) || s(r - 1) != s(r2 - 1) || s(r + 1) != s(r2 + 1) {
                    continue;
                }
                let spare = |v: &Valuation| (b.i..=last).filter(|&t| (t < r || t > r2) && s(t) == *v).count();
                if (r..=r2).all(|t| spare(&s(t)) >= 3) {
                    out.push((r, r2));
                }
            }
        }
    }
    out
}

/// Red/green marking: red blocks hold up to `reds` elements of every
/// valuation, green blocks one non-red representative per header. Returns
/// (target, donor) pairs where the target's fingerprint differs from every
/// marked fingerprint and the donor is green with the same header and size.
pub fn replace_candidates(m: &ValuedPermutation, reds: usize) -> Vec<(Block, Fingerprint)> {
    let fps: Vec<(Block, Fingerprint)> = maximal_blocks(m.perm()).into_iter().map(|b| (b, fingerprint_of(m, &b).unwrap())).collect();
    let mut red = BTreeSet::new();
    let mut seen: std::collections::BTreeMap<Valuation, usize> = Default::default();
    for (idx, (b, _)) in fps.iter().enumerate() {
        for e in b.elements() {
            let c = seen.entry(m.val(e).unwrap().clone()).or_default();
            if *c < reds {
                *c += 1;
                red.insert(idx);
            }
        }
    }
    let mut green = std::collections::BTreeMap::new();
    for (idx, (_, fp)) in fps.iter().enumerate() {
        if !red.contains(&idx) {
            green.entry(fp.header()).or_insert(idx);
        }
    }
    let marked: BTreeSet<&Fingerprint> = red.iter().chain(green.values()).map(|&i| &fps[i].1).collect();
    let mut out = Vec::new();
    for (b, fp) in &fps {
        if marked.contains(fp) {
            continue;
        }
        if let Some(&g) = green.get(&fp.header()) {
            if fps[g].1.seq.len() == fp.seq.len() {
                out.push((*b, fps[g].1.clone()));
            }
        }
    }
    out
}
