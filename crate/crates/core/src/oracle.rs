//! Exhaustive reference procedures. Slow and obvious on purpose: they are
//! the ground truth the structured procedures are tested against.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::automata::{Nfa, ParikhVector};
use crate::error::{Error, Result};
use crate::logic::{eval_formula, Assignment, Formula};
use crate::perm::{all_permutations, LabeledPermutation, Permutation, Valuation, ValuedPermutation};
use crate::rlp::{verify_witness, Diagonal, LabelRestriction, RlpInstance};

#[derive(Clone, Debug)]
pub struct SearchBudget {
    pub max_n: usize,
    pub max_letters: usize,
    pub time_cap: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_n: 5, max_letters: 3, time_cap: Duration::from_secs(60) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<T> {
    Found(T),
    NoneWithin(usize),
    Timeout,
}

impl<T> Verdict<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            Verdict::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// First model of `phi` in the order: size, permutation (lexicographic),
/// then valuations as a binary counter over (row, letter) with the last
/// row's last letter varying fastest.
pub fn brute_sat(phi: &Formula, budget: &SearchBudget) -> Result<Verdict<ValuedPermutation>> {
    if !phi.is_closed() {
        return Err(Error::NotClosed(phi.to_string()));
    }
    let letters: Vec<String> = phi.letters().into_iter().collect();
    if letters.len() > budget.max_letters {
        return Err(Error::pre(format!("{} letters exceed the budget of {}", letters.len(), budget.max_letters)));
    }
    let start = Instant::now();
    for n in 1..=budget.max_n {
        let bits = n * letters.len();
        for p in all_permutations(n) {
            for code in 0u64..(1u64 << bits) {
                if code % 256 == 0 && start.elapsed() > budget.time_cap {
                    return Ok(Verdict::Timeout);
                }
                let sigma = (0..n)
                    .map(|r| {
                        let mut v = Valuation::empty();
                        for (k, l) in letters.iter().enumerate() {
                            if code >> (bits - 1 - (r * letters.len() + k)) & 1 == 1 {
                                v.insert(l);
                            }
                        }
                        v
                    })
                    .collect();
                let m = ValuedPermutation::new(p.clone(), sigma)?;
                if eval_formula(&m, phi, &Assignment::default())? {
                    return Ok(Verdict::Found(m));
                }
            }
        }
    }
    Ok(Verdict::NoneWithin(budget.max_n))
}

/// First witness of `inst` with at most `max_n` elements. Row words are
/// taken in length-then-lexicographic order; columns are filled by plain
/// backtracking over all label-compatible choices.
pub fn brute_rlp(inst: &RlpInstance, max_n: usize, time_cap: Duration) -> Result<Verdict<LabeledPermutation<usize>>> {
    if max_n < 1 {
        return Err(Error::pre("max_n must be at least 1"));
    }
    let start = Instant::now();
    let k = inst.alphabet.len();
    for n in 1..=max_n {
        let rows = words_of_length(&inst.nfa1, n);
        let cols = words_of_length(&inst.nfa2, n);
        for w1 in &rows {
            let v = ParikhVector::of_word(k, w1);
            for w2 in cols.iter().filter(|w| ParikhVector::of_word(k, w) == v) {
                if start.elapsed() > time_cap {
                    return Ok(Verdict::Timeout);
                }
                let mut assignment = Vec::new();
                let mut used = vec![false; n];
                if fill(w1, w2, &inst.restrictions, &mut assignment, &mut used) {
                    let perm = Permutation::from_row_to_col(assignment.iter().map(|c| c + 1).collect())?;
                    let lp = LabeledPermutation::new(perm, w1.clone())?;
                    if !verify_witness(&lp, inst)? {
                        return Err(Error::Solver("oracle produced an invalid witness".into()));
                    }
                    return Ok(Verdict::Found(lp));
                }
            }
        }
    }
    Ok(Verdict::NoneWithin(max_n))
}

fn fill(w1: &[usize], w2: &[usize], rs: &BTreeSet<LabelRestriction>, cols: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let r = cols.len();
    if r == w1.len() {
        return true;
    }
    for c in 0..w2.len() {
        if used[c] || w2[c] != w1[r] {
            continue;
        }
        if let Some(&prev) = cols.last() {
            // element of row r sits south-east of row r-1's when c = prev + 1
            let se = c == prev + 1 && rs.contains(&LabelRestriction { a: w1[r - 1], t: Diagonal::SE, b: w1[r] });
            // and row r-1's sits north-east of row r's when prev = c + 1
            let ne = prev == c + 1 && rs.contains(&LabelRestriction { a: w1[r], t: Diagonal::NE, b: w1[r - 1] });
            if se || ne {
                continue;
            }
        }
        used[c] = true;
        cols.push(c);
        if fill(w1, w2, rs, cols, used) {
            return true;
        }
        cols.pop();
        used[c] = false;
    }
    false
}

/// Accepted words of exactly length `n`, lexicographic.
fn words_of_length(a: &Nfa, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut word = Vec::new();
    extend(a, &a.initial, n, &mut word, &mut out);
    out
}

fn extend(a: &Nfa, states: &BTreeSet<usize>, n: usize, word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if word.len() == n {
        if states.iter().any(|q| a.accepting.contains(q)) {
            out.push(word.clone());
        }
        return;
    }
    for x in 0..a.alphabet.len() {
        let next: BTreeSet<usize> = a.transitions.iter().filter(|t| t.1 == x && states.contains(&t.0)).map(|t| t.2).collect();
        if !next.is_empty() {
            word.push(x);
            extend(a, &next, n, word, out);
            word.pop();
        }
    }
}

/// Parikh vectors of all accepted words of length at most `max_len`.
pub fn brute_parikh(a: &Nfa, max_len: usize) -> BTreeSet<ParikhVector> {
    (0..=max_len)
        .flat_map(|n| words_of_length(a, n))
        .map(|w| ParikhVector::of_word(a.alphabet.len(), &w))
        .collect()
}
