//! Fingerprint consistency, the reduction from satisfiability to restricted
//! labeled permutations, and a bounded satisfiability procedure built on them.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::time::{Duration, Instant};

use crate::automata::Nfa;
use crate::error::{Error, Result};
use crate::logic::{atomic_sat, eval_formula, to_snf, Assignment, AtomContext, Formula, SnfFormula};
use crate::oracle::{brute_sat, SearchBudget, Verdict};
use crate::perm::{
    all_permutations, fingerprints, summary_of, BlockType, Fingerprint, LabeledPermutation, NeighborhoodType,
    Permutation, Summary, Valuation, ValuedPermutation, COUNT_CAP,
};
use crate::rlp::{solve_rlp, verify_witness, Diagonal, LabelRestriction, RlpInstance, RlpOutcome, SolveOptions};

/// Valuations that occur and how often, capped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyContext {
    pub valuations: BTreeSet<Valuation>,
    /// `buckets[i]` holds the valuations occurring exactly `i + 1` times.
    pub buckets: Vec<BTreeSet<Valuation>>,
}

impl ConsistencyContext {
    pub fn new(valuations: BTreeSet<Valuation>, buckets: Vec<BTreeSet<Valuation>>) -> Result<Self> {
        if buckets.len() != COUNT_CAP - 1 {
            return Err(Error::pre(format!("expected {} buckets", COUNT_CAP - 1)));
        }
        let mut seen = BTreeSet::new();
        for v in buckets.iter().flatten() {
            if !valuations.contains(v) || !seen.insert(v) {
                return Err(Error::pre(format!("bucketed valuation {v} must occur once among the valuations")));
            }
        }
        Ok(ConsistencyContext { valuations, buckets })
    }

    pub fn of_summary(s: &Summary) -> Self {
        ConsistencyContext { valuations: s.valuations.clone(), buckets: s.buckets.clone() }
    }

    pub fn capped_count(&self, v: &Valuation) -> usize {
        if !self.valuations.contains(v) {
            return 0;
        }
        self.buckets.iter().position(|b| b.contains(v)).map_or(COUNT_CAP, |i| i + 1)
    }
}

/// Elements a block element can see at a bounded neighborhood type, with
/// the type from the element to them. Every other element is far away.
fn neighbors(tau: &Fingerprint, i: usize) -> Vec<(NeighborhoodType, Valuation)> {
    use NeighborhoodType::*;
    let l = tau.seq.len();
    let mut out = vec![(Same, tau.seq[i].clone())];
    let (up, down) = match tau.btype {
        BlockType::Asc => (NE, SW),
        _ => (NW, SE),
    };
    if i > 0 {
        out.push((up, tau.seq[i - 1].clone()));
    } else if let Some(v) = &tau.r_minus {
        out.push((N, v.clone()));
    }
    if i + 1 < l {
        out.push((down, tau.seq[i + 1].clone()));
    } else if let Some(v) = &tau.r_plus {
        out.push((S, v.clone()));
    }
    // the leftmost element is the first in row order unless the block ascends
    let (left, right) = match tau.btype {
        BlockType::Asc => (l - 1, 0),
        _ => (0, l - 1),
    };
    if i == left {
        if let Some(v) = &tau.d_minus {
            out.push((W, v.clone()));
        }
    }
    if i == right {
        if let Some(v) = &tau.d_plus {
            out.push((E, v.clone()));
        }
    }
    out
}

/// Valuations some element at infinite distance from element `i` carries.
fn far_valuations<'a>(ctx: &'a ConsistencyContext, near: &[(NeighborhoodType, Valuation)]) -> Vec<&'a Valuation> {
    ctx.valuations
        .iter()
        .filter(|g| ctx.capped_count(g) > near.iter().filter(|(_, v)| v == *g).count())
        .collect()
}

/// Consistency with `∀y chi`, also returning the number of atomic checks made.
pub fn consistent_universal_counted(tau: &Fingerprint, chi: &Formula, ctx: &ConsistencyContext) -> (bool, usize) {
    let mut work = 0;
    for i in 0..tau.seq.len() {
        let a = &tau.seq[i];
        let near = neighbors(tau, i);
        for (t, v) in &near {
            work += 1;
            if !atomic_sat(&AtomContext { s: a, t: *t, s2: v }, chi) {
                return (false, work);
            }
        }
        for g in far_valuations(ctx, &near) {
            work += 1;
            if !atomic_sat(&AtomContext { s: a, t: NeighborhoodType::Far, s2: g }, chi) {
                return (false, work);
            }
        }
    }
    (true, work)
}

/// Every element of a block with fingerprint `tau` satisfies `∀y chi`, in
/// any model whose valuation counts are described by `ctx`.
pub fn consistent_universal(tau: &Fingerprint, chi: &Formula, ctx: &ConsistencyContext) -> bool {
    consistent_universal_counted(tau, chi, ctx).0
}

/// Every element of the block has some `y` with `psi`.
pub fn consistent_existential(tau: &Fingerprint, psi: &Formula, ctx: &ConsistencyContext) -> bool {
    (0..tau.seq.len()).all(|i| {
        let a = &tau.seq[i];
        let near = neighbors(tau, i);
        near.iter().any(|(t, v)| atomic_sat(&AtomContext { s: a, t: *t, s2: v }, psi))
            || far_valuations(ctx, &near)
                .into_iter()
                .any(|g| atomic_sat(&AtomContext { s: a, t: NeighborhoodType::Far, s2: g }, psi))
    })
}

pub fn consistent_with(tau: &Fingerprint, snf: &SnfFormula, ctx: &ConsistencyContext) -> bool {
    consistent_universal(tau, &snf.chi, ctx) && snf.psis.iter().all(|p| consistent_existential(tau, p, ctx))
}

#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub instance: RlpInstance,
    pub summary: Summary,
    /// Fingerprint behind each letter of the instance alphabet.
    pub letters: Vec<Fingerprint>,
}

const STATE_LIMIT: usize = 200_000;

/// Build the instance whose witnesses are the block layouts of models with
/// exactly the fingerprints and valuation counts of `summary`.
pub fn reduce_to_rlp(snf: &SnfFormula, summary: &Summary) -> Result<ReductionOutput> {
    let ctx = ConsistencyContext::of_summary(summary);
    let letters: Vec<Fingerprint> = summary.fingerprints.iter().cloned().collect();
    if letters.is_empty() {
        return Err(Error::pre("a summary needs at least one fingerprint"));
    }
    if letters.len() > 63 {
        return Err(Error::Overflow("more than 63 fingerprints".into()));
    }
    for tau in &letters {
        if !consistent_with(tau, snf, &ctx) {
            return Err(Error::Inconsistent(tau.to_string()));
        }
    }
    let alphabet: Vec<String> = (0..letters.len()).map(|i| format!("f{i}")).collect();
    let nfa1 = row_language(&letters, &ctx, &alphabet)?;
    let nfa2 = column_language(&letters, &alphabet)?;
    let mut restrictions = BTreeSet::new();
    for (a, ta) in letters.iter().enumerate() {
        for (b, tb) in letters.iter().enumerate() {
            // two blocks that would join into a longer diagonal run
            if ta.btype != BlockType::Asc && tb.btype != BlockType::Asc {
                restrictions.insert(LabelRestriction { a, t: Diagonal::SE, b });
            }
            if ta.btype != BlockType::Desc && tb.btype != BlockType::Desc {
                restrictions.insert(LabelRestriction { a, t: Diagonal::NE, b });
            }
        }
    }
    let instance = RlpInstance::new(alphabet, restrictions, nfa1, nfa2)?;
    Ok(ReductionOutput { instance, summary: summary.clone(), letters })
}

fn overlaps(prev: &[Option<Valuation>], next: &[Option<Valuation>]) -> bool {
    let p = prev.len();
    prev[p - 1].is_some() && next[0].is_some() && prev[p - 1] == next[1] && next[0] == prev[p - 2]
}

/// Automaton over `(last letter, seen set, extra)` states discovered breadth first.
fn explore<K: Clone + Eq + std::hash::Hash>(
    alphabet: &[String],
    letters: usize,
    start: impl Fn(usize) -> Option<K>,
    step: impl Fn(&K, usize) -> Option<K>,
    accept: impl Fn(&K) -> bool,
) -> Result<Nfa> {
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut transitions = BTreeSet::new();
    let mut accepting = BTreeSet::new();
    let intern = |k: K, index: &mut HashMap<K, usize>, queue: &mut VecDeque<K>| -> Result<usize> {
        if let Some(&i) = index.get(&k) {
            return Ok(i);
        }
        let i = index.len() + 1;
        if i > STATE_LIMIT {
            return Err(Error::Overflow("reduction automaton too large".into()));
        }
        index.insert(k.clone(), i);
        queue.push_back(k);
        Ok(i)
    };
    for a in 0..letters {
        if let Some(k) = start(a) {
            let j = intern(k, &mut index, &mut queue)?;
            transitions.insert((0, a, j));
        }
    }
    while let Some(k) = queue.pop_front() {
        let i = index[&k];
        if accept(&k) {
            accepting.insert(i);
        }
        for a in 0..letters {
            if let Some(k2) = step(&k, a) {
                let j = intern(k2, &mut index, &mut queue)?;
                transitions.insert((i, a, j));
            }
        }
    }
    Ok(Nfa::new(alphabet.to_vec(), index.len() + 1, [0].into(), accepting, transitions)?.trim())
}

fn row_language(letters: &[Fingerprint], ctx: &ConsistencyContext, alphabet: &[String]) -> Result<Nfa> {
    let vals: Vec<&Valuation> = ctx.valuations.iter().collect();
    let need: Vec<u8> = vals.iter().map(|v| ctx.capped_count(v) as u8).collect();
    let strings: Vec<Vec<Option<Valuation>>> = letters.iter().map(Fingerprint::row_string).collect();
    let full: u64 = (1u64 << letters.len()) - 1;
    let add = |counts: &[u8], a: usize| -> Option<Vec<u8>> {
        let mut c = counts.to_vec();
        for v in &letters[a].seq {
            let k = vals.iter().position(|w| *w == v)?;
            c[k] = (c[k] + 1).min(COUNT_CAP as u8);
            if need[k] < COUNT_CAP as u8 && c[k] > need[k] {
                return None;
            }
        }
        Some(c)
    };
    explore(
        alphabet,
        letters.len(),
        |a| {
            if letters[a].r_minus.is_some() {
                return None;
            }
            Some((a, 1u64 << a, add(&vec![0; vals.len()], a)?))
        },
        |(last, mask, counts), a| {
            if !overlaps(&strings[*last], &strings[a]) {
                return None;
            }
            Some((a, mask | 1 << a, add(counts, a)?))
        },
        |(last, mask, counts)| letters[*last].r_plus.is_none() && *mask == full && *counts == need,
    )
}

fn column_language(letters: &[Fingerprint], alphabet: &[String]) -> Result<Nfa> {
    let strings: Vec<Vec<Option<Valuation>>> = letters.iter().map(Fingerprint::col_string).collect();
    let full: u64 = (1u64 << letters.len()) - 1;
    explore(
        alphabet,
        letters.len(),
        |a| letters[a].d_minus.is_none().then_some((a, 1u64 << a)),
        |(last, mask), a| overlaps(&strings[*last], &strings[a]).then_some((a, mask | 1 << a)),
        |(last, mask)| letters[*last].d_plus.is_none() && *mask == full,
    )
}

/// Replace every letter of a witness by its block.
pub fn expand_witness(lp: &LabeledPermutation<usize>, letters: &[Fingerprint]) -> Result<ValuedPermutation> {
    let n = lp.n();
    let len = |r: usize| letters[lp.labels[r - 1]].seq.len();
    let mut row_start = vec![0; n + 1];
    let mut next = 1;
    for r in 1..=n {
        row_start[r] = next;
        next += len(r);
    }
    let mut col_start = vec![0; n + 1];
    next = 1;
    for c in 1..=n {
        col_start[c] = next;
        next += len(lp.perm.row_of(c));
    }
    let mut cells = Vec::new();
    for r in 1..=n {
        let tau = &letters[lp.labels[r - 1]];
        let (r0, c0, l) = (row_start[r], col_start[lp.perm.col_of(r)], tau.seq.len());
        for (i, v) in tau.seq.iter().enumerate() {
            let c = match tau.btype {
                BlockType::Asc => c0 + l - 1 - i,
                _ => c0 + i,
            };
            cells.push(((r0 + i, c), v.clone()));
        }
    }
    ValuedPermutation::standardize(&cells)
}

/// The layout of `m`'s blocks as a witness over `letters`.
pub fn block_skeleton(m: &ValuedPermutation, letters: &[Fingerprint]) -> Result<LabeledPermutation<usize>> {
    let fps = fingerprints(m);
    let mut cells = Vec::new();
    for (b, f) in &fps {
        let a = letters.iter().position(|t| t == f).ok_or_else(|| Error::pre("fingerprint missing from the alphabet"))?;
        cells.push(((b.i, b.j), a));
    }
    // cells are in row order; rank the columns
    let mut cols: Vec<usize> = cells.iter().map(|((_, j), _)| *j).collect();
    cols.sort_unstable();
    let row_to_col = cells.iter().map(|((_, j), _)| cols.binary_search(j).unwrap() + 1).collect();
    LabeledPermutation::new(Permutation::from_row_to_col(row_to_col)?, cells.into_iter().map(|(_, a)| a).collect())
}

#[derive(Clone, Debug)]
pub struct SatBounds {
    pub max_fingerprints: usize,
    pub max_block_len: usize,
    pub parikh_cap: Option<u64>,
    /// Largest candidate model used to propose summaries.
    pub max_size: usize,
    /// Time given to the solver per summary before the skeleton is used.
    pub solver_time: Duration,
}

impl Default for SatBounds {
    fn default() -> Self {
        SatBounds { max_fingerprints: 6, max_block_len: 3, parikh_cap: None, max_size: 5, solver_time: Duration::from_secs(2) }
    }
}

impl SatBounds {
    pub fn describe(&self) -> String {
        format!(
            "max-fingerprints={} block-len={} parikh-cap={} max-size={}",
            self.max_fingerprints,
            self.max_block_len,
            self.parikh_cap.map_or("auto".to_string(), |c| c.to_string()),
            self.max_size
        )
    }
}

/// How a satisfying model was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelSource {
    /// Expanded from a witness found by the solver.
    Solver,
    /// Expanded from the block layout of the proposing model, after the
    /// solver ran out of time on the instance.
    Skeleton,
    /// Found by exhaustive search.
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatOutcome {
    Sat { model: ValuedPermutation, source: ModelSource },
    UnsatWithinBounds(String),
}

/// Bounded satisfiability. Candidate summaries are those of models with at
/// most `max_size` elements, in size-then-lexicographic order; each one
/// whose fingerprints are all consistent is reduced and solved, and the
/// resulting model is checked against `phi` before it is reported.
pub fn decide_sat(phi: &Formula, bounds: &SatBounds) -> Result<SatOutcome> {
    if bounds.max_fingerprints < 1 || bounds.max_block_len < 1 || bounds.max_size < 1 {
        return Err(Error::pre("bounds must be at least 1"));
    }
    let snf = to_snf(phi)?;
    let letters: Vec<String> = phi.letters().into_iter().collect();
    let mut tried: BTreeSet<Summary> = BTreeSet::new();
    for n in 1..=bounds.max_size {
        let bits = n * letters.len();
        if bits >= 32 {
            return Err(Error::Overflow("too many valuation bits".into()));
        }
        for p in all_permutations(n) {
            if crate::perm::maximal_blocks(&p).iter().any(|b| b.len() > bounds.max_block_len) {
                continue;
            }
            for code in 0u64..(1u64 << bits) {
                let sigma = (0..n)
                    .map(|r| {
                        Valuation(
                            (0..letters.len())
                                .filter(|k| code >> (r * letters.len() + k) & 1 == 1)
                                .map(|k| letters[k].clone())
                                .collect(),
                        )
                    })
                    .collect();
                let m = snf.expand(&ValuedPermutation::new(p.clone(), sigma)?);
                let summary = summary_of(&m);
                if summary.fingerprints.len() > bounds.max_fingerprints || !tried.insert(summary.clone()) {
                    continue;
                }
                let ctx = ConsistencyContext::of_summary(&summary);
                if !summary.fingerprints.iter().all(|t| consistent_with(t, &snf, &ctx)) {
                    continue;
                }
                let (model, source) = solve_summary(&snf, &summary, &m, bounds)?;
                let restricted = model.map_valuations(|v| v.restrict(&phi.letters()));
                if !eval_formula(&restricted, phi, &Assignment::default())? {
                    return Err(Error::Solver(format!("reconstructed model fails the formula:\n{restricted:?}")));
                }
                return Ok(SatOutcome::Sat { model: restricted, source });
            }
        }
    }
    Ok(SatOutcome::UnsatWithinBounds(bounds.describe()))
}

fn solve_summary(
    snf: &SnfFormula,
    summary: &Summary,
    proposer: &ValuedPermutation,
    bounds: &SatBounds,
) -> Result<(ValuedPermutation, ModelSource)> {
    let red = reduce_to_rlp(snf, summary)?;
    let opts = SolveOptions {
        parikh_cap: bounds.parikh_cap,
        deadline: Some(Instant::now() + bounds.solver_time),
        ..SolveOptions::default()
    };
    let (witness, source) = match solve_rlp(&red.instance, &opts) {
        Ok(RlpOutcome::Witness(lp)) => (lp, ModelSource::Solver),
        Ok(RlpOutcome::NoWitness { .. }) | Err(Error::Timeout) => {
            let lp = block_skeleton(proposer, &red.letters)?;
            if !verify_witness(&lp, &red.instance)? {
                return Err(Error::Solver("block layout of a consistent model is not a witness".into()));
            }
            (lp, ModelSource::Skeleton)
        }
        Err(e) => return Err(e),
    };
    let model = expand_witness(&witness, &red.letters)?;
    if summary_of(&model) != *summary {
        return Err(Error::Solver("expanded witness has a different summary".into()));
    }
    Ok((model, source))
}

/// Exhaustive search instead of the structured procedure.
pub fn decide_sat_oracle(phi: &Formula, max_size: usize, time_cap: Duration) -> Result<Option<SatOutcome>> {
    let budget = SearchBudget { max_n: max_size, max_letters: usize::MAX, time_cap };
    Ok(match brute_sat(phi, &budget)? {
        Verdict::Found(model) => Some(SatOutcome::Sat { model, source: ModelSource::Oracle }),
        Verdict::NoneWithin(n) => Some(SatOutcome::UnsatWithinBounds(format!("oracle max-size={n}"))),
        Verdict::Timeout => None,
    })
}

/// Fingerprints of a model grouped by letter, for display.
pub fn fingerprint_table(m: &ValuedPermutation) -> BTreeMap<Fingerprint, usize> {
    let mut out = BTreeMap::new();
    for (_, f) in fingerprints(m) {
        *out.entry(f).or_default() += 1;
    }
    out
}
