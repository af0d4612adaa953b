//! Restricted labeled permutations: find a labeled permutation whose row
//! word lies in one regular language, whose column word lies in another,
//! and which avoids forbidden diagonal label pairs.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::time::Instant;

use crate::automata::{
    common_image, compile_regex, default_parikh_cap, nfa_intersect, parse_nfa_block, split_content_lines, write_nfa,
    CountBound, Nfa, ParikhVector, Regex,
};
use crate::constraints::{sparse_layer, GridDomain, RLP_THRESHOLD};
use crate::error::{Error, Result};
use crate::perm::{all_permutations, Dir, LabeledPermutation, Permutation};

/// The two diagonal neighborhood types a restriction can forbid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Diagonal {
    /// `↗`
    NE,
    /// `↘`
    SE,
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Diagonal::NE => "NE",
            Diagonal::SE => "SE",
        })
    }
}

/// `(a, t, b)`: no `b`-labeled element may sit at direction `t` from an `a`-labeled one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelRestriction {
    pub a: usize,
    pub t: Diagonal,
    pub b: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RlpInstance {
    pub alphabet: Vec<String>,
    pub restrictions: BTreeSet<LabelRestriction>,
    pub nfa1: Nfa,
    pub nfa2: Nfa,
}

impl RlpInstance {
    pub fn new(alphabet: Vec<String>, restrictions: BTreeSet<LabelRestriction>, nfa1: Nfa, nfa2: Nfa) -> Result<Self> {
        if nfa1.alphabet != alphabet || nfa2.alphabet != alphabet {
            return Err(Error::AlphabetMismatch("automata must use the instance alphabet".into()));
        }
        if restrictions.iter().any(|r| r.a >= alphabet.len() || r.b >= alphabet.len()) {
            return Err(Error::pre("restriction mentions a letter outside the alphabet"));
        }
        Ok(RlpInstance { alphabet, restrictions, nfa1, nfa2 })
    }
}

/// First pair of elements `(e1, e2)` where `e2` sits at a forbidden diagonal from `e1`.
pub fn restriction_violation<L: Clone>(
    lp: &LabeledPermutation<L>,
    restrictions: &BTreeSet<LabelRestriction>,
    letter: impl Fn(&L) -> Option<usize>,
) -> Option<((usize, usize), (usize, usize))> {
    let p = &lp.perm;
    for r in 1..p.n() {
        let (c, c2) = (p.col_of(r), p.col_of(r + 1));
        let (lower, upper) = (letter(&lp.labels[r]), letter(&lp.labels[r - 1]));
        let (Some(lo), Some(up)) = (lower, upper) else { continue };
        if c2 == c + 1 && restrictions.contains(&LabelRestriction { a: up, t: Diagonal::SE, b: lo }) {
            return Some(((r, c), (r + 1, c2)));
        }
        if c2 + 1 == c && restrictions.contains(&LabelRestriction { a: lo, t: Diagonal::NE, b: up }) {
            return Some(((r + 1, c2), (r, c)));
        }
    }
    None
}

/// Guessed number of occurrences of a letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Count {
    Exactly(usize),
    Many,
}

/// Label of the small permutation: a light letter or the placeholder `□`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SmallLabel {
    Letter(usize),
    Box,
}

impl SmallLabel {
    fn letter(&self) -> Option<usize> {
        match self {
            SmallLabel::Letter(a) => Some(*a),
            SmallLabel::Box => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guess {
    pub g: Vec<Count>,
    /// `None` when the small permutation is empty.
    pub small: Option<LabeledPermutation<SmallLabel>>,
}

impl Guess {
    pub fn heavy(&self) -> BTreeSet<usize> {
        (0..self.g.len()).filter(|&a| self.g[a] == Count::Many).collect()
    }

    fn light_total(&self) -> usize {
        self.g.iter().map(|c| if let Count::Exactly(k) = c { *k } else { 0 }).sum()
    }

    fn projection(&self, dir: Dir) -> Vec<SmallLabel> {
        self.small.as_ref().map(|s| s.projection(dir)).unwrap_or_default()
    }
}

/// Why a guess was rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GuessDefect {
    /// A light letter does not occur exactly as guessed.
    CountMismatch,
    /// A heavy letter, or a count above the threshold, appears in the guess.
    HeavyInSmall,
    /// Some square region holds two or more elements, all placeholders.
    BoxZone,
    /// Placeholders present without heavy letters, or absent with them.
    BoxWithoutHeavy,
    /// The small permutation violates a restriction.
    Restriction,
    /// More elements than the zone argument allows.
    TooLarge,
}

/// Check the conditions a guess must satisfy.
pub fn validate_guess(
    guess: &Guess,
    restrictions: &BTreeSet<LabelRestriction>,
    theta: usize,
) -> std::result::Result<(), GuessDefect> {
    if guess.g.iter().any(|c| matches!(c, Count::Exactly(k) if *k > theta)) {
        return Err(GuessDefect::HeavyInSmall);
    }
    let light = guess.light_total();
    let Some(small) = &guess.small else {
        return if light == 0 { if guess.heavy().is_empty() { Ok(()) } else { Err(GuessDefect::BoxWithoutHeavy) } } else { Err(GuessDefect::CountMismatch) };
    };
    if small.n() > light + (1 + light) * (1 + light) {
        return Err(GuessDefect::TooLarge);
    }
    let mut counts = vec![0usize; guess.g.len()];
    let mut boxes = Vec::new();
    for (e, l) in small.perm.elements().zip(&small.labels) {
        match l {
            SmallLabel::Letter(a) => {
                if *a >= guess.g.len() || guess.g[*a] == Count::Many {
                    return Err(GuessDefect::HeavyInSmall);
                }
                counts[*a] += 1;
            }
            SmallLabel::Box => boxes.push(e),
        }
    }
    for (a, c) in guess.g.iter().enumerate() {
        if let Count::Exactly(k) = c {
            if counts[a] != *k {
                return Err(GuessDefect::CountMismatch);
            }
        }
    }
    if boxes.is_empty() != guess.heavy().is_empty() {
        return Err(GuessDefect::BoxWithoutHeavy);
    }
    if box_zone(small, &boxes).is_some() {
        return Err(GuessDefect::BoxZone);
    }
    if restriction_violation(small, restrictions, SmallLabel::letter).is_some() {
        return Err(GuessDefect::Restriction);
    }
    Ok(())
}

/// A square region containing at least two placeholders and no letter.
///
/// For a pair of placeholders only the squares of the least side containing
/// both need checking: any larger square containing them contains one of those.
fn box_zone(small: &LabeledPermutation<SmallLabel>, boxes: &[(usize, usize)]) -> Option<(usize, usize, usize)> {
    let letters: Vec<(usize, usize)> = small
        .perm
        .elements()
        .zip(&small.labels)
        .filter(|(_, l)| **l != SmallLabel::Box)
        .map(|(e, _)| e)
        .collect();
    for (i, p) in boxes.iter().enumerate() {
        for q in &boxes[i + 1..] {
            let (r0, r1) = (p.0.min(q.0), p.0.max(q.0));
            let (c0, c1) = (p.1.min(q.1), p.1.max(q.1));
            let side = (r1 - r0).max(c1 - c0);
            let n = small.n();
            for top in r1.saturating_sub(side).max(1)..=r0.min(n - side) {
                for left in c1.saturating_sub(side).max(1)..=c0.min(n - side) {
                    let inside = |e: &&(usize, usize)| e.0 >= top && e.0 <= top + side && e.1 >= left && e.1 <= left + side;
                    if !letters.iter().any(|e| inside(&e)) {
                        return Some((top, left, side));
                    }
                }
            }
        }
    }
    None
}

/// Knobs of the search.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub theta: usize,
    /// Per-edge flow cap; `None` uses [`default_parikh_cap`].
    pub parikh_cap: Option<u64>,
    /// Longest words tried by exact completion when layering is unavailable.
    pub fallback_len: usize,
    pub deadline: Option<Instant>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { theta: RLP_THRESHOLD, parikh_cap: None, fallback_len: 8, deadline: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RlpOutcome {
    Witness(LabeledPermutation<usize>),
    /// No witness for any guess at this threshold and flow cap.
    NoWitness { theta: usize, parikh_cap: u64 },
}

/// Place the light letters of `guess` and layer each heavy letter with
/// [`sparse_layer`], producing a permutation with row word `w1` and column
/// word `w2`.
pub fn build_witness(
    guess: &Guess,
    w1: &[usize],
    w2: &[usize],
    restrictions: &BTreeSet<LabelRestriction>,
    theta: usize,
) -> Result<LabeledPermutation<usize>> {
    let m = w1.len();
    if w2.len() != m || m == 0 {
        return Err(Error::pre("words must be nonempty and of equal length"));
    }
    let letters = guess.g.len();
    let pk = |w: &[usize]| ParikhVector::of_word(letters, w);
    if w1.iter().chain(w2).any(|&a| a >= letters) || pk(w1) != pk(w2) {
        return Err(Error::pre("words must have the same Parikh vector over the guess alphabet"));
    }
    for (a, c) in guess.g.iter().enumerate() {
        let k = pk(w1).0[a] as usize;
        match c {
            Count::Exactly(x) if *x != k => return Err(Error::pre(format!("letter {a} occurs {k} times, guessed {x}"))),
            Count::Many if k <= theta => return Err(Error::pre(format!("heavy letter {a} occurs only {k} times"))),
            _ => {}
        }
    }
    let light = |a: &usize| guess.g[*a] != Count::Many;
    let light_rows: Vec<usize> = (0..m).filter(|r| light(&w1[*r])).collect();
    let light_cols: Vec<usize> = (0..m).filter(|c| light(&w2[*c])).collect();
    let mut row_to_col = vec![0usize; m];
    let mut labels = vec![usize::MAX; m];
    let mut placed = BTreeSet::new();
    if let Some(small) = &guess.small {
        // rank of each light element among light elements, by row and by column
        let by_row: Vec<(usize, usize)> =
            small.perm.elements().zip(&small.labels).filter(|(_, l)| **l != SmallLabel::Box).map(|(e, _)| e).collect();
        let mut by_col = by_row.clone();
        by_col.sort_by_key(|e| e.1);
        if by_row.len() != light_rows.len() {
            return Err(Error::pre("light letter count differs from the guess"));
        }
        for (rho, e) in by_row.iter().enumerate() {
            let kappa = by_col.iter().position(|f| f == e).unwrap();
            let (r, c) = (light_rows[rho], light_cols[kappa]);
            let SmallLabel::Letter(a) = small.labels[e.0 - 1] else { unreachable!() };
            if w1[r] != a || w2[c] != a {
                return Err(Error::pre("words do not follow the guess's light letters"));
            }
            row_to_col[r] = c + 1;
            labels[r] = a;
            placed.insert((r + 1, c + 1));
        }
    } else if !light_rows.is_empty() {
        return Err(Error::pre("light letters present but the guess is empty"));
    }
    for a in guess.heavy() {
        let rows: Vec<usize> = (0..m).filter(|r| w1[*r] == a).map(|r| r + 1).collect();
        let cols: Vec<usize> = (0..m).filter(|c| w2[*c] == a).map(|c| c + 1).collect();
        let grid = GridDomain::new(rows, cols)?;
        let layer = sparse_layer(&grid, &placed, theta)?;
        for (r, c) in layer.elements {
            row_to_col[r - 1] = c;
            labels[r - 1] = a;
            placed.insert((r, c));
        }
    }
    let lp = LabeledPermutation::new(Permutation::from_row_to_col(row_to_col)?, labels)?;
    if restriction_violation(&lp, restrictions, |a| Some(*a)).is_some() {
        return Err(Error::LayerInfeasible("built permutation violates a restriction".into()));
    }
    Ok(lp)
}

/// Some labeled permutation with the given row and column words that
/// satisfies the restrictions, by backtracking row by row.
pub fn exact_completion(
    w1: &[usize],
    w2: &[usize],
    restrictions: &BTreeSet<LabelRestriction>,
) -> Option<LabeledPermutation<usize>> {
    let m = w1.len();
    if w2.len() != m || m == 0 {
        return None;
    }
    fn go(r: usize, w1: &[usize], w2: &[usize], rs: &BTreeSet<LabelRestriction>, used: &mut [bool], cols: &mut Vec<usize>) -> bool {
        if r == w1.len() {
            return true;
        }
        for c in 0..w2.len() {
            if used[c] || w2[c] != w1[r] {
                continue;
            }
            if r > 0 {
                let pc = cols[r - 1];
                let (up, lo) = (w1[r - 1], w1[r]);
                if c == pc + 1 && rs.contains(&LabelRestriction { a: up, t: Diagonal::SE, b: lo }) {
                    continue;
                }
                if c + 1 == pc && rs.contains(&LabelRestriction { a: lo, t: Diagonal::NE, b: up }) {
                    continue;
                }
            }
            used[c] = true;
            cols.push(c);
            if go(r + 1, w1, w2, rs, used, cols) {
                return true;
            }
            cols.pop();
            used[c] = false;
        }
        false
    }
    let mut used = vec![false; m];
    let mut cols = Vec::new();
    if !go(0, w1, w2, restrictions, &mut used, &mut cols) {
        return None;
    }
    let perm = Permutation::from_row_to_col(cols.iter().map(|c| c + 1).collect()).ok()?;
    LabeledPermutation::new(perm, w1.to_vec()).ok()
}

/// Both projections accepted and every restriction respected.
pub fn verify_witness(lp: &LabeledPermutation<usize>, inst: &RlpInstance) -> Result<bool> {
    if lp.labels.iter().any(|&a| a >= inst.alphabet.len()) {
        return Err(Error::AlphabetMismatch("witness label outside the alphabet".into()));
    }
    Ok(inst.nfa1.accepts(&lp.projection(Dir::Row))
        && inst.nfa2.accepts(&lp.projection(Dir::Col))
        && restriction_violation(lp, &inst.restrictions, |a| Some(*a)).is_none())
}

/// Words of `a` up to `max_len`, grouped by Parikh vector.
fn words_by_vector(a: &Nfa, max_len: usize) -> BTreeMap<ParikhVector, Vec<Vec<usize>>> {
    let mut out: BTreeMap<ParikhVector, Vec<Vec<usize>>> = BTreeMap::new();
    let mut stack: Vec<(BTreeSet<usize>, Vec<usize>)> = vec![(a.initial.clone(), Vec::new())];
    while let Some((states, word)) = stack.pop() {
        if states.iter().any(|q| a.accepting.contains(q)) && !word.is_empty() {
            out.entry(ParikhVector::of_word(a.alphabet.len(), &word)).or_default().push(word.clone());
        }
        if word.len() == max_len {
            continue;
        }
        for x in (0..a.alphabet.len()).rev() {
            let next: BTreeSet<usize> =
                a.transitions.iter().filter(|t| t.1 == x && states.contains(&t.0)).map(|t| t.2).collect();
            if !next.is_empty() {
                let mut w = word.clone();
                w.push(x);
                stack.push((next, w));
            }
        }
    }
    for ws in out.values_mut() {
        ws.sort();
    }
    out
}

struct Search<'a> {
    inst: &'a RlpInstance,
    opts: &'a SolveOptions,
    cap: u64,
    nfa1: Nfa,
    nfa2: Nfa,
    tried_pairs: HashSet<(Vec<usize>, Vec<usize>)>,
}

impl Search<'_> {
    fn tick(&self) -> Result<()> {
        match self.opts.deadline {
            Some(d) if Instant::now() > d => Err(Error::Timeout),
            _ => Ok(()),
        }
    }

    fn bounds(&self, g: &[Option<Count>]) -> Vec<CountBound> {
        g.iter()
            .map(|c| match c {
                None => CountBound::ANY,
                Some(Count::Exactly(k)) => CountBound::exactly(*k as u64),
                Some(Count::Many) => CountBound::at_least(self.opts.theta as u64 + 1),
            })
            .collect()
    }

    /// Canonical depth-first enumeration of count guesses with Parikh pruning.
    fn guesses(&mut self, g: &mut Vec<Option<Count>>) -> Result<Option<LabeledPermutation<usize>>> {
        self.tick()?;
        if !g.is_empty() && common_image(&self.nfa1, &self.nfa2, self.cap, &self.bounds(g))?.is_none() {
            return Ok(None);
        }
        let i = g.iter().position(Option::is_none);
        let Some(i) = i else {
            let full: Vec<Count> = g.iter().map(|c| c.unwrap()).collect();
            return self.with_counts(&full);
        };
        let choices: Vec<Count> = (0..=self.opts.theta).map(Count::Exactly).chain([Count::Many]).collect();
        for c in choices {
            g[i] = Some(c);
            if let Some(w) = self.guesses(g)? {
                return Ok(Some(w));
            }
        }
        g[i] = None;
        Ok(None)
    }

    fn with_counts(&mut self, g: &[Count]) -> Result<Option<LabeledPermutation<usize>>> {
        let heavy: Vec<usize> = (0..g.len()).filter(|&a| g[a] == Count::Many).collect();
        let mut multiset = Vec::new();
        for (a, c) in g.iter().enumerate() {
            if let Count::Exactly(k) = c {
                multiset.extend(std::iter::repeat_n(a, *k));
            }
        }
        let s = multiset.len();
        if s == 0 {
            if heavy.is_empty() {
                return Ok(None);
            }
            // a single placeholder stands for the whole permutation
            let small = LabeledPermutation::new(Permutation::identity(1), vec![SmallLabel::Box])?;
            return self.try_guess(&Guess { g: g.to_vec(), small: Some(small) });
        }
        for p in all_permutations(s) {
            for labels in distinct_arrangements(&multiset) {
                self.tick()?;
                let arrangement = LabeledPermutation::new(p.clone(), labels)?;
                if restriction_violation(&arrangement, &self.inst.restrictions, |a| Some(*a)).is_some() {
                    continue;
                }
                if heavy.is_empty() {
                    let small = LabeledPermutation::new(
                        arrangement.perm.clone(),
                        arrangement.labels.iter().map(|&a| SmallLabel::Letter(a)).collect(),
                    )?;
                    if let Some(w) = self.try_guess(&Guess { g: g.to_vec(), small: Some(small) })? {
                        return Ok(Some(w));
                    }
                    continue;
                }
                if !self.arrangement_feasible(g, &arrangement, &heavy)? {
                    continue;
                }
                if let Some(w) = self.with_boxes(g, &arrangement)? {
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    }

    /// Relaxation: heavy letters may fill any gap of the light arrangement.
    fn arrangement_feasible(&self, g: &[Count], arr: &LabeledPermutation<usize>, heavy: &[usize]) -> Result<bool> {
        let class = Regex::Star(Box::new(Regex::Class(heavy.iter().map(|&a| self.inst.alphabet[a].clone()).collect())));
        let loose = |word: Vec<usize>| {
            let mut parts = vec![class.clone()];
            for a in word {
                parts.push(Regex::Letter(self.inst.alphabet[a].clone()));
                parts.push(class.clone());
            }
            Regex::Concat(parts)
        };
        let a1 = nfa_intersect(&self.nfa1, &compile_regex(&loose(arr.projection(Dir::Row)), &self.inst.alphabet)?)?;
        let a2 = nfa_intersect(&self.nfa2, &compile_regex(&loose(arr.projection(Dir::Col)), &self.inst.alphabet)?)?;
        let bounds = self.bounds(&g.iter().map(|c| Some(*c)).collect::<Vec<_>>());
        Ok(common_image(&a1, &a2, self.cap, &bounds)?.is_some())
    }

    /// Insert placeholders into gap cells of the light arrangement.
    fn with_boxes(&mut self, g: &[Count], arr: &LabeledPermutation<usize>) -> Result<Option<LabeledPermutation<usize>>> {
        let s = arr.n();
        let cells: Vec<(usize, usize)> = (0..=s).flat_map(|i| (0..=s).map(move |j| (i, j))).collect();
        let mut seen_signatures = HashSet::new();
        // subsets by size, then lexicographically
        for size in 1..=cells.len() {
            for subset in combinations(cells.len(), size) {
                self.tick()?;
                let chosen: Vec<(usize, usize)> = subset.iter().map(|&k| cells[k]).collect();
                let mut row_counts = vec![0; s + 1];
                let mut col_counts = vec![0; s + 1];
                for &(i, j) in &chosen {
                    row_counts[i] += 1;
                    col_counts[j] += 1;
                }
                if !seen_signatures.insert((row_counts, col_counts)) {
                    continue;
                }
                let Some(small) = realize(arr, &chosen, &self.inst.restrictions, self.opts.theta, g) else { continue };
                if let Some(w) = self.try_guess(&Guess { g: g.to_vec(), small: Some(small) })? {
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    }

    fn try_guess(&mut self, guess: &Guess) -> Result<Option<LabeledPermutation<usize>>> {
        if validate_guess(guess, &self.inst.restrictions, self.opts.theta).is_err() {
            return Ok(None);
        }
        let heavy = guess.heavy();
        let regex = |proj: Vec<SmallLabel>| {
            Regex::Concat(
                proj.into_iter()
                    .map(|l| match l {
                        SmallLabel::Letter(a) => Regex::Letter(self.inst.alphabet[a].clone()),
                        SmallLabel::Box => Regex::Plus(Box::new(Regex::Class(
                            heavy.iter().map(|&a| self.inst.alphabet[a].clone()).collect(),
                        ))),
                    })
                    .collect(),
            )
        };
        let a1 = nfa_intersect(&self.nfa1, &compile_regex(&regex(guess.projection(Dir::Row)), &self.inst.alphabet)?)?;
        let a2 = nfa_intersect(&self.nfa2, &compile_regex(&regex(guess.projection(Dir::Col)), &self.inst.alphabet)?)?;
        let bounds = self.bounds(&guess.g.iter().map(|c| Some(*c)).collect::<Vec<_>>());
        let Some(img) = common_image(&a1, &a2, self.cap, &bounds)? else { return Ok(None) };
        match build_witness(guess, &img.word_a, &img.word_b, &self.inst.restrictions, self.opts.theta) {
            Ok(lp) => return Ok(Some(lp)),
            Err(Error::LayerInfeasible(_)) | Err(Error::Precondition(_)) if self.opts.theta < RLP_THRESHOLD => {}
            Err(e) => return Err(e),
        }
        // Below the default threshold the layering argument does not apply;
        // search short word pairs of the guess exactly instead.
        let (v1, v2) = (words_by_vector(&a1.trim(), self.opts.fallback_len), words_by_vector(&a2.trim(), self.opts.fallback_len));
        let mut common: Vec<&ParikhVector> = v1.keys().filter(|v| v2.contains_key(*v)).collect();
        common.sort_by_key(|v| (v.total(), (*v).clone()));
        for v in common {
            for w1 in &v1[v] {
                for w2 in &v2[v] {
                    self.tick()?;
                    if !self.tried_pairs.insert((w1.clone(), w2.clone())) {
                        continue;
                    }
                    if let Some(lp) = exact_completion(w1, w2, &self.inst.restrictions) {
                        return Ok(Some(lp));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Distinct orderings of a sorted multiset, in lexicographic order.
fn distinct_arrangements(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    let n = cur.len();
    while let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) {
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

/// `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else { break };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

const ORDERING_LIMIT: usize = 50_000;

/// Small permutation with one placeholder per chosen gap cell, trying the
/// orderings of placeholders within each row gap and column gap until the
/// guess conditions hold.
fn realize(
    arr: &LabeledPermutation<usize>,
    chosen: &[(usize, usize)],
    restrictions: &BTreeSet<LabelRestriction>,
    theta: usize,
    g: &[Count],
) -> Option<LabeledPermutation<SmallLabel>> {
    let s = arr.n();
    let mut in_row_gap: Vec<Vec<usize>> = vec![Vec::new(); s + 1];
    let mut in_col_gap: Vec<Vec<usize>> = vec![Vec::new(); s + 1];
    for (k, &(i, j)) in chosen.iter().enumerate() {
        in_row_gap[i].push(k);
        in_col_gap[j].push(k);
    }
    let row_orders: Vec<Vec<Vec<usize>>> = in_row_gap.iter().map(|v| orderings(v)).collect();
    let col_orders: Vec<Vec<Vec<usize>>> = in_col_gap.iter().map(|v| orderings(v)).collect();
    let mut budget = ORDERING_LIMIT;
    let mut row_choice = vec![0usize; s + 1];
    loop {
        let mut col_choice = vec![0usize; s + 1];
        loop {
            budget = budget.checked_sub(1)?;
            let small = assemble(arr, chosen.len(), &row_choice, &row_orders, &col_choice, &col_orders);
            let guess = Guess { g: g.to_vec(), small: Some(small) };
            if validate_guess(&guess, restrictions, theta).is_ok() {
                return guess.small;
            }
            if !advance(&mut col_choice, &col_orders) {
                break;
            }
        }
        if !advance(&mut row_choice, &row_orders) {
            return None;
        }
    }
}

fn orderings(items: &[usize]) -> Vec<Vec<usize>> {
    distinct_arrangements(items)
}

/// Mixed-radix increment; false after the last combination.
fn advance(choice: &mut [usize], options: &[Vec<Vec<usize>>]) -> bool {
    for (c, opts) in choice.iter_mut().zip(options) {
        if *c + 1 < opts.len() {
            *c += 1;
            return true;
        }
        *c = 0;
    }
    false
}

fn assemble(
    arr: &LabeledPermutation<usize>,
    boxes: usize,
    row_choice: &[usize],
    row_orders: &[Vec<Vec<usize>>],
    col_choice: &[usize],
    col_orders: &[Vec<Vec<usize>>],
) -> LabeledPermutation<SmallLabel> {
    let s = arr.n();
    let size = s + boxes;
    // final row of each light row and each placeholder
    let mut light_row = vec![0; s + 1];
    let mut box_row = vec![0; boxes];
    let mut next = 1;
    for gap in 0..=s {
        for &k in &row_orders[gap][row_choice[gap]] {
            box_row[k] = next;
            next += 1;
        }
        if gap < s {
            light_row[gap + 1] = next;
            next += 1;
        }
    }
    let mut light_col = vec![0; s + 1];
    let mut box_col = vec![0; boxes];
    next = 1;
    for gap in 0..=s {
        for &k in &col_orders[gap][col_choice[gap]] {
            box_col[k] = next;
            next += 1;
        }
        if gap < s {
            light_col[gap + 1] = next;
            next += 1;
        }
    }
    let mut row_to_col = vec![0; size];
    let mut labels = vec![SmallLabel::Box; size];
    for r in 1..=s {
        let c = arr.perm.col_of(r);
        row_to_col[light_row[r] - 1] = light_col[c];
        labels[light_row[r] - 1] = SmallLabel::Letter(arr.labels[r - 1]);
    }
    for k in 0..boxes {
        row_to_col[box_row[k] - 1] = box_col[k];
    }
    LabeledPermutation::new(Permutation::from_row_to_col(row_to_col).expect("assembled permutation"), labels)
        .expect("sizes agree")
}

/// Decide the instance by canonical search over guesses; witnesses are
/// verified before being returned.
pub fn solve_rlp(inst: &RlpInstance, opts: &SolveOptions) -> Result<RlpOutcome> {
    if opts.theta < 1 {
        return Err(Error::pre("theta must be at least 1"));
    }
    let cap = opts.parikh_cap.unwrap_or_else(|| default_parikh_cap(&inst.nfa1, &inst.nfa2));
    let none = RlpOutcome::NoWitness { theta: opts.theta, parikh_cap: cap };
    let (nfa1, nfa2) = (inst.nfa1.trim(), inst.nfa2.trim());
    if nfa1.states == 0 || nfa2.states == 0 || inst.alphabet.is_empty() {
        return Ok(none);
    }
    let mut search = Search { inst, opts, cap, nfa1, nfa2, tried_pairs: HashSet::new() };
    let mut g = vec![None; inst.alphabet.len()];
    match search.guesses(&mut g)? {
        Some(lp) => {
            if !verify_witness(&lp, inst)? {
                return Err(Error::Solver("constructed witness failed verification".into()));
            }
            Ok(RlpOutcome::Witness(lp))
        }
        None => Ok(none),
    }
}

/// Which implementation [`shuffle_check`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShuffleMethod {
    /// Reduction to a restricted labeled permutation instance.
    Rlp,
    /// Enumeration of words and permutations up to the size bound.
    Brute,
}

/// A word of `l1` together with `p` (1-based) such that `a_p(1) … a_p(n)`
/// is in `l2` and consecutive values of `p` differ by more than one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleWitness {
    pub word: Vec<usize>,
    pub p: Vec<usize>,
}

/// The instance forbidding every diagonal adjacency.
pub fn shuffle_instance(l1: &Nfa, l2: &Nfa) -> Result<RlpInstance> {
    let k = l1.alphabet.len();
    let restrictions = (0..k)
        .flat_map(|a| (0..k).flat_map(move |b| [Diagonal::NE, Diagonal::SE].map(|t| LabelRestriction { a, t, b })))
        .collect();
    RlpInstance::new(l1.alphabet.clone(), restrictions, l1.clone(), l2.clone())
}

pub fn shuffle_check(l1: &Nfa, l2: &Nfa, max_n: usize, method: ShuffleMethod, opts: &SolveOptions) -> Result<Option<ShuffleWitness>> {
    if max_n < 1 {
        return Err(Error::pre("max_n must be at least 1"));
    }
    if l1.alphabet != l2.alphabet {
        return Err(Error::AlphabetMismatch("shuffle languages must share an alphabet".into()));
    }
    match method {
        ShuffleMethod::Rlp => {
            let inst = shuffle_instance(l1, l2)?;
            Ok(match solve_rlp(&inst, opts)? {
                RlpOutcome::Witness(lp) => {
                    let p = (1..=lp.n()).map(|c| lp.perm.row_of(c)).collect();
                    Some(ShuffleWitness { word: lp.labels.clone(), p })
                }
                RlpOutcome::NoWitness { .. } => None,
            })
        }
        ShuffleMethod::Brute => {
            let words = words_by_vector(l1, max_n);
            let mut all: Vec<Vec<usize>> = words.into_values().flatten().collect();
            all.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
            for w in all {
                for perm in all_permutations(w.len()) {
                    let p = perm.row_to_col();
                    if p.windows(2).any(|x| x[0].abs_diff(x[1]) <= 1) {
                        continue;
                    }
                    let image: Vec<usize> = p.iter().map(|&i| w[i - 1]).collect();
                    if l2.accepts(&image) {
                        return Ok(Some(ShuffleWitness { word: w, p: p.to_vec() }));
                    }
                }
            }
            Ok(None)
        }
    }
}

/// Parse the `.rlp` format.
pub fn parse_rlp(text: &str) -> Result<RlpInstance> {
    let lines = split_content_lines(text);
    let mut alphabet: Option<Vec<String>> = None;
    let mut restrictions = BTreeSet::new();
    let mut section = 0;
    let (mut block1, mut block2) = (Vec::new(), Vec::new());
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match (section, toks[0]) {
            (_, "nfa1") if toks.len() == 1 => section = 1,
            (_, "nfa2") if toks.len() == 1 => section = 2,
            (0, "alphabet") => alphabet = Some(toks[1..].iter().map(|s| s.to_string()).collect()),
            (0, "restrict") if toks.len() == 4 => {
                let al = alphabet.as_ref().ok_or_else(|| Error::parse(ln, 1, "`alphabet` must precede restrictions"))?;
                let idx = |l: &str| al.iter().position(|m| m == l).ok_or_else(|| Error::parse(ln, 1, format!("unknown letter {l}")));
                let t = match toks[2] {
                    "SE" => Diagonal::SE,
                    "NE" => Diagonal::NE,
                    other => return Err(Error::parse(ln, 1, format!("expected SE or NE, found {other}"))),
                };
                restrictions.insert(LabelRestriction { a: idx(toks[1])?, t, b: idx(toks[3])? });
            }
            (1, _) => block1.push((ln, line)),
            (2, _) => block2.push((ln, line)),
            _ => return Err(Error::parse(ln, 1, format!("unexpected line {line:?}"))),
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::parse(1, 1, "missing `alphabet` line"))?;
    if block1.is_empty() || block2.is_empty() {
        return Err(Error::parse(1, 1, "missing `nfa1` or `nfa2` block"));
    }
    let nfa1 = parse_nfa_block(block1.into_iter(), &alphabet)?;
    let nfa2 = parse_nfa_block(block2.into_iter(), &alphabet)?;
    RlpInstance::new(alphabet, restrictions, nfa1, nfa2)
}

pub fn write_rlp(inst: &RlpInstance) -> String {
    let mut s = format!("alphabet {}\n", inst.alphabet.join(" "));
    for r in &inst.restrictions {
        s.push_str(&format!("restrict {} {} {}\n", inst.alphabet[r.a], r.t, inst.alphabet[r.b]));
    }
    s.push_str("nfa1\n");
    s.push_str(&write_nfa(&inst.nfa1));
    s.push_str("nfa2\n");
    s.push_str(&write_nfa(&inst.nfa2));
    s
}

/// Labeled permutation with letter names, for output.
pub fn named(lp: &LabeledPermutation<usize>, alphabet: &[String]) -> LabeledPermutation<String> {
    LabeledPermutation { perm: lp.perm.clone(), labels: lp.labels.iter().map(|&a| alphabet[a].clone()).collect() }
}

/// Inverse of [`named`].
pub fn unnamed(lp: &LabeledPermutation<String>, alphabet: &[String]) -> Result<LabeledPermutation<usize>> {
    let labels = lp
        .labels
        .iter()
        .map(|l| alphabet.iter().position(|m| m == l).ok_or_else(|| Error::AlphabetMismatch(format!("unknown label {l}"))))
        .collect::<Result<_>>()?;
    LabeledPermutation::new(lp.perm.clone(), labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    fn word_nfa(al: &[String], w: &str) -> Nfa {
        let idx: Vec<usize> = w.chars().map(|c| al.iter().position(|m| *m == c.to_string()).unwrap()).collect();
        Nfa::word(al.to_vec(), &idx)
    }

    fn small(cells: &[((usize, usize), SmallLabel)]) -> LabeledPermutation<SmallLabel> {
        let mut sorted = cells.to_vec();
        sorted.sort();
        let perm = Permutation::from_elements(&sorted.iter().map(|(e, _)| *e).collect::<Vec<_>>()).unwrap();
        LabeledPermutation::new(perm, sorted.iter().map(|(_, l)| *l).collect()).unwrap()
    }

    use SmallLabel::{Box as B, Letter as L};

    #[test]
    fn trivial_instance() {
        let al = alpha(&["a"]);
        let inst = RlpInstance::new(al.clone(), BTreeSet::new(), word_nfa(&al, "a"), word_nfa(&al, "a")).unwrap();
        match solve_rlp(&inst, &SolveOptions::default()).unwrap() {
            RlpOutcome::Witness(lp) => {
                assert_eq!(lp.n(), 1);
                assert!(verify_witness(&lp, &inst).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fully_restricted_pair_has_no_witness() {
        let al = alpha(&["a"]);
        let rs: BTreeSet<_> =
            [LabelRestriction { a: 0, t: Diagonal::SE, b: 0 }, LabelRestriction { a: 0, t: Diagonal::NE, b: 0 }].into();
        let inst = RlpInstance::new(al.clone(), rs, word_nfa(&al, "aa"), word_nfa(&al, "aa")).unwrap();
        assert!(matches!(solve_rlp(&inst, &SolveOptions::default()).unwrap(), RlpOutcome::NoWitness { .. }));
        let opts = SolveOptions { theta: 1, ..SolveOptions::default() };
        assert!(matches!(solve_rlp(&inst, &opts).unwrap(), RlpOutcome::NoWitness { .. }));
    }

    #[test]
    fn restriction_directions() {
        let rs: BTreeSet<_> = [LabelRestriction { a: 0, t: Diagonal::SE, b: 1 }].into();
        let diag = LabeledPermutation::new(Permutation::identity(2), vec![0, 1]).unwrap();
        assert!(restriction_violation(&diag, &rs, |a| Some(*a)).is_some());
        let flipped = LabeledPermutation::new(Permutation::identity(2), vec![1, 0]).unwrap();
        assert!(restriction_violation(&flipped, &rs, |a| Some(*a)).is_none());
        let rs: BTreeSet<_> = [LabelRestriction { a: 0, t: Diagonal::NE, b: 1 }].into();
        // (2,1) labeled a sees (1,2) labeled b to its north-east
        let anti = LabeledPermutation::new(Permutation::from_row_to_col(vec![2, 1]).unwrap(), vec![1, 0]).unwrap();
        assert!(restriction_violation(&anti, &rs, |a| Some(*a)).is_some());
    }

    #[test]
    fn zone_condition_examples() {
        let g = vec![Count::Exactly(1), Count::Exactly(1), Count::Exactly(1), Count::Many];
        // placeholders at (4,4) and (5,5) with nothing else in [4,5]x[4,5]
        let bad = small(&[((1, 2), L(0)), ((2, 6), B), ((3, 1), L(1)), ((4, 4), B), ((5, 5), B), ((6, 3), L(2))]);
        let guess = Guess { g: g.clone(), small: Some(bad) };
        assert_eq!(validate_guess(&guess, &BTreeSet::new(), 17), Err(GuessDefect::BoxZone));
        // a single placeholder never forms a zone
        let good = small(&[((1, 2), L(0)), ((2, 4), B), ((3, 1), L(1)), ((4, 3), L(2))]);
        let guess = Guess { g, small: Some(good) };
        assert_eq!(validate_guess(&guess, &BTreeSet::new(), 17), Ok(()));
    }

    #[test]
    fn count_mismatch() {
        let g = vec![Count::Exactly(1)];
        let guess = Guess { g, small: Some(small(&[((1, 1), L(0)), ((2, 2), L(0))])) };
        assert_eq!(validate_guess(&guess, &BTreeSet::new(), 17), Err(GuessDefect::CountMismatch));
    }

    fn layered_example() -> (Vec<String>, Guess, Vec<usize>, Vec<usize>) {
        let al = alpha(&["a", "b", "c", "d"]);
        let enc = |w: &str| w.chars().map(|c| (c as u8 - b'a') as usize).collect::<Vec<_>>();
        let g = vec![Count::Exactly(1), Count::Exactly(1), Count::Many, Count::Many];
        let guess = Guess { g, small: Some(small(&[((1, 2), B), ((2, 3), L(0)), ((3, 1), L(1))])) };
        (al, guess, enc("ddccdab"), enc("bcddcda"))
    }

    #[test]
    fn seven_element_layering() {
        let (_, guess, w1, w2) = layered_example();
        assert_eq!(validate_guess(&guess, &BTreeSet::new(), 1), Ok(()));
        let lp = build_witness(&guess, &w1, &w2, &BTreeSet::new(), 1).unwrap();
        assert_eq!(lp.projection(Dir::Row), w1);
        assert_eq!(lp.projection(Dir::Col), w2);
        let cells: Vec<_> = lp.perm.elements().collect();
        assert_eq!(cells, vec![(1, 6), (2, 4), (3, 2), (4, 5), (5, 3), (6, 7), (7, 1)]);
    }

    #[test]
    fn seven_element_instance_solved() {
        let (al, _, w1, w2) = layered_example();
        let inst =
            RlpInstance::new(al.clone(), BTreeSet::new(), Nfa::word(al.clone(), &w1), Nfa::word(al.clone(), &w2)).unwrap();
        let opts = SolveOptions { theta: 1, ..SolveOptions::default() };
        match solve_rlp(&inst, &opts).unwrap() {
            RlpOutcome::Witness(lp) => {
                assert_eq!(lp.n(), 7);
                assert!(verify_witness(&lp, &inst).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shuffle_examples() {
        let al = alpha(&["a", "b", "c"]);
        let opts = SolveOptions::default();
        for method in [ShuffleMethod::Rlp, ShuffleMethod::Brute] {
            let none = shuffle_check(&word_nfa(&al, "ab"), &word_nfa(&al, "ba"), 4, method, &opts).unwrap();
            assert_eq!(none, None);
            let one = shuffle_check(&word_nfa(&al, "a"), &word_nfa(&al, "a"), 4, method, &opts).unwrap();
            assert_eq!(one, Some(ShuffleWitness { word: vec![0], p: vec![1] }));
            // no permutation of [3] has both consecutive gaps above one
            let three = shuffle_check(&word_nfa(&al, "abc"), &word_nfa(&al, "cab"), 4, method, &opts).unwrap();
            assert_eq!(three, None);
        }
    }

    #[test]
    fn rlp_round_trip() {
        let text = "alphabet a b\nrestrict a SE b\nnfa1\nstates 1\ninit 0\nfinal 0\ntrans 0 a 0\nnfa2\nalphabet a b\nstates 1\ninit 0\nfinal 0\ntrans 0 b 0\n";
        let inst = parse_rlp(text).unwrap();
        assert_eq!(inst.restrictions.len(), 1);
        assert_eq!(parse_rlp(&write_rlp(&inst)).unwrap(), inst);
        assert!(parse_rlp("alphabet a\nrestrict a XX a\n").is_err());
        assert!(parse_rlp("alphabet a\nnfa1\nstates 1\n").is_err());
    }

    #[test]
    fn combinatorics_helpers() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(distinct_arrangements(&[0, 0, 1]), vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    }
}
