//! Nondeterministic automata, regular expressions and Parikh images.
//!
//! Letters are indices into the automaton's alphabet. Parikh-image
//! intersection is decided with an integer flow system per automaton,
//! solved by `microlp`, with connectivity of the flow support enforced by
//! lazy branching.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use microlp::{ComparisonOp, OptimizationDirection, Problem, Variable};

use crate::error::{Error, Result};
use crate::perm::strip_comment;

pub type Transition = (usize, usize, usize);

/// An NFA over a named alphabet; states are `0..states`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    pub alphabet: Vec<String>,
    pub states: usize,
    pub initial: BTreeSet<usize>,
    pub accepting: BTreeSet<usize>,
    pub transitions: BTreeSet<Transition>,
}

impl Nfa {
    pub fn new(
        alphabet: Vec<String>,
        states: usize,
        initial: BTreeSet<usize>,
        accepting: BTreeSet<usize>,
        transitions: BTreeSet<Transition>,
    ) -> Result<Self> {
        let nfa = Nfa { alphabet, states, initial, accepting, transitions };
        nfa.validate()?;
        Ok(nfa)
    }

    pub fn validate(&self) -> Result<()> {
        let distinct: BTreeSet<&String> = self.alphabet.iter().collect();
        if distinct.len() != self.alphabet.len() {
            return Err(Error::pre("alphabet has repeated letters"));
        }
        let bad_state = |q: &usize| *q >= self.states;
        if self.initial.iter().any(bad_state) || self.accepting.iter().any(bad_state) {
            return Err(Error::pre("initial or final state out of range"));
        }
        if self.transitions.iter().any(|&(p, a, q)| p >= self.states || q >= self.states || a >= self.alphabet.len()) {
            return Err(Error::pre("transition references an unknown state or letter"));
        }
        Ok(())
    }

    /// Automaton with no states, accepting nothing.
    pub fn empty(alphabet: Vec<String>) -> Self {
        Nfa { alphabet, states: 0, initial: BTreeSet::new(), accepting: BTreeSet::new(), transitions: BTreeSet::new() }
    }

    /// One state accepting every word.
    pub fn universal(alphabet: Vec<String>) -> Self {
        let transitions = (0..alphabet.len()).map(|a| (0, a, 0)).collect();
        Nfa { alphabet, states: 1, initial: [0].into(), accepting: [0].into(), transitions }
    }

    /// Accepts exactly `word`.
    pub fn word(alphabet: Vec<String>, word: &[usize]) -> Self {
        let transitions = word.iter().enumerate().map(|(i, &a)| (i, a, i + 1)).collect();
        Nfa { alphabet, states: word.len() + 1, initial: [0].into(), accepting: [word.len()].into(), transitions }
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|l| l == name)
    }

    /// Letter indices of a word given by names.
    pub fn encode(&self, word: &[&str]) -> Result<Vec<usize>> {
        word.iter()
            .map(|l| self.letter_index(l).ok_or_else(|| Error::AlphabetMismatch(format!("unknown letter {l}"))))
            .collect()
    }

    pub fn decode(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&a| self.alphabet[a].clone()).collect()
    }

    fn successors(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.states];
        for &(p, a, q) in &self.transitions {
            out[p].push((a, q));
        }
        out
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let succ = self.successors();
        let mut cur: BTreeSet<usize> = self.initial.clone();
        for &a in word {
            cur = cur.iter().flat_map(|&p| succ[p].iter().filter(|(b, _)| *b == a).map(|(_, q)| *q)).collect();
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|q| self.accepting.contains(q))
    }

    /// Keep only states that are reachable and co-reachable, renumbered.
    pub fn trim(&self) -> Nfa {
        let succ = self.successors();
        let mut pred = vec![Vec::new(); self.states];
        for &(p, _, q) in &self.transitions {
            pred[q].push(p);
        }
        let closure = |start: &BTreeSet<usize>, next: &dyn Fn(usize) -> Vec<usize>| {
            let mut seen: BTreeSet<usize> = start.clone();
            let mut queue: VecDeque<usize> = start.iter().copied().collect();
            while let Some(p) = queue.pop_front() {
                for q in next(p) {
                    if seen.insert(q) {
                        queue.push_back(q);
                    }
                }
            }
            seen
        };
        let fwd = closure(&self.initial, &|p| succ[p].iter().map(|(_, q)| *q).collect());
        let bwd = closure(&self.accepting, &|q| pred[q].clone());
        let keep: Vec<usize> = fwd.intersection(&bwd).copied().collect();
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let map = |s: &BTreeSet<usize>| s.iter().filter_map(|q| index.get(q).copied()).collect();
        Nfa {
            alphabet: self.alphabet.clone(),
            states: keep.len(),
            initial: map(&self.initial),
            accepting: map(&self.accepting),
            transitions: self
                .transitions
                .iter()
                .filter_map(|&(p, a, q)| Some((*index.get(&p)?, a, *index.get(&q)?)))
                .collect(),
        }
    }

    /// Same language over a larger alphabet that extends this one.
    pub fn extend_alphabet(&self, alphabet: &[String]) -> Result<Nfa> {
        let map: Vec<usize> = self
            .alphabet
            .iter()
            .map(|l| {
                alphabet.iter().position(|m| m == l).ok_or_else(|| Error::AlphabetMismatch(format!("letter {l} missing")))
            })
            .collect::<Result<_>>()?;
        Ok(Nfa {
            alphabet: alphabet.to_vec(),
            states: self.states,
            initial: self.initial.clone(),
            accepting: self.accepting.clone(),
            transitions: self.transitions.iter().map(|&(p, a, q)| (p, map[a], q)).collect(),
        })
    }
}

impl fmt::Display for Nfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_nfa(self))
    }
}

/// Regular expressions over letter names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    Epsilon,
    Letter(String),
    Class(BTreeSet<String>),
    Concat(Vec<Regex>),
    Union(Vec<Regex>),
    Plus(Box<Regex>),
    Star(Box<Regex>),
}

struct EpsNfa {
    eps: Vec<Vec<usize>>,
    moves: Vec<Vec<(usize, usize)>>,
}

impl EpsNfa {
    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.moves.push(Vec::new());
        self.eps.len() - 1
    }

    /// Thompson fragment; returns (entry, exit).
    fn build(&mut self, r: &Regex, alphabet: &[String]) -> Result<(usize, usize)> {
        let idx = |l: &String| {
            alphabet.iter().position(|m| m == l).ok_or_else(|| Error::AlphabetMismatch(format!("unknown letter {l}")))
        };
        let s = self.state();
        let t = self.state();
        match r {
            Regex::Epsilon => self.eps[s].push(t),
            Regex::Letter(l) => self.moves[s].push((idx(l)?, t)),
            Regex::Class(ls) => {
                if ls.is_empty() {
                    return Err(Error::pre("empty letter class"));
                }
                for l in ls {
                    self.moves[s].push((idx(l)?, t));
                }
            }
            Regex::Concat(parts) => {
                let mut cur = s;
                for p in parts {
                    let (a, b) = self.build(p, alphabet)?;
                    self.eps[cur].push(a);
                    cur = b;
                }
                self.eps[cur].push(t);
            }
            Regex::Union(parts) => {
                for p in parts {
                    let (a, b) = self.build(p, alphabet)?;
                    self.eps[s].push(a);
                    self.eps[b].push(t);
                }
            }
            Regex::Plus(inner) | Regex::Star(inner) => {
                let (a, b) = self.build(inner, alphabet)?;
                self.eps[s].push(a);
                self.eps[b].push(t);
                self.eps[b].push(a);
                if matches!(r, Regex::Star(_)) {
                    self.eps[s].push(t);
                }
            }
        }
        Ok((s, t))
    }

    fn closure(&self, p: usize) -> BTreeSet<usize> {
        let mut seen: BTreeSet<usize> = [p].into();
        let mut stack = vec![p];
        while let Some(q) = stack.pop() {
            for &r in &self.eps[q] {
                if seen.insert(r) {
                    stack.push(r);
                }
            }
        }
        seen
    }
}

/// Thompson construction followed by epsilon elimination and trimming.
pub fn compile_regex(r: &Regex, alphabet: &[String]) -> Result<Nfa> {
    let mut e = EpsNfa { eps: Vec::new(), moves: Vec::new() };
    let (start, end) = e.build(r, alphabet)?;
    let n = e.eps.len();
    let mut transitions = BTreeSet::new();
    let mut accepting = BTreeSet::new();
    for p in 0..n {
        let cl = e.closure(p);
        if cl.contains(&end) {
            accepting.insert(p);
        }
        for &q in &cl {
            for &(a, t) in &e.moves[q] {
                transitions.insert((p, a, t));
            }
        }
    }
    let nfa = Nfa { alphabet: alphabet.to_vec(), states: n, initial: [start].into(), accepting, transitions };
    Ok(nfa.trim())
}

/// Product automaton accepting the intersection.
pub fn nfa_intersect(a: &Nfa, b: &Nfa) -> Result<Nfa> {
    if a.alphabet != b.alphabet {
        return Err(Error::AlphabetMismatch(format!("{:?} vs {:?}", a.alphabet, b.alphabet)));
    }
    let (sa, sb) = (a.successors(), b.successors());
    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut initial = BTreeSet::new();
    for &p in &a.initial {
        for &q in &b.initial {
            let id = index.len();
            index.insert((p, q), id);
            initial.insert(id);
            queue.push_back((p, q));
        }
    }
    let mut transitions = BTreeSet::new();
    while let Some((p, q)) = queue.pop_front() {
        let from = index[&(p, q)];
        for &(x, p2) in &sa[p] {
            for &(y, q2) in &sb[q] {
                if x != y {
                    continue;
                }
                let next = index.len();
                let to = *index.entry((p2, q2)).or_insert_with(|| {
                    queue.push_back((p2, q2));
                    next
                });
                transitions.insert((from, x, to));
            }
        }
    }
    let accepting = index.iter().filter(|((p, q), _)| a.accepting.contains(p) && b.accepting.contains(q)).map(|(_, &i)| i).collect();
    Ok(Nfa { alphabet: a.alphabet.clone(), states: index.len(), initial, accepting, transitions })
}

/// Accepts the words in which every heavy letter occurs more than `theta` times.
///
/// One counter per heavy letter, saturating at `theta + 1`, so the state
/// count is `(theta + 2)^|heavy|`.
pub fn threshold_automaton(alphabet: &[String], heavy: &BTreeSet<usize>, theta: usize) -> Result<Nfa> {
    if heavy.iter().any(|&a| a >= alphabet.len()) {
        return Err(Error::pre("heavy letter outside the alphabet"));
    }
    let heavy: Vec<usize> = heavy.iter().copied().collect();
    let base = theta + 2;
    let states = base
        .checked_pow(heavy.len() as u32)
        .filter(|s| *s <= 1 << 22)
        .ok_or_else(|| Error::Overflow("threshold automaton too large".into()))?;
    let digits = |mut s: usize| -> Vec<usize> {
        (0..heavy.len())
            .map(|_| {
                let d = s % base;
                s /= base;
                d
            })
            .collect()
    };
    let encode = |ds: &[usize]| ds.iter().rev().fold(0, |acc, d| acc * base + d);
    let mut transitions = BTreeSet::new();
    for s in 0..states {
        let ds = digits(s);
        for a in 0..alphabet.len() {
            let mut next = ds.clone();
            if let Some(i) = heavy.iter().position(|&h| h == a) {
                next[i] = (next[i] + 1).min(theta + 1);
            }
            transitions.insert((s, a, encode(&next)));
        }
    }
    let accepting = [encode(&vec![theta + 1; heavy.len()])].into();
    Ok(Nfa { alphabet: alphabet.to_vec(), states, initial: [0].into(), accepting, transitions })
}

/// Letter counts aligned with an alphabet.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParikhVector(pub Vec<u64>);

impl ParikhVector {
    pub fn of_word(alphabet_len: usize, word: &[usize]) -> Self {
        let mut v = vec![0; alphabet_len];
        for &a in word {
            v[a] += 1;
        }
        ParikhVector(v)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn render(&self, alphabet: &[String]) -> String {
        alphabet.iter().zip(&self.0).map(|(l, c)| format!("{l}={c}")).collect::<Vec<_>>().join(",")
    }

    /// Parse `a=1,b=2`; letters not mentioned count zero.
    pub fn parse(text: &str, alphabet: &[String]) -> Result<Self> {
        let mut v = vec![0; alphabet.len()];
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (l, c) = part.split_once('=').ok_or_else(|| Error::parse(1, 1, format!("expected letter=count, got {part:?}")))?;
            let i = alphabet.iter().position(|m| m == l.trim()).ok_or_else(|| Error::AlphabetMismatch(format!("unknown letter {l}")))?;
            v[i] = c.trim().parse().map_err(|_| Error::parse(1, 1, format!("bad count {c:?}")))?;
        }
        Ok(ParikhVector(v))
    }
}

/// Some word accepted by `a` with Parikh vector `v`, by exhaustive search
/// over (state, remaining counts).
pub fn word_with_parikh(a: &Nfa, v: &ParikhVector) -> Result<Option<Vec<usize>>> {
    if v.0.len() != a.alphabet.len() {
        return Err(Error::AlphabetMismatch("vector length differs from alphabet size".into()));
    }
    let succ = a.successors();
    let mut dead: HashSet<(usize, Vec<u64>)> = HashSet::new();
    fn go(
        a: &Nfa,
        succ: &[Vec<(usize, usize)>],
        q: usize,
        rem: &mut Vec<u64>,
        dead: &mut HashSet<(usize, Vec<u64>)>,
        out: &mut Vec<usize>,
    ) -> bool {
        if rem.iter().all(|&c| c == 0) && a.accepting.contains(&q) {
            return true;
        }
        if dead.contains(&(q, rem.clone())) {
            return false;
        }
        for &(x, q2) in &succ[q] {
            if rem[x] == 0 {
                continue;
            }
            rem[x] -= 1;
            out.push(x);
            if go(a, succ, q2, rem, dead, out) {
                return true;
            }
            out.pop();
            rem[x] += 1;
        }
        dead.insert((q, rem.clone()));
        false
    }
    for &q in &a.initial {
        let mut rem = v.0.clone();
        let mut out = Vec::new();
        if go(a, &succ, q, &mut rem, &mut dead, &mut out) {
            return Ok(Some(out));
        }
    }
    Ok(None)
}

/// Whether some accepted word has Parikh vector `v`.
pub fn parikh_member(a: &Nfa, v: &ParikhVector) -> Result<bool> {
    Ok(word_with_parikh(a, v)?.is_some())
}

/// Default flow cap for a pair of automata.
pub fn default_parikh_cap(a: &Nfa, b: &Nfa) -> u64 {
    ((a.states + b.states) * a.alphabet.len().max(1) * 64) as u64
}

/// A common Parikh vector with a witness word for each automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonImage {
    pub vector: ParikhVector,
    pub word_a: Vec<usize>,
    pub word_b: Vec<usize>,
}

/// Per-letter count bounds used by callers that need exact or minimum counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountBound {
    pub min: u64,
    pub max: Option<u64>,
}

impl CountBound {
    pub const ANY: CountBound = CountBound { min: 0, max: None };
    pub fn exactly(n: u64) -> Self {
        CountBound { min: n, max: Some(n) }
    }
    pub fn at_least(n: u64) -> Self {
        CountBound { min: n, max: None }
    }
}

/// Branching decision on one automaton's flow: either the edges crossing
/// into a component carry flow, or every edge touching it is unused.
#[derive(Clone, Debug)]
enum Cut {
    Enter(usize, Vec<usize>),
    Zero(usize, Vec<usize>),
}

struct FlowModel<'a> {
    nfas: [&'a Nfa; 2],
    edges: [Vec<Transition>; 2],
}

const NODE_LIMIT: usize = 20_000;

/// Per-automaton edge flows and the chosen start state.
type Flows = [(Vec<u64>, usize); 2];

impl FlowModel<'_> {
    fn solve(&self, cap: u64, bounds: &[CountBound], cuts: &[Cut]) -> Result<Option<Flows>> {
        let mut pb = Problem::new(OptimizationDirection::Minimize);
        let cap = i32::try_from(cap).map_err(|_| Error::Overflow("parikh cap exceeds i32".into()))?;
        let mut zero: [BTreeSet<usize>; 2] = [BTreeSet::new(), BTreeSet::new()];
        for c in cuts {
            if let Cut::Zero(k, es) = c {
                zero[*k].extend(es.iter().copied());
            }
        }
        let mut xs: [Vec<Variable>; 2] = [Vec::new(), Vec::new()];
        let mut start_vars: [BTreeMap<usize, Variable>; 2] = [BTreeMap::new(), BTreeMap::new()];
        for k in 0..2 {
            for e in 0..self.edges[k].len() {
                let hi = if zero[k].contains(&e) { 0 } else { cap };
                xs[k].push(pb.add_integer_var(if k == 0 { 1.0 } else { 0.0 }, (0, hi)));
            }
            let nfa = self.nfas[k];
            let starts: BTreeMap<usize, Variable> = nfa.initial.iter().map(|&q| (q, pb.add_binary_var(0.0))).collect();
            let ends: BTreeMap<usize, Variable> = nfa.accepting.iter().map(|&q| (q, pb.add_binary_var(0.0))).collect();
            pb.add_constraint(starts.values().map(|&v| (v, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, 1.0);
            pb.add_constraint(ends.values().map(|&v| (v, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, 1.0);
            for q in 0..nfa.states {
                let mut terms: Vec<(Variable, f64)> = Vec::new();
                for (e, &(p, _, r)) in self.edges[k].iter().enumerate() {
                    if p == q && r != q {
                        terms.push((xs[k][e], 1.0));
                    } else if r == q && p != q {
                        terms.push((xs[k][e], -1.0));
                    }
                }
                if let Some(&s) = starts.get(&q) {
                    terms.push((s, -1.0));
                }
                if let Some(&f) = ends.get(&q) {
                    terms.push((f, 1.0));
                }
                if !terms.is_empty() {
                    pb.add_constraint(terms, ComparisonOp::Eq, 0.0);
                }
            }
            start_vars[k] = starts;
        }
        let letters = self.nfas[0].alphabet.len();
        for a in 0..letters {
            let count = |k: usize| -> Vec<(Variable, f64)> {
                self.edges[k].iter().enumerate().filter(|(_, t)| t.1 == a).map(|(e, _)| (xs[k][e], 1.0)).collect()
            };
            let mut both = count(0);
            both.extend(count(1).into_iter().map(|(v, c)| (v, -c)));
            if !both.is_empty() {
                pb.add_constraint(both, ComparisonOp::Eq, 0.0);
            }
            let b = bounds.get(a).copied().unwrap_or(CountBound::ANY);
            let own = count(0);
            if b.min > 0 {
                if own.is_empty() {
                    return Ok(None);
                }
                pb.add_constraint(own.clone(), ComparisonOp::Ge, b.min as f64);
            }
            if let Some(max) = b.max {
                if !own.is_empty() {
                    pb.add_constraint(own, ComparisonOp::Le, max as f64);
                }
            }
        }
        for c in cuts {
            if let Cut::Enter(k, es) = c {
                let terms: Vec<(Variable, f64)> = es.iter().map(|&e| (xs[*k][e], 1.0)).collect();
                if terms.is_empty() {
                    return Ok(None);
                }
                pb.add_constraint(terms, ComparisonOp::Ge, 1.0);
            }
        }
        match pb.solve() {
            Err(microlp::Error::Infeasible) => Ok(None),
            Err(e) => Err(Error::Solver(format!("{e:?}"))),
            Ok(outcome) => {
                let sol = outcome.into_solution().map_err(|_| Error::Solver("interrupted".into()))?;
                let read = |k: usize| {
                    let flow = xs[k].iter().map(|&v| sol.var_value_raw(v).round().max(0.0) as u64).collect();
                    let start = start_vars[k]
                        .iter()
                        .find(|(_, &v)| sol.var_value_raw(v) > 0.5)
                        .map(|(&q, _)| q)
                        .expect("one start is selected");
                    (flow, start)
                };
                Ok(Some([read(0), read(1)]))
            }
        }
    }

    /// Start state and edges of a flow, or a violated connectivity cut.
    /// `Ok` when the used edges are connected to `start`, else the two branches of a cut.
    fn check(&self, k: usize, flow: &[u64], start: usize) -> std::result::Result<(), [Cut; 2]> {
        let edges = &self.edges[k];
        let used: Vec<usize> = (0..edges.len()).filter(|&e| flow[e] > 0).collect();
        // undirected reachability over used edges from the start
        let mut comp: BTreeSet<usize> = [start].into();
        let mut changed = true;
        while changed {
            changed = false;
            for &e in &used {
                let (p, _, q) = edges[e];
                if comp.contains(&p) != comp.contains(&q) {
                    comp.insert(p);
                    comp.insert(q);
                    changed = true;
                }
            }
        }
        let outside: BTreeSet<usize> =
            used.iter().flat_map(|&e| [edges[e].0, edges[e].2]).filter(|q| !comp.contains(q)).collect();
        if outside.is_empty() {
            return Ok(());
        }
        // Pick one unreachable component for the cut.
        let mut d: BTreeSet<usize> = [*outside.iter().next().unwrap()].into();
        changed = true;
        while changed {
            changed = false;
            for &e in &used {
                let (p, _, q) = edges[e];
                if d.contains(&p) != d.contains(&q) {
                    d.insert(p);
                    d.insert(q);
                    changed = true;
                }
            }
        }
        let crossing: Vec<usize> =
            (0..edges.len()).filter(|&e| d.contains(&edges[e].0) != d.contains(&edges[e].2)).collect();
        let touching: Vec<usize> =
            (0..edges.len()).filter(|&e| d.contains(&edges[e].0) || d.contains(&edges[e].2)).collect();
        Err([Cut::Zero(k, touching), Cut::Enter(k, crossing)])
    }
}

/// Euler trail through a connected balanced flow, as a word.
fn euler_word(states: usize, edges: &[Transition], flow: &[u64], start: usize) -> Vec<usize> {
    let mut remaining: Vec<Vec<(usize, u64)>> = vec![Vec::new(); states];
    for (e, &(p, _, _)) in edges.iter().enumerate() {
        if flow[e] > 0 {
            remaining[p].push((e, flow[e]));
        }
    }
    // Hierholzer on edges
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut trail: Vec<usize> = Vec::new();
    while let Some(&(q, via)) = stack.last() {
        if let Some(slot) = remaining[q].iter_mut().find(|(_, c)| *c > 0) {
            slot.1 -= 1;
            let e = slot.0;
            stack.push((edges[e].2, Some(e)));
        } else {
            stack.pop();
            if let Some(e) = via {
                trail.push(e);
            }
        }
    }
    trail.reverse();
    trail.into_iter().map(|e| edges[e].1).collect()
}

/// A common Parikh vector of `a` and `b` respecting per-letter bounds, with
/// witness words. Every result is checked by running both automata on the
/// witness words.
pub fn common_image(a: &Nfa, b: &Nfa, cap: u64, bounds: &[CountBound]) -> Result<Option<CommonImage>> {
    if a.alphabet != b.alphabet {
        return Err(Error::AlphabetMismatch(format!("{:?} vs {:?}", a.alphabet, b.alphabet)));
    }
    if cap < 1 {
        return Err(Error::pre("parikh cap must be at least 1"));
    }
    let (ta, tb) = (a.trim(), b.trim());
    if ta.states == 0 || tb.states == 0 {
        return Ok(None);
    }
    let model = FlowModel {
        nfas: [&ta, &tb],
        edges: [ta.transitions.iter().copied().collect(), tb.transitions.iter().copied().collect()],
    };
    let mut stack: Vec<Vec<Cut>> = vec![Vec::new()];
    let mut nodes = 0;
    while let Some(cuts) = stack.pop() {
        nodes += 1;
        if nodes > NODE_LIMIT {
            return Err(Error::Solver("branch-and-bound node limit reached".into()));
        }
        let Some(flows) = model.solve(cap, bounds, &cuts)? else { continue };
        let mut violated = None;
        for k in 0..2 {
            if let Err(branches) = model.check(k, &flows[k].0, flows[k].1) {
                violated = Some(branches);
                break;
            }
        }
        match violated {
            Some([zero, enter]) => {
                let mut with_enter = cuts.clone();
                with_enter.push(enter);
                stack.push(with_enter);
                let mut with_zero = cuts;
                with_zero.push(zero);
                stack.push(with_zero);
            }
            None => {
                let word_a = euler_word(ta.states, &model.edges[0], &flows[0].0, flows[0].1);
                let word_b = euler_word(tb.states, &model.edges[1], &flows[1].0, flows[1].1);
                let vector = ParikhVector::of_word(a.alphabet.len(), &word_a);
                if !a.accepts(&word_a)
                    || !b.accepts(&word_b)
                    || ParikhVector::of_word(a.alphabet.len(), &word_b) != vector
                {
                    return Err(Error::Solver("flow solution failed certification".into()));
                }
                return Ok(Some(CommonImage { vector, word_a, word_b }));
            }
        }
    }
    Ok(None)
}

/// Some vector in `pk(L(a)) ∩ pk(L(b))` with every edge flow at most `cap`.
pub fn parikh_intersection_nonempty(a: &Nfa, b: &Nfa, cap: u64) -> Result<Option<ParikhVector>> {
    let found = common_image(a, b, cap, &[])?;
    if let Some(img) = &found {
        debug_assert!(parikh_member(a, &img.vector)? && parikh_member(b, &img.vector)?);
    }
    Ok(found.map(|img| img.vector))
}

fn parse_nfa_lines<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
    inherited: Option<&[String]>,
) -> Result<Nfa> {
    let mut alphabet: Option<Vec<String>> = inherited.map(|a| a.to_vec());
    let mut states = None;
    let (mut initial, mut accepting) = (BTreeSet::new(), BTreeSet::new());
    let mut raw_trans = Vec::new();
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let nums = |ts: &[&str]| -> Result<Vec<usize>> {
            ts.iter().map(|t| t.parse().map_err(|_| Error::parse(ln, 1, format!("expected a state, found {t:?}")))).collect()
        };
        match toks[0] {
            "alphabet" => alphabet = Some(toks[1..].iter().map(|s| s.to_string()).collect()),
            "states" if toks.len() == 2 => states = Some(nums(&toks[1..])?[0]),
            "init" => initial.extend(nums(&toks[1..])?),
            "final" => accepting.extend(nums(&toks[1..])?),
            "trans" if toks.len() == 4 => raw_trans.push((ln, nums(&toks[1..2])?[0], toks[2].to_string(), nums(&toks[3..4])?[0])),
            _ => return Err(Error::parse(ln, 1, format!("unexpected line {line:?}"))),
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::parse(1, 1, "missing `alphabet` line"))?;
    let states = states.ok_or_else(|| Error::parse(1, 1, "missing `states` line"))?;
    let mut transitions = BTreeSet::new();
    for (ln, p, l, q) in raw_trans {
        let a = alphabet.iter().position(|m| *m == l).ok_or_else(|| Error::parse(ln, 1, format!("unknown letter {l}")))?;
        transitions.insert((p, a, q));
    }
    Nfa::new(alphabet, states, initial, accepting, transitions).map_err(|e| Error::parse(1, 1, e.to_string()))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l))).filter(|(_, l)| !l.is_empty())
}

/// Parse the `.nfa` format.
pub fn parse_nfa(text: &str) -> Result<Nfa> {
    parse_nfa_lines(content_lines(text), None)
}

/// Parse NFA lines that may omit the alphabet, inheriting `alphabet`.
pub(crate) fn parse_nfa_block<'a>(lines: impl Iterator<Item = (usize, &'a str)>, alphabet: &[String]) -> Result<Nfa> {
    let nfa = parse_nfa_lines(lines, Some(alphabet))?;
    if nfa.alphabet != alphabet {
        return Err(Error::AlphabetMismatch("embedded automaton alphabet differs from the instance".into()));
    }
    Ok(nfa)
}

pub(crate) fn split_content_lines(text: &str) -> Vec<(usize, &str)> {
    content_lines(text).collect()
}

/// Render in `.nfa` format.
pub fn write_nfa(a: &Nfa) -> String {
    let join = |s: &BTreeSet<usize>| s.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ");
    let mut s = format!(
        "alphabet {}\nstates {}\ninit {}\nfinal {}\n",
        a.alphabet.join(" "),
        a.states,
        join(&a.initial),
        join(&a.accepting)
    );
    for &(p, l, q) in &a.transitions {
        s.push_str(&format!("trans {p} {} {q}\n", a.alphabet[l]));
    }
    s
}
