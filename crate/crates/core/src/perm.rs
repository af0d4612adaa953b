//! Permutations, valued and labeled permutations, maximal blocks,
//! fingerprints and summaries.
//!
//! Coordinates are 1-based throughout: element `(r, c)` lives in row `r`
//! and column `c` of an `n x n` grid.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// An element of a permutation, `(row, col)`.
pub type Element = (usize, usize);

/// Valuations occurring at least this often are lumped into one bucket.
pub const COUNT_CAP: usize = 6;

/// A set of propositional letters attached to an element.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Valuation(pub BTreeSet<String>);

impl Valuation {
    pub fn empty() -> Self {
        Valuation(BTreeSet::new())
    }

    pub fn of<S: AsRef<str>>(letters: &[S]) -> Self {
        Valuation(letters.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn contains(&self, letter: &str) -> bool {
        self.0.contains(letter)
    }

    pub fn insert(&mut self, letter: &str) {
        self.0.insert(letter.to_string());
    }

    pub fn remove(&mut self, letter: &str) {
        self.0.remove(letter);
    }

    /// Keep only the letters in `vocab`.
    pub fn restrict(&self, vocab: &BTreeSet<String>) -> Valuation {
        Valuation(self.0.intersection(vocab).cloned().collect())
    }

    /// Form used in `.pm` files: `p,q` or `-`.
    pub fn file_form(&self) -> String {
        if self.0.is_empty() {
            "-".to_string()
        } else {
            self.0.iter().cloned().collect::<Vec<_>>().join(",")
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().cloned().collect::<Vec<_>>().join(","))
    }
}

fn fmt_opt(v: &Option<Valuation>) -> String {
    match v {
        Some(v) => v.to_string(),
        None => "⊥".to_string(),
    }
}

/// A permutation of `[n]`, stored as `row -> col`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    row_to_col: Vec<usize>,
    col_to_row: Vec<usize>,
}

impl Permutation {
    /// Build from `row_to_col[r-1] = c` with 1-based columns.
    pub fn from_row_to_col(row_to_col: Vec<usize>) -> Result<Self> {
        let n = row_to_col.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty permutation".into()));
        }
        let mut col_to_row = vec![0; n];
        for (r, &c) in row_to_col.iter().enumerate() {
            if c == 0 || c > n {
                return Err(Error::InvalidPermutation(format!("column {c} out of range 1..={n}")));
            }
            if col_to_row[c - 1] != 0 {
                return Err(Error::InvalidPermutation(format!("column {c} used twice")));
            }
            col_to_row[c - 1] = r + 1;
        }
        Ok(Permutation { row_to_col, col_to_row })
    }

    pub fn from_elements(elements: &[Element]) -> Result<Self> {
        let n = elements.len();
        let mut row_to_col = vec![0; n];
        for &(r, c) in elements {
            if r == 0 || r > n {
                return Err(Error::InvalidPermutation(format!("row {r} out of range 1..={n}")));
            }
            if row_to_col[r - 1] != 0 {
                return Err(Error::InvalidPermutation(format!("row {r} used twice")));
            }
            row_to_col[r - 1] = c;
        }
        Self::from_row_to_col(row_to_col)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_row_to_col((1..=n).collect()).expect("identity is a permutation")
    }

    pub fn n(&self) -> usize {
        self.row_to_col.len()
    }

    pub fn col_of(&self, row: usize) -> usize {
        self.row_to_col[row - 1]
    }

    pub fn row_of(&self, col: usize) -> usize {
        self.col_to_row[col - 1]
    }

    pub fn row_to_col(&self) -> &[usize] {
        &self.row_to_col
    }

    pub fn contains(&self, e: Element) -> bool {
        e.0 >= 1 && e.0 <= self.n() && self.row_to_col[e.0 - 1] == e.1
    }

    /// Elements in row order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.row_to_col.iter().enumerate().map(|(r, &c)| (r + 1, c))
    }
}

/// Relative position of one element with respect to another.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NeighborhoodType {
    Same,
    NE,
    N,
    NW,
    W,
    SW,
    S,
    SE,
    E,
    Far,
}

impl NeighborhoodType {
    pub const ALL: [NeighborhoodType; 10] = [
        NeighborhoodType::Same,
        NeighborhoodType::NE,
        NeighborhoodType::N,
        NeighborhoodType::NW,
        NeighborhoodType::W,
        NeighborhoodType::SW,
        NeighborhoodType::S,
        NeighborhoodType::SE,
        NeighborhoodType::E,
        NeighborhoodType::Far,
    ];

    /// Type of `(r+dr, c+dc)` seen from `(r, c)`.
    pub fn from_offsets(dr: i64, dc: i64) -> Self {
        use NeighborhoodType::*;
        match (dr, dc) {
            (0, 0) => Same,
            (1, 1) => SE,
            (1, -1) => SW,
            (1, _) => S,
            (-1, 1) => NE,
            (-1, -1) => NW,
            (-1, _) => N,
            (_, 1) => E,
            (_, -1) => W,
            _ => Far,
        }
    }

    /// The type of the same pair seen from the other end.
    pub fn inverse(self) -> Self {
        use NeighborhoodType::*;
        match self {
            Same => Same,
            NE => SW,
            N => S,
            NW => SE,
            W => E,
            SW => NE,
            S => N,
            SE => NW,
            E => W,
            Far => Far,
        }
    }

    pub fn arrow(self) -> &'static str {
        use NeighborhoodType::*;
        match self {
            Same => "•",
            NE => "↗",
            N => "↑",
            NW => "↖",
            W => "←",
            SW => "↙",
            S => "↓",
            SE => "↘",
            E => "→",
            Far => "∞",
        }
    }
}

impl fmt::Display for NeighborhoodType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.arrow())
    }
}

/// Type of `e2` as seen from `e1`.
pub fn neighborhood_type(p: &Permutation, e1: Element, e2: Element) -> Result<NeighborhoodType> {
    for e in [e1, e2] {
        if !p.contains(e) {
            return Err(Error::NotAnElement(e.0, e.1));
        }
    }
    Ok(NeighborhoodType::from_offsets(
        e2.0 as i64 - e1.0 as i64,
        e2.1 as i64 - e1.1 as i64,
    ))
}

/// A permutation together with a valuation per element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValuedPermutation {
    perm: Permutation,
    /// `sigma[r-1]` is the valuation of the element in row `r`.
    sigma: Vec<Valuation>,
}

impl ValuedPermutation {
    pub fn new(perm: Permutation, sigma: Vec<Valuation>) -> Result<Self> {
        if sigma.len() != perm.n() {
            return Err(Error::InvalidPermutation(format!(
                "{} valuations for {} elements",
                sigma.len(),
                perm.n()
            )));
        }
        Ok(ValuedPermutation { perm, sigma })
    }

    /// Build from arbitrary distinct cells; rows and columns are renumbered
    /// order-preservingly onto `[n]`.
    pub fn standardize(cells: &[(Element, Valuation)]) -> Result<Self> {
        let rows: BTreeSet<usize> = cells.iter().map(|((r, _), _)| *r).collect();
        let cols: BTreeSet<usize> = cells.iter().map(|((_, c), _)| *c).collect();
        if rows.len() != cells.len() || cols.len() != cells.len() {
            return Err(Error::InvalidPermutation("cells share a row or column".into()));
        }
        let rank_r: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i + 1)).collect();
        let rank_c: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i + 1)).collect();
        let n = cells.len();
        let mut row_to_col = vec![0; n];
        let mut sigma = vec![Valuation::empty(); n];
        for ((r, c), v) in cells {
            row_to_col[rank_r[r] - 1] = rank_c[c];
            sigma[rank_r[r] - 1] = v.clone();
        }
        Self::new(Permutation::from_row_to_col(row_to_col)?, sigma)
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn n(&self) -> usize {
        self.perm.n()
    }

    pub fn sigma(&self) -> &[Valuation] {
        &self.sigma
    }

    /// `σ(r, ·)`
    pub fn at_row(&self, r: usize) -> &Valuation {
        &self.sigma[r - 1]
    }

    /// `σ(·, c)`
    pub fn at_col(&self, c: usize) -> &Valuation {
        &self.sigma[self.perm.row_of(c) - 1]
    }

    pub fn val(&self, e: Element) -> Result<&Valuation> {
        if !self.perm.contains(e) {
            return Err(Error::NotAnElement(e.0, e.1));
        }
        Ok(&self.sigma[e.0 - 1])
    }

    /// Elements with their valuations, in row order.
    pub fn cells(&self) -> Vec<(Element, Valuation)> {
        self.perm.elements().zip(self.sigma.iter().cloned()).collect()
    }

    /// Letters used anywhere in the model.
    pub fn letters(&self) -> BTreeSet<String> {
        self.sigma.iter().flat_map(|v| v.0.iter().cloned()).collect()
    }

    pub fn map_valuations(&self, f: impl Fn(&Valuation) -> Valuation) -> Self {
        ValuedPermutation { perm: self.perm.clone(), sigma: self.sigma.iter().map(f).collect() }
    }
}

/// Direction of a projection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    /// Row order, the `->` projection.
    Row,
    /// Column order, the `|>` projection.
    Col,
}

/// A permutation with exactly one label per element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledPermutation<L> {
    pub perm: Permutation,
    /// `labels[r-1]` labels the element in row `r`.
    pub labels: Vec<L>,
}

impl<L: Clone> LabeledPermutation<L> {
    pub fn new(perm: Permutation, labels: Vec<L>) -> Result<Self> {
        if labels.len() != perm.n() {
            return Err(Error::InvalidPermutation("label count differs from size".into()));
        }
        Ok(LabeledPermutation { perm, labels })
    }

    pub fn n(&self) -> usize {
        self.perm.n()
    }

    pub fn label(&self, e: Element) -> &L {
        &self.labels[e.0 - 1]
    }

    pub fn projection(&self, dir: Dir) -> Vec<L> {
        match dir {
            Dir::Row => self.labels.clone(),
            Dir::Col => (1..=self.n()).map(|c| self.labels[self.perm.row_of(c) - 1].clone()).collect(),
        }
    }
}

/// Free function form of [`LabeledPermutation::projection`].
pub fn projection<L: Clone>(lp: &LabeledPermutation<L>, dir: Dir) -> Vec<L> {
    lp.projection(dir)
}

/// Shape of a maximal block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockType {
    Single,
    /// `↘`: each row's successor sits one column to the right.
    Desc,
    /// `↗`: each row's successor sits one column to the left.
    Asc,
}

impl fmt::Display for BlockType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockType::Single => "•",
            BlockType::Desc => "↘",
            BlockType::Asc => "↗",
        })
    }
}

/// Square region `[i, i+k] x [j, j+k]` whose elements form a diagonal run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub btype: BlockType,
}

impl Block {
    /// Number of elements.
    pub fn len(&self) -> usize {
        self.k + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Elements in row order.
    pub fn elements(&self) -> Vec<Element> {
        (0..=self.k)
            .map(|t| match self.btype {
                BlockType::Asc => (self.i + t, self.j + self.k - t),
                _ => (self.i + t, self.j + t),
            })
            .collect()
    }
}

/// Partition into maximal diagonal runs, ordered by top row.
pub fn maximal_blocks(p: &Permutation) -> Vec<Block> {
    let n = p.n();
    let mut out = Vec::new();
    let mut r = 1;
    while r <= n {
        let c = p.col_of(r);
        let step = if r < n { p.col_of(r + 1) as i64 - c as i64 } else { 0 };
        if step == 1 || step == -1 {
            let mut end = r + 1;
            while end < n && p.col_of(end + 1) as i64 - p.col_of(end) as i64 == step {
                end += 1;
            }
            let k = end - r;
            let (j, btype) = if step == 1 { (c, BlockType::Desc) } else { (c - k, BlockType::Asc) };
            out.push(Block { i: r, j, k, btype });
            r = end + 1;
        } else {
            out.push(Block { i: r, j: c, k: 0, btype: BlockType::Single });
            r += 1;
        }
    }
    out
}

/// Block type, boundary valuations and interior sequence of a maximal block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub btype: BlockType,
    /// Valuation of the row just above the block.
    pub r_minus: Option<Valuation>,
    /// Valuation of the row just below the block.
    pub r_plus: Option<Valuation>,
    /// Valuation of the column just left of the block.
    pub d_minus: Option<Valuation>,
    /// Valuation of the column just right of the block.
    pub d_plus: Option<Valuation>,
    /// Valuations of the block's elements in row order.
    pub seq: Vec<Valuation>,
}

/// Type and boundary valuations of a fingerprint.
pub type Header = (BlockType, Option<Valuation>, Option<Valuation>, Option<Valuation>, Option<Valuation>);

impl Fingerprint {
    pub fn header(&self) -> Header {
        (self.btype, self.r_minus.clone(), self.r_plus.clone(), self.d_minus.clone(), self.d_plus.clone())
    }

    /// `τ_→`: row boundary, sequence, row boundary.
    pub fn row_string(&self) -> Vec<Option<Valuation>> {
        let mut s = vec![self.r_minus.clone()];
        s.extend(self.seq.iter().cloned().map(Some));
        s.push(self.r_plus.clone());
        s
    }

    /// `τ_↓`: the block's elements in column order between the column boundaries.
    pub fn col_string(&self) -> Vec<Option<Valuation>> {
        let mut s = vec![self.d_minus.clone()];
        match self.btype {
            BlockType::Asc => s.extend(self.seq.iter().rev().cloned().map(Some)),
            _ => s.extend(self.seq.iter().cloned().map(Some)),
        }
        s.push(self.d_plus.clone());
        s
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq: Vec<String> = self.seq.iter().map(|v| v.to_string()).collect();
        write!(
            f,
            "({}, {}, {}, {}, {}, <{}>)",
            self.btype,
            fmt_opt(&self.r_minus),
            fmt_opt(&self.r_plus),
            fmt_opt(&self.d_minus),
            fmt_opt(&self.d_plus),
            seq.join(" ")
        )
    }
}

pub fn fingerprint_of(m: &ValuedPermutation, b: &Block) -> Result<Fingerprint> {
    if !maximal_blocks(m.perm()).contains(b) {
        return Err(Error::pre(format!("{b:?} is not a maximal block")));
    }
    Ok(fingerprint_unchecked(m, b))
}

fn fingerprint_unchecked(m: &ValuedPermutation, b: &Block) -> Fingerprint {
    let n = m.n();
    let row = |r: usize| (r >= 1 && r <= n).then(|| m.at_row(r).clone());
    let col = |c: usize| (c >= 1 && c <= n).then(|| m.at_col(c).clone());
    Fingerprint {
        btype: b.btype,
        r_minus: row(b.i.wrapping_sub(1)),
        r_plus: row(b.i + b.k + 1),
        d_minus: col(b.j.wrapping_sub(1)),
        d_plus: col(b.j + b.k + 1),
        seq: (b.i..=b.i + b.k).map(|r| m.at_row(r).clone()).collect(),
    }
}

/// Fingerprints of all maximal blocks, in block order.
pub fn fingerprints(m: &ValuedPermutation) -> Vec<(Block, Fingerprint)> {
    maximal_blocks(m.perm()).into_iter().map(|b| (b, fingerprint_unchecked(m, &b))).collect()
}

/// Fingerprint set plus valuation counts of a model.
///
/// `buckets[i]` holds the valuations occurring exactly `i + 1` times, for
/// counts below [`COUNT_CAP`]. Valuations in `valuations` outside every
/// bucket occur at least `COUNT_CAP` times.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Summary {
    pub fingerprints: BTreeSet<Fingerprint>,
    pub valuations: BTreeSet<Valuation>,
    pub buckets: Vec<BTreeSet<Valuation>>,
}

impl Summary {
    /// Occurrence count of `v`, capped at [`COUNT_CAP`].
    pub fn capped_count(&self, v: &Valuation) -> usize {
        if !self.valuations.contains(v) {
            return 0;
        }
        self.buckets.iter().position(|b| b.contains(v)).map_or(COUNT_CAP, |i| i + 1)
    }
}

pub fn summary_of(m: &ValuedPermutation) -> Summary {
    let fingerprints = fingerprints(m).into_iter().map(|(_, f)| f).collect();
    let mut counts: BTreeMap<&Valuation, usize> = BTreeMap::new();
    for v in m.sigma() {
        *counts.entry(v).or_default() += 1;
    }
    let mut buckets = vec![BTreeSet::new(); COUNT_CAP - 1];
    for (v, &c) in &counts {
        if c < COUNT_CAP {
            buckets[c - 1].insert((*v).clone());
        }
    }
    Summary { fingerprints, valuations: counts.keys().map(|v| (*v).clone()).collect(), buckets }
}

/// Remove every element in `[r+1, r2] x [c+1, c2]` and renumber.
pub fn cut_region(m: &ValuedPermutation, r: usize, c: usize, r2: usize, c2: usize) -> Result<ValuedPermutation> {
    if !m.perm().contains((r, c)) || !m.perm().contains((r2, c2)) {
        return Err(Error::pre("cut endpoints must be elements"));
    }
    if r >= r2 || c >= c2 {
        return Err(Error::pre("cut endpoints must satisfy r < r2 and c < c2"));
    }
    let kept: Vec<_> = m
        .cells()
        .into_iter()
        .filter(|((rr, cc), _)| !(*rr > r && *rr <= r2 && *cc > c && *cc <= c2))
        .collect();
    ValuedPermutation::standardize(&kept)
}

/// Overwrite the interior valuations of `target` with `donor`'s sequence.
pub fn replace_block(m: &ValuedPermutation, target: &Block, donor: &Fingerprint) -> Result<ValuedPermutation> {
    let own = fingerprint_of(m, target)?;
    if own.header() != donor.header() {
        return Err(Error::pre("donor header differs from target header"));
    }
    if own.seq.len() != donor.seq.len() {
        return Err(Error::pre("donor size differs from target size"));
    }
    let mut sigma = m.sigma().to_vec();
    for (t, v) in donor.seq.iter().enumerate() {
        sigma[target.i + t - 1] = v.clone();
    }
    ValuedPermutation::new(m.perm().clone(), sigma)
}

/// `3·2^(4v+3) + 2^(3(v+1)) + 3·2^v`, the block length bound for minimal models.
pub fn block_bound(letter_count: u32) -> Result<u64> {
    let over = || Error::Overflow(format!("block_bound({letter_count})"));
    let pow = |e: u32| 1u64.checked_shl(e).filter(|_| e < 64);
    let e1 = letter_count.checked_mul(4).and_then(|x| x.checked_add(3)).ok_or_else(over)?;
    let e2 = letter_count.checked_add(1).and_then(|x| x.checked_mul(3)).ok_or_else(over)?;
    let a = pow(e1).and_then(|x| x.checked_mul(3)).ok_or_else(over)?;
    let b = pow(e2).ok_or_else(over)?;
    let c = pow(letter_count).and_then(|x| x.checked_mul(3)).ok_or_else(over)?;
    a.checked_add(b).and_then(|x| x.checked_add(c)).ok_or_else(over)
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut ch = s.chars();
    matches!(ch.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && ch.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Strip a `#` comment and surrounding whitespace.
pub(crate) fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Parse the `.pm` model format.
pub fn parse_pm(text: &str) -> Result<ValuedPermutation> {
    let mut n: Option<usize> = None;
    let mut cells: Vec<(Element, Valuation)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::parse(ln + 1, 1, format!("expected a number, found {s:?}")));
        match n {
            None => {
                if toks.len() != 2 || toks[0] != "n" {
                    return Err(Error::parse(ln + 1, 1, "expected `n <N>`"));
                }
                let v = num(toks[1])?;
                if v == 0 {
                    return Err(Error::parse(ln + 1, 1, "models must be nonempty"));
                }
                n = Some(v);
            }
            Some(_) => {
                if toks.len() != 3 {
                    return Err(Error::parse(ln + 1, 1, "expected `<r> <c> <letters>`"));
                }
                let (r, c) = (num(toks[0])?, num(toks[1])?);
                let val = if toks[2] == "-" {
                    Valuation::empty()
                } else {
                    let letters: Vec<&str> = toks[2].split(',').collect();
                    if let Some(bad) = letters.iter().find(|l| !is_ident(l)) {
                        return Err(Error::parse(ln + 1, 1, format!("bad letter {bad:?}")));
                    }
                    Valuation::of(&letters)
                };
                cells.push(((r, c), val));
            }
        }
    }
    let n = n.ok_or_else(|| Error::parse(1, 1, "missing `n <N>` line"))?;
    if cells.len() != n {
        return Err(Error::parse(1, 1, format!("expected {n} element lines, found {}", cells.len())));
    }
    let mut row_to_col = vec![0; n];
    let mut sigma = vec![Valuation::empty(); n];
    for ((r, c), v) in cells {
        if r == 0 || r > n || row_to_col[r - 1] != 0 {
            return Err(Error::InvalidPermutation(format!("row {r} invalid or repeated")));
        }
        row_to_col[r - 1] = c;
        sigma[r - 1] = v;
    }
    ValuedPermutation::new(Permutation::from_row_to_col(row_to_col)?, sigma)
}

/// Render in `.pm` format; `header` lines are emitted as comments.
pub fn write_pm(m: &ValuedPermutation, header: &[String]) -> String {
    let mut s = String::new();
    for h in header {
        s.push_str(&format!("# {h}\n"));
    }
    s.push_str(&format!("n {}\n", m.n()));
    for ((r, c), v) in m.cells() {
        s.push_str(&format!("{r} {c} {}\n", v.file_form()));
    }
    s
}

/// A labeled permutation viewed as a model with singleton valuations.
pub fn labeled_to_valued(lp: &LabeledPermutation<String>) -> ValuedPermutation {
    ValuedPermutation::new(lp.perm.clone(), lp.labels.iter().map(|l| Valuation::of(&[l])).collect())
        .expect("sizes agree")
}

/// Inverse of [`labeled_to_valued`]; every valuation must be a singleton.
pub fn valued_to_labeled(m: &ValuedPermutation) -> Result<LabeledPermutation<String>> {
    let labels = m
        .sigma()
        .iter()
        .map(|v| {
            if v.0.len() == 1 {
                Ok(v.0.iter().next().unwrap().clone())
            } else {
                Err(Error::pre(format!("valuation {v} is not a single label")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    LabeledPermutation::new(m.perm().clone(), labels)
}

/// All permutations of `[n]` in lexicographic order of `row_to_col`.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=n).collect();
    loop {
        out.push(Permutation::from_row_to_col(cur.clone()).expect("valid"));
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}
