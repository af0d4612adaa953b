//! Permutations over a grid that avoid a set of forbidden cells.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::perm::strip_comment;

/// Default threshold above which a letter counts as heavy.
pub const RLP_THRESHOLD: usize = 17;

pub type Cell = (usize, usize);

/// Row set `S` and column set `T` of equal size, both sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridDomain {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl GridDomain {
    pub fn new(rows: impl IntoIterator<Item = usize>, cols: impl IntoIterator<Item = usize>) -> Result<Self> {
        let rows: BTreeSet<usize> = rows.into_iter().collect();
        let cols: BTreeSet<usize> = cols.into_iter().collect();
        if rows.is_empty() || rows.len() != cols.len() {
            return Err(Error::pre(format!("grid needs equally many rows and columns, got {} and {}", rows.len(), cols.len())));
        }
        Ok(GridDomain { rows: rows.into_iter().collect(), cols: cols.into_iter().collect() })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(1..=n, 1..=n)
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, (r, c): Cell) -> bool {
        self.rows.binary_search(&r).is_ok() && self.cols.binary_search(&c).is_ok()
    }

    /// Subgrid of the rows and columns whose 1-based rank has the given parity.
    pub fn rank_class(&self, odd: bool) -> Option<GridDomain> {
        let pick = |v: &[usize]| -> Vec<usize> {
            v.iter().enumerate().filter(|(i, _)| (i % 2 == 0) == odd).map(|(_, &x)| x).collect()
        };
        GridDomain::new(pick(&self.rows), pick(&self.cols)).ok()
    }
}

/// Forbidden cells over a grid with at most `k` per row and per column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub domain: GridDomain,
    pub forbidden: BTreeSet<Cell>,
    pub k: usize,
}

impl Constraint {
    pub fn new(domain: GridDomain, forbidden: BTreeSet<Cell>, k: usize) -> Result<Self> {
        if let Some(c) = forbidden.iter().find(|c| !domain.contains(**c)) {
            return Err(Error::pre(format!("forbidden cell {c:?} outside the grid")));
        }
        let z = Constraint { domain, forbidden, k };
        let load = z.max_line_load();
        if load > k {
            return Err(Error::pre(format!("a line has {load} forbidden cells, more than k = {k}")));
        }
        Ok(z)
    }

    /// Constraint whose `k` is the actual maximum per line.
    pub fn tight(domain: GridDomain, forbidden: BTreeSet<Cell>) -> Result<Self> {
        let probe = Constraint { domain, forbidden, k: 0 };
        let k = probe.max_line_load();
        Constraint::new(probe.domain, probe.forbidden, k)
    }

    fn max_line_load(&self) -> usize {
        let per_row = self.domain.rows.iter().map(|r| self.forbidden.iter().filter(|c| c.0 == *r).count());
        let per_col = self.domain.cols.iter().map(|col| self.forbidden.iter().filter(|c| c.1 == *col).count());
        per_row.chain(per_col).max().unwrap_or(0)
    }
}

/// A bijection from the grid's rows to its columns, as cells in row order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPermutation {
    pub domain: GridDomain,
    pub elements: Vec<Cell>,
}

struct Matcher<'a> {
    allowed: &'a [Vec<bool>],
    col_owner: Vec<Option<usize>>,
    row_fixed: Vec<Option<usize>>,
}

impl Matcher<'_> {
    fn augment(&mut self, r: usize, seen: &mut [bool]) -> bool {
        let allowed = self.allowed;
        for c in 0..allowed.len() {
            if !allowed[r][c] || seen[c] {
                continue;
            }
            seen[c] = true;
            let owner = self.col_owner[c];
            match owner {
                None => {
                    self.col_owner[c] = Some(r);
                    return true;
                }
                Some(o) if self.row_fixed[o].is_none() && self.augment(o, seen) => {
                    self.col_owner[c] = Some(r);
                    return true;
                }
                _ => {}
            }
        }
        false
    }

    /// Perfect matching of the unfixed rows into columns not used by fixed rows.
    fn complete(&mut self) -> bool {
        let n = self.allowed.len();
        self.col_owner = vec![None; n];
        for (r, f) in self.row_fixed.iter().enumerate() {
            if let Some(c) = f {
                self.col_owner[*c] = Some(r);
            }
        }
        for r in 0..n {
            if self.row_fixed[r].is_some() {
                continue;
            }
            let mut seen: Vec<bool> = (0..n).map(|c| self.col_owner[c].is_some_and(|o| self.row_fixed[o].is_some())).collect();
            if !self.augment(r, &mut seen) {
                return false;
            }
        }
        true
    }
}

/// Lexicographically least permutation avoiding the forbidden cells, if any.
pub fn construct_permutation(z: &Constraint) -> Option<GridPermutation> {
    let d = &z.domain;
    let n = d.n();
    let allowed: Vec<Vec<bool>> =
        d.rows.iter().map(|&r| d.cols.iter().map(|&c| !z.forbidden.contains(&(r, c))).collect()).collect();
    let mut m = Matcher { allowed: &allowed, col_owner: vec![None; n], row_fixed: vec![None; n] };
    if !m.complete() {
        return None;
    }
    let mut used = vec![false; n];
    for r in 0..n {
        let mut placed = false;
        for c in 0..n {
            if used[c] || !allowed[r][c] {
                continue;
            }
            m.row_fixed[r] = Some(c);
            if m.complete() {
                used[c] = true;
                placed = true;
                break;
            }
            m.row_fixed[r] = None;
        }
        if !placed {
            return None;
        }
    }
    let elements = (0..n).map(|r| (d.rows[r], d.cols[m.row_fixed[r].unwrap()])).collect();
    Some(GridPermutation { domain: d.clone(), elements })
}

/// Sufficient condition `n > 2k` for every `(n, k)`-constraint to be satisfiable.
pub fn guaranteed_exists(n: usize, k: usize) -> bool {
    n > 2 * k
}

pub fn diag_adjacent(a: Cell, b: Cell) -> bool {
    a.0.abs_diff(b.0) == 1 && a.1.abs_diff(b.1) == 1
}

/// Cells of `grid` diagonally adjacent to some cell of `near`.
fn adjacency_constraint(grid: &GridDomain, near: &BTreeSet<Cell>) -> BTreeSet<Cell> {
    let mut out = BTreeSet::new();
    for &(r, c) in near {
        for (dr, dc) in [(-1i64, -1i64), (-1, 1), (1, -1), (1, 1)] {
            let (rr, cc) = (r as i64 + dr, c as i64 + dc);
            if rr >= 1 && cc >= 1 && grid.contains((rr as usize, cc as usize)) {
                out.insert((rr as usize, cc as usize));
            }
        }
    }
    out
}

/// Permutation over `grid` with no element diagonally adjacent to `placed`
/// or to another returned element.
///
/// Odd-rank rows and columns are filled first, then even-rank ones, so that
/// elements of one phase never sit in adjacent lines.
pub fn sparse_layer(grid: &GridDomain, placed: &BTreeSet<Cell>, theta: usize) -> Result<GridPermutation> {
    if grid.n() < theta + 1 {
        return Err(Error::pre(format!("sparse_layer needs at least {} rows, got {}", theta + 1, grid.n())));
    }
    let mut elements = Vec::new();
    let mut near = placed.clone();
    for odd in [true, false] {
        let Some(sub) = grid.rank_class(odd) else { continue };
        let z = Constraint::tight(sub.clone(), adjacency_constraint(&sub, &near))?;
        let phase = construct_permutation(&z).ok_or_else(|| {
            Error::LayerInfeasible(format!("{} rank class of a {}-line grid has no admissible permutation", if odd { "odd" } else { "even" }, grid.n()))
        })?;
        near.extend(phase.elements.iter().copied());
        elements.extend(phase.elements);
    }
    elements.sort();
    Ok(GridPermutation { domain: grid.clone(), elements })
}

/// Parse the `.con` format.
pub fn parse_con(text: &str) -> Result<Constraint> {
    let (mut rows, mut cols, mut k) = (None, None, None);
    let mut forbidden = BTreeSet::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let head = toks.next().unwrap();
        let nums = toks
            .map(|t| t.parse::<usize>().map_err(|_| Error::parse(ln + 1, 1, format!("expected a number, found {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        match head {
            "rows" => rows = Some(nums),
            "cols" => cols = Some(nums),
            "k" if nums.len() == 1 => k = Some(nums[0]),
            "forbid" if nums.len() == 2 => {
                forbidden.insert((nums[0], nums[1]));
            }
            _ => return Err(Error::parse(ln + 1, 1, format!("unexpected line {line:?}"))),
        }
    }
    let missing = |w: &str| Error::parse(1, 1, format!("missing `{w}` line"));
    let domain = GridDomain::new(rows.ok_or_else(|| missing("rows"))?, cols.ok_or_else(|| missing("cols"))?)?;
    Constraint::new(domain, forbidden, k.ok_or_else(|| missing("k"))?)
}

pub fn write_con(z: &Constraint) -> String {
    let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut s = format!("rows {}\ncols {}\nk {}\n", list(z.domain.rows()), list(z.domain.cols()), z.k);
    for (r, c) in &z.forbidden {
        s.push_str(&format!("forbid {r} {c}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_gives_identity() {
        let z = Constraint::new(GridDomain::square(3).unwrap(), BTreeSet::new(), 0).unwrap();
        assert_eq!(construct_permutation(&z).unwrap().elements, vec![(1, 1), (2, 2), (3, 3)]);
    }

    #[test]
    fn diagonal_forbidden_gives_least_derangement() {
        let z = Constraint::new(GridDomain::square(3).unwrap(), [(1, 1), (2, 2), (3, 3)].into(), 1).unwrap();
        assert_eq!(construct_permutation(&z).unwrap().elements, vec![(1, 2), (2, 3), (3, 1)]);
    }

    #[test]
    fn blocked_row() {
        let z = Constraint::new(GridDomain::square(2).unwrap(), [(1, 1), (1, 2)].into(), 2).unwrap();
        assert!(construct_permutation(&z).is_none());
    }

    #[test]
    fn k_is_enforced() {
        assert!(Constraint::new(GridDomain::square(2).unwrap(), [(1, 1), (1, 2)].into(), 1).is_err());
        assert!(Constraint::new(GridDomain::square(2).unwrap(), [(3, 1)].into(), 1).is_err());
    }

    #[test]
    fn guarantee_boundary() {
        assert!(guaranteed_exists(9, 4));
        assert!(!guaranteed_exists(8, 4));
        assert!(guaranteed_exists(3, 1));
    }

    #[test]
    fn rank_classes_use_non_adjacent_lines() {
        let g = GridDomain::new([2, 3, 5, 6, 7, 9], [1, 2, 3, 4, 5, 6]).unwrap();
        let odd = g.rank_class(true).unwrap();
        assert_eq!(odd.rows(), &[2, 5, 7]);
        let even = g.rank_class(false).unwrap();
        assert_eq!(even.cols(), &[2, 4, 6]);
        for sub in [odd, even] {
            assert!(sub.cols().windows(2).all(|w| w[1] - w[0] >= 2));
        }
    }

    #[test]
    fn sparse_layer_on_empty_grid() {
        let g = GridDomain::square(18).unwrap();
        let p = sparse_layer(&g, &BTreeSet::new(), RLP_THRESHOLD).unwrap();
        assert_eq!(p.elements.len(), 18);
        for a in &p.elements {
            for b in &p.elements {
                assert!(!diag_adjacent(*a, *b));
            }
        }
        assert!(sparse_layer(&GridDomain::square(17).unwrap(), &BTreeSet::new(), RLP_THRESHOLD).is_err());
    }

    #[test]
    fn con_round_trip() {
        let text = "rows 1 2 3\ncols 4 5 6\nk 1\nforbid 1 4\n# note\nforbid 2 5\n";
        let z = parse_con(text).unwrap();
        assert_eq!(parse_con(&write_con(&z)).unwrap(), z);
        assert!(parse_con("rows 1\ncols 1\n").is_err());
    }
}
