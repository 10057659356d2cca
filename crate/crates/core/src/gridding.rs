//! Gridding matrices, griddings, cell graphs and orientations.
//!
//! Columns and rows are addressed 0-based in the API, with row 0 at the
//! bottom; cut sequences in [`Gridding`] are 1-based positions/values so that
//! `col_cuts[0] == 1` and `col_cuts[k] == n + 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::{Permutation, Symmetry};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum CellEntry {
    #[default]
    Empty,
    Inc,
    Dec,
    /// The class of permutations avoiding the given pattern.
    Avoider(Permutation),
}

impl CellEntry {
    pub fn is_empty(&self) -> bool {
        matches!(self, CellEntry::Empty)
    }

    pub fn is_monotone(&self) -> bool {
        !matches!(self, CellEntry::Avoider(_))
    }

    /// Membership of `p` in the cell class.
    pub fn admits(&self, p: &Permutation) -> bool {
        match self {
            CellEntry::Empty => p.is_empty(),
            CellEntry::Inc => p.is_increasing(),
            CellEntry::Dec => p.is_decreasing(),
            CellEntry::Avoider(s) => p.avoids(s),
        }
    }

    pub fn transform(&self, s: Symmetry) -> CellEntry {
        match self {
            CellEntry::Empty => CellEntry::Empty,
            CellEntry::Inc | CellEntry::Dec => {
                let flip = s.reverse ^ s.complement;
                match (self, flip) {
                    (CellEntry::Inc, false) | (CellEntry::Dec, true) => CellEntry::Inc,
                    _ => CellEntry::Dec,
                }
            }
            CellEntry::Avoider(p) => CellEntry::Avoider(s.apply(p)),
        }
    }

    fn symbol(&self) -> Option<char> {
        match self {
            CellEntry::Empty => Some('.'),
            CellEntry::Inc => Some('/'),
            CellEntry::Dec => Some('\\'),
            CellEntry::Avoider(_) => None,
        }
    }
}

/// A `cols × rows` array of cell classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GriddingMatrix {
    cols: usize,
    rows: usize,
    cells: Vec<Vec<CellEntry>>,
}

impl GriddingMatrix {
    pub fn empty(cols: usize, rows: usize) -> Self {
        GriddingMatrix { cols, rows, cells: vec![vec![CellEntry::Empty; rows]; cols] }
    }

    /// Builds a matrix from `(col, row, entry)` triples (0-based).
    pub fn from_cells(cols: usize, rows: usize, cells: &[(usize, usize, CellEntry)]) -> Result<Self> {
        let mut m = GriddingMatrix::empty(cols, rows);
        for (c, r, e) in cells {
            m.set(*c, *r, e.clone())?;
        }
        Ok(m)
    }

    /// Builds a matrix whose listed cells are all `Inc`.
    pub fn inc_cells(cols: usize, rows: usize, cells: &[(usize, usize)]) -> Result<Self> {
        let triples: Vec<_> = cells.iter().map(|&(c, r)| (c, r, CellEntry::Inc)).collect();
        GriddingMatrix::from_cells(cols, rows, &triples)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn get(&self, col: usize, row: usize) -> &CellEntry {
        &self.cells[col][row]
    }

    pub fn set(&mut self, col: usize, row: usize, entry: CellEntry) -> Result<()> {
        if col >= self.cols || row >= self.rows {
            return Err(Error::DimensionMismatch(format!(
                "cell ({}, {}) outside {}x{} matrix",
                col, row, self.cols, self.rows
            )));
        }
        if let CellEntry::Avoider(s) = &entry {
            if s.len() < 2 {
                return Err(Error::Precondition(format!(
                    "Av({}) is finite; avoider cells need a pattern of length at least 2",
                    s
                )));
            }
        }
        self.cells[col][row] = entry;
        Ok(())
    }

    pub fn is_monotone(&self) -> bool {
        self.cells.iter().flatten().all(CellEntry::is_monotone)
    }

    /// Non-empty cells in column-major order.
    pub fn nonempty_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for c in 0..self.cols {
            for r in 0..self.rows {
                if !self.cells[c][r].is_empty() {
                    out.push((c, r));
                }
            }
        }
        out
    }

    /// The image of the matrix under a symmetry of the square, so that
    /// `Grid(m.transform(s)) = s(Grid(m))`.
    pub fn transform(&self, s: Symmetry) -> GriddingMatrix {
        let (k, l) = if s.inverse { (self.rows, self.cols) } else { (self.cols, self.rows) };
        let mut out = GriddingMatrix::empty(k, l);
        for c in 0..self.cols {
            for r in 0..self.rows {
                let (mut a, mut b) = if s.inverse { (r, c) } else { (c, r) };
                if s.reverse {
                    a = k - 1 - a;
                }
                if s.complement {
                    b = l - 1 - b;
                }
                out.cells[a][b] = self.cells[c][r].transform(s);
            }
        }
        out
    }

    /// Text form: one line per row, top row first.
    pub fn to_text(&self) -> Option<String> {
        let mut s = String::new();
        for r in (0..self.rows).rev() {
            for c in 0..self.cols {
                s.push(self.cells[c][r].symbol()?);
            }
            s.push('\n');
        }
        Some(s)
    }

    pub fn to_json(&self) -> MatrixJson {
        let mut cells = Vec::new();
        for (c, r) in self.nonempty_cells() {
            let entry = match &self.cells[c][r] {
                CellEntry::Inc => EntryJson::Tag("Inc".into()),
                CellEntry::Dec => EntryJson::Tag("Dec".into()),
                CellEntry::Avoider(s) => EntryJson::Avoid { avoid: s.to_string() },
                CellEntry::Empty => unreachable!(),
            };
            cells.push(CellJson { col: c + 1, row: r + 1, entry });
        }
        MatrixJson { cols: self.cols, rows: self.rows, cells }
    }

    pub fn from_json(j: &MatrixJson) -> Result<Self> {
        let mut m = GriddingMatrix::empty(j.cols, j.rows);
        for cell in &j.cells {
            if cell.col == 0 || cell.row == 0 {
                return Err(Error::Parse("matrix cells are numbered from 1".into()));
            }
            let entry = match &cell.entry {
                EntryJson::Tag(t) if t == "Inc" => CellEntry::Inc,
                EntryJson::Tag(t) if t == "Dec" => CellEntry::Dec,
                EntryJson::Tag(t) if t == "Empty" => CellEntry::Empty,
                EntryJson::Tag(t) => return Err(Error::Parse(format!("unknown cell entry {:?}", t))),
                EntryJson::Avoid { avoid } => CellEntry::Avoider(avoid.parse()?),
            };
            m.set(cell.col - 1, cell.row - 1, entry)?;
        }
        Ok(m)
    }

    /// Parses either the text form or the JSON form.
    pub fn parse_any(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            let j: MatrixJson = serde_json::from_str(s)?;
            GriddingMatrix::from_json(&j)
        } else {
            s.parse()
        }
    }
}

impl FromStr for GriddingMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines: Vec<(usize, Vec<CellEntry>)> = Vec::new();
        for (no, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let mut row = Vec::new();
            for ch in line.chars().filter(|c| !c.is_whitespace()) {
                row.push(match ch {
                    '.' => CellEntry::Empty,
                    '/' => CellEntry::Inc,
                    '\\' => CellEntry::Dec,
                    _ => {
                        return Err(Error::ParseAt {
                            line: no + 1,
                            msg: format!("unexpected character {:?}", ch),
                        })
                    }
                });
            }
            if let Some((_, first)) = lines.first() {
                if first.len() != row.len() {
                    return Err(Error::ParseAt {
                        line: no + 1,
                        msg: format!("row has {} cells, expected {}", row.len(), first.len()),
                    });
                }
            }
            lines.push((no + 1, row));
        }
        let rows = lines.len();
        let cols = lines.first().map_or(0, |l| l.1.len());
        let mut m = GriddingMatrix::empty(cols, rows);
        for (t, (_, row)) in lines.into_iter().enumerate() {
            for (c, e) in row.into_iter().enumerate() {
                m.cells[c][rows - 1 - t] = e;
            }
        }
        Ok(m)
    }
}

impl fmt::Display for GriddingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_text() {
            Some(t) => f.write_str(&t),
            None => f.write_str(&serde_json::to_string(&self.to_json()).map_err(|_| fmt::Error)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub cols: usize,
    pub rows: usize,
    pub cells: Vec<CellJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub col: usize,
    pub row: usize,
    pub entry: EntryJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Tag(String),
    Avoid { avoid: String },
}

/// Column and row cut sequences, 1-based and weakly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gridding {
    pub col_cuts: Vec<usize>,
    pub row_cuts: Vec<usize>,
}

impl Gridding {
    pub fn cols(&self) -> usize {
        self.col_cuts.len().saturating_sub(1)
    }

    pub fn rows(&self) -> usize {
        self.row_cuts.len().saturating_sub(1)
    }

    /// Column containing the 1-based position `x`.
    pub fn col_of(&self, x: usize) -> usize {
        self.col_cuts.partition_point(|&c| c <= x) - 1
    }

    /// Row containing the 1-based value `y`.
    pub fn row_of(&self, y: usize) -> usize {
        self.row_cuts.partition_point(|&c| c <= y) - 1
    }

    /// Cell `(col, row)` of the entry at 0-based position `i`.
    pub fn cell_of(&self, p: &Permutation, i: usize) -> (usize, usize) {
        (self.col_of(i + 1), self.row_of(p.at(i)))
    }

    fn well_formed(&self, n: usize) -> bool {
        let ok = |cuts: &[usize]| {
            cuts.len() >= 2
                && cuts[0] == 1
                && *cuts.last().unwrap() == n + 1
                && cuts.windows(2).all(|w| w[0] <= w[1])
        };
        ok(&self.col_cuts) && ok(&self.row_cuts)
    }
}

/// A permutation together with a gridding of it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GriddedPermutation {
    pub perm: Permutation,
    pub gridding: Gridding,
}

impl GriddedPermutation {
    pub fn cell_of(&self, i: usize) -> (usize, usize) {
        self.gridding.cell_of(&self.perm, i)
    }
}

/// Positions (0-based) of the entries lying in cell `(col, row)`.
pub fn cell_positions(p: &Permutation, g: &Gridding, col: usize, row: usize) -> Vec<usize> {
    let (lo, hi) = (g.col_cuts[col], g.col_cuts[col + 1]);
    let (vlo, vhi) = (g.row_cuts[row], g.row_cuts[row + 1]);
    (lo..hi).map(|x| x - 1).filter(|&i| (vlo..vhi).contains(&p.at(i))).collect()
}

/// True iff every cell's induced pattern lies in the matrix entry's class.
pub fn is_gridding(p: &Permutation, g: &Gridding, m: &GriddingMatrix) -> bool {
    if g.cols() != m.cols() || g.rows() != m.rows() || !g.well_formed(p.len()) {
        return false;
    }
    (0..m.cols()).all(|c| {
        (0..m.rows()).all(|r| {
            let pos = cell_positions(p, g, c, r);
            m.get(c, r).admits(&p.subpattern(&pos))
        })
    })
}

struct GriddingSearch<'a> {
    p: &'a Permutation,
    m: &'a GriddingMatrix,
    cols: Vec<usize>,
    rows: Vec<usize>,
}

impl GriddingSearch<'_> {
    fn col_step(&mut self, c: usize) -> bool {
        let n = self.p.len();
        let k = self.m.cols();
        if c == k {
            return self.row_step(0);
        }
        let lo = self.cols[c];
        let range: Vec<usize> = if c + 1 == k { vec![n + 1] } else { (lo..=n + 1).collect() };
        for hi in range {
            let col_empty = (0..self.m.rows()).all(|r| self.m.get(c, r).is_empty());
            if col_empty && hi > lo {
                break;
            }
            self.cols.push(hi);
            if self.col_step(c + 1) {
                return true;
            }
            self.cols.pop();
        }
        false
    }

    fn row_step(&mut self, r: usize) -> bool {
        let n = self.p.len();
        let l = self.m.rows();
        if r == l {
            return true;
        }
        let lo = self.rows[r];
        let range: Vec<usize> = if r + 1 == l { vec![n + 1] } else { (lo..=n + 1).collect() };
        for hi in range {
            self.rows.push(hi);
            let g = Gridding { col_cuts: self.cols.clone(), row_cuts: pad(&self.rows, l, n) };
            let row_ok = (0..self.m.cols()).all(|c| {
                let pos = cell_positions(self.p, &g, c, r);
                self.m.get(c, r).admits(&self.p.subpattern(&pos))
            });
            if row_ok && self.row_step(r + 1) {
                return true;
            }
            self.rows.pop();
        }
        false
    }
}

fn pad(cuts: &[usize], parts: usize, n: usize) -> Vec<usize> {
    let mut v = cuts.to_vec();
    while v.len() < parts + 1 {
        v.push(n + 1);
    }
    v
}

/// Exhaustive search for the lexicographically least `m`-gridding of `p`.
pub fn find_gridding(p: &Permutation, m: &GriddingMatrix) -> Option<Gridding> {
    if m.cols() == 0 || m.rows() == 0 {
        return None;
    }
    let mut s = GriddingSearch { p, m, cols: vec![1], rows: vec![1] };
    if s.col_step(0) {
        Some(Gridding { col_cuts: s.cols, row_cuts: s.rows })
    } else {
        None
    }
}

pub fn in_grid_class(p: &Permutation, m: &GriddingMatrix) -> bool {
    find_gridding(p, m).is_some()
}

/// Per-column and per-row signs; `-1` reverses a column or complements a row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation {
    pub cols: Vec<i8>,
    pub rows: Vec<i8>,
}

impl Orientation {
    pub fn identity(cols: usize, rows: usize) -> Self {
        Orientation { cols: vec![1; cols], rows: vec![1; rows] }
    }

    pub fn new(cols: Vec<i8>, rows: Vec<i8>) -> Result<Self> {
        if cols.iter().chain(&rows).any(|&s| s != 1 && s != -1) {
            return Err(Error::Precondition("orientation signs must be +1 or -1".into()));
        }
        Ok(Orientation { cols, rows })
    }

    pub fn is_identity(&self) -> bool {
        self.cols.iter().chain(&self.rows).all(|&s| s == 1)
    }

    fn check_dims(&self, cols: usize, rows: usize) -> Result<()> {
        if self.cols.len() != cols || self.rows.len() != rows {
            return Err(Error::DimensionMismatch(format!(
                "orientation is {}x{}, target is {}x{}",
                self.cols.len(),
                self.rows.len(),
                cols,
                rows
            )));
        }
        Ok(())
    }

    /// Whether every non-empty entry of `m` becomes `Inc` under `self`.
    pub fn is_consistent_for(&self, m: &GriddingMatrix) -> bool {
        match apply_orientation_matrix(m, self) {
            Ok(t) => t.nonempty_cells().iter().all(|&(c, r)| *t.get(c, r) == CellEntry::Inc),
            Err(_) => false,
        }
    }
}

/// Applies column reversals and row complements to a matrix.
pub fn apply_orientation_matrix(m: &GriddingMatrix, f: &Orientation) -> Result<GriddingMatrix> {
    f.check_dims(m.cols(), m.rows())?;
    let mut out = m.clone();
    for c in 0..m.cols() {
        for r in 0..m.rows() {
            let s = Symmetry { inverse: false, reverse: f.cols[c] < 0, complement: f.rows[r] < 0 };
            out.cells[c][r] = m.get(c, r).transform(s);
        }
    }
    Ok(out)
}

/// Reverses the entries in each flagged column band and complements the
/// values in each flagged row band; the gridding is unchanged.
pub fn apply_orientation(gp: &GriddedPermutation, f: &Orientation) -> Result<GriddedPermutation> {
    let g = &gp.gridding;
    f.check_dims(g.cols(), g.rows())?;
    let mut vals = gp.perm.values().to_vec();
    for (c, &s) in f.cols.iter().enumerate() {
        if s < 0 {
            vals[g.col_cuts[c] - 1..g.col_cuts[c + 1] - 1].reverse();
        }
    }
    for v in vals.iter_mut() {
        let r = g.row_of(*v);
        if f.rows[r] < 0 {
            *v = g.row_cuts[r] + g.row_cuts[r + 1] - 1 - *v;
        }
    }
    Ok(GriddedPermutation { perm: Permutation::new(vals)?, gridding: g.clone() })
}

/// Cells of a matrix together with their adjacency graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellGraph {
    pub cells: Vec<(usize, usize)>,
    pub graph: Graph,
}

impl CellGraph {
    pub fn index_of(&self, cell: (usize, usize)) -> Option<usize> {
        self.cells.iter().position(|&c| c == cell)
    }

    pub fn has_cell_edge(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.graph.has_edge(i, j),
            _ => false,
        }
    }
}

pub fn cell_graph(m: &GriddingMatrix) -> CellGraph {
    let cells = m.nonempty_cells();
    let mut idx = vec![vec![usize::MAX; m.rows()]; m.cols()];
    for (i, &(c, r)) in cells.iter().enumerate() {
        idx[c][r] = i;
    }
    let mut graph = Graph::new(cells.len());
    for r in 0..m.rows() {
        let line: Vec<usize> = (0..m.cols()).filter(|&c| idx[c][r] != usize::MAX).map(|c| idx[c][r]).collect();
        for w in line.windows(2) {
            graph.add_edge(w[0], w[1]);
        }
    }
    for c in 0..m.cols() {
        let line: Vec<usize> = (0..m.rows()).filter(|&r| idx[c][r] != usize::MAX).map(|r| idx[c][r]).collect();
        for w in line.windows(2) {
            graph.add_edge(w[0], w[1]);
        }
    }
    CellGraph { cells, graph }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellGraphClass {
    Acyclic,
    UnicyclicComponents,
    BicyclicComponent,
}

/// Maximum cyclomatic number over the components of a graph.
pub fn max_cycle_rank(g: &Graph) -> usize {
    g.components()
        .iter()
        .map(|comp| {
            let e: usize = comp.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
            e + 1 - comp.len()
        })
        .max()
        .unwrap_or(0)
}

pub fn classify_cell_graph(m: &GriddingMatrix) -> CellGraphClass {
    match max_cycle_rank(&cell_graph(m).graph) {
        0 => CellGraphClass::Acyclic,
        1 => CellGraphClass::UnicyclicComponents,
        _ => CellGraphClass::BicyclicComponent,
    }
}

/// Union-find over `cols + rows` nodes with the parity of each node relative
/// to its root.
struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<u8>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind { parent: (0..n).collect(), parity: vec![0; n] }
    }

    fn find(&mut self, v: usize) -> (usize, u8) {
        let p = self.parent[v];
        if p == v {
            return (v, 0);
        }
        let (root, par) = self.find(p);
        self.parent[v] = root;
        self.parity[v] ^= par;
        (root, self.parity[v])
    }

    /// Records `parity(a) xor parity(b) == want`; false on contradiction.
    fn union(&mut self, a: usize, b: usize, want: u8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == want;
        }
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ want;
        true
    }
}

/// Finds an orientation making every non-empty entry `Inc`, or `None` if
/// none exists. Within each constrained component the assignment with fewer
/// `-1` signs is chosen; ties go to the lexicographically least sign vector
/// over (columns, rows) with `-1 < +1`.
pub fn consistent_orientation(m: &GriddingMatrix) -> Result<Option<Orientation>> {
    if !m.is_monotone() {
        return Err(Error::Precondition("consistent orientation needs a monotone matrix".into()));
    }
    let k = m.cols();
    let n = k + m.rows();
    let mut uf = ParityUnionFind::new(n);
    for (c, r) in m.nonempty_cells() {
        let want = u8::from(*m.get(c, r) == CellEntry::Dec);
        if !uf.union(c, k + r, want) {
            return Ok(None);
        }
    }
    let mut members: Vec<Vec<(usize, u8)>> = vec![Vec::new(); n];
    for v in 0..n {
        let (root, par) = uf.find(v);
        members[root].push((v, par));
    }
    let mut signs = vec![1i8; n];
    for group in members.iter().filter(|g| !g.is_empty()) {
        let ones = group.iter().filter(|&&(_, p)| p == 1).count();
        let zeros = group.len() - ones;
        // Option A negates parity-1 nodes, option B negates parity-0 nodes.
        let use_a = match ones.cmp(&zeros) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            // The first node decides: it should be -1.
            std::cmp::Ordering::Equal => group[0].1 == 1,
        };
        for &(v, p) in group {
            if (p == 1) == use_a {
                signs[v] = -1;
            }
        }
    }
    Ok(Some(Orientation { cols: signs[..k].to_vec(), rows: signs[k..].to_vec() }))
}

/// Replaces every `Inc` entry with the 2×2 block having `Inc` at its two
/// diagonal cells and every `Dec` entry with the 2×2 block having `Dec` at
/// its two anti-diagonal cells.
pub fn double_matrix(m: &GriddingMatrix) -> Result<GriddingMatrix> {
    if !m.is_monotone() {
        return Err(Error::Precondition("doubling needs a monotone matrix".into()));
    }
    let mut out = GriddingMatrix::empty(2 * m.cols(), 2 * m.rows());
    for (c, r) in m.nonempty_cells() {
        let (a, b) = (2 * c, 2 * r);
        match m.get(c, r) {
            CellEntry::Inc => {
                out.cells[a][b] = CellEntry::Inc;
                out.cells[a + 1][b + 1] = CellEntry::Inc;
            }
            CellEntry::Dec => {
                out.cells[a][b + 1] = CellEntry::Dec;
                out.cells[a + 1][b] = CellEntry::Dec;
            }
            _ => unreachable!(),
        }
    }
    Ok(out)
}

/// The orientation `f_c(i) = (-1)^i`, `f_r(j) = (-1)^j` (1-based indices)
/// that is consistent for every doubled matrix.
pub fn alternating_orientation(cols: usize, rows: usize) -> Orientation {
    let sign = |i: usize| if i.is_multiple_of(2) { -1 } else { 1 };
    Orientation { cols: (0..cols).map(sign).collect(), rows: (0..rows).map(sign).collect() }
}
