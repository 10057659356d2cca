//! Assembling gridded permutations from families of tiles.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridding::{
    apply_orientation, CellEntry, Gridding, GriddedPermutation, GriddingMatrix, Orientation,
};
use crate::perm::{rat, Permutation, Point, Rat, Symmetry};

/// A finite point set inside the `m`-box, optionally partitioned into
/// atomic pairs (each pair forms the pattern 12).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tile {
    pub points: Vec<Point>,
    pub pairs: Vec<[usize; 2]>,
}

impl Tile {
    pub fn new(points: Vec<Point>) -> Self {
        Tile { points, pairs: Vec::new() }
    }

    pub fn from_pairs(pairs: &[(Point, Point)]) -> Self {
        let mut t = Tile::default();
        for (lo, hi) in pairs {
            t.push_pair(lo.clone(), hi.clone());
        }
        t
    }

    pub fn push_pair(&mut self, low: Point, high: Point) {
        let i = self.points.len();
        self.points.push(low);
        self.points.push(high);
        self.pairs.push([i, i + 1]);
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Each point lies in exactly one pair and every pair is strictly
    /// increasing.
    pub fn is_atomic(&self) -> bool {
        let mut seen = vec![0u8; self.points.len()];
        for &[a, b] in &self.pairs {
            if a >= seen.len() || b >= seen.len() {
                return false;
            }
            seen[a] += 1;
            seen[b] += 1;
            let (p, q) = (&self.points[a], &self.points[b]);
            if !(p.x < q.x && p.y < q.y) {
                return false;
            }
        }
        seen.iter().all(|&s| s == 1)
    }

    pub fn fits(&self, m: usize) -> bool {
        let lo = BigRational::new(BigInt::from(1), BigInt::from(2));
        let hi = rat(m as i64) + &lo;
        self.points.iter().all(|p| p.x > lo && p.x < hi && p.y > lo && p.y < hi)
    }

    /// Tile holding the diagram of `p` (fits in any box of size ≥ |p|).
    pub fn from_permutation(p: &Permutation) -> Self {
        Tile::new(p.diagram())
    }
}

/// A `cols × rows` array of tiles sharing the box size `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileFamily {
    m: usize,
    cols: usize,
    rows: usize,
    tiles: Vec<Vec<Tile>>,
}

impl TileFamily {
    pub fn new(m: usize, cols: usize, rows: usize) -> Self {
        TileFamily { m, cols, rows, tiles: vec![vec![Tile::default(); rows]; cols] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn tile(&self, col: usize, row: usize) -> &Tile {
        &self.tiles[col][row]
    }

    /// Places a tile, rejecting points outside the open `m`-box.
    pub fn set(&mut self, col: usize, row: usize, tile: Tile) -> Result<()> {
        if col >= self.cols || row >= self.rows {
            return Err(Error::DimensionMismatch(format!(
                "tile ({}, {}) outside {}x{} family",
                col, row, self.cols, self.rows
            )));
        }
        if !tile.fits(self.m) {
            return Err(Error::Precondition(format!(
                "tile ({}, {}) has points outside the {}-box",
                col, row, self.m
            )));
        }
        self.tiles[col][row] = tile;
        Ok(())
    }

    pub fn total_points(&self) -> usize {
        self.tiles.iter().flatten().map(Tile::len).sum()
    }

    /// The matrix marking each non-empty tile as `Inc`.
    pub fn occupancy(&self) -> GriddingMatrix {
        let mut m = GriddingMatrix::empty(self.cols, self.rows);
        for c in 0..self.cols {
            for r in 0..self.rows {
                if !self.tiles[c][r].is_empty() {
                    m.set(c, r, CellEntry::Inc).expect("in range");
                }
            }
        }
        m
    }

    /// JSON form; fails if a coordinate does not fit in 64 bits.
    pub fn to_json(&self) -> Result<TileFamilyJson> {
        let mut tiles = Vec::new();
        for c in 0..self.cols {
            for r in 0..self.rows {
                let t = &self.tiles[c][r];
                if t.is_empty() {
                    continue;
                }
                let small = |v: &BigInt| {
                    i64::try_from(v).map_err(|_| Error::Precondition(format!("coordinate {} too large for JSON", v)))
                };
                let mut points = Vec::new();
                for p in &t.points {
                    points.push([small(p.x.numer())?, small(p.x.denom())?, small(p.y.numer())?, small(p.y.denom())?]);
                }
                let pairs = if t.pairs.is_empty() { None } else { Some(t.pairs.clone()) };
                tiles.push(TileJson { col: c + 1, row: r + 1, points, pairs });
            }
        }
        Ok(TileFamilyJson { m: self.m, cols: self.cols, rows: self.rows, tiles })
    }

    pub fn from_json(j: &TileFamilyJson) -> Result<Self> {
        let mut fam = TileFamily::new(j.m, j.cols, j.rows);
        for t in &j.tiles {
            if t.col == 0 || t.row == 0 {
                return Err(Error::Parse("tile cells are numbered from 1".into()));
            }
            let mut points = Vec::new();
            for (k, q) in t.points.iter().enumerate() {
                if q[1] == 0 || q[3] == 0 {
                    return Err(Error::Parse(format!(
                        "tile ({}, {}) point {}: zero denominator",
                        t.col, t.row, k
                    )));
                }
                let x = BigRational::new(BigInt::from(q[0]), BigInt::from(q[1]));
                let y = BigRational::new(BigInt::from(q[2]), BigInt::from(q[3]));
                points.push(Point::new(x, y));
            }
            let tile = Tile { points, pairs: t.pairs.clone().unwrap_or_default() };
            fam.set(t.col - 1, t.row - 1, tile)?;
        }
        Ok(fam)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileFamilyJson {
    pub m: usize,
    pub cols: usize,
    pub rows: usize,
    pub tiles: Vec<TileJson>,
}

/// Points are `[x_num, x_den, y_num, y_den]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileJson {
    pub col: usize,
    pub row: usize,
    pub points: Vec<[i64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[usize; 2]>>,
}

/// Where an output entry came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointRef {
    pub col: usize,
    pub row: usize,
    pub index: usize,
}

/// An assembled gridded permutation with the source of every entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assembly {
    pub gridded: GriddedPermutation,
    /// `source[i]` is the tile point placed at 0-based position `i`.
    pub source: Vec<PointRef>,
}

impl Assembly {
    pub fn perm(&self) -> &Permutation {
        &self.gridded.perm
    }

    pub fn gridding(&self) -> &Gridding {
        &self.gridded.gridding
    }

    pub fn position_map(&self) -> BTreeMap<PointRef, usize> {
        self.source.iter().enumerate().map(|(i, &s)| (s, i)).collect()
    }

    /// Output positions of the points of tile `(col, row)`, by point index.
    pub fn tile_positions(&self, col: usize, row: usize) -> Vec<usize> {
        let mut v: Vec<(usize, usize)> = self
            .source
            .iter()
            .enumerate()
            .filter(|(_, s)| s.col == col && s.row == row)
            .map(|(i, s)| (s.index, i))
            .collect();
        v.sort_unstable();
        v.into_iter().map(|(_, i)| i).collect()
    }
}

struct Placed {
    src: PointRef,
    x: Rat,
    y: Rat,
    px: i64,
    py: i64,
}

/// Sorts globally translated points by the exact rotation-and-perturbation
/// order and applies the orientation.
fn assemble(fam: &TileFamily, f: &Orientation, pert: &dyn Fn(PointRef) -> (i64, i64)) -> Result<Assembly> {
    if f.cols.len() != fam.cols || f.rows.len() != fam.rows {
        return Err(Error::DimensionMismatch(format!(
            "orientation is {}x{}, family is {}x{}",
            f.cols.len(),
            f.rows.len(),
            fam.cols,
            fam.rows
        )));
    }
    let m = rat(fam.m as i64);
    let mut pts = Vec::with_capacity(fam.total_points());
    for c in 0..fam.cols {
        for r in 0..fam.rows {
            for (k, p) in fam.tiles[c][r].points.iter().enumerate() {
                let src = PointRef { col: c, row: r, index: k };
                let (px, py) = pert(src);
                pts.push(Placed {
                    src,
                    x: &p.x + &m * rat(c as i64),
                    y: &p.y + &m * rat(r as i64),
                    px,
                    py,
                });
            }
        }
    }
    // Perturbation dominates the clockwise rotation.
    let xkey = |a: &Placed, b: &Placed| -> Ordering {
        a.x.cmp(&b.x).then(a.px.cmp(&b.px)).then(a.y.cmp(&b.y)).then(a.py.cmp(&b.py))
    };
    let ykey = |a: &Placed, b: &Placed| -> Ordering {
        a.y.cmp(&b.y).then(a.py.cmp(&b.py)).then(b.x.cmp(&a.x)).then(b.px.cmp(&a.px))
    };
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| xkey(&pts[i], &pts[j]));
    for w in order.windows(2) {
        if xkey(&pts[w[0]], &pts[w[1]]) == Ordering::Equal {
            let s = pts[w[0]].src;
            return Err(Error::Precondition(format!(
                "coincident points in tile ({}, {}) (point {})",
                s.col, s.row, s.index
            )));
        }
    }
    let mut by_y: Vec<usize> = (0..order.len()).collect();
    by_y.sort_by(|&i, &j| ykey(&pts[order[i]], &pts[order[j]]));
    let mut vals = vec![0usize; order.len()];
    for (v, &i) in by_y.iter().enumerate() {
        vals[i] = v + 1;
    }
    let mut col_cuts = vec![1usize];
    let mut row_cuts = vec![1usize];
    let mut col_count = vec![0usize; fam.cols];
    let mut row_count = vec![0usize; fam.rows];
    for p in &pts {
        col_count[p.src.col] += 1;
        row_count[p.src.row] += 1;
    }
    for c in col_count {
        col_cuts.push(col_cuts.last().unwrap() + c);
    }
    for r in row_count {
        row_cuts.push(row_cuts.last().unwrap() + r);
    }
    let mut source: Vec<PointRef> = order.iter().map(|&i| pts[i].src).collect();
    let gridded = GriddedPermutation {
        perm: Permutation::new(vals)?,
        gridding: Gridding { col_cuts, row_cuts },
    };
    let gridded = apply_orientation(&gridded, f)?;
    let g = &gridded.gridding;
    for (c, &s) in f.cols.iter().enumerate() {
        if s < 0 {
            source[g.col_cuts[c] - 1..g.col_cuts[c + 1] - 1].reverse();
        }
    }
    Ok(Assembly { gridded, source })
}

/// Places tile `(i, j)` at offset `(m·i, m·j)`, breaks coordinate ties as an
/// infinitesimal clockwise rotation would, reduces, and applies `f`.
pub fn f_assembly(fam: &TileFamily, f: &Orientation) -> Result<Assembly> {
    assemble(fam, f, &|_| (0, 0))
}

/// A rooted tree on cells; every non-root cell names its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellTree {
    pub root: (usize, usize),
    pub parent: BTreeMap<(usize, usize), (usize, usize)>,
}

impl CellTree {
    /// Roots the tree formed by `edges` at `root`.
    pub fn from_edges(root: (usize, usize), edges: &[((usize, usize), (usize, usize))]) -> Result<Self> {
        let mut adj: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for &(a, b) in edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut parent = BTreeMap::new();
        let mut stack = vec![root];
        let mut seen = std::collections::BTreeSet::from([root]);
        while let Some(v) = stack.pop() {
            for &w in adj.get(&v).map(|v| v.as_slice()).unwrap_or(&[]) {
                if seen.insert(w) {
                    parent.insert(w, v);
                    stack.push(w);
                } else if parent.get(&v) != Some(&w) {
                    return Err(Error::Shape("cell graph has a cycle".into()));
                }
            }
        }
        if seen.len() != adj.len().max(1) {
            return Err(Error::Shape("cell graph is disconnected".into()));
        }
        Ok(CellTree { root, parent })
    }

    pub fn cells(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = std::iter::once(self.root).chain(self.parent.keys().copied()).collect();
        v.sort_unstable();
        v
    }

    pub fn depth(&self, v: (usize, usize)) -> usize {
        let mut d = 0;
        let mut cur = v;
        while let Some(&p) = self.parent.get(&cur) {
            d += 1;
            cur = p;
        }
        d
    }

    pub fn children(&self, v: (usize, usize)) -> Vec<(usize, usize)> {
        self.parent.iter().filter(|(_, &p)| p == v).map(|(&c, _)| c).collect()
    }
}

/// F-assembly of atomic-pair tiles where each pair of a non-root tile is
/// shrunk infinitesimally inside the line it shares with its parent, so
/// parent pairs sandwich child pairs with equal coordinates. Shrinking grows
/// with depth so that nested pairs stay nested along straight runs.
pub fn modified_f_assembly(fam: &TileFamily, f: &Orientation, tree: &CellTree) -> Result<Assembly> {
    let cells = tree.cells();
    for c in 0..fam.cols {
        for r in 0..fam.rows {
            let t = &fam.tiles[c][r];
            if t.is_empty() {
                continue;
            }
            if !t.is_atomic() {
                return Err(Error::Precondition(format!("tile ({}, {}) is not a union of atomic pairs", c, r)));
            }
            if cells.binary_search(&(c, r)).is_err() {
                return Err(Error::Shape(format!("tile ({}, {}) is not a tree vertex", c, r)));
            }
        }
    }
    let mut role: BTreeMap<PointRef, (i64, i64)> = BTreeMap::new();
    for (&child, &par) in &tree.parent {
        let d = tree.depth(child) as i64;
        let same_row = child.1 == par.1;
        if !same_row && child.0 != par.0 {
            return Err(Error::Shape(format!("{:?} and its parent {:?} share no line", child, par)));
        }
        if child.0 >= fam.cols || child.1 >= fam.rows {
            return Err(Error::DimensionMismatch(format!("tree cell {:?} outside family", child)));
        }
        let t = &fam.tiles[child.0][child.1];
        for &[lo, hi] in &t.pairs {
            let lo_ref = PointRef { col: child.0, row: child.1, index: lo };
            let hi_ref = PointRef { col: child.0, row: child.1, index: hi };
            if same_row {
                role.insert(lo_ref, (0, d));
                role.insert(hi_ref, (0, -d));
            } else {
                role.insert(lo_ref, (d, 0));
                role.insert(hi_ref, (-d, 0));
            }
        }
    }
    assemble(fam, f, &|s| role.get(&s).copied().unwrap_or((0, 0)))
}

/// Whether a monotone matrix has `Grid = Inc`: its non-empty cells are all
/// `Inc` and strictly increase in both column and row.
pub fn is_increasing_matrix(m: &GriddingMatrix) -> bool {
    let cells = m.nonempty_cells();
    cells.iter().all(|&(c, r)| *m.get(c, r) == CellEntry::Inc)
        && cells.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1)
}

/// Block substitution: cell `(i, j)` of `m` becomes the `m' × m'` block
/// `lam[i][j]`, reversed when `f_c(i) = -1` and complemented when
/// `f_r(j) = -1`. Empty blocks are allowed for non-empty cells.
pub fn matrix_f_assembly(
    m: &GriddingMatrix,
    f: &Orientation,
    lam: &[Vec<GriddingMatrix>],
) -> Result<GriddingMatrix> {
    if f.cols.len() != m.cols() || f.rows.len() != m.rows() {
        return Err(Error::DimensionMismatch("orientation does not match matrix".into()));
    }
    if !f.is_consistent_for(m) {
        return Err(Error::Precondition("orientation is not consistent for the matrix".into()));
    }
    if lam.len() != m.cols() || lam.iter().any(|col| col.len() != m.rows()) {
        return Err(Error::DimensionMismatch("block family does not match matrix".into()));
    }
    let size = lam.first().and_then(|c| c.first()).map_or(0, |b| b.cols());
    let mut out = GriddingMatrix::empty(size * m.cols(), size * m.rows());
    for i in 0..m.cols() {
        for j in 0..m.rows() {
            let block = &lam[i][j];
            if block.cols() != size || block.rows() != size {
                return Err(Error::DimensionMismatch(format!("block ({}, {}) is not {}x{}", i, j, size, size)));
            }
            let empty = block.nonempty_cells().is_empty();
            if m.get(i, j).is_empty() {
                if !empty {
                    return Err(Error::Precondition(format!("block ({}, {}) must be empty", i, j)));
                }
                continue;
            }
            if empty {
                continue;
            }
            if !block.is_monotone() || !is_increasing_matrix(block) {
                return Err(Error::Precondition(format!("block ({}, {}) is not increasing", i, j)));
            }
            let s = Symmetry { inverse: false, reverse: f.cols[i] < 0, complement: f.rows[j] < 0 };
            let t = block.transform(s);
            for (a, b) in t.nonempty_cells() {
                out.set(i * size + a, j * size + b, t.get(a, b).clone())?;
            }
        }
    }
    Ok(out)
}
