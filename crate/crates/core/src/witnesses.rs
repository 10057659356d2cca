//! Permutations of large tree-width inside grid classes, and the matrix
//! rewrites that turn a cell graph with two cycles into a deep tree.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::assembly::{f_assembly, matrix_f_assembly, Assembly, CellTree, PointRef, Tile, TileFamily};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::gridding::{cell_graph, consistent_orientation, CellEntry, CellGraph, GriddingMatrix, MatrixJson, Orientation};
use crate::perm::{incidence_graph, Permutation, Point};

pub type Cell = (usize, usize);

/// The `k`-step increasing staircase: `k` columns and `k + 1` rows with `c`
/// at `(i, i + 1)` and `d` directly below it at `(i, i)`.
pub fn staircase(k: usize, c: CellEntry, d: CellEntry) -> Result<GriddingMatrix> {
    if k == 0 {
        return Err(Error::Precondition("a staircase needs at least one step".into()));
    }
    let mut m = GriddingMatrix::empty(k, k + 1);
    for i in 0..k {
        m.set(i, i + 1, c.clone())?;
        m.set(i, i, d.clone())?;
    }
    Ok(m)
}

/// An all-`Inc` proper-turning path on `len` cells `(0,0), (1,0), (1,1),
/// (2,1), ...`; the first two cells share a row.
pub fn staircase_path(len: usize) -> GriddingMatrix {
    let cells: Vec<Cell> = (0..len).map(|t| (t.div_ceil(2), t / 2)).collect();
    let cols = cells.iter().map(|c| c.0 + 1).max().unwrap_or(0);
    let rows = cells.iter().map(|c| c.1 + 1).max().unwrap_or(0);
    GriddingMatrix::inc_cells(cols, rows, &cells).expect("cells are in range")
}

pub(crate) fn orientation_for(m: &GriddingMatrix) -> Result<Orientation> {
    consistent_orientation(m)?.ok_or_else(|| Error::Precondition("matrix has no consistent orientation".into()))
}

fn same_line(a: Cell, b: Cell, c: Cell) -> bool {
    (a.0 == b.0 && b.0 == c.0) || (a.1 == b.1 && b.1 == c.1)
}

/// Cells of a proper-turning path in path order, from `start` if given or
/// else from the least endpoint.
pub fn path_cells_from(m: &GriddingMatrix, start: Option<Cell>) -> Result<Vec<Cell>> {
    let cg = cell_graph(m);
    let n = cg.cells.len();
    if n == 0 {
        return Err(Error::Shape("matrix has no non-empty cells".into()));
    }
    if !cg.graph.is_tree() || (0..n).any(|v| cg.graph.degree(v) > 2) {
        return Err(Error::Shape("cell graph is not a path".into()));
    }
    let ends: Vec<usize> = (0..n).filter(|&v| cg.graph.degree(v) <= 1).collect();
    let first = match start {
        None => ends[0],
        Some(c) => match cg.index_of(c) {
            Some(i) if ends.contains(&i) => i,
            _ => return Err(Error::Shape(format!("cell {:?} is not an end of the path", c))),
        },
    };
    let mut order = vec![first];
    let mut prev = usize::MAX;
    let mut cur = first;
    while let Some(&next) = cg.graph.neighbors(cur).iter().find(|&&w| w != prev) {
        prev = cur;
        cur = next;
        order.push(cur);
    }
    let cells: Vec<Cell> = order.iter().map(|&i| cg.cells[i]).collect();
    if cells.windows(3).any(|w| same_line(w[0], w[1], w[2])) {
        return Err(Error::Shape("path has three consecutive cells in one line".into()));
    }
    Ok(cells)
}

pub fn path_cells(m: &GriddingMatrix) -> Result<Vec<Cell>> {
    path_cells_from(m, None)
}

/// A permutation whose incidence graph contains the `side × side` grid,
/// with `map[x][y]` the position realising grid vertex `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridWitness {
    pub matrix: GriddingMatrix,
    pub side: usize,
    pub assembly: Assembly,
    pub map: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridWitnessJson {
    pub matrix: MatrixJson,
    pub permutation: Permutation,
    /// `[x, y, position]`, all 1-based.
    pub map: Vec<[usize; 3]>,
}

impl GridWitness {
    pub fn perm(&self) -> &Permutation {
        self.assembly.perm()
    }

    /// Position pairs that must be edges of the incidence graph.
    pub fn grid_edges(&self) -> Vec<(usize, usize)> {
        let s = self.side;
        let mut out = Vec::new();
        for x in 0..s {
            for y in 0..s {
                if x + 1 < s {
                    out.push((self.map[x][y], self.map[x + 1][y]));
                }
                if y + 1 < s {
                    out.push((self.map[x][y], self.map[x][y + 1]));
                }
            }
        }
        out
    }

    pub fn missing_edges(&self) -> Vec<(usize, usize)> {
        let g = incidence_graph(self.perm());
        self.grid_edges().into_iter().filter(|&(a, b)| !g.has_edge(a, b)).collect()
    }

    pub fn verify(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.map.iter().flatten().all(|&p| seen.insert(p)) && self.missing_edges().is_empty()
    }

    pub fn to_json(&self) -> GridWitnessJson {
        let mut map = Vec::new();
        for (x, col) in self.map.iter().enumerate() {
            for (y, &p) in col.iter().enumerate() {
                map.push([x + 1, y + 1, p + 1]);
            }
        }
        GridWitnessJson { matrix: self.matrix.to_json(), permutation: self.perm().clone(), map }
    }
}

/// Builds the grid-subgraph witness on a proper-turning path of exactly
/// `2 * side - 1` cells.
pub fn lpp_grid_witness(m: &GriddingMatrix, side: usize) -> Result<GridWitness> {
    if side == 0 {
        return Err(Error::Precondition("grid side must be positive".into()));
    }
    let path = path_cells(m)?;
    if path.len() != 2 * side - 1 {
        return Err(Error::Shape(format!(
            "path has {} cells, a {}x{} grid needs {}",
            path.len(),
            side,
            side,
            2 * side - 1
        )));
    }
    let f = orientation_for(m)?;
    let mut fam = TileFamily::new(2 * side, m.cols(), m.rows());
    for (t, &(c, r)) in path.iter().enumerate() {
        let i = t + 1;
        let diag = i.min(2 * side - i);
        let pts = (1..=diag).map(|j| {
            let v = (side + 2 * j - diag - 1) as i64;
            Point::int(v, v)
        });
        fam.set(c, r, Tile::new(pts.collect()))?;
    }
    let assembly = f_assembly(&fam, &f)?;
    let pos = assembly.position_map();
    let s = |i: usize, j: usize| {
        let (col, row) = path[i - 1];
        pos[&PointRef { col, row, index: j - 1 }]
    };
    let mut map = vec![vec![0; side]; side];
    for x in 1..=side {
        for y in 1..=side {
            map[x - 1][y - 1] = if x + y <= side + 1 { s(x + y - 1, x) } else { s(x + y - 1, side - y + 1) };
        }
    }
    Ok(GridWitness { matrix: m.clone(), side, assembly, map })
}

/// A tree cell graph rooted at a chosen cell, with its leaves in a fixed
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeLayout {
    pub tree: CellTree,
    pub leaves: Vec<Cell>,
}

/// Roots a tree-shaped cell graph at `root`, or by default at the least cell
/// of degree at least two (the least cell if there is none).
pub fn tree_layout(m: &GriddingMatrix, root: Option<Cell>) -> Result<TreeLayout> {
    let cg = cell_graph(m);
    if !cg.graph.is_tree() {
        return Err(Error::Shape("cell graph is not a tree".into()));
    }
    let n = cg.cells.len();
    let r = match root {
        Some(c) => cg.index_of(c).ok_or_else(|| Error::Shape(format!("root {:?} is an empty cell", c)))?,
        None => (0..n).find(|&v| cg.graph.degree(v) >= 2).unwrap_or(0),
    };
    let edges: Vec<(Cell, Cell)> = cg.graph.edges().iter().map(|&(a, b)| (cg.cells[a], cg.cells[b])).collect();
    let tree = CellTree::from_edges(cg.cells[r], &edges)?;
    let leaves = if n == 1 {
        vec![cg.cells[0]]
    } else {
        (0..n).filter(|&v| v != r && cg.graph.degree(v) == 1).map(|v| cg.cells[v]).collect()
    };
    Ok(TreeLayout { tree, leaves })
}

/// Leaf `i` carries both ends of `edges[i]`; every other cell carries the
/// union over its children.
pub fn tree_sets(layout: &TreeLayout, edges: &[(usize, usize)]) -> Result<BTreeMap<Cell, BTreeSet<usize>>> {
    if layout.leaves.len() != edges.len() {
        return Err(Error::Precondition(format!(
            "tree has {} leaves but the graph has {} edges",
            layout.leaves.len(),
            edges.len()
        )));
    }
    let mut sets: BTreeMap<Cell, BTreeSet<usize>> = BTreeMap::new();
    for (&leaf, &(a, b)) in layout.leaves.iter().zip(edges) {
        sets.insert(leaf, BTreeSet::from([a, b]));
    }
    let mut cells = layout.tree.cells();
    cells.sort_by_key(|&c| std::cmp::Reverse(layout.tree.depth(c)));
    for c in cells {
        if sets.contains_key(&c) {
            continue;
        }
        let mut s = BTreeSet::new();
        for ch in layout.tree.children(c) {
            s.extend(sets[&ch].iter().copied());
        }
        sets.insert(c, s);
    }
    Ok(sets)
}

/// A permutation with a vertex colouring of its entries such that every
/// colour class is connected in the incidence graph and the contraction of
/// the classes contains the source graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorWitness {
    pub assembly: Assembly,
    /// Colour (0-based vertex) of each position.
    pub colors: Vec<usize>,
    pub vertices: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorWitnessJson {
    pub permutation: Permutation,
    /// 1-based vertex per position.
    pub colors: Vec<usize>,
}

impl MinorWitness {
    pub fn perm(&self) -> &Permutation {
        self.assembly.perm()
    }

    pub fn color_classes_connected(&self) -> bool {
        let g = incidence_graph(self.perm());
        (0..self.vertices).all(|c| {
            let class: Vec<usize> = (0..self.colors.len()).filter(|&p| self.colors[p] == c).collect();
            g.induced(&class).is_connected()
        })
    }

    /// Quotient of the incidence graph by the colour classes.
    pub fn contracted(&self) -> Graph {
        incidence_graph(self.perm()).contract(&self.colors, self.vertices)
    }

    /// Whether both minor conditions hold for `g`.
    pub fn verify(&self, g: &Graph) -> bool {
        let q = self.contracted();
        g.len() == self.vertices && self.color_classes_connected() && g.edges().iter().all(|&(a, b)| q.has_edge(a, b))
    }

    pub fn to_json(&self) -> MinorWitnessJson {
        MinorWitnessJson { permutation: self.perm().clone(), colors: self.colors.iter().map(|c| c + 1).collect() }
    }
}

/// Embeds `g` as a minor of a permutation in `Grid(tree)`, where the tree
/// has exactly one leaf per edge of `g`.
pub fn dtp_minor_witness(tree: &GriddingMatrix, g: &Graph) -> Result<MinorWitness> {
    dtp_minor_witness_rooted(tree, None, g)
}

/// As [`dtp_minor_witness`] with the tree rooted at `root` (see
/// [`tree_layout`]).
pub fn dtp_minor_witness_rooted(tree: &GriddingMatrix, root: Option<Cell>, g: &Graph) -> Result<MinorWitness> {
    if g.num_edges() == 0 {
        return Err(Error::Precondition("graph has no edges".into()));
    }
    if let Some(v) = (0..g.len()).find(|&v| g.degree(v) == 0) {
        return Err(Error::Precondition(format!("vertex {} is isolated", v + 1)));
    }
    let layout = tree_layout(tree, root)?;
    let sets = tree_sets(&layout, &g.edges())?;
    let f = orientation_for(tree)?;
    let size = g.len().max(layout.leaves.len());
    let mut fam = TileFamily::new(size, tree.cols(), tree.rows());
    let mut labels: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
    for (&(c, r), s) in &sets {
        let pts = s.iter().map(|&v| Point::int(v as i64 + 1, v as i64 + 1)).collect();
        fam.set(c, r, Tile::new(pts))?;
        labels.insert((c, r), s.iter().copied().collect());
    }
    let assembly = f_assembly(&fam, &f)?;
    let colors = assembly.source.iter().map(|s| labels[&(s.col, s.row)][s.index]).collect();
    Ok(MinorWitness { assembly, colors, vertices: g.len() })
}

/// The two shapes of a connected cell graph with exactly two independent
/// cycles and no pendant trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BicycleShape {
    /// Three internally disjoint paths from `u` to `v`; the shortest is the
    /// chord and the arcs are oriented `u → v` and `v → u`.
    Theta { u: Cell, v: Cell, chord: Vec<Cell>, arcs: [Vec<Cell>; 2] },
    /// A cycle through `u`, a cycle through `v` and a `u`–`v` path (a single
    /// cell when `u = v`). Cycles are listed from their anchor cell without
    /// repeating it.
    Dumbbell { u: Cell, v: Cell, cycle_u: Vec<Cell>, cycle_v: Vec<Cell>, path: Vec<Cell> },
}

fn walk(g: &Graph, from: usize, first: usize) -> Vec<usize> {
    let mut out = vec![from, first];
    let (mut prev, mut cur) = (from, first);
    while g.degree(cur) == 2 {
        let next = *g.neighbors(cur).iter().find(|&&w| w != prev).unwrap();
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

fn is_straight(p: &[Cell]) -> bool {
    p.iter().all(|c| c.0 == p[0].0) || p.iter().all(|c| c.1 == p[0].1)
}

pub fn bicycle_shape(m: &GriddingMatrix) -> Result<BicycleShape> {
    let cg = cell_graph(m);
    let g = &cg.graph;
    let n = g.len();
    let bad = || Error::Shape("cell graph is not two cycles joined by a path or a cycle with a chord".into());
    if n == 0 || !g.is_connected() || g.num_edges() != n + 1 {
        return Err(bad());
    }
    let high: Vec<usize> = (0..n).filter(|&v| g.degree(v) != 2).collect();
    let cells = |p: &[usize]| -> Vec<Cell> { p.iter().map(|&i| cg.cells[i]).collect() };
    match high.as_slice() {
        [w] if g.degree(*w) == 4 => {
            let mut loops: Vec<Vec<usize>> = Vec::new();
            for &nb in g.neighbors(*w) {
                let mut p = walk(g, *w, nb);
                p.pop();
                if !loops.iter().any(|l| l.contains(&nb)) {
                    loops.push(p);
                }
            }
            let c = cg.cells[*w];
            Ok(BicycleShape::Dumbbell {
                u: c,
                v: c,
                cycle_u: cells(&loops[0]),
                cycle_v: cells(&loops[1]),
                path: vec![c],
            })
        }
        [a, b] if g.degree(*a) == 3 && g.degree(*b) == 3 => {
            let (a, b) = (*a, *b);
            let from_a: Vec<Vec<usize>> = g.neighbors(a).iter().map(|&nb| walk(g, a, nb)).collect();
            let to_b: Vec<Vec<usize>> = from_a.iter().filter(|p| *p.last().unwrap() == b).cloned().collect();
            if to_b.len() == 3 {
                let mut paths: Vec<Vec<Cell>> = to_b.iter().map(|p| cells(p)).collect();
                paths.sort_by(|p, q| p.len().cmp(&q.len()).then_with(|| p.cmp(q)));
                let shortest = paths[0].len();
                // Among the shortest paths prefer a chord leaving both arcs bent.
                let pick = (0..3)
                    .filter(|&i| paths[i].len() == shortest)
                    .find(|&i| (0..3).filter(|&j| j != i).all(|j| !is_straight(&paths[j])))
                    .ok_or_else(|| Error::Shape("no chord leaves a corner on both arcs".into()))?;
                let chord = paths.remove(pick);
                let mut back = paths[1].clone();
                back.reverse();
                Ok(BicycleShape::Theta {
                    u: cg.cells[a],
                    v: cg.cells[b],
                    chord,
                    arcs: [paths[0].clone(), back],
                })
            } else if to_b.len() == 1 {
                let loop_a = from_a.iter().find(|p| *p.last().unwrap() == a).unwrap();
                let nb = *g.neighbors(b).iter().find(|&&w| g.degree(w) == 2 && walk(g, b, w).last() == Some(&b)).ok_or_else(bad)?;
                let loop_b = walk(g, b, nb);
                Ok(BicycleShape::Dumbbell {
                    u: cg.cells[a],
                    v: cg.cells[b],
                    cycle_u: cells(&loop_a[..loop_a.len() - 1]),
                    cycle_v: cells(&loop_b[..loop_b.len() - 1]),
                    path: cells(&to_b[0]),
                })
            } else {
                Err(bad())
            }
        }
        _ => Err(bad()),
    }
}

fn cyclic_corners(cycle: &[Cell]) -> Vec<usize> {
    let l = cycle.len();
    (0..l)
        .filter(|&t| !same_line(cycle[(t + l - 1) % l], cycle[t], cycle[(t + 1) % l]))
        .collect()
}

fn least_by_cell(cycle: &[Cell], idx: impl Iterator<Item = usize>) -> Option<usize> {
    idx.min_by_key(|&t| cycle[t])
}

fn block(size: usize, cells: &[Cell]) -> GriddingMatrix {
    GriddingMatrix::inc_cells(size, size, cells).expect("block cells are in range")
}

fn empty_family(m: &GriddingMatrix, size: usize) -> Vec<Vec<GriddingMatrix>> {
    vec![vec![GriddingMatrix::empty(size, size); m.rows()]; m.cols()]
}

/// Rewrites a cycle with a chord into a submatrix whose cell graph is two
/// cycles joined by a path, by 3×3 block substitution.
pub fn chord_to_two_cycles(m: &GriddingMatrix) -> Result<GriddingMatrix> {
    let (chord, arcs) = match bicycle_shape(m)? {
        BicycleShape::Theta { chord, arcs, .. } => (chord, arcs),
        BicycleShape::Dumbbell { .. } => {
            return Err(Error::Shape("cell graph is already two cycles joined by a path".into()))
        }
    };
    let f = orientation_for(m)?;
    let mut cyc = arcs[0].clone();
    cyc.extend_from_slice(&arcs[1][1..arcs[1].len() - 1]);
    let l = cyc.len();
    let corners = cyclic_corners(&cyc);
    let first_len = arcs[0].len();
    let x = least_by_cell(&cyc, corners.iter().copied().filter(|&t| t > 0 && t + 1 < first_len))
        .ok_or_else(|| Error::Shape("arc without an inner corner".into()))?;
    let y = least_by_cell(&cyc, corners.iter().copied().filter(|&t| t + 1 > first_len))
        .ok_or_else(|| Error::Shape("arc without an inner corner".into()))?;
    let p = block(3, &[(0, 0), (1, 1)]);
    let q = block(3, &[(1, 1), (2, 2)]);
    let r = block(3, &[(0, 1), (1, 2)]);
    let r_inv = block(3, &[(1, 0), (2, 1)]);
    let s = block(3, &[(1, 1)]);
    let mut lam = empty_family(m, 3);
    let mut t = (x + 1) % l;
    while t != y {
        lam[cyc[t].0][cyc[t].1] = p.clone();
        t = (t + 1) % l;
    }
    t = (y + 1) % l;
    while t != x {
        lam[cyc[t].0][cyc[t].1] = q.clone();
        t = (t + 1) % l;
    }
    for &(c, rr) in &chord[1..chord.len() - 1] {
        lam[c][rr] = s.clone();
    }
    let row_pred = |t: usize| cyc[(t + l - 1) % l].1 == cyc[t].1;
    lam[cyc[x].0][cyc[x].1] = if row_pred(x) { r.clone() } else { r_inv.clone() };
    lam[cyc[y].0][cyc[y].1] = if row_pred(y) { r_inv } else { r };
    matrix_f_assembly(m, &f, &lam)
}

/// A subdivided complete binary tree inside a cell graph: `branch[i]` is
/// the cell of tree vertex `i + 1` (breadth-first numbering) and each entry
/// of `edges` is `(parent, child, cells)` with the connecting cells from
/// parent to child inclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeWitness {
    pub matrix: GriddingMatrix,
    pub depth: usize,
    pub branch: Vec<Cell>,
    pub edges: Vec<(usize, usize, Vec<Cell>)>,
}

impl TreeWitness {
    /// Every connecting sequence is a path in the cell graph and different
    /// sequences share only their tree-vertex ends.
    pub fn verify(&self) -> bool {
        let cg: CellGraph = cell_graph(&self.matrix);
        let branch: BTreeSet<Cell> = self.branch.iter().copied().collect();
        if branch.len() != self.branch.len() || branch.iter().any(|&c| cg.index_of(c).is_none()) {
            return false;
        }
        let mut inner = BTreeSet::new();
        for (par, ch, cells) in &self.edges {
            if cells.first() != Some(&self.branch[*par]) || cells.last() != Some(&self.branch[*ch]) {
                return false;
            }
            if !cells.windows(2).all(|w| cg.has_cell_edge(w[0], w[1])) {
                return false;
            }
            for &c in &cells[1..cells.len() - 1] {
                if branch.contains(&c) || !inner.insert(c) {
                    return false;
                }
            }
        }
        self.edges.len() + 1 == self.branch.len()
    }

    /// Longest connecting sequence, in edges.
    pub fn subdivision(&self) -> usize {
        self.edges.iter().map(|e| e.2.len() - 1).max().unwrap_or(0)
    }
}

pub const MAX_TREE_DEPTH: usize = 10;

/// Rewrites two cycles joined by a path into a submatrix whose cell graph
/// contains a subdivided complete binary tree of depth `d`, by `2(2^d - 1)`
/// square block substitution.
pub fn two_cycles_to_tree(m: &GriddingMatrix, d: usize) -> Result<TreeWitness> {
    if d == 0 {
        return Err(Error::Precondition("tree depth must be at least 1".into()));
    }
    crate::error::guard("tree depth", MAX_TREE_DEPTH, d)?;
    let (u, v, cycle_u, cycle_v, path) = match bicycle_shape(m)? {
        BicycleShape::Dumbbell { u, v, cycle_u, cycle_v, path } => (u, v, cycle_u, cycle_v, path),
        BicycleShape::Theta { .. } => return Err(Error::Shape("cell graph is a cycle with a chord".into())),
    };
    let f = orientation_for(m)?;
    let nodes = (1usize << d) - 1;
    let inner = (1usize << (d - 1)) - 1;
    let size = 2 * nodes;
    let x = least_by_cell(&cycle_u, cyclic_corners(&cycle_u).into_iter().filter(|&t| t > 0))
        .ok_or_else(|| Error::Shape("cycle without a corner".into()))?;
    let y = least_by_cell(&cycle_v, cyclic_corners(&cycle_v).into_iter().filter(|&t| t > 0))
        .ok_or_else(|| Error::Shape("cycle without a corner".into()))?;
    let x_row = cycle_u[x - 1].1 == cycle_u[x].1;
    let y_row = cycle_v[y - 1].1 == cycle_v[y].1;
    // 1-based (col, row) entries of each block.
    let ident: Vec<Cell> = (1..=size).map(|t| (t, t)).collect();
    let odd: Vec<Cell> = (1..=nodes).map(|i| (2 * i - 1, 2 * i - 1)).collect();
    let even: Vec<Cell> = (1..=nodes).map(|i| (2 * i, 2 * i)).collect();
    let swap = |c: Cell, flip: bool| if flip { (c.1, c.0) } else { c };
    let x_cell = |i: usize, right: bool| swap((2 * (2 * i + usize::from(right)) - 1, 2 * i - 1 + usize::from(right)), !x_row);
    let y_cell = |i: usize| swap((2 * i, 2 * i - 1), !y_row);
    let mut x_block: Vec<Cell> = Vec::new();
    for i in 1..=inner {
        x_block.push(x_cell(i, false));
        x_block.push(x_cell(i, true));
    }
    let y_block: Vec<Cell> = (1..=nodes).map(y_cell).collect();
    let zero = |cs: &[Cell]| -> Vec<Cell> { cs.iter().map(|&(a, b)| (a - 1, b - 1)).collect() };
    let mut lam = empty_family(m, size);
    let mut put = |c: Cell, cs: &[Cell]| lam[c.0][c.1] = block(size, &zero(cs));
    for &c in &cycle_u[..x] {
        put(c, &ident);
    }
    for &c in &cycle_u[x + 1..] {
        put(c, &odd);
    }
    put(cycle_u[x], &x_block);
    for &c in &cycle_v[1..y] {
        put(c, &odd);
    }
    for &c in &cycle_v[y + 1..] {
        put(c, &even);
    }
    put(cycle_v[y], &y_block);
    for &c in &path {
        put(c, &ident);
    }
    let matrix = matrix_f_assembly(m, &f, &lam)?;
    let fine = |c: Cell, e: Cell| -> Cell {
        let a = if f.cols[c.0] < 0 { size - e.0 } else { e.0 - 1 };
        let b = if f.rows[c.1] < 0 { size - e.1 } else { e.1 - 1 };
        (c.0 * size + a, c.1 * size + b)
    };
    let diag = |c: Cell, t: usize| fine(c, (t, t));
    let branch: Vec<Cell> = (1..=nodes).map(|i| diag(u, 2 * i - 1)).collect();
    let back_u: Vec<Cell> = cycle_u[x + 1..].to_vec();
    let mut edges = Vec::new();
    for i in 1..=inner {
        let (lc, rc) = (2 * i, 2 * i + 1);
        let mut left: Vec<Cell> = cycle_u[..x].iter().map(|&c| diag(c, 2 * i - 1)).collect();
        left.push(fine(cycle_u[x], x_cell(i, false)));
        left.extend(back_u.iter().map(|&c| diag(c, 2 * lc - 1)));
        left.push(diag(u, 2 * lc - 1));
        edges.push((i - 1, lc - 1, left));
        let mut right: Vec<Cell> = path.iter().map(|&c| diag(c, 2 * i - 1)).collect();
        right.extend(cycle_v[1..y].iter().map(|&c| diag(c, 2 * i - 1)));
        right.push(fine(cycle_v[y], y_cell(i)));
        right.extend(cycle_v[y + 1..].iter().map(|&c| diag(c, 2 * i)));
        right.extend(path.iter().rev().map(|&c| diag(c, 2 * i)));
        right.extend(cycle_u[1..x].iter().map(|&c| diag(c, 2 * i)));
        right.push(fine(cycle_u[x], x_cell(i, true)));
        right.extend(back_u.iter().map(|&c| diag(c, 2 * rc - 1)));
        right.push(diag(u, 2 * rc - 1));
        edges.push((i - 1, rc - 1, right));
    }
    debug_assert_eq!(path.first(), Some(&u));
    debug_assert_eq!(path.last(), Some(&v));
    let w = TreeWitness { matrix, depth: d, branch, edges };
    if !w.verify() {
        return Err(Error::Shape("block rewrite did not produce a subdivided tree".into()));
    }
    Ok(w)
}

/// Deep-tree rewrite for either bicyclic shape, resolving a chord first.
pub fn bicycle_to_tree(m: &GriddingMatrix, d: usize) -> Result<TreeWitness> {
    match bicycle_shape(m)? {
        BicycleShape::Theta { .. } => two_cycles_to_tree(&chord_to_two_cycles(m)?, d),
        BicycleShape::Dumbbell { .. } => two_cycles_to_tree(m, d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridding::{classify_cell_graph, CellGraphClass};

    #[test]
    fn staircase_shape() {
        let m = staircase(1, CellEntry::Inc, CellEntry::Inc).unwrap();
        assert_eq!((m.cols(), m.rows()), (1, 2));
        let m = staircase(4, CellEntry::Inc, CellEntry::Inc).unwrap();
        assert_eq!(path_cells(&m).unwrap().len(), 8);
        assert!(staircase(0, CellEntry::Inc, CellEntry::Inc).is_err());
    }

    #[test]
    fn staircase_path_starts_in_a_row() {
        let m = staircase_path(6);
        let p = path_cells(&m).unwrap();
        assert_eq!(p[..3], [(0, 0), (1, 0), (1, 1)]);
        assert_eq!(p.len(), 6);
    }

    #[test]
    fn straight_runs_are_not_proper_turning() {
        let m = GriddingMatrix::inc_cells(3, 1, &[(0, 0), (1, 0), (2, 0)]).unwrap();
        assert!(matches!(path_cells(&m), Err(Error::Shape(_))));
    }

    #[test]
    fn small_grid_witnesses() {
        for side in 1..=4 {
            let w = lpp_grid_witness(&staircase_path(2 * side - 1), side).unwrap();
            assert!(w.verify(), "side {}", side);
            assert_eq!(w.perm().len(), side * side);
        }
        assert!(lpp_grid_witness(&staircase_path(4), 2).is_err());
    }

    #[test]
    fn theta_rewrites_to_dumbbell() {
        let m = GriddingMatrix::inc_cells(3, 3, &[(0, 0), (1, 0), (2, 0), (0, 2), (1, 2), (2, 2)]).unwrap();
        assert!(matches!(bicycle_shape(&m).unwrap(), BicycleShape::Theta { .. }));
        let out = chord_to_two_cycles(&m).unwrap();
        assert!(matches!(bicycle_shape(&out).unwrap(), BicycleShape::Dumbbell { .. }));
        assert_eq!(classify_cell_graph(&out), CellGraphClass::BicyclicComponent);
        assert!(chord_to_two_cycles(&out).is_err());
    }

    #[test]
    fn dumbbell_grows_a_tree() {
        let m = GriddingMatrix::inc_cells(
            4,
            4,
            &[(0, 0), (1, 0), (0, 1), (1, 1), (1, 2), (2, 2), (3, 2), (2, 3), (3, 3)],
        )
        .unwrap();
        for d in 1..=3 {
            let w = two_cycles_to_tree(&m, d).unwrap();
            assert!(w.verify());
            assert_eq!(w.branch.len(), (1 << d) - 1);
        }
    }
}
