//! Tile-gadget reductions from partitioned clique and partitioned subgraph
//! isomorphism to anchored pattern matching, and from anchored matching to
//! plain and surjective-coloured matching by inflating the anchors.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use crate::assembly::{modified_f_assembly, Assembly, CellTree, Tile, TileFamily};
use crate::error::{Error, Result};
use crate::gridding::{cell_graph, CellEntry, CellGraph, GriddingMatrix};
use crate::instances::{AnchoredPpmInstance, CliqueInstance, ColoredPpmInstance, InflationKind, PsiInstance};
use crate::perm::{Permutation, Point};
use crate::witnesses::{orientation_for, path_cells_from, tree_layout, tree_sets, Cell, TreeWitness};

/// Positions of the host vertices inside the gadgets. Colour classes are
/// laid out one after another; `alpha` numbers vertices in class order and
/// `beta` reverses the order inside each class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranks {
    /// Number of host vertices.
    pub n: usize,
    /// Gadget scale, `3n`.
    pub m: usize,
    /// Host vertices of each colour, in input order.
    pub classes: Vec<Vec<usize>>,
    pub alpha: Vec<Vec<usize>>,
    pub beta: Vec<Vec<usize>>,
    /// Allowed pairs `(a, i, b, j)` for colours `a != b`: the `i`-th vertex of
    /// colour `a` and the `j`-th vertex of colour `b` are adjacent in the host,
    /// or `a` and `b` are not adjacent in the pattern graph.
    pub allowed: BTreeSet<(usize, usize, usize, usize)>,
}

impl Ranks {
    pub fn colors(&self) -> usize {
        self.classes.len()
    }

    fn is_allowed(&self, a: usize, i: usize, b: usize, j: usize) -> bool {
        self.allowed.contains(&(a, i, b, j))
    }

    /// Vertex count and gadget scale used for coordinates; hosts with fewer
    /// than two vertices are laid out as if they had two.
    fn scale(&self) -> (i64, i64) {
        let n = self.n.max(2) as i64;
        (n, 3 * n)
    }

    /// Bottom coordinate of the guard pair above everything else in a
    /// non-anchor tile.
    fn guard(&self) -> i64 {
        let (n, m) = self.scale();
        n * m + 3
    }

    /// Coordinate of the upper anchor point.
    fn anchor_high(&self) -> i64 {
        let (n, m) = self.scale();
        (n + 1) * m
    }

    /// Side of the box holding every tile after a unit shift.
    pub fn box_size(&self) -> usize {
        self.anchor_high() as usize + 1
    }
}

pub fn compute_ranks(inst: &PsiInstance) -> Ranks {
    let classes = inst.classes();
    let n = inst.h.len();
    let mut alpha = Vec::with_capacity(classes.len());
    let mut beta = Vec::with_capacity(classes.len());
    let mut offset = 0;
    for class in &classes {
        let size = class.len();
        alpha.push((0..size).map(|i| offset + i).collect());
        beta.push((0..size).map(|i| offset + size - 1 - i).collect());
        offset += size;
    }
    let mut allowed = BTreeSet::new();
    for (a, ca) in classes.iter().enumerate() {
        for (b, cb) in classes.iter().enumerate() {
            if a == b {
                continue;
            }
            for (i, &u) in ca.iter().enumerate() {
                for (j, &w) in cb.iter().enumerate() {
                    if !inst.g.has_edge(a, b) || inst.h.has_edge(u, w) {
                        allowed.insert((a, i, b, j));
                    }
                }
            }
        }
    }
    Ranks { n, m: 3 * n, classes, alpha, beta, allowed }
}

/// Gadget tiles. Colour sets are 0-based pattern vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TileKind {
    Anchor,
    Pattern(BTreeSet<usize>),
    Assign,
    Identity(BTreeSet<usize>),
    Branch(usize, BTreeSet<usize>),
    Test(usize, BTreeSet<usize>),
    Merge(usize, BTreeSet<usize>),
}

fn push(t: &mut Tile, lo: (i64, i64), hi: (i64, i64)) {
    t.push_pair(Point::int(lo.0, lo.1), Point::int(hi.0, hi.1));
}

/// Moves a gadget tile one unit up and right, into the box of side
/// `ranks.box_size()`.
fn shifted(t: Tile) -> Tile {
    let one = crate::perm::rat(1);
    let points = t.points.into_iter().map(|p| Point::new(p.x + &one, p.y + &one)).collect();
    Tile { points, pairs: t.pairs }
}

fn check_colors(ranks: &Ranks, a: Option<usize>, w: &BTreeSet<usize>) -> Result<()> {
    let k = ranks.colors();
    if let Some(&c) = w.iter().chain(a.iter()).find(|&&c| c >= k) {
        return Err(Error::Precondition(format!("colour {} out of range 1..={}", c + 1, k)));
    }
    if let Some(a) = a {
        if w.iter().any(|&b| b <= a) {
            return Err(Error::Precondition(format!("colour set {:?} must lie above colour {}", w, a + 1)));
        }
    }
    Ok(())
}

/// Builds a gadget tile. Coordinates start at 0 (the lower anchor point).
pub fn build_tile(kind: &TileKind, ranks: &Ranks) -> Result<Tile> {
    let (n, m) = ranks.scale();
    let al = |a: usize, i: usize| ranks.alpha[a][i] as i64;
    let be = |a: usize, i: usize| ranks.beta[a][i] as i64;
    let size = |a: usize| ranks.classes[a].len();
    let mut t = Tile::default();
    match kind {
        TileKind::Anchor => {
            let h = ranks.anchor_high();
            push(&mut t, (0, 0), (h, h));
            return Ok(t);
        }
        TileKind::Pattern(w) => {
            check_colors(ranks, None, w)?;
            for &a in w {
                let a = a as i64 + 1;
                push(&mut t, (2 * a + 1, 2 * a + 1), (2 * a + 2, 2 * a + 2));
            }
        }
        TileKind::Assign => {
            for a in 0..ranks.colors() {
                for i in 0..size(a) {
                    let (x, y) = (al(a, i), be(a, i));
                    push(&mut t, (x * m + 3, y * m + 3), ((x + 1) * m + 2, (y + 1) * m + 2));
                }
            }
        }
        TileKind::Identity(w) => {
            check_colors(ranks, None, w)?;
            for &a in w {
                for i in 0..size(a) {
                    let x = al(a, i);
                    push(&mut t, (x * m + n + 3, x * m + 3), (x * m + n + 4, (x + 1) * m + 2));
                }
            }
        }
        TileKind::Branch(a, w) | TileKind::Test(a, w) => {
            let a = *a;
            check_colors(ranks, Some(a), w)?;
            let test = matches!(kind, TileKind::Test(..));
            for i in 0..size(a) {
                let (x, y) = (be(a, i), al(a, i));
                push(&mut t, (x * m + 3, y * m + 3), (x * m + 4, y * m + 4));
                for &b in w {
                    for j in 0..size(b) {
                        if !ranks.is_allowed(a, i, b, j) {
                            continue;
                        }
                        let bj = al(b, j);
                        let x = be(a, i) * m + 2 * bj + 5;
                        let y = if test { al(a, i) * m + 2 * bj + 5 } else { bj * m + 2 * al(a, i) + 3 };
                        push(&mut t, (x, y), (x + 1, y + 1));
                    }
                }
            }
        }
        TileKind::Merge(a, w) => {
            let a = *a;
            check_colors(ranks, Some(a), w)?;
            for i in 0..size(a) {
                let ai = al(a, i);
                push(&mut t, (ai * m + 3, ai * m + 3), (ai * m + 4, ai * m + 4));
                for &b in w {
                    for j in 0..size(b) {
                        if !ranks.is_allowed(a, i, b, j) {
                            continue;
                        }
                        let bj = al(b, j);
                        let y = ai * m + 2 * bj + 5;
                        push(&mut t, (bj * m + n + 2 - ai, y), (bj * m + n + 5 + ai, y + 1));
                    }
                }
            }
        }
    }
    push(&mut t, (1, 1), (2, 2));
    let g = ranks.guard();
    push(&mut t, (g, g), (g + 1, g + 1));
    Ok(t)
}

/// A reduction output together with the assemblies that produced it, so
/// that embeddings can be checked for respecting the tiles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub instance: AnchoredPpmInstance,
    /// Matrix whose cells carry the tiles; both sides lie in its grid class.
    pub matrix: GriddingMatrix,
    pub pattern_assembly: Assembly,
    pub text_assembly: Assembly,
}

impl Reduction {
    /// Whether `emb` (pattern position to text position) sends every pattern
    /// entry into the cell holding it on the pattern side.
    pub fn is_grid_preserving(&self, emb: &[usize]) -> bool {
        let (p, pg) = (self.pattern_assembly.perm(), self.pattern_assembly.gridding());
        let (t, tg) = (self.text_assembly.perm(), self.text_assembly.gridding());
        emb.len() == p.len() && emb.iter().enumerate().all(|(i, &j)| j < t.len() && pg.cell_of(p, i) == tg.cell_of(t, j))
    }
}

fn assemble_pair(
    ranks: &Ranks,
    matrix: &GriddingMatrix,
    tree: &CellTree,
    tiles: &[(Cell, TileKind, TileKind)],
    provenance: serde_json::Value,
) -> Result<Reduction> {
    let f = orientation_for(matrix)?;
    let size = ranks.box_size();
    let mut pf = TileFamily::new(size, matrix.cols(), matrix.rows());
    let mut tf = TileFamily::new(size, matrix.cols(), matrix.rows());
    for (cell, p, t) in tiles {
        pf.set(cell.0, cell.1, shifted(build_tile(p, ranks)?))?;
        tf.set(cell.0, cell.1, shifted(build_tile(t, ranks)?))?;
    }
    let pa = modified_f_assembly(&pf, &f, tree)?;
    let ta = modified_f_assembly(&tf, &f, tree)?;
    let root = tree.root;
    let anchor = |a: &Assembly| -> (usize, usize) {
        let pos = a.tile_positions(root.0, root.1);
        (pos[0].min(pos[1]), pos[0].max(pos[1]))
    };
    let (pattern_anchor, text_anchor) = (anchor(&pa), anchor(&ta));
    let inflation = if pa.perm().at(pattern_anchor.0) < pa.perm().at(pattern_anchor.1) {
        InflationKind::Increasing
    } else {
        InflationKind::Decreasing
    };
    let instance = AnchoredPpmInstance {
        pattern: pa.perm().clone(),
        text: ta.perm().clone(),
        pattern_anchor,
        text_anchor,
        inflation,
        provenance,
    };
    instance.validate()?;
    Ok(Reduction { instance, matrix: matrix.clone(), pattern_assembly: pa, text_assembly: ta })
}

fn restrict(m: &GriddingMatrix, keep: &BTreeSet<Cell>) -> Result<GriddingMatrix> {
    let mut out = GriddingMatrix::empty(m.cols(), m.rows());
    for &(c, r) in keep {
        out.set(c, r, m.get(c, r).clone())?;
    }
    Ok(out)
}

fn shares_row(a: Cell, b: Cell) -> bool {
    a.1 == b.1
}

fn shares_col(a: Cell, b: Cell) -> bool {
    a.0 == b.0
}

fn path_length(k: usize) -> usize {
    4 * k - 2
}

/// Partitioned clique to anchored matching over a monotone matrix whose cell
/// graph is a path of at least `4k - 2` cells, one end of which shares a row
/// with its neighbour. Only the first `4k - 2` cells from that end are used.
pub fn lpp_reduce(inst: &CliqueInstance, path: &GriddingMatrix) -> Result<Reduction> {
    let k = inst.k;
    if k == 0 {
        return Err(Error::Precondition("the clique size must be positive".into()));
    }
    if !path.is_monotone() {
        return Err(Error::Precondition("path matrix must be monotone".into()));
    }
    let mut cells = path_cells_from(path, None)?;
    if cells.len() >= 2 && !shares_row(cells[0], cells[1]) {
        cells.reverse();
    }
    let len = path_length(k);
    if cells.len() < len {
        return Err(Error::Shape(format!("path has {} cells, {} needed", cells.len(), len)));
    }
    if !shares_row(cells[0], cells[1]) {
        return Err(Error::Shape("no end of the path shares a row with its neighbour".into()));
    }
    cells.truncate(len);
    let matrix = restrict(path, &cells.iter().copied().collect())?;
    let ranks = compute_ranks(&inst.to_psi());
    let upto = |a: usize| -> BTreeSet<usize> { (a..k).collect() };
    let mut tiles = vec![
        (cells[0], TileKind::Anchor, TileKind::Anchor),
        (cells[1], TileKind::Pattern(upto(0)), TileKind::Assign),
    ];
    for a in 0..k - 1 {
        let p = TileKind::Pattern(upto(a));
        let base = 4 * a + 2;
        tiles.push((cells[base], p.clone(), TileKind::Identity(upto(a))));
        tiles.push((cells[base + 1], p.clone(), TileKind::Branch(a, upto(a + 1))));
        tiles.push((cells[base + 2], p.clone(), TileKind::Test(a, upto(a + 1))));
        tiles.push((cells[base + 3], p, TileKind::Merge(a, upto(a + 1))));
    }
    let edges: Vec<(Cell, Cell)> = cells.windows(2).map(|w| (w[0], w[1])).collect();
    let tree = CellTree::from_edges(cells[0], &edges)?;
    let provenance = json!({ "reduction": "clique", "k": k, "host_vertices": inst.h.len(), "cells": len });
    assemble_pair(&ranks, &matrix, &tree, &tiles, provenance)
}

/// Roles of the cells of a tree matrix usable by [`dtp_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DtpShape {
    pub tree: CellTree,
    pub root_child: Cell,
    /// Leaves in `(col, row)` order.
    pub leaves: Vec<Cell>,
}

impl DtpShape {
    pub fn petiole(&self, leaf: Cell) -> Cell {
        self.tree.parent[&leaf]
    }
}

fn is_corner(a: Cell, b: Cell, c: Cell) -> bool {
    !(shares_row(a, b) && shares_row(b, c)) && !(shares_col(a, b) && shares_col(b, c))
}

/// Checks that the cell graph of `m` is a tree with a root whose single
/// neighbour shares its row, where:
/// every leaf shares a column with its parent (the petiole);
/// every petiole has degree two and shares a row with its own parent, which
/// is neither the root nor the root's child;
/// the root's child reaches its children through its column;
/// every other vertex with a single child is a corner.
pub fn dtp_shape(m: &GriddingMatrix) -> Result<DtpShape> {
    let cg = cell_graph(m);
    if !cg.graph.is_tree() {
        return Err(Error::Shape("cell graph is not a tree".into()));
    }
    let deg = |c: Cell| cg.graph.degree(cg.index_of(c).expect("cell"));
    let ends: Vec<usize> = (0..cg.cells.len()).filter(|&v| cg.graph.degree(v) == 1).collect();
    let neighbor = |v: usize| cg.cells[*cg.graph.neighbors(v).iter().next().expect("degree one")];
    let roots: Vec<Cell> = ends.iter().filter(|&&v| shares_row(cg.cells[v], neighbor(v))).map(|&v| cg.cells[v]).collect();
    if roots.len() != 1 {
        return Err(Error::Shape(format!("expected one end sharing a row with its neighbour, found {}", roots.len())));
    }
    let root = roots[0];
    let layout = tree_layout(m, Some(root))?;
    let tree = layout.tree;
    let root_child = tree.children(root)[0];
    for ch in tree.children(root_child) {
        if !shares_col(root_child, ch) {
            return Err(Error::Shape(format!("root child {:?} meets {:?} outside its column", root_child, ch)));
        }
    }
    let mut leaves = layout.leaves;
    leaves.sort_unstable();
    let mut petioles = BTreeSet::new();
    for &leaf in &leaves {
        let pet = tree.parent[&leaf];
        if !shares_col(leaf, pet) {
            return Err(Error::Shape(format!("leaf {:?} does not share a column with {:?}", leaf, pet)));
        }
        if deg(pet) != 2 {
            return Err(Error::Shape(format!("petiole {:?} of leaf {:?} branches", pet, leaf)));
        }
        let up = tree.parent[&pet];
        if up == root || up == root_child {
            return Err(Error::Shape(format!("petiole {:?} hangs off the root", pet)));
        }
        if !shares_row(pet, up) {
            return Err(Error::Shape(format!("petiole {:?} does not share a row with {:?}", pet, up)));
        }
        petioles.insert(pet);
    }
    for (&v, &par) in &tree.parent {
        let ch = tree.children(v);
        if ch.len() == 1 && !is_corner(par, v, ch[0]) {
            return Err(Error::Shape(format!("{:?} has a single child and is not a corner", v)));
        }
    }
    Ok(DtpShape { tree, root_child, leaves })
}

/// Partitioned subgraph isomorphism to anchored matching over a monotone
/// tree matrix accepted by [`dtp_shape`] with one leaf per edge of the pattern
/// graph. Leaf `i` in `(col, row)` order carries the `i`-th edge.
pub fn dtp_reduce(inst: &PsiInstance, tree: &GriddingMatrix) -> Result<Reduction> {
    if !tree.is_monotone() {
        return Err(Error::Precondition("tree matrix must be monotone".into()));
    }
    let k = inst.colors();
    if k == 0 || (0..k).any(|a| inst.g.degree(a) == 0) {
        return Err(Error::Precondition("pattern graph must be non-empty without isolated vertices".into()));
    }
    let shape = dtp_shape(tree)?;
    let edges = inst.g.edges();
    let layout = crate::witnesses::TreeLayout { tree: shape.tree.clone(), leaves: shape.leaves.clone() };
    let sets = tree_sets(&layout, &edges)?;
    let ranks = compute_ranks(inst);
    let root = shape.tree.root;
    let petioles: BTreeMap<Cell, (usize, usize)> =
        shape.leaves.iter().zip(&edges).map(|(&l, &e)| (shape.petiole(l), e)).collect();
    let leaf_edges: BTreeMap<Cell, (usize, usize)> = shape.leaves.iter().copied().zip(edges.iter().copied()).collect();
    let mut tiles = Vec::new();
    for cell in shape.tree.cells() {
        if cell == root {
            tiles.push((cell, TileKind::Anchor, TileKind::Anchor));
            continue;
        }
        let p = TileKind::Pattern(if cell == shape.root_child { (0..k).collect() } else { sets[&cell].clone() });
        let t = if cell == shape.root_child {
            TileKind::Assign
        } else if let Some(&(a, b)) = leaf_edges.get(&cell) {
            TileKind::Test(a, BTreeSet::from([b]))
        } else if let Some(&(a, b)) = petioles.get(&cell) {
            TileKind::Branch(a, BTreeSet::from([b]))
        } else {
            TileKind::Identity(sets[&cell].clone())
        };
        tiles.push((cell, p, t));
    }
    let provenance =
        json!({ "reduction": "psi", "pattern_vertices": k, "host_vertices": inst.h.len(), "cells": tiles.len() });
    assemble_pair(&ranks, tree, &shape.tree, &tiles, provenance)
}

/// Best pruned subtrees below a vertex, indexed by leaf count.
type Options = Vec<Option<Vec<Cell>>>;

struct Pruner<'a> {
    cg: &'a CellGraph,
    k: usize,
}

impl Pruner<'_> {
    fn children(&self, v: Cell, parent: Cell) -> Vec<Cell> {
        let i = self.cg.index_of(v).expect("cell");
        self.cg.graph.neighbors(i).iter().map(|&j| self.cg.cells[j]).filter(|&c| c != parent).collect()
    }

    fn better(slot: &mut Option<Vec<Cell>>, cand: Vec<Cell>) {
        if slot.as_ref().is_none_or(|s| cand.len() < s.len()) {
            *slot = Some(cand);
        }
    }

    /// Subtree options for `ch` hanging off `v`: a stem subtree, or (unless
    /// `stem_only`) a petiole with a single leaf.
    fn child_options(&self, v: Cell, ch: Cell, stem_only: bool) -> Options {
        let mut out = self.stem(ch, v, false);
        if !stem_only && shares_row(v, ch) && self.k >= 1 {
            if let Some(leaf) = self.children(ch, v).into_iter().find(|&z| shares_col(ch, z)) {
                Self::better(&mut out[1], vec![ch, leaf]);
            }
        }
        out
    }

    /// Options for `v` kept as a stem vertex (or as the root's child when
    /// `assign`) below `parent`.
    fn stem(&self, v: Cell, parent: Cell, assign: bool) -> Options {
        let k = self.k;
        let mut out: Options = vec![None; k + 1];
        let kids: Vec<Cell> =
            self.children(v, parent).into_iter().filter(|&c| !assign || shares_col(v, c)).collect();
        let opts: Vec<Options> = kids.iter().map(|&c| self.child_options(v, c, assign)).collect();
        // Single child: the vertex must turn.
        for (idx, &c) in kids.iter().enumerate() {
            if !is_corner(parent, v, c) {
                continue;
            }
            for (cnt, o) in opts[idx].iter().enumerate() {
                if let Some(cells) = o {
                    Self::better(&mut out[cnt], [vec![v], cells.clone()].concat());
                }
            }
        }
        // Two or more children: knapsack with the number of kept children
        // capped at two.
        let mut acc: Vec<[Option<Vec<Cell>>; 3]> = vec![[None, None, None]; k + 1];
        acc[0][0] = Some(vec![v]);
        for o in &opts {
            let mut next = acc.clone();
            for cnt in 0..=k {
                for kept in 0..3 {
                    let Some(base) = &acc[cnt][kept] else { continue };
                    for (add, co) in o.iter().enumerate() {
                        let Some(cells) = co else { continue };
                        if add == 0 || cnt + add > k {
                            continue;
                        }
                        let cand = [base.clone(), cells.clone()].concat();
                        Self::better(&mut next[cnt + add][(kept + 1).min(2)], cand);
                    }
                }
            }
            acc = next;
        }
        for cnt in 1..=k {
            if let Some(cells) = acc[cnt][2].take() {
                Self::better(&mut out[cnt], cells);
            }
        }
        out
    }
}

/// Removes cells of degree two whose neighbours lie on one line with them.
fn contract_straight(m: &GriddingMatrix) -> Result<GriddingMatrix> {
    let mut m = m.clone();
    loop {
        let cg = cell_graph(&m);
        let straight = (0..cg.cells.len()).find(|&v| {
            let nb: Vec<Cell> = cg.graph.neighbors(v).iter().map(|&j| cg.cells[j]).collect();
            nb.len() == 2 && !is_corner(nb[0], cg.cells[v], nb[1])
        });
        match straight {
            Some(v) => {
                let (c, r) = cg.cells[v];
                m.set(c, r, CellEntry::Empty)?;
            }
            None => return Ok(m),
        }
    }
}

/// Empties cells of a deep-tree witness so that what remains is accepted by
/// [`dtp_shape`] with exactly `k` leaves, keeping as few cells as possible.
pub fn prune_tree_matrix(w: &TreeWitness, k: usize) -> Result<GriddingMatrix> {
    if k == 0 {
        return Err(Error::Precondition("at least one leaf is needed".into()));
    }
    let mut keep: BTreeSet<Cell> = w.branch.iter().copied().collect();
    for (_, _, cells) in &w.edges {
        keep.extend(cells.iter().copied());
    }
    let base = restrict(&w.matrix, &keep)?;
    if !cell_graph(&base).graph.is_tree() {
        return Err(Error::Shape("witness paths do not induce a tree".into()));
    }
    let base = contract_straight(&base)?;
    let cg = cell_graph(&base);
    let pruner = Pruner { cg: &cg, k };
    let mut best: Option<Vec<Cell>> = None;
    for (i, &r) in cg.cells.iter().enumerate() {
        for &j in cg.graph.neighbors(i) {
            let child = cg.cells[j];
            if !shares_row(r, child) {
                continue;
            }
            if let Some(cells) = pruner.stem(child, r, true)[k].take() {
                Pruner::better(&mut best, [vec![r], cells].concat());
            }
        }
    }
    let cells = best.ok_or_else(|| Error::Shape(format!("the witness does not yield a tree with {} leaves", k)))?;
    let out = restrict(&base, &cells.into_iter().collect())?;
    let shape = dtp_shape(&out)?;
    debug_assert_eq!(shape.leaves.len(), k);
    Ok(out)
}

/// Inflates the two anchor entries of pattern and text by monotone runs of
/// length `len`, later position first so that indices stay valid.
fn inflate_anchors(p: &Permutation, anchors: (usize, usize), len: usize, increasing: bool) -> Permutation {
    p.inflate(anchors.1, len, increasing).inflate(anchors.0, len, increasing)
}

/// Anchored matching to plain matching: both anchors on both sides become
/// runs of length `|text|`.
pub fn anchored_to_ppm(inst: &AnchoredPpmInstance) -> Result<(Permutation, Permutation)> {
    inst.validate()?;
    let len = inst.text.len();
    let inc = inst.inflation == InflationKind::Increasing;
    Ok((inflate_anchors(&inst.pattern, inst.pattern_anchor, len, inc), inflate_anchors(&inst.text, inst.text_anchor, len, inc)))
}

/// Anchored matching to surjective-coloured matching: anchors become runs of
/// length `|pattern|`, every inflated text entry gets its own colour and all
/// remaining text entries share one further colour.
pub fn anchored_to_colored(inst: &AnchoredPpmInstance) -> Result<ColoredPpmInstance> {
    inst.validate()?;
    let len = inst.pattern.len();
    let inc = inst.inflation == InflationKind::Increasing;
    let pattern = inflate_anchors(&inst.pattern, inst.pattern_anchor, len, inc);
    let text = inflate_anchors(&inst.text, inst.text_anchor, len, inc);
    let (a, b) = inst.text_anchor;
    // After inflation the runs start at a and at b + len - 1.
    let second = b + len - 1;
    let shared = 2 * len;
    let colors: Vec<usize> = (0..text.len())
        .map(|p| {
            if (a..a + len).contains(&p) {
                p - a
            } else if (second..second + len).contains(&p) {
                len + p - second
            } else {
                shared
            }
        })
        .collect();
    let mut out = ColoredPpmInstance::new(pattern, text, colors)?;
    out.provenance = json!({ "reduction": "colored", "source": inst.provenance });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::solvers::{brute_clique, find_anchored_embedding, Limits};
    use crate::witnesses::staircase_path;

    #[test]
    fn ranks_of_a_small_host() {
        let h = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let inst = PsiInstance::new(Graph::complete(2), h, vec![0, 1, 0]).unwrap();
        let r = compute_ranks(&inst);
        assert_eq!(r.m, 9);
        assert_eq!(r.alpha, vec![vec![0, 1], vec![2]]);
        assert_eq!(r.beta, vec![vec![1, 0], vec![2]]);
        assert!(r.allowed.contains(&(0, 0, 1, 0)));
        assert!(r.allowed.contains(&(1, 0, 0, 0)));
        assert!(!r.allowed.contains(&(0, 1, 1, 0)));
    }

    fn coords(t: &Tile) -> Vec<(i64, i64)> {
        use num_traits::ToPrimitive;
        t.points.iter().map(|p| (p.x.to_i64().unwrap(), p.y.to_i64().unwrap())).collect()
    }

    #[test]
    fn anchor_and_pattern_coordinates() {
        let h = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let r = compute_ranks(&PsiInstance::new(Graph::complete(2), h, vec![0, 1]).unwrap());
        assert_eq!(r.m, 6);
        assert_eq!(coords(&build_tile(&TileKind::Anchor, &r).unwrap()), vec![(0, 0), (18, 18)]);
        let p = coords(&build_tile(&TileKind::Pattern([0, 1].into()), &r).unwrap());
        assert_eq!(&p[..4], &[(3, 3), (4, 4), (5, 5), (6, 6)]);
        assert_eq!(&p[4..], &[(1, 1), (2, 2), (15, 15), (16, 16)]);
    }

    #[test]
    fn tiles_fit_and_are_atomic() {
        let h = Graph::from_edges(4, &[(0, 2), (1, 3), (2, 3)]).unwrap();
        let inst = PsiInstance::new(Graph::complete(3), h, vec![0, 0, 1, 2]).unwrap();
        let r = compute_ranks(&inst);
        let w: BTreeSet<usize> = [1, 2].into();
        for kind in [
            TileKind::Anchor,
            TileKind::Pattern([0, 1, 2].into()),
            TileKind::Assign,
            TileKind::Identity([0, 1, 2].into()),
            TileKind::Branch(0, w.clone()),
            TileKind::Test(0, w.clone()),
            TileKind::Merge(0, w.clone()),
        ] {
            let t = shifted(build_tile(&kind, &r).unwrap());
            assert!(t.is_atomic() && t.fits(r.box_size()), "{:?}", kind);
        }
        assert!(build_tile(&TileKind::Branch(1, [0].into()), &r).is_err());
    }

    #[test]
    fn single_clique_round_trip() {
        let h = Graph::from_edges(3, &[(0, 1)]).unwrap();
        for (chi, expect) in [(vec![0, 1, 1], true), (vec![0, 0, 1], false)] {
            let inst = CliqueInstance::new(h.clone(), chi, 2).unwrap();
            let expect = expect || brute_clique(&inst).unwrap();
            let red = lpp_reduce(&inst, &staircase_path(6)).unwrap();
            let emb = find_anchored_embedding(&red.instance, &Limits::default()).unwrap();
            assert_eq!(emb.is_some(), expect);
            if let Some(e) = emb {
                assert!(red.is_grid_preserving(&e));
            }
        }
    }

    #[test]
    fn colored_inflation_colours() {
        let inst = AnchoredPpmInstance {
            pattern: "1 2 3".parse().unwrap(),
            text: "1 3 2 4".parse().unwrap(),
            pattern_anchor: (0, 2),
            text_anchor: (0, 3),
            inflation: InflationKind::Increasing,
            provenance: serde_json::Value::Null,
        };
        let c = anchored_to_colored(&inst).unwrap();
        assert_eq!(c.t, 7);
        assert_eq!(c.text.len(), 8);
        assert_eq!(c.colors, vec![0, 1, 2, 6, 6, 3, 4, 5]);
        let (p, t) = anchored_to_ppm(&inst).unwrap();
        assert_eq!((p.len(), t.len()), (9, 10));
    }
}
