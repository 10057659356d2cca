//! Tree decompositions and exact tree-width for small graphs.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};
use crate::graph::Graph;

/// A tree of bags; `parent[i]` is `None` only for the root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
}

impl TreeDecomposition {
    /// Largest bag size minus one (0 for an empty decomposition).
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn root(&self) -> Option<usize> {
        self.parent.iter().position(|p| p.is_none())
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.bags.len()];
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(i);
            }
        }
        ch
    }

    /// Checks the tree shape and the three decomposition axioms for `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDecomposition(m));
        let t = self.bags.len();
        if self.parent.len() != t {
            return bad("bags and parent links differ in length".into());
        }
        if t == 0 {
            return if g.is_empty() { Ok(()) } else { bad("no bags for a non-empty graph".into()) };
        }
        if self.parent.iter().filter(|p| p.is_none()).count() != 1 {
            return bad("decomposition must have exactly one root".into());
        }
        for i in 0..t {
            let mut cur = i;
            let mut steps = 0;
            while let Some(p) = self.parent[cur] {
                if p >= t {
                    return bad(format!("node {} has parent {} out of range", cur, p));
                }
                cur = p;
                steps += 1;
                if steps > t {
                    return bad("parent links contain a cycle".into());
                }
            }
        }
        let sets: Vec<BTreeSet<usize>> = self.bags.iter().map(|b| b.iter().copied().collect()).collect();
        if let Some(&v) = sets.iter().flatten().find(|&&v| v >= g.len()) {
            return bad(format!("bag vertex {} out of range", v));
        }
        for v in 0..g.len() {
            let holders: Vec<usize> = (0..t).filter(|&i| sets[i].contains(&v)).collect();
            if holders.is_empty() {
                return bad(format!("vertex {} is in no bag", v));
            }
            let tops = holders
                .iter()
                .filter(|&&i| self.parent[i].is_none_or(|p| !sets[p].contains(&v)))
                .count();
            if tops != 1 {
                return bad(format!("bags holding vertex {} are not connected", v));
            }
        }
        for (u, v) in g.edges() {
            if !sets.iter().any(|s| s.contains(&u) && s.contains(&v)) {
                return bad(format!("edge ({}, {}) is in no bag", u, v));
            }
        }
        Ok(())
    }
}

/// The decomposition induced by eliminating vertices in `order`.
pub fn decomposition_from_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.len();
    let mut when = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        when[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&w| when[w] > i).collect();
        for a in 0..later.len() {
            for b in a + 1..later.len() {
                adj[later[a]].insert(later[b]);
                adj[later[b]].insert(later[a]);
            }
        }
        parent[i] = later.iter().map(|&w| when[w]).min();
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    // Join the trees of a disconnected graph under the last node.
    if n > 0 {
        for i in 0..n - 1 {
            if parent[i].is_none() {
                parent[i] = Some(n - 1);
            }
        }
    }
    TreeDecomposition { bags, parent }
}

/// Width of the elimination ordering `order`.
pub fn elimination_width(g: &Graph, order: &[usize]) -> usize {
    decomposition_from_order(g, order).width()
}

/// Greedy minimum fill-in ordering (ties: fewer neighbours, then smaller
/// label).
pub fn min_fill_order(g: &Graph) -> Vec<usize> {
    let n = g.len();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in (0..n).filter(|&v| alive[v]) {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0;
            for a in 0..nb.len() {
                for b in a + 1..nb.len() {
                    if !adj[nb[a]].contains(&nb[b]) {
                        fill += 1;
                    }
                }
            }
            let key = (fill, nb.len(), v);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let v = best.unwrap().2;
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for a in 0..nb.len() {
            adj[nb[a]].remove(&v);
            for b in a + 1..nb.len() {
                adj[nb[a]].insert(nb[b]);
                adj[nb[b]].insert(nb[a]);
            }
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Minor-min-width lower bound: repeatedly contract a minimum-degree vertex
/// into its least-degree neighbour.
pub fn minor_min_width(g: &Graph) -> usize {
    let mut adj: Vec<BTreeSet<usize>> = (0..g.len()).map(|v| g.neighbors(v).clone()).collect();
    let mut alive: BTreeSet<usize> = (0..g.len()).collect();
    let mut lb = 0;
    while alive.len() > 1 {
        let v = *alive.iter().min_by_key(|&&v| (adj[v].len(), v)).unwrap();
        lb = lb.max(adj[v].len());
        alive.remove(&v);
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        if let Some(u) = nb.iter().copied().min_by_key(|&u| (adj[u].len(), u)) {
            for &w in &nb {
                adj[w].remove(&v);
                if w != u {
                    adj[w].insert(u);
                    adj[u].insert(w);
                }
            }
        }
        adj[v].clear();
    }
    lb
}

/// Result of a tree-width computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Treewidth {
    pub width: usize,
    pub decomposition: TreeDecomposition,
    /// False when `width` is only a heuristic upper bound.
    pub exact: bool,
}

pub const EXACT_VERTEX_LIMIT: usize = 32;

struct ExactSearch {
    n: usize,
    adj: Vec<u64>,
    failed: HashSet<u64>,
}

impl ExactSearch {
    /// Neighbourhood of `v` in the graph left after eliminating `gone`.
    fn reach(&self, gone: u64, v: usize) -> u64 {
        let mut comp = 1u64 << v;
        let mut frontier = 1u64 << v;
        let mut seen = 0u64;
        while frontier != 0 {
            let mut nb = 0u64;
            let mut f = frontier;
            while f != 0 {
                let u = f.trailing_zeros() as usize;
                f &= f - 1;
                nb |= self.adj[u];
            }
            seen |= nb;
            frontier = nb & gone & !comp;
            comp |= frontier;
        }
        seen & !gone & !(1u64 << v)
    }

    fn degeneracy(&self, alive: u64, nb: &[u64]) -> usize {
        let mut alive = alive;
        let mut best = 0;
        while alive != 0 {
            let mut pick = 0;
            let mut deg = usize::MAX;
            let mut a = alive;
            while a != 0 {
                let v = a.trailing_zeros() as usize;
                a &= a - 1;
                let d = (nb[v] & alive).count_ones() as usize;
                if d < deg {
                    deg = d;
                    pick = v;
                }
            }
            best = best.max(deg);
            alive &= !(1u64 << pick);
        }
        best
    }

    fn decide(&mut self, gone: u64, k: usize, order: &mut Vec<usize>) -> bool {
        let full = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let alive = full & !gone;
        if alive.count_ones() as usize <= k + 1 {
            let mut a = alive;
            while a != 0 {
                order.push(a.trailing_zeros() as usize);
                a &= a - 1;
            }
            return true;
        }
        if self.failed.contains(&gone) {
            return false;
        }
        let mut nb = vec![0u64; self.n];
        let mut a = alive;
        while a != 0 {
            let v = a.trailing_zeros() as usize;
            a &= a - 1;
            nb[v] = self.reach(gone, v);
        }
        if self.degeneracy(alive, &nb) > k {
            self.failed.insert(gone);
            return false;
        }
        let mut cands: Vec<(usize, usize)> = Vec::new();
        let mut a = alive;
        while a != 0 {
            let v = a.trailing_zeros() as usize;
            a &= a - 1;
            let d = nb[v].count_ones() as usize;
            if d > k {
                continue;
            }
            let mut q = nb[v];
            let mut simplicial = true;
            while q != 0 {
                let u = q.trailing_zeros() as usize;
                q &= q - 1;
                if nb[v] & !(1u64 << u) & !nb[u] != 0 {
                    simplicial = false;
                    break;
                }
            }
            if simplicial {
                cands = vec![(d, v)];
                break;
            }
            cands.push((d, v));
        }
        cands.sort_unstable();
        for (_, v) in cands {
            order.push(v);
            if self.decide(gone | 1u64 << v, k, order) {
                return true;
            }
            order.pop();
        }
        self.failed.insert(gone);
        false
    }
}

/// Exact tree-width with a certifying decomposition (at most
/// [`EXACT_VERTEX_LIMIT`] vertices).
pub fn exact_treewidth(g: &Graph) -> Result<Treewidth> {
    let n = g.len();
    guard("vertex count for exact tree-width", EXACT_VERTEX_LIMIT, n)?;
    let upper_order = min_fill_order(g);
    let upper = elimination_width(g, &upper_order);
    let lower = minor_min_width(g);
    let adj: Vec<u64> = (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1u64 << w)).collect();
    let mut search = ExactSearch { n, adj, failed: HashSet::new() };
    for k in lower..upper {
        search.failed.clear();
        let mut order = Vec::new();
        if search.decide(0, k, &mut order) {
            let decomposition = decomposition_from_order(g, &order);
            debug_assert!(decomposition.width() <= k);
            return Ok(Treewidth { width: decomposition.width(), decomposition, exact: true });
        }
    }
    let decomposition = decomposition_from_order(g, &upper_order);
    Ok(Treewidth { width: upper, decomposition, exact: true })
}

/// Upper bound from the greedy minimum fill-in ordering.
pub fn heuristic_treewidth(g: &Graph) -> Treewidth {
    let decomposition = decomposition_from_order(g, &min_fill_order(g));
    Treewidth { width: decomposition.width(), decomposition, exact: false }
}

/// Exact when small enough, otherwise the flagged heuristic bound.
pub fn treewidth(g: &Graph) -> Treewidth {
    if g.len() <= EXACT_VERTEX_LIMIT {
        exact_treewidth(g).expect("within limit")
    } else {
        heuristic_treewidth(g)
    }
}
