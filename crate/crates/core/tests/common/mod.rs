//! Independent oracles and instance families shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use gridperm::graph::Graph;
use gridperm::instances::CliqueInstance;
use gridperm::witnesses::TreeWitness;
use gridperm::{GriddingMatrix, Permutation};

pub fn perm(s: &str) -> Permutation {
    s.parse().expect("test permutation")
}

/// All permutations of `1..=n` as value vectors, in lexicographic order.
pub fn all_values(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n + 1], &mut out);
    out
}

pub fn all_perms(n: usize) -> Vec<Permutation> {
    all_values(n).into_iter().map(|v| Permutation::new(v).unwrap()).collect()
}

fn same_order(a: &[usize], b: &[usize]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] < a[j]) == (b[i] < b[j])))
}

/// Occurrences counted over all position subsets.
pub fn naive_count(pattern: &[usize], text: &[usize]) -> u64 {
    fn go(p: &[usize], t: &[usize], start: usize, chosen: &mut Vec<usize>) -> u64 {
        if chosen.len() == p.len() {
            return same_order(p, chosen) as u64;
        }
        let need = p.len() - chosen.len();
        let mut total = 0;
        for i in start..=t.len().saturating_sub(need) {
            if t.len() < need {
                break;
            }
            chosen.push(t[i]);
            total += go(p, t, i + 1, chosen);
            chosen.pop();
        }
        total
    }
    if pattern.len() > text.len() {
        return 0;
    }
    go(pattern, text, 0, &mut Vec::new())
}

/// Position-adjacent and value-adjacent entries, as sorted pairs.
pub fn naive_incidence_edges(values: &[usize]) -> BTreeSet<(usize, usize)> {
    let n = values.len();
    let mut pos = vec![0; n + 1];
    for (i, &v) in values.iter().enumerate() {
        pos[v] = i;
    }
    let mut out = BTreeSet::new();
    for i in 1..n {
        out.insert((i - 1, i));
    }
    for v in 2..=n {
        let (a, b) = (pos[v - 1], pos[v]);
        out.insert((a.min(b), a.max(b)));
    }
    out
}

/// Colour assignment with `sizes[a]` vertices of colour `a`, in colour order.
pub fn coloring(sizes: &[usize]) -> Vec<usize> {
    sizes.iter().enumerate().flat_map(|(a, &s)| std::iter::repeat_n(a, s)).collect()
}

/// Every partitioned clique instance with `k` colours, one or two vertices
/// per colour, and any set of cross-colour host edges.
pub fn clique_family(k: usize) -> Vec<CliqueInstance> {
    let mut out = Vec::new();
    for mask in 0..(1usize << k) {
        let sizes: Vec<usize> = (0..k).map(|a| 1 + (mask >> a & 1)).collect();
        let chi = coloring(&sizes);
        let n = chi.len();
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| chi[u] != chi[v]).collect();
        for edges in 0..(1u64 << pairs.len()) {
            let e: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| edges >> i & 1 == 1).map(|(_, &p)| p).collect();
            let h = Graph::from_edges(n, &e).unwrap();
            out.push(CliqueInstance::new(h, chi.clone(), k).unwrap());
        }
    }
    out
}

/// A 4×4 matrix whose cell graph is two 4-cycles joined by a path.
pub fn dumbbell() -> GriddingMatrix {
    GriddingMatrix::inc_cells(4, 4, &[(0, 0), (1, 0), (0, 1), (1, 1), (1, 2), (2, 2), (3, 2), (2, 3), (3, 3)]).unwrap()
}

/// A 3×3 matrix whose cell graph is a 6-cycle with a chord.
pub fn cycle_with_chord() -> GriddingMatrix {
    GriddingMatrix::inc_cells(3, 3, &[(0, 0), (1, 0), (2, 0), (0, 2), (1, 2), (2, 2)]).unwrap()
}

/// Cell-graph edges of `m`, found by scanning every line independently of
/// the library.
pub fn naive_cell_edges(m: &GriddingMatrix) -> BTreeSet<((usize, usize), (usize, usize))> {
    let cells: BTreeSet<(usize, usize)> = m.nonempty_cells().into_iter().collect();
    let mut out = BTreeSet::new();
    for &a in &cells {
        if let Some(&b) = cells.iter().filter(|b| b.0 == a.0 && b.1 > a.1).min_by_key(|b| b.1) {
            out.insert((a, b));
        }
        if let Some(&b) = cells.iter().filter(|b| b.1 == a.1 && b.0 > a.0).min_by_key(|b| b.0) {
            out.insert((a, b));
        }
    }
    out
}

/// Checks a tree witness against a freshly computed cell graph: connecting
/// sequences follow cell-graph edges, meet only at tree vertices, and the
/// tree is the complete binary tree in breadth-first numbering.
pub fn check_tree_witness(w: &TreeWitness) -> Result<(), String> {
    let cells: BTreeSet<(usize, usize)> = w.matrix.nonempty_cells().into_iter().collect();
    let adjacent = |a: (usize, usize), b: (usize, usize)| -> bool {
        if !cells.contains(&a) || !cells.contains(&b) || a == b {
            return false;
        }
        if a.0 == b.0 {
            let (lo, hi) = (a.1.min(b.1), a.1.max(b.1));
            (lo + 1..hi).all(|r| !cells.contains(&(a.0, r)))
        } else if a.1 == b.1 {
            let (lo, hi) = (a.0.min(b.0), a.0.max(b.0));
            (lo + 1..hi).all(|c| !cells.contains(&(c, a.1)))
        } else {
            false
        }
    };
    let expected = (1usize << w.depth) - 1;
    if w.branch.len() != expected {
        return Err(format!("{} tree vertices, expected {}", w.branch.len(), expected));
    }
    let mut used: BTreeSet<(usize, usize)> = w.branch.iter().copied().collect();
    if used.len() != expected {
        return Err("tree vertices repeat".into());
    }
    let mut parents = vec![None; expected];
    for (par, ch, seq) in &w.edges {
        if *ch == 0 || (ch - 1) / 2 != *par || parents[*ch].replace(*par).is_some() {
            return Err(format!("edge {} -> {} is not a binary-tree edge", par, ch));
        }
        if seq.first() != Some(&w.branch[*par]) || seq.last() != Some(&w.branch[*ch]) {
            return Err(format!("sequence {} -> {} has wrong ends", par, ch));
        }
        if let Some(bad) = seq.windows(2).find(|p| !adjacent(p[0], p[1])) {
            return Err(format!("{:?} and {:?} are not adjacent", bad[0], bad[1]));
        }
        for c in &seq[1..seq.len() - 1] {
            if !used.insert(*c) {
                return Err(format!("cell {:?} is reused", c));
            }
        }
    }
    if (1..expected).any(|i| parents[i].is_none()) {
        return Err("some tree vertex has no connecting sequence".into());
    }
    Ok(())
}

/// The cells of the witness tree restricted to the root and the first
/// `leaves` deepest vertices, with the connecting sequences between them.
pub fn subtree_cells(w: &TreeWitness, leaves: usize) -> BTreeSet<(usize, usize)> {
    let first_leaf = (1usize << (w.depth - 1)) - 1;
    let mut keep = BTreeSet::from([w.branch[0]]);
    for leaf in first_leaf..first_leaf + leaves {
        let mut v = leaf;
        while v > 0 {
            let par = (v - 1) / 2;
            let seq = &w.edges.iter().find(|e| e.0 == par && e.1 == v).expect("tree edge").2;
            keep.extend(seq.iter().copied());
            v = par;
        }
    }
    keep
}

pub fn restrict(m: &GriddingMatrix, keep: &BTreeSet<(usize, usize)>) -> GriddingMatrix {
    let mut out = GriddingMatrix::empty(m.cols(), m.rows());
    for &(c, r) in keep {
        out.set(c, r, m.get(c, r).clone()).unwrap();
    }
    out
}
