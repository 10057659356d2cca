//! Occurrence counting by dynamic programming over a tree decomposition of
//! the pattern's incidence graph.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::colored::OccurrenceCounter;
use super::treewidth::{treewidth, TreeDecomposition};
use crate::error::Result;
use crate::perm::{incidence_graph, Permutation};

#[derive(Clone, Debug)]
enum Nice {
    Leaf,
    Introduce(usize, usize),
    Forget(usize, usize),
    Join(usize, usize),
}

struct NiceBuilder<'a> {
    td: &'a TreeDecomposition,
    children: Vec<Vec<usize>>,
    nodes: Vec<Nice>,
}

impl NiceBuilder<'_> {
    fn push(&mut self, n: Nice) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    /// Builds nodes whose topmost bag equals the bag of `x`.
    fn build(&mut self, x: usize) -> usize {
        let bag = self.td.bags[x].clone();
        let kids = self.children[x].clone();
        let mut tops = Vec::new();
        if kids.is_empty() {
            let mut cur = self.push(Nice::Leaf);
            for &v in &bag {
                cur = self.push(Nice::Introduce(v, cur));
            }
            tops.push(cur);
        }
        for c in kids {
            let mut cur = self.build(c);
            let cbag = self.td.bags[c].clone();
            for &v in cbag.iter().filter(|v| !bag.contains(v)) {
                cur = self.push(Nice::Forget(v, cur));
            }
            for &v in bag.iter().filter(|v| !cbag.contains(v)) {
                cur = self.push(Nice::Introduce(v, cur));
            }
            tops.push(cur);
        }
        let mut cur = tops[0];
        for &t in &tops[1..] {
            cur = self.push(Nice::Join(cur, t));
        }
        cur
    }
}

type Table = HashMap<Vec<u32>, BigUint>;

struct Dp<'a> {
    pattern: &'a Permutation,
    text: &'a Permutation,
    nodes: Vec<Nice>,
}

impl Dp<'_> {
    /// Returns the sorted bag of `node` and its table keyed by the text
    /// positions assigned to the bag members.
    fn eval(&self, node: usize) -> (Vec<usize>, Table) {
        match self.nodes[node] {
            Nice::Leaf => (Vec::new(), HashMap::from([(Vec::new(), BigUint::one())])),
            Nice::Introduce(v, c) => {
                let (bag, table) = self.eval(c);
                let at = bag.partition_point(|&u| u < v);
                let mut nbag = bag.clone();
                nbag.insert(at, v);
                let mut out = Table::new();
                for (key, cnt) in table {
                    for t in 0..self.text.len() {
                        let ok = bag.iter().zip(&key).all(|(&u, &tu)| {
                            let tu = tu as usize;
                            (u < v) == (tu < t)
                                && tu != t
                                && (self.pattern.at(u) < self.pattern.at(v)) == (self.text.at(tu) < self.text.at(t))
                        });
                        if ok {
                            let mut nk = key.clone();
                            nk.insert(at, t as u32);
                            out.insert(nk, cnt.clone());
                        }
                    }
                }
                (nbag, out)
            }
            Nice::Forget(v, c) => {
                let (bag, table) = self.eval(c);
                let at = bag.iter().position(|&u| u == v).expect("forgotten vertex in bag");
                let mut nbag = bag;
                nbag.remove(at);
                let mut out = Table::new();
                for (mut key, cnt) in table {
                    key.remove(at);
                    *out.entry(key).or_insert_with(BigUint::zero) += cnt;
                }
                (nbag, out)
            }
            Nice::Join(a, b) => {
                let (bag, ta) = self.eval(a);
                let (_, tb) = self.eval(b);
                let mut out = Table::new();
                for (key, ca) in ta {
                    if let Some(cb) = tb.get(&key) {
                        out.insert(key, ca * cb);
                    }
                }
                (bag, out)
            }
        }
    }
}

/// Exact number of occurrences of `pattern` in `text`, guided by `td`,
/// which must decompose the incidence graph of `pattern`.
pub fn count_ppm_td(pattern: &Permutation, text: &Permutation, td: &TreeDecomposition) -> Result<BigUint> {
    td.validate(&incidence_graph(pattern))?;
    if pattern.is_empty() {
        return Ok(BigUint::one());
    }
    let mut b = NiceBuilder { td, children: td.children(), nodes: Vec::new() };
    let root = td.root().expect("validated");
    let mut top = b.build(root);
    for &v in &td.bags[root] {
        top = b.push(Nice::Forget(v, top));
    }
    let dp = Dp { pattern, text, nodes: b.nodes };
    let (_, table) = dp.eval(top);
    Ok(table.get(&Vec::new()).cloned().unwrap_or_default())
}

/// Counter that decomposes each pattern (exactly when small) and runs the
/// dynamic programme.
#[derive(Clone, Copy, Debug, Default)]
pub struct DecompositionCounter;

impl OccurrenceCounter for DecompositionCounter {
    fn count(&self, pattern: &Permutation, text: &Permutation) -> Result<BigUint> {
        let td = treewidth(&incidence_graph(pattern)).decomposition;
        count_ppm_td(pattern, text, &td)
    }
}
