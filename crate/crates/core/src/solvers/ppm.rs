//! Exact pattern matching by constraint propagation and backtracking.
//!
//! Each pattern entry is a variable whose domain is a bitset of text
//! positions. Only the constraints between neighbours in position order and
//! between neighbours in value order are enforced; by transitivity they imply
//! order-isomorphism.

use crate::error::{guard, Result};
use crate::instances::{AnchoredPpmInstance, ColoredPpmInstance};
use crate::perm::Permutation;

/// Hard size limits for the exact solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_pattern: usize,
    pub max_text: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_pattern: 512, max_text: 1024 }
    }
}

impl Limits {
    pub fn check(&self, pattern: usize, text: usize) -> Result<()> {
        guard("pattern length", self.max_pattern, pattern)?;
        guard("text length", self.max_text, text)
    }
}

type Bits = Vec<u64>;

struct Matcher<'a> {
    text: &'a [usize],
    k: usize,
    words: usize,
    by_value: Vec<usize>,
    after_pos: Vec<Bits>,
    before_pos: Vec<Bits>,
    above_val: Vec<Bits>,
    below_val: Vec<Bits>,
    color_bits: Vec<Bits>,
}

fn bits_where(n: usize, words: usize, pred: impl Fn(usize) -> bool) -> Bits {
    let mut b = vec![0u64; words];
    for t in 0..n {
        if pred(t) {
            b[t / 64] |= 1 << (t % 64);
        }
    }
    b
}

fn first_bit(d: &[u64]) -> Option<usize> {
    d.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

fn last_bit(d: &[u64]) -> Option<usize> {
    d.iter().enumerate().rev().find(|(_, &w)| w != 0).map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
}

fn for_each_bit(d: &[u64], mut f: impl FnMut(usize)) {
    for (i, &w) in d.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            f(i * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
}

fn count_bits(d: &[u64]) -> u32 {
    d.iter().map(|w| w.count_ones()).sum()
}

fn and_into(d: &mut [u64], mask: &[u64]) -> bool {
    let mut changed = false;
    for (a, b) in d.iter_mut().zip(mask) {
        let v = *a & b;
        changed |= v != *a;
        *a = v;
    }
    changed
}

impl<'a> Matcher<'a> {
    fn new(pattern: &Permutation, text: &'a Permutation, colors: Option<(&[usize], usize)>) -> Self {
        let n = text.len();
        let words = n.div_ceil(64).max(1);
        let tv = text.values();
        let pos = pattern.positions();
        let by_value: Vec<usize> = (1..=pattern.len()).map(|v| pos[v]).collect();
        let color_bits = match colors {
            Some((c, t)) => (0..t).map(|col| bits_where(n, words, |i| c[i] == col)).collect(),
            None => Vec::new(),
        };
        Matcher {
            text: tv,
            k: pattern.len(),
            words,
            by_value,
            after_pos: (0..n).map(|p| bits_where(n, words, |t| t > p)).collect(),
            before_pos: (0..n).map(|p| bits_where(n, words, |t| t < p)).collect(),
            above_val: (0..=n).map(|v| bits_where(n, words, |t| tv[t] > v)).collect(),
            below_val: (0..=n + 1).map(|v| bits_where(n, words, |t| tv[t] < v)).collect(),
            color_bits,
        }
    }

    fn dom<'d>(&self, d: &'d [u64], j: usize) -> &'d [u64] {
        &d[j * self.words..(j + 1) * self.words]
    }

    fn dom_mut<'d>(&self, d: &'d mut [u64], j: usize) -> &'d mut [u64] {
        &mut d[j * self.words..(j + 1) * self.words]
    }

    fn min_val(&self, d: &[u64]) -> usize {
        let mut best = usize::MAX;
        for_each_bit(d, |t| best = best.min(self.text[t]));
        best
    }

    fn max_val(&self, d: &[u64]) -> usize {
        let mut best = 0;
        for_each_bit(d, |t| best = best.max(self.text[t]));
        best
    }

    /// Bounds propagation along both chains to a fixpoint; false on wipeout.
    fn propagate(&self, d: &mut [u64]) -> bool {
        let k = self.k;
        loop {
            let mut changed = false;
            for j in 1..k {
                let Some(lo) = first_bit(self.dom(d, j - 1)) else { return false };
                changed |= and_into(self.dom_mut(d, j), &self.after_pos[lo]);
            }
            for j in (0..k.saturating_sub(1)).rev() {
                let Some(hi) = last_bit(self.dom(d, j + 1)) else { return false };
                changed |= and_into(self.dom_mut(d, j), &self.before_pos[hi]);
            }
            for w in 1..k {
                let (p, j) = (self.by_value[w - 1], self.by_value[w]);
                let lo = self.min_val(self.dom(d, p));
                if lo == usize::MAX {
                    return false;
                }
                changed |= and_into(self.dom_mut(d, j), &self.above_val[lo]);
            }
            for w in (0..k.saturating_sub(1)).rev() {
                let (j, q) = (self.by_value[w], self.by_value[w + 1]);
                let hi = self.max_val(self.dom(d, q));
                if hi == 0 {
                    return false;
                }
                changed |= and_into(self.dom_mut(d, j), &self.below_val[hi]);
            }
            if (0..k).any(|j| self.dom(d, j).iter().all(|&w| w == 0)) {
                return false;
            }
            if !changed {
                return true;
            }
        }
    }

    /// Every colour is either already hit by a fixed variable or still
    /// reachable, and there are enough free variables for the rest.
    fn coverage_possible(&self, d: &[u64]) -> bool {
        let t = self.color_bits.len();
        let free: Vec<usize> = (0..self.k).filter(|&j| count_bits(self.dom(d, j)) > 1).collect();
        let mut missing = 0;
        for c in 0..t {
            let cb = &self.color_bits[c];
            let hit_fixed = (0..self.k).any(|j| {
                let dj = self.dom(d, j);
                count_bits(dj) == 1 && dj.iter().zip(cb).any(|(a, b)| a & b != 0)
            });
            if hit_fixed {
                continue;
            }
            missing += 1;
            if !free.iter().any(|&j| self.dom(d, j).iter().zip(cb).any(|(a, b)| a & b != 0)) {
                return false;
            }
        }
        missing <= free.len()
    }

    fn search(&self, d: &mut Vec<u64>) -> Option<Vec<usize>> {
        if !self.propagate(d) {
            return None;
        }
        if !self.color_bits.is_empty() && !self.coverage_possible(d) {
            return None;
        }
        let mut best: Option<(u32, usize)> = None;
        for j in 0..self.k {
            let c = count_bits(self.dom(d, j));
            if c > 1 && best.is_none_or(|(b, _)| c < b) {
                best = Some((c, j));
            }
        }
        let Some((_, var)) = best else {
            return Some((0..self.k).map(|j| first_bit(self.dom(d, j)).unwrap()).collect());
        };
        let mut choices = Vec::new();
        for_each_bit(self.dom(d, var), |t| choices.push(t));
        for t in choices {
            let mut next = d.clone();
            let slot = self.dom_mut(&mut next, var);
            slot.iter_mut().for_each(|w| *w = 0);
            slot[t / 64] |= 1 << (t % 64);
            if let Some(e) = self.search(&mut next) {
                return Some(e);
            }
        }
        None
    }

    fn run(&self, pins: &[(usize, usize)]) -> Option<Vec<usize>> {
        let n = self.text.len();
        if self.k == 0 {
            return if self.color_bits.is_empty() { Some(Vec::new()) } else { None };
        }
        if self.k > n {
            return None;
        }
        let full = bits_where(n, self.words, |_| true);
        let mut d: Vec<u64> = Vec::with_capacity(self.k * self.words);
        for _ in 0..self.k {
            d.extend_from_slice(&full);
        }
        for &(j, t) in pins {
            let slot = self.dom_mut(&mut d, j);
            slot.iter_mut().for_each(|w| *w = 0);
            slot[t / 64] |= 1 << (t % 64);
        }
        self.search(&mut d)
    }
}

/// An occurrence of `pattern` in `text` as 0-based text positions, if any.
pub fn find_embedding(pattern: &Permutation, text: &Permutation, limits: &Limits) -> Result<Option<Vec<usize>>> {
    limits.check(pattern.len(), text.len())?;
    Ok(Matcher::new(pattern, text, None).run(&[]))
}

/// An embedding mapping the pattern anchors onto the text anchors.
pub fn find_anchored_embedding(inst: &AnchoredPpmInstance, limits: &Limits) -> Result<Option<Vec<usize>>> {
    limits.check(inst.pattern.len(), inst.text.len())?;
    inst.validate()?;
    let pins = [(inst.pattern_anchor.0, inst.text_anchor.0), (inst.pattern_anchor.1, inst.text_anchor.1)];
    Ok(Matcher::new(&inst.pattern, &inst.text, None).run(&pins))
}

pub fn solve_anchored_brute(inst: &AnchoredPpmInstance, limits: &Limits) -> Result<bool> {
    Ok(find_anchored_embedding(inst, limits)?.is_some())
}

/// An embedding whose image meets every colour.
pub fn find_colored_embedding(inst: &ColoredPpmInstance, limits: &Limits) -> Result<Option<Vec<usize>>> {
    limits.check(inst.pattern.len(), inst.text.len())?;
    if inst.t == 0 {
        return Ok(Matcher::new(&inst.pattern, &inst.text, None).run(&[]));
    }
    Ok(Matcher::new(&inst.pattern, &inst.text, Some((&inst.colors, inst.t))).run(&[]))
}

pub fn solve_colored_brute(inst: &ColoredPpmInstance, limits: &Limits) -> Result<bool> {
    Ok(find_colored_embedding(inst, limits)?.is_some())
}

/// Checks that `emb` is an occurrence of `pattern` in `text`.
pub fn is_embedding(pattern: &Permutation, text: &Permutation, emb: &[usize]) -> bool {
    emb.len() == pattern.len()
        && emb.iter().all(|&t| t < text.len())
        && emb.windows(2).all(|w| w[0] < w[1])
        && (0..emb.len()).all(|i| {
            (0..emb.len()).all(|j| (pattern.at(i) < pattern.at(j)) == (text.at(emb[i]) < text.at(emb[j])))
        })
}
