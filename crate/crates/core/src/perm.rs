//! Permutations, planar point sets, pattern containment and the eight
//! symmetries of the square.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Exact rational coordinate.
pub type Rat = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(v: i64) -> Rat {
    BigRational::from_integer(BigInt::from(v))
}

/// A permutation in one-line notation. Values are `1..=n`; positions are
/// addressed 0-based throughout the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation {
    values: Vec<usize>,
}

impl Permutation {
    /// Validates that `values` is a bijection onto `1..=n`.
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "{:?} is not a permutation of 1..{}",
                    values, n
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { values })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation { values }
    }

    pub fn identity(n: usize) -> Self {
        Permutation { values: (1..=n).collect() }
    }

    pub fn decreasing(n: usize) -> Self {
        Permutation { values: (1..=n).rev().collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Value at 0-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.values[i]
    }

    /// `pos[v]` is the 0-based position of value `v` (index 0 unused).
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.len() + 1];
        for (i, &v) in self.values.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    pub fn reverse(&self) -> Self {
        Permutation { values: self.values.iter().rev().copied().collect() }
    }

    pub fn complement(&self) -> Self {
        let n = self.len();
        Permutation { values: self.values.iter().map(|&v| n + 1 - v).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { values: inv }
    }

    /// The diagram `{(i, π_i)}` with 1-based coordinates.
    pub fn diagram(&self) -> Vec<Point> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| Point::new(rat(i as i64 + 1), rat(v as i64)))
            .collect()
    }

    /// The pattern formed by the entries at the given (strictly increasing)
    /// positions.
    pub fn subpattern(&self, positions: &[usize]) -> Self {
        let vals: Vec<usize> = positions.iter().map(|&p| self.values[p]).collect();
        Permutation { values: rank(&vals) }
    }

    /// Replaces the entry at position `pos` with a monotone run of `len`
    /// entries occupying the same place in both orders.
    pub fn inflate(&self, pos: usize, len: usize, increasing: bool) -> Self {
        assert!(pos < self.len() && len >= 1);
        let v = self.values[pos];
        let shift = len - 1;
        let mut out = Vec::with_capacity(self.len() + shift);
        for (i, &w) in self.values.iter().enumerate() {
            if i == pos {
                for t in 0..len {
                    out.push(if increasing { v + t } else { v + shift - t });
                }
            } else if w > v {
                out.push(w + shift);
            } else {
                out.push(w);
            }
        }
        Permutation { values: out }
    }

    /// Compact digit form, only meaningful for `n <= 9`.
    pub fn to_compact(&self) -> Option<String> {
        if self.len() > 9 {
            return None;
        }
        Some(self.values.iter().map(|v| char::from(b'0' + *v as u8)).collect())
    }

    pub fn apply_symmetry(&self, s: Symmetry) -> Self {
        s.apply(self)
    }

    pub fn is_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] > w[1])
    }

    /// Number of occurrences of `pattern` in `self`.
    pub fn count(&self, pattern: &Permutation) -> u64 {
        count_occurrences(self, pattern)
    }

    pub fn contains(&self, pattern: &Permutation) -> bool {
        contains(self, pattern)
    }

    pub fn avoids(&self, pattern: &Permutation) -> bool {
        !contains(self, pattern)
    }
}

/// Ranks a sequence of distinct numbers into `1..=n`.
pub(crate) fn rank<T: Ord + Copy>(vals: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by_key(|&i| vals[i]);
    let mut out = vec![0; vals.len()];
    for (r, &i) in idx.iter().enumerate() {
        out[i] = r + 1;
    }
    out
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.values {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{}", v)?;
            first = false;
        }
        Ok(())
    }
}

/// Accepts `"1 5 3 4 2"` (any whitespace or commas) or the compact form
/// `"15342"` when every value is a single digit.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let tokens: Vec<&str> = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        let values: Vec<usize> = if tokens.len() == 1 && tokens[0].len() > 1 {
            tokens[0]
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad digit {:?} in {:?}", c, s)))
                })
                .collect::<Result<_>>()?
        } else {
            tokens
                .iter()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad integer {:?} in {:?}", t, s)))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A planar point with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point { x: rat(x), y: rat(y) }
    }
}

/// True when no two points share an x or a y coordinate.
pub fn in_general_position(points: &[Point]) -> bool {
    let mut xs: Vec<&Rat> = points.iter().map(|p| &p.x).collect();
    let mut ys: Vec<&Rat> = points.iter().map(|p| &p.y).collect();
    xs.sort();
    ys.sort();
    xs.windows(2).all(|w| w[0] != w[1]) && ys.windows(2).all(|w| w[0] != w[1])
}

/// The unique permutation order-isomorphic to a point set in general position.
pub fn reduce(points: &[Point]) -> Result<Permutation> {
    if !in_general_position(points) {
        return Err(Error::NotGeneralPosition);
    }
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].x.cmp(&points[b].x));
    let ys: Vec<&Rat> = idx.iter().map(|&i| &points[i].y).collect();
    Ok(Permutation::from_vec_unchecked(rank(&ys)))
}

/// One of the eight symmetries of the square, acting on a diagram as: optional
/// transpose (inverse), then optional horizontal flip (reversal), then optional
/// vertical flip (complement).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symmetry {
    pub inverse: bool,
    pub reverse: bool,
    pub complement: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry { inverse: false, reverse: false, complement: false };
    pub const REVERSE: Symmetry = Symmetry { inverse: false, reverse: true, complement: false };
    pub const COMPLEMENT: Symmetry = Symmetry { inverse: false, reverse: false, complement: true };
    pub const INVERSE: Symmetry = Symmetry { inverse: true, reverse: false, complement: false };

    pub fn all() -> [Symmetry; 8] {
        let mut out = [Symmetry::IDENTITY; 8];
        for (k, s) in out.iter_mut().enumerate() {
            *s = Symmetry { inverse: k & 4 != 0, reverse: k & 2 != 0, complement: k & 1 != 0 };
        }
        out
    }

    /// Image of the point `(x, y)` of an `n`-box with integer coordinates.
    pub fn map_point(self, n: i64, x: i64, y: i64) -> (i64, i64) {
        let (mut a, mut b) = if self.inverse { (y, x) } else { (x, y) };
        if self.reverse {
            a = n + 1 - a;
        }
        if self.complement {
            b = n + 1 - b;
        }
        (a, b)
    }

    pub fn apply(self, p: &Permutation) -> Permutation {
        let n = p.len() as i64;
        let mut out = vec![0usize; p.len()];
        for (i, &v) in p.values().iter().enumerate() {
            let (a, b) = self.map_point(n, i as i64 + 1, v as i64);
            out[(a - 1) as usize] = b as usize;
        }
        Permutation::from_vec_unchecked(out)
    }

    pub fn inverse_symmetry(self) -> Symmetry {
        if self.inverse {
            Symmetry { inverse: true, reverse: self.complement, complement: self.reverse }
        } else {
            self
        }
    }

    /// `self` after `first`.
    pub fn after(self, first: Symmetry) -> Symmetry {
        // (1,2) in the 4-box has a free orbit under the group.
        let target = {
            let (x, y) = first.map_point(4, 1, 2);
            self.map_point(4, x, y)
        };
        Symmetry::all()
            .into_iter()
            .find(|s| s.map_point(4, 1, 2) == target)
            .expect("dihedral group is closed")
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.inverse {
            parts.push("inverse");
        }
        if self.reverse {
            parts.push("reverse");
        }
        if self.complement {
            parts.push("complement");
        }
        if parts.is_empty() {
            f.write_str("identity")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

/// For each pattern position `j`, the earlier positions holding the nearest
/// smaller and nearest larger value.
fn value_neighbours(pattern: &Permutation) -> Vec<(Option<usize>, Option<usize>)> {
    let k = pattern.len();
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let v = pattern.at(j);
        let mut lo: Option<usize> = None;
        let mut hi: Option<usize> = None;
        for i in 0..j {
            let w = pattern.at(i);
            if w < v && lo.is_none_or(|l| pattern.at(l) < w) {
                lo = Some(i);
            }
            if w > v && hi.is_none_or(|h| pattern.at(h) > w) {
                hi = Some(i);
            }
        }
        out.push((lo, hi));
    }
    out
}

struct Counter<'a> {
    text: &'a [usize],
    nb: Vec<(Option<usize>, Option<usize>)>,
    img: Vec<usize>,
    stop_at_first: bool,
}

impl Counter<'_> {
    fn run(&mut self, j: usize, start: usize) -> u64 {
        let k = self.nb.len();
        let n = self.text.len();
        let (lo, hi) = self.nb[j];
        let lo_v = lo.map_or(0, |l| self.text[self.img[l]]);
        let hi_v = hi.map_or(usize::MAX, |h| self.text[self.img[h]]);
        let end = n + 1 + j - k;
        let mut total = 0u64;
        for t in start..end {
            let v = self.text[t];
            if v <= lo_v || v >= hi_v {
                continue;
            }
            if j + 1 == k {
                total += 1;
            } else {
                self.img[j] = t;
                total += self.run(j + 1, t + 1);
            }
            if self.stop_at_first && total > 0 {
                return total;
            }
        }
        total
    }
}

fn occurrences(text: &Permutation, pattern: &Permutation, stop_at_first: bool) -> u64 {
    let k = pattern.len();
    if k == 0 {
        return 1;
    }
    if k > text.len() {
        return 0;
    }
    let mut c = Counter {
        text: text.values(),
        nb: value_neighbours(pattern),
        img: vec![0; k],
        stop_at_first,
    };
    c.run(0, 0)
}

/// Exact number of subsequences of `text` order-isomorphic to `pattern`.
/// The empty pattern occurs exactly once.
pub fn count_occurrences(text: &Permutation, pattern: &Permutation) -> u64 {
    occurrences(text, pattern, false)
}

pub fn contains(text: &Permutation, pattern: &Permutation) -> bool {
    occurrences(text, pattern, true) > 0
}

/// The incidence graph on positions `0..n`: positions `i`, `j` are adjacent
/// when they are consecutive in position or in value.
pub fn incidence_graph(p: &Permutation) -> Graph {
    let n = p.len();
    let mut g = Graph::new(n);
    for i in 1..n {
        g.add_edge(i - 1, i);
    }
    let pos = p.positions();
    for v in 2..=n {
        g.add_edge(pos[v - 1], pos[v]);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_emit() {
        assert_eq!(p("1 5 3 4 2"), p("15342"));
        assert_eq!(p("15342").to_string(), "1 5 3 4 2");
        assert_eq!(p("10 9 8 7 6 5 4 3 2 1 11").len(), 11);
        assert!("1 1".parse::<Permutation>().is_err());
        assert!("0 1".parse::<Permutation>().is_err());
        assert!("1 x".parse::<Permutation>().is_err());
        assert_eq!(p(""), Permutation::identity(0));
        assert_eq!(p("1"), Permutation::identity(1));
    }

    #[test]
    fn reduce_examples() {
        let half = BigRational::new(BigInt::from(5), BigInt::from(2));
        let pts = vec![Point::new(half, rat(7)), Point::int(4, 1)];
        assert_eq!(reduce(&pts).unwrap(), p("21"));
        assert_eq!(reduce(&p("15342").diagram()).unwrap(), p("15342"));
        let pts = vec![Point::int(0, 0), Point::int(1, 2), Point::int(2, 1)];
        assert_eq!(reduce(&pts).unwrap(), p("132"));
        let bad = vec![Point::int(0, 0), Point::int(0, 2)];
        assert!(matches!(reduce(&bad), Err(Error::NotGeneralPosition)));
        let bad = vec![Point::int(0, 3), Point::int(1, 3)];
        assert!(reduce(&bad).is_err());
    }

    #[test]
    fn counting_examples() {
        assert_eq!(count_occurrences(&p("1234"), &p("12")), 6);
        assert_eq!(count_occurrences(&p("15342"), &p("1")), 5);
        assert_eq!(count_occurrences(&p("15342"), &p("123")), 1);
        assert_eq!(count_occurrences(&p("12"), &p("123")), 0);
        assert_eq!(count_occurrences(&p("12"), &Permutation::identity(0)), 1);
        assert_eq!(count_occurrences(&Permutation::identity(0), &Permutation::identity(0)), 1);
        assert!(contains(&p("15342"), &p("132")));
        assert_eq!(count_occurrences(&p("15342"), &p("321")), 2);
        assert!(!contains(&p("15342"), &p("213")));
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(p("15342").reverse(), p("24351"));
        assert_eq!(p("15342").complement(), p("51324"));
        // 15342 is an involution: the entries 2 and 5 swap places.
        assert_eq!(p("15342").inverse(), p("15342"));
        assert_eq!(p("2413").inverse(), p("3142"));
        assert_eq!(Symmetry::REVERSE.apply(&p("15342")), p("24351"));
        assert_eq!(Symmetry::COMPLEMENT.apply(&p("15342")), p("51324"));
        assert_eq!(Symmetry::INVERSE.apply(&p("15342")), p("15342"));
    }

    #[test]
    fn symmetry_group_laws() {
        let q = p("2631745");
        for s in Symmetry::all() {
            assert_eq!(s.inverse_symmetry().apply(&s.apply(&q)), q);
            for t in Symmetry::all() {
                assert_eq!(t.after(s).apply(&q), t.apply(&s.apply(&q)));
            }
        }
    }

    #[test]
    fn inflation() {
        assert_eq!(p("21").inflate(0, 3, true), p("2341"));
        assert_eq!(p("21").inflate(1, 2, false), p("321"));
        assert_eq!(p("132").inflate(1, 2, true), p("1342"));
    }

    #[test]
    fn incidence_examples() {
        let g = incidence_graph(&p("12"));
        assert_eq!(g.edges(), vec![(0, 1)]);
        let g = incidence_graph(&Permutation::identity(5));
        assert_eq!(g.edges(), vec![(0, 1), (1, 2), (2, 3), (3, 4)]);
        // Definition scan on 2413.
        let q = p("2413");
        let g = incidence_graph(&q);
        let mut expect = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                if j - i == 1 || q.at(i).abs_diff(q.at(j)) == 1 {
                    expect.push((i, j));
                }
            }
        }
        assert_eq!(g.edges(), expect);
    }
}
