//! Problem instances shared by the reductions and the solvers.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::Permutation;

/// Partitioned subgraph isomorphism: find `g` in `h` with vertex `a` of `g`
/// mapped into the colour class `chi^{-1}(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiInstance {
    pub g: Graph,
    pub h: Graph,
    /// Colour (a vertex of `g`) of each vertex of `h`.
    pub chi: Vec<usize>,
}

impl PsiInstance {
    pub fn new(g: Graph, h: Graph, chi: Vec<usize>) -> Result<Self> {
        if chi.len() != h.len() {
            return Err(Error::DimensionMismatch(format!(
                "colouring has {} entries for {} host vertices",
                chi.len(),
                h.len()
            )));
        }
        if let Some(&c) = chi.iter().find(|&&c| c >= g.len()) {
            return Err(Error::Precondition(format!("colour {} is not a pattern vertex", c + 1)));
        }
        Ok(PsiInstance { g, h, chi })
    }

    pub fn colors(&self) -> usize {
        self.g.len()
    }

    /// Host vertices of colour `a`, in input order.
    pub fn class(&self, a: usize) -> Vec<usize> {
        (0..self.h.len()).filter(|&v| self.chi[v] == a).collect()
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        (0..self.colors()).map(|a| self.class(a)).collect()
    }
}

/// Partitioned clique: a `k`-clique in `h` using one vertex of each colour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueInstance {
    pub h: Graph,
    pub chi: Vec<usize>,
    pub k: usize,
}

impl CliqueInstance {
    pub fn new(h: Graph, chi: Vec<usize>, k: usize) -> Result<Self> {
        PsiInstance::new(Graph::complete(k), h.clone(), chi.clone())?;
        Ok(CliqueInstance { h, chi, k })
    }

    pub fn to_psi(&self) -> PsiInstance {
        PsiInstance { g: Graph::complete(self.k), h: self.h.clone(), chi: self.chi.clone() }
    }
}

/// Whether anchors are inflated into increasing or decreasing runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum InflationKind {
    #[default]
    Increasing,
    Decreasing,
}

/// Pattern matching where the pattern entries at positions `pattern_anchor`
/// must land on the text entries at positions `text_anchor` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchoredPpmInstance {
    pub pattern: Permutation,
    pub text: Permutation,
    pub pattern_anchor: (usize, usize),
    pub text_anchor: (usize, usize),
    pub inflation: InflationKind,
    pub provenance: serde_json::Value,
}

impl AnchoredPpmInstance {
    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.pattern_anchor;
        let (c, d) = self.text_anchor;
        if a >= b || b >= self.pattern.len() || c >= d || d >= self.text.len() {
            return Err(Error::Precondition("anchor positions must be increasing and in range".into()));
        }
        Ok(())
    }
}

/// Pattern matching where the image must hit every colour `0..t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredPpmInstance {
    pub pattern: Permutation,
    pub text: Permutation,
    /// Colour of each text position, in `0..t`.
    pub colors: Vec<usize>,
    pub t: usize,
    pub provenance: serde_json::Value,
}

impl ColoredPpmInstance {
    pub fn new(pattern: Permutation, text: Permutation, colors: Vec<usize>) -> Result<Self> {
        if colors.len() != text.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} colours for a text of length {}",
                colors.len(),
                text.len()
            )));
        }
        let t = colors.iter().max().map_or(0, |&c| c + 1);
        Ok(ColoredPpmInstance { pattern, text, colors, t, provenance: serde_json::Value::Null })
    }
}

/// On-disk form of an anchored or coloured instance. Anchors and colours are
/// 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub pattern: Permutation,
    pub text: Permutation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchors: Option<AnchorsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inflation: Option<InflationKind>,
    #[serde(default)]
    pub provenance: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorsJson {
    pub pattern: [usize; 2],
    pub text: [usize; 2],
}

impl InstanceJson {
    pub fn from_anchored(inst: &AnchoredPpmInstance) -> Self {
        InstanceJson {
            pattern: inst.pattern.clone(),
            text: inst.text.clone(),
            anchors: Some(AnchorsJson {
                pattern: [inst.pattern_anchor.0 + 1, inst.pattern_anchor.1 + 1],
                text: [inst.text_anchor.0 + 1, inst.text_anchor.1 + 1],
            }),
            colors: None,
            inflation: Some(inst.inflation),
            provenance: inst.provenance.clone(),
        }
    }

    pub fn from_colored(inst: &ColoredPpmInstance) -> Self {
        InstanceJson {
            pattern: inst.pattern.clone(),
            text: inst.text.clone(),
            anchors: None,
            colors: Some(inst.colors.iter().map(|c| c + 1).collect()),
            inflation: None,
            provenance: inst.provenance.clone(),
        }
    }

    pub fn to_anchored(&self) -> Result<AnchoredPpmInstance> {
        let a = self.anchors.as_ref().ok_or_else(|| Error::Parse("field \"anchors\" is missing".into()))?;
        if a.pattern.contains(&0) || a.text.contains(&0) {
            return Err(Error::Parse("field \"anchors\": positions are numbered from 1".into()));
        }
        let inst = AnchoredPpmInstance {
            pattern: self.pattern.clone(),
            text: self.text.clone(),
            pattern_anchor: (a.pattern[0] - 1, a.pattern[1] - 1),
            text_anchor: (a.text[0] - 1, a.text[1] - 1),
            inflation: self.inflation.unwrap_or_default(),
            provenance: self.provenance.clone(),
        };
        inst.validate().map_err(|e| Error::Parse(format!("field \"anchors\": {}", e)))?;
        Ok(inst)
    }

    pub fn to_colored(&self) -> Result<ColoredPpmInstance> {
        let c = self.colors.as_ref().ok_or_else(|| Error::Parse("field \"colors\" is missing".into()))?;
        if c.contains(&0) {
            return Err(Error::Parse("field \"colors\": colours are numbered from 1".into()));
        }
        let mut inst = ColoredPpmInstance::new(self.pattern.clone(), self.text.clone(), c.iter().map(|x| x - 1).collect())
            .map_err(|e| Error::Parse(format!("field \"colors\": {}", e)))?;
        inst.provenance = self.provenance.clone();
        Ok(inst)
    }
}

/// Parses the graph text format: a header `n m`, then `m` lines `u v`
/// (1-based), then optionally one line with `n` colours (1-based).
pub fn parse_graph(text: &str) -> Result<(Graph, Option<Vec<usize>>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let nums = |no: usize, l: &str| -> Result<Vec<usize>> {
        l.split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::ParseAt { line: no, msg: format!("bad integer {:?}", t) }))
            .collect()
    };
    let (no, head) = lines.next().ok_or(Error::ParseAt { line: 1, msg: "missing header \"n m\"".into() })?;
    let hv = nums(no, head)?;
    if hv.len() != 2 {
        return Err(Error::ParseAt { line: no, msg: "header must be \"n m\"".into() });
    }
    let (n, m) = (hv[0], hv[1]);
    let mut g = Graph::new(n);
    for _ in 0..m {
        let (no, l) = lines.next().ok_or(Error::ParseAt { line: no + 1, msg: format!("expected {} edge lines", m) })?;
        let e = nums(no, l)?;
        if e.len() != 2 || e[0] == 0 || e[1] == 0 || e[0] > n || e[1] > n || e[0] == e[1] {
            return Err(Error::ParseAt { line: no, msg: format!("bad edge {:?}", l) });
        }
        g.add_edge(e[0] - 1, e[1] - 1);
    }
    let colors = match lines.next() {
        None => None,
        Some((no, l)) => {
            let c = nums(no, l)?;
            if c.len() != n || c.contains(&0) {
                return Err(Error::ParseAt { line: no, msg: format!("colouring needs {} positive entries", n) });
            }
            Some(c.into_iter().map(|x| x - 1).collect())
        }
    };
    if let Some((no, _)) = lines.next() {
        return Err(Error::ParseAt { line: no, msg: "unexpected trailing line".into() });
    }
    Ok((g, colors))
}

pub fn format_graph(g: &Graph, colors: Option<&[usize]>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", g.len(), g.num_edges());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{} {}", u + 1, v + 1);
    }
    if let Some(c) = colors {
        let parts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
        let _ = writeln!(s, "{}", parts.join(" "));
    }
    s
}
