//! Long-path and deep-tree verdicts for principal classes `Av(σ)`, bicycle
//! witness matrices, and random members of grid classes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridding::{CellEntry, GriddingMatrix, MatrixJson};
use crate::perm::{Permutation, Symmetry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Neither,
    LppOnly,
    LppAndDtp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalClassification {
    pub representative: Permutation,
    pub verdict: Verdict,
}

const NEITHER: [&str; 3] = ["1", "21", "312"];
const LPP_ONLY: [&str; 6] = ["321", "3412", "3142", "4213", "4123", "41352"];

/// Patterns whose avoidance class contains a known bicyclic grid class, in
/// search order.
pub const ANCHORS: [&str; 7] = ["4321", "4231", "4312", "14523", "24513", "32154", "42513"];

fn p(s: &str) -> Permutation {
    s.parse().expect("static pattern")
}

/// The lexicographically least image of `sigma` under the eight symmetries.
pub fn canonical_representative(sigma: &Permutation) -> Permutation {
    Symmetry::all().into_iter().map(|s| s.apply(sigma)).min_by(|a, b| a.values().cmp(b.values())).unwrap()
}

pub fn classify_principal(sigma: &Permutation) -> PrincipalClassification {
    let representative = canonical_representative(sigma);
    let in_list = |list: &[&str]| list.iter().any(|s| canonical_representative(&p(s)) == representative);
    let verdict = if sigma.is_empty() || in_list(&NEITHER) {
        Verdict::Neither
    } else if in_list(&LPP_ONLY) {
        Verdict::LppOnly
    } else {
        Verdict::LppAndDtp
    };
    PrincipalClassification { representative, verdict }
}

fn cells(cols: usize, rows: usize, list: &[(usize, usize, CellEntry)]) -> GriddingMatrix {
    GriddingMatrix::from_cells(cols, rows, list).expect("static matrix")
}

/// A 2×2 monotone matrix with three non-empty entries whose grid class
/// avoids the length-3 pattern `pi`.
pub fn three_entry_subclass(pi: &Permutation) -> Result<GriddingMatrix> {
    use CellEntry::{Dec, Inc};
    if pi.len() != 3 {
        return Err(Error::Precondition(format!("{} does not have length 3", pi)));
    }
    let bases = [
        (p("321"), cells(2, 2, &[(0, 0, Inc), (0, 1, Inc), (1, 1, Inc)])),
        (p("132"), cells(2, 2, &[(0, 1, Dec), (1, 1, Inc), (1, 0, Dec)])),
    ];
    for (base, m) in &bases {
        if let Some(s) = Symmetry::all().into_iter().find(|s| s.apply(base) == *pi) {
            return Ok(m.transform(s));
        }
    }
    unreachable!("every length-3 pattern is symmetric to 321 or 132")
}

/// Replaces every cell by a 2×2 block: `Inc` by the diagonal, `Dec` by the
/// anti-diagonal and `Av(pi)` by its three-entry subclass.
fn expand(m: &GriddingMatrix) -> Result<GriddingMatrix> {
    let mut out = GriddingMatrix::empty(2 * m.cols(), 2 * m.rows());
    for (c, r) in m.nonempty_cells() {
        let block = match m.get(c, r) {
            CellEntry::Inc => cells(2, 2, &[(0, 0, CellEntry::Inc), (1, 1, CellEntry::Inc)]),
            CellEntry::Dec => cells(2, 2, &[(0, 1, CellEntry::Dec), (1, 0, CellEntry::Dec)]),
            CellEntry::Avoider(pi) => three_entry_subclass(pi)?,
            CellEntry::Empty => unreachable!(),
        };
        for (a, b) in block.nonempty_cells() {
            out.set(2 * c + a, 2 * r + b, block.get(a, b).clone())?;
        }
    }
    Ok(out)
}

/// The non-monotone grid class known to lie inside `Av(anchor)`.
pub fn anchor_class(anchor: &Permutation) -> Result<GriddingMatrix> {
    use CellEntry::{Avoider, Dec, Inc};
    let staircase = |pi: &str| crate::witnesses::staircase(3, Inc, Avoider(p(pi)));
    let rich = |pi: &str| {
        GriddingMatrix::from_cells(2, 2, &[(0, 1, Dec), (1, 1, Inc), (0, 0, Avoider(p(pi))), (1, 0, Dec)])
    };
    match anchor.to_string().replace(' ', "").as_str() {
        "4321" => staircase("321"),
        "4231" => staircase("231"),
        "4312" => staircase("312"),
        "14523" => rich("132"),
        "24513" => rich("231"),
        "32154" | "42513" => rich("321"),
        _ => Err(Error::Precondition(format!("{} is not an anchor pattern", anchor))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicycleWitness {
    pub anchor: Permutation,
    /// Symmetry `s` with `s(sigma)` containing the anchor.
    pub symmetry: Symmetry,
    pub matrix: GriddingMatrix,
}

/// A monotone matrix whose cell graph has a component with two cycles and
/// whose grid class avoids `sigma`.
pub fn bicycle_witness(sigma: &Permutation) -> Result<BicycleWitness> {
    let verdict = classify_principal(sigma).verdict;
    if verdict != Verdict::LppAndDtp {
        return Err(Error::Precondition(format!("Av({}) is classified {:?}", sigma, verdict)));
    }
    for s in Symmetry::all() {
        let image = s.apply(sigma);
        for a in ANCHORS {
            let anchor = p(a);
            if image.contains(&anchor) {
                let m = expand(&anchor_class(&anchor)?)?;
                return Ok(BicycleWitness { anchor, symmetry: s, matrix: m.transform(s.inverse_symmetry()) });
            }
        }
    }
    Err(Error::Precondition(format!("{} contains none of the anchor patterns under any symmetry", sigma)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub sigma: Permutation,
    pub representative: Permutation,
    pub verdict: Verdict,
    pub witness: Option<MatrixJson>,
}

impl ClassificationReport {
    pub fn new(sigma: &Permutation) -> Self {
        let c = classify_principal(sigma);
        let witness = if c.verdict == Verdict::LppAndDtp {
            bicycle_witness(sigma).ok().map(|w| w.matrix.to_json())
        } else {
            None
        };
        ClassificationReport { sigma: sigma.clone(), representative: c.representative, verdict: c.verdict, witness }
    }
}

const AVOIDER_ATTEMPTS: usize = 10_000;

fn random_cell_content(entry: &CellEntry, len: usize, rng: &mut impl Rng) -> Result<Vec<usize>> {
    match entry {
        CellEntry::Empty => Ok(Vec::new()),
        CellEntry::Inc => Ok((1..=len).collect()),
        CellEntry::Dec => Ok((1..=len).rev().collect()),
        CellEntry::Avoider(pi) => {
            let mut v: Vec<usize> = (1..=len).collect();
            for _ in 0..AVOIDER_ATTEMPTS {
                v.shuffle(rng);
                if Permutation::new(v.clone())?.avoids(pi) {
                    return Ok(v);
                }
            }
            Err(Error::Precondition(format!("no member of Av({}) of length {} found", pi, len)))
        }
    }
}

/// A random member of `Grid(m)`: each non-empty cell gets a length in
/// `0..=max_cell_len` and random admissible content, then the cells of each
/// column and of each row are interleaved uniformly at random.
pub fn sample_grid_member(m: &GriddingMatrix, max_cell_len: usize, rng: &mut impl Rng) -> Result<Permutation> {
    let (k, l) = (m.cols(), m.rows());
    let mut len = vec![vec![0usize; l]; k];
    let mut content = vec![vec![Vec::new(); l]; k];
    for (c, r) in m.nonempty_cells() {
        len[c][r] = rng.gen_range(0..=max_cell_len);
        content[c][r] = random_cell_content(m.get(c, r), len[c][r], rng)?;
    }
    // x_of[c][r][t] = global x of the t-th leftmost point of the cell.
    let mut x_of = vec![vec![Vec::new(); l]; k];
    let mut next = 0usize;
    for c in 0..k {
        let mut seq: Vec<usize> = (0..l).flat_map(|r| std::iter::repeat_n(r, len[c][r])).collect();
        seq.shuffle(rng);
        for r in seq {
            x_of[c][r].push(next);
            next += 1;
        }
    }
    let mut y_of = vec![vec![Vec::new(); l]; k];
    let mut next = 0usize;
    for r in 0..l {
        let mut seq: Vec<usize> = (0..k).flat_map(|c| std::iter::repeat_n(c, len[c][r])).collect();
        seq.shuffle(rng);
        for c in seq {
            y_of[c][r].push(next);
            next += 1;
        }
    }
    let mut vals = vec![0usize; next];
    for c in 0..k {
        for r in 0..l {
            for (t, &v) in content[c][r].iter().enumerate() {
                vals[x_of[c][r][t]] = y_of[c][r][v - 1] + 1;
            }
        }
    }
    Permutation::new(vals)
}

/// `samples` random members drawn from a ChaCha stream seeded with `seed`.
pub fn sample_grid_class(m: &GriddingMatrix, samples: usize, max_cell_len: usize, seed: u64) -> Result<Vec<Permutation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| sample_grid_member(m, max_cell_len, &mut rng)).collect()
}
