mod common;

use common::*;
use gridperm::gridding::{
    alternating_orientation, apply_orientation, apply_orientation_matrix, cell_graph, classify_cell_graph,
    consistent_orientation, double_matrix, find_gridding, is_gridding, CellGraphClass, GriddedPermutation,
    MatrixJson,
};
use gridperm::witnesses::staircase;
use gridperm::{CellEntry, Gridding, GriddingMatrix, Orientation, Permutation};
use proptest::prelude::*;

fn mat(s: &str) -> GriddingMatrix {
    s.parse().unwrap()
}

/// Every monotone matrix with the given dimensions.
fn all_monotone(cols: usize, rows: usize) -> Vec<GriddingMatrix> {
    let entries = [CellEntry::Empty, CellEntry::Inc, CellEntry::Dec];
    let n = cols * rows;
    (0..3usize.pow(n as u32))
        .map(|code| {
            let mut m = GriddingMatrix::empty(cols, rows);
            let mut x = code;
            for i in 0..n {
                m.set(i % cols, i / cols, entries[x % 3].clone()).unwrap();
                x /= 3;
            }
            m
        })
        .collect()
}

fn rank(class: CellGraphClass) -> usize {
    match class {
        CellGraphClass::Acyclic => 0,
        CellGraphClass::UnicyclicComponents => 1,
        CellGraphClass::BicyclicComponent => 2,
    }
}

#[test]
fn cell_graph_examples() {
    let st = staircase(2, CellEntry::Inc, CellEntry::Inc).unwrap();
    assert_eq!((st.cols(), st.rows()), (2, 3));
    let g = cell_graph(&st).graph;
    assert_eq!((g.len(), g.num_edges()), (4, 3));
    assert!(g.is_tree() && (0..4).all(|v| g.degree(v) <= 2));
    assert!(cell_graph(&GriddingMatrix::empty(3, 2)).graph.is_empty());
    let square = cell_graph(&mat("//\n//\n")).graph;
    assert_eq!((square.len(), square.num_edges()), (4, 4));
    assert!((0..4).all(|v| square.degree(v) == 2));
}

#[test]
fn cell_graph_class_examples() {
    let st3 = staircase(3, CellEntry::Inc, CellEntry::Inc).unwrap();
    assert_eq!(classify_cell_graph(&st3), CellGraphClass::Acyclic);
    assert_eq!(classify_cell_graph(&mat("//\n//\n")), CellGraphClass::UnicyclicComponents);
    assert_eq!(classify_cell_graph(&mat("///\n///\n///\n")), CellGraphClass::BicyclicComponent);
}

#[test]
fn orientation_examples() {
    let m = mat("\\/\n/\\\n");
    let f = consistent_orientation(&m).unwrap().unwrap();
    // Reverse the first column and complement the first (bottom) row.
    assert_eq!(f, Orientation::new(vec![-1, 1], vec![-1, 1]).unwrap());
    assert!(consistent_orientation(&mat("\\/\n//\n")).unwrap().is_none());
    let all_inc = mat("//\n/.\n");
    assert!(consistent_orientation(&all_inc).unwrap().unwrap().is_identity());
    let avoider = GriddingMatrix::from_cells(1, 1, &[(0, 0, CellEntry::Avoider(perm("21")))]).unwrap();
    assert!(consistent_orientation(&avoider).is_err());
}

#[test]
fn identity_orientation_changes_nothing() {
    let m = mat("\\/.\n/\\/\n");
    assert_eq!(apply_orientation_matrix(&m, &Orientation::identity(3, 2)).unwrap(), m);
    assert!(apply_orientation_matrix(&m, &Orientation::identity(2, 2)).is_err());
}

#[test]
fn exhaustive_small_matrices() {
    for cols in 1..=3 {
        for rows in 1..=3 {
            for m in all_monotone(cols, rows) {
                let class = classify_cell_graph(&m);
                if let Some(f) = consistent_orientation(&m).unwrap() {
                    let t = apply_orientation_matrix(&m, &f).unwrap();
                    assert!(t.nonempty_cells().iter().all(|&(c, r)| *t.get(c, r) == CellEntry::Inc));
                } else {
                    assert_ne!(class, CellGraphClass::Acyclic, "acyclic without orientation:\n{}", m);
                }
                let d = double_matrix(&m).unwrap();
                assert!(consistent_orientation(&d).unwrap().is_some());
                assert!(alternating_orientation(d.cols(), d.rows()).is_consistent_for(&d));
                assert!(rank(classify_cell_graph(&d)) >= rank(class), "doubling lost cycles:\n{}", m);
            }
        }
    }
}

#[test]
fn doubling_layout_and_degrees() {
    let d = double_matrix(&mat("/\n")).unwrap();
    assert_eq!(d, mat("./\n/.\n"));
    assert_eq!(double_matrix(&mat("\\\n")).unwrap(), mat("\\.\n.\\\n"));
    // A 4-cycle: every vertex has degree two and keeps it after doubling.
    let sq = double_matrix(&mat("//\n//\n")).unwrap();
    let g = cell_graph(&sq).graph;
    assert!((0..g.len()).all(|v| g.degree(v) == 2));
    let avoider = GriddingMatrix::from_cells(1, 1, &[(0, 0, CellEntry::Avoider(perm("21")))]).unwrap();
    assert!(double_matrix(&avoider).is_err());
}

#[test]
fn gridding_examples() {
    let one = mat("/\n");
    let trivial = Gridding { col_cuts: vec![1, 3], row_cuts: vec![1, 3] };
    assert!(is_gridding(&perm("12"), &trivial, &one));
    assert!(!is_gridding(&perm("21"), &trivial, &one));
    let st2 = staircase(2, CellEntry::Inc, CellEntry::Inc).unwrap();
    assert!(find_gridding(&perm("321"), &st2).is_none());
    assert!(find_gridding(&Permutation::identity(0), &st2).is_some());
}

#[test]
fn text_and_json_round_trip() {
    let m = mat("\\/.\n/\\/\n");
    assert_eq!(mat(&m.to_text().unwrap()), m);
    let json = serde_json::to_string(&m.to_json()).unwrap();
    let back: MatrixJson = serde_json::from_str(&json).unwrap();
    assert_eq!(GriddingMatrix::from_json(&back).unwrap(), m);
    assert_eq!(GriddingMatrix::parse_any(&json).unwrap(), m);
    let av = GriddingMatrix::from_cells(2, 1, &[(0, 0, CellEntry::Avoider(perm("321"))), (1, 0, CellEntry::Dec)]).unwrap();
    assert!(av.to_text().is_none());
    let json = serde_json::to_string(&av.to_json()).unwrap();
    assert!(json.contains("\"avoid\":\"3 2 1\""));
    assert_eq!(GriddingMatrix::parse_any(&json).unwrap(), av);
    assert!("/x\n".parse::<GriddingMatrix>().is_err());
    assert!("//\n/\n".parse::<GriddingMatrix>().is_err());
}

/// A random permutation with random cuts, and the matrix recording the
/// monotone shape of each cell (`Inc` where the content is not monotone,
/// which makes the gridding invalid).
fn arb_gridded() -> impl Strategy<Value = (Permutation, Gridding, GriddingMatrix, Orientation)> {
    (1usize..=9, 1usize..=3, 1usize..=3)
        .prop_flat_map(|(n, k, l)| {
            (
                Just((1..=n).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(1..=n + 1, k - 1),
                proptest::collection::vec(1..=n + 1, l - 1),
                proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], k),
                proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], l),
                proptest::collection::vec(any::<bool>(), k * l),
            )
        })
        .prop_map(|(v, mut cc, mut rc, fc, fr, coin)| {
            let n = v.len();
            cc.sort();
            rc.sort();
            let col_cuts: Vec<usize> = std::iter::once(1).chain(cc).chain(std::iter::once(n + 1)).collect();
            let row_cuts: Vec<usize> = std::iter::once(1).chain(rc).chain(std::iter::once(n + 1)).collect();
            let g = Gridding { col_cuts, row_cuts };
            let p = Permutation::new(v).unwrap();
            let (k, l) = (g.cols(), g.rows());
            let mut m = GriddingMatrix::empty(k, l);
            for c in 0..k {
                for r in 0..l {
                    let pos: Vec<usize> = (0..n).filter(|&i| g.cell_of(&p, i) == (c, r)).collect();
                    let sub = p.subpattern(&pos);
                    let entry = if pos.is_empty() && coin[c * l + r] {
                        CellEntry::Empty
                    } else if sub.is_increasing() && (sub.len() > 1 || coin[c * l + r]) {
                        CellEntry::Inc
                    } else if sub.is_decreasing() {
                        CellEntry::Dec
                    } else {
                        CellEntry::Inc
                    };
                    m.set(c, r, entry).unwrap();
                }
            }
            (p, g, m, Orientation::new(fc, fr).unwrap())
        })
}

proptest! {
    #[test]
    fn orientation_is_an_involution_preserving_griddings((p, g, m, f) in arb_gridded()) {
        let gp = GriddedPermutation { perm: p.clone(), gridding: g.clone() };
        let once = apply_orientation(&gp, &f).unwrap();
        prop_assert_eq!(&once.gridding, &g);
        prop_assert_eq!(apply_orientation(&once, &f).unwrap(), gp);
        let fm = apply_orientation_matrix(&m, &f).unwrap();
        prop_assert_eq!(apply_orientation_matrix(&fm, &f).unwrap(), m.clone());
        prop_assert_eq!(is_gridding(&p, &g, &m), is_gridding(&once.perm, &g, &fm));
    }

    #[test]
    fn found_griddings_are_griddings((p, _g, m, _f) in arb_gridded()) {
        if let Some(found) = find_gridding(&p, &m) {
            prop_assert!(is_gridding(&p, &found, &m));
        }
    }

    #[test]
    fn own_gridding_is_found((p, g, m, _f) in arb_gridded()) {
        if is_gridding(&p, &g, &m) {
            let found = find_gridding(&p, &m);
            prop_assert!(found.is_some());
            prop_assert!(found.unwrap() <= g);
        }
    }
}
