mod common;

use common::*;
use gridperm::assembly::{f_assembly, modified_f_assembly, CellTree, Tile, TileFamily, TileFamilyJson};
use gridperm::gridding::{apply_orientation_matrix, find_gridding, is_gridding};
use gridperm::perm::rat;
use gridperm::{CellEntry, GriddingMatrix, Orientation, Permutation, Point};
use proptest::prelude::*;

fn pair(lo: (i64, i64), hi: (i64, i64)) -> Tile {
    Tile::from_pairs(&[(Point::int(lo.0, lo.1), Point::int(hi.0, hi.1))])
}

/// Values of the two entries of the single pair in tile `(c, r)`, and their
/// positions.
fn extent(a: &gridperm::assembly::Assembly, c: usize, r: usize) -> ((usize, usize), (usize, usize)) {
    let pos = a.tile_positions(c, r);
    let (x0, x1) = (pos[0].min(pos[1]), pos[0].max(pos[1]));
    let (y0, y1) = (a.perm().at(pos[0]).min(a.perm().at(pos[1])), a.perm().at(pos[0]).max(a.perm().at(pos[1])));
    ((x0, x1), (y0, y1))
}

fn inside(inner: (usize, usize), outer: (usize, usize)) -> bool {
    outer.0 < inner.0 && inner.1 < outer.1
}

#[test]
fn sandwiching_nests_along_a_straight_chain() {
    let mut fam = TileFamily::new(3, 3, 1);
    for c in 0..3 {
        fam.set(c, 0, pair((1, 1), (2, 2))).unwrap();
    }
    let tree = CellTree::from_edges((0, 0), &[((0, 0), (1, 0)), ((1, 0), (2, 0))]).unwrap();
    let a = modified_f_assembly(&fam, &Orientation::identity(3, 1), &tree).unwrap();
    let (e0, e1, e2) = (extent(&a, 0, 0), extent(&a, 1, 0), extent(&a, 2, 0));
    assert!(inside(e1.1, e0.1) && inside(e2.1, e1.1) && inside(e2.1, e0.1));
}

#[test]
fn sandwiching_switches_axis_at_a_corner() {
    let mut fam = TileFamily::new(3, 2, 2);
    for &(c, r) in &[(0, 0), (1, 0), (1, 1)] {
        fam.set(c, r, pair((1, 1), (2, 2))).unwrap();
    }
    let tree = CellTree::from_edges((0, 0), &[((0, 0), (1, 0)), ((1, 0), (1, 1))]).unwrap();
    let a = modified_f_assembly(&fam, &Orientation::identity(2, 2), &tree).unwrap();
    assert!(inside(extent(&a, 1, 0).1, extent(&a, 0, 0).1));
    assert!(inside(extent(&a, 1, 1).0, extent(&a, 1, 0).0));
}

#[test]
fn modified_assembly_rejects_loose_points() {
    let mut fam = TileFamily::new(3, 1, 1);
    fam.set(0, 0, Tile::new(vec![Point::int(1, 1)])).unwrap();
    let tree = CellTree::from_edges((0, 0), &[]).unwrap();
    assert!(modified_f_assembly(&fam, &Orientation::identity(1, 1), &tree).is_err());
}

#[test]
fn tile_family_json_round_trip() {
    let mut fam = TileFamily::new(4, 2, 1);
    fam.set(0, 0, Tile::new(vec![Point::new(rat(3) / rat(2), rat(1)), Point::int(2, 3)])).unwrap();
    fam.set(1, 0, pair((1, 1), (4, 4))).unwrap();
    let json = serde_json::to_string(&fam.to_json().unwrap()).unwrap();
    let back: TileFamilyJson = serde_json::from_str(&json).unwrap();
    let fam2 = TileFamily::from_json(&back).unwrap();
    assert_eq!(serde_json::to_string(&fam2.to_json().unwrap()).unwrap(), json);
    let f = Orientation::identity(2, 1);
    assert_eq!(f_assembly(&fam, &f).unwrap(), f_assembly(&fam2, &f).unwrap());
}

/// A random monotone matrix, a random orientation and a tile family whose
/// tile `(c, r)` is a random run matching the cell entry.
fn arb_family() -> impl Strategy<Value = (GriddingMatrix, Orientation, TileFamily)> {
    (1usize..=3, 1usize..=3)
        .prop_flat_map(|(k, l)| {
            (
                Just((k, l)),
                proptest::collection::vec(0usize..3, k * l),
                proptest::collection::vec(0usize..=4, k * l),
                proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], k),
                proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], l),
            )
        })
        .prop_map(|((k, l), kinds, lens, fc, fr)| {
            let mut m = GriddingMatrix::empty(k, l);
            let mut fam = TileFamily::new(4, k, l);
            for c in 0..k {
                for r in 0..l {
                    let i = c * l + r;
                    let (entry, p) = match kinds[i] {
                        0 => (CellEntry::Empty, Permutation::identity(0)),
                        1 => (CellEntry::Inc, Permutation::identity(lens[i])),
                        _ => (CellEntry::Dec, Permutation::decreasing(lens[i])),
                    };
                    m.set(c, r, entry).unwrap();
                    fam.set(c, r, Tile::from_permutation(&p)).unwrap();
                }
            }
            (m, Orientation::new(fc, fr).unwrap(), fam)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn assemblies_lie_in_the_oriented_class((m, f, fam) in arb_family()) {
        let a = f_assembly(&fam, &f).unwrap();
        prop_assert_eq!(a.perm().len(), fam.total_points());
        let fm = apply_orientation_matrix(&m, &f).unwrap();
        prop_assert!(is_gridding(a.perm(), a.gridding(), &fm));
        prop_assert!(find_gridding(a.perm(), &fm).is_some());
        prop_assert_eq!(f_assembly(&fam, &f).unwrap(), a);
    }

    #[test]
    fn assembled_sources_are_a_bijection((_m, f, fam) in arb_family()) {
        let a = f_assembly(&fam, &f).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for s in &a.source {
            prop_assert!(s.index < fam.tile(s.col, s.row).len());
            prop_assert!(seen.insert(*s));
        }
    }
}

#[test]
fn staircase_sample_from_assembly() {
    let m = GriddingMatrix::inc_cells(2, 3, &[(0, 0), (0, 1), (1, 1), (1, 2)]).unwrap();
    let mut fam = TileFamily::new(3, 2, 3);
    for &(c, r) in &[(0, 0), (0, 1), (1, 1), (1, 2)] {
        fam.set(c, r, Tile::from_permutation(&perm("123"))).unwrap();
    }
    let a = f_assembly(&fam, &Orientation::identity(2, 3)).unwrap();
    assert!(is_gridding(a.perm(), a.gridding(), &m));
}
