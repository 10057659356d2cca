mod common;

use std::collections::BTreeSet;

use common::*;
use gridperm::instances::{AnchoredPpmInstance, ColoredPpmInstance, InflationKind, PsiInstance};
use gridperm::perm::incidence_graph;
use gridperm::solvers::graph_oracles::{find_psi, HOST_VERTEX_LIMIT};
use gridperm::solvers::ppm::{
    find_colored_embedding, find_embedding, is_embedding, solve_anchored_brute, solve_colored_brute, Limits,
};
use gridperm::solvers::treewidth::{
    decomposition_from_order, elimination_width, minor_min_width, treewidth, EXACT_VERTEX_LIMIT,
};
use gridperm::solvers::{
    brute_psi, count_ppm_td, exact_treewidth, heuristic_treewidth, solve_colored_via_counting, BacktrackCounter,
    DecompositionCounter, TreeDecomposition,
};
use gridperm::{Graph, Permutation};
use num_bigint::BigUint;
use proptest::prelude::*;

/// Tree shape and the three axioms, written out directly.
fn check_decomposition(td: &TreeDecomposition, g: &Graph) -> Result<(), String> {
    let t = td.bags.len();
    if td.parent.len() != t {
        return Err("length mismatch".into());
    }
    if g.is_empty() && t == 0 {
        return Ok(());
    }
    if td.parent.iter().filter(|p| p.is_none()).count() != 1 {
        return Err("not exactly one root".into());
    }
    for i in 0..t {
        let (mut cur, mut steps) = (i, 0);
        while let Some(p) = td.parent[cur] {
            cur = p;
            steps += 1;
            if steps > t {
                return Err("cycle".into());
            }
        }
    }
    for v in 0..g.len() {
        let holding: BTreeSet<usize> = (0..t).filter(|&i| td.bags[i].contains(&v)).collect();
        if holding.is_empty() {
            return Err(format!("vertex {} uncovered", v));
        }
        let links = holding.iter().filter(|&&i| td.parent[i].is_some_and(|p| holding.contains(&p))).count();
        if links + 1 != holding.len() {
            return Err(format!("bags with {} are disconnected", v));
        }
    }
    for (u, v) in g.edges() {
        if !td.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            return Err(format!("edge {}-{} uncovered", u, v));
        }
    }
    Ok(())
}

/// Tree-width by dynamic programming over vertex subsets: the best
/// elimination of `s` first costs the max of eliminating `s - v` and the
/// number of outside vertices reachable from `v` through `s - v`.
fn subset_dp_treewidth(g: &Graph) -> usize {
    let n = g.len();
    if n == 0 {
        return 0;
    }
    let reach = |s: u32, v: usize| -> usize {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut outside = 0;
        while let Some(x) = stack.pop() {
            for &w in g.neighbors(x) {
                if seen >> w & 1 == 1 {
                    continue;
                }
                seen |= 1 << w;
                if s >> w & 1 == 1 {
                    stack.push(w);
                } else {
                    outside += 1;
                }
            }
        }
        outside
    };
    let mut best = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for s in 1u32..(1 << n) {
        for v in 0..n {
            if s >> v & 1 == 0 {
                continue;
            }
            let rest = s & !(1 << v);
            let cost = best[rest as usize].max(reach(rest, v));
            best[s as usize] = best[s as usize].min(cost);
        }
    }
    best[(1usize << n) - 1]
}

fn arb_graph(max: usize) -> impl Strategy<Value = Graph> {
    (1..=max)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)))
        .prop_map(|(n, bits)| {
            let mut g = Graph::new(n);
            let mut it = bits.into_iter();
            for u in 0..n {
                for v in u + 1..n {
                    if it.next().unwrap() {
                        g.add_edge(u, v);
                    }
                }
            }
            g
        })
}

fn arb_perm(lo: usize, hi: usize) -> impl Strategy<Value = Permutation> {
    (lo..=hi).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle()).prop_map(|v| Permutation::new(v).unwrap())
}

#[test]
fn treewidth_examples() {
    let cases = [(Graph::path(6), 1), (Graph::grid(3, 3), 3), (Graph::complete(5), 4), (Graph::cycle(7), 2), (Graph::new(4), 0)];
    for (g, w) in cases {
        let t = exact_treewidth(&g).unwrap();
        assert_eq!(t.width, w);
        assert!(t.exact);
        assert_eq!(t.decomposition.width(), w);
        check_decomposition(&t.decomposition, &g).unwrap();
        assert_eq!(subset_dp_treewidth(&g), w);
    }
    assert_eq!(exact_treewidth(&Graph::grid(4, 4)).unwrap().width, 4);
}

#[test]
fn treewidth_scale_guard() {
    assert!(exact_treewidth(&Graph::path(EXACT_VERTEX_LIMIT + 1)).is_err());
    let t = treewidth(&Graph::path(EXACT_VERTEX_LIMIT + 8));
    assert!(!t.exact);
    assert_eq!(t.width, 1);
    check_decomposition(&t.decomposition, &Graph::path(EXACT_VERTEX_LIMIT + 8)).unwrap();
}

#[test]
fn invalid_decompositions_are_rejected() {
    let g = Graph::path(3);
    let missing_edge = TreeDecomposition { bags: vec![vec![0, 1], vec![2]], parent: vec![None, Some(0)] };
    assert!(missing_edge.validate(&g).is_err());
    assert!(check_decomposition(&missing_edge, &g).is_err());
    let split = TreeDecomposition {
        bags: vec![vec![0, 1], vec![1, 2], vec![0]],
        parent: vec![None, Some(0), Some(1)],
    };
    assert!(split.validate(&g).is_err());
    let two_roots = TreeDecomposition { bags: vec![vec![0, 1], vec![1, 2]], parent: vec![None, None] };
    assert!(two_roots.validate(&g).is_err());
    let p = perm("123");
    assert!(count_ppm_td(&p, &perm("1234"), &missing_edge).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn exact_treewidth_matches_subset_dp(g in arb_graph(10)) {
        let t = exact_treewidth(&g).unwrap();
        prop_assert_eq!(t.width, subset_dp_treewidth(&g));
        prop_assert!(check_decomposition(&t.decomposition, &g).is_ok());
        prop_assert!(t.decomposition.validate(&g).is_ok());
        let h = heuristic_treewidth(&g);
        prop_assert!(h.width >= t.width && minor_min_width(&g) <= t.width);
        prop_assert!(check_decomposition(&h.decomposition, &g).is_ok());
    }

    #[test]
    fn every_order_gives_a_decomposition((g, order) in arb_graph(9).prop_flat_map(|g| {
        let n = g.len();
        (Just(g), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
    })) {
        let td = decomposition_from_order(&g, &order);
        prop_assert!(check_decomposition(&td, &g).is_ok());
        prop_assert_eq!(td.width(), elimination_width(&g, &order));
        prop_assert!(td.width() >= subset_dp_treewidth(&g));
    }

    #[test]
    fn decomposition_counts_match_enumeration(p in arb_perm(0, 5), t in arb_perm(0, 9)) {
        let want = BigUint::from(naive_count(p.values(), t.values()));
        let g = incidence_graph(&p);
        prop_assert_eq!(count_ppm_td(&p, &t, &exact_treewidth(&g).unwrap().decomposition).unwrap(), want.clone());
        if !p.is_empty() {
            let single = TreeDecomposition { bags: vec![(0..p.len()).collect()], parent: vec![None] };
            prop_assert_eq!(count_ppm_td(&p, &t, &single).unwrap(), want);
        }
    }

    #[test]
    fn found_embeddings_are_embeddings(p in arb_perm(1, 5), t in arb_perm(1, 10)) {
        let found = find_embedding(&p, &t, &Limits::default()).unwrap();
        prop_assert_eq!(found.is_some(), naive_count(p.values(), t.values()) > 0);
        if let Some(e) = found {
            prop_assert!(is_embedding(&p, &t, &e));
        }
    }

    #[test]
    fn colored_solvers_agree(p in arb_perm(1, 4), t in arb_perm(1, 8), raw in proptest::collection::vec(0usize..4, 8)) {
        let colors: Vec<usize> = raw[..t.len()].to_vec();
        let inst = ColoredPpmInstance::new(p.clone(), t.clone(), colors.clone()).unwrap();
        let want = naive_colored(&p, &t, &colors, inst.t);
        prop_assert_eq!(solve_colored_brute(&inst, &Limits::default()).unwrap(), want);
        prop_assert_eq!(solve_colored_via_counting(&inst, &BacktrackCounter).unwrap(), want);
        prop_assert_eq!(solve_colored_via_counting(&inst, &DecompositionCounter).unwrap(), want);
        if let Some(e) = find_colored_embedding(&inst, &Limits::default()).unwrap() {
            prop_assert!(is_embedding(&p, &t, &e));
            let hit: BTreeSet<usize> = e.iter().map(|&j| colors[j]).collect();
            prop_assert_eq!(hit.len(), inst.t);
        }
    }
}

/// Some occurrence whose image meets all `t` colours, by subset enumeration.
fn naive_colored(p: &Permutation, t: &Permutation, colors: &[usize], num: usize) -> bool {
    let k = p.len();
    (0u32..1 << t.len()).filter(|s| s.count_ones() as usize == k).any(|s| {
        let pos: Vec<usize> = (0..t.len()).filter(|&i| s >> i & 1 == 1).collect();
        let hit: BTreeSet<usize> = pos.iter().map(|&i| colors[i]).collect();
        hit.len() == num && t.subpattern(&pos) == *p
    })
}

#[test]
fn counting_examples() {
    let id6 = Permutation::identity(6);
    let t = heuristic_treewidth(&incidence_graph(&perm("1"))).decomposition;
    assert_eq!(count_ppm_td(&perm("1"), &perm("3142"), &t).unwrap(), BigUint::from(4u32));
    let t = exact_treewidth(&incidence_graph(&perm("12"))).unwrap().decomposition;
    assert_eq!(count_ppm_td(&perm("12"), &id6, &t).unwrap(), BigUint::from(15u32));
    // Counts never drop when the text grows.
    let p = perm("132");
    let t = exact_treewidth(&incidence_graph(&p)).unwrap().decomposition;
    let small = count_ppm_td(&p, &perm("1432"), &t).unwrap();
    let big = count_ppm_td(&p, &perm("15432"), &t).unwrap();
    assert!(big >= small);
    assert_eq!((small, big), (BigUint::from(3u32), BigUint::from(6u32)));
}

#[test]
fn anchored_examples() {
    let inst = |pattern: &str, text: &str, pa, ta| AnchoredPpmInstance {
        pattern: perm(pattern),
        text: perm(text),
        pattern_anchor: pa,
        text_anchor: ta,
        inflation: InflationKind::Increasing,
        provenance: serde_json::Value::Null,
    };
    let l = Limits::default();
    assert!(solve_anchored_brute(&inst("1324", "1324", (0, 3), (0, 3)), &l).unwrap());
    assert!(!solve_anchored_brute(&inst("12345", "1324", (0, 4), (0, 3)), &l).unwrap());
    // 213 occurs in 1324 (as 3 2 4) but never through both ends.
    assert!(!solve_anchored_brute(&inst("213", "1324", (0, 2), (0, 3)), &l).unwrap());
    assert!(solve_anchored_brute(&inst("213", "1324", (0, 2), (1, 3)), &l).unwrap());
    let tight = Limits { max_pattern: 2, max_text: 3 };
    assert!(solve_anchored_brute(&inst("1324", "1324", (0, 3), (0, 3)), &tight).is_err());
}

#[test]
fn colored_examples() {
    let l = Limits::default();
    let one = ColoredPpmInstance::new(perm("12"), perm("2413"), vec![0; 4]).unwrap();
    assert!(solve_colored_brute(&one, &l).unwrap());
    let too_many = ColoredPpmInstance::new(perm("12"), perm("1234"), vec![0, 1, 2, 0]).unwrap();
    assert!(!solve_colored_brute(&too_many, &l).unwrap());
    assert!(!solve_colored_via_counting(&too_many, &DecompositionCounter).unwrap());
    let absent = ColoredPpmInstance::new(perm("21"), perm("1234"), vec![0, 1, 0, 1]).unwrap();
    assert!(!solve_colored_brute(&absent, &l).unwrap());
    assert!(!solve_colored_via_counting(&absent, &BacktrackCounter).unwrap());
    assert!(ColoredPpmInstance::new(perm("1"), perm("12"), vec![0]).is_err());
}

#[test]
fn graph_oracle_examples() {
    let g = Graph::complete(3);
    let chi = coloring(&[1, 1, 1]);
    let yes = PsiInstance::new(g.clone(), Graph::complete(3), chi.clone()).unwrap();
    assert_eq!(find_psi(&yes, HOST_VERTEX_LIMIT).unwrap(), Some(vec![0, 1, 2]));
    assert!(!brute_psi(&PsiInstance::new(g, Graph::new(3), chi).unwrap()).unwrap());
    let single = PsiInstance::new(Graph::new(1), Graph::new(2), vec![0, 0]).unwrap();
    assert!(brute_psi(&single).unwrap());
    let empty_class = PsiInstance::new(Graph::new(2), Graph::new(1), vec![0]).unwrap();
    assert!(!brute_psi(&empty_class).unwrap());
    let big = PsiInstance::new(Graph::new(1), Graph::new(HOST_VERTEX_LIMIT + 1), vec![0; HOST_VERTEX_LIMIT + 1]).unwrap();
    assert!(brute_psi(&big).is_err());
}
