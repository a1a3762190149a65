//! Structural invariants checked on generated inputs.

use higher_groupoids::document::{emit, parse, Document};
use higher_groupoids::equivalence::{
    fiber_product_surjects, fiber_product_two_groupoid, is_equivalence, is_one_equivalence, pb_space,
    pullback_two_groupoid, PullbackInput, StrictTwoGroupoidMap,
};
use higher_groupoids::groupoid::{
    bibundle_morphism_search, compose_bibundles, identity_bibundle, is_biprincipal, pullback_groupoid,
    verify_bibundle, verify_groupoid, FiniteGroup, FiniteGroupoid,
};
use higher_groupoids::simplicial::{
    check_kan, coskeleton, enumerate_hom, skeleton, standard_simplex, KanOutcome, TruncatedSimplicialSet,
};
use higher_groupoids::stacky::{from_two_groupoid, inverse_bibundle, to_two_groupoid, verify_stacky};
use higher_groupoids::two_groupoid::{
    bigon_groupoid, crossed_module_fixture, groupoid_nerve, groupoid_two_data, nerve2, truncate_to_data,
    two_groupoid_isomorphism, verify_two_groupoid, CrossedModule, TwoGroupoidData,
};
use higher_groupoids::unionfind::UnionFind;
use proptest::prelude::*;
use std::sync::Arc;

/// `pair(k) × ℤ/m`: arrows `(i, j, g)` from `j` to `i`.
fn pair_times_cyclic(k: usize, m: usize) -> FiniteGroupoid {
    let arrows: Vec<(usize, usize, usize)> =
        (0..k).flat_map(|i| (0..k).flat_map(move |j| (0..m).map(move |g| (i, j, g)))).collect();
    let index = |i: usize, j: usize, g: usize| (i * k + j) * m + g;
    FiniteGroupoid::from_parts(
        (0..k).map(|i| format!("o{i}")).collect(),
        arrows.iter().map(|(i, j, g)| format!("{i}<{j}^{g}")).collect(),
        arrows.iter().map(|a| a.1).collect(),
        arrows.iter().map(|a| a.0).collect(),
        (0..k).map(|i| index(i, i, 0)).collect(),
        arrows.iter().map(|&(i, j, g)| index(j, i, (m - g) % m)).collect(),
        |a, b| {
            let ((i, _, g), (_, j, h)) = (arrows[a], arrows[b]);
            index(i, j, (g + h) % m)
        },
    )
}

fn small_groupoid() -> impl Strategy<Value = FiniteGroupoid> {
    (1usize..=3, 1usize..=3).prop_map(|(k, m)| pair_times_cyclic(k, m))
}

/// Trivial crossed modules over small cyclic groups.
fn small_two_groupoid() -> impl Strategy<Value = TwoGroupoidData> {
    (1usize..=3, 1usize..=2).prop_map(|(g, h)| {
        crossed_module_fixture(&CrossedModule::trivial(FiniteGroup::cyclic(g), FiniteGroup::cyclic(h))).unwrap()
    })
}

/// Pull back along a refinement repeating edge `e` `k[e]` times.
fn refine(x: &TwoGroupoidData, k: &[usize]) -> (TwoGroupoidData, StrictTwoGroupoidMap) {
    let copies: Vec<(usize, usize)> = k.iter().enumerate().flat_map(|(e, &m)| (0..m).map(move |j| (e, j))).collect();
    let input = PullbackInput {
        z0: x.x(0).to_vec(),
        z1: copies.iter().map(|&(e, j)| format!("{}~{j}", x.x(1)[e])).collect(),
        f0: (0..x.x(0).len()).collect(),
        f1: copies.iter().map(|c| c.0).collect(),
        d0: copies.iter().map(|&(e, _)| x.d1(0, e)).collect(),
        d1: copies.iter().map(|&(e, _)| x.d1(1, e)).collect(),
        s0: None,
    };
    pullback_two_groupoid(x, &input).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn maps_from_simplices_are_cells(g in small_groupoid()) {
        let x = groupoid_nerve(&g, 2);
        prop_assert!(x.verify().passed());
        for m in 0..=2 {
            prop_assert_eq!(enumerate_hom(&standard_simplex(m, 2), &x).len(), x.len(m));
        }
    }

    #[test]
    fn group_nerves_fill_uniquely(m in 1usize..=4) {
        let x = groupoid_nerve(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(m)), 3);
        prop_assert_eq!(x.level_sizes(), (0..=3u32).map(|n| m.pow(n)).collect::<Vec<_>>());
        for dim in 2..=3 {
            for j in 0..=dim {
                prop_assert_eq!(check_kan(&x, dim, j).unwrap(), KanOutcome::HoldsUniquely);
            }
        }
    }

    #[test]
    fn groupoid_nerves_are_two_coskeletal(g in small_groupoid()) {
        let x = groupoid_nerve(&g, 3);
        let rebuilt = coskeleton(&skeleton(&x, 2).truncate(2).unwrap(), 2, 3).unwrap();
        prop_assert_eq!(rebuilt.level_sizes(), x.level_sizes());
    }

    #[test]
    fn union_find_matches_closure(n in 1usize..10, edges in proptest::collection::vec((0usize..10, 0usize..10), 0..12)) {
        let edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let mut related = vec![vec![false; n]; n];
        for (i, row) in related.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in &edges {
            related[a][b] = true;
            related[b][a] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if related[i][k] && related[k][j] {
                        related[i][j] = true;
                    }
                }
            }
        }
        let mut uf = UnionFind::new(n);
        for &(a, b) in &edges {
            uf.union(a, b);
        }
        let (_, class_of) = uf.classes();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(class_of[i] == class_of[j], related[i][j]);
            }
        }
    }

    #[test]
    fn fiber_products_of_covering_squares_surject(
        nu in 1usize..4,
        nbar in 1usize..3,
        u_map in proptest::collection::vec(0usize..3, 4),
        vbar in proptest::collection::vec(0usize..3, 1..4),
        wbar in proptest::collection::vec(0usize..3, 1..4),
        extra in proptest::collection::vec(any::<bool>(), 16),
    ) {
        // u: U -> Ū surjective by construction.
        let u: Vec<usize> = (0..nu.max(nbar)).map(|i| if i < nbar { i } else { u_map[i % 4] % nbar }).collect();
        let p_bar: Vec<usize> = vbar.iter().map(|&x| x % nbar).collect();
        let q_bar: Vec<usize> = wbar.iter().map(|&x| x % nbar).collect();
        // V covers V̄ ×_Ū U, possibly with repeats; likewise W.
        let cover = |bar: &[usize], repeat: &[bool]| -> (Vec<usize>, Vec<usize>) {
            let mut p = Vec::new();
            let mut a = Vec::new();
            for (x, &b) in bar.iter().enumerate() {
                for (y, &uy) in u.iter().enumerate() {
                    if uy == b {
                        let times = if repeat[(x * 4 + y) % repeat.len()] { 2 } else { 1 };
                        for _ in 0..times {
                            p.push(y);
                            a.push(x);
                        }
                    }
                }
            }
            (p, a)
        };
        let (p, a) = cover(&p_bar, &extra[..8]);
        let (q, b) = cover(&q_bar, &extra[8..]);
        prop_assert!(fiber_product_surjects(&p, &q, &p_bar, &q_bar, &a, &b));
        // Dropping one cover element breaks surjectivity exactly when it was the only preimage.
        if p.len() > 1 {
            let (p2, a2) = (p[1..].to_vec(), a[1..].to_vec());
            let covered = (0..p_bar.len()).all(|x| (0..q_bar.len()).filter(|&w| p_bar[x] == q_bar[w]).all(|w| {
                (0..p2.len()).any(|v| a2[v] == x && (0..q.len()).any(|k| b[k] == w && q[k] == p2[v]))
            }));
            prop_assert_eq!(fiber_product_surjects(&p2, &q, &p_bar, &q_bar, &a2, &b), covered);
        }
    }

    #[test]
    fn documents_round_trip(g in small_groupoid()) {
        for doc in [Document::Groupoid(g.clone()), Document::Simplicial(groupoid_nerve(&g, 2))] {
            let text = emit(&doc);
            prop_assert_eq!(parse(&text).unwrap(), doc);
        }
    }

    #[test]
    fn bibundle_composition_is_unital_and_associative(g in small_groupoid(), extra in 1usize..3) {
        let g = Arc::new(g);
        prop_assert!(verify_groupoid(&g).passed());
        // Pull back along a map hitting every object, with `extra` additional points over object 0.
        let mut f: Vec<usize> = (0..g.n_objects()).collect();
        f.extend(std::iter::repeat(0).take(extra));
        let names: Vec<String> = (0..f.len()).map(|i| format!("s{i}")).collect();
        let pulled = pullback_groupoid(&g, &names, &f);
        let e = pulled.bibundle;
        prop_assert!(verify_bibundle(&e).passed());
        prop_assert!(is_biprincipal(&e));
        let id_left = identity_bibundle(e.left.clone());
        let id_right = identity_bibundle(e.right.clone());
        let left_unit = compose_bibundles(&id_left, &e).unwrap();
        let right_unit = compose_bibundles(&e, &id_right).unwrap();
        for composite in [&left_unit, &right_unit] {
            let m = bibundle_morphism_search(composite, &e);
            prop_assert!(m.is_some());
            prop_assert!(m.unwrap().is_bijective(e.len()));
        }
        let assoc_l = compose_bibundles(&compose_bibundles(&id_left, &e).unwrap(), &id_right).unwrap();
        let assoc_r = compose_bibundles(&id_left, &compose_bibundles(&e, &id_right).unwrap()).unwrap();
        prop_assert!(bibundle_morphism_search(&assoc_l, &assoc_r).is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn crossed_modules_are_two_groupoids(x in small_two_groupoid()) {
        prop_assert!(verify_two_groupoid(&x).passed());
        let degenerate: Vec<usize> = (0..x.x(0).len()).map(|v| x.s0(v)).collect();
        let bigons = bigon_groupoid(&x).groupoid;
        prop_assert!(verify_groupoid(&bigons).passed());
        prop_assert_eq!(bigons.n_arrows(), (0..x.x(2).len()).filter(|&c| degenerate.contains(&x.d2(2, c))).count());
        let n = nerve2(&x, 4).unwrap();
        prop_assert_eq!(truncate_to_data(&n).unwrap(), x);
    }

    #[test]
    fn stacky_round_trip_and_inverse(x in small_two_groupoid()) {
        let d = from_two_groupoid(&x).unwrap();
        prop_assert!(verify_stacky(&d).passed());
        prop_assert!(is_biprincipal(&inverse_bibundle(&d)));
        let back = to_two_groupoid(&d).unwrap();
        prop_assert!(two_groupoid_isomorphism(&x, &back).is_some());
    }

    #[test]
    fn refinements_are_one_equivalences(k in proptest::collection::vec(1usize..=2, 2)) {
        let x = groupoid_two_data(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(2))).unwrap();
        let (z, f) = refine(&x, &k);
        prop_assert!(verify_two_groupoid(&z).passed());
        prop_assert!(f.verify().passed());
        let s = f.as_simplicial();
        prop_assert!(is_one_equivalence(&s, 2).passed());
        // The projection PB_n -> X_n hits every cell.
        for n in 0..=2 {
            let pb = pb_space(&s, n).unwrap();
            let mut hit = vec![false; x.x(n).len()];
            for el in &pb.elements {
                hit[el.cell] = true;
            }
            prop_assert!(hit.iter().all(|&h| h));
        }
        // Composition closure: refine again and compose.
        let k2 = vec![1; z.x(1).len()].into_iter().enumerate().map(|(i, m)| m + usize::from(i == 0)).collect::<Vec<_>>();
        let (_, g) = refine(&z, &k2);
        let composite = g.then(&f);
        prop_assert!(composite.verify().passed());
        prop_assert!(is_equivalence(&composite.as_simplicial(), 2).passed());
        // Fiber product with the identity: both projections are strict maps and 1-equivalences.
        let fp = fiber_product_two_groupoid(&f, &StrictTwoGroupoidMap::identity(&x)).unwrap();
        prop_assert!(verify_two_groupoid(&fp.product).passed());
        for leg in [&fp.left, &fp.right] {
            prop_assert!(leg.verify().passed());
            prop_assert!(is_one_equivalence(&leg.as_simplicial(), 2).passed());
        }
    }
}

#[test]
fn simplicial_sets_round_trip_through_documents() {
    let x: TruncatedSimplicialSet = standard_simplex(2, 3);
    let doc = Document::Simplicial(x);
    assert_eq!(parse(&emit(&doc)).unwrap(), doc);
}
