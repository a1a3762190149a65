//! Derived sizes and verdicts, each recomputed by a brute-force oracle that
//! shares no code with the library, and frozen as literals.

use higher_groupoids::equivalence::pb_space;
use higher_groupoids::groupoid::{
    identity_bibundle, is_biprincipal, pullback_groupoid, verify_bibundle, FiniteGroup, FiniteGroupoid,
};
use higher_groupoids::simplicial::{
    boundary_complex, check_kan, coskeleton, enumerate_hom, horn_complex, skeleton, standard_simplex, KanOutcome,
};
use higher_groupoids::stacky::{from_two_groupoid, inverse_bibundle, strict_inverse_check, unit_restriction};
use higher_groupoids::two_groupoid::{
    bigon_groupoid, cech_fixture, crossed_module_fixture, groupoid_nerve, groupoid_two_data, horn_space, nerve2,
    CrossedModule, TwoGroupoidData,
};
use std::sync::Arc;

/// Weakly increasing sequences of length `len` in `0..=m`.
fn monotone(len: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                let lo = s.last().copied().unwrap_or(0);
                (lo..=m).map(move |v| {
                    let mut t = s.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

fn distinct(s: &[usize]) -> usize {
    let mut v = s.to_vec();
    v.dedup();
    v.len()
}

fn klein() -> TwoGroupoidData {
    crossed_module_fixture(&CrossedModule::klein_trivial()).unwrap()
}

#[test]
fn simplex_levels_count_monotone_maps() {
    let oracle: Vec<usize> = (0..=2).map(|n| monotone(n + 1, 2).len()).collect();
    assert_eq!(oracle, vec![3, 6, 10]);
    assert_eq!(standard_simplex(2, 2).level_sizes(), oracle);

    let edges: Vec<String> = monotone(2, 1).iter().map(|s| s.iter().map(|d| d.to_string()).collect()).collect();
    assert_eq!(edges, vec!["00", "01", "11"]);
    let interval = standard_simplex(1, 1);
    assert_eq!(interval.level_sizes(), vec![2, 3]);
    assert_eq!(interval.cells(1), edges.as_slice());
}

#[test]
fn horn_and_boundary_nondegenerate_cells() {
    // A cell of Δ[m] lies in Λ[m,j] iff its image misses some vertex other than j.
    let in_horn = |s: &[usize], m: usize, j: usize| (0..=m).any(|v| v != j && !s.contains(&v));
    let count = |m: usize, j: Option<usize>, n: usize| {
        monotone(n + 1, m)
            .iter()
            .filter(|s| distinct(s) == n + 1)
            .filter(|s| match j {
                Some(j) => in_horn(s, m, j),
                None => distinct(s) <= m,
            })
            .count()
    };
    let nondeg = |x: &higher_groupoids::simplicial::TruncatedSimplicialSet| -> Vec<usize> {
        (0..=x.top()).map(|n| x.nondegenerate_cells(n).len()).collect()
    };
    assert_eq!([count(2, Some(1), 0), count(2, Some(1), 1), count(2, Some(1), 2)], [3, 2, 0]);
    assert_eq!(nondeg(&horn_complex(2, 1, 2).unwrap().0), vec![3, 2, 0]);
    assert_eq!([count(1, Some(0), 0), count(1, Some(0), 1)], [1, 0]);
    assert_eq!(nondeg(&horn_complex(1, 0, 1).unwrap().0), vec![1, 0]);
    let (h20, _) = horn_complex(2, 0, 2).unwrap();
    let names: Vec<&str> = h20.nondegenerate_cells(1).iter().map(|&c| h20.name(1, c)).collect();
    assert_eq!(names, vec!["01", "02"]);
    assert_eq!([count(2, None, 0), count(2, None, 1), count(2, None, 2)], [3, 3, 0]);
    assert_eq!(nondeg(&boundary_complex(2, 2).0), vec![3, 3, 0]);
}

#[test]
fn group_and_pair_nerves_count_strings() {
    // Composable strings: n arrows of a group, or n+1 objects of a pair groupoid.
    let strings = |alphabet: usize, len: usize| (0..len).fold(1usize, |acc, _| acc * alphabet);
    for m in [2, 3] {
        let x = groupoid_nerve(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(m)), 4);
        let oracle: Vec<usize> = (0..=4).map(|n| strings(m, n)).collect();
        assert_eq!(x.level_sizes(), oracle);
    }
    assert_eq!((0..=4).map(|n| strings(2, n)).collect::<Vec<_>>(), vec![1, 2, 4, 8, 16]);
    assert_eq!((0..=4).map(|n| strings(3, n)).collect::<Vec<_>>(), vec![1, 3, 9, 27, 81]);
    let x = groupoid_nerve(&FiniteGroupoid::pair(3), 4);
    assert_eq!(x.level_sizes(), (0..=4).map(|n| strings(3, n + 1)).collect::<Vec<_>>());
    assert_eq!(x.level_sizes(), vec![3, 9, 27, 81, 243]);
}

#[test]
fn maps_from_horns_and_simplices_into_a_group_nerve() {
    let x = groupoid_nerve(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)), 2);
    // Λ[2,1] is two edges through vertex 1; the nerve has one vertex, so any pair of edges glues.
    let oracle = (0..x.len(1)).flat_map(|a| (0..x.len(1)).map(move |b| (a, b))).filter(|&(a, b)| x.face(1, 1, b) == x.face(1, 0, a)).count();
    assert_eq!(oracle, 4);
    assert_eq!(enumerate_hom(&horn_complex(2, 1, 2).unwrap().0, &x).len(), oracle);
    assert_eq!(enumerate_hom(&standard_simplex(2, 2), &x).len(), 4);
    let nondeg: Vec<&str> = x.nondegenerate_cells(1).iter().map(|&c| x.name(1, c)).collect();
    assert_eq!(nondeg.len(), 1);
    assert_eq!(x.nondegenerate_cells(2).len(), 1);
    assert_eq!(standard_simplex(2, 2).nondegenerate_cells(2).iter().map(|&c| standard_simplex(2, 2).name(2, c).to_string()).collect::<Vec<_>>(), vec!["012"]);
}

#[test]
fn kan_outcomes() {
    let z2 = groupoid_nerve(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)), 2);
    assert_eq!(check_kan(&z2, 2, 1).unwrap(), KanOutcome::HoldsUniquely);
    // Δ[1] is the nerve of a poset: every inner horn (a, b) with a[1] = b[0] composes.
    let interval = standard_simplex(1, 2);
    let unfilled = monotone(2, 1)
        .iter()
        .flat_map(|a| monotone(2, 1).into_iter().map(move |b| (a.clone(), b)))
        .filter(|(a, b)| a[1] == b[0])
        .filter(|(a, b)| monotone(3, 1).iter().all(|t| !(t[0] == a[0] && t[1] == a[1] && t[2] == b[1])))
        .count();
    assert_eq!(unfilled, 0);
    // Outer horns fail: edges 01 and 00 from vertex 0 would need a triangle on 0, 1, 0.
    assert!(matches!(check_kan(&interval, 2, 0).unwrap(), KanOutcome::Fails { .. }));
    assert!(!matches!(check_kan(&interval, 2, 1).unwrap(), KanOutcome::Fails { .. }));
}

#[test]
fn coskeleton_of_pair_groupoid_one_skeleton() {
    let x = groupoid_nerve(&FiniteGroupoid::pair(2), 3);
    let rebuilt = coskeleton(&skeleton(&x, 1).truncate(1).unwrap(), 1, 3).unwrap();
    assert_eq!(rebuilt.level_sizes(), (0..=3).map(|n| 1usize << (n + 1)).collect::<Vec<_>>());
    assert_eq!(rebuilt.level_sizes(), vec![2, 4, 8, 16]);
}

#[test]
fn crossed_module_horn_spaces() {
    let x = klein();
    assert_eq!(x.x(2).len(), 8);
    let n1 = x.x(1).len();
    let pairs = (0..n1).flat_map(|a| (0..n1).map(move |b| (a, b))).filter(|&(a, b)| x.d1(1, a) == x.d1(0, b)).count();
    assert_eq!(pairs, 4);
    assert_eq!(horn_space(&x, 2, 1).len(), pairs);
    // Λ(3,0): faces 1, 2, 3 with d_a η_b = d_{b-1} η_a for a < b.
    let n2 = x.x(2).len();
    let mut glued = 0;
    for e1 in 0..n2 {
        for e2 in 0..n2 {
            for e3 in 0..n2 {
                let faces = [usize::MAX, e1, e2, e3];
                let ok = [(1, 2), (1, 3), (2, 3)].iter().all(|&(a, b)| x.d2(a, faces[b]) == x.d2(b - 1, faces[a]));
                glued += usize::from(ok);
            }
        }
    }
    assert_eq!(glued, 64);
    assert_eq!(horn_space(&x, 3, 0).len(), glued);
}

#[test]
fn crossed_module_nerve_level_three() {
    let x = klein();
    let n = nerve2(&x, 3).unwrap();
    // Level 3 is one filled tetrahedron per Λ(3,0) horn.
    assert_eq!(n.level_sizes(), vec![1, 2, 8, 64]);
}

#[test]
fn bigons_of_the_crossed_module() {
    let x = klein();
    let degenerate: Vec<usize> = (0..x.x(0).len()).map(|v| x.s0(v)).collect();
    let bigons = (0..x.x(2).len()).filter(|&c| degenerate.contains(&x.d2(2, c))).count();
    assert_eq!(bigons, 4);
    let b = bigon_groupoid(&x).groupoid;
    assert_eq!((b.n_objects(), b.n_arrows()), (2, bigons));
    // Trivial boundary: every bigon is a loop, two per object.
    assert!((0..b.n_arrows()).all(|a| b.source[a] == b.target[a]));
    let promoted = groupoid_two_data(&FiniteGroupoid::pair(2)).unwrap();
    let pb = bigon_groupoid(&promoted).groupoid;
    assert!((0..pb.n_arrows()).all(|a| pb.identity[pb.source[a]] == a));
}

#[test]
fn cech_sizes() {
    let pts: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
    let cover: Vec<Vec<String>> = vec![vec!["a".into(), "b".into()], vec!["b".into(), "c".into()]];
    let tuples = |n: usize| -> usize {
        // Ordered chart tuples of length n+1 with a point in their intersection.
        let mut count = 0;
        let mut idx = vec![0; n + 1];
        loop {
            count += pts.iter().filter(|p| idx.iter().all(|&c| cover[c].contains(p))).count();
            let mut k = 0;
            while k <= n {
                idx[k] += 1;
                if idx[k] < cover.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k > n {
                return count;
            }
        }
    };
    assert_eq!([tuples(0), tuples(1), tuples(2)], [4, 6, 10]);
    let c = cech_fixture(&pts, &cover, 2).unwrap();
    assert_eq!(c.nerve.level_sizes(), vec![4, 6, 10]);
    // PB_0 is M; PB_1 pairs chart-points over the same point of M.
    assert_eq!(pb_space(&c.projection, 0).unwrap().len(), 3);
    let over_same_point: usize = pts.iter().map(|p| cover.iter().filter(|u| u.contains(p)).count().pow(2)).sum();
    assert_eq!(over_same_point, 6);
    assert_eq!(pb_space(&c.projection, 1).unwrap().len(), over_same_point);
}

#[test]
fn bibundle_sizes() {
    for k in 1..=3 {
        let g = Arc::new(FiniteGroupoid::pair(k));
        let e = identity_bibundle(g);
        assert_eq!(e.len(), k * k);
        assert!(verify_bibundle(&e).passed());
    }
    let z2 = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
    let pts: Vec<String> = vec!["p".into(), "q".into()];
    let pulled = pullback_groupoid(&z2, &pts, &[0, 0]);
    assert_eq!(pulled.groupoid.n_arrows(), 2 * 2 * 2);
}

#[test]
fn stacky_sizes_from_the_crossed_module() {
    let x = klein();
    let d = from_two_groupoid(&x).unwrap();
    assert_eq!((d.groupoid.n_objects(), d.groupoid.n_arrows(), d.multiplication.len()), (2, 4, 8));
    assert!(!is_biprincipal(&d.multiplication));
    // Inverse carrier: (g01, g12, h) with g01 g12 = 1 in ℤ/2, h free.
    let g = FiniteGroup::cyclic(2);
    let oracle = (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).filter(|&(a, b)| g.mul(a, b) == g.identity).count() * 2;
    assert_eq!(oracle, 4);
    let inv = inverse_bibundle(&d);
    assert_eq!(inv.len(), oracle);
    assert!(is_biprincipal(&inv));
    assert!(strict_inverse_check(&d).is_some());
    // Unit leg restriction: cells whose first edge is degenerate, i.e. the bigons.
    let (restricted, _) = unit_restriction(&d, &d.power(2), 0);
    assert_eq!(restricted.len(), 4);
}
