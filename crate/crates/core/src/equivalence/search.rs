//! Searches: strict sections and inverses of simplicial maps, and a bounded
//! search for 1-Morita equivalences of 2-groupoids.
//!
//! The Morita search is incomplete by design. It ranges over refinements of
//! `X` that keep `X_0` and repeat `X_1` cells, up to a size bound.

use super::{is_one_equivalence, pullback_two_groupoid, PullbackInput, StrictTwoGroupoidMap};
use crate::simplicial::{enumerate_hom, SimplicialMap};
use crate::two_groupoid::{bigon_groupoid, TwoGroupoidData};
use crate::unionfind::UnionFind;

/// Simplicial maps `s` with `f ∘ s = id`.
pub fn strict_sections(f: &SimplicialMap) -> Vec<SimplicialMap> {
    enumerate_hom(&f.target, &f.source)
        .into_iter()
        .map(|level_map| SimplicialMap { source: f.target.clone(), target: f.source.clone(), level_map })
        .filter(|s| s.then(f).level_map.iter().all(|lv| lv.iter().enumerate().all(|(i, &y)| i == y)))
        .collect()
}

/// A section that is also a left inverse.
pub fn strict_inverse(f: &SimplicialMap) -> Option<SimplicialMap> {
    strict_sections(f)
        .into_iter()
        .find(|s| f.then(s).level_map.iter().all(|lv| lv.iter().enumerate().all(|(i, &y)| i == y)))
}

/// Whether `V ×_U W -> V̄ ×_Ū W̄` is onto, for `p: V -> U`, `q: W -> U`,
/// `p̄: V̄ -> Ū`, `q̄: W̄ -> Ū` and vertical maps `a: V -> V̄`, `b: W -> W̄`.
pub fn fiber_product_surjects(p: &[usize], q: &[usize], p_bar: &[usize], q_bar: &[usize], a: &[usize], b: &[usize]) -> bool {
    let mut hit = std::collections::HashSet::new();
    for v in 0..p.len() {
        for w in 0..q.len() {
            if p[v] == q[w] {
                hit.insert((a[v], b[w]));
            }
        }
    }
    (0..p_bar.len()).all(|v| (0..q_bar.len()).all(|w| p_bar[v] != q_bar[w] || hit.contains(&(v, w))))
}

/// Per vertex: size of its component, number of loop classes, bigon automorphisms of its unit.
fn vertex_invariants(x: &TwoGroupoidData) -> Vec<(usize, usize, usize)> {
    let n0 = x.x(0).len();
    let mut uf = UnionFind::new(n0);
    for e in 0..x.x(1).len() {
        uf.union(x.d1(0, e), x.d1(1, e));
    }
    let (classes, class_of) = uf.classes();
    let bigons = bigon_groupoid(x).groupoid;
    let orbits = bigons.orbits();
    let mut out: Vec<(usize, usize, usize)> = (0..n0)
        .map(|v| {
            let loops = orbits.iter().filter(|o| x.d1(0, o[0]) == v && x.d1(1, o[0]) == v).count();
            (classes[class_of[v]].len(), loops, bigons.isotropy(x.s0(v)).len())
        })
        .collect();
    out.sort_unstable();
    out
}

/// An invariant of 1-Morita equivalence that separates `x` and `y`.
pub fn morita_obstruction(x: &TwoGroupoidData, y: &TwoGroupoidData) -> Option<String> {
    if x.x(0).len() != y.x(0).len() {
        return Some(format!("{} objects against {}", x.x(0).len(), y.x(0).len()));
    }
    let (a, b) = (vertex_invariants(x), vertex_invariants(y));
    (a != b).then(|| format!("(component size, π_1, π_2) per object differ: {a:?} against {b:?}"))
}

/// `X <- Z -> Y` with both legs 1-equivalences.
#[derive(Clone, Debug)]
pub struct MoritaWitness {
    pub z: TwoGroupoidData,
    pub f: StrictTwoGroupoidMap,
    pub g: StrictTwoGroupoidMap,
}

#[derive(Clone, Debug)]
pub enum MoritaOutcome {
    Witness(Box<MoritaWitness>),
    Obstructed(String),
    /// No witness among refinements with at most the bound many `Z_1` cells.
    Exhausted,
}

/// Edge multiplicities `k(e) >= 1` with total at most `bound`, by total then lexicographically.
fn multiplicities(edges: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for total in edges..=bound {
        let mut cur = Vec::new();
        fn rec(edges: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == edges {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let rest = edges - cur.len() - 1;
            for k in 1..=left.saturating_sub(rest) {
                cur.push(k);
                rec(edges, left - k, cur, out);
                cur.pop();
            }
        }
        rec(edges, total, &mut cur, &mut out);
    }
    out
}

fn refinement(x: &TwoGroupoidData, k: &[usize]) -> PullbackInput {
    let copies: Vec<(usize, usize)> = k.iter().enumerate().flat_map(|(e, &m)| (0..m).map(move |j| (e, j))).collect();
    PullbackInput {
        z0: x.x(0).to_vec(),
        z1: copies.iter().map(|&(e, j)| if k[e] == 1 { x.x(1)[e].clone() } else { format!("{}#{j}", x.x(1)[e]) }).collect(),
        f0: (0..x.x(0).len()).collect(),
        f1: copies.iter().map(|c| c.0).collect(),
        d0: copies.iter().map(|&(e, _)| x.d1(0, e)).collect(),
        d1: copies.iter().map(|&(e, _)| x.d1(1, e)).collect(),
        s0: None,
    }
}

pub fn bounded_one_morita_search(x: &TwoGroupoidData, y: &TwoGroupoidData, bound: usize) -> MoritaOutcome {
    if let Some(reason) = morita_obstruction(x, y) {
        return MoritaOutcome::Obstructed(reason);
    }
    for k in multiplicities(x.x(1).len(), bound) {
        if k.iter().sum::<usize>() < y.x(1).len() {
            continue;
        }
        let Ok((z, f)) = pullback_two_groupoid(x, &refinement(x, &k)) else { continue };
        if let Some(g) = one_equivalence_onto(&z, y) {
            return MoritaOutcome::Witness(Box::new(MoritaWitness { z, f, g }));
        }
    }
    MoritaOutcome::Exhausted
}

/// First strict 1-equivalence `z -> y` in search order.
fn one_equivalence_onto(z: &TwoGroupoidData, y: &TwoGroupoidData) -> Option<StrictTwoGroupoidMap> {
    let n0 = z.x(0).len();
    if n0 != y.x(0).len() {
        return None;
    }
    // Filled tetrahedra of z, indexed by member cell.
    let tetrahedra: Vec<[usize; 4]> =
        z.m[0].iter().map(|(k, &v)| crate::two_groupoid::tetrahedron(0, *k, v)).collect();
    let mut containing = vec![Vec::new(); z.x(2).len()];
    for (i, t) in tetrahedra.iter().enumerate() {
        for &c in t {
            if !containing[c].contains(&i) {
                containing[c].push(i);
            }
        }
    }
    let mut search = MapSearch {
        z,
        y,
        tetrahedra,
        containing,
        g: [vec![usize::MAX; n0], vec![usize::MAX; z.x(1).len()], vec![usize::MAX; z.x(2).len()]],
        used: vec![false; n0],
        found: None,
    };
    search.vertices(0);
    search.found
}

struct MapSearch<'a> {
    z: &'a TwoGroupoidData,
    y: &'a TwoGroupoidData,
    tetrahedra: Vec<[usize; 4]>,
    containing: Vec<Vec<usize>>,
    g: [Vec<usize>; 3],
    used: Vec<bool>,
    found: Option<StrictTwoGroupoidMap>,
}

impl MapSearch<'_> {
    fn vertices(&mut self, v: usize) -> bool {
        if v == self.g[0].len() {
            return self.cells(1, 0);
        }
        for w in 0..self.used.len() {
            if !self.used[w] {
                self.used[w] = true;
                self.g[0][v] = w;
                if self.vertices(v + 1) {
                    return true;
                }
                self.used[w] = false;
            }
        }
        self.g[0][v] = usize::MAX;
        false
    }

    fn candidates(&self, n: usize, c: usize) -> Vec<usize> {
        let (z, y) = (&self.z.layers, &self.y.layers);
        for j in 0..n {
            for below in 0..z.len(n - 1) {
                if z.degen(n - 1, j, below) == c {
                    return vec![y.degen(n - 1, j, self.g[n - 1][below])];
                }
            }
        }
        (0..y.len(n)).filter(|&d| (0..=n).all(|i| y.face(n, i, d) == self.g[n - 1][z.face(n, i, c)])).collect()
    }

    fn cells(&mut self, n: usize, c: usize) -> bool {
        if c == self.g[n].len() {
            return if n == 1 { self.cells(2, 0) } else { self.finish() };
        }
        for d in self.candidates(n, c) {
            self.g[n][c] = d;
            let consistent = n == 1
                || self.containing[c].iter().all(|&t| {
                    let image = self.tetrahedra[t].map(|x| self.g[2][x]);
                    image.contains(&usize::MAX) || self.y.fills(image)
                });
            if consistent && self.cells(n, c + 1) {
                return true;
            }
        }
        self.g[n][c] = usize::MAX;
        false
    }

    fn finish(&mut self) -> bool {
        let map = StrictTwoGroupoidMap {
            source: self.z.clone(),
            target: self.y.clone(),
            f0: self.g[0].clone(),
            f1: self.g[1].clone(),
            f2: self.g[2].clone(),
        };
        if map.verify().passed() && is_one_equivalence(&map.as_simplicial(), 2).passed() {
            self.found = Some(map);
            return true;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{FiniteGroup, FiniteGroupoid};
    use crate::two_groupoid::{cech_fixture, crossed_module_fixture, groupoid_two_data, CrossedModule};

    #[test]
    fn multiplicities_are_ordered_by_total() {
        assert_eq!(multiplicities(2, 3), vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn cech_projection_has_sections_but_no_inverse() {
        let pts: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let cover = vec![vec!["a".to_string(), "b".to_string()], vec!["b".to_string(), "c".to_string()]];
        let c = cech_fixture(&pts, &cover, 2).unwrap();
        assert_eq!(strict_sections(&c.projection).len(), 2);
        assert!(strict_inverse(&c.projection).is_none());
    }

    #[test]
    fn search_finds_identity_and_obstructs_different_groups() {
        let x = crossed_module_fixture(&CrossedModule::klein_trivial()).unwrap();
        assert!(matches!(bounded_one_morita_search(&x, &x, 2), MoritaOutcome::Witness(_)));
        let z2 = groupoid_two_data(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(2))).unwrap();
        let z3 = groupoid_two_data(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(3))).unwrap();
        assert!(matches!(bounded_one_morita_search(&z2, &z3, 6), MoritaOutcome::Obstructed(_)));
    }
}
