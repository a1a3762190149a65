//! Equivalences of truncated simplicial sets and of 2-groupoids.
//!
//! `f: Z -> X` is an equivalence of degree `m` when every
//! `Z_n -> PB_n = hom(∂Δ[n], Z) ×_{hom(∂Δ[n], X)} X_n` is onto for `n < m`
//! and bijective for `n = m`.

mod pullback;
mod search;

pub use pullback::{fiber_product_two_groupoid, pullback_two_groupoid, FiberProduct, PullbackInput};
pub use search::{
    bounded_one_morita_search, fiber_product_surjects, morita_obstruction, strict_inverse, strict_sections, MoritaOutcome,
    MoritaWitness,
};

use crate::report::Report;
use crate::simplicial::{boundary_complex, enumerate_hom, simplex_values, LevelMap, SimplicialMap, TruncatedSimplicialSet};
use crate::two_groupoid::{verify_two_groupoid, TwoGroupoidData};
use std::collections::HashMap;

/// A levelwise map of 2-groupoid data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictTwoGroupoidMap {
    pub source: TwoGroupoidData,
    pub target: TwoGroupoidData,
    pub f0: Vec<usize>,
    pub f1: Vec<usize>,
    pub f2: Vec<usize>,
}

impl StrictTwoGroupoidMap {
    pub fn identity(x: &TwoGroupoidData) -> Self {
        let id = |n: usize| (0..x.x(n).len()).collect();
        StrictTwoGroupoidMap { source: x.clone(), target: x.clone(), f0: id(0), f1: id(1), f2: id(2) }
    }

    pub fn levels(&self) -> [&Vec<usize>; 3] {
        [&self.f0, &self.f1, &self.f2]
    }

    /// The underlying map of layers.
    pub fn as_simplicial(&self) -> SimplicialMap {
        SimplicialMap {
            source: self.source.layers.clone(),
            target: self.target.layers.clone(),
            level_map: vec![self.f0.clone(), self.f1.clone(), self.f2.clone()],
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &StrictTwoGroupoidMap) -> StrictTwoGroupoidMap {
        let comp = |a: &Vec<usize>, b: &Vec<usize>| a.iter().map(|&x| b[x]).collect();
        StrictTwoGroupoidMap {
            source: self.source.clone(),
            target: other.target.clone(),
            f0: comp(&self.f0, &other.f0),
            f1: comp(&self.f1, &other.f1),
            f2: comp(&self.f2, &other.f2),
        }
    }

    /// Commutation with faces, degeneracies and the four `m_i` tables.
    pub fn verify(&self) -> Report {
        let mut r = Report::new("strict 2-groupoid map");
        r.absorb("layers", self.as_simplicial().verify());
        if !r.passed() {
            return r;
        }
        let (s, t) = (&self.source, &self.target);
        let witness = (0..4).find_map(|i| {
            s.m[i].iter().find_map(|(k, &v)| {
                let image = t.mult(i, k.map(|x| self.f2[x]));
                (image != Some(self.f2[v])).then(|| {
                    let names: Vec<&str> = k.iter().map(|&x| s.x(2)[x].as_str()).collect();
                    format!("m{i}({}) = {} is not sent to m{i} of the images", names.join(","), s.x(2)[v])
                })
            })
        });
        r.record("commutes with m_0..m_3", "strict-map.m", witness);
        r
    }
}

/// One element of a PB space: the images of the `n + 1` faces in `Z_{n-1}` and a cell of `X_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PBElement {
    pub boundary: Vec<usize>,
    pub cell: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PBSpace {
    pub n: usize,
    /// Sorted by boundary, then cell.
    pub elements: Vec<PBElement>,
}

impl PBSpace {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn describe(&self, z: &TruncatedSimplicialSet, x: &TruncatedSimplicialSet, k: usize) -> String {
        let e = &self.elements[k];
        let faces: Vec<&str> = e.boundary.iter().map(|&c| z.name(self.n - 1, c)).collect();
        format!("(∂ = [{}], {})", faces.join(", "), x.name(self.n, e.cell))
    }
}

/// Positions in `∂Δ[n]` (truncated at `n - 1`) of the faces `d_0 .. d_n` of the top simplex.
fn boundary_faces(n: usize) -> (TruncatedSimplicialSet, Vec<usize>) {
    let (bd, inclusion) = boundary_complex(n, n - 1);
    let values = &simplex_values(n, n - 1)[n - 1];
    let faces = (0..=n)
        .map(|i| {
            let seq: Vec<usize> = (0..=n).filter(|&v| v != i).collect();
            let idx = values.iter().position(|s| *s == seq).expect("face of Δ[n]");
            inclusion.level_map[n - 1].iter().position(|&c| c == idx).expect("face lies in the boundary")
        })
        .collect();
    (bd, faces)
}

/// PB space of a levelwise map given on `Z_{<n}`, with `X` known up to level `n`.
pub(crate) fn pb_elements(z: &TruncatedSimplicialSet, x: &TruncatedSimplicialSet, f: &LevelMap, n: usize) -> Vec<PBElement> {
    if n == 0 {
        return (0..x.len(0)).map(|cell| PBElement { boundary: Vec::new(), cell }).collect();
    }
    let (bd, faces) = boundary_faces(n);
    let mut by_boundary: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for c in 0..x.len(n) {
        by_boundary.entry((0..=n).map(|i| x.face(n, i, c)).collect()).or_default().push(c);
    }
    let mut out = Vec::new();
    for phi in enumerate_hom(&bd, z) {
        let boundary: Vec<usize> = faces.iter().map(|&c| phi[n - 1][c]).collect();
        let image: Vec<usize> = boundary.iter().map(|&c| f[n - 1][c]).collect();
        for &cell in by_boundary.get(&image).into_iter().flatten() {
            out.push(PBElement { boundary: boundary.clone(), cell });
        }
    }
    out.sort();
    out
}

pub fn pb_space(f: &SimplicialMap, n: usize) -> Result<PBSpace, String> {
    if n > f.target.top() || (n > 0 && n - 1 > f.source.top()) {
        return Err(format!("level {n} exceeds the truncation"));
    }
    Ok(PBSpace { n, elements: pb_elements(&f.source, &f.target, &f.level_map, n) })
}

/// `z ↦ (∂z, f(z))` as indices into `pb`.
pub fn pb_map(f: &SimplicialMap, pb: &PBSpace) -> Vec<usize> {
    let n = pb.n;
    let index: HashMap<&PBElement, usize> = pb.elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    (0..f.source.len(n))
        .map(|c| {
            let boundary = if n == 0 { Vec::new() } else { (0..=n).map(|i| f.source.face(n, i, c)).collect() };
            index[&PBElement { boundary, cell: f.level_map[n][c] }]
        })
        .collect()
}

/// Runs levels `0..=m` bottom-up and stops at the first failing level.
pub fn is_equivalence(f: &SimplicialMap, m: usize) -> Report {
    let mut r = Report::new(format!("equivalence of degree {m}"));
    r.absorb("map", f.verify());
    if !r.passed() {
        return r;
    }
    if m > f.source.top() || m > f.target.top() {
        r.fail("levels up to the degree exist", "equivalence.shape", format!("degree {m} exceeds the truncation"));
        return r;
    }
    for n in 0..=m {
        let pb = pb_space(f, n).expect("levels checked");
        let map = pb_map(f, &pb);
        let mut hit: Vec<Option<usize>> = vec![None; pb.len()];
        let mut collision = None;
        for (z, &k) in map.iter().enumerate() {
            if let Some(prev) = hit[k] {
                collision.get_or_insert((prev, z, k));
            }
            hit[k] = Some(z);
        }
        let unhit = hit.iter().position(Option::is_none);
        let (law, anchor) = if n < m {
            (format!("Z_{n} -> PB_{n} is onto"), "equivalence.surjective")
        } else {
            (format!("Z_{n} -> PB_{n} is bijective"), "equivalence.bijective")
        };
        let witness = unhit
            .map(|k| format!("level {n}: {} is not hit", pb.describe(&f.source, &f.target, k)))
            .or_else(|| {
                let (a, b, k) = collision.filter(|_| n == m)?;
                Some(format!(
                    "level {n}: {} and {} both map to {}",
                    f.source.name(n, a),
                    f.source.name(n, b),
                    pb.describe(&f.source, &f.target, k)
                ))
            });
        let failed = witness.is_some();
        r.record(&law, anchor, witness);
        if failed {
            break;
        }
    }
    r
}

/// An equivalence whose level-0 map is a bijection.
pub fn is_one_equivalence(f: &SimplicialMap, m: usize) -> Report {
    let mut r = is_equivalence(f, m);
    let f0 = &f.level_map[0];
    let mut seen = vec![false; f.target.len(0)];
    let bijective = f0.len() == f.target.len(0) && f0.iter().all(|&y| !std::mem::replace(&mut seen[y], true));
    let witness = (!bijective).then(|| format!("f_0 sends {} points onto {} points non-bijectively", f0.len(), f.target.len(0)));
    r.record("f_0 is a bijection", "equivalence.one", witness);
    if bijective && m >= 1 && f.source.top() >= 1 {
        // With f_0 bijective, PB_1 ≅ X_1 and the level-1 condition is surjectivity of f_1.
        let onto = (0..f.target.len(1)).all(|y| f.level_map[1].contains(&y));
        let pb = pb_space(f, 1).expect("level 1 exists");
        let pb_onto = pb_map(f, &pb).into_iter().collect::<std::collections::BTreeSet<_>>().len() == pb.len();
        r.record(
            "f_1 onto iff Z_1 -> PB_1 onto",
            "equivalence.one-level",
            (onto != pb_onto).then(|| format!("f_1 onto is {onto}, PB_1 condition is {pb_onto}")),
        );
    }
    r
}

/// Both legs of `X <- Z -> Y` are (1-)equivalences of degree 2.
pub fn verify_morita_witness(f: &StrictTwoGroupoidMap, g: &StrictTwoGroupoidMap, one_morita: bool) -> Report {
    let mut r = Report::new(if one_morita { "1-Morita witness" } else { "Morita witness" });
    let shared = (f.source != g.source).then(|| "the two legs start at different 2-groupoids".to_string());
    r.record("legs share their source", "morita.shape", shared);
    for (name, leg) in [("left leg", f), ("right leg", g)] {
        r.absorb(&format!("{name} source"), verify_two_groupoid(&leg.source));
        r.absorb(&format!("{name} target"), verify_two_groupoid(&leg.target));
        r.absorb(name, leg.verify());
        let s = leg.as_simplicial();
        r.absorb(name, if one_morita { is_one_equivalence(&s, 2) } else { is_equivalence(&s, 2) });
    }
    r
}
