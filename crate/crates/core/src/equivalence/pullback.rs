//! Pull-back 2-groupoids along refinements, and fiber products of equivalences.

use super::{is_equivalence, pb_elements, PBElement, StrictTwoGroupoidMap};
use crate::simplicial::TruncatedSimplicialSet;
use crate::two_groupoid::{horn_faces, horn_triples, verify_two_groupoid, HornTable, TwoGroupoidData};
use std::collections::HashMap;

/// Levels 0 and 1 of `Z` with their map to `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackInput {
    pub z0: Vec<String>,
    pub z1: Vec<String>,
    pub f0: Vec<usize>,
    pub f1: Vec<usize>,
    /// `d_0` (source end) and `d_1` (target end) of each `Z_1` cell.
    pub d0: Vec<usize>,
    pub d1: Vec<usize>,
    /// `s_0: Z_0 -> Z_1`; when absent, the least cell over `s_0 f_0(z)` with both ends `z`.
    pub s0: Option<Vec<usize>>,
}

/// Builds a three-level set and reports where each raw index landed after sorting.
fn assemble(
    cells: Vec<Vec<String>>,
    face: Vec<Vec<Vec<usize>>>,
    degen: Vec<Vec<Vec<usize>>>,
) -> Result<(TruncatedSimplicialSet, Vec<Vec<usize>>), String> {
    let x = TruncatedSimplicialSet::new(cells.clone(), face, degen).map_err(|e| e.to_string())?;
    let moved = cells
        .iter()
        .enumerate()
        .map(|(n, level)| level.iter().map(|c| x.index_of(n, c).expect("cell survives sorting")).collect())
        .collect();
    Ok((x, moved))
}

/// `(d_0, d_1, d_2)` of the missing face `η_i` from the other three faces.
fn missing_boundary(layers: &TruncatedSimplicialSet, i: usize, triple: [usize; 3]) -> [usize; 3] {
    let mut edge = HashMap::new();
    for (&k, &cell) in horn_faces(i).iter().zip(&triple) {
        let v: Vec<usize> = (0..4).filter(|&w| w != k).collect();
        edge.insert((v[1], v[2]), layers.face(2, 0, cell));
        edge.insert((v[0], v[2]), layers.face(2, 1, cell));
        edge.insert((v[0], v[1]), layers.face(2, 2, cell));
    }
    let w: Vec<usize> = (0..4).filter(|&v| v != i).collect();
    [edge[&(w[1], w[2])], edge[&(w[0], w[2])], edge[&(w[0], w[1])]]
}

fn check_input(x: &TwoGroupoidData, p: &PullbackInput) -> Result<Vec<usize>, String> {
    let (n0, n1) = (p.z0.len(), p.z1.len());
    if p.f0.len() != n0 || p.f0.iter().any(|&y| y >= x.x(0).len()) {
        return Err("f_0 is not a map Z_0 -> X_0".into());
    }
    if [&p.f1, &p.d0, &p.d1].iter().any(|t| t.len() != n1) || p.f1.iter().any(|&y| y >= x.x(1).len()) {
        return Err("f_1, d_0, d_1 must be total on Z_1".into());
    }
    if p.d0.iter().chain(&p.d1).any(|&z| z >= n0) {
        return Err("a face of Z_1 is not in Z_0".into());
    }
    if let Some(v) = (0..x.x(0).len()).find(|v| !p.f0.contains(v)) {
        return Err(format!("f_0 misses {}", x.x(0)[v]));
    }
    if let Some(h) = (0..n1).find(|&h| p.f0[p.d0[h]] != x.d1(0, p.f1[h]) || p.f0[p.d1[h]] != x.d1(1, p.f1[h])) {
        return Err(format!("faces of {} do not lie over those of its image", p.z1[h]));
    }
    for a in 0..n0 {
        for b in 0..n0 {
            for e in 0..x.x(1).len() {
                let over = p.f0[a] == x.d1(0, e) && p.f0[b] == x.d1(1, e);
                if over && !(0..n1).any(|h| p.d0[h] == a && p.d1[h] == b && p.f1[h] == e) {
                    return Err(format!("Z_1 -> Z_0×Z_0 ×_(X_0×X_0) X_1 misses ({}, {}, {})", p.z0[a], p.z0[b], x.x(1)[e]));
                }
            }
        }
    }
    match &p.s0 {
        Some(s0) => {
            let bad = s0.len() != n0
                || (0..n0).any(|z| s0[z] >= n1 || p.d0[s0[z]] != z || p.d1[s0[z]] != z || p.f1[s0[z]] != x.s0(p.f0[z]));
            if bad {
                Err("s_0 is not a degeneracy over X".into())
            } else {
                Ok(s0.clone())
            }
        }
        None => Ok((0..n0)
            .map(|z| (0..n1).find(|&h| p.d0[h] == z && p.d1[h] == z && p.f1[h] == x.s0(p.f0[z])).expect("checked above"))
            .collect()),
    }
}

/// `Z` with `Z_2 = PB_2` of the given levels, and the projection `Z -> X`.
pub fn pullback_two_groupoid(x: &TwoGroupoidData, input: &PullbackInput) -> Result<(TwoGroupoidData, StrictTwoGroupoidMap), String> {
    if let Some(c) = verify_two_groupoid(x).first_failure() {
        return Err(format!("base fails {}", c.law));
    }
    let s0 = check_input(x, input)?;
    let (low, moved) = assemble(
        vec![input.z0.clone(), input.z1.clone()],
        vec![Vec::new(), vec![input.d0.clone(), input.d1.clone()]],
        vec![vec![s0], Vec::new()],
    )?;
    let relabel = |raw: &[usize], n: usize| {
        let mut out = vec![0; raw.len()];
        for (old, &v) in raw.iter().enumerate() {
            out[moved[n][old]] = v;
        }
        out
    };
    let f0 = relabel(&input.f0, 0);
    let f1 = relabel(&input.f1, 1);
    let s0: Vec<usize> = (0..low.len(0)).map(|z| low.degen(0, 0, z)).collect();
    let pb = pb_elements(&low, &x.layers, &vec![f0.clone(), f1.clone()], 2);
    let index: HashMap<&PBElement, usize> = pb.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let at = |boundary: Vec<usize>, cell: usize| index[&PBElement { boundary, cell }];
    let n1 = low.len(1);
    let s10: Vec<usize> = (0..n1).map(|h| at(vec![h, h, s0[low.face(1, 1, h)]], x.s1(0, f1[h]))).collect();
    let s11: Vec<usize> = (0..n1).map(|h| at(vec![s0[low.face(1, 0, h)], h, h], x.s1(1, f1[h]))).collect();
    let names: Vec<String> = pb
        .iter()
        .map(|e| {
            let b: Vec<&str> = e.boundary.iter().map(|&h| low.name(1, h)).collect();
            format!("({}@{})", b.join(";"), x.x(2)[e.cell])
        })
        .collect();
    let (layers, moved2) = assemble(
        vec![low.cells(0).to_vec(), low.cells(1).to_vec(), names],
        vec![
            Vec::new(),
            vec![low.face_table(1, 0).to_vec(), low.face_table(1, 1).to_vec()],
            (0..3).map(|i| pb.iter().map(|e| e.boundary[i]).collect()).collect(),
        ],
        vec![vec![s0], vec![s10, s11], Vec::new()],
    )?;
    let mut f2 = vec![0; pb.len()];
    for (old, e) in pb.iter().enumerate() {
        f2[moved2[2][old]] = e.cell;
    }
    let probe = TwoGroupoidData { layers: layers.clone(), m: Default::default() };
    let mut m: [HornTable; 4] = Default::default();
    for (i, table) in m.iter_mut().enumerate() {
        for triple in horn_triples(&probe, i) {
            let boundary = missing_boundary(&layers, i, triple).to_vec();
            let eta = x.mi(i, triple.map(|c| f2[c]));
            let Some(&raw) = index.get(&PBElement { boundary, cell: eta }) else {
                return Err(format!("m{i} of X leaves PB_2"));
            };
            table.insert(triple, moved2[2][raw]);
        }
    }
    let z = TwoGroupoidData { layers, m };
    let map = StrictTwoGroupoidMap { source: z.clone(), target: x.clone(), f0, f1, f2 };
    Ok((z, map))
}

/// `Z ×_X Z'` with its two projections.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub product: TwoGroupoidData,
    pub left: StrictTwoGroupoidMap,
    pub right: StrictTwoGroupoidMap,
}

/// Levelwise fiber product of two equivalences with a common target.
pub fn fiber_product_two_groupoid(f: &StrictTwoGroupoidMap, g: &StrictTwoGroupoidMap) -> Result<FiberProduct, String> {
    if f.target != g.target {
        return Err("maps have different targets".into());
    }
    for (name, leg) in [("first", f), ("second", g)] {
        let mut r = leg.verify();
        r.absorb("", is_equivalence(&leg.as_simplicial(), 2));
        if let Some(c) = r.first_failure() {
            return Err(format!("{name} map fails {}: {}", c.law, c.witness.as_deref().unwrap_or("")));
        }
    }
    let (z, w) = (&f.source.layers, &g.source.layers);
    let pairs: Vec<Vec<(usize, usize)>> = (0..3)
        .map(|n| {
            let (fa, ga) = (f.levels()[n], g.levels()[n]);
            (0..z.len(n)).flat_map(|a| (0..w.len(n)).filter(move |&b| fa[a] == ga[b]).map(move |b| (a, b))).collect()
        })
        .collect();
    let index: Vec<HashMap<(usize, usize), usize>> =
        pairs.iter().map(|level| level.iter().enumerate().map(|(i, &p)| (p, i)).collect()).collect();
    let cells = (0..3)
        .map(|n| pairs[n].iter().map(|&(a, b)| format!("({},{})", z.name(n, a), w.name(n, b))).collect())
        .collect();
    let face = (0..3)
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..=n).map(|i| pairs[n].iter().map(|&(a, b)| index[n - 1][&(z.face(n, i, a), w.face(n, i, b))]).collect()).collect()
        })
        .collect();
    let degen = (0..3)
        .map(|n| {
            if n == 2 {
                return Vec::new();
            }
            (0..=n).map(|i| pairs[n].iter().map(|&(a, b)| index[n + 1][&(z.degen(n, i, a), w.degen(n, i, b))]).collect()).collect()
        })
        .collect();
    let (layers, moved) = assemble(cells, face, degen)?;
    let mut m: [HornTable; 4] = Default::default();
    let from_layer: Vec<usize> = crate::groupoid::invert(&moved[2]);
    let probe = TwoGroupoidData { layers: layers.clone(), m: Default::default() };
    for (i, table) in m.iter_mut().enumerate() {
        for triple in horn_triples(&probe, i) {
            let raw = triple.map(|c| pairs[2][from_layer[c]]);
            let a = f.source.mult(i, raw.map(|p| p.0));
            let b = g.source.mult(i, raw.map(|p| p.1));
            let Some(&k) = a.zip(b).and_then(|p| index[2].get(&p)) else {
                return Err(format!("m{i} of the factors disagree over X"));
            };
            table.insert(triple, moved[2][k]);
        }
    }
    let product = TwoGroupoidData { layers, m };
    let projection = |side: usize, target: &TwoGroupoidData| {
        let level = |n: usize| {
            let mut out = vec![0; pairs[n].len()];
            for (old, &(a, b)) in pairs[n].iter().enumerate() {
                out[moved[n][old]] = if side == 0 { a } else { b };
            }
            out
        };
        StrictTwoGroupoidMap { source: product.clone(), target: target.clone(), f0: level(0), f1: level(1), f2: level(2) }
    };
    let left = projection(0, &f.source);
    let right = projection(1, &g.source);
    Ok(FiberProduct { product, left, right })
}
