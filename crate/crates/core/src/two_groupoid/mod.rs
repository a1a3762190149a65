//! Three-layer presentations of finite 2-groupoids.
//!
//! Arrows run from larger to smaller vertex labels and `d_i` omits vertex `i`.
//! A horn triple for `Λ_{3,i}` lists the faces `η_a`, `a != i`, in increasing
//! order of `a`; faces of a tetrahedron glue by `d_a η_b = d_{b-1} η_a` for `a < b`.

mod bigon;
mod fixtures;
mod nerve;

pub use bigon::{bigon_groupoid, tilde_bigon_groupoid, tilde_bigon_iso, BigonGroupoid, TildeBigonIso};
pub use fixtures::{crossed_module_fixture, groupoid_two_data, CrossedModule, CrossedModuleError};
pub use nerve::{cech_fixture, groupoid_nerve, nerve2, truncate_to_data, CechFixture, TruncationError};

use crate::report::Report;
use crate::simplicial::{find_isomorphism, TruncatedSimplicialSet};
use std::collections::{BTreeMap, HashMap};

pub type HornTable = BTreeMap<[usize; 3], usize>;

/// Levels 0..=2 with the four 3-multiplication tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoGroupoidData {
    pub layers: TruncatedSimplicialSet,
    /// `m[i]` maps a `Λ_{3,i}` triple to the missing face `η_i`.
    pub m: [HornTable; 4],
}

/// Face indices of a tetrahedron other than `i`.
pub fn horn_faces(i: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    for a in 0..4 {
        if a != i {
            out[k] = a;
            k += 1;
        }
    }
    out
}

/// Inserts `filler` at position `i` of a horn triple.
pub fn tetrahedron(i: usize, triple: [usize; 3], filler: usize) -> [usize; 4] {
    let mut out = [0; 4];
    let mut k = 0;
    for (a, slot) in out.iter_mut().enumerate() {
        if a == i {
            *slot = filler;
        } else {
            *slot = triple[k];
            k += 1;
        }
    }
    out
}

/// Drops position `i` of a tetrahedron.
pub fn horn_of(i: usize, t: [usize; 4]) -> [usize; 3] {
    horn_faces(i).map(|a| t[a])
}

impl TwoGroupoidData {
    pub fn x(&self, n: usize) -> &[String] {
        self.layers.cells(n)
    }

    pub fn d1(&self, i: usize, x: usize) -> usize {
        self.layers.face(1, i, x)
    }

    pub fn d2(&self, i: usize, x: usize) -> usize {
        self.layers.face(2, i, x)
    }

    pub fn s0(&self, v: usize) -> usize {
        self.layers.degen(0, 0, v)
    }

    pub fn s1(&self, i: usize, x: usize) -> usize {
        self.layers.degen(1, i, x)
    }

    /// Looks up `m_i` on a triple, `None` outside its table.
    pub fn mult(&self, i: usize, triple: [usize; 3]) -> Option<usize> {
        self.m[i].get(&triple).copied()
    }

    /// `m_i` on a triple known to be a horn.
    pub fn mi(&self, i: usize, triple: [usize; 3]) -> usize {
        self.mult(i, triple).unwrap_or_else(|| {
            let names: Vec<&str> = triple.iter().map(|&x| self.x(2)[x].as_str()).collect();
            panic!("m{i} undefined on ({})", names.join(","))
        })
    }

    /// Doubly degenerate 2-cell at a vertex.
    pub fn s00(&self, v: usize) -> usize {
        self.s1(0, self.s0(v))
    }

    /// Whether the four 2-cells glue into a tetrahedron boundary.
    pub fn glues(&self, t: [usize; 4]) -> bool {
        (0..4).all(|b| (0..b).all(|a| self.d2(a, t[b]) == self.d2(b - 1, t[a])))
    }

    /// Whether a tetrahedron boundary lies in the nerve, i.e. is filled by every `m_i`.
    pub fn fills(&self, t: [usize; 4]) -> bool {
        self.glues(t) && (0..4).all(|i| self.mult(i, horn_of(i, t)) == Some(t[i]))
    }

    /// The same data with cell IDs prefixed so that the canonical order of
    /// every level is reversed.
    pub fn reversed(&self) -> Self {
        let l = &self.layers;
        let rename = |n: usize, x: usize| {
            let width = l.len(n).to_string().len();
            format!("r{:0width$}:{}", l.len(n) - 1 - x, l.name(n, x))
        };
        let cells = (0..3).map(|n| (0..l.len(n)).map(|x| rename(n, x)).collect()).collect();
        let face = (0..3)
            .map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| l.face_table(n, i).to_vec()).collect() })
            .collect();
        let degen = (0..3)
            .map(|n| if n == 2 { Vec::new() } else { (0..=n).map(|i| l.degen_table(n, i).to_vec()).collect() })
            .collect();
        let layers = TruncatedSimplicialSet::new(cells, face, degen).expect("renaming keeps the tables valid");
        let new_index = |x: usize| layers.index_of(2, &rename(2, x)).expect("renamed cell");
        let m = std::array::from_fn(|i| {
            self.m[i].iter().map(|(k, &v)| (k.map(new_index), new_index(v))).collect()
        });
        TwoGroupoidData { layers, m }
    }
}

/// Tuples of level-`(m-1)` cells on the faces of `Λ[m,j]`, faces in increasing index.
pub fn horn_space(data: &TwoGroupoidData, m: usize, j: usize) -> Vec<Vec<usize>> {
    assert!((2..=3).contains(&m) && j <= m, "horn spaces exist for m = 2, 3");
    let level = m - 1;
    let faces: Vec<usize> = (0..=m).filter(|&a| a != j).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(data: &TwoGroupoidData, level: usize, faces: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = cur.len();
        if k == faces.len() {
            out.push(cur.clone());
            return;
        }
        let b = faces[k];
        for y in 0..data.layers.len(level) {
            let ok = faces[..k].iter().zip(cur.iter()).all(|(&a, &ya)| {
                data.layers.face(level, a, y) == data.layers.face(level, b - 1, ya)
            });
            if ok {
                cur.push(y);
                rec(data, level, faces, cur, out);
                cur.pop();
            }
        }
    }
    rec(data, level, &faces, &mut cur, &mut out);
    out
}

/// `Λ_{3,i}` as fixed-size triples.
pub fn horn_triples(data: &TwoGroupoidData, i: usize) -> Vec<[usize; 3]> {
    horn_space(data, 3, i).into_iter().map(|v| [v[0], v[1], v[2]]).collect()
}

/// The `j`-th face map `X_2 -> Λ_{2,j}`.
fn horn_of_triangle(data: &TwoGroupoidData, j: usize, x: usize) -> Vec<usize> {
    (0..3).filter(|&a| a != j).map(|a| data.d2(a, x)).collect()
}

/// Builds `m_i` tables from a predicate on glued tetrahedra by unique completion.
pub fn tables_from_predicate(
    layers: &TruncatedSimplicialSet,
    holds: impl Fn([usize; 4]) -> bool,
) -> Result<[HornTable; 4], String> {
    let probe = TwoGroupoidData { layers: layers.clone(), m: Default::default() };
    let mut m: [HornTable; 4] = Default::default();
    for (i, table) in m.iter_mut().enumerate() {
        for triple in horn_triples(&probe, i) {
            let fillers: Vec<usize> = (0..layers.len(2))
                .filter(|&x| {
                    let t = tetrahedron(i, triple, x);
                    probe.glues(t) && holds(t)
                })
                .collect();
            match fillers.as_slice() {
                [x] => {
                    table.insert(triple, *x);
                }
                _ => {
                    let names: Vec<&str> = triple.iter().map(|&x| layers.name(2, x)).collect();
                    return Err(format!("Λ(3,{i}) horn ({}) has {} fillers", names.join(","), fillers.len()));
                }
            }
        }
    }
    Ok(m)
}

fn describe(data: &TwoGroupoidData, cells: &[usize]) -> String {
    let names: Vec<&str> = cells.iter().map(|&x| data.x(2)[x].as_str()).collect();
    format!("({})", names.join(","))
}

/// Checks the simplicial identities, Kan conditions in dimensions 1 and 2,
/// table totality, m-compatibility, degenerate tetrahedra and the pentagon.
pub fn verify_two_groupoid(data: &TwoGroupoidData) -> Report {
    let mut r = Report::new("2-groupoid data");
    if data.layers.top() != 2 {
        r.fail("three layers", "two-groupoid.layers", format!("expected levels 0..=2, found 0..={}", data.layers.top()));
        return r;
    }
    let simplicial = data.layers.verify();
    let simplicial_ok = simplicial.passed();
    r.absorb("", simplicial);
    if !simplicial_ok {
        return r;
    }

    for i in 0..2 {
        let missing = (0..data.x(0).len()).find(|&v| !(0..data.x(1).len()).any(|x| data.d1(i, x) == v));
        r.record(
            &format!("d{i} surjective on X1"),
            "kan.one",
            missing.map(|v| format!("no 1-cell has d{i} = {}", data.x(0)[v])),
        );
    }
    for j in 0..3 {
        let hit: std::collections::HashSet<Vec<usize>> =
            (0..data.x(2).len()).map(|x| horn_of_triangle(data, j, x)).collect();
        let missing = horn_space(data, 2, j).into_iter().find(|h| !hit.contains(h));
        r.record(
            &format!("X2 onto Λ(2,{j})"),
            "kan.two",
            missing.map(|h| {
                let names: Vec<&str> = h.iter().map(|&x| data.x(1)[x].as_str()).collect();
                format!("horn ({}) has no filler", names.join(","))
            }),
        );
    }

    let horns: Vec<Vec<[usize; 3]>> = (0..4).map(|i| horn_triples(data, i)).collect();
    let mut totality_ok = true;
    for i in 0..4 {
        let mut witness = None;
        if let Some(h) = horns[i].iter().find(|h| !data.m[i].contains_key(*h)) {
            witness = Some(format!("m{i} undefined on horn {}", describe(data, h)));
        } else if data.m[i].len() != horns[i].len() {
            let extra = data.m[i].keys().find(|k| !horns[i].contains(k)).unwrap();
            witness = Some(format!("m{i} defined off the horn space at {}", describe(data, extra)));
        } else if let Some((k, v)) = data.m[i].iter().find(|(k, &v)| v >= data.x(2).len() || !data.glues(tetrahedron(i, **k, v))) {
            witness = Some(format!("m{i}{} = {} does not close the tetrahedron", describe(data, k), data.x(2).get(*v).map_or("?", |s| s.as_str())));
        }
        totality_ok &= witness.is_none();
        r.record(&format!("m{i} total on Λ(3,{i})"), "two-groupoid.m-total", witness);
    }
    if !totality_ok {
        return r;
    }

    let mut compat = None;
    'compat: for i in 0..4 {
        for &h in &horns[i] {
            let t = tetrahedron(i, h, data.mi(i, h));
            if let Some(j) = (0..4).find(|&j| data.mult(j, horn_of(j, t)) != Some(t[j])) {
                compat = Some(format!("m{i} fills {} but m{j} disagrees on face {j}", describe(data, &t)));
                break 'compat;
            }
        }
    }
    r.record("m-compatibility", "two-groupoid.m-compatible", compat);

    for j in 0..3 {
        let bad = (0..data.x(2).len()).find(|&x| !data.fills(degenerate_tetrahedron(data, j, x)));
        r.record(
            &format!("degenerate tetrahedra s{j}"),
            "two-groupoid.degenerate-fill",
            bad.map(|x| format!("s{j}({}) = {} is not filled", data.x(2)[x], describe(data, &degenerate_tetrahedron(data, j, x)))),
        );
    }

    r.record("pentagon", "two-groupoid.pentagon", pentagon_violation(data));
    r
}

/// Boundary of `s_j η` from the simplicial identities.
pub fn degenerate_tetrahedron(data: &TwoGroupoidData, j: usize, x: usize) -> [usize; 4] {
    std::array::from_fn(|i| {
        if i == j || i == j + 1 {
            x
        } else if i < j {
            data.s1(j - 1, data.d2(i, x))
        } else {
            data.s1(j, data.d2(i - 1, x))
        }
    })
}

/// Walks the cone on vertex 0 of `∂Δ[4]` (faces `(0ij)`) triangle by triangle and
/// computes `(123)` through `m0` on `(0123)` and through `m3` on `(1234)`.
fn pentagon_violation(data: &TwoGroupoidData) -> Option<String> {
    let n1 = data.x(1).len();
    let mut by_first = vec![Vec::new(); n1];
    let mut by_edges: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for x in 0..data.x(2).len() {
        by_first[data.d2(2, x)].push(x);
        by_edges.entry((data.d2(2, x), data.d2(1, x))).or_default().push(x);
    }
    let empty = Vec::new();
    let fibre = |first: usize, long: usize| by_edges.get(&(first, long)).unwrap_or(&empty);
    for f012 in 0..data.x(2).len() {
        let (e01, e02) = (data.d2(2, f012), data.d2(1, f012));
        for &f013 in &by_first[e01] {
            let e03 = data.d2(1, f013);
            for &f023 in fibre(e02, e03) {
                let f123 = data.mi(0, [f023, f013, f012]);
                for &f014 in &by_first[e01] {
                    let e04 = data.d2(1, f014);
                    for &f024 in fibre(e02, e04) {
                        let f124 = data.mi(0, [f024, f014, f012]);
                        for &f034 in fibre(e03, e04) {
                            let f134 = data.mi(0, [f034, f014, f013]);
                            let f234 = data.mi(0, [f034, f024, f023]);
                            let via_m3 = data.mult(3, [f234, f134, f124]);
                            if via_m3 == Some(f123) {
                                continue;
                            }
                            let labelled: Vec<String> = [
                                ("012", f012),
                                ("013", f013),
                                ("014", f014),
                                ("023", f023),
                                ("024", f024),
                                ("034", f034),
                                ("124", f124),
                                ("134", f134),
                                ("234", f234),
                            ]
                            .iter()
                            .map(|(n, x)| format!("({n})={}", data.x(2)[*x]))
                            .collect();
                            return Some(format!(
                                "{}: (123) is {} by m0 but {} by m3",
                                labelled.join(", "),
                                data.x(2)[f123],
                                via_m3.map_or("undefined", |x| data.x(2)[x].as_str())
                            ));
                        }
                    }
                }
            }
        }
    }
    None
}

/// A levelwise bijection of the layers carrying every `m_i` table onto the other's.
pub fn two_groupoid_isomorphism(a: &TwoGroupoidData, b: &TwoGroupoidData) -> Option<Vec<Vec<usize>>> {
    find_isomorphism(&a.layers, &b.layers, &mut |f| {
        (0..4).all(|i| {
            a.m[i].len() == b.m[i].len()
                && a.m[i].iter().all(|(k, &v)| b.mult(i, k.map(|x| f[2][x])) == Some(f[2][v]))
        })
    })
}

/// The composition section `Λ_{2,1} -> X_1` through the least filling 2-cell.
pub fn composition_section(data: &TwoGroupoidData) -> BTreeMap<[usize; 2], usize> {
    let mut out = BTreeMap::new();
    for x in 0..data.x(2).len() {
        out.entry([data.d2(0, x), data.d2(2, x)]).or_insert(data.d2(1, x));
    }
    out
}
