//! Triangulated polygons labelled by elements of a multiplication bibundle.
//!
//! A triangle `(p, q, r)` with `p < q < r` carries `η` with `J_l(η) = (x_pq, x_qr)`
//! and `J_r(η) = x_pr`. Labellings agree on shared edges and are identified
//! along every interior diagonal: `G_1` acts on the right of the triangle whose
//! long edge it is, and through `γ⁻¹` in the matching slot of the other one.

use super::product::FiberPower;
use crate::groupoid::Bibundle;
use crate::unionfind::UnionFind;
use std::collections::{BTreeMap, HashMap};

pub type Triangle = [usize; 3];

/// `(g, 1)·η` for `slot == 0`, `(1, g)·η` for `slot == 1`.
pub fn slot_action(e: &Bibundle, p2: &FiberPower, slot: usize, g: usize, x: usize) -> Option<usize> {
    let ends = &p2.object_tuples[e.j_l[x]];
    let factor = &*p2.factor;
    if factor.source[g] != ends[slot] {
        return None;
    }
    let mut tuple = [factor.identity[ends[0]], factor.identity[ends[1]]];
    tuple[slot] = g;
    e.left_action(p2.arrow(&tuple)?, x)
}

/// The edge values `(x_pq, x_qr, x_pr)` of a label.
pub fn edges(e: &Bibundle, p2: &FiberPower, x: usize) -> [usize; 3] {
    let ends = &p2.object_tuples[e.j_l[x]];
    [ends[0], ends[1], e.j_r[x]]
}

fn edge_slots(t: Triangle) -> [(usize, usize); 3] {
    [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])]
}

/// All consistent labellings of a fixed triangulation and their classes.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub triangles: Vec<Triangle>,
    /// Labels listed in the order of `triangles`.
    pub elements: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl Triangulation {
    pub fn new(triangles: Vec<Triangle>, e: &Bibundle, p2: &FiberPower) -> Self {
        let mut elements = Vec::new();
        label(&triangles, e, p2, &mut BTreeMap::new(), &mut Vec::new(), &mut elements);
        let index: HashMap<Vec<usize>, usize> = elements.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let mut uf = UnionFind::new(elements.len());
        let mut roles: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (k, &t) in triangles.iter().enumerate() {
            for (role, edge) in edge_slots(t).into_iter().enumerate() {
                roles.entry(edge).or_default().push((k, role));
            }
        }
        let factor = &*p2.factor;
        for (i, labels) in elements.iter().enumerate() {
            for holders in roles.values().filter(|h| h.len() > 1) {
                let (k0, role0) = holders[0];
                let value = edges(e, p2, labels[k0])[role0];
                for g in (0..factor.n_arrows()).filter(|&g| factor.target[g] == value) {
                    let mut moved = labels.clone();
                    let ok = holders.iter().all(|&(k, role)| {
                        let y = if role == 2 { e.right_action(labels[k], g) } else { slot_action(e, p2, role, factor.inverse[g], labels[k]) };
                        y.map(|y| moved[k] = y).is_some()
                    });
                    if let Some(&j) = ok.then(|| index.get(&moved)).flatten() {
                        uf.union(i, j);
                    }
                }
            }
        }
        let (classes, class_of) = uf.classes();
        Triangulation { triangles, elements, class_of, classes, index }
    }

    pub fn element(&self, labels: &[usize]) -> Option<usize> {
        self.index.get(labels).copied()
    }

    /// The element of a labelling given triangle by triangle.
    pub fn element_of(&self, labels: &BTreeMap<Triangle, usize>) -> Option<usize> {
        let list: Option<Vec<usize>> = self.triangles.iter().map(|t| labels.get(t).copied()).collect();
        self.element(&list?)
    }

    pub fn labels(&self, element: usize) -> BTreeMap<Triangle, usize> {
        self.triangles.iter().copied().zip(self.elements[element].iter().copied()).collect()
    }
}

fn label(
    triangles: &[Triangle],
    e: &Bibundle,
    p2: &FiberPower,
    fixed: &mut BTreeMap<(usize, usize), usize>,
    prefix: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let Some(&t) = triangles.get(prefix.len()) else {
        out.push(prefix.clone());
        return;
    };
    let slots = edge_slots(t);
    for x in 0..e.len() {
        let values = edges(e, p2, x);
        if slots.iter().zip(values).any(|(s, v)| fixed.get(s).is_some_and(|&w| w != v)) {
            continue;
        }
        let added: Vec<(usize, usize)> = slots.iter().copied().filter(|s| !fixed.contains_key(s)).collect();
        for (s, v) in slots.iter().zip(values) {
            fixed.insert(*s, v);
        }
        prefix.push(x);
        label(triangles, e, p2, fixed, prefix, out);
        prefix.pop();
        for s in added {
            fixed.remove(&s);
        }
    }
}

/// Replaces `(abc), (acd)` by `(bcd), (abd)` through the associator.
pub fn flip(labels: &BTreeMap<Triangle, usize>, quad: [usize; 4], associator: &BTreeMap<[usize; 2], [usize; 2]>) -> Option<BTreeMap<Triangle, usize>> {
    let [a, b, c, d] = quad;
    let mut out = labels.clone();
    let first = out.remove(&[a, b, c])?;
    let second = out.remove(&[a, c, d])?;
    let [x, y] = *associator.get(&[first, second])?;
    out.insert([b, c, d], x);
    out.insert([a, b, d], y);
    Some(out)
}

/// The two flip sequences across the pentagon agree on classes.
pub fn cube_violation(e: &Bibundle, p2: &FiberPower, associator: &BTreeMap<[usize; 2], [usize; 2]>) -> Option<String> {
    let start = Triangulation::new(vec![[0, 1, 2], [0, 2, 3], [0, 3, 4]], e, p2);
    let end = Triangulation::new(vec![[2, 3, 4], [1, 2, 4], [0, 1, 4]], e, p2);
    let describe = |l: &BTreeMap<Triangle, usize>| {
        l.iter().map(|(t, &x)| format!("{}{}{}:{}", t[0], t[1], t[2], e.carrier[x])).collect::<Vec<_>>().join(" ")
    };
    for i in 0..start.elements.len() {
        let l = start.labels(i);
        let long = [[0, 1, 2, 3], [0, 1, 3, 4], [1, 2, 3, 4]].iter().try_fold(l.clone(), |acc, &q| flip(&acc, q, associator));
        let short = [[0, 2, 3, 4], [0, 1, 2, 4]].iter().try_fold(l.clone(), |acc, &q| flip(&acc, q, associator));
        let class = |r: &Option<BTreeMap<Triangle, usize>>| r.as_ref().and_then(|r| end.element_of(r)).map(|j| end.class_of[j]);
        match (class(&long), class(&short)) {
            (Some(p), Some(q)) if p == q => {}
            _ => return Some(format!("the two flip paths from {} disagree", describe(&l))),
        }
    }
    None
}
