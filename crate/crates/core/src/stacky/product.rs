//! Fiber powers `G ×_M .. ×_M G` and box products of bibundles over `M`.

use crate::groupoid::{Bibundle, FiniteGroupoid};
use std::collections::HashMap;
use std::sync::Arc;

/// Tuples `(x_1, .., x_k)` with `s(x_i) = t(x_{i+1})`, componentwise structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPower {
    pub groupoid: Arc<FiniteGroupoid>,
    pub factor: Arc<FiniteGroupoid>,
    /// The maps `G_0 -> M` used for matching.
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub object_tuples: Vec<Vec<usize>>,
    pub arrow_tuples: Vec<Vec<usize>>,
    object_index: HashMap<Vec<usize>, usize>,
    arrow_index: HashMap<Vec<usize>, usize>,
}

impl FiberPower {
    /// Requires `s` and `t` constant on the orbits of `g`.
    pub fn new(g: &Arc<FiniteGroupoid>, s: &[usize], t: &[usize], k: usize) -> Self {
        let chains = |count: usize, obj: &dyn Fn(usize) -> usize| -> Vec<Vec<usize>> {
            let mut out: Vec<Vec<usize>> = (0..count).map(|x| vec![x]).collect();
            for _ in 1..k {
                out = out
                    .into_iter()
                    .flat_map(|c| {
                        let last = obj(*c.last().unwrap());
                        (0..count)
                            .filter(move |&y| s[last] == t[obj(y)])
                            .map(move |y| {
                                let mut c = c.clone();
                                c.push(y);
                                c
                            })
                    })
                    .collect();
            }
            out
        };
        let object_tuples = chains(g.n_objects(), &|x| x);
        let arrow_tuples = chains(g.n_arrows(), &|a| g.target[a]);
        let object_index: HashMap<Vec<usize>, usize> =
            object_tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let arrow_index: HashMap<Vec<usize>, usize> =
            arrow_tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let name = |names: &[String], tuple: &[usize]| {
            format!("({})", tuple.iter().map(|&x| names[x].as_str()).collect::<Vec<_>>().join(","))
        };
        let over = |tuple: &Vec<usize>, f: &dyn Fn(usize) -> usize| object_index[&tuple.iter().map(|&a| f(a)).collect::<Vec<_>>()];
        let groupoid = FiniteGroupoid::from_parts(
            object_tuples.iter().map(|t| name(&g.objects, t)).collect(),
            arrow_tuples.iter().map(|t| name(&g.arrows, t)).collect(),
            arrow_tuples.iter().map(|t| over(t, &|a| g.source[a])).collect(),
            arrow_tuples.iter().map(|t| over(t, &|a| g.target[a])).collect(),
            object_tuples.iter().map(|t| arrow_index[&t.iter().map(|&x| g.identity[x]).collect::<Vec<_>>()]).collect(),
            arrow_tuples.iter().map(|t| arrow_index[&t.iter().map(|&a| g.inverse[a]).collect::<Vec<_>>()]).collect(),
            |p, q| {
                let c: Vec<usize> = arrow_tuples[p].iter().zip(&arrow_tuples[q]).map(|(&a, &b)| g.c(a, b)).collect();
                arrow_index[&c]
            },
        );
        FiberPower { groupoid: Arc::new(groupoid), factor: g.clone(), s: s.to_vec(), t: t.to_vec(), object_tuples, arrow_tuples, object_index, arrow_index }
    }

    pub fn object(&self, tuple: &[usize]) -> Option<usize> {
        self.object_index.get(tuple).copied()
    }

    pub fn arrow(&self, tuple: &[usize]) -> Option<usize> {
        self.arrow_index.get(tuple).copied()
    }

    /// The arrow `(g_1, .., g_k)`; panics off the fiber power.
    pub fn a(&self, tuple: &[usize]) -> usize {
        self.arrow(tuple).unwrap_or_else(|| panic!("{tuple:?} is not an arrow of the fiber power"))
    }

    pub fn o(&self, tuple: &[usize]) -> usize {
        self.object(tuple).unwrap_or_else(|| panic!("{tuple:?} is not an object of the fiber power"))
    }
}

/// A box product with its carrier as index pairs.
#[derive(Clone, Debug)]
pub struct BoxProduct {
    pub bibundle: Bibundle,
    /// `(η, g)` for `E ⊠ G_1`, `(g, η)` for `G_1 ⊠ E`.
    pub cells: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl BoxProduct {
    pub fn cell(&self, a: usize, b: usize) -> Option<usize> {
        self.index.get(&(a, b)).copied()
    }
}

/// `E ⊠ G_1` from `P_3` to `P_2`: pairs `(η, g)` acted on componentwise.
pub fn box_right(e: &Bibundle, p2: &FiberPower, p3: &FiberPower) -> BoxProduct {
    let g = &*p2.factor;
    let (s, t) = (&p2.s, &p2.t);
    let mut cells = Vec::new();
    for x in 0..e.len() {
        let top = &p2.object_tuples[e.j_l[x]];
        for a in 0..g.n_arrows() {
            if s[top[1]] == t[g.target[a]] {
                cells.push((x, a));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let bibundle = Bibundle::from_fns(
        p3.groupoid.clone(),
        p2.groupoid.clone(),
        cells.iter().map(|&(x, a)| format!("({},{})", e.carrier[x], g.arrows[a])).collect(),
        cells.iter().map(|&(x, a)| {
            let top = &p2.object_tuples[e.j_l[x]];
            p3.o(&[top[0], top[1], g.target[a]])
        }).collect(),
        cells.iter().map(|&(x, a)| p2.o(&[e.j_r[x], g.source[a]])).collect(),
        |h, c| {
            let (x, a) = cells[c];
            let hs = &p3.arrow_tuples[h];
            index[&(e.l(p2.a(&hs[..2]), x), g.c(hs[2], a))]
        },
        |c, h| {
            let (x, a) = cells[c];
            let hs = &p2.arrow_tuples[h];
            index[&(e.r(x, hs[0]), g.c(a, hs[1]))]
        },
    );
    BoxProduct { bibundle, cells, index }
}

/// `G_1 ⊠ E` from `P_3` to `P_2`: pairs `(g, η)` acted on componentwise.
pub fn box_left(e: &Bibundle, p2: &FiberPower, p3: &FiberPower) -> BoxProduct {
    let g = &*p2.factor;
    let (s, t) = (&p2.s, &p2.t);
    let mut cells = Vec::new();
    for a in 0..g.n_arrows() {
        for x in 0..e.len() {
            let top = &p2.object_tuples[e.j_l[x]];
            if s[g.target[a]] == t[top[0]] {
                cells.push((a, x));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let bibundle = Bibundle::from_fns(
        p3.groupoid.clone(),
        p2.groupoid.clone(),
        cells.iter().map(|&(a, x)| format!("({},{})", g.arrows[a], e.carrier[x])).collect(),
        cells.iter().map(|&(a, x)| {
            let top = &p2.object_tuples[e.j_l[x]];
            p3.o(&[g.target[a], top[0], top[1]])
        }).collect(),
        cells.iter().map(|&(a, x)| p2.o(&[g.source[a], e.j_r[x]])).collect(),
        |h, c| {
            let (a, x) = cells[c];
            let hs = &p3.arrow_tuples[h];
            index[&(g.c(hs[0], a), e.l(p2.a(&hs[1..]), x))]
        },
        |c, h| {
            let (a, x) = cells[c];
            let hs = &p2.arrow_tuples[h];
            index[&(g.c(a, hs[0]), e.r(x, hs[1]))]
        },
    );
    BoxProduct { bibundle, cells, index }
}
