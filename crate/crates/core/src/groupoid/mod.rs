//! Finite groups and groupoids.
//!
//! Composition `compose(a, b) = a ∘ b` is defined exactly when
//! `source(a) == target(b)`; arrows run from source to target.

mod bibundle;
mod pullback;

pub use bibundle::{
    bibundle_morphism_find, bibundle_morphism_search, compose_bibundles, compose_with_classes, identity_bibundle, is_biprincipal,
    left_principal_violation, verify_bibundle, Bibundle, BibundleMorphism, Composite,
};
pub use pullback::{adjoin_strict_unit, pullback_groupoid, PullbackGroupoid, StrictUnitExtension};

use crate::report::Report;
use std::collections::HashMap;

/// A finite group with a full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub names: Vec<String>,
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.mul[a][b] == self.identity).expect("group element without inverse")
    }

    pub fn trivial() -> Self {
        FiniteGroup { names: vec!["e".into()], mul: vec![vec![0]], identity: 0 }
    }

    /// ℤ/m with elements named `0..m-1`.
    pub fn cyclic(m: usize) -> Self {
        assert!(m > 0, "cyclic group of order zero");
        FiniteGroup {
            names: (0..m).map(|i| i.to_string()).collect(),
            mul: (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect(),
            identity: 0,
        }
    }

    /// ℤ/2 × ℤ/2 with elements `00, 01, 10, 11`.
    pub fn klein() -> Self {
        FiniteGroup {
            names: ["00", "01", "10", "11"].iter().map(|s| s.to_string()).collect(),
            mul: (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect(),
            identity: 0,
        }
    }

    /// The symmetric group on three letters, elements named by images of `012`.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mul = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        FiniteGroup {
            names: perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect(),
            mul,
            identity: 0,
        }
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    /// Group axioms; `None` when they hold.
    pub fn law_violation(&self) -> Option<String> {
        let n = self.order();
        if self.mul.len() != n || self.mul.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Some("multiplication table is not total".into());
        }
        for a in 0..n {
            if self.mul[self.identity][a] != a || self.mul[a][self.identity] != a {
                return Some(format!("{} is not neutral for {}", self.names[self.identity], self.names[a]));
            }
            if !(0..n).any(|b| self.mul[a][b] == self.identity) {
                return Some(format!("{} has no inverse", self.names[a]));
            }
            for b in 0..n {
                for c in 0..n {
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]] {
                        return Some(format!(
                            "({}{}){} differs from {}({}{})",
                            self.names[a], self.names[b], self.names[c], self.names[a], self.names[b], self.names[c]
                        ));
                    }
                }
            }
        }
        None
    }
}

/// Objects and arrows with structure tables; `compose[a * |arrows| + b]` is `a ∘ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    pub objects: Vec<String>,
    pub arrows: Vec<String>,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub identity: Vec<usize>,
    pub inverse: Vec<usize>,
    pub compose: Vec<Option<usize>>,
}

impl FiniteGroupoid {
    /// Builds the tables from a composition function on composable pairs.
    pub fn from_parts(
        objects: Vec<String>,
        arrows: Vec<String>,
        source: Vec<usize>,
        target: Vec<usize>,
        identity: Vec<usize>,
        inverse: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let n = arrows.len();
        let mut table = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                if source[a] == target[b] {
                    table[a * n + b] = Some(compose(a, b));
                }
            }
        }
        FiniteGroupoid { objects, arrows, source, target, identity, inverse, compose: table }
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    /// `a ∘ b`, or `None` when not composable.
    pub fn comp(&self, a: usize, b: usize) -> Option<usize> {
        self.compose[a * self.arrows.len() + b]
    }

    /// `a ∘ b` for pairs known to be composable.
    pub fn c(&self, a: usize, b: usize) -> usize {
        self.comp(a, b).unwrap_or_else(|| panic!("{} and {} are not composable", self.arrows[a], self.arrows[b]))
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|o| o == name)
    }

    /// One object, the group's elements as arrows.
    pub fn from_group(g: &FiniteGroup) -> Self {
        let n = g.order();
        FiniteGroupoid::from_parts(
            vec!["*".into()],
            g.names.clone(),
            vec![0; n],
            vec![0; n],
            vec![g.identity],
            (0..n).map(|a| g.inv(a)).collect(),
            |a, b| g.mul(a, b),
        )
    }

    /// The pair groupoid on `k` objects: one arrow `(i,j): j -> i` for each pair.
    pub fn pair(k: usize) -> Self {
        let objects: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
        let idx = |i: usize, j: usize| i * k + j;
        let mut arrows = Vec::new();
        let (mut source, mut target, mut inverse) = (Vec::new(), Vec::new(), Vec::new());
        for i in 0..k {
            for j in 0..k {
                arrows.push(format!("(p{i},p{j})"));
                target.push(i);
                source.push(j);
                inverse.push(idx(j, i));
            }
        }
        let identity = (0..k).map(|i| idx(i, i)).collect();
        FiniteGroupoid::from_parts(objects, arrows, source, target.clone(), identity, inverse, |a, b| {
            idx(target[a], b % k)
        })
    }

    /// Only identity arrows, named like the objects.
    pub fn discrete(objects: &[String]) -> Self {
        let n = objects.len();
        let id: Vec<usize> = (0..n).collect();
        FiniteGroupoid::from_parts(objects.to_vec(), objects.to_vec(), id.clone(), id.clone(), id.clone(), id, |a, _| a)
    }

    /// Applies new storage orders to objects and arrows (`perm[old] = new`).
    pub fn permuted(&self, obj_perm: &[usize], arrow_perm: &[usize]) -> Self {
        let inv_arrow = invert(arrow_perm);
        let n = self.n_arrows();
        let mut objects = vec![String::new(); self.n_objects()];
        for (old, o) in self.objects.iter().enumerate() {
            objects[obj_perm[old]] = o.clone();
        }
        let arrows = (0..n).map(|new| self.arrows[inv_arrow[new]].clone()).collect();
        let source = (0..n).map(|new| obj_perm[self.source[inv_arrow[new]]]).collect();
        let target = (0..n).map(|new| obj_perm[self.target[inv_arrow[new]]]).collect();
        let inverse = (0..n).map(|new| arrow_perm[self.inverse[inv_arrow[new]]]).collect();
        let mut identity = vec![0; self.n_objects()];
        for (old, &a) in self.identity.iter().enumerate() {
            identity[obj_perm[old]] = arrow_perm[a];
        }
        let mut compose = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                compose[arrow_perm[a] * n + arrow_perm[b]] = self.comp(a, b).map(|c| arrow_perm[c]);
            }
        }
        FiniteGroupoid { objects, arrows, source, target, identity, inverse, compose }
    }

    /// Reverses the storage order of objects and arrows.
    pub fn reversed(&self) -> Self {
        self.permuted(&reversal(self.n_objects()), &reversal(self.n_arrows()))
    }

    /// Storage order sorted by name.
    pub fn canonical(&self) -> Self {
        self.permuted(&sorting(&self.objects), &sorting(&self.arrows))
    }

    /// Connected components as lists of objects, ordered by least object.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = crate::unionfind::UnionFind::new(self.n_objects());
        for a in 0..self.n_arrows() {
            uf.union(self.source[a], self.target[a]);
        }
        uf.classes().0
    }

    /// Arrows from `x` to itself.
    pub fn isotropy(&self, x: usize) -> Vec<usize> {
        (0..self.n_arrows()).filter(|&a| self.source[a] == x && self.target[a] == x).collect()
    }
}

pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (old, &new) in perm.iter().enumerate() {
        inv[new] = old;
    }
    inv
}

pub fn reversal(n: usize) -> Vec<usize> {
    (0..n).map(|i| n - 1 - i).collect()
}

/// `perm[old] = new` putting names in sorted order.
pub fn sorting(names: &[String]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| names[a].cmp(&names[b]));
    invert(&order)
}

/// Checks the groupoid axioms, reporting the first witness per law.
pub fn verify_groupoid(g: &FiniteGroupoid) -> Report {
    let mut r = Report::new("groupoid");
    let (no, na) = (g.n_objects(), g.n_arrows());
    let name = |a: usize| g.arrows[a].clone();

    let shape = if g.source.len() != na
        || g.target.len() != na
        || g.inverse.len() != na
        || g.identity.len() != no
        || g.compose.len() != na * na
    {
        Some("table lengths do not match the object and arrow counts".to_string())
    } else if g.source.iter().chain(&g.target).any(|&x| x >= no)
        || g.identity.iter().chain(&g.inverse).any(|&a| a >= na)
        || g.compose.iter().flatten().any(|&c| c >= na)
    {
        Some("table entry out of range".to_string())
    } else {
        None
    };
    r.record("table shape", "groupoid.shape", shape.clone());
    if shape.is_some() {
        return r;
    }
    let mut seen = std::collections::HashSet::new();
    let dup = g.objects.iter().find(|o| !seen.insert(format!("o{o}")))
        .or_else(|| g.arrows.iter().find(|a| !seen.insert(format!("a{a}"))))
        .map(|d| format!("duplicate id {d}"));
    r.record("distinct ids", "groupoid.ids", dup);

    let mut domain = None;
    'dom: for a in 0..na {
        for b in 0..na {
            let composable = g.source[a] == g.target[b];
            match g.comp(a, b) {
                Some(_) if !composable => {
                    domain = Some(format!("{}∘{} defined on a non-composable pair", name(a), name(b)));
                    break 'dom;
                }
                None if composable => {
                    domain = Some(format!("{}∘{} missing", name(a), name(b)));
                    break 'dom;
                }
                _ => {}
            }
        }
    }
    r.record("composition domain", "groupoid.compose-domain", domain.clone());
    if domain.is_some() {
        return r;
    }

    let mut ends = None;
    'ends: for a in 0..na {
        for b in 0..na {
            if let Some(c) = g.comp(a, b) {
                if g.source[c] != g.source[b] || g.target[c] != g.target[a] {
                    ends = Some(format!("{}∘{} = {} has wrong endpoints", name(a), name(b), name(c)));
                    break 'ends;
                }
            }
        }
    }
    r.record("source and target of composites", "groupoid.endpoints", ends);

    let mut unit = None;
    for x in 0..no {
        let e = g.identity[x];
        if g.source[e] != x || g.target[e] != x {
            unit = Some(format!("identity {} is not a loop at {}", name(e), g.objects[x]));
            break;
        }
    }
    if unit.is_none() {
        for a in 0..na {
            if g.comp(g.identity[g.target[a]], a) != Some(a) || g.comp(a, g.identity[g.source[a]]) != Some(a) {
                unit = Some(format!("unit law fails at {}", name(a)));
                break;
            }
        }
    }
    r.record("unit laws", "groupoid.unit", unit);

    let mut assoc = None;
    'assoc: for a in 0..na {
        for b in 0..na {
            let Some(ab) = g.comp(a, b) else { continue };
            for c in 0..na {
                let Some(bc) = g.comp(b, c) else { continue };
                if g.comp(ab, c) != g.comp(a, bc) {
                    assoc = Some(format!("({}∘{})∘{} differs from {}∘({}∘{})", name(a), name(b), name(c), name(a), name(b), name(c)));
                    break 'assoc;
                }
            }
        }
    }
    r.record("associativity", "groupoid.assoc", assoc);

    let mut inv = None;
    for a in 0..na {
        let i = g.inverse[a];
        if g.source[i] != g.target[a]
            || g.comp(a, i) != Some(g.identity[g.target[a]])
            || g.comp(i, a) != Some(g.identity[g.source[a]])
        {
            inv = Some(format!("{} is not inverse to {}", name(i), name(a)));
            break;
        }
    }
    r.record("inverse laws", "groupoid.inverse", inv);
    r
}

/// An isomorphism of groupoids as object and arrow bijections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidIso {
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

/// Checks that the given maps form a functor (and a bijection when `iso`).
pub fn functor_violation(g: &FiniteGroupoid, h: &FiniteGroupoid, f0: &[usize], f1: &[usize]) -> Option<String> {
    if f0.len() != g.n_objects() || f1.len() != g.n_arrows() {
        return Some("maps are not total".into());
    }
    for a in 0..g.n_arrows() {
        if h.source[f1[a]] != f0[g.source[a]] || h.target[f1[a]] != f0[g.target[a]] {
            return Some(format!("{} is sent to an arrow with the wrong ends", g.arrows[a]));
        }
    }
    for x in 0..g.n_objects() {
        if f1[g.identity[x]] != h.identity[f0[x]] {
            return Some(format!("identity at {} is not preserved", g.objects[x]));
        }
    }
    for a in 0..g.n_arrows() {
        for b in 0..g.n_arrows() {
            if let Some(ab) = g.comp(a, b) {
                if h.comp(f1[a], f1[b]) != Some(f1[ab]) {
                    return Some(format!("composite {}∘{} is not preserved", g.arrows[a], g.arrows[b]));
                }
            }
        }
    }
    None
}

/// Exhaustive search for a groupoid isomorphism `g -> h`.
pub fn groupoid_isomorphism(g: &FiniteGroupoid, h: &FiniteGroupoid) -> Option<GroupoidIso> {
    if g.n_objects() != h.n_objects() || g.n_arrows() != h.n_arrows() {
        return None;
    }
    let hom_sizes = |k: &FiniteGroupoid| {
        let mut m: HashMap<(usize, usize), usize> = HashMap::new();
        for a in 0..k.n_arrows() {
            *m.entry((k.source[a], k.target[a])).or_default() += 1;
        }
        m
    };
    let (hg, hh) = (hom_sizes(g), hom_sizes(h));
    let n = g.n_objects();
    let mut f0 = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search_objects(g, h, &hg, &hh, 0, &mut f0, &mut used)
}

fn search_objects(
    g: &FiniteGroupoid,
    h: &FiniteGroupoid,
    hg: &HashMap<(usize, usize), usize>,
    hh: &HashMap<(usize, usize), usize>,
    x: usize,
    f0: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> Option<GroupoidIso> {
    if x == g.n_objects() {
        let mut f1 = vec![usize::MAX; g.n_arrows()];
        let mut used1 = vec![false; h.n_arrows()];
        for y in 0..g.n_objects() {
            f1[g.identity[y]] = h.identity[f0[y]];
            used1[h.identity[f0[y]]] = true;
        }
        return search_arrows(g, h, 0, f0, &mut f1, &mut used1).map(|arrows| GroupoidIso { objects: f0.clone(), arrows });
    }
    for y in 0..h.n_objects() {
        if used[y] {
            continue;
        }
        f0[x] = y;
        let consistent = (0..=x).all(|p| {
            let q = f0[p];
            hg.get(&(p, x)) == hh.get(&(q, y)) && hg.get(&(x, p)) == hh.get(&(y, q))
        });
        if consistent {
            used[y] = true;
            if let Some(found) = search_objects(g, h, hg, hh, x + 1, f0, used) {
                return Some(found);
            }
            used[y] = false;
        }
    }
    f0[x] = usize::MAX;
    None
}

fn search_arrows(
    g: &FiniteGroupoid,
    h: &FiniteGroupoid,
    a: usize,
    f0: &[usize],
    f1: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> Option<Vec<usize>> {
    if a == g.n_arrows() {
        return functor_violation(g, h, f0, f1).is_none().then(|| f1.clone());
    }
    if f1[a] != usize::MAX {
        return search_arrows(g, h, a + 1, f0, f1, used);
    }
    let (s, t) = (f0[g.source[a]], f0[g.target[a]]);
    for b in 0..h.n_arrows() {
        if used[b] || h.source[b] != s || h.target[b] != t {
            continue;
        }
        f1[a] = b;
        let ok = (0..g.n_arrows()).all(|c| {
            if f1[c] == usize::MAX {
                return true;
            }
            let fwd = g.comp(a, c).map_or(true, |ac| f1[ac] == usize::MAX || h.comp(b, f1[c]) == Some(f1[ac]));
            let bwd = g.comp(c, a).map_or(true, |ca| f1[ca] == usize::MAX || h.comp(f1[c], b) == Some(f1[ca]));
            fwd && bwd
        });
        if ok {
            used[b] = true;
            if let Some(found) = search_arrows(g, h, a + 1, f0, f1, used) {
                return Some(found);
            }
            used[b] = false;
        }
    }
    f1[a] = usize::MAX;
    None
}
