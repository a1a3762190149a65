//! Bibundles between finite groupoids, their composition and morphisms.
//!
//! A bibundle `H -> G` has a left `H`-action along `j_l` and a right
//! `G`-action along `j_r`. It is Hilsum–Skandalis when `j_l` is surjective and
//! the right action is free and transitive on the fibers of `j_l`.

use super::FiniteGroupoid;
use crate::report::Report;
use crate::unionfind::UnionFind;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bibundle {
    pub left: Arc<FiniteGroupoid>,
    pub right: Arc<FiniteGroupoid>,
    pub carrier: Vec<String>,
    pub j_l: Vec<usize>,
    pub j_r: Vec<usize>,
    /// `left_act[h * |E| + e] = h · e`, defined iff `source(h) == j_l(e)`.
    pub left_act: Vec<Option<usize>>,
    /// `right_act[e * |G_1| + g] = e · g`, defined iff `target(g) == j_r(e)`.
    pub right_act: Vec<Option<usize>>,
}

impl Bibundle {
    /// Builds the action tables from functions on their domains.
    pub fn from_fns(
        left: Arc<FiniteGroupoid>,
        right: Arc<FiniteGroupoid>,
        carrier: Vec<String>,
        j_l: Vec<usize>,
        j_r: Vec<usize>,
        left_fn: impl Fn(usize, usize) -> usize,
        right_fn: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let ne = carrier.len();
        let mut left_act = vec![None; left.n_arrows() * ne];
        for h in 0..left.n_arrows() {
            for e in 0..ne {
                if left.source[h] == j_l[e] {
                    left_act[h * ne + e] = Some(left_fn(h, e));
                }
            }
        }
        let mut right_act = vec![None; ne * right.n_arrows()];
        for e in 0..ne {
            for g in 0..right.n_arrows() {
                if right.target[g] == j_r[e] {
                    right_act[e * right.n_arrows() + g] = Some(right_fn(e, g));
                }
            }
        }
        Bibundle { left, right, carrier, j_l, j_r, left_act, right_act }
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn left_action(&self, h: usize, e: usize) -> Option<usize> {
        self.left_act[h * self.carrier.len() + e]
    }

    pub fn right_action(&self, e: usize, g: usize) -> Option<usize> {
        self.right_act[e * self.right.n_arrows() + g]
    }

    /// `h · e` where defined by construction.
    pub fn l(&self, h: usize, e: usize) -> usize {
        self.left_action(h, e)
            .unwrap_or_else(|| panic!("{} cannot act on {}", self.left.arrows[h], self.carrier[e]))
    }

    /// `e · g` where defined by construction.
    pub fn r(&self, e: usize, g: usize) -> usize {
        self.right_action(e, g)
            .unwrap_or_else(|| panic!("{} cannot act on {}", self.right.arrows[g], self.carrier[e]))
    }

    pub fn carrier_index(&self, name: &str) -> Option<usize> {
        self.carrier.iter().position(|c| c == name)
    }

    /// The unique `g` with `e · g = f`, if any.
    pub fn right_division(&self, e: usize, f: usize) -> Option<usize> {
        (0..self.right.n_arrows()).find(|&g| self.right_action(e, g) == Some(f))
    }

    /// Reorders the carrier (`perm[old] = new`), keeping both groupoids.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let inv = super::invert(perm);
        let ne = self.len();
        let carrier = (0..ne).map(|new| self.carrier[inv[new]].clone()).collect();
        let j_l = (0..ne).map(|new| self.j_l[inv[new]]).collect();
        let j_r = (0..ne).map(|new| self.j_r[inv[new]]).collect();
        Bibundle::from_fns(
            self.left.clone(),
            self.right.clone(),
            carrier,
            j_l,
            j_r,
            |h, e| perm[self.l(h, inv[e])],
            |e, g| perm[self.r(inv[e], g)],
        )
    }

    pub fn reversed(&self) -> Self {
        self.permuted(&super::reversal(self.len()))
    }
}

/// Checks moment maps, action axioms, commutation and the principal condition.
pub fn verify_bibundle(b: &Bibundle) -> Report {
    let mut r = Report::new("bibundle");
    let (h, g) = (&*b.left, &*b.right);
    let ne = b.len();
    let e_name = |e: usize| b.carrier[e].as_str();

    let mut shape = None;
    if b.j_l.len() != ne || b.j_r.len() != ne || b.left_act.len() != h.n_arrows() * ne || b.right_act.len() != ne * g.n_arrows() {
        shape = Some("table lengths do not match the carrier".to_string());
    } else if b.j_l.iter().any(|&x| x >= h.n_objects()) || b.j_r.iter().any(|&x| x >= g.n_objects()) {
        shape = Some("moment map value out of range".to_string());
    } else if b.left_act.iter().chain(&b.right_act).flatten().any(|&e| e >= ne) {
        shape = Some("action value out of range".to_string());
    } else {
        'l: for a in 0..h.n_arrows() {
            for e in 0..ne {
                if b.left_action(a, e).is_some() != (h.source[a] == b.j_l[e]) {
                    shape = Some(format!("left action domain wrong at {}·{}", h.arrows[a], e_name(e)));
                    break 'l;
                }
            }
        }
        'r: for e in 0..ne {
            for a in 0..g.n_arrows() {
                if shape.is_some() {
                    break 'r;
                }
                if b.right_action(e, a).is_some() != (g.target[a] == b.j_r[e]) {
                    shape = Some(format!("right action domain wrong at {}·{}", e_name(e), g.arrows[a]));
                    break 'r;
                }
            }
        }
    }
    r.record("action tables", "bibundle.shape", shape.clone());
    if shape.is_some() {
        return r;
    }

    let mut moment = None;
    'm: for e in 0..ne {
        for a in 0..h.n_arrows() {
            if let Some(x) = b.left_action(a, e) {
                if b.j_l[x] != h.target[a] || b.j_r[x] != b.j_r[e] {
                    moment = Some(format!("moment maps not equivariant at {}·{}", h.arrows[a], e_name(e)));
                    break 'm;
                }
            }
        }
        for a in 0..g.n_arrows() {
            if let Some(x) = b.right_action(e, a) {
                if b.j_r[x] != g.source[a] || b.j_l[x] != b.j_l[e] {
                    moment = Some(format!("moment maps not equivariant at {}·{}", e_name(e), g.arrows[a]));
                    break 'm;
                }
            }
        }
    }
    r.record("moment map equivariance", "bibundle.moment", moment);

    let mut unit = None;
    for e in 0..ne {
        if b.left_action(h.identity[b.j_l[e]], e) != Some(e) || b.right_action(e, g.identity[b.j_r[e]]) != Some(e) {
            unit = Some(format!("identities do not fix {}", e_name(e)));
            break;
        }
    }
    r.record("action units", "bibundle.unit", unit);

    let mut assoc = None;
    'a: for e in 0..ne {
        for a1 in 0..h.n_arrows() {
            for a2 in 0..h.n_arrows() {
                let (Some(a12), Some(x)) = (h.comp(a1, a2), b.left_action(a2, e)) else { continue };
                if b.left_action(a12, e) != b.left_action(a1, x) {
                    assoc = Some(format!("({}{})·{} differs from {}·({}·{})", h.arrows[a1], h.arrows[a2], e_name(e), h.arrows[a1], h.arrows[a2], e_name(e)));
                    break 'a;
                }
            }
        }
        for g1 in 0..g.n_arrows() {
            for g2 in 0..g.n_arrows() {
                let (Some(g12), Some(x)) = (g.comp(g1, g2), b.right_action(e, g1)) else { continue };
                if b.right_action(e, g12) != b.right_action(x, g2) {
                    assoc = Some(format!("{}·({}{}) differs from ({}·{})·{}", e_name(e), g.arrows[g1], g.arrows[g2], e_name(e), g.arrows[g1], g.arrows[g2]));
                    break 'a;
                }
            }
        }
    }
    r.record("action associativity", "bibundle.assoc", assoc);

    let mut commute = None;
    'c: for e in 0..ne {
        for a in 0..h.n_arrows() {
            let Some(he) = b.left_action(a, e) else { continue };
            for x in 0..g.n_arrows() {
                let Some(eg) = b.right_action(e, x) else { continue };
                if b.right_action(he, x) != b.left_action(a, eg) {
                    commute = Some(format!("actions of {} and {} on {} do not commute", h.arrows[a], g.arrows[x], e_name(e)));
                    break 'c;
                }
            }
        }
    }
    r.record("left and right actions commute", "bibundle.commute", commute);

    r.record("right principal", "bibundle.principal", principal_violation(b));
    r
}

/// `j_l` surjective and the right action free and transitive on its fibers.
fn principal_violation(b: &Bibundle) -> Option<String> {
    let (h, g) = (&*b.left, &*b.right);
    if let Some(x) = (0..h.n_objects()).find(|&x| !b.j_l.contains(&x)) {
        return Some(format!("j_l misses {}", h.objects[x]));
    }
    for e in 0..b.len() {
        for f in 0..b.len() {
            if b.j_l[e] != b.j_l[f] {
                continue;
            }
            let n = (0..g.n_arrows()).filter(|&a| b.right_action(e, a) == Some(f)).count();
            if n != 1 {
                return Some(format!("{} arrows carry {} to {}", n, b.carrier[e], b.carrier[f]));
            }
        }
    }
    None
}

/// `j_r` surjective and the left action free and transitive on its fibers.
/// Why the left action fails to be principal along `j_r`, if it does.
pub fn left_principal_violation(b: &Bibundle) -> Option<String> {
    let (h, g) = (&*b.left, &*b.right);
    if let Some(x) = (0..g.n_objects()).find(|&x| !b.j_r.contains(&x)) {
        return Some(format!("j_r misses {}", g.objects[x]));
    }
    for e in 0..b.len() {
        for f in 0..b.len() {
            if b.j_r[e] != b.j_r[f] {
                continue;
            }
            let n = (0..h.n_arrows()).filter(|&a| b.left_action(a, e) == Some(f)).count();
            if n != 1 {
                return Some(format!("{} arrows carry {} to {}", n, b.carrier[e], b.carrier[f]));
            }
        }
    }
    None
}

/// Principal on both sides, i.e. a Morita equivalence.
pub fn is_biprincipal(b: &Bibundle) -> bool {
    verify_bibundle(b).passed() && left_principal_violation(b).is_none()
}

/// `G_1` with both actions by composition.
pub fn identity_bibundle(g: Arc<FiniteGroupoid>) -> Bibundle {
    let k = &*g;
    Bibundle::from_fns(
        g.clone(),
        g.clone(),
        k.arrows.clone(),
        k.target.clone(),
        k.source.clone(),
        |h, e| k.c(h, e),
        |e, x| k.c(e, x),
    )
}

/// A composite bibundle with its orbit bookkeeping.
#[derive(Clone, Debug)]
pub struct Composite {
    pub bibundle: Bibundle,
    /// Least pair of each class, in lexicographic index order.
    pub representative: Vec<(usize, usize)>,
    class_of_pair: HashMap<(usize, usize), usize>,
}

impl Composite {
    /// Class of a pair `(e, f)` with `j_r(e) = j_l(f)`.
    pub fn class_of(&self, e: usize, f: usize) -> Option<usize> {
        self.class_of_pair.get(&(e, f)).copied()
    }
}

/// `E ×_{G_0} F` modulo `(e·b, f) ~ (e, b·f)`.
///
/// Classes are named `[e;f]` after their least pair in lexicographic index order.
pub fn compose_bibundles(e: &Bibundle, f: &Bibundle) -> Result<Bibundle, String> {
    compose_with_classes(e, f).map(|c| c.bibundle)
}

pub fn compose_with_classes(e: &Bibundle, f: &Bibundle) -> Result<Composite, String> {
    if e.right != f.left {
        return Err("middle groupoids differ".into());
    }
    let mid = &*e.right;
    let mut pairs = Vec::new();
    let mut lookup = HashMap::new();
    for x in 0..e.len() {
        for y in 0..f.len() {
            if e.j_r[x] == f.j_l[y] {
                lookup.insert((x, y), pairs.len());
                pairs.push((x, y));
            }
        }
    }
    let mut uf = UnionFind::new(pairs.len());
    for (p, &(x, y)) in pairs.iter().enumerate() {
        for b in 0..mid.n_arrows() {
            if mid.target[b] != e.j_r[x] {
                continue;
            }
            let moved = (e.r(x, b), f.l(mid.inverse[b], y));
            uf.union(p, lookup[&moved]);
        }
    }
    let (classes, class_of) = uf.classes();
    let representative: Vec<(usize, usize)> = classes.iter().map(|c| pairs[c[0]]).collect();
    let carrier = representative.iter().map(|&(x, y)| format!("[{};{}]", e.carrier[x], f.carrier[y])).collect();
    let j_l = representative.iter().map(|&(x, _)| e.j_l[x]).collect();
    let j_r = representative.iter().map(|&(_, y)| f.j_r[y]).collect();
    let bibundle = Bibundle::from_fns(
        e.left.clone(),
        f.right.clone(),
        carrier,
        j_l,
        j_r,
        |h, c| {
            let (x, y) = representative[c];
            class_of[lookup[&(e.l(h, x), y)]]
        },
        |c, g| {
            let (x, y) = representative[c];
            class_of[lookup[&(x, f.r(y, g))]]
        },
    );
    let class_of_pair = lookup.into_iter().map(|(k, p)| (k, class_of[p])).collect();
    Ok(Composite { bibundle, representative, class_of_pair })
}

/// An equivariant map commuting with both moment maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BibundleMorphism {
    pub map: Vec<usize>,
}

impl BibundleMorphism {
    pub fn is_bijective(&self, target_len: usize) -> bool {
        let mut seen = vec![false; target_len];
        self.map.len() == target_len && self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    /// Moment maps and equivariance of `self: e -> f`.
    pub fn violation(&self, e: &Bibundle, f: &Bibundle) -> Option<String> {
        if self.map.len() != e.len() || self.map.iter().any(|&y| y >= f.len()) {
            return Some("map is not total".into());
        }
        for x in 0..e.len() {
            let y = self.map[x];
            if f.j_l[y] != e.j_l[x] || f.j_r[y] != e.j_r[x] {
                return Some(format!("{} -> {} changes a moment map", e.carrier[x], f.carrier[y]));
            }
            for h in 0..e.left.n_arrows() {
                if let Some(hx) = e.left_action(h, x) {
                    if f.left_action(h, y) != Some(self.map[hx]) {
                        return Some(format!("not equivariant for {} at {}", e.left.arrows[h], e.carrier[x]));
                    }
                }
            }
            for g in 0..e.right.n_arrows() {
                if let Some(xg) = e.right_action(x, g) {
                    if f.right_action(y, g) != Some(self.map[xg]) {
                        return Some(format!("not equivariant for {} at {}", e.right.arrows[g], e.carrier[x]));
                    }
                }
            }
        }
        None
    }
}

/// First morphism `e -> f` in carrier order, found by backtracking with orbit propagation.
pub fn bibundle_morphism_search(e: &Bibundle, f: &Bibundle) -> Option<BibundleMorphism> {
    bibundle_morphism_find(e, f, &mut |_| true)
}

/// First morphism `e -> f` in search order that `accept` takes.
pub fn bibundle_morphism_find(e: &Bibundle, f: &Bibundle, accept: &mut dyn FnMut(&BibundleMorphism) -> bool) -> Option<BibundleMorphism> {
    if e.left != f.left || e.right != f.right {
        return None;
    }
    let mut assign = vec![usize::MAX; e.len()];
    let mut found = None;
    search(e, f, &mut assign, &mut |a: &[usize]| {
        let m = BibundleMorphism { map: a.to_vec() };
        let ok = accept(&m);
        if ok {
            found = Some(m);
        }
        ok
    });
    found
}

fn search(e: &Bibundle, f: &Bibundle, assign: &mut Vec<usize>, done: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    let Some(x) = assign.iter().position(|&v| v == usize::MAX) else {
        return done(assign);
    };
    for y in 0..f.len() {
        if f.j_l[y] != e.j_l[x] || f.j_r[y] != e.j_r[x] {
            continue;
        }
        let mut trail = Vec::new();
        if propagate(e, f, assign, x, y, &mut trail) && search(e, f, assign, done) {
            return true;
        }
        for t in trail {
            assign[t] = usize::MAX;
        }
    }
    false
}

/// Extends `x -> y` along both actions; records newly set cells in `trail`.
fn propagate(e: &Bibundle, f: &Bibundle, assign: &mut [usize], x: usize, y: usize, trail: &mut Vec<usize>) -> bool {
    let mut queue = vec![(x, y)];
    while let Some((x, y)) = queue.pop() {
        if assign[x] != usize::MAX {
            if assign[x] != y {
                return false;
            }
            continue;
        }
        assign[x] = y;
        trail.push(x);
        for h in 0..e.left.n_arrows() {
            if let Some(hx) = e.left_action(h, x) {
                match f.left_action(h, y) {
                    Some(hy) => queue.push((hx, hy)),
                    None => return false,
                }
            }
        }
        for g in 0..e.right.n_arrows() {
            if let Some(xg) = e.right_action(x, g) {
                match f.right_action(y, g) {
                    Some(yg) => queue.push((xg, yg)),
                    None => return false,
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::FiniteGroup;

    fn z3() -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(3)))
    }

    #[test]
    fn identity_is_biprincipal() {
        let id = identity_bibundle(Arc::new(FiniteGroupoid::pair(3)));
        assert!(verify_bibundle(&id).passed());
        assert!(is_biprincipal(&id));
    }

    #[test]
    fn composing_with_identity_is_isomorphic() {
        let g = z3();
        let id = identity_bibundle(g.clone());
        let comp = compose_bibundles(&id, &id).unwrap();
        assert_eq!(comp.len(), 3);
        assert!(verify_bibundle(&comp).passed());
        let m = bibundle_morphism_search(&comp, &id).unwrap();
        assert!(m.is_bijective(id.len()));
        assert!(m.violation(&comp, &id).is_none());
    }

    #[test]
    fn reordered_carrier_gives_isomorphic_composite() {
        let id = identity_bibundle(Arc::new(FiniteGroupoid::pair(2)));
        let a = compose_bibundles(&id, &id).unwrap();
        let b = compose_bibundles(&id.reversed(), &id.reversed()).unwrap();
        assert!(bibundle_morphism_search(&a, &b).unwrap().is_bijective(b.len()));
    }

    #[test]
    fn broken_right_action_is_not_principal() {
        let mut id = identity_bibundle(z3());
        // Send every right action to the identity arrow's element.
        for v in id.right_act.iter_mut() {
            *v = Some(0);
        }
        let r = verify_bibundle(&id);
        assert!(r.has_failure("right principal"));
    }
}
