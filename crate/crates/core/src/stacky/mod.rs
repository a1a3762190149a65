//! Finite stacky groupoids: a groupoid `G` presenting the arrows, a base `M`,
//! multiplication as a bibundle `E_m: G ×_M G -> G`, and the coherence
//! 2-morphisms `a`, `b_l`, `b_r`.
//!
//! The associator is stored on labelled squares. A square `(η_012, η_023)`
//! with `J_r η_012 = pr_1 J_l η_023` maps to `(η_123, η_013)` with
//! `J_r η_123 = pr_2 J_l η_013`. Unitors send elements of `E_m` whose first,
//! respectively second, factor is a unit to arrows of `G`.

mod convert;
mod product;
mod triangulation;

pub use convert::{from_two_groupoid, to_two_groupoid};
pub use product::{box_left, box_right, BoxProduct, FiberPower};
pub use triangulation::{cube_violation, edges, flip, slot_action, Triangle, Triangulation};

use crate::groupoid::{
    bibundle_morphism_find, bibundle_morphism_search, compose_with_classes, functor_violation, identity_bibundle,
    left_principal_violation, verify_bibundle, verify_groupoid, Bibundle, BibundleMorphism, Composite, FiniteGroupoid,
    GroupoidIso,
};
use crate::report::Report;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

pub type Associator = BTreeMap<[usize; 2], [usize; 2]>;
pub type Unitor = BTreeMap<usize, usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackyGroupoidData {
    pub groupoid: Arc<FiniteGroupoid>,
    pub base: Vec<String>,
    /// `s̄, t̄: G_0 -> M`.
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    /// `ē: M -> G_0`.
    pub unit: Vec<usize>,
    pub multiplication: Bibundle,
    pub associator: Associator,
    pub left_unitor: Unitor,
    pub right_unitor: Unitor,
    pub inverse: Option<Bibundle>,
}

impl StackyGroupoidData {
    pub fn power(&self, k: usize) -> FiberPower {
        FiberPower::new(&self.groupoid, &self.s, &self.t, k)
    }

    fn unit_objects(&self) -> Vec<bool> {
        let mut out = vec![false; self.groupoid.n_objects()];
        for &x in &self.unit {
            if x < out.len() {
                out[x] = true;
            }
        }
        out
    }

    /// Squares `(η_012, η_023)`.
    pub fn squares(&self, p2: &FiberPower) -> Triangulation {
        Triangulation::new(vec![[0, 1, 2], [0, 2, 3]], &self.multiplication, p2)
    }

    /// Flipped squares `(η_123, η_013)`.
    pub fn flipped_squares(&self, p2: &FiberPower) -> Triangulation {
        Triangulation::new(vec![[1, 2, 3], [0, 1, 3]], &self.multiplication, p2)
    }
}

/// `E_m` restricted to a unit in slot `slot`, as a bibundle `G -> G`, with the
/// positions in `E_m` of its carrier.
pub fn unit_restriction(data: &StackyGroupoidData, p2: &FiberPower, slot: usize) -> (Bibundle, Vec<usize>) {
    let e = &data.multiplication;
    let units = data.unit_objects();
    let members: Vec<usize> = (0..e.len()).filter(|&x| units[edges(e, p2, x)[slot]]).collect();
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let free = 1 - slot;
    let bundle = Bibundle::from_fns(
        data.groupoid.clone(),
        data.groupoid.clone(),
        members.iter().map(|&x| e.carrier[x].clone()).collect(),
        members.iter().map(|&x| edges(e, p2, x)[free]).collect(),
        members.iter().map(|&x| e.j_r[x]).collect(),
        |g, k| pos[&slot_action(e, p2, free, g, members[k]).expect("unit slot action")],
        |k, g| pos[&e.r(members[k], g)],
    );
    (bundle, members)
}

fn unitor_morphism(unitor: &Unitor, members: &[usize], n_arrows: usize) -> Result<BibundleMorphism, String> {
    let mut map = Vec::with_capacity(members.len());
    for &x in members {
        match unitor.get(&x) {
            Some(&g) if g < n_arrows => map.push(g),
            _ => return Err(format!("no arrow assigned to element {x}")),
        }
    }
    if let Some(k) = unitor.keys().find(|k| !members.contains(k)) {
        return Err(format!("element {k} has no unit factor"));
    }
    Ok(BibundleMorphism { map })
}

/// Both sides of the associator as composites `P_3 -> G`, with the associator
/// as a morphism between them.
pub struct AssociatorSides {
    pub lhs: Composite,
    pub rhs: Composite,
    pub right_box: BoxProduct,
    pub left_box: BoxProduct,
}

pub fn associator_sides(data: &StackyGroupoidData, p2: &FiberPower, p3: &FiberPower) -> Result<AssociatorSides, String> {
    let e = &data.multiplication;
    let right_box = box_right(e, p2, p3);
    let left_box = box_left(e, p2, p3);
    let lhs = compose_with_classes(&right_box.bibundle, e)?;
    let rhs = compose_with_classes(&left_box.bibundle, e)?;
    Ok(AssociatorSides { lhs, rhs, right_box, left_box })
}

impl AssociatorSides {
    /// Class of the square `(η_012, η_023)` in the left composite.
    pub fn lhs_class(&self, data: &StackyGroupoidData, p2: &FiberPower, pair: [usize; 2]) -> Option<usize> {
        let x23 = edges(&data.multiplication, p2, pair[1])[1];
        let cell = self.right_box.cell(pair[0], data.groupoid.identity[x23])?;
        self.lhs.class_of(cell, pair[1])
    }

    /// Class of the flipped square `(η_123, η_013)` in the right composite.
    pub fn rhs_class(&self, data: &StackyGroupoidData, p2: &FiberPower, pair: [usize; 2]) -> Option<usize> {
        let x01 = edges(&data.multiplication, p2, pair[1])[0];
        let cell = self.left_box.cell(data.groupoid.identity[x01], pair[0])?;
        self.rhs.class_of(cell, pair[1])
    }

    /// The flipped square in the class of a right-composite element.
    pub fn rhs_square(&self, data: &StackyGroupoidData, p2: &FiberPower, class: usize) -> Option<[usize; 2]> {
        let (cell, x013) = self.rhs.representative[class];
        let (g, x123) = self.left_box.cells[cell];
        Some([x123, slot_action(&data.multiplication, p2, 0, g, x013)?])
    }
}

/// `E_m ×_{J_r, ē} M` with `J_l = pr_1`, `J_r = pr_2`, `g·η = (g, 1)·η`, `η·g = (1, g⁻¹)·η`.
pub fn inverse_bibundle(data: &StackyGroupoidData) -> Bibundle {
    let p2 = data.power(2);
    let e = &data.multiplication;
    let units = data.unit_objects();
    let members: Vec<usize> = (0..e.len()).filter(|&x| e.j_r[x] < units.len() && units[e.j_r[x]]).collect();
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let g = &*data.groupoid;
    // Unreachable targets only occur on corrupted input; they map to the element itself.
    let lookup = |y: Option<usize>, k: usize| y.and_then(|y| pos.get(&y).copied()).unwrap_or(k);
    Bibundle::from_fns(
        data.groupoid.clone(),
        data.groupoid.clone(),
        members.iter().map(|&x| e.carrier[x].clone()).collect(),
        members.iter().map(|&x| edges(e, &p2, x)[0]).collect(),
        members.iter().map(|&x| edges(e, &p2, x)[1]).collect(),
        |a, k| lookup(slot_action(e, &p2, 0, a, members[k]), k),
        |k, a| lookup(slot_action(e, &p2, 1, g.inverse[a], members[k]), k),
    )
}

/// A strict inversion `i: G -> G` read off a section of the inverse bibundle
/// over `G_0`, when the bibundle is a principal bundle with such a section.
pub fn strict_inverse_check(data: &StackyGroupoidData) -> Option<GroupoidIso> {
    let inv = inverse_bibundle(data);
    if !verify_bibundle(&inv).passed() {
        return None;
    }
    let g = &*data.groupoid;
    let section: Option<Vec<usize>> = (0..g.n_objects()).map(|x| (0..inv.len()).find(|&k| inv.j_l[k] == x)).collect();
    let section = section?;
    let objects: Vec<usize> = section.iter().map(|&k| inv.j_r[k]).collect();
    let arrows: Option<Vec<usize>> = (0..g.n_arrows())
        .map(|a| inv.right_division(section[g.target[a]], inv.left_action(a, section[g.source[a]])?))
        .collect();
    let arrows = arrows?;
    functor_violation(g, g, &objects, &arrows).is_none().then_some(GroupoidIso { objects, arrows })
}

/// Runs every axiom of a stacky groupoid in order; stops after structural failures.
pub fn verify_stacky(data: &StackyGroupoidData) -> Report {
    let mut r = Report::new("stacky groupoid");
    let g = &*data.groupoid;
    r.absorb("presenting groupoid", verify_groupoid(g));
    let m = data.base.len();
    let shape = [
        (data.s.len() != g.n_objects() || data.s.iter().any(|&x| x >= m)).then(|| "s̄ is not a map G_0 -> M".to_string()),
        (data.t.len() != g.n_objects() || data.t.iter().any(|&x| x >= m)).then(|| "t̄ is not a map G_0 -> M".to_string()),
        (data.unit.len() != m || data.unit.iter().any(|&x| x >= g.n_objects())).then(|| "ē is not a map M -> G_0".to_string()),
    ]
    .into_iter()
    .flatten()
    .next();
    r.record("structure maps are total", "stacky.shape", shape);
    if !r.passed() {
        return r;
    }
    let orbit = (0..g.n_arrows())
        .find(|&a| data.s[g.source[a]] != data.s[g.target[a]] || data.t[g.source[a]] != data.t[g.target[a]])
        .map(|a| format!("{} joins objects with different s̄ or t̄", g.arrows[a]));
    r.record("s̄ and t̄ are constant on orbits", "stacky.orbit-constant", orbit);
    let surj = (0..m)
        .find(|&x| !data.s.contains(&x) || !data.t.contains(&x))
        .map(|x| format!("{} is missed by s̄ or t̄", data.base[x]));
    r.record("s̄ and t̄ are surjective", "stacky.surjective", surj);
    let unit = (0..m)
        .find(|&x| data.s[data.unit[x]] != x || data.t[data.unit[x]] != x)
        .map(|x| format!("ē({}) = {} does not lie over {}", data.base[x], g.objects[data.unit[x]], data.base[x]));
    r.record("s̄∘ē = t̄∘ē = id", "stacky.unit-section", unit);
    if !r.passed() {
        return r;
    }

    let p2 = data.power(2);
    let e = &data.multiplication;
    let grouped = (*e.left != *p2.groupoid)
        .then(|| "E_m is not acted on by G ×_M G".to_string())
        .or_else(|| (*e.right != *g).then(|| "E_m is not acted on by G".to_string()));
    r.record("E_m runs from G ×_M G to G", "stacky.multiplication-shape", grouped);
    if !r.passed() {
        return r;
    }
    r.absorb("E_m", verify_bibundle(e));
    if !r.passed() {
        return r;
    }
    let moment = (0..e.len())
        .find(|&x| {
            let [x01, x12, x02] = edges(e, &p2, x);
            data.t[x02] != data.t[x01] || data.s[x02] != data.s[x12]
        })
        .map(|x| format!("{} breaks t̄∘m = t̄∘pr_1 or s̄∘m = s̄∘pr_2", e.carrier[x]));
    r.record("t̄∘m = t̄∘pr_1 and s̄∘m = s̄∘pr_2", "stacky.moment", moment);

    check_associator(data, &p2, &mut r);
    if !r.passed() {
        return r;
    }
    check_unitors(data, &p2, &mut r);
    if !r.passed() {
        return r;
    }
    check_unit_triangles(data, &p2, &mut r);

    let inv = inverse_bibundle(data);
    let witness = verify_bibundle(&inv)
        .first_failure()
        .map(|c| format!("{}: {}", c.law, c.witness.as_deref().unwrap_or("")))
        .or_else(|| left_principal_violation(&inv));
    r.record("E_m ×_{J_r, ē} M is biprincipal", "stacky.inverse", witness);
    if let Some(ei) = &data.inverse {
        let found = bibundle_morphism_search(&inv, ei).filter(|f| f.is_bijective(ei.len()));
        r.record(
            "E_i is isomorphic to E_m ×_{J_r, ē} M",
            "stacky.inverse-supplied",
            found.is_none().then(|| format!("no isomorphism onto the {} elements of E_i", ei.len())),
        );
    }
    r
}

fn check_associator(data: &StackyGroupoidData, p2: &FiberPower, r: &mut Report) {
    let e = &data.multiplication;
    let squares = data.squares(p2);
    let flipped = data.flipped_squares(p2);
    let describe = |pair: &[usize]| format!("({}, {})", e.carrier[pair[0]], e.carrier[pair[1]]);
    let outer = |pair: &[usize; 2], flipped_side: bool| -> [usize; 4] {
        let (a, b) = (edges(e, p2, pair[0]), edges(e, p2, pair[1]));
        if flipped_side {
            [b[0], a[0], a[1], b[2]]
        } else {
            [a[0], a[1], b[1], b[2]]
        }
    };
    let shape = squares
        .elements
        .iter()
        .find_map(|l| {
            let pair = [l[0], l[1]];
            match data.associator.get(&pair) {
                None => Some(format!("a is undefined on {}", describe(&pair))),
                Some(img) if flipped.element(img).is_none() => Some(format!("a sends {} off the flipped squares", describe(&pair))),
                Some(img) if outer(img, true) != outer(&pair, false) => Some(format!("a moves the boundary of {}", describe(&pair))),
                _ => None,
            }
        })
        .or_else(|| {
            let extra = data.associator.keys().find(|k| squares.element(&k[..]).is_none())?;
            Some(format!("a is defined off the squares at {:?}", extra))
        });
    r.record("a is a map of labelled squares", "stacky.associator-shape", shape);
    if !r.passed() {
        return;
    }

    let p3 = data.power(3);
    let sides = match associator_sides(data, p2, &p3) {
        Ok(s) => s,
        Err(w) => return r.fail("a is a map of labelled squares", "stacky.associator-shape", w),
    };
    let mut map = vec![usize::MAX; sides.lhs.bibundle.len()];
    let mut clash = None;
    for l in &squares.elements {
        let pair = [l[0], l[1]];
        let c = sides.lhs_class(data, p2, pair).expect("squares lie in the left composite");
        let d = sides.rhs_class(data, p2, data.associator[&pair]).expect("flipped squares lie in the right composite");
        if map[c] != usize::MAX && map[c] != d {
            clash = Some(format!("a is not constant on the class of {}", describe(&pair)));
            break;
        }
        map[c] = d;
    }
    r.record("a is independent of representatives", "stacky.associator-well-defined", clash);
    if !r.passed() {
        return;
    }
    let morphism = BibundleMorphism { map };
    let iso = morphism.violation(&sides.lhs.bibundle, &sides.rhs.bibundle).or_else(|| {
        (!morphism.is_bijective(sides.rhs.bibundle.len())).then(|| "a is not a bijection of composites".to_string())
    });
    r.record("a is an isomorphism m∘(m × id) => m∘(id × m)", "stacky.associator-iso", iso);
    r.record("pentagon of associators (cube)", "stacky.cube", cube_violation(e, p2, &data.associator));
}

fn check_unitors(data: &StackyGroupoidData, p2: &FiberPower, r: &mut Report) {
    let id = identity_bibundle(data.groupoid.clone());
    for (slot, unitor, law, anchor) in [
        (0, &data.left_unitor, "b_l is an isomorphism m∘(ē∘t̄ × id) => id", "stacky.left-unitor"),
        (1, &data.right_unitor, "b_r is an isomorphism m∘(id × ē∘s̄) => id", "stacky.right-unitor"),
    ] {
        let (bundle, members) = unit_restriction(data, p2, slot);
        let witness = match unitor_morphism(unitor, &members, data.groupoid.n_arrows()) {
            Err(w) => Some(w),
            Ok(f) => f
                .violation(&bundle, &id)
                .or_else(|| (!f.is_bijective(id.len())).then(|| "not a bijection onto G_1".to_string())),
        };
        r.record(law, anchor, witness);
    }
}

fn check_unit_triangles(data: &StackyGroupoidData, p2: &FiberPower, r: &mut Report) {
    let e = &data.multiplication;
    let units = data.unit_objects();
    let (bl, br) = (&data.left_unitor, &data.right_unitor);
    let squares = data.squares(p2);
    let describe = |l: &[usize]| format!("({}, {})", e.carrier[l[0]], e.carrier[l[1]]);
    let (mut right, mut left, mut both) = (None, None, None);
    for l in &squares.elements {
        let (x012, x023) = (l[0], l[1]);
        let [x123, x013] = data.associator[&[x012, x023]];
        let unit01 = units[edges(e, p2, x012)[0]];
        let unit23 = units[edges(e, p2, x023)[1]];
        let lr = unit23.then(|| e.right_action(x012, *br.get(&x023)?)).flatten();
        let ll = unit01.then(|| slot_action(e, p2, 0, *bl.get(&x012)?, x023)).flatten();
        if unit23 && right.is_none() {
            let rr = br.get(&x123).and_then(|&g| slot_action(e, p2, 1, g, x013));
            if lr.is_none() || lr != rr {
                right = Some(format!("η_012·b_r(η_023) differs from (1, b_r η_123)·η_013 at {}", describe(l)));
            }
        }
        if unit01 && left.is_none() {
            let rl = bl.get(&x013).and_then(|&g| e.right_action(x123, g));
            if ll.is_none() || ll != rl {
                left = Some(format!("(b_l η_012, 1)·η_023 differs from η_123·b_l(η_013) at {}", describe(l)));
            }
        }
        if unit01 && unit23 && both.is_none() {
            let lhs = ll.and_then(|y| br.get(&y));
            let rhs = lr.and_then(|y| bl.get(&y));
            if lhs.is_none() || lhs != rhs {
                both = Some(format!("b_r and b_l disagree on the unit square {}", describe(l)));
            }
        }
    }
    r.record("unit triangle through b_r", "stacky.unit-triangle-br", right);
    r.record("unit triangle through b_l", "stacky.unit-triangle-bl", left);
    r.record("b_l and b_r agree on unit squares", "stacky.unit-triangle-bl-br", both);
}

/// Searches the isomorphisms between the two composites for one passing the
/// cube and unit triangles, in search order.
pub fn search_associator(data: &StackyGroupoidData) -> Option<Associator> {
    let p2 = data.power(2);
    let p3 = data.power(3);
    let sides = associator_sides(data, &p2, &p3).ok()?;
    let squares = data.squares(&p2);
    let mut found = None;
    let mut candidate = data.clone();
    bibundle_morphism_find(&sides.lhs.bibundle, &sides.rhs.bibundle, &mut |f| {
        if !f.is_bijective(sides.rhs.bibundle.len()) {
            return false;
        }
        let assoc: Option<Associator> = squares
            .elements
            .iter()
            .map(|l| {
                let c = sides.lhs_class(data, &p2, [l[0], l[1]])?;
                Some(([l[0], l[1]], sides.rhs_square(data, &p2, f.map[c])?))
            })
            .collect();
        let Some(assoc) = assoc else { return false };
        candidate.associator = assoc;
        let mut r = Report::new("candidate");
        check_associator(&candidate, &p2, &mut r);
        check_unit_triangles(&candidate, &p2, &mut r);
        let ok = r.passed();
        if ok {
            found = Some(candidate.associator.clone());
        }
        ok
    });
    found
}

/// An ordinary groupoid `K ⇒ M` as a stacky groupoid: `G` is discrete on
/// `K_1`, `E_m` is the composable pairs, `a` is associativity, `b` the identity.
pub fn ordinary_groupoid_stacky(k: &FiniteGroupoid) -> StackyGroupoidData {
    let groupoid = Arc::new(FiniteGroupoid::discrete(&k.arrows));
    let p2 = FiberPower::new(&groupoid, &k.source, &k.target, 2);
    let pairs: Vec<(usize, usize)> = (0..k.n_arrows())
        .flat_map(|a| (0..k.n_arrows()).filter(move |&b| k.source[a] == k.target[b]).map(move |b| (a, b)))
        .collect();
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let multiplication = Bibundle::from_fns(
        p2.groupoid.clone(),
        groupoid.clone(),
        pairs.iter().map(|&(a, b)| format!("({},{})", k.arrows[a], k.arrows[b])).collect(),
        pairs.iter().map(|&(a, b)| p2.o(&[a, b])).collect(),
        pairs.iter().map(|&(a, b)| k.c(a, b)).collect(),
        |_, x| x,
        |x, _| x,
    );
    let mut associator = Associator::new();
    for (&(a, b), &x) in &index {
        for c in (0..k.n_arrows()).filter(|&c| k.source[b] == k.target[c]) {
            let y = index[&(k.c(a, b), c)];
            associator.insert([x, y], [index[&(b, c)], index[&(a, k.c(b, c))]]);
        }
    }
    let left_unitor = pairs
        .iter()
        .enumerate()
        .filter(|(_, &(a, _))| k.identity[k.target[a]] == a)
        .map(|(x, &(_, b))| (x, groupoid.identity[b]))
        .collect();
    let right_unitor = pairs
        .iter()
        .enumerate()
        .filter(|(_, &(_, b))| k.identity[k.source[b]] == b)
        .map(|(x, &(a, _))| (x, groupoid.identity[a]))
        .collect();
    let inverse = Bibundle::from_fns(
        groupoid.clone(),
        groupoid.clone(),
        k.arrows.clone(),
        (0..k.n_arrows()).collect(),
        k.inverse.clone(),
        |_, x| x,
        |x, _| x,
    );
    StackyGroupoidData {
        groupoid,
        base: k.objects.clone(),
        s: k.source.clone(),
        t: k.target.clone(),
        unit: k.identity.clone(),
        multiplication,
        associator,
        left_unitor,
        right_unitor,
        inverse: Some(inverse),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::FiniteGroup;

    #[test]
    fn ordinary_groupoids_are_stacky() {
        for k in [FiniteGroupoid::pair(2), FiniteGroupoid::from_group(&FiniteGroup::cyclic(3))] {
            let d = ordinary_groupoid_stacky(&k);
            let r = verify_stacky(&d);
            assert!(r.passed(), "{r}");
            let inv = inverse_bibundle(&d);
            assert_eq!(inv.len(), k.n_arrows());
            let i = strict_inverse_check(&d).unwrap();
            assert_eq!(i.objects, k.inverse);
        }
    }

    #[test]
    fn searched_associator_passes() {
        let mut d = ordinary_groupoid_stacky(&FiniteGroupoid::pair(2));
        d.associator = search_associator(&d).unwrap();
        assert!(verify_stacky(&d).passed());
    }

    #[test]
    fn swapped_associator_fails() {
        let mut d = ordinary_groupoid_stacky(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(3)));
        let keys: Vec<[usize; 2]> = d.associator.keys().copied().collect();
        let (a, b) = (d.associator[&keys[0]], d.associator[&keys[1]]);
        d.associator.insert(keys[0], b);
        d.associator.insert(keys[1], a);
        assert!(!verify_stacky(&d).passed());
    }
}
