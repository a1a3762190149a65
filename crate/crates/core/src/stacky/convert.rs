//! Passing between 2-groupoid data and stacky groupoids.
//!
//! From 2-groupoid data: `G` is the bigon groupoid over `X_1`, `M = X_0`, and
//! `E_m = X_2` with `J_l = (d_2, d_0)`, `J_r = d_1`. Back: `X_2 = E_m`, and
//! each `m_i` is read off the associator by moving within a square class.

use super::{edges, FiberPower, StackyGroupoidData, Triangulation};
use super::{verify_stacky, Associator, Unitor};
use crate::groupoid::Bibundle;
use crate::simplicial::TruncatedSimplicialSet;
use crate::two_groupoid::{bigon_groupoid, horn_triples, tilde_bigon_iso, verify_two_groupoid, HornTable, TwoGroupoidData};
use std::sync::Arc;

fn first_failure(r: &crate::report::Report) -> Option<String> {
    r.first_failure().map(|c| format!("{} fails: {}", c.law, c.witness.as_deref().unwrap_or("")))
}

pub fn from_two_groupoid(x: &TwoGroupoidData) -> Result<StackyGroupoidData, String> {
    if let Some(w) = first_failure(&verify_two_groupoid(x)) {
        return Err(w);
    }
    let bigons = bigon_groupoid(x);
    let groupoid = Arc::new(bigons.groupoid.clone());
    let (n0, n1, n2) = (x.x(0).len(), x.x(1).len(), x.x(2).len());
    let s: Vec<usize> = (0..n1).map(|e| x.d1(0, e)).collect();
    let t: Vec<usize> = (0..n1).map(|e| x.d1(1, e)).collect();
    let unit: Vec<usize> = (0..n0).map(|v| x.s0(v)).collect();
    let p2 = FiberPower::new(&groupoid, &s, &t, 2);
    // (γ_1, 1)·η = m_0(η, s_0 d_1 η, γ_1), (1, γ_2)·η = m_1(γ_2, η, s_1 d_2 η), η·γ = m_1(η, γ, s_0 d_2 η).
    let act_first = |g: usize, eta: usize| x.mi(0, [eta, x.s1(0, x.d2(1, eta)), bigons.cell[g]]);
    let act_second = |g: usize, eta: usize| x.mi(1, [bigons.cell[g], eta, x.s1(1, x.d2(2, eta))]);
    let multiplication = Bibundle::from_fns(
        p2.groupoid.clone(),
        groupoid.clone(),
        x.x(2).to_vec(),
        (0..n2).map(|eta| p2.o(&[x.d2(2, eta), x.d2(0, eta)])).collect(),
        (0..n2).map(|eta| x.d2(1, eta)).collect(),
        |h, eta| {
            let pair = &p2.arrow_tuples[h];
            act_first(pair[0], act_second(pair[1], eta))
        },
        |eta, g| x.mi(1, [eta, bigons.cell[g], x.s1(0, x.d2(2, eta))]),
    );
    let squares = Triangulation::new(vec![[0, 1, 2], [0, 2, 3]], &multiplication, &p2);
    let mut associator = Associator::new();
    for l in &squares.elements {
        let (x012, x023) = (l[0], l[1]);
        let x013 = (0..n2)
            .find(|&c| x.d2(2, c) == x.d2(2, x012) && x.d2(1, c) == x.d2(1, x023))
            .ok_or("Kan(2,0) fails on a square")?;
        associator.insert([x012, x023], [x.mi(0, [x023, x013, x012]), x013]);
    }
    let left_unitor: Unitor = bigons.cell.iter().enumerate().map(|(a, &eta)| (eta, a)).collect();
    let iso = tilde_bigon_iso(x);
    let right_unitor: Unitor = iso.tilde.cell.iter().enumerate().map(|(z, &eta)| (eta, iso.phi_inverse[z])).collect();
    Ok(StackyGroupoidData {
        groupoid,
        base: x.x(0).to_vec(),
        s,
        t,
        unit,
        multiplication,
        associator,
        left_unitor,
        right_unitor,
        inverse: None,
    })
}

pub fn to_two_groupoid(d: &StackyGroupoidData) -> Result<TwoGroupoidData, String> {
    if let Some(w) = first_failure(&verify_stacky(d)) {
        return Err(w);
    }
    let g = &*d.groupoid;
    let e = &d.multiplication;
    let p2 = d.power(2);
    let unit_of = |unitor: &Unitor, obj: usize| -> Result<usize, String> {
        unitor
            .iter()
            .find(|(_, &a)| a == g.identity[obj])
            .map(|(&eta, _)| eta)
            .ok_or_else(|| format!("no unit element over {}", g.objects[obj]))
    };
    let s10: Vec<usize> = (0..g.n_objects()).map(|o| unit_of(&d.left_unitor, o)).collect::<Result<_, _>>()?;
    let s11: Vec<usize> = (0..g.n_objects()).map(|o| unit_of(&d.right_unitor, o)).collect::<Result<_, _>>()?;
    let edge = |k: usize| (0..e.len()).map(|eta| edges(e, &p2, eta)[k]).collect::<Vec<_>>();
    let layers = TruncatedSimplicialSet::new(
        vec![d.base.clone(), g.objects.clone(), e.carrier.clone()],
        vec![Vec::new(), vec![d.s.clone(), d.t.clone()], vec![edge(1), edge(2), edge(0)]],
        vec![vec![d.unit.clone()], vec![s10, s11], Vec::new()],
    )
    .map_err(|err| err.to_string())?;
    // Layer indices differ from carrier indices after sorting by ID.
    let to_layer: Vec<usize> = e.carrier.iter().map(|c| layers.index_of(2, c).expect("carrier is level 2")).collect();
    let from_layer = crate::groupoid::invert(&to_layer);

    let squares = d.squares(&p2);
    let flipped = d.flipped_squares(&p2);
    let forward = |l: &[usize]| -> Option<&Vec<usize>> {
        let img = d.associator.get(&[l[0], l[1]])?;
        Some(&flipped.classes[flipped.class_of[flipped.element(img)?]])
    };
    let mut backward = vec![usize::MAX; flipped.classes.len()];
    for (i, l) in squares.elements.iter().enumerate() {
        let img = d.associator[&[l[0], l[1]]];
        backward[flipped.class_of[flipped.element(&img).expect("verified associator")]] = squares.class_of[i];
    }
    let backward = |l: &[usize]| -> Option<&Vec<usize>> {
        let c = backward.get(flipped.class_of[flipped.element(l)?]).copied().filter(|&c| c != usize::MAX)?;
        Some(&squares.classes[c])
    };
    let pick = |members: &Vec<usize>, side: &Triangulation, keep: usize, value: usize, read: usize| {
        members.iter().map(|&k| &side.elements[k]).find(|l| l[keep] == value).map(|l| l[read])
    };

    let probe = TwoGroupoidData { layers: layers.clone(), m: Default::default() };
    let mut m: [HornTable; 4] = Default::default();
    for (i, table) in m.iter_mut().enumerate() {
        for triple in horn_triples(&probe, i) {
            let [a, b, c] = triple.map(|y| from_layer[y]);
            let found = match i {
                // (η_1, η_2, η_3): square (η_3, η_1), keep η_013 = η_2, read η_123.
                0 => forward(&[c, a]).and_then(|cls| pick(cls, &flipped, 1, b, 0)),
                // (η_0, η_2, η_3): flipped (η_0, η_2), keep η_012 = η_3, read η_023.
                1 => backward(&[a, b]).and_then(|cls| pick(cls, &squares, 0, c, 1)),
                // (η_0, η_1, η_3): square (η_3, η_1), keep η_123 = η_0, read η_013.
                2 => forward(&[c, b]).and_then(|cls| pick(cls, &flipped, 0, a, 1)),
                // (η_0, η_1, η_2): flipped (η_0, η_2), keep η_023 = η_1, read η_012.
                _ => backward(&[a, c]).and_then(|cls| pick(cls, &squares, 1, b, 0)),
            };
            let Some(y) = found else {
                let names: Vec<&str> = triple.iter().map(|&y| layers.name(2, y)).collect();
                return Err(format!("associator leaves Λ(3,{i}) horn ({}) unfilled", names.join(",")));
            };
            table.insert(triple, to_layer[y]);
        }
    }
    Ok(TwoGroupoidData { layers, m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{FiniteGroup, FiniteGroupoid};
    use crate::stacky::{inverse_bibundle, ordinary_groupoid_stacky, strict_inverse_check};
    use crate::two_groupoid::{crossed_module_fixture, groupoid_two_data, two_groupoid_isomorphism, CrossedModule};

    #[test]
    fn crossed_module_round_trip() {
        let x = crossed_module_fixture(&CrossedModule::klein_trivial()).unwrap();
        let d = from_two_groupoid(&x).unwrap();
        let r = verify_stacky(&d);
        assert!(r.passed(), "{r}");
        assert_eq!(d.groupoid.n_arrows(), 4);
        assert_eq!(d.multiplication.len(), 8);
        assert_eq!(inverse_bibundle(&d).len(), 4);
        assert!(strict_inverse_check(&d).is_some());
        let y = to_two_groupoid(&d).unwrap();
        assert!(verify_two_groupoid(&y).passed());
        assert!(two_groupoid_isomorphism(&x, &y).is_some());
    }

    #[test]
    fn ordinary_groupoid_round_trip() {
        let k = FiniteGroupoid::pair(2);
        let y = to_two_groupoid(&ordinary_groupoid_stacky(&k)).unwrap();
        assert!(two_groupoid_isomorphism(&y, &groupoid_two_data(&k).unwrap()).is_some());
        let back = from_two_groupoid(&y).unwrap();
        assert!(crate::groupoid::groupoid_isomorphism(&back.groupoid, &FiniteGroupoid::discrete(&k.arrows)).is_some());
        let z = groupoid_two_data(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(2))).unwrap();
        assert!(verify_stacky(&from_two_groupoid(&z).unwrap()).passed());
    }
}
