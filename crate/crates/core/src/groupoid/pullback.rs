//! Pull-back groupoids along maps into the object set.

use super::{bibundle_morphism_search, verify_bibundle, Bibundle, FiniteGroupoid};
use crate::report::Report;
use std::sync::Arc;

/// `f^* G` together with the bibundle `f^* G -> G` induced by `f`.
#[derive(Clone, Debug)]
pub struct PullbackGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    /// Bibundle `{(x, g) : target(g) = f(x)}` with `j_l = x`, `j_r = source(g)`.
    pub bibundle: Bibundle,
    /// Objects of `G` outside the saturation of the image of `f`.
    pub unreached: Vec<usize>,
}

impl PullbackGroupoid {
    /// Morita equivalence holds iff `f` is essentially surjective.
    pub fn essentially_surjective(&self) -> bool {
        self.unreached.is_empty()
    }
}

/// Arrows `(x, γ, y): y -> x` with `γ: f(y) -> f(x)`.
pub fn pullback_groupoid(g: &Arc<FiniteGroupoid>, objects: &[String], f: &[usize]) -> PullbackGroupoid {
    assert_eq!(objects.len(), f.len(), "map must be total");
    let mut arrows = Vec::new();
    let mut triples = Vec::new();
    for x in 0..objects.len() {
        for y in 0..objects.len() {
            for a in 0..g.n_arrows() {
                if g.source[a] == f[y] && g.target[a] == f[x] {
                    arrows.push(format!("({},{},{})", objects[x], g.arrows[a], objects[y]));
                    triples.push((x, a, y));
                }
            }
        }
    }
    let index = |x: usize, a: usize, y: usize| triples.iter().position(|&t| t == (x, a, y)).unwrap();
    let identity = (0..objects.len()).map(|x| index(x, g.identity[f[x]], x)).collect();
    let inverse = triples.iter().map(|&(x, a, y)| index(y, g.inverse[a], x)).collect();
    let pulled = Arc::new(FiniteGroupoid::from_parts(
        objects.to_vec(),
        arrows,
        triples.iter().map(|t| t.2).collect(),
        triples.iter().map(|t| t.0).collect(),
        identity,
        inverse,
        |p, q| {
            let ((x, a, _), (_, b, z)) = (triples[p], triples[q]);
            index(x, g.c(a, b), z)
        },
    ));

    let mut carrier = Vec::new();
    let mut cells = Vec::new();
    for x in 0..objects.len() {
        for a in 0..g.n_arrows() {
            if g.target[a] == f[x] {
                carrier.push(format!("({},{})", objects[x], g.arrows[a]));
                cells.push((x, a));
            }
        }
    }
    let cell = |x: usize, a: usize| cells.iter().position(|&c| c == (x, a)).unwrap();
    let bibundle = Bibundle::from_fns(
        pulled.clone(),
        g.clone(),
        carrier,
        cells.iter().map(|c| c.0).collect(),
        cells.iter().map(|c| g.source[c.1]).collect(),
        |h, e| {
            let ((x, b, _), (_, a)) = (triples[h], cells[e]);
            cell(x, g.c(b, a))
        },
        |e, k| {
            let (x, a) = cells[e];
            cell(x, g.c(a, k))
        },
    );
    let reached: Vec<bool> = (0..g.n_objects())
        .map(|o| (0..g.n_arrows()).any(|a| g.source[a] == o && f.contains(&g.target[a])))
        .collect();
    PullbackGroupoid {
        groupoid: pulled,
        bibundle,
        unreached: (0..g.n_objects()).filter(|&o| !reached[o]).collect(),
    }
}

/// `G'` containing `G` as a full subgroupoid and `M` via a strict unit `e`.
#[derive(Clone, Debug)]
pub struct StrictUnitExtension {
    pub pullback: PullbackGroupoid,
    /// `unit[m]` is the object of `G'` standing for `m`.
    pub unit: Vec<usize>,
    /// Checks that the extension reproduces the given unit bibundle.
    pub report: Report,
}

/// Adjoins the points of `M` to `G` along a unit bibundle `E: M -> G`.
///
/// New objects keep the names of their points, primed on a clash.
///
/// `M` is the discrete groupoid on the base; each point is glued to
/// `j_r` of its least `E`-element.
pub fn adjoin_strict_unit(g: &Arc<FiniteGroupoid>, e: &Bibundle) -> Result<StrictUnitExtension, String> {
    let m = &*e.left;
    if m.n_arrows() != m.n_objects() {
        return Err("unit bibundle must start at a discrete groupoid".into());
    }
    if *e.right != **g {
        return Err("unit bibundle does not land in the given groupoid".into());
    }
    let base = verify_bibundle(e);
    if !base.passed() {
        return Err(format!("unit bibundle is malformed: {}", base.first_failure().unwrap().law));
    }
    let mut objects = g.objects.clone();
    let mut f: Vec<usize> = (0..g.n_objects()).collect();
    let mut unit = Vec::new();
    for p in 0..m.n_objects() {
        let least = (0..e.len()).find(|&x| e.j_l[x] == p).ok_or("unit bibundle has an empty fiber")?;
        let mut name = m.objects[p].clone();
        while objects.contains(&name) {
            name.push('\'');
        }
        unit.push(objects.len());
        objects.push(name);
        f.push(e.j_r[least]);
    }
    let pullback = pullback_groupoid(g, &objects, &f);

    // Restricting the induced bibundle to the adjoined points recovers E.
    let restricted: Vec<usize> =
        (0..pullback.bibundle.len()).filter(|&x| unit.contains(&pullback.bibundle.j_l[x])).collect();
    let pos = |x: usize| restricted.iter().position(|&y| y == x).unwrap();
    let point_of = |o: usize| unit.iter().position(|&u| u == o).unwrap();
    let b = &pullback.bibundle;
    let rebuilt = Bibundle::from_fns(
        e.left.clone(),
        g.clone(),
        restricted.iter().map(|&x| b.carrier[x].clone()).collect(),
        restricted.iter().map(|&x| point_of(b.j_l[x])).collect(),
        restricted.iter().map(|&x| b.j_r[x]).collect(),
        |_, x| x,
        |x, k| pos(b.r(restricted[x], k)),
    );
    let mut report = Report::new("strict unit extension");
    report.record(
        "G is a full subgroupoid",
        "unit-extension.full",
        (!(0..g.n_objects()).all(|o| f[o] == o)).then(|| "object map moved".to_string()),
    );
    report.record(
        "induced bibundle is a Morita equivalence",
        "unit-extension.morita",
        (!super::is_biprincipal(&pullback.bibundle)).then(|| "induced bibundle is not biprincipal".to_string()),
    );
    let iso = bibundle_morphism_search(&rebuilt, e).filter(|m| m.is_bijective(e.len()));
    report.record(
        "restriction to the unit recovers E",
        "unit-extension.restriction",
        iso.is_none().then(|| "no isomorphism with the given unit bibundle".to_string()),
    );
    Ok(StrictUnitExtension { pullback, unit, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{groupoid_isomorphism, is_biprincipal, verify_groupoid, FiniteGroup};

    #[test]
    fn pulling_back_along_a_surjection_is_morita() {
        let g = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
        let objs = vec!["a".to_string(), "b".to_string()];
        let pb = pullback_groupoid(&g, &objs, &[0, 0]);
        assert!(verify_groupoid(&pb.groupoid).passed());
        assert_eq!(pb.groupoid.n_arrows(), 8);
        assert!(verify_bibundle(&pb.bibundle).passed());
        assert!(is_biprincipal(&pb.bibundle));
        assert!(pb.essentially_surjective());
    }

    #[test]
    fn missing_component_is_reported() {
        let g = Arc::new(FiniteGroupoid::discrete(&["u".into(), "v".into()]));
        let pb = pullback_groupoid(&g, &["a".into()], &[0]);
        assert_eq!(pb.unreached, vec![1]);
        assert!(!is_biprincipal(&pb.bibundle));
    }

    #[test]
    fn adjoining_a_unit_keeps_the_original_groupoid() {
        let g = Arc::new(FiniteGroupoid::pair(2));
        let m = Arc::new(FiniteGroupoid::discrete(&["m".into()]));
        // E = arrows into p1, with M acting trivially.
        let arrows: Vec<usize> = (0..g.n_arrows()).filter(|&a| g.target[a] == 1).collect();
        let e = Bibundle::from_fns(
            m,
            g.clone(),
            arrows.iter().map(|&a| g.arrows[a].clone()).collect(),
            vec![0; arrows.len()],
            arrows.iter().map(|&a| g.source[a]).collect(),
            |_, x| x,
            |x, k| arrows.iter().position(|&a| a == g.c(arrows[x], k)).unwrap(),
        );
        let ext = adjoin_strict_unit(&g, &e).unwrap();
        assert!(ext.report.passed(), "{}", ext.report);
        assert_eq!(ext.pullback.groupoid.n_objects(), 3);
        assert!(groupoid_isomorphism(&ext.pullback.groupoid, &FiniteGroupoid::pair(3)).is_some());
    }
}
