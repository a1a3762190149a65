//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

use higher_groupoids::cli::run;
use higher_groupoids::document::{emit, Document, MapDocument};
use higher_groupoids::equivalence::{
    fiber_product_two_groupoid, is_equivalence, is_one_equivalence, pullback_two_groupoid, strict_inverse,
    strict_sections, PullbackInput, StrictTwoGroupoidMap,
};
use higher_groupoids::groupoid::{
    bibundle_morphism_search, compose_bibundles, groupoid_isomorphism, identity_bibundle, is_biprincipal,
    pullback_groupoid, Bibundle, FiniteGroup, FiniteGroupoid,
};
use higher_groupoids::simplicial::{check_kan, verify_n_groupoid, KanOutcome};
use higher_groupoids::stacky::{
    from_two_groupoid, inverse_bibundle, ordinary_groupoid_stacky, to_two_groupoid, unit_restriction, verify_stacky,
    StackyGroupoidData,
};
use higher_groupoids::two_groupoid::{
    cech_fixture, crossed_module_fixture, groupoid_nerve, groupoid_two_data, nerve2, truncate_to_data,
    two_groupoid_isomorphism, verify_two_groupoid, CrossedModule, TwoGroupoidData,
};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn klein() -> TwoGroupoidData {
    crossed_module_fixture(&CrossedModule::klein_trivial()).unwrap()
}

fn two_groupoid_fixtures() -> Vec<(&'static str, TwoGroupoidData)> {
    let mut boundary_id = CrossedModule::klein_trivial();
    boundary_id.boundary = vec![0, 1];
    vec![
        ("point", crossed_module_fixture(&CrossedModule::trivial(FiniteGroup::trivial(), FiniteGroup::trivial())).unwrap()),
        ("xmod(Z2,Z2)", klein()),
        ("xmod(Z2,Z2,id)", crossed_module_fixture(&boundary_id).unwrap()),
        ("xmod(Z3,Z2)", crossed_module_fixture(&CrossedModule::trivial(FiniteGroup::cyclic(3), FiniteGroup::cyclic(2))).unwrap()),
        ("promoted pair(2)", groupoid_two_data(&FiniteGroupoid::pair(2)).unwrap()),
        ("promoted Z3", groupoid_two_data(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(3))).unwrap()),
    ]
}

fn ordinary_fixtures() -> Vec<(&'static str, FiniteGroupoid)> {
    vec![
        ("pair(2)", FiniteGroupoid::pair(2)),
        ("pair(3)", FiniteGroupoid::pair(3)),
        ("Z2", FiniteGroupoid::from_group(&FiniteGroup::cyclic(2))),
        ("Z3", FiniteGroupoid::from_group(&FiniteGroup::cyclic(3))),
    ]
}

/// Repeats each edge `k[e]` times over the same vertices.
fn refinement(x: &TwoGroupoidData, k: &[usize]) -> PullbackInput {
    let copies: Vec<(usize, usize)> = k.iter().enumerate().flat_map(|(e, &m)| (0..m).map(move |j| (e, j))).collect();
    PullbackInput {
        z0: x.x(0).to_vec(),
        z1: copies.iter().map(|&(e, j)| format!("{}~{j}", x.x(1)[e])).collect(),
        f0: (0..x.x(0).len()).collect(),
        f1: copies.iter().map(|c| c.0).collect(),
        d0: copies.iter().map(|&(e, _)| x.d1(0, e)).collect(),
        d1: copies.iter().map(|&(e, _)| x.d1(1, e)).collect(),
        s0: None,
    }
}

fn nerve_laws() -> Outcome {
    let strings = |alphabet: usize, len: usize| (0..len).fold(1usize, |acc, _| acc * alphabet);
    let cases = [
        ("Z2", FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)), (0..=4).map(|n| strings(2, n)).collect::<Vec<_>>()),
        ("Z3", FiniteGroupoid::from_group(&FiniteGroup::cyclic(3)), (0..=4).map(|n| strings(3, n)).collect()),
        ("pair(3)", FiniteGroupoid::pair(3), (0..=4).map(|n| strings(3, n + 1)).collect()),
    ];
    for (name, g, expected) in cases {
        let x = groupoid_nerve(&g, 4);
        ensure(x.level_sizes() == expected, || format!("{name}: sizes {:?}, closed form {expected:?}", x.level_sizes()))?;
        let r = verify_n_groupoid(&x, 1, 4).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{name}: {}", r.first_failure().unwrap().law))?;
        for m in 2..=4 {
            for j in 0..=m {
                let k = check_kan(&x, m, j).map_err(|e| e.to_string())?;
                ensure(k == KanOutcome::HoldsUniquely, || format!("{name}: Kan({m},{j}) is {k:?}"))?;
            }
        }
    }
    Ok("Z2, Z3, pair(3) nerves match |G|^n and k^(n+1); unique fillers in dimensions 2..4".into())
}

fn two_groupoid_axioms() -> Outcome {
    let x = klein();
    let r = verify_two_groupoid(&x);
    ensure(r.passed(), || r.to_string())?;
    let n = nerve2(&x, 4)?;
    let k = verify_n_groupoid(&n, 2, 4).map_err(|e| e.to_string())?;
    ensure(k.passed(), || k.to_string())?;
    ensure(truncate_to_data(&n).map_err(|e| e.to_string())? == x, || "truncation differs from the data".into())?;
    Ok(format!("xmod(Z2,Z2) verifies; nerve sizes {:?} form a 2-groupoid; truncation returns the data", n.level_sizes()))
}

fn correspondence() -> Outcome {
    let fixtures = two_groupoid_fixtures();
    for (name, x) in &fixtures {
        let d = from_two_groupoid(x).map_err(|e| format!("{name}: {e}"))?;
        let back = to_two_groupoid(&d).map_err(|e| format!("{name}: {e}"))?;
        ensure(two_groupoid_isomorphism(x, &back).is_some(), || format!("{name}: no strict isomorphism back"))?;
    }
    let ordinary = ordinary_fixtures();
    for (name, k) in &ordinary {
        let packaged = ordinary_groupoid_stacky(k);
        let x = to_two_groupoid(&packaged).map_err(|e| format!("{name}: {e}"))?;
        ensure(two_groupoid_isomorphism(&x, &groupoid_two_data(k).unwrap()).is_some(), || format!("{name}: not the promoted groupoid"))?;
        let again = from_two_groupoid(&x).map_err(|e| format!("{name}: {e}"))?;
        ensure(groupoid_isomorphism(&again.groupoid, &packaged.groupoid).is_some(), || format!("{name}: presenting groupoid changed"))?;
        ensure(again.base.len() == k.n_objects() && again.multiplication.len() == packaged.multiplication.len(), || {
            format!("{name}: base or composable pairs changed")
        })?;
    }
    Ok(format!("{} 2-groupoid fixtures and {} ordinary groupoids round-trip up to isomorphism", fixtures.len(), ordinary.len()))
}

fn stacky_fixtures() -> Result<Vec<(String, StackyGroupoidData)>, String> {
    let mut out = Vec::new();
    for (name, x) in two_groupoid_fixtures() {
        out.push((name.to_string(), from_two_groupoid(&x)?));
    }
    for (name, k) in ordinary_fixtures() {
        out.push((format!("ordinary {name}"), ordinary_groupoid_stacky(&k)));
    }
    Ok(out)
}

fn inverse_elimination() -> Outcome {
    let mut supplied = 0;
    let fixtures = stacky_fixtures()?;
    for (name, d) in &fixtures {
        let r = verify_stacky(d);
        ensure(r.passed(), || format!("{name}: {}", r.first_failure().unwrap().law))?;
        let inv = inverse_bibundle(d);
        ensure(is_biprincipal(&inv), || format!("{name}: derived inverse is not biprincipal"))?;
        if let Some(e_i) = &d.inverse {
            supplied += 1;
            let m = bibundle_morphism_search(&inv, e_i).ok_or_else(|| format!("{name}: no morphism to the supplied inverse"))?;
            ensure(m.is_bijective(e_i.len()), || format!("{name}: morphism is not a bijection"))?;
        }
    }
    Ok(format!("{} derived inverses biprincipal; {supplied} match the supplied inverse", fixtures.len()))
}

fn equivalences() -> Outcome {
    let pts: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
    let cover = vec![vec!["a".to_string(), "b".to_string()], vec!["b".to_string(), "c".to_string()]];
    let c = cech_fixture(&pts, &cover, 2).map_err(|e| e.to_string())?;
    ensure(is_equivalence(&c.projection, 1).passed(), || "Čech projection is not an equivalence".into())?;
    ensure(!strict_sections(&c.projection).is_empty(), || "Čech projection has no section".into())?;
    ensure(strict_inverse(&c.projection).is_none(), || "Čech projection has a strict inverse".into())?;

    let z2 = groupoid_two_data(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(2))).unwrap();
    let x = klein();
    let mut pulled = Vec::new();
    for (name, base) in [("xmod(Z2,Z2)", &x), ("promoted Z2", &z2)] {
        let k = vec![2; base.x(1).len()];
        let (z, f) = pullback_two_groupoid(base, &refinement(base, &k))?;
        ensure(verify_two_groupoid(&z).passed(), || format!("{name}: pull-back fails verification"))?;
        ensure(f.verify().passed(), || format!("{name}: projection is not a strict map"))?;
        ensure(is_one_equivalence(&f.as_simplicial(), 2).passed(), || format!("{name}: projection is not a 1-equivalence"))?;
        pulled.push((name, base, z, f));
    }
    for (name, base, _, f) in &pulled {
        let fp = fiber_product_two_groupoid(f, &StrictTwoGroupoidMap::identity(base))?;
        ensure(verify_two_groupoid(&fp.product).passed(), || format!("{name}: fiber product fails verification"))?;
        for leg in [&fp.left, &fp.right] {
            ensure(leg.verify().passed() && is_equivalence(&leg.as_simplicial(), 2).passed(), || {
                format!("{name}: a fiber-product projection is not an equivalence")
            })?;
        }
    }
    // Two distinct pull-backs of the small base, and their composite with a further refinement.
    let (_, _, z, f) = &pulled[1];
    let (_, f_one) = pullback_two_groupoid(&z2, &refinement(&z2, &[1, 2]))?;
    let fp = fiber_product_two_groupoid(f, &f_one)?;
    ensure(verify_two_groupoid(&fp.product).passed(), || "fiber product of two pull-backs fails verification".into())?;
    ensure(fp.left.verify().passed() && fp.right.verify().passed(), || "fiber-product projections are not strict maps".into())?;
    ensure(is_equivalence(&fp.left.as_simplicial(), 2).passed() && is_equivalence(&fp.right.as_simplicial(), 2).passed(), || {
        "fiber-product projections are not equivalences".into()
    })?;
    let mut k = vec![1; z.x(1).len()];
    k[0] = 2;
    let (_, g) = pullback_two_groupoid(z, &refinement(z, &k))?;
    let composite = g.then(f);
    ensure(composite.verify().passed() && is_equivalence(&composite.as_simplicial(), 2).passed(), || {
        "composite of equivalences is not an equivalence".into()
    })?;
    Ok(format!(
        "Čech projection: equivalence with {} sections and no inverse; pull-backs with |Z2| = {} and {}; fiber products and composites verified",
        strict_sections(&c.projection).len(),
        pulled[0].2.x(2).len(),
        pulled[1].2.x(2).len()
    ))
}

fn representative_independence() -> Outcome {
    let fixtures = two_groupoid_fixtures();
    for (name, x) in &fixtures {
        let forward = to_two_groupoid(&from_two_groupoid(x)?)?;
        let backward = to_two_groupoid(&from_two_groupoid(&x.reversed())?)?;
        ensure(two_groupoid_isomorphism(&forward, &backward).is_some(), || format!("{name}: reversed order changes the result"))?;
    }
    let mut bibundles: Vec<(String, Bibundle, Bibundle)> = Vec::new();
    for (name, k) in ordinary_fixtures() {
        let g = Arc::new(k);
        let over: Vec<usize> = (0..g.n_objects()).chain([0]).collect();
        let names: Vec<String> = (0..over.len()).map(|i| format!("s{i}")).collect();
        let e = pullback_groupoid(&g, &names, &over).bibundle;
        bibundles.push((format!("{name}: pull-back then identity"), e.clone(), identity_bibundle(g.clone())));
        let d = ordinary_groupoid_stacky(&g);
        let inv = inverse_bibundle(&d);
        bibundles.push((format!("{name}: inverse twice"), inv.clone(), inv));
    }
    let d = from_two_groupoid(&klein())?;
    let (restricted, _) = unit_restriction(&d, &d.power(2), 0);
    let inv = inverse_bibundle(&d);
    bibundles.push(("xmod(Z2,Z2): unit leg then inverse".into(), restricted, inv));
    for (name, e, f) in &bibundles {
        let plain = compose_bibundles(e, f)?;
        let reversed = compose_bibundles(&e.reversed(), &f.reversed())?;
        ensure(bibundle_morphism_search(&plain, &reversed).is_some(), || format!("{name}: composites differ"))?;
    }
    Ok(format!("{} from_two_groupoid runs and {} compositions agree under reversed order", fixtures.len(), bibundles.len()))
}

/// `check` on a perturbed document: exit 1 and a FAIL line with anchor and witness.
fn cli_rejects(label: &str, doc: Document) -> Result<String, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = ["hgpd", "check", "-"].map(String::from);
    let code = run(args, &mut emit(&doc).as_bytes(), &mut out, &mut err);
    let out = String::from_utf8(out).unwrap();
    ensure(code == 1, || format!("{label}: exit code {code}"))?;
    let fail = out.lines().find(|l| l.trim_start().starts_with("FAIL")).ok_or_else(|| format!("{label}: no FAIL line"))?;
    ensure(fail.contains('[') && fail.contains("witness: "), || format!("{label}: FAIL line lacks anchor or witness"))?;
    let anchor = fail.split('[').nth(1).and_then(|s| s.split(']').next()).unwrap_or("");
    Ok(format!("{label} -> {anchor}"))
}

fn negative_controls() -> Outcome {
    let mut seen = Vec::new();

    let mut nerve = groupoid_nerve(&FiniteGroupoid::pair(3), 2);
    let c = nerve.len(2) - 1;
    let edges = nerve.len(1);
    let t = nerve.face_table_mut(2, 0);
    t[c] = (t[c] + 1) % edges;
    seen.push(cli_rejects("simplicial", Document::Simplicial(nerve))?);

    let mut g = FiniteGroupoid::pair(2);
    let slot = g.compose.iter().position(Option::is_some).unwrap();
    let was = g.compose[slot].unwrap();
    g.compose[slot] = Some((0..g.n_arrows()).find(|&a| a != was && g.source[a] == g.source[was] && g.target[a] == g.target[was]).unwrap_or((was + 1) % g.n_arrows()));
    seen.push(cli_rejects("groupoid", Document::Groupoid(g))?);

    let mut e = identity_bibundle(Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2))));
    let slot = e.left_act.iter().position(Option::is_some).unwrap();
    e.left_act[slot] = e.left_act[slot].map(|y| (y + 1) % 2);
    seen.push(cli_rejects("bibundle", Document::Bibundle(e))?);

    let mut x = klein();
    let (&key, &val) = x.m[0].iter().next().unwrap();
    x.m[0].insert(key, (val + 1) % x.x(2).len());
    seen.push(cli_rejects("2-groupoid", Document::TwoGroupoid(x))?);

    let mut d = ordinary_groupoid_stacky(&FiniteGroupoid::pair(2));
    let keys: Vec<[usize; 2]> = d.associator.keys().copied().collect();
    let (a, b) = (d.associator[&keys[0]], d.associator[&keys[1]]);
    d.associator.insert(keys[0], b);
    d.associator.insert(keys[1], a);
    seen.push(cli_rejects("stacky", Document::Stacky(Box::new(d)))?);

    let mut f = StrictTwoGroupoidMap::identity(&klein());
    f.f2[0] = (f.f2[0] + 1) % f.f2.len();
    seen.push(cli_rejects("2-groupoid map", Document::Map(MapDocument::TwoGroupoid(f)))?);

    Ok(seen.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("nerve laws", nerve_laws),
        ("2-groupoid axioms", two_groupoid_axioms),
        ("correspondence round trip", correspondence),
        ("inverse elimination", inverse_elimination),
        ("equivalence machinery", equivalences),
        ("representative independence", representative_independence),
        ("negative controls", negative_controls),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}. {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
