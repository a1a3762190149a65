//! Nerves of 2-groupoid data and of groupoids, truncation, and Čech nerves.

use super::{horn_of, horn_triples, verify_two_groupoid, HornTable, TwoGroupoidData};
use crate::groupoid::FiniteGroupoid;
use crate::simplicial::{coskeleton, SimplicialError, SimplicialMap, TruncatedSimplicialSet};
use thiserror::Error;

/// The 3-coskeletal nerve up to level `top`.
///
/// Level 3 holds the tetrahedron boundaries with `η_0 = m_0(η_1, η_2, η_3)`;
/// higher levels are all compatible families of those.
pub fn nerve2(data: &TwoGroupoidData, top: usize) -> Result<TruncatedSimplicialSet, String> {
    let report = verify_two_groupoid(data);
    if let Some(c) = report.first_failure() {
        return Err(format!("input fails {}: {}", c.law, c.witness.as_deref().unwrap_or("")));
    }
    if top <= 2 {
        return data.layers.truncate(top).map_err(|e| e.to_string());
    }
    let boundaries = coskeleton(&data.layers, 2, 3).map_err(|e| e.to_string())?;
    let keep: Vec<Vec<bool>> = (0..=3)
        .map(|n| {
            (0..boundaries.len(n))
                .map(|c| {
                    n < 3 || {
                        let t = [0, 1, 2, 3].map(|i| boundaries.face(3, i, c));
                        data.mult(0, horn_of(0, t)) == Some(t[0])
                    }
                })
                .collect()
        })
        .collect();
    let (x3, _) = boundaries.subcomplex(&keep).map_err(|e| e.to_string())?;
    coskeleton(&x3, 3, top).map_err(|e| e.to_string())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TruncationError {
    #[error("need levels up to 3, found {0}")]
    TooShort(usize),
    #[error("Kan({m},{j}) fails: horn {horn} has no filler")]
    NoFiller { m: usize, j: usize, horn: String },
    #[error("Kan!({m},{j}) fails: horn {horn} has fillers {first} and {second}")]
    ManyFillers { m: usize, j: usize, horn: String, first: String, second: String },
}

/// Levels 0..=2 of `x`, with `m_i` read off the unique fillers of `Λ[3,i]`.
pub fn truncate_to_data(x: &TruncatedSimplicialSet) -> Result<TwoGroupoidData, TruncationError> {
    if x.top() < 3 {
        return Err(TruncationError::TooShort(x.top()));
    }
    let layers = x.truncate(2).expect("level 2 exists");
    let probe = TwoGroupoidData { layers: layers.clone(), m: Default::default() };
    let mut m: [HornTable; 4] = Default::default();
    for (i, table) in m.iter_mut().enumerate() {
        let mut filler_of: HornTable = HornTable::new();
        for c in 0..x.len(3) {
            let t = [0, 1, 2, 3].map(|k| x.face(3, k, c));
            let key = horn_of(i, t);
            if let Some(&prev) = filler_of.get(&key) {
                if prev != c {
                    let names: Vec<&str> = key.iter().map(|&y| x.name(2, y)).collect();
                    return Err(TruncationError::ManyFillers {
                        m: 3,
                        j: i,
                        horn: format!("({})", names.join(",")),
                        first: x.name(3, prev).to_string(),
                        second: x.name(3, c).to_string(),
                    });
                }
            }
            filler_of.insert(key, c);
        }
        for triple in horn_triples(&probe, i) {
            let Some(&c) = filler_of.get(&triple) else {
                let names: Vec<&str> = triple.iter().map(|&y| x.name(2, y)).collect();
                return Err(TruncationError::NoFiller { m: 3, j: i, horn: format!("({})", names.join(",")) });
            };
            table.insert(triple, x.face(3, i, c));
        }
    }
    Ok(TwoGroupoidData { layers, m })
}

/// Composable strings `(g_01, .., g_{n-1,n})` with `g_{i,i+1}: x_{i+1} -> x_i`.
///
/// Level 0 is named by objects, level 1 by arrows, higher levels `(a,b,..)`.
pub fn groupoid_nerve(g: &FiniteGroupoid, top: usize) -> TruncatedSimplicialSet {
    let mut strings: Vec<Vec<Vec<usize>>> = vec![(0..g.n_objects()).map(|x| vec![x]).collect()];
    strings.push((0..g.n_arrows()).map(|a| vec![a]).collect());
    for n in 2..=top {
        let mut level = Vec::new();
        for s in &strings[n - 1] {
            let last = *s.last().unwrap();
            for a in 0..g.n_arrows() {
                if g.target[a] == g.source[last] {
                    let mut t = s.clone();
                    t.push(a);
                    level.push(t);
                }
            }
        }
        strings.push(level);
    }
    strings.truncate(top + 1);
    let name = |n: usize, s: &Vec<usize>| match n {
        0 => g.objects[s[0]].clone(),
        1 => g.arrows[s[0]].clone(),
        _ => format!("({})", s.iter().map(|&a| g.arrows[a].as_str()).collect::<Vec<_>>().join(",")),
    };
    let lookup: Vec<std::collections::HashMap<Vec<usize>, usize>> = strings
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    let face = |n: usize, i: usize, s: &Vec<usize>| -> usize {
        if n == 1 {
            // d0 keeps vertex 1 (the source), d1 keeps vertex 0 (the target).
            return if i == 0 { g.source[s[0]] } else { g.target[s[0]] };
        }
        let mut t = s.clone();
        if i == 0 {
            t.remove(0);
        } else if i == n {
            t.pop();
        } else {
            let c = g.c(t[i - 1], t[i]);
            t.splice(i - 1..=i, [c]);
        }
        lookup[n - 1][&t]
    };
    let degen = |n: usize, i: usize, s: &Vec<usize>| -> usize {
        if n == 0 {
            return lookup[1][&vec![g.identity[s[0]]]];
        }
        // Vertex i of the string is the target of g_{i,i+1}, or the source of the last arrow.
        let v = if i < n { g.target[s[i]] } else { g.source[s[n - 1]] };
        let mut t = s.clone();
        t.insert(i, g.identity[v]);
        lookup[n + 1][&t]
    };
    let cells = strings.iter().enumerate().map(|(n, level)| level.iter().map(|s| name(n, s)).collect()).collect();
    let faces = (0..=top)
        .map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| strings[n].iter().map(|s| face(n, i, s)).collect()).collect() })
        .collect();
    let degens = (0..=top)
        .map(|n| if n == top { Vec::new() } else { (0..=n).map(|i| strings[n].iter().map(|s| degen(n, i, s)).collect()).collect() })
        .collect();
    TruncatedSimplicialSet::new(cells, faces, degens).expect("nerve tables are well formed")
}

/// The Čech nerve of a cover together with its projection to the base.
#[derive(Clone, Debug)]
pub struct CechFixture {
    pub nerve: TruncatedSimplicialSet,
    pub projection: SimplicialMap,
}

/// `X_n = ⊔ U_{α_0} ∩ .. ∩ U_{α_n}` over ordered chart tuples, cells named `x@α_0.α_1..`.
pub fn cech_fixture(points: &[String], cover: &[Vec<String>], top: usize) -> Result<CechFixture, SimplicialError> {
    if let Some(p) = points.iter().find(|p| !cover.iter().any(|u| u.contains(p))) {
        return Err(SimplicialError::Shape(format!("cover misses {p}")));
    }
    if let Some(p) = cover.iter().flatten().find(|p| !points.contains(p)) {
        return Err(SimplicialError::Shape(format!("chart contains unknown point {p}")));
    }
    let k = cover.len();
    // Cells as (point, chart tuple).
    let mut levels: Vec<Vec<(usize, Vec<usize>)>> = Vec::new();
    for n in 0..=top {
        let mut level = Vec::new();
        for (p, name) in points.iter().enumerate() {
            for tuple in all_tuples(k, n + 1) {
                if tuple.iter().all(|&a| cover[a].contains(name)) {
                    level.push((p, tuple));
                }
            }
        }
        levels.push(level);
    }
    let index = |n: usize, cell: &(usize, Vec<usize>)| levels[n].iter().position(|c| c == cell).unwrap();
    let cells = levels
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|(p, t)| {
                    let charts: Vec<String> = t.iter().map(|a| a.to_string()).collect();
                    format!("{}@{}", points[*p], charts.join("."))
                })
                .collect()
        })
        .collect();
    let face = (0..=top)
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..=n)
                .map(|i| {
                    levels[n]
                        .iter()
                        .map(|(p, t)| {
                            let mut t = t.clone();
                            t.remove(i);
                            index(n - 1, &(*p, t))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let degen = (0..=top)
        .map(|n| {
            if n == top {
                return Vec::new();
            }
            (0..=n)
                .map(|i| {
                    levels[n]
                        .iter()
                        .map(|(p, t)| {
                            let mut t = t.clone();
                            t.insert(i, t[i]);
                            index(n + 1, &(*p, t))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let nerve = TruncatedSimplicialSet::new(cells, face, degen)?;
    let base = TruncatedSimplicialSet::constant(points, top);
    let level_map = (0..=top)
        .map(|n| {
            (0..nerve.len(n))
                .map(|c| {
                    let point = nerve.name(n, c).split('@').next().unwrap();
                    base.index_of(n, point).unwrap()
                })
                .collect()
        })
        .collect();
    Ok(CechFixture { projection: SimplicialMap { source: nerve.clone(), target: base, level_map }, nerve })
}

/// All sequences of length `len` over `0..k`, lexicographically.
fn all_tuples(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..k).map(move |a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::FiniteGroup;
    use crate::simplicial::verify_n_groupoid;

    #[test]
    fn group_nerve_sizes() {
        let x = groupoid_nerve(&FiniteGroupoid::from_group(&FiniteGroup::cyclic(3)), 3);
        assert_eq!(x.level_sizes(), vec![1, 3, 9, 27]);
        assert!(x.verify().passed());
        assert!(verify_n_groupoid(&x, 1, 3).unwrap().passed());
    }

    #[test]
    fn cech_of_single_chart_is_constant() {
        let pts: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let c = cech_fixture(&pts, &[pts.clone()], 2).unwrap();
        assert_eq!(c.nerve.level_sizes(), vec![2, 2, 2]);
        assert!(c.projection.verify().passed());
    }

    #[test]
    fn cech_requires_a_cover() {
        let pts: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        assert!(cech_fixture(&pts, &[vec!["a".into()]], 2).is_err());
    }
}
