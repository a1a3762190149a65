//! Generators for 2-groupoid data: crossed modules and promoted groupoids.

use super::{nerve::groupoid_nerve, tables_from_predicate, truncate_to_data, TruncationError, TwoGroupoidData};
use crate::groupoid::{FiniteGroup, FiniteGroupoid};
use crate::simplicial::TruncatedSimplicialSet;
use std::collections::HashMap;
use thiserror::Error;

/// `∂: H -> G` with a left action `g ▷ h = action[g][h]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedModule {
    pub g: FiniteGroup,
    pub h: FiniteGroup,
    pub boundary: Vec<usize>,
    pub action: Vec<Vec<usize>>,
}

impl CrossedModule {
    /// Trivial boundary and trivial action.
    pub fn trivial(g: FiniteGroup, h: FiniteGroup) -> Self {
        let boundary = vec![g.identity; h.order()];
        let action = vec![(0..h.order()).collect(); g.order()];
        CrossedModule { g, h, boundary, action }
    }

    /// `(ℤ/2, ℤ/2)` with trivial boundary and action.
    pub fn klein_trivial() -> Self {
        CrossedModule::trivial(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))
    }

    fn act(&self, g: usize, h: usize) -> usize {
        self.action[g][h]
    }

    /// The first violated crossed-module axiom.
    pub fn violation(&self) -> Option<CrossedModuleError> {
        let (g, h) = (&self.g, &self.h);
        if let Some(w) = g.law_violation().or_else(|| h.law_violation()) {
            return Some(CrossedModuleError::Group(w));
        }
        if self.boundary.len() != h.order()
            || self.boundary.iter().any(|&x| x >= g.order())
            || self.action.len() != g.order()
            || self.action.iter().any(|row| row.len() != h.order() || row.iter().any(|&x| x >= h.order()))
        {
            return Some(CrossedModuleError::Shape);
        }
        let (gn, hn) = (&g.names, &h.names);
        for a in 0..h.order() {
            for b in 0..h.order() {
                if self.boundary[h.mul(a, b)] != g.mul(self.boundary[a], self.boundary[b]) {
                    return Some(CrossedModuleError::Homomorphism(format!("∂({}{}) differs from ∂({})∂({})", hn[a], hn[b], hn[a], hn[b])));
                }
            }
        }
        for x in 0..g.order() {
            for a in 0..h.order() {
                for b in 0..h.order() {
                    if self.act(x, h.mul(a, b)) != h.mul(self.act(x, a), self.act(x, b)) {
                        return Some(CrossedModuleError::Action(format!("{} does not act by an automorphism", gn[x])));
                    }
                }
                if self.act(g.identity, a) != a {
                    return Some(CrossedModuleError::Action(format!("identity moves {}", hn[a])));
                }
                for y in 0..g.order() {
                    if self.act(g.mul(x, y), a) != self.act(x, self.act(y, a)) {
                        return Some(CrossedModuleError::Action(format!("({}{})▷{} differs from {}▷({}▷{})", gn[x], gn[y], hn[a], gn[x], gn[y], hn[a])));
                    }
                }
                let conj = g.mul(g.mul(x, self.boundary[a]), g.inv(x));
                if self.boundary[self.act(x, a)] != conj {
                    return Some(CrossedModuleError::Equivariance(format!("∂({}▷{}) differs from {}∂({}){}⁻¹", gn[x], hn[a], gn[x], hn[a], gn[x])));
                }
            }
        }
        for a in 0..h.order() {
            for b in 0..h.order() {
                if self.act(self.boundary[a], b) != h.mul(h.mul(a, b), h.inv(a)) {
                    return Some(CrossedModuleError::Peiffer(format!("∂({})▷{} differs from {}{}{}⁻¹", hn[a], hn[b], hn[a], hn[b], hn[a])));
                }
            }
        }
        None
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CrossedModuleError {
    #[error("group axiom fails: {0}")]
    Group(String),
    #[error("boundary or action table has the wrong shape")]
    Shape,
    #[error("boundary is not a homomorphism: {0}")]
    Homomorphism(String),
    #[error("not a group action by automorphisms: {0}")]
    Action(String),
    #[error("boundary is not equivariant: {0}")]
    Equivariance(String),
    #[error("Peiffer identity fails: {0}")]
    Peiffer(String),
}

/// One vertex, `X_1 = G`, `X_2 = {(g_01, g_12, h)}` with `d_0 = g_12`,
/// `d_1 = ∂(h) g_01 g_12`, `d_2 = g_01`. A tetrahedron is filled iff
/// `h_023 h_012 = h_013 (g_01 ▷ h_123)`.
pub fn crossed_module_fixture(cm: &CrossedModule) -> Result<TwoGroupoidData, CrossedModuleError> {
    if let Some(e) = cm.violation() {
        return Err(e);
    }
    let (g, h) = (&cm.g, &cm.h);
    let mut triples = Vec::new();
    for a in 0..g.order() {
        for b in 0..g.order() {
            for k in 0..h.order() {
                triples.push((a, b, k));
            }
        }
    }
    let cell_name = |&(a, b, k): &(usize, usize, usize)| format!("({},{},{})", g.names[a], g.names[b], h.names[k]);
    let index: HashMap<(usize, usize, usize), usize> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let (e, one) = (g.identity, h.identity);
    let cells = vec![vec!["*".to_string()], g.names.clone(), triples.iter().map(cell_name).collect()];
    let face = vec![
        Vec::new(),
        vec![vec![0; g.order()], vec![0; g.order()]],
        vec![
            triples.iter().map(|t| t.1).collect(),
            triples.iter().map(|&(a, b, k)| g.mul(g.mul(cm.boundary[k], a), b)).collect(),
            triples.iter().map(|t| t.0).collect(),
        ],
    ];
    let degen = vec![
        vec![vec![e]],
        vec![(0..g.order()).map(|x| index[&(e, x, one)]).collect(), (0..g.order()).map(|x| index[&(x, e, one)]).collect()],
        Vec::new(),
    ];
    let layers = TruncatedSimplicialSet::new(cells, face, degen).map_err(|_| CrossedModuleError::Shape)?;
    let by_name: HashMap<String, (usize, usize, usize)> = triples.iter().map(|t| (cell_name(t), *t)).collect();
    let comps: Vec<(usize, usize, usize)> = layers.cells(2).iter().map(|n| by_name[n]).collect();
    let m = tables_from_predicate(&layers, |t| {
        let (g01, _, h012) = comps[t[3]];
        let (h123, h023, h013) = (comps[t[0]].2, comps[t[1]].2, comps[t[2]].2);
        h.mul(h023, h012) == h.mul(h013, cm.act(g01, h123))
    })
    .map_err(CrossedModuleError::Group)?;
    Ok(TwoGroupoidData { layers, m })
}

/// The 2-groupoid data of a groupoid's nerve: `X_2` = composable pairs.
pub fn groupoid_two_data(g: &FiniteGroupoid) -> Result<TwoGroupoidData, TruncationError> {
    truncate_to_data(&groupoid_nerve(g, 3))
}
