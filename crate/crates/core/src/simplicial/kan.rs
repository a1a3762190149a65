//! Kan horn-filling conditions and the n-groupoid check.

use super::{enumerate_hom, horn_complex, simplex_values, SimplicialError, TruncatedSimplicialSet};
use crate::report::Report;
use std::collections::HashMap;
use std::fmt;

/// Outcome of comparing `X_m` with `hom(Λ[m,j], X)` under restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KanOutcome {
    /// Restriction is a bijection.
    HoldsUniquely,
    /// Surjective but not injective; `collision` names two cells with equal horns.
    Holds { collision: (String, String) },
    /// Some horn has no filler; `horn` lists its non-degenerate assignments.
    Fails { horn: String },
}

impl KanOutcome {
    pub fn holds(&self) -> bool {
        !matches!(self, KanOutcome::Fails { .. })
    }

    pub fn unique(&self) -> bool {
        matches!(self, KanOutcome::HoldsUniquely)
    }
}

impl fmt::Display for KanOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KanOutcome::HoldsUniquely => write!(f, "HOLDS_UNIQUELY"),
            KanOutcome::Holds { collision } => {
                write!(f, "HOLDS (fillers {} and {} share a horn)", collision.0, collision.1)
            }
            KanOutcome::Fails { horn } => write!(f, "FAILS (unfilled horn {horn})"),
        }
    }
}

/// Tests `Kan(m, j)` on `x`; requires `m <= N`.
pub fn check_kan(x: &TruncatedSimplicialSet, m: usize, j: usize) -> Result<KanOutcome, SimplicialError> {
    if m > x.top() {
        return Err(SimplicialError::Level { level: m, top: x.top() });
    }
    let (horn, inclusion) = horn_complex(m, j, x.top())?;
    let values = simplex_values(m, x.top());
    // Non-degenerate horn cells and their value sequences in Δ[m].
    let mut horn_cells: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for n in 0..m {
        for c in horn.nondegenerate_cells(n) {
            horn_cells.push((n, c, values[n][inclusion.level_map[n][c]].clone()));
        }
    }
    let mut fillers: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for cell in 0..x.len(m) {
        let key: Vec<usize> = horn_cells.iter().map(|(n, _, theta)| {
            debug_assert_eq!(theta.len(), n + 1);
            x.restrict(m, cell, theta)
        }).collect();
        fillers.entry(key).or_default().push(cell);
    }
    let describe = |key: &[usize]| -> String {
        horn_cells
            .iter()
            .zip(key)
            .map(|((n, c, _), v)| format!("{}->{}", horn.name(*n, *c), x.name(*n, *v)))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut collision = None;
    for map in enumerate_hom(&horn, x) {
        let key: Vec<usize> = horn_cells.iter().map(|(n, c, _)| map[*n][*c]).collect();
        match fillers.get(&key) {
            None => return Ok(KanOutcome::Fails { horn: format!("{{{}}}", describe(&key)) }),
            Some(cells) if cells.len() > 1 && collision.is_none() => {
                collision = Some((x.name(m, cells[0]).to_string(), x.name(m, cells[1]).to_string()));
            }
            _ => {}
        }
    }
    Ok(match collision {
        None => KanOutcome::HoldsUniquely,
        Some(collision) => KanOutcome::Holds { collision },
    })
}

/// Horn dimensions from which fillers must be unique.
///
/// The default for an n-groupoid demands unique fillers for horn dimension
/// `m >= n + 1`; the literal reading of "unique below n" is available through
/// [`KanPolicy::unique_from`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KanPolicy {
    pub unique_from: usize,
}

impl KanPolicy {
    pub fn for_groupoid_degree(n: usize) -> Self {
        KanPolicy { unique_from: n + 1 }
    }
}

/// Runs `Kan(m, j)` for `1 <= m <= up_to` with the default uniqueness range.
pub fn verify_n_groupoid(
    x: &TruncatedSimplicialSet,
    n: usize,
    up_to: usize,
) -> Result<Report, SimplicialError> {
    verify_n_groupoid_with(x, up_to, KanPolicy::for_groupoid_degree(n))
}

pub fn verify_n_groupoid_with(
    x: &TruncatedSimplicialSet,
    up_to: usize,
    policy: KanPolicy,
) -> Result<Report, SimplicialError> {
    if up_to > x.top() {
        return Err(SimplicialError::Level { level: up_to, top: x.top() });
    }
    let mut r = Report::new(format!("Kan conditions up to dimension {up_to}"));
    for m in 1..=up_to {
        for j in 0..=m {
            let outcome = check_kan(x, m, j)?;
            let unique = m >= policy.unique_from;
            let law = if unique { format!("Kan!({m},{j})") } else { format!("Kan({m},{j})") };
            let anchor = if unique { "kan.unique-filler" } else { "kan.filler" };
            let witness = match (&outcome, unique) {
                (KanOutcome::Fails { .. }, _) => Some(outcome.to_string()),
                (KanOutcome::Holds { .. }, true) => Some(outcome.to_string()),
                _ => None,
            };
            r.record(&law, anchor, witness);
        }
    }
    Ok(r)
}
