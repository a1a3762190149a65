//! The bigon groupoids `G_1 ⇒ X_1` and `G̃_1 ⇒ X_1`.
//!
//! A bigon is a 2-cell with a degenerate edge; `G_1` uses `d_2` degenerate,
//! `G̃_1` uses `d_0` degenerate.

use super::TwoGroupoidData;
use crate::groupoid::{functor_violation, FiniteGroupoid};
use crate::report::Report;

/// A bigon groupoid with the 2-cell behind each arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigonGroupoid {
    pub groupoid: FiniteGroupoid,
    /// `cell[a]` is the 2-cell of arrow `a`.
    pub cell: Vec<usize>,
}

impl BigonGroupoid {
    /// Arrow index of a 2-cell, if it is a bigon of this kind.
    pub fn arrow_of(&self, x: usize) -> Option<usize> {
        self.cell.iter().position(|&c| c == x)
    }
}

fn is_degenerate_edge(data: &TwoGroupoidData, e: usize) -> bool {
    (0..data.x(0).len()).any(|v| data.s0(v) == e)
}

fn assemble(
    data: &TwoGroupoidData,
    cells: Vec<usize>,
    target_face: usize,
    source_face: usize,
    identity: impl Fn(usize) -> usize,
    compose: impl Fn(usize, usize) -> usize,
) -> BigonGroupoid {
    let pos = |x: usize| cells.iter().position(|&c| c == x).expect("bigons are closed under composition");
    let source: Vec<usize> = cells.iter().map(|&x| data.d2(source_face, x)).collect();
    let target: Vec<usize> = cells.iter().map(|&x| data.d2(target_face, x)).collect();
    let identity: Vec<usize> = (0..data.x(1).len()).map(|e| pos(identity(e))).collect();
    let n = cells.len();
    // Inverse by search: the unique arrow composing to the identity.
    let inverse = (0..n)
        .map(|a| {
            (0..n)
                .find(|&b| source[b] == target[a] && target[b] == source[a] && pos(compose(cells[b], cells[a])) == identity[source[a]])
                .unwrap_or(a)
        })
        .collect();
    let groupoid = FiniteGroupoid::from_parts(
        data.x(1).to_vec(),
        cells.iter().map(|&x| data.x(2)[x].clone()).collect(),
        source,
        target,
        identity,
        inverse,
        |a, b| pos(compose(cells[a], cells[b])),
    );
    BigonGroupoid { groupoid, cell: cells }
}

/// `G_1 = d_2^{-1}(s_0 X_0)` with target `d_0`, source `d_1`, identity `s_0`
/// and `η_0 ∘ η_2 = m_1(η_0, η_2, s_0 s_0 v)`.
pub fn bigon_groupoid(data: &TwoGroupoidData) -> BigonGroupoid {
    let cells: Vec<usize> = (0..data.x(2).len()).filter(|&x| is_degenerate_edge(data, data.d2(2, x))).collect();
    assemble(data, cells, 0, 1, |e| data.s1(0, e), |a, b| {
        let v = data.d1(1, data.d2(0, a));
        data.mi(1, [a, b, data.s00(v)])
    })
}

/// `G̃_1 = d_0^{-1}(s_0 X_0)` with target `d_2`, source `d_1`, identity `s_1`
/// and `ζ_1 ∘ ζ_2 = m_2(s_0 s_0 w, ζ_2, ζ_1)`.
pub fn tilde_bigon_groupoid(data: &TwoGroupoidData) -> BigonGroupoid {
    let cells: Vec<usize> = (0..data.x(2).len()).filter(|&x| is_degenerate_edge(data, data.d2(0, x))).collect();
    assemble(data, cells, 2, 1, |e| data.s1(1, e), |a, b| {
        let w = data.d1(0, data.d2(2, a));
        data.mi(2, [data.s00(w), b, a])
    })
}

/// `φ: G_1 -> G̃_1` through `m_0` and its inverse through `m_3`.
#[derive(Clone, Debug)]
pub struct TildeBigonIso {
    pub bigons: BigonGroupoid,
    pub tilde: BigonGroupoid,
    pub phi: Vec<usize>,
    pub phi_inverse: Vec<usize>,
    pub report: Report,
}

pub fn tilde_bigon_iso(data: &TwoGroupoidData) -> TildeBigonIso {
    let bigons = bigon_groupoid(data);
    let tilde = tilde_bigon_groupoid(data);
    let phi: Vec<usize> = bigons
        .cell
        .iter()
        .map(|&eta| {
            let x = data.d2(1, eta);
            let zeta = data.mi(0, [data.s1(1, x), data.s1(0, x), eta]);
            tilde.arrow_of(zeta).expect("m0 lands in tilde bigons")
        })
        .collect();
    let phi_inverse: Vec<usize> = tilde
        .cell
        .iter()
        .map(|&zeta| {
            let x = data.d2(1, zeta);
            let eta = data.mi(3, [zeta, data.s1(1, x), data.s1(0, x)]);
            bigons.arrow_of(eta).expect("m3 lands in bigons")
        })
        .collect();
    let objects: Vec<usize> = (0..data.x(1).len()).collect();
    let mut report = Report::new("bigon groupoid isomorphism");
    report.record("φ is a functor", "bigon.phi", functor_violation(&bigons.groupoid, &tilde.groupoid, &objects, &phi));
    report.record(
        "φ⁻¹ is a functor",
        "bigon.phi-inverse",
        functor_violation(&tilde.groupoid, &bigons.groupoid, &objects, &phi_inverse),
    );
    let roundtrip = (0..phi.len())
        .find(|&a| phi_inverse[phi[a]] != a)
        .map(|a| format!("φ⁻¹φ moves {}", bigons.groupoid.arrows[a]))
        .or_else(|| (0..phi_inverse.len()).find(|&b| phi[phi_inverse[b]] != b).map(|b| format!("φφ⁻¹ moves {}", tilde.groupoid.arrows[b])));
    report.record("φ and φ⁻¹ are mutually inverse", "bigon.phi-roundtrip", roundtrip);
    TildeBigonIso { bigons, tilde, phi, phi_inverse, report }
}
