//! Enumeration of simplicial maps by backtracking over non-degenerate cells.

use super::TruncatedSimplicialSet;
use std::collections::HashMap;

/// `level_map[n][c]` is the image of source cell `c` at level `n`.
pub type LevelMap = Vec<Vec<usize>>;

struct Search<'a> {
    s: &'a TruncatedSimplicialSet,
    x: &'a TruncatedSimplicialSet,
    top: usize,
    /// Non-degenerate source cells in (level, index) order.
    slots: Vec<(usize, usize)>,
    /// For each degenerate source cell, its decompositions `(i, c')` with `s_i c' = c`.
    decompositions: Vec<Vec<Vec<(usize, usize)>>>,
    index: Vec<HashMap<Vec<usize>, Vec<usize>>>,
    assignment: Vec<Vec<usize>>,
    out: Vec<LevelMap>,
}

const UNSET: usize = usize::MAX;

impl Search<'_> {
    /// Fills the degenerate cells of level `n` from level `n - 1`; false on conflict.
    fn fill_degenerate(&mut self, n: usize) -> bool {
        if n == 0 {
            return true;
        }
        for c in 0..self.s.len(n) {
            let decs = &self.decompositions[n][c];
            if decs.is_empty() {
                continue;
            }
            let mut value = UNSET;
            for &(i, below) in decs {
                let v = self.x.degen(n - 1, i, self.assignment[n - 1][below]);
                if value == UNSET {
                    value = v;
                } else if value != v {
                    return false;
                }
            }
            for i in 0..=n {
                if self.x.face(n, i, value) != self.assignment[n - 1][self.s.face(n, i, c)] {
                    return false;
                }
            }
            self.assignment[n][c] = value;
        }
        true
    }

    fn candidates(&self, n: usize, c: usize) -> Vec<usize> {
        if n == 0 {
            return (0..self.x.len(0)).collect();
        }
        let key: Vec<usize> = (0..=n).map(|i| self.assignment[n - 1][self.s.face(n, i, c)]).collect();
        self.index[n].get(&key).cloned().unwrap_or_default()
    }

    fn run(&mut self, pos: usize, filled_upto: usize) {
        // `filled_upto` is the next level whose degenerate cells still need filling.
        if pos == self.slots.len() {
            let mut level = filled_upto;
            let saved = self.assignment.clone();
            while level <= self.top {
                if !self.fill_degenerate(level) {
                    self.assignment = saved;
                    return;
                }
                level += 1;
            }
            self.out.push(self.assignment.clone());
            self.assignment = saved;
            return;
        }
        let (n, c) = self.slots[pos];
        let mut level = filled_upto;
        while level <= n {
            if !self.fill_degenerate(level) {
                return;
            }
            level += 1;
        }
        for v in self.candidates(n, c) {
            self.assignment[n][c] = v;
            self.run(pos + 1, level);
        }
        self.assignment[n][c] = UNSET;
    }
}

/// All simplicial maps `s -> x` on levels `0..=min(N_s, N_x)`, in lexicographic
/// order of their non-degenerate assignments.
pub fn enumerate_hom(s: &TruncatedSimplicialSet, x: &TruncatedSimplicialSet) -> Vec<LevelMap> {
    let top = s.top().min(x.top());
    let mut slots = Vec::new();
    for n in 0..=top {
        for c in s.nondegenerate_cells(n) {
            slots.push((n, c));
        }
    }
    let mut decompositions: Vec<Vec<Vec<(usize, usize)>>> =
        (0..=top).map(|n| vec![Vec::new(); s.len(n)]).collect();
    for n in 1..=top {
        for i in 0..n {
            for below in 0..s.len(n - 1) {
                decompositions[n][s.degen(n - 1, i, below)].push((i, below));
            }
        }
    }
    let index = (0..=top)
        .map(|n| if n == 0 { HashMap::new() } else { x.boundary_index(n) })
        .collect();
    let mut search = Search {
        s,
        x,
        top,
        slots,
        decompositions,
        index,
        assignment: (0..=top).map(|n| vec![UNSET; s.len(n)]).collect(),
        out: Vec::new(),
    };
    search.run(0, 0);
    search.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{horn_complex, standard_simplex};

    #[test]
    fn maps_from_a_point_are_vertices() {
        let x = standard_simplex(2, 2);
        assert_eq!(enumerate_hom(&standard_simplex(0, 2), &x).len(), 3);
    }

    #[test]
    fn yoneda_for_simplices() {
        let x = standard_simplex(2, 3);
        for m in 0..=3 {
            assert_eq!(enumerate_hom(&standard_simplex(m, 3), &x).len(), x.len(m));
        }
    }

    #[test]
    fn horn_maps_into_a_simplex() {
        // Λ[2,1] → Δ[1]: pairs of edges (a, b) with a ending where b starts.
        let x = standard_simplex(1, 2);
        let (h, _) = horn_complex(2, 1, 2).unwrap();
        assert_eq!(enumerate_hom(&h, &x).len(), 4);
    }
}
