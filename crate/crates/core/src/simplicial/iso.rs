//! Isomorphism search between truncated simplicial sets.

use super::{LevelMap, TruncatedSimplicialSet};
use std::collections::HashMap;

const UNSET: usize = usize::MAX;

struct IsoSearch<'a> {
    x: &'a TruncatedSimplicialSet,
    y: &'a TruncatedSimplicialSet,
    /// Non-degenerate cells of `x` in (level, index) order.
    slots: Vec<(usize, usize)>,
    /// First decomposition `(i, c')` with `s_i c' = c` for degenerate cells.
    decomposition: Vec<Vec<Option<(usize, usize)>>>,
    nondegenerate_y: Vec<Vec<bool>>,
    index_y: Vec<HashMap<Vec<usize>, Vec<usize>>>,
    map: LevelMap,
    used: Vec<Vec<bool>>,
}

impl IsoSearch<'_> {
    /// Maps the degenerate cells of level `n`; false on a clash.
    fn fill_degenerate(&mut self, n: usize) -> bool {
        for c in 0..self.x.len(n) {
            if let Some((i, below)) = self.decomposition[n][c] {
                let v = self.y.degen(n - 1, i, self.map[n - 1][below]);
                if self.used[n][v] || self.nondegenerate_y[n][v] {
                    return false;
                }
                self.map[n][c] = v;
                self.used[n][v] = true;
            }
        }
        true
    }

    fn clear_degenerate(&mut self, n: usize) {
        for c in 0..self.x.len(n) {
            if self.decomposition[n][c].is_some() && self.map[n][c] != UNSET {
                self.used[n][self.map[n][c]] = false;
                self.map[n][c] = UNSET;
            }
        }
    }

    fn run(&mut self, pos: usize, accept: &mut dyn FnMut(&LevelMap) -> bool) -> bool {
        if pos == self.slots.len() {
            // Levels above the last slot still need their degenerate cells.
            let last = self.slots.last().map_or(0, |s| s.0);
            let mut filled = Vec::new();
            let mut ok = true;
            for n in last + 1..=self.x.top() {
                if !self.fill_degenerate(n) {
                    ok = false;
                    filled.push(n);
                    break;
                }
                filled.push(n);
            }
            let found = ok && self.degeneracies_commute() && accept(&self.map);
            if !found {
                for n in filled {
                    self.clear_degenerate(n);
                }
            }
            return found;
        }
        let (n, c) = self.slots[pos];
        let entering = pos == 0 || self.slots[pos - 1].0 != n;
        let mut filled = Vec::new();
        if entering {
            let from = if pos == 0 { 1 } else { self.slots[pos - 1].0 + 1 };
            for level in from..=n {
                filled.push(level);
                if !self.fill_degenerate(level) {
                    for l in filled {
                        self.clear_degenerate(l);
                    }
                    return false;
                }
            }
        }
        let candidates: Vec<usize> = if n == 0 {
            (0..self.y.len(0)).collect()
        } else {
            let key: Vec<usize> = (0..=n).map(|i| self.map[n - 1][self.x.face(n, i, c)]).collect();
            self.index_y[n].get(&key).cloned().unwrap_or_default()
        };
        for v in candidates {
            if self.used[n][v] || !self.nondegenerate_y[n][v] {
                continue;
            }
            self.map[n][c] = v;
            self.used[n][v] = true;
            if self.run(pos + 1, accept) {
                return true;
            }
            self.used[n][v] = false;
            self.map[n][c] = UNSET;
        }
        for l in filled {
            self.clear_degenerate(l);
        }
        false
    }

    fn degeneracies_commute(&self) -> bool {
        (0..self.x.top()).all(|n| {
            (0..=n).all(|i| (0..self.x.len(n)).all(|c| self.map[n + 1][self.x.degen(n, i, c)] == self.y.degen(n, i, self.map[n][c])))
        })
    }
}

/// First levelwise bijection `x -> y` commuting with faces and degeneracies
/// that `accept` approves, in lexicographic order of non-degenerate assignments.
pub fn find_isomorphism(
    x: &TruncatedSimplicialSet,
    y: &TruncatedSimplicialSet,
    accept: &mut dyn FnMut(&LevelMap) -> bool,
) -> Option<LevelMap> {
    if x.top() != y.top() || x.level_sizes() != y.level_sizes() {
        return None;
    }
    let top = x.top();
    let mut slots = Vec::new();
    let mut nondegenerate_y = Vec::new();
    let mut decomposition = Vec::new();
    for n in 0..=top {
        let nd = x.nondegenerate_cells(n);
        if nd.len() != y.nondegenerate_cells(n).len() {
            return None;
        }
        slots.extend(nd.iter().map(|&c| (n, c)));
        let mut flags = vec![false; y.len(n)];
        for c in y.nondegenerate_cells(n) {
            flags[c] = true;
        }
        nondegenerate_y.push(flags);
        let mut dec = vec![None; x.len(n)];
        if n > 0 {
            for i in 0..n {
                for below in 0..x.len(n - 1) {
                    dec[x.degen(n - 1, i, below)].get_or_insert((i, below));
                }
            }
        }
        decomposition.push(dec);
    }
    let mut search = IsoSearch {
        x,
        y,
        slots,
        decomposition,
        nondegenerate_y,
        index_y: (0..=top).map(|n| if n == 0 { HashMap::new() } else { y.boundary_index(n) }).collect(),
        map: (0..=top).map(|n| vec![UNSET; x.len(n)]).collect(),
        used: (0..=top).map(|n| vec![false; y.len(n)]).collect(),
    };
    search.run(0, accept).then_some(search.map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{standard_simplex, SimplicialMap};

    #[test]
    fn simplex_is_rigid() {
        let d = standard_simplex(2, 3);
        let mut count = 0;
        find_isomorphism(&d, &d, &mut |_| {
            count += 1;
            false
        });
        // Δ[2] has only the identity automorphism.
        assert_eq!(count, 1);
    }

    #[test]
    fn found_maps_are_simplicial() {
        let x = TruncatedSimplicialSet::constant(&["a".into(), "b".into()], 2);
        let m = find_isomorphism(&x, &x, &mut |_| true).unwrap();
        let f = SimplicialMap { source: x.clone(), target: x.clone(), level_map: m };
        assert!(f.verify().passed());
    }

    #[test]
    fn different_shapes_are_not_isomorphic() {
        assert!(find_isomorphism(&standard_simplex(1, 2), &standard_simplex(2, 2), &mut |_| true).is_none());
    }
}
