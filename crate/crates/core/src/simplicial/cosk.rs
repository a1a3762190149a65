//! Skeleta and coskeleta.

use super::{SimplicialError, TruncatedSimplicialSet};
use std::collections::HashMap;

/// The sub-simplicial set generated by the cells of dimension `<= k`.
pub fn skeleton(x: &TruncatedSimplicialSet, k: usize) -> TruncatedSimplicialSet {
    let top = x.top();
    let mut keep: Vec<Vec<bool>> = (0..=top).map(|n| vec![n <= k; x.len(n)]).collect();
    for n in k..top {
        for i in 0..=n {
            for c in 0..x.len(n) {
                if keep[n][c] {
                    keep[n + 1][x.degen(n, i, c)] = true;
                }
            }
        }
    }
    x.subcomplex(&keep).expect("generated subsets are closed").0
}

/// Families `(y_0, .., y_{n+1})` of level-`n` cells with `d_i y_j = d_{j-1} y_i` for `i < j`.
fn compatible_families(
    n: usize,
    count: usize,
    face: &[Vec<Vec<usize>>],
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(n + 2);
    fn rec(
        n: usize,
        count: usize,
        face: &[Vec<Vec<usize>>],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let j = cur.len();
        if j == n + 2 {
            out.push(cur.clone());
            return;
        }
        'cand: for y in 0..count {
            if n > 0 {
                for (i, &yi) in cur.iter().enumerate() {
                    if face[n][i][y] != face[n][j - 1][yi] {
                        continue 'cand;
                    }
                }
            }
            cur.push(y);
            rec(n, count, face, cur, out);
            cur.pop();
        }
    }
    rec(n, count, face, &mut cur, &mut out);
    out
}

/// `cosk_k` of the levels `0..=k` of `x`, computed up to level `top`.
///
/// Level `n + 1 > k` consists of all compatible families of `n + 2` level-`n`
/// cells, named `(y_0,..,y_{n+1})`; faces are the projections.
pub fn coskeleton(
    x: &TruncatedSimplicialSet,
    k: usize,
    top: usize,
) -> Result<TruncatedSimplicialSet, SimplicialError> {
    if k > x.top() {
        return Err(SimplicialError::Level { level: k, top: x.top() });
    }
    if top <= k {
        return x.truncate(top);
    }
    let base = x.truncate(k)?;
    let mut cells: Vec<Vec<String>> = (0..=k).map(|n| base.cells(n).to_vec()).collect();
    let mut face: Vec<Vec<Vec<usize>>> = (0..=k)
        .map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| base.face_table(n, i).to_vec()).collect() })
        .collect();
    let mut degen: Vec<Vec<Vec<usize>>> = (0..k)
        .map(|n| (0..=n).map(|i| x.degen_table(n, i).to_vec()).collect())
        .collect();
    for n in k..top {
        let families = compatible_families(n, cells[n].len(), &face);
        let lookup: HashMap<Vec<usize>, usize> =
            families.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let names: Vec<String> = families
            .iter()
            .map(|f| {
                let parts: Vec<&str> = f.iter().map(|&y| cells[n][y].as_str()).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let new_faces: Vec<Vec<usize>> =
            (0..=n + 1).map(|i| families.iter().map(|f| f[i]).collect()).collect();
        let mut new_degen = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut table = Vec::with_capacity(cells[n].len());
            for c in 0..cells[n].len() {
                let family: Vec<usize> = (0..=n + 1)
                    .map(|i| {
                        if i == j || i == j + 1 {
                            c
                        } else if i < j {
                            degen[n - 1][j - 1][face[n][i][c]]
                        } else {
                            degen[n - 1][j][face[n][i - 1][c]]
                        }
                    })
                    .collect();
                let Some(&idx) = lookup.get(&family) else {
                    return Err(SimplicialError::NotClosed(format!(
                        "s{j} of {} has an incompatible boundary",
                        cells[n][c]
                    )));
                };
                table.push(idx);
            }
            new_degen.push(table);
        }
        degen.push(new_degen);
        cells.push(names);
        face.push(new_faces);
    }
    degen.push(Vec::new());
    TruncatedSimplicialSet::new(cells, face, degen)
}
