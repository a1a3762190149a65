//! Finite truncated simplicial sets and the standard complexes.
//!
//! Cells are dense indices per level; every level is kept sorted by cell ID,
//! so index order is the canonical order used for witnesses and enumeration.

mod cosk;
mod hom;
mod iso;
mod kan;

pub use cosk::{coskeleton, skeleton};
pub use hom::{enumerate_hom, LevelMap};
pub use iso::find_isomorphism;
pub use kan::{check_kan, verify_n_groupoid, verify_n_groupoid_with, KanOutcome, KanPolicy};

use crate::report::Report;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("malformed table: {0}")]
    Shape(String),
    #[error("duplicate cell id {id:?} at level {level}")]
    DuplicateId { level: usize, id: String },
    #[error("horn index {j} out of range for dimension {m}")]
    HornIndex { m: usize, j: usize },
    #[error("level {level} exceeds truncation {top}")]
    Level { level: usize, top: usize },
    #[error("not closed under structure maps: {0}")]
    NotClosed(String),
}

/// Levels `0..=N` of a simplicial set with face and degeneracy tables.
///
/// `face[n][i][x]` is defined for `1 <= n <= N`, `0 <= i <= n`;
/// `degen[n][i][x]` for `0 <= n < N`, `0 <= i <= n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSimplicialSet {
    cells: Vec<Vec<String>>,
    face: Vec<Vec<Vec<usize>>>,
    degen: Vec<Vec<Vec<usize>>>,
}

impl TruncatedSimplicialSet {
    /// Builds a set from raw tables, checking shapes and sorting each level by ID.
    pub fn new(
        cells: Vec<Vec<String>>,
        face: Vec<Vec<Vec<usize>>>,
        degen: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, SimplicialError> {
        let levels = cells.len();
        if levels == 0 {
            return Err(SimplicialError::Shape("no levels".into()));
        }
        let top = levels - 1;
        if face.len() != levels || degen.len() != levels {
            return Err(SimplicialError::Shape("table count differs from level count".into()));
        }
        for (n, level) in cells.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for id in level {
                if !seen.insert(id) {
                    return Err(SimplicialError::DuplicateId { level: n, id: id.clone() });
                }
            }
        }
        for n in 0..levels {
            let want_faces = if n == 0 { 0 } else { n + 1 };
            if face[n].len() != want_faces {
                return Err(SimplicialError::Shape(format!("level {n} needs {want_faces} faces")));
            }
            for (i, table) in face[n].iter().enumerate() {
                if table.len() != cells[n].len() || table.iter().any(|&y| y >= cells[n - 1].len()) {
                    return Err(SimplicialError::Shape(format!("face d{i} at level {n}")));
                }
            }
            let want_degens = if n < top { n + 1 } else { 0 };
            if degen[n].len() != want_degens {
                return Err(SimplicialError::Shape(format!(
                    "level {n} needs {want_degens} degeneracies"
                )));
            }
            for (i, table) in degen[n].iter().enumerate() {
                if table.len() != cells[n].len() || table.iter().any(|&y| y >= cells[n + 1].len()) {
                    return Err(SimplicialError::Shape(format!("degeneracy s{i} at level {n}")));
                }
            }
        }
        let mut x = TruncatedSimplicialSet { cells, face, degen };
        x.canonicalize();
        Ok(x)
    }

    /// Sorts every level by ID and rewrites the tables accordingly.
    fn canonicalize(&mut self) {
        let perms: Vec<Vec<usize>> = self
            .cells
            .iter()
            .map(|level| {
                let mut order: Vec<usize> = (0..level.len()).collect();
                order.sort_by(|&a, &b| level[a].cmp(&level[b]));
                let mut new_index = vec![0; level.len()];
                for (new, &old) in order.iter().enumerate() {
                    new_index[old] = new;
                }
                new_index
            })
            .collect();
        if perms.iter().all(|p| p.iter().enumerate().all(|(i, &v)| i == v)) {
            return;
        }
        let relabel = |table: &Vec<usize>, from: usize, to: usize| -> Vec<usize> {
            let mut out = vec![0; table.len()];
            for (old, &val) in table.iter().enumerate() {
                out[perms[from][old]] = perms[to][val];
            }
            out
        };
        for n in 0..self.cells.len() {
            self.face[n] = self.face[n].iter().map(|t| relabel(t, n, n - 1)).collect();
            self.degen[n] = self.degen[n].iter().map(|t| relabel(t, n, n + 1)).collect();
            let mut names = vec![String::new(); self.cells[n].len()];
            for (old, name) in self.cells[n].drain(..).enumerate() {
                names[perms[n][old]] = name;
            }
            self.cells[n] = names;
        }
    }

    /// The truncation level `N`.
    pub fn top(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn len(&self, n: usize) -> usize {
        self.cells[n].len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells[0].is_empty()
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn cells(&self, n: usize) -> &[String] {
        &self.cells[n]
    }

    pub fn name(&self, n: usize, x: usize) -> &str {
        &self.cells[n][x]
    }

    pub fn index_of(&self, n: usize, id: &str) -> Option<usize> {
        self.cells[n].binary_search_by(|c| c.as_str().cmp(id)).ok()
    }

    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.face[n][i][x]
    }

    pub fn degen(&self, n: usize, i: usize, x: usize) -> usize {
        self.degen[n][i][x]
    }

    pub fn face_table(&self, n: usize, i: usize) -> &[usize] {
        &self.face[n][i]
    }

    pub fn degen_table(&self, n: usize, i: usize) -> &[usize] {
        &self.degen[n][i]
    }

    /// Mutable access for corruption in negative controls and parsers.
    pub fn face_table_mut(&mut self, n: usize, i: usize) -> &mut Vec<usize> {
        &mut self.face[n][i]
    }

    pub fn degen_table_mut(&mut self, n: usize, i: usize) -> &mut Vec<usize> {
        &mut self.degen[n][i]
    }

    /// All faces of `x`, in index order.
    pub fn boundary(&self, n: usize, x: usize) -> Vec<usize> {
        (0..=n).map(|i| self.face[n][i][x]).collect()
    }

    /// `theta^*(x)` for a weakly monotone `theta: [k] -> [n]` given by its values.
    pub fn restrict(&self, n: usize, x: usize, theta: &[usize]) -> usize {
        let mut cur = x;
        let mut level = n;
        for v in (0..=n).rev() {
            if !theta.contains(&v) {
                cur = self.face[level][v][cur];
                level -= 1;
            }
        }
        for p in 0..theta.len().saturating_sub(1) {
            if theta[p] == theta[p + 1] {
                cur = self.degen[level][p][cur];
                level += 1;
            }
        }
        cur
    }

    /// Cells at level `n` outside the image of every degeneracy.
    pub fn nondegenerate_cells(&self, n: usize) -> Vec<usize> {
        if n == 0 {
            return (0..self.len(0)).collect();
        }
        let mut hit = vec![false; self.len(n)];
        for table in &self.degen[n - 1] {
            for &y in table {
                hit[y] = true;
            }
        }
        (0..self.len(n)).filter(|&x| !hit[x]).collect()
    }

    /// Keeps levels `0..=n`.
    pub fn truncate(&self, n: usize) -> Result<Self, SimplicialError> {
        if n > self.top() {
            return Err(SimplicialError::Level { level: n, top: self.top() });
        }
        let mut degen = self.degen[..=n].to_vec();
        degen[n].clear();
        Ok(TruncatedSimplicialSet {
            cells: self.cells[..=n].to_vec(),
            face: self.face[..=n].to_vec(),
            degen,
        })
    }

    /// The sub-simplicial set on the kept cells, with the inclusion as index lists.
    pub fn subcomplex(&self, keep: &[Vec<bool>]) -> Result<(Self, Vec<Vec<usize>>), SimplicialError> {
        let kept: Vec<Vec<usize>> = keep
            .iter()
            .map(|k| (0..k.len()).filter(|&x| k[x]).collect())
            .collect();
        let mut new_index: Vec<HashMap<usize, usize>> = Vec::new();
        for level in &kept {
            new_index.push(level.iter().enumerate().map(|(i, &x)| (x, i)).collect());
        }
        let top = self.top();
        let mut face = vec![Vec::new(); top + 1];
        let mut degen = vec![Vec::new(); top + 1];
        for n in 0..=top {
            if n > 0 {
                for i in 0..=n {
                    let mut t = Vec::with_capacity(kept[n].len());
                    for &x in &kept[n] {
                        let y = self.face[n][i][x];
                        let Some(&yi) = new_index[n - 1].get(&y) else {
                            return Err(SimplicialError::NotClosed(format!(
                                "d{i} of {} leaves the subset",
                                self.cells[n][x]
                            )));
                        };
                        t.push(yi);
                    }
                    face[n].push(t);
                }
            }
            if n < top {
                for i in 0..=n {
                    let mut t = Vec::with_capacity(kept[n].len());
                    for &x in &kept[n] {
                        let y = self.degen[n][i][x];
                        let Some(&yi) = new_index[n + 1].get(&y) else {
                            return Err(SimplicialError::NotClosed(format!(
                                "s{i} of {} leaves the subset",
                                self.cells[n][x]
                            )));
                        };
                        t.push(yi);
                    }
                    degen[n].push(t);
                }
            }
        }
        let cells = kept
            .iter()
            .enumerate()
            .map(|(n, level)| level.iter().map(|&x| self.cells[n][x].clone()).collect())
            .collect();
        // Kept cells preserve the sorted order, so no re-canonicalization is needed.
        Ok((TruncatedSimplicialSet { cells, face, degen }, kept))
    }

    /// The constant simplicial set on the given points.
    pub fn constant(points: &[String], top: usize) -> Self {
        let k = points.len();
        let id: Vec<usize> = (0..k).collect();
        let cells = vec![points.to_vec(); top + 1];
        let face = (0..=top)
            .map(|n| if n == 0 { Vec::new() } else { vec![id.clone(); n + 1] })
            .collect();
        let degen = (0..=top)
            .map(|n| if n < top { vec![id.clone(); n + 1] } else { Vec::new() })
            .collect();
        TruncatedSimplicialSet::new(cells, face, degen).expect("constant set is well formed")
    }

    /// Checks every simplicial identity within the truncation.
    pub fn verify(&self) -> Report {
        verify_simplicial(self)
    }

    /// Lookup from face tuple to the cells with that boundary, per level.
    pub(crate) fn boundary_index(&self, n: usize) -> HashMap<Vec<usize>, Vec<usize>> {
        let mut map: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for x in 0..self.len(n) {
            map.entry(self.boundary(n, x)).or_default().push(x);
        }
        map
    }
}

/// A levelwise map commuting with all structure maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    pub source: TruncatedSimplicialSet,
    pub target: TruncatedSimplicialSet,
    pub level_map: Vec<Vec<usize>>,
}

impl SimplicialMap {
    pub fn identity(x: &TruncatedSimplicialSet) -> Self {
        SimplicialMap {
            source: x.clone(),
            target: x.clone(),
            level_map: (0..=x.top()).map(|n| (0..x.len(n)).collect()).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMap) -> SimplicialMap {
        SimplicialMap {
            source: self.source.clone(),
            target: other.target.clone(),
            level_map: self
                .level_map
                .iter()
                .zip(&other.level_map)
                .map(|(f, g)| f.iter().map(|&x| g[x]).collect())
                .collect(),
        }
    }

    /// Shape and commutation with faces and degeneracies.
    pub fn verify(&self) -> Report {
        let mut r = Report::new("simplicial map");
        let (s, t) = (&self.source, &self.target);
        let shape = if s.top() != t.top() || self.level_map.len() != s.top() + 1 {
            Some(format!("truncations {} and {}", s.top(), t.top()))
        } else {
            (0..=s.top()).find_map(|n| {
                let m = &self.level_map[n];
                (m.len() != s.len(n) || m.iter().any(|&y| y >= t.len(n)))
                    .then(|| format!("level {n} map is not total"))
            })
        };
        r.record("map shape", "map.shape", shape.clone());
        if shape.is_some() {
            return r;
        }
        let mut witness = None;
        'outer: for n in 0..=s.top() {
            for x in 0..s.len(n) {
                let fx = self.level_map[n][x];
                if n > 0 {
                    for i in 0..=n {
                        if t.face(n, i, fx) != self.level_map[n - 1][s.face(n, i, x)] {
                            witness = Some(format!("d{i} at level {n}, cell {}", s.name(n, x)));
                            break 'outer;
                        }
                    }
                }
                if n < s.top() {
                    for i in 0..=n {
                        if t.degen(n, i, fx) != self.level_map[n + 1][s.degen(n, i, x)] {
                            witness = Some(format!("s{i} at level {n}, cell {}", s.name(n, x)));
                            break 'outer;
                        }
                    }
                }
            }
        }
        r.record("commutes with structure maps", "map.naturality", witness);
        r
    }
}

fn value_name(values: &[usize], m: usize) -> String {
    if m < 10 {
        values.iter().map(|v| char::from(b'0' + *v as u8)).collect()
    } else {
        values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Weakly monotone sequences of length `n + 1` with values in `0..=m`.
pub fn monotone_sequences(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n + 1);
    fn rec(n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n + 1 {
            out.push(cur.clone());
            return;
        }
        let lo = cur.last().copied().unwrap_or(0);
        for v in lo..=m {
            cur.push(v);
            rec(n, m, cur, out);
            cur.pop();
        }
    }
    rec(n, m, &mut cur, &mut out);
    out
}

/// Δ[m] truncated at level `top`; cells are named by their value strings.
pub fn standard_simplex(m: usize, top: usize) -> TruncatedSimplicialSet {
    let seqs: Vec<Vec<Vec<usize>>> = (0..=top).map(|n| monotone_sequences(n, m)).collect();
    let index: Vec<HashMap<Vec<usize>, usize>> = seqs
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    let mut face = vec![Vec::new(); top + 1];
    let mut degen = vec![Vec::new(); top + 1];
    for n in 0..=top {
        if n > 0 {
            for i in 0..=n {
                face[n].push(
                    seqs[n]
                        .iter()
                        .map(|s| {
                            let mut t = s.clone();
                            t.remove(i);
                            index[n - 1][&t]
                        })
                        .collect(),
                );
            }
        }
        if n < top {
            for i in 0..=n {
                degen[n].push(
                    seqs[n]
                        .iter()
                        .map(|s| {
                            let mut t = s.clone();
                            t.insert(i, s[i]);
                            index[n + 1][&t]
                        })
                        .collect(),
                );
            }
        }
    }
    let cells = seqs
        .iter()
        .map(|level| level.iter().map(|s| value_name(s, m)).collect())
        .collect();
    TruncatedSimplicialSet::new(cells, face, degen).expect("standard simplex is well formed")
}

/// The values of each cell of `standard_simplex(m, top)`, per level, in index order.
pub fn simplex_values(m: usize, top: usize) -> Vec<Vec<Vec<usize>>> {
    let delta = standard_simplex(m, top);
    (0..=top)
        .map(|n| {
            let mut seqs = monotone_sequences(n, m);
            seqs.sort_by_key(|s| value_name(s, m));
            debug_assert_eq!(seqs.len(), delta.len(n));
            seqs
        })
        .collect()
}

fn image_subcomplex(
    m: usize,
    top: usize,
    keep: impl Fn(&[usize]) -> bool,
) -> (TruncatedSimplicialSet, SimplicialMap) {
    let delta = standard_simplex(m, top);
    let values = simplex_values(m, top);
    let mask: Vec<Vec<bool>> = values.iter().map(|lv| lv.iter().map(|s| keep(s)).collect()).collect();
    let (sub, kept) = delta.subcomplex(&mask).expect("image filters are closed under structure maps");
    let inclusion = SimplicialMap { source: sub.clone(), target: delta, level_map: kept };
    (sub, inclusion)
}

fn image_size(values: &[usize]) -> usize {
    let mut v = values.to_vec();
    v.dedup();
    v.len()
}

/// Λ[m, j]: cells whose image misses some vertex other than `j`.
pub fn horn_complex(
    m: usize,
    j: usize,
    top: usize,
) -> Result<(TruncatedSimplicialSet, SimplicialMap), SimplicialError> {
    if m == 0 || j > m {
        return Err(SimplicialError::HornIndex { m, j });
    }
    Ok(image_subcomplex(m, top, |s| (0..=m).any(|v| v != j && !s.contains(&v))))
}

/// ∂Δ[m]: cells whose image is a proper subset of `0..=m`.
pub fn boundary_complex(m: usize, top: usize) -> (TruncatedSimplicialSet, SimplicialMap) {
    image_subcomplex(m, top, |s| image_size(s) < m + 1)
}

/// Checks every simplicial identity within the truncation; reports the first
/// violation per identity family in canonical order.
pub fn verify_simplicial(x: &TruncatedSimplicialSet) -> Report {
    let mut r = Report::new("simplicial set");
    let top = x.top();
    let name = |n: usize, c: usize| x.name(n, c).to_string();

    let mut ids = None;
    for n in 0..=top {
        for w in x.cells(n).windows(2) {
            if w[0] >= w[1] {
                ids = Some(format!("level {n}: {} not after {}", w[1], w[0]));
            }
        }
    }
    r.record("distinct canonical ids", "simplicial.ids", ids);

    let mut ff = None;
    'ff: for n in 2..=top {
        for c in 0..x.len(n) {
            for j in 1..=n {
                for i in 0..j {
                    if x.face(n - 1, i, x.face(n, j, c)) != x.face(n - 1, j - 1, x.face(n, i, c)) {
                        ff = Some(format!("d{i}d{j} = d{}d{i} fails at level {n}, cell {}", j - 1, name(n, c)));
                        break 'ff;
                    }
                }
            }
        }
    }
    r.record("face-face identity", "simplicial.dd", ff);

    let mut ss = None;
    'ss: for n in 0..top.saturating_sub(1) {
        if n + 2 > top {
            break;
        }
        for c in 0..x.len(n) {
            for j in 0..=n {
                for i in 0..=j {
                    if x.degen(n + 1, i, x.degen(n, j, c)) != x.degen(n + 1, j + 1, x.degen(n, i, c)) {
                        ss = Some(format!("s{i}s{j} = s{}s{i} fails at level {n}, cell {}", j + 1, name(n, c)));
                        break 'ss;
                    }
                }
            }
        }
    }
    r.record("degeneracy-degeneracy identity", "simplicial.ss", ss);

    let mut ds = None;
    'ds: for n in 0..top {
        for c in 0..x.len(n) {
            for j in 0..=n {
                let sc = x.degen(n, j, c);
                for i in 0..=n + 1 {
                    let lhs = x.face(n + 1, i, sc);
                    let rhs = if i < j {
                        x.degen(n - 1, j - 1, x.face(n, i, c))
                    } else if i == j || i == j + 1 {
                        c
                    } else {
                        x.degen(n - 1, j, x.face(n, i - 1, c))
                    };
                    if lhs != rhs {
                        let rule = if i < j {
                            format!("d{i}s{j} = s{}d{i}", j - 1)
                        } else if i <= j + 1 {
                            format!("d{i}s{j} = id")
                        } else {
                            format!("d{i}s{j} = s{j}d{}", i - 1)
                        };
                        ds = Some(format!("{rule} fails at level {n}, cell {}", name(n, c)));
                        break 'ds;
                    }
                }
            }
        }
    }
    r.record("face-degeneracy identity", "simplicial.ds", ds);

    let mut inj = None;
    'inj: for n in 0..top {
        for j in 0..=n {
            let mut seen = HashMap::new();
            for c in 0..x.len(n) {
                if let Some(prev) = seen.insert(x.degen(n, j, c), c) {
                    inj = Some(format!("s{j} at level {n} identifies {} and {}", name(n, prev), name(n, c)));
                    break 'inj;
                }
            }
        }
    }
    r.record("degeneracies injective", "simplicial.s-injective", inj);
    r
}
