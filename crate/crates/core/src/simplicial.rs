//! Finite truncated simplicial sets with explicit face/degeneracy tables.
//!
//! A model stores levels `0..=dim`, every simplex at each level (degenerate
//! ones included), and is assumed complete: the underlying simplicial set has
//! no nondegenerate simplices above `dim`. All constructors in this crate
//! guarantee that; hand-written JSON models are validated against the
//! simplicial identities and documented to carry the same completeness
//! convention.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Values of a monotone surjection `[q] -> [p]`, as a nondecreasing vector of
/// length `q + 1` covering `0..=p`.
pub type Surjection = Vec<usize>;

#[derive(Clone, Debug)]
struct Level {
    labels: Vec<String>,
    /// `faces[i][x] = d_i x`, mapping into the previous level. Present for
    /// every level except 0; indices `i <= q`.
    faces: Vec<Vec<usize>>,
    /// `degeneracies[i][x] = s_i x`, mapping into the next level. Present on
    /// level `q` only when `q < dim`; indices `i <= q`.
    degeneracies: Vec<Vec<usize>>,
    /// For degenerate simplices, one witness `x = s_i(y)`.
    degeneracy_witness: Vec<Option<(usize, usize)>>,
}

/// A finite simplicial set truncated at `dim`.
#[derive(Clone, Debug)]
pub struct SimplicialSetModel {
    levels: Vec<Level>,
}

impl SimplicialSetModel {
    /// Assemble from raw tables and validate the simplicial identities.
    ///
    /// `labels[q]` lists the simplices at level `q`; `faces[q-1]` holds the
    /// face tables of level `q`; `degeneracies[q]` the degeneracy tables of
    /// level `q` (absent for the top level).
    pub fn from_tables(
        labels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degeneracies: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidSimplicial("no levels given".into()));
        }
        let dim = labels.len() - 1;
        if faces.len() != dim || degeneracies.len() != dim {
            return Err(Error::InvalidSimplicial(format!(
                "expected {dim} face tables and {dim} degeneracy tables for {} levels",
                dim + 1
            )));
        }
        let mut levels = Vec::with_capacity(dim + 1);
        for (q, lab) in labels.into_iter().enumerate() {
            let n = lab.len();
            levels.push(Level {
                labels: lab,
                faces: if q == 0 { vec![] } else { faces[q - 1].clone() },
                degeneracies: if q < dim {
                    degeneracies[q].clone()
                } else {
                    vec![]
                },
                degeneracy_witness: vec![None; n],
            });
        }
        let mut model = SimplicialSetModel { levels };
        model.check_tables()?;
        model.compute_witnesses();
        model.validate_identities()?;
        Ok(model)
    }

    fn check_tables(&self) -> Result<()> {
        for q in 0..=self.dim() {
            let lv = &self.levels[q];
            if q > 0 {
                if lv.faces.len() != q + 1 {
                    return Err(Error::InvalidSimplicial(format!(
                        "level {q}: expected {} face maps, got {}",
                        q + 1,
                        lv.faces.len()
                    )));
                }
                for (i, tbl) in lv.faces.iter().enumerate() {
                    if tbl.len() != lv.labels.len() {
                        return Err(Error::InvalidSimplicial(format!(
                            "level {q}: face table d_{i} has wrong length"
                        )));
                    }
                    if let Some(&bad) = tbl.iter().find(|&&t| t >= self.levels[q - 1].labels.len())
                    {
                        return Err(Error::InvalidSimplicial(format!(
                            "level {q}: face d_{i} target {bad} out of range"
                        )));
                    }
                }
            }
            if q < self.dim() {
                if lv.degeneracies.len() != q + 1 {
                    return Err(Error::InvalidSimplicial(format!(
                        "level {q}: expected {} degeneracy maps, got {}",
                        q + 1,
                        lv.degeneracies.len()
                    )));
                }
                for (i, tbl) in lv.degeneracies.iter().enumerate() {
                    if tbl.len() != lv.labels.len() {
                        return Err(Error::InvalidSimplicial(format!(
                            "level {q}: degeneracy table s_{i} has wrong length"
                        )));
                    }
                    if let Some(&bad) = tbl.iter().find(|&&t| t >= self.levels[q + 1].labels.len())
                    {
                        return Err(Error::InvalidSimplicial(format!(
                            "level {q}: degeneracy s_{i} target {bad} out of range"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn compute_witnesses(&mut self) {
        for q in 0..self.dim() {
            let images: Vec<(usize, usize, usize)> = self.levels[q]
                .degeneracies
                .iter()
                .enumerate()
                .flat_map(|(i, tbl)| {
                    tbl.iter()
                        .enumerate()
                        .map(move |(y, &x)| (x, i, y))
                        .collect::<Vec<_>>()
                })
                .collect();
            for (x, i, y) in images {
                let w = &mut self.levels[q + 1].degeneracy_witness[x];
                if w.is_none() {
                    *w = Some((i, y));
                }
            }
        }
    }

    /// Exhaustive check of the simplicial identities on the stored range.
    pub fn validate_identities(&self) -> Result<()> {
        let dim = self.dim();
        for q in 0..=dim {
            for x in 0..self.size(q) {
                // d_i d_j = d_{j-1} d_i for i < j
                if q >= 2 {
                    for j in 1..=q {
                        for i in 0..j {
                            let a = self.face(q - 1, i, self.face(q, j, x));
                            let b = self.face(q - 1, j - 1, self.face(q, i, x));
                            if a != b {
                                return Err(Error::InvalidSimplicial(format!(
                                    "d_{i} d_{j} != d_{} d_{i} at level {q} simplex {x}",
                                    j - 1
                                )));
                            }
                        }
                    }
                }
                // s_i s_j = s_{j+1} s_i for i <= j
                if q + 2 <= dim {
                    for j in 0..=q {
                        for i in 0..=j {
                            let a = self.degeneracy(q + 1, i, self.degeneracy(q, j, x));
                            let b = self.degeneracy(q + 1, j + 1, self.degeneracy(q, i, x));
                            if a != b {
                                return Err(Error::InvalidSimplicial(format!(
                                    "s_{i} s_{j} != s_{} s_{i} at level {q} simplex {x}",
                                    j + 1
                                )));
                            }
                        }
                    }
                }
                // mixed identities through level q+1
                if q < dim {
                    for j in 0..=q {
                        let sx = self.degeneracy(q, j, x);
                        for i in 0..=q + 1 {
                            let got = self.face(q + 1, i, sx);
                            if i == j || i == j + 1 {
                                if got != x {
                                    return Err(Error::InvalidSimplicial(format!(
                                        "d_{i} s_{j} != id at level {q} simplex {x}"
                                    )));
                                }
                            } else if q >= 1 {
                                let expect = if i < j {
                                    self.degeneracy(q - 1, j - 1, self.face(q, i, x))
                                } else {
                                    self.degeneracy(q - 1, j, self.face(q, i - 1, x))
                                };
                                if got != expect {
                                    return Err(Error::InvalidSimplicial(format!(
                                        "d_{i} s_{j} mismatch at level {q} simplex {x}"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Truncation dimension (top stored level).
    pub fn dim(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn size(&self, q: usize) -> usize {
        if q <= self.dim() {
            self.levels[q].labels.len()
        } else {
            0
        }
    }

    pub fn label(&self, q: usize, x: usize) -> &str {
        &self.levels[q].labels[x]
    }

    pub fn find_label(&self, q: usize, label: &str) -> Option<usize> {
        self.levels[q].labels.iter().position(|l| l == label)
    }

    pub fn face(&self, q: usize, i: usize, x: usize) -> usize {
        self.levels[q].faces[i][x]
    }

    pub fn degeneracy(&self, q: usize, i: usize, x: usize) -> usize {
        self.levels[q].degeneracies[i][x]
    }

    pub fn is_degenerate(&self, q: usize, x: usize) -> bool {
        self.levels[q].degeneracy_witness[x].is_some()
    }

    /// Indices of nondegenerate simplices at level `q` (empty above `dim`).
    pub fn nondegenerate(&self, q: usize) -> Vec<usize> {
        if q > self.dim() {
            return vec![];
        }
        (0..self.size(q))
            .filter(|&x| !self.is_degenerate(q, x))
            .collect()
    }

    /// Nondegenerate core `(p, y)` of a simplex.
    pub fn core(&self, q: usize, x: usize) -> (usize, usize) {
        let mut level = q;
        let mut cur = x;
        while let Some((_, y)) = self.levels[level].degeneracy_witness[cur] {
            cur = y;
            level -= 1;
        }
        (level, cur)
    }

    /// Iterated front face: restrict a level-`q` simplex to its first
    /// `p + 1` vertices by dropping last faces.
    pub fn front_face(&self, q: usize, p: usize, x: usize) -> usize {
        assert!(p <= q);
        let mut cur = x;
        for lvl in ((p + 1)..=q).rev() {
            cur = self.face(lvl, lvl, cur);
        }
        cur
    }

    /// Iterated back face: restrict to the last `p + 1` vertices by dropping
    /// leading faces.
    pub fn back_face(&self, q: usize, p: usize, x: usize) -> usize {
        assert!(p <= q);
        let mut cur = x;
        for lvl in ((p + 1)..=q).rev() {
            cur = self.face(lvl, 0, cur);
        }
        cur
    }

    /// Check that a membership table is closed under faces and degeneracies.
    pub fn check_subset_closed(&self, member: &[Vec<bool>]) -> Result<()> {
        if member.len() != self.levels.len()
            || member
                .iter()
                .zip(&self.levels)
                .any(|(m, l)| m.len() != l.labels.len())
        {
            return Err(Error::InvalidCover(
                "membership table shape mismatch".into(),
            ));
        }
        for q in 1..=self.dim() {
            for x in 0..self.size(q) {
                if member[q][x] {
                    for i in 0..=q {
                        let f = self.face(q, i, x);
                        if !member[q - 1][f] {
                            return Err(Error::InvalidCover(format!(
                                "piece not face-closed: level {q} simplex '{}' kept but face d_{i} '{}' missing",
                                self.label(q, x),
                                self.label(q - 1, f)
                            )));
                        }
                    }
                }
            }
        }
        for q in 0..self.dim() {
            for x in 0..self.size(q) {
                if member[q][x] {
                    for i in 0..=q {
                        let s = self.degeneracy(q, i, x);
                        if !member[q + 1][s] {
                            return Err(Error::InvalidCover(format!(
                                "piece not degeneracy-closed at level {q} simplex '{}'",
                                self.label(q, x)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Restrict to a closed subset, returning the submodel and its inclusion.
    pub fn subcomplex(&self, member: &[Vec<bool>]) -> Result<(SimplicialSetModel, SimplicialMap)> {
        self.check_subset_closed(member)?;
        let mut index: Vec<Vec<Option<usize>>> = Vec::new();
        let mut labels: Vec<Vec<String>> = Vec::new();
        for q in 0..=self.dim() {
            let mut idx = vec![None; self.size(q)];
            let mut lab = Vec::new();
            for x in 0..self.size(q) {
                if member[q][x] {
                    idx[x] = Some(lab.len());
                    lab.push(self.label(q, x).to_string());
                }
            }
            index.push(idx);
            labels.push(lab);
        }
        let mut faces = Vec::new();
        for q in 1..=self.dim() {
            let mut per_i = Vec::new();
            for i in 0..=q {
                let mut tbl = Vec::new();
                for x in 0..self.size(q) {
                    if member[q][x] {
                        tbl.push(index[q - 1][self.face(q, i, x)].unwrap());
                    }
                }
                per_i.push(tbl);
            }
            faces.push(per_i);
        }
        let mut degens = Vec::new();
        for q in 0..self.dim() {
            let mut per_i = Vec::new();
            for i in 0..=q {
                let mut tbl = Vec::new();
                for x in 0..self.size(q) {
                    if member[q][x] {
                        tbl.push(index[q + 1][self.degeneracy(q, i, x)].unwrap());
                    }
                }
                per_i.push(tbl);
            }
            degens.push(per_i);
        }
        let sub = SimplicialSetModel::from_tables(labels, faces, degens)?;
        let map_levels: Vec<Vec<usize>> = (0..=self.dim())
            .map(|q| (0..self.size(q)).filter(|&x| member[q][x]).collect())
            .collect();
        let incl = SimplicialMap::new(&sub, self, map_levels)?;
        Ok((sub, incl))
    }

    /// Extend a nondegenerate membership table to all stored simplices (a
    /// degenerate simplex belongs iff its core does).
    pub fn close_membership(&self, nondeg_member: &[Vec<bool>]) -> Vec<Vec<bool>> {
        (0..=self.dim())
            .map(|q| {
                (0..self.size(q))
                    .map(|x| {
                        let (p, y) = self.core(q, x);
                        nondeg_member[p][y]
                    })
                    .collect()
            })
            .collect()
    }

    /// The one-point space stored through level `dim`.
    pub fn point(dim: usize) -> SimplicialSetModel {
        SimplicialSetModel::discrete_at_dim(vec!["pt".into()], dim)
    }

    /// Discrete simplicial set on the given points, truncated at level 0.
    pub fn discrete(labels: Vec<String>) -> SimplicialSetModel {
        SimplicialSetModel::from_tables(vec![labels], vec![], vec![]).expect("discrete model")
    }

    /// Discrete point set stored through level `dim` (all maps identity).
    pub fn discrete_at_dim(labels: Vec<String>, dim: usize) -> SimplicialSetModel {
        let n = labels.len();
        let lvl_labels: Vec<Vec<String>> = (0..=dim).map(|_| labels.clone()).collect();
        let ident: Vec<usize> = (0..n).collect();
        let faces = (1..=dim).map(|q| vec![ident.clone(); q + 1]).collect();
        let degens = (0..dim).map(|q| vec![ident.clone(); q + 1]).collect();
        SimplicialSetModel::from_tables(lvl_labels, faces, degens).expect("discrete model")
    }

    /// Simplicial set generated by an abstract simplicial complex. Input
    /// simplices are strictly increasing vertex tuples; faces are closed over
    /// automatically and degenerate simplices are materialized through the
    /// top dimension via surjection normal forms.
    pub fn from_complex(vertex_labels: &[String], simplices: &[Vec<usize>]) -> Result<Self> {
        for s in simplices {
            if s.is_empty() {
                return Err(Error::InvalidSimplicial("empty simplex".into()));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidSimplicial(format!(
                    "simplex {s:?} is not strictly increasing"
                )));
            }
            if s.iter().any(|&v| v >= vertex_labels.len()) {
                return Err(Error::InvalidSimplicial(format!(
                    "simplex {s:?} has vertex out of range"
                )));
            }
        }
        let dim_top = simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0);
        let mut nondeg: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim_top + 1];
        let mut seen: Vec<HashMap<Vec<usize>, usize>> = vec![HashMap::new(); dim_top + 1];
        let mut stack: Vec<Vec<usize>> = simplices.to_vec();
        for v in 0..vertex_labels.len() {
            stack.push(vec![v]);
        }
        while let Some(s) = stack.pop() {
            let p = s.len() - 1;
            if seen[p].contains_key(&s) {
                continue;
            }
            seen[p].insert(s.clone(), nondeg[p].len());
            nondeg[p].push(s.clone());
            if p > 0 {
                for i in 0..=p {
                    let mut f = s.clone();
                    f.remove(i);
                    stack.push(f);
                }
            }
        }
        // deterministic basis order: sort by vertex tuple
        for (p, lvl) in nondeg.iter_mut().enumerate() {
            lvl.sort();
            seen[p] = lvl
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect();
        }
        build_from_nondegenerate(vertex_labels, &nondeg, &seen)
    }

    /// Product with a discrete point set: level `q` is `points × level_q`,
    /// with faces and degeneracies acting on the space factor. Also returns
    /// the decoding table `index -> (point, simplex)`.
    pub fn product_with_discrete(
        &self,
        point_labels: &[String],
    ) -> (SimplicialSetModel, Vec<Vec<(usize, usize)>>) {
        let np = point_labels.len();
        let dim = self.dim();
        let mut labels = Vec::new();
        let mut decode: Vec<Vec<(usize, usize)>> = Vec::new();
        for q in 0..=dim {
            let mut lab = Vec::new();
            let mut dec = Vec::new();
            for a in 0..np {
                for x in 0..self.size(q) {
                    lab.push(format!("{}*{}", point_labels[a], self.label(q, x)));
                    dec.push((a, x));
                }
            }
            labels.push(lab);
            decode.push(dec);
        }
        let mut faces = Vec::new();
        for q in 1..=dim {
            let mut per_i = Vec::new();
            for i in 0..=q {
                let mut tbl = Vec::new();
                for a in 0..np {
                    for x in 0..self.size(q) {
                        tbl.push(a * self.size(q - 1) + self.face(q, i, x));
                    }
                }
                per_i.push(tbl);
            }
            faces.push(per_i);
        }
        let mut degens = Vec::new();
        for q in 0..dim {
            let mut per_i = Vec::new();
            for i in 0..=q {
                let mut tbl = Vec::new();
                for a in 0..np {
                    for x in 0..self.size(q) {
                        tbl.push(a * self.size(q + 1) + self.degeneracy(q, i, x));
                    }
                }
                per_i.push(tbl);
            }
            degens.push(per_i);
        }
        let model = SimplicialSetModel::from_tables(labels, faces, degens).expect("product model");
        (model, decode)
    }

    /// Disjoint union of same-dimension models; returns per-part index
    /// offsets at each level.
    pub fn disjoint_union(parts: &[&SimplicialSetModel]) -> (SimplicialSetModel, Vec<Vec<usize>>) {
        assert!(!parts.is_empty());
        let dim = parts[0].dim();
        assert!(parts.iter().all(|p| p.dim() == dim), "dimension mismatch");
        let mut labels = vec![Vec::new(); dim + 1];
        let mut offsets: Vec<Vec<usize>> = vec![Vec::new(); dim + 1];
        for q in 0..=dim {
            for part in parts {
                offsets[q].push(labels[q].len());
                for x in 0..part.size(q) {
                    labels[q].push(part.label(q, x).to_string());
                }
            }
        }
        let mut faces = Vec::new();
        for q in 1..=dim {
            let mut per_i = Vec::new();
            for i in 0..=q {
                let mut tbl = Vec::new();
                for (k, part) in parts.iter().enumerate() {
                    for x in 0..part.size(q) {
                        tbl.push(offsets[q - 1][k] + part.face(q, i, x));
                    }
                }
                per_i.push(tbl);
            }
            faces.push(per_i);
        }
        let mut degens = Vec::new();
        for q in 0..dim {
            let mut per_i = Vec::new();
            for i in 0..=q {
                let mut tbl = Vec::new();
                for (k, part) in parts.iter().enumerate() {
                    for x in 0..part.size(q) {
                        tbl.push(offsets[q + 1][k] + part.degeneracy(q, i, x));
                    }
                }
                per_i.push(tbl);
            }
            degens.push(per_i);
        }
        let model = SimplicialSetModel::from_tables(labels, faces, degens).expect("union model");
        (model, offsets)
    }
}

/// Tables for the simplicial set generated by face-closed nondegenerate
/// simplices given as strictly increasing vertex tuples.
fn build_from_nondegenerate(
    vertex_labels: &[String],
    nondeg: &[Vec<Vec<usize>>],
    seen: &[HashMap<Vec<usize>, usize>],
) -> Result<SimplicialSetModel> {
    let dim_top = nondeg.len() - 1;
    type Key = (usize, usize, Surjection);
    let mut level_keys: Vec<Vec<Key>> = Vec::new();
    let mut level_index: Vec<HashMap<Key, usize>> = Vec::new();
    for q in 0..=dim_top {
        let mut keys = Vec::new();
        for (p, taus) in nondeg.iter().enumerate().take(q + 1) {
            for t in 0..taus.len() {
                for surj in monotone_surjections(q, p) {
                    keys.push((p, t, surj));
                }
            }
        }
        let index: HashMap<Key, usize> = keys
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();
        level_keys.push(keys);
        level_index.push(index);
    }
    let labels: Vec<Vec<String>> = level_keys
        .iter()
        .map(|keys| {
            keys.iter()
                .map(|(p, t, surj)| {
                    let base = nondeg[*p][*t]
                        .iter()
                        .map(|&v| vertex_labels[v].clone())
                        .collect::<Vec<_>>()
                        .join(".");
                    if surj.len() == *p + 1 {
                        base
                    } else {
                        format!(
                            "{base}|{}",
                            surj.iter()
                                .map(|v| v.to_string())
                                .collect::<Vec<_>>()
                                .join("")
                        )
                    }
                })
                .collect()
        })
        .collect();
    let mut faces = Vec::new();
    for q in 1..=dim_top {
        let mut per_i = Vec::new();
        for i in 0..=q {
            let mut tbl = Vec::new();
            for (p, t, surj) in &level_keys[q] {
                // compose the surjection with the coface, then refactor
                let mut w = surj.clone();
                w.remove(i);
                let (hit, reduced) = refactor_monotone(&w);
                let tau = &nondeg[*p][*t];
                let sub: Vec<usize> = hit.iter().map(|&v| tau[v]).collect();
                let p2 = sub.len() - 1;
                let t2 = *seen[p2]
                    .get(&sub)
                    .ok_or_else(|| Error::InvalidSimplicial("face closure broken".into()))?;
                tbl.push(level_index[q - 1][&(p2, t2, reduced)]);
            }
            per_i.push(tbl);
        }
        faces.push(per_i);
    }
    let mut degens = Vec::new();
    for q in 0..dim_top {
        let mut per_i = Vec::new();
        for i in 0..=q {
            let mut tbl = Vec::new();
            for (p, t, surj) in &level_keys[q] {
                let mut w = surj.clone();
                w.insert(i, surj[i]);
                tbl.push(level_index[q + 1][&(*p, *t, w)]);
            }
            per_i.push(tbl);
        }
        degens.push(per_i);
    }
    SimplicialSetModel::from_tables(labels, faces, degens)
}

/// All monotone surjections `[q] ->> [p]` as value vectors.
fn monotone_surjections(q: usize, p: usize) -> Vec<Surjection> {
    if p > q {
        return vec![];
    }
    if p == 0 {
        return vec![vec![0; q + 1]];
    }
    // choose the p positions (among the q gaps) where the value steps up
    let mut out = Vec::new();
    let mut choose = vec![0usize; p];
    fn rec(
        start: usize,
        q: usize,
        p: usize,
        pos: usize,
        choose: &mut Vec<usize>,
        out: &mut Vec<Surjection>,
    ) {
        if pos == p {
            let mut v = Vec::with_capacity(q + 1);
            let mut val = 0;
            for idx in 0..q {
                v.push(val);
                if choose.contains(&idx) {
                    val += 1;
                }
            }
            v.push(val);
            out.push(v);
            return;
        }
        for c in start..q {
            choose[pos] = c;
            rec(c + 1, q, p, pos + 1, choose, out);
        }
    }
    rec(0, q, p, 0, &mut choose, &mut out);
    out
}

/// Factor a monotone map as injection after surjection; returns hit values
/// and the reduced surjection.
fn refactor_monotone(w: &[usize]) -> (Vec<usize>, Surjection) {
    let mut hit: Vec<usize> = w.to_vec();
    hit.dedup();
    let reduced = w
        .iter()
        .map(|v| hit.iter().position(|h| h == v).unwrap())
        .collect();
    (hit, reduced)
}

/// A simplicial map between same-dimension models, stored levelwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    levels: Vec<Vec<usize>>,
}

impl SimplicialMap {
    pub fn new(
        source: &SimplicialSetModel,
        target: &SimplicialSetModel,
        levels: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if source.dim() != target.dim() {
            return Err(Error::InvalidSimplicial(
                "simplicial map between models of different dimension".into(),
            ));
        }
        if levels.len() != source.dim() + 1 {
            return Err(Error::InvalidSimplicial("map level count mismatch".into()));
        }
        for q in 0..=source.dim() {
            if levels[q].len() != source.size(q) {
                return Err(Error::InvalidSimplicial(format!(
                    "map table at level {q} has wrong length"
                )));
            }
            if levels[q].iter().any(|&t| t >= target.size(q)) {
                return Err(Error::InvalidSimplicial(format!(
                    "map target out of range at level {q}"
                )));
            }
        }
        let map = SimplicialMap { levels };
        map.check_simplicial(source, target)?;
        Ok(map)
    }

    fn check_simplicial(
        &self,
        source: &SimplicialSetModel,
        target: &SimplicialSetModel,
    ) -> Result<()> {
        for q in 1..=source.dim() {
            for x in 0..source.size(q) {
                for i in 0..=q {
                    let a = self.levels[q - 1][source.face(q, i, x)];
                    let b = target.face(q, i, self.levels[q][x]);
                    if a != b {
                        return Err(Error::InvalidSimplicial(format!(
                            "map does not commute with d_{i} at level {q} simplex '{}'",
                            source.label(q, x)
                        )));
                    }
                }
            }
        }
        for q in 0..source.dim() {
            for x in 0..source.size(q) {
                for i in 0..=q {
                    let a = self.levels[q + 1][source.degeneracy(q, i, x)];
                    let b = target.degeneracy(q, i, self.levels[q][x]);
                    if a != b {
                        return Err(Error::InvalidSimplicial(format!(
                            "map does not commute with s_{i} at level {q} simplex '{}'",
                            source.label(q, x)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(model: &SimplicialSetModel) -> Self {
        SimplicialMap {
            levels: (0..=model.dim())
                .map(|q| (0..model.size(q)).collect())
                .collect(),
        }
    }

    pub fn apply(&self, q: usize, x: usize) -> usize {
        self.levels[q][x]
    }

    /// `self ∘ first` (i.e. `x ↦ self(first(x))`).
    pub fn compose(&self, first: &SimplicialMap) -> SimplicialMap {
        assert_eq!(self.levels.len(), first.levels.len());
        SimplicialMap {
            levels: first
                .levels
                .iter()
                .enumerate()
                .map(|(q, tbl)| tbl.iter().map(|&x| self.levels[q][x]).collect())
                .collect(),
        }
    }
}
