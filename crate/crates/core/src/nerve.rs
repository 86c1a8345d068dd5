//! Truncated nerve diagrams: the simplicial direction of the double complex.
//!
//! A `NerveDiagram` holds spaces `X_0..X_R`, face maps `ε_i : X_r → X_{r-1}`
//! and degeneracies `η_i : X_r → X_{r+1}`, each a levelwise simplicial map.
//! Constructors cover the groupoid nerve (composable tuples), the Čech nerve
//! of a cover, and the transformation-groupoid nerve of a group action.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::simplicial::{SimplicialMap, SimplicialSetModel};

/// A truncated simplicial diagram of simplicial sets.
#[derive(Clone, Debug)]
pub struct NerveDiagram {
    spaces: Vec<SimplicialSetModel>,
    /// `faces[r-1][i]` is `ε_i : X_r → X_{r-1}`.
    faces: Vec<Vec<SimplicialMap>>,
    /// `degeneracies[r][i]` is `η_i : X_r → X_{r+1}`.
    degeneracies: Vec<Vec<SimplicialMap>>,
}

impl NerveDiagram {
    pub fn new(
        spaces: Vec<SimplicialSetModel>,
        faces: Vec<Vec<SimplicialMap>>,
        degeneracies: Vec<Vec<SimplicialMap>>,
    ) -> Result<Self> {
        let nd = NerveDiagram {
            spaces,
            faces,
            degeneracies,
        };
        nd.validate()?;
        Ok(nd)
    }

    pub fn cutoff(&self) -> usize {
        self.spaces.len() - 1
    }

    /// Internal dimension of the level spaces (uniform across levels).
    pub fn space_dim(&self) -> usize {
        self.spaces[0].dim()
    }

    pub fn space(&self, r: usize) -> &SimplicialSetModel {
        &self.spaces[r]
    }

    /// `ε_i : X_r → X_{r-1}`, `1 <= r <= cutoff`, `0 <= i <= r`.
    pub fn face(&self, r: usize, i: usize) -> &SimplicialMap {
        &self.faces[r - 1][i]
    }

    /// `η_i : X_r → X_{r+1}`, `0 <= r < cutoff`, `0 <= i <= r`.
    pub fn degeneracy(&self, r: usize, i: usize) -> &SimplicialMap {
        &self.degeneracies[r][i]
    }

    /// Is the level-`q` simplex `x` of `X_r` degenerate in the r-direction,
    /// i.e. in the image of some `η_i : X_{r-1} → X_r`?
    pub fn r_degenerate_table(&self, r: usize) -> Vec<Vec<bool>> {
        let dim = self.space_dim();
        let mut out: Vec<Vec<bool>> = (0..=dim)
            .map(|q| vec![false; self.space(r).size(q)])
            .collect();
        if r == 0 {
            return out;
        }
        for i in 0..r {
            let eta = self.degeneracy(r - 1, i);
            for (q, row) in out.iter_mut().enumerate() {
                for x in 0..self.space(r - 1).size(q) {
                    row[eta.apply(q, x)] = true;
                }
            }
        }
        out
    }

    /// Exhaustive simplicial identities in the r-direction through the
    /// cutoff; the internal compatibility of each `ε_i`, `η_i` was already
    /// checked when the maps were built.
    pub fn validate(&self) -> Result<()> {
        let cutoff = self.cutoff();
        if self.faces.len() != cutoff || self.degeneracies.len() != cutoff {
            return Err(Error::InvalidSimplicial(
                "nerve diagram table count mismatch".into(),
            ));
        }
        for r in 1..=cutoff {
            if self.faces[r - 1].len() != r + 1 {
                return Err(Error::InvalidSimplicial(format!(
                    "expected {} face maps out of X_{r}",
                    r + 1
                )));
            }
        }
        for r in 0..cutoff {
            if self.degeneracies[r].len() != r + 1 {
                return Err(Error::InvalidSimplicial(format!(
                    "expected {} degeneracy maps out of X_{r}",
                    r + 1
                )));
            }
        }
        let eq = |a: &SimplicialMap, b: &SimplicialMap, what: &str| -> Result<()> {
            if a != b {
                return Err(Error::InvalidSimplicial(format!(
                    "nerve identity {what} fails"
                )));
            }
            Ok(())
        };
        // ε_i ε_j = ε_{j-1} ε_i for i < j
        for r in 2..=cutoff {
            for j in 1..=r {
                for i in 0..j {
                    let lhs = self.face(r - 1, i).compose(self.face(r, j));
                    let rhs = self.face(r - 1, j - 1).compose(self.face(r, i));
                    eq(&lhs, &rhs, &format!("ε_{i} ε_{j} at r={r}"))?;
                }
            }
        }
        // η_i η_j = η_{j+1} η_i for i <= j
        for r in 0..cutoff.saturating_sub(1) {
            for j in 0..=r {
                for i in 0..=j {
                    let lhs = self.degeneracy(r + 1, i).compose(self.degeneracy(r, j));
                    let rhs = self.degeneracy(r + 1, j + 1).compose(self.degeneracy(r, i));
                    eq(&lhs, &rhs, &format!("η_{i} η_{j} at r={r}"))?;
                }
            }
        }
        // mixed identities
        for r in 0..cutoff {
            for j in 0..=r {
                for i in 0..=r + 1 {
                    let lhs = self.face(r + 1, i).compose(self.degeneracy(r, j));
                    if i == j || i == j + 1 {
                        let ident = SimplicialMap::identity(self.space(r));
                        eq(&lhs, &ident, &format!("ε_{i} η_{j} = id at r={r}"))?;
                    } else if r >= 1 {
                        let rhs = if i < j {
                            self.degeneracy(r - 1, j - 1).compose(self.face(r, i))
                        } else {
                            self.degeneracy(r - 1, j).compose(self.face(r, i - 1))
                        };
                        eq(&lhs, &rhs, &format!("ε_{i} η_{j} at r={r}"))?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Restriction to levels `0..=new_cutoff`.
    pub fn truncated(&self, new_cutoff: usize) -> NerveDiagram {
        assert!(new_cutoff <= self.cutoff());
        NerveDiagram {
            spaces: self.spaces[..=new_cutoff].to_vec(),
            faces: self.faces[..new_cutoff].to_vec(),
            degeneracies: self.degeneracies[..new_cutoff.min(self.degeneracies.len())]
                .iter()
                .take(new_cutoff)
                .cloned()
                .collect(),
        }
    }

    /// Structural equality of level spaces and structure maps, ignoring
    /// labels.
    pub fn same_shape(&self, other: &NerveDiagram) -> bool {
        if self.cutoff() != other.cutoff() || self.space_dim() != other.space_dim() {
            return false;
        }
        for r in 0..=self.cutoff() {
            for q in 0..=self.space_dim() {
                if self.space(r).size(q) != other.space(r).size(q) {
                    return false;
                }
            }
        }
        self.faces == other.faces && self.degeneracies == other.degeneracies
    }
}

/// Nerve of a finite groupoid: `X_r` is the discrete set of composable
/// r-tuples, `X_0` the objects.
pub fn nerve(g: &FiniteGroupoid, cutoff: usize) -> Result<NerveDiagram> {
    g.require_valid()?;
    // enumerate composable tuples per level
    let mut tuples: Vec<Vec<Vec<usize>>> = Vec::with_capacity(cutoff + 1);
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::with_capacity(cutoff + 1);
    tuples.push((0..g.object_count()).map(|x| vec![x]).collect()); // level 0 sentinel: object ids
    index.push(
        tuples[0]
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect(),
    );
    for r in 1..=cutoff {
        let mut lvl = Vec::new();
        if r == 1 {
            for a in 0..g.arrow_count() {
                lvl.push(vec![a]);
            }
        } else {
            for t in &tuples[r - 1] {
                let last = *t.last().unwrap();
                for a in 0..g.arrow_count() {
                    if g.source(a) == g.target(last) {
                        let mut t2 = t.clone();
                        t2.push(a);
                        lvl.push(t2);
                    }
                }
            }
        }
        let idx = lvl
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        tuples.push(lvl);
        index.push(idx);
    }
    let spaces: Vec<SimplicialSetModel> = (0..=cutoff)
        .map(|r| {
            let labels = if r == 0 {
                g.objects.clone()
            } else {
                tuples[r]
                    .iter()
                    .map(|t| {
                        t.iter()
                            .map(|&a| g.arrows[a].id.clone())
                            .collect::<Vec<_>>()
                            .join("|")
                    })
                    .collect()
            };
            SimplicialSetModel::discrete(labels)
        })
        .collect();
    let mut faces = Vec::new();
    for r in 1..=cutoff {
        let mut per_i = Vec::new();
        for i in 0..=r {
            let tbl: Vec<usize> = tuples[r]
                .iter()
                .map(|t| {
                    if r == 1 {
                        if i == 0 {
                            g.target(t[0])
                        } else {
                            g.source(t[0])
                        }
                    } else if i == 0 {
                        index[r - 1][&t[1..].to_vec()]
                    } else if i == r {
                        index[r - 1][&t[..r - 1].to_vec()]
                    } else {
                        let mut t2: Vec<usize> = t[..i - 1].to_vec();
                        t2.push(g.compose(t[i - 1], t[i]).expect("composable"));
                        t2.extend_from_slice(&t[i + 1..]);
                        index[r - 1][&t2]
                    }
                })
                .collect();
            per_i.push(SimplicialMap::new(&spaces[r], &spaces[r - 1], vec![tbl])?);
        }
        faces.push(per_i);
    }
    let mut degeneracies = Vec::new();
    for r in 0..cutoff {
        let mut per_i = Vec::new();
        for i in 0..=r {
            let tbl: Vec<usize> = tuples[r]
                .iter()
                .map(|t| {
                    if r == 0 {
                        index[1][&vec![g.identities[t[0]]]]
                    } else {
                        let obj = if i == 0 {
                            g.source(t[0])
                        } else {
                            g.target(t[i - 1])
                        };
                        let mut t2: Vec<usize> = t[..i].to_vec();
                        t2.push(g.identities[obj]);
                        t2.extend_from_slice(&t[i..]);
                        index[r + 1][&t2]
                    }
                })
                .collect();
            per_i.push(SimplicialMap::new(&spaces[r], &spaces[r + 1], vec![tbl])?);
        }
        degeneracies.push(per_i);
    }
    NerveDiagram::new(spaces, faces, degeneracies)
}

/// A cover of a simplicial set model by face- and degeneracy-closed pieces.
#[derive(Clone, Debug)]
pub struct Cover {
    pub base: SimplicialSetModel,
    /// Full membership tables, one per piece.
    pub pieces: Vec<Vec<Vec<bool>>>,
}

impl Cover {
    /// Build from per-piece membership of nondegenerate simplices; degenerate
    /// simplices inherit membership from their cores.
    pub fn from_nondegenerate(
        base: SimplicialSetModel,
        pieces_nondeg: Vec<Vec<Vec<bool>>>,
    ) -> Result<Cover> {
        let pieces: Vec<Vec<Vec<bool>>> = pieces_nondeg
            .iter()
            .map(|p| base.close_membership(p))
            .collect();
        let cover = Cover { base, pieces };
        cover.validate()?;
        Ok(cover)
    }

    pub fn one_piece(base: SimplicialSetModel) -> Cover {
        let all: Vec<Vec<bool>> = (0..=base.dim()).map(|q| vec![true; base.size(q)]).collect();
        Cover {
            base,
            pieces: vec![all],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pieces.is_empty() {
            return Err(Error::InvalidCover("cover has no pieces".into()));
        }
        for p in &self.pieces {
            self.base.check_subset_closed(p)?;
        }
        for q in 0..=self.base.dim() {
            for x in 0..self.base.size(q) {
                if !self.pieces.iter().any(|p| p[q][x]) {
                    return Err(Error::InvalidCover(format!(
                        "simplex '{}' at level {q} not covered",
                        self.base.label(q, x)
                    )));
                }
            }
        }
        Ok(())
    }

    fn intersection_membership(&self, tuple: &[usize]) -> Vec<Vec<bool>> {
        (0..=self.base.dim())
            .map(|q| {
                (0..self.base.size(q))
                    .map(|x| tuple.iter().all(|&i| self.pieces[i][q][x]))
                    .collect()
            })
            .collect()
    }
}

/// Internal bookkeeping for one Čech level `X_r`.
struct CechLevel {
    tuples: Vec<Vec<usize>>,
    /// disjoint-union offsets per internal level, per tuple
    offsets: Vec<Vec<usize>>,
    /// base index -> local index, per tuple per internal level
    reverse: Vec<Vec<HashMap<usize, usize>>>,
    model: SimplicialSetModel,
}

fn tuples_of(pieces: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..pieces).map(move |i| {
                    let mut t2 = t.clone();
                    t2.push(i);
                    t2
                })
            })
            .collect();
    }
    out
}

fn build_cech_level(cover: &Cover, r: usize) -> Result<CechLevel> {
    let tuples = tuples_of(cover.pieces.len(), r + 1);
    let mut models = Vec::new();
    let mut reverse = Vec::new();
    for t in &tuples {
        let member = cover.intersection_membership(t);
        let (mut sub, incl) = cover.base.subcomplex(&member)?;
        // prefix labels with the tuple so union labels stay unique
        let tag = t
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let relabeled: Vec<Vec<String>> = (0..=sub.dim())
            .map(|q| {
                (0..sub.size(q))
                    .map(|x| format!("[{tag}]{}", sub.label(q, x)))
                    .collect()
            })
            .collect();
        sub = retag(&sub, relabeled)?;
        let rev: Vec<HashMap<usize, usize>> = (0..=sub.dim())
            .map(|q| (0..sub.size(q)).map(|x| (incl.apply(q, x), x)).collect())
            .collect();
        models.push(sub);
        reverse.push(rev);
    }
    let refs: Vec<&SimplicialSetModel> = models.iter().collect();
    let (model, offsets) = SimplicialSetModel::disjoint_union(&refs);
    Ok(CechLevel {
        tuples,
        offsets,
        reverse,
        model,
    })
}

fn retag(m: &SimplicialSetModel, labels: Vec<Vec<String>>) -> Result<SimplicialSetModel> {
    let mut faces = Vec::new();
    let mut degens = Vec::new();
    for q in 0..=m.dim() {
        if q > 0 {
            faces.push(
                (0..=q)
                    .map(|i| (0..m.size(q)).map(|x| m.face(q, i, x)).collect())
                    .collect(),
            );
        }
        if q < m.dim() {
            degens.push(
                (0..=q)
                    .map(|i| (0..m.size(q)).map(|x| m.degeneracy(q, i, x)).collect())
                    .collect(),
            );
        }
    }
    SimplicialSetModel::from_tables(labels, faces, degens)
}

/// Čech nerve of a cover: `X_r` is the disjoint union over ordered
/// `(r+1)`-tuples of the piece intersections; `ε_i` deletes index `i`,
/// `η_i` repeats it.
pub fn cech_nerve(cover: &Cover, cutoff: usize) -> Result<NerveDiagram> {
    cover.validate()?;
    let levels: Vec<CechLevel> = (0..=cutoff)
        .map(|r| build_cech_level(cover, r))
        .collect::<Result<_>>()?;
    let tuple_pos = |lvl: &CechLevel, t: &[usize]| -> usize {
        lvl.tuples.iter().position(|u| u == t).expect("tuple")
    };
    let spaces: Vec<SimplicialSetModel> = levels.iter().map(|l| l.model.clone()).collect();
    let dim = cover.base.dim();
    let mut faces = Vec::new();
    for r in 1..=cutoff {
        let (src, dst) = (&levels[r], &levels[r - 1]);
        let mut per_i = Vec::new();
        for i in 0..=r {
            let mut tables: Vec<Vec<usize>> = vec![Vec::new(); dim + 1];
            for (c, t) in src.tuples.iter().enumerate() {
                let mut t2 = t.clone();
                t2.remove(i);
                let c2 = tuple_pos(dst, &t2);
                for q in 0..=dim {
                    let n = src.model.size(q);
                    let start = src.offsets[q][c];
                    let count = if c + 1 < src.offsets[q].len() {
                        src.offsets[q][c + 1] - start
                    } else {
                        n - start
                    };
                    for local in 0..count {
                        // recover the base simplex through this component
                        let base_idx = *src.reverse[c][q]
                            .iter()
                            .find(|(_, &v)| v == local)
                            .map(|(k, _)| k)
                            .expect("component member");
                        let dst_local = dst.reverse[c2][q][&base_idx];
                        tables[q].push(dst.offsets[q][c2] + dst_local);
                    }
                }
            }
            per_i.push(SimplicialMap::new(&spaces[r], &spaces[r - 1], tables)?);
        }
        faces.push(per_i);
    }
    let mut degeneracies = Vec::new();
    for r in 0..cutoff {
        let (src, dst) = (&levels[r], &levels[r + 1]);
        let mut per_i = Vec::new();
        for i in 0..=r {
            let mut tables: Vec<Vec<usize>> = vec![Vec::new(); dim + 1];
            for (c, t) in src.tuples.iter().enumerate() {
                let mut t2 = t.clone();
                t2.insert(i, t[i]);
                let c2 = tuple_pos(dst, &t2);
                for q in 0..=dim {
                    let n = src.model.size(q);
                    let start = src.offsets[q][c];
                    let count = if c + 1 < src.offsets[q].len() {
                        src.offsets[q][c + 1] - start
                    } else {
                        n - start
                    };
                    for local in 0..count {
                        let base_idx = *src.reverse[c][q]
                            .iter()
                            .find(|(_, &v)| v == local)
                            .map(|(k, _)| k)
                            .expect("component member");
                        let dst_local = dst.reverse[c2][q][&base_idx];
                        tables[q].push(dst.offsets[q][c2] + dst_local);
                    }
                }
            }
            per_i.push(SimplicialMap::new(&spaces[r], &spaces[r + 1], tables)?);
        }
        degeneracies.push(per_i);
    }
    NerveDiagram::new(spaces, faces, degeneracies)
}

/// Transformation-groupoid nerve of a simplicial action of a finite
/// one-object groupoid (a group) on a space. `action[g]` must be a
/// simplicial automorphism, functorially in `g`.
pub fn action_nerve(
    group: &FiniteGroupoid,
    space: &SimplicialSetModel,
    action: &[SimplicialMap],
    cutoff: usize,
) -> Result<NerveDiagram> {
    group.require_valid()?;
    if group.object_count() != 1 {
        return Err(Error::InvalidAction("group must have one object".into()));
    }
    let n = group.arrow_count();
    if action.len() != n {
        return Err(Error::InvalidAction(
            "one map per group element required".into(),
        ));
    }
    for (g, m) in action.iter().enumerate() {
        // re-validate as an endomorphism of the space
        let tables: Vec<Vec<usize>> = (0..=space.dim())
            .map(|q| (0..space.size(q)).map(|x| m.apply(q, x)).collect())
            .collect();
        SimplicialMap::new(space, space, tables).map_err(|e| {
            Error::InvalidAction(format!("action of element {g} is not simplicial: {e}"))
        })?;
    }
    let e = group.identities[0];
    let ident = SimplicialMap::identity(space);
    if action[e] != ident {
        return Err(Error::InvalidAction("identity must act trivially".into()));
    }
    for g in 0..n {
        for h in 0..n {
            let gh = group.compose(g, h).expect("group");
            let lhs = action[h].compose(&action[g]);
            if lhs != action[gh] {
                return Err(Error::InvalidAction(format!(
                    "action is not a homomorphism at ({g}, {h})"
                )));
            }
        }
    }
    // X_r = G^r x space, point-major encoding via product_with_discrete
    let g_tuples: Vec<Vec<Vec<usize>>> = (0..=cutoff).map(|r| tuples_of(n, r)).collect();
    let mut spaces_out = Vec::new();
    for tuples in g_tuples.iter() {
        let labels: Vec<String> = tuples
            .iter()
            .map(|t| {
                if t.is_empty() {
                    "()".to_string()
                } else {
                    t.iter()
                        .map(|&g| group.arrows[g].id.clone())
                        .collect::<Vec<_>>()
                        .join("|")
                }
            })
            .collect();
        let (model, _) = space.product_with_discrete(&labels);
        spaces_out.push(model);
    }
    let tuple_rank = |r: usize, t: &[usize]| -> usize {
        g_tuples[r].iter().position(|u| u == t).expect("tuple")
    };
    let enc = |_r: usize, a: usize, q: usize, x: usize| a * space.size(q) + x;
    let dim = space.dim();
    let mut faces = Vec::new();
    for r in 1..=cutoff {
        let mut per_i = Vec::new();
        for i in 0..=r {
            let mut tables: Vec<Vec<usize>> = vec![Vec::new(); dim + 1];
            for (a, t) in g_tuples[r].iter().enumerate() {
                for q in 0..=dim {
                    for x in 0..space.size(q) {
                        let (t2, x2) = if i == 0 {
                            (t[1..].to_vec(), action[t[0]].apply(q, x))
                        } else if i == r {
                            (t[..r - 1].to_vec(), x)
                        } else {
                            let mut u: Vec<usize> = t[..i - 1].to_vec();
                            u.push(group.compose(t[i - 1], t[i]).expect("group"));
                            u.extend_from_slice(&t[i + 1..]);
                            (u, x)
                        };
                        let a2 = tuple_rank(r - 1, &t2);
                        let _ = a;
                        tables[q].push(enc(r - 1, a2, q, x2));
                    }
                }
            }
            per_i.push(SimplicialMap::new(
                &spaces_out[r],
                &spaces_out[r - 1],
                tables,
            )?);
        }
        faces.push(per_i);
    }
    let mut degeneracies = Vec::new();
    for r in 0..cutoff {
        let mut per_i = Vec::new();
        for i in 0..=r {
            let mut tables: Vec<Vec<usize>> = vec![Vec::new(); dim + 1];
            for t in g_tuples[r].iter() {
                for q in 0..=dim {
                    for x in 0..space.size(q) {
                        let mut u: Vec<usize> = t[..i].to_vec();
                        u.push(e);
                        u.extend_from_slice(&t[i..]);
                        let a2 = tuple_rank(r + 1, &u);
                        tables[q].push(enc(r + 1, a2, q, x));
                    }
                }
            }
            per_i.push(SimplicialMap::new(
                &spaces_out[r],
                &spaces_out[r + 1],
                tables,
            )?);
        }
        degeneracies.push(per_i);
    }
    NerveDiagram::new(spaces_out, faces, degeneracies)
}

/// Nerve of the one-object unit groupoid, with level spaces stored at the
/// given internal dimension. Every structure map is the identity on a point.
pub fn point_nerve(dim: usize, cutoff: usize) -> NerveDiagram {
    let pt = SimplicialSetModel::point(dim);
    let spaces = vec![pt.clone(); cutoff + 1];
    let faces = (1..=cutoff)
        .map(|r| (0..=r).map(|_| SimplicialMap::identity(&pt)).collect())
        .collect();
    let degeneracies = (0..cutoff)
        .map(|r| (0..=r).map(|_| SimplicialMap::identity(&pt)).collect())
        .collect();
    NerveDiagram::new(spaces, faces, degeneracies).expect("point nerve")
}

/// A levelwise simplicial map of nerve diagrams commuting with all `ε_i`
/// and `η_i`.
#[derive(Clone, Debug)]
pub struct NerveMorphism {
    maps: Vec<SimplicialMap>,
}

impl NerveMorphism {
    pub fn new(
        source: &NerveDiagram,
        target: &NerveDiagram,
        maps: Vec<SimplicialMap>,
    ) -> Result<Self> {
        if source.cutoff() != target.cutoff() {
            return Err(Error::InvalidSimplicial(
                "nerve morphism cutoff mismatch".into(),
            ));
        }
        if maps.len() != source.cutoff() + 1 {
            return Err(Error::InvalidSimplicial(
                "nerve morphism needs one map per level".into(),
            ));
        }
        for (r, m) in maps.iter().enumerate() {
            let tables: Vec<Vec<usize>> = (0..=source.space_dim())
                .map(|q| {
                    (0..source.space(r).size(q))
                        .map(|x| m.apply(q, x))
                        .collect()
                })
                .collect();
            SimplicialMap::new(source.space(r), target.space(r), tables)?;
        }
        for r in 1..=source.cutoff() {
            for i in 0..=r {
                let lhs = maps[r - 1].compose(source.face(r, i));
                let rhs = target.face(r, i).compose(&maps[r]);
                if lhs != rhs {
                    return Err(Error::InvalidSimplicial(format!(
                        "morphism does not commute with ε_{i} at r={r}"
                    )));
                }
            }
        }
        for r in 0..source.cutoff() {
            for i in 0..=r {
                let lhs = maps[r + 1].compose(source.degeneracy(r, i));
                let rhs = target.degeneracy(r, i).compose(&maps[r]);
                if lhs != rhs {
                    return Err(Error::InvalidSimplicial(format!(
                        "morphism does not commute with η_{i} at r={r}"
                    )));
                }
            }
        }
        Ok(NerveMorphism { maps })
    }

    pub fn identity(n: &NerveDiagram) -> Self {
        NerveMorphism {
            maps: (0..=n.cutoff())
                .map(|r| SimplicialMap::identity(n.space(r)))
                .collect(),
        }
    }

    pub fn map(&self, r: usize) -> &SimplicialMap {
        &self.maps[r]
    }
}

/// Čech refinement: `assignment[j] = i` with piece `W_j ⊆ U_i` induces a
/// morphism from the fine Čech nerve to the coarse one.
pub fn cech_refinement(
    fine: &Cover,
    coarse: &Cover,
    assignment: &[usize],
    cutoff: usize,
) -> Result<(NerveDiagram, NerveDiagram, NerveMorphism)> {
    if assignment.len() != fine.pieces.len() {
        return Err(Error::InvalidCover("assignment length mismatch".into()));
    }
    for (j, &i) in assignment.iter().enumerate() {
        if i >= coarse.pieces.len() {
            return Err(Error::InvalidCover("assignment target out of range".into()));
        }
        for q in 0..=fine.base.dim() {
            for x in 0..fine.base.size(q) {
                if fine.pieces[j][q][x] && !coarse.pieces[i][q][x] {
                    return Err(Error::InvalidCover(format!(
                        "piece {j} not contained in assigned piece {i}"
                    )));
                }
            }
        }
    }
    let src_levels: Vec<CechLevel> = (0..=cutoff)
        .map(|r| build_cech_level(fine, r))
        .collect::<Result<_>>()?;
    let dst_levels: Vec<CechLevel> = (0..=cutoff)
        .map(|r| build_cech_level(coarse, r))
        .collect::<Result<_>>()?;
    let src = cech_nerve(fine, cutoff)?;
    let dst = cech_nerve(coarse, cutoff)?;
    let dim = fine.base.dim();
    let mut maps = Vec::new();
    for r in 0..=cutoff {
        let (sl, dl) = (&src_levels[r], &dst_levels[r]);
        let mut tables: Vec<Vec<usize>> = vec![Vec::new(); dim + 1];
        for (c, t) in sl.tuples.iter().enumerate() {
            let t2: Vec<usize> = t.iter().map(|&j| assignment[j]).collect();
            let c2 = dl.tuples.iter().position(|u| *u == t2).expect("tuple");
            for q in 0..=dim {
                let start = sl.offsets[q][c];
                let count = if c + 1 < sl.offsets[q].len() {
                    sl.offsets[q][c + 1] - start
                } else {
                    sl.model.size(q) - start
                };
                for local in 0..count {
                    let base_idx = *sl.reverse[c][q]
                        .iter()
                        .find(|(_, &v)| v == local)
                        .map(|(k, _)| k)
                        .expect("member");
                    tables[q].push(dl.offsets[q][c2] + dl.reverse[c2][q][&base_idx]);
                }
            }
        }
        maps.push(SimplicialMap::new(src.space(r), dst.space(r), tables)?);
    }
    let morphism = NerveMorphism::new(&src, &dst, maps)?;
    Ok((src, dst, morphism))
}

/// Morphism collapsing any nerve onto the point nerve of matching dimension.
pub fn collapse_to_point(n: &NerveDiagram) -> (NerveDiagram, NerveMorphism) {
    let target = point_nerve(n.space_dim(), n.cutoff());
    let maps: Vec<SimplicialMap> = (0..=n.cutoff())
        .map(|r| {
            let tables: Vec<Vec<usize>> = (0..=n.space_dim())
                .map(|q| vec![0; n.space(r).size(q)])
                .collect();
            SimplicialMap::new(n.space(r), target.space(r), tables).expect("collapse")
        })
        .collect();
    let m = NerveMorphism::new(n, &target, maps).expect("collapse morphism");
    (target, m)
}

/// Morphism of groupoid nerves induced by a functor given on objects and
/// arrows.
pub fn group_hom_nerve_morphism(
    src_gpd: &FiniteGroupoid,
    dst_gpd: &FiniteGroupoid,
    object_map: &[usize],
    arrow_map: &[usize],
    cutoff: usize,
) -> Result<(NerveDiagram, NerveDiagram, NerveMorphism)> {
    if object_map.len() != src_gpd.object_count() || arrow_map.len() != src_gpd.arrow_count() {
        return Err(Error::InvalidGroupoid(
            "functor table length mismatch".into(),
        ));
    }
    for g in 0..src_gpd.arrow_count() {
        let fg = arrow_map[g];
        if dst_gpd.source(fg) != object_map[src_gpd.source(g)]
            || dst_gpd.target(fg) != object_map[src_gpd.target(g)]
        {
            return Err(Error::InvalidGroupoid(format!(
                "functor breaks endpoints at arrow {g}"
            )));
        }
        for h in 0..src_gpd.arrow_count() {
            if src_gpd.target(g) == src_gpd.source(h) {
                let gh = src_gpd.compose(g, h).unwrap();
                let fgh = dst_gpd.compose(arrow_map[g], arrow_map[h]).unwrap();
                if arrow_map[gh] != fgh {
                    return Err(Error::InvalidGroupoid(format!(
                        "functor breaks composition at ({g}, {h})"
                    )));
                }
            }
        }
    }
    let src = nerve(src_gpd, cutoff)?;
    let dst = nerve(dst_gpd, cutoff)?;
    let mut maps = Vec::new();
    for r in 0..=cutoff {
        let tbl: Vec<usize> = (0..src.space(r).size(0))
            .map(|x| {
                if r == 0 {
                    object_map[x]
                } else {
                    let label = src.space(r).label(0, x);
                    let parts: Vec<usize> = label
                        .split('|')
                        .map(|id| {
                            src_gpd
                                .arrows
                                .iter()
                                .position(|a| a.id == id)
                                .expect("arrow id")
                        })
                        .collect();
                    let mapped: Vec<String> = parts
                        .iter()
                        .map(|&g| dst_gpd.arrows[arrow_map[g]].id.clone())
                        .collect();
                    dst.space(r)
                        .find_label(0, &mapped.join("|"))
                        .expect("mapped tuple")
                }
            })
            .collect();
        maps.push(SimplicialMap::new(src.space(r), dst.space(r), vec![tbl])?);
    }
    let m = NerveMorphism::new(&src, &dst, maps)?;
    Ok((src, dst, m))
}
