//! The double complex of a nerve diagram and its total complex with cup
//! product.
//!
//! `A^{r,s}` carries the normalized `s`-cochains of `X_r` (basis: simplices
//! nondegenerate in both the internal and the r-direction), with `δ''` the
//! internal simplicial coboundary and `δ' = Σ (-1)^i ε_i^*`. Totalization
//! uses the column sign: `D = δ' + (-1)^r δ''`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::complexes::{CoeffRing, FreeComplex};
use crate::error::{Error, Result};
use crate::matrix::RatMat;
use crate::nerve::NerveDiagram;
use crate::Rat;

/// Coefficient data: the ring of the cochains and the lattice `Λ ⊆ Q` used
/// for quotient coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingTag {
    Integers,
    Rationals,
    RationalsModOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeTag {
    Zero,
    Integers,
    Rationals,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoefficientSpec {
    pub ring: RingTag,
    pub lattice: LatticeTag,
}

impl CoefficientSpec {
    pub fn new(ring: RingTag, lattice: LatticeTag) -> Result<Self> {
        if ring == RingTag::RationalsModOne && lattice != LatticeTag::Integers {
            return Err(Error::CoefficientMismatch(
                "rationals-mod-one coefficients require the integer lattice".into(),
            ));
        }
        Ok(CoefficientSpec { ring, lattice })
    }

    pub fn integers() -> Self {
        CoefficientSpec {
            ring: RingTag::Integers,
            lattice: LatticeTag::Integers,
        }
    }

    pub fn rationals() -> Self {
        CoefficientSpec {
            ring: RingTag::Rationals,
            lattice: LatticeTag::Zero,
        }
    }
}

/// Basis element of `A^{r,s}`: a doubly nondegenerate simplex of `X_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockBasisElement {
    /// index into level `s` of `X_r`
    pub simplex: usize,
    pub label: String,
}

/// The double complex `A^{r,s}` of a nerve diagram, with exact matrices.
pub struct DoubleComplex {
    pub coeff: CoefficientSpec,
    nerve: Arc<NerveDiagram>,
    /// `bases[r][s]`: basis simplex indices of `A^{r,s}`
    bases: Vec<Vec<Vec<usize>>>,
    /// reverse lookup: `position[r][s][simplex] = basis index`
    position: Vec<Vec<Vec<Option<usize>>>>,
    /// `d2[r][s]`: `δ'' : A^{r,s} → A^{r,s+1}`
    d2: Vec<Vec<RatMat>>,
    /// `d1[r][s]`: `δ' : A^{r,s} → A^{r+1,s}`
    d1: Vec<Vec<RatMat>>,
}

impl DoubleComplex {
    pub fn nerve(&self) -> &Arc<NerveDiagram> {
        &self.nerve
    }

    pub fn cutoff(&self) -> usize {
        self.nerve.cutoff()
    }

    pub fn space_dim(&self) -> usize {
        self.nerve.space_dim()
    }

    pub fn block_rank(&self, r: usize, s: usize) -> usize {
        if r > self.cutoff() || s > self.space_dim() {
            0
        } else {
            self.bases[r][s].len()
        }
    }

    pub fn block_basis(&self, r: usize, s: usize) -> &[usize] {
        &self.bases[r][s]
    }

    pub fn basis_position(&self, r: usize, s: usize, simplex: usize) -> Option<usize> {
        self.position[r][s][simplex]
    }

    pub fn block_label(&self, r: usize, s: usize, idx: usize) -> String {
        let x = self.bases[r][s][idx];
        format!("A[{r},{s}]:{}", self.nerve.space(r).label(s, x))
    }

    /// `δ'' : A^{r,s} → A^{r,s+1}`.
    pub fn delta_internal(&self, r: usize, s: usize) -> RatMat {
        if r > self.cutoff() || s >= self.space_dim() {
            return RatMat::zeros(self.block_rank(r, s + 1), self.block_rank(r, s));
        }
        self.d2[r][s].clone()
    }

    /// `δ' : A^{r,s} → A^{r+1,s}`.
    pub fn delta_cech(&self, r: usize, s: usize) -> RatMat {
        if r >= self.cutoff() || s > self.space_dim() {
            return RatMat::zeros(self.block_rank(r + 1, s), self.block_rank(r, s));
        }
        self.d1[r][s].clone()
    }
}

/// Assemble the normalized double complex of a nerve diagram. The matrices
/// are integral regardless of the coefficient tag, which only records the
/// ring downstream complexes live over.
pub fn a_double_complex(
    nerve: &Arc<NerveDiagram>,
    coeff: CoefficientSpec,
) -> Result<DoubleComplex> {
    nerve.validate()?;
    let cutoff = nerve.cutoff();
    let dim = nerve.space_dim();
    let mut bases = Vec::new();
    let mut position = Vec::new();
    for r in 0..=cutoff {
        let rdeg = nerve.r_degenerate_table(r);
        let mut per_s = Vec::new();
        let mut pos_s = Vec::new();
        for s in 0..=dim {
            let basis: Vec<usize> = nerve
                .space(r)
                .nondegenerate(s)
                .into_iter()
                .filter(|&x| !rdeg[s][x])
                .collect();
            let mut pos = vec![None; nerve.space(r).size(s)];
            for (i, &x) in basis.iter().enumerate() {
                pos[x] = Some(i);
            }
            per_s.push(basis);
            pos_s.push(pos);
        }
        bases.push(per_s);
        position.push(pos_s);
    }
    // δ'': alternating sum over internal faces, normalized
    let mut d2 = Vec::new();
    for r in 0..=cutoff {
        let mut per_s = Vec::new();
        for s in 0..dim {
            let rows = bases[r][s + 1].len();
            let cols = bases[r][s].len();
            let mut m = RatMat::zeros(rows, cols);
            for (row, &x) in bases[r][s + 1].iter().enumerate() {
                for i in 0..=s + 1 {
                    let f = nerve.space(r).face(s + 1, i, x);
                    if let Some(col) = position[r][s][f] {
                        let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
                        m[(row, col)] = m[(row, col)].clone() + sign;
                    }
                }
            }
            per_s.push(m);
        }
        d2.push(per_s);
    }
    // δ' = Σ (-1)^i ε_i^*
    let mut d1 = Vec::new();
    for r in 0..cutoff {
        let mut per_s = Vec::new();
        for s in 0..=dim {
            let rows = bases[r + 1][s].len();
            let cols = bases[r][s].len();
            let mut m = RatMat::zeros(rows, cols);
            for (row, &x) in bases[r + 1][s].iter().enumerate() {
                for i in 0..=r + 1 {
                    let y = nerve.face(r + 1, i).apply(s, x);
                    if let Some(col) = position[r][s][y] {
                        let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
                        m[(row, col)] = m[(row, col)].clone() + sign;
                    }
                }
            }
            per_s.push(m);
        }
        d1.push(per_s);
    }
    let dc = DoubleComplex {
        coeff,
        nerve: nerve.clone(),
        bases,
        position,
        d2,
        d1,
    };
    dc.check_squares()?;
    Ok(dc)
}

impl DoubleComplex {
    /// `δ'δ' = 0`, `δ''δ'' = 0`, `δ'δ'' = δ''δ'` exactly.
    fn check_squares(&self) -> Result<()> {
        for r in 0..self.cutoff().saturating_sub(1) {
            for s in 0..=self.space_dim() {
                let m = self.delta_cech(r + 1, s).mul(&self.delta_cech(r, s));
                if !m.is_zero_matrix() {
                    return Err(Error::Internal(format!("δ'δ' != 0 at ({r},{s})")));
                }
            }
        }
        for r in 0..=self.cutoff() {
            for s in 0..self.space_dim().saturating_sub(1) {
                let m = self
                    .delta_internal(r, s + 1)
                    .mul(&self.delta_internal(r, s));
                if !m.is_zero_matrix() {
                    return Err(Error::Internal(format!("δ''δ'' != 0 at ({r},{s})")));
                }
            }
        }
        for r in 0..self.cutoff() {
            for s in 0..self.space_dim() {
                let a = self.delta_internal(r + 1, s).mul(&self.delta_cech(r, s));
                let b = self.delta_cech(r, s + 1).mul(&self.delta_internal(r, s));
                if a != b {
                    return Err(Error::Internal(format!("δ'δ'' != δ''δ' at ({r},{s})")));
                }
            }
        }
        Ok(())
    }
}

/// The total complex of a double complex, remembering the block structure.
pub struct TotalComplex {
    pub coeff: CoefficientSpec,
    pub complex: Arc<FreeComplex>,
    /// blocks per total degree: `(r, s, offset)` in basis order
    pub blocks: Vec<Vec<(usize, usize, usize)>>,
    pub double: Arc<DoubleComplex>,
}

/// Total degree `k` basis is `⊔_{r+s=k} A^{r,s}`, differential
/// `D = δ' + (-1)^r δ''`. Cohomology is guaranteed in degrees `< cutoff`.
pub fn total_complex(dc: Arc<DoubleComplex>) -> Result<TotalComplex> {
    let cutoff = dc.cutoff();
    let dim = dc.space_dim();
    let max_deg = cutoff + dim;
    let mut blocks: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    let mut dims = Vec::new();
    for k in 0..=max_deg {
        let mut offset = 0;
        let mut blk = Vec::new();
        for r in 0..=k.min(cutoff) {
            let s = k - r;
            if s > dim {
                continue;
            }
            let n = dc.block_rank(r, s);
            if n > 0 {
                blk.push((r, s, offset));
            }
            offset += n;
        }
        blocks.push(blk);
        dims.push(offset);
    }
    let offset_of = |blocks: &Vec<(usize, usize, usize)>, r: usize, s: usize| -> Option<usize> {
        blocks
            .iter()
            .find(|&&(br, bs, _)| br == r && bs == s)
            .map(|&(_, _, o)| o)
    };
    let mut diffs = Vec::new();
    for k in 0..max_deg {
        let mut m = RatMat::zeros(dims[k + 1], dims[k]);
        for &(r, s, off) in &blocks[k] {
            // δ' block into (r+1, s)
            if r < cutoff {
                let d1 = dc.delta_cech(r, s);
                if let Some(toff) = offset_of(&blocks[k + 1], r + 1, s) {
                    for i in 0..d1.rows() {
                        for j in 0..d1.cols() {
                            if !d1[(i, j)].is_zero() {
                                m[(toff + i, off + j)] = d1[(i, j)].clone();
                            }
                        }
                    }
                }
            }
            // (-1)^r δ'' block into (r, s+1)
            if s < dim {
                let d2 = dc.delta_internal(r, s);
                let sign = if r % 2 == 0 { Rat::one() } else { -Rat::one() };
                if let Some(toff) = offset_of(&blocks[k + 1], r, s + 1) {
                    for i in 0..d2.rows() {
                        for j in 0..d2.cols() {
                            if !d2[(i, j)].is_zero() {
                                m[(toff + i, off + j)] = d2[(i, j)].clone() * sign.clone();
                            }
                        }
                    }
                }
            }
        }
        diffs.push(m);
    }
    let coeff_ring = match dc.coeff.ring {
        RingTag::Integers => CoeffRing::Integers,
        _ => CoeffRing::Rationals,
    };
    let complex = Arc::new(
        FreeComplex::new(coeff_ring, 0, dims, diffs)?.with_exact_below(Some(cutoff as i64)),
    );
    Ok(TotalComplex {
        coeff: dc.coeff,
        complex,
        blocks,
        double: dc,
    })
}

impl TotalComplex {
    pub fn dim(&self, k: i64) -> usize {
        self.complex.dim(k)
    }

    pub fn max_deg(&self) -> i64 {
        self.complex.max_deg()
    }

    /// Offset of block `(r, s)` in total degree `r + s`, if present.
    pub fn block_offset(&self, r: usize, s: usize) -> Option<usize> {
        let k = r + s;
        if k >= self.blocks.len() {
            return None;
        }
        self.blocks[k]
            .iter()
            .find(|&&(br, bs, _)| br == r && bs == s)
            .map(|&(_, _, o)| o)
    }

    /// Labels of the degree-`k` basis, block by block.
    pub fn basis_labels(&self, k: i64) -> Vec<String> {
        if k < 0 || k as usize >= self.blocks.len() {
            return vec![];
        }
        let mut out = Vec::new();
        for &(r, s, _) in &self.blocks[k as usize] {
            for i in 0..self.double.block_rank(r, s) {
                out.push(self.double.block_label(r, s, i));
            }
        }
        out
    }

    /// The column filtration `F^r = ⊕_{p >= r} A^{p,*}` as spanning sets.
    pub fn column_filtration(&self) -> crate::complexes::Filtration {
        let cutoff = self.double.cutoff();
        let mut levels = Vec::new();
        for rmin in 0..=cutoff + 1 {
            let mut spans = BTreeMap::new();
            for k in self.complex.degrees() {
                let n = self.complex.dim(k);
                if n == 0 {
                    continue;
                }
                let mut cols = Vec::new();
                if k >= 0 && (k as usize) < self.blocks.len() {
                    for &(r, s, off) in &self.blocks[k as usize] {
                        if r >= rmin {
                            for i in 0..self.double.block_rank(r, s) {
                                cols.push(off + i);
                            }
                        }
                    }
                }
                let mut m = RatMat::zeros(n, cols.len());
                for (j, &c) in cols.iter().enumerate() {
                    m[(c, j)] = Rat::one();
                }
                spans.insert(k, m);
            }
            levels.push(spans);
        }
        crate::complexes::Filtration::new(levels)
    }

    /// Cup product of total cochains (Čech–Alexander–Whitney with the Koszul
    /// sign `(-1)^{qr}` between the internal degree of the first factor and
    /// the Čech degree of the second).
    pub fn cup(&self, a: &TotalCochain, b: &TotalCochain) -> Result<TotalCochain> {
        if a.coeff != b.coeff {
            return Err(Error::CoefficientMismatch(
                "cup product needs matching coefficient specs".into(),
            ));
        }
        if a.coeff.ring == RingTag::RationalsModOne {
            return Err(Error::CoefficientMismatch(
                "cup product is defined over Z and Q coefficients".into(),
            ));
        }
        let k = a.degree + b.degree;
        let mut out = TotalCochain::zero(a.coeff, k, self);
        if k > self.max_deg() {
            return Ok(out);
        }
        let dc = &self.double;
        let nerve = dc.nerve();
        for &(rt, st, off_t) in &self.blocks[k as usize] {
            // split (rt, st) into (p, q) + (r2, s2) blocks
            for p in 0..=rt {
                let r2 = rt - p;
                for q in 0..=st {
                    let s2 = st - q;
                    let a_off = match block_offset_of(a, p, q, self) {
                        Some(o) => o,
                        None => continue,
                    };
                    let b_off = match block_offset_of(b, r2, s2, self) {
                        Some(o) => o,
                        None => continue,
                    };
                    let sign_neg = (q * r2) % 2 == 1;
                    for (row, &x) in dc.block_basis(rt, st).iter().enumerate() {
                        // front r-face composite: drop the last r2 arrows
                        let mut fx = x;
                        let mut level = rt;
                        for _ in 0..r2 {
                            fx = nerve.face(level, level).apply(st, fx);
                            level -= 1;
                        }
                        // internal front q-face
                        let fsimplex = nerve.space(p).front_face(st, q, fx);
                        let Some(acol) = dc.basis_position(p, q, fsimplex) else {
                            continue;
                        };
                        let av = &a.coords[a_off + acol];
                        if av.is_zero() {
                            continue;
                        }
                        // back r-face composite: drop the first p arrows
                        let mut bx = x;
                        let mut level = rt;
                        for _ in 0..p {
                            bx = nerve.face(level, 0).apply(st, bx);
                            level -= 1;
                        }
                        let bsimplex = nerve.space(r2).back_face(st, s2, bx);
                        let Some(bcol) = dc.basis_position(r2, s2, bsimplex) else {
                            continue;
                        };
                        let bv = &b.coords[b_off + bcol];
                        if bv.is_zero() {
                            continue;
                        }
                        let mut term = av.clone() * bv.clone();
                        if sign_neg {
                            term = -term;
                        }
                        out.coords[off_t + row] = out.coords[off_t + row].clone() + term;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Multiplicative unit: the constant cochain `1 ∈ A^{0,0}`.
    pub fn unit(&self, coeff: CoefficientSpec) -> TotalCochain {
        let mut u = TotalCochain::zero(coeff, 0, self);
        for i in 0..self.complex.dim(0) {
            u.coords[i] = Rat::one();
        }
        u
    }
}

fn block_offset_of(c: &TotalCochain, r: usize, s: usize, tc: &TotalComplex) -> Option<usize> {
    if r + s == c.degree as usize {
        tc.block_offset(r, s)
    } else {
        None
    }
}

/// A homogeneous total cochain: coordinates over the degree-`k` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct TotalCochain {
    pub coeff: CoefficientSpec,
    pub degree: i64,
    pub coords: Vec<Rat>,
}

impl TotalCochain {
    pub fn zero(coeff: CoefficientSpec, degree: i64, tc: &TotalComplex) -> Self {
        TotalCochain {
            coeff,
            degree,
            coords: vec![Rat::zero(); tc.dim(degree)],
        }
    }

    pub fn from_coords(coeff: CoefficientSpec, degree: i64, coords: Vec<Rat>) -> Self {
        TotalCochain {
            coeff,
            degree,
            coords,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|x| x.is_integer())
    }

    pub fn differential(&self, tc: &TotalComplex) -> TotalCochain {
        TotalCochain {
            coeff: self.coeff,
            degree: self.degree + 1,
            coords: tc.complex.apply_diff(self.degree, &self.coords),
        }
    }

    pub fn add(&self, other: &TotalCochain) -> TotalCochain {
        assert_eq!(self.degree, other.degree);
        TotalCochain {
            coeff: self.coeff,
            degree: self.degree,
            coords: crate::matrix::vec_add(&self.coords, &other.coords),
        }
    }

    pub fn sub(&self, other: &TotalCochain) -> TotalCochain {
        assert_eq!(self.degree, other.degree);
        TotalCochain {
            coeff: self.coeff,
            degree: self.degree,
            coords: crate::matrix::vec_sub(&self.coords, &other.coords),
        }
    }

    pub fn neg(&self) -> TotalCochain {
        TotalCochain {
            coeff: self.coeff,
            degree: self.degree,
            coords: crate::matrix::vec_neg(&self.coords),
        }
    }

    pub fn scale(&self, c: &Rat) -> TotalCochain {
        TotalCochain {
            coeff: self.coeff,
            degree: self.degree,
            coords: crate::matrix::vec_scale(&self.coords, c),
        }
    }

    /// Restriction to the components with Čech degree `r > 0` (zero out the
    /// `A^{0,*}` block).
    pub fn positive_cech_part(&self, tc: &TotalComplex) -> TotalCochain {
        let mut out = self.clone();
        if self.degree >= 0 && (self.degree as usize) < tc.blocks.len() {
            for &(r, s, off) in &tc.blocks[self.degree as usize] {
                if r == 0 {
                    for i in 0..tc.double.block_rank(r, s) {
                        out.coords[off + i] = Rat::zero();
                    }
                }
            }
        }
        out
    }
}

/// Pullback of total cochains along a nerve morphism: the chain map on total
/// complexes induced by `φ` (evaluation against the image, zero on simplices
/// whose image is degenerate in either direction).
pub fn pullback_total(
    src: &TotalComplex,
    dst: &TotalComplex,
    morphism: &crate::nerve::NerveMorphism,
) -> Result<crate::complexes::ChainMap> {
    let sdc = &src.double;
    let ddc = &dst.double;
    let mut mats = BTreeMap::new();
    let max = dst.complex.max_deg().min(src.complex.max_deg());
    for k in 0..=max {
        let mut m = RatMat::zeros(src.complex.dim(k), dst.complex.dim(k));
        if (k as usize) < src.blocks.len() {
            for &(r, s, soff) in &src.blocks[k as usize] {
                let Some(doff) = dst.block_offset(r, s) else {
                    continue;
                };
                for (row, &x) in sdc.block_basis(r, s).iter().enumerate() {
                    let y = morphism.map(r).apply(s, x);
                    if let Some(col) = ddc.basis_position(r, s, y) {
                        m[(soff + row, doff + col)] = Rat::one();
                    }
                }
            }
        }
        mats.insert(k, m);
    }
    crate::complexes::ChainMap::new(dst.complex.clone(), src.complex.clone(), mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::cohomology_window;
    use crate::groupoid::FiniteGroupoid;
    use crate::nerve::{cech_nerve, nerve, Cover};
    use crate::samples;
    use crate::{int, rat};

    fn bz2_total(cutoff: usize) -> TotalComplex {
        let n = Arc::new(nerve(&FiniteGroupoid::cyclic(2), cutoff).unwrap());
        let dc = a_double_complex(&n, CoefficientSpec::integers()).unwrap();
        total_complex(Arc::new(dc)).unwrap()
    }

    #[test]
    fn bz2_double_complex_ranks() {
        let n = Arc::new(nerve(&FiniteGroupoid::cyclic(2), 4).unwrap());
        let dc = a_double_complex(&n, CoefficientSpec::integers()).unwrap();
        for r in 0..=4 {
            assert_eq!(dc.block_rank(r, 0), 1, "A^({r},0)");
        }
        // δ' alternates 0 and multiplication by 2 (bar complex of Z/2)
        for r in 0..4 {
            let m = dc.delta_cech(r, 0);
            let expect = if r % 2 == 0 { rat(0, 1) } else { rat(2, 1) };
            assert_eq!(m[(0, 0)], expect, "δ' at r={r}");
        }
    }

    #[test]
    fn bz2_total_is_bar_complex() {
        let tc = bz2_total(5);
        let dims: Vec<usize> = (0..=5).map(|k| tc.dim(k)).collect();
        assert_eq!(dims, vec![1, 1, 1, 1, 1, 1]);
        let h = cohomology_window(&tc.complex, Some((0, 4))).unwrap();
        assert_eq!(h.group(0).unwrap().free_rank, 1);
        assert!(h.group(1).unwrap().is_zero());
        assert_eq!(h.group(2).unwrap().torsion, vec![int(2)]);
        assert!(h.group(3).unwrap().is_zero());
        assert_eq!(h.group(4).unwrap().torsion, vec![int(2)]);
    }

    #[test]
    fn point_cover_total_is_coefficients() {
        let pt = crate::simplicial::SimplicialSetModel::point(0);
        let cover = Cover::one_piece(pt);
        let n = Arc::new(cech_nerve(&cover, 3).unwrap());
        let dc = a_double_complex(&n, CoefficientSpec::integers()).unwrap();
        assert_eq!(dc.block_rank(0, 0), 1);
        for r in 1..=3 {
            assert_eq!(dc.block_rank(r, 0), 0);
        }
        let tc = total_complex(Arc::new(dc)).unwrap();
        assert_eq!(tc.dim(0), 1);
        for k in 1..=3 {
            assert_eq!(tc.dim(k), 0);
        }
    }

    #[test]
    fn circle_cech_cohomology() {
        let n = Arc::new(samples::circle_model(3));
        let dc = a_double_complex(&n, CoefficientSpec::integers()).unwrap();
        let tc = total_complex(Arc::new(dc)).unwrap();
        let h = cohomology_window(&tc.complex, Some((0, 2))).unwrap();
        assert_eq!(h.group(0).unwrap().free_rank, 1);
        assert!(h.group(0).unwrap().torsion.is_empty());
        assert_eq!(h.group(1).unwrap().free_rank, 1);
        assert!(h.group(1).unwrap().torsion.is_empty());
        assert!(h.group(2).unwrap().is_zero());
    }

    #[test]
    fn random_nerve_squares_vanish() {
        let mut rng = samples::rng(101);
        for _ in 0..20 {
            let n = Arc::new(samples::random_nerve(&mut rng, 2));
            let dc = a_double_complex(&n, CoefficientSpec::rationals()).unwrap();
            // constructor checks δ'δ' = 0, δ''δ'' = 0, commuting; total D² = 0
            let tc = total_complex(Arc::new(dc)).unwrap();
            let _ = tc;
        }
    }

    #[test]
    fn integral_and_rational_matrices_agree() {
        let n = Arc::new(samples::circle_model(2));
        let dz = a_double_complex(&n, CoefficientSpec::integers()).unwrap();
        let dq = a_double_complex(&n, CoefficientSpec::rationals()).unwrap();
        for r in 0..=2 {
            for s in 0..=1 {
                assert_eq!(dz.delta_cech(r, s), dq.delta_cech(r, s));
                assert_eq!(dz.delta_internal(r, s), dq.delta_internal(r, s));
            }
        }
    }

    #[test]
    fn cup_rejects_mixed_coefficients() {
        let tc = {
            let n = Arc::new(samples::circle_model(2));
            let dc = a_double_complex(&n, CoefficientSpec::rationals()).unwrap();
            total_complex(Arc::new(dc)).unwrap()
        };
        let a = tc.unit(CoefficientSpec::rationals());
        let b = tc.unit(CoefficientSpec::integers());
        assert!(tc.cup(&a, &b).is_err());
    }

    #[test]
    fn cup_unit_laws() {
        let tc = Arc::new({
            let n = Arc::new(samples::circle_model(2));
            let dc = a_double_complex(&n, CoefficientSpec::rationals()).unwrap();
            total_complex(Arc::new(dc)).unwrap()
        });
        let one = tc.unit(CoefficientSpec::rationals());
        let mut rng = samples::rng(5);
        for k in 0..=2i64 {
            let b = random_cochain(&tc, k, &mut rng);
            let left = tc.cup(&one, &b).unwrap();
            let right = tc.cup(&b, &one).unwrap();
            assert_eq!(left, b);
            assert_eq!(right, b);
        }
    }

    fn random_cochain(
        tc: &TotalComplex,
        k: i64,
        rng: &mut rand_chacha::ChaCha12Rng,
    ) -> TotalCochain {
        let coords = (0..tc.dim(k))
            .map(|_| samples::random_rat(rng, 3, 4))
            .collect();
        TotalCochain::from_coords(CoefficientSpec::rationals(), k, coords)
    }

    #[test]
    fn cup_leibniz_exact() {
        // D(a∪b) = Da∪b + (-1)^{|a|} a∪Db on random cochains over random nerves
        let mut rng = samples::rng(77);
        for trial in 0..25 {
            let n = Arc::new(samples::random_nerve(&mut rng, 2));
            let dc = a_double_complex(&n, CoefficientSpec::rationals()).unwrap();
            let tc = total_complex(Arc::new(dc)).unwrap();
            let top = tc.max_deg();
            for ka in 0..=top.min(2) {
                for kb in 0..=(top - ka).min(2) {
                    let a = random_cochain(&tc, ka, &mut rng);
                    let b = random_cochain(&tc, kb, &mut rng);
                    let lhs = tc.cup(&a, &b).unwrap().differential(&tc);
                    let da_b = tc.cup(&a.differential(&tc), &b).unwrap();
                    let mut a_db = tc.cup(&a, &b.differential(&tc)).unwrap();
                    if ka % 2 == 1 {
                        a_db = a_db.neg();
                    }
                    assert_eq!(lhs, da_b.add(&a_db), "trial {trial} ka={ka} kb={kb}");
                }
            }
        }
    }

    #[test]
    fn cup_associative_at_cochain_level() {
        let mut rng = samples::rng(13);
        let n = Arc::new(samples::circle_model(3));
        let dc = a_double_complex(&n, CoefficientSpec::rationals()).unwrap();
        let tc = total_complex(Arc::new(dc)).unwrap();
        for _ in 0..10 {
            let a = random_cochain(&tc, 1, &mut rng);
            let b = random_cochain(&tc, 1, &mut rng);
            let c = random_cochain(&tc, 1, &mut rng);
            let ab_c = tc.cup(&tc.cup(&a, &b).unwrap(), &c).unwrap();
            let a_bc = tc.cup(&a, &tc.cup(&b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
        }
    }

    #[test]
    fn circle_one_cochain_square_is_exact() {
        // H^2 of the circle model vanishes, so a∪a is a coboundary for
        // closed degree-1 cochains
        let n = Arc::new(samples::circle_model(3));
        let dc = a_double_complex(&n, CoefficientSpec::rationals()).unwrap();
        let tc = total_complex(Arc::new(dc)).unwrap();
        let h = cohomology_window(&tc.complex.to_rational(), Some((0, 2))).unwrap();
        let gen = h.group(1).unwrap().generators[0].clone();
        let a = TotalCochain::from_coords(CoefficientSpec::rationals(), 1, gen);
        let sq = tc.cup(&a, &a).unwrap();
        assert!(sq.differential(&tc).is_zero());
        let cl = h.rat_classifier(2).unwrap();
        assert!(cl.is_coboundary(&sq.coords));
    }

    #[test]
    fn column_filtration_pieces() {
        let n = Arc::new(samples::circle_model(2));
        let dc = a_double_complex(&n, CoefficientSpec::rationals()).unwrap();
        let tc = total_complex(Arc::new(dc)).unwrap();
        let f = tc.column_filtration();
        let cq = Arc::new(tc.complex.to_rational());
        f.validate(&cq).unwrap();
        // r = 1 quotient is the cochain complex of X_0
        let pieces = crate::complexes::filtration_pieces(&cq, &f, 1).unwrap();
        assert_eq!(pieces.quotient.dim(0), tc.double.block_rank(0, 0));
        assert_eq!(pieces.quotient.dim(1), tc.double.block_rank(0, 1));
        assert_eq!(pieces.quotient.dim(2), 0);
    }

    #[test]
    fn pullback_is_chain_map() {
        let g = FiniteGroupoid::cyclic(2);
        let n = Arc::new(nerve(&g, 3).unwrap());
        let dc = a_double_complex(&n, CoefficientSpec::integers()).unwrap();
        let tc = total_complex(Arc::new(dc)).unwrap();
        let (pt, morphism) = crate::nerve::collapse_to_point(&n);
        let ptn = Arc::new(pt);
        let pdc = a_double_complex(&ptn, CoefficientSpec::integers()).unwrap();
        let ptc = total_complex(Arc::new(pdc)).unwrap();
        let f = pullback_total(&tc, &ptc, &morphism).unwrap();
        f.validate().unwrap();
    }
}
