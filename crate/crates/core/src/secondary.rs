//! Secondary cohomology: generalized differential characters, multiplicative
//! cohomology, the surjection between them with its kernel, the
//! Cheeger–Simons style isomorphism, and the long exact sequence around the
//! multiplicative groups.
//!
//! Everything here works over a `SecondaryContext`: an integral complex `C`
//! (the `Λ = Z` cochains), its rational companion (the "forms"), and a
//! filtration of the latter. Sharing one basis makes the comparison map
//! "forms → C/Λ-cochains" literal reduction mod Λ of coordinates.
//!
//! Mixed cones (rational source, `Q/Z` target) are never row-reduced
//! directly; their graded pieces are assembled from the long exact sequence
//! with connecting data computed at cocycle level through rational lifts.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::complexes::{
    cohomology_window, filtration_pieces, mapping_cone, truncate, ChainMap, CoeffRing,
    ComplexCohomology, Filtration, FreeComplex, MixedGroup, MixedSubgroup, TruncateMode,
};
use crate::error::{Error, Result};
use crate::matrix::{vec_is_integral, vec_sub, RatMat};
use crate::snf;
use crate::{Int, Rat};

/// Which lattice `Λ ⊆ C` the quotient coefficients use; the complex models
/// `C` by `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lattice {
    Zero,
    Integers,
    Rationals,
}

/// The shared data every secondary computation runs over.
pub struct SecondaryContext {
    /// integral cochains (`Λ = Z` model), basis shared with the forms
    pub z_complex: Arc<FreeComplex>,
    /// rational cochains = forms, same differential matrices
    pub q_complex: Arc<FreeComplex>,
    /// filtration of the forms
    pub filtration: Filtration,
}

impl SecondaryContext {
    pub fn new(z_complex: Arc<FreeComplex>, filtration: Filtration) -> Result<Self> {
        if z_complex.coeff() != CoeffRing::Integers {
            return Err(Error::CoefficientMismatch(
                "secondary context needs an integral complex".into(),
            ));
        }
        let q_complex = Arc::new(z_complex.to_rational());
        filtration.validate(&q_complex)?;
        Ok(SecondaryContext {
            z_complex,
            q_complex,
            filtration,
        })
    }

    pub fn with_bete(z_complex: Arc<FreeComplex>) -> Result<Self> {
        let f = Filtration::bete(&z_complex.to_rational());
        SecondaryContext::new(z_complex, f)
    }

    /// Degree window that is guaranteed exact for truncated models.
    pub fn check_degree(&self, k: i64) -> Result<()> {
        if let Some(bound) = self.z_complex.exact_below() {
            if k >= bound {
                return Err(Error::CutoffTooSmall {
                    cutoff: bound.max(0) as usize,
                    degree: k,
                    needed: (k + 1).max(0) as usize,
                });
            }
        }
        Ok(())
    }

    /// `σ_{≥k} F^r Ω` together with its inclusion into the forms.
    pub fn truncated_filtered(&self, k: i64, r: usize) -> Result<(Arc<FreeComplex>, ChainMap)> {
        let pieces = filtration_pieces(&self.q_complex, &self.filtration, r)?;
        let sub = truncate(&pieces.sub, TruncateMode::AtOrAbove(k));
        let sub = Arc::new(sub);
        // inclusion: reuse the filtration basis on the surviving degrees
        let mut mats = std::collections::BTreeMap::new();
        for deg in sub.degrees() {
            mats.insert(deg, pieces.inclusion.mat(deg));
        }
        let incl = ChainMap::new(sub.clone(), self.q_complex.clone(), mats)?;
        Ok((sub, incl))
    }
}

/// A query against a context: lattice, filtration index and the cone degree.
#[derive(Clone, Copy, Debug)]
pub struct SecondaryQuery {
    pub lattice: Lattice,
    /// filtration index `r`
    pub r: usize,
    /// internal cone degree `k` (the group `Ĥ^{k-1}` in classical notation,
    /// or `2r - n` for `MH^{2r}_n`)
    pub k: i64,
}

impl SecondaryQuery {
    pub fn diffchar(k: i64, lattice: Lattice, r: usize) -> Self {
        SecondaryQuery { lattice, r, k }
    }

    pub fn mh(r2: usize, n: i64, lattice: Lattice) -> Result<Self> {
        let k = 2 * r2 as i64 - n;
        if k < 0 {
            return Err(Error::InvalidComplex("MH query needs 2r - n >= 0".into()));
        }
        Ok(SecondaryQuery { lattice, r: r2, k })
    }
}

/// Lattice data of `im(H^j(Z) → H^j(Q))` expressed in the rational generator
/// basis, plus kernels/images of a rational map into the same basis.
struct RationalPicture {
    /// ambient dimension: `dim H^j(Q)`
    dim: usize,
    /// columns: classes of the integral generators (the lattice `L_j`)
    lattice: RatMat,
}

fn rational_picture(
    ctx: &SecondaryContext,
    hz: &ComplexCohomology,
    hq: &ComplexCohomology,
    j: i64,
) -> RationalPicture {
    let dim = hq.group(j).map_or(0, |g| g.free_rank);
    let cl = hq.rat_classifier(j);
    let mut cols = Vec::new();
    if let (Some(gz), Some(cl)) = (hz.group(j), cl) {
        // free integral generators only; torsion dies rationally
        for g in gz.generators.iter().skip(gz.torsion.len()) {
            cols.push(cl.class_coords(g));
        }
    }
    let mut lattice = RatMat::zeros(dim, cols.len());
    for (jj, c) in cols.iter().enumerate() {
        for (i, v) in c.iter().enumerate() {
            lattice[(i, jj)] = v.clone();
        }
    }
    let _ = ctx;
    RationalPicture { dim, lattice }
}

/// Graded data of the map `H(A) → H(Q-forms)` induced by an inclusion-like
/// chain map: kernel dimension, image subspace, and the rank of
/// `image ∩ lattice`.
struct MapIntoRational {
    kernel_dim: usize,
    image: RatMat,
    image_meet_lattice_rank: usize,
}

fn map_into_rational(
    f_cocycles: &RatMat,
    picture: &RationalPicture,
    hq_cl: Option<&crate::complexes::RatClassifier>,
) -> MapIntoRational {
    // columns of f_cocycles are cocycles in the big rational complex
    let cols = f_cocycles.cols();
    let mut image_cols = RatMat::zeros(picture.dim, cols);
    if let Some(cl) = hq_cl {
        for j in 0..cols {
            let coords = cl.class_coords(&f_cocycles.col_vec(j));
            for (i, v) in coords.iter().enumerate() {
                image_cols[(i, j)] = v.clone();
            }
        }
    }
    let rank = image_cols.rank();
    let kernel_dim = cols - rank;
    // image ∩ lattice: solve image·x = lattice·z jointly; the intersection
    // rank equals dim(image) + rank(lattice) - dim(image + lattice)
    let joint = image_cols.hcat(&picture.lattice);
    let sum_rank = joint.rank();
    let lat_rank = picture.lattice.rank();
    let meet = rank + lat_rank - sum_rank;
    MapIntoRational {
        kernel_dim,
        image: image_cols,
        image_meet_lattice_rank: meet,
    }
}

/// Result of a differential-character or multiplicative-cohomology query.
pub struct SecondaryGroup {
    pub group: MixedGroup,
    /// dimension data, for reports
    pub query: SecondaryQuery,
}

/// `Ĥ^{k-1}_r = H^k(cone(σ_{≥k} F^r Ω → C(·; C/Λ)))`, reported as graded
/// pieces via the cone long exact sequence.
pub fn diffchar_group(ctx: &SecondaryContext, q: &SecondaryQuery) -> Result<SecondaryGroup> {
    ctx.check_degree(q.k)?;
    let k = q.k;
    match q.lattice {
        Lattice::Rationals => {
            // C/Λ = 0: the cone is the shifted source
            let (a, _) = ctx.truncated_filtered(k, q.r)?;
            let ha = cohomology_window(&a, Some((k, k)))?;
            let dim = ha.group(k).map_or(0, |g| g.free_rank);
            Ok(SecondaryGroup {
                group: MixedGroup::new(dim, 0, vec![], 0),
                query: *q,
            })
        }
        Lattice::Zero => {
            // fully rational cone
            let (a, incl) = ctx.truncated_filtered(k, q.r)?;
            let _ = &a;
            let cone = mapping_cone(&incl)?;
            let h = cohomology_window(&cone.cone, Some((k, k)))?;
            let dim = h.group(k).map_or(0, |g| g.free_rank);
            Ok(SecondaryGroup {
                group: MixedGroup::new(dim, 0, vec![], 0),
                query: *q,
            })
        }
        Lattice::Integers => {
            let (a, incl) = ctx.truncated_filtered(k, q.r)?;
            let hz = cohomology_window(&ctx.z_complex, Some((k - 1, k + 1)))?;
            let hq = cohomology_window(&ctx.q_complex, Some((k - 1, k + 1)))?;
            let ha = cohomology_window(&a, Some((k - 1, k)))?;
            // coker(φ_{k-1}): (Q/Z)^{b_{k-1} - w} ⊕ torsion H^k(Z)
            let pic_prev = rational_picture(ctx, &hz, &hq, k - 1);
            let prev_gens = gens_as_cols(&ha, k - 1, a.dim(k - 1));
            let prev_cocycles = map_cols(&incl, k - 1, &prev_gens);
            let prev = map_into_rational(&prev_cocycles, &pic_prev, hq.rat_classifier(k - 1));
            let w = prev.image.rank();
            let qz_rank = pic_prev.dim - w;
            let torsion = hz.group(k).map_or(vec![], |g| g.torsion.clone());
            // ker(φ_k): Q^{dim ker ψ} ⊕ Z^{rank(im ψ ∩ L_k)}
            let pic = rational_picture(ctx, &hz, &hq, k);
            let gens = gens_as_cols(&ha, k, a.dim(k));
            let cocycles = map_cols(&incl, k, &gens);
            let m = map_into_rational(&cocycles, &pic, hq.rat_classifier(k));
            Ok(SecondaryGroup {
                group: MixedGroup::new(m.kernel_dim, qz_rank, torsion, m.image_meet_lattice_rank),
                query: *q,
            })
        }
    }
}

fn gens_as_cols(h: &ComplexCohomology, k: i64, dim: usize) -> RatMat {
    let gens = h.group(k).map(|g| g.generators.clone()).unwrap_or_default();
    let mut m = RatMat::zeros(dim, gens.len());
    for (j, g) in gens.iter().enumerate() {
        for (i, v) in g.iter().enumerate() {
            m[(i, j)] = v.clone();
        }
    }
    m
}

fn map_cols(f: &ChainMap, k: i64, cols: &RatMat) -> RatMat {
    f.mat(k).mul(cols)
}

/// `MH^{2r}_n = H^{2r-n}(cone(C(Λ) ⊕ F^r Ω → C(C)))` as graded pieces.
pub fn mh_group(ctx: &SecondaryContext, q: &SecondaryQuery) -> Result<SecondaryGroup> {
    ctx.check_degree(q.k)?;
    let k = q.k;
    match q.lattice {
        Lattice::Rationals => {
            // Λ = Q: cone(C_Q ⊕ F^r Ω → C_Q), fully rational
            let pieces = filtration_pieces(&ctx.q_complex, &ctx.filtration, q.r)?;
            let (sum, incl_a, incl_b) = FreeComplex::direct_sum(&ctx.q_complex, &pieces.sub);
            let _ = incl_a;
            let _ = incl_b;
            let f = difference_map(&sum, &ctx.q_complex, &pieces.inclusion)?;
            let cone = mapping_cone(&f)?;
            let h = cohomology_window(&cone.cone, Some((k, k)))?;
            let dim = h.group(k).map_or(0, |g| g.free_rank);
            Ok(SecondaryGroup {
                group: MixedGroup::new(dim, 0, vec![], 0),
                query: *q,
            })
        }
        Lattice::Zero => {
            // Λ = 0: cone(F^r Ω → C_Q)
            let pieces = filtration_pieces(&ctx.q_complex, &ctx.filtration, q.r)?;
            let cone = mapping_cone(&pieces.inclusion)?;
            let h = cohomology_window(&cone.cone, Some((k, k)))?;
            let dim = h.group(k).map_or(0, |g| g.free_rank);
            Ok(SecondaryGroup {
                group: MixedGroup::new(dim, 0, vec![], 0),
                query: *q,
            })
        }
        Lattice::Integers => {
            let pieces = filtration_pieces(&ctx.q_complex, &ctx.filtration, q.r)?;
            let hz = cohomology_window(&ctx.z_complex, Some((k - 1, k + 1)))?;
            let hq = cohomology_window(&ctx.q_complex, Some((k - 1, k + 1)))?;
            let hf = cohomology_window(&pieces.sub, Some((k - 1, k)))?;
            // coker(φ_{j-1}) = Q^{b_{j-1}} / (L + W): qz part only
            let pic_prev = rational_picture(ctx, &hz, &hq, k - 1);
            let prev_gens = gens_as_cols(&hf, k - 1, pieces.sub.dim(k - 1));
            let prev_cocycles = map_cols(&pieces.inclusion, k - 1, &prev_gens);
            let prev = map_into_rational(&prev_cocycles, &pic_prev, hq.rat_classifier(k - 1));
            let qz_rank = pic_prev.dim - prev.image.rank();
            // ker(φ_j) = torsion H^j(Z) ⊕ Q^{dim ker ρ} ⊕ Z^{rank(im ρ ∩ L)}
            let torsion = hz.group(k).map_or(vec![], |g| g.torsion.clone());
            let pic = rational_picture(ctx, &hz, &hq, k);
            let gens = gens_as_cols(&hf, k, pieces.sub.dim(k));
            let cocycles = map_cols(&pieces.inclusion, k, &gens);
            let m = map_into_rational(&cocycles, &pic, hq.rat_classifier(k));
            Ok(SecondaryGroup {
                group: MixedGroup::new(m.kernel_dim, qz_rank, torsion, m.image_meet_lattice_rank),
                query: *q,
            })
        }
    }
}

/// The difference map `(λ, ω) ↦ λ - ι(ω)` out of a direct sum built by
/// `FreeComplex::direct_sum(C, F)`.
fn difference_map(
    sum: &Arc<FreeComplex>,
    c: &Arc<FreeComplex>,
    f_incl: &ChainMap,
) -> Result<ChainMap> {
    let mut mats = std::collections::BTreeMap::new();
    for k in sum.degrees() {
        let n = c.dim(k);
        let fdim = sum.dim(k) - n;
        let mut m = RatMat::zeros(n, sum.dim(k));
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        let fm = f_incl.mat(k);
        assert_eq!(fm.cols(), fdim);
        for i in 0..n {
            for j in 0..fdim {
                m[(i, n + j)] = -fm[(i, j)].clone();
            }
        }
        mats.insert(k, m);
    }
    ChainMap::new(sum.clone(), c.clone(), mats)
}

/// A cocycle of the `MH` cone: `(λ, ω, v)` with `λ` integral, `ω` in the
/// filtration sub-basis coordinates, `v` rational of one degree lower.
#[derive(Clone, Debug)]
pub struct MhCocycle {
    pub degree: i64,
    pub lambda: Vec<Rat>,
    pub omega_coords: Vec<Rat>,
    pub v: Vec<Rat>,
}

/// A cocycle of the differential-character cone: `(a, b)` with `a` in the
/// truncated filtered sub-basis coordinates and `b` a rational lift of the
/// `C/Λ` part.
#[derive(Clone, Debug)]
pub struct DiffcharCocycle {
    pub degree: i64,
    pub a_coords: Vec<Rat>,
    pub b_lift: Vec<Rat>,
}

/// Everything `xi_surjection` reports.
pub struct XiReport {
    pub query: SecondaryQuery,
    pub diffchar: MixedGroup,
    pub mh: MixedGroup,
    /// one preimage was exhibited for every MH generator tested
    pub surjective: bool,
    pub generators_checked: usize,
    pub kernel: MixedGroup,
}

/// The cocycle-level surjection `(a, b) ↦ (a - δb̃, a, -b̃)`.
///
/// `a` is a closed form in `σ_{≥k}F^rΩ`, `b̃` a rational lift of the `C/Λ`
/// cochain; `c := a - δ b̃` is integral exactly when `(a, b)` is a cone
/// cocycle.
pub fn xi_cocycle(
    ctx: &SecondaryContext,
    q: &SecondaryQuery,
    incl: &ChainMap,
    x: &DiffcharCocycle,
) -> Result<MhCocycle> {
    let k = x.degree;
    let a_amb = incl.apply(k, &x.a_coords);
    let db = ctx.q_complex.apply_diff(k - 1, &x.b_lift);
    let lambda = vec_sub(&a_amb, &db);
    if !vec_is_integral(&lambda) {
        return Err(Error::Internal(
            "xi: a - δb̃ is not integral; input was not a cone cocycle".into(),
        ));
    }
    let _ = q;
    Ok(MhCocycle {
        degree: k,
        lambda,
        omega_coords: x.a_coords.clone(),
        v: crate::matrix::vec_neg(&x.b_lift),
    })
}

/// `Ξ : Ĥ^{2r-n-1}_r → MH^{2r}_n` is surjective, with kernel the forms
/// `F^rΩ^{k-1}` modulo those that are closed with class in the image of
/// `H^{k-1}(Λ)`. Surjectivity is verified generator-by-generator and the
/// kernel group is computed from that description.
pub fn xi_surjection(ctx: &SecondaryContext, q: &SecondaryQuery) -> Result<XiReport> {
    if q.lattice == Lattice::Rationals {
        return Err(Error::CoefficientMismatch(
            "xi is implemented for Λ = Z and Λ = 0".into(),
        ));
    }
    ctx.check_degree(q.k)?;
    let k = q.k;
    let dh = diffchar_group(ctx, q)?;
    let mh = mh_group(ctx, q)?;
    // kernel: F^rΩ^{k-1} modulo closed forms with Λ-classes
    let kernel = xi_kernel_group(ctx, q)?;
    // surjectivity: exhibit preimages of MH generators
    let (surjective, generators_checked) = xi_surjectivity(ctx, q)?;
    let _ = k;
    Ok(XiReport {
        query: *q,
        diffchar: dh.group,
        mh: mh.group,
        surjective,
        generators_checked,
        kernel,
    })
}

/// Kernel of Ξ as a mixed group: `q_rank = dim F^rΩ^{k-1} - dim V₁ - rank Λ₁`
/// and `qz_rank = rank Λ₁`, where `V₁` is the space of closed `F^r` forms
/// with zero rational class and `Λ₁` the lattice of their classes meeting
/// the `Λ`-image.
fn xi_kernel_group(ctx: &SecondaryContext, q: &SecondaryQuery) -> Result<MixedGroup> {
    let k = q.k;
    let pieces = filtration_pieces(&ctx.q_complex, &ctx.filtration, q.r)?;
    let dim_fr = pieces.sub.dim(k - 1);
    // closed (k-1)-forms inside F^r
    let closed = pieces.sub.diff(k - 1).kernel_basis();
    match q.lattice {
        Lattice::Zero => {
            // only the zero class is a Λ-image: V₁ = closed ∩ exact
            let hq = cohomology_window(&ctx.q_complex, Some((k - 1, k - 1)))?;
            let cl = hq.rat_classifier(k - 1).unwrap();
            let amb = pieces.inclusion.mat(k - 1).mul(&closed);
            let mut class_cols = RatMat::zeros(cl.dim(), amb.cols());
            for j in 0..amb.cols() {
                let coords = cl.class_coords(&amb.col_vec(j));
                for (i, v) in coords.iter().enumerate() {
                    class_cols[(i, j)] = v.clone();
                }
            }
            let v1 = amb.cols() - class_cols.rank();
            Ok(MixedGroup::new(dim_fr - v1, 0, vec![], 0))
        }
        Lattice::Integers => {
            let hz = cohomology_window(&ctx.z_complex, Some((k - 1, k - 1)))?;
            let hq = cohomology_window(&ctx.q_complex, Some((k - 1, k - 1)))?;
            let pic = rational_picture(ctx, &hz, &hq, k - 1);
            let cl = hq.rat_classifier(k - 1).unwrap();
            let amb = pieces.inclusion.mat(k - 1).mul(&closed);
            let mut class_cols = RatMat::zeros(pic.dim, amb.cols());
            for j in 0..amb.cols() {
                let coords = cl.class_coords(&amb.col_vec(j));
                for (i, v) in coords.iter().enumerate() {
                    class_cols[(i, j)] = v.clone();
                }
            }
            let w = class_cols.rank();
            let v1 = amb.cols() - w;
            // rank of (class space ∩ lattice L): full in the class span since
            // both are defined over Q and L has full rank b_{k-1}
            let joint = class_cols.hcat(&pic.lattice);
            let meet = w + pic.lattice.rank() - joint.rank();
            let q_rank = dim_fr - v1 - meet;
            Ok(MixedGroup::new(q_rank, meet, vec![], 0))
        }
        Lattice::Rationals => unreachable!(),
    }
}

/// Exhibit a Ξ-preimage for every generator of `MH`, by solving mixed
/// integral/rational linear systems at cocycle level.
fn xi_surjectivity(ctx: &SecondaryContext, q: &SecondaryQuery) -> Result<(bool, usize)> {
    let k = q.k;
    let generators = mh_generator_cocycles(ctx, q)?;
    let pieces = filtration_pieces(&ctx.q_complex, &ctx.filtration, q.r)?;
    let (a_trunc, incl) = ctx.truncated_filtered(k, q.r)?;
    let mut checked = 0;
    for gen in &generators {
        checked += 1;
        if !xi_preimage_exists(ctx, q, &pieces, &a_trunc, &incl, gen)? {
            return Ok((false, checked));
        }
    }
    Ok((true, checked))
}

/// Generator cocycles of `MH^{2r}_n` covering every graded piece, built from
/// the LES data: `(0, 0, u)` for the coker part (`u` a rational
/// `(k-1)`-cocycle), `(λ, ω, v)` with `λ - ι(ω) = δv` for the ker part.
pub fn mh_generator_cocycles(ctx: &SecondaryContext, q: &SecondaryQuery) -> Result<Vec<MhCocycle>> {
    let k = q.k;
    let pieces = filtration_pieces(&ctx.q_complex, &ctx.filtration, q.r)?;
    let mut out = Vec::new();
    let hq = cohomology_window(&ctx.q_complex, Some((k - 1, k)))?;
    // coker part: rational (k-1)-classes
    if let Some(g) = hq.group(k - 1) {
        for gen in &g.generators {
            out.push(MhCocycle {
                degree: k,
                lambda: vec![Rat::zero(); ctx.z_complex.dim(k)],
                omega_coords: vec![Rat::zero(); pieces.sub.dim(k)],
                v: gen.clone(),
            });
        }
    }
    match q.lattice {
        Lattice::Zero => {
            // ker part: classes [ω] with zero rational class: ω closed in
            // F^r, ι(ω) = δv
            let hf = cohomology_window(&pieces.sub, Some((k, k)))?;
            if let Some(g) = hf.group(k) {
                let cl = hq.rat_classifier(k).unwrap();
                for gen in &g.generators {
                    let amb = pieces.inclusion.apply(k, gen);
                    if cl.is_coboundary(&amb) {
                        // ι(ω) = δv: honest kernel generator
                        let v = solve_rational_potential(ctx, k, &amb)?;
                        out.push(MhCocycle {
                            degree: k,
                            lambda: vec![Rat::zero(); ctx.z_complex.dim(k)],
                            omega_coords: gen.clone(),
                            v: crate::matrix::vec_neg(&v),
                        });
                    }
                }
            }
        }
        Lattice::Integers => {
            // torsion generators of H^k(Z): (λ, 0, v) with λ = δv rationally
            let hz = cohomology_window(&ctx.z_complex, Some((k, k)))?;
            if let Some(g) = hz.group(k) {
                for (i, gen) in g.generators.iter().enumerate() {
                    if i < g.torsion.len() {
                        let v = solve_rational_potential(ctx, k, gen)?;
                        out.push(MhCocycle {
                            degree: k,
                            lambda: gen.clone(),
                            omega_coords: vec![Rat::zero(); pieces.sub.dim(k)],
                            v,
                        });
                    }
                }
            }
            // q-part: F^r classes dying rationally give (0, ω, -v)
            let hf = cohomology_window(&pieces.sub, Some((k, k)))?;
            let clq = hq.rat_classifier(k).unwrap();
            if let Some(gf) = hf.group(k) {
                for gen in &gf.generators {
                    let amb = pieces.inclusion.apply(k, gen);
                    if clq.is_coboundary(&amb) {
                        let v = solve_rational_potential(ctx, k, &amb)?;
                        out.push(MhCocycle {
                            degree: k,
                            lambda: vec![Rat::zero(); ctx.z_complex.dim(k)],
                            omega_coords: gen.clone(),
                            v: crate::matrix::vec_neg(&v),
                        });
                    }
                }
            }
            // z-part: the lattice of free integral classes whose rational
            // class lies in the image of H^k(F^r). Its basis comes from the
            // integer kernel of (annihilator of im) ∘ (lattice class map).
            if let (Some(gf), Some(gz)) = (hf.group(k), hz.group(k)) {
                let free_z: Vec<&Vec<Rat>> = gz.generators.iter().skip(gz.torsion.len()).collect();
                if !free_z.is_empty() {
                    let b = clq.dim();
                    let mut lmat = RatMat::zeros(b, free_z.len());
                    for (j, g) in free_z.iter().enumerate() {
                        for (i, v) in clq.class_coords(g).iter().enumerate() {
                            lmat[(i, j)] = v.clone();
                        }
                    }
                    let mut mmat = RatMat::zeros(b, gf.generators.len());
                    for (j, g) in gf.generators.iter().enumerate() {
                        let amb = pieces.inclusion.apply(k, g);
                        for (i, v) in clq.class_coords(&amb).iter().enumerate() {
                            mmat[(i, j)] = v.clone();
                        }
                    }
                    // rows annihilating im(M)
                    let p = mmat.transpose().kernel_basis().transpose();
                    let pl = p.mul(&lmat);
                    let mut int_rows = Vec::new();
                    for i in 0..pl.rows() {
                        let row: Vec<Rat> = (0..pl.cols()).map(|j| pl[(i, j)].clone()).collect();
                        let (ints, _) = crate::matrix::clear_denominators(&row);
                        int_rows.push(ints);
                    }
                    let zbasis = if int_rows.is_empty() {
                        crate::matrix::IntMat::identity(free_z.len())
                    } else {
                        snf::kernel_int(&crate::matrix::IntMat::from_rows(int_rows))
                    };
                    let n = ctx.z_complex.dim(k);
                    for jz in 0..zbasis.cols() {
                        let mut lambda = vec![Rat::zero(); n];
                        for (i, g) in free_z.iter().enumerate() {
                            let zi = Rat::from(zbasis[(i, jz)].clone());
                            if zi.is_zero() {
                                continue;
                            }
                            for (row, x) in g.iter().enumerate() {
                                lambda[row] = lambda[row].clone() + zi.clone() * x.clone();
                            }
                        }
                        // matching ω: solve M t = class(λ), ω = Σ t_j gen_j
                        let lclass = clq.class_coords(&lambda);
                        let t = mmat
                            .solve(&RatMat::column(lclass))
                            .ok_or_else(|| Error::Internal("z-part class not matched".into()))?
                            .col_vec(0);
                        let mut omega_coords = vec![Rat::zero(); pieces.sub.dim(k)];
                        for (j, g) in gf.generators.iter().enumerate() {
                            if t[j].is_zero() {
                                continue;
                            }
                            for (row, x) in g.iter().enumerate() {
                                omega_coords[row] =
                                    omega_coords[row].clone() + t[j].clone() * x.clone();
                            }
                        }
                        let omega_amb = pieces.inclusion.apply(k, &omega_coords);
                        let target = vec_sub(&lambda, &omega_amb);
                        let v = solve_rational_potential(ctx, k, &target)?;
                        out.push(MhCocycle {
                            degree: k,
                            lambda,
                            omega_coords,
                            v,
                        });
                    }
                }
            }
        }
        Lattice::Rationals => {}
    }
    // keep only honest cocycles
    let pieces_check = pieces;
    out.retain(|c| verify_mh_cocycle(ctx, q, &pieces_check, c).is_ok());
    Ok(out)
}

fn solve_rational_potential(ctx: &SecondaryContext, k: i64, target: &[Rat]) -> Result<Vec<Rat>> {
    let d = ctx.q_complex.diff(k - 1);
    let rhs = RatMat::column(target.to_vec());
    let sol = d
        .solve(&rhs)
        .ok_or_else(|| Error::Internal("expected exact class has no potential".into()))?;
    Ok(sol.col_vec(0))
}

/// Cocycle condition for the MH cone: `δλ = 0`, `δω = 0` (in `F^r`), and
/// `λ - ι(ω) = δ v`.
pub fn verify_mh_cocycle(
    ctx: &SecondaryContext,
    q: &SecondaryQuery,
    pieces: &crate::complexes::FiltrationPieces,
    c: &MhCocycle,
) -> Result<()> {
    let k = c.degree;
    if !vec_is_integral(&c.lambda) {
        return Err(Error::InvalidComplex("MH cocycle: λ not integral".into()));
    }
    let dl = ctx.z_complex.apply_diff(k, &c.lambda);
    if dl.iter().any(|x| !x.is_zero()) {
        return Err(Error::InvalidComplex("MH cocycle: δλ != 0".into()));
    }
    let dw = pieces.sub.apply_diff(k, &c.omega_coords);
    if dw.iter().any(|x| !x.is_zero()) {
        return Err(Error::InvalidComplex("MH cocycle: δω != 0".into()));
    }
    let omega_amb = pieces.inclusion.apply(k, &c.omega_coords);
    let dv = ctx.q_complex.apply_diff(k - 1, &c.v);
    let resid = vec_sub(&vec_sub(&c.lambda, &omega_amb), &dv);
    if resid.iter().any(|x| !x.is_zero()) {
        return Err(Error::InvalidComplex("MH cocycle: λ - ω != δv".into()));
    }
    let _ = q;
    Ok(())
}

/// Decide whether an MH cocycle is a coboundary: `(λ, ω, v) = d(μ, τ, ρ)`
/// with `μ` integral, `τ ∈ F^r`, `ρ` rational, i.e.
/// `λ = δμ`, `ω = δτ`, `v = μ - ι(τ) - δρ`.
pub fn mh_is_coboundary(
    ctx: &SecondaryContext,
    pieces: &crate::complexes::FiltrationPieces,
    c: &MhCocycle,
) -> Result<bool> {
    let k = c.degree;
    let n_mu = ctx.z_complex.dim(k - 1);
    let n_tau = pieces.sub.dim(k - 1);
    let n_rho = ctx.q_complex.dim(k - 2);
    let rows_top = ctx.z_complex.dim(k);
    let rows_mid = pieces.sub.dim(k);
    let rows_bot = ctx.q_complex.dim(k - 1);
    let rows = rows_top + rows_mid + rows_bot;
    // integral unknowns: μ; rational unknowns: τ, ρ
    let dz = ctx.z_complex.diff(k - 1);
    let mut az = RatMat::zeros(rows, n_mu);
    for i in 0..rows_top {
        for j in 0..n_mu {
            az[(i, j)] = dz[(i, j)].clone();
        }
    }
    for i in 0..rows_bot {
        for j in 0..n_mu {
            az[(rows_top + rows_mid + i, j)] = if i == j { Rat::one() } else { Rat::zero() };
        }
    }
    let df = pieces.sub.diff(k - 1);
    let incl = pieces.inclusion.mat(k - 1);
    let dq = ctx.q_complex.diff(k - 2);
    let mut aq = RatMat::zeros(rows, n_tau + n_rho);
    for i in 0..rows_mid {
        for j in 0..n_tau {
            aq[(rows_top + i, j)] = df[(i, j)].clone();
        }
    }
    for i in 0..rows_bot {
        for j in 0..n_tau {
            aq[(rows_top + rows_mid + i, j)] = -incl[(i, j)].clone();
        }
        for j in 0..n_rho {
            aq[(rows_top + rows_mid + i, n_tau + j)] = -dq[(i, j)].clone();
        }
    }
    let mut t = Vec::with_capacity(rows);
    t.extend(c.lambda.iter().cloned());
    t.extend(c.omega_coords.iter().cloned());
    t.extend(c.v.iter().cloned());
    let azi = az.to_int().expect("integral block");
    Ok(snf::mixed_solve(&azi, &aq, &t).is_some())
}

/// Decide whether a differential-character cocycle is a coboundary:
/// `(a, b̄) = d(x, ȳ)` with `x ∈ σ_{≥k}F^r` of degree `k-1`, `y` rational,
/// i.e. `a = δx` and `b - x + δy` integral.
pub fn diffchar_is_coboundary(
    ctx: &SecondaryContext,
    q: &SecondaryQuery,
    a_trunc: &Arc<FreeComplex>,
    incl: &ChainMap,
    c: &DiffcharCocycle,
) -> Result<bool> {
    let k = c.degree;
    let n_x = a_trunc.dim(k - 1);
    let n_y = ctx.q_complex.dim(k - 2);
    let rows_top = a_trunc.dim(k);
    let rows_bot = ctx.q_complex.dim(k - 1);
    let rows = rows_top + rows_bot;
    // unknowns: x (rational, in truncated basis), y (rational), m (integral
    // slack absorbing the mod-Λ quotient)
    let n_m = if q.lattice == Lattice::Integers {
        rows_bot
    } else {
        0
    };
    let mut az = RatMat::zeros(rows, n_m);
    for i in 0..n_m {
        az[(rows_top + i, i)] = Rat::one();
    }
    let dx = a_trunc.diff(k - 1);
    let incl_x = incl.mat(k - 1);
    let dy = ctx.q_complex.diff(k - 2);
    let mut aq = RatMat::zeros(rows, n_x + n_y);
    for i in 0..rows_top {
        for j in 0..n_x {
            aq[(i, j)] = dx[(i, j)].clone();
        }
    }
    for i in 0..rows_bot {
        for j in 0..n_x {
            aq[(rows_top + i, j)] = -incl_x[(i, j)].clone();
        }
        for j in 0..n_y {
            aq[(rows_top + i, n_x + j)] = -dy[(i, j)].clone();
        }
    }
    let mut t = Vec::with_capacity(rows);
    t.extend(c.a_coords.iter().cloned());
    t.extend(c.b_lift.iter().cloned());
    let azi = az.to_int().expect("integral block");
    Ok(snf::mixed_solve(&azi, &aq, &t).is_some())
}

fn xi_preimage_exists(
    ctx: &SecondaryContext,
    q: &SecondaryQuery,
    pieces: &crate::complexes::FiltrationPieces,
    a_trunc: &Arc<FreeComplex>,
    incl: &ChainMap,
    gen: &MhCocycle,
) -> Result<bool> {
    // find a diffchar cocycle (a, b) and a cone-coboundary such that
    // Ξ(a, b) = gen + d(μ, τ, ρ). unknowns: a ∈ (σ≥k F^r)^k closed, b̃
    // rational (k-1)-cochain, μ integral (k-1), τ ∈ F^r degree k-1, ρ
    // rational (k-2). The λ row forces a - δb̃ - δμ = λ (integrality of
    // a - δb̃ comes out of solvability), the ω row a - ω = δτ, the v row
    // -b̃ - v = μ - τ - δρ.
    let k = gen.degree;
    let n_a = a_trunc.dim(k);
    let n_b = ctx.q_complex.dim(k - 1);
    let n_mu = ctx.z_complex.dim(k - 1);
    let n_tau = pieces.sub.dim(k - 1);
    let n_rho = ctx.q_complex.dim(k - 2);
    let rows_lam = ctx.z_complex.dim(k);
    let rows_om = pieces.sub.dim(k);
    let rows_v = ctx.q_complex.dim(k - 1);
    let rows_closed = a_trunc.dim(k + 1);
    let rows = rows_lam + rows_om + rows_v + rows_closed;
    let incl_a = incl.mat(k);
    let proj_f = pieces.projection.mat(k);
    let _ = proj_f;
    let dq = ctx.q_complex.diff(k - 1);
    let df_in = pieces.inclusion.mat(k - 1);
    let dr = ctx.q_complex.diff(k - 2);
    let da = a_trunc.diff(k);
    // integral unknowns: μ
    let mut az = RatMat::zeros(rows, n_mu);
    let dz = ctx.z_complex.diff(k - 1);
    for i in 0..rows_lam {
        for j in 0..n_mu {
            az[(i, j)] = dz[(i, j)].clone();
        }
    }
    for i in 0..rows_v {
        for j in 0..n_mu {
            az[(rows_lam + rows_om + i, j)] = if i == j { Rat::one() } else { Rat::zero() };
        }
    }
    // rational unknowns: a, b̃, τ, ρ
    let n_q = n_a + n_b + n_tau + n_rho;
    let mut aq = RatMat::zeros(rows, n_q);
    // λ row: ι(a) - δ b̃ - δμ = λ
    for i in 0..rows_lam {
        for j in 0..n_a {
            aq[(i, j)] = incl_a[(i, j)].clone();
        }
        for j in 0..n_b {
            aq[(i, n_a + j)] = -dq[(i, j)].clone();
        }
    }
    // ω row: a - δτ = ω, in F^r sub-coordinates. a lives in the truncated
    // basis, which reuses the F^r basis in degrees >= k: express directly.
    for i in 0..rows_om {
        for j in 0..n_a {
            // truncated basis j corresponds to F^r basis index j at degree k
            aq[(rows_lam + i, j)] = if i == j { Rat::one() } else { Rat::zero() };
        }
        let dfk = pieces.sub.diff(k - 1);
        for j in 0..n_tau {
            aq[(rows_lam + i, n_a + n_b + j)] = -dfk[(i, j)].clone();
        }
    }
    // v row: -b̃ - μ + ι(τ) + δρ = v
    for i in 0..rows_v {
        for j in 0..n_b {
            aq[(rows_lam + rows_om + i, n_a + j)] = -if i == j { Rat::one() } else { Rat::zero() };
        }
        for j in 0..n_tau {
            aq[(rows_lam + rows_om + i, n_a + n_b + j)] = -(-df_in[(i, j)].clone());
        }
        for j in 0..n_rho {
            aq[(rows_lam + rows_om + i, n_a + n_b + n_tau + j)] = dr[(i, j)].clone();
        }
    }
    // closedness of a
    for i in 0..rows_closed {
        for j in 0..n_a {
            aq[(rows_lam + rows_om + rows_v + i, j)] = da[(i, j)].clone();
        }
    }
    let mut t = Vec::with_capacity(rows);
    t.extend(gen.lambda.iter().cloned());
    t.extend(gen.omega_coords.iter().cloned());
    t.extend(gen.v.iter().cloned());
    t.extend(std::iter::repeat_n(Rat::zero(), rows_closed));
    let azi = az.to_int().expect("integral block");
    let _ = q;
    Ok(snf::mixed_solve(&azi, &aq, &t).is_some())
}

/// The isomorphism `Ĥ^{r-1}(C/Λ) ≅ MH^{2r}_r(Λ; σ)` (bête filtration,
/// `n = r`): build both groups, check the graded pieces agree and that the
/// cocycle-level map matches kernel triviality and surjectivity.
pub struct CsIsoReport {
    pub diffchar: MixedGroup,
    pub mh: MixedGroup,
    pub isomorphism: bool,
    pub kernel_trivial: bool,
    pub surjective: bool,
}

pub fn cs_iso_check(ctx: &SecondaryContext, r2: usize, lattice: Lattice) -> Result<CsIsoReport> {
    let q = SecondaryQuery::mh(r2, r2 as i64, lattice)?;
    let xi = xi_surjection(ctx, &q)?;
    let kernel_trivial = xi.kernel.is_zero();
    let graded_equal = xi.diffchar == xi.mh;
    Ok(CsIsoReport {
        diffchar: xi.diffchar,
        mh: xi.mh,
        isomorphism: kernel_trivial && xi.surjective && graded_equal,
        kernel_trivial,
        surjective: xi.surjective,
    })
}

/// One node of the long exact sequence report.
pub struct LesNode {
    pub name: String,
    pub exact: bool,
}

pub struct LesReport {
    pub nodes: Vec<LesNode>,
}

impl LesReport {
    pub fn all_exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }
}

/// Exactness of
/// `H^{k-1}(C;Λ) → H^{k-1}(Ω/F^r) → MH^{2r}_n → H^k(C;Λ) → H^k(Ω/F^r)`
/// checked as subgroup equalities at the three middle nodes, with all maps
/// realized at cocycle level.
pub fn mh_les(ctx: &SecondaryContext, q: &SecondaryQuery) -> Result<LesReport> {
    if q.lattice != Lattice::Integers {
        return Err(Error::CoefficientMismatch(
            "the LES report is implemented for Λ = Z".into(),
        ));
    }
    ctx.check_degree(q.k)?;
    let k = q.k;
    let pieces = filtration_pieces(&ctx.q_complex, &ctx.filtration, q.r)?;
    let hz = cohomology_window(&ctx.z_complex, Some((k - 1, k)))?;
    let hquot = cohomology_window(&pieces.quotient, Some((k - 1, k)))?;
    let mut nodes = Vec::new();

    // --- node H^{k-1}(Ω/F^r): im(H^{k-1}(Λ)) = ker(→ MH) ---
    {
        let dim = hquot.group(k - 1).map_or(0, |g| g.free_rank);
        let cl = hquot.rat_classifier(k - 1).unwrap();
        // image lattice: classes of reduced integral cocycles
        let mut img_cols = Vec::new();
        if let Some(g) = hz.group(k - 1) {
            for gen in &g.generators {
                let reduced = pieces.projection.apply(k - 1, gen);
                img_cols.push(cl.class_coords(&reduced));
            }
        }
        let mut lattice = RatMat::zeros(dim, img_cols.len());
        for (j, c) in img_cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                lattice[(i, j)] = v.clone();
            }
        }
        let image = MixedSubgroup::new(dim, RatMat::zeros(dim, 0), lattice);
        // kernel of [u] ↦ class of (0, δu-part, -u): u with u = ι(τ) - μ + δρ
        // i.e. classes of quotient cocycles lifting to F^r + integral + exact
        let kernel = les_quotient_to_mh_kernel(ctx, q, &pieces, &hquot, k - 1)?;
        nodes.push(LesNode {
            name: format!("H^{}(Ω/F^r)", k - 1),
            exact: image.equals(&kernel),
        });
    }

    // --- node MH: im(H^{k-1}(Ω/F^r)) = ker(MH → H^k(Λ)) ---
    {
        // check: (a) the composite vanishes; (b) every kernel-ish generator
        // of MH (the coker φ part and torsion part and pairs with λ exact)
        // is hit. We verify (a) exactly and (b) by the graded count via the
        // two flanking computations.
        let mut composite_zero = true;
        if let Some(g) = hquot.group(k - 1) {
            for gen in &g.generators {
                // lift [u] to MH cocycle (0, δ(lift), -lift):
                let lift = lift_quotient_cocycle(&pieces, k - 1, gen)?;
                let dlift = ctx.q_complex.apply_diff(k - 1, &lift);
                let omega_coords = pieces
                    .inclusion
                    .mat(k)
                    .solve(&RatMat::column(dlift.clone()))
                    .map(|m| m.col_vec(0))
                    .unwrap_or_else(|| vec![Rat::zero(); pieces.sub.dim(k)]);
                let c = MhCocycle {
                    degree: k,
                    lambda: vec![Rat::zero(); ctx.z_complex.dim(k)],
                    omega_coords,
                    v: crate::matrix::vec_neg(&lift),
                };
                // image in H^k(Λ) is the λ-part class: zero on the nose
                if c.lambda.iter().any(|x| !x.is_zero()) {
                    composite_zero = false;
                }
            }
        }
        // graded count: rank/torsion bookkeeping of the three groups
        let mh = mh_group(ctx, q)?.group;
        let counts_ok = les_counts_consistent(ctx, q, &pieces, &mh, k)?;
        nodes.push(LesNode {
            name: "MH".into(),
            exact: composite_zero && counts_ok,
        });
    }

    // --- node H^k(Λ): im(MH → H^k(Λ)) = ker(H^k(Λ) → H^k(Ω/F^r)) ---
    {
        let gens = mh_generator_cocycles(ctx, q)?;
        let hz_k = cohomology_window(&ctx.z_complex, Some((k, k)))?;
        let clz = hz_k.int_classifier(k).unwrap();
        let n_coords = clz.kernel_dim();
        let mut img_cols = Vec::new();
        for g in &gens {
            img_cols.push(clz.raw_coords(&g.lambda));
        }
        // relations: divisors of H^k(Z)
        let mut rel_cols = Vec::new();
        for (i, d) in clz.divisors.iter().enumerate() {
            if !d.is_zero() {
                let mut c = vec![Rat::zero(); n_coords];
                c[i] = Rat::from(d.clone());
                rel_cols.push(c);
            }
        }
        let image = subgroup_from_cols(n_coords, &img_cols, &rel_cols);
        // kernel: raw coords z of classes whose quotient-reduction class
        // vanishes: compute by solving for each basis summand
        let kernel = les_z_to_quotient_kernel(&pieces, &hz_k, &hquot, k)?;
        nodes.push(LesNode {
            name: format!("H^{k}(Λ)"),
            exact: image.equals(&kernel),
        });
    }

    Ok(LesReport { nodes })
}

/// Any rational representative of a quotient-complex cochain.
fn lift_quotient_cocycle(
    pieces: &crate::complexes::FiltrationPieces,
    deg: i64,
    u: &[Rat],
) -> Result<Vec<Rat>> {
    let proj = pieces.projection.mat(deg);
    let sol = proj
        .solve(&RatMat::column(u.to_vec()))
        .ok_or_else(|| Error::Internal("quotient cochain has no lift".into()))?;
    Ok(sol.col_vec(0))
}

fn subgroup_from_cols(dim: usize, cols: &[Vec<Rat>], extra: &[Vec<Rat>]) -> MixedSubgroup {
    let mut lattice = RatMat::zeros(dim, cols.len() + extra.len());
    for (j, c) in cols.iter().chain(extra.iter()).enumerate() {
        for (i, v) in c.iter().enumerate() {
            lattice[(i, j)] = v.clone();
        }
    }
    MixedSubgroup::new(dim, RatMat::zeros(dim, 0), lattice)
}

/// Kernel of `H^{k-1}(Ω/F^r) → MH` as a mixed subgroup of the quotient
/// class space: classes of quotient cocycles `[u]` with
/// `u = ι(τ) - μ + δρ` (τ ∈ F^r, μ an integral cocycle, ρ rational).
fn les_quotient_to_mh_kernel(
    ctx: &SecondaryContext,
    q: &SecondaryQuery,
    pieces: &crate::complexes::FiltrationPieces,
    hquot: &ComplexCohomology,
    deg: i64,
) -> Result<MixedSubgroup> {
    let _ = q;
    let cl = hquot.rat_classifier(deg).unwrap();
    let dim = cl.dim();
    // subspace part: F^r reduces to zero in the quotient already; the
    // divisible part of the kernel is the image of exact classes = 0 in
    // cohomology. So the kernel is generated by images of integral cocycle
    // classes (a lattice).
    let hz = cohomology_window(&ctx.z_complex, Some((deg, deg)))?;
    let mut cols = Vec::new();
    if let Some(g) = hz.group(deg) {
        for gen in &g.generators {
            let reduced = pieces.projection.apply(deg, gen);
            cols.push(cl.class_coords(&reduced));
        }
    }
    Ok(subgroup_from_cols(dim, &cols, &[]))
}

/// Kernel of `H^k(Λ) → H^k(Ω/F^r)` in raw integral class coordinates.
fn les_z_to_quotient_kernel(
    pieces: &crate::complexes::FiltrationPieces,
    hz_k: &ComplexCohomology,
    hquot: &ComplexCohomology,
    k: i64,
) -> Result<MixedSubgroup> {
    let clz = hz_k.int_classifier(k).unwrap();
    let clq = hquot.rat_classifier(k).unwrap();
    let n = clz.kernel_dim();
    // torsion relations are always in the kernel lattice
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    for (i, d) in clz.divisors.iter().enumerate() {
        if !d.is_zero() {
            let mut c = vec![Rat::zero(); n];
            c[i] = Rat::from(d.clone());
            cols.push(c);
        }
    }
    // basis summand i maps to the class of (reduction of representative);
    // kernel = integer combinations z with Σ z_i · class_i = 0 in the
    // quotient classes: solve the rational kernel and intersect with Z^n,
    // then add the relation columns
    let mut class_mat = RatMat::zeros(clq.dim(), n);
    for i in 0..n {
        let mut z = vec![Rat::zero(); n];
        z[i] = Rat::one();
        let rep = clz.representative(&z);
        let red = pieces.projection.apply(k, &rep);
        let coords = clq.class_coords(&red);
        for (row, v) in coords.iter().enumerate() {
            class_mat[(row, i)] = v.clone();
        }
    }
    let ker = class_mat.kernel_basis();
    // integer points of a rational subspace: scale each basis vector
    for j in 0..ker.cols() {
        let (ints, _) = crate::matrix::clear_denominators(&ker.col_vec(j));
        cols.push(ints.iter().map(|x| Rat::from(x.clone())).collect());
    }
    Ok(subgroup_from_cols(n, &cols, &[]))
}

/// Graded bookkeeping at the MH node. The sequence splits off
/// `0 → coker(H^{k-1}(Λ) → H^{k-1}(Ω/F^r)) → MH → ker(H^k(Λ) → H^k(Ω/F^r)) → 0`,
/// and the cokernel of a rank-`w` lattice inside `Q^d` is
/// `(Q/Z)^w ⊕ Q^{d-w}`. Both this SES and the cone recipe split (their
/// subobjects are divisible, hence injective), so the graded data must agree
/// exactly.
fn les_counts_consistent(
    ctx: &SecondaryContext,
    q: &SecondaryQuery,
    pieces: &crate::complexes::FiltrationPieces,
    mh: &MixedGroup,
    k: i64,
) -> Result<bool> {
    let _ = q;
    let hz_prev = cohomology_window(&ctx.z_complex, Some((k - 1, k - 1)))?;
    let hz_k = cohomology_window(&ctx.z_complex, Some((k, k)))?;
    let hquot = cohomology_window(&pieces.quotient, Some((k - 1, k)))?;
    let dim_prev = hquot.group(k - 1).map_or(0, |g| g.free_rank);
    let clq = hquot.rat_classifier(k - 1).unwrap();
    let mut lattice_cols = Vec::new();
    if let Some(g) = hz_prev.group(k - 1) {
        for gen in g.generators.iter().skip(g.torsion.len()) {
            let red = pieces.projection.apply(k - 1, gen);
            lattice_cols.push(clq.class_coords(&red));
        }
    }
    let mut lat = RatMat::zeros(dim_prev, lattice_cols.len());
    for (j, c) in lattice_cols.iter().enumerate() {
        for (i, v) in c.iter().enumerate() {
            lat[(i, j)] = v.clone();
        }
    }
    let w = lat.rank();
    let expected_qz = w;
    let expected_q = dim_prev - w;
    // kernel at degree k: torsion always dies in the torsion-free target;
    // the free kernel rank comes from the reduced classes
    let expected_torsion: Vec<Int> = hz_k.group(k).map_or(vec![], |g| g.torsion.clone());
    let clz = hz_k.int_classifier(k).unwrap();
    let clq_k = hquot.rat_classifier(k).unwrap();
    let free_idx = clz.free_indices();
    let mut free_cols = RatMat::zeros(clq_k.dim(), free_idx.len());
    for (j, &i) in free_idx.iter().enumerate() {
        let mut z = vec![Rat::zero(); clz.kernel_dim()];
        z[i] = Rat::one();
        let rep = clz.representative(&z);
        let red = pieces.projection.apply(k, &rep);
        let coords = clq_k.class_coords(&red);
        for (row, v) in coords.iter().enumerate() {
            free_cols[(row, j)] = v.clone();
        }
    }
    let expected_z = free_idx.len() - free_cols.rank();
    Ok(mh.qz_rank == expected_qz
        && mh.q_rank == expected_q
        && mh.torsion == expected_torsion
        && mh.z_rank == expected_z)
}
