//! Exact linear algebra on finite free cochain complexes over `Z` and `Q`:
//! cohomology with generators, mapping cones, truncations, filtrations,
//! induced maps, and rationals-mod-one cohomology via the Bockstein sequence.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{clear_denominators, RatMat};
use crate::snf::{self, SnfOptions};
use crate::{Int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffRing {
    Integers,
    Rationals,
}

/// A finite cochain complex of free modules with exact differentials.
///
/// Integral complexes keep their matrices in rational storage but every entry
/// is an integer; `coeff` records which ring the complex lives over.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    coeff: CoeffRing,
    min_deg: i64,
    dims: Vec<usize>,
    /// `diffs[i]` maps degree `min_deg + i` to `min_deg + i + 1`.
    diffs: Vec<RatMat>,
    /// Cohomology in degrees strictly below this bound is guaranteed exact
    /// for the truncated model; `None` means every degree is exact.
    exact_below: Option<i64>,
}

impl FreeComplex {
    pub fn new(
        coeff: CoeffRing,
        min_deg: i64,
        dims: Vec<usize>,
        diffs: Vec<RatMat>,
    ) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidComplex(
                "complex needs at least one degree".into(),
            ));
        }
        if diffs.len() + 1 != dims.len() {
            return Err(Error::InvalidComplex(format!(
                "expected {} differentials for {} degrees",
                dims.len() - 1,
                dims.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.rows() != dims[i + 1] || d.cols() != dims[i] {
                return Err(Error::InvalidComplex(format!(
                    "differential at degree {} has shape {}x{}, expected {}x{}",
                    min_deg + i as i64,
                    d.rows(),
                    d.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
            if coeff == CoeffRing::Integers && !d.is_integral() {
                return Err(Error::InvalidComplex(format!(
                    "integral complex has non-integer differential at degree {}",
                    min_deg + i as i64
                )));
            }
        }
        for i in 0..diffs.len().saturating_sub(1) {
            if !diffs[i + 1].mul(&diffs[i]).is_zero_matrix() {
                return Err(Error::InvalidComplex(format!(
                    "d² != 0 at degree {}",
                    min_deg + i as i64
                )));
            }
        }
        Ok(FreeComplex {
            coeff,
            min_deg,
            dims,
            diffs,
            exact_below: None,
        })
    }

    pub fn with_exact_below(mut self, bound: Option<i64>) -> Self {
        self.exact_below = bound;
        self
    }

    pub fn exact_below(&self) -> Option<i64> {
        self.exact_below
    }

    pub fn zero(coeff: CoeffRing) -> Self {
        FreeComplex {
            coeff,
            min_deg: 0,
            dims: vec![0],
            diffs: vec![],
            exact_below: None,
        }
    }

    pub fn coeff(&self) -> CoeffRing {
        self.coeff
    }

    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.min_deg..=self.max_deg()
    }

    pub fn dim(&self, k: i64) -> usize {
        if k < self.min_deg || k > self.max_deg() {
            0
        } else {
            self.dims[(k - self.min_deg) as usize]
        }
    }

    /// Differential matrix `C^k -> C^{k+1}` (zero-shaped outside the range).
    pub fn diff(&self, k: i64) -> RatMat {
        if k >= self.min_deg && k < self.max_deg() {
            self.diffs[(k - self.min_deg) as usize].clone()
        } else {
            RatMat::zeros(self.dim(k + 1), self.dim(k))
        }
    }

    pub fn to_rational(&self) -> FreeComplex {
        let mut c = self.clone();
        c.coeff = CoeffRing::Rationals;
        c
    }

    /// Same complex viewed over `Z`; errors if any entry is fractional.
    pub fn to_integral(&self) -> Result<FreeComplex> {
        for d in &self.diffs {
            if !d.is_integral() {
                return Err(Error::CoefficientMismatch(
                    "complex has non-integral differentials".into(),
                ));
            }
        }
        let mut c = self.clone();
        c.coeff = CoeffRing::Integers;
        Ok(c)
    }

    /// Apply the differential to a degree-`k` cochain.
    pub fn apply_diff(&self, k: i64, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.dim(k));
        self.diff(k).mul_vec(x)
    }

    /// Direct sum; returns the inclusions of both summands.
    pub fn direct_sum(
        a: &Arc<FreeComplex>,
        b: &Arc<FreeComplex>,
    ) -> (Arc<FreeComplex>, ChainMap, ChainMap) {
        assert_eq!(a.coeff, b.coeff);
        let min_deg = a.min_deg.min(b.min_deg);
        let max_deg = a.max_deg().max(b.max_deg());
        let dims: Vec<usize> = (min_deg..=max_deg).map(|k| a.dim(k) + b.dim(k)).collect();
        let diffs: Vec<RatMat> = (min_deg..max_deg)
            .map(|k| {
                let da = a.diff(k);
                let db = b.diff(k);
                let mut m = RatMat::zeros(a.dim(k + 1) + b.dim(k + 1), a.dim(k) + b.dim(k));
                for i in 0..da.rows() {
                    for j in 0..da.cols() {
                        m[(i, j)] = da[(i, j)].clone();
                    }
                }
                for i in 0..db.rows() {
                    for j in 0..db.cols() {
                        m[(a.dim(k + 1) + i, a.dim(k) + j)] = db[(i, j)].clone();
                    }
                }
                m
            })
            .collect();
        let sum = Arc::new(
            FreeComplex::new(a.coeff, min_deg, dims, diffs)
                .expect("direct sum")
                .with_exact_below(match (a.exact_below, b.exact_below) {
                    (None, None) => None,
                    (x, None) => x,
                    (None, y) => y,
                    (Some(x), Some(y)) => Some(x.min(y)),
                }),
        );
        let mut mats_a = BTreeMap::new();
        for k in a.degrees() {
            let mut m = RatMat::zeros(sum.dim(k), a.dim(k));
            for j in 0..a.dim(k) {
                m[(j, j)] = Rat::one();
            }
            mats_a.insert(k, m);
        }
        let incl_a = ChainMap::new(a.clone(), sum.clone(), mats_a).expect("inclusion");
        let mut mats_b = BTreeMap::new();
        for k in b.degrees() {
            let mut m = RatMat::zeros(sum.dim(k), b.dim(k));
            for j in 0..b.dim(k) {
                m[(a.dim(k) + j, j)] = Rat::one();
            }
            mats_b.insert(k, m);
        }
        let incl_b = ChainMap::new(b.clone(), sum.clone(), mats_b).expect("inclusion");
        (sum, incl_a, incl_b)
    }
}

/// A degree-wise linear map commuting with the differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: Arc<FreeComplex>,
    target: Arc<FreeComplex>,
    mats: BTreeMap<i64, RatMat>,
}

impl ChainMap {
    pub fn new(
        source: Arc<FreeComplex>,
        target: Arc<FreeComplex>,
        mats: BTreeMap<i64, RatMat>,
    ) -> Result<Self> {
        let f = ChainMap {
            source,
            target,
            mats,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn from_fn(
        source: Arc<FreeComplex>,
        target: Arc<FreeComplex>,
        entry: impl Fn(i64, usize, usize) -> Rat,
    ) -> ChainMap {
        let mut mats = BTreeMap::new();
        for k in source.degrees() {
            let m = RatMat::from_fn(target.dim(k), source.dim(k), |i, j| entry(k, i, j));
            mats.insert(k, m);
        }
        ChainMap {
            source,
            target,
            mats,
        }
    }

    pub fn identity(c: Arc<FreeComplex>) -> ChainMap {
        ChainMap::from_fn(
            c.clone(),
            c,
            |_, i, j| {
                if i == j {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            },
        )
    }

    pub fn zero(source: Arc<FreeComplex>, target: Arc<FreeComplex>) -> ChainMap {
        ChainMap {
            source,
            target,
            mats: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &Arc<FreeComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FreeComplex> {
        &self.target
    }

    pub fn mat(&self, k: i64) -> RatMat {
        self.mats
            .get(&k)
            .cloned()
            .unwrap_or_else(|| RatMat::zeros(self.target.dim(k), self.source.dim(k)))
    }

    pub fn apply(&self, k: i64, x: &[Rat]) -> Vec<Rat> {
        self.mat(k).mul_vec(x)
    }

    pub fn validate(&self) -> Result<()> {
        for (&k, m) in &self.mats {
            if m.rows() != self.target.dim(k) || m.cols() != self.source.dim(k) {
                return Err(Error::NotChainMap {
                    degree: k,
                    detail: format!(
                        "shape {}x{} vs expected {}x{}",
                        m.rows(),
                        m.cols(),
                        self.target.dim(k),
                        self.source.dim(k)
                    ),
                });
            }
        }
        let lo = self.source.min_deg().min(self.target.min_deg());
        let hi = self.source.max_deg().max(self.target.max_deg());
        for k in lo..hi {
            let lhs = self.target.diff(k).mul(&self.mat(k));
            let rhs = self.mat(k + 1).mul(&self.source.diff(k));
            if lhs != rhs {
                return Err(Error::NotChainMap {
                    degree: k,
                    detail: "square does not commute".into(),
                });
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> ChainMap {
        let mut mats = BTreeMap::new();
        for k in first.source.degrees() {
            mats.insert(k, self.mat(k).mul(&first.mat(k)));
        }
        ChainMap {
            source: first.source.clone(),
            target: self.target.clone(),
            mats,
        }
    }
}

/// `cone(f)^n = A^n ⊕ B^{n-1}`, `d(a, b) = (d a, f(a) - d b)`.
pub struct Cone {
    pub cone: Arc<FreeComplex>,
    /// `B` shifted: degree `n` holds `B^{n-1}` with differential `-d_B`.
    pub shifted_target: Arc<FreeComplex>,
    /// inclusion of the shifted target into the cone
    pub inclusion: ChainMap,
    /// projection of the cone onto the source
    pub projection: ChainMap,
}

pub fn mapping_cone(f: &ChainMap) -> Result<Cone> {
    f.validate()?;
    let a = f.source().clone();
    let b = f.target().clone();
    let min_deg = a.min_deg().min(b.min_deg() + 1);
    let max_deg = a.max_deg().max(b.max_deg() + 1);
    let dims: Vec<usize> = (min_deg..=max_deg)
        .map(|n| a.dim(n) + b.dim(n - 1))
        .collect();
    let diffs: Vec<RatMat> = (min_deg..max_deg)
        .map(|n| {
            let da = a.diff(n);
            let db = b.diff(n - 1);
            let fm = f.mat(n);
            let rows = a.dim(n + 1) + b.dim(n);
            let cols = a.dim(n) + b.dim(n - 1);
            let mut m = RatMat::zeros(rows, cols);
            for i in 0..da.rows() {
                for j in 0..da.cols() {
                    m[(i, j)] = da[(i, j)].clone();
                }
            }
            for i in 0..fm.rows() {
                for j in 0..fm.cols() {
                    m[(a.dim(n + 1) + i, j)] = fm[(i, j)].clone();
                }
            }
            for i in 0..db.rows() {
                for j in 0..db.cols() {
                    m[(a.dim(n + 1) + i, a.dim(n) + j)] = -db[(i, j)].clone();
                }
            }
            m
        })
        .collect();
    let exact = match (a.exact_below(), b.exact_below()) {
        (None, None) => None,
        (Some(x), None) => Some(x),
        (None, Some(y)) => Some(y + 1),
        (Some(x), Some(y)) => Some(x.min(y + 1)),
    };
    let cone = Arc::new(FreeComplex::new(a.coeff(), min_deg, dims, diffs)?.with_exact_below(exact));
    let sh_dims: Vec<usize> = (b.min_deg() + 1..=b.max_deg() + 1)
        .map(|n| b.dim(n - 1))
        .collect();
    let sh_diffs: Vec<RatMat> = (b.min_deg() + 1..b.max_deg() + 1)
        .map(|n| b.diff(n - 1).neg())
        .collect();
    let shifted = Arc::new(
        FreeComplex::new(b.coeff(), b.min_deg() + 1, sh_dims, sh_diffs)?
            .with_exact_below(b.exact_below().map(|x| x + 1)),
    );
    let mut incl_mats = BTreeMap::new();
    for n in shifted.degrees() {
        let mut m = RatMat::zeros(cone.dim(n), shifted.dim(n));
        for j in 0..shifted.dim(n) {
            m[(a.dim(n) + j, j)] = Rat::one();
        }
        incl_mats.insert(n, m);
    }
    let inclusion = ChainMap::new(shifted.clone(), cone.clone(), incl_mats)?;
    let mut proj_mats = BTreeMap::new();
    for n in cone.degrees() {
        let mut m = RatMat::zeros(a.dim(n), cone.dim(n));
        for j in 0..a.dim(n) {
            m[(j, j)] = Rat::one();
        }
        proj_mats.insert(n, m);
    }
    let projection = ChainMap::new(cone.clone(), a.clone(), proj_mats)?;
    Ok(Cone {
        cone,
        shifted_target: shifted,
        inclusion,
        projection,
    })
}

#[derive(Clone, Copy, Debug)]
pub enum TruncateMode {
    /// `σ_{≥p}`: kill degrees below `p`.
    AtOrAbove(i64),
    /// `σ_{<p}`: kill degrees at or above `p`.
    Below(i64),
}

/// Stupid truncation: degrees outside the window become zero, differentials
/// restrict.
pub fn truncate(c: &FreeComplex, mode: TruncateMode) -> FreeComplex {
    let (lo, hi) = match mode {
        TruncateMode::AtOrAbove(p) => (p.max(c.min_deg()), c.max_deg()),
        TruncateMode::Below(p) => (c.min_deg(), (p - 1).min(c.max_deg())),
    };
    if lo > hi {
        return FreeComplex::zero(c.coeff()).with_exact_below(c.exact_below());
    }
    let dims: Vec<usize> = (lo..=hi).map(|k| c.dim(k)).collect();
    let diffs: Vec<RatMat> = (lo..hi).map(|k| c.diff(k)).collect();
    FreeComplex::new(c.coeff(), lo, dims, diffs)
        .expect("truncation")
        .with_exact_below(c.exact_below())
}

/// Decreasing filtration by subcomplexes, each given by per-degree spanning
/// matrices. `F^r` for `r >= depth` is zero; `F^0` must be the whole complex.
#[derive(Clone, Debug)]
pub struct Filtration {
    levels: Vec<BTreeMap<i64, RatMat>>,
}

impl Filtration {
    pub fn new(levels: Vec<BTreeMap<i64, RatMat>>) -> Self {
        Filtration { levels }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Spanning matrix of `F^r` in degree `k`.
    pub fn span(&self, c: &FreeComplex, r: usize, k: i64) -> RatMat {
        if r >= self.levels.len() {
            return RatMat::zeros(c.dim(k), 0);
        }
        self.levels[r]
            .get(&k)
            .cloned()
            .unwrap_or_else(|| RatMat::zeros(c.dim(k), 0))
    }

    /// Filtration bête by total degree: `F^p` keeps degrees `>= p`.
    pub fn bete(c: &FreeComplex) -> Filtration {
        let mut levels = Vec::new();
        let top = c.max_deg().max(0);
        for p in 0..=top + 1 {
            let mut spans = BTreeMap::new();
            for k in c.degrees() {
                if k >= p && c.dim(k) > 0 {
                    spans.insert(k, RatMat::identity(c.dim(k)));
                }
            }
            levels.push(spans);
        }
        Filtration { levels }
    }

    /// The constant filtration `F^r = C` for `r <= depth`.
    pub fn full(c: &FreeComplex, depth: usize) -> Filtration {
        let mut levels = Vec::new();
        for _ in 0..=depth {
            let mut spans = BTreeMap::new();
            for k in c.degrees() {
                if c.dim(k) > 0 {
                    spans.insert(k, RatMat::identity(c.dim(k)));
                }
            }
            levels.push(spans);
        }
        Filtration { levels }
    }

    /// Decreasing, differential-stable, with `F^0` the whole complex.
    pub fn validate(&self, c: &FreeComplex) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::InvalidFiltration("no levels".into()));
        }
        for k in c.degrees() {
            let f0 = self.span(c, 0, k);
            if f0.rank() != c.dim(k) {
                return Err(Error::InvalidFiltration(format!(
                    "F^0 is not the whole complex at degree {k}"
                )));
            }
        }
        for r in 0..self.levels.len() {
            for k in c.degrees() {
                let fr = self.span(c, r, k);
                let next = self.span(c, r + 1, k);
                for j in 0..next.cols() {
                    if !fr.col_space_contains(&next.col_vec(j)) {
                        return Err(Error::InvalidFiltration(format!(
                            "F^{} not contained in F^{r} at degree {k}",
                            r + 1
                        )));
                    }
                }
                let image = c.diff(k).mul(&fr);
                let fr_next = self.span(c, r, k + 1);
                for j in 0..image.cols() {
                    let col = image.col_vec(j);
                    if col.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    if !fr_next.col_space_contains(&col) {
                        return Err(Error::InvalidFiltration(format!(
                            "F^{r} not differential-stable at degree {k} (column {j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Sub- and quotient complexes of a filtration level, with the inclusion and
/// projection chain maps realizing `0 → F^r → C → C/F^r → 0`.
pub struct FiltrationPieces {
    pub sub: Arc<FreeComplex>,
    pub inclusion: ChainMap,
    pub quotient: Arc<FreeComplex>,
    pub projection: ChainMap,
}

pub fn filtration_pieces(
    c: &Arc<FreeComplex>,
    filtration: &Filtration,
    r: usize,
) -> Result<FiltrationPieces> {
    let mut bases = BTreeMap::new();
    let mut complements = BTreeMap::new();
    let mut inverses = BTreeMap::new();
    for k in c.degrees() {
        let span = filtration.span(c, r, k);
        let piv = span.pivot_columns();
        let basis = span.select_cols(&piv);
        let full = basis.hcat(&RatMat::identity(c.dim(k)));
        let piv_full = full.pivot_columns();
        let extra: Vec<usize> = piv_full
            .iter()
            .copied()
            .filter(|&j| j >= basis.cols())
            .collect();
        let complement = full.select_cols(&extra);
        let change = basis.hcat(&complement);
        let inv = if c.dim(k) > 0 {
            change.inverse().ok_or_else(|| {
                Error::InvalidFiltration(format!("basis extension failed at degree {k}"))
            })?
        } else {
            RatMat::zeros(0, 0)
        };
        bases.insert(k, basis);
        complements.insert(k, complement);
        inverses.insert(k, inv);
    }
    let min_deg = c.min_deg();
    let max_deg = c.max_deg();
    let sub_dims: Vec<usize> = (min_deg..=max_deg).map(|k| bases[&k].cols()).collect();
    let mut sub_diffs = Vec::new();
    for k in min_deg..max_deg {
        let image = c.diff(k).mul(&bases[&k]);
        let x = bases[&(k + 1)].solve(&image).ok_or_else(|| {
            Error::InvalidFiltration(format!("F^{r} is not differential-stable at degree {k}"))
        })?;
        sub_diffs.push(x);
    }
    let sub = Arc::new(
        FreeComplex::new(CoeffRing::Rationals, min_deg, sub_dims, sub_diffs)?
            .with_exact_below(c.exact_below()),
    );
    let mut incl_mats = BTreeMap::new();
    for k in c.degrees() {
        incl_mats.insert(k, bases[&k].clone());
    }
    let inclusion = ChainMap::new(sub.clone(), c.clone(), incl_mats)?;
    let quot_dims: Vec<usize> = (min_deg..=max_deg)
        .map(|k| complements[&k].cols())
        .collect();
    let proj_of = |k: i64| -> RatMat {
        let s = bases[&k].cols();
        let n = c.dim(k);
        inverses[&k].submatrix(s..n, 0..n)
    };
    let mut quot_diffs = Vec::new();
    for k in min_deg..max_deg {
        let dq = proj_of(k + 1).mul(&c.diff(k)).mul(&complements[&k]);
        quot_diffs.push(dq);
    }
    let quotient = Arc::new(
        FreeComplex::new(CoeffRing::Rationals, min_deg, quot_dims, quot_diffs)?
            .with_exact_below(c.exact_below()),
    );
    let mut proj_mats = BTreeMap::new();
    for k in c.degrees() {
        proj_mats.insert(k, proj_of(k));
    }
    let projection = ChainMap::new(c.clone(), quotient.clone(), proj_mats)?;
    Ok(FiltrationPieces {
        sub,
        inclusion,
        quotient,
        projection,
    })
}

/// One cohomology group with explicit generator cocycles.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub degree: i64,
    /// Free rank over `Z`, dimension over `Q`.
    pub free_rank: usize,
    /// Invariant factors `d_1 | d_2 | ...`, each > 1 (empty over `Q`).
    pub torsion: Vec<Int>,
    /// Generator cocycles: torsion generators first, then free/basis ones.
    pub generators: Vec<Vec<Rat>>,
    pub guaranteed: bool,
}

impl CohomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Class-coordinate data for one degree of an integral complex.
#[derive(Clone, Debug)]
pub struct IntClassifier {
    /// rows extracting kernel coordinates (κ x n)
    kernel_coord_rows: RatMat,
    /// kernel basis as columns (n x κ)
    pub kernel_basis: RatMat,
    ux: RatMat,
    ux_inv: RatMat,
    /// invariant factors of the coboundary presentation, length κ
    /// (1 = collapsed summand, 0 = free summand, d > 1 = torsion)
    pub divisors: Vec<Int>,
}

impl IntClassifier {
    pub fn kernel_dim(&self) -> usize {
        self.divisors.len()
    }

    pub fn kernel_coords(&self, x: &[Rat]) -> Vec<Rat> {
        self.kernel_coord_rows.mul_vec(x)
    }

    /// Raw summand coordinates `z`; the class is `z_i mod divisors[i]`.
    pub fn raw_coords(&self, x: &[Rat]) -> Vec<Rat> {
        self.ux.mul_vec(&self.kernel_coords(x))
    }

    /// A cocycle representing given raw coordinates.
    pub fn representative(&self, z: &[Rat]) -> Vec<Rat> {
        self.kernel_basis.mul_vec(&self.ux_inv.mul_vec(z))
    }

    pub fn torsion_indices(&self) -> Vec<usize> {
        (0..self.divisors.len())
            .filter(|&i| !self.divisors[i].is_zero() && !self.divisors[i].is_one())
            .collect()
    }

    pub fn free_indices(&self) -> Vec<usize> {
        (0..self.divisors.len())
            .filter(|&i| self.divisors[i].is_zero())
            .collect()
    }

    pub fn is_coboundary(&self, x: &[Rat]) -> bool {
        let z = self.raw_coords(x);
        self.coords_are_zero(&z)
    }

    pub fn coords_are_zero(&self, z: &[Rat]) -> bool {
        for (i, zi) in z.iter().enumerate() {
            let d = &self.divisors[i];
            if d.is_one() {
                continue;
            }
            if d.is_zero() {
                if !zi.is_zero() {
                    return false;
                }
            } else {
                if !zi.is_integer() {
                    return false;
                }
                if !(zi.to_integer() % d).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Class-coordinate data for one degree of a rational complex.
#[derive(Clone, Debug)]
pub struct RatClassifier {
    kernel_coord_rows: RatMat,
    pub kernel_basis: RatMat,
    /// projection to quotient coordinates (h x κ)
    proj: RatMat,
    /// generator cocycles as columns (n x h)
    pub basis_cocycles: RatMat,
}

impl RatClassifier {
    pub fn dim(&self) -> usize {
        self.proj.rows()
    }

    pub fn kernel_coords(&self, x: &[Rat]) -> Vec<Rat> {
        self.kernel_coord_rows.mul_vec(x)
    }

    pub fn class_coords(&self, x: &[Rat]) -> Vec<Rat> {
        self.proj.mul_vec(&self.kernel_coords(x))
    }

    pub fn is_coboundary(&self, x: &[Rat]) -> bool {
        self.class_coords(x).iter().all(|c| c.is_zero())
    }

    pub fn representative(&self, coords: &[Rat]) -> Vec<Rat> {
        self.basis_cocycles.mul_vec(coords)
    }
}

#[derive(Clone, Debug)]
pub enum Classifier {
    Int(IntClassifier),
    Rat(RatClassifier),
}

/// Graded cohomology of a complex plus per-degree classifiers.
pub struct ComplexCohomology {
    pub groups: Vec<CohomologyGroup>,
    pub classifiers: BTreeMap<i64, Classifier>,
}

impl ComplexCohomology {
    pub fn group(&self, k: i64) -> Option<&CohomologyGroup> {
        self.groups.iter().find(|g| g.degree == k)
    }

    pub fn int_classifier(&self, k: i64) -> Option<&IntClassifier> {
        match self.classifiers.get(&k) {
            Some(Classifier::Int(c)) => Some(c),
            _ => None,
        }
    }

    pub fn rat_classifier(&self, k: i64) -> Option<&RatClassifier> {
        match self.classifiers.get(&k) {
            Some(Classifier::Rat(c)) => Some(c),
            _ => None,
        }
    }
}

fn int_classifier_for_degree(c: &FreeComplex, k: i64) -> Result<IntClassifier> {
    let n = c.dim(k);
    let d_out = c
        .diff(k)
        .to_int()
        .ok_or_else(|| Error::CoefficientMismatch("non-integral differential".into()))?;
    let dec = snf::smith_with(
        &d_out,
        SnfOptions {
            want_v: true,
            want_v_inv: true,
            ..Default::default()
        },
    );
    let v = dec.v.unwrap().to_rat();
    let v_inv = dec.v_inv.unwrap().to_rat();
    let rank = dec.rank;
    let kappa = n - rank;
    let kernel_coord_rows = v_inv.submatrix(rank..n, 0..n);
    let kernel_basis = v.submatrix(0..n, rank..n);
    debug_assert!(c.diff(k).mul(&kernel_basis).is_zero_matrix());
    let d_in = c.diff(k - 1);
    let coords = kernel_coord_rows.mul(&d_in);
    // the image lies in the kernel, so the non-kernel coordinates must vanish
    debug_assert!(v_inv.submatrix(0..rank, 0..n).mul(&d_in).is_zero_matrix());
    let x = coords
        .to_int()
        .ok_or_else(|| Error::Internal("non-integral kernel coordinates".into()))?;
    let xdec = snf::smith_with(
        &x,
        SnfOptions {
            want_u: true,
            want_u_inv: true,
            ..Default::default()
        },
    );
    let mut divisors = vec![Int::zero(); kappa];
    for (i, d) in xdec.diag.iter().enumerate() {
        divisors[i] = d.clone();
    }
    Ok(IntClassifier {
        kernel_coord_rows,
        kernel_basis,
        ux: xdec.u.unwrap().to_rat(),
        ux_inv: xdec.u_inv.unwrap().to_rat(),
        divisors,
    })
}

fn rat_classifier_for_degree(c: &FreeComplex, k: i64) -> RatClassifier {
    let n = c.dim(k);
    let d_out = c.diff(k);
    let kernel_basis = d_out.kernel_basis();
    let kappa = kernel_basis.cols();
    // the rref kernel basis is the identity on its free-variable rows
    let mut m = d_out.clone();
    let pivots = m.rref_in_place();
    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let mut kernel_coord_rows = RatMat::zeros(kappa, n);
    for (i, &fc) in free.iter().enumerate() {
        kernel_coord_rows[(i, fc)] = Rat::one();
    }
    debug_assert_eq!(
        kernel_coord_rows.mul(&kernel_basis),
        RatMat::identity(kappa)
    );
    let image_coords = kernel_coord_rows.mul(&c.diff(k - 1));
    let proj = image_coords.transpose().kernel_basis().transpose();
    let h = proj.rows();
    let basis_cocycles = if h > 0 {
        let sol = proj.solve(&RatMat::identity(h)).expect("quotient basis");
        kernel_basis.mul(&sol)
    } else {
        RatMat::zeros(n, 0)
    };
    RatClassifier {
        kernel_coord_rows,
        kernel_basis,
        proj,
        basis_cocycles,
    }
}

/// Cohomology in the given degree window (defaults to the whole range).
pub fn cohomology_window(c: &FreeComplex, window: Option<(i64, i64)>) -> Result<ComplexCohomology> {
    let (lo, hi) = window.unwrap_or((c.min_deg(), c.max_deg()));
    let mut groups = Vec::new();
    let mut classifiers = BTreeMap::new();
    for k in lo..=hi {
        let guaranteed = c.exact_below().is_none_or(|b| k < b);
        match c.coeff() {
            CoeffRing::Integers => {
                let cl = int_classifier_for_degree(c, k)?;
                let torsion_idx = cl.torsion_indices();
                let free_idx = cl.free_indices();
                let torsion: Vec<Int> = torsion_idx.iter().map(|&i| cl.divisors[i].abs()).collect();
                let mut generators = Vec::new();
                for &i in torsion_idx.iter().chain(free_idx.iter()) {
                    let mut z = vec![Rat::zero(); cl.kernel_dim()];
                    z[i] = Rat::one();
                    generators.push(cl.representative(&z));
                }
                groups.push(CohomologyGroup {
                    degree: k,
                    free_rank: free_idx.len(),
                    torsion,
                    generators,
                    guaranteed,
                });
                classifiers.insert(k, Classifier::Int(cl));
            }
            CoeffRing::Rationals => {
                let cl = rat_classifier_for_degree(c, k);
                let h = cl.dim();
                let generators = (0..h).map(|j| cl.basis_cocycles.col_vec(j)).collect();
                groups.push(CohomologyGroup {
                    degree: k,
                    free_rank: h,
                    torsion: vec![],
                    generators,
                    guaranteed,
                });
                classifiers.insert(k, Classifier::Rat(cl));
            }
        }
    }
    Ok(ComplexCohomology {
        groups,
        classifiers,
    })
}

pub fn cohomology(c: &FreeComplex) -> Result<ComplexCohomology> {
    cohomology_window(c, None)
}

/// Matrices of the induced map on cohomology, per degree, in the generator
/// bases computed by `cohomology`.
pub fn induced_map(
    f: &ChainMap,
    src_h: &ComplexCohomology,
    tgt_h: &ComplexCohomology,
) -> Result<BTreeMap<i64, RatMat>> {
    f.validate()?;
    let mut out = BTreeMap::new();
    for g in &src_h.groups {
        let k = g.degree;
        let Some(tg) = tgt_h.group(k) else { continue };
        let cols = g.generators.len();
        let rows = tg.generators.len();
        let mut m = RatMat::zeros(rows, cols);
        for (j, gen) in g.generators.iter().enumerate() {
            let image = f.apply(k, gen);
            let coords: Vec<Rat> = match &tgt_h.classifiers[&k] {
                Classifier::Int(cl) => {
                    let raw = cl.raw_coords(&image);
                    cl.torsion_indices()
                        .iter()
                        .chain(cl.free_indices().iter())
                        .map(|&i| raw[i].clone())
                        .collect()
                }
                Classifier::Rat(cl) => cl.class_coords(&image),
            };
            for (i, v) in coords.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        out.insert(k, m);
    }
    Ok(out)
}

/// Decide whether an induced matrix (torsion coordinates first) is an
/// isomorphism between the given groups.
pub fn is_cohomology_iso(m: &RatMat, src: &CohomologyGroup, tgt: &CohomologyGroup) -> bool {
    if src.free_rank != tgt.free_rank || src.torsion != tgt.torsion {
        return false;
    }
    let nt = tgt.torsion.len();
    let rows = nt + tgt.free_rank;
    if m.rows() != rows || m.cols() != src.torsion.len() + src.free_rank {
        return false;
    }
    if rows == 0 {
        return true;
    }
    let mut rel = RatMat::zeros(rows, nt);
    for (i, d) in tgt.torsion.iter().enumerate() {
        rel[(i, i)] = Rat::from(d.clone());
    }
    let gens = m.hcat(&rel);
    let Some(gens_int) = gens.to_int() else {
        return false;
    };
    for j in 0..rows {
        let mut e = vec![Int::zero(); rows];
        e[j] = Int::one();
        if snf::solve_int(&gens_int, &e).is_none() {
            return false;
        }
    }
    true
}

/// Structured report of a group as `Q^q ⊕ (Q/Z)^qz ⊕ (⊕ Z/d_i) ⊕ Z^z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedGroup {
    pub q_rank: usize,
    pub qz_rank: usize,
    pub torsion: Vec<Int>,
    pub z_rank: usize,
    /// Only set when at most one graded piece is present; extensions between
    /// pieces are reported, never resolved.
    pub extension_resolved: bool,
}

impl MixedGroup {
    pub fn new(q_rank: usize, qz_rank: usize, torsion: Vec<Int>, z_rank: usize) -> Self {
        let pieces = usize::from(q_rank > 0)
            + usize::from(qz_rank > 0)
            + usize::from(!torsion.is_empty())
            + usize::from(z_rank > 0);
        MixedGroup {
            q_rank,
            qz_rank,
            torsion,
            z_rank,
            extension_resolved: pieces <= 1,
        }
    }

    pub fn zero() -> Self {
        MixedGroup::new(0, 0, vec![], 0)
    }

    pub fn is_zero(&self) -> bool {
        self.q_rank == 0 && self.qz_rank == 0 && self.torsion.is_empty() && self.z_rank == 0
    }
}

/// Cohomology with rationals-mod-one coefficients of an integral complex,
/// assembled from the Bockstein sequence of `0 → Z → Q → Q/Z → 0`: a
/// divisible part of rank `dim H^k(Q)` and the torsion of `H^{k+1}(Z)`.
pub fn qz_cohomology(c: &FreeComplex) -> Result<Vec<(i64, MixedGroup)>> {
    if c.coeff() != CoeffRing::Integers {
        return Err(Error::CoefficientMismatch(
            "qz_cohomology needs an integral complex".into(),
        ));
    }
    let hz = cohomology(c)?;
    let hq = cohomology(&c.to_rational())?;
    let mut out = Vec::new();
    for k in c.min_deg()..=c.max_deg() {
        let qz_rank = hq.group(k).map_or(0, |g| g.free_rank);
        let torsion = hz.group(k + 1).map_or(vec![], |g| g.torsion.clone());
        out.push((k, MixedGroup::new(0, qz_rank, torsion, 0)));
    }
    Ok(out)
}

/// A subgroup of `Q^n` of the form (subspace) + (finitely generated part),
/// the shape every kernel and image in the mixed long exact sequences takes.
#[derive(Clone, Debug)]
pub struct MixedSubgroup {
    pub ambient_dim: usize,
    /// columns spanning the divisible part
    pub subspace: RatMat,
    /// columns generating the discrete part over `Z`
    pub lattice: RatMat,
}

impl MixedSubgroup {
    pub fn new(ambient_dim: usize, subspace: RatMat, lattice: RatMat) -> Self {
        assert_eq!(subspace.rows(), ambient_dim);
        assert_eq!(lattice.rows(), ambient_dim);
        MixedSubgroup {
            ambient_dim,
            subspace,
            lattice,
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        MixedSubgroup::new(
            ambient_dim,
            RatMat::zeros(ambient_dim, 0),
            RatMat::zeros(ambient_dim, 0),
        )
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        // v = subspace·s + lattice·z with z integral; scale the lattice
        // columns to integers and absorb the scale into the target
        let mut all: Vec<Rat> = Vec::new();
        for j in 0..self.lattice.cols() {
            all.extend(self.lattice.col_vec(j));
        }
        all.push(Rat::one());
        let (_, scale) = clear_denominators(&all);
        let lat_int = self
            .lattice
            .map(|x| x.clone() * Rat::from(scale.clone()))
            .to_int()
            .expect("scaled lattice");
        let target: Vec<Rat> = v
            .iter()
            .map(|x| x.clone() * Rat::from(scale.clone()))
            .collect();
        snf::mixed_solve(&lat_int, &self.subspace, &target).is_some()
    }

    pub fn includes(&self, other: &MixedSubgroup) -> bool {
        for j in 0..other.subspace.cols() {
            if !self.subspace.col_space_contains(&other.subspace.col_vec(j)) {
                return false;
            }
        }
        for j in 0..other.lattice.cols() {
            if !self.contains(&other.lattice.col_vec(j)) {
                return false;
            }
        }
        true
    }

    pub fn equals(&self, other: &MixedSubgroup) -> bool {
        self.includes(other) && other.includes(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    fn z_complex(dims: &[usize], mats: &[&[&[i64]]]) -> Arc<FreeComplex> {
        let diffs: Vec<RatMat> = mats
            .iter()
            .map(|rows| {
                RatMat::from_rows(
                    rows.iter()
                        .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
                        .collect(),
                )
            })
            .collect();
        Arc::new(FreeComplex::new(CoeffRing::Integers, 0, dims.to_vec(), diffs).unwrap())
    }

    #[test]
    fn rejects_non_complex() {
        let d0 = RatMat::from_rows(vec![vec![rat(1, 1)]]);
        let d1 = RatMat::from_rows(vec![vec![rat(1, 1)]]);
        assert!(FreeComplex::new(CoeffRing::Integers, 0, vec![1, 1, 1], vec![d0, d1]).is_err());
    }

    #[test]
    fn zero_differential_cohomology() {
        let c = z_complex(&[2, 3], &[&[&[0, 0], &[0, 0], &[0, 0]]]);
        let h = cohomology(&c).unwrap();
        assert_eq!(h.group(0).unwrap().free_rank, 2);
        assert_eq!(h.group(1).unwrap().free_rank, 3);
        assert!(h.group(0).unwrap().torsion.is_empty());
    }

    #[test]
    fn torsion_and_generators() {
        // 0 -> Z --2--> Z -> 0: H^0 = 0, H^1 = Z/2
        let c = z_complex(&[1, 1], &[&[&[2]]]);
        let h = cohomology(&c).unwrap();
        assert_eq!(h.group(0).unwrap().free_rank, 0);
        let h1 = h.group(1).unwrap();
        assert_eq!(h1.free_rank, 0);
        assert_eq!(h1.torsion, vec![int(2)]);
        assert_eq!(h1.generators.len(), 1);
        let cl = h.int_classifier(1).unwrap();
        assert!(!cl.is_coboundary(&h1.generators[0]));
        let double: Vec<Rat> = h1.generators[0]
            .iter()
            .map(|x| x.clone() * rat(2, 1))
            .collect();
        assert!(cl.is_coboundary(&double));
    }

    #[test]
    fn rational_forgets_torsion() {
        let c = z_complex(&[1, 1], &[&[&[2]]]);
        let h = cohomology(&c.to_rational()).unwrap();
        assert_eq!(h.group(0).unwrap().free_rank, 0);
        assert_eq!(h.group(1).unwrap().free_rank, 0);
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = z_complex(&[2, 2], &[&[&[0, 0], &[0, 0]]]);
        let f = ChainMap::identity(c.clone());
        let cone = mapping_cone(&f).unwrap();
        let h = cohomology(&cone.cone).unwrap();
        for g in &h.groups {
            assert!(g.is_zero(), "degree {}", g.degree);
        }
    }

    #[test]
    fn cone_of_zero_shifts() {
        // cone(0 -> B) has H^k = H^{k-1}(B)
        let b = z_complex(&[1, 1], &[&[&[2]]]);
        let zero = Arc::new(FreeComplex::zero(CoeffRing::Integers));
        let f = ChainMap::zero(zero, b.clone());
        let cone = mapping_cone(&f).unwrap();
        let h = cohomology(&cone.cone).unwrap();
        assert_eq!(h.group(2).unwrap().torsion, vec![int(2)]);
    }

    #[test]
    fn cone_of_multiplication_by_two() {
        let a = z_complex(&[1], &[]);
        let b = z_complex(&[1], &[]);
        let f = ChainMap::from_fn(a, b, |_, _, _| rat(2, 1));
        let cone = mapping_cone(&f).unwrap();
        let h = cohomology(&cone.cone).unwrap();
        assert!(h.group(0).unwrap().is_zero());
        assert_eq!(h.group(1).unwrap().torsion, vec![int(2)]);
        assert_eq!(h.group(1).unwrap().free_rank, 0);
    }

    #[test]
    fn cone_rejects_non_chain_map() {
        let a = z_complex(&[1, 1], &[&[&[1]]]);
        let b = z_complex(&[1, 1], &[&[&[2]]]);
        let mut mats = BTreeMap::new();
        mats.insert(0, RatMat::from_rows(vec![vec![rat(1, 1)]]));
        mats.insert(1, RatMat::from_rows(vec![vec![rat(1, 1)]]));
        assert!(ChainMap::new(a, b, mats).is_err());
    }

    #[test]
    fn truncations() {
        let c = z_complex(&[1, 1, 1], &[&[&[0]], &[&[3]]]);
        let top = truncate(&c, TruncateMode::AtOrAbove(0));
        assert_eq!(top.dim(0), 1);
        let above = truncate(&c, TruncateMode::AtOrAbove(2));
        assert_eq!(above.dim(1), 0);
        assert_eq!(above.dim(2), 1);
        let below = truncate(&above, TruncateMode::Below(2));
        assert_eq!(below.dim(2), 0);
        let h = cohomology(&truncate(&c, TruncateMode::Below(2))).unwrap();
        assert_eq!(h.group(1).unwrap().free_rank, 1);
    }

    #[test]
    fn bete_filtration_pieces() {
        let c = z_complex(&[1, 1, 1], &[&[&[0]], &[&[2]]]);
        let cq = Arc::new(c.to_rational());
        let f = Filtration::bete(&cq);
        f.validate(&cq).unwrap();
        let p0 = filtration_pieces(&cq, &f, 0).unwrap();
        for k in 0..=2 {
            assert_eq!(p0.sub.dim(k), cq.dim(k));
            assert_eq!(p0.quotient.dim(k), 0);
        }
        let p1 = filtration_pieces(&cq, &f, 1).unwrap();
        let t1 = truncate(&cq, TruncateMode::AtOrAbove(1));
        for k in 0..=2 {
            assert_eq!(p1.sub.dim(k), t1.dim(k));
        }
        assert_eq!(p1.quotient.dim(0), 1);
        assert_eq!(p1.quotient.dim(1), 0);
    }

    #[test]
    fn induced_identity_and_zero() {
        let c = z_complex(&[2, 1], &[&[&[0, 0]]]);
        let h = cohomology(&c).unwrap();
        let ident = ChainMap::identity(c.clone());
        let m = induced_map(&ident, &h, &h).unwrap();
        assert_eq!(m[&0], RatMat::identity(2));
        let z = ChainMap::zero(c.clone(), c.clone());
        let mz = induced_map(&z, &h, &h).unwrap();
        assert!(mz[&0].is_zero_matrix());
        assert!(is_cohomology_iso(
            &m[&0],
            h.group(0).unwrap(),
            h.group(0).unwrap()
        ));
        assert!(!is_cohomology_iso(
            &mz[&0],
            h.group(0).unwrap(),
            h.group(0).unwrap()
        ));
    }

    #[test]
    fn qz_of_small_complexes() {
        let acyclic = z_complex(&[1, 1], &[&[&[1]]]);
        let qz = qz_cohomology(&acyclic).unwrap();
        assert!(qz.iter().all(|(_, g)| g.is_zero()));
        let m2 = z_complex(&[1, 1], &[&[&[2]]]);
        let qz = qz_cohomology(&m2).unwrap();
        assert_eq!(qz[0].1, MixedGroup::new(0, 0, vec![int(2)], 0));
        let z = z_complex(&[1], &[]);
        let qz = qz_cohomology(&z).unwrap();
        assert_eq!(qz[0].1, MixedGroup::new(0, 1, vec![], 0));
    }

    /// Subgroup membership in a finitely generated group presented by
    /// generator images plus torsion relations.
    fn in_subgroup(cols: &[Vec<Rat>], relations: &[Int], target: &[Rat]) -> bool {
        let n = target.len();
        let mut gens = RatMat::zeros(n, cols.len() + relations.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                gens[(i, j)] = v.clone();
            }
        }
        for (j, d) in relations.iter().enumerate() {
            if j < n {
                gens[(j, cols.len() + j)] = Rat::from(d.clone());
            }
        }
        let gi = gens.to_int().unwrap();
        let ti: Vec<Int> = target.iter().map(|x| x.to_integer()).collect();
        crate::snf::solve_int(&gi, &ti).is_some()
    }

    #[test]
    fn cone_les_is_exact() {
        // six-term exactness around every degree for cones of scalar maps
        // on random complexes: image = kernel checked as subgroups
        let mut rng = crate::samples::rng(606);
        for trial in 0..10 {
            // random small complex via an elementary build
            let m = 2 + (trial % 3) as i64;
            let c = z_complex(&[2, 2, 1], &[&[&[0, 0], &[2, 0]], &[&[3, 0]]]);
            let scalar = Rat::from(Int::from(1 + (trial % 4) as i64));
            let f = ChainMap::from_fn(c.clone(), c.clone(), |_, i, j| {
                if i == j {
                    scalar.clone()
                } else {
                    Rat::zero()
                }
            });
            let cone = mapping_cone(&f).unwrap();
            let h_cone = cohomology(&cone.cone).unwrap();
            let h_a = cohomology(&c).unwrap();
            let h_b_sh = cohomology(&cone.shifted_target).unwrap();
            let _ = m;
            let _ = &mut rng;
            for k in cone.cone.min_deg()..=cone.cone.max_deg() {
                // node H^k(cone): im(ι: H^k(B[-1])) = ker(π: -> H^k(A))
                let (Some(_), Some(clc)) = (h_cone.group(k), h_cone.int_classifier(k)) else {
                    continue;
                };
                let mut img_cols = Vec::new();
                if let Some(gb) = h_b_sh.group(k) {
                    for g in &gb.generators {
                        let im = cone.inclusion.apply(k, g);
                        img_cols.push(clc.raw_coords(&im));
                    }
                }
                let rels: Vec<Int> = clc.divisors.clone();
                // kernel of π on cohomology: generators z with π(z) a coboundary
                // compare subgroups by mutual membership over a generating set
                let cla = h_a.int_classifier(k);
                let mut ker_cols = Vec::new();
                let nat = clc.kernel_dim();
                for i in 0..nat {
                    // generator i of H^k(cone), image under π
                    let mut z = vec![Rat::zero(); nat];
                    z[i] = Rat::one();
                    let rep = clc.representative(&z);
                    let projected = cone.projection.apply(k, &rep);
                    let dies = match cla {
                        Some(cl) => cl.is_coboundary(&projected),
                        None => projected.iter().all(|x| x.is_zero()),
                    };
                    if dies && !clc.coords_are_zero(&z) {
                        ker_cols.push(z);
                    }
                }
                // im ⊆ ker: each image class projects to a coboundary
                for c_img in &img_cols {
                    let rep = clc.representative(c_img);
                    let projected = cone.projection.apply(k, &rep);
                    let dies = match cla {
                        Some(cl) => cl.is_coboundary(&projected),
                        None => projected.iter().all(|x| x.is_zero()),
                    };
                    assert!(dies, "trial {trial} degree {k}: image not in kernel");
                }
                // ker ⊆ im: every kernel generator is an integral combination
                // of image classes modulo the relations
                for kz in &ker_cols {
                    assert!(
                        in_subgroup(&img_cols, &rels, kz),
                        "trial {trial} degree {k}: kernel class not hit"
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_unstable_filtration_with_witness() {
        // F^1 spanned by a vector whose differential leaves the span
        let c = z_complex(&[1, 1], &[&[&[1]]]);
        let cq = Arc::new(c.to_rational());
        let mut whole = BTreeMap::new();
        whole.insert(0, RatMat::identity(1));
        whole.insert(1, RatMat::identity(1));
        let mut f1 = BTreeMap::new();
        f1.insert(0, RatMat::identity(1)); // d maps this onto degree 1, not in F^1
        let f = Filtration::new(vec![whole, f1]);
        let err = f.validate(&cq).unwrap_err();
        assert!(err.to_string().contains("differential-stable"), "{err}");
        assert!(filtration_pieces(&cq, &f, 1).is_err());
    }

    #[test]
    fn qz_rejects_rational_input() {
        let c = z_complex(&[1, 1], &[&[&[2]]]);
        assert!(qz_cohomology(&c.to_rational()).is_err());
    }

    #[test]
    fn mixed_subgroup_membership() {
        // G = span{(1,0)} + Z·(0, 1/2) inside Q^2
        let g = MixedSubgroup::new(
            2,
            RatMat::from_rows(vec![vec![rat(1, 1)], vec![rat(0, 1)]]),
            RatMat::from_rows(vec![vec![rat(0, 1)], vec![rat(1, 2)]]),
        );
        assert!(g.contains(&[rat(7, 3), rat(3, 2)]));
        assert!(!g.contains(&[rat(0, 1), rat(1, 3)]));
        let smaller = MixedSubgroup::new(
            2,
            RatMat::zeros(2, 0),
            RatMat::from_rows(vec![vec![rat(2, 1)], vec![rat(1, 1)]]),
        );
        assert!(g.includes(&smaller));
        assert!(!smaller.includes(&g));
    }
}
