#![allow(dead_code, clippy::needless_range_loop)]
//! Shared oracles for the integration suites.
//!
//! Everything in here recomputes expected values through routes independent
//! of the implementation paths under test: the normalized bar complex for
//! group cohomology, elementary-piece random complexes with known
//! cohomology, and brute-force lattice-approximation cones (denominators
//! `1/N!` with stabilization checks) for the mixed-coefficient groups.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha12Rng;

use grpd_core::complexes::{
    cohomology_window, mapping_cone, truncate, ChainMap, CoeffRing, Filtration, FreeComplex,
    MixedGroup, TruncateMode,
};
use grpd_core::matrix::{IntMat, RatMat};
use grpd_core::{Int, Rat};

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(int(n), int(d))
}

/// Normalized bar complex of `Z/m` over `Z`: degree `n` has basis the
/// tuples of nonzero elements, with the standard group-cohomology
/// differential. Matrices are assembled directly from the bar formula,
/// independently of the nerve/double-complex path.
pub fn bar_complex(m: usize, top: usize) -> Arc<FreeComplex> {
    let words = |n: usize| -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (1..m).map(move |g| {
                        let mut w2 = w.clone();
                        w2.push(g);
                        w2
                    })
                })
                .collect();
        }
        out
    };
    let mut dims = Vec::new();
    let mut bases: Vec<Vec<Vec<usize>>> = Vec::new();
    for n in 0..=top {
        let b = words(n);
        dims.push(b.len());
        bases.push(b);
    }
    let index: Vec<BTreeMap<Vec<usize>, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
        .collect();
    let mut diffs = Vec::new();
    for n in 0..top {
        let mut mat = RatMat::zeros(dims[n + 1], dims[n]);
        // (δf)(g_1..g_{n+1}) = f(g_2..) + Σ (-1)^i f(.. g_i g_{i+1} ..)
        //                      + (-1)^{n+1} f(g_1..g_n), normalized
        for (row, w) in bases[n + 1].iter().enumerate() {
            let mut add = |word: Vec<usize>, sign: i64| {
                if word.contains(&0) {
                    return;
                }
                let col = index[n][&word];
                mat[(row, col)] = mat[(row, col)].clone() + rat(sign, 1);
            };
            add(w[1..].to_vec(), 1);
            for i in 1..=n {
                let mut word: Vec<usize> = w[..i - 1].to_vec();
                word.push((w[i - 1] + w[i]) % m);
                word.extend_from_slice(&w[i + 1..]);
                add(word, if i % 2 == 0 { 1 } else { -1 });
            }
            add(w[..n].to_vec(), if (n + 1) % 2 == 0 { 1 } else { -1 });
        }
        diffs.push(mat);
    }
    Arc::new(FreeComplex::new(CoeffRing::Integers, 0, dims, diffs).unwrap())
}

/// Abstract description of one cohomology group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupShape {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl GroupShape {
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Self {
        GroupShape {
            free_rank,
            torsion: torsion.into_iter().map(int).collect(),
        }
    }
}

/// A random integral complex with known cohomology: a direct sum of
/// elementary pieces (`Z` in one degree; `Z --d--> Z` contributing `Z/d`),
/// conjugated by random unimodular basis changes in every degree.
pub fn random_known_complex(
    rng: &mut ChaCha12Rng,
    max_deg: usize,
    total_dim: usize,
) -> (Arc<FreeComplex>, Vec<GroupShape>) {
    let mut dims = vec![0usize; max_deg + 1];
    let mut expected = vec![GroupShape::new(0, vec![]); max_deg + 1];
    // entries (degree, kind): kind 0 = free summand, d >= 1 = Z --d--> Z
    let mut cells: Vec<(usize, i64)> = Vec::new();
    let mut budget = total_dim;
    while budget > 0 {
        let deg = rng.random_range(0..=max_deg);
        if budget >= 2 && deg < max_deg && rng.random_bool(0.6) {
            let d = rng.random_range(1..=4);
            cells.push((deg, d));
            dims[deg] += 1;
            dims[deg + 1] += 1;
            if d > 1 {
                expected[deg + 1].torsion.push(int(d));
            }
            budget -= 2;
        } else {
            cells.push((deg, 0));
            dims[deg] += 1;
            expected[deg].free_rank += 1;
            budget -= 1;
        }
    }
    for e in &mut expected {
        e.torsion.sort();
    }
    // block differentials
    let mut diffs: Vec<RatMat> = (0..max_deg)
        .map(|k| RatMat::zeros(dims[k + 1], dims[k]))
        .collect();
    let mut filled = vec![0usize; max_deg + 1];
    for (deg, kind) in &cells {
        let row_src = filled[*deg];
        filled[*deg] += 1;
        if *kind >= 1 {
            let row_tgt = filled[*deg + 1];
            filled[*deg + 1] += 1;
            diffs[*deg][(row_tgt, row_src)] = rat(*kind, 1);
        }
    }
    // conjugate by random unimodular matrices per degree
    let unimodular = |n: usize, rng: &mut ChaCha12Rng| -> (RatMat, RatMat) {
        let mut u = IntMat::identity(n);
        for _ in 0..2 * n {
            let i = rng.random_range(0..n.max(1));
            let j = rng.random_range(0..n.max(1));
            if i == j || n < 2 {
                continue;
            }
            let c = int(rng.random_range(-2..=2));
            for col in 0..n {
                let t = c.clone() * u[(j, col)].clone();
                u[(i, col)] += t;
            }
        }
        let ur = u.to_rat();
        let inv = ur.inverse().unwrap();
        (ur, inv)
    };
    let changes: Vec<(RatMat, RatMat)> = (0..=max_deg).map(|k| unimodular(dims[k], rng)).collect();
    let conj_diffs: Vec<RatMat> = (0..max_deg)
        .map(|k| changes[k + 1].0.mul(&diffs[k]).mul(&changes[k].1))
        .collect();
    let c = FreeComplex::new(CoeffRing::Integers, 0, dims, conj_diffs).unwrap();
    (Arc::new(c), expected)
}

/// A random decreasing, differential-stable filtration of a rational
/// complex: `F^r = span(S_r ∪ d S_r)` for nested random basis subsets.
pub fn random_filtration(rng: &mut ChaCha12Rng, c: &FreeComplex, depth: usize) -> Filtration {
    let mut levels = Vec::new();
    // F^0 = whole
    let mut whole = BTreeMap::new();
    for k in c.degrees() {
        if c.dim(k) > 0 {
            whole.insert(k, RatMat::identity(c.dim(k)));
        }
    }
    levels.push(whole);
    let mut keep: Vec<Vec<bool>> = c
        .degrees()
        .map(|k| (0..c.dim(k)).map(|_| rng.random_bool(0.5)).collect())
        .collect();
    for _ in 1..=depth {
        let mut spans = BTreeMap::new();
        for k in c.degrees() {
            let idx = (k - c.min_deg()) as usize;
            let cols: Vec<usize> = (0..c.dim(k)).filter(|&j| keep[idx][j]).collect();
            let mut vecs: Vec<Vec<Rat>> = cols
                .iter()
                .map(|&j| {
                    let mut v = vec![Rat::zero(); c.dim(k)];
                    v[j] = Rat::one();
                    v
                })
                .collect();
            // add d-images from one degree down to force stability
            if k > c.min_deg() {
                let below = (k - 1 - c.min_deg()) as usize;
                let d = c.diff(k - 1);
                for j in 0..c.dim(k - 1) {
                    if keep[below][j] {
                        vecs.push((0..c.dim(k)).map(|i| d[(i, j)].clone()).collect());
                    }
                }
            }
            let mut m = RatMat::zeros(c.dim(k), vecs.len());
            for (jj, v) in vecs.iter().enumerate() {
                for (i, x) in v.iter().enumerate() {
                    m[(i, jj)] = x.clone();
                }
            }
            spans.insert(k, m);
        }
        levels.push(spans);
        // shrink for the next level
        for row in keep.iter_mut() {
            for b in row.iter_mut() {
                if *b && rng.random_bool(0.4) {
                    *b = false;
                }
            }
        }
    }
    Filtration::new(levels)
}

/// `C ⊗ Q/Z` cohomology shape predicted by universal coefficients from a
/// known `H^*(C; Z)`: `(Q/Z)^{free_k} ⊕ torsion(H^{k+1})`.
pub fn uct_qz_prediction(expected: &[GroupShape], k: usize) -> MixedGroup {
    let qz = expected[k].free_rank;
    let torsion = if k + 1 < expected.len() {
        expected[k + 1].torsion.clone()
    } else {
        vec![]
    };
    MixedGroup::new(0, qz, torsion, 0)
}

/// The `Q/Z`-model at denominator `N`: `cone(×N : C → C)` shifted by one,
/// together with the reduction chain map from the `(1/N)`-lattice copy.
///
/// Degrees: `QN^j = C^{j+1} ⊕ C^j`, `d(a, b) = (-d a, N a - ... )` — built
/// as an honest free complex; its cohomology is `H^j(C; Z/N)`.
pub struct QzModel {
    pub complex: Arc<FreeComplex>,
    /// reduction of a `(1/N)`-lattice cochain (coordinates in the scaled
    /// basis) into the model
    pub reduce: ChainMap,
    pub n: Int,
}

pub fn qz_model(c: &Arc<FreeComplex>, n: &Int) -> QzModel {
    // lattice copy: same matrices, scaled basis
    let scaled = Arc::new(c.as_ref().clone());
    let mult = ChainMap::from_fn(c.clone(), scaled.clone(), |_, i, j| {
        if i == j {
            Rat::from(n.clone())
        } else {
            Rat::zero()
        }
    });
    let cone = mapping_cone(&mult).unwrap();
    // shift by one: degree j holds cone^{j+1}, differential negated
    let lo = cone.cone.min_deg() - 1;
    let hi = cone.cone.max_deg() - 1;
    let dims: Vec<usize> = (lo..=hi).map(|j| cone.cone.dim(j + 1)).collect();
    let diffs: Vec<RatMat> = (lo..hi).map(|j| cone.cone.diff(j + 1).neg()).collect();
    let shifted = Arc::new(FreeComplex::new(CoeffRing::Integers, lo, dims, diffs).unwrap());
    // reduction: x ∈ scaled^j ↦ (0, x) ∈ C^{j+1} ⊕ scaled^j
    let mut mats = BTreeMap::new();
    for j in scaled.degrees() {
        let rows = shifted.dim(j);
        let mut m = RatMat::zeros(rows, scaled.dim(j));
        let offset = c.dim(j + 1);
        for jj in 0..scaled.dim(j) {
            m[(offset + jj, jj)] = -Rat::one();
        }
        mats.insert(j, m);
    }
    // sign: the shifted cone differential is negated; mapping x to -(0, x)
    // makes the reduction a chain map
    let reduce = ChainMap::new(scaled, shifted.clone(), mats).expect("reduction chain map");
    QzModel {
        complex: shifted,
        reduce,
        n: n.clone(),
    }
}

/// Integer basis of `subspace ∩ Z^n` (the subspace given by rational
/// spanning columns).
pub fn lattice_in_subspace(span: &RatMat) -> IntMat {
    let n = span.rows();
    if span.cols() == 0 {
        return IntMat::zeros(n, 0);
    }
    // x ∈ span ⟺ P x = 0 where P spans the left annihilator
    let p = span.transpose().kernel_basis().transpose();
    if p.rows() == 0 {
        return IntMat::identity(n);
    }
    let mut rows = Vec::new();
    for i in 0..p.rows() {
        let row: Vec<Rat> = (0..n).map(|j| p[(i, j)].clone()).collect();
        let (ints, _) = grpd_core::matrix::clear_denominators(&row);
        rows.push(ints);
    }
    grpd_core::snf::kernel_int(&IntMat::from_rows(rows))
}

/// One graded approximation: free rank and sorted nontrivial divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxGroup {
    pub free_rank: usize,
    pub divisors: Vec<Int>,
}

fn approx_cohomology(c: &FreeComplex, k: i64) -> ApproxGroup {
    let h = cohomology_window(c, Some((k, k))).unwrap();
    let g = h.group(k).unwrap();
    ApproxGroup {
        free_rank: g.free_rank,
        divisors: g.torsion.clone(),
    }
}

/// Approximate `Ĥ = H^k(cone(σ_{≥k}F^r Ω → C(Q/Z)))` with forms replaced by
/// the `(1/N)`-lattice inside `F^r`.
pub fn approx_diffchar(
    zc: &Arc<FreeComplex>,
    filtration: &Filtration,
    k: i64,
    r: usize,
    n: &Int,
) -> ApproxGroup {
    let qz = qz_model(zc, n);
    // F^r ∩ (1/N) lattice, in scaled coordinates the same subspace
    let mut dims = Vec::new();
    let mut bases = BTreeMap::new();
    let lo = zc.min_deg();
    let hi = zc.max_deg();
    for deg in lo..=hi {
        let span = filtration.span(&zc.to_rational(), r, deg);
        let basis = lattice_in_subspace(&span);
        dims.push(basis.cols());
        bases.insert(deg, basis);
    }
    let mut diffs = Vec::new();
    for deg in lo..hi {
        let image = zc.diff(deg).mul(&bases[&deg].to_rat());
        let x = bases[&(deg + 1)]
            .to_rat()
            .solve(&image)
            .expect("filtration stable on lattice");
        diffs.push(x);
    }
    let sub = FreeComplex::new(CoeffRing::Integers, lo, dims, diffs).unwrap();
    let sub = Arc::new(truncate(&sub, TruncateMode::AtOrAbove(k)));
    // map into the qz model: include into the scaled copy, then reduce
    let mut mats = BTreeMap::new();
    for deg in sub.degrees() {
        let incl = bases[&deg].to_rat();
        let incl_view = incl.submatrix(0..incl.rows(), 0..sub.dim(deg).min(incl.cols()));
        mats.insert(deg, qz.reduce.mat(deg).mul(&incl_view));
    }
    let f = ChainMap::new(sub, qz.complex.clone(), mats).expect("approx reduction");
    let cone = mapping_cone(&f).unwrap();
    approx_cohomology(&cone.cone, k)
}

/// Approximate `MH = H^k(cone(C(Λ) ⊕ F^r Ω → C(C)))` at denominator `N`:
/// both the lattice copy of the forms and the ambient `C(1/N)` are free.
pub fn approx_mh(
    zc: &Arc<FreeComplex>,
    filtration: &Filtration,
    k: i64,
    r: usize,
    n: &Int,
) -> ApproxGroup {
    let scaled = Arc::new(zc.as_ref().clone());
    let lo = zc.min_deg();
    let hi = zc.max_deg();
    let mut bases = BTreeMap::new();
    let mut dims = Vec::new();
    for deg in lo..=hi {
        let span = filtration.span(&zc.to_rational(), r, deg);
        let basis = lattice_in_subspace(&span);
        dims.push(basis.cols());
        bases.insert(deg, basis);
    }
    let mut diffs = Vec::new();
    for deg in lo..hi {
        let image = zc.diff(deg).mul(&bases[&deg].to_rat());
        let x = bases[&(deg + 1)].to_rat().solve(&image).unwrap();
        diffs.push(x);
    }
    let forms = Arc::new(FreeComplex::new(CoeffRing::Integers, lo, dims, diffs).unwrap());
    let (sum, _, _) = FreeComplex::direct_sum(zc, &forms);
    // difference map: λ ↦ N λ (into the scaled basis), ω ↦ its vector
    let mut mats = BTreeMap::new();
    for deg in sum.degrees() {
        let nz = zc.dim(deg);
        let nf = forms.dim(deg);
        let mut m = RatMat::zeros(scaled.dim(deg), nz + nf);
        for i in 0..nz {
            m[(i, i)] = Rat::from(n.clone());
        }
        let b = bases[&deg].to_rat();
        for i in 0..scaled.dim(deg) {
            for j in 0..nf {
                m[(i, nz + j)] = -b[(i, j)].clone();
            }
        }
        mats.insert(deg, m);
    }
    let f = ChainMap::new(sum, scaled, mats).expect("approx difference map");
    let cone = mapping_cone(&f).unwrap();
    approx_cohomology(&cone.cone, k)
}

/// Interpret a stabilized family of approximations as mixed-group data:
/// `free = q + z`, divisors scaling with `N` count the `Q/Z` rank, stable
/// divisors are honest torsion. Panics if the readings do not stabilize.
pub fn stabilize(approx: &[(Int, ApproxGroup)]) -> (usize, usize, Vec<Int>) {
    assert!(approx.len() >= 2);
    let (n1, a) = &approx[approx.len() - 2];
    let (n2, b) = &approx[approx.len() - 1];
    assert_eq!(a.free_rank, b.free_rank, "free rank must stabilize");
    let ratio = n2 / n1;
    // match divisors: stable ones appear in both lists; scaling ones grow by
    // the denominator ratio (up to unit factors dividing the stable torsion)
    let mut stable = Vec::new();
    let mut scaling = 0usize;
    let mut used = vec![false; b.divisors.len()];
    for d in &a.divisors {
        if let Some(j) = b
            .divisors
            .iter()
            .enumerate()
            .position(|(j, e)| !used[j] && e == d)
        {
            used[j] = true;
            stable.push(d.clone());
        } else if let Some(j) = b
            .divisors
            .iter()
            .enumerate()
            .position(|(j, e)| !used[j] && *e == d * ratio.clone())
        {
            used[j] = true;
            scaling += 1;
        } else {
            panic!(
                "divisor {d} did not stabilize (lists {:?} vs {:?})",
                a.divisors, b.divisors
            );
        }
    }
    assert!(
        used.iter().all(|u| *u),
        "unmatched divisors in {:?} vs {:?}",
        a.divisors,
        b.divisors
    );
    stable.sort();
    (a.free_rank, scaling, stable)
}

/// Denominators `1!..=max!` as big integers.
pub fn factorials(max: u32) -> Vec<Int> {
    let mut out = Vec::new();
    let mut f = Int::one();
    for i in 1..=max {
        f *= Int::from(i);
        out.push(f.clone());
    }
    out
}
