//! Combinatorial line bundles with connection on nerve diagrams, the
//! transgression forms `Θ_q` for `Φ = c_1^k`, the Stokes identity, the
//! multiplicative-bundle calculus, and the characteristic cocycle `ξ(Γ)`.
//!
//! A bundle is a differential cocycle `(c, h, ω)` with `c` an integral
//! 2-cocycle, `h` a rational 1-cochain and `ω` the curvature, related by
//! `Dh = ω - c`. Gauge equivalence acts by `(c, h) ↦ (c - Db, h + b + Dλ)`,
//! which fixes the curvature.
//!
//! With the fiber orientation of `polyform`, the Stokes identity the
//! transgression forms satisfy is
//!
//! ```text
//! D Θ_q(θ_0..θ_q) = (-1)^{q+1} Σ_{i=0}^q (-1)^i Θ_{q-1}(θ_0..θ̂_i..θ_q),
//! ```
//!
//! whose `q = 1` case is `D Θ_1 = Φ(θ_1) - Φ(θ_0)`.

use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::cochain::{pullback_total, CoefficientSpec, RingTag, TotalCochain, TotalComplex};
use crate::complexes::Filtration;
use crate::error::{Error, Result};
use crate::matrix::{rat_mod_one, RatMat};
use crate::polyform::{FormTerm, Poly, PolySimplexForm};
use crate::secondary::{DiffcharCocycle, MhCocycle};
use crate::{Int, Rat};

/// A combinatorial line bundle with connection data.
#[derive(Clone, Debug)]
pub struct DifferentialCocycle {
    /// integral Chern cocycle, degree 2
    pub c: TotalCochain,
    /// rational connection cochain, degree 1
    pub h: TotalCochain,
    /// rational curvature, degree 2; `Dh = ω - c`
    pub curvature: TotalCochain,
}

impl DifferentialCocycle {
    /// Assemble from `(c, h)` with the curvature forced by the relation.
    pub fn from_c_h(tc: &TotalComplex, c: TotalCochain, h: TotalCochain) -> DifferentialCocycle {
        let curvature = h.differential(tc).add(&c);
        DifferentialCocycle { c, h, curvature }
    }

    pub fn trivial(tc: &TotalComplex) -> DifferentialCocycle {
        let coeff = CoefficientSpec::rationals();
        DifferentialCocycle {
            c: TotalCochain::zero(coeff, 2, tc),
            h: TotalCochain::zero(coeff, 1, tc),
            curvature: TotalCochain::zero(coeff, 2, tc),
        }
    }

    /// `true` when the curvature has no components of positive Čech degree
    /// (the pseudo-connection case is `false`).
    pub fn is_connection(&self, tc: &TotalComplex) -> bool {
        self.curvature.positive_cech_part(tc).is_zero()
    }
}

/// One failed bundle axiom.
#[derive(Clone, Debug)]
pub struct BundleViolation {
    pub what: String,
    /// a witnessing basis element, when one exists
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct BundleReport {
    pub violations: Vec<BundleViolation>,
    pub is_connection: bool,
}

impl BundleReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check `Dc = 0`, `Dh = ω - c`, integrality of `c`, and record the
/// connection flag. Validation never aborts.
pub fn validate_bundle(tc: &TotalComplex, d: &DifferentialCocycle) -> BundleReport {
    let mut report = BundleReport::default();
    let witness_of = |coords: &[Rat], degree: i64| -> Option<String> {
        let labels = tc.basis_labels(degree);
        coords
            .iter()
            .position(|x| !x.is_zero())
            .map(|i| labels.get(i).cloned().unwrap_or_else(|| format!("#{i}")))
    };
    if d.c.degree != 2 || d.h.degree != 1 || d.curvature.degree != 2 {
        report.violations.push(BundleViolation {
            what: "component degrees must be (2, 1, 2)".into(),
            witness: None,
        });
        return report;
    }
    if !d.c.is_integral() {
        let w = d.c.coords.iter().position(|x| !x.is_integer());
        report.violations.push(BundleViolation {
            what: "Chern cocycle has non-integral coordinates".into(),
            witness: w.map(|i| tc.basis_labels(2)[i].clone()),
        });
    }
    let dc = d.c.differential(tc);
    if !dc.is_zero() {
        report.violations.push(BundleViolation {
            what: "Dc != 0".into(),
            witness: witness_of(&dc.coords, 3),
        });
    }
    let resid = d.h.differential(tc).sub(&d.curvature.sub(&d.c));
    if !resid.is_zero() {
        report.violations.push(BundleViolation {
            what: "Dh != ω - c".into(),
            witness: witness_of(&resid.coords, 2),
        });
    }
    report.is_connection = d.is_connection(tc);
    report
}

/// Integer cycles of the total complex in chain degree `degree`: the kernel
/// of the boundary, which is the transpose of the differential into that
/// degree.
pub fn cycle_basis(tc: &TotalComplex, degree: i64) -> Vec<Vec<Int>> {
    let boundary = tc.complex.diff(degree - 1).transpose();
    let boundary_int = boundary.to_int().expect("integral differentials");
    let k = crate::snf::kernel_int(&boundary_int);
    (0..k.cols()).map(|j| k.col_vec(j)).collect()
}

fn evaluate(cochain: &TotalCochain, cycle: &[Int]) -> Rat {
    assert_eq!(cochain.coords.len(), cycle.len());
    let mut acc = Rat::zero();
    for (x, z) in cochain.coords.iter().zip(cycle) {
        if !x.is_zero() && !z.is_zero() {
            acc += x.clone() * Rat::from(z.clone());
        }
    }
    acc
}

/// Chern class, curvature class, and the holonomy character.
pub struct BundleInvariants {
    /// raw integral class coordinates of `[c]` in `H^2(Z)`
    pub chern_coords: Vec<Rat>,
    pub chern_is_torsion_generator: bool,
    /// rational class coordinates of `[ω]` in `H^2(Q)`
    pub curvature_coords: Vec<Rat>,
    /// holonomy values mod 1 on the integral 1-cycle basis
    pub holonomy: Vec<Rat>,
}

pub fn bundle_invariants(tc: &TotalComplex, d: &DifferentialCocycle) -> Result<BundleInvariants> {
    let report = validate_bundle(tc, d);
    if !report.is_valid() {
        return Err(Error::InvalidBundle(
            report
                .violations
                .iter()
                .map(|v| v.what.clone())
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }
    let zc = tc.complex.to_integral()?;
    let hz = crate::complexes::cohomology_window(&zc, Some((2, 2)))?;
    let clz = hz.int_classifier(2).unwrap();
    let chern_coords = clz.raw_coords(&d.c.coords);
    let chern_is_torsion_generator = {
        let t = clz.torsion_indices();
        t.iter().any(|&i| {
            let v = &chern_coords[i];
            v.is_integer() && !(v.to_integer() % &clz.divisors[i]).is_zero()
        })
    };
    let cq = tc.complex.to_rational();
    let hq = crate::complexes::cohomology_window(&cq, Some((2, 2)))?;
    let clq = hq.rat_classifier(2).unwrap();
    let curvature_coords = clq.class_coords(&d.curvature.coords);
    let holonomy = cycle_basis(tc, 1)
        .iter()
        .map(|z| rat_mod_one(&evaluate(&d.h, z)))
        .collect();
    Ok(BundleInvariants {
        chern_coords,
        chern_is_torsion_generator,
        curvature_coords,
        holonomy,
    })
}

/// Holonomy of the connection cochain around one integral 1-cycle.
pub fn holonomy_on(d: &DifferentialCocycle, cycle: &[Int]) -> Rat {
    rat_mod_one(&evaluate(&d.h, cycle))
}

/// A family of connection cochains sharing one Chern cocycle:
/// `Dh_j = ω_j - c` with every `ω_j` closed.
#[derive(Clone, Debug)]
pub struct ConnectionFamily {
    pub c: TotalCochain,
    pub members: Vec<(TotalCochain, TotalCochain)>,
}

impl ConnectionFamily {
    pub fn new(
        tc: &TotalComplex,
        c: TotalCochain,
        connections: Vec<TotalCochain>,
    ) -> Result<ConnectionFamily> {
        if !c.is_integral() || !c.differential(tc).is_zero() {
            return Err(Error::InvalidBundle(
                "family base class must be an integral cocycle".into(),
            ));
        }
        let members = connections
            .into_iter()
            .map(|h| {
                let omega = h.differential(tc).add(&c);
                (h, omega)
            })
            .collect();
        Ok(ConnectionFamily { c, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn omit(&self, i: usize) -> ConnectionFamily {
        let mut members = self.members.clone();
        members.remove(i);
        ConnectionFamily {
            c: self.c.clone(),
            members,
        }
    }
}

/// The interpolated curvature
/// `F_s = Σ_j ds_j ⊗ h_j + Σ_j s_j ⊗ ω_j` on `Δ^q`, with `s_0` eliminated.
fn interpolated_curvature(fam: &ConnectionFamily, tc: &TotalComplex) -> PolySimplexForm {
    let q = fam.len() - 1;
    let coeff = CoefficientSpec::rationals();
    let mut f = PolySimplexForm::zero(q, coeff);
    let _ = tc;
    for (j, (h, omega)) in fam.members.iter().enumerate() {
        if j == 0 {
            // ds_0 = -Σ ds_i, s_0 = 1 - Σ s_i
            for i in 1..=q {
                f.push(FormTerm {
                    poly: Poly::constant(q, -Rat::one()),
                    ds: vec![i],
                    cochain: h.clone(),
                });
            }
            f.push(FormTerm {
                poly: Poly::s0(q),
                ds: vec![],
                cochain: omega.clone(),
            });
        } else {
            f.push(FormTerm {
                poly: Poly::one(q),
                ds: vec![j],
                cochain: h.clone(),
            });
            f.push(FormTerm {
                poly: Poly::var(q, j),
                ds: vec![],
                cochain: omega.clone(),
            });
        }
    }
    f
}

/// `Θ_q(Φ; θ_0..θ_q)` for `Φ = c_1^k`: the fiber integral of the `k`-th
/// power of the interpolated curvature. Degree `2k - q`.
pub fn theta_transgression(
    k: usize,
    fam: &ConnectionFamily,
    tc: &TotalComplex,
) -> Result<TotalCochain> {
    if k == 0 || fam.is_empty() {
        return Err(Error::InvalidBundle(
            "transgression needs k >= 1 and a nonempty family".into(),
        ));
    }
    let q = fam.len() - 1;
    if q == 0 {
        // Θ_0 = Φ(θ_0) = ω_0^{∪k}
        return phi_power(k, &fam.members[0].1, tc);
    }
    let f = interpolated_curvature(fam, tc);
    let fk = f.power(k, tc)?;
    let out = fk.integrate(tc)?;
    // the fiber integral of a 2k-form has cochain degree 2k - q; when it
    // vanishes identically the zero cochain is reported in that degree
    if out.is_zero() && out.degree != (2 * k) as i64 - q as i64 {
        let deg = (2 * k) as i64 - q as i64;
        if deg >= 0 {
            return Ok(TotalCochain::zero(out.coeff, deg, tc));
        }
    }
    Ok(out)
}

/// `Φ(θ) = ω^{∪k}` for `Φ = c_1^k`.
pub fn phi_power(k: usize, omega: &TotalCochain, tc: &TotalComplex) -> Result<TotalCochain> {
    assert!(k >= 1);
    let mut out = omega.clone();
    for _ in 1..k {
        out = tc.cup(&out, omega)?;
    }
    Ok(out)
}

/// Report of the Stokes identity check for one family.
pub struct StokesReport {
    pub k: usize,
    pub q: usize,
    pub identity_holds: bool,
    /// the `q = 1` specialization `DΘ_1 = Φ(θ_1) - Φ(θ_0)` (when `q = 1`)
    pub anchor_holds: Option<bool>,
}

/// Verify `D Θ_q = (-1)^{q+1} Σ_i (-1)^i Θ_{q-1}(omit i)` exactly.
pub fn stokes_check(k: usize, fam: &ConnectionFamily, tc: &TotalComplex) -> Result<StokesReport> {
    let q = fam.len() - 1;
    if q == 0 {
        return Err(Error::InvalidBundle("stokes check needs q >= 1".into()));
    }
    let theta = theta_transgression(k, fam, tc)?;
    let lhs = theta.differential(tc);
    let deg = lhs.degree;
    let mut rhs = TotalCochain::zero(theta.coeff, deg, tc);
    for i in 0..=q {
        let sub = theta_transgression(k, &fam.omit(i), tc)?;
        let mut term = if sub.is_zero() && sub.degree != deg {
            TotalCochain::zero(theta.coeff, deg, tc)
        } else {
            sub
        };
        if i % 2 == 1 {
            term = term.neg();
        }
        rhs = rhs.add(&term);
    }
    if q.is_multiple_of(2) {
        rhs = rhs.neg();
    }
    let identity_holds = lhs == rhs;
    let anchor_holds = if q == 1 {
        let p1 = phi_power(k, &fam.members[1].1, tc)?;
        let p0 = phi_power(k, &fam.members[0].1, tc)?;
        Some(lhs == p1.sub(&p0))
    } else {
        None
    };
    Ok(StokesReport {
        k,
        q,
        identity_holds,
        anchor_holds,
    })
}

/// Gauge data: an integral 1-cochain and a rational 0-cochain.
#[derive(Clone, Debug)]
pub struct Gauge {
    pub b: TotalCochain,
    pub lambda: TotalCochain,
}

/// `(c, h) ↦ (c - Db, h + b + Dλ)`; the curvature is unchanged.
pub fn apply_gauge(tc: &TotalComplex, d: &DifferentialCocycle, g: &Gauge) -> DifferentialCocycle {
    assert!(g.b.is_integral(), "gauge b must be integral");
    let c = d.c.sub(&g.b.differential(tc));
    let h = d.h.add(&g.b).add(&g.lambda.differential(tc));
    let out = DifferentialCocycle {
        c,
        h,
        curvature: d.curvature.clone(),
    };
    debug_assert!(validate_bundle(tc, &out).is_valid());
    out
}

/// A bundle with a formal series `ω̂` witnessing `Φ_r(θ) ≡ D ω̂_r mod F^r`.
#[derive(Clone)]
pub struct MultiplicativeBundle {
    pub bundle: DifferentialCocycle,
    /// homogeneous components of `Φ`: degree `r` with rational coefficient
    /// (`Φ = Σ a_r c_1^r`)
    pub phi: Vec<(usize, Rat)>,
    /// `ω̂_r`, a rational cochain of degree `2r - 1` per listed degree
    pub omega_hat: BTreeMap<usize, TotalCochain>,
}

impl MultiplicativeBundle {
    pub fn monomial(
        bundle: DifferentialCocycle,
        k: usize,
        omega_hat_k: TotalCochain,
    ) -> MultiplicativeBundle {
        let mut omega_hat = BTreeMap::new();
        omega_hat.insert(k, omega_hat_k);
        MultiplicativeBundle {
            bundle,
            phi: vec![(k, Rat::one())],
            omega_hat,
        }
    }

    /// `Φ_r(θ)` as a cochain (zero when `r` is not in the degree list).
    pub fn phi_component(&self, r: usize, tc: &TotalComplex) -> Result<TotalCochain> {
        for (deg, coeff) in &self.phi {
            if *deg == r {
                let p = phi_power(r, &self.bundle.curvature, tc)?;
                return Ok(p.scale(coeff));
            }
        }
        Ok(TotalCochain::zero(
            CoefficientSpec::rationals(),
            (2 * r) as i64,
            tc,
        ))
    }
}

/// Certificate for one filtration index: coordinates of
/// `Φ_r(θ) - Dω̂_r` in the `F^r` spanning set.
pub struct MultiplicativeCertificate {
    pub r: usize,
    pub span_coords: Vec<Rat>,
}

pub struct MultiplicativeReport {
    pub multiplicative: bool,
    pub failing_r: Option<usize>,
    pub certificates: Vec<MultiplicativeCertificate>,
}

/// Decide `Φ_r(θ) - Dω̂_r ∈ F^r` for every listed degree, storing solutions.
pub fn is_multiplicative(
    mb: &MultiplicativeBundle,
    filtration: &Filtration,
    tc: &TotalComplex,
) -> Result<MultiplicativeReport> {
    let mut certificates = Vec::new();
    for (r, _) in &mb.phi {
        let r = *r;
        let phi = mb.phi_component(r, tc)?;
        let target = match mb.omega_hat.get(&r) {
            Some(w) => {
                if w.degree != (2 * r) as i64 - 1 {
                    return Err(Error::InvalidBundle(format!(
                        "ω̂_{r} must have degree {}",
                        2 * r - 1
                    )));
                }
                phi.sub(&w.differential(tc))
            }
            None => phi,
        };
        let span = filtration.span(&tc.complex, r, (2 * r) as i64);
        let rhs = RatMat::column(target.coords.clone());
        match span.solve(&rhs) {
            Some(sol) => certificates.push(MultiplicativeCertificate {
                r,
                span_coords: sol.col_vec(0),
            }),
            None => {
                return Ok(MultiplicativeReport {
                    multiplicative: false,
                    failing_r: Some(r),
                    certificates,
                })
            }
        }
    }
    Ok(MultiplicativeReport {
        multiplicative: true,
        failing_r: None,
        certificates,
    })
}

pub struct IsoWitness {
    pub r: usize,
    /// coordinates in `[F^r | D]` solving the membership
    pub solution: Vec<Rat>,
}

pub struct IsoReport {
    pub isomorphic: bool,
    pub failing_r: Option<usize>,
    pub witnesses: Vec<IsoWitness>,
}

/// Decide `ω̂'_r - ω̂_r - Θ_1(Φ_r; θ, g·θ') ∈ F^r + D(C)` for each degree,
/// where `g·θ'` is the primed connection pulled back through the gauge to
/// the unprimed Chern cocycle.
pub fn iso_multiplicative(
    mb: &MultiplicativeBundle,
    mb2: &MultiplicativeBundle,
    g: &Gauge,
    filtration: &Filtration,
    tc: &TotalComplex,
) -> Result<IsoReport> {
    // the gauge must relate the underlying bundles
    let gauged = apply_gauge(tc, &mb.bundle, g);
    if gauged.c != mb2.bundle.c || gauged.h != mb2.bundle.h {
        return Err(Error::InvalidBundle(
            "gauge does not relate the two bundles".into(),
        ));
    }
    if mb.phi != mb2.phi {
        return Err(Error::InvalidBundle(
            "multiplicative bundles carry different polynomials".into(),
        ));
    }
    // g·θ': h' - b - Dλ, a connection cochain for the unprimed c
    let pulled = mb2.bundle.h.sub(&g.b).sub(&g.lambda.differential(tc));
    let mut witnesses = Vec::new();
    for (r, coeff) in &mb.phi {
        let r = *r;
        let fam = ConnectionFamily::new(
            tc,
            mb.bundle.c.clone(),
            vec![mb.bundle.h.clone(), pulled.clone()],
        )?;
        let theta1 = theta_transgression(r, &fam, tc)?.scale(coeff);
        let zero = TotalCochain::zero(CoefficientSpec::rationals(), (2 * r) as i64 - 1, tc);
        let what = mb.omega_hat.get(&r).unwrap_or(&zero).clone();
        let what2 = mb2.omega_hat.get(&r).unwrap_or(&zero).clone();
        let target = what2.sub(&what).sub(&theta1);
        let span = filtration.span(&tc.complex, r, (2 * r) as i64 - 1);
        let dmat = tc.complex.diff((2 * r) as i64 - 2);
        let sys = span.hcat(&dmat);
        match sys.solve(&RatMat::column(target.coords.clone())) {
            Some(sol) => witnesses.push(IsoWitness {
                r,
                solution: sol.col_vec(0),
            }),
            None => {
                return Ok(IsoReport {
                    isomorphic: false,
                    failing_r: Some(r),
                    witnesses,
                })
            }
        }
    }
    Ok(IsoReport {
        isomorphic: true,
        failing_r: None,
        witnesses,
    })
}

/// The characteristic cocycle and both classes of a multiplicative bundle.
pub struct CharClass {
    pub k: usize,
    /// cocycle in the multiplicative-cohomology cone
    pub mh_cocycle: MhCocycle,
    /// cocycle in the differential-character cone (σ_{≥2k}F^kΩ side)
    pub diffchar_cocycle: DiffcharCocycle,
    /// raw integral class coordinates of `c^{∪k}` in `H^{2k}(Z)`
    pub chern_power_coords: Vec<Rat>,
}

/// Build `ξ(Γ) = (c_Φ, ω_rem, η - v_Φ)` at filtration index `r = k`:
/// `c_Φ = c^{∪k}`, `v_Φ = Σ ω^{∪i} ∪ h ∪ c^{∪(k-1-i)}` with
/// `D v_Φ = Φ(θ) - c_Φ` exactly by telescoping, and
/// `ω_rem = Φ(θ) - Dω̂_k ∈ F^k` certified by `is_multiplicative`.
pub fn char_class_xi(
    mb: &MultiplicativeBundle,
    filtration: &Filtration,
    tc: &TotalComplex,
) -> Result<CharClass> {
    if tc.coeff.ring == RingTag::RationalsModOne {
        return Err(Error::CoefficientMismatch("Λ must be Z".into()));
    }
    let Some((k, coeff)) = mb.phi.iter().find(|(_, a)| !a.is_zero()).cloned() else {
        return Err(Error::InvalidBundle("Φ has no nonzero component".into()));
    };
    if !coeff.is_one() || mb.phi.iter().filter(|(_, a)| !a.is_zero()).count() != 1 {
        return Err(Error::InvalidBundle(
            "the class map is implemented for Φ = c_1^k".into(),
        ));
    }
    let report = is_multiplicative(mb, filtration, tc)?;
    if !report.multiplicative {
        return Err(Error::InvalidBundle(format!(
            "bundle is not multiplicative at r = {:?}",
            report.failing_r
        )));
    }
    let c_phi = phi_power(k, &mb.bundle.c, tc)?;
    let phi_theta = phi_power(k, &mb.bundle.curvature, tc)?;
    // v_Φ = Σ_{i=0}^{k-1} ω^{∪i} ∪ h ∪ c^{∪(k-1-i)}
    let mut v_phi = TotalCochain::zero(CoefficientSpec::rationals(), (2 * k) as i64 - 1, tc);
    for i in 0..k {
        let mut term = if i == 0 {
            mb.bundle.h.clone()
        } else {
            tc.cup(&phi_power(i, &mb.bundle.curvature, tc)?, &mb.bundle.h)?
        };
        if k - 1 - i > 0 {
            term = tc.cup(&term, &phi_power(k - 1 - i, &mb.bundle.c, tc)?)?;
        }
        v_phi = v_phi.add(&term);
    }
    // exact telescoping identity
    let telescoped = v_phi.differential(tc);
    if telescoped != phi_theta.sub(&c_phi) {
        return Err(Error::Internal(
            "telescoping identity Dv_Φ = Φ(θ) - c_Φ failed".into(),
        ));
    }
    let zero = TotalCochain::zero(CoefficientSpec::rationals(), (2 * k) as i64 - 1, tc);
    let eta = mb.omega_hat.get(&k).unwrap_or(&zero).clone();
    let omega_rem = phi_theta.sub(&eta.differential(tc));
    // ω_rem in F^k spanning coordinates
    let span = filtration.span(&tc.complex, k, (2 * k) as i64);
    let omega_span_coords = span
        .solve(&RatMat::column(omega_rem.coords.clone()))
        .ok_or_else(|| Error::Internal("certified membership failed to re-solve".into()))?
        .col_vec(0);
    let v = eta.sub(&v_phi);
    let mh_cocycle = MhCocycle {
        degree: (2 * k) as i64,
        lambda: c_phi.coords.clone(),
        omega_coords: omega_span_coords,
        v: v.coords.clone(),
    };
    // differential-character side: (a, b) = (ω_rem, -(v mod 1) lifted)
    let diffchar_cocycle = DiffcharCocycle {
        degree: (2 * k) as i64,
        a_coords: omega_rem.coords.clone(),
        b_lift: crate::matrix::vec_neg(&v.coords),
    };
    let zc = tc.complex.to_integral()?;
    let hz = crate::complexes::cohomology_window(&zc, Some(((2 * k) as i64, (2 * k) as i64)))?;
    let chern_power_coords = hz
        .int_classifier((2 * k) as i64)
        .map(|cl| cl.raw_coords(&c_phi.coords))
        .unwrap_or_default();
    Ok(CharClass {
        k,
        mh_cocycle,
        diffchar_cocycle,
        chern_power_coords,
    })
}

/// Holonomy character of the differential-character side on a 1-cycle
/// (meaningful for `k = 1`): evaluate the `C/Λ` component.
pub fn diffchar_holonomy(class: &CharClass, cycle: &[Int]) -> Rat {
    assert_eq!(class.k, 1);
    let b = &class.diffchar_cocycle.b_lift;
    let mut acc = Rat::zero();
    for (x, z) in b.iter().zip(cycle) {
        if !x.is_zero() && !z.is_zero() {
            acc += x.clone() * Rat::from(z.clone());
        }
    }
    rat_mod_one(&acc)
}

/// Componentwise cochain pullback of a bundle along a nerve morphism.
pub fn pullback_bundle(
    src_tc: &TotalComplex,
    dst_tc: &TotalComplex,
    morphism: &crate::nerve::NerveMorphism,
    d: &DifferentialCocycle,
) -> Result<DifferentialCocycle> {
    let f = pullback_total(src_tc, dst_tc, morphism)?;
    let out = DifferentialCocycle {
        c: TotalCochain::from_coords(d.c.coeff, 2, f.apply(2, &d.c.coords)),
        h: TotalCochain::from_coords(d.h.coeff, 1, f.apply(1, &d.h.coords)),
        curvature: TotalCochain::from_coords(d.curvature.coeff, 2, f.apply(2, &d.curvature.coords)),
    };
    let report = validate_bundle(src_tc, &out);
    if !report.is_valid() {
        return Err(Error::InvalidBundle(
            "pullback broke the cocycle relations".into(),
        ));
    }
    Ok(out)
}

/// Pull back a whole multiplicative bundle (same Φ, pulled-back `ω̂`).
pub fn pullback_multiplicative(
    src_tc: &TotalComplex,
    dst_tc: &TotalComplex,
    morphism: &crate::nerve::NerveMorphism,
    mb: &MultiplicativeBundle,
) -> Result<MultiplicativeBundle> {
    let f = pullback_total(src_tc, dst_tc, morphism)?;
    let bundle = pullback_bundle(src_tc, dst_tc, morphism, &mb.bundle)?;
    let mut omega_hat = BTreeMap::new();
    for (r, w) in &mb.omega_hat {
        omega_hat.insert(
            *r,
            TotalCochain::from_coords(w.coeff, w.degree, f.apply(w.degree, &w.coords)),
        );
    }
    Ok(MultiplicativeBundle {
        bundle,
        phi: mb.phi.clone(),
        omega_hat,
    })
}
