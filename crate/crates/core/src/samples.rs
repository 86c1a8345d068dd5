//! Built-in desk models and seeded random generators.
//!
//! The randomized self-checks in the CLI and the test suites draw from the
//! same generators, always through an explicit `ChaCha12Rng` seed so runs are
//! reproducible bit-for-bit.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::groupoid::FiniteGroupoid;
use crate::nerve::{action_nerve, cech_nerve, nerve, Cover, NerveDiagram};
use crate::simplicial::{SimplicialMap, SimplicialSetModel};

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Triangulated circle: 3 vertices, 3 edges.
pub fn triangulated_circle() -> SimplicialSetModel {
    let verts: Vec<String> = (0..3).map(|i| format!("v{i}")).collect();
    SimplicialSetModel::from_complex(&verts, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
}

/// The 3-arc closed cover of the triangulated circle; arc `i` carries the
/// edge `{v_i, v_{i+1}}` with both endpoints.
pub fn circle_three_arc_cover() -> (Cover, SimplicialSetModel) {
    let circle = triangulated_circle();
    let arcs = [
        ["v0", "v1", "v0.v1"],
        ["v1", "v2", "v1.v2"],
        ["v2", "v0", "v0.v2"],
    ];
    let mut pieces = Vec::new();
    for arc in arcs {
        let mut member = vec![vec![false; circle.size(0)], vec![false; circle.size(1)]];
        for l in arc {
            if let Some(x) = circle.find_label(0, l) {
                member[0][x] = true;
            }
            if let Some(x) = circle.find_label(1, l) {
                member[1][x] = true;
            }
        }
        pieces.push(member);
    }
    let cover = Cover::from_nondegenerate(circle.clone(), pieces).unwrap();
    (cover, circle)
}

/// The symmetric group S_3 as a one-object groupoid. Elements are indexed as
/// permutations of {0,1,2} in one-line notation.
pub fn symmetric_3() -> FiniteGroupoid {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [1, 0, 2],
        [0, 2, 1],
        [2, 1, 0],
        [1, 2, 0],
        [2, 0, 1],
    ];
    let names: Vec<String> = perms
        .iter()
        .map(|p| format!("p{}{}{}", p[0], p[1], p[2]))
        .collect();
    // composition "g then h": (g·h)(x) = h(g(x))
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|g| {
            perms
                .iter()
                .map(|h| {
                    let gh = [h[g[0]], h[g[1]], h[g[2]]];
                    perms.iter().position(|p| *p == gh).unwrap()
                })
                .collect()
        })
        .collect();
    FiniteGroupoid::from_group_table(names, table).unwrap()
}

/// Čech nerve of the 3-arc circle cover — the standard "circle model" used
/// in the secondary-invariant tests (its total complex has cochains in
/// degree 2, unlike the bare circle).
pub fn circle_model(cutoff: usize) -> NerveDiagram {
    let (cover, _) = circle_three_arc_cover();
    cech_nerve(&cover, cutoff).unwrap()
}

/// Nerve of the one-object Z/m groupoid.
pub fn bz_model(m: usize, cutoff: usize) -> NerveDiagram {
    nerve(&FiniteGroupoid::cyclic(m), cutoff).unwrap()
}

/// A small random nerve diagram drawn from the built-in constructions with
/// random parameters.
pub fn random_nerve(rng: &mut ChaCha12Rng, cutoff: usize) -> NerveDiagram {
    match rng.random_range(0..6u32) {
        0 => nerve(&FiniteGroupoid::cyclic(rng.random_range(1..4)), cutoff).unwrap(),
        1 => nerve(&FiniteGroupoid::pair(rng.random_range(1..3)), cutoff).unwrap(),
        2 => nerve(&FiniteGroupoid::unit(rng.random_range(1..4)), cutoff).unwrap(),
        3 => {
            let (cover, _) = circle_three_arc_cover();
            cech_nerve(&cover, cutoff).unwrap()
        }
        4 => {
            let g = FiniteGroupoid::cyclic(2);
            let space = SimplicialSetModel::discrete(vec!["a".into(), "b".into()]);
            let swap = SimplicialMap::new(&space, &space, vec![vec![1, 0]]).unwrap();
            let ident = SimplicialMap::identity(&space);
            action_nerve(&g, &space, &[ident, swap], cutoff).unwrap()
        }
        _ => {
            let g = nerve(&symmetric_3(), cutoff.min(3)).unwrap();
            if cutoff <= 3 {
                g
            } else {
                nerve(&FiniteGroupoid::cyclic(3), cutoff).unwrap()
            }
        }
    }
}

/// Uniform random rational with numerator in `-bound..=bound` and
/// denominator in `1..=den_bound`.
pub fn random_rat(rng: &mut ChaCha12Rng, bound: i64, den_bound: i64) -> crate::Rat {
    let n = rng.random_range(-bound..=bound);
    let d = rng.random_range(1..=den_bound);
    crate::Rat::new(n.into(), d.into())
}

pub fn random_int(rng: &mut ChaCha12Rng, bound: i64) -> crate::Int {
    crate::Int::from(rng.random_range(-bound..=bound))
}
