//! Finite groupoids: objects, arrows, a partial composition table, and the
//! axioms checked witness-by-witness.
//!
//! Composition is oriented left-to-right: `(g, h)` is composable iff
//! `t(g) = s(h)`, and `compose(g, h)` is "g then h".

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// A finite groupoid with explicit structure tables.
///
/// Finite models are automatically étale and proper; the flag records the
/// properness convention so reports can state it.
#[derive(Clone, Debug)]
pub struct FiniteGroupoid {
    pub objects: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// `(g, h) -> g·h`, defined exactly when `t(g) = s(h)`.
    pub composition: HashMap<(usize, usize), usize>,
    /// object -> identity arrow
    pub identities: Vec<usize>,
    /// arrow -> inverse arrow
    pub inverses: Vec<usize>,
    /// Vacuously true for finite models.
    pub proper: bool,
}

/// One violated axiom with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    CompositionDomain {
        g: String,
        h: String,
        detail: String,
    },
    CompositionMissing {
        g: String,
        h: String,
    },
    SourceTarget {
        arrow: String,
        detail: String,
    },
    Associativity {
        g: String,
        h: String,
        k: String,
    },
    Identity {
        object: String,
        detail: String,
    },
    Inverse {
        arrow: String,
        detail: String,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::CompositionDomain { g, h, detail } => {
                write!(f, "composition ({g}, {h}) ill-formed: {detail}")
            }
            Violation::CompositionMissing { g, h } => {
                write!(f, "composable pair ({g}, {h}) has no composite")
            }
            Violation::SourceTarget { arrow, detail } => {
                write!(f, "arrow {arrow}: {detail}")
            }
            Violation::Associativity { g, h, k } => {
                write!(f, "associativity fails on ({g}, {h}, {k})")
            }
            Violation::Identity { object, detail } => {
                write!(f, "identity at {object}: {detail}")
            }
            Violation::Inverse { arrow, detail } => {
                write!(f, "inverse of {arrow}: {detail}")
            }
        }
    }
}

/// Validation never aborts; it lists every violated axiom with a witness.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FiniteGroupoid {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn source(&self, g: usize) -> usize {
        self.arrows[g].source
    }

    pub fn target(&self, g: usize) -> usize {
        self.arrows[g].target
    }

    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.composition.get(&(g, h)).copied()
    }

    pub fn is_identity(&self, g: usize) -> bool {
        self.identities[self.arrows[g].source] == g
    }

    /// Check every groupoid axiom, reporting all failures.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let name = |g: usize| self.arrows[g].id.clone();
        if self.identities.len() != self.objects.len() || self.inverses.len() != self.arrows.len() {
            report.violations.push(Violation::SourceTarget {
                arrow: "-".into(),
                detail: "identity or inverse table has wrong length".into(),
            });
            return report;
        }
        for (x, &e) in self.identities.iter().enumerate() {
            if e >= self.arrows.len() {
                report.violations.push(Violation::Identity {
                    object: self.objects[x].clone(),
                    detail: "identity arrow index out of range".into(),
                });
                continue;
            }
            if self.arrows[e].source != x || self.arrows[e].target != x {
                report.violations.push(Violation::Identity {
                    object: self.objects[x].clone(),
                    detail: format!("id arrow {} is not an endoarrow of its object", name(e)),
                });
            }
        }
        // composition domain: defined exactly on t(g) = s(h)
        for (&(g, h), &gh) in &self.composition {
            if g >= self.arrows.len() || h >= self.arrows.len() || gh >= self.arrows.len() {
                report.violations.push(Violation::CompositionDomain {
                    g: format!("#{g}"),
                    h: format!("#{h}"),
                    detail: "index out of range".into(),
                });
                continue;
            }
            if self.target(g) != self.source(h) {
                report.violations.push(Violation::CompositionDomain {
                    g: name(g),
                    h: name(h),
                    detail: "pair is not composable (t(g) != s(h))".into(),
                });
            } else if self.source(gh) != self.source(g) || self.target(gh) != self.target(h) {
                report.violations.push(Violation::CompositionDomain {
                    g: name(g),
                    h: name(h),
                    detail: format!("composite {} has wrong endpoints", name(gh)),
                });
            }
        }
        for g in 0..self.arrows.len() {
            for h in 0..self.arrows.len() {
                if self.target(g) == self.source(h) && !self.composition.contains_key(&(g, h)) {
                    report.violations.push(Violation::CompositionMissing {
                        g: name(g),
                        h: name(h),
                    });
                }
            }
        }
        if !report.violations.is_empty() {
            // structural problems make the remaining checks unreliable
            return report;
        }
        // associativity
        for g in 0..self.arrows.len() {
            for h in 0..self.arrows.len() {
                if self.target(g) != self.source(h) {
                    continue;
                }
                for k in 0..self.arrows.len() {
                    if self.target(h) != self.source(k) {
                        continue;
                    }
                    let gh = self.composition[&(g, h)];
                    let hk = self.composition[&(h, k)];
                    if self.composition[&(gh, k)] != self.composition[&(g, hk)] {
                        report.violations.push(Violation::Associativity {
                            g: name(g),
                            h: name(h),
                            k: name(k),
                        });
                    }
                }
            }
        }
        // identity laws
        for g in 0..self.arrows.len() {
            let es = self.identities[self.source(g)];
            let et = self.identities[self.target(g)];
            if self.composition[&(es, g)] != g {
                report.violations.push(Violation::Identity {
                    object: self.objects[self.source(g)].clone(),
                    detail: format!("id · {} != {}", name(g), name(g)),
                });
            }
            if self.composition[&(g, et)] != g {
                report.violations.push(Violation::Identity {
                    object: self.objects[self.target(g)].clone(),
                    detail: format!("{} · id != {}", name(g), name(g)),
                });
            }
        }
        // inverse laws
        for g in 0..self.arrows.len() {
            let gi = self.inverses[g];
            if gi >= self.arrows.len() {
                report.violations.push(Violation::Inverse {
                    arrow: name(g),
                    detail: "inverse index out of range".into(),
                });
                continue;
            }
            if self.source(gi) != self.target(g) || self.target(gi) != self.source(g) {
                report.violations.push(Violation::Inverse {
                    arrow: name(g),
                    detail: format!("inverse {} has wrong endpoints", name(gi)),
                });
                continue;
            }
            let e_s = self.identities[self.source(g)];
            let e_t = self.identities[self.target(g)];
            if self.composition[&(g, gi)] != e_s {
                report.violations.push(Violation::Inverse {
                    arrow: name(g),
                    detail: format!("{} · {} != id", name(g), name(gi)),
                });
            }
            if self.composition[&(gi, g)] != e_t {
                report.violations.push(Violation::Inverse {
                    arrow: name(g),
                    detail: format!("{} · {} != id", name(gi), name(g)),
                });
            }
        }
        report
    }

    pub fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidGroupoid(
                report
                    .violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            ))
        }
    }

    /// One-object groupoid from a group multiplication table:
    /// `table[g][h] = g·h`, with `table[0]` the identity row (element 0 is
    /// the unit).
    pub fn from_group_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroupoid("group table shape mismatch".into()));
        }
        let mut inverses = vec![usize::MAX; n];
        for g in 0..n {
            for h in 0..n {
                if table[g][h] == 0 {
                    inverses[g] = h;
                }
            }
        }
        if inverses.contains(&usize::MAX) {
            return Err(Error::InvalidGroupoid("group table has no inverses".into()));
        }
        let arrows = names
            .iter()
            .map(|id| Arrow {
                id: id.clone(),
                source: 0,
                target: 0,
            })
            .collect();
        let mut composition = HashMap::new();
        for g in 0..n {
            for h in 0..n {
                composition.insert((g, h), table[g][h]);
            }
        }
        let g = FiniteGroupoid {
            objects: vec!["*".into()],
            arrows,
            composition,
            identities: vec![0],
            inverses,
            proper: true,
        };
        g.require_valid()?;
        Ok(g)
    }

    /// The cyclic group `Z/m` as a one-object groupoid.
    pub fn cyclic(m: usize) -> Self {
        assert!(m >= 1);
        let names = (0..m).map(|i| format!("g{i}")).collect();
        let table = (0..m)
            .map(|a| (0..m).map(|b| (a + b) % m).collect())
            .collect();
        FiniteGroupoid::from_group_table(names, table).expect("cyclic group")
    }

    /// Unit groupoid on `n` objects: identity arrows only.
    pub fn unit(n: usize) -> Self {
        let objects: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let arrows = (0..n)
            .map(|i| Arrow {
                id: format!("id{i}"),
                source: i,
                target: i,
            })
            .collect();
        let composition = (0..n).map(|i| ((i, i), i)).collect();
        FiniteGroupoid {
            objects,
            arrows,
            composition,
            identities: (0..n).collect(),
            inverses: (0..n).collect(),
            proper: true,
        }
    }

    /// Pair groupoid on `n` objects: exactly one arrow `(i, j)` per ordered
    /// pair.
    pub fn pair(n: usize) -> Self {
        let objects: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let mut arrows = Vec::new();
        let mut idx = HashMap::new();
        for i in 0..n {
            for j in 0..n {
                idx.insert((i, j), arrows.len());
                arrows.push(Arrow {
                    id: format!("a{i}{j}"),
                    source: i,
                    target: j,
                });
            }
        }
        let mut composition = HashMap::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    composition.insert((idx[&(i, j)], idx[&(j, k)]), idx[&(i, k)]);
                }
            }
        }
        FiniteGroupoid {
            objects,
            arrows,
            composition,
            identities: (0..n).map(|i| idx[&(i, i)]).collect(),
            inverses: {
                let mut inv = vec![0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        inv[idx[&(i, j)]] = idx[&(j, i)];
                    }
                }
                inv
            },
            proper: true,
        }
    }

    /// The inertia groupoid: objects are loops, arrows are conjugations.
    /// This is the transformation groupoid of the conjugation action on the
    /// loop set.
    pub fn inertia(&self) -> Result<FiniteGroupoid> {
        self.require_valid()?;
        let loops: Vec<usize> = (0..self.arrows.len())
            .filter(|&g| self.source(g) == self.target(g))
            .collect();
        let loop_index: HashMap<usize, usize> =
            loops.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let objects: Vec<String> = loops
            .iter()
            .map(|&g| format!("loop:{}", self.arrows[g].id))
            .collect();
        // arrows (γ, h) with s(h) = s(γ), target h⁻¹ γ h
        let mut arrows = Vec::new();
        let mut idx = HashMap::new();
        let conj = |gamma: usize, h: usize| -> usize {
            let hi = self.inverses[h];
            let a = self.composition[&(hi, gamma)];
            self.composition[&(a, h)]
        };
        for &gamma in &loops {
            for h in 0..self.arrows.len() {
                if self.source(h) != self.source(gamma) {
                    continue;
                }
                let tgt = conj(gamma, h);
                idx.insert((gamma, h), arrows.len());
                arrows.push(Arrow {
                    id: format!("({},{})", self.arrows[gamma].id, self.arrows[h].id),
                    source: loop_index[&gamma],
                    target: loop_index[&tgt],
                });
            }
        }
        let mut composition = HashMap::new();
        for (&(gamma, h), &a) in &idx {
            let mid = conj(gamma, h);
            for k in 0..self.arrows.len() {
                if self.source(k) != self.source(mid) {
                    continue;
                }
                let b = idx[&(mid, k)];
                let hk = self.composition[&(h, k)];
                composition.insert((a, b), idx[&(gamma, hk)]);
            }
        }
        let identities = loops
            .iter()
            .map(|&gamma| idx[&(gamma, self.identities[self.source(gamma)])])
            .collect();
        let inverses = {
            let mut inv = vec![0; arrows.len()];
            for (&(gamma, h), &a) in &idx {
                let mid = conj(gamma, h);
                inv[a] = idx[&(mid, self.inverses[h])];
            }
            inv
        };
        let g = FiniteGroupoid {
            objects,
            arrows,
            composition,
            identities,
            inverses,
            proper: true,
        };
        g.require_valid()?;
        Ok(g)
    }

    /// Connected components of the underlying graph of objects and arrows.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.objects.len();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(x) = stack.pop() {
                for a in &self.arrows {
                    for (u, v) in [(a.source, a.target), (a.target, a.source)] {
                        if u == x && comp[v] == usize::MAX {
                            comp[v] = count;
                            stack.push(v);
                        }
                    }
                }
            }
            count += 1;
        }
        let mut out = vec![Vec::new(); count];
        for (x, &c) in comp.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    /// Automorphism group size at an object (arrows from it to itself).
    pub fn isotropy_size(&self, object: usize) -> usize {
        self.arrows
            .iter()
            .filter(|a| a.source == object && a.target == object)
            .count()
    }
}
