//! JSON input formats: groupoids, spaces, covers, group actions, bundles.
//!
//! All ids are strings; rational values are `"p/q"` strings (or plain
//! integers). A model file is a tagged union selected by its `type` field.
//! The exact schemas are documented in `docs/formats.md`.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cochain::{CoefficientSpec, TotalCochain, TotalComplex};
use crate::error::{Error, Result};
use crate::groupoid::{Arrow, FiniteGroupoid};
use crate::nerve::{action_nerve, cech_nerve, nerve, Cover, NerveDiagram};
use crate::simplicial::{SimplicialMap, SimplicialSetModel};
use crate::{Int, Rat};

pub fn parse_rat(s: &str) -> Result<Rat> {
    let parse_int = |t: &str| -> Result<Int> {
        Int::from_str(t.trim()).map_err(|e| Error::Parse(format!("bad integer '{t}': {e}")))
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d == Int::from(0) {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            Ok(Rat::new(parse_int(num)?, d))
        }
        None => Ok(Rat::from(parse_int(s)?)),
    }
}

pub fn format_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrowJson {
    pub id: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupoidJson {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    /// composition triples `[g, h, g·h]` with `t(g) = s(h)`
    pub composition: Vec<[String; 3]>,
    pub identities: BTreeMap<String, String>,
    pub inverses: BTreeMap<String, String>,
}

impl GroupoidJson {
    pub fn build(&self) -> Result<FiniteGroupoid> {
        let obj_idx: BTreeMap<&str, usize> = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.as_str(), i))
            .collect();
        let arr_idx: BTreeMap<&str, usize> = self
            .arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.as_str(), i))
            .collect();
        let obj = |s: &str| -> Result<usize> {
            obj_idx
                .get(s)
                .copied()
                .ok_or_else(|| Error::Parse(format!("unknown object '{s}'")))
        };
        let arr = |s: &str| -> Result<usize> {
            arr_idx
                .get(s)
                .copied()
                .ok_or_else(|| Error::Parse(format!("unknown arrow '{s}'")))
        };
        let arrows = self
            .arrows
            .iter()
            .map(|a| {
                Ok(Arrow {
                    id: a.id.clone(),
                    source: obj(&a.source)?,
                    target: obj(&a.target)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut composition = std::collections::HashMap::new();
        for [g, h, gh] in &self.composition {
            composition.insert((arr(g)?, arr(h)?), arr(gh)?);
        }
        let mut identities = vec![usize::MAX; self.objects.len()];
        for (o, e) in &self.identities {
            identities[obj(o)?] = arr(e)?;
        }
        if identities.contains(&usize::MAX) {
            return Err(Error::Parse("missing identity arrow".into()));
        }
        let mut inverses = vec![usize::MAX; self.arrows.len()];
        for (g, gi) in &self.inverses {
            inverses[arr(g)?] = arr(gi)?;
        }
        if inverses.contains(&usize::MAX) {
            return Err(Error::Parse("missing inverse arrow".into()));
        }
        Ok(FiniteGroupoid {
            objects: self.objects.clone(),
            arrows,
            composition,
            identities,
            inverses,
            proper: true,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    /// simplices as vertex-id tuples; faces are closed over automatically
    pub simplices: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelJson {
    pub simplices: Vec<String>,
    /// `faces[i][x]`: id of `d_i x` one level down (levels `q >= 1`)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<Vec<String>>>,
    /// `degeneracies[i][x]`: id of `s_i x` one level up (below the top)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneracies: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceJson {
    /// simplicial set generated by a complex ...
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexJson>,
    /// ... or explicit truncated tables
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<LevelJson>>,
}

impl SpaceJson {
    pub fn build(&self) -> Result<SimplicialSetModel> {
        match (&self.complex, &self.levels) {
            (Some(c), None) => {
                let vidx: BTreeMap<&str, usize> = c
                    .vertices
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v.as_str(), i))
                    .collect();
                let simplices = c
                    .simplices
                    .iter()
                    .map(|s| {
                        s.iter()
                            .map(|v| {
                                vidx.get(v.as_str())
                                    .copied()
                                    .ok_or_else(|| Error::Parse(format!("unknown vertex '{v}'")))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                SimplicialSetModel::from_complex(&c.vertices, &simplices)
            }
            (None, Some(levels)) => {
                let labels: Vec<Vec<String>> = levels.iter().map(|l| l.simplices.clone()).collect();
                let index: Vec<BTreeMap<&str, usize>> = levels
                    .iter()
                    .map(|l| {
                        l.simplices
                            .iter()
                            .enumerate()
                            .map(|(i, s)| (s.as_str(), i))
                            .collect()
                    })
                    .collect();
                let resolve = |level: usize, id: &str| -> Result<usize> {
                    index[level].get(id).copied().ok_or_else(|| {
                        Error::Parse(format!("unknown simplex '{id}' at level {level}"))
                    })
                };
                let mut faces = Vec::new();
                for (q, l) in levels.iter().enumerate().skip(1) {
                    let tables = l
                        .faces
                        .as_ref()
                        .ok_or_else(|| Error::Parse(format!("level {q} needs face tables")))?;
                    let mut per_i = Vec::new();
                    for tbl in tables {
                        per_i.push(
                            tbl.iter()
                                .map(|id| resolve(q - 1, id))
                                .collect::<Result<Vec<_>>>()?,
                        );
                    }
                    faces.push(per_i);
                }
                let mut degens = Vec::new();
                for (q, l) in levels.iter().enumerate() {
                    if q + 1 == levels.len() {
                        break;
                    }
                    let tables = l.degeneracies.as_ref().ok_or_else(|| {
                        Error::Parse(format!("level {q} needs degeneracy tables"))
                    })?;
                    let mut per_i = Vec::new();
                    for tbl in tables {
                        per_i.push(
                            tbl.iter()
                                .map(|id| resolve(q + 1, id))
                                .collect::<Result<Vec<_>>>()?,
                        );
                    }
                    degens.push(per_i);
                }
                SimplicialSetModel::from_tables(labels, faces, degens)
            }
            _ => Err(Error::Parse(
                "space needs exactly one of 'complex' or 'levels'".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverJson {
    pub space: SpaceJson,
    /// nondegenerate member simplex ids per piece (any level)
    pub pieces: Vec<Vec<String>>,
}

impl CoverJson {
    pub fn build(&self) -> Result<Cover> {
        let base = self.space.build()?;
        let mut nondeg_pieces = Vec::new();
        for piece in &self.pieces {
            let mut member: Vec<Vec<bool>> = (0..=base.dim())
                .map(|q| vec![false; base.size(q)])
                .collect();
            for id in piece {
                let mut found = false;
                for q in 0..=base.dim() {
                    if let Some(x) = base.find_label(q, id) {
                        member[q][x] = true;
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Err(Error::Parse(format!("unknown simplex '{id}' in piece")));
                }
            }
            nondeg_pieces.push(member);
        }
        Cover::from_nondegenerate(base, nondeg_pieces)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionJson {
    pub group: GroupoidJson,
    pub space: SpaceJson,
    /// arrow id -> vertex image list (for complex-generated spaces)
    pub action: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelFile {
    Groupoid(GroupoidJson),
    Space(SpaceJson),
    Cover(CoverJson),
    Action(ActionJson),
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Assemble the nerve diagram of the model at the given cutoff (a plain
    /// space is treated as its unit groupoid via the one-piece cover).
    pub fn build_nerve(&self, cutoff: usize) -> Result<NerveDiagram> {
        match self {
            ModelFile::Groupoid(g) => nerve(&g.build()?, cutoff),
            ModelFile::Space(s) => {
                let base = s.build()?;
                cech_nerve(&Cover::one_piece(base), cutoff)
            }
            ModelFile::Cover(c) => cech_nerve(&c.build()?, cutoff),
            ModelFile::Action(a) => {
                let group = a.group.build()?;
                let space = a.space.build()?;
                let mut maps = Vec::new();
                for arrow in &group.arrows {
                    let imgs = a.action.get(&arrow.id).ok_or_else(|| {
                        Error::Parse(format!("missing action of arrow '{}'", arrow.id))
                    })?;
                    maps.push(vertex_map_to_simplicial(&space, imgs)?);
                }
                action_nerve(&group, &space, &maps, cutoff)
            }
        }
    }
}

/// Extend a vertex permutation to a simplicial automorphism of a
/// complex-generated space by matching relabelled simplices.
fn vertex_map_to_simplicial(
    space: &SimplicialSetModel,
    vertex_images: &[String],
) -> Result<SimplicialMap> {
    if vertex_images.len() != space.size(0) {
        return Err(Error::Parse("vertex image list has wrong length".into()));
    }
    let image_idx: Vec<usize> = vertex_images
        .iter()
        .map(|id| {
            space
                .find_label(0, id)
                .ok_or_else(|| Error::Parse(format!("unknown vertex '{id}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    // map labels "va.vb|surj" by substituting vertex labels
    let rename = |label: &str| -> Result<String> {
        let (core, surj) = match label.split_once('|') {
            Some((c, s)) => (c, Some(s)),
            None => (label, None),
        };
        let mut parts: Vec<String> = Vec::new();
        for v in core.split('.') {
            let src = space
                .find_label(0, v)
                .ok_or_else(|| Error::Parse(format!("non-complex label '{label}'")))?;
            parts.push(space.label(0, image_idx[src]).to_string());
        }
        // vertex order may flip under the permutation only if the image
        // tuple is still increasing in the complex's ordering; enforce
        // stability by sorting labels against level-0 order
        let mut order: Vec<(usize, String)> = parts
            .iter()
            .map(|p| (space.find_label(0, p).unwrap(), p.clone()))
            .collect();
        let sorted = {
            let mut o = order.clone();
            o.sort();
            o
        };
        if order != sorted {
            order.sort();
        }
        let joined = order
            .into_iter()
            .map(|(_, p)| p)
            .collect::<Vec<_>>()
            .join(".");
        Ok(match surj {
            Some(s) => format!("{joined}|{s}"),
            None => joined,
        })
    };
    let mut tables = Vec::new();
    for q in 0..=space.dim() {
        let mut tbl = Vec::new();
        for x in 0..space.size(q) {
            let target = rename(space.label(q, x))?;
            let y = space.find_label(q, &target).ok_or_else(|| {
                Error::Parse(format!(
                    "vertex map does not preserve the complex at '{}'",
                    space.label(q, x)
                ))
            })?;
            tbl.push(y);
        }
        tables.push(tbl);
    }
    SimplicialMap::new(space, space, tables)
}

/// Sparse cochain entry over the total-complex basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CochainEntryJson {
    /// Čech degree
    pub r: usize,
    /// internal degree
    pub s: usize,
    /// simplex label within `X_r` level `s`
    pub simplex: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BundleJson {
    pub c: Vec<CochainEntryJson>,
    pub h: Vec<CochainEntryJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<CochainEntryJson>>,
}

pub fn cochain_from_entries(
    tc: &TotalComplex,
    degree: i64,
    entries: &[CochainEntryJson],
) -> Result<TotalCochain> {
    let mut out = TotalCochain::zero(CoefficientSpec::rationals(), degree, tc);
    for e in entries {
        if (e.r + e.s) as i64 != degree {
            return Err(Error::Parse(format!(
                "entry ({}, {}) is not of total degree {degree}",
                e.r, e.s
            )));
        }
        let nerve = tc.double.nerve();
        let x = nerve
            .space(e.r)
            .find_label(e.s, &e.simplex)
            .ok_or_else(|| Error::Parse(format!("unknown simplex '{}'", e.simplex)))?;
        let pos = tc
            .double
            .basis_position(e.r, e.s, x)
            .ok_or_else(|| Error::Parse(format!("simplex '{}' is degenerate", e.simplex)))?;
        let off = tc
            .block_offset(e.r, e.s)
            .ok_or_else(|| Error::Parse(format!("empty block ({}, {})", e.r, e.s)))?;
        out.coords[off + pos] = parse_rat(&e.value)?;
    }
    Ok(out)
}

pub fn bundle_from_json(
    tc: &TotalComplex,
    b: &BundleJson,
) -> Result<crate::bundles::DifferentialCocycle> {
    let c = cochain_from_entries(tc, 2, &b.c)?;
    let h = cochain_from_entries(tc, 1, &b.h)?;
    let bundle = match &b.omega {
        Some(entries) => {
            let omega = cochain_from_entries(tc, 2, entries)?;
            crate::bundles::DifferentialCocycle {
                c,
                h,
                curvature: omega,
            }
        }
        None => crate::bundles::DifferentialCocycle::from_c_h(tc, c, h),
    };
    Ok(bundle)
}

/// Deterministic JSON shape of a mixed group, with torsion as strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MixedGroupJson {
    pub q_rank: usize,
    pub qz_rank: usize,
    pub torsion: Vec<String>,
    pub z_rank: usize,
    pub extension_resolved: bool,
}

impl From<&crate::complexes::MixedGroup> for MixedGroupJson {
    fn from(g: &crate::complexes::MixedGroup) -> Self {
        MixedGroupJson {
            q_rank: g.q_rank,
            qz_rank: g.qz_rank,
            torsion: g.torsion.iter().map(|d| d.to_string()).collect(),
            z_rank: g.z_rank,
            extension_resolved: g.extension_resolved,
        }
    }
}

/// Builders shared by the CLI fixtures and tests.
pub fn groupoid_to_json(g: &FiniteGroupoid) -> GroupoidJson {
    GroupoidJson {
        objects: g.objects.clone(),
        arrows: g
            .arrows
            .iter()
            .map(|a| ArrowJson {
                id: a.id.clone(),
                source: g.objects[a.source].clone(),
                target: g.objects[a.target].clone(),
            })
            .collect(),
        composition: {
            let mut v: Vec<[String; 3]> = g
                .composition
                .iter()
                .map(|(&(a, b), &c)| {
                    [
                        g.arrows[a].id.clone(),
                        g.arrows[b].id.clone(),
                        g.arrows[c].id.clone(),
                    ]
                })
                .collect();
            v.sort();
            v
        },
        identities: g
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), g.arrows[g.identities[i]].id.clone()))
            .collect(),
        inverses: g
            .arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.clone(), g.arrows[g.inverses[i]].id.clone()))
            .collect(),
    }
}

/// The standard circle-cover model as a JSON value (used by fixtures).
pub fn circle_cover_json() -> CoverJson {
    CoverJson {
        space: SpaceJson {
            complex: Some(ComplexJson {
                vertices: vec!["v0".into(), "v1".into(), "v2".into()],
                simplices: vec![
                    vec!["v0".into(), "v1".into()],
                    vec!["v1".into(), "v2".into()],
                    vec!["v0".into(), "v2".into()],
                ],
            }),
            levels: None,
        },
        pieces: vec![
            vec!["v0".into(), "v1".into(), "v0.v1".into()],
            vec!["v1".into(), "v2".into(), "v1.v2".into()],
            vec!["v2".into(), "v0".into(), "v0.v2".into()],
        ],
    }
}

pub fn total_complex_of(nerve_diagram: NerveDiagram, integral: bool) -> Result<Arc<TotalComplex>> {
    let coeff = if integral {
        CoefficientSpec::integers()
    } else {
        CoefficientSpec::rationals()
    };
    let dc = crate::cochain::a_double_complex(&Arc::new(nerve_diagram), coeff)?;
    Ok(Arc::new(crate::cochain::total_complex(Arc::new(dc))?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rat("3/4").unwrap(), crate::rat(3, 4));
        assert_eq!(parse_rat("-2").unwrap(), crate::rat(-2, 1));
        assert_eq!(format_rat(&crate::rat(5, 10)), "1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn groupoid_roundtrip() {
        let g = FiniteGroupoid::cyclic(3);
        let j = groupoid_to_json(&g);
        let text = serde_json::to_string(&ModelFile::Groupoid(j)).unwrap();
        let parsed = ModelFile::parse(&text).unwrap();
        let n = parsed.build_nerve(2).unwrap();
        assert_eq!(n.space(1).size(0), 3);
        assert_eq!(n.space(2).size(0), 9);
    }

    #[test]
    fn cover_json_builds_circle() {
        let j = circle_cover_json();
        let text = serde_json::to_string(&ModelFile::Cover(j)).unwrap();
        let parsed = ModelFile::parse(&text).unwrap();
        let n = parsed.build_nerve(2).unwrap();
        assert_eq!(n.space(0).nondegenerate(1).len(), 3);
    }

    #[test]
    fn action_json_swap() {
        let z2 = groupoid_to_json(&FiniteGroupoid::cyclic(2));
        let model = ModelFile::Action(ActionJson {
            group: z2,
            space: SpaceJson {
                complex: Some(ComplexJson {
                    vertices: vec!["a".into(), "b".into()],
                    simplices: vec![vec!["a".into()], vec!["b".into()]],
                }),
                levels: None,
            },
            action: [
                ("g0".to_string(), vec!["a".into(), "b".into()]),
                ("g1".to_string(), vec!["b".into(), "a".into()]),
            ]
            .into_iter()
            .collect(),
        });
        let n = model.build_nerve(2).unwrap();
        let sizes: Vec<usize> = (0..=2).map(|r| n.space(r).size(0)).collect();
        assert_eq!(sizes, vec![2, 4, 8]);
    }

    #[test]
    fn malformed_json_is_parse_error() {
        assert!(matches!(
            ModelFile::parse("{ not json"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn bundle_entries_roundtrip() {
        let model = ModelFile::Cover(circle_cover_json());
        let n = model.build_nerve(3).unwrap();
        let tc = total_complex_of(n, true).unwrap();
        let b = BundleJson {
            c: vec![],
            h: vec![CochainEntryJson {
                r: 0,
                s: 1,
                simplex: "[0]v0.v1".into(),
                value: "1/3".into(),
            }],
            omega: None,
        };
        let bundle = bundle_from_json(&tc, &b).unwrap();
        assert!(!bundle.h.is_zero());
    }
}
