//! Input schemas. Element and ray indices in files are 1-based.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use tropehrhart::chains::{ConvexChain, Piece};
use tropehrhart::lattice::arith::parse_rational;
use tropehrhart::lattice::{Fan, LatticeBox, LatticeVector, RationalVector, VPolytope};
use tropehrhart::matroid::Matroid;
use tropehrhart::tropvb::{Diagram, TropicalVectorBundle};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanJson {
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatroidJson {
    pub m: usize,
    pub bases: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleJson {
    pub fan: FanJson,
    pub matroid: MatroidJson,
    pub diagram: Vec<Vec<i64>>,
}

/// A rational as `"p/q"`, a decimal string or a JSON integer.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum RatJson {
    Int(i64),
    Str(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: i64,
    pub vertices: Vec<Vec<RatJson>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainJson {
    #[serde(default)]
    pub dim: Option<usize>,
    pub terms: Vec<TermJson>,
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation("io", format!("cannot read {}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        CliError::validation("schema", format!("{}: {} at {at}", path.display(), e.inner())).with("path", at.into())
    })
}

fn zero_based(idx: &[usize], bound: usize, what: &str, at: String) -> Result<Vec<usize>, CliError> {
    idx.iter()
        .map(|&i| {
            if i == 0 || i > bound {
                Err(CliError::validation("schema", format!("{what} index {i} at {at} is outside 1..={bound}")).with("path", at.clone().into()))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

pub fn fan_from(f: &FanJson) -> Result<Fan, CliError> {
    let dim = f.rays.first().map(Vec::len).ok_or_else(|| CliError::validation("schema", "fan has no rays".into()))?;
    let rays: Vec<LatticeVector> = f.rays.iter().map(|r| LatticeVector(r.clone())).collect();
    let cones = f
        .cones
        .iter()
        .enumerate()
        .map(|(k, c)| zero_based(c, rays.len(), "ray", format!("fan.cones[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Fan::new(dim, rays, cones)?)
}

pub fn matroid_from(m: &MatroidJson, at: &str) -> Result<Matroid, CliError> {
    let bases = m
        .bases
        .iter()
        .enumerate()
        .map(|(k, b)| zero_based(b, m.m, "element", format!("{at}bases[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matroid::new(m.m, &bases)?)
}

pub fn load_bundle(path: &Path) -> Result<TropicalVectorBundle, CliError> {
    let b: BundleJson = read(path)?;
    let fan = fan_from(&b.fan)?;
    let matroid = matroid_from(&b.matroid, "matroid.")?;
    let diagram = Diagram::new(b.matroid.m, b.diagram)?;
    Ok(TropicalVectorBundle::new(fan, matroid, diagram)?)
}

pub fn load_matroid(path: &Path) -> Result<Matroid, CliError> {
    let m: MatroidJson = read(path)?;
    matroid_from(&m, "")
}

pub fn load_chain(path: &Path) -> Result<ConvexChain, CliError> {
    let c: ChainJson = read(path)?;
    let dim = c
        .dim
        .or_else(|| c.terms.iter().flat_map(|t| t.vertices.first()).map(Vec::len).next())
        .ok_or_else(|| CliError::validation("schema", "cannot infer the dimension of an empty chain".into()))?;
    let mut terms = Vec::with_capacity(c.terms.len());
    for (k, t) in c.terms.iter().enumerate() {
        let mut pts = Vec::with_capacity(t.vertices.len());
        for (j, v) in t.vertices.iter().enumerate() {
            let at = format!("terms[{k}].vertices[{j}]");
            let coords = v
                .iter()
                .map(|x| match x {
                    RatJson::Int(i) => Ok(tropehrhart::lattice::rat(*i)),
                    RatJson::Str(s) => parse_rational(s).ok_or_else(|| {
                        CliError::validation("schema", format!("{s:?} at {at} is not a rational")).with("path", at.clone().into())
                    }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if coords.len() != dim {
                return Err(CliError::validation("schema", format!("{at} has {} coordinates, expected {dim}", coords.len()))
                    .with("path", at.into()));
            }
            pts.push(RationalVector(coords));
        }
        let p = if pts.is_empty() { VPolytope::empty(dim) } else { VPolytope::hull(dim, &pts)? };
        terms.push((t.coeff, Piece::Polytope(p)));
    }
    Ok(ConvexChain::from_terms(dim, terms)?)
}

/// Comma-separated integers; a leading `[`/`]` pair is tolerated.
pub fn parse_ints(s: &str, what: &str) -> Result<Vec<i64>, CliError> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| CliError::validation("argument", format!("{what}: {x:?} is not an integer"))))
        .collect()
}

/// `lo1,lo2:hi1,hi2`.
pub fn parse_box(s: &str, dim: usize) -> Result<LatticeBox, CliError> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| CliError::validation("argument", format!("--box {s:?}: expected LO:HI")))?;
    let (lo, hi) = (parse_ints(lo, "--box")?, parse_ints(hi, "--box")?);
    if lo.len() != dim || hi.len() != dim {
        return Err(CliError::validation("argument", format!("--box needs {dim} coordinates on each side")));
    }
    if lo.iter().zip(&hi).any(|(a, b)| a > b) {
        return Err(CliError::validation("argument", "--box has a lower corner above the upper corner".into()));
    }
    Ok(LatticeBox::new(lo, hi))
}

pub fn check_len(u: &[i64], dim: usize, what: &str) -> Result<(), CliError> {
    if u.len() != dim {
        return Err(CliError::validation("argument", format!("{what} has {} coordinates, expected {dim}", u.len())));
    }
    Ok(())
}
