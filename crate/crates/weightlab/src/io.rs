//! Versioned JSON model files.

use std::path::Path;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::double_complex::{Cell, DoubleComplex, Label};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::ncd::{NCDModel, OrientationSeed};
use crate::plumbing::PlumbingGraph;
use crate::simplicial::SimplicialComplex;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema: u32,
    #[serde(flatten)]
    pub body: ModelBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelBody {
    Ncd(NcdSpec),
    Plumbing(PlumbingSpec),
    /// A bigraded complex given block by block, for complexes that do not
    /// come from a geometric model.
    Double(DoubleSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NcdSpec {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub n: usize,
    /// Optional vertex list; when present every vertex of `x` must be in it.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<usize>,
    /// Top simplices of `X`.
    pub x: Vec<Vec<usize>>,
    /// Each component as a list of generating simplices.
    pub components: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub orientation_seeds: Vec<OrientationSeed>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_intersections: Option<Vec<i64>>,
    #[serde(default)]
    pub isolated_singularity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlumbingVertex {
    pub genus: usize,
    pub self_int: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlumbingSpec {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub vertices: Vec<PlumbingVertex>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub isolated_singularity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub s: isize,
    pub t: isize,
    pub generators: Vec<String>,
}

/// A map out of block `(s, t)` as `[row, column, value]` triplets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub s: isize,
    pub t: isize,
    pub entries: Vec<[i64; 3]>,
}

/// `∂: (s,t) -> (s,t-1)` in `vertical`, `δ: (s,t) -> (s-1,t)` in `horizontal`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoubleSpec {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub blocks: Vec<BlockSpec>,
    #[serde(default)]
    pub vertical: Vec<MapSpec>,
    #[serde(default)]
    pub horizontal: Vec<MapSpec>,
}

impl DoubleSpec {
    /// Shape errors are input errors; a failed `∂² = δ² = ∂δ + δ∂ = 0`
    /// surfaces as [`Error::AnticommutationViolated`].
    pub fn build(&self) -> Result<DoubleComplex> {
        let mut bases: BTreeMap<(isize, isize), Vec<Label>> = BTreeMap::new();
        for b in &self.blocks {
            if bases.insert((b.s, b.t), b.generators.iter().map(|g| Label { bottom: false, cell: Cell::Generator(g.clone()) }).collect()).is_some() {
                return Err(Error::Input(format!("block ({},{}) listed twice", b.s, b.t)));
            }
        }
        let dim = |s: isize, t: isize| bases.get(&(s, t)).map_or(0, Vec::len);
        let maps = |specs: &[MapSpec], target: &dyn Fn(isize, isize) -> (isize, isize)| -> Result<BTreeMap<(isize, isize), SparseMatrix<i64>>> {
            let mut out = BTreeMap::new();
            for m in specs {
                let (ts, tt) = target(m.s, m.t);
                let (nr, nc) = (dim(ts, tt), dim(m.s, m.t));
                let mut entries = Vec::new();
                for &[r, c, v] in &m.entries {
                    if r < 0 || c < 0 || r as usize >= nr || c as usize >= nc {
                        return Err(Error::Input(format!("entry [{r},{c}] outside the {nr}×{nc} map out of ({},{})", m.s, m.t)));
                    }
                    entries.push((r as usize, c as usize, v));
                }
                if out.insert((m.s, m.t), SparseMatrix::from_triplets(nr, nc, entries)).is_some() {
                    return Err(Error::Input(format!("map out of ({},{}) listed twice", m.s, m.t)));
                }
            }
            Ok(out)
        };
        let vert = maps(&self.vertical, &|s, t| (s, t - 1))?;
        let horiz = maps(&self.horizontal, &|s, t| (s - 1, t))?;
        let name = if self.name.is_empty() { "double" } else { &self.name };
        DoubleComplex::new(name, bases, vert, horiz)
    }

    /// Serialize any double complex; labels other than bare generators are
    /// flattened to their debug form.
    pub fn from_complex(a: &DoubleComplex) -> Self {
        let triplets = |m: SparseMatrix<i64>| -> Vec<[i64; 3]> {
            let mut e: Vec<[i64; 3]> = (0..m.ncols()).flat_map(|j| m.col(j).iter().map(move |&(i, v)| [i as i64, j as i64, v]).collect::<Vec<_>>()).collect();
            e.sort_unstable();
            e
        };
        let mut blocks = Vec::new();
        let mut vertical = Vec::new();
        let mut horizontal = Vec::new();
        for (s, t) in a.bidegrees() {
            let generators = a
                .basis(s, t)
                .iter()
                .map(|l| match &l.cell {
                    Cell::Generator(g) if !l.bottom => g.clone(),
                    _ => format!("{l:?}"),
                })
                .collect();
            blocks.push(BlockSpec { s, t, generators });
            let v = a.vertical(s, t);
            if !v.is_zero() {
                vertical.push(MapSpec { s, t, entries: triplets(v) });
            }
            let h = a.horizontal(s, t);
            if !h.is_zero() {
                horizontal.push(MapSpec { s, t, entries: triplets(h) });
            }
        }
        DoubleSpec { name: a.name().to_string(), blocks, vertical, horizontal }
    }
}

impl NcdSpec {
    pub fn build(&self) -> Result<NCDModel> {
        let x = SimplicialComplex::from_generators(self.x.iter().cloned())?;
        if !self.vertices.is_empty() {
            let known: std::collections::BTreeSet<usize> = self.vertices.iter().copied().collect();
            if let Some(v) = x.vertices().into_iter().find(|v| !known.contains(v)) {
                return Err(Error::InvalidModel(format!("vertex {v} of X is not listed")));
            }
        }
        let comps = self
            .components
            .iter()
            .map(|c| SimplicialComplex::from_generators(c.iter().cloned()))
            .collect::<Result<Vec<_>>>()?;
        let mut m = NCDModel::new(self.n, x, comps, &self.orientation_seeds)?;
        if let Some(si) = &self.self_intersections {
            if si.len() != m.num_components() {
                return Err(Error::MissingSelfIntersection(m.num_components()));
            }
        }
        m.self_intersections = self.self_intersections.clone();
        m.isolated_singularity = self.isolated_singularity;
        Ok(m)
    }
}

impl PlumbingSpec {
    pub fn build(&self) -> Result<PlumbingGraph> {
        PlumbingGraph::new(
            self.vertices.iter().map(|v| v.genus).collect(),
            self.vertices.iter().map(|v| v.self_int).collect(),
            self.edges.iter().map(|e| (e[0], e[1])).collect(),
        )
    }

    pub fn from_graph(name: &str, g: &PlumbingGraph, isolated_singularity: bool) -> Self {
        PlumbingSpec {
            name: name.to_string(),
            vertices: g
                .genera()
                .iter()
                .zip(g.self_intersections())
                .map(|(&genus, &self_int)| PlumbingVertex { genus, self_int })
                .collect(),
            edges: g.edges().iter().map(|&(v, w)| [v, w]).collect(),
            isolated_singularity,
        }
    }
}

impl ModelFile {
    pub fn ncd(spec: NcdSpec) -> Self {
        ModelFile { schema: SCHEMA, body: ModelBody::Ncd(spec) }
    }

    pub fn plumbing(spec: PlumbingSpec) -> Self {
        ModelFile { schema: SCHEMA, body: ModelBody::Plumbing(spec) }
    }

    pub fn double(spec: DoubleSpec) -> Self {
        ModelFile { schema: SCHEMA, body: ModelBody::Double(spec) }
    }

    pub fn name(&self) -> &str {
        match &self.body {
            ModelBody::Ncd(s) => &s.name,
            ModelBody::Plumbing(s) => &s.name,
            ModelBody::Double(s) => &s.name,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f: ModelFile = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
        if f.schema != SCHEMA {
            return Err(Error::Input(format!("unsupported schema {}", f.schema)));
        }
        Ok(f)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files serialize")
    }
}
