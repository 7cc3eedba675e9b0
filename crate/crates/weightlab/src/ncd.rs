//! Normal-crossing models: the ambient complex `X`, its ordered components
//! `Y_α`, all multiple intersections, orientations, the Mayer–Vietoris
//! operator between levels, the Milnor realization `SY` and the dual graph.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{homology_ranks, ChainComplex};
use crate::linalg::{normalize, SparseMatrix};
use crate::plumbing::PlumbingGraph;
use crate::simplicial::{Chain, Simplex, SimplicialComplex};
use crate::triangulations::lattice_paths;

/// A strictly increasing tuple of component indices; the empty tuple names `X`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StratumId(Vec<usize>);

impl fmt::Debug for StratumId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "X")
        } else {
            write!(f, "Y{:?}", self.0)
        }
    }
}

impl StratumId {
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidModel(format!("repeated index in stratum {indices:?}")));
        }
        Ok(StratumId(indices))
    }

    pub fn ambient() -> Self {
        StratumId(Vec::new())
    }

    pub fn single(a: usize) -> Self {
        StratumId(vec![a])
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn multiplicity(&self) -> usize {
        self.0.len()
    }

    /// Drop the index at position `i`.
    pub fn without(&self, i: usize) -> StratumId {
        let mut v = self.0.clone();
        v.remove(i);
        StratumId(v)
    }

    /// Insert `a`; returns the new id and the insertion position, or `None`
    /// if `a` is already present.
    pub fn with(&self, a: usize) -> Option<(StratumId, usize)> {
        match self.0.binary_search(&a) {
            Ok(_) => None,
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, a);
                Some((StratumId(v), pos))
            }
        }
    }
}

/// Fixes the orientation of the connected piece of a stratum containing
/// `simplex` so that it carries coefficient `sign`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationSeed {
    pub stratum: Vec<usize>,
    pub simplex: Vec<usize>,
    pub sign: i64,
}

/// One nonempty intersection with its orientation.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub id: StratumId,
    pub complex: SimplicialComplex,
    /// Orientation sign of each top simplex, in the complex's order.
    pub orientation: Vec<i64>,
    /// Connected piece of each top simplex.
    piece: Vec<usize>,
}

impl Stratum {
    pub fn dim(&self) -> usize {
        self.complex.dim().max(0) as usize
    }

    /// Coherently oriented sum of top simplices.
    pub fn fundamental_cycle(&self) -> Chain<i64> {
        let d = self.dim();
        Chain::from_terms(d, self.complex.simplices(d).iter().cloned().zip(self.orientation.iter().copied()))
    }

    fn flip_piece(&mut self, piece: usize) {
        for (o, p) in self.orientation.iter_mut().zip(&self.piece) {
            if *p == piece {
                *o = -*o;
            }
        }
    }
}

/// Coherent orientation of a closed pseudomanifold; returns signs per top
/// simplex and a connected-piece label per top simplex.
pub fn orient(k: &SimplicialComplex, name: &str) -> Result<(Vec<i64>, Vec<usize>)> {
    let d = k.dim();
    if d < 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let d = d as usize;
    if !k.is_pure() {
        return Err(Error::NotPseudomanifold(name.to_string()));
    }
    let tops = k.simplices(d);
    if d == 0 {
        return Ok((vec![1; tops.len()], (0..tops.len()).collect()));
    }
    let mut cofaces: Vec<Vec<(usize, i64)>> = vec![Vec::new(); k.count(d - 1)];
    for (t, s) in tops.iter().enumerate() {
        for (sg, f) in s.boundary_faces() {
            cofaces[k.index_of(&f).unwrap()].push((t, sg));
        }
    }
    if cofaces.iter().any(|c| c.len() != 2) {
        return Err(Error::NotPseudomanifold(name.to_string()));
    }
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); tops.len()];
    for c in &cofaces {
        let (a, sa) = c[0];
        let (b, sb) = c[1];
        // o_a sa + o_b sb = 0
        adj[a].push((b, -sa * sb));
        adj[b].push((a, -sa * sb));
    }
    let mut orient = vec![0i64; tops.len()];
    let mut piece = vec![usize::MAX; tops.len()];
    let mut npieces = 0;
    for start in 0..tops.len() {
        if orient[start] != 0 {
            continue;
        }
        orient[start] = 1;
        piece[start] = npieces;
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for &(b, rel) in &adj[a] {
                let want = orient[a] * rel;
                if orient[b] == 0 {
                    orient[b] = want;
                    piece[b] = npieces;
                    queue.push_back(b);
                } else if orient[b] != want {
                    return Err(Error::NotOrientable(name.to_string()));
                }
            }
        }
        npieces += 1;
    }
    Ok((orient, piece))
}

/// A validated normal-crossing model. Immutable after construction; every
/// nonempty stratum is computed and oriented eagerly.
#[derive(Clone, Debug)]
pub struct NCDModel {
    n: usize,
    ncomponents: usize,
    strata: BTreeMap<StratumId, Stratum>,
    subdivided: bool,
    pub self_intersections: Option<Vec<i64>>,
    pub isolated_singularity: bool,
}

impl NCDModel {
    /// Validate and assemble a model. If some intersection is not a full
    /// subcomplex, everything is barycentrically subdivided once.
    pub fn new(
        n: usize,
        x: SimplicialComplex,
        components: Vec<SimplicialComplex>,
        seeds: &[OrientationSeed],
    ) -> Result<Self> {
        if x.dim() != 2 * n as isize {
            return Err(Error::InvalidModel(format!("X has dimension {} but n = {n}", x.dim())));
        }
        for (a, c) in components.iter().enumerate() {
            if !c.is_subcomplex_of(&x) {
                return Err(Error::InvalidModel(format!("component {a} is not a subcomplex of X")));
            }
        }
        let raw = intersections(&components);
        let all_full = raw.values().all(|c| c.is_full_in(&x));
        let (x, raw, subdivided) = if all_full {
            (x, raw, false)
        } else {
            let (xs, map) = x.barycentric_subdivide();
            let lift = |c: &SimplicialComplex| {
                let verts: BTreeSet<usize> = map
                    .barycenter_of
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| c.contains(s))
                    .map(|(g, _)| g)
                    .collect();
                xs.induced_on(&verts)
            };
            let comps: Vec<SimplicialComplex> = components.iter().map(lift).collect();
            let raw = intersections(&comps);
            if !raw.values().all(|c| c.is_full_in(&xs)) {
                return Err(Error::InvalidModel("intersections not full after subdivision".into()));
            }
            (xs, raw, true)
        };
        let mut strata = BTreeMap::new();
        let mut all = vec![(StratumId::ambient(), x)];
        all.extend(raw);
        for (id, complex) in all {
            let p = id.multiplicity();
            if p > n {
                return Err(Error::InvalidModel(format!("{id:?} is nonempty but has multiplicity > n")));
            }
            let want = 2 * (n - p) as isize;
            if complex.dim() != want || !complex.is_pure() {
                return Err(Error::InvalidModel(format!(
                    "{id:?} should be pure of dimension {want}, found {}",
                    complex.dim()
                )));
            }
            let name = format!("{id:?}");
            let (orientation, piece) = orient(&complex, &name)?;
            strata.insert(id.clone(), Stratum { id, complex, orientation, piece });
        }
        for s in seeds {
            let id = StratumId::new(s.stratum.clone())?;
            let simplex = Simplex::new(s.simplex.clone())?;
            let st = strata
                .get_mut(&id)
                .ok_or_else(|| Error::InvalidModel(format!("orientation seed for empty stratum {id:?}")))?;
            let d = st.dim();
            let t = st
                .complex
                .simplices(d)
                .iter()
                .position(|x| *x == simplex)
                .ok_or_else(|| Error::InvalidModel(format!("seed simplex {simplex:?} is not top-dimensional in {id:?}")))?;
            if st.orientation[t] != s.sign.signum() {
                let piece = st.piece[t];
                st.flip_piece(piece);
            }
        }
        Ok(NCDModel {
            n,
            ncomponents: components.len(),
            strata,
            subdivided,
            self_intersections: None,
            isolated_singularity: false,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_components(&self) -> usize {
        self.ncomponents
    }

    pub fn was_subdivided(&self) -> bool {
        self.subdivided
    }

    pub fn x(&self) -> &SimplicialComplex {
        &self.strata[&StratumId::ambient()].complex
    }

    pub fn get(&self, id: &StratumId) -> Option<&Stratum> {
        self.strata.get(id)
    }

    /// The intersection subcomplex; empty if the intersection is empty.
    pub fn stratum(&self, id: &StratumId) -> SimplicialComplex {
        self.strata.get(id).map(|s| s.complex.clone()).unwrap_or_default()
    }

    /// Nonempty strata of multiplicity `p` in id order; `p = 0` gives `X`.
    pub fn level(&self, p: usize) -> Vec<&Stratum> {
        self.strata.values().filter(|s| s.id.multiplicity() == p).collect()
    }

    pub fn max_level(&self) -> usize {
        self.strata.keys().map(StratumId::multiplicity).max().unwrap_or(0)
    }

    pub fn strata(&self) -> impl Iterator<Item = &Stratum> {
        self.strata.values()
    }

    /// The union `Y = ∪ Y_α` as a subcomplex of `X`.
    pub fn union_y(&self) -> SimplicialComplex {
        self.y_p(1)
    }

    /// Points of multiplicity at least `p`: the union of all `p`-fold intersections.
    pub fn y_p(&self, p: usize) -> SimplicialComplex {
        SimplicialComplex::from_closed_set(
            self.level(p).into_iter().flat_map(|s| s.complex.all_simplices().cloned()).collect::<BTreeSet<_>>(),
        )
    }

    /// The first barycentric subdivision `X′` and, inside it, the full
    /// subcomplex on barycenters of simplices not in `Y`: `X′` minus the open
    /// star of `Y′`, a deformation retract of `X − Y`.
    pub fn deleted_star_complement(&self) -> (SimplicialComplex, SimplicialComplex) {
        let (sd, map) = self.x().barycentric_subdivide();
        let y = self.union_y();
        let keep: BTreeSet<usize> =
            map.barycenter_of.iter().enumerate().filter(|(_, s)| !y.contains(s)).map(|(g, _)| g).collect();
        let c = sd.induced_on(&keep);
        (sd, c)
    }

    pub fn fundamental_cycle(&self, id: &StratumId) -> Result<Chain<i64>> {
        self.strata
            .get(id)
            .map(Stratum::fundamental_cycle)
            .ok_or_else(|| Error::NotOriented(format!("{id:?} (empty)")))
    }

    /// A copy with the orientation of one stratum reversed.
    pub fn with_reversed(&self, id: &StratumId) -> NCDModel {
        let mut m = self.clone();
        if let Some(s) = m.strata.get_mut(id) {
            for o in &mut s.orientation {
                *o = -*o;
            }
        }
        m
    }

    /// Offsets of each stratum's `k`-simplices inside the basis of `C_k(Ỹ^p)`.
    pub fn level_offsets(&self, p: usize, k: usize) -> Vec<(StratumId, usize)> {
        let mut off = 0;
        self.level(p)
            .into_iter()
            .map(|s| {
                let o = off;
                off += s.complex.count(k);
                (s.id.clone(), o)
            })
            .collect()
    }

    pub fn level_dim(&self, p: usize, k: usize) -> usize {
        self.level(p).iter().map(|s| s.complex.count(k)).sum()
    }

    /// Block-diagonal boundary `C_k(Ỹ^p) -> C_{k-1}(Ỹ^p)`.
    pub fn level_boundary(&self, p: usize, k: usize) -> SparseMatrix<i64> {
        let rows = if k == 0 { 0 } else { self.level_dim(p, k - 1) };
        let mut entries = Vec::new();
        let (mut r0, mut c0) = (0, 0);
        for s in self.level(p) {
            if k > 0 {
                let b = s.complex.boundary(k);
                for (j, col) in b.columns().iter().enumerate() {
                    entries.extend(col.iter().map(|(i, v)| (r0 + i, c0 + j, *v)));
                }
                r0 += s.complex.count(k - 1);
            }
            c0 += s.complex.count(k);
        }
        SparseMatrix::from_triplets(rows, self.level_dim(p, k), entries)
    }

    /// `i: C_k(Ỹ^p) -> C_k(Ỹ^{p-1})`: on the piece `(α_1…α_p)`, the sum over
    /// deleted indices `α_{i+1}` of the inclusion with sign `(-1)^{k+i}`.
    pub fn mv_operator(&self, p: usize, k: usize) -> SparseMatrix<i64> {
        assert!(p >= 1, "the operator starts at level 1");
        let src = self.level_offsets(p, k);
        let tgt: HashMap<StratumId, usize> = self.level_offsets(p - 1, k).into_iter().collect();
        let mut entries = Vec::new();
        for (id, off) in &src {
            let st = &self.strata[id];
            for i in 0..p {
                let sub = id.without(i);
                let sign = if (k + i) % 2 == 0 { 1 } else { -1 };
                let target = &self.strata[&sub];
                let toff = tgt[&sub];
                for (j, s) in st.complex.simplices(k).iter().enumerate() {
                    let r = target.complex.index_of(s).expect("strata are nested");
                    entries.push((toff + r, off + j, sign));
                }
            }
        }
        SparseMatrix::from_triplets(self.level_dim(p - 1, k), self.level_dim(p, k), entries)
    }

    /// Realization `SY = ⨿ Ỹ^p × Δ_{p-1} / ∼` with staircase prisms.
    pub fn milnor_realization(&self) -> MilnorRealization {
        let mut pairs: Vec<(usize, usize)> = Vec::new(); // (vertex, component)
        for s in self.level(1) {
            let a = s.id.indices()[0];
            pairs.extend(s.complex.vertices().into_iter().map(|v| (v, a)));
        }
        pairs.sort_unstable();
        let vertex_of: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &(v, a))| ((a, v), i)).collect();
        let mut tops = Vec::new();
        for s in self.strata.values().filter(|s| s.id.multiplicity() >= 1) {
            let d = s.dim();
            for sigma in s.complex.simplices(d) {
                for (_, simplex) in prism(&vertex_of, sigma, &s.id) {
                    tops.push(simplex);
                }
            }
        }
        MilnorRealization { complex: SimplicialComplex::closure(tops), vertex_of }
    }

    /// `sn⁻¹: C_k(Y_{α_1…α_p}) -> C_{k+p-1}(SY)`, the signed prism over each simplex.
    pub fn sn_inverse(&self, sy: &MilnorRealization, id: &StratumId, xi: &Chain<i64>) -> Chain<i64> {
        let mut out = Chain::zero(xi.degree() + id.multiplicity() - 1);
        for (sigma, c) in xi.terms() {
            for (sign, simplex) in prism(&sy.vertex_of, sigma, id) {
                out.add_term(simplex, sign * c);
            }
        }
        out
    }

    /// Dual graph of a surface configuration (`n = 2`); self-intersections
    /// must have been supplied.
    pub fn dual_graph(&self) -> Result<PlumbingGraph> {
        if self.n != 2 {
            return Err(Error::InvalidModel("dual graph needs n = 2".into()));
        }
        if !self.level(3).is_empty() {
            return Err(Error::InvalidModel("triple points present".into()));
        }
        let selfint = self
            .self_intersections
            .as_ref()
            .filter(|v| v.len() == self.ncomponents)
            .ok_or(Error::MissingSelfIntersection(self.ncomponents))?;
        let mut genus = Vec::new();
        for a in 0..self.ncomponents {
            let c = ChainComplex::of_complex(&self.stratum(&StratumId::single(a)));
            let h = homology_ranks(&c)?;
            let b1 = h.iter().find(|r| r.degree == 1).map_or(0, |r| r.rank);
            genus.push(b1 / 2);
        }
        let mut edges = Vec::new();
        for s in self.level(2) {
            let ix = s.id.indices();
            for _ in 0..s.complex.count(0) {
                edges.push((ix[0], ix[1]));
            }
        }
        PlumbingGraph::new(genus, selfint.clone(), edges)
    }
}

fn intersections(components: &[SimplicialComplex]) -> BTreeMap<StratumId, SimplicialComplex> {
    let mut out = BTreeMap::new();
    let mut frontier: Vec<(Vec<usize>, SimplicialComplex)> = Vec::new();
    for (a, c) in components.iter().enumerate() {
        if !c.is_empty() {
            frontier.push((vec![a], c.clone()));
        }
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (ix, c) in &frontier {
            out.insert(StratumId(ix.clone()), c.clone());
            for b in ix.last().unwrap() + 1..components.len() {
                let i = c.intersection(&components[b]);
                if !i.is_empty() {
                    let mut j = ix.clone();
                    j.push(b);
                    next.push((j, i));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Staircase simplices of `σ × Δ_{p-1}` mapped into `SY`, each with its
/// shuffle sign. Vertex `(v_i, j)` goes to `(α_{j+1}, v_i)`.
fn prism(vertex_of: &HashMap<(usize, usize), usize>, sigma: &Simplex, id: &StratumId) -> Vec<(i64, Simplex)> {
    let k = sigma.dim();
    let m = id.multiplicity() - 1;
    let v = sigma.vertices();
    lattice_paths(k, m)
        .into_iter()
        .map(|path| {
            // inversions: Δ-steps taken before σ-steps
            let mut delta_steps = 0;
            let mut inversions = 0;
            for w in path.windows(2) {
                if w[1].1 > w[0].1 {
                    delta_steps += 1;
                } else {
                    inversions += delta_steps;
                }
            }
            let verts: Vec<usize> = path.iter().map(|&(i, j)| vertex_of[&(id.indices()[j], v[i])]).collect();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            (sign, Simplex::from_sorted(verts))
        })
        .collect()
}

/// The complex `SY` with its vertex bookkeeping.
#[derive(Clone, Debug)]
pub struct MilnorRealization {
    pub complex: SimplicialComplex,
    /// `(component, vertex of Y_component) -> vertex of SY`
    pub vertex_of: HashMap<(usize, usize), usize>,
}

/// Sparse helper: the matrix of `sn⁻¹` on a whole level.
pub fn sn_inverse_matrix(m: &NCDModel, sy: &MilnorRealization, p: usize, k: usize) -> SparseMatrix<i64> {
    let rows = sy.complex.count(k + p - 1);
    let mut cols = Vec::new();
    for s in m.level(p) {
        for sigma in s.complex.simplices(k) {
            let col = prism(&sy.vertex_of, sigma, &s.id)
                .into_iter()
                .map(|(sg, simplex)| (sy.complex.index_of(&simplex).unwrap(), sg))
                .collect();
            cols.push(normalize(col));
        }
    }
    SparseMatrix::from_columns(rows, cols)
}
