//! Finite abstract simplicial complexes, chains and cochains with exact
//! coefficients, barycentric subdivision and support queries.
//!
//! Simplices are oriented by their sorted vertex order.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{normalize, Coeff, SparseMatrix, SparseVec};

/// A simplex given by a strictly increasing list of vertex ids.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Simplex(Vec<usize>);

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Simplex {
    /// Sorts the vertices; fails on an empty list or a repeated vertex.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.is_empty() || vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedSimplex(vertices));
        }
        Ok(Simplex(vertices))
    }

    /// Caller guarantees the list is strictly increasing and nonempty.
    pub fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces with their incidence signs `(-1)^j`.
    pub fn boundary_faces(&self) -> Vec<(i64, Simplex)> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|j| {
                let mut v = self.0.clone();
                v.remove(j);
                (if j % 2 == 0 { 1 } else { -1 }, Simplex(v))
            })
            .collect()
    }

    /// All nonempty faces, including the simplex itself.
    pub fn all_faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1 << n))
            .map(|mask| Simplex((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }

    /// Incidence number of a codimension-one face, 0 if not a face.
    pub fn incidence(&self, face: &Simplex) -> i64 {
        if face.0.len() + 1 != self.0.len() || !face.is_face_of(self) {
            return 0;
        }
        let j = (0..self.0.len()).find(|&j| face.0.binary_search(&self.0[j]).is_err()).unwrap();
        if j % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Sort a vertex list, returning the sign of the sorting permutation, or
/// `None` if a vertex repeats.
pub fn sort_with_sign(mut v: Vec<usize>) -> Option<(Vec<usize>, i64)> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// A finite simplicial complex closed under faces.
#[derive(Clone, Default)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialComplex f={:?}", self.f_vector())
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.by_dim == other.by_dim
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Smallest complex containing every generator.
    pub fn from_generators<I, V>(generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: Into<Vec<usize>>,
    {
        let mut set = BTreeSet::new();
        for g in generators {
            let s = Simplex::new(g.into())?;
            if set.contains(&s) {
                continue;
            }
            for f in s.all_faces() {
                set.insert(f);
            }
        }
        Ok(Self::from_closed_set(set))
    }

    /// Build from simplices already known to be closed under faces.
    pub fn from_closed_set(set: impl IntoIterator<Item = Simplex>) -> Self {
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in set {
            let d = s.dim();
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
        for v in &mut by_dim {
            v.sort();
            v.dedup();
        }
        let mut index = HashMap::new();
        for v in &by_dim {
            for (i, s) in v.iter().enumerate() {
                index.insert(s.clone(), i);
            }
        }
        SimplicialComplex { by_dim, index }
    }

    /// Face closure of an arbitrary set of simplices.
    pub fn closure(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut set = BTreeSet::new();
        for s in simplices {
            if !set.contains(&s) {
                set.extend(s.all_faces());
            }
        }
        Self::from_closed_set(set)
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// Top dimension, `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.by_dim.len() as isize - 1
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn total_count(&self) -> usize {
        self.index.len()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    /// Position of a simplex within its dimension.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.simplices(0).iter().map(|s| s.0[0]).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(k, v)| if k % 2 == 0 { v.len() as i64 } else { -(v.len() as i64) }).sum()
    }

    /// Boundary matrix in degree `k`, `1 <= k <= dim`.
    pub fn boundary_matrix(&self, k: usize) -> Result<SparseMatrix<i64>> {
        let top = self.dim();
        if k == 0 || k as isize > top {
            return Err(Error::DegreeOutOfRange { degree: k, top: top.max(0) as usize });
        }
        Ok(self.boundary(k))
    }

    /// Boundary `C_k -> C_{k-1}` for any `k`; zero-sized outside the range.
    pub fn boundary(&self, k: usize) -> SparseMatrix<i64> {
        if k == 0 {
            return SparseMatrix::zeros(0, self.count(0));
        }
        let rows = self.count(k - 1);
        let cols = self
            .simplices(k)
            .iter()
            .map(|s| normalize(s.boundary_faces().into_iter().map(|(sg, f)| (self.index[&f], sg)).collect()))
            .collect();
        SparseMatrix::from_columns(rows, cols)
    }

    /// Coboundary `C^k -> C^{k+1}`, the transpose of the boundary.
    pub fn coboundary(&self, k: usize) -> SparseMatrix<i64> {
        self.boundary(k + 1).transpose()
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.all_simplices().all(|s| other.contains(s))
    }

    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let (small, big) = if self.total_count() <= other.total_count() { (self, other) } else { (other, self) };
        Self::from_closed_set(small.all_simplices().filter(|s| big.contains(s)).cloned())
    }

    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        Self::from_closed_set(self.all_simplices().chain(other.all_simplices()).cloned())
    }

    /// Subcomplex of simplices whose vertices all lie in `vertices`.
    pub fn induced_on(&self, vertices: &BTreeSet<usize>) -> SimplicialComplex {
        Self::from_closed_set(self.all_simplices().filter(|s| s.0.iter().all(|v| vertices.contains(v))).cloned())
    }

    /// Whether `self` (a subcomplex of `ambient`) is full in it.
    pub fn is_full_in(&self, ambient: &SimplicialComplex) -> bool {
        let verts: BTreeSet<usize> = self.vertices().into_iter().collect();
        ambient.all_simplices().filter(|s| s.0.iter().all(|v| verts.contains(v))).all(|s| self.contains(s))
    }

    /// Maximal simplices.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut has_coface: BTreeSet<Simplex> = BTreeSet::new();
        for s in self.by_dim.iter().skip(1).flatten() {
            has_coface.extend(s.boundary_faces().into_iter().map(|(_, f)| f));
        }
        self.all_simplices().filter(|s| !has_coface.contains(*s)).cloned().collect()
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.facets().iter().all(|f| f.dim() as isize == d)
    }

    /// Position of `s` when all dimensions are concatenated in order; this is
    /// the vertex of the barycentric subdivision sitting at its barycenter.
    pub fn global_id(&self, s: &Simplex) -> Option<usize> {
        let i = *self.index.get(s)?;
        Some(self.by_dim[..s.dim()].iter().map(Vec::len).sum::<usize>() + i)
    }

    /// Global id of a simplex when all dimensions are concatenated.
    fn global_offsets(&self) -> Vec<usize> {
        let mut off = vec![0];
        for v in &self.by_dim {
            off.push(off.last().unwrap() + v.len());
        }
        off
    }

    /// First barycentric subdivision. Vertex `g` of the result is the
    /// barycenter of the simplex with global id `g` (dimension-major order),
    /// so vertex order along a flag follows dimension.
    pub fn barycentric_subdivide(&self) -> (SimplicialComplex, SubdivisionMap) {
        let off = self.global_offsets();
        let gid = |s: &Simplex| off[s.dim()] + self.index[s];
        // flags ending at each simplex, as global-id lists
        let mut set: Vec<Simplex> = Vec::new();
        let mut ending: HashMap<Simplex, Vec<Vec<usize>>> = HashMap::new();
        for k in 0..self.by_dim.len() {
            for s in &self.by_dim[k] {
                let mut flags = vec![vec![gid(s)]];
                for f in s.all_faces() {
                    if f.dim() < k {
                        for fl in &ending[&f] {
                            let mut v = fl.clone();
                            v.push(gid(s));
                            flags.push(v);
                        }
                    }
                }
                for fl in &flags {
                    set.push(Simplex::from_sorted(fl.clone()));
                }
                ending.insert(s.clone(), flags);
            }
        }
        let sub = Self::from_closed_set(set);
        let mut carry = Vec::new();
        for k in 0..self.by_dim.len() {
            let mut cols = Vec::new();
            for s in &self.by_dim[k] {
                let mut col = Vec::new();
                for (sign, flag) in full_flags(s) {
                    let ids: Vec<usize> = flag.iter().map(&gid).collect();
                    col.push((sub.index[&Simplex::from_sorted(ids)], sign));
                }
                cols.push(normalize(col));
            }
            carry.push(SparseMatrix::from_columns(sub.count(k), cols));
        }
        let barycenter_of = self.by_dim.iter().flatten().cloned().collect();
        (sub, SubdivisionMap { carry, barycenter_of })
    }
}

/// Full flags `σ_0 < σ_1 < … < σ_k = τ` with `dim σ_j = j`, each with the sign
/// `(-1)^{k(k+1)/2} Π_j [σ_j : σ_{j-1}]` used by the subdivision chain map.
pub fn full_flags(tau: &Simplex) -> Vec<(i64, Vec<Simplex>)> {
    let k = tau.dim();
    let base = if (k * (k + 1) / 2) % 2 == 0 { 1 } else { -1 };
    let mut out = Vec::new();
    let mut stack: Vec<(i64, Vec<Simplex>)> = vec![(base, vec![tau.clone()])];
    while let Some((sign, flag)) = stack.pop() {
        let last = flag.last().unwrap();
        if last.dim() == 0 {
            let mut f = flag.clone();
            f.reverse();
            out.push((sign, f));
            continue;
        }
        for (inc, face) in last.boundary_faces() {
            let mut f = flag.clone();
            f.push(face);
            stack.push((sign * inc, f));
        }
    }
    out.sort_by(|a, b| a.1.cmp(&b.1));
    out
}

/// The carrying chain map of a barycentric subdivision.
#[derive(Clone, Debug)]
pub struct SubdivisionMap {
    /// Per degree, the matrix `C_k(K) -> C_k(K')`.
    pub carry: Vec<SparseMatrix<i64>>,
    /// Source simplex whose barycenter is vertex `g` of the subdivision.
    pub barycenter_of: Vec<Simplex>,
}

impl SubdivisionMap {
    pub fn matrix(&self, k: usize) -> Option<&SparseMatrix<i64>> {
        self.carry.get(k)
    }

    pub fn apply<R: Coeff + From<i64>>(&self, source: &SimplicialComplex, target: &SimplicialComplex, c: &Chain<R>) -> Chain<R> {
        let v = c.to_vec(source);
        let m = self.carry[c.degree()].map(|x| R::from(*x));
        Chain::from_vec(target, c.degree(), &m.mul_vec(&v))
    }
}

/// A homogeneous chain: a sparse map from `k`-simplices to coefficients.
#[derive(Clone, PartialEq)]
pub struct Chain<R> {
    degree: usize,
    terms: BTreeMap<Simplex, R>,
}

impl<R: Coeff> fmt::Debug for Chain<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chain[{}]{:?}", self.degree, self.terms)
    }
}

impl<R: Coeff> Chain<R> {
    pub fn zero(degree: usize) -> Self {
        Chain { degree, terms: BTreeMap::new() }
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Simplex, R)>) -> Self {
        let mut c = Self::zero(degree);
        for (s, v) in terms {
            assert_eq!(s.dim(), degree, "simplex dimension does not match chain degree");
            c.add_term(s, v);
        }
        c
    }

    pub fn add_term(&mut self, s: Simplex, v: R) {
        match self.terms.entry(s) {
            Entry::Vacant(e) => {
                if !v.is_zero() {
                    e.insert(v);
                }
            }
            Entry::Occupied(mut e) => {
                let nv = e.get().clone() + v;
                if nv.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = nv;
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Simplex, R> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, s: &Simplex) -> R {
        self.terms.get(s).cloned().unwrap_or_else(R::zero)
    }

    pub fn boundary(&self) -> Chain<R>
    where
        R: From<i64>,
    {
        let mut out = Chain::zero(self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (s, v) in &self.terms {
            for (sg, f) in s.boundary_faces() {
                out.add_term(f, R::from(sg) * v.clone());
            }
        }
        out
    }

    pub fn plus(&self, other: &Chain<R>) -> Chain<R> {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (s, v) in &other.terms {
            out.add_term(s.clone(), v.clone());
        }
        out
    }

    pub fn scaled(&self, a: &R) -> Chain<R> {
        Chain::from_terms(self.degree, self.terms.iter().map(|(s, v)| (s.clone(), a.clone() * v.clone())))
    }

    /// Closed support: the simplices with nonzero coefficient and all their faces.
    pub fn support(&self) -> SimplicialComplex {
        SimplicialComplex::closure(self.terms.keys().cloned())
    }

    /// Coordinates in the basis of `k`-simplices of `host`.
    pub fn to_vec(&self, host: &SimplicialComplex) -> SparseVec<R> {
        normalize(
            self.terms
                .iter()
                .map(|(s, v)| (host.index_of(s).expect("chain simplex not in host complex"), v.clone()))
                .collect(),
        )
    }

    pub fn from_vec(host: &SimplicialComplex, degree: usize, v: &[(usize, R)]) -> Self {
        let simplices = host.simplices(degree);
        Chain {
            degree,
            terms: v.iter().filter(|e| !e.1.is_zero()).map(|(i, x)| (simplices[*i].clone(), x.clone())).collect(),
        }
    }

    pub fn lies_in(&self, host: &SimplicialComplex) -> bool {
        self.terms.keys().all(|s| host.contains(s))
    }
}

/// A homogeneous cochain: a sparse map from `i`-simplices to coefficients.
#[derive(Clone, PartialEq)]
pub struct Cochain<R> {
    degree: usize,
    values: BTreeMap<Simplex, R>,
}

impl<R: Coeff> fmt::Debug for Cochain<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain[{}]{:?}", self.degree, self.values)
    }
}

impl<R: Coeff> Cochain<R> {
    pub fn zero(degree: usize) -> Self {
        Cochain { degree, values: BTreeMap::new() }
    }

    pub fn from_values(degree: usize, values: impl IntoIterator<Item = (Simplex, R)>) -> Self {
        let mut c = Self::zero(degree);
        for (s, v) in values {
            assert_eq!(s.dim(), degree);
            if !v.is_zero() {
                c.values.insert(s, v);
            }
        }
        c
    }

    /// The constant cochain with value one on every vertex.
    pub fn unit(host: &SimplicialComplex) -> Self {
        Self::from_values(0, host.simplices(0).iter().map(|s| (s.clone(), R::one())))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &BTreeMap<Simplex, R> {
        &self.values
    }

    pub fn value(&self, s: &Simplex) -> R {
        self.values.get(s).cloned().unwrap_or_else(R::zero)
    }

    pub fn coboundary(&self, host: &SimplicialComplex) -> Cochain<R>
    where
        R: From<i64>,
    {
        let v = self.to_vec(host);
        let m = host.coboundary(self.degree).map(|x| R::from(*x));
        Cochain::from_vec(host, self.degree + 1, &m.mul_vec(&v))
    }

    /// Evaluate on a chain of the same degree.
    pub fn eval(&self, c: &Chain<R>) -> R {
        assert_eq!(self.degree, c.degree());
        c.terms().iter().fold(R::zero(), |acc, (s, v)| acc + v.clone() * self.value(s))
    }

    pub fn to_vec(&self, host: &SimplicialComplex) -> SparseVec<R> {
        normalize(
            self.values
                .iter()
                .map(|(s, v)| (host.index_of(s).expect("cochain simplex not in host complex"), v.clone()))
                .collect(),
        )
    }

    pub fn from_vec(host: &SimplicialComplex, degree: usize, v: &[(usize, R)]) -> Self {
        let simplices = host.simplices(degree);
        Cochain {
            degree,
            values: v.iter().filter(|e| !e.1.is_zero()).map(|(i, x)| (simplices[*i].clone(), x.clone())).collect(),
        }
    }

    /// Restriction to a subcomplex.
    pub fn restrict(&self, sub: &SimplicialComplex) -> Cochain<R> {
        Cochain {
            degree: self.degree,
            values: self.values.iter().filter(|(s, _)| sub.contains(s)).map(|(s, v)| (s.clone(), v.clone())).collect(),
        }
    }
}

/// Dimension of `|ξ| ∩ L` using closed supports; `-1` when empty.
pub fn support_intersection_dim<R: Coeff>(xi: &Chain<R>, l: &SimplicialComplex) -> isize {
    let mut best: isize = -1;
    for s in xi.terms().keys() {
        if l.contains(s) {
            return s.dim() as isize;
        }
        for f in s.all_faces() {
            if f.dim() as isize > best && l.contains(&f) {
                best = f.dim() as isize;
            }
        }
    }
    best
}

/// Dimensional transversality against a descending list of strata, where
/// `strata[r-1]` has real codimension `2r`. Empty intersections always pass.
pub fn is_dimensionally_transverse<R: Coeff + From<i64>>(xi: &Chain<R>, strata: &[&SimplicialComplex]) -> bool {
    let k = xi.degree() as isize;
    let bd = xi.boundary();
    strata.iter().enumerate().all(|(i, l)| {
        let r = i as isize + 1;
        let a = support_intersection_dim(xi, l);
        let b = if xi.degree() == 0 { -1 } else { support_intersection_dim(&bd, l) };
        (a < 0 || a <= k - 2 * r) && (b < 0 || b <= k - 1 - 2 * r)
    })
}
