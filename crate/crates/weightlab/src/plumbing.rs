//! Plumbing graphs of curve configurations on a surface and the weight
//! graded Betti numbers of the boundary 3-manifold, computed from the
//! four-column `E¹` page of `A(∂U)` directly.

use std::collections::BTreeMap;

use petgraph::algo::connected_components;
use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{q, rational_rank, smith_normal_form, SparseMatrix, ZMat, Q};

/// Dual graph decorated with genera and self-intersections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlumbingGraph {
    genus: Vec<usize>,
    self_int: Vec<i64>,
    /// Each edge with `v < w`; repeated edges are separate intersection points.
    edges: Vec<(usize, usize)>,
}

impl PlumbingGraph {
    pub fn new(genus: Vec<usize>, self_int: Vec<i64>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if genus.len() != self_int.len() {
            return Err(Error::MissingSelfIntersection(genus.len()));
        }
        let m = genus.len();
        let mut norm = Vec::with_capacity(edges.len());
        for (v, w) in edges {
            if v >= m || w >= m {
                return Err(Error::InvalidModel(format!("edge ({v},{w}) refers to a missing vertex")));
            }
            if v == w {
                // components of a normal-crossing divisor are smooth
                return Err(Error::InvalidModel(format!("loop at vertex {v}")));
            }
            norm.push((v.min(w), v.max(w)));
        }
        norm.sort_unstable();
        Ok(PlumbingGraph { genus, self_int, edges: norm })
    }

    pub fn num_vertices(&self) -> usize {
        self.genus.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn genera(&self) -> &[usize] {
        &self.genus
    }

    pub fn self_intersections(&self) -> &[i64] {
        &self.self_int
    }

    pub fn total_genus(&self) -> usize {
        self.genus.iter().sum()
    }

    pub fn num_graph_components(&self) -> usize {
        if self.genus.is_empty() {
            return 0;
        }
        let mut g = UnGraph::<(), ()>::new_undirected();
        let nodes: Vec<_> = (0..self.num_vertices()).map(|_| g.add_node(())).collect();
        for &(v, w) in &self.edges {
            g.add_edge(nodes[v], nodes[w], ());
        }
        connected_components(&g)
    }

    /// First Betti number of the graph.
    pub fn c_gamma(&self) -> usize {
        self.edges.len() + self.num_graph_components() - self.num_vertices()
    }

    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let m = self.num_vertices();
        let mut out = vec![vec![0i64; m]; m];
        for (v, e) in self.self_int.iter().enumerate() {
            out[v][v] = *e;
        }
        for &(v, w) in &self.edges {
            out[v][w] += 1;
            out[w][v] += 1;
        }
        out
    }

    pub fn rank_ker_i(&self) -> usize {
        let i = self.intersection_matrix_q();
        self.num_vertices() - rational_rank(&i)
    }

    /// Invariant factors `>= 2` of `I` over the integers.
    pub fn coker_i_torsion(&self) -> Result<Vec<i64>> {
        let snf = smith_normal_form(&ZMat::from_rows(&self.intersection_matrix()))?;
        snf.invariant_factors()
            .into_iter()
            .filter(|d| *d > 1)
            .map(|d| i64::try_from(d).map_err(|_| Error::Overflow))
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank_ker_i() == 0
    }

    fn intersection_matrix_q(&self) -> SparseMatrix<Q> {
        SparseMatrix::from_dense(
            &self.intersection_matrix().iter().map(|r| r.iter().map(|v| q(*v)).collect()).collect::<Vec<_>>(),
        )
    }

    /// Signed incidence `H_0(Ỹ²) -> H_0(Ỹ¹)`: a point on `Y_v ∩ Y_w`, `v < w`,
    /// goes to `[Y_w] - [Y_v]`.
    fn incidence(&self) -> SparseMatrix<Q> {
        let cols = self.edges.iter().map(|&(v, w)| vec![(v, q(-1)), (w, q(1))]).collect();
        SparseMatrix::from_columns(self.num_vertices(), cols)
    }
}

/// The `E¹` page of `A(∂U)` for a surface configuration, with ranks only
/// (over ℚ) and its `d¹` maps.
#[derive(Clone, Debug)]
pub struct PlumbingE1 {
    /// `(s, t) -> rank E¹_{s,t}`
    pub e1: BTreeMap<(isize, isize), usize>,
    /// `d¹` out of `(s, t)`.
    pub d1: BTreeMap<(isize, isize), SparseMatrix<Q>>,
    pub e2: BTreeMap<(isize, isize), usize>,
}

impl PlumbingE1 {
    /// `Gr^W_ℓ H_k(∂U)` from `E²`, keyed by `(k, ℓ)` with `ℓ = -t`.
    pub fn graded(&self) -> BTreeMap<(isize, isize), usize> {
        self.e2.iter().filter(|(_, r)| **r > 0).map(|(&(s, t), &r)| ((s + t, -t), r)).collect()
    }

    pub fn betti(&self, k: isize) -> usize {
        self.e2.iter().filter(|((s, t), _)| s + t == k).map(|(_, r)| r).sum()
    }
}

/// Columns: `s = 1: H_t(Ỹ²)`, `s = 0: H_t(Ỹ¹)`, `s = -1: H_{t-2}(Ỹ¹)`,
/// `s = -2: H_{t-4}(Ỹ²)`. The maps are `i_*`, `I` and `∩`.
pub fn e1_boundary_from_plumbing(g: &PlumbingGraph) -> PlumbingE1 {
    let m = g.num_vertices();
    let e = g.edges().len();
    let two_g = 2 * g.total_genus();
    let mut e1 = BTreeMap::new();
    let mut put = |s: isize, t: isize, r: usize| {
        if r > 0 {
            e1.insert((s, t), r);
        }
    };
    put(1, 0, e);
    put(0, 0, m);
    put(0, 1, two_g);
    put(0, 2, m);
    put(-1, 2, m);
    put(-1, 3, two_g);
    put(-1, 4, m);
    put(-2, 4, e);
    let b = g.incidence();
    let mut d1 = BTreeMap::new();
    if m > 0 {
        d1.insert((1, 0), b.clone());
        d1.insert((0, 2), g.intersection_matrix_q());
        d1.insert((-1, 4), b.transpose().neg());
    }
    let rank_of = |key: (isize, isize)| d1.get(&key).map_or(0, rational_rank);
    let mut e2 = BTreeMap::new();
    for (&(s, t), &r) in &e1 {
        let out = rank_of((s, t));
        let inc = rank_of((s + 1, t));
        let v = r - out - inc;
        e2.insert((s, t), v);
    }
    PlumbingE1 { e1, d1, e2 }
}

/// `Gr^W_ℓ H_k(∂U)` from the closed-form contributions, keyed by `(k, ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryWeights {
    pub graded: BTreeMap<(isize, isize), usize>,
    /// Torsion of `coker I`, reported apart from the rational weights.
    pub h1_torsion: Vec<i64>,
}

impl BoundaryWeights {
    pub fn betti(&self, k: isize) -> usize {
        self.graded.iter().filter(|((kk, _), _)| *kk == k).map(|(_, r)| r).sum()
    }

    pub fn rank(&self, k: isize, l: isize) -> usize {
        self.graded.get(&(k, l)).copied().unwrap_or(0)
    }
}

pub fn boundary_weight_ranks(g: &PlumbingGraph) -> Result<BoundaryWeights> {
    let comps = g.num_graph_components();
    let ker = g.rank_ker_i();
    let two_g = 2 * g.total_genus();
    let cg = g.c_gamma();
    let mut graded = BTreeMap::new();
    for (k, l, r) in [
        (0, 0, comps),
        (1, -2, ker),
        (1, -1, two_g),
        (1, 0, cg),
        (2, -4, cg),
        (2, -3, two_g),
        (2, -2, ker),
        (3, -4, comps),
    ] {
        if r > 0 {
            graded.insert((k, l), r);
        }
    }
    Ok(BoundaryWeights { graded, h1_torsion: g.coker_i_torsion()? })
}

/// `rank H_1(∂U)` from `E²` against `rank ker I + 2g + c_Γ`.
pub fn h1_formula_check(g: &PlumbingGraph) -> bool {
    e1_boundary_from_plumbing(g).betti(1) == g.rank_ker_i() + 2 * g.total_genus() + g.c_gamma()
}
