//! Bigraded complexes with anticommuting differentials, their total
//! complexes and truncations, and the five weight double complexes of a
//! normal-crossing model.
//!
//! Conventions: `∂: A_{s,t} -> A_{s,t-1}`, `δ: A_{s,t} -> A_{s-1,t}`; the
//! filtration `W_s` is spanned by columns `≤ s`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::duality::rho_pd_matrix;
use crate::error::{Error, Result};
use crate::homology::ChainComplex;
use crate::linalg::SparseMatrix;
use crate::ncd::{NCDModel, StratumId};
use crate::simplicial::Simplex;

/// What a basis element of a block is.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Cell {
    /// A simplex of a stratum, as a chain.
    Chain(StratumId, Simplex),
    /// The dual cochain of a simplex of a stratum (transverse model).
    Cochain(StratumId, Simplex),
    /// A bare generator of a synthetic complex.
    Generator(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label {
    /// `true` for the shifted target part of a cone.
    pub bottom: bool,
    pub cell: Cell,
}

impl Label {
    fn top(cell: Cell) -> Self {
        Label { bottom: false, cell }
    }
}

#[derive(Clone, Debug, Default)]
pub struct DoubleComplex {
    name: String,
    bases: BTreeMap<(isize, isize), Vec<Label>>,
    /// `∂` out of `(s,t)`.
    vert: BTreeMap<(isize, isize), SparseMatrix<i64>>,
    /// `δ` out of `(s,t)`.
    horiz: BTreeMap<(isize, isize), SparseMatrix<i64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truncation {
    /// The subcomplex `σ_{s≤i}`.
    AtMost(isize),
    /// The quotient `σ_{s≥i}`.
    AtLeast(isize),
}

impl DoubleComplex {
    /// Assemble and check `∂² = 0`, `δ² = 0`, `∂δ + δ∂ = 0`. Empty blocks are dropped.
    pub fn new(
        name: &str,
        bases: BTreeMap<(isize, isize), Vec<Label>>,
        vert: BTreeMap<(isize, isize), SparseMatrix<i64>>,
        horiz: BTreeMap<(isize, isize), SparseMatrix<i64>>,
    ) -> Result<Self> {
        let bases: BTreeMap<_, _> = bases.into_iter().filter(|(_, b)| !b.is_empty()).collect();
        let keep = |m: BTreeMap<(isize, isize), SparseMatrix<i64>>| -> BTreeMap<_, _> {
            m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
        };
        let a = DoubleComplex { name: name.to_string(), bases, vert: keep(vert), horiz: keep(horiz) };
        for &(s, t) in a.vert.keys().chain(a.horiz.keys()) {
            if !a.bases.contains_key(&(s, t)) {
                return Err(Error::AnticommutationViolated(format!("map out of empty block ({s},{t})")));
            }
        }
        for (&(s, t), m) in &a.vert {
            assert_eq!((m.nrows(), m.ncols()), (a.dim(s, t - 1), a.dim(s, t)), "∂ shape at ({s},{t})");
        }
        for (&(s, t), m) in &a.horiz {
            assert_eq!((m.nrows(), m.ncols()), (a.dim(s - 1, t), a.dim(s, t)), "δ shape at ({s},{t})");
        }
        for &(s, t) in a.bases.keys() {
            if !a.vertical(s, t - 1).mul(&a.vertical(s, t)).is_zero() {
                return Err(Error::AnticommutationViolated(format!("∂² ≠ 0 at ({s},{t})")));
            }
            if !a.horizontal(s - 1, t).mul(&a.horizontal(s, t)).is_zero() {
                return Err(Error::AnticommutationViolated(format!("δ² ≠ 0 at ({s},{t})")));
            }
            let x = a.vertical(s - 1, t).mul(&a.horizontal(s, t));
            let y = a.horizontal(s, t - 1).mul(&a.vertical(s, t));
            if !x.add(&y).is_zero() {
                return Err(Error::AnticommutationViolated(format!("∂δ + δ∂ ≠ 0 at ({s},{t})")));
            }
        }
        Ok(a)
    }

    pub fn empty(name: &str) -> Self {
        DoubleComplex { name: name.to_string(), ..Default::default() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_zero(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn dim(&self, s: isize, t: isize) -> usize {
        self.bases.get(&(s, t)).map_or(0, Vec::len)
    }

    pub fn basis(&self, s: isize, t: isize) -> &[Label] {
        self.bases.get(&(s, t)).map_or(&[], Vec::as_slice)
    }

    /// Nonempty bidegrees in `(s, t)` order.
    pub fn bidegrees(&self) -> impl Iterator<Item = (isize, isize)> + '_ {
        self.bases.keys().copied()
    }

    pub fn columns(&self) -> BTreeSet<isize> {
        self.bases.keys().map(|k| k.0).collect()
    }

    pub fn vertical(&self, s: isize, t: isize) -> SparseMatrix<i64> {
        self.vert.get(&(s, t)).cloned().unwrap_or_else(|| SparseMatrix::zeros(self.dim(s, t - 1), self.dim(s, t)))
    }

    pub fn horizontal(&self, s: isize, t: isize) -> SparseMatrix<i64> {
        self.horiz.get(&(s, t)).cloned().unwrap_or_else(|| SparseMatrix::zeros(self.dim(s - 1, t), self.dim(s, t)))
    }

    /// Column `s` with its vertical differential, graded by `t`.
    pub fn column(&self, s: isize) -> ChainComplex {
        let ts: Vec<isize> = self.bases.keys().filter(|k| k.0 == s).map(|k| k.1).collect();
        let (Some(&lo), Some(&hi)) = (ts.first(), ts.last()) else { return ChainComplex::empty() };
        let dims = (lo..=hi).map(|t| self.dim(s, t)).collect();
        let ds = (lo..=hi)
            .map(|t| if t == lo { SparseMatrix::zeros(0, self.dim(s, t)) } else { self.vertical(s, t) })
            .collect();
        ChainComplex::new(lo, dims, ds).expect("columns are complexes")
    }

    pub fn truncate(&self, mode: Truncation) -> DoubleComplex {
        let keep = |s: isize| match mode {
            Truncation::AtMost(i) => s <= i,
            Truncation::AtLeast(i) => s >= i,
        };
        let bases = self.bases.iter().filter(|(k, _)| keep(k.0)).map(|(k, v)| (*k, v.clone())).collect();
        let vert = self.vert.iter().filter(|(k, _)| keep(k.0)).map(|(k, v)| (*k, v.clone())).collect();
        let horiz = self.horiz.iter().filter(|(k, _)| keep(k.0) && keep(k.0 - 1)).map(|(k, v)| (*k, v.clone())).collect();
        let tag = match mode {
            Truncation::AtMost(i) => format!("σ_(s≤{i})"),
            Truncation::AtLeast(i) => format!("σ_(s≥{i})"),
        };
        DoubleComplex { name: format!("{} {tag}", self.name), bases, vert, horiz }
    }

    pub fn total(&self) -> Result<TotalComplex> {
        if self.bases.is_empty() {
            return Ok(TotalComplex { lowest: 0, layout: Vec::new(), dims: Vec::new(), d: Vec::new() });
        }
        let ks: Vec<isize> = self.bases.keys().map(|(s, t)| s + t).collect();
        let lo = *ks.iter().min().unwrap();
        let hi = *ks.iter().max().unwrap();
        let mut layout = Vec::new();
        let mut dims = Vec::new();
        for k in lo..=hi {
            let mut blocks = Vec::new();
            let mut off = 0;
            for (&(s, t), b) in &self.bases {
                if s + t == k {
                    blocks.push(Block { s, t, offset: off, len: b.len() });
                    off += b.len();
                }
            }
            layout.push(blocks);
            dims.push(off);
        }
        let mut tot = TotalComplex { lowest: lo, layout, dims, d: Vec::new() };
        for k in lo..=hi {
            let mut entries = Vec::new();
            for b in tot.blocks(k).to_vec() {
                let place = |m: &SparseMatrix<i64>, target: Option<Range<usize>>, entries: &mut Vec<(usize, usize, i64)>| {
                    if let Some(r) = target {
                        for (j, col) in m.columns().iter().enumerate() {
                            entries.extend(col.iter().map(|(i, v)| (r.start + i, b.offset + j, *v)));
                        }
                    }
                };
                if let Some(m) = self.vert.get(&(b.s, b.t)) {
                    place(m, tot.block_range(k - 1, b.s), &mut entries);
                }
                if let Some(m) = self.horiz.get(&(b.s, b.t)) {
                    place(m, tot.block_range(k - 1, b.s - 1), &mut entries);
                }
            }
            tot.d.push(SparseMatrix::from_triplets(tot.dim(k - 1), tot.dim(k), entries));
        }
        for k in lo + 1..=hi {
            if !tot.differential(k - 1).mul(tot.differential(k)).is_zero() {
                return Err(Error::AnticommutationViolated(format!("D² ≠ 0 in total degree {k}")));
            }
        }
        Ok(tot)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub s: isize,
    pub t: isize,
    pub offset: usize,
    pub len: usize,
}

/// `Tot_k = ⊕_{s+t=k} A_{s,t}` with basis ordered by `s` ascending, then by
/// the block basis, and `D = ∂ + δ`.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    lowest: isize,
    layout: Vec<Vec<Block>>,
    dims: Vec<usize>,
    d: Vec<SparseMatrix<i64>>,
}

impl TotalComplex {
    pub fn lowest(&self) -> isize {
        self.lowest
    }

    pub fn highest(&self) -> isize {
        self.lowest + self.dims.len() as isize - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<isize> {
        self.lowest..=self.highest()
    }

    pub fn dim(&self, k: isize) -> usize {
        if k < self.lowest || k > self.highest() {
            0
        } else {
            self.dims[(k - self.lowest) as usize]
        }
    }

    pub fn blocks(&self, k: isize) -> &[Block] {
        if k < self.lowest || k > self.highest() {
            &[]
        } else {
            &self.layout[(k - self.lowest) as usize]
        }
    }

    pub fn block_range(&self, k: isize, s: isize) -> Option<Range<usize>> {
        self.blocks(k).iter().find(|b| b.s == s).map(|b| b.offset..b.offset + b.len)
    }

    /// `D: Tot_k -> Tot_{k-1}`.
    pub fn differential(&self, k: isize) -> &SparseMatrix<i64> {
        static EMPTY: std::sync::OnceLock<SparseMatrix<i64>> = std::sync::OnceLock::new();
        if k < self.lowest || k > self.highest() {
            return EMPTY.get_or_init(|| SparseMatrix::zeros(0, 0));
        }
        &self.d[(k - self.lowest) as usize]
    }

    /// `D` as a correctly shaped matrix in every degree.
    pub fn differential_matrix(&self, k: isize) -> SparseMatrix<i64> {
        if k < self.lowest || k > self.highest() {
            SparseMatrix::zeros(self.dim(k - 1), self.dim(k))
        } else {
            self.d[(k - self.lowest) as usize].clone()
        }
    }

    /// Filtration index `s` of each basis element of `Tot_k`.
    pub fn filtration(&self, k: isize) -> Vec<isize> {
        self.blocks(k).iter().flat_map(|b| std::iter::repeat(b.s).take(b.len)).collect()
    }

    pub fn chain_complex(&self) -> ChainComplex {
        if self.dims.is_empty() {
            return ChainComplex::empty();
        }
        ChainComplex::new(self.lowest, self.dims.clone(), self.d.clone()).expect("D² = 0 was checked")
    }

    /// Place a block vector of `A_{s,k-s}` into `Tot_k`.
    pub fn embed<R: Clone>(&self, k: isize, s: isize, v: &[(usize, R)]) -> Vec<(usize, R)> {
        let r = self.block_range(k, s).expect("block present");
        v.iter().map(|(i, x)| (r.start + i, x.clone())).collect()
    }

    /// The `A_{s,k-s}` component of a vector of `Tot_k`.
    pub fn component<R: Clone>(&self, k: isize, s: isize, v: &[(usize, R)]) -> Vec<(usize, R)> {
        match self.block_range(k, s) {
            Some(r) => v.iter().filter(|(i, _)| r.contains(i)).map(|(i, x)| (i - r.start, x.clone())).collect(),
            None => Vec::new(),
        }
    }
}

fn chain_labels(m: &NCDModel, p: usize, k: usize, cochain: bool, bottom: bool) -> Vec<Label> {
    m.level(p)
        .into_iter()
        .flat_map(|st| {
            st.complex.simplices(k).iter().map(move |s| Label {
                bottom,
                cell: if cochain { Cell::Cochain(st.id.clone(), s.clone()) } else { Cell::Chain(st.id.clone(), s.clone()) },
            })
        })
        .collect()
}

/// Restriction `C^i(Ỹ^p) -> C^i(Ỹ^{p+1})`, sign `(-1)^{k+j}` where `j` is the
/// insertion position of the new index and `k` the transverse degree.
fn cap_level(m: &NCDModel, p: usize, i: usize, k: isize) -> SparseMatrix<i64> {
    let src = m.level_offsets(p, i);
    let tgt: BTreeMap<StratumId, usize> = m.level_offsets(p + 1, i).into_iter().collect();
    let mut entries = Vec::new();
    for (id, off) in &src {
        let s = &m.get(id).unwrap().complex;
        for a in 0..m.num_components() {
            let Some((tid, pos)) = id.with(a) else { continue };
            let Some(t) = m.get(&tid) else { continue };
            let sign = if (k + pos as isize).rem_euclid(2) == 0 { 1 } else { -1 };
            for (j, sigma) in s.simplices(i).iter().enumerate() {
                if let Some(r) = t.complex.index_of(sigma) {
                    entries.push((tgt[&tid] + r, off + j, sign));
                }
            }
        }
    }
    SparseMatrix::from_triplets(m.level_dim(p + 1, i), m.level_dim(p, i), entries)
}

/// Coboundary `C^i(Ỹ^p) -> C^{i+1}(Ỹ^p)`, block diagonal.
fn level_coboundary(m: &NCDModel, p: usize, i: usize) -> SparseMatrix<i64> {
    m.level_boundary(p, i + 1).transpose()
}

type Blocks = BTreeMap<(isize, isize), Vec<Label>>;
type Maps = BTreeMap<(isize, isize), SparseMatrix<i64>>;

/// Chain columns `C_t(Ỹ^p)` at `s = p - shift`, `p ∈ levels`, with `i` as `δ`.
fn chain_rows(m: &NCDModel, levels: Range<usize>, shift: isize, bottom: bool) -> (Blocks, Maps, Maps) {
    let (mut b, mut v, mut h) = (Blocks::new(), Maps::new(), Maps::new());
    for p in levels.clone() {
        let s = p as isize - shift;
        let top = m.level(p).iter().map(|st| st.dim()).max().unwrap_or(0);
        for t in 0..=top {
            b.insert((s, t as isize), chain_labels(m, p, t, false, bottom));
            if t > 0 {
                v.insert((s, t as isize), m.level_boundary(p, t));
            }
            if p > levels.start {
                h.insert((s, t as isize), m.mv_operator(p, t));
            }
        }
    }
    (b, v, h)
}

/// `A_{s,t}(Y) = C_t(Ỹ^{s+1})`, `s ≥ 0`, with `δ = i`.
pub fn build_y(m: &NCDModel) -> Result<DoubleComplex> {
    let (b, v, h) = chain_rows(m, 1..m.max_level() + 1, 1, false);
    DoubleComplex::new("Y", b, v, h)
}

/// `A_{s,t}(X,Y) = C_t(Ỹ^s)`, `s ≥ 0`, `Ỹ⁰ = X`.
pub fn build_xy(m: &NCDModel) -> Result<DoubleComplex> {
    let (b, v, h) = chain_rows(m, 0..m.max_level() + 1, 0, false);
    DoubleComplex::new("X,Y", b, v, h)
}

/// Transverse columns `C^{2n-t}(Ỹ^{p})` at `s = shift - p` for `p ∈ levels`;
/// `δ` is the signed restriction, the vertical map the coboundary.
fn transverse_rows(m: &NCDModel, levels: Range<usize>, shift: isize) -> (Blocks, Maps, Maps) {
    let n2 = 2 * m.n() as isize;
    let (mut b, mut v, mut h) = (Blocks::new(), Maps::new(), Maps::new());
    for p in levels.clone() {
        let s = shift - p as isize;
        if m.level(p).is_empty() {
            continue;
        }
        let d = 2 * (m.n() - p);
        for i in 0..=d {
            let t = n2 - i as isize;
            b.insert((s, t), chain_labels(m, p, i, true, false));
            if i < d {
                v.insert((s, t), level_coboundary(m, p, i));
            }
            if p + 1 < levels.end && !m.level(p + 1).is_empty() {
                // transverse degree of this block
                let k = d as isize - i as isize;
                h.insert((s, t), cap_level(m, p, i, k));
            }
        }
    }
    (b, v, h)
}

/// `A_{s,t}(X,X−Y) = C^⊥_{t+2(s-1)}(Ỹ^{1-s})`, `s ≤ 0`, realized as `C^{2n-t}(Ỹ^{1-s})`.
pub fn build_x_xmy(m: &NCDModel) -> Result<DoubleComplex> {
    let (b, v, h) = transverse_rows(m, 1..m.max_level() + 1, 1);
    DoubleComplex::new("X,X-Y", b, v, h)
}

/// `A_{s,t}(X−Y) = C^⊥_{t+2s}(Ỹ^{-s})`, `s ≤ 0`: the `s = 0` column is the
/// transverse model of `X`, joined by `∩` to the columns of `(X,X−Y)`.
pub fn build_xmy(m: &NCDModel) -> Result<DoubleComplex> {
    let (b, v, h) = transverse_rows(m, 0..m.max_level() + 1, 0);
    DoubleComplex::new("X-Y", b, v, h)
}

/// `A(∂U)`: the cone of `j₁ = ρ∘pd` from `A(X−Y)` to `A(X,Y)`, with
/// `Cone_{s,t} = A_{s,t}(X−Y) ⊕ A_{s+1,t}(X,Y)`. The shifted part carries
/// `-∂` and `-δ`; `j₁` goes from `(0,t)` of the first part to `(-1,t)` of
/// the second.
pub fn build_boundary_u(m: &NCDModel) -> Result<DoubleComplex> {
    if m.level(1).is_empty() {
        return Ok(DoubleComplex::empty("dU"));
    }
    let (tb, tv, th) = transverse_rows(m, 0..m.max_level() + 1, 0);
    let (bb, bv, bh) = chain_rows(m, 0..m.max_level() + 1, 1, true);
    let mut bases = Blocks::new();
    let mut offsets: BTreeMap<(isize, isize), usize> = BTreeMap::new();
    for (k, l) in &tb {
        bases.entry(*k).or_default().extend(l.iter().cloned());
    }
    for (k, l) in &bb {
        let e = bases.entry(*k).or_default();
        offsets.insert(*k, e.len());
        e.extend(l.iter().cloned());
    }
    let dim = |k: &(isize, isize)| bases.get(k).map_or(0, Vec::len);
    // assemble block matrices from the parts
    let mut vert: BTreeMap<(isize, isize), Vec<(usize, usize, i64)>> = BTreeMap::new();
    let mut horiz: BTreeMap<(isize, isize), Vec<(usize, usize, i64)>> = BTreeMap::new();
    let push = |map: &mut BTreeMap<(isize, isize), Vec<(usize, usize, i64)>>,
                key: (isize, isize),
                mat: &SparseMatrix<i64>,
                roff: usize,
                coff: usize,
                sign: i64| {
        let e = map.entry(key).or_default();
        for (j, col) in mat.columns().iter().enumerate() {
            e.extend(col.iter().map(|(i, v)| (roff + i, coff + j, sign * v)));
        }
    };
    for (k, mat) in &tv {
        push(&mut vert, *k, mat, 0, 0, 1);
    }
    for (k, mat) in &th {
        push(&mut horiz, *k, mat, 0, 0, 1);
    }
    for (k, mat) in &bv {
        let r = offsets[&(k.0, k.1 - 1)];
        push(&mut vert, *k, mat, r, offsets[k], -1);
    }
    for (k, mat) in &bh {
        let r = offsets[&(k.0 - 1, k.1)];
        push(&mut horiz, *k, mat, r, offsets[k], -1);
    }
    let x = m.get(&StratumId::ambient()).unwrap();
    let n2 = 2 * m.n();
    for t in 0..=n2 {
        let j1 = rho_pd_matrix(&x.complex, &x.orientation, n2 - t)?;
        let t = t as isize;
        push(&mut horiz, (0, t), &j1, offsets[&(-1, t)], 0, 1);
    }
    let vert = vert
        .into_iter()
        .map(|(k, e)| (k, SparseMatrix::from_triplets(dim(&(k.0, k.1 - 1)), dim(&k), e)))
        .collect();
    let horiz = horiz
        .into_iter()
        .map(|(k, e)| (k, SparseMatrix::from_triplets(dim(&(k.0 - 1, k.1)), dim(&k), e)))
        .collect();
    DoubleComplex::new("dU", bases, vert, horiz)
}

/// Basis indices, per bidegree, of the subcomplex `A_{*+1,*}(X,X−Y)` inside
/// `A(∂U)`: first-part elements in columns `s ≤ -1`.
pub fn boundary_u_sub(a: &DoubleComplex) -> BTreeMap<(isize, isize), Vec<usize>> {
    a.bidegrees()
        .filter(|k| k.0 <= -1)
        .map(|k| (k, a.basis(k.0, k.1).iter().enumerate().filter(|(_, l)| !l.bottom).map(|(i, _)| i).collect()))
        .collect()
}

/// The five pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pair {
    Y,
    XY,
    #[serde(rename = "X_XmY")]
    XXmY,
    XmY,
    #[serde(rename = "dU")]
    DU,
}

impl Pair {
    pub const ALL: [Pair; 5] = [Pair::Y, Pair::XY, Pair::XXmY, Pair::XmY, Pair::DU];

    pub fn build(self, m: &NCDModel) -> Result<DoubleComplex> {
        match self {
            Pair::Y => build_y(m),
            Pair::XY => build_xy(m),
            Pair::XXmY => build_x_xmy(m),
            Pair::XmY => build_xmy(m),
            Pair::DU => build_boundary_u(m),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pair::Y => "Y",
            Pair::XY => "XY",
            Pair::XXmY => "X_XmY",
            Pair::XmY => "XmY",
            Pair::DU => "dU",
        }
    }

    pub fn parse(s: &str) -> Option<Pair> {
        Pair::ALL.into_iter().find(|p| p.as_str().eq_ignore_ascii_case(s))
    }
}

/// Three-generator complex with `d² ≠ 0`: `x ∈ A_{2,0}`, `w ∈ A_{1,1}`,
/// `u ∈ A_{1,0}`, `v ∈ A_{0,1}`, `δx = u`, `∂w = u`, `δw = v`.
pub fn synthetic_nondegenerate() -> DoubleComplex {
    let g = |n: &str| vec![Label::top(Cell::Generator(n.to_string()))];
    let bases = BTreeMap::from([((2, 0), g("x")), ((1, 1), g("w")), ((1, 0), g("u")), ((0, 1), g("v"))]);
    let one = || SparseMatrix::from_triplets(1, 1, vec![(0, 0, 1)]);
    let vert = BTreeMap::from([((1, 1), one())]);
    let horiz = BTreeMap::from([((2, 0), one()), ((1, 1), one())]);
    DoubleComplex::new("synthetic", bases, vert, horiz).expect("anticommutes")
}
