//! Verification predicates: support dimension bounds for weights, long exact
//! sequences of filtered short exact sequences with their weight behaviour,
//! truncation kernels, and purity for resolutions of isolated singularities.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::{FilteredComplex, SpectralSequence, WeightedComplex};
use crate::double_complex::{build_boundary_u, build_x_xmy, build_y, Cell, Pair};
use crate::duality::intersection_number;
use crate::error::Result;
use crate::linalg::{rational_kernel, rational_rank, Echelon, SparseMatrix, SparseVec, Q};
use crate::ncd::NCDModel;
use crate::plumbing::{boundary_weight_ranks, e1_boundary_from_plumbing, PlumbingGraph};
use crate::simplicial::{support_intersection_dim, Chain, SimplicialComplex};

/// Which support bound applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SupportKind {
    /// Cycles of `Y`: `dim |c| ∩ Y^{k-t+2} < t-1`.
    Y,
    /// Relative cycles of `(X,Y)`: `dim |c| ∩ Y^{k-t+1} < t-1`.
    XY,
    /// Relative cycles of `(X,X−Y)`: `dim |c| ∩ Y^{t-k} < 2k-t-1`.
    XXmY,
}

impl SupportKind {
    /// Level `p` of the stratum `Y^p` tested, and the strict bound.
    pub fn bound(self, k: isize, t: isize) -> (isize, isize) {
        match self {
            SupportKind::Y => (k - t + 2, t - 1),
            SupportKind::XY => (k - t + 1, t - 1),
            SupportKind::XXmY => (t - k, 2 * k - t - 1),
        }
    }
}

/// `Y^p` as a subcomplex of `X` (`Y^0 = X`, empty above the top level).
fn level_union(m: &NCDModel, p: isize) -> SimplicialComplex {
    if p <= 0 {
        m.x().clone()
    } else {
        m.y_p(p as usize)
    }
}

/// Whether a cycle supported in `X` (or in the subdivision, for `XXmY`,
/// with `levels` given there) passes the bound for weight `-t` in degree `k`.
/// An empty intersection always passes.
pub fn support_weight_bound<R: crate::linalg::Coeff>(
    kind: SupportKind,
    chain: &Chain<R>,
    level: &SimplicialComplex,
    k: isize,
    t: isize,
) -> bool {
    let (_, bound) = kind.bound(k, t);
    let d = support_intersection_dim(chain, level);
    d < 0 || d < bound
}

/// [`support_weight_bound`] for a chain in `X` against the model's own strata.
pub fn support_weight_bound_in(m: &NCDModel, kind: SupportKind, chain: &Chain<Q>, k: isize, t: isize) -> bool {
    let (p, _) = kind.bound(k, t);
    support_weight_bound(kind, chain, &level_union(m, p), k, t)
}

/// The geometric cycle carried by column `0` of a total cycle of `A(Y)` or
/// `A(X,Y)`: the `Ỹ¹` chains pushed into `X`, or the chain of `X`.
pub fn column_zero_chain(wc: &WeightedComplex, k: isize, cycle: &[(usize, Q)]) -> Chain<Q> {
    let comp = wc.tot.component(k, 0, cycle);
    let labels = wc.a.basis(0, k);
    let mut out = Chain::zero(k.max(0) as usize);
    for (i, c) in comp {
        if let Cell::Chain(_, s) = &labels[i].cell {
            out.add_term(s.clone(), c);
        }
    }
    out
}

/// Filter on `Tot_k` accepting everything outside column `0` and, in column
/// `0`, simplices meeting `Y^p` in dimension `< bound` (or not at all).
pub fn transverse_filter(m: &NCDModel, wc: &WeightedComplex, kind: SupportKind, k: isize, t: isize) -> impl Fn(usize) -> bool {
    let (p, bound) = kind.bound(k, t);
    let level = level_union(m, p);
    let range = wc.tot.block_range(k, 0);
    let ok: Vec<bool> = wc
        .a
        .basis(0, k)
        .iter()
        .map(|l| match &l.cell {
            Cell::Chain(_, s) => {
                let d = support_intersection_dim(&Chain::from_terms(s.dim(), [(s.clone(), 1i64)]), &level);
                d < 0 || d < bound
            }
            _ => true,
        })
        .collect();
    move |i| match &range {
        Some(r) if r.contains(&i) => ok[i - r.start],
        _ => true,
    }
}

/// Every `E^∞` class of `A(Y)` or `A(X,Y)` completed from a seed made
/// transverse where possible, with the support bound evaluated on the
/// resulting column-zero cycle.
#[derive(Clone, Debug, Serialize)]
pub struct SupportCheck {
    pub s: isize,
    pub t: isize,
    pub index: usize,
    pub restricted: bool,
    pub passed: bool,
}

pub fn support_checks(m: &NCDModel, pair: Pair) -> Result<Vec<SupportCheck>> {
    let kind = match pair {
        Pair::Y => SupportKind::Y,
        Pair::XY => SupportKind::XY,
        _ => return Ok(Vec::new()),
    };
    let wc = WeightedComplex::new(pair.build(m)?)?;
    let page = wc.ss.page(None);
    let mut out = Vec::new();
    for &(s, t) in page.ranks.keys() {
        let k = s + t;
        let filter = transverse_filter(m, &wc, kind, k, t);
        let range = wc.tot.block_range(k, s).unwrap();
        let block_ok = |i: usize| filter(range.start + i);
        for (index, seed) in wc.infinity_seeds(s, t).into_iter().enumerate() {
            let seed = wc.transverse_seed(s, t, &seed, &block_ok).unwrap_or(seed);
            let c = wc.complete(s, t, &seed, Some(&filter))?;
            let chain = column_zero_chain(&wc, k, &c.cycle);
            let passed = support_weight_bound_in(m, kind, &chain, k, t);
            out.push(SupportCheck { s, t, index, restricted: c.restricted, passed });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// exact sequences

fn span_rank(vs: &[SparseVec<Q>]) -> usize {
    let mut e = Echelon::new();
    vs.iter().filter(|v| e.insert(v)).count()
}

fn same_span(a: &[SparseVec<Q>], b: &[SparseVec<Q>]) -> bool {
    let ra = span_rank(a);
    ra == span_rank(b) && ra == span_rank(&[a, b].concat())
}

fn dense_to_sparse(v: &[Q]) -> SparseVec<Q> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// A filtered complex split as `0 → S → C → Q → 0` by a subset of its basis
/// spanning a subcomplex, with the induced maps on rational homology in the
/// essential bases of the three reductions.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub sub: SpectralSequence,
    pub whole: SpectralSequence,
    pub quot: SpectralSequence,
    sub_idx: Vec<Vec<usize>>,
    quot_idx: Vec<Vec<usize>>,
}

/// Ranks and exactness of the long exact sequence in one degree:
/// `H_k(S) -f-> H_k(C) -a-> H_k(Q) -c-> H_{k-1}(S)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesDegree {
    pub k: isize,
    pub sub: usize,
    pub whole: usize,
    pub quot: usize,
    pub rank_f: usize,
    pub rank_a: usize,
    pub rank_c: usize,
    pub exact: bool,
}

impl ShortExact {
    /// `None` if the selection is not closed under the differential.
    pub fn new(cx: &FilteredComplex, in_sub: impl Fn(isize, usize) -> bool) -> Option<Self> {
        for k in cx.degrees() {
            let d = cx.differential(k);
            for j in (0..cx.dim(k)).filter(|&j| in_sub(k, j)) {
                if d.col(j).iter().any(|(i, _)| !in_sub(k - 1, *i)) {
                    return None;
                }
            }
        }
        let (s, sub_idx) = cx.restrict(&in_sub);
        let (q, quot_idx) = cx.restrict(|k, i| !in_sub(k, i));
        Some(ShortExact {
            sub: SpectralSequence::new(s),
            whole: SpectralSequence::new(cx.clone()),
            quot: SpectralSequence::new(q),
            sub_idx,
            quot_idx,
        })
    }

    fn slot(&self, k: isize) -> Option<usize> {
        let c = self.whole.complex();
        (k >= c.lowest() && k <= c.highest()).then(|| (k - c.lowest()) as usize)
    }

    fn essentials(ss: &SpectralSequence, k: isize) -> Vec<SparseVec<Q>> {
        ss.essential(k).into_iter().map(|i| ss.v(k, i).to_vec()).collect()
    }

    /// `f_k` as columns of coordinates in `H_k(C)`.
    pub fn f(&self, k: isize) -> Vec<Vec<Q>> {
        let Some(slot) = self.slot(k) else { return Vec::new() };
        Self::essentials(&self.sub, k)
            .into_iter()
            .map(|z| {
                let mut lifted: SparseVec<Q> = z.into_iter().map(|(i, c)| (self.sub_idx[slot][i], c)).collect();
                lifted.sort_by_key(|e| e.0);
                self.whole.class_coordinates(k, &lifted).expect("subcomplex cycles are cycles")
            })
            .collect()
    }

    /// `a_k` as columns of coordinates in `H_k(Q)`.
    pub fn a(&self, k: isize) -> Vec<Vec<Q>> {
        let Some(slot) = self.slot(k) else { return Vec::new() };
        let pos: BTreeMap<usize, usize> = self.quot_idx[slot].iter().enumerate().map(|(a, b)| (*b, a)).collect();
        Self::essentials(&self.whole, k)
            .into_iter()
            .map(|z| {
                let proj: SparseVec<Q> = z.into_iter().filter_map(|(i, c)| pos.get(&i).map(|p| (*p, c))).collect();
                self.quot.class_coordinates(k, &proj).expect("projections of cycles are cycles")
            })
            .collect()
    }

    /// Connecting map `c_k: H_k(Q) → H_{k-1}(S)`: lift with zero `S` part,
    /// apply `D`, read off in `S`.
    pub fn connecting(&self, k: isize) -> Vec<Vec<Q>> {
        let Some(slot) = self.slot(k) else { return Vec::new() };
        let d = self.whole.complex().differential(k);
        let below: BTreeMap<usize, usize> = if slot == 0 {
            BTreeMap::new()
        } else {
            self.sub_idx[slot - 1].iter().enumerate().map(|(a, b)| (*b, a)).collect()
        };
        Self::essentials(&self.quot, k)
            .into_iter()
            .map(|z| {
                let mut lifted: SparseVec<Q> = z.into_iter().map(|(i, c)| (self.quot_idx[slot][i], c)).collect();
                lifted.sort_by_key(|e| e.0);
                let dz = d.mul_vec(&lifted);
                let in_sub: SparseVec<Q> =
                    dz.into_iter().map(|(i, c)| (*below.get(&i).expect("boundary lands in the subcomplex"), c)).collect();
                self.sub.class_coordinates(k - 1, &in_sub).expect("boundary is a cycle of the subcomplex")
            })
            .collect()
    }

    fn rank_of(cols: &[Vec<Q>]) -> usize {
        span_rank(&cols.iter().map(|c| dense_to_sparse(c)).collect::<Vec<_>>())
    }

    fn composes_to_zero(first: &[Vec<Q>], second: &[Vec<Q>]) -> bool {
        // second ∘ first, both as column lists
        first.iter().all(|col| {
            let mut acc: Vec<Q> = second.first().map_or(Vec::new(), |c| vec![Q::zero(); c.len()]);
            for (j, x) in col.iter().enumerate() {
                if !x.is_zero() {
                    for (a, y) in acc.iter_mut().zip(&second[j]) {
                        *a += x * y;
                    }
                }
            }
            acc.iter().all(Zero::is_zero)
        })
    }

    pub fn degree(&self, k: isize) -> LesDegree {
        let (f, a, c) = (self.f(k), self.a(k), self.connecting(k));
        let f_below = self.f(k - 1);
        let c_above = self.connecting(k + 1);
        let sub = self.sub.essential(k).len();
        let whole = self.whole.essential(k).len();
        let quot = self.quot.essential(k).len();
        let (rank_f, rank_a, rank_c) = (Self::rank_of(&f), Self::rank_of(&a), Self::rank_of(&c));
        let exact = rank_f + rank_a == whole
            && rank_a + rank_c == quot
            && Self::rank_of(&c_above) + rank_f == sub
            && Self::composes_to_zero(&f, &a)
            && Self::composes_to_zero(&a, &c)
            && Self::composes_to_zero(&c, &f_below);
        LesDegree { k, sub, whole, quot, rank_f, rank_a, rank_c, exact }
    }

    pub fn degrees(&self) -> Vec<LesDegree> {
        self.whole.complex().degrees().map(|k| self.degree(k)).collect()
    }

    /// `W_ℓ H_k(C)` as coordinate vectors.
    fn w_whole(&self, k: isize, l: isize) -> Vec<SparseVec<Q>> {
        self.whole.weight_subspace(k, l).iter().map(|v| dense_to_sparse(v)).collect()
    }

    /// `W_ℓ H_k(C) = f(W_ℓ H_k(S))`.
    pub fn weight_from_sub(&self, k: isize, l: isize) -> bool {
        let f = self.f(k);
        let f_of_w: Vec<SparseVec<Q>> = self
            .sub
            .essential(k)
            .iter()
            .zip(&f)
            .filter(|(i, _)| self.sub.complex().filtration(k)[**i] - k <= l)
            .map(|(_, c)| dense_to_sparse(c))
            .collect();
        same_span(&self.w_whole(k, l), &f_of_w)
    }

    /// `W_ℓ H_k(C) = a⁻¹(W_ℓ H_k(Q))`.
    pub fn weight_from_quotient(&self, k: isize, l: isize) -> bool {
        let a = self.a(k);
        let fq = self.quot.complex().filtration(k);
        let high: Vec<usize> = self.quot.essential(k).iter().enumerate().filter(|(_, i)| fq[**i] - k > l).map(|(r, _)| r).collect();
        let n = self.whole.essential(k).len();
        let m = SparseMatrix::from_columns(
            high.len(),
            a.iter().map(|col| dense_to_sparse(&high.iter().map(|r| col[*r].clone()).collect::<Vec<_>>())).collect(),
        );
        let pre = if n == 0 { Vec::new() } else { rational_kernel(&m) };
        same_span(&self.w_whole(k, l), &pre)
    }

    /// Weights occurring anywhere in degree `k` of the three complexes.
    pub fn weight_range(&self, k: isize) -> Vec<isize> {
        let mut ws: Vec<isize> = [&self.sub, &self.whole, &self.quot]
            .iter()
            .flat_map(|ss| ss.weight_filtration(k).graded.into_keys())
            .collect();
        ws.sort_unstable();
        ws.dedup();
        ws
    }
}

/// Report of the `∂U` sequence `H_{k+1}(X,X−Y) → H_k(∂U) → H_k(Y) → H_k(X,X−Y)`
/// and its weight dichotomy, plus the truncation identities for `Y`.
#[derive(Clone, Debug, Serialize)]
pub struct LesReport {
    pub les: Vec<LesDegree>,
    /// `(k, ℓ, holds)` for `W_ℓ H_k(∂U) = f(W_ℓ H_{k+1}(X,X−Y))`, `ℓ ≤ -k-1`.
    pub from_sub: Vec<(isize, isize, bool)>,
    /// `(k, ℓ, holds)` for `W_ℓ H_k(∂U) = a⁻¹ W_ℓ H_k(Y)`, `ℓ ≥ -k`.
    pub from_quotient: Vec<(isize, isize, bool)>,
    /// Graded ranks of the subcomplex agree with `A(X,X−Y)` shifted by one.
    pub sub_matches: bool,
    /// Graded ranks of the quotient agree with `A(Y)`.
    pub quotient_matches: bool,
    pub kernels: Vec<KernelIdentity>,
}

impl LesReport {
    pub fn passed(&self) -> bool {
        self.les.iter().all(|d| d.exact)
            && self.from_sub.iter().chain(&self.from_quotient).all(|x| x.2)
            && self.sub_matches
            && self.quotient_matches
            && self.kernels.iter().all(|k| k.holds)
    }
}

fn graded(ss: &SpectralSequence, shift: isize) -> BTreeMap<(isize, isize), usize> {
    let mut out = BTreeMap::new();
    for k in ss.complex().degrees() {
        for (l, r) in ss.weight_filtration(k).graded {
            out.insert((k + shift, l), r);
        }
    }
    out
}

pub fn boundary_les(m: &NCDModel) -> Result<Option<ShortExact>> {
    let a = build_boundary_u(m)?;
    if a.is_zero() {
        return Ok(None);
    }
    let tot = a.total()?;
    let cx = FilteredComplex::from_total(&tot);
    // first-part basis elements in columns ≤ -1
    let flags: BTreeMap<isize, Vec<bool>> = tot
        .degrees()
        .map(|k| {
            let v = tot
                .blocks(k)
                .iter()
                .flat_map(|b| a.basis(b.s, b.t).iter().map(move |l| b.s <= -1 && !l.bottom))
                .collect();
            (k, v)
        })
        .collect();
    Ok(ShortExact::new(&cx, |k, i| flags[&k][i]))
}

pub fn les_and_truncation_checks(m: &NCDModel) -> Result<LesReport> {
    let kernels = (2..=m.max_level() as isize + 1).map(|p| kernel_identity(m, p)).collect::<Result<Vec<_>>>()?;
    let Some(se) = boundary_les(m)? else {
        return Ok(LesReport {
            les: Vec::new(),
            from_sub: Vec::new(),
            from_quotient: Vec::new(),
            sub_matches: true,
            quotient_matches: true,
            kernels,
        });
    };
    let mut from_sub = Vec::new();
    let mut from_quotient = Vec::new();
    for k in se.whole.complex().degrees() {
        for l in se.weight_range(k) {
            if l <= -k - 1 {
                from_sub.push((k, l, se.weight_from_sub(k, l)));
            } else {
                from_quotient.push((k, l, se.weight_from_quotient(k, l)));
            }
        }
    }
    let xxmy = WeightedComplex::new(build_x_xmy(m)?)?;
    let y = WeightedComplex::new(build_y(m)?)?;
    Ok(LesReport {
        les: se.degrees(),
        from_sub,
        from_quotient,
        sub_matches: graded(&se.sub, 1) == graded(&xxmy.ss, 0),
        quotient_matches: graded(&se.quot, 0) == graded(&y.ss, 0),
        kernels,
    })
}

/// `W_{p-2-k} H_k(Y) = ker(H_k(Y) → H_k(σ_{s≥p-1} A(Y)))` in every degree.
#[derive(Clone, Debug, Serialize)]
pub struct KernelIdentity {
    pub p: isize,
    /// `(k, rank H_k(σ_{s≥p-1}))`
    pub truncated_ranks: Vec<(isize, usize)>,
    pub holds: bool,
}

pub fn kernel_identity(m: &NCDModel, p: isize) -> Result<KernelIdentity> {
    let tot = build_y(m)?.total()?;
    let cx = FilteredComplex::from_total(&tot);
    let f: Vec<Vec<isize>> = cx.degrees().map(|k| cx.filtration(k).to_vec()).collect();
    let lo = cx.lowest();
    let Some(se) = ShortExact::new(&cx, |k, i| f[(k - lo) as usize][i] < p - 1) else {
        unreachable!("columns below a bound form a subcomplex")
    };
    let mut holds = true;
    let mut truncated_ranks = Vec::new();
    for k in cx.degrees() {
        truncated_ranks.push((k, se.quot.essential(k).len()));
        let a = se.a(k);
        let n = se.whole.essential(k).len();
        let m = SparseMatrix::from_columns(se.quot.essential(k).len(), a.iter().map(|c| dense_to_sparse(c)).collect());
        let ker = if n == 0 { Vec::new() } else { rational_kernel(&m) };
        holds &= same_span(&se.w_whole(k, p - 2 - k), &ker);
    }
    Ok(KernelIdentity { p, truncated_ranks, holds })
}

// ---------------------------------------------------------------------------
// purity

#[derive(Clone, Debug, Serialize)]
pub struct PurityItem {
    pub item: u8,
    pub k: isize,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PurityReport {
    /// Whether the model is flagged as the exceptional divisor of an isolated singularity.
    pub flagged: bool,
    /// `None` when the intersection form is non-degenerate, else the reason.
    pub precondition: Option<String>,
    pub items: Vec<PurityItem>,
}

impl PurityReport {
    fn skipped() -> Self {
        PurityReport { flagged: false, precondition: None, items: Vec::new() }
    }

    /// Applicable and every item holds.
    pub fn passed(&self) -> bool {
        self.flagged && self.precondition.is_none() && self.items.iter().all(|i| i.holds)
    }

    pub fn applicable(&self) -> bool {
        self.flagged && self.precondition.is_none()
    }
}

/// Weight data entering the purity statements, all over ℚ.
struct PurityInput {
    n: isize,
    /// `(k, ℓ) -> rank` for `∂U`, `Y` and `(X,X−Y)`.
    du: BTreeMap<(isize, isize), usize>,
    y: BTreeMap<(isize, isize), usize>,
    xxmy: BTreeMap<(isize, isize), usize>,
    /// `k -> (rank H_k(Y) → H_k(X,X−Y), dim H_k(Y), dim H_k(X,X−Y))`
    restriction: BTreeMap<isize, (usize, usize, usize)>,
    /// `E²` of `∂U` in the four-column form.
    e2: BTreeMap<(isize, isize), usize>,
}

fn purity_items(p: &PurityInput) -> Vec<PurityItem> {
    let n = p.n;
    let mut items = Vec::new();
    let ks = 0..=2 * n;
    for k in ks.clone() {
        let w = |table: &BTreeMap<(isize, isize), usize>| -> Vec<isize> {
            table.iter().filter(|((kk, _), r)| *kk == k && **r > 0).map(|((_, l), _)| *l).collect()
        };
        if k <= n - 1 {
            items.push(PurityItem { item: 1, k, holds: w(&p.du).iter().all(|l| (-k..=0).contains(l)) });
        } else {
            items.push(PurityItem { item: 2, k, holds: w(&p.du).iter().all(|l| (-2 * n..=-k - 1).contains(l)) });
        }
        let (rank, hy, hrel) = p.restriction.get(&k).copied().unwrap_or((0, 0, 0));
        if k >= n {
            let pure = w(&p.y).iter().all(|l| *l == -k);
            items.push(PurityItem { item: 3, k, holds: pure && rank == hy });
        }
        if k <= n {
            let pure = w(&p.xxmy).iter().all(|l| *l == -k);
            items.push(PurityItem { item: 4, k, holds: pure && rank == hrel });
        }
        let e2 = |s: isize| p.e2.get(&(s, k)).copied().unwrap_or(0);
        if k >= n {
            items.push(PurityItem { item: 5, k, holds: e2(0) == 0 });
        }
        if k <= n {
            items.push(PurityItem { item: 5, k, holds: e2(-1) == 0 });
        }
    }
    items
}

/// Purity statements from the four-column plumbing page.
pub fn purity_plumbing(g: &PlumbingGraph, flagged: bool) -> Result<PurityReport> {
    if !flagged {
        return Ok(PurityReport::skipped());
    }
    let precondition = (!g.is_nondegenerate()).then(|| "intersection matrix is degenerate".to_string());
    let bw = boundary_weight_ranks(g)?;
    let e = e1_boundary_from_plumbing(g);
    let m = g.num_vertices();
    let two_g = 2 * g.total_genus();
    let comps = g.num_graph_components();
    let put = |t: &mut BTreeMap<(isize, isize), usize>, k: isize, l: isize, r: usize| {
        if r > 0 {
            t.insert((k, l), r);
        }
    };
    // Y: a connected curve configuration, H_1 = graph cycles and curve genera
    let mut y = BTreeMap::new();
    put(&mut y, 0, 0, comps);
    put(&mut y, 1, 0, g.c_gamma());
    put(&mut y, 1, -1, two_g);
    put(&mut y, 2, -2, m);
    // (X,X−Y) ≅ (U,∂U): Lefschetz dual of Y
    let mut xxmy = BTreeMap::new();
    put(&mut xxmy, 2, -2, m);
    put(&mut xxmy, 3, -4, g.c_gamma());
    put(&mut xxmy, 3, -3, two_g);
    put(&mut xxmy, 4, -4, comps);
    // H_2(Y) → H_2(U,∂U) is I; the other degrees have one side zero
    let rank_i = m - g.rank_ker_i();
    let mut restriction = BTreeMap::new();
    for k in 0..=4 {
        let hy: usize = y.iter().filter(|((kk, _), _)| *kk == k).map(|(_, r)| r).sum();
        let hr: usize = xxmy.iter().filter(|((kk, _), _)| *kk == k).map(|(_, r)| r).sum();
        restriction.insert(k, (if k == 2 { rank_i } else { 0 }, hy, hr));
    }
    let input = PurityInput { n: 2, du: bw.graded, y, xxmy, restriction, e2: e.e2 };
    Ok(PurityReport { flagged, precondition, items: purity_items(&input) })
}

/// Purity statements from the simplicial weight computations. Only surfaces
/// (`n = 2`) have an intersection form to test the precondition on.
pub fn purity_ncd(m: &NCDModel) -> Result<PurityReport> {
    if !m.isolated_singularity {
        return Ok(PurityReport::skipped());
    }
    let precondition = if m.n() != 2 {
        Some(format!("intersection form only available for n = 2, got n = {}", m.n()))
    } else {
        let c = m.num_components();
        let mut rows = Vec::new();
        for a in 0..c {
            let mut row = Vec::new();
            for b in 0..c {
                row.push(Q::from_integer(intersection_number(m, a, b)?.into()));
            }
            rows.push(row);
        }
        (rational_rank(&SparseMatrix::from_dense(&rows)) < c).then(|| "intersection matrix is degenerate".to_string())
    };
    let Some(se) = boundary_les(m)? else {
        return Ok(PurityReport { flagged: true, precondition, items: Vec::new() });
    };
    let y = WeightedComplex::new(build_y(m)?)?;
    let xxmy = WeightedComplex::new(build_x_xmy(m)?)?;
    let mut restriction = BTreeMap::new();
    for k in 0..=2 * m.n() as isize {
        // H_k(Y) → H_k(X,X−Y) is the connecting map of the cone sequence
        let c = se.connecting(k);
        restriction.insert(k, (ShortExact::rank_of(&c), se.quot.essential(k).len(), se.sub.essential(k - 1).len()));
    }
    let du = WeightedComplex::new(build_boundary_u(m)?)?;
    // the two copies of X in the cone cancel on E², leaving the four-column form
    let e2 = du.ss.page(Some(2)).ranks;
    let input = PurityInput {
        n: 2,
        du: graded(&du.ss, 0),
        y: graded(&y.ss, 0),
        xxmy: graded(&xxmy.ss, 0),
        restriction,
        e2,
    };
    Ok(PurityReport { flagged: true, precondition, items: purity_items(&input) })
}
