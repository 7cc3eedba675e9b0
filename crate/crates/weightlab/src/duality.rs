//! Chain-level Poincaré duality by dual blocks on the barycentric
//! subdivision, the last-vertex map back to the original triangulation, the
//! transverse (cochain) model with its intersection operator, and transfer
//! maps on homology.
//!
//! Vertices of a subdivision are global ids of the ambient complex (see
//! [`SimplicialComplex::global_id`]), so dual blocks of every stratum live in
//! the one subdivision `X'`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{homology, ChainComplex, HomologyGroup, Ring};
use crate::linalg::{q, Echelon, SparseMatrix, SparseVec, Q};
use crate::ncd::{NCDModel, StratumId};
use crate::simplicial::{Chain, Cochain, Simplex, SimplicialComplex};

fn coface_index(s: &SimplicialComplex) -> Vec<Vec<Vec<(usize, i64)>>> {
    let d = s.dim().max(0) as usize;
    let mut cof: Vec<Vec<Vec<(usize, i64)>>> = (0..=d).map(|j| vec![Vec::new(); s.count(j)]).collect();
    for j in 1..=d {
        for (t, tau) in s.simplices(j).iter().enumerate() {
            for (inc, f) in tau.boundary_faces() {
                cof[j - 1][s.index_of(&f).unwrap()].push((t, inc));
            }
        }
    }
    cof
}

/// Dual block of every `i`-simplex of an oriented pseudomanifold `s`, as a
/// `(d-i)`-chain on the subdivision of `ambient`:
/// `pd(σ*) = η Σ o(σ_d) Π [σ_j : σ_{j-1}] (σ̂_i … σ̂_d)` over flags
/// `σ = σ_i < … < σ_d`, with `η = (-1)^{d(d+1)/2}`.
pub fn pd_columns(
    ambient: &SimplicialComplex,
    s: &SimplicialComplex,
    orientation: &[i64],
    i: usize,
) -> Result<Vec<Chain<i64>>> {
    let d = s.dim();
    if d < 0 {
        return Ok(Vec::new());
    }
    let d = d as usize;
    if orientation.len() != s.count(d) {
        return Err(Error::NotOriented(format!("{} top simplices, {} signs", s.count(d), orientation.len())));
    }
    if i > d {
        return Ok(Vec::new());
    }
    let eta = if (d * (d + 1) / 2) % 2 == 0 { 1 } else { -1 };
    let cof = coface_index(s);
    let gid = |j: usize, idx: usize| ambient.global_id(&s.simplices(j)[idx]).expect("stratum lies in the ambient complex");
    let mut out = Vec::with_capacity(s.count(i));
    for start in 0..s.count(i) {
        let mut chain = Chain::zero(d - i);
        let mut stack = vec![(i, start, 1i64, vec![gid(i, start)])];
        while let Some((j, idx, sign, path)) = stack.pop() {
            if j == d {
                chain.add_term(Simplex::from_sorted(path), eta * orientation[idx] * sign);
                continue;
            }
            for &(t, inc) in &cof[j][idx] {
                let mut p = path.clone();
                p.push(gid(j + 1, t));
                stack.push((j + 1, t, sign * inc, p));
            }
        }
        out.push(chain);
    }
    Ok(out)
}

pub fn pd_chain(
    ambient: &SimplicialComplex,
    s: &SimplicialComplex,
    orientation: &[i64],
    phi: &Cochain<i64>,
) -> Result<Chain<i64>> {
    let d = s.dim().max(0) as usize;
    let i = phi.degree();
    let cols = pd_columns(ambient, s, orientation, i)?;
    let mut out = Chain::zero(d.saturating_sub(i));
    for (sigma, v) in phi.values() {
        let j = s.index_of(sigma).ok_or_else(|| Error::Input(format!("{sigma:?} is not in the stratum")))?;
        out = out.plus(&cols[j].scaled(v));
    }
    Ok(out)
}

/// Last-vertex map `K' -> K`: the barycenter of `σ` goes to the largest
/// vertex of `σ`; degenerate simplices vanish.
pub fn last_vertex_map(ambient: &SimplicialComplex, c: &Chain<i64>) -> Chain<i64> {
    let last: Vec<usize> = ambient.all_simplices().map(|s| *s.vertices().last().unwrap()).collect();
    let mut out = Chain::zero(c.degree());
    for (s, v) in c.terms() {
        let img: Vec<usize> = s.vertices().iter().map(|g| last[*g]).collect();
        if img.windows(2).all(|w| w[0] < w[1]) {
            out.add_term(Simplex::from_sorted(img), *v);
        }
    }
    out
}

/// `ρ ∘ pd: C^i(S) -> C_{d-i}(S)` in the simplex bases of `S`.
pub fn rho_pd_matrix(s: &SimplicialComplex, orientation: &[i64], i: usize) -> Result<SparseMatrix<i64>> {
    let d = s.dim().max(0) as usize;
    let cols = pd_columns(s, s, orientation, i)?;
    let k = d.saturating_sub(i);
    Ok(SparseMatrix::from_columns(
        s.count(k),
        cols.iter().map(|c| last_vertex_map(s, c).to_vec(s)).collect(),
    ))
}

/// The `pd` matrix `C^i(S) -> C_{d-i}(S')`, rows in the basis of `sd`
/// (the subdivision of `S` labelled by global ids of `ambient`).
pub fn pd_matrix(
    ambient: &SimplicialComplex,
    sd: &SimplicialComplex,
    s: &SimplicialComplex,
    orientation: &[i64],
    i: usize,
) -> Result<SparseMatrix<i64>> {
    let d = s.dim().max(0) as usize;
    let cols = pd_columns(ambient, s, orientation, i)?;
    Ok(SparseMatrix::from_columns(sd.count(d.saturating_sub(i)), cols.iter().map(|c| c.to_vec(sd)).collect()))
}

/// Solve `pd φ = c` for a chain in the image of `pd`.
pub fn pd_inverse(
    ambient: &SimplicialComplex,
    sd: &SimplicialComplex,
    s: &SimplicialComplex,
    orientation: &[i64],
    c: &Chain<i64>,
) -> Result<Option<Cochain<i64>>> {
    let d = s.dim().max(0) as usize;
    if c.degree() > d {
        return Ok(None);
    }
    let i = d - c.degree();
    let m = pd_matrix(ambient, sd, s, orientation, i)?.to_rational();
    let mut e = Echelon::new();
    for col in m.columns() {
        e.insert(col);
    }
    let target: SparseVec<Q> = c.to_vec(sd).into_iter().map(|(i, v)| (i, q(v))).collect();
    let Some(combo) = e.solve(&target) else { return Ok(None) };
    // columns of a pd matrix have disjoint supports, so insertion order is column order
    let mut vals = Vec::new();
    for (j, v) in combo {
        if !v.is_integer() {
            return Ok(None);
        }
        vals.push((s.simplices(i)[j].clone(), crate::linalg::bigint_to_i64(&v.to_integer()).ok_or(Error::Overflow)?));
    }
    Ok(Some(Cochain::from_values(i, vals)))
}

/// Subdivision of a subcomplex, with vertices labelled by global ids of `ambient`.
pub fn subdivision_in(ambient: &SimplicialComplex, s: &SimplicialComplex) -> SimplicialComplex {
    if s.is_empty() {
        return SimplicialComplex::empty();
    }
    let (sd, map) = s.barycentric_subdivide();
    let relabel: Vec<usize> = map.barycenter_of.iter().map(|b| ambient.global_id(b).expect("subcomplex")).collect();
    SimplicialComplex::from_closed_set(
        sd.all_simplices()
            .map(|t| {
                let mut v: Vec<usize> = t.vertices().iter().map(|g| relabel[*g]).collect();
                v.sort_unstable();
                Simplex::from_sorted(v)
            })
            .collect::<BTreeSet<_>>(),
    )
}

/// Alexander–Whitney cap `φ ⌢ σ = φ(v_0…v_i) [v_i…v_m]`.
pub fn aw_cap(phi: &Cochain<i64>, c: &Chain<i64>) -> Chain<i64> {
    let i = phi.degree();
    let m = c.degree();
    let mut out = Chain::zero(m.saturating_sub(i));
    if i > m {
        return out;
    }
    for (s, v) in c.terms() {
        let front = Simplex::from_sorted(s.vertices()[..=i].to_vec());
        let a = phi.value(&front);
        if a != 0 {
            out.add_term(Simplex::from_sorted(s.vertices()[i..].to_vec()), a * v);
        }
    }
    out
}

/// Restriction `C^i(S) -> C^i(S ∩ Y_α)`: in transverse degrees this is
/// `∩: C^⊥_k(S) -> C^⊥_{k-2}(S ∩ Y_α)` with `k = dim S - i`.
pub fn cap_operator(m: &NCDModel, id: &StratumId, alpha: usize, k: usize) -> SparseMatrix<i64> {
    let s = m.stratum(id);
    let d = s.dim().max(0) as usize;
    let Some((tid, _)) = id.with(alpha) else {
        return SparseMatrix::zeros(0, 0);
    };
    let t = m.stratum(&tid);
    if k > d {
        return SparseMatrix::zeros(0, 0);
    }
    let i = d - k;
    let cols = s
        .simplices(i)
        .iter()
        .map(|sigma| t.index_of(sigma).map(|r| vec![(r, 1)]).unwrap_or_default())
        .collect();
    SparseMatrix::from_columns(t.count(i), cols)
}

/// Transfer `i_!: H_k(S) -> H_{k-2}(S ∩ Y_α)` on free parts, in the
/// generator bases of [`homology`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferMap {
    pub source: StratumId,
    pub target: StratumId,
    pub degree: usize,
    /// `target rank × source rank`, row-major.
    pub matrix: Vec<Vec<i64>>,
}

struct DualityData {
    chain: HomologyGroup,
    cochain: HomologyGroup,
    /// Column `j`: coordinates of `[ρ pd g_j]` for cohomology generator `g_j`.
    rho_pd: Vec<Vec<i64>>,
}

fn duality_data(s: &SimplicialComplex, orientation: &[i64], k: usize) -> Result<DualityData> {
    let d = s.dim().max(0) as usize;
    let chain = homology(&ChainComplex::of_complex(s), k as isize, Ring::Integer)?;
    let cochain = homology(&ChainComplex::cochains_regraded(s, d), k as isize, Ring::Integer)?;
    let m = rho_pd_matrix(s, orientation, d - k)?;
    let rho_pd = cochain.generators.iter().map(|g| chain.coordinates(&m.mul_vec(g))).collect::<Result<_>>()?;
    Ok(DualityData { chain, cochain, rho_pd })
}

fn restrict_vec(s: &SimplicialComplex, t: &SimplicialComplex, i: usize, v: &[(usize, i64)]) -> SparseVec<i64> {
    let mut out: SparseVec<i64> =
        v.iter().filter_map(|(j, x)| t.index_of(&s.simplices(i)[*j]).map(|r| (r, *x))).collect();
    out.sort_unstable();
    out
}

pub fn transfer(m: &NCDModel, id: &StratumId, alpha: usize, k: usize) -> Result<TransferMap> {
    let source = m.get(id).ok_or_else(|| Error::NotOriented(format!("{id:?} (empty)")))?;
    let tid = id.with(alpha).map(|(t, _)| t).ok_or_else(|| Error::Input(format!("{alpha} already in {id:?}")))?;
    let d = source.dim();
    let hs = duality_data(&source.complex, &source.orientation, k)?;
    let zero = |rows: usize| TransferMap { source: id.clone(), target: tid.clone(), degree: k, matrix: vec![vec![0; hs.chain.rank]; rows] };
    let Some(target) = m.get(&tid) else { return Ok(zero(0)) };
    if k < 2 || k - 2 > target.dim() || k > d {
        return Ok(zero(0));
    }
    let ht = duality_data(&target.complex, &target.orientation, k - 2)?;
    let i = d - k;
    let rpd_t = rho_pd_matrix(&target.complex, &target.orientation, i)?;
    // images of source cohomology generators, in target homology coordinates
    let images: Vec<Vec<i64>> = hs
        .cochain
        .generators
        .iter()
        .map(|g| ht.chain.coordinates(&rpd_t.mul_vec(&restrict_vec(&source.complex, &target.complex, i, g))))
        .collect::<Result<_>>()?;
    let mut e = Echelon::new();
    for col in &hs.rho_pd {
        let v: SparseVec<Q> = col.iter().enumerate().filter(|(_, x)| **x != 0).map(|(r, x)| (r, q(*x))).collect();
        if !e.insert(&v) {
            return Err(Error::NotOriented(format!("pd is not an isomorphism on {id:?}")));
        }
    }
    let mut matrix = vec![vec![0i64; hs.chain.rank]; ht.chain.rank];
    for j in 0..hs.chain.rank {
        let combo = e.solve(&[(j, q(1))]).expect("pd is onto");
        for (c, a) in combo {
            for (r, row) in matrix.iter_mut().enumerate() {
                let x = a.clone() * q(images[c][r]);
                if !x.is_integer() {
                    return Err(Error::NotOriented(format!("pd is not unimodular on {id:?}")));
                }
                row[j] += crate::linalg::bigint_to_i64(&x.to_integer()).ok_or(Error::Overflow)?;
            }
        }
    }
    Ok(TransferMap { source: id.clone(), target: tid, degree: k, matrix })
}

/// One cochain degree of a Gysin square check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GysinDegree {
    pub cochain_degree: usize,
    /// `∂ pd = pd δ` on both strata.
    pub chain_identity: bool,
    /// `pd(i*φ)` is supported in `|pd φ| ∩ (S ∩ Y_α)'`.
    pub support: bool,
    /// `ρ pd` and the cap with the fundamental cycle agree on homology up to a
    /// sign per stratum and degree, and the square commutes with that sign.
    pub square: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GysinReport {
    pub source: StratumId,
    pub alpha: usize,
    pub degrees: Vec<GysinDegree>,
}

impl GysinReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.chain_identity && d.support && d.square)
    }
}

/// Sign `ε` with `a_j = ε b_j` for all `j`, if one exists.
fn common_sign(a: &[Vec<i64>], b: &[Vec<i64>]) -> Option<i64> {
    let mut eps = None;
    for (x, y) in a.iter().zip(b) {
        for (u, v) in x.iter().zip(y) {
            let e = match (*u, *v) {
                (0, 0) => continue,
                (u, v) if u == v => 1,
                (u, v) if u == -v => -1,
                _ => return None,
            };
            if *eps.get_or_insert(e) != e {
                return None;
            }
        }
    }
    Some(eps.unwrap_or(1))
}

/// `∂ pd = pd δ` as a matrix identity in cochain degree `i`.
pub fn pd_chain_identity(ambient: &SimplicialComplex, s: &SimplicialComplex, orientation: &[i64], i: usize) -> Result<bool> {
    let d = s.dim().max(0) as usize;
    let sd = subdivision_in(ambient, s);
    let pd_i = pd_matrix(ambient, &sd, s, orientation, i)?;
    let lhs = sd.boundary(d - i).mul(&pd_i);
    let rhs = if i + 1 <= d {
        pd_matrix(ambient, &sd, s, orientation, i + 1)?.mul(&s.coboundary(i))
    } else {
        SparseMatrix::zeros(lhs.nrows(), lhs.ncols())
    };
    Ok(lhs == rhs)
}

pub fn gysin_square_check(m: &NCDModel, id: &StratumId, alpha: usize) -> Result<GysinReport> {
    let mut report = GysinReport { source: id.clone(), alpha, degrees: Vec::new() };
    let (Some(source), Some((tid, _))) = (m.get(id), id.with(alpha)) else { return Ok(report) };
    let Some(target) = m.get(&tid) else { return Ok(report) };
    let x = m.x();
    let (s, t) = (&source.complex, &target.complex);
    let (ds, dt) = (source.dim(), target.dim());
    let fs = source.fundamental_cycle();
    let ft = target.fundamental_cycle();
    let t_sd = subdivision_in(x, t);
    for i in 0..=dt {
        let chain_identity = pd_chain_identity(x, s, &source.orientation, i)? && pd_chain_identity(x, t, &target.orientation, i)?;
        let hs = duality_data(s, &source.orientation, ds - i)?;
        let ht = duality_data(t, &target.orientation, dt - i)?;
        let mut support = true;
        let mut aw_s = Vec::new();
        let mut rpd_r = Vec::new();
        let mut aw_r = Vec::new();
        for g in &hs.cochain.generators {
            let phi = Cochain::from_vec(s, i, g);
            let r = phi.restrict(t);
            let pd_s = pd_chain(x, s, &source.orientation, &phi)?;
            let pd_t = pd_chain(x, t, &target.orientation, &r)?;
            let host = pd_s.support().intersection(&t_sd);
            support &= pd_t.lies_in(&host);
            aw_s.push(hs.chain.coordinates(&aw_cap(&phi, &fs).to_vec(s))?);
            rpd_r.push(ht.chain.coordinates(&last_vertex_map(x, &pd_t).to_vec(t))?);
            aw_r.push(ht.chain.coordinates(&aw_cap(&r, &ft).to_vec(t))?);
        }
        let aw_t: Vec<Vec<i64>> = ht
            .cochain
            .generators
            .iter()
            .map(|g| ht.chain.coordinates(&aw_cap(&Cochain::from_vec(t, i, g), &ft).to_vec(t)))
            .collect::<Result<_>>()?;
        let square = common_sign(&hs.rho_pd, &aw_s).is_some()
            && common_sign(&ht.rho_pd, &aw_t).and_then(|e| common_sign(&rpd_r, &aw_r).filter(|f| *f == e)).is_some();
        report.degrees.push(GysinDegree { cochain_degree: i, chain_identity, support, square });
    }
    Ok(report)
}

/// Mapping from the stratum's chains to `X` used when pushing classes forward.
pub fn inclusion_matrix(from: &SimplicialComplex, to: &SimplicialComplex, k: usize) -> SparseMatrix<i64> {
    let cols = from.simplices(k).iter().map(|s| vec![(to.index_of(s).expect("subcomplex"), 1)]).collect();
    SparseMatrix::from_columns(to.count(k), cols)
}

/// Intersection number of two 2-dimensional strata of a 4-dimensional `X`:
/// `[Y_β] ∈ H_2(X)` transferred to `H_0(Y_α)` and summed.
pub fn intersection_number(m: &NCDModel, alpha: usize, beta: usize) -> Result<i64> {
    let x = m.x();
    let yb = m.get(&StratumId::single(beta)).ok_or_else(|| Error::Input(format!("component {beta} is empty")))?;
    let hx = homology(&ChainComplex::of_complex(x), 2, Ring::Integer)?;
    let push = inclusion_matrix(&yb.complex, x, 2).mul_vec(&yb.fundamental_cycle().to_vec(&yb.complex));
    let coords = hx.coordinates(&push)?;
    let tr = transfer(m, &StratumId::ambient(), alpha, 2)?;
    // H_0 of a connected surface has one generator, a vertex with coefficient one
    let h0 = homology(&ChainComplex::of_complex(&m.stratum(&StratumId::single(alpha))), 0, Ring::Integer)?;
    let mut total = 0i64;
    for (r, row) in tr.matrix.iter().enumerate() {
        let c: i64 = row.iter().zip(&coords).map(|(a, b)| a * b).sum();
        let weight: i64 = h0.generators[r].iter().map(|(_, v)| v).sum();
        total += c * weight;
    }
    Ok(total)
}
