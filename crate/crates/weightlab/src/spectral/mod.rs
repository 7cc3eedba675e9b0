//! Spectral sequences of filtered complexes over ℚ by persistence reduction,
//! weight filtrations on homology and explicit cycle completion.
//!
//! The total complex is reduced column by column (`R = D·V`, `V` unitriangular)
//! in a basis ordered by filtration. A pair `(i, j)` with `low(R_j) = i` and
//! gap `g = s(j) - s(i)` contributes to the pages `E^r` for `r ≤ g` and is
//! killed by `d^g`; unpaired cycles survive to `E^∞`.

pub mod checks;
pub mod complete;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::double_complex::{DoubleComplex, TotalComplex};
use crate::error::Result;
use crate::homology::homology_ranks;
use crate::linalg::{axpy, Echelon, SparseMatrix, SparseVec, Q};

pub use complete::Completion;

/// A finite complex over ℚ with a filtration index on every basis element,
/// non-decreasing along the basis of each degree.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    lowest: isize,
    filt: Vec<Vec<isize>>,
    d: Vec<SparseMatrix<Q>>,
}

impl FilteredComplex {
    pub fn new(lowest: isize, filt: Vec<Vec<isize>>, d: Vec<SparseMatrix<Q>>) -> Self {
        assert_eq!(filt.len(), d.len());
        for f in &filt {
            assert!(f.windows(2).all(|w| w[0] <= w[1]), "basis must be ordered by filtration");
        }
        FilteredComplex { lowest, filt, d }
    }

    pub fn from_total(t: &TotalComplex) -> Self {
        let ks: Vec<isize> = t.degrees().collect();
        FilteredComplex {
            lowest: t.lowest(),
            filt: ks.iter().map(|&k| t.filtration(k)).collect(),
            d: ks.iter().map(|&k| t.differential_matrix(k).to_rational()).collect(),
        }
    }

    pub fn lowest(&self) -> isize {
        self.lowest
    }

    pub fn highest(&self) -> isize {
        self.lowest + self.filt.len() as isize - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<isize> {
        self.lowest..=self.highest()
    }

    fn slot(&self, k: isize) -> Option<usize> {
        (k >= self.lowest && k <= self.highest()).then(|| (k - self.lowest) as usize)
    }

    pub fn dim(&self, k: isize) -> usize {
        self.slot(k).map_or(0, |i| self.filt[i].len())
    }

    pub fn filtration(&self, k: isize) -> &[isize] {
        self.slot(k).map_or(&[], |i| &self.filt[i])
    }

    pub fn differential(&self, k: isize) -> SparseMatrix<Q> {
        self.slot(k).map_or_else(|| SparseMatrix::zeros(self.dim(k - 1), self.dim(k)), |i| self.d[i].clone())
    }

    /// The subquotient on the basis elements selected by `keep(k, index)`;
    /// also returns the kept indices per degree. Meaningful when the
    /// selection spans a subcomplex or the complement does.
    pub fn restrict(&self, keep: impl Fn(isize, usize) -> bool) -> (FilteredComplex, Vec<Vec<usize>>) {
        let kept: Vec<Vec<usize>> = self.degrees().map(|k| (0..self.dim(k)).filter(|&i| keep(k, i)).collect()).collect();
        let mut d = Vec::new();
        let mut filt = Vec::new();
        for slot in 0..self.filt.len() {
            let rows: Vec<usize> = if slot == 0 { Vec::new() } else { kept[slot - 1].clone() };
            d.push(self.d[slot].submatrix(&rows, &kept[slot]));
            filt.push(kept[slot].iter().map(|&i| self.filt[slot][i]).collect());
        }
        (FilteredComplex { lowest: self.lowest, filt, d }, kept)
    }
}

/// How a basis element of `Tot_k` enters the reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Role {
    /// `V_i` is a cycle that never becomes a boundary.
    Essential,
    /// `V_i` is a cycle; `R_death` (degree `k+1`) has low `i`.
    Birth { death: usize, gap: isize },
    /// `R_j ≠ 0` with low `birth` in degree `k-1`.
    Death { birth: usize, gap: isize },
}

#[derive(Clone, Debug)]
pub struct SpectralSequence {
    cx: FilteredComplex,
    v: Vec<Vec<SparseVec<Q>>>,
    r: Vec<Vec<SparseVec<Q>>>,
    roles: Vec<Vec<Role>>,
}

/// Ranks of one page, keyed by `(s, t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Page {
    /// `None` for `E^∞`.
    pub r: Option<usize>,
    pub ranks: BTreeMap<(isize, isize), usize>,
}

impl Page {
    pub fn rank(&self, s: isize, t: isize) -> usize {
        self.ranks.get(&(s, t)).copied().unwrap_or(0)
    }
}

/// The weight filtration on `H_k` over ℚ with essential cycle representatives.
#[derive(Clone, Debug)]
pub struct WeightFiltration {
    pub degree: isize,
    /// `(weight, cycle)` for a basis of `H_k ⊗ ℚ`, sorted by weight.
    pub basis: Vec<(isize, SparseVec<Q>)>,
    /// `ℓ ↦ rank Gr^W_ℓ H_k`.
    pub graded: BTreeMap<isize, usize>,
}

impl WeightFiltration {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn rank_at_most(&self, l: isize) -> usize {
        self.basis.iter().filter(|(w, _)| *w <= l).count()
    }
}

fn low(v: &[(usize, Q)]) -> Option<usize> {
    v.last().map(|e| e.0)
}

impl SpectralSequence {
    pub fn new(cx: FilteredComplex) -> Self {
        let mut v = Vec::new();
        let mut r = Vec::new();
        for k in cx.degrees() {
            let d = cx.differential(k);
            let mut vk: Vec<SparseVec<Q>> = Vec::with_capacity(d.ncols());
            let mut rk: Vec<SparseVec<Q>> = Vec::with_capacity(d.ncols());
            let mut by_low: HashMap<usize, usize> = HashMap::new();
            for j in 0..d.ncols() {
                let mut col = d.col(j).to_vec();
                let mut vj: SparseVec<Q> = vec![(j, Q::from_integer(1.into()))];
                while let Some(l) = low(&col) {
                    let Some(&p) = by_low.get(&l) else { break };
                    let c = col.last().unwrap().1.clone() / rk[p].last().unwrap().1.clone();
                    col = axpy(&col, &-c.clone(), &rk[p]);
                    vj = axpy(&vj, &-c, &vk[p]);
                }
                if let Some(l) = low(&col) {
                    by_low.insert(l, j);
                }
                vk.push(vj);
                rk.push(col);
            }
            v.push(vk);
            r.push(rk);
        }
        let mut roles: Vec<Vec<Role>> = cx.degrees().map(|k| vec![Role::Essential; cx.dim(k)]).collect();
        for (slot, k) in cx.degrees().enumerate() {
            for (j, col) in r[slot].iter().enumerate() {
                if let Some(i) = low(col) {
                    let gap = cx.filtration(k)[j] - cx.filtration(k - 1)[i];
                    roles[slot][j] = Role::Death { birth: i, gap };
                    roles[slot - 1][i] = Role::Birth { death: j, gap };
                }
            }
        }
        SpectralSequence { cx, v, r, roles }
    }

    pub fn of_double_complex(a: &DoubleComplex) -> Result<(TotalComplex, SpectralSequence)> {
        let tot = a.total()?;
        let ss = SpectralSequence::new(FilteredComplex::from_total(&tot));
        Ok((tot, ss))
    }

    pub fn complex(&self) -> &FilteredComplex {
        &self.cx
    }

    pub fn roles(&self, k: isize) -> &[Role] {
        self.cx.slot(k).map_or(&[], |i| &self.roles[i])
    }

    /// `V_j` in degree `k`.
    pub fn v(&self, k: isize, j: usize) -> &[(usize, Q)] {
        &self.v[self.cx.slot(k).unwrap()][j]
    }

    /// `R_j = D V_j`, a vector of degree `k-1`.
    pub fn r(&self, k: isize, j: usize) -> &[(usize, Q)] {
        &self.r[self.cx.slot(k).unwrap()][j]
    }

    /// Largest gap of any pair; `d^r = 0` for all larger `r`.
    pub fn max_gap(&self) -> isize {
        self.roles.iter().flatten().filter_map(|r| if let Role::Death { gap, .. } = r { Some(*gap) } else { None }).max().unwrap_or(0)
    }

    fn alive(role: Role, r: Option<usize>) -> bool {
        match (role, r) {
            (Role::Essential, _) => true,
            (_, None) => false,
            (Role::Birth { gap, .. } | Role::Death { gap, .. }, Some(r)) => gap >= r as isize,
        }
    }

    /// Indices in `Tot_{s+t}` spanning `E^r_{s,t}` (`r = None` for `E^∞`),
    /// with cycle representatives in `W_s`.
    pub fn generators(&self, r: Option<usize>, s: isize, t: isize) -> Vec<(usize, SparseVec<Q>)> {
        let k = s + t;
        let Some(slot) = self.cx.slot(k) else { return Vec::new() };
        let f = &self.cx.filt[slot];
        (0..f.len())
            .filter(|&i| f[i] == s && Self::alive(self.roles[slot][i], r))
            .map(|i| {
                let rep = match self.roles[slot][i] {
                    Role::Birth { death, .. } => self.r[slot + 1][death].clone(),
                    _ => self.v[slot][i].clone(),
                };
                (i, rep)
            })
            .collect()
    }

    pub fn page(&self, r: Option<usize>) -> Page {
        let mut ranks = BTreeMap::new();
        for (slot, k) in self.cx.degrees().enumerate() {
            for (i, s) in self.cx.filt[slot].iter().enumerate() {
                if Self::alive(self.roles[slot][i], r) {
                    *ranks.entry((*s, k - s)).or_insert(0) += 1;
                }
            }
        }
        Page { r, ranks }
    }

    /// `d^r: E^r_{s,t} -> E^r_{s-r,t+r-1}` in the bases of [`Self::generators`].
    pub fn differential(&self, r: usize, s: isize, t: isize) -> SparseMatrix<Q> {
        let src = self.generators(Some(r), s, t);
        let tgt = self.generators(Some(r), s - r as isize, t + r as isize - 1);
        let slot = self.cx.slot(s + t);
        let mut entries = Vec::new();
        for (col, (j, _)) in src.iter().enumerate() {
            if let Role::Death { birth, gap } = self.roles[slot.unwrap()][*j] {
                if gap == r as isize {
                    let row = tgt.iter().position(|(i, _)| *i == birth).expect("birth survives to the same page");
                    entries.push((row, col, Q::from_integer(1.into())));
                }
            }
        }
        SparseMatrix::from_triplets(tgt.len(), src.len(), entries)
    }

    /// Whether `d^r = 0` for every `r ≥ r0`.
    pub fn degenerates_at(&self, r0: usize) -> bool {
        self.max_gap() < r0 as isize
    }

    /// A bidegree `(r, s, t)` with `d^r ≠ 0` at `(s,t)` and `r ≥ r0`, if any.
    pub fn nonzero_differential(&self, r0: usize) -> Option<(usize, isize, isize)> {
        for (slot, k) in self.cx.degrees().enumerate() {
            for (j, role) in self.roles[slot].iter().enumerate() {
                if let Role::Death { gap, .. } = role {
                    if *gap >= r0 as isize {
                        let s = self.cx.filt[slot][j];
                        return Some((*gap as usize, s, k - s));
                    }
                }
            }
        }
        None
    }

    /// Weight filtration on `H_k`: an essential class born in column `s` has weight `s - k`.
    pub fn weight_filtration(&self, k: isize) -> WeightFiltration {
        let mut basis: Vec<(isize, SparseVec<Q>)> = match self.cx.slot(k) {
            None => Vec::new(),
            Some(slot) => (0..self.cx.filt[slot].len())
                .filter(|&i| self.roles[slot][i] == Role::Essential)
                .map(|i| (self.cx.filt[slot][i] - k, self.v[slot][i].clone()))
                .collect(),
        };
        basis.sort_by_key(|b| b.0);
        let mut graded = BTreeMap::new();
        for (w, _) in &basis {
            *graded.entry(*w).or_insert(0) += 1;
        }
        WeightFiltration { degree: k, basis, graded }
    }

    /// Essential indices of `Tot_k` in index order; class coordinates refer to these.
    pub fn essential(&self, k: isize) -> Vec<usize> {
        self.roles(k).iter().enumerate().filter(|(_, r)| **r == Role::Essential).map(|(i, _)| i).collect()
    }

    /// Coordinates of the class of a cycle on the essential basis
    /// ([`Self::essential`]); `None` if `z` is not a cycle.
    pub fn class_coordinates(&self, k: isize, z: &[(usize, Q)]) -> Option<Vec<Q>> {
        let Some(slot) = self.cx.slot(k) else { return z.is_empty().then(Vec::new) };
        let ess = self.essential(k);
        let mut coords = vec![Q::from_integer(0.into()); ess.len()];
        let mut z = z.to_vec();
        while let Some((p, val)) = z.last().cloned() {
            match self.roles[slot][p] {
                Role::Birth { death, .. } => {
                    let rj = &self.r[slot + 1][death];
                    let c = val / rj.last().unwrap().1.clone();
                    z = axpy(&z, &-c, rj);
                }
                Role::Essential => {
                    let vi = &self.v[slot][p];
                    let c = val / vi.last().unwrap().1.clone();
                    z = axpy(&z, &-c.clone(), vi);
                    coords[ess.binary_search(&p).unwrap()] = c;
                }
                Role::Death { .. } => return None,
            }
        }
        Some(coords)
    }

    /// Weight of a class given by coordinates: the largest weight with a
    /// nonzero coordinate, `None` for the zero class.
    pub fn weight_of(&self, k: isize, coords: &[Q]) -> Option<isize> {
        let f = self.cx.filtration(k);
        self.essential(k).iter().zip(coords).filter(|(_, c)| !num_traits::Zero::is_zero(*c)).map(|(i, _)| f[*i] - k).max()
    }

    /// `W_ℓ H_k` as a set of coordinate vectors on the essential basis.
    pub fn weight_subspace(&self, k: isize, l: isize) -> Vec<Vec<Q>> {
        let f = self.cx.filtration(k);
        let ess = self.essential(k);
        (0..ess.len())
            .filter(|&a| f[ess[a]] - k <= l)
            .map(|a| (0..ess.len()).map(|b| Q::from_integer(((a == b) as i64).into())).collect())
            .collect()
    }

    /// Rational Betti numbers per degree.
    pub fn betti(&self) -> Vec<(isize, usize)> {
        self.cx.degrees().map(|k| (k, self.essential(k).len())).collect()
    }
}

/// A double complex with its total complex and spectral sequence.
#[derive(Clone, Debug)]
pub struct WeightedComplex {
    pub a: DoubleComplex,
    pub tot: TotalComplex,
    pub ss: SpectralSequence,
}

impl WeightedComplex {
    pub fn new(a: DoubleComplex) -> Result<Self> {
        let (tot, ss) = SpectralSequence::of_double_complex(&a)?;
        Ok(WeightedComplex { a, tot, ss })
    }

    /// Leading `A_{s,t}` components of the essential cycles born in column `s`:
    /// seeds whose completions span `E^∞_{s,t}`.
    pub fn infinity_seeds(&self, s: isize, t: isize) -> Vec<SparseVec<Q>> {
        self.ss
            .generators(None, s, t)
            .into_iter()
            .map(|(_, z)| self.tot.component(s + t, s, &z))
            .collect()
    }
}

/// Integer homology ranks and torsion of a total complex.
pub fn integral_homology(tot: &TotalComplex) -> Result<BTreeMap<isize, (usize, Vec<i64>)>> {
    Ok(homology_ranks(&tot.chain_complex())?.into_iter().map(|h| (h.degree, (h.rank, h.torsion))).collect())
}

/// Membership of `v` in the span of `gens`.
pub fn in_span(gens: &[SparseVec<Q>], v: &[(usize, Q)]) -> bool {
    let mut e = Echelon::new();
    for g in gens {
        e.insert(g);
    }
    e.contains(v)
}
