//! Homology of finite free chain complexes over the integers and rationals,
//! with generator cycles, coordinates and induced maps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{integer_rank_and_torsion, smith_normal_form, SparseMatrix, SparseVec, ZMat};
use crate::simplicial::SimplicialComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ring {
    Integer,
    Rational,
}

/// A bounded chain complex of free abelian groups with integer boundary maps.
/// Degrees may be negative.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    lowest: isize,
    dims: Vec<usize>,
    /// `d[i]: C_{lowest+i} -> C_{lowest+i-1}`
    d: Vec<SparseMatrix<i64>>,
}

impl ChainComplex {
    /// `boundaries[i]` maps degree `lowest + i` to `lowest + i - 1`; the
    /// first one must have zero rows.
    pub fn new(lowest: isize, dims: Vec<usize>, boundaries: Vec<SparseMatrix<i64>>) -> Result<Self> {
        assert_eq!(dims.len(), boundaries.len(), "one boundary map per degree");
        for (i, m) in boundaries.iter().enumerate() {
            let below = if i == 0 { 0 } else { dims[i - 1] };
            assert_eq!((m.nrows(), m.ncols()), (below, dims[i]), "boundary shape in degree {}", lowest + i as isize);
        }
        let c = ChainComplex { lowest, dims, d: boundaries };
        for i in 1..c.dims.len() {
            if !c.d[i - 1].mul(&c.d[i]).is_zero() {
                return Err(Error::NotAComplex((lowest + i as isize).max(0) as usize));
            }
        }
        Ok(c)
    }

    pub fn empty() -> Self {
        ChainComplex { lowest: 0, dims: Vec::new(), d: Vec::new() }
    }

    /// Simplicial chains of a complex.
    pub fn of_complex(k: &SimplicialComplex) -> Self {
        let top = k.dim();
        if top < 0 {
            return Self::empty();
        }
        let dims = (0..=top as usize).map(|i| k.count(i)).collect();
        let d = (0..=top as usize).map(|i| k.boundary(i)).collect();
        ChainComplex { lowest: 0, dims, d }
    }

    /// Relative chains `C(K)/C(L)` in the basis of simplices of `K` not in `L`.
    pub fn relative(k: &SimplicialComplex, l: &SimplicialComplex) -> Self {
        let top = k.dim();
        if top < 0 {
            return Self::empty();
        }
        let keep: Vec<Vec<usize>> = (0..=top as usize)
            .map(|i| (0..k.count(i)).filter(|&j| !l.contains(&k.simplices(i)[j])).collect())
            .collect();
        let dims = keep.iter().map(Vec::len).collect();
        let d = (0..=top as usize)
            .map(|i| {
                let rows: Vec<usize> = if i == 0 { Vec::new() } else { keep[i - 1].clone() };
                let full = k.boundary(i);
                full.submatrix(&rows, &keep[i])
            })
            .collect();
        ChainComplex { lowest: 0, dims, d }
    }

    /// Simplicial cochains regraded so that `C^i` sits in degree `d - i`,
    /// with the coboundary as differential.
    pub fn cochains_regraded(k: &SimplicialComplex, d: usize) -> Self {
        let top = k.dim();
        if top < 0 {
            return Self::empty();
        }
        let top = top as usize;
        // degrees d - top ..= d
        let lowest = d as isize - top as isize;
        let dims = (0..=top).map(|j| k.count(top - j)).collect();
        let ds = (0..=top)
            .map(|j| {
                let i = top - j; // cochain degree of this slot
                if j == 0 {
                    SparseMatrix::zeros(0, k.count(i))
                } else {
                    k.coboundary(i)
                }
            })
            .collect();
        ChainComplex { lowest, dims, d: ds }
    }

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

    /// Boundary `C_k -> C_{k-1}`, correctly shaped even outside the range.
    pub fn boundary(&self, k: isize) -> SparseMatrix<i64> {
        if k < self.lowest || k > self.highest() {
            return SparseMatrix::zeros(self.dim(k - 1), self.dim(k));
        }
        self.d[(k - self.lowest) as usize].clone()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|k| if k.rem_euclid(2) == 0 { self.dim(k) as i64 } else { -(self.dim(k) as i64) }).sum()
    }
}

/// Homology in one degree, with explicit generators and a coordinate map.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub degree: isize,
    pub ring: Ring,
    pub rank: usize,
    /// Invariant factors `>= 2`, successively dividing (integer ring only).
    pub torsion: Vec<i64>,
    /// Cycles projecting to a basis of the free part.
    pub generators: Vec<SparseVec<i64>>,
    /// Cycles generating the torsion summands, with their orders.
    pub torsion_generators: Vec<(SparseVec<i64>, i64)>,
    coord_map: ZMat,
    image_rank: usize,
    diag: Vec<i64>,
}

impl HomologyGroup {
    /// Free-part coordinates of a cycle.
    pub fn coordinates(&self, z: &[(usize, i64)]) -> Result<Vec<i64>> {
        let y = self.kernel_coordinates(z)?;
        y[self.image_rank..].iter().map(|v| i64::try_from(*v).map_err(|_| Error::Overflow)).collect()
    }

    /// Torsion coordinates of a cycle, each reduced modulo its order.
    pub fn torsion_coordinates(&self, z: &[(usize, i64)]) -> Result<Vec<i64>> {
        let y = self.kernel_coordinates(z)?;
        Ok((0..self.image_rank)
            .filter(|&i| self.diag[i] > 1)
            .map(|i| (y[i].rem_euclid(self.diag[i] as i128)) as i64)
            .collect())
    }

    /// Whether a cycle is a boundary.
    pub fn is_boundary(&self, z: &[(usize, i64)]) -> Result<bool> {
        let y = self.kernel_coordinates(z)?;
        Ok((0..y.len()).all(|i| {
            if i < self.image_rank {
                self.ring == Ring::Rational || y[i] % self.diag[i] as i128 == 0
            } else {
                y[i] == 0
            }
        }))
    }

    fn kernel_coordinates(&self, z: &[(usize, i64)]) -> Result<Vec<i128>> {
        let mut dense = vec![0i128; self.coord_map.ncols];
        for (i, v) in z {
            dense[*i] = *v as i128;
        }
        self.coord_map.mul_vec(&dense)
    }
}

fn dense_of(m: &SparseMatrix<i64>) -> ZMat {
    ZMat::from_sparse(m)
}

fn column_vec(m: &ZMat, j: usize) -> Result<SparseVec<i64>> {
    m.column(j)
        .into_iter()
        .enumerate()
        .filter(|(_, v)| *v != 0)
        .map(|(i, v)| i64::try_from(v).map(|v| (i, v)).map_err(|_| Error::Overflow))
        .collect()
}

/// Homology in degree `k`, with generators from the Smith normal form
/// change of basis.
pub fn homology(c: &ChainComplex, k: isize, ring: Ring) -> Result<HomologyGroup> {
    let n = c.dim(k);
    let dk = c.boundary(k);
    let dk1 = c.boundary(k + 1);
    if !dk.mul(&dk1).is_zero() {
        return Err(Error::NotAComplex(k.max(0) as usize));
    }
    // kernel of ∂_k
    let s1 = smith_normal_form(&dense_of(&dk))?;
    let r1 = s1.rank;
    let m = n - r1;
    let mut kernel = ZMat::zeros(n, m);
    let mut left_inv_rows = ZMat::zeros(m, n);
    for j in 0..m {
        for i in 0..n {
            kernel.set(i, j, s1.right.get(i, r1 + j));
            left_inv_rows.set(j, i, s1.right_inv.get(r1 + j, i));
        }
    }
    // image of ∂_{k+1} in kernel coordinates
    let b = left_inv_rows.mul(&dense_of(&dk1))?;
    let s2 = smith_normal_form(&b)?;
    let r2 = s2.rank;
    let basis = kernel.mul(&s2.left_inv)?;
    let mut coord_map = s2.left.mul(&left_inv_rows)?;
    // sign-normalize free generators: first nonzero entry positive
    let mut basis = basis;
    for j in r2..m {
        if basis.column(j).into_iter().find(|v| *v != 0).is_some_and(|v| v < 0) {
            for i in 0..n {
                basis.set(i, j, -basis.get(i, j));
            }
            for c in 0..coord_map.ncols {
                coord_map.set(j, c, -coord_map.get(j, c));
            }
        }
    }
    let diag: Vec<i64> =
        (0..r2).map(|i| i64::try_from(s2.d.get(i, i)).map_err(|_| Error::Overflow)).collect::<Result<_>>()?;
    let generators = (r2..m).map(|j| column_vec(&basis, j)).collect::<Result<Vec<_>>>()?;
    let (torsion, torsion_generators) = match ring {
        Ring::Rational => (Vec::new(), Vec::new()),
        Ring::Integer => {
            let mut t = Vec::new();
            let mut tg = Vec::new();
            for (i, d) in diag.iter().enumerate() {
                if *d > 1 {
                    t.push(*d);
                    tg.push((column_vec(&basis, i)?, *d));
                }
            }
            (t, tg)
        }
    };
    Ok(HomologyGroup {
        degree: k,
        ring,
        rank: m - r2,
        torsion,
        generators,
        torsion_generators,
        coord_map,
        image_rank: r2,
        diag,
    })
}

/// Rank and torsion of `H_k` without generators, by sparse elimination.
/// Suitable for large complexes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyRanks {
    pub degree: isize,
    pub rank: usize,
    pub torsion: Vec<i64>,
}

pub fn homology_ranks(c: &ChainComplex) -> Result<Vec<HomologyRanks>> {
    let mut ranks = Vec::new();
    let mut tors = Vec::new();
    for k in c.lowest()..=c.highest() + 1 {
        let (r, t) = integer_rank_and_torsion(&c.boundary(k))?;
        ranks.push(r);
        tors.push(t);
    }
    let mut out = Vec::new();
    for (i, k) in c.degrees().enumerate() {
        let rank = c.dim(k) - ranks[i] - ranks[i + 1];
        let mut torsion: Vec<i64> = tors[i + 1].iter().map(|v| *v as i64).collect();
        torsion.sort_unstable();
        out.push(HomologyRanks { degree: k, rank, torsion });
    }
    Ok(out)
}

/// A chain map between two chain complexes, one matrix per degree.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub lowest: isize,
    /// `maps[i]: C_{lowest+i} -> C'_{lowest+i}`
    pub maps: Vec<SparseMatrix<i64>>,
}

impl ChainMap {
    pub fn at(&self, k: isize, source: &ChainComplex, target: &ChainComplex) -> SparseMatrix<i64> {
        let i = k - self.lowest;
        if i < 0 || i as usize >= self.maps.len() {
            return SparseMatrix::zeros(target.dim(k), source.dim(k));
        }
        self.maps[i as usize].clone()
    }

    pub fn identity(c: &ChainComplex) -> Self {
        ChainMap { lowest: c.lowest(), maps: c.degrees().map(|k| SparseMatrix::identity(c.dim(k))).collect() }
    }

    /// `other ∘ self`
    pub fn then(&self, other: &ChainMap, a: &ChainComplex, b: &ChainComplex, c: &ChainComplex) -> ChainMap {
        let lo = a.lowest().min(c.lowest());
        let hi = a.highest().max(c.highest());
        ChainMap { lowest: lo, maps: (lo..=hi).map(|k| other.at(k, b, c).mul(&self.at(k, a, b))).collect() }
    }

    /// Checks `∂' f = f ∂` in every degree.
    pub fn verify(&self, source: &ChainComplex, target: &ChainComplex) -> Result<()> {
        let lo = source.lowest().min(target.lowest());
        let hi = source.highest().max(target.highest()) + 1;
        for k in lo..=hi {
            let lhs = target.boundary(k).mul(&self.at(k, source, target));
            let rhs = self.at(k - 1, source, target).mul(&source.boundary(k));
            if lhs != rhs {
                return Err(Error::NotChainMap(k.max(0) as usize));
            }
        }
        Ok(())
    }
}

/// Matrix of a chain map on free parts of homology, in the generator bases.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub degree: isize,
    pub source_rank: usize,
    pub target_rank: usize,
    /// `target_rank × source_rank`, row-major.
    pub matrix: Vec<Vec<i64>>,
}

impl InducedMap {
    pub fn rank(&self) -> usize {
        let m = SparseMatrix::from_dense(
            &self.matrix.iter().map(|r| r.iter().map(|v| crate::linalg::q(*v)).collect()).collect::<Vec<_>>(),
        );
        crate::linalg::rational_rank(&m)
    }
}

pub fn induced_map(
    f: &ChainMap,
    source: &ChainComplex,
    target: &ChainComplex,
    hs: &HomologyGroup,
    ht: &HomologyGroup,
) -> Result<InducedMap> {
    f.verify(source, target)?;
    let k = hs.degree;
    let fk = f.at(k, source, target);
    let mut cols = Vec::new();
    for g in &hs.generators {
        cols.push(ht.coordinates(&fk.mul_vec(g))?);
    }
    let matrix = (0..ht.rank).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    Ok(InducedMap { degree: k, source_rank: hs.rank, target_rank: ht.rank, matrix })
}

/// Mapping cone of `f: C -> D`: `Cone_k = C_{k-1} ⊕ D_k` with
/// `∂(c, d) = (-∂c, f c + ∂d)`. Its homology vanishes iff `f` is a
/// quasi-isomorphism.
pub fn mapping_cone(f: &ChainMap, source: &ChainComplex, target: &ChainComplex) -> Result<ChainComplex> {
    let lo = (source.lowest() + 1).min(target.lowest());
    let hi = (source.highest() + 1).max(target.highest());
    let mut dims = Vec::new();
    let mut ds = Vec::new();
    for k in lo..=hi {
        let (a, b) = (source.dim(k - 1), target.dim(k));
        let (a1, b1) = if k == lo { (0, 0) } else { (source.dim(k - 2), target.dim(k - 1)) };
        let mut entries = Vec::new();
        if k != lo {
            for (j, col) in source.boundary(k - 1).columns().iter().enumerate() {
                entries.extend(col.iter().map(|(i, v)| (*i, j, -*v)));
            }
            for (j, col) in f.at(k - 1, source, target).columns().iter().enumerate() {
                entries.extend(col.iter().map(|(i, v)| (a1 + *i, j, *v)));
            }
            for (j, col) in target.boundary(k).columns().iter().enumerate() {
                entries.extend(col.iter().map(|(i, v)| (a1 + *i, a + j, *v)));
            }
        }
        dims.push(a + b);
        ds.push(SparseMatrix::from_triplets(a1 + b1, a + b, entries));
    }
    ChainComplex::new(lo, dims, ds)
}
