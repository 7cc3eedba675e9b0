//! Exact sparse and dense linear algebra over the integers and the rationals.
//!
//! Sparse vectors are sorted `(index, value)` lists without stored zeros.
//! Integer elimination runs in `i128` with checked arithmetic; an overflow is
//! reported as [`Error::Overflow`] rather than wrapping.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rationals.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Ring of coefficients for chains and matrices.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
{
}

pub type SparseVec<R> = Vec<(usize, R)>;

/// `y + a * x` for sorted sparse vectors.
pub fn axpy<R: Coeff>(y: &[(usize, R)], a: &R, x: &[(usize, R)]) -> SparseVec<R> {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            let v = a.clone() * x[j].1.clone();
            if !v.is_zero() {
                out.push((x[j].0, v));
            }
            j += 1;
        } else {
            let v = y[i].1.clone() + a.clone() * x[j].1.clone();
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale<R: Coeff>(a: &R, x: &[(usize, R)]) -> SparseVec<R> {
    if a.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, a.clone() * v.clone())).collect()
}

/// Sort, merge duplicates and drop zeros.
pub fn normalize<R: Coeff>(mut v: Vec<(usize, R)>) -> SparseVec<R> {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec<R> = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = last.1.clone() + x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

pub fn to_rational_vec(v: &[(usize, i64)]) -> SparseVec<Q> {
    v.iter().map(|(i, x)| (*i, q(*x))).collect()
}

/// Column-major sparse matrix.
#[derive(Clone, PartialEq)]
pub struct SparseMatrix<R> {
    nrows: usize,
    cols: Vec<SparseVec<R>>,
}

impl<R: Coeff> fmt::Debug for SparseMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix {}x{} {:?}", self.nrows, self.ncols(), self.cols)
    }
}

impl<R: Coeff> SparseMatrix<R> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { nrows: n, cols: (0..n).map(|i| vec![(i, R::one())]).collect() }
    }

    pub fn from_columns(nrows: usize, cols: Vec<SparseVec<R>>) -> Self {
        debug_assert!(cols.iter().all(|c| c.iter().all(|(i, _)| *i < nrows)));
        SparseMatrix { nrows, cols }
    }

    pub fn from_triplets(nrows: usize, ncols: usize, entries: Vec<(usize, usize, R)>) -> Self {
        let mut raw: Vec<Vec<(usize, R)>> = vec![Vec::new(); ncols];
        for (r, c, v) in entries {
            assert!(r < nrows && c < ncols, "triplet out of bounds");
            raw[c].push((r, v));
        }
        SparseMatrix { nrows, cols: raw.into_iter().map(normalize).collect() }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &[(usize, R)] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec<R>] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> R {
        match self.cols[c].binary_search_by_key(&r, |e| e.0) {
            Ok(p) => self.cols[c][p].1.clone(),
            Err(_) => R::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn mul_vec(&self, x: &[(usize, R)]) -> SparseVec<R> {
        let mut acc: Vec<(usize, R)> = Vec::new();
        for (j, a) in x {
            acc.extend(self.cols[*j].iter().map(|(i, v)| (*i, a.clone() * v.clone())));
        }
        normalize(acc)
    }

    pub fn mul(&self, other: &SparseMatrix<R>) -> SparseMatrix<R> {
        assert_eq!(self.ncols(), other.nrows, "dimension mismatch in product");
        SparseMatrix {
            nrows: self.nrows,
            cols: other.cols.iter().map(|c| self.mul_vec(c)).collect(),
        }
    }

    pub fn add(&self, other: &SparseMatrix<R>) -> SparseMatrix<R> {
        assert_eq!((self.nrows, self.ncols()), (other.nrows, other.ncols()));
        SparseMatrix {
            nrows: self.nrows,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| axpy(a, &R::one(), b)).collect(),
        }
    }

    pub fn neg(&self) -> SparseMatrix<R> {
        self.scaled(&-R::one())
    }

    pub fn scaled(&self, a: &R) -> SparseMatrix<R> {
        SparseMatrix { nrows: self.nrows, cols: self.cols.iter().map(|c| scale(a, c)).collect() }
    }

    pub fn transpose(&self) -> SparseMatrix<R> {
        let mut rows: Vec<SparseVec<R>> = vec![Vec::new(); self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                rows[*i].push((j, v.clone()));
            }
        }
        SparseMatrix { nrows: self.ncols(), cols: rows }
    }

    pub fn map<S: Coeff>(&self, f: impl Fn(&R) -> S) -> SparseMatrix<S> {
        SparseMatrix {
            nrows: self.nrows,
            cols: self
                .cols
                .iter()
                .map(|c| c.iter().map(|(i, v)| (*i, f(v))).filter(|e| !e.1.is_zero()).collect())
                .collect(),
        }
    }

    /// Keep the listed rows and columns, renumbered in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix<R> {
        let mut row_pos = vec![usize::MAX; self.nrows];
        for (k, r) in rows.iter().enumerate() {
            row_pos[*r] = k;
        }
        let out = cols
            .iter()
            .map(|c| {
                normalize(
                    self.cols[*c]
                        .iter()
                        .filter(|(i, _)| row_pos[*i] != usize::MAX)
                        .map(|(i, v)| (row_pos[*i], v.clone()))
                        .collect(),
                )
            })
            .collect();
        SparseMatrix { nrows: rows.len(), cols: out }
    }

    pub fn to_dense(&self) -> Vec<Vec<R>> {
        let mut d = vec![vec![R::zero(); self.ncols()]; self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                d[*i][j] = v.clone();
            }
        }
        d
    }

    pub fn from_dense(d: &[Vec<R>]) -> Self {
        let nrows = d.len();
        let ncols = d.first().map_or(0, Vec::len);
        let cols = (0..ncols)
            .map(|j| (0..nrows).filter(|&i| !d[i][j].is_zero()).map(|i| (i, d[i][j].clone())).collect())
            .collect();
        SparseMatrix { nrows, cols }
    }
}

impl SparseMatrix<i64> {
    pub fn to_rational(&self) -> SparseMatrix<Q> {
        self.map(|v| q(*v))
    }
}

/// Dense integer matrix used by the Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMat {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<i128>,
}

impl ZMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        ZMat { nrows, ncols, data: vec![0; nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ZMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = ZMat::zeros(nrows, ncols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), ncols, "ragged rows");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, *v as i128);
            }
        }
        m
    }

    pub fn from_sparse(m: &SparseMatrix<i64>) -> Self {
        let mut z = ZMat::zeros(m.nrows(), m.ncols());
        for j in 0..m.ncols() {
            for (i, v) in m.col(j) {
                z.set(*i, j, *v as i128);
            }
        }
        z
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.ncols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.nrows).map(|i| self.get(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<i128> {
        self.data[i * self.ncols..(i + 1) * self.ncols].to_vec()
    }

    pub fn mul(&self, other: &ZMat) -> Result<ZMat> {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let mut out = ZMat::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let v = checked_fma(out.get(i, j), a, b)?;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[i128]) -> Result<Vec<i128>> {
        assert_eq!(self.ncols, x.len());
        let mut out = vec![0i128; self.nrows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, xj) in x.iter().enumerate() {
                if *xj != 0 {
                    *o = checked_fma(*o, self.get(i, j), *xj)?;
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.ncols {
                self.data.swap(a * self.ncols + j, b * self.ncols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.nrows {
                self.data.swap(i * self.ncols + a, i * self.ncols + b);
            }
        }
    }

    /// row_dst += c * row_src
    fn add_row(&mut self, dst: usize, src: usize, c: i128) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        for j in 0..self.ncols {
            let s = self.get(src, j);
            if s != 0 {
                let v = checked_fma(self.get(dst, j), c, s)?;
                self.set(dst, j, v);
            }
        }
        Ok(())
    }

    /// col_dst += c * col_src
    fn add_col(&mut self, dst: usize, src: usize, c: i128) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        for i in 0..self.nrows {
            let s = self.get(i, src);
            if s != 0 {
                let v = checked_fma(self.get(i, dst), c, s)?;
                self.set(i, dst, v);
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.ncols {
            let v = self.get(i, j);
            self.set(i, j, -v);
        }
    }

    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        (0..self.nrows)
            .map(|i| self.row(i).into_iter().map(|v| i64::try_from(v).map_err(|_| Error::Overflow)).collect())
            .collect()
    }
}

fn checked_fma(acc: i128, a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).and_then(|p| acc.checked_add(p)).ok_or(Error::Overflow)
}

/// Result of a Smith normal form computation: `left * M * right = D`.
///
/// The factorization `M = U D V` is recovered as `U = left_inv`, `V = right_inv`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: ZMat,
    pub left: ZMat,
    pub left_inv: ZMat,
    pub right: ZMat,
    pub right_inv: ZMat,
    pub rank: usize,
}

impl Snf {
    pub fn u(&self) -> &ZMat {
        &self.left_inv
    }

    pub fn v(&self) -> &ZMat {
        &self.right_inv
    }

    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<i128> {
        (0..self.rank).map(|i| self.d.get(i, i)).collect()
    }
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn smith_normal_form(m: &ZMat) -> Result<Snf> {
    let (nr, nc) = (m.nrows, m.ncols);
    let mut a = m.clone();
    let mut left = ZMat::identity(nr);
    let mut left_inv = ZMat::identity(nr);
    let mut right = ZMat::identity(nc);
    let mut right_inv = ZMat::identity(nc);

    // row_dst += c row_src on `a`; keeps left * M * right = a.
    macro_rules! row_op {
        ($dst:expr, $src:expr, $c:expr) => {{
            a.add_row($dst, $src, $c)?;
            left.add_row($dst, $src, $c)?;
            left_inv.add_col($src, $dst, -$c)?;
        }};
    }
    macro_rules! col_op {
        ($dst:expr, $src:expr, $c:expr) => {{
            a.add_col($dst, $src, $c)?;
            right.add_col($dst, $src, $c)?;
            right_inv.add_row($src, $dst, -$c)?;
        }};
    }
    macro_rules! swap_r {
        ($x:expr, $y:expr) => {{
            a.swap_rows($x, $y);
            left.swap_rows($x, $y);
            left_inv.swap_cols($x, $y);
        }};
    }
    macro_rules! swap_c {
        ($x:expr, $y:expr) => {{
            a.swap_cols($x, $y);
            right.swap_cols($x, $y);
            right_inv.swap_rows($x, $y);
        }};
    }

    let mut rank = 0;
    for t in 0..nr.min(nc) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize, i128)> = None;
        for i in t..nr {
            for j in t..nc {
                let v = a.get(i, j).abs();
                if v != 0 && best.is_none_or(|b| v < b.2) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((bi, bj, _)) = best else { break };
        swap_r!(t, bi);
        swap_c!(t, bj);
        loop {
            let mut again = false;
            for i in t + 1..nr {
                let v = a.get(i, t);
                if v != 0 {
                    let p = a.get(t, t);
                    row_op!(i, t, -(v / p));
                    if a.get(i, t) != 0 {
                        again = true;
                    }
                }
            }
            for j in t + 1..nc {
                let v = a.get(t, j);
                if v != 0 {
                    let p = a.get(t, t);
                    col_op!(j, t, -(v / p));
                    if a.get(t, j) != 0 {
                        again = true;
                    }
                }
            }
            if again {
                let mut best: Option<(usize, usize, i128)> = None;
                for i in t..nr {
                    let v = a.get(i, t).abs();
                    if v != 0 && best.is_none_or(|b| v < b.2) {
                        best = Some((i, t, v));
                    }
                }
                for j in t..nc {
                    let v = a.get(t, j).abs();
                    if v != 0 && best.is_none_or(|b| v < b.2) {
                        best = Some((t, j, v));
                    }
                }
                let (bi, bj, _) = best.expect("pivot row or column is nonzero");
                swap_r!(t, bi);
                swap_c!(t, bj);
                continue;
            }
            // divisibility of the remaining block by the pivot
            let p = a.get(t, t);
            let mut bad = None;
            'outer: for i in t + 1..nr {
                for j in t + 1..nc {
                    if a.get(i, j) % p != 0 {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => row_op!(t, i, 1),
                None => break,
            }
        }
        if a.get(t, t) < 0 {
            a.negate_row(t);
            left.negate_row(t);
            for r in 0..nr {
                let v = left_inv.get(r, t);
                left_inv.set(r, t, -v);
            }
        }
        rank += 1;
    }
    Ok(Snf { d: a, left, left_inv, right, right_inv, rank })
}

/// Rank and invariant factors (> 1) of a sparse integer matrix.
///
/// Unit pivots are eliminated sparsely first; the remainder goes through the
/// dense Smith normal form.
pub fn integer_rank_and_torsion(m: &SparseMatrix<i64>) -> Result<(usize, Vec<i128>)> {
    let nrows = m.nrows();
    let mut cols: Vec<Option<SparseVec<i128>>> =
        m.columns().iter().map(|c| Some(c.iter().map(|(i, v)| (*i, *v as i128)).collect())).collect();
    let mut row_cols: Vec<Vec<usize>> = vec![Vec::new(); nrows];
    for (j, c) in cols.iter().enumerate() {
        for (i, _) in c.as_ref().unwrap() {
            row_cols[*i].push(j);
        }
    }
    let mut row_dead = vec![false; nrows];
    let mut rank = 0;
    loop {
        // pick a unit entry whose row is short
        let mut best: Option<(usize, usize, usize)> = None;
        for (j, c) in cols.iter().enumerate() {
            let Some(c) = c else { continue };
            for (i, v) in c {
                if v.abs() == 1 {
                    let cost = row_cols[*i].len();
                    if best.is_none_or(|b| cost < b.2) {
                        best = Some((*i, j, cost));
                    }
                }
            }
            if best.is_some_and(|b| b.2 <= 2) {
                break;
            }
        }
        let Some((pr, pc, _)) = best else { break };
        let pivot_col = cols[pc].take().unwrap();
        let pv = pivot_col.iter().find(|e| e.0 == pr).unwrap().1;
        let mut touched = std::mem::take(&mut row_cols[pr]);
        touched.sort_unstable();
        touched.dedup();
        for k in touched {
            if k == pc {
                continue;
            }
            let Some(ck) = cols[k].as_ref() else { continue };
            let Ok(pos) = ck.binary_search_by_key(&pr, |e| e.0) else { continue };
            let factor = -(ck[pos].1 * pv);
            let new = checked_axpy(ck, factor, &pivot_col)?;
            for (i, _) in &new {
                if !row_dead[*i] && ck.binary_search_by_key(i, |e| e.0).is_err() {
                    row_cols[*i].push(k);
                }
            }
            cols[k] = Some(new);
        }
        row_dead[pr] = true;
        for c in cols.iter_mut().flatten() {
            debug_assert!(c.iter().all(|e| e.0 != pr));
        }
        rank += 1;
    }
    // dense remainder
    let live_rows: Vec<usize> = (0..nrows).filter(|i| !row_dead[*i]).collect();
    let live_cols: Vec<&SparseVec<i128>> = cols.iter().flatten().filter(|c| !c.is_empty()).collect();
    if live_cols.is_empty() {
        return Ok((rank, Vec::new()));
    }
    let used_rows: Vec<usize> = {
        let mut used = vec![false; nrows];
        for c in &live_cols {
            for (i, _) in c.iter() {
                used[*i] = true;
            }
        }
        live_rows.into_iter().filter(|i| used[*i]).collect()
    };
    let mut pos = HashMap::new();
    for (k, r) in used_rows.iter().enumerate() {
        pos.insert(*r, k);
    }
    let mut z = ZMat::zeros(used_rows.len(), live_cols.len());
    for (j, c) in live_cols.iter().enumerate() {
        for (i, v) in c.iter() {
            z.set(pos[i], j, *v);
        }
    }
    let inv = invariant_factors_only(z)?;
    let torsion = inv.iter().copied().filter(|d| *d > 1).collect();
    Ok((rank + inv.len(), torsion))
}

fn checked_axpy(y: &[(usize, i128)], a: i128, x: &[(usize, i128)]) -> Result<SparseVec<i128>> {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i]);
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            let v = a.checked_mul(x[j].1).ok_or(Error::Overflow)?;
            if v != 0 {
                out.push((x[j].0, v));
            }
            j += 1;
        } else {
            let v = checked_fma(y[i].1, a, x[j].1)?;
            if v != 0 {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

/// Invariant factors without tracking transforms.
fn invariant_factors_only(mut a: ZMat) -> Result<Vec<i128>> {
    let (nr, nc) = (a.nrows, a.ncols);
    let mut out = Vec::new();
    for t in 0..nr.min(nc) {
        let mut best: Option<(usize, usize, i128)> = None;
        for i in t..nr {
            for j in t..nc {
                let v = a.get(i, j).abs();
                if v != 0 && best.is_none_or(|b| v < b.2) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((bi, bj, _)) = best else { break };
        a.swap_rows(t, bi);
        a.swap_cols(t, bj);
        loop {
            let mut again = false;
            for i in t + 1..nr {
                let v = a.get(i, t);
                if v != 0 {
                    let p = a.get(t, t);
                    a.add_row(i, t, -(v / p))?;
                    again |= a.get(i, t) != 0;
                }
            }
            for j in t + 1..nc {
                let v = a.get(t, j);
                if v != 0 {
                    let p = a.get(t, t);
                    a.add_col(j, t, -(v / p))?;
                    again |= a.get(t, j) != 0;
                }
            }
            if again {
                let mut best: Option<(usize, usize, i128)> = None;
                for i in t..nr {
                    let v = a.get(i, t).abs();
                    if v != 0 && best.is_none_or(|b| v < b.2) {
                        best = Some((i, t, v));
                    }
                }
                for j in t..nc {
                    let v = a.get(t, j).abs();
                    if v != 0 && best.is_none_or(|b| v < b.2) {
                        best = Some((t, j, v));
                    }
                }
                let (bi, bj, _) = best.unwrap();
                a.swap_rows(t, bi);
                a.swap_cols(t, bj);
                continue;
            }
            let p = a.get(t, t);
            let mut bad = None;
            'outer: for i in t + 1..nr {
                for j in t + 1..nc {
                    if a.get(i, j) % p != 0 {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => a.add_row(t, i, 1)?,
                None => break,
            }
        }
        out.push(a.get(t, t).abs());
    }
    Ok(out)
}

/// Incremental echelon basis over the rationals.
///
/// Each stored vector has a distinct pivot (its largest index) and carries its
/// expression in terms of the inserted vectors, so membership queries also
/// return coordinates.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec<Q>>,
    combos: Vec<SparseVec<Q>>,
    by_pivot: HashMap<usize, usize>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduce `v`; returns the residual and the combination of inserted
    /// vectors that was subtracted (`v = residual + Σ c_i input_i`).
    pub fn reduce(&self, v: &[(usize, Q)]) -> (SparseVec<Q>, SparseVec<Q>) {
        let mut r = v.to_vec();
        let mut used: SparseVec<Q> = Vec::new();
        let mut out: SparseVec<Q> = Vec::new();
        while let Some((p, val)) = r.pop() {
            match self.by_pivot.get(&p) {
                Some(&k) => {
                    let row = &self.rows[k];
                    let (last, rest) = row.split_last().unwrap();
                    let c = val / last.1.clone();
                    r = axpy(&r, &-c.clone(), rest);
                    used = axpy(&used, &c, &self.combos[k]);
                }
                None => out.push((p, val)),
            }
        }
        out.reverse();
        (out, used)
    }

    pub fn contains(&self, v: &[(usize, Q)]) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Insert a vector; returns true if it increased the rank.
    pub fn insert(&mut self, v: &[(usize, Q)]) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let (res, used) = self.reduce(v);
        if res.is_empty() {
            return false;
        }
        let combo = axpy(&vec![(id, q(1))], &-q(1), &used);
        let pivot = res.last().unwrap().0;
        self.by_pivot.insert(pivot, self.rows.len());
        self.rows.push(res);
        self.combos.push(combo);
        true
    }

    /// Coordinates of `v` in terms of the inserted vectors, if `v` lies in the span.
    pub fn solve(&self, v: &[(usize, Q)]) -> Option<SparseVec<Q>> {
        let (res, used) = self.reduce(v);
        res.is_empty().then_some(used)
    }
}

/// Rank of a rational matrix.
pub fn rational_rank(m: &SparseMatrix<Q>) -> usize {
    let mut e = Echelon::new();
    for c in m.columns() {
        e.insert(c);
    }
    e.rank()
}

/// Basis of the kernel of a rational matrix, as sparse column vectors.
pub fn rational_kernel(m: &SparseMatrix<Q>) -> Vec<SparseVec<Q>> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (j, c) in m.columns().iter().enumerate() {
        if let Some(combo) = e.solve(c) {
            // c_j - Σ combo_i c_i = 0, where indices in combo refer to insertion order
            let mut v = axpy(&vec![(j, q(1))], &-q(1), &combo);
            v = normalize(v);
            out.push(v);
        }
        e.insert(c);
    }
    out
}

pub fn bigint_to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

/// Display an exact rational as `p` or `p/q`.
pub fn q_to_string(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_is_integer_unit(x: &Q) -> bool {
    x.is_integer() && x.numer().abs().is_one()
}
