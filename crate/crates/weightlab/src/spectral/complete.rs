//! Completion of a seed `c ∈ A_{s,t}` with `∂c = 0` and `[δc] = 0` in `E¹` to a
//! cycle `c + c_{s-1,t+1} + ...` of the total complex.
//!
//! Two independent routes: back-substitution through the persistence
//! reduction, and a direct solve of `D x = -D c` over `W_{s-1}` (optionally
//! restricted to a preferred support). Their difference must be a cycle of
//! `W_{s-1}` up to boundaries.

use num_traits::Zero;

use super::{SpectralSequence, WeightedComplex};
use crate::error::{Error, Result};
use crate::linalg::{axpy, Echelon, SparseVec, Q};

#[derive(Clone, Debug)]
pub struct Completion {
    pub s: isize,
    pub t: isize,
    pub seed: SparseVec<Q>,
    /// Cycle of `Tot_{s+t}` whose `A_{s,t}` component is the seed and whose
    /// other components lie in columns `< s`.
    pub cycle: SparseVec<Q>,
    /// The same completion along the persistence route.
    pub persistent: SparseVec<Q>,
    pub routes_agree: bool,
    /// Whether the support restriction could be honored.
    pub restricted: bool,
    /// Coordinates of the class on the essential basis.
    pub class: Vec<Q>,
    pub weight: Option<isize>,
}

impl Completion {
    pub fn degree(&self) -> isize {
        self.s + self.t
    }
}

fn q1() -> Q {
    Q::from_integer(1.into())
}

/// Reduce `y` by the `R_j` with `s(j) < s`, returning `x` with `D x = y`.
fn persistence_route(ss: &SpectralSequence, k: isize, s: isize, y: &[(usize, Q)]) -> Option<SparseVec<Q>> {
    let f = ss.complex().filtration(k);
    let below = ss.roles(k - 1);
    let mut y = y.to_vec();
    let mut x: SparseVec<Q> = Vec::new();
    while let Some((p, val)) = y.last().cloned() {
        let super::Role::Birth { death, .. } = below[p] else { return None };
        if f[death] >= s {
            return None;
        }
        let r = ss.r(k, death);
        let c = val / r.last().unwrap().1.clone();
        y = axpy(&y, &-c.clone(), r);
        x = axpy(&x, &c, ss.v(k, death));
    }
    Some(x)
}

/// Direct solve over the columns `j` with `s(j) < s` accepted by `allowed`,
/// inserted from the top of the filtration down.
fn direct_route(
    wc: &WeightedComplex,
    k: isize,
    s: isize,
    y: &[(usize, Q)],
    allowed: &dyn Fn(usize) -> bool,
) -> Option<SparseVec<Q>> {
    let f = wc.ss.complex().filtration(k);
    let d = wc.ss.complex().differential(k);
    let cols: Vec<usize> = (0..f.len()).rev().filter(|&j| f[j] < s && allowed(j)).collect();
    let mut e = Echelon::new();
    for &j in &cols {
        e.insert(d.col(j));
    }
    let combo = e.solve(y)?;
    let mut x: Vec<(usize, Q)> = combo.into_iter().map(|(id, c)| (cols[id], c)).collect();
    x.sort_by_key(|e| e.0);
    Some(x)
}

impl WeightedComplex {
    /// Complete a seed given as a vector of the block `A_{s,t}`. `allowed`
    /// filters the basis of `Tot_{s+t}` for the preferred route; when the
    /// restricted system has no solution the restriction is dropped.
    pub fn complete(
        &self,
        s: isize,
        t: isize,
        seed: &[(usize, Q)],
        allowed: Option<&dyn Fn(usize) -> bool>,
    ) -> Result<Completion> {
        let k = s + t;
        if !self.a.vertical(s, t).to_rational().mul_vec(seed).is_empty() {
            return Err(Error::NotVerticalCycle);
        }
        let delta = self.a.horizontal(s, t).to_rational().mul_vec(seed);
        let mut col = Echelon::new();
        for c in self.a.vertical(s - 1, t + 1).to_rational().columns() {
            col.insert(c);
        }
        if !col.contains(&delta) {
            return Err(Error::NotInKernelD1);
        }
        if seed.is_empty() {
            let class = vec![Q::zero(); self.ss.essential(k).len()];
            return Ok(Completion {
                s,
                t,
                seed: Vec::new(),
                cycle: Vec::new(),
                persistent: Vec::new(),
                routes_agree: true,
                restricted: true,
                class,
                weight: None,
            });
        }
        let c = self.tot.embed(k, s, seed);
        let d = self.ss.complex().differential(k);
        let y: SparseVec<Q> = d.mul_vec(&c).into_iter().map(|(i, v)| (i, -v)).collect();

        let persistent = persistence_route(&self.ss, k, s, &y).map(|x| axpy(&c, &q1(), &x));
        let all = |_: usize| true;
        let (direct, restricted) = match allowed.and_then(|a| direct_route(self, k, s, &y, a)) {
            Some(x) => (Some(x), allowed.is_some()),
            None => (direct_route(self, k, s, &y, &all), allowed.is_none()),
        };
        let (Some(persistent), Some(x)) = (persistent, direct) else { return Err(Error::ObstructedCompletion) };
        let cycle = axpy(&c, &q1(), &x);
        debug_assert!(d.mul_vec(&cycle).is_empty());

        let routes_agree = self.differ_by_lower_cycle(k, s, &cycle, &persistent);
        let class = self.ss.class_coordinates(k, &cycle).ok_or(Error::ObstructedCompletion)?;
        let weight = self.ss.weight_of(k, &class);
        Ok(Completion { s, t, seed: seed.to_vec(), cycle, persistent, routes_agree, restricted, class, weight })
    }

    /// `a - b ∈ Z^∞_{s-1} + D(Tot_{k+1})`, by an explicit membership solve.
    fn differ_by_lower_cycle(&self, k: isize, s: isize, a: &[(usize, Q)], b: &[(usize, Q)]) -> bool {
        let diff = axpy(a, &-q1(), b);
        let f = self.ss.complex().filtration(k);
        let roles = self.ss.roles(k);
        let mut e = Echelon::new();
        for j in 0..f.len() {
            if f[j] < s && !matches!(roles[j], super::Role::Death { .. }) {
                e.insert(self.ss.v(k, j));
            }
        }
        for j in 0..self.ss.complex().dim(k + 1) {
            e.insert(self.ss.r(k + 1, j));
        }
        e.contains(&diff)
    }

    /// Change a seed within its `E¹` class so that it vanishes on the block
    /// indices rejected by `allowed`, if possible.
    pub fn transverse_seed(
        &self,
        s: isize,
        t: isize,
        seed: &[(usize, Q)],
        allowed: &dyn Fn(usize) -> bool,
    ) -> Option<SparseVec<Q>> {
        let bad: Vec<usize> = (0..self.a.dim(s, t)).filter(|&i| !allowed(i)).collect();
        if bad.is_empty() {
            return Some(seed.to_vec());
        }
        let v = self.a.vertical(s, t + 1).to_rational();
        let project = |x: &[(usize, Q)]| -> SparseVec<Q> {
            x.iter().filter_map(|(i, c)| bad.binary_search(i).ok().map(|p| (p, c.clone()))).collect()
        };
        let mut e = Echelon::new();
        for c in v.columns() {
            e.insert(&project(c));
        }
        let target: SparseVec<Q> = project(seed).into_iter().map(|(i, c)| (i, -c)).collect();
        let combo = e.solve(&target)?;
        let b: Vec<(usize, Q)> = {
            let mut b = combo;
            b.sort_by_key(|e| e.0);
            b
        };
        Some(axpy(seed, &q1(), &v.mul_vec(&b)))
    }
}
