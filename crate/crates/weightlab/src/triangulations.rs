//! Small triangulations used by the bundled models and the tests.

use crate::simplicial::SimplicialComplex;

/// Boundary of the standard simplex on `d + 2` vertices: a `d`-sphere.
pub fn sphere_facets(d: usize) -> Vec<Vec<usize>> {
    (0..d + 2).map(|skip| (0..d + 2).filter(|&v| v != skip).collect()).collect()
}

/// Seven-vertex torus, 14 triangles.
pub fn torus_facets() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..7 {
        out.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        out.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    out
}

/// Six-vertex real projective plane, 10 triangles.
pub fn rp2_facets() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 5],
        vec![0, 5, 1],
        vec![1, 2, 4],
        vec![2, 3, 5],
        vec![3, 4, 1],
        vec![4, 5, 2],
        vec![5, 1, 3],
    ]
}

/// Cyclic polygon on `m` vertices.
pub fn polygon_facets(m: usize) -> Vec<Vec<usize>> {
    (0..m).map(|i| vec![i, (i + 1) % m]).collect()
}

/// Staircase triangulation of a product of two simplicial complexes given by
/// facets. Vertex `(x, y)` gets id `x * stride + y`, where `stride` exceeds
/// every vertex id of the second factor.
pub fn product_facets(a: &[Vec<usize>], b: &[Vec<usize>], stride: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for s in a {
        let mut s = s.clone();
        s.sort_unstable();
        for t in b {
            let mut t = t.clone();
            t.sort_unstable();
            for path in lattice_paths(s.len() - 1, t.len() - 1) {
                out.push(path.iter().map(|&(i, j)| s[i] * stride + t[j]).collect());
            }
        }
    }
    out
}

/// Monotone lattice paths from `(0,0)` to `(p,q)` as vertex sequences.
pub fn lattice_paths(p: usize, q: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut stack = vec![vec![(0usize, 0usize)]];
    while let Some(path) = stack.pop() {
        let &(i, j) = path.last().unwrap();
        if (i, j) == (p, q) {
            out.push(path);
            continue;
        }
        if j < q {
            let mut n = path.clone();
            n.push((i, j + 1));
            stack.push(n);
        }
        if i < p {
            let mut n = path;
            n.push((i + 1, j));
            stack.push(n);
        }
    }
    out.sort();
    out
}

pub fn complex(facets: &[Vec<usize>]) -> SimplicialComplex {
    SimplicialComplex::from_generators(facets.iter().cloned()).expect("well-formed facets")
}
