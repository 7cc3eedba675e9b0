//! Builders for the bundled example models. The JSON files under `models/`
//! are serialized from these.

use crate::double_complex::synthetic_nondegenerate;
use crate::io::{DoubleSpec, ModelFile, NcdSpec, PlumbingSpec};
use crate::plumbing::PlumbingGraph;
use crate::triangulations::{product_facets, sphere_facets, torus_facets};

fn spec(name: &str, n: usize, x: Vec<Vec<usize>>, components: Vec<Vec<Vec<usize>>>) -> NcdSpec {
    NcdSpec {
        name: name.to_string(),
        n,
        vertices: Vec::new(),
        x,
        components,
        orientation_seeds: Vec::new(),
        self_intersections: None,
        isolated_singularity: false,
    }
}

/// Seven-vertex torus with one point.
pub fn torus_point() -> NcdSpec {
    spec("torus_point", 1, torus_facets(), vec![vec![vec![0]]])
}

/// Tetrahedron boundary with one point.
pub fn sphere_point() -> NcdSpec {
    spec("sphere_point", 1, sphere_facets(2), vec![vec![vec![0]]])
}

/// Torus with no divisor.
pub fn empty_y() -> NcdSpec {
    spec("empty_y", 1, torus_facets(), vec![])
}

/// `K × K` with `K` the tetrahedron boundary (vertex `(x,y)` is `4x + y`),
/// and three spheres pairwise meeting in one point: `K × {0}`, `{1} × K` and
/// the diagonal. Self-intersections `0, 0, 2`.
pub fn three_spheres() -> NcdSpec {
    let k = sphere_facets(2);
    let x = product_facets(&k, &k, 4);
    let a = k.iter().map(|f| f.iter().map(|v| 4 * v).collect()).collect();
    let b = k.iter().map(|f| f.iter().map(|v| 4 + v).collect()).collect();
    let diag = k.iter().map(|f| f.iter().map(|v| 5 * v).collect()).collect();
    let mut s = spec("three_spheres", 2, x, vec![a, b, diag]);
    s.self_intersections = Some(vec![0, 0, 2]);
    s
}

/// The first two components of [`three_spheres`]: two spheres meeting at a point.
pub fn two_spheres_one_point() -> NcdSpec {
    let mut s = three_spheres();
    s.name = "two_spheres_one_point".into();
    s.components.truncate(2);
    s.self_intersections = Some(vec![0, 0]);
    s
}

/// `K × T` with `T` the seven-vertex torus (vertex `(x,y)` is `7x + y`) and
/// the single component `{0} × T`.
pub fn torus_component() -> NcdSpec {
    let k = sphere_facets(2);
    let t = torus_facets();
    let mut s = spec("torus_component", 2, product_facets(&k, &t, 7), vec![t.clone()]);
    s.self_intersections = Some(vec![0]);
    s
}

/// In `K × K`: `K × {0}` and a sphere made of two parallel disks
/// `{1} × D`, `{2} × D` joined by a tube, meeting the first in two points.
/// The intersection is not a full subcomplex, so the model is subdivided.
pub fn two_spheres_two_points() -> NcdSpec {
    let k = sphere_facets(2);
    let x = product_facets(&k, &k, 4);
    let a = k.iter().map(|f| f.iter().map(|v| 4 * v).collect()).collect();
    let disk: Vec<Vec<usize>> = k.iter().filter(|f| **f != vec![1, 2, 3]).cloned().collect();
    let mut y2: Vec<Vec<usize>> = Vec::new();
    for layer in [1, 2] {
        y2.extend(disk.iter().map(|f| f.iter().map(|v| 4 * layer + v).collect()));
    }
    for (a, b) in [(1, 2), (1, 3), (2, 3)] {
        y2.push(vec![4 + a, 8 + a, 8 + b]);
        y2.push(vec![4 + a, 4 + b, 8 + b]);
    }
    let mut s = spec("two_spheres_two_points", 2, x, vec![a, y2]);
    s.self_intersections = Some(vec![0, 0]);
    s
}

/// Geometric models shipped as files.
pub fn bundled_ncd() -> Vec<NcdSpec> {
    vec![torus_point(), sphere_point(), empty_y(), three_spheres()]
}

fn plumbing(name: &str, genus: Vec<usize>, self_int: Vec<i64>, edges: Vec<(usize, usize)>, iso: bool) -> PlumbingSpec {
    PlumbingSpec::from_graph(name, &PlumbingGraph::new(genus, self_int, edges).expect("valid graph"), iso)
}

/// The plumbing suite.
pub fn bundled_plumbing() -> Vec<PlumbingSpec> {
    let e8_edges = vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)];
    vec![
        plumbing("torus_zero", vec![1], vec![0], vec![], false),
        plumbing("a1", vec![0], vec![-2], vec![], true),
        plumbing("triangle_minus_two", vec![0; 3], vec![-2; 3], vec![(0, 1), (1, 2), (0, 2)], false),
        plumbing("a3", vec![0; 3], vec![-2; 3], vec![(0, 1), (1, 2)], true),
        plumbing("e8", vec![0; 8], vec![-2; 8], e8_edges, true),
        plumbing("genus_two_cone", vec![2], vec![-1], vec![], true),
        plumbing("double_edge", vec![0, 0], vec![-1, -1], vec![(0, 1), (0, 1)], false),
        plumbing("elliptic_star", vec![1, 0, 0, 0], vec![-3, -2, -2, -2], vec![(0, 1), (0, 2), (0, 3)], true),
        plumbing("cusp_cycle", vec![0; 4], vec![-2; 4], vec![(0, 1), (1, 2), (2, 3), (0, 3)], false),
    ]
}

/// The double complex with a nonzero `d²`, as a file.
pub fn synthetic() -> DoubleSpec {
    DoubleSpec::from_complex(&synthetic_nondegenerate())
}

pub fn bundled_files() -> Vec<(String, ModelFile)> {
    let mut out: Vec<(String, ModelFile)> =
        bundled_ncd().into_iter().map(|s| (format!("{}.json", s.name), ModelFile::ncd(s))).collect();
    out.extend(bundled_plumbing().into_iter().map(|s| (format!("plumbing_{}.json", s.name), ModelFile::plumbing(s))));
    out.push(("synthetic.json".to_string(), ModelFile::double(synthetic())));
    out
}
