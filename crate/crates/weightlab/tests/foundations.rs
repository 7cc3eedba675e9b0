//! Simplicial complexes, boundaries, subdivision, Smith normal form and
//! integral homology on small hand-checkable inputs.

use proptest::prelude::*;

use weightlab::homology::{homology, induced_map, ChainComplex, ChainMap, Ring};
use weightlab::linalg::{smith_normal_form, SparseMatrix, ZMat};
use weightlab::simplicial::{
    is_dimensionally_transverse, sort_with_sign, support_intersection_dim, Chain, Simplex, SimplicialComplex,
};
use weightlab::triangulations::{complex, polygon_facets, product_facets, rp2_facets, sphere_facets, torus_facets};

fn simplex(v: &[usize]) -> Simplex {
    Simplex::new(v.to_vec()).unwrap()
}

/// Chain map induced by a vertex map; degenerate images go to zero.
fn simplicial_map(src: &SimplicialComplex, dst: &SimplicialComplex, f: impl Fn(usize) -> usize) -> ChainMap {
    let top = src.dim().max(0) as usize;
    let maps = (0..=top)
        .map(|k| {
            let mut entries = Vec::new();
            for (j, s) in src.simplices(k).iter().enumerate() {
                let image: Vec<usize> = s.vertices().iter().map(|&v| f(v)).collect();
                let mut distinct = image.clone();
                distinct.sort_unstable();
                distinct.dedup();
                if distinct.len() != image.len() {
                    continue;
                }
                let (sorted, sign) = sort_with_sign(image).unwrap();
                let i = dst.index_of(&Simplex::from_sorted(sorted)).expect("simplicial image");
                entries.push((i, j, sign));
            }
            SparseMatrix::from_triplets(dst.count(k), src.count(k), entries)
        })
        .collect();
    ChainMap { lowest: 0, maps }
}

fn fundamental_cycle(k: &SimplicialComplex) -> Chain<i64> {
    let c = ChainComplex::of_complex(k);
    let top = k.dim() as isize;
    let h = homology(&c, top, Ring::Integer).unwrap();
    assert_eq!(h.rank, 1);
    Chain::from_vec(k, top as usize, &h.generators[0])
}

#[test]
fn closure_counts() {
    let t = SimplicialComplex::from_generators([vec![0, 1, 2]]).unwrap();
    assert_eq!(t.f_vector(), vec![3, 3, 1]);
    let e = SimplicialComplex::from_generators(Vec::<Vec<usize>>::new()).unwrap();
    assert!(e.is_empty());
    assert_eq!(e.dim(), -1);
    let torus = complex(&torus_facets());
    assert_eq!(torus.f_vector(), vec![7, 21, 14]);
    assert_eq!(torus.euler_characteristic(), 0);
    assert!(SimplicialComplex::from_generators([vec![1, 1]]).is_err());
}

#[test]
fn boundary_columns() {
    let e = complex(&[vec![0, 1]]);
    let d = e.boundary_matrix(1).unwrap();
    assert_eq!(d.col(0), &[(0, -1), (1, 1)]);
    assert!(e.boundary_matrix(2).is_err());

    let t = complex(&[vec![0, 1, 2]]);
    let d2 = t.boundary_matrix(2).unwrap();
    let at = |v: &[usize]| d2.get(t.index_of(&simplex(v)).unwrap(), 0);
    assert_eq!((at(&[1, 2]), at(&[0, 2]), at(&[0, 1])), (1, -1, 1));

    for k in [complex(&torus_facets()), complex(&rp2_facets()), complex(&sphere_facets(3))] {
        for i in 2..=k.dim() as usize {
            assert!(k.boundary(i - 1).mul(&k.boundary(i)).is_zero());
        }
    }
}

#[test]
fn subdivision_counts_and_carry() {
    let (sd, _) = complex(&[vec![0, 1]]).barycentric_subdivide();
    assert_eq!(sd.f_vector(), vec![3, 2]);
    let (sd, map) = complex(&[vec![0, 1, 2]]).barycentric_subdivide();
    assert_eq!(sd.f_vector(), vec![7, 12, 6]);
    assert_eq!(map.barycenter_of.len(), 7);

    let torus = complex(&torus_facets());
    let (sd, map) = torus.barycentric_subdivide();
    for k in 1..=2 {
        let lhs = sd.boundary(k).mul(map.matrix(k).unwrap());
        let rhs = map.matrix(k - 1).unwrap().mul(&torus.boundary(k));
        assert_eq!(lhs.to_dense(), rhs.to_dense(), "carry commutes with the boundary in degree {k}");
    }
    let z = fundamental_cycle(&torus);
    let zs = map.apply(&torus, &sd, &z);
    assert!(!zs.is_zero());
    assert!(zs.boundary().is_zero());
    assert_eq!(zs.terms().len(), 6 * 14);
}

#[test]
fn support_intersections() {
    let t = Chain::from_terms(2, [(simplex(&[0, 1, 2]), 1i64)]);
    assert_eq!(support_intersection_dim(&t, &complex(&[vec![0]])), 0);
    assert_eq!(support_intersection_dim(&t, &complex(&[vec![5, 6]])), -1);
    assert_eq!(support_intersection_dim(&t, &complex(&[vec![1, 2, 7]])), 1);
    assert_eq!(support_intersection_dim(&t, &complex(&[vec![0, 1, 2]])), 2);

    let torus = complex(&torus_facets());
    let z = fundamental_cycle(&torus);
    let far = complex(&[vec![100]]);
    assert!(is_dimensionally_transverse(&z, &[&far, &SimplicialComplex::empty()]));
    // a point is fine in real codimension 2, the whole surface is not
    assert!(is_dimensionally_transverse(&z, &[&complex(&[vec![0]])]));
    assert!(!is_dimensionally_transverse(&z, &[&torus]));
    let half = Chain::from_terms(2, z.terms().iter().take(5).map(|(s, v)| (s.clone(), *v)));
    assert!(!is_dimensionally_transverse(&half, &[&torus]));
}

#[test]
fn smith_examples() {
    let id = ZMat::identity(3);
    let s = smith_normal_form(&id).unwrap();
    assert_eq!(s.d, id);
    let z = ZMat::zeros(2, 3);
    let s = smith_normal_form(&z).unwrap();
    assert_eq!(s.d, z);
    assert_eq!(s.rank, 0);
    let m = ZMat::from_rows(&[vec![2, 4], vec![6, 8]]);
    let s = smith_normal_form(&m).unwrap();
    assert_eq!(s.invariant_factors(), vec![2, 4]);
    assert_eq!(s.u().mul(&s.d).unwrap().mul(s.v()).unwrap(), m);
}

#[test]
fn homology_examples() {
    let s2 = ChainComplex::of_complex(&complex(&sphere_facets(2)));
    assert_eq!(homology(&s2, 0, Ring::Integer).unwrap().rank, 1);
    assert_eq!(homology(&s2, 1, Ring::Integer).unwrap().rank, 0);
    assert_eq!(homology(&s2, 2, Ring::Integer).unwrap().rank, 1);

    let t = ChainComplex::of_complex(&complex(&torus_facets()));
    let h1 = homology(&t, 1, Ring::Integer).unwrap();
    assert_eq!((h1.rank, h1.torsion.clone()), (2, vec![]));

    let p = ChainComplex::of_complex(&complex(&rp2_facets()));
    let h1 = homology(&p, 1, Ring::Integer).unwrap();
    assert_eq!((h1.rank, h1.torsion.clone()), (0, vec![2]));
    let (z, order) = &h1.torsion_generators[0];
    assert_eq!(*order, 2);
    assert!(!h1.is_boundary(z).unwrap());
    let twice: Vec<(usize, i64)> = z.iter().map(|(i, v)| (*i, 2 * v)).collect();
    assert!(h1.is_boundary(&twice).unwrap());
    assert_eq!(homology(&p, 2, Ring::Integer).unwrap().rank, 0);
    assert_eq!(homology(&p, 1, Ring::Rational).unwrap().rank, 0);
}

#[test]
fn induced_map_examples() {
    let t = complex(&torus_facets());
    let c = ChainComplex::of_complex(&t);
    let h1 = homology(&c, 1, Ring::Integer).unwrap();
    let m = induced_map(&ChainMap::identity(&c), &c, &c, &h1, &h1).unwrap();
    assert_eq!(m.matrix, vec![vec![1, 0], vec![0, 1]]);

    let pt = complex(&[vec![0]]);
    let cp = ChainComplex::of_complex(&pt);
    let f = simplicial_map(&pt, &t, |v| v);
    let h0 = induced_map(
        &f,
        &cp,
        &c,
        &homology(&cp, 0, Ring::Integer).unwrap(),
        &homology(&c, 0, Ring::Integer).unwrap(),
    )
    .unwrap();
    assert_eq!(h0.matrix.len(), 1);
    assert_eq!(h0.matrix[0][0].abs(), 1);

    let (hex, tri) = (complex(&polygon_facets(6)), complex(&polygon_facets(3)));
    let (ch, ct) = (ChainComplex::of_complex(&hex), ChainComplex::of_complex(&tri));
    let wrap = simplicial_map(&hex, &tri, |v| v % 3);
    let m = induced_map(
        &wrap,
        &ch,
        &ct,
        &homology(&ch, 1, Ring::Integer).unwrap(),
        &homology(&ct, 1, Ring::Integer).unwrap(),
    )
    .unwrap();
    assert_eq!(m.matrix[0][0].abs(), 2);
}

#[test]
fn induced_maps_compose() {
    // hexagon -> triangle -> triangle (rotation), compared with the composite
    let (hex, tri) = (complex(&polygon_facets(6)), complex(&polygon_facets(3)));
    let (ch, ct) = (ChainComplex::of_complex(&hex), ChainComplex::of_complex(&tri));
    let f = simplicial_map(&hex, &tri, |v| v % 3);
    let g = simplicial_map(&tri, &tri, |v| (v + 1) % 3);
    let hh = homology(&ch, 1, Ring::Integer).unwrap();
    let ht = homology(&ct, 1, Ring::Integer).unwrap();
    let mf = induced_map(&f, &ch, &ct, &hh, &ht).unwrap().matrix[0][0];
    let mg = induced_map(&g, &ct, &ct, &ht, &ht).unwrap().matrix[0][0];
    let gf = f.then(&g, &ch, &ct, &ct);
    let mgf = induced_map(&gf, &ch, &ct, &hh, &ht).unwrap().matrix[0][0];
    assert_eq!(mgf, mg * mf);
}

#[test]
fn product_homology() {
    // S^1 x S^1 as a staircase product of two triangles
    let tri = polygon_facets(3);
    let k = complex(&product_facets(&tri, &tri, 10));
    let c = ChainComplex::of_complex(&k);
    let ranks: Vec<usize> = (0..=2).map(|i| homology(&c, i, Ring::Integer).unwrap().rank).collect();
    assert_eq!(ranks, vec![1, 2, 1]);
}

/// Random 2-complexes on six vertices.
fn random_complex() -> impl Strategy<Value = SimplicialComplex> {
    let triangles: Vec<Vec<usize>> = (0..6)
        .flat_map(|a| ((a + 1)..6).flat_map(move |b| ((b + 1)..6).map(move |c| vec![a, b, c])))
        .collect();
    let edges: Vec<Vec<usize>> = (0..6).flat_map(|a| ((a + 1)..6).map(move |b| vec![a, b])).collect();
    (proptest::sample::subsequence(triangles.clone(), 0..=triangles.len()), proptest::sample::subsequence(edges.clone(), 0..=edges.len()))
        .prop_map(|(t, e)| complex(&t.into_iter().chain(e).collect::<Vec<_>>()))
}

fn random_zmat() -> impl Strategy<Value = ZMat> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-6i64..=6, c), r).prop_map(|rows| ZMat::from_rows(&rows))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_squares_to_zero(k in random_complex()) {
        for i in 2..=k.dim().max(0) as usize {
            prop_assert!(k.boundary(i - 1).mul(&k.boundary(i)).is_zero());
        }
    }

    #[test]
    fn smith_factorization(m in random_zmat()) {
        let s = smith_normal_form(&m).unwrap();
        prop_assert_eq!(s.u().mul(&s.d).unwrap().mul(s.v()).unwrap(), m.clone());
        prop_assert_eq!(s.left.mul(&s.left_inv).unwrap(), ZMat::identity(m.nrows));
        prop_assert_eq!(s.right.mul(&s.right_inv).unwrap(), ZMat::identity(m.ncols));
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!(w[0] > 0 && w[1] % w[0] == 0);
        }
        for i in 0..m.nrows {
            for j in 0..m.ncols {
                if i != j || i >= s.rank {
                    prop_assert_eq!(s.d.get(i, j), 0);
                }
            }
        }
    }

    #[test]
    fn homology_bookkeeping(k in random_complex()) {
        let c = ChainComplex::of_complex(&k);
        let mut chi = 0i64;
        for i in c.degrees() {
            let hz = homology(&c, i, Ring::Integer).unwrap();
            let hq = homology(&c, i, Ring::Rational).unwrap();
            prop_assert_eq!(hz.rank, hq.rank);
            // rank-nullity: dim C_i = rank ∂_i + dim ker ∂_i
            let rk = |m: &SparseMatrix<i64>| smith_normal_form(&ZMat::from_sparse(m)).unwrap().rank;
            let (b_i, b_next) = (rk(&c.boundary(i)), rk(&c.boundary(i + 1)));
            prop_assert_eq!(hz.rank + b_next + b_i, c.dim(i));
            chi += if i % 2 == 0 { hz.rank as i64 } else { -(hz.rank as i64) };
        }
        prop_assert_eq!(chi, k.euler_characteristic());
    }

    #[test]
    fn subdivision_preserves_homology(k in random_complex()) {
        let (sd, map) = k.barycentric_subdivide();
        let (c, cs) = (ChainComplex::of_complex(&k), ChainComplex::of_complex(&sd));
        let f = ChainMap { lowest: 0, maps: map.carry.clone() };
        prop_assert!(f.verify(&c, &cs).is_ok());
        for i in c.degrees() {
            let (h, hs) = (homology(&c, i, Ring::Integer).unwrap(), homology(&cs, i, Ring::Integer).unwrap());
            prop_assert_eq!(&h.torsion, &hs.torsion);
            let m = induced_map(&f, &c, &cs, &h, &hs).unwrap();
            prop_assert_eq!(m.rank(), h.rank);
            prop_assert_eq!(h.rank, hs.rank);
        }
    }
}
