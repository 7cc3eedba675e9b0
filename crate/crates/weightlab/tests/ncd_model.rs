use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weightlab::homology::{homology_ranks, ChainComplex};
use weightlab::models;
use weightlab::ncd::{sn_inverse_matrix, NCDModel, StratumId};
use weightlab::simplicial::{Chain, SimplicialComplex};
use weightlab::triangulations::{complex, rp2_facets, sphere_facets};
use weightlab::Error;

fn sid(v: &[usize]) -> StratumId {
    StratumId::new(v.to_vec()).unwrap()
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<(usize, i64)> {
    (0..n).filter_map(|i| {
        let v = rng.gen_range(-2i64..=2);
        (v != 0).then_some((i, v))
    })
    .collect()
}

#[test]
fn strata_of_three_spheres() {
    let m = models::three_spheres().build().unwrap();
    assert_eq!(m.stratum(&sid(&[0])).count(2), 4);
    for pair in [[0, 1], [0, 2], [1, 2]] {
        let s = m.stratum(&sid(&pair));
        assert_eq!(s.f_vector(), vec![1], "{pair:?}");
    }
    assert_eq!(m.level(2).len(), 3);
    assert!(m.level(3).is_empty());
    assert_eq!(m.level(0).len(), 1);
    assert_eq!(m.level(0)[0].complex, *m.x());
    assert!(!m.was_subdivided());
}

#[test]
fn disjoint_components_have_empty_intersection() {
    let x = complex(&sphere_facets(2));
    let m = NCDModel::new(1, x, vec![complex(&[vec![0]]), complex(&[vec![1]])], &[]).unwrap();
    assert!(m.stratum(&sid(&[0, 1])).is_empty());
}

#[test]
fn mv_operator_on_a_double_point() {
    let m = models::three_spheres().build().unwrap();
    let i = m.mv_operator(2, 0);
    // first point is Y_{0,1}; its rows in Ỹ¹ are the point inside Y_0 and inside Y_1
    let offsets = m.level_offsets(1, 0);
    let p = m.stratum(&sid(&[0, 1])).simplices(0)[0].clone();
    let row_in = |a: usize| offsets[a].1 + m.stratum(&sid(&[a])).index_of(&p).unwrap();
    assert_eq!(i.get(row_in(0), 0), -1);
    assert_eq!(i.get(row_in(1), 0), 1);
    assert_eq!(i.col(0).len(), 2);
}

#[test]
fn mv_operator_axioms() {
    for spec in [models::three_spheres(), models::torus_point(), models::two_spheres_one_point()] {
        let m = spec.build().unwrap();
        for p in 1..=m.max_level() {
            for k in 0..=4 {
                let ik = m.mv_operator(p, k);
                if p >= 2 {
                    assert!(m.mv_operator(p - 1, k).mul(&ik).is_zero(), "i² at p={p} k={k}");
                }
                if k >= 1 {
                    let a = m.level_boundary(p - 1, k).mul(&ik);
                    let b = m.mv_operator(p, k - 1).mul(&m.level_boundary(p, k));
                    assert!(a.add(&b).is_zero(), "i∂+∂i at p={p} k={k}");
                }
            }
        }
    }
}

#[test]
fn fundamental_cycles() {
    let m = models::torus_point().build().unwrap();
    let z = m.fundamental_cycle(&StratumId::ambient()).unwrap();
    assert_eq!(z.terms().len(), 14);
    assert!(z.terms().values().all(|v| v.abs() == 1));
    assert!(z.boundary().is_zero());
    let pt = m.fundamental_cycle(&sid(&[0])).unwrap();
    assert_eq!(pt.terms().values().copied().collect::<Vec<_>>(), vec![1]);

    let s = models::sphere_point().build().unwrap();
    let zs = s.fundamental_cycle(&StratumId::ambient()).unwrap();
    assert_eq!(zs.terms().len(), 4);
    assert!(zs.boundary().is_zero());

    let k = models::three_spheres().build().unwrap();
    for st in k.strata() {
        assert!(st.fundamental_cycle().boundary().is_zero(), "{:?}", st.id);
    }
}

#[test]
fn reversing_orientation_negates_cycle() {
    let m = models::torus_point().build().unwrap();
    let r = m.with_reversed(&StratumId::ambient());
    let a = m.fundamental_cycle(&StratumId::ambient()).unwrap();
    let b = r.fundamental_cycle(&StratumId::ambient()).unwrap();
    assert_eq!(a.plus(&b), Chain::zero(2));
}

#[test]
fn orientation_seed_flips_piece() {
    let mut spec = models::torus_point();
    let m0 = spec.build().unwrap();
    let first = m0.x().simplices(2)[0].clone();
    let sign = m0.fundamental_cycle(&StratumId::ambient()).unwrap().coefficient(&first);
    spec.orientation_seeds =
        vec![weightlab::ncd::OrientationSeed { stratum: vec![], simplex: first.vertices().to_vec(), sign: -sign }];
    let m1 = spec.build().unwrap();
    assert_eq!(m1.fundamental_cycle(&StratumId::ambient()).unwrap().coefficient(&first), -sign);
}

#[test]
fn validation_errors() {
    let rp2 = complex(&rp2_facets());
    assert!(matches!(NCDModel::new(1, rp2, vec![], &[]), Err(Error::NotOrientable(_))));
    let mut pinched = sphere_facets(2);
    pinched.push(vec![0, 1, 9]);
    assert!(matches!(NCDModel::new(1, complex(&pinched), vec![], &[]), Err(Error::NotPseudomanifold(_))));
    let x = complex(&sphere_facets(2));
    assert!(matches!(NCDModel::new(2, x.clone(), vec![], &[]), Err(Error::InvalidModel(_))));
    // a curve in a surface is not a divisor of the right dimension
    assert!(NCDModel::new(1, x, vec![complex(&[vec![0, 1]])], &[]).is_err());
}

#[test]
fn fullness_repair_subdivides_once() {
    let x = complex(&sphere_facets(4));
    let y = complex(&sphere_facets(2));
    assert!(!y.is_full_in(&x));
    let m = NCDModel::new(2, x.clone(), vec![y], &[]).unwrap();
    assert!(m.was_subdivided());
    let y1 = m.stratum(&sid(&[0]));
    assert!(y1.is_full_in(m.x()));
    assert_eq!(m.x().count(0), x.total_count());
    let h: Vec<usize> = homology_ranks(&ChainComplex::of_complex(&y1)).unwrap().iter().map(|h| h.rank).collect();
    assert_eq!(h, vec![1, 0, 1]);
}

fn ranks_and_torsion(k: &SimplicialComplex) -> Vec<(usize, Vec<i64>)> {
    homology_ranks(&ChainComplex::of_complex(k)).unwrap().into_iter().map(|h| (h.rank, h.torsion)).collect()
}

#[test]
fn milnor_realization_has_the_homology_of_y() {
    for spec in [models::three_spheres(), models::torus_point(), models::two_spheres_one_point()] {
        let m = spec.build().unwrap();
        let sy = m.milnor_realization();
        assert_eq!(ranks_and_torsion(&sy.complex), ranks_and_torsion(&m.union_y()), "{}", spec.name);
    }
}

#[test]
fn milnor_realization_shapes() {
    let m = models::two_spheres_one_point().build().unwrap();
    let sy = m.milnor_realization();
    // two spheres with the double point doubled, joined by one edge
    let ys = m.level(1).iter().map(|s| s.complex.count(0)).sum::<usize>();
    assert_eq!(sy.complex.count(0), ys);
    let y1_edges = m.level(1).iter().map(|s| s.complex.count(1)).sum::<usize>();
    assert_eq!(sy.complex.count(1), y1_edges + 1);

    let three = models::three_spheres().build().unwrap();
    let h = homology_ranks(&ChainComplex::of_complex(&three.milnor_realization().complex)).unwrap();
    assert_eq!(h[1].rank, 1);

    let one = models::torus_point().build().unwrap();
    let s1 = one.milnor_realization();
    assert_eq!(s1.complex.f_vector(), vec![1]);
}

#[test]
fn sn_inverse_intertwines_boundary_and_mv() {
    let m = models::three_spheres().build().unwrap();
    let sy = m.milnor_realization();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for p in 1..=m.max_level() {
        for k in 0..=(4 - 2 * p) {
            let sn = sn_inverse_matrix(&m, &sy, p, k);
            let lhs = if k + p >= 2 { sy.complex.boundary(k + p - 1).mul(&sn) } else { sn.clone() };
            let mut rhs = if k >= 1 { sn_inverse_matrix(&m, &sy, p, k - 1).mul(&m.level_boundary(p, k)) } else {
                weightlab::linalg::SparseMatrix::zeros(lhs.nrows(), lhs.ncols())
            };
            if p >= 2 {
                rhs = rhs.add(&sn_inverse_matrix(&m, &sy, p - 1, k).mul(&m.mv_operator(p, k)));
            }
            if k + p >= 2 {
                assert_eq!(lhs, rhs, "p={p} k={k}");
                for _ in 0..10 {
                    let v = random_vec(&mut rng, m.level_dim(p, k));
                    assert_eq!(lhs.mul_vec(&v), rhs.mul_vec(&v));
                    checked += 1;
                }
            }
        }
    }
    assert!(checked >= 30);
}

#[test]
fn sn_inverse_of_a_point_is_an_edge() {
    let m = models::two_spheres_one_point().build().unwrap();
    let sy = m.milnor_realization();
    let id = sid(&[0, 1]);
    let p = m.fundamental_cycle(&id).unwrap();
    let e = m.sn_inverse(&sy, &id, &p);
    assert_eq!(e.degree(), 1);
    assert_eq!(e.terms().len(), 1);
    let one = sid(&[0]);
    let xi = m.fundamental_cycle(&one).unwrap();
    assert_eq!(m.sn_inverse(&sy, &one, &xi).terms().len(), xi.terms().len());
}

#[test]
fn dual_graphs() {
    let t = models::torus_component().build().unwrap();
    let g = t.dual_graph().unwrap();
    assert_eq!(g.genera(), &[1]);
    assert_eq!(g.intersection_matrix(), vec![vec![0]]);

    let two = models::two_spheres_two_points().build().unwrap();
    assert!(two.was_subdivided());
    let g = two.dual_graph().unwrap();
    assert_eq!(g.genera(), &[0, 0]);
    assert_eq!(g.intersection_matrix(), vec![vec![0, 2], vec![2, 0]]);

    let mut spec = models::three_spheres();
    spec.self_intersections = Some(vec![-2, -2, -2]);
    let g = spec.build().unwrap().dual_graph().unwrap();
    assert_eq!(g.intersection_matrix(), vec![vec![-2, 1, 1], vec![1, -2, 1], vec![1, 1, -2]]);

    let mut missing = models::three_spheres();
    missing.self_intersections = None;
    assert!(matches!(missing.build().unwrap().dual_graph(), Err(Error::MissingSelfIntersection(_))));
}
