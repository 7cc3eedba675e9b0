use proptest::prelude::*;
use weightlab::duality::{
    cap_operator, gysin_square_check, intersection_number, last_vertex_map, pd_chain, pd_chain_identity, rho_pd_matrix,
    subdivision_in, transfer,
};
use weightlab::homology::{homology_ranks, mapping_cone, ChainComplex, ChainMap};
use weightlab::models;
use weightlab::ncd::{orient, NCDModel, StratumId};
use weightlab::simplicial::{is_dimensionally_transverse, support_intersection_dim, Cochain, SimplicialComplex};
use weightlab::triangulations::{complex, polygon_facets, torus_facets};

fn sid(v: &[usize]) -> StratumId {
    StratumId::new(v.to_vec()).unwrap()
}

fn oriented(facets: &[Vec<usize>]) -> (SimplicialComplex, Vec<i64>) {
    let k = complex(facets);
    let (o, _) = orient(&k, "test").unwrap();
    (k, o)
}

#[test]
fn pd_of_one_is_the_subdivided_fundamental_cycle() {
    let (t, o) = oriented(&torus_facets());
    let one = Cochain::unit(&t);
    let pd = pd_chain(&t, &t, &o, &one).unwrap();
    let (sd, map) = t.barycentric_subdivide();
    let z = weightlab::simplicial::Chain::from_terms(2, t.simplices(2).iter().cloned().zip(o.iter().copied()));
    assert_eq!(pd, map.apply(&t, &sd, &z));
    assert_eq!(last_vertex_map(&t, &pd), z);
}

#[test]
fn pd_of_an_edge_on_a_triangle_circle() {
    let (c, o) = oriented(&polygon_facets(3));
    let e = c.simplices(1)[0].clone();
    let phi = Cochain::from_values(1, [(e, 1i64)]);
    let pd = pd_chain(&c, &c, &o, &phi).unwrap();
    assert_eq!(pd.degree(), 0);
    let total: i64 = pd.terms().values().sum();
    assert_eq!(total.abs(), 1);
}

#[test]
fn pd_is_a_chain_map_on_every_stratum() {
    for spec in [models::torus_point(), models::sphere_point(), models::three_spheres()] {
        let m = spec.build().unwrap();
        for st in m.strata() {
            for i in 0..=st.dim() {
                assert!(pd_chain_identity(m.x(), &st.complex, &st.orientation, i).unwrap(), "{:?} i={i}", st.id);
            }
        }
    }
}

#[test]
fn pd_is_an_integral_quasi_isomorphism() {
    let m = models::three_spheres().build().unwrap();
    for st in m.strata() {
        let d = st.dim();
        let cochains = ChainComplex::cochains_regraded(&st.complex, d);
        let chains = ChainComplex::of_complex(&st.complex);
        let f = ChainMap {
            lowest: 0,
            maps: (0..=d).map(|k| rho_pd_matrix(&st.complex, &st.orientation, d - k).unwrap()).collect(),
        };
        f.verify(&cochains, &chains).unwrap();
        let cone = mapping_cone(&f, &cochains, &chains).unwrap();
        for h in homology_ranks(&cone).unwrap() {
            assert_eq!((h.rank, h.torsion.len()), (0, 0), "{:?} degree {}", st.id, h.degree);
        }
    }
}

#[test]
fn transfer_of_the_torus_to_a_point() {
    let m = models::torus_point().build().unwrap();
    let t = transfer(&m, &StratumId::ambient(), 0, 2).unwrap();
    assert_eq!(t.matrix, vec![vec![1]]);
    let r = m.with_reversed(&StratumId::ambient());
    assert_eq!(transfer(&r, &StratumId::ambient(), 0, 2).unwrap().matrix, vec![vec![-1]]);
    // H_1 of the torus lands in H_{-1} of a point
    assert!(transfer(&m, &StratumId::ambient(), 0, 1).unwrap().matrix.is_empty());
}

#[test]
fn transfer_vanishes_from_odd_sphere_homology() {
    let m = models::three_spheres().build().unwrap();
    let t = transfer(&m, &sid(&[0]), 1, 1).unwrap();
    assert!(t.matrix.iter().flatten().all(|v| *v == 0));
    let p = transfer(&m, &sid(&[0, 1]), 2, 0).unwrap();
    assert!(p.matrix.is_empty());
}

#[test]
fn intersection_numbers_of_three_spheres() {
    let m = models::three_spheres().build().unwrap();
    let mut table = vec![vec![0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            table[a][b] = intersection_number(&m, a, b).unwrap();
        }
    }
    assert_eq!(table, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 2]]);
}

#[test]
fn transfers_commute_across_two_insertions() {
    let m = models::three_spheres().build().unwrap();
    let x = StratumId::ambient();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let ab = transfer(&m, &sid(&[a]), b, 2).unwrap();
        let a0 = transfer(&m, &x, a, 4).unwrap();
        let ba = transfer(&m, &sid(&[b]), a, 2).unwrap();
        let b0 = transfer(&m, &x, b, 4).unwrap();
        let mul = |p: &Vec<Vec<i64>>, q: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            p.iter().map(|r| (0..q[0].len()).map(|j| r.iter().zip(q).map(|(x, row)| x * row[j]).sum()).collect()).collect()
        };
        assert_eq!(mul(&ab.matrix, &a0.matrix), mul(&ba.matrix, &b0.matrix));
        assert_eq!(mul(&ab.matrix, &a0.matrix), vec![vec![1]]);
    }
}

#[test]
fn gysin_squares_commute() {
    for spec in [models::torus_point(), models::sphere_point(), models::three_spheres()] {
        let m = spec.build().unwrap();
        for st in m.strata() {
            for a in 0..m.num_components() {
                let r = gysin_square_check(&m, &st.id, a).unwrap();
                assert!(r.passed(), "{} {:?} α={a}: {r:?}", spec.name, st.id);
            }
        }
    }
}

#[test]
fn gysin_check_on_empty_intersection_is_vacuous() {
    let x = complex(&torus_facets());
    let m = NCDModel::new(1, x, vec![complex(&[vec![0]]), complex(&[vec![3]])], &[]).unwrap();
    let r = gysin_square_check(&m, &sid(&[0]), 1).unwrap();
    assert!(r.degrees.is_empty() && r.passed());
    assert!(cap_operator(&m, &sid(&[0]), 1, 0).is_zero());
}

#[test]
fn pd_chains_meet_a_point_stratum_in_a_point() {
    let m = models::three_spheres().build().unwrap();
    let x = m.x();
    let y0 = m.get(&sid(&[0])).unwrap();
    let pt = subdivision_in(x, &m.stratum(&sid(&[0, 1])));
    let phi = Cochain::unit(&y0.complex);
    let pd = pd_chain(x, &y0.complex, &y0.orientation, &phi).unwrap();
    assert_eq!(support_intersection_dim(&pd, &pt), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pd_commutes_with_coboundary_on_random_torus_cochains(vals in proptest::collection::vec(-3i64..=3, 21)) {
        let (t, o) = oriented(&torus_facets());
        let phi = Cochain::from_vec(&t, 1, &vals.iter().enumerate().filter(|(_, v)| **v != 0).map(|(i, v)| (i, *v)).collect::<Vec<_>>());
        let lhs = pd_chain(&t, &t, &o, &phi).unwrap().boundary();
        let rhs = pd_chain(&t, &t, &o, &phi.coboundary(&t)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pd_chains_are_transverse(seed in 0u64..1000) {
        let m = models::three_spheres().build().unwrap();
        let x = m.x();
        let strata: Vec<SimplicialComplex> = (1..=2).map(|p| subdivision_in(x, &m.y_p(p))).collect();
        let refs: Vec<&SimplicialComplex> = strata.iter().collect();
        let i = (seed % 5) as usize;
        let n = x.count(i);
        let vals: Vec<(usize, i64)> = (0..n).filter(|j| (seed as usize * 31 + j * 17) % 7 == 0).map(|j| (j, 1)).collect();
        let phi = Cochain::from_vec(x, i, &vals);
        let orientation = &m.get(&StratumId::ambient()).unwrap().orientation;
        let pd = pd_chain(x, x, orientation, &phi).unwrap();
        prop_assert!(is_dimensionally_transverse(&pd, &refs));
    }
}
