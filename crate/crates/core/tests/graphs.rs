use k4graph_core::catalog::shared;
use k4graph_core::classes::ElementClass;
use k4graph_core::graph::{build_k3_graph, build_k4_graph, flip, FlipTriple, IRR};
use k4graph_core::lattice::{direct_sum_all, GramLattice, LatticeVector, StandardLattice};
use num::BigInt;
use proptest::prelude::*;

fn uu() -> GramLattice {
    let u = StandardLattice::U.lattice();
    direct_sum_all([&u, &u])
}

/// Roots of `U ⊕ U` of the form `(a, b, c, d)` with `ab + cd = ±1`.
fn root() -> impl Strategy<Value = Vec<i64>> {
    (-3i64..=3, -3i64..=3, prop::sample::select(vec![1i64, -1])).prop_map(|(a, c, s)| {
        // with a = ±1 the first plane carries the whole pairing, else the second
        if a == 0 {
            vec![0, 0, c.signum().max(1), s]
        } else {
            let a = a.signum();
            vec![a, a * s, c, 0]
        }
    })
}

fn apply(l: &GramLattice, roots: &[Vec<i64>], x: &LatticeVector) -> LatticeVector {
    roots.iter().fold(x.clone(), |y, r| {
        l.reflect(&LatticeVector::from_ints(r), &y).unwrap()
    })
}

proptest! {
    #[test]
    fn flip_is_an_equivariant_involution(roots in prop::collection::vec(root(), 0..6)) {
        let l = uu();
        let t = FlipTriple::new(
            &l,
            LatticeVector::from_ints(&[1, 3, 0, 0]),
            LatticeVector::from_ints(&[0, 0, 1, -1]),
        ).unwrap();
        let moved = FlipTriple::new(&l, apply(&l, &roots, &t.h), apply(&l, &roots, &t.v)).unwrap();
        let f = flip(&l, &moved).unwrap();
        prop_assert_eq!(l.norm(&f.h).unwrap(), BigInt::from(6));
        prop_assert_eq!(l.norm(&f.v).unwrap(), BigInt::from(-2));
        prop_assert_eq!(&flip(&l, &f).unwrap(), &moved);
        let image = flip(&l, &t).unwrap();
        prop_assert_eq!(f.h, apply(&l, &roots, &image.h));
        prop_assert_eq!(f.v, apply(&l, &roots, &image.v));
    }
}

#[test]
fn graphs_share_all_but_one_vertex() {
    let k3 = build_k3_graph(shared()).unwrap();
    let k4 = build_k4_graph(shared()).unwrap().graph;
    let ids = |g: &k4graph_core::graph::DeformationGraph| {
        g.nodes().iter().map(|n| n.id.clone()).collect::<std::collections::BTreeSet<_>>()
    };
    let (a, b) = (ids(&k3), ids(&k4));
    assert_eq!(a.difference(&b).collect::<Vec<_>>(), ["[8S]_I"]);
    assert_eq!(b.difference(&a).collect::<Vec<_>>(), [IRR]);
    assert_eq!(k3.edge_count(), k4.edge_count());
}

#[test]
fn every_edge_is_labelled_by_its_square() {
    let k3 = build_k3_graph(shared()).unwrap();
    let k4 = build_k4_graph(shared()).unwrap().graph;
    assert!(k3.edges().iter().all(|e| e.square == -2));
    assert!(k4.edges().iter().all(|e| e.square == 6));
    // at most one edge per origin and class
    for g in [&k3, &k4] {
        for n in g.nodes() {
            for cls in ElementClass::ALL {
                assert!(g.out_edges(&n.id).filter(|e| e.class == cls).count() <= 1);
            }
        }
    }
}

#[test]
fn exports_are_stable() {
    let a = build_k4_graph(shared()).unwrap().graph;
    let b = build_k4_graph(shared()).unwrap().graph;
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_dot(), b.to_dot());
}
