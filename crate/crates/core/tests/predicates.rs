use k4graph_core::catalog::shared;
use k4graph_core::classes::{
    classify_element, construct_witness, exists_class, search_witness, target_square, ElementClass,
};
use num::BigInt;

#[test]
fn every_true_predicate_has_a_witness() {
    let mut checked = 0;
    for v in shared().iter() {
        for n in [0u8, 1] {
            for cls in ElementClass::ALL {
                if !exists_class(v, n, cls) {
                    continue;
                }
                let x = construct_witness(v, n, cls)
                    .unwrap_or_else(|e| panic!("{} n={n} {cls}: {e}", v.id));
                assert_eq!(v.lminus.norm(&x).unwrap(), BigInt::from(target_square(n)), "{}", v.id);
                assert_eq!(classify_element(&v.lminus, &x).unwrap(), cls, "{}", v.id);
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn false_predicates_have_no_small_witness() {
    for v in shared().iter().filter(|v| v.lminus.rank() <= 12) {
        for n in [0u8, 1] {
            for cls in ElementClass::ALL {
                if exists_class(v, n, cls) {
                    continue;
                }
                let found = search_witness(&v.lminus, target_square(n), cls, 3).unwrap();
                assert_eq!(found, None, "{} n={n} {cls}", v.id);
            }
        }
    }
}

#[test]
fn false_predicates_hold_on_large_lattices_too() {
    for v in shared().iter().filter(|v| v.lminus.rank() > 12) {
        for n in [0u8, 1] {
            for cls in ElementClass::ALL {
                if !exists_class(v, n, cls) {
                    let found = search_witness(&v.lminus, target_square(n), cls, 2).unwrap();
                    assert_eq!(found, None, "{} n={n} {cls}", v.id);
                }
            }
        }
    }
}
