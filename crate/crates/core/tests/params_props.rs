mod common;

use std::collections::BTreeMap;

use common::*;
use fusion_core::params::{
    derive_irreducible_lists, is_kac, list_sum, list_tensor, modular_spectrum, qdim, Exponent, ParamList,
};
use fusion_core::{FusionRules, FusionSystem};

fn check_morphism<R: FusionRules>(
    sys: &FusionSystem<R>,
    lists: &BTreeMap<R::Label, ParamList>,
    values: &BTreeMap<String, f64>,
) {
    let labels: Vec<&R::Label> = lists.keys().collect();
    for a in &labels {
        for b in &labels {
            let product = sys.tensor_labels(a, b);
            if !product.support().all(|c| lists.contains_key(c)) {
                continue;
            }
            let mut rhs = ParamList::new();
            for (c, m) in product.terms() {
                for _ in 0..u64::try_from(m).unwrap() {
                    rhs = list_sum(&rhs, &lists[c]);
                }
            }
            assert_eq!(list_tensor(&lists[*a], &lists[*b]), rhs);
            let q = qdim(&rhs, values).unwrap();
            let expect = qdim(&lists[*a], values).unwrap() * qdim(&lists[*b], values).unwrap();
            assert!((q - expect).abs() <= 1e-9 * expect);
            let s = qdim(&list_sum(&lists[*a], &lists[*b]), values).unwrap();
            let expect = qdim(&lists[*a], values).unwrap() + qdim(&lists[*b], values).unwrap();
            assert!((s - expect).abs() <= 1e-9 * expect);
        }
    }
}

#[test]
fn su2_q_lists_form_a_morphism() {
    let sys = ao(2);
    let fund = ParamList::parse_all(["q", "q^-1"]).unwrap();
    let lists = derive_irreducible_lists(&sys, &fund, 8).unwrap();
    assert!(lists.len() >= 9);
    check_morphism(&sys, &lists, &BTreeMap::from([("q".to_string(), 1.7)]));
}

#[test]
fn free_unitary_lists_form_a_morphism() {
    let sys = au(2);
    let fund = ParamList::parse_all(["q", "q^-1"]).unwrap();
    let lists = derive_irreducible_lists(&sys, &fund, 4).unwrap();
    check_morphism(&sys, &lists, &BTreeMap::from([("q".to_string(), 0.8)]));
}

#[test]
fn kac_lists_are_dimensions() {
    let sys = aut(5);
    let lists = derive_irreducible_lists(&sys, &ParamList::trivial(5), 6).unwrap();
    for (label, l) in &lists {
        assert!(is_kac(l));
        let d: f64 = sys.dim(label).to_string().parse().unwrap();
        assert_eq!(qdim(l, &BTreeMap::new()).unwrap(), d);
        assert!(modular_spectrum(l).is_trivial());
    }
}

#[test]
fn inconsistent_lists_are_rejected() {
    let sys = ao(2);
    // Size matches but the product does not contain the unit's list.
    let fund = ParamList::parse_all(["q", "q"]).unwrap();
    assert!(derive_irreducible_lists(&sys, &fund, 3).is_err());
}

#[test]
fn lattice_closure() {
    let l = ParamList::parse_all(["q^1/2", "q^-1/2", "r", "r^-1", "3^1/3"]).unwrap();
    let lat = modular_spectrum(&l);
    let entries = l.entries();
    let mut members = Vec::new();
    for p in &entries {
        for q in &entries {
            let g = p.mul(q).pow(Exponent::from_integer(2));
            assert!(lat.contains(&g));
            members.push(g);
        }
    }
    for a in members.iter().take(12) {
        assert!(lat.contains(&a.inv()));
        for b in members.iter().skip(5).take(12) {
            assert!(lat.contains(&a.mul(b)));
            assert!(lat.contains(&a.mul(&b.inv())));
        }
    }
}
