mod common;

use common::*;
use fusion_core::families::GroupDual;
use fusion_core::{FusionRules, FusionSystem};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn check_semiring<R, S>(sys: &FusionSystem<R>, label: S)
where
    R: FusionRules,
    R::Label: std::fmt::Debug,
    S: Strategy<Value = R::Label> + Clone,
{
    let t = terms(label.clone());
    runner(1000)
        .run(&(t.clone(), t.clone(), t.clone()), |(x, y, z)| {
            let (x, y, z) = (element(sys, x), element(sys, y), element(sys, z));
            let left = sys.tensor(&sys.tensor(&x, &y).unwrap(), &z).unwrap();
            let right = sys.tensor(&x, &sys.tensor(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(&left, &right);

            let xy = sys.tensor(&x, &y).unwrap();
            let dx = sys.dim_element(&x).unwrap();
            let dy = sys.dim_element(&y).unwrap();
            prop_assert_eq!(sys.dim_element(&xy).unwrap(), &dx * &dy);
            prop_assert_eq!(sys.dim_element(&sys.sum(&x, &y).unwrap()).unwrap(), &dx + &dy);

            let lhs = sys.conj_element(&xy).unwrap();
            let rhs = sys.tensor(&sys.conj_element(&y).unwrap(), &sys.conj_element(&x).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);

            prop_assert_eq!(sys.tensor(&sys.unit_element(), &x).unwrap(), x.clone());
            prop_assert_eq!(sys.tensor(&x, &sys.unit_element()).unwrap(), x);
            Ok(())
        })
        .unwrap();

    runner(500)
        .run(&(label.clone(), label), |(a, b)| {
            let m = sys.multiplicity(&sys.unit(), &sys.tensor_labels(&a, &b)).unwrap();
            let expect = if b == sys.conj(&a) { BigUint::one() } else { BigUint::zero() };
            prop_assert_eq!(m, expect);
            prop_assert_eq!(sys.conj(&sys.conj(&a)), a);
            Ok(())
        })
        .unwrap();
}

#[test]
fn ao_semiring() {
    check_semiring(&ao(3), ao_label(8));
    check_semiring(&ao(2), ao_label(6));
}

#[test]
fn aut_semiring() {
    check_semiring(&aut(5), aut_label(6));
}

#[test]
fn au_semiring() {
    check_semiring(&au(2), au_label(4));
}

#[test]
fn group_semiring() {
    let free = GroupDual::free_group(&["s", "t"]).unwrap();
    check_semiring(&FusionSystem::new(free.clone()), group_label(free, 4));

    use fusion_core::families::FactorKind::*;
    let mixed = GroupDual::free(&[Integers, Cyclic(2), Cyclic(3)]).unwrap();
    check_semiring(&FusionSystem::new(mixed.clone()), group_label(mixed, 5));

    let lattice = GroupDual::direct(&[Integers, Integers, Cyclic(4)]).unwrap();
    check_semiring(&FusionSystem::new(lattice.clone()), group_label(lattice, 5));
}

#[test]
fn group_irreducibles_are_one_dimensional() {
    let free = GroupDual::free_group(&["s", "t"]).unwrap();
    let sys = FusionSystem::new(free.clone());
    runner(300)
        .run(&(group_label(free.clone(), 4), group_label(free, 4)), |(g, h)| {
            prop_assert_eq!(sys.dim(&g), BigUint::one());
            prop_assert_eq!(sys.tensor_labels(&g, &h).len(), 1);
            Ok(())
        })
        .unwrap();
}

#[test]
fn family_mismatch_is_an_error() {
    let a = ao(3);
    let b = ao(4);
    let x = a.fundamental();
    let y = b.fundamental();
    assert!(a.tensor(&x, &y).is_err());
    assert!(a.sum(&x, &y).is_err());
    assert!(a.multiplicity(&1, &y).is_err());
}

#[test]
fn spot_examples() {
    let z = FusionSystem::new(GroupDual::free_group(&["g"]).unwrap());
    let g1 = z.parse_element("g").unwrap();
    let g2 = z.parse_element("g^2").unwrap();
    assert_eq!(z.format_element(&z.tensor(&g1, &g2).unwrap()), "g^3");

    let ao2 = ao(2);
    let r2 = ao2.fundamental();
    assert_eq!(ao2.format_element(&ao2.tensor(&r2, &r2).unwrap()), "r1 + r3");
    assert_eq!(ao2.format_element(&ao2.element_power(&r2, 2).unwrap()), "r1 + r3");
    assert_eq!(ao2.element_power(&r2, 0).unwrap(), ao2.unit_element());
    let sq = ao2.tensor(&r2, &r2).unwrap();
    assert_eq!(ao2.multiplicity(&1, &sq).unwrap(), big(1));
    assert_eq!(ao2.multiplicity(&3, &sq).unwrap(), big(1));
    assert_eq!(ao2.multiplicity(&2, &sq).unwrap(), big(0));

    let s = ao2.sum(&ao2.parse_element("r1 + r2").unwrap(), &ao2.parse_element("r2 + r3").unwrap()).unwrap();
    assert_eq!(ao2.format_element(&s), "r1 + 2*r2 + r3");
    assert_eq!(ao2.sum(&ao2.zero(), &r2).unwrap(), r2);

    assert_eq!(ao(3).dim(&3), big(8));
    let au2 = au(2);
    assert_eq!(au2.dim(&"ab".parse().unwrap()), big(3));

    let json = ao2.element_to_json(&sq);
    assert_eq!(ao2.element_from_json(&json).unwrap(), sq);
}
