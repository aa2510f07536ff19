#![allow(dead_code)]

use fusion_core::characters::{Letter, PairingKind, StarWord};
use fusion_core::families::{AoRules, AuRules, AuWord, AutRules, GroupDual, GroupWord};
use fusion_core::{FusionElement, FusionRules, FusionSystem};
use num_bigint::BigUint;
use proptest::prelude::*;

pub fn element<R: FusionRules>(sys: &FusionSystem<R>, terms: Vec<(R::Label, u32)>) -> FusionElement<R::Label> {
    sys.element(terms.into_iter().map(|(l, m)| (l, BigUint::from(m))))
}

pub fn ao_label(max: u32) -> impl Strategy<Value = u32> + Clone {
    1..=max
}

pub fn aut_label(max: u32) -> impl Strategy<Value = u32> + Clone {
    0..=max
}

pub fn au_label(max_len: usize) -> impl Strategy<Value = AuWord> + Clone {
    proptest::collection::vec(prop_oneof![Just('a'), Just('b')], 0..=max_len).prop_map(|cs| {
        if cs.is_empty() {
            AuWord::empty()
        } else {
            cs.into_iter().collect::<String>().parse().unwrap()
        }
    })
}

/// Random words in the group, built from generator powers.
pub fn group_label(dual: GroupDual, max_syllables: usize) -> impl Strategy<Value = GroupWord> + Clone {
    let k = dual.factors().len();
    proptest::collection::vec((0..k, -3i64..=3), 0..=max_syllables).prop_map(move |syl| {
        let mut w = GroupWord::identity();
        for (f, e) in syl {
            let g = dual.generator(f);
            for _ in 0..e.unsigned_abs() {
                let step = if e < 0 { dual.inverse(&g) } else { g.clone() };
                w = dual.multiply(&w, &step);
            }
        }
        w
    })
}

pub fn terms<L: std::fmt::Debug + Clone>(
    label: impl Strategy<Value = L> + Clone,
) -> impl Strategy<Value = Vec<(L, u32)>> + Clone {
    proptest::collection::vec((label, 1u32..=3), 1..=3)
}

pub fn ao(n: u32) -> FusionSystem<AoRules> {
    FusionSystem::new(AoRules::new(n).unwrap())
}

pub fn aut(n: u32) -> FusionSystem<AutRules> {
    FusionSystem::new(AutRules::new(n).unwrap())
}

pub fn au(n: u32) -> FusionSystem<AuRules> {
    FusionSystem::new(AuRules::new(n).unwrap())
}

pub fn f2() -> FusionSystem<GroupDual> {
    FusionSystem::new(GroupDual::free_group(&["s", "t"]).unwrap())
}

pub fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

/// Enumerates pair partitions position by position, rejecting a new pair as
/// soon as it crosses an earlier one.
pub fn brute_pairings(w: &StarWord, kind: PairingKind) -> u64 {
    fn go(letters: &[Letter], used: &mut Vec<bool>, pairs: &mut Vec<(usize, usize)>, kind: PairingKind) -> u64 {
        let Some(i) = used.iter().position(|u| !u) else { return 1 };
        used[i] = true;
        let mut total = 0;
        for j in i + 1..letters.len() {
            if used[j] {
                continue;
            }
            if kind == PairingKind::Alternating && letters[i] == letters[j] {
                continue;
            }
            let crosses = pairs.iter().any(|&(a, b)| (a < i && i < b && b < j) || (i < a && a < j && j < b));
            if crosses {
                continue;
            }
            used[j] = true;
            pairs.push((i, j));
            total += go(letters, used, pairs, kind);
            pairs.pop();
            used[j] = false;
        }
        used[i] = false;
        total
    }
    let letters = w.letters();
    if letters.len() % 2 == 1 {
        return 0;
    }
    go(letters, &mut vec![false; letters.len()], &mut Vec::new(), kind)
}
