//! SO(3)-type fusion of `A^aut(B)` for `dim B = n ≥ 4`: irreducibles `s_k`
//! (k ≥ 0), interval rule `s_a ⊗ s_b = s_{|a−b|} + … + s_{a+b}`, and the
//! fundamental coaction `s_0 + s_1` of dimension `n`.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::semiring::{FusionRules, Terms};

#[derive(Clone, Debug)]
pub struct AutRules {
    n: u32,
}

impl AutRules {
    /// For `n ≤ 3` the object is a classical symmetric group, not covered here.
    pub fn new(n: u32) -> Result<Self> {
        if n < 4 {
            return Err(Error::Config(format!("aut requires n >= 4, got {n}")));
        }
        Ok(AutRules { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

/// `d_0 = 1`, `d_1 = n − 1`, `d_{k+1} = (n−2)·d_k − d_{k−1}`.
pub fn aut_dim(n: u32, k: u32) -> BigUint {
    let step = BigUint::from(n - 2);
    let (mut prev, mut cur) = (BigUint::one(), BigUint::from(n - 1));
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = &step * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

impl FusionRules for AutRules {
    type Label = u32;

    fn descriptor(&self) -> String {
        format!("aut:n={}", self.n)
    }

    fn unit(&self) -> u32 {
        0
    }

    fn conj(&self, a: &u32) -> u32 {
        *a
    }

    fn dim(&self, a: &u32) -> BigUint {
        aut_dim(self.n, *a)
    }

    fn tensor_irr(&self, a: &u32, b: &u32) -> Terms<u32> {
        (a.abs_diff(*b)..=a + b).map(|c| (c, BigUint::one())).collect()
    }

    fn fundamental(&self) -> Terms<u32> {
        vec![(0, BigUint::one()), (1, BigUint::one())]
    }

    fn format_label(&self, a: &u32) -> String {
        format!("s{a}")
    }

    fn parse_label(&self, text: &str) -> Result<u32> {
        text.strip_prefix('s')
            .and_then(|k| k.parse().ok())
            .ok_or_else(|| Error::InvalidLabel { label: text.to_string(), reason: "expected s<k>".into() })
    }
}
