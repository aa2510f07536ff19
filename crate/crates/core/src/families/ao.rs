//! SU(2)-type fusion: irreducibles `r_k` (k ≥ 1) with the Clebsch-Gordan
//! interval rule. `r_1` is the unit and `r_2` the fundamental.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::semiring::{FusionRules, Terms};

#[derive(Clone, Debug)]
pub struct AoRules {
    n: u32,
}

impl AoRules {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("a_o requires n >= 2, got {n}")));
        }
        Ok(AoRules { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

/// Dimension of `r_k`: `d_1 = 1`, `d_2 = n`, `d_{k+1} = n·d_k − d_{k−1}`.
pub fn ao_dim(n: u32, k: u32) -> BigUint {
    assert!(k >= 1, "A_o labels start at 1");
    let n = BigUint::from(n);
    let (mut prev, mut cur) = (BigUint::one(), n.clone());
    if k == 1 {
        return prev;
    }
    for _ in 2..k {
        let next = &n * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

impl FusionRules for AoRules {
    type Label = u32;

    fn descriptor(&self) -> String {
        format!("a_o:n={}", self.n)
    }

    fn unit(&self) -> u32 {
        1
    }

    fn conj(&self, a: &u32) -> u32 {
        *a
    }

    fn dim(&self, a: &u32) -> BigUint {
        ao_dim(self.n, *a)
    }

    fn tensor_irr(&self, a: &u32, b: &u32) -> Terms<u32> {
        let lo = a.abs_diff(*b) + 1;
        let hi = a + b - 1;
        (lo..=hi).step_by(2).map(|c| (c, BigUint::one())).collect()
    }

    fn fundamental(&self) -> Terms<u32> {
        vec![(2, BigUint::one())]
    }

    fn format_label(&self, a: &u32) -> String {
        format!("r{a}")
    }

    fn parse_label(&self, text: &str) -> Result<u32> {
        let bad = |reason: &str| Error::InvalidLabel { label: text.to_string(), reason: reason.to_string() };
        let k: u32 = text.strip_prefix('r').ok_or_else(|| bad("expected r<k>"))?.parse().map_err(|_| bad("expected r<k>"))?;
        if k == 0 {
            return Err(bad("k must be at least 1"));
        }
        Ok(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_rule() {
        let r = AoRules::new(2).unwrap();
        assert_eq!(r.tensor_irr(&2, &2), vec![(1, BigUint::one()), (3, BigUint::one())]);
        assert_eq!(r.tensor_irr(&2, &3), vec![(2, BigUint::one()), (4, BigUint::one())]);
        assert_eq!(r.tensor_irr(&1, &7), vec![(7, BigUint::one())]);
    }

    #[test]
    fn dims() {
        assert_eq!(ao_dim(3, 3), BigUint::from(8u32));
        assert_eq!(ao_dim(3, 4), BigUint::from(21u32));
        for k in 1..20 {
            assert_eq!(ao_dim(2, k), BigUint::from(k));
        }
    }

    #[test]
    fn labels() {
        let r = AoRules::new(3).unwrap();
        assert_eq!(r.parse_label("r12").unwrap(), 12);
        assert!(r.parse_label("r0").is_err());
        assert!(r.parse_label("s1").is_err());
        assert!(AoRules::new(1).is_err());
    }
}
