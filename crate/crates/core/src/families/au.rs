//! Free fusion rules of `A_u(F)`: irreducibles are words over `{a, b}`
//! (`a` the fundamental, `b` its conjugate) and
//! `r_x ⊗ r_y = Σ_{x = vg, y = ḡw} r_{vw}`.
//!
//! The bar involution is the antimultiplicative extension of the letter swap
//! (reverse the word, then swap `a ↔ b`). It is the only extension for which
//! `r_{x̄}` is the conjugate of `r_x`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::semiring::{FusionRules, Terms};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct AuWord(Vec<u8>);

impl AuWord {
    pub fn empty() -> Self {
        AuWord(Vec::new())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::str::FromStr for AuWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        if text == "e" {
            return Ok(AuWord::empty());
        }
        if text.is_empty() || !text.bytes().all(|c| c == b'a' || c == b'b') {
            return Err(Error::InvalidLabel { label: text.to_string(), reason: "expected a word over {a,b} or e".into() });
        }
        Ok(AuWord(text.as_bytes().to_vec()))
    }
}

impl fmt::Display for AuWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("e")
        } else {
            f.write_str(std::str::from_utf8(&self.0).expect("ascii word"))
        }
    }
}

fn swap(c: u8) -> u8 {
    if c == b'a' {
        b'b'
    } else {
        b'a'
    }
}

/// Reverse and swap letters.
pub fn au_bar(w: &AuWord) -> AuWord {
    AuWord(w.0.iter().rev().map(|&c| swap(c)).collect())
}

#[derive(Clone, Debug)]
pub struct AuRules {
    n: u32,
}

impl AuRules {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("a_u requires n >= 2, got {n}")));
        }
        Ok(AuRules { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

impl FusionRules for AuRules {
    type Label = AuWord;

    fn descriptor(&self) -> String {
        format!("a_u:n={}", self.n)
    }

    fn unit(&self) -> AuWord {
        AuWord::empty()
    }

    fn conj(&self, a: &AuWord) -> AuWord {
        au_bar(a)
    }

    /// Prefix recursion from `r_w ⊗ r_x = r_{wx} + [last(w) = x̄]·r_{w minus last}`.
    fn dim(&self, a: &AuWord) -> BigUint {
        let n = BigUint::from(self.n);
        let (mut prev, mut cur) = (BigUint::zero(), BigUint::one());
        for (i, &c) in a.0.iter().enumerate() {
            let mut next = &n * &cur;
            if i > 0 && a.0[i - 1] == swap(c) {
                next -= &prev;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        cur
    }

    fn tensor_irr(&self, x: &AuWord, y: &AuWord) -> Terms<AuWord> {
        let mut out = Vec::new();
        for k in 0..=x.len().min(y.len()) {
            let (head, tail) = x.0.split_at(x.len() - k);
            let matches = tail.iter().rev().map(|&c| swap(c)).eq(y.0[..k].iter().copied());
            if !matches {
                // A failed split at k means every longer split fails too.
                break;
            }
            let mut w = head.to_vec();
            w.extend_from_slice(&y.0[k..]);
            out.push((AuWord(w), BigUint::one()));
        }
        out
    }

    fn fundamental(&self) -> Terms<AuWord> {
        vec![(AuWord(vec![b'a']), BigUint::one())]
    }

    fn format_label(&self, a: &AuWord) -> String {
        a.to_string()
    }

    fn parse_label(&self, text: &str) -> Result<AuWord> {
        text.parse()
    }

    /// Closed route for `x ∈ span{e, a, b}`: walks on words push any letter
    /// and pop the top letter `ℓ` with step `ℓ̄`, so the return series obeys
    /// `R = 1 + λ z R + 2 w_a w_b z² R²`.
    fn unit_returns(&self, x: &BTreeMap<AuWord, BigUint>, len: usize) -> Option<Vec<BigUint>> {
        let mut lazy = BigUint::zero();
        let mut wa = BigUint::zero();
        let mut wb = BigUint::zero();
        for (w, m) in x {
            match w.0.as_slice() {
                [] => lazy = m.clone(),
                [b'a'] => wa = m.clone(),
                [b'b'] => wb = m.clone(),
                _ => return None,
            }
        }
        let pair = BigUint::from(2u32) * wa * wb;
        let mut r: Vec<BigUint> = Vec::with_capacity(len + 1);
        for m in 0..=len {
            let mut v = if m == 0 { BigUint::one() } else { &lazy * &r[m - 1] };
            if m >= 2 {
                let conv: BigUint = (0..=m - 2).map(|i| &r[i] * &r[m - 2 - i]).sum();
                v += &pair * conv;
            }
            r.push(v);
        }
        Some(r)
    }
}
