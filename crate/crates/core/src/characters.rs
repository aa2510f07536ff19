//! Character moments through fusion, and a noncrossing-pairing count to
//! compare them against.
//!
//! The moment of a ∗-word `M` in `χ(u)` is `mult(1, M(u, ū))`, the number of
//! invariant vectors in the corresponding tensor word.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::semiring::{FamilyId, FusionElement, FusionRules, FusionSystem};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    X,
    XStar,
}

impl Letter {
    pub fn star(self) -> Letter {
        match self {
            Letter::X => Letter::XStar,
            Letter::XStar => Letter::X,
        }
    }
}

/// Word over `{X, X*}`; the empty word is the constant monomial 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct StarWord(pub Vec<Letter>);

impl StarWord {
    pub fn empty() -> Self {
        StarWord(Vec::new())
    }

    /// `X^k`.
    pub fn power(k: usize) -> Self {
        StarWord(vec![Letter::X; k])
    }

    /// `(XX*)^k`.
    pub fn alternating(k: usize) -> Self {
        StarWord([Letter::X, Letter::XStar].repeat(k))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Reverse and star every letter: the word of `M*`.
    pub fn adjoint(&self) -> StarWord {
        StarWord(self.0.iter().rev().map(|l| l.star()).collect())
    }

    /// Every word of length `n`, in lexicographic order with `X < X*`.
    pub fn all_of_length(n: usize) -> Vec<StarWord> {
        (0u64..1 << n)
            .map(|mask| {
                StarWord((0..n).map(|i| if mask >> (n - 1 - i) & 1 == 1 { Letter::XStar } else { Letter::X }).collect())
            })
            .collect()
    }
}

impl FromStr for StarWord {
    type Err = Error;

    /// Accepts `XX*X`, with optional whitespace; `1` or the empty string is
    /// the empty word.
    fn from_str(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "1" {
            return Ok(StarWord::empty());
        }
        let bytes = compact.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] != b'X' {
                return Err(Error::InvalidInput(format!("bad star word `{text}`")));
            }
            if bytes.get(i + 1) == Some(&b'*') {
                out.push(Letter::XStar);
                i += 2;
            } else {
                out.push(Letter::X);
                i += 1;
            }
        }
        Ok(StarWord(out))
    }
}

impl fmt::Display for StarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            f.write_str(match l {
                Letter::X => "X",
                Letter::XStar => "X*",
            })?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentReport {
    pub word: StarWord,
    pub value: BigUint,
    pub system: FamilyId,
}

impl MomentReport {
    pub fn to_json(&self) -> Value {
        json!({"word": self.word.to_string(), "value": self.value.to_string()})
    }
}

fn product<R: FusionRules>(
    sys: &FusionSystem<R>,
    u: &FusionElement<R::Label>,
    u_bar: &FusionElement<R::Label>,
    letters: &[Letter],
) -> Result<FusionElement<R::Label>> {
    let mut acc = sys.unit_element();
    for l in letters {
        let factor = match l {
            Letter::X => u,
            Letter::XStar => u_bar,
        };
        acc = sys.tensor(&acc, factor)?;
    }
    Ok(acc)
}

/// `mult(1, M(u, ū))`. The word is split in half and the halves are paired,
/// so only products of half the length are materialized.
pub fn moment<R: FusionRules>(sys: &FusionSystem<R>, u: &FusionElement<R::Label>, w: &StarWord) -> Result<BigUint> {
    let u_bar = sys.conj_element(u)?;
    let (left, right) = w.0.split_at(w.len() / 2);
    let left = product(sys, u, &u_bar, left)?;
    let right = product(sys, u, &u_bar, right)?;
    sys.unit_pairing(&left, &right)
}

/// Moments of `X^m` for `m = 1..=k`.
pub fn moment_sequence<R: FusionRules>(sys: &FusionSystem<R>, u: &FusionElement<R::Label>, k: usize) -> Result<Vec<BigUint>> {
    let mut counts = sys.unit_return_counts(u, k)?;
    counts.remove(0);
    Ok(counts)
}

/// Evaluates many words in parallel; output order follows input order.
pub fn moment_batch<R: FusionRules>(
    sys: &FusionSystem<R>,
    u: &FusionElement<R::Label>,
    words: &[StarWord],
) -> Result<Vec<MomentReport>> {
    words
        .par_iter()
        .map(|w| Ok(MomentReport { word: w.clone(), value: moment(sys, u, w)?, system: sys.id() }))
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairingKind {
    /// Any two positions may be paired.
    SelfAdjoint,
    /// Every pair joins an `X` with an `X*`.
    Alternating,
}

/// Number of noncrossing pair partitions of the positions of `w`.
///
/// Position 0 is paired with some `j`; noncrossing forces the stretches
/// strictly inside and strictly outside `(0, j)` to be paired among
/// themselves.
pub fn noncrossing_pairing_count(w: &StarWord, kind: PairingKind) -> BigUint {
    fn count(
        w: &[Letter],
        lo: usize,
        hi: usize,
        kind: PairingKind,
        memo: &mut HashMap<(usize, usize), BigUint>,
    ) -> BigUint {
        if lo == hi {
            return BigUint::one();
        }
        if (hi - lo) % 2 == 1 {
            return BigUint::zero();
        }
        if let Some(v) = memo.get(&(lo, hi)) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        for j in (lo + 1..hi).step_by(2) {
            if kind == PairingKind::Alternating && w[lo] == w[j] {
                continue;
            }
            let inside = count(w, lo + 1, j, kind, memo);
            if inside.is_zero() {
                continue;
            }
            total += inside * count(w, j + 1, hi, kind, memo);
        }
        memo.insert((lo, hi), total.clone());
        total
    }
    count(&w.0, 0, w.len(), kind, &mut HashMap::new())
}

/// Catalan numbers through `C_{k+1} = Σ_{i ≤ k} C_i C_{k−i}`.
pub fn catalan(k: usize) -> BigUint {
    catalan_table(k).pop().expect("nonempty table")
}

pub fn catalan_table(k: usize) -> Vec<BigUint> {
    let mut c = vec![BigUint::one()];
    for m in 0..k {
        let next = (0..=m).map(|i| &c[i] * &c[m - i]).sum();
        c.push(next);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{AoRules, AuRules, AutRules};

    fn w(s: &str) -> StarWord {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(w("XX*X").to_string(), "XX*X");
        assert_eq!(w("X X* X*").len(), 3);
        assert_eq!(w(""), StarWord::empty());
        assert_eq!(StarWord::empty().to_string(), "1");
        assert!("XY".parse::<StarWord>().is_err());
        assert_eq!(w("XXX*").adjoint(), w("XX*X*"));
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), BigUint::from(1u32));
        assert_eq!(catalan(3), BigUint::from(5u32));
        assert_eq!(catalan(10), BigUint::from(16796u32));
    }

    #[test]
    fn pairing_counts() {
        assert_eq!(noncrossing_pairing_count(&w("XX"), PairingKind::SelfAdjoint), BigUint::from(1u32));
        assert_eq!(noncrossing_pairing_count(&StarWord::power(8), PairingKind::SelfAdjoint), BigUint::from(14u32));
        assert_eq!(noncrossing_pairing_count(&w("XXX*X*"), PairingKind::Alternating), BigUint::from(1u32));
        assert_eq!(noncrossing_pairing_count(&StarWord::alternating(3), PairingKind::Alternating), BigUint::from(5u32));
        assert_eq!(noncrossing_pairing_count(&w("XXX"), PairingKind::SelfAdjoint), BigUint::zero());
    }

    #[test]
    fn moments_match_examples() {
        let ao = FusionSystem::new(AoRules::new(3).unwrap());
        let u = ao.fundamental();
        assert_eq!(moment(&ao, &u, &StarWord::empty()).unwrap(), BigUint::one());
        assert_eq!(moment(&ao, &u, &StarWord::power(4)).unwrap(), BigUint::from(2u32));

        let au = FusionSystem::new(AuRules::new(2).unwrap());
        let a = au.fundamental();
        assert_eq!(moment(&au, &a, &StarWord::alternating(3)).unwrap(), BigUint::from(5u32));
        assert_eq!(moment(&au, &a, &w("XX")).unwrap(), BigUint::zero());
    }

    #[test]
    fn sequences() {
        let ao = FusionSystem::new(AoRules::new(2).unwrap());
        let seq = moment_sequence(&ao, &ao.fundamental(), 6).unwrap();
        let expect: Vec<BigUint> = [0u32, 1, 0, 2, 0, 5].iter().map(|&v| BigUint::from(v)).collect();
        assert_eq!(seq, expect);

        let aut = FusionSystem::new(AutRules::new(4).unwrap());
        let seq = moment_sequence(&aut, &aut.fundamental(), 3).unwrap();
        let expect: Vec<BigUint> = [1u32, 2, 5].iter().map(|&v| BigUint::from(v)).collect();
        assert_eq!(seq, expect);
    }

    #[test]
    fn batch_keeps_order() {
        let ao = FusionSystem::new(AoRules::new(2).unwrap());
        let words = StarWord::all_of_length(4);
        let reports = moment_batch(&ao, &ao.fundamental(), &words).unwrap();
        assert_eq!(reports.len(), 16);
        for (r, word) in reports.iter().zip(&words) {
            assert_eq!(&r.word, word);
            assert_eq!(r.value, BigUint::from(2u32));
        }
        assert_eq!(reports[0].to_json(), json!({"word": "XXXX", "value": "2"}));
    }
}
