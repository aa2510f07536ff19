//! Duals of finitely generated discrete groups: every irreducible is a group
//! element of dimension one and fusion is the group product.
//!
//! Supported presentations are free products of factors `ℤ` or `ℤ/m`, and
//! direct products of the same factors (so `ℤ^d` is a direct product of
//! `d` copies of `ℤ`). Elements are kept in normal form as syllable lists.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::powers::region::{Letter, LetterCodec};
use crate::semiring::{FusionRules, Terms};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FactorKind {
    Integers,
    Cyclic(u32),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factor {
    pub kind: FactorKind,
    pub name: String,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProductKind {
    Free,
    Direct,
}

/// Normal form: syllables `(factor, exponent)` with nonzero reduced
/// exponents. Free products never have equal adjacent factors; direct
/// products list each factor at most once, in factor order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct GroupWord(Vec<(u16, i64)>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    pub fn syllables(&self) -> &[(u16, i64)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct GroupDual {
    factors: Vec<Factor>,
    product: ProductKind,
    generators: Vec<(GroupWord, BigUint)>,
    alphabet: Option<Vec<Letter>>,
}

impl GroupDual {
    /// `generators` is the fundamental element as a list of group words; by
    /// default one generator per factor.
    pub fn new(factors: Vec<Factor>, product: ProductKind) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Config("group_dual needs at least one factor".into()));
        }
        if factors.len() > u16::MAX as usize {
            return Err(Error::Config("too many factors".into()));
        }
        for (i, f) in factors.iter().enumerate() {
            if let FactorKind::Cyclic(m) = f.kind {
                if m < 2 {
                    return Err(Error::Config(format!("Zmod needs m >= 2, got {m}")));
                }
            }
            let valid = !f.name.is_empty()
                && f.name != "e"
                && f.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && f.name.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
            if !valid {
                return Err(Error::Config(format!("invalid generator name `{}`", f.name)));
            }
            if factors[..i].iter().any(|g| g.name == f.name) {
                return Err(Error::Config(format!("duplicate generator name `{}`", f.name)));
            }
        }
        let tree_like = product == ProductKind::Free
            && factors.iter().all(|f| matches!(f.kind, FactorKind::Integers | FactorKind::Cyclic(2)));
        let alphabet = tree_like.then(|| {
            let mut letters = Vec::new();
            for (i, f) in factors.iter().enumerate() {
                letters.push(Letter { factor: i as u16, inverse: false });
                if f.kind == FactorKind::Integers {
                    letters.push(Letter { factor: i as u16, inverse: true });
                }
            }
            letters
        });
        let generators = (0..factors.len()).map(|i| (GroupWord(vec![(i as u16, 1)]), BigUint::one())).collect();
        Ok(GroupDual { factors, product, generators, alphabet })
    }

    /// Free product with default names (`g` for a single factor, else
    /// `g1, g2, …`).
    pub fn free(kinds: &[FactorKind]) -> Result<Self> {
        Self::new(default_factors(kinds), ProductKind::Free)
    }

    pub fn direct(kinds: &[FactorKind]) -> Result<Self> {
        Self::new(default_factors(kinds), ProductKind::Direct)
    }

    /// Free group on the given generator names.
    pub fn free_group(names: &[&str]) -> Result<Self> {
        let factors = names.iter().map(|n| Factor { kind: FactorKind::Integers, name: n.to_string() }).collect();
        Self::new(factors, ProductKind::Free)
    }

    pub fn with_generators(mut self, generators: Vec<(GroupWord, BigUint)>) -> Self {
        self.generators = generators;
        self
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn product_kind(&self) -> ProductKind {
        self.product
    }

    fn reduce_exp(&self, factor: u16, e: i64) -> i64 {
        match self.factors[factor as usize].kind {
            FactorKind::Integers => e,
            FactorKind::Cyclic(m) => e.rem_euclid(m as i64),
        }
    }

    fn push_syllable(&self, word: &mut Vec<(u16, i64)>, (f, e): (u16, i64)) {
        let e = self.reduce_exp(f, e);
        if e == 0 {
            return;
        }
        match self.product {
            ProductKind::Free => {
                if let Some(last) = word.last_mut() {
                    if last.0 == f {
                        let merged = self.reduce_exp(f, last.1 + e);
                        if merged == 0 {
                            word.pop();
                        } else {
                            last.1 = merged;
                        }
                        return;
                    }
                }
                word.push((f, e));
            }
            ProductKind::Direct => match word.binary_search_by_key(&f, |s| s.0) {
                Ok(i) => {
                    let merged = self.reduce_exp(f, word[i].1 + e);
                    if merged == 0 {
                        word.remove(i);
                    } else {
                        word[i].1 = merged;
                    }
                }
                Err(i) => word.insert(i, (f, e)),
            },
        }
    }

    pub fn multiply(&self, g: &GroupWord, h: &GroupWord) -> GroupWord {
        let mut out = g.0.clone();
        for &s in &h.0 {
            self.push_syllable(&mut out, s);
        }
        GroupWord(out)
    }

    pub fn inverse(&self, g: &GroupWord) -> GroupWord {
        let mut out = Vec::with_capacity(g.0.len());
        for &(f, e) in g.0.iter().rev() {
            self.push_syllable(&mut out, (f, -e));
        }
        GroupWord(out)
    }

    pub fn generator(&self, factor: usize) -> GroupWord {
        GroupWord(vec![(factor as u16, 1)])
    }

    /// Word length with respect to the letters `g_i^{±1}` (one letter per
    /// syllable for finite factors of order two, `|e|` letters otherwise).
    pub fn letter_length(&self, g: &GroupWord) -> usize {
        g.0.iter()
            .map(|&(f, e)| match self.factors[f as usize].kind {
                FactorKind::Cyclic(2) => 1,
                _ => e.unsigned_abs() as usize,
            })
            .sum()
    }

    fn factor_index(&self, name: &str) -> Option<u16> {
        self.factors.iter().position(|f| f.name == name).map(|i| i as u16)
    }

    /// Closed walk counts inside one factor for the step weights `steps`.
    fn factor_returns(&self, factor: u16, steps: &BTreeMap<i64, BigUint>, len: usize) -> Vec<BigUint> {
        let mut dist: HashMap<i64, BigUint> = HashMap::from([(0, BigUint::one())]);
        let mut out = vec![BigUint::one()];
        for _ in 0..len {
            let mut next: HashMap<i64, BigUint> = HashMap::new();
            for (pos, count) in &dist {
                for (step, w) in steps {
                    let to = self.reduce_exp(factor, pos + step);
                    *next.entry(to).or_default() += count * w;
                }
            }
            out.push(next.get(&0).cloned().unwrap_or_default());
            dist = next;
        }
        out
    }
}

fn default_factors(kinds: &[FactorKind]) -> Vec<Factor> {
    kinds
        .iter()
        .enumerate()
        .map(|(i, &kind)| Factor { kind, name: if kinds.len() == 1 { "g".into() } else { format!("g{}", i + 1) } })
        .collect()
}

type Series = Vec<BigInt>;

fn series_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Series {
    let mut out = vec![BigInt::zero(); len + 1];
    for (i, x) in a.iter().enumerate().take(len + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of a series with constant term one.
fn series_inv(a: &[BigInt], len: usize) -> Series {
    let mut out = vec![BigInt::zero(); len + 1];
    out[0] = BigInt::one();
    for m in 1..=len {
        let mut acc = BigInt::zero();
        for j in 1..=m.min(a.len() - 1) {
            acc += &a[j] * &out[m - j];
        }
        out[m] = -acc;
    }
    out
}

fn to_unsigned(v: &BigInt) -> BigUint {
    debug_assert!(v.sign() != Sign::Minus, "walk counts are non-negative");
    v.magnitude().clone()
}

impl FusionRules for GroupDual {
    type Label = GroupWord;

    fn descriptor(&self) -> String {
        let factors: Vec<String> = self
            .factors
            .iter()
            .map(|f| match f.kind {
                FactorKind::Integers => format!("Z({})", f.name),
                FactorKind::Cyclic(m) => format!("Zmod{}({})", m, f.name),
            })
            .collect();
        let gens: Vec<String> =
            self.generators.iter().map(|(g, m)| format!("{}*{}", m, self.format_label(g))).collect();
        let product = match self.product {
            ProductKind::Free => "free",
            ProductKind::Direct => "direct",
        };
        format!("group_dual:{product}:{}:gens={}", factors.join(","), gens.join("+"))
    }

    fn unit(&self) -> GroupWord {
        GroupWord::identity()
    }

    fn conj(&self, a: &GroupWord) -> GroupWord {
        self.inverse(a)
    }

    fn dim(&self, _a: &GroupWord) -> BigUint {
        BigUint::one()
    }

    fn tensor_irr(&self, a: &GroupWord, b: &GroupWord) -> Terms<GroupWord> {
        vec![(self.multiply(a, b), BigUint::one())]
    }

    fn fundamental(&self) -> Terms<GroupWord> {
        self.generators.clone()
    }

    fn format_label(&self, a: &GroupWord) -> String {
        if a.0.is_empty() {
            return "e".into();
        }
        a.0.iter()
            .map(|&(f, e)| {
                let name = &self.factors[f as usize].name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn parse_label(&self, text: &str) -> Result<GroupWord> {
        let bad = |reason: String| Error::InvalidLabel { label: text.to_string(), reason };
        let mut word = Vec::new();
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(bad("empty word".into()));
        }
        for tok in tokens {
            if tok == "e" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| bad(format!("bad exponent in `{tok}`")))?),
                None => (tok, 1),
            };
            let f = self.factor_index(name).ok_or_else(|| bad(format!("unknown generator `{name}`")))?;
            self.push_syllable(&mut word, (f, exp));
        }
        Ok(GroupWord(word))
    }

    fn memoize(&self) -> bool {
        false
    }

    /// Free products: a first return to `e` whose first step lies in factor
    /// `i` is a first-return walk inside factor `i` in which each of its
    /// intermediate sites may host any number of first-return excursions
    /// starting in other factors. With `E_i` the first-return series of the
    /// factor walk and `D_i = 1/(1 − Σ_{j≠i} F_j)`,
    /// `F_i(z) = Σ_k e_{i,k} z^k D_i^{k−1}` and `G = 1/(1 − Σ_i F_i)`.
    /// A unit term in `x` is a lazy step, folded in by a binomial transform.
    fn unit_returns(&self, x: &BTreeMap<GroupWord, BigUint>, len: usize) -> Option<Vec<BigUint>> {
        if self.product != ProductKind::Free {
            return None;
        }
        let mut lazy = BigUint::zero();
        let mut per_factor: BTreeMap<u16, BTreeMap<i64, BigUint>> = BTreeMap::new();
        for (g, m) in x {
            match g.0.as_slice() {
                [] => lazy = m.clone(),
                [(f, e)] => {
                    *per_factor.entry(*f).or_default().entry(*e).or_default() += m;
                }
                _ => return None,
            }
        }
        let first_returns: Vec<Series> = per_factor
            .iter()
            .map(|(f, steps)| {
                let g: Series = self.factor_returns(*f, steps, len).into_iter().map(BigInt::from).collect();
                let inv = series_inv(&g, len);
                let mut e: Series = inv.into_iter().map(|c| -c).collect();
                e[0] = BigInt::zero();
                e
            })
            .collect();

        let k = first_returns.len();
        let mut f: Vec<Series> = vec![vec![BigInt::zero(); len + 1]; k];
        for _ in 0..=len + 1 {
            let total: Series = (0..=len).map(|m| f.iter().map(|s| &s[m]).sum()).collect();
            let next: Vec<Series> = (0..k)
                .map(|i| {
                    let mut denom: Series = (0..=len).map(|m| -(&total[m] - &f[i][m])).collect();
                    denom[0] += 1;
                    let d = series_inv(&denom, len);
                    let e = &first_returns[i];
                    // Horner in (z·D): e_1 + zD(e_2 + zD(e_3 + …)), then times z.
                    let mut acc: Series = vec![BigInt::zero(); len + 1];
                    for j in (1..=len).rev() {
                        let mut shifted = vec![BigInt::zero(); len + 1];
                        let zd = series_mul(&d, &acc, len);
                        shifted[1..=len].clone_from_slice(&zd[..len]);
                        shifted[0] += &e[j];
                        acc = shifted;
                    }
                    let mut out = vec![BigInt::zero(); len + 1];
                    out[1..=len].clone_from_slice(&acc[..len]);
                    out
                })
                .collect();
            if next == f {
                break;
            }
            f = next;
        }
        let mut denom: Series = (0..=len).map(|m| -f.iter().map(|s| &s[m]).sum::<BigInt>()).collect();
        denom[0] += 1;
        let returns: Vec<BigUint> = series_inv(&denom, len).iter().map(to_unsigned).collect();

        if lazy.is_zero() {
            return Some(returns);
        }
        let mut out = Vec::with_capacity(len + 1);
        let lazy_pows: Vec<BigUint> =
            std::iter::successors(Some(BigUint::one()), |p| Some(p * &lazy)).take(len + 1).collect();
        for m in 0..=len {
            let mut binom = BigUint::one();
            let mut acc = BigUint::zero();
            for j in 0..=m {
                acc += &binom * &lazy_pows[m - j] * &returns[j];
                binom = binom * (m - j) / (j + 1);
            }
            out.push(acc);
        }
        Some(out)
    }

    fn letter_codec(&self) -> Option<&dyn LetterCodec<GroupWord>> {
        self.alphabet.is_some().then_some(self as &dyn LetterCodec<GroupWord>)
    }
}

impl LetterCodec<GroupWord> for GroupDual {
    fn alphabet(&self) -> &[Letter] {
        self.alphabet.as_deref().unwrap_or(&[])
    }

    fn inverse_letter(&self, l: Letter) -> Letter {
        match self.factors[l.factor as usize].kind {
            FactorKind::Integers => Letter { factor: l.factor, inverse: !l.inverse },
            _ => l,
        }
    }

    fn to_letters(&self, g: &GroupWord) -> Vec<Letter> {
        let mut out = Vec::new();
        for &(f, e) in &g.0 {
            match self.factors[f as usize].kind {
                FactorKind::Integers => {
                    let l = Letter { factor: f, inverse: e < 0 };
                    out.extend(std::iter::repeat(l).take(e.unsigned_abs() as usize));
                }
                _ => out.push(Letter { factor: f, inverse: false }),
            }
        }
        out
    }

    fn from_letters(&self, word: &[Letter]) -> GroupWord {
        let mut out = Vec::new();
        for l in word {
            self.push_syllable(&mut out, (l.factor, if l.inverse { -1 } else { 1 }));
        }
        GroupWord(out)
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorKind::Integers => f.write_str("Z"),
            FactorKind::Cyclic(m) => write!(f, "Z/{m}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> GroupDual {
        GroupDual::free(&[FactorKind::Integers]).unwrap()
    }

    #[test]
    fn integer_products() {
        let g = z();
        let a = g.parse_label("g^2").unwrap();
        let b = g.parse_label("g^-2").unwrap();
        assert!(g.multiply(&a, &b).is_identity());
        assert_eq!(g.format_label(&g.multiply(&a, &a)), "g^4");
    }

    #[test]
    fn free_reduction() {
        let f2 = GroupDual::free_group(&["s", "t"]).unwrap();
        let s = f2.parse_label("s").unwrap();
        let t = f2.parse_label("t").unwrap();
        assert_eq!(f2.format_label(&f2.multiply(&s, &t)), "s t");
        let w = f2.parse_label("s t t^-1 s^-1").unwrap();
        assert!(w.is_identity());
        let w = f2.parse_label("s t s^-1").unwrap();
        assert_eq!(f2.format_label(&f2.inverse(&w)), "s t^-1 s^-1");
    }

    #[test]
    fn cyclic_reduction() {
        let g = GroupDual::free(&[FactorKind::Cyclic(3)]).unwrap();
        let a = g.parse_label("g^2").unwrap();
        assert_eq!(g.format_label(&g.multiply(&a, &a)), "g");
        assert_eq!(g.format_label(&g.inverse(&a)), "g");
    }

    #[test]
    fn direct_product_commutes() {
        let g = GroupDual::direct(&[FactorKind::Integers, FactorKind::Integers]).unwrap();
        let a = g.parse_label("g2 g1").unwrap();
        let b = g.parse_label("g1 g2").unwrap();
        assert_eq!(a, b);
        assert_eq!(g.format_label(&a), "g1 g2");
    }

    #[test]
    fn letters_round_trip() {
        let f2 = GroupDual::free_group(&["s", "t"]).unwrap();
        let w = f2.parse_label("s^3 t^-2 s").unwrap();
        let letters = f2.to_letters(&w);
        assert_eq!(letters.len(), 6);
        assert_eq!(f2.from_letters(&letters), w);
        assert!(GroupDual::free(&[FactorKind::Cyclic(3)]).unwrap().letter_codec().is_none());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(GroupDual::free(&[]).is_err());
        assert!(GroupDual::free(&[FactorKind::Cyclic(1)]).is_err());
        assert!(GroupDual::free_group(&["s", "s"]).is_err());
        assert!(GroupDual::free_group(&["e"]).is_err());
    }
}
