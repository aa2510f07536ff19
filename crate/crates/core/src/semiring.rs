//! Family-agnostic fusion semiring arithmetic.
//!
//! A family supplies its irreducible tensor rule through [`FusionRules`];
//! [`FusionSystem`] extends it bilinearly to [`FusionElement`]s, memoizing
//! irreducible-pair products in a shared cache.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cache::PairStore;
use crate::error::{Error, Result};
use crate::powers::region::LetterCodec;

/// Fingerprint of a concrete fusion system (family plus parameters).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FamilyId(pub u64);

impl FamilyId {
    pub fn from_descriptor(descriptor: &str) -> Self {
        let digest = Sha256::digest(descriptor.as_bytes());
        let mut bytes = [0u8; 8];
        bytes.copy_from_slice(&digest[..8]);
        FamilyId(u64::from_be_bytes(bytes))
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

pub type Terms<L> = Vec<(L, BigUint)>;

/// The irreducible-level data of a fusion family.
///
/// Implementations must satisfy the fusion axioms: `unit` is a two-sided
/// identity for `tensor_irr`, `conj` is an involution, and the unit occurs in
/// `tensor_irr(a, b)` exactly once when `b == conj(a)` and never otherwise.
pub trait FusionRules: Send + Sync {
    type Label: Clone + Ord + Eq + Hash + fmt::Debug + Send + Sync;

    /// Canonical text identifying the family and its parameters.
    fn descriptor(&self) -> String;

    fn unit(&self) -> Self::Label;

    fn conj(&self, a: &Self::Label) -> Self::Label;

    fn dim(&self, a: &Self::Label) -> BigUint;

    /// Decomposition of `a ⊗ b` into irreducibles. Labels may repeat; the
    /// caller accumulates.
    fn tensor_irr(&self, a: &Self::Label, b: &Self::Label) -> Terms<Self::Label>;

    /// The distinguished generating element of the family.
    fn fundamental(&self) -> Terms<Self::Label>;

    fn format_label(&self, a: &Self::Label) -> String;

    fn parse_label(&self, text: &str) -> Result<Self::Label>;

    /// Whether pair products are worth caching. Families whose products are
    /// a single cheap reduction opt out.
    fn memoize(&self) -> bool {
        true
    }

    /// Optional closed-form route for `mult(unit, x^{⊗m})`, `m = 0..=len`.
    fn unit_returns(&self, _x: &BTreeMap<Self::Label, BigUint>, _len: usize) -> Option<Vec<BigUint>> {
        None
    }

    /// Letter encoding for families whose irreducibles form a tree of reduced
    /// words (used by the set calculus for infinite subsets).
    fn letter_codec(&self) -> Option<&dyn LetterCodec<Self::Label>> {
        None
    }
}

/// A finite ℕ-combination of irreducibles of one family. The empty map is the
/// zero element; zero multiplicities are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FusionElement<L: Ord> {
    family: FamilyId,
    terms: BTreeMap<L, BigUint>,
}

impl<L: Ord + Clone> FusionElement<L> {
    pub fn zero(family: FamilyId) -> Self {
        FusionElement { family, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(family: FamilyId, terms: I) -> Self
    where
        I: IntoIterator<Item = (L, BigUint)>,
    {
        let mut map: BTreeMap<L, BigUint> = BTreeMap::new();
        for (label, m) in terms {
            if m.is_zero() {
                continue;
            }
            *map.entry(label).or_default() += m;
        }
        FusionElement { family, terms: map }
    }

    pub fn family(&self) -> FamilyId {
        self.family
    }

    pub fn terms(&self) -> &BTreeMap<L, BigUint> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<L, BigUint> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct irreducibles.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, label: &L) -> BigUint {
        self.terms.get(label).cloned().unwrap_or_default()
    }

    pub fn contains(&self, label: &L) -> bool {
        self.terms.contains_key(label)
    }

    pub fn support(&self) -> impl Iterator<Item = &L> {
        self.terms.keys()
    }

    pub fn scale(&self, k: &BigUint) -> Self {
        if k.is_zero() {
            return Self::zero(self.family);
        }
        FusionElement {
            family: self.family,
            terms: self.terms.iter().map(|(l, m)| (l.clone(), m * k)).collect(),
        }
    }

    fn same_family(&self, other: &Self) -> Result<()> {
        if self.family != other.family {
            return Err(Error::FamilyMismatch { left: self.family, right: other.family });
        }
        Ok(())
    }

    /// Pointwise sum of multiplicities.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_family(other)?;
        let mut terms = self.terms.clone();
        for (l, m) in &other.terms {
            *terms.entry(l.clone()).or_default() += m;
        }
        Ok(FusionElement { family: self.family, terms })
    }
}

/// A fusion family together with its pair-product cache.
pub struct FusionSystem<R: FusionRules> {
    rules: R,
    id: FamilyId,
    memo: RwLock<HashMap<(R::Label, R::Label), Arc<Terms<R::Label>>>>,
    store: Option<PairStore>,
    computed: AtomicUsize,
}

impl<R: FusionRules> fmt::Debug for FusionSystem<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FusionSystem")
            .field("descriptor", &self.rules.descriptor())
            .field("id", &self.id)
            .finish()
    }
}

impl<R: FusionRules> FusionSystem<R> {
    pub fn new(rules: R) -> Self {
        let id = FamilyId::from_descriptor(&rules.descriptor());
        FusionSystem { rules, id, memo: RwLock::new(HashMap::new()), store: None, computed: AtomicUsize::new(0) }
    }

    /// Attach an on-disk pair cache.
    pub fn with_store(mut self, store: PairStore) -> Self {
        self.store = Some(store);
        self
    }

    pub fn rules(&self) -> &R {
        &self.rules
    }

    pub fn id(&self) -> FamilyId {
        self.id
    }

    pub fn descriptor(&self) -> String {
        self.rules.descriptor()
    }

    /// Number of irreducible pair products actually computed from the rules
    /// (cache hits excluded).
    pub fn computed_pairs(&self) -> usize {
        self.computed.load(Ordering::Relaxed)
    }

    pub fn zero(&self) -> FusionElement<R::Label> {
        FusionElement::zero(self.id)
    }

    pub fn irr(&self, label: R::Label) -> FusionElement<R::Label> {
        FusionElement::from_terms(self.id, [(label, BigUint::one())])
    }

    pub fn unit_element(&self) -> FusionElement<R::Label> {
        self.irr(self.rules.unit())
    }

    pub fn element(&self, terms: impl IntoIterator<Item = (R::Label, BigUint)>) -> FusionElement<R::Label> {
        FusionElement::from_terms(self.id, terms)
    }

    pub fn fundamental(&self) -> FusionElement<R::Label> {
        self.element(self.rules.fundamental())
    }

    pub fn check(&self, x: &FusionElement<R::Label>) -> Result<()> {
        if x.family() != self.id {
            return Err(Error::FamilyMismatch { left: self.id, right: x.family() });
        }
        Ok(())
    }

    fn product_irr(&self, a: &R::Label, b: &R::Label) -> Arc<Terms<R::Label>> {
        if !self.rules.memoize() {
            return Arc::new(self.rules.tensor_irr(a, b));
        }
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.memo.read().expect("memo lock poisoned").get(&key) {
            return Arc::clone(hit);
        }
        let terms = self.load_stored(a, b).unwrap_or_else(|| {
            self.computed.fetch_add(1, Ordering::Relaxed);
            let terms = self.rules.tensor_irr(a, b);
            self.save_stored(a, b, &terms);
            terms
        });
        let terms = Arc::new(terms);
        // Inserts are idempotent: racing writers store equal values.
        self.memo.write().expect("memo lock poisoned").entry(key).or_insert_with(|| Arc::clone(&terms));
        terms
    }

    fn load_stored(&self, a: &R::Label, b: &R::Label) -> Option<Terms<R::Label>> {
        let store = self.store.as_ref()?;
        let raw = store.lookup(self.id, &self.rules.format_label(a), &self.rules.format_label(b))?;
        let mut terms = Vec::with_capacity(raw.len());
        for (label, mult) in raw {
            let label = self.rules.parse_label(&label).ok()?;
            let mult = mult.parse::<BigUint>().ok()?;
            terms.push((label, mult));
        }
        Some(terms)
    }

    fn save_stored(&self, a: &R::Label, b: &R::Label, terms: &Terms<R::Label>) {
        if let Some(store) = &self.store {
            let raw: Vec<(String, String)> =
                terms.iter().map(|(l, m)| (self.rules.format_label(l), m.to_string())).collect();
            store.store(self.id, &self.rules.format_label(a), &self.rules.format_label(b), &raw);
        }
    }

    /// Decomposition of a product of two irreducibles.
    pub fn tensor_labels(&self, a: &R::Label, b: &R::Label) -> FusionElement<R::Label> {
        let terms = self.product_irr(a, b);
        self.element(terms.iter().cloned())
    }

    /// Bilinear extension of the irreducible tensor rule.
    pub fn tensor(&self, x: &FusionElement<R::Label>, y: &FusionElement<R::Label>) -> Result<FusionElement<R::Label>> {
        self.check(x)?;
        self.check(y)?;
        let mut acc: BTreeMap<R::Label, BigUint> = BTreeMap::new();
        for (a, ma) in x.terms() {
            for (b, mb) in y.terms() {
                let coeff = ma * mb;
                for (c, mc) in self.product_irr(a, b).iter() {
                    *acc.entry(c.clone()).or_default() += &coeff * mc;
                }
            }
        }
        Ok(self.element(acc))
    }

    pub fn sum(&self, x: &FusionElement<R::Label>, y: &FusionElement<R::Label>) -> Result<FusionElement<R::Label>> {
        self.check(x)?;
        x.checked_add(y)
    }

    pub fn conj_element(&self, x: &FusionElement<R::Label>) -> Result<FusionElement<R::Label>> {
        self.check(x)?;
        Ok(self.element(x.terms().iter().map(|(l, m)| (self.rules.conj(l), m.clone()))))
    }

    pub fn multiplicity(&self, c: &R::Label, x: &FusionElement<R::Label>) -> Result<BigUint> {
        self.check(x)?;
        Ok(x.get(c))
    }

    /// `x^{⊗k}`, with `x^{⊗0}` the unit.
    pub fn element_power(&self, x: &FusionElement<R::Label>, k: usize) -> Result<FusionElement<R::Label>> {
        self.check(x)?;
        let mut acc = self.unit_element();
        for _ in 0..k {
            acc = self.tensor(&acc, x)?;
        }
        Ok(acc)
    }

    pub fn dim(&self, a: &R::Label) -> BigUint {
        self.rules.dim(a)
    }

    pub fn dim_element(&self, x: &FusionElement<R::Label>) -> Result<BigUint> {
        self.check(x)?;
        Ok(x.terms().iter().map(|(l, m)| m * self.rules.dim(l)).sum())
    }

    pub fn conj(&self, a: &R::Label) -> R::Label {
        self.rules.conj(a)
    }

    pub fn unit(&self) -> R::Label {
        self.rules.unit()
    }

    /// `mult(unit, x ⊗ y) = Σ_c x_c · y_{conj c}`.
    pub fn unit_pairing(&self, x: &FusionElement<R::Label>, y: &FusionElement<R::Label>) -> Result<BigUint> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.terms().iter().map(|(c, m)| m * y.get(&self.rules.conj(c))).sum())
    }

    /// `mult(unit, x^{⊗m})` for `m = 0..=len`.
    ///
    /// Uses the family's closed-form route when it has one; otherwise builds
    /// powers up to `⌈len/2⌉` and pairs them, since
    /// `mult(unit, x^{i} ⊗ x^{j}) = Σ_c (x^i)_c (x^j)_{conj c}`.
    pub fn unit_return_counts(&self, x: &FusionElement<R::Label>, len: usize) -> Result<Vec<BigUint>> {
        self.check(x)?;
        if let Some(counts) = self.rules.unit_returns(x.terms(), len) {
            return Ok(counts);
        }
        let half = len.div_ceil(2);
        let mut powers = Vec::with_capacity(half + 1);
        powers.push(self.unit_element());
        for k in 1..=half {
            let next = self.tensor(&powers[k - 1], x)?;
            powers.push(next);
        }
        (0..=len)
            .map(|m| {
                let lo = m / 2;
                self.unit_pairing(&powers[m - lo], &powers[lo])
            })
            .collect()
    }

    pub fn parse_label(&self, text: &str) -> Result<R::Label> {
        self.rules.parse_label(text.trim())
    }

    pub fn format_label(&self, a: &R::Label) -> String {
        self.rules.format_label(a)
    }

    /// Parses `"r1 + 2*r3"`-style expressions; `"0"` is the zero element.
    pub fn parse_element(&self, text: &str) -> Result<FusionElement<R::Label>> {
        let text = text.trim();
        if text == "0" {
            return Ok(self.zero());
        }
        let mut terms = Vec::new();
        for raw in text.split('+') {
            let raw = raw.trim();
            if raw.is_empty() {
                return Err(Error::InvalidElement(text.to_string()));
            }
            let (mult, label) = match raw.split_once('*') {
                Some((k, rest)) if !k.trim().is_empty() && k.trim().chars().all(|c| c.is_ascii_digit()) => {
                    (k.trim().parse::<BigUint>().map_err(|_| Error::InvalidElement(text.to_string()))?, rest.trim())
                }
                _ => (BigUint::one(), raw),
            };
            terms.push((self.parse_label(label)?, mult));
        }
        Ok(self.element(terms))
    }

    pub fn format_element(&self, x: &FusionElement<R::Label>) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        x.terms()
            .iter()
            .map(|(l, m)| {
                if m.is_one() {
                    self.format_label(l)
                } else {
                    format!("{}*{}", m, self.format_label(l))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// JSON array of `{"label": .., "mult": ".."}` objects.
    pub fn element_to_json(&self, x: &FusionElement<R::Label>) -> Value {
        Value::Array(
            x.terms()
                .iter()
                .map(|(l, m)| json!({"label": self.format_label(l), "mult": m.to_string()}))
                .collect(),
        )
    }

    /// Label → decimal-string map, the compact form used in reports.
    pub fn element_to_map(&self, x: &FusionElement<R::Label>) -> Value {
        let map: serde_json::Map<String, Value> =
            x.terms().iter().map(|(l, m)| (self.format_label(l), Value::String(m.to_string()))).collect();
        Value::Object(map)
    }

    pub fn element_from_json(&self, value: &Value) -> Result<FusionElement<R::Label>> {
        let bad = || Error::InvalidElement(value.to_string());
        let items = value.as_array().ok_or_else(bad)?;
        let mut terms = Vec::with_capacity(items.len());
        for item in items {
            let label = item.get("label").and_then(Value::as_str).ok_or_else(bad)?;
            let mult = item.get("mult").and_then(Value::as_str).ok_or_else(bad)?;
            let mult = mult.parse::<BigUint>().map_err(|_| bad())?;
            terms.push((self.parse_label(label)?, mult));
        }
        Ok(self.element(terms))
    }
}

/// Natural logarithm of a big integer as `f64`.
pub fn big_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        let v: f64 = num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::INFINITY);
        return v.ln();
    }
    let shift = bits - 64;
    let top: f64 = num_traits::ToPrimitive::to_f64(&(x >> shift)).unwrap_or(f64::INFINITY);
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}
