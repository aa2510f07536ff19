//! Positive parameters as exact monomials, their lists, and the list
//! invariant on a fusion system.
//!
//! A [`Param`] is `Π g^e` over named formal generators with rational
//! exponents. Integer literals are accepted as bases and factored into
//! primes, so `2^1/2` and `4^1/4` are the same parameter.

pub mod lattice;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::semiring::{FusionRules, FusionSystem};

pub use lattice::{lattice_membership, modular_spectrum, ExponentLattice};

pub type Exponent = Ratio<i64>;

/// Relative tolerance of the balance check `Σq² = Σq⁻²`.
pub const BALANCE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Param(BTreeMap<String, Exponent>);

fn is_prime_name(name: &str) -> bool {
    name.bytes().all(|c| c.is_ascii_digit())
}

fn factor_integer(mut n: u64) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl Param {
    pub fn one() -> Self {
        Param(BTreeMap::new())
    }

    pub fn generator(name: &str) -> Self {
        Param(BTreeMap::from([(name.to_string(), Exponent::one())]))
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = (String, Exponent)>) -> Self {
        let mut p = Param::one();
        for (g, e) in exps {
            p.add_exponent(g, e);
        }
        p
    }

    fn add_exponent(&mut self, g: String, e: Exponent) {
        let slot = self.0.entry(g.clone()).or_insert_with(Exponent::zero);
        *slot += e;
        if slot.is_zero() {
            self.0.remove(&g);
        }
    }

    pub fn exponents(&self) -> &BTreeMap<String, Exponent> {
        &self.0
    }

    pub fn exponent(&self, g: &str) -> Exponent {
        self.0.get(g).copied().unwrap_or_else(Exponent::zero)
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Param) -> Param {
        let mut p = self.clone();
        for (g, e) in &other.0 {
            p.add_exponent(g.clone(), *e);
        }
        p
    }

    pub fn inv(&self) -> Param {
        Param(self.0.iter().map(|(g, e)| (g.clone(), -e)).collect())
    }

    pub fn pow(&self, k: Exponent) -> Param {
        if k.is_zero() {
            return Param::one();
        }
        Param(self.0.iter().map(|(g, e)| (g.clone(), e * k)).collect())
    }

    /// Natural logarithm under the given generator values. Integer bases
    /// evaluate to themselves.
    pub fn ln_eval(&self, values: &BTreeMap<String, f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (g, e) in &self.0 {
            let v = if is_prime_name(g) {
                g.parse::<f64>().expect("digits")
            } else {
                *values.get(g).ok_or_else(|| Error::InvalidParam { text: self.to_string(), reason: format!("no value for `{g}`") })?
            };
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParam { text: self.to_string(), reason: format!("`{g}` must be positive") });
            }
            acc += e.to_f64().expect("small rational") * v.ln();
        }
        Ok(acc)
    }

    pub fn eval(&self, values: &BTreeMap<String, f64>) -> Result<f64> {
        Ok(self.ln_eval(values)?.exp())
    }
}

fn parse_exponent(text: &str) -> Option<Exponent> {
    let t = text.trim().trim_start_matches('(').trim_end_matches(')');
    match t.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.trim().parse().ok()?;
            (d != 0).then_some(())?;
            Some(Exponent::new(n.trim().parse().ok()?, d))
        }
        None => Some(Exponent::from_integer(t.parse().ok()?)),
    }
}

impl FromStr for Param {
    type Err = Error;

    /// `q^2*r^-1`, `q^1/2`, `2^-1/2`, or `1`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidParam { text: text.to_string(), reason: reason.to_string() };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty parameter"));
        }
        let mut p = Param::one();
        for factor in compact.split('*') {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b, parse_exponent(e).ok_or_else(|| bad("bad exponent"))?),
                None => (factor, Exponent::one()),
            };
            if base.is_empty() {
                return Err(bad("missing base"));
            }
            if is_prime_name(base) {
                let n: u64 = base.parse().map_err(|_| bad("integer base out of range"))?;
                if n == 0 {
                    return Err(bad("parameters are positive"));
                }
                for (prime, e) in factor_integer(n) {
                    p.add_exponent(prime.to_string(), exp * e);
                }
            } else if base.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && base.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                p.add_exponent(base.to_string(), exp);
            } else {
                return Err(bad("bases are identifiers or positive integers"));
            }
        }
        Ok(p)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, e)| if e.is_one() { g.clone() } else { format!("{g}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Finite multiset of parameters.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ParamList(BTreeMap<Param, u64>);

impl ParamList {
    pub fn new() -> Self {
        ParamList(BTreeMap::new())
    }

    /// `k` copies of the trivial parameter.
    pub fn trivial(k: u64) -> Self {
        let mut l = ParamList::new();
        l.insert(Param::one(), k);
        l
    }

    pub fn insert(&mut self, p: Param, count: u64) {
        if count > 0 {
            *self.0.entry(p).or_default() += count;
        }
    }

    pub fn parse_all<'a>(items: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut l = ParamList::new();
        for item in items {
            l.insert(item.parse()?, 1);
        }
        Ok(l)
    }

    pub fn len(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, p: &Param) -> u64 {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Param, u64)> {
        self.0.iter().map(|(p, &c)| (p, c))
    }

    /// Entries with repetition, in parameter order.
    pub fn entries(&self) -> Vec<Param> {
        self.0.iter().flat_map(|(p, &c)| std::iter::repeat(p.clone()).take(c as usize)).collect()
    }

    /// Multiset difference, or `None` if `other` is not contained in `self`.
    pub fn checked_sub(&self, other: &ParamList) -> Option<ParamList> {
        let mut out = self.clone();
        for (p, &c) in &other.0 {
            let slot = out.0.get_mut(p)?;
            *slot = slot.checked_sub(c)?;
            if *slot == 0 {
                out.0.remove(p);
            }
        }
        Some(out)
    }

    /// Splits `self = other^{⊎k}` for `k ≥ 1`, if possible.
    fn checked_div(&self, k: u64) -> Option<ParamList> {
        if self.0.values().any(|c| c % k != 0) {
            return None;
        }
        Some(ParamList(self.0.iter().map(|(p, c)| (p.clone(), c / k)).collect()))
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        self.0.keys().flat_map(|p| p.0.keys().cloned()).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.entries().iter().map(Param::to_string).collect()
    }
}

impl fmt::Display for ParamList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

/// Multiset union.
pub fn list_sum(a: &ParamList, b: &ParamList) -> ParamList {
    let mut out = a.clone();
    for (p, c) in b.iter() {
        out.insert(p.clone(), c);
    }
    out
}

/// All pairwise products.
pub fn list_tensor(a: &ParamList, b: &ParamList) -> ParamList {
    let mut out = ParamList::new();
    for (p, c) in a.iter() {
        for (q, d) in b.iter() {
            out.insert(p.mul(q), c * d);
        }
    }
    out
}

/// Entrywise inverse.
pub fn list_dual(a: &ParamList) -> ParamList {
    let mut out = ParamList::new();
    for (p, c) in a.iter() {
        out.insert(p.inv(), c);
    }
    out
}

pub fn is_kac(l: &ParamList) -> bool {
    l.iter().all(|(p, _)| p.is_trivial())
}

/// `Σ q²`, after checking it equals `Σ q⁻²` to [`BALANCE_TOLERANCE`].
pub fn qdim(l: &ParamList, values: &BTreeMap<String, f64>) -> Result<f64> {
    let mut plus = 0.0;
    let mut minus = 0.0;
    for (p, c) in l.iter() {
        let ln = p.ln_eval(values)?;
        plus += c as f64 * (2.0 * ln).exp();
        minus += c as f64 * (-2.0 * ln).exp();
    }
    if (plus - minus).abs() > BALANCE_TOLERANCE * plus.max(minus) {
        return Err(Error::Unbalanced { plus, minus });
    }
    Ok(plus)
}

/// `Σ_{q ∈ l} q^{2it}`.
pub fn trig_eval(l: &ParamList, t: f64, values: &BTreeMap<String, f64>) -> Result<Complex64> {
    let mut acc = Complex64::zero();
    for (p, c) in l.iter() {
        let phase = 2.0 * t * p.ln_eval(values)?;
        acc += Complex64::from_polar(c as f64, phase);
    }
    Ok(acc)
}

/// Lists of irreducibles reachable within `depth` tensor steps by
/// components of `u` and `ū`, from the list of the fundamental.
///
/// Each product `list(a)·list(c) = ⊎_d list(d)^{N_{ac}^d}` with a single
/// unknown `d` is solved by multiset subtraction; products whose
/// components are all known are checked for consistency. Conjugates get
/// inverted lists.
pub fn derive_irreducible_lists<R: FusionRules>(
    sys: &FusionSystem<R>,
    fund_list: &ParamList,
    depth: usize,
) -> Result<BTreeMap<R::Label, ParamList>> {
    let u = sys.fundamental();
    let n = sys.dim_element(&u)?;
    if n != fund_list.len().into() {
        return Err(Error::InconsistentLists(format!("fundamental has dimension {n} but its list has {} entries", fund_list.len())));
    }
    let unit = sys.unit();
    let mut lists: BTreeMap<R::Label, ParamList> = BTreeMap::new();
    lists.insert(unit.clone(), ParamList::trivial(1));

    let assign = |lists: &mut BTreeMap<R::Label, ParamList>, label: R::Label, l: ParamList| -> Result<()> {
        let bar = sys.conj(&label);
        let dual = list_dual(&l);
        for (lab, val) in [(label, l), (bar, dual)] {
            match lists.get(&lab) {
                Some(existing) if existing != &val => {
                    return Err(Error::InconsistentLists(format!(
                        "{} gets both {existing} and {val}",
                        sys.format_label(&lab)
                    )))
                }
                Some(_) => {}
                None => {
                    lists.insert(lab, val);
                }
            }
        }
        Ok(())
    };

    // Seed the components of u.
    let mut rest = fund_list.clone();
    let mut unknown = Vec::new();
    for (c, m) in u.terms() {
        let m = m.to_u64().ok_or_else(|| Error::InvalidInput("multiplicity too large".into()))?;
        match lists.get(c) {
            Some(known) => {
                for _ in 0..m {
                    rest = rest.checked_sub(known).ok_or_else(|| {
                        Error::InconsistentLists(format!("{} is not contained in the fundamental list", sys.format_label(c)))
                    })?;
                }
            }
            None => unknown.push((c.clone(), m)),
        }
    }
    match unknown.as_slice() {
        [] => {}
        [(c, m)] => {
            let l = rest.checked_div(*m).ok_or_else(|| Error::InconsistentLists("cannot split the fundamental list".into()))?;
            assign(&mut lists, c.clone(), l)?;
        }
        _ if is_kac(fund_list) => {
            for (c, _) in &unknown {
                let d = sys.dim(c).to_u64().ok_or_else(|| Error::InvalidInput("dimension too large".into()))?;
                assign(&mut lists, c.clone(), ParamList::trivial(d))?;
            }
        }
        _ => {
            return Err(Error::Unsupported("cannot split a non-trivial list among several components of the fundamental".into()))
        }
    }

    let mut steps: BTreeSet<R::Label> = u.support().cloned().collect();
    steps.extend(u.support().map(|c| sys.conj(c)));

    let mut queue: VecDeque<(R::Label, usize)> = lists.keys().map(|l| (l.clone(), 0)).collect();
    let mut pending: Vec<(R::Label, usize)> = Vec::new();
    let mut visited: BTreeSet<R::Label> = lists.keys().cloned().collect();
    loop {
        let mut progress = false;
        while let Some((a, d)) = queue.pop_front() {
            if d >= depth {
                continue;
            }
            let mut solved_all = true;
            for c in &steps {
                let product = sys.tensor_labels(&a, c);
                let mut rest = list_tensor(&lists[&a], &lists[c]);
                let mut unknown = Vec::new();
                for (e, m) in product.terms() {
                    let m = m.to_u64().ok_or_else(|| Error::InvalidInput("multiplicity too large".into()))?;
                    match lists.get(e) {
                        Some(known) => {
                            for _ in 0..m {
                                rest = rest.checked_sub(known).ok_or_else(|| {
                                    Error::InconsistentLists(format!(
                                        "list of {} not contained in list({})·list({})",
                                        sys.format_label(e),
                                        sys.format_label(&a),
                                        sys.format_label(c)
                                    ))
                                })?;
                            }
                        }
                        None => unknown.push((e.clone(), m)),
                    }
                }
                match unknown.as_slice() {
                    [] if !rest.is_empty() => {
                        return Err(Error::InconsistentLists(format!(
                            "list({})·list({}) has leftover entries {rest}",
                            sys.format_label(&a),
                            sys.format_label(c)
                        )))
                    }
                    [] => {}
                    [(e, m)] => {
                        let l = rest.checked_div(*m).ok_or_else(|| {
                            Error::InconsistentLists(format!("cannot divide leftover for {}", sys.format_label(e)))
                        })?;
                        assign(&mut lists, e.clone(), l)?;
                        progress = true;
                    }
                    _ => solved_all = false,
                }
                for (e, _) in product.terms() {
                    if lists.contains_key(e) && visited.insert(e.clone()) {
                        queue.push_back((e.clone(), d + 1));
                    }
                }
                let bar = sys.conj(&a);
                if lists.contains_key(&bar) && visited.insert(bar.clone()) {
                    queue.push_back((bar, d));
                }
            }
            if !solved_all {
                pending.push((a, d));
            }
        }
        if !progress || pending.is_empty() {
            break;
        }
        queue.extend(pending.drain(..));
    }
    Ok(lists)
}

/// Whether every list has as many entries as its label's dimension.
pub fn lists_match_dims<R: FusionRules>(sys: &FusionSystem<R>, lists: &BTreeMap<R::Label, ParamList>) -> bool {
    lists.iter().all(|(l, p)| sys.dim(l) == p.len().into())
}
