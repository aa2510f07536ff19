//! Set calculus on `Irr(A)`: the product `S∘T = {r : r ⊂ a⊗b, a∈S, b∈T}`,
//! the involution `S̄`, and Powers' witnesses
//! (`F∘D ∩ D = ∅`, `r_s∘E ∩ r_k∘E = ∅` for `s ≠ k`).
//!
//! Infinite subsets are either complements of finite sets (any family) or
//! prefix regions of a word tree (free products of `ℤ` and `ℤ/2`), plus the
//! conjugates of prefix regions, which are suffix-described. All supported
//! operations are exact. This is a checker and a bounded searcher; it does not
//! decide Powers' Property.

pub mod region;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::semiring::{FusionRules, FusionSystem};
use region::{LetterWord, Region, WordTree};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IrrSet<L: Ord> {
    Finite(BTreeSet<L>),
    /// Everything except the listed labels.
    Cofinite(BTreeSet<L>),
    /// Prefix region of a word-tree family.
    Prefix(Region),
    /// `{w⁻¹ : w ∈ R}`: the conjugate of a prefix region.
    Suffix(Region),
}

impl<L: Ord + Clone> IrrSet<L> {
    pub fn empty() -> Self {
        IrrSet::Finite(BTreeSet::new())
    }

    pub fn everything() -> Self {
        IrrSet::Cofinite(BTreeSet::new())
    }

    pub fn finite(labels: impl IntoIterator<Item = L>) -> Self {
        IrrSet::Finite(labels.into_iter().collect())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, IrrSet::Finite(_))
    }
}

/// Outcome of [`check_witness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub holds: bool,
    pub exact: bool,
    pub first_condition: bool,
    pub second_condition: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowersWitness<L: Ord> {
    pub f: BTreeSet<L>,
    pub d: IrrSet<L>,
    pub e: IrrSet<L>,
    pub r: [L; 3],
}

/// Binds a fusion system to its word tree, when it has one.
pub struct SetCalculus<'a, R: FusionRules> {
    sys: &'a FusionSystem<R>,
    tree: Option<WordTree>,
}

impl<'a, R: FusionRules> SetCalculus<'a, R> {
    pub fn new(sys: &'a FusionSystem<R>) -> Self {
        let tree = sys.rules().letter_codec().map(WordTree::from_codec);
        SetCalculus { sys, tree }
    }

    pub fn has_regions(&self) -> bool {
        self.tree.is_some()
    }

    fn tree(&self) -> Result<&WordTree> {
        self.tree.as_ref().ok_or_else(|| Error::Unsupported("infinite subsets other than cofinite sets need a free product of Z and Z/2 factors".into()))
    }

    fn letters(&self, l: &R::Label) -> LetterWord {
        self.sys.rules().letter_codec().expect("word-tree family").to_letters(l)
    }

    fn label(&self, w: &[region::Letter]) -> R::Label {
        self.sys.rules().letter_codec().expect("word-tree family").from_letters(w)
    }

    fn invert_word(&self, w: &[region::Letter]) -> Result<LetterWord> {
        Ok(self.tree()?.inverse_word(w))
    }

    /// Prefix cylinder `{w : w starts with prefix}`, minus `except`, plus `include`.
    pub fn cylinder(&self, prefixes: &[R::Label], except: &[R::Label], include: &[R::Label]) -> Result<IrrSet<R::Label>> {
        let tree = self.tree()?;
        let mut region = Region::empty();
        for p in prefixes {
            region = region.union(&Region::cylinder(self.letters(p)), tree);
        }
        let removed = Region::finite(except.iter().map(|l| self.letters(l)));
        region = region.intersection(&removed.complement(tree), tree);
        region = region.union(&Region::finite(include.iter().map(|l| self.letters(l))), tree);
        Ok(self.canonical(IrrSet::Prefix(region)))
    }

    /// Collapses regions that are finite or cofinite.
    fn canonical(&self, s: IrrSet<R::Label>) -> IrrSet<R::Label> {
        let Some(tree) = &self.tree else { return s };
        let (r, suffix) = match &s {
            IrrSet::Prefix(r) => (r, false),
            IrrSet::Suffix(r) => (r, true),
            _ => return s,
        };
        if r.is_finite() {
            return IrrSet::Finite(self.region_labels(r, suffix, tree));
        }
        let c = r.complement(tree);
        if c.is_finite() {
            return IrrSet::Cofinite(self.region_labels(&c, suffix, tree));
        }
        s
    }

    fn region_labels(&self, r: &Region, inverted: bool, tree: &WordTree) -> BTreeSet<R::Label> {
        r.elements()
            .expect("finite region")
            .iter()
            .map(|w| if inverted { self.label(&tree.inverse_word(w)) } else { self.label(w) })
            .collect()
    }

    fn finite_region(&self, labels: &BTreeSet<R::Label>) -> Region {
        Region::finite(labels.iter().map(|l| self.letters(l)))
    }

    fn finite_region_inverted(&self, labels: &BTreeSet<R::Label>) -> Result<Region> {
        let tree = self.tree()?;
        Ok(Region::finite(labels.iter().map(|l| tree.inverse_word(&self.letters(l)))))
    }

    /// Both operands as regions of the same orientation.
    fn as_regions(&self, a: &IrrSet<R::Label>, b: &IrrSet<R::Label>) -> Result<(Region, Region, bool)> {
        let tree = self.tree()?;
        let suffix = matches!(a, IrrSet::Suffix(_)) || matches!(b, IrrSet::Suffix(_));
        if matches!(a, IrrSet::Prefix(_)) && matches!(b, IrrSet::Suffix(_))
            || matches!(a, IrrSet::Suffix(_)) && matches!(b, IrrSet::Prefix(_))
        {
            return Err(Error::Unsupported("mixing prefix- and suffix-described sets".into()));
        }
        let convert = |s: &IrrSet<R::Label>| -> Result<Region> {
            Ok(match s {
                IrrSet::Prefix(r) | IrrSet::Suffix(r) => r.clone(),
                IrrSet::Finite(x) if suffix => self.finite_region_inverted(x)?,
                IrrSet::Finite(x) => self.finite_region(x),
                IrrSet::Cofinite(x) if suffix => self.finite_region_inverted(x)?.complement(tree),
                IrrSet::Cofinite(x) => self.finite_region(x).complement(tree),
            })
        };
        Ok((convert(a)?, convert(b)?, suffix))
    }

    fn wrap(&self, r: Region, suffix: bool) -> IrrSet<R::Label> {
        self.canonical(if suffix { IrrSet::Suffix(r) } else { IrrSet::Prefix(r) })
    }

    pub fn contains(&self, s: &IrrSet<R::Label>, l: &R::Label) -> bool {
        match s {
            IrrSet::Finite(x) => x.contains(l),
            IrrSet::Cofinite(x) => !x.contains(l),
            IrrSet::Prefix(r) => r.contains(&self.letters(l)),
            IrrSet::Suffix(r) => {
                let w = self.letters(l);
                let tree = self.tree.as_ref().expect("word-tree family");
                r.contains(&tree.inverse_word(&w))
            }
        }
    }

    pub fn union(&self, a: &IrrSet<R::Label>, b: &IrrSet<R::Label>) -> Result<IrrSet<R::Label>> {
        use IrrSet::*;
        Ok(match (a, b) {
            (Finite(x), Finite(y)) => Finite(x | y),
            (Finite(x), Cofinite(y)) | (Cofinite(y), Finite(x)) => Cofinite(y - x),
            (Cofinite(x), Cofinite(y)) => Cofinite(x & y),
            _ => {
                let (ra, rb, suffix) = self.as_regions(a, b)?;
                self.wrap(ra.union(&rb, self.tree()?), suffix)
            }
        })
    }

    pub fn intersection(&self, a: &IrrSet<R::Label>, b: &IrrSet<R::Label>) -> Result<IrrSet<R::Label>> {
        use IrrSet::*;
        Ok(match (a, b) {
            (Finite(x), Finite(y)) => Finite(x & y),
            (Finite(x), Cofinite(y)) | (Cofinite(y), Finite(x)) => Finite(x - y),
            (Cofinite(x), Cofinite(y)) => Cofinite(x | y),
            (Finite(x), other) | (other, Finite(x)) => Finite(x.iter().filter(|l| self.contains(other, l)).cloned().collect()),
            _ => {
                let (ra, rb, suffix) = self.as_regions(a, b)?;
                self.wrap(ra.intersection(&rb, self.tree()?), suffix)
            }
        })
    }

    pub fn complement(&self, a: &IrrSet<R::Label>) -> Result<IrrSet<R::Label>> {
        use IrrSet::*;
        Ok(match a {
            Finite(x) => Cofinite(x.clone()),
            Cofinite(x) => Finite(x.clone()),
            Prefix(r) => self.wrap(r.complement(self.tree()?), false),
            Suffix(r) => self.wrap(r.complement(self.tree()?), true),
        })
    }

    /// Emptiness is exact for every representation. For cofinite sets this
    /// assumes `Irr(A)` is infinite unless the family is a finite word tree.
    pub fn is_empty(&self, a: &IrrSet<R::Label>) -> Result<bool> {
        Ok(match a {
            IrrSet::Finite(x) => x.is_empty(),
            IrrSet::Cofinite(x) => match &self.tree {
                Some(tree) => self.finite_region(x).complement(tree).is_empty(),
                None => false,
            },
            IrrSet::Prefix(r) | IrrSet::Suffix(r) => r.is_empty(),
        })
    }

    pub fn same_set(&self, a: &IrrSet<R::Label>, b: &IrrSet<R::Label>) -> Result<bool> {
        let a_minus_b = self.intersection(a, &self.complement(b)?)?;
        let b_minus_a = self.intersection(b, &self.complement(a)?)?;
        Ok(self.is_empty(&a_minus_b)? && self.is_empty(&b_minus_a)?)
    }

    fn support(&self, a: &R::Label, b: &R::Label) -> Vec<R::Label> {
        self.sys.tensor_labels(a, b).into_terms().into_keys().collect()
    }

    /// `S∘T`. At least one operand must be finite.
    pub fn product(&self, s: &IrrSet<R::Label>, t: &IrrSet<R::Label>) -> Result<IrrSet<R::Label>> {
        use IrrSet::*;
        match (s, t) {
            (Finite(x), Finite(y)) => {
                let mut out = BTreeSet::new();
                for a in x {
                    for b in y {
                        out.extend(self.support(a, b));
                    }
                }
                Ok(Finite(out))
            }
            (Finite(x), other) => self.left_product(x, other),
            (other, Finite(y)) => self.right_product(other, y),
            _ => Err(Error::Unsupported("product of two infinite sets".into())),
        }
    }

    fn left_product(&self, f: &BTreeSet<R::Label>, t: &IrrSet<R::Label>) -> Result<IrrSet<R::Label>> {
        use IrrSet::*;
        if f.is_empty() {
            return Ok(IrrSet::empty());
        }
        match t {
            Finite(_) => unreachable!("handled by product"),
            Cofinite(x) => {
                // r ∉ F∘T  ⟺  for every a ∈ F, supp(ā ⊗ r) ⊆ X (Frobenius).
                let mut candidates = BTreeSet::new();
                for a in f {
                    for b in x {
                        candidates.extend(self.support(a, b));
                    }
                }
                let missing = candidates
                    .into_iter()
                    .filter(|r| f.iter().all(|a| self.support(&self.sys.conj(a), r).iter().all(|b| x.contains(b))))
                    .collect();
                Ok(Cofinite(missing))
            }
            Prefix(region) => {
                let tree = self.tree()?;
                let mut acc = Region::empty();
                for a in f {
                    acc = acc.union(&region.left_mul(&self.letters(a), tree), tree);
                }
                Ok(self.wrap(acc, false))
            }
            Suffix(region) => {
                // a · w⁻¹ = (w · a⁻¹)⁻¹
                let tree = self.tree()?;
                let mut acc = Region::empty();
                for a in f {
                    acc = acc.union(&region.right_mul(&self.invert_word(&self.letters(a))?, tree), tree);
                }
                Ok(self.wrap(acc, true))
            }
        }
    }

    fn right_product(&self, s: &IrrSet<R::Label>, f: &BTreeSet<R::Label>) -> Result<IrrSet<R::Label>> {
        use IrrSet::*;
        if f.is_empty() {
            return Ok(IrrSet::empty());
        }
        match s {
            Finite(_) => unreachable!("handled by product"),
            Cofinite(x) => {
                // r ∉ S∘F  ⟺  for every b ∈ F, supp(r ⊗ b̄) ⊆ X.
                let mut candidates = BTreeSet::new();
                for a in x {
                    for b in f {
                        candidates.extend(self.support(a, b));
                    }
                }
                let missing = candidates
                    .into_iter()
                    .filter(|r| f.iter().all(|b| self.support(r, &self.sys.conj(b)).iter().all(|a| x.contains(a))))
                    .collect();
                Ok(Cofinite(missing))
            }
            Prefix(region) => {
                let tree = self.tree()?;
                let mut acc = Region::empty();
                for b in f {
                    acc = acc.union(&region.right_mul(&self.letters(b), tree), tree);
                }
                Ok(self.wrap(acc, false))
            }
            Suffix(region) => {
                // w⁻¹ · b = (b⁻¹ · w)⁻¹
                let tree = self.tree()?;
                let mut acc = Region::empty();
                for b in f {
                    acc = acc.union(&region.left_mul(&self.invert_word(&self.letters(b))?, tree), tree);
                }
                Ok(self.wrap(acc, true))
            }
        }
    }

    /// `S̄ = {ā : a ∈ S}`.
    pub fn conj(&self, s: &IrrSet<R::Label>) -> IrrSet<R::Label> {
        use IrrSet::*;
        let s = match s {
            Finite(x) => Finite(x.iter().map(|l| self.sys.conj(l)).collect()),
            Cofinite(x) => Cofinite(x.iter().map(|l| self.sys.conj(l)).collect()),
            Prefix(r) => Suffix(r.clone()),
            Suffix(r) => Prefix(r.clone()),
        };
        self.canonical(s)
    }

    /// Evaluates both Powers conditions on a witness.
    pub fn check_witness(&self, w: &PowersWitness<R::Label>) -> Result<WitnessReport> {
        let unit = self.sys.unit();
        if w.f.contains(&unit) {
            return Err(Error::MalformedWitness("F must not contain the unit".into()));
        }
        if !self.is_empty(&self.intersection(&w.d, &w.e)?)? {
            return Err(Error::MalformedWitness("D and E intersect".into()));
        }
        if !self.is_empty(&self.complement(&self.union(&w.d, &w.e)?)?)? {
            return Err(Error::MalformedWitness("D and E do not cover Irr(A)".into()));
        }
        let f = IrrSet::Finite(w.f.clone());
        let first_condition = self.is_empty(&self.intersection(&self.product(&f, &w.d)?, &w.d)?)?;

        let translates: Vec<IrrSet<R::Label>> = w
            .r
            .iter()
            .map(|r| self.product(&IrrSet::finite([r.clone()]), &w.e))
            .collect::<Result<_>>()?;
        let mut second_condition = true;
        let mut overlaps = Vec::new();
        for s in 0..3 {
            for k in s + 1..3 {
                if !self.is_empty(&self.intersection(&translates[s], &translates[k])?)? {
                    second_condition = false;
                    overlaps.push(format!("r{}∘E ∩ r{}∘E ≠ ∅", s + 1, k + 1));
                }
            }
        }
        let detail = match (first_condition, second_condition) {
            (true, true) => "both conditions hold".to_string(),
            (false, true) => "F∘D meets D".to_string(),
            (true, false) => overlaps.join("; "),
            (false, false) => format!("F∘D meets D; {}", overlaps.join("; ")),
        };
        Ok(WitnessReport {
            holds: first_condition && second_condition,
            exact: true,
            first_condition,
            second_condition,
            detail,
        })
    }

    /// Searches prefix regions of depth `0..=budget` for `D` (in shortlex
    /// bitmask order), with `E` its complement, and `r`-triples among words
    /// of length at most `depth + 2` (lexicographic). Returns the first hit.
    pub fn search_witness(&self, f: &BTreeSet<R::Label>, budget: usize) -> Result<Option<PowersWitness<R::Label>>> {
        let tree = self.tree()?.clone();
        if f.contains(&self.sys.unit()) {
            return Err(Error::InvalidInput("F must not contain the unit".into()));
        }
        let f_words: Vec<LetterWord> = f.iter().map(|l| self.letters(l)).collect();
        for depth in 0..=budget {
            let words = tree.words_up_to(depth);
            if words.len() > 24 {
                log::warn!("powers search stops at depth {depth}: {} candidate words", words.len());
                break;
            }
            let r_words = tree.words_up_to(depth + 2);
            for mask in 0u64..(1u64 << words.len()) {
                let mut inner = BTreeSet::new();
                let mut outer = BTreeSet::new();
                for (i, w) in words.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        if w.len() < depth {
                            inner.insert(w.clone());
                        } else {
                            outer.insert(w.clone());
                        }
                    }
                }
                let d = Region::from_parts(depth, inner, outer).normalize(&tree);
                if d.depth() < depth {
                    continue;
                }
                let mut fd = Region::empty();
                for g in &f_words {
                    fd = fd.union(&d.left_mul(g, &tree), &tree);
                }
                if !fd.intersection(&d, &tree).is_empty() {
                    continue;
                }
                let e = d.complement(&tree);
                if let Some(r) = find_disjoint_triple(&tree, &e, &r_words) {
                    let witness = PowersWitness {
                        f: f.clone(),
                        d: self.canonical(IrrSet::Prefix(d)),
                        e: self.canonical(IrrSet::Prefix(e)),
                        r: r.map(|w| self.label(&w)),
                    };
                    return Ok(Some(witness));
                }
            }
        }
        Ok(None)
    }

    pub fn set_to_json(&self, s: &IrrSet<R::Label>) -> Value {
        let fmt = |x: &BTreeSet<R::Label>| x.iter().map(|l| self.sys.format_label(l)).collect::<Vec<_>>();
        let fmt_words = |ws: &BTreeSet<LetterWord>| ws.iter().map(|w| self.sys.format_label(&self.label(w))).collect::<Vec<_>>();
        match s {
            IrrSet::Finite(x) => json!({"type": "finite", "elements": fmt(x)}),
            IrrSet::Cofinite(x) => json!({"type": "cofinite", "except": fmt(x)}),
            IrrSet::Prefix(r) => json!({"type": "cylinder", "prefixes": fmt_words(r.outer()), "except": [], "include": fmt_words(r.inner())}),
            IrrSet::Suffix(r) => json!({"type": "conjugate", "of": {"type": "cylinder", "prefixes": fmt_words(r.outer()), "except": [], "include": fmt_words(r.inner())}}),
        }
    }

    /// Parses the witness-file set descriptors: `finite`, `cofinite`,
    /// `cylinder` (with optional `except` and `include`), `complement` and
    /// `conjugate` (each wrapping another descriptor under `of`).
    pub fn set_from_json(&self, v: &Value) -> Result<IrrSet<R::Label>> {
        let bad = |msg: &str| Error::MalformedWitness(format!("{msg}: {v}"));
        let labels = |key: &str| -> Result<Vec<R::Label>> {
            match v.get(key) {
                None => Ok(Vec::new()),
                Some(Value::Array(items)) => items
                    .iter()
                    .map(|i| i.as_str().ok_or_else(|| bad("labels must be strings")).and_then(|s| self.sys.parse_label(s)))
                    .collect(),
                Some(_) => Err(bad(&format!("`{key}` must be an array"))),
            }
        };
        let kind = v.get("type").and_then(Value::as_str).ok_or_else(|| bad("missing set type"))?;
        match kind {
            "finite" => Ok(IrrSet::finite(labels("elements")?)),
            "cofinite" => Ok(IrrSet::Cofinite(labels("except")?.into_iter().collect())),
            "cylinder" => self.cylinder(&labels("prefixes")?, &labels("except")?, &labels("include")?),
            "complement" => self.complement(&self.set_from_json(v.get("of").ok_or_else(|| bad("missing `of`"))?)?),
            "conjugate" => Ok(self.conj(&self.set_from_json(v.get("of").ok_or_else(|| bad("missing `of`"))?)?)),
            other => Err(bad(&format!("unknown set type `{other}`"))),
        }
    }

    pub fn witness_from_json(&self, v: &Value) -> Result<PowersWitness<R::Label>> {
        let bad = |msg: &str| Error::MalformedWitness(msg.to_string());
        let f = v
            .get("F")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing F"))?
            .iter()
            .map(|i| i.as_str().ok_or_else(|| bad("F entries must be strings")).and_then(|s| self.sys.parse_label(s)))
            .collect::<Result<BTreeSet<_>>>()?;
        let d = self.set_from_json(v.get("D").ok_or_else(|| bad("missing D"))?)?;
        let e = match v.get("E") {
            Some(e) => self.set_from_json(e)?,
            None => self.complement(&d)?,
        };
        let r: Vec<R::Label> = v
            .get("r")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing r"))?
            .iter()
            .map(|i| i.as_str().ok_or_else(|| bad("r entries must be strings")).and_then(|s| self.sys.parse_label(s)))
            .collect::<Result<_>>()?;
        let r: [R::Label; 3] = r.try_into().map_err(|_| bad("r must have exactly three entries"))?;
        Ok(PowersWitness { f, d, e, r })
    }

    pub fn witness_to_json(&self, w: &PowersWitness<R::Label>) -> Value {
        json!({
            "F": w.f.iter().map(|l| self.sys.format_label(l)).collect::<Vec<_>>(),
            "D": self.set_to_json(&w.d),
            "E": self.set_to_json(&w.e),
            "r": w.r.iter().map(|l| self.sys.format_label(l)).collect::<Vec<_>>(),
        })
    }
}

fn find_disjoint_triple(tree: &WordTree, e: &Region, candidates: &[LetterWord]) -> Option<[LetterWord; 3]> {
    // r_i∘E ∩ r_j∘E = ∅ iff E ∩ g∘E = ∅ with g = r_i⁻¹ r_j, so results are
    // memoised per g. Short words of E give a cheap rejection before the
    // exact region intersection.
    let probes: Vec<LetterWord> = tree.words_up_to(e.depth() + 1).into_iter().filter(|w| e.contains(w)).collect();
    let inverses: Vec<LetterWord> = candidates.iter().map(|r| tree.inverse_word(r)).collect();
    let mut memo: HashMap<LetterWord, bool> = HashMap::new();
    let mut disjoint = |i: usize, j: usize| -> bool {
        let g = tree.mul(&inverses[i], &candidates[j]);
        *memo.entry(g.clone()).or_insert_with(|| {
            if probes.iter().any(|w| e.contains(&tree.mul(&g, w))) {
                return false;
            }
            e.intersection(&e.left_mul(&g, tree), tree).is_empty()
        })
    };
    let n = candidates.len();
    for i in 0..n {
        for j in i + 1..n {
            if !disjoint(i, j) {
                continue;
            }
            for k in j + 1..n {
                if disjoint(i, k) && disjoint(j, k) {
                    return Some([candidates[i].clone(), candidates[j].clone(), candidates[k].clone()]);
                }
            }
        }
    }
    None
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "holds={} exact={} ({})", self.holds, self.exact, self.detail)
    }
}
