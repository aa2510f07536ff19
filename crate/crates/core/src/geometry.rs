//! The metric `d_v(a, b) = inf{n : b ⊂ v^{⊗n} ⊗ a}` on irreducibles, for a
//! self-conjugate `v` containing the unit, with balls, growth and the
//! comparison inequality `d_v ≤ K·d_{v+w}`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::semiring::{FusionElement, FusionRules, FusionSystem};

#[derive(Clone, Debug)]
pub struct GeneratorElement<L: Ord> {
    v: FusionElement<L>,
    support: Vec<L>,
}

impl<L: Ord + Clone> GeneratorElement<L> {
    pub fn new<R: FusionRules<Label = L>>(sys: &FusionSystem<R>, v: FusionElement<L>) -> Result<Self> {
        sys.check(&v)?;
        if !v.contains(&sys.unit()) {
            return Err(Error::InvalidInput("generator must contain the unit".into()));
        }
        if sys.conj_element(&v)? != v {
            return Err(Error::InvalidInput("generator must be self-conjugate".into()));
        }
        let support = v.support().cloned().collect();
        Ok(GeneratorElement { v, support })
    }

    /// `1 + u + ū` with unit multiplicities.
    pub fn standard<R: FusionRules<Label = L>>(sys: &FusionSystem<R>, u: &FusionElement<L>) -> Result<Self> {
        let mut labels: BTreeSet<L> = u.support().cloned().collect();
        labels.extend(u.support().map(|l| sys.conj(l)));
        labels.insert(sys.unit());
        Self::new(sys, sys.element(labels.into_iter().map(|l| (l, BigUint::one()))))
    }

    pub fn element(&self) -> &FusionElement<L> {
        &self.v
    }

    pub fn support(&self) -> &[L] {
        &self.support
    }
}

fn step<R: FusionRules>(sys: &FusionSystem<R>, v: &GeneratorElement<R::Label>, layer: &BTreeSet<R::Label>) -> BTreeSet<R::Label> {
    let mut out = BTreeSet::new();
    for c in layer {
        for g in v.support() {
            out.extend(sys.tensor_labels(g, c).into_terms().into_keys());
        }
    }
    out
}

/// Spheres `S_0, S_1, …, S_r` around `center`.
pub fn spheres<R: FusionRules>(
    sys: &FusionSystem<R>,
    v: &GeneratorElement<R::Label>,
    center: &R::Label,
    r: usize,
) -> Vec<BTreeSet<R::Label>> {
    let mut seen = BTreeSet::from([center.clone()]);
    let mut out = vec![seen.clone()];
    for _ in 0..r {
        let next: BTreeSet<R::Label> = step(sys, v, out.last().expect("nonempty")).difference(&seen).cloned().collect();
        seen.extend(next.iter().cloned());
        out.push(next);
    }
    out
}

pub fn ball<R: FusionRules>(
    sys: &FusionSystem<R>,
    v: &GeneratorElement<R::Label>,
    center: &R::Label,
    r: usize,
) -> BTreeSet<R::Label> {
    spheres(sys, v, center, r).into_iter().flatten().collect()
}

pub fn sphere<R: FusionRules>(
    sys: &FusionSystem<R>,
    v: &GeneratorElement<R::Label>,
    center: &R::Label,
    r: usize,
) -> BTreeSet<R::Label> {
    spheres(sys, v, center, r).pop().expect("nonempty")
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GrowthRow {
    pub radius: usize,
    pub sphere: usize,
    pub ball: usize,
}

pub fn growth<R: FusionRules>(
    sys: &FusionSystem<R>,
    v: &GeneratorElement<R::Label>,
    center: &R::Label,
    r: usize,
) -> Vec<GrowthRow> {
    let mut total = 0;
    spheres(sys, v, center, r)
        .iter()
        .enumerate()
        .map(|(radius, s)| {
            total += s.len();
            GrowthRow { radius, sphere: s.len(), ball: total }
        })
        .collect()
}

pub fn growth_csv(rows: &[GrowthRow]) -> String {
    let mut out = String::from("radius,sphere,ball\n");
    for row in rows {
        writeln!(out, "{},{},{}", row.radius, row.sphere, row.ball).expect("write to string");
    }
    out
}

/// `d_v(a, b)`, searching at most `budget` steps.
///
/// Both endpoints grow balls under left multiplication by `v`, always
/// extending the smaller frontier; `c ⊂ v^m ⊗ a` and `c ⊂ v^k ⊗ b` give
/// `b ⊂ v^{m+k} ⊗ a` by Frobenius reciprocity and `v = v̄`.
pub fn distance<R: FusionRules>(
    sys: &FusionSystem<R>,
    v: &GeneratorElement<R::Label>,
    a: &R::Label,
    b: &R::Label,
    budget: usize,
) -> Result<usize> {
    if a == b {
        return Ok(0);
    }
    let mut seen = [BTreeSet::from([a.clone()]), BTreeSet::from([b.clone()])];
    let mut frontier = seen.clone();
    let mut radius = [0usize, 0];
    while radius[0] + radius[1] < budget {
        let side = usize::from(frontier[1].len() < frontier[0].len());
        let next: BTreeSet<R::Label> = step(sys, v, &frontier[side]).difference(&seen[side]).cloned().collect();
        radius[side] += 1;
        if next.iter().any(|c| seen[1 - side].contains(c)) {
            return Ok(radius[0] + radius[1]);
        }
        if next.is_empty() {
            break;
        }
        seen[side].extend(next.iter().cloned());
        frontier[side] = next;
    }
    Err(Error::BudgetExhausted { budget })
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiIsometryReport {
    /// `1 + max_c d_v(1, c)` over the components `c` of `w`.
    pub k: usize,
    pub pairs_checked: usize,
    pub max_ratio: f64,
    pub holds: bool,
    pub violations: usize,
}

/// Checks `d_v(a, b) ≤ K·d_{v+w}(a, b)` on the given pairs.
pub fn quasi_isometry_check<R: FusionRules>(
    sys: &FusionSystem<R>,
    v: &GeneratorElement<R::Label>,
    w: &GeneratorElement<R::Label>,
    pairs: &[(R::Label, R::Label)],
    budget: usize,
) -> Result<QuasiIsometryReport> {
    let unit = sys.unit();
    let mut k = 0;
    for c in w.support() {
        k = k.max(distance(sys, v, &unit, c, budget)?);
    }
    let k = k + 1;
    let joint_labels: BTreeSet<R::Label> = v.support().iter().chain(w.support()).cloned().collect();
    let joint = GeneratorElement::new(sys, sys.element(joint_labels.into_iter().map(|l| (l, BigUint::one()))))?;
    let mut max_ratio: f64 = 0.0;
    let mut violations = 0;
    for (a, b) in pairs {
        let dv = distance(sys, v, a, b, budget)?;
        let dj = distance(sys, &joint, a, b, budget)?;
        if dj > 0 {
            max_ratio = max_ratio.max(dv as f64 / dj as f64);
        }
        if dv > k * dj {
            violations += 1;
        }
    }
    Ok(QuasiIsometryReport { k, pairs_checked: pairs.len(), max_ratio, holds: violations == 0, violations })
}
