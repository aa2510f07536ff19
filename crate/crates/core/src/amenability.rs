//! Kesten-type amenability test: `A` is amenable iff `n = dim u` lies in the
//! spectrum of `Re χ(u)`. The norm of `Re χ(u)` is read off the exact counts
//! `c_{2k} = mult(1, (u + ū)^{⊗2k})`, since `Re χ(u) = ½ χ(u + ū)`.
//!
//! Finitely many moments cannot certify a strict inequality, so the verdict
//! is numerical. Even moments also cannot tell `n` from `−n`.

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::semiring::{big_ln, FusionElement, FusionRules, FusionSystem};

pub const DEFAULT_DEPTH: usize = 30;
/// Tolerance for families with interval fusion rules.
pub const INTERVAL_TOLERANCE: f64 = 0.05;
/// Tolerance for free families, whose ratios converge like `k^{-3/2}`.
pub const FREE_TOLERANCE: f64 = 0.15;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Method {
    Root,
    Ratio,
    ExtrapolatedRatio,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Root => "root",
            Method::Ratio => "ratio",
            Method::ExtrapolatedRatio => "extrapolated-ratio",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "root" => Ok(Method::Root),
            "ratio" => Ok(Method::Ratio),
            "extrapolated-ratio" => Ok(Method::ExtrapolatedRatio),
            _ => Err(Error::InvalidInput(format!("unknown estimator `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    AmenableConsistent,
    NonAmenableNumerical,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::AmenableConsistent => "amenable-consistent",
            Verdict::NonAmenableNumerical => "non-amenable-numerical",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// `c_{2k}` for `k = 1..=depth`.
pub fn kesten_counts<R: FusionRules>(sys: &FusionSystem<R>, u: &FusionElement<R::Label>, depth: usize) -> Result<Vec<BigUint>> {
    let x = sys.sum(u, &sys.conj_element(u)?)?;
    let all = sys.unit_return_counts(&x, 2 * depth)?;
    Ok((1..=depth).map(|k| all[2 * k].clone()).collect())
}

/// `p_k = mult(1, (u ⊗ ū)^{⊗k})` for `k = 1..=depth`.
pub fn modulus_counts<R: FusionRules>(sys: &FusionSystem<R>, u: &FusionElement<R::Label>, depth: usize) -> Result<Vec<BigUint>> {
    let u_bar = sys.conj_element(u)?;
    if &u_bar == u {
        let all = sys.unit_return_counts(u, 2 * depth)?;
        return Ok((1..=depth).map(|k| all[2 * k].clone()).collect());
    }
    let x = sys.tensor(u, &u_bar)?;
    let all = sys.unit_return_counts(&x, depth)?;
    Ok(all[1..].to_vec())
}

fn ln_ratio(a: &BigUint, b: &BigUint) -> f64 {
    big_ln(a) - big_ln(b)
}

/// Limit estimate of `lim_k (t_{k+1}/t_k)` for a sequence `t_1, t_2, …`:
/// the deepest ratio, or one Richardson step `K ρ_K − (K−1) ρ_{K−1}`
/// assuming `ρ_k = L(1 − a/k + O(k^{-2}))`.
fn growth_rate(terms: &[BigUint], method: Method) -> Result<f64> {
    if terms.len() < 3 {
        return Err(Error::NotEnoughTerms { needed: 3, got: terms.len() });
    }
    if terms.iter().any(|t| t == &BigUint::default()) {
        return Err(Error::InvalidInput("counts must be positive".into()));
    }
    let k = terms.len();
    Ok(match method {
        Method::Root => (big_ln(&terms[k - 1]) / k as f64).exp(),
        Method::Ratio => ln_ratio(&terms[k - 1], &terms[k - 2]).exp(),
        Method::ExtrapolatedRatio => {
            let last = ln_ratio(&terms[k - 1], &terms[k - 2]).exp();
            let prev = ln_ratio(&terms[k - 2], &terms[k - 3]).exp();
            let kk = (k - 1) as f64;
            (kk * last - (kk - 1.0) * prev).max(0.0)
        }
    })
}

/// Estimate of `‖Re χ(u)‖ = ½·lim c_{2k}^{1/2k}` from `c_2, c_4, …`.
pub fn spectral_radius_estimate(counts: &[BigUint], method: Method) -> Result<f64> {
    Ok(0.5 * growth_rate(counts, method)?.sqrt())
}

/// `(4^{-k} c_{2k})^{1/2k}` for each `k`; non-decreasing in the tracial case.
pub fn root_sequence(counts: &[BigUint]) -> Vec<f64> {
    counts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = (i + 1) as f64;
            ((big_ln(c) - k * 4f64.ln()) / (2.0 * k)).exp()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossCheck {
    pub counts: Vec<BigUint>,
    /// Estimate of `‖χ(u)χ(u)*‖^{1/2}`.
    pub estimate: f64,
    pub verdict: Verdict,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KestenReport {
    pub n: BigUint,
    pub depth: usize,
    pub tolerance: f64,
    pub method: Method,
    pub counts: Vec<BigUint>,
    pub estimate: f64,
    pub estimates: Vec<f64>,
    pub verdict: Verdict,
    pub cross_check: CrossCheck,
}

/// Estimates at each prefix of the counts, from the third term on.
fn estimate_trail(terms: &[BigUint], method: Method, f: impl Fn(f64) -> f64) -> Vec<f64> {
    (3..=terms.len()).filter_map(|k| growth_rate(&terms[..k], method).ok()).map(f).collect()
}

fn classify(estimate: f64, trail: &[f64], n: f64, tol: f64) -> Verdict {
    if (estimate - n).abs() <= tol {
        return Verdict::AmenableConsistent;
    }
    let tail = &trail[trail.len().saturating_sub(5)..];
    let diffs: Vec<f64> = tail.windows(2).map(|w| w[1] - w[0]).collect();
    let small = tol / 10.0;
    let monotone = diffs.iter().all(|&d| d >= -small) || diffs.iter().all(|&d| d <= small);
    if estimate + tol < n && monotone {
        Verdict::NonAmenableNumerical
    } else {
        Verdict::Inconclusive
    }
}

pub fn amenability_verdict<R: FusionRules>(
    sys: &FusionSystem<R>,
    u: &FusionElement<R::Label>,
    depth: usize,
    tol: f64,
) -> Result<KestenReport> {
    let method = Method::ExtrapolatedRatio;
    let n = sys.dim_element(u)?;
    let n_f = big_ln(&n).exp();
    let counts = kesten_counts(sys, u, depth)?;
    let estimate = spectral_radius_estimate(&counts, method)?;
    let estimates = estimate_trail(&counts, method, |r| 0.5 * r.sqrt());
    let verdict = classify(estimate, &estimates, n_f, tol);

    let p = modulus_counts(sys, u, depth)?;
    let p_estimate = growth_rate(&p, method)?.sqrt();
    let p_trail = estimate_trail(&p, method, f64::sqrt);
    let p_verdict = classify(p_estimate, &p_trail, n_f, tol);
    let cross_check = CrossCheck { counts: p, estimate: p_estimate, verdict: p_verdict, agrees: p_verdict == verdict };

    Ok(KestenReport { n, depth, tolerance: tol, method, counts, estimate, estimates, verdict, cross_check })
}

impl KestenReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n.to_string(),
            "depth": self.depth,
            "tolerance": self.tolerance,
            "method": self.method.name(),
            "counts": self.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "estimate": self.estimate,
            "verdict": self.verdict.name(),
            "cross_check": {
                "counts": self.cross_check.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "estimate": self.cross_check.estimate,
                "verdict": self.cross_check.verdict.name(),
                "agrees": self.cross_check.agrees,
            },
            "note": "numerical verdict from finitely many exact moments; cannot certify strict inequality or distinguish n from -n",
        })
    }
}
