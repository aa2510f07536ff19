//! Acceptance checks, one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeMap;
use std::panic;
use std::time::{Duration, Instant};

use common::*;
use fusion_core::amenability::{amenability_verdict, kesten_counts, spectral_radius_estimate, Method, Verdict, DEFAULT_DEPTH, FREE_TOLERANCE, INTERVAL_TOLERANCE};
use fusion_core::characters::{catalan, moment, PairingKind, StarWord};
use fusion_core::families::{ao_dim, GroupDual};
use fusion_core::geometry::{ball, distance, sphere, GeneratorElement};
use fusion_core::params::{derive_irreducible_lists, list_sum, list_tensor, modular_spectrum, qdim, Param, ParamList};
use fusion_core::towers::{principal_graph, tower};
use fusion_core::{FusionRules, FusionSystem};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn timed(limit: Duration, what: &str, f: impl FnOnce() -> Result<(), String>) -> Result<Duration, String> {
    let start = Instant::now();
    f()?;
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    for n in [2, 3, 5] {
        let took = timed(Duration::from_secs(1), &format!("A_o({n})"), || {
            let sys = ao(n);
            let u = sys.fundamental();
            let counts = sys.unit_return_counts(&u, 20).map_err(|e| e.to_string())?;
            for k in 0..=10 {
                ensure(counts[2 * k] == catalan(k), || format!("A_o({n}) k={k}: {}", counts[2 * k]))?;
            }
            Ok(())
        })?;
        notes.push(format!("A_o({n}) {took:.0?}"));
    }
    for n in [4, 5] {
        let took = timed(Duration::from_secs(1), &format!("A^aut({n})"), || {
            let sys = aut(n);
            let u = sys.parse_element("s0 + s1").map_err(|e| e.to_string())?;
            let counts = sys.unit_return_counts(&u, 12).map_err(|e| e.to_string())?;
            for k in 0..=12 {
                ensure(counts[k] == catalan(k), || format!("A^aut({n}) k={k}: {}", counts[k]))?;
            }
            Ok(())
        })?;
        notes.push(format!("A^aut({n}) {took:.0?}"));
    }
    Ok(notes.join(", "))
}

/// `(n + √D)^k = A + B√D`, `D = n² − 4`; the dimension is `B / 2^{k−1}`.
fn closed_form_dim(n: u32, k: u32) -> BigInt {
    let n = BigInt::from(n);
    let d = &n * &n - 4;
    let (mut a, mut b) = (n.clone(), BigInt::from(1));
    for _ in 1..k {
        (a, b) = (&a * &n + &b * &d, &a + &b * &n);
    }
    b / BigInt::from(2).pow(k - 1)
}

fn criterion_2() -> Outcome {
    for n in 2..=5 {
        for k in 1..=15 {
            let d: BigInt = ao_dim(n, k).into();
            ensure(d == closed_form_dim(n, k), || format!("n={n} k={k}: {d} vs {}", closed_form_dim(n, k)))?;
        }
    }
    let seq: Vec<String> = (1..=5).map(|k| ao_dim(3, k).to_string()).collect();
    ensure(seq == ["1", "3", "8", "21", "55"], || format!("n=3 sequence {seq:?}"))?;
    Ok(format!("n=3: {}", seq.join(",")))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut check = |name: String, report: fusion_core::amenability::KestenReport, expect: Verdict| -> Result<(), String> {
        ensure(report.verdict == expect, || format!("{name}: {} (estimate {:.4})", report.verdict.name(), report.estimate))?;
        ensure(report.cross_check.agrees, || format!("{name}: cross-check {}", report.cross_check.verdict.name()))?;
        notes.push(format!("{name} {:.4}", report.estimate));
        Ok(())
    };
    for (n, expect) in [(2, Verdict::AmenableConsistent), (3, Verdict::NonAmenableNumerical), (4, Verdict::NonAmenableNumerical), (5, Verdict::NonAmenableNumerical)] {
        let sys = ao(n);
        let r = amenability_verdict(&sys, &sys.fundamental(), DEFAULT_DEPTH, INTERVAL_TOLERANCE).map_err(|e| e.to_string())?;
        check(format!("A_o({n})"), r, expect)?;
    }
    for (n, expect) in [(4, Verdict::AmenableConsistent), (5, Verdict::NonAmenableNumerical), (6, Verdict::NonAmenableNumerical)] {
        let sys = aut(n);
        let r = amenability_verdict(&sys, &sys.fundamental(), DEFAULT_DEPTH, INTERVAL_TOLERANCE).map_err(|e| e.to_string())?;
        check(format!("A^aut({n})"), r, expect)?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(10), || format!("took {took:?}"))?;
    Ok(format!("{} in {took:.0?}", notes.join(", ")))
}

fn criterion_4() -> Outcome {
    let sys = f2();
    let u = sys.parse_element("s + s^-1 + t + t^-1").map_err(|e| e.to_string())?;
    let counts = kesten_counts(&sys, &u, DEFAULT_DEPTH).map_err(|e| e.to_string())?;
    let est = spectral_radius_estimate(&counts, Method::ExtrapolatedRatio).map_err(|e| e.to_string())?;
    let target = 2.0 * 3f64.sqrt();
    ensure((est - target).abs() <= FREE_TOLERANCE, || format!("estimate {est:.4}, target {target:.4}"))?;
    let report = amenability_verdict(&sys, &u, DEFAULT_DEPTH, FREE_TOLERANCE).map_err(|e| e.to_string())?;
    ensure(report.verdict == Verdict::NonAmenableNumerical, || format!("verdict {}", report.verdict.name()))?;
    Ok(format!("estimate {est:.4} vs 2√3 = {target:.4}"))
}

fn criterion_5() -> Outcome {
    let mut words = 0;
    for n in [2, 3, 5] {
        let sys = ao(n);
        let u = sys.fundamental();
        for len in 0..=8 {
            for w in StarWord::all_of_length(len) {
                let expect = BigUint::from(brute_pairings(&w, PairingKind::SelfAdjoint));
                let got = moment(&sys, &u, &w).map_err(|e| e.to_string())?;
                ensure(got == expect, || format!("A_o({n}) {w}: {got} vs {expect}"))?;
                words += 1;
            }
        }
    }
    let sys = au(2);
    let u = sys.fundamental();
    for k in 0..=8 {
        let w = StarWord::alternating(k);
        let got = moment(&sys, &u, &w).map_err(|e| e.to_string())?;
        let expect = BigUint::from(brute_pairings(&w, PairingKind::Alternating));
        ensure(got == expect && got == catalan(k), || format!("A_u(2) {w}: {got} vs {expect}"))?;
    }
    Ok(format!("{words} *-words in A_o, 9 alternating words in A_u"))
}

fn criterion_6() -> Outcome {
    let dual = GroupDual::free_group(&["s", "t"]).map_err(|e| e.to_string())?;
    let sys = FusionSystem::new(dual.clone());
    let v = GeneratorElement::standard(&sys, &sys.fundamental()).map_err(|e| e.to_string())?;
    let pool: Vec<_> = ball(&sys, &v, &sys.unit(), 8).into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let a = pool.choose(&mut rng).unwrap();
        let b = pool.choose(&mut rng).unwrap();
        let got = distance(&sys, &v, a, b, 32).map_err(|e| e.to_string())?;
        let expect = dual.letter_length(&dual.multiply(b, &dual.inverse(a)));
        ensure(got == expect, || format!("d({}, {}) = {got}, word length {expect}", sys.format_label(a), sys.format_label(b)))?;
    }
    for r in 1..=8u32 {
        let size = sphere(&sys, &v, &sys.unit(), r as usize).len();
        ensure(size == 4 * 3usize.pow(r - 1), || format!("sphere {r}: {size}"))?;
    }
    Ok("100 pairs, spheres r ≤ 8".into())
}

fn criterion_7() -> Outcome {
    let p = |s: &str| s.parse::<Param>().map_err(|e| e.to_string());
    let two = ParamList::parse_all(["2^1/2", "2^-1/2"]).map_err(|e| e.to_string())?;
    let lat = modular_spectrum(&two);
    ensure(lat.basis_params() == vec![p("4")?], || format!("lattice {lat}"))?;
    ensure(lat.contains(&p("16")?) && !lat.contains(&p("2")?) && lat.contains(&p("1")?), || format!("membership in {lat}"))?;
    let mu = ParamList::parse_all(["mu^1/2", "mu^-1/2"]).map_err(|e| e.to_string())?;
    let lat_mu = modular_spectrum(&mu);
    ensure(lat_mu.basis_params() == vec![p("mu^2")?], || format!("lattice {lat_mu}"))?;
    ensure(!lat_mu.contains(&p("mu")?) && lat_mu.contains(&p("mu^-4")?), || format!("membership in {lat_mu}"))?;
    Ok(format!("{lat}, {lat_mu}"))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn semiring_suite<R, S>(sys: &FusionSystem<R>, label: S) -> Result<(), String>
where
    R: FusionRules,
    R::Label: std::fmt::Debug,
    S: Strategy<Value = R::Label> + Clone,
{
    let t = terms(label);
    runner(1000)
        .run(&(t.clone(), t.clone(), t), |(x, y, z)| {
            let (x, y, z) = (element(sys, x), element(sys, y), element(sys, z));
            let xy = sys.tensor(&x, &y).unwrap();
            prop_assert_eq!(sys.tensor(&xy, &z).unwrap(), sys.tensor(&x, &sys.tensor(&y, &z).unwrap()).unwrap());
            prop_assert_eq!(sys.dim_element(&xy).unwrap(), sys.dim_element(&x).unwrap() * sys.dim_element(&y).unwrap());
            let lhs = sys.conj_element(&xy).unwrap();
            prop_assert_eq!(lhs, sys.tensor(&sys.conj_element(&y).unwrap(), &sys.conj_element(&x).unwrap()).unwrap());
            prop_assert_eq!(sys.tensor(&sys.unit_element(), &x).unwrap(), x);
            Ok(())
        })
        .map_err(|e| format!("{}: {e}", sys.descriptor()))
}

fn criterion_8() -> Outcome {
    semiring_suite(&ao(3), ao_label(8))?;
    semiring_suite(&aut(5), aut_label(6))?;
    semiring_suite(&au(2), au_label(4))?;
    let free = GroupDual::free_group(&["s", "t"]).map_err(|e| e.to_string())?;
    semiring_suite(&FusionSystem::new(free.clone()), group_label(free, 4))?;

    let sys = ao(2);
    let lists = derive_irreducible_lists(&sys, &ParamList::parse_all(["q", "q^-1"]).map_err(|e| e.to_string())?, 8)
        .map_err(|e| e.to_string())?;
    let values = BTreeMap::from([("q".to_string(), 1.7)]);
    for (a, la) in &lists {
        for (b, lb) in &lists {
            let product = sys.tensor_labels(a, b);
            if !product.support().all(|c| lists.contains_key(c)) {
                continue;
            }
            let mut rhs = ParamList::new();
            for c in product.support() {
                rhs = list_sum(&rhs, &lists[c]);
            }
            ensure(list_tensor(la, lb) == rhs, || format!("list morphism fails at r{a} ⊗ r{b}"))?;
            let (qa, qb, qp) = (qdim(la, &values).unwrap(), qdim(lb, &values).unwrap(), qdim(&rhs, &values).unwrap());
            ensure((qp - qa * qb).abs() <= 1e-9 * qp, || format!("qdim not multiplicative at r{a} ⊗ r{b}"))?;
        }
    }

    for (sys, gen) in [(ao(3), "r1 + r2"), (ao(2), "r1 + r2")] {
        let v = GeneratorElement::new(&sys, sys.parse_element(gen).unwrap()).map_err(|e| e.to_string())?;
        let pts: Vec<u32> = ball(&sys, &v, &1, 12).into_iter().collect();
        for a in &pts {
            for b in &pts {
                for c in pts.iter().step_by(3) {
                    let d = |x: &u32, y: &u32| distance(&sys, &v, x, y, 64).unwrap();
                    ensure(d(a, b) == d(b, a) && (d(a, b) == 0) == (a == b) && d(a, c) <= d(a, b) + d(b, c), || {
                        format!("metric axioms fail at {a}, {b}, {c}")
                    })?;
                }
            }
        }
    }

    let g = principal_graph(&sys, &tower(&sys, &sys.fundamental(), 10).map_err(|e| e.to_string())?);
    ensure(g.vertices.len() == 11 && g.edges.len() == 10, || format!("{} vertices, {} edges", g.vertices.len(), g.edges.len()))?;
    let one = BigUint::from(1u32);
    for (k, (a, b, m)) in g.edges.iter().enumerate() {
        ensure(*a == k && *b == k + 1 && m == &one, || format!("edge {k}: {a} -> {b} ({m})"))?;
    }
    Ok(format!("4 families × 1000 triples, {} derived lists, 11-vertex path", lists.len()))
}

/// All splits `x = v·g`, `y = h·w` with `h` the bar of `g`.
fn split_oracle(x: &str, y: &str) -> BTreeMap<String, u32> {
    let bar = |s: &str| -> String { s.chars().rev().map(|c| if c == 'a' { 'b' } else { 'a' }).collect() };
    let mut out = BTreeMap::new();
    for i in 0..=x.len() {
        for j in 0..=y.len() {
            let (v, g) = x.split_at(i);
            let (h, w) = y.split_at(j);
            if bar(g) == h {
                let r = format!("{v}{w}");
                *out.entry(if r.is_empty() { "e".to_string() } else { r }).or_default() += 1;
            }
        }
    }
    out
}

fn criterion_9() -> Outcome {
    let sys = au(2);
    let mut shown = Vec::new();
    for (x, y, expect) in [("a", "b", "e + ab"), ("a", "a", "aa"), ("ab", "ab", "e + ab + abab")] {
        let got = sys.tensor_labels(&x.parse().unwrap(), &y.parse().unwrap());
        let map: BTreeMap<String, u32> =
            got.terms().iter().map(|(l, m)| (sys.format_label(l), u32::try_from(m).unwrap())).collect();
        ensure(map == split_oracle(x, y), || format!("{x} ⊗ {y}: oracle disagrees"))?;
        let text = sys.format_element(&got);
        ensure(text == expect, || format!("{x} ⊗ {y} = {text}"))?;
        shown.push(format!("r_{x}⊗r_{y} = {text}"));
    }
    Ok(shown.join("; "))
}

fn main() {
    panic::set_hook(Box::new(|_| {}));
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 Catalan Hom dimensions", criterion_1),
        ("2 A_o dimension formula", criterion_2),
        ("3 amenability verdicts", criterion_3),
        ("4 free-group Kesten value", criterion_4),
        ("5 moment oracle equivalence", criterion_5),
        ("6 free-group word metric", criterion_6),
        ("7 modular spectrum lattices", criterion_7),
        ("8 property suites", criterion_8),
        ("9 A_u free fusion", criterion_9),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let outcome = panic::catch_unwind(f).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 9 acceptance criteria passed");
}
