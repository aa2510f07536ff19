//! Finitely generated subgroups of `ℝ₊*` spanned by parameters, stored as
//! integer exponent lattices in Hermite normal form.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::{Exponent, Param, ParamList};

/// `{Π g_j^{x_j / den} : x ∈ row span of basis}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExponentLattice {
    generators: Vec<String>,
    denominator: i64,
    basis: Vec<Vec<BigInt>>,
}

/// Row-style Hermite normal form: pivots strictly move right, pivots are
/// positive, and entries above a pivot lie in `[0, pivot)`. Zero rows are
/// dropped.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for j in 0..cols {
        if r == m.len() {
            break;
        }
        loop {
            let pivot = (r..m.len()).filter(|&i| !m[i][j].is_zero()).min_by_key(|&i| m[i][j].abs());
            let Some(p) = pivot else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][j].is_zero() {
                    continue;
                }
                let q = m[i][j].div_floor(&m[r][j]);
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !m[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r == m.len() || m[r][j].is_zero() {
            continue;
        }
        if m[r][j].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = m[r].clone();
        for i in 0..r {
            let q = m[i][j].div_floor(&pivot_row[j]);
            for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                *x -= &q * y;
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

impl ExponentLattice {
    /// Lattice generated by the given parameters.
    pub fn generated_by<'a>(params: impl IntoIterator<Item = &'a Param>) -> Self {
        let params: Vec<&Param> = params.into_iter().collect();
        let generators: Vec<String> =
            params.iter().flat_map(|p| p.exponents().keys().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
        let denominator = params
            .iter()
            .flat_map(|p| p.exponents().values().map(|e| *e.denom()))
            .fold(1i64, |acc, d| acc.lcm(&d));
        let rows: Vec<Vec<BigInt>> = params
            .iter()
            .map(|p| {
                generators
                    .iter()
                    .map(|g| {
                        let scaled = p.exponent(g) * Exponent::from_integer(denominator);
                        BigInt::from(*scaled.numer())
                    })
                    .collect()
            })
            .collect();
        ExponentLattice { basis: hermite_normal_form(&rows), generators, denominator }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    /// Basis rows as parameters.
    pub fn basis_params(&self) -> Vec<Param> {
        self.basis
            .iter()
            .map(|row| {
                Param::from_exponents(self.generators.iter().zip(row).map(|(g, x)| {
                    let x: i64 = x.try_into().expect("exponent fits in i64");
                    (g.clone(), Exponent::new(x, self.denominator))
                }))
            })
            .collect()
    }

    pub fn contains(&self, p: &Param) -> bool {
        if p.exponents().keys().any(|g| !self.generators.contains(g)) {
            return false;
        }
        let mut v = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let scaled = p.exponent(g) * Exponent::from_integer(self.denominator);
            if !scaled.is_integer() {
                return false;
            }
            v.push(BigInt::from(*scaled.numer()));
        }
        for row in &self.basis {
            let j = row.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            let (q, r) = v[j].div_rem(&row[j]);
            if !r.is_zero() {
                return false;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "generators": self.generators,
            "denominator": self.denominator,
            "basis": self.basis.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "basis_params": self.basis_params().iter().map(Param::to_string).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for ExponentLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("{1}");
        }
        let gens: Vec<String> = self.basis_params().iter().map(|p| format!("({p})^Z")).collect();
        f.write_str(&gens.join(" * "))
    }
}

/// Lattice generated by `{p²q² : p, q ∈ l}`.
pub fn modular_spectrum(l: &ParamList) -> ExponentLattice {
    let entries: Vec<&Param> = l.iter().map(|(p, _)| p).collect();
    let mut gens = Vec::new();
    for p in &entries {
        for q in &entries {
            gens.push(p.mul(q).pow(Exponent::from_integer(2)));
        }
    }
    ExponentLattice::generated_by(&gens)
}

pub fn lattice_membership(lattice: &ExponentLattice, p: &Param) -> bool {
    lattice.contains(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn p(s: &str) -> Param {
        s.parse().unwrap()
    }

    #[test]
    fn hnf_small_cases() {
        assert_eq!(hermite_normal_form(&big(&[&[4], &[6]])), big(&[&[2]]));
        assert_eq!(hermite_normal_form(&big(&[&[2, 3], &[4, 5]])), big(&[&[2, 0], &[0, 1]]));
        assert_eq!(hermite_normal_form(&big(&[&[0, 0], &[-3, 0]])), big(&[&[3, 0]]));
        assert!(hermite_normal_form(&big(&[&[0, 0]])).is_empty());
    }

    #[test]
    fn spectrum_of_sqrt_two() {
        let l = ParamList::parse_all(["2^1/2", "2^-1/2"]).unwrap();
        let lat = modular_spectrum(&l);
        assert_eq!(lat.rank(), 1);
        assert_eq!(lat.basis_params(), vec![p("4")]);
        assert!(lat.contains(&p("16")));
        assert!(!lat.contains(&p("2")));
        assert!(lat.contains(&p("1")));
        assert!(lat.contains(&p("4^-3")));
        assert!(!lat.contains(&p("3")));
    }

    #[test]
    fn spectrum_of_mu() {
        let l = ParamList::parse_all(["mu^1/2", "mu^-1/2"]).unwrap();
        let lat = modular_spectrum(&l);
        assert_eq!(lat.basis_params(), vec![p("mu^2")]);
        assert!(lat.contains(&p("mu^4")));
        assert!(!lat.contains(&p("mu")));
        assert!(!lat.contains(&p("mu^1/2")));
    }

    #[test]
    fn kac_lists_are_trivial() {
        let lat = modular_spectrum(&ParamList::trivial(4));
        assert!(lat.is_trivial());
        assert!(lat.contains(&Param::one()));
        assert!(!lat.contains(&p("q")));
        assert_eq!(lat.to_string(), "{1}");
    }

    #[test]
    fn two_generators() {
        let l = ParamList::parse_all(["q", "q^-1", "r^1/3"]).unwrap();
        let lat = modular_spectrum(&l);
        for a in l.entries() {
            for b in l.entries() {
                assert!(lat.contains(&a.mul(&b).pow(Exponent::from_integer(2))));
            }
        }
        assert!(lat.contains(&p("r^2/3*q^2")));
        assert!(!lat.contains(&p("r^1/3")));
    }
}
