//! Multivariate polynomials over Q in the chart coordinates `x^1..x^d`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::scalar::Scalar;

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

pub fn monomial_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// All exponent vectors in `d` variables of total degree exactly `deg`,
/// in lexicographically decreasing order of the exponent vector.
pub fn monomials_of_degree(d: usize, deg: u32) -> Vec<Monomial> {
    fn rec(d: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == d {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(d, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(d, deg, &mut Vec::new(), &mut out);
    out
}

pub fn monomials_up_to(d: usize, deg: u32) -> Vec<Monomial> {
    (0..=deg).flat_map(|k| monomials_of_degree(d, k)).collect()
}

pub fn monomial_key(m: &[u32]) -> String {
    m.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

pub fn parse_monomial_key(s: &str) -> Option<Monomial> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// Scalar polynomial with sparse monomial support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x^i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Scalar::from_integer(1.into()));
        p
    }

    pub fn monomial(exps: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Monomial, c: Scalar) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exps).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-Scalar::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (ma, a) in &self.terms {
            for (mb, b) in &o.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                out.add_term(m, a * b);
            }
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut e = m.clone();
            e[i] -= 1;
            out.add_term(e, c * Scalar::from_integer(m[i].into()));
        }
        out
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter().zip(x).fold(c.clone(), |acc, (e, xi)| {
                    acc * num_traits::pow(xi.clone(), *e as usize)
                })
            })
            .sum()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| monomial_degree(m)).max()
    }
}
