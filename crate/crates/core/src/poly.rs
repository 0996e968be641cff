//! Univariate polynomials over Q: characteristic and minimal polynomials,
//! squarefreeness, and factorization into irreducible rational factors.

use std::cmp::Ordering;
use std::fmt;

use algebraics::polynomial::Polynomial as IntPolynomial;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::{vec_is_zero, Matrix};
use crate::scalar::Scalar;

/// Dense polynomial, coefficients from the constant term upwards, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        Self::new(vec![Scalar::zero(), Scalar::one()])
    }

    /// `x - r`
    pub fn linear(r: &Scalar) -> Self {
        Self::new(vec![-r, Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn add(&self, o: &UniPoly) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero);
                    let b = o.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &UniPoly) -> Self {
        self.add(&o.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let lc = r0.leading();
        let inv = Scalar::one() / lc;
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn lcm(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        self.mul(o).div_rem(&self.gcd(o)).0.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Scalar::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn is_squarefree(&self) -> bool {
        self.degree()
            .is_some_and(|d| d == 0 || self.gcd(&self.derivative()).degree() == Some(0))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    /// `p(M)` as a matrix (Horner).
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&Matrix::scalar(n, c));
        }
        acc
    }

    /// `p(M) v` using only matrix-vector products.
    pub fn apply(&self, m: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
        let mut acc = vec![Scalar::zero(); v.len()];
        for c in self.coeffs.iter().rev() {
            acc = m.mul_vec(&acc);
            if !c.is_zero() {
                for (a, x) in acc.iter_mut().zip(v) {
                    if !x.is_zero() {
                        *a += c * x;
                    }
                }
            }
        }
        acc
    }

    /// The single root of a linear polynomial.
    pub fn linear_root(&self) -> Option<Scalar> {
        (self.degree() == Some(1)).then(|| -&self.coeffs[0] / &self.coeffs[1])
    }

    /// Primitive integer polynomial with positive leading coefficient, same roots.
    fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm_den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm_den.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| &sign * c / &content).collect()
    }

    /// Monic irreducible factors over Q with multiplicities, sorted by
    /// degree and then coefficients.
    pub fn factor(&self) -> Vec<(UniPoly, usize)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let ip: IntPolynomial<BigInt> = IntPolynomial::from(self.primitive_integer());
        let factors = ip.factor();
        let mut out: Vec<(UniPoly, usize)> = factors
            .polynomial_factors
            .into_iter()
            .map(|f| {
                let coeffs: Vec<Scalar> = f
                    .polynomial
                    .into_coefficients()
                    .into_iter()
                    .map(BigRational::from_integer)
                    .collect();
                (UniPoly::new(coeffs).monic(), f.power)
            })
            .filter(|(p, _)| p.degree().unwrap_or(0) > 0)
            .collect();
        out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        out
    }

    /// Deterministic total order: degree first, then coefficients from the top.
    pub fn canonical_cmp(&self, o: &UniPoly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&o.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(o.coeffs.iter().rev()))
    }

    /// Characteristic polynomial `det(x I - M)` via Hessenberg reduction.
    pub fn charpoly(m: &Matrix) -> UniPoly {
        assert!(
            m.is_square(),
            "characteristic polynomial of a non-square matrix"
        );
        let n = m.rows();
        let mut a = m.to_dense();
        // Reduce to upper Hessenberg form by similarity transforms.
        for col in 0..n.saturating_sub(2) {
            let Some(piv) = (col + 1..n).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            if piv != col + 1 {
                a.swap(piv, col + 1);
                for row in a.iter_mut() {
                    row.swap(piv, col + 1);
                }
            }
            for i in col + 2..n {
                if a[i][col].is_zero() {
                    continue;
                }
                let f = &a[i][col] / &a[col + 1][col];
                for j in 0..n {
                    let t = &f * &a[col + 1][j];
                    a[i][j] -= t;
                }
                for row in a.iter_mut() {
                    let t = &f * &row[i];
                    row[col + 1] += t;
                }
            }
        }
        // Recurrence on leading principal minors of the Hessenberg matrix.
        let mut p: Vec<UniPoly> = vec![UniPoly::one()];
        for k in 0..n {
            let mut next = UniPoly::x()
                .sub(&UniPoly::constant(a[k][k].clone()))
                .mul(&p[k]);
            let mut prod = Scalar::one();
            for i in (0..k).rev() {
                prod *= &a[i + 1][i];
                if prod.is_zero() {
                    break;
                }
                let term = p[i].scale(&(&prod * &a[i][k]));
                next = next.sub(&term);
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    /// Minimal polynomial of `M`, assembled as the lcm of the local minimal
    /// polynomials of the standard basis vectors.
    pub fn minimal_polynomial(m: &Matrix) -> UniPoly {
        assert!(m.is_square());
        let n = m.rows();
        let mut p = UniPoly::one();
        for b in 0..n {
            let mut e = vec![Scalar::zero(); n];
            e[b] = Scalar::one();
            let w = p.apply(m, &e);
            if vec_is_zero(&w) {
                continue;
            }
            let q = local_minimal_polynomial(m, &w);
            p = p.mul(&q);
        }
        p.monic()
    }
}

/// Minimal polynomial of the vector `v` under `M`: the monic `q` of least
/// degree with `q(M) v = 0`.
pub fn local_minimal_polynomial(m: &Matrix, v: &[Scalar]) -> UniPoly {
    let n = v.len();
    // Each stored row: reduced vector with the polynomial producing it.
    let mut basis: Vec<(usize, Vec<Scalar>, UniPoly)> = Vec::new();
    let mut cur = v.to_vec();
    let mut cur_poly = UniPoly::one();
    loop {
        let mut r = cur.clone();
        let mut rp = cur_poly.clone();
        for (piv, bv, bp) in &basis {
            if r[*piv].is_zero() {
                continue;
            }
            let f = r[*piv].clone() / &bv[*piv];
            for (x, y) in r.iter_mut().zip(bv) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            rp = rp.sub(&bp.scale(&f));
        }
        match (0..n).find(|&i| !r[i].is_zero()) {
            None => return rp.monic(),
            Some(piv) => basis.push((piv, r, rp)),
        }
        cur = m.mul_vec(&cur);
        cur_poly = cur_poly.mul(&UniPoly::x());
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coef = crate::scalar::pretty(&a);
            match (i, a.is_one()) {
                (0, _) => write!(f, "{coef}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{coef}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{coef}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn p(cs: &[i64]) -> UniPoly {
        UniPoly::new(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -3, 0, 2]).to_string(), "2*x^3 - 3*x + 1");
        assert_eq!(UniPoly::linear(&frac(3, 2)).to_string(), "x - 3/2");
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // x^2-1
        let b = p(&[1, 1]); // x+1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[-1, 1])), p(&[-1, 1]));
        let (g, s, t) = a.xgcd(&p(&[2, 1]));
        assert_eq!(s.mul(&a).add(&t.mul(&p(&[2, 1]))), g);
        assert!(g.is_one());
    }

    #[test]
    fn squarefree() {
        assert!(p(&[-1, 0, 1]).is_squarefree());
        assert!(!p(&[1, 2, 1]).is_squarefree());
    }

    #[test]
    fn factor_mixed() {
        // (x - 1/2)^2 (x^2 + 1) (x + 3)
        let f = UniPoly::linear(&frac(1, 2))
            .pow(2)
            .mul(&p(&[1, 0, 1]))
            .mul(&p(&[3, 1]))
            .scale(&int(4));
        let fs = f.factor();
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[0], (UniPoly::linear(&frac(1, 2)), 2));
        assert_eq!(fs[1], (UniPoly::linear(&int(-3)), 1));
        assert_eq!(fs[2], (p(&[1, 0, 1]), 1));
    }

    #[test]
    fn charpoly_and_minpoly() {
        let m = Matrix::from_dense(&[
            vec![int(2), int(1), int(0)],
            vec![int(0), int(2), int(0)],
            vec![int(0), int(0), int(3)],
        ]);
        let cp = UniPoly::charpoly(&m);
        assert_eq!(cp, p(&[-2, 1]).pow(2).mul(&p(&[-3, 1])));
        let mp = UniPoly::minimal_polynomial(&m);
        assert_eq!(mp, cp);
        let d = Matrix::from_dense(&[
            vec![int(2), int(0), int(0)],
            vec![int(0), int(2), int(0)],
            vec![int(0), int(0), int(3)],
        ]);
        assert_eq!(UniPoly::minimal_polynomial(&d), p(&[6, -5, 1]));
        assert!(mp.eval_matrix(&m).is_zero());
    }

    #[test]
    fn charpoly_dense_generic() {
        let m = Matrix::from_dense(&[
            vec![int(0), int(1), int(2)],
            vec![int(3), int(0), int(1)],
            vec![int(1), int(1), int(1)],
        ]);
        let cp = UniPoly::charpoly(&m);
        // det(xI - M) evaluated at x = 0 equals -det(M)
        assert!(cp.eval_matrix(&m).is_zero());
        assert_eq!(cp.degree(), Some(3));
    }
}
