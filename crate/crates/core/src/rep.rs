//! Finite-dimensional `g_0`-modules and the symbol spaces
//! `⊗^k g_{-1} ⊗ gl(V1, V2)`.
//!
//! Actions are stored per `g_0` basis position: index 0 is `E`, index `1 + j`
//! is `A_j`. Densities use the weight convention `A ↦ (λ+z) tr(ad A|g_{-1})`,
//! so `E` acts on `density(λ,z)` by `-(λ+z) d`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lie::GradedAlgebra;
use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};

/// Build recipe for a representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    Density(Scalar, i64),
    Standard,
    Dual(Box<Descriptor>),
    Tensor(Box<Descriptor>, Box<Descriptor>),
    Sym(usize, Box<Descriptor>),
    Ext(usize, Box<Descriptor>),
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Density(l, z) => write!(f, "density({},{})", scalar::pretty(l), z),
            Descriptor::Standard => write!(f, "standard"),
            Descriptor::Dual(r) => write!(f, "dual({r})"),
            Descriptor::Tensor(a, b) => write!(f, "tensor({a},{b})"),
            Descriptor::Sym(n, r) => write!(f, "sym{n}({r})"),
            Descriptor::Ext(n, r) => write!(f, "ext{n}({r})"),
        }
    }
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = DescParser { src: s, pos: 0 };
        let d = p.descriptor()?;
        p.skip_ws();
        if p.pos < s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(d)
    }
}

type Wrapper = fn(usize, Box<Descriptor>) -> Descriptor;

struct DescParser<'a> {
    src: &'a str,
    pos: usize,
}

impl DescParser<'_> {
    fn error(&self, msg: &str) -> Error {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Parse {
            message: msg.to_string(),
            line,
            column,
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &str {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<Scalar> {
        let start = self.pos;
        let tok = self
            .take_while(|c| c.is_ascii_digit() || c == '-' || c == '+' || c == '/')
            .to_string();
        scalar::parse(&tok).map_err(|_| {
            self.pos = start;
            self.skip_ws();
            self.error(&format!("expected a rational number, found {tok:?}"))
        })
    }

    fn descriptor(&mut self) -> Result<Descriptor> {
        self.skip_ws();
        let start = self.pos;
        let name = self.take_while(|c| c.is_ascii_alphanumeric()).to_string();
        let power = |prefix: &str| -> Option<usize> {
            name.strip_prefix(prefix).and_then(|n| n.parse().ok())
        };
        if name == "standard" {
            return Ok(Descriptor::Standard);
        }
        if name == "density" {
            self.eat('(')?;
            let l = self.number()?;
            self.eat(',')?;
            let zpos = self.pos;
            let z = self.number()?;
            if !z.is_integer() {
                self.pos = zpos;
                self.skip_ws();
                return Err(self.error("density twist z must be an integer"));
            }
            self.eat(')')?;
            let z = z
                .to_integer()
                .try_into()
                .map_err(|_| self.error("density twist out of range"))?;
            return Ok(Descriptor::Density(l, z));
        }
        if name == "dual" {
            self.eat('(')?;
            let r = self.descriptor()?;
            self.eat(')')?;
            return Ok(Descriptor::Dual(Box::new(r)));
        }
        if name == "tensor" {
            self.eat('(')?;
            let a = self.descriptor()?;
            self.eat(',')?;
            let b = self.descriptor()?;
            self.eat(')')?;
            return Ok(Descriptor::Tensor(Box::new(a), Box::new(b)));
        }
        let wrap: Option<(usize, Wrapper)> = if let Some(n) = power("sym") {
            Some((n, Descriptor::Sym))
        } else if let Some(n) = power("ext") {
            Some((n, Descriptor::Ext))
        } else {
            None
        };
        match wrap {
            Some((n, ctor)) => {
                self.eat('(')?;
                let r = self.descriptor()?;
                self.eat(')')?;
                Ok(ctor(n, Box::new(r)))
            }
            None => {
                self.pos = start;
                Err(self.error(&format!("unknown constructor {name:?}")))
            }
        }
    }
}

fn algebra_tag(alg: &GradedAlgebra) -> String {
    let g0: Vec<&str> = alg.g0_indices().map(|i| alg.labels()[i].as_str()).collect();
    format!("{}[{}]", alg.kind(), g0.join(","))
}

/// A `g_0`-module with one exact matrix per `g_0` basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    descriptor: Descriptor,
    dim: usize,
    actions: Vec<Matrix>,
    algebra: String,
}

impl Representation {
    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix of the `g_0` basis element at position `i` (0 = `E`).
    pub fn action(&self, i: usize) -> &Matrix {
        &self.actions[i]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.actions
    }

    pub fn action_by_label(&self, alg: &GradedAlgebra, label: &str) -> Option<&Matrix> {
        let idx = alg.index_of(label)?;
        alg.g0_indices()
            .position(|i| i == idx)
            .map(|p| &self.actions[p])
    }

    /// Action of a `g_0` element given in full algebra coordinates.
    pub fn act(&self, alg: &GradedAlgebra, x: &[Scalar]) -> Matrix {
        combine_g0(alg, &self.actions, x)
    }

    pub fn same_algebra(&self, alg: &GradedAlgebra) -> bool {
        self.algebra == algebra_tag(alg)
    }

    pub fn check_homomorphism(&self, alg: &GradedAlgebra) -> Option<String> {
        homomorphism_defect(alg, &self.actions)
    }
}

/// `Σ x_i M_i` over the `g_0` components of `x`.
pub fn combine_g0(alg: &GradedAlgebra, mats: &[Matrix], x: &[Scalar]) -> Matrix {
    let n = mats[0].rows();
    alg.g0_indices()
        .zip(mats)
        .filter(|(i, _)| !x[*i].is_zero())
        .fold(Matrix::zeros(n, mats[0].cols()), |acc, (i, m)| {
            acc.add_scaled(m, &x[i])
        })
}

/// First `g_0` pair `(A, B)` with `M([A,B]) != [M(A), M(B)]`, if any.
pub fn homomorphism_defect(alg: &GradedAlgebra, mats: &[Matrix]) -> Option<String> {
    let g0: Vec<usize> = alg.g0_indices().collect();
    for (pa, &a) in g0.iter().enumerate() {
        for (pb, &b) in g0.iter().enumerate().skip(pa + 1) {
            let lhs = combine_g0(alg, mats, alg.bracket_basis(a, b));
            if lhs != mats[pa].commutator(&mats[pb]) {
                return Some(format!("[{}, {}]", alg.labels()[a], alg.labels()[b]));
            }
        }
    }
    None
}

pub fn density_rep(alg: &GradedAlgebra, lambda: &Scalar, z: i64) -> Representation {
    let w = lambda + scalar::int(z);
    let actions = alg
        .g0_indices()
        .map(|i| Matrix::scalar(1, &(&w * alg.ad_on_gm1(&alg.unit(i)).trace())))
        .collect();
    Representation {
        descriptor: Descriptor::Density(lambda.clone(), z),
        dim: 1,
        actions,
        algebra: algebra_tag(alg),
    }
}

pub fn standard_rep(alg: &GradedAlgebra) -> Representation {
    Representation {
        descriptor: Descriptor::Standard,
        dim: alg.d(),
        actions: alg
            .g0_indices()
            .map(|i| alg.ad_on_gm1(&alg.unit(i)))
            .collect(),
        algebra: algebra_tag(alg),
    }
}

pub fn build_rep(alg: &GradedAlgebra, desc: &Descriptor) -> Result<Representation> {
    let tag = algebra_tag(alg);
    let (dim, actions) = match desc {
        Descriptor::Density(l, z) => return Ok(density_rep(alg, l, *z)),
        Descriptor::Standard => return Ok(standard_rep(alg)),
        Descriptor::Dual(r) => {
            let r = build_rep(alg, r)?;
            let acts = r
                .actions
                .iter()
                .map(|m| m.transpose().scale(&scalar::int(-1)))
                .collect();
            (r.dim, acts)
        }
        Descriptor::Tensor(a, b) => {
            let a = build_rep(alg, a)?;
            let b = build_rep(alg, b)?;
            let (ia, ib) = (Matrix::identity(a.dim), Matrix::identity(b.dim));
            let acts = a
                .actions
                .iter()
                .zip(&b.actions)
                .map(|(ma, mb)| ma.kron(&ib).add(&ia.kron(mb)))
                .collect();
            (a.dim * b.dim, acts)
        }
        Descriptor::Sym(n, r) => {
            let r = build_rep(alg, r)?;
            let basis = multisets(r.dim, *n);
            let acts = r
                .actions
                .iter()
                .map(|m| power_action(m, &basis, false))
                .collect();
            (basis.len(), acts)
        }
        Descriptor::Ext(n, r) => {
            let r = build_rep(alg, r)?;
            if *n > r.dim {
                return Err(Error::UnsupportedDescriptor(format!(
                    "{desc}: exterior power exceeds dimension"
                )));
            }
            let basis = increasing_tuples(r.dim, *n);
            let acts = r
                .actions
                .iter()
                .map(|m| power_action(m, &basis, true))
                .collect();
            (basis.len(), acts)
        }
    };
    if dim == 0 {
        return Err(Error::UnsupportedDescriptor(format!(
            "{desc} is zero-dimensional"
        )));
    }
    Ok(Representation {
        descriptor: desc.clone(),
        dim,
        actions,
        algebra: tag,
    })
}

/// Sorted multisets of size `n` over `0..dim`, in lexicographic order.
pub fn multisets(dim: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(dim: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(dim, n, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, n, 0, &mut Vec::new(), &mut out);
    out
}

fn increasing_tuples(dim: usize, n: usize) -> Vec<Vec<usize>> {
    multisets(dim, n)
        .into_iter()
        .filter(|t| t.windows(2).all(|w| w[0] < w[1]))
        .collect()
}

/// Leibniz action on symmetric (or exterior) monomials.
fn power_action(m: &Matrix, basis: &[Vec<usize>], alternating: bool) -> Matrix {
    let index: HashMap<&[usize], usize> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| (b.as_slice(), i))
        .collect();
    let mt = m.transpose();
    let mut trip = Vec::new();
    for (col, mono) in basis.iter().enumerate() {
        for t in 0..mono.len() {
            // column mono[t] of m, read as row of the transpose
            for (s, c) in mt.row_entries(mono[t]) {
                let mut w = mono.clone();
                w[t] = *s;
                let sign = if alternating {
                    match sort_sign(&mut w) {
                        Some(sg) => sg,
                        None => continue,
                    }
                } else {
                    w.sort_unstable();
                    1
                };
                trip.push((index[w.as_slice()], col, c * scalar::int(sign)));
            }
        }
    }
    Matrix::from_triplets(basis.len(), basis.len(), trip)
}

/// Sorts in place; returns the permutation sign, or `None` on a repeat.
fn sort_sign(w: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            w.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        None
    } else {
        Some(sign)
    }
}

/// `ρ'_*(h)`: the representation applied to the `g_0` part of `h ∈ g_0 ⊕ g_1`.
pub fn rho_prime_star(alg: &GradedAlgebra, h: &[Scalar], rep: &Representation) -> Result<Matrix> {
    if !alg.component(h, -1).iter().all(Zero::is_zero) {
        return Err(Error::NotInSubspace("the parabolic subalgebra g_0 + g_1"));
    }
    Ok(rep.act(alg, h))
}

/// Words of length `k` over `0..d`; the first letter is most significant.
pub fn word_of(index: usize, d: usize, k: usize) -> Vec<usize> {
    let mut w = vec![0; k];
    let mut r = index;
    for slot in (0..k).rev() {
        w[slot] = r % d;
        r /= d;
    }
    w
}

pub fn word_index(w: &[usize], d: usize) -> usize {
    w.iter().fold(0, |acc, &l| acc * d + l)
}

/// `⊗^k g_{-1} ⊗ gl(V1, V2)` with the `g_0` actions `ρ_*`, `ρ_r*`, `ρ_2*`.
///
/// Full index is `word_index * hom_dim + r * dim V1 + c`, where the matrix
/// unit `E_rc` sends basis vector `c` of `V1` to basis vector `r` of `V2`.
#[derive(Clone, Debug)]
pub struct SymbolSpace {
    k: usize,
    d: usize,
    v1: Representation,
    v2: Representation,
    rho: Vec<Matrix>,
    rho_r: Vec<Matrix>,
    rho_2: Vec<Matrix>,
    sym_words: Vec<Vec<usize>>,
}

impl SymbolSpace {
    pub fn new(
        alg: &GradedAlgebra,
        v1: &Representation,
        v2: &Representation,
        k: usize,
    ) -> Result<Self> {
        if !v1.same_algebra(alg) || !v2.same_algebra(alg) {
            return Err(Error::MixedAlgebra);
        }
        let d = alg.d();
        let (n1, n2) = (v1.dim, v2.dim);
        let hom = n1 * n2;
        let nwords = d.pow(k as u32);
        let dim = nwords * hom;
        let ad: Vec<Matrix> = alg
            .g0_indices()
            .map(|i| alg.ad_on_gm1(&alg.unit(i)))
            .collect();
        let mut rho_r = Vec::new();
        let mut rho_2 = Vec::new();
        for p in 0..ad.len() {
            let a = &ad[p];
            let r1t = v1.actions[p].clone();
            let r2t = v2.actions[p].transpose();
            let mut tr = Vec::new();
            let mut t2 = Vec::new();
            for wi in 0..nwords {
                let w = word_of(wi, d, k);
                for r in 0..n2 {
                    for c in 0..n1 {
                        let col = wi * hom + r * n1 + c;
                        for slot in 0..k {
                            // ad(A) e_{w_slot} = Σ_s a[s][w_slot] e_s
                            for s in 0..d {
                                let coef = a.get(s, w[slot]);
                                if coef.is_zero() {
                                    continue;
                                }
                                let mut w2 = w.clone();
                                w2[slot] = s;
                                tr.push((word_index(&w2, d) * hom + r * n1 + c, col, coef));
                            }
                        }
                        // -(E_rc ∘ ρ1(A)) = -Σ_t ρ1(A)_{ct} E_rt
                        for (t, coef) in r1t.row_entries(c) {
                            tr.push((wi * hom + r * n1 + t, col, -coef.clone()));
                        }
                        // ρ2(A) ∘ E_rc = Σ_s ρ2(A)_{sr} E_sc
                        for (s, coef) in r2t.row_entries(r) {
                            t2.push((wi * hom + s * n1 + c, col, coef.clone()));
                        }
                    }
                }
            }
            rho_r.push(Matrix::from_triplets(dim, dim, tr));
            rho_2.push(Matrix::from_triplets(dim, dim, t2));
        }
        let rho = rho_r.iter().zip(&rho_2).map(|(a, b)| a.add(b)).collect();
        Ok(SymbolSpace {
            k,
            d,
            v1: v1.clone(),
            v2: v2.clone(),
            rho,
            rho_r,
            rho_2,
            sym_words: multisets(d, k),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn v1(&self) -> &Representation {
        &self.v1
    }

    pub fn v2(&self) -> &Representation {
        &self.v2
    }

    pub fn hom_dim(&self) -> usize {
        self.v1.dim * self.v2.dim
    }

    pub fn num_words(&self) -> usize {
        self.d.pow(self.k as u32)
    }

    pub fn dim(&self) -> usize {
        self.num_words() * self.hom_dim()
    }

    pub fn index(&self, word: &[usize], r: usize, c: usize) -> usize {
        word_index(word, self.d) * self.hom_dim() + r * self.v1.dim + c
    }

    /// `(word, r, c)` of a full index.
    pub fn split_index(&self, idx: usize) -> (Vec<usize>, usize, usize) {
        let hom = self.hom_dim();
        let h = idx % hom;
        (
            word_of(idx / hom, self.d, self.k),
            h / self.v1.dim,
            h % self.v1.dim,
        )
    }

    pub fn rho_star(&self) -> &[Matrix] {
        &self.rho
    }

    pub fn rho_r_star(&self) -> &[Matrix] {
        &self.rho_r
    }

    pub fn rho_2_star(&self) -> &[Matrix] {
        &self.rho_2
    }

    /// `ρ_*` of a `g_0` element in full algebra coordinates.
    pub fn rho_of(&self, alg: &GradedAlgebra, x: &[Scalar]) -> Matrix {
        combine_g0(alg, &self.rho, x)
    }

    pub fn rho_r_of(&self, alg: &GradedAlgebra, x: &[Scalar]) -> Matrix {
        combine_g0(alg, &self.rho_r, x)
    }

    /// Sorted multisets indexing `S^k g_{-1}`.
    pub fn sym_words(&self) -> &[Vec<usize>] {
        &self.sym_words
    }

    pub fn sym_dim(&self) -> usize {
        self.sym_words.len() * self.hom_dim()
    }

    pub fn sym_index(&self, multiset: &[usize], r: usize, c: usize) -> usize {
        let m = self
            .sym_words
            .binary_search_by(|w| w.as_slice().cmp(multiset))
            .expect("sorted multiset of the right length");
        m * self.hom_dim() + r * self.v1.dim + c
    }

    /// `S^k ⊗ hom -> ⊗^k ⊗ hom`: a multiset maps to the average of its distinct orderings.
    pub fn embed_matrix(&self) -> Matrix {
        let hom = self.hom_dim();
        let mut counts: Vec<usize> = vec![0; self.sym_words.len()];
        let owner: Vec<usize> = (0..self.num_words())
            .map(|wi| {
                let mut w = word_of(wi, self.d, self.k);
                w.sort_unstable();
                let m = self.sym_words.binary_search(&w).unwrap();
                counts[m] += 1;
                m
            })
            .collect();
        let trip = owner.iter().enumerate().flat_map(|(wi, &m)| {
            let inv = scalar::frac(1, counts[m] as i64);
            (0..hom).map(move |h| (wi * hom + h, m * hom + h, inv.clone()))
        });
        Matrix::from_triplets(self.dim(), self.sym_dim(), trip.collect::<Vec<_>>())
    }

    /// `⊗^k ⊗ hom -> S^k ⊗ hom`: sums coefficients over each orbit; left inverse of the embedding.
    pub fn project_matrix(&self) -> Matrix {
        let hom = self.hom_dim();
        let mut trip = Vec::new();
        for wi in 0..self.num_words() {
            let mut w = word_of(wi, self.d, self.k);
            w.sort_unstable();
            let m = self.sym_words.binary_search(&w).unwrap();
            for h in 0..hom {
                trip.push((m * hom + h, wi * hom + h, scalar::one()));
            }
        }
        Matrix::from_triplets(self.sym_dim(), self.dim(), trip)
    }

    pub fn embed_symmetric(&self, coords: &[Scalar]) -> Vec<Scalar> {
        self.embed_matrix().mul_vec(coords)
    }

    pub fn project_symmetric(&self, t: &[Scalar]) -> Vec<Scalar> {
        self.project_matrix().mul_vec(t)
    }

    /// The averaging projector onto symmetric tensors.
    pub fn symmetrizer(&self) -> Matrix {
        self.embed_matrix().mul(&self.project_matrix())
    }

    pub fn symmetrize(&self, t: &[Scalar]) -> Vec<Scalar> {
        self.embed_symmetric(&self.project_symmetric(t))
    }

    /// `ρ_*` transported to symmetric coordinates.
    pub fn rho_sym(&self) -> Vec<Matrix> {
        let (e, p) = (self.embed_matrix(), self.project_matrix());
        self.rho.iter().map(|m| p.mul(&m.mul(&e))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::build_conformal_algebra;
    use crate::scalar::{frac, int};

    #[test]
    fn descriptor_roundtrip() {
        for s in [
            "density(1/2,0)",
            "tensor(standard,density(-1/3,0))",
            "sym2(standard)",
            "ext2(dual(standard))",
        ] {
            let d: Descriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        let d: Descriptor = " tensor( standard , density( 3 , -1 ) )".parse().unwrap();
        assert_eq!(d.to_string(), "tensor(standard,density(3,-1))");
    }

    #[test]
    fn descriptor_errors_have_positions() {
        match "tensor(standard,\n  bogus(1))".parse::<Descriptor>() {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        match "density(1/2,x)".parse::<Descriptor>() {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 13)),
            other => panic!("{other:?}"),
        }
        assert!("density(1/2,1/2)".parse::<Descriptor>().is_err());
        assert!("standard)".parse::<Descriptor>().is_err());
    }

    #[test]
    fn density_actions() {
        let g = build_conformal_algebra(1, 2).unwrap();
        let r = density_rep(&g, &frac(1, 2), 1);
        assert_eq!(r.action(0).get(0, 0), frac(-9, 2));
        assert!(r.actions()[1..].iter().all(Matrix::is_zero));
        assert!(density_rep(&g, &int(0), 0)
            .actions()
            .iter()
            .all(Matrix::is_zero));
    }

    #[test]
    fn functorial_constructions() {
        let g = build_conformal_algebra(1, 2).unwrap();
        let dual = build_rep(&g, &"dual(standard)".parse().unwrap()).unwrap();
        assert_eq!(dual.action(0), &Matrix::identity(3));
        let s2 = build_rep(&g, &"sym2(standard)".parse().unwrap()).unwrap();
        assert_eq!(s2.dim(), 6);
        assert_eq!(s2.action(0), &Matrix::scalar(6, &int(-2)));
        let e2 = build_rep(&g, &"ext2(standard)".parse().unwrap()).unwrap();
        assert_eq!(e2.dim(), 3);
        let t = build_rep(&g, &"tensor(density(1/2,0),standard)".parse().unwrap()).unwrap();
        assert_eq!(t.action(0), &Matrix::scalar(3, &frac(-5, 2)));
        for r in [&dual, &s2, &e2, &t] {
            assert_eq!(r.check_homomorphism(&g), None);
        }
        assert!(build_rep(&g, &"ext4(standard)".parse().unwrap()).is_err());
    }

    #[test]
    fn words_roundtrip() {
        for i in 0..27 {
            assert_eq!(word_index(&word_of(i, 3, 3), 3), i);
        }
        assert_eq!(word_of(5, 3, 2), vec![1, 2]);
    }

    #[test]
    fn symbol_space_basics() {
        let g = build_conformal_algebra(1, 2).unwrap();
        let dens = density_rep(&g, &frac(1, 2), 0);
        let s0 = SymbolSpace::new(&g, &dens, &dens, 0).unwrap();
        assert!(s0.rho_star().iter().all(Matrix::is_zero));
        let std = standard_rep(&g);
        let s = SymbolSpace::new(&g, &std, &dens, 2).unwrap();
        assert_eq!(s.dim(), 27);
        assert_eq!(s.sym_dim(), 18);
        let pe = s.project_matrix().mul(&s.embed_matrix());
        assert_eq!(pe, Matrix::identity(18));
        let sy = s.symmetrizer();
        assert_eq!(sy.mul(&sy), sy);
        for m in s.rho_star() {
            assert_eq!(m.mul(&sy), sy.mul(m));
        }
    }

    #[test]
    fn mixed_algebra_rejected() {
        let g = build_conformal_algebra(1, 2).unwrap();
        let h = build_conformal_algebra(2, 1).unwrap();
        let a = standard_rep(&g);
        let b = standard_rep(&h);
        assert_eq!(
            SymbolSpace::new(&g, &a, &b, 1).unwrap_err(),
            Error::MixedAlgebra
        );
    }

    #[test]
    fn rho_prime() {
        let g = build_conformal_algebra(1, 2).unwrap();
        let dens = density_rep(&g, &frac(1, 2), 0);
        assert!(rho_prime_star(&g, &g.unit(g.eps(0)), &dens)
            .unwrap()
            .is_zero());
        assert_eq!(
            rho_prime_star(&g, &g.unit(g.euler()), &dens)
                .unwrap()
                .get(0, 0),
            frac(-3, 2)
        );
        assert!(rho_prime_star(&g, &g.unit(g.e(0)), &dens).is_err());
    }
}
