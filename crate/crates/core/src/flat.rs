//! The flat model on the big cell `g_{-1} ≅ R^d`, chart `x ↦ exp(x)·o`.
//!
//! For `h ∈ g` put `Y(x) = e^{-ad x} h = h - [x,h] + ½[x,[x,h]]`. The
//! fundamental field is `X_h = Y_{-1}(x)` and a section transforms by
//! `ℒ_h f = X_h·∇f - ρ(Y_0(x)) f`. With this convention
//! `ℒ_{[h,h']} = -[ℒ_h, ℒ_{h'}]`. Invariant differentiation along the chart
//! section is plain `∂_i`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::GradedAlgebra;
use crate::linalg::{inverse, EchelonBasis, Matrix};
use crate::mpoly::{monomial_key, parse_monomial_key, Monomial, Poly};
use crate::scalar::{self, Scalar};
use crate::symbol::{spectral_split, tree_subspaces, SpectralDecomposition, SymbolTower};

/// Polynomial map `R^d -> R^dim`, stored as monomial -> coordinate vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyTensorField {
    nvars: usize,
    dim: usize,
    terms: BTreeMap<Monomial, Vec<Scalar>>,
}

impl PolyTensorField {
    pub fn zero(nvars: usize, dim: usize) -> Self {
        PolyTensorField {
            nvars,
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, v: Vec<Scalar>) -> Self {
        Self::monomial(vec![0; nvars], v)
    }

    pub fn monomial(m: Monomial, v: Vec<Scalar>) -> Self {
        let mut f = Self::zero(m.len(), v.len());
        f.add_term(m, &v);
        f
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Vec<Scalar>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn add_term(&mut self, m: Monomial, v: &[Scalar]) {
        debug_assert_eq!(v.len(), self.dim);
        if v.iter().all(Zero::is_zero) {
            return;
        }
        let e = self
            .terms
            .entry(m.clone())
            .or_insert_with(|| vec![Scalar::zero(); v.len()]);
        for (a, b) in e.iter_mut().zip(v) {
            if !b.is_zero() {
                *a += b;
            }
        }
        if e.iter().all(Zero::is_zero) {
            self.terms.remove(&m);
        }
    }

    fn add_scaled_entry(&mut self, m: Monomial, idx: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let dim = self.dim;
        let e = self
            .terms
            .entry(m.clone())
            .or_insert_with(|| vec![Scalar::zero(); dim]);
        e[idx] += c;
        if e[idx].is_zero() && e.iter().all(Zero::is_zero) {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, v) in &o.terms {
            out.add_term(m.clone(), v);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.dim);
        }
        PolyTensorField {
            nvars: self.nvars,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.iter().map(|x| x * c).collect()))
                .collect(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        let mut out = Self::zero(self.nvars, self.dim);
        for (mp, c) in p.terms() {
            for (m, v) in &self.terms {
                let mm: Monomial = m.iter().zip(mp).map(|(a, b)| a + b).collect();
                let sv: Vec<Scalar> = v.iter().map(|x| x * c).collect();
                out.add_term(mm, &sv);
            }
        }
        out
    }

    /// Pointwise `M F(x)`.
    pub fn apply(&self, m: &Matrix) -> Self {
        let mut out = Self::zero(self.nvars, m.rows());
        for (mono, v) in &self.terms {
            out.add_term(mono.clone(), &m.mul_vec(v));
        }
        out
    }

    /// Formal partial derivative in `x^i` (0-based).
    pub fn partial_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.dim);
        for (m, v) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut e = m.clone();
            e[i] -= 1;
            let c = scalar::int(m[i] as i64);
            out.add_term(e, &v.iter().map(|x| x * &c).collect::<Vec<_>>());
        }
        out
    }

    /// Coordinate `idx` as a scalar polynomial.
    pub fn component(&self, idx: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (m, v) in &self.terms {
            p.add_term(m.clone(), v[idx].clone());
        }
        p
    }

    pub fn eval(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (m, v) in &self.terms {
            let w = Poly::monomial(m.clone(), scalar::one()).eval(x);
            for (o, c) in out.iter_mut().zip(v) {
                *o += &w * c;
            }
        }
        out
    }

    /// Applies a linear map to every coefficient vector, e.g. a coordinate change.
    pub fn map_coefficients(&self, dim: usize, f: impl Fn(&[Scalar]) -> Vec<Scalar>) -> Self {
        let mut out = Self::zero(self.nvars, dim);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), &f(v));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.document()).expect("field serializes")
    }

    fn document(&self) -> FieldDocument {
        FieldDocument {
            dim: self.dim,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (monomial_key(m), v.iter().map(scalar::format).collect()))
                .collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: FieldDocument = serde_json::from_str(s).map_err(json_err)?;
        Self::from_document(doc)
    }

    fn from_document(doc: FieldDocument) -> Result<Self> {
        let mut f = Self::zero(doc.nvars, doc.dim);
        for (k, v) in doc.terms {
            let m = parse_monomial_key(&k)
                .ok_or_else(|| Error::Invalid(format!("bad monomial key {k:?}")))?;
            if m.len() != doc.nvars || v.len() != doc.dim {
                return Err(Error::DimensionMismatch {
                    expected: doc.dim,
                    found: v.len(),
                });
            }
            let v = v
                .iter()
                .map(|s| scalar::parse(s))
                .collect::<Result<Vec<_>>>()?;
            f.add_term(m, &v);
        }
        Ok(f)
    }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse {
        message: e.to_string(),
        line: e.line(),
        column: e.column(),
    }
}

#[derive(Serialize, Deserialize)]
struct FieldDocument {
    dim: usize,
    nvars: usize,
    terms: BTreeMap<String, Vec<String>>,
}

/// `∇f` stacked as `out[i * dim + c] = ∂_i f_c`; iterate for higher orders.
pub fn invariant_derivative_flat(f: &PolyTensorField) -> PolyTensorField {
    let (d, n) = (f.nvars, f.dim);
    let mut out = PolyTensorField::zero(d, d * n);
    for i in 0..d {
        for (m, v) in f.partial_derivative(i).terms {
            let mut big = vec![Scalar::zero(); d * n];
            big[i * n..(i + 1) * n].clone_from_slice(&v);
            out.add_term(m, &big);
        }
    }
    out
}

/// `Σ_j ⟨T_j, ∂^j f⟩` for a chain indexed by degree. `n1`, `n2` are the
/// dimensions of the source and target modules.
pub fn q_omega(
    chain: &[PolyTensorField],
    f: &PolyTensorField,
    n1: usize,
    n2: usize,
) -> Result<PolyTensorField> {
    let d = f.nvars;
    if f.dim != n1 {
        return Err(Error::Mismatch(format!(
            "section has dimension {}, expected {n1}",
            f.dim
        )));
    }
    let mut out = PolyTensorField::zero(d, n2);
    let mut stack = f.clone();
    for (j, t) in chain.iter().enumerate() {
        if j > 0 {
            stack = invariant_derivative_flat(&stack);
        }
        if t.dim != d.pow(j as u32) * n1 * n2 {
            return Err(Error::Mismatch(format!(
                "chain element {j} has dimension {}",
                t.dim
            )));
        }
        let hom = n1 * n2;
        for (mt, vt) in &t.terms {
            for (ms, vs) in &stack.terms {
                let m: Monomial = mt.iter().zip(ms).map(|(a, b)| a + b).collect();
                for (idx, c) in vt.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let (w, h) = (idx / hom, idx % hom);
                    let (r, col) = (h / n1, h % n1);
                    let s = &vs[w * n1 + col];
                    if !s.is_zero() {
                        out.add_scaled_entry(m.clone(), r, c * s);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `N^ω T = -2 Σ_i γ(ε^i) ∂_i T` at degree `j ≥ 1`.
pub fn n_omega_apply(tower: &SymbolTower, j: usize, t: &PolyTensorField) -> PolyTensorField {
    let d = tower.algebra().d();
    if j == 0 {
        return PolyTensorField::zero(d, 0);
    }
    let mut out = PolyTensorField::zero(d, tower.space(j - 1).dim());
    for i in 0..d {
        out = out.add(&t.partial_derivative(i).apply(tower.gamma(j, i)));
    }
    out.scale(&scalar::int(-2))
}

/// Chain `T_k = T, T_{k-1}, ..., T_0`, indexed by degree, solving
/// `C♭ T̂ + N^ω T̂ = α T̂`.
#[derive(Clone, Debug)]
pub struct HatResult {
    pub alpha: Scalar,
    pub chain: Vec<PolyTensorField>,
}

impl HatResult {
    pub fn sum_into(&self, acc: &mut [PolyTensorField]) {
        for (a, t) in acc.iter_mut().zip(&self.chain) {
            *a = a.add(t);
        }
    }
}

/// Per-component data for the hat recursion at the top degree.
#[derive(Clone, Debug)]
struct ComponentSolver {
    alpha: Option<Scalar>,
    factor: String,
    /// `levels[l]` for `l ≥ 1`: tree basis and `(α - C♭|tree)^{-1}`, or the
    /// first singular level.
    levels: Vec<(EchelonBasis, Matrix)>,
    singular_at: Option<usize>,
}

/// Quantization data for a fixed pair and degree.
#[derive(Clone, Debug)]
pub struct Quantizer {
    tower: SymbolTower,
    split: SpectralDecomposition,
    cflat_sym: Matrix,
    solvers: Vec<ComponentSolver>,
}

impl Quantizer {
    pub fn new(tower: SymbolTower) -> Result<Self> {
        let k = tower.k();
        let cflat_sym = tower.cflat_sym(k);
        let split = spectral_split(&cflat_sym)?;
        let embed = tower.space(k).embed_matrix();
        let gammas: Vec<&[Matrix]> = (1..=k).rev().map(|l| tower.gammas(l)).collect();
        let mut solvers = Vec::new();
        for comp in &split.components {
            let top = EchelonBasis::span(
                embed.rows(),
                comp.basis
                    .vectors()
                    .iter()
                    .map(|v| embed.mul_vec(v))
                    .collect::<Vec<_>>(),
            );
            let trees = tree_subspaces(&gammas, &top);
            let mut levels = Vec::new();
            let mut singular_at = None;
            if let Some(alpha) = &comp.eigenvalue {
                for (l, basis) in trees.into_iter().enumerate().skip(1) {
                    let r = tower.cflat(k - l).restrict(&basis)?;
                    let m = Matrix::scalar(basis.len(), alpha).sub(&r);
                    match inverse(&m) {
                        Ok(inv) => levels.push((basis, inv)),
                        Err(_) => {
                            singular_at = Some(l);
                            break;
                        }
                    }
                }
            }
            solvers.push(ComponentSolver {
                alpha: comp.eigenvalue.clone(),
                factor: comp.factor.to_string(),
                levels,
                singular_at,
            });
        }
        Ok(Quantizer {
            tower,
            split,
            cflat_sym,
            solvers,
        })
    }

    pub fn tower(&self) -> &SymbolTower {
        &self.tower
    }

    pub fn k(&self) -> usize {
        self.tower.k()
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.split
    }

    /// Tree bases `tree^l` (`l ≥ 1`) of component `c`, as far as they were built.
    pub fn tree_levels(&self, c: usize) -> Vec<&EchelonBasis> {
        self.solvers[c].levels.iter().map(|(b, _)| b).collect()
    }

    /// Hat chain of a field valued pointwise in component `c` (full ⊗^k coordinates).
    pub fn hat(&self, c: usize, t: &PolyTensorField) -> Result<HatResult> {
        let k = self.k();
        let solver = &self.solvers[c];
        let alpha = solver.alpha.clone().ok_or_else(|| {
            Error::Invalid(format!(
                "component {} has no rational eigenvalue",
                solver.factor
            ))
        })?;
        let d = self.tower.algebra().d();
        let mut chain: Vec<PolyTensorField> = (0..=k)
            .map(|j| PolyTensorField::zero(d, self.tower.space(j).dim()))
            .collect();
        chain[k] = t.clone();
        for l in 1..=k {
            let j = k - l;
            let rhs = n_omega_apply(&self.tower, j + 1, &chain[j + 1]);
            if rhs.is_zero() {
                break;
            }
            let (basis, inv) = match solver.levels.get(l - 1) {
                Some(level) => level,
                None => {
                    return Err(Error::CriticalPair {
                        degree: k,
                        level: solver.singular_at.unwrap_or(l),
                        factor: solver.factor.clone(),
                    })
                }
            };
            let mut next = PolyTensorField::zero(d, self.tower.space(j).dim());
            for (m, v) in rhs.terms() {
                let coords = basis
                    .coordinates(v)
                    .ok_or_else(|| Error::Invalid(format!("correction left tree level {l}")))?;
                next.add_term(m.clone(), &basis.combine(&inv.mul_vec(&coords)));
            }
            chain[j] = next;
        }
        Ok(HatResult { alpha, chain })
    }

    /// `R(T)`: the summed hat chains of the spectral pieces of a symmetric symbol.
    pub fn lift(&self, t_sym: &PolyTensorField) -> Result<Vec<PolyTensorField>> {
        let k = self.k();
        let space = self.tower.space(k);
        if t_sym.dim() != space.sym_dim() {
            return Err(Error::Mismatch(format!(
                "symbol has dimension {}, expected {}",
                t_sym.dim(),
                space.sym_dim()
            )));
        }
        let d = self.tower.algebra().d();
        let embed = space.embed_matrix();
        let mut acc: Vec<PolyTensorField> = (0..=k)
            .map(|j| PolyTensorField::zero(d, self.tower.space(j).dim()))
            .collect();
        for (c, comp) in self.split.components.iter().enumerate() {
            let piece =
                t_sym.map_coefficients(space.sym_dim(), |v| comp.project(&self.cflat_sym, v));
            if piece.is_zero() {
                continue;
            }
            self.hat(c, &piece.apply(&embed))?.sum_into(&mut acc);
        }
        Ok(acc)
    }

    pub fn quantize(
        &self,
        t_sym: &PolyTensorField,
        f: &PolyTensorField,
    ) -> Result<PolyTensorField> {
        let s = self.tower.space(0);
        q_omega(&self.lift(t_sym)?, f, s.v1().dim(), s.v2().dim())
    }

    pub fn build_operator(&self, t_sym: &PolyTensorField) -> Result<PolyDiffOperator> {
        let chain = self.lift(t_sym)?;
        Ok(PolyDiffOperator::from_chain(&self.tower, &chain))
    }

    /// `C♭ T̂ + N^ω T̂ - α T̂`, degree by degree; all zero for a correct chain.
    pub fn eigen_residual(&self, hat: &HatResult) -> Vec<PolyTensorField> {
        let k = self.k();
        (0..=k)
            .map(|j| {
                let mut r = hat.chain[j]
                    .apply(self.tower.cflat(j))
                    .sub(&hat.chain[j].scale(&hat.alpha));
                if j < k {
                    r = r.add(&n_omega_apply(&self.tower, j + 1, &hat.chain[j + 1]));
                }
                r
            })
            .collect()
    }
}

/// `Σ_β a_β(x) ∂^β` with `a_β` valued in `gl(V1, V2)` (row-major `V2 × V1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyDiffOperator {
    nvars: usize,
    n1: usize,
    n2: usize,
    terms: BTreeMap<Monomial, PolyTensorField>,
}

impl PolyDiffOperator {
    pub fn zero(nvars: usize, n1: usize, n2: usize) -> Self {
        PolyDiffOperator {
            nvars,
            n1,
            n2,
            terms: BTreeMap::new(),
        }
    }

    fn from_chain(tower: &SymbolTower, chain: &[PolyTensorField]) -> Self {
        let s0 = tower.space(0);
        let (n1, n2) = (s0.v1().dim(), s0.v2().dim());
        let d = tower.algebra().d();
        let hom = n1 * n2;
        let mut op = Self::zero(d, n1, n2);
        for (j, t) in chain.iter().enumerate() {
            let space = tower.space(j);
            for (m, v) in t.terms() {
                for (idx, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let (w, r, col) = space.split_index(idx);
                    let mut beta = vec![0u32; d];
                    w.iter().for_each(|&l| beta[l] += 1);
                    let mut unit = vec![Scalar::zero(); hom];
                    unit[r * n1 + col] = c.clone();
                    op.add_term(beta, &PolyTensorField::monomial(m.clone(), unit));
                }
            }
        }
        op
    }

    pub fn add_term(&mut self, beta: Monomial, coeff: &PolyTensorField) {
        let e = self
            .terms
            .entry(beta.clone())
            .or_insert_with(|| PolyTensorField::zero(self.nvars, self.n1 * self.n2));
        *e = e.add(coeff);
        if e.is_zero() {
            self.terms.remove(&beta);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, PolyTensorField> {
        &self.terms
    }

    pub fn order(&self) -> usize {
        self.terms
            .keys()
            .map(|b| b.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &o.terms {
            out.add_term(b.clone(), &c.scale(&scalar::int(-1)));
        }
        out
    }

    pub fn apply(&self, f: &PolyTensorField) -> Result<PolyTensorField> {
        if f.dim() != self.n1 {
            return Err(Error::Mismatch(format!(
                "section has dimension {}, expected {}",
                f.dim(),
                self.n1
            )));
        }
        let mut out = PolyTensorField::zero(self.nvars, self.n2);
        for (beta, coeff) in &self.terms {
            let mut g = f.clone();
            for (i, &e) in beta.iter().enumerate() {
                for _ in 0..e {
                    g = g.partial_derivative(i);
                }
            }
            for (mc, vc) in coeff.terms() {
                for (mg, vg) in g.terms() {
                    let m: Monomial = mc.iter().zip(mg).map(|(a, b)| a + b).collect();
                    for r in 0..self.n2 {
                        let s: Scalar = (0..self.n1).map(|c| &vc[r * self.n1 + c] * &vg[c]).sum();
                        out.add_scaled_entry(m.clone(), r, s);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Top-order coefficients in symmetric coordinates: `a_β ∂^β ↦ a_β e_β`.
    pub fn principal_symbol(
        &self,
        tower_space: &crate::rep::SymbolSpace,
    ) -> Result<PolyTensorField> {
        let l = self.order();
        if tower_space.k() != l {
            return Err(Error::Mismatch(format!(
                "operator has order {l}, space has degree {}",
                tower_space.k()
            )));
        }
        let hom = self.n1 * self.n2;
        let mut out = PolyTensorField::zero(self.nvars, tower_space.sym_dim());
        for (beta, coeff) in &self.terms {
            if beta.iter().sum::<u32>() as usize != l {
                continue;
            }
            let multiset: Vec<usize> = beta
                .iter()
                .enumerate()
                .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                .collect();
            let base = tower_space.sym_index(&multiset, 0, 0);
            for (m, v) in coeff.terms() {
                let mut big = vec![Scalar::zero(); tower_space.sym_dim()];
                big[base..base + hom].clone_from_slice(v);
                out.add_term(m.clone(), &big);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let doc = OperatorDocument {
            order: self.order(),
            nvars: self.nvars,
            source_dim: self.n1,
            target_dim: self.n2,
            terms: self
                .terms
                .iter()
                .map(|(beta, c)| OperatorTerm {
                    beta: beta.clone(),
                    coeff_poly: c
                        .terms()
                        .iter()
                        .map(|(m, v)| {
                            let rows = v
                                .chunks(self.n1)
                                .map(|row| row.iter().map(scalar::format).collect())
                                .collect();
                            (monomial_key(m), rows)
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("operator serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: OperatorDocument = serde_json::from_str(s).map_err(json_err)?;
        let mut op = Self::zero(doc.nvars, doc.source_dim, doc.target_dim);
        for t in doc.terms {
            let mut field = PolyTensorField::zero(doc.nvars, doc.source_dim * doc.target_dim);
            for (k, rows) in t.coeff_poly {
                let m = parse_monomial_key(&k)
                    .ok_or_else(|| Error::Invalid(format!("bad monomial key {k:?}")))?;
                let flat: Vec<Scalar> = rows
                    .iter()
                    .flatten()
                    .map(|s| scalar::parse(s))
                    .collect::<Result<_>>()?;
                if flat.len() != doc.source_dim * doc.target_dim || m.len() != doc.nvars {
                    return Err(Error::DimensionMismatch {
                        expected: doc.source_dim * doc.target_dim,
                        found: flat.len(),
                    });
                }
                field.add_term(m, &flat);
            }
            op.add_term(t.beta, &field);
        }
        Ok(op)
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorTerm {
    beta: Vec<u32>,
    coeff_poly: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize)]
struct OperatorDocument {
    order: usize,
    nvars: usize,
    source_dim: usize,
    target_dim: usize,
    terms: Vec<OperatorTerm>,
}

/// Algebra element with polynomial coordinates.
pub type PolyElement = Vec<Poly>;

fn poly_bracket(alg: &GradedAlgebra, x: &[Poly], y: &[Poly]) -> PolyElement {
    let n = alg.dim();
    let nv = alg.d();
    let mut out = vec![Poly::zero(nv); n];
    for (a, xa) in x.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
        for (b, yb) in y.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
            let prod = xa.mul(yb);
            for (o, s) in out.iter_mut().zip(alg.bracket_basis(a, b)) {
                if !s.is_zero() {
                    *o = o.add(&prod.scale(s));
                }
            }
        }
    }
    out
}

/// `Y(x) = e^{-ad x} h`.
pub fn adjoint_along_chart(alg: &GradedAlgebra, h: &[Scalar]) -> PolyElement {
    let d = alg.d();
    let x: PolyElement = (0..alg.dim())
        .map(|i| {
            if i < d {
                Poly::var(d, i)
            } else {
                Poly::zero(d)
            }
        })
        .collect();
    let hp: PolyElement = h.iter().map(|c| Poly::constant(d, c.clone())).collect();
    let b1 = poly_bracket(alg, &x, &hp);
    let b2 = poly_bracket(alg, &x, &b1);
    hp.iter()
        .zip(&b1)
        .zip(&b2)
        .map(|((a, b), c)| a.sub(b).add(&c.scale(&scalar::frac(1, 2))))
        .collect()
}

/// `X_h = Y_{-1}(x)` as `d` polynomial components.
pub fn fundamental_vector_field(alg: &GradedAlgebra, h: &[Scalar]) -> Vec<Poly> {
    adjoint_along_chart(alg, h)
        .into_iter()
        .take(alg.d())
        .collect()
}

/// `A_h(x) = -Y_0(x)` in `g_0` coordinates (`E` first).
pub fn isotropy_part(alg: &GradedAlgebra, h: &[Scalar]) -> Vec<Poly> {
    let y = adjoint_along_chart(alg, h);
    alg.g0_indices()
        .map(|i| y[i].scale(&scalar::int(-1)))
        .collect()
}

/// `ℒ_h F = X_h·∇F + Σ_p A_h(x)_p M_p F`, with `M_p` the `g_0` action on the fibre.
pub fn lie_action_on_sections(
    alg: &GradedAlgebra,
    h: &[Scalar],
    actions: &[Matrix],
    f: &PolyTensorField,
) -> PolyTensorField {
    let x = fundamental_vector_field(alg, h);
    let a = isotropy_part(alg, h);
    lie_action_with(&x, &a, actions, f)
}

fn lie_action_with(
    x: &[Poly],
    a: &[Poly],
    actions: &[Matrix],
    f: &PolyTensorField,
) -> PolyTensorField {
    let mut out = PolyTensorField::zero(f.nvars(), f.dim());
    for (i, xi) in x.iter().enumerate() {
        if !xi.is_zero() {
            out = out.add(&f.partial_derivative(i).mul_poly(xi));
        }
    }
    for (p, ap) in a.iter().enumerate() {
        if !ap.is_zero() {
            out = out.add(&f.apply(&actions[p]).mul_poly(ap));
        }
    }
    out
}

/// The infinitesimal actions needed for equivariance checks of one quantizer.
#[derive(Clone, Debug)]
pub struct EquivarianceContext {
    quantizer: Quantizer,
    rho_sym: Vec<Matrix>,
}

impl EquivarianceContext {
    pub fn new(quantizer: Quantizer) -> Self {
        let k = quantizer.k();
        let rho_sym = quantizer.tower().space(k).rho_sym();
        EquivarianceContext { quantizer, rho_sym }
    }

    pub fn quantizer(&self) -> &Quantizer {
        &self.quantizer
    }

    /// `ℒ_h` on symmetric symbols.
    pub fn act_on_symbol(&self, h: &[Scalar], t_sym: &PolyTensorField) -> PolyTensorField {
        lie_action_on_sections(self.quantizer.tower().algebra(), h, &self.rho_sym, t_sym)
    }

    /// `ℒ_h(Q(T)f) - Q(ℒ_h T)f - Q(T)(ℒ_h f)`.
    pub fn residual(
        &self,
        h: &[Scalar],
        t_sym: &PolyTensorField,
        f: &PolyTensorField,
    ) -> Result<PolyTensorField> {
        let op = self.quantizer.build_operator(t_sym)?;
        let op_l = self
            .quantizer
            .build_operator(&self.act_on_symbol(h, t_sym))?;
        self.residual_with(h, &op, &op_l, f)
    }

    /// Residual from prebuilt operators `Q(T)` and `Q(ℒ_h T)`.
    pub fn residual_with(
        &self,
        h: &[Scalar],
        op: &PolyDiffOperator,
        op_lie: &PolyDiffOperator,
        f: &PolyTensorField,
    ) -> Result<PolyTensorField> {
        let alg = self.quantizer.tower().algebra();
        let s = self.quantizer.tower().space(0);
        let x = fundamental_vector_field(alg, h);
        let a = isotropy_part(alg, h);
        let lhs = lie_action_with(&x, &a, s.v2().actions(), &op.apply(f)?);
        let lf = lie_action_with(&x, &a, s.v1().actions(), f);
        Ok(lhs.sub(&op_lie.apply(f)?).sub(&op.apply(&lf)?))
    }
}

pub fn check_equivariance(
    quantizer: &Quantizer,
    t_sym: &PolyTensorField,
    f: &PolyTensorField,
    h: &[Scalar],
) -> Result<PolyTensorField> {
    EquivarianceContext::new(quantizer.clone()).residual(h, t_sym, f)
}

/// Basis symbols `x^α s_b` with `|α| ≤ max_deg` in symmetric coordinates.
pub fn basis_symbols(space: &crate::rep::SymbolSpace, max_deg: u32) -> Vec<PolyTensorField> {
    let d = space.d();
    let mut out = Vec::new();
    for m in crate::mpoly::monomials_up_to(d, max_deg) {
        for b in 0..space.sym_dim() {
            out.push(PolyTensorField::monomial(
                m.clone(),
                crate::linalg::unit_vector(space.sym_dim(), b),
            ));
        }
    }
    out
}
