//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use iffquant::flat::{lie_action_on_sections, PolyTensorField, Quantizer};
use iffquant::lie::{AlgebraKind, GradedAlgebra};
use iffquant::linalg::{sparse_rref, Matrix};
use iffquant::mpoly::{monomials_of_degree, monomials_up_to, Monomial};
use iffquant::rep::{density_rep, SymbolSpace};
use iffquant::scalar::{frac, int, Scalar};
use iffquant::symbol::SymbolTower;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_scalar(r: &mut ChaCha8Rng) -> Scalar {
    frac(r.gen_range(-6..=6), r.gen_range(1..=4))
}

pub fn random_vector(r: &mut ChaCha8Rng, n: usize, density: f64) -> Vec<Scalar> {
    (0..n)
        .map(|_| {
            if r.gen_bool(density) {
                random_scalar(r)
            } else {
                Scalar::zero()
            }
        })
        .collect()
}

pub fn density_tower(alg: &GradedAlgebra, lambda: Scalar, delta: Scalar, k: usize) -> SymbolTower {
    let v1 = density_rep(alg, &lambda, 0);
    let v2 = density_rep(alg, &(&lambda + &delta), 0);
    SymbolTower::new(alg, &v1, &v2, k).unwrap()
}

fn nilpotent_exp(x: &Matrix) -> Matrix {
    let n = x.rows();
    let mut out = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for j in 1..=n {
        term = term.mul(x).scale(&frac(1, j as i64));
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
    }
    out
}

fn chart_matrix(alg: &GradedAlgebra, x: &[Scalar]) -> Matrix {
    let mut coords = alg.zero_element();
    coords[..alg.d()].clone_from_slice(x);
    alg.model_matrix(&coords).unwrap()
}

/// Fundamental vector field of `h` at a rational point, from the matrix model
/// acting on the projectivized orbit of the base point.
pub fn oracle_vector_field(alg: &GradedAlgebra, h: &[Scalar], x: &[Scalar]) -> Vec<Scalar> {
    let d = alg.d();
    let n = alg.model().unwrap()[0].rows();
    let (base, norm) = match alg.kind() {
        AlgebraKind::Conformal { .. } => (n - 1, n - 1),
        AlgebraKind::Projective { .. } => (0, 0),
    };
    let point = nilpotent_exp(&chart_matrix(alg, x)).column(base);
    assert_eq!(point[norm], int(1));
    for i in 0..d {
        assert_eq!(point[1 + i], x[i]);
    }
    let hn = alg.model_matrix(h).unwrap().mul_vec(&point);
    (0..d).map(|i| &hn[1 + i] - &x[i] * &hn[norm]).collect()
}

/// `-Y_0(x)` with `Y = exp(-x) H exp(x)` computed by matrix conjugation.
pub fn oracle_isotropy(alg: &GradedAlgebra, h: &[Scalar], x: &[Scalar]) -> Vec<Scalar> {
    let g = chart_matrix(alg, x);
    let minus: Vec<Scalar> = x.iter().map(|c| -c).collect();
    let ginv = chart_matrix(alg, &minus);
    let y = nilpotent_exp(&ginv)
        .mul(&alg.model_matrix(h).unwrap())
        .mul(&nilpotent_exp(&g));
    let coords = alg.model_coords(&y).unwrap();
    alg.g0_indices().map(|i| -coords[i].clone()).collect()
}

/// Field whose coefficients are affine in a list of unknowns: part 0 is the
/// constant term, part `i + 1` multiplies unknown `i`.
#[derive(Clone, Debug)]
pub struct LinField {
    pub parts: BTreeMap<usize, PolyTensorField>,
}

impl LinField {
    fn new() -> Self {
        LinField {
            parts: BTreeMap::new(),
        }
    }

    fn add_part(&mut self, p: usize, f: PolyTensorField) {
        if f.is_zero() {
            return;
        }
        let e = self
            .parts
            .entry(p)
            .or_insert_with(|| PolyTensorField::zero(f.nvars(), f.dim()));
        *e = e.add(&f);
        if e.is_zero() {
            self.parts.remove(&p);
        }
    }

    fn sub(&self, o: &LinField) -> LinField {
        let mut out = self.clone();
        for (p, f) in &o.parts {
            out.add_part(*p, f.scale(&int(-1)));
        }
        out
    }

    fn map(&self, f: impl Fn(&PolyTensorField) -> PolyTensorField) -> LinField {
        let mut out = LinField::new();
        for (p, g) in &self.parts {
            out.add_part(*p, f(g));
        }
        out
    }

    pub fn evaluate(&self, u: &[Scalar], nvars: usize, dim: usize) -> PolyTensorField {
        let mut acc = PolyTensorField::zero(nvars, dim);
        for (p, f) in &self.parts {
            acc = acc.add(&if *p == 0 {
                f.clone()
            } else {
                f.scale(&u[p - 1])
            });
        }
        acc
    }
}

#[derive(Clone, Debug)]
struct Unknown {
    beta: Monomial,
    fderiv: Monomial,
    r_out: usize,
    c_in: usize,
    sym: usize,
}

/// Brute-force equivariant quantization: every correction term is
/// `u · ∂^β T_s · ∂^{m'} f_{c'} e_{r'}` with `|β| + |m'| = k`, `|β| ≥ 1`,
/// and the unknown constants are fixed by imposing equivariance.
pub struct AnsatzSolver<'a> {
    alg: &'a GradedAlgebra,
    space: &'a SymbolSpace,
    unknowns: Vec<Unknown>,
    multisets: Vec<Monomial>,
}

#[derive(Debug)]
pub enum AnsatzOutcome {
    Unique(Vec<Scalar>),
    Underdetermined { rank: usize, unknowns: usize },
    Inconsistent,
}

fn deriv(
    f: &PolyTensorField,
    m: &[u32],
    cache: &mut HashMap<Monomial, PolyTensorField>,
) -> PolyTensorField {
    if let Some(v) = cache.get(m) {
        return v.clone();
    }
    let mut g = f.clone();
    for (i, &e) in m.iter().enumerate() {
        for _ in 0..e {
            g = g.partial_derivative(i);
        }
    }
    cache.insert(m.to_vec(), g.clone());
    g
}

impl<'a> AnsatzSolver<'a> {
    pub fn new(alg: &'a GradedAlgebra, space: &'a SymbolSpace) -> Self {
        let d = alg.d();
        let k = space.k();
        let (n1, n2) = (space.v1().dim(), space.v2().dim());
        let mut unknowns = Vec::new();
        for j in 0..k {
            for beta in monomials_of_degree(d, (k - j) as u32) {
                for fderiv in monomials_of_degree(d, j as u32) {
                    for r_out in 0..n2 {
                        for c_in in 0..n1 {
                            for sym in 0..space.sym_dim() {
                                unknowns.push(Unknown {
                                    beta: beta.clone(),
                                    fderiv: fderiv.clone(),
                                    r_out,
                                    c_in,
                                    sym,
                                });
                            }
                        }
                    }
                }
            }
        }
        let multisets = space
            .sym_words()
            .iter()
            .map(|w| {
                let mut m = vec![0u32; d];
                w.iter().for_each(|&l| m[l] += 1);
                m
            })
            .collect();
        AnsatzSolver {
            alg,
            space,
            unknowns,
            multisets,
        }
    }

    pub fn num_unknowns(&self) -> usize {
        self.unknowns.len()
    }

    /// `Q_u(T) f` as a field affine in the unknowns.
    pub fn apply(&self, t: &PolyTensorField, f: &PolyTensorField) -> LinField {
        let d = self.alg.d();
        let (n1, n2) = (self.space.v1().dim(), self.space.v2().dim());
        let hom = n1 * n2;
        let mut fcache = HashMap::new();
        let comps: Vec<PolyTensorField> = (0..self.space.sym_dim())
            .map(|s| {
                let mut out = PolyTensorField::zero(d, 1);
                for (m, c) in t.component(s).terms() {
                    out.add_term(m.clone(), std::slice::from_ref(c));
                }
                out
            })
            .collect();
        let mut out = LinField::new();
        let place = |field: &PolyTensorField,
                     coeff: &PolyTensorField,
                     c: usize,
                     r: usize|
         -> PolyTensorField {
            // coeff is scalar-valued, field is V1-valued; result lands in slot r of V2
            let mut res = PolyTensorField::zero(d, n2);
            for (mf, vf) in field.terms() {
                if vf[c].is_zero() {
                    continue;
                }
                for (mc, vc) in coeff.terms() {
                    let m: Monomial = mf.iter().zip(mc).map(|(a, b)| a + b).collect();
                    let mut v = vec![Scalar::zero(); n2];
                    v[r] = &vf[c] * &vc[0];
                    res.add_term(m, &v);
                }
            }
            res
        };
        for (s, comp) in comps.iter().enumerate() {
            if comp.is_zero() {
                continue;
            }
            let (mi, h) = (s / hom, s % hom);
            let (r, c) = (h / n1, h % n1);
            let df = deriv(f, &self.multisets[mi], &mut fcache);
            out.add_part(0, place(&df, comp, c, r));
        }
        let mut tcache: HashMap<(usize, Monomial), PolyTensorField> = HashMap::new();
        for (u, unk) in self.unknowns.iter().enumerate() {
            if comps[unk.sym].is_zero() {
                continue;
            }
            let dt = tcache
                .entry((unk.sym, unk.beta.clone()))
                .or_insert_with(|| {
                    let mut g = comps[unk.sym].clone();
                    for (i, &e) in unk.beta.iter().enumerate() {
                        for _ in 0..e {
                            g = g.partial_derivative(i);
                        }
                    }
                    g
                })
                .clone();
            if dt.is_zero() {
                continue;
            }
            let df = deriv(f, &unk.fderiv, &mut fcache);
            out.add_part(u + 1, place(&df, &dt, unk.c_in, unk.r_out));
        }
        out
    }

    /// Imposes `ℒ_h(Q_u(T)f) = Q_u(ℒ_h T)f + Q_u(T)(ℒ_h f)` for every basis
    /// `h`, basis symbol `x^α s_b` with `|α| ≤ k`, and monomial `f` of degree
    /// at most `f_deg`.
    pub fn solve(&self, f_deg: u32) -> AnsatzOutcome {
        let d = self.alg.d();
        let k = self.space.k() as u32;
        let n1 = self.space.v1().dim();
        let rho_sym = self.space.rho_sym();
        let nu = self.unknowns.len();
        let symbols: Vec<PolyTensorField> = monomials_up_to(d, k)
            .into_iter()
            .flat_map(|m| {
                (0..self.space.sym_dim()).map(move |b| {
                    PolyTensorField::monomial(
                        m.clone(),
                        iffquant::linalg::unit_vector(self.space.sym_dim(), b),
                    )
                })
            })
            .collect();
        let sections: Vec<PolyTensorField> = monomials_up_to(d, f_deg)
            .into_iter()
            .flat_map(|m| {
                (0..n1).map(move |c| {
                    PolyTensorField::monomial(m.clone(), iffquant::linalg::unit_vector(n1, c))
                })
            })
            .collect();
        let mut rows = Vec::new();
        for h in 0..self.alg.dim() {
            let hv = self.alg.unit(h);
            for t in &symbols {
                let lt = lie_action_on_sections(self.alg, &hv, &rho_sym, t);
                for f in &sections {
                    let lf = lie_action_on_sections(self.alg, &hv, self.space.v1().actions(), f);
                    let lhs = self.apply(t, f).map(|g| {
                        lie_action_on_sections(self.alg, &hv, self.space.v2().actions(), g)
                    });
                    let res = lhs.sub(&self.apply(&lt, f)).sub(&self.apply(t, &lf));
                    let mut eqs: BTreeMap<(Monomial, usize), Vec<(usize, Scalar)>> =
                        BTreeMap::new();
                    for (p, field) in &res.parts {
                        let col = if *p == 0 { nu } else { p - 1 };
                        for (m, v) in field.terms() {
                            for (i, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                                eqs.entry((m.clone(), i))
                                    .or_default()
                                    .push((col, c.clone()));
                            }
                        }
                    }
                    for (_, mut row) in eqs {
                        row.sort_by_key(|(c, _)| *c);
                        rows.push(row);
                    }
                }
            }
        }
        let (reduced, pivots) = sparse_rref(rows);
        if pivots.last() == Some(&nu) {
            return AnsatzOutcome::Inconsistent;
        }
        if pivots.len() < nu {
            return AnsatzOutcome::Underdetermined {
                rank: pivots.len(),
                unknowns: nu,
            };
        }
        let u = reduced
            .iter()
            .map(|row| {
                row.iter()
                    .find(|(c, _)| *c == nu)
                    .map_or_else(Scalar::zero, |(_, v)| -v.clone())
            })
            .collect();
        AnsatzOutcome::Unique(u)
    }

    /// Checks `Q_u(T)f == quantize(T, f)` over basis symbols and monomial sections.
    pub fn agrees_with(&self, u: &[Scalar], q: &Quantizer, f_deg: u32) -> bool {
        let d = self.alg.d();
        let k = self.space.k() as u32;
        let n1 = self.space.v1().dim();
        for m in monomials_up_to(d, k) {
            for b in 0..self.space.sym_dim() {
                let t = PolyTensorField::monomial(
                    m.clone(),
                    iffquant::linalg::unit_vector(self.space.sym_dim(), b),
                );
                for fm in monomials_up_to(d, f_deg) {
                    for c in 0..n1 {
                        let f = PolyTensorField::monomial(
                            fm.clone(),
                            iffquant::linalg::unit_vector(n1, c),
                        );
                        if self.apply(&t, &f).evaluate(u, d, self.space.v2().dim())
                            != q.quantize(&t, &f).unwrap()
                        {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// For every spectral piece of `t_sym`: each hat correction sits pointwise in
/// the matching tree level, and the chain solves the eigen-equation exactly.
pub fn hat_chain_checks(q: &Quantizer, t_sym: &PolyTensorField) -> Result<(), String> {
    let k = q.k();
    let space = q.tower().space(k);
    let embed = space.embed_matrix();
    let cflat = q.tower().cflat_sym(k);
    for (c, comp) in q.decomposition().components.iter().enumerate() {
        let piece = t_sym.map_coefficients(space.sym_dim(), |v| comp.project(&cflat, v));
        if piece.is_zero() {
            continue;
        }
        let hat = q.hat(c, &piece.apply(&embed)).map_err(|e| e.to_string())?;
        let levels = q.tree_levels(c);
        for l in 1..=k {
            let t = &hat.chain[k - l];
            for v in t.terms().values() {
                match levels.get(l - 1) {
                    Some(b) if b.contains(v) => {}
                    _ => {
                        return Err(format!(
                            "component {} level {l}: correction outside tree",
                            comp.factor
                        ))
                    }
                }
            }
        }
        if let Some(j) = q.eigen_residual(&hat).iter().position(|r| !r.is_zero()) {
            return Err(format!(
                "component {}: eigen residual nonzero at degree {j}",
                comp.factor
            ));
        }
    }
    Ok(())
}

pub fn is_critical_at_top(alg: &GradedAlgebra, lambda: Scalar, delta: Scalar, k: usize) -> bool {
    density_tower(alg, lambda, delta, k)
        .degree_criticality(k)
        .unwrap()
        .iter()
        .any(|c| c.critical)
}
