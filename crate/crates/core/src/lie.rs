//! |1|-graded simple Lie algebras with exact structure constants.
//!
//! Both families are realized from a matrix model and then converted to the
//! basis `(e_1..e_d | E | A_1..A_n | eps^1..eps^d)` of `g_{-1} ⊕ g_0 ⊕ g_1`,
//! where `E` is the grading element and the `A_j` span the semisimple part
//! `h_0` of `g_0`. The `g_1` basis is rescaled so that the Killing-dual basis
//! is `(eps^i, E/(2d), A_j^*, e_i)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inverse, rref, Matrix};
use crate::scalar::{self, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    /// `so(p+1, q+1)` with `d = p + q`.
    Conformal { p: usize, q: usize },
    /// `sl(m+1)` with `d = m`.
    Projective { m: usize },
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::Conformal { p, q } => write!(f, "conformal({p},{q})"),
            AlgebraKind::Projective { m } => write!(f, "projective({m})"),
        }
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |msg: &str| Error::Parse {
            message: format!("{msg} in algebra spec {s:?}"),
            line: 1,
            column: 1,
        };
        let (name, rest) = t.split_once('(').ok_or_else(|| err("expected '('"))?;
        let args = rest.strip_suffix(')').ok_or_else(|| err("expected ')'"))?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|a| a.parse().map_err(|_| err("expected a nonnegative integer")))
            .collect::<Result<_>>()?;
        match (name, nums.as_slice()) {
            ("conformal", [p, q]) => Ok(AlgebraKind::Conformal { p: *p, q: *q }),
            ("projective", [m]) => Ok(AlgebraKind::Projective { m: *m }),
            _ => Err(err("unknown algebra")),
        }
    }
}

impl AlgebraKind {
    pub fn build(&self) -> Result<GradedAlgebra> {
        match *self {
            AlgebraKind::Conformal { p, q } => build_conformal_algebra(p, q),
            AlgebraKind::Projective { m } => build_projective_algebra(m),
        }
    }
}

/// A |1|-graded algebra given by structure constants in the distinguished basis.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    kind: AlgebraKind,
    d: usize,
    labels: Vec<String>,
    grades: Vec<i8>,
    /// `structure[a][b]` are the coordinates of `[b_a, b_b]`.
    structure: Vec<Vec<Vec<Scalar>>>,
    ad: Vec<Matrix>,
    killing: Matrix,
    dual: Vec<Vec<Scalar>>,
    model: Option<Vec<Matrix>>,
}

impl PartialEq for GradedAlgebra {
    fn eq(&self, o: &Self) -> bool {
        self.kind == o.kind
            && self.d == o.d
            && self.labels == o.labels
            && self.grades == o.grades
            && self.structure == o.structure
    }
}

/// Options for assembling the distinguished basis.
#[derive(Clone, Debug, Default)]
pub struct BuildOptions {
    /// Reorders the `h_0` basis: position `j` receives generator `h0_order[j]`.
    pub h0_order: Option<Vec<usize>>,
}

pub fn build_conformal_algebra(p: usize, q: usize) -> Result<GradedAlgebra> {
    build_conformal_algebra_with(p, q, &BuildOptions::default())
}

pub fn build_conformal_algebra_with(
    p: usize,
    q: usize,
    opts: &BuildOptions,
) -> Result<GradedAlgebra> {
    let m = p + q;
    if m < 3 {
        return Err(Error::DegenerateDimension(format!(
            "conformal({p},{q}) needs p+q >= 3, got {m}"
        )));
    }
    let n = m + 2;
    let j: Vec<Scalar> = (0..m)
        .map(|i| {
            if i < p {
                scalar::int(1)
            } else {
                scalar::int(-1)
            }
        })
        .collect();
    let unit =
        |entries: &[(usize, usize, Scalar)]| Matrix::from_triplets(n, n, entries.iter().cloned());

    // g_{-1}: v = unit_i, placed as v^♯ in the first row and v in the last column.
    let e: Vec<Matrix> = (0..m)
        .map(|i| unit(&[(0, 1 + i, j[i].clone()), (1 + i, n - 1, scalar::one())]))
        .collect();
    let euler = unit(&[(0, 0, scalar::int(-1)), (n - 1, n - 1, scalar::one())]);
    let mut h0 = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            h0.push(unit(&[
                (1 + a, 1 + b, j[b].clone()),
                (1 + b, 1 + a, -j[a].clone()),
            ]));
        }
    }
    let h0_labels: Vec<String> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| format!("A{}{}", a + 1, b + 1)))
        .collect();
    // g_1: ξ = unit_i in the last row, ξ^♭ in the first column.
    let xi: Vec<Matrix> = (0..m)
        .map(|i| unit(&[(n - 1, 1 + i, scalar::one()), (1 + i, 0, j[i].clone())]))
        .collect();
    assemble(
        AlgebraKind::Conformal { p, q },
        e,
        euler,
        h0,
        h0_labels,
        xi,
        opts,
    )
}

pub fn build_projective_algebra(m: usize) -> Result<GradedAlgebra> {
    build_projective_algebra_with(m, &BuildOptions::default())
}

pub fn build_projective_algebra_with(m: usize, opts: &BuildOptions) -> Result<GradedAlgebra> {
    if m < 2 {
        return Err(Error::DegenerateDimension(format!(
            "projective({m}) needs m >= 2"
        )));
    }
    let n = m + 1;
    let unit =
        |entries: &[(usize, usize, Scalar)]| Matrix::from_triplets(n, n, entries.iter().cloned());
    let e: Vec<Matrix> = (0..m).map(|i| unit(&[(1 + i, 0, scalar::one())])).collect();
    let mm = m as i64;
    let mut diag = vec![(0, 0, scalar::frac(mm, mm + 1))];
    diag.extend((0..m).map(|i| (1 + i, 1 + i, scalar::frac(-1, mm + 1))));
    let euler = unit(&diag);
    let mut h0 = Vec::new();
    let mut h0_labels = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if a != b {
                h0.push(unit(&[(1 + a, 1 + b, scalar::one())]));
                h0_labels.push(format!("E{}{}", a + 1, b + 1));
            } else if a + 1 < m {
                h0.push(unit(&[
                    (1 + a, 1 + a, scalar::one()),
                    (2 + a, 2 + a, scalar::int(-1)),
                ]));
                h0_labels.push(format!("H{}", a + 1));
            }
        }
    }
    let xi: Vec<Matrix> = (0..m).map(|i| unit(&[(0, 1 + i, scalar::one())])).collect();
    assemble(
        AlgebraKind::Projective { m },
        e,
        euler,
        h0,
        h0_labels,
        xi,
        opts,
    )
}

fn assemble(
    kind: AlgebraKind,
    e: Vec<Matrix>,
    euler: Matrix,
    mut h0: Vec<Matrix>,
    mut h0_labels: Vec<String>,
    xi: Vec<Matrix>,
    opts: &BuildOptions,
) -> Result<GradedAlgebra> {
    if let Some(order) = &opts.h0_order {
        let mut seen = vec![false; h0.len()];
        if order.len() != h0.len()
            || order
                .iter()
                .any(|&i| i >= h0.len() || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::Invalid(
                "h0_order is not a permutation of the h0 basis".into(),
            ));
        }
        h0 = order.iter().map(|&i| h0[i].clone()).collect();
        h0_labels = order.iter().map(|&i| h0_labels[i].clone()).collect();
    }
    let d = e.len();
    let mut labels: Vec<String> = (1..=d).map(|i| format!("e{i}")).collect();
    labels.push("E".into());
    labels.extend(h0_labels);
    labels.extend((1..=d).map(|i| format!("eps{i}")));
    let mut grades = vec![-1i8; d];
    grades.push(0);
    grades.extend(std::iter::repeat_n(0, h0.len()));
    grades.extend(std::iter::repeat_n(1, d));

    let mut basis: Vec<Matrix> = e.clone();
    basis.push(euler.clone());
    basis.extend(h0.iter().cloned());
    basis.extend(xi.iter().cloned());
    let raw = GradedAlgebra::from_model(kind, d, labels.clone(), grades.clone(), basis)?;

    // Rescale g_1 so that K(e_a, eps^b) = δ_ab: eps = N ξ with N = K_{e,ξ}^{-T}.
    let eps_start = raw.eps(0);
    let k_e_xi = Matrix::from_dense(
        &(0..d)
            .map(|a| (0..d).map(|b| raw.killing.get(a, eps_start + b)).collect())
            .collect::<Vec<_>>(),
    );
    let nmat = inverse(&k_e_xi.transpose()).map_err(|_| Error::DegenerateKilling)?;
    let eps: Vec<Matrix> = (0..d)
        .map(|i| {
            (0..d).fold(Matrix::zeros(xi[0].rows(), xi[0].cols()), |acc, jx| {
                acc.add_scaled(&xi[jx], &nmat.get(i, jx))
            })
        })
        .collect();
    let mut basis: Vec<Matrix> = e;
    basis.push(euler);
    basis.extend(h0);
    basis.extend(eps);
    let alg = GradedAlgebra::from_model(kind, d, labels, grades, basis)?;
    alg.check_dual_pattern()?;
    Ok(alg)
}

/// Expresses matrices of the model in the chosen basis.
struct Coordinator {
    pivots: Vec<(usize, usize)>,
    inv: Matrix,
    basis: Vec<Matrix>,
}

impl Coordinator {
    fn new(basis: &[Matrix]) -> Result<Self> {
        let n = basis[0].rows();
        let flat: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|b| (0..n * n).map(|t| b.get(t / n, t % n)).collect())
            .collect();
        let mut rows = flat.clone();
        let piv = rref(&mut rows);
        if piv.len() < basis.len() {
            return Err(Error::Invalid(
                "model basis matrices are linearly dependent".into(),
            ));
        }
        let square = Matrix::from_dense(
            &piv.iter()
                .map(|&t| flat.iter().map(|f| f[t].clone()).collect())
                .collect::<Vec<_>>(),
        );
        Ok(Coordinator {
            pivots: piv.iter().map(|&t| (t / n, t % n)).collect(),
            inv: inverse(&square)?,
            basis: basis.to_vec(),
        })
    }

    fn coords(&self, x: &Matrix) -> Result<Vec<Scalar>> {
        let rhs: Vec<Scalar> = self.pivots.iter().map(|&(r, c)| x.get(r, c)).collect();
        let coords = self.inv.mul_vec(&rhs);
        let recon = coords
            .iter()
            .zip(&self.basis)
            .fold(Matrix::zeros(x.rows(), x.cols()), |acc, (c, b)| {
                acc.add_scaled(b, c)
            });
        if &recon != x {
            return Err(Error::NotInSubspace("the span of the model basis"));
        }
        Ok(coords)
    }
}

impl GradedAlgebra {
    fn from_model(
        kind: AlgebraKind,
        d: usize,
        labels: Vec<String>,
        grades: Vec<i8>,
        basis: Vec<Matrix>,
    ) -> Result<Self> {
        let coord = Coordinator::new(&basis)?;
        let n = basis.len();
        let mut structure = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                structure[a][b] = coord.coords(&basis[a].commutator(&basis[b]))?;
            }
        }
        let mut alg = Self::from_structure(kind, d, labels, grades, structure)?;
        alg.model = Some(basis);
        Ok(alg)
    }

    fn from_structure(
        kind: AlgebraKind,
        d: usize,
        labels: Vec<String>,
        grades: Vec<i8>,
        structure: Vec<Vec<Vec<Scalar>>>,
    ) -> Result<Self> {
        let n = labels.len();
        if grades.len() != n || structure.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: structure.len(),
            });
        }
        let ad: Vec<Matrix> = (0..n)
            .map(|a| {
                let cols: Vec<Vec<Scalar>> = (0..n).map(|b| structure[a][b].clone()).collect();
                Matrix::from_columns(n, &cols)
            })
            .collect();
        let mut kd = vec![vec![Scalar::zero(); n]; n];
        for a in 0..n {
            for b in a..n {
                let v = ad[a].mul(&ad[b]).trace();
                kd[a][b] = v.clone();
                kd[b][a] = v;
            }
        }
        let killing = Matrix::from_dense(&kd);
        let kinv = inverse(&killing).map_err(|_| Error::DegenerateKilling)?;
        let dual = (0..n).map(|a| kinv.column(a)).collect();
        Ok(GradedAlgebra {
            kind,
            d,
            labels,
            grades,
            structure,
            ad,
            killing,
            dual,
            model: None,
        })
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    /// Dimension of `g_{-1}`.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn h0_dim(&self) -> usize {
        self.dim() - 2 * self.d - 1
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn grade(&self, idx: usize) -> i8 {
        self.grades[idx]
    }

    pub fn grades(&self) -> &[i8] {
        &self.grades
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn e(&self, i: usize) -> usize {
        i
    }

    pub fn euler(&self) -> usize {
        self.d
    }

    pub fn a(&self, j: usize) -> usize {
        self.d + 1 + j
    }

    pub fn eps(&self, i: usize) -> usize {
        self.d + 1 + self.h0_dim() + i
    }

    /// Indices of the `g_0` basis: `E` followed by `A_1..A_n`.
    pub fn g0_indices(&self) -> std::ops::Range<usize> {
        self.d..self.d + 1 + self.h0_dim()
    }

    pub fn g0_dim(&self) -> usize {
        1 + self.h0_dim()
    }

    pub fn unit(&self, idx: usize) -> Vec<Scalar> {
        crate::linalg::unit_vector(self.dim(), idx)
    }

    pub fn zero_element(&self) -> Vec<Scalar> {
        vec![Scalar::zero(); self.dim()]
    }

    /// Coordinates of the part of `x` lying in `g_k`.
    pub fn component(&self, x: &[Scalar], k: i8) -> Vec<Scalar> {
        x.iter()
            .zip(&self.grades)
            .map(|(c, g)| if *g == k { c.clone() } else { Scalar::zero() })
            .collect()
    }

    pub fn is_in_grade(&self, x: &[Scalar], k: i8) -> bool {
        x.iter()
            .zip(&self.grades)
            .all(|(c, g)| *g == k || c.is_zero())
    }

    fn check_len(&self, x: &[Scalar]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Coordinates of `[b_a, b_b]`.
    pub fn bracket_basis(&self, a: usize, b: usize) -> &[Scalar] {
        &self.structure[a][b]
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut out = self.zero_element();
        for (a, xa) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let c = xa * yb;
                for (o, s) in out.iter_mut().zip(&self.structure[a][b]) {
                    if !s.is_zero() {
                        *o += &c * s;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `ad(x)` on `g` in the distinguished basis.
    pub fn ad(&self, x: &[Scalar]) -> Matrix {
        x.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Matrix::zeros(self.dim(), self.dim()), |acc, (a, c)| {
                acc.add_scaled(&self.ad[a], c)
            })
    }

    pub fn ad_basis(&self, a: usize) -> &Matrix {
        &self.ad[a]
    }

    /// Matrix of `ad(x)|_{g_{-1}}` in the basis `(e_i)`; meaningful for `x ∈ g_0`.
    pub fn ad_on_gm1(&self, x: &[Scalar]) -> Matrix {
        let d = self.d;
        let ad = self.ad(x);
        Matrix::from_dense(
            &(0..d)
                .map(|r| (0..d).map(|c| ad.get(r, c)).collect())
                .collect::<Vec<_>>(),
        )
    }

    /// `K(x, y) = tr(ad x ∘ ad y)`, computed from the structure constants.
    pub fn killing_form(&self, x: &[Scalar], y: &[Scalar]) -> Result<Scalar> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.ad(x).mul(&self.ad(y)).trace())
    }

    pub fn killing_matrix(&self) -> &Matrix {
        &self.killing
    }

    /// Killing-dual of the basis element `b_a`.
    pub fn dual(&self, a: usize) -> &[Scalar] {
        &self.dual[a]
    }

    /// The full Killing-dual assignment `label -> element`, verified against
    /// the distinguished pattern `(eps^i, E/(2d), A_j^* ∈ h_0, e_i)`.
    pub fn compute_dual_basis(&self) -> Result<BTreeMap<String, Vec<Scalar>>> {
        self.check_dual_pattern()?;
        Ok(self
            .labels
            .iter()
            .cloned()
            .zip(self.dual.iter().cloned())
            .collect())
    }

    fn check_dual_pattern(&self) -> Result<()> {
        let d = self.d;
        for i in 0..d {
            if self.dual[self.e(i)] != self.unit(self.eps(i)) {
                return Err(Error::DualBasisPattern(format!(
                    "dual(e{}) != eps{}",
                    i + 1,
                    i + 1
                )));
            }
            if self.dual[self.eps(i)] != self.unit(self.e(i)) {
                return Err(Error::DualBasisPattern(format!(
                    "dual(eps{}) != e{}",
                    i + 1,
                    i + 1
                )));
            }
        }
        let mut want = self.zero_element();
        want[self.euler()] = scalar::frac(1, 2 * d as i64);
        if self.dual[self.euler()] != want {
            return Err(Error::DualBasisPattern("dual(E) != E/(2d)".into()));
        }
        for j in 0..self.h0_dim() {
            let dj = &self.dual[self.a(j)];
            let in_h0 = dj
                .iter()
                .enumerate()
                .all(|(idx, c)| c.is_zero() || (idx > self.euler() && self.grades[idx] == 0));
            if !in_h0 {
                return Err(Error::DualBasisPattern(format!(
                    "dual({}) is not in h0",
                    self.labels[self.a(j)]
                )));
            }
        }
        Ok(())
    }

    /// Matrix model of the basis, when the algebra was built from one.
    pub fn model(&self) -> Option<&[Matrix]> {
        self.model.as_deref()
    }

    /// Coordinates of a model matrix in the distinguished basis.
    pub fn model_coords(&self, x: &Matrix) -> Result<Vec<Scalar>> {
        let basis = self
            .model
            .as_ref()
            .ok_or_else(|| Error::Invalid("algebra has no matrix model".into()))?;
        Coordinator::new(basis)?.coords(x)
    }

    pub fn model_matrix(&self, x: &[Scalar]) -> Result<Matrix> {
        let basis = self
            .model
            .as_ref()
            .ok_or_else(|| Error::Invalid("algebra has no matrix model".into()))?;
        let n = basis[0].rows();
        Ok(x.iter()
            .zip(basis)
            .fold(Matrix::zeros(n, n), |acc, (c, b)| acc.add_scaled(b, c)))
    }

    /// Casimir operator of the adjoint representation with the Killing-dual pairs.
    pub fn adjoint_casimir(&self) -> Matrix {
        (0..self.dim()).fold(Matrix::zeros(self.dim(), self.dim()), |acc, a| {
            acc.add(&self.ad[a].mul(&self.ad(&self.dual[a])))
        })
    }

    pub fn describe(&self, x: &[Scalar]) -> String {
        let parts: Vec<String> = x
            .iter()
            .zip(&self.labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| format!("{}*{}", scalar::pretty(c), l))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StructureReport {
    pub algebra: String,
    pub dim: usize,
    pub d: usize,
    pub h0_dim: usize,
    pub checks: Vec<CheckResult>,
}

impl StructureReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Exact verification of every algebraic identity the construction relies on.
pub fn verify_structure(alg: &GradedAlgebra) -> StructureReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, failure: Option<String>| {
        checks.push(CheckResult {
            name: name.into(),
            passed: failure.is_none(),
            detail: failure,
        })
    };
    let n = alg.dim();
    let d = alg.d();
    let nh = alg.h0_dim();
    let lab = |i: usize| alg.labels[i].clone();

    let mut fail = None;
    'anti: for a in 0..n {
        for b in 0..n {
            let s: Vec<Scalar> = alg.structure[a][b]
                .iter()
                .zip(&alg.structure[b][a])
                .map(|(x, y)| x + y)
                .collect();
            if s.iter().any(|c| !c.is_zero()) {
                fail = Some(format!(
                    "[{},{}] + [{},{}] != 0",
                    lab(a),
                    lab(b),
                    lab(b),
                    lab(a)
                ));
                break 'anti;
            }
        }
    }
    push("antisymmetry", fail);

    let mut fail = None;
    'jac: for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let x = alg.unit(a);
                let y = alg.unit(b);
                let z = alg.unit(c);
                let t1 = alg.bracket(&alg.bracket(&x, &y).unwrap(), &z).unwrap();
                let t2 = alg.bracket(&alg.bracket(&y, &z).unwrap(), &x).unwrap();
                let t3 = alg.bracket(&alg.bracket(&z, &x).unwrap(), &y).unwrap();
                if t1
                    .iter()
                    .zip(&t2)
                    .zip(&t3)
                    .any(|((p, q), r)| !(p + q + r).is_zero())
                {
                    fail = Some(format!(
                        "Jacobi fails on ({}, {}, {})",
                        lab(a),
                        lab(b),
                        lab(c)
                    ));
                    break 'jac;
                }
            }
        }
    }
    push("jacobi", fail);

    let mut fail = None;
    'grad: for a in 0..n {
        for b in 0..n {
            let g = alg.grades[a] + alg.grades[b];
            let br = &alg.structure[a][b];
            let ok = if g.abs() >= 2 {
                br.iter().all(Zero::is_zero)
            } else {
                alg.is_in_grade(br, g)
            };
            if !ok {
                fail = Some(format!("[{},{}] leaves g_{}", lab(a), lab(b), g));
                break 'grad;
            }
        }
    }
    push("grading_closure", fail);

    let mut fail = None;
    for a in 0..n {
        let mut want = alg.unit(a);
        let k = scalar::int(alg.grades[a] as i64);
        want.iter_mut().for_each(|c| *c *= &k);
        if alg.structure[alg.euler()][a] != want {
            fail = Some(format!("[E,{}] != {}*{}", lab(a), k, lab(a)));
            break;
        }
    }
    push("euler_action", fail);

    let fail = (0..nh)
        .find(|&j| {
            alg.structure[alg.euler()][alg.a(j)]
                .iter()
                .any(|c| !c.is_zero())
        })
        .map(|j| format!("E does not commute with {}", lab(alg.a(j))));
    push("euler_central_in_g0", fail);

    let nondeg = inverse(&alg.killing).is_ok();
    push(
        "killing_nondegenerate",
        (!nondeg).then(|| "Killing matrix is singular".into()),
    );

    let mut fail = None;
    for a in 0..n {
        for b in 0..n {
            if alg.grades[a] == alg.grades[b]
                && alg.grades[a] != 0
                && !alg.killing.get(a, b).is_zero()
            {
                fail = Some(format!("K({},{}) != 0", lab(a), lab(b)));
            }
        }
    }
    push("killing_isotropic_g_pm1", fail);

    push(
        "dual_basis_pattern",
        alg.check_dual_pattern().err().map(|e| e.to_string()),
    );

    let mut sum = alg.zero_element();
    for i in 0..d {
        let br = alg.bracket_basis(alg.eps(i), alg.e(i));
        sum.iter_mut().zip(br).for_each(|(s, b)| *s += b);
    }
    let mut half_e = alg.zero_element();
    half_e[alg.euler()] = scalar::frac(1, 2);
    push(
        "sum_eps_e_is_half_euler",
        (sum != half_e).then(|| format!("sum [eps^i, e_i] = {}", alg.describe(&sum))),
    );

    // a_j and a_j^* are the matrices of ad(A_j), ad(A_j^*) on g_{-1}.
    let a_mats: Vec<Matrix> = (0..nh)
        .map(|j| alg.ad_on_gm1(&alg.unit(alg.a(j))))
        .collect();
    let astar_mats: Vec<Matrix> = (0..nh).map(|j| alg.ad_on_gm1(alg.dual(alg.a(j)))).collect();
    let two_d = scalar::int(2 * d as i64);
    let mut fail1 = None;
    let mut fail2 = None;
    for r in 0..d {
        for i in 0..d {
            let br = alg.bracket_basis(alg.eps(r), alg.e(i)).to_vec();
            let mut base = alg.zero_element();
            if r == i {
                base[alg.euler()] = Scalar::one() / &two_d;
            }
            let mut v1 = base.clone();
            let mut v2 = base;
            for jx in 0..nh {
                let c1 = a_mats[jx].get(r, i);
                let c2 = astar_mats[jx].get(r, i);
                for (t, s) in v1.iter_mut().zip(alg.dual(alg.a(jx))) {
                    *t -= &c1 * s;
                }
                v2[alg.a(jx)] -= c2;
            }
            if br != v1 && fail1.is_none() {
                fail1 = Some(format!(
                    "[eps{},e{}] mismatch in A_j^* expansion",
                    r + 1,
                    i + 1
                ));
            }
            if br != v2 && fail2.is_none() {
                fail2 = Some(format!(
                    "[eps{},e{}] mismatch in A_j expansion",
                    r + 1,
                    i + 1
                ));
            }
        }
    }
    push("rel_bracket_via_dual_h0", fail1);
    push("rel_bracket_via_h0", fail2);

    let mut fail_a = None;
    let mut fail_astar = None;
    for jx in 0..nh {
        for r in 0..d {
            let mut want = alg.zero_element();
            let mut want_star = alg.zero_element();
            for k in 0..d {
                want[alg.eps(k)] = -a_mats[jx].get(r, k);
                want_star[alg.eps(k)] = -astar_mats[jx].get(r, k);
            }
            if alg.bracket_basis(alg.a(jx), alg.eps(r)) != want.as_slice() && fail_a.is_none() {
                fail_a = Some(format!("[{},eps{}] mismatch", lab(alg.a(jx)), r + 1));
            }
            let got = alg
                .bracket(alg.dual(alg.a(jx)), &alg.unit(alg.eps(r)))
                .unwrap();
            if got != want_star && fail_astar.is_none() {
                fail_astar = Some(format!("[{}^*,eps{}] mismatch", lab(alg.a(jx)), r + 1));
            }
        }
    }
    push("rel_h0_on_g1", fail_a);
    push("rel_dual_h0_on_g1", fail_astar);

    let cad = alg.adjoint_casimir();
    push(
        "adjoint_casimir_is_identity",
        (cad != Matrix::identity(n)).then(|| "C_ad != Id".into()),
    );

    StructureReport {
        algebra: alg.kind.to_string(),
        dim: n,
        d,
        h0_dim: nh,
        checks,
    }
}

#[derive(Serialize, Deserialize)]
struct StructureTriple {
    a: usize,
    b: usize,
    #[serde(with = "crate::scalar::serde_vec")]
    coords: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraDocument {
    signature: String,
    d: usize,
    basis_labels: Vec<String>,
    structure_constants: Vec<StructureTriple>,
    grading: BTreeMap<String, i8>,
}

impl GradedAlgebra {
    /// JSON document with sparse structure constants (`a < b` only).
    pub fn to_json(&self) -> String {
        let n = self.dim();
        let mut triples = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.structure[a][b].iter().any(|c| !c.is_zero()) {
                    triples.push(StructureTriple {
                        a,
                        b,
                        coords: self.structure[a][b].clone(),
                    });
                }
            }
        }
        let doc = AlgebraDocument {
            signature: self.kind.to_string(),
            d: self.d,
            basis_labels: self.labels.clone(),
            structure_constants: triples,
            grading: self
                .labels
                .iter()
                .cloned()
                .zip(self.grades.iter().copied())
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("algebra document serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: AlgebraDocument = serde_json::from_str(s).map_err(|e| Error::Parse {
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        })?;
        let kind: AlgebraKind = doc.signature.parse()?;
        let n = doc.basis_labels.len();
        let mut structure = vec![vec![vec![Scalar::zero(); n]; n]; n];
        for t in doc.structure_constants {
            if t.a >= n || t.b >= n || t.coords.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: t.coords.len(),
                });
            }
            structure[t.b][t.a] = t.coords.iter().map(|c| -c).collect();
            structure[t.a][t.b] = t.coords;
        }
        let grades = doc
            .basis_labels
            .iter()
            .map(|l| {
                doc.grading
                    .get(l)
                    .copied()
                    .ok_or_else(|| Error::Invalid(format!("no grade for {l}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let alg = Self::from_structure(kind, doc.d, doc.basis_labels, grades, structure)?;
        alg.check_dual_pattern()?;
        Ok(alg)
    }
}
