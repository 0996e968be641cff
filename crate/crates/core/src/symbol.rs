//! The degree-lowering map `γ`, the flat Casimir `C♭`, its spectral
//! decomposition, tree subspaces and criticality.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{CheckResult, GradedAlgebra};
use crate::linalg::{kernel, vec_is_zero, EchelonBasis, Matrix};
use crate::poly::UniPoly;
use crate::rep::{combine_g0, word_index, Representation, SymbolSpace};
use crate::scalar::{self, Scalar};

fn require_g1(alg: &GradedAlgebra, h: &[Scalar]) -> Result<()> {
    if alg.is_in_grade(h, 1) {
        Ok(())
    } else {
        Err(Error::NotInSubspace("g_1"))
    }
}

/// Per-letter data for `γ(h)`: `A_a = [h, e_a] ∈ g_0`.
struct GammaData {
    rho1: Vec<Matrix>,
    ad: Vec<Matrix>,
}

impl GammaData {
    fn new(alg: &GradedAlgebra, v1: &Representation, h: &[Scalar]) -> Self {
        let brackets: Vec<Vec<Scalar>> = (0..alg.d())
            .map(|a| alg.bracket(h, &alg.unit(alg.e(a))).expect("same algebra"))
            .collect();
        GammaData {
            rho1: brackets.iter().map(|b| v1.act(alg, b)).collect(),
            ad: brackets.iter().map(|b| alg.ad_on_gm1(b)).collect(),
        }
    }
}

/// `γ(h)T` by the two-sum formula, returned in the degree `k-1` space
/// (empty for `k = 0`).
pub fn gamma_apply(
    alg: &GradedAlgebra,
    space: &SymbolSpace,
    h: &[Scalar],
    t: &[Scalar],
) -> Result<Vec<Scalar>> {
    require_g1(alg, h)?;
    if t.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: t.len(),
        });
    }
    let data = GammaData::new(alg, space.v1(), h);
    Ok(gamma_with(&data, space, t))
}

fn gamma_with(data: &GammaData, space: &SymbolSpace, t: &[Scalar]) -> Vec<Scalar> {
    let (k, d) = (space.k(), space.d());
    if k == 0 {
        return Vec::new();
    }
    let n1 = space.v1().dim();
    let hom = space.hom_dim();
    let mut out = vec![Scalar::zero(); d.pow(k as u32 - 1) * hom];
    for (idx, coef) in t.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let (w, r, c) = space.split_index(idx);
        for i in 0..k {
            let a = w[i];
            let mut rest = w.clone();
            rest.remove(i);
            let base = word_index(&rest, d) * hom;
            // -(w\i) ⊗ E_rc ∘ ρ1([h, e_{w_i}])
            for (tt, x) in data.rho1[a].row_entries(c) {
                out[base + r * n1 + tt] -= coef * x;
            }
            // Σ_{j>i} (w\i with slot j replaced by [[h,e_{w_i}], e_{w_j}]) ⊗ E_rc
            for j in i + 1..k {
                let slot = j - 1;
                for s in 0..d {
                    let x = data.ad[a].get(s, w[j]);
                    if x.is_zero() {
                        continue;
                    }
                    let mut w2 = rest.clone();
                    w2[slot] = s;
                    out[word_index(&w2, d) * hom + r * n1 + c] += coef * &x;
                }
            }
        }
    }
    out
}

/// Matrix of `γ(h)` from degree `k` to degree `k-1`.
pub fn gamma_matrix(alg: &GradedAlgebra, space: &SymbolSpace, h: &[Scalar]) -> Result<Matrix> {
    require_g1(alg, h)?;
    let data = GammaData::new(alg, space.v1(), h);
    let rows = if space.k() == 0 {
        0
    } else {
        space.dim() / space.d()
    };
    let mut trip = Vec::new();
    for col in 0..space.dim() {
        let img = gamma_with(&data, space, &crate::linalg::unit_vector(space.dim(), col));
        trip.extend(
            img.into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(r, x)| (r, col, x)),
        );
    }
    Ok(Matrix::from_triplets(rows, space.dim(), trip))
}

/// `C♭ = -½ρ(E) + (1/2d)ρ(E)² + Σ_j ρ(A_j)ρ(A_j^*)`.
pub fn cflat_matrix(alg: &GradedAlgebra, space: &SymbolSpace) -> Matrix {
    let rho = space.rho_star();
    let e = &rho[0];
    let mut c = e
        .scale(&scalar::frac(-1, 2))
        .add(&e.mul(e).scale(&scalar::frac(1, 2 * alg.d() as i64)));
    for j in 0..alg.h0_dim() {
        let dual = combine_g0(alg, rho, alg.dual(alg.a(j)));
        c = c.add(&rho[1 + j].mul(&dual));
    }
    c
}

/// All symbol spaces of degree `0..=k` for a pair `(V1, V2)` with their
/// `γ(ε^i)` and `C♭` matrices.
#[derive(Clone, Debug)]
pub struct SymbolTower {
    alg: GradedAlgebra,
    spaces: Vec<SymbolSpace>,
    /// `gammas[j][i]` is `γ(ε^i)` from degree `j` to `j-1`; empty at `j = 0`.
    gammas: Vec<Vec<Matrix>>,
    cflat: Vec<Matrix>,
}

impl SymbolTower {
    pub fn new(
        alg: &GradedAlgebra,
        v1: &Representation,
        v2: &Representation,
        k: usize,
    ) -> Result<Self> {
        let mut spaces = Vec::new();
        let mut gammas = Vec::new();
        let mut cflat = Vec::new();
        for j in 0..=k {
            let s = SymbolSpace::new(alg, v1, v2, j)?;
            let g = if j == 0 {
                Vec::new()
            } else {
                (0..alg.d())
                    .map(|i| gamma_matrix(alg, &s, &alg.unit(alg.eps(i))))
                    .collect::<Result<_>>()?
            };
            cflat.push(cflat_matrix(alg, &s));
            gammas.push(g);
            spaces.push(s);
        }
        Ok(SymbolTower {
            alg: alg.clone(),
            spaces,
            gammas,
            cflat,
        })
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.alg
    }

    pub fn k(&self) -> usize {
        self.spaces.len() - 1
    }

    pub fn space(&self, j: usize) -> &SymbolSpace {
        &self.spaces[j]
    }

    pub fn gamma(&self, j: usize, i: usize) -> &Matrix {
        &self.gammas[j][i]
    }

    pub fn gammas(&self, j: usize) -> &[Matrix] {
        &self.gammas[j]
    }

    /// `γ(h)` at degree `j` for any `h ∈ g_1`, by linearity.
    pub fn gamma_of(&self, j: usize, h: &[Scalar]) -> Matrix {
        let s = &self.spaces[j];
        let rows = if j == 0 { 0 } else { s.dim() / s.d() };
        (0..self.alg.d()).fold(Matrix::zeros(rows, s.dim()), |acc, i| {
            let c = &h[self.alg.eps(i)];
            if c.is_zero() {
                acc
            } else {
                acc.add_scaled(&self.gammas[j][i], c)
            }
        })
    }

    pub fn cflat(&self, j: usize) -> &Matrix {
        &self.cflat[j]
    }

    /// `C♭` in symmetric coordinates at degree `j`.
    pub fn cflat_sym(&self, j: usize) -> Matrix {
        let s = &self.spaces[j];
        s.project_matrix()
            .mul(&self.cflat[j].mul(&s.embed_matrix()))
    }

    /// `γ(h)T` by the first-letter recursion: the block of `T` starting with
    /// `e_a` contributes `ρ_r*([h,e_a]) T_a` plus `e_a ⊗ γ(h) T_a`.
    pub fn gamma_recursive(&self, h: &[Scalar], j: usize, t: &[Scalar]) -> Result<Vec<Scalar>> {
        require_g1(&self.alg, h)?;
        let alg = &self.alg;
        let brackets: Vec<Vec<Scalar>> = (0..alg.d())
            .map(|a| alg.bracket(h, &alg.unit(alg.e(a))))
            .collect::<Result<_>>()?;
        Ok(self.gamma_rec(&brackets, j, t))
    }

    fn gamma_rec(&self, brackets: &[Vec<Scalar>], j: usize, t: &[Scalar]) -> Vec<Scalar> {
        if j == 0 {
            return Vec::new();
        }
        let lower = &self.spaces[j - 1];
        let block = lower.dim();
        let mut out = vec![Scalar::zero(); block];
        for (a, br) in brackets.iter().enumerate() {
            let ta = &t[a * block..(a + 1) * block];
            if vec_is_zero(ta) {
                continue;
            }
            let head = lower.rho_r_of(&self.alg, br).mul_vec(ta);
            out.iter_mut().zip(&head).for_each(|(o, x)| *o += x);
            if j >= 2 {
                let tail = self.gamma_rec(brackets, j - 1, ta);
                let sub = tail.len();
                out[a * sub..(a + 1) * sub]
                    .iter_mut()
                    .zip(&tail)
                    .for_each(|(o, x)| *o += x);
            }
        }
        out
    }
}

/// One spectral component: the kernel of an irreducible factor of the
/// minimal polynomial.
#[derive(Clone, Debug)]
pub struct SpectralComponent {
    pub factor: UniPoly,
    pub eigenvalue: Option<Scalar>,
    pub basis: EchelonBasis,
    idempotent: UniPoly,
}

impl SpectralComponent {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `P v`, where `P` is the spectral projection onto this component.
    pub fn project(&self, m: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
        self.idempotent.apply(m, v)
    }

    /// Explicit projection matrix; only built for rational eigenvalues.
    pub fn projection_matrix(&self, m: &Matrix) -> Option<Matrix> {
        self.eigenvalue
            .as_ref()
            .map(|_| self.idempotent.eval_matrix(m))
    }
}

#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub minimal_polynomial: UniPoly,
    pub components: Vec<SpectralComponent>,
}

impl SpectralDecomposition {
    /// Characteristic polynomial as `(factor, multiplicity)` pairs.
    pub fn characteristic_factors(&self) -> Vec<(UniPoly, usize)> {
        self.components
            .iter()
            .map(|c| (c.factor.clone(), c.dim() / c.factor.degree().unwrap_or(1)))
            .collect()
    }

    /// Expanded characteristic polynomial; large for big spaces.
    pub fn characteristic_polynomial(&self) -> UniPoly {
        self.characteristic_factors()
            .iter()
            .fold(UniPoly::one(), |acc, (f, e)| acc.mul(&f.pow(*e)))
    }

    /// Factored form, e.g. `(x - 3)^2 (x^2 - 2)`.
    pub fn characteristic_string(&self) -> String {
        self.characteristic_factors()
            .iter()
            .map(|(f, e)| {
                if *e == 1 {
                    format!("({f})")
                } else {
                    format!("({f})^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Splits `M` into the kernels of the irreducible factors of its minimal
/// polynomial. Fails unless the minimal polynomial is squarefree.
pub fn spectral_split(m: &Matrix) -> Result<SpectralDecomposition> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(SpectralDecomposition {
            minimal_polynomial: UniPoly::one(),
            components: Vec::new(),
        });
    }
    let minpoly = UniPoly::minimal_polynomial(m);
    if !minpoly.is_squarefree() {
        return Err(Error::NotSemisimple(minpoly.to_string()));
    }
    let mut components = Vec::new();
    for (f, _) in minpoly.factor() {
        let basis = EchelonBasis::span(n, kernel(&f.eval_matrix(m)));
        let deg = f.degree().unwrap_or(1);
        if !basis.len().is_multiple_of(deg) {
            return Err(Error::Invalid(format!(
                "component of {f} has dimension {} not divisible by {deg}",
                basis.len()
            )));
        }
        let g = minpoly.div_rem(&f).0;
        let (_, _, t) = f.xgcd(&g);
        let idempotent = t.mul(&g).rem(&minpoly);
        components.push(SpectralComponent {
            eigenvalue: f.linear_root(),
            factor: f,
            basis,
            idempotent,
        });
    }
    let total: usize = components.iter().map(SpectralComponent::dim).sum();
    if total != n {
        return Err(Error::Invalid(format!(
            "components span {total} of {n} dimensions"
        )));
    }
    let split = SpectralDecomposition {
        minimal_polynomial: minpoly,
        components,
    };
    if n <= 48 && UniPoly::charpoly(m) != split.characteristic_polynomial() {
        return Err(Error::Invalid(
            "characteristic polynomial cross-check failed".into(),
        ));
    }
    Ok(split)
}

/// `tree^0 = component`, `tree^{l+1} = Σ_i γ(ε^i) tree^l`, each as an echelon
/// basis of the degree `k - l` space; stops once degree 0 is reached or the
/// level vanishes.
pub fn tree_subspaces(gammas: &[&[Matrix]], component: &EchelonBasis) -> Vec<EchelonBasis> {
    let mut levels = vec![component.clone()];
    for gs in gammas {
        let prev = levels.last().unwrap();
        let ambient = gs.first().map_or(0, Matrix::rows);
        let images = prev
            .vectors()
            .iter()
            .flat_map(|v| gs.iter().map(move |g| g.mul_vec(v)));
        let next = EchelonBasis::span(ambient, images.collect::<Vec<_>>());
        let stop = next.is_empty();
        levels.push(next);
        if stop {
            break;
        }
    }
    levels
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TreeSpectrum {
    pub level: usize,
    pub dim: usize,
    pub factors: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComponentRecord {
    pub degree: usize,
    pub factor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalue: Option<String>,
    pub dim: usize,
    pub tree_spectra: Vec<TreeSpectrum>,
    pub critical: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CriticalityReport {
    pub algebra: String,
    pub v1: String,
    pub v2: String,
    pub k: usize,
    pub components: Vec<ComponentRecord>,
    pub overall_critical: bool,
}

impl CriticalityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Criticality of one degree, given `C♭` on the symmetric subspace, the
/// embedding of that subspace, the `γ(ε^i)` maps of degrees `k, k-1, ..., 1`,
/// and the full `C♭` of degrees `k-1, ..., 0`. Works in any bases.
pub fn criticality_from_matrices(
    degree: usize,
    cflat_sym: &Matrix,
    embed: &Matrix,
    gammas: &[&[Matrix]],
    lower_cflat: &[&Matrix],
) -> Result<Vec<ComponentRecord>> {
    let split = spectral_split(cflat_sym)?;
    let mut out = Vec::new();
    for comp in &split.components {
        let top = EchelonBasis::span(
            embed.rows(),
            comp.basis
                .vectors()
                .iter()
                .map(|v| embed.mul_vec(v))
                .collect::<Vec<_>>(),
        );
        let levels = tree_subspaces(gammas, &top);
        let mut spectra = Vec::new();
        let mut critical = false;
        for (l, basis) in levels.iter().enumerate().skip(1) {
            if basis.is_empty() {
                continue;
            }
            let restricted = lower_cflat[l - 1].restrict(basis)?;
            let mp = UniPoly::minimal_polynomial(&restricted);
            critical |= comp.factor.divides(&mp);
            spectra.push(TreeSpectrum {
                level: l,
                dim: basis.len(),
                factors: mp.factor().iter().map(|(f, _)| f.to_string()).collect(),
            });
        }
        out.push(ComponentRecord {
            degree,
            factor: comp.factor.to_string(),
            eigenvalue: comp.eigenvalue.as_ref().map(scalar::format),
            dim: comp.dim(),
            tree_spectra: spectra,
            critical,
        });
    }
    Ok(out)
}

impl SymbolTower {
    /// Components at degree `j` with their tree spectra.
    pub fn degree_criticality(&self, j: usize) -> Result<Vec<ComponentRecord>> {
        let gammas: Vec<&[Matrix]> = (1..=j).rev().map(|l| self.gammas[l].as_slice()).collect();
        let lower: Vec<&Matrix> = (0..j).rev().map(|l| &self.cflat[l]).collect();
        criticality_from_matrices(
            j,
            &self.cflat_sym(j),
            &self.spaces[j].embed_matrix(),
            &gammas,
            &lower,
        )
    }

    pub fn criticality_report(&self) -> Result<CriticalityReport> {
        let mut components = Vec::new();
        for j in 0..=self.k() {
            components.extend(self.degree_criticality(j)?);
        }
        let s = &self.spaces[0];
        Ok(CriticalityReport {
            algebra: self.alg.kind().to_string(),
            v1: s.v1().descriptor().to_string(),
            v2: s.v2().descriptor().to_string(),
            k: self.k(),
            overall_critical: components.iter().any(|c| c.critical),
            components,
        })
    }
}

pub fn criticality_report(
    alg: &GradedAlgebra,
    v1: &Representation,
    v2: &Representation,
    k: usize,
) -> Result<CriticalityReport> {
    SymbolTower::new(alg, v1, v2, k)?.criticality_report()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IdentityReport {
    pub degree: usize,
    pub checks: Vec<CheckResult>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl SymbolTower {
    /// Exact matrix checks at degree `j ≥ 1`: the `g_0`-equivariance of `γ`
    /// for `ρ_*` and `ρ_r*`, commuting `γ`s, the `C♭` commutator identity,
    /// and agreement of the two `γ` evaluations on every basis vector.
    pub fn verify_identities(&self, j: usize) -> IdentityReport {
        let alg = &self.alg;
        let d = alg.d();
        let mut checks = Vec::new();
        let mut push = |name: &str, failure: Option<String>| {
            checks.push(CheckResult {
                name: name.into(),
                passed: failure.is_none(),
                detail: failure,
            })
        };
        if j == 0 {
            return IdentityReport { degree: 0, checks };
        }
        let (hi, lo) = (&self.spaces[j], &self.spaces[j - 1]);
        for (name, hi_m, lo_m) in [
            ("eqalg_rho", hi.rho_star(), lo.rho_star()),
            ("eqalg_rho_r", hi.rho_r_star(), lo.rho_r_star()),
        ] {
            let mut fail = None;
            'outer: for (p, a) in alg.g0_indices().enumerate() {
                for r in 0..d {
                    let g = &self.gammas[j][r];
                    let lhs = lo_m[p].mul(g).sub(&g.mul(&hi_m[p]));
                    let rhs = self.gamma_of(j, alg.bracket_basis(a, alg.eps(r)));
                    if lhs != rhs {
                        fail = Some(format!("A = {}, h = eps{}", alg.labels()[a], r + 1));
                        break 'outer;
                    }
                }
            }
            push(name, fail);
        }
        let mut fail = None;
        if j >= 2 {
            'comm: for r in 0..d {
                for s in r + 1..d {
                    let a = self.gammas[j - 1][r].mul(&self.gammas[j][s]);
                    let b = self.gammas[j - 1][s].mul(&self.gammas[j][r]);
                    if a != b {
                        fail = Some(format!("eps{} and eps{}", r + 1, s + 1));
                        break 'comm;
                    }
                }
            }
        }
        push("gammas_commute", fail);
        let mut fail = None;
        for r in 0..d {
            let g = &self.gammas[j][r];
            let lhs = self.cflat[j - 1].mul(g).sub(&g.mul(&self.cflat[j]));
            let rhs = (0..d).fold(Matrix::zeros(g.rows(), g.cols()), |acc, i| {
                let br = alg.bracket_basis(alg.eps(r), alg.e(i));
                acc.add(&self.gammas[j][i].mul(&hi.rho_of(alg, br)))
            });
            if lhs != rhs.scale(&scalar::int(2)) {
                fail = Some(format!("h = eps{}", r + 1));
                break;
            }
        }
        push("cflat_gamma_commutator", fail);
        let mut fail = None;
        'rec: for r in 0..d {
            let h = alg.unit(alg.eps(r));
            for col in 0..hi.dim() {
                let v = crate::linalg::unit_vector(hi.dim(), col);
                let rec = self.gamma_recursive(&h, j, &v).expect("h in g_1");
                if rec != self.gammas[j][r].column(col) {
                    fail = Some(format!("h = eps{}, basis vector {}", r + 1, col));
                    break 'rec;
                }
            }
        }
        push("gamma_recursion_agrees", fail);
        let mut fail = None;
        for (p, a) in alg.g0_indices().enumerate().skip(1) {
            if self.cflat[j].mul(&hi.rho_star()[p]) != hi.rho_star()[p].mul(&self.cflat[j]) {
                fail = Some(format!("C♭ does not commute with {}", alg.labels()[a]));
                break;
            }
        }
        push("cflat_h0_equivariant", fail);
        IdentityReport { degree: j, checks }
    }
}

/// Word-level helper: coordinates of `e_{w_1} ⊗ ... ⊗ e_{w_k} ⊗ E_rc`.
pub fn basis_tensor(space: &SymbolSpace, word: &[usize], r: usize, c: usize) -> Vec<Scalar> {
    crate::linalg::unit_vector(space.dim(), space.index(word, r, c))
}

/// Inverse of [`basis_tensor`] indexing for diagnostics.
pub fn describe_index(space: &SymbolSpace, idx: usize) -> String {
    let (w, r, c) = space.split_index(idx);
    let letters: Vec<String> = w.iter().map(|l| format!("e{}", l + 1)).collect();
    format!("{} ⊗ E{}{}", letters.join("⊗"), r + 1, c + 1)
}
