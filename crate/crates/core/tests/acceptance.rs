//! One line per acceptance criterion. Exits nonzero if any criterion fails.

mod common;

use std::time::Instant;

use common::*;
use iffquant::flat::PolyTensorField;
use iffquant::flat::{basis_symbols, EquivarianceContext, Quantizer};
use iffquant::lie::{
    build_conformal_algebra, build_projective_algebra, verify_structure, GradedAlgebra,
};
use iffquant::linalg::unit_vector;
use iffquant::mpoly::monomials_up_to;
use iffquant::poly::UniPoly;
use iffquant::rep::{build_rep, Representation};
use iffquant::scalar::{frac, Scalar};
use iffquant::symbol::{gamma_apply, SymbolTower};
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn lambda() -> Scalar {
    frac(1, 2)
}

fn noncritical_deltas() -> Vec<Scalar> {
    vec![frac(1, 2), frac(1, 1), frac(2, 1)]
}

fn structure(algs: &[GradedAlgebra]) -> Outcome {
    for g in algs {
        let rep = verify_structure(g);
        if let Some(c) = rep.checks.iter().find(|c| !c.passed) {
            return Err(format!(
                "{}: {} failed {}",
                g.kind(),
                c.name,
                c.detail.clone().unwrap_or_default()
            ));
        }
    }
    Ok(format!("{} algebras, 14 checks each", algs.len()))
}

/// The representation pairs of the identity suite: densities, `V = standard ⊗ density(1/2)`.
fn identity_pairs(g: &GradedAlgebra) -> Vec<(Representation, Representation)> {
    let r = |s: &str| build_rep(g, &s.parse().unwrap()).unwrap();
    vec![
        (r("density(1/2,0)"), r("density(3/2,0)")),
        (r("density(1/2,0)"), r("tensor(standard,density(1/2,0))")),
        (
            r("tensor(standard,density(1/2,0))"),
            r("tensor(standard,density(1/2,0))"),
        ),
    ]
}

fn identity_towers() -> Vec<SymbolTower> {
    [
        build_conformal_algebra(1, 2).unwrap(),
        build_conformal_algebra(2, 2).unwrap(),
    ]
    .iter()
    .flat_map(|g| {
        identity_pairs(g)
            .into_iter()
            .map(move |(a, b)| SymbolTower::new(g, &a, &b, 3).unwrap())
    })
    .collect()
}

fn identities(towers: &[SymbolTower]) -> Outcome {
    let failures: Vec<String> = towers
        .par_iter()
        .flat_map_iter(|t| {
            let g = t.algebra();
            let mut out = Vec::new();
            for j in 1..=3 {
                let rep = t.verify_identities(j);
                out.extend(rep.checks.iter().filter(|c| !c.passed).map(|c| {
                    format!(
                        "{} {} k={j}: {}",
                        g.kind(),
                        t.space(j).v2().descriptor(),
                        c.name
                    )
                }));
                let mut r = rng(j as u64 * 101 + g.dim() as u64);
                for _ in 0..50 {
                    let h = g.component(&random_vector(&mut r, g.dim(), 0.8), 1);
                    let v = random_vector(&mut r, t.space(j).dim(), 0.3);
                    if gamma_apply(g, t.space(j), &h, &v).unwrap()
                        != t.gamma_recursive(&h, j, &v).unwrap()
                    {
                        out.push(format!(
                            "{} k={j}: gamma definition and recursion differ",
                            g.kind()
                        ));
                        break;
                    }
                }
            }
            out
        })
        .collect();
    if failures.is_empty() {
        Ok(format!(
            "{} pairs x k=1..3, 50 random tensors per space",
            towers.len()
        ))
    } else {
        Err(failures.join("; "))
    }
}

fn semisimplicity(towers: &[SymbolTower]) -> Outcome {
    let bad: Vec<String> = towers
        .par_iter()
        .flat_map_iter(|t| {
            (0..=3)
                .filter(|&j| !UniPoly::minimal_polynomial(t.cflat(j)).is_squarefree())
                .map(|j| {
                    format!(
                        "{} {} degree {j}",
                        t.algebra().kind(),
                        t.space(j).v2().descriptor()
                    )
                })
                .collect::<Vec<_>>()
        })
        .collect();
    if bad.is_empty() {
        let largest = towers.iter().map(|t| t.space(3).dim()).max().unwrap();
        Ok(format!(
            "squarefree on {} spaces, largest dimension {largest}",
            towers.len() * 4
        ))
    } else {
        Err(format!("not squarefree: {}", bad.join(", ")))
    }
}

fn quantizers(g: &GradedAlgebra, k: usize) -> Result<Vec<Quantizer>, String> {
    noncritical_deltas()
        .into_iter()
        .map(|delta| {
            if is_critical_at_top(g, lambda(), delta.clone(), k) {
                return Err(format!("δ={delta} is critical"));
            }
            Quantizer::new(density_tower(g, lambda(), delta, k)).map_err(|e| e.to_string())
        })
        .collect()
}

fn recursion(g: &GradedAlgebra) -> Outcome {
    let qs = quantizers(g, 2)?;
    let mut n = 0;
    for q in &qs {
        for t in basis_symbols(q.tower().space(2), 2) {
            hat_chain_checks(q, &t)?;
            n += 1;
        }
    }
    Ok(format!("{n} basis symbols over δ ∈ {{1/2, 1, 2}}, λ = 1/2"))
}

fn equivariance(g: &GradedAlgebra) -> Outcome {
    let qs = quantizers(g, 2)?;
    let d = g.d();
    let sections: Vec<PolyTensorField> = monomials_up_to(d, 3)
        .into_iter()
        .map(|m| PolyTensorField::monomial(m, unit_vector(1, 0)))
        .collect();
    let results: Vec<Result<usize, String>> = qs
        .into_par_iter()
        .flat_map_iter(|q| {
            let ctx = EquivarianceContext::new(q);
            let symbols = basis_symbols(ctx.quantizer().tower().space(2), 2);
            symbols
                .into_iter()
                .map(|t| (ctx.clone(), t))
                .collect::<Vec<_>>()
        })
        .map(|(ctx, t)| {
            let q = ctx.quantizer();
            let op = q.build_operator(&t).map_err(|e| e.to_string())?;
            let mut n = 0;
            for h in 0..g.dim() {
                let hv = g.unit(h);
                let op_l = q
                    .build_operator(&ctx.act_on_symbol(&hv, &t))
                    .map_err(|e| e.to_string())?;
                for f in &sections {
                    if !ctx
                        .residual_with(&hv, &op, &op_l, f)
                        .map_err(|e| e.to_string())?
                        .is_zero()
                    {
                        return Err(format!("nonzero residual for h = {}", g.labels()[h]));
                    }
                    n += 1;
                }
            }
            Ok(n)
        })
        .collect();
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(format!("{total} (δ, T, h, f) cases, all residuals zero"))
}

fn principal_symbol(g: &GradedAlgebra) -> Outcome {
    let mut n = 0;
    for k in 1..=2 {
        for q in quantizers(g, k)? {
            let space = q.tower().space(k);
            for t in basis_symbols(space, 2) {
                let op = q.build_operator(&t).map_err(|e| e.to_string())?;
                if op.principal_symbol(space).map_err(|e| e.to_string())? != t {
                    return Err(format!("k={k}: symbol not recovered"));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} basis symbols, k = 1, 2"))
}

fn ansatz(g: &GradedAlgebra) -> Outcome {
    let mut n = 0;
    for k in 1..=2 {
        for q in quantizers(g, k)? {
            let space = q.tower().space(k).clone();
            let solver = AnsatzSolver::new(g, &space);
            match solver.solve(k as u32) {
                AnsatzOutcome::Unique(u) => {
                    if !solver.agrees_with(&u, &q, k as u32 + 1) {
                        return Err(format!("k={k}: ansatz solution differs from quantize"));
                    }
                }
                other => return Err(format!("k={k}: {other:?}")),
            }
            n += 1;
        }
    }
    Ok(format!("{n} (k, δ) settings, unique and equal to quantize"))
}

fn main() {
    let c12 = build_conformal_algebra(1, 2).unwrap();
    let p2 = build_projective_algebra(2).unwrap();
    let mut all = true;
    let mut report = |n: &str, what: &str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let r = f();
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {n}: PASS  {what}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                all = false;
                println!("criterion {n}: FAIL  {what}: {msg} ({secs:.1}s)")
            }
        }
    };
    report("1", "structure suite", &|| {
        let algs: Vec<GradedAlgebra> = [(1, 2), (2, 1), (2, 2), (3, 1)]
            .iter()
            .map(|&(p, q)| build_conformal_algebra(p, q).unwrap())
            .chain([2, 3].iter().map(|&m| build_projective_algebra(m).unwrap()))
            .collect();
        structure(&algs)
    });
    let towers = identity_towers();
    report("2", "gamma and Casimir identities", &|| identities(&towers));
    report("3", "semisimplicity of the flat Casimir", &|| {
        semisimplicity(&towers)
    });
    report("4", "hat recursion and eigen-equation", &|| recursion(&c12));
    report("5", "equivariance in the flat model", &|| {
        equivariance(&c12)
    });
    report("6", "principal symbol of the quantization", &|| {
        principal_symbol(&c12)
    });
    report("7", "brute-force ansatz uniqueness", &|| ansatz(&c12));
    report("8", "projective cross-check", &|| {
        let parts = [
            structure(std::slice::from_ref(&p2))?,
            recursion(&p2)?,
            equivariance(&p2)?,
            principal_symbol(&p2)?,
        ];
        Ok(parts.join("; "))
    });
    if !all {
        std::process::exit(1);
    }
}
