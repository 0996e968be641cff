//! Command-line task configuration and report assembly.

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flat::{basis_symbols, EquivarianceContext, PolyTensorField, Quantizer};
use crate::lie::{verify_structure, AlgebraKind, GradedAlgebra, StructureReport};
use crate::mpoly::{monomial_key, monomials_up_to};
use crate::rep::{build_rep, Descriptor};
use crate::scalar::{self, Scalar};
use crate::symbol::{spectral_split, CriticalityReport, IdentityReport, SymbolTower};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyAlgebra,
    Spectrum,
    Criticality,
    Quantize,
    Equivariance,
}

#[derive(Clone, Debug, Parser)]
#[command(
    name = "iffquant",
    version,
    about = "Exact equivariant quantization on |1|-graded algebras"
)]
pub struct TaskConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// conformal(p,q) or projective(m)
    #[arg(long)]
    pub algebra: String,
    /// Source module descriptor.
    #[arg(long, default_value = "density(0,0)")]
    pub v1: String,
    /// Target module descriptor.
    #[arg(long, default_value = "density(0,0)")]
    pub v2: String,
    /// Symbol degree.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Shifts applied to V2, e.g. 0,1/2,1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub delta_list: Vec<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

/// Target module shifted by `δ`: density weights add, anything else is
/// tensored with `density(δ,0)`.
pub fn twist(desc: &Descriptor, delta: &Scalar) -> Descriptor {
    match desc {
        Descriptor::Density(l, z) => Descriptor::Density(l + delta, *z),
        other => Descriptor::Tensor(
            Box::new(other.clone()),
            Box::new(Descriptor::Density(delta.clone(), 0)),
        ),
    }
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    command: Command,
    algebra: String,
    v1: String,
    v2: String,
    k: usize,
    passed: bool,
    results: Vec<T>,
}

#[derive(Serialize)]
struct DeltaEntry<T: Serialize> {
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<String>,
    v2: String,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
struct ComponentSummary {
    factor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigenvalue: Option<String>,
    dim: usize,
}

#[derive(Serialize)]
struct DegreeSpectrum {
    degree: usize,
    dim: usize,
    minimal_polynomial: String,
    characteristic_polynomial: String,
    squarefree: bool,
    components: Vec<ComponentSummary>,
    identities: IdentityReport,
}

#[derive(Serialize)]
struct SpectrumBody {
    degrees: Vec<DegreeSpectrum>,
}

#[derive(Serialize)]
struct CriticalityBody {
    report: CriticalityReport,
}

#[derive(Serialize)]
struct OperatorEntry {
    monomial: String,
    basis_index: usize,
    operator: serde_json::Value,
}

#[derive(Serialize)]
#[serde(untagged)]
enum QuantizeBody {
    Operators { operators: Vec<OperatorEntry> },
    Failed { error: String },
}

#[derive(Serialize)]
struct EquivarianceFailure {
    h: String,
    symbol: String,
    section: String,
}

#[derive(Serialize)]
#[serde(untagged)]
enum EquivarianceBody {
    Checked {
        cases: usize,
        failures: Vec<EquivarianceFailure>,
    },
    Failed {
        error: String,
    },
}

struct Setup {
    alg: GradedAlgebra,
    v1: Descriptor,
    v2: Descriptor,
    deltas: Vec<Option<Scalar>>,
}

fn setup(cfg: &TaskConfig) -> Result<Setup> {
    let kind: AlgebraKind = cfg.algebra.parse()?;
    let alg = kind.build()?;
    let v1: Descriptor = cfg.v1.parse()?;
    let v2: Descriptor = cfg.v2.parse()?;
    let deltas = if cfg.delta_list.is_empty() {
        vec![None]
    } else {
        cfg.delta_list
            .iter()
            .map(|s| scalar::parse(s).map(Some))
            .collect::<Result<_>>()?
    };
    Ok(Setup {
        alg,
        v1,
        v2,
        deltas,
    })
}

fn thread_pool() -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var("IFFQUANT_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        b = b.num_threads(n.max(1));
    }
    b.build().expect("thread pool")
}

/// Runs one task and returns the JSON report and whether it passed.
pub fn run(cfg: &TaskConfig) -> Result<(String, bool)> {
    let s = setup(cfg)?;
    let json = |v: serde_json::Value| serde_json::to_string_pretty(&v).expect("report serializes");
    match cfg.command {
        Command::VerifyAlgebra => {
            let rep: StructureReport = verify_structure(&s.alg);
            let ok = rep.all_passed();
            Ok((
                json(serde_json::json!({ "command": cfg.command, "report": rep, "passed": ok })),
                ok,
            ))
        }
        Command::Spectrum => sweep(cfg, &s, |t| spectrum(t, cfg.k)),
        Command::Criticality => sweep(cfg, &s, |t| {
            Ok((
                CriticalityBody {
                    report: t.criticality_report()?,
                },
                true,
            ))
        }),
        Command::Quantize => sweep(cfg, &s, |t| Ok(quantize_all(t))),
        Command::Equivariance => sweep(cfg, &s, |t| Ok(equivariance(t))),
    }
}

fn sweep<T, F>(cfg: &TaskConfig, s: &Setup, body: F) -> Result<(String, bool)>
where
    T: Serialize + Send,
    F: Fn(SymbolTower) -> Result<(T, bool)> + Sync,
{
    let v1 = build_rep(&s.alg, &s.v1)?;
    let entries: Vec<Result<(DeltaEntry<T>, bool)>> = thread_pool().install(|| {
        s.deltas
            .par_iter()
            .map(|delta| {
                let v2d = delta
                    .as_ref()
                    .map_or_else(|| s.v2.clone(), |dl| twist(&s.v2, dl));
                let v2 = build_rep(&s.alg, &v2d)?;
                let tower = SymbolTower::new(&s.alg, &v1, &v2, cfg.k)?;
                let (b, ok) = body(tower)?;
                Ok((
                    DeltaEntry {
                        delta: delta.as_ref().map(scalar::format),
                        v2: v2d.to_string(),
                        body: b,
                    },
                    ok,
                ))
            })
            .collect()
    });
    let mut results = Vec::new();
    let mut passed = true;
    for e in entries {
        let (entry, ok) = e?;
        passed &= ok;
        results.push(entry);
    }
    let report = Report {
        command: cfg.command,
        algebra: s.alg.kind().to_string(),
        v1: s.v1.to_string(),
        v2: s.v2.to_string(),
        k: cfg.k,
        passed,
        results,
    };
    Ok((
        serde_json::to_string_pretty(&report).expect("report serializes"),
        passed,
    ))
}

fn spectrum(t: SymbolTower, k: usize) -> Result<(SpectrumBody, bool)> {
    let mut degrees = Vec::new();
    let mut ok = true;
    for j in 0..=k {
        let identities = t.verify_identities(j);
        ok &= identities.all_passed();
        let m = t.cflat(j);
        let entry = match spectral_split(m) {
            Ok(split) => DegreeSpectrum {
                degree: j,
                dim: m.rows(),
                minimal_polynomial: split.minimal_polynomial.to_string(),
                characteristic_polynomial: split.characteristic_string(),
                squarefree: true,
                components: split
                    .components
                    .iter()
                    .map(|c| ComponentSummary {
                        factor: c.factor.to_string(),
                        eigenvalue: c.eigenvalue.as_ref().map(scalar::format),
                        dim: c.dim(),
                    })
                    .collect(),
                identities,
            },
            Err(Error::NotSemisimple(mp)) => {
                ok = false;
                DegreeSpectrum {
                    degree: j,
                    dim: m.rows(),
                    minimal_polynomial: mp,
                    characteristic_polynomial: String::new(),
                    squarefree: false,
                    components: Vec::new(),
                    identities,
                }
            }
            Err(e) => return Err(e),
        };
        degrees.push(entry);
    }
    Ok((SpectrumBody { degrees }, ok))
}

fn describe_symbol(t: &PolyTensorField) -> String {
    t.terms()
        .iter()
        .map(|(m, v)| {
            let b = v
                .iter()
                .position(|c| !num_traits::Zero::is_zero(c))
                .unwrap_or(0);
            format!("x^[{}] s{}", monomial_key(m), b)
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn quantize_all(t: SymbolTower) -> (QuantizeBody, bool) {
    let k = t.k();
    let q = match Quantizer::new(t) {
        Ok(q) => q,
        Err(e) => {
            return (
                QuantizeBody::Failed {
                    error: e.to_string(),
                },
                false,
            )
        }
    };
    let space = q.tower().space(k);
    let sym = space.sym_dim();
    let mut operators = Vec::new();
    for m in monomials_up_to(space.d(), k as u32) {
        for b in 0..sym {
            let sym_t = PolyTensorField::monomial(m.clone(), crate::linalg::unit_vector(sym, b));
            match q.build_operator(&sym_t) {
                Ok(op) => operators.push(OperatorEntry {
                    monomial: monomial_key(&m),
                    basis_index: b,
                    operator: serde_json::from_str(&op.to_json()).expect("operator json"),
                }),
                Err(e) => {
                    return (
                        QuantizeBody::Failed {
                            error: e.to_string(),
                        },
                        false,
                    )
                }
            }
        }
    }
    (QuantizeBody::Operators { operators }, true)
}

fn equivariance(t: SymbolTower) -> (EquivarianceBody, bool) {
    let k = t.k();
    let alg = t.algebra().clone();
    let ctx = match Quantizer::new(t) {
        Ok(q) => EquivarianceContext::new(q),
        Err(e) => {
            return (
                EquivarianceBody::Failed {
                    error: e.to_string(),
                },
                false,
            )
        }
    };
    let space = ctx.quantizer().tower().space(k);
    let n1 = space.v1().dim();
    let d = alg.d();
    let sections: Vec<PolyTensorField> = monomials_up_to(d, 3)
        .into_iter()
        .flat_map(|m| {
            (0..n1).map(move |c| {
                PolyTensorField::monomial(m.clone(), crate::linalg::unit_vector(n1, c))
            })
        })
        .collect();
    let mut cases = 0;
    let mut failures = Vec::new();
    for sym_t in basis_symbols(space, 2) {
        let op = match ctx.quantizer().build_operator(&sym_t) {
            Ok(op) => op,
            Err(e) => {
                return (
                    EquivarianceBody::Failed {
                        error: e.to_string(),
                    },
                    false,
                )
            }
        };
        for h in 0..alg.dim() {
            let hv = alg.unit(h);
            let op_l = match ctx
                .quantizer()
                .build_operator(&ctx.act_on_symbol(&hv, &sym_t))
            {
                Ok(op) => op,
                Err(e) => {
                    return (
                        EquivarianceBody::Failed {
                            error: e.to_string(),
                        },
                        false,
                    )
                }
            };
            for f in &sections {
                cases += 1;
                match ctx.residual_with(&hv, &op, &op_l, f) {
                    Ok(r) if r.is_zero() => {}
                    _ => failures.push(EquivarianceFailure {
                        h: alg.labels()[h].clone(),
                        symbol: describe_symbol(&sym_t),
                        section: f.to_json(),
                    }),
                }
            }
        }
    }
    let ok = failures.is_empty();
    (EquivarianceBody::Checked { cases, failures }, ok)
}
