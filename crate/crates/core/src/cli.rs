//! Command-line front end. `main.rs` only parses arguments and maps errors to
//! exit codes; everything else lives here so it can be driven from tests.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bargmann::{project_k, TruncationDim};
use crate::error::{Error, Result};
use crate::expr::parse_element;
use crate::pairing::{definiteness_probe, gram, inner, nondegeneracy_scan, Verdict};
use crate::qalgebra::{star_antihom_probe, DeformationParameter, Element};
use crate::scalar::{parse_scalar, Backend, Exact, Float, Scalar};
use crate::serial::element_to_json;
use crate::toeplitz::{
    adjoint, ccr_residual, compactness_probe, compose, norm_bound_monomial, q_commutator,
    toeplitz, TruncatedOperator,
};
use crate::weights::WeightSequence;

/// Largest truncation dimension accepted on the command line.
pub const MAX_DIM: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "qplane", version, about = "Arithmetic, pairings and Toeplitz operators on the complex quantum plane")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, env = "QPLANE_FORMAT", value_enum, default_value = "human")]
    pub format: Format,

    /// Deformation parameter. A rational such as `3/4` or `1+2i` selects exact
    /// arithmetic; a decimal such as `0.75` selects floating point.
    #[arg(long, global = true, default_value = "1", allow_hyphen_values = true)]
    pub q: String,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct WeightsArg {
    /// factorial | constant:<c> | qfactorial:q=<r>:w0=<r> | table:<path or JSON array>[:repeat-last]
    #[arg(long)]
    pub weights: String,
}

#[derive(Debug, Args)]
pub struct DimArg {
    /// Truncation dimension N.
    #[arg(long)]
    pub dim: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Product of two or more elements, left to right.
    Mul {
        #[arg(required = true, num_args = 2..)]
        factors: Vec<String>,
    },
    /// Involution; with a second element, checks (fg)* = g* f*.
    Star {
        #[arg(allow_hyphen_values = true)]
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: Option<String>,
    },
    /// Weighted pairing ⟨f, g⟩, anti-linear in f.
    Inner {
        #[command(flatten)]
        weights: WeightsArg,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Gram matrix of the given elements.
    Gram {
        #[command(flatten)]
        weights: WeightsArg,
        #[arg(required = true)]
        elements: Vec<String>,
    },
    /// Projection onto holomorphic polynomials.
    Project {
        #[command(flatten)]
        weights: WeightsArg,
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Truncated Toeplitz matrix of a symbol. CSV output lists diagonals.
    Toeplitz {
        #[command(flatten)]
        weights: WeightsArg,
        #[command(flatten)]
        dim: DimArg,
        #[arg(allow_hyphen_values = true)]
        symbol: String,
    },
    /// T_f T_g, or the commutator T_f T_g − r T_g T_f with --commutator r.
    Compose {
        #[command(flatten)]
        weights: WeightsArg,
        #[command(flatten)]
        dim: DimArg,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        commutator: Option<String>,
    },
    /// Adjoint of a truncated Toeplitz matrix, compared with T of the starred symbol.
    Adjoint {
        #[command(flatten)]
        weights: WeightsArg,
        #[command(flatten)]
        dim: DimArg,
        #[arg(allow_hyphen_values = true)]
        symbol: String,
    },
    /// Residual of [T_tb, T_t]_{1/q} = I under the weights [k]!_{1/q} w0.
    CcrCheck {
        #[arg(long, default_value = "1")]
        w0: String,
        #[command(flatten)]
        dim: DimArg,
    },
    /// Hankel rank scan for degeneracy of the pairing.
    Degeneracy {
        #[command(flatten)]
        weights: WeightsArg,
        /// Largest sector index m.
        #[arg(long)]
        mmax: u32,
        /// Largest Hankel block size R.
        #[arg(long)]
        rmax: u32,
        /// Columns examined before a kernel vector counts as a witness.
        #[arg(long)]
        smax: u32,
    },
    /// Least Gram eigenvalue over monomials of bounded maxdeg.
    Definiteness {
        #[command(flatten)]
        weights: WeightsArg,
        /// Bound on max(j, k) for the monomials t^j tb^k.
        #[arg(long)]
        maxdeg: u32,
    },
    /// Weighted-shift coefficients and a norm verdict for T of t^i tb^j.
    Norm {
        #[command(flatten)]
        weights: WeightsArg,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
        #[arg(long, default_value_t = 64)]
        amax: usize,
    },
    /// Compactness verdict for T of t^i tb^j.
    Compact {
        #[command(flatten)]
        weights: WeightsArg,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
        #[arg(long, default_value_t = 64)]
        amax: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match Backend::detect(&cli.q) {
        Backend::Exact => Runner::<Exact>::new(cli)?.run(out),
        Backend::Float => Runner::<Float>::new(cli)?.run(out),
    }
}

/// Structured form of an error, as printed on stderr.
pub fn error_report(err: &Error, format: Format) -> String {
    match format {
        Format::Json => json!({"error": {"kind": err.kind(), "message": err.to_string()}}).to_string(),
        _ => format!("qplane: error[{}]: {err}", err.kind()),
    }
}

struct Runner<'a, S> {
    cli: &'a Cli,
    q: DeformationParameter<S>,
}

impl<'a, S: Scalar> Runner<'a, S> {
    fn new(cli: &'a Cli) -> Result<Self> {
        Ok(Self {
            cli,
            q: DeformationParameter::parse(&cli.q)?,
        })
    }

    fn elem(&self, text: &str) -> Result<Element<S>> {
        parse_element(text, &self.q)
    }

    fn run(&self, out: &mut dyn Write) -> Result<()> {
        let fmt = self.cli.format;
        match &self.cli.command {
            Command::Mul { factors } => {
                let mut acc = self.elem(&factors[0])?;
                for f in &factors[1..] {
                    acc = acc.try_mul(&self.elem(f)?)?;
                }
                emit_element(out, fmt, &acc)
            }
            Command::Star { f, g: None } => emit_element(out, fmt, &self.elem(f)?.star()),
            Command::Star { f, g: Some(g) } => {
                let holds = star_antihom_probe(&self.elem(f)?, &self.elem(g)?)?;
                match fmt {
                    Format::Json => line(out, json!({ "antihomomorphic": holds })),
                    Format::Csv => line(out, format!("antihomomorphic\n{holds}")),
                    Format::Human => line(out, holds),
                }
            }
            Command::Inner { weights, f, g } => {
                let w = weights_of(weights)?;
                let v = inner(&self.elem(f)?, &self.elem(g)?, &w)?;
                emit_scalar(out, fmt, "value", &v)
            }
            Command::Gram { weights, elements } => {
                let w = weights_of(weights)?;
                let basis = elements.iter().map(|e| self.elem(e)).collect::<Result<Vec<_>>>()?;
                let g = gram(&basis, &w)?;
                emit_matrix(out, fmt, &g)
            }
            Command::Project { weights, f } => {
                let w = weights_of(weights)?;
                emit_element(out, fmt, &project_k(&self.elem(f)?, &w)?)
            }
            Command::Toeplitz { weights, dim, symbol } => {
                let w = weights_of(weights)?;
                let t = toeplitz(&self.elem(symbol)?, &w, dim_of(dim)?)?;
                emit_operator(out, fmt, &t, json!({}))
            }
            Command::Compose {
                weights,
                dim,
                f,
                g,
                commutator,
            } => {
                let w = weights_of(weights)?;
                let n = dim_of(dim)?;
                let tf = toeplitz(&self.elem(f)?, &w, n)?;
                let tg = toeplitz(&self.elem(g)?, &w, n)?;
                let t = match commutator {
                    Some(r) => q_commutator(&tf, &tg, &parse_scalar::<S>(r)?)?,
                    None => compose(&tf, &tg)?,
                };
                let extra = json!({ "interior_columns": t.interior_columns() });
                emit_operator(out, fmt, &t, extra)
            }
            Command::Adjoint { weights, dim, symbol } => {
                let w = weights_of(weights)?;
                let n = dim_of(dim)?;
                let g = self.elem(symbol)?;
                let t = toeplitz(&g, &w, n)?;
                let adj = adjoint(&t);
                let direct = toeplitz(&g.star(), &w, n)?;
                let agrees = adj.coeffs() == direct.coeffs();
                emit_operator(out, fmt, &adj, json!({ "matches_star_symbol": agrees }))
            }
            Command::CcrCheck { w0, dim } => {
                let r = ccr_residual(&self.q, parse_scalar::<S>(w0)?, dim_of(dim)?)?;
                emit_scalar(out, fmt, "residual", &r.residual)
            }
            Command::Degeneracy {
                weights,
                mmax,
                rmax,
                smax,
            } => {
                let w = weights_of::<S>(weights)?;
                let report = nondegeneracy_scan(&w, *mmax, *rmax, *smax)?;
                for warn in &report.warnings {
                    eprintln!("qplane: warning: {warn}");
                }
                match fmt {
                    Format::Json => line(out, report.to_json()),
                    _ => {
                        let mut rows = vec![vec![
                            "m".to_string(),
                            "R".into(),
                            "verdict".into(),
                            "horizon".into(),
                            "witness".into(),
                        ]];
                        for e in &report.results {
                            let (verdict, horizon, witness) = match &e.verdict {
                                Verdict::CertifiedNondegenerate => {
                                    ("CERTIFIED_NONDEGENERATE", *smax, String::new())
                                }
                                Verdict::CandidateWitness { witness, horizon } => (
                                    "CANDIDATE_WITNESS",
                                    *horizon,
                                    witness.iter().map(Scalar::render).collect::<Vec<_>>().join(" "),
                                ),
                            };
                            rows.push(vec![
                                e.m.to_string(),
                                e.r.to_string(),
                                verdict.into(),
                                horizon.to_string(),
                                witness,
                            ]);
                        }
                        emit_rows(out, fmt, &rows)
                    }
                }
            }
            Command::Definiteness { weights, maxdeg } => {
                let w = weights_of::<S>(weights)?;
                let rep = definiteness_probe(&w, *maxdeg)?;
                let (witness, pairing) = match &rep.indefinite_witness {
                    Some((f, p)) => (Some(f), Some(*p)),
                    None => (None, None),
                };
                match fmt {
                    Format::Json => line(
                        out,
                        json!({
                            "max_degree": rep.max_degree,
                            "dim": rep.basis.len(),
                            "min_eigenvalue": rep.min_eigenvalue,
                            "witness": witness.map(element_to_json),
                            "witness_self_pairing": pairing,
                        }),
                    ),
                    Format::Csv => line(
                        out,
                        format!(
                            "max_degree,dim,min_eigenvalue,witness_self_pairing\n{},{},{:e},{}",
                            rep.max_degree,
                            rep.basis.len(),
                            rep.min_eigenvalue,
                            pairing.map(|p| format!("{p:e}")).unwrap_or_default()
                        ),
                    ),
                    Format::Human => {
                        writeln!(out, "basis size      {}", rep.basis.len())?;
                        writeln!(out, "min eigenvalue  {}", rep.min_eigenvalue)?;
                        if let (Some(f), Some(p)) = (witness, pairing) {
                            writeln!(out, "witness         {f}")?;
                            writeln!(out, "<f, f>          {p}")?;
                        }
                        Ok(())
                    }
                }
            }
            Command::Norm {
                weights,
                i,
                j,
                amax,
            } => {
                let w = weights_of::<S>(weights)?;
                let nb = norm_bound_monomial(*i, *j, &w, *amax)?;
                let c = &nb.coefficients;
                match fmt {
                    Format::Json => line(
                        out,
                        json!({
                            "i": i,
                            "j": j,
                            "a_max": amax,
                            "verdict": nb.verdict.as_str(),
                            "sup_estimate": nb.sup_estimate,
                            "attained_at": nb.attained_at,
                            "c": c.values,
                            "c_squared": c.squared.iter().map(Scalar::render).collect::<Vec<_>>(),
                        }),
                    ),
                    _ => {
                        if fmt == Format::Human {
                            writeln!(out, "verdict {}", nb.verdict.as_str())?;
                            writeln!(out, "sup     {} (a = {})", nb.sup_estimate, nb.attained_at)?;
                        }
                        let mut rows = vec![vec!["a".to_string(), "c_a".into(), "c_a^2".into()]];
                        for (a, (v, sq)) in c.values.iter().zip(&c.squared).enumerate() {
                            rows.push(vec![a.to_string(), v.to_string(), sq.render()]);
                        }
                        emit_rows(out, fmt, &rows)
                    }
                }
            }
            Command::Compact {
                weights,
                i,
                j,
                amax,
                tol,
            } => {
                let w = weights_of::<S>(weights)?;
                let v = compactness_probe(*i, *j, &w, *amax, *tol)?;
                match fmt {
                    Format::Json => line(out, json!({ "verdict": v.as_str(), "tol": tol, "a_max": amax })),
                    Format::Csv => line(out, format!("verdict\n{}", v.as_str())),
                    Format::Human => line(out, v.as_str()),
                }
            }
        }
    }
}

fn weights_of<S: Scalar>(arg: &WeightsArg) -> Result<WeightSequence<S>> {
    WeightSequence::parse(&arg.weights)
}

fn dim_of(arg: &DimArg) -> Result<TruncationDim> {
    if arg.dim > MAX_DIM {
        return Err(Error::Domain(format!(
            "truncation dimension {} exceeds the limit {MAX_DIM}",
            arg.dim
        )));
    }
    TruncationDim::new(arg.dim)
}

fn line(out: &mut dyn Write, v: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{v}")?;
    Ok(())
}

fn emit_scalar<S: Scalar>(out: &mut dyn Write, fmt: Format, key: &str, v: &S) -> Result<()> {
    match fmt {
        Format::Json => line(out, json!({ key: v.render() })),
        Format::Csv => line(out, format!("{key}\n{}", v.render())),
        Format::Human => line(out, v.render()),
    }
}

fn emit_element<S: Scalar>(out: &mut dyn Write, fmt: Format, e: &Element<S>) -> Result<()> {
    match fmt {
        Format::Json => line(out, element_to_json(e)),
        Format::Csv => {
            let mut rows = vec![vec!["j".to_string(), "k".into(), "re".into(), "im".into()]];
            for (m, c) in e.terms() {
                let (re, im) = c.render_parts();
                rows.push(vec![m.j.to_string(), m.k.to_string(), re, im]);
            }
            emit_rows(out, fmt, &rows)
        }
        Format::Human => line(out, e),
    }
}

fn emit_matrix<S: Scalar>(out: &mut dyn Write, fmt: Format, m: &[Vec<S>]) -> Result<()> {
    let cells: Vec<Vec<String>> = m
        .iter()
        .map(|row| row.iter().map(Scalar::render).collect())
        .collect();
    match fmt {
        Format::Json => line(out, json!({ "matrix": cells })),
        _ => emit_rows(out, fmt, &cells),
    }
}

/// Human output shows `φ`-basis entries as `c√r`; JSON carries both bases;
/// CSV lists the nonzero diagonals.
fn emit_operator<S: Scalar>(
    out: &mut dyn Write,
    fmt: Format,
    t: &TruncatedOperator<S>,
    extra: Value,
) -> Result<()> {
    match fmt {
        Format::Json => {
            let mut v = t.to_json();
            if let (Some(obj), Value::Object(more)) = (v.as_object_mut(), extra) {
                obj.extend(more);
            }
            line(out, v)
        }
        Format::Csv => {
            let mut rows = vec![vec!["offset".to_string(), "column".into(), "re".into(), "im".into()]];
            for (off, col, z) in t.diagonals() {
                rows.push(vec![off.to_string(), col.to_string(), z.re.to_string(), z.im.to_string()]);
            }
            emit_rows(out, fmt, &rows)
        }
        Format::Human => {
            if let Value::Object(more) = extra {
                for (k, v) in more {
                    writeln!(out, "{k}: {v}")?;
                }
            }
            let n = t.dim();
            let cells: Vec<Vec<String>> = (0..n)
                .map(|b| (0..n).map(|a| surd(t, b, a)).collect())
                .collect();
            emit_rows(out, fmt, &cells)
        }
    }
}

fn surd<S: Scalar>(t: &TruncatedOperator<S>, b: usize, a: usize) -> String {
    let e = t.phi_entry_exact(b, a);
    if e.coeff.is_zero() {
        return "0".into();
    }
    if e.coeff.is_real() {
        // Fold the coefficient under the root: c√r = ±√(c²r).
        let sign = if e.coeff.is_positive_real() { "" } else { "-" };
        let sq = e.squared();
        return match sq.real_sqrt() {
            Some(r) => format!("{sign}{}", r.render()),
            None => format!("{sign}{}", root(&sq)),
        };
    }
    if e.radicand == S::one() {
        return e.coeff.render();
    }
    format!("{}{}", e.coeff.render(), root(&e.radicand))
}

fn root<S: Scalar>(v: &S) -> String {
    let r = v.render();
    if r.bytes().all(|c| c.is_ascii_digit()) {
        format!("√{r}")
    } else {
        format!("√({r})")
    }
}

fn emit_rows(out: &mut dyn Write, fmt: Format, rows: &[Vec<String>]) -> Result<()> {
    if fmt == Format::Csv {
        for r in rows {
            writeln!(out, "{}", r.join(","))?;
        }
        return Ok(());
    }
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for r in rows {
        let padded: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect();
        writeln!(out, "{}", padded.join("  ").trim_end())?;
    }
    Ok(())
}
