//! Weight sequences `w_n > 0`, r-deformed integers and factorials, and the
//! weight family solving the canonical commutation relation.
//!
//! Negative indices evaluate to 1; this matches the convention `θⁿ = 0`,
//! `w_n = 1` for `n < 0` used throughout the projection and Toeplitz formulas.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::qalgebra::DeformationParameter;
use crate::scalar::{parse_scalar, Float, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtensionPolicy {
    /// Indices past the table are an error.
    #[default]
    Strict,
    /// Indices past the table reuse the last entry.
    RepeatLast,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind<S> {
    /// `w_n = n!`
    Factorial,
    /// `w_n = c`
    Constant(S),
    /// `w_n = [n]!_{1/q} · w₀`
    QFactorial { q: S, w0: S },
    Table {
        values: Vec<S>,
        policy: ExtensionPolicy,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence<S> {
    kind: WeightKind<S>,
    label: String,
}

impl<S: Scalar> WeightSequence<S> {
    pub fn factorial() -> Self {
        Self {
            kind: WeightKind::Factorial,
            label: "factorial".into(),
        }
    }

    pub fn constant(c: S) -> Result<Self> {
        if !c.is_positive_real() {
            return Err(Error::NonPositiveWeight {
                index: 0,
                value: c.render(),
            });
        }
        let label = format!("constant:{}", c.render());
        Ok(Self {
            kind: WeightKind::Constant(c),
            label,
        })
    }

    /// Weights `w_k = [k]!_{1/q} · w₀`. Positivity of the deformed integers is
    /// checked when an index is evaluated.
    pub fn q_factorial(q: &DeformationParameter<S>, w0: S) -> Result<Self> {
        if !w0.is_positive_real() {
            return Err(Error::NonPositiveWeight {
                index: 0,
                value: w0.render(),
            });
        }
        let label = format!("qfactorial:q={}:w0={}", q.value().render(), w0.render());
        Ok(Self {
            kind: WeightKind::QFactorial {
                q: q.value().clone(),
                w0,
            },
            label,
        })
    }

    pub fn table(values: Vec<S>, policy: ExtensionPolicy) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::WeightSpec("weight table is empty".into()));
        }
        if let Some((index, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_positive_real())
        {
            return Err(Error::NonPositiveWeight {
                index,
                value: v.render(),
            });
        }
        let body: Vec<String> = values.iter().map(|v| format!("\"{}\"", v.render())).collect();
        let mut label = format!("table:[{}]", body.join(","));
        if policy == ExtensionPolicy::RepeatLast {
            label.push_str(":repeat-last");
        }
        Ok(Self {
            kind: WeightKind::Table { values, policy },
            label,
        })
    }

    /// Parses `factorial`, `constant:<c>`, `qfactorial:q=<q>:w0=<w0>`, or
    /// `table:<path-or-inline-json>[:repeat-last]`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = |why: &str| Error::WeightSpec(format!("`{spec}`: {why}"));
        let mut parsed = if spec == "factorial" {
            Self::factorial()
        } else if let Some(c) = spec.strip_prefix("constant:") {
            Self::constant(parse_scalar(c)?)?
        } else if let Some(rest) = spec.strip_prefix("qfactorial:") {
            let mut q = None;
            let mut w0 = None;
            for part in rest.split(':') {
                match part.split_once('=') {
                    Some(("q", v)) => q = Some(DeformationParameter::parse(v)?),
                    Some(("w0", v)) => w0 = Some(parse_scalar(v)?),
                    _ => return Err(bad("expected q=<value>:w0=<value>")),
                }
            }
            let q = q.ok_or_else(|| bad("missing q"))?;
            let w0 = w0.ok_or_else(|| bad("missing w0"))?;
            Self::q_factorial(&q, w0)?
        } else if let Some(rest) = spec.strip_prefix("table:") {
            let (source, policy) = match rest.strip_suffix(":repeat-last") {
                Some(src) => (src, ExtensionPolicy::RepeatLast),
                None => (rest, ExtensionPolicy::Strict),
            };
            let text = if source.trim_start().starts_with('[') {
                source.to_string()
            } else {
                std::fs::read_to_string(Path::new(source))?
            };
            Self::table(parse_table_json(&text)?, policy)?
        } else {
            return Err(bad("unknown weight family"));
        };
        parsed.label = spec.to_string();
        Ok(parsed)
    }

    pub fn kind(&self) -> &WeightKind<S> {
        &self.kind
    }

    /// The spec string this sequence was parsed from (or an equivalent one).
    pub fn label(&self) -> &str {
        &self.label
    }

    /// `w_n`, with `w_n = 1` for `n < 0`.
    pub fn weight(&self, n: i64) -> Result<S> {
        if n < 0 {
            return Ok(S::one());
        }
        let n = n as usize;
        match &self.kind {
            WeightKind::Constant(c) => Ok(c.clone()),
            WeightKind::Table { .. } => self.table_entry(n),
            _ => Ok(self.upto(n)?.pop().expect("n + 1 entries")),
        }
    }

    /// `[w_0, …, w_n]`.
    pub fn upto(&self, n: usize) -> Result<Vec<S>> {
        match &self.kind {
            WeightKind::Factorial => {
                let mut out = Vec::with_capacity(n + 1);
                let mut acc = S::one();
                out.push(acc.clone());
                for k in 1..=n {
                    acc = acc * S::from_i64(k as i64);
                    out.push(acc.clone());
                }
                Ok(out)
            }
            WeightKind::Constant(c) => Ok(vec![c.clone(); n + 1]),
            WeightKind::QFactorial { q, w0 } => {
                let r = q.inv().ok_or(Error::ZeroDeformation)?;
                let mut out = Vec::with_capacity(n + 1);
                let mut acc = w0.clone();
                let mut bracket = S::zero();
                out.push(acc.clone());
                for k in 1..=n {
                    // [k]_r = 1 + r [k-1]_r
                    bracket = S::one() + r.clone() * bracket;
                    if !bracket.is_positive_real() {
                        return Err(Error::NonPositiveWeight {
                            index: k,
                            value: (acc * bracket).render(),
                        });
                    }
                    acc = acc * bracket.clone();
                    out.push(acc.clone());
                }
                Ok(out)
            }
            WeightKind::Table { .. } => (0..=n).map(|k| self.table_entry(k)).collect(),
        }
    }

    fn table_entry(&self, n: usize) -> Result<S> {
        let WeightKind::Table { values, policy } = &self.kind else {
            unreachable!("table_entry on non-table weights");
        };
        match values.get(n) {
            Some(v) => Ok(v.clone()),
            None if *policy == ExtensionPolicy::RepeatLast => {
                Ok(values.last().expect("nonempty table").clone())
            }
            None => Err(Error::WeightOutOfRange {
                index: n,
                len: values.len(),
            }),
        }
    }

    /// `[a]_w = w_a / w_{a-1}` for `a ≥ 1`, and `[0]_w = 0`.
    pub fn deformed_int(&self, a: usize) -> Result<S> {
        if a == 0 {
            return Ok(S::zero());
        }
        Ok(self.weight(a as i64)? / self.weight(a as i64 - 1)?)
    }

    /// The same rule evaluated in double precision.
    pub fn to_float(&self) -> WeightSequence<Float> {
        let kind = match &self.kind {
            WeightKind::Factorial => WeightKind::Factorial,
            WeightKind::Constant(c) => WeightKind::Constant(c.to_c64()),
            WeightKind::QFactorial { q, w0 } => WeightKind::QFactorial {
                q: q.to_c64(),
                w0: w0.to_c64(),
            },
            WeightKind::Table { values, policy } => WeightKind::Table {
                values: values.iter().map(Scalar::to_c64).collect(),
                policy: *policy,
            },
        };
        WeightSequence {
            kind,
            label: self.label.clone(),
        }
    }
}

impl<S: Scalar> fmt::Display for WeightSequence<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn parse_table_json<S: Scalar>(text: &str) -> Result<Vec<S>> {
    let raw: Vec<serde_json::Value> = serde_json::from_str(text)?;
    raw.iter()
        .map(|v| match v {
            serde_json::Value::String(s) => parse_scalar(s),
            serde_json::Value::Number(n) => parse_scalar(&n.to_string()),
            other => Err(Error::WeightSpec(format!("table entry {other} is not a number"))),
        })
        .collect()
}

/// `[n]_r = 1 + r + … + r^{n-1}`, with `[0]_r = 0`. Summed term by term so
/// `r = 1` needs no special case.
pub fn deformed_int<S: Scalar>(r: &S, n: u32) -> S {
    let mut acc = S::zero();
    let mut power = S::one();
    for _ in 0..n {
        acc = acc + power.clone();
        power = power * r.clone();
    }
    acc
}

/// `[n]!_r = [n]_r [n-1]_r ⋯ [1]_r`, with `[0]!_r = 1`.
pub fn deformed_factorial<S: Scalar>(r: &S, n: u32) -> S {
    (1..=n).fold(S::one(), |acc, k| acc * deformed_int(r, k))
}

/// The weights for which `T_θ̄ T_θ − q⁻¹ T_θ T_θ̄ = I`.
pub fn ccr_weights<S: Scalar>(q: &DeformationParameter<S>, w0: S) -> Result<WeightSequence<S>> {
    WeightSequence::q_factorial(q, w0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> Exact {
        Exact::from_rational(&BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn factorial_and_negative_indices() {
        let w = WeightSequence::<Exact>::factorial();
        assert_eq!(w.weight(4).unwrap(), rat(24, 1));
        assert_eq!(w.weight(-3).unwrap(), Exact::one());
        let c = WeightSequence::constant(rat(5, 2)).unwrap();
        assert_eq!(c.weight(-1).unwrap(), Exact::one());
        assert_eq!(c.weight(9).unwrap(), rat(5, 2));
    }

    #[test]
    fn deformed_integer_examples() {
        let r = rat(3, 7);
        assert_eq!(deformed_int(&r, 2), Exact::one() + r.clone());
        assert_eq!(deformed_int(&Exact::one(), 7), rat(7, 1));
        assert_eq!(deformed_int(&rat(1, 2), 3), rat(7, 4));
        assert_eq!(deformed_int(&r, 0), Exact::zero());
    }

    #[test]
    fn deformed_factorial_examples() {
        assert_eq!(deformed_factorial(&Exact::one(), 5), rat(120, 1));
        let r = rat(-2, 9);
        assert_eq!(deformed_factorial(&r, 2), Exact::one() + r);
        assert_eq!(deformed_factorial(&rat(1, 2), 3), rat(21, 8));
        assert_eq!(deformed_factorial(&rat(1, 2), 0), Exact::one());
    }

    #[test]
    fn ccr_weight_examples() {
        let one = DeformationParameter::new(Exact::one()).unwrap();
        let w = ccr_weights(&one, Exact::one()).unwrap();
        let fact = WeightSequence::<Exact>::factorial();
        assert_eq!(w.upto(12).unwrap(), fact.upto(12).unwrap());

        let half = DeformationParameter::new(rat(1, 2)).unwrap();
        let w = ccr_weights(&half, Exact::one()).unwrap();
        assert_eq!(
            w.upto(3).unwrap(),
            vec![rat(1, 1), rat(1, 1), rat(3, 1), rat(21, 1)]
        );
    }

    #[test]
    fn ccr_recursion_three_quarters() {
        let q = DeformationParameter::new(rat(3, 4)).unwrap();
        let w = ccr_weights(&q, Exact::one()).unwrap();
        for a in 0..=20 {
            let lhs = w.deformed_int(a + 1).unwrap() - q.inverse().clone() * w.deformed_int(a).unwrap();
            assert_eq!(lhs, Exact::one(), "a = {a}");
        }
    }

    #[test]
    fn q_minus_one_violates_positivity() {
        let q = DeformationParameter::new(rat(-1, 1)).unwrap();
        let w = ccr_weights(&q, Exact::one()).unwrap();
        assert!(w.weight(1).is_ok());
        assert!(matches!(
            w.weight(2),
            Err(Error::NonPositiveWeight { index: 2, .. })
        ));
    }

    #[test]
    fn table_policies() {
        let strict = WeightSequence::table(vec![rat(1, 1), rat(2, 1)], ExtensionPolicy::Strict).unwrap();
        assert!(matches!(strict.weight(2), Err(Error::WeightOutOfRange { index: 2, len: 2 })));
        let rep = WeightSequence::<Exact>::parse("table:[1,2,1]:repeat-last").unwrap();
        assert_eq!(rep.weight(7).unwrap(), Exact::one());
        assert_eq!(rep.weight(1).unwrap(), rat(2, 1));
        assert!(WeightSequence::<Exact>::parse("table:[1,0]").is_err());
        assert!(WeightSequence::<Exact>::parse("table:[]").is_err());
    }

    #[test]
    fn table_from_file() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        std::io::Write::write_all(&mut file, br#"["1", "3/2", 4]"#).unwrap();
        let spec = format!("table:{}", file.path().display());
        let w = WeightSequence::<Exact>::parse(&spec).unwrap();
        assert_eq!(w.upto(2).unwrap(), vec![rat(1, 1), rat(3, 2), rat(4, 1)]);
        assert_eq!(w.label(), spec);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(
            WeightSequence::<Exact>::parse("constant:3/2").unwrap().weight(5).unwrap(),
            rat(3, 2)
        );
        let w = WeightSequence::<Exact>::parse("qfactorial:q=1/2:w0=1").unwrap();
        assert_eq!(w.weight(3).unwrap(), rat(21, 1));
        assert!(WeightSequence::<Exact>::parse("constant:-1").is_err());
        assert!(WeightSequence::<Exact>::parse("bogus").is_err());
        assert!(WeightSequence::<Exact>::parse("qfactorial:q=0:w0=1").is_err());
    }
}
