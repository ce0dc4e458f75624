//! JSON form of elements:
//! `{"q": "<scalar>", "terms": [{"j": 1, "k": 0, "re": "3/4", "im": "0"}]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::qalgebra::{DeformationParameter, Element, Monomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub q: String,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub j: u32,
    pub k: u32,
    pub re: String,
    pub im: String,
}

impl ElementJson {
    pub fn from_element<S: Scalar>(e: &Element<S>) -> Self {
        Self {
            q: e.q().value().render(),
            terms: e
                .terms()
                .map(|(m, c)| {
                    let (re, im) = c.render_parts();
                    TermJson { j: m.j, k: m.k, re, im }
                })
                .collect(),
        }
    }

    pub fn to_element<S: Scalar>(&self) -> Result<Element<S>> {
        let q = DeformationParameter::parse(&self.q)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let c = S::parse_real(&t.re)? + S::parse_real(&t.im)? * S::i();
            terms.push((Monomial::new(t.j, t.k), c));
        }
        Ok(Element::from_terms(q, terms))
    }
}

pub fn element_to_json<S: Scalar>(e: &Element<S>) -> Value {
    serde_json::to_value(ElementJson::from_element(e)).expect("plain struct serializes")
}

pub fn element_from_json<S: Scalar>(v: &Value) -> Result<Element<S>> {
    let parsed: ElementJson = serde_json::from_value(v.clone())?;
    parsed.to_element()
}

pub fn element_from_json_str<S: Scalar>(text: &str) -> Result<Element<S>> {
    let parsed: ElementJson = serde_json::from_str(text)?;
    parsed.to_element()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, Float};
    use num_rational::BigRational;

    #[test]
    fn exact_round_trip() {
        let q = DeformationParameter::new(
            Exact::from_rational(&BigRational::new(3.into(), 1.into())) + Exact::i(),
        )
        .unwrap();
        let e = Element::from_terms(
            q,
            [
                (Monomial::new(2, 1), Exact::from_rational(&BigRational::new((-3).into(), 4.into()))),
                (Monomial::new(0, 0), Exact::i()),
            ],
        );
        let v = element_to_json(&e);
        assert_eq!(v["q"], "(3+i)");
        assert_eq!(element_from_json::<Exact>(&v).unwrap(), e);
    }

    #[test]
    fn float_round_trip() {
        let q = DeformationParameter::new(Float::new(0.75, 0.0)).unwrap();
        let e = Element::from_terms(q, [(Monomial::new(1, 1), Float::new(0.1, -2.5e-7))]);
        let text = serde_json::to_string(&element_to_json(&e)).unwrap();
        assert_eq!(element_from_json_str::<Float>(&text).unwrap(), e);
    }

    #[test]
    fn float_json_rejected_by_exact_backend() {
        let text = r#"{"q":"0.5","terms":[]}"#;
        assert!(element_from_json_str::<Exact>(text).is_err());
    }
}
