//! Arithmetic in the complex quantum plane: the free algebra on `θ`, `θ̄`
//! modulo `θθ̄ = q θ̄θ`.
//!
//! Elements are stored in anti-Wick order (every `θ` left of every `θ̄`), so
//! the monomials `θʲθ̄ᵏ` form a basis and equality of elements is equality of
//! their coefficient maps.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The deformation parameter `q ≠ 0`, with its inverse cached.
#[derive(Debug, Clone)]
pub struct DeformationParameter<S> {
    q: S,
    q_inv: S,
}

impl<S: Scalar> DeformationParameter<S> {
    pub fn new(q: S) -> Result<Self> {
        let q_inv = q.inv().ok_or(Error::ZeroDeformation)?;
        Ok(Self { q, q_inv })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(crate::scalar::parse_scalar(text)?)
    }

    pub fn value(&self) -> &S {
        &self.q
    }

    pub fn inverse(&self) -> &S {
        &self.q_inv
    }

    /// `q^{-n}`.
    pub fn inverse_pow(&self, n: u64) -> S {
        self.q_inv.pow(n)
    }
}

impl<S: Scalar> PartialEq for DeformationParameter<S> {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl<S: Scalar> fmt::Display for DeformationParameter<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.q.render())
    }
}

/// Anti-Wick basis element `θʲθ̄ᵏ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub j: u32,
    pub k: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { j: 0, k: 0 };
    pub const THETA: Monomial = Monomial { j: 1, k: 0 };
    pub const THETA_BAR: Monomial = Monomial { j: 0, k: 1 };

    pub const fn new(j: u32, k: u32) -> Self {
        Self { j, k }
    }

    /// Sector index `j - k`.
    pub fn sector(self) -> i64 {
        self.j as i64 - self.k as i64
    }

    pub fn maxdeg(self) -> u32 {
        self.j.max(self.k)
    }

    /// The conjugate basis element `θᵏθ̄ʲ`.
    pub fn star(self) -> Self {
        Self {
            j: self.k,
            k: self.j,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.j {
            0 => {}
            1 => parts.push("t".to_string()),
            j => parts.push(format!("t^{j}")),
        }
        match self.k {
            0 => {}
            1 => parts.push("tb".to_string()),
            k => parts.push(format!("tb^{k}")),
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// `(θᵃθ̄ᵇ)(θᶜθ̄ᵈ) = q^{-bc} θ^{a+c} θ̄^{b+d}`: each of the `b·c` transpositions
/// `θ̄θ → q⁻¹θθ̄` contributes one factor of `q⁻¹`.
pub fn mul_monomials<S: Scalar>(
    a: Monomial,
    b: Monomial,
    q: &DeformationParameter<S>,
) -> (S, Monomial) {
    let swaps = a.k as u64 * b.j as u64;
    (q.inverse_pow(swaps), Monomial::new(a.j + b.j, a.k + b.k))
}

/// A finite linear combination of anti-Wick monomials.
///
/// No stored coefficient is zero; the zero element has no terms.
#[derive(Debug, Clone)]
pub struct Element<S> {
    terms: BTreeMap<Monomial, S>,
    q: DeformationParameter<S>,
}

impl<S: Scalar> PartialEq for Element<S> {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.terms == other.terms
    }
}

impl<S: Scalar> Element<S> {
    pub fn zero(q: DeformationParameter<S>) -> Self {
        Self {
            terms: BTreeMap::new(),
            q,
        }
    }

    pub fn one(q: DeformationParameter<S>) -> Self {
        Self::monomial(q, Monomial::ONE, S::one())
    }

    pub fn monomial(q: DeformationParameter<S>, m: Monomial, coeff: S) -> Self {
        let mut e = Self::zero(q);
        e.add_term(m, coeff);
        e
    }

    /// Builds an element from possibly repeated, possibly zero terms.
    pub fn from_terms(
        q: DeformationParameter<S>,
        terms: impl IntoIterator<Item = (Monomial, S)>,
    ) -> Self {
        let mut e = Self::zero(q);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    fn add_term(&mut self, m: Monomial, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(prev) => {
                let sum = prev + coeff;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, coeff);
            }
        }
    }

    pub fn q(&self) -> &DeformationParameter<S> {
        &self.q
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &S)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Monomial) -> S {
        self.terms.get(&m).cloned().unwrap_or_else(S::zero)
    }

    /// Largest `max(j, k)` over the support; 0 for the zero element.
    pub fn maxdeg(&self) -> u32 {
        self.terms.keys().map(|m| m.maxdeg()).max().unwrap_or(0)
    }

    /// True iff no term carries a power of `θ̄`.
    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|m| m.k == 0)
    }

    fn check_q(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(Error::DeformationMismatch {
                left: self.q.to_string(),
                right: other.q.to_string(),
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(
            self.q.clone(),
            self.terms.iter().map(|(m, v)| (*m, c.clone() * v.clone())),
        )
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_q(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-S::one()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_q(other)?;
        let mut out = Self::zero(self.q.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let (factor, m) = mul_monomials(*ma, *mb, &self.q);
                out.add_term(m, factor * ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// `(θʲθ̄ᵏ)* = θᵏθ̄ʲ`, extended anti-linearly.
    pub fn star(&self) -> Self {
        Self::from_terms(
            self.q.clone(),
            self.terms.iter().map(|(m, c)| (m.star(), c.conj())),
        )
    }
}

pub fn mul<S: Scalar>(f: &Element<S>, g: &Element<S>) -> Result<Element<S>> {
    f.try_mul(g)
}

pub fn star<S: Scalar>(f: &Element<S>) -> Element<S> {
    f.star()
}

/// `Σ cᵢ fᵢ`. An empty list has no `q` to inherit and is rejected.
pub fn lincomb<S: Scalar>(pairs: &[(S, Element<S>)]) -> Result<Element<S>> {
    let (_, first) = pairs
        .first()
        .ok_or_else(|| Error::Domain("lincomb needs at least one term".into()))?;
    let mut out = Element::zero(first.q.clone());
    for (c, f) in pairs {
        out = out.try_add(&f.scale(c))?;
    }
    Ok(out)
}

/// Tests `(fg)* = g* f*` for one pair.
pub fn star_antihom_probe<S: Scalar>(f: &Element<S>, g: &Element<S>) -> Result<bool> {
    let lhs = f.try_mul(g)?.star();
    let rhs = g.star().try_mul(&f.star())?;
    Ok(lhs == rhs)
}

impl<S: Scalar> fmt::Display for Element<S> {
    /// Renders in the textual grammar accepted by [`crate::expr::parse_element`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mut coeff = c.render();
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            if *m == Monomial::ONE {
                f.write_str(&coeff)?;
            } else if coeff == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{coeff} {m}")?;
            }
        }
        Ok(())
    }
}
