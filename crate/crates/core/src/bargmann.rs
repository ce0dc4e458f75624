//! The holomorphic subspace `Pre(θ)`, its orthonormal basis
//! `φ_j = w_j^{-1/2} θʲ`, and the reproducing-kernel projection `P_K`.
//!
//! The kernel itself is an infinite series and is never stored; only its
//! action `P_K(θᵃθ̄ᵇ) = (w_a / w_{a−b}) θ^{a−b}` (zero when `a < b`) is.

use crate::error::{Error, Result};
use crate::qalgebra::{DeformationParameter, Element, Monomial};
use crate::scalar::{Float, Scalar};
use crate::weights::WeightSequence;

/// Truncation dimension `N ≥ 1`: operators act on `span{φ_0, …, φ_{N−1}}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruncationDim(usize);

impl TruncationDim {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("truncation dimension must be at least 1".into()));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// Coefficients of `Σ c_a φ_a`, `a < N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coeffs: Vec<Float>,
    weights: String,
}

impl FockVector {
    pub fn new(coeffs: Vec<Float>, weights: &WeightSequence<impl Scalar>) -> Result<Self> {
        TruncationDim::new(coeffs.len())?;
        Ok(Self {
            coeffs,
            weights: weights.label().to_string(),
        })
    }

    /// `φ_a` in dimension `dim`.
    pub fn basis(a: usize, dim: TruncationDim, weights: &WeightSequence<impl Scalar>) -> Result<Self> {
        if a >= dim.get() {
            return Err(Error::Domain(format!("basis index {a} outside dimension {}", dim.get())));
        }
        let mut coeffs = vec![Float::zero(); dim.get()];
        coeffs[a] = Float::one();
        Self::new(coeffs, weights)
    }

    pub(crate) fn from_parts(coeffs: Vec<Float>, weights: String) -> Self {
        Self { coeffs, weights }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    pub fn weights_label(&self) -> &str {
        &self.weights
    }

    /// The represented polynomial `Σ c_a w_a^{-1/2} θᵃ`.
    pub fn to_element<S: Scalar>(
        &self,
        w: &WeightSequence<S>,
        q: &DeformationParameter<Float>,
    ) -> Result<Element<Float>> {
        let weights = w.upto(self.dim() - 1)?;
        Ok(Element::from_terms(
            q.clone(),
            self.coeffs.iter().zip(weights).enumerate().map(|(a, (c, wa))| {
                (Monomial::new(a as u32, 0), c / wa.to_c64().sqrt())
            }),
        ))
    }
}

/// `φ_j = w_j^{-1/2} θʲ`; the square root forces the float backend.
pub fn phi<S: Scalar>(
    j: u32,
    w: &WeightSequence<S>,
    q: &DeformationParameter<Float>,
) -> Result<Element<Float>> {
    let wj = w.weight(j as i64)?.to_c64();
    Ok(Element::monomial(q.clone(), Monomial::new(j, 0), wj.sqrt().inv()))
}

/// `(w_j, θʲ)`, from which `φ_j = w_j^{-1/2} θʲ` without leaving the backend.
pub fn phi_exact<S: Scalar>(j: u32, w: &WeightSequence<S>) -> Result<(S, Monomial)> {
    Ok((w.weight(j as i64)?, Monomial::new(j, 0)))
}

/// Functional calculus `Φ(f) = Σ f_j θʲ` for a finitely supported `f`.
pub fn embed<S: Scalar>(coeffs: &[S], q: &DeformationParameter<S>) -> Element<S> {
    Element::from_terms(
        q.clone(),
        coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| (Monomial::new(j as u32, 0), c.clone())),
    )
}

pub fn project_k<S: Scalar>(f: &Element<S>, w: &WeightSequence<S>) -> Result<Element<S>> {
    let top = f.terms().map(|(m, _)| m.j as usize).max().unwrap_or(0);
    let weights = w.upto(top)?;
    let mut terms = Vec::with_capacity(f.len());
    for (m, c) in f.terms() {
        if m.j < m.k {
            continue;
        }
        let d = m.j - m.k;
        let factor = weights[m.j as usize].clone() / weights[d as usize].clone();
        terms.push((Monomial::new(d, 0), c.clone() * factor));
    }
    Ok(Element::from_terms(f.q().clone(), terms))
}

/// Matrix of `P_K` on `span{θ⁰, …, θ^{N−1}}`, entry `[b][a]` the coefficient of
/// `θᵇ` in `P_K θᵃ`. Identical in the `φ` basis since the change of basis is
/// diagonal.
#[allow(clippy::needless_range_loop)]
pub fn projection_matrix<S: Scalar>(
    w: &WeightSequence<S>,
    dim: TruncationDim,
    q: &DeformationParameter<S>,
) -> Result<Vec<Vec<S>>> {
    let n = dim.get();
    let mut out = vec![vec![S::zero(); n]; n];
    for a in 0..n {
        let img = project_k(&Element::monomial(q.clone(), Monomial::new(a as u32, 0), S::one()), w)?;
        for (m, c) in img.terms().filter(|(m, _)| (m.j as usize) < n) {
            out[m.j as usize][a] = c.clone();
        }
    }
    Ok(out)
}
