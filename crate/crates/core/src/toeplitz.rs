//! Toeplitz quantization `T_g = P_K M_g` (right multiplication by `g`, then
//! projection) as truncated matrices.
//!
//! Matrices are stored in the monomial basis `θ⁰, …, θ^{N−1}`:
//! `coeffs[b][a]` is the coefficient of `θᵇ` in `T θᵃ`. For `g = θⁱθ̄ʲ`
//!
//! ```text
//!     T θᵃ = (w_{a+i} / w_{a+i−j}) θ^{a+i−j}
//! ```
//!
//! which stays inside the scalar backend. The orthonormal-basis matrix is the
//! diagonal similarity `⟨φ_b, T φ_a⟩ = coeffs[b][a] · √(w_b / w_a)`, exposed
//! exactly as a [`SurdEntry`] and approximately as a float. Products and
//! commutators are basis independent, so identities are checked exactly on
//! `coeffs`.
//!
//! Truncation drops anything pushed to index `≥ N`; `interior_margin` counts
//! the trailing columns that may differ from the untruncated operator.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::bargmann::{FockVector, TruncationDim};
use crate::error::{Error, Result};
use crate::qalgebra::{DeformationParameter, Element, Monomial};
use crate::scalar::{Float, Scalar};
use crate::serial::element_to_json;
use crate::weights::WeightSequence;

/// `coeff · √radicand`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurdEntry<S> {
    pub coeff: S,
    pub radicand: S,
}

impl<S: Scalar> SurdEntry<S> {
    pub fn to_c64(&self) -> Float {
        self.coeff.to_c64() * self.radicand.to_c64().sqrt()
    }

    /// `coeff² · radicand`, the exact square of the entry.
    pub fn squared(&self) -> S {
        self.coeff.clone() * self.coeff.clone() * self.radicand.clone()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator<S: Scalar> {
    dim: usize,
    weights: Vec<S>,
    weights_label: String,
    coeffs: Vec<Vec<S>>,
    symbol: Option<Element<S>>,
    interior_margin: usize,
}

impl<S: Scalar> TruncatedOperator<S> {
    fn blank(w: &WeightSequence<S>, dim: TruncationDim) -> Result<Self> {
        let n = dim.get();
        Ok(Self {
            dim: n,
            weights: w.upto(n - 1)?,
            weights_label: w.label().to_string(),
            coeffs: vec![vec![S::zero(); n]; n],
            symbol: None,
            interior_margin: 0,
        })
    }

    pub fn identity(w: &WeightSequence<S>, dim: TruncationDim) -> Result<Self> {
        let mut op = Self::blank(w, dim)?;
        for a in 0..op.dim {
            op.coeffs[a][a] = S::one();
        }
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symbol(&self) -> Option<&Element<S>> {
        self.symbol.as_ref()
    }

    pub fn interior_margin(&self) -> usize {
        self.interior_margin
    }

    /// Number of leading columns unaffected by truncation.
    pub fn interior_columns(&self) -> usize {
        self.dim.saturating_sub(self.interior_margin)
    }

    pub fn weights_label(&self) -> &str {
        &self.weights_label
    }

    /// `w_0, …, w_{N−1}`.
    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    /// Coefficient of `θᵇ` in `T θᵃ`.
    pub fn coeff(&self, b: usize, a: usize) -> &S {
        &self.coeffs[b][a]
    }

    pub fn coeffs(&self) -> &[Vec<S>] {
        &self.coeffs
    }

    /// `⟨φ_b, T φ_a⟩` in closed form.
    pub fn phi_entry_exact(&self, b: usize, a: usize) -> SurdEntry<S> {
        SurdEntry {
            coeff: self.coeffs[b][a].clone(),
            radicand: self.weights[b].clone() / self.weights[a].clone(),
        }
    }

    pub fn phi_entry(&self, b: usize, a: usize) -> Float {
        if self.coeffs[b][a].is_zero() {
            return Float::zero();
        }
        self.phi_entry_exact(b, a).to_c64()
    }

    pub fn phi_matrix(&self) -> DMatrix<Float> {
        DMatrix::from_fn(self.dim, self.dim, |b, a| self.phi_entry(b, a))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.weights != other.weights {
            return Err(Error::WeightsMismatch {
                left: self.weights_label.clone(),
                right: other.weights_label.clone(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (row, orow) in out.coeffs.iter_mut().zip(&other.coeffs) {
            for (v, o) in row.iter_mut().zip(orow) {
                *v = v.clone() + o.clone();
            }
        }
        out.symbol = match (&self.symbol, &other.symbol) {
            (Some(f), Some(g)) => f.try_add(g).ok(),
            _ => None,
        };
        out.interior_margin = self.interior_margin.max(other.interior_margin);
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = self.clone();
        for row in &mut out.coeffs {
            for v in row.iter_mut() {
                *v = c.clone() * v.clone();
            }
        }
        out.symbol = self.symbol.as_ref().map(|g| g.scale(c));
        out
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-S::one()))
    }

    /// True iff the leading `cols` columns agree exactly.
    pub fn agrees_on_columns(&self, other: &Self, cols: usize) -> bool {
        self.dim == other.dim
            && (0..self.dim).all(|b| {
                (0..cols.min(self.dim)).all(|a| self.coeffs[b][a] == other.coeffs[b][a])
            })
    }

    /// Compares on the columns both operators get right.
    pub fn agrees_on_interior(&self, other: &Self) -> bool {
        let cols = self.interior_columns().min(other.interior_columns());
        self.agrees_on_columns(other, cols)
    }

    /// Multiplies a vector of `θ`-basis coefficients.
    pub fn apply_monomial(&self, u: &[S]) -> Result<Vec<S>> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: u.len(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .zip(u)
                    .filter(|(m, _)| !m.is_zero())
                    .fold(S::zero(), |acc, (m, x)| acc + m.clone() * x.clone())
            })
            .collect())
    }

    /// Largest singular value of the truncated `φ`-basis matrix: a lower
    /// bound for the norm of the untruncated operator.
    pub fn norm_lower_bound(&self) -> f64 {
        self.phi_matrix()
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    /// Nonzero `φ`-basis entries grouped by diagonal offset `b − a`.
    pub fn diagonals(&self) -> Vec<(i64, usize, Float)> {
        let mut out = Vec::new();
        for a in 0..self.dim {
            for b in 0..self.dim {
                if !self.coeffs[b][a].is_zero() {
                    out.push((b as i64 - a as i64, a, self.phi_entry(b, a)));
                }
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
        out
    }

    pub fn to_json(&self) -> Value {
        let mut entries = Vec::with_capacity(self.dim * self.dim);
        for b in 0..self.dim {
            for a in 0..self.dim {
                let z = self.phi_entry(b, a);
                entries.push(json!([z.re, z.im]));
            }
        }
        let exact: Vec<Value> = self
            .coeffs
            .iter()
            .flatten()
            .map(|v| {
                let (re, im) = v.render_parts();
                json!([re, im])
            })
            .collect();
        json!({
            "dim": self.dim,
            "weights": self.weights_label,
            "symbol": self.symbol.as_ref().map(element_to_json),
            "interior_margin": self.interior_margin,
            "entries_row_major": entries,
            "monomial_basis_row_major": exact,
        })
    }
}

/// `T_{θⁱθ̄ʲ}` truncated to dimension `N`.
pub fn toeplitz_monomial<S: Scalar>(
    i: u32,
    j: u32,
    w: &WeightSequence<S>,
    dim: TruncationDim,
) -> Result<TruncatedOperator<S>> {
    let mut op = TruncatedOperator::blank(w, dim)?;
    let n = op.dim;
    let ext = w.upto(n - 1 + i as usize)?;
    for a in 0..n {
        let top = a + i as usize;
        let Some(b) = top.checked_sub(j as usize) else {
            continue;
        };
        if b < n {
            op.coeffs[b][a] = ext[top].clone() / ext[b].clone();
        }
    }
    op.interior_margin = i.max(j) as usize;
    Ok(op)
}

pub fn toeplitz<S: Scalar>(
    g: &Element<S>,
    w: &WeightSequence<S>,
    dim: TruncationDim,
) -> Result<TruncatedOperator<S>> {
    let mut op = TruncatedOperator::blank(w, dim)?;
    let n = op.dim;
    let top_i = g.terms().map(|(m, _)| m.j as usize).max().unwrap_or(0);
    let ext = w.upto(n - 1 + top_i)?;
    let mut margin = 0;
    for (m, c) in g.terms() {
        margin = margin.max(m.maxdeg() as usize);
        for a in 0..n {
            let top = a + m.j as usize;
            let Some(b) = top.checked_sub(m.k as usize) else {
                continue;
            };
            if b < n {
                let entry = c.clone() * ext[top].clone() / ext[b].clone();
                op.coeffs[b][a] = op.coeffs[b][a].clone() + entry;
            }
        }
    }
    op.symbol = Some(g.clone());
    op.interior_margin = margin;
    Ok(op)
}

pub fn apply<S: Scalar>(t: &TruncatedOperator<S>, v: &FockVector) -> Result<FockVector> {
    if t.dim != v.dim() {
        return Err(Error::DimensionMismatch {
            left: t.dim,
            right: v.dim(),
        });
    }
    if t.weights_label != v.weights_label() {
        return Err(Error::WeightsMismatch {
            left: t.weights_label.clone(),
            right: v.weights_label().to_string(),
        });
    }
    let m = t.phi_matrix();
    let out = (0..t.dim)
        .map(|b| {
            (0..t.dim)
                .map(|a| m[(b, a)] * v.coeffs()[a])
                .fold(Float::zero(), |acc, x| acc + x)
        })
        .collect();
    Ok(FockVector::from_parts(out, t.weights_label.clone()))
}

/// `A · B`. Agreement with a directly built operator holds on the leading
/// `N − (margin_A + margin_B)` columns.
pub fn compose<S: Scalar>(
    a: &TruncatedOperator<S>,
    b: &TruncatedOperator<S>,
) -> Result<TruncatedOperator<S>> {
    a.check_compatible(b)?;
    let n = a.dim;
    let mut coeffs = vec![vec![S::zero(); n]; n];
    for (k, brow) in b.coeffs.iter().enumerate() {
        for (col, bv) in brow.iter().enumerate() {
            if bv.is_zero() {
                continue;
            }
            for (row, out_row) in coeffs.iter_mut().enumerate() {
                let av = &a.coeffs[row][k];
                if !av.is_zero() {
                    out_row[col] = out_row[col].clone() + av.clone() * bv.clone();
                }
            }
        }
    }
    Ok(TruncatedOperator {
        dim: n,
        weights: a.weights.clone(),
        weights_label: a.weights_label.clone(),
        coeffs,
        symbol: None,
        interior_margin: a.interior_margin + b.interior_margin,
    })
}

/// Adjoint with respect to `⟨·,·⟩_w`; the conjugate transpose in the `φ`
/// basis. In the monomial basis: `A†[b][a] = conj(A[a][b]) · w_a / w_b`.
pub fn adjoint<S: Scalar>(t: &TruncatedOperator<S>) -> TruncatedOperator<S> {
    let n = t.dim;
    let coeffs = (0..n)
        .map(|b| {
            (0..n)
                .map(|a| {
                    let v = &t.coeffs[a][b];
                    if v.is_zero() {
                        S::zero()
                    } else {
                        v.conj() * t.weights[a].clone() / t.weights[b].clone()
                    }
                })
                .collect()
        })
        .collect();
    TruncatedOperator {
        dim: n,
        weights: t.weights.clone(),
        weights_label: t.weights_label.clone(),
        coeffs,
        symbol: t.symbol.as_ref().map(Element::star),
        interior_margin: t.interior_margin,
    }
}

/// `[A, B]_r = AB − r·BA`.
pub fn q_commutator<S: Scalar>(
    a: &TruncatedOperator<S>,
    b: &TruncatedOperator<S>,
    r: &S,
) -> Result<TruncatedOperator<S>> {
    compose(a, b)?.try_sub(&compose(b, a)?.scale(r))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcrResidual<S> {
    /// Largest `|entry|` of `[T_θ̄, T_θ]_{1/q} − I` on the leading `N×N` block.
    pub residual: S,
    pub dim: usize,
}

/// Builds `T_θ̄`, `T_θ` at dimension `N + 1` with the CCR weights and measures
/// how far `T_θ̄T_θ − q⁻¹T_θT_θ̄` is from the identity on the leading block.
pub fn ccr_residual<S: Scalar>(
    q: &DeformationParameter<S>,
    w0: S,
    dim: TruncationDim,
) -> Result<CcrResidual<S>> {
    let w = crate::weights::ccr_weights(q, w0)?;
    ccr_residual_with(q, &w, dim)
}

/// As [`ccr_residual`] but with arbitrary weights; a nonzero residual is a
/// result, not an error.
pub fn ccr_residual_with<S: Scalar>(
    q: &DeformationParameter<S>,
    w: &WeightSequence<S>,
    dim: TruncationDim,
) -> Result<CcrResidual<S>> {
    let n = dim.get();
    let big = TruncationDim::new(n + 1)?;
    let create = toeplitz_monomial(1, 0, w, big)?;
    let annihilate = toeplitz_monomial(0, 1, w, big)?;
    let comm = q_commutator(&annihilate, &create, q.inverse())?;
    let id = TruncatedOperator::identity(w, big)?;
    let diff = comm.try_sub(&id)?;
    let mut worst = S::zero();
    let mut worst_sq = S::zero();
    for b in 0..n {
        for a in 0..n {
            let v = diff.coeff(b, a);
            let sq = v.norm_sqr();
            if sq.real_cmp(&worst_sq) == Some(Ordering::Greater) {
                worst_sq = sq;
                worst = v.abs();
            }
        }
    }
    Ok(CcrResidual {
        residual: worst,
        dim: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormVerdict {
    BoundedCandidate,
    Diverging,
    Inconclusive,
}

impl NormVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            NormVerdict::BoundedCandidate => "BOUNDED_CANDIDATE",
            NormVerdict::Diverging => "DIVERGING",
            NormVerdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompactVerdict {
    CompactCandidate,
    NotCompactCandidate,
    Inconclusive,
}

impl CompactVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CompactVerdict::CompactCandidate => "COMPACT_CANDIDATE",
            CompactVerdict::NotCompactCandidate => "NOT_COMPACT_CANDIDATE",
            CompactVerdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// The weighted-shift coefficients `c_a = w_{i+a} / √(w_a w_{i+a−j})` of
/// `T_{θⁱθ̄ʲ}` for `0 ≤ a ≤ a_max`. Columns with `i + a < j` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftCoefficients<S> {
    pub squared: Vec<S>,
    pub values: Vec<f64>,
}

pub fn shift_coefficients<S: Scalar>(
    i: u32,
    j: u32,
    w: &WeightSequence<S>,
    a_max: usize,
) -> Result<ShiftCoefficients<S>> {
    let ext = w.upto(a_max + i as usize)?;
    let mut squared = Vec::with_capacity(a_max + 1);
    for a in 0..=a_max {
        let top = a + i as usize;
        let sq = match top.checked_sub(j as usize) {
            Some(b) => ext[top].clone() * ext[top].clone() / (ext[a].clone() * ext[b].clone()),
            None => S::zero(),
        };
        squared.push(sq);
    }
    let values = squared.iter().map(|s| s.to_c64().re.sqrt()).collect();
    Ok(ShiftCoefficients { squared, values })
}

/// Index range of the last quarter of `0..=a_max` (at least two points).
fn tail_range(a_max: usize) -> std::ops::RangeInclusive<usize> {
    let len = a_max + 1;
    let tail = (len / 4).max(2).min(len);
    (len - tail)..=a_max
}

fn cmp_sq<S: Scalar>(x: &S, y: &S) -> Ordering {
    x.real_cmp(y).unwrap_or(Ordering::Equal)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormBound<S> {
    pub coefficients: ShiftCoefficients<S>,
    /// Max of `c_a` over the scanned range only.
    pub sup_estimate: f64,
    pub attained_at: usize,
    pub verdict: NormVerdict,
}

/// Horizon-scoped evidence for boundedness of `T_{θⁱθ̄ʲ}`: its norm is
/// `sup_a c_a`. Monotonicity is judged on exact `c_a²`.
pub fn norm_bound_monomial<S: Scalar>(
    i: u32,
    j: u32,
    w: &WeightSequence<S>,
    a_max: usize,
) -> Result<NormBound<S>> {
    if a_max < 1 {
        return Err(Error::Domain("norm scan needs A_max ≥ 1".into()));
    }
    let coefficients = shift_coefficients(i, j, w, a_max)?;
    let sq = &coefficients.squared;
    let mut attained_at = 0;
    for a in 1..sq.len() {
        if cmp_sq(&sq[a], &sq[attained_at]) == Ordering::Greater {
            attained_at = a;
        }
    }
    let tail: Vec<usize> = tail_range(a_max).collect();
    let strictly_increasing = tail
        .windows(2)
        .all(|p| cmp_sq(&sq[p[1]], &sq[p[0]]) == Ordering::Greater);
    let non_increasing = tail
        .windows(2)
        .all(|p| cmp_sq(&sq[p[1]], &sq[p[0]]) != Ordering::Greater);
    let verdict = if strictly_increasing && attained_at == a_max {
        NormVerdict::Diverging
    } else if non_increasing {
        NormVerdict::BoundedCandidate
    } else {
        NormVerdict::Inconclusive
    };
    Ok(NormBound {
        sup_estimate: coefficients.values[attained_at],
        attained_at,
        coefficients,
        verdict,
    })
}

/// Horizon-scoped evidence for compactness (`c_a → 0`).
pub fn compactness_probe<S: Scalar>(
    i: u32,
    j: u32,
    w: &WeightSequence<S>,
    a_max: usize,
    tol: f64,
) -> Result<CompactVerdict> {
    if a_max < 4 {
        return Err(Error::Domain("compactness probe needs A_max ≥ 4".into()));
    }
    let coefficients = shift_coefficients(i, j, w, a_max)?;
    let sq = &coefficients.squared;
    let vals = &coefficients.values;
    let tail: Vec<usize> = tail_range(a_max).collect();
    let non_increasing = tail
        .windows(2)
        .all(|p| cmp_sq(&sq[p[1]], &sq[p[0]]) != Ordering::Greater);
    let all_small = tail.iter().all(|&a| vals[a] < tol);
    let all_large = tail.iter().all(|&a| vals[a] >= tol);
    let first = tail[0];
    let last = *tail.last().expect("nonempty tail");
    let not_decaying = cmp_sq(&sq[last], &sq[first]) != Ordering::Less;
    Ok(if all_small && non_increasing {
        CompactVerdict::CompactCandidate
    } else if all_large && not_decaying {
        CompactVerdict::NotCompactCandidate
    } else {
        CompactVerdict::Inconclusive
    })
}

/// The `(i, j)` monomial symbol as an element, for building operators.
pub fn monomial_symbol<S: Scalar>(q: &DeformationParameter<S>, i: u32, j: u32) -> Element<S> {
    Element::monomial(q.clone(), Monomial::new(i, j), S::one())
}
