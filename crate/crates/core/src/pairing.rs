//! The weighted sesquilinear form on the quantum plane.
//!
//! `⟨θᵃθ̄ᵇ, θᶜθ̄ᵈ⟩_w = w_{a+d} δ_{a−b, c−d}`, anti-linear in the first slot.
//! Monomials in different sectors (`j − k`) are orthogonal, so the form
//! splits into one Hankel-type block per sector. Non-degeneracy of a block
//! is decided by whether the weight vectors `W_{R,s}` span `ℂ^R`; the scan
//! here checks that for a finite window of `(m, R, s)` and says so in its
//! report.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qalgebra::{DeformationParameter, Element, Monomial};
use crate::scalar::{Backend, Float, Scalar, FLOAT_RANK_TOL};
use crate::weights::WeightSequence;

/// Sector `n = j − k` of the anti-Wick basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SectorIndex(pub i64);

pub fn sector_of(m: Monomial) -> SectorIndex {
    SectorIndex(m.sector())
}

pub fn maxdeg(m: Monomial) -> u32 {
    m.maxdeg()
}

/// The unique monomial of sector `n` with max-degree `r`.
pub fn epsilon(n: SectorIndex, r: u32) -> Result<Monomial> {
    let abs = n.0.unsigned_abs();
    if (r as u64) < abs {
        return Err(Error::Domain(format!(
            "max-degree {r} is below |n| = {abs} for sector {}",
            n.0
        )));
    }
    let abs = abs as u32;
    Ok(if n.0 >= 0 {
        Monomial::new(r, r - abs)
    } else {
        Monomial::new(r - abs, r)
    })
}

pub fn inner<S: Scalar>(f: &Element<S>, g: &Element<S>, w: &WeightSequence<S>) -> Result<S> {
    let mut by_sector: BTreeMap<i64, Vec<(Monomial, &S)>> = BTreeMap::new();
    for (m, c) in g.terms() {
        by_sector.entry(m.sector()).or_default().push((m, c));
    }
    let mut top = None;
    for (m, _) in f.terms() {
        if let Some(rhs) = by_sector.get(&m.sector()) {
            for (mg, _) in rhs {
                let idx = (m.j + mg.k) as usize;
                top = Some(top.map_or(idx, |t: usize| t.max(idx)));
            }
        }
    }
    let Some(top) = top else {
        return Ok(S::zero());
    };
    let weights = w.upto(top)?;
    let mut acc = S::zero();
    for (m, cf) in f.terms() {
        if let Some(rhs) = by_sector.get(&m.sector()) {
            let cf = cf.conj();
            for (mg, cg) in rhs {
                let wt = weights[(m.j + mg.k) as usize].clone();
                acc = acc + cf.clone() * (*cg).clone() * wt;
            }
        }
    }
    Ok(acc)
}

/// `G[i][j] = ⟨basis_i, basis_j⟩_w`.
pub fn gram<S: Scalar>(basis: &[Element<S>], w: &WeightSequence<S>) -> Result<Vec<Vec<S>>> {
    if basis.is_empty() {
        return Err(Error::Domain("gram matrix of an empty basis".into()));
    }
    let n = basis.len();
    let mut g = vec![vec![S::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = inner(&basis[i], &basis[j], w)?;
            g[j][i] = v.conj();
            g[i][j] = v;
        }
    }
    Ok(g)
}

/// All anti-Wick monomials with `max(j, k) ≤ d`, ordered by `(maxdeg, j, k)`.
pub fn monomials_upto_maxdeg(d: u32) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = (0..=d)
        .flat_map(|j| (0..=d).map(move |k| Monomial::new(j, k)))
        .collect();
    out.sort_by_key(|m| (m.maxdeg(), m.j, m.k));
    out
}

/// `M[r'][s'] = w_{r'+s'+m}` for `r' < rows`, `s' ≤ s_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelSlice<S> {
    pub m: u32,
    pub rows: u32,
    pub s_max: u32,
    pub entries: Vec<Vec<S>>,
}

impl<S: Scalar> HankelSlice<S> {
    pub fn new(w: &WeightSequence<S>, m: u32, rows: u32, s_max: u32) -> Result<Self> {
        if rows == 0 {
            return Err(Error::Domain("Hankel slice needs R ≥ 1".into()));
        }
        let weights = w.upto((m + rows - 1 + s_max) as usize)?;
        let entries = (0..rows)
            .map(|r| {
                (0..=s_max)
                    .map(|s| weights[(r + s + m) as usize].clone())
                    .collect()
            })
            .collect();
        Ok(Self {
            m,
            rows,
            s_max,
            entries,
        })
    }

    /// `W_{R,s}` for scanned offset `s' = s − m`.
    pub fn column(&self, s: u32) -> Vec<S> {
        self.entries.iter().map(|row| row[s as usize].clone()).collect()
    }

    fn transposed(&self) -> Vec<Vec<S>> {
        (0..=self.s_max).map(|s| self.column(s)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<S> {
    /// The scanned columns already span `ℂ^R`.
    CertifiedNondegenerate,
    /// Coefficients `a` of `f = Σ a_r ε_{m+r}` orthogonal to every scanned
    /// `W_{R,s}`; nothing is claimed beyond the horizon.
    CandidateWitness { witness: Vec<S>, horizon: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanEntry<S> {
    pub m: u32,
    pub r: u32,
    pub verdict: Verdict<S>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanParams {
    pub m_max: u32,
    pub r_max: u32,
    pub s_max: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyReport<S> {
    pub params: ScanParams,
    pub results: Vec<ScanEntry<S>>,
    pub warnings: Vec<String>,
}

impl<S: Scalar> DegeneracyReport<S> {
    pub fn entry(&self, m: u32, r: u32) -> Option<&ScanEntry<S>> {
        self.results.iter().find(|e| e.m == m && e.r == r)
    }

    pub fn to_json(&self) -> Value {
        let results: Vec<Value> = self
            .results
            .iter()
            .map(|e| match &e.verdict {
                Verdict::CertifiedNondegenerate => json!({
                    "m": e.m,
                    "R": e.r,
                    "verdict": "CERTIFIED_NONDEGENERATE",
                    "horizon": self.params.s_max,
                }),
                Verdict::CandidateWitness { witness, horizon } => json!({
                    "m": e.m,
                    "R": e.r,
                    "verdict": "CANDIDATE_WITNESS",
                    "witness": witness.iter().map(Scalar::render).collect::<Vec<_>>(),
                    "horizon": horizon,
                }),
            })
            .collect();
        json!({
            "params": {
                "m_max": self.params.m_max,
                "R_max": self.params.r_max,
                "S_max": self.params.s_max,
            },
            "results": results,
        })
    }
}

/// Scans every `m ≤ m_max`, `1 ≤ R ≤ r_max` with offsets `s' ∈ [0, s_max]`.
///
/// Rank is exact in the exact backend and SVD-thresholded in floats.
pub fn nondegeneracy_scan<S: Scalar>(
    w: &WeightSequence<S>,
    m_max: u32,
    r_max: u32,
    s_max: u32,
) -> Result<DegeneracyReport<S>> {
    let params = ScanParams {
        m_max,
        r_max,
        s_max,
    };
    let mut warnings = Vec::new();
    if s_max < r_max {
        warnings.push(format!(
            "S_max = {s_max} < R_max = {r_max}: slices with R > S_max + 1 cannot reach full rank"
        ));
    }
    let mut results = Vec::new();
    for m in 0..=m_max {
        for r in 1..=r_max {
            let slice = HankelSlice::new(w, m, r, s_max)?;
            let probe = S::null_probe(&slice.transposed(), r as usize);
            let verdict = match probe.null_vector {
                None => Verdict::CertifiedNondegenerate,
                Some(witness) => Verdict::CandidateWitness {
                    witness,
                    horizon: s_max,
                },
            };
            results.push(ScanEntry { m, r, verdict });
        }
    }
    Ok(DegeneracyReport {
        params,
        results,
        warnings,
    })
}

/// `f = Σ_r a_r ε_{m+r}` in sector `+m`.
pub fn witness_element<S: Scalar>(
    m: u32,
    coeffs: &[S],
    q: &DeformationParameter<S>,
) -> Element<S> {
    Element::from_terms(
        q.clone(),
        coeffs.iter().enumerate().map(|(r, a)| {
            let mono = epsilon(SectorIndex(m as i64), m + r as u32).expect("r ≥ 0");
            (mono, a.clone())
        }),
    )
}

/// Re-checks `⟨ε_s, f⟩ = 0` through [`inner`] for every scanned `s`.
pub fn verify_witness<S: Scalar>(
    w: &WeightSequence<S>,
    m: u32,
    coeffs: &[S],
    s_max: u32,
    q: &DeformationParameter<S>,
) -> Result<bool> {
    let f = witness_element(m, coeffs, q);
    for s in 0..=s_max {
        let eps = Element::monomial(
            q.clone(),
            epsilon(SectorIndex(m as i64), m + s)?,
            S::one(),
        );
        let v = inner(&eps, &f, w)?;
        let scale = w.weight((m + s + coeffs.len() as u32) as i64)?.to_c64().norm();
        if !negligible(&v, scale) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn negligible<S: Scalar>(v: &S, scale: f64) -> bool {
    match S::BACKEND {
        Backend::Exact => v.is_zero(),
        Backend::Float => v.to_c64().norm() <= FLOAT_RANK_TOL * scale.max(1.0),
    }
}

#[derive(Debug, Clone)]
pub struct DefinitenessReport {
    pub max_degree: u32,
    pub basis: Vec<Monomial>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Eigenvector of the least eigenvalue as an element, when that eigenvalue
    /// is negative, together with its self-pairing `⟨f, f⟩_w`.
    pub indefinite_witness: Option<(Element<Float>, f64)>,
}

impl DefinitenessReport {
    /// Least eigenvalue clears [`FLOAT_RANK_TOL`] relative to the largest.
    pub fn is_positive_definite(&self) -> bool {
        self.min_eigenvalue > FLOAT_RANK_TOL * self.max_eigenvalue.abs()
    }
}

/// Least eigenvalue of the Gram matrix of all monomials with
/// `maxdeg ≤ max_degree`, computed in double precision.
pub fn definiteness_probe<S: Scalar>(
    w: &WeightSequence<S>,
    max_degree: u32,
) -> Result<DefinitenessReport> {
    let wf = w.to_float();
    let q = DeformationParameter::new(Float::one())?;
    let basis = monomials_upto_maxdeg(max_degree);
    let elems: Vec<Element<Float>> = basis
        .iter()
        .map(|m| Element::monomial(q.clone(), *m, Float::one()))
        .collect();
    let g = gram(&elems, &wf)?;
    let n = basis.len();
    let mat = DMatrix::from_fn(n, n, |i, j| g[i][j]);
    let eig = mat.symmetric_eigen();
    let (idx, &min_eigenvalue) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty basis");
    let max_eigenvalue = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    let indefinite_witness = if min_eigenvalue < 0.0 {
        let column: Vec<Float> = (0..n).map(|i| eig.eigenvectors[(i, idx)]).collect();
        let largest = column.iter().map(|c| c.norm()).fold(0.0, f64::max);
        // Drop rounding noise leaking into other sectors.
        let f = Element::from_terms(
            q,
            basis
                .iter()
                .zip(column)
                .filter(|(_, c)| c.norm() > 1e-14 * largest)
                .map(|(m, c)| (*m, c)),
        );
        let self_pairing = inner(&f, &f, &wf)?.re;
        Some((f, self_pairing))
    } else {
        None
    };
    Ok(DefinitenessReport {
        max_degree,
        basis,
        min_eigenvalue,
        max_eigenvalue,
        indefinite_witness,
    })
}
