//! Coefficient backends.
//!
//! Two concrete fields are supported: exact Gaussian rationals ([`Exact`]) and
//! double-precision complex numbers ([`Float`]). Every algebraic type in this
//! crate is generic over [`Scalar`], so a computation cannot mix the two; the
//! only crossing points are the explicit conversions ([`Scalar::to_c64`]) and
//! text parsing, which rejects literals the target backend cannot represent.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Gaussian rational: rational real and imaginary parts.
pub type Exact = Complex<BigRational>;
/// Double-precision complex.
pub type Float = Complex64;

/// Relative singular-value cutoff used for floating-point rank decisions.
pub const FLOAT_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    /// Rational-looking literals (`3`, `-3/4`, `2+i`) select the exact backend;
    /// anything with a decimal point or exponent selects floats.
    pub fn detect(text: &str) -> Backend {
        if text.contains(['.', 'e', 'E']) {
            Backend::Float
        } else {
            Backend::Exact
        }
    }
}

/// Outcome of a rank computation on a small dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NullProbe<S> {
    pub rank: usize,
    /// A nonzero `x` with `K x = 0`, present iff `rank < columns`.
    pub null_vector: Option<Vec<S>>,
}

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_bigint(n: &BigInt) -> Self;
    fn from_gaussian(re: &BigRational, im: &BigRational) -> Self;
    fn conj(&self) -> Self;
    fn to_c64(&self) -> Complex64;
    fn is_real(&self) -> bool;

    /// Parses a real literal: integer, `a/b`, or (float backend only) decimal.
    fn parse_real(text: &str) -> Result<Self>;

    /// Real and imaginary parts as strings (`"3/4"`, `"0.75"`).
    fn render_parts(&self) -> (String, String);

    /// `|z|^2`, as an element of the same backend.
    fn norm_sqr(&self) -> Self;

    /// `|z|`. Exact for real or purely imaginary exact values.
    fn abs(&self) -> Self;

    /// Rank of `k` and, if rank-deficient, a right null vector.
    fn null_probe(k: &[Vec<Self>], cols: usize) -> NullProbe<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn from_rational(r: &BigRational) -> Self {
        Self::from_gaussian(r, &BigRational::zero())
    }

    fn i() -> Self {
        Self::from_gaussian(&BigRational::zero(), &BigRational::one())
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }

    /// True iff the value is a strictly positive real number.
    fn is_positive_real(&self) -> bool {
        self.is_real() && self.real_cmp(&Self::zero()) == Some(Ordering::Greater)
    }

    /// Orders the real parts when both values are real.
    fn real_cmp(&self, other: &Self) -> Option<Ordering>;

    /// Square root of a nonnegative real, when it exists in the backend.
    fn real_sqrt(&self) -> Option<Self>;

    fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Single-token rendering: `3/4`, `-2i`, `(1/2-3i)`. Re-parses with
    /// [`parse_scalar`].
    fn render(&self) -> String {
        let (re, im) = self.render_parts();
        let re_zero = re == "0" || re == "-0";
        let im_zero = im == "0" || im == "-0";
        match (re_zero, im_zero) {
            (_, true) => re,
            (true, false) => imag_token(&im),
            (false, false) => {
                let im_tok = imag_token(&im);
                if im_tok.starts_with('-') {
                    format!("({re}{im_tok})")
                } else {
                    format!("({re}+{im_tok})")
                }
            }
        }
    }
}

fn imag_token(im: &str) -> String {
    match im {
        "1" => "i".to_string(),
        "-1" => "-i".to_string(),
        other => format!("{other}i"),
    }
}

impl Scalar for Exact {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_bigint(n: &BigInt) -> Self {
        Complex::new(BigRational::from_integer(n.clone()), BigRational::zero())
    }
    fn from_gaussian(re: &BigRational, im: &BigRational) -> Self {
        Complex::new(re.clone(), im.clone())
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
    fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    fn parse_real(text: &str) -> Result<Self> {
        match parse_real_literal(text)? {
            RealLiteral::Rational(r) => Ok(Self::from_rational(&r)),
            RealLiteral::Decimal(_) => Err(Error::BackendMismatch(format!(
                "decimal literal `{text}` cannot enter the exact backend; write it as a fraction"
            ))),
        }
    }
    fn render_parts(&self) -> (String, String) {
        (self.re.to_string(), self.im.to_string())
    }
    fn norm_sqr(&self) -> Self {
        Complex::new(Complex::norm_sqr(self), BigRational::zero())
    }
    fn abs(&self) -> Self {
        if self.im.is_zero() {
            Complex::new(self.re.abs(), BigRational::zero())
        } else if self.re.is_zero() {
            Complex::new(self.im.abs(), BigRational::zero())
        } else {
            let approx = self.to_c64().norm();
            Complex::new(
                BigRational::from_float(approx).unwrap_or_else(BigRational::zero),
                BigRational::zero(),
            )
        }
    }
    fn real_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.is_real() && other.is_real()).then(|| self.re.cmp(&other.re))
    }
    fn real_sqrt(&self) -> Option<Self> {
        if !self.is_real() || self.re.is_negative() {
            return None;
        }
        let root = |n: &BigInt| {
            let r = n.sqrt();
            (&r * &r == *n).then_some(r)
        };
        let (n, d) = (root(self.re.numer())?, root(self.re.denom())?);
        Some(Complex::new(BigRational::new(n, d), BigRational::zero()))
    }
    fn null_probe(k: &[Vec<Self>], cols: usize) -> NullProbe<Self> {
        exact_null_probe(k, cols)
    }
}

impl Scalar for Float {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_bigint(n: &BigInt) -> Self {
        Complex64::new(n.to_f64().unwrap_or(f64::INFINITY), 0.0)
    }
    fn from_gaussian(re: &BigRational, im: &BigRational) -> Self {
        Complex64::new(rational_to_f64(re), rational_to_f64(im))
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn is_real(&self) -> bool {
        self.im == 0.0
    }
    fn parse_real(text: &str) -> Result<Self> {
        Ok(match parse_real_literal(text)? {
            RealLiteral::Rational(r) => Complex64::new(rational_to_f64(&r), 0.0),
            RealLiteral::Decimal(x) => Complex64::new(x, 0.0),
        })
    }
    fn render_parts(&self) -> (String, String) {
        (format!("{}", self.re), format!("{}", self.im))
    }
    fn norm_sqr(&self) -> Self {
        Complex64::new(Complex64::norm_sqr(self), 0.0)
    }
    fn abs(&self) -> Self {
        Complex64::new(self.norm(), 0.0)
    }
    fn real_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.is_real() && other.is_real() {
            self.re.partial_cmp(&other.re)
        } else {
            None
        }
    }
    fn real_sqrt(&self) -> Option<Self> {
        (self.is_real() && self.re >= 0.0).then(|| Complex64::new(self.re.sqrt(), 0.0))
    }
    fn null_probe(k: &[Vec<Self>], cols: usize) -> NullProbe<Self> {
        float_null_probe(k, cols)
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

enum RealLiteral {
    Rational(BigRational),
    Decimal(f64),
}

fn parse_real_literal(text: &str) -> Result<RealLiteral> {
    let t = text.trim();
    let bad = || Error::Syntax {
        pos: 0,
        msg: format!("invalid real literal `{text}`"),
    };
    if t.is_empty() {
        return Err(bad());
    }
    if t.contains(['.', 'e', 'E']) {
        return t.parse::<f64>().map(RealLiteral::Decimal).map_err(|_| bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    if den.starts_with(['+', '-']) {
        return Err(bad());
    }
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Syntax {
            pos: 0,
            msg: format!("zero denominator in `{text}`"),
        });
    }
    Ok(RealLiteral::Rational(BigRational::new(num, den)))
}

/// Parses a standalone complex literal: `a`, `bi`, `i`, `-i`, `a+bi`,
/// `a-bi`, optionally wrapped in parentheses.
pub fn parse_scalar<S: Scalar>(text: &str) -> Result<S> {
    let mut t = text.trim();
    if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        t = inner.trim();
    }
    let bad = || Error::Syntax {
        pos: 0,
        msg: format!("invalid scalar literal `{text}`"),
    };
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return S::parse_real(t);
    };
    // Split `a+bi` at the last sign that is not the leading one and not part
    // of an exponent.
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let c = bytes[idx];
        if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let imag_part = |s: &str| -> Result<S> {
        match s.trim() {
            "" | "+" => Ok(S::one()),
            "-" => Ok(-S::one()),
            other => S::parse_real(other.trim_start_matches('+')),
        }
    };
    match split {
        Some(idx) => {
            let re = S::parse_real(body[..idx].trim())?;
            let im = imag_part(&body[idx..])?;
            Ok(re + im * S::i())
        }
        None => Ok(imag_part(body)? * S::i()),
    }
}

/// Reduced row echelon form over the Gaussian rationals; returns a right null
/// vector normalized so its first nonzero entry is 1.
fn exact_null_probe(k: &[Vec<Exact>], cols: usize) -> NullProbe<Exact> {
    let mut m: Vec<Vec<Exact>> = k.to_vec();
    let rows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !Scalar::is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(row, p);
        let inv = Scalar::inv(&m[row][col]).expect("nonzero pivot");
        for v in &mut m[row][col..cols] {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = m[row].clone();
        for (r, target) in m.iter_mut().enumerate() {
            if r != row && !Scalar::is_zero(&target[col]) {
                let factor = target[col].clone();
                for (v, p) in target[col..cols].iter_mut().zip(&pivot_row[col..cols]) {
                    *v = v.clone() - factor.clone() * p.clone();
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let rank = pivots.len();
    let null_vector = (0..cols).find(|c| !pivots.contains(c)).map(|free| {
        let mut x = vec![<Exact as Scalar>::zero(); cols];
        x[free] = <Exact as Scalar>::one();
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = -m[r][free].clone();
        }
        let lead = x
            .iter()
            .find(|v| !Scalar::is_zero(*v))
            .cloned()
            .expect("free variable is nonzero");
        let inv = Scalar::inv(&lead).expect("nonzero lead");
        x.into_iter().map(|v| v * inv.clone()).collect()
    });
    NullProbe { rank, null_vector }
}

fn float_null_probe(k: &[Vec<Float>], cols: usize) -> NullProbe<Float> {
    if cols == 0 {
        return NullProbe {
            rank: 0,
            null_vector: None,
        };
    }
    // Pad with zero rows so the SVD exposes all `cols` right singular vectors.
    let rows = k.len().max(cols);
    let mat = DMatrix::from_fn(rows, cols, |r, c| {
        k.get(r).map_or(<Float as Scalar>::zero(), |row| row[c])
    });
    let svd = mat.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sigma = &svd.singular_values;
    let smax = sigma.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = FLOAT_RANK_TOL * smax;
    let rank = if smax == 0.0 {
        0
    } else {
        sigma.iter().filter(|&&s| s > cutoff).count()
    };
    let null_vector = (rank < cols).then(|| {
        let (idx, _) = sigma
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty");
        // Row `idx` of V^H is the conjugate of the right singular vector.
        let mut x: Vec<Float> = (0..cols).map(|c| v_t[(idx, c)].conj()).collect();
        if let Some(lead) = x.iter().find(|v| v.norm() > 0.0).cloned() {
            let phase = lead / lead.norm();
            for v in &mut x {
                *v /= phase;
            }
        }
        x
    });
    NullProbe { rank, null_vector }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_rational(&BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn real_sqrt_only_for_perfect_squares() {
        assert_eq!(q(9, 4).real_sqrt(), Some(q(3, 2)));
        assert_eq!(q(0, 1).real_sqrt(), Some(q(0, 1)));
        assert_eq!(q(2, 1).real_sqrt(), None);
        assert_eq!(q(-4, 1).real_sqrt(), None);
        assert_eq!(Exact::i().real_sqrt(), None);
        assert_eq!(Float::new(6.25, 0.0).real_sqrt(), Some(Float::new(2.5, 0.0)));
        assert_eq!(Float::new(1.0, 1.0).real_sqrt(), None);
    }

    #[test]
    fn render_and_parse_agree() {
        let cases = [
            q(3, 4),
            -q(1, 2),
            Exact::i(),
            -Exact::i(),
            q(1, 2) + q(-3, 1) * Exact::i(),
            q(-1, 1) + q(2, 5) * Exact::i(),
            <Exact as Scalar>::zero(),
        ];
        for c in cases {
            let text = c.render();
            assert_eq!(parse_scalar::<Exact>(&text).unwrap(), c, "{text}");
        }
    }

    #[test]
    fn decimal_rejected_by_exact_backend() {
        assert!(matches!(
            parse_scalar::<Exact>("0.75"),
            Err(Error::BackendMismatch(_))
        ));
        assert_eq!(parse_scalar::<Float>("0.75").unwrap(), Float::new(0.75, 0.0));
    }

    #[test]
    fn backend_detection() {
        assert_eq!(Backend::detect("3/4"), Backend::Exact);
        assert_eq!(Backend::detect("0.75"), Backend::Float);
        assert_eq!(Backend::detect("2+i"), Backend::Exact);
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert!(parse_scalar::<Exact>("1/0").is_err());
    }

    #[test]
    fn exact_rank_of_ones() {
        let ones = vec![vec![<Exact as Scalar>::one(); 3]; 4];
        let probe = Exact::null_probe(&ones, 3);
        assert_eq!(probe.rank, 1);
        let v = probe.null_vector.unwrap();
        let sum = v.iter().cloned().fold(<Exact as Scalar>::zero(), |a, b| a + b);
        assert!(Scalar::is_zero(&sum));
        assert_eq!(v[0], <Exact as Scalar>::one());
    }

    #[test]
    fn float_rank_matches_exact_on_hilbert_like_matrix() {
        let m: Vec<Vec<Float>> = (0..3)
            .map(|r| (0..3).map(|c| Float::new(1.0 / (r + c + 1) as f64, 0.0)).collect())
            .collect();
        assert_eq!(Float::null_probe(&m, 3).rank, 3);
        let deficient = vec![vec![<Float as Scalar>::one(), <Float as Scalar>::one()]; 2];
        let probe = Float::null_probe(&deficient, 2);
        assert_eq!(probe.rank, 1);
        let v = probe.null_vector.unwrap();
        assert!((v[0] + v[1]).norm() < 1e-12);
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let z = q(3, 1) + Exact::i();
        let mut acc = <Exact as Scalar>::one();
        for e in 0..10u64 {
            assert_eq!(z.pow(e), acc);
            acc *= z.clone();
        }
    }
}
