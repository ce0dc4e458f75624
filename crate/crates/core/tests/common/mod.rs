#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qplane::{DeformationParameter, Element, Exact, Monomial, Scalar, WeightSequence};
use rand::Rng;

pub fn rat(n: i64, d: i64) -> Exact {
    Exact::from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
}

pub fn gauss(re: (i64, i64), im: (i64, i64)) -> Exact {
    Exact::from_gaussian(
        &BigRational::new(re.0.into(), re.1.into()),
        &BigRational::new(im.0.into(), im.1.into()),
    )
}

pub fn qp(v: Exact) -> DeformationParameter<Exact> {
    DeformationParameter::new(v).unwrap()
}

/// Reduces the free-algebra word `θ^{a.j} θ̄^{a.k} θ^{b.j} θ̄^{b.k}` by
/// rewriting one adjacent `θ̄θ` into `q⁻¹ θθ̄` at a time until no such pair is
/// left. Deliberately knows nothing about closed forms.
pub fn oracle_mul_monomials(a: Monomial, b: Monomial, q: &Exact) -> (Exact, Monomial) {
    const T: u8 = 0;
    const TB: u8 = 1;
    let mut word = Vec::new();
    word.extend(std::iter::repeat_n(T, a.j as usize));
    word.extend(std::iter::repeat_n(TB, a.k as usize));
    word.extend(std::iter::repeat_n(T, b.j as usize));
    word.extend(std::iter::repeat_n(TB, b.k as usize));
    let q_inv = Exact::one() / q.clone();
    let mut coeff = Exact::one();
    while let Some(p) = word.windows(2).position(|w| w == [TB, T]) {
        word.swap(p, p + 1);
        coeff *= q_inv.clone();
    }
    let j = word.iter().filter(|&&c| c == T).count() as u32;
    (coeff, Monomial::new(j, word.len() as u32 - j))
}

pub fn oracle_mul(f: &Element<Exact>, g: &Element<Exact>) -> Element<Exact> {
    let q = f.q().value().clone();
    let mut terms = Vec::new();
    for (a, ca) in f.terms() {
        for (b, cb) in g.terms() {
            let (c, m) = oracle_mul_monomials(a, b, &q);
            terms.push((m, ca.clone() * cb.clone() * c));
        }
    }
    Element::from_terms(f.q().clone(), terms)
}

pub fn exact_qs() -> Vec<Exact> {
    vec![rat(2, 1), rat(1, 2), gauss((3, 1), (1, 1))]
}

pub fn real_qs() -> Vec<Exact> {
    vec![rat(2, 1), rat(1, 2), rat(3, 4), rat(-2, 3), rat(5, 1)]
}

/// Weight families with rational values, all long enough for degree ≤ 12 work.
pub fn weight_families() -> Vec<WeightSequence<Exact>> {
    vec![
        WeightSequence::factorial(),
        WeightSequence::parse("constant:3/2").unwrap(),
        WeightSequence::parse("qfactorial:q=3/4:w0=2").unwrap(),
        WeightSequence::parse("table:[1,2,1,5,\"1/3\"]:repeat-last").unwrap(),
    ]
}

pub fn small_coeff() -> impl Strategy<Value = Exact> {
    (-4i64..=4, 1i64..=3, -4i64..=4, 1i64..=3).prop_map(|(a, b, c, d)| gauss((a, b), (c, d)))
}

pub fn monomial(max: u32) -> impl Strategy<Value = Monomial> {
    (0..=max, 0..=max).prop_map(|(j, k)| Monomial::new(j, k))
}

pub fn element(q: DeformationParameter<Exact>, max: u32) -> impl Strategy<Value = Element<Exact>> {
    prop::collection::vec((monomial(max), small_coeff()), 0..=4)
        .prop_map(move |terms| Element::from_terms(q.clone(), terms))
}

pub fn random_coeff(rng: &mut impl Rng) -> Exact {
    gauss(
        (rng.random_range(-5..=5), rng.random_range(1..=4)),
        (rng.random_range(-5..=5), rng.random_range(1..=4)),
    )
}

pub fn random_element(
    rng: &mut impl Rng,
    q: &DeformationParameter<Exact>,
    max: u32,
    terms: usize,
) -> Element<Exact> {
    let n = rng.random_range(1..=terms);
    Element::from_terms(
        q.clone(),
        (0..n).map(|_| {
            (
                Monomial::new(rng.random_range(0..=max), rng.random_range(0..=max)),
                random_coeff(rng),
            )
        }),
    )
}
