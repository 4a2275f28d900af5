//! Sparse polynomials in three variables `x1, x2, x3`.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], ordered by total degree
//! and then lexicographically on the exponent triple, so iteration order and
//! printed output are deterministic. No zero coefficient is ever stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Coordinate axis of `R^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
    X3,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X1, Axis::X2, Axis::X3];

    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
            Axis::X3 => 2,
        }
    }
}

/// Exponent triple `x1^e1 x2^e2 x3^e3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn new(e1: u32, e2: u32, e3: u32) -> Self {
        Monomial([e1, e2, e3])
    }

    pub fn unit(axis: Axis) -> Self {
        let mut e = [0; 3];
        e[axis.index()] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> [u32; 3] {
        self.0
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial([self.0[0] + other.0[0], self.0[1] + other.0[1], self.0[2] + other.0[2]])
    }

    /// `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        (0..3).all(|i| self.0[i] <= other.0[i])
    }

    /// All monomials of total degree `d`, largest first.
    pub fn of_degree(d: u32) -> Vec<Monomial> {
        let mut out = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
        for a in (0..=d).rev() {
            for b in (0..=d - a).rev() {
                out.push(Monomial([a, b, d - a - b]));
            }
        }
        out
    }

    /// All monomials of total degree at most `d`, grouped by degree.
    pub fn up_to_degree(d: u32) -> Vec<Monomial> {
        (0..=d).flat_map(Monomial::of_degree).collect()
    }

    /// `prod_i e_i!` as a scalar.
    pub fn factorial<S: Scalar>(&self) -> S {
        self.0
            .iter()
            .map(|&e| falling_factorial(e, e))
            .fold(S::one(), |acc, f| acc * S::from_i64(f))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, e)| format!("x{}^{}", i + 1, e))
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// `n (n-1) ... (n-k+1)`.
fn falling_factorial(n: u32, k: u32) -> i64 {
    ((n - k + 1)..=n).fold(1i64, |acc, v| acc * v as i64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<S> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Default for Polynomial<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: S) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn var(axis: Axis) -> Self {
        Self::term(Monomial::unit(axis), S::one())
    }

    pub fn term(m: Monomial, c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// Collects terms, summing repeated monomials and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, S)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Builds a polynomial with small integer coefficients.
    pub fn from_int_terms(terms: &[(i64, [u32; 3])]) -> Self {
        Self::from_terms(terms.iter().map(|&(c, e)| (Monomial(e), S::from_i64(c))))
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn add_term_ref(&mut self, m: Monomial, c: &S) {
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(m, c.clone());
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Highest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Common degree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let first = self.terms.keys().next()?.degree();
        let last = self.terms.keys().next_back()?.degree();
        (first == last).then_some(first)
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(m, v)| (*m, v.clone() * c)))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn max_abs_coefficient(&self) -> S {
        S::max_abs(self.terms.values())
    }

    /// Drops every coefficient with `|c| <= tol`.
    pub fn cleaned(&self, tol: f64) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| !c.is_negligible(tol))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Formal partial derivative.
    pub fn partial(&self, axis: Axis) -> Self {
        self.derivative(&Monomial::unit(axis))
    }

    /// `d^alpha f` for a multi-index `alpha`.
    pub fn derivative(&self, alpha: &Monomial) -> Self {
        let mut out = Self::zero();
        for (beta, c) in &self.terms {
            if !alpha.divides(beta) {
                continue;
            }
            let factor: i64 = (0..3)
                .map(|i| falling_factorial(beta.0[i], alpha.0[i]))
                .product();
            let rest = Monomial([beta.0[0] - alpha.0[0], beta.0[1] - alpha.0[1], beta.0[2] - alpha.0[2]]);
            out.add_term(rest, c.clone() * S::from_i64(factor));
        }
        out
    }

    /// `phi(d) f`: substitute the partial derivatives into `phi` and apply.
    pub fn apply_operator(phi: &Self, f: &Self) -> Self {
        let mut out = Self::zero();
        for (alpha, c) in &phi.terms {
            for (beta, v) in &f.terms {
                if !alpha.divides(beta) {
                    continue;
                }
                let factor: i64 = (0..3)
                    .map(|i| falling_factorial(beta.0[i], alpha.0[i]))
                    .product();
                let rest = Monomial([beta.0[0] - alpha.0[0], beta.0[1] - alpha.0[1], beta.0[2] - alpha.0[2]]);
                out.add_term(rest, c.clone() * v * &S::from_i64(factor));
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[S; 3]) -> S {
        let Some(top) = self.degree() else {
            return S::zero();
        };
        let powers: Vec<Vec<S>> = point
            .iter()
            .map(|x| {
                let mut p = Vec::with_capacity(top as usize + 1);
                p.push(S::one());
                for k in 1..=top as usize {
                    let next = p[k - 1].clone() * x;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let e = m.0;
            acc += c.clone()
                * &powers[0][e[0] as usize]
                * &powers[1][e[1] as usize]
                * &powers[2][e[2] as usize];
        }
        acc
    }

    /// Product with the linear form `<p, x>`.
    pub fn times_linear(&self, form: &LinearForm<S>) -> Self {
        let mut out = Self::zero();
        for axis in Axis::ALL {
            let p = &form.0[axis.index()];
            if p.is_zero() {
                continue;
            }
            let unit = Monomial::unit(axis);
            for (m, c) in &self.terms {
                out.add_term(m.times(&unit), c.clone() * p);
            }
        }
        out
    }

    /// Coefficients listed against `basis`; monomials outside `basis` are ignored.
    pub fn to_dense(&self, basis: &[Monomial]) -> Vec<S> {
        basis.iter().map(|m| self.coefficient(m)).collect()
    }

    pub fn from_dense(basis: &[Monomial], values: &[S]) -> Self {
        Self::from_terms(basis.iter().copied().zip(values.iter().cloned()))
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut text = c.to_text();
            let negative = text.starts_with('-');
            if negative {
                text.remove(0);
            }
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if *m == Monomial::ONE {
                write!(f, "{text}")?;
            } else {
                write!(f, "{text}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Add for Polynomial<S> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<'b, S: Scalar> Add<&'b Polynomial<S>> for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn add(self, rhs: &'b Polynomial<S>) -> Polynomial<S> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term_ref(*m, c);
        }
        out
    }
}

impl<S: Scalar> Neg for Polynomial<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Polynomial {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<S: Scalar> Sub for Polynomial<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<'b, S: Scalar> Sub<&'b Polynomial<S>> for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn sub(self, rhs: &'b Polynomial<S>) -> Polynomial<S> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'b, S: Scalar> Mul<&'b Polynomial<S>> for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn mul(self, rhs: &'b Polynomial<S>) -> Polynomial<S> {
        let mut out = Polynomial::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.times(b), ca.clone() * cb);
            }
        }
        out
    }
}

impl<S: Scalar> Mul for Polynomial<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

/// The linear form `<p, x>`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm<S>(pub [S; 3]);

impl<S: Scalar> LinearForm<S> {
    pub fn new(p: [S; 3]) -> Self {
        LinearForm(p)
    }

    pub fn to_polynomial(&self) -> Polynomial<S> {
        Polynomial::from_terms(
            Axis::ALL
                .iter()
                .map(|&a| (Monomial::unit(a), self.0[a.index()].clone())),
        )
    }
}

/// `h_m` evaluated at two or three linear forms: the sum of all degree-`m`
/// monomials in the forms, enumerated as exponent multisets.
pub fn complete_symmetric<S: Scalar>(m: u32, forms: &[LinearForm<S>]) -> Result<Polynomial<S>> {
    if !(2..=3).contains(&forms.len()) {
        return Err(Error::FormCount(forms.len()));
    }
    let powers: Vec<Vec<Polynomial<S>>> = forms
        .iter()
        .map(|form| {
            let base = form.to_polynomial();
            let mut p = vec![Polynomial::one()];
            for k in 1..=m as usize {
                let next = &p[k - 1] * &base;
                p.push(next);
            }
            p
        })
        .collect();
    let mut out = Polynomial::zero();
    match forms.len() {
        2 => {
            for i in 0..=m as usize {
                let term = &powers[0][i] * &powers[1][m as usize - i];
                out = out + term;
            }
        }
        _ => {
            for i in 0..=m as usize {
                for j in 0..=(m as usize - i) {
                    let k = m as usize - i - j;
                    let term = &(&powers[0][i] * &powers[1][j]) * &powers[2][k];
                    out = out + term;
                }
            }
        }
    }
    Ok(out)
}

/// `h_0, ..., h_m` of two or three linear forms, from the recurrences
/// `h_n(b, c) = b h_{n-1}(b, c) + c^n` and
/// `h_n(a, b, c) = a h_{n-1}(a, b, c) + h_n(b, c)`.
///
/// Agrees with [`complete_symmetric`] term by term; used when many degrees
/// are needed at once.
pub fn complete_symmetric_series<S: Scalar>(m: u32, forms: &[LinearForm<S>]) -> Result<Vec<Polynomial<S>>> {
    if !(2..=3).contains(&forms.len()) {
        return Err(Error::FormCount(forms.len()));
    }
    let n = forms.len();
    let (b, c) = (&forms[n - 2], &forms[n - 1]);
    let mut c_pow = Polynomial::one();
    let mut two = vec![Polynomial::one()];
    for k in 1..=m as usize {
        c_pow = c_pow.times_linear(c);
        let next = two[k - 1].times_linear(b) + c_pow.clone();
        two.push(next);
    }
    if n == 2 {
        return Ok(two);
    }
    let a = &forms[0];
    let mut three = vec![Polynomial::one()];
    for k in 1..=m as usize {
        let next = three[k - 1].times_linear(a) + two[k].clone();
        three.push(next);
    }
    Ok(three)
}

/// `x1^2 + x2^2 + x3^2`.
pub fn e2<S: Scalar>() -> Polynomial<S> {
    Polynomial::from_int_terms(&[(1, [2, 0, 0]), (1, [0, 2, 0]), (1, [0, 0, 2])])
}

/// `x1 x2 x3`.
pub fn e3<S: Scalar>() -> Polynomial<S> {
    Polynomial::from_int_terms(&[(1, [1, 1, 1])])
}

/// `x2^2 x3^2 + x3^2 x1^2 + x1^2 x2^2`.
pub fn e4<S: Scalar>() -> Polynomial<S> {
    Polynomial::from_int_terms(&[(1, [0, 2, 2]), (1, [2, 0, 2]), (1, [2, 2, 0])])
}

/// `e3^2`.
pub fn e6<S: Scalar>() -> Polynomial<S> {
    e3::<S>().pow(2)
}

/// `(x1^2 - x2^2)(x2^2 - x3^2)(x3^2 - x1^2)`, the fundamental alternating
/// polynomial of the tetrahedral group.
pub fn delta_a3<S: Scalar>() -> Polynomial<S> {
    let d12 = Polynomial::<S>::from_int_terms(&[(1, [2, 0, 0]), (-1, [0, 2, 0])]);
    let d23 = Polynomial::<S>::from_int_terms(&[(1, [0, 2, 0]), (-1, [0, 0, 2])]);
    let d31 = Polynomial::<S>::from_int_terms(&[(1, [0, 0, 2]), (-1, [2, 0, 0])]);
    &(&d12 * &d23) * &d31
}

/// `x1 x2 x3 (x1^2 - x2^2)(x2^2 - x3^2)(x3^2 - x1^2)`, the fundamental
/// alternating polynomial of the octahedral group.
pub fn delta_b3<S: Scalar>() -> Polynomial<S> {
    &e3::<S>() * &delta_a3::<S>()
}

/// Generator of the jumped solution space:
/// `delta_b3 * (5 (x1^4 + x2^4 + x3^4) - 13 e4)`.
pub fn jumped_generator<S: Scalar>() -> Polynomial<S> {
    let quartic = Polynomial::<S>::from_int_terms(&[
        (5, [4, 0, 0]),
        (5, [0, 4, 0]),
        (5, [0, 0, 4]),
        (-13, [2, 2, 0]),
        (-13, [0, 2, 2]),
        (-13, [2, 0, 2]),
    ]);
    &delta_b3::<S>() * &quartic
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type P = Polynomial<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn additive_inverse_is_zero() {
        let x1 = P::var(Axis::X1);
        assert!((x1.clone() + (-x1)).is_zero());
    }

    #[test]
    fn doubling() {
        assert_eq!(e2::<Rational>() + e2::<Rational>(), e2::<Rational>().scale(&q(2)));
    }

    #[test]
    fn e3_squared_is_e6() {
        assert_eq!(&e3::<Rational>() * &e3::<Rational>(), e6::<Rational>());
        assert_eq!(e6::<Rational>().len(), 1);
    }

    #[test]
    fn unit_is_identity() {
        let f = delta_b3::<Rational>();
        assert_eq!(&f * &P::one(), f);
    }

    #[test]
    fn simple_partials() {
        let x1sq = P::from_int_terms(&[(1, [2, 0, 0])]);
        assert_eq!(x1sq.partial(Axis::X1), P::from_int_terms(&[(2, [1, 0, 0])]));
        assert_eq!(e2::<Rational>().partial(Axis::X2), P::from_int_terms(&[(2, [0, 1, 0])]));
        assert!(P::constant(q(7)).partial(Axis::X3).is_zero());
    }

    #[test]
    fn laplacian_of_e2() {
        // e2(d) e2 = d1^2 x1^2 + d2^2 x2^2 + d3^2 x3^2 = 2 + 2 + 2.
        let out = P::apply_operator(&e2(), &e2());
        assert_eq!(out, P::constant(q(6)));
    }

    #[test]
    fn a3_alternating_is_harmonic() {
        assert!(P::apply_operator(&e2(), &delta_a3()).is_zero());
        assert!(P::apply_operator(&e3(), &delta_a3()).is_zero());
        assert!(P::apply_operator(&e4(), &delta_a3()).is_zero());
    }

    #[test]
    fn e4_on_jumped_generator() {
        let out = P::apply_operator(&e4(), &jumped_generator());
        assert_eq!(out, delta_b3::<Rational>().scale(&q(-15120)));
    }

    #[test]
    fn h1_is_sum_of_forms() {
        let p = LinearForm([q(1), q(2), q(-3)]);
        let r = LinearForm([q(5), q(0), q(1)]);
        let h1 = complete_symmetric(1, &[p, r]).unwrap();
        assert_eq!(h1, LinearForm([q(6), q(2), q(-2)]).to_polynomial());
    }

    #[test]
    fn h2_of_coordinate_forms() {
        let a = LinearForm([q(1), q(0), q(0)]);
        let b = LinearForm([q(0), q(1), q(0)]);
        let h2 = complete_symmetric(2, &[a, b]).unwrap();
        assert_eq!(h2, P::from_int_terms(&[(1, [2, 0, 0]), (1, [1, 1, 0]), (1, [0, 2, 0])]));
    }

    #[test]
    fn h0_is_one_and_bad_counts_fail() {
        let a = LinearForm([q(1), q(0), q(0)]);
        assert_eq!(complete_symmetric(0, &[a.clone(), a.clone()]).unwrap(), P::one());
        assert_eq!(complete_symmetric(2, std::slice::from_ref(&a)), Err(Error::FormCount(1)));
        assert_eq!(
            complete_symmetric(2, &[a.clone(), a.clone(), a.clone(), a]),
            Err(Error::FormCount(4))
        );
    }

    #[test]
    fn evaluations() {
        assert_eq!(e2::<Rational>().evaluate(&[q(1), q(1), q(1)]), q(3));
        assert_eq!(delta_b3::<Rational>().evaluate(&[q(1), q(2), q(3)]), q(720));
        assert_eq!(jumped_generator::<Rational>().evaluate(&[q(1), q(1), q(1)]), q(0));
    }

    #[test]
    fn homogeneous_degrees() {
        assert_eq!(delta_b3::<Rational>().homogeneous_degree(), Some(9));
        assert_eq!(jumped_generator::<Rational>().homogeneous_degree(), Some(13));
        assert_eq!((e2::<Rational>() + P::one()).homogeneous_degree(), None);
        assert_eq!(P::zero().homogeneous_degree(), None);
    }

    #[test]
    fn canonical_text() {
        let f = P::from_int_terms(&[(-15120, [1, 1, 1]), (3, [3, 0, 0]), (1, [0, 0, 0])]);
        assert_eq!(f.to_string(), "3*x1^3 - 15120*x1^1*x2^1*x3^1 + 1");
        let g = P::from_terms([(Monomial::new(0, 2, 0), Rational::from_ratio(-1, 2))]);
        assert_eq!(g.to_string(), "-1/2*x2^2");
        assert_eq!(P::zero().to_string(), "0");
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(Monomial::of_degree(13).len(), 105);
        let d3 = Monomial::of_degree(3);
        assert_eq!(d3.first(), Some(&Monomial::new(3, 0, 0)));
        assert_eq!(d3.last(), Some(&Monomial::new(0, 0, 3)));
        assert!(d3.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(Monomial::new(2, 1, 3).factorial::<Rational>(), q(12));
    }

    #[test]
    fn cleanup_drops_small_floats() {
        let f = Polynomial::<f64>::from_terms([
            (Monomial::new(1, 0, 0), 1.0),
            (Monomial::new(0, 1, 0), 1e-18),
        ]);
        assert_eq!(f.cleaned(1e-15).len(), 1);
    }

    /// Expands a product of factors given as term lists, without using
    /// `Polynomial` arithmetic.
    fn brute_expand(factors: &[Vec<(i64, [u32; 3])>]) -> std::collections::HashMap<[u32; 3], i64> {
        let mut acc: std::collections::HashMap<[u32; 3], i64> = [([0, 0, 0], 1)].into_iter().collect();
        for factor in factors {
            let mut next = std::collections::HashMap::new();
            for (e, c) in &acc {
                for (fc, fe) in factor {
                    let key = [e[0] + fe[0], e[1] + fe[1], e[2] + fe[2]];
                    *next.entry(key).or_insert(0) += c * fc;
                }
            }
            acc = next;
        }
        acc.retain(|_, c| *c != 0);
        acc
    }

    fn difference_factors() -> Vec<Vec<(i64, [u32; 3])>> {
        vec![
            vec![(1, [2, 0, 0]), (-1, [0, 2, 0])],
            vec![(1, [0, 2, 0]), (-1, [0, 0, 2])],
            vec![(1, [0, 0, 2]), (-1, [2, 0, 0])],
        ]
    }

    #[test]
    fn delta_a3_expansion() {
        let oracle = brute_expand(&difference_factors());
        let d = delta_a3::<Rational>();
        assert_eq!(d.len(), oracle.len());
        assert_eq!(d.len(), 6);
        assert_eq!(d.coefficient(&Monomial::new(4, 2, 0)), q(-1));
        for (e, c) in oracle {
            assert_eq!(d.coefficient(&Monomial(e)), q(c));
        }
    }

    #[test]
    fn sum_of_alternating_polynomials_has_twelve_terms() {
        let a = brute_expand(&difference_factors());
        let mut with_e3 = difference_factors();
        with_e3.push(vec![(1, [1, 1, 1])]);
        let b = brute_expand(&with_e3);
        let mut sum = a.clone();
        for (e, c) in b {
            *sum.entry(e).or_insert(0) += c;
        }
        sum.retain(|_, c| *c != 0);
        let f = delta_a3::<Rational>() + delta_b3::<Rational>();
        assert_eq!(f.len(), sum.len());
        assert_eq!(f.len(), 12);
    }

    #[test]
    fn partial_of_delta_b3_matches_finite_differences() {
        type F = crate::scalar::Float<100>;
        let d = delta_b3::<Rational>().map(F::from_rational);
        let dx = d.partial(Axis::X1);
        assert_eq!(dx.homogeneous_degree(), Some(8));
        let h = F::from_ratio(1, 10_000_000_000);
        let points = [
            [0.3, -0.7, 1.1],
            [1.5, 0.2, -0.4],
            [-0.9, 0.8, 0.35],
            [0.12, 1.3, -1.7],
            [2.0, -0.6, 0.45],
        ];
        for p in points {
            let p = p.map(|v| Rational::from_ratio((v * 1000.0f64).round() as i64, 1000)).map(|v| F::from_rational(&v));
            let mut plus = p.clone();
            plus[0] += &h;
            let mut minus = p.clone();
            minus[0] -= &h;
            let fd = (d.evaluate(&plus) - d.evaluate(&minus)) / (h.clone() * F::from_i64(2));
            let exact = dx.evaluate(&p);
            let rel = ((fd - &exact) / exact).abs().to_f64();
            assert!(rel < 1e-8, "relative error {rel}");
        }
    }

    #[test]
    fn h3_of_three_forms_has_ten_monomials() {
        let forms: Vec<_> = Axis::ALL
            .iter()
            .map(|&a| {
                let mut v = [q(0), q(0), q(0)];
                v[a.index()] = q(1);
                LinearForm(v)
            })
            .collect();
        let count = (0..=3u32).flat_map(|i| (0..=3 - i).map(move |j| (i, j))).count();
        assert_eq!(count, 10);
        let h3 = complete_symmetric(3, &forms).unwrap();
        assert_eq!(h3.len(), count);
        assert!(h3.terms().all(|(_, c)| *c == q(1)));
    }

    fn small_poly() -> impl Strategy<Value = P> {
        proptest::collection::vec((-5i64..=5, 0u32..=2, 0u32..=2, 0u32..=2), 0..6)
            .prop_map(|terms| P::from_terms(terms.into_iter().map(|(c, a, b, d)| (Monomial::new(a, b, d), q(c)))))
    }

    fn form() -> impl Strategy<Value = LinearForm<Rational>> {
        (-4i64..=4, -4i64..=4, -4i64..=4).prop_map(|(a, b, c)| LinearForm([q(a), q(b), q(c)]))
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn operator_of_product_is_composition(f in small_poly(), g in small_poly(), h in small_poly()) {
            let h = &(&h * &h) * &h;
            let lhs = P::apply_operator(&(&f * &g), &h);
            let rhs = P::apply_operator(&f, &P::apply_operator(&g, &h));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn partials_commute(f in small_poly(), g in small_poly()) {
            let f = &f * &g;
            prop_assert_eq!(f.partial(Axis::X1).partial(Axis::X2), f.partial(Axis::X2).partial(Axis::X1));
            prop_assert_eq!(f.partial(Axis::X3).partial(Axis::X1), f.partial(Axis::X1).partial(Axis::X3));
        }

        #[test]
        fn two_form_recurrence(a in form(), b in form(), m in 1u32..=8) {
            let hm = complete_symmetric(m, &[a.clone(), b.clone()]).unwrap();
            let prev = complete_symmetric(m - 1, &[a.clone(), b.clone()]).unwrap();
            let rhs = prev.times_linear(&a) + b.to_polynomial().pow(m);
            prop_assert_eq!(hm, rhs);
        }

        #[test]
        fn series_matches_enumeration(a in form(), b in form(), c in form(), m in 0u32..=6) {
            let forms = [a, b, c];
            let series = complete_symmetric_series(m, &forms).unwrap();
            prop_assert_eq!(&series[m as usize], &complete_symmetric(m, &forms).unwrap());
            let two = complete_symmetric_series(m, &forms[..2]).unwrap();
            prop_assert_eq!(&two[m as usize], &complete_symmetric(m, &forms[..2]).unwrap());
        }

        #[test]
        fn float_pipeline_tracks_exact_pipeline(f in small_poly(), g in small_poly(), x in -20i64..20, y in -20i64..20, z in 1i64..20) {
            type F = crate::scalar::Float<100>;
            let exact = P::apply_operator(&f, &(&(&f * &g) * &e2::<Rational>()));
            let ff = f.map(F::from_rational);
            let gf = g.map(F::from_rational);
            let float = Polynomial::apply_operator(&ff, &(&(&ff * &gf) * &e2::<F>()));
            let p = [Rational::from_ratio(x, z), Rational::from_ratio(y, z), Rational::from_ratio(z, 7)];
            let want = exact.evaluate(&p);
            let got = float.evaluate(&p.clone().map(|v| F::from_rational(&v)));
            let err = (got - F::from_rational(&want)).abs().to_f64();
            prop_assert!(err <= 1e-20 * want.to_f64().abs().max(1.0), "err {}", err);
        }
    }
}
