//! Sparse multivariate polynomials with exact coefficients.
//!
//! Variables are ordered by index, `x1 < x2 < ... < xn`. Terms are kept in a
//! map keyed by [`Monomial`], whose ordering is lexicographic with the highest
//! variable most significant, so iterating the map backwards yields the
//! canonical display order (leading variable descending, then degree in it
//! descending, then recursively on the rest).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{CoefficientField, Scalar};

/// The variable `x_index`; indices start at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "variable indices start at 1");
        Var(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// Name of this variable in `names`, or `x<index>` when absent.
    pub fn name(self, names: Option<&[String]>) -> String {
        names
            .and_then(|n| n.get(self.0 as usize - 1).cloned())
            .unwrap_or_else(|| format!("x{}", self.0))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A power product, stored as `(variable, exponent)` pairs sorted by variable
/// with no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut acc: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *acc.entry(v).or_insert(0) += e;
        }
        Monomial(acc.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn top_var(&self) -> Option<Var> {
        self.0.last().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// This monomial with `v` removed entirely.
    pub fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect())
    }

    fn render(&self, names: Option<&[String]>) -> String {
        self.0
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    v.name(names)
                } else {
                    format!("{}^{}", v.name(names), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.0.iter().rev();
        let mut b = other.0.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va != vb {
                        return va.cmp(&vb);
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial over `field`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: CoefficientField,
    terms: BTreeMap<Monomial, Scalar>,
}

/// The four ring operations exposed through [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

/// Field-checked ring arithmetic. `Neg` ignores `b` apart from the field check.
pub fn arith(op: ArithOp, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    a.check_field(b)?;
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Neg => -a,
    })
}

/// Result of pseudo-dividing `F` by `T` in `x`:
/// `ini_x(T)^multiplier_exponent * F = quotient * T + remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoDivision {
    pub remainder: Polynomial,
    pub quotient: Polynomial,
    pub multiplier_exponent: u32,
}

impl Polynomial {
    pub fn zero(field: CoefficientField) -> Self {
        Polynomial {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: CoefficientField, c: Scalar) -> Self {
        Self::monomial(field, c, Monomial::one())
    }

    pub fn from_i64(field: CoefficientField, c: i64) -> Self {
        Self::constant(field, field.from_i64(c))
    }

    pub fn one(field: CoefficientField) -> Self {
        Self::from_i64(field, 1)
    }

    pub fn variable(field: CoefficientField, v: Var) -> Self {
        Self::monomial(field, field.one(), Monomial::var_pow(v, 1))
    }

    pub fn monomial(field: CoefficientField, c: Scalar, m: Monomial) -> Self {
        let mut p = Self::zero(field);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(
        field: CoefficientField,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Self {
        let mut p = Self::zero(field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        assert!(self.field.contains(&c), "coefficient outside {}", self.field);
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = self.field.add(existing, &c);
                if self.field.is_zero(&sum) {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn check_field(&self, other: &Polynomial) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for every polynomial without variables, including zero.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_nonzero_constant(&self) -> bool {
        !self.is_zero() && self.is_constant()
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            Some(self.field.zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical display order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    /// `lv(F)`: the greatest variable occurring in `F`, `None` for constants.
    pub fn leading_variable(&self) -> Option<Var> {
        self.terms.keys().filter_map(Monomial::top_var).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// The variables with a positive exponent in some term.
    pub fn support(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.exponents().iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.degree_in(v) > 0)
    }

    /// The coefficient of `v^d` when `self` is viewed as a polynomial in `v`.
    pub fn coeff_in(&self, v: Var, d: u32) -> Polynomial {
        Polynomial::from_terms(
            self.field,
            self.terms
                .iter()
                .filter(|(m, _)| m.degree_in(v) == d)
                .map(|(m, c)| (m.without(v), c.clone())),
        )
    }

    /// `(ini(F), tail(F), d)` with `F = ini * lv^d + tail`.
    pub fn initial_and_tail(&self) -> Result<(Polynomial, Polynomial, u32)> {
        let v = self.leading_variable().ok_or(Error::ConstantHasNoInitial)?;
        let d = self.degree_in(v);
        let init = self.coeff_in(v, d);
        let tail = Polynomial::from_terms(
            self.field,
            self.terms
                .iter()
                .filter(|(m, _)| m.degree_in(v) < d)
                .map(|(m, c)| (m.clone(), c.clone())),
        );
        Ok((init, tail, d))
    }

    pub fn initial(&self) -> Result<Polynomial> {
        self.initial_and_tail().map(|(i, _, _)| i)
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        Polynomial::from_terms(
            self.field,
            self.terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(a, c))),
        )
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial::from_terms(
            self.field,
            self.terms.iter().map(|(n, a)| (n.mul(m), a.clone())),
        )
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Pseudo-division of `self` by `divisor` with respect to `x`.
    ///
    /// Eliminates the leading term in `x` one step at a time, multiplying by
    /// the initial once per step; the returned exponent is the number of
    /// steps actually taken.
    pub fn pseudo_remainder(&self, divisor: &Polynomial, x: Var) -> Result<PseudoDivision> {
        self.check_field(divisor)?;
        let dt = divisor.degree_in(x);
        if dt == 0 {
            return Err(Error::DivisorFreeOfVariable(x.to_string()));
        }
        let init = divisor.coeff_in(x, dt);
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.field);
        let mut k = 0;
        while !rem.is_zero() {
            let dr = rem.degree_in(x);
            if dr < dt {
                break;
            }
            let lc = rem.coeff_in(x, dr);
            let shift = Monomial::var_pow(x, dr - dt);
            let step = lc.mul_monomial(&shift);
            quot = &(&init * &quot) + &step;
            rem = &(&init * &rem) - &(&step * divisor);
            k += 1;
        }
        Ok(PseudoDivision {
            remainder: rem,
            quotient: quot,
            multiplier_exponent: k,
        })
    }

    /// Convenience wrapper returning only the remainder.
    pub fn prem(&self, divisor: &Polynomial, x: Var) -> Result<Polynomial> {
        self.pseudo_remainder(divisor, x).map(|d| d.remainder)
    }

    pub fn evaluate(&self, point: &BTreeMap<Var, Scalar>) -> Result<Scalar> {
        self.evaluate_with(|v| point.get(&v).cloned())
    }

    /// Evaluates with `values[i]` bound to `x_{i+1}`.
    pub fn evaluate_at(&self, values: &[Scalar]) -> Result<Scalar> {
        self.evaluate_with(|v| values.get(v.0 as usize - 1).cloned())
    }

    fn evaluate_with(&self, lookup: impl Fn(Var) -> Option<Scalar>) -> Result<Scalar> {
        let f = self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.exponents() {
                let val = lookup(v).ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
                if !f.contains(&val) {
                    return Err(Error::FieldMismatch(f.to_string(), format!("{val:?}")));
                }
                t = f.mul(&t, &f.pow(&val, e));
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Coefficient-wise image of a rational polynomial in `F_p`.
    pub fn reduce_mod_p(&self, p: u32) -> Result<Polynomial> {
        let target = CoefficientField::prime(p as u64)?;
        match self.field {
            CoefficientField::Prime(q) if q == p => return Ok(self.clone()),
            CoefficientField::Prime(_) => {
                return Err(Error::FieldMismatch(self.field.to_string(), target.to_string()))
            }
            CoefficientField::Rationals => {}
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let Scalar::Rational(q) = c else {
                unreachable!("rational polynomial holds rational coefficients")
            };
            out.add_term(m.clone(), target.from_rational(q)?);
        }
        Ok(out)
    }

    /// Displays with the given variable names (falls back to `x<i>`).
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay {
            poly: self,
            names: Some(names),
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        self.display(names).to_string()
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    names: Option<&'a [String]>,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let field = self.poly.field;
        for (i, (m, c)) in self.poly.terms().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if field.is_one(&mag) {
                write!(f, "{}", m.render(self.names))?;
            } else {
                write!(f, "{mag}*{}", m.render(self.names))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PolyDisplay {
            poly: self,
            names: None,
        }
        .fmt(f)
    }
}

/// Union of the supports of `polys`.
pub fn support_of<'a>(polys: impl IntoIterator<Item = &'a Polynomial>) -> BTreeSet<Var> {
    polys.into_iter().flat_map(|p| p.support()).collect()
}

impl Add for &Polynomial {
    type Output = Polynomial;

    /// Panics on field mismatch; use [`arith`] for a checked version.
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.field, rhs.field, "field-mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.field, rhs.field, "field-mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), self.field.neg(c));
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.field, rhs.field, "field-mismatch");
        let f = self.field;
        let mut out = Polynomial::zero(f);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), f.mul(ca, cb));
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::from_terms(
            self.field,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), self.field.neg(c))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sysparse::parse_polynomial;

    const Q: CoefficientField = CoefficientField::Rationals;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, Q).unwrap()
    }

    fn names(n: u32) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn additive_inverse_is_zero() {
        let a = p("x2+x1");
        assert!((&a + &-&a).is_zero());
        assert!(arith(ArithOp::Add, &a, &-&a).unwrap().is_zero());
    }

    #[test]
    fn multiplication_distributes() {
        assert_eq!(&p("x2+2") * &p("x3"), p("x2*x3 + 2*x3"));
    }

    #[test]
    fn subtraction_matches_monic_linear_prem() {
        assert_eq!(&p("x5+x3+x2") - &p("x5+x2"), p("x3"));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = p("x1");
        let b = a.reduce_mod_p(5).unwrap();
        let err = arith(ArithOp::Mul, &a, &b).unwrap_err();
        assert!(err.to_string().starts_with("field-mismatch"));
    }

    #[test]
    fn leading_variable_cases() {
        assert_eq!(p("x4^2+x2").leading_variable(), Some(Var(4)));
        assert_eq!(p("(x3+x2)*x4 + x3 - 1").leading_variable(), Some(Var(4)));
        assert_eq!(p("5").leading_variable(), None);
    }

    #[test]
    fn initial_and_tail_cases() {
        let (i, t, d) = p("(x3+x2)*x4+x3-1").initial_and_tail().unwrap();
        assert_eq!((i, t, d), (p("x3+x2"), p("x3-1"), 1));
        let (i, t, d) = p("x4^2+x2").initial_and_tail().unwrap();
        assert_eq!((i, t, d), (p("1"), p("x2"), 2));
        let f = p("-x2*x4+x3");
        let (i, t, d) = f.initial_and_tail().unwrap();
        assert_eq!((i.clone(), t.clone(), d), (p("-x2"), p("x3"), 1));
        let x4 = Polynomial::variable(Q, Var(4));
        assert_eq!(&(&i * &x4.pow(d)) + &t, f);
        assert_eq!(p("7").initial_and_tail(), Err(Error::ConstantHasNoInitial));
    }

    #[test]
    fn support_cases() {
        assert_eq!(
            p("x5+x3+x2").support(),
            [Var(2), Var(3), Var(5)].into_iter().collect()
        );
        assert!(p("7").support().is_empty());
        let set = [p("x2+x1"), p("x4^2+x2")];
        assert_eq!(
            support_of(&set),
            [Var(1), Var(2), Var(4)].into_iter().collect()
        );
    }

    #[test]
    fn prem_worked_values() {
        assert_eq!(p("x5+x3+x2").prem(&p("x5+x2"), Var(5)).unwrap(), p("x3"));
        assert_eq!(
            p("x4^3+x3").prem(&p("x4^2+x2"), Var(4)).unwrap(),
            p("-x2*x4+x3")
        );
        assert_eq!(
            p("x4+x2")
                .prem(&p("(x3+x2)*x4+x3-1"), Var(4))
                .unwrap(),
            p("(x2-1)*x3+x2^2+1")
        );
        // A sign slip in the printed version of this example has the cubic
        // term negated; expanding the identity gives +x2^3.
        let d = p("x4^2+x2").pseudo_remainder(&p("-x2*x4+x3"), Var(4)).unwrap();
        assert_eq!(d.remainder, p("x3^2+x2^3"));
        let lhs = &p("-x2").pow(d.multiplier_exponent) * &p("x4^2+x2");
        let rhs = &(&d.quotient * &p("-x2*x4+x3")) + &d.remainder;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn prem_rejects_divisor_without_variable() {
        let err = p("x1").prem(&p("x2"), Var(1)).unwrap_err();
        assert_eq!(err, Error::DivisorFreeOfVariable("x1".into()));
    }

    #[test]
    fn prem_exponent_is_bounded() {
        let f = p("x3*x2^3 + x1*x2 + 1");
        let t = p("x1*x2^2 + x3");
        let d = f.pseudo_remainder(&t, Var(2)).unwrap();
        assert!(d.multiplier_exponent <= 3 - 2 + 1);
        assert!(d.remainder.degree_in(Var(2)) < 2);
    }

    #[test]
    fn evaluation_cases() {
        let mut pt = BTreeMap::new();
        pt.insert(Var(1), Q.from_i64(-1));
        pt.insert(Var(2), Q.from_i64(-1));
        assert_eq!(p("x2+x1+2").evaluate(&pt).unwrap(), Q.zero());
        assert_eq!(Polynomial::zero(Q).evaluate(&BTreeMap::new()).unwrap(), Q.zero());
        let f5 = CoefficientField::Prime(5);
        let g = p("x4^2+x2").reduce_mod_p(5).unwrap();
        let mut pt = BTreeMap::new();
        pt.insert(Var(2), f5.from_i64(1));
        pt.insert(Var(4), f5.from_i64(3));
        assert_eq!(g.evaluate(&pt).unwrap(), f5.zero());
        pt.remove(&Var(2));
        assert_eq!(g.evaluate(&pt), Err(Error::UnboundVariable("x2".into())));
    }

    #[test]
    fn reduction_mod_p_cases() {
        let f3 = CoefficientField::Prime(3);
        assert_eq!(
            p("x2+x1+2").reduce_mod_p(3).unwrap(),
            parse_polynomial("x2+x1+2", f3).unwrap()
        );
        assert_eq!(
            p("1/2*x1").reduce_mod_p(3).unwrap(),
            parse_polynomial("2*x1", f3).unwrap()
        );
        assert_eq!(p("1/3*x1").reduce_mod_p(3), Err(Error::BadPrime(3)));
        assert!(p("x1 + 3").reduce_mod_p(3).unwrap() == parse_polynomial("x1", f3).unwrap());
    }

    #[test]
    fn canonical_display_order() {
        let f = p("x3 - 1 + x4*x3 + x2*x4");
        assert_eq!(f.render(&names(4)), "x3*x4 + x2*x4 + x3 - 1");
        assert_eq!(p("-x2*x4+x3").render(&names(4)), "-x2*x4 + x3");
        assert_eq!(p("1/2*x1^3 - 2/3").render(&names(1)), "1/2*x1^3 - 2/3");
        assert_eq!(Polynomial::zero(Q).to_string(), "0");
    }

    #[test]
    fn monomial_order_is_lex_from_the_top() {
        let a = Monomial::var_pow(Var(4), 1);
        let b = Monomial::var_pow(Var(3), 5);
        assert!(a > b);
        let c = Monomial::from_pairs([(Var(4), 1), (Var(1), 1)]);
        assert!(c > a);
        assert!(Monomial::one() < b);
    }
}
