//! Rational functions with an expanded numerator and a factored denominator.
//!
//! Denominator factors are primitive (coprime integer coefficients, positive
//! leading coefficient) and non-constant; constants live in the numerator.
//! Cancellation is trial division of the numerator by each factor, which is a
//! full reduction whenever the factors are irreducible (linear forms, the
//! common case here). No multivariate gcd is ever computed.

use super::mpoly::{same_ctx, Ctx, MPoly};
use super::rat::{fmt_rat, Rat};
use num_traits::{One, Zero};
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatFuncError {
    #[error("denominator vanishes")]
    DenominatorVanishes,
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable {0} has no assigned value")]
    Unassigned(String),
    #[error("pole at infinity in variable {0}")]
    PoleAtInfinity(String),
}

#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MPoly,
    den: BTreeMap<MPoly, u32>,
}

fn push_factor(den: &mut BTreeMap<MPoly, u32>, num: &mut MPoly, f: &MPoly, e: u32) -> Result<(), RatFuncError> {
    if e == 0 {
        return Ok(());
    }
    if f.is_zero() {
        return Err(RatFuncError::DivisionByZero);
    }
    let (c, mut p) = f.primitive();
    *num = num.scale(&super::rat::rat_pow(&c, e).recip());
    if p.is_constant() {
        return Ok(());
    }
    if p.len() == 1 {
        // a monomial splits into variable factors
        let m = p.terms()[0].0;
        for i in 0..p.ctx().len() {
            let k = m.exp(i);
            if k > 0 {
                *den.entry(MPoly::var(p.ctx(), i)).or_insert(0) += k * e;
            }
        }
        return Ok(());
    }
    // split off factors already present
    let known: Vec<MPoly> = den.keys().cloned().collect();
    for g in known {
        while let Some(q) = p.div_exact(&g) {
            *den.get_mut(&g).unwrap() += e;
            let (c2, q2) = q.primitive();
            *num = num.scale(&super::rat::rat_pow(&c2, e).recip());
            p = q2;
            if p.is_constant() {
                return Ok(());
            }
        }
    }
    *den.entry(p).or_insert(0) += e;
    Ok(())
}

fn cancel(num: &mut MPoly, den: &mut BTreeMap<MPoly, u32>) {
    if num.is_zero() {
        den.clear();
        return;
    }
    for (f, e) in den.iter_mut() {
        while *e > 0 {
            match num.div_exact(f) {
                Some(q) => {
                    *num = q;
                    *e -= 1;
                }
                None => break,
            }
        }
    }
    den.retain(|_, e| *e > 0);
}

impl RatFunc {
    pub fn zero(ctx: &Ctx) -> Self {
        Self::from_poly(MPoly::zero(ctx))
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::from_poly(MPoly::one(ctx))
    }

    pub fn constant(ctx: &Ctx, c: Rat) -> Self {
        Self::from_poly(MPoly::constant(ctx, c))
    }

    pub fn int(ctx: &Ctx, c: i64) -> Self {
        Self::from_poly(MPoly::int(ctx, c))
    }

    pub fn var(ctx: &Ctx, i: usize) -> Self {
        Self::from_poly(MPoly::var(ctx, i))
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFunc { num: p, den: BTreeMap::new() }
    }

    pub fn new(num: MPoly, den: &MPoly) -> Result<Self, RatFuncError> {
        Self::from_factors(num.ctx(), std::slice::from_ref(&num), std::slice::from_ref(den))
    }

    /// Builds `∏ num / ∏ den`, keeping each denominator factor separate.
    pub fn from_factors(ctx: &Ctx, num: &[MPoly], den: &[MPoly]) -> Result<Self, RatFuncError> {
        let mut n = MPoly::product(ctx, num.iter());
        let mut d = BTreeMap::new();
        for f in den {
            push_factor(&mut d, &mut n, f, 1)?;
        }
        cancel(&mut n, &mut d);
        Ok(RatFunc { num: n, den: d })
    }

    pub fn ctx(&self) -> &Ctx {
        self.num.ctx()
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom_factors(&self) -> impl Iterator<Item = (&MPoly, u32)> {
        self.den.iter().map(|(f, e)| (f, *e))
    }

    /// Expanded denominator.
    pub fn denom(&self) -> MPoly {
        let mut acc = MPoly::one(self.ctx());
        for (f, e) in &self.den {
            acc = &acc * &f.pow(*e);
        }
        acc
    }

    pub fn factor_exponent(&self, f: &MPoly) -> u32 {
        let p = f.primitive().1;
        self.den.get(&p).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&MPoly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.den.is_empty() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.ctx());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    fn check_ctx(&self, o: &Self) {
        assert!(same_ctx(self.ctx(), o.ctx()), "rational functions from different contexts");
    }

    fn lcm_multipliers(&self, o: &Self) -> (BTreeMap<MPoly, u32>, MPoly, MPoly) {
        let mut l = self.den.clone();
        for (f, e) in &o.den {
            let x = l.entry(f.clone()).or_insert(0);
            *x = (*x).max(*e);
        }
        let mut ma = MPoly::one(self.ctx());
        let mut mb = MPoly::one(self.ctx());
        for (f, e) in &l {
            let ea = self.den.get(f).copied().unwrap_or(0);
            let eb = o.den.get(f).copied().unwrap_or(0);
            if *e > ea {
                ma = &ma * &f.pow(e - ea);
            }
            if *e > eb {
                mb = &mb * &f.pow(e - eb);
            }
        }
        (l, ma, mb)
    }

    fn add_impl(&self, o: &Self, negate: bool) -> Self {
        self.check_ctx(o);
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -o } else { o.clone() };
        }
        if self.den == o.den {
            let mut num = if negate { &self.num - &o.num } else { &self.num + &o.num };
            let mut den = self.den.clone();
            cancel(&mut num, &mut den);
            return RatFunc { num, den };
        }
        let (mut den, ma, mb) = self.lcm_multipliers(o);
        let a = &self.num * &ma;
        let b = &o.num * &mb;
        let mut num = if negate { &a - &b } else { &a + &b };
        cancel(&mut num, &mut den);
        RatFunc { num, den }
    }

    fn mul_impl(&self, o: &Self) -> Self {
        self.check_ctx(o);
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.ctx());
        }
        let mut an = self.num.clone();
        let mut bn = o.num.clone();
        let mut ad = self.den.clone();
        let mut bd = o.den.clone();
        cancel(&mut an, &mut bd);
        cancel(&mut bn, &mut ad);
        for (f, e) in bd {
            *ad.entry(f).or_insert(0) += e;
        }
        RatFunc { num: &an * &bn, den: ad }
    }

    pub fn inv(&self) -> Result<Self, RatFuncError> {
        if self.is_zero() {
            return Err(RatFuncError::DivisionByZero);
        }
        let mut num = self.denom();
        let mut den = BTreeMap::new();
        push_factor(&mut den, &mut num, &self.num, 1)?;
        Ok(RatFunc { num, den })
    }

    pub fn div(&self, o: &Self) -> Result<Self, RatFuncError> {
        Ok(self.mul_impl(&o.inv()?))
    }

    /// Division by a polynomial, kept as a separate denominator factor.
    pub fn div_poly(&self, p: &MPoly) -> Result<Self, RatFuncError> {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        push_factor(&mut den, &mut num, p, 1)?;
        cancel(&mut num, &mut den);
        Ok(RatFunc { num, den })
    }

    pub fn mul_poly(&self, p: &MPoly) -> Self {
        self.mul_impl(&Self::from_poly(p.clone()))
    }

    pub fn pow(&self, e: i32) -> Result<Self, RatFuncError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.ctx());
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Full evaluation; `vals[i]` is the value of context variable `i`.
    pub fn eval(&self, vals: &[Rat]) -> Result<Rat, RatFuncError> {
        let mut d = Rat::one();
        for (f, e) in &self.den {
            let v = f.eval(vals);
            if v.is_zero() {
                return Err(RatFuncError::DenominatorVanishes);
            }
            d *= super::rat::rat_pow(&v, *e);
        }
        Ok(self.num.eval(vals) / d)
    }

    /// Replaces `var` by a polynomial.
    pub fn substitute(&self, var: usize, value: &MPoly) -> Result<Self, RatFuncError> {
        let mut num = self.num.substitute(var, value);
        let mut den = BTreeMap::new();
        for (f, e) in &self.den {
            let g = f.substitute(var, value);
            if g.is_zero() {
                return Err(RatFuncError::DenominatorVanishes);
            }
            push_factor(&mut den, &mut num, &g, *e)?;
        }
        cancel(&mut num, &mut den);
        Ok(RatFunc { num, den })
    }

    /// Replaces several variables by rational values.
    pub fn substitute_values(&self, vals: &[(usize, Rat)]) -> Result<Self, RatFuncError> {
        let mut num = self.num.substitute_values(vals);
        let mut den = BTreeMap::new();
        for (f, e) in &self.den {
            let g = f.substitute_values(vals);
            if g.is_zero() {
                return Err(RatFuncError::DenominatorVanishes);
            }
            push_factor(&mut den, &mut num, &g, *e)?;
        }
        cancel(&mut num, &mut den);
        Ok(RatFunc { num, den })
    }

    pub fn degree_in(&self, var: usize) -> (u32, u32) {
        let d = self.den.iter().map(|(f, e)| f.degree_in(var) * e).sum();
        (self.num.degree_in(var), d)
    }

    /// Limit as `var → ∞`; requires numerator degree ≤ denominator degree.
    pub fn limit_at_infinity(&self, var: usize) -> Result<Self, RatFuncError> {
        let (dn, dd) = self.degree_in(var);
        if dn > dd {
            return Err(RatFuncError::PoleAtInfinity(self.ctx().names()[var].clone()));
        }
        if dn < dd {
            return Ok(Self::zero(self.ctx()));
        }
        let mut num = self.num.coeffs_in(var).pop().unwrap_or_else(|| MPoly::zero(self.ctx()));
        let mut den = BTreeMap::new();
        for (f, e) in &self.den {
            let lc = f.coeffs_in(var).pop().unwrap();
            push_factor(&mut den, &mut num, &lc, *e)?;
        }
        cancel(&mut num, &mut den);
        Ok(RatFunc { num, den })
    }

    /// Exact equality by cross-multiplication over the common denominator.
    pub fn equals(&self, o: &Self) -> bool {
        self.check_ctx(o);
        if self.den == o.den {
            return self.num == o.num;
        }
        let (_, ma, mb) = self.lcm_multipliers(o);
        &self.num * &ma == &o.num * &mb
    }

    /// Randomized equality test at `points` random rational assignments.
    /// Points where either denominator vanishes are redrawn.
    pub fn equals_at_random_points<R: Rng>(&self, o: &Self, rng: &mut R, points: usize) -> bool {
        let n = self.ctx().len();
        let mut done = 0;
        let mut attempts = 0;
        while done < points {
            attempts += 1;
            assert!(attempts < 100 * points.max(1), "could not find admissible sample points");
            let vals: Vec<Rat> = (0..n)
                .map(|_| Rat::new(rng.gen_range(-1000i64..=1000).into(), rng.gen_range(1i64..=97).into()))
                .collect();
            match (self.eval(&vals), o.eval(&vals)) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        return false;
                    }
                    done += 1;
                }
                _ => continue,
            }
        }
        true
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        self.equals(o)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, "/(")?;
        for (k, (p, e)) in self.den.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if p.len() > 1 {
                write!(f, "({p})")?;
            } else {
                write!(f, "{p}")?;
            }
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        write!(f, ")")
    }
}

impl RatFunc {
    /// Exact string with rationals in `num/den` form, used for serialization.
    pub fn to_exact_string(&self) -> String {
        match self.constant_value() {
            Some(c) => fmt_rat(&c),
            None => self.to_string(),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, o: &RatFunc) -> RatFunc {
                let f: fn(&RatFunc, &RatFunc) -> RatFunc = $body;
                f(self, o)
            }
        }
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, o: RatFunc) -> RatFunc {
                (&self).$method(&o)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, o: &RatFunc) -> RatFunc {
                (&self).$method(o)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_impl(b, false));
forward_binop!(Sub, sub, |a, b| a.add_impl(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::mpoly::Context;
    use crate::exactalg::rat::{int, rat};

    fn setup() -> (Ctx, MPoly, MPoly, MPoly) {
        let c = Context::new(["l0", "l1", "h"]).unwrap();
        let a = MPoly::var(&c, 0);
        let b = MPoly::var(&c, 1);
        let h = MPoly::var(&c, 2);
        (c, a, b, h)
    }

    #[test]
    fn self_ratio_is_one() {
        let (c, a, b, _) = setup();
        let f = RatFunc::new(&a - &b, &(&a - &b)).unwrap();
        assert_eq!(f, RatFunc::one(&c));
        assert!(f.is_polynomial());
        assert_eq!(f.eval(&[int(3), int(5), int(0)]).unwrap(), int(1));
    }

    #[test]
    fn eval_examples() {
        let (c, _, _, h) = setup();
        let f = RatFunc::new(h.scale(&int(2)), &(&h - &MPoly::one(&c))).unwrap();
        assert_eq!(f.eval(&[int(0), int(0), int(3)]).unwrap(), int(3));
        assert_eq!(f.eval(&[int(0), int(0), int(1)]), Err(RatFuncError::DenominatorVanishes));
    }

    #[test]
    fn addition_cancels() {
        let (c, a, b, h) = setup();
        // 1/(a-b) - 1/(a-b+h) - h/((a-b)(a-b+h)) = 0
        let x = &a - &b;
        let y = &x + &h;
        let t1 = RatFunc::from_factors(&c, &[], std::slice::from_ref(&x)).unwrap();
        let t2 = RatFunc::from_factors(&c, &[], std::slice::from_ref(&y)).unwrap();
        let t3 = RatFunc::from_factors(&c, std::slice::from_ref(&h), &[x, y]).unwrap();
        let s = &(&t1 - &t2) - &t3;
        assert!(s.is_zero());
        assert!(s.is_polynomial());
    }

    #[test]
    fn sign_normalization() {
        let (c, a, b, _) = setup();
        let f = RatFunc::from_factors(&c, &[], &[&b - &a]).unwrap();
        let g = RatFunc::from_factors(&c, &[MPoly::int(&c, -1)], &[&a - &b]).unwrap();
        assert_eq!(f, g);
        assert_eq!(f.denom_factors().count(), 1);
    }

    #[test]
    fn division_and_inverse() {
        let (c, a, b, h) = setup();
        let f = RatFunc::from_factors(&c, &[&a + &h], &[&a - &b, h.clone()]).unwrap();
        let g = f.div(&f).unwrap();
        assert_eq!(g, RatFunc::one(&c));
        let fi = f.inv().unwrap();
        assert_eq!(&f * &fi, RatFunc::one(&c));
        assert!(RatFunc::zero(&c).inv().is_err());
    }

    #[test]
    fn substitution_and_limits() {
        let (c, a, b, h) = setup();
        let f = RatFunc::from_factors(&c, &[&a + &h.scale(&int(2))], &[&(&a - &b) + &h]).unwrap();
        assert_eq!(f.limit_at_infinity(2).unwrap(), RatFunc::int(&c, 2));
        assert_eq!(f.substitute(2, &(&b - &a)), Err(RatFuncError::DenominatorVanishes));
        let g = f.substitute(2, &b).unwrap();
        assert_eq!(g.eval(&[int(1), int(3), int(0)]).unwrap(), int(7));
        let s = f.substitute_values(&[(0, int(1)), (1, int(2))]).unwrap();
        assert_eq!(s.eval(&[int(0), int(0), int(3)]).unwrap(), rat(7, 2));
    }

    #[test]
    fn randomized_equality() {
        use rand::SeedableRng;
        let (c, a, b, _) = setup();
        let f = RatFunc::from_factors(&c, &[&a + &b], &[&a - &b]).unwrap();
        let g = &f + &RatFunc::one(&c);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        assert!(f.equals_at_random_points(&f.clone(), &mut rng, 3));
        assert!(!f.equals_at_random_points(&g, &mut rng, 3));
    }
}
