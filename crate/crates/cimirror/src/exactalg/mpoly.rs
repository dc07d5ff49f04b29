//! Sparse multivariate polynomials over Q in a named-variable context.
//!
//! Exponent vectors are packed into a `u128`, one byte per variable, so at
//! most 16 variables and per-variable degree 255 are supported. Comparing the
//! packed words gives lexicographic order with variable 0 most significant.

use super::rat::{fmt_rat, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

pub const MAX_VARS: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContextError {
    #[error("too many variables ({0}, at most {MAX_VARS})")]
    TooMany(usize),
    #[error("duplicate variable name {0:?}")]
    Duplicate(String),
}

/// Ordered variable names shared by all polynomials of one computation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context {
    names: Vec<String>,
}

pub type Ctx = Arc<Context>;

impl Context {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Ctx, ContextError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_VARS {
            return Err(ContextError::TooMany(names.len()));
        }
        for (k, a) in names.iter().enumerate() {
            if names[..k].contains(a) {
                return Err(ContextError::Duplicate(a.clone()));
            }
        }
        Ok(Arc::new(Context { names }))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

pub fn same_ctx(a: &Ctx, b: &Ctx) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Packed exponent vector.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono(u128);

const CARRY_BITS: u128 = 0x0101_0101_0101_0101_0101_0101_0101_0100;

impl Mono {
    fn shift(i: usize) -> u32 {
        debug_assert!(i < MAX_VARS);
        8 * (15 - i as u32)
    }

    pub fn one() -> Self {
        Mono(0)
    }

    pub fn var(i: usize, e: u32) -> Self {
        assert!(e < 256, "exponent overflow");
        Mono((e as u128) << Self::shift(i))
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        exps.iter().enumerate().fold(Mono::one(), |m, (i, &e)| m.mul(Mono::var(i, e)))
    }

    pub fn exp(&self, i: usize) -> u32 {
        ((self.0 >> Self::shift(i)) & 0xff) as u32
    }

    pub fn is_one(&self) -> bool {
        self.0 == 0
    }

    pub fn divides(self, o: Mono) -> bool {
        if o.0 < self.0 {
            return false;
        }
        let d = o.0 - self.0;
        (o.0 ^ self.0 ^ d) & CARRY_BITS == 0
    }

    /// `o / self`, assuming `self.divides(o)`.
    pub fn div_into(self, o: Mono) -> Mono {
        debug_assert!(self.divides(o));
        Mono(o.0 - self.0)
    }

    pub fn degree(&self) -> u32 {
        self.0.to_be_bytes().iter().map(|&b| b as u32).sum()
    }

    pub fn without(&self, i: usize) -> Mono {
        Mono(self.0 & !(0xffu128 << Self::shift(i)))
    }
}

impl Mul for Mono {
    type Output = Mono;

    fn mul(self, o: Mono) -> Mono {
        let s = self.0.checked_add(o.0).expect("exponent overflow");
        assert!((self.0 ^ o.0 ^ s) & CARRY_BITS == 0, "exponent overflow");
        Mono(s)
    }
}

/// Polynomial with terms kept sorted in descending monomial order.
#[derive(Clone, Debug)]
pub struct MPoly {
    ctx: Ctx,
    terms: Vec<(Mono, Rat)>,
}

impl PartialEq for MPoly {
    fn eq(&self, o: &Self) -> bool {
        same_ctx(&self.ctx, &o.ctx) && self.terms == o.terms
    }
}

impl Eq for MPoly {}

impl PartialOrd for MPoly {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for MPoly {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.terms.cmp(&o.terms)
    }
}

impl MPoly {
    pub fn zero(ctx: &Ctx) -> Self {
        MPoly { ctx: ctx.clone(), terms: Vec::new() }
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::constant(ctx, Rat::one())
    }

    pub fn constant(ctx: &Ctx, c: Rat) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(Mono::one(), c)] };
        MPoly { ctx: ctx.clone(), terms }
    }

    pub fn int(ctx: &Ctx, c: i64) -> Self {
        Self::constant(ctx, Rat::from_integer(BigInt::from(c)))
    }

    pub fn var(ctx: &Ctx, i: usize) -> Self {
        assert!(i < ctx.len(), "variable index out of range");
        MPoly { ctx: ctx.clone(), terms: vec![(Mono::var(i, 1), Rat::one())] }
    }

    pub fn var_named(ctx: &Ctx, name: &str) -> Option<Self> {
        ctx.index(name).map(|i| Self::var(ctx, i))
    }

    /// `constant + Σ c_k x_k`.
    pub fn linear(ctx: &Ctx, coeffs: &[(usize, Rat)], constant: Rat) -> Self {
        let mut p = Self::constant(ctx, constant);
        for (i, c) in coeffs {
            p = &p + &Self::var(ctx, *i).scale(c);
        }
        p
    }

    pub fn from_terms(ctx: &Ctx, terms: impl IntoIterator<Item = (Mono, Rat)>) -> Self {
        let mut acc: HashMap<Mono, Rat> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Rat::zero) += c;
        }
        Self::from_map(ctx, acc)
    }

    fn from_map(ctx: &Ctx, acc: HashMap<Mono, Rat>) -> Self {
        let mut terms: Vec<(Mono, Rat)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        MPoly { ctx: ctx.clone(), terms }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Mono, Rat)] {
        &self.terms
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

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Constant term (coefficient of the unit monomial).
    pub fn constant_term(&self) -> Rat {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Rat::zero(),
        }
    }

    pub fn leading(&self) -> Option<&(Mono, Rat)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(var)).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(var) > 0)
    }

    /// True when all terms have the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.iter().map(|(m, _)| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        MPoly { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    fn mul_term(&self, m: Mono, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        MPoly { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(a, b)| (a.mul(m), b * c)).collect() }
    }

    fn check_ctx(&self, o: &Self) {
        assert!(same_ctx(&self.ctx, &o.ctx), "polynomials from different contexts");
    }

    fn add_impl(&self, o: &Self, negate: bool) -> Self {
        self.check_ctx(o);
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &o.terms;
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 > b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 > a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        MPoly { ctx: self.ctx.clone(), terms: out }
    }

    fn mul_impl(&self, o: &Self) -> Self {
        self.check_ctx(o);
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ctx);
        }
        if o.terms.len() == 1 {
            return self.mul_term(o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Mono, Rat> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let e = acc.entry(ma.mul(*mb)).or_insert_with(Rat::zero);
                *e += ca * cb;
            }
        }
        Self::from_map(&self.ctx, acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn product<'a>(ctx: &Ctx, it: impl IntoIterator<Item = &'a MPoly>) -> Self {
        it.into_iter().fold(Self::one(ctx), |acc, p| &acc * p)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.check_ctx(d);
        assert!(!d.is_zero(), "division by zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if self.is_zero() {
            return Some(MPoly::zero(&self.ctx));
        }
        // lowest terms multiply, and quotient degrees are bounded per variable
        let low = |p: &Self| p.terms.last().expect("nonzero").0;
        if !low(d).divides(low(self)) {
            return None;
        }
        let nv = self.ctx.len();
        let mut bound = Vec::with_capacity(nv);
        for v in 0..nv {
            bound.push(self.degree_in(v).checked_sub(d.degree_in(v))?);
        }
        let total = self.total_degree().checked_sub(d.total_degree())?;
        let (lm, lc) = d.terms[0].clone();
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut q = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            if !lm.divides(m) {
                return None;
            }
            let qm = lm.div_into(m);
            if qm.degree() > total || (0..nv).any(|v| qm.exp(v) > bound[v]) {
                return None;
            }
            let qc = &c * &lc_inv;
            rem = rem.add_impl(&d.mul_term(qm, &qc), true);
            q.push((qm, qc));
        }
        Some(MPoly { ctx: self.ctx.clone(), terms: q })
    }

    /// Coefficients of `var^0, var^1, ...` as polynomials in the other variables.
    pub fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Mono, Rat)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(var) as usize].push((m.without(var), c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by_key(|x| std::cmp::Reverse(x.0));
                MPoly { ctx: self.ctx.clone(), terms: t }
            })
            .collect()
    }

    pub fn from_coeffs_in(ctx: &Ctx, var: usize, coeffs: &[MPoly]) -> Self {
        let mut acc = Self::zero(ctx);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &c.mul_term(Mono::var(var, k as u32), &Rat::one());
            }
        }
        acc
    }

    /// Replaces `var` by the polynomial `value`.
    pub fn substitute(&self, var: usize, value: &MPoly) -> Self {
        self.check_ctx(value);
        if !self.involves(var) {
            return self.clone();
        }
        let cs = self.coeffs_in(var);
        let mut acc = Self::zero(&self.ctx);
        for c in cs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Replaces the listed variables by rational values.
    pub fn substitute_values(&self, vals: &[(usize, Rat)]) -> Self {
        let mut powers: HashMap<(usize, u32), Rat> = HashMap::new();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut mm = *m;
            let mut cc = c.clone();
            for (i, v) in vals {
                let e = m.exp(*i);
                if e > 0 {
                    mm = mm.without(*i);
                    let pw = powers.entry((*i, e)).or_insert_with(|| super::rat::rat_pow(v, e));
                    cc *= &*pw;
                }
            }
            (mm, cc)
        });
        let collected: Vec<_> = terms.collect();
        Self::from_terms(&self.ctx, collected)
    }

    /// Full evaluation; `vals[i]` is the value of variable `i`.
    pub fn eval(&self, vals: &[Rat]) -> Rat {
        assert!(vals.len() >= self.ctx.len(), "assignment does not cover the context");
        let mut cache: HashMap<(usize, u32), Rat> = HashMap::new();
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, v) in vals.iter().enumerate().take(self.ctx.len()) {
                let e = m.exp(i);
                if e > 0 {
                    let pw = cache.entry((i, e)).or_insert_with(|| super::rat::rat_pow(v, e));
                    t *= &*pw;
                }
            }
            acc += t;
        }
        acc
    }

    /// Splits off the content: `self = c * p` with `p` having coprime integer
    /// coefficients and positive leading coefficient.
    pub fn primitive(&self) -> (Rat, MPoly) {
        if self.is_zero() {
            return (Rat::one(), self.clone());
        }
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        let mut content = Rat::new(g, l);
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Long division in `var`; the divisor's leading coefficient in `var`
    /// must be a nonzero constant.
    pub fn divrem_in(&self, d: &MPoly, var: usize) -> (MPoly, MPoly) {
        let dc = d.coeffs_in(var);
        let dd = dc.len() - 1;
        let lc = dc[dd]
            .constant_value()
            .filter(|c| !c.is_zero())
            .expect("divisor leading coefficient must be a nonzero constant");
        let lc_inv = lc.recip();
        let mut rc = self.coeffs_in(var);
        if rc.len() <= dd {
            return (MPoly::zero(&self.ctx), self.clone());
        }
        let qlen = rc.len() - dd;
        let mut qc = vec![MPoly::zero(&self.ctx); qlen];
        for k in (0..qlen).rev() {
            let t = rc[k + dd].scale(&lc_inv);
            if t.is_zero() {
                continue;
            }
            for (s, dcs) in dc.iter().enumerate() {
                rc[k + s] = &rc[k + s] - &(&t * dcs);
            }
            qc[k] = t;
        }
        rc.truncate(dd);
        (Self::from_coeffs_in(&self.ctx, var, &qc), Self::from_coeffs_in(&self.ctx, var, &rc))
    }

    /// Partial derivative.
    pub fn derivative(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.exp(var) > 0).map(|(m, c)| {
            let e = m.exp(var);
            (m.without(var).mul(Mono::var(var, e - 1)), c * Rat::from_integer(BigInt::from(e)))
        });
        let v: Vec<_> = terms.collect();
        Self::from_terms(&self.ctx, v)
    }

    /// Moves the polynomial into another context by renaming variables;
    /// `map[i]` is the target index of source variable `i`.
    pub fn remap(&self, target: &Ctx, map: &[usize]) -> Self {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut mm = Mono::one();
                for (i, &t) in map.iter().enumerate() {
                    let e = m.exp(i);
                    if e > 0 {
                        mm = mm.mul(Mono::var(t, e));
                    }
                }
                (mm, c.clone())
            })
            .collect();
        Self::from_terms(target, terms)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(fmt_rat(&a));
            }
            for (i, name) in self.ctx.names().iter().enumerate() {
                match m.exp(i) {
                    0 => {}
                    1 => factors.push(name.clone()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, o: &MPoly) -> MPoly {
                let f: fn(&MPoly, &MPoly) -> MPoly = $body;
                f(self, o)
            }
        }
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, o: MPoly) -> MPoly {
                (&self).$method(&o)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, o: &MPoly) -> MPoly {
                (&self).$method(o)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_impl(b, false));
forward_binop!(Sub, sub, |a, b| a.add_impl(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};

    fn ctx3() -> Ctx {
        Context::new(["x", "y", "z"]).unwrap()
    }

    #[test]
    fn mono_packing() {
        let a = Mono::from_exps(&[1, 2, 0]);
        let b = Mono::from_exps(&[0, 1, 3]);
        let c = a.mul(b);
        assert_eq!((c.exp(0), c.exp(1), c.exp(2)), (1, 3, 3));
        assert!(a.divides(c));
        assert!(!c.divides(a));
        assert!(!Mono::from_exps(&[0, 3]).divides(Mono::from_exps(&[1, 2])));
        assert_eq!(a.div_into(c), b);
        assert_eq!(c.degree(), 7);
        assert!(Mono::from_exps(&[1, 0]) > Mono::from_exps(&[0, 9]));
    }

    #[test]
    #[should_panic(expected = "exponent overflow")]
    fn mono_overflow() {
        let a = Mono::var(1, 200);
        let _ = a.mul(a);
    }

    #[test]
    fn arithmetic_and_division() {
        let c = ctx3();
        let x = MPoly::var(&c, 0);
        let y = MPoly::var(&c, 1);
        let z = MPoly::var(&c, 2);
        let p = &(&x + &y) * &(&x - &z);
        let q = &(&y * &z) + &MPoly::int(&c, 3);
        let pq = &p * &q;
        assert_eq!(pq.div_exact(&q).unwrap(), p);
        assert_eq!(pq.div_exact(&p).unwrap(), q);
        assert!(p.div_exact(&q).is_none());
        assert_eq!((&p - &p), MPoly::zero(&c));
        assert_eq!((&x + &y).pow(2), &(&(&x * &x) + (&(&x * &y).scale(&int(2)))) + &(&y * &y));
    }

    #[test]
    fn substitution_and_eval() {
        let c = ctx3();
        let x = MPoly::var(&c, 0);
        let y = MPoly::var(&c, 1);
        let p = &(&x * &x) + &y;
        let s = p.substitute(0, &(&y + &MPoly::int(&c, 1)));
        assert_eq!(s.eval(&[int(0), int(2), int(0)]), int(11));
        assert_eq!(p.eval(&[rat(1, 2), int(1), int(5)]), rat(5, 4));
        let sv = p.substitute_values(&[(1, int(3))]);
        assert_eq!(sv, &(&x * &x) + &MPoly::int(&c, 3));
    }

    #[test]
    fn primitive_part() {
        let c = ctx3();
        let p = MPoly::linear(&c, &[(0, rat(-2, 3)), (1, rat(4, 9))], rat(2, 1));
        let (k, q) = p.primitive();
        assert_eq!(&q.scale(&k), &p);
        assert!(q.terms()[0].1 > Rat::zero());
        assert!(q.terms().iter().all(|(_, c)| c.is_integer()));
    }

    #[test]
    fn long_division_in_variable() {
        let c = ctx3();
        let x = MPoly::var(&c, 0);
        let y = MPoly::var(&c, 1);
        let num = &(&x * &x * &x) + &(&y * &x);
        let den = &x.scale(&int(2)) + &y;
        let (q, r) = num.divrem_in(&den, 0);
        assert_eq!(&(&q * &den) + &r, num);
        assert_eq!(r.degree_in(0), 0);
    }

    #[test]
    fn display() {
        let c = ctx3();
        let p = MPoly::linear(&c, &[(0, int(2)), (2, int(-1))], rat(1, 2));
        assert_eq!(p.to_string(), "2*x - z + 1/2");
    }
}
