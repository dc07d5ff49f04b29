//! Truncated power series in q and log-decorated series in (t, q).

use super::mpoly::{same_ctx, MPoly};
use super::rat::{int, Rat};
use super::ratfunc::RatFunc;
use num_traits::{One, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("coefficient ring mismatch")]
    RingMismatch,
    #[error("series has nonzero constant term")]
    NonzeroConstant,
    #[error("series has zero linear coefficient")]
    ZeroLinear,
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("t-degree {0} exceeds the configured maximum {1}")]
    DegreeOverflow(usize, usize),
}

/// Minimal ring interface for series coefficients.
pub trait Coeff: Clone + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn c_is_zero(&self) -> bool;
    fn c_add(&self, o: &Self) -> Self;
    fn c_sub(&self, o: &Self) -> Self;
    fn c_mul(&self, o: &Self) -> Self;
    fn c_neg(&self) -> Self;
    fn c_scale(&self, r: &Rat) -> Self;
    /// Multiplicative inverse when it exists in the ring.
    fn c_inv(&self) -> Option<Self>;
    fn compatible(&self, _o: &Self) -> bool {
        true
    }
}

impl Coeff for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn c_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_scale(&self, r: &Rat) -> Self {
        self * r
    }
    fn c_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Coeff for MPoly {
    fn zero_like(&self) -> Self {
        MPoly::zero(self.ctx())
    }
    fn one_like(&self) -> Self {
        MPoly::one(self.ctx())
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_scale(&self, r: &Rat) -> Self {
        self.scale(r)
    }
    fn c_inv(&self) -> Option<Self> {
        let c = self.constant_value()?;
        if Zero::is_zero(&c) {
            None
        } else {
            Some(MPoly::constant(self.ctx(), c.recip()))
        }
    }
    fn compatible(&self, o: &Self) -> bool {
        same_ctx(self.ctx(), o.ctx())
    }
}

impl Coeff for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.ctx())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.ctx())
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_scale(&self, r: &Rat) -> Self {
        self.scale(r)
    }
    fn c_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn compatible(&self, o: &Self) -> bool {
        same_ctx(self.ctx(), o.ctx())
    }
}

/// Power series `c_0 + c_1 q + … + c_D q^D + O(q^{D+1})`.
#[derive(Clone, Debug)]
pub struct QSeries<C> {
    c: Vec<C>,
}

impl<C: Coeff + PartialEq> PartialEq for QSeries<C> {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl<C: Coeff> QSeries<C> {
    /// Series from its coefficient list; the order is `len − 1`.
    pub fn new(c: Vec<C>) -> Self {
        assert!(!c.is_empty(), "a series needs at least one coefficient");
        QSeries { c }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> C) -> Self {
        QSeries::new((0..=order).map(f).collect())
    }

    pub fn constant(c: C, order: usize) -> Self {
        let z = c.zero_like();
        let mut v = vec![z; order + 1];
        v[0] = c;
        QSeries { c: v }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &C {
        &self.c[k]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.c
    }

    pub fn truncate(&self, order: usize) -> Self {
        QSeries { c: self.c[..=order.min(self.order())].to_vec() }
    }

    fn check(&self, o: &Self) -> Result<(), SeriesError> {
        if self.c[0].compatible(&o.c[0]) {
            Ok(())
        } else {
            Err(SeriesError::RingMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, SeriesError> {
        self.check(o)?;
        let d = self.order().min(o.order());
        Ok(QSeries::from_fn(d, |k| self.c[k].c_add(&o.c[k])))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, SeriesError> {
        self.check(o)?;
        let d = self.order().min(o.order());
        Ok(QSeries::from_fn(d, |k| self.c[k].c_sub(&o.c[k])))
    }

    pub fn neg(&self) -> Self {
        QSeries { c: self.c.iter().map(Coeff::c_neg).collect() }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        QSeries { c: self.c.iter().map(|x| x.c_scale(r)).collect() }
    }

    pub fn scale_by(&self, x: &C) -> Self {
        QSeries { c: self.c.iter().map(|y| y.c_mul(x)).collect() }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, o: &Self) -> Result<Self, SeriesError> {
        self.check(o)?;
        let d = self.order().min(o.order());
        Ok(QSeries::from_fn(d, |k| {
            let mut acc = self.c[0].zero_like();
            for i in 0..=k {
                if self.c[i].c_is_zero() || o.c[k - i].c_is_zero() {
                    continue;
                }
                acc = acc.c_add(&self.c[i].c_mul(&o.c[k - i]));
            }
            acc
        }))
    }

    /// Product with a rational series.
    pub fn mul_rat(&self, o: &QSeries<Rat>) -> Self {
        let d = self.order().min(o.order());
        QSeries::from_fn(d, |k| {
            let mut acc = self.c[0].zero_like();
            for i in 0..=k {
                if Zero::is_zero(&o.c[k - i]) || self.c[i].c_is_zero() {
                    continue;
                }
                acc = acc.c_add(&self.c[i].c_scale(&o.c[k - i]));
            }
            acc
        })
    }

    /// exp of a series with zero constant term, by `n e_n = Σ k a_k e_{n−k}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.c[0].c_is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        let d = self.order();
        let mut e: Vec<C> = vec![self.c[0].one_like()];
        for n in 1..=d {
            let mut acc = self.c[0].zero_like();
            for k in 1..=n {
                if self.c[k].c_is_zero() {
                    continue;
                }
                acc = acc.c_add(&self.c[k].c_mul(&e[n - k]).c_scale(&int(k as i64)));
            }
            e.push(acc.c_scale(&Rat::new(1.into(), (n as i64).into())));
        }
        Ok(QSeries { c: e })
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let inv0 = self.c[0].c_inv().ok_or(SeriesError::NotInvertible)?;
        let d = self.order();
        let mut b: Vec<C> = vec![inv0.clone()];
        for n in 1..=d {
            let mut acc = self.c[0].zero_like();
            for k in 1..=n {
                if self.c[k].c_is_zero() {
                    continue;
                }
                acc = acc.c_add(&self.c[k].c_mul(&b[n - k]));
            }
            b.push(acc.c_mul(&inv0).c_neg());
        }
        Ok(QSeries { c: b })
    }

    /// `q d/dq`.
    pub fn theta(&self) -> Self {
        QSeries { c: self.c.iter().enumerate().map(|(k, x)| x.c_scale(&int(k as i64))).collect() }
    }

    /// Multiplies by `q^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let z = self.c[0].zero_like();
        QSeries::from_fn(self.order(), |i| if i >= k { self.c[i - k].clone() } else { z.clone() })
    }

    /// `self(b(q))` for a rational series `b` with zero constant term.
    pub fn compose(&self, b: &QSeries<Rat>) -> Result<Self, SeriesError> {
        if !Zero::is_zero(&b.c[0]) {
            return Err(SeriesError::NonzeroConstant);
        }
        let d = self.order().min(b.order());
        let mut acc = QSeries::constant(self.c[d].clone(), d);
        for k in (0..d).rev() {
            acc = acc.mul_rat(&b.truncate(d));
            acc.c[0] = acc.c[0].c_add(&self.c[k]);
        }
        Ok(acc)
    }

    pub fn map<D: Coeff>(&self, f: impl FnMut(&C) -> D) -> QSeries<D> {
        QSeries { c: self.c.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Coeff::c_is_zero)
    }
}

impl QSeries<Rat> {
    /// The series `q` to the given order.
    pub fn q(order: usize) -> Self {
        QSeries::from_fn(order, |k| if k == 1 { Rat::one() } else { Rat::zero() })
    }

    pub fn from_ints(v: &[i64]) -> Self {
        QSeries::new(v.iter().map(|&x| int(x)).collect())
    }

    /// Compositional inverse of a series `a_1 q + a_2 q² + …` with `a_1 ≠ 0`.
    pub fn revert(&self) -> Result<Self, SeriesError> {
        if !Zero::is_zero(&self.c[0]) {
            return Err(SeriesError::NonzeroConstant);
        }
        let d = self.order();
        if d == 0 {
            return Ok(self.clone());
        }
        if Zero::is_zero(&self.c[1]) {
            return Err(SeriesError::ZeroLinear);
        }
        let a1_inv = self.c[1].recip();
        let mut b = QSeries::q(d).scale(&a1_inv);
        for k in 2..=d {
            let comp = self.compose(&b)?;
            let err = comp.c[k].clone();
            b.c[k] -= err * &a1_inv;
        }
        Ok(b)
    }
}

pub fn series_mul<C: Coeff>(a: &QSeries<C>, b: &QSeries<C>) -> Result<QSeries<C>, SeriesError> {
    a.mul(b)
}

pub fn series_exp<C: Coeff>(a: &QSeries<C>) -> Result<QSeries<C>, SeriesError> {
    a.exp()
}

pub fn series_revert(a: &QSeries<Rat>) -> Result<QSeries<Rat>, SeriesError> {
    a.revert()
}

/// Polynomial in a formal symbol `t` with rational q-series coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries {
    parts: Vec<QSeries<Rat>>,
    max_deg: usize,
}

impl LogSeries {
    pub fn zero(max_deg: usize, order: usize) -> Self {
        LogSeries { parts: vec![QSeries::constant(Rat::zero(), order); max_deg + 1], max_deg }
    }

    /// `Σ_k t^k parts[k]`.
    pub fn from_parts(max_deg: usize, parts: Vec<QSeries<Rat>>) -> Result<Self, SeriesError> {
        let order = parts.iter().map(QSeries::order).min().unwrap_or(0);
        let mut out = Self::zero(max_deg, order);
        for (k, p) in parts.into_iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if k > max_deg {
                return Err(SeriesError::DegreeOverflow(k, max_deg));
            }
            out.parts[k] = p.truncate(order);
        }
        Ok(out)
    }

    pub fn t_free(s: QSeries<Rat>, max_deg: usize) -> Self {
        let order = s.order();
        let mut out = Self::zero(max_deg, order);
        out.parts[0] = s;
        out
    }

    pub fn order(&self) -> usize {
        self.parts[0].order()
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    /// Coefficient of `t^k`.
    pub fn part(&self, k: usize) -> QSeries<Rat> {
        self.parts.get(k).cloned().unwrap_or_else(|| QSeries::constant(Rat::zero(), self.order()))
    }

    pub fn t_degree(&self) -> Option<usize> {
        (0..self.parts.len()).rev().find(|&k| !self.parts[k].is_zero())
    }

    pub fn is_t_free(&self) -> bool {
        self.t_degree().unwrap_or(0) == 0
    }

    fn zip(&self, o: &Self, f: impl Fn(&QSeries<Rat>, &QSeries<Rat>) -> QSeries<Rat>) -> Self {
        let m = self.max_deg.max(o.max_deg);
        let parts = (0..=m).map(|k| f(&self.part(k), &o.part(k))).collect();
        LogSeries { parts, max_deg: m }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b).expect("rational series"))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b).expect("rational series"))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        LogSeries { parts: self.parts.iter().map(|p| p.scale(r)).collect(), max_deg: self.max_deg }
    }

    pub fn mul_series(&self, s: &QSeries<Rat>) -> Self {
        LogSeries {
            parts: self.parts.iter().map(|p| p.mul(s).expect("rational series")).collect(),
            max_deg: self.max_deg,
        }
    }

    pub fn div_series(&self, s: &QSeries<Rat>) -> Result<Self, SeriesError> {
        Ok(self.mul_series(&s.inverse()?))
    }

    pub fn mul(&self, o: &Self) -> Result<Self, SeriesError> {
        let order = self.order().min(o.order());
        let mut parts = vec![QSeries::constant(Rat::zero(), order); self.max_deg + 1];
        for (i, a) in self.parts.iter().enumerate() {
            for (j, b) in o.parts.iter().enumerate() {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                if i + j > self.max_deg {
                    return Err(SeriesError::DegreeOverflow(i + j, self.max_deg));
                }
                parts[i + j] = parts[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(LogSeries { parts, max_deg: self.max_deg })
    }

    /// `∂/∂t`.
    pub fn d_dt(&self) -> Self {
        let order = self.order();
        let parts = (0..=self.max_deg)
            .map(|k| match self.parts.get(k + 1) {
                Some(p) => p.scale(&int(k as i64 + 1)),
                None => QSeries::constant(Rat::zero(), order),
            })
            .collect();
        LogSeries { parts, max_deg: self.max_deg }
    }

    /// `q ∂/∂q` applied to every t-coefficient.
    pub fn theta(&self) -> Self {
        LogSeries { parts: self.parts.iter().map(QSeries::theta).collect(), max_deg: self.max_deg }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::rat;

    fn s(v: &[Rat]) -> QSeries<Rat> {
        QSeries::new(v.to_vec())
    }

    #[test]
    fn spec_examples() {
        let a = QSeries::from_ints(&[1, 1, 0]);
        let b = QSeries::from_ints(&[1, -1, 0]);
        assert_eq!(series_mul(&a, &b).unwrap(), QSeries::from_ints(&[1, 0, -1]));
        let e = s(&[int(1), int(1), rat(1, 2), rat(1, 6)]);
        assert_eq!(series_mul(&e, &e).unwrap(), s(&[int(1), int(2), int(2), rat(4, 3)]));
        assert_eq!(series_exp(&QSeries::q(3)).unwrap(), e);
        assert_eq!(series_exp(&QSeries::from_ints(&[0, 2, 1])).unwrap(), QSeries::from_ints(&[1, 2, 3]));
        assert_eq!(series_exp(&QSeries::from_ints(&[0, 0])).unwrap(), QSeries::from_ints(&[1, 0]));
        assert!(series_exp(&QSeries::from_ints(&[1, 0])).is_err());
    }

    #[test]
    fn reversion_examples() {
        assert_eq!(series_revert(&QSeries::q(3)).unwrap(), QSeries::q(3));
        let qeq = s(&[int(0), int(1), int(1), rat(1, 2)]);
        assert_eq!(series_revert(&qeq).unwrap(), s(&[int(0), int(1), int(-1), rat(3, 2)]));
        let geo = QSeries::from_ints(&[0, 1, 1, 1]);
        assert_eq!(series_revert(&geo).unwrap(), QSeries::from_ints(&[0, 1, -1, 1]));
        assert_eq!(series_revert(&QSeries::from_ints(&[0, 0, 1])), Err(SeriesError::ZeroLinear));
    }

    #[test]
    fn inverse_and_theta() {
        let a = QSeries::from_ints(&[1, -1, 0, 0]);
        assert_eq!(a.inverse().unwrap(), QSeries::from_ints(&[1, 1, 1, 1]));
        assert_eq!(QSeries::from_ints(&[3, 1, 1]).theta(), QSeries::from_ints(&[0, 1, 2]));
    }

    #[test]
    fn log_series_calculus() {
        let f = QSeries::from_ints(&[1, 2, 3]);
        let l = LogSeries::from_parts(2, vec![f.clone(), f.clone()]).unwrap();
        assert_eq!(l.d_dt().part(0), f);
        assert!(l.d_dt().is_t_free());
        assert_eq!(l.t_degree(), Some(1));
        let sq = l.mul(&l).unwrap();
        assert_eq!(sq.t_degree(), Some(2));
        assert!(sq.mul(&l).is_err());
    }
}
