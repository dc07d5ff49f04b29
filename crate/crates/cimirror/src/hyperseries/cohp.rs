//! Laurent polynomials in ħ and truncated cohomology classes of P^n.

use crate::exactalg::rat::rat_pow;
use crate::exactalg::{fmt_rat, Coeff, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Finite sum Σ c_k ħ^k, k ∈ ℤ.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HLaurent {
    t: BTreeMap<i32, Rat>,
}

impl HLaurent {
    pub fn zero() -> Self {
        HLaurent { t: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::mono(Rat::one(), 0)
    }

    pub fn constant(c: Rat) -> Self {
        Self::mono(c, 0)
    }

    /// `c ħ^k`.
    pub fn mono(c: Rat, k: i32) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(k, c);
        }
        HLaurent { t }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rat)> {
        self.t.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i32) -> Rat {
        self.t.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_empty()
    }

    pub fn as_monomial(&self) -> Option<(i32, &Rat)> {
        if self.t.len() == 1 {
            self.t.iter().next().map(|(k, c)| (*k, c))
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.t.clone();
        for (k, c) in &o.t {
            let e = t.entry(*k).or_insert_with(Rat::zero);
            *e += c;
            if e.is_zero() {
                t.remove(k);
            }
        }
        HLaurent { t }
    }

    pub fn neg(&self) -> Self {
        HLaurent { t: self.t.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut t: BTreeMap<i32, Rat> = BTreeMap::new();
        for (a, x) in &self.t {
            for (b, y) in &o.t {
                *t.entry(a + b).or_insert_with(Rat::zero) += x * y;
            }
        }
        t.retain(|_, c| !c.is_zero());
        HLaurent { t }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        HLaurent { t: self.t.iter().map(|(k, c)| (*k, c * r)).collect() }
    }

    /// Multiplies by ħ^k.
    pub fn shift(&self, k: i32) -> Self {
        HLaurent { t: self.t.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn inv(&self) -> Option<Self> {
        let (k, c) = self.as_monomial()?;
        Some(Self::mono(c.recip(), -k))
    }

    /// Value at a nonzero rational ħ.
    pub fn eval(&self, h: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (k, c) in &self.t {
            let p = rat_pow(h, k.unsigned_abs());
            acc += if *k >= 0 { c * p } else { c / p };
        }
        acc
    }
}

impl fmt::Display for HLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.t.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .t
            .iter()
            .rev()
            .map(|(k, c)| match k {
                0 => fmt_rat(c),
                1 => format!("{}*h", fmt_rat(c)),
                _ => format!("{}*h^{}", fmt_rat(c), k),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Coeff for HLaurent {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::one()
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn c_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn c_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn c_neg(&self) -> Self {
        self.neg()
    }
    fn c_scale(&self, r: &Rat) -> Self {
        self.scale(r)
    }
    fn c_inv(&self) -> Option<Self> {
        self.inv()
    }
}

/// Element of Q[ħ, ħ⁻¹][P]/(P^{n+1}), stored by powers P^0..P^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohP {
    c: Vec<HLaurent>,
}

impl CohP {
    pub fn zero(n: usize) -> Self {
        CohP { c: vec![HLaurent::zero(); n + 1] }
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, HLaurent::one())
    }

    pub fn scalar(n: usize, x: HLaurent) -> Self {
        let mut c = Self::zero(n);
        c.c[0] = x;
        c
    }

    /// `P^k` (zero when k > n).
    pub fn p_power(n: usize, k: usize) -> Self {
        let mut c = Self::zero(n);
        if k <= n {
            c.c[k] = HLaurent::one();
        }
        c
    }

    /// `a P + b ħ^e`, the shape of every factor in Γ(d).
    pub fn linear(n: usize, a: Rat, b: Rat, e: i32) -> Self {
        let mut c = Self::zero(n);
        c.c[0] = HLaurent::mono(b, e);
        if n >= 1 {
            c.c[1] = HLaurent::constant(a);
        }
        c
    }

    pub fn from_components(c: Vec<HLaurent>) -> Self {
        assert!(!c.is_empty());
        CohP { c }
    }

    pub fn n(&self) -> usize {
        self.c.len() - 1
    }

    pub fn component(&self, k: usize) -> &HLaurent {
        &self.c[k]
    }

    pub fn components(&self) -> &[HLaurent] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(HLaurent::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        CohP { c: self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CohP { c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        CohP { c: self.c.iter().map(HLaurent::neg).collect() }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CohP { c: self.c.iter().map(|a| a.scale(r)).collect() }
    }

    pub fn scale_h(&self, x: &HLaurent) -> Self {
        CohP { c: self.c.iter().map(|a| a.mul(x)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n();
        let mut c = vec![HLaurent::zero(); n + 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    c[i + j] = c[i + j].add(&a.mul(b));
                }
            }
        }
        CohP { c }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.n()), |acc, _| acc.mul(self))
    }

    /// Inverse in the local ring; the P^0 component must be a ħ-monomial.
    pub fn inv(&self) -> Option<Self> {
        let n = self.n();
        let c0_inv = self.c[0].inv()?;
        // self = c0 (1 + u) with u nilpotent
        let mut u = self.scale_h(&c0_inv);
        u.c[0] = HLaurent::zero();
        let neg_u = u.neg();
        let mut acc = Self::one(n);
        let mut term = Self::one(n);
        for _ in 0..n {
            term = term.mul(&neg_u);
            acc = acc.add(&term);
        }
        Some(acc.scale_h(&c0_inv))
    }

    /// Multiplication by P.
    pub fn times_p(&self) -> Self {
        let n = self.n();
        let mut c = vec![HLaurent::zero(); n + 1];
        c[1..].clone_from_slice(&self.c[..n]);
        CohP { c }
    }
}

impl fmt::Display for CohP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| format!("({x})*P^{k}")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Coeff for CohP {
    fn zero_like(&self) -> Self {
        Self::zero(self.n())
    }
    fn one_like(&self) -> Self {
        Self::one(self.n())
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn c_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn c_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn c_neg(&self) -> Self {
        self.neg()
    }
    fn c_scale(&self, r: &Rat) -> Self {
        self.scale(r)
    }
    fn c_inv(&self) -> Option<Self> {
        self.inv()
    }
    fn compatible(&self, o: &Self) -> bool {
        self.n() == o.n()
    }
}
