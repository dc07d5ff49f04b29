//! Differential operators in θ = ħ d/dt with e^t multipliers.

use super::cohp::{CohP, HLaurent};
use super::{CIConfig, CohSeries};
use crate::exactalg::rat::{binomial, rat_pow};
use crate::exactalg::{int, QSeries, Rat};
use std::collections::BTreeMap;
use std::fmt;

/// Σ c_{k,m}(ħ) e^{kt} θ^m, with e^{kt} written to the left of θ^m.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PFOp {
    terms: BTreeMap<(usize, usize), HLaurent>,
}

impl PFOp {
    pub fn zero() -> Self {
        PFOp { terms: BTreeMap::new() }
    }

    pub fn scalar(c: HLaurent) -> Self {
        Self::term(0, 0, c)
    }

    pub fn one() -> Self {
        Self::scalar(HLaurent::one())
    }

    /// `c e^{kt} θ^m`.
    pub fn term(k: usize, m: usize, c: HLaurent) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((k, m), c);
        }
        PFOp { terms }
    }

    /// θ = ħ d/dt.
    pub fn theta() -> Self {
        Self::term(0, 1, HLaurent::one())
    }

    /// Multiplication by e^{kt}.
    pub fn exp_t(k: usize) -> Self {
        Self::term(k, 0, HLaurent::one())
    }

    /// Terms as `(k, m, coefficient)` ordered by `(k, m)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &HLaurent)> {
        self.terms.iter().map(|((k, m), c)| (*k, *m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, k: usize, m: usize, c: HLaurent) {
        let e = self.terms.entry((k, m)).or_default();
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&(k, m));
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((k, m), c) in &o.terms {
            out.insert(*k, *m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        PFOp { terms: self.terms.iter().map(|(key, c)| (*key, c.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &HLaurent) -> Self {
        let mut out = Self::zero();
        for ((k, m), x) in &self.terms {
            out.insert(*k, *m, x.mul(c));
        }
        out
    }

    /// Operator product `self ∘ o`, normal ordered via
    /// θ^m e^{bt} = e^{bt} (θ + bħ)^m.
    pub fn compose(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for ((a, m), x) in &self.terms {
            for ((b, p), y) in &o.terms {
                let xy = x.mul(y);
                for j in 0..=*m {
                    // (θ + bħ)^m = Σ_j C(m,j) (bħ)^{m-j} θ^j
                    let c =
                        Rat::from_integer(binomial(*m as i64, j as i64)) * rat_pow(&int(*b as i64), (*m - j) as u32);
                    let coef = xy.mul(&HLaurent::mono(c, (*m - j) as i32));
                    out.insert(a + b, j + p, coef);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.compose(self))
    }

    /// Substitutes an operator for θ in a θ-polynomial with no e^t terms.
    fn substitute_theta(poly: &[(usize, HLaurent)], d: &PFOp) -> PFOp {
        let mut out = PFOp::zero();
        for (m, c) in poly {
            out = out.add(&d.pow(*m as u32).scale(c));
        }
        out
    }

    /// Value of the operator on `e^{(P/ħ + d)t}` for a fixed degree: returns
    /// the pairs `(k, Σ_m c_{k,m}(P + dħ)^m)`.
    pub fn symbol_at(&self, n: usize, d: usize) -> Vec<(usize, CohP)> {
        let shift = CohP::linear(n, int(1), int(d as i64), 1);
        let mut by_k: BTreeMap<usize, CohP> = BTreeMap::new();
        for ((k, m), c) in &self.terms {
            let v = shift.pow(*m as u32).scale_h(c);
            let e = by_k.entry(*k).or_insert_with(|| CohP::zero(n));
            *e = e.add(&v);
        }
        by_k.into_iter().collect()
    }
}

impl fmt::Display for PFOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((k, m), c)| {
                let mut s = format!("({c})");
                if *k > 0 {
                    s.push_str(&format!("*e^({k}t)"));
                }
                if *m > 0 {
                    s.push_str(&format!("*D^{m}"));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// ∏_j l_j ∏_{m=1}^{l_j-1} (l_j X + mħ) as a polynomial in X, listed as
/// `(power, coefficient)`.
fn degree_polynomial(config: &CIConfig) -> Vec<(usize, HLaurent)> {
    let mut poly: Vec<HLaurent> = vec![HLaurent::one()];
    let mul_linear = |poly: &Vec<HLaurent>, a: Rat, b: HLaurent| {
        let mut out = vec![HLaurent::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            out[i] = out[i].add(&c.mul(&b));
            out[i + 1] = out[i + 1].add(&c.scale(&a));
        }
        out
    };
    for &l in config.degrees() {
        poly = poly.iter().map(|c| c.scale(&int(l as i64))).collect();
        for m in 1..l {
            poly = mul_linear(&poly, int(l as i64), HLaurent::mono(int(m as i64), 1));
        }
    }
    poly.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
}

/// θ^{n+1-r} − e^t ∏_j l_j ∏_{m=1}^{l_j-1}(l_j θ + mħ).
pub fn pf_operator(config: &CIConfig) -> PFOp {
    pf_with_derivation(config, &PFOp::theta())
}

/// The operator above with θ replaced by θ + (∏ l_j!) e^t; it annihilates
/// e^{-(∏ l_j!) e^t/ħ} S*.
pub fn modified_pf_operator(config: &CIConfig) -> PFOp {
    let l = config.factorial_product();
    let d = PFOp::theta().add(&PFOp::term(1, 0, HLaurent::constant(l)));
    pf_with_derivation(config, &d)
}

fn pf_with_derivation(config: &CIConfig, d: &PFOp) -> PFOp {
    let lead = d.pow(config.codim_exponent() as u32);
    let tail = PFOp::substitute_theta(&degree_polynomial(config), d);
    lead.sub(&PFOp::exp_t(1).compose(&tail))
}

/// Applies `op` to e^{Pt/ħ} Σ_d q^d s_d, returning the coefficients of the
/// result (the e^{Pt/ħ} multiplier stays implicit). Orders beyond the input
/// truncation are dropped.
pub fn apply_pf(op: &PFOp, s: &CohSeries) -> CohSeries {
    let order = s.order();
    let n = s.coeff(0).n();
    let mut out = vec![CohP::zero(n); order + 1];
    for d in 0..=order {
        let sd = s.coeff(d);
        if sd.is_zero() {
            continue;
        }
        for (k, sym) in op.symbol_at(n, d) {
            if d + k <= order {
                out[d + k] = out[d + k].add(&sym.mul(sd));
            }
        }
    }
    QSeries::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_normal_orders() {
        // θ ∘ e^t = e^t (θ + ħ)
        let a = PFOp::theta().compose(&PFOp::exp_t(1));
        let b = PFOp::term(1, 1, HLaurent::one()).add(&PFOp::term(1, 0, HLaurent::mono(int(1), 1)));
        assert_eq!(a, b);
    }

    #[test]
    fn cubic_surface_operator() {
        let c = CIConfig::new(3, vec![3]).unwrap();
        let op = pf_operator(&c);
        // θ³ − e^t·3(3θ+ħ)(3θ+2ħ) = θ³ − e^t(27θ² + 27ħθ + 6ħ²)
        let expect = PFOp::term(0, 3, HLaurent::one())
            .sub(&PFOp::term(1, 2, HLaurent::constant(int(27))))
            .sub(&PFOp::term(1, 1, HLaurent::mono(int(27), 1)))
            .sub(&PFOp::term(1, 0, HLaurent::mono(int(6), 2)));
        assert_eq!(op, expect);
    }

    #[test]
    fn hyperplane_operator_is_binomial() {
        let c = CIConfig::new(4, vec![1, 1]).unwrap();
        let expect = PFOp::term(0, 3, HLaurent::one()).sub(&PFOp::exp_t(1));
        assert_eq!(pf_operator(&c), expect);
    }

    #[test]
    fn theta_on_exponential() {
        let s = QSeries::new(vec![CohP::one(2), CohP::zero(2)]);
        let out = apply_pf(&PFOp::theta(), &s);
        assert_eq!(out.coeff(0), &CohP::p_power(2, 1));
        assert!(out.coeff(1).is_zero());
    }
}
