//! Hypergeometric classes Γ(d), the series S*, S and S′, and the
//! Picard-Fuchs operators that annihilate them.

pub mod cohp;
pub mod pf;

pub use cohp::{CohP, HLaurent};
pub use pf::{apply_pf, modified_pf_operator, pf_operator, PFOp};

use crate::equivariant::TorusSetup;
use crate::exactalg::rat::{factorial, rat_pow};
use crate::exactalg::{int, LogSeries, MPoly, QSeries, Rat, RatFunc, RatFuncError, SeriesError};
use num_traits::{One, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HyperError {
    #[error("degree regime out of range")]
    RegimeOutOfRange,
    #[error("ambient dimension must be at least 1")]
    BadDimension,
    #[error("hypersurface degrees must be positive")]
    ZeroDegree,
    #[error("index {0} out of range 0..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("S and S* differ by the mirror transformation in the Calabi-Yau regime")]
    CalabiYauTwist,
    #[error("expression is not a unit near P = 0")]
    NotAUnit,
    #[error("variable {0:?} cannot be expanded in P and ħ")]
    ForeignVariable(String),
    #[error("setup has {0} bundle weights but the configuration has {1} equations")]
    WeightCount(usize, usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    Sub,
    Critical,
    CalabiYau,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::Sub => "SUB",
            Regime::Critical => "CRITICAL",
            Regime::CalabiYau => "CALABI_YAU",
        };
        write!(f, "{s}")
    }
}

/// Complete intersection of r hypersurfaces of degrees l_1..l_r in P^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CIConfig {
    n: usize,
    degrees: Vec<usize>,
}

impl CIConfig {
    pub fn new(n: usize, degrees: Vec<usize>) -> Result<Self, HyperError> {
        if n == 0 {
            return Err(HyperError::BadDimension);
        }
        if degrees.contains(&0) {
            return Err(HyperError::ZeroDegree);
        }
        if degrees.iter().sum::<usize>() > n + 1 {
            return Err(HyperError::RegimeOutOfRange);
        }
        Ok(CIConfig { n, degrees })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree_sum(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn regime(&self) -> Regime {
        let s = self.degree_sum();
        if s < self.n {
            Regime::Sub
        } else if s == self.n {
            Regime::Critical
        } else {
            Regime::CalabiYau
        }
    }

    /// Dimension n − r of the complete intersection.
    pub fn dim(&self) -> isize {
        self.n as isize - self.r() as isize
    }

    /// Exponent n + 1 − r of the leading θ-power.
    pub fn codim_exponent(&self) -> usize {
        self.n + 1 - self.r()
    }

    /// ∏ l_a.
    pub fn degree_product(&self) -> Rat {
        self.degrees.iter().fold(Rat::one(), |acc, &l| acc * int(l as i64))
    }

    /// ∏ l_a!.
    pub fn factorial_product(&self) -> Rat {
        self.degrees.iter().fold(Rat::one(), |acc, &l| acc * Rat::from_integer(factorial(l as u64)))
    }

    /// ∏ l_a^{l_a}.
    pub fn self_power_product(&self) -> Rat {
        self.degrees.iter().fold(Rat::one(), |acc, &l| acc * rat_pow(&int(l as i64), l as u32))
    }

    /// `(l_1 d)!…(l_r d)! / (d!)^{n+1}`.
    pub fn hypergeometric_coefficient(&self, d: usize) -> Rat {
        let num = self.degrees.iter().fold(Rat::one(), |acc, &l| acc * Rat::from_integer(factorial((l * d) as u64)));
        num / rat_pow(&Rat::from_integer(factorial(d as u64)), self.n as u32 + 1)
    }
}

impl fmt::Display for CIConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ls: Vec<String> = self.degrees.iter().map(|l| l.to_string()).collect();
        write!(f, "({},({}))", self.n, ls.join(","))
    }
}

/// q-series with CohP coefficients; the factor e^{Pt/ħ} is implicit.
pub type CohSeries = QSeries<CohP>;

/// ∏_a ∏_{m=0}^{l_a d}(l_a P + mħ) / ∏_{m=1}^d (P + mħ)^{n+1} mod P^{n+1}.
pub fn gamma_class(config: &CIConfig, d: usize) -> CohP {
    let n = config.n;
    let mut acc = CohP::one(n);
    for &l in &config.degrees {
        for m in 0..=l * d {
            acc = acc.mul(&CohP::linear(n, int(l as i64), int(m as i64), 1));
        }
    }
    for m in 1..=d {
        let inv = CohP::linear(n, int(1), int(m as i64), 1).inv().expect("unit");
        acc = acc.mul(&inv.pow(n as u32 + 1));
    }
    acc
}

/// Σ_{d≤order} q^d Γ(d), built incrementally.
pub fn build_s_star(config: &CIConfig, order: usize) -> CohSeries {
    let n = config.n;
    let mut cur = gamma_class(config, 0);
    let mut out = vec![cur.clone()];
    for d in 1..=order {
        for &l in &config.degrees {
            for m in l * (d - 1) + 1..=l * d {
                cur = cur.mul(&CohP::linear(n, int(l as i64), int(m as i64), 1));
            }
        }
        let inv = CohP::linear(n, int(1), int(d as i64), 1).inv().expect("unit");
        cur = cur.mul(&inv.pow(n as u32 + 1));
        out.push(cur.clone());
    }
    QSeries::new(out)
}

/// S itself: equal to S* in the SUB regime and to e^{-(∏l_a!)q/ħ} S* in the
/// CRITICAL regime.
pub fn build_s(config: &CIConfig, order: usize) -> Result<CohSeries, HyperError> {
    let star = build_s_star(config, order);
    match config.regime() {
        Regime::Sub => Ok(star),
        Regime::Critical => {
            let n = config.n;
            let l = config.factorial_product();
            let twist = QSeries::from_fn(order, |a| {
                let c = rat_pow(&-l.clone(), a as u32) / Rat::from_integer(factorial(a as u64));
                CohP::scalar(n, HLaurent::mono(c, -(a as i32)))
            });
            Ok(star.mul(&twist)?)
        }
        Regime::CalabiYau => Err(HyperError::CalabiYauTwist),
    }
}

/// s_β = ∫ P^β S: the component of S along P^{n−β}.
pub fn s_beta(config: &CIConfig, s: &CohSeries, beta: usize) -> Result<QSeries<HLaurent>, HyperError> {
    if beta > config.n {
        return Err(HyperError::IndexOutOfRange(beta, config.n));
    }
    Ok(s.map(|c| c.component(config.n - beta).clone()))
}

/// Coefficient of P^{r+β} divided by ∏ l_a, so that S* = ∏l_a Σ_β P^{r+β} s*_β.
pub fn normalized_component(config: &CIConfig, s: &CohSeries, beta: usize) -> Result<QSeries<HLaurent>, HyperError> {
    let k = config.r() + beta;
    if k > config.n {
        return Err(HyperError::IndexOutOfRange(beta, config.n.saturating_sub(config.r())));
    }
    let inv = config.degree_product().recip();
    Ok(s.map(|c| c.component(k).scale(&inv)))
}

/// Component along P^k of e^{Pt/ħ}·s at a numeric ħ, as a polynomial in t
/// with q-series coefficients.
pub fn frobenius_component(s: &CohSeries, k: usize, hbar: &Rat) -> Result<LogSeries, HyperError> {
    let n = s.coeff(0).n();
    if k > n {
        return Err(HyperError::IndexOutOfRange(k, n));
    }
    let parts = (0..=k)
        .map(|j| {
            let w = Rat::one() / (Rat::from_integer(factorial(j as u64)) * rat_pow(hbar, j as u32));
            QSeries::from_fn(s.order(), |d| s.coeff(d).component(k - j).eval(hbar) * &w)
        })
        .collect();
    Ok(LogSeries::from_parts(n, parts)?)
}

fn check_setup(config: &CIConfig, setup: &TorusSetup) -> Result<(), HyperError> {
    if setup.n() != config.n {
        return Err(HyperError::IndexOutOfRange(setup.n(), config.n));
    }
    if setup.r() != config.r() {
        return Err(HyperError::WeightCount(setup.r(), config.r()));
    }
    Ok(())
}

/// C*_i(d) = ∏_a∏_{m=1}^{l_a d}(l_aλ_i−μ_a+mħ) / ∏_{α=0}^n∏_{m=1}^d(λ_i−λ_α+mħ).
pub fn zstar_coefficient(config: &CIConfig, setup: &TorusSetup, i: usize, d: usize) -> Result<RatFunc, HyperError> {
    check_setup(config, setup)?;
    if i > config.n {
        return Err(HyperError::IndexOutOfRange(i, config.n));
    }
    let h = setup.hbar();
    let li = setup.lambda(i);
    let mut num = Vec::new();
    for (a, &l) in config.degrees.iter().enumerate() {
        let base = li.scale(&int(l as i64)) - setup.mu(a);
        for m in 1..=l * d {
            num.push(&base + &h.scale(&int(m as i64)));
        }
    }
    let mut den = Vec::new();
    for alpha in 0..=config.n {
        let base = li - setup.lambda(alpha);
        for m in 1..=d {
            den.push(&base + &h.scale(&int(m as i64)));
        }
    }
    Ok(RatFunc::from_factors(setup.ctx(), &num, &den)?)
}

/// Z*_i = Σ_d q^d C*_i(d).
pub fn build_zstar_equivariant(
    config: &CIConfig,
    setup: &TorusSetup,
    i: usize,
    order: usize,
) -> Result<QSeries<RatFunc>, HyperError> {
    let c = (0..=order).map(|d| zstar_coefficient(config, setup, i, d)).collect::<Result<Vec<_>, _>>()?;
    Ok(QSeries::new(c))
}

/// The coefficient in the rescaled variable Q = q ħ^{-(n+1−Σl)}:
/// ħ^{(n+1−Σl)d} C*_i(d), a function of ω = 1/ħ only through
/// ∏[(l_aλ_i−μ_a)ω+m] / (d! ∏_{α≠i}[(λ_i−λ_α)ω+m]).
pub fn zstar_rescaled_coefficient(
    config: &CIConfig,
    setup: &TorusSetup,
    i: usize,
    d: usize,
) -> Result<RatFunc, HyperError> {
    let c = zstar_coefficient(config, setup, i, d)?;
    let e = ((config.n + 1 - config.degree_sum()) * d) as u32;
    Ok(c.mul_poly(&setup.hbar().pow(e)))
}

/// S′_d(p) = ∏_a∏_{m=0}^{l_a d}(l_a p−μ_a+mħ) / ∏_α∏_{m=1}^d(p−λ_α+mħ).
pub fn s_prime_coefficient(config: &CIConfig, setup: &TorusSetup, d: usize) -> Result<RatFunc, HyperError> {
    check_setup(config, setup)?;
    let h = setup.hbar();
    let p = setup.pvar();
    let mut num = Vec::new();
    for (a, &l) in config.degrees.iter().enumerate() {
        let base = p.scale(&int(l as i64)) - setup.mu(a);
        for m in 0..=l * d {
            num.push(&base + &h.scale(&int(m as i64)));
        }
    }
    let mut den = Vec::new();
    for alpha in 0..=config.n {
        let base = &p - setup.lambda(alpha);
        for m in 1..=d {
            den.push(&base + &h.scale(&int(m as i64)));
        }
    }
    Ok(RatFunc::from_factors(setup.ctx(), &num, &den)?)
}

fn poly_to_cohp(f: &MPoly, p: usize, h: usize, n: usize) -> Result<CohP, HyperError> {
    let names = f.ctx().names().to_vec();
    let mut comps = vec![HLaurent::zero(); n + 1];
    for (mono, c) in f.terms() {
        for (v, name) in names.iter().enumerate() {
            if v != p && v != h && mono.exp(v) > 0 {
                return Err(HyperError::ForeignVariable(name.clone()));
            }
        }
        let k = mono.exp(p) as usize;
        if k <= n {
            comps[k] = comps[k].add(&HLaurent::mono(c.clone(), mono.exp(h) as i32));
        }
    }
    Ok(CohP::from_components(comps))
}

/// Expands a rational function of p and ħ into Q[ħ,ħ⁻¹][P]/(P^{n+1}) with
/// P = p; every denominator factor must be a unit there.
pub fn cohp_from_ratfunc(f: &RatFunc, p: usize, h: usize, n: usize) -> Result<CohP, HyperError> {
    let mut acc = poly_to_cohp(f.numer(), p, h, n)?;
    for (fac, e) in f.denom_factors() {
        let inv = poly_to_cohp(fac, p, h, n)?.inv().ok_or(HyperError::NotAUnit)?;
        acc = acc.mul(&inv.pow(e));
    }
    Ok(acc)
}

/// Checks that `op` kills `s` at every order.
pub fn annihilates(op: &PFOp, s: &CohSeries) -> bool {
    apply_pf(op, s).coeffs().iter().all(CohP::is_zero)
}

/// (P+(d+1)ħ)^{n+1−r} Γ(d+1) − ∏l_j∏_{m=1}^{l_j−1}(l_j(P+dħ)+mħ) Γ(d).
pub fn telescoping_defect(config: &CIConfig, d: usize) -> CohP {
    let n = config.n;
    let lhs = CohP::linear(n, int(1), int(d as i64 + 1), 1)
        .pow(config.codim_exponent() as u32)
        .mul(&gamma_class(config, d + 1));
    let shift = CohP::linear(n, int(1), int(d as i64), 1);
    let mut rhs = gamma_class(config, d);
    for &l in &config.degrees {
        rhs = rhs.scale(&int(l as i64));
        for m in 1..l {
            let f = shift.scale(&int(l as i64)).add(&CohP::scalar(n, HLaurent::mono(int(m as i64), 1)));
            rhs = rhs.mul(&f);
        }
    }
    lhs.sub(&rhs)
}

/// The rational value of a ħ-free Laurent polynomial.
pub fn laurent_is_constant(x: &HLaurent) -> Option<Rat> {
    match x.as_monomial() {
        None if x.is_zero() => Some(Rat::zero()),
        Some((0, c)) => Some(c.clone()),
        _ => None,
    }
}
