//! Localization recursions for the hypergeometric series and their
//! closed-form solutions.
//!
//! Each regime is solved in its own variable. SUB and CRITICAL work with
//! z_i(Q,ħ) = Z_i(ħ^{n+1−Σl}Q, ħ), whose coefficients are bounded at ħ = ∞.
//! The Calabi-Yau regime works with K_i(d) = ħ^d C_i(d), the coefficients
//! of Z_i(qħ, ħ); there the initial data R_{i,d} is a polynomial of ħ-degree
//! at most d. In the CRITICAL regime the z-variable and the K-variable
//! coincide.

pub mod classp;
pub mod verify;

pub use classp::{classp_check, correlator_phi, solve_classp, ClassPVerdict, Correlator};
pub use verify::{verify_family, verify_recursion_identity, EqualityMode, VerifyReport};

use crate::equivariant::{EquivError, TorusSetup};
use crate::exactalg::linalg::LinalgError;
use crate::exactalg::rat::{factorial, rat_pow};
use crate::exactalg::{int, MPoly, QSeries, Rat, RatFunc, RatFuncError};
use crate::hyperseries::{zstar_coefficient, zstar_rescaled_coefficient, CIConfig, HyperError, Regime};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocrecError {
    #[error(transparent)]
    Config(#[from] HyperError),
    #[error(transparent)]
    Equiv(#[from] EquivError),
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("coefficient requested with i = j = {0}")]
    SameIndex(usize),
    #[error("fixed-point index {0} out of range 0..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("torus weights are not generic up to degree {0}")]
    DegenerateWeights(usize),
    #[error("malformed initial data at (i={i}, d={d}): {reason}")]
    MalformedInitial { i: usize, d: usize, reason: String },
    #[error("operation needs numeric torus weights")]
    NumericOnly,
    #[error("class P solutions are defined for the Calabi-Yau regime only")]
    NotCalabiYau,
    #[error("interpolation at degree {d} produced a non-polynomial correlator")]
    NotPolynomial { d: usize },
}

impl From<crate::exactalg::SeriesError> for LocrecError {
    fn from(e: crate::exactalg::SeriesError) -> Self {
        LocrecError::Config(HyperError::Series(e))
    }
}

/// Configuration, torus weights and a memo of the recursion coefficients.
///
/// The memo uses interior mutability, so a kernel is not shared across
/// threads; build one kernel per thread instead.
#[derive(Debug)]
pub struct RecursionKernel {
    config: CIConfig,
    setup: TorusSetup,
    memo: RefCell<HashMap<(usize, usize, usize), RatFunc>>,
}

impl RecursionKernel {
    pub fn new(config: CIConfig, setup: TorusSetup) -> Result<Self, LocrecError> {
        if setup.n() != config.n() {
            return Err(LocrecError::IndexOutOfRange(setup.n(), config.n()));
        }
        if setup.r() != config.r() {
            return Err(HyperError::WeightCount(setup.r(), config.r()).into());
        }
        Ok(RecursionKernel { config, setup, memo: RefCell::new(HashMap::new()) })
    }

    pub fn config(&self) -> &CIConfig {
        &self.config
    }

    pub fn setup(&self) -> &TorusSetup {
        &self.setup
    }

    pub fn regime(&self) -> Regime {
        self.config.regime()
    }

    pub fn n(&self) -> usize {
        self.config.n()
    }

    fn h(&self) -> usize {
        self.setup.hbar_index()
    }

    fn check_pair(&self, i: usize, j: usize, m: usize) -> Result<(), LocrecError> {
        let n = self.n();
        if i > n {
            return Err(LocrecError::IndexOutOfRange(i, n));
        }
        if j > n {
            return Err(LocrecError::IndexOutOfRange(j, n));
        }
        if i == j {
            return Err(LocrecError::SameIndex(i));
        }
        if m == 0 {
            return Err(LocrecError::ZeroDegree);
        }
        Ok(())
    }

    /// λ_i − λ_j + mħ; the coefficient coeff_i^j(m) has its only ħ-pole here.
    pub fn pole_form(&self, i: usize, j: usize, m: usize) -> MPoly {
        let s = &self.setup;
        &(s.lambda(i) - s.lambda(j)) + &s.hbar().scale(&int(m as i64))
    }

    /// (λ_j − λ_i)/m, the ħ-value at which the pole sits.
    pub fn pole_point(&self, i: usize, j: usize, m: usize) -> MPoly {
        let s = &self.setup;
        (s.lambda(j) - s.lambda(i)).scale(&Rat::new(1.into(), (m as i64).into()))
    }

    /// Numeric setups only: all poles (λ_α−λ_i)/m, α ≠ i, m ≤ d, are
    /// pairwise distinct for every i, and no weight difference vanishes.
    pub fn check_generic(&self, d: usize) -> Result<(), LocrecError> {
        if !self.setup.is_numeric() {
            return Ok(());
        }
        let n = self.n();
        let val = |p: &MPoly| p.constant_value().expect("numeric");
        for i in 0..=n {
            let mut seen = std::collections::BTreeSet::new();
            for j in (0..=n).filter(|&j| j != i) {
                for m in 1..=d {
                    if !seen.insert(val(&self.pole_point(i, j, m))) {
                        return Err(LocrecError::DegenerateWeights(d));
                    }
                }
            }
        }
        Ok(())
    }

    /// The recursion coefficient in the regime's own variable: the z-form
    /// for SUB and CRITICAL, and coeff/(λ_i−λ_j+mħ) for Calabi-Yau.
    pub fn coeff_ij(&self, i: usize, j: usize, m: usize) -> Result<RatFunc, LocrecError> {
        self.check_pair(i, j, m)?;
        if let Some(v) = self.memo.borrow().get(&(i, j, m)) {
            return Ok(v.clone());
        }
        let v = match self.regime() {
            Regime::CalabiYau => self.coeff_k_form(i, j, m)?,
            _ => self.coeff_z_form(i, j, m)?,
        };
        self.memo.borrow_mut().insert((i, j, m), v.clone());
        Ok(v)
    }

    fn bundle_factors(&self, i: usize, m: usize, u: &MPoly) -> Vec<MPoly> {
        let s = &self.setup;
        let mut out = Vec::new();
        for (a, &l) in self.config.degrees().iter().enumerate() {
            let base = s.lambda(i).scale(&int(l as i64)) - s.mu(a);
            for t in 1..=l * m {
                out.push(&base + &u.scale(&int(t as i64)));
            }
        }
        out
    }

    fn tangent_factors(&self, i: usize, j: usize, m: usize, u: &MPoly, include_i: bool) -> Vec<MPoly> {
        let s = &self.setup;
        let mut out = Vec::new();
        for alpha in 0..=self.n() {
            if alpha == i && !include_i {
                continue;
            }
            let base = s.lambda(i) - s.lambda(alpha);
            for t in 1..=m {
                if (alpha, t) != (j, m) {
                    out.push(&base + &u.scale(&int(t as i64)));
                }
            }
        }
        out
    }

    /// ∏∏[l_aλ_i−μ_a+(t/m)Δ]·(Δ/m)^{(n+1−Σl)m−1} /
    /// (m(1+(λ_i−λ_j)/(mħ)) ∏'_{α=0..n}∏_t[λ_i−λ_α+(t/m)Δ]), Δ = λ_j−λ_i.
    pub fn coeff_z_form(&self, i: usize, j: usize, m: usize) -> Result<RatFunc, LocrecError> {
        self.check_pair(i, j, m)?;
        let u = self.pole_point(i, j, m);
        let mut num = self.bundle_factors(i, m, &u);
        let mut den = self.tangent_factors(i, j, m, &u, true);
        let e = ((self.n() + 1 - self.config.degree_sum()) * m) as i64 - 1;
        if e >= 0 {
            num.extend(std::iter::repeat_n(u.clone(), e as usize));
        } else {
            den.push(u.clone());
        }
        // 1/(m(1 + (λ_i−λ_j)/(mħ))) = ħ/(mħ + λ_i − λ_j)
        num.push(self.setup.hbar());
        den.push(self.pole_form(i, j, m));
        Ok(RatFunc::from_factors(self.setup.ctx(), &num, &den)?)
    }

    /// ∏∏[l_aλ_i−μ_a+(t/m)Δ] / (m! ∏'_{α≠i}∏_t[λ_i−λ_α+(t/m)Δ] (λ_i−λ_j+mħ)).
    pub fn coeff_k_form(&self, i: usize, j: usize, m: usize) -> Result<RatFunc, LocrecError> {
        self.check_pair(i, j, m)?;
        let u = self.pole_point(i, j, m);
        let num = self.bundle_factors(i, m, &u);
        let mut den = self.tangent_factors(i, j, m, &u, false);
        den.push(self.pole_form(i, j, m));
        let f = RatFunc::from_factors(self.setup.ctx(), &num, &den)?;
        Ok(f.scale(&Rat::from_integer(factorial(m as u64)).recip()))
    }

    /// The z-form coefficient written with every bracket divided by Δ/m:
    /// ∏∏[(l_aλ_i−μ_a)m/Δ + t] / (m(1+(λ_i−λ_j)/(mħ)) ∏'[(λ_i−λ_α)m/Δ + t]).
    /// Evaluated through field operations only; used as a cross-check.
    pub fn coeff_scaled_display(&self, i: usize, j: usize, m: usize) -> Result<RatFunc, LocrecError> {
        self.check_pair(i, j, m)?;
        let s = &self.setup;
        let ctx = s.ctx();
        let delta = RatFunc::from_poly(s.lambda(j) - s.lambda(i));
        let mq = RatFunc::int(ctx, m as i64);
        let ratio = |x: MPoly| -> Result<RatFunc, RatFuncError> { RatFunc::from_poly(x).mul(&mq).div(&delta) };
        let mut acc = RatFunc::one(ctx);
        for (a, &l) in self.config.degrees().iter().enumerate() {
            let r = ratio(s.lambda(i).scale(&int(l as i64)) - s.mu(a))?;
            for t in 1..=l * m {
                acc = acc.mul(&(&r + &RatFunc::int(ctx, t as i64)));
            }
        }
        for alpha in 0..=self.n() {
            let r = ratio(s.lambda(i) - s.lambda(alpha))?;
            for t in 1..=m {
                if (alpha, t) != (j, m) {
                    acc = acc.div(&(&r + &RatFunc::int(ctx, t as i64)))?;
                }
            }
        }
        let hb = RatFunc::from_poly(s.hbar());
        let corr = RatFunc::one(ctx).add(&RatFunc::from_poly(s.lambda(i) - s.lambda(j)).div(&(&mq * &hb))?);
        Ok(acc.div(&(&mq * &corr))?)
    }

    /// Initial term of the CRITICAL recursion:
    /// Σ_{t=0}^d a^t(−∏l_a!)^{d−t}/(t!(d−t)!), a = ∏(l_aλ_i−μ_a)^{l_a}/∏_{α≠i}(λ_i−λ_α).
    pub fn critical_initial(&self, i: usize, d: usize) -> Result<RatFunc, LocrecError> {
        let s = &self.setup;
        let ctx = s.ctx();
        let mut num = Vec::new();
        for (a, &l) in self.config.degrees().iter().enumerate() {
            let base = s.lambda(i).scale(&int(l as i64)) - s.mu(a);
            num.extend(std::iter::repeat_n(base, l));
        }
        let den: Vec<MPoly> = (0..=self.n()).filter(|&al| al != i).map(|al| s.lambda(i) - s.lambda(al)).collect();
        let a = RatFunc::from_factors(ctx, &num, &den)?;
        let lf = self.config.factorial_product();
        let mut acc = RatFunc::zero(ctx);
        for t in 0..=d {
            let c = rat_pow(&-lf.clone(), (d - t) as u32)
                / Rat::from_integer(factorial(t as u64) * factorial((d - t) as u64));
            acc = acc.add(&a.pow(t as i32)?.scale(&c));
        }
        Ok(acc)
    }

    /// Converts a coefficient C_i(d) (the module's own variable: z-form for
    /// SUB/CRITICAL, q-form for CY) into the recursion variable.
    pub fn to_native(&self, c: &RatFunc, d: usize) -> RatFunc {
        match self.regime() {
            Regime::CalabiYau => c.mul_poly(&self.setup.hbar().pow(d as u32)),
            _ => c.clone(),
        }
    }

    pub fn from_native(&self, k: &RatFunc, d: usize) -> Result<RatFunc, LocrecError> {
        match self.regime() {
            Regime::CalabiYau => Ok(k.div_poly(&self.setup.hbar().pow(d as u32))?),
            _ => Ok(k.clone()),
        }
    }

    /// z-form coefficient to the coefficient of q^d in Z_i:
    /// multiplies by ħ^{−(n+1−Σl)d}.
    pub fn z_to_q(&self, c: &RatFunc, d: usize) -> Result<RatFunc, LocrecError> {
        let e = ((self.n() + 1 - self.config.degree_sum()) * d) as u32;
        Ok(c.div_poly(&self.setup.hbar().pow(e))?)
    }

    pub fn q_to_z(&self, c: &RatFunc, d: usize) -> RatFunc {
        let e = ((self.n() + 1 - self.config.degree_sum()) * d) as u32;
        c.mul_poly(&self.setup.hbar().pow(e))
    }

    pub(crate) fn at_pole(&self, f: &RatFunc, i: usize, j: usize, m: usize) -> Result<RatFunc, LocrecError> {
        f.substitute(self.h(), &self.pole_point(i, j, m)).map_err(|e| match e {
            RatFuncError::DenominatorVanishes => LocrecError::DegenerateWeights(m),
            other => other.into(),
        })
    }

    /// Σ_{j≠i}Σ_{m=1}^d coeff_i^j(m)·W_j(d−m)|_{ħ=(λ_j−λ_i)/m} for native values W.
    pub fn recursion_sum(
        &self,
        i: usize,
        d: usize,
        native: &dyn Fn(usize, usize) -> Result<RatFunc, LocrecError>,
    ) -> Result<RatFunc, LocrecError> {
        let mut acc = RatFunc::zero(self.setup.ctx());
        for j in (0..=self.n()).filter(|&j| j != i) {
            for m in 1..=d {
                let w = self.at_pole(&native(j, d - m)?, i, j, m)?;
                acc = acc.add(&self.coeff_ij(i, j, m)?.mul(&w));
            }
        }
        Ok(acc)
    }
}

/// Initial terms of a recursion: ħ-free values for SUB/CRITICAL, the
/// polynomials R_{i,d} for Calabi-Yau. Missing entries are zero.
#[derive(Clone, Debug, Default)]
pub struct InitialData {
    values: BTreeMap<(usize, usize), RatFunc>,
}

impl InitialData {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn set(&mut self, i: usize, d: usize, v: RatFunc) {
        self.values.insert((i, d), v);
    }

    pub fn get(&self, i: usize, d: usize) -> Option<&RatFunc> {
        self.values.get(&(i, d))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &RatFunc)> {
        self.values.iter().map(|(k, v)| (*k, v))
    }

    /// The exponential initial data of the CRITICAL regime.
    pub fn critical(kernel: &RecursionKernel, order: usize) -> Result<Self, LocrecError> {
        let mut out = Self::default();
        for i in 0..=kernel.n() {
            for d in 1..=order {
                out.set(i, d, kernel.critical_initial(i, d)?);
            }
        }
        Ok(out)
    }

    /// The data R_{i,d} = d!·(polynomial part of K*_i(d)) of the closed form
    /// in the Calabi-Yau regime.
    pub fn from_closed_form(kernel: &RecursionKernel, order: usize) -> Result<Self, LocrecError> {
        let mut out = Self::default();
        for i in 0..=kernel.n() {
            for d in 1..=order {
                let k = closed_form_native(kernel, i, d)?;
                let (poly, _) = split_polynomial_part(&k, kernel.h()).ok_or(LocrecError::MalformedInitial {
                    i,
                    d,
                    reason: "non-monic denominator".into(),
                })?;
                let r = poly.scale(&Rat::from_integer(factorial(d as u64)));
                out.set(i, d, RatFunc::from_poly(r));
            }
        }
        Ok(out)
    }
}

/// Splits f = N/D into (polynomial part, remainder/D) with respect to `var`.
/// Needs the leading coefficient of D in `var` to be constant and the
/// remaining denominator to be expandable.
pub fn split_polynomial_part(f: &RatFunc, var: usize) -> Option<(MPoly, RatFunc)> {
    let den = f.denom();
    if den.degree_in(var) == 0 {
        let c = den.constant_value()?;
        return Some((f.numer().scale(&c.recip()), RatFunc::zero(f.ctx())));
    }
    let lead = den.coeffs_in(var).pop()?;
    if !lead.is_constant() {
        return None;
    }
    let (q, r) = f.numer().divrem_in(&den, var);
    let rest = RatFunc::new(r, &den).ok()?;
    Some((q, rest))
}

/// Solution of a localization recursion up to a given order.
#[derive(Clone, Debug)]
pub struct RecSolution {
    regime: Regime,
    native: Vec<Vec<RatFunc>>,
    initial: InitialData,
    hbar: MPoly,
}

impl RecSolution {
    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn order(&self) -> usize {
        self.native[0].len() - 1
    }

    pub fn initial(&self) -> &InitialData {
        &self.initial
    }

    /// Value in the recursion variable (z-form, or K-form for CY).
    pub fn native(&self, i: usize, d: usize) -> &RatFunc {
        &self.native[i][d]
    }

    /// C_i(d): z-form for SUB/CRITICAL, coefficient of q^d in Z_i for CY.
    pub fn coefficient(&self, i: usize, d: usize) -> RatFunc {
        match self.regime {
            Regime::CalabiYau => self.native[i][d].div_poly(&self.hbar.pow(d as u32)).expect("ħ ≠ 0"),
            _ => self.native[i][d].clone(),
        }
    }

    pub fn series(&self, i: usize) -> QSeries<RatFunc> {
        QSeries::new((0..=self.order()).map(|d| self.coefficient(i, d)).collect())
    }
}

fn validate_initial(kernel: &RecursionKernel, initial: &InitialData) -> Result<(), LocrecError> {
    let h = kernel.h();
    for ((i, d), v) in initial.entries() {
        if i > kernel.n() {
            return Err(LocrecError::IndexOutOfRange(i, kernel.n()));
        }
        let bad = |reason: &str| LocrecError::MalformedInitial { i, d, reason: reason.into() };
        if d == 0 {
            return Err(bad("degree-zero terms are fixed to 1"));
        }
        match kernel.regime() {
            Regime::CalabiYau => {
                if !v.is_polynomial() {
                    return Err(bad("R must be a polynomial"));
                }
                if v.numer().degree_in(h) as usize > d {
                    return Err(bad("R has ħ-degree above d"));
                }
            }
            _ => {
                if v.degree_in(h) != (0, 0) {
                    return Err(bad("initial term must not depend on ħ"));
                }
            }
        }
    }
    Ok(())
}

/// Degree-by-degree solution of the recursion with the given initial data.
pub fn solve_recursion(
    kernel: &RecursionKernel,
    initial: &InitialData,
    order: usize,
) -> Result<RecSolution, LocrecError> {
    validate_initial(kernel, initial)?;
    kernel.check_generic(order)?;
    let n = kernel.n();
    let ctx = kernel.setup.ctx().clone();
    let mut native: Vec<Vec<RatFunc>> = vec![vec![RatFunc::one(&ctx)]; n + 1];
    for d in 1..=order {
        let mut row = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let lookup = |j: usize, e: usize| -> Result<RatFunc, LocrecError> { Ok(native[j][e].clone()) };
            let mut v = kernel.recursion_sum(i, d, &lookup)?;
            if let Some(init) = initial.get(i, d) {
                let init = match kernel.regime() {
                    Regime::CalabiYau => init.scale(&Rat::from_integer(factorial(d as u64)).recip()),
                    _ => init.clone(),
                };
                v = v.add(&init);
            }
            row.push(v);
        }
        for (i, v) in row.into_iter().enumerate() {
            native[i].push(v);
        }
    }
    Ok(RecSolution { regime: kernel.regime(), native, initial: initial.clone(), hbar: kernel.setup.hbar() })
}

/// Closed-form C_i(d): the z-form of C*_i(d) in SUB, its Cauchy product with
/// exp(−∏l_a!·Q) in CRITICAL, and C*_i(d) itself in Calabi-Yau.
pub fn closed_form_c(kernel: &RecursionKernel, i: usize, d: usize) -> Result<RatFunc, LocrecError> {
    let (c, s) = (kernel.config(), kernel.setup());
    match kernel.regime() {
        Regime::Sub => Ok(zstar_rescaled_coefficient(c, s, i, d)?),
        Regime::Critical => {
            let lf = c.factorial_product();
            let mut acc = RatFunc::zero(s.ctx());
            for t in 0..=d {
                let w = rat_pow(&-lf.clone(), (d - t) as u32) / Rat::from_integer(factorial((d - t) as u64));
                acc = acc.add(&zstar_rescaled_coefficient(c, s, i, t)?.scale(&w));
            }
            Ok(acc)
        }
        Regime::CalabiYau => Ok(zstar_coefficient(c, s, i, d)?),
    }
}

/// Closed form in the recursion variable.
pub fn closed_form_native(kernel: &RecursionKernel, i: usize, d: usize) -> Result<RatFunc, LocrecError> {
    Ok(kernel.to_native(&closed_form_c(kernel, i, d)?, d))
}

/// Expansion of a ħ-rational function at ħ = ∞: the coefficients of ħ^0 and
/// ħ^{−1}. Fails when f grows at infinity.
pub fn infinity_terms(f: &RatFunc, h: usize) -> Result<(RatFunc, RatFunc), LocrecError> {
    let ctx = f.ctx();
    let f0 = f.limit_at_infinity(h)?;
    let rest = f.sub(&f0).mul_poly(&MPoly::var(ctx, h));
    let f1 = rest.limit_at_infinity(h)?;
    Ok((f0, f1))
}
