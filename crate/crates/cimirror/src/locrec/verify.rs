//! Checks that a family of coefficients satisfies the recursion.

use super::{closed_form_c, split_polynomial_part, InitialData, LocrecError, RecursionKernel};
use crate::exactalg::rat::factorial;
use crate::exactalg::{Rat, RatFunc};
use crate::hyperseries::Regime;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::ops::{Add, Mul, Sub};

/// How rational-function identities are decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqualityMode {
    /// Partial fractions in ħ: pole structure, one residue identity per pole
    /// and the value (or polynomial part) at ħ = ∞, each cross-multiplied.
    Exact,
    /// Both sides of the recursion assembled and cross-multiplied as a whole.
    Direct,
    /// `Direct` at independent random rational weight points.
    Sampled { points: usize, seed: u64 },
}

impl EqualityMode {
    /// Exact for ambient dimension n ≤ 3, three sampled points above.
    pub fn default_for(n: usize, seed: u64) -> Self {
        if n <= 3 {
            EqualityMode::Exact
        } else {
            EqualityMode::Sampled { points: 3, seed }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub i: usize,
    pub d: usize,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub mode: EqualityMode,
    pub checks: Vec<IdentityCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<(usize, usize)> {
        self.checks.iter().find(|c| !c.passed).map(|c| (c.i, c.d))
    }
}

type Family<'a> = &'a dyn Fn(usize, usize) -> Result<RatFunc, LocrecError>;

/// Initial data the closed forms satisfy: trivial for SUB and Calabi-Yau,
/// exponential for CRITICAL.
pub fn default_initial(kernel: &RecursionKernel, order: usize) -> Result<InitialData, LocrecError> {
    match kernel.regime() {
        Regime::Critical => InitialData::critical(kernel, order),
        _ => Ok(InitialData::trivial()),
    }
}

/// Verifies that the closed-form coefficients solve the recursion for
/// every degree 1..=order.
pub fn verify_recursion_identity(
    kernel: &RecursionKernel,
    order: usize,
    mode: EqualityMode,
) -> Result<VerifyReport, LocrecError> {
    if let EqualityMode::Sampled { points, seed } = mode {
        let mut checks = Vec::new();
        for (k, point) in sample_kernels(kernel, points, seed, order)?.into_iter().enumerate() {
            let initial = default_initial(&point, order)?;
            let family = |i: usize, d: usize| closed_form_c(&point, i, d);
            let rep = verify_family(&point, &family, &initial, order, EqualityMode::Direct)?;
            checks.extend(rep.checks.into_iter().map(|mut c| {
                c.detail = format!("sample {k}: {}", c.detail);
                c
            }));
        }
        return Ok(VerifyReport { mode, checks });
    }
    let initial = default_initial(kernel, order)?;
    let family = |i: usize, d: usize| closed_form_c(kernel, i, d);
    verify_family(kernel, &family, &initial, order, mode)
}

/// Numeric kernels at random generic weight points.
pub fn sample_kernels(
    kernel: &RecursionKernel,
    points: usize,
    seed: u64,
    order: usize,
) -> Result<Vec<RecursionKernel>, LocrecError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = kernel.setup().weight_vars();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < points {
        attempts += 1;
        if attempts > 100 * points.max(1) {
            return Err(LocrecError::DegenerateWeights(order));
        }
        let values: Vec<(usize, Rat)> = vars.iter().map(|&v| (v, random_rat(&mut rng))).collect();
        let Ok((setup, _)) = kernel.setup().specialize(&values) else { continue };
        let k = RecursionKernel::new(kernel.config().clone(), setup)?;
        if k.check_generic(order + 1).is_ok() {
            out.push(k);
        }
    }
    Ok(out)
}

/// `count` reproducible rationals from the same distribution as the weight points.
pub fn random_rats(seed: u64, count: usize) -> Vec<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_rat(&mut rng)).collect()
}

pub(crate) fn random_rat<R: Rng>(rng: &mut R) -> Rat {
    let num: i64 = rng.gen_range(-997..=997);
    let den: i64 = rng.gen_range(1..=61);
    Rat::new(num.into(), den.into())
}

/// Verifies that `family` (coefficients C_i(d) in the module's variable)
/// satisfies the recursion with the given initial terms. In the Calabi-Yau
/// regime missing R_{i,d} are read off from the polynomial part, subject to
/// the degree bound; supplied ones are compared.
pub fn verify_family(
    kernel: &RecursionKernel,
    family: Family<'_>,
    initial: &InitialData,
    order: usize,
    mode: EqualityMode,
) -> Result<VerifyReport, LocrecError> {
    if let EqualityMode::Sampled { points, seed } = mode {
        let mut checks = Vec::new();
        let vars = kernel.setup().weight_vars();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut done = 0;
        let mut attempts = 0;
        while done < points {
            attempts += 1;
            if attempts > 100 * points.max(1) {
                return Err(LocrecError::DegenerateWeights(order));
            }
            let values: Vec<(usize, Rat)> = vars.iter().map(|&v| (v, random_rat(&mut rng))).collect();
            let Ok((setup, spec)) = kernel.setup().specialize(&values) else { continue };
            let point = RecursionKernel::new(kernel.config().clone(), setup)?;
            if point.check_generic(order + 1).is_err() {
                continue;
            }
            let mapped = |i: usize, d: usize| -> Result<RatFunc, LocrecError> { Ok(spec.apply(&family(i, d)?)?) };
            let mut init = InitialData::trivial();
            for ((i, d), v) in initial.entries() {
                init.set(i, d, spec.apply(v)?);
            }
            let rep = match verify_family(&point, &mapped, &init, order, EqualityMode::Direct) {
                Ok(r) => r,
                Err(LocrecError::RatFunc(_)) | Err(LocrecError::DegenerateWeights(_)) => continue,
                Err(e) => return Err(e),
            };
            checks.extend(rep.checks.into_iter().map(|mut c| {
                c.detail = format!("sample {done}: {}", c.detail);
                c
            }));
            done += 1;
        }
        return Ok(VerifyReport { mode, checks });
    }
    let native = |i: usize, d: usize| -> Result<RatFunc, LocrecError> { Ok(kernel.to_native(&family(i, d)?, d)) };
    let mut checks = Vec::new();
    for d in 1..=order {
        for i in 0..=kernel.n() {
            let outcome = match mode {
                EqualityMode::Exact => check_partial_fractions(kernel, &native, initial, i, d),
                _ => check_direct(kernel, &native, initial, i, d),
            };
            let (passed, detail) = match outcome {
                Ok(None) => (true, "ok".to_string()),
                Ok(Some(why)) => (false, why),
                Err(e) => (false, e.to_string()),
            };
            checks.push(IdentityCheck { i, d, passed, detail });
        }
    }
    Ok(VerifyReport { mode, checks })
}

/// The ħ-free initial term (SUB/CRITICAL) or R/d! (Calabi-Yau) if supplied.
fn supplied_initial(kernel: &RecursionKernel, initial: &InitialData, i: usize, d: usize) -> Option<RatFunc> {
    let v = initial.get(i, d)?;
    Some(match kernel.regime() {
        Regime::CalabiYau => v.scale(&Rat::from_integer(factorial(d as u64)).recip()),
        _ => v.clone(),
    })
}

/// Calabi-Yau: checks the polynomial part of f against the bound and the
/// supplied R, returning it.
fn cy_polynomial_part(
    kernel: &RecursionKernel,
    f: &RatFunc,
    initial: &InitialData,
    i: usize,
    d: usize,
) -> Result<Result<RatFunc, String>, LocrecError> {
    let h = kernel.setup().hbar_index();
    let Some((poly, _)) = split_polynomial_part(f, h) else {
        return Ok(Err("denominator is not monic in ħ".into()));
    };
    if poly.degree_in(h) as usize > d {
        return Ok(Err(format!("polynomial part has ħ-degree {} > {d}", poly.degree_in(h))));
    }
    let poly = RatFunc::from_poly(poly);
    if let Some(r) = supplied_initial(kernel, initial, i, d) {
        if !poly.equals(&r) {
            return Ok(Err("polynomial part differs from the supplied R/d!".into()));
        }
    }
    Ok(Ok(poly))
}

fn check_partial_fractions(
    kernel: &RecursionKernel,
    native: Family<'_>,
    initial: &InitialData,
    i: usize,
    d: usize,
) -> Result<Option<String>, LocrecError> {
    let h = kernel.setup().hbar_index();
    let f = native(i, d)?;
    let n = kernel.n();
    // ħ-poles of f must be simple and sit among the recursion poles.
    let mut allowed = Vec::new();
    for j in (0..=n).filter(|&j| j != i) {
        for m in 1..=d {
            allowed.push(kernel.pole_form(i, j, m).primitive().1);
        }
    }
    for (g, e) in f.denom_factors() {
        if g.degree_in(h) == 0 {
            continue;
        }
        if e != 1 || !allowed.contains(g) {
            return Ok(Some(format!("unexpected ħ-pole factor ({g})^{e}")));
        }
    }
    // Residue at each pole against the single recursion term carrying it.
    let mut at_infinity = RatFunc::zero(kernel.setup().ctx());
    for j in (0..=n).filter(|&j| j != i) {
        for m in 1..=d {
            let pole = kernel.pole_form(i, j, m);
            let c = kernel.coeff_ij(i, j, m)?;
            let w = kernel.at_pole(&native(j, d - m)?, i, j, m)?;
            let lhs = kernel.at_pole(&f.mul_poly(&pole), i, j, m)?;
            let rhs = kernel.at_pole(&c.mul_poly(&pole), i, j, m)?.mul(&w);
            if !lhs.equals(&rhs) {
                return Ok(Some(format!("residue mismatch at pole j={j}, m={m}")));
            }
            if kernel.regime() != Regime::CalabiYau {
                at_infinity = at_infinity.add(&c.limit_at_infinity(h)?.mul(&w));
            }
        }
    }
    match kernel.regime() {
        Regime::CalabiYau => match cy_polynomial_part(kernel, &f, initial, i, d)? {
            Ok(_) => Ok(None),
            Err(why) => Ok(Some(why)),
        },
        _ => {
            let lim = match f.limit_at_infinity(h) {
                Ok(v) => v,
                Err(_) => return Ok(Some("coefficient grows at ħ = ∞".into())),
            };
            let init = supplied_initial(kernel, initial, i, d).unwrap_or_else(|| RatFunc::zero(f.ctx()));
            if lim.equals(&init.add(&at_infinity)) {
                Ok(None)
            } else {
                Ok(Some("value at ħ = ∞ differs".into()))
            }
        }
    }
}

fn check_direct(
    kernel: &RecursionKernel,
    native: Family<'_>,
    initial: &InitialData,
    i: usize,
    d: usize,
) -> Result<Option<String>, LocrecError> {
    let f = native(i, d)?;
    let sum = kernel.recursion_sum(i, d, native)?;
    let init = match kernel.regime() {
        Regime::CalabiYau => match cy_polynomial_part(kernel, &f, initial, i, d)? {
            Ok(p) => p,
            Err(why) => return Ok(Some(why)),
        },
        _ => supplied_initial(kernel, initial, i, d).unwrap_or_else(|| RatFunc::zero(f.ctx())),
    };
    if f.sub(&init).equals(&sum) {
        Ok(None)
    } else {
        Ok(Some("recursion right-hand side differs".into()))
    }
}
