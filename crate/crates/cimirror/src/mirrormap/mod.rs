//! Mirror transformations of localization families, the mirror map, the
//! Frobenius solutions at ħ = 1, the Yukawa coupling and instanton numbers.

use crate::equivariant::TorusSetup;
use crate::exactalg::rat::harmonic;
use crate::exactalg::{int, LogSeries, MPoly, QSeries, Rat, RatFunc, RatFuncError, SeriesError};
use crate::hyperseries::{
    build_s_star, build_zstar_equivariant, frobenius_component, CIConfig, HyperError, PFOp, Regime,
};
use crate::locrec::verify::sample_kernels;
use crate::locrec::{
    classp_check, infinity_terms, solve_classp, verify_family, EqualityMode, InitialData, LocrecError, RecursionKernel,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MirrorError {
    #[error("configuration is not Calabi-Yau")]
    NotCalabiYau,
    #[error("not a Calabi-Yau threefold")]
    NotThreefold,
    #[error("scaling series must have constant term 1")]
    ScaleNotUnit,
    #[error("shift series must have zero constant term")]
    ShiftNotSmall,
    #[error("twist series must have zero constant term")]
    TwistNotSmall,
    #[error("twist weight must be linear in the torus weights")]
    TwistNotLinear,
    #[error("family has {0} members, expected {1}")]
    FamilySize(usize, usize),
    #[error("t-dependence did not cancel in the Yukawa coupling")]
    YukawaNotTFree,
    #[error("unresolved pole at the origin of the torus weights")]
    PoleAtOrigin,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Locrec(#[from] LocrecError),
}

/// One q-series per fixed point.
pub type Family = Vec<QSeries<RatFunc>>;

/// The hypergeometric series f, g_l and the series driving the mirror
/// transformations.
#[derive(Clone, Debug)]
pub struct MirrorData {
    pub f: QSeries<Rat>,
    pub g: BTreeMap<usize, QSeries<Rat>>,
    /// Scaling series of the final multiplication (= f).
    pub nu1: QSeries<Rat>,
    /// Shift series: Σ l_a(g_{l_a} − g_1)/f.
    pub nu2: QSeries<Rat>,
    /// Twist series paired with Σ_α λ_α: g_1/f.
    pub nu3: QSeries<Rat>,
    /// Twist series paired with −μ_a: g_{l_a}/f.
    pub mu_twists: Vec<QSeries<Rat>>,
}

impl MirrorData {
    pub fn order(&self) -> usize {
        self.f.order()
    }

    pub fn g(&self, l: usize) -> &QSeries<Rat> {
        &self.g[&l]
    }
}

/// f = Σ ∏(l_a d)!/(d!)^{n+1} q^d and g_s = Σ H(sd) ∏(l_a d)!/(d!)^{n+1} q^d.
pub fn f_and_g(config: &CIConfig, order: usize) -> MirrorData {
    let coeffs: Vec<Rat> = (0..=order).map(|d| config.hypergeometric_coefficient(d)).collect();
    let f = QSeries::new(coeffs.clone());
    let g_of = |s: usize| QSeries::from_fn(order, |d| &coeffs[d] * harmonic((s * d) as u64));
    let mut g = BTreeMap::new();
    g.insert(1, g_of(1));
    for &l in config.degrees() {
        g.entry(l).or_insert_with(|| g_of(l));
    }
    let f_inv = f.inverse().expect("f(0) = 1");
    let mut shift = QSeries::constant(Rat::zero(), order);
    for &l in config.degrees() {
        let diff = g[&l].sub(&g[&1]).expect("rational series");
        shift = shift.add(&diff.scale(&int(l as i64))).expect("rational series");
    }
    let over_f = |s: &QSeries<Rat>| s.mul(&f_inv).expect("rational series");
    MirrorData {
        nu1: f.clone(),
        nu2: over_f(&shift),
        nu3: over_f(&g[&1]),
        mu_twists: config.degrees().iter().map(|l| over_f(&g[l])).collect(),
        f,
        g,
    }
}

/// Natural logarithm of a series with constant term 1.
pub fn series_log(s: &QSeries<Rat>) -> Result<QSeries<Rat>, MirrorError> {
    if !s.coeff(0).is_one() {
        return Err(MirrorError::ScaleNotUnit);
    }
    let ratio = s.theta().mul(&s.inverse()?)?;
    Ok(QSeries::from_fn(s.order(), |k| if k == 0 { Rat::zero() } else { ratio.coeff(k) / int(k as i64) }))
}

/// Series as RatFunc coefficients in the setup's context.
fn lift(setup: &TorusSetup, s: &QSeries<Rat>) -> QSeries<RatFunc> {
    s.map(|c| RatFunc::constant(setup.ctx(), c.clone()))
}

/// exp(w·ν/ħ) for a weight polynomial w.
fn twist_factor(setup: &TorusSetup, w: &MPoly, nu: &QSeries<Rat>) -> Result<QSeries<RatFunc>, MirrorError> {
    let over_h = RatFunc::from_poly(w.clone()).div_poly(&setup.hbar())?;
    Ok(lift(setup, nu).scale_by(&over_h).exp()?)
}

/// (a): W_i ↦ ν_1 W_i.
pub fn transform_a(family: &[QSeries<RatFunc>], nu1: &QSeries<Rat>) -> Result<Family, MirrorError> {
    if !nu1.coeff(0).is_one() {
        return Err(MirrorError::ScaleNotUnit);
    }
    Ok(family.iter().map(|w| w.mul_rat(nu1)).collect())
}

/// (b): W_i ↦ e^{λ_iν_2/ħ} W_i(q e^{ν_2}).
pub fn transform_b(setup: &TorusSetup, family: &[QSeries<RatFunc>], nu2: &QSeries<Rat>) -> Result<Family, MirrorError> {
    check_family(setup, family)?;
    if !nu2.coeff(0).is_zero() {
        return Err(MirrorError::ShiftNotSmall);
    }
    let big_q = nu2.exp()?.shift(1);
    family
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let moved = w.compose(&big_q)?;
            Ok(moved.mul(&twist_factor(setup, setup.lambda(i), nu2)?)?)
        })
        .collect()
}

/// (c): W_i ↦ exp(Cν_3/ħ) W_i for a weight C linear in λ, μ.
pub fn transform_c(
    setup: &TorusSetup,
    family: &[QSeries<RatFunc>],
    weight: &MPoly,
    nu3: &QSeries<Rat>,
) -> Result<Family, MirrorError> {
    check_family(setup, family)?;
    if !nu3.coeff(0).is_zero() {
        return Err(MirrorError::TwistNotSmall);
    }
    let h = setup.hbar_index();
    let p = setup.p_index();
    if weight.total_degree() > 1 || weight.involves(h) || weight.involves(p) {
        return Err(MirrorError::TwistNotLinear);
    }
    let factor = twist_factor(setup, weight, nu3)?;
    family.iter().map(|w| Ok(w.mul(&factor)?)).collect()
}

/// The shift series undoing (b) with `nu2`: log(ρ(q)/q) where ρ reverts
/// q e^{ν_2(q)}.
pub fn inverse_shift(nu2: &QSeries<Rat>) -> Result<QSeries<Rat>, MirrorError> {
    if !nu2.coeff(0).is_zero() {
        return Err(MirrorError::ShiftNotSmall);
    }
    let order = nu2.order();
    // ρ to order+1 only needs ν_2 through order
    let ext = QSeries::from_fn(order + 1, |k| if k <= order { nu2.coeff(k).clone() } else { Rat::zero() });
    let rho = ext.exp()?.shift(1).revert()?;
    let ratio = QSeries::from_fn(order, |k| rho.coeff(k + 1).clone());
    series_log(&ratio)
}

fn check_family(setup: &TorusSetup, family: &[QSeries<RatFunc>]) -> Result<(), MirrorError> {
    if family.len() != setup.n() + 1 {
        return Err(MirrorError::FamilySize(family.len(), setup.n() + 1));
    }
    Ok(())
}

fn require_cy(config: &CIConfig) -> Result<(), MirrorError> {
    if config.regime() != Regime::CalabiYau {
        return Err(MirrorError::NotCalabiYau);
    }
    Ok(())
}

/// [Σ_a(l_aλ_i−μ_a) g_{l_a} − Σ_α(λ_i−λ_α) g_1]/(fħ) as a series.
fn exponent_series(
    config: &CIConfig,
    setup: &TorusSetup,
    data: &MirrorData,
    i: usize,
) -> Result<QSeries<RatFunc>, MirrorError> {
    let order = data.order();
    let li = setup.lambda(i);
    let mut acc = QSeries::constant(RatFunc::zero(setup.ctx()), order);
    for (a, &l) in config.degrees().iter().enumerate() {
        let w = li.scale(&int(l as i64)) - setup.mu(a);
        acc = acc.add(&lift(setup, data.g(l)).scale_by(&RatFunc::from_poly(w)))?;
    }
    let mut tangent = MPoly::zero(setup.ctx());
    for alpha in 0..=config.n() {
        tangent = &tangent + &(li - setup.lambda(alpha));
    }
    acc = acc.sub(&lift(setup, data.g(1)).scale_by(&RatFunc::from_poly(tangent)))?;
    let inv_fh = RatFunc::one(setup.ctx()).div_poly(&setup.hbar())?;
    Ok(acc.mul_rat(&data.f.inverse()?).scale_by(&inv_fh))
}

/// Steps (1)-(3): substitute Q = q e^{ν_2}, multiply by the exponential
/// twist, multiply by f. The output is claimed to equal the Z* family.
pub fn cestfini_pipeline(
    config: &CIConfig,
    setup: &TorusSetup,
    family: &[QSeries<RatFunc>],
    order: usize,
) -> Result<Family, MirrorError> {
    require_cy(config)?;
    check_family(setup, family)?;
    let data = f_and_g(config, order);
    let big_q = data.nu2.exp()?.shift(1);
    family
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let moved = w.truncate(order).compose(&big_q)?;
            let twisted = moved.mul(&exponent_series(config, setup, &data, i)?.exp()?)?;
            Ok(twisted.mul_rat(&data.f))
        })
        .collect()
}

/// The same pipeline as the composite (b), (c) for Σλ_α and each −μ_a, (a).
pub fn cestfini_by_operations(
    config: &CIConfig,
    setup: &TorusSetup,
    family: &[QSeries<RatFunc>],
    order: usize,
) -> Result<Family, MirrorError> {
    require_cy(config)?;
    let data = f_and_g(config, order);
    let family: Family = family.iter().map(|w| w.truncate(order)).collect();
    let mut out = transform_b(setup, &family, &data.nu2)?;
    let mut lambda_sum = MPoly::zero(setup.ctx());
    for l in setup.lambdas() {
        lambda_sum = &lambda_sum + l;
    }
    out = transform_c(setup, &out, &lambda_sum, &data.nu3)?;
    for (a, nu) in data.mu_twists.iter().enumerate() {
        out = transform_c(setup, &out, &-setup.mu(a), nu)?;
    }
    transform_a(&out, &data.nu1)
}

/// Undoes the pipeline: divide by f, remove the twist, substitute q = ρ(Q).
pub fn cestfini_inverse(
    config: &CIConfig,
    setup: &TorusSetup,
    family: &[QSeries<RatFunc>],
    order: usize,
) -> Result<Family, MirrorError> {
    require_cy(config)?;
    check_family(setup, family)?;
    let data = f_and_g(config, order);
    let rho = data.nu2.exp()?.shift(1).revert()?;
    let f_inv = data.f.inverse()?;
    family
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let untwist = exponent_series(config, setup, &data, i)?.neg().exp()?;
            let y = w.truncate(order).mul_rat(&f_inv).mul(&untwist)?;
            Ok(y.compose(&rho)?)
        })
        .collect()
}

/// (W^{(0)}, W^{(1)}): the ħ⁰ and ħ⁻¹ coefficients at ħ = ∞, per q-degree.
pub fn initial_conditions(
    setup: &TorusSetup,
    w: &QSeries<RatFunc>,
) -> Result<(QSeries<RatFunc>, QSeries<RatFunc>), MirrorError> {
    let h = setup.hbar_index();
    let mut c0 = Vec::new();
    let mut c1 = Vec::new();
    for c in w.coeffs() {
        let (a, b) = infinity_terms(c, h)?;
        c0.push(a);
        c1.push(b);
    }
    Ok((QSeries::new(c0), QSeries::new(c1)))
}

/// The expected (Z*^{(0)}, Z*^{(1)}) at fixed point i:
/// (f, λ_iΣl_a[g_{l_a}−g_1] + (Σλ_α)g_1 − Σμ_a g_{l_a}).
pub fn zstar_initial_conditions(
    config: &CIConfig,
    setup: &TorusSetup,
    data: &MirrorData,
    i: usize,
) -> Result<(QSeries<RatFunc>, QSeries<RatFunc>), MirrorError> {
    let mut shift = QSeries::constant(Rat::zero(), data.order());
    for &l in config.degrees() {
        shift = shift.add(&data.g(l).sub(data.g(1))?.scale(&int(l as i64)))?;
    }
    let mut lambda_sum = MPoly::zero(setup.ctx());
    for l in setup.lambdas() {
        lambda_sum = &lambda_sum + l;
    }
    let poly = |p: &MPoly| RatFunc::from_poly(p.clone());
    let mut second = lift(setup, &shift).scale_by(&poly(setup.lambda(i)));
    second = second.add(&lift(setup, data.g(1)).scale_by(&poly(&lambda_sum)))?;
    for (a, &l) in config.degrees().iter().enumerate() {
        second = second.sub(&lift(setup, data.g(l)).scale_by(&poly(setup.mu(a))))?;
    }
    Ok((lift(setup, &data.f), second))
}

/// T − t = Σ l_a[g_{l_a} − g_1]/f.
#[allow(non_snake_case)]
pub fn mirror_map_T(config: &CIConfig, order: usize) -> Result<QSeries<Rat>, MirrorError> {
    require_cy(config)?;
    Ok(f_and_g(config, order).nu2)
}

/// Solutions s*_0..s*_{n−r} at ħ = 1, polynomial in t.
#[derive(Clone, Debug)]
pub struct FrobeniusBasis {
    pub solutions: Vec<LogSeries>,
}

impl FrobeniusBasis {
    pub fn solution(&self, beta: usize) -> &LogSeries {
        &self.solutions[beta]
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }
}

/// s*_β: the P^{r+β} component of e^{Pt}S* at ħ = 1, divided by ∏ l_a.
pub fn frobenius_basis(config: &CIConfig, order: usize) -> Result<FrobeniusBasis, MirrorError> {
    let s = build_s_star(config, order);
    let inv = config.degree_product().recip();
    let solutions = (0..=config.n() - config.r())
        .map(|beta| Ok(frobenius_component(&s, config.r() + beta, &Rat::one())?.scale(&inv)))
        .collect::<Result<Vec<_>, MirrorError>>()?;
    Ok(FrobeniusBasis { solutions })
}

/// Applies a Picard-Fuchs operator at ħ = 1 to a solution in (t, q = e^t),
/// where θ acts as ∂_t + q∂_q.
pub fn apply_at_unit_hbar(op: &PFOp, s: &LogSeries) -> Result<LogSeries, MirrorError> {
    let one = Rat::one();
    let mut out = LogSeries::zero(s.max_deg(), s.order());
    for (k, m, c) in op.terms() {
        let mut term = s.clone();
        for _ in 0..m {
            term = term.d_dt().add(&term.theta());
        }
        let parts = (0..=s.max_deg()).map(|j| term.part(j).shift(k).scale(&c.eval(&one))).collect();
        out = out.add(&LogSeries::from_parts(s.max_deg(), parts)?);
    }
    Ok(out)
}

/// s*_1/s*_0 − t, which must be t-free.
pub fn mirror_map_from_basis(basis: &FrobeniusBasis) -> Result<QSeries<Rat>, MirrorError> {
    let ratio = basis.solution(1).div_series(&basis.solution(0).part(0))?;
    let t = LogSeries::from_parts(
        ratio.max_deg(),
        vec![QSeries::constant(Rat::zero(), ratio.order()), QSeries::constant(Rat::one(), ratio.order())],
    )?;
    let rest = ratio.sub(&t);
    if !rest.is_t_free() {
        return Err(MirrorError::YukawaNotTFree);
    }
    Ok(rest.part(0))
}

/// d/dT = (1 + θ(T−t))⁻¹ (∂_t + q∂_q).
#[allow(non_snake_case)]
pub fn d_dT(g: &LogSeries, t_shift: &QSeries<Rat>) -> Result<LogSeries, MirrorError> {
    let one = QSeries::constant(Rat::one(), t_shift.order());
    let jac = one.add(&t_shift.theta())?;
    Ok(g.d_dt().add(&g.theta()).div_series(&jac)?)
}

fn is_listed_threefold(config: &CIConfig) -> bool {
    let mut l = config.degrees().to_vec();
    l.sort_unstable();
    matches!((config.n(), l.as_slice()), (4, [5]) | (5, [2, 4]) | (5, [3, 3]) | (6, [2, 2, 3]))
}

/// ∏l_a·(d/dT)²(s/s*_0) re-expanded in Q = q e^{T−t}, for a chosen second
/// solution s.
pub fn yukawa_from_solution(
    config: &CIConfig,
    basis: &FrobeniusBasis,
    second: &LogSeries,
) -> Result<QSeries<Rat>, MirrorError> {
    let t_shift = mirror_map_from_basis(basis)?;
    let g = second.div_series(&basis.solution(0).part(0))?;
    let u = d_dT(&d_dT(&g, &t_shift)?, &t_shift)?;
    if !u.is_t_free() {
        return Err(MirrorError::YukawaNotTFree);
    }
    let q_of_big_q = t_shift.exp()?.shift(1).revert()?;
    Ok(u.part(0).compose(&q_of_big_q)?.scale(&config.degree_product()))
}

/// Yukawa coupling K(Q) of a Calabi-Yau threefold, K(0) = ∏ l_a.
pub fn yukawa_k(config: &CIConfig, order: usize) -> Result<QSeries<Rat>, MirrorError> {
    if !is_listed_threefold(config) {
        return Err(MirrorError::NotThreefold);
    }
    let basis = frobenius_basis(config, order)?;
    yukawa_from_solution(config, &basis, basis.solution(2))
}

/// Instanton numbers from K = K(0) + Σ n_d d³ Q^d/(1−Q^d).
#[derive(Clone, Debug)]
pub struct InstantonTable {
    pub k: QSeries<Rat>,
    pub n: BTreeMap<usize, Rat>,
}

impl InstantonTable {
    pub fn is_integral(&self, d: usize) -> bool {
        self.n.get(&d).is_some_and(|v| v.is_integer())
    }

    pub fn all_integral(&self) -> bool {
        self.n.values().all(|v| v.is_integer())
    }

    pub fn integer(&self, d: usize) -> Option<BigInt> {
        self.n.get(&d).filter(|v| v.is_integer()).map(|v| v.to_integer())
    }
}

/// n_m = (k_m − Σ_{d|m, d<m} n_d d³)/m³, exact; non-integral values are kept.
pub fn instanton_numbers(k: &QSeries<Rat>, max_d: usize) -> InstantonTable {
    let mut n: BTreeMap<usize, Rat> = BTreeMap::new();
    for m in 1..=max_d.min(k.order()) {
        let mut acc = k.coeff(m).clone();
        for d in (1..m).filter(|d| m % d == 0) {
            acc -= &n[&d] * int((d * d * d) as i64);
        }
        n.insert(m, acc / int((m * m * m) as i64));
    }
    InstantonTable { k: k.clone(), n }
}

/// Sets every torus weight to zero; ħ and p survive.
pub fn nonequiv_limit(setup: &TorusSetup, expr: &RatFunc) -> Result<RatFunc, MirrorError> {
    let vals: Vec<(usize, Rat)> = setup.weight_vars().into_iter().map(|v| (v, Rat::zero())).collect();
    expr.substitute_values(&vals).map_err(|e| match e {
        RatFuncError::DenominatorVanishes | RatFuncError::DivisionByZero => MirrorError::PoleAtOrigin,
        other => MirrorError::RatFunc(other),
    })
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl MirrorCheck {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        MirrorCheck { name: name.into(), passed, detail: detail.into() }
    }
}

fn same_family(a: &[QSeries<RatFunc>], b: &[QSeries<RatFunc>]) -> Option<(usize, usize)> {
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        for d in 0..=x.order().min(y.order()) {
            if !x.coeff(d).equals(y.coeff(d)) {
                return Some((i, d));
            }
        }
    }
    None
}

fn verdict(name: &str, mismatch: Option<(usize, usize)>) -> MirrorCheck {
    match mismatch {
        None => MirrorCheck::new(name, true, "ok"),
        Some((i, d)) => MirrorCheck::new(name, false, format!("first mismatch at i={i}, d={d}")),
    }
}

/// Exact certification with symbolic weights. The family W obtained by
/// undoing the pipeline on Z* is shown to be the class-𝒫 solution of the
/// recursion with (W^{(0)}, W^{(1)}) = (1, 0), which fixes it uniquely; the
/// pipeline applied to W must then return Z* exactly. A numeric class-𝒫
/// solve at one sampled point is compared against W as well.
pub fn certify_pipeline_exact(config: &CIConfig, order: usize, seed: u64) -> Result<Vec<MirrorCheck>, MirrorError> {
    require_cy(config)?;
    let setup = TorusSetup::symbolic(config.n(), config.r()).map_err(LocrecError::from)?;
    let kernel = RecursionKernel::new(config.clone(), setup.clone())?;
    let zstar: Family =
        (0..=config.n()).map(|i| build_zstar_equivariant(config, &setup, i, order)).collect::<Result<_, _>>()?;
    let w = cestfini_inverse(config, &setup, &zstar, order)?;
    let mut out = Vec::new();

    let one = RatFunc::one(setup.ctx());
    let mut bad = None;
    for (i, wi) in w.iter().enumerate() {
        let (a, b) = initial_conditions(&setup, wi)?;
        for d in 0..=order {
            let want = if d == 0 { one.clone() } else { RatFunc::zero(setup.ctx()) };
            if bad.is_none() && (!a.coeff(d).equals(&want) || !b.coeff(d).is_zero()) {
                bad = Some((i, d));
            }
        }
    }
    out.push(verdict("recursion-side initial conditions (1, 0)", bad));

    let fam = |i: usize, d: usize| -> Result<RatFunc, LocrecError> { Ok(w[i].coeff(d).clone()) };
    let rep = verify_family(&kernel, &fam, &InitialData::trivial(), order, EqualityMode::Exact)?;
    out.push(verdict("recursion identity (exact)", rep.first_failure()));

    let cp = classp_check(&kernel, &fam, order)?;
    out.push(verdict("class P", cp.first_failure().map(|d| (0, d))));

    let forward = cestfini_pipeline(config, &setup, &w, order)?;
    out.push(verdict("pipeline output equals Z* (exact)", same_family(&forward, &zstar)));

    let point = sample_kernels(&kernel, 1, seed, order)?.remove(0);
    let values: Vec<(usize, Rat)> = setup
        .weight_vars()
        .into_iter()
        .zip(point.setup().lambdas().iter().chain(point.setup().mus()))
        .map(|(v, m)| (v, m.constant_value().expect("numeric weight")))
        .collect();
    let (_, spec) = setup.specialize(&values).map_err(LocrecError::from)?;
    let sol = solve_classp(&point, order)?;
    let mut bad = None;
    for (i, wi) in w.iter().enumerate() {
        for d in 0..=order {
            if bad.is_none() && !spec.apply(wi.coeff(d))?.equals(&sol.coefficient(i, d)) {
                bad = Some((i, d));
            }
        }
    }
    out.push(verdict("class-P solver agrees at a sampled point", bad));
    Ok(out)
}

/// Pipeline applied to the numeric class-𝒫 solution at random weight
/// points, compared with Z* at the same points.
pub fn check_pipeline_sampled(
    config: &CIConfig,
    order: usize,
    points: usize,
    seed: u64,
) -> Result<Vec<MirrorCheck>, MirrorError> {
    require_cy(config)?;
    let setup = TorusSetup::symbolic(config.n(), config.r()).map_err(LocrecError::from)?;
    let kernel = RecursionKernel::new(config.clone(), setup)?;
    let mut out = Vec::new();
    for (k, point) in sample_kernels(&kernel, points, seed, order)?.into_iter().enumerate() {
        let ps = point.setup();
        let sol = solve_classp(&point, order)?;
        let fam: Family = (0..=config.n()).map(|i| sol.series(i)).collect();
        let got = cestfini_pipeline(config, ps, &fam, order)?;
        let zstar: Family =
            (0..=config.n()).map(|i| build_zstar_equivariant(config, ps, i, order)).collect::<Result<_, _>>()?;
        out.push(verdict(&format!("pipeline output equals Z* at sample {k}"), same_family(&got, &zstar)));
    }
    Ok(out)
}

/// Initial conditions on both sides: the class-𝒫 solution at sampled
/// points has (1, 0), and Z* with symbolic weights has
/// (f, λ_iΣl_a[g_{l_a}−g_1] + (Σλ_α)g_1 − Σμ_a g_{l_a}).
pub fn check_initial_conditions(
    config: &CIConfig,
    order: usize,
    points: usize,
    seed: u64,
) -> Result<Vec<MirrorCheck>, MirrorError> {
    require_cy(config)?;
    let setup = TorusSetup::symbolic(config.n(), config.r()).map_err(LocrecError::from)?;
    let kernel = RecursionKernel::new(config.clone(), setup.clone())?;
    let mut out = Vec::new();
    for (k, point) in sample_kernels(&kernel, points, seed, order)?.into_iter().enumerate() {
        let sol = solve_classp(&point, order)?;
        let mut bad = None;
        for i in 0..=config.n() {
            let (a, b) = initial_conditions(point.setup(), &sol.series(i))?;
            for d in 0..=order {
                let want = if d == 0 { Rat::one() } else { Rat::zero() };
                let ok = a.coeff(d).constant_value() == Some(want) && b.coeff(d).is_zero();
                if bad.is_none() && !ok {
                    bad = Some((i, d));
                }
            }
        }
        out.push(verdict(&format!("recursion side (1, 0) at sample {k}"), bad));
    }
    let data = f_and_g(config, order);
    let mut bad = None;
    for i in 0..=config.n() {
        let z = build_zstar_equivariant(config, &setup, i, order)?;
        let (a, b) = initial_conditions(&setup, &z)?;
        let (ea, eb) = zstar_initial_conditions(config, &setup, &data, i)?;
        if bad.is_none() {
            bad = same_family(&[a, b], &[ea, eb]).map(|(_, d)| (i, d));
        }
    }
    out.push(verdict("closed side (f, first-order term)", bad));
    Ok(out)
}

#[cfg(test)]
mod tests;
