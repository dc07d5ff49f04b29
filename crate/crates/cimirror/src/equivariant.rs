//! Torus-equivariant cohomology of P^n in the fixed-point (localization)
//! representation.
//!
//! A class is stored as its vector of restrictions to the n+1 fixed points
//! p = λ_i. Weights may be formal variables or rational constants; every
//! setup context also carries the variables `h` (ħ) and `p`.

use crate::exactalg::{Context, Ctx, MPoly, Rat, RatFunc, RatFuncError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivError {
    #[error("fixed-point index {0} out of range 0..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("ambient dimension must be at least 1")]
    BadDimension,
    #[error("context lacks the variable {0:?}")]
    MissingVariable(&'static str),
    #[error("torus weights are not pairwise distinct")]
    DegenerateWeights,
    #[error("class length {0} does not match n+1 = {1}")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
}

/// Torus acting on P^n with weights λ_0..λ_n, plus optional bundle weights
/// μ_1..μ_r.
#[derive(Clone, Debug)]
pub struct TorusSetup {
    n: usize,
    ctx: Ctx,
    lambdas: Vec<MPoly>,
    mus: Vec<MPoly>,
    hbar: usize,
    p: usize,
}

impl TorusSetup {
    /// Formal weights `l0..ln`, `m1..mr`, plus `h` and `p`.
    pub fn symbolic(n: usize, r: usize) -> Result<Self, EquivError> {
        if n == 0 {
            return Err(EquivError::BadDimension);
        }
        let mut names: Vec<String> = (0..=n).map(|i| format!("l{i}")).collect();
        names.extend((1..=r).map(|a| format!("m{a}")));
        names.push("h".into());
        names.push("p".into());
        let ctx = Context::new(names).map_err(|_| EquivError::BadDimension)?;
        let lambdas = (0..=n).map(|i| MPoly::var(&ctx, i)).collect();
        let mus = (0..r).map(|a| MPoly::var(&ctx, n + 1 + a)).collect();
        Self::new(ctx, lambdas, mus)
    }

    /// Numeric weights; the context is just `h, p`.
    pub fn at_point(lambdas: &[Rat], mus: &[Rat]) -> Result<Self, EquivError> {
        let ctx = Context::new(["h", "p"]).expect("two names");
        let l = lambdas.iter().map(|v| MPoly::constant(&ctx, v.clone())).collect();
        let m = mus.iter().map(|v| MPoly::constant(&ctx, v.clone())).collect();
        Self::new(ctx, l, m)
    }

    /// Arbitrary weight polynomials in a context containing `h` and `p`.
    pub fn new(ctx: Ctx, lambdas: Vec<MPoly>, mus: Vec<MPoly>) -> Result<Self, EquivError> {
        if lambdas.len() < 2 {
            return Err(EquivError::BadDimension);
        }
        let hbar = ctx.index("h").ok_or(EquivError::MissingVariable("h"))?;
        let p = ctx.index("p").ok_or(EquivError::MissingVariable("p"))?;
        for i in 0..lambdas.len() {
            for j in 0..i {
                if (&lambdas[i] - &lambdas[j]).is_zero() {
                    return Err(EquivError::DegenerateWeights);
                }
            }
        }
        Ok(TorusSetup { n: lambdas.len() - 1, ctx, lambdas, mus, hbar, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.mus.len()
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn lambda(&self, i: usize) -> &MPoly {
        &self.lambdas[i]
    }

    pub fn lambdas(&self) -> &[MPoly] {
        &self.lambdas
    }

    pub fn mu(&self, a: usize) -> &MPoly {
        &self.mus[a]
    }

    pub fn mus(&self) -> &[MPoly] {
        &self.mus
    }

    pub fn hbar_index(&self) -> usize {
        self.hbar
    }

    pub fn p_index(&self) -> usize {
        self.p
    }

    pub fn hbar(&self) -> MPoly {
        MPoly::var(&self.ctx, self.hbar)
    }

    pub fn pvar(&self) -> MPoly {
        MPoly::var(&self.ctx, self.p)
    }

    pub fn constant(&self, c: Rat) -> MPoly {
        MPoly::constant(&self.ctx, c)
    }

    /// True when every weight is a rational constant.
    pub fn is_numeric(&self) -> bool {
        self.lambdas.iter().chain(&self.mus).all(MPoly::is_constant)
    }

    /// Indices of the formal λ and μ variables (empty for numeric setups).
    pub fn weight_vars(&self) -> Vec<usize> {
        (0..self.ctx.len()).filter(|&i| i != self.hbar && i != self.p).collect()
    }

    /// Numeric setup obtained by evaluating all weights at the given values
    /// of the non-(ħ, p) variables.
    pub fn specialize(&self, values: &[(usize, Rat)]) -> Result<(TorusSetup, Specialization), EquivError> {
        let eval = |m: &MPoly| -> Rat {
            let s = m.substitute_values(values);
            s.constant_value().expect("specialization must fix every weight variable")
        };
        let l: Vec<Rat> = self.lambdas.iter().map(eval).collect();
        let m: Vec<Rat> = self.mus.iter().map(eval).collect();
        let target = TorusSetup::at_point(&l, &m)?;
        let mut map = vec![0; self.ctx.len()];
        map[self.hbar] = target.hbar;
        map[self.p] = target.p;
        Ok((target.clone(), Specialization { values: values.to_vec(), map, target: target.ctx.clone() }))
    }

    /// ∏_{j≠i}(λ_i − λ_j).
    pub fn tangent_weight(&self, i: usize) -> MPoly {
        let mut acc = MPoly::one(&self.ctx);
        for j in 0..=self.n {
            if j != i {
                acc = &acc * &(&self.lambdas[i] - &self.lambdas[j]);
            }
        }
        acc
    }

    fn tangent_factors(&self, i: usize) -> Vec<MPoly> {
        (0..=self.n).filter(|&j| j != i).map(|j| &self.lambdas[i] - &self.lambdas[j]).collect()
    }
}

/// Carries expressions from a symbolic setup to a numeric one.
#[derive(Clone, Debug)]
pub struct Specialization {
    values: Vec<(usize, Rat)>,
    map: Vec<usize>,
    target: Ctx,
}

impl Specialization {
    pub fn apply(&self, f: &RatFunc) -> Result<RatFunc, RatFuncError> {
        let s = f.substitute_values(&self.values)?;
        let num = s.numer().remap(&self.target, &self.map);
        let den: Vec<MPoly> = s
            .denom_factors()
            .flat_map(|(g, e)| std::iter::repeat_n(g.remap(&self.target, &self.map), e as usize))
            .collect();
        RatFunc::from_factors(&self.target, &[num], &den)
    }
}

/// Localization vector (v_0..v_n): the restrictions to p = λ_i.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivClass {
    v: Vec<RatFunc>,
}

impl EquivClass {
    pub fn new(v: Vec<RatFunc>) -> Self {
        EquivClass { v }
    }

    pub fn values(&self) -> &[RatFunc] {
        &self.v
    }

    pub fn unit(setup: &TorusSetup) -> Self {
        EquivClass { v: vec![RatFunc::one(setup.ctx()); setup.n + 1] }
    }

    pub fn mul(&self, o: &Self) -> Self {
        EquivClass { v: self.v.iter().zip(&o.v).map(|(a, b)| a * b).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        EquivClass { v: self.v.iter().zip(&o.v).map(|(a, b)| a + b).collect() }
    }
}

pub fn phi_basis(setup: &TorusSetup, i: usize) -> Result<EquivClass, EquivError> {
    if i > setup.n {
        return Err(EquivError::IndexOutOfRange(i, setup.n));
    }
    let c = setup.ctx();
    Ok(EquivClass { v: (0..=setup.n).map(|j| if i == j { RatFunc::one(c) } else { RatFunc::zero(c) }).collect() })
}

/// Σ_i v_i / ∏_{j≠i}(λ_i − λ_j).
pub fn equiv_integral(setup: &TorusSetup, x: &EquivClass) -> Result<RatFunc, EquivError> {
    if x.v.len() != setup.n + 1 {
        return Err(EquivError::LengthMismatch(x.v.len(), setup.n + 1));
    }
    let mut acc = RatFunc::zero(setup.ctx());
    for (i, vi) in x.v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        let w = RatFunc::from_factors(setup.ctx(), &[], &setup.tangent_factors(i))?;
        acc = &acc + &(vi * &w);
    }
    Ok(acc)
}

/// Complete homogeneous symmetric polynomial h_m of the given values.
pub fn complete_homogeneous(vals: &[MPoly], m: usize, ctx: &Ctx) -> MPoly {
    // h over the first j values, degrees 0..=m
    let mut h: Vec<MPoly> = (0..=m).map(|k| if k == 0 { MPoly::one(ctx) } else { MPoly::zero(ctx) }).collect();
    for v in vals {
        let mut next = h.clone();
        for k in 1..=m {
            next[k] = &h[k] + &(v * &next[k - 1]);
        }
        h = next;
    }
    h[m].clone()
}

/// ∮ f(p) dp / ∏_j (p − λ_j), computed from the expansion at p = ∞:
/// ∫ p^k = h_{k−n}(λ_0, …, λ_n), which equals the sum of residues at the
/// fixed points.
pub fn residue_integral(setup: &TorusSetup, f: &[RatFunc]) -> RatFunc {
    let mut acc = RatFunc::zero(setup.ctx());
    for (k, fk) in f.iter().enumerate() {
        if k < setup.n || fk.is_zero() {
            continue;
        }
        let h = complete_homogeneous(&setup.lambdas, k - setup.n, setup.ctx());
        acc = &acc + &fk.mul_poly(&h);
    }
    acc
}

/// Restriction of a polynomial in p (coefficient list) to the fixed points.
pub fn poly_to_localizations(setup: &TorusSetup, f: &[RatFunc]) -> EquivClass {
    let v = setup
        .lambdas
        .iter()
        .map(|l| {
            let mut acc = RatFunc::zero(setup.ctx());
            for c in f.iter().rev() {
                acc = &acc.mul_poly(l) + c;
            }
            acc
        })
        .collect();
    EquivClass { v }
}

/// Coefficients (in p) of ∏_{j≠i}(p − λ_j).
fn vanishing_poly_coeffs(setup: &TorusSetup, i: usize) -> Vec<MPoly> {
    let c = setup.ctx();
    let mut coeffs = vec![MPoly::one(c)];
    for j in 0..=setup.n {
        if j == i {
            continue;
        }
        let mut next = vec![MPoly::zero(c); coeffs.len() + 1];
        for (k, a) in coeffs.iter().enumerate() {
            next[k + 1] = &next[k + 1] + a;
            next[k] = &next[k] - &(a * &setup.lambdas[j]);
        }
        coeffs = next;
    }
    coeffs
}

/// Lagrange interpolation through the fixed points; returns coefficients
/// of p^0..p^n.
pub fn localizations_to_poly(setup: &TorusSetup, x: &EquivClass) -> Result<Vec<RatFunc>, EquivError> {
    if x.v.len() != setup.n + 1 {
        return Err(EquivError::LengthMismatch(x.v.len(), setup.n + 1));
    }
    let c = setup.ctx();
    let mut out = vec![RatFunc::zero(c); setup.n + 1];
    for (i, vi) in x.v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        let w = RatFunc::from_factors(c, &[], &setup.tangent_factors(i))?;
        let s = vi * &w;
        for (k, a) in vanishing_poly_coeffs(setup, i).iter().enumerate() {
            out[k] = &out[k] + &s.mul_poly(a);
        }
    }
    Ok(out)
}

/// The (n+1)×(n+1) matrix of pairings ∫ φ_i φ_j.
pub fn pairing_matrix(setup: &TorusSetup) -> Result<Vec<Vec<RatFunc>>, EquivError> {
    let basis: Vec<EquivClass> = (0..=setup.n).map(|i| phi_basis(setup, i)).collect::<Result<_, _>>()?;
    basis.iter().map(|a| basis.iter().map(|b| equiv_integral(setup, &a.mul(b))).collect()).collect()
}

/// Integral of p^k over P^n (equivalently h_{k−n}(λ)).
pub fn integral_of_power(setup: &TorusSetup, k: usize) -> Result<RatFunc, EquivError> {
    let c = setup.ctx();
    let mut f = vec![RatFunc::zero(c); k + 1];
    f[k] = RatFunc::one(c);
    equiv_integral(setup, &poly_to_localizations(setup, &f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Context;

    fn p2_scaled() -> (TorusSetup, MPoly, MPoly, MPoly) {
        let ctx = Context::new(["a", "b", "c", "lam", "h", "p"]).unwrap();
        let lam = MPoly::var(&ctx, 3);
        let w: Vec<MPoly> = (0..3).map(|i| &MPoly::var(&ctx, i) * &lam).collect();
        let s = TorusSetup::new(ctx.clone(), w, vec![]).unwrap();
        let (a, b, c) = (MPoly::var(&ctx, 0), MPoly::var(&ctx, 1), MPoly::var(&ctx, 2));
        let e1 = &(&a + &b) + &c;
        let e2 = &(&(&a * &b) + &(&a * &c)) + &(&b * &c);
        (s, e1, e2, lam)
    }

    #[test]
    fn phi_examples() {
        let s1 = TorusSetup::symbolic(1, 0).unwrap();
        assert_eq!(phi_basis(&s1, 0).unwrap().values()[1], RatFunc::zero(s1.ctx()));
        assert!(phi_basis(&s1, 2).is_err());
        let s2 = TorusSetup::symbolic(2, 0).unwrap();
        let sum = (0..=2).map(|i| phi_basis(&s2, i).unwrap()).reduce(|a, b| a.add(&b)).unwrap();
        assert_eq!(sum, EquivClass::unit(&s2));
        assert!(equiv_integral(&s1, &EquivClass::unit(&s1)).unwrap().is_zero());
    }

    #[test]
    fn p2_power_integrals() {
        let (s, e1, e2, lam) = p2_scaled();
        let c = s.ctx().clone();
        assert_eq!(integral_of_power(&s, 2).unwrap(), RatFunc::one(&c));
        assert_eq!(integral_of_power(&s, 3).unwrap(), RatFunc::from_poly(&e1 * &lam));
        let expect = &(&(&e1 * &e1) - &e2) * &(&lam * &lam);
        assert_eq!(integral_of_power(&s, 4).unwrap(), RatFunc::from_poly(expect));
        let mut f = vec![RatFunc::zero(&c); 4];
        f[3] = RatFunc::one(&c);
        assert_eq!(residue_integral(&s, &f), RatFunc::from_poly(&e1 * &lam));
    }

    #[test]
    fn interpolation_round_trip() {
        let s = TorusSetup::symbolic(2, 0).unwrap();
        let c = s.ctx().clone();
        let f = vec![RatFunc::int(&c, 3), RatFunc::var(&c, 0), RatFunc::int(&c, -2)];
        let back = localizations_to_poly(&s, &poly_to_localizations(&s, &f)).unwrap();
        assert_eq!(back, f);
        let phi = localizations_to_poly(&s, &phi_basis(&s, 1).unwrap()).unwrap();
        let top =
            RatFunc::from_factors(&c, &[], &[&(s.lambda(1) - s.lambda(0)) * &(s.lambda(1) - s.lambda(2))]).unwrap();
        assert_eq!(phi[2], top);
    }
}
