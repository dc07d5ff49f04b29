//! Two-point correlators of a family W_i and the class-𝒫 condition.
//!
//! For a family with q-coefficients C_i(d), F_k^{(i)}(ħ) =
//! k!∏_{α≠i}∏_{s≤k}(λ_i−λ_α+sħ)·ħ^k C_i(k) and the correlator P_d(p) is the
//! polynomial of p-degree ≤ (n+1)d+n taking the values
//! ∏_a(l_aλ_i−μ_a)·F_k^{(i)}(ħ)·F_{d−k}^{(i)}(−ħ) at p = λ_i+kħ.

use super::{InitialData, LocrecError, RecSolution, RecursionKernel};
use crate::exactalg::linalg::solve_unique;
use crate::exactalg::rat::factorial;
use crate::exactalg::{int, MPoly, Mono, Rat, RatFunc};
use crate::hyperseries::Regime;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::ops::Add;

type Family<'a> = &'a dyn Fn(usize, usize) -> Result<RatFunc, LocrecError>;

/// Correlator polynomial of one degree.
#[derive(Clone, Debug)]
pub struct Correlator {
    pub d: usize,
    /// Interpolant as a rational function in the setup context (p included).
    pub poly: RatFunc,
    pub degree_bound: usize,
}

impl Correlator {
    /// True when P_d has polynomial coefficients.
    pub fn is_polynomial(&self) -> bool {
        self.poly.is_polynomial()
    }

    pub fn p_degree(&self, p: usize) -> u32 {
        self.poly.numer().degree_in(p)
    }
}

/// ∏_a(l_aλ_i − μ_a).
pub fn bundle_weight(kernel: &RecursionKernel, i: usize) -> MPoly {
    let s = kernel.setup();
    let mut acc = MPoly::one(s.ctx());
    for (a, &l) in kernel.config().degrees().iter().enumerate() {
        acc = &acc * &(s.lambda(i).scale(&int(l as i64)) - s.mu(a));
    }
    acc
}

/// ∏_{α≠i}∏_{s=1}^k(λ_i−λ_α+sħ).
pub fn tangent_product(kernel: &RecursionKernel, i: usize, k: usize) -> MPoly {
    let s = kernel.setup();
    let mut acc = MPoly::one(s.ctx());
    for alpha in (0..=kernel.n()).filter(|&a| a != i) {
        let base = s.lambda(i) - s.lambda(alpha);
        for t in 1..=k {
            acc = &acc * &(&base + &s.hbar().scale(&int(t as i64)));
        }
    }
    acc
}

/// F_k^{(i)}(ħ) from the q-coefficient C_i(k).
pub fn f_value(kernel: &RecursionKernel, c: &RatFunc, i: usize, k: usize) -> RatFunc {
    let h = kernel.setup().hbar();
    let poly = tangent_product(kernel, i, k).scale(&Rat::from_integer(factorial(k as u64)));
    c.mul_poly(&(&poly * &h.pow(k as u32)))
}

fn negate_hbar(kernel: &RecursionKernel, f: &RatFunc) -> Result<RatFunc, LocrecError> {
    let h = kernel.setup().hbar_index();
    Ok(f.substitute(h, &-&kernel.setup().hbar())?)
}

/// Interpolation data: rows i, columns k = 0..=d.
pub fn correlator_values(
    kernel: &RecursionKernel,
    family: Family<'_>,
    d: usize,
) -> Result<Vec<Vec<RatFunc>>, LocrecError> {
    let mut out = Vec::new();
    for i in 0..=kernel.n() {
        let w = bundle_weight(kernel, i);
        let fs: Vec<RatFunc> =
            (0..=d).map(|k| Ok(f_value(kernel, &family(i, k)?, i, k))).collect::<Result<_, LocrecError>>()?;
        let mut row = Vec::new();
        for k in 0..=d {
            let v = (&fs[k] * &negate_hbar(kernel, &fs[d - k])?).mul_poly(&w);
            row.push(v);
        }
        out.push(row);
    }
    Ok(out)
}

/// Newton interpolation through (x_t, y_t), returned as a function of p.
pub fn newton_interpolate(nodes: &[MPoly], values: &[RatFunc], p: &MPoly) -> Result<RatFunc, LocrecError> {
    let mut dd: Vec<RatFunc> = values.to_vec();
    let n = nodes.len();
    for level in 1..n {
        for t in (level..n).rev() {
            let diff = &dd[t] - &dd[t - 1];
            let gap = &nodes[t] - &nodes[t - level];
            dd[t] = match diff.as_poly().and_then(|f| f.div_exact(&gap)) {
                Some(quot) => RatFunc::from_poly(quot),
                None => diff.div_poly(&gap)?,
            };
        }
    }
    let mut acc = dd[n - 1].clone();
    for t in (0..n - 1).rev() {
        acc = acc.mul_poly(&(p - &nodes[t])).add(&dd[t]);
    }
    Ok(acc)
}

/// Newton interpolation over polynomials; `None` once a divided difference
/// is not a polynomial.
fn newton_interpolate_poly(nodes: &[MPoly], values: &[MPoly], p: &MPoly) -> Option<MPoly> {
    let mut dd = values.to_vec();
    let n = nodes.len();
    for level in 1..n {
        for t in (level..n).rev() {
            dd[t] = (&dd[t] - &dd[t - 1]).div_exact(&(&nodes[t] - &nodes[t - level]))?;
        }
    }
    let mut acc = dd[n - 1].clone();
    for t in (0..n - 1).rev() {
        acc = &(&acc * &(p - &nodes[t])) + &dd[t];
    }
    Some(acc)
}

fn nodes(kernel: &RecursionKernel, d: usize) -> Vec<MPoly> {
    let s = kernel.setup();
    let mut out = Vec::new();
    for i in 0..=kernel.n() {
        for k in 0..=d {
            out.push(s.lambda(i) + &s.hbar().scale(&int(k as i64)));
        }
    }
    out
}

/// Correlators P_0..P_order of a family given by its q-coefficients.
pub fn correlator_phi(
    kernel: &RecursionKernel,
    family: Family<'_>,
    order: usize,
) -> Result<Vec<Correlator>, LocrecError> {
    let p = kernel.setup().pvar();
    let n = kernel.n();
    let mut out = Vec::new();
    for d in 0..=order {
        let vals: Vec<RatFunc> = correlator_values(kernel, family, d)?.into_iter().flatten().collect();
        let poly = newton_interpolate(&nodes(kernel, d), &vals, &p)?;
        out.push(Correlator { d, poly, degree_bound: (n + 1) * d + n });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ClassPVerdict {
    pub per_degree: Vec<(usize, bool)>,
}

impl ClassPVerdict {
    pub fn passed(&self) -> bool {
        self.per_degree.iter().all(|(_, ok)| *ok)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.per_degree.iter().find(|(_, ok)| !ok).map(|(d, _)| *d)
    }
}

/// PASS iff every correlator P_d, d ≤ order, is a polynomial in all
/// variables of p-degree at most (n+1)d+n. The Newton coefficients of such
/// an interpolant are polynomials, so the first inexact divided difference
/// decides a failure.
pub fn classp_check(kernel: &RecursionKernel, family: Family<'_>, order: usize) -> Result<ClassPVerdict, LocrecError> {
    let p = kernel.setup().p_index();
    let pvar = kernel.setup().pvar();
    let mut per_degree = Vec::new();
    for d in 0..=order {
        let vals: Vec<RatFunc> = correlator_values(kernel, family, d)?.into_iter().flatten().collect();
        let polys: Option<Vec<MPoly>> = vals.iter().map(|v| v.as_poly().cloned()).collect();
        let ok = polys
            .and_then(|ys| newton_interpolate_poly(&nodes(kernel, d), &ys, &pvar))
            .is_some_and(|poly| poly.degree_in(p) as usize <= (kernel.n() + 1) * d + kernel.n());
        per_degree.push((d, ok));
    }
    Ok(ClassPVerdict { per_degree })
}

/// Polynomials in (ħ, p) truncated below ħ^cut.
struct Trunc {
    h: usize,
    cut: u32,
}

impl Trunc {
    fn cut(&self, f: &MPoly) -> MPoly {
        MPoly::from_terms(
            f.ctx(),
            f.terms().iter().filter(|(m, _)| m.exp(self.h) < self.cut).cloned().collect::<Vec<_>>(),
        )
    }

    fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        self.cut(&(a * b))
    }

    /// 1/(a + bħ) mod ħ^cut for rational a ≠ 0.
    fn inv_linear(&self, f: &MPoly) -> Option<MPoly> {
        let ctx = f.ctx();
        let a = f.constant_term();
        if a.is_zero() {
            return None;
        }
        let b = match (f - &MPoly::constant(ctx, a.clone())).coeffs_in(self.h).get(1) {
            Some(c) => c.constant_value()?,
            None => Rat::zero(),
        };
        let ratio = -b / &a;
        let mut term = Rat::one() / &a;
        let mut terms = Vec::new();
        for e in 0..self.cut {
            terms.push((Mono::var(self.h, e), term.clone()));
            term *= &ratio;
        }
        Some(MPoly::from_terms(ctx, terms))
    }
}

/// The Calabi-Yau family whose initial data R_{i,d} has ħ-degree ≤ d−2,
/// with the remaining coefficients fixed by the class-𝒫 condition. Numeric
/// weights only.
pub fn solve_classp(kernel: &RecursionKernel, order: usize) -> Result<RecSolution, LocrecError> {
    if kernel.regime() != Regime::CalabiYau {
        return Err(LocrecError::NotCalabiYau);
    }
    let setup = kernel.setup();
    if !setup.is_numeric() {
        return Err(LocrecError::NumericOnly);
    }
    kernel.check_generic(order)?;
    let n = kernel.n();
    let ctx = setup.ctx().clone();
    let hi = setup.hbar_index();
    let h = setup.hbar();
    let p = setup.pvar();
    let val = |m: &MPoly| m.constant_value().expect("numeric weight");
    let lam: Vec<Rat> = setup.lambdas().iter().map(val).collect();

    let mut initial = InitialData::trivial();
    let mut native: Vec<Vec<RatFunc>> = vec![vec![RatFunc::one(&ctx)]; n + 1];
    // F_k^{(i)} as polynomials in ħ, by degree
    let mut f_polys: Vec<Vec<MPoly>> = vec![vec![MPoly::one(&ctx)]; n + 1];

    for d in 1..=order {
        let tr = Trunc { h: hi, cut: d as u32 };
        let df = Rat::from_integer(factorial(d as u64));
        let mut rest = Vec::new();
        let mut fs = Vec::new();
        let mut pis = Vec::new();
        for i in 0..=n {
            let lookup = |j: usize, e: usize| -> Result<RatFunc, LocrecError> { Ok(native[j][e].clone()) };
            let r = kernel.recursion_sum(i, d, &lookup)?;
            let pi = tangent_product(kernel, i, d);
            let fsp = r.mul_poly(&pi).scale(&df);
            let fsp = fsp.as_poly().cloned().ok_or(LocrecError::NotPolynomial { d })?;
            rest.push(r);
            fs.push(fsp);
            pis.push(pi);
        }
        let unknowns_per = d.saturating_sub(1);
        let unknowns = (n + 1) * unknowns_per;
        let neg = |f: &MPoly| f.substitute(hi, &-&h);

        // E = E_0 + Σ r_{ik} E_{ik} must vanish mod ħ^d.
        let mut e0 = MPoly::zero(&ctx);
        let mut ek: Vec<MPoly> = vec![MPoly::zero(&ctx); unknowns];
        for i in 0..=n {
            let w = bundle_weight(kernel, i);
            for k in 0..=d {
                // Lagrange weight N_{ik}/(c_k U_{ik}) mod ħ^d, with the ħ^d of the
                // denominator moved to the vanishing condition.
                let mut num = MPoly::one(&ctx);
                let mut inv_den = MPoly::one(&ctx);
                let mut ck = Rat::one();
                for alpha in 0..=n {
                    for s in 0..=d {
                        if (alpha, s) == (i, k) {
                            continue;
                        }
                        let node = MPoly::constant(&ctx, lam[alpha].clone()) + h.scale(&int(s as i64));
                        num = tr.mul(&num, &(&p - &node));
                        if alpha == i {
                            ck *= int(k as i64 - s as i64);
                        } else {
                            let lin = MPoly::constant(&ctx, &lam[i] - &lam[alpha]) + h.scale(&int(k as i64 - s as i64));
                            let inv = tr.inv_linear(&lin).ok_or(LocrecError::DegenerateWeights(d))?;
                            inv_den = tr.mul(&inv_den, &inv);
                        }
                    }
                }
                let weight = tr.mul(&num, &inv_den).scale(&ck.recip());
                let weight = tr.mul(&weight, &w);
                let known = |kk: usize| -> MPoly {
                    if kk == d {
                        fs[i].clone()
                    } else {
                        f_polys[i][kk].clone()
                    }
                };
                let v = &known(k) * &neg(&known(d - k));
                e0 = &e0 + &tr.mul(&weight, &v);
                if unknowns_per > 0 && (k == 0 || k == d) {
                    // F_d gains Π_i(ħ) Σ_t r_{it} ħ^t.
                    for t in 0..unknowns_per {
                        let unit = &pis[i] * &h.pow(t as u32);
                        let dv = if k == d { unit } else { neg(&unit) };
                        ek[i * unknowns_per + t] = &ek[i * unknowns_per + t] + &tr.mul(&weight, &dv);
                    }
                }
            }
        }
        let r_values: Vec<Rat> = if unknowns > 0 {
            let mut monos: BTreeMap<Mono, usize> = BTreeMap::new();
            for f in std::iter::once(&e0).chain(ek.iter()) {
                for (m, _) in f.terms() {
                    let len = monos.len();
                    monos.entry(*m).or_insert(len);
                }
            }
            let mut rows = vec![vec![Rat::zero(); unknowns]; monos.len()];
            let mut rhs = vec![Rat::zero(); monos.len()];
            for (u, f) in ek.iter().enumerate() {
                for (m, c) in f.terms() {
                    rows[monos[m]][u] = c.clone();
                }
            }
            for (m, c) in e0.terms() {
                rhs[monos[m]] = -c.clone();
            }
            solve_unique(&rows, &rhs, unknowns)?
        } else {
            if !e0.is_zero() {
                return Err(LocrecError::NotPolynomial { d });
            }
            Vec::new()
        };
        for i in 0..=n {
            let mut r = MPoly::zero(&ctx);
            for t in 0..unknowns_per {
                r = &r + &h.pow(t as u32).scale(&r_values[i * unknowns_per + t]);
            }
            let k = &rest[i] + &RatFunc::from_poly(r.scale(&df.recip()));
            let f = &fs[i] + &(&pis[i] * &r);
            f_polys[i].push(f);
            native[i].push(k);
            initial.set(i, d, RatFunc::from_poly(r));
        }
    }
    Ok(RecSolution { regime: Regime::CalabiYau, native, initial, hbar: h })
}
