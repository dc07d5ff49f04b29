//! Small quantum cohomology rings Q[p, q]/(relation) of complete
//! intersections, read off from the Picard-Fuchs operators.

use crate::exactalg::{Context, Ctx, MPoly, Mono, Rat};
use crate::hyperseries::{modified_pf_operator, pf_operator, CIConfig, Regime};
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SqcError {
    #[error("relation extraction is not available in the Calabi-Yau regime")]
    CalabiYau,
    #[error("operator has a negative ħ-power at ħ = 0")]
    SingularAtZero,
}

/// Context `p, q` shared by relations and elements.
pub fn pq_context() -> Ctx {
    Context::new(["p", "q"]).expect("two distinct names")
}

const P: usize = 0;
const Q: usize = 1;

/// Relation `lead − rest = 0`, monic of degree n+1−r in p.
#[derive(Clone, Debug, PartialEq)]
pub struct SqcRelation {
    config: CIConfig,
    poly: MPoly,
    /// dim X = 2 outside the cubic surface: formal, not asserted as a ring.
    formal: bool,
}

impl SqcRelation {
    pub fn config(&self) -> &CIConfig {
        &self.config
    }

    pub fn poly(&self) -> &MPoly {
        &self.poly
    }

    pub fn is_formal(&self) -> bool {
        self.formal
    }

    pub fn ctx(&self) -> &Ctx {
        self.poly.ctx()
    }

    /// Degree of the relation in p, i.e. the rank of the ring over Q[q].
    pub fn rank(&self) -> usize {
        self.poly.degree_in(P) as usize
    }

    /// Weighted degree of q: n + 1 − Σl.
    pub fn q_weight(&self) -> usize {
        self.config.n() + 1 - self.config.degree_sum()
    }

    /// Every term has weighted degree `rank` with deg p = 1, deg q = q_weight.
    pub fn is_homogeneous(&self) -> bool {
        let w = self.q_weight();
        self.poly.terms().iter().all(|(m, _)| (m.exp(P) as usize) + w * (m.exp(Q) as usize) == self.rank())
    }

    /// Coefficient of p^a q^b in the reduced form p^N = Σ c p^a q^b.
    pub fn reduced_coefficient(&self, a: u32, b: u32) -> Rat {
        let mono = Mono::from_exps(&[a, b]);
        self.poly.terms().iter().find(|(m, _)| *m == mono).map(|(_, c)| -c.clone()).unwrap_or_else(Rat::zero)
    }

    /// `poly` with one reduced coefficient replaced, for sensitivity checks.
    pub fn with_reduced_coefficient(&self, a: u32, b: u32, value: Rat) -> Self {
        let mono = Mono::from_exps(&[a, b]);
        let old = self.reduced_coefficient(a, b);
        let delta = MPoly::from_terms(self.ctx(), [(mono, old - value)]);
        SqcRelation { poly: &self.poly + &delta, ..self.clone() }
    }
}

impl fmt::Display for SqcRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.poly)
    }
}

fn is_cubic_surface(config: &CIConfig) -> bool {
    config.n() == 3 && config.degrees() == [3]
}

/// Sets ħ = 0, θ ↦ p, e^t ↦ q in the Picard-Fuchs operator (the modified
/// one in the CRITICAL regime).
pub fn relation_from_pf(config: &CIConfig) -> Result<SqcRelation, SqcError> {
    let op = match config.regime() {
        Regime::Sub => pf_operator(config),
        Regime::Critical => modified_pf_operator(config),
        Regime::CalabiYau => return Err(SqcError::CalabiYau),
    };
    let ctx = pq_context();
    let mut terms = Vec::new();
    for (k, m, c) in op.terms() {
        if c.terms().any(|(e, v)| e < 0 && !v.is_zero()) {
            return Err(SqcError::SingularAtZero);
        }
        let c0 = c.coeff(0);
        if !c0.is_zero() {
            terms.push((Mono::from_exps(&[m as u32, k as u32]), c0));
        }
    }
    let poly = MPoly::from_terms(&ctx, terms);
    let formal = config.dim() == 2 && !is_cubic_surface(config);
    Ok(SqcRelation { config: config.clone(), poly, formal })
}

/// The closed forms: p^{n+1−r} − ∏l^l q p^{Σl−r} (SUB) and
/// (p+Lq)^{n+1−r} − ∏l^l q (p+Lq)^{n−r}, L = ∏ l!, (CRITICAL).
pub fn closed_form_relation(config: &CIConfig) -> Result<SqcRelation, SqcError> {
    let ctx = pq_context();
    let p = MPoly::var(&ctx, P);
    let q = MPoly::var(&ctx, Q);
    let top = (config.n() + 1 - config.r()) as u32;
    let c = config.self_power_product();
    let poly = match config.regime() {
        Regime::Sub => &p.pow(top) - &(&q * &p.pow((config.degree_sum() - config.r()) as u32)).scale(&c),
        Regime::Critical => {
            let shifted = &p + &q.scale(&config.factorial_product());
            &shifted.pow(top) - &(&q * &shifted.pow(top - 1)).scale(&c)
        }
        Regime::CalabiYau => return Err(SqcError::CalabiYau),
    };
    let formal = config.dim() == 2 && !is_cubic_surface(config);
    Ok(SqcRelation { config: config.clone(), poly, formal })
}

/// Element of Q[p, q]/(relation), kept reduced to p-degree below the rank.
#[derive(Clone, Debug, PartialEq)]
pub struct SqcElement {
    poly: MPoly,
}

impl SqcElement {
    pub fn new(rel: &SqcRelation, poly: MPoly) -> Self {
        SqcElement { poly: reduce(rel, &poly) }
    }

    /// T_i = p^i.
    pub fn basis(rel: &SqcRelation, i: usize) -> Self {
        Self::new(rel, MPoly::var(rel.ctx(), P).pow(i as u32))
    }

    pub fn one(rel: &SqcRelation) -> Self {
        Self::basis(rel, 0)
    }

    pub fn poly(&self) -> &MPoly {
        &self.poly
    }

    /// Coefficient polynomial in q of p^i.
    pub fn component(&self, i: usize) -> MPoly {
        self.poly.coeffs_in(P).get(i).cloned().unwrap_or_else(|| MPoly::zero(self.poly.ctx()))
    }

    pub fn add(&self, o: &Self) -> Self {
        SqcElement { poly: &self.poly + &o.poly }
    }
}

impl fmt::Display for SqcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

fn reduce(rel: &SqcRelation, x: &MPoly) -> MPoly {
    x.divrem_in(&rel.poly, P).1
}

/// Product in the quantum ring.
pub fn quantum_multiply(rel: &SqcRelation, a: &SqcElement, b: &SqcElement) -> SqcElement {
    SqcElement::new(rel, &a.poly * &b.poly)
}

/// I_1(T_1, T_1, T_1) from the q p^{N−1} coefficient of the relation times
/// ∫T_1 ∪ T_1 = ∏ l_a.
pub fn lines_from_relation(rel: &SqcRelation) -> Rat {
    let top = rel.rank() as u32;
    rel.reduced_coefficient(top - 1, 1) * rel.config().degree_product()
}

/// Lines on a smooth cubic surface.
pub fn lines_on_cubic() -> Rat {
    let cubic = CIConfig::new(3, vec![3]).expect("valid configuration");
    lines_from_relation(&relation_from_pf(&cubic).expect("CRITICAL regime"))
}

#[cfg(test)]
mod tests;
