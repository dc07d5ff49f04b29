//! Equivariant genus-zero invariants of the projective plane from the
//! deformed Kontsevich recursion, and the plain Kontsevich recursion as an
//! independent check.

use crate::exactalg::rat::binomial;
use crate::exactalg::{int, Context, Ctx, MPoly, Mono, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Integer torus weights (a, b, c) of the action on P².
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct P2Setup {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl P2Setup {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        P2Setup { a, b, c }
    }

    pub fn e1(&self) -> Rat {
        int(self.a + self.b + self.c)
    }

    pub fn e2(&self) -> Rat {
        int(self.a * self.b + self.a * self.c + self.b * self.c)
    }

    pub fn e3(&self) -> Rat {
        int(self.a * self.b * self.c)
    }
}

/// Context `e1, e2, e3` for symbolic weights.
pub fn symmetric_context() -> Ctx {
    Context::new(["e1", "e2", "e3"]).expect("distinct names")
}

/// N_{d,k}: I_d(T_2^{3d−1+k}) = N_{d,k} λ^k.
#[derive(Clone, Debug, PartialEq)]
pub struct NTable {
    values: BTreeMap<(usize, usize), MPoly>,
    ctx: Ctx,
}

impl NTable {
    /// N_{d,k}, zero outside the computed range and for k < 0.
    pub fn get(&self, d: usize, k: isize) -> MPoly {
        if k < 0 {
            return MPoly::zero(&self.ctx);
        }
        self.values.get(&(d, k as usize)).cloned().unwrap_or_else(|| MPoly::zero(&self.ctx))
    }

    /// Numeric value when the table was built at fixed weights.
    pub fn value(&self, d: usize, k: usize) -> Option<Rat> {
        self.values.get(&(d, k)).and_then(MPoly::constant_value)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &MPoly)> {
        self.values.iter().map(|(k, v)| (*k, v))
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    /// Entries with d = 1, k ≥ 1 depend on reading the recursion at d = 1.
    pub fn is_convention_dependent(d: usize, k: usize) -> bool {
        d == 1 && k >= 1
    }
}

fn fill(ctx: &Ctx, e: [MPoly; 3], seed: Rat, max_d: usize, max_k: usize) -> NTable {
    let [e1, e2, e3] = e;
    let c1 = e1.scale(&int(2));
    let c2 = &(&e1 * &e1) + &e2;
    let c3 = &(&e1 * &e2) - &e3;
    let mut t = NTable { values: BTreeMap::new(), ctx: ctx.clone() };
    for d in 1..=max_d {
        for k in 0..=max_k {
            let mut acc = if d == 1 && k == 0 { MPoly::constant(ctx, seed.clone()) } else { MPoly::zero(ctx) };
            let top = (3 * d + k) as i64 - 4;
            for d1 in 1..d {
                let d2 = d - d1;
                let (d1i, d2i) = (d1 as i64, d2 as i64);
                for k1 in 0..=k {
                    let k2 = k - k1;
                    let w = int(d1i * d2i)
                        * (binom(top, 3 * d1i - 2 + k1 as i64) * int(d1i * d2i)
                            - binom(top, 3 * d1i - 1 + k1 as i64) * int(d1i * d1i));
                    if w.is_zero() {
                        continue;
                    }
                    acc = &acc + &(&t.get(d1, k1 as isize) * &t.get(d2, k2 as isize)).scale(&w);
                }
            }
            let di = d as i64;
            let k = k as isize;
            acc = &acc + &(&c1 * &t.get(d, k - 1)).scale(&int(di));
            acc = &acc - &(&c2 * &t.get(d, k - 2)).scale(&int(di * di));
            acc = &acc + &(&c3 * &t.get(d, k - 3)).scale(&int(di * di * di));
            t.values.insert((d, k as usize), acc);
        }
    }
    t
}

fn binom(n: i64, k: i64) -> Rat {
    if n < 0 || k < 0 || k > n {
        return Rat::zero();
    }
    Rat::from_integer(binomial(n, k))
}

/// The recursion at fixed integer weights.
pub fn p2_recursion(setup: &P2Setup, max_d: usize, max_k: usize) -> NTable {
    p2_recursion_seeded(setup, Rat::one(), max_d, max_k)
}

/// As `p2_recursion` with a chosen N_{1,0}.
pub fn p2_recursion_seeded(setup: &P2Setup, seed: Rat, max_d: usize, max_k: usize) -> NTable {
    let ctx = symmetric_context();
    let e = [setup.e1(), setup.e2(), setup.e3()].map(|v| MPoly::constant(&ctx, v));
    fill(&ctx, e, seed, max_d, max_k)
}

/// The recursion with e_1, e_2, e_3 as variables.
pub fn p2_recursion_symbolic(max_d: usize, max_k: usize) -> NTable {
    let ctx = symmetric_context();
    let e = [0, 1, 2].map(|i| MPoly::var(&ctx, i));
    fill(&ctx, e, Rat::one(), max_d, max_k)
}

/// Weighted degree with deg e_j = j, if all terms agree.
pub fn weighted_degree(p: &MPoly) -> Option<u32> {
    let degs: Vec<u32> = p.terms().iter().map(|(m, _): &(Mono, Rat)| m.exp(0) + 2 * m.exp(1) + 3 * m.exp(2)).collect();
    match degs.first() {
        None => Some(0),
        Some(&d0) => degs.iter().all(|&d| d == d0).then_some(d0),
    }
}

/// Rational plane curves through 3d−1 points:
/// N_d = Σ_{d1+d2=d} N_{d1}N_{d2} d1²d2 [d2 C(3d−4, 3d1−2) − d1 C(3d−4, 3d1−1)].
pub fn kontsevich_oracle(max_d: usize) -> BTreeMap<usize, BigInt> {
    let mut n: BTreeMap<usize, BigInt> = BTreeMap::new();
    for d in 1..=max_d {
        if d == 1 {
            n.insert(1, BigInt::one());
            continue;
        }
        let top = 3 * d as i64 - 4;
        let mut acc = BigInt::zero();
        for d1 in 1..d {
            let d2 = d - d1;
            let (a, b) = (BigInt::from(d1), BigInt::from(d2));
            let c_lo = if 3 * d1 as i64 - 2 <= top { binomial(top, 3 * d1 as i64 - 2) } else { BigInt::zero() };
            let c_hi = if 3 * d1 as i64 - 1 <= top { binomial(top, 3 * d1 as i64 - 1) } else { BigInt::zero() };
            acc += &n[&d1] * &n[&d2] * &a * &a * &b * (&b * c_lo - &a * c_hi);
        }
        n.insert(d, acc);
    }
    n
}

/// Outcome of comparing the k = 0 column at zero weights with the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitReport {
    pub checked: usize,
    pub first_mismatch: Option<usize>,
}

impl LimitReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compares a table's k = 0 column at e = 0 with the Kontsevich oracle for
/// the generated degrees 2..=max_d; N_{1,0} is the shared seed.
pub fn compare_limits(table: &NTable, max_d: usize) -> LimitReport {
    let oracle = kontsevich_oracle(max_d);
    let zero: Vec<(usize, Rat)> = (0..3).map(|i| (i, Rat::zero())).collect();
    let first_mismatch = (2..=max_d).find(|d| {
        let v = table.get(*d, 0).substitute_values(&zero).constant_value().unwrap_or_else(Rat::zero);
        v != Rat::from_integer(oracle[d].clone())
    });
    LimitReport { checked: max_d.saturating_sub(1), first_mismatch }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(t: &BTreeMap<usize, BigInt>) -> Vec<i64> {
        t.values().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn oracle_values() {
        assert_eq!(ints(&kontsevich_oracle(6)), vec![1, 1, 12, 620, 87304, 26312976]);
    }

    #[test]
    fn zero_weights_match_oracle() {
        let t = p2_recursion(&P2Setup::new(0, 0, 0), 6, 0);
        assert_eq!(t.value(1, 0), Some(int(1)));
        assert_eq!(t.value(4, 0), Some(int(620)));
        assert!(compare_limits(&t, 6).passed());
        assert!(t.get(3, -1).is_zero());
    }

    #[test]
    fn perturbed_seed_is_caught() {
        let t = p2_recursion_seeded(&P2Setup::new(0, 0, 0), int(2), 4, 0);
        assert_eq!(compare_limits(&t, 4).first_mismatch, Some(2));
    }

    #[test]
    fn symbolic_table_is_symmetric_and_graded() {
        let t = p2_recursion_symbolic(4, 4);
        for ((_, k), v) in t.entries() {
            assert_eq!(weighted_degree(v), Some(k as u32));
        }
        // k = 0 column carries no weights
        assert!((1..=4).all(|d| t.get(d, 0).is_constant()));
        // N_{1,1} = 2e_1
        assert_eq!(t.get(1, 1), MPoly::var(t.ctx(), 0).scale(&int(2)));
        for s in [P2Setup::new(1, 2, 3), P2Setup::new(-2, 0, 5)] {
            let num = p2_recursion(&s, 4, 4);
            let vals = [(0, s.e1()), (1, s.e2()), (2, s.e3())];
            for ((d, k), v) in t.entries() {
                assert_eq!(v.substitute_values(&vals).constant_value(), num.value(d, k));
            }
        }
    }
}
