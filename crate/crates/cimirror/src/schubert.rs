//! Schubert calculus on G(2, N): an independent count of lines on a
//! hypersurface of degree 2N−5 in P^{N−1}.

use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Classes on G(2, N) as partitions (a ≥ b) in a 2 × (N−2) box.
type Classes = BTreeMap<(usize, usize), BigInt>;

/// σ_1 · σ_{a,b}: add one box.
fn times_sigma1(x: &Classes, width: usize) -> Classes {
    let mut out = Classes::new();
    for (&(a, b), c) in x {
        if a < width {
            *out.entry((a + 1, b)).or_default() += c;
        }
        if b < a {
            *out.entry((a, b + 1)).or_default() += c;
        }
    }
    out
}

/// σ_{1,1} · σ_{a,b}: one box in each row.
fn times_sigma11(x: &Classes, width: usize) -> Classes {
    let mut out = Classes::new();
    for (&(a, b), c) in x {
        if a < width {
            *out.entry((a + 1, b + 1)).or_default() += c;
        }
    }
    out
}

/// Top Chern class of Sym^m S* as Σ_j coeff_j σ_1^{m+1−2j} σ_{11}^j, from
/// the Chern roots ∏_{a=0}^m (a x_1 + (m−a) x_2).
fn top_class_in_elementary(m: usize) -> Vec<BigInt> {
    // polynomial in x1, x2 homogeneous of degree m+1, as coefficients of x1^i x2^{m+1−i}
    let deg = m + 1;
    let mut poly = vec![BigInt::zero(); deg + 1];
    poly[0] = BigInt::from(1);
    let mut cur_deg = 0;
    for a in 0..=m {
        let mut next = vec![BigInt::zero(); deg + 1];
        for i in 0..=cur_deg {
            if poly[i].is_zero() {
                continue;
            }
            next[i + 1] += &poly[i] * BigInt::from(a);
            next[i] += &poly[i] * BigInt::from(m - a);
        }
        poly = next;
        cur_deg += 1;
    }
    // peel off σ_1^{deg−2j} σ_2^j from the x1-leading term
    let mut out = vec![BigInt::zero(); deg / 2 + 1];
    let elem = |j: usize| -> Vec<BigInt> {
        // (x1 + x2)^{deg−2j} (x1 x2)^j
        let k = deg - 2 * j;
        let mut v = vec![BigInt::zero(); deg + 1];
        for i in 0..=k {
            v[i + j] = crate::exactalg::rat::binomial(k as i64, i as i64);
        }
        v
    };
    for j in 0..=deg / 2 {
        let c = poly[deg - j].clone();
        if c.is_zero() {
            continue;
        }
        let e = elem(j);
        for (p, v) in poly.iter_mut().zip(&e) {
            *p -= &c * v;
        }
        out[j] = c;
    }
    assert!(poly.iter().all(Zero::is_zero), "symmetric reduction left a remainder");
    out
}

/// ∫_{G(2,N)} c_top(Sym^{2N−5} S*), N ≥ 3.
pub fn lines_on_hypersurface(ambient: usize) -> BigInt {
    let width = ambient - 2;
    let m = 2 * ambient - 5;
    let mut total = BigInt::zero();
    for (j, c) in top_class_in_elementary(m).into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut x = Classes::new();
        x.insert((0, 0), BigInt::from(1));
        for _ in 0..j {
            x = times_sigma11(&x, width);
        }
        for _ in 0..m + 1 - 2 * j {
            x = times_sigma1(&x, width);
        }
        if let Some(v) = x.get(&(width, width)) {
            total += c * v;
        }
    }
    total
}

/// Lines on a generic quintic threefold.
pub fn quintic_lines() -> BigInt {
    lines_on_hypersurface(5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_line_counts() {
        // cubic surface and quintic threefold
        assert_eq!(lines_on_hypersurface(4), BigInt::from(27));
        assert_eq!(quintic_lines(), BigInt::from(2875));
    }

    #[test]
    fn pieri_degree_of_grassmannian() {
        // σ_1^6 on G(2,5) is the Plücker degree 5
        let mut x = Classes::new();
        x.insert((0, 0), BigInt::from(1));
        for _ in 0..6 {
            x = times_sigma1(&x, 3);
        }
        assert_eq!(x[&(3, 3)], BigInt::from(5));
    }
}
