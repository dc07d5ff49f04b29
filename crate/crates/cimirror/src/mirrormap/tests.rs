use super::*;
use crate::exactalg::rat;
use crate::hyperseries::{build_zstar_equivariant, cohp_from_ratfunc, gamma_class, pf_operator, s_prime_coefficient};
use crate::locrec::{solve_classp, RecursionKernel};

fn quintic() -> CIConfig {
    CIConfig::new(4, vec![5]).unwrap()
}

fn ints(v: &[i64]) -> QSeries<Rat> {
    QSeries::from_ints(v)
}

fn zstar_family(config: &CIConfig, setup: &TorusSetup, order: usize) -> Family {
    (0..=config.n()).map(|i| build_zstar_equivariant(config, setup, i, order).unwrap()).collect()
}

fn families_equal(a: &[QSeries<RatFunc>], b: &[QSeries<RatFunc>]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x.order() == y.order() && x.coeffs().iter().zip(y.coeffs()).all(|(p, q)| p.equals(q)))
}

#[test]
fn f_and_g_values() {
    let m = f_and_g(&quintic(), 3);
    assert_eq!(m.f, ints(&[1, 120, 113400, 168168000]));
    assert_eq!(m.g(5).coeff(1), &int(274));
    assert_eq!(m.g(1).coeff(1), &int(120));
    assert!(m.g(5).coeff(0).is_zero() && m.g(1).coeff(0).is_zero());
    assert!(m.nu2.coeff(0).is_zero() && m.nu3.coeff(0).is_zero());
}

#[test]
fn mirror_map_values() {
    let t = mirror_map_T(&quintic(), 1).unwrap();
    assert_eq!(t, ints(&[0, 770]));
    let ones = CIConfig::new(3, vec![1, 1, 1, 1]).unwrap();
    assert!(mirror_map_T(&ones, 4).unwrap().is_zero());
    assert_eq!(mirror_map_T(&CIConfig::new(3, vec![3]).unwrap(), 2), Err(MirrorError::NotCalabiYau));
    for c in [quintic(), CIConfig::new(5, vec![3, 3]).unwrap(), CIConfig::new(3, vec![4]).unwrap()] {
        let basis = frobenius_basis(&c, 5).unwrap();
        assert_eq!(mirror_map_from_basis(&basis).unwrap(), mirror_map_T(&c, 5).unwrap());
    }
}

#[test]
fn log_inverts_exp() {
    let s = QSeries::new(vec![int(0), int(2), rat(-1, 3), int(7)]);
    assert_eq!(series_log(&s.exp().unwrap()).unwrap(), s);
}

#[test]
fn transforms_identity_and_round_trip() {
    let c = CIConfig::new(3, vec![4]).unwrap();
    let setup = TorusSetup::at_point(&[int(0), rat(13, 7), rat(71, 5), rat(-29, 3)], &[rat(11, 3)]).unwrap();
    let fam = zstar_family(&c, &setup, 3);
    assert!(families_equal(&transform_a(&fam, &ints(&[1, 0, 0, 0])).unwrap(), &fam));
    assert!(families_equal(&transform_b(&setup, &fam, &ints(&[0, 0, 0, 0])).unwrap(), &fam));
    let nu = QSeries::new(vec![int(0), rat(3, 2), int(-1), rat(5, 7)]);
    let there = transform_b(&setup, &fam, &nu).unwrap();
    let back = transform_b(&setup, &there, &inverse_shift(&nu).unwrap()).unwrap();
    assert!(families_equal(&back, &fam));
    assert_eq!(transform_a(&fam, &ints(&[2, 0])).unwrap_err(), MirrorError::ScaleNotUnit);
    assert_eq!(transform_b(&setup, &fam, &ints(&[1, 0])).unwrap_err(), MirrorError::ShiftNotSmall);
    let bad = setup.hbar();
    assert_eq!(transform_c(&setup, &fam, &bad, &ints(&[0, 1])).unwrap_err(), MirrorError::TwistNotLinear);
}

#[test]
fn pipeline_order_zero() {
    let c = quintic();
    let setup = TorusSetup::at_point(&[int(0), int(3), int(-7), rat(1, 2), int(11)], &[rat(2, 3)]).unwrap();
    let ones: Family = (0..5).map(|_| QSeries::constant(RatFunc::one(setup.ctx()), 0)).collect();
    let out = cestfini_pipeline(&c, &setup, &ones, 0).unwrap();
    assert!(out.iter().all(|w| w.coeff(0).equals(&RatFunc::one(setup.ctx()))));
}

#[test]
fn pipeline_from_recursion_matches_zstar() {
    let c = CIConfig::new(3, vec![4]).unwrap();
    let setup = TorusSetup::at_point(&[int(0), rat(13, 7), rat(71, 5), rat(-29, 3)], &[rat(11, 3)]).unwrap();
    let kernel = RecursionKernel::new(c.clone(), setup.clone()).unwrap();
    let sol = solve_classp(&kernel, 3).unwrap();
    let fam: Family = (0..=3).map(|i| sol.series(i)).collect();
    let out = cestfini_pipeline(&c, &setup, &fam, 3).unwrap();
    assert!(families_equal(&out, &zstar_family(&c, &setup, 3)));
    assert!(families_equal(&cestfini_by_operations(&c, &setup, &fam, 3).unwrap(), &out));
    let back = cestfini_inverse(&c, &setup, &out, 3).unwrap();
    assert!(families_equal(&back, &fam));
}

#[test]
fn initial_condition_transport() {
    let c = CIConfig::new(3, vec![4]).unwrap();
    let setup = TorusSetup::symbolic(3, 1).unwrap();
    let data = f_and_g(&c, 2);
    for i in 0..=3 {
        let z = build_zstar_equivariant(&c, &setup, i, 2).unwrap();
        let (a, b) = initial_conditions(&setup, &z).unwrap();
        let (ea, eb) = zstar_initial_conditions(&c, &setup, &data, i).unwrap();
        assert!(families_equal(&[a], &[ea]) && families_equal(&[b], &[eb]));
    }
}

#[test]
fn frobenius_solutions() {
    let c = quintic();
    let basis = frobenius_basis(&c, 5).unwrap();
    assert_eq!(basis.len(), 4);
    let data = f_and_g(&c, 5);
    assert!(basis.solution(0).is_t_free());
    assert_eq!(basis.solution(0).part(0), data.f);
    // s*_1 = t f + Σ l_a[g_{l_a} − g_1]
    assert_eq!(basis.solution(1).part(1), data.f);
    assert_eq!(basis.solution(1).part(0), data.g(5).sub(data.g(1)).unwrap().scale(&int(5)));
    let op = pf_operator(&c);
    for (beta, s) in basis.solutions.iter().enumerate() {
        assert_eq!(s.t_degree(), Some(beta));
        let r = apply_at_unit_hbar(&op, s).unwrap();
        assert!(r.t_degree().is_none(), "s*_{beta} not annihilated");
    }
}

#[test]
fn quintic_yukawa_and_instantons() {
    let k = yukawa_k(&quintic(), 4).unwrap();
    assert_eq!(k.coeff(0), &int(5));
    assert_eq!(k.coeff(1), &int(2875));
    let table = instanton_numbers(&k, 4);
    assert_eq!(table.integer(1), Some(2875.into()));
    assert_eq!(table.integer(2), Some(609250.into()));
    assert_eq!(table.integer(3), Some(317206375.into()));
    assert!(table.all_integral());
    assert_eq!(yukawa_k(&CIConfig::new(3, vec![4]).unwrap(), 2).unwrap_err(), MirrorError::NotThreefold);
}

#[test]
fn yukawa_is_basis_independent() {
    let c = CIConfig::new(5, vec![3, 3]).unwrap();
    let basis = frobenius_basis(&c, 4).unwrap();
    let k = yukawa_from_solution(&c, &basis, basis.solution(2)).unwrap();
    let mixed =
        basis.solution(2).add(&basis.solution(1).scale(&rat(-17, 5))).add(&basis.solution(0).scale(&rat(23, 9)));
    assert_eq!(yukawa_from_solution(&c, &basis, &mixed).unwrap(), k);
    assert_eq!(k.coeff(0), &int(9));
}

#[test]
fn instanton_inversion_examples() {
    let t = instanton_numbers(&QSeries::constant(int(5), 5), 5);
    assert!(t.n.values().all(Zero::is_zero));
    // 5 + 8q/(1−q)
    let t = instanton_numbers(&ints(&[5, 8, 8, 8, 8, 8]), 5);
    assert_eq!(t.integer(1), Some(8.into()));
    assert!((2..=5).all(|d| t.integer(d) == Some(0.into())));
    let t = instanton_numbers(&ints(&[5, 1, 3]), 2);
    assert!(!t.is_integral(2));
}

#[test]
fn nonequivariant_limits() {
    let c = CIConfig::new(2, vec![1]).unwrap();
    let setup = TorusSetup::symbolic(2, 1).unwrap();
    let h = setup.hbar();
    for d in 1..=2u32 {
        for i in 0..=2 {
            let z = crate::hyperseries::zstar_coefficient(&c, &setup, i, d as usize).unwrap();
            // ∏_{m≤d} mħ / ∏_{m≤d} (mħ)^3
            let df = Rat::from_integer(crate::exactalg::rat::factorial(d as u64));
            let expect = RatFunc::one(setup.ctx()).div_poly(&h.pow(2 * d)).unwrap().scale(&(df.clone() * &df).recip());
            assert!(nonequiv_limit(&setup, &z).unwrap().equals(&expect));
        }
    }
    // S′ at the origin is Γ with P = p
    let q = CIConfig::new(4, vec![5]).unwrap();
    let s5 = TorusSetup::symbolic(4, 1).unwrap();
    for d in 0..=2 {
        let sp = nonequiv_limit(&s5, &s_prime_coefficient(&q, &s5, d).unwrap()).unwrap();
        let as_class = cohp_from_ratfunc(&sp, s5.p_index(), s5.hbar_index(), 4).unwrap();
        assert_eq!(as_class, gamma_class(&q, d));
    }
    let x = TorusSetup::symbolic(2, 1).unwrap();
    let pole = RatFunc::one(x.ctx()).div_poly(x.lambda(1)).unwrap();
    assert_eq!(nonequiv_limit(&x, &pole).unwrap_err(), MirrorError::PoleAtOrigin);
}
