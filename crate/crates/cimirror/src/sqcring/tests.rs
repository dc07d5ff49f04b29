use super::*;
use crate::exactalg::{int, rat};
use proptest::prelude::*;

fn pq(terms: &[(u32, u32, i64)]) -> MPoly {
    MPoly::from_terms(&pq_context(), terms.iter().map(|&(a, b, c)| (Mono::from_exps(&[a, b]), int(c))))
}

#[test]
fn projective_space_relation() {
    for r in 1..=5 {
        let rel = relation_from_pf(&CIConfig::new(r, vec![]).unwrap()).unwrap();
        assert_eq!(rel.poly(), &pq(&[(r as u32 + 1, 0, 1), (0, 1, -1)]));
        let p = SqcElement::basis(&rel, 1);
        let pr = SqcElement::basis(&rel, r);
        assert_eq!(quantum_multiply(&rel, &p, &pr).poly(), &pq(&[(0, 1, 1)]));
    }
    // hyperplanes cut P^n down to P^{n−r}
    let rel = relation_from_pf(&CIConfig::new(4, vec![1, 1]).unwrap()).unwrap();
    assert_eq!(rel.poly(), &pq(&[(3, 0, 1), (0, 1, -1)]));
}

#[test]
fn closed_forms_for_small_configs() {
    let mut seen = 0;
    for n in 1..=6 {
        for ls in degree_lists(n) {
            let c = CIConfig::new(n, ls).unwrap();
            if c.regime() == Regime::CalabiYau {
                assert_eq!(relation_from_pf(&c), Err(SqcError::CalabiYau));
                continue;
            }
            let rel = relation_from_pf(&c).unwrap();
            assert_eq!(rel, closed_form_relation(&c).unwrap(), "{c}");
            assert!(rel.is_homogeneous(), "{c}");
            assert_eq!(rel.is_formal(), c.dim() == 2 && !(n == 3 && c.degrees() == [3]));
            seen += 1;
        }
    }
    assert!(seen > 20);
}

/// Non-increasing lists of positive degrees with Σl ≤ n+1.
pub(crate) fn degree_lists(n: usize) -> Vec<Vec<usize>> {
    fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for l in (1..=max.min(rem)).rev() {
            cur.push(l);
            go(rem - l, l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n + 1, n + 1, &mut Vec::new(), &mut out);
    out
}

#[test]
fn cubic_surface() {
    let rel = relation_from_pf(&CIConfig::new(3, vec![3]).unwrap()).unwrap();
    // p³ = 9qp² + 216q²p + 756q³
    assert_eq!(rel.poly(), &pq(&[(3, 0, 1), (2, 1, -9), (1, 2, -216), (0, 3, -756)]));
    let p = SqcElement::basis(&rel, 1);
    let p3 = quantum_multiply(&rel, &quantum_multiply(&rel, &p, &p), &p);
    assert_eq!(p3.poly(), &pq(&[(2, 1, 9), (1, 2, 216), (0, 3, 756)]));
    assert_eq!(lines_on_cubic(), int(27));
    assert!(!rel.is_formal());
    let eps = rat(1, 7);
    let bumped = rel.with_reduced_coefficient(2, 1, int(9) + &eps);
    assert_eq!(lines_from_relation(&bumped), int(27) + eps * int(3));
}

fn element(rel: &SqcRelation, coeffs: &[(u32, u32, i64)]) -> SqcElement {
    SqcElement::new(rel, pq(coeffs))
}

proptest! {
    #[test]
    fn ring_axioms(
        a in prop::collection::vec((0u32..6, 0u32..3, -9i64..10), 1..5),
        b in prop::collection::vec((0u32..6, 0u32..3, -9i64..10), 1..5),
        c in prop::collection::vec((0u32..6, 0u32..3, -9i64..10), 1..5),
        which in 0usize..4,
    ) {
        let configs = [(3, vec![3]), (4, vec![2]), (5, vec![2, 2]), (4, vec![4])];
        let (n, ls) = configs[which].clone();
        let rel = relation_from_pf(&CIConfig::new(n, ls).unwrap()).unwrap();
        let (x, y, z) = (element(&rel, &a), element(&rel, &b), element(&rel, &c));
        let one = SqcElement::one(&rel);
        prop_assert_eq!(quantum_multiply(&rel, &one, &x), x.clone());
        prop_assert_eq!(quantum_multiply(&rel, &x, &y), quantum_multiply(&rel, &y, &x));
        let left = quantum_multiply(&rel, &quantum_multiply(&rel, &x, &y), &z);
        let right = quantum_multiply(&rel, &x, &quantum_multiply(&rel, &y, &z));
        prop_assert_eq!(left, right);
        prop_assert!(x.poly().degree_in(0) < rel.rank() as u32 || x.poly().is_zero());
    }
}
