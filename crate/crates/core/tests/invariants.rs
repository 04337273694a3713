use proptest::prelude::*;
use twistor_cm_core::exactalg::{
    count_real_roots, eval_poly, field_generated_by, rat, ratio, real_root_count, signature, Matrix, NumberField, Poly,
    Rational,
};
use twistor_cm_core::hodge::CmField;

fn fields() -> Vec<NumberField> {
    let mut v: Vec<NumberField> =
        ["gaussian", "eisenstein", "zeta5", "zeta8", "zeta12"].iter().map(|n| CmField::preset(n).unwrap().field().clone()).collect();
    v.push(NumberField::new(&Poly::from_i64s(&[-2, 0, 0, 1])).unwrap());
    v
}

fn element(k: &NumberField, cs: &[i64]) -> twistor_cm_core::exactalg::FieldElement {
    let n = k.degree();
    k.element((0..n).map(|i| ratio(cs[i], cs[n + i].abs() + 1)).collect())
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..7, 16)
}

proptest! {
    #[test]
    fn field_inverse(fi in 0usize..6, cs in coeffs()) {
        let k = &fields()[fi];
        let e = element(k, &cs);
        prop_assume!(!e.is_zero());
        let inv = e.inverse().unwrap();
        prop_assert!((&e * &inv).is_one());
        prop_assert_eq!(inv.inverse().unwrap(), e);
    }

    #[test]
    fn minpoly_annihilates(fi in 0usize..6, cs in coeffs()) {
        let k = &fields()[fi];
        let e = element(k, &cs);
        let f = e.minimal_polynomial();
        prop_assert!(eval_poly(&f, &e).is_zero());
        prop_assert_eq!(k.degree() % f.deg(), 0);
    }

    #[test]
    fn generated_subfield_is_idempotent(fi in 0usize..6, cs in coeffs()) {
        let k = &fields()[fi];
        let e = element(k, &cs);
        let f = field_generated_by(k, &[e.clone()]);
        prop_assert!(f.contains(&e));
        prop_assert_eq!(f.degree(), e.minimal_polynomial().deg());
        let again = field_generated_by(k, &f.basis());
        prop_assert_eq!(again, f);
    }

    // Oracle: the real roots are known by construction.
    #[test]
    fn sturm_count_of_constructed_polynomials(
        roots in prop::collection::btree_set((-20i64..21, 1i64..5), 0..5),
        quads in prop::collection::vec((-4i64..5, 1i64..6), 0..3),
    ) {
        let mut f = Poly::one();
        let mut distinct = std::collections::BTreeSet::new();
        for &(p, q) in &roots {
            let r = ratio(p, q);
            distinct.insert(r.clone());
            f = &f * &Poly::new(vec![-r, rat(1)]);
        }
        // (x - b)^2 + c with c > 0 has no real root
        for &(b, c) in &quads {
            let b = rat(b);
            f = &f * &Poly::new(vec![&b * &b + rat(c), -(&b + &b), rat(1)]);
        }
        prop_assume!(!f.is_zero());
        let cert = count_real_roots(&f);
        prop_assert_eq!(cert.count, distinct.len());
        prop_assert_eq!(real_root_count(&f), distinct.len());
        for r in &distinct {
            prop_assert_eq!(cert.isolating_intervals.iter().filter(|iv| iv.contains(r)).count(), 1);
        }
    }

    #[test]
    fn signature_is_a_congruence_invariant(
        entries in prop::collection::vec(-5i64..6, 10),
        ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..4), 1..12),
    ) {
        let mut g = Matrix::zeros(4, 4);
        let mut k = 0;
        for i in 0..4 {
            for j in i..4 {
                g[(i, j)] = rat(entries[k]);
                g[(j, i)] = rat(entries[k]);
                k += 1;
            }
        }
        let mut p = Matrix::identity(4);
        for &(i, j, c) in &ops {
            if i != j {
                let mut e = Matrix::identity(4);
                e[(i, j)] = rat(c);
                p = &p * &e;
            } else if c != 0 {
                let mut e = Matrix::identity(4);
                e[(i, i)] = rat(c);
                p = &p * &e;
            }
        }
        let h = &(&p.transpose() * &g) * &p;
        prop_assert_eq!(signature(&h).unwrap(), signature(&g).unwrap());
    }
}

#[test]
fn signature_of_diagonal_forms() {
    let d: Vec<Rational> = [3, -1, 0, 2, -5].iter().map(|&x| rat(x)).collect();
    let s = signature(&Matrix::diagonal(&d)).unwrap();
    assert_eq!((s.positive, s.negative, s.null), (2, 2, 1));
}
