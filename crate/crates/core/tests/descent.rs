use kac_jordan::algebra::{direct_product, SimplicityOptions};
use kac_jordan::catalog;
use kac_jordan::descent::{
    forms_equivalent, k10_twisted_basis, product_twist_witness, rigid_involutions, rigidity_witness,
    separate_forms, split_check, twist, twist_k10, DescentDatum, DescentError, QuadraticEtale,
};
use kac_jordan::morphisms::{factor_swap, k10_automorphism, tau_auto, Sl2};
use kac_jordan::scalars::ScalarDomain;
use proptest::prelude::*;

#[test]
fn k10_twist_even_basis_and_odd_signs() {
    let q = ScalarDomain::rational();
    let report = k10_twisted_basis(&q, &q.from_i64(-1)).unwrap();
    assert!(report.even_matches);
    assert_eq!(report.even.len(), 6);
    assert_eq!(report.odd.len(), 4);
    // (a⊗x + x⊗a)⊗w is not fixed; (x⊗a - a⊗x)⊗w is
    assert_eq!(report.odd_not_fixed.len(), 2);
    assert!(report.odd_not_fixed.iter().all(|s| s.starts_with("w*(")));
    assert!(report.odd_corrected_fixed);
    assert!(report.form.algebra.is_jordan_super());
    assert!(report.form.algebra.unity().is_some());
}

#[test]
fn twisted_k10_splits_over_the_extension() {
    let q = ScalarDomain::rational();
    for d in [-1, 2, 3, 5] {
        let form = twist_k10(&q, &q.from_i64(d)).unwrap();
        assert!(split_check(&form).is_ok(), "d = {d}");
    }
    let f5 = ScalarDomain::prime(5).unwrap();
    let form = twist_k10(&f5, &f5.from_i64(2)).unwrap();
    assert!(form.algebra.is_simple(&SimplicityOptions::default()).unwrap().is_simple());
    split_check(&form).unwrap();
}

#[test]
fn split_extension_gives_a_base_witness() {
    let q = ScalarDomain::rational();
    let form = twist_k10(&q, &q.from_i64(4)).unwrap();
    let w = split_check(&form).unwrap();
    assert_eq!(w.map.matrix().rows().len(), 10);
    assert_eq!(w.source.domain(), &q);
    assert!(matches!(
        k10_twisted_basis(&q, &q.from_i64(9)),
        Err(DescentError::Split(_))
    ));
}

#[test]
fn equivalent_extensions_give_isomorphic_twists() {
    let q = ScalarDomain::rational();
    let a = catalog::kac_k10(&q).unwrap();
    let tau = tau_auto(&q);
    let e = forms_equivalent(&a, &tau, &q.from_i64(-1), &q.from_i64(-4)).unwrap();
    assert!(e.equivalent());
    assert_eq!(e.ratio_root.unwrap().to_string(), "1/2");
    let same = forms_equivalent(&a, &tau, &q.from_i64(2), &q.from_i64(2)).unwrap();
    assert!(same.equivalent());
    let apart = forms_equivalent(&a, &tau, &q.from_i64(-1), &q.from_i64(2)).unwrap();
    assert!(!apart.equivalent());
    assert!(forms_equivalent(&a, &tau, &q.from_i64(1), &q.from_i64(2)).is_err());

    let f5 = ScalarDomain::prime(5).unwrap();
    let b = catalog::kac_k10(&f5).unwrap();
    let e = forms_equivalent(&b, &tau_auto(&f5), &f5.from_i64(2), &f5.from_i64(3)).unwrap();
    assert!(e.equivalent());
}

#[test]
fn separation_detects_k9_and_is_inconclusive_on_twins() {
    let f3 = ScalarDomain::prime(3).unwrap();
    let opts = SimplicityOptions::default();
    let k10 = catalog::kac_k10(&f3).unwrap();
    let k9 = catalog::kac_k9(&f3).unwrap();
    let report = separate_forms(&k10, &k9, &opts, 1_000_000).unwrap();
    assert!(report.separated());
    assert!(report.differing().contains(&"dimension"));

    let f5 = ScalarDomain::prime(5).unwrap();
    let twisted = twist_k10(&f5, &f5.from_i64(2)).unwrap().algebra;
    let plain = catalog::kac_k10(&f5).unwrap();
    let report = separate_forms(&plain, &twisted, &opts, 1_000_000).unwrap();
    assert_eq!(report.differing(), vec!["even idempotents"]);
    let row = &report.invariants[2];
    assert_eq!(row.left, brute_force_even_idempotents(&plain).to_string());
    assert_eq!(row.right, brute_force_even_idempotents(&twisted).to_string());

    // 3 = 2·4 and 4 is a square mod 5: the twists agree and nothing separates them
    let other = twist_k10(&f5, &f5.from_i64(3)).unwrap().algebra;
    let report = separate_forms(&twisted, &other, &opts, 1_000_000).unwrap();
    assert!(!report.separated(), "{report:?}");
}

fn brute_force_even_idempotents(a: &kac_jordan::algebra::SuperAlgebra) -> usize {
    let d = a.domain().clone();
    let even = a.even_indices();
    let elements = d.elements().unwrap();
    let mut count = 0;
    let mut digits = vec![0usize; even.len()];
    loop {
        let mut x = vec![d.zero(); a.dim()];
        for (slot, &i) in even.iter().enumerate() {
            x[i] = elements[digits[slot]].clone();
        }
        if a.mul(&x, &x) == x {
            count += 1;
        }
        let mut k = 0;
        while k < digits.len() {
            digits[k] += 1;
            if digits[k] < elements.len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
        if k == digits.len() {
            return count;
        }
    }
}

#[test]
fn twists_of_k3_and_jw_are_trivial() {
    for base in [ScalarDomain::rational(), ScalarDomain::prime(7).unwrap()] {
        for d in [-1, 3] {
            let etale = QuadraticEtale::new(&base, base.from_i64(d)).unwrap();
            if etale.is_split() {
                continue;
            }
            for algebra in [catalog::kaplansky_k3(&base).unwrap(), catalog::superform_jw(&base).unwrap()] {
                for t in rigid_involutions(&base) {
                    let form = twist(&DescentDatum::new(&algebra, &t, &etale).unwrap()).unwrap();
                    rigidity_witness(&form).unwrap();
                }
            }
        }
    }
}

#[test]
fn swapped_products_twist_to_restriction_of_scalars() {
    let q = ScalarDomain::rational();
    for factor in [catalog::kaplansky_k3(&q).unwrap(), catalog::superform_jw(&q).unwrap()] {
        let product = direct_product(&factor, &factor).unwrap();
        let swap = factor_swap(&q);
        for d in [-1, 2] {
            let etale = QuadraticEtale::new(&q, q.from_i64(d)).unwrap();
            let form = twist(&DescentDatum::new(&product, &swap, &etale).unwrap()).unwrap();
            let w = product_twist_witness(&form, &factor).unwrap();
            assert_eq!(w.source.dim(), 6);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Twisting K10 by a conjugate `Φ(f, f⁻¹)τ` of `τ` round-trips over `K`.
    #[test]
    fn twists_by_conjugate_involutions_split(seed in 0u64..1000, d_index in 0usize..4) {
        use rand::SeedableRng;
        let q = ScalarDomain::rational();
        let d = [-1, 2, 3, 5][d_index];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = Sl2::random(&q, &mut rng);
        let t = k10_automorphism(&f, &f.inverse(), true);
        let a = catalog::kac_k10(&q).unwrap();
        let etale = QuadraticEtale::new(&q, q.from_i64(d)).unwrap();
        let form = twist(&DescentDatum::new(&a, &t, &etale).unwrap()).unwrap();
        prop_assert_eq!(form.algebra.dim(), 10);
        prop_assert!(form.algebra.is_jordan_super());
        prop_assert!(split_check(&form).is_ok());
    }
}
