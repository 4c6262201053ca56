mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use isogroup::catalog;
use isogroup::fourier::{inner_product, inverse_transform, transform, PeriodicFunction};
use isogroup::group::NormalForm;
use isogroup::quotient::QuotientGroup;
use isogroup::rational::{RatVec, Rational};
use isogroup::repr::irreps;
use isogroup::splitting::a_coeff;

fn entry_strategy() -> impl Strategy<Value = usize> {
    0..catalog::NAMES.len()
}

fn nf_strategy(d2: usize, f: usize, p: usize) -> impl Strategy<Value = NormalForm> {
    (prop::collection::vec(-5i64..=5, d2), 0..f, 0..p).prop_map(|(n, f, p)| NormalForm { n, f, p })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(idx in entry_strategy(), seeds in prop::array::uniform3(any::<u64>())) {
        let spec = catalog::get(catalog::NAMES[idx]).unwrap().spec;
        let pick = |s: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            use rand::Rng;
            let nf = NormalForm {
                n: (0..spec.d2).map(|_| rng.gen_range(-4..=4)).collect(),
                f: rng.gen_range(0..spec.f_order()),
                p: rng.gen_range(0..spec.rot_order()),
            };
            spec.element(&nf)
        };
        let (a, b, c) = (pick(seeds[0]), pick(seeds[1]), pick(seeds[2]));
        let l = a.compose(&b).unwrap().compose(&c).unwrap();
        let r = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(&l.p, &r.p);
        prop_assert_eq!(&l.tau, &r.tau);
        prop_assert!(l.q.max_diff(&r.q) <= 1e-9);
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity(1e-9));
    }

    #[test]
    fn normal_form_round_trips(idx in entry_strategy(), raw in any::<u64>()) {
        let spec = catalog::get(catalog::NAMES[idx]).unwrap().spec;
        let mut rng = ChaCha8Rng::seed_from_u64(raw);
        use rand::Rng;
        let nf = NormalForm {
            n: (0..spec.d2).map(|_| rng.gen_range(-7..=7)).collect(),
            f: rng.gen_range(0..spec.f_order()),
            p: rng.gen_range(0..spec.rot_order()),
        };
        prop_assert_eq!(spec.normal_form(&spec.element(&nf)).unwrap(), nf);
    }

    #[test]
    fn power_section_matches_repeated_products(n in prop::collection::vec(-4i64..=4, 2)) {
        for name in ["pg", "twistE8", "p3"] {
            let spec = catalog::get(name).unwrap().spec;
            prop_assert!(spec.power_section(&n).approx_equal(&common::section_naive(&spec, &n), 1e-9));
        }
    }

    #[test]
    fn quotient_product_matches_isometry_product(
        a in nf_strategy(2, 1, 2),
        b in nf_strategy(2, 1, 2),
        modulus in 1u64..=4,
    ) {
        let spec = catalog::pg();
        let q = QuotientGroup::build(&spec, modulus).unwrap();
        let prod = spec.normal_form(&spec.element(&a).compose(&spec.element(&b)).unwrap()).unwrap();
        prop_assert_eq!(q.mul(q.index_of(&a), q.index_of(&b)), q.index_of(&prod));
    }

    #[test]
    fn rationals_stay_reduced(p in -1000i64..1000, q in 1i64..1000, r in -1000i64..1000, s in 1i64..1000) {
        let x = Rational::new(p, q);
        let y = Rational::new(r, s);
        let z = x.clone() + y.clone();
        prop_assert!(num_integer::Integer::gcd(z.numer(), z.denom()) == 1.into());
        prop_assert_eq!(z - y, x.clone());
        let text = x.to_string();
        prop_assert_eq!(text.parse::<Rational>().unwrap(), x);
    }

    #[test]
    fn a_coeff_matches_scan(n in 1i64..60, r in 1i64..48) {
        prop_assume!(num_integer::Integer::gcd(&n, &r) == 1);
        let a = a_coeff(n, r).unwrap();
        // a ≡ r⁻¹ (mod n) on the representative in (−n, 0], with 0 when n = 1.
        prop_assert!(a <= 0 && a > -n);
        prop_assert_eq!((a * r).rem_euclid(n), 1 % n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn plancherel_and_round_trip(idx in entry_strategy(), seed in any::<u64>(), rows in 1usize..=2, cols in 1usize..=2) {
        let spec = catalog::get(catalog::NAMES[idx]).unwrap().spec;
        let m0 = spec.find_m0().unwrap().m0;
        let q = QuotientGroup::build(&spec, m0).unwrap();
        let irr = irreps(&q.group, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = PeriodicFunction::random(&spec, m0, (rows, cols), &mut rng);
        let v = PeriodicFunction::random(&spec, m0, (rows, cols), &mut rng);
        let (tu, tv) = (transform(&u, &q, &irr).unwrap(), transform(&v, &q, &irr).unwrap());
        prop_assert!((inner_product(&u, &v).unwrap() - tu.inner(&tv)).norm() <= 1e-8);
        prop_assert!(inverse_transform(&tu, &q, &irr).unwrap().max_diff(&u) <= 1e-8);
    }

    #[test]
    fn lifted_functions_keep_their_norm(seed in any::<u64>()) {
        let spec = catalog::pg();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = PeriodicFunction::random(&spec, 2, (1, 1), &mut rng);
        let lifted = u.lift(4).unwrap();
        let a = inner_product(&u, &u).unwrap();
        let b = inner_product(&lifted, &lifted).unwrap();
        prop_assert!((a - b).norm() <= 1e-10);
        prop_assert!((a - Complex64::new(a.re, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn dual_vectors_shift_invariantly(num in prop::collection::vec(-20i64..20, 2), den in 1i64..10) {
        let spec = catalog::pg();
        let k = RatVec::from_fraction(&num, den);
        let shifted = k.add(&RatVec::from_ints(&[3, -2]));
        prop_assert_eq!(
            isogroup::dual::null_set_member(&spec, &k, 1),
            isogroup::dual::null_set_member(&spec, &shifted, 1)
        );
    }
}
