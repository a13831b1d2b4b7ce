//! Frozen reference values: hand computations and published closed laws.

use dfisher::asymptotics::{
    kravchuk_max_degree, kravchuk_p_to_zero, meixner_gamma_to_infinity, meixner_gamma_to_zero,
    meixner_large_n, meixner_mu_to_one, meixner_mu_to_zero,
};
use dfisher::families::FamilySpec;
use dfisher::fisher::{
    closed_form, fisher_direct, fisher_expansion, fisher_report, fisher_theorem, hahn_factors,
    rakhmanov_density, Method, TruncationPolicy,
};
use dfisher::numerics::{
    accelerated_pfq_at_minus_one, binomial, pochhammer, terminating_pfq, Backend, PfqSpec, Scalar,
};
use dfisher::Error;

fn q(s: &str) -> Scalar {
    s.parse().unwrap()
}

fn charlier(mu: &str) -> FamilySpec {
    FamilySpec::charlier(q(mu)).unwrap()
}

fn meixner(gamma: &str, mu: &str) -> FamilySpec {
    FamilySpec::meixner(q(gamma), q(mu)).unwrap()
}

fn kravchuk(p: &str, size: u32) -> FamilySpec {
    FamilySpec::kravchuk(q(p), size).unwrap()
}

fn hahn(alpha: &str, beta: &str, size: u32) -> FamilySpec {
    FamilySpec::hahn(q(alpha), q(beta), size).unwrap()
}

fn policy() -> TruncationPolicy {
    TruncationPolicy::default()
}

fn pfq(num: &[&str], den: &[&str], z: &str) -> PfqSpec {
    PfqSpec::new(
        num.iter().map(|s| q(s)).collect(),
        den.iter().map(|s| q(s)).collect(),
        q(z),
    )
}

#[test]
fn rising_factorials_and_binomials() {
    assert_eq!(pochhammer(&q("3"), 4), q("360"));
    assert_eq!(pochhammer(&q("7/3"), 0), q("1"));
    assert_eq!(pochhammer(&q("-2"), 4), q("0"));
    assert_eq!(binomial(5, 2), q("10"));
    assert_eq!(binomial(9, 0), q("1"));
    assert_eq!(binomial(3, 5), q("0"));
}

#[test]
fn terminating_series() {
    assert_eq!(terminating_pfq(&pfq(&["0", "1"], &["5"], "3/10")).unwrap(), q("1"));
    assert_eq!(terminating_pfq(&pfq(&["-1", "1"], &["3"], "1/2")).unwrap(), q("5/6"));
    assert_eq!(terminating_pfq(&pfq(&["-1", "1"], &["3"], "-1")).unwrap(), q("4/3"));
    assert!(matches!(
        terminating_pfq(&pfq(&["1", "1"], &["2"], "1/2")),
        Err(Error::NotTerminating)
    ));
}

#[test]
fn accelerated_series_at_minus_one() {
    let tol = Scalar::pow10(-40);
    let finite = accelerated_pfq_at_minus_one(&pfq(&["-1", "1"], &["3"], "-1"), &tol).unwrap();
    assert_eq!(finite.value, q("4/3"));
    assert!(finite.converged);

    // 2F1(1, 1; 2; -1) = ln 2
    let log = accelerated_pfq_at_minus_one(&pfq(&["1", "1"], &["2"], "-1"), &tol).unwrap();
    assert!(log.converged);
    let bits = Backend::float_default().bits();
    let ln2 = Scalar::from_float(rug::Float::with_val(bits, rug::float::Constant::Log2));
    assert!(log.value.rel_diff(&ln2) < Scalar::pow10(-35), "{}", log.value);
}

#[test]
fn hahn_c3_series_agrees_with_the_value_it_must_take() {
    // With every other factor of the closed form fixed, the exact Fisher
    // value determines C3. For α = β = 0, n = 2 the series is
    // 2F1(1, 7/2; 5/2; -1) = Σ (1 + 2k/5)(-1)^k, whose Abel sum is 2/5.
    for size in [5, 10, 20] {
        let f = hahn("0", "0", size);
        let parts = hahn_factors(&f, 2).unwrap();
        let exact = fisher_expansion(&f, 2).unwrap();
        let needed = (&exact / &parts.a - &parts.b1 * &parts.b2 * &parts.b3
            - &parts.d1 * &parts.d2 * &parts.d3)
            / (&parts.c1 * &parts.c2 * &parts.gamma_ratio);
        assert!(parts.c3_converged);
        assert!(needed.rel_diff(&q("2/5")) < Scalar::pow10(-30), "N = {size}: {needed}");
        assert!(parts.c3_series.rel_diff(&q("2/5")) < Scalar::pow10(-30));
    }
}

#[test]
fn reduced_weights_and_norms() {
    assert_eq!(charlier("2").reduced_weight(3).unwrap(), q("4/3"));
    assert_eq!(kravchuk("1/2", 3).reduced_weight(1).unwrap(), q("3/8"));
    let uniform = hahn("0", "0", 5);
    for x in 0..5 {
        assert_eq!(uniform.reduced_weight(x).unwrap(), q("1"));
    }
    assert!(uniform.reduced_weight(5).is_err());

    assert_eq!(charlier("2").reduced_norm(3).unwrap().rational, q("48"));
    assert_eq!(kravchuk("1/2", 3).reduced_norm(1).unwrap().value(64), q("3/4"));
    assert_eq!(uniform.reduced_norm(1).unwrap().value(64), q("10"));
}

#[test]
fn weight_ratios() {
    assert_eq!(charlier("2").weight_ratio(4).unwrap(), q("2"));
    assert_eq!(meixner("2", "1/2").weight_ratio(1).unwrap(), q("1"));
}

#[test]
fn polynomial_values_and_differences() {
    for f in [charlier("2"), kravchuk("1/3", 6), hahn("3", "-1/2", 7)] {
        for x in -1..4 {
            assert_eq!(f.eval_poly(0, &Scalar::from(x)).unwrap(), q("1"));
            assert_eq!(f.forward_diff(0, &Scalar::from(x)).unwrap(), q("0"));
        }
    }
    assert_eq!(charlier("2").eval_poly(1, &q("5")).unwrap(), q("3"));
    assert_eq!(hahn("0", "0", 5).eval_poly(1, &q("0")).unwrap(), q("-2"));
    for x in 0..6 {
        assert_eq!(charlier("2").forward_diff(1, &Scalar::from(x)).unwrap(), q("1"));
    }
    // ΔK_2 equals 2 K_1 of the family on one fewer point
    let k = kravchuk("1/2", 3);
    let shifted = kravchuk("1/2", 2);
    assert_eq!(
        k.forward_diff(2, &q("0")).unwrap(),
        q("2") * shifted.eval_poly(1, &q("0")).unwrap()
    );
}

#[test]
fn ladder_targets_and_connection_coefficients() {
    assert_eq!(charlier("2").ladder_target(3).unwrap(), (charlier("2"), q("3")));
    assert_eq!(
        hahn("0", "0", 5).ladder_target(2).unwrap(),
        (hahn("1", "1", 4), q("2"))
    );
    assert!(charlier("2").ladder_target(0).is_err());
    assert_eq!(
        charlier("2").connection_coeffs(3).unwrap(),
        vec![q("0"), q("0"), q("3")]
    );
    assert_eq!(
        meixner("2", "1/2").connection_coeffs(2).unwrap(),
        vec![q("-2"), q("2")]
    );
}

#[test]
fn rakhmanov_densities() {
    let k = kravchuk("1/2", 3);
    let got: Vec<Scalar> = (0..4).map(|x| rakhmanov_density(&k, 0, x).unwrap()).collect();
    assert_eq!(got, vec![q("1/8"), q("3/8"), q("3/8"), q("1/8")]);
    for x in 0..5 {
        assert_eq!(rakhmanov_density(&hahn("0", "0", 5), 0, x).unwrap(), q("1/5"));
    }
    let mass: Scalar = (0..4)
        .map(|x| rakhmanov_density(&k, 2, x).unwrap())
        .fold(Scalar::zero(), |a, b| a + b);
    assert_eq!(mass, q("1"));
}

#[test]
fn fisher_anchor_values() {
    let p = policy();
    assert_eq!(fisher_direct(&charlier("2"), 3, &p).unwrap(), q("3/2"));
    assert_eq!(fisher_direct(&kravchuk("1/2", 3), 2, &p).unwrap(), q("16/3"));
    assert_eq!(fisher_theorem(&charlier("2"), 1, &p).unwrap(), q("1/2"));
    assert_eq!(fisher_theorem(&hahn("0", "0", 5), 1, &p).unwrap(), q("1/2"));
    assert_eq!(fisher_expansion(&charlier("2"), 3).unwrap(), q("3/2"));
    assert_eq!(fisher_expansion(&meixner("2", "1/2"), 1).unwrap(), q("1/4"));
    assert_eq!(fisher_expansion(&kravchuk("1/2", 10), 1).unwrap(), q("2/5"));
    let closed = closed_form(&charlier("2"), 3).unwrap();
    assert_eq!((closed.value, closed.converged), (q("3/2"), true));
    let closed = closed_form(&kravchuk("1/2", 3), 2).unwrap();
    assert_eq!((closed.value, closed.converged), (q("16/3"), true));
    for f in [charlier("5"), meixner("3/2", "1/4"), kravchuk("2/3", 4), hahn("1", "2", 6)] {
        for m in Method::ALL {
            let v = dfisher::fisher::fisher_by(&f, 0, m, &p).unwrap();
            assert!(v.value.is_zero(), "{f}, {m}");
        }
    }
}

#[test]
fn reports_collect_all_methods() {
    let r = fisher_report(&charlier("2"), 3, &policy());
    for m in Method::ALL {
        assert_eq!(r.value(m), Some(&q("3/2")));
    }
    assert_eq!(r.max_discrepancy, Some(q("0")));

    let r = fisher_report(&kravchuk("1/2", 12), 5, &policy());
    let first = r.value(Method::DirectSum).unwrap().clone();
    for m in Method::ALL {
        assert_eq!(r.value(m), Some(&first), "{m}");
    }

    let r = fisher_report(&hahn("0", "0", 20), 1, &policy());
    for m in [Method::DirectSum, Method::TheoremFormula, Method::Expansion] {
        assert_eq!(r.value(m), Some(&q("12/399")));
    }
    assert!(r.hahn_c3_converged.is_some());
}

#[test]
fn meixner_values_approach_their_large_degree_limit() {
    let f = meixner("3/2", "1/4");
    let gap = |n| (fisher_expansion(&f, n).unwrap() - q("3")).abs();
    assert!(gap(40) < gap(10));
    assert!(gap(80) < gap(40));
}

#[test]
fn asymptote_plug_ins() {
    for n in [1, 5, 50] {
        assert_eq!(meixner_large_n(&q("1"), &q("1/4"), n).unwrap(), q("3"));
    }
    assert_eq!(meixner_large_n(&q("3/2"), &q("1/7"), 1).unwrap(), q("6") - q("1/2"));
    let mu = q("3/5");
    assert_eq!(
        meixner_mu_to_one(&q("7/3"), 1, &mu).unwrap(),
        (q("1") - &mu).square() / q("7/3")
    );
    assert_eq!(meixner_mu_to_zero(&q("2"), 1, &q("0.01")).unwrap(), q("50"));
    assert_eq!(kravchuk_max_degree(3, &q("1/2")).unwrap(), q("16/3"));
    let pz = kravchuk_p_to_zero(2, 15, &q("1e-4")).unwrap();
    assert_eq!(pz, q("2") / (q("14") * q("1e-4")));
}

fn strictly_approaches(pairs: &[(Scalar, Scalar)]) -> bool {
    let gaps: Vec<Scalar> = pairs.iter().map(|(e, a)| (e / a - 1).abs()).collect();
    gaps.windows(2).all(|w| w[1] < w[0])
}

#[test]
fn meixner_limits_are_approached() {
    let (gamma, n) = (q("2"), 3);
    let pairs: Vec<_> = ["1e-2", "1e-3", "1e-4"]
        .iter()
        .map(|m| {
            let f = FamilySpec::meixner(gamma.clone(), q(m)).unwrap();
            (fisher_expansion(&f, n).unwrap(), meixner_mu_to_zero(&gamma, n, &q(m)).unwrap())
        })
        .collect();
    assert!(strictly_approaches(&pairs));

    let mu = q("1/4");
    let large: Vec<_> = ["1e2", "1e3"]
        .iter()
        .map(|g| {
            let f = FamilySpec::meixner(q(g), mu.clone()).unwrap();
            (fisher_expansion(&f, n).unwrap(), meixner_gamma_to_infinity(n, &mu, &q(g)).unwrap())
        })
        .collect();
    assert!(strictly_approaches(&large));

    let small: Vec<_> = ["1e-2", "1e-3"]
        .iter()
        .map(|g| {
            let f = FamilySpec::meixner(q(g), mu.clone()).unwrap();
            (fisher_expansion(&f, n).unwrap(), meixner_gamma_to_zero(n, &mu, &q(g)).unwrap())
        })
        .collect();
    assert!(strictly_approaches(&small));
}

#[test]
fn kravchuk_small_p_within_one_percent() {
    let p = q("1e-4");
    let exact = fisher_expansion(&FamilySpec::kravchuk(p.clone(), 15).unwrap(), 2).unwrap();
    let asym = kravchuk_p_to_zero(2, 15, &p).unwrap();
    assert!(exact.rel_diff(&asym) < q("0.01"));
}

#[test]
fn domain_checks() {
    assert!(FamilySpec::charlier(q("0")).is_err());
    assert!(FamilySpec::meixner(q("1"), q("1")).is_err());
    assert!(FamilySpec::kravchuk(q("0"), 4).is_err());
    assert!(FamilySpec::hahn(q("-1"), q("0"), 4).is_err());
    assert!(matches!(
        fisher_expansion(&kravchuk("1/2", 3), 3),
        Err(Error::DegreeOutOfRange { n: 3, max: 2 })
    ));
}
