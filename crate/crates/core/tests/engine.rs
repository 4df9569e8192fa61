use pgnlab::exponents::{
    analyze_periodic, extrema_periodic, profile_periodic, profile_sampled, ratio_extrema_periodic,
    Bound, Ratio, Trend,
};
use pgnlab::families::{
    build_family_a, build_family_a_infinite, build_family_b, default_params_b, FamilyAParams,
};
use pgnlab::rational::{int, rat, ExtendedRational, Rational};
use pgnlab::transference::check_profile;

fn fin(r: Rational) -> ExtendedRational {
    ExtendedRational::Finite(r)
}

fn family_a(n: usize, w: Rational, a: Rational, q0: i64) -> pgnlab::system::PLSystem {
    build_family_a(&FamilyAParams::new(n, fin(w), a, int(q0)).unwrap()).unwrap()
}

#[test]
fn family_a_reference_profile() {
    let sys = family_a(3, int(5), rat(1, 2), 6);
    let e1 = ratio_extrema_periodic(&sys, 1).unwrap();
    assert_eq!((e1.max.clone(), e1.argmax.clone()), (rat(1, 6), int(6)));
    let top = extrema_periodic(&sys, Ratio::Component(4)).unwrap();
    assert_eq!((top.min, top.argmin), (rat(2, 7), int(7)));

    // hand trace: max (P1+P2)/q = 3/7 at 7, min 3/11 at 11; max P4/q = 4/9; min P1/q = 1/11
    let p = profile_periodic(&sys).unwrap();
    assert_eq!(
        p.omega_hat,
        vec![fin(rat(2, 5)), fin(rat(4, 3)), fin(int(5))]
    );
    assert_eq!(p.omega, vec![fin(rat(4, 5)), fin(rat(8, 3)), fin(int(10))]);
    assert_eq!(p.phi_bar(4), &rat(4, 9));
    assert_eq!(p.phi_under(1), &rat(1, 11));
}

#[test]
fn family_a_n2_matches_one_minus_reciprocal() {
    for w in [3, 4, 7, 100] {
        let sys = family_a(2, int(w), int(1), 5);
        let p = profile_periodic(&sys).unwrap();
        assert_eq!(p.omega_hat, vec![fin(int(1) - rat(1, w)), fin(int(w))]);
    }
}

#[test]
fn family_a_closed_forms_on_a_grid() {
    for n in 3..=5usize {
        let ni = n as i64;
        for w in [int(ni) + rat(1, 3), int(ni + 2), int(9)] {
            for a in [rat(1, ni - 1), rat(2, 3), int(1)] {
                if a < rat(1, ni - 1) {
                    continue;
                }
                let sys = family_a(n, w.clone(), a.clone(), 1);
                let p = profile_periodic(&sys).unwrap();
                let c = int(1) + &a * (&w - int(ni));
                assert_eq!(p.omega_hat[n - 1], fin(w.clone()));
                assert_eq!(p.omega_hat[0], fin(&c / &w), "n={n} w={w} a={a}");
            }
        }
    }
}

#[test]
fn family_b_engine_values() {
    let sys = build_family_b(&default_params_b(3).unwrap()).unwrap();
    let analysis = analyze_periodic(&sys).unwrap();
    let p = &analysis.profile;
    assert_eq!(
        p.omega_hat,
        vec![fin(rat(1, 2)), fin(rat(7, 4)), fin(int(7))]
    );
    assert_eq!(p.phi_bar[..3], [rat(1, 8), rat(3, 11), rat(3, 8)]);
    assert!(analysis.non_unique_component_maxima().is_empty());
    for d in 1..=3 {
        assert!(p.phi_bar(d) <= &rat(1, 2));
        assert!(p.phi_under(d) <= p.phi_bar(d));
    }
}

#[test]
fn sampled_equals_periodic_for_dilation_systems() {
    for sys in [
        family_a(3, int(5), rat(1, 2), 6),
        family_a(4, rat(11, 2), rat(2, 3), 1),
        build_family_b(&default_params_b(4).unwrap()).unwrap(),
    ] {
        let c = sys.dilation_factor().unwrap().clone();
        let horizon = sys.division_points()[0].clone() * &c * &c * &c;
        let s = profile_sampled(&sys, &horizon).unwrap();
        assert_eq!(s.periods.len(), 3);
        let periodic = profile_periodic(&sys).unwrap();
        for period in &s.periods {
            assert_eq!(period.profile(sys.n()), periodic);
        }
        assert_eq!(s.trend(Ratio::PartialSum(1), Bound::Max), Trend::Constant);
    }
}

#[test]
fn infinite_variant_per_period_sequences() {
    let (n, a) = (3usize, rat(1, 2));
    let fam = build_family_a_infinite(n, &a, &int(1), 8).unwrap();
    assert!(fam.system.validate().valid);
    let end = fam.system.domain_end().unwrap().clone();
    let s = profile_sampled(&fam.system, &end).unwrap();
    assert_eq!(s.periods.len(), 8);
    let first = s.sequence(Ratio::PartialSum(1), Bound::Max);
    let top = s.sequence(Ratio::Component(n + 1), Bound::Min);
    for m in 0..8i64 {
        assert_eq!(first[m as usize], rat(1, m + n as i64 + 2));
        let am = int(1) + &a * int(m + 1);
        let expected = &am / (int(n as i64 + 1) + (int(1) + &a) * int(m + 1));
        assert_eq!(top[m as usize], expected);
    }
    assert_eq!(s.trend(Ratio::PartialSum(1), Bound::Max), Trend::Decreasing);
    assert_eq!(
        s.trend(Ratio::Component(n + 1), Bound::Min),
        Trend::Increasing
    );
    let limit = s.with_limits(&fam.limits);
    assert!(limit.omega_hat_top().is_infinite());
    // the observed min of P_1/q is positive, but the limit of the max caps it
    assert!(limit.omega[n - 1].is_infinite());
    assert_eq!(limit.phi_under(1), &int(0));
    assert!(check_profile(&limit).iter().all(|o| o.holds));
    assert_eq!(limit.omega_hat_bottom(), &fin(a.clone()));

    let fam1 = build_family_a_infinite(3, &int(1), &int(1), 8).unwrap();
    let end = fam1.system.domain_end().unwrap().clone();
    let s1 = profile_sampled(&fam1.system, &end).unwrap();
    assert_eq!(
        s1.with_limits(&fam1.limits).omega_hat_bottom(),
        &fin(int(1))
    );
}

#[test]
fn one_period_plot_markers() {
    use pgnlab::export::{plot_periods, plot_svg};
    use pgnlab::system::DivisionPointKind;

    let a = build_family_a(
        &FamilyAParams::new(3, ExtendedRational::Finite(int(5)), rat(1, 2), int(6)).unwrap(),
    )
    .unwrap();
    let d = plot_periods(&a, 1).unwrap();
    assert_eq!(d.count(DivisionPointKind::Switch), 2);
    let svg = plot_svg(&d);
    assert_eq!(svg.matches("class=\"component\"").count(), 4);
    assert_eq!(svg.matches("class=\"switch\"").count(), 2);

    let b = build_family_b(&default_params_b(3).unwrap()).unwrap();
    let d = plot_periods(&b, 1).unwrap();
    assert_eq!(d.markers().count(), 7);
    assert_eq!(d.count(DivisionPointKind::Switch), 1);
    assert_eq!(d.count(DivisionPointKind::Ordinary), 6);
}
