use pgnlab::exponents::profile_periodic;
use pgnlab::families::{build_family_a, build_family_b, default_params_b, FamilyAParams};
use pgnlab::rational::{int, rat, ExtendedRational, Rational};
use pgnlab::transference::{
    check_profile, german_interval, pente_check, pente_verify, CheckOutcome, PenteSample,
};

fn fin(r: Rational) -> ExtendedRational {
    ExtendedRational::Finite(r)
}

fn outcomes_a(n: usize, w: Rational, a: Rational) -> Vec<CheckOutcome> {
    let sys = build_family_a(&FamilyAParams::new(n, fin(w), a, int(1)).unwrap()).unwrap();
    check_profile(&profile_periodic(&sys).unwrap())
}

fn named<'a>(outcomes: &'a [CheckOutcome], name: &str) -> &'a CheckOutcome {
    outcomes.iter().find(|o| o.name == name).unwrap()
}

#[test]
fn german_endpoints_are_attained() {
    let low = outcomes_a(3, int(5), rat(1, 2));
    assert!(low.iter().all(|o| o.holds), "{low:?}");
    let g = named(&low, "german lower");
    assert!(g.is_binding());
    assert_eq!(g.lhs, fin(rat(2, 5)));

    let high = outcomes_a(3, int(5), int(1));
    let g = named(&high, "german upper");
    assert!(g.is_binding());
    assert_eq!(g.rhs, fin(rat(3, 5)));

    let mid = outcomes_a(3, int(5), rat(3, 4));
    for side in ["german lower", "german upper"] {
        let o = named(&mid, side);
        assert!(o.holds && !o.is_binding());
    }
}

#[test]
fn jarnik_equality_in_dimension_two() {
    let o = outcomes_a(2, int(4), int(1));
    let eq = o
        .iter()
        .find(|o| o.name.starts_with("jarnik equality"))
        .unwrap();
    assert!(eq.holds);
    assert_eq!(eq.slack, Some(fin(Rational::from_integer(0.into()))));
}

#[test]
fn family_b_profile_is_in_the_german_interval() {
    let sys = build_family_b(&default_params_b(3).unwrap()).unwrap();
    let outcomes = check_profile(&profile_periodic(&sys).unwrap());
    assert!(outcomes.iter().all(|o| o.holds), "{outcomes:?}");
    assert_eq!(
        german_interval(3, &fin(int(7))).unwrap(),
        (rat(3, 7), rat(5, 7))
    );
}

#[test]
fn pente_binding_instance() {
    let sys =
        build_family_a(&FamilyAParams::new(3, fin(int(5)), rat(1, 2), int(6)).unwrap()).unwrap();
    // the block leaving q = 6 is the top index of the pair P_1 = P_2
    assert_eq!(sys.block_right_of(&int(6)).unwrap().lo(), 2);
    let s = PenteSample {
        k: 2,
        m: 4,
        p0: int(6),
        p: int(9),
    };
    let o = pente_check(&sys, &s).unwrap();
    assert!(o.is_binding(), "{o:?}");
    assert_eq!(o.lhs, fin(int(4)));
}

#[test]
fn pente_holds_on_family_b() {
    let sys = build_family_b(&default_params_b(3).unwrap()).unwrap();
    let outcomes = pente_verify(&sys, 200, 11).unwrap();
    assert!(outcomes.iter().all(|o| o.holds));
}
