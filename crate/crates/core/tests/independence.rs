use pgnlab::families::default_params_b;
use pgnlab::independence::{jacobian_rank, ExponentMap, ParamPoint};
use pgnlab::rational::rat;

#[test]
fn full_rank_at_defaults() {
    for (n, h) in [(3usize, rat(1, 1024)), (4, rat(1, 4096)), (5, rat(1, 4096))] {
        let p = ParamPoint::from_params(&default_params_b(n).unwrap());
        for map in [ExponentMap::W, ExponentMap::F] {
            let cert = jacobian_rank(map, &p, &h).unwrap();
            assert_eq!(cert.rank, n, "{map:?} n={n}: {cert:?}");
            assert_eq!(cert, jacobian_rank(map, &p, &h).unwrap());
        }
    }
}

#[test]
fn top_exponent_depends_on_a2_only() {
    let p = ParamPoint::from_params(&default_params_b(3).unwrap());
    let cert = jacobian_rank(ExponentMap::W, &p, &rat(1, 1024)).unwrap();
    // d(1/A_2 - 1)/dC = 0 and d/dA_3 = 0
    let top = &cert.jacobian[2];
    assert_eq!(top[0], rat(0, 1));
    assert_eq!(top[2], rat(0, 1));
    assert!(top[1] < rat(0, 1));
}
