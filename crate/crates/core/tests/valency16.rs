// A regular t-balanced map on D(7,3,4) of valency 16. The classifier only
// produces valency 32 on this group, so this pins a map outside its output.

use rbcm::cayley::*;
use rbcm::classify::{classify, VerifyLevel};
use rbcm::metacyclic::{Element, GroupDescriptor, QuotientSpec};

const OMEGA: [(u64, u64); 16] = [
    (1, 0), (15, 1), (33, 1), (31, 2), (65, 2), (47, 3), (97, 3), (63, 4),
    (1, 4), (79, 5), (33, 5), (95, 6), (65, 6), (111, 7), (97, 7), (127, 0),
];

fn stray() -> CayleyMap {
    let desc: GroupDescriptor = "D(7,3,4)".parse().unwrap();
    CayleyMap::new(desc, OMEGA.iter().map(|&(x, y)| Element::new(x, y)).collect()).unwrap()
}

#[test]
fn regular_by_both_routes() {
    let m = stray();
    let g = m.group();
    assert!(g.generates(m.omega()));
    let skew = regular_by_propagation(&m).expect("propagation");
    verify_with_pi(g, &skew).unwrap();
    assert_eq!(map_automorphism_count(&m), g.order() as usize * 16);
}

#[test]
fn balanced_with_t_15() {
    let m = stray();
    let g = m.group();
    let d = m.valency() as i64;
    // inverse of w_{i+1} sits t steps after the inverse of w_i; position is 0-based
    let direct: Vec<i64> = (1..=d)
        .filter(|&t| {
            (0..d).all(|i| {
                let j = m.position(g.inv(m.omega_at(i))).unwrap() as i64 + 1;
                g.inv(m.omega_at(i + 1)) == m.omega_at(j + t)
            })
        })
        .collect();
    assert_eq!(direct, vec![15]);
    let bal = balance_data(&m).unwrap();
    assert_eq!((bal.t, bal.d), (15, 16));
}

#[test]
fn quotient_is_an_abelian_rbcm() {
    let m = stray();
    let skew = is_regular(&m).unwrap();
    let q = quotient_map(&m, &skew, QuotientSpec::alpha(16)).unwrap();
    assert_eq!(q.map.valency(), 16);
    abelian_profile_check(&q.map, &q.skew).unwrap();
}

#[test]
fn absent_from_classifier_output() {
    let (report, maps) = classify(7, 3, 4, VerifyLevel::Fast).unwrap();
    assert!(report.ok());
    assert!(maps.iter().all(|r| r.map.valency() == 32));
    let m = stray();
    for r in &maps {
        assert!(are_isomorphic(&m, &r.map).unwrap().is_none());
    }
}
