use rbcm::bruteforce::*;
use rbcm::cayley::{check_skew, is_regular_exhaustive, verify_with_pi};
use rbcm::metacyclic::{Group, GroupDescriptor};

fn group(s: &str) -> Group {
    s.parse::<GroupDescriptor>().unwrap().group()
}

#[test]
fn structured_matches_naive() {
    for name in ["Z4", "Z8", "Z2xZ4", "L(8,2,3)", "Z5", "Z6", "L(4,2,3)", "Z16", "Z4xZ4"] {
        let g = group(name);
        let fast = enumerate_rbcm(&g, SearchBudget::default()).unwrap();
        let naive = enumerate_rbcm_naive(&g, SearchBudget::default()).unwrap();
        assert!(same_classes(&fast, &naive), "{name}: {} vs {}", fast.len(), naive.len());
    }
}

#[test]
fn every_found_map_rechecks_from_definitions() {
    for name in ["Z8", "L(8,2,3)", "Z2xZ8", "L(16,2,7)"] {
        let g = group(name);
        for f in enumerate_rbcm(&g, SearchBudget::default()).unwrap() {
            verify_with_pi(&g, &f.skew).unwrap();
            assert_eq!(check_skew(&g, &f.skew.phi).unwrap(), f.skew);
            if g.order() <= 32 {
                assert!(is_regular_exhaustive(&f.map));
            }
        }
    }
}

#[test]
#[ignore = "order-32 naive search takes minutes"]
fn structured_matches_naive_order_32() {
    for name in ["Z32", "Z2xZ16", "L(16,2,7)", "L(16,2,9)", "L(8,4,3)", "L(8,4,5)"] {
        let g = group(name);
        let fast = enumerate_rbcm(&g, SearchBudget::default()).unwrap();
        let naive = enumerate_rbcm_naive(&g, SearchBudget::default()).unwrap();
        assert!(same_classes(&fast, &naive), "{name}: {} vs {}", fast.len(), naive.len());
    }
}

#[test]
fn automorphism_enumeration_matches_parametrization() {
    assert!(rbcm::automorphism::enumerate_params(&group("Z8")).is_err());
    for name in ["Z2xZ4", "L(16,4,5)", "L(32,8,5)", "L(64,8,17)"] {
        let g = group(name);
        let brute = enumerate_automorphisms(&g).unwrap();
        let params = rbcm::automorphism::enumerate_params(&g).unwrap();
        assert_eq!(brute.len(), params.len(), "{name}");
    }
}

#[test]
fn guided_search_replays_engine_solutions() {
    use rbcm::automorphism::normal_form;
    use rbcm::classify::{solve, VerifyLevel, realize};
    use rbcm::metacyclic::{Delta, Element};
    let delta = Delta::new(7, 3, 4).unwrap();
    for sol in solve(7, 3, 4).unwrap() {
        let r = realize(&sol, VerifyLevel::Fast).unwrap();
        let eta1 = Element::new(2 * sol.u1 % 128, sol.v1);
        let omega = guided_prune(&delta, &normal_form(sol.z, sol.w), eta1, Element::new(sol.u_tilde, 1)).unwrap();
        assert_eq!(omega, r.map.omega());
    }
}

#[test]
fn guided_search_is_empty_when_c_below_b() {
    use rbcm::metacyclic::Delta;
    let delta = Delta::new(5, 3, 2).unwrap();
    let res = guided_search_delta(&delta, SearchBudget::default(), true).unwrap();
    assert!(res.exhaustive);
    assert!(res.maps.is_empty(), "{} maps", res.maps.len());
}
