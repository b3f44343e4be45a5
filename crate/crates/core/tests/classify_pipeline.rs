use rbcm::automorphism::{self, plus_group, Conjugation};
use rbcm::cayley::{are_isomorphic, MapType};
use rbcm::classify::*;
use rbcm::metacyclic::Delta;

#[test]
fn full_pipeline_on_7_3_4() {
    let (rep, realized) = classify(7, 3, 4, VerifyLevel::Full).unwrap();
    assert!(rep.ok(), "{:?}", rep.failures);
    assert_eq!(realized.len(), 4);
    assert_eq!(rep.pairwise_distinct, Some(true));
    assert_eq!(rep.quotient_profiles, Some(true));
    for r in &realized {
        let p = quotient_cross_check(r).unwrap();
        assert_eq!(p.kind, MapType::I);
        assert!(p.psi_plus_squared_is_identity);
        assert_eq!(r.map.valency() as u64 % p.valency, 0);
    }
}

#[test]
fn shifted_z_is_isomorphic_to_its_representative() {
    let delta = Delta::new(7, 3, 4).unwrap();
    let tau = shift_conjugator(&delta);
    assert!(automorphism::lifts_to_whole(&delta, &tau));
    assert!(automorphism::is_valid(&plus_group(&delta), &tau));
    for z1 in 0..4u64 {
        let (rep, _) = solution_for(&delta, z1).unwrap();
        let (shifted, _) = solution_for(&delta, z1 + 4).unwrap();
        assert_eq!(shifted.z, (rep.z + 32) % 64);
        let conj = automorphism::conjugate_normal_form(&delta, &tau, rep.z, rep.w).unwrap();
        assert_eq!(conj, Conjugation::NormalForm { z: shifted.z, w: rep.w });
        let a = realize(&rep, VerifyLevel::Fast).unwrap();
        let b = realize(&shifted, VerifyLevel::Fast).unwrap();
        assert!(are_isomorphic(&a.map, &b.map).unwrap().is_some());
    }
}

#[test]
fn shift_conjugator_on_all_small_descriptors() {
    for a in 5..=9u32 {
        for b in 1..a {
            for c in 1..a {
                let Ok(delta) = Delta::new(a, b, c) else { continue };
                if c < b {
                    continue;
                }
                let tau = shift_conjugator(&delta);
                assert!(automorphism::lifts_to_whole(&delta, &tau));
                let half = 1u64 << (a - 2);
                for z1 in 0..1u64 << (a - c - 1) {
                    let (rep, _) = solution_for(&delta, z1).unwrap();
                    let conj = automorphism::conjugate_normal_form(&delta, &tau, rep.z, rep.w).unwrap();
                    assert_eq!(conj, Conjugation::NormalForm { z: (rep.z + half) % (2 * half), w: rep.w }, "D({a},{b},{c}) z1={z1}");
                }
            }
        }
    }
}

#[test]
fn solution_counts_up_to_a_12() {
    for a in 5..=12u32 {
        for b in 1..a {
            for c in 2..a {
                if Delta::new(a, b, c).is_err() || c <= b {
                    continue;
                }
                let rows = solve_residues(a, b, c).unwrap();
                assert_eq!(rows.len() as u64, 1u64 << (a - c - 1), "({a},{b},{c})");
                assert!(rows.iter().all(|r| r.4.all()), "({a},{b},{c})");
                assert!(rows.iter().all(|r| r.1 > 0 && r.1 < 1u64 << (a - c)));
            }
        }
    }
}
