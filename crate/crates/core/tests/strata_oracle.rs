use std::collections::BTreeSet;

use mukai_core::arith::{ratio, to_rat};
use mukai_core::strata::{check_stratum, codim_audit, strata_enumerate, wall_enumerate, Wall};
use mukai_core::{int, MukaiVector, NsClass, Rational, SurfaceModel};

fn slope(s: &SurfaceModel, v: &MukaiVector, m: &Rational) -> Rational {
    let (x, y) = v.c1.sigma_fiber().unwrap();
    let d = to_rat(&(y - x * 2)) + to_rat(x) * m;
    let _ = s;
    d / to_rat(&v.rank)
}

fn nonempty(s: &SurfaceModel, v: &MukaiVector) -> bool {
    let l = v.content();
    s.mukai_pair(v, v).unwrap() / (&l * &l) >= int(-2)
}

/// Every two-part split of a rank-two vector found by scanning a box.
fn brute_force(s: &SurfaceModel, v: &MukaiVector, wall: &Wall) -> BTreeSet<Vec<MukaiVector>> {
    let m = &wall.m_value;
    let target = slope(s, v, m);
    let mut out = BTreeSet::new();
    for x in -12..=12i64 {
        for y in -12..=12i64 {
            for a in -40..=40i64 {
                let v1 = MukaiVector::new(1, NsClass::sf(x, y), a);
                let v2 = v - &v1;
                if slope(s, &v1, m) == target && nonempty(s, &v1) && nonempty(s, &v2) {
                    out.insert(vec![v1, v2]);
                }
            }
        }
    }
    out
}

#[test]
fn pruned_enumerator_matches_box_scan() {
    let s = SurfaceModel::elliptic_k3();
    let mut walls_seen = 0;
    for a in -4..=0i64 {
        let v = MukaiVector::new(2, NsClass::sigma(), a);
        for wall in wall_enumerate(&v, &s, 3).unwrap() {
            let pruned: BTreeSet<Vec<MukaiVector>> = strata_enumerate(&v, &wall, 2, &s)
                .unwrap()
                .ordered
                .into_iter()
                .map(|st| st.parts)
                .collect();
            assert_eq!(pruned, brute_force(&s, &v, &wall), "v={v} D={}", wall.d);
            walls_seen += 1;
        }
    }
    assert!(walls_seen > 0);
}

#[test]
fn chain_and_bound_on_every_stratum() {
    let s = SurfaceModel::elliptic_k3();
    for a in -4..=0i64 {
        let v = MukaiVector::new(2, NsClass::sigma(), a);
        for wall in wall_enumerate(&v, &s, 3).unwrap() {
            for st in strata_enumerate(&v, &wall, 2, &s).unwrap().ordered {
                let c = check_stratum(&v, &wall, &st, &s).unwrap();
                assert!(c.all_ok(), "v={v} D={} parts={:?} {c:?}", wall.d, st.parts);
            }
            let audit = codim_audit(&v, &wall, &s).unwrap();
            assert!(audit.bound_satisfied);
            if let Some(m) = &audit.min_codim {
                assert!(to_rat(m) >= audit.bound);
            }
        }
    }
}

#[test]
fn rank_three_strata_are_checked() {
    let s = SurfaceModel::elliptic_k3();
    let v = MukaiVector::new(3, NsClass::sf(1, 1), -3);
    let mut strata = 0;
    for wall in wall_enumerate(&v, &s, 2).unwrap() {
        for parts in 2..=3 {
            for st in strata_enumerate(&v, &wall, parts, &s).unwrap().ordered {
                let c = check_stratum(&v, &wall, &st, &s).unwrap();
                assert!(c.all_ok(), "D={} parts={:?} {c:?}", wall.d, st.parts);
                strata += 1;
            }
        }
    }
    assert!(strata > 0);
    assert_eq!(ratio(int(1), int(2)) * to_rat(&int(2)), to_rat(&int(1)));
}
