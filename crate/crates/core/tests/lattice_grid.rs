use mukai_core::{int, Int, MukaiVector, NsClass, SurfaceModel};

fn grid(s: &SurfaceModel, bound: i64) -> Vec<MukaiVector> {
    let mut out = Vec::new();
    for r in -bound..=bound {
        for a in -bound..=bound {
            if s.basis().rank() == 1 {
                for c in -bound..=bound {
                    out.push(MukaiVector::new(r, NsClass::h(c), a));
                }
            } else {
                for x in -bound..=bound {
                    for y in -bound..=bound {
                        out.push(MukaiVector::new(r, NsClass::sf(x, y), a));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn euler_sign_law_on_both_k3_models() {
    for s in [SurfaceModel::generic_k3(2).unwrap(), SurfaceModel::elliptic_k3()] {
        let vs = grid(&s, 3);
        for v in &vs {
            for w in vs.iter().step_by(7) {
                let grr = s.euler_form(v, w).unwrap();
                let dual_w = s.mukai_dual(w).unwrap();
                let pairing = s.mukai_pair(v, &dual_w).unwrap();
                assert_eq!(grr, -pairing.clone(), "{v} {w}");
                assert_eq!(grr.clone() == int(0), pairing == int(0));
            }
        }
    }
}

#[test]
fn structure_sheaf_sign_discrepancy() {
    let s = SurfaceModel::elliptic_k3();
    let o = s.structure_sheaf();
    assert_eq!(s.euler_form(&o, &o).unwrap(), int(2));
    assert_eq!(s.mukai_pair(&o, &o).unwrap(), int(-2));
}

#[test]
fn normalized_tower_identities() {
    let s = SurfaceModel::elliptic_k3();
    let shift = NsClass::sf(0, -2);
    for a in 0..=50i64 {
        let a = int(a);
        let mut prev: Option<MukaiVector> = None;
        for r in 1..=10i64 {
            let v = s.normalized_vector(&int(r), &a).unwrap();
            assert_eq!(s.mukai_pair(&v, &v).unwrap(), &a * 2 - 2);
            assert_eq!(s.chi_vec(&v).unwrap(), int(1));
            if let Some(p) = prev {
                let step = &s.structure_sheaf() + &s.twist(&p, &shift).unwrap();
                assert_eq!(step, v);
            }
            prev = Some(v);
        }
    }
}

#[test]
fn general_chi_tower_matches_moduli_dimension() {
    for chi in 1..=5i64 {
        let s = SurfaceModel::elliptic_general(chi).unwrap();
        for r in 1..=6i64 {
            for a in 0..=10i64 {
                let v = s.normalized_vector(&int(r), &int(a)).unwrap();
                assert_eq!(s.chi_vec(&v).unwrap(), int(1));
                let dim: Int = s.moduli_dim(&v).unwrap();
                assert_eq!(dim, int(2 * a), "chi={chi} r={r} a={a}");
            }
        }
    }
}
