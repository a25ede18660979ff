mod common;

use trigal_core::arith::quad::Reduction;
use trigal_core::catalog::PresetSet;
use trigal_core::certify::{certify_image_with, CertifyOptions, VerdictStatus};
use trigal_core::family::residual_charpoly;

#[test]
fn synthetic_lifts_reproduce_charpolys() {
    for s in common::synthetic_families() {
        let red = Reduction::new(s.table.d(), s.ell).unwrap();
        let f = &red.field;
        assert!(s.table.len() > 20, "{} at {}", s.case, s.ell);
        for (p, a) in s.table.iter() {
            let cp = residual_charpoly(p, a, &red).unwrap();
            // -p^3 constant term forces det(p g) = p^3
            assert_eq!(cp[0], f.neg(f.pow(f.from_u64(p), 3)));
        }
    }
}

#[test]
fn proper_subgroups_are_never_certified() {
    let presets = PresetSet::builtin();
    for s in common::synthetic_families() {
        let preset = presets.defaults_for(s.table.d())[0];
        for swap in [false, true] {
            let opts = CertifyOptions { reducible_sieve: None, swap_embedding: swap };
            let v = certify_image_with(s.ell, &s.table, preset, &opts).unwrap();
            assert!(
                !matches!(v.status, VerdictStatus::CertifiedFull(_)),
                "{} at l = {} (|G| = {}) certified",
                s.case,
                s.ell,
                s.group_order
            );
            if let VerdictStatus::Candidate(cases) = &v.status {
                if s.case != "h36" {
                    assert!(cases.iter().any(|c| c == s.case), "{} at {}: {cases:?}", s.case, s.ell);
                }
            }
        }
    }
}
