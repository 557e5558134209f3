mod common;

use common::basis;
use operad_gb::poisder::tau_identity;
use operad_gb::{library, library_identity, verify_identity, EngineError};

#[test]
fn transposed_poisson_identities() {
    let (_, enc, b) = basis("tp", 4, 2);
    for name in ["manifold", "spec1", "spec2", "gd-com", "jacobi", "assoc", "comm"] {
        let v = verify_identity(&b, &enc, &library_identity(name).unwrap()).unwrap();
        assert!(v.holds(), "{name}");
        v.replay(&b).unwrap();
    }
}

#[test]
fn com_gd_contains_tp() {
    let (_, enc, b) = basis("com-gd", 3, 1);
    let v = verify_identity(&b, &enc, &library_identity("tp-identity").unwrap()).unwrap();
    assert!(v.holds());
    assert_eq!(v.witnesses().count(), 0);
}

#[test]
fn special_identities_fail_in_gd() {
    let (_, enc, b) = basis("gd", 4, 2);
    for name in ["spec1", "spec2"] {
        let v = verify_identity(&b, &enc, &library_identity(name).unwrap()).unwrap();
        assert!(!v.holds(), "{name}");
        assert!(v.witnesses().all(|r| !r.normal_form.is_zero()));
        assert!(v.witnesses().count() > 0);
        v.replay(&b).unwrap();
    }
    for name in ["gd1", "leftsym", "rightcom", "jacobi"] {
        assert!(verify_identity(&b, &enc, &library_identity(name).unwrap()).unwrap().holds(), "{name}");
    }
}

#[test]
fn novikov_is_not_associative() {
    let (_, enc, b) = basis("novikov", 3, 1);
    assert!(!verify_identity(&b, &enc, &library_identity("assoc").unwrap()).unwrap().holds());
    assert!(!verify_identity(&b, &enc, &library_identity("comm").unwrap()).unwrap().holds());
}

#[test]
fn beyond_certified_arity_is_an_error() {
    let (_, enc, b) = basis("tp", 3, 1);
    let e = verify_identity(&b, &enc, &library_identity("manifold").unwrap()).unwrap_err();
    assert!(matches!(e, EngineError::BeyondCertified { arity: 4, certified: 3 }));
}

#[test]
fn foreign_operations_are_rejected() {
    let (_, enc, b) = basis("lie", 3, 1);
    assert!(verify_identity(&b, &enc, &library_identity("assoc").unwrap()).is_err());
}

#[test]
fn gd_consequences_vanish_under_tau() {
    let lib = library();
    let (_, enc, b) = basis("gd", 4, 2);
    let mut strict = Vec::new();
    for id in &lib.identities {
        let holds = verify_identity(&b, &enc, id).unwrap().holds();
        let (_, tau) = tau_identity(id, &lib.ops).unwrap();
        if holds {
            assert!(tau.zero, "{} holds in GD but not under tau", id.name);
        } else if tau.zero {
            strict.push(id.name.as_str());
        }
    }
    assert!(strict.contains(&"spec1") && strict.contains(&"spec2"), "{strict:?}");
}
