//! Worked examples with their exact values.

use wstar_core::lattice::{alexandrov, enumerate_t0_topologies, scott_opens, tau_top, FiniteLattice, FinitePoset};
use wstar_core::rat::{pow2_neg, q, qf};
use wstar_core::seqspace::{dinf, dstar, norm, Exponent, SeqVec};
use wstar_core::setrep::{
    closure, contains, in_closure, mirror_witness, no_loss, prefix_gap, sphere_witness, Gap, OutCert, Probe, SetExpr,
    TriState,
};
use wstar_core::ExtQ;

fn probe() -> Probe {
    Probe::default()
}

#[test]
fn kernel_slice_of_the_l1_ball() {
    let tol = probe().tol;
    let k = SetExpr::ones_kernel();
    let y = SeqVec::from_dense([qf(1, 2), qf(-1, 2)]);
    assert!(contains(&k, &y, &tol).unwrap().is_in());
    let half = SetExpr::ball(SeqVec::zero(), qf(1, 2), Exponent::one());
    assert!(contains(&half, &y, &tol).unwrap().is_out());

    // (2^-(n+2))_n sums to 1/2: inside the l_1 ball, outside the kernel.
    let geo = SeqVec::from_dense((0..40).map(|n| pow2_neg(n + 2)));
    assert_eq!(norm(&geo, &Exponent::one(), &tol).unwrap().exact(), Some(&(qf(1, 2) - pow2_neg(41))));
    assert!(contains(&SetExpr::unit_ball(Exponent::one()), &geo, &tol).unwrap().is_in());
    assert!(contains(&k, &geo, &tol).unwrap().is_out());

    let z = in_closure(&k, &SeqVec::unit(0), &probe()).unwrap();
    assert_eq!(z, TriState::Out { cert: Some(OutCert { n: 1, delta: qf(1, 2), bound: ExtQ::Fin(qf(1, 2)) }) });
    assert_eq!(prefix_gap(&k, &SeqVec::unit(0), 1, &tol).unwrap(), Gap::exact(qf(1, 2)));
}

#[test]
fn mirror_witness_covers_the_half_ball() {
    let tol = probe().tol;
    let k = SetExpr::ones_kernel();
    let samples = [
        SeqVec::from_dense([qf(1, 2)]),
        SeqVec::from_dense([qf(1, 4), qf(-1, 4)]),
        SeqVec::from_dense([qf(1, 8), qf(1, 8), qf(-1, 8), qf(1, 8)]),
        SeqVec::from_dense([qf(-1, 3), q(0), qf(1, 7)]),
        SeqVec::zero(),
    ];
    for x in &samples {
        assert!(in_closure(&k, x, &probe()).unwrap().is_in(), "{x}");
        for n in 1..=8 {
            let w = mirror_witness(x, n);
            assert_eq!(w.head(n), x.head(n));
            assert!(contains(&k, &w, &tol).unwrap().is_in(), "n = {n}, x = {x}");
        }
    }
}

#[test]
fn unit_vectors_accumulate_only_at_zero() {
    let e = SetExpr::UnitVectors;
    assert_eq!(in_closure(&e, &SeqVec::zero(), &probe()).unwrap(), TriState::In { witness: "unit-vector-tail".into() });
    for i in [0, 1, 5] {
        assert!(in_closure(&e, &SeqVec::unit(i), &probe()).unwrap().is_in());
    }
    let half = SeqVec::unit(0).scale(&qf(1, 2));
    assert_eq!(
        in_closure(&e, &half, &probe()).unwrap(),
        TriState::Out { cert: Some(OutCert { n: 1, delta: qf(1, 2), bound: ExtQ::Fin(qf(1, 2)) }) }
    );
    for i in 0..=20 {
        assert_eq!(dstar(&SeqVec::unit(i), &SeqVec::zero()), pow2_neg(i as u32 + 1));
        assert_eq!(dinf(&SeqVec::unit(i), &SeqVec::zero()), q(1));
    }
}

#[test]
fn sphere_closure_is_the_ball() {
    let tol = probe().tol;
    let s = SetExpr::Sphere { r: q(1), p: Exponent::two() };
    assert_eq!(in_closure(&s, &SeqVec::zero(), &probe()).unwrap(), TriState::In { witness: "sphere-pad".into() });
    let c = closure(&s, &Exponent::two(), &tol).unwrap();
    assert_eq!(c.inner, SetExpr::unit_ball(Exponent::two()));
    assert_eq!(c.outer, Some(SetExpr::unit_ball(Exponent::two())));
    let x = SeqVec::from_dense([qf(3, 5), qf(0, 1), qf(-1, 5)]);
    let w = sphere_witness(&x, 2, &q(1), &Exponent::two(), &tol).unwrap();
    assert_eq!(w.pad_pow, qf(16, 25));
    assert_eq!(w.norm_pow(&tol).unwrap(), q(1));
    assert!(!no_loss(&s, &Exponent::two(), &tol).unwrap().verdict);
}

#[test]
fn metric_values() {
    let x = SeqVec::from_dense([q(3), q(4)]);
    let tol = pow2_neg(40);
    assert_eq!(norm(&x, &Exponent::two(), &tol).unwrap().exact(), Some(&q(5)));
    assert_eq!(norm(&x, &Exponent::one(), &tol).unwrap().exact(), Some(&q(7)));
    assert_eq!(norm(&x, &Exponent::Inf, &tol).unwrap().exact(), Some(&q(4)));
    assert_eq!(dstar(&x, &SeqVec::zero()), qf(3, 2) + q(1));
}

#[test]
fn finite_posets_carry_one_t0_topology() {
    for p in [FinitePoset::chain(3), FinitePoset::antichain(3), FinitePoset::diamond()] {
        let ts = enumerate_t0_topologies(&p, 4).unwrap();
        assert_eq!(ts, vec![alexandrov(&p)]);
        assert_eq!(tau_top(&p), alexandrov(&p));
    }
    // On a finite lattice every up-set is Scott open.
    let d = FiniteLattice::new(FinitePoset::diamond()).unwrap();
    assert_eq!(scott_opens(&d), alexandrov(&FinitePoset::diamond()));
}
