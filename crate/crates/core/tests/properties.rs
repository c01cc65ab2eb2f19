//! Randomized invariants.

use std::cmp::Ordering;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wstar_core::analysis::{box_robust_map, default_schedule, is_robust, random_analysis, TransitionSystem};
use wstar_core::idempotents::{jointly_mono, split, EpPair, FinMap};
use wstar_core::lattice::{check_adjunction, right_adjoint, MonotoneMap};
use wstar_core::oracle::{
    brute_box_robust, brute_force_adjoints, grid_refutation, monotone_maps, random_idempotent, random_lattice,
    random_path_metric, random_split_chain, reaches_by_paths,
};
use wstar_core::rat::{pow2_neg, qf, qpow};
use wstar_core::seqspace::{chain_ctx, dinf, dist, dstar, norm, truncate, Exponent, SeqVec, SpaceCtx};
use wstar_core::setrep::{contains, fatten, in_closure, prefix_gap, sphere_witness, Probe, SetExpr, TriState};
use wstar_core::{ExtQ, Q};

fn rational() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| qf(n, d))
}

fn seqvec(len: usize) -> impl Strategy<Value = SeqVec> {
    prop::collection::vec(rational(), 0..=len).prop_map(SeqVec::from_dense)
}

fn exponents() -> Vec<Exponent> {
    vec![Exponent::one(), Exponent::two(), Exponent::Inf]
}

fn tol() -> Q {
    pow2_neg(40)
}

/// Sets with an obvious grid parameterization.
fn simple_set() -> impl Strategy<Value = SetExpr> {
    let grid = || (-8i64..=8).prop_map(|k| qf(k, 4));
    let vec3 = move || prop::collection::vec(grid(), 3).prop_map(SeqVec::from_dense);
    prop_oneof![
        (vec3(), 1i64..=8, prop::sample::select(exponents())).prop_map(|(c, r, p)| SetExpr::ball(c, qf(r, 4), p)),
        (vec3(), prop::collection::vec(0i64..=6, 3)).prop_map(|(s, w)| {
            let t = s.add(&SeqVec::from_dense(w.into_iter().map(|k| qf(k, 4))));
            SetExpr::interval(s, t)
        }),
        prop::collection::vec(vec3(), 1..4).prop_map(SetExpr::Points),
    ]
}

fn grid_point() -> impl Strategy<Value = SeqVec> {
    prop::collection::vec((-10i64..=10).prop_map(|k| qf(k, 4)), 3).prop_map(SeqVec::from_dense)
}

fn prefix_dist(x: &SeqVec, y: &SeqVec, n: usize) -> Q {
    x.head(n).sub(&y.head(n)).max_abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn metrics_are_ordered(x in seqvec(6), y in seqvec(6)) {
        let ds = dstar(&x, &y);
        let di = dinf(&x, &y);
        prop_assert!(ds <= di);
        for p in exponents() {
            let d = dist(&x, &y, &p, &tol()).unwrap();
            let k = p.as_int().unwrap_or(1);
            prop_assert!(d.pow.lo >= qpow(&di, k));
        }
    }

    #[test]
    fn dstar_is_a_metric(x in seqvec(5), y in seqvec(5), z in seqvec(5)) {
        prop_assert_eq!(dstar(&x, &y), dstar(&y, &x));
        prop_assert!(dstar(&x, &z) <= dstar(&x, &y) + dstar(&y, &z));
        prop_assert_eq!(dstar(&x, &x), Q::from_integer(0.into()));
        if x != y {
            prop_assert!(dstar(&x, &y) > Q::from_integer(0.into()));
        }
    }

    #[test]
    fn chain_maps_are_short(x in seqvec(6), y in seqvec(6), n in 0usize..7) {
        for p in exponents() {
            let g = SpaceCtx::lp(p.clone()).g(n);
            let (gx, gy) = (g.apply(&x), g.apply(&y));
            let before = dist(&x, &y, &p, &tol()).unwrap();
            let after = dist(&gx, &gy, &p, &tol()).unwrap();
            prop_assert_ne!(after.cmp_dist(&before), Some(Ordering::Greater));
            let nx = norm(&x, &p, &tol()).unwrap();
            let ngx = norm(&gx, &p, &tol()).unwrap();
            prop_assert_ne!(ngx.cmp_dist(&nx), Some(Ordering::Greater));
            let nt = norm(&truncate(n as u32, &x), &p, &tol()).unwrap();
            prop_assert_ne!(nt.cmp_dist(&nx), Some(Ordering::Greater));
        }
    }

    #[test]
    fn chains_increase_on_samples(xs in prop::collection::vec(seqvec(8), 1..6)) {
        for ctx in [SpaceCtx::lp(Exponent::one()), SpaceCtx::lp(Exponent::Inf), SpaceCtx::real_line()] {
            let c = chain_ctx(&ctx, 7).unwrap();
            prop_assert!(c.chain.check_order(&xs).is_ok());
            prop_assert!(c.check_levels(&xs, &tol()).is_ok());
        }
        // The ball chain acts on points of the ball only.
        let one = Q::from_integer(1.into());
        let inside: Vec<SeqVec> = xs
            .iter()
            .map(|x| x.scale(&(&one / (x.max_abs() * Q::from_integer(8.into()) + &one))))
            .collect();
        let c = chain_ctx(&SpaceCtx::unit_ball(Exponent::two()), 7).unwrap();
        prop_assert!(c.chain.check_order(&inside).is_ok());
        prop_assert!(c.check_levels(&inside, &tol()).is_ok());
    }

    #[test]
    fn out_verdicts_survive_grid_search(e in simple_set(), x in grid_point()) {
        let probe = Probe { n_max: 3, ..Probe::default() };
        if let TriState::Out { cert: Some(c) } = in_closure(&e, &x, &probe).unwrap() {
            prop_assert!(c.n <= 3);
            prop_assert_eq!(grid_refutation(&e, &x, c.n, &c.delta, 4, &tol()).unwrap(), None);
        }
    }

    #[test]
    fn gap_lower_bound_is_sound(e in simple_set(), x in grid_point(), y in grid_point(), n in 1usize..4) {
        if contains(&e, &y, &tol()).unwrap().is_in() {
            let g = prefix_gap(&e, &x, n, &tol()).unwrap();
            prop_assert!(g.lo <= ExtQ::Fin(prefix_dist(&x, &y, n)));
        }
    }

    #[test]
    fn fattening_is_monotone(e in simple_set(), x in grid_point(), a in 1i64..4, b in 0i64..4) {
        let p = Exponent::two();
        let (d1, d2) = (qf(a, 4), qf(a + b, 4));
        let in_e = contains(&e, &x, &tol()).unwrap().is_in();
        let in_1 = contains(&fatten(&e, &d1, &p).unwrap(), &x, &tol()).unwrap().is_in();
        let in_2 = contains(&fatten(&e, &d2, &p).unwrap(), &x, &tol()).unwrap().is_in();
        prop_assert!(!in_e || in_1);
        prop_assert!(!in_1 || in_2);
    }

    #[test]
    fn sphere_witnesses_are_exact(num in prop::collection::vec(-3i64..=3, 0..6), square in any::<bool>()) {
        // Coordinates are squares when p = 3/2 so that |x_i|^p is rational.
        let (p, coords): (Exponent, Vec<Q>) = if square {
            ("3/2".parse().unwrap(), num.iter().map(|&k| qf(k * k * k.signum(), 36)).collect())
        } else {
            (Exponent::two(), num.iter().map(|&k| qf(k, 6)).collect())
        };
        let x = SeqVec::from_dense(coords);
        let inside = norm(&x, &p, &tol()).unwrap().le_q(&Q::from_integer(1.into())) == Some(true);
        prop_assume!(inside);
        for n in 0..=8 {
            let w = sphere_witness(&x, n, &Q::from_integer(1.into()), &p, &tol()).unwrap();
            prop_assert_eq!(&w.prefix, &x.head(n));
            prop_assert_eq!(w.norm_pow(&tol()).unwrap(), Q::from_integer(1.into()));
        }
    }

    #[test]
    fn adjoints_match_brute_force(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_lattice(&mut rng, 6), random_lattice(&mut rng, 6));
        let maps = monotone_maps(&a, &b);
        let (a, b) = (Arc::new(a), Arc::new(b));
        for _ in 0..8 {
            let t = maps[rng.gen_range(0..maps.len())].clone();
            let f = MonotoneMap::new(a.clone(), b.clone(), t).unwrap();
            let fast = right_adjoint(&f).unwrap();
            if f.preserves_sups() {
                let g = fast.expect("sup-preserving maps have right adjoints");
                prop_assert!(check_adjunction(&f, &g).unwrap());
            } else {
                prop_assert!(fast.is_none());
                prop_assert!(brute_force_adjoints(&f).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn ep_pairs_give_idempotents(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_idempotent(&mut rng, n);
        let (_, pair) = split(&g).unwrap();
        prop_assert!(pair.is_ep());
        prop_assert_eq!(pair.idempotent(), g);
        // An arbitrary embedding with a retraction onto its image.
        let k = rng.gen_range(1..=n);
        let mut slots: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(slots.as_mut_slice(), &mut rng);
        let e = FinMap::new(n, slots[..k].to_vec()).unwrap();
        let p_table: Vec<usize> =
            (0..n).map(|y| slots[..k].iter().position(|&s| s == y).unwrap_or_else(|| rng.gen_range(0..k))).collect();
        let pair = EpPair::new(e, FinMap::new(k, p_table).unwrap()).unwrap();
        prop_assert!(pair.idempotent().is_idempotent());
    }

    #[test]
    fn limits_project_like_the_chain(seed in any::<u64>(), n in 1usize..=8, len in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_split_chain(&mut rng, n, len).unwrap();
        let top = len - 1;
        let lim = c.truncated_limit(top, 1 << 10).unwrap();
        let gs: Vec<FinMap> = c.stages().iter().map(|s| s.g.clone()).collect();
        let mut hit = vec![false; lim.len()];
        for x in 0..n {
            let k = lim.iota(x).expect("iota lands in the limit");
            for (m, g) in gs.iter().enumerate() {
                prop_assert_eq!(lim.project(m, k), g.apply(x));
            }
            prop_assert!(!hit[k] || !jointly_mono(n, &gs));
            hit[k] = true;
        }
    }

    #[test]
    fn reach_is_a_closure_operator(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rel: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(0.3)).collect();
        let t = TransitionSystem::new(n, rel).unwrap();
        for i in 0..1u64 << n {
            let r = t.reach(i);
            prop_assert_eq!(i & !r, 0);
            prop_assert_eq!(t.reach(r), r);
            for j in 0..1u64 << n {
                if i & !j == 0 {
                    prop_assert_eq!(r & !t.reach(j), 0);
                }
                prop_assert_eq!(t.post(i | j), t.post(i) | t.post(j));
            }
            for bad in [0, 1, (1u64 << n) - 1, i] {
                prop_assert_eq!(t.safety(i, bad).to_mask() == 0, !reaches_by_paths(&t, i, bad));
            }
        }
        if n <= 5 {
            let g = t.wp_by_adjoint().unwrap();
            for s in 0..1u64 << n {
                prop_assert_eq!(g[s as usize], t.wp(s));
            }
        }
    }

    #[test]
    fn box_robust_is_below_and_idempotent(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Arc::new(random_path_metric(&mut rng, n));
        let a = random_analysis(&mut rng, m.clone(), m.clone(), 3).unwrap();
        let b = box_robust_map(&a).unwrap();
        prop_assert!(b.leq(&a));
        prop_assert_eq!(box_robust_map(&b).unwrap(), b.clone());
        prop_assert!(is_robust(&b).unwrap());
        for c in 0..1u64 << n {
            prop_assert_eq!(b.apply(c), brute_box_robust(&a, c));
        }
        prop_assert!(default_schedule(&m).last().is_some());
    }
}
