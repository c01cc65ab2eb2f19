//! The named verification suites.
//!
//! Every check is a plain function of the [`Config`], so the acceptance test
//! can call the same code the `verify` command runs.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use wstar_core::analysis::{
    box_robust_map, is_robust, random_analysis, Analysis, FiniteMetric, TransitionSystem, MAX_ADJOINT_STATES,
};
use wstar_core::idempotents::{idem_leq, jointly_mono, split, FinMap};
use wstar_core::lattice::{
    alexandrov, check_adjunction, enumerate_t0_topologies, right_adjoint, scott_opens, specialization_order, tau_top,
    FiniteLattice, FinitePoset, MonotoneMap,
};
use wstar_core::oracle::{
    all_posets, brute_box_robust, brute_force_adjoints, count_connecting_pairs, grid_refutation, monotone_maps,
    palette_metrics, random_idempotent, random_lattice, random_split_chain, reaches_by_paths,
};
use wstar_core::rat::{pow2_neg, q, qf, qpow};
use wstar_core::seqspace::{chain_ctx, dinf, dist, dstar, norm, Exponent, SeqVec, SpaceCtx};
use wstar_core::setrep::{
    closure, contains, fatten, in_closure, mirror_witness, no_loss, sphere_witness, SetExpr, TriState,
};
use wstar_core::{Error, Result, Q};

use crate::{Check, Config, Tally};

pub type CheckFn = fn(&Config) -> Result<Check>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Lattice,
    Idempotents,
    Seqspace,
    Setrep,
    Analysis,
    PaperExamples,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Lattice, Suite::Idempotents, Suite::Seqspace, Suite::Setrep, Suite::Analysis, Suite::PaperExamples];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lattice => "lattice",
            Suite::Idempotents => "idempotents",
            Suite::Seqspace => "seqspace",
            Suite::Setrep => "setrep",
            Suite::Analysis => "analysis",
            Suite::PaperExamples => "paper-examples",
        }
    }

    pub fn checks(self) -> Vec<(&'static str, CheckFn)> {
        match self {
            Suite::Lattice => vec![
                ("adjunction_oracle", adjunction_oracle),
                ("mono_retract", mono_retract),
                ("random_adjunctions", random_adjunctions),
                ("specialization_roundtrip", specialization_roundtrip),
                ("t0_triviality", t0_triviality),
            ],
            Suite::Idempotents => vec![
                ("ep_idempotent", ep_idempotent),
                ("idempotent_order", idempotent_order),
                ("split_chain_laws", split_chain_laws),
                ("truncated_limit", truncated_limit),
            ],
            Suite::Seqspace => vec![
                ("chain_order", chain_order),
                ("dstar_metric", dstar_metric),
                ("metric_inequalities", metric_inequalities),
                ("shortness", shortness),
            ],
            Suite::Setrep => vec![
                ("fattening_monotone", fattening_monotone),
                ("no_loss_grid", no_loss_grid),
                ("out_soundness", out_soundness),
                ("sphere_witness_fractional", sphere_witness_fractional),
            ],
            Suite::Analysis => vec![
                ("box_robust_oracle", box_robust_oracle),
                ("post_adjoint", post_adjoint),
                ("reach_closure", reach_closure),
                ("safety_paths", safety_paths),
            ],
            Suite::PaperExamples => {
                vec![("discrete_e_i_s", discrete_e_i_s), ("kernel_ell_1", kernel_ell_1), ("unit_sphere", unit_sphere)]
            }
        }
    }
}

/// Runs every check of `suites` on a pool of `cfg.threads` workers. The
/// result is sorted by suite and check id.
pub fn run(suites: &[Suite], cfg: &Config) -> Result<Vec<Check>> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
    let jobs: Vec<(Suite, &'static str, CheckFn)> =
        suites.iter().flat_map(|&s| s.checks().into_iter().map(move |(id, f)| (s, id, f))).collect();
    let mut out: Vec<Check> = pool.install(|| {
        jobs.par_iter().map(|&(s, id, f)| f(cfg).unwrap_or_else(|e| Check::errored(s.name(), id, e))).collect()
    });
    out.sort_by(|a, b| (a.suite, a.id).cmp(&(b.suite, b.id)));
    Ok(out)
}

fn grid(rng: &mut ChaCha8Rng, k: i64, d: i64) -> Q {
    qf(rng.gen_range(-k..=k), d)
}

fn grid_vec(rng: &mut ChaCha8Rng, len: usize, k: i64, d: i64) -> SeqVec {
    SeqVec::from_dense((0..len).map(|_| grid(rng, k, d)))
}

/// A sparse vector with up to `support` nonzero coordinates `a/d`, spread over
/// the first `2 * support` indices.
fn sparse_vec(rng: &mut ChaCha8Rng, support: usize) -> SeqVec {
    let d = rng.gen_range(1..=8);
    let nnz = rng.gen_range(0..=support);
    SeqVec::from_pairs((0..nnz).map(|_| (rng.gen_range(0..2 * support.max(1)), grid(rng, 20, d))))
}

// ---------------------------------------------------------------- paper-examples

const KERNEL_SAMPLES: usize = 100;

/// The kernel slice `C` of the `ℓ_1` unit ball: its weak-* closure is the
/// ball `D` of radius 1/2, so it loses precision.
pub fn kernel_ell_1(cfg: &Config) -> Result<Check> {
    let tol = &cfg.tol;
    let k = SetExpr::ones_kernel();
    let d = SetExpr::ball(SeqVec::zero(), qf(1, 2), Exponent::one());
    let mut t = Tally::default();

    let y = SeqVec::from_dense([qf(1, 2), qf(-1, 2)]);
    t.expect(contains(&k, &y, tol)?.is_in(), || format!("{y} is not in C"));
    t.expect(contains(&d, &y, tol)?.is_out(), || format!("{y} is in D"));

    for n in 1..=60u32 {
        let x = SeqVec::from_dense((0..n).map(|i| pow2_neg(i + 2)));
        t.expect(contains(&d, &x, tol)?.is_in(), || format!("truncation {n} of (2^-(n+2)) is not in D"));
        t.expect(contains(&k, &x, tol)?.is_out(), || format!("truncation {n} of (2^-(n+2)) is in C"));
    }

    let z = in_closure(&k, &SeqVec::unit(0), &cfg.probe())?;
    let certified = matches!(&z, TriState::Out { cert: Some(c) } if c.n == 1 && c.delta == qf(1, 2));
    t.expect(certified, || format!("e_0 gave {}", z.to_json()));

    let mut rng = cfg.rng("kernel_ell_1");
    for _ in 0..KERNEL_SAMPLES {
        // ||x||_1 = f * s / (2 s) <= 1/2, with f = 1 on the boundary.
        let a: Vec<i64> = (0..rng.gen_range(0..=8)).map(|_| rng.gen_range(-8..=8)).collect();
        let s = a.iter().map(|v| v.abs()).sum::<i64>().max(1);
        let f = qf(rng.gen_range(1..=4), 4);
        let x = SeqVec::from_dense(a.iter().map(|&v| qf(v, 2 * s) * &f));
        t.expect(contains(&d, &x, tol)?.is_in(), || format!("sample {x} is not in D"));
        for n in 1..=8 {
            let w = mirror_witness(&x, n);
            let ok = w.head(n) == x.head(n) && contains(&k, &w, tol)?.is_in();
            t.expect(ok, || format!("mirror witness {w} fails for {x} at n = {n}"));
        }
        let v = in_closure(&k, &x, &cfg.probe())?;
        t.expect(v.is_in(), || format!("{x} gave {}", v.to_json()));
    }
    Ok(t.finish("paper-examples", "kernel_ell_1", json!({"samples": KERNEL_SAMPLES, "e_0": z.to_json()})))
}

/// The unit vectors accumulate at 0 alone, and `d_*(e_i, 0) = 2^-(i+1)`.
pub fn discrete_e_i_s(cfg: &Config) -> Result<Check> {
    let e = SetExpr::UnitVectors;
    let probe = cfg.probe();
    let mut t = Tally::default();
    let zero = in_closure(&e, &SeqVec::zero(), &probe)?;
    t.expect(zero == TriState::In { witness: "unit-vector-tail".into() }, || format!("0 gave {}", zero.to_json()));
    let half = in_closure(&e, &SeqVec::unit(0).scale(&qf(1, 2)), &probe)?;
    let certified = matches!(&half, TriState::Out { cert: Some(c) } if c.n == 1 && c.delta == qf(1, 2));
    t.expect(certified, || format!("e_0/2 gave {}", half.to_json()));
    for i in 0..=20 {
        let v = in_closure(&e, &SeqVec::unit(i), &probe)?;
        t.expect(v.is_in(), || format!("e_{i} gave {}", v.to_json()));
        let ds = dstar(&SeqVec::unit(i), &SeqVec::zero());
        t.expect(ds == pow2_neg(i as u32 + 1), || format!("d_*(e_{i}, 0) = {ds}"));
    }
    Ok(t.finish("paper-examples", "discrete_e_i_s", json!({"zero": zero.to_json(), "half_e_0": half.to_json()})))
}

const SPHERE_SAMPLES: usize = 50;

/// Every point of the closed `ℓ_2` unit ball is a weak-* limit of sphere
/// points, with exact witnesses.
pub fn unit_sphere(cfg: &Config) -> Result<Check> {
    let tol = &cfg.tol;
    let two = Exponent::two();
    let s = SetExpr::Sphere { r: q(1), p: two.clone() };
    let ball = SetExpr::unit_ball(two.clone());
    let mut t = Tally::default();
    let c = closure(&s, &two, tol)?;
    t.expect(c.inner == ball && c.outer.as_ref() == Some(&ball), || format!("closure {}", c.to_json()));

    let mut rng = cfg.rng("unit_sphere");
    for _ in 0..SPHERE_SAMPLES {
        // |x_i| <= 1/k on k coordinates keeps ||x||_2 <= 1.
        let k = rng.gen_range(1..=8);
        let x = grid_vec(&mut rng, k, 4, 4 * k as i64);
        for n in 0..=8 {
            let w = sphere_witness(&x, n, &q(1), &two, tol)?;
            let head: Q = (0..n).map(|i| qpow(&x.get(i), 2)).sum();
            let ok = w.prefix == x.head(n) && w.pad_pow == q(1) - head && w.norm_pow(tol)? == q(1);
            t.expect(ok, || format!("sphere witness for {x} at n = {n}"));
        }
        let v = in_closure(&s, &x, &cfg.probe())?;
        // Points on the sphere are members outright.
        t.expect(v.is_in(), || format!("{x} gave {}", v.to_json()));
    }
    Ok(t.finish("paper-examples", "unit_sphere", json!({"samples": SPHERE_SAMPLES, "closure": c.to_json()})))
}

// ---------------------------------------------------------------- setrep

const NO_LOSS_SETS: usize = 100;
const GRID_HALF: i64 = 8;

/// An intersection of the unit `ℓ_2` ball with one or two unions of `ℓ_2`
/// balls and intervals on the first three coordinates, all on the 1/8 grid.
fn random_cnf(rng: &mut ChaCha8Rng) -> SetExpr {
    let mut parts = vec![SetExpr::unit_ball(Exponent::two())];
    for _ in 0..rng.gen_range(1..=2) {
        let prims: Vec<SetExpr> = (0..rng.gen_range(1..=3))
            .map(|_| {
                if rng.gen_bool(0.6) {
                    SetExpr::ball(grid_vec(rng, 3, 8, 8), qf(rng.gen_range(1..=8), 8), Exponent::two())
                } else {
                    let s: Vec<i64> = (0..3).map(|_| rng.gen_range(-8..=8)).collect();
                    let t: Vec<i64> = s.iter().map(|&a| (a + rng.gen_range(0..=8)).min(8)).collect();
                    SetExpr::interval(
                        SeqVec::from_dense(s.iter().map(|&a| qf(a, 8))),
                        SeqVec::from_dense(t.iter().map(|&a| qf(a, 8))),
                    )
                }
            })
            .collect();
        parts.push(if prims.len() == 1 { prims.into_iter().next().expect("one") } else { SetExpr::Union(prims) });
    }
    SetExpr::Intersection(parts)
}

/// Intersections of unions of balls and intervals in `Ω_2` lose no
/// precision: on a 17-point grid per active coordinate the closure oracle
/// agrees with plain membership everywhere.
pub fn no_loss_grid(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("no_loss_grid");
    let sets: Vec<SetExpr> = (0..NO_LOSS_SETS).map(|_| random_cnf(&mut rng)).collect();
    let axis: Vec<Q> = (-GRID_HALF..=GRID_HALF).map(|k| qf(k, GRID_HALF)).collect();
    let mut points = Vec::with_capacity(axis.len().pow(3));
    for a in &axis {
        for b in &axis {
            for c in &axis {
                points.push(SeqVec::from_dense([a.clone(), b.clone(), c.clone()]));
            }
        }
    }
    let probe = cfg.probe();
    let two = Exponent::two();
    let per_set: Vec<(Tally, usize, bool)> = sets
        .par_iter()
        .map(|e| -> Result<(Tally, usize, bool)> {
            let mut t = Tally::default();
            let mut members = 0;
            for x in &points {
                let plain = contains(e, x, &cfg.tol)?;
                let closed = in_closure(e, x, &probe)?;
                members += plain.is_in() as usize;
                let agree = (plain.is_in() && closed.is_in()) || (plain.is_out() && closed.is_out());
                t.expect(agree, || format!("{e} at {x}: contains {}, closure {}", plain.verdict(), closed.verdict()));
            }
            let verdict = no_loss(e, &two, &cfg.tol)?;
            let consistent = verdict.verdict || (verdict.note == "the set is empty" && members == 0);
            t.expect(consistent, || format!("no_loss({e}) = {}", verdict.to_json()));
            Ok((t, members, verdict.verdict))
        })
        .collect::<Result<_>>()?;
    let nonempty = per_set.iter().filter(|(_, _, v)| *v).count();
    let members: usize = per_set.iter().map(|(_, m, _)| m).sum();
    let t = per_set.into_iter().fold(Tally::default(), |acc, (t, _, _)| acc.merge(t));
    let detail = json!({"sets": NO_LOSS_SETS, "grid_points": points.len(), "members": members, "no_loss": nonempty});
    Ok(t.finish("setrep", "no_loss_grid", detail))
}

/// Sets with a grid parameterization: balls in each norm, intervals and
/// point lists on the first three coordinates.
fn simple_set(rng: &mut ChaCha8Rng) -> SetExpr {
    match rng.gen_range(0..3) {
        0 => {
            let p = [Exponent::one(), Exponent::two(), Exponent::Inf].choose(rng).expect("nonempty").clone();
            SetExpr::ball(grid_vec(rng, 3, 8, 4), qf(rng.gen_range(1..=8), 4), p)
        }
        1 => {
            let s = grid_vec(rng, 3, 8, 4);
            let w = SeqVec::from_dense((0..3).map(|_| qf(rng.gen_range(0..=6), 4)));
            SetExpr::interval(s.clone(), s.add(&w))
        }
        _ => SetExpr::Points((0..rng.gen_range(1..4)).map(|_| grid_vec(rng, 3, 8, 4)).collect()),
    }
}

const OUT_CASES: usize = 300;

/// Every Out certificate survives an independent grid search for a member
/// inside its `(n, δ)` window.
pub fn out_soundness(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("out_soundness");
    let probe = wstar_core::setrep::Probe { n_max: cfg.n_max.min(3), ..cfg.probe() };
    let mut t = Tally::default();
    let mut outs = 0;
    for _ in 0..OUT_CASES {
        let e = simple_set(&mut rng);
        let x = grid_vec(&mut rng, 3, 10, 4);
        if let TriState::Out { cert: Some(c) } = in_closure(&e, &x, &probe)? {
            outs += 1;
            let found = grid_refutation(&e, &x, c.n, &c.delta, 4, &cfg.tol)?;
            t.expect(found.is_none(), || {
                format!("{e} has {} within {} of {x} on {} coords", found.unwrap(), c.delta, c.n)
            });
        }
    }
    Ok(t.finish("setrep", "out_soundness", json!({"samples": OUT_CASES, "out_verdicts": outs})))
}

/// `C ⊆ C_δ ⊆ C_δ'` for `δ <= δ'`, on grid points.
pub fn fattening_monotone(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("fattening_monotone");
    let p = Exponent::two();
    let mut t = Tally::default();
    for _ in 0..200 {
        let e = simple_set(&mut rng);
        let x = grid_vec(&mut rng, 3, 10, 4);
        let a = rng.gen_range(1..4);
        let (d1, d2) = (qf(a, 4), qf(a + rng.gen_range(0..4), 4));
        let in_e = contains(&e, &x, &cfg.tol)?.is_in();
        let in_1 = contains(&fatten(&e, &d1, &p)?, &x, &cfg.tol)?.is_in();
        let in_2 = contains(&fatten(&e, &d2, &p)?, &x, &cfg.tol)?.is_in();
        t.expect((!in_e || in_1) && (!in_1 || in_2), || format!("{e} fattened by {d1} then {d2} at {x}"));
    }
    Ok(t.finish("setrep", "fattening_monotone", json!({})))
}

/// Sphere witnesses for `p = 3/2` on points whose coordinates have rational
/// `3/2`-powers.
pub fn sphere_witness_fractional(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("sphere_witness_fractional");
    let p: Exponent = "3/2".parse()?;
    let mut t = Tally::default();
    let mut used = 0;
    for _ in 0..100 {
        let x = SeqVec::from_dense((0..rng.gen_range(0..6)).map(|_| {
            let k: i64 = rng.gen_range(-3..=3);
            qf(k * k * k.signum(), 36)
        }));
        if norm(&x, &p, &cfg.tol)?.le_q(&q(1)) != Some(true) {
            continue;
        }
        used += 1;
        for n in 0..=8 {
            let w = sphere_witness(&x, n, &q(1), &p, &cfg.tol)?;
            t.expect(w.prefix == x.head(n) && w.norm_pow(&cfg.tol)? == q(1), || format!("{x} at n = {n}"));
        }
    }
    Ok(t.finish("setrep", "sphere_witness_fractional", json!({"points": used})))
}

// ---------------------------------------------------------------- seqspace

const METRIC_PAIRS: usize = 1000;

/// `d_* <= d_∞ <= d_p` for `p ∈ {1, 2, ∞}`, compared exactly on `p`-th
/// powers.
pub fn metric_inequalities(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("metric_inequalities");
    let mut t = Tally::default();
    for _ in 0..METRIC_PAIRS {
        let (x, y) = (sparse_vec(&mut rng, 8), sparse_vec(&mut rng, 8));
        let (ds, di) = (dstar(&x, &y), dinf(&x, &y));
        t.expect(ds <= di, || format!("d_*({x}, {y}) = {ds} > d_inf = {di}"));
        for p in [Exponent::one(), Exponent::two(), Exponent::Inf] {
            let d = dist(&x, &y, &p, &cfg.tol)?;
            let k = p.as_int().unwrap_or(1);
            let ok = d.pow.value().is_some_and(|pw| qpow(&di, k) <= *pw);
            t.expect(ok, || format!("d_{p}({x}, {y}) = {d} against d_inf = {di}"));
        }
    }
    Ok(t.finish("seqspace", "metric_inequalities", json!({"pairs": METRIC_PAIRS})))
}

/// Symmetry, identity of indiscernibles and the triangle inequality for `d_*`.
pub fn dstar_metric(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("dstar_metric");
    let mut t = Tally::default();
    for _ in 0..300 {
        let (x, y, z) = (sparse_vec(&mut rng, 5), sparse_vec(&mut rng, 5), sparse_vec(&mut rng, 5));
        let ok = dstar(&x, &y) == dstar(&y, &x)
            && dstar(&x, &z) <= dstar(&x, &y) + dstar(&y, &z)
            && (dstar(&x, &y) == q(0)) == (x == y);
        t.expect(ok, || format!("d_* on {x}, {y}, {z}"));
    }
    Ok(t.finish("seqspace", "dstar_metric", json!({})))
}

/// Chain maps never increase distances or norms.
pub fn shortness(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("shortness");
    let mut t = Tally::default();
    for _ in 0..100 {
        let (x, y) = (sparse_vec(&mut rng, 6), sparse_vec(&mut rng, 6));
        let n = rng.gen_range(0..8);
        for p in [Exponent::one(), Exponent::two(), Exponent::Inf] {
            let g = SpaceCtx::lp(p.clone()).g(n);
            let (gx, gy) = (g.apply(&x), g.apply(&y));
            let before = dist(&x, &y, &p, &cfg.tol)?;
            let after = dist(&gx, &gy, &p, &cfg.tol)?;
            let grows = after.cmp_dist(&before) == Some(std::cmp::Ordering::Greater);
            t.expect(!grows, || format!("g_{n} in l_{p} stretches {x}, {y}"));
        }
    }
    Ok(t.finish("seqspace", "shortness", json!({})))
}

/// The truncation chains increase in the idempotent order and land in
/// their levels, on sampled points.
pub fn chain_order(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("chain_order");
    let mut t = Tally::default();
    for _ in 0..20 {
        let xs: Vec<SeqVec> = (0..5).map(|_| sparse_vec(&mut rng, 8)).collect();
        // The ball chain acts on points of the ball only.
        let inside: Vec<SeqVec> = xs.iter().map(|x| x.scale(&(q(1) / (x.max_abs() * q(8) + q(1))))).collect();
        let ctxs = [
            (SpaceCtx::lp(Exponent::one()), &xs),
            (SpaceCtx::lp(Exponent::Inf), &xs),
            (SpaceCtx::real_line(), &xs),
            (SpaceCtx::unit_ball(Exponent::two()), &inside),
        ];
        for (ctx, sample) in ctxs {
            let c = chain_ctx(&ctx, 7)?;
            let res = c.chain.check_order(sample).and_then(|_| c.check_levels(sample, &cfg.tol));
            t.expect(res.is_ok(), || format!("{:?}", res.err()));
        }
    }
    Ok(t.finish("seqspace", "chain_order", json!({})))
}

// ---------------------------------------------------------------- idempotents

const CHAINS: usize = 100;

/// Random split chains satisfy the e-p, factorization and `h_{i,j}` laws,
/// and each consecutive pair of stages has exactly one connecting e-p pair.
pub fn split_chain_laws(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("split_chain_laws");
    let mut t = Tally::default();
    let mut pairs = 0;
    for _ in 0..CHAINS {
        let (n, len) = (rng.gen_range(1..=8), rng.gen_range(1..=5));
        let c = random_split_chain(&mut rng, n, len)?;
        let fails = c.law_failures()?;
        t.expect(fails.is_empty(), || fails.join("; "));
        for n in 0..c.len() - 1 {
            let count = count_connecting_pairs(&c, n)?;
            pairs += 1;
            t.expect(count == 1, || format!("{count} connecting pairs at stage {n}"));
        }
    }
    Ok(t.finish("idempotents", "split_chain_laws", json!({"chains": CHAINS, "connecting_pairs": pairs})))
}

fn all_idempotents(n: usize) -> Vec<FinMap> {
    (0..n.pow(n as u32))
        .filter_map(|code| {
            let table: Vec<usize> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
            FinMap::endo(table).ok().filter(FinMap::is_idempotent)
        })
        .collect()
}

/// The idempotent order is reflexive, antisymmetric and transitive on every
/// carrier of at most four points, with the identity on top.
pub fn idempotent_order(_: &Config) -> Result<Check> {
    let mut t = Tally::default();
    let mut counts = Vec::new();
    for n in 1..=4 {
        let gs = all_idempotents(n);
        counts.push(gs.len());
        let id = FinMap::identity(n);
        let leq: Vec<Vec<bool>> =
            gs.iter().map(|a| gs.iter().map(|b| idem_leq(a, b)).collect::<Result<_>>()).collect::<Result<_>>()?;
        for (i, a) in gs.iter().enumerate() {
            t.expect(leq[i][i] && idem_leq(a, &id)?, || format!("{a:?} is not below itself and the identity"));
            for j in 0..gs.len() {
                t.expect(!(leq[i][j] && leq[j][i]) || i == j, || format!("{a:?} and {:?} are equivalent", gs[j]));
                for k in 0..gs.len() {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        t.expect(false, || format!("transitivity fails at {a:?}, {:?}, {:?}", gs[j], gs[k]));
                    }
                }
            }
        }
    }
    Ok(t.finish("idempotents", "idempotent_order", json!({"idempotents_by_size": counts})))
}

/// Splitting a random idempotent gives an e-p pair that composes back to it.
pub fn ep_idempotent(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("ep_idempotent");
    let mut t = Tally::default();
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let g = random_idempotent(&mut rng, n);
        let (_, pair) = split(&g)?;
        t.expect(pair.is_ep() && pair.idempotent() == g, || format!("split of {g:?}"));
    }
    Ok(t.finish("idempotents", "ep_idempotent", json!({})))
}

/// The truncated limit of a split chain projects like the chain itself, and
/// `iota` is injective when the chain is jointly mono.
pub fn truncated_limit(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("truncated_limit");
    let mut t = Tally::default();
    for _ in 0..50 {
        let n = rng.gen_range(1..=8);
        let len = rng.gen_range(1..=cfg.depth as usize + 1);
        let c = random_split_chain(&mut rng, n, len)?;
        let lim = c.truncated_limit(len - 1, 1 << 12)?;
        let gs: Vec<FinMap> = c.stages().iter().map(|s| s.g.clone()).collect();
        let mono = jointly_mono(n, &gs);
        let mut hit = vec![false; lim.len()];
        for x in 0..n {
            let Some(k) = lim.iota(x) else {
                t.expect(false, || format!("iota({x}) is not in the limit"));
                continue;
            };
            let projects = gs.iter().enumerate().all(|(m, g)| lim.project(m, k) == g.apply(x));
            t.expect(projects, || format!("limit projections of iota({x}) differ from the chain"));
            t.expect(!(hit[k] && mono), || format!("iota collapses {x} on a jointly mono chain"));
            hit[k] = true;
        }
    }
    Ok(t.finish("idempotents", "truncated_limit", json!({})))
}

// ---------------------------------------------------------------- lattice

fn small_lattices(max: usize) -> Result<Vec<Arc<FinitePoset>>> {
    Ok(all_posets(max)?.into_iter().filter(FinitePoset::is_lattice).map(Arc::new).collect())
}

/// Every poset on at most four points carries exactly one T0 topology whose
/// specialization order it is: the Alexandrov topology, which is `tau_top`.
pub fn t0_triviality(_: &Config) -> Result<Check> {
    let ps = all_posets(4)?;
    let mut t = Tally::default();
    let mut by_size = [0usize; 4];
    let mut unique = 0;
    for p in &ps {
        by_size[p.len() - 1] += 1;
        let ts = enumerate_t0_topologies(p, 4)?;
        unique += (ts.len() == 1) as usize;
        let ok = ts.len() == 1 && ts[0] == alexandrov(p) && ts[0] == tau_top(p);
        t.expect(ok, || format!("{} topologies on {:?}", ts.len(), p.matrix()));
    }
    Ok(t.finish("lattice", "t0_triviality", json!({"posets": ps.len(), "by_size": by_size, "unique_t0": unique})))
}

/// On all lattices with at most four elements: a monotone map has a right
/// adjoint by the sup formula iff brute force finds one iff it preserves
/// sups, and the two adjoints agree.
pub fn adjunction_oracle(_: &Config) -> Result<Check> {
    let ls = small_lattices(4)?;
    let mut t = Tally::default();
    let mut left = 0;
    for a in &ls {
        for b in &ls {
            for table in monotone_maps(a, b) {
                let f = MonotoneMap::new(a.clone(), b.clone(), table)?;
                let fast = right_adjoint(&f)?;
                let slow = brute_force_adjoints(&f)?;
                let sups = f.preserves_sups();
                left += fast.is_some() as usize;
                let ok = fast.is_some() == !slow.is_empty()
                    && fast.is_some() == sups
                    && slow.len() <= 1
                    && fast == slow.into_iter().next();
                t.expect(ok, || format!("map {:?} between lattices of sizes {} and {}", f.table(), a.len(), b.len()));
            }
        }
    }
    Ok(t.finish("lattice", "adjunction_oracle", json!({"lattices": ls.len(), "left_adjoints": left})))
}

/// Sup-preserving maps between random lattices on up to six elements have
/// adjoints that satisfy the unit and counit laws; the others have none.
pub fn random_adjunctions(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("random_adjunctions");
    let mut t = Tally::default();
    for _ in 0..50 {
        let (a, b) = (random_lattice(&mut rng, 6), random_lattice(&mut rng, 6));
        let maps = monotone_maps(&a, &b);
        let (a, b) = (Arc::new(a), Arc::new(b));
        for _ in 0..8 {
            let table = maps[rng.gen_range(0..maps.len())].clone();
            let f = MonotoneMap::new(a.clone(), b.clone(), table)?;
            let ok = match right_adjoint(&f)? {
                Some(g) => f.preserves_sups() && check_adjunction(&f, &g)?,
                None => !f.preserves_sups() && brute_force_adjoints(&f)?.is_empty(),
            };
            t.expect(ok, || format!("map {:?}", f.table()));
        }
    }
    Ok(t.finish("lattice", "random_adjunctions", json!({})))
}

/// An injective left adjoint has a right adjoint that retracts it, over all
/// lattices with at most five elements.
pub fn mono_retract(_: &Config) -> Result<Check> {
    let ls = small_lattices(5)?;
    let mut t = Tally::default();
    for a in &ls {
        for b in &ls {
            for table in monotone_maps(a, b) {
                let f = MonotoneMap::new(a.clone(), b.clone(), table)?;
                if !f.is_injective() {
                    continue;
                }
                if let Some(g) = right_adjoint(&f)? {
                    let ok = check_adjunction(&f, &g)? && (0..a.len()).all(|x| g.apply(f.apply(x)) == x);
                    t.expect(ok, || format!("map {:?}", f.table()));
                }
            }
        }
    }
    Ok(t.finish("lattice", "mono_retract", json!({"lattices": ls.len()})))
}

/// The specialization order of the Alexandrov topology is the original
/// order, and on finite lattices every up-set is Scott open.
pub fn specialization_roundtrip(_: &Config) -> Result<Check> {
    let mut t = Tally::default();
    for p in all_posets(4)? {
        t.expect(specialization_order(&alexandrov(&p))?.same_order(&p), || format!("{:?}", p.matrix()));
        if p.is_lattice() {
            let l = FiniteLattice::new(p.clone())?;
            t.expect(scott_opens(&l) == alexandrov(&p), || format!("Scott opens of {:?}", p.matrix()));
        }
    }
    Ok(t.finish("lattice", "specialization_roundtrip", json!({})))
}

// ---------------------------------------------------------------- analysis

const ANALYSES_PER_METRIC: usize = 50;

/// On every metric with at most four points and distances in {1/2, 1, 3/2},
/// `□_R(A)` of generated monotone analyses equals the brute-force meet over
/// all fattenings, is robust, lies below `A` and is idempotent.
pub fn box_robust_oracle(cfg: &Config) -> Result<Check> {
    let metrics: Vec<Arc<FiniteMetric>> =
        palette_metrics(4, &[qf(1, 2), q(1), qf(3, 2)]).into_iter().map(Arc::new).collect();
    let mut rng = cfg.rng("box_robust_oracle");
    let seeds: Vec<u64> = metrics.iter().map(|_| rng.gen()).collect();
    let per_metric: Vec<Tally> = metrics
        .par_iter()
        .zip(&seeds)
        .map(|(m, &seed)| -> Result<Tally> {
            let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            let mut t = Tally::default();
            for _ in 0..ANALYSES_PER_METRIC {
                let a = random_analysis(&mut rng, m.clone(), m.clone(), cfg.depth)?;
                let b = box_robust_map(&a)?;
                let brute = (0..1u64 << m.len()).all(|c| b.apply(c) == brute_box_robust(&a, c));
                let ok = brute && is_robust(&b)? && b.leq(&a) && box_robust_map(&b)? == b;
                t.expect(ok, || format!("analysis {:?} on metric {}", a.table(), m.to_json()));
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let t = per_metric.into_iter().fold(Tally::default(), Tally::merge);
    Ok(t.finish("analysis", "box_robust_oracle", json!({"metrics": metrics.len(), "per_metric": ANALYSES_PER_METRIC})))
}

fn random_system(rng: &mut ChaCha8Rng, n: usize) -> Result<TransitionSystem> {
    let rel: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(0.3)).collect();
    TransitionSystem::new(n, rel)
}

/// `reach` is extensive, idempotent and monotone, and `post` preserves
/// binary unions.
pub fn reach_closure(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("reach_closure");
    let mut t = Tally::default();
    for _ in 0..60 {
        let n = rng.gen_range(1..=6);
        let sys = random_system(&mut rng, n)?;
        let reach: Vec<u64> = (0..1u64 << n).map(|i| sys.reach(i)).collect();
        for i in 0..1u64 << n {
            let r = reach[i as usize];
            t.expect(i & !r == 0 && sys.reach(r) == r, || format!("reach({i}) = {r} on {:?}", sys.rel()));
            for j in 0..1u64 << n {
                let mono = i & !j != 0 || r & !reach[j as usize] == 0;
                let union = sys.post(i | j) == sys.post(i) | sys.post(j);
                t.expect(mono && union, || format!("sets {i}, {j} on {:?}", sys.rel()));
            }
        }
    }
    Ok(t.finish("analysis", "reach_closure", json!({})))
}

/// `safety(I, E)` is bottom exactly when some path from `I` meets `E`, and
/// the safety analysis is a monotone map into Σ.
pub fn safety_paths(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("safety_paths");
    let mut t = Tally::default();
    for _ in 0..60 {
        let n = rng.gen_range(1..=6);
        let sys = random_system(&mut rng, n)?;
        let m = Arc::new(FiniteMetric::discrete(n));
        let bad = rng.gen_range(0..1u64 << n);
        let a = Analysis::safety(&sys, bad, m)?;
        for i in 0..1u64 << n {
            let unsafe_ = reaches_by_paths(&sys, i, bad);
            let ok = (sys.safety(i, bad).to_mask() == 0) != unsafe_ && a.apply(i) == sys.safety(i, bad).to_mask();
            t.expect(ok, || format!("I = {i}, E = {bad} on {:?}", sys.rel()));
        }
    }
    Ok(t.finish("analysis", "safety_paths", json!({})))
}

/// The right adjoint of `post` on the powerset lattice is the weakest
/// precondition.
pub fn post_adjoint(cfg: &Config) -> Result<Check> {
    let mut rng = cfg.rng("post_adjoint");
    let mut t = Tally::default();
    for _ in 0..30 {
        let n = rng.gen_range(1..=MAX_ADJOINT_STATES.min(5));
        let sys = random_system(&mut rng, n)?;
        let g = sys.wp_by_adjoint()?;
        t.expect((0..1u64 << n).all(|s| g[s as usize] == sys.wp(s)), || format!("wp on {:?}", sys.rel()));
    }
    Ok(t.finish("analysis", "post_adjoint", json!({})))
}

/// Checks used by the acceptance criteria, in criterion order.
pub const CRITERIA: [(&str, CheckFn); 9] = [
    ("kernel_ell_1", kernel_ell_1),
    ("discrete_e_i_s", discrete_e_i_s),
    ("unit_sphere", unit_sphere),
    ("no_loss_grid", no_loss_grid),
    ("metric_inequalities", metric_inequalities),
    ("split_chain_laws", split_chain_laws),
    ("t0_triviality", t0_triviality),
    ("adjunction_oracle", adjunction_oracle),
    ("box_robust_oracle", box_robust_oracle),
];
