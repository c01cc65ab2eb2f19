//! Brute-force reference procedures and seeded generators.
//!
//! Everything here trades speed for obviousness: exhaustive enumeration of
//! maps, posets and radii, and grid search over set parameterizations. The
//! fast procedures elsewhere in the crate are tested against these.

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeSet;

use crate::analysis::{Analysis, FiniteMetric, TransitionSystem};
use crate::idempotents::{FinMap, SplitChain};
use crate::lattice::{check_adjunction, FinitePoset, Mask, MonotoneMap};
use crate::rat::{qf, Q};
use crate::seqspace::SeqVec;
use crate::setrep::{contains, SetExpr};
use crate::{Error, Result};

/// Every monotone table `dom → cod`, by backtracking over elements in index
/// order.
pub fn monotone_maps(dom: &FinitePoset, cod: &FinitePoset) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut table = Vec::with_capacity(dom.len());
    extend_monotone(dom, cod, &mut table, &mut out);
    out
}

fn extend_monotone(dom: &FinitePoset, cod: &FinitePoset, table: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let x = table.len();
    if x == dom.len() {
        out.push(table.clone());
        return;
    }
    for y in 0..cod.len() {
        let ok = (0..x).all(|w| (!dom.leq(w, x) || cod.leq(table[w], y)) && (!dom.leq(x, w) || cod.leq(y, table[w])));
        if ok {
            table.push(y);
            extend_monotone(dom, cod, table, out);
            table.pop();
        }
    }
}

/// All right adjoints of `f`, found by trying every monotone `g`.
pub fn brute_force_adjoints(f: &MonotoneMap) -> Result<Vec<MonotoneMap>> {
    let mut found = Vec::new();
    for t in monotone_maps(f.cod(), f.dom()) {
        let g = MonotoneMap::new(f.cod().clone(), f.dom().clone(), t)?;
        if check_adjunction(f, &g)? {
            found.push(g);
        }
    }
    Ok(found)
}

/// Canonical form of an order on `0..n`: the least adjacency bit string over
/// all relabellings.
fn canonical_key(p: &FinitePoset) -> Vec<bool> {
    let n = p.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<bool>> = None;
    permutations(&mut perm, 0, &mut |perm| {
        let key: Vec<bool> =
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| p.leq(perm[a], perm[b])).collect();
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    });
    best.unwrap_or_default()
}

fn permutations(v: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, visit);
        v.swap(k, i);
    }
}

/// One representative of every partial order on `n` points, up to
/// isomorphism, found by filtering all relations.
pub fn posets_up_to_iso(n: usize) -> Result<Vec<FinitePoset>> {
    if n > 5 {
        return Err(Error::Resource(format!("poset enumeration is limited to 5 points, got {n}")));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|(a, b)| a < b).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    // each unordered pair is unrelated, below or above
    let total = 3usize.pow(pairs.len() as u32);
    for code in 0..total {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        let mut c = code;
        for &(a, b) in &pairs {
            match c % 3 {
                1 => leq[a][b] = true,
                2 => leq[b][a] = true,
                _ => {}
            }
            c /= 3;
        }
        let transitive = (0..n).all(|a| (0..n).all(|b| (0..n).all(|k| !(leq[a][b] && leq[b][k]) || leq[a][k])));
        if !transitive {
            continue;
        }
        let p = FinitePoset::from_leq(leq)?;
        if seen.insert(canonical_key(&p)) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Posets on `1..=max` points up to isomorphism.
pub fn all_posets(max: usize) -> Result<Vec<FinitePoset>> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(posets_up_to_iso(n)?);
    }
    Ok(out)
}

/// Number of e-p pairs `(e, p): X_n => X_{n+1}` with
/// `(f_n, q_n) = (f_{n+1}, q_{n+1}) ∘ (e, p)`, counted by trying every value
/// of every coordinate. The conditions constrain each coordinate of `e` and
/// of `p` separately, so the count is a product.
pub fn count_connecting_pairs(chain: &SplitChain, n: usize) -> Result<u128> {
    if n + 1 >= chain.len() {
        return Err(Error::Input(format!("no stage after {n}")));
    }
    let (lo, hi) = (chain.stage(n), chain.stage(n + 1));
    let (xs, ys) = (lo.image.len(), hi.image.len());
    let mut count: u128 = 1;
    for x in 0..xs {
        let e_choices = (0..ys).filter(|&y| hi.split.e.apply(y) == lo.split.e.apply(x)).count();
        count *= e_choices as u128;
    }
    let ambient = chain.carrier_len();
    for y in 0..ys {
        let p_choices = (0..xs)
            .filter(|&v| (0..ambient).filter(|&z| hi.split.p.apply(z) == y).all(|z| lo.split.p.apply(z) == v))
            .count();
        count *= p_choices as u128;
    }
    if count == 1 {
        let c = chain.connecting(n)?;
        let e_ok = (0..xs).all(|x| hi.split.e.apply(c.e.apply(x)) == lo.split.e.apply(x));
        let p_ok = (0..ambient).all(|z| c.p.apply(hi.split.p.apply(z)) == lo.split.p.apply(z));
        if !(e_ok && p_ok && c.is_ep()) {
            return Ok(0);
        }
    }
    Ok(count)
}

/// A random idempotent on `0..n` with a nonempty image.
pub fn random_idempotent<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FinMap {
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(rng);
    let k = rng.gen_range(1..=n);
    retract_onto(rng, n, &pts[..k], |x| x)
}

fn retract_onto<R: Rng + ?Sized>(rng: &mut R, n: usize, keep: &[usize], base: impl Fn(usize) -> usize) -> FinMap {
    let mut target: Vec<Option<usize>> = vec![None; n];
    for &k in keep {
        target[k] = Some(k);
    }
    let table = (0..n)
        .map(|x| {
            let y = base(x);
            *target[y].get_or_insert_with(|| keep[rng.gen_range(0..keep.len())])
        })
        .collect();
    FinMap::endo(table).expect("values lie in the carrier")
}

/// A random increasing chain of `len` idempotents on `0..n`, built from the
/// top: each `g_k` retracts the image of `g_{k+1}` onto a subset and then
/// applies `g_{k+1}` first.
pub fn random_split_chain<R: Rng + ?Sized>(rng: &mut R, n: usize, len: usize) -> Result<SplitChain> {
    if n == 0 || len == 0 {
        return Err(Error::Input("chains need a nonempty carrier and length".into()));
    }
    let mut gs = vec![random_idempotent(rng, n)];
    for _ in 1..len {
        let top = gs.last().expect("nonempty").clone();
        let mut image = top.image();
        image.shuffle(rng);
        let k = rng.gen_range(1..=image.len());
        let g = retract_onto(rng, n, &image[..k], |x| top.apply(x));
        gs.push(g);
    }
    gs.reverse();
    SplitChain::new(gs)
}

/// `⋂ A(C_δ)` over every radius in the domain spectrum and one radius
/// below it, with the fattenings computed from the distance table.
pub fn brute_box_robust(a: &Analysis, c: Mask) -> Mask {
    let m = a.dom();
    let mut radii = m.spectrum();
    let floor = radii.first().map_or(qf(1, 2), |v| v * qf(1, 2));
    radii.push(floor);
    let mut out = a.cod().full();
    for delta in &radii {
        let fat = (0..m.len())
            .filter(|&x| (0..m.len()).any(|y| c >> y & 1 == 1 && m.d(x, y) <= delta))
            .fold(0, |s, x| s | 1 << x);
        out &= a.apply(fat);
    }
    out
}

/// Looks for `y` in the set with `max_{i<n} |x_i - y_i| < delta`, over a grid
/// of `2 * steps + 1` values per coordinate of the set's parameterization.
/// Supports balls, intervals and point lists.
pub fn grid_refutation(e: &SetExpr, x: &SeqVec, n: usize, delta: &Q, steps: u32, tol: &Q) -> Result<Option<SeqVec>> {
    let close = |y: &SeqVec| (0..n).all(|i| (x.get(i) - y.get(i)).abs() < *delta);
    match e {
        SetExpr::Points(ps) => Ok(ps.iter().find(|y| close(y)).cloned()),
        SetExpr::Ball { center, r, .. } => {
            let axes: Vec<Vec<Q>> = (0..n)
                .map(|i| {
                    (-(steps as i64)..=steps as i64).map(|k| center.get(i) + r * qf(k, steps.max(1) as i64)).collect()
                })
                .collect();
            grid_search(e, center, &axes, &close, tol)
        }
        SetExpr::Interval { s, t } => {
            let axes: Vec<Vec<Q>> = (0..n)
                .map(|i| {
                    (0..=2 * steps as i64)
                        .map(|k| s.get(i) + (t.get(i) - s.get(i)) * qf(k, 2 * steps.max(1) as i64))
                        .collect()
                })
                .collect();
            grid_search(e, s, &axes, &close, tol)
        }
        _ => Err(Error::Input(format!("grid search does not parameterize {e}"))),
    }
}

fn grid_search(
    e: &SetExpr,
    tail: &SeqVec,
    axes: &[Vec<Q>],
    close: &dyn Fn(&SeqVec) -> bool,
    tol: &Q,
) -> Result<Option<SeqVec>> {
    let total: usize = axes.iter().map(Vec::len).product();
    if total > 1 << 20 {
        return Err(Error::Resource(format!("grid of {total} points")));
    }
    for k in 0..total {
        let mut idx = k;
        let mut y = tail.clone();
        for (i, axis) in axes.iter().enumerate() {
            y.set(i, axis[idx % axis.len()].clone());
            idx /= axis.len();
        }
        if close(&y) && contains(e, &y, tol)?.is_in() {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

/// Adds a bottom and a top to a random order on up to `max - 2` points and
/// retries until the result is a lattice.
pub fn random_lattice<R: Rng + ?Sized>(rng: &mut R, max: usize) -> FinitePoset {
    loop {
        let n = rng.gen_range(1..=max.max(1));
        let mut leq: Vec<Vec<bool>> = (0..n)
            .map(|a| (0..n).map(|b| a == b || a == 0 || b == n - 1 || (0 < a && a < b && rng.gen_bool(0.4))).collect())
            .collect();
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if leq[a][k] && leq[k][b] {
                        leq[a][b] = true;
                    }
                }
            }
        }
        let p = FinitePoset::from_leq(leq).expect("transitive closure of a reflexive antisymmetric relation");
        if p.is_lattice() {
            return p;
        }
    }
}

/// Points on a random rational path: distances are sums of consecutive gaps,
/// so the triangle inequality holds by construction.
pub fn random_path_metric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FiniteMetric {
    let gaps: Vec<Q> = (0..n).map(|_| qf(rng.gen_range(1..=4), 2)).collect();
    let pos: Vec<Q> = (0..n).map(|i| gaps[..i].iter().sum()).collect();
    FiniteMetric::new((0..n).map(|i| (0..n).map(|j| (&pos[i] - &pos[j]).abs()).collect()).collect())
        .expect("path distances form a metric")
}

/// Every metric on `1..=max` points whose distances come from `palette`,
/// labelled points, filtered by the triangle inequality.
pub fn palette_metrics(max: usize, palette: &[Q]) -> Vec<FiniteMetric> {
    let mut out = Vec::new();
    for n in 1..=max {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let total = palette.len().pow(pairs.len() as u32);
        for code in 0..total {
            let mut d = vec![vec![Q::from_integer(0.into()); n]; n];
            for (k, &(i, j)) in pairs.iter().enumerate() {
                let v = palette[code / palette.len().pow(k as u32) % palette.len()].clone();
                d[i][j] = v.clone();
                d[j][i] = v;
            }
            if let Ok(m) = FiniteMetric::new(d) {
                out.push(m);
            }
        }
    }
    out
}

/// Some path from `init` meets `bad`, by breadth-first path extension.
pub fn reaches_by_paths(t: &TransitionSystem, init: Mask, bad: Mask) -> bool {
    let n = t.states();
    let mut paths: Vec<Vec<usize>> = (0..n).filter(|&s| init >> s & 1 == 1).map(|s| vec![s]).collect();
    for _ in 0..=n {
        if paths.iter().any(|p| bad >> p[p.len() - 1] & 1 == 1) {
            return true;
        }
        paths = paths
            .iter()
            .flat_map(|p| {
                let last = p[p.len() - 1];
                t.rel().iter().filter(move |&&(a, _)| a == last).map(move |&(_, b)| {
                    let mut q = p.clone();
                    q.push(b);
                    q
                })
            })
            .collect();
        paths.sort_by_key(|p| p[p.len() - 1]);
        paths.dedup_by(|a, b| a.last() == b.last());
    }
    false
}
