//! Simplex combinatorics in N^{w+1}: lower-bounds sets, the mu/sigma duality,
//! intersection counts, constant-weight code sizes and their distance-d
//! variants. All counts are exact big integers.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::transform::l1_diff;

/// Hard cap for the search-based operations; beyond it they refuse rather
/// than approximate.
const SEARCH_POINT_LIMIT: usize = 200_000;
const CONSTANT_WEIGHT_NU_LIMIT: u64 = 20;

pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

/// |Delta^w_r| = C(r+w, r).
pub fn simplex_size(w: u64, r: u64) -> BigUint {
    binom(r + w, r)
}

/// Lexicographically ascending iterator over Delta^w_r.
pub struct SimplexIter {
    next: Option<Vec<u64>>,
    total: u64,
}

impl SimplexIter {
    pub fn new(w: u64, r: u64) -> Self {
        let dim = (w + 1) as usize;
        let mut first = vec![0u64; dim];
        first[dim - 1] = r;
        SimplexIter {
            next: Some(first),
            total: r,
        }
    }
}

impl Iterator for SimplexIter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let cur = self.next.take()?;
        let dim = cur.len();
        // Advance: bump the rightmost position that still has mass to its
        // right, then push the leftover mass all the way right.
        let mut suffix = 0u64;
        let mut pivot = None;
        for j in (0..dim - 1).rev() {
            suffix += cur[j + 1];
            if suffix > 0 {
                pivot = Some((j, suffix));
                break;
            }
        }
        if let Some((j, suffix)) = pivot {
            let mut nxt = cur.clone();
            nxt[j] += 1;
            for v in nxt.iter_mut().skip(j + 1) {
                *v = 0;
            }
            nxt[dim - 1] = suffix - 1;
            self.next = Some(nxt);
        } else {
            debug_assert_eq!(cur[0], self.total);
        }
        Some(cur)
    }
}

pub(crate) fn norm(v: &[u64]) -> u64 {
    v.iter().sum()
}

pub(crate) fn leq(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b.iter()).all(|(&x, &y)| x <= y)
}

pub(crate) fn sup(vs: &[&[u64]]) -> Vec<u64> {
    let dim = vs[0].len();
    (0..dim)
        .map(|i| vs.iter().map(|v| v[i]).max().unwrap())
        .collect()
}

/// Enumerates A_r(u) = { v in Delta^w_r : v <= u } in ascending lexicographic
/// order, returning the list together with the number of search nodes visited.
pub fn lower_bounds_counted(u: &[u64], r: u64) -> Result<(Vec<Vec<u64>>, u64)> {
    let total = norm(u);
    if total < r {
        return Err(Error::NormBelowLevel {
            norm: total,
            level: r,
        });
    }
    let dim = u.len();
    // Suffix capacities let the search skip assignments that cannot reach r.
    let mut suffix_cap = vec![0u64; dim + 1];
    for i in (0..dim).rev() {
        suffix_cap[i] = suffix_cap[i + 1] + u[i];
    }
    let mut out = Vec::new();
    let mut cur = vec![0u64; dim];
    let mut nodes = 0u64;
    fn rec(
        u: &[u64],
        suffix_cap: &[u64],
        cur: &mut Vec<u64>,
        i: usize,
        remaining: u64,
        out: &mut Vec<Vec<u64>>,
        nodes: &mut u64,
    ) {
        *nodes += 1;
        let dim = u.len();
        if i == dim {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let tail_cap = suffix_cap[i + 1];
        let lo = remaining.saturating_sub(tail_cap);
        let hi = u[i].min(remaining);
        for a in lo..=hi {
            cur[i] = a;
            rec(u, suffix_cap, cur, i + 1, remaining - a, out, nodes);
        }
        cur[i] = 0;
    }
    rec(u, &suffix_cap, &mut cur, 0, r, &mut out, &mut nodes);
    Ok((out, nodes))
}

/// A_r(u) in ascending lexicographic order.
pub fn lower_bounds(u: &[u64], r: u64) -> Result<Vec<Vec<u64>>> {
    lower_bounds_counted(u, r).map(|(v, _)| v)
}

/// |A_r(u)| by dynamic programming over per-coordinate capacities.
pub fn count_lower_bounds(u: &[u64], r: u64) -> BigUint {
    let r = r as usize;
    let mut dp = vec![BigUint::zero(); r + 1];
    dp[0] = BigUint::one();
    for &cap in u {
        let mut next = vec![BigUint::zero(); r + 1];
        // Prefix sums give the bounded-coordinate convolution in O(r).
        let mut prefix = vec![BigUint::zero(); r + 2];
        for rho in 0..=r {
            prefix[rho + 1] = &prefix[rho] + &dp[rho];
        }
        for (rho, slot) in next.iter_mut().enumerate() {
            let lo = rho.saturating_sub(cap as usize);
            *slot = &prefix[rho + 1] - &prefix[lo];
        }
        dp = next;
    }
    dp[r].clone()
}

/// The coordinate-balanced representative of Delta^w_n; all maximizers of the
/// lower-bounds count can be taken of this shape.
fn spread_vector(w: u64, total: u64) -> Vec<u64> {
    let dim = (w + 1) as usize;
    let base = total / dim as u64;
    let extra = (total % dim as u64) as usize;
    let mut v = vec![base; dim];
    for slot in v.iter_mut().take(extra) {
        *slot += 1;
    }
    v
}

/// Maximal lower-bounds-set size mu(w, r, s) over u in Delta^w_{r+s}.
pub fn mu(w: u64, r: u64, s: u64) -> BigUint {
    count_lower_bounds(&spread_vector(w, r + s), r)
}

/// Closed form for mu(w, r, 2), kept for cross-checking against the search.
pub fn mu2_closed_form(w: u64, r: u64) -> BigUint {
    if r >= 2 * w {
        binom(w + 2, 2)
    } else if r + 1 >= w {
        binom(w + 1, 2) + BigUint::from(r + 1 - w)
    } else {
        binom(r + 2, 2)
    }
}

/// Minimum supremum height sigma(m, w, r) over m distinct points of
/// Delta^w_r, computed through the duality with mu.
pub fn sigma(m: u64, w: u64, r: u64) -> Result<u64> {
    let size = simplex_size(w, r);
    if m < 2 || BigUint::from(m) > size {
        return Err(Error::MOutOfRange {
            m,
            size: size.to_string(),
        });
    }
    let target = BigUint::from(m);
    let cap = w * r;
    for s in 0..=cap {
        if mu(w, r, s) >= target {
            return Ok(s);
        }
    }
    Ok(cap)
}

/// N-bar_t(m, w, r) = C(w + t - sigma, w), zero once sigma exceeds t or no
/// m-subset exists at all.
pub fn nbar(t: u64, m: u64, w: u64, r: u64) -> BigUint {
    if m == 0 {
        return BigUint::zero();
    }
    if m == 1 {
        return binom(w + t, w);
    }
    if BigUint::from(m) > simplex_size(w, r) {
        return BigUint::zero();
    }
    let s = sigma(m, w, r).expect("m validated in range");
    if s > t {
        BigUint::zero()
    } else {
        binom(w + t - s, w)
    }
}

/// Size of the common upward t-shell of the given equal-norm vectors.
pub fn intersection_size(t: u64, us: &[Vec<u64>]) -> Result<BigUint> {
    if us.is_empty() {
        return Err(Error::InvalidInput("empty vector list".into()));
    }
    let dim = us[0].len();
    let r = norm(&us[0]);
    for u in us {
        if u.len() != dim {
            return Err(Error::DimensionMismatch(dim, u.len()));
        }
        let nu = norm(u);
        if nu != r {
            return Err(Error::NormMismatch(r, nu));
        }
    }
    let refs: Vec<&[u64]> = us.iter().map(|u| u.as_slice()).collect();
    let joined = sup(&refs);
    let excess = norm(&joined) - r;
    let w = (dim - 1) as u64;
    if excess > t {
        Ok(BigUint::zero())
    } else {
        Ok(binom(w + t - excess, w))
    }
}

/// Largest subset of `points` with pairwise 1-norm distance >= min_l1.
/// Branch and bound with lazy distance checks; `target` short-circuits once
/// that size is reached.
pub(crate) fn max_l1_packing(points: &[Vec<u64>], min_l1: u64, target: Option<u64>) -> Result<u64> {
    if points.len() > SEARCH_POINT_LIMIT {
        return Err(Error::InstanceTooLarge(format!(
            "packing search over {} points",
            points.len()
        )));
    }
    if min_l1 == 0 {
        return Ok(points.len() as u64);
    }
    fn rec<'a>(
        points: &'a [Vec<u64>],
        min_l1: u64,
        start: usize,
        chosen: &mut Vec<&'a [u64]>,
        best: &mut u64,
        target: Option<u64>,
    ) -> bool {
        let n = points.len();
        if chosen.len() as u64 > *best {
            *best = chosen.len() as u64;
            if let Some(t) = target {
                if *best >= t {
                    return true;
                }
            }
        }
        for i in start..n {
            if chosen.len() as u64 + (n - i) as u64 <= *best {
                break;
            }
            if chosen.iter().all(|c| l1_diff(c, &points[i]) >= min_l1) {
                chosen.push(&points[i]);
                if rec(points, min_l1, i + 1, chosen, best, target) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut best = 0u64;
    let mut chosen: Vec<&[u64]> = Vec::new();
    rec(points, min_l1, 0, &mut chosen, &mut best, target);
    Ok(best)
}

/// Exact A(nu, 2delta, omega): the largest binary constant-weight code of
/// length nu, weight omega and minimum Hamming distance two_delta.
pub fn constant_weight_bound(nu: u64, two_delta: u64, omega: u64) -> Result<BigUint> {
    if nu > CONSTANT_WEIGHT_NU_LIMIT {
        return Err(Error::InstanceTooLarge(format!(
            "constant-weight search needs nu <= {CONSTANT_WEIGHT_NU_LIMIT} (got {nu})"
        )));
    }
    if omega > nu {
        return Ok(BigUint::zero());
    }
    if omega == 0 || omega == nu {
        return Ok(BigUint::one());
    }
    // Distance two is no constraint among distinct equal-weight words.
    if two_delta <= 2 {
        return Ok(binom(nu, omega));
    }
    // Two distinct weight-omega words are at distance at most 2*omega and at
    // most 2*(nu-omega).
    if two_delta > (2 * omega).min(2 * (nu - omega)) {
        return Ok(BigUint::one());
    }
    let words: Vec<u32> = combinations_as_masks(nu as usize, omega as usize);
    let min_dist = two_delta;
    fn rec(words: &[u32], min_dist: u64, start: usize, chosen: &mut Vec<u32>, best: &mut u64) {
        let n = words.len();
        *best = (*best).max(chosen.len() as u64);
        for i in start..n {
            if chosen.len() as u64 + (n - i) as u64 <= *best {
                break;
            }
            if chosen
                .iter()
                .all(|&c| u64::from((c ^ words[i]).count_ones()) >= min_dist)
            {
                chosen.push(words[i]);
                rec(words, min_dist, i + 1, chosen, best);
                chosen.pop();
            }
        }
    }
    // Coordinate symmetry: some optimal code contains the lexicographically
    // first word, so root the search there.
    let mut best = 1u64;
    let mut chosen = vec![words[0]];
    rec(&words, min_dist, 1, &mut chosen, &mut best);
    Ok(BigUint::from(best))
}

fn combinations_as_masks(nu: usize, omega: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..omega).collect();
    loop {
        out.push(idx.iter().fold(0u32, |acc, &b| acc | (1 << b)));
        // next combination in lex order
        let mut i = omega;
        while i > 0 {
            i -= 1;
            if idx[i] != i + nu - omega {
                idx[i] += 1;
                for j in i + 1..omega {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return out;
            }
        }
    }
}

/// Closed forms for A(nu, 2d, omega) that stay exact at any scale, used by
/// the asymptotic-identity paths. Returns None when no closed case applies.
pub fn constant_weight_closed(nu: u64, two_delta: u64, omega: u64) -> Option<BigUint> {
    if omega > nu {
        return Some(BigUint::zero());
    }
    if two_delta <= 2 {
        return Some(binom(nu, omega));
    }
    let d = two_delta.div_ceil(2);
    // Complementing every word preserves distances and flips the weight.
    let eff = omega.min(nu - omega);
    if eff < d {
        return Some(BigUint::one());
    }
    if eff == d {
        // Distance 2*eff forces pairwise disjoint supports.
        return Some(BigUint::from(nu / d));
    }
    None
}

/// The u-shapes licensed for the distance-d search: either a 0/1 vector or an
/// everywhere-positive vector, enumerated up to coordinate permutation.
fn ecc_shape_representatives(w: u64, total: u64) -> Result<Vec<Vec<u64>>> {
    const REP_LIMIT: usize = 100_000;
    let dim = (w + 1) as usize;
    let mut reps = Vec::new();
    if total <= dim as u64 {
        let mut v = vec![0u64; dim];
        for slot in v.iter_mut().take(total as usize) {
            *slot = 1;
        }
        reps.push(v);
    }
    if total >= dim as u64 {
        // Partitions of `total` into exactly dim parts, each >= 1.
        let mut part = vec![0u64; dim];
        fn rec(
            part: &mut Vec<u64>,
            i: usize,
            remaining: u64,
            max: u64,
            reps: &mut Vec<Vec<u64>>,
        ) -> bool {
            if reps.len() > REP_LIMIT {
                return false;
            }
            let dim = part.len();
            let slots_left = (dim - i) as u64;
            if i == dim {
                if remaining == 0 {
                    reps.push(part.clone());
                }
                return true;
            }
            let hi = max.min(remaining - (slots_left - 1));
            let lo = remaining.div_ceil(slots_left);
            for v in (lo..=hi).rev() {
                part[i] = v;
                if !rec(part, i + 1, remaining - v, v, reps) {
                    return false;
                }
            }
            part[i] = 0;
            true
        }
        if !rec(&mut part, 0, total, total, &mut reps) {
            return Err(Error::InstanceTooLarge(format!(
                "more than {REP_LIMIT} balanced shapes for w={w}, norm={total}"
            )));
        }
    }
    reps.sort();
    reps.dedup();
    Ok(reps)
}

fn indicator_vector(dim: usize, ones: usize) -> Vec<u64> {
    let mut v = vec![0u64; dim];
    for slot in v.iter_mut().take(ones) {
        *slot = 1;
    }
    v
}

/// mu(w, r, s, d): the largest subset of some A_r(u), u in Delta^w_{r+s},
/// with pairwise d1 distance at least d.
pub fn mu_d(w: u64, r: u64, s: u64, d: u64) -> Result<BigUint> {
    if d <= 1 {
        return Ok(mu(w, r, s));
    }
    if s == 0 {
        return Ok(BigUint::one());
    }
    if r + s <= w + 1 {
        // Only the 0/1 shape is in play, and its lower set is isometric (at
        // doubled scale) to binary weight-s words of length r+s.
        if let Some(v) = constant_weight_closed(r + s, 2 * d, s) {
            return Ok(v);
        }
        if r + s <= CONSTANT_WEIGHT_NU_LIMIT {
            return constant_weight_bound(r + s, 2 * d, s);
        }
        let u = indicator_vector((w + 1) as usize, (r + s) as usize);
        let (points, _) = lower_bounds_counted(&u, r)?;
        return max_l1_packing(&points, 2 * d, None).map(BigUint::from);
    }
    let mut best = BigUint::zero();
    for u in ecc_shape_representatives(w, r + s)? {
        let (points, _) = lower_bounds_counted(&u, r)?;
        let got = max_l1_packing(&points, 2 * d, None)?;
        let got = BigUint::from(got);
        if got > best {
            best = got;
        }
    }
    Ok(best)
}

/// Decides mu_d(w, r, s, d) >= m without computing the full maximum.
fn mu_d_at_least(w: u64, r: u64, s: u64, d: u64, m: u64) -> Result<bool> {
    if d <= 1 {
        return Ok(mu(w, r, s) >= BigUint::from(m));
    }
    if s == 0 {
        return Ok(m <= 1);
    }
    if r + s <= w + 1 {
        if let Some(v) = constant_weight_closed(r + s, 2 * d, s) {
            return Ok(v >= BigUint::from(m));
        }
        let u = indicator_vector((w + 1) as usize, (r + s) as usize);
        let (points, _) = lower_bounds_counted(&u, r)?;
        return Ok(max_l1_packing(&points, 2 * d, Some(m))? >= m);
    }
    for u in ecc_shape_representatives(w, r + s)? {
        let (points, _) = lower_bounds_counted(&u, r)?;
        if max_l1_packing(&points, 2 * d, Some(m))? >= m {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Largest subset of all of Delta^w_r with pairwise d1 distance >= d.
pub fn simplex_packing_number(w: u64, r: u64, d: u64) -> Result<u64> {
    if d <= 1 {
        let size = simplex_size(w, r);
        return size
            .try_into()
            .map_err(|_| Error::InstanceTooLarge("simplex larger than u64".into()));
    }
    if r < d {
        // Any two points of the simplex are within d1 distance r.
        return Ok(1);
    }
    let points: Vec<Vec<u64>> = SimplexIter::new(w, r).collect();
    max_l1_packing(&points, 2 * d, None)
}

/// Cheap feasibility certificate for a d-spaced m-subset of Delta^w_r: the
/// corners r*e_i are pairwise at distance r, and the two-coordinate chain
/// j*d*e_1 + (r-j*d)*e_2 steps by d.
fn d_spaced_subset_exists(m: u64, w: u64, r: u64, d: u64) -> Result<bool> {
    if m <= 1 {
        return Ok(true);
    }
    if w == 0 || r < d {
        return Ok(false);
    }
    if m <= w + 1 || m <= r / d + 1 {
        return Ok(true);
    }
    simplex_packing_number(w, r, d).map(|p| p >= m)
}

/// sigma(m, w, r, d) through the distance-d duality.
pub fn sigma_d(m: u64, w: u64, r: u64, d: u64) -> Result<u64> {
    if d <= 1 {
        return sigma(m, w, r);
    }
    if m < 2 {
        return Err(Error::MOutOfRange {
            m,
            size: simplex_size(w, r).to_string(),
        });
    }
    if !d_spaced_subset_exists(m, w, r, d)? {
        return Err(Error::NoFeasibleSubset { m, d });
    }
    let cap = w * r;
    for s in 0..=cap {
        if mu_d_at_least(w, r, s, d, m)? {
            return Ok(s);
        }
    }
    Ok(cap)
}

/// Distance-d uncertainty kernel; zero when sigma_d exceeds t or no d-spaced
/// m-subset exists.
pub fn nbar_d(t: u64, m: u64, w: u64, r: u64, d: u64) -> Result<BigUint> {
    if d <= 1 {
        return Ok(nbar(t, m, w, r));
    }
    if m == 0 {
        return Ok(BigUint::zero());
    }
    if m == 1 {
        return Ok(binom(w + t, w));
    }
    match sigma_d(m, w, r, d) {
        Ok(s) if s <= t => Ok(binom(w + t - s, w)),
        Ok(_) => Ok(BigUint::zero()),
        Err(Error::NoFeasibleSubset { .. }) => Ok(BigUint::zero()),
        Err(e) => Err(e),
    }
}
