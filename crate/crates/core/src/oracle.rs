//! Brute-force reference implementations. Everything here works from the
//! definitions alone (string sets, explicit subsets) so the closed forms in
//! the other modules can be checked against them. Oracles answer exactly or
//! fail loudly on budget; they never approximate.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::lattice::{norm, SimplexIter};
use crate::strings::GString;
use crate::transform::l1_diff;

/// Explicit limits for the exhaustive searches.
#[derive(Debug, Clone, Copy)]
pub struct OracleBudget {
    pub max_states: u64,
    pub max_depth: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_states: 1_000_000,
            max_depth: 6,
        }
    }
}

struct Meter {
    used: u64,
    cap: u64,
    what: &'static str,
}

impl Meter {
    fn new(budget: &OracleBudget, what: &'static str) -> Self {
        Meter {
            used: 0,
            cap: budget.max_states,
            what,
        }
    }

    fn spend(&mut self, amount: u64) -> Result<()> {
        self.used += amount;
        if self.used > self.cap {
            return Err(Error::BudgetExceeded(format!(
                "{}: {} states over cap {}",
                self.what, self.used, self.cap
            )));
        }
        Ok(())
    }
}

fn expand_level(level: &BTreeSet<GString>, meter: &mut Meter) -> Result<BTreeSet<GString>> {
    let mut next = BTreeSet::new();
    for s in level {
        for i in 0..=s.len() - s.k() {
            meter.spend(1)?;
            next.insert(s.tandem_duplicate(i).expect("index in range"));
        }
    }
    Ok(next)
}

/// Least t with intersecting t-descendant sets, found by growing both sets
/// level by level.
pub fn bfs_distance(y1: &GString, y2: &GString, budget: &OracleBudget) -> Result<u64> {
    if y1.len() != y2.len() {
        return Err(Error::LengthMismatch);
    }
    if !y1.same_cone(y2)? {
        return Err(Error::DifferentCones);
    }
    let mut meter = Meter::new(budget, "bfs_distance");
    let mut a: BTreeSet<GString> = BTreeSet::from([y1.clone()]);
    let mut b: BTreeSet<GString> = BTreeSet::from([y2.clone()]);
    for t in 0..=budget.max_depth {
        if a.intersection(&b).next().is_some() {
            return Ok(t);
        }
        a = expand_level(&a, &mut meter)?;
        b = expand_level(&b, &mut meter)?;
    }
    Err(Error::BudgetExceeded(format!(
        "bfs_distance: no meet within depth {}",
        budget.max_depth
    )))
}

/// |intersection of D^t(x_i)| by direct set intersection.
pub fn exhaustive_uncertainty(
    strings: &[GString],
    t: u64,
    budget: &OracleBudget,
) -> Result<BigUint> {
    if strings.is_empty() {
        return Err(Error::InvalidInput("empty string list".into()));
    }
    let mut meter = Meter::new(budget, "exhaustive_uncertainty");
    let mut common: Option<BTreeSet<GString>> = None;
    for x in strings {
        let mut level: BTreeSet<GString> = BTreeSet::from([x.clone()]);
        for _ in 0..t {
            level = expand_level(&level, &mut meter)?;
        }
        common = Some(match common {
            None => level,
            Some(acc) => acc.intersection(&level).cloned().collect(),
        });
    }
    Ok(BigUint::from(common.unwrap().len() as u64))
}

/// All t-fold ancestors of y, found by deleting square blocks (the exact
/// inverse of a tandem duplication).
pub fn ancestors(y: &GString, t: u64, budget: &OracleBudget) -> Result<BTreeSet<GString>> {
    let mut meter = Meter::new(budget, "ancestors");
    let mut level: BTreeSet<GString> = BTreeSet::from([y.clone()]);
    for _ in 0..t {
        let mut next = BTreeSet::new();
        for s in &level {
            let k = s.k();
            if s.len() < 2 * k {
                continue;
            }
            let sym = s.symbols();
            for j in 0..=s.len() - 2 * k {
                meter.spend(1)?;
                if sym[j..j + k] == sym[j + k..j + 2 * k] {
                    let mut reduced = sym.to_vec();
                    reduced.drain(j..j + k);
                    next.insert(GString::new(reduced, s.q(), s.k()).expect("valid ancestor"));
                }
            }
        }
        level = next;
    }
    Ok(level)
}

/// Every z at t duplication steps below all the given reads: ancestors of the
/// first read, forward-verified against each other read.
pub fn common_ancestors(reads: &[GString], t: u64, budget: &OracleBudget) -> Result<Vec<GString>> {
    if reads.is_empty() {
        return Err(Error::InvalidInput("empty read list".into()));
    }
    let candidates = ancestors(&reads[0], t, budget)?;
    let mut out = Vec::new();
    for z in candidates {
        let desc = z.descendants(t);
        if reads.iter().all(|y| desc.contains(y)) {
            out.push(z);
        }
    }
    Ok(out)
}

fn simplex_points(w: u64, r: u64, meter: &mut Meter) -> Result<Vec<Vec<u64>>> {
    let mut pts = Vec::new();
    for p in SimplexIter::new(w, r) {
        meter.spend(1)?;
        pts.push(p);
    }
    Ok(pts)
}

/// mu by scanning every u in Delta^w_{r+s}, no shape restriction.
pub fn exhaustive_mu(w: u64, r: u64, s: u64, budget: &OracleBudget) -> Result<BigUint> {
    let mut meter = Meter::new(budget, "exhaustive_mu");
    let lower = simplex_points(w, r, &mut meter)?;
    let mut best = 0u64;
    for u in SimplexIter::new(w, r + s) {
        meter.spend(lower.len() as u64)?;
        let count = lower
            .iter()
            .filter(|v| v.iter().zip(u.iter()).all(|(&a, &b)| a <= b))
            .count() as u64;
        best = best.max(count);
    }
    Ok(BigUint::from(best))
}

/// sigma by branch-and-bound over explicit m-subsets of Delta^w_r. The
/// supremum excess never exceeds w*r, so that bound seeds the search; partial
/// suprema only grow, which justifies pruning at the current best.
pub fn exhaustive_sigma(m: u64, w: u64, r: u64, budget: &OracleBudget) -> Result<u64> {
    let mut meter = Meter::new(budget, "exhaustive_sigma");
    let points = simplex_points(w, r, &mut meter)?;
    if m < 2 || m > points.len() as u64 {
        return Err(Error::MOutOfRange {
            m,
            size: points.len().to_string(),
        });
    }
    let dim = points[0].len();
    struct Ctx<'a> {
        points: &'a [Vec<u64>],
        m: u64,
        r: u64,
        best: u64,
        meter: &'a mut Meter,
    }
    fn rec(ctx: &mut Ctx, start: usize, chosen: u64, sup: &[u64]) -> Result<()> {
        if chosen == ctx.m {
            ctx.best = ctx.best.min(norm(sup) - ctx.r);
            return Ok(());
        }
        let left = (ctx.m - chosen) as usize;
        for i in start..ctx.points.len() {
            if ctx.points.len() - i < left {
                break;
            }
            ctx.meter.spend(1)?;
            let new_sup: Vec<u64> = sup
                .iter()
                .zip(ctx.points[i].iter())
                .map(|(&a, &b)| a.max(b))
                .collect();
            if norm(&new_sup) - ctx.r >= ctx.best {
                continue;
            }
            rec(ctx, i + 1, chosen + 1, &new_sup)?;
        }
        Ok(())
    }
    let mut ctx = Ctx {
        points: &points,
        m,
        r,
        best: w * r,
        meter: &mut meter,
    };
    let sup = vec![0u64; dim];
    rec(&mut ctx, 0, 0, &sup)?;
    Ok(ctx.best)
}

/// Number of v above all the u_i at shell t of u_1, counted by scanning
/// Delta^w_{r+t}.
fn shell_intersection_count(us: &[&Vec<u64>], t: u64, meter: &mut Meter) -> Result<u64> {
    let dim = us[0].len();
    let w = (dim - 1) as u64;
    let r = norm(us[0]);
    let mut count = 0u64;
    for v in SimplexIter::new(w, r + t) {
        meter.spend(1)?;
        if us
            .iter()
            .all(|u| u.iter().zip(v.iter()).all(|(&a, &b)| a <= b))
        {
            count += 1;
        }
    }
    Ok(count)
}

fn max_shell_over_subsets(
    t: u64,
    m: u64,
    w: u64,
    r: u64,
    min_l1: u64,
    budget: &OracleBudget,
) -> Result<BigUint> {
    let mut meter = Meter::new(budget, "exhaustive_nbar");
    let points = simplex_points(w, r, &mut meter)?;
    if m > points.len() as u64 {
        return Ok(BigUint::from(0u32));
    }
    let mut best = 0u64;
    let mut chosen: Vec<usize> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        points: &[Vec<u64>],
        m: u64,
        t: u64,
        min_l1: u64,
        start: usize,
        chosen: &mut Vec<usize>,
        best: &mut u64,
        meter: &mut Meter,
    ) -> Result<()> {
        if chosen.len() as u64 == m {
            let us: Vec<&Vec<u64>> = chosen.iter().map(|&i| &points[i]).collect();
            let got = shell_intersection_count(&us, t, meter)?;
            *best = (*best).max(got);
            return Ok(());
        }
        let left = m as usize - chosen.len();
        for i in start..points.len() {
            if points.len() - i < left {
                break;
            }
            meter.spend(1)?;
            if min_l1 > 0
                && !chosen
                    .iter()
                    .all(|&j| l1_diff(&points[j], &points[i]) >= min_l1)
            {
                continue;
            }
            chosen.push(i);
            rec(points, m, t, min_l1, i + 1, chosen, best, meter)?;
            chosen.pop();
        }
        Ok(())
    }
    rec(&points, m, t, min_l1, 0, &mut chosen, &mut best, &mut meter)?;
    Ok(BigUint::from(best))
}

/// Max over m-subsets of Delta^w_r of the common shell size, straight from
/// the definition.
pub fn exhaustive_nbar(t: u64, m: u64, w: u64, r: u64, budget: &OracleBudget) -> Result<BigUint> {
    if m == 1 {
        let mut meter = Meter::new(budget, "exhaustive_nbar");
        let points = simplex_points(w, r, &mut meter)?;
        let first = &points[0];
        return Ok(BigUint::from(shell_intersection_count(
            &[first],
            t,
            &mut meter,
        )?));
    }
    max_shell_over_subsets(t, m, w, r, 0, budget)
}

/// Distance-d variant: the subsets are additionally pairwise d1 >= d.
pub fn exhaustive_nbar_d(
    t: u64,
    m: u64,
    w: u64,
    r: u64,
    d: u64,
    budget: &OracleBudget,
) -> Result<BigUint> {
    if m == 1 {
        return exhaustive_nbar(t, m, w, r, budget);
    }
    max_shell_over_subsets(t, m, w, r, 2 * d, budget)
}

/// mu_d by scanning every u and every feasible packing.
pub fn exhaustive_mu_d(w: u64, r: u64, s: u64, d: u64, budget: &OracleBudget) -> Result<BigUint> {
    let mut meter = Meter::new(budget, "exhaustive_mu_d");
    let lower = simplex_points(w, r, &mut meter)?;
    let min_l1 = 2 * d;
    let mut best = 0u64;
    for u in SimplexIter::new(w, r + s) {
        meter.spend(lower.len() as u64)?;
        let inside: Vec<&Vec<u64>> = lower
            .iter()
            .filter(|v| v.iter().zip(u.iter()).all(|(&a, &b)| a <= b))
            .collect();
        let got = max_packing_refs(&inside, min_l1, &mut meter)?;
        best = best.max(got);
    }
    Ok(BigUint::from(best))
}

fn max_packing_refs(points: &[&Vec<u64>], min_l1: u64, meter: &mut Meter) -> Result<u64> {
    fn rec(
        points: &[&Vec<u64>],
        min_l1: u64,
        start: usize,
        chosen: &mut Vec<usize>,
        best: &mut u64,
        meter: &mut Meter,
    ) -> Result<()> {
        *best = (*best).max(chosen.len() as u64);
        for i in start..points.len() {
            if chosen.len() as u64 + (points.len() - i) as u64 <= *best {
                break;
            }
            meter.spend(1)?;
            if chosen
                .iter()
                .all(|&j| l1_diff(points[j], points[i]) >= min_l1)
            {
                chosen.push(i);
                rec(points, min_l1, i + 1, chosen, best, meter)?;
                chosen.pop();
            }
        }
        Ok(())
    }
    let mut best = 0u64;
    let mut chosen = Vec::new();
    rec(points, min_l1, 0, &mut chosen, &mut best, meter)?;
    Ok(best)
}

/// Largest pairwise-d1-spaced subset of Delta^w_r, by search.
pub fn exhaustive_packing(w: u64, r: u64, d: u64, budget: &OracleBudget) -> Result<u64> {
    let mut meter = Meter::new(budget, "exhaustive_packing");
    let points = simplex_points(w, r, &mut meter)?;
    let refs: Vec<&Vec<u64>> = points.iter().collect();
    max_packing_refs(&refs, 2 * d, &mut meter)
}

/// sigma_d by branch-and-bound over explicit d-spaced m-subsets.
pub fn exhaustive_sigma_d(m: u64, w: u64, r: u64, d: u64, budget: &OracleBudget) -> Result<u64> {
    let mut meter = Meter::new(budget, "exhaustive_sigma_d");
    let points = simplex_points(w, r, &mut meter)?;
    if m < 2 {
        return Err(Error::MOutOfRange {
            m,
            size: points.len().to_string(),
        });
    }
    let min_l1 = 2 * d;
    let dim = points[0].len();
    struct Ctx<'a> {
        points: &'a [Vec<u64>],
        m: u64,
        r: u64,
        min_l1: u64,
        best: Option<u64>,
        meter: &'a mut Meter,
    }
    fn rec(ctx: &mut Ctx, start: usize, chosen: &mut Vec<usize>, sup: &[u64]) -> Result<()> {
        if chosen.len() as u64 == ctx.m {
            let excess = norm(sup) - ctx.r;
            ctx.best = Some(ctx.best.map_or(excess, |b| b.min(excess)));
            return Ok(());
        }
        let left = ctx.m as usize - chosen.len();
        for i in start..ctx.points.len() {
            if ctx.points.len() - i < left {
                break;
            }
            ctx.meter.spend(1)?;
            if !chosen
                .iter()
                .all(|&j| l1_diff(&ctx.points[j], &ctx.points[i]) >= ctx.min_l1)
            {
                continue;
            }
            let new_sup: Vec<u64> = sup
                .iter()
                .zip(ctx.points[i].iter())
                .map(|(&a, &b)| a.max(b))
                .collect();
            // Once any subset is complete, only strictly better suprema help;
            // before that every branch must stay open to decide feasibility.
            if let Some(b) = ctx.best {
                if norm(&new_sup) - ctx.r >= b {
                    continue;
                }
            }
            chosen.push(i);
            rec(ctx, i + 1, chosen, &new_sup)?;
            chosen.pop();
        }
        Ok(())
    }
    let mut ctx = Ctx {
        points: &points,
        m,
        r,
        min_l1,
        best: None,
        meter: &mut meter,
    };
    let mut chosen = Vec::new();
    let sup = vec![0u64; dim];
    rec(&mut ctx, 0, &mut chosen, &sup)?;
    ctx.best.ok_or(Error::NoFeasibleSubset { m, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice;

    fn gs(text: &str, q: u32, k: usize) -> GString {
        GString::parse(text, q, k).unwrap()
    }

    #[test]
    fn bfs_distance_basics() {
        let budget = OracleBudget::default();
        let y1 = gs("10101012122222222", 3, 2);
        let y2 = gs("10101010122222222", 3, 2);
        assert_eq!(bfs_distance(&y1, &y1, &budget).unwrap(), 0);
        assert_eq!(bfs_distance(&y1, &y2, &budget).unwrap(), 1);
    }

    #[test]
    fn bfs_agrees_with_isometry_on_level_two() {
        let budget = OracleBudget::default();
        let root = gs("10122", 3, 2);
        let level: Vec<GString> = root.descendants(2).into_iter().collect();
        for a in &level {
            for b in &level {
                let expected = crate::transform::duplication_distance(a, b).unwrap();
                assert_eq!(bfs_distance(a, b, &budget).unwrap(), expected);
            }
        }
    }

    #[test]
    fn exhaustive_uncertainty_cases() {
        let budget = OracleBudget::default();
        let x = gs("10122", 3, 2);
        // Single string: |D^t(x)| matches the closed form C(w+t, w).
        let (w, _) = crate::transform::stats(&x);
        let count = exhaustive_uncertainty(std::slice::from_ref(&x), 2, &budget).unwrap();
        assert_eq!(count, lattice::binom(w + 2, w));
        // Disjoint cones intersect nowhere.
        let z = gs("21011", 3, 2);
        let none = exhaustive_uncertainty(&[x, z], 2, &budget).unwrap();
        assert_eq!(none, BigUint::from(0u32));
    }

    #[test]
    fn ancestors_inverts_duplication() {
        let budget = OracleBudget::default();
        let x = gs("10122", 3, 2);
        for y in x.descendants(2) {
            let back = ancestors(&y, 2, &budget).unwrap();
            assert!(back.contains(&x));
            for z in back {
                assert!(z.descendants(2).contains(&y));
            }
        }
    }

    #[test]
    fn exhaustive_mu_named_values() {
        let budget = OracleBudget::default();
        assert_eq!(
            exhaustive_mu(2, 3, 1, &budget).unwrap(),
            BigUint::from(3u32)
        );
        // Adjudication point: the search gives 5, matching the s=2 closed form.
        assert_eq!(
            exhaustive_mu(2, 3, 2, &budget).unwrap(),
            BigUint::from(5u32)
        );
        assert_eq!(
            exhaustive_mu(2, 3, 2, &budget).unwrap(),
            lattice::mu2_closed_form(2, 3)
        );
    }

    #[test]
    fn exhaustive_sigma_small_values() {
        let budget = OracleBudget::default();
        assert_eq!(exhaustive_sigma(2, 1, 1, &budget).unwrap(), 1);
        assert_eq!(exhaustive_sigma(4, 2, 3, &budget).unwrap(), 2);
    }

    #[test]
    fn exhaustive_sigma_d_matches_worked_example() {
        let budget = OracleBudget::default();
        assert_eq!(exhaustive_sigma_d(3, 2, 2, 2, &budget).unwrap(), 4);
        assert!(matches!(
            exhaustive_sigma_d(4, 1, 2, 2, &budget),
            Err(Error::NoFeasibleSubset { .. })
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let tiny = OracleBudget {
            max_states: 10,
            max_depth: 6,
        };
        let err = exhaustive_mu(4, 4, 4, &tiny).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded(_)));
    }
}
