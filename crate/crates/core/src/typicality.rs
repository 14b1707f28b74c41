//! The typical set: membership windows on (w, r), the measure bound, the
//! expected excess level, window-wide uncertainty, and the finite-n exponent
//! identities. Window comparisons are done in exact integer arithmetic by
//! raising both sides to the fourth power, so no string is ever
//! misclassified by floating-point rounding.

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice;
use crate::strings::GString;
use crate::transform::stats;

/// At or below this length the window maximum is taken by exact per-point
/// search; above it the closed-form route (with regime validation) is used.
const DESK_WINDOW_LIMIT: u64 = 128;

/// The (w, r) acceptance windows for strings of length n over Z_q with
/// window length k. w is accepted iff |w - (q-1)(n-k)/q| < n^(3/4) and r iff
/// |r - (q-1)(n-k)/(q(q^k-1))| < 2 n^(3/4), both strictly.
#[derive(Debug, Clone)]
pub struct TypicalityWindow {
    n: u64,
    q: u64,
    k: u64,
    /// (q-1)(n-k), the common numerator of both centers.
    a: u64,
    /// q(q^k - 1), the denominator of the r-center.
    b: BigUint,
}

impl TypicalityWindow {
    pub fn new(n: u64, q: u64, k: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q as u32));
        }
        if k < 2 {
            return Err(Error::WindowTooSmall(k as usize));
        }
        if n < k {
            return Err(Error::StringTooShort {
                len: n as usize,
                k: k as usize,
            });
        }
        let a = (q - 1) * (n - k);
        let b = BigUint::from(q) * (BigUint::from(q).pow(k as u32) - BigUint::one());
        Ok(TypicalityWindow { n, q, k, a, b })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// |num/den| < mult * n^(3/4), decided exactly via fourth powers.
    fn scaled_below(&self, num: &BigInt, den: &BigUint, mult: u64) -> bool {
        let lhs = num.abs().to_biguint().expect("abs is nonnegative").pow(4);
        let rhs = BigUint::from(self.n).pow(3) * BigUint::from(mult).pow(4) * den.pow(4);
        lhs < rhs
    }

    pub fn contains_w(&self, w: u64) -> bool {
        let num = BigInt::from(w) * BigInt::from(self.q) - BigInt::from(self.a);
        self.scaled_below(&num, &BigUint::from(self.q), 1)
    }

    pub fn contains_r(&self, r: u64) -> bool {
        let num = BigInt::from(r) * BigInt::from(self.b.clone()) - BigInt::from(self.a);
        self.scaled_below(&num, &self.b, 2)
    }

    /// Largest x with x^4 < bound.
    fn strict_fourth_root(bound: &BigUint) -> BigUint {
        let root = bound.nth_root(4);
        if &root.pow(4) < bound {
            root
        } else if root.is_zero() {
            BigUint::zero()
        } else {
            root - BigUint::one()
        }
    }

    /// Inclusive integer range of accepted w, if any.
    pub fn w_bounds(&self) -> Option<(u64, u64)> {
        let q = BigUint::from(self.q);
        let bound = BigUint::from(self.n).pow(3) * q.pow(4);
        let x = Self::strict_fourth_root(&bound);
        let a = BigInt::from(self.a);
        let lo = (&a - BigInt::from(x.clone())).max(BigInt::zero());
        let hi = &a + BigInt::from(x);
        let lo = (&lo + BigInt::from(self.q) - 1) / BigInt::from(self.q);
        let hi = hi / BigInt::from(self.q);
        range_from_bigints(lo, hi)
    }

    /// Inclusive integer range of accepted r, if any.
    pub fn r_bounds(&self) -> Option<(u64, u64)> {
        let bound = BigUint::from(self.n).pow(3) * BigUint::from(16u32) * self.b.pow(4);
        let x = Self::strict_fourth_root(&bound);
        let a = BigInt::from(self.a);
        let b = BigInt::from(self.b.clone());
        let lo = (&a - BigInt::from(x.clone())).max(BigInt::zero());
        let hi = &a + BigInt::from(x);
        let lo = (&lo + &b - 1) / &b;
        let hi = hi / &b;
        range_from_bigints(lo, hi)
    }

    /// Whether some length-n string realizes the pair (w, r): a root of
    /// length n - kr must exist whose derivative tail has weight w and only
    /// zero runs shorter than k.
    pub fn realizable(&self, w: u64, r: u64) -> bool {
        let need = self.k.checked_mul(r).and_then(|kr| kr.checked_add(self.k));
        let l = match need {
            Some(total) if total <= self.n => self.n - self.k * r,
            _ => return false,
        };
        let tail_len = l - self.k;
        if w > tail_len {
            return false;
        }
        tail_len - w <= (self.k - 1) * (w + 1)
    }
}

fn range_from_bigints(lo: BigInt, hi: BigInt) -> Option<(u64, u64)> {
    if lo > hi {
        return None;
    }
    let lo = lo.to_u64()?;
    let hi = hi.to_u64()?;
    Some((lo, hi))
}

/// Strict typical-set membership of a string.
pub fn is_typical(x: &GString) -> bool {
    let window = TypicalityWindow::new(x.len() as u64, x.q() as u64, x.k() as u64)
        .expect("string invariants imply valid window parameters");
    let (w, r) = stats(x);
    window.contains_w(w) && window.contains_r(r)
}

/// The measure guarantee 1 - 4 e^(-sqrt(n)/2) for the typical set.
pub fn typical_fraction_bound(n: u64) -> f64 {
    1.0 - 4.0 * (-(n as f64).sqrt() / 2.0).exp()
}

/// Leading term of the expected excess level, (q-1)(n-k) / (q(q^k-1)).
pub fn expected_r(n: u64, q: u64, k: u64) -> Result<Ratio<BigInt>> {
    let window = TypicalityWindow::new(n, q, k)?;
    Ok(Ratio::new(
        BigInt::from(window.a),
        BigInt::from(window.b.clone()),
    ))
}

fn binom_at_least(top: u64, k_small: u64, m: u64) -> bool {
    // Compares C(top, k_small) >= m without building the full product.
    let target = BigUint::from(m);
    let mut acc = BigUint::one();
    for i in 0..k_small {
        acc = acc * BigUint::from(top - i) / BigUint::from(i + 1);
        if acc >= target {
            return true;
        }
    }
    acc >= target
}

/// Exact sigma(m, w, r) usable at any scale, via the small-s closed forms.
/// Returns RegimeViolation when no exact route applies.
fn sigma_closed(m: u64, w: u64, r: u64) -> Result<u64> {
    if m == 1 {
        return Ok(0);
    }
    if r == 0 || w == 0 {
        return Err(Error::MOutOfRange {
            m,
            size: "1".into(),
        });
    }
    let target = BigUint::from(m);
    if BigUint::one() >= target {
        return Ok(0);
    }
    if BigUint::from(1 + w.min(r)) >= target {
        return Ok(1);
    }
    if lattice::mu2_closed_form(w, r) >= target {
        return Ok(2);
    }
    if r == 1 {
        // mu(w, 1, s) = min(1+s, w+1): lower-bounds of u count its positive
        // coordinates.
        if m <= w + 1 {
            return Ok(m - 1);
        }
        return Err(Error::MOutOfRange {
            m,
            size: (w + 1).to_string(),
        });
    }
    for s in 3..=w.saturating_mul(r) {
        if r + s <= w + 1 {
            if binom_at_least(r + s, s, m) {
                return Ok(s);
            }
        } else {
            return Err(Error::RegimeViolation(format!(
                "sigma({m},{w},{r}) needs s={s} outside the closed-form range"
            )));
        }
    }
    Ok(w * r)
}

/// Exact sigma(m, w, r, d) at any scale for the cases with closed
/// constant-weight values; errors otherwise.
fn sigma_d_closed(m: u64, w: u64, r: u64, d: u64) -> Result<u64> {
    if d <= 1 {
        return sigma_closed(m, w, r);
    }
    if m == 1 {
        return Ok(0);
    }
    if r < d {
        return Err(Error::NoFeasibleSubset { m, d });
    }
    if m == 2 && w >= 1 {
        // The supremum of two equal-norm points exceeds the level by exactly
        // their d1 distance, and a pair at distance exactly d exists once
        // r >= d, so the minimum is d.
        return Ok(d);
    }
    // mu_d(w, r, s, d) = A(r+s, 2d, s) while r+s <= w+1: 1 below s = d, then
    // floor((r+d)/d) at s = d.
    if r + d > w + 1 {
        return Err(Error::RegimeViolation(format!(
            "sigma_d({m},{w},{r},{d}) outside the closed-form range"
        )));
    }
    if m <= (r + d) / d {
        return Ok(d);
    }
    Err(Error::RegimeViolation(format!(
        "sigma_d({m},{w},{r},{d}): no exact closed value above s = d"
    )))
}

fn window_pairs(window: &TypicalityWindow) -> Result<Vec<(u64, u64)>> {
    let (w_lo, w_hi) = window
        .w_bounds()
        .ok_or(Error::EmptyWindow { n: window.n })?;
    let (r_lo, r_hi) = window
        .r_bounds()
        .ok_or(Error::EmptyWindow { n: window.n })?;
    let mut pairs = Vec::new();
    for r in r_lo..=r_hi {
        for w in w_lo..=w_hi {
            if window.realizable(w, r) {
                pairs.push((w, r));
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::EmptyWindow { n: window.n });
    }
    Ok(pairs)
}

fn desk_uncertainty(window: &TypicalityWindow, t: u64, m: u64, d: Option<u64>) -> Result<BigUint> {
    let mut best = BigUint::zero();
    for (w, r) in window_pairs(window)? {
        let val = match d {
            None => lattice::nbar(t, m, w, r),
            Some(d) => lattice::nbar_d(t, m, w, r, d)?,
        };
        if val > best {
            best = val;
        }
    }
    Ok(best)
}

/// Realizability caps the w usable with a given r; returns the usable
/// interval inside the window, if any.
fn w_interval_for_r(window: &TypicalityWindow, r: u64) -> Option<(u64, u64)> {
    let (w_lo, w_hi) = window.w_bounds()?;
    let total = window.k.checked_mul(r)?.checked_add(window.k)?;
    if total > window.n {
        return None;
    }
    let l = window.n - window.k * r;
    let tail_len = l - window.k;
    let hi = w_hi.min(tail_len);
    // tail_len - w <= (k-1)(w+1)  <=>  w >= (tail_len - k + 1) / k
    let needed = tail_len.saturating_sub(window.k - 1);
    let lo = w_lo.max(needed.div_ceil(window.k));
    if lo > hi {
        None
    } else {
        Some((lo, hi))
    }
}

fn formula_uncertainty(
    window: &TypicalityWindow,
    t: u64,
    m: u64,
    d: Option<u64>,
) -> Result<BigUint> {
    let (r_lo, r_hi) = window
        .r_bounds()
        .ok_or(Error::EmptyWindow { n: window.n })?;
    let mut best = BigUint::zero();
    let mut any = false;
    for r in r_lo..=r_hi {
        let Some((_, w_star)) = w_interval_for_r(window, r) else {
            continue;
        };
        any = true;
        // The shell count C(w + t - sigma, w) and -sigma both grow with w, so
        // the per-r maximum sits at the largest realizable w.
        let sigma = if m == 1 {
            0
        } else {
            match d {
                None => {
                    // No m-subset of this level exists: contributes zero.
                    if r == 0 || !binom_at_least(r + w_star, r.min(w_star), m) {
                        continue;
                    }
                    match sigma_closed(m, w_star, r) {
                        Ok(s) => s,
                        // The generic spread route stays exact; use it when
                        // its counting table is affordable.
                        Err(Error::RegimeViolation(_))
                            if (w_star + 1).saturating_mul(r + 1) <= 4_000_000 =>
                        {
                            lattice::sigma(m, w_star, r)?
                        }
                        Err(e) => return Err(e),
                    }
                }
                Some(d) => {
                    if r < d {
                        // Every pair of the level is closer than d.
                        continue;
                    }
                    if m > w_star + 1 {
                        // The corner witness no longer settles feasibility and
                        // no exact route remains at this scale.
                        return Err(Error::RegimeViolation(format!(
                            "cannot certify a d-spaced {m}-subset at r={r}, w={w_star}"
                        )));
                    }
                    match sigma_d_closed(m, w_star, r, d) {
                        Ok(s) => s,
                        Err(Error::RegimeViolation(_)) => lattice::sigma_d(m, w_star, r, d)?,
                        Err(e) => return Err(e),
                    }
                }
            }
        };
        if sigma > t {
            continue;
        }
        let candidate = lattice::binom(w_star + t - sigma, t - sigma);
        if candidate > best {
            best = candidate;
        }
    }
    if !any {
        return Err(Error::EmptyWindow { n: window.n });
    }
    Ok(best)
}

/// Worst-case uncertainty over the typical set: the maximum of the shell
/// count over every realizable (w, r) pair in the window.
pub fn uncertainty_typ(n: u64, t: u64, m: u64, q: u64, k: u64, d: Option<u64>) -> Result<BigUint> {
    if let Some(d) = d {
        if d == 0 {
            return uncertainty_typ(n, t, m, q, k, None);
        }
        if d > t {
            return Err(Error::InvalidInput(format!(
                "distance d={d} exceeds the duplication count t={t}"
            )));
        }
    }
    let window = TypicalityWindow::new(n, q, k)?;
    if n <= DESK_WINDOW_LIMIT {
        desk_uncertainty(&window, t, m, d)
    } else {
        formula_uncertainty(&window, t, m, d)
    }
}

/// Exponent report for the finite-n identities: sigma = s + delta across the
/// whole window, with e = t - s - delta (and epsilon = 1 - delta when a
/// minimum distance is in play).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentReport {
    pub s: u64,
    pub delta: u8,
    pub epsilon: Option<u8>,
    pub e: i64,
}

/// Smallest s >= 0 with n^s >= m.
pub fn ceil_log(n: u64, m: u64) -> u64 {
    assert!(n >= 2, "logarithm base must be at least 2");
    let mut s = 0u64;
    let mut pow = BigUint::one();
    let target = BigUint::from(m);
    while pow < target {
        pow *= BigUint::from(n);
        s += 1;
    }
    s
}

fn checked_regime(n: u64, exponent: u64, m: u64) -> Result<()> {
    let cap = BigUint::from(n).pow(exponent as u32);
    if BigUint::from(m) > cap {
        return Err(Error::RegimeViolation(format!(
            "m={m} exceeds n^{exponent} = {cap}"
        )));
    }
    Ok(())
}

/// Evaluates the exponent identity at finite n, validating it exactly for
/// every realizable (w, r) pair in the window. delta aggregates as the
/// conjunction of the per-r indicators.
pub fn exponent_e(
    n: u64,
    t: u64,
    m: u64,
    q: u64,
    k: u64,
    d: Option<u64>,
) -> Result<ExponentReport> {
    if m < 2 {
        return Err(Error::MOutOfRange {
            m,
            size: "the asymptotic regime needs m >= 2".into(),
        });
    }
    if t == 0 {
        return Err(Error::InvalidInput("t must be positive".into()));
    }
    if let Some(d) = d {
        if d == 0 || d > t {
            return Err(Error::InvalidInput(format!(
                "need 1 <= d <= t (got d={d}, t={t})"
            )));
        }
        // Distance one is no constraint: same identity, epsilon flavour.
        if d == 1 {
            let plain = exponent_e(n, t, m, q, k, None)?;
            return Ok(ExponentReport {
                s: plain.s,
                delta: plain.delta,
                epsilon: Some(1 - plain.delta),
                e: plain.e,
            });
        }
        checked_regime(n, t - d + 1, m)?;
    } else {
        checked_regime(n, t, m)?;
    }
    let window = TypicalityWindow::new(n, q, k)?;
    let log_m = ceil_log(n, m);
    let s = match d {
        None => log_m,
        Some(d) => log_m + d - 1,
    };
    let (r_lo, r_hi) = window.r_bounds().ok_or(Error::EmptyWindow { n })?;
    let mut delta_all = true;
    let mut any = false;
    for r in r_lo..=r_hi {
        let Some((w_min, w_max)) = w_interval_for_r(&window, r) else {
            continue;
        };
        let delta_r = match d {
            None => {
                if r == 0 {
                    continue;
                }
                // Probe only at w where an m-subset of the level exists.
                let probes: Vec<u64> = [w_min, w_max]
                    .into_iter()
                    .filter(|&w| binom_at_least(r + w, r.min(w), m))
                    .collect();
                if probes.is_empty() {
                    continue;
                }
                // delta_r is 1 exactly when m > C(r+s, r).
                let delta_r = u8::from(!binom_at_least(r + s, s.min(r), m));
                // The identity itself, checked at the realizable extremes of
                // w; sigma is monotone in w, so equality at the ends pins the
                // whole interval.
                for w_probe in probes {
                    let got = sigma_closed(m, w_probe, r)?;
                    if got != s + delta_r as u64 {
                        return Err(Error::RegimeViolation(format!(
                            "sigma({m},{w_probe},{r}) = {got} but the identity needs {}",
                            s + delta_r as u64
                        )));
                    }
                }
                delta_r
            }
            Some(d) => {
                if r < d {
                    continue;
                }
                let probes: Vec<u64> = [w_min, w_max]
                    .into_iter()
                    .filter(|&w| w >= 1 && m <= w + 1)
                    .collect();
                if probes.is_empty() {
                    continue;
                }
                if log_m != 1 {
                    return Err(Error::RegimeViolation(format!(
                        "distance-mode identity needs 2 <= m <= n (got m={m})"
                    )));
                }
                let threshold = (r + s) / d;
                let delta_r = u8::from(m > threshold);
                for w_probe in probes {
                    // The closed route settles delta = 0; the search-backed
                    // duality settles the rest where it stays affordable.
                    let got = match sigma_d_closed(m, w_probe, r, d) {
                        Ok(v) => v,
                        Err(Error::RegimeViolation(_)) => {
                            lattice::sigma_d(m, w_probe, r, d).map_err(|e| match e {
                                Error::InstanceTooLarge(msg) => Error::RegimeViolation(msg),
                                other => other,
                            })?
                        }
                        Err(e) => return Err(e),
                    };
                    if got != s + delta_r as u64 {
                        return Err(Error::RegimeViolation(format!(
                            "sigma_d({m},{w_probe},{r},{d}) = {got} but the identity needs {}",
                            s + delta_r as u64
                        )));
                    }
                }
                delta_r
            }
        };
        any = true;
        delta_all &= delta_r == 1;
    }
    if !any {
        return Err(Error::EmptyWindow { n });
    }
    let delta = u8::from(delta_all);
    let epsilon = d.map(|_| 1 - delta);
    let e = t as i64 - s as i64 - delta as i64;
    Ok(ExponentReport {
        s,
        delta,
        epsilon,
        e,
    })
}
