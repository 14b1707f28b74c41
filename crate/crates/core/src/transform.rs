//! The discrete derivative and the poset/metric isomorphism between a
//! descendant cone and N^{w+1}, plus the per-string statistics (w, r).
//!
//! For y in the cone of an irreducible root x, the zero runs of the
//! derivative tail of y are the root's runs padded with whole k-blocks; the
//! run vector records how many blocks landed in each of the w+1 runs. The map
//! is an order isomorphism and, on each fixed level, an isometry.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::strings::GString;

/// Image of a string under the discrete derivative: k head symbols and the
/// tail of mod-q differences at lag k. Reconstructs the string uniquely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeProfile {
    head: Vec<u32>,
    tail: Vec<u32>,
    q: u32,
    k: usize,
}

impl DerivativeProfile {
    pub fn new(head: Vec<u32>, tail: Vec<u32>, q: u32) -> Result<Self> {
        if head.len() < 2 {
            return Err(Error::WindowTooSmall(head.len()));
        }
        if let Some(&sym) = head.iter().chain(tail.iter()).find(|&&s| s >= q) {
            return Err(Error::SymbolOutOfRange { sym, q });
        }
        let k = head.len();
        Ok(DerivativeProfile { head, tail, q, k })
    }

    pub fn head(&self) -> &[u32] {
        &self.head
    }

    pub fn tail(&self) -> &[u32] {
        &self.tail
    }
}

/// phi(x) = (head, tail) with head = x(1..k) and tail(i) = x(k+i) - x(i) mod q.
pub fn discrete_derivative(x: &GString) -> DerivativeProfile {
    let k = x.k();
    let q = x.q();
    let s = x.symbols();
    let head = s[..k].to_vec();
    let tail = (0..s.len() - k)
        .map(|i| (s[k + i] + q - s[i]) % q)
        .collect();
    DerivativeProfile { head, tail, q, k }
}

/// Inverse of the derivative: x(i) = head(i) for i <= k, then
/// x(k+i) = x(i) + tail(i) mod q.
pub fn inverse_derivative(p: &DerivativeProfile) -> GString {
    let mut symbols = p.head.clone();
    symbols.reserve(p.tail.len());
    for (i, &d) in p.tail.iter().enumerate() {
        let s = (symbols[i] + d) % p.q;
        symbols.push(s);
    }
    GString::new(symbols, p.q, p.k).expect("profile reconstructs a valid string")
}

/// Splits a derivative tail into its zero-run lengths (w+1 of them, possibly
/// zero) and the w nonzero symbols separating them.
fn zero_runs(tail: &[u32]) -> (Vec<u64>, Vec<u32>) {
    let mut runs = Vec::new();
    let mut nonzeros = Vec::new();
    let mut current = 0u64;
    for &sym in tail {
        if sym == 0 {
            current += 1;
        } else {
            runs.push(current);
            nonzeros.push(sym);
            current = 0;
        }
    }
    runs.push(current);
    (runs, nonzeros)
}

/// A point of N^{w+1} anchored at an irreducible root; the lattice image of a
/// cone member.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RunVector {
    entries: Vec<u64>,
    root: GString,
}

impl RunVector {
    /// Anchors an arbitrary lattice point at a root. The dimension must be
    /// w+1 for the root's derivative weight w.
    pub fn new(entries: Vec<u64>, root: GString) -> Result<Self> {
        if !root.is_irreducible() {
            return Err(Error::RootNotIrreducible);
        }
        let (_, nonzeros) = zero_runs(discrete_derivative(&root).tail());
        if entries.len() != nonzeros.len() + 1 {
            return Err(Error::DimensionMismatch(entries.len(), nonzeros.len() + 1));
        }
        Ok(RunVector { entries, root })
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn root(&self) -> &GString {
        &self.root
    }

    /// Dimension minus one; the Hamming weight of the root's derivative tail.
    pub fn w(&self) -> u64 {
        (self.entries.len() - 1) as u64
    }

    pub fn norm(&self) -> u64 {
        self.entries.iter().sum()
    }
}

/// Maps y to its run vector anchored at `root`. Validates that y actually
/// lies in the root's cone: the head, the nonzero tail symbols and the run
/// residues mod k must all match the root's profile.
pub fn psi(y: &GString, root: &GString) -> Result<RunVector> {
    if y.q() != root.q() || y.k() != root.k() {
        return Err(Error::ParameterMismatch);
    }
    if !root.is_irreducible() {
        return Err(Error::RootNotIrreducible);
    }
    let k = y.k() as u64;
    let py = discrete_derivative(y);
    let pr = discrete_derivative(root);
    if py.head() != pr.head() {
        return Err(Error::NotInCone);
    }
    let (runs_y, nz_y) = zero_runs(py.tail());
    let (runs_r, nz_r) = zero_runs(pr.tail());
    if nz_y != nz_r {
        return Err(Error::NotInCone);
    }
    let mut entries = Vec::with_capacity(runs_y.len());
    for (&uy, &ur) in runs_y.iter().zip(runs_r.iter()) {
        if uy < ur || (uy - ur) % k != 0 {
            return Err(Error::NotInCone);
        }
        entries.push(uy / k);
    }
    Ok(RunVector {
        entries,
        root: root.clone(),
    })
}

/// Inverse of `psi`: rebuilds the unique cone member with the given run
/// vector.
pub fn psi_inverse(v: &RunVector) -> GString {
    let root = &v.root;
    let k = root.k() as u64;
    let pr = discrete_derivative(root);
    let (runs_r, nz_r) = zero_runs(pr.tail());
    let mut tail = Vec::new();
    for i in 0..runs_r.len() {
        let len = runs_r[i] + k * v.entries[i];
        tail.extend(std::iter::repeat_n(0, len as usize));
        if i < nz_r.len() {
            tail.push(nz_r[i]);
        }
    }
    let profile = DerivativeProfile {
        head: pr.head().to_vec(),
        tail,
        q: root.q(),
        k: root.k(),
    };
    inverse_derivative(&profile)
}

/// The pair (w, r): derivative-tail weight and excess level above the root.
pub fn stats(x: &GString) -> (u64, u64) {
    let p = discrete_derivative(x);
    let w = p.tail().iter().filter(|&&s| s != 0).count() as u64;
    let root = x.root();
    let r = ((x.len() - root.len()) / x.k()) as u64;
    (w, r)
}

pub(crate) fn l1_diff(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b.iter()).map(|(&x, &y)| x.abs_diff(y)).sum()
}

/// Half the 1-norm of the difference; half-integers arise for unequal norms.
pub fn d1_distance(u: &RunVector, v: &RunVector) -> Result<Ratio<i64>> {
    if u.entries.len() != v.entries.len() {
        return Err(Error::DimensionMismatch(u.entries.len(), v.entries.len()));
    }
    Ok(Ratio::new(l1_diff(&u.entries, &v.entries) as i64, 2))
}

/// Duplication distance between two same-length cone mates: the least t with
/// intersecting t-descendant sets. Computed through the isometry.
pub fn duplication_distance(y1: &GString, y2: &GString) -> Result<u64> {
    if y1.len() != y2.len() {
        return Err(Error::LengthMismatch);
    }
    if !y1.same_cone(y2)? {
        return Err(Error::DifferentCones);
    }
    let root = y1.root();
    let u = psi(y1, &root)?;
    let v = psi(y2, &root)?;
    Ok(l1_diff(&u.entries, &v.entries) / 2)
}
