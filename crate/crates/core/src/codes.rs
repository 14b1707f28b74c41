//! Codebooks inside a simplex level of one descendant cone, with a given
//! minimum d1 distance, and the bounded-radius unique decoder used by the
//! list-reconstruction pipeline.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::lattice::{self, leq, norm, SimplexIter};
use crate::strings::GString;
use crate::transform::{l1_diff, stats};

/// A codebook of lattice points in Delta^w_r anchored at an irreducible root
/// string, with design minimum d1 distance d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexCode {
    root: GString,
    w: u64,
    r: u64,
    d: u64,
    words: Vec<Vec<u64>>,
    typical_subset: bool,
}

impl SimplexCode {
    /// Validates and stores an explicit codebook. Words are kept sorted.
    pub fn from_words(
        root: GString,
        r: u64,
        d: u64,
        words: Vec<Vec<u64>>,
        typical_subset: bool,
    ) -> Result<Self> {
        if !root.is_irreducible() {
            return Err(Error::RootNotIrreducible);
        }
        if d == 0 {
            return Err(Error::BadCodebook(
                "design distance d must be positive".into(),
            ));
        }
        let (w, _) = stats(&root);
        let dim = (w + 1) as usize;
        let mut sorted = words;
        sorted.sort();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::BadCodebook(format!(
                    "duplicate codeword {:?}",
                    pair[0]
                )));
            }
        }
        for word in &sorted {
            if word.len() != dim {
                return Err(Error::DimensionMismatch(word.len(), dim));
            }
            let nw = norm(word);
            if nw != r {
                return Err(Error::NormMismatch(nw, r));
            }
        }
        for (i, a) in sorted.iter().enumerate() {
            for b in sorted.iter().skip(i + 1) {
                if l1_diff(a, b) < 2 * d {
                    return Err(Error::BadCodebook(format!(
                        "codewords {a:?} and {b:?} are closer than d = {d}"
                    )));
                }
            }
        }
        Ok(SimplexCode {
            root,
            w,
            r,
            d,
            words: sorted,
            typical_subset,
        })
    }

    pub fn root(&self) -> &GString {
        &self.root
    }

    pub fn w(&self) -> u64 {
        self.w
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn words(&self) -> &[Vec<u64>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Whether the codebook is declared to live inside the typical set, in
    /// which case decoded outputs are filtered through that membership test.
    pub fn typical_subset(&self) -> bool {
        self.typical_subset
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.words.iter().any(|wrd| wrd.as_slice() == v)
    }
}

/// First-fit greedy codebook over Delta^w_r in ascending lexicographic
/// order. Deterministic, maximal, minimum distance >= d by construction.
pub fn build_code_greedy(root: &GString, w: u64, r: u64, d: u64) -> Result<SimplexCode> {
    let (root_w, _) = stats(root);
    if root_w != w {
        return Err(Error::BadCodebook(format!(
            "root has derivative weight {root_w}, expected {w}"
        )));
    }
    if d == 0 {
        return Err(Error::BadCodebook(
            "design distance d must be positive".into(),
        ));
    }
    let size = lattice::simplex_size(w, r);
    if size > num_bigint::BigUint::from(2_000_000u64) {
        return Err(Error::InstanceTooLarge(format!(
            "greedy construction over a simplex of size {size}"
        )));
    }
    let mut words: Vec<Vec<u64>> = Vec::new();
    for cand in SimplexIter::new(w, r) {
        if words.iter().all(|wrd| l1_diff(wrd, &cand) >= 2 * d) {
            words.push(cand);
        }
    }
    SimplexCode::from_words(root.clone(), r, d, words, false)
}

/// Minimum pairwise d1 distance of the codebook; needs at least two words.
pub fn min_distance(code: &SimplexCode) -> Result<Ratio<i64>> {
    if code.words.len() < 2 {
        return Err(Error::BadCodebook(
            "minimum distance needs at least two codewords".into(),
        ));
    }
    let mut best: Option<u64> = None;
    for (i, a) in code.words.iter().enumerate() {
        for b in code.words.iter().skip(i + 1) {
            let dd = l1_diff(a, b);
            best = Some(best.map_or(dd, |cur| cur.min(dd)));
        }
    }
    Ok(Ratio::new(best.unwrap() as i64, 2))
}

/// Result of bounded-radius decoding: either the unique codeword below v
/// within the error budget, or an explicit no-ancestor outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Codeword(Vec<u64>),
    NoValidAncestor,
}

/// Finds the codeword c <= v with |v - c| <= d - 1, unique whenever the
/// codebook has minimum distance d. Scans the codebook directly.
pub fn unique_decode(code: &SimplexCode, v: &[u64]) -> Result<DecodeOutcome> {
    let dim = (code.w + 1) as usize;
    if v.len() != dim {
        return Err(Error::DimensionMismatch(v.len(), dim));
    }
    let nv = norm(v);
    let max = code.r + code.d - 1;
    if nv > max {
        return Err(Error::NormAboveRange { norm: nv, max });
    }
    for word in &code.words {
        if leq(word, v) && l1_diff(word, v) < code.d {
            return Ok(DecodeOutcome::Codeword(word.clone()));
        }
    }
    Ok(DecodeOutcome::NoValidAncestor)
}

/// c <= v coordinatewise with at most `limit` duplications between them.
pub fn is_ancestor_within(c: &[u64], v: &[u64], limit: u64) -> Result<bool> {
    if c.len() != v.len() {
        return Err(Error::DimensionMismatch(c.len(), v.len()));
    }
    Ok(leq(c, v) && l1_diff(c, v) <= limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root() -> GString {
        GString::parse("10122", 3, 2).unwrap()
    }

    #[test]
    fn greedy_matches_worked_example_code() {
        let code = build_code_greedy(&root(), 2, 2, 2).unwrap();
        assert_eq!(code.words(), &[vec![0, 0, 2], vec![0, 2, 0], vec![2, 0, 0]]);
        assert_eq!(min_distance(&code).unwrap(), Ratio::new(2, 1));
    }

    #[test]
    fn greedy_with_d1_takes_whole_simplex() {
        let code = build_code_greedy(&root(), 2, 2, 1).unwrap();
        assert_eq!(code.len(), 6);
    }

    #[test]
    fn greedy_is_maximal() {
        for d in 1..=3 {
            for r in 1..=4 {
                let code = build_code_greedy(&root(), 2, r, d).unwrap();
                for cand in SimplexIter::new(2, r) {
                    if code.contains(&cand) {
                        continue;
                    }
                    let fits = code.words().iter().all(|w| l1_diff(w, &cand) >= 2 * d);
                    assert!(!fits, "greedy code misses addable {cand:?} at r={r} d={d}");
                }
            }
        }
    }

    #[test]
    fn from_words_validation() {
        let bad_norm = SimplexCode::from_words(root(), 2, 2, vec![vec![1, 0, 0]], false);
        assert!(matches!(bad_norm, Err(Error::NormMismatch(1, 2))));
        let close =
            SimplexCode::from_words(root(), 2, 2, vec![vec![0, 0, 2], vec![0, 1, 1]], false);
        assert!(matches!(close, Err(Error::BadCodebook(_))));
        let dup = SimplexCode::from_words(root(), 2, 2, vec![vec![0, 0, 2], vec![0, 0, 2]], false);
        assert!(matches!(dup, Err(Error::BadCodebook(_))));
    }

    #[test]
    fn unique_decode_worked_example() {
        let code = SimplexCode::from_words(
            root(),
            2,
            2,
            vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]],
            false,
        )
        .unwrap();
        assert_eq!(
            unique_decode(&code, &[1, 0, 2]).unwrap(),
            DecodeOutcome::Codeword(vec![0, 0, 2])
        );
        assert_eq!(
            unique_decode(&code, &[2, 0, 1]).unwrap(),
            DecodeOutcome::Codeword(vec![2, 0, 0])
        );
        assert_eq!(
            unique_decode(&code, &[0, 0, 3]).unwrap(),
            DecodeOutcome::Codeword(vec![0, 0, 2])
        );
        assert_eq!(
            unique_decode(&code, &[0, 0, 2]).unwrap(),
            DecodeOutcome::Codeword(vec![0, 0, 2])
        );
        assert!(matches!(
            unique_decode(&code, &[2, 2, 0]),
            Err(Error::NormAboveRange { norm: 4, max: 3 })
        ));
    }

    #[test]
    fn unique_decode_alternate_code_discards() {
        let code = SimplexCode::from_words(root(), 2, 2, vec![vec![2, 0, 0], vec![0, 1, 1]], false)
            .unwrap();
        assert_eq!(
            unique_decode(&code, &[1, 0, 2]).unwrap(),
            DecodeOutcome::NoValidAncestor
        );
        assert_eq!(
            unique_decode(&code, &[2, 0, 1]).unwrap(),
            DecodeOutcome::Codeword(vec![2, 0, 0])
        );
        assert_eq!(
            unique_decode(&code, &[0, 0, 3]).unwrap(),
            DecodeOutcome::NoValidAncestor
        );
    }

    #[test]
    fn ancestor_tests() {
        assert!(is_ancestor_within(&[0, 0, 2], &[1, 0, 2], 1).unwrap());
        assert!(!is_ancestor_within(&[0, 1, 1], &[0, 0, 3], 1).unwrap());
        assert!(is_ancestor_within(&[1, 2, 0], &[1, 2, 0], 0).unwrap());
        assert!(matches!(
            is_ancestor_within(&[1, 0], &[1, 0, 0], 1),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn unique_ancestor_property_small_grid() {
        // For any codebook with min distance d, no v within radius d-1 has
        // two codeword ancestors.
        for r in 1..=3u64 {
            for d in 1..=3u64 {
                let code = match build_code_greedy(&root(), 2, r, d) {
                    Ok(c) => c,
                    Err(_) => continue,
                };
                for excess in 0..d {
                    for v in SimplexIter::new(2, r + excess) {
                        let hits = code
                            .words()
                            .iter()
                            .filter(|c| leq(c, &v) && l1_diff(c, &v) < d)
                            .count();
                        assert!(hits <= 1, "v={v:?} r={r} d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn decode_inverts_every_error_pattern() {
        // Every codeword, pushed up by any pattern of at most d-1
        // duplications, decodes back to itself.
        for r in 1..=3u64 {
            for d in 2..=3u64 {
                let code = build_code_greedy(&root(), 2, r, d).unwrap();
                for word in code.words() {
                    for excess in 0..d {
                        for delta in SimplexIter::new(2, excess) {
                            let v: Vec<u64> =
                                word.iter().zip(&delta).map(|(&a, &b)| a + b).collect();
                            assert_eq!(
                                unique_decode(&code, &v).unwrap(),
                                DecodeOutcome::Codeword(word.clone()),
                                "word={word:?} delta={delta:?} d={d}"
                            );
                        }
                    }
                }
            }
        }
    }
}
