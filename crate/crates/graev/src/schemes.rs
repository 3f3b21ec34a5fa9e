//! Schemes: fixed-point-free non-crossing involutions on `{1..2n}`.
//!
//! A scheme pairs up the positions of an even-length word; the non-crossing
//! condition (no `i < j < φ(i) < φ(j)`) is exactly balanced-bracket
//! matching, so validation runs in one stack pass. Enumeration is by
//! recursive first-match position, which yields a canonical deterministic
//! order and Catalan-many schemes.
//!
//! A [`Representation`] couples a word over the extended alphabet with the
//! reduced word it stands for; [`gamma`] is the exact cost a scheme assigns
//! to a representation, and [`nested_normalize`] rewrites any pair into a
//! nested one with the same cost, support, and target.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use thiserror::Error;

use crate::metrics::{ExtendedMetric, Rat};
use crate::topology::ParseError;
use crate::words::{reduce, support, ReducedWord, Word};

/// Default cap on the scheme size for exhaustive enumeration.
pub const DEFAULT_SCHEME_CAP: usize = 8;

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum SchemeError {
    #[error("position {0} has no partner (map is not total on 1..2n)")]
    NotInvolution(usize),
    #[error("position {0} is a fixed point")]
    FixedPoint(usize),
    #[error("chords opened at {0} and {1} cross")]
    Crossing(usize, usize),
    #[error("index set must have positive even size, got {0}")]
    BadSize(usize),
    #[error("scheme size {n} exceeds the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("word length {word} does not match scheme on {scheme} positions")]
    LengthMismatch { word: usize, scheme: usize },
    #[error("word does not reduce to the stated target")]
    TargetMismatch,
}

/// A validated scheme, stored as a 0-based involution array.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scheme {
    map: Vec<usize>,
}

impl Scheme {
    /// Validates a 0-based involution array of even positive length.
    /// Reported indices are 1-based to match the text form.
    pub fn from_involution(map: Vec<usize>) -> Result<Self, SchemeError> {
        let size = map.len();
        if size == 0 || size % 2 != 0 {
            return Err(SchemeError::BadSize(size));
        }
        for (i, &j) in map.iter().enumerate() {
            if j >= size {
                return Err(SchemeError::NotInvolution(i + 1));
            }
            if j == i {
                return Err(SchemeError::FixedPoint(i + 1));
            }
            if map[j] != i {
                return Err(SchemeError::NotInvolution(i + 1));
            }
        }
        // Bracket test: opening positions go on a stack; a closing position
        // must match the most recent open chord.
        let mut stack: Vec<usize> = Vec::new();
        for (i, &j) in map.iter().enumerate() {
            if j > i {
                stack.push(i);
            } else {
                match stack.pop() {
                    Some(top) if top == j => {}
                    Some(top) => return Err(SchemeError::Crossing(j + 1, top + 1)),
                    None => return Err(SchemeError::NotInvolution(i + 1)),
                }
            }
        }
        Ok(Scheme { map })
    }

    /// Builds a scheme from 1-based pairs covering `{1..2n}` exactly.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self, SchemeError> {
        let size = pairs.len() * 2;
        let mut map = vec![usize::MAX; size];
        for &(a, b) in pairs {
            if a == 0 || b == 0 || a > size || b > size {
                return Err(SchemeError::NotInvolution(a.max(b)));
            }
            if a == b {
                return Err(SchemeError::FixedPoint(a));
            }
            map[a - 1] = b - 1;
            map[b - 1] = a - 1;
        }
        if let Some(i) = map.iter().position(|&j| j == usize::MAX) {
            return Err(SchemeError::NotInvolution(i + 1));
        }
        Scheme::from_involution(map)
    }

    /// The unique nested scheme on `{1..2n}`: position `i` pairs with
    /// `2n - i + 1`.
    pub fn nested(n: usize) -> Self {
        let size = 2 * n;
        Scheme {
            map: (0..size).map(|i| size - 1 - i).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.map.len() / 2
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    /// 0-based partner of a 0-based position.
    pub fn partner(&self, i: usize) -> usize {
        self.map[i]
    }

    /// The chords as 0-based `(open, close)` pairs in opening order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.map
            .iter()
            .enumerate()
            .filter(|(i, &j)| *i < j)
            .map(|(i, &j)| (i, j))
            .collect()
    }

    pub fn is_nested(&self) -> bool {
        let size = self.map.len();
        self.map.iter().enumerate().all(|(i, &j)| j == size - 1 - i)
    }

    /// Text form `1-4 2-3`, 1-based.
    pub fn render(&self) -> String {
        self.pairs()
            .iter()
            .map(|&(a, b)| format!("{}-{}", a + 1, b + 1))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Parses the 1-based text form `1-4 2-3`.
pub fn parse_scheme(text: &str, source: &str) -> Result<Scheme, ParseError> {
    let mut pairs = Vec::new();
    for token in text.split_whitespace() {
        let (a, b) = token
            .split_once('-')
            .ok_or_else(|| ParseError::new(source, 1, format!("bad pair `{token}`")))?;
        let a: usize = a
            .parse()
            .map_err(|_| ParseError::new(source, 1, format!("bad index `{a}`")))?;
        let b: usize = b
            .parse()
            .map_err(|_| ParseError::new(source, 1, format!("bad index `{b}`")))?;
        pairs.push((a, b));
    }
    if pairs.is_empty() {
        return Err(ParseError::new(source, 1, "empty scheme"));
    }
    Scheme::from_pairs(&pairs).map_err(|e| ParseError::new(source, 1, e.to_string()))
}

/// n-th Catalan number.
pub fn catalan(n: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..n {
        c = c * 2 * (2 * i as u128 + 1) / (i as u128 + 2);
    }
    c
}

type PairList = Vec<(u32, u32)>;

fn scheme_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<PairList>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<PairList>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All schemes of size `n` as 0-based pair lists, in canonical order:
/// first-match position of the leading chord ascending, then inner block,
/// then outer block. Memoized across calls.
pub(crate) fn scheme_pairs(n: usize) -> Arc<Vec<PairList>> {
    if let Some(found) = scheme_cache().lock().unwrap().get(&n) {
        return Arc::clone(found);
    }
    let built = Arc::new(build_pairs(n));
    scheme_cache()
        .lock()
        .unwrap()
        .insert(n, Arc::clone(&built));
    built
}

fn build_pairs(m: usize) -> Vec<PairList> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for j in 1..=m {
        let inners = scheme_pairs(j - 1);
        let outers = scheme_pairs(m - j);
        for inner in inners.iter() {
            for outer in outers.iter() {
                let mut pairs = Vec::with_capacity(m);
                pairs.push((0u32, 2 * j as u32 - 1));
                pairs.extend(inner.iter().map(|&(a, b)| (a + 1, b + 1)));
                pairs.extend(outer.iter().map(|&(a, b)| (a + 2 * j as u32, b + 2 * j as u32)));
                out.push(pairs);
            }
        }
    }
    out
}

/// Enumerates all schemes on `{1..2n}` in canonical order, with the
/// default size cap.
pub fn enumerate_schemes(n: usize) -> Result<Vec<Scheme>, SchemeError> {
    enumerate_schemes_capped(n, DEFAULT_SCHEME_CAP)
}

pub fn enumerate_schemes_capped(n: usize, cap: usize) -> Result<Vec<Scheme>, SchemeError> {
    if n > cap {
        return Err(SchemeError::CapExceeded { n, cap });
    }
    if n == 0 {
        return Err(SchemeError::BadSize(0));
    }
    let lists = scheme_pairs(n);
    Ok(lists
        .iter()
        .map(|pairs| {
            let mut map = vec![0usize; 2 * n];
            for &(a, b) in pairs {
                map[a as usize] = b as usize;
                map[b as usize] = a as usize;
            }
            Scheme { map }
        })
        .collect())
}

/// A word over the extended alphabet together with the reduced word it
/// represents.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Representation {
    word: Word,
    target: ReducedWord,
}

impl Representation {
    pub fn new(word: Word) -> Self {
        let target = reduce(&word);
        Representation { word, target }
    }

    pub fn with_target(word: Word, target: ReducedWord) -> Result<Self, SchemeError> {
        if reduce(&word) != target {
            return Err(SchemeError::TargetMismatch);
        }
        Ok(Representation { word, target })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn target(&self) -> &ReducedWord {
        &self.target
    }
}

/// The exact cost `Γ_d(𝒳, φ) = ½ Σᵢ d*(xᵢ⁻¹, x_{φ(i)})`; each unordered
/// pair `{i, φ(i)}` contributes `½(d*(xᵢ⁻¹, x_{φ(i)}) + d*(x_{φ(i)}⁻¹, xᵢ))`.
pub fn gamma(
    dstar: &ExtendedMetric,
    rep: &Representation,
    scheme: &Scheme,
) -> Result<Rat, SchemeError> {
    let letters = rep.word.letters();
    if letters.len() != scheme.size() {
        return Err(SchemeError::LengthMismatch {
            word: letters.len(),
            scheme: scheme.size(),
        });
    }
    let mut total = Rat::zero();
    for (i, &letter) in letters.iter().enumerate() {
        total += dstar.dstar(letter.inverse(), letters[scheme.partner(i)]);
    }
    Ok(total / Rat::from_integer(2))
}

/// Rewrites a representation/scheme pair into one with a nested scheme,
/// preserving the cost exactly, the target word, and the letter support.
///
/// The construction is the recursive one: when the leading position is
/// matched to the last, recurse on the interior; otherwise split at the
/// close of the leading chord, recurse on both halves, and append the
/// conjugating block that turns two nested halves into one nested scheme.
/// The output may be longer than the input; no shortest witness is sought.
pub fn nested_normalize(
    rep: &Representation,
    scheme: &Scheme,
    dstar: &ExtendedMetric,
) -> Result<(Representation, Scheme), SchemeError> {
    let letters = rep.word.letters();
    if letters.len() != scheme.size() {
        return Err(SchemeError::LengthMismatch {
            word: letters.len(),
            scheme: scheme.size(),
        });
    }
    let normalized = normalize_letters(letters, &scheme.map);
    let out_scheme = Scheme::nested(normalized.len() / 2);
    let out_word = Word::new(normalized);
    let out_rep = Representation::new(out_word);

    debug_assert_eq!(out_rep.target(), rep.target());
    debug_assert_eq!(support(out_rep.word()), support(rep.word()));
    debug_assert_eq!(
        gamma(dstar, &out_rep, &out_scheme),
        gamma(dstar, rep, scheme)
    );
    Ok((out_rep, out_scheme))
}

fn normalize_letters(
    letters: &[crate::words::Letter],
    map: &[usize],
) -> Vec<crate::words::Letter> {
    let size = letters.len();
    if size == 0 {
        return Vec::new();
    }
    if map[0] == size - 1 {
        // Leading chord spans everything: recurse on the interior,
        // re-indexed to {1..2n-2}.
        let inner_letters = &letters[1..size - 1];
        let inner_map: Vec<usize> = map[1..size - 1].iter().map(|&j| j - 1).collect();
        let mut out = Vec::with_capacity(size);
        out.push(letters[0]);
        out.extend(normalize_letters(inner_letters, &inner_map));
        out.push(letters[size - 1]);
        return out;
    }

    // The restriction of a scheme to the span of its leading chord is a
    // scheme, as is the restriction to the remainder.
    let split = map[0] + 1;
    let left = normalize_letters(&letters[..split], &map[..split]);
    let right_map: Vec<usize> = map[split..].iter().map(|&j| j - split).collect();
    let right = normalize_letters(&letters[split..], &right_map);

    let q = left.len() / 2;
    let mut out = Vec::with_capacity(2 * left.len() + right.len());
    out.extend_from_slice(&left);
    out.extend_from_slice(&right);
    for i in (q..left.len()).rev() {
        out.push(left[i].inverse());
    }
    out.extend_from_slice(&left[q..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{rat, QuasiPseudometric};
    use crate::words::{Letter, PointId, PointSet};

    fn two() -> PointSet {
        PointSet::from_names(["a", "b"]).unwrap()
    }

    fn discrete_ext() -> ExtendedMetric {
        ExtendedMetric::extend_dstar(QuasiPseudometric::discrete(two())).unwrap()
    }

    fn sierpinski_ext() -> ExtendedMetric {
        let metric = QuasiPseudometric::validate(
            two(),
            vec![
                vec![rat(0, 1), rat(1, 1)],
                vec![rat(0, 1), rat(0, 1)],
            ],
        )
        .unwrap();
        ExtendedMetric::extend_dstar(metric).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Scheme::from_pairs(&[(1, 2)]).is_ok());
        assert_eq!(
            Scheme::from_pairs(&[(1, 3), (2, 4)]).unwrap_err(),
            SchemeError::Crossing(1, 2)
        );
        let nested = Scheme::from_pairs(&[(1, 4), (2, 3)]).unwrap();
        assert!(nested.is_nested());
        assert_eq!(
            Scheme::from_involution(vec![0, 1]).unwrap_err(),
            SchemeError::FixedPoint(1)
        );
        assert_eq!(
            Scheme::from_involution(vec![1, 0, 3]).unwrap_err(),
            SchemeError::BadSize(3)
        );
        assert!(matches!(
            Scheme::from_pairs(&[(1, 2), (3, 3)]),
            Err(SchemeError::FixedPoint(3))
        ));
    }

    #[test]
    fn nestedness() {
        assert!(Scheme::from_pairs(&[(1, 4), (2, 3)]).unwrap().is_nested());
        assert!(!Scheme::from_pairs(&[(1, 2), (3, 4)]).unwrap().is_nested());
        assert!(Scheme::from_pairs(&[(1, 2)]).unwrap().is_nested());
        assert_eq!(Scheme::nested(3).render(), "1-6 2-5 3-4");
    }

    #[test]
    fn enumeration_counts_match_catalan() {
        for n in 1..=6 {
            let schemes = enumerate_schemes(n).unwrap();
            assert_eq!(schemes.len() as u128, catalan(n));
            for s in &schemes {
                assert!(Scheme::from_involution(s.map.clone()).is_ok());
            }
        }
        assert!(matches!(
            enumerate_schemes(9),
            Err(SchemeError::CapExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_order_is_canonical() {
        let schemes = enumerate_schemes(2).unwrap();
        assert_eq!(schemes[0].render(), "1-2 3-4");
        assert_eq!(schemes[1].render(), "1-4 2-3");
        let schemes = enumerate_schemes(3).unwrap();
        assert_eq!(schemes.first().unwrap().render(), "1-2 3-4 5-6");
        assert_eq!(schemes.last().unwrap().render(), "1-6 2-5 3-4");
    }

    #[test]
    fn enumeration_matches_involution_filter_oracle() {
        // Oracle: every fixed-point-free involution, kept iff the O(n²)
        // pairwise crossing test passes.
        for n in 1..=4usize {
            let size = 2 * n;
            let mut all: Vec<Vec<usize>> = Vec::new();
            let mut partial = vec![usize::MAX; size];
            fn rec(partial: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
                match partial.iter().position(|&x| x == usize::MAX) {
                    None => all.push(partial.clone()),
                    Some(i) => {
                        for j in i + 1..partial.len() {
                            if partial[j] == usize::MAX {
                                partial[i] = j;
                                partial[j] = i;
                                rec(partial, all);
                                partial[i] = usize::MAX;
                                partial[j] = usize::MAX;
                            }
                        }
                    }
                }
            }
            rec(&mut partial, &mut all);
            // (2n-1)!! involutions in total.
            let double_factorial: usize = (1..=size).step_by(2).product();
            assert_eq!(all.len(), double_factorial);

            let mut oracle: Vec<Vec<usize>> = Vec::new();
            for map in &all {
                let mut crossing = false;
                for i in 0..size {
                    for j in i + 1..size {
                        if j < map[i] && map[i] < map[j] {
                            crossing = true;
                        }
                    }
                }
                let accepted = Scheme::from_involution(map.clone()).is_ok();
                assert_eq!(accepted, !crossing, "validator vs oracle on {map:?}");
                if !crossing {
                    oracle.push(map.clone());
                }
            }
            let ours: Vec<Vec<usize>> = enumerate_schemes(n)
                .unwrap()
                .into_iter()
                .map(|s| s.map)
                .collect();
            let mut oracle_sorted = oracle.clone();
            oracle_sorted.sort();
            let mut ours_sorted = ours.clone();
            ours_sorted.sort();
            assert_eq!(ours_sorted, oracle_sorted);
        }
    }

    #[test]
    fn gamma_examples() {
        let ext = discrete_ext();
        let p = two();

        // x x⁻¹ matched together costs nothing, for either sign.
        for text in ["a a^-1", "b^-1 b"] {
            let rep = Representation::new(p.parse_word(text).unwrap());
            let value = gamma(&ext, &rep, &Scheme::nested(1)).unwrap();
            assert_eq!(value, rat(0, 1));
        }

        let rep = Representation::new(p.parse_word("a b^-1").unwrap());
        assert_eq!(gamma(&ext, &rep, &Scheme::nested(1)).unwrap(), rat(1, 1));

        let rep = Representation::new(p.parse_word("a b^-1").unwrap());
        assert_eq!(
            gamma(&sierpinski_ext(), &rep, &Scheme::nested(1)).unwrap(),
            rat(0, 1)
        );

        let err = gamma(&ext, &rep, &Scheme::nested(2)).unwrap_err();
        assert!(matches!(err, SchemeError::LengthMismatch { .. }));
    }

    #[test]
    fn gamma_is_monotone_in_the_metric() {
        let small = QuasiPseudometric::validate(
            two(),
            vec![
                vec![rat(0, 1), rat(1, 2)],
                vec![rat(0, 1), rat(0, 1)],
            ],
        )
        .unwrap();
        let big = QuasiPseudometric::discrete(two());
        assert!(small.le(&big));
        let ext_small = ExtendedMetric::extend_dstar(small).unwrap();
        let ext_big = ExtendedMetric::extend_dstar(big).unwrap();
        let p = two();
        for text in ["a b^-1", "a b a^-1 b^-1", "a e b e"] {
            let rep = Representation::new(p.parse_word(text).unwrap());
            for scheme in enumerate_schemes(rep.word().len() / 2).unwrap() {
                let lo = gamma(&ext_small, &rep, &scheme).unwrap();
                let hi = gamma(&ext_big, &rep, &scheme).unwrap();
                assert!(lo <= hi);
            }
        }
    }

    #[test]
    fn nested_normalize_split_case() {
        let p = two();
        let ext = discrete_ext();
        let rep = Representation::new(p.parse_word("a a^-1 b b^-1").unwrap());
        let scheme = Scheme::from_pairs(&[(1, 2), (3, 4)]).unwrap();
        let (out, out_scheme) = nested_normalize(&rep, &scheme, &ext).unwrap();
        assert_eq!(out.word().render(&p), "a a^-1 b b^-1 a a^-1");
        assert!(out_scheme.is_nested());
        assert_eq!(out_scheme.size(), 6);
        assert_eq!(gamma(&ext, &out, &out_scheme).unwrap(), rat(0, 1));
    }

    #[test]
    fn nested_normalize_fixed_points() {
        let p = two();
        let ext = discrete_ext();

        let rep = Representation::new(p.parse_word("a a^-1").unwrap());
        let (out, scheme) = nested_normalize(&rep, &Scheme::nested(1), &ext).unwrap();
        assert_eq!(out.word(), rep.word());
        assert_eq!(scheme, Scheme::nested(1));

        // Already-nested input of any size comes back unchanged.
        let rep = Representation::new(p.parse_word("a b e b^-1").unwrap());
        let (out, scheme) = nested_normalize(&rep, &Scheme::nested(2), &ext).unwrap();
        assert_eq!(out.word(), rep.word());
        assert_eq!(scheme, Scheme::nested(2));
    }

    #[test]
    fn nested_normalize_properties_small() {
        // Exhaustive over all words of length 4 over {e, a, a⁻¹} and all
        // schemes of size 2, against two metrics.
        let p = PointSet::from_names(["a"]).unwrap();
        let discrete = ExtendedMetric::extend_dstar(QuasiPseudometric::discrete(p.clone())).unwrap();
        let letters = [Letter::E, Letter::Gen(PointId(0)), Letter::Inv(PointId(0))];
        for idx in 0..81usize {
            let mut digits = idx;
            let mut word = Vec::new();
            for _ in 0..4 {
                word.push(letters[digits % 3]);
                digits /= 3;
            }
            let rep = Representation::new(Word::new(word));
            for scheme in enumerate_schemes(2).unwrap() {
                let (out, out_scheme) = nested_normalize(&rep, &scheme, &discrete).unwrap();
                assert!(out_scheme.is_nested());
                assert_eq!(out.target(), rep.target());
                assert_eq!(support(out.word()), support(rep.word()));
                assert_eq!(
                    gamma(&discrete, &out, &out_scheme).unwrap(),
                    gamma(&discrete, &rep, &scheme).unwrap()
                );
            }
        }
    }

    #[test]
    fn scheme_text_round_trip() {
        let scheme = parse_scheme("1-4 2-3", "<arg>").unwrap();
        assert_eq!(scheme.render(), "1-4 2-3");
        assert!(parse_scheme("1-3 2-4", "<arg>").is_err());
        assert!(parse_scheme("1-2 3", "<arg>").is_err());
        assert!(parse_scheme("", "<arg>").is_err());
    }
}
