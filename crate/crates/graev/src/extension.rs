//! The Graev extension of a bounded quasi-pseudometric to the free group.
//!
//! The invariant quasi-prenorm `N_d(g)` is the infimum of `Γ_d` over all
//! representations of `g` and all schemes on their positions. On the search
//! space that attains the minimum — the word `g` with identity letters
//! inserted into distinct gaps, at most one per gap and at most `ℓ(g)` in
//! total — the infimum becomes a finite minimum, and two independent
//! routes compute it here:
//!
//! - [`GraevExtension::prenorm_bruteforce`] enumerates every insertion word
//!   crossed with every scheme of matching size (the oracle; capped).
//! - [`GraevExtension::prenorm`] runs an interval DP over the letters of
//!   `g`, where a letter is either matched to a later letter (non-crossing)
//!   or matched to an inserted identity letter. An inserted identity placed
//!   next to its partner can never cross another chord, so the e-match is a
//!   per-letter option with a position-independent cost.
//!
//! All arithmetic is exact: costs are integers over a common denominator
//! and convert back to rationals only at the boundary.

use dashmap::DashMap;
use thiserror::Error;

use crate::metrics::{ExtendedMetric, MetricError, PairCostTable, QuasiPseudometric, Rat};
use crate::par;
use crate::report::{Check, Report};
use crate::schemes::scheme_pairs;
use crate::words::{invert, multiply, Letter, ReducedWord};

/// Default cap on the reduced length accepted by the brute-force route.
pub const DEFAULT_BRUTE_CAP: usize = 8;

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum ExtensionError {
    #[error("word of length {length} exceeds the brute-force cap of {cap}")]
    CapExceeded { length: usize, cap: usize },
}

/// A quasi-pseudometric bounded by 1, extended to an invariant
/// quasi-prenorm on the free group over its points.
///
/// Queries are pure; the memo is a transparent cache (concurrent fills are
/// allowed and always agree) so a built extension is safe to share across
/// threads.
pub struct GraevExtension {
    dstar: ExtendedMetric,
    costs: PairCostTable,
    memo: DashMap<ReducedWord, i64>,
}

impl GraevExtension {
    /// Builds the extension; the metric must be bounded by 1.
    pub fn new(metric: QuasiPseudometric) -> Result<Self, MetricError> {
        let dstar = ExtendedMetric::extend_dstar(metric)?;
        Self::from_extended(dstar)
    }

    pub fn from_extended(dstar: ExtendedMetric) -> Result<Self, MetricError> {
        let costs = PairCostTable::build(&dstar)?;
        Ok(GraevExtension {
            dstar,
            costs,
            memo: DashMap::new(),
        })
    }

    pub fn dstar(&self) -> &ExtendedMetric {
        &self.dstar
    }

    pub fn metric(&self) -> &QuasiPseudometric {
        self.dstar.base()
    }

    fn indices(&self, g: &ReducedWord) -> Vec<usize> {
        let k = self.metric().points().len();
        g.letters()
            .iter()
            .map(|&l| crate::metrics::alphabet_index(l, k))
            .collect()
    }

    /// The invariant quasi-prenorm `N_d(g)`, by interval DP with
    /// memoization.
    pub fn prenorm(&self, g: &ReducedWord) -> Rat {
        self.costs.to_rat(self.prenorm_scaled(g))
    }

    fn prenorm_scaled(&self, g: &ReducedWord) -> i64 {
        if g.is_identity() {
            return 0;
        }
        if let Some(found) = self.memo.get(g) {
            return *found;
        }
        let value = self.dp_min(&self.indices(g));
        self.memo.insert(g.clone(), value);
        value
    }

    fn dp_min(&self, idx: &[usize]) -> i64 {
        let l = idx.len();
        if l == 0 {
            return 0;
        }
        // best[i * l + j] = minimal cost over letters i..=j; empty = 0.
        let mut best = vec![0i64; l * l];
        for len in 1..=l {
            for i in 0..=(l - len) {
                let j = i + len - 1;
                let rest = if i + 1 <= j { best[(i + 1) * l + j] } else { 0 };
                let mut value = self.costs.e_cost(idx[i]) + rest;
                for m in (i + 1)..=j {
                    let inner = if m > i + 1 {
                        best[(i + 1) * l + (m - 1)]
                    } else {
                        0
                    };
                    let outer = if m + 1 <= j { best[(m + 1) * l + j] } else { 0 };
                    let cand = self.costs.cost(idx[i], idx[m]) + inner + outer;
                    if cand < value {
                        value = cand;
                    }
                }
                best[i * l + j] = value;
            }
        }
        best[l - 1]
    }

    /// Prenorms of many words at once; parallel with the `parallel`
    /// feature, sequential otherwise, output in input order either way.
    pub fn prenorm_many(&self, words: &[ReducedWord]) -> Vec<Rat> {
        par::map(words, |w| self.prenorm(w))
    }

    /// The oracle route with the default length cap: minimum of `Γ_d` over
    /// every insertion word (identity letters into distinct gaps, at most
    /// `ℓ(g)` of them, total length even) crossed with every scheme of
    /// matching size.
    pub fn prenorm_bruteforce(&self, g: &ReducedWord) -> Result<Rat, ExtensionError> {
        self.prenorm_bruteforce_capped(g, DEFAULT_BRUTE_CAP)
    }

    pub fn prenorm_bruteforce_capped(
        &self,
        g: &ReducedWord,
        cap: usize,
    ) -> Result<Rat, ExtensionError> {
        if g.is_identity() {
            return Ok(Rat::from_integer(0));
        }
        let l = g.len();
        if l > cap {
            return Err(ExtensionError::CapExceeded { length: l, cap });
        }
        let idx = self.indices(g);
        let mut best = i64::MAX;
        let mut k = l % 2;
        while k <= l {
            let total = l + k;
            let schemes = scheme_pairs(total / 2);
            let mut word = vec![0usize; total];
            for_each_combination(l + 1, k, &mut |gaps| {
                splice(&idx, gaps, &mut word);
                for pairs in schemes.iter() {
                    let mut sum = 0i64;
                    for &(a, b) in pairs {
                        sum += self.costs.cost(word[a as usize], word[b as usize]);
                    }
                    if sum < best {
                        best = sum;
                    }
                }
            });
            k += 2;
        }
        Ok(self.costs.to_rat(best))
    }

    /// The two-sided invariant quasi-pseudometric `d̂(g, h) = N_d(g⁻¹h)`.
    pub fn distance(&self, g: &ReducedWord, h: &ReducedWord) -> Rat {
        self.prenorm(&multiply(&invert(g), h))
    }

    /// `{h ∈ universe : d̂(center, h) < radius}`, sorted canonically.
    /// The inequality is strict.
    pub fn ball(
        &self,
        center: &ReducedWord,
        radius: &Rat,
        universe: &[ReducedWord],
    ) -> Vec<ReducedWord> {
        let flags = par::map(universe, |h| self.distance(center, h) < *radius);
        let mut inside: Vec<ReducedWord> = universe
            .iter()
            .zip(flags)
            .filter(|(_, keep)| *keep)
            .map(|(h, _)| h.clone())
            .collect();
        inside.sort();
        inside
    }

    /// Verifies the quasi-prenorm axioms on a finite sample: `N(ε) = 0`,
    /// subadditivity and conjugation invariance on all pairs, and the
    /// two-sided invariance inequality
    /// `d̂(x₁…xₘ, y₁…yₘ) ≤ Σ d̂(xᵢ, yᵢ)` on all alphabet-letter tuples of
    /// length up to 3.
    pub fn check_prenorm_axioms(&self, sample: &[ReducedWord]) -> Report {
        let mut report = Report::new();
        let zero = Rat::from_integer(0);

        let identity_value = self.prenorm(&ReducedWord::identity());
        report.push(Check::of(
            "prenorm-identity",
            "N(ε)=0",
            identity_value == zero,
            (identity_value != zero).then(|| format!("N(ε)={identity_value}")),
        ));

        let points = self.metric().points().clone();
        let mut sub_fail = None;
        let mut conj_fail = None;
        for g in sample {
            for h in sample {
                let ng = self.prenorm(g);
                let nh = self.prenorm(h);
                let ngh = self.prenorm(&multiply(g, h));
                if ngh > ng + nh && sub_fail.is_none() {
                    sub_fail = Some(format!(
                        "N(gh)={} > {}+{} for g=\"{}\" h=\"{}\"",
                        ngh,
                        ng,
                        nh,
                        g.render(&points),
                        h.render(&points)
                    ));
                }
                let conj = multiply(&multiply(&invert(h), g), h);
                let nconj = self.prenorm(&conj);
                if nconj != ng && conj_fail.is_none() {
                    conj_fail = Some(format!(
                        "N(h⁻¹gh)={} ≠ N(g)={} for g=\"{}\" h=\"{}\"",
                        nconj,
                        ng,
                        g.render(&points),
                        h.render(&points)
                    ));
                }
            }
        }
        report.push(Check::of(
            "prenorm-subadditive",
            format!("pairs={}", sample.len() * sample.len()),
            sub_fail.is_none(),
            sub_fail,
        ));
        report.push(Check::of(
            "prenorm-conjugation-invariant",
            format!("pairs={}", sample.len() * sample.len()),
            conj_fail.is_none(),
            conj_fail,
        ));

        // Letters of the extended alphabet as group elements.
        let mut alphabet: Vec<ReducedWord> = vec![ReducedWord::identity()];
        for id in points.ids() {
            alphabet.push(ReducedWord::letter(Letter::Gen(id)));
            alphabet.push(ReducedWord::letter(Letter::Inv(id)));
        }
        let mut tuple_fail = None;
        let mut tuple_count = 0usize;
        for m in 1..=3usize {
            let mut xs = vec![0usize; m];
            loop {
                let mut ys = vec![0usize; m];
                loop {
                    tuple_count += 1;
                    let product =
                        |ids: &[usize]| -> ReducedWord {
                            ids.iter().fold(ReducedWord::identity(), |acc, &i| {
                                multiply(&acc, &alphabet[i])
                            })
                        };
                    let lhs = self.distance(&product(&xs), &product(&ys));
                    let rhs: Rat = xs
                        .iter()
                        .zip(&ys)
                        .map(|(&x, &y)| self.distance(&alphabet[x], &alphabet[y]))
                        .sum();
                    if lhs > rhs && tuple_fail.is_none() {
                        tuple_fail = Some(format!("tuple length {m}: {lhs} > {rhs}"));
                    }
                    if !advance(&mut ys, alphabet.len()) {
                        break;
                    }
                }
                if !advance(&mut xs, alphabet.len()) {
                    break;
                }
            }
        }
        report.push(Check::of(
            "two-sided-invariance",
            format!("tuples={tuple_count}"),
            tuple_fail.is_none(),
            tuple_fail,
        ));
        report
    }
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Interleaves the letters with an identity letter (alphabet index 0) in
/// each chosen gap; gap `i` precedes letter `i`, gap `len` is the end.
fn splice(letters: &[usize], gaps: &[usize], out: &mut [usize]) {
    let mut at = 0;
    let mut next_gap = 0;
    for (i, &letter) in letters.iter().enumerate() {
        if next_gap < gaps.len() && gaps[next_gap] == i {
            out[at] = 0;
            at += 1;
            next_gap += 1;
        }
        out[at] = letter;
        at += 1;
    }
    if next_gap < gaps.len() {
        debug_assert_eq!(gaps[next_gap], letters.len());
        out[at] = 0;
        at += 1;
    }
    debug_assert_eq!(at, out.len());
}

/// Lexicographic k-combinations of `0..n`.
fn for_each_combination(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        f(&combo);
        let mut i = k;
        while i > 0 && combo[i - 1] == n - k + (i - 1) {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        combo[i - 1] += 1;
        for j in i..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}
