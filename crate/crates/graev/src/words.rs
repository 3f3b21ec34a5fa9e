//! Free-group word algebra over the extended alphabet `X̃ = X ∪ {e} ∪ X⁻¹`.
//!
//! Points are interned string names mapped to small integer ids; words store
//! id+sign pairs so that exhaustive enumeration stays compact and hashable.
//! The identity is representable inside [`Word`] (as the letter `e`) but is
//! banned from [`ReducedWord`], whose empty sequence is the canonical
//! identity element.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Default cap on the number of words [`enumerate_fpn`] may produce.
pub const DEFAULT_WORD_CAP: usize = 1_000_000;

/// Identifier of an interned point name.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PointId(pub u32);

/// An ordered, interned set of point names.
///
/// The order of interning is the canonical point order used everywhere
/// (file formats, subset rendering, word enumeration).
#[derive(Clone, Debug, Default)]
pub struct PointSet {
    names: Vec<String>,
    index: HashMap<String, PointId>,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}
impl Eq for PointSet {}

impl PointSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns the given names in order. The name `e` is reserved for the
    /// identity letter and is rejected.
    pub fn from_names<I, S>(names: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = Self::new();
        for name in names {
            set.intern(name.as_ref())?;
        }
        Ok(set)
    }

    pub fn intern(&mut self, name: &str) -> Result<PointId, WordError> {
        if name == "e" {
            return Err(WordError::ReservedName);
        }
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(WordError::BadPointName(name.to_string()));
        }
        if let Some(&id) = self.index.get(name) {
            return Ok(id);
        }
        let id = PointId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn id(&self, name: &str) -> Option<PointId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: PointId) -> &str {
        &self.names[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = PointId> + '_ {
        (0..self.names.len() as u32).map(PointId)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    /// Parses the whitespace-separated word syntax against the interned
    /// names. Tokens are `name` or `name^-1`; `e` is the identity letter;
    /// the empty string is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        self.parse_word_impl(text, None)
    }

    /// As [`PointSet::parse_word`], but interns unknown point names.
    pub fn parse_word_mut(&mut self, text: &str) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            letters.push(parse_letter_interning(self, token)?);
        }
        Ok(Word { letters })
    }

    fn parse_word_impl(&self, text: &str, _: Option<()>) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if token == "e" {
                letters.push(Letter::E);
                continue;
            }
            let (name, inverted) = match token.strip_suffix("^-1") {
                Some(base) => (base, true),
                None => (token, false),
            };
            let id = self
                .id(name)
                .ok_or_else(|| WordError::UnknownPoint(name.to_string()))?;
            letters.push(if inverted {
                Letter::Inv(id)
            } else {
                Letter::Gen(id)
            });
        }
        Ok(Word { letters })
    }
}

fn parse_letter_interning(points: &mut PointSet, token: &str) -> Result<Letter, WordError> {
    if token == "e" {
        return Ok(Letter::E);
    }
    let (name, inverted) = match token.strip_suffix("^-1") {
        Some(base) => (base, true),
        None => (token, false),
    };
    let id = points.intern(name)?;
    Ok(if inverted {
        Letter::Inv(id)
    } else {
        Letter::Gen(id)
    })
}

/// A letter of the extended alphabet: a point, the inverse of a point, or
/// the identity symbol `e` (which is its own inverse).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Letter {
    E,
    Gen(PointId),
    Inv(PointId),
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::E => Letter::E,
            Letter::Gen(id) => Letter::Inv(id),
            Letter::Inv(id) => Letter::Gen(id),
        }
    }

    pub fn is_identity(self) -> bool {
        self == Letter::E
    }

    /// Sign contribution to the exponent sum: +1, -1, or 0 for `e`.
    pub fn sign(self) -> i64 {
        match self {
            Letter::E => 0,
            Letter::Gen(_) => 1,
            Letter::Inv(_) => -1,
        }
    }

    pub fn point(self) -> Option<PointId> {
        match self {
            Letter::E => None,
            Letter::Gen(id) | Letter::Inv(id) => Some(id),
        }
    }

    fn order_key(self) -> (u8, u32, u8) {
        match self {
            Letter::E => (0, 0, 0),
            Letter::Gen(id) => (1, id.0, 0),
            Letter::Inv(id) => (1, id.0, 1),
        }
    }

    pub fn render(self, points: &PointSet) -> String {
        match self {
            Letter::E => "e".to_string(),
            Letter::Gen(id) => points.name(id).to_string(),
            Letter::Inv(id) => format!("{}^-1", points.name(id)),
        }
    }
}

// Canonical letter order: e, then by point id with the positive letter
// before its inverse.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}
impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite, possibly unreduced word over the extended alphabet.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn render(&self, points: &PointSet) -> String {
        render_letters(&self.letters, points)
    }
}

impl From<ReducedWord> for Word {
    fn from(w: ReducedWord) -> Word {
        Word { letters: w.letters }
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word {
            letters: iter.into_iter().collect(),
        }
    }
}

/// A freely reduced word: no letter `e`, no adjacent letter–inverse pair.
/// The empty sequence is the group identity.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord::default()
    }

    pub fn letter(l: Letter) -> Self {
        match l {
            Letter::E => ReducedWord::identity(),
            _ => ReducedWord { letters: vec![l] },
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn render(&self, points: &PointSet) -> String {
        render_letters(&self.letters, points)
    }
}

// Canonical word order: by length, then lexicographically by letter order.
impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.letters.len(), &self.letters).cmp(&(other.letters.len(), &other.letters))
    }
}
impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn render_letters(letters: &[Letter], points: &PointSet) -> String {
    letters
        .iter()
        .map(|l| l.render(points))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum WordError {
    #[error("the name `e` is reserved for the identity letter")]
    ReservedName,
    #[error("invalid point name `{0}` (letters, digits and underscores only)")]
    BadPointName(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("enumeration of {requested} words exceeds the cap of {cap}")]
    CapExceeded { requested: u128, cap: usize },
    #[error("point set must be non-empty")]
    EmptyPointSet,
}

/// Freely reduces a word: removes every `e` and cancels adjacent
/// letter–inverse pairs until none remain. Idempotent.
pub fn reduce(word: &Word) -> ReducedWord {
    let mut stack: Vec<Letter> = Vec::with_capacity(word.len());
    for &letter in word.letters() {
        if letter.is_identity() {
            continue;
        }
        if stack.last().copied() == Some(letter.inverse()) {
            stack.pop();
        } else {
            stack.push(letter);
        }
    }
    ReducedWord { letters: stack }
}

/// Product in the free group; the result is reduced.
pub fn multiply(g: &ReducedWord, h: &ReducedWord) -> ReducedWord {
    let mut stack = g.letters.clone();
    for &letter in &h.letters {
        if stack.last().copied() == Some(letter.inverse()) {
            stack.pop();
        } else {
            stack.push(letter);
        }
    }
    ReducedWord { letters: stack }
}

/// Group inverse: reverses the sequence and flips every sign.
pub fn invert(g: &ReducedWord) -> ReducedWord {
    ReducedWord {
        letters: g.letters.iter().rev().map(|l| l.inverse()).collect(),
    }
}

/// String length, counting occurrences of `e`.
pub fn length(word: &Word) -> usize {
    word.len()
}

/// The letters occurring in the word together with their inverses,
/// excluding `e`.
pub fn support(word: &Word) -> BTreeSet<Letter> {
    let mut set = BTreeSet::new();
    for &letter in word.letters() {
        if !letter.is_identity() {
            set.insert(letter);
            set.insert(letter.inverse());
        }
    }
    set
}

/// Sum of letter signs; `e` contributes 0.
pub fn exponent_sum(word: &Word) -> i64 {
    word.letters().iter().map(|l| l.sign()).sum()
}

/// True iff the word contains no two adjacent symbols `x`, `x⁻¹` for any
/// letter of the extended alphabet. Since `e` is its own inverse, adjacent
/// `e e` is rejected as well.
pub fn is_almost_irreducible(word: &Word) -> bool {
    word.letters()
        .windows(2)
        .all(|pair| pair[1] != pair[0].inverse())
}

/// Number of reduced words of length at most `n` over `k` points.
pub fn fpn_count(k: usize, n: usize) -> u128 {
    let two_k = 2 * k as u128;
    let mut count: u128 = 1;
    let mut layer: u128 = 1;
    for j in 0..n {
        layer *= if j == 0 { two_k } else { two_k - 1 };
        count += layer;
    }
    count
}

/// Enumerates all reduced words of length at most `n`, in canonical order
/// (shorter first, then lexicographic), using the default cap.
pub fn enumerate_fpn(points: &PointSet, n: usize) -> Result<Vec<ReducedWord>, WordError> {
    enumerate_fpn_capped(points, n, DEFAULT_WORD_CAP)
}

/// As [`enumerate_fpn`] with an explicit cap on the number of words.
pub fn enumerate_fpn_capped(
    points: &PointSet,
    n: usize,
    cap: usize,
) -> Result<Vec<ReducedWord>, WordError> {
    if points.is_empty() {
        return Err(WordError::EmptyPointSet);
    }
    let expected = fpn_count(points.len(), n);
    if expected > cap as u128 {
        return Err(WordError::CapExceeded {
            requested: expected,
            cap,
        });
    }

    let alphabet: Vec<Letter> = points
        .ids()
        .flat_map(|id| [Letter::Gen(id), Letter::Inv(id)])
        .collect();
    let mut out = Vec::with_capacity(expected as usize);
    out.push(ReducedWord::identity());
    let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in &frontier {
            for &letter in &alphabet {
                if prefix.last().copied() == Some(letter.inverse()) {
                    continue;
                }
                let mut word = prefix.clone();
                word.push(letter);
                next.push(word);
            }
        }
        // Per-length extension in alphabet order is already lexicographic.
        for word in &next {
            out.push(ReducedWord {
                letters: word.clone(),
            });
        }
        frontier = next;
    }
    debug_assert_eq!(out.len() as u128, expected);
    Ok(out)
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(" "))
    }
}
