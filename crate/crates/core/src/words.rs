// SPDX-License-Identifier: Apache-2.0

//! Freely reduced words over a symmetric alphabet.
//!
//! Letters are small integers: generator `i` is `2i`, its inverse is `2i + 1`,
//! so the involution is a single xor. Names only appear when parsing or
//! rendering.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("letter index {0} is outside an alphabet of {1} generators")]
    LetterOutOfRange(u32, usize),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
}

/// A letter of the symmetric alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(pub u32);

impl Letter {
    #[inline]
    pub const fn generator(index: usize) -> Self {
        Letter((index as u32) << 1)
    }

    #[inline]
    pub const fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    #[inline]
    pub const fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// Index of the underlying positive generator.
    #[inline]
    pub const fn generator_index(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

/// Generator names plus the formal-inverse pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    generators: Vec<String>,
}

const INVERSE_SUFFIXES: [&str; 2] = ["^-1", "⁻¹"];

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let generators: Vec<String> = names.into_iter().map(Into::into).collect();
        if generators.is_empty() {
            return Err(WordError::InvalidAlphabet("no generators".into()));
        }
        let mut seen = BTreeSet::new();
        for name in &generators {
            if name.is_empty() {
                return Err(WordError::InvalidAlphabet("empty generator name".into()));
            }
            if name.chars().any(char::is_whitespace)
                || INVERSE_SUFFIXES.iter().any(|s| name.contains(s))
                || name.contains('^')
            {
                return Err(WordError::InvalidAlphabet(format!(
                    "generator name `{name}` contains whitespace or an inverse marker"
                )));
            }
            if !seen.insert(name.as_str()) {
                return Err(WordError::InvalidAlphabet(format!("duplicate generator `{name}`")));
            }
        }
        Ok(Alphabet { generators })
    }

    /// Alphabet with generators named `a`, `b`, `c`, ...
    pub fn standard(rank: usize) -> Self {
        assert!((1..=26).contains(&rank), "standard alphabets have 1..=26 generators");
        Alphabet::new((0..rank).map(|i| ((b'a' + i as u8) as char).to_string()))
            .expect("standard names are valid")
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Number of letters in the symmetric alphabet (twice the rank).
    pub fn size(&self) -> usize {
        2 * self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.size() as u32).map(Letter)
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.index() < self.size()
    }

    pub fn letter(&self, name: &str) -> Result<Letter, WordError> {
        for suffix in INVERSE_SUFFIXES {
            if let Some(base) = name.strip_suffix(suffix) {
                return self.generator(base).map(Letter::inverse);
            }
        }
        self.generator(name)
    }

    fn generator(&self, name: &str) -> Result<Letter, WordError> {
        self.generators
            .iter()
            .position(|g| g == name)
            .map(Letter::generator)
            .ok_or_else(|| WordError::UnknownLetter(name.to_string()))
    }

    pub fn name(&self, letter: Letter) -> String {
        let base = &self.generators[letter.generator_index()];
        if letter.is_inverse() {
            format!("{base}^-1")
        } else {
            base.clone()
        }
    }

    fn single_char_names(&self) -> bool {
        self.generators.iter().all(|g| g.chars().count() == 1)
    }

    /// Parses and freely reduces a word. Tokens are separated by whitespace;
    /// with single-character generator names they may also be juxtaposed
    /// (`"aba^-1"`). `1` and `ε` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<ReducedWord, WordError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" || token == "ε" {
                continue;
            }
            match self.letter(token) {
                Ok(letter) => letters.push(letter),
                Err(err) if self.single_char_names() => {
                    letters.extend(self.split_juxtaposed(token).map_err(|_| err)?)
                }
                Err(err) => return Err(err),
            }
        }
        Ok(ReducedWord::reduce(letters))
    }

    fn split_juxtaposed(&self, token: &str) -> Result<Vec<Letter>, WordError> {
        let mut out = Vec::new();
        let mut rest = token;
        while let Some(ch) = rest.chars().next() {
            rest = &rest[ch.len_utf8()..];
            let mut letter = self.generator(&ch.to_string())?;
            for suffix in INVERSE_SUFFIXES {
                if let Some(after) = rest.strip_prefix(suffix) {
                    letter = letter.inverse();
                    rest = after;
                    break;
                }
            }
            out.push(letter);
        }
        Ok(out)
    }

    /// Freely reduces a raw sequence after checking every letter belongs here.
    pub fn reduce(&self, raw: &[Letter]) -> Result<ReducedWord, WordError> {
        if let Some(bad) = raw.iter().find(|l| !self.contains(**l)) {
            return Err(WordError::LetterOutOfRange(bad.0, self.rank()));
        }
        Ok(ReducedWord::reduce(raw.iter().copied()))
    }

    pub fn render(&self, word: &ReducedWord) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        word.letters()
            .iter()
            .map(|l| self.name(*l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn display<'a>(&'a self, word: &'a ReducedWord) -> DisplayWord<'a> {
        DisplayWord { alphabet: self, word }
    }
}

pub struct DisplayWord<'a> {
    alphabet: &'a Alphabet,
    word: &'a ReducedWord,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.render(self.word))
    }
}

/// A freely reduced word. Immutable once built.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReducedWord(Vec<Letter>);

impl ReducedWord {
    pub fn empty() -> Self {
        ReducedWord(Vec::new())
    }

    /// Free reduction with a stack; the result is the unique reduced form.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for letter in raw {
            if out.last() == Some(&letter.inverse()) {
                out.pop();
            } else {
                out.push(letter);
            }
        }
        ReducedWord(out)
    }

    /// Wraps letters already known to be reduced. Returns `None` otherwise.
    pub fn from_reduced(letters: Vec<Letter>) -> Option<Self> {
        is_reduced(&letters).then_some(ReducedWord(letters))
    }

    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>) -> Self {
        debug_assert!(is_reduced(&letters));
        ReducedWord(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn invert(&self) -> Self {
        ReducedWord(invert_letters(&self.0))
    }

    /// Reduced product `self · other` and the number of letters cancelled
    /// from each side at the junction.
    pub fn concat_reduced(&self, other: &ReducedWord) -> (ReducedWord, usize) {
        let depth = cancellation_depth(&self.0, &other.0);
        let mut letters = Vec::with_capacity(self.len() + other.len() - 2 * depth);
        letters.extend_from_slice(&self.0[..self.len() - depth]);
        letters.extend_from_slice(&other.0[depth..]);
        (ReducedWord(letters), depth)
    }

    /// All contiguous subwords of the given length.
    pub fn factors(&self, length: usize) -> BTreeSet<ReducedWord> {
        if length == 0 {
            return BTreeSet::from([ReducedWord::empty()]);
        }
        self.0
            .windows(length)
            .map(|w| ReducedWord(w.to_vec()))
            .collect()
    }

    pub fn subword(&self, start: usize, len: usize) -> ReducedWord {
        ReducedWord(self.0[start..start + len].to_vec())
    }

    /// Cyclically reduced: nonempty-safe check that the last letter does not
    /// cancel against the first.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(first), Some(last)) => self.0.len() == 1 || *last != first.inverse(),
            _ => true,
        }
    }

    /// `self^k` without reduction checks; valid when cyclically reduced.
    pub fn power(&self, k: usize) -> ReducedWord {
        debug_assert!(self.is_cyclically_reduced());
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.0);
        }
        ReducedWord(letters)
    }

    pub fn starts_with(&self, prefix: &ReducedWord) -> bool {
        self.0.starts_with(&prefix.0)
    }
}

impl AsRef<[Letter]> for ReducedWord {
    fn as_ref(&self) -> &[Letter] {
        &self.0
    }
}

pub fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|p| p[1] != p[0].inverse())
}

pub fn invert_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

/// Length of the cancelling junction between two reduced words.
pub fn cancellation_depth(left: &[Letter], right: &[Letter]) -> usize {
    left.iter()
        .rev()
        .zip(right)
        .take_while(|(l, r)| **r == l.inverse())
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Alphabet {
        Alphabet::standard(3)
    }

    fn w(text: &str) -> ReducedWord {
        abc().parse_word(text).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("a a^-1"), ReducedWord::empty());
        assert_eq!(w("a b b^-1 c"), w("a c"));
        assert_eq!(w("a b a^-1").len(), 3);
    }

    #[test]
    fn unknown_letter() {
        assert_eq!(abc().parse_word("a z"), Err(WordError::UnknownLetter("z".into())));
        let err = abc().reduce(&[Letter(0), Letter(9)]).unwrap_err();
        assert_eq!(err, WordError::LetterOutOfRange(9, 3));
    }

    #[test]
    fn reader_accepts_both_inverse_spellings_and_juxtaposition() {
        let alpha = abc();
        assert_eq!(alpha.parse_word("b⁻¹ a⁻¹"), alpha.parse_word("b^-1 a^-1"));
        assert_eq!(alpha.parse_word("aba⁻¹").unwrap(), w("a b a^-1"));
        assert_eq!(alpha.parse_word("ab^-1c").unwrap(), w("a b^-1 c"));
        assert_eq!(alpha.parse_word("ε").unwrap(), ReducedWord::empty());
    }

    #[test]
    fn multi_character_names() {
        let alpha = Alphabet::new(["x1", "x2"]).unwrap();
        let word = alpha.parse_word("x1 x2^-1 x2 x1").unwrap();
        assert_eq!(alpha.render(&word), "x1 x1");
        assert!(alpha.parse_word("x1x2").is_err());
    }

    #[test]
    fn invalid_alphabets() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new([""]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a^-1"]).is_err());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(ReducedWord::empty().invert(), ReducedWord::empty());
        assert_eq!(w("a b").invert(), w("b^-1 a^-1"));
        assert_eq!(w("c a").invert(), w("a^-1 c^-1"));
    }

    #[test]
    fn concat_examples() {
        assert_eq!(w("a b").concat_reduced(&w("b^-1 c")), (w("a c"), 1));
        assert_eq!(w("a").concat_reduced(&w("b")), (w("a b"), 0));
        assert_eq!(w("a b").concat_reduced(&w("b^-1 a^-1")), (ReducedWord::empty(), 2));
    }

    #[test]
    fn factor_examples() {
        let word = w("a b a c");
        let two: Vec<_> = word.factors(2).into_iter().collect();
        assert_eq!(two.len(), 3);
        for f in ["a b", "b a", "a c"] {
            assert!(two.contains(&w(f)));
        }
        assert_eq!(word.factors(0), BTreeSet::from([ReducedWord::empty()]));
        assert!(word.factors(5).is_empty());
    }

    #[test]
    fn render_round_trip() {
        let alpha = abc();
        let word = w("a b^-1 c");
        assert_eq!(alpha.render(&word), "a b^-1 c");
        assert_eq!(alpha.parse_word(&alpha.render(&word)).unwrap(), word);
        assert_eq!(alpha.render(&ReducedWord::empty()), "ε");
    }

    #[test]
    fn cyclic_reduction() {
        assert!(w("a b").is_cyclically_reduced());
        assert!(!w("a b a^-1").is_cyclically_reduced());
        assert!(w("a").is_cyclically_reduced());
    }
}
