// SPDX-License-Identifier: Apache-2.0

//! Train-track representatives on a rose: substitution-style self-maps of a
//! free basis, their iterates, empirical no-cancellation verification and
//! fixed rays of expanding seeds.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::rays::RayStream;
use crate::words::{cancellation_depth, Alphabet, Letter, ReducedWord, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrainTrackError {
    #[error("word error: {0}")]
    Word(#[from] WordError),
    #[error("map file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("image of generator `{0}` is empty")]
    EmptyImage(String),
    #[error("generator `{0}` has no image rule")]
    MissingImage(String),
    #[error(
        "cancellation at turn `{turn}` (occurs in iterate {iterate} of `{generator}`): \
         not a train-track representative at this depth"
    )]
    CancellationDetected {
        turn: String,
        generator: String,
        iterate: usize,
    },
    #[error("transition matrix is not primitive (no positive power up to exponent {0})")]
    NotPrimitive(usize),
    #[error("image of seed `{0}` does not start with the seed and grow")]
    SeedNotExpanding(String),
    #[error("verification depth must be at least 1")]
    ZeroDepth,
}

/// A self-map of the free group on `alphabet`, given by the images of the
/// positive generators.
#[derive(Clone, Debug)]
pub struct TrainTrackMap {
    alphabet: Alphabet,
    images: Vec<ReducedWord>,
    primitive: bool,
    requested_depth: Option<usize>,
    verified_depth: usize,
    source_hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub depth: usize,
    /// Distinct two-letter turns crossed by the iterates, up to `depth`.
    pub turns_checked: usize,
    /// Lengths `|f^depth(e)|` per positive generator.
    pub iterate_lengths: Vec<u128>,
}

impl TrainTrackMap {
    pub fn new(alphabet: Alphabet, images: Vec<ReducedWord>) -> Result<Self, TrainTrackError> {
        if images.len() != alphabet.rank() {
            let missing = alphabet.generators()[images.len().min(alphabet.rank() - 1)].clone();
            return Err(TrainTrackError::MissingImage(missing));
        }
        for (i, image) in images.iter().enumerate() {
            if image.is_empty() {
                return Err(TrainTrackError::EmptyImage(alphabet.generators()[i].clone()));
            }
            alphabet.reduce(image.letters())?;
        }
        let mut map = TrainTrackMap {
            alphabet,
            images,
            primitive: false,
            requested_depth: None,
            verified_depth: 0,
            source_hash: String::new(),
        };
        map.source_hash = sha256_hex(map.to_map_text().as_bytes());
        Ok(map)
    }

    /// Builds a map from `generator -> image` rules written with the
    /// standard alphabet reader.
    pub fn from_rules(alphabet: Alphabet, rules: &[&str]) -> Result<Self, TrainTrackError> {
        let images = rules
            .iter()
            .map(|r| alphabet.parse_word(r))
            .collect::<Result<Vec<_>, _>>()?;
        TrainTrackMap::new(alphabet, images)
    }

    /// Parses a map definition file:
    ///
    /// ```text
    /// # comment
    /// alphabet: a b c
    /// a -> a b
    /// b -> a c
    /// c -> a
    /// primitive
    /// verify_depth = 8
    /// ```
    ///
    /// The alphabet line is optional; without it the generators are the rule
    /// heads in order of appearance.
    pub fn parse(text: &str) -> Result<Self, TrainTrackError> {
        let mut declared: Option<Vec<String>> = None;
        let mut rules: Vec<(usize, String, String)> = Vec::new();
        let mut primitive = false;
        let mut requested_depth = None;
        for (index, raw) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| TrainTrackError::Parse {
                line: line_no,
                message,
            };
            if let Some(rest) = line.strip_prefix("alphabet") {
                let rest = rest.trim_start().trim_start_matches(':');
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if names.is_empty() {
                    return Err(err("empty alphabet declaration".into()));
                }
                declared = Some(names);
            } else if line == "primitive" {
                primitive = true;
            } else if let Some(rest) = line.strip_prefix("verify_depth") {
                let value = rest.trim_start().trim_start_matches('=').trim();
                let depth = value
                    .parse::<usize>()
                    .map_err(|_| err(format!("invalid verify_depth `{value}`")))?;
                requested_depth = Some(depth);
            } else if let Some((head, image)) = line.split_once("->") {
                let head = head.trim();
                if head.is_empty() || head.contains(char::is_whitespace) {
                    return Err(err(format!("invalid rule head `{head}`")));
                }
                rules.push((line_no, head.to_string(), image.trim().to_string()));
            } else {
                return Err(err(format!("unrecognised line `{line}`")));
            }
        }
        let names = match declared {
            Some(names) => names,
            None => {
                let mut names: Vec<String> = Vec::new();
                for (_, head, _) in &rules {
                    if !names.contains(head) {
                        names.push(head.clone());
                    }
                }
                names
            }
        };
        let alphabet = Alphabet::new(names).map_err(|e| TrainTrackError::Parse {
            line: 0,
            message: e.to_string(),
        })?;
        let mut images: Vec<Option<ReducedWord>> = vec![None; alphabet.rank()];
        for (line, head, image) in &rules {
            let letter = alphabet.letter(head).map_err(|e| TrainTrackError::Parse {
                line: *line,
                message: e.to_string(),
            })?;
            if letter.is_inverse() {
                return Err(TrainTrackError::Parse {
                    line: *line,
                    message: format!("rule head `{head}` must be a positive generator"),
                });
            }
            let word = alphabet.parse_word(image).map_err(|e| TrainTrackError::Parse {
                line: *line,
                message: e.to_string(),
            })?;
            if images[letter.generator_index()].replace(word).is_some() {
                return Err(TrainTrackError::Parse {
                    line: *line,
                    message: format!("duplicate rule for `{head}`"),
                });
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| TrainTrackError::MissingImage(alphabet.generators()[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut map = TrainTrackMap::new(alphabet, images)?;
        map.requested_depth = requested_depth;
        map.source_hash = sha256_hex(text.as_bytes());
        if primitive {
            map = map.flag_primitive()?;
        }
        Ok(map)
    }

    /// Canonical map-file rendering.
    pub fn to_map_text(&self) -> String {
        let mut out = format!("alphabet: {}\n", self.alphabet.generators().join(" "));
        for (name, image) in self.alphabet.generators().iter().zip(&self.images) {
            out.push_str(&format!("{name} -> {}\n", self.alphabet.render(image)));
        }
        if self.primitive {
            out.push_str("primitive\n");
        }
        if let Some(depth) = self.requested_depth {
            out.push_str(&format!("verify_depth = {depth}\n"));
        }
        out
    }

    /// Marks the map primitive after checking its transition matrix.
    pub fn flag_primitive(mut self) -> Result<Self, TrainTrackError> {
        let bound = self.alphabet.rank().pow(2);
        if !self.is_primitive() {
            return Err(TrainTrackError::NotPrimitive(bound));
        }
        self.primitive = true;
        Ok(self)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn primitive(&self) -> bool {
        self.primitive
    }

    pub fn verified_depth(&self) -> usize {
        self.verified_depth
    }

    /// Depth requested by the map file's `verify_depth` line.
    pub fn requested_depth(&self) -> Option<usize> {
        self.requested_depth
    }

    /// SHA-256 of the map file this map was parsed from (or of its canonical
    /// rendering when built programmatically).
    pub fn source_hash(&self) -> &str {
        &self.source_hash
    }

    pub fn images(&self) -> &[ReducedWord] {
        &self.images
    }

    /// Image of any letter; inverse letters map to inverted images.
    pub fn image(&self, letter: Letter) -> ReducedWord {
        let image = &self.images[letter.generator_index()];
        if letter.is_inverse() {
            image.invert()
        } else {
            image.clone()
        }
    }

    fn image_letters(&self, letter: Letter) -> impl DoubleEndedIterator<Item = Letter> + '_ {
        let image = self.images[letter.generator_index()].letters();
        let inverse = letter.is_inverse();
        let forward = (!inverse).then(|| image.iter().copied());
        let backward = inverse.then(|| image.iter().rev().map(|l| l.inverse()));
        forward.into_iter().flatten().chain(backward.into_iter().flatten())
    }

    fn first_of_image(&self, letter: Letter) -> Letter {
        let image = self.images[letter.generator_index()].letters();
        if letter.is_inverse() {
            image[image.len() - 1].inverse()
        } else {
            image[0]
        }
    }

    fn last_of_image(&self, letter: Letter) -> Letter {
        self.first_of_image(letter.inverse()).inverse()
    }

    /// Reduced image of `w` under the `n`-fold iterate.
    pub fn apply(&self, w: &ReducedWord, n: usize) -> ReducedWord {
        let mut current = w.clone();
        for _ in 0..n {
            current = ReducedWord::reduce(current.letters().iter().flat_map(|l| self.image_letters(*l)));
        }
        current
    }

    /// `f^n(e)` for a single letter.
    pub fn iterate(&self, letter: Letter, n: usize) -> ReducedWord {
        self.apply(&ReducedWord::reduce([letter]), n)
    }

    /// Unsigned occurrence counts: `matrix[i][j]` counts generator `i` in the
    /// image of generator `j`.
    pub fn transition_matrix(&self) -> Vec<Vec<u64>> {
        let rank = self.alphabet.rank();
        let mut matrix = vec![vec![0u64; rank]; rank];
        for (j, image) in self.images.iter().enumerate() {
            for letter in image.letters() {
                matrix[letter.generator_index()][j] += 1;
            }
        }
        matrix
    }

    /// Some power up to `rank²` has all entries positive.
    pub fn is_primitive(&self) -> bool {
        let rank = self.alphabet.rank();
        let base: Vec<Vec<bool>> = self
            .transition_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(|v| v > 0).collect())
            .collect();
        let mut power = base.clone();
        for _ in 0..rank * rank {
            if power.iter().all(|row| row.iter().all(|v| *v)) {
                return true;
            }
            power = bool_product(&power, &base);
        }
        false
    }

    /// Checks that no turn crossed by an iterate `f^k(e)`, `1 ≤ k ≤ depth`,
    /// cancels under one more application of the map.
    ///
    /// Works on turn sets rather than materialised iterates, so large depths
    /// are cheap: the turns of `f^k(e)` are the turns inside images of its
    /// letters plus the images of its own turns.
    pub fn verify(&self, depth: usize) -> Result<VerificationReport, TrainTrackError> {
        if depth == 0 {
            return Err(TrainTrackError::ZeroDepth);
        }
        let mut checked: HashSet<(Letter, Letter)> = HashSet::new();
        let mut iterate_lengths = Vec::with_capacity(self.alphabet.rank());
        for g in 0..self.alphabet.rank() {
            let generator = Letter::generator(g);
            let mut letters: BTreeSet<Letter> = BTreeSet::from([generator]);
            let mut turns: BTreeSet<(Letter, Letter)> = BTreeSet::new();
            for k in 1..=depth {
                let mut next_letters = BTreeSet::new();
                let mut next_turns = BTreeSet::new();
                for &x in &letters {
                    let image: Vec<Letter> = self.image_letters(x).collect();
                    next_letters.extend(image.iter().copied());
                    next_turns.extend(image.windows(2).map(|p| (p[0], p[1])));
                }
                for &(x, y) in &turns {
                    next_turns.insert((self.last_of_image(x), self.first_of_image(y)));
                }
                letters = next_letters;
                turns = next_turns;
                for &(x, y) in &turns {
                    if !checked.insert((x, y)) {
                        continue;
                    }
                    let left: Vec<Letter> = self.image_letters(x).collect();
                    let right: Vec<Letter> = self.image_letters(y).collect();
                    if cancellation_depth(&left, &right) > 0 {
                        return Err(TrainTrackError::CancellationDetected {
                            turn: format!("{} {}", self.alphabet.name(x), self.alphabet.name(y)),
                            generator: self.alphabet.name(generator),
                            iterate: k,
                        });
                    }
                }
            }
            iterate_lengths.push(self.iterate_length(generator, depth));
        }
        Ok(VerificationReport {
            depth,
            turns_checked: checked.len(),
            iterate_lengths,
        })
    }

    /// Verifies to `depth` and records it.
    pub fn verified(mut self, depth: usize) -> Result<Self, TrainTrackError> {
        self.verify(depth)?;
        self.verified_depth = self.verified_depth.max(depth);
        Ok(self)
    }

    /// `|f^n(e)|` predicted by the transition matrix (exact without cancellation).
    pub fn iterate_length(&self, generator: Letter, n: usize) -> u128 {
        let matrix = self.transition_matrix();
        let rank = self.alphabet.rank();
        let mut vector = vec![0u128; rank];
        vector[generator.generator_index()] = 1;
        for _ in 0..n {
            let mut next = vec![0u128; rank];
            for (i, row) in matrix.iter().enumerate() {
                next[i] = row
                    .iter()
                    .zip(&vector)
                    .fold(0u128, |acc, (m, v)| acc.saturating_add((*m as u128).saturating_mul(*v)));
            }
            vector = next;
        }
        vector.into_iter().fold(0u128, u128::saturating_add)
    }
}

impl fmt::Display for TrainTrackMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_map_text())
    }
}

fn bool_product(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect())
        .collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// A seed letter whose image begins with itself, so the iterates are nested
/// prefixes of one infinite word.
#[derive(Clone, Debug)]
pub struct FixedRayScheme {
    map: Arc<TrainTrackMap>,
    seed: Letter,
}

impl FixedRayScheme {
    pub fn new(map: Arc<TrainTrackMap>, seed: Letter) -> Result<Self, TrainTrackError> {
        let image = map.image(seed);
        if image.len() < 2 || image.letters()[0] != seed {
            return Err(TrainTrackError::SeedNotExpanding(map.alphabet().name(seed)));
        }
        Ok(FixedRayScheme { map, seed })
    }

    pub fn map(&self) -> &Arc<TrainTrackMap> {
        &self.map
    }

    pub fn seed(&self) -> Letter {
        self.seed
    }
}

/// The infinite word fixed by the map and starting with the seed.
pub fn fixed_ray(map: Arc<TrainTrackMap>, seed: Letter) -> Result<RayStream, TrainTrackError> {
    Ok(RayStream::fixed(FixedRayScheme::new(map, seed)?))
}

/// Reference maps used across tests, benches and the CLI.
pub mod fixtures {
    use super::*;

    pub const TRIBONACCI: &str = "# Tribonacci substitution\nalphabet: a b c\na -> a b\nb -> a c\nc -> a\nprimitive\n";
    pub const FIBONACCI: &str = "# Fibonacci substitution\nalphabet: a b\na -> a b\nb -> a\nprimitive\n";

    pub fn tribonacci() -> TrainTrackMap {
        TrainTrackMap::parse(TRIBONACCI).expect("fixture parses")
    }

    pub fn fibonacci() -> TrainTrackMap {
        TrainTrackMap::parse(FIBONACCI).expect("fixture parses")
    }

    /// Named fixture text, for `fixed: tribonacci seed a` style references.
    pub fn by_name(name: &str) -> Option<&'static str> {
        match name {
            "tribonacci" => Some(TRIBONACCI),
            "fibonacci" => Some(FIBONACCI),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    /// Repeated textual substitution on single-character names.
    fn substitute(rules: &[(char, &str)], start: &str, n: usize) -> String {
        let mut word = start.to_string();
        for _ in 0..n {
            word = word
                .chars()
                .map(|c| rules.iter().find(|(h, _)| *h == c).unwrap().1)
                .collect();
        }
        word
    }

    fn compact(map: &TrainTrackMap, w: &ReducedWord) -> String {
        map.alphabet().render(w).replace(' ', "")
    }

    #[test]
    fn tribonacci_iterates_match_textual_substitution() {
        let map = tribonacci();
        let rules = [('a', "ab"), ('b', "ac"), ('c', "a")];
        assert_eq!(substitute(&rules, "a", 2), "abac");
        assert_eq!(substitute(&rules, "a", 3), "abacaba");
        for n in 0..8 {
            assert_eq!(compact(&map, &map.iterate(Letter::generator(0), n)), substitute(&rules, "a", n));
        }
    }

    #[test]
    fn apply_zero_is_identity() {
        let map = tribonacci();
        let w = map.alphabet().parse_word("a b^-1 c").unwrap();
        assert_eq!(map.apply(&w, 0), w);
    }

    #[test]
    fn positive_maps_verify() {
        let report = tribonacci().verify(6).unwrap();
        assert_eq!(report.depth, 6);
        assert!(fibonacci().verify(6).is_ok());
        assert_eq!(tribonacci().verified(6).unwrap().verified_depth(), 6);
    }

    #[test]
    fn cancelling_map_is_rejected() {
        let map = TrainTrackMap::from_rules(Alphabet::standard(2), &["a b", "b^-1 a^-1"]).unwrap();
        match map.verify(2) {
            Err(TrainTrackError::CancellationDetected { turn, iterate, .. }) => {
                assert_eq!(turn, "a b");
                assert_eq!(iterate, 1);
            }
            other => panic!("expected cancellation, got {other:?}"),
        }
        assert_eq!(map.verify(0), Err(TrainTrackError::ZeroDepth));
    }

    #[test]
    fn lengths_follow_transition_matrix() {
        let map = tribonacci();
        for g in 0..3 {
            for n in 0..10 {
                let letter = Letter::generator(g);
                assert_eq!(map.iterate(letter, n).len() as u128, map.iterate_length(letter, n));
            }
        }
    }

    #[test]
    fn primitivity() {
        assert!(tribonacci().primitive());
        let reducible = TrainTrackMap::from_rules(Alphabet::standard(2), &["a b", "b"]).unwrap();
        assert!(!reducible.is_primitive());
        assert!(matches!(reducible.flag_primitive(), Err(TrainTrackError::NotPrimitive(4))));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            TrainTrackMap::parse("a -> a b\nb ->\n"),
            Err(TrainTrackError::EmptyImage(_))
        ));
        assert!(matches!(
            TrainTrackMap::parse("alphabet: a b\na -> a b\n"),
            Err(TrainTrackError::MissingImage(_))
        ));
        assert!(matches!(
            TrainTrackMap::parse("a -> a z\n"),
            Err(TrainTrackError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            TrainTrackMap::parse("a -> a\nwhatever\n"),
            Err(TrainTrackError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn parse_flags_and_inferred_alphabet() {
        let map = TrainTrackMap::parse("a -> a b\nb -> a # fib\nverify_depth = 9\n").unwrap();
        assert_eq!(map.alphabet().generators(), ["a", "b"]);
        assert_eq!(map.requested_depth(), Some(9));
        assert!(!map.primitive());
        let reparsed = TrainTrackMap::parse(&map.to_map_text()).unwrap();
        assert_eq!(reparsed.images(), map.images());
    }

    #[test]
    fn source_hash_tracks_file_bytes() {
        let a = TrainTrackMap::parse(TRIBONACCI).unwrap();
        let b = TrainTrackMap::parse(&format!("{TRIBONACCI}\n# edited\n")).unwrap();
        assert_ne!(a.source_hash(), b.source_hash());
        assert_eq!(a.source_hash(), TrainTrackMap::parse(TRIBONACCI).unwrap().source_hash());
    }

    #[test]
    fn inverse_images() {
        let map = tribonacci();
        let b_inv = Letter::generator(1).inverse();
        assert_eq!(map.image(b_inv), map.alphabet().parse_word("c^-1 a^-1").unwrap());
    }

    #[test]
    fn seeds() {
        let map = Arc::new(tribonacci());
        assert!(FixedRayScheme::new(map.clone(), Letter::generator(0)).is_ok());
        assert!(matches!(
            FixedRayScheme::new(map, Letter::generator(1)),
            Err(TrainTrackError::SeedNotExpanding(_))
        ));
        let ba = Arc::new(TrainTrackMap::from_rules(Alphabet::standard(2), &["b a", "a"]).unwrap());
        assert!(matches!(
            fixed_ray(ba, Letter::generator(0)),
            Err(TrainTrackError::SeedNotExpanding(_))
        ));
    }
}
