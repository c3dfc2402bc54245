// SPDX-License-Identifier: Apache-2.0

//! Leaf factor languages of the laminations carried by train-track maps.
//!
//! A finite word is a leaf segment exactly when it is a subword of some
//! iterate `f^n(e)` of a generator (or of its inverse). The language is
//! materialised up to a length horizon, saturated by watching the per-length
//! member counts stop changing under further iteration, and indexed once
//! for read-only membership queries.
//!
//! Only the leaves coming from the iterates are represented; the finitely
//! many extra diagonal leaf orbits are not added, so every language is an
//! under-approximation of the full lamination and verdicts say so.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::index::FactorIndex;
use crate::traintrack::{sha256_hex, TrainTrackMap};
use crate::words::{invert_letters, Alphabet, Letter, ReducedWord};

pub const CACHE_SCHEMA: &str = "laminar.leaf-language/v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LeafLanguageError {
    #[error("horizon {horizon} needs {estimate} materialised members or letters, over the budget of {budget}")]
    HorizonTooLarge { horizon: usize, estimate: u64, budget: u64 },
    #[error("member sets up to horizon {horizon} did not stabilise before depth cap {cap}")]
    NotStabilized { horizon: usize, cap: usize },
    #[error("word of length {length} exceeds the language horizon {horizon}; rebuild with a larger horizon")]
    BeyondHorizon { length: usize, horizon: usize },
    #[error("word of length {length} is too short for a coarse leaf test at delta {delta} (needs > {min})")]
    TooShort { length: usize, delta: usize, min: usize },
    #[error("period word is empty or not cyclically reduced")]
    NotCyclicallyReduced,
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("at least one source map is required")]
    NoSources,
    #[error("source maps use different alphabets")]
    AlphabetMismatch,
    #[error("iterate {iterate} of `{generator}` cancels; the source is not a train track at this depth")]
    Cancellation { generator: String, iterate: usize },
    #[error("invalid hyperbolicity parameters: {0}")]
    InvalidParams(String),
    #[error("cache I/O: {0}")]
    Io(String),
    #[error("cache format: {0}")]
    Format(String),
}

/// `δ` together with the local-geodesic scale `r` and the fellow-travelling
/// bound `D`. Defaults are `r = 8δ + 1` and `D = 2δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicityParams {
    pub delta: usize,
    pub r: usize,
    pub d: usize,
}

impl HyperbolicityParams {
    pub fn new(delta: usize) -> Result<Self, LeafLanguageError> {
        Self::with_overrides(delta, None, None)
    }

    pub fn with_overrides(delta: usize, r: Option<usize>, d: Option<usize>) -> Result<Self, LeafLanguageError> {
        if delta < 1 {
            return Err(LeafLanguageError::InvalidParams("delta must be at least 1".into()));
        }
        let r = r.unwrap_or(8 * delta + 1);
        if r < 1 {
            return Err(LeafLanguageError::InvalidParams("r must be at least 1".into()));
        }
        Ok(HyperbolicityParams {
            delta,
            r,
            d: d.unwrap_or(2 * delta),
        })
    }

    /// Trim used by the poison-power overlap, `δ + D`.
    pub fn overlap_trim(&self) -> usize {
        self.delta + self.d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub stabilization_window: usize,
    pub depth_cap: usize,
    /// Upper bound on the number of materialised members up to the horizon.
    pub member_budget: u64,
    /// Upper bound on the total letters inserted into the index.
    pub letter_budget: u64,
    /// Build to at least this generation depth even if saturated earlier.
    pub min_generation_depth: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            stabilization_window: 2,
            depth_cap: 64,
            member_budget: 200_000_000,
            letter_budget: 1 << 26,
            min_generation_depth: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceRecord {
    pub hash: String,
    pub map: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LeafLanguage {
    schema: String,
    alphabet: Alphabet,
    sources: Vec<SourceRecord>,
    horizon: usize,
    generation_depth: usize,
    materialized_depth: usize,
    stabilization_window: usize,
    counts: Vec<u64>,
    hash: String,
    index: FactorIndex,
}

/// Builds the saturated leaf language of one or two source maps (typically a
/// map and a representative of its inverse).
pub fn build_language(
    sources: &[TrainTrackMap],
    horizon: usize,
    options: BuildOptions,
) -> Result<LeafLanguage, LeafLanguageError> {
    if horizon == 0 {
        return Err(LeafLanguageError::ZeroHorizon);
    }
    let first = sources.first().ok_or(LeafLanguageError::NoSources)?;
    let alphabet = first.alphabet().clone();
    if sources.iter().any(|s| s.alphabet() != &alphabet) {
        return Err(LeafLanguageError::AlphabetMismatch);
    }
    let window = options.stabilization_window.max(1);
    let mut index = FactorIndex::new(alphabet.size());
    let mut iterates: Vec<(usize, Letter, Vec<Letter>)> = Vec::new();
    for (s, _) in sources.iter().enumerate() {
        for g in 0..alphabet.rank() {
            let letter = Letter::generator(g);
            iterates.push((s, letter, vec![letter]));
        }
    }
    insert_iterates(&mut index, &iterates);
    let mut history: Vec<Vec<u64>> = vec![index.counts_by_length(horizon)];
    let mut depth = 0usize;
    let stabilized_at = loop {
        if depth >= window {
            let base = depth - window;
            if history[base] == history[depth] && depth >= options.min_generation_depth {
                break base.max(options.min_generation_depth);
            }
        }
        if depth >= options.depth_cap + window {
            return Err(LeafLanguageError::NotStabilized {
                horizon,
                cap: options.depth_cap,
            });
        }
        depth += 1;
        let mut pending = 0u64;
        for (s, letter, word) in iterates.iter_mut() {
            let map = &sources[*s];
            let raw_len: usize = word.iter().map(|l| map.images()[l.generator_index()].len()).sum();
            pending += 2 * raw_len as u64;
            if index.letters_inserted() + pending > options.letter_budget {
                return Err(LeafLanguageError::HorizonTooLarge {
                    horizon,
                    estimate: index.letters_inserted() + pending,
                    budget: options.letter_budget,
                });
            }
            let next = map.apply(&ReducedWord::from_reduced_unchecked(std::mem::take(word)), 1);
            if next.len() != raw_len {
                return Err(LeafLanguageError::Cancellation {
                    generator: alphabet.name(*letter),
                    iterate: depth,
                });
            }
            *word = next.into_letters();
        }
        insert_iterates(&mut index, &iterates);
        let counts = index.counts_by_length(horizon);
        let members: u64 = counts.iter().sum();
        if members > options.member_budget {
            return Err(LeafLanguageError::HorizonTooLarge {
                horizon,
                estimate: members,
                budget: options.member_budget,
            });
        }
        history.push(counts);
    };
    let counts = history[depth].clone();
    let source_records: Vec<SourceRecord> = sources
        .iter()
        .map(|s| SourceRecord {
            hash: s.source_hash().to_string(),
            map: s.to_map_text(),
        })
        .collect();
    let hash = language_hash(&source_records, horizon, stabilized_at);
    Ok(LeafLanguage {
        schema: CACHE_SCHEMA.to_string(),
        alphabet,
        sources: source_records,
        horizon,
        generation_depth: stabilized_at,
        materialized_depth: depth,
        stabilization_window: window,
        counts,
        hash,
        index,
    })
}

fn insert_iterates(index: &mut FactorIndex, iterates: &[(usize, Letter, Vec<Letter>)]) {
    for (_, _, word) in iterates {
        index.insert(word);
        index.insert(&invert_letters(word));
    }
}

fn language_hash(sources: &[SourceRecord], horizon: usize, generation_depth: usize) -> String {
    let mut material = String::from(CACHE_SCHEMA);
    for s in sources {
        material.push('\n');
        material.push_str(&s.hash);
    }
    material.push_str(&format!("\nhorizon={horizon}\ngeneration_depth={generation_depth}"));
    sha256_hex(material.as_bytes())
}

impl LeafLanguage {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Least `n` at which the member sets up to the horizon stopped changing.
    pub fn generation_depth(&self) -> usize {
        self.generation_depth
    }

    /// Deepest iterate actually inserted into the index.
    pub fn materialized_depth(&self) -> usize {
        self.materialized_depth
    }

    pub fn stabilization_window(&self) -> usize {
        self.stabilization_window
    }

    /// Member counts indexed by length, `0..=horizon`.
    pub fn member_counts(&self) -> &[u64] {
        &self.counts
    }

    /// Identifies the member set: source hashes, horizon and generation depth.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn source_hashes(&self) -> Vec<&str> {
        self.sources.iter().map(|s| s.hash.as_str()).collect()
    }

    pub fn index_states(&self) -> usize {
        self.index.states()
    }

    fn check_horizon(&self, length: usize) -> Result<(), LeafLanguageError> {
        if length > self.horizon {
            return Err(LeafLanguageError::BeyondHorizon {
                length,
                horizon: self.horizon,
            });
        }
        Ok(())
    }

    pub fn is_leaf_factor(&self, w: &ReducedWord) -> Result<bool, LeafLanguageError> {
        self.contains(w.letters())
    }

    /// Membership for a slice of an already reduced word.
    pub fn contains(&self, letters: &[Letter]) -> Result<bool, LeafLanguageError> {
        self.check_horizon(letters.len())?;
        Ok(self.index.contains(letters))
    }

    /// For each end position `j`, the length of the longest member factor of
    /// `letters` ending at `j`, capped at the horizon.
    pub fn member_suffix_lengths(&self, letters: &[Letter]) -> Vec<usize> {
        self.index.matching_lengths(letters, self.horizon)
    }

    /// Tree-model coarse leaf test: trim `2δ` letters from each end and ask
    /// whether the core is a leaf factor.
    pub fn is_coarse_leaf_segment(
        &self,
        params: &HyperbolicityParams,
        w: &ReducedWord,
    ) -> Result<bool, LeafLanguageError> {
        self.is_coarse_leaf_slice(params, w.letters())
    }

    pub fn is_coarse_leaf_slice(
        &self,
        params: &HyperbolicityParams,
        letters: &[Letter],
    ) -> Result<bool, LeafLanguageError> {
        let trim = 2 * params.delta;
        if letters.len() <= 2 * trim {
            return Err(LeafLanguageError::TooShort {
                length: letters.len(),
                delta: params.delta,
                min: 2 * trim,
            });
        }
        self.contains(&letters[trim..letters.len() - trim])
    }

    pub fn enumerate_members(&self, length: usize) -> Result<Vec<ReducedWord>, LeafLanguageError> {
        self.check_horizon(length)?;
        Ok(self
            .index
            .enumerate(length)
            .into_iter()
            .map(ReducedWord::from_reduced_unchecked)
            .collect())
    }

    /// Longest member factor of the bi-infinite periodic word `period^∞`,
    /// capped at `cap` (which must not exceed the horizon).
    pub fn longest_periodic_member(&self, period: &[Letter], cap: usize) -> Result<usize, LeafLanguageError> {
        self.check_horizon(cap)?;
        if period.is_empty() {
            return Ok(0);
        }
        let text = period.iter().copied().cycle().take(period.len() + cap);
        Ok(self.index.longest_member_factor(text, cap))
    }

    /// Largest `L ≤ search_bound` such that some length-`L` factor of
    /// `periodic_word^∞`, trimmed by `δ + D` on both ends, is a leaf factor.
    /// Cores of non-positive length count as members. A value below
    /// `search_bound` is a finite empirical overlap bound for this period.
    pub fn max_leaf_overlap(
        &self,
        params: &HyperbolicityParams,
        periodic_word: &ReducedWord,
        search_bound: usize,
    ) -> Result<usize, LeafLanguageError> {
        if periodic_word.is_empty() || !periodic_word.is_cyclically_reduced() {
            return Err(LeafLanguageError::NotCyclicallyReduced);
        }
        self.check_horizon(search_bound)?;
        let trim = params.overlap_trim();
        let core_cap = search_bound.saturating_sub(2 * trim);
        let longest = self.longest_periodic_member(periodic_word.letters(), core_cap)?;
        Ok((longest + 2 * trim).min(search_bound))
    }

    /// Largest `j` with `period^j` a member and `j·|period| ≤ horizon`.
    pub fn longest_leaf_power(&self, period: &ReducedWord) -> usize {
        if period.is_empty() {
            return 0;
        }
        let longest = self
            .longest_periodic_member(period.letters(), self.horizon)
            .unwrap_or(0);
        // power j is a member iff some rotation-aligned factor of length j·p is;
        // check from the longest candidate down.
        let mut j = longest / period.len();
        while j > 0 {
            if self.index.contains(period.power(j).letters()) {
                return j;
            }
            j -= 1;
        }
        0
    }

    pub fn save(&self, path: &Path) -> Result<(), LeafLanguageError> {
        let text = serde_json::to_string(self).map_err(|e| LeafLanguageError::Format(e.to_string()))?;
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| LeafLanguageError::Io(e.to_string()))?;
        }
        fs::write(path, text).map_err(|e| LeafLanguageError::Io(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, LeafLanguageError> {
        let text = fs::read_to_string(path).map_err(|e| LeafLanguageError::Io(e.to_string()))?;
        let lang: LeafLanguage =
            serde_json::from_str(&text).map_err(|e| LeafLanguageError::Format(e.to_string()))?;
        if lang.schema != CACHE_SCHEMA {
            return Err(LeafLanguageError::Format(format!("unexpected schema `{}`", lang.schema)));
        }
        if lang.hash != language_hash(&lang.sources, lang.horizon, lang.generation_depth) {
            return Err(LeafLanguageError::Format("language hash does not match its contents".into()));
        }
        if lang.counts.len() != lang.horizon + 1 || lang.index.counts_by_length(lang.horizon) != lang.counts {
            return Err(LeafLanguageError::Format("member index does not match recorded counts".into()));
        }
        Ok(lang)
    }

    /// True when this language was built from exactly these source hashes.
    pub fn matches_sources(&self, hashes: &[&str]) -> bool {
        self.sources.len() == hashes.len() && self.sources.iter().zip(hashes).all(|(s, h)| s.hash == *h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traintrack::fixtures::{fibonacci, tribonacci};
    use std::collections::BTreeSet;

    /// Naive oracle: all factors of the given length of f^n(e) and their
    /// inverses, by textual substring extraction.
    fn brute_force(map: &TrainTrackMap, n: usize, length: usize) -> BTreeSet<ReducedWord> {
        let mut out = BTreeSet::new();
        for g in 0..map.alphabet().rank() {
            let mut word = vec![Letter::generator(g)];
            for _ in 0..n {
                word = word.iter().flat_map(|l| map.image(*l).into_letters()).collect();
            }
            for w in [word.clone(), invert_letters(&word)] {
                if w.len() >= length {
                    for i in 0..=w.len() - length {
                        out.insert(ReducedWord::from_reduced(w[i..i + length].to_vec()).unwrap());
                    }
                }
            }
        }
        out
    }

    fn word(lang: &LeafLanguage, text: &str) -> ReducedWord {
        lang.alphabet().parse_word(text).unwrap()
    }

    #[test]
    fn fibonacci_length_two() {
        let map = fibonacci();
        let lang = build_language(std::slice::from_ref(&map), 2, BuildOptions::default()).unwrap();
        let members: BTreeSet<_> = lang.enumerate_members(2).unwrap().into_iter().collect();
        assert_eq!(members, brute_force(&map, 6, 2));
        for (w, expected) in [("a b", true), ("b a", true), ("a a", true), ("b b", false)] {
            assert_eq!(lang.is_leaf_factor(&word(&lang, w)).unwrap(), expected, "{w}");
        }
        assert_eq!(members.len(), 6);
    }

    #[test]
    fn tribonacci_membership() {
        let map = tribonacci();
        let lang = build_language(std::slice::from_ref(&map), 2, BuildOptions::default()).unwrap();
        let oracle = brute_force(&map, 6, 2);
        assert!(oracle.contains(&word(&lang, "c a")));
        assert!(lang.is_leaf_factor(&word(&lang, "c a")).unwrap());
        assert!(lang.is_leaf_factor(&word(&lang, "a^-1 c^-1")).unwrap());
        assert!(!lang.is_leaf_factor(&word(&lang, "c b")).unwrap());
        assert!(!lang.is_leaf_factor(&word(&lang, "c c")).unwrap());
        assert_eq!(lang.enumerate_members(1).unwrap().len(), 6);
        assert_eq!(lang.enumerate_members(0).unwrap(), vec![ReducedWord::empty()]);
    }

    #[test]
    fn beyond_horizon_is_an_error() {
        let lang = build_language(&[tribonacci()], 4, BuildOptions::default()).unwrap();
        let long = word(&lang, "a b a c a");
        assert_eq!(
            lang.is_leaf_factor(&long),
            Err(LeafLanguageError::BeyondHorizon { length: 5, horizon: 4 })
        );
        assert!(lang.enumerate_members(5).is_err());
    }

    #[test]
    fn coarse_leaf_segments() {
        let lang = build_language(&[tribonacci()], 20, BuildOptions::default()).unwrap();
        let params = HyperbolicityParams::new(1).unwrap();
        // padding is arbitrary reduced material; only the core "c a" matters
        let padded = word(&lang, "b^-1 b^-1 c a b^-1 c");
        assert!(lang.is_coarse_leaf_segment(&params, &padded).unwrap());
        let bad = word(&lang, "a b c c a b");
        assert!(!lang.is_coarse_leaf_segment(&params, &bad).unwrap());
        let short = word(&lang, "a b a c");
        assert!(matches!(
            lang.is_coarse_leaf_segment(&params, &short),
            Err(LeafLanguageError::TooShort { length: 4, .. })
        ));
    }

    #[test]
    fn overlap_examples() {
        let lang = build_language(&[tribonacci()], 60, BuildOptions::default()).unwrap();
        let params = HyperbolicityParams::new(1).unwrap();
        // oracle: largest k with a^k a member, plus the δ + D trim on both sides
        let mut k = 0;
        while brute_force(&tribonacci(), 12, k + 1).contains(&word(&lang, &"a ".repeat(k + 1))) {
            k += 1;
        }
        assert_eq!(k, 2);
        assert_eq!(lang.max_leaf_overlap(&params, &word(&lang, "a"), 40).unwrap(), k + 6);
        assert_eq!(
            lang.max_leaf_overlap(&params, &word(&lang, "a b a^-1"), 40),
            Err(LeafLanguageError::NotCyclicallyReduced)
        );
        assert_eq!(
            lang.max_leaf_overlap(&params, &ReducedWord::empty(), 40),
            Err(LeafLanguageError::NotCyclicallyReduced)
        );
        assert!(lang.max_leaf_overlap(&params, &word(&lang, "a"), 61).is_err());

        let fib = build_language(&[fibonacci()], 60, BuildOptions::default()).unwrap();
        // "b b" is not a member, so the longest member factor of b^∞ is "b"
        assert_eq!(fib.max_leaf_overlap(&params, &word(&fib, "b"), 40).unwrap(), 7);
    }

    #[test]
    fn leaf_powers() {
        let lang = build_language(&[tribonacci()], 60, BuildOptions::default()).unwrap();
        assert_eq!(lang.longest_leaf_power(&word(&lang, "a")), 2);
        assert_eq!(lang.longest_leaf_power(&word(&lang, "c")), 1);
        assert_eq!(lang.longest_leaf_power(&word(&lang, "a b^-1")), 0);
    }

    #[test]
    fn saturation_is_monotone_and_stable() {
        let map = tribonacci();
        let lang = build_language(std::slice::from_ref(&map), 10, BuildOptions::default()).unwrap();
        let g = lang.generation_depth();
        for len in 0..=10 {
            let at_g = brute_force(&map, g, len);
            let mut union = BTreeSet::new();
            for n in 0..=g {
                union.extend(brute_force(&map, n, len));
            }
            let members: BTreeSet<_> = lang.enumerate_members(len).unwrap().into_iter().collect();
            if len > 0 {
                assert_eq!(members, union, "length {len}");
                assert!(at_g.is_subset(&members));
            }
        }
        let deeper = build_language(
            &[map],
            10,
            BuildOptions {
                min_generation_depth: 2 * g,
                ..BuildOptions::default()
            },
        )
        .unwrap();
        assert_eq!(deeper.generation_depth(), 2 * g);
        assert_eq!(deeper.member_counts(), lang.member_counts());
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            build_language(&[tribonacci()], 0, BuildOptions::default()).unwrap_err(),
            LeafLanguageError::ZeroHorizon
        );
        assert_eq!(build_language(&[], 4, BuildOptions::default()).unwrap_err(), LeafLanguageError::NoSources);
        let tight = BuildOptions {
            member_budget: 10,
            ..BuildOptions::default()
        };
        assert!(matches!(
            build_language(&[tribonacci()], 50, tight),
            Err(LeafLanguageError::HorizonTooLarge { .. })
        ));
        let shallow = BuildOptions {
            depth_cap: 2,
            ..BuildOptions::default()
        };
        assert_eq!(
            build_language(&[tribonacci()], 50, shallow).unwrap_err(),
            LeafLanguageError::NotStabilized { horizon: 50, cap: 2 }
        );
        let cancelling = TrainTrackMap::from_rules(Alphabet::standard(2), &["a b", "b^-1 a^-1"]).unwrap();
        assert!(matches!(
            build_language(&[cancelling], 4, BuildOptions::default()),
            Err(LeafLanguageError::Cancellation { .. })
        ));
        let other = TrainTrackMap::from_rules(Alphabet::standard(2), &["a b", "a"]).unwrap();
        assert_eq!(
            build_language(&[tribonacci(), other], 4, BuildOptions::default()).unwrap_err(),
            LeafLanguageError::AlphabetMismatch
        );
    }

    #[test]
    fn cache_round_trip_and_tamper_detection() {
        let lang = build_language(&[tribonacci()], 16, BuildOptions::default()).unwrap();
        let dir = std::env::temp_dir().join(format!("laminar-leaflang-{}", std::process::id()));
        let path = dir.join("lang.json");
        lang.save(&path).unwrap();
        let loaded = LeafLanguage::load(&path).unwrap();
        assert_eq!(loaded.hash(), lang.hash());
        assert_eq!(loaded.member_counts(), lang.member_counts());
        assert!(loaded.matches_sources(&[tribonacci().source_hash()]));
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, text.replace("\"horizon\":16", "\"horizon\":15")).unwrap();
        assert!(LeafLanguage::load(&path).is_err());
        std::fs::write(&path, "not json").unwrap();
        assert!(matches!(LeafLanguage::load(&path), Err(LeafLanguageError::Format(_))));
        std::fs::remove_dir_all(dir).ok();
    }

    #[test]
    fn params_defaults() {
        let p = HyperbolicityParams::new(1).unwrap();
        assert_eq!((p.r, p.d), (9, 2));
        assert_eq!(HyperbolicityParams::new(3).unwrap().r, 25);
        assert!(HyperbolicityParams::new(0).is_err());
        assert_eq!(HyperbolicityParams::with_overrides(2, Some(5), Some(1)).unwrap().overlap_trim(), 3);
    }
}
