// SPDX-License-Identifier: Apache-2.0

//! Finite balls in Cayley graphs of finitely presented groups.
//!
//! Balls are built by a depth-bounded coset enumeration (HLT strategy with
//! coincidence processing): cosets are defined breadth-first up to radius
//! plus a margin, every relator is scanned from every coset, and the ball is
//! read off by a BFS over the resulting partial table. Identifications are
//! only ever derived from relators, so two vertices are merged only if they
//! are equal in the group; vertices the enumeration could not identify stay
//! distinct, and the ball is then flagged unconfirmed.

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{Alphabet, Letter, ReducedWord, WordError};

const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyError {
    #[error("presentation line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("relator {0} is empty or not cyclically reduced")]
    BadRelator(usize),
    #[error("coset budget of {budget} exceeded at radius {radius}; lower the radius or raise --budget-cosets")]
    BudgetExceeded { budget: usize, radius: usize },
    #[error("radius must be at least 1")]
    ZeroRadius,
    #[error("scale r must be at least 1")]
    ZeroScale,
    #[error("word leaves the ball of radius {radius}")]
    BeyondBall { radius: usize },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<ReducedWord>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<ReducedWord>) -> Result<Self, CayleyError> {
        for (i, r) in relators.iter().enumerate() {
            if r.is_empty() || !r.is_cyclically_reduced() {
                return Err(CayleyError::BadRelator(i));
            }
            alphabet.reduce(r.letters())?;
        }
        Ok(Presentation { alphabet, relators })
    }

    pub fn free(rank: usize) -> Self {
        Presentation {
            alphabet: Alphabet::standard(rank),
            relators: Vec::new(),
        }
    }

    /// `⟨a, b | a b a⁻¹ b⁻¹⟩`
    pub fn z2() -> Self {
        let alphabet = Alphabet::standard(2);
        let rel = alphabet.parse_word("a b a^-1 b^-1").expect("valid");
        Presentation::new(alphabet, vec![rel]).expect("valid")
    }

    /// `⟨a, b, c, d | [a, b][c, d]⟩`
    pub fn genus2_surface() -> Self {
        let alphabet = Alphabet::standard(4);
        let rel = alphabet
            .parse_word("a b a^-1 b^-1 c d c^-1 d^-1")
            .expect("valid");
        Presentation::new(alphabet, vec![rel]).expect("valid")
    }

    /// Parses `alphabet: a b` followed by one relator per line (an optional
    /// `relator:` prefix is accepted). `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CayleyError> {
        let mut alphabet: Option<Alphabet> = None;
        let mut relators = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CayleyError::Parse {
                line: line_no,
                message,
            };
            if let Some(rest) = line.strip_prefix("alphabet") {
                let names: Vec<&str> = rest.trim_start().trim_start_matches(':').split_whitespace().collect();
                alphabet = Some(Alphabet::new(names).map_err(|e| err(e.to_string()))?);
                continue;
            }
            let alpha = alphabet
                .as_ref()
                .ok_or_else(|| err("relator before the alphabet declaration".into()))?;
            let body = line.strip_prefix("relator").map_or(line, |r| r.trim_start().trim_start_matches(':'));
            let word = alpha.parse_word(body).map_err(|e| err(e.to_string()))?;
            if word.is_empty() || !word.is_cyclically_reduced() {
                return Err(err(format!("relator `{}` is trivial or not cyclically reduced", body.trim())));
            }
            relators.push(word);
        }
        let alphabet = alphabet.ok_or(CayleyError::Parse {
            line: 0,
            message: "missing alphabet declaration".into(),
        })?;
        Presentation::new(alphabet, relators)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[ReducedWord] {
        &self.relators
    }

    fn max_relator_len(&self) -> usize {
        self.relators.iter().map(ReducedWord::len).max().unwrap_or(0)
    }

    /// All cyclic rotations of the relators and their inverses.
    fn relator_closure(&self) -> Vec<Vec<Letter>> {
        let mut all = BTreeSet::new();
        for r in &self.relators {
            for word in [r.letters().to_vec(), r.invert().into_letters()] {
                for shift in 0..word.len() {
                    let mut rotated = word[shift..].to_vec();
                    rotated.extend_from_slice(&word[..shift]);
                    all.insert(rotated);
                }
            }
        }
        all.into_iter().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallOptions {
    /// Maximum number of cosets defined during one enumeration.
    pub max_cosets: usize,
    /// Definition depth beyond the radius; defaults to half the longest relator.
    pub margin: Option<usize>,
    /// Re-run with a larger margin and compare, to confirm the ball.
    pub confirm: bool,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions {
            max_cosets: 2_000_000,
            margin: None,
            confirm: true,
        }
    }
}

/// The ball of a given radius around the identity.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    presentation: Presentation,
    radius: usize,
    /// Shortlex-least geodesic word of each vertex; vertex 0 is the identity.
    representatives: Vec<ReducedWord>,
    distance: Vec<usize>,
    /// `adjacency[v * size + letter]`, `NONE` when the neighbour is outside.
    adjacency: Vec<u32>,
    confirmed: bool,
    margin: usize,
    cosets_defined: usize,
}

struct Enumeration {
    sigma: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    depth: Vec<u32>,
    queue: Vec<u32>,
    max_depth: u32,
    budget: usize,
}

impl Enumeration {
    fn new(sigma: usize, max_depth: usize, budget: usize) -> Self {
        Enumeration {
            sigma,
            table: vec![NONE; sigma],
            parent: vec![0],
            depth: vec![0],
            queue: Vec::new(),
            max_depth: max_depth as u32,
            budget,
        }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.sigma + x]
    }

    #[inline]
    fn put(&mut self, c: u32, x: usize, d: u32) {
        self.table[c as usize * self.sigma + x] = d;
    }

    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: usize) -> Result<Option<u32>, ()> {
        if self.depth[c as usize] >= self.max_depth {
            return Ok(None);
        }
        if self.len() >= self.budget {
            return Err(());
        }
        let d = self.len() as u32;
        self.parent.push(d);
        self.depth.push(self.depth[c as usize] + 1);
        self.table.extend(std::iter::repeat_n(NONE, self.sigma));
        self.put(c, x, d);
        self.put(d, x ^ 1, c);
        Ok(Some(d))
    }

    fn rep(&mut self, mut k: u32) -> u32 {
        let mut root = k;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[k as usize] != root {
            let next = self.parent[k as usize];
            self.parent[k as usize] = root;
            k = next;
        }
        root
    }

    fn merge(&mut self, k: u32, l: u32) {
        let k = self.rep(k);
        let l = self.rep(l);
        if k == l {
            return;
        }
        let (keep, drop) = if k < l { (k, l) } else { (l, k) };
        self.parent[drop as usize] = keep;
        let d = self.depth[drop as usize].min(self.depth[keep as usize]);
        self.depth[keep as usize] = d;
        self.queue.push(drop);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.sigma {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                self.put(f, x ^ 1, NONE);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let e1x = self.get(e1, x);
                if e1x != NONE {
                    self.merge(f1, e1x);
                } else {
                    let f1x = self.get(f1, x ^ 1);
                    if f1x != NONE {
                        self.merge(e1, f1x);
                    } else {
                        self.put(e1, x, f1);
                        self.put(f1, x ^ 1, e1);
                    }
                }
            }
        }
        self.queue.clear();
    }

    /// HLT scan-and-fill of one relator from coset `c`, defining cosets
    /// only within the depth bound.
    fn scan_and_fill(&mut self, c: u32, rel: &[Letter]) -> Result<(), ()> {
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = rel.len();
        loop {
            while i < j {
                let next = self.get(f, rel[i].index());
                if next == NONE {
                    break;
                }
                f = next;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let prev = self.get(b, rel[j - 1].inverse().index());
                if prev == NONE {
                    break;
                }
                b = prev;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                let x = rel[i].index();
                self.put(f, x, b);
                self.put(b, x ^ 1, f);
                return Ok(());
            }
            match self.define(f, rel[i].index())? {
                Some(_) => {}
                None => return Ok(()),
            }
        }
    }
}

/// Builds the ball of radius `radius`.
pub fn build_ball(p: &Presentation, radius: usize, options: BallOptions) -> Result<CayleyBall, CayleyError> {
    if radius == 0 {
        return Err(CayleyError::ZeroRadius);
    }
    let max_rel = p.max_relator_len();
    let margin = options.margin.unwrap_or(max_rel.div_ceil(2));
    let ball = enumerate_ball(p, radius, margin, options.max_cosets)?;
    if p.relators.is_empty() {
        return Ok(CayleyBall { confirmed: true, ..ball });
    }
    if !options.confirm {
        return Ok(ball);
    }
    match enumerate_ball(p, radius, margin + max_rel.max(1), options.max_cosets) {
        Ok(wider) => {
            let confirmed = wider.vertex_count() == ball.vertex_count() && wider.sphere_sizes() == ball.sphere_sizes();
            Ok(CayleyBall { confirmed, ..wider })
        }
        Err(CayleyError::BudgetExceeded { .. }) => Ok(ball),
        Err(e) => Err(e),
    }
}

fn enumerate_ball(p: &Presentation, radius: usize, margin: usize, budget: usize) -> Result<CayleyBall, CayleyError> {
    let sigma = p.alphabet.size();
    let relators = p.relator_closure();
    let exceeded = || CayleyError::BudgetExceeded { budget, radius };
    let mut e = Enumeration::new(sigma, radius + margin, budget);
    let mut c = 0u32;
    while (c as usize) < e.len() {
        if e.alive(c) {
            for rel in &relators {
                if !e.alive(c) {
                    break;
                }
                e.scan_and_fill(c, rel).map_err(|_| exceeded())?;
            }
            if e.alive(c) {
                for x in 0..sigma {
                    if e.alive(c) && e.get(c, x) == NONE {
                        e.define(c, x).map_err(|_| exceeded())?;
                    }
                }
            }
        }
        c += 1;
    }
    // BFS over live cosets in letter order: shortlex-least geodesic words
    let mut index_of = vec![NONE; e.len()];
    let mut representatives = vec![ReducedWord::empty()];
    let mut distance = vec![0usize];
    let mut order = vec![0u32];
    index_of[0] = 0;
    let mut queue = VecDeque::from([0u32]);
    while let Some(coset) = queue.pop_front() {
        let v = index_of[coset as usize] as usize;
        if distance[v] == radius {
            continue;
        }
        for x in 0..sigma {
            let target = e.get(coset, x);
            if target == NONE {
                continue;
            }
            let target = e.rep(target);
            if index_of[target as usize] == NONE {
                index_of[target as usize] = representatives.len() as u32;
                let (word, _) = representatives[v].concat_reduced(&ReducedWord::reduce([Letter(x as u32)]));
                representatives.push(word);
                distance.push(distance[v] + 1);
                order.push(target);
                queue.push_back(target);
            }
        }
    }
    let n = representatives.len();
    let mut adjacency = vec![NONE; n * sigma];
    for (v, &coset) in order.iter().enumerate() {
        for x in 0..sigma {
            let target = e.get(coset, x);
            if target != NONE {
                let target = e.rep(target);
                adjacency[v * sigma + x] = index_of[target as usize];
            }
        }
    }
    Ok(CayleyBall {
        presentation: p.clone(),
        radius,
        representatives,
        distance,
        adjacency,
        confirmed: false,
        margin,
        cosets_defined: e.len(),
    })
}

impl CayleyBall {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn vertex_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn representative(&self, v: usize) -> &ReducedWord {
        &self.representatives[v]
    }

    pub fn distance_from_identity(&self, v: usize) -> usize {
        self.distance[v]
    }

    /// True when a wider enumeration produced the same ball.
    pub fn confirmed(&self) -> bool {
        self.confirmed
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    pub fn cosets_defined(&self) -> usize {
        self.cosets_defined
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.radius + 1];
        for &d in &self.distance {
            sizes[d] += 1;
        }
        sizes
    }

    pub fn neighbour(&self, v: usize, letter: Letter) -> Option<usize> {
        let sigma = self.presentation.alphabet.size();
        let t = self.adjacency[v * sigma + letter.index()];
        (t != NONE).then_some(t as usize)
    }

    /// Vertex reached from the identity by reading `letters`.
    pub fn trace(&self, letters: &[Letter]) -> Result<usize, CayleyError> {
        self.trace_from(0, letters)
    }

    pub fn trace_from(&self, start: usize, letters: &[Letter]) -> Result<usize, CayleyError> {
        let mut v = start;
        for &l in letters {
            v = self
                .neighbour(v, l)
                .ok_or(CayleyError::BeyondBall { radius: self.radius })?;
        }
        Ok(v)
    }

    /// Distances in the ball graph from `source` (`usize::MAX` if unreachable).
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let n = self.vertex_count();
        let sigma = self.presentation.alphabet.size();
        let mut dist = vec![usize::MAX; n];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for x in 0..sigma {
                let t = self.adjacency[v * sigma + x];
                if t != NONE && dist[t as usize] == usize::MAX {
                    dist[t as usize] = dist[v] + 1;
                    queue.push_back(t as usize);
                }
            }
        }
        dist
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaOptions {
    /// All vertex triples are examined when the ball has at most this many vertices.
    pub exhaustive_vertex_limit: usize,
    /// With a seed, larger balls are sampled; without one, triangles with a
    /// vertex at the identity are examined exhaustively.
    pub seed: Option<u64>,
    pub samples: usize,
}

impl Default for DeltaOptions {
    fn default() -> Self {
        DeltaOptions {
            exhaustive_vertex_limit: 400,
            seed: None,
            samples: 200_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaEstimate {
    pub delta: usize,
    pub triangles: u64,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Vertex representatives of a triangle attaining the estimate.
    pub witness: Option<[String; 3]>,
}

/// Lower bound for the thin-triangle constant: the largest `e` for which
/// some examined geodesic triangle has a side point at distance `e` from the
/// other two sides. Sides are greedy geodesics of the ball graph (at each
/// step the first generator, in alphabet order, that gets closer).
pub fn estimate_delta(ball: &CayleyBall, options: DeltaOptions) -> DeltaEstimate {
    let n = ball.vertex_count();
    let dist: Vec<Vec<usize>> = (0..n).map(|v| ball.distances_from(v)).collect();
    let sigma = ball.presentation.alphabet.size();
    let mut paths: Vec<Option<Vec<u32>>> = vec![None; n * n];
    let geodesic = |x: usize, y: usize, paths: &mut Vec<Option<Vec<u32>>>| -> Vec<u32> {
        if let Some(p) = &paths[x * n + y] {
            return p.clone();
        }
        let mut path = vec![x as u32];
        let mut v = x;
        while v != y {
            let next = (0..sigma)
                .filter_map(|l| ball.neighbour(v, Letter(l as u32)))
                .find(|&t| dist[t][y] + 1 == dist[v][y])
                .expect("ball graph is connected");
            path.push(next as u32);
            v = next;
        }
        paths[x * n + y] = Some(path.clone());
        path
    };
    let mut best = 0usize;
    let mut witness = None;
    let mut count = 0u64;
    let mut examine = |x: usize, y: usize, z: usize, paths: &mut Vec<Option<Vec<u32>>>| {
        let sides = [geodesic(x, y, paths), geodesic(y, z, paths), geodesic(x, z, paths)];
        let e = triangle_thinness(&sides, &dist);
        count += 1;
        if e > best || witness.is_none() {
            best = best.max(e);
            witness = Some([x, y, z]);
        }
    };
    let mode;
    if n <= options.exhaustive_vertex_limit {
        mode = "exhaustive".to_string();
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    examine(x, y, z, &mut paths);
                }
            }
        }
    } else if let Some(seed) = options.seed {
        mode = "sampled".to_string();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..options.samples {
            let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            examine(x, y, z, &mut paths);
        }
    } else {
        mode = "anchored".to_string();
        for y in 1..n {
            for z in y + 1..n {
                examine(0, y, z, &mut paths);
            }
        }
    }
    let render = |v: usize| ball.presentation.alphabet.render(ball.representative(v));
    DeltaEstimate {
        delta: best,
        triangles: count,
        mode,
        seed: options.seed.filter(|_| n > options.exhaustive_vertex_limit),
        witness: witness.map(|[x, y, z]| [render(x), render(y), render(z)]),
    }
}

fn triangle_thinness(sides: &[Vec<u32>; 3], dist: &[Vec<usize>]) -> usize {
    let mut worst = 0usize;
    for (i, side) in sides.iter().enumerate() {
        for &p in side {
            let mut nearest = usize::MAX;
            for (j, other) in sides.iter().enumerate() {
                if i == j {
                    continue;
                }
                for &q in other {
                    nearest = nearest.min(dist[p as usize][q as usize]);
                }
            }
            worst = worst.max(nearest);
        }
    }
    worst
}

/// Backend for geodesic questions: the free group (every reduced word is a
/// geodesic in the tree) or an explicit ball.
#[derive(Clone, Copy, Debug)]
pub enum GeodesicBackend<'a> {
    Free,
    Ball(&'a CayleyBall),
}

/// Every subword of length `r` (or the whole word, when shorter) is geodesic.
pub fn is_local_geodesic(backend: &GeodesicBackend<'_>, w: &ReducedWord, r: usize) -> Result<bool, CayleyError> {
    if r == 0 {
        return Err(CayleyError::ZeroScale);
    }
    match backend {
        GeodesicBackend::Free => Ok(true),
        GeodesicBackend::Ball(ball) => {
            let window = r.min(w.len());
            if window == 0 {
                return Ok(true);
            }
            for sub in w.letters().windows(window) {
                let end = ball.trace(sub)?;
                if ball.distance_from_identity(end) != window {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_group_ball_is_a_tree() {
        let ball = build_ball(&Presentation::free(2), 3, BallOptions::default()).unwrap();
        assert_eq!(ball.vertex_count(), 53);
        assert_eq!(ball.sphere_sizes(), vec![1, 4, 12, 36]);
        assert!(ball.confirmed());
    }

    #[test]
    fn z2_balls_are_diamonds() {
        for r in 1..=6 {
            let ball = build_ball(&Presentation::z2(), r, BallOptions::default()).unwrap();
            assert_eq!(ball.vertex_count(), 2 * r * r + 2 * r + 1, "radius {r}");
            assert!(ball.confirmed());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let tiny = BallOptions {
            max_cosets: 20,
            ..BallOptions::default()
        };
        assert!(matches!(
            build_ball(&Presentation::free(2), 4, tiny),
            Err(CayleyError::BudgetExceeded { budget: 20, .. })
        ));
        assert_eq!(
            build_ball(&Presentation::free(2), 0, BallOptions::default()).unwrap_err(),
            CayleyError::ZeroRadius
        );
    }

    #[test]
    fn finite_group_collapses() {
        // ⟨a | a^3⟩ is cyclic of order 3
        let alphabet = Alphabet::standard(1);
        let rel = alphabet.parse_word("a a a").unwrap();
        let p = Presentation::new(alphabet, vec![rel]).unwrap();
        let ball = build_ball(&p, 4, BallOptions::default()).unwrap();
        assert_eq!(ball.vertex_count(), 3);
        assert_eq!(ball.sphere_sizes(), vec![1, 2, 0, 0, 0]);
    }

    #[test]
    fn presentation_parsing() {
        let p = Presentation::parse("# Z^2\nalphabet: a b\nrelator: a b a^-1 b^-1\n").unwrap();
        assert_eq!(p, Presentation::z2());
        let juxtaposed = Presentation::parse("alphabet a b\naba⁻¹b⁻¹\n").unwrap();
        assert_eq!(juxtaposed, Presentation::z2());
        assert!(matches!(
            Presentation::parse("alphabet: a b\na b a^-1\n"),
            Err(CayleyError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Presentation::parse("alphabet: a b\na q\n"),
            Err(CayleyError::Parse { line: 2, .. })
        ));
        assert!(Presentation::parse("a b\n").is_err());
        assert!(Presentation::parse("").is_err());
    }

    #[test]
    fn free_delta_is_zero() {
        for r in 1..=3 {
            let ball = build_ball(&Presentation::free(2), r, BallOptions::default()).unwrap();
            assert_eq!(estimate_delta(&ball, DeltaOptions::default()).delta, 0);
        }
    }

    #[test]
    fn free_distances_are_reduced_lengths() {
        let ball = build_ball(&Presentation::free(2), 3, BallOptions::default()).unwrap();
        for u in (0..ball.vertex_count()).step_by(5) {
            let d = ball.distances_from(u);
            for v in 0..ball.vertex_count() {
                let (w, _) = ball.representative(u).invert().concat_reduced(ball.representative(v));
                assert_eq!(d[v], w.len());
            }
        }
    }

    #[test]
    fn local_geodesics() {
        let alpha = Alphabet::standard(2);
        let z2 = build_ball(&Presentation::z2(), 4, BallOptions::default()).unwrap();
        let loop_word = alpha.parse_word("a b a^-1 b^-1").unwrap();
        assert!(!is_local_geodesic(&GeodesicBackend::Ball(&z2), &loop_word, 4).unwrap());
        let stairs = alpha.parse_word("a a b b").unwrap();
        assert!(is_local_geodesic(&GeodesicBackend::Ball(&z2), &stairs, 4).unwrap());
        assert!(is_local_geodesic(&GeodesicBackend::Free, &loop_word, 4).unwrap());
        let long = alpha.parse_word("a a a a a").unwrap();
        assert!(matches!(
            is_local_geodesic(&GeodesicBackend::Ball(&z2), &long, 5),
            Err(CayleyError::BeyondBall { .. })
        ));
        assert_eq!(
            is_local_geodesic(&GeodesicBackend::Free, &long, 0),
            Err(CayleyError::ZeroScale)
        );
    }

    #[test]
    fn sampling_requires_and_records_a_seed() {
        let ball = build_ball(&Presentation::z2(), 3, BallOptions::default()).unwrap();
        let anchored = estimate_delta(
            &ball,
            DeltaOptions {
                exhaustive_vertex_limit: 5,
                ..DeltaOptions::default()
            },
        );
        assert_eq!(anchored.mode, "anchored");
        let options = DeltaOptions {
            exhaustive_vertex_limit: 5,
            seed: Some(7),
            samples: 500,
        };
        let a = estimate_delta(&ball, options);
        let b = estimate_delta(&ball, options);
        assert_eq!(a, b);
        assert_eq!(a.mode, "sampled");
        assert_eq!(a.seed, Some(7));
    }
}
