// SPDX-License-Identifier: Apache-2.0

//! Generalized suffix automaton over letter sequences.
//!
//! Every path from the root spells a distinct factor of some inserted word,
//! so membership is a walk, per-length factor counts come from the state
//! length intervals, and enumeration is a bounded DFS.

use serde::{Deserialize, Serialize};

use crate::words::Letter;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorIndex {
    sigma: usize,
    len: Vec<u32>,
    link: Vec<u32>,
    next: Vec<u32>,
    letters_inserted: u64,
}

impl FactorIndex {
    pub fn new(sigma: usize) -> Self {
        FactorIndex {
            sigma,
            len: vec![0],
            link: vec![NONE],
            next: vec![NONE; sigma],
            letters_inserted: 0,
        }
    }

    pub fn states(&self) -> usize {
        self.len.len()
    }

    pub fn letters_inserted(&self) -> u64 {
        self.letters_inserted
    }

    #[inline]
    fn step(&self, state: u32, letter: Letter) -> u32 {
        self.next[state as usize * self.sigma + letter.index()]
    }

    #[inline]
    fn set(&mut self, state: u32, letter: Letter, target: u32) {
        self.next[state as usize * self.sigma + letter.index()] = target;
    }

    fn push_state(&mut self, len: u32, link: u32, transitions_from: Option<u32>) -> u32 {
        let id = self.len.len() as u32;
        self.len.push(len);
        self.link.push(link);
        match transitions_from {
            Some(src) => {
                let start = src as usize * self.sigma;
                self.next.extend_from_within(start..start + self.sigma);
            }
            None => self.next.extend(std::iter::repeat_n(NONE, self.sigma)),
        }
        id
    }

    pub fn insert(&mut self, word: &[Letter]) {
        let mut last = 0u32;
        for &letter in word {
            debug_assert!(letter.index() < self.sigma);
            last = self.extend(last, letter);
        }
        self.letters_inserted += word.len() as u64;
    }

    fn extend(&mut self, last: u32, c: Letter) -> u32 {
        let existing = self.step(last, c);
        if existing != NONE {
            if self.len[last as usize] + 1 == self.len[existing as usize] {
                return existing;
            }
            let clone = self.push_state(
                self.len[last as usize] + 1,
                self.link[existing as usize],
                Some(existing),
            );
            self.link[existing as usize] = clone;
            let mut p = last;
            while p != NONE && self.step(p, c) == existing {
                self.set(p, c, clone);
                p = self.link[p as usize];
            }
            return clone;
        }
        let cur = self.push_state(self.len[last as usize] + 1, NONE, None);
        let mut p = last;
        while p != NONE && self.step(p, c) == NONE {
            self.set(p, c, cur);
            p = self.link[p as usize];
        }
        if p == NONE {
            self.link[cur as usize] = 0;
        } else {
            let q = self.step(p, c);
            if self.len[p as usize] + 1 == self.len[q as usize] {
                self.link[cur as usize] = q;
            } else {
                let clone = self.push_state(self.len[p as usize] + 1, self.link[q as usize], Some(q));
                while p != NONE && self.step(p, c) == q {
                    self.set(p, c, clone);
                    p = self.link[p as usize];
                }
                self.link[q as usize] = clone;
                self.link[cur as usize] = clone;
            }
        }
        cur
    }

    pub fn contains(&self, word: &[Letter]) -> bool {
        let mut state = 0u32;
        for &letter in word {
            if letter.index() >= self.sigma {
                return false;
            }
            state = self.step(state, letter);
            if state == NONE {
                return false;
            }
        }
        true
    }

    /// Length of the longest factor of `text` (up to `cap`) that is a member.
    /// Matching statistics: follows suffix links on mismatch.
    pub fn longest_member_factor<I>(&self, text: I, cap: usize) -> usize
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut state = 0u32;
        let mut length = 0usize;
        let mut best = 0usize;
        for letter in text {
            if letter.index() >= self.sigma {
                state = 0;
                length = 0;
                continue;
            }
            while state != 0 && self.step(state, letter) == NONE {
                state = self.link[state as usize];
                length = self.len[state as usize] as usize;
            }
            let target = self.step(state, letter);
            if target == NONE {
                length = 0;
            } else {
                state = target;
                length += 1;
            }
            best = best.max(length);
            if best >= cap {
                return cap;
            }
        }
        best
    }

    /// For each end position `j` of `text`, the length of the longest member
    /// suffix of `text[..=j]`, capped at `cap`.
    pub fn matching_lengths(&self, text: &[Letter], cap: usize) -> Vec<usize> {
        let mut state = 0u32;
        let mut length = 0usize;
        let mut out = Vec::with_capacity(text.len());
        for &letter in text {
            if letter.index() >= self.sigma {
                state = 0;
                length = 0;
                out.push(0);
                continue;
            }
            while state != 0 && self.step(state, letter) == NONE {
                state = self.link[state as usize];
                length = self.len[state as usize] as usize;
            }
            let target = self.step(state, letter);
            if target == NONE {
                length = 0;
            } else {
                state = target;
                length += 1;
            }
            out.push(length.min(cap));
        }
        out
    }

    /// Number of distinct factors of each length `0..=max_len`.
    pub fn counts_by_length(&self, max_len: usize) -> Vec<u64> {
        let mut diff = vec![0i64; max_len + 2];
        for s in 1..self.len.len() {
            let lo = self.len[self.link[s] as usize] as usize + 1;
            let hi = (self.len[s] as usize).min(max_len);
            if lo <= hi {
                diff[lo] += 1;
                diff[hi + 1] -= 1;
            }
        }
        let mut counts = Vec::with_capacity(max_len + 1);
        counts.push(1);
        let mut running = 0i64;
        for d in diff.iter().take(max_len + 1).skip(1) {
            running += d;
            counts.push(running as u64);
        }
        counts
    }

    /// All member factors of exactly `length` letters, in letter order.
    pub fn enumerate(&self, length: usize) -> Vec<Vec<Letter>> {
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(length);
        self.enumerate_from(0, length, &mut path, &mut out);
        out
    }

    fn enumerate_from(&self, state: u32, remaining: usize, path: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if remaining == 0 {
            out.push(path.clone());
            return;
        }
        for c in 0..self.sigma {
            let letter = Letter(c as u32);
            let target = self.step(state, letter);
            if target != NONE {
                path.push(letter);
                self.enumerate_from(target, remaining - 1, path, out);
                path.pop();
            }
        }
    }
}
