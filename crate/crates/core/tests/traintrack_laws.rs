// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use laminar_core::traintrack::fixtures::{fibonacci, tribonacci};
use laminar_core::{fixed_ray, Letter, ReducedWord, TrainTrackMap};
use proptest::prelude::*;

fn maps() -> Vec<TrainTrackMap> {
    vec![fibonacci(), tribonacci()]
}

fn matrix_length(map: &TrainTrackMap, generator: usize, n: usize) -> u64 {
    // independent of the crate: iterate the column vector of the transition matrix
    let m = map.transition_matrix();
    let rank = m.len();
    let mut v = vec![0u64; rank];
    v[generator] = 1;
    for _ in 0..n {
        let mut next = vec![0u64; rank];
        for (i, row) in m.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate() {
                next[i] += entry * v[j];
            }
        }
        v = next;
    }
    v.iter().sum()
}

#[test]
fn iterate_lengths_follow_the_transition_matrix() {
    for map in maps() {
        let map = map.verified(12).unwrap();
        for g in 0..map.alphabet().rank() {
            for n in 0..=map.verified_depth() {
                let w = map.iterate(Letter::generator(g), n);
                assert_eq!(w.len() as u64, matrix_length(&map, g, n), "generator {g}, n = {n}");
                assert_eq!(map.iterate_length(Letter::generator(g), n), w.len() as u128);
            }
        }
    }
}

fn positive_word(rank: u32) -> impl Strategy<Value = ReducedWord> {
    prop::collection::vec((0..rank).prop_map(|g| Letter::generator(g as usize)), 0..8)
        .prop_map(ReducedWord::reduce)
}

proptest! {
    #[test]
    fn iteration_composes(w in positive_word(3), m in 0usize..4, n in 0usize..4) {
        let map = tribonacci();
        prop_assert_eq!(map.apply(&w, m + n), map.apply(&map.apply(&w, m), n));
    }

    #[test]
    fn inverse_words_map_to_inverse_images(w in positive_word(2), n in 0usize..5) {
        let map = fibonacci();
        prop_assert_eq!(map.apply(&w.invert(), n), map.apply(&w, n).invert());
    }

    #[test]
    fn fixed_ray_prefixes_are_nested(a in 0usize..300, b in 0usize..300) {
        let (short, long) = (a.min(b), a.max(b));
        let mut ray = fixed_ray(Arc::new(tribonacci()), Letter::generator(0)).unwrap();
        let p = ray.extend(short).unwrap();
        let q = ray.extend(long).unwrap();
        prop_assert!(q.starts_with(&p));
        let mut fresh = fixed_ray(Arc::new(tribonacci()), Letter::generator(0)).unwrap();
        prop_assert_eq!(fresh.extend(long).unwrap(), q);
    }
}
