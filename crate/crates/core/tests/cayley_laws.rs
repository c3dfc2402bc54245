// SPDX-License-Identifier: Apache-2.0

use std::sync::OnceLock;

use laminar_core::cayley::GeodesicBackend;
use laminar_core::{build_ball, estimate_delta, is_local_geodesic, BallOptions, CayleyBall, DeltaOptions, Letter, Presentation, ReducedWord};
use proptest::prelude::*;

fn free_ball() -> &'static CayleyBall {
    static BALL: OnceLock<CayleyBall> = OnceLock::new();
    BALL.get_or_init(|| build_ball(&Presentation::free(2), 4, BallOptions::default()).unwrap())
}

#[test]
fn delta_is_monotone_in_the_radius() {
    for p in [Presentation::free(2), Presentation::z2()] {
        let mut previous = 0;
        for radius in 1..=5 {
            let ball = build_ball(&p, radius, BallOptions::default()).unwrap();
            let d = estimate_delta(&ball, DeltaOptions::default()).delta;
            assert!(d >= previous, "radius {radius}: {d} < {previous}");
            previous = d;
        }
    }
}

proptest! {
    #[test]
    fn free_distances_are_reduced_lengths(u in 0usize..161, v in 0usize..161) {
        let ball = free_ball();
        let (u, v) = (u % ball.vertex_count(), v % ball.vertex_count());
        let expected = ball.representative(u).invert().concat_reduced(ball.representative(v)).0.len();
        prop_assert_eq!(ball.distances_from(u)[v], expected);
    }

    #[test]
    fn local_geodesy_weakens_with_scale(
        raw in prop::collection::vec((0u32..4).prop_map(Letter), 0..12),
        r in 1usize..4,
        extra in 0usize..3,
    ) {
        static BALL: OnceLock<CayleyBall> = OnceLock::new();
        let ball = BALL.get_or_init(|| build_ball(&Presentation::z2(), 6, BallOptions::default()).unwrap());
        let w = ReducedWord::reduce(raw);
        for backend in [GeodesicBackend::Free, GeodesicBackend::Ball(ball)] {
            if is_local_geodesic(&backend, &w, r + extra).unwrap() {
                prop_assert!(is_local_geodesic(&backend, &w, r).unwrap());
            }
        }
    }
}
