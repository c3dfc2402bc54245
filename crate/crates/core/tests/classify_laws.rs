// SPDX-License-Identifier: Apache-2.0

use std::sync::{Arc, OnceLock};

use laminar_core::leaflang::BuildOptions;
use laminar_core::traintrack::fixtures::tribonacci;
use laminar_core::{
    build_language, classify_conical, classify_injective, fixed_ray, HyperbolicityParams, LeafLanguage, Letter,
    RayStream, ReducedWord, VerdictKind,
};
use proptest::prelude::*;

fn language() -> &'static LeafLanguage {
    static LANG: OnceLock<LeafLanguage> = OnceLock::new();
    LANG.get_or_init(|| build_language(&[tribonacci()], 120, BuildOptions::default()).unwrap())
}

fn leaf_prefix(len: usize) -> Vec<Letter> {
    static LEAF: OnceLock<Vec<Letter>> = OnceLock::new();
    LEAF.get_or_init(|| {
        let mut ray = fixed_ray(Arc::new(tribonacci()), Letter::generator(0)).unwrap();
        ray.extend(4000).unwrap().into_letters()
    })[..len]
        .to_vec()
}

fn period() -> impl Strategy<Value = ReducedWord> {
    prop::collection::vec((0u32..6).prop_map(Letter), 1..7)
        .prop_map(ReducedWord::reduce)
        .prop_filter("cyclically reduced", |w| !w.is_empty() && w.is_cyclically_reduced())
}

/// Periodic rays, leaf rays behind a random head, and leaf rays with a periodic insert.
fn ray(depth: usize) -> impl Strategy<Value = Vec<Letter>> {
    let periodic = period().prop_map(move |p| {
        let mut r = RayStream::periodic(p).unwrap();
        r.extend(depth).unwrap().into_letters()
    });
    let headed = (period(), 0usize..3 * depth / 4).prop_map(move |(p, head)| {
        let mut letters = p.power(head / p.len() + 1).into_letters();
        letters.truncate(head);
        letters.extend(leaf_prefix(depth));
        let mut ray = ReducedWord::reduce(letters).into_letters();
        ray.truncate(depth);
        ray
    });
    prop_oneof![periodic, headed]
}

fn params() -> HyperbolicityParams {
    HyperbolicityParams::new(1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn leaf_tails_are_never_certified_conical(prefix in ray(800)) {
        prop_assume!(prefix.len() >= 100);
        let injective = classify_injective(&prefix, language(), &params()).unwrap();
        let conical = classify_conical(&prefix, language(), &params(), 5).unwrap();
        if injective.kind == VerdictKind::NonInjectiveEvidence {
            prop_assert_ne!(conical.kind, VerdictKind::ConicalCertified);
        }
    }

    #[test]
    fn certificates_replay_and_survive_doubling(p in period()) {
        let mut ray = RayStream::periodic(p).unwrap();
        let short = ray.extend(600).unwrap().into_letters();
        let verdict = classify_conical(&short, language(), &params(), 5).unwrap();
        if let Some(cert) = verdict.certificate() {
            cert.replay(language(), &short).unwrap();
            let long = ray.extend(1200).unwrap().into_letters();
            cert.replay(language(), &long).unwrap();
            let again = classify_conical(&long, language(), &params(), 5).unwrap();
            prop_assert_eq!(again.kind, VerdictKind::ConicalCertified);
            again.certificate().unwrap().replay(language(), &long).unwrap();
        }
    }

    #[test]
    fn evidence_verdicts_carry_caveats(prefix in ray(400)) {
        prop_assume!(prefix.len() >= 100);
        for v in [
            classify_conical(&prefix, language(), &params(), 5).unwrap(),
            classify_injective(&prefix, language(), &params()).unwrap(),
        ] {
            prop_assert_eq!(v.depth, prefix.len());
            prop_assert!(!v.caveats.is_empty());
            prop_assert_eq!(v.kind == VerdictKind::ConicalCertified, v.certificate().is_some());
        }
    }
}

#[test]
fn tampered_certificates_fail_replay() {
    let prefix = {
        let mut r = RayStream::periodic(ReducedWord::reduce([Letter::generator(0)])).unwrap();
        r.extend(1000).unwrap().into_letters()
    };
    let verdict = classify_conical(&prefix, language(), &params(), 5).unwrap();
    let cert = verdict.certificate().unwrap();
    let mut moved = cert.clone();
    moved.occurrences[1].offset += 1;
    assert!(moved.replay(language(), &prefix).is_err());
    let mut thin = cert.clone();
    thin.occurrences.truncate(2);
    assert!(thin.replay(language(), &prefix).is_err());
    let mut other = prefix.clone();
    other[cert.occurrences[0].offset + 10] = Letter::generator(1);
    assert!(cert.replay(language(), &other).is_err());
}
