use proptest::prelude::*;

use unitary_asymptotes::atomset::{join_all, meet_all, AtomSet};
use unitary_asymptotes::models::arcs::{self, TURN};
use unitary_asymptotes::models::ArcSet;
use unitary_asymptotes::Error;

const CASES: u32 = 10_000;
const ID: u64 = 7;

fn atom_triple() -> impl Strategy<Value = (AtomSet, AtomSet, AtomSet)> {
    (1usize..=130).prop_flat_map(|u| {
        let set = move || prop::collection::vec(any::<bool>(), u).prop_map(move |bits| {
            let idx: Vec<usize> = (0..u).filter(|&j| bits[j]).collect();
            AtomSet::from_indices(ID, u, &idx)
        });
        (set(), set(), set())
    })
}

/// Arc sets whose endpoints sit on a 64-point grid, so every operation is exact in ticks.
fn arc_set() -> impl Strategy<Value = ArcSet> {
    prop::collection::vec((0u64..64, 1u64..64), 0..5).prop_map(|arcs| {
        let step = TURN / 64;
        let mut out = ArcSet::empty();
        for (s, len) in arcs {
            let start = s * step;
            out = out.join(&ArcSet::arc_ticks(start, (start + len * step) % TURN));
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn atomset_laws((a, b, c) in atom_triple()) {
        let j = |x: &AtomSet, y: &AtomSet| x.join(y).unwrap();
        let m = |x: &AtomSet, y: &AtomSet| x.meet(y).unwrap();
        prop_assert_eq!(j(&a, &b), j(&b, &a));
        prop_assert_eq!(m(&a, &b), m(&b, &a));
        prop_assert_eq!(j(&j(&a, &b), &c), j(&a, &j(&b, &c)));
        prop_assert_eq!(m(&m(&a, &b), &c), m(&a, &m(&b, &c)));
        prop_assert_eq!(j(&a, &m(&a, &b)), a.clone());
        prop_assert_eq!(m(&a, &j(&a, &b)), a.clone());
        prop_assert_eq!(m(&a, &j(&b, &c)), j(&m(&a, &b), &m(&a, &c)));
        prop_assert_eq!(j(&a, &m(&b, &c)), m(&j(&a, &b), &j(&a, &c)));
        prop_assert_eq!(j(&a, &b).complement(), m(&a.complement(), &b.complement()));
        prop_assert_eq!(m(&a, &b).complement(), j(&a.complement(), &b.complement()));
        prop_assert!(j(&a, &a.complement()).is_full());
        prop_assert!(m(&a, &a.complement()).is_empty());
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(a.difference(&b).unwrap(), m(&a, &b.complement()));
        prop_assert_eq!(j(&a, &b).len() + m(&a, &b).len(), a.len() + b.len());
        prop_assert_eq!(a.is_subset(&b).unwrap(), m(&a, &b) == a);
        prop_assert!(a.essentially_equal(&a).unwrap());
        prop_assert_eq!(join_all(ID, a.universe(), [&a, &b, &c]).unwrap(), j(&j(&a, &b), &c));
        prop_assert_eq!(meet_all(ID, a.universe(), [&a, &b, &c]).unwrap(), m(&m(&a, &b), &c));
    }

    #[test]
    fn arcset_laws(a in arc_set(), b in arc_set(), c in arc_set()) {
        prop_assert_eq!(a.join(&b), b.join(&a));
        prop_assert_eq!(a.meet(&b), b.meet(&a));
        prop_assert_eq!(a.join(&b).join(&c), a.join(&b.join(&c)));
        prop_assert_eq!(a.meet(&b).meet(&c), a.meet(&b.meet(&c)));
        prop_assert_eq!(a.join(&a.meet(&b)), a.clone());
        prop_assert_eq!(a.meet(&a.join(&b)), a.clone());
        prop_assert_eq!(a.meet(&b.join(&c)), a.meet(&b).join(&a.meet(&c)));
        prop_assert_eq!(a.join(&b.meet(&c)), a.join(&b).meet(&a.join(&c)));
        prop_assert_eq!(a.join(&b).complement(), a.complement().meet(&b.complement()));
        prop_assert_eq!(a.meet(&b).complement(), a.complement().join(&b.complement()));
        prop_assert!(a.join(&a.complement()).is_full());
        prop_assert!(a.meet(&a.complement()).is_empty());
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(a.difference(&b), a.meet(&b.complement()));
        prop_assert_eq!(a.join(&b).ticks() + a.meet(&b).ticks(), a.ticks() + b.ticks());
        prop_assert_eq!(a.is_subset(&b), a.meet(&b) == a);
        prop_assert!(a.ticks() <= TURN);
        prop_assert!((0.0..=1.0).contains(&a.measure()));
        prop_assert_eq!(arcs::join_all([&a, &b, &c]), a.join(&b).join(&c));
        prop_assert_eq!(arcs::meet_all([&a, &b, &c]), a.meet(&b).meet(&c));
    }

    #[test]
    fn arcset_intervals_disjoint_and_sorted(a in arc_set()) {
        let iv = a.intervals();
        for w in iv.windows(2) {
            prop_assert!(w[0].1 < w[1].0);
        }
        prop_assert!(iv.iter().all(|&(s, e)| s < e && e <= TURN));
    }
}

#[test]
fn atom_sets_of_different_measures_do_not_mix() {
    let a = AtomSet::full(1, 4);
    let b = AtomSet::full(2, 4);
    assert!(matches!(a.join(&b), Err(Error::MeasureMismatch)));
    assert!(matches!(a.meet(&b), Err(Error::MeasureMismatch)));
}

#[test]
fn full_and_empty_arcs() {
    assert_eq!(ArcSet::full().measure(), 1.0);
    assert_eq!(ArcSet::empty().complement(), ArcSet::full());
    assert_eq!(ArcSet::arc(0.0, std::f64::consts::PI).measure(), 0.5);
}
