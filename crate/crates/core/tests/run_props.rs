//! Properties of simulated runs.

use fairstep_core::measures::{impl_prog, ProgError};
use fairstep_core::run::{
    check_refinement_trace, derive_fair_witness, detect_starvation, map_trace, simulate,
    stutter_stats, SchedulerPolicy,
};
use fairstep_core::systems::{BakeryImpl, BakerySpec, Relay};
use fairstep_core::{Key, KeySet, Selector};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prog_is_distance_to_next_progress(seed in any::<u64>(), n in 1u32..=3, slack in 0u64..4) {
        let bound = u64::from(n) + slack;
        let t = simulate(&BakeryImpl::new(), KeySet::new(n), SchedulerPolicy::AgingRandom { bound }, 300, seed).unwrap();
        for k in t.keys.iter() {
            for i in 0..t.len() {
                let moved = |j: usize| t.picks[j] == Selector::Key(k) && t.states[j + 1] != t.states[j];
                match impl_prog(k, i, &t, 1000) {
                    Ok(d) => {
                        let d = d as usize;
                        prop_assert!(moved(i + d));
                        prop_assert!((i..i + d).all(|j| !moved(j)));
                    }
                    Err(ProgError::Unresolved { .. }) => prop_assert!((i..t.len()).all(|j| !moved(j))),
                    Err(e) => prop_assert!(false, "{}", e),
                }
            }
            prop_assert_eq!(impl_prog(Key::new(n), 0, &t, 10), Ok(0));
        }
    }

    #[test]
    fn aging_runs_are_fair_and_refine(seed in any::<u64>(), slack in 0u64..4) {
        let bound = 3 + slack;
        let imp = BakeryImpl::new();
        let t = simulate(&imp, KeySet::new(3), SchedulerPolicy::AgingRandom { bound }, 2000, seed).unwrap();
        prop_assert!(derive_fair_witness(&t, bound).is_ok());
        let r = check_refinement_trace::<BakeryImpl, BakerySpec>(&t, &imp, &BakerySpec);
        prop_assert!(!r.failed());
        prop_assert!(detect_starvation(&t, &imp, None).findings.is_empty());
    }
}

#[test]
fn invisible_runs_stay_short() {
    let imp = BakeryImpl::new();
    let t = simulate(&imp, KeySet::new(3), SchedulerPolicy::RoundRobin, 10_000, 7).unwrap();
    let mapped = map_trace::<BakeryImpl, BakerySpec>(&t, &imp);
    let st = stutter_stats(&t, &mapped);
    assert!(st.longest_hidden_run.iter().all(|r| *r <= 3), "{st:?}");
}

#[test]
fn symmetric_relay_starves() {
    let t = simulate(&Relay::symmetric(), KeySet::new(2), SchedulerPolicy::RoundRobin, 100, 0).unwrap();
    let s = detect_starvation(&t, &Relay::symmetric(), None);
    assert!(s.findings.iter().any(|f| matches!(f, fairstep_core::run::StarvationFinding::Lasso { .. })));
    let t = simulate(&Relay::new(), KeySet::new(2), SchedulerPolicy::RoundRobin, 100, 0).unwrap();
    assert!(detect_starvation(&t, &Relay::new(), None).findings.is_empty());
}
