//! Canonicalization must commute with steps and preserve what the checks read.

use std::collections::{HashSet, VecDeque};

use fairstep_core::explore::{explore, ExploreOptions};
use fairstep_core::model::{canonical, initial_state, sys_blok, sys_successors};
use fairstep_core::systems::{BakeImplTState, BakeryImpl};
use fairstep_core::{KeySet, SystemState, TaskSystem};
use proptest::prelude::*;

fn walk(sys: &BakeryImpl, n: u32, picks: &[u32]) -> Vec<SystemState<BakeImplTState>> {
    let mut x = initial_state(sys, KeySet::new(n));
    let mut out = vec![x.clone()];
    for p in picks {
        let k = fairstep_core::Key::new(p % n);
        if !sys_blok(&x, k, sys) {
            x = sys_successors(&x, k, sys).unwrap().remove(0);
            out.push(x.clone());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn canon_commutes_with_steps(n in 1u32..=3, picks in prop::collection::vec(0u32..3, 0..120)) {
        let sys = BakeryImpl::new();
        for x in walk(&sys, n, &picks) {
            let c = canonical(&x, &sys);
            prop_assert_eq!(canonical(&c, &sys), c.clone());
            for k in x.keys().iter() {
                prop_assert_eq!(sys_blok(&x, k, &sys), sys_blok(&c, k, &sys));
                let raw: Vec<_> = sys_successors(&x, k, &sys).unwrap()
                    .iter().map(|y| canonical(y, &sys)).collect();
                let via: Vec<_> = sys_successors(&c, k, &sys).unwrap()
                    .iter().map(|y| canonical(y, &sys)).collect();
                prop_assert_eq!(raw, via);
            }
            for inv in sys.invariants() {
                prop_assert_eq!((inv.holds)(&x), (inv.holds)(&c), "{}", inv.name);
            }
        }
    }
}

#[test]
fn raw_bounded_search_lands_in_canonical_graph() {
    let sys = BakeryImpl::new();
    for n in 2..=3u32 {
        let keys = KeySet::new(n);
        let g = explore(
            &sys,
            keys,
            ExploreOptions {
                use_canon: true,
                ..ExploreOptions::default()
            },
        )
        .unwrap();
        let canon: HashSet<_> = g.states().iter().cloned().collect();
        let start = initial_state(&sys, keys);
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([(start, 0)]);
        while let Some((x, d)) = queue.pop_front() {
            assert!(canon.contains(&canonical(&x, &sys)));
            if d == 14 {
                continue;
            }
            for k in keys.iter() {
                if sys_blok(&x, k, &sys) {
                    continue;
                }
                for y in sys_successors(&x, k, &sys).unwrap() {
                    if seen.insert(y.clone()) {
                        queue.push_back((y, d + 1));
                    }
                }
            }
        }
    }
}
