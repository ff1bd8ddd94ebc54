//! Starvation measures on every reachable Bakery state.

use fairstep_core::explore::{explore, ExploreOptions, StateGraph};
use fairstep_core::measures::{nstrvs_list, starver, sys_noblk, sys_nstrv};
use fairstep_core::model::{sys_blok, sys_successors};
use fairstep_core::systems::{BakeImplTState, BakeryImpl};
use fairstep_core::{KeySet, TaskSystem};

fn graph(n: u32) -> StateGraph<BakeImplTState> {
    let g = explore(
        &BakeryImpl::new(),
        KeySet::new(n),
        ExploreOptions {
            use_canon: true,
            ..ExploreOptions::default()
        },
    )
    .unwrap();
    assert!(g.completeness().is_complete());
    g
}

fn soundness(n: u32) -> usize {
    let sys = BakeryImpl::new();
    let val = sys.validity().unwrap();
    let mut starver_steps = 0;
    for x in graph(n).states() {
        for k in x.keys().iter() {
            assert!(nstrvs_list(k, x, &sys, val).unwrap().len() <= n as usize);
            if sys_noblk(k, x, val) {
                continue;
            }
            let s = starver(k, x, &sys).unwrap();
            assert!(!sys_blok(x, s, &sys), "starver {s} of {k} is blocked in {x:?}");
            let before = sys_nstrv(k, x, &sys, val).unwrap();
            for l in x.keys().iter() {
                if l == k || sys_blok(x, l, &sys) {
                    continue;
                }
                for y in sys_successors(x, l, &sys).unwrap() {
                    if sys_noblk(k, &y, val) {
                        continue;
                    }
                    let after = sys_nstrv(k, &y, &sys, val).unwrap();
                    if l == s {
                        starver_steps += 1;
                        assert!(after.try_lt(&before).unwrap(), "{k} via starver {l} in {x:?}");
                    } else {
                        assert!(after.try_le(&before).unwrap(), "{k} via {l} in {x:?}");
                    }
                }
            }
        }
    }
    starver_steps
}

#[test]
fn nstrv_sound_at_two_keys() {
    assert!(soundness(2) > 0);
}

#[test]
fn nstrv_sound_at_three_keys() {
    assert!(soundness(3) > 0);
}
