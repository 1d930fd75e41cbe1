//! Synthetic analysis records against an independently coded evaluator.

use std::collections::{BTreeMap, BTreeSet};

use pga_core::arith::factorize;
use pga_core::fixity::{FixityResult, PrimeBucket, PrimeFixProfile};
use pga_core::harness::evaluate;
use pga_core::report::{CheckId, Status};
use pga_core::structure::NormalSubgroupInfo;
use pga_core::{CorpusEntry, GroupAnalysis, PermGroup, Permutation};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use serde_json::json;

/// Kleene conjunction: `Some(false)` dominates, then `None`.
fn and(parts: &[Option<bool>]) -> Option<bool> {
    if parts.contains(&Some(false)) {
        Some(false)
    } else if parts.contains(&None) {
        None
    } else {
        Some(true)
    }
}

fn normals(a: &GroupAnalysis) -> Option<Vec<&NormalSubgroupInfo>> {
    a.normal_lattice.as_ref().map(|l| l.iter().filter(|n| n.order.value() > 1).collect())
}

fn prime_power_of(n: &NormalSubgroupInfo) -> Option<u64> {
    let f = n.order.factors();
    (f.len() == 1).then(|| f[0].0)
}

/// Hypothesis truth and, when true, conclusion truth.
fn expected(id: CheckId, a: &GroupAnalysis) -> (Option<bool>, Option<bool>) {
    let f = a.fixity.as_ref().map(|r| r.fixity);
    let n = a.degree();
    let el = a.elusive;
    let lat = normals(a);
    let p_subgroups: Option<Vec<&NormalSubgroupInfo>> =
        lat.as_ref().map(|l| l.iter().copied().filter(|h| prime_power_of(h).is_some()).collect());
    let abelian: Option<Vec<&NormalSubgroupInfo>> =
        lat.as_ref().map(|l| l.iter().copied().filter(|h| h.is_abelian).collect());
    let exists = |v: &Option<Vec<&NormalSubgroupInfo>>| v.as_ref().map(|v| !v.is_empty());
    let degree_primes = a.degree_factored.primes();

    match id {
        CheckId::L2_1a => {
            let big: Option<Vec<u64>> = f.map(|f| a.primes_stab.iter().copied().filter(|&p| p > f as u64).collect());
            let hyp = and(&[f.map(|f| f >= 2), big.as_ref().map(|b| !b.is_empty())]);
            let concl =
                big.map(|b| b.iter().all(|&p| a.stabilizer_order.exponent_of(p) == a.order_factored.exponent_of(p)));
            (hyp, concl)
        }
        CheckId::L2_1b => {
            let big = match (f, &p_subgroups) {
                (Some(f), Some(list)) => {
                    Some(list.iter().map(|h| prime_power_of(h).unwrap()).filter(|&p| p > f as u64).collect::<Vec<_>>())
                }
                _ => None,
            };
            let hyp = and(&[f.map(|f| f >= 2), big.as_ref().map(|b| !b.is_empty())]);
            (hyp, big.map(|b| b.iter().all(|p| !a.primes_stab.contains(p))))
        }
        CheckId::C2_2 => {
            let hyp = and(&[el, exists(&p_subgroups)]);
            let concl = match (f, &p_subgroups) {
                (Some(f), Some(l)) => Some(l.iter().all(|h| prime_power_of(h).unwrap() <= f as u64)),
                _ => None,
            };
            (hyp, concl)
        }
        CheckId::C2_3 => (el, f.map(|f| f >= 3)),
        CheckId::L2_4i | CheckId::L2_4ii => {
            let hyp = and(&[el, Some(degree_primes.len() >= 2), f.map(|f| f >= 3)]);
            let hyp = if id == CheckId::L2_4ii && hyp != Some(false) {
                and(&[hyp, a.prime_profile.as_ref().map(|_| true)])
            } else {
                hyp
            };
            let concl = if id == CheckId::L2_4i {
                f.map(|f| degree_primes.iter().all(|&p| p <= f as u64))
            } else {
                match (f, &a.prime_profile) {
                    (Some(f), Some(prof)) => Some(degree_primes.iter().all(|&p| {
                        prof.prime_power_counts(p)
                            .iter()
                            .all(|&c| c == 0 || (1..=f / p as usize).any(|m| m * p as usize == c))
                    })),
                    _ => None,
                }
            };
            (hyp, concl)
        }
        CheckId::C2_5 => (and(&[el, Some(n % 2 == 1)]), f.map(|f| f >= 5)),
        CheckId::L2_6 => {
            let hyp = and(&[el, lat.as_ref().map(|l| !l.is_empty())]);
            let concl = match (f, &lat) {
                // n (p_H - 1) <= f (|H| - 1) for every H, cross-multiplied.
                (Some(f), Some(l)) => Some(l.iter().all(|h| {
                    let p = h.order.factors()[0].0 as u128;
                    (n as u128) * (p - 1) <= (f as u128) * (h.order.value() as u128 - 1)
                })),
                _ => None,
            };
            (hyp, concl)
        }
        CheckId::L2_7 => {
            let hyp = and(&[el, exists(&abelian)]);
            let concl = match (f, &abelian) {
                (Some(f), Some(l)) => Some(l.iter().all(|h| {
                    let p = h.order.factors()[0].0 as i128;
                    let f = f as i128;
                    let size = h.order.value() as i128;
                    // n (p-1) <= f (pf-1) and f (pf-1) <= f (2f-1) (p-1)
                    size <= p * f
                        && (n as i128) * (p - 1) <= f * (p * f - 1)
                        && f * (p * f - 1) <= f * (2 * f - 1) * (p - 1)
                })),
                _ => None,
            };
            (hyp, concl)
        }
        CheckId::C2_8 => (and(&[a.two_closed, el, a.solvable]), f.map(|f| f >= 6)),
        CheckId::C2_9 => {
            let hyp = and(&[el, exists(&abelian)]);
            let concl = match (f, &abelian) {
                (Some(f), Some(l)) => Some(l.iter().all(|h| c2_9_holds(h, f))),
                _ => None,
            };
            (hyp, concl)
        }
        CheckId::C2_10 => {
            let hyp = and(&[Some(a.transitive), a.two_closed, f.map(|f| f == 4), exists(&p_subgroups)]);
            let hyp = if hyp == Some(false) { hyp } else { and(&[hyp, a.derangement.as_ref().map(|_| true)]) };
            (hyp, a.derangement.as_ref().map(Option::is_some))
        }
        CheckId::A1 => (el, Some(a.primes_g == a.primes_stab)),
        CheckId::A2 => (el, Some(a.degree_factored.factors().len() != 1)),
        CheckId::A3 => (and(&[el, lat.as_ref().map(|_| true)]), lat.as_ref().map(|l| l.iter().all(|h| !h.is_cyclic))),
        CheckId::A4 => {
            (and(&[el, lat.as_ref().map(|_| true)]), lat.as_ref().map(|l| l.iter().all(|h| !h.is_semiregular)))
        }
    }
}

fn c2_9_holds(h: &NormalSubgroupInfo, f: usize) -> bool {
    let fac = h.order.factors();
    let p1 = fac[0].0;
    let exps: Vec<u32> = fac.iter().map(|x| x.1).collect();
    let inv = h.abelian_invariants.clone().unwrap_or_default();
    let clause1 = exps.iter().any(|&e| e > 1);
    let total: u32 = exps.iter().sum();
    let pow_le = |e: u32| (p1 as f64).powi(e as i32) <= f as f64;
    let clause2 = pow_le(total - 1) && pow_le(fac.len() as u32 - 1);
    let clause3 = f != 3 || (p1 == 2 && inv == [2, 2]) || (p1 == 3 && inv == [3, 3]);
    let clause4 = f != 4
        || match p1 {
            2 => inv == [2, 2] || fac.iter().skip(1).any(|&(p, _)| inv == [p, 2 * p] || inv == [2, 2 * p]),
            3 => inv == [3, 3],
            _ => false,
        };
    clause1 && clause2 && clause3 && clause4
}

const PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

fn factored_strategy(max_exp: u32) -> impl Strategy<Value = u64> {
    prop::collection::vec(0..=max_exp, PRIMES.len())
        .prop_map(|exps| PRIMES.iter().zip(exps).map(|(&p, e)| p.pow(e)).product::<u64>())
}

fn prime_set() -> impl Strategy<Value = BTreeSet<u64>> {
    prop::collection::btree_set(prop::sample::select(PRIMES.to_vec()), 0..=4)
}

fn normal_strategy() -> impl Strategy<Value = NormalSubgroupInfo> {
    let invariants = prop_oneof![
        Just(vec![2u64, 2]),
        Just(vec![3, 3]),
        Just(vec![3, 6]),
        Just(vec![5, 10]),
        Just(vec![2, 6]),
        Just(vec![2, 10]),
        Just(vec![4]),
        Just(vec![2, 4]),
        Just(vec![]),
    ];
    (factored_strategy(2), any::<bool>(), any::<bool>(), any::<bool>(), invariants, any::<bool>()).prop_map(
        |(order, abelian, cyclic, semiregular, inv, has_inv)| {
            let order = factorize(order).unwrap();
            NormalSubgroupInfo {
                subgroup: PermGroup::trivial(1).unwrap(),
                is_p_group_for: order.prime_power_base(),
                smallest_prime: order.smallest_prime(),
                is_abelian: abelian,
                is_cyclic: abelian && cyclic,
                is_elementary_abelian_of: None,
                abelian_invariants: (abelian && has_inv).then_some(inv),
                is_semiregular: semiregular,
                orbit_lengths: vec![],
                is_minimal_normal: false,
                order,
            }
        },
    )
}

fn profile_strategy() -> impl Strategy<Value = PrimeFixProfile> {
    prop::collection::btree_map(
        prop::sample::select(PRIMES.to_vec()),
        prop::collection::btree_set(0usize..10, 1..4),
        0..4,
    )
    .prop_map(|m| {
        let e = Permutation::identity(1).unwrap();
        PrimeFixProfile {
            by_prime: m
                .into_iter()
                .map(|(p, counts)| {
                    let pp: BTreeMap<usize, Permutation> = counts.iter().map(|&c| (c, e.clone())).collect();
                    (p, PrimeBucket { prime_order: pp.clone(), prime_power: pp })
                })
                .collect(),
        }
    })
}

fn opt<T: std::fmt::Debug + Clone>(s: impl Strategy<Value = T>) -> impl Strategy<Value = Option<T>> {
    prop_oneof![1 => Just(None), 4 => s.prop_map(Some)]
}

prop_compose! {
    fn analysis()(
        degree in 1usize..=40,
        order in factored_strategy(3),
        stab in factored_strategy(2),
        primes_g in prime_set(),
        primes_stab in prime_set(),
        fixity in opt(0usize..=8),
        elusive in prop_oneof![1 => Just(None), 1 => Just(Some(false)), 3 => Just(Some(true))],
        two_closed in opt(any::<bool>()),
        solvable in opt(any::<bool>()),
        profile in opt(profile_strategy()),
        derangement in opt(any::<bool>()),
        lattice in opt(prop::collection::vec(normal_strategy(), 0..5)),
    ) -> GroupAnalysis {
        let witness = Permutation::identity(1).unwrap();
        GroupAnalysis {
            entry: CorpusEntry::new("synthetic", "inline", PermGroup::trivial(degree).unwrap()),
            degree_factored: factorize(degree as u64).unwrap(),
            order_factored: factorize(order).unwrap(),
            stabilizer_order: factorize(stab).unwrap(),
            primes_g,
            primes_stab,
            transitive: true,
            smallest_prime_g: None,
            fixity: fixity.map(|f| FixityResult { fixity: f, witness: witness.clone(), witness_fixed_set: vec![] }),
            elusive,
            prime_profile: profile,
            derangement: derangement.map(|d| d.then(|| witness.clone())),
            prime_derangements: Some(BTreeMap::new()),
            two_closed,
            solvable,
            minimal_normals: None,
            normal_lattice: lattice,
            absent: BTreeMap::new(),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn statuses_match_independent_evaluator(a in analysis()) {
        for id in CheckId::ALL {
            let v = evaluate(id, &a);
            let (hyp, concl) = expected(id, &a);
            let want = match (hyp, concl) {
                (Some(false), _) => Status::Vacuous,
                (None, _) => Status::Skipped,
                (Some(true), None) => Status::Skipped,
                (Some(true), Some(true)) => Status::Verified,
                (Some(true), Some(false)) => Status::Violated,
            };
            prop_assert_eq!(v.status, want, "{} on {:?}", id, a.to_json());
            if v.status == Status::Violated {
                prop_assert!(v.witness.is_some());
            }
            if v.status == Status::Verified && id != CheckId::C2_10 {
                prop_assert!(v.witness.is_none());
            }
        }
    }
}

#[test]
fn elusive_with_fixity_two_is_violated() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let mut a = analysis().new_tree(&mut runner).unwrap().current();
    a.elusive = Some(true);
    a.fixity = Some(FixityResult { fixity: 2, witness: Permutation::identity(1).unwrap(), witness_fixed_set: vec![] });
    let v = evaluate(CheckId::C2_3, &a);
    assert_eq!(v.status, Status::Violated);
    assert_eq!(v.witness.unwrap()["f"], json!(2));
}

#[test]
fn definite_failure_beats_missing_lattice() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let mut a = analysis().new_tree(&mut runner).unwrap().current();
    a.normal_lattice = None;
    a.elusive = Some(false);
    assert_eq!(evaluate(CheckId::L2_6, &a).status, Status::Vacuous);
    a.elusive = Some(true);
    assert_eq!(evaluate(CheckId::L2_6, &a).status, Status::Skipped);
    assert_eq!(evaluate(CheckId::A3, &a).status, Status::Skipped);
}
