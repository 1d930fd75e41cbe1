//! One pure predicate pair per check, reading only the analysis record.
//!
//! Hypotheses are conjunctions. A conjunct that is definitely false makes the
//! result vacuous even when other inputs are missing; otherwise a missing
//! input makes it skipped.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde_json::{json, Value};

use super::GroupAnalysis;
use crate::report::{CheckId, Status};
use crate::structure::{invariant_factors_of_product, NormalSubgroupInfo};

/// Status plus optional evidence.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Value>,
}

impl Verdict {
    fn verified() -> Self {
        Verdict { status: Status::Verified, witness: None }
    }

    fn violated(witness: Value) -> Self {
        Verdict { status: Status::Violated, witness: Some(witness) }
    }
}

/// Accumulates hypothesis conjuncts.
#[derive(Default)]
struct Hyp {
    failed: Option<&'static str>,
    missing: Vec<&'static str>,
}

impl Hyp {
    fn holds(&mut self, label: &'static str, field: &'static str, value: Option<bool>) -> &mut Self {
        match value {
            Some(false) if self.failed.is_none() => self.failed = Some(label),
            None => self.missing.push(field),
            _ => {}
        }
        self
    }

    /// Early verdict if the hypotheses fail or cannot be decided.
    fn settle(&self, a: &GroupAnalysis) -> Option<Verdict> {
        if let Some(label) = self.failed {
            return Some(Verdict { status: Status::Vacuous, witness: Some(json!({ "failed_hypothesis": label })) });
        }
        if !self.missing.is_empty() {
            let reasons: BTreeMap<&str, String> = self.missing.iter().map(|&f| (f, a.reason(f))).collect();
            return Some(Verdict {
                status: Status::Skipped,
                witness: Some(json!({ "missing": self.missing, "reasons": reasons })),
            });
        }
        None
    }
}

fn subgroup_json(n: &NormalSubgroupInfo) -> Value {
    json!({
        "subgroup_order": n.order.value().to_string(),
        "generators": n.subgroup.generators().iter().map(|g| g.format_cycles()).collect::<Vec<_>>(),
    })
}

fn nontrivial(a: &GroupAnalysis) -> Option<Vec<&NormalSubgroupInfo>> {
    a.normal_lattice.as_ref().map(|l| l.iter().filter(|n| !n.is_trivial()).collect())
}

/// Normal subgroups matching `pred`, registering existence as a conjunct.
fn instances<'a>(
    hyp: &mut Hyp,
    a: &'a GroupAnalysis,
    label: &'static str,
    ready: bool,
    pred: impl Fn(&NormalSubgroupInfo) -> bool,
) -> Vec<&'a NormalSubgroupInfo> {
    match nontrivial(a) {
        Some(list) if ready => {
            let found: Vec<_> = list.into_iter().filter(|n| pred(n)).collect();
            hyp.holds(label, "normal_lattice", Some(!found.is_empty()));
            found
        }
        Some(_) => Vec::new(),
        None => {
            hyp.holds(label, "normal_lattice", None);
            Vec::new()
        }
    }
}

fn elusive_hyp(hyp: &mut Hyp, a: &GroupAnalysis) {
    hyp.holds("elusive", "elusive", a.elusive);
}

fn fixity_at_least(hyp: &mut Hyp, a: &GroupAnalysis, label: &'static str, min: usize) {
    hyp.holds(label, "fixity", a.fixity_value().map(|f| f >= min));
}

/// Reads the fixity after `settle`; a missing value there is a skip on the conclusion side.
fn conclusion_fixity(a: &GroupAnalysis) -> Result<usize, Verdict> {
    a.fixity_value().ok_or_else(|| Verdict {
        status: Status::Skipped,
        witness: Some(json!({ "missing": ["fixity"], "reasons": { "fixity": a.reason("fixity") } })),
    })
}

macro_rules! settle {
    ($hyp:expr, $a:expr) => {
        if let Some(v) = $hyp.settle($a) {
            return v;
        }
    };
}

macro_rules! need_fixity {
    ($a:expr) => {
        match conclusion_fixity($a) {
            Ok(f) => f,
            Err(v) => return v,
        }
    };
}

pub fn check(id: CheckId, a: &GroupAnalysis) -> Verdict {
    match id {
        CheckId::L2_1a => l2_1a(a),
        CheckId::L2_1b => l2_1b(a),
        CheckId::C2_2 => c2_2(a),
        CheckId::C2_3 => min_fixity(a, 3, None),
        CheckId::L2_4i => l2_4i(a),
        CheckId::L2_4ii => l2_4ii(a),
        CheckId::C2_5 => min_fixity(a, 5, Some(("degree odd", a.degree() % 2 == 1))),
        CheckId::L2_6 => l2_6(a),
        CheckId::L2_7 => l2_7(a),
        CheckId::C2_8 => c2_8(a),
        CheckId::C2_9 => c2_9(a),
        CheckId::C2_10 => c2_10(a),
        CheckId::A1 => a1(a),
        CheckId::A2 => a2(a),
        CheckId::A3 => forbidden_normal(a, "cyclic", |n| n.is_cyclic),
        CheckId::A4 => forbidden_normal(a, "semiregular", |n| n.is_semiregular),
    }
}

fn l2_1a(a: &GroupAnalysis) -> Verdict {
    let mut hyp = Hyp::default();
    hyp.holds("transitive", "transitive", Some(a.transitive));
    fixity_at_least(&mut hyp, a, "fixity >= 2", 2);
    let primes: Vec<u64> = match a.fixity_value() {
        Some(f) => a.primes_stab.iter().copied().filter(|&p| p > f as u64).collect(),
        None => Vec::new(),
    };
    if a.fixity_value().is_some() {
        hyp.holds("some prime of the stabilizer exceeds f", "primes_stab", Some(!primes.is_empty()));
    }
    settle!(hyp, a);
    for p in primes {
        let (vs, vg) = (a.stabilizer_order.exponent_of(p), a.order_factored.exponent_of(p));
        if vs != vg {
            return Verdict::violated(json!({
                "prime": p, "fixity": a.fixity_value(), "v_p_stabilizer": vs, "v_p_group": vg,
            }));
        }
    }
    Verdict::verified()
}

fn l2_1b(a: &GroupAnalysis) -> Verdict {
    let mut hyp = Hyp::default();
    hyp.holds("transitive", "transitive", Some(a.transitive));
    fixity_at_least(&mut hyp, a, "fixity >= 2", 2);
    let f = a.fixity_value();
    let found = instances(&mut hyp, a, "normal p-subgroup with p > f", f.is_some(), |n| {
        n.is_p_group_for.is_some_and(|p| p > f.unwrap_or(0) as u64)
    });
    settle!(hyp, a);
    for n in found {
        let p = n.is_p_group_for.expect("filtered");
        if a.primes_stab.contains(&p) {
            let mut w = subgroup_json(n);
            w["prime"] = json!(p);
            w["fixity"] = json!(f);
            return Verdict::violated(w);
        }
    }
    Verdict::verified()
}

fn c2_2(a: &GroupAnalysis) -> Verdict {
    let mut hyp = Hyp::default();
    elusive_hyp(&mut hyp, a);
    let found = instances(&mut hyp, a, "nontrivial normal p-subgroup", true, |n| n.is_p_group_for.is_some());
    settle!(hyp, a);
    let f = need_fixity!(a);
    for n in found {
        let p = n.is_p_group_for.expect("filtered");
        if p > f as u64 {
            let mut w = subgroup_json(n);
            w["prime"] = json!(p);
            w["fixity"] = json!(f);
            return Verdict::violated(w);
        }
    }
    Verdict::verified()
}

fn min_fixity(a: &GroupAnalysis, min: usize, extra: Option<(&'static str, bool)>) -> Verdict {
    let mut hyp = Hyp::default();
    elusive_hyp(&mut hyp, a);
    if let Some((label, value)) = extra {
        hyp.holds(label, "degree", Some(value));
    }
    settle!(hyp, a);
    let f = need_fixity!(a);
    if f >= min {
        Verdict::verified()
    } else {
        Verdict::violated(json!({ "f": f, "required": min }))
    }
}

fn l2_4_hyp(a: &GroupAnalysis) -> Hyp {
    let mut hyp = Hyp::default();
    elusive_hyp(&mut hyp, a);
    hyp.holds("at least two primes divide the degree", "degree", Some(a.degree_factored.num_primes() >= 2));
    fixity_at_least(&mut hyp, a, "fixity >= 3", 3);
    hyp
}

fn l2_4i(a: &GroupAnalysis) -> Verdict {
    let hyp = l2_4_hyp(a);
    settle!(hyp, a);
    let f = need_fixity!(a) as u64;
    match a.degree_factored.primes().into_iter().find(|&p| p > f) {
        Some(p) => Verdict::violated(json!({ "prime": p, "fixity": f })),
        None => Verdict::verified(),
    }
}

fn l2_4ii(a: &GroupAnalysis) -> Verdict {
    let mut hyp = l2_4_hyp(a);
    if hyp.failed.is_none() {
        hyp.holds("", "prime_profile", a.prime_profile.as_ref().map(|_| true));
    }
    settle!(hyp, a);
    let f = need_fixity!(a);
    let profile = a.prime_profile.as_ref().expect("settled");
    for p in a.degree_factored.primes() {
        let Some(bucket) = profile.by_prime.get(&p) else { continue };
        let pu = p as usize;
        for (&count, element) in &bucket.prime_power {
            let allowed = count == 0 || (count % pu == 0 && count / pu >= 1 && count / pu <= f / pu);
            if !allowed {
                return Verdict::violated(json!({
                    "prime": p, "fixity": f, "fixed_points": count,
                    "element": element.format_cycles(), "fixed_set": element.fixed_points(),
                }));
            }
        }
    }
    Verdict::verified()
}

type Q = Ratio<i128>;

fn q_str(q: &Q) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn l2_6(a: &GroupAnalysis) -> Verdict {
    let mut hyp = Hyp::default();
    elusive_hyp(&mut hyp, a);
    let found = instances(&mut hyp, a, "nontrivial normal subgroup", true, |n| n.smallest_prime.is_some());
    settle!(hyp, a);
    let f = need_fixity!(a) as i128;
    let (min, h) = found
        .into_iter()
        .map(|n| (Q::new(n.order.value() as i128 - 1, n.smallest_prime.expect("filtered") as i128 - 1), n))
        .min_by(|x, y| x.0.cmp(&y.0))
        .expect("hypothesis guarantees an instance");
    let bound = min * f;
    let degree = Q::from_integer(a.degree() as i128);
    if degree <= bound {
        Verdict::verified()
    } else {
        let mut w = subgroup_json(h);
        w["degree"] = json!(a.degree());
        w["bound"] = json!(q_str(&bound));
        w["fixity"] = json!(f);
        Verdict::violated(w)
    }
}

fn l2_7(a: &GroupAnalysis) -> Verdict {
    let mut hyp = Hyp::default();
    elusive_hyp(&mut hyp, a);
    let found = instances(&mut hyp, a, "nontrivial normal abelian subgroup", true, |n| n.is_abelian);
    settle!(hyp, a);
    let f = need_fixity!(a) as i128;
    for n in found {
        let p = n.smallest_prime.expect("nontrivial") as i128;
        let size = n.order.value() as i128;
        let mid = Q::new(f * (p * f - 1), p - 1);
        let degree = Q::from_integer(a.degree() as i128);
        let top = Q::from_integer(f * (2 * f - 1));
        let failed = if size > p * f {
            Some("|N| <= p f")
        } else if degree > mid {
            Some("degree <= f(pf-1)/(p-1)")
        } else if mid > top {
            Some("f(pf-1)/(p-1) <= f(2f-1)")
        } else {
            None
        };
        if let Some(clause) = failed {
            let mut w = subgroup_json(n);
            w["clause"] = json!(clause);
            w["prime"] = json!(p);
            w["fixity"] = json!(f);
            w["degree"] = json!(a.degree());
            w["middle_bound"] = json!(q_str(&mid));
            return Verdict::violated(w);
        }
    }
    Verdict::verified()
}

fn c2_8(a: &GroupAnalysis) -> Verdict {
    let mut hyp = Hyp::default();
    hyp.holds("2-closed", "two_closed", a.two_closed);
    elusive_hyp(&mut hyp, a);
    hyp.holds("solvable", "solvable", a.solvable);
    settle!(hyp, a);
    let f = need_fixity!(a);
    if f >= 6 {
        Verdict::verified()
    } else {
        Verdict::violated(json!({ "f": f, "required": 6 }))
    }
}

/// Invariant-factor lists allowed for `N` when `f = 4` and the least prime is 2.
fn f4_candidates(order_primes: impl Iterator<Item = u64>) -> Vec<Vec<u64>> {
    let mut out = vec![vec![2, 2]];
    for p in order_primes.filter(|&p| p != 2) {
        for shape in [[2, p, p], [2, 2, p]] {
            out.push(invariant_factors_of_product(&shape).expect("positive orders"));
        }
    }
    out
}

/// First clause of the abelian-normal-subgroup corollary that `n` fails, if any.
fn c2_9_failure(n: &NormalSubgroupInfo, f: usize) -> Option<(u8, Value)> {
    let factors = n.order.factors();
    let k = factors.len();
    let (p1, _) = factors[0];
    let exps: Vec<u32> = factors.iter().map(|&(_, e)| e).collect();
    let invariants = n.abelian_invariants.clone().unwrap_or_default();

    if (k == 1 && exps[0] == 1) || exps.iter().all(|&e| e == 1) {
        return Some((1, json!({ "exponents": exps })));
    }
    let total: u32 = exps.iter().sum();
    let le_f = |base: u64, e: u32| base.checked_pow(e).is_some_and(|v| v <= f as u64);
    if !le_f(p1, total - 1) || !le_f(p1, k as u32 - 1) {
        return Some((2, json!({ "p1": p1, "total_exponent": total, "k": k })));
    }
    if f == 3 {
        let ok = (p1 == 2 && invariants == [2, 2]) || (p1 == 3 && invariants == [3, 3]);
        if !ok {
            return Some((3, json!({ "p1": p1, "invariants": invariants })));
        }
    }
    if f == 4 {
        let ok = match p1 {
            2 => f4_candidates(n.order.primes().into_iter()).contains(&invariants),
            3 => invariants == [3, 3],
            _ => false,
        };
        if !ok {
            return Some((4, json!({ "p1": p1, "invariants": invariants })));
        }
    }
    None
}

fn c2_9(a: &GroupAnalysis) -> Verdict {
    let mut hyp = Hyp::default();
    elusive_hyp(&mut hyp, a);
    let found = instances(&mut hyp, a, "nontrivial normal abelian subgroup", true, |n| n.is_abelian);
    settle!(hyp, a);
    let f = need_fixity!(a);
    for n in found {
        if let Some((clause, detail)) = c2_9_failure(n, f) {
            let mut w = subgroup_json(n);
            w["clause"] = json!(clause);
            w["detail"] = detail;
            w["fixity"] = json!(f);
            return Verdict::violated(w);
        }
    }
    Verdict::verified()
}

fn c2_10(a: &GroupAnalysis) -> Verdict {
    let mut hyp = Hyp::default();
    hyp.holds("transitive", "transitive", Some(a.transitive));
    hyp.holds("2-closed", "two_closed", a.two_closed);
    hyp.holds("fixity = 4", "fixity", a.fixity_value().map(|f| f == 4));
    instances(&mut hyp, a, "nontrivial normal p-subgroup", true, |n| n.is_p_group_for.is_some());
    if hyp.failed.is_none() {
        hyp.holds("", "derangement", a.derangement.as_ref().map(|_| true));
    }
    settle!(hyp, a);
    let any = a.derangement.clone().expect("settled");
    let prime: BTreeMap<String, String> =
        a.prime_derangements.iter().flatten().map(|(p, g)| (p.to_string(), g.format_cycles())).collect();
    let witness = json!({
        "any_order": any.as_ref().map(|g| g.format_cycles()),
        "prime_order": prime,
        "prime_order_holds": !prime.is_empty(),
    });
    Verdict { status: if any.is_some() { Status::Verified } else { Status::Violated }, witness: Some(witness) }
}

fn a1(a: &GroupAnalysis) -> Verdict {
    let mut hyp = Hyp::default();
    elusive_hyp(&mut hyp, a);
    settle!(hyp, a);
    if a.primes_g == a.primes_stab {
        Verdict::verified()
    } else {
        let missing: Vec<u64> = a.primes_g.difference(&a.primes_stab).copied().collect();
        Verdict::violated(
            json!({ "primes_group": a.primes_g, "primes_stabilizer": a.primes_stab, "difference": missing }),
        )
    }
}

fn a2(a: &GroupAnalysis) -> Verdict {
    let mut hyp = Hyp::default();
    elusive_hyp(&mut hyp, a);
    settle!(hyp, a);
    match a.degree_factored.prime_power_base() {
        Some(p) => Verdict::violated(json!({ "degree": a.degree(), "prime": p })),
        None => Verdict::verified(),
    }
}

fn forbidden_normal(a: &GroupAnalysis, what: &'static str, pred: impl Fn(&NormalSubgroupInfo) -> bool) -> Verdict {
    let mut hyp = Hyp::default();
    elusive_hyp(&mut hyp, a);
    hyp.holds("", "normal_lattice", a.normal_lattice.as_ref().map(|_| true));
    settle!(hyp, a);
    match nontrivial(a).expect("settled").into_iter().find(|n| pred(n)) {
        Some(n) => {
            let mut w = subgroup_json(n);
            w["property"] = json!(what);
            w["orbit_lengths"] = json!(n.orbit_lengths);
            Verdict::violated(w)
        }
        None => Verdict::verified(),
    }
}
