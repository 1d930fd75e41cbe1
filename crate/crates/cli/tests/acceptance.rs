//! Acceptance criteria, one PASS/FAIL line each. All comparisons are exact;
//! the only tolerances are the wall-clock budgets below.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use pga_core::fixity::{prime_order_derangement, ElementCensus};
use pga_core::report::{CheckId, Report, Status};
use pga_core::{load_corpus, two_closure, Caps, CorpusEntry, PermGroup};

const CAP: u64 = 1_000_000;
/// Exact fixity of M11 on 12 points, from the exhaustive scan.
const M11_FIXITY: usize = 4;
/// Verified counts per check on the bundled corpus, frozen from the first
/// oracle-validated run. Checks not listed have zero verified results.
const GOLDEN_VERIFIED: &[(CheckId, usize)] = &[
    (CheckId::L2_1a, 8),
    (CheckId::L2_1b, 3),
    (CheckId::C2_3, 1),
    (CheckId::L2_4i, 1),
    (CheckId::L2_4ii, 1),
    (CheckId::L2_6, 1),
    (CheckId::A1, 1),
    (CheckId::A2, 1),
    (CheckId::A3, 1),
    (CheckId::A4, 1),
];
/// Checks that must be verified on M11 on 12 points.
const M11_VERIFIED: &[CheckId] = &[
    CheckId::C2_3,
    CheckId::L2_4i,
    CheckId::L2_4ii,
    CheckId::L2_6,
    CheckId::A1,
    CheckId::A2,
    CheckId::A3,
    CheckId::A4,
];

type Outcome = Result<String, String>;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus() -> Vec<CorpusEntry> {
    load_corpus(&corpus_dir(), &Caps::default()).expect("bundled corpus loads")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1(corpus: &[CorpusEntry]) -> Outcome {
    let mut groups = 0;
    let mut memberships = 0;
    for e in corpus {
        let g = &e.group;
        let n = g.degree();
        // Orders up to 5000 are compared against the oracle closure.
        let order = g.order().map_err(|x| x.to_string())?;
        if order > 5000 {
            continue;
        }
        groups += 1;
        let naive = oracle::closure(n, &oracle::gens(g));
        ensure(naive.len() as u64 == order, || format!("{}: chain order {order}, closure {}", e.name, naive.len()))?;
        if n <= 5 {
            for p in oracle::all_perms(n) {
                let inside = g.contains(&oracle::to_perm(&p)).map_err(|x| x.to_string())?;
                ensure(inside == naive.contains(&p), || format!("{}: membership of {p:?} disagrees", e.name))?;
                memberships += 1;
            }
        }
    }
    Ok(format!("{groups} groups, {memberships} membership queries"))
}

fn criterion_2(corpus: &[CorpusEntry]) -> Outcome {
    let mut groups = 0;
    for e in corpus.iter().filter(|e| e.group.degree() <= 7) {
        let n = e.group.degree();
        let closure = two_closure(&e.group, 32).map_err(|x| x.to_string())?;
        let brute = oracle::brute_two_closure(n, &oracle::gens(&e.group));
        let order = closure.order().map_err(|x| x.to_string())?;
        ensure(order == brute.len() as u64, || format!("{}: closure order {order}, brute {}", e.name, brute.len()))?;
        for g in closure.generators() {
            ensure(brute.contains(&oracle::images(g)), || format!("{}: generator {g} not in brute closure", e.name))?;
        }
        for p in &brute {
            let inside = closure.contains(&oracle::to_perm(p)).map_err(|x| x.to_string())?;
            ensure(inside, || format!("{}: brute element {p:?} missing from closure", e.name))?;
        }
        groups += 1;
    }
    Ok(format!("{groups} groups of degree <= 7"))
}

fn criterion_3(corpus: &[CorpusEntry]) -> Outcome {
    let mut groups = 0;
    for e in corpus {
        let g = &e.group;
        if !g.is_transitive() || g.order().map_err(|x| x.to_string())? > 100_000 {
            continue;
        }
        let n = g.degree();
        let gens = oracle::gens(g);
        let elements = oracle::closure(n, &gens);
        let sum: u128 = elements.iter().map(|p| (oracle::fixed(p) as u128).pow(2)).sum();
        let rank = oracle::rank(n, &gens) as u128;
        ensure(rank * elements.len() as u128 == sum, || {
            format!("{}: rank {rank} * |G| {} != {sum}", e.name, elements.len())
        })?;
        groups += 1;
    }
    Ok(format!("{groups} transitive groups"))
}

fn criterion_4(corpus: &[CorpusEntry]) -> Outcome {
    let mut groups = 0;
    for e in corpus.iter().filter(|e| e.group.degree() <= 10) {
        let first = two_closure(&e.group, 32).map_err(|x| x.to_string())?;
        let second = two_closure(&first, 32).map_err(|x| x.to_string())?;
        ensure(e.group.is_subgroup_of(&first).map_err(|x| x.to_string())?, || format!("{}: G not in G^(2)", e.name))?;
        ensure(first.same_group(&second).map_err(|x| x.to_string())?, || {
            format!("{}: closure not idempotent", e.name)
        })?;
        groups += 1;
    }
    Ok(format!("{groups} groups of degree <= 10"))
}

fn verify(jobs: usize, out: &Path) -> Result<Report, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_pga"))
        .args(["verify"])
        .arg(corpus_dir())
        .args(["--check", "all", "--jobs", &jobs.to_string(), "--out"])
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.code() == Some(0), || {
        format!("verify exited {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stdout))
    })?;
    Report::parse(&std::fs::read_to_string(out).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn criterion_5(corpus: &[CorpusEntry], dir: &Path) -> Outcome {
    ensure(corpus.len() >= 25, || format!("only {} groups in the corpus", corpus.len()))?;
    let degrees: Vec<usize> = corpus.iter().map(|e| e.declared_degree).collect();
    ensure(degrees.iter().all(|d| (3..=12).contains(d)), || "degree outside 3..=12".into())?;
    let report = verify(4, &dir.join("report.jsonl"))?;
    ensure(report.entries.len() == corpus.len() * CheckId::ALL.len(), || {
        "not every (group, check) pair reported".into()
    })?;
    ensure(report.total(Status::Violated) == 0, || "violated results present".into())?;
    let summary = report.summary();
    let golden: BTreeMap<CheckId, usize> = GOLDEN_VERIFIED.iter().copied().collect();
    for id in CheckId::ALL {
        let got = summary.get(&id).map_or(0, |c| c.verified);
        let want = golden.get(&id).copied().unwrap_or(0);
        ensure(got == want, || format!("{id}: {got} verified, golden {want}"))?;
    }
    for &id in M11_VERIFIED {
        let line = report.entries.iter().find(|r| r.group == "m11_12" && r.check == id);
        ensure(line.is_some_and(|r| r.status == Status::Verified), || format!("{id} not verified on m11_12"))?;
    }
    Ok(format!("{} groups, {} results, 0 violated", corpus.len(), report.entries.len()))
}

fn criterion_6(corpus: &[CorpusEntry]) -> Outcome {
    let m11 = corpus.iter().find(|e| e.name == "m11_12").ok_or("m11_12 missing")?;
    let g: &PermGroup = &m11.group;
    let err = |x: pga_core::Error| x.to_string();
    ensure(g.degree() == 12, || "degree".into())?;
    ensure(g.order().map_err(err)? == 7920, || "order".into())?;
    ensure(oracle::closure(12, &oracle::gens(g)).len() == 7920, || "oracle order".into())?;
    ensure(g.is_transitive(), || "transitive".into())?;
    ensure(g.point_stabilizer(0).map_err(err)?.order().map_err(err)? == 660, || "stabilizer order".into())?;
    for p in [2, 3, 5, 11] {
        ensure(prime_order_derangement(g, p, CAP).map_err(err)?.is_none(), || format!("derangement of order {p}"))?;
    }
    let census = ElementCensus::scan(g, CAP).map_err(err)?;
    ensure(census.is_elusive(), || "not elusive".into())?;
    let f = census.fixity.ok_or("no fixity")?;
    ensure(f.fixity >= 3 && f.fixity == M11_FIXITY, || format!("fixity {} (golden {M11_FIXITY})", f.fixity))?;
    Ok(format!("order 7920, stabilizer 660, elusive, fixity {}", f.fixity))
}

fn criterion_7(corpus: &[CorpusEntry]) -> Outcome {
    for e in corpus {
        let g = &e.group;
        let f = ElementCensus::scan(g, CAP).map_err(|x| x.to_string())?.fixity.ok_or("trivial group")?.fixity;
        let regular = g.is_transitive() && g.order().map_err(|x| x.to_string())? == g.degree() as u64;
        ensure((f == 0) == regular, || format!("{}: fixity {f}, regular {regular}", e.name))?;
    }
    for name in ["frobenius_5_4", "frobenius_7_3", "dihedral_5"] {
        let e = corpus.iter().find(|e| e.name == name).ok_or_else(|| format!("{name} missing"))?;
        let f = ElementCensus::scan(&e.group, CAP).map_err(|x| x.to_string())?.fixity.ok_or("trivial")?.fixity;
        ensure(f == 1, || format!("{name}: fixity {f}"))?;
    }
    Ok(format!("{} groups; frobenius_5_4, frobenius_7_3, dihedral_5 have fixity 1", corpus.len()))
}

fn criterion_8(dir: &Path) -> Outcome {
    let one = verify(1, &dir.join("jobs1.jsonl"))?;
    let eight = verify(8, &dir.join("jobs8.jsonl"))?;
    ensure(one.metadata == eight.metadata, || "metadata differs".into())?;
    ensure(one.body_without_timing() == eight.body_without_timing(), || "report bodies differ".into())?;
    Ok(format!("{} identical lines", one.entries.len()))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let corpus = corpus();
    type Criterion<'a> = (&'a str, Duration, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("1 oracle equivalence (order, membership)", Duration::from_secs(30), Box::new(|| criterion_1(&corpus))),
        ("2 two-closure vs brute-force filter", Duration::from_secs(60), Box::new(|| criterion_2(&corpus))),
        ("3 Burnside rank identity", Duration::from_secs(60), Box::new(|| criterion_3(&corpus))),
        ("4 closure idempotence and containment", Duration::from_secs(60), Box::new(|| criterion_4(&corpus))),
        (
            "5 lemma suite on the bundled corpus",
            Duration::from_secs(180),
            Box::new(|| criterion_5(&corpus, dir.path())),
        ),
        ("6 M11 on 12 points from scratch", Duration::from_secs(30), Box::new(|| criterion_6(&corpus))),
        (
            "7 fixity 0 iff regular, fixity 1 on Frobenius builtins",
            Duration::from_secs(60),
            Box::new(|| criterion_7(&corpus)),
        ),
        ("8 report determinism across --jobs", Duration::from_secs(180), Box::new(|| criterion_8(dir.path()))),
    ];
    let mut failed = 0;
    for (name, budget, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome
            .and_then(|msg| ensure(elapsed <= *budget, || format!("took {elapsed:?}, budget {budget:?}")).map(|_| msg));
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{:.2}s]", elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{:.2}s]", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
