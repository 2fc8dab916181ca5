//! Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use spinr::abelian::{direct_product, AbHom, FgAbGroup, Subgroup};
use spinr::lifting::{induce, lift_subgroup, lifts, so_pi1, LiftQuery};
use spinr::spaces::{canonical_structure, classify, holonomy_lift, ClassCount, Classification, TriState};
use spinr::Catalog;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn cat() -> &'static Catalog {
    Catalog::bundled()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn classify_named(space: &str, r: u32) -> Result<Classification, String> {
    let s = cat().space(space).map_err(|e| e.to_string())?;
    classify(cat(), &s, r).map_err(|e| format!("{space}: {e}"))
}

fn table() -> Check {
    let start = Instant::now();
    let rec = spinr::cli::table1(cat(), None).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let expected = [
        ("S3:SO(4)", "3"),
        ("S4:SO(5)", "3"),
        ("S8:SO(9)", "8"),
        ("S5:U(3)", "2"),
        ("S7:U(4)", "2"),
        ("S7:Sp(2)·Sp(1)", "1"),
        ("S11:Sp(3)·Sp(1)", "3"),
        ("S6:G2", "1"),
        ("S7:Spin(7)", "1"),
        ("S15:Spin(9)", "1"),
    ];
    let instances: Vec<_> = rec.rows.iter().flat_map(|r| &r.instances).collect();
    for (space, value) in expected {
        let got = instances.iter().find(|i| i.space == space).ok_or(format!("{space} not checked"))?;
        ensure(got.got == format!("{value} (exact)") && got.ok, || format!("{space}: got {}, want {value}", got.got))?;
    }
    ensure(rec.rows.len() == 9, || format!("{} rows", rec.rows.len()))?;
    let bad: Vec<_> = rec.rows.iter().filter(|r| !r.ok).map(|r| r.group.clone()).collect();
    ensure(bad.is_empty(), || format!("rows failing: {bad:?}"))?;
    let parametric = rec.rows.iter().filter(|r| r.instances.len() >= 3).count();
    ensure(parametric == 6, || format!("{parametric} parametric rows with three instances"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("9 rows, {} instances, {elapsed:.2?}", instances.len()))
}

fn subgroup(n: u32, r: u32, gens: &[&[i64]]) -> Subgroup {
    let amb = direct_product(&so_pi1(n), &so_pi1(r));
    let gens = gens.iter().map(|g| amb.element(g).unwrap()).collect();
    Subgroup::new(amb, gens).unwrap()
}

fn covering_images() -> Check {
    let mut cases = vec![(2, 2, subgroup(2, 2, &[&[1, 1], &[1, -1]]))];
    for n in [3, 5, 9] {
        cases.push((n, 2, subgroup(n, 2, &[&[1, 1]])));
    }
    for n in 3..=9 {
        for r in 3..=9 {
            cases.push((n, r, subgroup(n, r, &[&[1, 1]])));
        }
    }
    for (n, r, want) in &cases {
        let got = lift_subgroup(*n, *r).map_err(|e| e.to_string())?;
        ensure(got.same_as(want), || format!("({n},{r}): {:?}", got.generators()))?;
    }
    for n in 2..=9 {
        for r in 2..=9 {
            let idx = lift_subgroup(n, r).map_err(|e| e.to_string())?.index();
            ensure(idx == Some(2), || format!("({n},{r}): index {idx:?}"))?;
        }
    }
    Ok(format!("{} explicit images, index 2 on [2,9]²", cases.len()))
}

fn constraint(c: &Classification) -> Option<String> {
    match c.classes.as_slice() {
        [one] => one.constraint.as_ref().map(ToString::to_string),
        _ => None,
    }
}

fn counts() -> Check {
    let s2 = classify_named("S2:SO(3)", 2)?;
    ensure(s2.count == ClassCount::Infinite && constraint(&s2).as_deref() == Some("s odd"), || {
        format!("S2 r=2: {} {:?}", s2.count, constraint(&s2))
    })?;
    let mut want: Vec<(String, u32, usize)> = vec![("S4:SO(5)".into(), 3, 2)];
    for n in [3, 5, 7, 9] {
        want.push((format!("S{n}:SO({})", n + 1), n, 1));
    }
    for n in [6, 8] {
        want.push((format!("S{n}:SO({})", n + 1), n, 2));
    }
    for k in [1, 3, 5] {
        want.push((format!("S{}:Sp({k})·Sp(1)", 4 * k - 1), 3, 1));
    }
    for (space, r, k) in &want {
        let c = classify_named(space, *r)?;
        ensure(c.count == ClassCount::Finite(*k) && c.classes.len() == *k, || {
            format!("{space} r={r}: {} classes, want {k}", c.count)
        })?;
    }
    for space in ["S3:Sp(1)·U(1)", "S11:Sp(3)·U(1)"] {
        let c = classify_named(space, 2)?;
        ensure(constraint(&c).as_deref() == Some("s ≡ 2 mod 4"), || {
            format!("{space} r=2: {:?}", constraint(&c))
        })?;
    }
    Ok(format!("{} class counts, 3 residue constraints", want.len()))
}

fn negatives() -> Check {
    let mut queries = vec![("S4:SO(5)".to_string(), 2)];
    for n in [5u32, 6, 7] {
        for r in 2..n {
            queries.push((format!("S{n}:SO({})", n + 1), r));
        }
    }
    let (mut witnessed, mut traced) = (0, 0);
    for (space, r) in &queries {
        let c = classify_named(space, *r)?;
        ensure(c.is_empty() && c.complete, || format!("{space} r={r}: not an empty complete verdict"))?;
        let has_witness = c.rejected.iter().any(|rej| !rej.witnesses.is_empty());
        let has_trace = c.trace.as_ref().is_some_and(|t| t.proved);
        ensure(has_witness || has_trace, || format!("{space} r={r}: no proof attached"))?;
        witnessed += has_witness as usize;
        traced += has_trace as usize;
    }
    Ok(format!("{} empty verdicts ({witnessed} witnessed, {traced} traced)", queries.len()))
}

fn oracle() -> Check {
    const CASES: usize = 1000;
    let start = Instant::now();
    let mut runner = TestRunner::deterministic();
    let strategy = common::instance();
    for _ in 0..CASES {
        let inst = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        ensure(inst.library() == inst.brute_force(), || format!("disagreement on {inst:?}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("{CASES}/{CASES} instances agree, {elapsed:.2?}"))
}

fn group(free: usize, torsion: &[u64]) -> FgAbGroup {
    let labels: Vec<String> = (0..free + torsion.len()).map(|i| format!("g{i}")).collect();
    FgAbGroup::new(free, torsion, &labels).unwrap()
}

/// Every homomorphism `dom → π₁(SO(k))` with free coordinates in `[-2, 2]`.
fn homs(dom: &FgAbGroup, k: u32) -> Vec<AbHom> {
    let cod = so_pi1(k);
    let choices: Vec<i64> = if cod.free_rank() == 1 { (-2..=2).collect() } else { (0..cod.ngens() as i64 + 1).collect() };
    let mut out = Vec::new();
    let mut idx = vec![0usize; dom.ngens()];
    loop {
        let rows: Vec<Vec<i64>> = idx.iter().map(|&i| vec![choices[i]; cod.ngens()]).collect();
        if let Ok(h) = AbHom::from_coords(dom.clone(), cod.clone(), &rows) {
            out.push(h);
        }
        let Some(pos) = idx.iter().position(|&i| i + 1 < choices.len()) else { break };
        idx[pos] += 1;
        idx[..pos].iter_mut().for_each(|i| *i = 0);
    }
    out
}

fn properties() -> Check {
    // (a) every passing query still passes after inducing up to 9
    let mut monotone = 0;
    for dom in [group(1, &[]), group(0, &[2]), group(1, &[2])] {
        for n in 1..=9 {
            for r in 1..=9 {
                for sigma in homs(&dom, n) {
                    for phi in homs(&dom, r) {
                        let q = LiftQuery::new(n, r, sigma.clone(), phi.clone()).map_err(|e| e.to_string())?;
                        if !lifts(&q).lifts {
                            continue;
                        }
                        for s in r + 1..=9 {
                            let up = induce(&phi, r, s).map_err(|e| e.to_string())?;
                            let q = LiftQuery::new(n, s, sigma.clone(), up).map_err(|e| e.to_string())?;
                            ensure(lifts(&q).lifts, || format!("(a) n={n} r={r} s={s}"))?;
                            monotone += 1;
                        }
                    }
                }
            }
        }
    }

    let spaces = cat().sample_spaces(4).map_err(|e| e.to_string())?;
    // (b) the canonical structure lifts
    for s in spaces.iter().filter(|s| s.n >= 3) {
        let c = canonical_structure(cat(), s).map_err(|e| e.to_string())?;
        let q = LiftQuery::new(s.n, c.r, s.sigma_pi1.clone(), c.classes[0].representative.clone())
            .map_err(|e| e.to_string())?;
        ensure(lifts(&q).lifts, || format!("(b) {}", s.name))?;
    }
    // (c) at most one spin class, (d) present iff σ_♯ = 0
    for s in &spaces {
        let c = classify(cat(), s, 1).map_err(|e| e.to_string())?;
        ensure(c.classes.len() <= 1, || format!("(c) {}: {} classes", s.name, c.classes.len()))?;
        ensure(!c.is_empty() == s.sigma_pi1.is_zero(), || format!("(d) {}", s.name))?;
    }
    // (d) against the table's instances: spin exactly where the type is 1
    let rec = spinr::cli::table1(cat(), None).map_err(|e| e.to_string())?;
    let mut cross = 0;
    for inst in rec.rows.iter().flat_map(|r| &r.instances) {
        let spin = !classify_named(&inst.space, 1)?.is_empty();
        ensure(spin == (inst.expected == 1), || format!("(d) {} vs table value {}", inst.space, inst.expected))?;
        cross += 1;
    }
    Ok(format!("{monotone} induced queries, {} spaces, {cross} table instances", spaces.len()))
}

fn holonomy() -> Check {
    let mut want: Vec<(String, u32, u32, TriState)> = Vec::new();
    for m in 3..=9 {
        want.push((format!("SO({m})"), m, m, TriState::Yes));
    }
    for k in [0u32, 1] {
        want.push((format!("Sp({})·Sp(1)", 2 * k + 1), 8 * k + 4, 2, TriState::No));
    }
    for m in [2, 3, 4] {
        want.push((format!("SU({m})"), 2 * m, 1, TriState::Yes));
    }
    for (g, m, r, v) in &want {
        let got = holonomy_lift(cat(), g, *m, *r).map_err(|e| e.to_string())?.verdict;
        ensure(got == *v, || format!("{g} m={m} r={r}: {got}, want {v}"))?;
    }
    Ok(format!("{} verdicts", want.len()))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("table regression", table),
        ("covering images", covering_images),
        ("classification counts", counts),
        ("negative verdicts", negatives),
        ("membership oracle", oracle),
        ("property suites", properties),
        ("holonomy", holonomy),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS — {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL — {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
