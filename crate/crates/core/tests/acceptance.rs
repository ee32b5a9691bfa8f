//! One line per acceptance criterion. Criteria listed in `KNOWN_UNATTAINABLE`
//! are expected to fail; the run fails if any other criterion fails or if a
//! known one starts passing.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use sectgenus::chow::{
    h0_sym2_twist, multiply_classes, top_degree, BaseCurve, DivisorClass, ObstructionBranch,
    ProjBundleModel, SplittingType,
};
use sectgenus::classify::{
    default_n_range, default_rules, delta_bounds, enumerate_quadric_splittings, evaluate_candidate,
    reduction_tuples, veronese_solutions, ExclusionRule, RuleTrace,
};
use sectgenus::fixture::{
    embedded_rows, parse_fixture, render_fixture, ClassificationRow, TableId,
};
use sectgenus::oracle::oracle_selftest;
use sectgenus::report::Severity;
use sectgenus::surface::{
    blow_up, deg_t_enumeration, make_ruled, minimalization_invariants, recompute_row_2_3,
    RuledModel, WeightSequence,
};
use sectgenus::verify::{verify, VerifyOptions};
use sectgenus::Execution;

const KNOWN_UNATTAINABLE: &[u32] = &[9];

/// Collects named sub-checks; the criterion passes when all of them do.
#[derive(Default)]
struct Checks(Vec<String>);

impl Checks {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.0.push(what.into());
        }
    }
}

fn c1_closed_forms(c: &mut Checks) {
    let r = oracle_selftest(Execution::default()).unwrap();
    c.check(
        r.grid_points >= 2000,
        format!("only {} grid points", r.grid_points),
    );
    c.check(
        r.mismatches.is_empty(),
        format!("{} mismatches", r.mismatches.len()),
    );
    c.check(
        r.max_deviation == 0,
        format!("max deviation {}", r.max_deviation),
    );
}

fn c2_identity(c: &mut Checks) {
    let r = oracle_selftest(Execution::default()).unwrap();
    c.check(r.identity_points > 0, "no g = 3 grid points");
    c.check(
        r.identity_failures.is_empty(),
        format!("{} identity failures", r.identity_failures.len()),
    );
    let p = r.printed_identity_probe;
    c.check(
        (p.n, p.d, p.base_genus) == (3, 8, 0) && !p.holds,
        "printed form does not fail at (3,8,0)",
    );
    let out = Command::new(env!("CARGO_BIN_EXE_sectgenus"))
        .arg("oracle-selftest")
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    c.check(
        text.contains("(n, d, g(C)) = (3, 8, 0)") && text.contains("fails (counterexample)"),
        "self-test does not print the counterexample",
    );
    c.check(out.status.code() == Some(0), "self-test exit status");
}

fn admitted(d: i64) -> (BTreeSet<Vec<i64>>, BTreeSet<Vec<i64>>) {
    let cands = enumerate_quadric_splittings(
        d,
        default_n_range(d),
        &default_rules(),
        Execution::default(),
    )
    .unwrap();
    let all = cands
        .iter()
        .filter(|c| c.is_admitted())
        .map(|c| c.splitting.degrees().to_vec())
        .collect();
    let beyond = cands
        .iter()
        .filter(|c| c.is_beyond_paper())
        .map(|c| c.splitting.degrees().to_vec())
        .collect();
    (all, beyond)
}

fn c3_table(c: &mut Checks) {
    let rows = embedded_rows(TableId::T3_25);
    let listed = |d: i64| -> BTreeSet<Vec<i64>> {
        rows.iter()
            .filter(|r| r.int("d").unwrap() == d)
            .map(|r| r.list("splitting").unwrap().to_vec())
            .collect()
    };
    for d in 4..=12 {
        let (got, beyond) = admitted(d);
        c.check(
            got == listed(d),
            format!("d={d}: {got:?} vs {:?}", listed(d)),
        );
        c.check(beyond.is_empty(), format!("d={d}: beyond-paper {beyond:?}"));
    }
    let set = |v: &[&[i64]]| v.iter().map(|s| s.to_vec()).collect::<BTreeSet<_>>();
    c.check(
        admitted(7).0 == set(&[&[0, 0, 1, 2], &[0, 1, 1, 1], &[0, 0, 1, 1, 1]]),
        "d=7 list",
    );
    c.check(
        admitted(12).0 == set(&[&[1, 1, 3, 3], &[1, 2, 2, 3], &[2, 2, 2, 2]]),
        "d=12 list",
    );
    for d in 1..=3 {
        let (got, beyond) = admitted(d);
        let expected = listed(d);
        c.check(
            expected.is_subset(&got),
            format!("d={d}: listed families missing"),
        );
        let extras: BTreeSet<_> = got.difference(&expected).cloned().collect();
        c.check(
            extras == beyond,
            format!("d={d}: extras {extras:?} flagged {beyond:?}"),
        );
    }
}

fn c4_obstructions(c: &mut Checks) {
    let eval = |v: &[i64]| {
        let sp = SplittingType::new(v.to_vec()).unwrap();
        let d = sp.c1().unwrap() + 4;
        evaluate_candidate(&sp, d, &default_rules()).unwrap()
    };
    for v in [&[1, 1, 1, 4][..], &[1, 1, 1, 5]] {
        let rule = eval(v).exclusion().map(|x| x.rule);
        c.check(
            rule == Some(ExclusionRule::Corank1Empty),
            format!("{v:?}: {rule:?}"),
        );
    }
    let x = eval(&[1, 1, 2, 3]);
    let ok = matches!(
        x.exclusion().map(|x| &x.trace),
        Some(RuleTrace::Normal {
            branch: ObstructionBranch::Pairing,
            pairing: 1,
            ..
        })
    );
    c.check(ok, format!("(1,1,2,3): {:?}", x.status));
    let x = eval(&[1, 1, 2, 4]);
    let ok = matches!(
        x.exclusion().map(|x| &x.trace),
        Some(RuleTrace::Normal {
            branch: ObstructionBranch::VanishingSection,
            ..
        })
    );
    c.check(ok, format!("(1,1,2,4): {:?}", x.status));
    for v in [&[1, 2, 2, 2][..], &[1, 1, 3, 3], &[1, 2, 2, 3]] {
        c.check(eval(v).is_admitted(), format!("{v:?} not admitted"));
    }
}

fn c5_cohomology(c: &mut Checks) {
    let h = |v: &[i64], t| h0_sym2_twist(&SplittingType::new(v.to_vec()).unwrap(), t).unwrap();
    c.check(
        h(&[1, 2, 2, 2], -3) == 15,
        format!("(1,2,2,2), -3: {}", h(&[1, 2, 2, 2], -3)),
    );
    c.check(
        h(&[1, 2, 2, 3], -4) == 11,
        format!("(1,2,2,3), -4: {}", h(&[1, 2, 2, 3], -4)),
    );
}

fn c6_pushforward(c: &mut Checks) {
    let bundle = ProjBundleModel::new(BaseCurve::RATIONAL, 4, 6).unwrap();
    let hf = DivisorClass::new(1, -1);
    let prod = multiply_classes(&bundle, &[hf, hf, hf, DivisorClass::new(2, -2)]).unwrap();
    let deg = top_degree(&bundle, &prod).unwrap();
    c.check(deg == 4, format!("degree {deg}"));
}

fn c7_veronese(c: &mut Checks) {
    let sols = veronese_solutions(3).unwrap();
    let got: Vec<_> = sols.iter().map(|s| (s.g_c, s.e, s.b, s.d)).collect();
    c.check(got == [(0, 0, 1, 12), (1, 2, -1, 4)], format!("{got:?}"));
    c.check(sols.iter().all(|s| s.ring_genus == 3), "ring genus");
}

fn c8_theorem_rows(c: &mut Checks) {
    let rows = embedded_rows(TableId::T2_3);
    for r in &rows {
        let got = recompute_row_2_3(r).unwrap();
        let stated = r.int("A2").unwrap();
        if r.key == "VII-3/e=1" {
            c.check(
                got.g != 3 || got.aa != stated,
                "VII-3/e=1 unexpectedly consistent",
            );
        } else {
            c.check(
                got.g == 3 && got.aa == stated,
                format!("{}: g={} A2={}", r.key, got.g, got.aa),
            );
        }
    }
    let report = verify(TableId::T2_3, &rows, VerifyOptions::default()).unwrap();
    let wl = report
        .find("VII-3/e=1")
        .map(|v| (v.verdict.label(), v.severity));
    c.check(
        wl == Some(("discrepancy", Severity::Whitelisted)),
        format!("VII-3/e=1: {wl:?}"),
    );
    c.check(report.exit_status == 0, "exit status with whitelist");
    let strict = verify(
        TableId::T2_3,
        &rows,
        VerifyOptions {
            honor_whitelist: false,
            ..Default::default()
        },
    )
    .unwrap();
    c.check(strict.exit_status == 1, "exit status without whitelist");
}

fn c9_section_five(c: &mut Checks) {
    let t = reduction_tuples(3).unwrap();
    let got: Vec<_> = t
        .general_type_tuples
        .iter()
        .map(|t| vec![t.ln, t.r, t.ln_reduced])
        .collect();
    let listed: Vec<_> = embedded_rows(TableId::T5_7)
        .iter()
        .map(|r| {
            vec![
                r.int("Ln").unwrap(),
                r.int("r").unwrap(),
                r.int("Lpn").unwrap(),
            ]
        })
        .collect();
    c.check(
        got == listed,
        format!("tuples {got:?}, expected {listed:?}"),
    );
    c.check(t.veronese_blowup_bound == 3, "blow-up bound");
    c.check(delta_bounds(3).unwrap().d_range() == (1..=4), "delta range");
    let deg_t: Vec<_> = deg_t_enumeration()
        .iter()
        .map(|r| vec![r.deg_t, r.deg_g, r.c2, r.l3])
        .collect();
    let listed: Vec<_> = embedded_rows(TableId::T2_8_2)
        .iter()
        .map(|r| {
            ["degT", "degG", "c2", "L3"]
                .map(|f| r.int(f).unwrap())
                .to_vec()
        })
        .collect();
    c.check(
        deg_t == listed && deg_t.len() == 4,
        format!("degT rows {deg_t:?}"),
    );
}

fn c10_properties(c: &mut Checks) {
    let config = Config {
        cases: 100,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(
        config.clone(),
        proptest::test_runner::TestRng::deterministic_rng(config.rng_algorithm),
    );

    let blowups = (
        0i64..=3,
        -3i64..=3,
        1i64..=6,
        -6i64..=6,
        prop::collection::vec(1i64..=6, 0..=9),
    );
    let r = runner.run(&blowups, |(g, e, x, y, w)| {
        let base = make_ruled(RuledModel { base_genus: g, e })
            .with_polarization(vec![x, y])
            .unwrap();
        let p0 = base.pairing_data().unwrap();
        let w = WeightSequence::new(w).unwrap();
        let p1 = blow_up(&base, &w).unwrap().pairing_data().unwrap();
        let closed =
            minimalization_invariants(p0.sectional_genus().unwrap(), p0.aa, p0.kk, &w).unwrap();
        prop_assert_eq!(
            (p1.aa, p1.kk, p1.sectional_genus().unwrap()),
            (closed.aa, closed.kk, closed.g)
        );
        Ok(())
    });
    c.check(r.is_ok(), format!("blow-up: {r:?}"));

    let factors = (2usize..=6, -5i64..=5).prop_flat_map(|(rank, c1)| {
        (
            Just(rank),
            Just(c1),
            prop::collection::vec((-4i64..=4, -4i64..=4), rank),
        )
    });
    let r = runner.run(&factors, |(rank, c1, fs)| {
        let bundle = ProjBundleModel::new(BaseCurve::RATIONAL, rank, c1).unwrap();
        let classes: Vec<_> = fs.iter().map(|&(h, f)| DivisorClass::new(h, f)).collect();
        let forward = multiply_classes(&bundle, &classes).unwrap();
        let mut rev = classes.clone();
        rev.reverse();
        rev.rotate_left(1);
        prop_assert_eq!(forward, multiply_classes(&bundle, &rev).unwrap());
        Ok(())
    });
    c.check(r.is_ok(), format!("permutation: {r:?}"));

    let rows = prop::collection::vec(
        ("[a-z0-9()=, -]{1,10}", -9i64..=9, 0i64..=9, -9i64..=9),
        1..8,
    );
    let r = runner.run(&rows, |rows| {
        let rows: Vec<_> = rows
            .into_iter()
            .map(|(k, a, b, c)| {
                ClassificationRow::new(TableId::T5_7, format!("r{k}"))
                    .with_int("Ln", a)
                    .with_int("r", b)
                    .with_int("Lpn", c)
            })
            .collect();
        let text = render_fixture(TableId::T5_7, &rows).unwrap();
        prop_assert_eq!(
            parse_fixture(&text, std::path::Path::new("mem")).unwrap(),
            rows
        );
        Ok(())
    });
    c.check(r.is_ok(), format!("fixture round trip: {r:?}"));
}

type Criterion = (u32, &'static str, fn(&mut Checks));

const CRITERIA: &[Criterion] = &[
    (
        1,
        "quadric closed forms agree with the ring and the naive oracle",
        c1_closed_forms,
    ),
    (
        2,
        "corrected (n-1) identity holds; printed (n+1) form fails at (3,8,0)",
        c2_identity,
    ),
    (
        3,
        "splitting lists for d in 4..=12 exact; extras at d <= 3 flagged",
        c3_table,
    ),
    (
        4,
        "obstruction rules exclude and admit the expected splittings",
        c4_obstructions,
    ),
    (5, "h0 of Sym^2 twists equals 15 and 11", c5_cohomology),
    (
        6,
        "(H-F)^3 (2H-2F) = 4 on the rank-4 bundle with e = 6",
        c6_pushforward,
    ),
    (
        7,
        "Veronese solutions are exactly the two expected, genus 3 in the ring",
        c7_veronese,
    ),
    (
        8,
        "surface rows recompute to g = 3; VII-3/e=1 whitelisted",
        c8_theorem_rows,
    ),
    (
        9,
        "reduction tuples, delta range and degT rows match exactly",
        c9_section_five,
    ),
    (
        10,
        "property suites on 100 deterministic cases each",
        c10_properties,
    ),
];

fn main() -> ExitCode {
    let mut unexpected = 0;
    for &(n, description, run) in CRITERIA {
        let start = Instant::now();
        let mut checks = Checks::default();
        run(&mut checks);
        let elapsed = start.elapsed();
        checks.check(elapsed.as_secs() < 10, format!("took {elapsed:?}"));
        let passed = checks.0.is_empty();
        let known = KNOWN_UNATTAINABLE.contains(&n);
        let tag = match (passed, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        println!("criterion {n}: {tag}: {description}");
        for failure in &checks.0 {
            println!("    {failure}");
        }
        if passed == known {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria did not behave as expected");
        ExitCode::FAILURE
    }
}
