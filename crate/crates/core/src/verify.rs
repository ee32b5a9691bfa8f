//! Recomputes each table from the engines and compares it with a fixture.

use std::collections::{BTreeMap, BTreeSet};

use crate::chow::SplittingType;
use crate::classify::{
    default_n_range, default_rules, enumerate_quadric_splittings, evaluate_candidate,
    reduction_tuples, veronese_solutions,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fixture::{ClassificationRow, TableId};
use crate::report::{RowVerdict, Severity, Verdict, VerificationReport};
use crate::surface::{deg_t_enumeration, verify_row_2_3};

/// Degrees at or below this only warn about candidates the reference table does not list.
pub const BEYOND_PAPER_WARN_MAX_D: i64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Treat rows flagged `expect_discrepancy` as tolerated.
    pub honor_whitelist: bool,
    pub exec: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            honor_whitelist: true,
            exec: Execution::default(),
        }
    }
}

pub fn verify(
    table: TableId,
    rows: &[ClassificationRow],
    opts: VerifyOptions,
) -> Result<VerificationReport> {
    if let Some(r) = rows.iter().find(|r| r.table != table) {
        return Err(Error::Schema {
            row: r.key.clone(),
            message: format!("belongs to table {}, not {table}", r.table),
        });
    }
    let verdicts = match table {
        TableId::T2_3 => opts
            .exec
            .map(rows.to_vec(), |r| verify_row_2_3(&r, opts.honor_whitelist))
            .into_iter()
            .collect::<Result<Vec<_>>>()?,
        TableId::T3_25 => verify_3_25(rows, opts.exec)?,
        TableId::T5_7 => {
            let computed = reduction_tuples(3)?
                .general_type_tuples
                .into_iter()
                .map(|t| vec![t.ln, t.r, t.ln_reduced])
                .collect();
            compare_lists(rows, &["Ln", "r", "Lpn"], computed, |v| {
                format!("({},{},{})", v[0], v[1], v[2])
            })?
        }
        TableId::T2_8_2 => {
            let computed = deg_t_enumeration()
                .into_iter()
                .map(|r| vec![r.deg_t, r.deg_g, r.c2, r.l3])
                .collect();
            compare_lists(rows, &["degT", "degG", "c2", "L3"], computed, |v| {
                format!("degT={}", v[0])
            })?
        }
        TableId::T4_4 => {
            let computed = veronese_solutions(3)?
                .into_iter()
                .map(|s| vec![s.g_c, s.e, s.b, s.d])
                .collect();
            compare_lists(rows, &["gC", "e", "b", "d"], computed, |v| {
                format!("g(C)={} e={} b={} d={}", v[0], v[1], v[2], v[3])
            })?
        }
    };
    Ok(VerificationReport::new(table, verdicts))
}

/// Exact list equality between the fixture rows (projected on `fields`) and
/// the engine output.
fn compare_lists(
    rows: &[ClassificationRow],
    fields: &[&str],
    computed: Vec<Vec<i64>>,
    label: impl Fn(&[i64]) -> String,
) -> Result<Vec<RowVerdict>> {
    let mut listed = Vec::with_capacity(rows.len());
    for r in rows {
        let v = fields
            .iter()
            .map(|f| r.int(f))
            .collect::<Result<Vec<_>>>()?;
        listed.push((r, v));
    }
    let mut out = Vec::new();
    for (r, v) in &listed {
        if computed.contains(v) {
            out.push(RowVerdict::verified(&r.key));
        } else {
            out.push(RowVerdict::new(
                &r.key,
                Verdict::PaperOnly {
                    note: "not produced by the recomputation".into(),
                },
                Severity::Failure,
            ));
        }
    }
    for v in &computed {
        if !listed.iter().any(|(_, l)| l == v) {
            out.push(RowVerdict::new(
                label(v),
                Verdict::BeyondPaper {
                    note: "produced by the recomputation but not listed".into(),
                },
                Severity::Failure,
            ));
        }
    }
    Ok(out)
}

fn splitting_key(d: i64, sp: &SplittingType) -> String {
    format!("d={d} {sp}")
}

fn verify_3_25(rows: &[ClassificationRow], exec: Execution) -> Result<Vec<RowVerdict>> {
    let mut by_d: BTreeMap<i64, Vec<(&ClassificationRow, SplittingType)>> = BTreeMap::new();
    for r in rows {
        let sp = SplittingType::new(r.list("splitting")?.to_vec()).map_err(|e| Error::Schema {
            row: r.key.clone(),
            message: e.to_string(),
        })?;
        by_d.entry(r.int("d")?).or_default().push((r, sp));
    }
    let rules = default_rules();
    let mut out = Vec::new();
    for (d, listed) in by_d {
        let max_listed_n = listed
            .iter()
            .map(|(_, sp)| sp.fiber_dim())
            .max()
            .unwrap_or(3);
        let default = default_n_range(d);
        let n_range = *default.start()..=(*default.end()).max(max_listed_n);
        let candidates = enumerate_quadric_splittings(d, n_range, &rules, exec)?;
        let admitted: BTreeSet<Vec<i64>> = candidates
            .iter()
            .filter(|c| c.is_admitted())
            .map(|c| c.splitting.degrees().to_vec())
            .collect();
        let listed_set: BTreeSet<Vec<i64>> =
            listed.iter().map(|(_, sp)| sp.degrees().to_vec()).collect();

        for (row, sp) in &listed {
            if admitted.contains(sp.degrees()) {
                out.push(RowVerdict::verified(&row.key));
                continue;
            }
            let note = if sp.c1()? != d - 4 {
                format!("c1 = {} but d = {d} needs c1 = {}", sp.c1()?, d - 4)
            } else {
                match evaluate_candidate(sp, d, &rules)?.exclusion() {
                    Some(x) => format!("excluded by {} ({})", x.rule.name(), x.citation),
                    None => "outside the enumerated range".into(),
                }
            };
            out.push(RowVerdict::new(
                &row.key,
                Verdict::PaperOnly { note },
                Severity::Failure,
            ));
        }
        for c in candidates.iter().filter(|c| c.is_admitted()) {
            if listed_set.contains(c.splitting.degrees()) {
                continue;
            }
            let severity = if d <= BEYOND_PAPER_WARN_MAX_D {
                Severity::Warning
            } else {
                Severity::Failure
            };
            out.push(RowVerdict::new(
                splitting_key(d, &c.splitting),
                Verdict::BeyondPaper {
                    note: "admitted by every rule, not listed".into(),
                },
                severity,
            ));
        }
    }
    Ok(out)
}
