use std::collections::HashMap;
use std::ops::RangeInclusive;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::chow::{
    corank1_emptiness, normal_obstruction, truncation_positivity, ObstructionBranch, SplittingType,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fixture::{embedded_rows, TableId};

/// Exclusion rules, listed in the order they are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExclusionRule {
    /// `s = 2e + (n+1) b >= 0`.
    ParamConsistency,
    /// `d - 2 (e_{n-k+1} + ... + e_n) > 0` when `e_0 <= 0`, for every applicable `k >= 2`.
    TruncationPositivity,
    /// `-1` appears at most once once `d >= 4`.
    NoDoubleMinusOne,
    /// `e_0 >= -1, 0, 1` once `d >= 5, 7, 9`.
    FloorBound,
    /// Rank caps and entry floors quoted from the case analysis.
    CitedCap,
    /// Some corank-one coordinate locus carries no member of `|2H + bF|`.
    Corank1Empty,
    /// The base-locus surface of a `P^3`-bundle forces a singular member.
    NormalObstruction,
}

impl ExclusionRule {
    pub const ALL: [ExclusionRule; 7] = [
        ExclusionRule::ParamConsistency,
        ExclusionRule::TruncationPositivity,
        ExclusionRule::NoDoubleMinusOne,
        ExclusionRule::FloorBound,
        ExclusionRule::CitedCap,
        ExclusionRule::Corank1Empty,
        ExclusionRule::NormalObstruction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExclusionRule::ParamConsistency => "ParamConsistency",
            ExclusionRule::TruncationPositivity => "TruncationPositivity",
            ExclusionRule::NoDoubleMinusOne => "NoDoubleMinusOne",
            ExclusionRule::FloorBound => "FloorBound",
            ExclusionRule::CitedCap => "CitedCap",
            ExclusionRule::Corank1Empty => "Corank1Empty",
            ExclusionRule::NormalObstruction => "NormalObstruction",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            ExclusionRule::ParamConsistency => "3.5",
            ExclusionRule::TruncationPositivity => "3.7",
            ExclusionRule::NoDoubleMinusOne => "3.11",
            ExclusionRule::FloorBound => "3.13-3.15",
            ExclusionRule::CitedCap => "3.8-3.20",
            ExclusionRule::Corank1Empty => "3.23.1",
            ExclusionRule::NormalObstruction => "3.23.2",
        }
    }
}

impl std::str::FromStr for ExclusionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExclusionRule::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::OutOfRange(format!("rule name `{s}`")))
    }
}

pub fn default_rules() -> Vec<ExclusionRule> {
    ExclusionRule::ALL.to_vec()
}

/// `E` matches when its sorted degrees are `head ++ [fill; m] ++ tail`, `m >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapEntry {
    pub d: i64,
    pub head: Vec<i64>,
    pub fill: i64,
    pub tail: Vec<i64>,
    pub max_n: usize,
    pub citation: String,
}

impl CapEntry {
    pub fn matches(&self, degrees: &[i64]) -> bool {
        let fixed = self.head.len() + self.tail.len();
        degrees.len() >= fixed
            && degrees.starts_with(&self.head)
            && degrees.ends_with(&self.tail)
            && degrees[self.head.len()..degrees.len() - self.tail.len()]
                .iter()
                .all(|&x| x == self.fill)
    }
}

/// `e_index >= min` at degree `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryFloor {
    pub d: i64,
    pub index: usize,
    pub min: i64,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapTable {
    pub caps: Vec<CapEntry>,
    pub entry_floors: Vec<EntryFloor>,
}

impl CapTable {
    pub fn parse(text: &str) -> Result<Self> {
        let table: CapTable = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: "caps".into(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        for c in &table.caps {
            if c.citation.trim().is_empty() {
                return Err(Error::Schema {
                    row: format!("cap d={}", c.d),
                    message: "a cited cap needs a citation".into(),
                });
            }
        }
        for f in &table.entry_floors {
            if f.citation.trim().is_empty() {
                return Err(Error::Schema {
                    row: format!("floor d={}", f.d),
                    message: "a cited floor needs a citation".into(),
                });
            }
        }
        Ok(table)
    }
}

/// The shipped cap table.
pub fn cap_table() -> &'static CapTable {
    static CAPS: OnceLock<CapTable> = OnceLock::new();
    CAPS.get_or_init(|| {
        CapTable::parse(include_str!("../../fixtures/caps.json"))
            .expect("embedded caps are well-formed")
    })
}

/// Parameters of the first rule that excluded a candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RuleTrace {
    NegativeS {
        s: i64,
    },
    Truncation {
        k: usize,
        number: i64,
    },
    DoubleMinusOne {
        count: usize,
    },
    Floor {
        min_e0: i64,
        e0: i64,
    },
    RankCap {
        max_n: usize,
        citation: String,
    },
    EntryFloor {
        index: usize,
        min: i64,
        value: i64,
        citation: String,
    },
    Corank1 {
        removed_index: usize,
        removed_degree: i64,
    },
    Normal {
        branch: ObstructionBranch,
        c: i64,
        p: i64,
        q: i64,
        h0_p: i64,
        h0_q: i64,
        pairing: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exclusion {
    pub rule: ExclusionRule,
    pub citation: &'static str,
    pub trace: RuleTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CandidateStatus {
    Admitted {
        /// Status text from the reference table, when the splitting is listed there.
        #[serde(skip_serializing_if = "Option::is_none")]
        paper_status: Option<String>,
        /// Admitted but absent from the reference table.
        beyond_paper: bool,
    },
    Excluded(Exclusion),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub splitting: SplittingType,
    pub n: usize,
    pub d: i64,
    pub e: i64,
    pub b: i64,
    pub s: i64,
    #[serde(flatten)]
    pub status: CandidateStatus,
}

impl Candidate {
    pub fn is_admitted(&self) -> bool {
        matches!(self.status, CandidateStatus::Admitted { .. })
    }

    pub fn exclusion(&self) -> Option<&Exclusion> {
        match &self.status {
            CandidateStatus::Excluded(x) => Some(x),
            CandidateStatus::Admitted { .. } => None,
        }
    }

    pub fn is_beyond_paper(&self) -> bool {
        matches!(
            self.status,
            CandidateStatus::Admitted {
                beyond_paper: true,
                ..
            }
        )
    }
}

/// `[3, d/(d-8)]` when `d >= 9` (from `s >= 0`), else `[3, 5]`.
pub fn default_n_range(d: i64) -> RangeInclusive<usize> {
    let hi = if d >= 9 { (d / (d - 8)) as usize } else { 5 };
    3..=hi
}

fn exclude(rule: ExclusionRule, trace: RuleTrace) -> Option<Exclusion> {
    Some(Exclusion {
        rule,
        citation: rule.citation(),
        trace,
    })
}

fn first_exclusion(
    splitting: &SplittingType,
    d: i64,
    b: i64,
    s: i64,
    rules: &[ExclusionRule],
    caps: &CapTable,
) -> Result<Option<Exclusion>> {
    let degrees = splitting.degrees();
    let n = splitting.fiber_dim();
    for &rule in rules {
        let hit = match rule {
            ExclusionRule::ParamConsistency => (s < 0)
                .then(|| exclude(rule, RuleTrace::NegativeS { s }))
                .flatten(),
            ExclusionRule::TruncationPositivity => {
                let mut hit = None;
                for k in 2..=n {
                    let t = truncation_positivity(splitting, b, k)?;
                    if t.violated {
                        hit = exclude(
                            rule,
                            RuleTrace::Truncation {
                                k,
                                number: t.number,
                            },
                        );
                        break;
                    }
                }
                hit
            }
            ExclusionRule::NoDoubleMinusOne => {
                let count = degrees.iter().filter(|&&x| x == -1).count();
                (d >= 4 && count >= 2)
                    .then(|| exclude(rule, RuleTrace::DoubleMinusOne { count }))
                    .flatten()
            }
            ExclusionRule::FloorBound => {
                let min_e0 = match d {
                    ..=4 => None,
                    5 | 6 => Some(-1),
                    7 | 8 => Some(0),
                    _ => Some(1),
                };
                match min_e0 {
                    Some(m) if degrees[0] < m => exclude(
                        rule,
                        RuleTrace::Floor {
                            min_e0: m,
                            e0: degrees[0],
                        },
                    ),
                    _ => None,
                }
            }
            ExclusionRule::CitedCap => {
                let cap = caps
                    .caps
                    .iter()
                    .find(|c| c.d == d && n > c.max_n && c.matches(degrees));
                let floor = caps
                    .entry_floors
                    .iter()
                    .find(|f| f.d == d && degrees.get(f.index).is_some_and(|&v| v < f.min));
                match (cap, floor) {
                    (Some(c), _) => exclude(
                        rule,
                        RuleTrace::RankCap {
                            max_n: c.max_n,
                            citation: c.citation.clone(),
                        },
                    ),
                    (None, Some(f)) => exclude(
                        rule,
                        RuleTrace::EntryFloor {
                            index: f.index,
                            min: f.min,
                            value: degrees[f.index],
                            citation: f.citation.clone(),
                        },
                    ),
                    (None, None) => None,
                }
            }
            ExclusionRule::Corank1Empty => {
                let c = corank1_emptiness(splitting, b)?;
                c.witness.and_then(|i| {
                    exclude(
                        rule,
                        RuleTrace::Corank1 {
                            removed_index: i,
                            removed_degree: degrees[i],
                        },
                    )
                })
            }
            ExclusionRule::NormalObstruction if splitting.rank() == 4 => {
                let o = normal_obstruction(splitting, b)?;
                match (o.branch, o.surface) {
                    (Some(branch), Some(sf)) => exclude(
                        rule,
                        RuleTrace::Normal {
                            branch,
                            c: sf.c,
                            p: sf.p,
                            q: sf.q,
                            h0_p: sf.h0_p,
                            h0_q: sf.h0_q,
                            pairing: sf.pairing,
                        },
                    ),
                    _ => None,
                }
            }
            ExclusionRule::NormalObstruction => None,
        };
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

fn paper_statuses() -> &'static HashMap<(i64, Vec<i64>), String> {
    static MAP: OnceLock<HashMap<(i64, Vec<i64>), String>> = OnceLock::new();
    MAP.get_or_init(|| {
        embedded_rows(TableId::T3_25)
            .into_iter()
            .map(|r| {
                let d = r.int("d").expect("validated");
                let sp = r.list("splitting").expect("validated").to_vec();
                ((d, sp), r.paper_status)
            })
            .collect()
    })
}

fn normalized(rules: &[ExclusionRule]) -> Vec<ExclusionRule> {
    let mut rules = rules.to_vec();
    rules.sort();
    rules.dedup();
    rules
}

/// Runs the rules on one splitting of a fibration over `P^1` of degree `d`
/// (so `e = d - 4`, `b = 8 - d`). Rules are applied in their fixed order.
pub fn evaluate_candidate(
    splitting: &SplittingType,
    d: i64,
    rules: &[ExclusionRule],
) -> Result<Candidate> {
    evaluate_with(splitting.clone(), d, &normalized(rules), cap_table())
}

fn evaluate_with(
    splitting: SplittingType,
    d: i64,
    rules: &[ExclusionRule],
    caps: &CapTable,
) -> Result<Candidate> {
    let e = d - 4;
    let b = 8 - d;
    let n = splitting.fiber_dim();
    if splitting.c1()? != e {
        return Err(Error::InvalidSplitting(format!(
            "{splitting} has c1 != {e}"
        )));
    }
    let s = 2 * e + (n as i64 + 1) * b;
    let status = match first_exclusion(&splitting, d, b, s, rules, caps)? {
        Some(x) => CandidateStatus::Excluded(x),
        None => {
            let paper_status = paper_statuses()
                .get(&(d, splitting.degrees().to_vec()))
                .cloned();
            let beyond_paper = paper_status.is_none();
            CandidateStatus::Admitted {
                paper_status,
                beyond_paper,
            }
        }
    };
    Ok(Candidate {
        splitting,
        n,
        d,
        e,
        b,
        s,
        status,
    })
}

/// Sorted `len`-tuples with entries in `[lo, hi]` summing to `total`.
fn sorted_tuples(len: usize, total: i64, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn rec(
        prefix: &mut Vec<i64>,
        rem: i64,
        slots: usize,
        min: i64,
        hi: i64,
        out: &mut Vec<Vec<i64>>,
    ) {
        if slots == 0 {
            if rem == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let slots_i = slots as i64;
        for v in min..=hi {
            if v * slots_i > rem {
                break;
            }
            if rem - v > hi * (slots_i - 1) {
                continue;
            }
            prefix.push(v);
            rec(prefix, rem - v, slots - 1, v, hi, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if len > 0 && lo <= hi {
        rec(&mut Vec::with_capacity(len), total, len, lo, hi, &mut out);
    }
    out
}

/// Entry bounds for rank `n + 1` and sum `e`: if `e_0 <= 0` the top pair is
/// at most `floor((d-1)/2)`, which caps every entry and hence bounds `e_0`
/// below; if `e_0 >= 1` every entry lies in `[1, e - n]`.
fn entry_bounds(d: i64, n: usize) -> (i64, i64) {
    let e = d - 4;
    let n = n as i64;
    let cap = (d - 1).div_euclid(2);
    // ceil((e - cap) / (n - 1))
    let rest = e - cap;
    let second_min = rest.div_euclid(n - 1) + i64::from(rest.rem_euclid(n - 1) != 0);
    let hi1 = cap - second_min;
    let hi = hi1.max(e - n);
    let lo = (e - n * hi1).min(1);
    (lo, hi)
}

/// All sorted splittings of rank `n + 1` (for `n` in `n_range`) over `P^1` with
/// `c1 = d - 4`, inside the finite box the truncation rule allows, each
/// either admitted or excluded by the first rule that fires. The output is
/// sorted by `(n, splitting)`.
pub fn enumerate_quadric_splittings(
    d: i64,
    n_range: RangeInclusive<usize>,
    rules: &[ExclusionRule],
    exec: Execution,
) -> Result<Vec<Candidate>> {
    enumerate_with_caps(d, n_range, rules, cap_table(), exec)
}

pub(crate) fn enumerate_with_caps(
    d: i64,
    n_range: RangeInclusive<usize>,
    rules: &[ExclusionRule],
    caps: &CapTable,
    exec: Execution,
) -> Result<Vec<Candidate>> {
    if d < 1 {
        return Err(Error::OutOfRange(format!("d = {d} (need d >= 1)")));
    }
    if *n_range.start() < 3 {
        return Err(Error::OutOfRange(format!(
            "n range starting at {} (need n >= 3)",
            n_range.start()
        )));
    }
    if *n_range.end() > 64 {
        return Err(Error::OutOfRange(format!(
            "n range ending at {}",
            n_range.end()
        )));
    }
    let rules = normalized(rules);
    if !rules.contains(&ExclusionRule::TruncationPositivity) {
        return Err(Error::Unbounded(
            "the rule set has no TruncationPositivity, so entries are not bounded".into(),
        ));
    }
    let e = d - 4;
    let mut splittings = Vec::new();
    for n in n_range {
        let (lo, hi) = entry_bounds(d, n);
        for t in sorted_tuples(n + 1, e, lo, hi) {
            splittings.push(SplittingType::new(t)?);
        }
    }
    let evaluated = exec.map(splittings, |sp| evaluate_with(sp, d, &rules, caps));
    let mut out = evaluated.into_iter().collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| (a.n, a.splitting.degrees()).cmp(&(b.n, b.splitting.degrees())));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn admitted(d: i64) -> Vec<Vec<i64>> {
        enumerate_quadric_splittings(
            d,
            default_n_range(d),
            &default_rules(),
            Execution::default(),
        )
        .unwrap()
        .into_iter()
        .filter(Candidate::is_admitted)
        .map(|c| c.splitting.degrees().to_vec())
        .collect()
    }

    fn find(d: i64, t: &[i64]) -> Candidate {
        evaluate_candidate(
            &SplittingType::new(t.to_vec()).unwrap(),
            d,
            &default_rules(),
        )
        .unwrap()
    }

    #[test]
    fn d10() {
        let got = enumerate_quadric_splittings(10, 3..=5, &default_rules(), Execution::Sequential)
            .unwrap();
        let adm: Vec<_> = got
            .iter()
            .filter(|c| c.is_admitted())
            .map(|c| c.splitting.degrees().to_vec())
            .collect();
        assert_eq!(
            adm,
            vec![
                vec![1, 1, 1, 3],
                vec![1, 1, 2, 2],
                vec![1, 1, 1, 1, 2],
                vec![1, 1, 1, 1, 1, 1]
            ]
        );
    }

    #[test]
    fn d11_traces() {
        let c = find(11, &[1, 1, 1, 4]);
        assert_eq!(c.exclusion().unwrap().rule, ExclusionRule::Corank1Empty);
        let c = find(11, &[1, 1, 2, 3]);
        let x = c.exclusion().unwrap();
        assert_eq!(x.rule, ExclusionRule::NormalObstruction);
        assert!(matches!(
            x.trace,
            RuleTrace::Normal {
                pairing: 1,
                branch: ObstructionBranch::Pairing,
                ..
            }
        ));
        assert!(find(11, &[1, 2, 2, 2]).is_admitted());
    }

    #[test]
    fn d6_admitted_and_truncation_trace() {
        let mut got = admitted(6);
        got.sort();
        let mut want = vec![
            vec![-1, 1, 1, 1],
            vec![0, 0, 1, 1],
            vec![0, 0, 0, 1, 1],
            vec![0, 0, 0, 2],
        ];
        want.sort();
        assert_eq!(got, want);
        let c = find(6, &[-1, 0, 1, 1, 1]);
        let x = c.exclusion().unwrap();
        assert_eq!(x.rule, ExclusionRule::TruncationPositivity);
        assert_eq!(x.trace, RuleTrace::Truncation { k: 3, number: 0 });
    }

    #[test]
    fn d12() {
        assert_eq!(
            admitted(12),
            vec![vec![1, 1, 3, 3], vec![1, 2, 2, 3], vec![2, 2, 2, 2]]
        );
        let c = find(12, &[1, 1, 2, 4]);
        assert!(matches!(
            c.exclusion().unwrap().trace,
            RuleTrace::Normal {
                branch: ObstructionBranch::VanishingSection,
                ..
            }
        ));
        assert_eq!(
            find(12, &[1, 1, 1, 5]).exclusion().unwrap().rule,
            ExclusionRule::Corank1Empty
        );
    }

    #[test]
    fn small_degree_extras_are_marked() {
        let got = enumerate_quadric_splittings(
            1,
            default_n_range(1),
            &default_rules(),
            Execution::default(),
        )
        .unwrap();
        let extras: Vec<_> = got
            .iter()
            .filter(|c| c.is_beyond_paper())
            .map(|c| c.splitting.degrees().to_vec())
            .collect();
        assert_eq!(extras, vec![vec![-2, -1, -1, 1], vec![-1, -1, -1, -1, 1]]);
    }

    #[test]
    fn missing_truncation_is_unbounded() {
        let rules = [ExclusionRule::ParamConsistency, ExclusionRule::FloorBound];
        assert!(matches!(
            enumerate_quadric_splittings(7, 3..=4, &rules, Execution::Sequential),
            Err(Error::Unbounded(_))
        ));
    }

    #[test]
    fn bad_ranges() {
        assert!(
            enumerate_quadric_splittings(0, 3..=4, &default_rules(), Execution::Sequential)
                .is_err()
        );
        assert!(
            enumerate_quadric_splittings(5, 2..=4, &default_rules(), Execution::Sequential)
                .is_err()
        );
    }

    #[test]
    fn cap_patterns() {
        let c = CapEntry {
            d: 3,
            head: vec![-1, -1],
            fill: 0,
            tail: vec![1],
            max_n: 4,
            citation: "x".into(),
        };
        assert!(c.matches(&[-1, -1, 1]));
        assert!(c.matches(&[-1, -1, 0, 0, 0, 1]));
        assert!(!c.matches(&[-1, -1, 0, 1, 1]));
        assert!(!c.matches(&[-1, 1]));
    }

    #[test]
    fn uncited_cap_rejected() {
        let text = r#"{"caps": [{"d": 1, "head": [], "fill": 0, "tail": [], "max_n": 3, "citation": ""}], "entry_floors": []}"#;
        assert!(matches!(CapTable::parse(text), Err(Error::Schema { .. })));
    }

    #[test]
    fn rule_names_parse() {
        for r in ExclusionRule::ALL {
            assert_eq!(r.name().parse::<ExclusionRule>().unwrap(), r);
        }
        assert!("Nope".parse::<ExclusionRule>().is_err());
    }

    #[test]
    fn default_n_ranges() {
        assert_eq!(default_n_range(9), 3..=9);
        assert_eq!(default_n_range(10), 3..=5);
        assert_eq!(default_n_range(12), 3..=3);
        assert_eq!(default_n_range(4), 3..=5);
    }

    #[test]
    fn tuple_generator() {
        assert_eq!(
            sorted_tuples(3, 1, -1, 2),
            vec![vec![-1, 0, 2], vec![-1, 1, 1], vec![0, 0, 1]]
        );
        for t in sorted_tuples(4, 3, -3, 4) {
            assert_eq!(t.iter().sum::<i64>(), 3);
            assert!(t.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
