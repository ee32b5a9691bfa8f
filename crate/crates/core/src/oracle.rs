//! Brute-force intersection numbers on `P(E)`, kept independent of
//! [`crate::chow`]: products are expanded into an unmerged list of terms and
//! then rewritten with `F^2 = 0` and `H^r = c1 H^(r-1) F` until neither rule
//! applies.

use serde::Serialize;

use crate::chow::{
    multiply_classes, quadric_invariants, top_degree, veronese_invariants, BaseCurve, DivisorClass,
    ProjBundleModel,
};
use crate::error::Result;
use crate::exec::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Term {
    coef: i128,
    h: u32,
    f: u32,
}

/// Intersection number of a product of `rank` classes `(h_i H + f_i F)`.
pub fn naive_intersection(rank: u32, c1: i64, factors: &[(i64, i64)]) -> i128 {
    let mut terms = vec![Term {
        coef: 1,
        h: 0,
        f: 0,
    }];
    for &(a, b) in factors {
        let mut next = Vec::with_capacity(terms.len() * 2);
        for t in &terms {
            next.push(Term {
                coef: t.coef * a as i128,
                h: t.h + 1,
                f: t.f,
            });
            next.push(Term {
                coef: t.coef * b as i128,
                h: t.h,
                f: t.f + 1,
            });
        }
        terms = next;
    }
    loop {
        let mut changed = false;
        let mut next = Vec::with_capacity(terms.len());
        for t in terms {
            if t.f >= 2 {
                changed = true;
            } else if t.h >= rank {
                changed = true;
                next.push(Term {
                    coef: t.coef * c1 as i128,
                    h: t.h - 1,
                    f: t.f + 1,
                });
            } else {
                next.push(t);
            }
        }
        terms = next;
        if !changed {
            break;
        }
    }
    terms
        .iter()
        .filter(|t| t.h + 1 == rank && t.f == 1)
        .map(|t| t.coef)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridPoint {
    pub base_genus: u32,
    pub rank: usize,
    pub e: i64,
    pub b: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub point: GridPoint,
    pub quantity: &'static str,
    pub closed_form: i128,
    pub ring: i128,
    pub oracle: i128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdentityProbe {
    pub n: i64,
    pub d: i64,
    pub base_genus: i64,
    pub s: i64,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub grid_points: usize,
    pub comparisons: usize,
    pub mismatches: Vec<Mismatch>,
    pub max_deviation: i128,
    /// Grid points with `g = 3` on which `(n-1) d + s + 4n g(C) = 8n` was checked.
    pub identity_points: usize,
    pub identity_failures: Vec<GridPoint>,
    /// The printed form `(n+1) d + s + 4n g(C) = 8n` at `(n, d, g(C)) = (3, 8, 0)`.
    pub printed_identity_probe: IdentityProbe,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
            && self.identity_failures.is_empty()
            && !self.printed_identity_probe.holds
    }
}

pub const GRID_GENERA: [u32; 3] = [0, 1, 2];
pub const GRID_RANKS: std::ops::RangeInclusive<usize> = 3..=7;
pub const GRID_COEFFS: std::ops::RangeInclusive<i64> = -6..=6;

pub fn grid() -> Vec<GridPoint> {
    let mut out = Vec::new();
    for base_genus in GRID_GENERA {
        for rank in GRID_RANKS {
            for e in GRID_COEFFS {
                for b in GRID_COEFFS {
                    out.push(GridPoint {
                        base_genus,
                        rank,
                        e,
                        b,
                    });
                }
            }
        }
    }
    out
}

struct PointOutcome {
    comparisons: usize,
    mismatches: Vec<Mismatch>,
    identity_checked: bool,
    identity_ok: bool,
}

fn check_point(p: GridPoint) -> Result<PointOutcome> {
    let bundle = ProjBundleModel::new(BaseCurve::new(p.base_genus), p.rank, p.e)?;
    let r = p.rank as u32;
    let gc = i64::from(p.base_genus);
    let member = DivisorClass::new(2, p.b);
    let k = crate::chow::canonical_class(&bundle)?;
    let mut mismatches = Vec::new();
    let mut comparisons = 0;
    let mut compare = |quantity, closed: i128, ring: i128, oracle: i128| {
        comparisons += 1;
        if closed != ring || closed != oracle {
            mismatches.push(Mismatch {
                point: p,
                quantity,
                closed_form: closed,
                ring,
                oracle,
            });
        }
    };

    // d = H^(r-1) (2H + bF)
    let closed = quadric_invariants(&bundle, p.b)?;
    let mut factors = vec![DivisorClass::H; p.rank - 1];
    factors.push(member);
    let ring_d = top_degree(&bundle, &multiply_classes(&bundle, &factors)?)?;
    let raw: Vec<(i64, i64)> = factors.iter().map(|c| (c.h, c.f)).collect();
    let oracle_d = naive_intersection(r, p.e, &raw);
    compare("quadric degree", closed.d.into(), ring_d.into(), oracle_d);

    // 2g - 2 = (K + M + (r-2) H) H^(r-2) M
    let adjoint = k
        .plus(member)?
        .plus(DivisorClass::new(p.rank as i64 - 2, 0))?;
    let mut factors = vec![adjoint];
    factors.extend(std::iter::repeat_n(DivisorClass::H, p.rank - 2));
    factors.push(member);
    let ring_adj = top_degree(&bundle, &multiply_classes(&bundle, &factors)?)?;
    let raw: Vec<(i64, i64)> = factors.iter().map(|c| (c.h, c.f)).collect();
    let oracle_adj = naive_intersection(r, p.e, &raw);
    let closed_adj = 2 * (2 * gc - 2 + p.e + p.b);
    compare(
        "quadric adjoint",
        closed_adj.into(),
        ring_adj.into(),
        oracle_adj,
    );
    compare(
        "quadric genus",
        closed.g.into(),
        (ring_adj / 2 + 1).into(),
        oracle_adj / 2 + 1,
    );

    if p.rank == 3 {
        let ver = veronese_invariants(&bundle, p.b)?;
        let l = (2, p.b);
        let oracle_d = naive_intersection(3, p.e, &[l, l, l]);
        let ka = k.plus(DivisorClass::new(4, 2 * p.b))?;
        let oracle_adj = naive_intersection(3, p.e, &[(ka.h, ka.f), l, l]);
        let closed_d = 8 * p.e + 12 * p.b;
        compare("veronese degree", closed_d.into(), ver.d.into(), oracle_d);
        let closed_adj = closed_d + 8 * (gc - 1);
        compare(
            "veronese adjoint",
            closed_adj.into(),
            (2 * ver.g - 2).into(),
            oracle_adj,
        );
    }

    let identity_checked = closed.g == 3;
    let n = p.rank as i64 - 1;
    let identity_ok = !identity_checked || (n - 1) * closed.d + closed.s + 4 * n * gc == 8 * n;
    Ok(PointOutcome {
        comparisons,
        mismatches,
        identity_checked,
        identity_ok,
    })
}

pub fn printed_identity_probe() -> IdentityProbe {
    let (n, d, gc) = (3i64, 8i64, 0i64);
    let e = d - 4 + 2 * gc;
    let b = 8 - 4 * gc - d;
    let s = 2 * e + (n + 1) * b;
    let lhs = (n + 1) * d + s + 4 * n * gc;
    IdentityProbe {
        n,
        d,
        base_genus: gc,
        s,
        lhs,
        rhs: 8 * n,
        holds: lhs == 8 * n,
    }
}

/// Runs the oracle, the ring and the closed forms over the whole grid.
pub fn oracle_selftest(exec: Execution) -> Result<SelftestReport> {
    let points = grid();
    let grid_points = points.len();
    let outcomes = exec.map(points.clone(), check_point);
    let mut report = SelftestReport {
        grid_points,
        comparisons: 0,
        mismatches: Vec::new(),
        max_deviation: 0,
        identity_points: 0,
        identity_failures: Vec::new(),
        printed_identity_probe: printed_identity_probe(),
    };
    for (p, outcome) in points.into_iter().zip(outcomes) {
        let outcome = outcome?;
        report.comparisons += outcome.comparisons;
        for m in &outcome.mismatches {
            let dev = (m.closed_form - m.ring)
                .abs()
                .max((m.closed_form - m.oracle).abs());
            report.max_deviation = report.max_deviation.max(dev);
        }
        report.mismatches.extend(outcome.mismatches);
        if outcome.identity_checked {
            report.identity_points += 1;
            if !outcome.identity_ok {
                report.identity_failures.push(p);
            }
        }
    }
    Ok(report)
}
