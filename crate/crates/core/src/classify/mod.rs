//! Classification engines for sectional genus three: the branch map, the
//! hyperquadric-fibration enumerator, the Veronese-fibration solver and the
//! bookkeeping for the remaining cases.

mod enumerate;

pub use enumerate::{
    cap_table, default_n_range, default_rules, enumerate_quadric_splittings, evaluate_candidate,
    Candidate, CandidateStatus, CapEntry, CapTable, EntryFloor, Exclusion, ExclusionRule,
    RuleTrace,
};

use std::ops::RangeInclusive;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::chow::{veronese_invariants, BaseCurve, ProjBundleModel, SplittingType};
use crate::error::{Error, Result};

const GENUS: i64 = 3;

fn require_genus_three(g: i64) -> Result<()> {
    if g == GENUS {
        Ok(())
    } else {
        Err(Error::UnsupportedGenus(g))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchId {
    ScrollOverGenus3Curve,
    SimpleBlowup,
    VeroneseFibration,
    QuadricFibration,
    ScrollOverSurface,
    NefAdjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BranchRecord {
    pub id: BranchId,
    pub citation: &'static str,
    pub description: &'static str,
}

/// The types a polarized manifold of sectional genus three can have.
pub fn branch_map(g_target: i64) -> Result<Vec<BranchRecord>> {
    require_genus_three(g_target)?;
    let r = |id, citation, description| BranchRecord {
        id,
        citation,
        description,
    };
    Ok(vec![
        r(
            BranchId::ScrollOverGenus3Curve,
            "1.3",
            "K+(n-1)L not nef: scroll over a smooth curve of genus three",
        ),
        r(
            BranchId::SimpleBlowup,
            "1.5.1",
            "an effective divisor E with (E, L_E) = (P^(n-1), O(1)) and [E]_E = O(-1)",
        ),
        r(
            BranchId::VeroneseFibration,
            "1.5.2",
            "fibration over a curve with every fiber (P^2, O(2))",
        ),
        r(
            BranchId::QuadricFibration,
            "1.5.3",
            "fibration over a curve with every fiber a hyperquadric and L_F = O(1)",
        ),
        r(
            BranchId::ScrollOverSurface,
            "1.5.4",
            "scroll over a smooth surface",
        ),
        r(BranchId::NefAdjoint, "1.5.5", "K+(n-2)L is nef"),
    ])
}

/// Numerical data of a hyperquadric fibration `M in |2H + bF|` over a curve of
/// genus `g_c` with fibers of dimension `n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadricParams {
    pub g_c: i64,
    pub n: i64,
    /// Largest `d` with `s(d) >= 0`; the range is empty when this is below 1.
    pub d_max: i64,
}

impl QuadricParams {
    pub fn e_of_d(&self, d: i64) -> i64 {
        d - 4 + 2 * self.g_c
    }

    pub fn b_of_d(&self, d: i64) -> i64 {
        8 - 4 * self.g_c - d
    }

    pub fn s_of_d(&self, d: i64) -> i64 {
        (1 - self.n) * d + 4 * self.n * (2 - self.g_c)
    }

    pub fn d_range(&self) -> RangeInclusive<i64> {
        1..=self.d_max
    }
}

pub fn quadric_params(g_c: i64, n: i64) -> Result<QuadricParams> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("n = {n} (need n >= 3)")));
    }
    if g_c < 0 {
        return Err(Error::OutOfRange(format!("g(C) = {g_c}")));
    }
    let top = 4 * n * (2 - g_c);
    Ok(QuadricParams {
        g_c,
        n,
        d_max: top.div_euclid(n - 1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmplenessStatus {
    NotAmple,
    AmpleIfIndecomposable,
    Ample,
}

/// Ampleness of `E` for hyperquadric fibrations over an elliptic curve.
pub fn elliptic_ampleness_status(d: i64) -> Result<AmplenessStatus> {
    match d {
        1 | 2 => Ok(AmplenessStatus::NotAmple),
        3 | 4 => Ok(AmplenessStatus::AmpleIfIndecomposable),
        5 | 6 => Ok(AmplenessStatus::Ample),
        _ => Err(Error::OutOfRange(format!("d = {d} (need 1 <= d <= 6)"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VeroneseSolution {
    pub g_c: i64,
    pub e: i64,
    pub b: i64,
    pub d: i64,
    /// Sectional genus of `(P(E), 2H + bF)` recomputed in the Chow ring.
    pub ring_genus: i64,
}

/// Integer solutions of `e >= 0`, `e + b = 1`, `2g(C) - 2 + e + 2b = 0` with
/// `d = 8e + 12b > 0`.
pub fn veronese_solutions(g_target: i64) -> Result<Vec<VeroneseSolution>> {
    require_genus_three(g_target)?;
    let mut out = Vec::new();
    // The two linear equations force e = 2g(C), so d = 12 - 8g(C) decreases.
    for g_c in 0i64.. {
        let e = 2 * g_c;
        let b = 1 - e;
        debug_assert_eq!(2 * g_c - 2 + e + 2 * b, 0);
        let d = 8 * e + 12 * b;
        if d <= 0 {
            break;
        }
        let genus = u32::try_from(g_c).map_err(|_| Error::Overflow("base genus"))?;
        let bundle = ProjBundleModel::new(BaseCurve::new(genus), 3, e)?;
        let ring = veronese_invariants(&bundle, b)?;
        if ring.d != d || ring.g != g_target {
            return Err(Error::Precondition(format!(
                "ring agreement at g(C)={g_c}: got d={}, g={}",
                ring.d, ring.g
            )));
        }
        out.push(VeroneseSolution {
            g_c,
            e,
            b,
            d,
            ring_genus: ring.g,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForcedSplitting {
    /// Only one rank-3 splitting has every section `O(2e_i + b)` ample.
    Unique(SplittingType),
    Impossible,
    /// More than one splitting survives.
    Several,
}

/// Over `P^1`, sections `Z_i` of a rank-3 bundle have `L_Z = O(2e_i + b)`,
/// which must be ample. With `sum e_i = e` this may pin `E` down.
pub fn veronese_rational_splitting(e: i64, b: i64) -> Result<ForcedSplitting> {
    // smallest e_i with 2e_i + b >= 1
    let lo = (1 - b).div_euclid(2) + i64::from((1 - b).rem_euclid(2) != 0);
    let floor_sum = lo
        .checked_mul(3)
        .ok_or(Error::Overflow("veronese splitting"))?;
    Ok(match floor_sum.cmp(&e) {
        std::cmp::Ordering::Greater => ForcedSplitting::Impossible,
        std::cmp::Ordering::Equal => ForcedSplitting::Unique(SplittingType::new(vec![lo; 3])?),
        std::cmp::Ordering::Less => ForcedSplitting::Several,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ReductionTuple {
    /// `L^n` of the manifold itself.
    pub ln: i64,
    /// Number of simple blow-ups down to the reduction.
    pub r: i64,
    /// `(L')^n` of the reduction.
    pub ln_reduced: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionTuples {
    pub general_type_tuples: Vec<ReductionTuple>,
    pub veronese_blowup_bound: i64,
}

/// Tuples `(L^n, r, (L')^n)` with `2 <= (L')^n <= 4`, `r >= 1` and
/// `L^n = (L')^n - r >= 1`; and the bound `r <= 3` from `4 = L^3 + r`.
pub fn reduction_tuples(g_target: i64) -> Result<ReductionTuples> {
    require_genus_three(g_target)?;
    // (K' + (n-2)L')(L')^(n-1) = 2g - 2 - (L')^n >= 0
    let reduced_max = 2 * g_target - 2;
    let mut general_type_tuples = Vec::new();
    for ln in 1..reduced_max {
        for r in 1..=reduced_max - ln {
            let ln_reduced = ln + r;
            if ln_reduced >= 2 {
                general_type_tuples.push(ReductionTuple { ln, r, ln_reduced });
            }
        }
    }
    general_type_tuples.sort();
    // (M', L') of type (4.4.II) has (L')^3 = 4.
    let veronese_blowup_bound = 4 - 1;
    Ok(ReductionTuples {
        general_type_tuples,
        veronese_blowup_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaNote {
    pub d: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<i64>,
    pub note: String,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaBounds {
    pub d_min: i64,
    pub d_max: i64,
    pub notes: Vec<DeltaNote>,
}

impl DeltaBounds {
    pub fn d_range(&self) -> RangeInclusive<i64> {
        self.d_min..=self.d_max
    }

    pub fn notes_for(&self, d: i64) -> impl Iterator<Item = &DeltaNote> {
        self.notes.iter().filter(move |n| n.d == d)
    }
}

fn delta_notes() -> &'static [DeltaNote] {
    static NOTES: OnceLock<Vec<DeltaNote>> = OnceLock::new();
    NOTES.get_or_init(|| {
        #[derive(Deserialize)]
        struct Doc {
            notes: Vec<DeltaNote>,
        }
        let doc: Doc = serde_json::from_str(include_str!("../../fixtures/delta_notes.json"))
            .expect("embedded notes are well-formed");
        doc.notes
    })
}

/// When `K + (n-2)L` is nef: `0 <= (K + (n-2)L) L^(n-1) = 2g - 2 - d`, and
/// `Delta >= 1` forces `d >= 1`.
pub fn delta_bounds(g_target: i64) -> Result<DeltaBounds> {
    require_genus_three(g_target)?;
    Ok(DeltaBounds {
        d_min: 1,
        d_max: 2 * g_target - 2,
        notes: delta_notes().to_vec(),
    })
}
