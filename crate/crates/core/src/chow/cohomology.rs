//! Section counts and positivity numbers for split bundles on the projective
//! line, used to rule out splitting types of hyperquadric fibrations.

use serde::Serialize;

use super::SplittingType;
use crate::error::{Checked, Error, Result};

/// `h^0(P^1, O(d_1) + ... + O(d_k)) = sum max(0, d_i + 1)`.
pub fn h0_line_bundle_sum_p1(degrees: &[i64]) -> Result<i64> {
    degrees.iter().try_fold(0i64, |acc, &d| {
        let h = d.add_c(1, "h0")?.max(0);
        acc.add_c(h, "h0")
    })
}

fn h0_sym2_twist_raw(degrees: &[i64], t: i64) -> Result<i64> {
    let mut total = 0i64;
    for (i, &a) in degrees.iter().enumerate() {
        for &b in &degrees[i..] {
            let d = a.add_c(b, "sym2 degree")?.add_c(t, "sym2 degree")?;
            total = total.add_c(d.add_c(1, "h0")?.max(0), "h0")?;
        }
    }
    Ok(total)
}

/// `h^0(P(E), 2H + tF) = h^0(P^1, S^2(E)(t))`.
pub fn h0_sym2_twist(splitting: &SplittingType, t: i64) -> Result<i64> {
    h0_sym2_twist_raw(splitting.degrees(), t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Truncation {
    /// `d - 2 * (sum of the k largest degrees)`, the degree of `M` cut down to
    /// the coordinate locus where the top `k` coordinates vanish.
    pub number: i64,
    pub applicable: bool,
    pub violated: bool,
}

/// Positivity of `L^(n-k) (M . W)` where `W = P(O(e_0, ..., e_{n-k}))`.
///
/// Applies when `e_0 <= 0` (so `W` is not inside `M`) and `M . W` has positive
/// dimension: always for `k = 2`, and only when `n >= k + 1` for larger `k`.
pub fn truncation_positivity(splitting: &SplittingType, b: i64, k: usize) -> Result<Truncation> {
    let n = splitting.fiber_dim();
    if k < 2 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let degrees = splitting.degrees();
    let d = splitting.c1()?.mul_c(2, "degree")?.add_c(b, "degree")?;
    let top = degrees[degrees.len() - k..]
        .iter()
        .try_fold(0i64, |acc, &x| acc.add_c(x, "truncation"))?;
    let number = d.add_c(top.mul_c(-2, "truncation")?, "truncation")?;
    let applicable = degrees[0] <= 0 && (k == 2 || n > k);
    Ok(Truncation {
        number,
        applicable,
        violated: applicable && number <= 0,
    })
}

/// Indices `J` (a prefix of the sorted degrees) with `e_i + e_j + b < 0` for
/// all `i, j` in `J`: the coordinate block on which every member of
/// `|2H + bF|` vanishes identically.
pub fn base_locus_index_set(splitting: &SplittingType, b: i64) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, &e) in splitting.degrees().iter().enumerate() {
        if e.mul_c(2, "base locus")?.add_c(b, "base locus")? < 0 {
            out.push(i);
        } else {
            break;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Corank1 {
    pub excluded: bool,
    /// Index of the removed summand whose complement carries no member of
    /// `|2H + bF|`.
    pub witness: Option<usize>,
}

/// A member `M` of `|2H + bF|` meets every corank-one coordinate locus
/// `W = P(E_I)` in an effective divisor of `|2H_W + bF|`; if that system is
/// empty for some `W`, no `M` exists.
pub fn corank1_emptiness(splitting: &SplittingType, b: i64) -> Result<Corank1> {
    for i in 0..splitting.rank() {
        if h0_sym2_twist_raw(&splitting.without(i), b)? == 0 {
            return Ok(Corank1 {
                excluded: true,
                witness: Some(i),
            });
        }
    }
    Ok(Corank1 {
        excluded: false,
        witness: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionBranch {
    /// One component of `N_B/P -> N_M|B` has no sections and the other class
    /// is not numerically trivial, so the map cannot be onto.
    VanishingSection,
    /// Both components have sections and they meet on `B`.
    Pairing,
}

/// Numbers on the base-locus surface `B = P(E_J)` for `|J| = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ObstructionSurface {
    /// `c1(E_J)`, i.e. `H^2` on `B`.
    pub c: i64,
    pub p: i64,
    pub q: i64,
    pub h0_p: i64,
    pub h0_q: i64,
    /// `(H + pF)(H + qF) = c + p + q` on `B`.
    pub pairing: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NormalObstruction {
    pub applicable: bool,
    pub excluded: bool,
    pub base_locus_len: usize,
    pub surface: Option<ObstructionSurface>,
    pub branch: Option<ObstructionBranch>,
}

/// Smoothness obstruction along a surface base locus in a `P^3`-bundle.
///
/// With `B = P(E_J)` cut out by the two remaining coordinates, the map
/// `N_B/P = (H - e_a F) + (H - e_b F) -> N_M|B = 2H + bF` is given by sections
/// of `H + pF` and `H + qF` on `B` with `p = b + e_a`, `q = b + e_b`. A smooth
/// `M` needs it to be onto everywhere.
pub fn normal_obstruction(splitting: &SplittingType, b: i64) -> Result<NormalObstruction> {
    if splitting.rank() != 4 {
        return Err(Error::Precondition(format!(
            "a rank-4 splitting, got rank {}",
            splitting.rank()
        )));
    }
    let j = base_locus_index_set(splitting, b)?;
    if j.len() != 2 {
        return Ok(NormalObstruction {
            applicable: false,
            excluded: false,
            base_locus_len: j.len(),
            surface: None,
            branch: None,
        });
    }
    const WHAT: &str = "normal obstruction";
    let e = splitting.degrees();
    let (ea, eb) = (e[2], e[3]);
    let p = b.add_c(ea, WHAT)?;
    let q = b.add_c(eb, WHAT)?;
    let c = e[0].add_c(e[1], WHAT)?;
    let on_b = |twist: i64| -> Result<i64> {
        let shifted = [e[0].add_c(twist, WHAT)?, e[1].add_c(twist, WHAT)?];
        h0_line_bundle_sum_p1(&shifted)
    };
    let h0_p = on_b(p)?;
    let h0_q = on_b(q)?;
    let pairing = c.add_c(p, WHAT)?.add_c(q, WHAT)?;
    let self_p = c.add_c(p.mul_c(2, WHAT)?, WHAT)?;
    let self_q = c.add_c(q.mul_c(2, WHAT)?, WHAT)?;

    let branch = if (h0_p == 0 && self_q != 0) || (h0_q == 0 && self_p != 0) {
        Some(ObstructionBranch::VanishingSection)
    } else if h0_p > 0 && h0_q > 0 && pairing >= 1 {
        Some(ObstructionBranch::Pairing)
    } else {
        None
    };
    Ok(NormalObstruction {
        applicable: true,
        excluded: branch.is_some(),
        base_locus_len: 2,
        surface: Some(ObstructionSurface {
            c,
            p,
            q,
            h0_p,
            h0_q,
            pairing,
        }),
        branch,
    })
}
