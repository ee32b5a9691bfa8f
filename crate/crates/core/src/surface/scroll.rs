use serde::Serialize;

use super::WeightSequence;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScrollReport {
    pub passed: bool,
    pub reasons: Vec<String>,
}

/// Numerical constraints on `(S, A)` when `A = det E` and `(P_S(E), H(E))` is
/// the polarized manifold: `A^2 = L^n + c2(E) >= 2` and `AZ >= rank E >= 2`
/// for every rational curve `Z`, here the exceptional curves of weight `m`.
pub fn scroll_constraints_check(
    aa: i64,
    ln: i64,
    c2: i64,
    rank: i64,
    weights: &WeightSequence,
) -> ScrollReport {
    let mut reasons = Vec::new();
    if rank < 2 {
        reasons.push(format!("rank {rank} < 2"));
    }
    if ln.checked_add(c2) != Some(aa) {
        reasons.push(format!("A^2 = {aa} but L^n + c2 = {ln} + {c2}"));
    }
    if aa < 2 {
        reasons.push(format!("A^2 = {aa} < 2"));
    }
    for &m in weights.weights() {
        if m < rank.max(2) {
            reasons.push(format!("weight {m} < rank {rank}"));
        }
    }
    ScrollReport {
        passed: reasons.is_empty(),
        reasons,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegTRow {
    pub deg_t: i64,
    pub deg_g: i64,
    pub c2: i64,
    pub l3: i64,
}

/// Rows with `deg T > 0`, `deg G = 1 - deg T`, `c2 = 1 + deg T` and
/// `L^3 = A^2 - c2 = 6 - c2 >= 1`.
pub fn deg_t_enumeration() -> Vec<DegTRow> {
    (1..)
        .map(|deg_t| DegTRow {
            deg_t,
            deg_g: 1 - deg_t,
            c2: 1 + deg_t,
            l3: 5 - deg_t,
        })
        .take_while(|r| r.l3 >= 1)
        .collect()
}
