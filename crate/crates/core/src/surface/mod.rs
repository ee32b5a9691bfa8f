//! Integer intersection lattices of surfaces and polarized-surface invariants.

mod scroll;
mod verify;

pub use scroll::{deg_t_enumeration, scroll_constraints_check, DegTRow, ScrollReport};
pub use verify::{recompute_row_2_3, verify_row_2_3, RecomputedRow};

use serde::Serialize;

use crate::error::{Checked, Error, Result};

/// A free lattice with a symmetric integral form, a canonical class and an
/// optional polarization, all in the same basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceLattice {
    labels: Vec<String>,
    gram: Vec<Vec<i64>>,
    k: Vec<i64>,
    a: Option<Vec<i64>>,
}

impl SurfaceLattice {
    pub fn new(labels: Vec<String>, gram: Vec<Vec<i64>>, k: Vec<i64>) -> Result<Self> {
        let n = labels.len();
        if gram.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: gram.len(),
            });
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, other) in gram.iter().enumerate().take(i) {
                if row[j] != other[i] {
                    return Err(Error::Precondition(format!(
                        "a symmetric form (entries ({i},{j}) and ({j},{i}) differ)"
                    )));
                }
            }
        }
        check_dim(n, &k)?;
        Ok(Self {
            labels,
            gram,
            k,
            a: None,
        })
    }

    /// `P^2` with hyperplane class `h`, `K = -3h`.
    pub fn plane() -> Self {
        Self {
            labels: vec!["h".into()],
            gram: vec![vec![1]],
            k: vec![-3],
            a: None,
        }
    }

    pub fn with_polarization(mut self, a: Vec<i64>) -> Result<Self> {
        check_dim(self.rank(), &a)?;
        self.a = Some(a);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn canonical(&self) -> &[i64] {
        &self.k
    }

    pub fn polarization(&self) -> Option<&[i64]> {
        self.a.as_deref()
    }

    /// `D1^T G D2`.
    pub fn pair(&self, d1: &[i64], d2: &[i64]) -> Result<i64> {
        check_dim(self.rank(), d1)?;
        check_dim(self.rank(), d2)?;
        let mut total = 0i64;
        for (i, &x) in d1.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in d2.iter().enumerate() {
                let term = x.mul_c(self.gram[i][j], "pairing")?.mul_c(y, "pairing")?;
                total = total.add_c(term, "pairing")?;
            }
        }
        Ok(total)
    }

    /// `(K^2, KA, A^2)`; needs a polarization.
    pub fn pairing_data(&self) -> Result<PairingData> {
        let a = self
            .a
            .as_deref()
            .ok_or_else(|| Error::Precondition("a polarized lattice".into()))?;
        Ok(PairingData {
            kk: self.pair(&self.k, &self.k)?,
            ka: self.pair(&self.k, a)?,
            aa: self.pair(a, a)?,
        })
    }

    /// Pulls a class back along the blow-down from `self` to a lattice of
    /// smaller rank: old coordinates are kept, exceptional ones set to zero.
    pub fn pullback(&self, d: &[i64]) -> Result<Vec<i64>> {
        if d.len() > self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: d.len(),
            });
        }
        let mut out = d.to_vec();
        out.resize(self.rank(), 0);
        Ok(out)
    }
}

fn check_dim(expected: usize, v: &[i64]) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            found: v.len(),
        })
    }
}

/// `P_C(F)` for a rank-2 bundle `F` with `c1(F) = e` on a curve of genus `base_genus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RuledModel {
    pub base_genus: i64,
    pub e: i64,
}

/// Basis `{H, f}` with `H^2 = e`, `Hf = 1`, `f^2 = 0` and
/// `K = -2H + (2g - 2 + e) f`.
pub fn make_ruled(model: RuledModel) -> SurfaceLattice {
    SurfaceLattice {
        labels: vec!["H".into(), "f".into()],
        gram: vec![vec![model.e, 1], vec![1, 0]],
        k: vec![-2, 2 * model.base_genus - 2 + model.e],
        a: None,
    }
}

/// Weights `(m_r, ..., m_1)` of an admissible minimalization, `m = AE`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct WeightSequence(Vec<i64>);

impl WeightSequence {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        if let Some(&m) = weights.iter().find(|&&m| m < 1) {
            return Err(Error::Precondition(format!("positive weights, got {m}")));
        }
        Ok(Self(weights))
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairingData {
    pub kk: i64,
    pub ka: i64,
    pub aa: i64,
}

impl PairingData {
    pub fn sectional_genus(self) -> Result<i64> {
        sectional_genus_surface(self.ka, self.aa)
    }
}

/// `g = (KA + A^2) / 2 + 1`.
pub fn sectional_genus_surface(ka: i64, aa: i64) -> Result<i64> {
    let adjoint = ka.add_c(aa, "sectional genus")?;
    crate::chow::genus_from_adjoint(adjoint)
}

/// Blows up one point per weight: appends `E_i` with `E_i^2 = -1`, sets
/// `K = K' + sum E_i` and `A = A' - sum m_i E_i`.
pub fn blow_up(lattice: &SurfaceLattice, weights: &WeightSequence) -> Result<SurfaceLattice> {
    let a = lattice
        .a
        .as_ref()
        .ok_or_else(|| Error::Precondition("a polarized lattice to blow up".into()))?;
    let old = lattice.rank();
    let new = old + weights.len();
    let mut labels = lattice.labels.clone();
    let mut gram: Vec<Vec<i64>> = lattice
        .gram
        .iter()
        .map(|row| {
            let mut row = row.clone();
            row.resize(new, 0);
            row
        })
        .collect();
    let mut k = lattice.k.clone();
    let mut a = a.clone();
    for (i, &m) in weights.weights().iter().enumerate() {
        labels.push(format!("E{}", i + 1));
        let mut row = vec![0; new];
        row[old + i] = -1;
        gram.push(row);
        k.push(1);
        a.push(-m);
    }
    Ok(SurfaceLattice {
        labels,
        gram,
        k,
        a: Some(a),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MinimalizationInvariants {
    pub g: i64,
    pub aa: i64,
    pub kk: i64,
    pub genus_drop: i64,
}

/// Closed forms for `(S, A)` from its minimal model: `g = g' - sum m(m-1)/2`,
/// `A^2 = A'^2 - sum m^2`, `K^2 = K'^2 - r`.
pub fn minimalization_invariants(
    g_min: i64,
    aa_min: i64,
    kk_min: i64,
    weights: &WeightSequence,
) -> Result<MinimalizationInvariants> {
    const WHAT: &str = "minimalization";
    let mut genus_drop = 0i64;
    let mut square_sum = 0i64;
    for &m in weights.weights() {
        let sq = m.mul_c(m, WHAT)?;
        square_sum = square_sum.add_c(sq, WHAT)?;
        genus_drop = genus_drop.add_c(m.mul_c(m - 1, WHAT)? / 2, WHAT)?;
    }
    let r = i64::try_from(weights.len()).map_err(|_| Error::Overflow(WHAT))?;
    Ok(MinimalizationInvariants {
        g: g_min.add_c(-genus_drop, WHAT)?,
        aa: aa_min.add_c(-square_sum, WHAT)?,
        kk: kk_min.add_c(-r, WHAT)?,
        genus_drop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(w: &[i64]) -> WeightSequence {
        WeightSequence::new(w.to_vec()).unwrap()
    }

    #[test]
    fn ruled_canonical_classes() {
        let s0 = make_ruled(RuledModel {
            base_genus: 0,
            e: 0,
        });
        assert_eq!(s0.canonical(), &[-2, -2]);
        let ell = make_ruled(RuledModel {
            base_genus: 1,
            e: 1,
        });
        assert_eq!(ell.canonical(), &[-2, 1]);
        let a = ell.with_polarization(vec![5, -2]).unwrap();
        assert_eq!(a.pairing_data().unwrap().sectional_genus().unwrap(), 3);
    }

    #[test]
    fn sigma_two_genus() {
        let s = make_ruled(RuledModel {
            base_genus: 0,
            e: 2,
        })
        .with_polarization(vec![2, 2])
        .unwrap();
        let p = s.pairing_data().unwrap();
        assert_eq!(p.ka + p.aa, 4);
        assert_eq!(p.sectional_genus().unwrap(), 3);
    }

    #[test]
    fn pair_examples() {
        let plane = SurfaceLattice::plane();
        assert_eq!(plane.pair(&[4], &[4]).unwrap(), 16);
        assert_eq!(plane.pair(&[4], &[0]).unwrap(), 0);
        let s0 = make_ruled(RuledModel {
            base_genus: 0,
            e: 0,
        });
        assert_eq!(s0.pair(&[2, 4], &[2, 4]).unwrap(), 16);
        assert_eq!(
            s0.pair(&[1], &[1, 0]),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn lattice_validation() {
        let bad = SurfaceLattice::new(
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![2, 0]],
            vec![0, 0],
        );
        assert!(matches!(bad, Err(Error::Precondition(_))));
        let short = SurfaceLattice::new(vec!["a".into()], vec![vec![1]], vec![0, 0]);
        assert_eq!(
            short,
            Err(Error::DimensionMismatch {
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn sectional_genus_examples() {
        assert_eq!(sectional_genus_surface(2, 2), Ok(3));
        assert_eq!(sectional_genus_surface(-12, 16), Ok(3));
        assert_eq!(sectional_genus_surface(0, 4), Ok(3));
        assert_eq!(sectional_genus_surface(1, 2), Err(Error::OddAdjoint(3)));
    }

    #[test]
    fn blow_up_elliptic_ruled() {
        let s = make_ruled(RuledModel {
            base_genus: 1,
            e: 0,
        })
        .with_polarization(vec![4, 1])
        .unwrap();
        let b = blow_up(&s, &ws(&[2])).unwrap();
        let p = b.pairing_data().unwrap();
        assert_eq!(p.aa, 4);
        assert_eq!(p.sectional_genus().unwrap(), 3);
        assert_eq!(b.labels(), &["H", "f", "E1"]);
    }

    #[test]
    fn blow_up_empty_is_identity() {
        let s = make_ruled(RuledModel {
            base_genus: 0,
            e: 1,
        })
        .with_polarization(vec![2, 3])
        .unwrap();
        assert_eq!(blow_up(&s, &WeightSequence::empty()).unwrap(), s);
    }

    #[test]
    fn blow_up_needs_polarization() {
        assert!(blow_up(&SurfaceLattice::plane(), &ws(&[1])).is_err());
    }

    #[test]
    fn minimalization_examples() {
        let m = minimalization_invariants(9, 18, 0, &ws(&[4])).unwrap();
        assert_eq!((m.g, m.aa, m.genus_drop), (3, 2, 6));
        let m = minimalization_invariants(12, 40, 8, &ws(&[2; 9])).unwrap();
        assert_eq!((m.g, m.aa, m.kk), (3, 4, -1));
        let m = minimalization_invariants(5, 7, 1, &WeightSequence::empty()).unwrap();
        assert_eq!((m.g, m.aa, m.kk, m.genus_drop), (5, 7, 1, 0));
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(WeightSequence::new(vec![2, 0]).is_err());
    }

    #[test]
    fn pullback_keeps_intersections() {
        let s = make_ruled(RuledModel {
            base_genus: 1,
            e: 1,
        })
        .with_polarization(vec![3, 0])
        .unwrap();
        let b = blow_up(&s, &ws(&[2, 3])).unwrap();
        let (d1, d2) = ([2, -1], [1, 4]);
        assert_eq!(
            b.pair(&b.pullback(&d1).unwrap(), &b.pullback(&d2).unwrap())
                .unwrap(),
            s.pair(&d1, &d2).unwrap()
        );
    }
}
