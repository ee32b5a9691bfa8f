use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{DivisorClass, ProjBundleModel};
use crate::error::{Checked, Error, Result};

/// `H^h F^f` with `f` in `{0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Monomial {
    pub h: usize,
    pub f: usize,
}

impl Monomial {
    pub const fn new(h: usize, f: usize) -> Self {
        Self { h, f }
    }

    pub const fn degree(self) -> usize {
        self.h + self.f
    }
}

/// A reduced integer combination of monomials in the Chow ring of `P(E)`.
///
/// Reduced means: no `F^2`, nothing above the top degree `rank`, and `H^rank`
/// already rewritten as `c1 * H^(rank-1) F`. Zero coefficients are not stored,
/// so equal classes have equal maps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChowElement {
    terms: BTreeMap<Monomial, i64>,
}

impl ChowElement {
    pub fn one() -> Self {
        Self {
            terms: BTreeMap::from([(Monomial::new(0, 0), 1)]),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds and reduces an element from arbitrary terms (any `h`, any `f`).
    pub fn from_terms(
        bundle: &ProjBundleModel,
        terms: impl IntoIterator<Item = (Monomial, i64)>,
    ) -> Result<Self> {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_reduced(bundle, m, c)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Monomial) -> i64 {
        self.terms.get(&m).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, i64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    /// Multiplies by a divisor class and reduces.
    pub fn mul_divisor(&self, bundle: &ProjBundleModel, class: DivisorClass) -> Result<Self> {
        let mut out = Self::zero();
        for (&m, &c) in &self.terms {
            if class.h != 0 {
                let coef = c.mul_c(class.h, "ring product")?;
                out.add_reduced(bundle, Monomial::new(m.h + 1, m.f), coef)?;
            }
            if class.f != 0 {
                let coef = c.mul_c(class.f, "ring product")?;
                out.add_reduced(bundle, Monomial::new(m.h, m.f + 1), coef)?;
            }
        }
        Ok(out)
    }

    pub fn mul(&self, bundle: &ProjBundleModel, other: &ChowElement) -> Result<Self> {
        let mut out = Self::zero();
        for (&a, &ca) in &self.terms {
            for (&b, &cb) in &other.terms {
                let coef = ca.mul_c(cb, "ring product")?;
                out.add_reduced(bundle, Monomial::new(a.h + b.h, a.f + b.f), coef)?;
            }
        }
        Ok(out)
    }

    fn add_reduced(&mut self, bundle: &ProjBundleModel, m: Monomial, coef: i64) -> Result<()> {
        let rank = bundle.rank();
        if coef == 0 || m.f > 1 || m.degree() > rank {
            return Ok(());
        }
        let (key, coef) = if m.h == rank {
            // m = H^rank, f = 0
            let c = coef.mul_c(bundle.c1(), "Grothendieck relation")?;
            (Monomial::new(rank - 1, 1), c)
        } else {
            (m, coef)
        };
        if coef == 0 {
            return Ok(());
        }
        let slot = self.terms.entry(key).or_insert(0);
        *slot = slot.add_c(coef, "ring sum")?;
        if *slot == 0 {
            self.terms.remove(&key);
        }
        Ok(())
    }
}

impl fmt::Display for ChowElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " {} ", if *c < 0 { '-' } else { '+' })?;
            } else if *c < 0 {
                write!(f, "-")?;
            }
            write!(f, "{}", c.unsigned_abs())?;
            match m.h {
                0 => {}
                1 => write!(f, "*H")?,
                h => write!(f, "*H^{h}")?,
            }
            if m.f == 1 {
                write!(f, "*F")?;
            }
        }
        Ok(())
    }
}

/// Reduced product of divisor classes.
pub fn multiply_classes(bundle: &ProjBundleModel, factors: &[DivisorClass]) -> Result<ChowElement> {
    if factors.is_empty() {
        return Err(Error::Precondition("a non-empty list of factors".into()));
    }
    factors.iter().try_fold(ChowElement::one(), |acc, &class| {
        acc.mul_divisor(bundle, class)
    })
}

/// Degree of a top-dimensional class, with `H^(rank-1) F = 1`.
pub fn top_degree(bundle: &ProjBundleModel, element: &ChowElement) -> Result<i64> {
    let rank = bundle.rank();
    if let Some((m, _)) = element.terms().find(|(m, _)| m.degree() != rank) {
        return Err(Error::DegreeMismatch {
            expected: rank,
            found: m.degree(),
        });
    }
    Ok(element.coefficient(Monomial::new(rank - 1, 1)))
}
