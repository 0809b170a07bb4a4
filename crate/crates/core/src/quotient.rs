//! 2-rank of `G / Gamma` where `Gamma = {0, (n_1/2, ..., n_k/2)}`.
//!
//! The quotient is never built. Its two-torsion is counted through
//! `g + Gamma in (G/Gamma)_2  <=>  2g in Gamma`, so
//! `|(G/Gamma)_2| = #{g : 2g in Gamma} / |Gamma|`.

use num_integer::Integer;

use crate::abelian::{AbelianGroup, GroupElement};
use crate::budget::QUOTIENT_ENUMERATION_CAP;
use crate::residue::OddPrime;
use crate::{Error, Result};

/// The diagonal order-2 subgroup of a product of even-order cyclic groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalGamma {
    group: AbelianGroup,
    gamma: GroupElement,
}

impl DiagonalGamma {
    pub fn new(group: AbelianGroup) -> Result<Self> {
        check_even_orders(group.factor_orders())?;
        let halves: Vec<u64> = group.factor_orders().iter().map(|n| n / 2).collect();
        let gamma = group.element(halves)?;
        debug_assert!(gamma.double().is_identity() && !gamma.is_identity());
        Ok(DiagonalGamma { group, gamma })
    }

    pub fn from_orders(orders: &[u64]) -> Result<Self> {
        DiagonalGamma::new(AbelianGroup::new(orders.to_vec())?)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// The non-identity element `(n_1/2, ..., n_k/2)`.
    pub fn gamma(&self) -> &GroupElement {
        &self.gamma
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.group() == &self.group && (g.is_identity() || g == &self.gamma)
    }
}

fn check_even_orders(orders: &[u64]) -> Result<()> {
    if orders.is_empty() {
        return Err(Error::domain("the factor order list must be nonempty"));
    }
    if let Some(n) = orders.iter().find(|n| n.is_odd()) {
        return Err(Error::domain(format!(
            "factor order {n} is odd; every factor order must be even"
        )));
    }
    Ok(())
}

/// Closed form: `k` when every order is divisible by 4, else `k - 1`.
pub fn rank2_quotient_formula(orders: &[u64]) -> Result<u32> {
    check_even_orders(orders)?;
    let k = orders.len() as u32;
    if orders.iter().all(|n| n % 4 == 0) {
        Ok(k)
    } else {
        Ok(k - 1)
    }
}

/// Number of `g in G` with `2g in Gamma`, by full enumeration.
pub fn count_half_gamma_solutions(gamma: &DiagonalGamma) -> Result<u64> {
    let group = gamma.group();
    group.ensure_enumerable(QUOTIENT_ENUMERATION_CAP)?;
    let orders = group.factor_orders();
    let target = gamma.gamma().coords();
    let mut count = 0u64;
    group.visit_coords(|coords| {
        let mut is_zero = true;
        let mut is_gamma = true;
        for ((&g, &n), &c) in coords.iter().zip(orders).zip(target) {
            let twice = (2 * g as u128 % n as u128) as u64;
            is_zero &= twice == 0;
            is_gamma &= twice == c;
        }
        if is_zero || is_gamma {
            count += 1;
        }
    });
    Ok(count)
}

/// `log2 |(G/Gamma)_2|` obtained by counting solutions of `2g in Gamma`.
pub fn rank2_quotient_enumerated(gamma: &DiagonalGamma) -> Result<u32> {
    let count = count_half_gamma_solutions(gamma)?;
    if count % 2 != 0 || !(count / 2).is_power_of_two() {
        return Err(Error::Internal(format!(
            "{} solutions of 2g in Gamma in {}; expected twice a power of two",
            count,
            gamma.group()
        )));
    }
    Ok((count / 2).trailing_zeros())
}

/// Both routes to the quotient 2-rank side by side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientRankReport {
    pub k: usize,
    pub formula_rank: u32,
    pub enumerated_rank: Option<u32>,
    /// Present exactly when `enumerated_rank` is.
    pub agree: Option<bool>,
}

pub fn quotient_rank_report(orders: &[u64]) -> Result<QuotientRankReport> {
    let formula_rank = rank2_quotient_formula(orders)?;
    let gamma = DiagonalGamma::from_orders(orders)?;
    let enumerated_rank = match rank2_quotient_enumerated(&gamma) {
        Ok(r) => Some(r),
        Err(Error::Capacity { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(QuotientRankReport {
        k: orders.len(),
        formula_rank,
        enumerated_rank,
        agree: enumerated_rank.map(|r| r == formula_rank),
    })
}

/// Number of residues of additive order exactly 4 in `Z/n`.
pub fn order_four_census(n: u64) -> Result<u64> {
    let cyclic = AbelianGroup::new(vec![n])?;
    Ok(cyclic.elements()?.filter(|g| g.order() == 4).count() as u64)
}

/// Quotient 2-rank for `F_p^x * F_q^x` modulo `{(1,1), (-1,-1)}`.
///
/// Uses `F_p^x = Z/(p-1)`, so this is the closed form on `[p-1, q-1]`:
/// 2 when `p = q = 1 (mod 4)` and 1 otherwise.
pub fn corollary_rank_for_primes(p: u64, q: u64) -> Result<u32> {
    let p = OddPrime::new(p)?;
    let q = OddPrime::new(q)?;
    if p == q {
        return Err(Error::domain("primes must be distinct"));
    }
    rank2_quotient_formula(&[p.get() - 1, q.get() - 1])
}
