//! Finite abelian groups presented as `Z/n_1 x ... x Z/n_k`.
//!
//! Groups are always given by an explicit list of cyclic factor orders; no
//! normal form is computed. Enumeration visits elements in lexicographic
//! order of their coordinates, so the rightmost coordinate varies fastest.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::budget::GROUP_ENUMERATION_CAP;
use crate::{Error, Result};

/// A direct product of cyclic groups `Z/n_1 x ... x Z/n_k`.
///
/// The empty product is the trivial group. Factors of order 1 are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    orders: Arc<[u64]>,
    order: u64,
}

impl AbelianGroup {
    pub fn new(factor_orders: impl Into<Vec<u64>>) -> Result<Self> {
        let orders = factor_orders.into();
        let mut order: u64 = 1;
        for (i, &n) in orders.iter().enumerate() {
            if n == 0 {
                return Err(Error::domain(format!(
                    "cyclic factor {i} has order 0; factor orders must be at least 1"
                )));
            }
            order = match order.checked_mul(n) {
                Some(o) => o,
                None => {
                    let needed = orders
                        .iter()
                        .try_fold(1u128, |acc, &n| acc.checked_mul(n as u128))
                        .unwrap_or(u128::MAX);
                    return Err(Error::capacity("group order", needed, u64::MAX));
                }
            };
        }
        Ok(AbelianGroup {
            orders: orders.into(),
            order,
        })
    }

    pub fn factor_orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of cyclic factors in the presentation.
    pub fn num_factors(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            coords: vec![0; self.orders.len()],
        }
    }

    /// Binds `coords` to this group, rejecting unreduced or misshapen input.
    pub fn element(&self, coords: impl Into<Vec<u64>>) -> Result<GroupElement> {
        let coords = coords.into();
        if coords.len() != self.orders.len() {
            return Err(Error::Structural(format!(
                "{} coordinates given for a group with {} factors",
                coords.len(),
                self.orders.len()
            )));
        }
        if let Some((i, (&g, &n))) = coords
            .iter()
            .zip(self.orders.iter())
            .enumerate()
            .find(|(_, (&g, &n))| g >= n)
        {
            return Err(Error::domain(format!(
                "coordinate {i} is {g}, which is not reduced modulo {n}"
            )));
        }
        Ok(GroupElement {
            group: self.clone(),
            coords,
        })
    }

    /// Like [`AbelianGroup::element`] but reduces each coordinate first.
    pub fn element_reduced(&self, coords: &[u64]) -> Result<GroupElement> {
        if coords.len() != self.orders.len() {
            return Err(Error::Structural(format!(
                "{} coordinates given for a group with {} factors",
                coords.len(),
                self.orders.len()
            )));
        }
        let coords = coords
            .iter()
            .zip(self.orders.iter())
            .map(|(&g, &n)| g % n)
            .collect::<Vec<_>>();
        Ok(GroupElement {
            group: self.clone(),
            coords,
        })
    }

    pub(crate) fn ensure_enumerable(&self, cap: u64) -> Result<()> {
        if self.order > cap {
            Err(Error::capacity("group order", self.order, cap))
        } else {
            Ok(())
        }
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements(&self) -> Result<Elements> {
        self.ensure_enumerable(GROUP_ENUMERATION_CAP)?;
        Ok(Elements {
            group: self.clone(),
            next: Some(vec![0; self.orders.len()]),
        })
    }

    /// Calls `f` on the coordinates of every element, in enumeration order,
    /// reusing one buffer. The caller is responsible for the capacity check.
    pub(crate) fn visit_coords(&self, mut f: impl FnMut(&[u64])) {
        let mut coords = vec![0u64; self.orders.len()];
        loop {
            f(&coords);
            if !advance(&mut coords, &self.orders) {
                break;
            }
        }
    }

    /// `G_2 = { g : 2g = 0 }`, found by filtering a full enumeration.
    pub fn two_torsion_subgroup(&self) -> Result<Vec<GroupElement>> {
        Ok(self
            .elements()?
            .filter(|g| g.double().is_identity())
            .collect())
    }

    /// Closed-form 2-rank: the number of even factor orders.
    pub fn rank2(&self) -> Rank2Result {
        let rank = self.orders.iter().filter(|n| n.is_even()).count() as u32;
        Rank2Result::from_rank(rank)
    }

    /// 2-rank read off an enumerated `G_2`, i.e. `log2 |G_2|`.
    pub fn rank2_enumerated(&self) -> Result<Rank2Result> {
        let size = self.two_torsion_subgroup()?.len() as u64;
        if !size.is_power_of_two() {
            return Err(Error::Internal(format!(
                "two-torsion subgroup of {self} has {size} elements, not a power of two"
            )));
        }
        Ok(Rank2Result::from_rank(size.trailing_zeros()))
    }

    /// The sum of every element of the group.
    pub fn sum_all_elements(&self) -> Result<GroupElement> {
        self.ensure_enumerable(GROUP_ENUMERATION_CAP)?;
        let mut acc = vec![0u64; self.orders.len()];
        self.visit_coords(|coords| {
            for ((a, &g), &n) in acc.iter_mut().zip(coords).zip(self.orders.iter()) {
                *a = add_mod(*a, g, n);
            }
        });
        Ok(GroupElement {
            group: self.clone(),
            coords: acc,
        })
    }

    /// The sum of the elements of `G_2` only.
    pub fn sum_two_torsion(&self) -> Result<GroupElement> {
        let mut acc = self.identity();
        for g in self.two_torsion_subgroup()? {
            acc = acc.add(&g)?;
        }
        Ok(acc)
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianGroup({self})")
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return f.write_str("0");
        }
        for (i, n) in self.orders.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "Z/{n}")?;
        }
        Ok(())
    }
}

/// Odometer step; returns `false` once every coordinate wrapped to zero.
fn advance(coords: &mut [u64], orders: &[u64]) -> bool {
    for (c, &n) in coords.iter_mut().zip(orders).rev() {
        *c += 1;
        if *c < n {
            return true;
        }
        *c = 0;
    }
    false
}

fn add_mod(a: u64, b: u64, n: u64) -> u64 {
    // a, b < n <= u64::MAX, so widen to avoid overflow
    ((a as u128 + b as u128) % n as u128) as u64
}

/// Iterator over the elements of a group, see [`AbelianGroup::elements`].
pub struct Elements {
    group: AbelianGroup,
    next: Option<Vec<u64>>,
}

impl Iterator for Elements {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if advance(&mut succ, &self.group.orders) {
            self.next = Some(succ);
        }
        Some(GroupElement {
            group: self.group.clone(),
            coords: current,
        })
    }
}

/// An element of an [`AbelianGroup`]: one reduced residue per factor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: AbelianGroup,
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.group != other.group {
            return Err(Error::Structural(format!(
                "cannot add an element of {} to an element of {}",
                self.group, other.group
            )));
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(self.group.orders.iter())
            .map(|((&a, &b), &n)| add_mod(a, b, n))
            .collect();
        Ok(GroupElement {
            group: self.group.clone(),
            coords,
        })
    }

    pub fn neg(&self) -> GroupElement {
        let coords = self
            .coords
            .iter()
            .zip(self.group.orders.iter())
            .map(|(&g, &n)| if g == 0 { 0 } else { n - g })
            .collect();
        GroupElement {
            group: self.group.clone(),
            coords,
        }
    }

    /// `m * self`.
    pub fn scale(&self, m: u64) -> GroupElement {
        let coords = self
            .coords
            .iter()
            .zip(self.group.orders.iter())
            .map(|(&g, &n)| ((g as u128 * m as u128) % n as u128) as u64)
            .collect();
        GroupElement {
            group: self.group.clone(),
            coords,
        }
    }

    pub fn double(&self) -> GroupElement {
        self.scale(2)
    }

    /// Least `m >= 1` with `m * self = 0`: the lcm of `n_i / gcd(n_i, g_i)`.
    pub fn order(&self) -> u64 {
        self.coords
            .iter()
            .zip(self.group.orders.iter())
            .fold(1u64, |acc, (&g, &n)| acc.lcm(&(n / n.gcd(&g))))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.group)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// `rank_2(G)` together with `|G_2| = 2^rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rank2Result {
    pub rank: u32,
    pub two_torsion_size: u64,
}

impl Rank2Result {
    fn from_rank(rank: u32) -> Self {
        Rank2Result {
            rank,
            two_torsion_size: 1u64 << rank,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(orders: &[u64]) -> AbelianGroup {
        AbelianGroup::new(orders.to_vec()).unwrap()
    }

    fn elem(g: &AbelianGroup, coords: &[u64]) -> GroupElement {
        g.element(coords.to_vec()).unwrap()
    }

    /// Order by repeated addition, independent of the gcd/lcm formula.
    fn order_by_repetition(g: &GroupElement) -> u64 {
        let mut acc = g.clone();
        let mut m = 1;
        while !acc.is_identity() {
            acc = acc.add(g).unwrap();
            m += 1;
        }
        m
    }

    #[test]
    fn add_examples() {
        let g = group(&[4, 2]);
        assert_eq!(
            elem(&g, &[3, 1]).add(&elem(&g, &[2, 1])).unwrap(),
            elem(&g, &[1, 0])
        );
        let z3 = group(&[3]);
        assert_eq!(
            elem(&z3, &[2]).add(&elem(&z3, &[1])).unwrap(),
            elem(&z3, &[0])
        );
        let z6 = group(&[6]);
        assert_eq!(
            elem(&z6, &[5]).add(&elem(&z6, &[0])).unwrap(),
            elem(&z6, &[5])
        );
    }

    #[test]
    fn add_rejects_mismatched_groups() {
        let a = group(&[4]).identity();
        let b = group(&[2, 2]).identity();
        assert!(matches!(a.add(&b), Err(Error::Structural(_))));
        let c = group(&[6]).identity();
        assert!(matches!(a.add(&c), Err(Error::Structural(_))));
    }

    #[test]
    fn element_order_examples() {
        assert_eq!(elem(&group(&[4]), &[2]).order(), 2);
        let g = elem(&group(&[4, 6]), &[1, 3]);
        assert_eq!(order_by_repetition(&g), 4);
        assert_eq!(g.order(), 4);
        assert_eq!(elem(&group(&[5]), &[0]).order(), 1);
    }

    #[test]
    fn element_order_matches_repetition_and_divides_order() {
        for orders in [vec![12], vec![4, 6], vec![2, 3, 5], vec![1, 8], vec![9, 6]] {
            let g = group(&orders);
            for x in g.elements().unwrap() {
                let m = x.order();
                assert_eq!(m, order_by_repetition(&x), "{x:?}");
                assert_eq!(g.order() % m, 0);
            }
        }
    }

    #[test]
    fn construction_validates() {
        assert!(matches!(
            AbelianGroup::new(vec![3, 0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            AbelianGroup::new(vec![u64::MAX, 2]),
            Err(Error::Capacity { .. })
        ));
        let g = group(&[4, 2]);
        assert!(matches!(g.element(vec![4, 0]), Err(Error::Domain(_))));
        assert!(matches!(g.element(vec![1]), Err(Error::Structural(_))));
        assert_eq!(g.element_reduced(&[5, 3]).unwrap(), elem(&g, &[1, 1]));
    }

    #[test]
    fn trivial_and_unit_factors() {
        let trivial = group(&[]);
        assert_eq!(trivial.order(), 1);
        assert_eq!(trivial.rank2().rank, 0);
        assert!(trivial.sum_all_elements().unwrap().is_identity());

        let g = group(&[1, 1, 3]);
        assert_eq!(g.rank2().rank, 0);
        assert_eq!(g.two_torsion_subgroup().unwrap().len(), 1);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let g = group(&[2, 3]);
        let listed: Vec<Vec<u64>> = g.elements().unwrap().map(|x| x.coords().to_vec()).collect();
        assert_eq!(
            listed,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2]
            ]
        );
    }

    #[test]
    fn two_torsion_examples() {
        let coords = |orders: &[u64]| -> Vec<Vec<u64>> {
            group(orders)
                .two_torsion_subgroup()
                .unwrap()
                .iter()
                .map(|x| x.coords().to_vec())
                .collect()
        };
        assert_eq!(coords(&[3]), vec![vec![0]]);
        assert_eq!(
            coords(&[4, 2]),
            vec![vec![0, 0], vec![0, 1], vec![2, 0], vec![2, 1]]
        );
        assert_eq!(coords(&[2]), vec![vec![0], vec![1]]);
    }

    #[test]
    fn rank2_examples() {
        let r = group(&[15]).rank2();
        assert_eq!((r.rank, r.two_torsion_size), (0, 1));
        let r = group(&[4, 2]).rank2();
        assert_eq!((r.rank, r.two_torsion_size), (2, 4));
        let g = group(&[2, 2, 6]);
        let r = g.rank2();
        assert_eq!((r.rank, r.two_torsion_size), (3, 8));
        assert_eq!(g.rank2_enumerated().unwrap(), r);
    }

    #[test]
    fn sum_all_elements_examples() {
        assert_eq!(group(&[3]).sum_all_elements().unwrap().coords(), &[0]);
        assert_eq!(group(&[4]).sum_all_elements().unwrap().coords(), &[2]);
        assert_eq!(group(&[2, 2]).sum_all_elements().unwrap().coords(), &[0, 0]);
    }

    #[test]
    fn oversized_groups_are_refused() {
        let big = group(&[1 << 12, 1 << 11]);
        assert!(matches!(big.elements(), Err(Error::Capacity { .. })));
        assert!(matches!(
            big.sum_all_elements(),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            big.two_torsion_subgroup(),
            Err(Error::Capacity { .. })
        ));
        // the closed form still answers
        assert_eq!(big.rank2().rank, 2);
    }

    #[test]
    fn display_forms() {
        let g = group(&[4, 2]);
        assert_eq!(g.to_string(), "Z/4 x Z/2");
        assert_eq!(elem(&g, &[3, 1]).to_string(), "(3,1)");
    }
}
