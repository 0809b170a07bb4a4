//! The transversal argument in `G = F_p^x * F_q^x`.
//!
//! With `Gamma = {(1,1), (-1,-1)}`, the set
//! `L = {(k mod p, k mod q) : 0 < k < pq/2, p !| k, q !| k}` picks one
//! element from each coset of `Gamma`. Its product is compared against the
//! closed form built from Legendre symbols, and the 2-rank of `G / Gamma`
//! decides whether the two coordinates of that product agree or differ.
//! Together these pin down the relation between `(q/p)` and `(p/q)`.

use std::collections::HashSet;
use std::fmt;

use crate::budget::{Budget, PIPELINE_PQ_CAP, TRANSVERSAL_PQ_CAP};
use crate::quotient::{corollary_rank_for_primes, rank2_quotient_enumerated, DiagonalGamma};
use crate::residue::{legendre_euler, mul_mod, LegendreValue, OddPrime, Sign};
use crate::{Error, Result};

/// A unit of `F_p^x * F_q^x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnitPair {
    a: u64,
    b: u64,
    p: OddPrime,
    q: OddPrime,
}

impl UnitPair {
    pub fn new(a: u64, b: u64, p: OddPrime, q: OddPrime) -> Result<Self> {
        if a == 0 || a >= p.get() || b == 0 || b >= q.get() {
            return Err(Error::domain(format!(
                "({a}, {b}) is not a unit pair modulo ({p}, {q})"
            )));
        }
        Ok(UnitPair { a, b, p, q })
    }

    pub fn one(p: OddPrime, q: OddPrime) -> Self {
        UnitPair { a: 1, b: 1, p, q }
    }

    /// The image of an integer `k` coprime to `pq`.
    fn from_integer(k: u64, p: OddPrime, q: OddPrime) -> Self {
        UnitPair {
            a: k % p.get(),
            b: k % q.get(),
            p,
            q,
        }
    }

    fn from_signs(first: Sign, second: Sign, p: OddPrime, q: OddPrime) -> Self {
        UnitPair {
            a: first.to_residue(p.get()),
            b: second.to_residue(q.get()),
            p,
            q,
        }
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn moduli(&self) -> (OddPrime, OddPrime) {
        (self.p, self.q)
    }

    pub fn mul(&self, other: &UnitPair) -> Result<UnitPair> {
        if self.moduli() != other.moduli() {
            return Err(Error::Structural(format!(
                "unit pairs modulo ({}, {}) and ({}, {})",
                self.p, self.q, other.p, other.q
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &UnitPair) -> UnitPair {
        UnitPair {
            a: mul_mod(self.a, other.a, self.p.get()),
            b: mul_mod(self.b, other.b, self.q.get()),
            p: self.p,
            q: self.q,
        }
    }

    /// `(-a, -b)`, the other member of this element's `Gamma`-coset.
    pub fn neg(&self) -> UnitPair {
        UnitPair {
            a: self.p.get() - self.a,
            b: self.q.get() - self.b,
            p: self.p,
            q: self.q,
        }
    }

    /// Each coordinate read as a sign, `None` where it is not `+-1`.
    pub fn signs(&self) -> (Option<Sign>, Option<Sign>) {
        (
            Sign::from_residue(self.a, self.p.get()),
            Sign::from_residue(self.b, self.q.get()),
        )
    }
}

impl fmt::Display for UnitPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// `Gamma = {(1,1), (-1,-1)}` inside `F_p^x * F_q^x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaPQ {
    p: OddPrime,
    q: OddPrime,
}

impl GammaPQ {
    pub fn new(p: OddPrime, q: OddPrime) -> Result<Self> {
        ensure_distinct(p, q)?;
        Ok(GammaPQ { p, q })
    }

    pub fn identity(&self) -> UnitPair {
        UnitPair::one(self.p, self.q)
    }

    pub fn minus_one(&self) -> UnitPair {
        self.identity().neg()
    }

    pub fn contains(&self, x: &UnitPair) -> bool {
        *x == self.identity() || *x == self.minus_one()
    }

    /// Membership in the coset `(1,-1) Gamma = {(1,-1), (-1,1)}`.
    pub fn in_order_two_coset(&self, x: &UnitPair) -> bool {
        let p = self.p.get();
        let q = self.q.get();
        x.moduli() == (self.p, self.q) && ((x.a == 1 && x.b == q - 1) || (x.a == p - 1 && x.b == 1))
    }
}

fn ensure_distinct(p: OddPrime, q: OddPrime) -> Result<()> {
    if p == q {
        Err(Error::domain("primes must be distinct"))
    } else {
        Ok(())
    }
}

fn checked_pq(p: OddPrime, q: OddPrime, cap: u64) -> Result<u64> {
    ensure_distinct(p, q)?;
    let pq = p.get() as u128 * q.get() as u128;
    if pq > cap as u128 {
        return Err(Error::capacity("p * q", pq, cap));
    }
    Ok(pq as u64)
}

/// The integers `k` behind `L`: `1 <= k <= (pq-1)/2` with `p !| k`, `q !| k`.
fn transversal_indices(p: OddPrime, q: OddPrime, pq: u64) -> impl Iterator<Item = u64> {
    let (p, q) = (p.get(), q.get());
    (1..=(pq - 1) / 2).filter(move |k| k % p != 0 && k % q != 0)
}

/// The elements of `L` in ascending `k`, without storing them.
pub fn stream_transversal(p: OddPrime, q: OddPrime) -> Result<impl Iterator<Item = UnitPair>> {
    stream_within(p, q, PIPELINE_PQ_CAP)
}

fn stream_within(p: OddPrime, q: OddPrime, cap: u64) -> Result<impl Iterator<Item = UnitPair>> {
    let pq = checked_pq(p, q, cap)?;
    Ok(transversal_indices(p, q, pq).map(move |k| UnitPair::from_integer(k, p, q)))
}

/// The ordered transversal `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversal {
    p: OddPrime,
    q: OddPrime,
    pairs: Vec<UnitPair>,
}

impl Transversal {
    /// Wraps an arbitrary list of pairs, e.g. to check a candidate with
    /// [`verify_transversal`].
    pub fn from_pairs(p: OddPrime, q: OddPrime, pairs: Vec<UnitPair>) -> Result<Self> {
        ensure_distinct(p, q)?;
        if let Some(x) = pairs.iter().find(|x| x.moduli() != (p, q)) {
            return Err(Error::Structural(format!(
                "pair {x} is modulo ({}, {}), not ({p}, {q})",
                x.p, x.q
            )));
        }
        Ok(Transversal { p, q, pairs })
    }

    pub fn primes(&self) -> (OddPrime, OddPrime) {
        (self.p, self.q)
    }

    pub fn pairs(&self) -> &[UnitPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn into_pairs(self) -> Vec<UnitPair> {
        self.pairs
    }
}

pub fn build_transversal(p: OddPrime, q: OddPrime) -> Result<Transversal> {
    build_within(p, q, TRANSVERSAL_PQ_CAP)
}

fn build_within(p: OddPrime, q: OddPrime, cap: u64) -> Result<Transversal> {
    let pairs = stream_within(p, q, cap)?.collect();
    Ok(Transversal { p, q, pairs })
}

/// Coordinatewise product of every element of `L`.
pub fn product_over_transversal(transversal: &Transversal) -> UnitPair {
    product_of(
        transversal.p,
        transversal.q,
        transversal.pairs.iter().copied(),
    )
}

/// Same product as [`product_over_transversal`] but streamed, so it runs up
/// to the larger pipeline cap.
pub fn streamed_product(p: OddPrime, q: OddPrime) -> Result<UnitPair> {
    Ok(product_of(p, q, stream_transversal(p, q)?))
}

fn product_of(p: OddPrime, q: OddPrime, pairs: impl Iterator<Item = UnitPair>) -> UnitPair {
    pairs.fold(UnitPair::one(p, q), |acc, x| acc.mul_unchecked(&x))
}

/// `((-1)^((q-1)/2) (q/p), (-1)^((p-1)/2) (p/q))` as residues.
pub fn closed_form_product(p: OddPrime, q: OddPrime) -> Result<UnitPair> {
    ensure_distinct(p, q)?;
    let first = Sign::from_parity(q.half()) * legendre_euler(q.get(), p)?;
    let second = Sign::from_parity(p.half()) * legendre_euler(p.get(), q)?;
    Ok(UnitPair::from_signs(first, second, p, q))
}

/// True iff `L` has `(p-1)(q-1)/2` entries, no two of them equal or negatives
/// of each other.
pub fn verify_transversal(transversal: &Transversal) -> bool {
    let (p, q) = transversal.primes();
    let expected = (p.get() - 1) as u128 * (q.get() - 1) as u128 / 2;
    if transversal.len() as u128 != expected {
        return false;
    }
    let mut seen = HashSet::with_capacity(transversal.len());
    transversal.pairs.iter().all(|x| {
        let rep = {
            let y = x.neg();
            if (x.a, x.b) <= (y.a, y.b) {
                (x.a, x.b)
            } else {
                (y.a, y.b)
            }
        };
        seen.insert(rep)
    })
}

/// `(p/q)(q/p) = (-1)^((p-1)/2 (q-1)/2)`, from Euler's criterion.
pub fn qr_identity(p: OddPrime, q: OddPrime) -> Result<bool> {
    ensure_distinct(p, q)?;
    let lhs = legendre_euler(p.get(), q)? * legendre_euler(q.get(), p)?;
    let rhs = Sign::from_parity((p.half() % 2) * (q.half() % 2));
    Ok(lhs == rhs)
}

/// How `(q/p)` relates to `(p/q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Equal,
    Opposite,
}

impl Relation {
    pub fn between(x: Sign, y: Sign) -> Relation {
        if x == y {
            Relation::Equal
        } else {
            Relation::Opposite
        }
    }

    pub fn as_sign(self) -> Sign {
        match self {
            Relation::Equal => Sign::Plus,
            Relation::Opposite => Sign::Minus,
        }
    }

    fn from_sign(s: Sign) -> Relation {
        match s {
            Sign::Plus => Relation::Equal,
            Sign::Minus => Relation::Opposite,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Equal => "equal",
            Relation::Opposite => "opposite",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Case split on the quotient rank.
///
/// Rank above 1 puts the product of `L` in `Gamma`, so its coordinates are
/// equal; rank 1 puts it in the order-2 coset, so they are opposite. Since
/// the coordinates are `(-1)^((q-1)/2) (q/p)` and `(-1)^((p-1)/2) (p/q)`,
/// the symbols relate by the coordinate relation times
/// `(-1)^((p-1)/2 + (q-1)/2)`.
pub fn predicted_relation(p: OddPrime, q: OddPrime, rank: u32) -> Relation {
    let coordinates = if rank > 1 { Sign::Plus } else { Sign::Minus };
    Relation::from_sign(coordinates * Sign::from_parity(p.half() + q.half()))
}

/// Named checks recorded in a [`PairVerdict`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    /// Product of `L` equals the closed form exactly.
    ProductClosedForm,
    /// `L` is a transversal of `Gamma`; only run when `L` fits in memory.
    TransversalValid,
    /// Closed-form quotient rank equals the rank counted on units of `F_p^x * F_q^x`.
    RankUnitCount,
    /// Closed-form quotient rank equals the rank counted in `Z/(p-1) x Z/(q-1)`.
    RankCyclicCount,
    /// Both product coordinates are `+-1`.
    ProductSigns,
    /// Product lies in `Gamma` (rank > 1) or in the order-2 coset (rank 1).
    RankDichotomy,
    /// The predicted relation matches the directly computed symbols.
    RelationMatchesSymbols,
    /// `(p/q)(q/p) = (-1)^((p-1)/2 (q-1)/2)`.
    QrIdentity,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::ProductClosedForm,
        Check::TransversalValid,
        Check::RankUnitCount,
        Check::RankCyclicCount,
        Check::ProductSigns,
        Check::RankDichotomy,
        Check::RelationMatchesSymbols,
        Check::QrIdentity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::ProductClosedForm => "product_closed_form",
            Check::TransversalValid => "transversal_valid",
            Check::RankUnitCount => "rank_unit_count",
            Check::RankCyclicCount => "rank_cyclic_count",
            Check::ProductSigns => "product_signs",
            Check::RankDichotomy => "rank_dichotomy",
            Check::RelationMatchesSymbols => "relation_matches_symbols",
            Check::QrIdentity => "qr_identity",
        }
    }

    pub fn parse(name: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.as_str() == name)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything checked for one prime pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairVerdict {
    pub p: OddPrime,
    pub q: OddPrime,
    pub rank: u32,
    pub product_l: UnitPair,
    pub closed_form: UnitPair,
    /// `(q/p)`.
    pub legendre_qp: LegendreValue,
    /// `(p/q)`.
    pub legendre_pq: LegendreValue,
    pub predicted_relation: Relation,
    pub qr_identity_holds: bool,
    pub checks: Vec<(Check, bool)>,
}

impl PairVerdict {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|&(_, ok)| ok)
    }

    pub fn check(&self, which: Check) -> Option<bool> {
        self.checks
            .iter()
            .find(|(c, _)| *c == which)
            .map(|&(_, ok)| ok)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = Check> + '_ {
        self.checks.iter().filter(|(_, ok)| !ok).map(|&(c, _)| c)
    }
}

/// `#{x in F_p^x : x^2 = target}` by scanning all units.
fn count_square_roots(target: u64, p: OddPrime) -> u64 {
    let m = p.get();
    (1..m).filter(|&x| mul_mod(x, x, m) == target).count() as u64
}

/// `log2 |(G/Gamma)_2|` counted directly on `F_p^x * F_q^x`: the solutions of
/// `(x^2, y^2) in Gamma`, divided by `|Gamma| = 2`.
fn rank_from_unit_count(p: OddPrime, q: OddPrime) -> Option<u32> {
    let ones = count_square_roots(1, p) * count_square_roots(1, q);
    let minus_ones = count_square_roots(p.get() - 1, p) * count_square_roots(q.get() - 1, q);
    let half = (ones + minus_ones) / 2;
    half.is_power_of_two().then(|| half.trailing_zeros())
}

pub fn verify_pair(p: OddPrime, q: OddPrime) -> Result<PairVerdict> {
    verify_pair_within(p, q, &Budget::default())
}

/// Runs every check for `(p, q)` and records each outcome without stopping
/// at the first failure.
pub fn verify_pair_within(p: OddPrime, q: OddPrime, budget: &Budget) -> Result<PairVerdict> {
    let pq = checked_pq(p, q, budget.pipeline_pq.min(PIPELINE_PQ_CAP))?;
    let gamma = GammaPQ::new(p, q)?;
    let mut checks = Vec::with_capacity(Check::ALL.len());

    let product_l = if pq <= budget.transversal_pq.min(TRANSVERSAL_PQ_CAP) {
        let transversal = build_transversal(p, q)?;
        checks.push((Check::TransversalValid, verify_transversal(&transversal)));
        product_over_transversal(&transversal)
    } else {
        streamed_product(p, q)?
    };
    let closed_form = closed_form_product(p, q)?;
    checks.push((Check::ProductClosedForm, product_l == closed_form));

    let rank = corollary_rank_for_primes(p.get(), q.get())?;
    checks.push((
        Check::RankUnitCount,
        rank_from_unit_count(p, q) == Some(rank),
    ));
    let cyclic_order = (p.get() - 1) as u128 * (q.get() - 1) as u128;
    if cyclic_order <= budget.quotient_enumeration as u128 {
        let diagonal = DiagonalGamma::from_orders(&[p.get() - 1, q.get() - 1])?;
        let counted = match rank2_quotient_enumerated(&diagonal) {
            Ok(r) => Some(r),
            Err(Error::Internal(_)) => None,
            Err(e) => return Err(e),
        };
        checks.push((Check::RankCyclicCount, counted == Some(rank)));
    }

    let (first, second) = product_l.signs();
    checks.push((Check::ProductSigns, first.is_some() && second.is_some()));
    let dichotomy = match rank {
        1 => gamma.in_order_two_coset(&product_l),
        r if r > 1 => gamma.contains(&product_l),
        _ => false,
    };
    checks.push((Check::RankDichotomy, dichotomy));

    let legendre_qp = legendre_euler(q.get(), p)?;
    let legendre_pq = legendre_euler(p.get(), q)?;
    let predicted = predicted_relation(p, q, rank);
    checks.push((
        Check::RelationMatchesSymbols,
        predicted == Relation::between(legendre_qp, legendre_pq),
    ));

    let qr_identity_holds = qr_identity(p, q)?;
    checks.push((Check::QrIdentity, qr_identity_holds));
    checks.sort_by_key(|&(c, _)| c);

    Ok(PairVerdict {
        p,
        q,
        rank,
        product_l,
        closed_form,
        legendre_qp,
        legendre_pq,
        predicted_relation: predicted,
        qr_identity_holds,
        checks,
    })
}
