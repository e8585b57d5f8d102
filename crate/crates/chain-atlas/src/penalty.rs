//! Penalty of removing ordering subsets: the relative increase in optimal
//! cost when the removed orderings may no longer be used.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cost::{cost_of_triplets, Cost};
use crate::error::{ChainError, Result};
use crate::instance::Instance;
use crate::ordering::{enumerate_orderings_with_limit, Ordering, DEFAULT_ENUM_LIMIT};
use crate::solvers::{best_essential, dp_solve};

/// The outcome of a removal: optimal cost, optimal cost among the remaining
/// orderings, and the exact relative increase.
#[derive(Clone, Debug)]
pub struct PenaltyReport {
    pub optimal_cost: Cost,
    pub restricted_cost: Cost,
    /// `restricted_cost / optimal_cost - 1`, exact and non-negative.
    pub penalty: BigRational,
    pub removed_description: String,
}

impl PenaltyReport {
    pub(crate) fn from_costs(
        optimal_cost: Cost,
        restricted_cost: Cost,
        removed_description: String,
    ) -> Self {
        debug_assert!(restricted_cost >= optimal_cost);
        let increase = &restricted_cost - &optimal_cost;
        let penalty = BigRational::new(BigInt::from(increase), BigInt::from(optimal_cost.clone()));
        PenaltyReport {
            optimal_cost,
            restricted_cost,
            penalty,
            removed_description,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.penalty.is_zero()
    }

    /// The penalty as a decimal with six places, rounded half-even.
    pub fn penalty_decimal(&self) -> String {
        decimal_places(&self.penalty, 6)
    }
}

/// Penalty of forbidding the given orderings on `inst`: the cheapest
/// surviving ordering (by enumeration) against the overall optimum (by
/// dynamic programming).
pub fn penalty_of_removal(inst: &Instance, removed: &[Ordering]) -> Result<PenaltyReport> {
    penalty_of_removal_with_limit(inst, removed, DEFAULT_ENUM_LIMIT)
}

pub fn penalty_of_removal_with_limit(
    inst: &Instance,
    removed: &[Ordering],
    limit: usize,
) -> Result<PenaltyReport> {
    let forbidden: HashSet<&Ordering> = removed.iter().collect();
    let mut restricted: Option<Cost> = None;
    for o in enumerate_orderings_with_limit(inst.n(), limit)? {
        if forbidden.contains(&o) {
            continue;
        }
        let cost = cost_of_triplets(inst.dims(), &o.triplets());
        if restricted.as_ref().is_none_or(|c| cost < *c) {
            restricted = Some(cost);
        }
    }
    let restricted = restricted.ok_or(ChainError::EmptyRestriction)?;
    let optimal = dp_solve(inst).cost;
    Ok(PenaltyReport::from_costs(
        optimal,
        restricted,
        describe_removed(removed),
    ))
}

/// Penalty of keeping only the essential orderings. Needs no enumeration:
/// the numerator comes from the best essential ordering, the denominator
/// from the dynamic program. Always strictly below one.
pub fn penalty_nonessential_removed(inst: &Instance) -> PenaltyReport {
    let restricted = best_essential(inst).cost;
    let optimal = dp_solve(inst).cost;
    PenaltyReport::from_costs(optimal, restricted, "all non-essential orderings".into())
}

fn describe_removed(removed: &[Ordering]) -> String {
    match removed.len() {
        0 => "nothing removed".into(),
        1..=4 => {
            let texts: Vec<String> = removed.iter().map(|o| o.render()).collect();
            format!("{{{}}}", texts.join(", "))
        }
        count => format!("{count} orderings removed"),
    }
}

/// Renders a non-negative rational as a decimal with the given number of
/// places, rounding half-even.
pub(crate) fn decimal_places(value: &BigRational, places: u32) -> String {
    debug_assert!(!value.is_negative());
    let pow = BigInt::from(10u32).pow(places);
    let scaled = value * BigRational::from(pow.clone());
    let mut quot = scaled.numer() / scaled.denom();
    let rem = scaled.numer() - &quot * scaled.denom();
    // Round half-even on the remainder.
    let twice = &rem * BigInt::from(2);
    let denom = scaled.denom().clone();
    if twice > denom || (twice == denom && quot.is_odd()) {
        quot += 1;
    }
    let whole = &quot / &pow;
    let frac = &quot % &pow;
    format!("{whole}.{frac:0width$}", width = places as usize)
}
