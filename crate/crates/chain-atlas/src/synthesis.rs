//! Constructive witnesses: for any ordering, an instance on which it is
//! uniquely optimal, plus verification of unique optimality.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::cost::cost_of_triplets;
use crate::error::{ChainError, Result};
use crate::instance::Instance;
use crate::ordering::{enumerate_orderings_with_limit, Ordering, Triplet, DEFAULT_ENUM_LIMIT};
use crate::solvers::chin_inequality;

/// The scaffolding sequence behind instance synthesis: exact rationals
/// `R_0 = 1 < R_1 < ... < R_{n-1} = 2` and their integer scaling
/// `L_l = c * R_l` by the common denominator multiple `c`.
///
/// For any `l1, l2 < l` the sequence satisfies
/// `1/L_l < 1/L_{l1} + 1/L_{l2} - 1/L_0`, which is exactly what the Chin
/// condition needs at every step of the assignment.
#[derive(Clone, Debug)]
pub struct GrowthSequence {
    rationals: Vec<BigRational>,
    integers: Vec<BigUint>,
    scale: BigUint,
}

impl GrowthSequence {
    pub fn rationals(&self) -> &[BigRational] {
        &self.rationals
    }

    pub fn integers(&self) -> &[BigUint] {
        &self.integers
    }

    /// The common denominator multiple `c = L_0`.
    pub fn scale(&self) -> &BigUint {
        &self.scale
    }

    pub fn len(&self) -> usize {
        self.integers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.integers.is_empty()
    }
}

/// Builds the growth sequence for a chain of length `n >= 3`:
/// `R_l = (2^n + l - n - 1) / (2^n + l - n - 2^l)` for `l = 0..n-1`, with
/// `c` the least common multiple of the formula's denominators.
pub fn growth_sequence(n: usize) -> Result<GrowthSequence> {
    if n < 3 {
        return Err(ChainError::GrowthSequenceTooShort(n));
    }
    let two_pow_n = BigUint::one() << n;
    let mut numerators = Vec::with_capacity(n);
    let mut denominators = Vec::with_capacity(n);
    for level in 0..n {
        // Both are positive for l <= n-1: the numerator is 2^n + l - (n+1)
        // and the denominator bottoms out at 2^{n-1} - 1.
        let numerator = &two_pow_n + BigUint::from(level) - BigUint::from(n + 1);
        let denominator =
            &two_pow_n + BigUint::from(level) - BigUint::from(n) - (BigUint::one() << level);
        numerators.push(numerator);
        denominators.push(denominator);
    }
    let mut scale = BigUint::one();
    for d in &denominators {
        scale = scale.lcm(d);
    }
    let mut rationals = Vec::with_capacity(n);
    let mut integers = Vec::with_capacity(n);
    for (numerator, denominator) in numerators.into_iter().zip(denominators) {
        integers.push(&scale / &denominator * &numerator);
        rationals.push(BigRational::new(
            BigInt::from(numerator),
            BigInt::from(denominator),
        ));
    }
    Ok(GrowthSequence {
        rationals,
        integers,
        scale,
    })
}

/// Builds an instance on which `ordering` is uniquely optimal.
///
/// Chains of length two or less get the all-ones instance. Otherwise the
/// multiplications of `ordering` are eliminated one by one (always the
/// eliminable pair with the smallest left index), the eliminated middle
/// dimension receiving the largest unassigned growth-sequence integer;
/// finally both boundary dimensions get `L_0`.
pub fn synthesize(ordering: &Ordering) -> Instance {
    let n = ordering.chain_length();
    if n <= 2 {
        return Instance::from_u64s(&vec![1; n + 1]).expect("all-ones instance is valid");
    }
    let growth = growth_sequence(n).expect("n >= 3");
    let levels = growth.integers();

    let mut dims: Vec<Option<BigUint>> = vec![None; n + 1];
    let mut pending: Vec<Triplet> = ordering.triplets().as_slice().to_vec();
    let mut reduced: Vec<(usize, usize)> = (1..=n).map(|i| (i - 1, i)).collect();
    for level in (1..n).rev() {
        // `pending` stays sorted, so the first eliminable triplet is the
        // multiplication with the smallest left index.
        let pos = pending
            .iter()
            .position(|&(a, b, c)| reduced.contains(&(a, b)) && reduced.contains(&(b, c)))
            .expect("a valid ordering always has an eliminable multiplication");
        let (a, b, c) = pending.remove(pos);
        dims[b] = Some(levels[level].clone());
        reduced.push((a, c));
    }
    dims[0] = Some(levels[0].clone());
    dims[n] = Some(levels[0].clone());
    let dims: Vec<BigUint> = dims
        .into_iter()
        .map(|d| d.expect("every dimension is assigned"))
        .collect();
    Instance::new(dims).expect("growth-sequence values are positive")
}

/// How a [`VerifyReport`] was obtained.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VerifyPath {
    BruteForce,
    ChinReduction,
}

impl VerifyPath {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerifyPath::BruteForce => "brute-force",
            VerifyPath::ChinReduction => "chin-reduction",
        }
    }
}

/// Outcome of a unique-optimality check.
///
/// On the brute-force path `uniquely_optimal` is exact. On the
/// Chin-reduction path the condition is sufficient but not necessary, so
/// `false` there means "not certified" rather than a refutation.
#[derive(Clone, Copy, Debug)]
pub struct VerifyReport {
    pub uniquely_optimal: bool,
    pub path: VerifyPath,
}

/// Checks that `ordering` is strictly cheaper than every other ordering on
/// `inst`, by exhaustive comparison up to the default enumeration limit and
/// by the Chin-condition reduction above it.
pub fn verify_uniquely_optimal(ordering: &Ordering, inst: &Instance) -> Result<VerifyReport> {
    verify_uniquely_optimal_with(ordering, inst, DEFAULT_ENUM_LIMIT, true)
}

/// As [`verify_uniquely_optimal`], with the enumeration limit exposed.
/// When `n` exceeds `limit` and `chin_fallback` is false, the check fails
/// with an enumeration-limit error instead of switching paths.
pub fn verify_uniquely_optimal_with(
    ordering: &Ordering,
    inst: &Instance,
    limit: usize,
    chin_fallback: bool,
) -> Result<VerifyReport> {
    let n = inst.n();
    if ordering.chain_length() != n {
        return Err(ChainError::LengthMismatch {
            ordering: ordering.chain_length(),
            instance: n,
        });
    }
    if n <= limit {
        let own = cost_of_triplets(inst.dims(), &ordering.triplets());
        let mut unique = true;
        for other in enumerate_orderings_with_limit(n, limit)? {
            if other == *ordering {
                continue;
            }
            if cost_of_triplets(inst.dims(), &other.triplets()) <= own {
                unique = false;
                break;
            }
        }
        Ok(VerifyReport {
            uniquely_optimal: unique,
            path: VerifyPath::BruteForce,
        })
    } else if chin_fallback {
        Ok(VerifyReport {
            uniquely_optimal: chin_reduction_certifies(ordering, inst),
            path: VerifyPath::ChinReduction,
        })
    } else {
        Err(ChainError::EnumerationLimitExceeded { n, limit })
    }
}

/// Eliminates the multiplications of `ordering` one by one, requiring each
/// eliminated pair to satisfy the Chin condition on the current reduced
/// chain. Succeeding for all `n-1` multiplications certifies that the
/// ordering is uniquely optimal.
fn chin_reduction_certifies(ordering: &Ordering, inst: &Instance) -> bool {
    let dims = inst.dims();
    let n = inst.n();
    let mut pending: Vec<Triplet> = ordering.triplets().as_slice().to_vec();
    let mut reduced: Vec<(usize, usize)> = (1..=n).map(|i| (i - 1, i)).collect();
    let mut active: Vec<usize> = (0..=n).collect();
    while !pending.is_empty() {
        let min = active
            .iter()
            .map(|&i| &dims[i])
            .min()
            .expect("the reduced chain keeps its boundaries");
        let eliminable = pending.iter().enumerate().find(|&(_, &(a, b, c))| {
            reduced.contains(&(a, b))
                && reduced.contains(&(b, c))
                && chin_inequality(&dims[a], &dims[b], &dims[c], min)
        });
        match eliminable {
            Some((pos, &(a, b, c))) => {
                pending.remove(pos);
                reduced.push((a, c));
                active.retain(|&i| i != b);
            }
            None => return false,
        }
    }
    true
}
