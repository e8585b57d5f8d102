//! The flop-count cost model: triplet costs and whole-ordering costs.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{ChainError, Result};
use crate::instance::Instance;
use crate::ordering::{Ordering, TripletSet};

/// A scalar-multiplication count. Unbounded, so costs of synthesized
/// witness instances never overflow.
pub type Cost = BigUint;

/// Cost `k_a * k_b * k_c` of multiplying the partial products that meet at
/// dimension `k_b`. Rotationally symmetric in its arguments.
pub fn cost_triplet(inst: &Instance, a: usize, b: usize, c: usize) -> Result<Cost> {
    let len = inst.dims().len();
    for index in [a, b, c] {
        if index >= len {
            return Err(ChainError::IndexOutOfRange { index, len });
        }
    }
    Ok(triplet_product(inst.dims(), a, b, c))
}

/// Total cost of evaluating `inst` with the multiplications of `ordering`.
pub fn chain_cost(ordering: &Ordering, inst: &Instance) -> Result<Cost> {
    if ordering.chain_length() != inst.n() {
        return Err(ChainError::LengthMismatch {
            ordering: ordering.chain_length(),
            instance: inst.n(),
        });
    }
    Ok(cost_of_triplets(inst.dims(), &ordering.triplets()))
}

pub(crate) fn triplet_product(dims: &[BigUint], a: usize, b: usize, c: usize) -> BigUint {
    &dims[a] * &dims[b] * &dims[c]
}

pub(crate) fn cost_of_triplets(dims: &[BigUint], triplets: &TripletSet) -> BigUint {
    let mut total = BigUint::zero();
    for &(a, b, c) in triplets.iter() {
        total += triplet_product(dims, a, b, c);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inst(dims: &[u64]) -> Instance {
        Instance::from_u64s(dims).unwrap()
    }

    fn ord(text: &str) -> Ordering {
        Ordering::parse(text).unwrap()
    }

    #[test]
    fn triplet_cost_is_the_dimension_product() {
        let i = inst(&[2, 3, 4, 5, 6]);
        assert_eq!(cost_triplet(&i, 0, 1, 2).unwrap(), BigUint::from(24u32));
        let j = inst(&[10, 100, 5, 50]);
        assert_eq!(cost_triplet(&j, 0, 2, 3).unwrap(), BigUint::from(2500u32));
        let ones = inst(&[1, 1, 1, 1]);
        assert_eq!(cost_triplet(&ones, 0, 2, 3).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn triplet_cost_rejects_out_of_range_indices() {
        let i = inst(&[2, 3, 4, 5, 6]);
        assert!(matches!(
            cost_triplet(&i, 0, 2, 5),
            Err(ChainError::IndexOutOfRange { index: 5, len: 5 })
        ));
    }

    #[test]
    fn chain_cost_sums_the_triplet_costs() {
        let i = inst(&[2, 3, 4, 5, 6]);
        let o = ord("((M1 M2) M3) M4");
        // 24 + 40 + 60
        assert_eq!(chain_cost(&o, &i).unwrap(), BigUint::from(124u32));
    }

    #[test]
    fn all_ones_instance_costs_one_per_multiplication() {
        let i = inst(&[1, 1, 1, 1, 1]);
        for o in crate::ordering::enumerate_orderings(4).unwrap() {
            assert_eq!(chain_cost(&o, &i).unwrap(), BigUint::from(3u32));
        }
    }

    #[test]
    fn fan_out_cost_on_the_alpha_family() {
        // n = 5, alpha = 10, smallest dimension at h = 2: (n-1) * alpha^2.
        let i = inst(&[10, 10, 1, 10, 10, 10]);
        let e52 = crate::solvers::fan_out(5, 2).unwrap();
        assert_eq!(chain_cost(&e52, &i).unwrap(), BigUint::from(400u32));
    }

    #[test]
    fn chain_cost_rejects_mismatched_lengths() {
        let i = inst(&[2, 3, 4, 5, 6]);
        let o = ord("(M1 M2) M3");
        assert!(matches!(
            chain_cost(&o, &i),
            Err(ChainError::LengthMismatch {
                ordering: 3,
                instance: 4
            })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        /// phi(p, q, r) = phi(r, p, q) on random instances and index triples.
        #[test]
        fn rotational_symmetry(dims in proptest::collection::vec(1u64..=1000, 4..=10), sel in proptest::collection::vec(0usize..1000, 3)) {
            let i = Instance::from_u64s(&dims).unwrap();
            let len = dims.len();
            let (a, b, c) = (sel[0] % len, sel[1] % len, sel[2] % len);
            prop_assert_eq!(
                cost_triplet(&i, a, b, c).unwrap(),
                cost_triplet(&i, c, a, b).unwrap()
            );
        }
    }

    proptest! {
        /// Scaling every dimension by alpha scales every cost by alpha^3.
        #[test]
        fn cubic_scale_law(
            dims in proptest::collection::vec(1u64..=200, 3..=9),
            pick in 0usize..10_000,
            alpha_sel in 0usize..3,
        ) {
            let alpha = [2u64, 3, 10][alpha_sel];
            let i = Instance::from_u64s(&dims).unwrap();
            let n = i.n();
            let count = crate::ordering::enumerate_orderings(n).unwrap().count();
            let o = crate::ordering::enumerate_orderings(n).unwrap().nth(pick % count).unwrap();
            let base = chain_cost(&o, &i).unwrap();
            let scaled = i.scaled(&BigUint::from(alpha));
            let expected = base * BigUint::from(alpha).pow(3);
            prop_assert_eq!(chain_cost(&o, &scaled).unwrap(), expected);
        }
    }
}
