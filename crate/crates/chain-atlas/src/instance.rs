//! Problem instances: the dimension tuple of a matrix chain.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{ChainError, Result};

/// One problem instance: the dimensions `k_0, ..., k_n` of a chain of `n`
/// matrices, where matrix `M_i` has size `k_{i-1} x k_i`.
///
/// Dimensions are unbounded positive integers so that synthesized witness
/// instances, whose values grow roughly like `2^n` times a large lcm, never
/// overflow.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    dims: Vec<BigUint>,
}

impl Instance {
    /// Builds an instance from its dimension tuple.
    ///
    /// Rejects tuples shorter than 3 entries (chain length below 2) and any
    /// zero dimension.
    pub fn new(dims: Vec<BigUint>) -> Result<Self> {
        if dims.len() < 3 {
            return Err(ChainError::InstanceTooShort(dims.len()));
        }
        for (i, d) in dims.iter().enumerate() {
            if d.is_zero() {
                return Err(ChainError::ZeroDimension(i));
            }
        }
        Ok(Instance { dims })
    }

    /// Convenience constructor from machine integers.
    pub fn from_u64s(dims: &[u64]) -> Result<Self> {
        Self::new(dims.iter().map(|&d| BigUint::from(d)).collect())
    }

    /// Chain length `n`: the number of matrices in the product.
    pub fn n(&self) -> usize {
        self.dims.len() - 1
    }

    /// The dimension tuple `k_0, ..., k_n`.
    pub fn dims(&self) -> &[BigUint] {
        &self.dims
    }

    /// Index `m` of the smallest dimension. Ties resolve to the smallest
    /// index; every consumer of `m` accepts any minimiser.
    pub fn min_index(&self) -> usize {
        let mut m = 0;
        for (i, d) in self.dims.iter().enumerate().skip(1) {
            if *d < self.dims[m] {
                m = i;
            }
        }
        m
    }

    /// The instance with every dimension multiplied by `alpha`.
    ///
    /// `alpha` must be positive, otherwise the result would not be a valid
    /// instance.
    pub fn scaled(&self, alpha: &BigUint) -> Instance {
        assert!(!alpha.is_zero(), "scale factor must be positive");
        Instance {
            dims: self.dims.iter().map(|d| d * alpha).collect(),
        }
    }
}

impl FromStr for Instance {
    type Err = ChainError;

    /// Parses a comma- or whitespace-separated list of positive integers,
    /// e.g. `10,100,5,50` or `10 100 5 50`.
    fn from_str(text: &str) -> Result<Self> {
        let mut dims = Vec::new();
        for token in text.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let value = BigUint::from_str(token)
                .map_err(|_| ChainError::Parse(format!("invalid dimension '{token}'")))?;
            dims.push(value);
        }
        Instance::new(dims)
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for d in &self.dims {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_tuples() {
        assert!(matches!(
            Instance::from_u64s(&[10, 20]),
            Err(ChainError::InstanceTooShort(2))
        ));
        assert!(matches!(
            Instance::from_u64s(&[]),
            Err(ChainError::InstanceTooShort(0))
        ));
    }

    #[test]
    fn rejects_zero_dimensions() {
        assert!(matches!(
            Instance::from_u64s(&[10, 0, 5, 50]),
            Err(ChainError::ZeroDimension(1))
        ));
    }

    #[test]
    fn chain_length_is_len_minus_one() {
        let inst = Instance::from_u64s(&[10, 100, 5, 50]).unwrap();
        assert_eq!(inst.n(), 3);
    }

    #[test]
    fn min_index_breaks_ties_to_the_smallest_index() {
        let inst = Instance::from_u64s(&[10, 100, 5, 50]).unwrap();
        assert_eq!(inst.min_index(), 2);
        let tied = Instance::from_u64s(&[3, 1, 7, 1, 3]).unwrap();
        assert_eq!(tied.min_index(), 1);
        let all_equal = Instance::from_u64s(&[2, 2, 2, 2]).unwrap();
        assert_eq!(all_equal.min_index(), 0);
    }

    #[test]
    fn parses_commas_whitespace_and_mixtures() {
        let a: Instance = "10,100,5,50".parse().unwrap();
        let b: Instance = "10 100 5 50".parse().unwrap();
        let c: Instance = "10, 100,\t5,  50".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.to_string(), "10,100,5,50");
    }

    #[test]
    fn parses_values_beyond_machine_width() {
        let text = "770,154000000000000000000000000000,840,1001,770";
        let inst: Instance = text.parse().unwrap();
        assert_eq!(inst.to_string(), text);
    }

    #[test]
    fn rejects_garbage_tokens() {
        assert!("10,abc,5,50".parse::<Instance>().is_err());
        assert!("10,-4,5,50".parse::<Instance>().is_err());
        assert!("".parse::<Instance>().is_err());
    }

    #[test]
    fn scaling_multiplies_every_dimension() {
        let inst = Instance::from_u64s(&[2, 3, 4, 5]).unwrap();
        let scaled = inst.scaled(&BigUint::from(10u32));
        assert_eq!(scaled, Instance::from_u64s(&[20, 30, 40, 50]).unwrap());
    }
}
