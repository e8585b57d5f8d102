//! Exact solvers, the fan-out family of essential orderings, the
//! best-essential approximation, and the Chin sufficient condition.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::cost::{cost_of_triplets, triplet_product, Cost};
use crate::error::{ChainError, Result};
use crate::instance::Instance;
use crate::ordering::{enumerate_orderings_with_limit, Node, Ordering, DEFAULT_ENUM_LIMIT};

/// Which algorithm produced a [`SolveResult`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveMethod {
    DynamicProgramming,
    BruteForce,
}

impl SolveMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveMethod::DynamicProgramming => "dynamic-programming",
            SolveMethod::BruteForce => "brute-force",
        }
    }
}

/// An optimal ordering together with its cost.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub cost: Cost,
    pub ordering: Ordering,
    pub method: SolveMethod,
}

/// Finds a minimum-cost ordering with the classical cubic-time dynamic
/// program. Ties between split points resolve to the smallest split index,
/// so the reconstructed ordering is deterministic.
#[allow(clippy::needless_range_loop)]
pub fn dp_solve(inst: &Instance) -> SolveResult {
    let n = inst.n();
    let k = inst.dims();
    // best[i][j]: cheapest cost of the partial product spanning dimensions
    // k_i..k_j, i.e. matrices M_{i+1}..M_j. Spans of length one cost zero.
    let mut best = vec![vec![BigUint::zero(); n + 1]; n + 1];
    let mut split = vec![vec![0usize; n + 1]; n + 1];
    for len in 2..=n {
        for i in 0..=(n - len) {
            let j = i + len;
            let mut chosen: Option<BigUint> = None;
            for s in (i + 1)..j {
                let cand = &best[i][s] + &best[s][j] + triplet_product(k, i, s, j);
                if chosen.as_ref().is_none_or(|c| cand < *c) {
                    chosen = Some(cand);
                    split[i][j] = s;
                }
            }
            best[i][j] = chosen.expect("span of length >= 2 has a split");
        }
    }

    fn rebuild(split: &[Vec<usize>], i: usize, j: usize) -> Node {
        if j - i == 1 {
            return Node::Leaf;
        }
        let s = split[i][j];
        Node::branch(rebuild(split, i, s), rebuild(split, s, j))
    }

    SolveResult {
        cost: std::mem::take(&mut best[0][n]),
        ordering: Ordering::from_root(rebuild(&split, 0, n)),
        method: SolveMethod::DynamicProgramming,
    }
}

/// Minimum over every enumerated ordering; the oracle counterpart of
/// [`dp_solve`]. Ties resolve to the earliest ordering in enumeration order.
pub fn brute_force_solve(inst: &Instance) -> Result<SolveResult> {
    brute_force_solve_with_limit(inst, DEFAULT_ENUM_LIMIT)
}

pub fn brute_force_solve_with_limit(inst: &Instance, limit: usize) -> Result<SolveResult> {
    let mut best: Option<(Cost, Ordering)> = None;
    for o in enumerate_orderings_with_limit(inst.n(), limit)? {
        let cost = cost_of_triplets(inst.dims(), &o.triplets());
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, o));
        }
    }
    let (cost, ordering) = best.expect("n >= 2 enumerates at least one ordering");
    Ok(SolveResult {
        cost,
        ordering,
        method: SolveMethod::BruteForce,
    })
}

/// The ordering that fans out from dimension `k_h`: the right-associated
/// prefix `M_1 (M_2 (.. (M_{h-1} M_h)..))` multiplied with the
/// left-associated suffix `((..(M_{h+1} M_{h+2})..) M_n)`. `h = 0` is the
/// left-to-right ordering, `h = n` the right-to-left one.
pub fn fan_out(n: usize, h: usize) -> Result<Ordering> {
    if n < 2 {
        return Err(ChainError::ChainTooShort(n));
    }
    if h > n {
        return Err(ChainError::FanOutIndexOutOfRange { h, n });
    }

    // Right-associated spine over `count` matrices.
    fn right_spine(count: usize) -> Node {
        let mut node = Node::Leaf;
        for _ in 1..count {
            node = Node::branch(Node::Leaf, node);
        }
        node
    }
    // Left-associated spine over `count` matrices.
    fn left_spine(count: usize) -> Node {
        let mut node = Node::Leaf;
        for _ in 1..count {
            node = Node::branch(node, Node::Leaf);
        }
        node
    }

    let root = match (h, n - h) {
        (0, _) => left_spine(n),
        (_, 0) => right_spine(n),
        (left, right) => Node::branch(right_spine(left), left_spine(right)),
    };
    Ok(Ordering::from_root(root))
}

/// All distinct fan-out orderings of a chain of length `n`, labelled by the
/// smallest `h` that produces each. `n - 1` members for `n <= 3`, otherwise
/// `n + 1`.
pub fn essential_set(n: usize) -> Result<Vec<(usize, Ordering)>> {
    if n < 2 {
        return Err(ChainError::ChainTooShort(n));
    }
    let mut members: Vec<(usize, Ordering)> = Vec::with_capacity(n + 1);
    for h in 0..=n {
        let o = fan_out(n, h)?;
        if !members.iter().any(|(_, seen)| *seen == o) {
            members.push((h, o));
        }
    }
    Ok(members)
}

/// The cheapest essential ordering on an instance.
#[derive(Clone, Debug)]
pub struct BestEssential {
    pub cost: Cost,
    pub ordering: Ordering,
    /// Fan-out index of the winner (smallest `h` on ties).
    pub h: usize,
}

/// Evaluates the whole essential set on `inst` and keeps the cheapest
/// member. Its cost is at most `T(E_{n,m})`, hence strictly below twice the
/// optimum.
pub fn best_essential(inst: &Instance) -> BestEssential {
    let members = essential_set(inst.n()).expect("instances have n >= 2");
    let mut best: Option<BestEssential> = None;
    for (h, ordering) in members {
        let cost = cost_of_triplets(inst.dims(), &ordering.triplets());
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(BestEssential { cost, ordering, h });
        }
    }
    best.expect("essential set is never empty")
}

/// The strict inequalities of Chin's condition for a middle dimension
/// `mid` with neighbours `prev`, `next` and chain minimum `min`:
/// `mid > prev`, `mid > next`, and `1/mid < 1/prev + 1/next - 1/min`.
///
/// The fraction comparison is done by integer cross-multiplication:
/// `prev*next*min + mid*prev*next < mid*next*min + mid*prev*min`.
pub(crate) fn chin_inequality(
    prev: &BigUint,
    mid: &BigUint,
    next: &BigUint,
    min: &BigUint,
) -> bool {
    if !(mid > prev && mid > next) {
        return false;
    }
    let lhs = prev * next * min + mid * prev * next;
    let rhs = mid * next * min + mid * prev * min;
    lhs < rhs
}

/// Chin's sufficient condition at position `i`, indices taken modulo `n+1`:
/// when true, the multiplication `M_i M_{i+1}` appears in every optimal
/// ordering. Evaluated in exact integer arithmetic, never floating point.
pub fn chin_condition(inst: &Instance, i: usize) -> Result<bool> {
    let dims = inst.dims();
    let len = dims.len();
    if i >= len {
        return Err(ChainError::IndexOutOfRange { index: i, len });
    }
    let prev = &dims[(i + len - 1) % len];
    let next = &dims[(i + 1) % len];
    let min = &dims[inst.min_index()];
    Ok(chin_inequality(prev, &dims[i], next, min))
}
