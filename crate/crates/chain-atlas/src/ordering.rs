//! Parenthesisations of a matrix chain: the tree representation, the index
//! triplet form, exhaustive enumeration, and the text format.

use std::fmt;
use std::str::FromStr;

use crate::error::{ChainError, Result};

/// Default cap on the chain length accepted by the exhaustive enumerators.
/// `C_14 = 2,674,440` orderings is still comfortable; anything above grows
/// too fast to enumerate by accident.
pub const DEFAULT_ENUM_LIMIT: usize = 15;

/// One index triplet `(a, b, c)`: the multiplication of the partial products
/// spanning matrices `a+1..=b` and `b+1..=c`, costing `k_a * k_b * k_c`.
pub type Triplet = (usize, usize, usize);

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) enum Node {
    Leaf,
    Branch(Box<Node>, Box<Node>),
}

impl Node {
    pub(crate) fn branch(left: Node, right: Node) -> Node {
        Node::Branch(Box::new(left), Box::new(right))
    }

    fn leaves(&self) -> usize {
        match self {
            Node::Leaf => 1,
            Node::Branch(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// Collects the triplet of every internal node; returns the span size.
    /// A node covering matrices `a+1..=c` split after matrix `b` contributes
    /// `(a, b, c)`.
    fn collect_triplets(&self, lo: usize, out: &mut Vec<Triplet>) -> usize {
        match self {
            Node::Leaf => 1,
            Node::Branch(l, r) => {
                let left = l.collect_triplets(lo, out);
                let right = r.collect_triplets(lo + left, out);
                out.push((lo, lo + left, lo + left + right));
                left + right
            }
        }
    }

    fn render(&self, top: bool, next_leaf: &mut usize, out: &mut String) {
        match self {
            Node::Leaf => {
                out.push('M');
                out.push_str(&next_leaf.to_string());
                *next_leaf += 1;
            }
            Node::Branch(l, r) => {
                if !top {
                    out.push('(');
                }
                l.render(false, next_leaf, out);
                out.push(' ');
                r.render(false, next_leaf, out);
                if !top {
                    out.push(')');
                }
            }
        }
    }
}

/// One parenthesisation of a chain of `n >= 2` matrices: a full binary tree
/// whose leaves are the matrices `M_1..M_n` in left-to-right order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ordering {
    root: Node,
    n: usize,
}

impl Ordering {
    pub(crate) fn from_root(root: Node) -> Ordering {
        let n = root.leaves();
        debug_assert!(n >= 2, "an ordering spans at least two matrices");
        Ordering { root, n }
    }

    /// Chain length `n`: the number of matrices this ordering multiplies.
    pub fn chain_length(&self) -> usize {
        self.n
    }

    /// The `n-1` index triplets of this ordering's cost function.
    pub fn triplets(&self) -> TripletSet {
        let mut items = Vec::with_capacity(self.n - 1);
        self.root.collect_triplets(0, &mut items);
        items.sort_unstable();
        TripletSet { items }
    }

    /// Canonical text form with the outermost parentheses omitted,
    /// e.g. `(M1 M2) M3`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut next_leaf = 1;
        self.root.render(true, &mut next_leaf, &mut out);
        out
    }

    pub fn parse(text: &str) -> Result<Ordering> {
        text.parse()
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordering({})", self.render())
    }
}

impl FromStr for Ordering {
    type Err = ChainError;

    fn from_str(text: &str) -> Result<Self> {
        parse_ordering(text)
    }
}

/// The set of index triplets identifying an ordering's cost function,
/// stored sorted ascending.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TripletSet {
    items: Vec<Triplet>,
}

impl TripletSet {
    /// Validates and normalises a raw triplet collection: `n-1` triplets
    /// with `0 <= a < b < c <= n`, every interior index `1..=n-1` occurring
    /// exactly once as a middle element, and exactly one triplet `(0, b, n)`.
    pub fn new(mut items: Vec<Triplet>) -> Result<TripletSet> {
        if items.is_empty() {
            return Err(ChainError::InvalidTripletSet(
                "a triplet set holds at least one triplet".into(),
            ));
        }
        items.sort_unstable();
        items.dedup();
        let n = items.len() + 1;
        let mut middle_seen = vec![false; n + 1];
        let mut full_span = 0usize;
        for &(a, b, c) in &items {
            if !(a < b && b < c && c <= n) {
                return Err(ChainError::InvalidTripletSet(format!(
                    "triplet ({a},{b},{c}) is not ascending within 0..={n}"
                )));
            }
            if middle_seen[b] {
                return Err(ChainError::InvalidTripletSet(format!(
                    "index {b} occurs twice as a middle element"
                )));
            }
            middle_seen[b] = true;
            if a == 0 && c == n {
                full_span += 1;
            }
        }
        if full_span != 1 {
            return Err(ChainError::InvalidTripletSet(format!(
                "expected exactly one triplet (0, b, {n}), found {full_span}"
            )));
        }
        // n-1 distinct middles drawn from 1..=n-1 cover each interior index once.
        Ok(TripletSet { items })
    }

    /// Chain length `n` this set belongs to.
    pub fn n(&self) -> usize {
        self.items.len() + 1
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, triplet: &Triplet) -> bool {
        self.items.binary_search(triplet).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triplet> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[Triplet] {
        &self.items
    }
}

impl fmt::Display for TripletSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b, c)) in self.items.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({a},{b},{c})")?;
        }
        write!(f, "}}")
    }
}

/// Enumerates every ordering of a chain of `n` matrices under the default
/// enumeration limit.
pub fn enumerate_orderings(n: usize) -> Result<OrderingEnumeration> {
    enumerate_orderings_with_limit(n, DEFAULT_ENUM_LIMIT)
}

/// Enumerates every ordering of a chain of `n` matrices, lazily and in
/// canonical order: outermost split position ascending, then all shapes of
/// the left subtree, then all shapes of the right.
pub fn enumerate_orderings_with_limit(n: usize, limit: usize) -> Result<OrderingEnumeration> {
    if n < 2 {
        return Err(ChainError::ChainTooShort(n));
    }
    if n > limit {
        return Err(ChainError::EnumerationLimitExceeded { n, limit });
    }
    Ok(OrderingEnumeration {
        n,
        choices: Vec::new(),
        cursor: 0,
        started: false,
        exhausted: false,
    })
}

/// Lazy enumeration of all `C_{n-1}` orderings.
///
/// Works as an odometer over the preorder sequence of split choices: each
/// internal node of the current tree records `(split, max)`, and `next`
/// advances the deepest-rightmost choice that can still move, regenerating
/// everything after it with minimal splits.
pub struct OrderingEnumeration {
    n: usize,
    choices: Vec<(usize, usize)>,
    cursor: usize,
    started: bool,
    exhausted: bool,
}

impl OrderingEnumeration {
    fn build_span(&mut self, size: usize) -> Node {
        if size == 1 {
            return Node::Leaf;
        }
        let split = if self.cursor < self.choices.len() {
            self.choices[self.cursor].0
        } else {
            self.choices.push((1, size - 1));
            1
        };
        self.cursor += 1;
        let left = self.build_span(split);
        let right = self.build_span(size - split);
        Node::branch(left, right)
    }

    fn rebuild(&mut self) -> Ordering {
        self.cursor = 0;
        let root = self.build_span(self.n);
        Ordering::from_root(root)
    }
}

impl Iterator for OrderingEnumeration {
    type Item = Ordering;

    fn next(&mut self) -> Option<Ordering> {
        if self.exhausted {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.rebuild());
        }
        // Advance the deepest choice that has room; everything after it
        // restarts from the smallest split.
        let movable = self.choices.iter().rposition(|&(split, max)| split < max);
        match movable {
            Some(i) => {
                self.choices[i].0 += 1;
                self.choices.truncate(i + 1);
                Some(self.rebuild())
            }
            None => {
                self.exhausted = true;
                None
            }
        }
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Leaf(usize),
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => {
                tokens.push(Token::Open);
                i += 1;
            }
            b')' => {
                tokens.push(Token::Close);
                i += 1;
            }
            b'M' => {
                let start = i + 1;
                let mut end = start;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                if end == start {
                    return Err(ChainError::Parse(format!(
                        "expected a matrix index after 'M' at byte {i}"
                    )));
                }
                if end < bytes.len() && bytes[end].is_ascii_alphanumeric() {
                    return Err(ChainError::Parse(format!(
                        "matrix references must be separated at byte {end}"
                    )));
                }
                let index: usize = text[start..end].parse().map_err(|_| {
                    ChainError::Parse(format!("matrix index too large at byte {start}"))
                })?;
                tokens.push(Token::Leaf(index));
                i = end;
            }
            c if c.is_ascii_whitespace() => i += 1,
            c => {
                return Err(ChainError::Parse(format!(
                    "unexpected character '{}' at byte {i}",
                    c as char
                )));
            }
        }
    }
    Ok(tokens)
}

/// Parses the ordering text format: leaves `M1..Mn` in ascending order,
/// binary groups in parentheses, outermost pair optional, e.g.
/// `((M1 M2) M3) M4` or `(M1 M2) M3`.
fn parse_ordering(text: &str) -> Result<Ordering> {
    fn push(frame: &mut Vec<Node>, node: Node) -> Result<()> {
        if frame.len() == 2 {
            return Err(ChainError::Parse(
                "groups must contain exactly two factors".into(),
            ));
        }
        frame.push(node);
        Ok(())
    }

    let tokens = lex(text)?;
    let mut stack: Vec<Vec<Node>> = Vec::new();
    let mut current: Vec<Node> = Vec::new();
    let mut next_leaf = 1usize;
    for token in tokens {
        match token {
            Token::Open => {
                stack.push(std::mem::take(&mut current));
            }
            Token::Leaf(index) => {
                if index != next_leaf {
                    return Err(ChainError::Parse(format!(
                        "matrices must read M1..Mn left to right; found M{index} where M{next_leaf} was expected"
                    )));
                }
                next_leaf += 1;
                push(&mut current, Node::Leaf)?;
            }
            Token::Close => {
                if current.len() != 2 {
                    return Err(ChainError::Parse(
                        "groups must contain exactly two factors".into(),
                    ));
                }
                let right = current.pop().unwrap();
                let left = current.pop().unwrap();
                let group = Node::branch(left, right);
                current = stack
                    .pop()
                    .ok_or_else(|| ChainError::Parse("unmatched ')'".into()))?;
                push(&mut current, group)?;
            }
        }
    }
    if !stack.is_empty() {
        return Err(ChainError::Parse("unmatched '('".into()));
    }
    let root = match current.len() {
        0 => return Err(ChainError::Parse("empty ordering".into())),
        1 => match current.pop().unwrap() {
            Node::Leaf => {
                return Err(ChainError::Parse(
                    "an ordering needs at least two matrices".into(),
                ))
            }
            branch => branch,
        },
        2 => {
            let right = current.pop().unwrap();
            let left = current.pop().unwrap();
            Node::branch(left, right)
        }
        _ => unreachable!("push() caps frames at two factors"),
    };
    Ok(Ordering::from_root(root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::One;

    fn ord(text: &str) -> Ordering {
        Ordering::parse(text).unwrap()
    }

    /// Catalan number by the factorial formula, independent of the
    /// enumeration logic under test.
    fn catalan_by_factorials(n: usize) -> BigUint {
        let factorial = |k: usize| -> BigUint {
            let mut acc = BigUint::one();
            for i in 2..=k {
                acc *= BigUint::from(i);
            }
            acc
        };
        factorial(2 * n - 2) / (factorial(n) * factorial(n - 1))
    }

    #[test]
    fn triplets_of_the_left_deep_chain() {
        let t = ord("((M1 M2) M3) M4").triplets();
        assert_eq!(t.as_slice(), &[(0, 1, 2), (0, 2, 3), (0, 3, 4)]);
    }

    #[test]
    fn triplets_of_a_single_multiplication() {
        let t = ord("M1 M2").triplets();
        assert_eq!(t.as_slice(), &[(0, 1, 2)]);
    }

    #[test]
    fn triplets_of_the_balanced_tree() {
        let t = ord("(M1 M2) (M3 M4)").triplets();
        assert_eq!(t.as_slice(), &[(0, 1, 2), (0, 2, 4), (2, 3, 4)]);
        assert!(t.contains(&(2, 3, 4)));
        assert!(!t.contains(&(1, 2, 3)));
    }

    #[test]
    fn enumeration_counts_match_the_catalan_formula() {
        for n in 2..=10 {
            let count = enumerate_orderings(n).unwrap().count();
            assert_eq!(
                BigUint::from(count),
                catalan_by_factorials(n),
                "wrong count for n={n}"
            );
        }
    }

    #[test]
    fn enumeration_order_is_split_ascending_then_left_then_right() {
        let texts: Vec<String> = enumerate_orderings(4)
            .unwrap()
            .map(|o| o.render())
            .collect();
        assert_eq!(
            texts,
            vec![
                "M1 (M2 (M3 M4))",
                "M1 ((M2 M3) M4)",
                "(M1 M2) (M3 M4)",
                "(M1 (M2 M3)) M4",
                "((M1 M2) M3) M4",
            ]
        );
    }

    #[test]
    fn enumeration_rejects_bad_lengths() {
        assert!(matches!(
            enumerate_orderings(1),
            Err(ChainError::ChainTooShort(1))
        ));
        assert!(matches!(
            enumerate_orderings(16),
            Err(ChainError::EnumerationLimitExceeded { n: 16, limit: 15 })
        ));
        assert!(enumerate_orderings_with_limit(16, 16).is_ok());
        assert!(matches!(
            enumerate_orderings_with_limit(6, 5),
            Err(ChainError::EnumerationLimitExceeded { n: 6, limit: 5 })
        ));
    }

    #[test]
    fn every_enumerated_triplet_set_is_valid() {
        for n in 2..=8 {
            for o in enumerate_orderings(n).unwrap() {
                let raw = o.triplets().as_slice().to_vec();
                let set =
                    TripletSet::new(raw).expect("enumerated ordering has a valid triplet set");
                assert_eq!(set.len(), n - 1);
                assert_eq!(set.n(), n);
            }
        }
    }

    #[test]
    fn parse_render_round_trip_on_every_ordering_up_to_n8() {
        for n in 2..=8 {
            for o in enumerate_orderings(n).unwrap() {
                let text = o.render();
                assert_eq!(
                    Ordering::parse(&text).unwrap(),
                    o,
                    "round trip failed on {text}"
                );
            }
        }
    }

    #[test]
    fn parse_accepts_redundant_outer_parentheses() {
        assert_eq!(ord("(M1 M2)"), ord("M1 M2"));
        assert_eq!(ord("(((M1 M2) M3) M4)"), ord("((M1 M2) M3) M4"));
    }

    #[test]
    fn parse_rejects_misordered_leaves() {
        assert!(Ordering::parse("(M1 (M3 M2))").is_err());
        assert!(Ordering::parse("M2 M1").is_err());
        assert!(Ordering::parse("M0 M1").is_err());
        assert!(Ordering::parse("M1 M3").is_err());
    }

    #[test]
    fn parse_rejects_structural_garbage() {
        assert!(Ordering::parse("").is_err());
        assert!(Ordering::parse("M1").is_err());
        assert!(Ordering::parse("M1 M2 M3").is_err());
        assert!(Ordering::parse("(M1 M2 M3) M4").is_err());
        assert!(Ordering::parse("(M1 M2").is_err());
        assert!(Ordering::parse("M1 M2)").is_err());
        assert!(Ordering::parse("()").is_err());
        assert!(Ordering::parse("(M1) M2").is_err());
        assert!(Ordering::parse("M1M2").is_err());
        assert!(Ordering::parse("M1 * M2").is_err());
        assert!(Ordering::parse("M M2").is_err());
    }

    #[test]
    fn triplet_set_validation_catches_broken_sets() {
        assert!(TripletSet::new(vec![]).is_err());
        // duplicate middle element
        assert!(TripletSet::new(vec![(0, 1, 2), (1, 1, 3)]).is_err());
        // no full-span triplet
        assert!(TripletSet::new(vec![(0, 1, 2), (1, 2, 3)]).is_err());
        // not ascending
        assert!(TripletSet::new(vec![(2, 1, 3), (0, 2, 3)]).is_err());
        // a valid one for n=3
        let set = TripletSet::new(vec![(0, 2, 3), (0, 1, 2)]).unwrap();
        assert_eq!(set.as_slice(), &[(0, 1, 2), (0, 2, 3)]);
    }

    #[test]
    fn display_forms() {
        let o = ord("(M1 M2) (M3 M4)");
        assert_eq!(o.to_string(), "(M1 M2) (M3 M4)");
        assert_eq!(o.triplets().to_string(), "{(0,1,2), (0,2,4), (2,3,4)}");
        assert_eq!(format!("{o:?}"), "Ordering((M1 M2) (M3 M4))");
    }
}
