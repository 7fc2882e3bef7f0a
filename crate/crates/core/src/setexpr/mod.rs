//! Symbolic subsets of the naturals with total pointwise membership.

pub mod pred;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

pub use pred::{Arith, ArithOp, CmpOp, PredExpr};

/// Default cap on expression-tree nodes.
pub const DEFAULT_SIZE_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetError {
    #[error("expression has {size} nodes, limit is {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("sequence is not strictly increasing at position {0}")]
    NotIncreasing(usize),
    #[error("finite-sums base may not contain 0")]
    ZeroElement,
    #[error("subset sum overflows u64")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// A subset of ℕ given as an expression tree. Cloning is cheap.
#[derive(Clone)]
pub enum NatSet {
    /// Strictly increasing list.
    Explicit(Arc<[u64]>),
    /// `[k, ∞)`.
    Tail(u64),
    Predicate(Arc<PredExpr>),
    /// `{m | m + n ∈ inner}`.
    Shift(Arc<NatSet>, u64),
    Complement(Arc<NatSet>),
    Intersection(Arc<[NatSet]>),
    Union(Arc<[NatSet]>),
    FiniteSums(Arc<SumSet>),
    /// Additive closure of a finite base (all ℕ-combinations, including 0).
    Span(Arc<Span>),
    /// Membership decided by a memoized callback.
    Lazy(Arc<LazySet>),
}

pub struct SumSet {
    base: Vec<u64>,
    sums: Vec<u64>,
}

impl SumSet {
    pub fn base(&self) -> &[u64] {
        &self.base
    }

    pub fn sums(&self) -> &[u64] {
        &self.sums
    }
}

/// Numerical-semigroup style closure `{Σ cᵢ·bᵢ}` with membership via the
/// Apéry set of the smallest reduced generator.
pub struct Span {
    base: Vec<u64>,
    gcd: u64,
    modulus: u64,
    apery: Vec<u64>,
}

impl Span {
    fn new(base: Vec<u64>) -> Self {
        let gcd = base.iter().copied().fold(0, gcd);
        let reduced: Vec<u64> = base.iter().map(|b| b / gcd).collect();
        let modulus = reduced[0];
        let mut apery = vec![u64::MAX; modulus as usize];
        apery[0] = 0;
        // Dijkstra over residues mod `modulus`.
        let mut done = vec![false; modulus as usize];
        for _ in 0..modulus {
            let Some(r) = (0..modulus as usize)
                .filter(|&r| !done[r] && apery[r] != u64::MAX)
                .min_by_key(|&r| apery[r])
            else {
                break;
            };
            done[r] = true;
            for &g in &reduced[1..] {
                let next = apery[r].saturating_add(g);
                let slot = (next % modulus) as usize;
                if next < apery[slot] {
                    apery[slot] = next;
                }
            }
        }
        Span { base, gcd, modulus, apery }
    }

    pub fn base(&self) -> &[u64] {
        &self.base
    }

    pub fn contains(&self, n: u64) -> bool {
        if !n.is_multiple_of(self.gcd) {
            return false;
        }
        let q = n / self.gcd;
        q >= self.apery[(q % self.modulus) as usize]
    }
}

pub struct LazySet {
    label: String,
    test: Box<dyn Fn(u64) -> bool + Send + Sync>,
    memo: Mutex<HashMap<u64, bool>>,
}

impl LazySet {
    pub fn label(&self) -> &str {
        &self.label
    }

    fn contains(&self, n: u64) -> bool {
        if let Some(&hit) = self.memo.lock().expect("memo poisoned").get(&n) {
            return hit;
        }
        // The lock is not held across the callback; it may consult other lazy sets.
        let value = (self.test)(n);
        self.memo.lock().expect("memo poisoned").insert(n, value);
        value
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_increasing(xs: &[u64]) -> Result<(), SetError> {
    match xs.windows(2).position(|w| w[0] >= w[1]) {
        Some(i) => Err(SetError::NotIncreasing(i + 1)),
        None => Ok(()),
    }
}

fn check_sum_base(base: &[u64]) -> Result<(), SetError> {
    check_increasing(base)?;
    if base.first() == Some(&0) {
        return Err(SetError::ZeroElement);
    }
    Ok(())
}

/// All subset sums of `base`, sorted and deduplicated, 0 included.
pub fn finite_sums(base: &[u64]) -> Result<Vec<u64>, SetError> {
    check_sum_base(base)?;
    let mut sums = vec![0u64];
    for &b in base {
        let shifted = sums
            .iter()
            .map(|&s| s.checked_add(b).ok_or(SetError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        sums.extend(shifted);
    }
    sums.sort_unstable();
    sums.dedup();
    Ok(sums)
}

/// `finite_sums(base)` without 0.
pub fn nonempty_sums(base: &[u64]) -> Result<Vec<u64>, SetError> {
    let mut sums = finite_sums(base)?;
    sums.remove(0);
    Ok(sums)
}

impl NatSet {
    pub fn naturals() -> Self {
        NatSet::Tail(0)
    }

    pub fn empty() -> Self {
        NatSet::Explicit(Arc::from(Vec::new()))
    }

    pub fn tail(k: u64) -> Self {
        NatSet::Tail(k)
    }

    /// Builds an explicit finite set from a strictly increasing list.
    pub fn explicit(elems: Vec<u64>) -> Result<Self, SetError> {
        check_increasing(&elems)?;
        Ok(NatSet::Explicit(Arc::from(elems)))
    }

    /// Builds an explicit finite set from arbitrary elements.
    pub fn from_elements(mut elems: Vec<u64>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        NatSet::Explicit(Arc::from(elems))
    }

    pub fn predicate(expr: PredExpr) -> Self {
        NatSet::Predicate(Arc::new(expr))
    }

    /// `{n | n ≡ r (mod m)}`; `m` must be nonzero.
    pub fn residue(r: u64, m: u64) -> Self {
        assert!(m > 0, "modulus must be nonzero");
        NatSet::predicate(PredExpr::Cmp(
            CmpOp::Eq,
            Arith::Bin(ArithOp::Rem, Box::new(Arith::Var), Box::new(Arith::Lit(m))),
            Arith::Lit(r % m),
        ))
    }

    pub fn evens() -> Self {
        Self::residue(0, 2)
    }

    pub fn odds() -> Self {
        Self::residue(1, 2)
    }

    pub fn finite_sums_of(base: &[u64]) -> Result<Self, SetError> {
        let sums = finite_sums(base)?;
        Ok(NatSet::FiniteSums(Arc::new(SumSet { base: base.to_vec(), sums })))
    }

    /// Additive closure of a nonempty, strictly increasing base of positive naturals.
    pub fn span_of(base: &[u64]) -> Result<Self, SetError> {
        check_sum_base(base)?;
        if base.is_empty() {
            return NatSet::explicit(vec![0]);
        }
        Ok(NatSet::Span(Arc::new(Span::new(base.to_vec()))))
    }

    pub fn lazy(
        label: impl Into<String>,
        test: impl Fn(u64) -> bool + Send + Sync + 'static,
    ) -> Self {
        NatSet::Lazy(Arc::new(LazySet {
            label: label.into(),
            test: Box::new(test),
            memo: Mutex::new(HashMap::new()),
        }))
    }

    pub fn member(&self, n: u64) -> bool {
        match self {
            NatSet::Explicit(xs) => xs.binary_search(&n).is_ok(),
            NatSet::Tail(k) => n >= *k,
            NatSet::Predicate(p) => p.eval(n),
            NatSet::Shift(inner, k) => match n.checked_add(*k) {
                Some(m) => inner.member(m),
                None => false,
            },
            NatSet::Complement(inner) => !inner.member(n),
            NatSet::Intersection(xs) => xs.iter().all(|x| x.member(n)),
            NatSet::Union(xs) => xs.iter().any(|x| x.member(n)),
            NatSet::FiniteSums(s) => s.sums.binary_search(&n).is_ok(),
            NatSet::Span(s) => s.contains(n),
            NatSet::Lazy(l) => l.contains(n),
        }
    }

    /// Elements of `self ∩ [0, bound)` in increasing order.
    pub fn enumerate(&self, bound: u64) -> Vec<u64> {
        match self {
            NatSet::Explicit(xs) => xs.iter().copied().take_while(|&x| x < bound).collect(),
            NatSet::FiniteSums(s) => s.sums.iter().copied().take_while(|&x| x < bound).collect(),
            _ => (0..bound).filter(|&n| self.member(n)).collect(),
        }
    }

    /// `{m | m + n ∈ self}`.
    pub fn shift(&self, n: u64) -> NatSet {
        if n == 0 {
            return self.clone();
        }
        match self {
            NatSet::Tail(k) => NatSet::Tail(k.saturating_sub(n)),
            NatSet::Shift(inner, k) => match k.checked_add(n) {
                Some(total) => NatSet::Shift(inner.clone(), total),
                None => NatSet::Shift(Arc::new(self.clone()), n),
            },
            _ => NatSet::Shift(Arc::new(self.clone()), n),
        }
    }

    pub fn complement(&self) -> NatSet {
        match self {
            NatSet::Complement(inner) => (**inner).clone(),
            _ => NatSet::Complement(Arc::new(self.clone())),
        }
    }

    /// Intersection; the empty list denotes ℕ.
    pub fn intersect(sets: Vec<NatSet>) -> NatSet {
        match sets.len() {
            0 => NatSet::naturals(),
            1 => sets.into_iter().next().expect("one element"),
            _ => NatSet::Intersection(Arc::from(sets)),
        }
    }

    /// Union; the empty list denotes ∅.
    pub fn union(sets: Vec<NatSet>) -> NatSet {
        match sets.len() {
            0 => NatSet::empty(),
            1 => sets.into_iter().next().expect("one element"),
            _ => NatSet::Union(Arc::from(sets)),
        }
    }

    pub fn signed(&self, sign: Sign) -> NatSet {
        match sign {
            Sign::Plus => self.clone(),
            Sign::Minus => self.complement(),
        }
    }

    /// Number of nodes in the expression tree.
    pub fn size(&self) -> usize {
        match self {
            NatSet::Explicit(_)
            | NatSet::Tail(_)
            | NatSet::FiniteSums(_)
            | NatSet::Span(_)
            | NatSet::Lazy(_) => 1,
            NatSet::Predicate(p) => p.size(),
            NatSet::Shift(inner, _) | NatSet::Complement(inner) => 1 + inner.size(),
            NatSet::Intersection(xs) | NatSet::Union(xs) => {
                1 + xs.iter().map(NatSet::size).sum::<usize>()
            }
        }
    }

    pub fn check_size(&self, limit: usize) -> Result<(), SetError> {
        let size = self.size();
        if size > limit {
            Err(SetError::TooLarge { size, limit })
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NatSet::Explicit(xs) => write!(f, "{{{}}}", join(xs)),
            NatSet::Tail(k) => write!(f, "[{k},inf)"),
            NatSet::Predicate(p) => write!(f, "{{n | {p}}}"),
            NatSet::Shift(inner, k) => write!(f, "({inner} - {k})"),
            NatSet::Complement(inner) => write!(f, "~{inner}"),
            NatSet::Intersection(xs) | NatSet::Union(xs) => {
                let sep = if matches!(self, NatSet::Intersection(_)) { " & " } else { " | " };
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(sep))
            }
            NatSet::FiniteSums(s) => write!(f, "FS({})", join(&s.base)),
            NatSet::Span(s) => write!(f, "span({})", join(&s.base)),
            NatSet::Lazy(l) => write!(f, "<{}>", l.label),
        }
    }
}
