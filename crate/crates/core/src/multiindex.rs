//! Multi-indices `α = (α_1, …, α_n)`, their graded order and per-weight ranking.
//!
//! Within a fixed weight the order puts larger leading entries first, so the
//! weight-2 indices for two variables come out as `(2,0), (1,1), (0,2)`.
//! Every dense table in the crate is laid out in this order.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Number of variables and the inclusive total-degree cap shared by the values
/// of one computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeriesContext {
    nvars: usize,
    degree_cap: u32,
}

impl SeriesContext {
    pub fn new(nvars: usize, degree_cap: u32) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidContext("nvars must be at least 1".into()));
        }
        if degree_cap == 0 {
            return Err(Error::InvalidContext(
                "degree cap must be at least 1".into(),
            ));
        }
        Ok(SeriesContext { nvars, degree_cap })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    /// Same number of variables, different cap.
    pub fn with_degree(&self, degree_cap: u32) -> Result<Self> {
        SeriesContext::new(self.nvars, degree_cap)
    }

    pub(crate) fn ensure_same(&self, other: &SeriesContext) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left_vars: self.nvars,
                left_degree: self.degree_cap,
                right_vars: other.nvars,
                right_degree: other.degree_cap,
            })
        }
    }
}

/// An n-tuple of nonnegative integers.
///
/// `Ord` is the graded order described in the module docs; tuples of different
/// lengths are ordered by length last, use [`compare`] for a checked version.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn new(entries: impl Into<Vec<u32>>) -> Self {
        MultiIndex(SmallVec::from_vec(entries.into()))
    }

    pub fn from_slice(entries: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(entries))
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, nvars))
    }

    /// The unit index `e_j` (0-based `j`).
    pub fn unit(nvars: usize, j: usize) -> Self {
        let mut idx = MultiIndex::zero(nvars);
        idx.0[j] = 1;
        idx
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// `|α|`
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `β ≪ α`: every entry of `self` is at most the matching entry of `other`.
    pub fn leq_componentwise(&self, other: &MultiIndex) -> Result<bool> {
        check_len(self, other)?;
        Ok(self.0.iter().zip(&other.0).all(|(b, a)| b <= a))
    }

    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        check_len(self, other)?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `α − β`, defined only when `β ≪ α`.
    pub fn sub(&self, other: &MultiIndex) -> Result<MultiIndex> {
        if !other.leq_componentwise(self)? {
            return Err(not_dominated(other, self));
        }
        Ok(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Copy with entry `i` increased by one.
    pub fn incremented(&self, i: usize) -> MultiIndex {
        let mut out = self.clone();
        out.0[i] += 1;
        out
    }

    /// Copy with entry `i` decreased by one; `None` when that entry is zero.
    pub fn decremented(&self, i: usize) -> Option<MultiIndex> {
        if self.0[i] == 0 {
            return None;
        }
        let mut out = self.clone();
        out.0[i] -= 1;
        Some(out)
    }

    /// `α! = α_1!·…·α_n!`
    pub fn factorial(&self) -> BigUint {
        self.0
            .iter()
            .fold(BigUint::one(), |acc, &a| acc * factorial(a))
    }

    /// `α!/(β!(α−β)!)`; an error unless `β ≪ α`.
    pub fn binomial(&self, beta: &MultiIndex) -> Result<BigUint> {
        if !beta.leq_componentwise(self)? {
            return Err(not_dominated(beta, self));
        }
        Ok(self
            .0
            .iter()
            .zip(&beta.0)
            .fold(BigUint::one(), |acc, (&a, &b)| acc * binomial(a, b)))
    }

    /// 0-based position of `self` in [`enumerate_weight`] for its own weight.
    pub fn rank_in_weight(&self) -> usize {
        let mut remaining = self.weight();
        let mut rank = 0usize;
        let n = self.0.len();
        for (i, &a) in self.0.iter().enumerate() {
            if i + 1 == n {
                break;
            }
            // indices sharing the prefix but with a larger entry here come first
            for t in (a + 1)..=remaining {
                rank += count_weight(n - i - 1, remaining - t);
            }
            remaining -= a;
        }
        rank
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| {
                for (b, a) in self.0.iter().zip(&other.0) {
                    match a.cmp(b) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
            .then_with(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

fn check_len(a: &MultiIndex, b: &MultiIndex) -> Result<()> {
    if a.len() == b.len() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        })
    }
}

fn not_dominated(lower: &MultiIndex, upper: &MultiIndex) -> Error {
    Error::NotDominated {
        lower: lower.to_string(),
        upper: upper.to_string(),
    }
}

/// Checked comparison under the graded order.
pub fn compare(beta: &MultiIndex, alpha: &MultiIndex) -> Result<Ordering> {
    check_len(beta, alpha)?;
    Ok(beta.cmp(alpha))
}

/// Number of n-tuples of weight `p`, i.e. `C(p+n−1, n−1)`.
pub fn count_weight(nvars: usize, p: u32) -> usize {
    if nvars == 0 {
        return usize::from(p == 0);
    }
    let k = (nvars - 1) as u128;
    let top = p as u128 + k;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (top - i) / (i + 1);
    }
    acc as usize
}

/// All indices of weight `p` in ascending order.
pub fn enumerate_weight(ctx: &SeriesContext, p: u32) -> Vec<MultiIndex> {
    enumerate_weight_n(ctx.nvars(), p)
}

pub(crate) fn enumerate_weight_n(nvars: usize, p: u32) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(count_weight(nvars, p));
    let mut buf = vec![0u32; nvars];
    fill(&mut buf, 0, p, &mut out);
    out
}

fn fill(buf: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == buf.len() {
        buf[pos] = remaining;
        out.push(MultiIndex::from_slice(buf));
        return;
    }
    for a in (0..=remaining).rev() {
        buf[pos] = a;
        fill(buf, pos + 1, remaining - a, out);
    }
    buf[pos] = 0;
}

/// Inverse of [`MultiIndex::rank_in_weight`].
pub fn unrank(ctx: &SeriesContext, p: u32, rank: usize) -> Result<MultiIndex> {
    let n = ctx.nvars();
    let count = count_weight(n, p);
    if rank >= count {
        return Err(Error::RankOutOfRange {
            rank,
            weight: p,
            count,
        });
    }
    let mut entries = vec![0u32; n];
    let mut remaining = p;
    let mut r = rank;
    for (i, slot) in entries.iter_mut().enumerate().take(n - 1) {
        let mut a = remaining;
        loop {
            let block = count_weight(n - i - 1, remaining - a);
            if r < block {
                break;
            }
            r -= block;
            a -= 1;
        }
        *slot = a;
        remaining -= a;
    }
    entries[n - 1] = remaining;
    Ok(MultiIndex::new(entries))
}

pub fn factorial(k: u32) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// Scalar binomial `C(a, b)`, zero when `b > a`.
pub fn binomial(a: u32, b: u32) -> BigUint {
    if b > a {
        return BigUint::default();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    acc
}
