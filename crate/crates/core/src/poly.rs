//! Sparse multivariate polynomial kernel shared by the truncated series maps
//! and the untruncated polynomial maps.

use std::collections::{BTreeMap, HashMap};

use crate::coeff::Rational;
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;

/// Coefficients keyed by exponent, iterated in the graded order.
pub type Terms = BTreeMap<MultiIndex, Rational>;

/// Bounds on untruncated arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_terms: usize,
    pub max_degree: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_terms: 200_000,
            max_degree: 4096,
        }
    }
}

/// How products are bounded: truncated at a degree, or exact within limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Bound {
    Truncate(u32),
    Exact(Limits),
}

impl Bound {
    fn degree_cap(&self) -> Option<u32> {
        match self {
            Bound::Truncate(d) => Some(*d),
            Bound::Exact(_) => None,
        }
    }

    fn check(&self, terms: &Terms) -> Result<()> {
        if let Bound::Exact(limits) = self {
            if terms.len() > limits.max_terms {
                return Err(Error::ResourceCap(format!(
                    "{} terms exceeds the cap of {}",
                    terms.len(),
                    limits.max_terms
                )));
            }
            if let Some(d) = degree(terms) {
                if d > limits.max_degree {
                    return Err(Error::ResourceCap(format!(
                        "degree {d} exceeds the cap of {}",
                        limits.max_degree
                    )));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn degree(terms: &Terms) -> Option<u32> {
    // graded order: the last key has the largest weight
    terms.keys().next_back().map(MultiIndex::weight)
}

pub(crate) fn low_degree(terms: &Terms) -> Option<u32> {
    terms.keys().next().map(MultiIndex::weight)
}

pub(crate) fn constant(nvars: usize, c: Rational) -> Terms {
    let mut t = Terms::new();
    if !c.is_zero() {
        t.insert(MultiIndex::zero(nvars), c);
    }
    t
}

pub(crate) fn add_scaled(acc: &mut Terms, other: &Terms, scale: &Rational) {
    if scale.is_zero() {
        return;
    }
    for (idx, c) in other {
        add_term(acc, idx, c * scale);
    }
}

pub(crate) fn add_term(acc: &mut Terms, idx: &MultiIndex, c: Rational) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(idx) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                acc.remove(idx);
            }
        }
        None => {
            acc.insert(idx.clone(), c);
        }
    }
}

pub(crate) fn sub(a: &Terms, b: &Terms) -> Terms {
    let mut out = a.clone();
    add_scaled(&mut out, b, &Rational::from(-1));
    out
}

pub(crate) fn truncate(terms: &Terms, cap: u32) -> Terms {
    terms
        .iter()
        .filter(|(k, _)| k.weight() <= cap)
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

pub(crate) fn mul(a: &Terms, b: &Terms, bound: Bound) -> Result<Terms> {
    let cap = bound.degree_cap();
    let mut acc: HashMap<MultiIndex, Rational> = HashMap::new();
    for (ia, ca) in a {
        let wa = ia.weight();
        if cap.is_some_and(|d| wa > d) {
            break;
        }
        for (ib, cb) in b {
            if cap.is_some_and(|d| wa + ib.weight() > d) {
                break;
            }
            let prod = ca * cb;
            match acc.entry(ia.add_unchecked(ib)) {
                std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += prod,
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(prod);
                }
            }
        }
    }
    let out: Terms = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    bound.check(&out)?;
    Ok(out)
}

/// Formal partial derivative by variable `var`.
pub(crate) fn derivative(terms: &Terms, var: usize) -> Terms {
    terms
        .iter()
        .filter_map(|(idx, c)| {
            let e = idx.get(var);
            idx.decremented(var)
                .map(|lower| (lower, c * &Rational::from(e as i64)))
        })
        .collect()
}

/// Substitutes a fixed inner map into many outer polynomials, caching the
/// monomials `inner^α` by exponent.
pub(crate) struct Substitution<'a> {
    nvars: usize,
    inner: &'a [Terms],
    bound: Bound,
    powers: HashMap<MultiIndex, Terms>,
}

impl<'a> Substitution<'a> {
    pub(crate) fn new(nvars: usize, inner: &'a [Terms], bound: Bound) -> Self {
        let mut powers = HashMap::new();
        powers.insert(MultiIndex::zero(nvars), constant(nvars, Rational::one()));
        Substitution {
            nvars,
            inner,
            bound,
            powers,
        }
    }

    fn ensure_power(&mut self, alpha: &MultiIndex) -> Result<()> {
        if self.powers.contains_key(alpha) {
            return Ok(());
        }
        let j = (0..self.nvars)
            .rev()
            .find(|&j| alpha.get(j) > 0)
            .expect("zero index is seeded");
        let pred = alpha.decremented(j).expect("entry is positive");
        self.ensure_power(&pred)?;
        let prod = mul(&self.powers[&pred], &self.inner[j], self.bound)?;
        self.powers.insert(alpha.clone(), prod);
        Ok(())
    }

    /// `Σ_α c_α · inner^α` for the terms `c_α x^α` of `outer`.
    pub(crate) fn apply(&mut self, outer: &Terms) -> Result<Terms> {
        let mut out = Terms::new();
        for (alpha, c) in outer {
            if let Bound::Truncate(d) = self.bound {
                // inner has no constant term, so inner^α starts at degree |α|
                if alpha.weight() > d {
                    break;
                }
            }
            self.ensure_power(alpha)?;
            add_scaled(&mut out, &self.powers[alpha], c);
        }
        self.bound.check(&out)?;
        Ok(out)
    }

    pub(crate) fn apply_all(&mut self, outer: &[Terms]) -> Result<Vec<Terms>> {
        outer.iter().map(|t| self.apply(t)).collect()
    }

    pub(crate) fn cached_powers(&self) -> usize {
        self.powers.len()
    }
}
