//! Truncated power series maps `F^n → F^n` with zero constant term.

use std::fmt;

use crate::coeff::Rational;
use crate::error::{Error, Result};
use crate::multiindex::{MultiIndex, SeriesContext};
use crate::poly::{self, Bound, Substitution, Terms};

/// Order of a map: the lowest total degree carrying a nonzero coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn at_least(&self, k: u32) -> bool {
        match self {
            Order::Finite(d) => *d >= k,
            Order::Infinite => true,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(d) => write!(f, "{d}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// An n-component series map truncated at total degree `D`.
///
/// Components hold only exponents with `1 ≤ |α| ≤ D` and nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeriesMap {
    ctx: SeriesContext,
    components: Vec<Terms>,
}

impl TruncatedSeriesMap {
    /// Validates the components: constant terms are rejected, terms above the
    /// cap are dropped along with zero coefficients.
    pub fn new(ctx: SeriesContext, components: Vec<Terms>) -> Result<Self> {
        if components.len() != ctx.nvars() {
            return Err(Error::Precondition(format!(
                "expected {} components, got {}",
                ctx.nvars(),
                components.len()
            )));
        }
        let mut clean = Vec::with_capacity(components.len());
        for (j, comp) in components.into_iter().enumerate() {
            let mut out = Terms::new();
            for (idx, c) in comp {
                if idx.len() != ctx.nvars() {
                    return Err(Error::LengthMismatch {
                        left: idx.len(),
                        right: ctx.nvars(),
                    });
                }
                let w = idx.weight();
                if w == 0 {
                    if c.is_zero() {
                        continue;
                    }
                    return Err(Error::ConstantTerm(format!(
                        "component {} has constant {c}",
                        j + 1
                    )));
                }
                if w <= ctx.degree_cap() && !c.is_zero() {
                    out.insert(idx, c);
                }
            }
            clean.push(out);
        }
        Ok(TruncatedSeriesMap {
            ctx,
            components: clean,
        })
    }

    pub(crate) fn from_clean(ctx: SeriesContext, components: Vec<Terms>) -> Self {
        debug_assert!(components.len() == ctx.nvars());
        debug_assert!(components.iter().all(|c| c
            .iter()
            .all(|(k, v)| (1..=ctx.degree_cap()).contains(&k.weight()) && !v.is_zero())));
        TruncatedSeriesMap { ctx, components }
    }

    /// Builds from `(component, exponent, coefficient)` triples, components
    /// 0-based; repeated exponents are summed.
    pub fn from_triples<I>(ctx: SeriesContext, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, MultiIndex, Rational)>,
    {
        let mut comps = vec![Terms::new(); ctx.nvars()];
        for (j, idx, c) in triples {
            if j >= ctx.nvars() {
                return Err(Error::Precondition(format!(
                    "component {} out of range",
                    j + 1
                )));
            }
            if idx.len() != ctx.nvars() {
                return Err(Error::LengthMismatch {
                    left: idx.len(),
                    right: ctx.nvars(),
                });
            }
            if idx.weight() == 0 && !c.is_zero() {
                return Err(Error::ConstantTerm(format!(
                    "component {} has constant {c}",
                    j + 1
                )));
            }
            poly::add_term(&mut comps[j], &idx, c);
        }
        TruncatedSeriesMap::new(ctx, comps)
    }

    pub fn identity(ctx: SeriesContext) -> Self {
        let n = ctx.nvars();
        let components = (0..n)
            .map(|j| {
                let mut t = Terms::new();
                t.insert(MultiIndex::unit(n, j), Rational::one());
                t
            })
            .collect();
        TruncatedSeriesMap { ctx, components }
    }

    pub fn zero(ctx: SeriesContext) -> Self {
        TruncatedSeriesMap {
            ctx,
            components: vec![Terms::new(); ctx.nvars()],
        }
    }

    pub fn ctx(&self) -> &SeriesContext {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.ctx.nvars()
    }

    pub fn degree_cap(&self) -> u32 {
        self.ctx.degree_cap()
    }

    pub fn components(&self) -> &[Terms] {
        &self.components
    }

    /// Component `j`, 0-based.
    pub fn component(&self, j: usize) -> &Terms {
        &self.components[j]
    }

    pub fn coeff(&self, j: usize, idx: &MultiIndex) -> Rational {
        self.components[j].get(idx).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Terms::is_empty)
    }

    pub fn term_count(&self) -> usize {
        self.components.iter().map(Terms::len).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ctx.ensure_same(&other.ctx)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| {
                let mut out = a.clone();
                poly::add_scaled(&mut out, b, &Rational::one());
                out
            })
            .collect();
        Ok(TruncatedSeriesMap {
            ctx: self.ctx,
            components,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.ctx.ensure_same(&other.ctx)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| poly::sub(a, b))
            .collect();
        Ok(TruncatedSeriesMap {
            ctx: self.ctx,
            components,
        })
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let components = self
            .components
            .iter()
            .map(|c| {
                let mut out = Terms::new();
                poly::add_scaled(&mut out, c, k);
                out
            })
            .collect();
        TruncatedSeriesMap {
            ctx: self.ctx,
            components,
        }
    }

    /// `self ∘ inner`, by direct substitution with all products truncated at `D`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.ctx.ensure_same(&inner.ctx)?;
        let mut subst = Composer::new(inner);
        subst.apply(self)
    }

    /// `k`-fold self-composition; `k = 0` gives the identity.
    pub fn iterate(&self, k: usize) -> Self {
        let mut acc = TruncatedSeriesMap::identity(self.ctx);
        if k == 0 {
            return acc;
        }
        let mut composer = Composer::new(self);
        for _ in 0..k {
            // φ^{∘(i+1)} = φ^{∘i} ∘ φ, so the inner map stays fixed
            acc = composer.apply(&acc).expect("same context");
        }
        acc
    }

    pub fn order(&self) -> Order {
        self.components
            .iter()
            .filter_map(poly::low_degree)
            .min()
            .map_or(Order::Infinite, Order::Finite)
    }

    /// Largest total degree carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(poly::degree).max()
    }

    /// Same coefficients with a new cap (lower caps drop terms; raising the
    /// cap does not invent the missing ones).
    pub fn truncate(&self, degree_cap: u32) -> Result<Self> {
        let ctx = self.ctx.with_degree(degree_cap)?;
        let components = self
            .components
            .iter()
            .map(|c| poly::truncate(c, degree_cap))
            .collect();
        Ok(TruncatedSeriesMap { ctx, components })
    }

    /// The degree-1 coefficients as an n×n grid: `grid[i][j]` is the
    /// coefficient of `x_j` in component `i`.
    pub fn linear_part(&self) -> Vec<Vec<Rational>> {
        let n = self.nvars();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.coeff(i, &MultiIndex::unit(n, j)))
                    .collect()
            })
            .collect()
    }

    pub fn has_identity_linear_part(&self) -> bool {
        self.linear_part().iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() })
        })
    }

    /// Formal Jacobian `(∂φ)^i_j = ∂_i φ_j`, entries truncated at `D − 1`.
    pub fn jacobian(&self) -> JacobianSeriesMatrix {
        let n = self.nvars();
        let cap = self.degree_cap() - 1;
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| ScalarSeries {
                        nvars: n,
                        cap,
                        terms: poly::derivative(&self.components[j], i),
                    })
                    .collect()
            })
            .collect();
        JacobianSeriesMatrix {
            ctx: self.ctx,
            entries,
        }
    }
}

impl fmt::Debug for TruncatedSeriesMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TruncatedSeriesMap(n={}, D={}) [",
            self.nvars(),
            self.degree_cap()
        )?;
        for (j, c) in self.components.iter().enumerate() {
            if j > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", format_terms(c))?;
        }
        write!(f, "]")
    }
}

/// Human-readable `c*x^α + …` rendering used in diagnostics.
pub fn format_terms(terms: &Terms) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms
        .iter()
        .map(|(k, v)| format!("{v}*x^{k}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Composition with a fixed inner map; `inner^α` products are cached so
/// repeated compositions with the same inner map reuse them.
pub struct Composer<'a> {
    ctx: SeriesContext,
    subst: Substitution<'a>,
}

impl<'a> Composer<'a> {
    pub fn new(inner: &'a TruncatedSeriesMap) -> Self {
        Composer {
            ctx: inner.ctx,
            subst: Substitution::new(
                inner.nvars(),
                &inner.components,
                Bound::Truncate(inner.degree_cap()),
            ),
        }
    }

    /// `outer ∘ inner`
    pub fn apply(&mut self, outer: &TruncatedSeriesMap) -> Result<TruncatedSeriesMap> {
        self.ctx.ensure_same(&outer.ctx)?;
        let components = self.subst.apply_all(&outer.components)?;
        Ok(TruncatedSeriesMap::from_clean(self.ctx, components))
    }

    /// Number of monomials `inner^α` materialized so far.
    pub fn cached_powers(&self) -> usize {
        self.subst.cached_powers()
    }
}

/// A scalar truncated series; unlike map components it may carry a constant.
#[derive(Clone, PartialEq, Eq)]
pub struct ScalarSeries {
    nvars: usize,
    cap: u32,
    terms: Terms,
}

impl ScalarSeries {
    pub fn new(nvars: usize, cap: u32, terms: Terms) -> Self {
        let terms = terms
            .into_iter()
            .filter(|(k, v)| k.weight() <= cap && !v.is_zero())
            .collect();
        ScalarSeries { nvars, cap, terms }
    }

    pub fn constant(nvars: usize, cap: u32, c: Rational) -> Self {
        ScalarSeries {
            nvars,
            cap,
            terms: poly::constant(nvars, c),
        }
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = poly::truncate(&self.terms, self.cap.min(other.cap));
        poly::add_scaled(
            &mut terms,
            &poly::truncate(&other.terms, self.cap.min(other.cap)),
            &Rational::one(),
        );
        ScalarSeries {
            nvars: self.nvars,
            cap: self.cap.min(other.cap),
            terms,
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut terms = Terms::new();
        poly::add_scaled(&mut terms, &self.terms, k);
        ScalarSeries {
            nvars: self.nvars,
            cap: self.cap,
            terms,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.cap.min(other.cap);
        let terms = poly::mul(&self.terms, &other.terms, Bound::Truncate(cap))
            .expect("truncated products are unbounded");
        ScalarSeries {
            nvars: self.nvars,
            cap,
            terms,
        }
    }
}

impl fmt::Debug for ScalarSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (+ O(deg {}))",
            format_terms(&self.terms),
            self.cap + 1
        )
    }
}

/// n×n grid of scalar series; entry `(i, j)` is `∂_i φ_j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JacobianSeriesMatrix {
    ctx: SeriesContext,
    entries: Vec<Vec<ScalarSeries>>,
}

impl JacobianSeriesMatrix {
    pub(crate) fn from_entries(ctx: SeriesContext, entries: Vec<Vec<ScalarSeries>>) -> Self {
        JacobianSeriesMatrix { ctx, entries }
    }

    /// Constant identity grid with entries truncated at `cap`.
    pub fn identity(ctx: SeriesContext, cap: u32) -> Self {
        let n = ctx.nvars();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        ScalarSeries::constant(
                            n,
                            cap,
                            if i == j {
                                Rational::one()
                            } else {
                                Rational::zero()
                            },
                        )
                    })
                    .collect()
            })
            .collect();
        JacobianSeriesMatrix { ctx, entries }
    }

    pub fn ctx(&self) -> &SeriesContext {
        &self.ctx
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarSeries {
        &self.entries[i][j]
    }

    pub fn add(&self, other: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(a, b)| a.add(b)).collect())
            .collect();
        JacobianSeriesMatrix {
            ctx: self.ctx,
            entries,
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.scale(k)).collect())
            .collect();
        JacobianSeriesMatrix {
            ctx: self.ctx,
            entries,
        }
    }

    /// Ordinary matrix product over the truncated series ring.
    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.ctx.nvars();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| self.entries[i][k].mul(&other.entries[k][j]))
                            .reduce(|a, b| a.add(&b))
                            .expect("n >= 1")
                    })
                    .collect()
            })
            .collect();
        JacobianSeriesMatrix {
            ctx: self.ctx,
            entries,
        }
    }

    /// Substitutes the map `inner` into every entry.
    pub fn evaluate_at(&self, inner: &TruncatedSeriesMap) -> Result<Self> {
        let mut subst = Substitution::new(
            inner.nvars(),
            inner.components(),
            Bound::Truncate(inner.degree_cap()),
        );
        let mut entries = Vec::with_capacity(self.entries.len());
        for row in &self.entries {
            let mut out = Vec::with_capacity(row.len());
            for e in row {
                let cap = e.cap.min(inner.degree_cap());
                out.push(ScalarSeries::new(e.nvars, cap, subst.apply(&e.terms)?));
            }
            entries.push(out);
        }
        Ok(JacobianSeriesMatrix {
            ctx: self.ctx,
            entries,
        })
    }

    /// `self − other` entrywise, as raw terms (used for residual reports).
    pub fn difference(&self, other: &Self) -> Vec<Vec<Terms>> {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(ra, rb)| {
                ra.iter()
                    .zip(rb)
                    .map(|(a, b)| {
                        let cap = a.cap.min(b.cap);
                        poly::sub(
                            &poly::truncate(&a.terms, cap),
                            &poly::truncate(&b.terms, cap),
                        )
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn map(ctx: SeriesContext, comps: &[&[(&[u32], i64)]]) -> TruncatedSeriesMap {
        let components = comps
            .iter()
            .map(|c| {
                c.iter()
                    .map(|(e, v)| (MultiIndex::from_slice(e), Rational::from(*v)))
                    .collect()
            })
            .collect();
        TruncatedSeriesMap::new(ctx, components).unwrap()
    }

    fn ctx(n: usize, d: u32) -> SeriesContext {
        SeriesContext::new(n, d).unwrap()
    }

    #[test]
    fn identity_zero_and_arithmetic() {
        let c = ctx(2, 4);
        let id = TruncatedSeriesMap::identity(c);
        assert_eq!(id, map(c, &[&[(&[1, 0], 1)], &[(&[0, 1], 1)]]));
        let f = map(c, &[&[(&[1, 0], 1), (&[0, 2], 3)], &[(&[0, 1], 1)]]);
        assert_eq!(f.sub(&f).unwrap(), TruncatedSeriesMap::zero(c));
        assert!(f.sub(&f).unwrap().components().iter().all(Terms::is_empty));
        let three = id.scale(&Rational::from(3));
        assert_eq!(three, map(c, &[&[(&[1, 0], 3)], &[(&[0, 1], 3)]]));
        assert!(matches!(
            f.add(&TruncatedSeriesMap::zero(ctx(2, 5))),
            Err(Error::ContextMismatch { .. })
        ));
    }

    #[test]
    fn constructor_validation() {
        let c = ctx(1, 3);
        let bad: Terms = [(MultiIndex::from_slice(&[0]), Rational::one())]
            .into_iter()
            .collect();
        assert!(matches!(
            TruncatedSeriesMap::new(c, vec![bad]),
            Err(Error::ConstantTerm(_))
        ));
        let high = map(c, &[&[(&[1], 1), (&[4], 5), (&[2], 0)]]);
        assert_eq!(high, TruncatedSeriesMap::identity(c));
    }

    #[test]
    fn compose_examples() {
        let c = ctx(1, 4);
        let outer = map(c, &[&[(&[2], 1)]]);
        let inner = map(c, &[&[(&[1], 1), (&[2], 1)]]);
        let expected = map(c, &[&[(&[2], 1), (&[3], 2), (&[4], 1)]]);
        assert_eq!(outer.compose(&inner).unwrap(), expected);

        let id = TruncatedSeriesMap::identity(c);
        assert_eq!(inner.compose(&id).unwrap(), inner);
        assert_eq!(id.compose(&inner).unwrap(), inner);

        let c2 = ctx(2, 4);
        let phi = map(c2, &[&[(&[1, 0], 1), (&[0, 2], 1)], &[(&[0, 1], 1)]]);
        let psi = map(c2, &[&[(&[1, 0], 1), (&[0, 2], -1)], &[(&[0, 1], 1)]]);
        assert_eq!(phi.compose(&psi).unwrap(), TruncatedSeriesMap::identity(c2));
    }

    #[test]
    fn iterate_examples() {
        let c = ctx(1, 4);
        let phi = map(c, &[&[(&[1], 1), (&[2], 1)]]);
        assert_eq!(
            phi.iterate(2),
            map(c, &[&[(&[1], 1), (&[2], 2), (&[3], 2), (&[4], 1)]])
        );
        assert_eq!(phi.iterate(0), TruncatedSeriesMap::identity(c));
        assert_eq!(
            TruncatedSeriesMap::identity(c).iterate(7),
            TruncatedSeriesMap::identity(c)
        );
    }

    #[test]
    fn order_examples() {
        let c = ctx(1, 4);
        assert_eq!(TruncatedSeriesMap::identity(c).order(), Order::Finite(1));
        let phi = map(c, &[&[(&[1], 1), (&[2], 1)]]);
        let phi1 = TruncatedSeriesMap::identity(c).sub(&phi).unwrap();
        assert_eq!(phi1, map(c, &[&[(&[2], -1)]]));
        assert_eq!(phi1.order(), Order::Finite(2));
        assert_eq!(TruncatedSeriesMap::zero(c).order(), Order::Infinite);
    }

    #[test]
    fn jacobian_examples() {
        let c = ctx(2, 4);
        let phi = map(c, &[&[(&[1, 0], 1), (&[0, 2], 1)], &[(&[0, 1], 1)]]);
        let jac = phi.jacobian();
        let t = |e: &[(&[u32], i64)]| -> Terms {
            e.iter()
                .map(|(k, v)| (MultiIndex::from_slice(k), Rational::from(*v)))
                .collect()
        };
        assert_eq!(jac.entry(0, 0).terms(), &t(&[(&[0, 0], 1)]));
        assert_eq!(jac.entry(0, 1).terms(), &t(&[]));
        assert_eq!(jac.entry(1, 0).terms(), &t(&[(&[0, 1], 2)]));
        assert_eq!(jac.entry(1, 1).terms(), &t(&[(&[0, 0], 1)]));
        assert_eq!(
            TruncatedSeriesMap::identity(c).jacobian(),
            JacobianSeriesMatrix::identity(c, 3)
        );

        let c1 = ctx(1, 4);
        let phi = map(c1, &[&[(&[1], 1), (&[2], 1)]]);
        assert_eq!(
            phi.jacobian().entry(0, 0).terms(),
            &t(&[(&[0], 1), (&[1], 2)])
        );
    }

    fn arb_map(n: usize, d: u32) -> impl Strategy<Value = TruncatedSeriesMap> {
        let c = ctx(n, d);
        let monos: Vec<MultiIndex> = (1..=3.min(d))
            .flat_map(|p| crate::multiindex::enumerate_weight_n(n, p))
            .collect();
        let k = monos.len();
        prop::collection::vec(prop::collection::vec(-2i64..=2, k), n).prop_map(move |coeffs| {
            let comps = coeffs
                .iter()
                .map(|row| {
                    monos
                        .iter()
                        .zip(row)
                        .map(|(m, &v)| (m.clone(), Rational::from(v)))
                        .collect()
                })
                .collect();
            TruncatedSeriesMap::new(c, comps).unwrap()
        })
    }

    fn arb_triple(
    ) -> impl Strategy<Value = (TruncatedSeriesMap, TruncatedSeriesMap, TruncatedSeriesMap)> {
        (1usize..=3, 2u32..=5).prop_flat_map(|(n, d)| (arb_map(n, d), arb_map(n, d), arb_map(n, d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn composition_is_associative((f, g, h) in arb_triple()) {
            let left = f.compose(&g).unwrap().compose(&h).unwrap();
            let right = f.compose(&g.compose(&h).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn results_stay_truncated_and_normalized((f, g, _h) in arb_triple()) {
            let d = f.degree_cap();
            for r in [f.compose(&g).unwrap(), f.add(&g).unwrap(), f.sub(&g).unwrap(), f.iterate(2)] {
                for comp in r.components() {
                    prop_assert!(comp.iter().all(|(k, v)| k.weight() >= 1 && k.weight() <= d && !v.is_zero()));
                }
            }
        }

        #[test]
        fn unit_tangent_iterates_stay_tangent((f, _g, _h) in arb_triple(), k in 1usize..4) {
            let id = TruncatedSeriesMap::identity(*f.ctx());
            let lin = f.truncate(1).unwrap().truncate(f.degree_cap()).unwrap();
            let phi = f.sub(&lin).unwrap().add(&id).unwrap();
            let diff = phi.iterate(k).sub(&id).unwrap();
            prop_assert!(diff.order().at_least(2));
        }
    }
}
