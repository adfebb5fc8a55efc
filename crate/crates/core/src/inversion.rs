//! Inversion of series maps `φ = id + (higher-order terms)`.
//!
//! Three independent routes produce the same truncated inverse:
//!
//! * [`invert_neumann`]: `φ^{-1} = id + Σ_{m≥1} Φ_m` where
//!   `Φ_m = Σ_k (−1)^k C(m,k) φ^{∘k}`, computed with the one-composition
//!   recurrence `Φ_{m+1} = Φ_m − Φ_m∘φ`. Since `order(Φ_m) ≥ m+1`, the terms
//!   with `m ≥ D` vanish under truncation; the bound is checked as each term is
//!   produced.
//! * [`invert_recurrence`]: solves `e^{⊙M_φ} M_{φ^{-1}} = E_1` block by block
//!   in the `(m,1)` blocks.
//! * [`invert_fixpoint`]: undetermined coefficients, `ψ ← id − H∘ψ` with
//!   `H = φ − id`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::coeff::Rational;
use crate::error::{Error, Result};
use crate::graded::{BlockMatrix, GradedBlock};
use crate::multiindex::{binomial, factorial, MultiIndex, SeriesContext};
use crate::poly::Terms;
use crate::series::{Composer, TruncatedSeriesMap};

/// Accepts `φ` when its linear part is the identity (a zero constant term is
/// guaranteed by the type).
pub fn require_unit_tangent(phi: &TruncatedSeriesMap) -> Result<&TruncatedSeriesMap> {
    if phi.has_identity_linear_part() {
        return Ok(phi);
    }
    let rows: Vec<String> = phi
        .linear_part()
        .iter()
        .map(|row| {
            row.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    Err(Error::NonIdentityLinearPart(format!(
        "linear block is [{}]",
        rows.join("; ")
    )))
}

/// `Φ_0, Φ_1, …` for a fixed `φ`, materialized on demand.
///
/// Extension takes `&mut self`, so readers never observe a partially built term.
#[derive(Debug, Clone)]
pub struct PhiSequence {
    base: TruncatedSeriesMap,
    unit_tangent: bool,
    terms: Vec<TruncatedSeriesMap>,
}

impl PhiSequence {
    pub fn new(phi: TruncatedSeriesMap) -> Self {
        let unit_tangent = phi.has_identity_linear_part();
        let id = TruncatedSeriesMap::identity(*phi.ctx());
        PhiSequence {
            base: phi,
            unit_tangent,
            terms: vec![id],
        }
    }

    pub fn base(&self) -> &TruncatedSeriesMap {
        &self.base
    }

    pub fn ctx(&self) -> &SeriesContext {
        self.base.ctx()
    }

    /// Number of materialized terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Φ_m`, extending the sequence as needed.
    ///
    /// For unit-tangent `φ` every new term is checked against
    /// `order(Φ_m) ≥ m + 1`; a violation is reported as a verification error.
    pub fn term(&mut self, m: usize) -> Result<&TruncatedSeriesMap> {
        if m >= self.terms.len() {
            let PhiSequence {
                base,
                unit_tangent,
                terms,
            } = self;
            let mut composer = Composer::new(base);
            while terms.len() <= m {
                let last = terms.last().expect("Φ_0 is seeded");
                let next = last.sub(&composer.apply(last)?)?;
                let k = terms.len();
                if *unit_tangent && !next.order().at_least(k as u32 + 1) {
                    return Err(Error::Verification(format!(
                        "order(Φ_{k}) = {} violates the bound {}",
                        next.order(),
                        k + 1
                    )));
                }
                terms.push(next);
            }
        }
        Ok(&self.terms[m])
    }

    /// Materialized terms `Φ_0 … Φ_{len−1}`.
    pub fn terms(&self) -> &[TruncatedSeriesMap] {
        &self.terms
    }
}

/// `Σ_{k=0}^m (−1)^k C(m,k) φ^{∘k}` evaluated literally from the iterates.
pub fn phi_term_binomial(phi: &TruncatedSeriesMap, m: u32) -> TruncatedSeriesMap {
    let ctx = *phi.ctx();
    let mut sum = TruncatedSeriesMap::zero(ctx);
    let mut iterate = TruncatedSeriesMap::identity(ctx);
    let mut composer = Composer::new(phi);
    for k in 0..=m {
        let mut c = Rational::from_biguint(binomial(m, k));
        if k % 2 == 1 {
            c = -c;
        }
        sum = sum.add(&iterate.scale(&c)).expect("same context");
        if k < m {
            iterate = composer.apply(&iterate).expect("same context");
        }
    }
    sum
}

/// Inversion algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Neumann,
    Recurrence,
    Fixpoint,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Neumann, Method::Recurrence, Method::Fixpoint];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Neumann => "neumann",
            Method::Recurrence => "recurrence",
            Method::Fixpoint => "fixpoint",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "neumann" => Ok(Method::Neumann),
            "recurrence" => Ok(Method::Recurrence),
            "fixpoint" => Ok(Method::Fixpoint),
            other => Err(Error::Precondition(format!("unknown method {other:?}"))),
        }
    }
}

/// An inverse together with the largest intermediate term count seen.
#[derive(Debug, Clone)]
pub struct Inversion {
    pub inverse: TruncatedSeriesMap,
    pub peak_terms: usize,
}

pub fn invert(phi: &TruncatedSeriesMap, method: Method) -> Result<TruncatedSeriesMap> {
    Ok(invert_traced(phi, method)?.inverse)
}

pub fn invert_traced(phi: &TruncatedSeriesMap, method: Method) -> Result<Inversion> {
    match method {
        Method::Neumann => neumann(phi),
        Method::Recurrence => recurrence(phi),
        Method::Fixpoint => fixpoint(phi),
    }
}

/// `id + Σ_{m=1}^{D−1} Φ_m`.
pub fn invert_neumann(phi: &TruncatedSeriesMap) -> Result<TruncatedSeriesMap> {
    Ok(neumann(phi)?.inverse)
}

fn neumann(phi: &TruncatedSeriesMap) -> Result<Inversion> {
    require_unit_tangent(phi)?;
    let d = phi.degree_cap() as usize;
    let mut seq = PhiSequence::new(phi.clone());
    let mut sum = TruncatedSeriesMap::identity(*phi.ctx());
    let mut peak = sum.term_count();
    for m in 1..d {
        let term = seq.term(m)?;
        peak = peak.max(term.term_count());
        sum = sum.add(term)?;
    }
    // Φ_D must already vanish below degree D+1
    if !seq.term(d)?.is_zero() {
        return Err(Error::Verification(format!(
            "Φ_{d} is nonzero within degree {d}"
        )));
    }
    peak = peak.max(sum.term_count());
    Ok(Inversion {
        inverse: sum,
        peak_terms: peak,
    })
}

/// Block recurrence: `N^1 = M^1` and for `m > 1`
/// `N^m = −Σ_{k<m} (Σ_{|α|=k, ‖α‖=m} ⊙_j (M^j)^{⊙α_j} / α!) · N^k`.
pub fn invert_recurrence(phi: &TruncatedSeriesMap) -> Result<TruncatedSeriesMap> {
    Ok(recurrence(phi)?.inverse)
}

fn recurrence(phi: &TruncatedSeriesMap) -> Result<Inversion> {
    require_unit_tangent(phi)?;
    let ctx = *phi.ctx();
    let n = ctx.nvars();
    let d = ctx.degree_cap();
    let m_phi = BlockMatrix::from_series(phi);
    // M^j for j = 1..D; absent blocks are zero
    let column: Vec<Option<GradedBlock>> = (0..=d)
        .map(|j| {
            if j == 0 {
                None
            } else {
                m_phi.block(j, 1).cloned()
            }
        })
        .collect();

    let mut powers = OdotPowers::new(&column);
    let mut inverse_blocks: Vec<GradedBlock> = vec![GradedBlock::zeros(n, 0, 1)];
    inverse_blocks.push(
        column[1]
            .clone()
            .unwrap_or_else(|| GradedBlock::zeros(n, 1, 1)),
    );
    let mut peak = 0usize;

    for m in 2..=d {
        let mut acc = GradedBlock::zeros(n, m, 1);
        for k in 1..m {
            let Some(coeff_block) = powers.exp_block(m, k)? else {
                continue;
            };
            peak = peak.max(coeff_block.rows() * coeff_block.cols());
            acc = acc.add(&coeff_block.matmul(&inverse_blocks[k as usize])?)?;
        }
        inverse_blocks.push(acc.scale(&Rational::from(-1)));
    }

    let mut m_inv = BlockMatrix::zero(ctx);
    for block in inverse_blocks.into_iter().skip(1) {
        m_inv = m_inv.add(&BlockMatrix::from_block(ctx, block))?;
    }
    let inverse = m_inv.to_series()?;
    peak = peak.max(inverse.term_count());
    Ok(Inversion {
        inverse,
        peak_terms: peak,
    })
}

/// The `(m,k)` blocks of `e^{⊙M_φ}` assembled from ⊙-powers of the column
/// blocks `M^j`.
struct OdotPowers<'a> {
    column: &'a [Option<GradedBlock>],
    cache: HashMap<(u32, u32), GradedBlock>,
}

impl<'a> OdotPowers<'a> {
    fn new(column: &'a [Option<GradedBlock>]) -> Self {
        OdotPowers {
            column,
            cache: HashMap::new(),
        }
    }

    /// `(M^j)^{⊙a}` for `a ≥ 1`; `None` when `M^j` is zero.
    fn power(&mut self, j: u32, a: u32) -> Result<Option<GradedBlock>> {
        let Some(base) = self.column.get(j as usize).and_then(Option::as_ref) else {
            return Ok(None);
        };
        if a == 1 {
            return Ok(Some(base.clone()));
        }
        if let Some(b) = self.cache.get(&(j, a)) {
            return Ok(Some(b.clone()));
        }
        let prev = self.power(j, a - 1)?.expect("base is nonzero");
        let next = prev.odot(base)?;
        self.cache.insert((j, a), next.clone());
        Ok(Some(next))
    }

    /// `Σ_{|α|=k, ‖α‖=m} ⊙_j (M^j)^{⊙α_j} / α!`, factors with `α_j = 0`
    /// omitted; `None` when every summand vanishes.
    fn exp_block(&mut self, m: u32, k: u32) -> Result<Option<GradedBlock>> {
        let mut total: Option<GradedBlock> = None;
        for alpha in compositions(m, k) {
            let mut product: Option<GradedBlock> = None;
            let mut alpha_factorial = BigUint::from(1u32);
            let mut vanishes = false;
            for (j0, &a) in alpha.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let Some(factor) = self.power(j0 as u32 + 1, a)? else {
                    vanishes = true;
                    break;
                };
                alpha_factorial *= factorial(a);
                product = Some(match product {
                    None => factor,
                    Some(p) => p.odot(&factor)?,
                });
            }
            if vanishes {
                continue;
            }
            let term = product
                .expect("k >= 1 gives a factor")
                .scale(&Rational::one().div_biguint(&alpha_factorial)?);
            total = Some(match total {
                None => term,
                Some(t) => t.add(&term)?,
            });
        }
        Ok(total)
    }
}

/// Count vectors `α = (α_1, …, α_{m−k+1})` with `Σ α_j = k` and
/// `Σ j·α_j = m`.
pub(crate) fn compositions(m: u32, k: u32) -> Vec<Vec<u32>> {
    fn go(j: u32, parts_left: u32, weight_left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if j == 0 {
            if parts_left == 0 && weight_left == 0 {
                let mut v = cur.clone();
                v.reverse();
                out.push(v);
            }
            return;
        }
        // remaining parts each weigh at least 1 and at most j
        for a in (0..=parts_left.min(weight_left / j)).rev() {
            let pl = parts_left - a;
            let wl = weight_left - a * j;
            if pl > wl || wl > pl * (j - 1) {
                continue;
            }
            cur.push(a);
            go(j - 1, pl, wl, cur, out);
            cur.pop();
        }
    }
    if k == 0 || k > m {
        return Vec::new();
    }
    let len = m - k + 1;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len as usize);
    go(len, k, m, &mut cur, &mut out);
    out
}

/// Fixed point of `ψ = id − H∘ψ`, `H = φ − id`, iterated `D` times.
pub fn invert_fixpoint(phi: &TruncatedSeriesMap) -> Result<TruncatedSeriesMap> {
    Ok(fixpoint(phi)?.inverse)
}

fn fixpoint(phi: &TruncatedSeriesMap) -> Result<Inversion> {
    fixpoint_steps(phi, phi.degree_cap())
}

/// [`invert_fixpoint`] stopped after `steps` iterations; after `s` steps the
/// result agrees with the inverse through degree `s`.
pub fn fixpoint_steps(phi: &TruncatedSeriesMap, steps: u32) -> Result<Inversion> {
    require_unit_tangent(phi)?;
    let id = TruncatedSeriesMap::identity(*phi.ctx());
    let tail = phi.sub(&id)?;
    let mut psi = id.clone();
    let mut peak = psi.term_count();
    for _ in 0..steps {
        psi = id.sub(&tail.compose(&psi)?)?;
        peak = peak.max(psi.term_count());
    }
    Ok(Inversion {
        inverse: psi,
        peak_terms: peak,
    })
}

/// Result of comparing `Φ_{m0}` with `Σ_{m≥m0} Φ_m∘φ`.
#[derive(Debug, Clone)]
pub struct Prop4Check {
    pub holds: bool,
    /// `Φ_{m0} − Σ_{m=m0}^{D−1} Φ_m∘φ`
    pub residual: TruncatedSeriesMap,
}

pub fn check_prop4(phi: &TruncatedSeriesMap, m0: usize) -> Result<Prop4Check> {
    require_unit_tangent(phi)?;
    let d = phi.degree_cap() as usize;
    let mut seq = PhiSequence::new(phi.clone());
    let mut composer = Composer::new(phi);
    let mut sum = TruncatedSeriesMap::zero(*phi.ctx());
    for m in m0..d.max(m0) {
        sum = sum.add(&composer.apply(seq.term(m)?)?)?;
    }
    let residual = seq.term(m0)?.sub(&sum)?;
    Ok(Prop4Check {
        holds: residual.is_zero(),
        residual,
    })
}

/// `(E_∞ − e^{⊙M_φ})^m · E_1`, which equals the matrix of `Φ_m`.
pub fn neumann_matrix_term(phi: &TruncatedSeriesMap, m: u32) -> Result<BlockMatrix> {
    let ctx = *phi.ctx();
    let exp = BlockMatrix::from_series(phi).odot_exp()?;
    let gap = BlockMatrix::e_inf(ctx).sub(&exp)?;
    gap.block_pow(m)?.block_mul(&BlockMatrix::e_one(ctx))
}

/// Extension for maps with an invertible linear part `L`:
/// `φ^{-1} = (L^{-1}∘φ)^{-1} ∘ L^{-1}`.
pub fn invert_general(phi: &TruncatedSeriesMap, method: Method) -> Result<TruncatedSeriesMap> {
    let ctx = *phi.ctx();
    let lin = phi.linear_part();
    let lin_inv = invert_rational_matrix(&lin)?;
    let lin_inv_map = linear_map(ctx, &lin_inv);
    let normalized = lin_inv_map.compose(phi)?;
    invert(&normalized, method)?.compose(&lin_inv_map)
}

fn linear_map(ctx: SeriesContext, m: &[Vec<Rational>]) -> TruncatedSeriesMap {
    let n = ctx.nvars();
    let comps = m
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (MultiIndex::unit(n, j), c.clone()))
                .collect::<Terms>()
        })
        .collect();
    TruncatedSeriesMap::new(ctx, comps).expect("linear terms only")
}

/// Gauss-Jordan elimination over the rationals.
fn invert_rational_matrix(m: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::NonIdentityLinearPart("linear part is singular".into()))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].inv()?;
        for j in 0..n {
            a[col][j] *= &p;
            inv[col][j] *= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                a[r][j] -= x;
                inv[r][j] -= y;
            }
        }
    }
    Ok(inv)
}
