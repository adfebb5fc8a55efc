//! Graded matrix blocks `M(p′,p)` and the truncated block ring.
//!
//! A block `A ∈ M(p′,p)` has rows indexed by the weight-`p′` multi-indices and
//! columns by the weight-`p` ones, both in the graded order. Besides the
//! ordinary matrix product, blocks carry the symmetric product
//!
//! ```text
//! (A ⊙ B)^{α′}_α = Σ C(α, β) · A^{β′}_β · B^{α′−β′}_{α−β}
//! ```
//!
//! summed over `β ≪ α`, `β′ ≪ α′` of the weights of `A`. A [`BlockMatrix`]
//! collects blocks for all weights up to the cap `D`, and the map
//! `φ ↦ M_φ` stores the degree-`p′` coefficients of `φ` in block `(p′, 1)`.
//! Composition then becomes `M_{ψ∘φ} = e^{⊙M_φ} · M_ψ`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::coeff::Rational;
use crate::error::{Error, Result};
use crate::multiindex::{count_weight, enumerate_weight_n, factorial, MultiIndex, SeriesContext};
use crate::poly::Terms;
use crate::series::TruncatedSeriesMap;

/// A dense block of `M(p′,p)`, stored row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedBlock {
    nvars: usize,
    row_weight: u32,
    col_weight: u32,
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl GradedBlock {
    pub fn zeros(nvars: usize, row_weight: u32, col_weight: u32) -> Self {
        let rows = count_weight(nvars, row_weight);
        let cols = count_weight(nvars, col_weight);
        GradedBlock {
            nvars,
            row_weight,
            col_weight,
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    /// Identity block of `M(p,p)`.
    pub fn identity(nvars: usize, weight: u32) -> Self {
        let mut b = GradedBlock::zeros(nvars, weight, weight);
        for i in 0..b.rows {
            b.data[i * b.cols + i] = Rational::one();
        }
        b
    }

    /// Block filled row by row from `data`.
    pub fn from_rows(
        nvars: usize,
        row_weight: u32,
        col_weight: u32,
        data: Vec<Rational>,
    ) -> Result<Self> {
        let mut b = GradedBlock::zeros(nvars, row_weight, col_weight);
        if data.len() != b.data.len() {
            return Err(Error::Precondition(format!(
                "block M({row_weight},{col_weight}) needs {} entries, got {}",
                b.data.len(),
                data.len()
            )));
        }
        b.data = data;
        Ok(b)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn row_weight(&self) -> u32 {
        self.row_weight
    }

    pub fn col_weight(&self) -> u32 {
        self.col_weight
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.data[row * self.cols + col] = value;
    }

    /// Entry `A^{α′}_α`.
    pub fn at(&self, row_index: &MultiIndex, col_index: &MultiIndex) -> &Rational {
        debug_assert_eq!(row_index.weight(), self.row_weight);
        debug_assert_eq!(col_index.weight(), self.col_weight);
        self.get(row_index.rank_in_weight(), col_index.rank_in_weight())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars
            || self.row_weight != other.row_weight
            || self.col_weight != other.col_weight
        {
            return Err(Error::Precondition(format!(
                "block shapes differ: M({},{}) vs M({},{})",
                self.row_weight, self.col_weight, other.row_weight, other.col_weight
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        out.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(a, b)| *a += b);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        out.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(a, b)| *a -= b);
        Ok(out)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|a| *a *= k);
        out
    }

    /// Ordinary matrix product `M(p′,q) × M(q,p) → M(p′,p)`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars || self.col_weight != other.row_weight {
            return Err(Error::Precondition(format!(
                "cannot multiply M({},{}) by M({},{})",
                self.row_weight, self.col_weight, other.row_weight, other.col_weight
            )));
        }
        let mut out = GradedBlock::zeros(self.nvars, self.row_weight, other.col_weight);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * out.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Symmetric product `A ⊙ B ∈ M(p′+q′, p+q)`.
    #[allow(clippy::needless_range_loop)]
    pub fn odot(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::ContextMismatch {
                left_vars: self.nvars,
                left_degree: self.row_weight.max(self.col_weight),
                right_vars: other.nvars,
                right_degree: other.row_weight.max(other.col_weight),
            });
        }
        let n = self.nvars;
        let mut out = GradedBlock::zeros(
            n,
            self.row_weight + other.row_weight,
            self.col_weight + other.col_weight,
        );

        // Each term pairs (β′, β) of A with (α′−β′, α−β) of B; index the sum
        // by the two summands instead of by α.
        let a_rows = enumerate_weight_n(n, self.row_weight);
        let b_rows = enumerate_weight_n(n, other.row_weight);
        let a_cols = enumerate_weight_n(n, self.col_weight);
        let b_cols = enumerate_weight_n(n, other.col_weight);
        let row_rank: Vec<Vec<usize>> = a_rows
            .iter()
            .map(|r| {
                b_rows
                    .iter()
                    .map(|s| r.add_unchecked(s).rank_in_weight())
                    .collect()
            })
            .collect();
        let col_term: Vec<Vec<(usize, Rational)>> = a_cols
            .iter()
            .map(|beta| {
                b_cols
                    .iter()
                    .map(|gamma| {
                        let alpha = beta.add_unchecked(gamma);
                        let binom = alpha.binomial(beta).expect("β ≪ β+γ");
                        (alpha.rank_in_weight(), Rational::from_biguint(binom))
                    })
                    .collect()
            })
            .collect();

        for ar in 0..self.rows {
            for ac in 0..self.cols {
                let a = self.get(ar, ac);
                if a.is_zero() {
                    continue;
                }
                for br in 0..other.rows {
                    let out_row = row_rank[ar][br];
                    for bc in 0..other.cols {
                        let b = other.get(br, bc);
                        if b.is_zero() {
                            continue;
                        }
                        let (out_col, binom) = &col_term[ac][bc];
                        out.data[out_row * out.cols + out_col] += binom * &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Nonzero entries as `(α′, α, value)` in row-major order.
    pub fn nonzero_entries(&self) -> Vec<(MultiIndex, MultiIndex, Rational)> {
        let rows = enumerate_weight_n(self.nvars, self.row_weight);
        let cols = enumerate_weight_n(self.nvars, self.col_weight);
        let mut out = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in cols.iter().enumerate() {
                let v = self.get(i, j);
                if !v.is_zero() {
                    out.push((r.clone(), c.clone(), v.clone()));
                }
            }
        }
        out
    }
}

/// Element of the truncated block ring: blocks `(p′, p)` with `p′, p ≤ D`,
/// absent blocks are zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockMatrix {
    ctx: SeriesContext,
    blocks: BTreeMap<(u32, u32), GradedBlock>,
}

impl BlockMatrix {
    pub fn zero(ctx: SeriesContext) -> Self {
        BlockMatrix {
            ctx,
            blocks: BTreeMap::new(),
        }
    }

    /// The ⊙-identity: scalar 1 in block `(0,0)`.
    pub fn mat_one(ctx: SeriesContext) -> Self {
        BlockMatrix::from_block(ctx, GradedBlock::identity(ctx.nvars(), 0))
    }

    /// Identity block at `(1,1)` only; the matrix of the identity map.
    pub fn e_one(ctx: SeriesContext) -> Self {
        BlockMatrix::from_block(ctx, GradedBlock::identity(ctx.nvars(), 1))
    }

    /// Identity blocks at every `(p,p)` with `0 ≤ p ≤ D`.
    pub fn e_inf(ctx: SeriesContext) -> Self {
        let mut m = BlockMatrix::zero(ctx);
        for p in 0..=ctx.degree_cap() {
            m.put(GradedBlock::identity(ctx.nvars(), p));
        }
        m
    }

    /// Embeds a single block; dropped when its weights exceed the cap.
    pub fn from_block(ctx: SeriesContext, block: GradedBlock) -> Self {
        let mut m = BlockMatrix::zero(ctx);
        m.put(block);
        m
    }

    fn put(&mut self, block: GradedBlock) {
        debug_assert_eq!(block.nvars, self.ctx.nvars());
        let d = self.ctx.degree_cap();
        if block.row_weight > d || block.col_weight > d || block.is_zero() {
            self.blocks.remove(&(block.row_weight, block.col_weight));
            return;
        }
        self.blocks
            .insert((block.row_weight, block.col_weight), block);
    }

    fn accumulate(&mut self, block: GradedBlock) {
        let key = (block.row_weight, block.col_weight);
        let d = self.ctx.degree_cap();
        if key.0 > d || key.1 > d {
            return;
        }
        let merged = match self.blocks.remove(&key) {
            Some(existing) => existing.add(&block).expect("same shape"),
            None => block,
        };
        self.put(merged);
    }

    pub fn ctx(&self) -> &SeriesContext {
        &self.ctx
    }

    pub fn block(&self, row_weight: u32, col_weight: u32) -> Option<&GradedBlock> {
        self.blocks.get(&(row_weight, col_weight))
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(u32, u32), &GradedBlock)> {
        self.blocks.iter()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ctx.ensure_same(&other.ctx)?;
        let mut out = self.clone();
        for b in other.blocks.values() {
            out.accumulate(b.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = BlockMatrix::zero(self.ctx);
        for b in self.blocks.values() {
            out.put(b.scale(k));
        }
        out
    }

    /// Graded convolution `C(p′,p) = Σ A(q′,q) ⊙ B(p′−q′, p−q)`.
    pub fn odot(&self, other: &Self) -> Result<Self> {
        self.ctx.ensure_same(&other.ctx)?;
        let d = self.ctx.degree_cap();
        let mut out = BlockMatrix::zero(self.ctx);
        for (&(ar, ac), a) in &self.blocks {
            for (&(br, bc), b) in &other.blocks {
                if ar + br > d || ac + bc > d {
                    continue;
                }
                out.accumulate(a.odot(b)?);
            }
        }
        Ok(out)
    }

    /// `A^{⊙m}`, with `A^{⊙0}` the ⊙-identity.
    pub fn odot_power(&self, m: u32) -> Result<Self> {
        let mut acc = BlockMatrix::mat_one(self.ctx);
        for _ in 0..m {
            acc = acc.odot(self)?;
        }
        Ok(acc)
    }

    /// `e^{⊙A} = Σ_i A^{⊙i}/i!`, for `A` with blocks only at positive weights,
    /// where the sum is finite under truncation.
    pub fn odot_exp(&self) -> Result<Self> {
        if let Some(&(r, c)) = self.blocks.keys().find(|&&(r, c)| r == 0 || c == 0) {
            return Err(Error::Precondition(format!(
                "⊙-exponential needs blocks at positive weights only, found block ({r},{c})"
            )));
        }
        let mut sum = BlockMatrix::mat_one(self.ctx);
        let mut power = BlockMatrix::mat_one(self.ctx);
        let mut i: u32 = 0;
        loop {
            power = power.odot(self)?;
            if power.is_zero() {
                break;
            }
            i += 1;
            let fact = factorial(i);
            for b in power.blocks.values() {
                let mut scaled = b.clone();
                scaled
                    .data
                    .iter_mut()
                    .for_each(|v| *v = v.div_biguint(&fact).expect("i! > 0"));
                sum.accumulate(scaled);
            }
        }
        Ok(sum)
    }

    /// Ordinary product of the block matrices, `C(p′,p) = Σ_q A(p′,q)·B(q,p)`.
    pub fn block_mul(&self, other: &Self) -> Result<Self> {
        self.ctx.ensure_same(&other.ctx)?;
        let mut out = BlockMatrix::zero(self.ctx);
        for (&(_, ac), a) in &self.blocks {
            for (_, b) in other.blocks.range((ac, 0)..=(ac, u32::MAX)) {
                out.accumulate(a.matmul(b)?);
            }
        }
        Ok(out)
    }

    /// `A^m` under the ordinary product, `A^0 = E_∞`.
    pub fn block_pow(&self, m: u32) -> Result<Self> {
        let mut acc = BlockMatrix::e_inf(self.ctx);
        for _ in 0..m {
            acc = acc.block_mul(self)?;
        }
        Ok(acc)
    }

    /// The matrix `M_φ`: block `(p′,1)` holds the degree-`p′` coefficients,
    /// entry `(α′, e_j)` being the coefficient of `x^{α′}` in `φ_j`.
    pub fn from_series(phi: &TruncatedSeriesMap) -> Self {
        let ctx = *phi.ctx();
        let n = ctx.nvars();
        let mut blocks: BTreeMap<u32, GradedBlock> = BTreeMap::new();
        for (j, comp) in phi.components().iter().enumerate() {
            for (idx, c) in comp {
                let p = idx.weight();
                let block = blocks
                    .entry(p)
                    .or_insert_with(|| GradedBlock::zeros(n, p, 1));
                // e_j has rank j among the weight-1 indices
                block.set(idx.rank_in_weight(), j, c.clone());
            }
        }
        let mut m = BlockMatrix::zero(ctx);
        for b in blocks.into_values() {
            m.put(b);
        }
        m
    }

    /// Inverse of [`BlockMatrix::from_series`].
    pub fn to_series(&self) -> Result<TruncatedSeriesMap> {
        let n = self.ctx.nvars();
        let mut comps = vec![Terms::new(); n];
        for (&(r, c), block) in &self.blocks {
            if c != 1 {
                return Err(Error::Precondition(format!(
                    "matrix has a block at ({r},{c}); only column weight 1 encodes a series"
                )));
            }
            if r == 0 {
                return Err(Error::ConstantTerm("block (0,1) is nonzero".into()));
            }
            for (row_idx, col_idx, v) in block.nonzero_entries() {
                let j = col_idx.rank_in_weight();
                comps[j].insert(row_idx, v);
            }
        }
        TruncatedSeriesMap::new(self.ctx, comps)
    }

    /// Text dump, one nonzero entry per line: `p' p | α' | α | value`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (&(r, c), block) in &self.blocks {
            for (ri, ci, v) in block.nonzero_entries() {
                let join = |m: &MultiIndex| {
                    m.entries()
                        .iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                writeln!(out, "{r} {c} | {} | {} | {v}", join(&ri), join(&ci))
                    .expect("string write");
            }
        }
        out
    }
}

/// `ψ ∘ φ` computed as `e^{⊙M_φ} · M_ψ`.
pub fn compose_via_matrix(
    psi: &TruncatedSeriesMap,
    phi: &TruncatedSeriesMap,
) -> Result<TruncatedSeriesMap> {
    psi.ctx().ensure_same(phi.ctx())?;
    let exp = BlockMatrix::from_series(phi).odot_exp()?;
    exp.block_mul(&BlockMatrix::from_series(psi))?.to_series()
}

/// `M_{φ^{∘m}} = (e^{⊙M_φ})^m · E_1`.
pub fn matrix_power_of_iterate(phi: &TruncatedSeriesMap, m: u32) -> Result<BlockMatrix> {
    let ctx = *phi.ctx();
    let exp = BlockMatrix::from_series(phi).odot_exp()?;
    exp.block_pow(m)?.block_mul(&BlockMatrix::e_one(ctx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize, d: u32) -> SeriesContext {
        SeriesContext::new(n, d).unwrap()
    }

    fn q(k: i64) -> Rational {
        Rational::from(k)
    }

    fn series(c: SeriesContext, comps: &[&[(&[u32], i64)]]) -> TruncatedSeriesMap {
        let components = comps
            .iter()
            .map(|c| {
                c.iter()
                    .map(|(e, v)| (MultiIndex::from_slice(e), q(*v)))
                    .collect()
            })
            .collect();
        TruncatedSeriesMap::new(c, components).unwrap()
    }

    #[test]
    fn odot_block_examples() {
        let a = GradedBlock::from_rows(1, 0, 1, vec![q(3)]).unwrap();
        let b = GradedBlock::from_rows(1, 0, 1, vec![q(5)]).unwrap();
        let c = a.odot(&b).unwrap();
        assert_eq!((c.row_weight(), c.col_weight()), (0, 2));
        assert_eq!(c.get(0, 0), &q(30));

        let h = GradedBlock::from_rows(2, 0, 1, vec![q(2), q(-3)]).unwrap();
        let hh = h.odot(&h).unwrap();
        assert_eq!(hh.cols(), 3);
        assert_eq!(
            [hh.get(0, 0), hh.get(0, 1), hh.get(0, 2)],
            [&q(8), &q(-12), &q(18)]
        );

        let a = GradedBlock::from_rows(2, 1, 1, vec![q(1), q(2), q(3), q(4)]).unwrap();
        let z = GradedBlock::zeros(2, 2, 1);
        assert!(a.odot(&z).unwrap().is_zero());
    }

    #[test]
    fn identities_and_units() {
        let c = ctx(2, 3);
        let phi = series(
            c,
            &[
                &[(&[1, 0], 1), (&[0, 2], 1)],
                &[(&[0, 1], 1), (&[1, 1], -2)],
            ],
        );
        let m = BlockMatrix::from_series(&phi);
        assert_eq!(m.odot(&BlockMatrix::mat_one(c)).unwrap(), m);
        assert_eq!(
            BlockMatrix::zero(c).odot_exp().unwrap(),
            BlockMatrix::mat_one(c)
        );
        assert_eq!(BlockMatrix::e_inf(c).block_mul(&m).unwrap(), m);
        assert_eq!(m.block_mul(&BlockMatrix::e_one(c)).unwrap(), m);

        let exp = m.odot_exp().unwrap();
        let col1 = exp.block_mul(&BlockMatrix::e_one(c)).unwrap();
        assert!(col1.blocks().all(|(&(_, p), _)| p == 1));
        assert_eq!(col1.block(2, 1), exp.block(2, 1));
    }

    #[test]
    fn exp_of_identity_is_block_identity() {
        let c = ctx(1, 6);
        let exp = BlockMatrix::from_series(&TruncatedSeriesMap::identity(c))
            .odot_exp()
            .unwrap();
        for m in 1..=6 {
            assert_eq!(exp.block(m, m), Some(&GradedBlock::identity(1, m)));
        }
        assert_eq!(exp.block_count(), 7);
        let c2 = ctx(2, 4);
        let exp2 = BlockMatrix::from_series(&TruncatedSeriesMap::identity(c2))
            .odot_exp()
            .unwrap();
        assert_eq!(exp2, BlockMatrix::e_inf(c2));
    }

    #[test]
    fn strictly_lower_products_drop_a_grade() {
        let c = ctx(2, 5);
        let mut a = BlockMatrix::zero(c);
        a.put(GradedBlock::from_rows(2, 2, 1, vec![q(1), q(0), q(1), q(2), q(0), q(1)]).unwrap());
        a.put(GradedBlock::from_rows(2, 3, 2, (0..12).map(q).collect()).unwrap());
        let prod = a.block_mul(&a).unwrap();
        assert!(!prod.is_zero());
        assert!(prod.blocks().all(|(&(r, c), _)| r >= c + 2));
    }

    #[test]
    fn exp_rejects_weight_zero_blocks() {
        let c = ctx(1, 3);
        assert!(matches!(
            BlockMatrix::mat_one(c).odot_exp(),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn screening_examples() {
        let c = ctx(2, 4);
        let phi = series(c, &[&[(&[1, 0], 1), (&[0, 2], 1)], &[(&[0, 1], 1)]]);
        let m = BlockMatrix::from_series(&phi);
        assert_eq!(m.block(1, 1), Some(&GradedBlock::identity(2, 1)));
        let b21 = m.block(2, 1).unwrap();
        assert_eq!(
            b21.nonzero_entries(),
            vec![(
                MultiIndex::from_slice(&[0, 2]),
                MultiIndex::from_slice(&[1, 0]),
                q(1)
            )]
        );
        assert_eq!(m.block_count(), 2);
        assert_eq!(m.to_series().unwrap(), phi);
        assert_eq!(
            BlockMatrix::from_series(&TruncatedSeriesMap::identity(c)),
            BlockMatrix::e_one(c)
        );
        assert!(matches!(
            BlockMatrix::e_inf(c).to_series(),
            Err(Error::Precondition(_))
        ));
        assert_eq!(
            m.dump(),
            "1 1 | 1 0 | 1 0 | 1\n1 1 | 0 1 | 0 1 | 1\n2 1 | 0 2 | 1 0 | 1\n"
        );
    }

    #[test]
    fn matrix_route_examples() {
        let c = ctx(1, 4);
        let psi = series(c, &[&[(&[2], 1)]]);
        let phi = series(c, &[&[(&[1], 1), (&[2], 1)]]);
        let expected = series(c, &[&[(&[2], 1), (&[3], 2), (&[4], 1)]]);
        assert_eq!(compose_via_matrix(&psi, &phi).unwrap(), expected);
        assert_eq!(
            compose_via_matrix(&phi, &TruncatedSeriesMap::identity(c)).unwrap(),
            phi
        );

        let c2 = ctx(2, 4);
        let phi2 = series(c2, &[&[(&[1, 0], 1), (&[0, 2], 1)], &[(&[0, 1], 1)]]);
        let psi2 = series(c2, &[&[(&[1, 0], 1), (&[0, 2], -1)], &[(&[0, 1], 1)]]);
        assert_eq!(
            compose_via_matrix(&psi2, &phi2).unwrap(),
            TruncatedSeriesMap::identity(c2)
        );
    }

    #[test]
    fn iterate_matrix_examples() {
        let c = ctx(1, 4);
        let phi = series(c, &[&[(&[1], 1), (&[2], 1)]]);
        assert_eq!(
            matrix_power_of_iterate(&phi, 1).unwrap(),
            BlockMatrix::from_series(&phi)
        );
        let twice = series(c, &[&[(&[1], 1), (&[2], 2), (&[3], 2), (&[4], 1)]]);
        assert_eq!(
            matrix_power_of_iterate(&phi, 2).unwrap(),
            BlockMatrix::from_series(&twice)
        );
        let id = TruncatedSeriesMap::identity(c);
        for m in 1..4 {
            assert_eq!(
                matrix_power_of_iterate(&id, m).unwrap(),
                BlockMatrix::e_one(c)
            );
        }
    }
}
