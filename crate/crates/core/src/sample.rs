//! Seeded random inputs for benchmarks and property checks.

use rand::Rng;

use crate::coeff::Rational;
use crate::multiindex::{enumerate_weight_n, MultiIndex, SeriesContext};
use crate::poly::Terms;
use crate::series::TruncatedSeriesMap;

/// Shape of a random unit-tangent map `x + (terms of degree 2..=max_degree)`.
#[derive(Debug, Clone, Copy)]
pub struct MapShape {
    pub max_degree: u32,
    pub coeff_bound: i64,
    /// Probability that a given monomial is present; `1.0` gives a dense map.
    pub density: f64,
}

/// Random `φ = id + H` with `H` supported in degrees `2..=max_degree` (capped
/// at `D`) and integer coefficients in `[−bound, bound]`.
pub fn random_unit_tangent<R: Rng>(
    ctx: SeriesContext,
    shape: MapShape,
    rng: &mut R,
) -> TruncatedSeriesMap {
    let n = ctx.nvars();
    let top = shape.max_degree.min(ctx.degree_cap());
    let monomials: Vec<MultiIndex> = (2..=top).flat_map(|p| enumerate_weight_n(n, p)).collect();
    let components = (0..n)
        .map(|j| {
            let mut t = Terms::new();
            t.insert(MultiIndex::unit(n, j), Rational::one());
            for m in &monomials {
                if rng.gen_bool(shape.density.clamp(0.0, 1.0)) {
                    let c = rng.gen_range(-shape.coeff_bound..=shape.coeff_bound);
                    if c != 0 {
                        t.insert(m.clone(), Rational::from(c));
                    }
                }
            }
            t
        })
        .collect();
    TruncatedSeriesMap::new(ctx, components).expect("no constant terms")
}

/// Random map with zero constant term and arbitrary linear part, for the
/// composition identities.
pub fn random_map<R: Rng>(
    ctx: SeriesContext,
    max_degree: u32,
    coeff_bound: i64,
    rng: &mut R,
) -> TruncatedSeriesMap {
    let n = ctx.nvars();
    let top = max_degree.min(ctx.degree_cap());
    let monomials: Vec<MultiIndex> = (1..=top).flat_map(|p| enumerate_weight_n(n, p)).collect();
    let components = (0..n)
        .map(|_| {
            monomials
                .iter()
                .filter_map(|m| {
                    let c = rng.gen_range(-coeff_bound..=coeff_bound);
                    (c != 0 && rng.gen_bool(0.6)).then(|| (m.clone(), Rational::from(c)))
                })
                .collect()
        })
        .collect();
    TruncatedSeriesMap::new(ctx, components).expect("no constant terms")
}
