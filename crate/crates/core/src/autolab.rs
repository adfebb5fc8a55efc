//! Experiments on exact polynomial maps: vanishing of the `Φ_m` tail,
//! Jacobian-form check, and tame automorphisms built from elementary maps.
//!
//! Nothing here truncates silently. Untruncated arithmetic runs under
//! [`Limits`] and aborts with [`Error::ResourceCap`] when they are exceeded.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeff::Rational;
use crate::error::{Error, Result};
use crate::inversion::{invert, Method};
use crate::multiindex::{enumerate_weight_n, MultiIndex, SeriesContext};
use crate::poly::{self, Bound, Limits, Substitution, Terms};
use crate::series::{JacobianSeriesMatrix, ScalarSeries, TruncatedSeriesMap};

/// A polynomial map `F^n → F^n` with zero constant term and no degree cap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolynomialMap {
    nvars: usize,
    components: Vec<Terms>,
}

impl PolynomialMap {
    pub fn new(nvars: usize, components: Vec<Terms>) -> Result<Self> {
        if nvars == 0 || components.len() != nvars {
            return Err(Error::Precondition(format!(
                "expected {nvars} components, got {}",
                components.len()
            )));
        }
        let mut clean = Vec::with_capacity(nvars);
        for (j, comp) in components.into_iter().enumerate() {
            let mut out = Terms::new();
            for (idx, c) in comp {
                if idx.len() != nvars {
                    return Err(Error::LengthMismatch {
                        left: idx.len(),
                        right: nvars,
                    });
                }
                if c.is_zero() {
                    continue;
                }
                if idx.weight() == 0 {
                    return Err(Error::ConstantTerm(format!(
                        "component {} has constant {c}",
                        j + 1
                    )));
                }
                out.insert(idx, c);
            }
            clean.push(out);
        }
        Ok(PolynomialMap {
            nvars,
            components: clean,
        })
    }

    pub fn identity(nvars: usize) -> Self {
        let components = (0..nvars)
            .map(|j| {
                [(MultiIndex::unit(nvars, j), Rational::one())]
                    .into_iter()
                    .collect()
            })
            .collect();
        PolynomialMap { nvars, components }
    }

    /// Reads the coefficients of a truncated map as an exact polynomial.
    pub fn from_truncated(map: &TruncatedSeriesMap) -> Self {
        PolynomialMap {
            nvars: map.nvars(),
            components: map.components().to_vec(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn components(&self) -> &[Terms] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Terms::is_empty)
    }

    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(poly::degree).max()
    }

    pub fn term_count(&self) -> usize {
        self.components.iter().map(Terms::len).sum()
    }

    pub fn has_identity_linear_part(&self) -> bool {
        let n = self.nvars;
        (0..n).all(|i| {
            (0..n).all(|j| {
                let c = self.components[i]
                    .get(&MultiIndex::unit(n, j))
                    .cloned()
                    .unwrap_or_default();
                if i == j {
                    c.is_one()
                } else {
                    c.is_zero()
                }
            })
        })
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::LengthMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
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
        Ok(PolynomialMap {
            nvars: self.nvars,
            components,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| poly::sub(a, b))
            .collect();
        Ok(PolynomialMap {
            nvars: self.nvars,
            components,
        })
    }

    /// Exact `self ∘ inner`.
    pub fn compose(&self, inner: &Self, limits: Limits) -> Result<Self> {
        self.check_vars(inner)?;
        let mut subst = Substitution::new(self.nvars, &inner.components, Bound::Exact(limits));
        Ok(PolynomialMap {
            nvars: self.nvars,
            components: subst.apply_all(&self.components)?,
        })
    }

    /// Truncation to total degree `D`.
    pub fn truncate(&self, degree_cap: u32) -> Result<TruncatedSeriesMap> {
        TruncatedSeriesMap::new(
            SeriesContext::new(self.nvars, degree_cap)?,
            self.components.clone(),
        )
    }
}

/// One row of a tail report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailRecord {
    pub m: usize,
    /// `None` for the zero map.
    pub degree: Option<u32>,
    pub terms: usize,
    pub zero: bool,
}

/// Outcome of [`tail_vanishing_test`].
#[derive(Debug, Clone)]
pub struct TailReport {
    pub searched_upto: usize,
    /// Least `m` with `Φ_m ≡ 0`, when one was found.
    pub vanishing_m0: Option<usize>,
    /// Records for `Φ_1 … Φ_{m_max}`.
    pub records: Vec<TailRecord>,
    /// `x + Σ_{m<m0} Φ_m`, verified to be a two-sided inverse.
    pub certificate_inverse: Option<PolynomialMap>,
}

impl TailReport {
    pub fn degrees(&self) -> Vec<Option<u32>> {
        self.records.iter().map(|r| r.degree).collect()
    }
}

/// Computes `Φ_1 … Φ_{m_max}` exactly. When some `Φ_{m0}` vanishes, checks
/// that all later terms vanish too and emits the polynomial inverse
/// `x + Σ_{m=1}^{m0−1} Φ_m`, verified by exact composition on both sides.
pub fn tail_vanishing_test(
    phi: &PolynomialMap,
    m_max: usize,
    limits: Limits,
) -> Result<TailReport> {
    if m_max == 0 {
        return Err(Error::Precondition("m_max must be at least 1".into()));
    }
    if !phi.has_identity_linear_part() {
        return Err(Error::NonIdentityLinearPart(
            "tail test needs an identity linear part".into(),
        ));
    }
    let n = phi.nvars();
    let mut subst = Substitution::new(n, &phi.components, Bound::Exact(limits));
    let mut current = PolynomialMap::identity(n);
    let mut partial_sum = PolynomialMap::identity(n);
    let mut records = Vec::with_capacity(m_max);
    let mut vanishing_m0 = None;
    let mut certificate = None;

    for m in 1..=m_max {
        let shifted = PolynomialMap {
            nvars: n,
            components: subst.apply_all(&current.components)?,
        };
        current = current.sub(&shifted)?;
        let zero = current.is_zero();
        records.push(TailRecord {
            m,
            degree: current.degree(),
            terms: current.term_count(),
            zero,
        });
        match (zero, vanishing_m0) {
            (true, None) => {
                vanishing_m0 = Some(m);
                certificate = Some(partial_sum.clone());
            }
            (false, Some(m0)) => {
                return Err(Error::Verification(format!(
                    "Φ_{m0} vanishes but Φ_{m} does not"
                )));
            }
            (false, None) => partial_sum = partial_sum.add(&current)?,
            (true, Some(_)) => {}
        }
    }

    if let Some(cert) = &certificate {
        let id = PolynomialMap::identity(n);
        if phi.compose(cert, limits)? != id || cert.compose(phi, limits)? != id {
            return Err(Error::Verification(
                "certificate inverse does not compose to the identity".into(),
            ));
        }
    }

    Ok(TailReport {
        searched_upto: m_max,
        vanishing_m0,
        records,
        certificate_inverse: certificate,
    })
}

/// Outcome of [`jacobian_form_check`].
#[derive(Debug, Clone)]
pub struct JacobianCheck {
    pub holds: bool,
    /// Left side minus the identity, entrywise, truncated at `D`.
    pub residual: Vec<Vec<Terms>>,
}

/// Evaluates `∂φ(x)·(m·E + Σ_{k=2}^m (−1)^{k−1} C(m,k) ∂φ|_{φ(x)} ⋯ ∂φ|_{φ^{∘(k−1)}(x)})`
/// over series truncated at degree `D` and compares it with the identity.
///
/// Agreement through degree `D` is equivalent to `Φ_m` vanishing through
/// degree `D + 1`.
pub fn jacobian_form_check(
    phi: &PolynomialMap,
    m: usize,
    degree_cap: u32,
) -> Result<JacobianCheck> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let n = phi.nvars();
    let ctx = SeriesContext::new(n, degree_cap)?;
    let jac = exact_jacobian(phi, ctx);
    let phi_trunc = phi.truncate(degree_cap)?;

    let mut inner =
        JacobianSeriesMatrix::identity(ctx, degree_cap).scale(&Rational::from(m as i64));
    let mut chain: Option<JacobianSeriesMatrix> = None;
    let mut iterate = phi_trunc.clone();
    for k in 2..=m {
        // chain = ∂φ|_{φ} ⋯ ∂φ|_{φ^{∘(k−1)}}
        let factor = jac.evaluate_at(&iterate)?;
        chain = Some(match chain {
            None => factor,
            Some(c) => c.matmul(&factor),
        });
        let mut c = Rational::from_biguint(crate::multiindex::binomial(m as u32, k as u32));
        if k % 2 == 0 {
            c = -c;
        }
        inner = inner.add(&chain.as_ref().expect("set above").scale(&c));
        iterate = iterate.compose(&phi_trunc)?;
    }
    let lhs = jac.matmul(&inner);
    let residual = lhs.difference(&JacobianSeriesMatrix::identity(ctx, degree_cap));
    let holds = residual.iter().flatten().all(Terms::is_empty);
    Ok(JacobianCheck { holds, residual })
}

fn exact_jacobian(phi: &PolynomialMap, ctx: SeriesContext) -> JacobianSeriesMatrix {
    let n = phi.nvars();
    let d = ctx.degree_cap();
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| ScalarSeries::new(n, d, poly::derivative(&phi.components[j], i)))
                .collect()
        })
        .collect();
    JacobianSeriesMatrix::from_entries(ctx, entries)
}

/// `x_j ↦ x_j + g`, identity elsewhere (`j` 0-based); `g` must not involve
/// `x_j` and must have no constant term.
pub fn elementary_automorphism(nvars: usize, j: usize, g: &Terms) -> Result<PolynomialMap> {
    if j >= nvars {
        return Err(Error::Precondition(format!(
            "variable {} out of range",
            j + 1
        )));
    }
    for (idx, c) in g {
        if idx.len() != nvars {
            return Err(Error::LengthMismatch {
                left: idx.len(),
                right: nvars,
            });
        }
        if !c.is_zero() && idx.get(j) > 0 {
            return Err(Error::Precondition(format!(
                "g involves x_{} through {idx}",
                j + 1
            )));
        }
    }
    let mut components = PolynomialMap::identity(nvars).components;
    poly::add_scaled(&mut components[j], g, &Rational::one());
    PolynomialMap::new(nvars, components)
}

/// A random tame automorphism with its inverse and the generators used.
#[derive(Debug, Clone)]
pub struct TameSample {
    pub map: PolynomialMap,
    pub inverse: PolynomialMap,
    /// `(j, g)` in application order: the map is `e_s ∘ ⋯ ∘ e_1`.
    pub generators: Vec<(usize, Terms)>,
}

/// Composes `steps` seeded random elementary maps whose `g` have degree 2 or
/// 3 and coefficients in `[−3, 3]`; the inverse is the reversed composition
/// of the elementary inverses.
pub fn random_tame(nvars: usize, steps: usize, seed: u64, limits: Limits) -> Result<TameSample> {
    if nvars < 2 {
        return Err(Error::Precondition(
            "elementary maps need at least two variables".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut generators = Vec::with_capacity(steps);
    for _ in 0..steps {
        let j = rng.gen_range(0..nvars);
        let candidates: Vec<MultiIndex> = (2..=3)
            .flat_map(|p| enumerate_weight_n(nvars, p))
            .filter(|idx| idx.get(j) == 0)
            .collect();
        let mut g = Terms::new();
        let count = rng.gen_range(1..=3);
        while g.len() < count.min(candidates.len()) {
            let idx = &candidates[rng.gen_range(0..candidates.len())];
            let c = loop {
                let v: i64 = rng.gen_range(-3..=3);
                if v != 0 {
                    break v;
                }
            };
            g.entry(idx.clone()).or_insert_with(|| Rational::from(c));
        }
        generators.push((j, g));
    }
    tame_from_generators(nvars, generators, limits)
}

/// Composes the given elementary maps (first applied first).
pub fn tame_from_generators(
    nvars: usize,
    generators: Vec<(usize, Terms)>,
    limits: Limits,
) -> Result<TameSample> {
    let mut map = PolynomialMap::identity(nvars);
    let mut inverse = PolynomialMap::identity(nvars);
    for (j, g) in &generators {
        let e = elementary_automorphism(nvars, *j, g)?;
        let neg: Terms = g.iter().map(|(k, v)| (k.clone(), -v)).collect();
        let e_inv = elementary_automorphism(nvars, *j, &neg)?;
        map = e.compose(&map, limits)?;
        inverse = inverse.compose(&e_inv, limits)?;
    }
    Ok(TameSample {
        map,
        inverse,
        generators,
    })
}

/// Truncates `φ` to degree `D`, inverts it with every method and compares
/// each result with the truncated certificate.
pub fn cross_validate(
    phi: &PolynomialMap,
    certificate: &PolynomialMap,
    degree_cap: u32,
) -> Result<bool> {
    let truncated = phi.truncate(degree_cap)?;
    let expected = certificate.truncate(degree_cap)?;
    for method in Method::ALL {
        if invert(&truncated, method)? != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(n: usize, comps: &[&[(&[u32], i64)]]) -> PolynomialMap {
        let components = comps
            .iter()
            .map(|c| {
                c.iter()
                    .map(|(e, v)| (MultiIndex::from_slice(e), Rational::from(*v)))
                    .collect()
            })
            .collect();
        PolynomialMap::new(n, components).unwrap()
    }

    fn terms(entries: &[(&[u32], i64)]) -> Terms {
        entries
            .iter()
            .map(|(e, v)| (MultiIndex::from_slice(e), Rational::from(*v)))
            .collect()
    }

    fn shear() -> PolynomialMap {
        pm(2, &[&[(&[1, 0], 1), (&[0, 2], 1)], &[(&[0, 1], 1)]])
    }

    #[test]
    fn tail_test_on_shear() {
        let report = tail_vanishing_test(&shear(), 4, Limits::default()).unwrap();
        assert_eq!(report.vanishing_m0, Some(2));
        assert_eq!(
            report.certificate_inverse,
            Some(pm(2, &[&[(&[1, 0], 1), (&[0, 2], -1)], &[(&[0, 1], 1)]]))
        );
        assert_eq!(report.degrees(), vec![Some(2), None, None, None]);
        assert!(report.records[1..].iter().all(|r| r.zero));
    }

    #[test]
    fn tail_test_on_identity() {
        let report =
            tail_vanishing_test(&PolynomialMap::identity(3), 3, Limits::default()).unwrap();
        assert_eq!(report.vanishing_m0, Some(1));
        assert_eq!(report.certificate_inverse, Some(PolynomialMap::identity(3)));
    }

    #[test]
    fn tail_test_on_catalan_map() {
        let phi = pm(1, &[&[(&[1], 1), (&[2], 1)]]);
        let report = tail_vanishing_test(&phi, 6, Limits::default()).unwrap();
        assert_eq!(report.vanishing_m0, None);
        assert!(report.certificate_inverse.is_none());
        let degrees: Vec<u32> = report.degrees().into_iter().map(Option::unwrap).collect();
        assert_eq!(degrees, vec![2, 4, 8, 16, 32, 64]);
    }

    #[test]
    fn tail_test_hits_resource_cap() {
        let phi = pm(1, &[&[(&[1], 1), (&[2], 1)]]);
        let limits = Limits {
            max_terms: 1000,
            max_degree: 20,
        };
        assert!(matches!(
            tail_vanishing_test(&phi, 8, limits),
            Err(Error::ResourceCap(_))
        ));
        let two_x = pm(1, &[&[(&[1], 2)]]);
        assert!(matches!(
            tail_vanishing_test(&two_x, 3, Limits::default()),
            Err(Error::NonIdentityLinearPart(_))
        ));
    }

    #[test]
    fn jacobian_form_examples() {
        assert!(jacobian_form_check(&shear(), 2, 6).unwrap().holds);
        assert!(
            jacobian_form_check(&PolynomialMap::identity(2), 1, 4)
                .unwrap()
                .holds
        );

        let phi = pm(1, &[&[(&[1], 1), (&[2], 1)]]);
        let check = jacobian_form_check(&phi, 2, 4).unwrap();
        assert!(!check.holds);
        // (1+2x)(1−2x−2x²) − 1 = −6x² − 4x³
        assert_eq!(check.residual[0][0], terms(&[(&[2], -6), (&[3], -4)]));
    }

    #[test]
    fn elementary_maps() {
        let g = terms(&[(&[0, 2], 1)]);
        let e = elementary_automorphism(2, 0, &g).unwrap();
        assert_eq!(e, shear());
        let neg = terms(&[(&[0, 2], -1)]);
        let e_inv = elementary_automorphism(2, 0, &neg).unwrap();
        assert_eq!(
            e.compose(&e_inv, Limits::default()).unwrap(),
            PolynomialMap::identity(2)
        );
        let bad = terms(&[(&[1, 1], 1)]);
        assert!(matches!(
            elementary_automorphism(2, 0, &bad),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn two_step_tame_by_hand() {
        // σ = (x, y + x²), τ = (x + y², y)
        let gens = vec![(1, terms(&[(&[2, 0], 1)])), (0, terms(&[(&[0, 2], 1)]))];
        let sample = tame_from_generators(2, gens, Limits::default()).unwrap();
        // (x + (y + x²)², y + x²)
        let expected = pm(
            2,
            &[
                &[(&[1, 0], 1), (&[0, 2], 1), (&[2, 1], 2), (&[4, 0], 1)],
                &[(&[0, 1], 1), (&[2, 0], 1)],
            ],
        );
        assert_eq!(sample.map, expected);
        // (x − y², y − (x − y²)²)
        let inv = pm(
            2,
            &[
                &[(&[1, 0], 1), (&[0, 2], -1)],
                &[(&[0, 1], 1), (&[2, 0], -1), (&[1, 2], 2), (&[0, 4], -1)],
            ],
        );
        assert_eq!(sample.inverse, inv);
    }

    #[test]
    fn random_tame_is_seeded_and_invertible() {
        let a = random_tame(3, 3, 17, Limits::default()).unwrap();
        let b = random_tame(3, 3, 17, Limits::default()).unwrap();
        assert_eq!(a.map, b.map);
        let id = PolynomialMap::identity(3);
        assert_eq!(a.map.compose(&a.inverse, Limits::default()).unwrap(), id);
        assert_eq!(a.inverse.compose(&a.map, Limits::default()).unwrap(), id);
        assert!(a.map.has_identity_linear_part());
        assert!(random_tame(1, 2, 0, Limits::default()).is_err());
    }
}
