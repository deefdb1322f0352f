//! Eigenvalues of (weighted) derangement graphs from characters, the ratio
//! bound, and exact rational evaluation of the published weightings.
//!
//! For a class function `w` supported on derangement classes, the weighted
//! Cayley graph has eigenvalue `(1/chi(1)) sum_i w_i |D_i| chi(D_i)` with
//! multiplicity `chi(1)^2` for every irreducible `chi`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::characters::{sl_category_sizes, sl_category_sums, CharacterRow, CharacterTable, GlCharacter};
use crate::error::{Error, Result};
use crate::group::{Family, GroupContext};

/// Largest group for which the dense adjacency matrix is diagonalized.
pub const DENSE_SPECTRUM_LIMIT: usize = 500;

/// One weight per conjugacy class; zero off the derangement classes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightVector {
    pub weights: Vec<f64>,
}

impl WeightVector {
    /// Weight 1 on every derangement class.
    pub fn unit(ctx: &GroupContext) -> Self {
        Self { weights: ctx.classes().iter().map(|c| if c.is_derangement { 1.0 } else { 0.0 }).collect() }
    }

    /// Check support and inverse-class tying.
    pub fn validate(&self, ctx: &GroupContext) -> Result<()> {
        if self.weights.len() != ctx.classes().len() {
            return Err(Error::Inconsistent("weight vector length differs from class count".into()));
        }
        for (i, c) in ctx.classes().iter().enumerate() {
            if !c.is_derangement && self.weights[i] != 0.0 {
                return Err(Error::Inconsistent(format!("weight on non-derangement class {i}")));
            }
            if self.weights[i] != self.weights[c.inverse_class as usize] {
                return Err(Error::Inconsistent(format!("weights of class {i} and its inverse differ")));
            }
        }
        Ok(())
    }
}

/// `(1/chi(1)) sum_i w_i |C_i| chi(C_i)`, real part after checking the
/// imaginary residual.
pub fn eigenvalue(row: &CharacterRow, class_sizes: &[u32], weights: &WeightVector) -> Result<f64> {
    let z: Complex64 = weights
        .weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w != 0.0)
        .map(|(i, &w)| row.central(i, class_sizes[i]) * w)
        .sum();
    let scale = 1.0 + z.re.abs();
    if z.im.abs() > 1e-8 * scale {
        return Err(Error::ComplexResidual { what: format!("eigenvalue of {}", row.label), residual: z.im.abs() });
    }
    Ok(z.re)
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEntry {
    pub label: String,
    pub degree: u32,
    pub eigenvalue: f64,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub family: Family,
    pub q: u32,
    pub vertices: usize,
    pub entries: Vec<SpectrumEntry>,
    pub max: f64,
    pub min: f64,
    /// Eigenvalue of the trivial character (the row sum).
    pub row_sum: f64,
}

impl SpectrumReport {
    /// Distinct eigenvalues (binned at `tol`) with summed multiplicities, descending.
    pub fn grouped(&self, tol: f64) -> Vec<(f64, u64)> {
        let mut vals: Vec<(f64, u64)> = self.entries.iter().map(|e| (e.eigenvalue, e.multiplicity)).collect();
        vals.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut out: Vec<(f64, u64)> = Vec::new();
        for (v, m) in vals {
            match out.last_mut() {
                Some(last) if (last.0 - v).abs() <= tol => last.1 += m,
                _ => out.push((v, m)),
            }
        }
        out
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Eigenvalues expanded by multiplicity, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.vertices);
        for e in &self.entries {
            out.extend(std::iter::repeat_n(e.eigenvalue, e.multiplicity as usize));
        }
        out.sort_by(f64::total_cmp);
        out
    }
}

/// Spectrum of the weighted derangement graph of `ctx` computed from `table`.
pub fn spectrum(ctx: &GroupContext, table: &CharacterTable, weights: &WeightVector) -> Result<SpectrumReport> {
    weights.validate(ctx)?;
    let trivial = table.trivial_row().ok_or_else(|| Error::Inconsistent("no trivial character".into()))?;
    let mut entries = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        entries.push(SpectrumEntry {
            label: row.label.clone(),
            degree: row.degree,
            eigenvalue: eigenvalue(row, &table.class_sizes, weights)?,
            multiplicity: (row.degree as u64).pow(2),
        });
    }
    let max = entries.iter().map(|e| e.eigenvalue).fold(f64::NEG_INFINITY, f64::max);
    let min = entries.iter().map(|e| e.eigenvalue).fold(f64::INFINITY, f64::min);
    Ok(SpectrumReport {
        family: ctx.family(),
        q: ctx.q(),
        vertices: ctx.order(),
        row_sum: entries[trivial].eigenvalue,
        entries,
        max,
        min,
    })
}

/// GL(2,q) spectrum from the explicit character table.
pub fn gl_spectrum(ctx: &GroupContext, weights: &WeightVector) -> Result<SpectrumReport> {
    let table = CharacterTable::gl_explicit(ctx)?;
    spectrum(ctx, &table, weights)
}

/// `|V| / (1 - d/tau)` with `d` the row sum and `tau` the least eigenvalue.
pub fn ratio_bound(report: &SpectrumReport) -> Result<f64> {
    ratio_bound_from(report.vertices as f64, report.row_sum, report.min)
}

pub fn ratio_bound_from(vertices: f64, d: f64, tau: f64) -> Result<f64> {
    if tau >= 0.0 {
        return Err(Error::NonNegativeTau(tau));
    }
    Ok(vertices / (1.0 - d / tau))
}

pub fn ratio_bound_exact(vertices: i64, d: Rational64, tau: Rational64) -> Result<Rational64> {
    if tau >= Rational64::zero() {
        return Err(Error::NonNegativeTau(tau.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(Rational64::from_integer(vertices) / (Rational64::from_integer(1) - d / tau))
}

// ---- published weightings ----------------------------------------------

/// Weight per class category c1..c4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CategoryWeights(pub [Rational64; 4]);

impl CategoryWeights {
    /// Spread the category weights onto the derangement classes of `ctx`.
    pub fn to_vector(&self, ctx: &GroupContext) -> Result<WeightVector> {
        let weights = ctx
            .classes()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if !c.is_derangement {
                    return Ok(0.0);
                }
                let cat = c.gl_category.ok_or(Error::MissingCategory(i))?;
                Ok(self.0[cat.index()].to_f64().unwrap_or(f64::NAN))
            })
            .collect::<Result<_>>()?;
        Ok(WeightVector { weights })
    }
}

/// The published weighting for GL(2,q) or SL(2,q).
///
/// For GL with q = 3 the c3 category has no derangement classes and gets
/// weight 0 instead of its pole.
pub fn canonical_weights(family: Family, q: u32) -> Result<CategoryWeights> {
    let qi = q as i64;
    let r = Rational64::new;
    let z = Rational64::zero();
    match family {
        Family::Gl if q >= 3 => Ok(CategoryWeights([
            r(-(qi - 1), qi * (qi - 2)),
            r(1, qi * (qi - 2)),
            if q == 3 { z } else { r(1, qi * (qi - 3)) },
            r(1, qi * (qi - 1)),
        ])),
        Family::Sl if q >= 3 && q % 2 == 1 => {
            Ok(CategoryWeights([z, r(1, qi - 1), r(1, qi), r(qi * qi - 3, qi * (qi - 1) * (qi - 1))]))
        }
        Family::Sl if q >= 4 && q.is_multiple_of(2) => Ok(CategoryWeights([z, z, r(1, qi), r(qi + 2, qi * qi)])),
        _ => Err(Error::Unsupported(format!("no published weighting for {family}(2,{q})"))),
    }
}

/// One row of the exact weighted-eigenvalue comparison.
#[derive(Clone, Debug, Serialize)]
pub struct WeightedRow {
    pub label: String,
    /// Name of the published row this character falls under.
    pub row: &'static str,
    pub count: i64,
    pub computed: Rational64,
    pub stated: Rational64,
}

impl WeightedRow {
    pub fn matches(&self) -> bool {
        self.computed == self.stated
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightedTable {
    pub family: Family,
    pub q: u32,
    pub order: i64,
    pub rows: Vec<WeightedRow>,
    pub max: Rational64,
    pub min: Rational64,
    pub ratio_bound: Rational64,
}

impl WeightedTable {
    /// Rows that disagree, skipping rows with no characters at this q.
    pub fn mismatches(&self) -> Vec<&WeightedRow> {
        self.rows.iter().filter(|r| r.count > 0 && !r.matches()).collect()
    }

    fn finish(family: Family, q: u32, order: i64, rows: Vec<WeightedRow>) -> Result<Self> {
        let live = rows.iter().filter(|r| r.count > 0);
        let max = live.clone().map(|r| r.computed).max().ok_or_else(|| Error::Inconsistent("empty table".into()))?;
        let min = live.map(|r| r.computed).min().unwrap_or(max);
        let ratio_bound = ratio_bound_exact(order, max, min)?;
        Ok(Self { family, q, order, rows, max, min, ratio_bound })
    }
}

fn to_rational(z: Complex64, what: &str) -> Result<Rational64> {
    let r = z.re.round();
    let residual = (z.re - r).abs().max(z.im.abs());
    if residual > 1e-6 {
        return Err(Error::ComplexResidual { what: what.to_string(), residual });
    }
    Ok(Rational64::from_integer(r as i64))
}

/// Published eigenvalue of the GL row a character falls under, with the row name.
pub fn gl_stated_weighted(q: u32, ch: GlCharacter) -> (&'static str, Rational64) {
    let qi = q as i64;
    let m = q - 1;
    let r = Rational64::new;
    let i = Rational64::from_integer;
    let rho1_else = || r(qi - 1, qi - 2) + r(qi + 1, qi - 3);
    match ch {
        GlCharacter::Rho1 { alpha: 0 } => ("rho1, alpha=1", i(qi * qi - 2)),
        GlCharacter::Rho1 { alpha } if (2 * alpha) % m == 0 => ("rho1, alpha^2=1", i(-1)),
        GlCharacter::Rho1 { .. } => ("rho1, else", rho1_else()),
        GlCharacter::Pi { chi } if chi % m == 0 => ("pi, chi=1 on GF(q)*", i(qi - 3)),
        GlCharacter::Pi { .. } => ("pi, else", r(2, qi - 2)),
        GlCharacter::RhoBar { alpha: 0 } => ("rho_bar, alpha=1", i(-1)),
        GlCharacter::RhoBar { alpha } if (2 * alpha) % m == 0 => ("rho_bar, alpha^2=1", i(-1)),
        GlCharacter::RhoBar { .. } => ("rho_bar, else", rho1_else() / i(qi)),
        GlCharacter::Rho2 { alpha, beta } if (alpha + beta) % m == 0 => ("rho2, alpha=conj(beta)", i(-1)),
        GlCharacter::Rho2 { alpha: 0, .. } => ("rho2, alpha=1", i(-1)),
        GlCharacter::Rho2 { .. } => ("rho2, else", r(2, qi - 3)),
    }
}

/// Exact weighted eigenvalues of GL(2,q) under the published weighting,
/// one row per irreducible character, against the published values.
pub fn gl_weighted_table(ctx: &GroupContext) -> Result<WeightedTable> {
    if ctx.family() != Family::Gl {
        return Err(Error::Unsupported("GL weighted table needs a GL group".into()));
    }
    let q = ctx.q();
    let w = canonical_weights(Family::Gl, q)?;
    let table = CharacterTable::gl_explicit(ctx)?;
    let mut rows = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let ch = row.gl.expect("explicit GL rows carry their parameters");
        let computed = exact_weighted(ctx, row, &w)?;
        let (name, stated) = gl_stated_weighted(q, ch);
        rows.push(WeightedRow { label: row.label.clone(), row: name, count: 1, computed, stated });
    }
    WeightedTable::finish(Family::Gl, q, ctx.order() as i64, rows)
}

/// `sum_cat w_cat (sum_{C in cat, derangement} |C| chi(C)) / chi(1)` in exact arithmetic.
pub fn exact_weighted(ctx: &GroupContext, row: &CharacterRow, w: &CategoryWeights) -> Result<Rational64> {
    let mut totals = [Complex64::new(0.0, 0.0); 4];
    for (i, c) in ctx.classes().iter().enumerate() {
        if c.is_derangement {
            let cat = c.gl_category.ok_or(Error::MissingCategory(i))?;
            totals[cat.index()] += row.values[i] * c.size as f64;
        }
    }
    let mut acc = Rational64::zero();
    for k in 0..4 {
        acc += w.0[k] * to_rational(totals[k], &row.label)?;
    }
    Ok(acc / Rational64::from_integer(row.degree as i64))
}

/// Exact weighted eigenvalues of SL(2,q) computed from the published category
/// sums and weighting, against the published final column.
pub fn sl_weighted_table(q: u32) -> Result<WeightedTable> {
    let w = canonical_weights(Family::Sl, q)?;
    let sizes = sl_category_sizes(q);
    let mut rows = Vec::new();
    for row in sl_category_sums(q)? {
        let mut acc = Rational64::zero();
        for k in 0..4 {
            acc += w.0[k] * sizes[k] * row.sums[k];
        }
        rows.push(WeightedRow {
            label: row.label.to_string(),
            row: row.label,
            count: row.count,
            computed: acc / row.degree,
            stated: row.stated_eigenvalue,
        });
    }
    let qi = q as i64;
    WeightedTable::finish(Family::Sl, q, qi * (qi * qi - 1), rows)
}

// ---- dense cross-check -------------------------------------------------

/// Weighted adjacency `A[g][h] = w(class of h^-1 g)`.
pub fn weighted_adjacency(ctx: &GroupContext, weights: &WeightVector) -> Result<DMatrix<f64>> {
    let n = ctx.order();
    if n > DENSE_SPECTRUM_LIMIT {
        return Err(Error::Budget(format!("dense adjacency of {n} vertices > {DENSE_SPECTRUM_LIMIT}")));
    }
    let mut a = DMatrix::<f64>::zeros(n, n);
    for h in 0..n {
        let hi = ctx.inv(h);
        for g in 0..n {
            a[(g, h)] = weights.weights[ctx.class_of(ctx.mul(hi, g))];
        }
    }
    Ok(a)
}

/// Eigenvalues of the dense weighted adjacency matrix, ascending.
pub fn numeric_spectrum(ctx: &GroupContext, weights: &WeightVector) -> Result<Vec<f64>> {
    let a = weighted_adjacency(ctx, weights)?;
    let asym = (&a - a.transpose()).amax();
    if asym > 1e-12 {
        return Err(Error::Inconsistent(format!("weighted adjacency is not symmetric ({asym:e})")));
    }
    let mut v: Vec<f64> = a.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Largest deviation between the character-side spectrum and the dense one.
pub fn spectrum_deviation(report: &SpectrumReport, numeric: &[f64]) -> f64 {
    let ours = report.expanded();
    if ours.len() != numeric.len() {
        return f64::INFINITY;
    }
    ours.iter().zip(numeric).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}
