//! Linear algebra around the canonical intersecting sets: Gram spectra and
//! ranks of their characteristic vectors, projections onto isotypic
//! components, and determinant-coset profiles.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::certificate::Certificate;
use crate::characters::CharacterRow;
use crate::error::{Error, Result};
use crate::group::{Family, GroupContext};
use crate::lines::{projective_rep, vector_code};

/// Eigenvalues within this distance are binned together.
pub const GRAM_TOLERANCE: f64 = 1e-6;
/// Largest matrix side handed to the dense eigensolver.
pub const MAX_GRAM_SIDE: usize = 700;

/// `(eigenvalue, multiplicity)` pairs, descending.
pub type Spectrum = Vec<(i64, usize)>;

#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub family: Family,
    pub q: u32,
    pub side: usize,
    pub observed: Spectrum,
    pub rank: usize,
    pub expected_rank: usize,
    /// Closed-form spectrum as published.
    pub stated: Spectrum,
    /// Closed-form spectrum from the character multiplicities.
    pub derived: Spectrum,
    pub min_eigenvalue: f64,
    /// Largest distance from an observed eigenvalue to its integer.
    pub integer_residual: f64,
    /// Entrywise decomposition into identity and class adjacency matrices.
    pub decomposition_holds: Option<bool>,
}

impl GramReport {
    pub fn matches_stated(&self) -> bool {
        normalize(&self.stated) == self.observed
    }

    pub fn matches_derived(&self) -> bool {
        normalize(&self.derived) == self.observed
    }
}

fn normalize(s: &Spectrum) -> Spectrum {
    let mut out: Spectrum = Vec::new();
    let mut v: Spectrum = s.iter().copied().filter(|&(_, m)| m > 0).collect();
    v.sort_by_key(|e| std::cmp::Reverse(e.0));
    for (e, m) in v {
        match out.last_mut() {
            Some(last) if last.0 == e => last.1 += m,
            _ => out.push((e, m)),
        }
    }
    out
}

/// Integer spectrum of a symmetric matrix, plus min eigenvalue and the
/// largest rounding residual.
fn integer_spectrum(m: DMatrix<f64>) -> (Spectrum, f64, f64) {
    let eig = m.symmetric_eigen().eigenvalues;
    let mut residual = 0.0f64;
    let mut min = f64::INFINITY;
    let mut vals = Vec::with_capacity(eig.len());
    for &x in eig.iter() {
        let r = x.round();
        residual = residual.max((x - r).abs());
        min = min.min(x);
        vals.push((r as i64, 1));
    }
    (normalize(&vals), min, residual)
}

fn rank_of(s: &Spectrum) -> usize {
    s.iter().filter(|&&(e, _)| e != 0).map(|&(_, m)| m).sum()
}

/// `N^T N` for the characteristic vectors of `S_{x_i, y}` with `x_1..x_{q+1}`
/// the projective representatives in index order and `y` any nonzero vector.
pub fn gl_spanning_gram(ctx: &GroupContext) -> Result<GramReport> {
    if ctx.family() != Family::Gl {
        return Err(Error::Unsupported("spanning Gram matrix is for GL(2,q)".into()));
    }
    let f = ctx.field();
    let q = ctx.q() as usize;
    let n = q * q - 1;
    let side = (q + 1) * n;
    if side > MAX_GRAM_SIDE {
        return Err(Error::Budget(format!("Gram side {side} > {MAX_GRAM_SIDE}")));
    }
    // Domain point k of GL is the nonzero vector with code k + 1.
    let base: Vec<usize> = (0..=q).map(|t| vector_code(projective_rep(f, t), q) - 1).collect();
    let mut gram = DMatrix::<f64>::zeros(side, side);
    let mut cols = Vec::with_capacity(q + 1);
    for g in 0..ctx.order() {
        cols.clear();
        cols.extend(base.iter().enumerate().map(|(i, &x)| i * n + ctx.image(g, x)));
        for &a in &cols {
            for &b in &cols {
                gram[(a, b)] += 1.0;
            }
        }
    }
    let (observed, min_eigenvalue, integer_residual) = integer_spectrum(gram);
    let qi = q as i64;
    let stated = vec![
        (qi * (qi * qi - 1), 1),
        (qi * qi - 1, q * q),
        (qi * (qi - 1), (q - 2) * (q + 1) * (q + 1)),
        (0, 2 * q),
    ];
    Ok(GramReport {
        family: Family::Gl,
        q: ctx.q(),
        side,
        rank: rank_of(&observed),
        expected_rank: q * q * q + q * q - 3 * q - 1,
        derived: stated.clone(),
        stated,
        observed,
        min_eigenvalue,
        integer_residual,
        decomposition_holds: None,
    })
}

/// Non-identity classes with a fixed point (the unipotent classes of SL).
pub fn fixing_classes(ctx: &GroupContext) -> Vec<usize> {
    (0..ctx.classes().len())
        .filter(|&c| {
            let rep = ctx.classes()[c].representative as usize;
            rep != 0 && ctx.fix_count(rep) > 0
        })
        .collect()
}

/// `N N^T` for SL(2,q) with N over all (point, image) pairs: the
/// `(g,h)` entry counts the points where `g` and `h` agree.
pub fn sl_gram(ctx: &GroupContext) -> Result<GramReport> {
    if ctx.family() != Family::Sl {
        return Err(Error::Unsupported("this Gram matrix is for SL(2,q)".into()));
    }
    let order = ctx.order();
    if order > MAX_GRAM_SIDE {
        return Err(Error::Budget(format!("Gram side {order} > {MAX_GRAM_SIDE}")));
    }
    let q = ctx.q() as usize;
    let fixing = fixing_classes(ctx);
    let expected_classes = if q % 2 == 1 { 2 } else { 1 };
    if fixing.len() != expected_classes {
        return Err(Error::Inconsistent(format!("{} non-derangement classes", fixing.len())));
    }
    let mut gram = DMatrix::<f64>::zeros(order, order);
    let mut holds = true;
    for g in 0..order {
        for h in 0..order {
            let a = ctx.agreements(g, h);
            gram[(g, h)] = a as f64;
            let x = ctx.quotient(g, h);
            let predicted = if g == h {
                q * q - 1
            } else if fixing.contains(&ctx.class_of(x)) {
                q - 1
            } else {
                0
            };
            holds &= a == predicted;
        }
    }
    let (observed, min_eigenvalue, integer_residual) = integer_spectrum(gram);
    let qi = q as i64;
    let top = qi * (qi * qi - 1);
    let mid = (qi * qi - 1) + (qi - 1) * (qi - 1);
    let stated = if q % 2 == 1 {
        vec![
            (mid, (q - 3) * (q + 1) * (q + 1) / 2),
            (qi * qi - 1, 2 * q * q),
            (top, 1),
            (0, (q - 1).pow(3) / 2 + 2 * ((q - 1) / 2).pow(2)),
        ]
    } else {
        vec![(top, 1), (mid, (q + 1) * (q + 1) * (q - 2) / 2), (qi * qi - 1, 2 * q * q), (0, q * (q - 1) * (q - 1) / 2)]
    };
    let derived =
        vec![(top, 1), (mid, (q - 2) * (q + 1) * (q + 1) / 2), (qi * qi - 1, q * q), (0, q * (q - 1) * (q - 1) / 2)];
    Ok(GramReport {
        family: Family::Sl,
        q: ctx.q(),
        side: order,
        rank: rank_of(&observed),
        expected_rank: q * (q - 1) * (q + 3) / 2,
        stated: normalize(&stated),
        derived: normalize(&derived),
        observed,
        min_eigenvalue,
        integer_residual,
        decomposition_holds: Some(holds),
    })
}

/// `||E_psi v_S||^2` with `E_psi(g,h) = (psi(1)/|G|) psi(h g^-1)`, formed
/// vector-wise over all of G.
pub fn module_projection(ctx: &GroupContext, set: &Certificate, row: &CharacterRow) -> f64 {
    let order = ctx.order();
    let scale = row.degree as f64 / order as f64;
    let mut total = 0.0;
    for g in 0..order {
        let gi = ctx.inv(g);
        let p: Complex64 =
            set.ids.iter().map(|&h| row.values[ctx.class_of(ctx.mul(h as usize, gi))]).sum::<Complex64>() * scale;
        total += p.norm_sqr();
    }
    total
}

/// `sum_{h in S} psi(h)`.
pub fn character_sum(ctx: &GroupContext, set: &Certificate, row: &CharacterRow) -> Complex64 {
    set.ids.iter().map(|&h| row.values[ctx.class_of(h as usize)]).sum()
}

/// `|S ∩ x SL(2,q)|` for each determinant coset, indexed by the discrete log
/// of the determinant.
pub fn coset_slice_profile(ctx: &GroupContext, set: &Certificate) -> Result<Vec<usize>> {
    if ctx.family() != Family::Gl {
        return Err(Error::Unsupported("coset profile is for GL(2,q)".into()));
    }
    let f = ctx.field();
    let mut out = vec![0; f.order() as usize - 1];
    for &g in &set.ids {
        let d = ctx.det(ctx.matrix(g as usize));
        out[f.log(d)? as usize] += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::CertificateKind;
    use crate::characters::CharacterTable;

    #[test]
    fn gl3_gram() {
        let ctx = GroupContext::build(Family::Gl, 3).unwrap();
        let r = gl_spanning_gram(&ctx).unwrap();
        assert_eq!(r.observed, vec![(24, 1), (8, 9), (6, 16), (0, 6)]);
        assert_eq!(r.rank, 26);
        assert!(r.matches_stated());
        assert!(r.min_eigenvalue > -GRAM_TOLERANCE);
    }

    #[test]
    fn sl3_gram() {
        let ctx = GroupContext::build(Family::Sl, 3).unwrap();
        let r = sl_gram(&ctx).unwrap();
        assert_eq!(r.decomposition_holds, Some(true));
        assert_eq!(r.rank, 18);
        assert!(r.matches_derived());
        // the published multiplicities add up to 25
        assert_eq!(r.stated.iter().map(|x| x.1).sum::<usize>(), 25);
    }

    #[test]
    fn projections_of_stabilizer() {
        let ctx = GroupContext::build(Family::Gl, 3).unwrap();
        let table = CharacterTable::gl_explicit(&ctx).unwrap();
        let ids = (0..ctx.order()).filter(|&g| ctx.image(g, 0) == 0).map(|g| g as u32).collect();
        let s = Certificate::new(&ctx, CertificateKind::Coclique, ids);
        let triv = table.trivial_row().unwrap();
        let p = module_projection(&ctx, &s, &table.rows[triv]);
        assert!((p - 36.0 / 48.0).abs() < 1e-9);
        let mult = table.permutation_multiplicities(&ctx);
        for (k, row) in table.rows.iter().enumerate() {
            if mult[k].abs() < 1e-9 {
                assert!(module_projection(&ctx, &s, row) < 1e-8, "{}", row.label);
            }
        }
        assert_eq!(coset_slice_profile(&ctx, &s).unwrap(), vec![3, 3]);
    }
}
