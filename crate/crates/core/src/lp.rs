//! The class-weight linear program: maximize the trivial-character eigenvalue
//! of a weighted derangement graph subject to every other eigenvalue being at
//! least -1.
//!
//! Weights are tied across each class and its inverse class so the weighted
//! matrix is symmetric. Internally each variable is rescaled to
//! `u = w * |D|`, which makes the constraint coefficients `chi(g)/chi(1)` and
//! every objective coefficient 1.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::characters::CharacterTable;
use crate::error::{Error, Result};
use crate::group::GroupContext;
use crate::spectra::WeightVector;

pub const PIVOT_TOLERANCE: f64 = 1e-9;
pub const FEASIBILITY_TOLERANCE: f64 = 1e-7;
const MAX_ITERATIONS: usize = 50_000;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_SWITCH: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tying {
    /// One variable per {class, inverse class} pair.
    InversePairs,
    /// One variable per class, real parts of the coefficients.
    Untied,
}

#[derive(Clone, Debug, Serialize)]
pub struct LpInstance {
    pub tying: Tying,
    /// Derangement classes sharing each variable.
    pub variables: Vec<Vec<usize>>,
    /// Total class size per variable: the objective coefficient of `w`.
    pub objective: Vec<f64>,
    /// Character label of each constraint row.
    pub row_labels: Vec<String>,
    /// `rows[r][v]`: contribution of `w_v` to the eigenvalue of character `r`.
    pub rows: Vec<Vec<f64>>,
}

impl LpInstance {
    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.rows.len()
    }

    /// Eigenvalues `A w` for weights `w` (one per variable).
    pub fn eigenvalues(&self, w: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|row| row.iter().zip(w).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn objective_value(&self, w: &[f64]) -> f64 {
        self.objective.iter().zip(w).map(|(a, b)| a * b).sum()
    }

    /// Same instance with its constraint rows permuted.
    pub fn permuted_rows(&self, seed: u64) -> Self {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut out = self.clone();
        out.rows = idx.iter().map(|&i| self.rows[i].clone()).collect();
        out.row_labels = idx.iter().map(|&i| self.row_labels[i].clone()).collect();
        out
    }

    /// Plain-text dump: variables, objective, then one constraint per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# maximize sum_v c_v w_v subject to sum_v a_rv w_v >= -1 for every row; w free");
        let _ = writeln!(s, "variables {}", self.variables.len());
        for (v, classes) in self.variables.iter().enumerate() {
            let list: Vec<String> = classes.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(s, "var w{v} classes {} c {:.17e}", list.join(","), self.objective[v]);
        }
        let _ = writeln!(s, "constraints {}", self.rows.len());
        for (label, row) in self.row_labels.iter().zip(&self.rows) {
            let coeffs: Vec<String> = row.iter().map(|a| format!("{a:.17e}")).collect();
            let _ = writeln!(s, "row {label} >= -1 : {}", coeffs.join(" "));
        }
        s
    }
}

/// One constraint per nontrivial character, one variable per tied class group.
pub fn build_lp(ctx: &GroupContext, table: &CharacterTable, tying: Tying) -> Result<LpInstance> {
    let mut variables: Vec<Vec<usize>> = Vec::new();
    for c in ctx.derangement_classes() {
        let inv = ctx.classes()[c].inverse_class as usize;
        match tying {
            Tying::InversePairs if inv < c => continue,
            Tying::InversePairs if inv != c => variables.push(vec![c, inv]),
            _ => variables.push(vec![c]),
        }
    }
    let objective: Vec<f64> =
        variables.iter().map(|v| v.iter().map(|&c| table.class_sizes[c] as f64).sum()).collect();
    let trivial = table.trivial_row().ok_or_else(|| Error::Inconsistent("no trivial character".into()))?;
    let mut rows = Vec::new();
    let mut row_labels = Vec::new();
    for (r, row) in table.rows.iter().enumerate() {
        if r == trivial {
            continue;
        }
        let mut coeffs = Vec::with_capacity(variables.len());
        for v in &variables {
            let z: Complex64 = v.iter().map(|&c| row.central(c, table.class_sizes[c])).sum();
            if tying == Tying::InversePairs && z.im.abs() > 1e-8 * (1.0 + z.re.abs()) {
                return Err(Error::ComplexResidual {
                    what: format!("tied coefficient of {} on classes {v:?}", row.label),
                    residual: z.im.abs(),
                });
            }
            coeffs.push(z.re);
        }
        rows.push(coeffs);
        row_labels.push(row.label.clone());
    }
    Ok(LpInstance { tying, variables, objective, row_labels, rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Unbounded,
    InfeasibleNumeric,
    IterationLimit,
}

#[derive(Clone, Debug, Serialize)]
pub struct LpResult {
    pub status: LpStatus,
    /// Optimal trivial-character eigenvalue.
    pub objective: f64,
    /// Nearest integer when within 1e-5, otherwise `None`.
    pub rounded: Option<i64>,
    /// One weight per variable.
    pub weights: Vec<f64>,
    /// Labels of constraints at -1.
    pub tight: Vec<String>,
    /// Worst constraint violation of the returned weights.
    pub max_violation: f64,
    pub iterations: usize,
}

impl LpResult {
    /// Weights spread back onto all classes of the group.
    pub fn class_weights(&self, ctx: &GroupContext, instance: &LpInstance) -> WeightVector {
        let mut w = vec![0.0; ctx.classes().len()];
        for (v, classes) in instance.variables.iter().enumerate() {
            for &c in classes {
                w[c] = self.weights[v];
            }
        }
        WeightVector { weights: w }
    }

    /// `|G| / (1 + objective)`: the ratio bound these weights give.
    pub fn bound(&self, order: usize) -> f64 {
        order as f64 / (1.0 + self.objective)
    }
}

/// Solve with a dense tableau simplex and verify the answer against the
/// original constraints.
pub fn solve_lp(instance: &LpInstance) -> Result<LpResult> {
    let nv = instance.variable_count();
    let m = instance.constraint_count();
    // scaled: u_v = w_v * c_v; constraint -sum (a_rv / c_v) u_v <= 1; objective sum u_v
    let scaled: Vec<Vec<f64>> = instance
        .rows
        .iter()
        .map(|row| row.iter().zip(&instance.objective).map(|(a, c)| -a / c).collect())
        .collect();
    // columns: u+ (nv), u- (nv), slacks (m)
    let n = 2 * nv + m;
    let width = n + 1;
    let mut t = vec![0.0f64; (m + 1) * width];
    for r in 0..m {
        let base = r * width;
        for v in 0..nv {
            t[base + v] = scaled[r][v];
            t[base + nv + v] = -scaled[r][v];
        }
        t[base + 2 * nv + r] = 1.0;
        t[base + n] = 1.0;
    }
    // objective row holds reduced costs -c
    let obj = m * width;
    for v in 0..nv {
        t[obj + v] = -1.0;
        t[obj + nv + v] = 1.0;
    }
    let mut basis: Vec<usize> = (2 * nv..n).collect();

    let mut iterations = 0;
    let mut degenerate_run = 0;
    let status = loop {
        if iterations >= MAX_ITERATIONS {
            break LpStatus::IterationLimit;
        }
        let bland = degenerate_run >= DEGENERATE_SWITCH;
        let entering = if bland {
            (0..n).find(|&j| t[obj + j] < -PIVOT_TOLERANCE)
        } else {
            (0..n)
                .filter(|&j| t[obj + j] < -PIVOT_TOLERANCE)
                .min_by(|&a, &b| t[obj + a].total_cmp(&t[obj + b]).then(a.cmp(&b)))
        };
        let Some(e) = entering else { break LpStatus::Optimal };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..m {
            let a = t[r * width + e];
            if a > PIVOT_TOLERANCE {
                let ratio = t[r * width + n] / a;
                let better = match leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < best - 1e-12 || (ratio <= best + 1e-12 && basis[r] < basis[lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((lr, ratio)) = leave else { break LpStatus::Unbounded };
        degenerate_run = if ratio.abs() < 1e-12 { degenerate_run + 1 } else { 0 };
        pivot(&mut t, width, m + 1, lr, e);
        basis[lr] = e;
        iterations += 1;
    };

    let mut u = vec![0.0f64; n];
    for (r, &b) in basis.iter().enumerate() {
        u[b] = t[r * width + n];
    }
    let weights: Vec<f64> = (0..nv).map(|v| (u[v] - u[nv + v]) / instance.objective[v]).collect();
    let eig = instance.eigenvalues(&weights);
    let max_violation = eig.iter().map(|&l| (-1.0 - l).max(0.0)).fold(0.0, f64::max);
    let objective = instance.objective_value(&weights);
    let status = if status == LpStatus::Optimal && max_violation > FEASIBILITY_TOLERANCE {
        LpStatus::InfeasibleNumeric
    } else {
        status
    };
    let tight = instance
        .row_labels
        .iter()
        .zip(&eig)
        .filter(|(_, &l)| (l + 1.0).abs() < FEASIBILITY_TOLERANCE)
        .map(|(s, _)| s.clone())
        .collect();
    let nearest = objective.round();
    Ok(LpResult {
        status,
        objective,
        rounded: ((objective - nearest).abs() < 1e-5).then_some(nearest as i64),
        weights,
        tight,
        max_violation,
        iterations,
    })
}

fn pivot(t: &mut [f64], width: usize, rows: usize, pr: usize, pc: usize) {
    let p = t[pr * width + pc];
    for j in 0..width {
        t[pr * width + j] /= p;
    }
    let prow: Vec<f64> = t[pr * width..(pr + 1) * width].to_vec();
    for r in 0..rows {
        if r == pr {
            continue;
        }
        let f = t[r * width + pc];
        if f == 0.0 {
            continue;
        }
        let row = &mut t[r * width..(r + 1) * width];
        for j in 0..width {
            row[j] -= f * prow[j];
        }
        row[pc] = 0.0;
    }
}

/// Comparison of an optimum with the `n - 1` ceiling.
#[derive(Clone, Debug, Serialize)]
pub struct CeilingReport {
    pub degree: usize,
    pub ceiling: f64,
    pub objective: f64,
    pub within_ceiling: bool,
    pub attains_ceiling: bool,
    /// Nontrivial constituents of the permutation character.
    pub constituents: Vec<String>,
    pub constituents_tight: bool,
}

pub fn lp_ceiling_check(
    ctx: &GroupContext,
    table: &CharacterTable,
    instance: &LpInstance,
    result: &LpResult,
) -> Result<CeilingReport> {
    if result.status != LpStatus::Optimal {
        return Err(Error::Inconsistent(format!("ceiling check needs an optimal LP, got {:?}", result.status)));
    }
    let ceiling = ctx.degree() as f64 - 1.0;
    let trivial = table.trivial_row();
    let mult = table.permutation_multiplicities(ctx);
    let constituents: Vec<String> = table
        .rows
        .iter()
        .enumerate()
        .filter(|&(r, _)| Some(r) != trivial && mult[r].abs() > 0.5)
        .map(|(_, row)| row.label.clone())
        .collect();
    let eig = instance.eigenvalues(&result.weights);
    let constituents_tight = constituents.iter().all(|label| {
        instance
            .row_labels
            .iter()
            .position(|l| l == label)
            .is_some_and(|r| (eig[r] + 1.0).abs() < FEASIBILITY_TOLERANCE)
    });
    Ok(CeilingReport {
        degree: ctx.degree(),
        ceiling,
        objective: result.objective,
        within_ceiling: result.objective <= ceiling + 1e-6,
        attains_ceiling: (result.objective - ceiling).abs() < 1e-6,
        constituents,
        constituents_tight,
    })
}

/// Eigenvalues on the two nontrivial permutation constituents of AGL(2,q) on
/// lines, from the block character `fix_blocks - 1` and `fix - fix_blocks`,
/// next to the closed forms `-q^2 (q-1) sum_i a_i` and `-a_0 (q^2 - q)`.
#[derive(Clone, Debug, Serialize)]
pub struct AglConstituentCheck {
    pub lambda_blocks: f64,
    pub lambda_blocks_closed: f64,
    pub lambda_rest: f64,
    pub lambda_rest_closed: f64,
    /// Weight on the unipotent derangement class.
    pub a0: f64,
    /// Sum of weights on the classes with no eigenvalue.
    pub sum_ai: f64,
    pub a0_within: bool,
    pub sum_ai_within: bool,
}

pub fn agl_constituent_check(ctx: &GroupContext, weights: &WeightVector) -> Result<AglConstituentCheck> {
    let q = ctx.q() as f64;
    let mut lambda_blocks = 0.0;
    let mut lambda_rest = 0.0;
    let mut a0 = 0.0;
    let mut sum_ai = 0.0;
    for (i, c) in ctx.classes().iter().enumerate() {
        let w = weights.weights[i];
        if !c.is_derangement || w == 0.0 {
            continue;
        }
        let rep = c.representative as usize;
        let fb = ctx.fix_blocks(rep)? as f64;
        let fix = ctx.fix_count(rep) as f64;
        lambda_blocks += w * c.size as f64 * (fb - 1.0) / q;
        lambda_rest += w * c.size as f64 * (fix - fb) / (q * q - 1.0);
        match ctx.classify_agl_derangement(rep)?.1 {
            crate::group::AglReason::UnipotentShiftOffAxis => a0 += w,
            _ => sum_ai += w,
        }
    }
    Ok(AglConstituentCheck {
        lambda_blocks,
        lambda_blocks_closed: -q * q * (q - 1.0) * sum_ai,
        lambda_rest,
        lambda_rest_closed: -a0 * (q * q - q),
        a0,
        sum_ai,
        a0_within: a0 <= 1.0 / (q * q - q) + 1e-9,
        sum_ai_within: sum_ai <= 1.0 / (q * q * (q - 1.0)) + 1e-9,
    })
}
