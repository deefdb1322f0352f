//! Irreducible characters: the explicit GL(2,q) table, the published SL(2,q)
//! derangement-category sums, and central characters of any enumerated group
//! recovered from its class-algebra structure constants.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fe, QuadraticExtension};
use crate::group::{GlCategory, GroupContext};

/// Seed for the random class-sum combination used to split central characters.
pub const CENTRAL_SEED: u64 = 0x00C1_A55E_5EED;
/// Reseeds attempted before a repeated eigenvalue is reported as a failure.
pub const MAX_RESEEDS: usize = 5;
/// Relative residual accepted for `M_i w = w_i w`.
pub const CENTRAL_TOLERANCE: f64 = 1e-8;
/// Class count above which the class algebra is not attempted.
pub const MAX_CLASSES: usize = 120;

fn root_of_unity(num: i64, den: i64) -> Complex64 {
    let r = num.rem_euclid(den) as f64 / den as f64;
    Complex64::from_polar(1.0, TAU * r)
}

/// Irreducible characters of GL(2,q).
///
/// Linear characters `alpha` of GF(q)* are exponents mod q-1 against the
/// primitive element; `chi` is an exponent mod q^2-1 against the primitive
/// element of GF(q^2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GlCharacter {
    /// Degree 1: `g -> alpha(det g)`.
    Rho1 { alpha: u32 },
    /// Degree q.
    RhoBar { alpha: u32 },
    /// Degree q-1, one per pair `{chi, chi^q}` with `chi != chi^q`.
    Pi { chi: u32 },
    /// Degree q+1, unordered `alpha < beta`.
    Rho2 { alpha: u32, beta: u32 },
}

impl GlCharacter {
    pub fn degree(self, q: u32) -> u32 {
        match self {
            GlCharacter::Rho1 { .. } => 1,
            GlCharacter::RhoBar { .. } => q,
            GlCharacter::Pi { .. } => q - 1,
            GlCharacter::Rho2 { .. } => q + 1,
        }
    }

    pub fn label(self) -> String {
        match self {
            GlCharacter::Rho1 { alpha } => format!("rho1(a={alpha})"),
            GlCharacter::RhoBar { alpha } => format!("rho_bar(a={alpha})"),
            GlCharacter::Pi { chi } => format!("pi(c={chi})"),
            GlCharacter::Rho2 { alpha, beta } => format!("rho2(a={alpha},b={beta})"),
        }
    }

    /// Constituents of the permutation character on nonzero vectors.
    pub fn in_permutation_character(self) -> bool {
        matches!(
            self,
            GlCharacter::Rho1 { alpha: 0 } | GlCharacter::RhoBar { alpha: 0 } | GlCharacter::Rho2 { alpha: 0, .. }
        )
    }
}

/// All irreducible characters of GL(2,q) in a fixed order.
pub fn gl_characters(q: u32) -> Vec<GlCharacter> {
    let m = q - 1;
    let big = q * q - 1;
    let mut out: Vec<GlCharacter> = (0..m).map(|alpha| GlCharacter::Rho1 { alpha }).collect();
    out.extend((0..m).map(|alpha| GlCharacter::RhoBar { alpha }));
    for c in 0..big {
        let cq = (c as u64 * q as u64 % big as u64) as u32;
        if cq != c && c < cq {
            out.push(GlCharacter::Pi { chi: c });
        }
    }
    for alpha in 0..m {
        for beta in alpha + 1..m {
            out.push(GlCharacter::Rho2 { alpha, beta });
        }
    }
    out
}

/// Value of `ch` on a class of the given category.
pub fn gl_char_value(fq: &QuadraticExtension, ch: GlCharacter, cat: GlCategory) -> Complex64 {
    let q = fq.q() as i64;
    let (m, big) = (q - 1, q * q - 1);
    let lg = |x: u16| fq.base.log_nz(Fe(x)) as i64;
    let lg2 = |z: Fe| fq.ext.log_nz(z) as i64;
    let alpha = |a: u32, x: i64| root_of_unity(a as i64 * x, m);
    let chi = |c: u32, z: i64| root_of_unity(c as i64 * z, big);
    let qf = q as f64;
    match (ch, cat) {
        (GlCharacter::Rho1 { alpha: a }, GlCategory::C1 { x } | GlCategory::C2 { x }) => alpha(a, 2 * lg(x)),
        (GlCharacter::Rho1 { alpha: a }, GlCategory::C3 { x, y }) => alpha(a, lg(x) + lg(y)),
        (GlCharacter::Rho1 { alpha: a }, GlCategory::C4 { z }) => alpha(a, lg(fq.norm(Fe(z)).0)),

        (GlCharacter::RhoBar { alpha: a }, GlCategory::C1 { x }) => alpha(a, 2 * lg(x)) * qf,
        (GlCharacter::RhoBar { .. }, GlCategory::C2 { .. }) => Complex64::new(0.0, 0.0),
        (GlCharacter::RhoBar { alpha: a }, GlCategory::C3 { x, y }) => alpha(a, lg(x) + lg(y)),
        (GlCharacter::RhoBar { alpha: a }, GlCategory::C4 { z }) => -alpha(a, lg(fq.norm(Fe(z)).0)),

        (GlCharacter::Pi { chi: c }, GlCategory::C1 { x }) => chi(c, lg2(fq.embed(Fe(x)))) * (qf - 1.0),
        (GlCharacter::Pi { chi: c }, GlCategory::C2 { x }) => -chi(c, lg2(fq.embed(Fe(x)))),
        (GlCharacter::Pi { .. }, GlCategory::C3 { .. }) => Complex64::new(0.0, 0.0),
        (GlCharacter::Pi { chi: c }, GlCategory::C4 { z }) => {
            let z = Fe(z);
            -(chi(c, lg2(z)) + chi(c, lg2(fq.conj(z))))
        }

        (GlCharacter::Rho2 { alpha: a, beta: b }, GlCategory::C1 { x }) => {
            alpha(a, lg(x)) * alpha(b, lg(x)) * (qf + 1.0)
        }
        (GlCharacter::Rho2 { alpha: a, beta: b }, GlCategory::C2 { x }) => alpha(a, lg(x)) * alpha(b, lg(x)),
        (GlCharacter::Rho2 { alpha: a, beta: b }, GlCategory::C3 { x, y }) => {
            alpha(a, lg(x)) * alpha(b, lg(y)) + alpha(a, lg(y)) * alpha(b, lg(x))
        }
        (GlCharacter::Rho2 { .. }, GlCategory::C4 { .. }) => Complex64::new(0.0, 0.0),
    }
}

/// `1 + rho_bar(1) + sum_beta rho2(1, beta)` on a class of the given category.
pub fn gl_permutation_character(fq: &QuadraticExtension, cat: GlCategory) -> Result<i64> {
    let q = fq.q();
    let total: Complex64 = gl_characters(q)
        .into_iter()
        .filter(|c| c.in_permutation_character())
        .map(|c| gl_char_value(fq, c, cat))
        .sum();
    round_integer(total, "permutation character")
}

fn round_integer(z: Complex64, what: &str) -> Result<i64> {
    let r = z.re.round();
    let residual = (z.re - r).abs().max(z.im.abs());
    if residual > 1e-6 {
        return Err(Error::ComplexResidual { what: what.to_string(), residual });
    }
    Ok(r as i64)
}

/// Compare the permutation character with fix counts on every class.
pub fn check_permutation_character(ctx: &GroupContext) -> Result<()> {
    for (i, class) in ctx.classes().iter().enumerate() {
        let cat = class.gl_category.ok_or(Error::MissingCategory(i))?;
        let value = gl_permutation_character(ctx.extension(), cat)?;
        let fix = ctx.fix_count(class.representative as usize) as i64;
        if value != fix {
            return Err(Error::Inconsistent(format!(
                "permutation character {value} != fix count {fix} on class {i}"
            )));
        }
    }
    Ok(())
}

/// How a [`CharacterTable`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacterSource {
    GlExplicit,
    CentralCharacters,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterRow {
    pub label: String,
    pub degree: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gl: Option<GlCharacter>,
    /// Value on each class, in class order.
    #[serde(serialize_with = "serialize_complex")]
    pub values: Vec<Complex64>,
}

fn serialize_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl CharacterRow {
    pub fn is_trivial(&self) -> bool {
        self.degree == 1 && self.values.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-9)
    }

    /// `|C| chi(C) / chi(1)`.
    pub fn central(&self, class: usize, size: u32) -> Complex64 {
        self.values[class] * size as f64 / self.degree as f64
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterTable {
    pub source: CharacterSource,
    pub group_order: usize,
    pub class_sizes: Vec<u32>,
    pub rows: Vec<CharacterRow>,
}

impl CharacterTable {
    /// Table of GL(2,q) evaluated on the classes of `ctx`.
    pub fn gl_explicit(ctx: &GroupContext) -> Result<Self> {
        let q = ctx.q();
        let cats: Vec<GlCategory> = ctx
            .classes()
            .iter()
            .enumerate()
            .map(|(i, c)| c.gl_category.ok_or(Error::MissingCategory(i)))
            .collect::<Result<_>>()?;
        let rows = gl_characters(q)
            .into_iter()
            .map(|ch| CharacterRow {
                label: ch.label(),
                degree: ch.degree(q),
                gl: Some(ch),
                values: cats.iter().map(|&cat| gl_char_value(ctx.extension(), ch, cat)).collect(),
            })
            .collect();
        Ok(Self {
            source: CharacterSource::GlExplicit,
            group_order: ctx.order(),
            class_sizes: ctx.classes().iter().map(|c| c.size).collect(),
            rows,
        })
    }

    /// Characters recovered from the class algebra of `ctx`.
    pub fn from_central(ctx: &GroupContext) -> Result<Self> {
        let sc = StructureConstants::compute(ctx)?;
        let central = central_characters(&sc)?;
        Ok(central.into_table())
    }

    /// `(1/|G|) sum_C |C| a(C) conj(b(C))`.
    pub fn inner(&self, a: usize, b: usize) -> Complex64 {
        let s: Complex64 = self
            .class_sizes
            .iter()
            .enumerate()
            .map(|(k, &sz)| self.rows[a].values[k] * self.rows[b].values[k].conj() * sz as f64)
            .sum();
        s / self.group_order as f64
    }

    /// Largest deviation from row and column orthogonality.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.rows.len();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a..n {
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((self.inner(a, b) - expect).norm());
            }
        }
        let c = self.class_sizes.len();
        for k in 0..c {
            for l in k..c {
                let s: Complex64 = self.rows.iter().map(|r| r.values[k] * r.values[l].conj()).sum();
                let expect = if k == l { self.group_order as f64 / self.class_sizes[k] as f64 } else { 0.0 };
                worst = worst.max((s - expect).norm() / expect.max(1.0));
            }
        }
        worst
    }

    /// Largest over rows of `self` of the distance to the nearest row of
    /// `other` (max-norm over classes). Both tables must share class order.
    pub fn row_distance(&self, other: &CharacterTable) -> f64 {
        self.rows
            .iter()
            .map(|a| {
                other
                    .rows
                    .iter()
                    .map(|b| a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    pub fn trivial_row(&self) -> Option<usize> {
        self.rows.iter().position(|r| r.is_trivial())
    }

    /// Multiplicity of each row in the permutation character given by fix counts.
    pub fn permutation_multiplicities(&self, ctx: &GroupContext) -> Vec<f64> {
        let fix: Vec<f64> =
            ctx.classes().iter().map(|c| ctx.fix_count(c.representative as usize) as f64).collect();
        (0..self.rows.len())
            .map(|r| {
                let s: Complex64 = (0..fix.len())
                    .map(|k| self.rows[r].values[k].conj() * fix[k] * self.class_sizes[k] as f64)
                    .sum();
                s.re / self.group_order as f64
            })
            .collect()
    }
}

/// `a[i][j][k] = #{x in C_i : x^{-1} z_k in C_j}` for the representative `z_k`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    classes: usize,
    sizes: Vec<u32>,
    group_order: usize,
    a: Vec<u32>,
}

impl StructureConstants {
    pub fn compute(ctx: &GroupContext) -> Result<Self> {
        let c = ctx.classes().len();
        if c > MAX_CLASSES {
            return Err(Error::Budget(format!("{c} classes > {MAX_CLASSES}")));
        }
        let mut a = vec![0u32; c * c * c];
        for (k, class) in ctx.classes().iter().enumerate() {
            let z = class.representative as usize;
            for x in 0..ctx.order() {
                let i = ctx.class_of(x);
                let j = ctx.class_of(ctx.mul(ctx.inv(x), z));
                a[(i * c + j) * c + k] += 1;
            }
        }
        Ok(Self {
            classes: c,
            sizes: ctx.classes().iter().map(|cl| cl.size).collect(),
            group_order: ctx.order(),
            a,
        })
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.a[(i * self.classes + j) * self.classes + k]
    }
}

/// Central characters `w_chi(C) = |C| chi(C) / chi(1)`, one row per irreducible.
#[derive(Clone, Debug)]
pub struct CentralCharacterTable {
    pub group_order: usize,
    pub class_sizes: Vec<u32>,
    pub omega: Vec<Vec<Complex64>>,
    pub degrees: Vec<u32>,
    /// Largest relative residual seen while verifying eigenvector rows.
    pub residual: f64,
    /// Seed offset that produced a clean split.
    pub reseeds: usize,
}

impl CentralCharacterTable {
    pub fn into_table(self) -> CharacterTable {
        let rows = self
            .omega
            .iter()
            .zip(&self.degrees)
            .enumerate()
            .map(|(n, (w, &d))| CharacterRow {
                label: format!("chi{n}[d={d}]"),
                degree: d,
                gl: None,
                values: w.iter().zip(&self.class_sizes).map(|(z, &s)| z * d as f64 / s as f64).collect(),
            })
            .collect();
        CharacterTable {
            source: CharacterSource::CentralCharacters,
            group_order: self.group_order,
            class_sizes: self.class_sizes,
            rows,
        }
    }
}

/// Simultaneous eigenvectors of the class-multiplication matrices.
pub fn central_characters(sc: &StructureConstants) -> Result<CentralCharacterTable> {
    for attempt in 0..=MAX_RESEEDS {
        if let Some(table) = try_split(sc, CENTRAL_SEED.wrapping_add(attempt as u64), attempt)? {
            return Ok(table);
        }
    }
    Err(Error::DegenerateSplit(MAX_RESEEDS))
}

fn try_split(sc: &StructureConstants, seed: u64, attempt: usize) -> Result<Option<CentralCharacterTable>> {
    let c = sc.classes;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r: Vec<f64> = (0..c).map(|_| rng.random_range(-1.0..1.0)).collect();
    let s: f64 = rng.random_range(0.5..1.5);
    let root: Vec<f64> = sc.sizes.iter().map(|&x| (x as f64).sqrt()).collect();

    // M_jk = sum_i r_i a_ijk, rescaled to D M D^-1 with D = diag(|C|^-1/2)
    let mut m = DMatrix::<f64>::zeros(c, c);
    for i in 0..c {
        for j in 0..c {
            for k in 0..c {
                let v = sc.get(i, j, k);
                if v != 0 {
                    m[(j, k)] += r[i] * v as f64;
                }
            }
        }
    }
    let mt = DMatrix::<f64>::from_fn(c, c, |j, k| m[(j, k)] * root[k] / root[j]);
    // mt is normal; H + sK shares its eigenvectors and has real spectrum Re + s Im
    let herm = DMatrix::<Complex64>::from_fn(c, c, |j, k| {
        let (a, b) = (mt[(j, k)], mt[(k, j)]);
        Complex64::new((a + b) / 2.0, -s * (a - b) / 2.0)
    });
    let eig = herm.symmetric_eigen();

    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    let scale = vals.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    if vals.windows(2).any(|w| w[1] - w[0] < 1e-7 * scale) {
        return Ok(None);
    }

    let mut omega: Vec<Vec<Complex64>> = Vec::with_capacity(c);
    let mut degrees = Vec::with_capacity(c);
    let mut worst = 0.0f64;
    for col in 0..c {
        let u = eig.eigenvectors.column(col);
        let mut w: Vec<Complex64> = (0..c).map(|k| u[k] * root[k]).collect();
        let lead = w[0];
        if lead.norm() < 1e-12 {
            return Err(Error::Inconsistent("central character vanishes on the identity class".into()));
        }
        w.iter_mut().for_each(|z| *z /= lead);
        worst = worst.max(eigen_residual(sc, &w));
        let norm: f64 = w.iter().zip(&sc.sizes).map(|(z, &sz)| z.norm_sqr() / sz as f64).sum();
        let d = (sc.group_order as f64 / norm).sqrt();
        let dr = d.round();
        if (d - dr).abs() > 1e-6 || dr < 1.0 {
            return Err(Error::Inconsistent(format!("recovered degree {d} is not an integer")));
        }
        omega.push(w);
        degrees.push(dr as u32);
    }
    if worst > CENTRAL_TOLERANCE {
        return Err(Error::ComplexResidual { what: "central character eigen-equations".into(), residual: worst });
    }
    let sq: u64 = degrees.iter().map(|&d| d as u64 * d as u64).sum();
    if sq != sc.group_order as u64 {
        return Err(Error::Inconsistent(format!("sum of squared degrees {sq} != {}", sc.group_order)));
    }

    // deterministic order: degree, then real parts, then imaginary parts
    let mut order: Vec<usize> = (0..c).collect();
    let key = |n: usize| -> Vec<i64> {
        let mut k = vec![degrees[n] as i64];
        k.extend(omega[n].iter().map(|z| (z.re * 1e6).round() as i64));
        k.extend(omega[n].iter().map(|z| (z.im * 1e6).round() as i64));
        k
    };
    order.sort_by_key(|&n| key(n));
    Ok(Some(CentralCharacterTable {
        group_order: sc.group_order,
        class_sizes: sc.sizes.clone(),
        omega: order.iter().map(|&n| omega[n].clone()).collect(),
        degrees: order.iter().map(|&n| degrees[n]).collect(),
        residual: worst,
        reseeds: attempt,
    }))
}

/// `max_i |M_i w - w_i w| / max_i sum_jk a_ijk |w_k|`.
fn eigen_residual(sc: &StructureConstants, w: &[Complex64]) -> f64 {
    let c = sc.classes;
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    for i in 0..c {
        for j in 0..c {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut mag = 0.0;
            for k in 0..c {
                let a = sc.get(i, j, k) as f64;
                acc += w[k] * a;
                mag += a * w[k].norm();
            }
            scale = scale.max(mag);
            worst = worst.max((acc - w[i] * w[j]).norm());
        }
    }
    worst / scale
}

// ---- SL(2,q) category sums --------------------------------------------

/// One row of the published SL(2,q) tables: summed character values over the
/// derangement classes of each category, and the stated eigenvalue of the
/// weighted derangement graph.
#[derive(Clone, Debug, Serialize)]
pub struct SlSumRow {
    pub label: &'static str,
    /// Number of characters described by the row.
    pub count: i64,
    pub degree: Rational64,
    /// Sums on categories c1..c4 (c1 and c2 are zero for q even).
    pub sums: [Rational64; 4],
    pub stated_eigenvalue: Rational64,
}

/// Total class size of each derangement category in SL(2,q).
pub fn sl_category_sizes(q: u32) -> [Rational64; 4] {
    let q = q as i64;
    let r = Rational64::from_integer;
    if q % 2 == 1 {
        [r(1), Rational64::new(q * q - 1, 2), r(q * (q + 1)), r(q * (q - 1))]
    } else {
        [r(0), r(0), r(q * (q + 1)), r(q * (q - 1))]
    }
}

/// The published SL(2,q) category-sum rows for `q`.
pub fn sl_category_sums(q: u32) -> Result<Vec<SlSumRow>> {
    if !(3..=17).contains(&q) {
        return Err(Error::Unsupported(format!("SL category sums need 3 <= q <= 17, got {q}")));
    }
    let qi = q as i64;
    let r = Rational64::from_integer;
    let h = |n: i64| Rational64::new(n, 2);
    let row = |label, count, degree: Rational64, sums: [Rational64; 4], stated| SlSumRow {
        label,
        count,
        degree,
        sums,
        stated_eigenvalue: stated,
    };
    let z = r(0);
    let top = r(qi * qi - 2);
    let m1 = r(-1);
    let qp = Rational64::new(qi + 1, qi - 1);
    let pi_even = Rational64::new(2 * (qi * qi - 5), (qi - 1) * (qi - 1));
    Ok(match q % 4 {
        1 => vec![
            row("rho1(1)", 1, r(1), [r(1), r(2), h(qi - 3), h(qi - 1)], top),
            row("rho_bar(1)", 1, r(qi), [r(qi), z, h(qi - 3), -h(qi - 1)], m1),
            row("rho(a), a(-1)=-1", (qi - 1) / 4, r(qi + 1), [r(-(qi + 1)), r(-2), z, z], m1),
            row("rho(a), a(-1)=1", (qi - 5) / 4, r(qi + 1), [r(qi + 1), r(2), r(-2), z], m1),
            row("pi(chi), chi(-1)=-1", (qi - 1) / 4, r(qi - 1), [r(-(qi - 1)), r(2), z, z], qp),
            row("pi(chi), chi(-1)=1", (qi - 1) / 4, r(qi - 1), [r(qi - 1), r(-2), z, r(2)], pi_even),
            row("w_e+-", 2, h(qi + 1), [h(qi + 1), r(1), r(-1), z], m1),
            row("w_0+-", 2, h(qi - 1), [-h(qi - 1), r(1), z, z], qp),
        ],
        3 => vec![
            row("rho1(1)", 1, r(1), [r(1), r(2), h(qi - 3), h(qi - 1)], top),
            row("rho_bar(1)", 1, r(qi), [r(qi), z, h(qi - 3), -h(qi - 1)], m1),
            row("rho(a), a(-1)=-1", (qi - 3) / 4, r(qi + 1), [r(-(qi + 1)), r(-2), z, z], m1),
            row("rho(a), a(-1)=1", (qi - 3) / 4, r(qi + 1), [r(qi + 1), r(2), r(-2), z], m1),
            row("pi(chi), chi(-1)=-1", (qi + 1) / 4, r(qi - 1), [r(-(qi - 1)), r(2), z, z], qp),
            row("pi(chi), chi(-1)=1", (qi - 3) / 4, r(qi - 1), [r(qi - 1), r(-2), z, r(2)], pi_even),
            row("w_e+-", 2, h(qi + 1), [-h(qi + 1), r(-1), z, z], m1),
            row("w_0+-", 2, h(qi - 1), [h(qi - 1), r(-1), z, r(1)], Rational64::new(qi * qi - 5, 4)),
        ],
        _ => vec![
            row("rho1(1)", 1, r(1), [z, z, h(qi - 2), h(qi)], top),
            row("pi(chi)", qi / 2, r(qi - 1), [z, z, z, r(1)], Rational64::new(qi + 2, qi)),
            row("rho_bar(1)", 1, r(qi), [z, z, h(qi - 2), -h(qi)], m1),
            row("rho(a)", (qi - 2) / 2, r(qi + 1), [z, z, r(-1), z], m1),
        ],
    })
}

/// Sum of `chi` over the derangement classes of each category; `None` for
/// categories without derangement classes.
pub fn derangement_category_sums(ctx: &GroupContext, row: &CharacterRow) -> Result<[Complex64; 4]> {
    let mut sums = [Complex64::new(0.0, 0.0); 4];
    for (i, class) in ctx.classes().iter().enumerate() {
        if class.is_derangement {
            let cat = class.gl_category.ok_or(Error::MissingCategory(i))?;
            sums[cat.index()] += row.values[i];
        }
    }
    Ok(sums)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Family;

    #[test]
    fn gl_character_count_and_degrees() {
        for q in [3u32, 4, 5, 7, 8] {
            let chars = gl_characters(q);
            let ctx = GroupContext::build(Family::Gl, q).unwrap();
            assert_eq!(chars.len(), ctx.classes().len());
            let sq: u64 = chars.iter().map(|c| (c.degree(q) as u64).pow(2)).sum();
            assert_eq!(sq as usize, ctx.order());
        }
    }

    #[test]
    fn gl_table_cells() {
        let ctx = GroupContext::build(Family::Gl, 5).unwrap();
        let fq = ctx.extension();
        let v = gl_char_value(fq, GlCharacter::RhoBar { alpha: 0 }, GlCategory::C1 { x: 1 });
        assert!((v - Complex64::new(5.0, 0.0)).norm() < 1e-12);
        let z = ctx
            .classes()
            .iter()
            .find_map(|c| match c.gl_category {
                Some(cat @ GlCategory::C4 { .. }) => Some(cat),
                _ => None,
            })
            .unwrap();
        assert!(gl_char_value(fq, GlCharacter::Rho2 { alpha: 0, beta: 2 }, z).norm() < 1e-12);
    }

    #[test]
    fn gl_orthogonality() {
        for q in [3u32, 4, 5, 7, 8] {
            let ctx = GroupContext::build(Family::Gl, q).unwrap();
            let t = CharacterTable::gl_explicit(&ctx).unwrap();
            assert!(t.orthogonality_defect() < 1e-9, "q={q}");
        }
    }

    #[test]
    fn permutation_character_is_fix_count() {
        for q in [2u32, 3, 4, 5, 7, 8] {
            let ctx = GroupContext::build(Family::Gl, q).unwrap();
            check_permutation_character(&ctx).unwrap();
        }
        let ctx = GroupContext::build(Family::Gl, 5).unwrap();
        let fq = ctx.extension();
        assert_eq!(gl_permutation_character(fq, GlCategory::C1 { x: 1 }).unwrap(), 24);
        assert_eq!(gl_permutation_character(fq, GlCategory::C3 { x: 1, y: 2 }).unwrap(), 4);
    }

    #[test]
    fn structure_constant_identities() {
        let ctx = GroupContext::build(Family::Sl, 3).unwrap();
        let sc = StructureConstants::compute(&ctx).unwrap();
        let c = sc.class_count();
        for i in 0..c {
            for j in 0..c {
                let lhs: u64 = (0..c).map(|k| sc.get(i, j, k) as u64 * sc.sizes()[k] as u64).sum();
                assert_eq!(lhs, sc.sizes()[i] as u64 * sc.sizes()[j] as u64);
                for k in 0..c {
                    assert_eq!(sc.get(i, j, k), sc.get(j, i, k));
                    assert_eq!(sc.get(0, j, k), (j == k) as u32);
                }
            }
        }
    }

    #[test]
    fn central_characters_trivial_row_and_degrees() {
        for fam in Family::ALL {
            let ctx = GroupContext::build(fam, 3).unwrap();
            let sc = StructureConstants::compute(&ctx).unwrap();
            let cc = central_characters(&sc).unwrap();
            let triv = cc
                .omega
                .iter()
                .position(|w| w.iter().zip(&cc.class_sizes).all(|(z, &s)| (z - s as f64).norm() < 1e-8))
                .expect("trivial row");
            assert_eq!(cc.degrees[triv], 1);
            let sq: usize = cc.degrees.iter().map(|&d| (d * d) as usize).sum();
            assert_eq!(sq, ctx.order(), "{fam}");
        }
    }

    #[test]
    fn sl_tables_have_the_right_shape() {
        for q in [3u32, 4, 5, 7, 8, 9, 11, 13] {
            let rows = sl_category_sums(q).unwrap();
            let chars: i64 = rows.iter().map(|r| r.count).sum();
            let sq: Rational64 = rows.iter().map(|r| r.degree * r.degree * r.count).sum();
            let order = (q as i64) * (q as i64 * q as i64 - 1);
            assert_eq!(sq, Rational64::from_integer(order), "q={q}");
            let classes = GroupContext::build(Family::Sl, q).map(|g| g.classes().len() as i64);
            if let Ok(n) = classes {
                assert_eq!(chars, n, "q={q}");
            }
        }
    }
}
