//! Enumerated 2-dimensional linear groups with their permutation actions.
//!
//! | family | elements            | domain                          | degree     |
//! |--------|---------------------|---------------------------------|------------|
//! | GL     | invertible matrices | nonzero vectors of GF(q)^2      | q^2 - 1    |
//! | SL     | determinant 1       | nonzero vectors                 | q^2 - 1    |
//! | AGL    | `v -> Mv + z`       | lines of AG(2,q)                | q(q + 1)   |
//! | PGL    | matrices mod scalars| points of the projective line   | q + 1      |
//! | PSL    | square determinant  | points of the projective line   | q + 1      |
//!
//! Element ids are dense: the identity is 0, every other element follows in
//! increasing order of its code `((a q + b) q + c) q + d` (then `z` for AGL).
//! PGL/PSL matrices are scaled so their first nonzero entry is 1.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, Field, QuadraticExtension};
use crate::lines::{det2, projective_index, projective_rep, vector_code, vector_from_code, AffineLines, Vector};

/// Largest group we are willing to enumerate.
pub const MAX_GROUP_ORDER: usize = 100_000;

/// Row-major `[[a, b], [c, d]]`.
pub type Mat = [Fe; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gl,
    Sl,
    Agl,
    Pgl,
    Psl,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Gl, Family::Sl, Family::Agl, Family::Pgl, Family::Psl];

    pub fn is_projective(self) -> bool {
        matches!(self, Family::Pgl | Family::Psl)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Gl => "GL",
            Family::Sl => "SL",
            Family::Agl => "AGL",
            Family::Pgl => "PGL",
            Family::Psl => "PSL",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(Family::Gl),
            "sl" => Ok(Family::Sl),
            "agl" => Ok(Family::Agl),
            "pgl" => Ok(Family::Pgl),
            "psl" => Ok(Family::Psl),
            other => Err(Error::Unsupported(format!("unknown group family {other:?}"))),
        }
    }
}

/// Similarity type of a 2x2 matrix over GF(q).
///
/// `C1(x)` scalar, `C2(x)` non-diagonalizable with eigenvalue `x`,
/// `C3(x, y)` two distinct eigenvalues in GF(q) (ordered by id), `C4(z)` no
/// eigenvalue in GF(q) with eigenvalues `z, z^q` in GF(q^2) (`z` the smaller id).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "category", rename_all = "lowercase")]
pub enum GlCategory {
    C1 { x: u16 },
    C2 { x: u16 },
    C3 { x: u16, y: u16 },
    C4 { z: u16 },
}

impl GlCategory {
    /// Position 0..4 of the category in tables ordered c1, c2, c3, c4.
    pub fn index(self) -> usize {
        match self {
            GlCategory::C1 { .. } => 0,
            GlCategory::C2 { .. } => 1,
            GlCategory::C3 { .. } => 2,
            GlCategory::C4 { .. } => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugacyClass {
    pub representative: u32,
    pub size: u32,
    pub is_derangement: bool,
    pub inverse_class: u32,
    /// For GL and SL the class type; for AGL the type of the linear part.
    pub gl_category: Option<GlCategory>,
}

/// Reason a given AGL element is or is not a derangement on lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AglReason {
    /// `M` has no eigenvalue in GF(q): derangement for every `z`.
    NoEigenvalue,
    /// `M` is a nontrivial unipotent and `z` lies off its eigenline: derangement.
    UnipotentShiftOffAxis,
    /// `M` is a nontrivial unipotent and `z` is on its eigenline.
    UnipotentShiftOnAxis,
    /// `M` is non-diagonalizable with a single eigenvalue other than 1.
    RepeatedEigenvalueNotOne,
    /// `M` has two distinct eigenvalues in GF(q).
    TwoDistinctEigenvalues,
    /// `M` is a scalar matrix.
    Scalar,
}

#[derive(Clone, Debug)]
pub struct GroupContext {
    family: Family,
    q: u32,
    fq: QuadraticExtension,
    mats: Vec<Mat>,
    shifts: Vec<Vector>,
    lookup: Vec<u32>,
    degree: usize,
    images: Vec<u16>,
    inverse: Vec<u32>,
    generators: Vec<u32>,
    class_of: Vec<u32>,
    classes: Vec<ConjugacyClass>,
    members: Vec<Vec<u32>>,
    lines: Option<AffineLines>,
}

fn group_order(family: Family, q: u64) -> u64 {
    let gl = (q * q - 1) * (q * q - q);
    match family {
        Family::Gl => gl,
        Family::Sl | Family::Pgl => gl / (q - 1),
        Family::Agl => gl * q * q,
        Family::Psl => gl / (q - 1) / if q % 2 == 1 { 2 } else { 1 },
    }
}

impl GroupContext {
    pub fn build(family: Family, q: u32) -> Result<Self> {
        let field = Field::new(q)?;
        if q > 17 {
            return Err(Error::Unsupported(format!("groups need GF(q^2) tables; q = {q} > 17")));
        }
        let expected = group_order(family, q as u64) as usize;
        if expected > MAX_GROUP_ORDER {
            return Err(Error::Budget(format!("|{family}(2,{q})| = {expected} > {MAX_GROUP_ORDER}")));
        }
        if family == Family::Agl && q > 7 {
            return Err(Error::Budget(format!("AGL(2,{q}) is beyond the supported range q <= 7")));
        }
        let fq = QuadraticExtension::new(field)?;
        let mut ctx = Self {
            family,
            q,
            fq,
            mats: Vec::new(),
            shifts: Vec::new(),
            lookup: Vec::new(),
            degree: 0,
            images: Vec::new(),
            inverse: Vec::new(),
            generators: Vec::new(),
            class_of: Vec::new(),
            classes: Vec::new(),
            members: Vec::new(),
            lines: None,
        };
        ctx.enumerate();
        if ctx.order() != expected {
            return Err(Error::Inconsistent(format!(
                "enumerated {} elements of {family}(2,{q}), expected {expected}",
                ctx.order()
            )));
        }
        ctx.inverse = (0..ctx.order()).map(|g| ctx.compute_inverse(g) as u32).collect();
        ctx.build_action();
        ctx.generators = ctx.find_generators();
        ctx.build_classes();
        Ok(ctx)
    }

    fn f(&self) -> &Field {
        &self.fq.base
    }

    pub fn field(&self) -> &Field {
        &self.fq.base
    }

    pub fn extension(&self) -> &QuadraticExtension {
        &self.fq
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn order(&self) -> usize {
        self.mats.len()
    }

    /// Size of the action domain.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn lines(&self) -> Option<&AffineLines> {
        self.lines.as_ref()
    }

    pub fn matrix(&self, g: usize) -> Mat {
        self.mats[g]
    }

    /// Translation part of an AGL element (zero for the linear families).
    pub fn shift(&self, g: usize) -> Vector {
        if self.family == Family::Agl {
            self.shifts[g]
        } else {
            [Fe::ZERO; 2]
        }
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    // ---- matrix helpers -------------------------------------------------

    pub fn mat_mul(&self, m: Mat, n: Mat) -> Mat {
        let f = self.f();
        let dot = |a: Fe, b: Fe, c: Fe, d: Fe| f.add(f.mul(a, b), f.mul(c, d));
        [
            dot(m[0], n[0], m[1], n[2]),
            dot(m[0], n[1], m[1], n[3]),
            dot(m[2], n[0], m[3], n[2]),
            dot(m[2], n[1], m[3], n[3]),
        ]
    }

    pub fn mat_vec(&self, m: Mat, v: Vector) -> Vector {
        let f = self.f();
        [
            f.add(f.mul(m[0], v[0]), f.mul(m[1], v[1])),
            f.add(f.mul(m[2], v[0]), f.mul(m[3], v[1])),
        ]
    }

    pub fn det(&self, m: Mat) -> Fe {
        let f = self.f();
        f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]))
    }

    pub fn trace(&self, m: Mat) -> Fe {
        self.f().add(m[0], m[3])
    }

    fn mat_inv(&self, m: Mat) -> Mat {
        let f = self.f();
        let di = f.inv_nz(self.det(m));
        [f.mul(m[3], di), f.neg(f.mul(m[1], di)), f.neg(f.mul(m[2], di)), f.mul(m[0], di)]
    }

    fn scale(&self, m: Mat, s: Fe) -> Mat {
        let f = self.f();
        [f.mul(m[0], s), f.mul(m[1], s), f.mul(m[2], s), f.mul(m[3], s)]
    }

    /// Scale so the first nonzero entry is 1.
    pub fn normalize_projective(&self, m: Mat) -> Mat {
        let lead = m.iter().copied().find(|e| !e.is_zero()).expect("nonzero matrix");
        self.scale(m, self.f().inv_nz(lead))
    }

    fn mat_code(&self, m: Mat) -> usize {
        let q = self.q as usize;
        ((m[0].idx() * q + m[1].idx()) * q + m[2].idx()) * q + m[3].idx()
    }

    fn code_of(&self, m: Mat, z: Vector) -> usize {
        let q = self.q as usize;
        match self.family {
            Family::Agl => self.mat_code(m) * q * q + vector_code(z, q),
            Family::Pgl | Family::Psl => self.mat_code(self.normalize_projective(m)),
            _ => self.mat_code(m),
        }
    }

    /// Id of the element with linear part `m` (and shift `z` for AGL), if present.
    pub fn find(&self, m: Mat, z: Vector) -> Option<usize> {
        if self.det(m).is_zero() {
            return None;
        }
        match self.lookup[self.code_of(m, z)] {
            u32::MAX => None,
            id => Some(id as usize),
        }
    }

    // ---- enumeration ----------------------------------------------------

    fn is_member(&self, m: Mat) -> bool {
        let d = self.det(m);
        if d.is_zero() {
            return false;
        }
        match self.family {
            Family::Gl | Family::Agl => true,
            Family::Sl => d == Fe::ONE,
            Family::Pgl => self.normalize_projective(m) == m,
            Family::Psl => self.normalize_projective(m) == m && self.f().is_square(d),
        }
    }

    fn enumerate(&mut self) {
        let q = self.q as usize;
        let identity: Mat = [Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE];
        let mut mats = vec![identity];
        let mut shifts = vec![[Fe::ZERO; 2]];
        let agl = self.family == Family::Agl;
        for code in 0..q.pow(4) {
            let m: Mat = [
                Fe((code / (q * q * q)) as u16),
                Fe((code / (q * q) % q) as u16),
                Fe((code / q % q) as u16),
                Fe((code % q) as u16),
            ];
            if !self.is_member(m) {
                continue;
            }
            if agl {
                for zc in 0..q * q {
                    if m == identity && zc == 0 {
                        continue;
                    }
                    mats.push(m);
                    shifts.push(vector_from_code(zc, q));
                }
            } else if m != identity {
                mats.push(m);
            }
        }
        let lookup_len = if agl { q.pow(6) } else { q.pow(4) };
        self.mats = mats;
        self.shifts = if agl { shifts } else { Vec::new() };
        let mut lookup = vec![u32::MAX; lookup_len];
        for g in 0..self.mats.len() {
            lookup[self.code_of(self.mats[g], self.shift(g))] = g as u32;
        }
        self.lookup = lookup;
    }

    /// `g * h`: apply `h` first, then `g`.
    pub fn mul(&self, g: usize, h: usize) -> usize {
        let m = self.mat_mul(self.mats[g], self.mats[h]);
        let z = if self.family == Family::Agl {
            let mw = self.mat_vec(self.mats[g], self.shifts[h]);
            let zg = self.shifts[g];
            [self.f().add(mw[0], zg[0]), self.f().add(mw[1], zg[1])]
        } else {
            [Fe::ZERO; 2]
        };
        self.lookup[self.code_of(m, z)] as usize
    }

    fn compute_inverse(&self, g: usize) -> usize {
        let mi = self.mat_inv(self.mats[g]);
        let z = if self.family == Family::Agl {
            let w = self.mat_vec(mi, self.shifts[g]);
            [self.f().neg(w[0]), self.f().neg(w[1])]
        } else {
            [Fe::ZERO; 2]
        };
        self.lookup[self.code_of(mi, z)] as usize
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g] as usize
    }

    /// `h^{-1} g`.
    pub fn quotient(&self, g: usize, h: usize) -> usize {
        self.mul(self.inv(h), g)
    }

    pub fn conjugate(&self, x: usize, by: usize) -> usize {
        self.mul(self.mul(by, x), self.inv(by))
    }

    // ---- action ---------------------------------------------------------

    fn build_action(&mut self) {
        let f = self.fq.base.clone();
        let q = self.q as usize;
        match self.family {
            Family::Gl | Family::Sl => {
                self.degree = q * q - 1;
                let mut images = Vec::with_capacity(self.order() * self.degree);
                for g in 0..self.order() {
                    for code in 1..q * q {
                        let w = self.mat_vec(self.mats[g], vector_from_code(code, q));
                        images.push((vector_code(w, q) - 1) as u16);
                    }
                }
                self.images = images;
            }
            Family::Pgl | Family::Psl => {
                self.degree = q + 1;
                let mut images = Vec::with_capacity(self.order() * self.degree);
                for g in 0..self.order() {
                    for t in 0..=q {
                        let w = self.mat_vec(self.mats[g], projective_rep(&f, t));
                        images.push(projective_index(&f, w) as u16);
                    }
                }
                self.images = images;
            }
            Family::Agl => {
                let lines = AffineLines::new(&f);
                self.degree = lines.count();
                let anchors: Vec<(Vector, Vector)> =
                    (0..lines.count()).map(|l| lines.anchor(&f, l)).collect();
                let mut images = Vec::with_capacity(self.order() * self.degree);
                for g in 0..self.order() {
                    let (m, z) = (self.mats[g], self.shifts[g]);
                    for &(u, v) in &anchors {
                        let mv = self.mat_vec(m, v);
                        let mu = self.mat_vec(m, u);
                        let pu = [f.add(mu[0], z[0]), f.add(mu[1], z[1])];
                        let dir = projective_index(&f, mv);
                        images.push(lines.line_through(&f, dir, pu) as u16);
                    }
                }
                self.images = images;
                self.lines = Some(lines);
            }
        }
    }

    /// Image of every domain point under `g`.
    pub fn images(&self, g: usize) -> &[u16] {
        &self.images[g * self.degree..(g + 1) * self.degree]
    }

    pub fn image(&self, g: usize, point: usize) -> usize {
        self.images[g * self.degree + point] as usize
    }

    pub fn fix_count(&self, g: usize) -> usize {
        self.images(g).iter().enumerate().filter(|&(i, &x)| i == x as usize).count()
    }

    pub fn is_derangement(&self, g: usize) -> bool {
        self.images(g).iter().enumerate().all(|(i, &x)| i != x as usize)
    }

    /// Number of points on which `g` and `h` agree.
    pub fn agreements(&self, g: usize, h: usize) -> usize {
        self.images(g).iter().zip(self.images(h)).filter(|(a, b)| a == b).count()
    }

    /// Number of parallel classes (blocks) of AG(2,q) fixed setwise; for AGL
    /// only. This is the fix count of the linear part on the projective line.
    pub fn fix_blocks(&self, g: usize) -> Result<usize> {
        if self.family != Family::Agl {
            return Err(Error::Unsupported("blocks exist only for the AGL line action".into()));
        }
        let f = self.f();
        let m = self.mats[g];
        Ok((0..=self.q as usize)
            .filter(|&t| projective_index(f, self.mat_vec(m, projective_rep(f, t))) == t)
            .count())
    }

    /// Permutation induced on the q+1 blocks (AGL) or projective points (PGL/PSL).
    pub fn block_permutation(&self, g: usize) -> Vec<usize> {
        let f = self.f();
        let m = self.mats[g];
        (0..=self.q as usize)
            .map(|t| projective_index(f, self.mat_vec(m, projective_rep(f, t))))
            .collect()
    }

    /// True iff `h^{-1} g` fixes at most one projective point, i.e. `g` and
    /// `h` are not 2-intersecting.
    pub fn two_fix_adjacency(&self, g: usize, h: usize) -> Result<bool> {
        if !self.family.is_projective() {
            return Err(Error::Unsupported("2-intersection uses the projective line action".into()));
        }
        Ok(self.agreements(g, h) <= 1)
    }

    // ---- classification -------------------------------------------------

    pub fn categorize(&self, m: Mat) -> GlCategory {
        let f = self.f();
        let tr = self.trace(m);
        let dt = self.det(m);
        let roots: Vec<Fe> = f
            .elements()
            .filter(|&x| f.add(f.sub(f.mul(x, x), f.mul(tr, x)), dt) == Fe::ZERO)
            .collect();
        match roots.as_slice() {
            [x, y] => GlCategory::C3 { x: x.0, y: y.0 },
            [x] => {
                if m[1].is_zero() && m[2].is_zero() && m[0] == m[3] {
                    GlCategory::C1 { x: x.0 }
                } else {
                    GlCategory::C2 { x: x.0 }
                }
            }
            _ => {
                let zs = self.fq.roots_of(tr, dt);
                GlCategory::C4 { z: zs[0].0 }
            }
        }
    }

    /// Derangement test for AGL on lines, decided from the linear part alone
    /// except in the unipotent case.
    pub fn classify_agl_derangement(&self, g: usize) -> Result<(bool, AglReason)> {
        if self.family != Family::Agl {
            return Err(Error::Unsupported("AGL classifier called on another family".into()));
        }
        let f = self.f();
        let m = self.mats[g];
        let z = self.shifts[g];
        Ok(match self.categorize(m) {
            GlCategory::C4 { .. } => (true, AglReason::NoEigenvalue),
            GlCategory::C3 { .. } => (false, AglReason::TwoDistinctEigenvalues),
            GlCategory::C1 { .. } => (false, AglReason::Scalar),
            GlCategory::C2 { x } if Fe(x) != Fe::ONE => (false, AglReason::RepeatedEigenvalueNotOne),
            GlCategory::C2 { .. } => {
                // eigenline of the unipotent M: kernel of M - I
                let r1 = [f.sub(m[0], Fe::ONE), m[1]];
                let r2 = [m[2], f.sub(m[3], Fe::ONE)];
                let s = if r1 != [Fe::ZERO; 2] { [f.neg(r1[1]), r1[0]] } else { [f.neg(r2[1]), r2[0]] };
                if det2(f, s, z).is_zero() {
                    (false, AglReason::UnipotentShiftOnAxis)
                } else {
                    (true, AglReason::UnipotentShiftOffAxis)
                }
            }
        })
    }

    /// Greedy generating set: walk ids in order and keep every element that is
    /// not yet in the subgroup generated so far.
    fn find_generators(&self) -> Vec<u32> {
        let n = self.order();
        let mut gens: Vec<usize> = Vec::new();
        let mut in_sub = vec![false; n];
        in_sub[0] = true;
        let mut sub_size = 1;
        for cand in 1..n {
            if sub_size == n {
                break;
            }
            if in_sub[cand] {
                continue;
            }
            gens.push(cand);
            // closure by right multiplication from the identity
            in_sub.iter_mut().for_each(|b| *b = false);
            in_sub[0] = true;
            let mut queue = VecDeque::from([0usize]);
            sub_size = 1;
            while let Some(x) = queue.pop_front() {
                for &s in &gens {
                    let y = self.mul(x, s);
                    if !in_sub[y] {
                        in_sub[y] = true;
                        sub_size += 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        gens.into_iter().map(|g| g as u32).collect()
    }

    fn build_classes(&mut self) {
        let n = self.order();
        let mut class_of = vec![u32::MAX; n];
        let mut members: Vec<Vec<u32>> = Vec::new();
        let gens: Vec<usize> = self.generators.iter().map(|&g| g as usize).collect();
        for x in 0..n {
            if class_of[x] != u32::MAX {
                continue;
            }
            let id = members.len() as u32;
            let mut orbit = vec![x as u32];
            class_of[x] = id;
            let mut head = 0;
            while head < orbit.len() {
                let y = orbit[head] as usize;
                head += 1;
                for &s in &gens {
                    let c = self.conjugate(y, s);
                    if class_of[c] == u32::MAX {
                        class_of[c] = id;
                        orbit.push(c as u32);
                    }
                }
            }
            orbit.sort_unstable();
            members.push(orbit);
        }
        let classes = members
            .iter()
            .map(|mem| {
                let rep = mem[0] as usize;
                let tagged = matches!(self.family, Family::Gl | Family::Sl | Family::Agl);
                ConjugacyClass {
                    representative: rep as u32,
                    size: mem.len() as u32,
                    is_derangement: self.is_derangement(rep),
                    inverse_class: class_of[self.inv(rep)],
                    gl_category: tagged.then(|| self.categorize(self.mats[rep])),
                }
            })
            .collect();
        self.class_of = class_of;
        self.members = members;
        self.classes = classes;
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g] as usize
    }

    pub fn class_members(&self, class: usize) -> &[u32] {
        &self.members[class]
    }

    pub fn derangement_classes(&self) -> Vec<usize> {
        (0..self.classes.len()).filter(|&c| self.classes[c].is_derangement).collect()
    }

    pub fn derangement_count(&self) -> usize {
        self.classes.iter().filter(|c| c.is_derangement).map(|c| c.size as usize).sum()
    }

    pub fn derangements(&self) -> Vec<usize> {
        (0..self.order()).filter(|&g| self.classes[self.class_of(g)].is_derangement).collect()
    }

    /// Exportable inventory: family, q, order, degree and the class table.
    pub fn inventory(&self) -> GroupInventory {
        GroupInventory {
            family: self.family,
            q: self.q,
            order: self.order(),
            degree: self.degree,
            derangements: self.derangement_count(),
            classes: self.classes.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupInventory {
    pub family: Family,
    pub q: u32,
    pub order: usize,
    pub degree: usize,
    pub derangements: usize,
    pub classes: Vec<ConjugacyClass>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl(q: u32) -> GroupContext {
        GroupContext::build(Family::Gl, q).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(gl(3).order(), 48);
        assert_eq!(GroupContext::build(Family::Sl, 3).unwrap().order(), 24);
        let agl3 = GroupContext::build(Family::Agl, 3).unwrap();
        assert_eq!(agl3.order(), 432);
        assert_eq!(agl3.degree(), 12);
        assert_eq!(GroupContext::build(Family::Pgl, 5).unwrap().order(), 120);
        assert_eq!(GroupContext::build(Family::Psl, 5).unwrap().order(), 60);
        assert_eq!(GroupContext::build(Family::Psl, 4).unwrap().order(), 60);
        assert!(GroupContext::build(Family::Agl, 8).is_err());
        assert!(GroupContext::build(Family::Gl, 6).is_err());
    }

    #[test]
    fn identity_is_zero_and_group_laws_hold() {
        for fam in Family::ALL {
            let g = GroupContext::build(fam, 3).unwrap();
            assert_eq!(g.fix_count(0), g.degree());
            for x in 0..g.order() {
                assert_eq!(g.mul(0, x), x);
                assert_eq!(g.mul(x, g.inv(x)), 0);
                // action is a homomorphism
                let y = (x * 7 + 3) % g.order();
                let xy = g.mul(x, y);
                for p in 0..g.degree() {
                    assert_eq!(g.image(xy, p), g.image(x, g.image(y, p)));
                }
            }
        }
    }

    #[test]
    fn faithful_actions() {
        for fam in Family::ALL {
            for q in [2, 3, 4] {
                let g = GroupContext::build(fam, q).unwrap();
                let full = (1..g.order()).filter(|&x| g.fix_count(x) == g.degree()).count();
                assert_eq!(full, 0, "{fam}(2,{q})");
            }
        }
    }

    #[test]
    fn class_sizes_partition_group() {
        for fam in Family::ALL {
            for q in [2, 3, 4, 5] {
                let g = GroupContext::build(fam, q).unwrap();
                let total: u32 = g.classes().iter().map(|c| c.size).sum();
                assert_eq!(total as usize, g.order());
                for (i, c) in g.classes().iter().enumerate() {
                    assert_eq!(g.classes()[c.inverse_class as usize].inverse_class as usize, i);
                    for &m in g.class_members(i) {
                        assert_eq!(g.is_derangement(m as usize), c.is_derangement);
                    }
                }
            }
        }
    }

    #[test]
    fn gl3_census() {
        let g = gl(3);
        assert_eq!(g.classes().len(), 8);
        assert_eq!(g.derangement_count(), 27);
        assert_eq!(g.fix_count(0), 8);
        for c in g.classes() {
            if let Some(GlCategory::C4 { .. }) = c.gl_category {
                assert_eq!(g.fix_count(c.representative as usize), 0);
            }
        }
    }

    #[test]
    fn gl_category_sizes() {
        for q in [3, 4, 5, 7] {
            let g = gl(q);
            for c in g.classes() {
                let expect = match c.gl_category.unwrap() {
                    GlCategory::C1 { .. } => 1,
                    GlCategory::C2 { .. } => q * q - 1,
                    GlCategory::C3 { .. } => q * (q + 1),
                    GlCategory::C4 { .. } => q * (q - 1),
                };
                assert_eq!(c.size, expect);
            }
        }
    }

    #[test]
    fn agl3_derangement_classes() {
        let g = GroupContext::build(Family::Agl, 3).unwrap();
        let mut sizes: Vec<u32> =
            g.classes().iter().filter(|c| c.is_derangement).map(|c| c.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![48, 54, 54, 54]);
        assert_eq!(g.derangement_count(), 210);
        // 2I with z = 0 fixes exactly the four lines through the origin
        let two = Fe(2);
        let s = g.find([two, Fe::ZERO, Fe::ZERO, two], [Fe::ZERO; 2]).unwrap();
        assert_eq!(g.fix_count(s), 4);
    }

    #[test]
    fn agl_classifier_matches_brute_force() {
        for q in [2, 3, 4] {
            let g = GroupContext::build(Family::Agl, q).unwrap();
            for x in 0..g.order() {
                let (der, reason) = g.classify_agl_derangement(x).unwrap();
                assert_eq!(der, g.is_derangement(x), "q={q} element {x} {reason:?}");
            }
        }
    }

    #[test]
    fn blocks() {
        let g = GroupContext::build(Family::Agl, 3).unwrap();
        assert_eq!(g.fix_blocks(0).unwrap(), 4);
        for x in 0..g.order() {
            let (_, reason) = g.classify_agl_derangement(x).unwrap();
            if reason == AglReason::NoEigenvalue {
                assert_eq!(g.fix_blocks(x).unwrap(), 0);
            }
        }
        let t = g.find([Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE], [Fe::ONE, Fe::ZERO]).unwrap();
        assert_eq!(g.fix_blocks(t).unwrap(), 4);
        assert_eq!(g.fix_count(t), 3);
    }

    #[test]
    fn two_fix_adjacency_examples() {
        let g = GroupContext::build(Family::Pgl, 5).unwrap();
        assert!(!g.two_fix_adjacency(7, 7).unwrap());
        let a = g.find([Fe::ONE, Fe::ZERO, Fe::ZERO, Fe(2)], [Fe::ZERO; 2]).unwrap();
        let b = g.find([Fe::ONE, Fe::ZERO, Fe::ZERO, Fe(3)], [Fe::ZERO; 2]).unwrap();
        assert!(!g.two_fix_adjacency(a, b).unwrap());
        let d = (0..g.order()).find(|&x| g.is_derangement(x)).unwrap();
        assert!(g.two_fix_adjacency(d, 0).unwrap());
    }
}
