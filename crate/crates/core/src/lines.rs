//! Points, projective points and lines of the affine plane AG(2,q).

use crate::field::{Fe, Field};

/// Column vector in GF(q)^2.
pub type Vector = [Fe; 2];

#[inline]
pub fn vector_code(v: Vector, q: usize) -> usize {
    v[0].idx() * q + v[1].idx()
}

#[inline]
pub fn vector_from_code(code: usize, q: usize) -> Vector {
    [Fe((code / q) as u16), Fe((code % q) as u16)]
}

/// `det[u | v]`.
#[inline]
pub fn det2(f: &Field, u: Vector, v: Vector) -> Fe {
    f.sub(f.mul(u[0], v[1]), f.mul(u[1], v[0]))
}

/// Index of the projective point `[x : y]`: `x/y` for `y != 0`, and `q` for infinity.
#[inline]
pub fn projective_index(f: &Field, v: Vector) -> usize {
    if v[1].is_zero() {
        debug_assert!(!v[0].is_zero());
        f.order() as usize
    } else {
        f.mul(v[0], f.inv_nz(v[1])).idx()
    }
}

/// Canonical representative of projective point `t`: `(t, 1)`, or `(1, 0)` for infinity.
#[inline]
pub fn projective_rep(f: &Field, t: usize) -> Vector {
    if t == f.order() as usize {
        [Fe::ONE, Fe::ZERO]
    } else {
        [Fe(t as u16), Fe::ONE]
    }
}

/// The q(q+1) lines of AG(2,q).
///
/// Line ids are `direction * q + offset`. A line with direction `[v]` is the
/// coset `{u : det[v | u] = c}`; within a direction, offsets rank the q cosets
/// by their smallest point code.
#[derive(Clone, Debug)]
pub struct AffineLines {
    q: usize,
    /// `(direction, det value) -> line id`
    by_det: Vec<u32>,
    points: Vec<Vec<u32>>,
}

impl AffineLines {
    pub fn new(f: &Field) -> Self {
        let q = f.order() as usize;
        let mut by_det = vec![u32::MAX; (q + 1) * q];
        let mut points = Vec::with_capacity(q * (q + 1));
        for dir in 0..=q {
            let v = projective_rep(f, dir);
            let mut cosets: Vec<(u32, usize, Vec<u32>)> = f
                .elements()
                .map(|c| {
                    let pts: Vec<u32> = (0..q * q)
                        .filter(|&code| det2(f, v, vector_from_code(code, q)) == c)
                        .map(|code| code as u32)
                        .collect();
                    (pts[0], c.idx(), pts)
                })
                .collect();
            cosets.sort_by_key(|t| t.0);
            for (offset, (_, c, pts)) in cosets.into_iter().enumerate() {
                let id = dir * q + offset;
                by_det[dir * q + c] = id as u32;
                points.push(pts);
            }
        }
        Self { q, by_det, points }
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn direction(&self, line: usize) -> usize {
        line / self.q
    }

    pub fn offset(&self, line: usize) -> usize {
        line % self.q
    }

    /// Point codes on the line, ascending.
    pub fn points(&self, line: usize) -> &[u32] {
        &self.points[line]
    }

    /// The line through `u` with direction `dir`.
    pub fn line_through(&self, f: &Field, dir: usize, u: Vector) -> usize {
        let v = projective_rep(f, dir);
        self.by_det[dir * self.q + det2(f, v, u).idx()] as usize
    }

    /// A point on `line` together with the representative direction vector.
    pub fn anchor(&self, f: &Field, line: usize) -> (Vector, Vector) {
        let u = vector_from_code(self.points[line][0] as usize, self.q);
        (u, projective_rep(f, self.direction(line)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_census() {
        for q in [2u32, 3, 4, 5] {
            let f = Field::new(q).unwrap();
            let lines = AffineLines::new(&f);
            let q = q as usize;
            assert_eq!(lines.count(), q * (q + 1));
            let mut incidences = vec![0; q * q];
            for l in 0..lines.count() {
                assert_eq!(lines.points(l).len(), q);
                for &p in lines.points(l) {
                    incidences[p as usize] += 1;
                }
            }
            // every point is on q+1 lines, one per direction
            assert!(incidences.iter().all(|&c| c == q + 1));
            // the line through the origin is offset 0 of its block
            for dir in 0..=q {
                let l = lines.line_through(&f, dir, [Fe::ZERO, Fe::ZERO]);
                assert_eq!(lines.offset(l), 0);
            }
        }
        let f3 = Field::new(3).unwrap();
        assert_eq!(AffineLines::new(&f3).count(), 12);
    }
}
