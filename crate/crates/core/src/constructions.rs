//! Explicit cliques, intersecting sets and 2-intersecting sets.

use serde::Serialize;

use crate::certificate::{verify, Certificate, CertificateKind};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::group::{Family, GlCategory, GroupContext, Mat};
use crate::lines::{det2, projective_rep};

fn require(ctx: &GroupContext, family: Family) -> Result<()> {
    if ctx.family() != family {
        return Err(Error::Unsupported(format!("construction needs {family}(2,q), got {}", ctx.family())));
    }
    Ok(())
}

fn verified(ctx: &GroupContext, mut cert: Certificate) -> Result<Certificate> {
    cert.verification = verify(ctx, &cert)?;
    Ok(cert)
}

/// Companion matrix `[[0, -N], [1, T]]` of the primitive element of GF(q^2).
pub fn singer_generator(ctx: &GroupContext) -> Mat {
    let fq = ctx.extension();
    let f = &fq.base;
    let zeta = fq.ext.primitive();
    let trace = fq.restrict(fq.ext.add(zeta, fq.conj(zeta))).expect("trace lies in GF(q)");
    let norm = fq.norm(zeta);
    [Fe::ZERO, f.neg(norm), Fe::ONE, trace]
}

/// The cyclic subgroup of order q^2-1 generated by [`singer_generator`].
pub fn singer_clique(ctx: &GroupContext) -> Result<Certificate> {
    require(ctx, Family::Gl)?;
    let gen = singer_generator(ctx);
    let zero = [Fe::ZERO; 2];
    let s = ctx.find(gen, zero).ok_or_else(|| Error::Inconsistent("companion matrix not in GL".into()))?;
    let mut ids = vec![0u32];
    let mut x = s;
    while x != 0 {
        ids.push(x as u32);
        x = ctx.mul(x, s);
    }
    let q = ctx.q() as usize;
    if ids.len() != q * q - 1 {
        return Err(Error::Inconsistent(format!("Singer generator has order {}", ids.len())));
    }
    let cert = Certificate::new(ctx, CertificateKind::Clique, ids)
        .with_note("powers of the companion matrix of the primitive element of GF(q^2)");
    verified(ctx, cert)
}

/// How a Singer subgroup meets the GL class categories.
#[derive(Clone, Debug, Serialize)]
pub struct SingerCensus {
    /// Members that are scalar matrices.
    pub scalars: usize,
    /// Number of scalar classes (c1) hit.
    pub c1_classes_hit: usize,
    /// Members in each c4 class it meets, by class index.
    pub c4_hits: Vec<(usize, usize)>,
    pub c4_classes_total: usize,
}

pub fn singer_census(ctx: &GroupContext, cert: &Certificate) -> SingerCensus {
    let mut per_class = vec![0usize; ctx.classes().len()];
    for &g in &cert.ids {
        per_class[ctx.class_of(g as usize)] += 1;
    }
    let mut scalars = 0;
    let mut c1_classes_hit = 0;
    let mut c4_hits = Vec::new();
    let mut c4_classes_total = 0;
    for (i, c) in ctx.classes().iter().enumerate() {
        match c.gl_category {
            Some(GlCategory::C1 { .. }) => {
                scalars += per_class[i];
                c1_classes_hit += (per_class[i] > 0) as usize;
            }
            Some(GlCategory::C4 { .. }) => {
                c4_classes_total += 1;
                if per_class[i] > 0 {
                    c4_hits.push((i, per_class[i]));
                }
            }
            _ => {}
        }
    }
    SingerCensus { scalars, c1_classes_hit, c4_hits, c4_classes_total }
}

/// `{M in GL : Mv - v in l for all v}` for the line `l` through the origin
/// with projective direction index `dir`.
pub fn line_stabilizer_coclique(ctx: &GroupContext, dir: usize) -> Result<Certificate> {
    require(ctx, Family::Gl)?;
    let f = ctx.field();
    if dir > f.order() as usize {
        return Err(Error::Unsupported(format!("direction index {dir} out of range")));
    }
    let l = projective_rep(f, dir);
    let ids: Vec<u32> = (0..ctx.order())
        .filter(|&g| {
            let m = ctx.matrix(g);
            let c1 = [f.sub(m[0], Fe::ONE), m[2]];
            let c2 = [m[1], f.sub(m[3], Fe::ONE)];
            det2(f, l, c1).is_zero() && det2(f, l, c2).is_zero()
        })
        .map(|g| g as u32)
        .collect();
    let cert = Certificate::new(ctx, CertificateKind::Coclique, ids)
        .with_note(format!("matrices M with Mv - v on the line through (0,0) with direction index {dir}"));
    verified(ctx, cert)
}

/// The coset `S_{i,j} = {g : g(i) = j}` as sorted ids.
pub fn canonical_set(ctx: &GroupContext, i: usize, j: usize) -> Vec<u32> {
    (0..ctx.order()).filter(|&g| ctx.image(g, i) == j).map(|g| g as u32).collect()
}

/// Number of canonical sets `S_{i,j}` equal to the certificate's set.
pub fn canonical_matches(ctx: &GroupContext, cert: &Certificate) -> usize {
    let n = ctx.degree();
    let mut hits = 0;
    for i in 0..n {
        for j in 0..n {
            if canonical_set(ctx, i, j) == cert.ids {
                hits += 1;
            }
        }
    }
    hits
}

/// First AGL element (by id) acting on the q+1 parallel classes as a
/// (q+1)-cycle.
pub fn block_cycle_element(ctx: &GroupContext) -> Result<usize> {
    require(ctx, Family::Agl)?;
    let k = ctx.q() as usize + 1;
    (0..ctx.order())
        .find(|&g| {
            let perm = ctx.block_permutation(g);
            let mut x = perm[0];
            let mut len = 1;
            while x != 0 {
                x = perm[x];
                len += 1;
            }
            len == k
        })
        .ok_or_else(|| Error::Inconsistent("no element cycles the blocks".into()))
}

/// `{h^0, ..., h^q}` for a block-cycling `h`: a clique of size q+1, since every
/// `h^k` with `0 < k <= q` fixes no block.
pub fn agl_cycle_clique(ctx: &GroupContext) -> Result<Certificate> {
    let h = block_cycle_element(ctx)?;
    let mut ids = vec![0u32];
    let mut x = h;
    for _ in 0..ctx.q() {
        ids.push(x as u32);
        x = ctx.mul(x, h);
    }
    let closes = x == 0;
    let cert = Certificate::new(ctx, CertificateKind::Clique, ids).with_note(format!(
        "powers h^0..h^q of element {h}, which cycles the q+1 blocks; h^(q+1) {} the identity",
        if closes { "is" } else { "is not" }
    ));
    verified(ctx, cert)
}

/// `{(cI, z)}`: the kernel of the action on blocks, size q^2(q-1).
pub fn block_stabilizer(ctx: &GroupContext) -> Result<Certificate> {
    require(ctx, Family::Agl)?;
    let ids: Vec<u32> = (0..ctx.order())
        .filter(|&g| {
            let m = ctx.matrix(g);
            m[1].is_zero() && m[2].is_zero() && m[0] == m[3]
        })
        .map(|g| g as u32)
        .collect();
    let cert = Certificate::new(ctx, CertificateKind::Coclique, ids).with_note("scalar linear part, any translation");
    verified(ctx, cert)
}

/// The PGL(2,q) map with `0 -> inf -> 1 -> 0`.
pub fn three_cycle(ctx: &GroupContext) -> Result<usize> {
    let f = ctx.field();
    let m = [Fe::ONE, f.neg(Fe::ONE), Fe::ONE, Fe::ZERO];
    ctx.find(m, [Fe::ZERO; 2]).ok_or_else(|| Error::Inconsistent("three-cycle not found".into()))
}

/// Identity, plus `x, h x h^-1, h^-1 x h` for `x = diag(1,a)` over one `a` per
/// class `{a, a^-1}` with `a != 1, -1`, plus `diag(1,-1)` for q odd.
pub fn pgl_two_intersecting(ctx: &GroupContext) -> Result<Certificate> {
    require(ctx, Family::Pgl)?;
    let f = ctx.field();
    let q = ctx.q() as i64;
    if q < 3 {
        return Err(Error::Unsupported("needs q >= 3".into()));
    }
    let h = three_cycle(ctx)?;
    let hi = ctx.inv(h);
    let diag = |a: Fe| ctx.find([Fe::ONE, Fe::ZERO, Fe::ZERO, a], [Fe::ZERO; 2]).expect("diagonal element");
    let mut ids = vec![0u32];
    for k in 1..q - 1 {
        if 2 * k >= q - 1 {
            break;
        }
        let x = diag(f.exp(k));
        ids.push(x as u32);
        ids.push(ctx.mul(ctx.mul(h, x), hi) as u32);
        ids.push(ctx.mul(ctx.mul(hi, x), h) as u32);
    }
    if q % 2 == 1 {
        ids.push(diag(f.neg(Fe::ONE)) as u32);
    }
    let expected = if q % 2 == 1 { (3 * q - 5) / 2 } else { (3 * q - 4) / 2 } as usize;
    let cert = Certificate::new(ctx, CertificateKind::TwoIntersecting, ids).with_note(
        "points 0, inf, 1 play the roles of 1, 2, 3; h = [[1,-1],[1,0]] maps 0 -> inf -> 1 -> 0; \
         x = diag(1, g^k) for k = 1, 2, ... below (q-1)/2 with g the primitive element",
    );
    if cert.size != expected {
        return Err(Error::Inconsistent(format!("built {} elements, expected {expected}", cert.size)));
    }
    verified(ctx, cert)
}

/// Union of the cosets `(M_s, 0) * {(cI, z)}` over a 2-intersecting set of PGL.
pub fn agl_lift(agl: &GroupContext, pgl: &GroupContext, s: &Certificate) -> Result<Certificate> {
    require(agl, Family::Agl)?;
    require(pgl, Family::Pgl)?;
    if s.kind != CertificateKind::TwoIntersecting || s.q != agl.q() || pgl.q() != agl.q() {
        return Err(Error::Unsupported("lift needs a 2-intersecting PGL set over the same field".into()));
    }
    verify(pgl, s)?;
    let f = agl.field();
    let q = agl.q() as usize;
    let mut ids = Vec::with_capacity(s.size * q * q * (q - 1));
    for &sid in &s.ids {
        let m = pgl.matrix(sid as usize);
        for c in f.nonzero() {
            let cm = [f.mul(c, m[0]), f.mul(c, m[1]), f.mul(c, m[2]), f.mul(c, m[3])];
            for code in 0..q * q {
                let z = crate::lines::vector_from_code(code, q);
                ids.push(agl.find(cm, z).expect("lifted element") as u32);
            }
        }
    }
    let cert = Certificate::new(agl, CertificateKind::IntersectingLift, ids)
        .with_note(format!("preimages of a {}-element 2-intersecting set of PGL(2,{q}) under the block action", s.size));
    verified(agl, cert)
}

/// Setwise stabilizer of `{0, inf}` in PSL(2,q), q = 1 mod 4.
pub fn psl_setwise_stabilizer(ctx: &GroupContext) -> Result<Certificate> {
    require(ctx, Family::Psl)?;
    let q = ctx.q() as usize;
    if q % 4 != 1 {
        return Err(Error::Unsupported(format!("needs q = 1 mod 4, got {q}")));
    }
    let ids: Vec<u32> = (0..ctx.order())
        .filter(|&g| {
            let (a, b) = (ctx.image(g, 0), ctx.image(g, q));
            (a == 0 && b == q) || (a == q && b == 0)
        })
        .map(|g| g as u32)
        .collect();
    let cert = Certificate::new(ctx, CertificateKind::TwoIntersecting, ids).with_note("stabilizer of the pair {0, inf}");
    verified(ctx, cert)
}

/// `|G| / |C|` for a clique `C`, after re-verifying it.
pub fn clique_coclique_bound(ctx: &GroupContext, clique: &Certificate) -> Result<usize> {
    if clique.kind != CertificateKind::Clique {
        return Err(Error::Unsupported("clique-coclique bound needs a clique".into()));
    }
    verify(ctx, clique)?;
    Ok(ctx.order() / clique.size)
}

/// Sizes of the nonempty intersections `|S ∩ gH|` over left cosets of the
/// subgroup `H`, descending.
pub fn left_coset_profile(ctx: &GroupContext, set: &Certificate, subgroup: &Certificate) -> Vec<usize> {
    let mut coset_of = vec![usize::MAX; ctx.order()];
    let mut next = 0;
    for g in 0..ctx.order() {
        if coset_of[g] == usize::MAX {
            for &h in &subgroup.ids {
                coset_of[ctx.mul(g, h as usize)] = next;
            }
            next += 1;
        }
    }
    let mut counts = vec![0usize; next];
    for &s in &set.ids {
        counts[coset_of[s as usize]] += 1;
    }
    counts.retain(|&c| c > 0);
    counts.sort_unstable_by(|a, b| b.cmp(a));
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify_translates;

    #[test]
    fn singer_q3() {
        let ctx = GroupContext::build(Family::Gl, 3).unwrap();
        let c = singer_clique(&ctx).unwrap();
        assert_eq!(c.size, 8);
        assert_eq!(clique_coclique_bound(&ctx, &c).unwrap(), 6);
        let census = singer_census(&ctx, &c);
        assert_eq!(census.scalars, 2);
        assert_eq!(census.c4_hits.len(), census.c4_classes_total);
        assert!(census.c4_hits.iter().all(|&(_, n)| n == 2));
    }

    #[test]
    fn line_stabilizer_is_not_canonical() {
        let ctx = GroupContext::build(Family::Gl, 3).unwrap();
        // direction index 0 is the line spanned by (0,1)
        let s = line_stabilizer_coclique(&ctx, 0).unwrap();
        assert_eq!(s.size, 6);
        assert_eq!(canonical_matches(&ctx, &s), 0);
        for &g in &s.ids {
            let m = ctx.matrix(g as usize);
            assert_eq!((m[0], m[1]), (Fe::ONE, Fe::ZERO));
        }
    }

    #[test]
    fn agl3_constructions() {
        let ctx = GroupContext::build(Family::Agl, 3).unwrap();
        let c = agl_cycle_clique(&ctx).unwrap();
        assert_eq!(c.size, 4);
        assert_eq!(clique_coclique_bound(&ctx, &c).unwrap(), 108);
        let h = block_cycle_element(&ctx).unwrap();
        let perm = ctx.block_permutation(h);
        assert!(perm.iter().enumerate().all(|(i, &j)| i != j));
        let b = block_stabilizer(&ctx).unwrap();
        assert_eq!(b.size, 18);
        assert!(b.ids.iter().all(|&g| ctx.fix_count(g as usize) >= 1));
        verify_translates(&ctx, &b, 5, 1).unwrap();
    }

    #[test]
    fn pgl_sets_and_lift() {
        for (q, want) in [(3u32, 2usize), (4, 4), (5, 5), (7, 8), (9, 11), (11, 14)] {
            let ctx = GroupContext::build(Family::Pgl, q).unwrap();
            assert_eq!(pgl_two_intersecting(&ctx).unwrap().size, want, "q={q}");
        }
        let pgl = GroupContext::build(Family::Pgl, 3).unwrap();
        let agl = GroupContext::build(Family::Agl, 3).unwrap();
        let s = pgl_two_intersecting(&pgl).unwrap();
        assert_eq!(agl_lift(&agl, &pgl, &s).unwrap().size, 36);
    }

    #[test]
    fn psl_stabilizers() {
        for (q, want) in [(5u32, 4usize), (9, 8), (13, 12)] {
            let ctx = GroupContext::build(Family::Psl, q).unwrap();
            assert_eq!(psl_setwise_stabilizer(&ctx).unwrap().size, want);
        }
        let ctx = GroupContext::build(Family::Psl, 7).unwrap();
        assert!(psl_setwise_stabilizer(&ctx).is_err());
    }
}
