//! Serializable vertex sets with a claimed pairwise property, re-checked from
//! group data alone.

use std::collections::HashSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Family, GroupContext};

/// Pair budget above which verification samples instead of checking every pair.
pub const EXHAUSTIVE_PAIR_LIMIT: u64 = 10_000_000;
pub const SAMPLED_PAIRS: usize = 100_000;
pub const VERIFY_SEED: u64 = 0x0000_005A_3B1E_5EED;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// Every pair differs by a derangement.
    Clique,
    /// Every pair agrees somewhere.
    Coclique,
    /// Every pair agrees on at least two points (projective line action).
    TwoIntersecting,
    /// An intersecting set built as a union of cosets.
    IntersectingLift,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verification {
    Unchecked,
    Exhaustive,
    Sampled { pairs: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub family: Family,
    pub q: u32,
    pub kind: CertificateKind,
    pub ids: Vec<u32>,
    pub size: usize,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default = "unchecked")]
    pub verification: Verification,
}

fn unchecked() -> Verification {
    Verification::Unchecked
}

impl Certificate {
    pub fn new(ctx: &GroupContext, kind: CertificateKind, mut ids: Vec<u32>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Self {
            family: ctx.family(),
            q: ctx.q(),
            kind,
            size: ids.len(),
            ids,
            notes: vec![format!(
                "element ids: identity 0, then increasing matrix code ((a*q+b)*q+c)*q+d{}",
                match ctx.family() {
                    Family::Agl => " followed by translation code z0*q+z1",
                    Family::Pgl | Family::Psl => " of the representative scaled to leading entry 1",
                    _ => "",
                }
            )],
            verification: Verification::Unchecked,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Verification(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Left translate `gS`.
    pub fn translate(&self, ctx: &GroupContext, g: usize) -> Self {
        let ids = self.ids.iter().map(|&s| ctx.mul(g, s as usize) as u32).collect();
        let mut out = Certificate::new(ctx, self.kind, ids);
        out.notes = self.notes.clone();
        out.notes.push(format!("left-translated by element {g}"));
        out
    }
}

/// Does the pair `(g, h)` have the property the certificate claims?
pub fn pair_ok(ctx: &GroupContext, kind: CertificateKind, g: usize, h: usize) -> bool {
    match kind {
        CertificateKind::Clique => ctx.agreements(g, h) == 0,
        CertificateKind::Coclique | CertificateKind::IntersectingLift => ctx.agreements(g, h) >= 1,
        CertificateKind::TwoIntersecting => ctx.agreements(g, h) >= 2,
    }
}

/// Re-check `cert` against `ctx`. Returns how it was checked.
pub fn verify(ctx: &GroupContext, cert: &Certificate) -> Result<Verification> {
    verify_with_seed(ctx, cert, VERIFY_SEED)
}

/// As [`verify`], with the seed used when pairs are sampled.
pub fn verify_with_seed(ctx: &GroupContext, cert: &Certificate, seed: u64) -> Result<Verification> {
    if cert.family != ctx.family() || cert.q != ctx.q() {
        return Err(Error::Verification(format!(
            "certificate is for {}(2,{}), group is {}(2,{})",
            cert.family,
            cert.q,
            ctx.family(),
            ctx.q()
        )));
    }
    if cert.size != cert.ids.len() {
        return Err(Error::Verification(format!("claimed size {} but {} ids", cert.size, cert.ids.len())));
    }
    if cert.kind == CertificateKind::TwoIntersecting && !ctx.family().is_projective() {
        return Err(Error::Verification("2-intersection is defined on the projective line".into()));
    }
    let mut seen = HashSet::with_capacity(cert.ids.len());
    for &id in &cert.ids {
        if id as usize >= ctx.order() {
            return Err(Error::Verification(format!("id {id} out of range")));
        }
        if !seen.insert(id) {
            return Err(Error::Verification(format!("id {id} repeated")));
        }
    }
    let n = cert.ids.len();
    let pairs = (n as u64) * (n as u64);
    let bad = |a: usize, b: usize| {
        Error::Verification(format!("{:?} property fails on the pair ({}, {})", cert.kind, cert.ids[a], cert.ids[b]))
    };
    if pairs <= EXHAUSTIVE_PAIR_LIMIT {
        for a in 0..n {
            for b in a + 1..n {
                if !pair_ok(ctx, cert.kind, cert.ids[a] as usize, cert.ids[b] as usize) {
                    return Err(bad(a, b));
                }
            }
        }
        Ok(Verification::Exhaustive)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SAMPLED_PAIRS {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            if !pair_ok(ctx, cert.kind, cert.ids[a] as usize, cert.ids[b] as usize) {
                return Err(bad(a, b));
            }
        }
        Ok(Verification::Sampled { pairs: SAMPLED_PAIRS, seed })
    }
}

/// Build the group named in the certificate and verify against it.
pub fn verify_standalone(cert: &Certificate) -> Result<Verification> {
    let ctx = GroupContext::build(cert.family, cert.q)?;
    verify(&ctx, cert)
}

/// Verify `cert` and `count` seeded left translates of it.
pub fn verify_translates(ctx: &GroupContext, cert: &Certificate, count: usize, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let g = rng.random_range(0..ctx.order());
        verify(ctx, &cert.translate(ctx, g))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_tamper() {
        let ctx = GroupContext::build(Family::Gl, 3).unwrap();
        let stab: Vec<u32> = (0..ctx.order()).filter(|&g| ctx.image(g, 0) == 0).map(|g| g as u32).collect();
        let mut cert = Certificate::new(&ctx, CertificateKind::Coclique, stab);
        assert_eq!(verify(&ctx, &cert).unwrap(), Verification::Exhaustive);
        cert.verification = Verification::Exhaustive;
        let back = Certificate::from_json(&cert.to_json().unwrap()).unwrap();
        assert_eq!(back, cert);
        let d = ctx.derangements()[0] as u32;
        let mut bad = cert.clone();
        bad.ids.push(d);
        bad.size += 1;
        assert!(verify(&ctx, &bad).is_err());
        let mut wrong_size = cert.clone();
        wrong_size.size += 1;
        assert!(verify(&ctx, &wrong_size).is_err());
    }
}
