//! Table-driven arithmetic in GF(q) for prime powers q <= 289.
//!
//! Elements are packed as base-p digit strings: the residue
//! `c_0 + c_1 t + ... + c_{k-1} t^{k-1}` has id `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`,
//! so ids `0..p` are the prime subfield and `0`, `1` are the additive and
//! multiplicative identities.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_FIELD_ORDER: u32 = 289;

/// A field element id in `0..q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fe(pub u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Split `q` into `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, highest coefficient first (so the leading entry is 1).
    modulus: Vec<u32>,
    primitive: Fe,
    add: Vec<Fe>,
    mul: Vec<Fe>,
    neg: Vec<Fe>,
    inv: Vec<Fe>,
    log: Vec<u32>,
    exp: Vec<Fe>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus && self.primitive == other.primitive
    }
}

impl Eq for Field {}

fn digits(mut id: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = id % p;
            id /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Remainder of `a` (low-first coefficients) modulo the monic `m` (low-first).
fn poly_rem(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let shift = a.len() - dm;
            for (i, &mc) in m[..dm].iter().enumerate() {
                let t = (lead * mc) % p;
                a[shift + i] = (a[shift + i] + p - t) % p;
            }
        }
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(m_low: &[u32], p: u32) -> bool {
    let deg = m_low.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for tail in 0..count {
            let mut f = digits(tail, p, d as u32);
            f.push(1);
            if poly_rem(m_low.to_vec(), &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Build GF(q) with the lexicographically smallest monic irreducible
    /// modulus and the smallest primitive element.
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
        // Coefficient vectors (c_{k-1}, ..., c_0) enumerated lexicographically.
        let modulus_low = (0..p.pow(k))
            .map(|code| {
                // The most significant base-p digit of `code` is c_{k-1}.
                let mut low = digits(code, p, k);
                low.push(1);
                low
            })
            .find(|m| k == 1 || is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");

        let qs = q as usize;
        let mut add = vec![Fe::ZERO; qs * qs];
        let mut mul = vec![Fe::ZERO; qs * qs];
        let digit_table: Vec<Vec<u32>> = (0..q).map(|a| digits(a, p, k)).collect();
        for a in 0..qs {
            for b in 0..qs {
                let s: Vec<u32> = digit_table[a]
                    .iter()
                    .zip(&digit_table[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * qs + b] = Fe(undigits(&s, p) as u16);
                let prod = poly_rem(poly_mul(&digit_table[a], &digit_table[b], p), &modulus_low, p);
                mul[a * qs + b] = Fe(undigits(&prod, p) as u16);
            }
        }
        let neg = (0..qs)
            .map(|a| Fe((0..qs).find(|&b| add[a * qs + b] == Fe::ZERO).unwrap() as u16))
            .collect();
        let mut inv = vec![Fe::ZERO; qs];
        for a in 1..qs {
            inv[a] = Fe((1..qs).find(|&b| mul[a * qs + b] == Fe::ONE).unwrap() as u16);
        }

        let order_of = |g: usize| -> usize {
            let mut x = g;
            let mut n = 1;
            while x != 1 {
                x = mul[x * qs + g].idx();
                n += 1;
            }
            n
        };
        let primitive = if q == 2 {
            Fe::ONE
        } else {
            Fe((2..qs).find(|&g| order_of(g) == qs - 1).unwrap() as u16)
        };

        let mut exp = Vec::with_capacity(qs - 1);
        let mut log = vec![u32::MAX; qs];
        let mut x = Fe::ONE;
        for e in 0..(qs - 1) {
            exp.push(x);
            log[x.idx()] = e as u32;
            x = mul[x.idx() * qs + primitive.idx()];
        }

        Ok(Self {
            p,
            k,
            q,
            modulus: modulus_low.into_iter().rev().collect(),
            primitive,
            add,
            mul,
            neg,
            inv,
            log,
            exp,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Monic modulus coefficients, leading coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive(&self) -> Fe {
        self.primitive
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.q as u16).map(Fe)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + '_ {
        (1..self.q as u16).map(Fe)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        self.add[a.idx() * self.q as usize + b.idx()]
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg[b.idx()])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.neg[a.idx()]
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        self.mul[a.idx() * self.q as usize + b.idx()]
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::ZeroElement("inverse"));
        }
        Ok(self.inv[a.idx()])
    }

    /// Inverse for callers that have already excluded zero.
    #[inline]
    pub(crate) fn inv_nz(&self, a: Fe) -> Fe {
        debug_assert!(!a.is_zero());
        self.inv[a.idx()]
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any integer exponent; negative exponents require `a != 0`.
    pub fn pow(&self, a: Fe, e: i64) -> Fe {
        if a.is_zero() {
            assert!(e >= 0, "zero raised to a negative power");
            return if e == 0 { Fe::ONE } else { Fe::ZERO };
        }
        let m = (self.q - 1) as i64;
        let l = self.log[a.idx()] as i64;
        self.exp[(l * e).rem_euclid(m) as usize]
    }

    /// Discrete logarithm to the base of the primitive element, in `0..q-1`.
    pub fn log(&self, a: Fe) -> Result<u32> {
        if a.is_zero() {
            return Err(Error::ZeroElement("logarithm"));
        }
        Ok(self.log[a.idx()])
    }

    #[inline]
    pub(crate) fn log_nz(&self, a: Fe) -> u32 {
        self.log[a.idx()]
    }

    /// `primitive^e`.
    pub fn exp(&self, e: i64) -> Fe {
        self.exp[e.rem_euclid((self.q - 1) as i64) as usize]
    }

    pub fn is_square(&self, a: Fe) -> bool {
        a.is_zero() || self.p == 2 || self.log[a.idx()].is_multiple_of(2)
    }

    /// Embed the prime-field integer `n mod p`.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u16)
    }
}

/// GF(q^2) together with a ring embedding of GF(q).
#[derive(Clone, Debug)]
pub struct QuadraticExtension {
    pub base: Field,
    pub ext: Field,
    embed: Vec<Fe>,
    restrict: Vec<Option<Fe>>,
    /// Smallest non-square of GF(q) (q odd).
    pub nonsquare: Option<Fe>,
    /// A square root of `nonsquare` in GF(q^2) (q odd).
    pub delta: Option<Fe>,
}

impl QuadraticExtension {
    pub fn new(base: Field) -> Result<Self> {
        let q = base.order();
        let ext = Field::new(q * q)?;
        // A root of the base modulus inside GF(q^2) fixes the embedding of t.
        let m_low: Vec<u32> = base.modulus().iter().rev().copied().collect();
        let eval = |x: Fe| -> Fe {
            m_low.iter().rev().fold(Fe::ZERO, |acc, &c| {
                ext.add(ext.mul(acc, x), Fe(c as u16))
            })
        };
        let root = ext
            .elements()
            .find(|&x| eval(x) == Fe::ZERO)
            .ok_or_else(|| Error::Inconsistent("base modulus has no root in GF(q^2)".into()))?;
        let p = base.p();
        let mut embed = Vec::with_capacity(q as usize);
        for a in base.elements() {
            let ds = digits(a.0 as u32, p, base.k());
            let mut acc = Fe::ZERO;
            let mut power = Fe::ONE;
            for d in ds {
                acc = ext.add(acc, ext.mul(Fe(d as u16), power));
                power = ext.mul(power, root);
            }
            embed.push(acc);
        }
        let mut restrict = vec![None; ext.order() as usize];
        for a in base.elements() {
            restrict[embed[a.idx()].idx()] = Some(a);
        }
        let (nonsquare, delta) = if q % 2 == 1 {
            let ns = base.nonzero().find(|&a| !base.is_square(a)).unwrap();
            let target = embed[ns.idx()];
            let d = ext.elements().find(|&z| ext.mul(z, z) == target).unwrap();
            (Some(ns), Some(d))
        } else {
            (None, None)
        };
        Ok(Self { base, ext, embed, restrict, nonsquare, delta })
    }

    pub fn q(&self) -> u32 {
        self.base.order()
    }

    #[inline]
    pub fn embed(&self, a: Fe) -> Fe {
        self.embed[a.idx()]
    }

    /// Inverse of [`embed`](Self::embed) on its image.
    #[inline]
    pub fn restrict(&self, z: Fe) -> Option<Fe> {
        self.restrict[z.idx()]
    }

    /// Norm `z^(q+1)`, returned as an element of the base field.
    pub fn norm(&self, z: Fe) -> Fe {
        let n = self.ext.pow(z, self.q() as i64 + 1);
        self.restrict(n).expect("norm lands in the base field")
    }

    /// Frobenius conjugate `z^q`.
    pub fn conj(&self, z: Fe) -> Fe {
        self.ext.pow(z, self.q() as i64)
    }

    /// Roots in GF(q^2) of `t^2 - trace t + det` for base-field `trace`, `det`.
    pub fn roots_of(&self, trace: Fe, det: Fe) -> Vec<Fe> {
        let (tr, dt) = (self.embed(trace), self.embed(det));
        let e = &self.ext;
        e.elements()
            .filter(|&z| e.add(e.sub(e.mul(z, z), e.mul(tr, z)), dt) == Fe::ZERO)
            .collect()
    }
}

pub fn make_field(q: u32) -> Result<Field> {
    Field::new(q)
}
