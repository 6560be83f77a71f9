use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::fp_poly;
use crate::error::{Error, Result};

/// An element of a finite field, encoded as the integer `sum c_i p^i` of its
/// coefficient vector in the polynomial basis.
pub type Fe = u64;

/// Fields up to this size get exp/log tables.
const TABLE_LIMIT: u64 = 1 << 20;

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The finite field F_{p^k} = F_p[x]/(modulus).
pub struct Gf {
    p: u32,
    k: u32,
    size: u64,
    modulus: Vec<u32>,
    pow_p: Vec<u64>,
    gen: Option<Fe>,
    tables: Option<Tables>,
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}
impl Eq for Gf {}

impl Gf {
    /// F_{p^k} with the lexicographically least irreducible modulus.
    pub fn new(p: u32, k: u32) -> Result<Arc<Gf>> {
        if p < 2 || fp_poly::prime_factors(p as u64) != vec![p as u64] {
            return Err(Error::Config(format!("characteristic {p} is not prime")));
        }
        if k == 0 {
            return Err(Error::Config("field degree must be positive".into()));
        }
        Self::with_modulus(p, fp_poly::least_irreducible(p, k))
    }

    /// F_p[x]/(modulus); the modulus must be monic and irreducible.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Arc<Gf>> {
        let mut modulus = modulus;
        fp_poly::trim(&mut modulus);
        if modulus.len() < 2 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Config("modulus coefficients out of range".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::Config("modulus must be monic".into()));
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(Error::Config(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        let k = (modulus.len() - 1) as u32;
        let size = (p as u64)
            .checked_pow(k)
            .filter(|s| *s < (1u64 << 62))
            .ok_or_else(|| Error::Config(format!("field {p}^{k} too large")))?;
        let pow_p = (0..=k).map(|i| (p as u64).pow(i)).collect();
        let mut gf = Gf { p, k, size, modulus, pow_p, gen: None, tables: None };
        if size <= TABLE_LIMIT {
            let g = gf.find_primitive();
            let mut exp = Vec::with_capacity((size - 1) as usize);
            let mut log = vec![0u32; size as usize];
            let mut cur: Fe = 1;
            for i in 0..size - 1 {
                exp.push(cur as u32);
                log[cur as usize] = i as u32;
                cur = gf.mul_poly(cur, g);
            }
            gf.gen = Some(g);
            gf.tables = Some(Tables { exp, log });
        }
        Ok(Arc::new(gf))
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.k
    }
    pub fn size(&self) -> u64 {
        self.size
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// A primitive element (only for tabled fields).
    pub fn generator(&self) -> Option<Fe> {
        self.gen
    }

    pub fn digits(&self, a: Fe) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut x = a;
        for _ in 0..self.k {
            out.push((x % self.p as u64) as u32);
            x /= self.p as u64;
        }
        out
    }

    pub fn from_digits(&self, d: &[u32]) -> Fe {
        d.iter()
            .take(self.k as usize)
            .enumerate()
            .map(|(i, &c)| (c % self.p) as u64 * self.pow_p[i])
            .sum()
    }

    pub fn contains(&self, a: Fe) -> bool {
        a < self.size
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as u64;
        let (mut x, mut y, mut out, mut place) = (a, b, 0u64, 1u64);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        let p = self.p as u64;
        let (mut x, mut out, mut place) = (a, 0u64, 1u64);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let n = self.size - 1;
                let e = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % n;
                t.exp[e as usize] as Fe
            }
            None => self.mul_poly(a, b),
        }
    }

    fn mul_poly(&self, a: Fe, b: Fe) -> Fe {
        let prod = fp_poly::mul_mod(&self.digits(a), &self.digits(b), &self.modulus, self.p);
        self.from_digits(&prod)
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let n = self.size - 1;
            let l = (t.log[a as usize] as u128 * (e % n) as u128 % n as u128) as usize;
            return t.exp[l] as Fe;
        }
        let mut r: Fe = 1;
        let mut b = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            return None;
        }
        Some(self.pow(a, self.size - 2))
    }

    /// `a^(p^j)`; `j` is taken modulo the degree.
    pub fn frob_p(&self, a: Fe, j: u64) -> Fe {
        let j = j % self.k as u64;
        let mut x = a;
        if let Some(t) = &self.tables {
            if x == 0 {
                return 0;
            }
            let n = self.size - 1;
            let e = fp_poly::pow_mod(self.p as u64, j, n);
            let l = (t.log[x as usize] as u128 * e as u128 % n as u128) as usize;
            return t.exp[l] as Fe;
        }
        for _ in 0..j {
            x = self.pow(x, self.p as u64);
        }
        x
    }

    /// Discrete logarithm to the primitive element (tabled fields only).
    pub fn log(&self, a: Fe) -> Option<u64> {
        match (&self.tables, a) {
            (_, 0) => None,
            (Some(t), _) => Some(t.log[a as usize] as u64),
            (None, _) => None,
        }
    }

    pub fn exp(&self, i: u64) -> Option<Fe> {
        self.tables.as_ref().map(|t| t.exp[(i % (self.size - 1)) as usize] as Fe)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> u64 {
        let n = self.size - 1;
        let mut ord = n;
        for r in fp_poly::prime_factors(n) {
            while ord % r == 0 && self.pow(a, ord / r) == 1 {
                ord /= r;
            }
        }
        ord
    }

    fn find_primitive(&self) -> Fe {
        let n = self.size - 1;
        let factors = fp_poly::prime_factors(n);
        (1..self.size)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, n / r) != 1))
            .expect("finite field has a primitive element")
    }

    fn pow_slow(&self, a: Fe, mut e: u64) -> Fe {
        let mut r: Fe = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_poly(r, b);
            }
            b = self.mul_poly(b, b);
            e >>= 1;
        }
        r
    }

    /// All elements of the unique subfield of size `p^j` (requires `j | k`), in
    /// increasing encoding order.
    pub fn subfield_elements(&self, j: u32) -> Result<Vec<Fe>> {
        if j == 0 || self.k % j != 0 {
            return Err(Error::Config(format!("no subfield of degree {j} in {self:?}")));
        }
        let sub_size = (self.p as u64).pow(j);
        let mut out: Vec<Fe> = if sub_size <= 1 << 24 {
            let cof = (self.size - 1) / (sub_size - 1);
            let w = (1..self.size)
                .map(|y| self.pow(y, cof))
                .find(|&w| {
                    fp_poly::prime_factors(sub_size - 1)
                        .iter()
                        .all(|&r| self.pow(w, (sub_size - 1) / r) != 1)
                })
                .expect("subfield generator exists");
            let mut v = vec![0];
            let mut cur = 1;
            for _ in 0..sub_size - 1 {
                v.push(cur);
                cur = self.mul(cur, w);
            }
            v
        } else {
            return Err(Error::Bound(format!("subfield of size {sub_size} too large to enumerate")));
        };
        out.sort_unstable();
        Ok(out)
    }

    /// Evaluate an F_p-polynomial (little-endian) at `x`.
    pub fn eval_fp_poly(&self, coeffs: &[u32], x: Fe) -> Fe {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c as Fe))
    }
}

/// A field embedding `src -> dst` given by an explicit table.
#[derive(Clone)]
pub struct Embedding {
    pub src: Arc<Gf>,
    pub dst: Arc<Gf>,
    table: Arc<Vec<Fe>>,
    inverse: Arc<HashMap<Fe, Fe>>,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({:?} -> {:?})", self.src, self.dst)
    }
}

impl Embedding {
    /// The embedding sending `x` to the least root (by encoding) of src's modulus in dst.
    pub fn new(src: &Arc<Gf>, dst: &Arc<Gf>) -> Result<Embedding> {
        if src.p != dst.p || dst.k % src.k != 0 {
            return Err(Error::Config(format!("{src:?} does not embed in {dst:?}")));
        }
        let candidates = dst.subfield_elements(src.k)?;
        let root = candidates
            .into_iter()
            .find(|&y| dst.eval_fp_poly(&src.modulus, y) == 0)
            .expect("irreducible modulus splits in the extension");
        Self::from_root(src, dst, root)
    }

    fn from_root(src: &Arc<Gf>, dst: &Arc<Gf>, root: Fe) -> Result<Embedding> {
        if src.size > 1 << 24 {
            return Err(Error::Bound(format!("embedding source {src:?} too large")));
        }
        let powers: Vec<Fe> = (0..src.k)
            .scan(1, |acc, _| {
                let cur = *acc;
                *acc = dst.mul(*acc, root);
                Some(cur)
            })
            .collect();
        let table: Vec<Fe> = (0..src.size)
            .map(|a| {
                src.digits(a)
                    .iter()
                    .zip(&powers)
                    .fold(0, |acc, (&c, &pw)| dst.add(acc, dst.mul(c as Fe, pw)))
            })
            .collect();
        let inverse = table.iter().enumerate().map(|(i, &v)| (v, i as Fe)).collect();
        Ok(Embedding {
            src: src.clone(),
            dst: dst.clone(),
            table: Arc::new(table),
            inverse: Arc::new(inverse),
        })
    }

    pub fn identity(f: &Arc<Gf>) -> Result<Embedding> {
        let x = if f.k > 1 { f.p as Fe } else { 0 };
        Self::from_root(f, f, x)
    }

    pub fn apply(&self, a: Fe) -> Fe {
        self.table[a as usize]
    }

    /// Preimage of `b`, if it lies in the image.
    pub fn preimage(&self, b: Fe) -> Option<Fe> {
        self.inverse.get(&b).copied()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Embedding) -> Result<Embedding> {
        if *self.dst != *other.src {
            return Err(Error::Config("embedding chain mismatch".into()));
        }
        let table: Vec<Fe> = self.table.iter().map(|&a| other.apply(a)).collect();
        let inverse = table.iter().enumerate().map(|(i, &v)| (v, i as Fe)).collect();
        Ok(Embedding {
            src: self.src.clone(),
            dst: other.dst.clone(),
            table: Arc::new(table),
            inverse: Arc::new(inverse),
        })
    }
}
