//! Univariate polynomials over a finite field, in the variable `T`.

use std::fmt;

use super::gf::{Fe, Gf};
use crate::error::{Error, Result};

/// Little-endian coefficients with no trailing zeros; the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(Vec<Fe>);

impl Poly {
    pub fn new(mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly(coeffs)
    }
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }
    pub fn one() -> Poly {
        Poly(vec![1])
    }
    pub fn constant(c: Fe) -> Poly {
        Poly::new(vec![c])
    }
    /// `c T^n`
    pub fn monomial(c: Fe, n: usize) -> Poly {
        let mut v = vec![0; n + 1];
        v[n] = c;
        Poly::new(v)
    }
    /// The variable `T`.
    pub fn t() -> Poly {
        Poly(vec![0, 1])
    }
    pub fn coeffs(&self) -> &[Fe] {
        &self.0
    }
    pub fn coeff(&self, i: usize) -> Fe {
        self.0.get(i).copied().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }
    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    pub fn lead(&self) -> Fe {
        self.0.last().copied().unwrap_or(0)
    }
    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn add(&self, f: &Gf, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }
    pub fn sub(&self, f: &Gf, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }
    pub fn neg(&self, f: &Gf) -> Poly {
        Poly(self.0.iter().map(|&c| f.neg(c)).collect())
    }
    pub fn scale(&self, f: &Gf, c: Fe) -> Poly {
        Poly::new(self.0.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &Gf, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0; self.0.len() + o.0.len() - 1];
        // skip zeros: Frobenius-twisted operands are sparse
        let rhs: Vec<(usize, Fe)> = o.0.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(j, b) in &rhs {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, f: &Gf, mut e: u64) -> Poly {
        let mut r = Poly::one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(f, &b);
            }
            b = b.mul(f, &b);
            e >>= 1;
        }
        r
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, f: &Gf, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let li = f.inv(d.lead()).expect("nonzero lead");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![0; r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = f.mul(r[top], li);
            if c == 0 {
                continue;
            }
            let shift = top - dd;
            q[shift] = c;
            for (j, &dj) in d.0.iter().enumerate() {
                if dj != 0 {
                    r[shift + j] = f.sub(r[shift + j], f.mul(c, dj));
                }
            }
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn rem(&self, f: &Gf, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(f, d)?.1)
    }

    /// Exact division; errors if `d` does not divide `self`.
    pub fn div_exact(&self, f: &Gf, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(f, d)?;
        if !r.is_zero() {
            return Err(Error::Invariant("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self, f: &Gf) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f, f.inv(self.lead()).unwrap())
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    /// Monic gcd.
    pub fn gcd(&self, f: &Gf, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b).unwrap();
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, f: &Gf, o: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(f, &r1).unwrap();
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(f, &q.mul(f, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(f, &q.mul(f, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let li = f.inv(r0.lead()).unwrap();
        (r0.scale(f, li), s0.scale(f, li), t0.scale(f, li))
    }

    pub fn derivative(&self, f: &Gf) -> Poly {
        let p = f.p() as u64;
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| {
                    let m = (i as u64 % p) as Fe;
                    f.mul(c, m)
                })
                .collect(),
        )
    }

    pub fn eval(&self, f: &Gf, x: Fe) -> Fe {
        self.0.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Apply `c -> c^(p^j)` to every coefficient.
    pub fn map_frob(&self, f: &Gf, j: u64) -> Poly {
        Poly(self.0.iter().map(|&c| f.frob_p(c, j)).collect())
    }

    /// `self(T^m)`.
    pub fn inflate(&self, m: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0; (self.0.len() - 1) * m + 1];
        for (i, &c) in self.0.iter().enumerate() {
            v[i * m] = c;
        }
        Poly(v)
    }

    /// Map coefficients through a function (e.g. a field embedding).
    pub fn map(&self, g: impl Fn(Fe) -> Fe) -> Poly {
        Poly::new(self.0.iter().map(|&c| g(c)).collect())
    }

    pub fn display(&self) -> PolyDisplay<'_> {
        PolyDisplay(self)
    }
}

/// Prints `T^2+2*T+1` style, highest degree first; coefficients are field encodings.
pub struct PolyDisplay<'a>(&'a Poly);

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.0;
        if p.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in p.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, c) => write!(f, "{c}*T")?,
                (i, 1) => write!(f, "T^{i}")?,
                (i, c) => write!(f, "{c}*T^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let f = Gf::new(3, 1).unwrap();
        let a = Poly::new(vec![1, 2, 0, 1, 2]);
        let b = Poly::new(vec![2, 1, 1]);
        let (q, r) = a.divrem(&f, &b).unwrap();
        assert_eq!(q.mul(&f, &b).add(&f, &r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn xgcd_bezout() {
        let f = Gf::new(2, 2).unwrap();
        let a = Poly::new(vec![1, 2, 3, 1]);
        let b = Poly::new(vec![3, 0, 1]);
        let (g, s, t) = a.xgcd(&f, &b);
        assert_eq!(s.mul(&f, &a).add(&f, &t.mul(&f, &b)), g);
        assert_eq!(g, a.gcd(&f, &b));
    }

    #[test]
    fn display_format() {
        let p = Poly::new(vec![2, 0, 1]);
        assert_eq!(p.display().to_string(), "T^2+2");
        assert_eq!(Poly::new(vec![1, 2]).display().to_string(), "2*T+1");
    }
}
