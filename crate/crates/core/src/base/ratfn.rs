//! Rational functions `num/den` over a finite field, and valuations at primes.

use super::gf::Gf;
use super::poly::Poly;
use crate::error::{Error, Result};

/// A reduced fraction with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(f: &Gf, num: Poly, den: Poly) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        if den.is_one() {
            return Ok(RatFn { num, den });
        }
        let g = num.gcd(f, &den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(f, &g)?, den.div_exact(f, &g)?)
        };
        if !d.is_monic() {
            let li = f.inv(d.lead()).unwrap();
            n = n.scale(f, li);
            d = d.scale(f, li);
        }
        Ok(RatFn { num: n, den: d })
    }
    pub fn from_poly(p: Poly) -> RatFn {
        RatFn { num: p, den: Poly::one() }
    }
    pub fn zero() -> RatFn {
        RatFn::from_poly(Poly::zero())
    }
    pub fn one() -> RatFn {
        RatFn::from_poly(Poly::one())
    }
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, f: &Gf, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn::new(f, self.num.add(f, &o.num), self.den.clone()).unwrap();
        }
        let n = self.num.mul(f, &o.den).add(f, &o.num.mul(f, &self.den));
        RatFn::new(f, n, self.den.mul(f, &o.den)).unwrap()
    }
    pub fn neg(&self, f: &Gf) -> RatFn {
        RatFn { num: self.num.neg(f), den: self.den.clone() }
    }
    pub fn sub(&self, f: &Gf, o: &RatFn) -> RatFn {
        self.add(f, &o.neg(f))
    }
    pub fn mul(&self, f: &Gf, o: &RatFn) -> RatFn {
        if self.is_poly() && o.is_poly() {
            return RatFn::from_poly(self.num.mul(f, &o.num));
        }
        RatFn::new(f, self.num.mul(f, &o.num), self.den.mul(f, &o.den)).unwrap()
    }
    pub fn inv(&self, f: &Gf) -> Result<RatFn> {
        RatFn::new(f, self.den.clone(), self.num.clone())
    }
    pub fn div(&self, f: &Gf, o: &RatFn) -> Result<RatFn> {
        Ok(self.mul(f, &o.inv(f)?))
    }

    /// Apply `c -> c^(p^j)` to coefficients and `T -> T^m`; this is a ring
    /// endomorphism, so the result stays reduced.
    pub fn frob_inflate(&self, f: &Gf, j: u64, m: usize) -> RatFn {
        RatFn { num: self.num.map_frob(f, j).inflate(m), den: self.den.map_frob(f, j).inflate(m) }
    }

    /// Exponent of the monic irreducible `p` in this function.
    pub fn ord(&self, f: &Gf, p: &Poly) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroInput("ord"));
        }
        Ok(poly_ord(f, &self.num, p) as i64 - poly_ord(f, &self.den, p) as i64)
    }

    /// `ord_inf = deg den - deg num`.
    pub fn ord_inf(&self) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroInput("ord_inf"));
        }
        Ok(self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64)
    }
}

/// Multiplicity of `p` in the nonzero polynomial `a`.
pub fn poly_ord(f: &Gf, a: &Poly, p: &Poly) -> u32 {
    let mut k = 0;
    let mut cur = a.clone();
    loop {
        let (q, r) = cur.divrem(f, p).unwrap();
        if !r.is_zero() || cur.is_zero() {
            return k;
        }
        cur = q;
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::factor::factor;

    #[test]
    fn ord_examples() {
        let f = Gf::new(3, 1).unwrap();
        let x = RatFn::new(&f, Poly::new(vec![0, 0, 1]), Poly::new(vec![1, 1])).unwrap();
        assert_eq!(x.ord(&f, &Poly::t()).unwrap(), 2);
        assert_eq!(x.ord(&f, &Poly::new(vec![1, 1])).unwrap(), -1);
        assert_eq!(RatFn::one().ord(&f, &Poly::new(vec![1, 0, 1])).unwrap(), 0);
        assert!(RatFn::zero().ord(&f, &Poly::t()).is_err());
    }

    #[test]
    fn product_formula() {
        let f = Gf::new(3, 2).unwrap();
        for s in 1..30u64 {
            let n = Poly::new((0..4).map(|i| (s * 5 + i * 7) % 9).chain([1 + s % 8]).collect());
            let d = Poly::new((0..3).map(|i| (s * 3 + i * i + 1) % 9).chain([1]).collect());
            let x = RatFn::new(&f, n, d).unwrap();
            let mut total = x.ord_inf().unwrap();
            let mut primes: Vec<Poly> = factor(&f, x.num()).unwrap().into_iter().map(|p| p.0).collect();
            primes.extend(factor(&f, x.den()).unwrap().into_iter().map(|p| p.0));
            primes.sort();
            primes.dedup();
            for p in primes {
                total += x.ord(&f, &p).unwrap() * p.degree().unwrap() as i64;
            }
            assert_eq!(total, 0);
        }
    }

    #[test]
    fn field_ops() {
        let f = Gf::new(2, 2).unwrap();
        let a = RatFn::new(&f, Poly::new(vec![1, 2]), Poly::new(vec![3, 0, 1])).unwrap();
        let b = RatFn::new(&f, Poly::new(vec![2, 0, 1]), Poly::new(vec![1, 1])).unwrap();
        assert_eq!(a.mul(&f, &b).div(&f, &b).unwrap(), a);
        assert_eq!(a.add(&f, &b).sub(&f, &b), a);
        assert_eq!(a.mul(&f, &a.inv(&f).unwrap()), RatFn::one());
    }
}
