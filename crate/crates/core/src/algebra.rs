//! The cyclic algebra `D = (K/F, σ, r)` with `K = F_{q^d}(T)`, `F = F_q(T)`, and its
//! order `O_D = ⊕ O_K z^i`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::base::amat::{self, PolyMat};
use crate::base::factor::factor;
use crate::base::ratfn::poly_ord;
use crate::base::{Fe, Poly, RatFn, Tower};
use crate::error::{Error, Result};

/// A rational number modulo 1, kept reduced with `0 <= num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ {
    num: i64,
    den: i64,
}

fn gcd_i(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i(b, a % b)
    }
}

impl QmodZ {
    pub fn new(num: i64, den: i64) -> QmodZ {
        assert!(den > 0, "denominator must be positive");
        let n = num.rem_euclid(den);
        let g = gcd_i(n, den).max(1);
        QmodZ { num: n / g, den: den / g }
    }
    pub fn zero() -> QmodZ {
        QmodZ { num: 0, den: 1 }
    }
    pub fn num(&self) -> i64 {
        self.num
    }
    pub fn den(&self) -> i64 {
        self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
    pub fn add(&self, o: &QmodZ) -> QmodZ {
        QmodZ::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }
    pub fn neg(&self) -> QmodZ {
        QmodZ::new(-self.num, self.den)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A place of F: a monic irreducible of A, or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "({})", p.display()),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraConfig {
    pub p: u32,
    pub e: u32,
    pub d: u32,
    /// Coefficients of r over F_q, little-endian.
    pub r: Vec<Fe>,
}

/// `D = (K/F, σ, r)` with σ the q-Frobenius on constants.
#[derive(Clone, Debug)]
pub struct CyclicAlgebra {
    pub tower: Tower,
    /// r ∈ A, monic squarefree.
    pub r: Poly,
    /// Prime factors of r.
    pub primes: Vec<Poly>,
    /// r as a constant-coefficient element of K.
    r_k: RatFn,
}

/// `Σ y_i z^i` with `y_i ∈ K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgElem {
    pub y: Vec<RatFn>,
}

impl CyclicAlgebra {
    pub fn new(tower: &Tower, r: &Poly) -> Result<CyclicAlgebra> {
        let fq = &tower.fq;
        let d = tower.d as usize;
        if r.is_zero() || !r.is_monic() {
            return Err(Error::Config("r must be monic and nonzero".into()));
        }
        let fs = factor(fq, r)?;
        if fs.iter().any(|(_, m)| *m > 1) {
            return Err(Error::Config(format!("r = {} is not squarefree", r.display())));
        }
        for (p, _) in &fs {
            if gcd_i(p.degree().unwrap() as i64, d as i64) != 1 {
                return Err(Error::Config(format!(
                    "prime {} has degree not coprime to d = {d}",
                    p.display()
                )));
            }
        }
        if r.degree().unwrap() % d != 0 {
            return Err(Error::Config("deg r must be divisible by d".into()));
        }
        if d >= 2 && fs.is_empty() {
            return Err(Error::Config("r = 1 gives a split algebra".into()));
        }
        let r_k = RatFn::from_poly(r.map(|c| tower.emb.apply(c)));
        Ok(CyclicAlgebra { tower: tower.clone(), r: r.clone(), primes: fs.into_iter().map(|x| x.0).collect(), r_k })
    }

    pub fn from_config(cfg: &AlgebraConfig) -> Result<CyclicAlgebra> {
        let tower = Tower::from_pqd(cfg.p, cfg.e, cfg.d)?;
        if cfg.r.iter().any(|&c| c >= tower.q()) {
            return Err(Error::Config("coefficients of r must lie in [0, q)".into()));
        }
        CyclicAlgebra::new(&tower, &Poly::new(cfg.r.clone()))
    }

    pub fn d(&self) -> usize {
        self.tower.d as usize
    }
    pub fn q(&self) -> u64 {
        self.tower.q()
    }

    /// `σ^k` on K (Frobenius on constants only).
    pub fn sigma(&self, y: &RatFn, k: usize) -> RatFn {
        let k = k % self.d();
        if k == 0 {
            return y.clone();
        }
        y.frob_inflate(&self.tower.fqd, self.tower.e as u64 * k as u64, 1)
    }

    // ---- elements ----

    pub fn zero(&self) -> AlgElem {
        AlgElem { y: vec![RatFn::zero(); self.d()] }
    }
    pub fn one(&self) -> AlgElem {
        self.from_k(RatFn::one())
    }
    pub fn from_k(&self, y: RatFn) -> AlgElem {
        let mut e = self.zero();
        e.y[0] = y;
        e
    }
    /// Embed `a ∈ A`.
    pub fn from_a(&self, a: &Poly) -> AlgElem {
        self.from_k(RatFn::from_poly(a.map(|c| self.tower.emb.apply(c))))
    }
    /// Constant `c ∈ F_{q^d}`.
    pub fn constant(&self, c: Fe) -> AlgElem {
        self.from_k(RatFn::from_poly(Poly::constant(c)))
    }
    pub fn t(&self) -> AlgElem {
        self.from_k(RatFn::from_poly(Poly::t()))
    }
    pub fn h(&self) -> AlgElem {
        self.constant(self.tower.h)
    }
    pub fn z(&self) -> AlgElem {
        let mut e = self.zero();
        if self.d() == 1 {
            e.y[0] = self.r_k.clone();
        } else {
            e.y[1] = RatFn::one();
        }
        e
    }
    /// `y z^i`
    pub fn monomial(&self, y: RatFn, i: usize) -> AlgElem {
        let mut e = self.zero();
        e.y[i] = y;
        e
    }

    pub fn add(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let f = &self.tower.fqd;
        AlgElem { y: a.y.iter().zip(&b.y).map(|(x, y)| x.add(f, y)).collect() }
    }
    pub fn sub(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let f = &self.tower.fqd;
        AlgElem { y: a.y.iter().zip(&b.y).map(|(x, y)| x.sub(f, y)).collect() }
    }
    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let f = &self.tower.fqd;
        let d = self.d();
        let mut out = vec![RatFn::zero(); d];
        for (i, x) in a.y.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.y.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let mut t = x.mul(f, &self.sigma(y, i));
                let mut k = i + j;
                if k >= d {
                    t = t.mul(f, &self.r_k);
                    k -= d;
                }
                out[k] = out[k].add(f, &t);
            }
        }
        AlgElem { y: out }
    }
    pub fn pow(&self, a: &AlgElem, n: u32) -> AlgElem {
        (0..n).fold(self.one(), |acc, _| self.mul(&acc, a))
    }
    pub fn is_zero(&self, a: &AlgElem) -> bool {
        a.y.iter().all(|x| x.is_zero())
    }
    pub fn is_integral(&self, a: &AlgElem) -> bool {
        a.y.iter().all(|x| x.is_poly())
    }

    /// Norm `K -> F` of a polynomial of `F_{q^d}[T]`, as an element of `A`.
    pub fn norm_k(&self, y: &Poly) -> Poly {
        let f = &self.tower.fqd;
        let mut acc = Poly::one();
        for k in 0..self.d() {
            acc = acc.mul(f, &y.map_frob(f, self.tower.e as u64 * k as u64));
        }
        self.to_a(&acc).expect("norm lies in A")
    }

    /// Trace `K -> F` of a polynomial of `F_{q^d}[T]`.
    pub fn trace_k(&self, y: &Poly) -> Poly {
        let f = &self.tower.fqd;
        let mut acc = Poly::zero();
        for k in 0..self.d() {
            acc = acc.add(f, &y.map_frob(f, self.tower.e as u64 * k as u64));
        }
        self.to_a(&acc).expect("trace lies in A")
    }

    /// Pull a polynomial with coefficients in the image of F_q back to A.
    pub fn to_a(&self, y: &Poly) -> Option<Poly> {
        let v: Option<Vec<Fe>> = y.coeffs().iter().map(|&c| self.tower.emb.preimage(c)).collect();
        v.map(Poly::new)
    }

    /// `(c, c·b)` with `c ∈ A` monic and `c·b ∈ O_D`.
    pub fn clear_denominators(&self, b: &AlgElem) -> (Poly, AlgElem) {
        let fq = &self.tower.fq;
        let c = b.y.iter().fold(Poly::one(), |acc, y| {
            if y.is_poly() {
                acc
            } else {
                acc.mul(fq, &self.norm_k(y.den()))
            }
        });
        let cb = self.mul(&self.from_a(&c), b);
        debug_assert!(self.is_integral(&cb));
        (c, cb)
    }

    /// A-coordinates of an integral element in the basis `h^j z^i`, index `i*d + j`.
    pub fn coords(&self, b: &AlgElem) -> Result<Vec<Poly>> {
        let d = self.d();
        let mut out = vec![Vec::new(); d * d];
        for (i, y) in b.y.iter().enumerate() {
            if !y.is_poly() {
                return Err(Error::NonIntegral);
            }
            let n = y.num().coeffs().len();
            for j in 0..d {
                out[i * d + j] = vec![0; n];
            }
            for (k, &c) in y.num().coeffs().iter().enumerate() {
                for (j, &a) in self.tower.h_coords(c).iter().enumerate() {
                    out[i * d + j][k] = a;
                }
            }
        }
        Ok(out.into_iter().map(Poly::new).collect())
    }

    /// The A-basis `h^j z^i` of O_D, index `i*d + j`.
    pub fn basis(&self) -> Vec<AlgElem> {
        let d = self.d();
        let f = &self.tower.fqd;
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let hj = RatFn::from_poly(Poly::constant(f.pow(self.tower.h, j as u64)));
                out.push(self.monomial(hj, i));
            }
        }
        out
    }

    fn mult_matrix(&self, b: &AlgElem, left: bool) -> Result<PolyMat> {
        let basis = self.basis();
        let n = basis.len();
        let cols: Vec<Vec<Poly>> = basis
            .iter()
            .map(|e| self.coords(&if left { self.mul(b, e) } else { self.mul(e, b) }))
            .collect::<Result<_>>()?;
        Ok((0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect())
    }

    /// Matrix of `x ↦ b·x` on the A-basis (b integral).
    pub fn left_mult_matrix(&self, b: &AlgElem) -> Result<PolyMat> {
        self.mult_matrix(b, true)
    }
    /// Matrix of `x ↦ x·b` on the A-basis (b integral).
    pub fn right_mult_matrix(&self, b: &AlgElem) -> Result<PolyMat> {
        self.mult_matrix(b, false)
    }

    /// Monic non-reduced norm: the determinant of left multiplication on D over F.
    pub fn nonreduced_norm(&self, b: &AlgElem) -> Result<RatFn> {
        if self.is_zero(b) {
            return Err(Error::ZeroInput("nonreduced_norm"));
        }
        let fq = &self.tower.fq;
        let (c, cb) = self.clear_denominators(b);
        let n = amat::det(fq, &self.left_mult_matrix(&cb)?).monic(fq);
        let dd = (self.d() * self.d()) as u64;
        RatFn::new(fq, n, c.pow(fq, dd))
    }

    /// Monic norm of an integral element, as an element of A.
    pub fn norm_integral(&self, b: &AlgElem) -> Result<Poly> {
        if !self.is_integral(b) {
            return Err(Error::NonIntegral);
        }
        Ok(self.nonreduced_norm(b)?.num().clone())
    }

    /// `log_q #(O_D / O_D b)` via the elementary divisors of right multiplication.
    pub fn order_index_exp(&self, b: &AlgElem) -> Result<usize> {
        if self.is_zero(b) {
            return Err(Error::ZeroInput("order_index"));
        }
        let m = self.right_mult_matrix(b)?;
        let s = amat::smith_diagonal(&self.tower.fq, &m);
        if s.len() < m.len() {
            return Err(Error::Invariant("right multiplication by a nonzero element is singular".into()));
        }
        Ok(s.iter().map(|x| x.degree().unwrap()).sum())
    }

    /// `#(O_D / O_D b)`.
    pub fn order_index(&self, b: &AlgElem) -> Result<u128> {
        let k = self.order_index_exp(b)?;
        (self.q() as u128).checked_pow(k as u32).ok_or_else(|| Error::Bound("index overflows".into()))
    }

    // ---- invariants and discriminants ----

    /// Local invariants at every place dividing r, and at infinity.
    pub fn invariants(&self) -> Vec<(Place, QmodZ)> {
        let fq = &self.tower.fq;
        let d = self.d() as i64;
        let mut out = Vec::new();
        let mut total = QmodZ::zero();
        for p in &self.primes {
            let v = QmodZ::new(poly_ord(fq, &self.r, p) as i64 * p.degree().unwrap() as i64, d);
            total = total.add(&v);
            out.push((Place::Finite(p.clone()), v));
        }
        out.push((Place::Infinity, total.neg()));
        out
    }

    /// Invariant at an arbitrary finite prime.
    pub fn invariant_at(&self, p: &Poly) -> QmodZ {
        let fq = &self.tower.fq;
        QmodZ::new(poly_ord(fq, &self.r, p) as i64 * p.degree().unwrap() as i64, self.d() as i64)
    }

    /// The ramified primes.
    pub fn ramification(&self) -> Vec<Poly> {
        self.invariants()
            .into_iter()
            .filter_map(|(pl, v)| match pl {
                Place::Finite(p) if !v.is_zero() => Some(p),
                _ => None,
            })
            .collect()
    }

    /// Discriminant of `O_D`: `r^(d(d-1))` (K/F is unramified).
    pub fn order_discriminant(&self) -> Poly {
        let d = self.d() as u64;
        self.r.pow(&self.tower.fq, d * (d - 1))
    }

    /// Reduced trace `Trd(Σ y_i z^i) = Tr_{K/F}(y_0)` of an integral element.
    pub fn reduced_trace(&self, b: &AlgElem) -> Result<Poly> {
        if !self.is_integral(b) {
            return Err(Error::NonIntegral);
        }
        Ok(self.trace_k(b.y[0].num()))
    }

    /// Discriminant of O_D from the reduced-trace Gram matrix of the A-basis.
    pub fn trace_form_discriminant(&self) -> Result<Poly> {
        let basis = self.basis();
        let gram: PolyMat = basis
            .iter()
            .map(|x| basis.iter().map(|y| self.reduced_trace(&self.mul(x, y))).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(amat::det(&self.tower.fq, &gram).monic(&self.tower.fq))
    }

    pub fn maximal_order_discriminant(&self) -> Poly {
        maximal_discriminant(&self.tower.fq, self.d() as i64, &self.invariants())
    }

    pub fn is_maximal(&self) -> bool {
        self.order_discriminant() == self.maximal_order_discriminant()
    }

    // ---- sampling ----

    /// A random element of O_D with coefficient degree `<= deg`.
    pub fn random_integral(&self, rng: &mut impl Rng, deg: usize) -> AlgElem {
        let n = self.tower.fqd.size();
        AlgElem {
            y: (0..self.d())
                .map(|_| RatFn::from_poly(Poly::new((0..=deg).map(|_| rng.gen_range(0..n)).collect())))
                .collect(),
        }
    }

    pub fn display(&self, b: &AlgElem) -> String {
        let mut parts = Vec::new();
        for (i, y) in b.y.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let yk = if y.is_poly() {
                format!("({})", y.num().display())
            } else {
                format!("({})/({})", y.num().display(), y.den().display())
            };
            parts.push(match i {
                0 => yk,
                1 => format!("{yk}*z"),
                _ => format!("{yk}*z^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// `∏ p^(d(d - d/r_p))` over the finite places, `r_p` the local index.
pub fn maximal_discriminant(fq: &crate::base::Gf, d: i64, inv: &[(Place, QmodZ)]) -> Poly {
    inv.iter()
        .filter_map(|(pl, v)| match pl {
            Place::Finite(p) if !v.is_zero() => Some((p, v.den())),
            _ => None,
        })
        .fold(Poly::one(), |acc, (p, rp)| acc.mul(fq, &p.pow(fq, (d * (d - d / rp)) as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alg(p: u32, d: u32, r: &[u64]) -> CyclicAlgebra {
        CyclicAlgebra::new(&Tower::from_pqd(p, 1, d).unwrap(), &Poly::new(r.to_vec())).unwrap()
    }

    #[test]
    fn relations() {
        let a = alg(3, 2, &[2, 0, 1]);
        let z = a.z();
        let h = a.h();
        let zh = a.mul(&z, &h);
        let hq = a.constant(a.tower.frobenius(a.tower.h, 1));
        assert_eq!(zh, a.mul(&hq, &z));
        assert_eq!(a.mul(&z, &z), a.from_a(&a.r));
        // (h + z)^2 = (h^2 + r) + (h + h^3) z
        let f = &a.tower.fqd;
        let s = a.add(&h, &z);
        let g = a.tower.h;
        let expect = a.add(
            &a.add(&a.constant(f.mul(g, g)), &a.from_a(&a.r)),
            &a.monomial(RatFn::from_poly(Poly::constant(f.add(g, f.pow(g, 3)))), 1),
        );
        assert_eq!(a.mul(&s, &s), expect);
    }

    #[test]
    fn associativity_random() {
        let a = alg(3, 3, &[0, 2, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let (x, y, w) = (a.random_integral(&mut rng, 2), a.random_integral(&mut rng, 2), a.random_integral(&mut rng, 1));
            assert_eq!(a.mul(&a.mul(&x, &y), &w), a.mul(&x, &a.mul(&y, &w)));
        }
    }

    #[test]
    fn norm_examples() {
        let a = alg(3, 2, &[2, 0, 1]);
        let fq = &a.tower.fq;
        assert_eq!(a.norm_integral(&a.z()).unwrap(), a.r.pow(fq, 2));
        assert_eq!(a.norm_integral(&a.h()).unwrap(), Poly::one());
        assert_eq!(a.norm_integral(&a.t()).unwrap(), Poly::t().pow(fq, 4));
        assert_eq!(a.order_index(&a.z()).unwrap(), 81);
        assert_eq!(a.order_index(&a.one()).unwrap(), 1);
        assert_eq!(a.order_index(&a.t()).unwrap(), 81);
    }

    #[test]
    fn invariants_and_discriminants() {
        let a = alg(3, 2, &[2, 0, 1]);
        let inv: Vec<String> = a.invariants().iter().map(|(p, v)| format!("{p}:{v}")).collect();
        assert_eq!(inv, vec!["(T+1):1/2", "(T+2):1/2", "inf:0"]);
        assert!(a.is_maximal());
        assert_eq!(a.trace_form_discriminant().unwrap(), a.order_discriminant());
        let b = alg(2, 2, &[0, 1, 1]);
        let inv: Vec<String> = b.invariants().iter().map(|(p, v)| format!("{p}:{v}")).collect();
        assert_eq!(inv, vec!["(T):1/2", "(T+1):1/2", "inf:0"]);
    }

    #[test]
    fn constructor_rejects() {
        let t = Tower::from_pqd(3, 1, 2).unwrap();
        // square factor
        assert!(CyclicAlgebra::new(&t, &Poly::new(vec![1, 2, 1])).is_err());
        // T^2 + 1 has degree 2, not coprime to d = 2
        assert!(CyclicAlgebra::new(&t, &Poly::new(vec![1, 0, 1])).is_err());
        // degree not divisible by d
        assert!(CyclicAlgebra::new(&t, &Poly::t()).is_err());
        assert!(CyclicAlgebra::new(&t, &Poly::one()).is_err());
    }
}
