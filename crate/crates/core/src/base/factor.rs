//! Factorization of univariate polynomials over a finite field: squarefree
//! decomposition, distinct-degree splitting and a deterministic equal-degree split.

use super::gf::{Fe, Gf};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Factor a nonzero polynomial into monic irreducibles with multiplicities,
/// sorted by (degree, coefficients). The leading coefficient is dropped.
pub fn factor(f: &Gf, a: &Poly) -> Result<Vec<(Poly, u32)>> {
    if a.is_zero() {
        return Err(Error::ZeroInput("factor"));
    }
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (sqf, mult) in squarefree(f, &a.monic(f)) {
        for (g, deg) in distinct_degree(f, &sqf) {
            for irr in equal_degree(f, &g, deg) {
                match out.iter_mut().find(|(p, _)| *p == irr) {
                    Some(entry) => entry.1 += mult,
                    None => out.push((irr, mult)),
                }
            }
        }
    }
    out.sort_by(|x, y| (x.0.degree(), x.0.coeffs()).cmp(&(y.0.degree(), y.0.coeffs())));
    Ok(out)
}

pub fn is_irreducible(f: &Gf, a: &Poly) -> bool {
    match a.degree() {
        None | Some(0) => false,
        Some(_) => matches!(factor(f, a).as_deref(), Ok([(_, 1)])),
    }
}

pub fn is_squarefree(f: &Gf, a: &Poly) -> bool {
    !a.is_zero() && a.gcd(f, &a.derivative(f)).is_one() && !a.derivative(f).is_zero()
        || a.degree() == Some(0)
}

fn pth_root(f: &Gf, a: &Poly) -> Poly {
    let p = f.p() as usize;
    let k = f.degree() as u64;
    Poly::new(
        a.coeffs()
            .iter()
            .step_by(p)
            .map(|&c| f.frob_p(c, k - 1))
            .collect(),
    )
}

fn squarefree(f: &Gf, a: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if a.degree().unwrap_or(0) == 0 {
        return out;
    }
    let da = a.derivative(f);
    if da.is_zero() {
        for (g, m) in squarefree(f, &pth_root(f, a)) {
            out.push((g, m * f.p()));
        }
        return out;
    }
    let mut c = a.gcd(f, &da);
    let mut w = a.div_exact(f, &c).unwrap();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(f, &c);
        let z = w.div_exact(f, &y).unwrap();
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y.clone();
        c = c.div_exact(f, &y).unwrap();
    }
    if !c.is_one() {
        for (g, m) in squarefree(f, &pth_root(f, &c)) {
            out.push((g, m * f.p()));
        }
    }
    out
}

fn powmod(f: &Gf, base: &Poly, mut e: u128, m: &Poly) -> Poly {
    let mut r = Poly::one();
    let mut b = base.rem(f, m).unwrap();
    while e > 0 {
        if e & 1 == 1 {
            r = r.mul(f, &b).rem(f, m).unwrap();
        }
        b = b.mul(f, &b).rem(f, m).unwrap();
        e >>= 1;
    }
    r
}

fn distinct_degree(f: &Gf, a: &Poly) -> Vec<(Poly, usize)> {
    let q = f.size() as u128;
    let mut out = Vec::new();
    let mut rest = a.clone();
    let mut h = Poly::t();
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = powmod(f, &h, q, &rest);
        let g = rest.gcd(f, &h.sub(f, &Poly::t()));
        if !g.is_one() {
            rest = rest.div_exact(f, &g).unwrap();
            h = h.rem(f, &rest).unwrap();
            out.push((g, i));
        }
        i += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let d = rest.degree().unwrap();
        out.push((rest, d));
    }
    out
}

/// Deterministic enumeration of candidate splitting polynomials.
fn candidate(f: &Gf, idx: u64) -> Poly {
    let q = f.size();
    let mut digits = Vec::new();
    let mut x = idx;
    while x > 0 {
        digits.push(x % q);
        x /= q;
    }
    Poly::new(digits)
}

fn equal_degree(f: &Gf, a: &Poly, deg: usize) -> Vec<Poly> {
    let n = a.degree().unwrap_or(0);
    if n == deg {
        return vec![a.clone()];
    }
    let q = f.size() as u128;
    let mut idx = f.size();
    loop {
        let u = candidate(f, idx);
        idx += 1;
        if u.degree().unwrap_or(0) == 0 {
            continue;
        }
        let w = if f.p() == 2 {
            // absolute trace to F_2
            let mut acc = Poly::zero();
            let mut cur = u.rem(f, a).unwrap();
            for _ in 0..(f.degree() as usize * deg) {
                acc = acc.add(f, &cur);
                cur = cur.mul(f, &cur).rem(f, a).unwrap();
            }
            acc
        } else {
            // u^((q^deg - 1)/2) = (u^(1+q+...+q^(deg-1)))^((q-1)/2)
            let mut norm = Poly::one();
            let mut cur = u.rem(f, a).unwrap();
            for _ in 0..deg {
                norm = norm.mul(f, &cur).rem(f, a).unwrap();
                cur = powmod(f, &cur, q, a);
            }
            powmod(f, &norm, (q - 1) / 2, a).sub(f, &Poly::one())
        };
        let g = a.gcd(f, &w);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut out = equal_degree(f, &g, deg);
            out.extend(equal_degree(f, &a.div_exact(f, &g).unwrap(), deg));
            return out;
        }
    }
}

/// All roots of `a` in the field, by exhaustive search (fields up to 2^22 elements).
pub fn roots(f: &Gf, a: &Poly) -> Result<Vec<Fe>> {
    if f.size() > 1 << 22 {
        return Err(Error::Bound(format!("root search in {f:?}")));
    }
    Ok((0..f.size()).filter(|&x| a.eval(f, x) == 0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(f: &Gf, fs: &[(Poly, u32)]) -> Poly {
        fs.iter().fold(Poly::one(), |acc, (g, m)| acc.mul(f, &g.pow(f, *m as u64)))
    }

    #[test]
    fn factor_examples() {
        let f2 = Gf::new(2, 1).unwrap();
        let fs = factor(&f2, &Poly::new(vec![0, 1, 1])).unwrap();
        assert_eq!(fs, vec![(Poly::new(vec![0, 1]), 1), (Poly::new(vec![1, 1]), 1)]);

        let f3 = Gf::new(3, 1).unwrap();
        // T^2 + 2 = (T+1)(T+2)
        let fs = factor(&f3, &Poly::new(vec![2, 0, 1])).unwrap();
        assert_eq!(fs, vec![(Poly::new(vec![1, 1]), 1), (Poly::new(vec![2, 1]), 1)]);
        // T^2 + 1 irreducible
        let fs = factor(&f3, &Poly::new(vec![1, 0, 1])).unwrap();
        assert_eq!(fs, vec![(Poly::new(vec![1, 0, 1]), 1)]);
    }

    #[test]
    fn factor_with_multiplicity_and_pth_powers() {
        let f3 = Gf::new(3, 1).unwrap();
        // (T+1)^3 (T^2+1)^2 T
        let a = Poly::new(vec![1, 1])
            .pow(&f3, 3)
            .mul(&f3, &Poly::new(vec![1, 0, 1]).pow(&f3, 2))
            .mul(&f3, &Poly::t());
        let fs = factor(&f3, &a).unwrap();
        assert_eq!(product(&f3, &fs), a);
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn factor_over_extension_fields() {
        for (p, k) in [(2u32, 2u32), (3, 2), (2, 3)] {
            let f = Gf::new(p, k).unwrap();
            let q = f.size();
            for seed in 1..40u64 {
                let a = Poly::new((0..6).map(|i| (seed * 7 + i * 13 + i * i) % q).chain([1]).collect());
                let fs = factor(&f, &a).unwrap();
                assert_eq!(product(&f, &fs), a.monic(&f), "{p}^{k} seed {seed}");
                for (g, _) in &fs {
                    assert!(g.is_monic());
                    // no roots unless linear
                    if g.degree().unwrap() > 1 {
                        assert!(roots(&f, g).unwrap().is_empty());
                    }
                }
            }
        }
    }
}
