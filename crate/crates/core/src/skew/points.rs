//! Geometric kernel points of matrices over `L[τ]` for finite `L`.

use super::coeff::FiniteCoeff;
use super::matrix::SkewMat;
use super::poly::SkewPoly;
use crate::base::linalg;
use crate::base::{Embedding, Fe, Gf};
use crate::error::{Error, Result};

/// The kernel of `S` over an extension `M ⊇ L` in which all geometric points are rational.
#[derive(Clone, Debug)]
pub struct KernelPoints {
    pub ext: FiniteCoeff,
    /// L ↪ M
    pub emb: Embedding,
    /// [M : L]
    pub degree: u32,
    /// F_p-basis of the kernel.
    pub basis: Vec<Vec<Fe>>,
    /// All points, sorted by encoding.
    pub points: Vec<Vec<Fe>>,
}

/// `Σ a_k y^(q^k)` with the coefficients pushed into `m` by `emb`.
pub fn eval_poly(m: &Gf, e: u32, emb: &Embedding, a: &SkewPoly<Fe>, y: Fe) -> Fe {
    let mut acc = 0;
    let mut cur = y;
    for (k, c) in a.coeffs().iter().enumerate() {
        if k > 0 {
            cur = m.frob_p(cur, e as u64);
        }
        if *c != 0 {
            acc = m.add(acc, m.mul(emb.apply(*c), cur));
        }
    }
    acc
}

/// Apply `S` to a column vector of points of `M`.
pub fn apply(m: &Gf, e: u32, emb: &Embedding, s: &SkewMat<Fe>, x: &[Fe]) -> Vec<Fe> {
    (0..s.rows())
        .map(|i| {
            (0..s.cols()).fold(0, |acc, j| m.add(acc, eval_poly(m, e, emb, s.get(i, j), x[j])))
        })
        .collect()
}

/// The F_p-linear kernel of `S` on `M^n`.
pub fn kernel_basis(m: &FiniteCoeff, emb: &Embedding, s: &SkewMat<Fe>) -> Vec<Vec<Fe>> {
    let g = &m.field;
    let k = g.degree() as usize;
    let n = s.cols();
    let p = g.p();
    let mut cols: Vec<Vec<u32>> = Vec::with_capacity(n * k);
    for j in 0..n {
        for b in 0..k {
            let mut x = vec![0; n];
            x[j] = (p as u64).pow(b as u32);
            let y = apply(g, m.e, emb, s, &x);
            cols.push(y.iter().flat_map(|&v| g.digits(v)).collect());
        }
    }
    let rows = s.rows() * k;
    let mat: Vec<Vec<u32>> = (0..rows).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    linalg::kernel(&mat, n * k, p)
        .into_iter()
        .map(|v| (0..n).map(|j| g.from_digits(&v[j * k..(j + 1) * k])).collect())
        .collect()
}

/// All F_p-combinations of `basis`, sorted.
pub fn span_points(g: &Gf, basis: &[Vec<Fe>], n: usize, cap: u64) -> Result<Vec<Vec<Fe>>> {
    let p = g.p() as u64;
    let count = p
        .checked_pow(basis.len() as u32)
        .filter(|&c| c <= cap)
        .ok_or_else(|| Error::Bound(format!("{} kernel points exceed cap {cap}", p.pow(basis.len().min(40) as u32))))?;
    let mut out = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let mut x = vec![0; n];
        let mut t = idx;
        for b in basis {
            let c = t % p;
            t /= p;
            if c != 0 {
                for (xi, &bi) in x.iter_mut().zip(b) {
                    *xi = g.add(*xi, g.mul(c, bi));
                }
            }
        }
        out.push(x);
    }
    out.sort();
    Ok(out)
}

/// Enumerate the geometric kernel of `S`, extending `L` by degrees `1..=max_ext`
/// until the point count reaches the separable rank.
pub fn kernel_points(f: &FiniteCoeff, s: &SkewMat<Fe>, max_ext: u32, cap: u64) -> Result<KernelPoints> {
    let target = s.separable_rank_exp(f)? * f.e as usize;
    for k in 1..=max_ext {
        let (ext, emb) = f.extend(k)?;
        let basis = kernel_basis(&ext, &emb, s);
        if basis.len() > target {
            return Err(Error::Invariant("kernel larger than separable rank".into()));
        }
        if basis.len() == target {
            let points = span_points(&ext.field, &basis, s.cols(), cap)?;
            return Ok(KernelPoints { ext, emb, degree: k, basis, points });
        }
    }
    Err(Error::Bound(format!("kernel not split within extension degree {max_ext}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skew::coeff::CoeffField;
    use crate::base::Tower;

    #[test]
    fn kernel_of_tau_minus_one_is_fq() {
        let t = Tower::from_pqd(3, 1, 2).unwrap();
        let f = FiniteCoeff::over_tower(&t, 2).unwrap();
        let m1 = SkewPoly::from_coeffs(&f, vec![f.neg(&1), 1]);
        let s = SkewMat::scalar_diag(&f, &[m1.clone(), m1]);
        let kp = kernel_points(&f, &s, 4, 1 << 20).unwrap();
        assert_eq!(kp.points.len(), 9);
        assert_eq!(kp.degree, 1);
        let id = SkewMat::identity(&f, 2);
        assert_eq!(kernel_points(&f, &id, 2, 10).unwrap().points, vec![vec![0, 0]]);
    }

    #[test]
    fn splitting_extension_found() {
        // τ^2 - g over F_9 with q = 3: roots need an extension
        let t = Tower::from_pqd(3, 1, 2).unwrap();
        let f = FiniteCoeff::over_tower(&t, 2).unwrap();
        let g = f.field.generator().unwrap();
        let s = SkewMat::scalar_diag(&f, &[SkewPoly::from_coeffs(&f, vec![f.neg(&g), 0, 1])]);
        let kp = kernel_points(&f, &s, 12, 1 << 20).unwrap();
        assert_eq!(kp.points.len(), 9);
        for x in &kp.points {
            assert_eq!(apply(&kp.ext.field, 1, &kp.emb, &s, x), vec![0]);
        }
    }
}
