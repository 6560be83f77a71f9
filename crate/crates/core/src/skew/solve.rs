//! F_p-linear systems over matrices of `L[τ]` with finite `L`.

use super::coeff::FiniteCoeff;
use super::matrix::SkewMat;
use super::poly::SkewPoly;
use crate::base::linalg;
use crate::base::Fe;

/// F_p-digits of all coefficients of `m` up to τ-degree `len - 1`.
pub fn vectorize(f: &FiniteCoeff, m: &SkewMat<Fe>, len: usize) -> Vec<u32> {
    let g = &f.field;
    let mut out = Vec::with_capacity(m.rows() * m.cols() * len * g.degree() as usize);
    for row in m.entries() {
        for x in row {
            for t in 0..len {
                out.extend(g.digits(x.coeff(f, t)));
            }
        }
    }
    out
}

/// Matrix with the single entry `c τ^t` at `(i, j)`.
pub fn unit_matrix(f: &FiniteCoeff, rows: usize, cols: usize, i: usize, j: usize, c: Fe, t: usize) -> SkewMat<Fe> {
    let mut m = SkewMat::zero(rows, cols);
    m.set(i, j, SkewPoly::monomial(f, c, t));
    m
}

/// F_p-basis of the rows x cols matrices with entries of τ-degree `< bound`, indexed
/// as `(i, j, t, digit)`.
pub fn coordinate_basis(f: &FiniteCoeff, rows: usize, cols: usize, bound: usize) -> Vec<SkewMat<Fe>> {
    let g = &f.field;
    let p = g.p() as u64;
    let mut out = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            for t in 0..bound {
                for b in 0..g.degree() {
                    out.push(unit_matrix(f, rows, cols, i, j, p.pow(b), t));
                }
            }
        }
    }
    out
}

/// Combine basis elements with F_p coefficients.
pub fn combine(f: &FiniteCoeff, basis: &[SkewMat<Fe>], coeffs: &[u32]) -> SkewMat<Fe> {
    let (r, c) = (basis[0].rows(), basis[0].cols());
    let mut acc = SkewMat::zero(r, c);
    for (m, &x) in basis.iter().zip(coeffs) {
        if x != 0 {
            acc = acc.add(f, &m.map_entries(|e| e.lscale(f, &(x as Fe))));
        }
    }
    acc
}

/// F_p-basis of `{u : deg u < bound, u·lhs_g = rhs_g·u for all g}` (d x d).
pub fn intertwiners(
    f: &FiniteCoeff,
    lhs: &[SkewMat<Fe>],
    rhs: &[SkewMat<Fe>],
    bound: usize,
) -> Vec<SkewMat<Fe>> {
    let d = lhs[0].rows();
    let basis = coordinate_basis(f, d, d, bound);
    let extra = lhs.iter().chain(rhs).filter_map(|m| m.degree()).max().unwrap_or(0);
    let len = bound + extra;
    let cols: Vec<Vec<u32>> = basis
        .iter()
        .map(|u| {
            lhs.iter()
                .zip(rhs)
                .flat_map(|(a, b)| vectorize(f, &u.mul(f, a).sub(f, &b.mul(f, u)), len))
                .collect()
        })
        .collect();
    let rows = cols.first().map_or(0, |c| c.len());
    let mat: Vec<Vec<u32>> = (0..rows).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let p = f.field.p();
    linalg::kernel(&mat, basis.len(), p).iter().map(|v| combine(f, &basis, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::Tower;

    #[test]
    fn centralizer_of_scalar_tau() {
        // over F_9 with q = 3, d = 1: the centralizer of τ^2 in degree < 2 is F_9 + F_9 τ
        let t = Tower::from_pqd(3, 1, 1).unwrap();
        let f = FiniteCoeff::over_tower(&t, 2).unwrap();
        let tau2 = SkewMat::scalar_diag(&f, &[SkewPoly::tau_pow(&f, 2)]);
        let sols = intertwiners(&f, &[tau2.clone()], &[tau2], 2);
        assert_eq!(sols.len(), 4);
        let tau1 = SkewMat::scalar_diag(&f, &[SkewPoly::tau_pow(&f, 1)]);
        // centralizer of τ in degree < 2: F_3 + F_3 τ
        assert_eq!(intertwiners(&f, &[tau1.clone()], &[tau1], 2).len(), 2);
    }
}
