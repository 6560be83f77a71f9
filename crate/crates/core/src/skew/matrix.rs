//! Matrices over `L[τ]`: arithmetic, triangular and diagonal forms, units,
//! group-scheme orders of kernels.

use super::coeff::{inv_or_err, CoeffField};
use super::poly::SkewPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewMat<E> {
    rows: usize,
    cols: usize,
    e: Vec<Vec<SkewPoly<E>>>,
}

/// `U · S = H` with `H` upper triangular (row-staircase).
#[derive(Clone, Debug)]
pub struct Triangular<E> {
    pub h: SkewMat<E>,
    pub u: SkewMat<E>,
}

/// `U · S · V = diag(f_1, ..., f_n)`.
#[derive(Clone, Debug)]
pub struct DiagonalForm<E> {
    pub u: SkewMat<E>,
    pub v: SkewMat<E>,
    pub u_inv: SkewMat<E>,
    pub v_inv: SkewMat<E>,
    pub diag: Vec<SkewPoly<E>>,
}

impl<E: Clone + PartialEq> SkewMat<E> {
    pub fn from_rows(e: Vec<Vec<SkewPoly<E>>>) -> Self {
        let rows = e.len();
        let cols = e.first().map_or(0, |r| r.len());
        assert!(e.iter().all(|r| r.len() == cols), "ragged matrix");
        SkewMat { rows, cols, e }
    }
    pub fn zero(rows: usize, cols: usize) -> Self {
        SkewMat { rows, cols, e: vec![vec![SkewPoly::zero(); cols]; rows] }
    }
    pub fn identity<C: CoeffField<Elem = E>>(f: &C, n: usize) -> Self {
        Self::scalar_diag(f, &vec![SkewPoly::one(f); n])
    }
    pub fn scalar_diag<C: CoeffField<Elem = E>>(_f: &C, d: &[SkewPoly<E>]) -> Self {
        let mut m = Self::zero(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.e[i][i] = x.clone();
        }
        m
    }
    /// Matrix of constants.
    pub fn from_constants<C: CoeffField<Elem = E>>(f: &C, m: &[Vec<E>]) -> Self {
        Self::from_rows(
            m.iter().map(|r| r.iter().map(|x| SkewPoly::constant(f, x.clone())).collect()).collect(),
        )
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &SkewPoly<E> {
        &self.e[i][j]
    }
    pub fn set(&mut self, i: usize, j: usize, x: SkewPoly<E>) {
        self.e[i][j] = x;
    }
    pub fn entries(&self) -> &[Vec<SkewPoly<E>>] {
        &self.e
    }
    pub fn row(&self, i: usize) -> &[SkewPoly<E>] {
        &self.e[i]
    }
    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(|x| x.is_zero())
    }
    /// Maximal τ-degree of the entries (`None` for the zero matrix).
    pub fn degree(&self) -> Option<usize> {
        self.e.iter().flatten().filter_map(|x| x.degree()).max()
    }

    pub fn add<C: CoeffField<Elem = E>>(&self, f: &C, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(f, b))
    }
    pub fn sub<C: CoeffField<Elem = E>>(&self, f: &C, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(f, b))
    }
    fn zip(&self, o: &Self, g: impl Fn(&SkewPoly<E>, &SkewPoly<E>) -> SkewPoly<E>) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        SkewMat {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().zip(&o.e).map(|(a, b)| a.iter().zip(b).map(|(x, y)| g(x, y)).collect()).collect(),
        }
    }
    pub fn neg<C: CoeffField<Elem = E>>(&self, f: &C) -> Self {
        self.map_entries(|x| x.neg(f))
    }
    pub fn map_entries(&self, g: impl Fn(&SkewPoly<E>) -> SkewPoly<E>) -> Self {
        SkewMat { rows: self.rows, cols: self.cols, e: self.e.iter().map(|r| r.iter().map(&g).collect()).collect() }
    }

    pub fn mul<C: CoeffField<Elem = E>>(&self, f: &C, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut out = Self::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.e[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    if !o.e[k][j].is_zero() {
                        out.e[i][j] = out.e[i][j].add(f, &a.mul(f, &o.e[k][j]));
                    }
                }
            }
        }
        out
    }

    pub fn pow<C: CoeffField<Elem = E>>(&self, f: &C, mut n: u64) -> Self {
        let mut r = Self::identity(f, self.rows);
        let mut b = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                r = r.mul(f, &b);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul(f, &b);
            }
        }
        r
    }

    /// The constant-term matrix.
    pub fn partial<C: CoeffField<Elem = E>>(&self, f: &C) -> Vec<Vec<E>> {
        self.e.iter().map(|r| r.iter().map(|x| x.constant_term(f)).collect()).collect()
    }

    /// Entrywise coefficient map into another field.
    pub fn map<F: CoeffField>(&self, f: &F, g: impl Fn(&E) -> F::Elem) -> SkewMat<F::Elem> {
        SkewMat {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().map(|r| r.iter().map(|x| x.map(f, &g)).collect()).collect(),
        }
    }

    /// Apply a field automorphism to every coefficient.
    pub fn galois_act<C: CoeffField<Elem = E>>(&self, f: &C, sigma: impl Fn(&E) -> E) -> Self {
        self.map(f, sigma)
    }

    /// Row reduction to upper-staircase form using right division only, so it works
    /// over any coefficient field.
    pub fn triangular<C: CoeffField<Elem = E>>(&self, f: &C) -> Result<Triangular<E>> {
        let mut h = self.clone();
        let mut u = Self::identity(f, self.rows);
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            loop {
                let Some(pi) = (r..self.rows)
                    .filter(|&i| !h.e[i][c].is_zero())
                    .min_by_key(|&i| (h.e[i][c].degree(), i))
                else {
                    break;
                };
                h.e.swap(r, pi);
                u.e.swap(r, pi);
                let mut done = true;
                for i in r + 1..self.rows {
                    if h.e[i][c].is_zero() {
                        continue;
                    }
                    let (q, rem) = h.e[i][c].right_divmod(f, &h.e[r][c])?;
                    h.row_sub_mul(f, i, r, &q);
                    u.row_sub_mul(f, i, r, &q);
                    debug_assert!(h.e[i][c] == rem);
                    if !rem.is_zero() {
                        done = false;
                    }
                }
                if done {
                    r += 1;
                    break;
                }
            }
        }
        Ok(Triangular { h, u })
    }

    /// `row_i -= q · row_r`
    fn row_sub_mul<C: CoeffField<Elem = E>>(&mut self, f: &C, i: usize, r: usize, q: &SkewPoly<E>) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            if !self.e[r][j].is_zero() {
                let t = q.mul(f, &self.e[r][j]);
                self.e[i][j] = self.e[i][j].sub(f, &t);
            }
        }
    }
    /// `col_j -= col_t · q`
    fn col_sub_mul<C: CoeffField<Elem = E>>(&mut self, f: &C, j: usize, t: usize, q: &SkewPoly<E>) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            if !self.e[i][t].is_zero() {
                let x = self.e[i][t].mul(f, q);
                self.e[i][j] = self.e[i][j].sub(f, &x);
            }
        }
    }
    /// `col_t += col_i · q`
    fn col_add_mul<C: CoeffField<Elem = E>>(&mut self, f: &C, t: usize, i: usize, q: &SkewPoly<E>) {
        self.col_sub_mul(f, t, i, &q.neg(f));
    }
    /// `row_t += q · row_j`
    fn row_add_mul<C: CoeffField<Elem = E>>(&mut self, f: &C, t: usize, j: usize, q: &SkewPoly<E>) {
        self.row_sub_mul(f, t, j, &q.neg(f));
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in self.e.iter_mut() {
            r.swap(a, b);
        }
    }

    /// Diagonal entries of the triangular form of a square matrix.
    fn triangular_diag<C: CoeffField<Elem = E>>(&self, f: &C) -> Result<Vec<SkewPoly<E>>> {
        assert_eq!(self.rows, self.cols, "square matrix expected");
        let t = self.triangular(f)?;
        Ok((0..self.rows).map(|i| t.h.e[i][i].clone()).collect())
    }

    /// Exponent `k` with `#ker = q^k`.
    pub fn scheme_order_exp<C: CoeffField<Elem = E>>(&self, f: &C) -> Result<usize> {
        let d = self.triangular_diag(f)?;
        d.iter().map(|x| x.degree().ok_or(Error::InfiniteKernel)).sum()
    }
    pub fn scheme_order<C: CoeffField<Elem = E>>(&self, f: &C) -> Result<u128> {
        Ok((f.q() as u128).pow(self.scheme_order_exp(f)? as u32))
    }
    /// Exponent `k` with `#ker(geometric points) = q^k`.
    pub fn separable_rank_exp<C: CoeffField<Elem = E>>(&self, f: &C) -> Result<usize> {
        let d = self.triangular_diag(f)?;
        d.iter()
            .map(|x| match (x.degree(), x.valuation(f)) {
                (Some(n), Some(v)) => Ok(n - v),
                _ => Err(Error::InfiniteKernel),
            })
            .sum()
    }
    pub fn separable_rank<C: CoeffField<Elem = E>>(&self, f: &C) -> Result<u128> {
        Ok((f.q() as u128).pow(self.separable_rank_exp(f)? as u32))
    }

    /// Two-sided inverse, if the matrix is a unit.
    pub fn inverse<C: CoeffField<Elem = E>>(&self, f: &C) -> Result<Option<Self>> {
        if self.rows != self.cols {
            return Ok(None);
        }
        let n = self.rows;
        let Triangular { h, u } = self.triangular(f)?;
        if (0..n).any(|i| h.e[i][i].degree() != Some(0)) {
            return Ok(None);
        }
        // back substitution for H X = U
        let mut x: Vec<Vec<SkewPoly<E>>> = vec![Vec::new(); n];
        for i in (0..n).rev() {
            let mut rhs = u.e[i].clone();
            for j in i + 1..n {
                if h.e[i][j].is_zero() {
                    continue;
                }
                for k in 0..n {
                    rhs[k] = rhs[k].sub(f, &h.e[i][j].mul(f, &x[j][k]));
                }
            }
            let ci = inv_or_err(f, h.e[i][i].lead().unwrap())?;
            x[i] = rhs.iter().map(|y| y.lscale(f, &ci)).collect();
        }
        let inv = Self::from_rows(x);
        let id = Self::identity(f, n);
        if self.mul(f, &inv) != id || inv.mul(f, self) != id {
            return Err(Error::Invariant("computed inverse fails verification".into()));
        }
        Ok(Some(inv))
    }

    pub fn is_unit<C: CoeffField<Elem = E>>(&self, f: &C) -> Result<bool> {
        Ok(self.inverse(f)?.is_some())
    }

    /// Two-sided reduction to a diagonal matrix (perfect coefficient fields only).
    /// Pivots are least-degree entries, ties broken by (row, column).
    pub fn diagonal_form<C: CoeffField<Elem = E>>(&self, f: &C) -> Result<DiagonalForm<E>> {
        if !f.is_perfect() {
            return Err(Error::NotPerfect("diagonal form"));
        }
        let (n, m) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut u = Self::identity(f, n);
        let mut u_inv = Self::identity(f, n);
        let mut v = Self::identity(f, m);
        let mut v_inv = Self::identity(f, m);
        for t in 0..n.min(m) {
            loop {
                let mut best: Option<(usize, usize, usize)> = None;
                for i in t..n {
                    for j in t..m {
                        if let Some(dg) = a.e[i][j].degree() {
                            if best.map_or(true, |b| dg < b.0) {
                                best = Some((dg, i, j));
                            }
                        }
                    }
                }
                let Some((_, pi, pj)) = best else { break };
                if pi != t {
                    a.e.swap(t, pi);
                    u.e.swap(t, pi);
                    u_inv.swap_cols(t, pi);
                }
                if pj != t {
                    a.swap_cols(t, pj);
                    v.swap_cols(t, pj);
                    v_inv.e.swap(t, pj);
                }
                let mut clean = true;
                for i in t + 1..n {
                    if a.e[i][t].is_zero() {
                        continue;
                    }
                    let (q, r) = a.e[i][t].right_divmod(f, &a.e[t][t])?;
                    a.row_sub_mul(f, i, t, &q);
                    u.row_sub_mul(f, i, t, &q);
                    u_inv.col_add_mul(f, t, i, &q);
                    clean &= r.is_zero();
                }
                for j in t + 1..m {
                    if a.e[t][j].is_zero() {
                        continue;
                    }
                    let (q, r) = a.e[t][j].left_divmod(f, &a.e[t][t])?;
                    a.col_sub_mul(f, j, t, &q);
                    v.col_sub_mul(f, j, t, &q);
                    v_inv.row_add_mul(f, t, j, &q);
                    clean &= r.is_zero();
                }
                if clean {
                    break;
                }
            }
        }
        let diag = (0..n.min(m)).map(|i| a.e[i][i].clone()).collect();
        Ok(DiagonalForm { u, v, u_inv, v_inv, diag })
    }
}

impl<E: Clone + PartialEq> DiagonalForm<E> {
    pub fn diag_matrix<C: CoeffField<Elem = E>>(&self, f: &C) -> SkewMat<E> {
        SkewMat::scalar_diag(f, &self.diag)
    }
    /// Σ deg f_i; `None` if some f_i vanishes.
    pub fn total_degree(&self) -> Option<usize> {
        self.diag.iter().map(|x| x.degree()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::Tower;
    use crate::skew::coeff::FiniteCoeff;

    fn f9() -> FiniteCoeff {
        FiniteCoeff::over_tower(&Tower::from_pqd(3, 1, 2).unwrap(), 2).unwrap()
    }
    fn sp(f: &FiniteCoeff, c: &[u64]) -> SkewPoly<u64> {
        SkewPoly::from_coeffs(f, c.to_vec())
    }

    #[test]
    fn unipotent_inverse() {
        let f = f9();
        let s = SkewMat::from_rows(vec![vec![sp(&f, &[1]), sp(&f, &[0, 1])], vec![sp(&f, &[]), sp(&f, &[1])]]);
        let inv = s.inverse(&f).unwrap().unwrap();
        let neg_tau = sp(&f, &[0, f.neg(&1)]);
        assert_eq!(inv.get(0, 1), &neg_tau);
        let d = SkewMat::scalar_diag(&f, &[sp(&f, &[0, 1]), sp(&f, &[1])]);
        assert!(!d.is_unit(&f).unwrap());
    }

    #[test]
    fn orders_of_simple_matrices() {
        let f = f9();
        let a = SkewMat::scalar_diag(&f, &[sp(&f, &[1, 1]), sp(&f, &[1, 1])]);
        assert_eq!(a.scheme_order(&f).unwrap(), 9);
        assert_eq!(a.separable_rank(&f).unwrap(), 9);
        let t2 = SkewMat::scalar_diag(&f, &[sp(&f, &[0, 0, 1]), sp(&f, &[0, 0, 1])]);
        assert_eq!(t2.separable_rank(&f).unwrap(), 1);
        assert_eq!(t2.scheme_order(&f).unwrap(), 81);
        let z = SkewMat::scalar_diag(&f, &[sp(&f, &[1]), sp(&f, &[])]);
        assert_eq!(z.scheme_order(&f), Err(Error::InfiniteKernel));
    }

    #[test]
    fn diagonal_form_recomposes() {
        let f = f9();
        let s = SkewMat::from_rows(vec![
            vec![sp(&f, &[2, 0, 1]), sp(&f, &[1, 5])],
            vec![sp(&f, &[0, 3, 1]), sp(&f, &[7, 0, 0, 1])],
        ]);
        let df = s.diagonal_form(&f).unwrap();
        assert_eq!(df.u.mul(&f, &s).mul(&f, &df.v), df.diag_matrix(&f));
        assert_eq!(df.u_inv.mul(&f, &df.diag_matrix(&f)).mul(&f, &df.v_inv), s);
        assert_eq!(df.total_degree(), Some(s.scheme_order_exp(&f).unwrap()));
    }
}
