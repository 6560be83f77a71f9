//! Dense linear algebra over a prime field F_p (`u32` entries in `[0, p)`).

use super::fp_poly::inv_mod;

/// Row echelon reduction over F_p in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<u32>], p: u32) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let p64 = p as u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p) as u64;
        for x in m[r].iter_mut() {
            *x = (*x as u64 * inv % p64) as u32;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c] as u64;
                for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x = ((*x as u64 + (p64 - y as u64) * f) % p64) as u32;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<u32>], p: u32) -> usize {
    let mut a = m.to_vec();
    rref(&mut a, p).len()
}

/// Basis of the right kernel `{x : m x = 0}`; `cols` is the number of unknowns.
pub fn kernel(m: &[Vec<u32>], cols: usize, p: u32) -> Vec<Vec<u32>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a, p);
    let mut is_pivot = vec![None; cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|&c| is_pivot[c].is_none()) {
        let mut v = vec![0u32; cols];
        v[free] = 1;
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = (p - a[r][free]) % p;
        }
        out.push(v);
    }
    out
}

/// A solution of `Σ x_j cols[j] = target`, if one exists.
pub fn solve(cols: &[Vec<u32>], target: &[u32], p: u32) -> Option<Vec<u32>> {
    let n = cols.len();
    let rows = target.len();
    let m: Vec<Vec<u32>> = (0..rows)
        .map(|r| cols.iter().map(|c| c[r]).chain([(p - target[r] % p) % p]).collect())
        .collect();
    let ker = kernel(&m, n + 1, p);
    let v = ker.iter().find(|v| v[n] != 0)?;
    let inv = inv_mod(v[n], p) as u64;
    Some(v[..n].iter().map(|&x| (x as u64 * inv % p as u64) as u32).collect())
}

/// Incremental basis for testing linear independence of vectors over F_p.
#[derive(Clone, Debug)]
pub struct Span {
    p: u32,
    rows: Vec<(usize, Vec<u32>)>,
}

impl Span {
    pub fn new(p: u32) -> Span {
        Span { p, rows: Vec::new() }
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p64 = self.p as u64;
        let mut v = v.to_vec();
        for (c, row) in &self.rows {
            let f = v[*c] as u64;
            if f != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = ((*x as u64 + (p64 - y as u64) * f) % p64) as u32;
                }
            }
        }
        v
    }
    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut r = self.reduce(v);
        let Some(c) = r.iter().position(|&x| x != 0) else { return false };
        let inv = inv_mod(r[c], self.p) as u64;
        for x in r.iter_mut() {
            *x = (*x as u64 * inv % self.p as u64) as u32;
        }
        let p64 = self.p as u64;
        for (_, row) in self.rows.iter_mut() {
            let f = row[c] as u64;
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(&r) {
                    *x = ((*x as u64 + (p64 - y as u64) * f) % p64) as u32;
                }
            }
        }
        self.rows.push((c, r));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_annihilated() {
        let p = 5;
        let m = vec![vec![1, 2, 3, 4], vec![2, 4, 1, 3], vec![3, 1, 4, 2]];
        let k = kernel(&m, 4, p);
        assert_eq!(k.len() + rank(&m, p), 4);
        for v in &k {
            for row in &m {
                let s: u32 = row.iter().zip(v).map(|(a, b)| a * b).sum::<u32>() % p;
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn solve_inhomogeneous() {
        let cols = vec![vec![1, 0, 1], vec![0, 1, 1]];
        assert_eq!(solve(&cols, &[2, 1, 0], 3), Some(vec![2, 1]));
        assert_eq!(solve(&cols, &[1, 1, 1], 3), None);
    }

    #[test]
    fn span_tracks_dimension() {
        let mut s = Span::new(3);
        assert!(s.insert(&[1, 2, 0]));
        assert!(s.insert(&[0, 1, 1]));
        assert!(!s.insert(&[1, 0, 1]));
        assert!(s.contains(&[2, 1, 0]));
        assert_eq!(s.dim(), 2);
    }
}
