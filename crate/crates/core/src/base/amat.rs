//! Matrices over a polynomial ring `F[T]`: fraction-free determinant, Smith and
//! Hermite forms.

use super::gf::Gf;
use super::poly::Poly;

pub type PolyMat = Vec<Vec<Poly>>;

/// Determinant by Bareiss elimination (exact, no fractions).
pub fn det(f: &Gf, m: &PolyMat) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut a = m.clone();
    let mut sign_neg = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return Poly::zero() };
            a.swap(k, s);
            sign_neg = !sign_neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(f, &a[k][k]).sub(f, &a[i][k].mul(f, &a[k][j]));
                a[i][j] = v.div_exact(f, &prev).expect("Bareiss division is exact");
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_neg {
        d.neg(f)
    } else {
        d
    }
}

fn min_entry(a: &PolyMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, e) in row.iter().enumerate().skip(t) {
            if let Some(dg) = e.degree() {
                if best.map_or(true, |b| dg < b.0) {
                    best = Some((dg, i, j));
                }
            }
        }
    }
    best.map(|b| (b.1, b.2))
}

/// Invariant factors (monic, each dividing the next) of an arbitrary rectangular matrix;
/// zero factors are omitted, so the length is the rank.
pub fn smith_diagonal(f: &Gf, m: &PolyMat) -> Vec<Poly> {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_entry(&a, t) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].divrem(f, &a[t][t]).unwrap().0;
                    for j in t..cols {
                        let v = a[i][j].sub(f, &q.mul(f, &a[t][j]));
                        a[i][j] = v;
                    }
                    if !a[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].divrem(f, &a[t][t]).unwrap().0;
                    for i in t..rows {
                        let v = a[i][j].sub(f, &a[i][t].mul(f, &q));
                        a[i][j] = v;
                    }
                    if !a[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                // divisibility: fold a row with an offending entry into row t
                let bad = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !a[i][j].rem(f, &a[t][t]).unwrap().is_zero())
                });
                match bad {
                    Some(i) => {
                        for j in t..cols {
                            let v = a[t][j].add(f, &a[i][j]);
                            a[t][j] = v;
                        }
                    }
                    None => break,
                }
            }
            if let Some((pi, pj)) = min_entry(&a, t) {
                if a[pi][pj].degree() < a[t][t].degree() {
                    a.swap(t, pi);
                    for row in a.iter_mut() {
                        row.swap(t, pj);
                    }
                }
            }
        }
        out.push(a[t][t].monic(f));
        t += 1;
    }
    out
}

/// Row Hermite form: the nonzero rows of an upper-staircase basis of the row span,
/// with monic pivots and entries above each pivot reduced modulo it.
pub fn hermite_rows(f: &Gf, m: &PolyMat) -> PolyMat {
    let mut a: PolyMat = m.iter().filter(|r| r.iter().any(|e| !e.is_zero())).cloned().collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        loop {
            let Some(pi) = (r..a.len())
                .filter(|&i| !a[i][c].is_zero())
                .min_by_key(|&i| a[i][c].degree())
            else {
                break;
            };
            a.swap(r, pi);
            let mut done = true;
            for i in r + 1..a.len() {
                if !a[i][c].is_zero() {
                    let q = a[i][c].divrem(f, &a[r][c]).unwrap().0;
                    for j in c..cols {
                        let v = a[i][j].sub(f, &q.mul(f, &a[r][j]));
                        a[i][j] = v;
                    }
                    if !a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                let li = f.inv(a[r][c].lead()).unwrap();
                for e in a[r].iter_mut() {
                    *e = e.scale(f, li);
                }
                for i in 0..r {
                    let q = a[i][c].divrem(f, &a[r][c]).unwrap().0;
                    if !q.is_zero() {
                        for j in c..cols {
                            let v = a[i][j].sub(f, &q.mul(f, &a[r][j]));
                            a[i][j] = v;
                        }
                    }
                }
                r += 1;
                break;
            }
        }
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    a
}

/// Coefficients expressing `v` in the rows of a Hermite form, if `v` lies in their span.
pub fn member(f: &Gf, h: &PolyMat, v: &[Poly]) -> Option<Vec<Poly>> {
    let mut v = v.to_vec();
    let mut coef = Vec::with_capacity(h.len());
    for row in h {
        let c = row.iter().position(|x| !x.is_zero())?;
        let (q, r) = v[c].divrem(f, &row[c]).ok()?;
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (x, y) in v.iter_mut().zip(row) {
                *x = x.sub(f, &q.mul(f, y));
            }
        }
        coef.push(q);
    }
    v.iter().all(|x| x.is_zero()).then_some(coef)
}
