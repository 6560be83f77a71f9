//! The constant-field tower F_p ⊂ F_q ⊂ F_{q^d} with a fixed generator `h`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::gf::{Embedding, Fe, Gf};
use crate::error::{Error, Result};

/// Tower parameters: `q = p^e`, and the degree `d` of the constant extension.
/// `modulus` optionally fixes the F_p-modulus of F_{q^d}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerConfig {
    pub p: u32,
    pub e: u32,
    pub d: u32,
    #[serde(default)]
    pub modulus: Option<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct Tower {
    pub p: u32,
    pub e: u32,
    pub d: u32,
    pub fq: Arc<Gf>,
    pub fqd: Arc<Gf>,
    /// F_q ↪ F_{q^d}
    pub emb: Embedding,
    /// Primitive element of F_{q^d}.
    pub h: Fe,
    coords: Arc<Vec<Vec<Fe>>>,
}

impl Tower {
    pub fn new(cfg: &TowerConfig) -> Result<Tower> {
        if cfg.e == 0 || cfg.d == 0 {
            return Err(Error::Config("tower degrees must be positive".into()));
        }
        let fq = Gf::new(cfg.p, cfg.e)?;
        let fqd = match &cfg.modulus {
            Some(m) => {
                let f = Gf::with_modulus(cfg.p, m.clone())?;
                if f.degree() != cfg.e * cfg.d {
                    return Err(Error::Config("modulus degree must be e*d".into()));
                }
                f
            }
            None => Gf::new(cfg.p, cfg.e * cfg.d)?,
        };
        let h = fqd
            .generator()
            .ok_or_else(|| Error::Config(format!("{fqd:?} too large for the tower")))?;
        let emb = Embedding::new(&fq, &fqd)?;
        let q = fq.size();
        let mut coords = vec![Vec::new(); fqd.size() as usize];
        let hp: Vec<Fe> = (0..cfg.d as u64).map(|j| fqd.pow(h, j)).collect();
        for idx in 0..fqd.size() {
            let mut x = idx;
            let mut v = Vec::with_capacity(cfg.d as usize);
            let mut acc = 0;
            for &pw in &hp {
                let c = x % q;
                x /= q;
                v.push(c);
                acc = fqd.add(acc, fqd.mul(emb.apply(c), pw));
            }
            coords[acc as usize] = v;
        }
        Ok(Tower { p: cfg.p, e: cfg.e, d: cfg.d, fq, fqd, emb, h, coords: Arc::new(coords) })
    }

    pub fn from_pqd(p: u32, e: u32, d: u32) -> Result<Tower> {
        Tower::new(&TowerConfig { p, e, d, modulus: None })
    }

    pub fn config(&self) -> TowerConfig {
        TowerConfig { p: self.p, e: self.e, d: self.d, modulus: Some(self.fqd.modulus().to_vec()) }
    }

    pub fn q(&self) -> u64 {
        self.fq.size()
    }

    /// `x^(q^k)` on F_{q^d}.
    pub fn frobenius(&self, x: Fe, k: u64) -> Fe {
        self.fqd.frob_p(x, self.e as u64 * k)
    }

    /// F_q-coordinates of `x` in the basis `1, h, ..., h^(d-1)`.
    pub fn h_coords(&self, x: Fe) -> &[Fe] {
        &self.coords[x as usize]
    }
}

/// A degree-`m` extension of `base` together with the embedding.
pub fn extend(base: &Arc<Gf>, m: u32) -> Result<(Arc<Gf>, Embedding)> {
    let big = Gf::new(base.p(), base.degree() * m)?;
    let emb = Embedding::new(base, &big)?;
    Ok((big, emb))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_fixes_fq_and_has_order_d() {
        let t = Tower::from_pqd(3, 1, 2).unwrap();
        for x in 0..t.fqd.size() {
            assert_eq!(t.frobenius(t.frobenius(x, 1), 1), x);
        }
        for c in 0..t.q() {
            assert_eq!(t.frobenius(t.emb.apply(c), 1), t.emb.apply(c));
        }
        let fixed = (0..t.fqd.size()).filter(|&x| t.frobenius(x, 1) == x).count();
        assert_eq!(fixed as u64, t.q());
    }

    #[test]
    fn h_coordinates_roundtrip() {
        let t = Tower::from_pqd(2, 2, 2).unwrap();
        for x in 0..t.fqd.size() {
            let c = t.h_coords(x);
            let back = c.iter().enumerate().fold(0, |acc, (j, &a)| {
                t.fqd.add(acc, t.fqd.mul(t.emb.apply(a), t.fqd.pow(t.h, j as u64)))
            });
            assert_eq!(back, x);
        }
    }

    #[test]
    fn config_roundtrip() {
        let t = Tower::from_pqd(3, 1, 3).unwrap();
        let s = serde_json::to_string(&t.config()).unwrap();
        let c: TowerConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(Tower::new(&c).unwrap().fqd.modulus(), t.fqd.modulus());
    }
}
