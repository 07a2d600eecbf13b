//! Univariate polynomials over a small prime field `F_p` (p < 2^31).

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

pub type ZpPoly = Vec<u64>;

#[derive(Clone, Copy, Debug)]
pub struct Zp {
    pub p: u64,
}

impl Zp {
    pub fn new(p: u64) -> Self {
        Zp { p }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero mod p");
        self.pow(a, self.p - 2)
    }

    pub fn trim(&self, mut a: ZpPoly) -> ZpPoly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn padd(&self, a: &[u64], b: &[u64]) -> ZpPoly {
        let n = a.len().max(b.len());
        let v = (0..n).map(|i| self.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect();
        self.trim(v)
    }

    pub fn psub(&self, a: &[u64], b: &[u64]) -> ZpPoly {
        let n = a.len().max(b.len());
        let v = (0..n).map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect();
        self.trim(v)
    }

    pub fn pmul(&self, a: &[u64], b: &[u64]) -> ZpPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                c[i + j] = (c[i + j] + x * y) % self.p;
            }
        }
        self.trim(c)
    }

    pub fn scale(&self, a: &[u64], s: u64) -> ZpPoly {
        self.trim(a.iter().map(|&x| self.mul(x, s)).collect())
    }

    pub fn monic(&self, a: &[u64]) -> ZpPoly {
        match a.last() {
            None => Vec::new(),
            Some(&l) => self.scale(a, self.inv(l)),
        }
    }

    pub fn divrem(&self, a: &[u64], b: &[u64]) -> (ZpPoly, ZpPoly) {
        assert!(!b.is_empty(), "division by zero polynomial mod p");
        let db = b.len() - 1;
        let mut r = a.to_vec();
        if r.len() <= db {
            return (Vec::new(), self.trim(r));
        }
        let inv = self.inv(b[db]);
        let mut q = vec![0u64; r.len() - db];
        for k in (db..r.len()).rev() {
            let c = self.mul(r[k], inv);
            if c == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let idx = k - db + j;
                r[idx] = self.sub(r[idx], self.mul(c, y));
            }
            q[k - db] = c;
        }
        r.truncate(db);
        (self.trim(q), self.trim(r))
    }

    pub fn rem(&self, a: &[u64], b: &[u64]) -> ZpPoly {
        self.divrem(a, b).1
    }

    pub fn gcd(&self, a: &[u64], b: &[u64]) -> ZpPoly {
        let (mut x, mut y) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// `(g, s, t)` with `s a + t b = g` monic.
    pub fn ext_gcd(&self, a: &[u64], b: &[u64]) -> (ZpPoly, ZpPoly, ZpPoly) {
        let (mut r0, mut r1) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        let (mut s0, mut s1): (ZpPoly, ZpPoly) = (vec![1], Vec::new());
        let (mut t0, mut t1): (ZpPoly, ZpPoly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = self.psub(&s0, &self.pmul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = self.psub(&t0, &self.pmul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = self.inv(*r0.last().unwrap());
        (self.scale(&r0, inv), self.scale(&s0, inv), self.scale(&t0, inv))
    }

    pub fn derivative(&self, a: &[u64]) -> ZpPoly {
        self.trim(a.iter().enumerate().skip(1).map(|(k, &x)| self.mul(x, k as u64 % self.p)).collect())
    }

    /// `base^e mod m`.
    pub fn powmod(&self, base: &[u64], e: &BigUint, m: &[u64]) -> ZpPoly {
        let mut r: ZpPoly = vec![1];
        let mut b = self.rem(base, m);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                r = self.rem(&self.pmul(&r, &b), m);
            }
            if i + 1 < bits {
                b = self.rem(&self.pmul(&b, &b), m);
            }
        }
        r
    }

    /// Factors a monic squarefree polynomial into monic irreducibles.
    pub fn factor_squarefree<R: Rng>(&self, f: &[u64], rng: &mut R) -> Vec<ZpPoly> {
        let mut out = Vec::new();
        for (d, g) in self.ddf(f) {
            self.edf(&g, d, rng, &mut out);
        }
        out
    }

    /// Distinct-degree factorization: pairs `(d, product of degree-d factors)`.
    fn ddf(&self, f: &[u64]) -> Vec<(usize, ZpPoly)> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x: ZpPoly = vec![0, 1];
        let mut h = x.clone();
        let mut d = 0;
        while f.len() > 1 {
            d += 1;
            if 2 * d > f.len() - 1 {
                out.push((f.len() - 1, f.clone()));
                break;
            }
            h = self.powmod(&h, &BigUint::from(self.p), &f);
            let g = self.gcd(&f, &self.psub(&h, &x));
            if g.len() > 1 {
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((d, g));
            }
        }
        out
    }

    fn edf<R: Rng>(&self, f: &[u64], d: usize, rng: &mut R, out: &mut Vec<ZpPoly>) {
        let n = f.len() - 1;
        if n == d {
            out.push(self.monic(f));
            return;
        }
        let e = (BigUint::from(self.p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
        debug_assert!(!e.is_zero());
        loop {
            let a: ZpPoly = self.trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = self.psub(&self.powmod(&a, &e, f), &[1]);
            let g = self.gcd(f, &b);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.divrem(f, &g).0;
                self.edf(&g, d, rng, out);
                self.edf(&h, d, rng, out);
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factors_product_of_linears_and_quadratic() {
        let z = Zp::new(101);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // (x-1)(x-2)(x^2+2) mod 101
        let f = z.pmul(&z.pmul(&[100, 1], &[99, 1]), &[2, 0, 1]);
        let fs = z.factor_squarefree(&f, &mut rng);
        let prod = fs.iter().fold(vec![1u64], |acc, g| z.pmul(&acc, g));
        assert_eq!(prod, f);
        assert!(fs.len() >= 3);
    }

    #[test]
    fn ext_gcd_identity() {
        let z = Zp::new(7);
        let a = vec![1, 2, 1];
        let b = vec![3, 1];
        let (g, s, t) = z.ext_gcd(&a, &b);
        assert_eq!(z.padd(&z.pmul(&s, &a), &z.pmul(&t, &b)), g);
    }
}
