//! Factorization of squarefree primitive integer polynomials (Zassenhaus).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::zp::{Zp, ZpPoly};

/// Dense integer polynomial, low degree first.
pub type ZPoly = Vec<BigInt>;

const PRIMES: [u64; 16] =
    [10007, 10009, 10037, 10039, 10061, 10067, 10069, 10079, 10091, 10093, 10099, 10103, 10111, 10133, 10139, 10141];

fn trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|x| x.is_zero()) {
        a.pop();
    }
    a
}

fn to_zp(f: &[BigInt], z: &Zp) -> ZpPoly {
    let p = BigInt::from(z.p);
    z.trim(f.iter().map(|c| c.mod_floor(&p).to_u64().unwrap()).collect())
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    trim(c)
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()).collect())
}

fn zadd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default()).collect())
}

fn reduce(a: &[BigInt], m: &BigInt) -> ZPoly {
    trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn from_zp(a: &[u64]) -> ZPoly {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

/// Exact division over Z, `None` if not exact.
pub fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return if trim(r).is_empty() { Some(Vec::new()) } else { None };
    }
    let lb = &b[db];
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (db..r.len()).rev() {
        if r[k].is_zero() {
            continue;
        }
        let (c, rem) = r[k].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, y) in b.iter().enumerate() {
            r[k - db + j] -= &c * y;
        }
        q[k - db] = c;
    }
    if r.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(trim(q))
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(a: &[BigInt]) -> ZPoly {
    let c = content(a);
    let sign = if a.last().is_some_and(|x| x.is_negative()) { -BigInt::one() } else { BigInt::one() };
    a.iter().map(|x| x / &c * &sign).collect()
}

/// Irreducible factors over Z of a squarefree primitive polynomial of
/// positive degree with positive leading coefficient.
pub fn factor_squarefree_z(f: &[BigInt]) -> Vec<ZPoly> {
    let f = trim(f.to_vec());
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let lc = f[n].clone();
    // choose the prime with the fewest modular factors among a few candidates
    let mut best: Option<(Zp, Vec<ZpPoly>)> = None;
    let mut tried = 0;
    for &p in PRIMES.iter() {
        let z = Zp::new(p);
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = z.monic(&to_zp(&f, &z));
        if fp.len() != n + 1 {
            continue;
        }
        if z.gcd(&fp, &z.derivative(&fp)).len() != 1 {
            continue;
        }
        let fs = z.factor_squarefree(&fp, &mut rng);
        if fs.len() == 1 {
            return vec![f];
        }
        if best.as_ref().is_none_or(|b| fs.len() < b.1.len()) {
            best = Some((z, fs));
        }
        tried += 1;
        if tried >= 3 {
            break;
        }
    }
    let (z, modular) = best.expect("no suitable prime for factorization");
    let bound = coefficient_bound(&f);
    let p = BigInt::from(z.p);
    let mut k = 1u32;
    let mut pk = p.clone();
    while pk <= &bound * 2 {
        pk *= &p;
        k += 1;
    }
    let lifted = multi_lift(&f, &modular, z, k);
    recombine(f, lifted, &pk)
}

/// Bound on coefficients of `lc * g` for any factor `g` of `f`.
fn coefficient_bound(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1;
    let lc = f[n].abs();
    (BigInt::one() << n) * norm * lc
}

/// Lifts monic modular factors of `lc^{-1} f` to precision `p^k`.
fn multi_lift(f: &[BigInt], factors: &[ZpPoly], z: Zp, k: u32) -> Vec<ZPoly> {
    let p = BigInt::from(z.p);
    let pk = p.pow(k);
    let lc = f.last().unwrap();
    let lcinv = lc.modinv(&pk).expect("leading coefficient not invertible");
    let monic: ZPoly = reduce(&f.iter().map(|c| c * &lcinv).collect::<Vec<_>>(), &pk);
    lift_rec(&monic, factors, z, k)
}

fn lift_rec(f: &[BigInt], factors: &[ZpPoly], z: Zp, k: u32) -> Vec<ZPoly> {
    if factors.len() == 1 {
        return vec![f.to_vec()];
    }
    let mid = factors.len() / 2;
    let g0 = factors[..mid].iter().fold(vec![1u64], |a, b| z.pmul(&a, b));
    let h0 = factors[mid..].iter().fold(vec![1u64], |a, b| z.pmul(&a, b));
    let (g, h) = hensel_two(f, &g0, &h0, z, k);
    let mut out = lift_rec(&g, &factors[..mid], z, k);
    out.extend(lift_rec(&h, &factors[mid..], z, k));
    out
}

/// Linear Hensel lifting of `f = g h mod p` (all monic) to `mod p^k`.
fn hensel_two(f: &[BigInt], g0: &[u64], h0: &[u64], z: Zp, k: u32) -> (ZPoly, ZPoly) {
    let p = BigInt::from(z.p);
    let (_, s, t) = z.ext_gcd(g0, h0);
    let mut g = from_zp(g0);
    let mut h = from_zp(h0);
    let mut pi = p.clone();
    for _ in 1..k {
        let m = &pi * &p;
        let err = reduce(&zsub(f, &zmul(&g, &h)), &m);
        // err is divisible by p^i
        let e: ZpPoly = to_zp(&err.iter().map(|c| c / &pi).collect::<Vec<_>>(), &z);
        let te = z.pmul(&t, &e);
        let (q, dg) = z.divrem(&te, g0);
        let dh = z.padd(&z.pmul(&s, &e), &z.pmul(&q, h0));
        g = reduce(&zadd(&g, &from_zp(&dg).iter().map(|c| c * &pi).collect::<Vec<_>>()), &m);
        h = reduce(&zadd(&h, &from_zp(&dh).iter().map(|c| c * &pi).collect::<Vec<_>>()), &m);
        pi = m;
    }
    (g, h)
}

fn recombine(mut f: ZPoly, mut lifted: Vec<ZPoly>, pk: &BigInt) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        for subset in subsets(lifted.len(), s) {
            let lc = f.last().unwrap().clone();
            let mut cand: ZPoly = vec![lc];
            for &i in &subset {
                cand = reduce(&zmul(&cand, &lifted[i]), pk);
            }
            let cand = primitive(&symmetric(&cand, pk));
            if let Some(q) = zdiv_exact(&f, &cand) {
                out.push(cand);
                f = q;
                let mut keep = Vec::new();
                for (i, l) in lifted.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(l);
                    }
                }
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if f.len() > 1 {
        out.push(primitive(&f));
    }
    out
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: &[i64]) -> ZPoly {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(f: &[BigInt], expected: usize) {
        let fs = factor_squarefree_z(f);
        assert_eq!(fs.len(), expected, "{:?}", fs);
        let prod = fs.iter().fold(z(&[1]), |a, b| zmul(&a, b));
        assert_eq!(primitive(&prod), primitive(f));
    }

    #[test]
    fn swinnerton_dyer_like() {
        // x^4 - 10x^2 + 1 is irreducible but splits mod every prime
        check(&z(&[1, 0, -10, 0, 1]), 1);
    }

    #[test]
    fn products() {
        let a = z(&[1, 0, 1]);
        let b = z(&[-2, 3]);
        let c = z(&[5, 0, 0, 7]);
        check(&zmul(&zmul(&a, &b), &c), 3);
        check(&zmul(&z(&[-1, 1]), &z(&[1, 1])), 2);
        check(&zmul(&z(&[-2, 0, 1]), &z(&[-3, 0, 1])), 2);
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
    }
}
