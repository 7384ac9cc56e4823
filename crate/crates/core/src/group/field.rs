use crate::error::{Error, Result};

/// Tabulated arithmetic of GF(q) for small prime powers q.
///
/// Elements are encoded as integers `0..q` whose base-p digits are the
/// coefficients of a polynomial modulo a fixed irreducible polynomial
/// (the lexicographically first monic one of degree k).
#[derive(Clone, Debug)]
pub struct SmallField {
    pub p: usize,
    pub k: usize,
    pub q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = q;
    let mut k = 0;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn digits(x: usize, p: usize, k: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(k);
    let mut x = x;
    for _ in 0..k {
        v.push(x % p);
        x /= p;
    }
    v
}

fn poly_rem(mut a: Vec<usize>, m: &[usize], p: usize) -> Vec<usize> {
    // m monic
    let dm = m.len() - 1;
    while a.len() > dm {
        let c = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p * p - c * mi % p) % p;
            }
        }
        a.pop();
    }
    a
}

fn is_irreducible(m: &[usize], p: usize) -> bool {
    let k = m.len() - 1;
    for d in 1..=k / 2 {
        for low in 0..p.pow(d as u32) {
            let mut f = digits(low, p, d);
            f.push(1);
            if poly_rem(m.to_vec(), &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl SmallField {
    pub fn new(q: usize) -> Result<Self> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::Unsupported(format!("{q} is not a prime power")))?;
        if q > 256 {
            return Err(Error::CapExceeded {
                what: "field size",
                cap: 256,
            });
        }
        let modulus = (0..p.pow(k as u32))
            .map(|low| {
                let mut m = digits(low, p, k);
                m.push(1);
                m
            })
            .find(|m| is_irreducible(m, p))
            .ok_or_else(|| Error::Defect(format!("no irreducible polynomial for q = {q}")))?;
        let encode = |v: &[usize]| v.iter().rev().fold(0, |acc, &c| acc * p + c);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&s);
                let mut prod = vec![0; 2 * k - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(prod, &modulus, p);
                r.resize(k, 0);
                mul[a * q + b] = encode(&r);
            }
        }
        Ok(SmallField { p, k, q, add, mul })
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn primitive_element(&self) -> usize {
        (1..self.q)
            .find(|&a| self.order(a) == self.q - 1)
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// The element whose digits are the unit vector in position i.
    pub fn basis_element(&self, i: usize) -> usize {
        self.p.pow(i as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for q in [2, 3, 4, 5, 8, 9, 16, 25, 27] {
            let f = SmallField::new(q).unwrap();
            for a in 1..q {
                assert!((1..q).any(|b| f.mul(a, b) == 1), "q={q} a={a} not invertible");
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
            assert_eq!(f.order(f.primitive_element()), q - 1);
        }
        assert!(SmallField::new(6).is_err());
    }
}
