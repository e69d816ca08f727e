//! Sparse multivariate polynomials with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Vec<u32>, i64>,
}

fn trim(e: &[u32]) -> Vec<u32> {
    let mut v = e.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly::default()
    }

    pub fn constant(c: i64) -> MPoly {
        let mut p = MPoly::zero();
        if c != 0 {
            p.terms.insert(vec![], c);
        }
        p
    }

    /// The variable `X_i` (0-based).
    pub fn var(i: usize) -> MPoly {
        MPoly::monomial(1, &[(i, 1)])
    }

    pub fn monomial(c: i64, powers: &[(usize, u32)]) -> MPoly {
        let mut e = vec![0u32; powers.iter().map(|p| p.0 + 1).max().unwrap_or(0)];
        for &(i, k) in powers {
            e[i] += k;
        }
        let mut p = MPoly::zero();
        if c != 0 {
            p.terms.insert(trim(&e), c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &i64)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> i64 {
        self.terms.get(&vec![]).copied().unwrap_or(0)
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut t = self.terms.clone();
        for (e, &c) in &o.terms {
            let v = t.entry(e.clone()).or_insert(0);
            *v += c;
            if *v == 0 {
                t.remove(e);
            }
        }
        MPoly { terms: t }
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(e, &c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: i64) -> MPoly {
        if k == 0 {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(e, &c)| (e.clone(), c * k)).collect() }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut t: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &o.terms {
                let n = e1.len().max(e2.len());
                let e: Vec<u32> = (0..n)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                *t.entry(trim(&e)).or_insert(0) += c1 * c2;
            }
        }
        t.retain(|_, c| *c != 0);
        MPoly { terms: t }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut r = MPoly::constant(1);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Whether the variable `X_i` occurs with exponent `k` in some term.
    pub fn has_power(&self, i: usize, k: u32) -> bool {
        self.terms.keys().any(|e| e.get(i).copied().unwrap_or(0) == k)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e.get(i).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    /// Evaluates with coefficients reduced modulo `p`.
    pub fn eval_mod(&self, x: &[u64], p: u64) -> u64 {
        let mut s = 0u64;
        for (e, &c) in &self.terms {
            let mut m = c.rem_euclid(p as i64) as u64;
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    m = m * x[i] % p;
                }
            }
            s = (s + m) % p;
        }
        s
    }

    pub fn eval_int(&self, x: &[i64]) -> i64 {
        self.terms
            .iter()
            .map(|(e, &c)| c * e.iter().enumerate().map(|(i, &k)| x[i].pow(k)).product::<i64>())
            .sum()
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("X{}", i + 1) } else { format!("X{}^{}", i + 1, k) })
                .collect();
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let body = match (mono.is_empty(), mag) {
                (true, _) => mag.to_string(),
                (false, 1) => mono.join("*"),
                (false, _) => format!("{mag}*{}", mono.join("*")),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let x = MPoly::var(0);
        let y = MPoly::var(1);
        let p = x.add(&y).pow(2);
        assert_eq!(p.eval_int(&[2, 3]), 25);
        assert!(p.add(&p.neg()).is_zero());
        assert_eq!(format!("{}", x.scale(-2).add(&MPoly::constant(1))), "1-2*X1");
    }
}
