//! Dense square matrices over `F_q(t)`.

use crate::error::{invalid, Result};
use crate::ffield::{parse_ratfunc, Fq, Poly, RatFunc};

pub type RatMat = Vec<Vec<RatFunc>>;

pub fn identity(f: &Fq, n: usize) -> RatMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { RatFunc::one(f) } else { RatFunc::zero(f) }).collect())
        .collect()
}

/// `I + y E_{ij}`.
pub fn elementary(f: &Fq, n: usize, i: usize, j: usize, y: &RatFunc) -> RatMat {
    let mut m = identity(f, n);
    m[i][j] = &m[i][j] + y;
    m
}

pub fn mul(a: &RatMat, b: &RatMat) -> RatMat {
    let f = a[0][0].field().clone();
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = RatFunc::zero(&f);
                    for k in 0..b.len() {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            s = &s + &(&a[i][k] * &b[k][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn scale(a: &RatMat, y: &RatFunc) -> RatMat {
    a.iter().map(|r| r.iter().map(|x| x * y).collect()).collect()
}

pub fn add(a: &RatMat, b: &RatMat) -> RatMat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

/// Inverse by Gauss–Jordan elimination; `None` when singular.
pub fn inverse(a: &RatMat) -> Option<RatMat> {
    let n = a.len();
    let f = a[0][0].field().clone();
    let mut m: Vec<Vec<RatFunc>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { RatFunc::one(&f) } else { RatFunc::zero(&f) }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].inv().ok()?;
        m[c] = m[c].iter().map(|x| x * &inv).collect();
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let factor = m[r][c].clone();
                let pivot = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x = &*x - &(&factor * y);
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det(a: &RatMat) -> RatFunc {
    let n = a.len();
    let f = a[0][0].field().clone();
    let mut m = a.clone();
    let mut d = RatFunc::one(&f);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return RatFunc::zero(&f);
        };
        if p != c {
            m.swap(c, p);
            d = -&d;
        }
        d = &d * &m[c][c];
        let inv = m[c][c].inv().unwrap();
        for r in c + 1..n {
            if !m[r][c].is_zero() {
                let factor = &m[r][c] * &inv;
                let pivot = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x = &*x - &(&factor * y);
                }
            }
        }
    }
    d
}

/// All entries lie in `A = F_q[t]`.
pub fn is_integral(a: &RatMat) -> bool {
    a.iter().all(|r| r.iter().all(RatFunc::is_polynomial))
}

pub fn is_identity(a: &RatMat) -> bool {
    a.iter().enumerate().all(|(i, r)| {
        r.iter().enumerate().all(|(j, x)| if i == j { x.num() == x.den() } else { x.is_zero() })
    })
}

/// Parses rows of rational-function strings.
pub fn parse(f: &Fq, rows: &[Vec<String>]) -> Result<RatMat> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return invalid("matrix must be square and nonempty");
    }
    rows.iter().map(|r| r.iter().map(|s| parse_ratfunc(f, s)).collect()).collect()
}

pub fn to_strings(a: &RatMat) -> Vec<Vec<String>> {
    a.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

/// `Σ_{k=lo}^{hi} c_k t^k` as a rational function.
pub fn laurent(f: &Fq, lo: i64, coeffs: &[u8]) -> RatFunc {
    let num = Poly::new(f, coeffs.to_vec());
    if num.is_zero() {
        return RatFunc::zero(f);
    }
    &RatFunc::from_poly(num) * &RatFunc::t_pow(f, lo)
}

/// The `t`-adic order of a nonzero rational function.
pub fn ord_t(x: &RatFunc) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let ord = |p: &Poly| p.coeffs().iter().position(|&c| c != 0).unwrap() as i64;
    Some(ord(x.num()) - ord(x.den()))
}

/// Whether `x` is a Laurent polynomial with support in `[lo, hi]`.
pub fn in_window(x: &RatFunc, lo: i64, hi: i64) -> bool {
    if x.is_zero() {
        return true;
    }
    let d = x.den();
    let monomial_den = d.coeffs().iter().filter(|&&c| c != 0).count() == 1;
    monomial_den && ord_t(x).unwrap() >= lo && -x.val_inf().unwrap() <= hi
}
