//! Arithmetic in `F_q`, `A = F_q[t]` and `k = F_q(t)`: polynomials, reduced
//! rational functions, principal fractional ideals and the Riemann–Roch
//! helpers for the place at infinity.
//!
//! `F_q` with `q = p^e` is realised as `F_p[x]/(f)` where `f` is the monic
//! irreducible of degree `e` whose coefficient vector, read as a base-`p`
//! integer, is smallest. Elements are encoded as integers `0..q` whose base-`p`
//! digits are the coefficients on `1, x, …, x^{e-1}`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use crate::chevalley::Coeff;
use crate::error::{invalid, precondition, Error, Result};

#[derive(Debug, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

pub type Fq = Arc<GaloisField>;

fn digits(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Polynomial product modulo `p` on raw coefficient vectors (low degree first).
fn raw_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn raw_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m is monic.
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - lead * c % p) % p;
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

impl GaloisField {
    pub fn new(q: u32) -> Result<Fq> {
        if !(2..=32).contains(&q) {
            return invalid(format!("field size {q} outside 2..=32"));
        }
        let p = (2..=q).find(|&d| q.is_multiple_of(d)).unwrap();
        let mut e = 0;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            e += 1;
        }
        if r != 1 || !is_prime(p) {
            return invalid(format!("{q} is not a prime power"));
        }
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            (0..p.pow(e))
                .map(|v| {
                    let mut c = digits(v, p, e);
                    c.push(1);
                    c
                })
                .find(|c| Self::raw_irreducible(c, p))
                .expect("irreducible polynomials exist in every degree")
        };
        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a, p, e), digits(b, p, e));
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s, p) as u8;
                let m = if e == 1 { vec![(a * b) % p] } else { raw_rem(&raw_mul(&da, &db, p), &modulus, p) };
                let mut m = m;
                m.resize(e as usize, 0);
                mul[(a * q + b) as usize] = undigits(&m, p) as u8;
            }
        }
        let neg: Vec<u8> = (0..q).map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap() as u8).collect();
        let inv: Vec<u8> = (0..q)
            .map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap() as u8 })
            .collect();
        Ok(Arc::new(GaloisField { p, e, q, modulus, add, mul, neg, inv }))
    }

    fn raw_irreducible(c: &[u32], p: u32) -> bool {
        let d = c.len() - 1;
        for dd in 1..=d / 2 {
            for v in 0..p.pow(dd as u32) {
                let mut f = digits(v, p, dd as u32);
                f.push(1);
                if raw_rem(c, &f, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Coefficients of the defining polynomial over `F_p`, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv[a as usize])
    }

    /// Image of an integer under `Z → F_p ⊆ F_q`.
    pub fn from_int(&self, n: i64) -> u8 {
        n.rem_euclid(self.p as i64) as u8
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q as u8
    }

    pub fn pow(&self, a: u8, k: u64) -> u8 {
        let mut r = 1u8;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }
}

/// A polynomial in one variable over `F_q`, coefficients low degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    f: Fq,
    c: Vec<u8>,
}

impl std::hash::Hash for GaloisField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.q.hash(state);
    }
}

impl Poly {
    pub fn new(f: &Fq, mut c: Vec<u8>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { f: f.clone(), c }
    }

    pub fn zero(f: &Fq) -> Poly {
        Poly { f: f.clone(), c: vec![] }
    }

    pub fn one(f: &Fq) -> Poly {
        Poly::constant(f, 1)
    }

    pub fn constant(f: &Fq, a: u8) -> Poly {
        Poly::new(f, vec![a])
    }

    pub fn t(f: &Fq) -> Poly {
        Poly::monomial(f, 1, 1)
    }

    pub fn monomial(f: &Fq, a: u8, k: usize) -> Poly {
        let mut c = vec![0; k + 1];
        c[k] = a;
        Poly::new(f, c)
    }

    /// Polynomial with integer coefficients read in `F_p`.
    pub fn from_ints(f: &Fq, c: &[i64]) -> Poly {
        Poly::new(f, c.iter().map(|&x| f.from_int(x)).collect())
    }

    pub fn field(&self) -> &Fq {
        &self.f
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u8 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `deg 0 = −1` for convenience in inequalities.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lead(&self) -> u8 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn scale(&self, a: u8) -> Poly {
        Poly::new(&self.f, self.c.iter().map(|&x| self.f.mul(x, a)).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.f.inv(self.lead()) {
            Some(i) => self.scale(i),
            None => self.clone(),
        }
    }

    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend(&self.c);
        Poly { f: self.f.clone(), c }
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return invalid("division by the zero polynomial");
        }
        let f = &self.f;
        let inv = f.inv(d.lead()).unwrap();
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        if r.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut qt = vec![0u8; r.len() - dd];
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let coef = f.mul(*r.last().unwrap(), inv);
            qt[k] = coef;
            for (i, &x) in d.c.iter().enumerate() {
                r[k + i] = f.sub(r[k + i], f.mul(coef, x));
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        Ok((Poly::new(f, qt), Poly::new(f, r)))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).expect("nonzero divisor").1
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.f);
        }
        (self * o).exact_div(&self.gcd(o)).monic()
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::one(&self.f);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    pub fn eval(&self, x: u8) -> u8 {
        self.c.iter().rev().fold(0, |acc, &c| self.f.add(self.f.mul(acc, x), c))
    }

    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        (1..=d / 2).all(|k| monic_polys(&self.f, k).all(|g| !g.divides(self)))
    }

    /// Factorisation of a nonzero polynomial into monic irreducibles, by trial
    /// division in increasing degree; returns the leading coefficient too.
    pub fn factor(&self) -> Result<(u8, Vec<(Poly, u32)>)> {
        if self.is_zero() {
            return invalid("cannot factor zero");
        }
        let lead = self.lead();
        let mut rest = self.monic();
        let mut out = Vec::new();
        let mut k = 1;
        while rest.deg() > 0 {
            if 2 * k > rest.deg() as usize {
                out.push((rest.clone(), 1));
                break;
            }
            for g in monic_polys(&self.f, k) {
                if rest.deg() < k as i64 {
                    break;
                }
                let mut e = 0;
                while g.divides(&rest) {
                    rest = rest.exact_div(&g);
                    e += 1;
                }
                if e > 0 {
                    out.push((g, e));
                }
            }
            k += 1;
        }
        out.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.c.cmp(&b.0.c)));
        Ok((lead, out))
    }
}

/// All monic polynomials of degree `k`, in increasing encoding order.
pub fn monic_polys(f: &Fq, k: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = f.q() as u64;
    (0..q.pow(k as u32)).map(move |mut v| {
        let mut c = Vec::with_capacity(k + 1);
        for _ in 0..k {
            c.push((v % q) as u8);
            v /= q;
        }
        c.push(1);
        Poly::new(f, c)
    })
}

/// All polynomials of degree `< k` (including zero).
pub fn polys_below(f: &Fq, k: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = f.q() as u64;
    (0..q.pow(k as u32)).map(move |mut v| {
        let mut c = Vec::with_capacity(k);
        for _ in 0..k {
            c.push((v % q) as u8);
            v /= q;
        }
        Poly::new(f, c)
    })
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(&self.f, (0..n).map(|i| self.f.add(self.coeff(i), o.coeff(i))).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(&self.f, (0..n).map(|i| self.f.sub(self.coeff(i), o.coeff(i))).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(&self.f, self.c.iter().map(|&x| self.f.neg(x)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.f);
        }
        let f = &self.f;
        let mut c = vec![0u8; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, c)
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &Poly, var: &str) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, &c) in p.c.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !first {
            write!(f, "+")?;
        }
        first = false;
        match (i, c) {
            (0, _) => write!(f, "{c}")?,
            (1, 1) => write!(f, "{var}")?,
            (1, _) => write!(f, "{c}*{var}")?,
            (_, 1) => write!(f, "{var}^{i}")?,
            _ => write!(f, "{c}*{var}^{i}")?,
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self, "t")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// A reduced fraction `num/den` with `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return invalid("zero denominator");
        }
        if num.is_zero() {
            return Ok(RatFunc::zero(num.field()));
        }
        let g = num.gcd(&den);
        let (n, d) = (num.exact_div(&g), den.exact_div(&g));
        let l = d.lead();
        let il = num.field().inv(l).unwrap();
        Ok(RatFunc { num: n.scale(il), den: d.scale(il) })
    }

    pub fn zero(f: &Fq) -> RatFunc {
        RatFunc { num: Poly::zero(f), den: Poly::one(f) }
    }

    pub fn one(f: &Fq) -> RatFunc {
        RatFunc::from_poly(Poly::one(f))
    }

    pub fn constant(f: &Fq, a: u8) -> RatFunc {
        RatFunc::from_poly(Poly::constant(f, a))
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let f = p.field().clone();
        RatFunc { num: p, den: Poly::one(&f) }
    }

    pub fn t(f: &Fq) -> RatFunc {
        RatFunc::from_poly(Poly::t(f))
    }

    /// `t^k` for any integer `k`.
    pub fn t_pow(f: &Fq, k: i64) -> RatFunc {
        if k >= 0 {
            RatFunc::from_poly(Poly::monomial(f, 1, k as usize))
        } else {
            RatFunc { num: Poly::one(f), den: Poly::monomial(f, 1, (-k) as usize) }
        }
    }

    pub fn field(&self) -> &Fq {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.deg() == 0
    }

    /// Valuation at infinity `deg den − deg num`; `None` for zero.
    pub fn val_inf(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.den.deg() - self.num.deg())
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return invalid("zero has no inverse");
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i64) -> Result<RatFunc> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut r = RatFunc::one(self.field());
        for _ in 0..k.unsigned_abs() {
            r = &r * &base;
        }
        Ok(r)
    }

    pub fn scale(&self, a: u8) -> RatFunc {
        RatFunc::new(self.num.scale(a), self.den.clone()).unwrap()
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone()).unwrap();
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).unwrap()
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.field());
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        self * &o.inv().expect("division by zero")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if s.contains('+') {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl Coeff for RatFunc {
    fn zero_like(&self) -> RatFunc {
        RatFunc::zero(self.field())
    }
    fn from_int_like(&self, n: i64) -> RatFunc {
        RatFunc::constant(self.field(), self.field().from_int(n))
    }
    fn add(&self, o: &RatFunc) -> RatFunc {
        self + o
    }
    fn mul(&self, o: &RatFunc) -> RatFunc {
        self * o
    }
    fn neg(&self) -> RatFunc {
        -self
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
}

/// A nonzero principal fractional ideal `g·A` of `A = F_q[t]`, stored with a
/// generator whose numerator and denominator are monic and coprime.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FracIdeal {
    gen: RatFunc,
}

impl FracIdeal {
    pub fn new(g: &RatFunc) -> Result<FracIdeal> {
        if g.is_zero() {
            return invalid("the zero ideal is not a fractional ideal");
        }
        let gen = RatFunc::new(g.num.monic(), g.den.clone())?;
        Ok(FracIdeal { gen })
    }

    pub fn from_poly(p: &Poly) -> Result<FracIdeal> {
        FracIdeal::new(&RatFunc::from_poly(p.clone()))
    }

    pub fn unit(f: &Fq) -> FracIdeal {
        FracIdeal { gen: RatFunc::one(f) }
    }

    /// `(t^k)`.
    pub fn t_pow(f: &Fq, k: i64) -> FracIdeal {
        FracIdeal { gen: RatFunc::t_pow(f, k) }
    }

    pub fn generator(&self) -> &RatFunc {
        &self.gen
    }

    pub fn field(&self) -> &Fq {
        self.gen.field()
    }

    /// `deg J = deg num − deg den` of the generator.
    pub fn degree(&self) -> i64 {
        self.gen.num.deg() - self.gen.den.deg()
    }

    pub fn is_integral(&self) -> bool {
        self.gen.is_polynomial()
    }

    pub fn contains(&self, x: &RatFunc) -> bool {
        x.is_zero() || (x / &self.gen).is_polynomial()
    }

    /// Is `self ⊆ other`?
    pub fn is_subset_of(&self, other: &FracIdeal) -> bool {
        other.contains(&self.gen)
    }

    /// Numerators over the common denominator `lcm(den)`.
    fn common(&self, o: &FracIdeal) -> (Poly, Poly, Poly) {
        let d = self.gen.den.lcm(&o.gen.den);
        let a = &self.gen.num * &d.exact_div(&self.gen.den);
        let b = &o.gen.num * &d.exact_div(&o.gen.den);
        (a, b, d)
    }

    pub fn sum(&self, o: &FracIdeal) -> FracIdeal {
        let (a, b, d) = self.common(o);
        FracIdeal::new(&RatFunc::new(a.gcd(&b), d).unwrap()).unwrap()
    }

    pub fn intersect(&self, o: &FracIdeal) -> FracIdeal {
        let (a, b, d) = self.common(o);
        FracIdeal::new(&RatFunc::new(a.lcm(&b), d).unwrap()).unwrap()
    }

    pub fn mul(&self, o: &FracIdeal) -> FracIdeal {
        FracIdeal { gen: &self.gen * &o.gen }
    }

    /// Multiplies by the principal ideal of a nonzero element.
    pub fn scale(&self, x: &RatFunc) -> Result<FracIdeal> {
        FracIdeal::new(&(&self.gen * x))
    }

    pub fn inverse(&self) -> FracIdeal {
        FracIdeal::new(&self.gen.inv().unwrap()).unwrap()
    }

    pub fn pow(&self, k: i64) -> FracIdeal {
        FracIdeal::new(&self.gen.pow(k).unwrap()).unwrap()
    }

    /// Irreducible factorisation `Π p_i^{a_i}` of the generator (`a_i ∈ Z`).
    pub fn factor(&self) -> Vec<(Poly, i64)> {
        let mut out: Vec<(Poly, i64)> = Vec::new();
        if let Ok((_, fs)) = self.gen.num.factor() {
            out.extend(fs.into_iter().map(|(p, e)| (p, e as i64)));
        }
        if let Ok((_, fs)) = self.gen.den.factor() {
            out.extend(fs.into_iter().map(|(p, e)| (p, -(e as i64))));
        }
        out
    }
}

impl fmt::Display for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.gen)
    }
}

impl fmt::Debug for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FracIdeal{self}")
    }
}

/// Riemann–Roch dimension `−deg J + m·d + 1 − g` of `J[m] = {x ∈ J : ν_∞(x) ≥ −m}`,
/// valid once `m·d ≥ deg J + 2g − 1`.
pub fn rr_dim(deg_j: i64, m: i64, genus: i64, d: i64) -> Result<i64> {
    if genus < 0 || d < 1 {
        return invalid("genus must be nonnegative and the degree positive");
    }
    if m * d < deg_j + 2 * genus - 1 {
        return precondition(format!(
            "m·d = {} below the Riemann–Roch threshold deg J + 2g − 1 = {}",
            m * d,
            deg_j + 2 * genus - 1
        ));
    }
    Ok(-deg_j + m * d + 1 - genus)
}

/// Basis `{g·t^i : 0 ≤ i ≤ m − deg J}` of `J[m]` for `A = F_q[t]`.
pub fn truncated_basis(j: &FracIdeal, m: i64) -> Vec<RatFunc> {
    let top = m - j.degree();
    (0..=top.max(-1))
        .map(|i| &j.gen * &RatFunc::t_pow(j.field(), i))
        .collect()
}

/// The largest ideal `q` with `z·q^n ⊆ J`, namely `Π p_i^{⌈a_i/n⌉}` where
/// `J·(z)⁻¹ = Π p_i^{a_i}`.
pub fn monomial_bound(j: &FracIdeal, z: &RatFunc, n: u32) -> Result<FracIdeal> {
    if n == 0 {
        return invalid("exponent must be positive");
    }
    let zi = FracIdeal::new(z)?;
    let quotient = j.mul(&zi.inverse());
    let f = j.field();
    let mut gen = RatFunc::one(f);
    for (p, a) in quotient.factor() {
        let e = a.div_euclid(n as i64) + i64::from(a.rem_euclid(n as i64) != 0);
        gen = &gen * &RatFunc::from_poly(p).pow(e)?;
    }
    FracIdeal::new(&gen)
}

/// Parses a rational function over `F_q` such as `t^2+1`, `-1/t`,
/// `(t+1)/t^2` or `2*t^3-t`. Coefficients are integers, read as field codes.
pub fn parse_ratfunc(f: &Fq, s: &str) -> Result<RatFunc> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (lhs, rhs) = match split_top_level(&s) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (&s[..], None),
    };
    let num = parse_poly(f, strip_parens(lhs))?;
    let den = match rhs {
        Some(r) => parse_poly(f, strip_parens(r))?,
        None => Poly::one(f),
    };
    RatFunc::new(num, den).map_err(|_| Error::Invalid(format!("zero denominator in {s:?}")))
}

fn split_top_level(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn strip_parens(s: &str) -> &str {
    if s.starts_with('(') && s.ends_with(')') {
        &s[1..s.len() - 1]
    } else {
        s
    }
}

/// Parses a polynomial in `t` with integer coefficients.
pub fn parse_poly(f: &Fq, s: &str) -> Result<Poly> {
    if s.is_empty() {
        return invalid("empty polynomial");
    }
    let mut out = Poly::zero(f);
    let mut term = String::new();
    let mut terms = Vec::new();
    for (i, c) in s.chars().enumerate() {
        if (c == '+' || c == '-') && i > 0 {
            terms.push(std::mem::take(&mut term));
        }
        term.push(c);
    }
    terms.push(term);
    for raw in terms {
        let (neg, body) = match raw.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, raw.strip_prefix('+').unwrap_or(&raw)),
        };
        let bad = || Error::Invalid(format!("cannot parse term {raw:?}"));
        let (coef, power) = match body.find('t') {
            None => (body.parse::<i64>().map_err(|_| bad())?, 0usize),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let c = if c.is_empty() { 1 } else { c.parse::<i64>().map_err(|_| bad())? };
                let rest = &body[pos + 1..];
                let k = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
                };
                (c, k)
            }
        };
        if coef < 0 || (f.degree() > 1 && coef >= f.q() as i64) {
            return Err(bad());
        }
        let a = if f.degree() == 1 { f.from_int(coef) } else { coef as u8 };
        let a = if neg { f.neg(a) } else { a };
        out = &out + &Poly::monomial(f, a, power);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(f: &Fq, s: &str) -> RatFunc {
        parse_ratfunc(f, s).unwrap()
    }

    #[test]
    fn field_axioms_small() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32] {
            let f = GaloisField::new(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
            }
        }
        for q in [0, 1, 6, 10, 12, 33, 64] {
            assert!(GaloisField::new(q).is_err(), "{q}");
        }
    }

    #[test]
    fn least_irreducible_moduli() {
        assert_eq!(GaloisField::new(4).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(GaloisField::new(8).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(GaloisField::new(9).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn valuations() {
        let f = GaloisField::new(3).unwrap();
        assert_eq!(RatFunc::t(&f).val_inf(), Some(-1));
        assert_eq!(rf(&f, "(t+1)/t^2").val_inf(), Some(1));
        assert_eq!(RatFunc::constant(&f, 2).val_inf(), Some(0));
        assert_eq!(RatFunc::zero(&f).val_inf(), None);
    }

    #[test]
    fn ideal_operations() {
        let f = GaloisField::new(2).unwrap();
        let j = |s: &str| FracIdeal::new(&rf(&f, s)).unwrap();
        assert_eq!(j("t").sum(&j("t^2")), j("t"));
        assert_eq!(j("t").intersect(&j("t+1")), j("t^2+t"));
        assert_eq!(j("1/t").mul(&j("t^2")), j("t"));
        assert_eq!(j("t^3").inverse(), j("1/t^3"));
        assert!(FracIdeal::new(&RatFunc::zero(&f)).is_err());
        assert_eq!(j("1/t").sum(&j("1/(t+1)")), j("1/(t^2+t)"));
    }

    #[test]
    fn rr_examples() {
        assert_eq!(rr_dim(0, 2, 0, 1).unwrap(), 3);
        assert_eq!(rr_dim(3, 3, 0, 1).unwrap(), 1);
        assert_eq!(rr_dim(0, 2, 1, 1).unwrap(), 2);
        assert!(rr_dim(5, 2, 0, 1).is_err());
    }

    #[test]
    fn truncated_basis_examples() {
        let f = GaloisField::new(3).unwrap();
        let a = FracIdeal::unit(&f);
        assert_eq!(truncated_basis(&a, 0), vec![RatFunc::one(&f)]);
        let t2 = FracIdeal::t_pow(&f, 2);
        assert_eq!(truncated_basis(&t2, 3), vec![rf(&f, "t^2"), rf(&f, "t^3")]);
        let ti = FracIdeal::t_pow(&f, -1);
        assert_eq!(truncated_basis(&ti, 0).len() as i64, rr_dim(-1, 0, 0, 1).unwrap());
    }

    #[test]
    fn monomial_bound_examples() {
        let f = GaloisField::new(2).unwrap();
        let one = RatFunc::one(&f);
        assert_eq!(monomial_bound(&FracIdeal::t_pow(&f, 2), &one, 2).unwrap(), FracIdeal::t_pow(&f, 1));
        assert_eq!(monomial_bound(&FracIdeal::t_pow(&f, -3), &one, 2).unwrap(), FracIdeal::t_pow(&f, -1));
    }

    #[test]
    fn factorisation_round_trip() {
        let f = GaloisField::new(3).unwrap();
        let p = Poly::from_ints(&f, &[2, 0, 1, 1, 0, 2, 1]);
        let (lead, fs) = p.factor().unwrap();
        let mut prod = Poly::constant(&f, lead);
        for (g, e) in &fs {
            assert!(g.is_irreducible());
            prod = &prod * &g.pow(*e);
        }
        assert_eq!(prod, p);
    }

    #[test]
    fn parsing() {
        let f = GaloisField::new(5).unwrap();
        assert_eq!(rf(&f, "-1/t"), &RatFunc::constant(&f, 4) * &RatFunc::t_pow(&f, -1));
        assert_eq!(rf(&f, "2*t^2+3t+1").num().coeffs(), &[1, 3, 2]);
        assert!(parse_ratfunc(&f, "t/0").is_err());
        assert!(parse_ratfunc(&f, "x+1").is_err());
    }
}
