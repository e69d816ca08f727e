//! Points, enclosures and sector faces in the standard apartment.
//!
//! Points are rational vectors on the fundamental coweights `ϖ_1, …, ϖ_n`, so
//! the simple root `α_i` reads off coordinate `i` and special vertices are the
//! integer points.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{invalid, precondition, Error, Result};
use crate::linalg::{self, Q};
use crate::rootsys::{RootSystem, WeylWord};

fn check_dim(rs: &RootSystem, x: &[Q]) -> Result<()> {
    if x.len() != rs.rank() {
        return invalid(format!("point has {} coordinates, expected {}", x.len(), rs.rank()));
    }
    Ok(())
}

/// An intersection of half-apartments `{α ≥ r_α}`; `None` means no
/// constraint for that root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnclosedRegion {
    pub thresholds: Vec<Option<i64>>,
}

/// `cl(Ω)` for a finite nonempty set of points: `r_α = ⌊min_{x∈Ω} α(x)⌋`.
pub fn enclosure(rs: &RootSystem, points: &[Vec<Q>]) -> Result<EnclosedRegion> {
    if points.is_empty() {
        return invalid("enclosure of the empty set");
    }
    for x in points {
        check_dim(rs, x)?;
    }
    let thresholds = (0..rs.num_roots())
        .map(|a| {
            let m = points.iter().map(|x| rs.eval(a, x)).min().unwrap();
            Some(linalg::floor_q(m))
        })
        .collect();
    Ok(EnclosedRegion { thresholds })
}

impl EnclosedRegion {
    pub fn contains(&self, rs: &RootSystem, x: &[Q]) -> bool {
        self.thresholds
            .iter()
            .enumerate()
            .all(|(a, r)| r.is_none_or(|r| rs.eval(a, x) >= linalg::q(r)))
    }

    /// Bounded when every root is constrained.
    pub fn is_bounded(&self) -> bool {
        self.thresholds.iter().all(Option::is_some)
    }

    /// Vertices of a bounded region (rank at most 4).
    pub fn vertices(&self, rs: &RootSystem) -> Result<Vec<Vec<Q>>> {
        if !self.is_bounded() {
            return precondition("vertices requested for an unbounded region");
        }
        let (m, b): (Vec<Vec<i64>>, Vec<i64>) = self
            .thresholds
            .iter()
            .enumerate()
            .map(|(a, r)| (rs.root(a).iter().map(|&c| -(c as i64)).collect(), -r.unwrap()))
            .unzip();
        polytope_vertices(&m, &b)
    }

    /// Sufficient test for `self ⊆ Q(tip, D^Θ)`: the constraints of the region
    /// pin every `α ∈ Θ` to `α(tip)` and force `β > β(tip)` for the other
    /// simple roots.
    pub fn inside_sector_face(&self, rs: &RootSystem, face: &SectorFace) -> bool {
        (0..rs.rank()).all(|i| {
            let a = rs.simple(i);
            let lo = self.thresholds[a].map(linalg::q);
            let hi = self.thresholds[rs.negate(a)].map(|r| -linalg::q(r));
            if face.theta.contains(&i) {
                lo == Some(face.tip[i]) && hi == Some(face.tip[i])
            } else {
                lo.is_some_and(|l| l > face.tip[i])
            }
        })
    }
}

/// Roots taking integer values at `x`.
pub fn local_roots(rs: &RootSystem, x: &[Q]) -> Result<Vec<usize>> {
    check_dim(rs, x)?;
    Ok((0..rs.num_roots()).filter(|&a| rs.eval(a, x).is_integer()).collect())
}

pub fn is_special(x: &[Q]) -> bool {
    x.iter().all(|c| c.is_integer())
}

/// Position of a root relative to Θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaClass {
    /// In `Φ_Θ^+`: positive with a nonzero coordinate off Θ.
    Positive,
    /// In `Φ_Θ^0`: supported on Θ.
    Zero,
    /// In `Φ_Θ^-`.
    Negative,
}

pub fn theta_class(rs: &RootSystem, theta: &[usize], a: usize) -> ThetaClass {
    let r = rs.root(a);
    if (0..rs.rank()).all(|k| theta.contains(&k) || r[k] == 0) {
        ThetaClass::Zero
    } else if rs.is_positive(a) {
        ThetaClass::Positive
    } else {
        ThetaClass::Negative
    }
}

/// The sector face `Q(tip, D_0^Θ) = {z : α(z − tip) = 0 for α ∈ Θ,
/// β(z − tip) > 0 for β ∈ Δ ∖ Θ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorFace {
    pub tip: Vec<Q>,
    pub theta: Vec<usize>,
}

impl SectorFace {
    pub fn new(rs: &RootSystem, tip: Vec<Q>, theta: Vec<usize>) -> Result<SectorFace> {
        check_dim(rs, &tip)?;
        if theta.iter().any(|&t| t >= rs.rank()) {
            return invalid("Θ contains an index outside the simple roots");
        }
        Ok(SectorFace { tip, theta })
    }

    pub fn contains(&self, z: &[Q]) -> bool {
        (0..self.tip.len()).all(|i| {
            let d = z[i] - self.tip[i];
            if self.theta.contains(&i) {
                d.is_zero()
            } else {
                d.is_positive()
            }
        })
    }

    pub fn closure_contains(&self, z: &[Q]) -> bool {
        (0..self.tip.len()).all(|i| {
            let d = z[i] - self.tip[i];
            if self.theta.contains(&i) {
                d.is_zero()
            } else {
                !d.is_negative()
            }
        })
    }

    /// `cl(Q(tip, D_0^Θ))`: thresholds `⌊α(tip)⌋` on `Φ_Θ^+ ∪ Φ_Θ^0`.
    pub fn enclosure(&self, rs: &RootSystem) -> EnclosedRegion {
        let thresholds = (0..rs.num_roots())
            .map(|a| match theta_class(rs, &self.theta, a) {
                ThetaClass::Negative => None,
                _ => Some(linalg::floor_q(rs.eval(a, &self.tip))),
            })
            .collect();
        EnclosedRegion { thresholds }
    }
}

/// Given `w0` and thresholds `n_α` for `α ∈ Ψ ⊆ Φ_Θ^+`, returns
/// `w1 = w0 + Σ_{β ∉ Θ} n*_β ϖ_β` with `α(w1) > n_α` for every `α ∈ Ψ`, where
/// `n*_β` is the least positive integer exceeding
/// `max{(n_α − α(w0))/c_α : α ∈ Ψ, b_{αβ} > 0}` and `c_α` is the sum of the
/// coordinates of α off Θ.
pub fn subsector_tip(rs: &RootSystem, w0: &[Q], theta: &[usize], thresholds: &[(usize, Q)]) -> Result<Vec<Q>> {
    check_dim(rs, w0)?;
    for &(a, _) in thresholds {
        if a >= rs.num_roots() {
            return invalid("root index out of range");
        }
        match theta_class(rs, theta, a) {
            ThetaClass::Positive => {}
            ThetaClass::Zero => return precondition(format!("{:?} lies in the span of Θ", rs.root(a))),
            ThetaClass::Negative => return precondition(format!("{:?} is not in Φ_Θ^+", rs.root(a))),
        }
    }
    let free: Vec<usize> = (0..rs.rank()).filter(|k| !theta.contains(k)).collect();
    let c = |a: usize| -> i64 { free.iter().map(|&k| rs.root(a)[k] as i64).sum() };
    let mut w1 = w0.to_vec();
    for &b in &free {
        let m = thresholds
            .iter()
            .filter(|(a, _)| rs.root(*a)[b] > 0)
            .map(|&(a, n)| (n - rs.eval(a, w0)) / linalg::q(c(a)))
            .max();
        let base = m.map_or(Q::zero(), |m| m.max(Q::zero()));
        w1[b] += linalg::q(linalg::floor_q(base) + 1);
    }
    for &(a, n) in thresholds {
        if rs.eval(a, &w1) <= n {
            return Err(Error::Internal("sub-sector tip misses a threshold".into()));
        }
    }
    Ok(w1)
}

/// For a special `w0` and `w1` with the same Θ-coordinates, a special `w2`
/// with `cl(Q(w2, D^Θ)) ⊆ Q(w1, D^Θ)`.
pub fn subsector_special(rs: &RootSystem, w0: &[Q], w1: &[Q], theta: &[usize]) -> Result<Vec<Q>> {
    check_dim(rs, w0)?;
    check_dim(rs, w1)?;
    if !is_special(w0) {
        return precondition("w0 must be a special vertex");
    }
    if theta.iter().any(|&t| w0.get(t) != w1.get(t)) {
        return precondition("w0 and w1 must agree on Θ");
    }
    let thresholds: Vec<(usize, Q)> = (0..rs.num_positive())
        .filter(|&a| theta_class(rs, theta, a) == ThetaClass::Positive)
        .map(|a| (a, rs.eval(a, w1)))
        .collect();
    let w2 = subsector_tip(rs, w0, theta, &thresholds)?;
    let face = SectorFace::new(rs, w1.to_vec(), theta.to_vec())?;
    let inner = SectorFace::new(rs, w2.clone(), theta.to_vec())?;
    if !is_special(&w2) || !inner.enclosure(rs).inside_sector_face(rs, &face) {
        return Err(Error::Internal("special sub-sector check failed".into()));
    }
    Ok(w2)
}

/// Minimal special vertices `Ω` of `cl(Q(x, D^Θ))` for the order
/// `ω' ≤ ω ⇔ ω ∈ cl(Q(ω', D^Θ))`. Every special vertex of the enclosure lies
/// in `cl(Q(ω, D^Θ))` for some `ω ∈ Ω`.
pub fn corner_set(rs: &RootSystem, x: &[Q], theta: &[usize]) -> Result<Vec<Vec<i64>>> {
    check_dim(rs, x)?;
    let face = SectorFace::new(rs, x.to_vec(), theta.to_vec())?;
    let region = face.enclosure(rs);
    let n = rs.rank();
    let free: Vec<usize> = (0..n).filter(|k| !theta.contains(k)).collect();
    let fixed: Vec<usize> = (0..n).filter(|k| theta.contains(k)).collect();
    let lower: Vec<i64> = (0..n).map(|k| linalg::floor_q(x[k])).collect();
    let choices: Vec<Vec<i64>> = fixed
        .iter()
        .map(|&k| {
            let c: BTreeSet<i64> = [linalg::floor_q(x[k]), x[k].ceil().to_integer()].into();
            c.into_iter().collect()
        })
        .collect();
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut assignment = vec![0usize; fixed.len()];
    loop {
        let mut base = lower.clone();
        for (i, &k) in fixed.iter().enumerate() {
            base[k] = choices[i][assignment[i]];
        }
        out.extend(corners_for_assignment(rs, &region, &base, &free)?);
        // next assignment
        let mut i = 0;
        loop {
            if i == fixed.len() {
                out.sort();
                return Ok(out);
            }
            assignment[i] += 1;
            if assignment[i] < choices[i].len() {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

fn corners_for_assignment(
    rs: &RootSystem,
    region: &EnclosedRegion,
    base: &[i64],
    free: &[usize],
) -> Result<Vec<Vec<i64>>> {
    let bq: Vec<Q> = base.iter().map(|&v| linalg::q(v)).collect();
    // Upper bounds on free coordinates of minimal elements.
    let mut upper = Vec::new();
    for &b in free {
        let mut u = base[b];
        for (a, r) in region.thresholds.iter().enumerate() {
            let (Some(r), coef) = (r, rs.root(a)[b] as i64) else { continue };
            if coef <= 0 {
                continue;
            }
            let deficit = linalg::q(*r) - rs.eval(a, &bq);
            if deficit.is_positive() {
                u = u.max(base[b] + (deficit / linalg::q(coef)).ceil().to_integer());
            }
        }
        upper.push(u);
    }
    let box_size: u128 = upper.iter().zip(free).map(|(&u, &b)| (u - base[b] + 1) as u128).product();
    if box_size > 5_000_000 {
        return Err(Error::TooLarge(format!("corner search box has {box_size} points")));
    }
    let mut pts: Vec<Vec<i64>> = Vec::new();
    let mut cur: Vec<i64> = free.iter().map(|&b| base[b]).collect();
    loop {
        pts.push(cur.clone());
        let mut i = 0;
        loop {
            if i == free.len() {
                break;
            }
            cur[i] += 1;
            if cur[i] <= upper[i] {
                break;
            }
            cur[i] = base[free[i]];
            i += 1;
        }
        if i == free.len() {
            break;
        }
    }
    pts.sort_by_key(|p| p.iter().sum::<i64>());
    let mut minimal: Vec<Vec<i64>> = Vec::new();
    for p in pts {
        if minimal.iter().any(|m| m.iter().zip(&p).all(|(a, b)| a <= b)) {
            continue;
        }
        let mut w = base.to_vec();
        for (i, &b) in free.iter().enumerate() {
            w[b] = p[i];
        }
        let wq: Vec<Q> = w.iter().map(|&v| linalg::q(v)).collect();
        if region.contains(rs, &wq) {
            minimal.push(p);
        }
    }
    Ok(minimal
        .into_iter()
        .map(|p| {
            let mut w = base.to_vec();
            for (i, &b) in free.iter().enumerate() {
                w[b] = p[i];
            }
            w
        })
        .collect())
}

/// Iterates over the `k`-element subsets of `0..m` in lexicographic order.
fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + m - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// `lcm` of `|det|` over the nonsingular `n × n` row submatrices of an
/// `m × n` integer matrix (1 when the rank is below `n`). Every vertex of
/// `{z : M z ≤ b}` with integer `b` lies in `(1/d) Z^n`. Fails with
/// `TooLarge` when the lcm leaves `u128`.
pub fn polytope_denominator(m: &[Vec<i64>]) -> Result<u128> {
    let n = m.first().map_or(0, |r| r.len());
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for r in m {
        if r.iter().all(|&c| c == 0) {
            continue;
        }
        let neg: Vec<i64> = r.iter().map(|c| -c).collect();
        if !rows.contains(r) && !rows.contains(&neg) {
            rows.push(r.clone());
        }
    }
    let mut d = 1u128;
    for s in subsets(rows.len(), n) {
        let sub: Vec<Vec<i64>> = s.iter().map(|&i| rows[i].clone()).collect();
        let det = linalg::det_int(&sub).unsigned_abs();
        if det != 0 {
            d = (d / d.gcd(&det))
                .checked_mul(det)
                .ok_or_else(|| Error::TooLarge("polytope denominator overflows u128".into()))?;
        }
    }
    Ok(d)
}

/// Vertices of `{z : M z ≤ b}` by solving every nonsingular `n × n` subsystem;
/// limited to `n ≤ 4`. Sorted and deduplicated.
pub fn polytope_vertices(m: &[Vec<i64>], b: &[i64]) -> Result<Vec<Vec<Q>>> {
    if m.len() != b.len() {
        return invalid("matrix and right-hand side disagree in length");
    }
    let n = m.first().map_or(0, |r| r.len());
    if n > 4 {
        return precondition("vertex enumeration limited to dimension 4");
    }
    let mq: Vec<Vec<Q>> = m.iter().map(|r| linalg::to_q(r)).collect();
    let mut out: BTreeSet<Vec<Q>> = BTreeSet::new();
    for s in subsets(m.len(), n) {
        let a: Vec<Vec<Q>> = s.iter().map(|&i| mq[i].clone()).collect();
        let rhs: Vec<Q> = s.iter().map(|&i| linalg::q(b[i])).collect();
        let Some(z) = linalg::solve(&a, &rhs) else { continue };
        let feasible = mq
            .iter()
            .zip(b)
            .all(|(row, &bi)| row.iter().zip(&z).map(|(p, q)| *p * *q).sum::<Q>() <= linalg::q(bi));
        if feasible {
            out.insert(z);
        }
    }
    Ok(out.into_iter().collect())
}

/// Normalises fixed points of affine Weyl elements `y ↦ w(y) + v` into the
/// lattice `(1/e) Z^n`, where `e` is the lcm over `w ∈ W` of the polytope
/// denominators of `{y : (w − 1) y = −v, α(y) ≥ r_α (α ∈ Φ)}`.
#[derive(Debug, Clone)]
pub struct FixedPointNormalizer {
    pub e: u64,
}

impl FixedPointNormalizer {
    pub fn new(rs: &RootSystem) -> Result<FixedPointNormalizer> {
        if rs.rank() > 4 {
            return precondition("fixed-point normalisation implemented for rank at most 4");
        }
        let mut e = 1u64;
        for w in rs.weyl_group()? {
            let d = u64::try_from(Self::denominator_for(rs, &w)?)
                .map_err(|_| Error::TooLarge("fixed-point denominator overflows u64".into()))?;
            e = linalg::lcm_u(e, d);
        }
        Ok(FixedPointNormalizer { e })
    }

    /// `d_w`: denominator of the constraint matrix attached to `w`.
    pub fn denominator_for(rs: &RootSystem, w: &WeylWord) -> Result<u128> {
        let n = rs.rank();
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for i in 0..n {
            let r: Vec<i64> = (0..n).map(|j| w.matrix[i][j] - i64::from(i == j)).collect();
            rows.push(r.clone());
            rows.push(r.iter().map(|c| -c).collect());
        }
        for a in 0..rs.num_roots() {
            rows.push(rs.root(a).iter().map(|&c| -(c as i64)).collect());
        }
        polytope_denominator(&rows)
    }

    /// Returns `z` in the fixed space of `w` with `x + z ∈ cl({x}) ∩ (1/e) Z^n`
    /// (the lexicographically least vertex of that polytope).
    pub fn normalize(&self, rs: &RootSystem, w: &WeylWord, v: &[i64], x: &[Q]) -> Result<Vec<Q>> {
        check_dim(rs, x)?;
        let n = rs.rank();
        if v.len() != n {
            return invalid("translation has the wrong dimension");
        }
        let wx = w.apply(x);
        if (0..n).any(|i| wx[i] + linalg::q(v[i]) != x[i]) {
            return precondition("x is not fixed by the affine map");
        }
        let dm: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| linalg::q(w.matrix[i][j] - i64::from(i == j))).collect())
            .collect();
        let kernel = linalg::nullspace(&dm, n);
        let k = kernel.len();
        let y = if k == 0 {
            x.to_vec()
        } else {
            // y = x + K t with −α(K t) ≤ α(x) − ⌊α(x)⌋.
            let rows: Vec<Vec<Q>> = (0..rs.num_roots())
                .map(|a| kernel.iter().map(|kv| -rs.eval(a, kv)).collect())
                .collect();
            let rhs: Vec<Q> = (0..rs.num_roots())
                .map(|a| {
                    let v = rs.eval(a, x);
                    v - linalg::q(linalg::floor_q(v))
                })
                .collect();
            let mut best: Option<Vec<Q>> = None;
            for s in subsets(rows.len(), k) {
                let a: Vec<Vec<Q>> = s.iter().map(|&i| rows[i].clone()).collect();
                let b: Vec<Q> = s.iter().map(|&i| rhs[i]).collect();
                let Some(t) = linalg::solve(&a, &b) else { continue };
                let ok = rows
                    .iter()
                    .zip(&rhs)
                    .all(|(r, &bi)| r.iter().zip(&t).map(|(p, q)| *p * *q).sum::<Q>() <= bi);
                if !ok {
                    continue;
                }
                let y: Vec<Q> = (0..n)
                    .map(|i| x[i] + kernel.iter().zip(&t).map(|(kv, ti)| kv[i] * *ti).sum::<Q>())
                    .collect();
                if best.as_ref().is_none_or(|b| y < *b) {
                    best = Some(y);
                }
            }
            best.ok_or_else(|| Error::Internal("fixed-point polytope has no vertex".into()))?
        };
        let e = linalg::q(self.e as i64);
        if y.iter().any(|c| !(*c * e).is_integer()) {
            return Err(Error::Internal("normalised point misses the lattice (1/e)Z^n".into()));
        }
        let wy = w.apply(&y);
        if (0..n).any(|i| wy[i] + linalg::q(v[i]) != y[i]) {
            return Err(Error::Internal("normalised point is not fixed".into()));
        }
        Ok((0..n).map(|i| y[i] - x[i]).collect())
    }
}

/// Convenience: the point `Σ c_i ϖ_i` from integer numerators over a common
/// denominator.
pub fn point(num: &[i64], den: i64) -> Vec<Q> {
    num.iter().map(|&c| Q::new(c, den)).collect()
}

pub fn origin(rs: &RootSystem) -> Vec<Q> {
    vec![Q::zero(); rs.rank()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enclosure_example() {
        let rs = RootSystem::parse("A2").unwrap();
        let cl = enclosure(&rs, &[origin(&rs), point(&[1, 0], 2)]).unwrap();
        let th = |r: &[i32]| cl.thresholds[rs.index_of(r).unwrap()].unwrap();
        assert_eq!(th(&[1, 0]), 0);
        assert_eq!(th(&[1, 1]), 0);
        assert_eq!(th(&[-1, 0]), -1);
        assert!(enclosure(&rs, &[]).is_err());
    }

    #[test]
    fn local_root_example() {
        let rs = RootSystem::parse("A2").unwrap();
        let lr = local_roots(&rs, &point(&[1, 0], 2)).unwrap();
        let mut got: Vec<_> = lr.iter().map(|&a| rs.root(a).clone()).collect();
        got.sort();
        assert_eq!(got, vec![vec![0, -1], vec![0, 1]]);
    }

    #[test]
    fn corner_examples() {
        let rs = RootSystem::parse("A2").unwrap();
        let om = corner_set(&rs, &point(&[1, 1], 2), &[]).unwrap();
        assert!(om.iter().all(|w| w.iter().all(|&c| c == 0 || c == 1)));
        assert_eq!(om, vec![vec![0, 1], vec![1, 0]]);
        let om = corner_set(&rs, &point(&[2, -3], 1), &[]).unwrap();
        assert_eq!(om, vec![vec![2, -3]]);
    }

    #[test]
    fn polytope_example() {
        let m = vec![vec![2, 0], vec![0, 3], vec![-1, -1]];
        assert_eq!(polytope_denominator(&m).unwrap(), 6);
        let v = polytope_vertices(&m, &[1, 1, 0]).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.contains(&vec![Q::new(1, 2), Q::new(1, 3)]));
        assert_eq!(polytope_denominator(&[vec![1, 1], vec![2, 2]]).unwrap(), 1);
    }

    #[test]
    fn subsector_rejects_span_of_theta() {
        let rs = RootSystem::parse("A2").unwrap();
        let err = subsector_tip(&rs, &origin(&rs), &[0], &[(0, Q::zero())]);
        assert!(err.is_err());
        let w1 = subsector_tip(&rs, &origin(&rs), &[0], &[(2, linalg::q(5))]).unwrap();
        assert!(rs.eval(2, &w1) > linalg::q(5));
        assert_eq!(w1[0], Q::zero());
    }

    #[test]
    fn fixed_point_examples() {
        let rs = RootSystem::parse("A1").unwrap();
        let fp = FixedPointNormalizer::new(&rs).unwrap();
        assert_eq!(fp.e, 2);
        let s = rs.weyl_word(&[0]).unwrap();
        // y ↦ −y + 1 fixes 1/2.
        let z = fp.normalize(&rs, &s, &[1], &point(&[1], 2)).unwrap();
        assert_eq!(z, vec![Q::zero()]);
        assert!(fp.normalize(&rs, &s, &[1], &point(&[1], 3)).is_err());
        let id = rs.weyl_word(&[]).unwrap();
        let z = fp.normalize(&rs, &id, &[0], &point(&[1], 3)).unwrap();
        assert_eq!(z, vec![Q::new(-1, 3)]);
    }
}
