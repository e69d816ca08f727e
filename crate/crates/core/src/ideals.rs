//! Arithmetic unipotent subgroups of `SL_n` over `A = F_q[t]`.
//!
//! For `h ∈ SL_n(k)` and a list Ψ of roots `α_{ij}`, `M_Ψ(h)` is the set of
//! coordinate vectors `y` with `h⁻¹ Π_α (I + y_α E_α) h ∈ SL_n(A)`. The lower
//! ideals `J_α(h) ⊆ M_α(h)` and the upper ideals `J_{ij}(h)` bracket these
//! sets; brute force over a window of Laurent polynomials checks both sides.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, precondition, Error, Result};
use crate::ffield::{truncated_basis, Fq, FracIdeal, GaloisField, Poly, RatFunc};
use crate::ratmat::{self, RatMat};

/// The root `α_{ij}` of `SL_n` (0-based), with root group `I + y E_{ij}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SlRoot {
    pub i: usize,
    pub j: usize,
}

impl SlRoot {
    pub fn new(i: usize, j: usize) -> Result<SlRoot> {
        if i == j {
            return invalid("a root needs two distinct indices");
        }
        Ok(SlRoot { i, j })
    }

    pub fn is_positive(&self) -> bool {
        self.i < self.j
    }

    /// Parses 1-based `"i,j"`.
    pub fn parse(s: &str) -> Result<SlRoot> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::Invalid(format!("cannot parse root {s:?}; expected i,j"));
        if parts.len() != 2 {
            return Err(bad());
        }
        let i: usize = parts[0].parse().map_err(|_| bad())?;
        let j: usize = parts[1].parse().map_err(|_| bad())?;
        if i == 0 || j == 0 {
            return Err(bad());
        }
        SlRoot::new(i - 1, j - 1)
    }

    pub fn label(&self) -> String {
        format!("{},{}", self.i + 1, self.j + 1)
    }
}

/// `h` together with `h⁻¹` and the conjugated elementary matrices.
#[derive(Debug, Clone)]
pub struct ConjContext {
    field: Fq,
    n: usize,
    h: RatMat,
    h_inv: RatMat,
}

impl ConjContext {
    pub fn new(h: RatMat) -> Result<ConjContext> {
        let n = h.len();
        if n < 2 || h.iter().any(|r| r.len() != n) {
            return invalid("h must be a square matrix of size at least 2");
        }
        let field = h[0][0].field().clone();
        let d = ratmat::det(&h);
        if d.is_zero() {
            return invalid("h is singular");
        }
        if d != RatFunc::one(&field) {
            return precondition(format!("det h = {d}, expected 1"));
        }
        let h_inv = ratmat::inverse(&h).ok_or_else(|| Error::Internal("inverse failed".into()))?;
        if !ratmat::is_identity(&ratmat::mul(&h, &h_inv)) {
            return Err(Error::Internal("h·h⁻¹ is not the identity".into()));
        }
        Ok(ConjContext { field, n, h, h_inv })
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> &RatMat {
        &self.h
    }

    pub fn h_inv(&self) -> &RatMat {
        &self.h_inv
    }

    fn check_root(&self, a: SlRoot) -> Result<()> {
        if a.i >= self.n || a.j >= self.n {
            return invalid(format!("root ({}) outside SL_{}", a.label(), self.n));
        }
        Ok(())
    }

    /// `h⁻¹ E_α h`.
    pub fn root_matrix(&self, a: SlRoot) -> RatMat {
        let e = ratmat::elementary(&self.field, self.n, a.i, a.j, &RatFunc::one(&self.field));
        let mut e = e;
        for k in 0..self.n {
            e[k][k] = RatFunc::zero(&self.field);
        }
        ratmat::mul(&ratmat::mul(&self.h_inv, &e), &self.h)
    }

    /// `h⁻¹ Π_α (I + y_α E_α) h`, factors in the order of `psi`.
    pub fn conjugate(&self, psi: &[SlRoot], y: &[RatFunc]) -> RatMat {
        let mut u = ratmat::identity(&self.field, self.n);
        for (a, v) in psi.iter().zip(y) {
            u = ratmat::mul(&u, &ratmat::elementary(&self.field, self.n, a.i, a.j, v));
        }
        ratmat::mul(&ratmat::mul(&self.h_inv, &u), &self.h)
    }

    /// Exact test `Π_α (I + y_α E_α) ∈ h SL_n(A) h⁻¹`.
    pub fn is_member(&self, psi: &[SlRoot], y: &[RatFunc]) -> bool {
        ratmat::is_integral(&self.conjugate(psi, y))
    }
}

/// Signed permutation matrix of determinant 1 sending `e_j` to `±e_{σ(j)}`.
pub fn weyl_representative(f: &Fq, sigma: &[usize]) -> Result<RatMat> {
    let n = sigma.len();
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || std::mem::replace(&mut seen[s], true) {
            return invalid("not a permutation");
        }
    }
    let inversions = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| sigma[a] > sigma[b]).count();
    let mut m: RatMat = (0..n).map(|_| (0..n).map(|_| RatFunc::zero(f)).collect()).collect();
    for (j, &s) in sigma.iter().enumerate() {
        m[s][j] = RatFunc::one(f);
    }
    if inversions % 2 == 1 {
        m[sigma[0]][0] = -&RatFunc::one(f);
    }
    Ok(m)
}

/// A random Laurent polynomial with support in `[-height, height]`.
pub fn random_laurent<R: Rng>(f: &Fq, height: i64, rng: &mut R) -> RatFunc {
    let coeffs: Vec<u8> = (0..=2 * height).map(|_| rng.gen_range(0..f.q()) as u8).collect();
    ratmat::laurent(f, -height, &coeffs)
}

/// A random `h = n_w⁻¹ u` with `u` upper unitriangular whose entries are
/// Laurent polynomials supported in `[-height, height]`.
pub fn random_h<R: Rng>(f: &Fq, n: usize, height: i64, rng: &mut R) -> Result<RatMat> {
    let mut sigma: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        sigma.swap(i, rng.gen_range(0..=i));
    }
    let nw = weyl_representative(f, &sigma)?;
    let mut u = ratmat::identity(f, n);
    for i in 0..n {
        for j in i + 1..n {
            u[i][j] = random_laurent(f, height, rng);
        }
    }
    let nw_inv = ratmat::inverse(&nw).ok_or_else(|| Error::Internal("singular permutation".into()))?;
    Ok(ratmat::mul(&nw_inv, &u))
}

/// `J_α(h)`: the ideal generated by the lcm of the denominators of
/// `h⁻¹E_αh`. Since `θ_α` is linear for `SL_n`, this is exactly `M_α(h)`.
pub fn lower_ideal(ctx: &ConjContext, a: SlRoot) -> Result<FracIdeal> {
    ctx.check_root(a)?;
    let m = ctx.root_matrix(a);
    let mut l = Poly::one(&ctx.field);
    for x in m.iter().flatten() {
        if !x.is_zero() {
            l = l.lcm(x.den());
        }
    }
    FracIdeal::from_poly(&l)
}

/// Upper ideals `J_{ij}(h)` for `i < j`: with `I'_i` the ideal of row `i` of
/// `h` and `C_j` that of column `j` of `h⁻¹`, `I_{ij} = I'_i C_j` and
/// `J_{ij} = I_{ij} + Σ_{i<m<j} J_{im} J_{mj}`.
pub fn upper_ideals(ctx: &ConjContext) -> BTreeMap<SlRoot, FracIdeal> {
    let n = ctx.n;
    let span = |xs: Vec<&RatFunc>| -> FracIdeal {
        xs.into_iter()
            .filter(|x| !x.is_zero())
            .map(|x| FracIdeal::new(x).unwrap())
            .reduce(|a, b| a.sum(&b))
            .expect("row or column of an invertible matrix is nonzero")
    };
    let rows: Vec<FracIdeal> = (0..n).map(|i| span(ctx.h[i].iter().collect())).collect();
    let cols: Vec<FracIdeal> = (0..n).map(|j| span((0..n).map(|l| &ctx.h_inv[l][j]).collect())).collect();
    let mut out: BTreeMap<SlRoot, FracIdeal> = BTreeMap::new();
    for d in 1..n {
        for i in 0..n - d {
            let j = i + d;
            let mut acc = rows[i].mul(&cols[j]);
            for m in i + 1..j {
                let p = out[&SlRoot { i, j: m }].mul(&out[&SlRoot { i: m, j }]);
                acc = acc.sum(&p);
            }
            out.insert(SlRoot { i, j }, acc);
        }
    }
    out
}

const SEARCH_CAP: f64 = (1u64 << 20) as f64;

fn window_size(q: u32, width: i64, dims: usize) -> f64 {
    (q as f64).powf((width.max(0) as f64) * dims as f64)
}

/// All Laurent polynomials with support in `[lo, hi]`.
fn window_elements(f: &Fq, lo: i64, hi: i64) -> Vec<RatFunc> {
    let width = (hi - lo + 1).max(0) as usize;
    let q = f.q() as usize;
    let total = q.pow(width as u32);
    (0..total)
        .map(|mut v| {
            let coeffs: Vec<u8> = (0..width)
                .map(|_| {
                    let c = (v % q) as u8;
                    v /= q;
                    c
                })
                .collect();
            ratmat::laurent(f, lo, &coeffs)
        })
        .collect()
}

/// Members of `M_Ψ(h)` whose coordinates are Laurent polynomials supported in
/// `[lo, hi]`.
pub fn m_psi_bruteforce(ctx: &ConjContext, psi: &[SlRoot], lo: i64, hi: i64) -> Result<Vec<Vec<RatFunc>>> {
    if psi.is_empty() {
        return invalid("Ψ is empty");
    }
    for &a in psi {
        ctx.check_root(a)?;
    }
    if hi < lo {
        return invalid("empty window");
    }
    let size = window_size(ctx.field.q(), hi - lo + 1, psi.len());
    if size > SEARCH_CAP {
        return Err(Error::TooLarge(format!("window [{lo}, {hi}] over {} roots gives about {size:.3e} candidates", psi.len())));
    }
    let elems = window_elements(&ctx.field, lo, hi);
    let mats: Vec<RatMat> = psi.iter().map(|&a| ctx.root_matrix(a)).collect();
    let n = ctx.n;
    let one = ratmat::identity(&ctx.field, n);
    let mut out = Vec::new();
    let mut idx = vec![0usize; psi.len()];
    loop {
        // h⁻¹ Π (I + y E) h = Π (I + y h⁻¹Eh).
        let mut prod = one.clone();
        for (k, &e) in idx.iter().enumerate() {
            let y = &elems[e];
            if !y.is_zero() {
                prod = ratmat::mul(&prod, &ratmat::add(&one, &ratmat::scale(&mats[k], y)));
            }
        }
        if ratmat::is_integral(&prod) {
            out.push(idx.iter().map(|&e| elems[e].clone()).collect());
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// A search window `[lo, hi]` for Ψ: `lo` is the least `t`-adic order of an
/// upper-ideal generator (0 for negative roots) and `hi` exceeds the largest
/// lower-ideal degree by 2.
pub fn default_window(ctx: &ConjContext, psi: &[SlRoot]) -> Result<(i64, i64)> {
    let upper = upper_ideals(ctx);
    let mut lo = 0;
    let mut hi = 0;
    for &a in psi {
        let lower = lower_ideal(ctx, a)?;
        hi = hi.max(lower.degree() + 2);
        if let Some(u) = upper.get(&a) {
            lo = lo.min(ratmat::ord_t(u.generator()).unwrap());
        }
    }
    Ok((lo, hi))
}

/// One coordinate of a sandwich check.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichEntry {
    pub root: String,
    pub lower: String,
    pub upper: Option<String>,
    pub lower_in_upper: bool,
    /// Every window element of `J_α(h)` conjugates into `SL_n(A)`.
    pub lower_samples_conjugate: bool,
    /// Window members of `M_α(h)` found by brute force.
    pub brute_alpha: usize,
    /// Brute members of `M_α(h)` all lie in `J_α(h)`.
    pub brute_alpha_in_lower: bool,
    pub brute_alpha_in_upper: bool,
    /// The `α`-coordinates of brute members of `M_Ψ(h)` lie in the upper ideal.
    pub brute_psi_in_upper: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub n: usize,
    pub q: u32,
    pub window: (i64, i64),
    pub psi: Vec<String>,
    pub brute_psi: usize,
    /// `M_Ψ(h) ∩ window` is closed under addition.
    pub psi_additive: bool,
    pub entries: Vec<SandwichEntry>,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| {
            e.lower_in_upper
                && e.lower_samples_conjugate
                && e.brute_alpha_in_lower
                && e.brute_alpha_in_upper
                && e.brute_psi_in_upper
        })
    }
}

/// Runs the lower/upper sandwich on Ψ over the window `[lo, hi]`.
pub fn sandwich(ctx: &ConjContext, psi: &[SlRoot], window: (i64, i64)) -> Result<SandwichReport> {
    let (lo, hi) = window;
    let upper = upper_ideals(ctx);
    let joint = m_psi_bruteforce(ctx, psi, lo, hi)?;
    let mut entries = Vec::new();
    for (k, &a) in psi.iter().enumerate() {
        let lower = lower_ideal(ctx, a)?;
        let up = upper.get(&a);
        let samples = truncated_basis(&lower, hi);
        let lower_samples_conjugate = samples
            .iter()
            .filter(|y| ratmat::in_window(y, lo, hi))
            .all(|y| ctx.is_member(&[a], std::slice::from_ref(y)));
        let single = m_psi_bruteforce(ctx, &[a], lo, hi)?;
        let inside = |ideal: &FracIdeal, y: &RatFunc| ideal.contains(y);
        entries.push(SandwichEntry {
            root: a.label(),
            lower: lower.to_string(),
            upper: up.map(ToString::to_string),
            lower_in_upper: up.is_none_or(|u| lower.is_subset_of(u)),
            lower_samples_conjugate,
            brute_alpha: single.len(),
            brute_alpha_in_lower: single.iter().all(|y| inside(&lower, &y[0])),
            brute_alpha_in_upper: up.is_none_or(|u| single.iter().all(|y| inside(u, &y[0]))),
            brute_psi_in_upper: up.is_none_or(|u| joint.iter().all(|y| inside(u, &y[k]))),
        });
    }
    let psi_additive = additive_closure(&joint);
    Ok(SandwichReport {
        n: ctx.n,
        q: ctx.field.q(),
        window,
        psi: psi.iter().map(SlRoot::label).collect(),
        brute_psi: joint.len(),
        psi_additive,
        entries,
    })
}

fn additive_closure(members: &[Vec<RatFunc>]) -> bool {
    let set: std::collections::HashSet<&Vec<RatFunc>> = members.iter().collect();
    members.iter().all(|a| {
        members.iter().all(|b| {
            let s: Vec<RatFunc> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            set.contains(&s)
        })
    })
}

/// `dim_{F_q}` of the span of `{x ∈ M_Ψ(h) : ν_∞(x_α) ≥ z_α}` for positive
/// roots. Candidates range over `⊕_α J_{α}(h)[−z_α]` (upper ideals), which
/// contains every such `x`.
pub fn v_dim(ctx: &ConjContext, psi: &[SlRoot], z: &[i64]) -> Result<usize> {
    if psi.len() != z.len() {
        return invalid("one bound per root is required");
    }
    for &a in psi {
        ctx.check_root(a)?;
        if !a.is_positive() {
            return precondition("v_dim is defined for positive roots");
        }
    }
    let upper = upper_ideals(ctx);
    let bases: Vec<Vec<RatFunc>> = psi.iter().zip(z).map(|(a, &za)| truncated_basis(&upper[a], -za)).collect();
    let dims: usize = bases.iter().map(Vec::len).sum();
    let f = ctx.field.clone();
    let q = f.q() as usize;
    let total = (q as f64).powi(dims as i32);
    if total > SEARCH_CAP {
        return Err(Error::TooLarge(format!("{total:.3e} candidate vectors")));
    }
    let mut members: Vec<Vec<u8>> = Vec::new();
    for v in 0..q.pow(dims as u32) {
        let mut c = Vec::with_capacity(dims);
        let mut r = v;
        for _ in 0..dims {
            c.push((r % q) as u8);
            r /= q;
        }
        let mut y = Vec::with_capacity(psi.len());
        let mut off = 0;
        for b in &bases {
            let mut s = RatFunc::zero(&f);
            for (k, g) in b.iter().enumerate() {
                if c[off + k] != 0 {
                    s = &s + &g.scale(c[off + k]);
                }
            }
            off += b.len();
            y.push(s);
        }
        if ctx.is_member(psi, &y) {
            members.push(c);
        }
    }
    Ok(rank_fq(&f, members))
}

/// Rank over `F_q` of a list of coordinate vectors.
pub fn rank_fq(f: &GaloisField, mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, p);
        let inv = f.inv(rows[rank][c]).unwrap();
        let pivot: Vec<u8> = rows[rank].iter().map(|&x| f.mul(x, inv)).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

/// For polynomials `P_i(y) = Σ_k c_{ik} y^k` (coefficients listed from `k = 0`,
/// with `c_{i0} = 0`) and ideals `I_i`, an ideal `J ⊆ A` with `P_i(J) ⊆ I_i`:
/// `J = A ∩ ⋂_i b_i I_i`, where `b_i` clears the denominators of `P_i`.
pub fn poly_ideal_lower(f: &Fq, polys: &[Vec<RatFunc>], ideals: &[FracIdeal]) -> Result<FracIdeal> {
    if polys.len() != ideals.len() {
        return invalid("polynomial and ideal lists differ in length");
    }
    let mut j = FracIdeal::unit(f);
    for (p, ideal) in polys.iter().zip(ideals) {
        if p.first().is_some_and(|c| !c.is_zero()) {
            return precondition("polynomials must vanish at 0");
        }
        if p.iter().all(RatFunc::is_zero) {
            continue;
        }
        let b = p.iter().filter(|c| !c.is_zero()).fold(Poly::one(f), |acc, c| acc.lcm(c.den()));
        j = j.intersect(&ideal.scale(&RatFunc::from_poly(b))?);
    }
    Ok(j)
}

/// Evaluates `Σ_k c_k y^k`.
pub fn eval_poly(p: &[RatFunc], y: &RatFunc) -> RatFunc {
    let f = y.field();
    p.iter().rev().fold(RatFunc::zero(f), |acc, c| &(&acc * y) + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{parse_ratfunc, GaloisField};

    fn rf(f: &Fq, s: &str) -> RatFunc {
        parse_ratfunc(f, s).unwrap()
    }

    fn mat(f: &Fq, rows: &[&[&str]]) -> RatMat {
        rows.iter().map(|r| r.iter().map(|s| rf(f, s)).collect()).collect()
    }

    #[test]
    fn identity_context() {
        let f = GaloisField::new(2).unwrap();
        let ctx = ConjContext::new(ratmat::identity(&f, 3)).unwrap();
        let a = SlRoot::new(0, 2).unwrap();
        assert_eq!(lower_ideal(&ctx, a).unwrap(), FracIdeal::unit(&f));
        assert!(upper_ideals(&ctx).values().all(|j| *j == FracIdeal::unit(&f)));
        assert_eq!(v_dim(&ctx, &[a], &[0]).unwrap(), 1);
        assert_eq!(v_dim(&ctx, &[a], &[-3]).unwrap(), 4);
    }

    #[test]
    fn rejects_bad_h() {
        let f = GaloisField::new(3).unwrap();
        assert!(ConjContext::new(mat(&f, &[&["t", "0"], &["0", "1"]])).is_err());
        assert!(ConjContext::new(mat(&f, &[&["1", "1"], &["1", "1"]])).is_err());
    }

    #[test]
    fn poly_ideal_examples() {
        let f = GaloisField::new(2).unwrap();
        let a = FracIdeal::unit(&f);
        let y = vec![RatFunc::zero(&f), RatFunc::one(&f)];
        assert_eq!(poly_ideal_lower(&f, std::slice::from_ref(&y), std::slice::from_ref(&a)).unwrap(), a);
        let sq = vec![RatFunc::zero(&f), RatFunc::zero(&f), rf(&f, "1/t")];
        let j = poly_ideal_lower(&f, &[sq], std::slice::from_ref(&a)).unwrap();
        assert_eq!(j, FracIdeal::t_pow(&f, 1));
        assert_eq!(poly_ideal_lower(&f, &[], &[]).unwrap(), a);
    }

    #[test]
    fn weyl_representatives_have_det_one() {
        let f = GaloisField::new(3).unwrap();
        for sigma in [[0, 1, 2], [1, 0, 2], [2, 0, 1], [2, 1, 0]] {
            let m = weyl_representative(&f, &sigma).unwrap();
            assert_eq!(ratmat::det(&m), RatFunc::one(&f));
        }
    }
}
