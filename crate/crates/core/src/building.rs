//! The Bruhat–Tits building of `SL_n` over `K = F_q((π))`, `π = 1/t`, and its
//! quotient by `SL_n(F_q[t])`.
//!
//! Vertices are homothety classes of `O`-lattices, `O = F_q[[π]]`, stored in a
//! canonical lower-triangular Hermite form over `O`. The orbit label of a
//! vertex `g·O^n` is its Birkhoff type: `g = u·diag(t^{a_i})·v` with
//! `u ∈ GL_n(F_q[t])` and `v ∈ GL_n(O)`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{invalid, precondition, Error, Result};
use crate::ffield::{Fq, GaloisField, Poly, RatFunc};
use crate::linalg::Q;
use crate::ratmat::{self, RatMat};

fn val_pi(p: &Poly) -> Option<usize> {
    p.coeffs().iter().position(|&c| c != 0)
}

fn truncate(p: &Poly, n: usize) -> Poly {
    let c = p.coeffs();
    Poly::new(p.field(), c[..c.len().min(n)].to_vec())
}

fn shift_down(p: &Poly, k: usize) -> Poly {
    let c = p.coeffs();
    Poly::new(p.field(), c.get(k..).map_or(vec![], <[u8]>::to_vec))
}

/// Inverse of a unit of `O` modulo `π^n`.
fn unit_inverse(w: &Poly, n: usize) -> Poly {
    let f = w.field();
    let w0inv = f.inv(w.coeff(0)).expect("unit has nonzero constant term");
    let mut b = vec![0u8; n];
    for k in 0..n {
        if k == 0 {
            b[0] = w0inv;
            continue;
        }
        let mut s = 0u8;
        for j in 1..=k {
            s = f.add(s, f.mul(w.coeff(j), b[k - j]));
        }
        b[k] = f.neg(f.mul(w0inv, s));
    }
    Poly::new(f, b)
}

/// A Laurent polynomial in `t` given by a polynomial in `π`.
fn pi_to_t(p: &Poly) -> RatFunc {
    let f = p.field();
    let Some(d) = p.degree() else { return RatFunc::zero(f) };
    let rev: Vec<u8> = (0..=d).map(|i| p.coeff(d - i)).collect();
    ratmat::laurent(f, -(d as i64), &rev)
}

/// A vertex of the building: the class of the lattice spanned by the columns
/// of a lower-triangular matrix over `F_q[π]` with pivots `π^{k_i}`, entries
/// below a pivot row reduced to degree `< k_r`, and not contained in `πO^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeVertex {
    field: Fq,
    /// `cols[j][i]` is the entry in row `i` of basis column `j`.
    cols: Vec<Vec<Poly>>,
}

impl LatticeVertex {
    pub fn standard(f: &Fq, n: usize) -> LatticeVertex {
        let cols = (0..n)
            .map(|j| (0..n).map(|i| if i == j { Poly::one(f) } else { Poly::zero(f) }).collect())
            .collect();
        LatticeVertex { field: f.clone(), cols }
    }

    /// The class of `g·O^n` for an invertible matrix of Laurent polynomials in `t`.
    pub fn from_matrix(g: &RatMat) -> Result<LatticeVertex> {
        let n = g.len();
        if n == 0 || g.iter().any(|r| r.len() != n) {
            return invalid("basis matrix must be square");
        }
        let f = g[0][0].field().clone();
        // t^k = π^{-k}; scale by π^c so that every entry lies in F_q[π].
        let mut c = 0i64;
        for x in g.iter().flatten() {
            if x.is_zero() {
                continue;
            }
            if !ratmat::in_window(x, i64::MIN / 4, i64::MAX / 4) {
                return invalid(format!("entry {x} is not a Laurent polynomial"));
            }
            c = c.max(-x.val_inf().unwrap());
        }
        let cols: Vec<Vec<Poly>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| {
                        let x = &g[i][j];
                        if x.is_zero() {
                            return Poly::zero(&f);
                        }
                        // x = Σ c_e t^e, so π^c x = Σ c_e π^{c-e}.
                        let lo = ratmat::ord_t(x).unwrap();
                        let hi = -x.val_inf().unwrap();
                        let shifted = x * &RatFunc::t_pow(&f, -lo);
                        let mut coeffs = vec![0u8; (c - lo + 1) as usize];
                        for e in lo..=hi {
                            coeffs[(c - e) as usize] = shifted.num().coeff((e - lo) as usize);
                        }
                        Poly::new(&f, coeffs)
                    })
                    .collect()
            })
            .collect();
        Self::canonical(&f, cols)
    }

    /// `diag(t^{e_1}, …, t^{e_n})·O^n`.
    pub fn diagonal(f: &Fq, e: &[i64]) -> Result<LatticeVertex> {
        let n = e.len();
        let g: RatMat = (0..n)
            .map(|i| (0..n).map(|j| if i == j { RatFunc::t_pow(f, e[i]) } else { RatFunc::zero(f) }).collect())
            .collect();
        Self::from_matrix(&g)
    }

    /// Canonical form of the lattice spanned by `n` columns over `F_q[π]`.
    fn canonical(f: &Fq, cols: Vec<Vec<Poly>>) -> Result<LatticeVertex> {
        let n = cols.len();
        let as_rat: RatMat = (0..n)
            .map(|i| (0..n).map(|j| RatFunc::from_poly(cols[j][i].clone())).collect())
            .collect();
        let det = ratmat::det(&as_rat);
        let Some(m) = ratmat::ord_t(&det) else {
            return invalid("basis vectors are linearly dependent");
        };
        // π^m O^n lies in the lattice, so arithmetic mod π^{m+1} is exact.
        let modulus = m as usize + 1;
        let mut gens: Vec<Vec<Poly>> = cols.iter().map(|c| c.iter().map(|p| truncate(p, modulus)).collect()).collect();
        for j in 0..n {
            gens.push((0..n).map(|i| if i == j { Poly::monomial(f, 1, m as usize) } else { Poly::zero(f) }).collect());
        }
        let mut basis: Vec<Vec<Poly>> = Vec::with_capacity(n);
        let mut pivots = Vec::with_capacity(n);
        for row in 0..n {
            let (best, k) = gens
                .iter()
                .enumerate()
                .filter_map(|(idx, c)| val_pi(&c[row]).map(|v| (idx, v)))
                .min_by_key(|&(_, v)| v)
                .ok_or_else(|| Error::Internal("lattice lost full rank".into()))?;
            let mut piv = gens.swap_remove(best);
            let unit = shift_down(&piv[row], k);
            let inv = unit_inverse(&unit, modulus);
            piv = piv.iter().map(|p| truncate(&(p * &inv), modulus)).collect();
            for c in gens.iter_mut() {
                if c[row].is_zero() {
                    continue;
                }
                let s = shift_down(&c[row], k);
                for i in 0..n {
                    c[i] = truncate(&(&c[i] - &(&s * &piv[i])), modulus);
                }
            }
            basis.push(piv);
            pivots.push(k);
        }
        // Reduce entries below each pivot modulo the later pivots.
        for j in 0..n {
            for r in j + 1..n {
                let s = shift_down(&basis[j][r], pivots[r]);
                if s.is_zero() {
                    continue;
                }
                let col_r = basis[r].clone();
                for i in 0..n {
                    basis[j][i] = truncate(&(&basis[j][i] - &(&s * &col_r[i])), modulus);
                }
            }
        }
        // Homothety: divide by π while the lattice lies in πO^n.
        while basis.iter().flatten().all(|p| p.coeff(0) == 0) {
            basis = basis.iter().map(|c| c.iter().map(|p| shift_down(p, 1)).collect()).collect();
        }
        Ok(LatticeVertex { field: f.clone(), cols: basis })
    }

    pub fn n(&self) -> usize {
        self.cols.len()
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    /// Exponents `k_i` of the pivots `π^{k_i}`.
    pub fn pivots(&self) -> Vec<usize> {
        self.cols.iter().enumerate().map(|(j, c)| c[j].degree().unwrap_or(0)).collect()
    }

    /// The canonical basis as a matrix of Laurent polynomials in `t`.
    pub fn basis_matrix(&self) -> RatMat {
        let n = self.n();
        (0..n).map(|i| (0..n).map(|j| pi_to_t(&self.cols[j][i])).collect()).collect()
    }

    /// The class of `g·L`.
    pub fn translate(&self, g: &RatMat) -> Result<LatticeVertex> {
        LatticeVertex::from_matrix(&ratmat::mul(g, &self.basis_matrix()))
    }

    /// Lattices `L'` with `πL ⊊ L' ⊊ L`, one per proper nonzero subspace of
    /// `L/πL ≅ F_q^n`.
    pub fn neighbors(&self) -> Vec<LatticeVertex> {
        let n = self.n();
        let f = &self.field;
        let pi = Poly::t(f);
        let combine = |v: &[u8]| -> Vec<Poly> {
            (0..n)
                .map(|i| {
                    let mut s = Poly::zero(f);
                    for (j, &c) in v.iter().enumerate() {
                        if c != 0 {
                            s = &s + &self.cols[j][i].scale(c);
                        }
                    }
                    s
                })
                .collect()
        };
        subspaces(f, n)
            .into_iter()
            .map(|rows| {
                let pivots: Vec<usize> = rows.iter().map(|r| r.iter().position(|&c| c != 0).unwrap()).collect();
                let mut cols: Vec<Vec<Poly>> = rows.iter().map(|r| combine(r)).collect();
                for j in (0..n).filter(|j| !pivots.contains(j)) {
                    cols.push(self.cols[j].iter().map(|p| p * &pi).collect());
                }
                LatticeVertex::canonical(f, cols).expect("neighbor lattice has full rank")
            })
            .collect()
    }

    /// Birkhoff type normalised so that the last entry is 0.
    pub fn birkhoff_type(&self) -> Result<Vec<i64>> {
        Ok(normalize_type(&birkhoff(&self.basis_matrix())?.exponents))
    }
}

/// Proper nonzero subspaces of `F_q^n`, each as the rows of its reduced
/// row echelon basis.
pub fn subspaces(f: &GaloisField, n: usize) -> Vec<Vec<Vec<u8>>> {
    let q = f.q() as usize;
    let mut out = Vec::new();
    for k in 1..n {
        for piv in combinations(n, k) {
            // Free entries: row r, columns after piv[r] that are not pivots.
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| ((piv[r] + 1)..n).filter(|c| !piv.contains(c)).map(move |c| (r, c)))
                .collect();
            for v in 0..q.pow(free.len() as u32) {
                let mut rows = vec![vec![0u8; n]; k];
                for r in 0..k {
                    rows[r][piv[r]] = 1;
                }
                let mut x = v;
                for &(r, c) in &free {
                    rows[r][c] = (x % q) as u8;
                    x /= q;
                }
                out.push(rows);
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for last in k - 1..n {
        for mut c in combinations(last, k - 1) {
            c.push(last);
            out.push(c);
        }
    }
    out
}

/// `g = u·diag(t^{a_1}, …, t^{a_n})·v` with `a_1 ≥ … ≥ a_n`, `u ∈ GL_n(F_q[t])`
/// and `v ∈ GL_n(O)`.
#[derive(Debug, Clone)]
pub struct Birkhoff {
    pub u: RatMat,
    pub exponents: Vec<i64>,
    pub v: RatMat,
}

/// Subtracts the last exponent, so types of homothetic lattices agree.
pub fn normalize_type(a: &[i64]) -> Vec<i64> {
    let last = *a.last().unwrap_or(&0);
    a.iter().map(|x| x - last).collect()
}

/// Birkhoff factorisation of an invertible matrix of Laurent polynomials, by
/// left row reduction over `F_q[t]` until the matrix of leading row
/// coefficients is invertible. The result is certified exactly.
pub fn birkhoff(g: &RatMat) -> Result<Birkhoff> {
    let n = g.len();
    if n == 0 || g.iter().any(|r| r.len() != n) {
        return invalid("matrix must be square");
    }
    let f = g[0][0].field().clone();
    if ratmat::det(g).is_zero() {
        return invalid("matrix is singular");
    }
    let mut c = 0i64;
    for x in g.iter().flatten() {
        if !x.is_zero() {
            if !ratmat::in_window(x, i64::MIN / 4, i64::MAX / 4) {
                return invalid(format!("entry {x} is not a Laurent polynomial"));
            }
            c = c.max(-ratmat::ord_t(x).unwrap());
        }
    }
    let scale = RatFunc::t_pow(&f, c);
    let mut rows: Vec<Vec<Poly>> = g
        .iter()
        .map(|r| r.iter().map(|x| (x * &scale).num().clone()).collect())
        .collect();
    let row_deg = |r: &[Poly]| r.iter().map(Poly::deg).max().unwrap();
    loop {
        let degs: Vec<i64> = rows.iter().map(|r| row_deg(r)).collect();
        let lc: Vec<Vec<u8>> = rows
            .iter()
            .zip(&degs)
            .map(|(r, &d)| r.iter().map(|p| if p.deg() == d { p.lead() } else { 0 }).collect())
            .collect();
        let Some(dep) = left_kernel_vector(&f, &lc) else { break };
        let i0 = (0..n).filter(|&i| dep[i] != 0).max_by_key(|&i| (degs[i], i)).unwrap();
        let mut new_row: Vec<Poly> = vec![Poly::zero(&f); n];
        for i in (0..n).filter(|&i| dep[i] != 0) {
            let sh = (degs[i0] - degs[i]) as usize;
            for (acc, p) in new_row.iter_mut().zip(&rows[i]) {
                *acc = &*acc + &p.scale(dep[i]).shift(sh);
            }
        }
        if row_deg(&new_row) >= degs[i0] {
            return Err(Error::Internal("row reduction did not lower the degree".into()));
        }
        rows[i0] = new_row;
    }
    let mut order: Vec<usize> = (0..n).collect();
    let degs: Vec<i64> = rows.iter().map(|r| row_deg(r)).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(degs[i]), i));
    let exponents: Vec<i64> = order.iter().map(|&i| degs[i] - c).collect();
    let v: RatMat = order
        .iter()
        .map(|&i| rows[i].iter().map(|p| &RatFunc::from_poly(p.clone()) * &RatFunc::t_pow(&f, -degs[i])).collect())
        .collect();
    let d: RatMat = (0..n)
        .map(|i| (0..n).map(|j| if i == j { RatFunc::t_pow(&f, exponents[i]) } else { RatFunc::zero(&f) }).collect())
        .collect();
    let dv = ratmat::mul(&d, &v);
    let dv_inv = ratmat::inverse(&dv).ok_or_else(|| Error::Internal("D·v is singular".into()))?;
    let u = ratmat::mul(g, &dv_inv);
    let out = Birkhoff { u, exponents, v };
    certify(g, &out)?;
    Ok(out)
}

fn certify(g: &RatMat, b: &Birkhoff) -> Result<()> {
    let n = g.len();
    let f = g[0][0].field().clone();
    if !ratmat::is_integral(&b.u) {
        return Err(Error::Internal("u is not over F_q[t]".into()));
    }
    let du = ratmat::det(&b.u);
    if !(du.is_polynomial() && du.num().deg() == 0) {
        return Err(Error::Internal("det u is not a nonzero constant".into()));
    }
    if b.v.iter().flatten().any(|x| x.val_inf().is_some_and(|v| v < 0)) {
        return Err(Error::Internal("v has an entry with negative valuation".into()));
    }
    if ratmat::det(&b.v).val_inf() != Some(0) {
        return Err(Error::Internal("det v is not a unit at infinity".into()));
    }
    if b.exponents.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Internal("exponents are not decreasing".into()));
    }
    let d: RatMat = (0..n)
        .map(|i| (0..n).map(|j| if i == j { RatFunc::t_pow(&f, b.exponents[i]) } else { RatFunc::zero(&f) }).collect())
        .collect();
    if ratmat::mul(&ratmat::mul(&b.u, &d), &b.v) != *g {
        return Err(Error::Internal("u·D·v does not reproduce g".into()));
    }
    Ok(())
}

/// A nonzero `c` with `Σ c_i rows_i = 0`, if the rows are dependent.
fn left_kernel_vector(f: &GaloisField, rows: &[Vec<u8>]) -> Option<Vec<u8>> {
    let n = rows.len();
    let m = rows[0].len();
    let mut aug: Vec<(Vec<u8>, Vec<u8>)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), (0..n).map(|j| u8::from(i == j)).collect()))
        .collect();
    let mut rank = 0;
    for col in 0..m {
        let Some(p) = (rank..n).find(|&r| aug[r].0[col] != 0) else { continue };
        aug.swap(rank, p);
        let inv = f.inv(aug[rank].0[col]).unwrap();
        let (pr, pc) = aug[rank].clone();
        for r in 0..n {
            if r != rank && aug[r].0[col] != 0 {
                let fac = f.mul(aug[r].0[col], inv);
                for (x, &y) in aug[r].0.iter_mut().zip(&pr) {
                    *x = f.sub(*x, f.mul(fac, y));
                }
                for (x, &y) in aug[r].1.iter_mut().zip(&pc) {
                    *x = f.sub(*x, f.mul(fac, y));
                }
            }
        }
        rank += 1;
    }
    aug.into_iter().find(|(r, _)| r.iter().all(|&x| x == 0)).map(|(_, c)| c)
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientNode {
    /// Birkhoff type with last entry 0.
    pub label: Vec<i64>,
    /// Ball vertices with this type.
    pub multiplicity: usize,
    /// Least distance from the standard vertex among them.
    pub distance: usize,
    /// Canonical basis of the first vertex found, as strings in `t`.
    pub lift: Vec<Vec<String>>,
    /// Order of the stabiliser in `SL_2(F_q[t])` (`n = 2` only).
    pub stabilizer_order: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientComplex {
    pub n: usize,
    pub q: u32,
    pub radius: usize,
    pub ball_size: usize,
    pub nodes: Vec<QuotientNode>,
    pub edges: Vec<(usize, usize)>,
}

impl QuotientComplex {
    /// Nodes `0..k` joined consecutively and nothing else.
    pub fn is_path(&self) -> bool {
        let k = self.nodes.len();
        let want: BTreeSet<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
        self.edges.iter().copied().collect::<BTreeSet<_>>() == want
    }

    pub fn is_connected(&self) -> bool {
        let k = self.nodes.len();
        if k == 0 {
            return true;
        }
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(a) = stack.pop() {
            for &(x, y) in &self.edges {
                for (s, t) in [(x, y), (y, x)] {
                    if s == a && !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn to_dot(&self) -> String {
        let mut s = format!("graph quotient_sl{}_q{}_r{} {{\n", self.n, self.q, self.radius);
        for (i, node) in self.nodes.iter().enumerate() {
            let label: Vec<String> = node.label.iter().map(ToString::to_string).collect();
            s.push_str(&format!("  n{i} [label=\"({})\"];\n", label.join(",")));
        }
        for &(a, b) in &self.edges {
            s.push_str(&format!("  n{a} -- n{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Largest supported radius for `(n, q)`.
pub fn max_radius(n: usize, q: u32) -> Option<usize> {
    match (n, q) {
        (2, q) if q <= 5 => Some(8),
        (2, q) if q <= 9 => Some(5),
        (3, 2) => Some(3),
        (3, 3) => Some(1),
        _ => None,
    }
}

/// Breadth-first ball of the given radius around the standard vertex, with
/// vertices grouped by Birkhoff type. Nodes are sorted by type.
pub fn quotient_ball(n: usize, q: u32, radius: usize) -> Result<QuotientComplex> {
    let Some(maxr) = max_radius(n, q) else {
        return Err(Error::TooLarge(format!("no quotient balls for n = {n}, q = {q}")));
    };
    if radius > maxr {
        return Err(Error::TooLarge(format!("radius {radius} exceeds {maxr} for n = {n}, q = {q}")));
    }
    let f = GaloisField::new(q)?;
    let start = LatticeVertex::standard(&f, n);
    let mut dist: HashMap<LatticeVertex, usize> = HashMap::new();
    let mut order: Vec<LatticeVertex> = Vec::new();
    let mut queue = VecDeque::new();
    dist.insert(start.clone(), 0);
    order.push(start.clone());
    queue.push_back(start);
    let mut vertex_edges: Vec<(LatticeVertex, LatticeVertex)> = Vec::new();
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for w in v.neighbors() {
            if let Some(&dw) = dist.get(&w) {
                if dw <= radius {
                    vertex_edges.push((v.clone(), w));
                }
                continue;
            }
            if d < radius {
                dist.insert(w.clone(), d + 1);
                order.push(w.clone());
                queue.push_back(w.clone());
                vertex_edges.push((v.clone(), w));
            }
        }
    }
    let mut types: HashMap<LatticeVertex, Vec<i64>> = HashMap::new();
    let mut groups: BTreeMap<Vec<i64>, (usize, usize, LatticeVertex)> = BTreeMap::new();
    for v in &order {
        let t = v.birkhoff_type()?;
        let d = dist[v];
        groups
            .entry(t.clone())
            .and_modify(|g| {
                g.0 += 1;
                g.1 = g.1.min(d);
            })
            .or_insert((1, d, v.clone()));
        types.insert(v.clone(), t);
    }
    let index: BTreeMap<Vec<i64>, usize> = groups.keys().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let mut edges = BTreeSet::new();
    for (a, b) in &vertex_edges {
        let (x, y) = (index[&types[a]], index[&types[b]]);
        edges.insert((x.min(y), x.max(y)));
    }
    let mut nodes = Vec::new();
    for (label, (mult, d, lift)) in groups {
        let stabilizer_order = if n == 2 && label[0] <= 6 && q <= 5 {
            Some(stabilizer_order_sl2(label[0] as usize, q)?)
        } else {
            None
        };
        nodes.push(QuotientNode {
            label,
            multiplicity: mult,
            distance: d,
            lift: ratmat::to_strings(&lift.basis_matrix()),
            stabilizer_order,
        });
    }
    Ok(QuotientComplex { n, q, radius, ball_size: order.len(), nodes, edges: edges.into_iter().collect() })
}

/// `(a_j − a_i)(w)` for a point with coordinates `w_k = α_{k,k+1}(w)`.
fn root_value(w: &[Q], i: usize, j: usize) -> Q {
    if i < j {
        w[i..j].iter().sum()
    } else {
        -w[j..i].iter().sum::<Q>()
    }
}

fn check_sl(g: &RatMat, w: &[Q]) -> Result<()> {
    let n = g.len();
    if n < 2 || g.iter().any(|r| r.len() != n) || w.len() != n - 1 {
        return invalid("need an n×n matrix and a point with n − 1 coordinates");
    }
    if ratmat::det(g) != RatFunc::one(g[0][0].field()) {
        return precondition("g must have determinant 1");
    }
    Ok(())
}

/// Whether `g ∈ SL_n(F_q(t))` fixes the point `w` of the standard apartment:
/// `ν(g_ij) + (a_j − a_i)(w) ≥ 0` for all `i, j`.
pub fn stab_membership(w: &[Q], g: &RatMat) -> Result<bool> {
    check_sl(g, w)?;
    let n = g.len();
    Ok((0..n).all(|i| {
        (0..n).all(|j| {
            g[i][j].val_inf().is_none_or(|v| Q::from_integer(v) + root_value(w, i, j) >= Q::from_integer(0))
        })
    }))
}

/// Whether `g` fixes the ray from `w` in direction `δ`: `g_ij = 0` when
/// `(a_j − a_i)(δ) < 0`, and the point inequality otherwise.
pub fn ray_stab_membership(w: &[Q], delta: &[Q], g: &RatMat) -> Result<bool> {
    check_sl(g, w)?;
    if delta.len() != w.len() {
        return invalid("direction has the wrong dimension");
    }
    let n = g.len();
    let zero = Q::from_integer(0);
    Ok((0..n).all(|i| {
        (0..n).all(|j| {
            if root_value(delta, i, j) < zero {
                g[i][j].is_zero()
            } else {
                g[i][j].val_inf().is_none_or(|v| Q::from_integer(v) + root_value(w, i, j) >= zero)
            }
        })
    }))
}

/// Polynomials of degree at most `d` (only 0 when `d < 0`).
fn polys_up_to(f: &Fq, d: i64) -> Vec<Poly> {
    if d < 0 {
        return vec![Poly::zero(f)];
    }
    crate::ffield::polys_below(f, d as usize + 1).collect()
}

/// Order of the stabiliser of the ray vertex `m·ϖ` in `SL_2(F_q[t])`, by
/// enumerating the box `deg g_ij ≤ (a_j − a_i)(m·ϖ)` implied by the
/// stabiliser inequalities.
pub fn stabilizer_order_sl2(m: usize, q: u32) -> Result<u64> {
    if m > 6 || q > 5 {
        return Err(Error::TooLarge(format!("m = {m}, q = {q} beyond the enumeration range")));
    }
    let f = GaloisField::new(q)?;
    let w = [Q::from_integer(m as i64)];
    let bound = |i: usize, j: usize| -> i64 { root_value(&w, i, j).to_integer() };
    let e: Vec<Vec<Vec<Poly>>> = (0..2).map(|i| (0..2).map(|j| polys_up_to(&f, bound(i, j))).collect()).collect();
    let one = Poly::one(&f);
    let mut count = 0u64;
    for a in &e[0][0] {
        for d in &e[1][1] {
            let ad = a * d;
            for b in &e[0][1] {
                for c in &e[1][0] {
                    if &ad - &(b * c) != one {
                        continue;
                    }
                    let g: RatMat = vec![
                        vec![RatFunc::from_poly(a.clone()), RatFunc::from_poly(b.clone())],
                        vec![RatFunc::from_poly(c.clone()), RatFunc::from_poly(d.clone())],
                    ];
                    if stab_membership(&w, &g)? {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// The curve behind `A`: the projective line (`A = F_q[t]`) or a Weierstrass
/// cubic `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6` whose affine part has
/// coordinate ring `A`.
#[derive(Debug, Clone)]
pub enum CurveSpec {
    Genus0,
    Genus1 { field: Fq, a: [u8; 5] },
}

impl CurveSpec {
    pub fn weierstrass(field: &Fq, a: [i64; 5]) -> Result<CurveSpec> {
        let a = a.map(|x| field.from_int(x));
        let c = CurveSpec::Genus1 { field: field.clone(), a };
        if c.discriminant() == Some(0) {
            return precondition("the Weierstrass curve is singular");
        }
        Ok(c)
    }

    pub fn genus(&self) -> u32 {
        match self {
            CurveSpec::Genus0 => 0,
            CurveSpec::Genus1 { .. } => 1,
        }
    }

    /// `Δ = −b2²b8 − 8b4³ − 27b6² + 9b2b4b6`.
    pub fn discriminant(&self) -> Option<u8> {
        let CurveSpec::Genus1 { field: f, a } = self else { return None };
        let [a1, a2, a3, a4, a6] = *a;
        let m = |x: u8, y: u8| f.mul(x, y);
        let ad = |x: u8, y: u8| f.add(x, y);
        let k = |n: i64| f.from_int(n);
        let b2 = ad(m(a1, a1), m(k(4), a2));
        let b4 = ad(m(k(2), a4), m(a1, a3));
        let b6 = ad(m(a3, a3), m(k(4), a6));
        let b8 = f.sub(
            ad(ad(m(m(a1, a1), a6), m(k(4), m(a2, a6))), m(a2, m(a3, a3))),
            ad(m(a1, m(a3, a4)), m(a4, a4)),
        );
        let t1 = f.neg(m(m(b2, b2), b8));
        let t2 = f.neg(m(k(8), m(b4, m(b4, b4))));
        let t3 = f.neg(m(k(27), m(b6, b6)));
        let t4 = m(k(9), m(b2, m(b4, b6)));
        Some(ad(ad(t1, t2), ad(t3, t4)))
    }

    /// `|Pic(A)|`: 1 for the projective line, `|E(F_q)|` for a Weierstrass
    /// cubic (projective points, by enumeration).
    pub fn pic_order(&self) -> u64 {
        match self {
            CurveSpec::Genus0 => 1,
            CurveSpec::Genus1 { field: f, a } => {
                let [a1, a2, a3, a4, a6] = *a;
                let mut count = 1u64;
                for x in f.elements() {
                    let x2 = f.mul(x, x);
                    let rhs = f.add(f.add(f.mul(x2, x), f.mul(a2, x2)), f.add(f.mul(a4, x), a6));
                    for y in f.elements() {
                        let lhs = f.add(f.mul(y, y), f.add(f.mul(a1, f.mul(x, y)), f.mul(a3, y)));
                        if lhs == rhs {
                            count += 1;
                        }
                    }
                }
                count
            }
        }
    }
}

/// Number of cuspidal sector chambers, `|Pic(A)|^t` for a group of rank `t`.
pub fn cusp_count(curve: &CurveSpec, t_rank: u32) -> Result<u64> {
    if t_rank == 0 {
        return invalid("rank must be positive");
    }
    curve
        .pic_order()
        .checked_pow(t_rank)
        .ok_or_else(|| Error::TooLarge("cusp count overflows".into()))
}
