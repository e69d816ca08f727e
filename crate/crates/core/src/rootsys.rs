//! Finite reduced root systems in the simple-root basis (Bourbaki numbering).
//!
//! Roots are integer coordinate vectors on the simple roots. Points of the
//! ambient space of the apartment are written on the fundamental coweights, so
//! a root `α = Σ a_i α_i` evaluates at `x = Σ x_i ϖ_i` as `Σ a_i x_i`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{invalid, precondition, Result};
use crate::linalg::{self, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn parse(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// An irreducible component occupying simple roots `offset..offset + rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Component {
    pub family: Family,
    pub rank: usize,
    pub offset: usize,
}

impl Component {
    pub fn simple_range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.rank
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.family.letter(), self.rank)
    }
}

pub type Root = Vec<i32>;

#[derive(Debug, Clone)]
pub struct RootSystem {
    components: Vec<Component>,
    rank: usize,
    /// `2(α_i, α_j)` normalised so that short roots have `(α, α) = 1`.
    sym: Vec<Vec<i64>>,
    /// `cartan[i][j] = ⟨α_j, α_i^∨⟩`.
    cartan: Vec<Vec<i64>>,
    /// Positive roots sorted by height, then all negatives in the same order.
    roots: Vec<Root>,
    index: HashMap<Root, usize>,
    npos: usize,
}

fn check_rank(family: Family, rank: usize) -> Result<()> {
    let ok = match family {
        Family::A => rank >= 1,
        Family::B => rank >= 2,
        Family::C => rank >= 3,
        Family::D => rank >= 4,
        Family::E => (6..=8).contains(&rank),
        Family::F => rank == 4,
        Family::G => rank == 2,
    };
    if ok {
        Ok(())
    } else {
        invalid(format!("no root system of type {}{}", family.letter(), rank))
    }
}

/// Squared lengths (short = 1) and Dynkin edges of an irreducible type.
fn diagram(family: Family, n: usize) -> (Vec<i64>, Vec<(usize, usize)>) {
    let chain = |k: usize| (0..k.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
    match family {
        Family::A => (vec![1; n], chain(n)),
        Family::B => {
            let mut len = vec![2; n];
            len[n - 1] = 1;
            (len, chain(n))
        }
        Family::C => {
            let mut len = vec![1; n];
            len[n - 1] = 2;
            (len, chain(n))
        }
        Family::D => {
            let mut e = chain(n - 1);
            e.push((n - 3, n - 1));
            (vec![1; n], e)
        }
        Family::E => {
            let mut e = vec![(0, 2), (1, 3)];
            e.extend((2..n - 1).map(|i| (i, i + 1)));
            (vec![1; n], e)
        }
        Family::F => (vec![2, 2, 1, 1], chain(4)),
        Family::G => (vec![1, 3], chain(2)),
    }
}

impl RootSystem {
    /// Builds the root system of an irreducible type.
    pub fn irreducible(family: Family, rank: usize) -> Result<RootSystem> {
        RootSystem::new(&[(family, rank)])
    }

    /// Builds a (possibly reducible) root system; components are concatenated
    /// block-diagonally in the given order.
    pub fn new(parts: &[(Family, usize)]) -> Result<RootSystem> {
        if parts.is_empty() {
            return invalid("empty root system");
        }
        let total: usize = parts.iter().map(|p| p.1).sum();
        let mut sym = vec![vec![0i64; total]; total];
        let mut components = Vec::new();
        let mut offset = 0;
        for &(family, rank) in parts {
            check_rank(family, rank)?;
            let (len, edges) = diagram(family, rank);
            for i in 0..rank {
                sym[offset + i][offset + i] = 2 * len[i];
            }
            for (i, j) in edges {
                let v = -len[i].max(len[j]);
                sym[offset + i][offset + j] = v;
                sym[offset + j][offset + i] = v;
            }
            components.push(Component { family, rank, offset });
            offset += rank;
        }
        let cartan: Vec<Vec<i64>> = (0..total)
            .map(|i| (0..total).map(|j| 2 * sym[i][j] / sym[i][i]).collect())
            .collect();
        let mut rs = RootSystem {
            components,
            rank: total,
            sym,
            cartan,
            roots: vec![],
            index: HashMap::new(),
            npos: 0,
        };
        rs.generate_roots();
        Ok(rs)
    }

    /// Parses labels such as `G2`, `E8`, `B2xA1` or `B2+A1`.
    pub fn parse(label: &str) -> Result<RootSystem> {
        let mut parts = Vec::new();
        for piece in label.split(['x', '+', '×', '*']) {
            let piece = piece.trim();
            let mut chars = piece.chars();
            let Some(family) = chars.next().and_then(Family::parse) else {
                return invalid(format!("cannot parse root system type {label:?}"));
            };
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| crate::Error::Invalid(format!("cannot parse rank in {piece:?}")))?;
            parts.push((family, rank));
        }
        RootSystem::new(&parts)
    }

    fn generate_roots(&mut self) {
        let n = self.rank;
        let mut seen: HashSet<Root> = HashSet::new();
        let mut queue: VecDeque<Root> = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(r) = queue.pop_front() {
            for i in 0..n {
                let s = self.reflect_simple(i, &r);
                if seen.insert(s.clone()) {
                    queue.push_back(s);
                }
            }
        }
        let mut pos: Vec<Root> = seen.into_iter().filter(|r| r.iter().all(|&c| c >= 0)).collect();
        pos.sort_by(|a, b| {
            let ha: i32 = a.iter().sum();
            let hb: i32 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let npos = pos.len();
        let mut roots = pos.clone();
        roots.extend(pos.iter().map(|r| r.iter().map(|c| -c).collect::<Root>()));
        self.index = roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        self.roots = roots;
        self.npos = npos;
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    pub fn label(&self) -> String {
        self.components.iter().map(|c| c.label()).collect::<Vec<_>>().join("x")
    }

    pub fn family_label(&self) -> String {
        self.components
            .iter()
            .map(|c| c.family.letter().to_string())
            .collect::<Vec<_>>()
            .join("x")
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// `2(α_i, α_j)` with short roots of squared length 1.
    pub fn gram(&self) -> &[Vec<i64>] {
        &self.sym
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.npos
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.roots[..self.npos]
    }

    /// Index of the simple root `α_i` (simple roots come first).
    pub fn simple(&self, i: usize) -> usize {
        debug_assert_eq!(self.roots[i].iter().sum::<i32>(), 1);
        i
    }

    pub fn index_of(&self, r: &[i32]) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn is_root(&self, r: &[i32]) -> bool {
        self.index.contains_key(r)
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.npos
    }

    pub fn negate(&self, i: usize) -> usize {
        if i < self.npos {
            i + self.npos
        } else {
            i - self.npos
        }
    }

    pub fn height(&self, i: usize) -> i32 {
        self.roots[i].iter().sum()
    }

    /// Index of `r·α + s·β` if it is a root.
    pub fn combine(&self, r: i32, a: usize, s: i32, b: usize) -> Option<usize> {
        let v: Root = self.roots[a]
            .iter()
            .zip(&self.roots[b])
            .map(|(x, y)| r * x + s * y)
            .collect();
        self.index_of(&v)
    }

    pub fn add(&self, a: usize, b: usize) -> Option<usize> {
        self.combine(1, a, 1, b)
    }

    /// `2(β, γ)` for root coordinate vectors.
    pub fn inner2(&self, b: &[i32], g: &[i32]) -> i64 {
        let mut s = 0i64;
        for i in 0..self.rank {
            if b[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += b[i] as i64 * g[j] as i64 * self.sym[i][j];
            }
        }
        s
    }

    /// Squared length of a root, short roots having length 1.
    pub fn norm(&self, i: usize) -> i64 {
        self.inner2(&self.roots[i], &self.roots[i]) / 2
    }

    /// `⟨β, α^∨⟩ = 2(β, α)/(α, α)`.
    pub fn pairing(&self, beta: &[i32], alpha: &[i32]) -> i64 {
        2 * self.inner2(beta, alpha) / self.inner2(alpha, alpha)
    }

    pub fn reflect_simple(&self, i: usize, r: &[i32]) -> Root {
        let c: i64 = (0..self.rank).map(|j| r[j] as i64 * self.cartan[i][j]).sum();
        let mut out = r.to_vec();
        out[i] -= c as i32;
        out
    }

    /// Reflection `s_α(β) = β − ⟨β, α^∨⟩ α`.
    pub fn reflect(&self, alpha: &[i32], beta: &[i32]) -> Root {
        let c = self.pairing(beta, alpha) as i32;
        beta.iter().zip(alpha).map(|(b, a)| b - c * a).collect()
    }

    /// Component index of a root (every root lives in exactly one component).
    pub fn component_of(&self, i: usize) -> usize {
        let r = &self.roots[i];
        self.components
            .iter()
            .position(|c| c.simple_range().any(|k| r[k] != 0))
            .expect("root has a nonzero coordinate")
    }

    /// Highest root of component `c`.
    pub fn highest_root_of(&self, c: usize) -> usize {
        (0..self.npos)
            .filter(|&i| self.component_of(i) == c)
            .max_by_key(|&i| self.height(i))
            .expect("component has positive roots")
    }

    /// Highest root of an irreducible system.
    pub fn highest_root(&self) -> Result<usize> {
        if !self.is_irreducible() {
            return precondition("highest root requires an irreducible root system");
        }
        Ok(self.highest_root_of(0))
    }

    /// `(p, q)` with `β − pα, …, β + qα` the α-string through β.
    pub fn root_string(&self, a: usize, b: usize) -> Result<(i32, i32)> {
        if a == b || a == self.negate(b) {
            return precondition("root string requires α ≠ ±β");
        }
        let mut p = 0;
        while self.combine(-(p + 1), a, 1, b).is_some() {
            p += 1;
        }
        let mut q = 0;
        while self.combine(q + 1, a, 1, b).is_some() {
            q += 1;
        }
        Ok((p, q))
    }

    /// Largest coefficient appearing in any `rα + sβ ∈ Φ` with `r, s ≥ 1`.
    pub fn max_string_coefficient(&self) -> i32 {
        if self.components.iter().any(|c| c.family == Family::G) {
            3
        } else if self.components.iter().any(|c| matches!(c.family, Family::B | Family::C | Family::F)) {
            2
        } else {
            1
        }
    }

    /// Fundamental coweights on the simple coroots: row i holds the
    /// coordinates of `ϖ_i`, i.e. the inverse Cartan matrix.
    pub fn coweight_basis(&self) -> Vec<Vec<Q>> {
        let c: Vec<Vec<Q>> = self.cartan.iter().map(|r| linalg::to_q(r)).collect();
        linalg::inverse(&c).expect("Cartan matrix is invertible")
    }

    /// Evaluates root `i` at a point in coweight coordinates.
    pub fn eval(&self, i: usize, x: &[Q]) -> Q {
        self.roots[i].iter().zip(x).map(|(&a, &v)| v * a as i64).sum()
    }

    pub fn weyl_word(&self, word: &[usize]) -> Result<WeylWord> {
        WeylWord::new(self, word)
    }

    /// Orbit of a rational vector under the subgroup generated by the simple
    /// reflections in `gens`.
    pub fn weyl_orbit(&self, gens: &[usize], v: &[Q], space: Space) -> Result<Vec<Vec<Q>>> {
        if v.len() != self.rank {
            return invalid("vector has the wrong dimension");
        }
        if let Some(&g) = gens.iter().find(|&&g| g >= self.rank) {
            return invalid(format!("simple root index {g} out of range"));
        }
        let mut seen: HashSet<Vec<Q>> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(v.to_vec());
        queue.push_back(v.to_vec());
        while let Some(x) = queue.pop_front() {
            order.push(x.clone());
            for &g in gens {
                let y = match space {
                    Space::Roots => {
                        let c: Q = (0..self.rank).map(|j| x[j] * self.cartan[g][j]).sum();
                        let mut y = x.clone();
                        y[g] -= c;
                        y
                    }
                    Space::Coweights => {
                        let xg = x[g];
                        (0..self.rank).map(|k| x[k] - xg * self.cartan[g][k]).collect()
                    }
                };
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(order)
    }

    /// Every element of the Weyl group as a word; only for small systems.
    pub fn weyl_group(&self) -> Result<Vec<WeylWord>> {
        if self.npos > 36 {
            return precondition("Weyl group enumeration limited to at most 36 positive roots");
        }
        let mut seen: HashMap<Vec<Vec<i64>>, ()> = HashMap::new();
        let id = WeylWord::new(self, &[])?;
        seen.insert(id.matrix.clone(), ());
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(w) = queue.pop_front() {
            for i in 0..self.rank {
                let mut word = w.word.clone();
                word.push(i);
                let nw = WeylWord::new(self, &word)?;
                if seen.insert(nw.matrix.clone(), ()).is_none() {
                    out.push(nw.clone());
                    queue.push_back(nw);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// Simple-root coordinates.
    Roots,
    /// Fundamental-coweight coordinates.
    Coweights,
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A word in the simple reflections with its integer matrix acting on
/// coweight coordinates (rightmost letter applied first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylWord {
    pub word: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
}

impl WeylWord {
    pub fn new(rs: &RootSystem, word: &[usize]) -> Result<WeylWord> {
        let n = rs.rank;
        let mut m = linalg::identity(n);
        for &i in word {
            if i >= n {
                return invalid(format!("simple reflection {i} out of range"));
            }
            let s: Vec<Vec<i64>> = (0..n)
                .map(|k| (0..n).map(|l| i64::from(k == l) - if l == i { rs.cartan[i][k] } else { 0 }).collect())
                .collect();
            m = linalg::mat_mul(&m, &s);
        }
        Ok(WeylWord { word: word.to_vec(), matrix: m })
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        linalg::mat_vec(&self.matrix, x)
    }

    /// Image of a root (in simple-root coordinates).
    pub fn apply_root(&self, rs: &RootSystem, r: &[i32]) -> Root {
        let mut out = r.to_vec();
        for &i in self.word.iter().rev() {
            out = rs.reflect_simple(i, &out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == linalg::identity(self.matrix.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(rs: &RootSystem, r: &[i32]) -> usize {
        rs.index_of(r).unwrap()
    }

    #[test]
    fn root_counts() {
        let cases = [
            ("A1", 2),
            ("A3", 12),
            ("B2", 8),
            ("B3", 18),
            ("C3", 18),
            ("D4", 24),
            ("E6", 72),
            ("E7", 126),
            ("E8", 240),
            ("F4", 48),
            ("G2", 12),
            ("B2xA1", 10),
        ];
        for (t, n) in cases {
            assert_eq!(RootSystem::parse(t).unwrap().num_roots(), n, "{t}");
        }
    }

    #[test]
    fn invalid_types_rejected() {
        for t in ["A0", "B1", "C2", "D3", "E5", "E9", "F3", "G3", "H3", "Z2", ""] {
            assert!(RootSystem::parse(t).is_err(), "{t}");
        }
    }

    #[test]
    fn highest_roots() {
        let h = |t: &str| {
            let rs = RootSystem::parse(t).unwrap();
            rs.root(rs.highest_root().unwrap()).clone()
        };
        assert_eq!(h("A3"), vec![1, 1, 1]);
        assert_eq!(h("G2"), vec![3, 2]);
        assert_eq!(h("E8"), vec![2, 3, 4, 6, 5, 4, 3, 2]);
        assert_eq!(h("B3"), vec![1, 2, 2]);
        assert_eq!(h("C3"), vec![2, 2, 1]);
        assert_eq!(h("F4"), vec![2, 3, 4, 2]);
        assert_eq!(h("D5"), vec![1, 2, 2, 1, 1]);
        assert!(RootSystem::parse("A1xA1").unwrap().highest_root().is_err());
    }

    #[test]
    fn root_strings() {
        let a2 = RootSystem::parse("A2").unwrap();
        assert_eq!(a2.root_string(0, 1).unwrap(), (0, 1));
        let g2 = RootSystem::parse("G2").unwrap();
        assert_eq!(g2.root_string(0, 1).unwrap(), (0, 3));
        assert!(g2.root_string(0, 0).is_err());
        assert!(g2.root_string(0, g2.negate(0)).is_err());
    }

    #[test]
    fn bourbaki_lengths() {
        let b2 = RootSystem::parse("B2").unwrap();
        assert_eq!(b2.norm(0), 2);
        assert_eq!(b2.norm(1), 1);
        let g2 = RootSystem::parse("G2").unwrap();
        assert_eq!(g2.norm(0), 1);
        assert_eq!(g2.norm(1), 3);
        assert_eq!(g2.cartan(), &[vec![2, -3], vec![-1, 2]]);
    }

    #[test]
    fn highest_root_dominates_and_is_maximal() {
        for t in ["A4", "B4", "C4", "D5", "E6", "E7", "E8", "F4", "G2"] {
            let rs = RootSystem::parse(t).unwrap();
            let h = rs.highest_root().unwrap();
            for i in 0..rs.num_positive() {
                assert!(rs.root(i).iter().zip(rs.root(h)).all(|(a, b)| a <= b), "{t}");
                if i != h {
                    let sum: Root = rs.root(i).iter().zip(rs.root(h)).map(|(a, b)| a + b).collect();
                    assert!(!rs.is_root(&sum));
                }
            }
        }
    }

    #[test]
    fn coweights_dual_to_simple_roots() {
        for t in ["A3", "B3", "G2", "F4", "E6"] {
            let rs = RootSystem::parse(t).unwrap();
            let w = rs.coweight_basis();
            let n = rs.rank();
            for i in 0..n {
                for k in 0..n {
                    // ⟨ϖ_i, α_k⟩ = Σ_j W[i][j] ⟨α_j^∨, α_k⟩
                    let v: Q = (0..n).map(|j| w[i][j] * rs.cartan()[j][k]).sum();
                    assert_eq!(v, linalg::q(i64::from(i == k)));
                }
            }
        }
    }

    #[test]
    fn orbit_examples() {
        let a2 = RootSystem::parse("A2").unwrap();
        let o = a2.weyl_orbit(&[0, 1], &linalg::to_q(&[1, 0]), Space::Roots).unwrap();
        assert_eq!(o.len(), 6);
        let b2 = RootSystem::parse("B2").unwrap();
        let o = b2.weyl_orbit(&[0], &linalg::to_q(&[0, 1]), Space::Coweights).unwrap();
        assert_eq!(o.len(), 1);
    }

    #[test]
    fn weyl_group_orders() {
        for (t, n) in [("A2", 6), ("B2", 8), ("G2", 12), ("A3", 24), ("B3", 48)] {
            assert_eq!(RootSystem::parse(t).unwrap().weyl_group().unwrap().len(), n);
        }
    }

    #[test]
    fn reducible_blocks() {
        let rs = RootSystem::parse("B2xA1").unwrap();
        assert_eq!(rs.rank(), 3);
        assert_eq!(rs.cartan()[0][2], 0);
        assert_eq!(rs.component_of(idx(&rs, &[0, 0, 1])), 1);
        assert_eq!(rs.root(rs.highest_root_of(0)), &vec![1, 2, 0]);
    }
}
