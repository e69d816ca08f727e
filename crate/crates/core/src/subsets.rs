//! Subsets of positive roots: closure and commutation conditions, the
//! parabolic subsets `Ψ(Θ)`, complete flags and explicit maximal bases.

use crate::error::{invalid, precondition, Result};
use crate::linalg::{self, Q};
use crate::rootsys::{Family, Root, RootSystem};
use num_traits::{Signed, Zero};

/// Truth values of the conditions on a subset `Ψ ⊆ Φ⁺`.
///
/// * `c0`: Ψ is closed under addition inside Φ.
/// * `c1`: for `α ∈ Φ⁺`, `β ∈ Ψ`, `α + β ∈ Φ ⇒ α + β ∈ Ψ`.
/// * `c2`: for `β, γ ∈ Ψ`, `β + γ ∉ Φ`.
/// * `c1_prime`: as `c1` for every `rα + sβ` with `r, s ≥ 1`.
/// * `c2_prime`: as `c2` for every `rβ + sγ` with `r, s ≥ 1`.
/// * `c1_second`: `rα + sβ ∈ Φ ⇒ rα + sβ ∈ Ψ` and `s = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ConditionReport {
    pub c0: bool,
    pub c1: bool,
    pub c2: bool,
    pub c1_prime: bool,
    pub c2_prime: bool,
    pub c1_second: bool,
}

fn check_positive(rs: &RootSystem, psi: &[usize]) -> Result<()> {
    for &b in psi {
        if b >= rs.num_roots() {
            return invalid(format!("root index {b} out of range"));
        }
        if !rs.is_positive(b) {
            return precondition(format!("{:?} is not a positive root", rs.root(b)));
        }
    }
    Ok(())
}

pub fn check_conditions(rs: &RootSystem, psi: &[usize]) -> Result<ConditionReport> {
    check_positive(rs, psi)?;
    let mut member = vec![false; rs.num_roots()];
    for &b in psi {
        member[b] = true;
    }
    let bound = rs.max_string_coefficient();
    let pos = 0..rs.num_positive();

    let c0 = psi
        .iter()
        .all(|&b| psi.iter().all(|&g| rs.add(b, g).is_none_or(|s| member[s])));
    let c1 = pos
        .clone()
        .all(|a| psi.iter().all(|&b| rs.add(a, b).is_none_or(|s| member[s])));
    let c2 = psi.iter().all(|&b| psi.iter().all(|&g| rs.add(b, g).is_none()));
    let mut c1_prime = true;
    let mut c1_second = true;
    for a in pos {
        for &b in psi {
            for r in 1..=bound {
                for s in 1..=bound {
                    if let Some(x) = rs.combine(r, a, s, b) {
                        if !member[x] {
                            c1_prime = false;
                            c1_second = false;
                        }
                        if s != 1 {
                            c1_second = false;
                        }
                    }
                }
            }
        }
    }
    let c2_prime = psi.iter().all(|&b| {
        psi.iter()
            .all(|&g| (1..=bound).all(|r| (1..=bound).all(|s| rs.combine(r, b, s, g).is_none())))
    });
    Ok(ConditionReport { c0, c1, c2, c1_prime, c2_prime, c1_second })
}

/// The order on `Φ⁺` generated by `β < β + α_i` whenever both are roots.
#[derive(Debug, Clone)]
pub struct RootPoset {
    above: Vec<u128>,
}

impl RootPoset {
    pub fn new(rs: &RootSystem) -> RootPoset {
        let n = rs.num_positive();
        assert!(n <= 128, "root poset supports at most 128 positive roots");
        let mut above = vec![0u128; n];
        // Positive roots are sorted by height, so process from the top down.
        for b in (0..n).rev() {
            let mut mask = 1u128 << b;
            for i in 0..rs.rank() {
                if let Some(c) = rs.add(b, rs.simple(i)) {
                    mask |= above[c];
                }
            }
            above[b] = mask;
        }
        RootPoset { above }
    }

    /// `a ≤ b` in the root poset.
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.above[a] >> b & 1 == 1
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }
}

/// Orders Ψ so that `α_i < α_j ⇒ i > j`: height descending, ties broken
/// lexicographically on coordinates.
pub fn c3_numbering(rs: &RootSystem, psi: &[usize]) -> Vec<usize> {
    let mut v = psi.to_vec();
    v.sort_by(|&a, &b| rs.height(b).cmp(&rs.height(a)).then_with(|| rs.root(a).cmp(rs.root(b))));
    v.dedup();
    v
}

/// Whether an ordered list satisfies the numbering condition.
pub fn is_c3_numbering(rs: &RootSystem, ordered: &[usize]) -> bool {
    let poset = RootPoset::new(rs);
    for (i, &a) in ordered.iter().enumerate() {
        for &b in &ordered[i + 1..] {
            // a precedes b, so b < a must not fail: a < b is forbidden.
            if poset.lt(a, b) {
                return false;
            }
        }
    }
    true
}

fn check_theta(rs: &RootSystem, theta: &[usize]) -> Result<()> {
    if let Some(&t) = theta.iter().find(|&&t| t >= rs.rank()) {
        return invalid(format!("simple root index {t} out of range"));
    }
    Ok(())
}

/// `Ψ(Θ)` inside component `c`: roots of the component whose coordinates on
/// the simple roots outside Θ agree with those of the highest root.
pub fn psi_theta_component(rs: &RootSystem, c: usize, theta: &[usize]) -> Result<Vec<usize>> {
    check_theta(rs, theta)?;
    let comp = rs.components()[c];
    let free: Vec<usize> = comp.simple_range().filter(|k| !theta.contains(k)).collect();
    if free.is_empty() {
        return precondition("Θ must be a proper subset of the simple roots");
    }
    let h = rs.root(rs.highest_root_of(c)).clone();
    let out: Vec<usize> = (0..rs.num_positive())
        .filter(|&i| rs.component_of(i) == c && free.iter().all(|&k| rs.root(i)[k] == h[k]))
        .collect();
    Ok(c3_numbering(rs, &out))
}

/// `Ψ(Θ)` for an irreducible root system; Θ is a list of simple-root indices.
pub fn psi_theta(rs: &RootSystem, theta: &[usize]) -> Result<Vec<usize>> {
    if !rs.is_irreducible() {
        return precondition("psi_theta requires an irreducible root system; use psi_theta_component");
    }
    psi_theta_component(rs, 0, theta)
}

/// The subsets `Ψ_1 ⊊ … ⊊ Ψ_m`, `m = |Δ ∖ Θ|`, obtained by enlarging Θ one
/// simple root at a time (the first simple root that enlarges `Ψ`), component
/// by component.
pub fn psi_flag(rs: &RootSystem, theta: &[usize]) -> Result<Vec<Vec<usize>>> {
    check_theta(rs, theta)?;
    let mut flag: Vec<Vec<usize>> = Vec::new();
    let mut done: Vec<usize> = Vec::new();
    for (c, comp) in rs.components().iter().enumerate() {
        let mut th: Vec<usize> = comp.simple_range().filter(|k| theta.contains(k)).collect();
        let m = comp.rank - th.len();
        if m == 0 {
            continue;
        }
        let mut cur = psi_theta_component(rs, c, &th)?;
        for step in 0..m {
            let mut level = done.clone();
            level.extend(&cur);
            flag.push(c3_numbering(rs, &level));
            if step + 1 == m {
                break;
            }
            let mut next = None;
            for a in comp.simple_range().filter(|k| !th.contains(k)) {
                let mut t2 = th.clone();
                t2.push(a);
                let cand = psi_theta_component(rs, c, &t2)?;
                if cand.len() > cur.len() {
                    next = Some((a, cand));
                    break;
                }
            }
            let Some((a, cand)) = next else {
                return Err(crate::Error::Internal("no simple root enlarges Ψ(Θ)".into()));
            };
            th.push(a);
            cur = cand;
        }
        done.extend(cur);
    }
    Ok(flag)
}

/// Coordinates of a root on the simple roots outside Θ: its restriction to `Θ^⊥`.
fn restrict(r: &Root, theta: &[usize]) -> Vec<i64> {
    r.iter()
        .enumerate()
        .filter(|(k, _)| !theta.contains(k))
        .map(|(_, &c)| c as i64)
        .collect()
}

/// Checks that a flag from [`psi_flag`] is complete: `dim Vect(Ψ_i|Θ^⊥) = i`,
/// and that on `(Θ ∪ Ψ_{i-1})^⊥` the new roots of `Ψ_i` restrict to positive
/// multiples of one linear form (hence have constant sign).
pub fn check_flag(rs: &RootSystem, theta: &[usize], flag: &[Vec<usize>]) -> Result<()> {
    let n = rs.rank();
    let m = n - theta.iter().filter(|&&t| t < n).count();
    if flag.len() != m {
        return Err(crate::Error::Internal(format!("flag has {} steps, expected {m}", flag.len())));
    }
    let mut prev: Vec<usize> = Vec::new();
    for (i, level) in flag.iter().enumerate() {
        if !prev.iter().all(|p| level.contains(p)) || level.len() <= prev.len() {
            return Err(crate::Error::Internal(format!("step {} is not a strict enlargement", i + 1)));
        }
        let rows: Vec<Vec<i64>> = level.iter().map(|&b| restrict(rs.root(b), theta)).collect();
        if linalg::rank_int(&rows) != i + 1 {
            return Err(crate::Error::Internal(format!("step {} spans the wrong dimension", i + 1)));
        }
        // Basis of {z : z_θ = 0 for θ ∈ Θ, γ(z) = 0 for γ ∈ Ψ_{i-1}}.
        let mut cons: Vec<Vec<Q>> = theta
            .iter()
            .map(|&t| (0..n).map(|k| linalg::q(i64::from(k == t))).collect())
            .collect();
        cons.extend(prev.iter().map(|&g| rs.root(g).iter().map(|&c| linalg::q(c as i64)).collect()));
        let basis = linalg::nullspace(&cons, n);
        let fresh: Vec<usize> = level.iter().copied().filter(|b| !prev.contains(b)).collect();
        let values: Vec<Vec<Q>> = fresh
            .iter()
            .map(|&b| basis.iter().map(|z| rs.eval(b, z)).collect())
            .collect();
        let reference = values
            .iter()
            .find(|v| v.iter().any(|x| !x.is_zero()))
            .ok_or_else(|| crate::Error::Internal("new roots vanish on the complement".into()))?;
        let k = reference.iter().position(|x| !x.is_zero()).unwrap();
        for v in &values {
            let ratio = v[k] / reference[k];
            if !ratio.is_positive() || v.iter().zip(reference).any(|(a, b)| *a != *b * ratio) {
                return Err(crate::Error::Internal(format!(
                    "step {}: new roots are not positively proportional on the complement",
                    i + 1
                )));
            }
        }
        prev = level.clone();
    }
    Ok(())
}

fn basis_vectors(family: Family, l: usize) -> Vec<Vec<i32>> {
    let sum = |range: std::ops::RangeInclusive<usize>| {
        let mut v = vec![0; l];
        for k in range {
            v[k - 1] += 1;
        }
        v
    };
    let plus = |a: Vec<i32>, b: Vec<i32>| a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>();
    let digits = |rows: &[&str]| {
        rows.iter()
            .map(|s| s.bytes().map(|b| (b - b'0') as i32).collect())
            .collect::<Vec<Vec<i32>>>()
    };
    match family {
        Family::A => (1..=l).map(|i| sum(i..=l)).collect(),
        Family::B => (2..=l + 1)
            .map(|i| if i <= l { plus(sum(1..=l), sum(i..=l)) } else { sum(1..=l) })
            .collect(),
        Family::C => (1..=l)
            .map(|i| if i < l { plus(sum(1..=l), sum(i..=l - 1)) } else { sum(1..=l) })
            .collect(),
        Family::D => {
            let mut v = vec![sum(1..=l - 1)];
            v.extend((2..=l - 1).map(|i| {
                if i <= l - 2 {
                    plus(sum(1..=l), sum(i..=l - 2))
                } else {
                    sum(1..=l)
                }
            }));
            v.push(plus(sum(1..=l - 2), sum(l..=l)));
            v
        }
        Family::E => match l {
            6 => digits(&["011221", "112211", "111221", "112221", "112321", "122321"]),
            7 => digits(&["1223211", "1123321", "1223221", "1223321", "1224321", "1234321", "2234321"]),
            _ => digits(&[
                "23354321", "22454321", "23454321", "23464321", "23465321", "23465421", "23465431", "23465432",
            ]),
        },
        Family::F => digits(&["1232", "1242", "1342", "2342"]),
        Family::G => vec![vec![3, 1], vec![3, 2]],
    }
}

/// An explicit subset with `|Ψ| = rank` satisfying C1 and C2 and spanning the
/// ambient space, built componentwise.
pub fn psi_basis(rs: &RootSystem) -> Vec<usize> {
    let n = rs.rank();
    let mut out = Vec::new();
    for comp in rs.components() {
        for v in basis_vectors(comp.family, comp.rank) {
            let mut r = vec![0; n];
            r[comp.offset..comp.offset + comp.rank].copy_from_slice(&v);
            out.push(rs.index_of(&r).expect("basis vector is a root"));
        }
    }
    c3_numbering(rs, &out)
}

/// Enumerates every proper subset Θ of the simple roots of an irreducible system.
pub fn proper_thetas(rank: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << rank) - 1)
        .map(|mask| (0..rank).filter(|&k| mask >> k & 1 == 1).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(rs: &RootSystem, roots: &[&[i32]]) -> Vec<usize> {
        roots.iter().map(|r| rs.index_of(r).unwrap()).collect()
    }

    fn coords(rs: &RootSystem, v: &[usize]) -> Vec<Vec<i32>> {
        v.iter().map(|&i| rs.root(i).clone()).collect()
    }

    #[test]
    fn empty_subset_satisfies_everything() {
        let rs = RootSystem::parse("B3").unwrap();
        let r = check_conditions(&rs, &[]).unwrap();
        assert!(r.c0 && r.c1 && r.c2 && r.c1_prime && r.c2_prime && r.c1_second);
    }

    #[test]
    fn b2_short_counterexample_breaks_c2() {
        // α short: α2 in Bourbaki numbering.
        let rs = RootSystem::parse("B2").unwrap();
        let psi = ids(&rs, &[&[0, 1], &[1, 1]]);
        let r = check_conditions(&rs, &psi).unwrap();
        assert!(!r.c2);
    }

    #[test]
    fn g2_counterexample_breaks_c1_only() {
        let rs = RootSystem::parse("G2").unwrap();
        let psi = ids(&rs, &[&[2, 1], &[3, 2]]);
        let r = check_conditions(&rs, &psi).unwrap();
        assert!(r.c2);
        assert!(!r.c1);
    }

    #[test]
    fn negative_roots_rejected() {
        let rs = RootSystem::parse("A2").unwrap();
        assert!(check_conditions(&rs, &[rs.negate(0)]).is_err());
    }

    #[test]
    fn psi_theta_examples() {
        let a2 = RootSystem::parse("A2").unwrap();
        assert_eq!(coords(&a2, &psi_theta(&a2, &[0]).unwrap()), vec![vec![1, 1], vec![0, 1]]);
        let g2 = RootSystem::parse("G2").unwrap();
        assert_eq!(coords(&g2, &psi_theta(&g2, &[1]).unwrap()), vec![vec![3, 2], vec![3, 1]]);
        assert!(psi_theta(&a2, &[0, 1]).is_err());
        let h = psi_theta(&a2, &[]).unwrap();
        assert_eq!(coords(&a2, &h), vec![vec![1, 1]]);
    }

    #[test]
    fn psi_basis_matches_tables() {
        let e8 = RootSystem::parse("E8").unwrap();
        let b = psi_basis(&e8);
        assert_eq!(e8.root(b[0]), &vec![2, 3, 4, 6, 5, 4, 3, 2]);
        let b3 = RootSystem::parse("B3").unwrap();
        let mut got = coords(&b3, &psi_basis(&b3));
        got.sort();
        assert_eq!(got, vec![vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 2]]);
    }

    #[test]
    fn numbering_respects_poset() {
        let rs = RootSystem::parse("F4").unwrap();
        let all: Vec<usize> = (0..rs.num_positive()).collect();
        assert!(is_c3_numbering(&rs, &c3_numbering(&rs, &all)));
        let a2 = RootSystem::parse("A2").unwrap();
        assert!(!is_c3_numbering(&a2, &ids(&a2, &[&[0, 1], &[1, 1]])));
    }

    #[test]
    fn poset_matches_dominance_on_small_types() {
        for t in ["A3", "B3", "C3", "G2"] {
            let rs = RootSystem::parse(t).unwrap();
            let p = RootPoset::new(&rs);
            for a in 0..rs.num_positive() {
                for b in 0..rs.num_positive() {
                    let dom = rs.root(a).iter().zip(rs.root(b)).all(|(x, y)| x <= y);
                    assert_eq!(p.le(a, b), dom, "{t}");
                }
            }
        }
    }

    #[test]
    fn flags_are_complete() {
        for t in ["A3", "B3", "C3", "D4", "G2", "F4", "B2xA1"] {
            let rs = RootSystem::parse(t).unwrap();
            for theta in proper_thetas(rs.rank()) {
                let flag = psi_flag(&rs, &theta).unwrap();
                check_flag(&rs, &theta, &flag).unwrap();
            }
        }
    }
}
