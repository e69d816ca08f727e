use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sectorial::chevalley::{collect, conjugation_polynomials, Fp, StructureConstants};
use sectorial::mpoly::MPoly;
use sectorial::rootsys::RootSystem;
use sectorial::subsets::{self, psi_basis, psi_theta};

type Mat = Vec<Vec<u64>>;

fn mat_mul(a: &Mat, b: &Mat, p: u64) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum::<u64>() % p).collect())
        .collect()
}

fn ident(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

/// SL_{l+1} realisation of a type A_l root system with signs matched to the
/// computed structure constants: `e_{ε_i − ε_j} ↦ sign · E_ij`.
struct TypeA {
    sc: StructureConstants,
    n: usize,
    /// root index → (i, j, sign)
    emb: Vec<(usize, usize, i64)>,
}

impl TypeA {
    fn new(l: usize) -> TypeA {
        let rs = RootSystem::parse(&format!("A{l}")).unwrap();
        let sc = StructureConstants::new(&rs);
        let n = l + 1;
        let mut emb = vec![(0, 0, 0); rs.num_roots()];
        let mut sign = vec![vec![0i64; n]; n];
        for d in 1..n {
            for i in 0..n - d {
                let j = i + d;
                let mut r = vec![0; l];
                for k in i..j {
                    r[k] = 1;
                }
                let a = rs.index_of(&r).unwrap();
                let s = if j == i + 1 {
                    1
                } else {
                    let mut r1 = vec![0; l];
                    for k in i..j - 1 {
                        r1[k] = 1;
                    }
                    let a1 = rs.index_of(&r1).unwrap();
                    let a2 = j - 1; // simple root α_{j-1} sits at index j-1
                    sign[i][j - 1] * sign[j - 1][j] * sc.n(a1, a2)
                };
                sign[i][j] = s;
                emb[a] = (i, j, s);
                emb[rs.negate(a)] = (j, i, s);
            }
        }
        TypeA { sc, n, emb }
    }

    fn theta(&self, a: usize, x: i64, p: u64) -> Mat {
        let (i, j, s) = self.emb[a];
        let mut m = ident(self.n);
        m[i][j] = (s * x).rem_euclid(p as i64) as u64;
        m
    }
}

#[test]
fn type_a_signs_give_a_lie_algebra_homomorphism() {
    for l in 2..=4 {
        let ta = TypeA::new(l);
        let rs = ta.sc.root_system();
        for a in 0..rs.num_roots() {
            for b in 0..rs.num_roots() {
                if a == b || a == rs.negate(b) {
                    continue;
                }
                // [s1 E_ij, s2 E_kl] computed in matrices, compared with N.
                let (i, j, s1) = ta.emb[a];
                let (k, m, s2) = ta.emb[b];
                let mut expect = 0i64;
                let mut target = None;
                if j == k {
                    expect += s1 * s2;
                    target = Some((i, m));
                }
                if m == i {
                    expect -= s1 * s2;
                    target = Some((k, j));
                }
                match rs.add(a, b) {
                    Some(g) => {
                        let (gi, gj, gs) = ta.emb[g];
                        assert_eq!(target, Some((gi, gj)));
                        assert_eq!(expect, ta.sc.n(a, b) * gs);
                    }
                    None => assert_eq!(expect, 0),
                }
            }
        }
    }
}

#[test]
fn type_a_group_commutators_match_matrices() {
    let p = 5u64;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for l in 2..=4 {
        let ta = TypeA::new(l);
        let rs = ta.sc.root_system();
        for _ in 0..100 {
            let a = rng.gen_range(0..rs.num_roots());
            let b = rng.gen_range(0..rs.num_roots());
            if a == b || a == rs.negate(b) {
                continue;
            }
            let (x, y) = (rng.gen_range(0..5i64), rng.gen_range(0..5i64));
            let ta_ = ta.theta(a, x, p);
            let tb = ta.theta(b, y, p);
            let lhs = mat_mul(
                &mat_mul(&mat_mul(&ta_, &tb, p), &ta.theta(a, -x, p), p),
                &ta.theta(b, -y, p),
                p,
            );
            let mut rhs = ident(ta.n);
            for t in ta.sc.commutator(a, b).unwrap() {
                let v = t.c * x.pow(t.r as u32) * y.pow(t.s as u32);
                rhs = mat_mul(&rhs, &ta.theta(t.root, v, p), p);
            }
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn type_a_collection_matches_matrix_products() {
    let p = 5u64;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for l in 2..=4 {
        let ta = TypeA::new(l);
        let rs = ta.sc.root_system();
        let np = rs.num_positive();
        for _ in 0..40 {
            let len = rng.gen_range(1..8);
            let word: Vec<(usize, Fp)> = (0..len)
                .map(|_| (rng.gen_range(0..np), Fp::new(rng.gen_range(0..5), p)))
                .collect();
            let mut order: Vec<usize> = (0..np).collect();
            for i in (1..np).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let nf = collect(&ta.sc, &word, &order).unwrap();
            let eval = |w: &[(usize, Fp)]| {
                w.iter().fold(ident(ta.n), |m, (a, x)| mat_mul(&m, &ta.theta(*a, x.v as i64, p), p))
            };
            assert_eq!(eval(&word), eval(&nf));
            let positions: Vec<usize> = nf.iter().map(|(a, _)| order.iter().position(|b| b == a).unwrap()).collect();
            assert!(positions.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn type_a_conjugation_polynomials_match_matrices() {
    let p = 3u64;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for l in 2..=3 {
        let ta = TypeA::new(l);
        let rs = ta.sc.root_system();
        let mut families = vec![psi_basis(rs)];
        for th in subsets::proper_thetas(l) {
            families.push(psi_theta(rs, &th).unwrap());
        }
        for psi in families {
            let table = conjugation_polynomials(&ta.sc, &psi).unwrap();
            for _ in 0..100 {
                let x: Vec<u64> = (0..table.order.len()).map(|_| rng.gen_range(0..p)).collect();
                let y: Vec<u64> = (0..psi.len()).map(|_| rng.gen_range(0..p)).collect();
                let mut u = ident(ta.n);
                let mut uinv = ident(ta.n);
                for (nn, &a) in table.order.iter().enumerate().rev() {
                    u = mat_mul(&u, &ta.theta(a, x[nn] as i64, p), p);
                }
                for (nn, &a) in table.order.iter().enumerate() {
                    uinv = mat_mul(&uinv, &ta.theta(a, -(x[nn] as i64), p), p);
                }
                let mut v = ident(ta.n);
                for (i, &a) in psi.iter().enumerate() {
                    v = mat_mul(&v, &ta.theta(a, y[i] as i64, p), p);
                }
                let lhs = mat_mul(&mat_mul(&u, &v, p), &uinv, p);
                let mut rhs = ident(ta.n);
                for (j, &a) in psi.iter().enumerate() {
                    let z: u64 = (0..psi.len()).map(|i| table.p[i][j].eval_mod(&x, p) * y[i]).sum::<u64>() % p;
                    rhs = mat_mul(&rhs, &ta.theta(a, z as i64, p), p);
                }
                assert_eq!(lhs, rhs);
            }
        }
    }
}

/// Symbolic cross-check: collecting `u v u⁻¹` with polynomial coefficients
/// reproduces the recursion, in every type of rank at most 3.
#[test]
fn conjugation_polynomials_agree_with_symbolic_collection() {
    for t in ["A2", "A3", "B2", "B3", "C3", "G2", "A1xA1", "B2xA1"] {
        let rs = RootSystem::parse(t).unwrap();
        let sc = StructureConstants::new(&rs);
        let mut families = vec![psi_basis(&rs)];
        if rs.is_irreducible() {
            for th in subsets::proper_thetas(rs.rank()) {
                families.push(psi_theta(&rs, &th).unwrap());
            }
        }
        for psi in families {
            let table = conjugation_polynomials(&sc, &psi).unwrap();
            assert!(table.is_unitriangular(), "{t}");
            let m = table.order.len();
            let mut word: Vec<(usize, MPoly)> = Vec::new();
            for (nn, &a) in table.order.iter().enumerate().rev() {
                word.push((a, MPoly::var(nn)));
            }
            for (i, &a) in psi.iter().enumerate() {
                word.push((a, MPoly::var(m + i)));
            }
            for (nn, &a) in table.order.iter().enumerate() {
                word.push((a, MPoly::var(nn).neg()));
            }
            let nf = collect(&sc, &word, &table.order).unwrap();
            for (a, z) in &nf {
                let j = psi.iter().position(|b| b == a).expect("result stays in Ψ");
                let mut expect = MPoly::zero();
                for i in 0..psi.len() {
                    expect = expect.add(&table.p[i][j].mul(&MPoly::var(m + i)));
                }
                assert_eq!(z, &expect, "{t}");
            }
            assert_eq!(nf.len(), psi.len());
        }
    }
}

#[test]
fn large_types_build() {
    for t in ["E8", "F4", "B8", "C8"] {
        let rs = RootSystem::parse(t).unwrap();
        let sc = StructureConstants::new(&rs);
        let h = rs.highest_root().unwrap();
        let b = psi_basis(&rs);
        let table = conjugation_polynomials(&sc, &b).unwrap();
        assert!(table.is_unitriangular());
        assert!(sc.commutator(h, 0).unwrap().is_empty());
    }
}

/// In the adjoint representation, the factored commutator must act exactly
/// like `θ_α(x) θ_β(y) θ_α(−x) θ_β(−y)` on every basis vector.
#[test]
fn multi_term_commutators_act_correctly_on_the_whole_algebra() {
    use sectorial::linalg::Q as Ratio;
    for t in ["B2", "G2", "B3", "C3"] {
        let rs = RootSystem::parse(t).unwrap();
        let sc = StructureConstants::new(&rs);
        let one = Ratio::from_integer(1);
        for a in 0..rs.num_roots() {
            for b in 0..rs.num_roots() {
                if rs.add(a, b).is_none() {
                    continue;
                }
                let terms = sc.commutator(a, b).unwrap();
                for basis in 0..sc.dim() {
                    let mut e = vec![Ratio::from_integer(0); sc.dim()];
                    e[basis] = one;
                    let v = sc.exp_ad(b, -one, &e);
                    let v = sc.exp_ad(a, -one, &v);
                    let v = sc.exp_ad(b, one, &v);
                    let lhs = sc.exp_ad(a, one, &v);
                    let mut rhs = e.clone();
                    for term in terms.iter().rev() {
                        rhs = sc.exp_ad(term.root, Ratio::from_integer(term.c), &rhs);
                    }
                    assert_eq!(lhs, rhs, "{t}");
                }
            }
        }
    }
}
