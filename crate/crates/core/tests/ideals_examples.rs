use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sectorial::ffield::{parse_ratfunc, rr_dim, Fq, FracIdeal, GaloisField, RatFunc};
use sectorial::ideals::*;
use sectorial::ratmat::{self, RatMat};

fn rf(f: &Fq, s: &str) -> RatFunc {
    parse_ratfunc(f, s).unwrap()
}

fn mat(f: &Fq, rows: &[&[&str]]) -> RatMat {
    rows.iter().map(|r| r.iter().map(|s| rf(f, s)).collect()).collect()
}

fn sl2_h(f: &Fq, x: &RatFunc) -> RatMat {
    vec![
        vec![RatFunc::zero(f), -&RatFunc::one(f)],
        vec![RatFunc::one(f), -x],
    ]
}

/// `A ∩ Ax⁻¹ ∩ Ax⁻²` by ideal arithmetic.
fn expected_sl2(f: &Fq, x: &RatFunc) -> FracIdeal {
    let a = FracIdeal::unit(f);
    if x.is_zero() {
        return a;
    }
    let xi = FracIdeal::new(&x.inv().unwrap()).unwrap();
    a.intersect(&xi).intersect(&xi.pow(2))
}

fn window_members(f: &Fq, ideal: &FracIdeal, lo: i64, hi: i64) -> usize {
    let width = (hi - lo + 1) as u32;
    let q = f.q() as usize;
    (0..q.pow(width))
        .filter(|&v| {
            let mut r = v;
            let c: Vec<u8> = (0..width)
                .map(|_| {
                    let d = (r % q) as u8;
                    r /= q;
                    d
                })
                .collect();
            ideal.contains(&ratmat::laurent(f, lo, &c))
        })
        .count()
}

#[test]
fn sl2_example_matches_ideal_formula() {
    let alpha = SlRoot::new(0, 1).unwrap();
    for q in [2, 3] {
        let f = GaloisField::new(q).unwrap();
        for s in ["t", "1", "0", "1/t", "1/t^2", "t+1", "(t+1)/t", "1/(t^2+1)"] {
            let x = rf(&f, s);
            let ctx = ConjContext::new(sl2_h(&f, &x)).unwrap();
            let want = expected_sl2(&f, &x);
            assert_eq!(lower_ideal(&ctx, alpha).unwrap(), want, "x = {s}");
            let brute = m_psi_bruteforce(&ctx, &[alpha], -2, 3).unwrap();
            assert!(brute.iter().all(|y| want.contains(&y[0])));
            assert_eq!(brute.len(), window_members(&f, &want, -2, 3), "x = {s}");
            let rep = sandwich(&ctx, &[alpha], (-2, 3)).unwrap();
            assert!(rep.holds(), "{rep:?}");
        }
    }
    let f = GaloisField::new(2).unwrap();
    let ctx = ConjContext::new(sl2_h(&f, &rf(&f, "t"))).unwrap();
    assert_eq!(lower_ideal(&ctx, alpha).unwrap(), FracIdeal::unit(&f));
    let ctx = ConjContext::new(sl2_h(&f, &rf(&f, "1/t"))).unwrap();
    assert_eq!(lower_ideal(&ctx, alpha).unwrap(), FracIdeal::t_pow(&f, 2));
}

#[test]
fn sl2_random_x_matches_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let alpha = SlRoot::new(0, 1).unwrap();
    for _ in 0..60 {
        let f = GaloisField::new([2, 3, 4, 5][rng.gen_range(0..4)]).unwrap();
        let num = random_laurent(&f, 2, &mut rng);
        let den = random_laurent(&f, 1, &mut rng);
        let x = if den.is_zero() { num } else { &num / &den };
        let ctx = ConjContext::new(sl2_h(&f, &x)).unwrap();
        assert_eq!(lower_ideal(&ctx, alpha).unwrap(), expected_sl2(&f, &x), "x = {x}");
    }
}

fn sl3_example(f: &Fq) -> ConjContext {
    let nw = mat(f, &[&["0", "0", "1"], &["0", "-1", "0"], &["1", "0", "0"]]);
    let u = mat(f, &[&["1", "0", "1/t"], &["0", "1", "1/t"], &["0", "0", "1"]]);
    ConjContext::new(ratmat::mul(&nw, &u)).unwrap()
}

#[test]
fn sl3_example_is_not_a_product() {
    for q in [2, 3] {
        let f = GaloisField::new(q).unwrap();
        let ctx = sl3_example(&f);
        let psi = [SlRoot::new(0, 1).unwrap(), SlRoot::new(0, 2).unwrap()];
        let (lo, hi) = if q == 2 { (-2, 3) } else { (-1, 2) };
        let brute = m_psi_bruteforce(&ctx, &psi, lo, hi).unwrap();
        let tq = FracIdeal::t_pow(&f, 1);
        let t2 = FracIdeal::t_pow(&f, 2);
        // Independent description: x, z ∈ tA and x − z ∈ t²A.
        let mut expected = 0;
        let elems: Vec<RatFunc> = {
            let width = (hi - lo + 1) as u32;
            let qq = q as usize;
            (0..qq.pow(width))
                .map(|v| {
                    let mut r = v;
                    let c: Vec<u8> = (0..width)
                        .map(|_| {
                            let d = (r % qq) as u8;
                            r /= qq;
                            d
                        })
                        .collect();
                    ratmat::laurent(&f, lo, &c)
                })
                .collect()
        };
        for x in &elems {
            for z in &elems {
                let inside = tq.contains(x) && tq.contains(z) && t2.contains(&(x - z));
                assert_eq!(inside, ctx.is_member(&psi, &[x.clone(), z.clone()]), "x = {x}, z = {z}");
                expected += usize::from(inside);
            }
        }
        assert_eq!(brute.len(), expected);
        assert!(!ctx.is_member(&psi, &[rf(&f, "t^2+t"), rf(&f, "t^2")]));
        assert!(ctx.is_member(&psi, &[rf(&f, "t^2+t"), rf(&f, "t^2+t")]));
        // Both projections are all of tA on the window.
        for k in 0..2 {
            let proj: std::collections::HashSet<&RatFunc> = brute.iter().map(|y| &y[k]).collect();
            let want = elems.iter().filter(|x| tq.contains(x)).count();
            assert_eq!(proj.len(), want);
        }
        let rep = sandwich(&ctx, &psi, (lo, hi)).unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert!(rep.psi_additive);
        let up = upper_ideals(&ctx);
        for a in &psi {
            assert!(tq.is_subset_of(&up[a]));
        }
    }
}

#[test]
fn random_sandwich() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let n = rng.gen_range(2..=3);
        let f = GaloisField::new(rng.gen_range(2..=3)).unwrap();
        let ctx = ConjContext::new(random_h(&f, n, 2, &mut rng).unwrap()).unwrap();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let a = SlRoot::new(i, j).unwrap();
                let (lo, hi) = default_window(&ctx, &[a]).unwrap();
                let lo = lo.max(hi - 5);
                let rep = sandwich(&ctx, &[a], (lo, hi)).unwrap();
                assert!(rep.holds(), "{rep:?}");
            }
        }
        if n == 3 {
            let psi = [SlRoot::new(0, 1).unwrap(), SlRoot::new(0, 2).unwrap()];
            let (lo, hi) = default_window(&ctx, &psi).unwrap();
            let lo = lo.max(hi - 2);
            let rep = sandwich(&ctx, &psi, (lo, hi)).unwrap();
            assert!(rep.holds(), "{rep:?}");
            assert!(rep.psi_additive);
        }
    }
}

#[test]
fn v_dim_properties() {
    let f = GaloisField::new(2).unwrap();
    let alpha = SlRoot::new(0, 1).unwrap();
    // J_α(h) = (t²) for x = 1/t; dims follow Riemann–Roch.
    let ctx = ConjContext::new(sl2_h(&f, &rf(&f, "1/t"))).unwrap();
    let j = lower_ideal(&ctx, alpha).unwrap();
    let mut prev = None;
    for m in 2..8 {
        let d = v_dim(&ctx, &[alpha], &[-m]).unwrap();
        assert_eq!(d as i64, rr_dim(j.degree(), m, 0, 1).unwrap());
        if let Some(p) = prev {
            assert!(d > p);
        }
        prev = Some(d);
    }
    let ctx = sl3_example(&f);
    let psi = [SlRoot::new(0, 1).unwrap(), SlRoot::new(0, 2).unwrap()];
    for z0 in -3..=0 {
        for z1 in -3..=0 {
            let d = v_dim(&ctx, &psi, &[z0, z1]).unwrap();
            assert!(v_dim(&ctx, &psi, &[z0 + 1, z1]).unwrap() <= d);
            assert!(v_dim(&ctx, &psi, &[z0, z1 + 1]).unwrap() <= d);
        }
    }
    // x, z ∈ tA of degree ≤ 3 with x ≡ z mod t²: 3 + 3 − 1 = 5.
    assert_eq!(v_dim(&ctx, &psi, &[-3, -3]).unwrap(), 5);
}

#[test]
fn poly_ideal_lower_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = GaloisField::new(3).unwrap();
    for _ in 0..30 {
        let r = rng.gen_range(1..=2);
        let mut polys = Vec::new();
        let mut ideals = Vec::new();
        for _ in 0..r {
            let deg = rng.gen_range(1..=3);
            let mut p = vec![RatFunc::zero(&f)];
            for _ in 0..deg {
                let num = random_laurent(&f, 1, &mut rng);
                p.push(num);
            }
            polys.push(p);
            let g = loop {
                let g = random_laurent(&f, 1, &mut rng);
                if !g.is_zero() {
                    break g;
                }
            };
            ideals.push(FracIdeal::new(&g).unwrap());
        }
        let j = poly_ideal_lower(&f, &polys, &ideals).unwrap();
        assert!(j.is_integral());
        for y in sectorial::ffield::truncated_basis(&j, j.degree() + 3) {
            for (p, ideal) in polys.iter().zip(&ideals) {
                assert!(ideal.contains(&eval_poly(p, &y)), "P = {p:?}, y = {y}");
            }
        }
        if r == 2 {
            let single: Vec<FracIdeal> = (0..2)
                .map(|i| poly_ideal_lower(&f, &polys[i..=i], &ideals[i..=i]).unwrap())
                .collect();
            assert_eq!(j, single[0].intersect(&single[1]));
        }
    }
}

#[test]
fn oversized_search_is_rejected() {
    let f = GaloisField::new(5).unwrap();
    let ctx = ConjContext::new(ratmat::identity(&f, 3)).unwrap();
    let psi = [SlRoot::new(0, 1).unwrap(), SlRoot::new(0, 2).unwrap()];
    assert!(matches!(m_psi_bruteforce(&ctx, &psi, -5, 5), Err(sectorial::Error::TooLarge(_))));
}
