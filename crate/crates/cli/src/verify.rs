//! Check rows shared by `subsets verify` and `verify all`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sectorial::apartment::{self, FixedPointNormalizer};
use sectorial::building::{self, CurveSpec};
use sectorial::chevalley::{self, StructureConstants};
use sectorial::ffield::{self, FracIdeal, GaloisField, RatFunc};
use sectorial::ideals::{self, ConjContext, SlRoot};
use sectorial::linalg::{self, Q};
use sectorial::ratmat;
use sectorial::rootsys::RootSystem;
use sectorial::subsets;
use sectorial::Result;

use crate::{CmdResult, Outcome};

pub struct Row {
    pub module: &'static str,
    pub subject: String,
    pub check: String,
    pub pass: bool,
}

fn row(module: &'static str, subject: impl Into<String>, check: impl Into<String>, pass: bool) -> Row {
    Row { module, subject: subject.into(), check: check.into(), pass }
}

pub fn result(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

pub fn theta_label(theta: &[usize]) -> String {
    let t: Vec<String> = theta.iter().map(|k| (k + 1).to_string()).collect();
    format!("[{}]", t.join(";"))
}

/// `(h + Vect(Θ)) ∩ Φ` by filtering all roots; `Θ = Δ` gives `Φ`.
fn affine_slice(rs: &RootSystem, theta: &[usize]) -> Vec<usize> {
    let h = rs.root(rs.highest_root_of(0));
    (0..rs.num_roots())
        .filter(|&i| (0..rs.rank()).all(|k| theta.contains(&k) || rs.root(i)[k] == h[k]))
        .collect()
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

fn w_theta_stable(rs: &RootSystem, theta: &[usize], psi: &[usize]) -> bool {
    theta.iter().all(|&a| {
        psi.iter().all(|&b| {
            let img = rs.reflect_simple(a, rs.root(b));
            rs.index_of(&img).is_some_and(|i| psi.contains(&i))
        })
    })
}

pub fn subset_rows(rs: &RootSystem, all_theta: bool) -> Result<Vec<Row>> {
    let m = "subsets";
    let mut rows = Vec::new();
    let basis = subsets::psi_basis(rs);
    let rep = subsets::check_conditions(rs, &basis)?;
    let coords: Vec<Vec<i64>> = basis.iter().map(|&b| rs.root(b).iter().map(|&c| c as i64).collect()).collect();
    rows.push(row(m, "psi_basis", "C1", rep.c1));
    rows.push(row(m, "psi_basis", "C2", rep.c2));
    rows.push(row(
        m,
        "psi_basis",
        "independent",
        basis.len() == rs.rank() && linalg::rank_int(&coords) == rs.rank(),
    ));
    let order = subsets::c3_numbering(rs, &basis);
    let prefixes_ok = subsets::is_c3_numbering(rs, &order)
        && (1..=order.len()).all(|l| {
            subsets::check_conditions(rs, &order[..l]).is_ok_and(|r| r.c1 && r.c2)
        });
    rows.push(row(m, "psi_basis", "C3_prefixes", prefixes_ok));
    if !all_theta {
        return Ok(rows);
    }
    for theta in subsets::proper_thetas(rs.rank()) {
        let label = theta_label(&theta);
        if rs.is_irreducible() {
            let subject = format!("psi_theta{label}");
            let psi = subsets::psi_theta(rs, &theta)?;
            let rep = subsets::check_conditions(rs, &psi)?;
            rows.push(row(m, &subject, "nonempty", !psi.is_empty()));
            rows.push(row(m, &subject, "definition", sorted(&psi) == affine_slice(rs, &theta)));
            rows.push(row(m, &subject, "C1", rep.c1));
            rows.push(row(m, &subject, "C2", rep.c2));
            rows.push(row(m, &subject, "W_theta_stable", w_theta_stable(rs, &theta, &psi)));
            let base = affine_slice(rs, &theta);
            let enlarges = (0..rs.rank()).filter(|k| !theta.contains(k)).any(|k| {
                let mut bigger = theta.clone();
                bigger.push(k);
                let s = affine_slice(rs, &bigger);
                s.len() > base.len() && base.iter().all(|b| s.contains(b))
            });
            rows.push(row(m, &subject, "strict_enlargement", enlarges));
        }
        let flag = subsets::psi_flag(rs, &theta)?;
        let subject = format!("psi_flag{label}");
        rows.push(row(m, &subject, "length", flag.len() == rs.rank() - theta.len()));
        rows.push(row(m, &subject, "flag", subsets::check_flag(rs, &theta, &flag).is_ok()));
        let stable = flag.iter().all(|p| w_theta_stable(rs, &theta, p));
        rows.push(row(m, &subject, "W_theta_stable", stable));
    }
    Ok(rows)
}

/// Exhaustive comparison of the conditions with their reformulations.
fn equivalence_rows(rs: &RootSystem) -> Result<Vec<Row>> {
    let np = rs.num_positive();
    let (mut e1, mut e2, mut e3) = (true, true, true);
    for mask in 0u32..(1 << np) {
        let psi: Vec<usize> = (0..np).filter(|i| mask >> i & 1 == 1).collect();
        let r = subsets::check_conditions(rs, &psi)?;
        e1 &= r.c1 == r.c1_prime;
        e2 &= r.c2 == r.c2_prime;
        e3 &= !r.c2 || r.c1 == r.c1_second;
    }
    let s = format!("all_subsets_{}", rs.label());
    Ok(vec![
        row("subsets", &s, "C1<=>C1'", e1),
        row("subsets", &s, "C2<=>C2'", e2),
        row("subsets", &s, "C2=>(C1<=>C1'')", e3),
    ])
}

fn chevalley_rows(rs: &RootSystem) -> Result<Vec<Row>> {
    let m = "chevalley";
    let sc = StructureConstants::new(rs);
    let np = rs.num_positive();
    let mut routes = true;
    for a in 0..np {
        for b in 0..np {
            if a == b {
                continue;
            }
            let direct = sc.commutator(a, b)?;
            if direct.is_empty() {
                continue;
            }
            routes &= sc.commutator_by_exponentials(a, b)? == direct;
        }
    }
    let mut rows = vec![row(m, rs.label(), "commutator_routes", routes)];
    let mut sets = vec![("psi_basis".to_string(), subsets::psi_basis(rs))];
    if rs.is_irreducible() {
        for theta in subsets::proper_thetas(rs.rank()) {
            sets.push((format!("psi_theta{}", theta_label(&theta)), subsets::psi_theta(rs, &theta)?));
        }
    }
    let mut tri = true;
    for (_, psi) in &sets {
        tri &= chevalley::conjugation_polynomials(&sc, psi)?.is_unitriangular();
    }
    rows.push(row(m, rs.label(), "conj_unitriangular", tri));
    Ok(rows)
}

fn apartment_rows(rs: &RootSystem, rng: &mut ChaCha8Rng) -> Result<Vec<Row>> {
    let m = "apartment";
    let n = rs.rank();
    let fp = FixedPointNormalizer::new(rs)?;
    let group = rs.weyl_group()?;
    let mut ok = true;
    for _ in 0..10 {
        let w = &group[rng.gen_range(0..group.len())];
        let dm: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| linalg::q(w.matrix[i][j] - i64::from(i == j))).collect())
            .collect();
        let k: Vec<Q> = (0..n).map(|_| linalg::q(rng.gen_range(-4..=4))).collect();
        let mut x = k.clone();
        for kv in linalg::nullspace(&dm, n) {
            let c = Q::new(rng.gen_range(-20..=20), rng.gen_range(1..=7));
            for i in 0..n {
                x[i] += c * kv[i];
            }
        }
        let wk = w.apply(&k);
        let v: Vec<i64> = (0..n).map(|i| (k[i] - wk[i]).to_integer()).collect();
        let z = fp.normalize(rs, w, &v, &x)?;
        let y: Vec<Q> = (0..n).map(|i| x[i] + z[i]).collect();
        let wy = w.apply(&y);
        ok &= w.apply(&z) == z
            && (0..n).all(|i| wy[i] + linalg::q(v[i]) == y[i])
            && apartment::enclosure(rs, &[x.clone()])?.contains(rs, &y)
            && y.iter().all(|c| (*c * linalg::q(fp.e as i64)).is_integer());
    }
    let mut rows = vec![row(m, rs.label(), "fixed_point_normalization", ok)];
    let tip: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    let corners = apartment::corner_set(rs, &apartment::point(&tip, 1), &[])?;
    rows.push(row(m, rs.label(), "special_tip_corner", corners == vec![tip]));
    Ok(rows)
}

fn polytope_row(rng: &mut ChaCha8Rng) -> Result<Row> {
    let mut ok = true;
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(2..=8);
        let rows: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        let b: Vec<i64> = (0..m).map(|_| rng.gen_range(-5..=5)).collect();
        let d = apartment::polytope_denominator(&rows)?;
        for v in apartment::polytope_vertices(&rows, &b)? {
            ok &= v.iter().all(|c| d % c.denom().unsigned_abs() as u128 == 0);
        }
    }
    Ok(row("apartment", "random_polytopes", "denominators_divide_d_A", ok))
}

fn ffield_rows() -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for q in [2, 3, 5] {
        let f = GaloisField::new(q)?;
        let mut ok = true;
        for p in ffield::polys_below(&f, 4) {
            if p.is_zero() {
                continue;
            }
            for shift in -3i64..=3 {
                let g = &RatFunc::from_poly(p.clone()) * &RatFunc::t_pow(&f, shift);
                let j = FracIdeal::new(&g)?;
                if j.degree() > 6 {
                    continue;
                }
                for m in 0..=10 {
                    let Ok(dim) = ffield::rr_dim(j.degree(), m, 0, 1) else { continue };
                    let basis = ffield::truncated_basis(&j, m);
                    let mut vals: Vec<i64> = basis.iter().filter_map(RatFunc::val_inf).collect();
                    vals.sort_unstable();
                    vals.dedup();
                    ok &= basis.len() as i64 == dim
                        && vals.len() == basis.len()
                        && basis.iter().all(|x| j.contains(x) && x.val_inf().is_some_and(|v| v >= -m));
                }
            }
        }
        rows.push(row("ffield", format!("F{q}"), "riemann_roch", ok));
    }
    Ok(rows)
}

fn sl2_h(f: &ffield::Fq, x: &RatFunc) -> ratmat::RatMat {
    vec![vec![RatFunc::zero(f), -&RatFunc::one(f)], vec![RatFunc::one(f), -x]]
}

fn ideal_rows(rng: &mut ChaCha8Rng) -> Result<Vec<Row>> {
    let m = "ideals";
    let mut rows = Vec::new();
    let f = GaloisField::new(2)?;
    let alpha = SlRoot::new(0, 1)?;
    let at = ideals::lower_ideal(&ConjContext::new(sl2_h(&f, &RatFunc::t(&f)))?, alpha)?;
    rows.push(row(m, "sl2_x=t", "lower_ideal=A", at == FracIdeal::unit(&f)));
    let inv_t = RatFunc::t_pow(&f, -1);
    let ai = ideals::lower_ideal(&ConjContext::new(sl2_h(&f, &inv_t))?, alpha)?;
    rows.push(row(m, "sl2_x=1/t", "lower_ideal=(t^2)", ai == FracIdeal::t_pow(&f, 2)));
    for k in 0..6 {
        let n = 2 + k % 2;
        let f = GaloisField::new(2 + (k / 2 % 2) as u32)?;
        let ctx = ConjContext::new(ideals::random_h(&f, n, 2, rng)?)?;
        let mut ok = true;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let a = SlRoot::new(i, j)?;
                    let (lo, hi) = ideals::default_window(&ctx, &[a])?;
                    ok &= ideals::sandwich(&ctx, &[a], (lo.max(hi - 4), hi))?.holds();
                }
            }
        }
        rows.push(row(m, format!("random_h{k}_n{n}_q{}", f.q()), "sandwich", ok));
    }
    Ok(rows)
}

fn building_rows() -> Result<Vec<Row>> {
    let m = "building";
    let mut rows = Vec::new();
    for (q, r) in [(2u32, 6usize), (3, 4)] {
        let qc = building::quotient_ball(2, q, r)?;
        rows.push(row(m, format!("sl2_q{q}_r{r}"), "path", qc.is_path() && qc.nodes.len() == r + 1));
    }
    for r in 0..=1usize {
        let qc = building::quotient_ball(3, 2, r)?;
        let dominant = (r + 1) * (r + 2) / 2;
        rows.push(row(m, format!("sl3_q2_r{r}"), "sector_chamber_count", qc.nodes.len() == dominant));
    }
    let mut increasing = true;
    for q in [2u32, 3] {
        for mm in 1..4 {
            increasing &= building::stabilizer_order_sl2(mm, q)? <= building::stabilizer_order_sl2(mm + 1, q)?;
        }
    }
    rows.push(row(m, "sl2_ray", "stabilizers_increase_beyond_origin", increasing));
    let f5 = GaloisField::new(5)?;
    let e = CurveSpec::weierstrass(&f5, [0, 0, 0, 1, 0])?;
    rows.push(row(m, "genus0", "cusps", (1..=4).all(|t| building::cusp_count(&CurveSpec::Genus0, t).ok() == Some(1))));
    rows.push(row(m, "y^2=x^3+x/F5", "pic_order", e.pic_order() == 4));
    rows.push(row(m, "y^2=x^3+x/F5", "cusps_rank2", building::cusp_count(&e, 2)? == 16));
    Ok(rows)
}

fn irreducible_types(max_rank: usize) -> Vec<String> {
    let mut out = Vec::new();
    for r in 1..=max_rank {
        out.push(format!("A{r}"));
        if r >= 2 {
            out.push(format!("B{r}"));
        }
        if r >= 3 {
            out.push(format!("C{r}"));
        }
        if r >= 4 {
            out.push(format!("D{r}"));
        }
        match r {
            2 => out.push("G2".into()),
            4 => out.push("F4".into()),
            6..=8 => out.push(format!("E{r}")),
            _ => {}
        }
    }
    out
}

pub fn csv(rows: &[Row], with_module: bool) -> String {
    let mut s = String::from(if with_module { "module,subject,check,result\n" } else { "subject,check,result\n" });
    for r in rows {
        if with_module {
            s.push_str(r.module);
            s.push(',');
        }
        s.push_str(&format!("{},{},{}\n", r.subject, r.check, result(r.pass)));
    }
    s
}

pub fn all(max_rank: usize, seed: u64) -> CmdResult {
    if !(1..=8).contains(&max_rank) {
        return Err(crate::Failure::Usage("--max-rank must lie in 1..=8".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for ty in irreducible_types(max_rank) {
        let rs = RootSystem::parse(&ty)?;
        rows.extend(subset_rows(&rs, rs.rank() <= 6)?);
        if rs.rank() == 2 {
            rows.extend(equivalence_rows(&rs)?);
        }
        if rs.rank() <= 4 {
            rows.extend(chevalley_rows(&rs)?);
        }
        if rs.rank() <= 3 {
            rows.extend(apartment_rows(&rs, &mut rng)?);
        }
    }
    rows.push(polytope_row(&mut rng)?);
    rows.extend(ffield_rows()?);
    rows.extend(ideal_rows(&mut rng)?);
    rows.extend(building_rows()?);
    let pass = rows.iter().all(|r| r.pass);
    Ok(Outcome { text: csv(&rows, true), pass })
}
