//! One function per leaf subcommand.

use std::path::Path;

use serde::Serialize;
use serde_json::json;

use sectorial::apartment::{self, FixedPointNormalizer};
use sectorial::building::{self, CurveSpec};
use sectorial::chevalley::{self, StructureConstants};
use sectorial::ffield::{self, FracIdeal, GaloisField, RatFunc};
use sectorial::ideals::{self, ConjContext, SlRoot};
use sectorial::ratmat;
use sectorial::rootsys::RootSystem;
use sectorial::subsets;

use crate::verify;
use crate::{parse, CmdResult, Failure, Outcome};

fn root_label(r: &[i32]) -> String {
    if r.iter().all(|c| (0..=9).contains(c)) {
        r.iter().map(|c| c.to_string()).collect()
    } else if r.iter().all(|c| (-9..=0).contains(c)) {
        format!("-{}", r.iter().map(|c| (-c).to_string()).collect::<String>())
    } else {
        r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(":")
    }
}

fn label_of(rs: &RootSystem, i: usize) -> String {
    root_label(rs.root(i))
}

fn to_json<T: Serialize>(v: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(anyhow::Error::from)?;
    s.push('\n');
    Ok(s)
}

fn root_system(ty: &str) -> Result<RootSystem, Failure> {
    Ok(RootSystem::parse(ty)?)
}

pub fn rootsys_show(ty: &str, json: bool) -> CmdResult {
    let rs = root_system(ty)?;
    let simple: Vec<String> = (0..rs.rank()).map(|i| label_of(&rs, rs.simple(i))).collect();
    let positive: Vec<String> = (0..rs.num_positive()).map(|i| label_of(&rs, i)).collect();
    if json {
        let v = json!({
            "type": rs.label(),
            "family": rs.family_label(),
            "rank": rs.rank(),
            "simple_roots": simple,
            "positive_roots": positive,
            "cartan": rs.cartan(),
        });
        return Ok(Outcome::ok(to_json(&v)?));
    }
    let mut s = format!("{} (rank {}, {} positive roots)\n", rs.label(), rs.rank(), rs.num_positive());
    s.push_str(&format!("simple roots: {}\n", simple.join(" ")));
    s.push_str(&format!("positive roots: {}\n", positive.join(" ")));
    s.push_str("cartan:\n");
    for r in rs.cartan() {
        let r: Vec<String> = r.iter().map(|c| format!("{c:>3}")).collect();
        s.push_str(&format!("{}\n", r.join("")));
    }
    Ok(Outcome::ok(s))
}

pub fn subsets_verify(ty: &str, all_theta: bool) -> CmdResult {
    let rs = root_system(ty)?;
    let rows = verify::subset_rows(&rs, all_theta)?;
    let pass = rows.iter().all(|r| r.pass);
    Ok(Outcome { text: verify::csv(&rows, false), pass })
}

pub fn subsets_conditions(ty: &str, psi: &str) -> CmdResult {
    let rs = root_system(ty)?;
    let psi = parse::roots(&rs, psi)?;
    let rep = subsets::check_conditions(&rs, &psi)?;
    let labels: Vec<String> = psi.iter().map(|&i| label_of(&rs, i)).collect();
    Ok(Outcome::ok(to_json(&json!({ "psi": labels, "conditions": rep }))?))
}

pub fn chevalley_constants(ty: &str, csv: bool) -> CmdResult {
    let rs = root_system(ty)?;
    let sc = StructureConstants::new(&rs);
    let table = sc.positive_table();
    if csv {
        let mut s = String::from("alpha,beta,r,s,root,c\n");
        for (a, b, t) in &table {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                label_of(&rs, *a),
                label_of(&rs, *b),
                t.r,
                t.s,
                label_of(&rs, t.root),
                t.c
            ));
        }
        return Ok(Outcome::ok(s));
    }
    let v: Vec<_> = table
        .iter()
        .map(|(a, b, t)| {
            json!({
                "alpha": label_of(&rs, *a),
                "beta": label_of(&rs, *b),
                "r": t.r,
                "s": t.s,
                "root": label_of(&rs, t.root),
                "c": t.c,
            })
        })
        .collect();
    Ok(Outcome::ok(to_json(&v)?))
}

pub fn chevalley_conj_table(ty: &str, psi: &str, theta: Option<&str>) -> CmdResult {
    let rs = root_system(ty)?;
    let psi = match theta {
        Some(t) => subsets::psi_theta(&rs, &parse::theta(&rs, t)?)?,
        None if psi == "basis" => subsets::psi_basis(&rs),
        None => parse::roots(&rs, psi)?,
    };
    let sc = StructureConstants::new(&rs);
    let table = chevalley::conjugation_polynomials(&sc, &psi)?;
    let order: Vec<String> = table.order.iter().map(|&i| label_of(&rs, i)).collect();
    let p: Vec<Vec<String>> = table.p.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    let tri = table.is_unitriangular();
    let v = json!({
        "type": rs.label(),
        "order": order,
        "k": table.k,
        "unitriangular": tri,
        "p": p,
    });
    Ok(Outcome { text: to_json(&v)?, pass: tri })
}

fn q_strings(v: &[sectorial::linalg::Q]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

pub fn apartment_corners(ty: &str, tip: &str, theta: &str) -> CmdResult {
    let rs = root_system(ty)?;
    let x = parse::point(tip, rs.rank())?;
    let theta = parse::theta(&rs, theta)?;
    let corners = apartment::corner_set(&rs, &x, &theta)?;
    let v = json!({
        "type": rs.label(),
        "tip": q_strings(&x),
        "theta": theta.iter().map(|k| k + 1).collect::<Vec<_>>(),
        "corners": corners,
    });
    Ok(Outcome::ok(to_json(&v)?))
}

pub fn apartment_enclosure(ty: &str, points: &str) -> CmdResult {
    let rs = root_system(ty)?;
    let pts: Vec<_> = points
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse::point(p, rs.rank()))
        .collect::<Result<_, _>>()?;
    let cl = apartment::enclosure(&rs, &pts)?;
    let walls: Vec<_> = (0..rs.num_roots())
        .filter_map(|a| cl.thresholds[a].map(|r| json!({ "root": label_of(&rs, a), "at_least": r })))
        .collect();
    let vertices = if cl.is_bounded() && rs.rank() <= 4 {
        Some(cl.vertices(&rs)?.iter().map(|v| q_strings(v)).collect::<Vec<_>>())
    } else {
        None
    };
    let v = json!({
        "type": rs.label(),
        "bounded": cl.is_bounded(),
        "half_apartments": walls,
        "vertices": vertices,
    });
    Ok(Outcome::ok(to_json(&v)?))
}

pub fn apartment_normalizer(ty: &str) -> CmdResult {
    let rs = root_system(ty)?;
    let fp = FixedPointNormalizer::new(&rs)?;
    Ok(Outcome::ok(to_json(&json!({ "type": rs.label(), "e": fp.e }))?))
}

pub fn ffield_rr(q: u32, deg_j: Option<i64>, ideal: Option<&str>, m: i64) -> CmdResult {
    let f = GaloisField::new(q)?;
    let j = match (deg_j, ideal) {
        (Some(d), None) => FracIdeal::t_pow(&f, d),
        (None, Some(s)) => FracIdeal::new(&ffield::parse_ratfunc(&f, s)?)?,
        _ => return Err(Failure::Usage("give exactly one of --degJ and --ideal".into())),
    };
    let expected = ffield::rr_dim(j.degree(), m, 0, 1)?;
    let basis = ffield::truncated_basis(&j, m);
    let pass = basis.len() as i64 == expected;
    let v = json!({
        "q": q,
        "ideal": j.to_string(),
        "deg_j": j.degree(),
        "m": m,
        "basis": basis.iter().map(RatFunc::to_string).collect::<Vec<_>>(),
        "dimension": basis.len(),
        "riemann_roch": expected,
        "pass": pass,
    });
    Ok(Outcome { text: to_json(&v)?, pass })
}

pub fn ideals_bounds(ctx: &ConjContext) -> CmdResult {
    let upper = ideals::upper_ideals(ctx);
    let n = ctx.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let a = SlRoot::new(i, j)?;
            out.push(json!({
                "root": a.label(),
                "lower": ideals::lower_ideal(ctx, a)?.to_string(),
                "upper": upper.get(&a).map(ToString::to_string),
            }));
        }
    }
    let v = json!({ "n": n, "q": ctx.field().q(), "h": ratmat::to_strings(ctx.h()), "roots": out });
    Ok(Outcome::ok(to_json(&v)?))
}

pub fn ideals_sandwich(ctx: &ConjContext, alpha: &[String], window: Option<&str>) -> CmdResult {
    let psi: Vec<SlRoot> = alpha.iter().map(|s| SlRoot::parse(s)).collect::<Result<_, _>>()?;
    if psi.iter().any(|a| a.i >= ctx.n() || a.j >= ctx.n()) {
        return Err(Failure::Usage(format!("roots must have indices in 1..={}", ctx.n())));
    }
    let window = match window {
        Some(w) => match parse::ints(w)?[..] {
            [lo, hi] if lo <= hi => (lo, hi),
            _ => return Err(Failure::Usage(format!("bad window {w:?}; expected lo,hi"))),
        },
        None => ideals::default_window(ctx, &psi)?,
    };
    let rep = ideals::sandwich(ctx, &psi, window)?;
    Ok(Outcome { text: to_json(&rep)?, pass: rep.holds() })
}

pub fn building_quotient(n: usize, q: u32, radius: usize, dot: bool) -> CmdResult {
    let qc = building::quotient_ball(n, q, radius)?;
    let pass = qc.is_connected() && (n != 2 || qc.is_path());
    let text = if dot { qc.to_dot() } else { to_json(&qc)? };
    Ok(Outcome { text, pass })
}

pub fn building_cusps(genus: u32, curve: Option<&str>, q: u32, rank: u32) -> CmdResult {
    let f = GaloisField::new(q)?;
    let (model, coeffs) = match (genus, curve) {
        (0, None) => (CurveSpec::Genus0, None),
        (1, Some(c)) => {
            let a: [i64; 5] = parse::ints(c)?
                .try_into()
                .map_err(|_| Failure::Usage("a curve needs five coefficients a1,a2,a3,a4,a6".into()))?;
            (CurveSpec::weierstrass(&f, a)?, Some(a))
        }
        (0, Some(_)) => return Err(Failure::Usage("genus 0 takes no curve".into())),
        (1, None) => return Err(Failure::Usage("genus 1 needs --curve a1,a2,a3,a4,a6".into())),
        _ => return Err(Failure::Usage("only genus 0 and 1 are supported".into())),
    };
    let v = json!({
        "genus": genus,
        "q": q,
        "curve": coeffs,
        "rank": rank,
        "pic_order": model.pic_order(),
        "cusps": building::cusp_count(&model, rank)?,
    });
    Ok(Outcome::ok(to_json(&v)?))
}

pub fn building_birkhoff(q: u32, g_file: &Path) -> CmdResult {
    let f = GaloisField::new(q)?;
    let g = parse::matrix_file(&f, g_file)?;
    let b = building::birkhoff(&g)?;
    let v = json!({
        "type": b.exponents,
        "u": ratmat::to_strings(&b.u),
        "v": ratmat::to_strings(&b.v),
    });
    Ok(Outcome::ok(to_json(&v)?))
}
