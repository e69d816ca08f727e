use sectorial::linalg;
use sectorial::rootsys::RootSystem;
use sectorial::subsets::{self, check_conditions, psi_basis, psi_theta};

fn all_types() -> Vec<String> {
    let mut v = Vec::new();
    v.extend((1..=8).map(|l| format!("A{l}")));
    v.extend((2..=8).map(|l| format!("B{l}")));
    v.extend((3..=8).map(|l| format!("C{l}")));
    v.extend((4..=8).map(|l| format!("D{l}")));
    v.extend(["E6", "E7", "E8", "F4", "G2"].map(String::from));
    v
}

#[test]
fn psi_basis_is_a_commutative_normal_basis() {
    for t in all_types() {
        let rs = RootSystem::parse(&t).unwrap();
        let b = psi_basis(&rs);
        let rep = check_conditions(&rs, &b).unwrap();
        assert!(rep.c1 && rep.c2, "{t}: {rep:?}");
        assert_eq!(b.len(), rs.rank(), "{t}");
        let m: Vec<Vec<i64>> = b.iter().map(|&i| rs.root(i).iter().map(|&c| c as i64).collect()).collect();
        assert_ne!(linalg::det_int(&m), 0, "{t}");
        assert!(subsets::is_c3_numbering(&rs, &b));
    }
}

#[test]
fn psi_basis_on_reducible_systems() {
    let rs = RootSystem::parse("B2xA1xG2").unwrap();
    let b = psi_basis(&rs);
    assert_eq!(b.len(), 5);
    let rep = check_conditions(&rs, &b).unwrap();
    assert!(rep.c1 && rep.c2);
}

#[test]
fn psi_theta_is_weyl_theta_stable() {
    for t in ["A4", "B4", "C4", "D4", "F4", "G2"] {
        let rs = RootSystem::parse(t).unwrap();
        for theta in subsets::proper_thetas(rs.rank()) {
            let psi = psi_theta(&rs, &theta).unwrap();
            for &a in &theta {
                for &b in &psi {
                    let img = rs.reflect(rs.root(a), rs.root(b));
                    assert!(psi.contains(&rs.index_of(&img).unwrap()), "{t}");
                }
            }
        }
    }
}
