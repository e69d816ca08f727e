use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sectorial")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn rootsys_show_g2() {
    let v = json(&["rootsys", "show", "--type", "G2", "--json"]);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["positive_roots"].as_array().unwrap().len(), 6);
    assert_eq!(v["cartan"], serde_json::json!([[2, -3], [-1, 2]]));
}

#[test]
fn subsets_verify_e8_lists_the_basis() {
    let o = run(&["subsets", "verify", "--type", "E8"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("subject,check,result\n"));
    assert!(out.lines().any(|l| l == "psi_basis,C1,pass"));
}

#[test]
fn subsets_verify_all_theta() {
    let o = run(&["subsets", "verify", "--type", "F4", "--all-theta"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "psi_theta[1;2;3],strict_enlargement,pass"));
    assert!(!out.contains(",fail"));
}

#[test]
fn subsets_conditions_counterexample() {
    let v = json(&["subsets", "conditions", "--type", "B2", "--psi", "01,11"]);
    assert_eq!(v["conditions"]["c2"], false);
    let v = json(&["subsets", "conditions", "--type", "G2", "--psi", "21,32"]);
    assert_eq!(v["conditions"]["c2"], true);
    assert_eq!(v["conditions"]["c1"], false);
}

#[test]
fn chevalley_constants_b2_csv() {
    let o = run(&["chevalley", "constants", "--type", "B2", "--csv"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("alpha,beta,r,s,root,c"));
    let twos = lines.filter(|l| l.ends_with(",2") || l.ends_with(",-2")).count();
    assert!(twos > 0);
}

#[test]
fn conj_table_is_unitriangular() {
    let v = json(&["chevalley", "conj-table", "--type", "A3", "--psi", "basis"]);
    assert_eq!(v["unitriangular"], true);
    let v = json(&["chevalley", "conj-table", "--type", "B3", "--theta", "2"]);
    assert_eq!(v["unitriangular"], true);
}

#[test]
fn apartment_corners_a2() {
    let v = json(&["apartment", "corners", "--type", "A2", "--tip", "1/2,1/2", "--theta", ""]);
    assert_eq!(v["corners"], serde_json::json!([[0, 1], [1, 0]]));
}

#[test]
fn ffield_rr_counts() {
    let v = json(&["ffield", "rr", "--q", "3", "--degJ", "2", "--m", "5"]);
    assert_eq!(v["dimension"], 4);
    assert_eq!(v["riemann_roch"], 4);
}

#[test]
fn ideals_sandwich_from_file() {
    let dir = std::env::temp_dir().join(format!("sectorial-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let h = dir.join("h.json");
    std::fs::write(&h, r#"[["0","0","1"],["0","-1","-1/t"],["1","0","1/t"]]"#).unwrap();
    let v = json(&["ideals", "sandwich", "--n", "3", "--q", "2", "--h-file", h.to_str().unwrap(), "--alpha", "1,3"]);
    assert_eq!(v["entries"][0]["lower"], "(t^2)");
    assert_eq!(v["entries"][0]["brute_alpha_in_upper"], true);
}

#[test]
fn building_quotient_dot_has_seven_nodes() {
    let dir = std::env::temp_dir().join(format!("sectorial-dot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.dot");
    let o = run(&["building", "quotient", "--n", "2", "--q", "2", "--radius", "6", "--emit", "dot", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("graph "));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=\"(")).count(), 7);
    assert_eq!(dot.lines().filter(|l| l.contains(" -- ")).count(), 6);
}

#[test]
fn building_cusps_elliptic() {
    let v = json(&["building", "cusps", "--genus", "1", "--curve", "0,0,0,1,0", "--q", "5", "--rank", "2"]);
    assert_eq!(v["pic_order"], 4);
    assert_eq!(v["cusps"], 16);
}

#[test]
fn verify_all_is_deterministic_and_passes() {
    let args = ["verify", "all", "--max-rank", "4", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert!(out.starts_with("module,subject,check,result\n"));
    assert!(out.lines().skip(1).all(|l| l.ends_with(",pass")));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["rootsys", "show", "--type", "Q7"]).status.code(), Some(2));
    assert_eq!(run(&["building", "quotient", "--n", "3", "--q", "2", "--radius", "9"]).status.code(), Some(2));
    assert_eq!(run(&["ffield", "rr", "--q", "6", "--degJ", "1", "--m", "3"]).status.code(), Some(2));
}
