use modtors::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("modtors").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    v["result"].clone()
}

#[test]
fn homology_summary() {
    let v = json(&["homology", "--p", "11", "--smith"]);
    assert_eq!(v["quotient_dim"], 3);
    assert_eq!(v["p1_size"], 12);
    assert_eq!(v["smith"]["torsion_free"], true);
    let v = json(&["homology", "--p", "5", "--n", "2", "--field", "7"]);
    assert_eq!(v["quotient_dim"], 5);
}

#[test]
fn criterion_over_several_fields() {
    let (code, out, _) = call(&["--csv", "criterion", "--p", "11", "--d", "1", "--all-l-up-to", "5"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("p,n,d,l,s,required_rank,achieved_rank,pass"));
    assert_eq!(lines.len(), 4);
    let v = json(&["criterion", "--p", "4201", "--d", "1", "--l", "3"]);
    assert_eq!(v["achieved_rank"], 2);
    assert_eq!(v["threshold_satisfied"], true);
}

#[test]
fn paths_report_and_sweep() {
    let v = json(&["paths", "--p", "101", "--r", "2"]);
    let chains = v["chains"].as_array().unwrap();
    assert_eq!(chains.len(), 2);
    assert_eq!(chains[0]["chain"], "A");
    assert_eq!(chains[0]["start"], 98);
    assert!(chains[0]["interval_len"].as_u64().unwrap() >= 47);
    assert!(chains[0].get("visited").is_none());
    let v = json(&["paths", "--p", "2", "--n", "7", "--r", "2", "--d", "6", "--full"]);
    assert_eq!(v["chains"][1]["chain"], "Bprime");
    assert!(v["chains"][1]["visited"].is_array());

    let (code, out, _) = call(&["--csv", "paths", "sweep", "--moduli", "101,343", "--r-max", "3"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("p,n,r,chain,interval_len,bound,pass"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 3 * 2);
    assert!(rows.iter().all(|r| r.ends_with(",true") || r.ends_with(",skip")));
}

#[test]
fn qexp_commands() {
    let v = json(&["qexp", "verify-relations", "--order", "40", "--trials", "3", "--seed", "7"]);
    assert_eq!(v["all_pass"], true);
    let v = json(&["qexp", "up-matrix", "--case", "coprime", "--k", "2", "--ap", "-2", "--p", "2"]);
    assert_eq!(v["charpoly_matches"], true);
    assert_eq!(v["matrix"][1][0], "-2");
    let (code, _, err) = call(&["qexp", "up-matrix", "--case", "sideways", "--k", "2", "--ap", "1", "--p", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("sideways"));
}

#[test]
fn bounds_modes() {
    let (code, out, _) = call(&["--csv", "bounds", "--table", "--d-max", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "d,p_ge5,p_eq3,p_eq2\n1,8320,16640,188082\n2,2129920,6389760,48148992\n");
    let v = json(&["bounds", "--p", "2", "--d", "1"]);
    assert_eq!(v["criterion_threshold"]["threshold"], "94041");
    let v = json(&["bounds", "--p", "5", "--d", "1", "--original-order"]);
    assert_eq!(v["final_bound"]["value"], "16640");
    let v = json(&["bounds", "--constants"]);
    assert_eq!(v["constants"]["consistent"], true);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&[]).0, 2);
    assert_eq!(call(&["p1", "--p", "12"]).0, 2);
    assert_eq!(call(&["paths", "--p", "101"]).0, 2);
    assert_eq!(call(&["bounds"]).0, 2);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("homology"));
}

#[test]
fn output_file_under_output_dir() {
    let dir = std::env::temp_dir().join(format!("modtors_cli_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    // only this test touches OUTPUT_DIR
    std::env::set_var("OUTPUT_DIR", &dir);
    let (code, out, _) = call(&["p1", "--p", "3", "--points", "--out", "p1.json"]);
    std::env::remove_var("OUTPUT_DIR");
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("p1.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["size"], 4);
    assert_eq!(v["result"]["points"].as_array().unwrap().len(), 4);
    std::fs::remove_dir_all(&dir).unwrap();
}
