use std::process::{Command, Output};

fn kimloci(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kimloci"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn refined_sweep_reports_verified() {
    let o = kimloci(&["verify", "refined", "--s", "2", "--pmin", "3", "--pmax", "100", "--precision", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "verified");
    assert_eq!(v["theorem"], "refined-kim");
    assert_eq!(v["s"], serde_json::json!([2]));
    assert_eq!(v["results"].as_array().unwrap().len(), 3 * 24);
}

#[test]
fn refined_without_two_is_empty() {
    let o = kimloci(&["verify", "refined", "--s", "3", "--pmax", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["results"].as_array().unwrap().iter().all(|r| r["locus"] == serde_json::json!([])));
}

#[test]
fn unrefined_sweep_to_file() {
    let dir = std::env::temp_dir().join(format!("kimloci-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("unrefined.json");
    let o = kimloci(&[
        "verify",
        "unrefined",
        "--pmin",
        "3",
        "--pmax",
        "200",
        "--jobs",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["status"], "verified");
    assert!(String::from_utf8_lossy(&o.stderr).contains("verified"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn failure_hooks_set_exit_codes() {
    let o = kimloci(&["verify", "refined", "--pmax", "50", "--inject-counterexample", "11"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "counterexample");
    assert!(v["detail"].as_str().unwrap().contains("p = 11"));

    let o = kimloci(&["verify", "unrefined", "--pmax", "50", "--force-precision-failure"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "precision-failure");
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        vec!["bogus"],
        vec!["verify", "refined", "--s", "2,3"],
        vec!["depth1", "--p", "9"],
        vec!["equations", "--s", "2", "--depth", "3", "--sigma", "1,0"],
        vec!["eval", "log", "--p", "5", "--z", "x"],
    ] {
        assert_eq!(kimloci(&args).status.code(), Some(64), "{args:?}");
    }
    assert_eq!(kimloci(&["--help"]).status.code(), Some(0));
}

#[test]
fn depth1_output() {
    let o = kimloci(&["depth1", "--p", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("p = 7: depth-1 residues {3, 5}"));
    let o = kimloci(&["depth1", "--p", "5"]);
    assert!(stdout(&o).starts_with("p = 5: depth-1 residues {}"));
}

#[test]
fn equations_text_and_json() {
    let o = kimloci(&["equations", "--s", "2", "--depth", "3"]);
    assert!(stdout(&o).contains("Li_3 -> a[t2.t2.t2]*x2^2*y2 + a[s3]*z3\n"));
    let o = kimloci(&["equations", "--s", "2", "--depth", "4", "--sigma", "1"]);
    assert!(stdout(&o).ends_with("vanishing: {log, Li_2, Li_4}\n"));
    let o = kimloci(&["equations", "--s", "2", "--depth", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coordinates"][2]["coordinate"], "Li_2");
}

#[test]
fn points_listing() {
    let o = kimloci(&["points", "--s", "2", "--bound", "4"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "-1\t(x2,y2)=(0,-1)\t(1)");
    assert_eq!(lines[1], "1/2\t(x2,y2)=(-1,1)\t(inf)");
    assert_eq!(lines[2], "2\t(x2,y2)=(1,0)\t(0)");
    assert!(lines[3].starts_with("# 3 points"));
    let o = kimloci(&["points", "--s", "2,3", "--bound", "6", "--sequential"]);
    assert!(stdout(&o).lines().any(|l| l.starts_with("3/4\t")));
}

#[test]
fn eval_functions() {
    assert_eq!(stdout(&kimloci(&["eval", "log", "--p", "3", "--precision", "5", "--z", "2"])), "8*3^1 + O(3^5)\n");
    assert_eq!(stdout(&kimloci(&["eval", "teich", "--p", "5", "--precision", "3", "--z", "2"])), "57*5^0 + O(5^3)\n");
    assert_eq!(stdout(&kimloci(&["eval", "li", "--p", "5", "--precision", "3", "--z", "5"])), "16*5^1 + O(5^3)\n");
    let o = kimloci(&["eval", "li", "--p", "5", "--precision", "2", "--z", "5", "--n", "2"]);
    assert_eq!(stdout(&o), "1*5^1 + O(5^2)\n");
    let o = kimloci(&["eval", "log", "--p", "3", "--precision", "5", "--z", "-1/2"]);
    assert_eq!(o.status.code(), Some(0));
}
