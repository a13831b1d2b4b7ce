use std::process::{Command, Output};

fn dfisher(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dfisher"))
        .args(args)
        .env_remove("DFISHER_PRECISION")
        .output()
        .expect("spawn dfisher")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

/// Column `name` of every data row.
fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

#[test]
fn fisher_charlier_rows() {
    let o = dfisher(&["fisher", "--family", "charlier", "--mu", "2", "--n", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(
        out.lines().next().unwrap(),
        "family,n,params,method,value,converged,discrepancy"
    );
    assert_eq!(column(&out, "method"), ["direct", "theorem", "expansion", "closed"]);
    assert!(column(&out, "value").iter().all(|v| v == "3/2"));
    assert!(column(&out, "discrepancy").iter().all(|v| v == "0"));
}

#[test]
fn fisher_degree_zero_is_zero() {
    let o = dfisher(&["fisher", "--family", "meixner", "--gamma", "3/2", "--mu", "1/4", "--n", "0"]);
    assert!(o.status.success());
    assert!(column(&stdout(&o), "value").iter().all(|v| v == "0"));
}

#[test]
fn fisher_backends_print_ratio_or_decimal() {
    let exact = dfisher(&["fisher", "--family", "kravchuk", "--p", "0.5", "--N", "3", "--n", "2"]);
    assert!(column(&stdout(&exact), "value").iter().all(|v| v == "16/3"));

    let float = dfisher(&[
        "fisher", "--family", "kravchuk", "--p", "0.5", "--N", "3", "--n", "2", "--backend", "float",
    ]);
    let values = column(&stdout(&float), "value");
    assert_eq!(values.len(), 4);
    for v in values {
        assert!(v.starts_with("5.3333333333"), "{v}");
        // 80 significant digits by default
        assert_eq!(v.chars().filter(|c| c.is_ascii_digit()).count(), 80, "{v}");
    }
}

#[test]
fn precision_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_dfisher"))
        .args(["fisher", "--family", "charlier", "--mu", "3", "--n", "1", "--backend", "float"])
        .env("DFISHER_PRECISION", "60")
        .output()
        .unwrap();
    // The expansion row; the mantissa carries exactly the requested digits.
    let v = &column(&stdout(&o), "value")[2];
    let mantissa = v.split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 60, "{v}");
    assert!(v.starts_with("3.3333333333333333333333333333333333333333333333333333333333"));
}

#[test]
fn method_selection() {
    let o = dfisher(&[
        "fisher", "--family", "hahn", "--alpha", "0", "--beta", "0", "--N", "20", "--n", "1",
        "--method", "expansion,direct",
    ]);
    let out = stdout(&o);
    assert_eq!(column(&out, "method"), ["expansion", "direct"]);
    // 12/(N^2-1) = 12/399, printed in lowest terms
    assert!(column(&out, "value").iter().all(|v| v == "4/133"));
}

#[test]
fn exit_codes() {
    let domain = dfisher(&["fisher", "--family", "charlier", "--mu", "-1", "--n", "2"]);
    assert_eq!(domain.status.code(), Some(2));
    let degree = dfisher(&["fisher", "--family", "kravchuk", "--p", "1/2", "--N", "3", "--n", "3"]);
    assert_eq!(degree.status.code(), Some(2));
    let usage = dfisher(&["fisher", "--family", "charlier", "--mu", "2"]);
    assert_eq!(usage.status.code(), Some(64));
    let unknown = dfisher(&["fisher", "--family", "jacobi", "--n", "1"]);
    assert_eq!(unknown.status.code(), Some(64));
    let low = dfisher(&["fisher", "--family", "charlier", "--mu", "2", "--n", "1", "--precision", "20"]);
    assert_eq!(low.status.code(), Some(64));
    let help = dfisher(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("64"));
}

#[test]
fn degenerate_closed_form_is_an_error_row() {
    let o = dfisher(&[
        "fisher", "--family", "hahn", "--alpha", "-1/2", "--beta", "-1/2", "--N", "10", "--n", "3",
    ]);
    assert!(o.status.success());
    let values = column(&stdout(&o), "value");
    assert_eq!(values[..3], ["1164/385", "1164/385", "1164/385"]);
    assert_eq!(values[3], "error");
}

#[test]
fn sweep_is_deterministic_and_ordered() {
    let args = ["sweep", "--figure", "fig6", "--method", "expansion,closed"];
    let a = dfisher(&args);
    let b = dfisher(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert_eq!(
        out.lines().next().unwrap(),
        "figure,curve,family,n,params,variable,point,method,value,converged,note"
    );
    let methods = column(&out, "method");
    assert_eq!(methods.len(), 3 * 36 * 2);
    assert!(methods.chunks(2).all(|c| c == ["expansion", "closed"]));
    let points = column(&out, "point");
    assert_eq!(points[0], "5");
    assert_eq!(points[2], "6");
}

#[test]
fn sweep_to_file_and_per_point_errors() {
    let dir = std::env::temp_dir().join(format!("dfisher-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("adhoc.csv");
    let o = dfisher(&[
        "sweep", "--family", "kravchuk", "--p", "1/2", "--N", "3", "--vary", "n", "--start", "1",
        "--stop", "4", "--count", "4", "--backend", "exact", "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(column(&text, "value"), ["4/3", "16/3", "error", "error"]);
    assert!(column(&text, "note")[2].contains("degree"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_rejects_unknown_figures() {
    assert_eq!(dfisher(&["sweep", "--figure", "fig99"]).status.code(), Some(64));
}

#[test]
fn builtin_config_round_trips() {
    let o = dfisher(&["sweep", "--print-config"]);
    assert!(stdout(&o).contains("id = \"fig10\""));
}

#[test]
fn verify_selected_suites() {
    let o = dfisher(&["verify", "--suite", "charlier"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("charlier"));
    assert!(out.contains("0 failed"));

    let o = dfisher(&["verify", "--suite", "hahn-closed-form"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("C3 converged = true"));

    assert_eq!(dfisher(&["verify", "--suite", "nonsense"]).status.code(), Some(64));
}

#[test]
fn eval_and_density() {
    let o = dfisher(&["eval", "--family", "charlier", "--mu", "2", "--n", "1", "--from", "4", "--to", "5"]);
    let out = stdout(&o);
    assert_eq!(column(&out, "value"), ["2", "3"]);
    assert_eq!(column(&out, "forward_diff"), ["1", "1"]);

    let o = dfisher(&["density", "--family", "kravchuk", "--p", "1/2", "--N", "3", "--n", "0"]);
    assert_eq!(column(&stdout(&o), "density"), ["1/8", "3/8", "3/8", "1/8"]);

    let o = dfisher(&["density", "--family", "hahn", "--alpha", "0", "--beta", "0", "--N", "5", "--n", "0", "--to", "5"]);
    assert_eq!(o.status.code(), Some(2));
}
