use qelim::cli::{parse_binding, run, Outcome};
use qelim::{parse, sn_engine};
use serde_json::Value;

fn qelim(args: &[&str]) -> Outcome {
    run(std::iter::once("qelim").chain(args.iter().copied()))
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("bad JSON {:?}: {e}", o.stdout))
}

#[test]
fn published_examples() {
    let o = qelim(&[
        "decide",
        "exists x. exists y. x+3 = y+1 & 8 = y+4",
        "--evidence",
        "--json",
    ]);
    assert_eq!(o.status, 0);
    let v = json(&o);
    assert_eq!(v["result"], "yes");
    assert_eq!(v["witnesses"], serde_json::json!([2, 4]));

    let o = qelim(&["decide", "forall x. x = 0 | exists y. x = y+1"]);
    assert_eq!((o.status, o.stdout.as_str()), (0, "yes\n"));

    let o = qelim(&["split", "x = 0 | exists y. x = y+2"]);
    assert_eq!((o.status, o.stdout.as_str()), (1, "counterexample: 1\n"));
}

#[test]
fn text_evidence_report() {
    let o = qelim(&[
        "decide",
        "exists x. exists y. x+3 = y+1 & 8 = y+4",
        "--evidence",
    ]);
    assert_eq!(
        o.stdout,
        "yes\nevidence: (2, 4, refl, refl)\nwitnesses: 2, 4\n"
    );

    let o = qelim(&["decide", "forall x. x != 3", "--evidence"]);
    assert_eq!(o.status, 1);
    assert!(o.stdout.contains("counterexample: 3\n"), "{}", o.stdout);

    let o = qelim(&[
        "decide",
        "forall x. x = 0 | exists y. x = y+1",
        "--evidence",
        "--instantiate",
        "0",
        "--instantiate",
        "7",
    ]);
    assert!(o.stdout.contains("universal: holds for every value"));
    assert!(o.stdout.contains("instance 0: inl refl\n"), "{}", o.stdout);
    assert!(
        o.stdout.contains("instance 7: inr (6, refl)\n"),
        "{}",
        o.stdout
    );
}

#[test]
fn json_qf_equivalent_redecides_identically() {
    let cases: &[(&str, &[&str])] = &[
        ("exists x. x + 5 = y + 3", &["y=4"]),
        ("exists x. x + 5 = y + 3", &["y=1"]),
        ("forall z. z = y | exists w. z = w + 1", &["y=0"]),
        ("exists x. forall z. x = z -> z + 1 = y", &["y=5"]),
        ("exists x. exists y. x+3 = y+1 & 8 = y+4", &[]),
    ];
    for (text, env) in cases {
        let mut args = vec!["decide", text, "--json"];
        for b in *env {
            args.extend(["--env", b]);
        }
        let o = qelim(&args);
        let v = json(&o);
        let qf_text = v["qf_equivalent"].as_str().expect("qf_equivalent present");
        let bindings: Vec<(String, u64)> = env.iter().map(|b| parse_binding(b).unwrap()).collect();
        let names: Vec<&str> = bindings.iter().map(|(n, _)| n.as_str()).collect();
        let values: Vec<u64> = bindings.iter().map(|&(_, v)| v).collect();
        let qf = parse(qf_text, &names).unwrap();
        assert!(qf.is_qfree());
        let again = sn_engine().decide(&qf, &values).unwrap().is_yes();
        assert_eq!(again, v["result"] == "yes", "{text}");
        assert_eq!(o.status, if again { 0 } else { 1 });
    }
}

#[test]
fn eliminate_and_oracle_commands() {
    let o = qelim(&["eliminate", "forall x. x = 0 | exists y. x = y+1"]);
    assert_eq!(o.status, 0);
    let qf = parse(o.stdout.trim(), &[] as &[&str]).unwrap();
    assert!(qf.is_qfree());
    assert!(qf.eval_qfree(&[]).unwrap());

    let o = qelim(&["eliminate", "exists x. x = y", "--json"]);
    assert!(json(&o)["qf_equivalent"].is_string());

    for text in [
        "exists x. exists y. y + 4 = x & y != 0 & y != 1",
        "forall x. exists y. y = x + 4",
        "exists x. exists y. y = x + 1 & y = 3",
    ] {
        let o = qelim(&["oracle", text]);
        assert_eq!(o.status, 0, "{text}: {o:?}");
        assert_eq!(o.stdout, "oracle: yes\ndecide: yes\nagree\n");
    }
}

#[test]
fn usage_errors() {
    for args in [
        &["decide"][..],
        &["decide", "x = 0"],
        &["decide", "x = 0", "--env", "x=1", "--env", "y=2"],
        &["decide", "x = ", "--env", "x=1"],
        &["decide", "x = 99999999999"],
        &["decide", "exists x. x = 0", "--max-products", "many"],
        &["split", "x = y"],
        &["eliminate", "x = 0", "--env", "x=1"],
    ] {
        let o = qelim(args);
        assert_eq!(o.status, 2, "{args:?}: {o:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
    let o = qelim(&["decide", "exists x. x = (0"]);
    assert!(o.stderr.contains("offset"), "{}", o.stderr);
}

#[test]
fn help_is_not_an_error() {
    let o = qelim(&["--help"]);
    assert_eq!(o.status, 0);
    assert!(o.stdout.contains("decide"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_qelim");
    let out = std::process::Command::new(bin)
        .args(["split", "x = 0 | exists y. x = y+2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "counterexample: 1\n");

    let out = std::process::Command::new(bin)
        .args(["decide", "x ="])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}
