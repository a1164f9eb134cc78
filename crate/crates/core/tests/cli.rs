use std::process::Command;

fn ising(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ising"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn field(json: &str, key: &str) -> serde_json::Value {
    serde_json::from_str::<serde_json::Value>(json).unwrap()[key].clone()
}

#[test]
fn critical_point() {
    let (code, out, _) = ising(&["critical"]);
    assert_eq!(code, 0);
    let kc = field(&out, "k_c").as_f64().unwrap();
    assert!((kc - 0.4406867935).abs() < 1e-10);
    assert!((field(&out, "tanh_k_c").as_f64().unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-14);
}

#[test]
fn dimer_counts() {
    let (code, out, _) = ising(&["dimers", "--rows", "2", "--cols", "2"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "count").as_u64(), Some(2));
    assert_eq!(field(&out, "agree").as_bool(), Some(true));
    let (_, out, _) = ising(&[
        "dimers",
        "--rows",
        "8",
        "--cols",
        "8",
        "--method",
        "enumerate",
    ]);
    assert_eq!(field(&out, "count").as_u64(), Some(12_988_816));
    let (_, out, _) = ising(&["dimers", "--rows", "3", "--cols", "3"]);
    assert_eq!(field(&out, "count").as_u64(), Some(0));
}

#[test]
fn compare_agrees() {
    let (code, out, _) = ising(&[
        "compare", "--rows", "4", "--cols", "4", "--kh", "0.44", "--kv", "0.44",
    ]);
    assert_eq!(code, 0);
    assert!(field(&out, "max_deviation").as_f64().unwrap() < 1e-8);
    for m in ["oracle", "transfer", "kaufman", "pfaffian", "kacward"] {
        assert!(field(&out, m).is_number(), "missing {m}");
    }
}

#[test]
fn z_json_and_csv() {
    let args = [
        "z", "--method", "kacward", "--rows", "3", "--cols", "4", "--kh", "0.3", "--kv", "0.5",
    ];
    let (code, out, _) = ising(&args);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "method").as_str(), Some("kacward"));
    let json_z = out
        .split("\"log_z\":")
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .to_string();
    let (_, csv, _) = ising(&[&args[..], &["--format", "csv"]].concat());
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == "log_z").unwrap();
    assert_eq!(row[i], json_z);
}

#[test]
fn chain_methods() {
    let (_, a, _) = ising(&[
        "z",
        "--method",
        "chain-transfer",
        "--geometry",
        "chain",
        "--rows",
        "1",
        "--cols",
        "7",
        "--kh",
        "0.5",
        "--h",
        "0.2",
    ]);
    let (_, b, _) = ising(&[
        "z",
        "--method",
        "oracle",
        "--geometry",
        "chain",
        "--rows",
        "1",
        "--cols",
        "7",
        "--kh",
        "0.5",
        "--h",
        "0.2",
    ]);
    let (a, b) = (
        field(&a, "log_z").as_f64().unwrap(),
        field(&b, "log_z").as_f64().unwrap(),
    );
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn sweep_rows_in_order() {
    let (code, out, _) = ising(&["sweep", "--k-from", "0.2", "--k-to", "0.6", "--steps", "5"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,neg_beta_f,u,c");
    assert_eq!(lines.len(), 6);
    let ks: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(ks.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn exit_codes() {
    assert_eq!(ising(&["bogus"]).0, 2);
    assert_eq!(
        ising(&["free-energy", "--method", "onsager", "--k", "-0.1"]).0,
        2
    );
    assert_eq!(
        ising(&[
            "z", "--method", "oracle", "--rows", "6", "--cols", "6", "--kh", "0.3", "--kv", "0.3"
        ])
        .0,
        3
    );
    assert_eq!(ising(&["--version"]).0, 0);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = [
        "compare", "--rows", "4", "--cols", "5", "--kh", "0.3", "--kv", "0.7",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_ising"))
            .args(args)
            .env("ISING_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
    let bad = Command::new(env!("CARGO_BIN_EXE_ising"))
        .args(args)
        .env("ISING_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
