use std::fs;
use std::process::{Command, Output};

fn ktree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ktree")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn summary(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).expect("JSON summary on stderr")
}

#[test]
fn exact_pmf_sums_to_one() {
    let o = ktree(&["exact", "--thm", "1", "--k", "2", "--n", "6", "--j", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,prob_num,prob_den,prob_float"));
    let total: f64 = lines.map(|l| l.split(',').nth(3).unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    let s = summary(&o);
    assert_eq!(s["command"], "exact");
    assert_eq!(s["results"]["total"], "1");
    assert_eq!(s["run_id"].as_str().unwrap().len(), 12);
    assert_eq!(s["config"]["j"], 3);

    let float = ktree(&["exact", "--thm", "6", "--k", "3", "--n", "40", "--backend", "float"]);
    assert_eq!(float.status.code(), Some(0));
    assert!(stdout(&float).starts_with("m,prob\n"));
}

#[test]
fn oracle_matches_exact_output() {
    for method in ["recurrence", "enumeration"] {
        let o = ktree(&["oracle", "--k", "2", "--n", "5", "--parameter", "descendants", "--node", "2", "--method", method]);
        assert_eq!(o.status.code(), Some(0), "{method}");
        let e = ktree(&["exact", "--thm", "5", "--k", "2", "--n", "5", "--j", "2"]);
        // the closed form lists the full support; the oracle only nonzero cells
        let closed = stdout(&e);
        let nonzero: Vec<&str> = closed.lines().filter(|l| !l.contains(",0,")).collect();
        let oracle = stdout(&o);
        assert_eq!(oracle.lines().collect::<Vec<_>>(), nonzero, "{method}");
    }
    let o = ktree(&["oracle", "--k", "2", "--n", "5", "--parameter", "dist01", "--node", "last"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn selfcheck_passes() {
    let o = ktree(&["selfcheck", "--k", "2", "--max-n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().skip(1).all(|l| l.contains(",true,")));
    assert_eq!(summary(&o)["status"], "pass");
}

#[test]
fn clustering_constant_prefix() {
    let o = ktree(&["clustering-constant", "--k", "2", "--tol", "1e-8"]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(row.starts_with("2,0.793390"), "{row}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(ktree(&["exact", "--thm", "1", "--k", "2", "--bogus"]).status.code(), Some(1));
    assert_eq!(ktree(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(ktree(&["exact", "--thm", "4", "--k", "2", "--n", "3"]).status.code(), Some(1));
    assert_eq!(ktree(&["mc", "--k", "2", "--n", "3", "--node", "9"]).status.code(), Some(1));
    let help = ktree(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("Exit codes"));
    let sub = ktree(&["metrics", "--help"]);
    assert!(stdout(&sub).contains("label,outdeg,deg,clustering_num,clustering_den,descendants,dist01,distK0"));
}

#[test]
fn mc_output_is_reproducible_across_schedules() {
    let run = |schedule: &str| {
        let o = ktree(&[
            "mc", "--k", "3", "--n", "30", "--parameter", "descendants", "--node", "random", "--replicates", "5000",
            "--seed", "11", "--schedule", schedule,
        ]);
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    let a = run("serial");
    assert_eq!(a, run("serial"));
    assert_eq!(a, run("parallel"));
    assert!(a.starts_with("m,count,freq\n"));
}

#[test]
fn mc_compare_and_check_failure() {
    let o = ktree(&["mc", "--k", "2", "--n", "10", "--node", "3", "--replicates", "20000", "--compare"]);
    assert_eq!(o.status.code(), Some(0));
    let s = summary(&o);
    assert!(s["results"]["comparison"]["p_value"].as_f64().unwrap() >= 1e-4);
    // a significance level of 1 always rejects
    let o = ktree(&["mc", "--k", "2", "--n", "10", "--node", "3", "--replicates", "2000", "--compare", "--alpha", "1.0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(summary(&o)["status"], "fail");
}

#[test]
fn config_file_and_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# small run\nk = 2\nn = 12\nparameter = outdegree\nnode = root\nreplicates = 300\nseed = 4\n").unwrap();
    let out = dir.path().join("out.csv");
    let sum = dir.path().join("summary.json");
    let o = ktree(&[
        "mc",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "5",
        "--output",
        out.to_str().unwrap(),
        "--summary",
        sum.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s: serde_json::Value = serde_json::from_str(&fs::read_to_string(&sum).unwrap()).unwrap();
    assert_eq!(s["config"]["k"], 2);
    assert_eq!(s["config"]["node"], "root");
    // the command line wins over the file
    assert_eq!(s["config"]["seed"], 5);
    let csv = fs::read_to_string(&out).unwrap();
    let total: u64 = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 300);

    fs::write(&cfg, "k = 2\nnonsense-key = 1\n").unwrap();
    let o = ktree(&["mc", "--config", cfg.to_str().unwrap(), "--n", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn generate_then_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("tree.txt");
    let g = ktree(&["generate", "--k", "2", "--n", "25", "--seed", "3", "--output", tree.to_str().unwrap()]);
    assert_eq!(g.status.code(), Some(0));
    assert!(fs::read_to_string(&tree).unwrap().starts_with("ktree k=2 n=25"));
    let from_file = ktree(&["metrics", "--input", tree.to_str().unwrap()]);
    let direct = ktree(&["metrics", "--k", "2", "--n", "25", "--seed", "3"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(stdout(&from_file), stdout(&direct));
    assert_eq!(stdout(&direct).lines().count(), 1 + 2 + 25);
    let trace = ktree(&["generate", "--k", "2", "--n", "5", "--trace"]);
    assert!(stdout(&trace).starts_with("trace k=2"));
}

#[test]
fn distance_small_ladder() {
    let o = ktree(&["distance", "--k", "1", "--from-exp", "6", "--to-exp", "10", "--replicates", "400"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 5);
    assert!(stdout(&o).starts_with("n,ln_n,mean,variance,bar_mean,bar_variance\n"));
    let s = summary(&o);
    assert!(s["results"]["mean_slope"].as_f64().unwrap() > 0.0);
    assert_eq!(ktree(&["distance", "--k", "1", "--from-exp", "6", "--to-exp", "8"]).status.code(), Some(1));
}
