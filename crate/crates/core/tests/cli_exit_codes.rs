use std::fs;
use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_spansub")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn end_to_end_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = p(dir.path(), "d.txt");
    let h = p(dir.path(), "h.txt");
    let c = p(dir.path(), "c.txt");

    let (code, audit) = run(&[
        "gen",
        "random",
        "--n",
        "300",
        "--epsilon",
        "0.15",
        "--seed",
        "7",
        "-o",
        &d,
    ]);
    assert_eq!(code, 0);
    assert!(audit.contains("delta0=") && audit.contains(">=195"), "{audit}");
    assert_eq!(run(&["gen", "pattern", "--m", "3", "--seed", "1", "-o", &h]).0, 0);

    assert_eq!(run(&["solve", &d, &h, "-o", &c, "--seed", "3"]).0, 0);
    assert_eq!(run(&["verify", &d, &h, &c]).0, 0);

    let cert = fs::read_to_string(&c).unwrap();
    let mutated: String = cert
        .lines()
        .map(|l| {
            if l.starts_with("route") {
                l.rsplit_once(' ').unwrap().0
            } else {
                l
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    fs::write(&c, mutated).unwrap();
    assert_eq!(run(&["verify", &d, &h, &c]).0, 2);

    assert_eq!(run(&["solve", &d, &h, "-o", &c, "--epsilon", "0.2"]).0, 3);
}

#[test]
fn extremal_and_sparse() {
    let dir = tempfile::tempdir().unwrap();
    let d = p(dir.path(), "d.txt");
    let h = p(dir.path(), "h.txt");
    let c = p(dir.path(), "c.txt");
    let (code, audit) = run(&["gen", "extremal", "--n", "20", "--m", "1", "--k", "2", "-o", &d]);
    assert_eq!(code, 0);
    assert!(audit.contains("delta0=7"), "{audit}");
    fs::write(&h, "2 1\n0 1\n").unwrap();
    assert_eq!(run(&["solve", &d, &h, "-o", &c]).0, 3);

    assert_eq!(
        run(&["gen", "extremal", "--n", "10", "--m", "1", "--k", "2", "-o", &d]).0,
        0
    );
    assert_eq!(run(&["solve", &d, &h, "-o", &c]).0, 2);
    assert!(!Path::new(&c).exists());

    assert_ne!(
        run(&["gen", "extremal", "--n", "6", "--m", "2", "--k", "2", "-o", &d]).0,
        0
    );
}

#[test]
fn bench_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = p(dir.path(), "grid.cfg");
    let csv = p(dir.path(), "out.csv");
    fs::write(&cfg, "n = 120\nepsilon = 0.2\nm = 2\nseeds = 4\nC = 20\n").unwrap();
    assert_eq!(run(&["bench", &cfg, "-o", &csv]).0, 0);
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,epsilon,m,seed,success,stage_failed,wall_ms,retries_used");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("120,0.2,2,4,true,,"), "{}", lines[1]);

    fs::write(&cfg, "n = 120\nepsilon =\nm = 2\nseeds = 0..5\n").unwrap();
    assert_eq!(run(&["bench", &cfg, "-o", &csv]).0, 0);
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 1);

    fs::write(&cfg, "n: 120\n").unwrap();
    assert_eq!(run(&["bench", &cfg, "-o", &csv]).0, 1);
}
