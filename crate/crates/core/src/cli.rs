//! Command implementations behind the `spansub` binary.
//!
//! Every command returns its exit status. Data goes to files; audits and
//! diagnostics go to standard error.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use crate::assembler::{
    solve_detailed, verify_certificate, PatternDigraph, SolveError, SolverParams, SubdivisionCertificate,
};
use crate::bounds::semi_degree_threshold;
use crate::digraph::Digraph;
use crate::instances::{gen_extremal, gen_random_pattern, gen_random_semidegree};

pub const EXIT_OK: i32 = 0;
/// Bad input: unreadable files, parse errors, invalid generator arguments.
pub const EXIT_USAGE: i32 = 1;
/// The solver gave up, or a certificate was rejected.
pub const EXIT_FAILED: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

pub const BENCH_HEADER: &str = "n,epsilon,m,seed,success,stage_failed,wall_ms,retries_used";

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GenKind {
    Random { n: usize, epsilon: f64, seed: u64 },
    Extremal { n: usize, m: usize, k: usize },
    Pattern { m: usize, seed: u64 },
}

fn read_digraph(path: &Path) -> Result<Digraph, String> {
    let f = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Digraph::read_text(BufReader::new(f)).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_pattern(path: &Path) -> Result<PatternDigraph, String> {
    PatternDigraph::new(read_digraph(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

macro_rules! or_exit {
    ($e:expr, $code:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => {
                eprintln!("error: {e}");
                return $code;
            }
        }
    };
}

pub fn cmd_gen(kind: GenKind, out: &Path) -> i32 {
    let text = match kind {
        GenKind::Random { n, epsilon, seed } => {
            let d = or_exit!(gen_random_semidegree(n, epsilon, seed), EXIT_USAGE);
            eprintln!(
                "n={n} arcs={} delta0={}>={}",
                d.arc_count(),
                d.min_semi_degree(),
                semi_degree_threshold(epsilon, n)
            );
            d.to_text()
        }
        GenKind::Extremal { n, m, k } => {
            let d = or_exit!(gen_extremal(n, m, k), EXIT_USAGE);
            eprintln!("n={n} arcs={} delta0={}", d.arc_count(), d.min_semi_degree());
            d.to_text()
        }
        GenKind::Pattern { m, seed } => {
            let h = or_exit!(gen_random_pattern(m, seed), EXIT_USAGE);
            eprintln!("k={} m={}", h.k(), h.m());
            h.graph().to_text()
        }
    };
    or_exit!(write_file(out, &text), EXIT_USAGE);
    EXIT_OK
}

pub fn cmd_solve(digraph: &Path, pattern: &Path, params: &SolverParams, cert_out: &Path) -> i32 {
    let d = or_exit!(read_digraph(digraph), EXIT_USAGE);
    let h = or_exit!(read_pattern(pattern), EXIT_USAGE);
    match solve_detailed(&d, &h, params) {
        Ok(solved) => {
            let report = verify_certificate(&d, &h, &solved.certificate);
            if !report.is_ok() {
                eprintln!("error: solver produced a rejected certificate: {report}");
                return EXIT_FAILED;
            }
            or_exit!(write_file(cert_out, &solved.certificate.to_text()), EXIT_USAGE);
            eprintln!("solved in {} attempt(s)", solved.attempts);
            EXIT_OK
        }
        Err(e @ SolveError::SolveFailed { .. }) => {
            eprintln!("error: {e}");
            EXIT_FAILED
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_PRECONDITION
        }
    }
}

pub fn cmd_verify(digraph: &Path, pattern: &Path, cert: &Path) -> i32 {
    let d = or_exit!(read_digraph(digraph), EXIT_USAGE);
    let h = or_exit!(read_pattern(pattern), EXIT_USAGE);
    let f = or_exit!(
        File::open(cert).map_err(|e| format!("{}: {e}", cert.display())),
        EXIT_USAGE
    );
    let c = match SubdivisionCertificate::read_text(BufReader::new(f)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("rejected: malformed certificate: {e}");
            return EXIT_FAILED;
        }
    };
    let report = verify_certificate(&d, &h, &c);
    if report.is_ok() {
        eprintln!("accepted");
        EXIT_OK
    } else {
        eprintln!("rejected: {report}");
        EXIT_FAILED
    }
}

/// A grid of benchmark cells read from `key = value` lines.
///
/// `n`, `epsilon`, `m` and `seeds` take comma-separated lists; integer
/// entries may also be half-open ranges `a..b`. Other keys set solver
/// parameters shared by every cell. A missing or empty axis gives an empty
/// grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchGrid {
    pub n: Vec<usize>,
    pub epsilon: Vec<f64>,
    pub m: Vec<usize>,
    pub seeds: Vec<u64>,
    pub params: SolverParams,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub epsilon: f64,
    pub m: usize,
    pub seed: u64,
    pub success: bool,
    pub stage_failed: String,
    pub wall_ms: u128,
    pub retries_used: usize,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n, self.epsilon, self.m, self.seed, self.success, self.stage_failed, self.wall_ms, self.retries_used
        )
    }
}

fn parse_ints<T: std::str::FromStr + TryFrom<u64>>(value: &str) -> Result<Vec<T>, String> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || format!("bad integer entry `{item}`");
        if let Some((a, b)) = item.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            for x in a..b {
                out.push(T::try_from(x).map_err(|_| bad())?);
            }
        } else {
            out.push(item.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

fn parse_floats(value: &str) -> Result<Vec<f64>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("bad number `{s}`")))
        .collect()
}

fn parse_scalar<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .trim()
        .parse()
        .map_err(|_| format!("bad value for {key}: `{}`", value.trim()))
}

impl BenchGrid {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut grid = BenchGrid {
            n: vec![],
            epsilon: vec![],
            m: vec![],
            seeds: vec![],
            params: SolverParams::default(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            let at = |e: String| format!("line {}: {e}", i + 1);
            let p = &mut grid.params;
            match key.trim() {
                "n" => grid.n = parse_ints(value).map_err(at)?,
                "epsilon" => grid.epsilon = parse_floats(value).map_err(at)?,
                "m" => grid.m = parse_ints(value).map_err(at)?,
                "seeds" => grid.seeds = parse_ints(value).map_err(at)?,
                "alpha" => p.alpha = parse_scalar("alpha", value).map_err(at)?,
                "beta" => p.beta = parse_scalar("beta", value).map_err(at)?,
                "rho" => p.rho = parse_scalar("rho", value).map_err(at)?,
                "gamma" => p.gamma = parse_scalar("gamma", value).map_err(at)?,
                "C" | "c" => p.c = parse_scalar("C", value).map_err(at)?,
                "retries" => p.retries = parse_scalar("retries", value).map_err(at)?,
                "budget" => p.budget.steps_per_restart = Some(parse_scalar("budget", value).map_err(at)?),
                other => return Err(at(format!("unknown key `{other}`"))),
            }
        }
        Ok(grid)
    }

    /// Cells in row-major order over `n`, `epsilon`, `m`, `seeds`.
    pub fn cells(&self) -> Vec<(usize, f64, usize, u64)> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &e in &self.epsilon {
                for &m in &self.m {
                    for &s in &self.seeds {
                        out.push((n, e, m, s));
                    }
                }
            }
        }
        out
    }

    /// Runs every cell; cells run in parallel, rows come back in grid order.
    pub fn run(&self) -> Vec<BenchRow> {
        self.cells()
            .into_par_iter()
            .map(|(n, epsilon, m, seed)| self.run_cell(n, epsilon, m, seed))
            .collect()
    }

    fn run_cell(&self, n: usize, epsilon: f64, m: usize, seed: u64) -> BenchRow {
        let start = Instant::now();
        let params = SolverParams {
            epsilon,
            seed,
            ..self.params
        };
        let outcome = match (gen_random_semidegree(n, epsilon, seed), gen_random_pattern(m, seed)) {
            (Ok(d), Ok(h)) => match solve_detailed(&d, &h, &params) {
                Ok(s) if verify_certificate(&d, &h, &s.certificate).is_ok() => Ok(s.attempts),
                Ok(s) => Err(("verification".to_string(), s.attempts)),
                Err(SolveError::SolveFailed { stage, attempts, .. }) => Err((stage.to_string(), attempts)),
                Err(_) => Err(("precondition".to_string(), 0)),
            },
            _ => Err(("generator".to_string(), 0)),
        };
        let wall_ms = start.elapsed().as_millis();
        let (success, stage_failed, retries_used) = match outcome {
            Ok(a) => (true, String::new(), a),
            Err((stage, a)) => (false, stage, a),
        };
        BenchRow {
            n,
            epsilon,
            m,
            seed,
            success,
            stage_failed,
            wall_ms,
            retries_used,
        }
    }
}

pub fn cmd_bench(config: &Path, csv_out: &Path) -> i32 {
    let text = or_exit!(
        fs::read_to_string(config).map_err(|e| format!("{}: {e}", config.display())),
        EXIT_USAGE
    );
    let grid = or_exit!(BenchGrid::parse(&text), EXIT_USAGE);
    let rows = grid.run();
    let f = or_exit!(
        File::create(csv_out).map_err(|e| format!("{}: {e}", csv_out.display())),
        EXIT_USAGE
    );
    let mut w = BufWriter::new(f);
    let written = writeln!(w, "{BENCH_HEADER}")
        .and_then(|_| rows.iter().try_for_each(|r| writeln!(w, "{}", r.to_csv())))
        .and_then(|_| w.flush());
    or_exit!(written, EXIT_USAGE);
    let ok = rows.iter().filter(|r| r.success).count();
    eprintln!("{ok}/{} cells solved", rows.len());
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g =
            BenchGrid::parse("n = 300\nepsilon = 0.05, 0.15\nm = 3\nseeds = 0..20 # twenty\nretries = 4\n").unwrap();
        assert_eq!(g.cells().len(), 40);
        assert_eq!(g.params.retries, 4);
        assert_eq!(g.seeds[19], 19);
        assert!(BenchGrid::parse("n 300").is_err());
        assert!(BenchGrid::parse("colour = red").is_err());
        assert!(BenchGrid::parse("n = x").is_err());
    }

    #[test]
    fn empty_grid_has_no_cells() {
        let g = BenchGrid::parse("n = 300\nepsilon =\nm = 2\nseeds = 0..3\n").unwrap();
        assert!(g.cells().is_empty());
        assert!(BenchGrid::parse("").unwrap().run().is_empty());
    }

    #[test]
    fn gen_then_solve_then_verify() {
        let dir = tempfile::tempdir().unwrap();
        let (d, h, c) = (
            dir.path().join("d.txt"),
            dir.path().join("h.txt"),
            dir.path().join("c.txt"),
        );
        let random = GenKind::Random {
            n: 300,
            epsilon: 0.15,
            seed: 7,
        };
        assert_eq!(cmd_gen(random, &d), EXIT_OK);
        assert_eq!(cmd_gen(GenKind::Pattern { m: 3, seed: 1 }, &h), EXIT_OK);
        assert_eq!(cmd_solve(&d, &h, &SolverParams::default(), &c), EXIT_OK);
        assert_eq!(cmd_verify(&d, &h, &c), EXIT_OK);
        let mut text = fs::read_to_string(&c).unwrap();
        text = text.replacen("route", "# route", 1);
        fs::write(&c, text).unwrap();
        assert_eq!(cmd_verify(&d, &h, &c), EXIT_FAILED);
    }

    #[test]
    fn missing_file_is_usage_error() {
        let p = Path::new("/nonexistent/spansub");
        assert_eq!(cmd_verify(p, p, p), EXIT_USAGE);
    }
}
