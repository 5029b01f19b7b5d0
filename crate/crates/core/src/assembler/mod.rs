//! Spanning subdivisions: the staged solver, the certificate checker and an
//! exhaustive oracle for tiny hosts.

use std::fmt;

use rand::seq::index::sample;
use thiserror::Error;

use crate::absorber::build_absorbing_path;
use crate::bitset::VertexSet;
use crate::bounds::ceil_frac;
use crate::connector::{build_reservoir, connect_through, Reservoir};
use crate::digraph::{Digraph, DigraphError};
use crate::hamilton::{hamiltonian_path, Budget};
use crate::rng::{child_seed, stream};

pub mod certificate;
pub mod oracle;
pub mod undirected;

pub use certificate::{
    verify_certificate, CertificateParseError, Route, SubdivisionCertificate, VerifyReport, Violation, ViolationKind,
};
pub use oracle::{brute_force_subdivision, InstanceTooLarge, ORACLE_LIMIT};
pub use undirected::{solve_undirected, UndirectedGraph};

/// Branch samples tried per attempt before giving up on the attempt.
const BRANCH_RESAMPLES: u64 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern has no arcs")]
    NoArcs,
    #[error("pattern vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

/// A simple digraph `H` with at least one arc and no isolated vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternDigraph {
    graph: Digraph,
    arcs: Vec<(usize, usize)>,
}

impl PatternDigraph {
    pub fn new(graph: Digraph) -> Result<Self, PatternError> {
        if graph.arc_count() == 0 {
            return Err(PatternError::NoArcs);
        }
        if let Some(x) = (0..graph.n()).find(|&x| graph.out_degree(x) + graph.in_degree(x) == 0) {
            return Err(PatternError::IsolatedVertex(x));
        }
        let mut arcs: Vec<(usize, usize)> = graph.arcs().collect();
        arcs.sort_unstable();
        debug_assert!(graph.n() <= 2 * arcs.len());
        Ok(PatternDigraph { graph, arcs })
    }

    pub fn from_arcs<I: IntoIterator<Item = (usize, usize)>>(k: usize, arcs: I) -> Result<Self, PatternError> {
        Self::new(Digraph::from_arcs(k, arcs)?)
    }

    pub fn parse(text: &str) -> Result<Self, PatternError> {
        Self::new(Digraph::parse(text)?)
    }

    pub fn k(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    /// Arcs in lexicographic order; the first one is routed through the
    /// Hamiltonian path and the absorber.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverParams {
    pub epsilon: f64,
    /// Required ratio `n / m`.
    pub c: f64,
    /// Absorber: slot cap is `⌊(alpha/3)·n⌋`.
    pub alpha: f64,
    /// Absorber: compatible slots per vertex.
    pub beta: f64,
    /// Reservoir size cap, as a fraction of the reduced host.
    pub rho: f64,
    /// Reservoir coverage per ordered pair, as a fraction of the reduced host.
    pub gamma: f64,
    pub seed: u64,
    pub retries: usize,
    pub budget: Budget,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            epsilon: 0.15,
            c: 50.0,
            alpha: 0.45,
            beta: 0.045,
            rho: 0.25,
            gamma: 0.045,
            seed: 0,
            retries: 10,
            budget: Budget::default(),
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<(), String> {
        let unit = [
            ("epsilon", self.epsilon),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("rho", self.rho),
            ("gamma", self.gamma),
        ];
        for (name, v) in unit {
            if !(v > 0.0 && v < 1.0) {
                return Err(format!("{name} = {v} must lie in (0, 1)"));
            }
        }
        if self.epsilon >= 0.5 {
            return Err(format!("epsilon = {} must be below 1/2", self.epsilon));
        }
        if self.beta >= self.alpha {
            return Err(format!("beta = {} must be below alpha = {}", self.beta, self.alpha));
        }
        if self.gamma >= self.rho {
            return Err(format!("gamma = {} must be below rho = {}", self.gamma, self.rho));
        }
        if self.c.is_nan() || self.c <= 0.0 {
            return Err(format!("C = {} must be positive", self.c));
        }
        if self.retries == 0 {
            return Err("retries must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    AbsorbingPath,
    Reservoir,
    Branching,
    HamiltonPath,
    Routing,
    Absorption,
    Verification,
    Exhaustive,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::AbsorbingPath => "absorbing_path",
            Stage::Reservoir => "reservoir",
            Stage::Branching => "branching",
            Stage::HamiltonPath => "hamilton_path",
            Stage::Routing => "routing",
            Stage::Absorption => "absorption",
            Stage::Verification => "verification",
            Stage::Exhaustive => "exhaustive",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("invalid pattern: {0}")]
    InvalidPattern(#[from] PatternError),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("failed at stage {stage} after {attempts} attempt(s): {diagnostics}")]
    SolveFailed {
        stage: Stage,
        attempts: usize,
        diagnostics: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solved {
    pub certificate: SubdivisionCertificate,
    /// Attempts consumed, counting the successful one.
    pub attempts: usize,
}

pub fn solve(
    host: &Digraph,
    pattern: &PatternDigraph,
    params: &SolverParams,
) -> Result<SubdivisionCertificate, SolveError> {
    solve_detailed(host, pattern, params).map(|s| s.certificate)
}

/// Like [`solve`], also reporting how many attempts were used.
///
/// Hosts with at most [`ORACLE_LIMIT`] vertices are decided exactly, whatever
/// their degrees.
pub fn solve_detailed(host: &Digraph, pattern: &PatternDigraph, params: &SolverParams) -> Result<Solved, SolveError> {
    params.validate().map_err(SolveError::PreconditionViolated)?;
    let n = host.n();
    if n <= ORACLE_LIMIT {
        return match brute_force_subdivision(host, pattern) {
            Ok(Some(certificate)) => Ok(Solved {
                certificate,
                attempts: 1,
            }),
            _ => Err(SolveError::SolveFailed {
                stage: Stage::Exhaustive,
                attempts: 1,
                diagnostics: format!("no spanning subdivision of the {}-arc pattern exists", pattern.m()),
            }),
        };
    }
    let m = pattern.m();
    if (n as f64) < params.c * m as f64 - 1e-9 {
        return Err(SolveError::PreconditionViolated(format!(
            "n = {n} < C·m = {}·{m}",
            params.c
        )));
    }
    let required = ceil_frac(0.5 + params.epsilon, n);
    let found = host.min_semi_degree();
    if found < required {
        return Err(SolveError::PreconditionViolated(format!(
            "δ⁰ = {found} < ⌈(1/2 + {})·{n}⌉ = {required}",
            params.epsilon
        )));
    }

    let mut last = (Stage::AbsorbingPath, String::new());
    for attempt in 0..params.retries {
        let seed = child_seed(params.seed, attempt as u64);
        match run_attempt(host, pattern, params, seed) {
            Ok(certificate) => {
                return Ok(Solved {
                    certificate,
                    attempts: attempt + 1,
                })
            }
            Err(e) => last = e,
        }
    }
    Err(SolveError::SolveFailed {
        stage: last.0,
        attempts: params.retries,
        diagnostics: last.1,
    })
}

type StageResult<T> = Result<T, (Stage, String)>;

fn check_degree(stage: Stage, name: &str, g: &Digraph, required: usize) -> StageResult<()> {
    let found = g.min_semi_degree();
    if found < required {
        return Err((
            stage,
            format!("δ⁰({name}) = {found} < {required} on {} vertices", g.n()),
        ));
    }
    Ok(())
}

fn run_attempt(
    host: &Digraph,
    pattern: &PatternDigraph,
    p: &SolverParams,
    seed: u64,
) -> StageResult<SubdivisionCertificate> {
    let n = host.n();
    let (k, m) = (pattern.k(), pattern.m());

    let mut absorber = build_absorbing_path(host, p.alpha, p.beta, p.epsilon, child_seed(seed, 0))
        .map_err(|e| (Stage::AbsorbingPath, e.to_string()))?;
    let (w1, w2) = absorber.endpoints();
    let on_path = absorber.vertex_set(n);

    let ends = VertexSet::from_members(n, [w1, w2]);
    let d1 = host.remove_add(&on_path, &ends);
    let n1 = d1.graph.n();
    check_degree(Stage::Reservoir, "D₁", &d1.graph, ceil_frac(0.5 + p.epsilon / 2.0, n1))?;
    let local = build_reservoir(&d1.graph, p.rho, p.gamma, p.epsilon / 2.0, child_seed(seed, 1))
        .map_err(|e| (Stage::Reservoir, e.to_string()))?;
    let members = VertexSet::from_members(n, local.members().iter().map(|x| d1.original(x)));
    let mut reservoir = Reservoir::from_parts(members, local.gamma_n()).exclude(&ends);
    if reservoir.gamma_n() < m + 2 {
        return Err((
            Stage::Reservoir,
            format!("reservoir coverage {} < m + 2 = {}", reservoir.gamma_n(), m + 2),
        ));
    }

    let mut removed = on_path;
    removed.union_with(reservoir.members());
    let d2 = host.remove_add(&removed, &VertexSet::new(n));
    let n2 = d2.graph.n();
    check_degree(Stage::Branching, "D₂", &d2.graph, ceil_frac(0.5 + p.epsilon / 4.0, n2))?;
    if n2 <= k {
        return Err((Stage::Branching, format!("{n2} vertices left for {k} branch vertices")));
    }

    let mut rng = stream(seed, 2);
    let mut last = (Stage::Branching, String::new());
    let mut found = None;
    for resample in 0..BRANCH_RESAMPLES {
        let picks = sample(&mut rng, n2, k).into_vec();
        let d3 = d2
            .graph
            .remove_add(&VertexSet::from_members(n2, picks.iter().copied()), &VertexSet::new(n2));
        let n3 = d3.graph.n();
        if let Err(e) = check_degree(Stage::Branching, "D₃", &d3.graph, n3.div_ceil(2)) {
            last = e;
            continue;
        }
        match hamiltonian_path(&d3.graph, child_seed(seed, 3 + resample), p.budget) {
            Ok(path) => {
                let branch: Vec<usize> = picks.iter().map(|&x| d2.original(x)).collect();
                let path: Vec<usize> = path.into_iter().map(|x| d2.original(d3.original(x))).collect();
                found = Some((branch, path));
                break;
            }
            Err(e) => last = (Stage::HamiltonPath, e.to_string()),
        }
    }
    let (branch, ham) = found.ok_or(last)?;

    let arcs = pattern.arcs();
    let (x1, x2) = arcs[0];
    let (v1, v2) = (branch[x1], branch[x2]);
    let (u1, u2) = (ham[0], ham[ham.len() - 1]);
    let mut hop =
        |a: usize, b: usize| connect_through(host, &mut reservoir, a, b).map_err(|e| (Stage::Routing, e.to_string()));
    let z1 = hop(v1, u1)?;
    let z2 = hop(u2, w1)?;
    let z3 = hop(w2, v2)?;
    let mut short = Vec::with_capacity(m - 1);
    for &(a, b) in &arcs[1..] {
        let z = hop(branch[a], branch[b])?;
        short.push(Route {
            from: a,
            to: b,
            path: vec![branch[a], z, branch[b]],
        });
    }

    let leftover = reservoir.unused().to_vec();
    let absorbed = absorber
        .absorb(host, &leftover)
        .map_err(|e| (Stage::Absorption, e.to_string()))?;

    let mut long = Vec::with_capacity(n);
    long.extend([v1, z1]);
    long.extend_from_slice(&ham);
    long.push(z2);
    long.extend_from_slice(&absorbed);
    long.extend([z3, v2]);
    let mut routes = vec![Route {
        from: x1,
        to: x2,
        path: long,
    }];
    routes.extend(short);
    let certificate = SubdivisionCertificate { branch, routes };
    let report = verify_certificate(host, pattern, &certificate);
    if !report.is_ok() {
        return Err((Stage::Verification, report.to_string()));
    }
    Ok(certificate)
}
