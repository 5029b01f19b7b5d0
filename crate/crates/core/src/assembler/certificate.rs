//! Spanning-subdivision certificates: text format and independent verification.

use std::fmt::{self, Write as _};
use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::PatternDigraph;
use crate::digraph::Digraph;

/// The directed path of the host realising one arc `from -> to` of the pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub from: usize,
    pub to: usize,
    pub path: Vec<usize>,
}

impl Route {
    pub fn internal(&self) -> &[usize] {
        if self.path.len() <= 2 {
            &[]
        } else {
            &self.path[1..self.path.len() - 1]
        }
    }
}

/// Branch vertices plus one route per pattern arc, in the pattern's arc order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionCertificate {
    /// `branch[x]` is the host vertex standing in for pattern vertex `x`.
    pub branch: Vec<usize>,
    pub routes: Vec<Route>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct CertificateParseError {
    pub line: usize,
    pub msg: String,
}

impl SubdivisionCertificate {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.branch.len(), self.routes.len());
        for (x, v) in self.branch.iter().enumerate() {
            let _ = writeln!(s, "branch {x} {v}");
        }
        for r in &self.routes {
            let _ = write!(s, "route {} {} :", r.from, r.to);
            for v in &r.path {
                let _ = write!(s, " {v}");
            }
            s.push('\n');
        }
        s
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_text().as_bytes())
    }

    pub fn parse(text: &str) -> Result<Self, CertificateParseError> {
        Self::read_text(text.as_bytes())
    }

    pub fn read_text<R: BufRead>(reader: R) -> Result<Self, CertificateParseError> {
        let mut header: Option<(usize, usize)> = None;
        let mut branch: Vec<Option<usize>> = Vec::new();
        let mut routes = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let err = |msg: &str| CertificateParseError {
                line: lineno,
                msg: msg.to_string(),
            };
            let line = line.map_err(|e| err(&e.to_string()))?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = t.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| err(&format!("not an integer: {s:?}")));
            match (header, toks[0]) {
                (None, _) => {
                    if toks.len() != 2 {
                        return Err(err("expected `k m` header"));
                    }
                    let (k, m) = (num(toks[0])?, num(toks[1])?);
                    header = Some((k, m));
                    branch = vec![None; k];
                }
                (Some(_), "branch") => {
                    if toks.len() != 3 {
                        return Err(err("expected `branch x v`"));
                    }
                    let (x, v) = (num(toks[1])?, num(toks[2])?);
                    let slot = branch.get_mut(x).ok_or_else(|| err("branch index exceeds k"))?;
                    if slot.replace(v).is_some() {
                        return Err(err("branch listed twice"));
                    }
                }
                (Some(_), "route") => {
                    if toks.len() < 4 || toks[3] != ":" {
                        return Err(err("expected `route a b : v0 .. vL`"));
                    }
                    let path = toks[4..].iter().map(|s| num(s)).collect::<Result<Vec<_>, _>>()?;
                    routes.push(Route {
                        from: num(toks[1])?,
                        to: num(toks[2])?,
                        path,
                    });
                }
                (Some(_), other) => return Err(err(&format!("unknown record {other:?}"))),
            }
        }
        let (_, m) = header.ok_or(CertificateParseError {
            line: 0,
            msg: "missing header".into(),
        })?;
        if routes.len() != m {
            return Err(CertificateParseError {
                line: 0,
                msg: format!("header promises {m} routes, found {}", routes.len()),
            });
        }
        let branch = branch
            .into_iter()
            .enumerate()
            .map(|(x, v)| {
                v.ok_or(CertificateParseError {
                    line: 0,
                    msg: format!("missing branch for pattern vertex {x}"),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(SubdivisionCertificate { branch, routes })
    }
}

/// Violation classes, in the order the verifier looks for them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    /// Wrong number of branch vertices or routes, or a route not matching its arc.
    Shape,
    VertexOutOfRange,
    BranchNotInjective,
    /// A route runs from the head's branch vertex to the tail's, or uses an arc backwards.
    Orientation,
    EndpointMismatch,
    /// An internal vertex is repeated or coincides with a branch vertex.
    Overlap,
    MissingArc,
    NotSpanning,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::Shape => "shape",
            ViolationKind::VertexOutOfRange => "vertex out of range",
            ViolationKind::BranchNotInjective => "branch map not injective",
            ViolationKind::Orientation => "orientation",
            ViolationKind::EndpointMismatch => "endpoint mismatch",
            ViolationKind::Overlap => "internal vertices not disjoint",
            ViolationKind::MissingArc => "missing arc",
            ViolationKind::NotSpanning => "not spanning",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

/// Every instance of the first violation class found; empty means accepted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn kind(&self) -> Option<ViolationKind> {
        self.violations.first().map(|v| v.kind)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            None => write!(f, "certificate accepted"),
            Some(kind) => {
                writeln!(
                    f,
                    "certificate rejected: {kind} ({} instance(s))",
                    self.violations.len()
                )?;
                for v in &self.violations {
                    writeln!(f, "  {}", v.detail)?;
                }
                Ok(())
            }
        }
    }
}

/// Re-checks every certificate invariant from the raw data.
pub fn verify_certificate(host: &Digraph, pattern: &PatternDigraph, cert: &SubdivisionCertificate) -> VerifyReport {
    let mut found: Vec<Violation> = Vec::new();

    // shape
    if cert.branch.len() != pattern.k() {
        flag(
            &mut found,
            ViolationKind::Shape,
            format!(
                "{} branch vertices for a {}-vertex pattern",
                cert.branch.len(),
                pattern.k()
            ),
        );
    }
    if cert.routes.len() != pattern.m() {
        flag(
            &mut found,
            ViolationKind::Shape,
            format!("{} routes for a {}-arc pattern", cert.routes.len(), pattern.m()),
        );
    }
    for (i, (r, &(a, b))) in cert.routes.iter().zip(pattern.arcs()).enumerate() {
        if (r.from, r.to) != (a, b) {
            flag(
                &mut found,
                ViolationKind::Shape,
                format!("route {i} labelled {}->{} but arc {i} is {a}->{b}", r.from, r.to),
            );
        }
        if r.path.len() < 2 {
            flag(
                &mut found,
                ViolationKind::Shape,
                format!("route {i} has fewer than two vertices"),
            );
        }
    }
    if let Some(r) = take_first_class(&mut found) {
        return r;
    }

    let n = host.n();
    for (x, &v) in cert.branch.iter().enumerate() {
        if v >= n {
            flag(
                &mut found,
                ViolationKind::VertexOutOfRange,
                format!("branch {x} maps to {v}"),
            );
        }
    }
    for (i, r) in cert.routes.iter().enumerate() {
        for &v in r.path.iter().filter(|&&v| v >= n) {
            flag(
                &mut found,
                ViolationKind::VertexOutOfRange,
                format!("route {i} visits {v}"),
            );
        }
    }
    if let Some(r) = take_first_class(&mut found) {
        return r;
    }

    let mut branch_of = vec![None; n];
    for (x, &v) in cert.branch.iter().enumerate() {
        if let Some(y) = branch_of[v].replace(x) {
            flag(
                &mut found,
                ViolationKind::BranchNotInjective,
                format!("pattern vertices {y} and {x} both map to {v}"),
            );
        }
    }
    if let Some(r) = take_first_class(&mut found) {
        return r;
    }

    for (i, r) in cert.routes.iter().enumerate() {
        let (s, t) = (cert.branch[r.from], cert.branch[r.to]);
        let (first, last) = (r.path[0], *r.path.last().expect("len >= 2"));
        if (first, last) == (s, t) {
            continue;
        }
        if (first, last) == (t, s) {
            flag(
                &mut found,
                ViolationKind::Orientation,
                format!("route {i} runs {first}->{last}, against arc {}->{}", r.from, r.to),
            );
        } else {
            flag(
                &mut found,
                ViolationKind::EndpointMismatch,
                format!("route {i} runs {first}->{last}, expected {s}->{t}"),
            );
        }
    }
    if let Some(r) = take_first_class(&mut found) {
        return r;
    }

    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (i, r) in cert.routes.iter().enumerate() {
        for &v in r.internal() {
            if let Some(x) = branch_of[v] {
                flag(
                    &mut found,
                    ViolationKind::Overlap,
                    format!("route {i} passes through branch vertex {v} (pattern vertex {x})"),
                );
            } else if let Some(j) = owner[v].replace(i) {
                flag(
                    &mut found,
                    ViolationKind::Overlap,
                    format!("vertex {v} is internal to routes {j} and {i}"),
                );
            }
        }
    }
    if let Some(r) = take_first_class(&mut found) {
        return r;
    }

    for (i, r) in cert.routes.iter().enumerate() {
        for w in r.path.windows(2) {
            let (x, y) = (w[0], w[1]);
            if host.has_arc(x, y) {
                continue;
            }
            if host.has_arc(y, x) {
                flag(
                    &mut found,
                    ViolationKind::Orientation,
                    format!("route {i} uses {x}->{y} but only {y}->{x} exists"),
                );
            } else {
                flag(
                    &mut found,
                    ViolationKind::MissingArc,
                    format!("route {i} uses missing arc {x}->{y}"),
                );
            }
        }
    }
    if let Some(r) = take_first_class(&mut found) {
        return r;
    }

    for v in 0..n {
        if branch_of[v].is_none() && owner[v].is_none() {
            flag(
                &mut found,
                ViolationKind::NotSpanning,
                format!("vertex {v} is not covered"),
            );
        }
    }
    take_first_class(&mut found).unwrap_or_default()
}

fn flag(found: &mut Vec<Violation>, kind: ViolationKind, detail: String) {
    found.push(Violation { kind, detail });
}

fn take_first_class(found: &mut Vec<Violation>) -> Option<VerifyReport> {
    let kind = found.iter().map(|v| v.kind).min()?;
    let violations = found.drain(..).filter(|v| v.kind == kind).collect();
    Some(VerifyReport { violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> (Digraph, PatternDigraph, SubdivisionCertificate) {
        let d = Digraph::directed_cycle(3);
        let h = PatternDigraph::new(Digraph::directed_cycle(3)).unwrap();
        let routes = h
            .arcs()
            .iter()
            .map(|&(a, b)| Route {
                from: a,
                to: b,
                path: vec![a, b],
            })
            .collect();
        let cert = SubdivisionCertificate {
            branch: vec![0, 1, 2],
            routes,
        };
        (d, h, cert)
    }

    #[test]
    fn accepts_identity() {
        let (d, h, cert) = c3();
        assert!(verify_certificate(&d, &h, &cert).is_ok());
    }

    #[test]
    fn rejects_non_spanning() {
        let d = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 0), (3, 0)]).unwrap();
        let (_, h, cert) = c3();
        let r = verify_certificate(&d, &h, &cert);
        assert_eq!(r.kind(), Some(ViolationKind::NotSpanning));
        assert_eq!(r.violations.len(), 1);
    }

    #[test]
    fn rejects_backwards_route() {
        let (d, h, mut cert) = c3();
        cert.routes[0].path.reverse();
        assert_eq!(
            verify_certificate(&d, &h, &cert).kind(),
            Some(ViolationKind::Orientation)
        );
    }

    #[test]
    fn rejects_backwards_arc() {
        // host 0->1->2->0 plus 3 with 1->3 and 2->3; route 1->2 detours 1,3,2 but 3->2 is missing
        let d = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 0), (1, 3), (2, 3)]).unwrap();
        let (_, h, mut cert) = c3();
        let i = cert.routes.iter().position(|r| (r.from, r.to) == (1, 2)).unwrap();
        cert.routes[i].path = vec![1, 3, 2];
        let r = verify_certificate(&d, &h, &cert);
        assert_eq!(r.kind(), Some(ViolationKind::Orientation), "{r}");
    }

    #[test]
    fn shape_and_range() {
        let (d, h, mut cert) = c3();
        cert.routes.pop();
        assert_eq!(verify_certificate(&d, &h, &cert).kind(), Some(ViolationKind::Shape));
        let (d, h, mut cert) = c3();
        cert.branch[2] = 9;
        assert_eq!(
            verify_certificate(&d, &h, &cert).kind(),
            Some(ViolationKind::VertexOutOfRange)
        );
        let (d, h, mut cert) = c3();
        cert.branch[2] = 0;
        assert_eq!(
            verify_certificate(&d, &h, &cert).kind(),
            Some(ViolationKind::BranchNotInjective)
        );
    }

    #[test]
    fn text_roundtrip() {
        let (_, _, cert) = c3();
        let text = format!("# header comment\n{}", cert.to_text());
        assert_eq!(SubdivisionCertificate::parse(&text).unwrap(), cert);
        assert!(SubdivisionCertificate::parse("1 1\nbranch 0 0\n").is_err());
        assert!(SubdivisionCertificate::parse("1 0\nbranch 0 0\nbranch 0 1\n").is_err());
        assert!(SubdivisionCertificate::parse("1 1\nbranch 0 0\nroute 0 0 0 1\n").is_err());
    }
}
