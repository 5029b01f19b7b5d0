//! `(n, t, d)`-tuple systems and selection of small absorbing families.
//!
//! A tuple system relates an index set `X` (`|X| <= n²`) to ordered `t`-tuples
//! over a ground set `Y` of size `n`; it is valid when every `x` is related to
//! at least `d·nᵗ` tuples. [`select_family`] looks for a family of pairwise
//! disjoint tuples, at most `(α/t)·n` of them, such that every `x` is related
//! to at least `⌈β·n⌉` members of the family.
//!
//! Selection is randomised and always re-verified by [`check_family`]:
//!
//! 1. draw `⌈α·n / 2t⌉` uniform tuples (distinct entries, repeats rejected) and
//!    keep them greedily in draw order while they stay disjoint, skipping
//!    tuples related to no `x`;
//! 2. while some `x` is under-covered and the size cap allows, score a batch of
//!    disjoint candidates (every free element when `t = 1`) and keep the one
//!    maximising `Σ_x 2^(-cov(x))` over the `x` it covers;
//! 3. verify from scratch; on failure retry on a fresh stream.
//!
//! The candidate score in step 2 does not depend on `β`, so for a fixed seed
//! the sequence of kept tuples is the same for every `β` and only the stopping
//! point moves. Success at `β` therefore implies success at any `β' <= β`.

use std::collections::HashSet;

use rand::Rng;
use thiserror::Error;

use crate::bounds::{ceil_frac, floor_frac};
use crate::rng;

/// Largest arity [`verify_tuple_system`] will enumerate.
pub const MAX_ENUMERATED_ARITY: usize = 3;

/// Default number of fresh attempts in [`select_family`].
pub const DEFAULT_MAX_RETRIES: usize = 20;

/// Candidates scored per repair step when `t > 1`; with `t = 1` every free
/// element is scored.
const REPAIR_BATCH: usize = 64;

/// Coverage weight is `WEIGHT_BASE^cov(x)`.
const WEIGHT_BASE: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TupleError {
    #[error("arity {0} is too large to enumerate (max {MAX_ENUMERATED_ARITY})")]
    ArityTooLarge(usize),
    #[error("not a tuple system: {deficient} index elements below the d·n^t bound")]
    InvalidSystem { deficient: usize },
    #[error("no family found after {attempts} attempts: {reason}")]
    FamilyNotFound { attempts: usize, reason: String },
}

pub trait TupleSystem: Sync {
    /// `n = |Y|`; ground elements are `0..n`.
    fn ground_size(&self) -> usize;
    /// `|X|`; index elements are `0..index_size()`.
    fn index_size(&self) -> usize;
    /// Tuple arity `t`.
    fn arity(&self) -> usize;
    /// Density `d`.
    fn density(&self) -> f64;
    /// Whether `(x, tuple)` belongs to the system.
    fn member(&self, x: usize, tuple: &[usize]) -> bool;

    /// Calls `f` on every `x` related to `tuple`. The default scans `X`.
    fn for_each_member(&self, tuple: &[usize], f: &mut dyn FnMut(usize)) {
        for x in 0..self.index_size() {
            if self.member(x, tuple) {
                f(x);
            }
        }
    }

    /// `|{z ∈ Yᵗ : member(x, z)}|`. The default enumerates `Yᵗ`.
    fn member_count(&self, x: usize) -> usize {
        let n = self.ground_size();
        let t = self.arity();
        let mut tuple = vec![0usize; t];
        let mut count = 0;
        loop {
            if self.member(x, &tuple) {
                count += 1;
            }
            // odometer increment
            let mut i = t;
            loop {
                if i == 0 {
                    return count;
                }
                i -= 1;
                tuple[i] += 1;
                if tuple[i] < n {
                    break;
                }
                tuple[i] = 0;
            }
        }
    }
}

/// Outcome of [`verify_tuple_system`].
#[derive(Debug, Clone, PartialEq)]
pub struct SystemReport {
    /// The bound `d·nᵗ`.
    pub required: f64,
    /// `(x, count)` for every index element below the bound.
    pub deficient: Vec<(usize, usize)>,
}

impl SystemReport {
    pub fn is_valid(&self) -> bool {
        self.deficient.is_empty()
    }
}

/// Checks that every `x` meets the `d·nᵗ` coverage bound.
pub fn verify_tuple_system<S: TupleSystem + ?Sized>(sys: &S) -> Result<SystemReport, TupleError> {
    let t = sys.arity();
    if t > MAX_ENUMERATED_ARITY {
        return Err(TupleError::ArityTooLarge(t));
    }
    let required = sys.density() * (sys.ground_size() as f64).powi(t as i32);
    let deficient = (0..sys.index_size())
        .filter_map(|x| {
            let c = sys.member_count(x);
            ((c as f64) + 1e-9 < required).then_some((x, c))
        })
        .collect();
    Ok(SystemReport { required, deficient })
}

/// An ordered list of `t`-tuples over the ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleFamily {
    arity: usize,
    entries: Vec<usize>,
}

impl TupleFamily {
    pub fn new(arity: usize) -> Self {
        assert!(arity >= 1);
        TupleFamily {
            arity,
            entries: Vec::new(),
        }
    }

    pub fn from_tuples<I, T>(arity: usize, tuples: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[usize]>,
    {
        let mut f = TupleFamily::new(arity);
        for t in tuples {
            f.push(t.as_ref());
        }
        f
    }

    pub fn push(&mut self, tuple: &[usize]) {
        assert_eq!(tuple.len(), self.arity, "tuple arity mismatch");
        self.entries.extend_from_slice(tuple);
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.entries.len() / self.arity
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn tuples(&self) -> std::slice::ChunksExact<'_, usize> {
        self.entries.chunks_exact(self.arity)
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.entries[i * self.arity..(i + 1) * self.arity]
    }

    /// Every ground element used by some tuple.
    pub fn elements(&self) -> &[usize] {
        &self.entries
    }
}

/// A broken conclusion found by [`check_family`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyViolation {
    ArityMismatch {
        expected: usize,
        found: usize,
    },
    OutOfRange {
        tuple: usize,
        element: usize,
    },
    RepeatedEntry {
        tuple: usize,
        element: usize,
    },
    NotDisjoint {
        element: usize,
        first: usize,
        second: usize,
    },
    TooLarge {
        size: usize,
        cap: usize,
    },
    Undercovered {
        x: usize,
        count: usize,
        required: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub violations: Vec<FamilyViolation>,
}

impl FamilyReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Re-derives disjointness, the `(α/t)·n` size cap and `⌈β·n⌉` coverage from
/// the raw family.
pub fn check_family<S: TupleSystem + ?Sized>(sys: &S, family: &TupleFamily, alpha: f64, beta: f64) -> FamilyReport {
    let n = sys.ground_size();
    let t = sys.arity();
    let mut violations = Vec::new();
    if family.arity() != t {
        violations.push(FamilyViolation::ArityMismatch {
            expected: t,
            found: family.arity(),
        });
        return FamilyReport { violations };
    }

    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (i, tuple) in family.tuples().enumerate() {
        for (j, &e) in tuple.iter().enumerate() {
            if e >= n {
                violations.push(FamilyViolation::OutOfRange { tuple: i, element: e });
                continue;
            }
            if tuple[..j].contains(&e) {
                violations.push(FamilyViolation::RepeatedEntry { tuple: i, element: e });
                continue;
            }
            match owner[e] {
                Some(first) => violations.push(FamilyViolation::NotDisjoint {
                    element: e,
                    first,
                    second: i,
                }),
                None => owner[e] = Some(i),
            }
        }
    }

    let cap = floor_frac(alpha / t as f64, n);
    if family.len() > cap {
        violations.push(FamilyViolation::TooLarge {
            size: family.len(),
            cap,
        });
    }

    let required = ceil_frac(beta, n);
    for x in 0..sys.index_size() {
        let count = family.tuples().filter(|z| sys.member(x, z)).count();
        if count < required {
            violations.push(FamilyViolation::Undercovered { x, count, required });
        }
    }
    FamilyReport { violations }
}

/// Finds a family satisfying all three [`check_family`] conclusions.
pub fn select_family<S: TupleSystem + ?Sized>(
    sys: &S,
    alpha: f64,
    beta: f64,
    seed: u64,
    max_retries: usize,
) -> Result<TupleFamily, TupleError> {
    let n = sys.ground_size();
    let t = sys.arity();
    let cap = floor_frac(alpha / t as f64, n).min(n / t);
    let target = ceil_frac(beta, n);
    if target > cap {
        return Err(TupleError::FamilyNotFound {
            attempts: 0,
            reason: format!("coverage {target} exceeds the size cap {cap}"),
        });
    }
    let report = verify_tuple_system(sys)?;
    if !report.is_valid() {
        return Err(TupleError::InvalidSystem {
            deficient: report.deficient.len(),
        });
    }

    let initial = ceil_frac(alpha / (2.0 * t as f64), n).min(cap);
    let attempts = max_retries.max(1);
    let mut last_deficit = 0;
    for attempt in 0..attempts {
        let mut rng = rng::stream(seed, attempt as u64);
        let mut sel = Selection::new(sys, target);
        sel.random_phase(&mut rng, initial);
        while sel.deficient > 0 && sel.family.len() < cap {
            if !sel.repair_step(&mut rng) {
                break;
            }
        }
        last_deficit = sel.deficient;
        if sel.deficient == 0 && check_family(sys, &sel.family, alpha, beta).is_ok() {
            return Ok(sel.family);
        }
    }
    Err(TupleError::FamilyNotFound {
        attempts,
        reason: format!("{last_deficit} index elements still under-covered at the size cap"),
    })
}

struct Selection<'a, S: ?Sized> {
    sys: &'a S,
    target: usize,
    family: TupleFamily,
    used: Vec<bool>,
    coverage: Vec<usize>,
    deficient: usize,
}

impl<'a, S: TupleSystem + ?Sized> Selection<'a, S> {
    fn new(sys: &'a S, target: usize) -> Self {
        let m = sys.index_size();
        Selection {
            sys,
            target,
            family: TupleFamily::new(sys.arity()),
            used: vec![false; sys.ground_size()],
            coverage: vec![0; m],
            deficient: if target > 0 { m } else { 0 },
        }
    }

    fn keep(&mut self, tuple: &[usize]) {
        for &e in tuple {
            self.used[e] = true;
        }
        let (coverage, deficient, target) = (&mut self.coverage, &mut self.deficient, self.target);
        self.sys.for_each_member(tuple, &mut |x| {
            coverage[x] += 1;
            if coverage[x] == target {
                *deficient -= 1;
            }
        });
        self.family.push(tuple);
    }

    fn random_phase<R: Rng>(&mut self, rng: &mut R, draws: usize) {
        let n = self.sys.ground_size();
        let t = self.sys.arity();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut drawn = Vec::with_capacity(draws);
        // A tuple space smaller than the draw count cannot supply distinct draws.
        let mut budget = 50 * draws + 100;
        while drawn.len() < draws && budget > 0 {
            budget -= 1;
            let tuple = distinct_sample(rng, n, t, |_| true);
            if let Some(tuple) = tuple {
                if seen.insert(tuple.clone()) {
                    drawn.push(tuple);
                }
            }
        }
        for tuple in drawn {
            if tuple.iter().all(|&e| !self.used[e]) && self.covers_something(&tuple) {
                self.keep(&tuple);
            }
        }
    }

    fn covers_something(&self, tuple: &[usize]) -> bool {
        let mut any = false;
        self.sys.for_each_member(tuple, &mut |_| any = true);
        any
    }

    fn repair_step<R: Rng>(&mut self, rng: &mut R) -> bool {
        let n = self.sys.ground_size();
        let t = self.sys.arity();
        let free: Vec<usize> = (0..n).filter(|&e| !self.used[e]).collect();
        if free.len() < t {
            return false;
        }
        let weights: Vec<f64> = self.coverage.iter().map(|&c| WEIGHT_BASE.powi(c as i32)).collect();
        let candidates: Vec<Vec<usize>> = if t == 1 {
            free.iter().map(|&e| vec![e]).collect()
        } else {
            (0..REPAIR_BATCH)
                .filter_map(|_| distinct_sample(rng, n, t, |e| !self.used[e]))
                .collect()
        };
        let mut best: Option<(f64, Vec<usize>)> = None;
        for cand in candidates {
            let mut score = 0.0;
            self.sys.for_each_member(&cand, &mut |x| score += weights[x]);
            if best.as_ref().is_none_or(|(s, _)| score > *s) {
                best = Some((score, cand));
            }
        }
        match best {
            Some((score, tuple)) if score > 0.0 => {
                self.keep(&tuple);
                true
            }
            _ => false,
        }
    }
}

/// `t` distinct elements of `0..n` accepted by `allowed`, uniformly at random.
fn distinct_sample<R: Rng>(rng: &mut R, n: usize, t: usize, allowed: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(t);
    let mut tries = 0;
    while out.len() < t {
        tries += 1;
        if tries > 64 * (t + 1) {
            return None;
        }
        let e = rng.gen_range(0..n);
        if allowed(e) && !out.contains(&e) {
            out.push(e);
        }
    }
    Some(out)
}
