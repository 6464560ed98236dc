//! End-to-end analysis of a Dynkin type and catalogue batch runs.
//!
//! `analyze` wires the stages together: the perfect-square early exit,
//! the overlattice search, the classification of rank-2 complements for
//! each admissible discriminant, the tau-class comparisons, and the
//! conversion to residue classes mod b_R. `batch` runs a whole rank's
//! catalogue in parallel and aggregates the counts.

use std::collections::HashMap;
use std::sync::Mutex;

use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::binlat;
use crate::dynkin::{self, DynkinType};
use crate::error::{Error, Result};
use crate::fqf::FiniteQuadraticForm;
use crate::overlat::{self, Budget, SearchStatus};
use crate::primeclass::{self, TauClassSet};

/// Bump when the algorithm or report layout changes; part of cache keys.
pub const ALGO_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub budget: Budget,
    /// list supersingular primes up to this bound in the report
    pub primes_up_to: Option<u64>,
    /// permit ranks other than 20 (for tests and exploration)
    pub allow_any_rank: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            budget: Budget::default(),
            primes_up_to: None,
            allow_any_rank: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportStatus {
    Complete,
    Truncated,
    SquareDiscEmpty,
}

impl ReportStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReportStatus::Complete => "complete",
            ReportStatus::Truncated => "truncated",
            ReportStatus::SquareDiscEmpty => "square-disc-empty",
        }
    }
}

/// One rank-2 complement class matching a quotient.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    pub gram: [[i64; 2]; 2],
    pub s: TauClassSet,
}

/// One admissible overlattice class with its matches.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientReport {
    pub h_generators: Vec<Vec<u64>>,
    pub d: u64,
    pub neg_q: FiniteQuadraticForm,
    pub matches: Vec<MatchReport>,
}

/// Everything `analyze` produces for one type.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeReport {
    pub type_name: String,
    pub rank: u32,
    pub disc: u64,
    pub square_disc: bool,
    pub status: ReportStatus,
    pub quotients: Vec<QuotientReport>,
    pub s_r: TauClassSet,
    pub b_r: u64,
    pub sigma_r: Vec<u64>,
    pub density: BigRational,
    pub primes: Option<Vec<u64>>,
    /// component order of the tau classes (sorted prime divisors of disc)
    pub tau_primes: Vec<u64>,
}

impl TypeReport {
    pub fn density_string(&self) -> String {
        format!("{}/{}", self.density.numer(), self.density.denom())
    }
}

fn form_json(f: &FiniteQuadraticForm) -> Value {
    let k = f.num_generators();
    let rat = |r: &BigRational| format!("{}/{}", r.numer(), r.denom());
    json!({
        "orders": f.orders(),
        "q": f.q_values().iter().map(&rat).collect::<Vec<_>>(),
        "b": (0..k).map(|i| (0..k).map(|j| rat(f.b_entry(i, j))).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn tau_set_json(s: &TauClassSet) -> Value {
    json!(s.classes.iter().cloned().collect::<Vec<_>>())
}

/// The JSON object described in the external interface.
pub fn report_to_json(r: &TypeReport) -> Value {
    json!({
        "type": r.type_name,
        "rank": r.rank,
        "disc": r.disc,
        "square_disc": r.square_disc,
        "status": r.status.as_str(),
        "quotients": r.quotients.iter().map(|q| json!({
            "H_generators": q.h_generators,
            "d": q.d,
            "neg_q": form_json(&q.neg_q),
            "matches": q.matches.iter().map(|m| json!({
                "gram": m.gram,
                "S": tau_set_json(&m.s),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "S_R": tau_set_json(&r.s_r),
        "b_R": r.b_r,
        "Sigma_R": r.sigma_r,
        "density": r.density_string(),
        "primes": r.primes,
        "tau_primes": r.tau_primes,
    })
}

/// One CSV row: type, disc, status, b_R, Sigma_R (semicolon-joined), density.
pub fn report_to_csv_row(r: &TypeReport) -> String {
    let sigma = r
        .sigma_r
        .iter()
        .map(|u| u.to_string())
        .collect::<Vec<_>>()
        .join(";");
    format!(
        "{},{},{},{},{},{}",
        r.type_name,
        r.disc,
        r.status.as_str(),
        r.b_r,
        sigma,
        r.density_string()
    )
}

pub const CSV_HEADER: &str = "type,disc,status,b_R,Sigma_R,density";

/// Human-readable rendering for the CLI.
pub fn report_to_text(r: &TypeReport) -> String {
    let mut out = String::new();
    use std::fmt::Write;
    writeln!(out, "type:     {}", r.type_name).unwrap();
    writeln!(out, "rank:     {}", r.rank).unwrap();
    writeln!(out, "disc:     {}{}", r.disc, if r.square_disc { " (perfect square)" } else { "" }).unwrap();
    writeln!(out, "status:   {}", r.status.as_str()).unwrap();
    if !r.square_disc {
        writeln!(out, "tau primes: {:?}", r.tau_primes).unwrap();
        for q in &r.quotients {
            writeln!(out, "quotient d = {} via H = {:?}", q.d, q.h_generators).unwrap();
            for m in &q.matches {
                writeln!(
                    out,
                    "  T' gram {:?}: S = {:?}",
                    m.gram,
                    m.s.classes.iter().collect::<Vec<_>>()
                )
                .unwrap();
            }
        }
        writeln!(out, "S(R):     {:?}", r.s_r.classes.iter().collect::<Vec<_>>()).unwrap();
    }
    writeln!(out, "b_R:      {}", r.b_r).unwrap();
    writeln!(out, "Sigma_R:  {:?}", r.sigma_r).unwrap();
    writeln!(out, "density:  {}", r.density_string()).unwrap();
    if let Some(ps) = &r.primes {
        writeln!(out, "primes:   {:?}", ps).unwrap();
    }
    if r.status == ReportStatus::Truncated {
        writeln!(out, "note:     search truncated; S(R) is a lower bound").unwrap();
    }
    out
}

/// Analyze one Dynkin type end to end.
pub fn analyze(ty: &DynkinType, options: &AnalyzeOptions) -> Result<TypeReport> {
    if ty.rank() != 20 && !options.allow_any_rank {
        return Err(Error::RankNotTwenty(ty.rank()));
    }
    let disc = ty.disc();
    let tau_primes = primeclass::prime_divisors(disc);
    let (b_r, _) = primeclass::modulus(ty);
    if dynkin::is_perfect_square(disc) {
        let s_r = TauClassSet::empty(tau_primes.clone());
        let density = primeclass::density(&s_r);
        return Ok(TypeReport {
            type_name: ty.to_string(),
            rank: ty.rank(),
            disc,
            square_disc: true,
            status: ReportStatus::SquareDiscEmpty,
            quotients: Vec::new(),
            sigma_r: Vec::new(),
            density,
            primes: options.primes_up_to.map(|_| Vec::new()),
            s_r,
            b_r,
            tau_primes,
        });
    }

    let outcome = overlat::enumerate_admissible(ty, options.budget)?;
    let mut quotient_reports = Vec::new();
    let mut parts: Vec<TauClassSet> = Vec::new();
    for quot in &outcome.quotients {
        debug_assert_eq!(disc % quot.d, 0);
        let mut matches = Vec::new();
        for t_prime in binlat::enumerate_classes(quot.d)? {
            let s = primeclass::compute_s(&quot.neg_quotient, &t_prime, ty)?;
            let group_matches = t_prime.disc_form().invariant_factors()
                == quot.neg_quotient.invariant_factors();
            if group_matches {
                parts.push(s.clone());
                matches.push(MatchReport {
                    gram: t_prime.gram(),
                    s,
                });
            }
        }
        quotient_reports.push(QuotientReport {
            h_generators: quot.subgroup_generators.clone(),
            d: quot.d,
            neg_q: quot.neg_quotient.clone(),
            matches,
        });
    }
    let s_r = if parts.is_empty() {
        TauClassSet::empty(tau_primes.clone())
    } else {
        primeclass::union_s(&parts)
    };
    let (b_r2, sigma) = primeclass::sigma_r(&s_r, ty);
    debug_assert_eq!(b_r, b_r2);
    let density = primeclass::density(&s_r);
    let primes = options
        .primes_up_to
        .map(|n| primeclass::primes_up_to(&sigma, b_r, n));
    Ok(TypeReport {
        type_name: ty.to_string(),
        rank: ty.rank(),
        disc,
        square_disc: false,
        status: match outcome.status {
            SearchStatus::Complete => ReportStatus::Complete,
            SearchStatus::Truncated => ReportStatus::Truncated,
        },
        quotients: quotient_reports,
        s_r,
        b_r,
        sigma_r: sigma,
        density,
        primes,
        tau_primes,
    })
}

/// In-memory result cache keyed by type, algorithm version and budget.
#[derive(Default)]
pub struct AnalysisCache {
    map: Mutex<HashMap<(String, u32, u64, Option<u64>, Option<u64>, bool), TypeReport>>,
}

impl AnalysisCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn analyze(&self, ty: &DynkinType, options: &AnalyzeOptions) -> Result<TypeReport> {
        let key = (
            ty.to_string(),
            ALGO_VERSION,
            options.budget.max_nodes,
            options.budget.max_seconds,
            options.primes_up_to,
            options.allow_any_rank,
        );
        if let Some(hit) = self.map.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let report = analyze(ty, options)?;
        self.map
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| report.clone());
        Ok(report)
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchSummary {
    pub total: usize,
    pub non_square_disc: usize,
    pub completed: usize,
    pub truncated: usize,
    pub non_empty_completed: usize,
}

#[derive(Debug)]
pub struct BatchResult {
    pub reports: Vec<Result<TypeReport>>,
    pub summary: BatchSummary,
}

/// Analyze every type of a rank. Per-type failures are recorded, not
/// propagated.
pub fn batch(rank: u32, options: &AnalyzeOptions) -> BatchResult {
    let types = dynkin::enumerate_types(rank);
    let reports: Vec<Result<TypeReport>> = types
        .par_iter()
        .map(|ty| analyze(ty, options))
        .collect();
    let mut summary = BatchSummary {
        total: types.len(),
        non_square_disc: 0,
        completed: 0,
        truncated: 0,
        non_empty_completed: 0,
    };
    for r in reports.iter().flatten() {
        if !r.square_disc {
            summary.non_square_disc += 1;
            match r.status {
                ReportStatus::Complete => {
                    summary.completed += 1;
                    if !r.s_r.is_empty() {
                        summary.non_empty_completed += 1;
                    }
                }
                ReportStatus::Truncated => summary.truncated += 1,
                ReportStatus::SquareDiscEmpty => unreachable!(),
            }
        }
    }
    BatchResult { reports, summary }
}
