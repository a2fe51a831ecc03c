//! Seeded randomized verification sweeps.
//!
//! A sweep draws random unique-sink instances within configured bounds and
//! runs the full battery of cross-checks on each: the two routes to each
//! projected transform, M-convexity and polytope supports, the Lorentzian
//! predicate, extension transport, coefficient log-concavity, fiber counts,
//! the Hessian-via-volume pipeline, the graph-flip identity, the lattice
//! Minkowski decomposition, and the derived-pair derivative identity. The
//! seed fully determines the instance stream (instance `i` uses stream `i`
//! of the seeded generator), so parallel and serial runs see identical
//! instances and produce identical verdicts.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissible::AdmissiblePair;
use crate::kostant::{self, KostantCache};
use crate::lorentzian::{
    self, build_k_matrix, conjugate_antidiagonal, hessian_slices, is_lorentzian_normalized,
    log_concavity_check,
};
use crate::multigraph::Multigraph;
use crate::permutahedra::is_m_convex;
use crate::polyalg::{Monomial, SparsePolynomial};
use crate::projections::{self, SigmaMode};
use crate::volume::hessian_via_volume;
use crate::{Error, Result};

/// Bounds and seed for a verification sweep. The seed fully determines the
/// generated instances.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SweepConfig {
    pub max_n: usize,
    pub max_edges: usize,
    pub max_netflow_entry: i64,
    pub instance_count: usize,
    pub rng_seed: u64,
    pub parallel_workers: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_n: 4,
            max_edges: 8,
            max_netflow_entry: 3,
            instance_count: 100,
            rng_seed: 42,
            parallel_workers: 1,
        }
    }
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        if self.max_n < 2 {
            return Err(Error::Precondition("max_n must be at least 2".into()));
        }
        if self.max_edges < self.max_n {
            return Err(Error::Precondition(
                "max_edges must be at least max_n so every vertex gets an outgoing edge".into(),
            ));
        }
        if self.max_netflow_entry < 1 {
            return Err(Error::Precondition(
                "max_netflow_entry must be positive".into(),
            ));
        }
        if self.parallel_workers < 1 {
            return Err(Error::Precondition(
                "parallel_workers must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Test hooks for negative controls. Not exposed on the command line.
#[derive(Clone, Default, Debug)]
pub struct SweepHooks {
    /// Corrupt one coefficient of the formula-mode phi transform of the
    /// instance with this index, to confirm that the sweep catches it.
    pub corrupt_sigma_phi_at: Option<usize>,
}

/// One named check with an optional failure certificate.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub certificate: Option<String>,
}

impl CheckRecord {
    fn pass(name: &str) -> Self {
        CheckRecord {
            name: name.into(),
            passed: true,
            certificate: None,
        }
    }

    fn fail(name: &str, certificate: String) -> Self {
        CheckRecord {
            name: name.into(),
            passed: false,
            certificate: Some(certificate),
        }
    }

    fn from_outcome(name: &str, outcome: Result<Option<String>>) -> Self {
        match outcome {
            Ok(None) => CheckRecord::pass(name),
            Ok(Some(certificate)) => CheckRecord::fail(name, certificate),
            Err(err) => CheckRecord::fail(name, format!("error: {err}")),
        }
    }
}

/// Everything recorded about one sweep instance.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub netflow: Vec<i64>,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
    /// Reproduction hint, present on failure.
    pub repro: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReportSummary {
    pub instances: usize,
    pub instances_passed: usize,
    pub instances_failed: usize,
    pub checks_run: usize,
    pub checks_failed: usize,
}

/// Full machine-readable result of a sweep. Identical configurations produce
/// identical reports except for the timing field.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: SweepConfig,
    pub instances: Vec<InstanceRecord>,
    pub summary: ReportSummary,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.summary.instances_failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Human-readable summary with one line per failed check.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "verify-theorem: {}/{} instances passed ({} checks run, {} failed), seed {}, {} ms\n",
            self.summary.instances_passed,
            self.summary.instances,
            self.summary.checks_run,
            self.summary.checks_failed,
            self.config.rng_seed,
            self.elapsed_ms,
        );
        for instance in &self.instances {
            if instance.passed {
                continue;
            }
            out.push_str(&format!(
                "instance {} FAILED: netflow {:?}, {} vertices, edges {:?}\n",
                instance.index, instance.netflow, instance.vertex_count, instance.edges
            ));
            for check in &instance.checks {
                if !check.passed {
                    out.push_str(&format!(
                        "  {}: {}\n",
                        check.name,
                        check.certificate.as_deref().unwrap_or("failed")
                    ));
                }
            }
            if let Some(repro) = &instance.repro {
                out.push_str(&format!("  repro: {repro}\n"));
            }
        }
        out
    }
}

/// Draws one instance: a unique-sink graph within the bounds (a spanning set
/// of forward edges so every non-sink vertex has an outgoing edge, plus
/// random extras, parallels allowed) and a projection-convention netflow
/// with at least one positive entry.
pub fn generate_instance(rng: &mut ChaCha8Rng, cfg: &SweepConfig) -> (Multigraph, Vec<i64>) {
    let n = rng.gen_range(2..=cfg.max_n);
    let mut edges = Vec::new();
    for tail in 1..=n {
        edges.push((tail, rng.gen_range(tail + 1..=n + 1)));
    }
    let extra = rng.gen_range(0..=cfg.max_edges - n);
    for _ in 0..extra {
        let tail = rng.gen_range(1..=n);
        let head = rng.gen_range(tail + 1..=n + 1);
        edges.push((tail, head));
    }
    let mut netflow: Vec<i64> = (0..n)
        .map(|_| rng.gen_range(0..=cfg.max_netflow_entry))
        .collect();
    if netflow.iter().all(|&x| x == 0) {
        let idx = rng.gen_range(0..n);
        netflow[idx] = rng.gen_range(1..=cfg.max_netflow_entry);
    }
    netflow.push(-netflow.iter().sum::<i64>());
    let graph = Multigraph::new(n + 1, edges).expect("generated edges are forward");
    debug_assert!(graph.has_unique_sink());
    (graph, netflow)
}

fn first_coefficient_mismatch(
    lhs: &SparsePolynomial,
    rhs: &SparsePolynomial,
    lhs_name: &str,
    rhs_name: &str,
) -> Option<String> {
    let mut support: BTreeSet<Monomial> = lhs.support().cloned().collect();
    support.extend(rhs.support().cloned());
    for mono in support {
        let left = lhs.coefficient(&mono);
        let right = rhs.coefficient(&mono);
        if left != right {
            return Some(format!(
                "coefficient mismatch at {:?}: {lhs_name} {left} vs {rhs_name} {right}",
                mono.0
            ));
        }
    }
    None
}

/// Runs the full battery of checks on one instance. The corruption flag is
/// the negative-control hook: it perturbs one coefficient of the
/// formula-mode phi transform before comparison.
pub fn check_instance(g: &Multigraph, a: &[i64], corrupt_sigma_phi: bool) -> Vec<CheckRecord> {
    let mut records = Vec::new();
    let n = g.vertex_count() - 1;

    let sigma_phi_formula = projections::sigma_phi(g, a, SigmaMode::Formula);
    let sigma_phi_brute = projections::sigma_phi(g, a, SigmaMode::BruteForce);
    let sigma_psi_formula = projections::sigma_psi(g, a, SigmaMode::Formula);
    let sigma_psi_brute = projections::sigma_psi(g, a, SigmaMode::BruteForce);

    // mode agreement, with the corruption hook applied to the formula side
    records.push(CheckRecord::from_outcome("sigma_phi_modes_agree", {
        match (&sigma_phi_formula, &sigma_phi_brute) {
            (Ok(formula), Ok(brute)) => {
                let formula = if corrupt_sigma_phi {
                    let bump = SparsePolynomial::one(formula.vars().to_vec());
                    formula.add(&bump).expect("same variables")
                } else {
                    formula.clone()
                };
                Ok(first_coefficient_mismatch(
                    &formula, brute, "formula", "bruteforce",
                ))
            }
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        }
    }));
    records.push(CheckRecord::from_outcome("sigma_psi_modes_agree", {
        match (&sigma_psi_formula, &sigma_psi_brute) {
            (Ok(formula), Ok(brute)) => Ok(first_coefficient_mismatch(
                formula,
                brute,
                "formula",
                "bruteforce",
            )),
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        }
    }));

    // supports are the lattice points of the projected polytopes and are
    // M-convex
    records.push(CheckRecord::from_outcome("supports_match_polytopes", {
        (|| {
            let sinkinfo = g.sink_structure()?;
            let sigma_p = sigma_phi_brute.as_ref().map_err(Error::clone)?;
            let sigma_q = sigma_psi_brute.as_ref().map_err(Error::clone)?;
            let p_points = projections::p_simplex_sum(&sinkinfo, a)?.lattice_points();
            let q_points = projections::q_simplex_sum(&sinkinfo, a)?.lattice_points();
            let phi_support: Vec<Vec<u32>> =
                sigma_p.support().map(|m| m.0.clone()).collect();
            let psi_support: Vec<Vec<u32>> =
                sigma_q.support().map(|m| m.0.clone()).collect();
            if phi_support != p_points.points() {
                return Ok(Some(format!(
                    "phi support {:?} differs from polytope lattice points {:?}",
                    phi_support,
                    p_points.points()
                )));
            }
            if psi_support != q_points.points() {
                return Ok(Some(format!(
                    "psi support {:?} differs from polytope lattice points {:?}",
                    psi_support,
                    q_points.points()
                )));
            }
            Ok(None)
        })()
    }));

    for (name, sigma) in [
        ("sigma_phi_support_m_convex", &sigma_phi_brute),
        ("sigma_psi_support_m_convex", &sigma_psi_brute),
    ] {
        records.push(CheckRecord::from_outcome(name, {
            match sigma {
                Ok(sigma) => {
                    let support = crate::permutahedra::LatticePointSet::from_points(
                        sigma.vars().to_vec(),
                        sigma.support().map(|m| m.0.clone()).collect(),
                    );
                    Ok(is_m_convex(&support).map(|w| {
                        format!(
                            "exchange fails at alpha={:?} beta={:?} index={}",
                            w.alpha, w.beta, w.index
                        )
                    }))
                }
                Err(e) => Err(e.clone()),
            }
        }));
    }

    // the main theorem
    for (name, sigma) in [
        ("sigma_phi_lorentzian", &sigma_phi_brute),
        ("sigma_psi_lorentzian", &sigma_psi_brute),
    ] {
        records.push(CheckRecord::from_outcome(name, {
            match sigma {
                Ok(sigma) => is_lorentzian_normalized(sigma).map(|verdict| {
                    if verdict.is_lorentzian() {
                        None
                    } else {
                        Some(verdict.to_string())
                    }
                }),
                Err(e) => Err(e.clone()),
            }
        }));
    }

    records.push(CheckRecord::from_outcome(
        "gex_transport",
        projections::gex_transport(g, a).map(|report| {
            if report.matched {
                None
            } else {
                Some(format!(
                    "{} coefficient mismatches, first: {:?}",
                    report.mismatches.len(),
                    report.mismatches.first()
                ))
            }
        }),
    ));

    for (name, sigma) in [
        ("log_concavity_phi", &sigma_phi_brute),
        ("log_concavity_psi", &sigma_psi_brute),
    ] {
        records.push(CheckRecord::from_outcome(name, {
            match sigma {
                Ok(sigma) => Ok(log_concavity_check(sigma).map(|w| w.to_string())),
                Err(e) => Err(e.clone()),
            }
        }));
    }

    // fibers: brute-force counts match the Kostant formula and sum to the
    // total count
    records.push(CheckRecord::from_outcome("fiber_counts", {
        (|| {
            let sinkinfo = g.sink_structure()?;
            let flows = kostant::enumerate_flows(g, a)?;
            let points = projections::p_simplex_sum(&sinkinfo, a)?.lattice_points();
            let mut total = BigInt::zero();
            for p in points.points() {
                let fiber = projections::fiber_phi(g, a, p)?;
                let brute = flows
                    .iter()
                    .filter(|flow| projections::phi(flow, &sinkinfo) == *p)
                    .count();
                if fiber.count != BigInt::from(brute) {
                    return Ok(Some(format!(
                        "fiber over {:?}: formula {} vs brute force {brute}",
                        p, fiber.count
                    )));
                }
                total += fiber.count;
            }
            if total != BigInt::from(flows.len()) {
                return Ok(Some(format!(
                    "fiber counts sum to {total}, expected {}",
                    flows.len()
                )));
            }
            Ok(None)
        })()
    }));

    // the Kostant value with an appended zero sink entry equals the value on
    // the restriction
    records.push(CheckRecord::from_outcome("restriction_consistency", {
        (|| {
            let sinkinfo = g.sink_structure()?;
            let restriction = g.restriction();
            let points = projections::p_simplex_sum(&sinkinfo, a)?.lattice_points();
            for p in points.points() {
                let ef = projections::escaping_flow_of_point(p, &sinkinfo);
                let reduced: Vec<i64> =
                    (0..n).map(|i| a[i] - ef.entries()[i] as i64).collect();
                let mut padded = reduced.clone();
                padded.push(0);
                let on_full = kostant::kostant(g, &padded)?;
                let on_restriction = kostant::kostant(&restriction, &reduced)?;
                if on_full != on_restriction {
                    return Ok(Some(format!(
                        "K(a - ef p, 0) = {on_full} on the full graph vs {on_restriction} on the restriction at p = {p:?}"
                    )));
                }
            }
            Ok(None)
        })()
    }));

    // every Hessian slice of the phi transform is the Kostant matrix at its
    // slice index
    records.push(CheckRecord::from_outcome("hessian_slices_are_k_matrices", {
        (|| {
            let total: i64 = a[..n].iter().sum();
            if total < 2 {
                return Ok(None);
            }
            let sigma = sigma_phi_brute.as_ref().map_err(Error::clone)?;
            for (d, slice) in hessian_slices(sigma)? {
                let direct = build_k_matrix(g, a, &d.0)?;
                if direct != slice {
                    return Ok(Some(format!(
                        "slice at {:?}: coefficients\n{slice}\nvs Kostant matrix\n{direct}",
                        d.0
                    )));
                }
            }
            Ok(None)
        })()
    }));

    // volume pipeline against the conjugated Kostant matrix, on the
    // sink-simplified graph, over every escaping-flow slice index
    records.push(CheckRecord::from_outcome("hessian_via_volume", {
        (|| {
            let total: i64 = a[..n].iter().sum();
            if total < 2 {
                return Ok(None);
            }
            let simple = g.simplify_at_sink()?;
            let sinkinfo = simple.sink_structure()?;
            let t_g = sinkinfo.t_g().to_vec();
            let mut outcome = None;
            for_each_weak_composition((total - 2) as u32, t_g.len(), &mut |parts| {
                if outcome.is_some() {
                    return;
                }
                let mut efd = vec![0u32; n];
                for (&vertex, &value) in t_g.iter().zip(parts) {
                    efd[vertex - 1] = value;
                }
                let via_volume = match hessian_via_volume(&simple, a, &efd) {
                    Ok(m) => m,
                    Err(e) => {
                        outcome = Some(format!("pipeline error at efd {efd:?}: {e}"));
                        return;
                    }
                };
                let direct = match build_k_matrix(&simple, a, parts) {
                    Ok(m) => conjugate_antidiagonal(&m),
                    Err(e) => {
                        outcome = Some(format!("matrix error at efd {efd:?}: {e}"));
                        return;
                    }
                };
                if via_volume != direct {
                    outcome = Some(format!(
                        "at efd {efd:?}: volume route\n{via_volume}\nvs conjugated Kostant matrix\n{direct}"
                    ));
                    return;
                }
                let sig = lorentzian::inertia(&via_volume);
                if sig.positive > 1 {
                    outcome = Some(format!(
                        "volume-route Hessian at efd {efd:?} has inertia {sig}"
                    ));
                }
            });
            Ok(outcome)
        })()
    }));

    // the flip identity over the netflow window
    records.push(CheckRecord::from_outcome("graph_flip_window", {
        let restriction = g.restriction();
        let flipped = g.flip_restriction();
        let mut lhs_cache = KostantCache::new(&restriction);
        let mut rhs_cache = KostantCache::new(&flipped);
        let mut outcome = None;
        for_each_window_vector(n, 3, &mut |c| {
            if outcome.is_some() {
                return;
            }
            let reversed: Vec<i64> = c.iter().rev().map(|&x| -x).collect();
            let lhs = lhs_cache.count(c).expect("restriction accepts any netflow");
            let rhs = rhs_cache.count(&reversed).expect("flip accepts any netflow");
            if lhs != rhs {
                outcome = Some(format!("K mismatch at {c:?}: {lhs} vs {rhs}"));
            }
        });
        Ok(outcome)
    }));

    records.push(CheckRecord::from_outcome(
        "minkowski_lattice",
        kostant::minkowski_lattice_check(g, a).map(|ok| {
            if ok {
                None
            } else {
                Some("sumset differs from direct enumeration".into())
            }
        }),
    ));

    // derived-pair derivative identity on the flow polytope's lattice
    // points, sink-edge coordinates first
    records.push(CheckRecord::from_outcome("derivative_identity", {
        (|| {
            let sinkinfo = g.sink_structure()?;
            let flows = kostant::enumerate_flows(g, a)?;
            let reordered: Vec<Vec<u32>> = flows
                .iter()
                .map(|flow| {
                    let mut coords = projections::phi(flow, &sinkinfo);
                    for (pos, &value) in flow.values().iter().enumerate() {
                        if !sinkinfo.s_g_positions().contains(&pos) {
                            coords.push(value);
                        }
                    }
                    coords
                })
                .collect();
            let pair = AdmissiblePair::new(g.edge_count(), sinkinfo.s_g().len(), reordered)?;
            for idx in 0..pair.proj_dim() {
                if !pair.derivative_identity_check(idx)? {
                    return Ok(Some(format!("derivative identity fails in direction {idx}")));
                }
            }
            Ok(None)
        })()
    }));

    records
}

/// Kostant log-concavity along root directions over a netflow window:
/// `K(v)^2 >= K(v + e_i - e_j) K(v - e_i + e_j)` for all `v` with entries in
/// `[-bound, bound]` summing to zero. Returns a witness string on failure.
pub fn kostant_log_concavity_window(g: &Multigraph, bound: i64) -> Result<Option<String>> {
    let m = g.vertex_count();
    let mut cache = KostantCache::new(g);
    let mut outcome = None;
    for_each_window_vector(m, bound, &mut |v| {
        if outcome.is_some() {
            return;
        }
        let center = cache.count(v).expect("any netflow is countable");
        let center_sq = &center * &center;
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                let mut plus = v.to_vec();
                plus[i] += 1;
                plus[j] -= 1;
                let mut minus = v.to_vec();
                minus[i] -= 1;
                minus[j] += 1;
                let product = cache.count(&plus).expect("countable")
                    * cache.count(&minus).expect("countable");
                if center_sq < product {
                    outcome = Some(format!(
                        "K({v:?})^2 = {center_sq} < {product} at i={}, j={}",
                        i + 1,
                        j + 1
                    ));
                    return;
                }
            }
        }
    });
    Ok(outcome)
}

/// Runs the sweep described by the configuration.
pub fn verify_theorem(cfg: &SweepConfig) -> Result<VerificationReport> {
    verify_theorem_with_hooks(cfg, &SweepHooks::default())
}

/// Sweep with negative-control hooks (used by tests).
pub fn verify_theorem_with_hooks(
    cfg: &SweepConfig,
    hooks: &SweepHooks,
) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = std::time::Instant::now();

    let instances: Vec<(usize, Multigraph, Vec<i64>)> = (0..cfg.instance_count)
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            rng.set_stream(index as u64 + 1);
            let (graph, netflow) = generate_instance(&mut rng, cfg);
            (index, graph, netflow)
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallel_workers)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;

    let records: Vec<InstanceRecord> = pool.install(|| {
        instances
            .par_iter()
            .map(|(index, graph, netflow)| {
                let corrupt = hooks.corrupt_sigma_phi_at == Some(*index);
                let checks = check_instance(graph, netflow, corrupt);
                let passed = checks.iter().all(|c| c.passed);
                let repro = if passed {
                    None
                } else {
                    Some(format!(
                        "flowpoly verify-theorem --seed {} --instances {} --max-n {} --max-edges {} --max-netflow {} (instance {})",
                        cfg.rng_seed,
                        cfg.instance_count,
                        cfg.max_n,
                        cfg.max_edges,
                        cfg.max_netflow_entry,
                        index
                    ))
                };
                InstanceRecord {
                    index: *index,
                    vertex_count: graph.vertex_count(),
                    edges: graph.edges().to_vec(),
                    netflow: netflow.clone(),
                    checks,
                    passed,
                    repro,
                }
            })
            .collect()
    });

    let checks_run = records.iter().map(|r| r.checks.len()).sum();
    let checks_failed = records
        .iter()
        .flat_map(|r| r.checks.iter())
        .filter(|c| !c.passed)
        .count();
    let instances_passed = records.iter().filter(|r| r.passed).count();
    let summary = ReportSummary {
        instances: records.len(),
        instances_passed,
        instances_failed: records.len() - instances_passed,
        checks_run,
        checks_failed,
    };

    Ok(VerificationReport {
        config: cfg.clone(),
        instances: records,
        summary,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// All tuples of `parts` nonnegative integers summing to `total`.
fn for_each_weak_composition<F: FnMut(&[u32])>(total: u32, parts: usize, f: &mut F) {
    if parts == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    let mut buffer = vec![0u32; parts];
    fn go<F: FnMut(&[u32])>(idx: usize, remaining: u32, buffer: &mut Vec<u32>, f: &mut F) {
        if idx + 1 == buffer.len() {
            buffer[idx] = remaining;
            f(buffer);
            buffer[idx] = 0;
            return;
        }
        for value in 0..=remaining {
            buffer[idx] = value;
            go(idx + 1, remaining - value, buffer, f);
        }
        buffer[idx] = 0;
    }
    go(0, total, &mut buffer, f);
}

/// All integer vectors of the given length with entries in `[-bound, bound]`
/// summing to zero.
fn for_each_window_vector<F: FnMut(&[i64])>(len: usize, bound: i64, f: &mut F) {
    let mut buffer = vec![0i64; len];
    fn go<F: FnMut(&[i64])>(
        idx: usize,
        partial: i64,
        bound: i64,
        buffer: &mut Vec<i64>,
        f: &mut F,
    ) {
        let remaining = (buffer.len() - idx) as i64;
        if idx == buffer.len() {
            if partial == 0 {
                f(buffer);
            }
            return;
        }
        // prune when the remaining entries cannot cancel the partial sum
        if partial.abs() > remaining * bound {
            return;
        }
        for value in -bound..=bound {
            buffer[idx] = value;
            go(idx + 1, partial + value, bound, buffer, f);
        }
        buffer[idx] = 0;
    }
    go(0, 0, bound, &mut buffer, f);
}
