//! Acceptance suite: one test per criterion, printing a pass/fail line each
//! (run with `-- --nocapture` to see the lines on success).

use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flowpoly::admissible::AdmissiblePair;
use flowpoly::lorentzian::{
    conjugate_antidiagonal, expand_matrix, inertia, is_lorentzian_normalized, rank, Inertia,
};
use flowpoly::multigraph::Multigraph;
use flowpoly::permutahedra::{is_m_convex, LatticePointSet, SimplexSum};
use flowpoly::polyalg::{Monomial, SparsePolynomial};
use flowpoly::verify::{
    self, kostant_log_concavity_window, SweepConfig, SweepHooks, VerificationReport,
};
use flowpoly::volume::{ehrhart_volume_oracle, volume_lorentzian_check, volume_polynomial};
use flowpoly::{kostant, SymmetricIntMatrix};

fn report(num: u32, name: &str, pass: bool) {
    println!(
        "criterion {num:02} {}: {name}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {num:02} failed: {name}");
}

fn reference_k_minus() -> SymmetricIntMatrix {
    SymmetricIntMatrix::from_i64_rows(vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 2]]).unwrap()
}

fn reference_k_d() -> SymmetricIntMatrix {
    SymmetricIntMatrix::from_i64_rows(vec![
        vec![0, 0, 0, 1, 1],
        vec![0, 0, 0, 1, 1],
        vec![0, 0, 0, 1, 1],
        vec![1, 1, 1, 2, 2],
        vec![1, 1, 1, 2, 2],
    ])
    .unwrap()
}

/// The acceptance sweep: seed 42, up to 4 non-sink vertices, up to 8 edges,
/// netflow entries up to 3, 100 instances. Shared across the criteria that
/// read different checks out of the same run.
fn acceptance_sweep() -> &'static VerificationReport {
    static SWEEP: OnceLock<VerificationReport> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let cfg = SweepConfig {
            max_n: 4,
            max_edges: 8,
            max_netflow_entry: 3,
            instance_count: 100,
            rng_seed: 42,
            parallel_workers: 4,
        };
        verify::verify_theorem(&cfg).expect("sweep runs")
    })
}

fn check_passes_everywhere(report: &VerificationReport, name: &str) -> bool {
    report.instances.iter().all(|instance| {
        instance
            .checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.passed)
            .unwrap_or(false)
    })
}

/// Random forward multigraph on `[m]`, not necessarily unique-sink.
fn random_forward_graph(rng: &mut ChaCha8Rng, max_vertices: usize, max_edges: usize) -> Multigraph {
    let m = rng.gen_range(2..=max_vertices);
    let count = rng.gen_range(0..=max_edges);
    let edges: Vec<(usize, usize)> = (0..count)
        .map(|_| {
            let tail = rng.gen_range(1..=m - 1);
            let head = rng.gen_range(tail + 1..=m);
            (tail, head)
        })
        .collect();
    Multigraph::new(m, edges).unwrap()
}

/// Random unique-sink graph with a bound on `|E| - n`.
fn random_sink_graph(rng: &mut ChaCha8Rng, max_n: usize, max_excess: usize) -> Multigraph {
    let n = rng.gen_range(2..=max_n);
    let mut edges: Vec<(usize, usize)> = (1..=n)
        .map(|tail| (tail, rng.gen_range(tail + 1..=n + 1)))
        .collect();
    for _ in 0..rng.gen_range(0..=max_excess) {
        let tail = rng.gen_range(1..=n);
        let head = rng.gen_range(tail + 1..=n + 1);
        edges.push((tail, head));
    }
    Multigraph::new(n + 1, edges).unwrap()
}

#[test]
fn criterion_01_reference_matrix_inertia() {
    let matrix = reference_k_minus();
    inertia(&matrix); // warm up
    let start = Instant::now();
    let sig = inertia(&matrix);
    let elapsed = start.elapsed();
    let expected = Inertia {
        positive: 1,
        negative: 1,
        zero: 1,
    };
    report(
        1,
        "inertia of the reference 3x3 matrix is (1, 1, 1) in under 1 ms",
        sig == expected && elapsed.as_micros() < 1000,
    );
}

#[test]
fn criterion_02_expansion_fidelity() {
    let expanded = expand_matrix(&reference_k_minus(), &[1, 2, 2]).unwrap();
    let pass = expanded == reference_k_d()
        && rank(&reference_k_minus()) == 2
        && rank(&reference_k_d()) == 2
        && inertia(&reference_k_d())
            == Inertia {
                positive: 1,
                negative: 1,
                zero: 3,
            };
    report(
        2,
        "row/column expansion reproduces the reference 5x5 matrix with ranks 2 and inertia (1, 1, 3)",
        pass,
    );
}

#[test]
fn criterion_03_conjugation_fidelity() {
    let tilde = conjugate_antidiagonal(&reference_k_minus());
    let expected =
        SymmetricIntMatrix::from_i64_rows(vec![vec![2, 1, 1], vec![1, 0, 0], vec![1, 0, 0]])
            .unwrap();
    report(3, "antidiagonal conjugation of the 3x3 matrix", tilde == expected);
}

#[test]
fn criterion_04_main_theorem_sweep() {
    let sweep = acceptance_sweep();
    let lorentzian = check_passes_everywhere(sweep, "sigma_phi_lorentzian")
        && check_passes_everywhere(sweep, "sigma_psi_lorentzian");
    let in_time = sweep.elapsed_ms < 60_000;
    report(
        4,
        "normalized projected transforms are Lorentzian on all 100 seed-42 instances in under 60 s",
        lorentzian && in_time && sweep.summary.instances == 100,
    );
}

#[test]
fn criterion_05_mode_agreement() {
    let sweep = acceptance_sweep();
    let pass = check_passes_everywhere(sweep, "sigma_phi_modes_agree")
        && check_passes_everywhere(sweep, "sigma_psi_modes_agree");
    report(
        5,
        "formula and brute-force transforms agree coefficient by coefficient on the sweep",
        pass,
    );
}

#[test]
fn criterion_06_fiber_counting() {
    let sweep = acceptance_sweep();
    report(
        6,
        "every fiber cardinality matches its Kostant value on the sweep",
        check_passes_everywhere(sweep, "fiber_counts"),
    );
}

#[test]
fn criterion_07_extension_transport() {
    let sweep = acceptance_sweep();
    report(
        7,
        "the psi transform transports to the extension's phi transform on the sweep",
        check_passes_everywhere(sweep, "gex_transport"),
    );
}

#[test]
fn criterion_08_hessian_pipeline() {
    let sweep = acceptance_sweep();
    let applicable = sweep
        .instances
        .iter()
        .filter(|i| i.netflow[..i.netflow.len() - 1].iter().sum::<i64>() >= 2)
        .count();
    report(
        8,
        "the volume-route Hessian equals the conjugated Kostant matrix on the sweep",
        check_passes_everywhere(sweep, "hessian_via_volume") && applicable > 0,
    );
}

#[test]
fn criterion_09_kostant_log_concavity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pass = true;
    for _ in 0..20 {
        let g = random_forward_graph(&mut rng, 4, 6);
        if let Some(witness) = kostant_log_concavity_window(&g, 3).unwrap() {
            eprintln!("log-concavity fails on {:?}: {witness}", g.edges());
            pass = false;
        }
    }
    report(
        9,
        "Kostant values are log-concave along root directions over the [-3,3] window, 20 graphs, under 60 s",
        pass && start.elapsed().as_secs() < 60,
    );
}

#[test]
fn criterion_10_graph_flip_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut pass = true;
    for _ in 0..20 {
        let g = random_sink_graph(&mut rng, 4, 4);
        let restriction = g.restriction();
        let flipped = g.flip_restriction();
        let n = restriction.vertex_count();
        // enumerate [-3,3]^n vectors summing to zero
        let mut window: Vec<Vec<i64>> = Vec::new();
        let mut stack: Vec<Vec<i64>> = vec![vec![]];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == n {
                if prefix.iter().sum::<i64>() == 0 {
                    window.push(prefix);
                }
                continue;
            }
            for v in -3..=3 {
                let mut next = prefix.clone();
                next.push(v);
                stack.push(next);
            }
        }
        for c in &window {
            let reversed: Vec<i64> = c.iter().rev().map(|&x| -x).collect();
            if kostant::kostant(&restriction, c).unwrap()
                != kostant::kostant(&flipped, &reversed).unwrap()
            {
                eprintln!("flip identity fails on {:?} at {c:?}", g.edges());
                pass = false;
            }
        }
    }
    report(
        10,
        "the graph-flip identity holds over the [-3,3] window on 20 graphs",
        pass,
    );
}

#[test]
fn criterion_11_volume_oracle_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut pass = true;
    for _ in 0..20 {
        let g = random_sink_graph(&mut rng, 4, 4);
        let n = g.vertex_count() - 1;
        let vol = volume_polynomial(&g).unwrap();
        for _ in 0..25 {
            let x: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
            let direct = vol.poly.eval_int(&x).unwrap();
            let oracle = ehrhart_volume_oracle(&g, &x).unwrap();
            if direct != oracle {
                eprintln!(
                    "volume mismatch on {:?} at {x:?}: {direct} vs {oracle}",
                    g.edges()
                );
                pass = false;
            }
        }
    }
    report(
        11,
        "volume polynomial evaluations equal the Ehrhart interpolation oracle (20 graphs, 25 points each)",
        pass,
    );
}

#[test]
fn criterion_12_volume_polynomials_lorentzian() {
    let mut rng = ChaCha8Rng::seed_from_u64(11); // same graph family as criterion 11
    let mut pass = true;
    for _ in 0..20 {
        let g = random_sink_graph(&mut rng, 4, 4);
        let verdict = volume_lorentzian_check(&g).unwrap();
        if !verdict.is_lorentzian() {
            eprintln!("volume polynomial of {:?}: {verdict}", g.edges());
            pass = false;
        }
    }
    report(12, "volume polynomials pass the Lorentzian check on 20 graphs", pass);
}

#[test]
fn criterion_13_derivative_identity() {
    // 50 random lattice polytope point sets (Minkowski sums of scaled
    // coordinate simplices), every projection direction
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut pass = true;
    for _ in 0..50 {
        let ambient = rng.gen_range(2..=4usize);
        let labels: Vec<String> = (1..=ambient).map(|i| format!("y_{i}")).collect();
        let summands: Vec<(u32, Vec<usize>)> = (0..rng.gen_range(1..=3usize))
            .map(|_| {
                let scale = rng.gen_range(0..=3u32);
                let support: Vec<usize> = (0..ambient)
                    .filter(|_| rng.gen_bool(0.6))
                    .collect();
                (scale, support)
            })
            .collect();
        let points = SimplexSum::new(labels, summands)
            .unwrap()
            .lattice_points();
        let proj_dim = rng.gen_range(1..=ambient);
        let pair =
            AdmissiblePair::new(ambient, proj_dim, points.points().to_vec()).unwrap();
        for idx in 0..proj_dim {
            if !pair.derivative_identity_check(idx).unwrap() {
                eprintln!("derivative identity fails: {pair:?} direction {idx}");
                pass = false;
            }
        }
    }
    // and on every sweep-generated flow polytope instance
    let sweep_pass = check_passes_everywhere(acceptance_sweep(), "derivative_identity");
    report(
        13,
        "the derived-pair derivative identity holds on 50 random polytopes and all sweep instances",
        pass && sweep_pass,
    );
}

#[test]
fn criterion_14_negative_controls() {
    // the missing-middle pair is rejected with a witness
    let gap = LatticePointSet::from_points(
        vec!["x_1".into(), "x_2".into()],
        vec![vec![2, 0], vec![0, 2]],
    );
    let m_convex_rejected = match is_m_convex(&gap) {
        Some(witness) => witness.alpha[witness.index] > witness.beta[witness.index],
        None => false,
    };

    // x1^2 + x2^2 is not Lorentzian
    let sum_of_squares = SparsePolynomial::from_terms(
        vec!["x_1".into(), "x_2".into()],
        [
            (Monomial(vec![2, 0]), BigRational::from(BigInt::from(1))),
            (Monomial(vec![0, 2]), BigRational::from(BigInt::from(1))),
        ],
    )
    .unwrap();
    let lorentzian_rejected = !is_lorentzian_normalized(&sum_of_squares)
        .unwrap()
        .is_lorentzian();

    // a corrupted coefficient produces a failure certificate
    let cfg = SweepConfig {
        max_n: 3,
        max_edges: 5,
        max_netflow_entry: 2,
        instance_count: 5,
        rng_seed: 42,
        parallel_workers: 1,
    };
    let hooks = SweepHooks {
        corrupt_sigma_phi_at: Some(3),
    };
    let corrupted = verify::verify_theorem_with_hooks(&cfg, &hooks).unwrap();
    let hook_caught = !corrupted.all_passed()
        && corrupted.instances[3]
            .checks
            .iter()
            .any(|c| !c.passed && c.certificate.is_some());

    report(
        14,
        "negative controls: M-convexity witness, Lorentzian rejection, corruption certificate",
        m_convex_rejected && lorentzian_rejected && hook_caught,
    );
}
