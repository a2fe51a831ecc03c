//! Randomized invariants across the crate, plus the floating-point sanity
//! cross-check for the exact inertia (informative only; the exact path is
//! always the source of truth).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use flowpoly::kostant::{
    self, enumerate_flows, enumerate_flows_bruteforce, is_feasible, kostant,
};
use flowpoly::lorentzian::{
    conjugate_antidiagonal, expand_matrix, inertia, interlacing_check, rank,
};
use flowpoly::multigraph::Multigraph;
use flowpoly::permutahedra::{is_m_convex, SimplexSum};
use flowpoly::polyalg::{Monomial, SparsePolynomial};
use flowpoly::projections::{self, SigmaMode};
use flowpoly::SymmetricIntMatrix;

/// Raw edge data mapped into the valid forward range for `m` vertices.
fn forward_edges(m: usize, raw: &[(usize, usize)]) -> Vec<(usize, usize)> {
    raw.iter()
        .map(|&(a, b)| {
            let tail = 1 + a % (m - 1);
            let head = tail + 1 + b % (m - tail);
            (tail, head)
        })
        .collect()
}

fn arb_graph() -> impl Strategy<Value = Multigraph> {
    (2usize..=5, proptest::collection::vec((0usize..100, 0usize..100), 0..8)).prop_map(
        |(m, raw)| Multigraph::new(m, forward_edges(m, &raw)).unwrap(),
    )
}

/// A unique-sink graph: spanning forward edges plus extras.
fn arb_sink_graph() -> impl Strategy<Value = Multigraph> {
    (
        2usize..=4,
        proptest::collection::vec(0usize..100, 4),
        proptest::collection::vec((0usize..100, 0usize..100), 0..4),
    )
        .prop_map(|(n, spans, raw)| {
            let mut edges: Vec<(usize, usize)> = (1..=n)
                .map(|tail| (tail, tail + 1 + spans[tail - 1] % (n + 1 - tail)))
                .collect();
            edges.extend(forward_edges(n + 1, &raw));
            Multigraph::new(n + 1, edges).unwrap()
        })
}

fn arb_poly() -> impl Strategy<Value = SparsePolynomial> {
    let num_vars = 3usize;
    let term = (
        proptest::collection::vec(0u32..4, num_vars),
        -9i64..=9,
        1i64..=4,
    );
    proptest::collection::vec(term, 0..6).prop_map(move |terms| {
        let vars: Vec<String> = (1..=num_vars).map(|i| format!("x_{i}")).collect();
        SparsePolynomial::from_terms(
            vars,
            terms.into_iter().map(|(exps, num, den)| {
                (
                    Monomial(exps),
                    BigRational::new(BigInt::from(num), BigInt::from(den)),
                )
            }),
        )
        .unwrap()
    })
}

fn arb_symmetric_matrix() -> impl Strategy<Value = SymmetricIntMatrix> {
    (1usize..=5).prop_flat_map(|dim| {
        proptest::collection::vec(-9i64..=9, dim * (dim + 1) / 2).prop_map(move |upper| {
            let mut iter = upper.into_iter();
            let mut rows = vec![vec![0i64; dim]; dim];
            #[allow(clippy::needless_range_loop)]
            for i in 0..dim {
                for j in i..dim {
                    let v = iter.next().unwrap();
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            SymmetricIntMatrix::from_i64_rows(rows).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kostant_routes_agree(g in arb_graph(), raw in proptest::collection::vec(-2i64..=2, 5)) {
        let m = g.vertex_count();
        let mut a: Vec<i64> = raw[..m - 1].to_vec();
        a.push(-a.iter().sum::<i64>());
        let dp = kostant(&g, &a).unwrap();
        let flows = enumerate_flows(&g, &a).unwrap();
        let boxed = enumerate_flows_bruteforce(&g, &a).unwrap();
        prop_assert_eq!(BigInt::from(flows.len()), dp.clone());
        prop_assert_eq!(flows, boxed);
        // rational feasibility iff an integer flow exists
        prop_assert_eq!(is_feasible(&g, &a).unwrap(), !dp.is_zero());
    }

    #[test]
    fn incidence_columns_sum_to_zero(g in arb_graph()) {
        let matrix = g.incidence_matrix();
        for col in 0..g.edge_count() {
            prop_assert_eq!(matrix.iter().map(|row| row[col]).sum::<i64>(), 0);
        }
    }

    #[test]
    fn flip_is_an_involution(g in arb_graph()) {
        prop_assert_eq!(g.flip().flip(), g);
    }

    #[test]
    fn simplify_at_sink_is_idempotent(g in arb_sink_graph()) {
        let once = g.simplify_at_sink().unwrap();
        prop_assert_eq!(once.simplify_at_sink().unwrap(), once);
    }

    #[test]
    fn sink_refinements_partition(g in arb_sink_graph()) {
        let info = g.sink_structure().unwrap();
        for i in 1..g.vertex_count() {
            let mut union: Vec<_> = info
                .t_g_i(i)
                .iter()
                .flat_map(|&j| info.i_set(j).iter().copied())
                .collect();
            union.sort_unstable();
            let mut direct = info.s_g_i(i).to_vec();
            direct.sort_unstable();
            prop_assert_eq!(direct, union);
        }
    }

    #[test]
    fn extension_contracts_back(g in arb_sink_graph()) {
        let ext = g.extension().unwrap();
        let old_sink = g.sink();
        let contracted: Vec<(usize, usize)> = ext
            .graph
            .edges()
            .iter()
            .filter(|&&(tail, _)| !ext.ex_vertex.values().any(|&x| x == tail))
            .map(|&(tail, head)| {
                if ext.ex_vertex.values().any(|&x| x == head) {
                    (tail, old_sink)
                } else {
                    (tail, head)
                }
            })
            .collect();
        let recovered = Multigraph::new(g.vertex_count(), contracted).unwrap();
        prop_assert_eq!(recovered.edges(), g.edges());
    }

    #[test]
    fn graph_text_round_trips(g in arb_graph()) {
        let text = g.to_text();
        prop_assert_eq!(Multigraph::from_text(&text).unwrap(), g);
    }

    #[test]
    fn normalize_and_denormalize_invert(f in arb_poly()) {
        prop_assert_eq!(f.normalize().denormalize(), f.clone());
        prop_assert_eq!(f.denormalize().normalize(), f);
    }

    #[test]
    fn coefficient_shift_is_the_conjugated_derivative(f in arb_poly(), idx in 0usize..3) {
        let direct = f.coefficient_shift(idx);
        let long_way = f.normalize().formal_derivative(idx).denormalize();
        prop_assert_eq!(direct, long_way);
    }

    #[test]
    fn mixed_partials_commute(f in arb_poly()) {
        let ab = f.formal_derivative(0).formal_derivative(1);
        let ba = f.formal_derivative(1).formal_derivative(0);
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn polynomial_text_round_trips(f in arb_poly()) {
        prop_assert_eq!(SparsePolynomial::from_text(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn simplex_sum_lattice_points_are_m_convex(
        scales in proptest::collection::vec(0u32..=3, 1..=3),
        supports in proptest::collection::vec(proptest::collection::vec(0usize..4, 1..4), 1..=3),
    ) {
        let labels: Vec<String> = (1..=4).map(|i| format!("x_{i}")).collect();
        let summands: Vec<(u32, Vec<usize>)> = scales
            .into_iter()
            .zip(supports)
            .map(|(scale, mut support)| {
                support.sort_unstable();
                support.dedup();
                (scale, support)
            })
            .collect();
        let points = SimplexSum::new(labels, summands).unwrap().lattice_points();
        prop_assert!(is_m_convex(&points).is_none());
    }

    #[test]
    fn conjugation_preserves_inertia(m in arb_symmetric_matrix()) {
        prop_assert_eq!(inertia(&conjugate_antidiagonal(&m)), inertia(&m));
    }

    #[test]
    fn expansion_preserves_rank(m in arb_symmetric_matrix(), raw in proptest::collection::vec(1usize..=3, 5)) {
        let mults = &raw[..m.dim()];
        let expanded = expand_matrix(&m, mults).unwrap();
        prop_assert_eq!(rank(&expanded), rank(&m));
    }

    #[test]
    fn interlacing_always_holds(m in arb_symmetric_matrix(), mask in proptest::collection::vec(proptest::bool::ANY, 5)) {
        let rows: Vec<usize> = (0..m.dim()).filter(|&i| mask[i]).collect();
        if !rows.is_empty() {
            prop_assert!(interlacing_check(&m, &rows).unwrap());
        }
    }

    #[test]
    fn exact_inertia_matches_float_eigensolver(m in arb_symmetric_matrix()) {
        let dim = m.dim();
        let exact = inertia(&m);
        let float = nalgebra::DMatrix::from_fn(dim, dim, |i, j| {
            // entries are in [-9, 9]; exact f64 conversion
            i64::try_from(m.get(i, j).clone()).unwrap() as f64
        });
        let mut eigenvalues: Vec<f64> = float
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        // the exact kernel dimension tells which eigenvalues are true zeros
        eigenvalues.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());
        let spurious = &eigenvalues[..exact.zero];
        prop_assert!(spurious.iter().all(|v| v.abs() < 1e-9));
        let rest = &eigenvalues[exact.zero..];
        prop_assert!(rest.iter().all(|v| v.abs() > 1e-9));
        let positive = rest.iter().filter(|&&v| v > 0.0).count();
        let negative = rest.iter().filter(|&&v| v < 0.0).count();
        prop_assert_eq!(positive, exact.positive);
        prop_assert_eq!(negative, exact.negative);
    }
}

proptest! {
    // heavier cross-module sweeps get a smaller case budget
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sigma_routes_agree(g in arb_sink_graph(), raw in proptest::collection::vec(0i64..=2, 4)) {
        let n = g.vertex_count() - 1;
        let mut a: Vec<i64> = raw[..n].to_vec();
        a.push(-a.iter().sum::<i64>());
        let phi_formula = projections::sigma_phi(&g, &a, SigmaMode::Formula).unwrap();
        let phi_brute = projections::sigma_phi(&g, &a, SigmaMode::BruteForce).unwrap();
        prop_assert_eq!(phi_formula, phi_brute);
        let psi_formula = projections::sigma_psi(&g, &a, SigmaMode::Formula).unwrap();
        let psi_brute = projections::sigma_psi(&g, &a, SigmaMode::BruteForce).unwrap();
        prop_assert_eq!(psi_formula, psi_brute);
    }

    #[test]
    fn minkowski_decomposition_holds(g in arb_sink_graph(), raw in proptest::collection::vec(0i64..=2, 4)) {
        let n = g.vertex_count() - 1;
        let mut a: Vec<i64> = raw[..n].to_vec();
        a.push(-a.iter().sum::<i64>());
        prop_assert!(kostant::minkowski_lattice_check(&g, &a).unwrap());
    }

    #[test]
    fn unit_flows_are_the_single_source_lattice_points(g in arb_sink_graph(), source_raw in 0usize..100) {
        let n = g.vertex_count() - 1;
        let source = 1 + source_raw % n;
        let mut a = vec![0i64; g.vertex_count()];
        a[source - 1] = 1;
        *a.last_mut().unwrap() = -1;
        let vertices = kostant::unit_flow_vertices(&g, source).unwrap();
        let enumerated = enumerate_flows(&g, &a).unwrap();
        prop_assert_eq!(vertices, enumerated);
    }
}
