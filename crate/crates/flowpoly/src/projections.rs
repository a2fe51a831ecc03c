//! The coordinate projections of flow polytopes onto generalized
//! permutahedra, their fibers, and the projected integer point transforms.
//!
//! `phi` restricts a flow to the sink-edge coordinates; `psi` records, per
//! vertex, the total flow escaping directly into the sink. Each projected
//! transform is computed by two independent routes: brute force (enumerate
//! all flows and project monomials) and the fiber formula (sum over lattice
//! points of the projected polytope with Kostant-count coefficients). The
//! two routes agreeing coefficient by coefficient is one of the crate's
//! standing verification checks.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::One;

use crate::kostant::{self, IntegerFlow, KostantCache};
use crate::multigraph::{EdgeId, Multigraph, SinkStructure};
use crate::permutahedra::SimplexSum;
use crate::polyalg::{sink_edge_var, vertex_var, Monomial, SparsePolynomial};
use crate::{Error, Result};

/// Per-vertex flow into the sink: entry `i-1` is the total value on the sink
/// edges with tail `i`. Zero outside the sink-adjacent vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EscapingFlow(Vec<u32>);

impl EscapingFlow {
    pub fn new(entries: Vec<u32>) -> Self {
        EscapingFlow(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }
}

/// Projection onto the sink-edge coordinates, in `S_G` order.
pub fn phi(flow: &IntegerFlow, sinkinfo: &SinkStructure) -> Vec<u32> {
    sinkinfo
        .s_g_positions()
        .iter()
        .map(|&pos| flow.0[pos])
        .collect()
}

/// The escaping-flow vector of a flow; factors through [`phi`].
pub fn psi(flow: &IntegerFlow, sinkinfo: &SinkStructure) -> EscapingFlow {
    escaping_flow_of_point(&phi(flow, sinkinfo), sinkinfo)
}

/// The escaping-flow vector of a point in the sink-edge coordinate space.
pub fn escaping_flow_of_point(point: &[u32], sinkinfo: &SinkStructure) -> EscapingFlow {
    debug_assert_eq!(point.len(), sinkinfo.s_g().len());
    let mut entries = vec![0u32; sinkinfo.n()];
    for (edge, &value) in sinkinfo.s_g().iter().zip(point) {
        entries[edge.tail - 1] += value;
    }
    EscapingFlow(entries)
}

/// The Minkowski sum description of the phi-projected polytope: one scaled
/// simplex `a_i * D_{S_{G,i}}` per vertex, in the sink-edge coordinates.
pub fn p_simplex_sum(sinkinfo: &SinkStructure, a: &[i64]) -> Result<SimplexSum> {
    let ambient: Vec<String> = sinkinfo
        .s_g()
        .iter()
        .map(|e| sink_edge_var(e.tail, e.index))
        .collect();
    let summands = (1..=sinkinfo.n())
        .map(|i| {
            let support: Vec<usize> = sinkinfo
                .s_g_i(i)
                .iter()
                .map(|edge| {
                    sinkinfo
                        .s_g()
                        .iter()
                        .position(|e| e == edge)
                        .expect("edge of S_{G,i} lies in S_G")
                })
                .collect();
            (a[i - 1] as u32, support)
        })
        .collect();
    SimplexSum::new(ambient, summands)
}

/// The Minkowski sum description of the psi-projected polytope: one scaled
/// simplex `a_i * D_{T_{G,i}}` per vertex, in the `T_G` coordinates.
pub fn q_simplex_sum(sinkinfo: &SinkStructure, a: &[i64]) -> Result<SimplexSum> {
    let ambient: Vec<String> = sinkinfo.t_g().iter().map(|&i| vertex_var(i)).collect();
    let summands = (1..=sinkinfo.n())
        .map(|i| {
            let support: Vec<usize> = sinkinfo
                .t_g_i(i)
                .iter()
                .map(|v| {
                    sinkinfo
                        .t_g()
                        .iter()
                        .position(|t| t == v)
                        .expect("vertex of T_{G,i} lies in T_G")
                })
                .collect();
            (a[i - 1] as u32, support)
        })
        .collect();
    SimplexSum::new(ambient, summands)
}

/// How to compute a projected transform.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SigmaMode {
    /// Fiber formula: lattice points of the projected polytope, one Kostant
    /// evaluation per point.
    Formula,
    /// Enumerate every flow and project its monomial.
    BruteForce,
}

/// The phi-projected integer point transform, in the variables indexed by
/// sink edges (ordered by tail, then parallel index).
pub fn sigma_phi(g: &Multigraph, a: &[i64], mode: SigmaMode) -> Result<SparsePolynomial> {
    kostant::check_projection_netflow(g, a)?;
    let sinkinfo = g.sink_structure()?;
    let vars: Vec<String> = sinkinfo
        .s_g()
        .iter()
        .map(|e| sink_edge_var(e.tail, e.index))
        .collect();

    match mode {
        SigmaMode::BruteForce => {
            let flows = kostant::enumerate_flows(g, a)?;
            SparsePolynomial::from_terms(
                vars,
                flows
                    .iter()
                    .map(|flow| (Monomial(phi(flow, &sinkinfo)), BigRational::one())),
            )
        }
        SigmaMode::Formula => {
            let n = sinkinfo.n();
            let restriction = g.restriction();
            let mut cache = KostantCache::new(&restriction);
            let points = p_simplex_sum(&sinkinfo, a)?.lattice_points();
            let mut terms = Vec::with_capacity(points.len());
            for p in points.points() {
                let ef = escaping_flow_of_point(p, &sinkinfo);
                let netflow: Vec<i64> =
                    (0..n).map(|i| a[i] - ef.entries()[i] as i64).collect();
                let count = cache.count(&netflow)?;
                terms.push((Monomial(p.clone()), BigRational::from(count)));
            }
            SparsePolynomial::from_terms(vars, terms)
        }
    }
}

/// The psi-projected integer point transform, in the variables indexed by
/// the sink-adjacent vertices.
pub fn sigma_psi(g: &Multigraph, a: &[i64], mode: SigmaMode) -> Result<SparsePolynomial> {
    kostant::check_projection_netflow(g, a)?;
    let sinkinfo = g.sink_structure()?;
    let vars: Vec<String> = sinkinfo.t_g().iter().map(|&i| vertex_var(i)).collect();

    match mode {
        SigmaMode::BruteForce => {
            let flows = kostant::enumerate_flows(g, a)?;
            SparsePolynomial::from_terms(
                vars,
                flows.iter().map(|flow| {
                    let ef = psi(flow, &sinkinfo);
                    let exponents: Vec<u32> = sinkinfo
                        .t_g()
                        .iter()
                        .map(|&i| ef.entries()[i - 1])
                        .collect();
                    (Monomial(exponents), BigRational::one())
                }),
            )
        }
        SigmaMode::Formula => {
            let points = q_simplex_sum(&sinkinfo, a)?.lattice_points();
            let mut terms = Vec::with_capacity(points.len());
            let restriction = g.restriction();
            let mut cache = KostantCache::new(&restriction);
            for q in points.points() {
                terms.push((
                    Monomial(q.clone()),
                    psi_fiber_count(&sinkinfo, a, q, &mut cache)?,
                ));
            }
            SparsePolynomial::from_terms(vars, terms)
        }
    }
}

/// Kostant factor times the product of multiset coefficients, one per
/// sink-adjacent vertex.
fn psi_fiber_count(
    sinkinfo: &SinkStructure,
    a: &[i64],
    q: &[u32],
    cache: &mut KostantCache<'_>,
) -> Result<BigRational> {
    let n = sinkinfo.n();
    let mut netflow: Vec<i64> = a[..n].to_vec();
    for (idx, &i) in sinkinfo.t_g().iter().enumerate() {
        netflow[i - 1] -= q[idx] as i64;
    }
    let mut count = cache.count(&netflow)?;
    for (idx, &i) in sinkinfo.t_g().iter().enumerate() {
        let size = sinkinfo.i_set(i).len() as u64;
        let scale = q[idx] as u64;
        count *= binomial(BigInt::from(size + scale - 1), BigInt::from(scale));
    }
    Ok(BigRational::from(count))
}

/// The fiber of `phi` over a lattice point: its identifying netflow (zero at
/// the sink) and its exact lattice-point count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiFiber {
    pub netflow: Vec<i64>,
    pub count: BigInt,
}

/// Identifies the fiber of an integer point `p` of the phi-projected
/// polytope. Points outside the polytope are an error, distinct from an
/// empty (count zero) fiber.
pub fn fiber_phi(g: &Multigraph, a: &[i64], p: &[u32]) -> Result<PhiFiber> {
    kostant::check_projection_netflow(g, a)?;
    let sinkinfo = g.sink_structure()?;
    if p.len() != sinkinfo.s_g().len() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} entries, S_G has {}",
            p.len(),
            sinkinfo.s_g().len()
        )));
    }
    let points = p_simplex_sum(&sinkinfo, a)?.lattice_points();
    if !points.contains(p) {
        return Err(Error::PointOutsidePolytope(p.to_vec()));
    }
    let n = sinkinfo.n();
    let ef = escaping_flow_of_point(p, &sinkinfo);
    let mut netflow: Vec<i64> = (0..n).map(|i| a[i] - ef.entries()[i] as i64).collect();
    let count = kostant::kostant(&g.restriction(), &netflow)?;
    netflow.push(0);
    Ok(PhiFiber { netflow, count })
}

/// The fiber of `psi` over a lattice point: a product of a flow polytope
/// (the netflow below, zero at the sink) and one dilated simplex per
/// sink-adjacent vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PsiFiber {
    pub netflow: Vec<i64>,
    /// `(dilation, sink edges of the vertex)` per sink-adjacent vertex.
    pub simplex_factors: Vec<(u32, Vec<EdgeId>)>,
    pub count: BigInt,
}

/// Identifies the fiber of an integer point `q` of the psi-projected
/// polytope, with its product decomposition and exact count.
pub fn fiber_psi(g: &Multigraph, a: &[i64], q: &[u32]) -> Result<PsiFiber> {
    kostant::check_projection_netflow(g, a)?;
    let sinkinfo = g.sink_structure()?;
    if q.len() != sinkinfo.t_g().len() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} entries, T_G has {}",
            q.len(),
            sinkinfo.t_g().len()
        )));
    }
    let points = q_simplex_sum(&sinkinfo, a)?.lattice_points();
    if !points.contains(q) {
        return Err(Error::PointOutsidePolytope(q.to_vec()));
    }
    let n = sinkinfo.n();
    let restriction = g.restriction();
    let mut cache = KostantCache::new(&restriction);
    let count = psi_fiber_count(&sinkinfo, a, q, &mut cache)?;

    let mut netflow: Vec<i64> = a[..n].to_vec();
    for (idx, &i) in sinkinfo.t_g().iter().enumerate() {
        netflow[i - 1] -= q[idx] as i64;
    }
    netflow.push(0);
    let simplex_factors = sinkinfo
        .t_g()
        .iter()
        .enumerate()
        .map(|(idx, &i)| (q[idx], sinkinfo.i_set(i).to_vec()))
        .collect();
    Ok(PsiFiber {
        netflow,
        simplex_factors,
        count: count.to_integer(),
    })
}

/// A coefficient that differs between the psi transform and the extension's
/// phi transform after renaming.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransportMismatch {
    pub exponents: Vec<u32>,
    pub sigma_psi: BigRational,
    pub sigma_phi_ex: BigRational,
}

/// Report of the extension-transport comparison.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransportReport {
    pub matched: bool,
    pub mismatches: Vec<TransportMismatch>,
}

/// Compares the psi transform of `(g, a)` against the phi transform of the
/// extension with the extended netflow, after renaming variables along the
/// bijection sending each sink-adjacent vertex to its new sink edge.
pub fn gex_transport(g: &Multigraph, a: &[i64]) -> Result<TransportReport> {
    kostant::check_projection_netflow(g, a)?;
    let sinkinfo = g.sink_structure()?;
    let n = sinkinfo.n();

    let ext = g.extension()?;
    let mut a_ex: Vec<i64> = a[..n].to_vec();
    a_ex.extend(std::iter::repeat_n(0, ext.ex_vertex.len()));
    a_ex.push(a[n]);

    let lhs = sigma_psi(g, a, SigmaMode::Formula)?;
    let rhs = sigma_phi(&ext.graph, &a_ex, SigmaMode::Formula)?;

    // The bijection sends i in T_G (ascending) to the unique sink edge of the
    // extension with tail i^ex; the extension inserts new vertices in the
    // same ascending order, so the variable lists correspond positionally.
    let expected_vars: Vec<String> = sinkinfo
        .t_g()
        .iter()
        .map(|i| sink_edge_var(ext.ex_vertex[i], 1))
        .collect();
    if rhs.vars() != expected_vars.as_slice() {
        return Err(Error::VariableMismatch(format!(
            "extension transform has variables {:?}, expected {:?}",
            rhs.vars(),
            expected_vars
        )));
    }
    let renamed = lhs.rename_vars(expected_vars)?;

    let mut mismatches = Vec::new();
    let mut support: std::collections::BTreeSet<Monomial> = renamed.support().cloned().collect();
    support.extend(rhs.support().cloned());
    for mono in support {
        let left = renamed.coefficient(&mono);
        let right = rhs.coefficient(&mono);
        if left != right {
            mismatches.push(TransportMismatch {
                exponents: mono.0.clone(),
                sigma_psi: left,
                sigma_phi_ex: right,
            });
        }
    }
    Ok(TransportReport {
        matched: mismatches.is_empty(),
        mismatches,
    })
}
