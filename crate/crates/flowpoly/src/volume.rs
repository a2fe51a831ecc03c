//! Flow polytope volume polynomials and the Hessian-via-volume pipeline.
//!
//! The volume polynomial of a unique-sink graph is the weighted sum, over
//! weak compositions dominating the shifted outdegree vector, of Kostant
//! values times normalized monomials. Volume here is lattice volume relative
//! to the affine span, which is also what the Ehrhart interpolation oracle
//! measures, so the two routes agree exactly over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::kostant::{self, KostantCache};
use crate::lorentzian::{self, LorentzianVerdict, SymmetricIntMatrix};
use crate::multigraph::Multigraph;
use crate::polyalg::{vertex_var, Monomial, SparsePolynomial};
use crate::{Error, Result};

/// The volume polynomial of the flow polytopes of a fixed graph, as a
/// function of the netflow at the non-sink vertices (already in normalized
/// form: the coefficient of `x^j` is a Kostant value divided by `j!`).
#[derive(Clone, Debug)]
pub struct VolumePolynomial {
    pub poly: SparsePolynomial,
    /// `out_i = outdeg(i) - 1` per non-sink vertex.
    pub out: Vec<i64>,
    /// Homogeneous degree `|E| - n`.
    pub degree: u32,
}

/// Sum of `K_G(j - out, 0) x^j / j!` over weak compositions `j` of
/// `|E| - n` that dominate `out` in prefix sums; when `lower` is given, only
/// compositions with `j >= lower` entrywise are materialized (the rest would
/// be annihilated by the coefficient shifts the caller is about to apply).
fn baldoni_vergne_terms(g: &Multigraph, lower: Option<&[i64]>) -> Result<SparsePolynomial> {
    g.require_unique_sink()?;
    let n = g.vertex_count() - 1;
    let vars: Vec<String> = (1..=n).map(vertex_var).collect();
    if n == 0 {
        return Ok(SparsePolynomial::one(vars));
    }
    let degree = (g.edge_count() - n) as i64;
    let out: Vec<i64> = (1..=n).map(|v| g.outdegree(v) as i64 - 1).collect();
    let prefix_out: Vec<i64> = out
        .iter()
        .scan(0i64, |acc, &o| {
            *acc += o;
            Some(*acc)
        })
        .collect();

    let mut cache = KostantCache::new(g);
    let mut terms = Vec::new();
    let mut j = vec![0i64; n];

    #[allow(clippy::too_many_arguments)]
    fn gen(
        idx: usize,
        remaining: i64,
        prefix: i64,
        j: &mut Vec<i64>,
        prefix_out: &[i64],
        lower: Option<&[i64]>,
        out: &[i64],
        cache: &mut KostantCache<'_>,
        terms: &mut Vec<(Monomial, BigRational)>,
    ) -> Result<()> {
        let n = j.len();
        let mut lo = (prefix_out[idx] - prefix).max(0);
        if let Some(lower) = lower {
            lo = lo.max(lower[idx]);
        }
        if idx + 1 == n {
            if remaining < lo {
                return Ok(());
            }
            j[idx] = remaining;
            let mut netflow: Vec<i64> = j.iter().zip(out).map(|(a, b)| a - b).collect();
            netflow.push(0);
            let count = cache.count(&netflow)?;
            if !count.is_zero() {
                let mono = Monomial(j.iter().map(|&e| e as u32).collect());
                let factorial = BigRational::from(mono.factorial());
                terms.push((mono, BigRational::from(count) / factorial));
            }
            j[idx] = 0;
            return Ok(());
        }
        for value in lo..=remaining {
            j[idx] = value;
            gen(
                idx + 1,
                remaining - value,
                prefix + value,
                j,
                prefix_out,
                lower,
                out,
                cache,
                terms,
            )?;
        }
        j[idx] = 0;
        Ok(())
    }

    gen(
        0,
        degree,
        0,
        &mut j,
        &prefix_out,
        lower,
        &out,
        &mut cache,
        &mut terms,
    )?;
    SparsePolynomial::from_terms(vars, terms)
}

/// The Baldoni–Vergne volume polynomial of `g`.
pub fn volume_polynomial(g: &Multigraph) -> Result<VolumePolynomial> {
    let poly = baldoni_vergne_terms(g, None)?;
    let n = g.vertex_count() - 1;
    let out: Vec<i64> = (1..=n).map(|v| g.outdegree(v) as i64 - 1).collect();
    let degree = (g.edge_count() - n) as u32;

    // dominance of every exponent over the shifted outdegrees
    debug_assert!(poly.support().all(|mono| {
        let mut pj = 0i64;
        let mut po = 0i64;
        mono.0.iter().zip(&out).all(|(&j, &o)| {
            pj += j as i64;
            po += o;
            pj >= po
        })
    }));

    Ok(VolumePolynomial { poly, out, degree })
}

/// Whether the volume polynomial is Lorentzian, decided through the exact
/// checker on its denormalization (the volume polynomial is already the
/// normalization of its integer coefficient array).
pub fn volume_lorentzian_check(g: &Multigraph) -> Result<LorentzianVerdict> {
    let vol = volume_polynomial(g)?;
    lorentzian::is_lorentzian_normalized(&vol.poly.denormalize())
}

/// Lattice volume of the flow polytope with netflow `(x, -sum x)`, measured
/// independently of the volume polynomial: count lattice points of the
/// dilates `t = 0 .. |E|-n`, interpolate the Ehrhart polynomial exactly over
/// the rationals, and read off the leading coefficient. Points have volume 1
/// and empty polytopes volume 0.
pub fn ehrhart_volume_oracle(g: &Multigraph, x: &[i64]) -> Result<BigRational> {
    g.require_unique_sink()?;
    let n = g.vertex_count() - 1;
    if x.len() != n {
        return Err(Error::NetflowLength {
            expected: n,
            found: x.len(),
        });
    }
    if x.iter().any(|&v| v < 0) {
        return Err(Error::Precondition(format!(
            "dilation parameters must be nonnegative, got {x:?}"
        )));
    }
    let mut netflow: Vec<i64> = x.to_vec();
    netflow.push(-x.iter().sum::<i64>());

    if kostant::kostant(g, &netflow)?.is_zero() {
        return Ok(BigRational::zero());
    }

    let max_dim = g.edge_count() - n;
    let counts: Vec<BigInt> = (0..=max_dim as i64)
        .map(|t| {
            let scaled: Vec<i64> = netflow.iter().map(|&v| v * t).collect();
            kostant::kostant(g, &scaled)
        })
        .collect::<Result<_>>()?;

    let coeffs = interpolate_at_integers(&counts);
    let leading = coeffs
        .iter()
        .rposition(|c| !c.is_zero())
        .expect("counts include the nonzero value at t = 0");
    Ok(coeffs[leading].clone())
}

/// Coefficients (constant first) of the unique polynomial of degree below
/// `values.len()` taking `values[t]` at `t = 0, 1, 2, ...`. Exact Lagrange
/// interpolation.
fn interpolate_at_integers(values: &[BigInt]) -> Vec<BigRational> {
    let len = values.len();
    let mut coeffs = vec![BigRational::zero(); len];
    for (t, value) in values.iter().enumerate() {
        if value.is_zero() {
            continue;
        }
        // numerator basis: product of (X - s) over s != t
        let mut basis = vec![BigRational::zero(); len];
        basis[0] = BigRational::one();
        let mut deg = 0usize;
        let mut denom = BigRational::one();
        for s in 0..len {
            if s == t {
                continue;
            }
            let shift = BigRational::from(BigInt::from(s as i64));
            basis[deg + 1] = basis[deg].clone();
            for k in (1..=deg).rev() {
                basis[k] = basis[k - 1].clone() - &shift * &basis[k];
            }
            basis[0] = -(&shift * &basis[0]);
            deg += 1;
            denom *= BigRational::from(BigInt::from(t as i64 - s as i64));
        }
        let scale = BigRational::from(value.clone()) / denom;
        for k in 0..len {
            coeffs[k] += &basis[k] * &scale;
        }
    }
    coeffs
}

/// Runs the volume route to the conjugated Kostant matrix: build the
/// appended-web graph from the reversed defect vector, take the
/// Baldoni–Vergne terms that survive the prescribed coefficient shifts,
/// shift them down to a quadratic, keep only the variables selected by the
/// 0/1 diagonal substitution, and read off the Hessian of the normalized
/// quadratic. The graph must already be sink-simple (no parallel sink
/// edges).
pub fn hessian_via_volume(g: &Multigraph, a: &[i64], efd: &[u32]) -> Result<SymmetricIntMatrix> {
    kostant::check_projection_netflow(g, a)?;
    let sinkinfo = g.sink_structure()?;
    let n = sinkinfo.n();
    if sinkinfo.t_g().iter().any(|&i| g.multiplicity(i, g.sink()) > 1) {
        return Err(Error::Precondition(
            "graph must be sink-simple (apply simplify_at_sink first)".into(),
        ));
    }
    if efd.len() != n {
        return Err(Error::NetflowLength {
            expected: n,
            found: efd.len(),
        });
    }
    for (idx, &value) in efd.iter().enumerate() {
        if value > 0 && !sinkinfo.t_g().contains(&(idx + 1)) {
            return Err(Error::Precondition(format!(
                "escaping flow is positive at vertex {} which is not sink-adjacent",
                idx + 1
            )));
        }
    }
    let total: i64 = a[..n].iter().sum();
    if efd.iter().map(|&v| v as i64).sum::<i64>() != total - 2 {
        return Err(Error::Precondition(format!(
            "escaping flow must sum to {}",
            total - 2
        )));
    }

    // z reverses the per-vertex defects: z_i = efd_{n+1-i} - a_{n+1-i}
    let z: Vec<i64> = (1..=n).map(|i| efd[n - i] as i64 - a[n - i]).collect();
    let pg = g.proof_graph(&z)?;
    let shift: Vec<i64> = pg
        .z_tilde
        .iter()
        .zip(&pg.out_tilde)
        .map(|(z, o)| z + o)
        .collect();

    let surviving = baldoni_vergne_terms(&pg.graph, Some(&shift))?;
    let mut quadratic = surviving.denormalize();
    for (idx, &times) in shift.iter().enumerate() {
        for _ in 0..times {
            quadratic = quadratic.coefficient_shift(idx);
        }
    }
    debug_assert!(
        quadratic.is_zero() || (quadratic.is_homogeneous() && quadratic.total_degree() == 2)
    );

    // keep exactly the variables indexed by {n+1-t : t in T_G}
    let selected: Vec<usize> = sinkinfo.t_g().iter().rev().map(|&t| n + 1 - t).collect();
    let zero = BigRational::zero();
    let one = BigRational::one();
    let diagonal: Vec<Vec<BigRational>> = (1..=pg.big_n)
        .map(|i| {
            (1..=pg.big_n)
                .map(|j| {
                    if i == j && selected.contains(&i) {
                        one.clone()
                    } else {
                        zero.clone()
                    }
                })
                .collect()
        })
        .collect();
    let restricted =
        quadratic.substitute_nonneg_matrix(&diagonal, surviving.vars().to_vec())?;

    let dim = selected.len();
    let rows: Vec<Vec<BigInt>> = (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| {
                    let mut exps = vec![0u32; pg.big_n];
                    exps[selected[r] - 1] += 1;
                    exps[selected[c] - 1] += 1;
                    restricted.coefficient(&Monomial(exps)).to_integer()
                })
                .collect()
        })
        .collect();
    SymmetricIntMatrix::from_rows(rows)
}
