//! Exact spectral sign data of symmetric integer matrices, and the
//! Lorentzian predicate for normalized integer polynomials.
//!
//! Inertia is computed without floating point: the characteristic polynomial
//! is produced over the integers by the Faddeev–LeVerrier recursion (the
//! divisions it performs are exact), and since symmetric integer matrices
//! have all-real spectra, Descartes' rule of signs counts the positive and
//! negative roots exactly; the trailing zero coefficients give the kernel
//! dimension.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::kostant::KostantCache;
use crate::multigraph::Multigraph;
use crate::permutahedra::{is_m_convex, LatticePointSet, MConvexViolation};
use crate::polyalg::{Monomial, SparsePolynomial};
use crate::projections::escaping_flow_of_point;
use crate::{Error, Result};

/// A symmetric matrix with exact integer entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymmetricIntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl SymmetricIntMatrix {
    /// Builds from rows; fails unless the matrix is square and symmetric.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries in a {dim}x{dim} matrix",
                    row.len()
                )));
            }
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..dim {
            for j in (i + 1)..dim {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(SymmetricIntMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        SymmetricIntMatrix::from_rows(
            rows.into_iter()
                .map(|row| row.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    /// Builds entries from a function of `(row, col)`; the function is
    /// queried only for `row <= col` and mirrored.
    pub fn from_fn<F: FnMut(usize, usize) -> BigInt>(dim: usize, mut f: F) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let value = f(i, j);
                entries[i * dim + j] = value.clone();
                entries[j * dim + i] = value;
            }
        }
        SymmetricIntMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.dim + col]
    }

    /// Principal submatrix on the given (0-based, distinct) row indices.
    pub fn principal_submatrix(&self, rows: &[usize]) -> Result<SymmetricIntMatrix> {
        for &r in rows {
            if r >= self.dim {
                return Err(Error::DimensionMismatch(format!(
                    "row index {r} out of range for dimension {}",
                    self.dim
                )));
            }
        }
        Ok(SymmetricIntMatrix::from_fn(rows.len(), |i, j| {
            self.get(rows[i], rows[j]).clone()
        }))
    }

    /// Whitespace-separated rows, one per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row: Vec<BigInt> = line
                .split_whitespace()
                .map(|f| f.parse().map_err(|_| Error::Parse(format!("bad entry {f}"))))
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        SymmetricIntMatrix::from_rows(rows)
    }
}

impl fmt::Display for SymmetricIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Exact eigenvalue sign counts of a symmetric matrix.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(positive: {}, negative: {}, zero: {})",
            self.positive, self.negative, self.zero
        )
    }
}

/// Coefficients of the characteristic polynomial `det(tI - A)`, from the
/// leading power down: `[1, c_1, ..., c_n]`. Faddeev–LeVerrier over `BigInt`;
/// every division by the step index is exact.
pub fn char_poly(matrix: &SymmetricIntMatrix) -> Vec<BigInt> {
    let n = matrix.dim;
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(BigInt::one());
    if n == 0 {
        return coeffs;
    }

    let a = &matrix.entries;
    let mut m = a.clone();
    let mut trace = BigInt::zero();
    for i in 0..n {
        trace += &m[i * n + i];
    }
    coeffs.push(-trace);

    for k in 2..=n {
        // m <- a * (m + c_{k-1} I)
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[i * n + i] += &coeffs[k - 1];
        }
        let mut next = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for l in 0..n {
                let left = &a[i * n + l];
                if left.is_zero() {
                    continue;
                }
                for j in 0..n {
                    next[i * n + j] += left * &shifted[l * n + j];
                }
            }
        }
        m = next;
        let mut trace = BigInt::zero();
        for i in 0..n {
            trace += &m[i * n + i];
        }
        let c = -trace / BigInt::from(k as u64);
        coeffs.push(c);
    }
    coeffs
}

fn sign_variations<'a, I: Iterator<Item = &'a BigInt>>(seq: I) -> usize {
    let mut variations = 0;
    let mut last: Option<bool> = None;
    for value in seq {
        if value.is_zero() {
            continue;
        }
        let positive = value.is_positive();
        if let Some(prev) = last {
            if prev != positive {
                variations += 1;
            }
        }
        last = Some(positive);
    }
    variations
}

/// Exact inertia. The spectrum of a symmetric integer matrix is real, so
/// Descartes' rule applied to the integer characteristic polynomial is exact.
pub fn inertia(matrix: &SymmetricIntMatrix) -> Inertia {
    let coeffs = char_poly(matrix);
    let n = matrix.dim;

    let zero = coeffs.iter().rev().take_while(|c| c.is_zero()).count();
    let reduced = &coeffs[..=(n - zero)];

    let positive = sign_variations(reduced.iter());
    // substitute t -> -t: flip the sign of every odd-power coefficient
    let degree = n - zero;
    let negated: Vec<BigInt> = reduced
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            if (degree - idx) % 2 == 1 {
                -c.clone()
            } else {
                c.clone()
            }
        })
        .collect();
    let negative = sign_variations(negated.iter());
    debug_assert_eq!(positive + negative, degree, "spectrum must be real");

    Inertia {
        positive,
        negative,
        zero,
    }
}

/// Rank of a symmetric integer matrix (the number of nonzero eigenvalues).
pub fn rank(matrix: &SymmetricIntMatrix) -> usize {
    matrix.dim - inertia(matrix).zero
}

/// One Hessian slice per exponent tuple `d` of degree `deg(f) - 2` reachable
/// from the support: the matrix of coefficients `c_{d + e_i + e_j}`. Requires
/// integer coefficients and homogeneity; degree below 2 yields no slices.
pub fn hessian_slices(
    f: &SparsePolynomial,
) -> Result<Vec<(Monomial, SymmetricIntMatrix)>> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if f.total_degree() < 2 {
        return Ok(Vec::new());
    }
    for (mono, coeff) in f.terms() {
        if !coeff.is_integer() {
            return Err(Error::NonIntegerCoefficient {
                coefficient: coeff.to_string(),
                exponents: mono.0.clone(),
            });
        }
    }
    let n = f.num_vars();

    let mut slice_indices = std::collections::BTreeSet::new();
    for alpha in f.support() {
        for i in 0..n {
            if alpha.0[i] == 0 {
                continue;
            }
            for j in i..n {
                let mut d = alpha.0.clone();
                d[i] -= 1;
                if d[j] == 0 {
                    continue;
                }
                d[j] -= 1;
                slice_indices.insert(Monomial(d));
            }
        }
    }

    let slices = slice_indices
        .into_iter()
        .map(|d| {
            let matrix = SymmetricIntMatrix::from_fn(n, |i, j| {
                let mut alpha = d.0.clone();
                alpha[i] += 1;
                alpha[j] += 1;
                f.coefficient(&Monomial(alpha)).to_integer()
            });
            (d, matrix)
        })
        .collect();
    Ok(slices)
}

/// Outcome of the Lorentzian check, carrying a reproducible certificate on
/// failure.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LorentzianVerdict {
    Lorentzian,
    NegativeCoefficient {
        exponents: Vec<u32>,
        coefficient: String,
    },
    NotHomogeneous,
    NotMConvex(MConvexViolation),
    TooManyPositiveEigenvalues {
        slice: Vec<u32>,
        inertia: Inertia,
    },
}

impl LorentzianVerdict {
    pub fn is_lorentzian(&self) -> bool {
        matches!(self, LorentzianVerdict::Lorentzian)
    }
}

impl fmt::Display for LorentzianVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LorentzianVerdict::Lorentzian => write!(f, "Lorentzian"),
            LorentzianVerdict::NegativeCoefficient {
                exponents,
                coefficient,
            } => write!(
                f,
                "negative coefficient {coefficient} at exponent {exponents:?}"
            ),
            LorentzianVerdict::NotHomogeneous => write!(f, "polynomial is not homogeneous"),
            LorentzianVerdict::NotMConvex(v) => write!(
                f,
                "support is not M-convex: alpha={:?} beta={:?} index={}",
                v.alpha, v.beta, v.index
            ),
            LorentzianVerdict::TooManyPositiveEigenvalues { slice, inertia } => {
                write!(f, "Hessian slice at d={slice:?} has inertia {inertia}")
            }
        }
    }
}

/// Decides whether the normalization `N(f)` of a nonnegative-integer
/// polynomial `f` is Lorentzian: `f` must be homogeneous with M-convex
/// support, and every Hessian slice of coefficients must have at most one
/// positive eigenvalue. Degrees 0 and 1 (and the zero polynomial) pass
/// whenever the coefficients are nonnegative.
pub fn is_lorentzian_normalized(f: &SparsePolynomial) -> Result<LorentzianVerdict> {
    for (mono, coeff) in f.terms() {
        if coeff.is_negative() {
            return Ok(LorentzianVerdict::NegativeCoefficient {
                exponents: mono.0.clone(),
                coefficient: coeff.to_string(),
            });
        }
    }
    if !f.is_homogeneous() {
        return Ok(LorentzianVerdict::NotHomogeneous);
    }
    if f.is_zero() || f.total_degree() <= 1 {
        return Ok(LorentzianVerdict::Lorentzian);
    }

    let support = LatticePointSet::from_points(
        f.vars().to_vec(),
        f.support().map(|m| m.0.clone()).collect(),
    );
    if let Some(witness) = is_m_convex(&support) {
        return Ok(LorentzianVerdict::NotMConvex(witness));
    }

    for (d, matrix) in hessian_slices(f)? {
        let sig = inertia(&matrix);
        if sig.positive > 1 {
            return Ok(LorentzianVerdict::TooManyPositiveEigenvalues {
                slice: d.0,
                inertia: sig,
            });
        }
    }
    Ok(LorentzianVerdict::Lorentzian)
}

/// Witness of a failed coefficient log-concavity inequality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LogConcavityWitness {
    pub alpha: Vec<u32>,
    pub i: usize,
    pub j: usize,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl fmt::Display for LogConcavityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "c_alpha^2 = {} < {} at alpha={:?}, i={}, j={}",
            self.lhs,
            self.rhs,
            self.alpha,
            self.i + 1,
            self.j + 1
        )
    }
}

/// Checks `c_a^2 >= c_(a+e_i-e_j) * c_(a-e_i+e_j)` for every exponent tuple
/// in the support or adjacent to it, with absent coefficients read as zero.
/// Returns `None` when all inequalities hold.
pub fn log_concavity_check(f: &SparsePolynomial) -> Option<LogConcavityWitness> {
    let n = f.num_vars();
    let mut candidates: std::collections::BTreeSet<Monomial> = f.support().cloned().collect();
    for alpha in f.support() {
        for i in 0..n {
            for j in 0..n {
                if i == j || alpha.0[j] == 0 {
                    continue;
                }
                let mut shifted = alpha.0.clone();
                shifted[i] += 1;
                shifted[j] -= 1;
                candidates.insert(Monomial(shifted));
            }
        }
    }

    let shifted_coeff = |alpha: &Monomial, up: usize, down: usize| -> BigRational {
        if alpha.0[down] == 0 {
            return BigRational::zero();
        }
        let mut entries = alpha.0.clone();
        entries[up] += 1;
        entries[down] -= 1;
        f.coefficient(&Monomial(entries))
    };

    for alpha in &candidates {
        let center = f.coefficient(alpha);
        let lhs = &center * &center;
        for i in 0..n {
            for j in (i + 1)..n {
                let rhs = shifted_coeff(alpha, i, j) * shifted_coeff(alpha, j, i);
                if lhs < rhs {
                    return Some(LogConcavityWitness {
                        alpha: alpha.0.clone(),
                        i,
                        j,
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    None
}

/// Repeats the `i`-th row and then the `i`-th column `multiplicities[i]`
/// times. The rank is unchanged.
pub fn expand_matrix(
    matrix: &SymmetricIntMatrix,
    multiplicities: &[usize],
) -> Result<SymmetricIntMatrix> {
    if multiplicities.len() != matrix.dim {
        return Err(Error::DimensionMismatch(format!(
            "{} multiplicities for dimension {}",
            multiplicities.len(),
            matrix.dim
        )));
    }
    if multiplicities.contains(&0) {
        return Err(Error::Precondition(
            "row multiplicities must be positive".into(),
        ));
    }
    let mut origin = Vec::new();
    for (idx, &mult) in multiplicities.iter().enumerate() {
        origin.extend(std::iter::repeat_n(idx, mult));
    }
    Ok(SymmetricIntMatrix::from_fn(origin.len(), |i, j| {
        matrix.get(origin[i], origin[j]).clone()
    }))
}

/// Conjugation by the order-reversing permutation matrix: reverses both the
/// row and the column order. Preserves the spectrum.
pub fn conjugate_antidiagonal(matrix: &SymmetricIntMatrix) -> SymmetricIntMatrix {
    let n = matrix.dim;
    SymmetricIntMatrix::from_fn(n, |i, j| matrix.get(n - 1 - i, n - 1 - j).clone())
}

/// The matrix of Kostant values whose `(s, t)` entry, for sink edges `s, t`,
/// is the count with netflow `a|[n] - ef(d) - e_tail(s) - e_tail(t)` on the
/// restriction. Coincides with the Hessian slice of the phi-projected
/// transform at `d`.
pub fn build_k_matrix(g: &Multigraph, a: &[i64], d: &[u32]) -> Result<SymmetricIntMatrix> {
    crate::kostant::check_projection_netflow(g, a)?;
    let sinkinfo = g.sink_structure()?;
    let n = sinkinfo.n();
    if d.len() != sinkinfo.s_g().len() {
        return Err(Error::DimensionMismatch(format!(
            "d has {} entries, S_G has {}",
            d.len(),
            sinkinfo.s_g().len()
        )));
    }
    let total: i64 = a[..n].iter().sum();
    if total < 2 {
        return Err(Error::Precondition(format!(
            "netflow total {total} < 2: no quadratic slice exists"
        )));
    }
    if d.iter().map(|&x| x as i64).sum::<i64>() != total - 2 {
        return Err(Error::Precondition(format!(
            "d must have coordinate sum {}",
            total - 2
        )));
    }

    let efd = escaping_flow_of_point(d, &sinkinfo);
    let base: Vec<i64> = (0..n).map(|i| a[i] - efd.entries()[i] as i64).collect();
    let restriction = g.restriction();
    let mut cache = KostantCache::new(&restriction);

    let tails: Vec<usize> = sinkinfo.s_g().iter().map(|e| e.tail).collect();
    let mut entries = vec![vec![BigInt::zero(); tails.len()]; tails.len()];
    for i in 0..tails.len() {
        for j in i..tails.len() {
            let mut netflow = base.clone();
            netflow[tails[i] - 1] -= 1;
            netflow[tails[j] - 1] -= 1;
            let value = cache.count(&netflow)?;
            entries[i][j] = value.clone();
            entries[j][i] = value;
        }
    }
    SymmetricIntMatrix::from_rows(entries)
}

/// Consistency of the inertias of a matrix and one of its principal
/// submatrices with Cauchy interlacing: each sign count of the submatrix is
/// bounded by the corresponding count of the full matrix, and can fall short
/// by at most the dimension difference.
pub fn interlacing_check(big: &SymmetricIntMatrix, principal_rows: &[usize]) -> Result<bool> {
    let sub = big.principal_submatrix(principal_rows)?;
    let outer = inertia(big);
    let inner = inertia(&sub);
    let codim = big.dim - sub.dim;
    Ok(inner.negative <= outer.negative
        && outer.negative <= inner.negative + codim
        && inner.positive <= outer.positive
        && outer.positive <= inner.positive + codim)
}
