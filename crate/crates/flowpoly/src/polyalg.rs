//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Coefficients are `BigRational` throughout; no operation in this module
//! rounds. Terms are keyed by exponent tuples ordered graded-lexicographically,
//! so iteration order (and the text serialization built on it) is
//! deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exponent tuple of a single term.
///
/// The `Ord` instance is graded lexicographic: lower total degree first, ties
/// broken lexicographically on the entries.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn zero(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    /// Standard basis exponent tuple `e_idx`.
    pub fn unit(num_vars: usize, idx: usize) -> Self {
        let mut entries = vec![0; num_vars];
        entries[idx] += 1;
        Monomial(entries)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entrywise sum.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.len(), other.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Entrywise difference, `None` when any entry would go negative.
    pub fn checked_sub(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<u32>>>()
            .map(Monomial)
    }

    /// The factorial product `alpha! = prod_i alpha_i!`.
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &e in &self.0 {
            acc *= factorial(e);
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// A multivariate polynomial with exact rational coefficients, sparse in the
/// exponent tuples. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparsePolynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl SparsePolynomial {
    pub fn zero(vars: Vec<String>) -> Self {
        SparsePolynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vec<String>, value: BigRational) -> Self {
        let mut poly = SparsePolynomial::zero(vars);
        if !value.is_zero() {
            poly.terms.insert(Monomial::zero(poly.vars.len()), value);
        }
        poly
    }

    pub fn one(vars: Vec<String>) -> Self {
        SparsePolynomial::constant(vars, BigRational::one())
    }

    /// The single variable `x_idx`.
    pub fn variable(vars: Vec<String>, idx: usize) -> Self {
        let mono = Monomial::unit(vars.len(), idx);
        let mut poly = SparsePolynomial::zero(vars);
        poly.terms.insert(mono, BigRational::one());
        poly
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// duplicates and dropping zero coefficients.
    pub fn from_terms<I>(vars: Vec<String>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut poly = SparsePolynomial::zero(vars);
        for (mono, coeff) in terms {
            if mono.len() != poly.vars.len() {
                return Err(Error::DimensionMismatch(format!(
                    "exponent tuple has {} entries, polynomial has {} variables",
                    mono.len(),
                    poly.vars.len()
                )));
            }
            poly.add_term(mono, coeff);
        }
        Ok(poly)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Coefficient of the given exponent tuple; zero when absent.
    pub fn coefficient(&self, mono: &Monomial) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, mono: Monomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check_same_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(format!(
                "{:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (mono, coeff) in &other.terms {
            out.add_term(mono.clone(), coeff.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (mono, coeff) in &other.terms {
            out.add_term(mono.clone(), -coeff.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_vars(other)?;
        let mut out = SparsePolynomial::zero(self.vars.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return SparsePolynomial::zero(self.vars.clone());
        }
        SparsePolynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Result<Self> {
        let mut out = SparsePolynomial::one(self.vars.clone());
        for _ in 0..exp {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Maximum total degree over the support; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// True when every term has the same total degree (vacuously for zero).
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// The normalization operator: the coefficient of `x^alpha` is divided by
    /// `alpha!`.
    pub fn normalize(&self) -> Self {
        SparsePolynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c / BigRational::from(m.factorial())))
                .collect(),
        }
    }

    /// Inverse of [`normalize`](Self::normalize): multiplies each coefficient
    /// by `alpha!`.
    pub fn denormalize(&self) -> Self {
        SparsePolynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * BigRational::from(m.factorial())))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to variable `idx`.
    pub fn formal_derivative(&self, idx: usize) -> Self {
        let mut out = SparsePolynomial::zero(self.vars.clone());
        for (mono, coeff) in &self.terms {
            let e = mono.0[idx];
            if e == 0 {
                continue;
            }
            let mut entries = mono.0.clone();
            entries[idx] -= 1;
            out.add_term(Monomial(entries), coeff * BigRational::from(BigInt::from(e)));
        }
        out
    }

    /// The coefficient-level shift operator: drops every term with
    /// `alpha_idx = 0` and moves the remaining coefficients from `x^alpha`
    /// to `x^(alpha - e_idx)` unchanged. Acting on coefficients this equals
    /// conjugating the partial derivative by the normalization operator.
    pub fn coefficient_shift(&self, idx: usize) -> Self {
        let mut out = SparsePolynomial::zero(self.vars.clone());
        for (mono, coeff) in &self.terms {
            if mono.0[idx] == 0 {
                continue;
            }
            let mut entries = mono.0.clone();
            entries[idx] -= 1;
            out.add_term(Monomial(entries), coeff.clone());
        }
        out
    }

    /// Substitutes `x = A v` for a matrix `A` with nonnegative entries,
    /// expanding into the `out_vars`. `A` must have one row per current
    /// variable and one column per output variable.
    pub fn substitute_nonneg_matrix(
        &self,
        matrix: &[Vec<BigRational>],
        out_vars: Vec<String>,
    ) -> Result<Self> {
        if matrix.len() != self.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows, polynomial has {} variables",
                matrix.len(),
                self.num_vars()
            )));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != out_vars.len() {
                return Err(Error::DimensionMismatch(format!(
                    "matrix row {i} has {} columns, expected {}",
                    row.len(),
                    out_vars.len()
                )));
            }
            for (j, entry) in row.iter().enumerate() {
                if entry.is_negative() {
                    return Err(Error::NegativeEntry { row: i, col: j });
                }
            }
        }

        // Linear form in the output variables for each input variable.
        let images: Vec<SparsePolynomial> = matrix
            .iter()
            .map(|row| {
                let mut form = SparsePolynomial::zero(out_vars.clone());
                for (j, entry) in row.iter().enumerate() {
                    form.add_term(Monomial::unit(out_vars.len(), j), entry.clone());
                }
                form
            })
            .collect();

        let mut out = SparsePolynomial::zero(out_vars.clone());
        for (mono, coeff) in &self.terms {
            let mut term = SparsePolynomial::constant(out_vars.clone(), coeff.clone());
            for (i, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e)?)?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} entries, polynomial has {} variables",
                point.len(),
                self.num_vars()
            )));
        }
        let mut acc = BigRational::zero();
        for (mono, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in mono.0.iter().enumerate() {
                for _ in 0..e {
                    term *= &point[i];
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    pub fn eval_int(&self, point: &[i64]) -> Result<BigRational> {
        let rat: Vec<BigRational> = point
            .iter()
            .map(|&x| BigRational::from(BigInt::from(x)))
            .collect();
        self.eval(&rat)
    }

    /// Replaces the variable labels, keeping all terms. Label counts must
    /// match; this is the renaming used to transport polynomials along
    /// support bijections.
    pub fn rename_vars(&self, new_vars: Vec<String>) -> Result<Self> {
        if new_vars.len() != self.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "{} new labels for {} variables",
                new_vars.len(),
                self.num_vars()
            )));
        }
        Ok(SparsePolynomial {
            vars: new_vars,
            terms: self.terms.clone(),
        })
    }

    /// Text serialization: a header line with the variable labels, then one
    /// term per line as `numerator/denominator e_1 ... e_n` in graded-lex
    /// order. Round-trips exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.vars.join(" "));
        out.push('\n');
        for (mono, coeff) in &self.terms {
            out.push_str(&format!("{}/{}", coeff.numer(), coeff.denom()));
            for &e in &mono.0 {
                out.push_str(&format!(" {e}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty polynomial text".into()))?;
        let vars: Vec<String> = header.split_whitespace().map(str::to_owned).collect();
        let num_vars = vars.len();
        let mut poly = SparsePolynomial::zero(vars);
        for (lineno, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let coeff_field = fields.next().expect("non-empty line has a first field");
            let coeff = parse_rational(coeff_field)
                .ok_or_else(|| Error::Parse(format!("bad coefficient on line {}", lineno + 2)))?;
            let exponents: Vec<u32> = fields
                .map(|f| f.parse::<u32>().ok())
                .collect::<Option<Vec<u32>>>()
                .ok_or_else(|| Error::Parse(format!("bad exponent on line {}", lineno + 2)))?;
            if exponents.len() != num_vars {
                return Err(Error::Parse(format!(
                    "line {} has {} exponents, expected {}",
                    lineno + 2,
                    exponents.len(),
                    num_vars
                )));
            }
            poly.add_term(Monomial(exponents), coeff);
        }
        Ok(poly)
    }
}

fn parse_rational(field: &str) -> Option<BigRational> {
    match field.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.parse().ok()?;
            let den: BigInt = den.parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => {
            let num: BigInt = field.parse().ok()?;
            Some(BigRational::from(num))
        }
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let is_const = mono.degree() == 0;
            if is_const || !coeff.is_one() {
                write!(f, "{coeff}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first_var = true;
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first_var {
                    write!(f, "*")?;
                }
                first_var = false;
                write!(f, "{}", self.vars[i])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Conventional label `x_i` for a vertex-indexed variable.
pub fn vertex_var(i: usize) -> String {
    format!("x_{i}")
}

/// Conventional label `x_{i;k}` for a sink-edge-indexed variable.
pub fn sink_edge_var(i: usize, k: usize) -> String {
    format!("x_{{{i};{k}}}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn two_var(terms: &[(i64, [u32; 2])]) -> SparsePolynomial {
        SparsePolynomial::from_terms(
            vec!["x_1".into(), "x_2".into()],
            terms
                .iter()
                .map(|&(c, e)| (Monomial(e.to_vec()), int(c))),
        )
        .unwrap()
    }

    #[test]
    fn normalize_divides_by_factorials() {
        // x^2 -> x^2/2
        let p = SparsePolynomial::from_terms(
            vec!["x".into()],
            [(Monomial(vec![2]), int(1))],
        )
        .unwrap();
        assert_eq!(p.normalize().coefficient(&Monomial(vec![2])), rat(1, 2));

        // x1*x2 is fixed
        let p = two_var(&[(1, [1, 1])]);
        assert_eq!(p.normalize(), p);

        // 3 x1^2 x2^3 -> (3/12) x1^2 x2^3
        let p = two_var(&[(3, [2, 3])]);
        assert_eq!(
            p.normalize().coefficient(&Monomial(vec![2, 3])),
            rat(1, 4)
        );
    }

    #[test]
    fn denormalize_inverts_normalize() {
        let p = two_var(&[(3, [2, 3]), (1, [0, 5]), (-7, [4, 1])]);
        assert_eq!(p.normalize().denormalize(), p);
        assert_eq!(p.denormalize().normalize(), p);
    }

    #[test]
    fn coefficient_shift_examples() {
        // x1^2 + x1 x2, shift in x1 -> x1 + x2
        let p = two_var(&[(1, [2, 0]), (1, [1, 1])]);
        assert_eq!(p.coefficient_shift(0), two_var(&[(1, [1, 0]), (1, [0, 1])]));

        // x2^3 has no x1: shift to zero
        let p = two_var(&[(1, [0, 3])]);
        assert!(p.coefficient_shift(0).is_zero());
    }

    #[test]
    fn coefficient_shift_is_conjugated_derivative() {
        let p = two_var(&[(5, [3, 1]), (2, [1, 2]), (7, [0, 4]), (1, [2, 2])]);
        for idx in 0..2 {
            let direct = p.coefficient_shift(idx);
            let long_way = p.normalize().formal_derivative(idx).denormalize();
            assert_eq!(direct, long_way);
        }
    }

    #[test]
    fn formal_derivative_examples() {
        // d/dx1 (x1^2 x2) = 2 x1 x2
        let p = two_var(&[(1, [2, 1])]);
        assert_eq!(p.formal_derivative(0), two_var(&[(2, [1, 1])]));
        // derivative of a constant is zero
        let c = two_var(&[(9, [0, 0])]);
        assert!(c.formal_derivative(1).is_zero());
    }

    #[test]
    fn substitution_examples() {
        let vars = vec!["x_1".into(), "x_2".into()];
        // identity leaves f unchanged (up to renaming)
        let p = two_var(&[(1, [1, 0]), (1, [0, 1])]);
        let identity = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        let q = p.substitute_nonneg_matrix(&identity, vars).unwrap();
        assert_eq!(q.coefficient(&Monomial(vec![1, 0])), int(1));
        assert_eq!(q.coefficient(&Monomial(vec![0, 1])), int(1));

        // f = x1 + x2 under the all-ones column: 2 v1
        let collapse = vec![vec![int(1)], vec![int(1)]];
        let q = p
            .substitute_nonneg_matrix(&collapse, vec!["v_1".into()])
            .unwrap();
        assert_eq!(q.coefficient(&Monomial(vec![1])), int(2));

        // f = x1 x2 under the 2x2 all-ones matrix: (v1+v2)^2
        let p = two_var(&[(1, [1, 1])]);
        let ones = vec![vec![int(1), int(1)], vec![int(1), int(1)]];
        let q = p
            .substitute_nonneg_matrix(&ones, vec!["v_1".into(), "v_2".into()])
            .unwrap();
        let expected = two_var(&[(1, [2, 0]), (2, [1, 1]), (1, [0, 2])])
            .rename_vars(vec!["v_1".into(), "v_2".into()])
            .unwrap();
        assert_eq!(q, expected);
    }

    #[test]
    fn substitution_rejects_negative_entries() {
        let p = two_var(&[(1, [1, 0])]);
        let bad = vec![vec![int(-1), int(0)], vec![int(0), int(1)]];
        assert!(matches!(
            p.substitute_nonneg_matrix(&bad, vec!["a".into(), "b".into()]),
            Err(Error::NegativeEntry { row: 0, col: 0 })
        ));
    }

    #[test]
    fn text_round_trip() {
        let p = two_var(&[(3, [2, 3]), (1, [0, 5])]).normalize();
        let text = p.to_text();
        assert_eq!(SparsePolynomial::from_text(&text).unwrap(), p);
        // canonical text is reproduced byte for byte
        assert_eq!(SparsePolynomial::from_text(&text).unwrap().to_text(), text);

        let zero = SparsePolynomial::zero(vec!["x_{1;1}".into()]);
        assert_eq!(
            SparsePolynomial::from_text(&zero.to_text()).unwrap(),
            zero
        );
    }

    #[test]
    fn graded_lex_term_order() {
        let p = two_var(&[(1, [2, 0]), (1, [0, 1]), (1, [1, 1]), (1, [0, 0])]);
        let order: Vec<Vec<u32>> = p.support().map(|m| m.0.clone()).collect();
        assert_eq!(
            order,
            vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![2, 0]]
        );
    }

    #[test]
    fn homogeneity_detection() {
        assert!(two_var(&[(1, [2, 0]), (3, [1, 1])]).is_homogeneous());
        assert!(!two_var(&[(1, [2, 0]), (3, [1, 0])]).is_homogeneous());
        assert!(SparsePolynomial::zero(vec![]).is_homogeneous());
    }
}
