//! Polytope/projection pairs at lattice-point level: a set of nonnegative
//! integer points in an ambient space, projected onto a prefix of the
//! coordinates. Projecting the integer point transform and shifting
//! coefficients commute with passing to the derived pair; that identity is
//! checked here.

use num_rational::BigRational;
use num_traits::One;

use crate::polyalg::{vertex_var, Monomial, SparsePolynomial};
use crate::{Error, Result};

/// Lattice points of a polytope in the nonnegative orthant of an
/// `ambient_dim`-dimensional space, together with the projection onto the
/// first `proj_dim` coordinates. Convexity of the underlying point set is
/// the caller's responsibility.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdmissiblePair {
    ambient_dim: usize,
    proj_dim: usize,
    points: Vec<Vec<u32>>,
}

impl AdmissiblePair {
    pub fn new(ambient_dim: usize, proj_dim: usize, points: Vec<Vec<u32>>) -> Result<Self> {
        if proj_dim > ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "projection dimension {proj_dim} exceeds ambient dimension {ambient_dim}"
            )));
        }
        for p in &points {
            if p.len() != ambient_dim {
                return Err(Error::DimensionMismatch(format!(
                    "point {p:?} does not have {ambient_dim} coordinates"
                )));
            }
        }
        let dedup: std::collections::BTreeSet<Vec<u32>> = points.into_iter().collect();
        Ok(AdmissiblePair {
            ambient_dim,
            proj_dim,
            points: dedup.into_iter().collect(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn proj_dim(&self) -> usize {
        self.proj_dim
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The projected integer point transform: the sum of `x^(p restricted to
    /// the first proj_dim coordinates)` over all points, so each coefficient
    /// is a fiber cardinality.
    pub fn sigma_projected(&self) -> SparsePolynomial {
        let vars: Vec<String> = (1..=self.proj_dim).map(vertex_var).collect();
        SparsePolynomial::from_terms(
            vars,
            self.points
                .iter()
                .map(|p| (Monomial(p[..self.proj_dim].to_vec()), BigRational::one())),
        )
        .expect("projected exponents have the declared length")
    }

    /// The derived pair in direction `idx` (0-based, below `proj_dim`):
    /// keep the points with a positive `idx` coordinate and shift them down
    /// by one. Admissibility is preserved.
    pub fn derived_pair(&self, idx: usize) -> Result<AdmissiblePair> {
        if idx >= self.proj_dim {
            return Err(Error::Precondition(format!(
                "direction {idx} is not a projection coordinate (proj_dim {})",
                self.proj_dim
            )));
        }
        let points: Vec<Vec<u32>> = self
            .points
            .iter()
            .filter(|p| p[idx] >= 1)
            .map(|p| {
                let mut q = p.clone();
                q[idx] -= 1;
                q
            })
            .collect();
        AdmissiblePair::new(self.ambient_dim, self.proj_dim, points)
    }

    /// Whether shifting the coefficients of the projected transform in
    /// direction `idx` equals the projected transform of the derived pair.
    pub fn derivative_identity_check(&self, idx: usize) -> Result<bool> {
        let shifted = self.sigma_projected().coefficient_shift(idx);
        let derived = self.derived_pair(idx)?.sigma_projected();
        Ok(shifted == derived)
    }

    /// Lattice-point file format: a header `m n`, then one point per line as
    /// space-separated integers.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.ambient_dim, self.proj_dim);
        for p in &self.points {
            let fields: Vec<String> = p.iter().map(u32::to_string).collect();
            out.push_str(&fields.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header".into()))?;
        let mut fields = header.split_whitespace();
        let ambient_dim: usize = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| Error::Parse("bad ambient dimension".into()))?;
        let proj_dim: usize = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| Error::Parse("bad projection dimension".into()))?;
        let mut points = Vec::new();
        for line in lines {
            let point: Vec<u32> = line
                .split_whitespace()
                .map(|f| f.parse::<u32>().map_err(|_| Error::Parse(format!("bad coordinate {f}"))))
                .collect::<Result<_>>()?;
            points.push(point);
        }
        AdmissiblePair::new(ambient_dim, proj_dim, points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rational(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn small_pair() -> AdmissiblePair {
        AdmissiblePair::new(2, 1, vec![vec![0, 0], vec![1, 0], vec![1, 1]]).unwrap()
    }

    #[test]
    fn sigma_counts_fibers() {
        let sigma = small_pair().sigma_projected();
        assert_eq!(sigma.coefficient(&Monomial(vec![0])), rational(1));
        assert_eq!(sigma.coefficient(&Monomial(vec![1])), rational(2));
    }

    #[test]
    fn full_projection_is_the_integer_point_transform() {
        let pair = AdmissiblePair::new(2, 2, vec![vec![0, 1], vec![2, 0]]).unwrap();
        let sigma = pair.sigma_projected();
        assert_eq!(sigma.coefficient(&Monomial(vec![0, 1])), rational(1));
        assert_eq!(sigma.coefficient(&Monomial(vec![2, 0])), rational(1));
        assert_eq!(sigma.num_terms(), 2);
    }

    #[test]
    fn derived_pair_shifts_points() {
        let derived = small_pair().derived_pair(0).unwrap();
        assert_eq!(derived.points(), &[vec![0, 0], vec![0, 1]]);

        // no point has the coordinate positive: empty pair
        let flat = AdmissiblePair::new(2, 2, vec![vec![0, 3]]).unwrap();
        assert!(flat.derived_pair(0).unwrap().is_empty());
    }

    #[test]
    fn derivative_identity_examples() {
        assert!(small_pair().derivative_identity_check(0).unwrap());

        let empty = AdmissiblePair::new(3, 2, vec![]).unwrap();
        assert!(empty.derivative_identity_check(0).unwrap());
        assert!(empty.derivative_identity_check(1).unwrap());

        // a dilated simplex, all directions
        let simplex = crate::permutahedra::SimplexSum::new(
            (1..=3).map(|i| format!("x_{i}")).collect(),
            vec![(3, vec![0, 1, 2])],
        )
        .unwrap();
        let pair = AdmissiblePair::new(
            3,
            2,
            simplex.lattice_points().points().to_vec(),
        )
        .unwrap();
        for idx in 0..2 {
            assert!(pair.derivative_identity_check(idx).unwrap());
        }
    }

    #[test]
    fn flow_polytope_points_match_sigma_phi() {
        // lattice points of a flow polytope with the sink-edge coordinates
        // first project to the phi transform
        let g = crate::multigraph::Multigraph::new(
            4,
            vec![(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)],
        )
        .unwrap();
        let a = [1i64, 0, 0, -1];
        let info = g.sink_structure().unwrap();
        let flows = crate::kostant::enumerate_flows(&g, &a).unwrap();
        let reordered: Vec<Vec<u32>> = flows
            .iter()
            .map(|flow| {
                let mut coords = crate::projections::phi(flow, &info);
                for (pos, &value) in flow.values().iter().enumerate() {
                    if !info.s_g_positions().contains(&pos) {
                        coords.push(value);
                    }
                }
                coords
            })
            .collect();
        let pair = AdmissiblePair::new(g.edge_count(), info.s_g().len(), reordered).unwrap();
        let sigma = pair.sigma_projected();
        let expected = crate::projections::sigma_phi(
            &g,
            &a,
            crate::projections::SigmaMode::Formula,
        )
        .unwrap();
        // same coefficients once the variable names are aligned
        let renamed = sigma.rename_vars(expected.vars().to_vec()).unwrap();
        assert_eq!(renamed, expected);

        for idx in 0..pair.proj_dim() {
            assert!(pair.derivative_identity_check(idx).unwrap());
        }
    }

    #[test]
    fn text_round_trip() {
        let pair = small_pair();
        let text = pair.to_text();
        assert_eq!(AdmissiblePair::from_text(&text).unwrap(), pair);
        assert_eq!(text, "2 1\n0 0\n1 0\n1 1\n");
    }
}
