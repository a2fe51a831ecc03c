//! Minkowski sums of scaled coordinate simplices at lattice level, and the
//! M-convexity (symmetric exchange) check.

use std::collections::BTreeSet;

use crate::Result;

/// A formal Minkowski sum of scaled coordinate simplices over an explicit
/// ambient index set. An ambient label list is carried so that differently
/// indexed spaces (sink edges vs. vertices) never mix silently.
#[derive(Clone, Debug)]
pub struct SimplexSum {
    ambient: Vec<String>,
    summands: Vec<(u32, Vec<usize>)>,
}

impl SimplexSum {
    /// `summands` are `(scale, support)` pairs with supports given as indices
    /// into `ambient`. Zero-scale summands are dropped. A positive-scale
    /// summand with empty support denotes an empty polytope.
    pub fn new(ambient: Vec<String>, summands: Vec<(u32, Vec<usize>)>) -> Result<Self> {
        for (_, support) in &summands {
            for &idx in support {
                if idx >= ambient.len() {
                    return Err(crate::Error::DimensionMismatch(format!(
                        "support index {idx} exceeds ambient dimension {}",
                        ambient.len()
                    )));
                }
            }
        }
        let summands = summands
            .into_iter()
            .filter(|&(scale, _)| scale > 0)
            .map(|(scale, mut support)| {
                support.sort_unstable();
                support.dedup();
                (scale, support)
            })
            .collect();
        Ok(SimplexSum { ambient, summands })
    }

    pub fn ambient(&self) -> &[String] {
        &self.ambient
    }

    pub fn summands(&self) -> &[(u32, Vec<usize>)] {
        &self.summands
    }

    /// All lattice points of the Minkowski sum, computed as the iterated
    /// sumset of the summands' lattice points. Each summand `scale * D_S`
    /// contributes every nonnegative tuple supported on `S` with coordinate
    /// sum `scale`.
    pub fn lattice_points(&self) -> LatticePointSet {
        let dim = self.ambient.len();
        let mut points: BTreeSet<Vec<u32>> = BTreeSet::new();
        points.insert(vec![0; dim]);
        for (scale, support) in &self.summands {
            if support.is_empty() {
                // empty summand: the whole sum is empty
                return LatticePointSet {
                    ambient: self.ambient.clone(),
                    points: Vec::new(),
                };
            }
            let mut summand_points = Vec::new();
            enumerate_simplex_points(*scale, support, dim, &mut summand_points);
            let mut next = BTreeSet::new();
            for base in &points {
                for point in &summand_points {
                    let sum: Vec<u32> = base.iter().zip(point).map(|(a, b)| a + b).collect();
                    next.insert(sum);
                }
            }
            points = next;
        }
        LatticePointSet {
            ambient: self.ambient.clone(),
            points: points.into_iter().collect(),
        }
    }
}

/// Nonnegative tuples supported on `support` with coordinate sum `scale`.
fn enumerate_simplex_points(
    scale: u32,
    support: &[usize],
    dim: usize,
    out: &mut Vec<Vec<u32>>,
) {
    fn go(
        idx: usize,
        remaining: u32,
        support: &[usize],
        buffer: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if idx + 1 == support.len() {
            buffer[support[idx]] = remaining;
            out.push(buffer.clone());
            buffer[support[idx]] = 0;
            return;
        }
        for c in 0..=remaining {
            buffer[support[idx]] = c;
            go(idx + 1, remaining - c, support, buffer, out);
            buffer[support[idx]] = 0;
        }
    }
    let mut buffer = vec![0u32; dim];
    go(0, scale, support, &mut buffer, out);
}

/// A duplicate-free, sorted set of nonnegative lattice points with named
/// coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticePointSet {
    ambient: Vec<String>,
    points: Vec<Vec<u32>>,
}

impl LatticePointSet {
    pub fn from_points(ambient: Vec<String>, points: Vec<Vec<u32>>) -> Self {
        let points: BTreeSet<Vec<u32>> = points
            .into_iter()
            .inspect(|p| debug_assert_eq!(p.len(), ambient.len()))
            .collect();
        LatticePointSet {
            ambient,
            points: points.into_iter().collect(),
        }
    }

    pub fn ambient(&self) -> &[String] {
        &self.ambient
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: &[u32]) -> bool {
        self.points.binary_search_by(|p| p.as_slice().cmp(point)).is_ok()
    }
}

/// Witness of a failed symmetric exchange: for index `index` with
/// `alpha[index] > beta[index]`, no index `j` with `alpha[j] < beta[j]`
/// admits the double exchange inside the set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MConvexViolation {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub index: usize,
}

/// Checks the symmetric exchange axiom on every pair of points. Returns
/// `None` when the set is M-convex, otherwise the first violating triple.
pub fn is_m_convex(set: &LatticePointSet) -> Option<MConvexViolation> {
    let points = set.points();
    let dim = set.ambient().len();
    for alpha in points {
        for beta in points {
            for i in 0..dim {
                if alpha[i] <= beta[i] {
                    continue;
                }
                let found = (0..dim).any(|j| {
                    if alpha[j] >= beta[j] {
                        return false;
                    }
                    let mut alpha_ex = alpha.clone();
                    alpha_ex[i] -= 1;
                    alpha_ex[j] += 1;
                    let mut beta_ex = beta.clone();
                    beta_ex[j] -= 1;
                    beta_ex[i] += 1;
                    set.contains(&alpha_ex) && set.contains(&beta_ex)
                });
                if !found {
                    return Some(MConvexViolation {
                        alpha: alpha.clone(),
                        beta: beta.clone(),
                        index: i,
                    });
                }
            }
        }
    }
    None
}
