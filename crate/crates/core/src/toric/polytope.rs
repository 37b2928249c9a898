use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ToricError;
use crate::linalg;
use crate::rational::{format_q, q_to_f64, qi, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    #[serde(with = "crate::rational::q_string")]
    pub offset: Q,
}

/// `Δ = {λ : ⟨λ, v_i⟩ ≥ c_i}`. Facet values are the rational parts
/// `⟨λ, v_i⟩ − c_i`; the common factor 2π is implicit everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentPolytope {
    pub dim: usize,
    pub facets: Vec<Facet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PolytopeIssue {
    BadNormalLength { facet: usize },
    Empty,
    Unbounded { direction: Vec<String> },
    EmptyInterior,
    Redundant { facet: usize },
    Duplicate { facet: usize, of: usize },
    NotSimple { vertex: Vec<String>, facets: Vec<usize> },
    NotUnimodular { vertex: Vec<String>, facets: Vec<usize>, det: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolytopeReport {
    pub vertices: Vec<Vec<String>>,
    pub issues: Vec<PolytopeIssue>,
}

impl PolytopeReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn is_delzant(&self) -> bool {
        !self.issues.iter().any(|i| matches!(i, PolytopeIssue::NotSimple { .. } | PolytopeIssue::NotUnimodular { .. }))
    }
}

fn fmt_point(p: &[Q]) -> Vec<String> {
    p.iter().map(format_q).collect()
}

impl MomentPolytope {
    pub fn new(dim: usize, facets: Vec<(Vec<i64>, Q)>) -> Self {
        Self { dim, facets: facets.into_iter().map(|(normal, offset)| Facet { normal, offset }).collect() }
    }

    /// `[a, b]`.
    pub fn interval(a: Q, b: Q) -> Self {
        Self::new(1, vec![(vec![1], a), (vec![-1], -b)])
    }

    /// The standard simplex `{λ_i ≥ 0, Σ λ_i ≤ 1}`, moment polytope of `CPⁿ`.
    pub fn simplex(n: usize) -> Self {
        let mut facets: Vec<(Vec<i64>, Q)> = (0..n)
            .map(|i| ((0..n).map(|j| i64::from(i == j)).collect(), qi(0)))
            .collect();
        facets.push((vec![-1; n], qi(-1)));
        Self::new(n, facets)
    }

    pub fn product(&self, other: &Self) -> Self {
        let pad = |v: &[i64], before: usize, after: usize| {
            std::iter::repeat_n(0, before).chain(v.iter().copied()).chain(std::iter::repeat_n(0, after)).collect()
        };
        let mut facets: Vec<(Vec<i64>, Q)> =
            self.facets.iter().map(|f| (pad(&f.normal, 0, other.dim), f.offset.clone())).collect();
        facets.extend(other.facets.iter().map(|f| (pad(&f.normal, self.dim, 0), f.offset.clone())));
        Self::new(self.dim + other.dim, facets)
    }

    /// Rational parts `⟨λ, v_i⟩ − c_i`, without the interior check.
    pub fn raw_facet_values(&self, lambda: &[Q]) -> Vec<Q> {
        self.facets
            .iter()
            .map(|f| {
                f.normal.iter().zip(lambda).fold(Q::zero(), |acc, (&v, l)| acc + l * qi(v)) - &f.offset
            })
            .collect()
    }

    pub fn is_interior(&self, lambda: &[Q]) -> bool {
        lambda.len() == self.dim && self.raw_facet_values(lambda).iter().all(Q::is_positive)
    }

    /// Rational parts of `l_i(λ)`; errors unless `λ` is interior.
    pub fn facet_values(&self, lambda: &[Q]) -> Result<Vec<Q>, ToricError> {
        if lambda.len() != self.dim {
            return Err(ToricError::DimensionMismatch { expected: self.dim, got: lambda.len() });
        }
        let values = self.raw_facet_values(lambda);
        if let Some(i) = values.iter().position(|l| !l.is_positive()) {
            return Err(ToricError::NotInterior { fiber: fmt_point(lambda), facet: i });
        }
        Ok(values)
    }

    /// Radii of the torus fiber in the ambient `Cᵐ`: `|z_j| = sqrt(l_j(λ)/π)`.
    pub fn fiber_radii(&self, lambda: &[Q]) -> Result<Vec<f64>, ToricError> {
        Ok(self.facet_values(lambda)?.iter().map(|l| (2.0 * q_to_f64(l)).sqrt()).collect())
    }

    fn normal_row(&self, i: usize) -> Vec<Q> {
        self.facets[i].normal.iter().map(|&v| qi(v)).collect()
    }

    /// Vertices with the sets of facets tight at each.
    pub fn vertices(&self) -> Vec<(Vec<Q>, Vec<usize>)> {
        let n = self.dim;
        let mut seen: BTreeSet<Vec<Q>> = BTreeSet::new();
        let mut out = Vec::new();
        for subset in (0..self.facets.len()).combinations(n) {
            let a: Vec<Vec<Q>> = subset.iter().map(|&i| self.normal_row(i)).collect();
            let b: Vec<Q> = subset.iter().map(|&i| self.facets[i].offset.clone()).collect();
            let Some(p) = linalg::solve(&a, &b) else { continue };
            let values = self.raw_facet_values(&p);
            if values.iter().any(Q::is_negative) || !seen.insert(p.clone()) {
                continue;
            }
            let tight = (0..values.len()).filter(|&i| values[i].is_zero()).collect();
            out.push((p, tight));
        }
        out
    }

    /// A nonzero direction `d` with `⟨d, v_i⟩ ≥ 0` for all facets, if any.
    fn recession_ray(&self) -> Option<Vec<Q>> {
        let n = self.dim;
        let normals: Vec<Vec<Q>> = (0..self.facets.len()).map(|i| self.normal_row(i)).collect();
        if let Some(d) = linalg::kernel_vector(&normals, n) {
            return Some(d);
        }
        let dot = |d: &[Q], r: &[Q]| d.iter().zip(r).fold(Q::zero(), |acc, (a, b)| acc + a * b);
        for subset in (0..normals.len()).combinations(n - 1) {
            let rows: Vec<Vec<Q>> = subset.iter().map(|&i| normals[i].clone()).collect();
            let Some(d) = linalg::kernel_line(&rows, n) else { continue };
            for d in [d.clone(), d.iter().map(|x| -x).collect::<Vec<_>>()] {
                if normals.iter().all(|r| !dot(&d, r).is_negative()) {
                    return Some(d);
                }
            }
        }
        None
    }

    pub fn validate(&self) -> PolytopeReport {
        let n = self.dim;
        let mut issues = Vec::new();
        for (i, f) in self.facets.iter().enumerate() {
            if f.normal.len() != n {
                issues.push(PolytopeIssue::BadNormalLength { facet: i });
            }
        }
        if !issues.is_empty() || n == 0 {
            return PolytopeReport { vertices: vec![], issues };
        }
        for (i, j) in (0..self.facets.len()).tuple_combinations() {
            if self.facets[i] == self.facets[j] {
                issues.push(PolytopeIssue::Duplicate { facet: j, of: i });
            }
        }
        if let Some(d) = self.recession_ray() {
            issues.push(PolytopeIssue::Unbounded { direction: fmt_point(&d) });
            return PolytopeReport { vertices: vec![], issues };
        }
        let vertices = self.vertices();
        if vertices.is_empty() {
            issues.push(PolytopeIssue::Empty);
            return PolytopeReport { vertices: vec![], issues };
        }
        let k = qi(vertices.len() as i64);
        let centroid: Vec<Q> = (0..n).map(|c| vertices.iter().fold(Q::zero(), |acc, (p, _)| acc + &p[c]) / &k).collect();
        if !self.is_interior(&centroid) {
            issues.push(PolytopeIssue::EmptyInterior);
        } else {
            for i in 0..self.facets.len() {
                let on: Vec<&Vec<Q>> = vertices.iter().filter(|(_, t)| t.contains(&i)).map(|(p, _)| p).collect();
                let affine_rank = match on.split_first() {
                    None => 0,
                    Some((p0, rest)) => {
                        let diffs: Vec<Vec<Q>> = rest.iter().map(|p| p.iter().zip(*p0).map(|(a, b)| a - b).collect()).collect();
                        linalg::rank(&diffs) + 1
                    }
                };
                if affine_rank < n {
                    issues.push(PolytopeIssue::Redundant { facet: i });
                }
            }
            for (p, tight) in &vertices {
                if tight.len() != n {
                    issues.push(PolytopeIssue::NotSimple { vertex: fmt_point(p), facets: tight.clone() });
                    continue;
                }
                let m: Vec<Vec<Q>> = tight.iter().map(|&i| self.normal_row(i)).collect();
                let d = linalg::det(&m);
                if d.abs() != qi(1) {
                    issues.push(PolytopeIssue::NotUnimodular { vertex: fmt_point(p), facets: tight.clone(), det: format_q(&d) });
                }
            }
        }
        PolytopeReport { vertices: vertices.iter().map(|(p, _)| fmt_point(p)).collect(), issues }
    }

    /// Interior points whose coordinates are multiples of `1/k`, in lexicographic order.
    pub fn grid(&self, k: u32) -> Vec<Vec<Q>> {
        let vertices = self.vertices();
        if vertices.is_empty() || k == 0 {
            return vec![];
        }
        let k = i64::from(k);
        let ranges: Vec<(i64, i64)> = (0..self.dim)
            .map(|c| {
                let lo = vertices.iter().map(|(p, _)| &p[c]).min().unwrap();
                let hi = vertices.iter().map(|(p, _)| &p[c]).max().unwrap();
                let lo = (lo * qi(k)).ceil().to_integer().try_into().unwrap_or(i64::MIN / 2);
                let hi = (hi * qi(k)).floor().to_integer().try_into().unwrap_or(i64::MAX / 2);
                (lo, hi)
            })
            .collect();
        ranges
            .iter()
            .map(|&(lo, hi)| lo..=hi)
            .multi_cartesian_product()
            .map(|p| p.into_iter().map(|a| Q::new(a.into(), k.into())).collect::<Vec<_>>())
            .filter(|p| self.is_interior(p))
            .collect()
    }
}
