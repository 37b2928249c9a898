//! Leading-order critical points by total-degree homotopy continuation.
//!
//! Each leading equation `F_j` is a Laurent polynomial; multiplying by
//! `x^{−m_j}` (componentwise minimum exponent) makes it a polynomial `P_j`
//! with the same zeros in `(C*)ⁿ`. The start system `G_j = x_j^{d_j} − 1`
//! is deformed along `H = (1 − t)·γ·G + t·P` with a fixed complex `γ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use super::potential::{LeadingSystem, PotentialFunction};

const GAMMA: Complex64 = Complex64::new(0.652_374_843_201_7, 0.757_914_261_308_4);
const DIVERGED: f64 = 1e8;
const MIN_STEP: f64 = 1e-13;
const ROOT_TOL: f64 = 1e-10;
const DEDUP_TOL: f64 = 1e-7;
const SINGULAR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LeadingStatus {
    Solved,
    /// Equation `equation` has a single leading term, forcing a zero coordinate.
    Monomial { equation: usize, term: usize },
    /// No term of the potential involves coordinate `equation`.
    ZeroEquation { equation: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeadingSolutions {
    pub system: LeadingSystem,
    pub status: LeadingStatus,
    /// Isolated roots in `(C*)ⁿ` with nonsingular Jacobian.
    pub roots: Vec<Vec<Complex64>>,
    /// Roots where the leading Jacobian is singular (not liftable).
    pub degenerate_roots: Vec<Vec<Complex64>>,
}

struct PolySystem {
    /// Per equation: `(coefficient, nonnegative exponent)`.
    eqs: Vec<Vec<(f64, Vec<i64>)>>,
    degrees: Vec<u32>,
}

impl PolySystem {
    fn new(w: &PotentialFunction, sys: &LeadingSystem) -> Self {
        let n = w.dim;
        let eqs: Vec<Vec<(f64, Vec<i64>)>> = sys
            .equations
            .iter()
            .enumerate()
            .map(|(j, eq)| {
                let shift: Vec<i64> =
                    (0..n).map(|k| eq.terms.iter().map(|&i| w.terms[i].exponent[k]).min().unwrap_or(0)).collect();
                eq.terms
                    .iter()
                    .map(|&i| {
                        let t = &w.terms[i];
                        (t.exponent[j] as f64, t.exponent.iter().zip(&shift).map(|(a, s)| a - s).collect())
                    })
                    .collect()
            })
            .collect();
        let degrees = eqs
            .iter()
            .map(|e| e.iter().map(|(_, v)| v.iter().sum::<i64>()).max().unwrap_or(0) as u32)
            .collect();
        Self { eqs, degrees }
    }

    fn eval(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_iterator(
            self.eqs.len(),
            self.eqs.iter().map(|e| e.iter().map(|(c, v)| mono(x, v) * c).sum::<Complex64>()),
        )
    }

    fn jacobian(&self, x: &DVector<Complex64>) -> DMatrix<Complex64> {
        let n = x.len();
        DMatrix::from_fn(n, n, |j, k| {
            self.eqs[j]
                .iter()
                .filter(|(_, v)| v[k] > 0)
                .map(|(c, v)| {
                    let mut d = v.clone();
                    d[k] -= 1;
                    mono(x, &d) * (c * v[k] as f64)
                })
                .sum()
        })
    }

    fn start_eval(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_iterator(x.len(), x.iter().zip(&self.degrees).map(|(xj, &d)| xj.powu(d) - 1.0))
    }

    fn start_jacobian(&self, x: &DVector<Complex64>) -> DMatrix<Complex64> {
        let n = x.len();
        DMatrix::from_fn(n, n, |j, k| {
            if j == k {
                x[j].powu(self.degrees[j] - 1) * self.degrees[j] as f64
            } else {
                Complex64::zero()
            }
        })
    }

    fn h(&self, x: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
        self.start_eval(x) * (GAMMA * (1.0 - t)) + self.eval(x) * Complex64::new(t, 0.0)
    }

    fn hx(&self, x: &DVector<Complex64>, t: f64) -> DMatrix<Complex64> {
        self.start_jacobian(x) * (GAMMA * (1.0 - t)) + self.jacobian(x) * Complex64::new(t, 0.0)
    }

    /// `dx/dt = −H_x⁻¹ ∂H/∂t`.
    fn tangent(&self, x: &DVector<Complex64>, t: f64) -> Option<DVector<Complex64>> {
        let ht = self.eval(x) - self.start_eval(x) * GAMMA;
        self.hx(x, t).lu().solve(&(-ht))
    }

    fn correct(&self, mut x: DVector<Complex64>, t: f64) -> Option<DVector<Complex64>> {
        for _ in 0..4 {
            let dx = self.hx(&x, t).lu().solve(&(-self.h(&x, t)))?;
            x += &dx;
            if dx.norm() <= 1e-10 * (1.0 + x.norm()) {
                return Some(x);
            }
        }
        None
    }

    fn track(&self, start: DVector<Complex64>) -> Option<DVector<Complex64>> {
        let (mut t, mut h, mut x) = (0.0_f64, 0.02_f64, start);
        while t < 1.0 {
            let step = h.min(1.0 - t);
            let predicted = self.rk4(&x, t, step);
            match predicted.and_then(|p| self.correct(p, t + step)) {
                Some(next) => {
                    x = next;
                    t += step;
                    h = (h * 1.5).min(0.1);
                }
                None => {
                    h /= 2.0;
                    if h < MIN_STEP {
                        return None;
                    }
                }
            }
            if x.norm() > DIVERGED {
                return None;
            }
        }
        Some(x)
    }

    fn rk4(&self, x: &DVector<Complex64>, t: f64, h: f64) -> Option<DVector<Complex64>> {
        let hc = Complex64::new(h, 0.0);
        let k1 = self.tangent(x, t)?;
        let k2 = self.tangent(&(x + &k1 * (hc * 0.5)), t + h / 2.0)?;
        let k3 = self.tangent(&(x + &k2 * (hc * 0.5)), t + h / 2.0)?;
        let k4 = self.tangent(&(x + &k3 * hc), t + h)?;
        Some(x + (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4) * (hc / 6.0))
    }

    fn start_points(&self) -> Vec<DVector<Complex64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.degrees {
            let roots: Vec<Complex64> =
                (0..d).map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / d as f64)).collect();
            out = out.into_iter().flat_map(|p| roots.iter().map(move |r| [p.clone(), vec![*r]].concat())).collect();
        }
        out.into_iter().map(DVector::from_vec).collect()
    }
}

fn mono(x: &DVector<Complex64>, v: &[i64]) -> Complex64 {
    x.iter().zip(v).fold(Complex64::new(1.0, 0.0), |acc, (xj, &k)| acc * xj.powu(k as u32))
}

/// Newton polishing on the Laurent system, in log coordinates.
fn polish(w: &PotentialFunction, sys: &LeadingSystem, mut x: Vec<Complex64>) -> Vec<Complex64> {
    for _ in 0..60 {
        let f = DVector::from_vec(sys.eval(w, &x));
        let Some(d) = sys.log_jacobian(w, &x).lu().solve(&f) else { break };
        for (xj, dj) in x.iter_mut().zip(d.iter()) {
            *xj *= (-dj).exp();
        }
        if d.norm() < 1e-15 {
            break;
        }
    }
    x
}

pub(super) fn smallest_singular_value(m: &DMatrix<Complex64>) -> f64 {
    m.clone().svd(false, false).singular_values.iter().copied().fold(f64::INFINITY, f64::min)
}

fn canonical_order(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    let key = |z: &Complex64| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64);
    a.iter().map(key).cmp(b.iter().map(key))
}

fn push_unique(list: &mut Vec<Vec<Complex64>>, x: Vec<Complex64>) {
    let close = |a: &Vec<Complex64>| a.iter().zip(&x).all(|(p, q)| (p - q).norm() < DEDUP_TOL * (1.0 + q.norm()));
    if !list.iter().any(close) {
        list.push(x);
    }
}

/// Solves the leading system of `w` in `(C*)ⁿ`.
pub fn critical_points_leading(w: &PotentialFunction) -> LeadingSolutions {
    let system = w.leading_system();
    let done = |status, roots, degenerate_roots| LeadingSolutions { system: system.clone(), status, roots, degenerate_roots };
    for (j, eq) in system.equations.iter().enumerate() {
        match eq.terms[..] {
            [] => return done(LeadingStatus::ZeroEquation { equation: j }, vec![], vec![]),
            [i, ..] if eq.terms.iter().all(|&k| w.terms[k].exponent == w.terms[i].exponent) => {
                return done(LeadingStatus::Monomial { equation: j, term: i }, vec![], vec![])
            }
            _ => {}
        }
    }
    let poly = PolySystem::new(w, &system);
    let mut roots = Vec::new();
    let mut degenerate = Vec::new();
    for start in poly.start_points() {
        let Some(end) = poly.track(start) else { continue };
        let end: Vec<Complex64> = end.iter().copied().collect();
        if end.iter().any(|z| z.norm() < 1e-6 || !z.is_finite()) {
            continue;
        }
        let x = polish(w, &system, end);
        let scale = 1.0 + x.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !x.iter().all(|z| z.is_finite() && z.norm() > 1e-6) || system.residual_norm(w, &x) > ROOT_TOL * scale.powi(4) {
            continue;
        }
        if smallest_singular_value(&system.log_jacobian(w, &x)) < SINGULAR_TOL {
            push_unique(&mut degenerate, x);
        } else {
            push_unique(&mut roots, x);
        }
    }
    roots.sort_by(|a, b| canonical_order(a, b));
    degenerate.sort_by(|a, b| canonical_order(a, b));
    done(LeadingStatus::Solved, roots, degenerate)
}
