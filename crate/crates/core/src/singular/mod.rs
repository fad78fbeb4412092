//! The minimal-regularity benchmark on the unit square:
//! `ū(x) = (-log max(|x1 - 1/2|, |x2 - 1/2|))^γ - (-log r0)^γ`,
//! with `f = 0` and `F = -∇ū`.
//!
//! Every quantity the error analysis needs is available in closed form
//! through the upper incomplete gamma function, so nothing here relies on
//! 2D quadrature near the singular point.

pub mod gamma;

use nalgebra::Vector2;

pub use gamma::{gamma, upper_incomplete_gamma};

use crate::analysis::{error_report, sandwich_check, ErrorReport, ReportOptions, SandwichCheck};
use crate::assembly::{assemble_steady, solve, SteadyProblemData};
use crate::error::{Result, TpfaError};
use crate::mesh::AdmissibleMesh;
use crate::quadrature::{clip_half_plane, gauss_legendre, integrate_adaptive, polygon_signed_area};
use crate::space::{mean_normal_gradient, ExactSolution};
use crate::Point;

/// Parameter values below this are treated as a segment crossing.
pub const CROSSING_TOL: f64 = 1e-14;
/// Sub-segments with `|β - α| <= SHORT_SEGMENT * max(α, β)` are integrated by
/// Gauss-Legendre instead of the gamma difference, which would cancel.
const SHORT_SEGMENT: f64 = 1e-3;
const RADIAL_TOL: f64 = 1e-13;

/// The singular solution with exponent `gamma` and outer radius `r0`,
/// centred at `(1/2, 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularSolution {
    pub gamma: f64,
    pub r0: f64,
}

impl Default for SingularSolution {
    fn default() -> Self {
        SingularSolution { gamma: 0.25, r0: 0.5 }
    }
}

fn local(x: &Point) -> (f64, f64) {
    (x.x - 0.5, x.y - 0.5)
}

impl SingularSolution {
    /// `(-log r0)^γ`, the constant making `ū` vanish on the boundary.
    pub fn boundary_constant(&self) -> f64 {
        (-self.r0.ln()).powf(self.gamma)
    }

    /// `(1/(β-α)) ∫_α^β (-log s)^γ ds`, continuous at `α = 0` or `β = 0`.
    pub fn log_power_mean(&self, alpha: f64, beta: f64) -> Result<f64> {
        let g = self.gamma;
        let (lo, hi) = if alpha <= beta { (alpha, beta) } else { (beta, alpha) };
        if lo < 0.0 || hi >= 1.0 {
            return Err(TpfaError::Domain(format!("radial range [{lo}, {hi}] outside (0, 1)")));
        }
        if hi == 0.0 {
            return Err(TpfaError::SingularPoint);
        }
        if hi - lo <= SHORT_SEGMENT * hi {
            let (x, w) = gauss_legendre(8);
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            return Ok(x.iter().zip(&w).map(|(xi, wi)| 0.5 * wi * (-(mid + half * xi).ln()).powf(g)).sum());
        }
        let upper = |s: f64| if s == 0.0 { Ok(0.0) } else { upper_incomplete_gamma(g + 1.0, -s.ln()) };
        Ok((upper(hi)? - upper(lo)?) / (hi - lo))
    }

    /// `∫_[p,q] ū ds` along a straight segment.
    ///
    /// The segment is split where it crosses the two diagonals and the two
    /// coordinate lines through the centre, so that `max(|x1-1/2|, |x2-1/2|)`
    /// is affine on each piece.
    pub fn segment_integral(&self, p: &Point, q: &Point) -> Result<f64> {
        let len = (q - p).norm();
        if len == 0.0 {
            return Ok(0.0);
        }
        let (px, py) = local(p);
        let (qx, qy) = local(q);
        let (dx, dy) = (qx - px, qy - py);
        let mut ts = vec![0.0, 1.0];
        // Roots of X = 0, Y = 0, X - Y = 0, X + Y = 0 along the segment.
        for (a, b) in [(px, dx), (py, dy), (px - py, dx - dy), (px + py, dx + dy)] {
            if b != 0.0 {
                let t = -a / b;
                if t > CROSSING_TOL && t < 1.0 - CROSSING_TOL {
                    ts.push(t);
                }
            }
        }
        ts.sort_by(f64::total_cmp);
        let radius = |t: f64| (px + t * dx).abs().max((py + t * dy).abs());
        let c = self.boundary_constant();
        let mut total = 0.0;
        for w in ts.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            if t1 - t0 <= 0.0 {
                continue;
            }
            let (alpha, beta) = (radius(t0), radius(t1));
            let mean = if alpha == 0.0 && beta == 0.0 { 0.0 } else { self.log_power_mean(alpha, beta)? - c };
            total += len * (t1 - t0) * mean;
        }
        Ok(total)
    }

    /// Radial integrals `∫ w(s) g(s) ds` over a polygon, where `w` is the
    /// width of the polygon along the level line `s` inside each of the four
    /// sectors `{±X >= |Y|}`, `{±Y >= |X|}`. On each sector `s` is one
    /// coordinate, and `w` is piecewise linear between vertex levels.
    ///
    /// `near_centre(q, s1)` must return `∫_0^{s1} q s g(s) ds` in closed form;
    /// `g` is used on intervals away from the centre.
    fn sector_integral<G, C>(&self, poly: &[Point], g: &G, near_centre: &C) -> Result<f64>
    where
        G: Fn(f64) -> f64,
        C: Fn(f64, f64) -> Result<f64>,
    {
        // Rotations taking each sector to {u >= |v|}.
        let rotations: [[f64; 4]; 4] = [[1.0, 0.0, 0.0, 1.0], [0.0, 1.0, -1.0, 0.0], [-1.0, 0.0, 0.0, -1.0], [0.0, -1.0, 1.0, 0.0]];
        let mut total = 0.0;
        for r in rotations {
            let pts: Vec<Vector2<f64>> = poly
                .iter()
                .map(|x| {
                    let (a, b) = local(x);
                    Vector2::new(r[0] * a + r[1] * b, r[2] * a + r[3] * b)
                })
                .collect();
            let clipped = clip_half_plane(&clip_half_plane(&pts, Vector2::new(1.0, -1.0), 0.0), Vector2::new(1.0, 1.0), 0.0);
            if clipped.len() < 3 || polygon_signed_area(&clipped).abs() <= 1e-300 {
                continue;
            }
            let mut levels: Vec<f64> = clipped.iter().map(|p| p.x.max(0.0)).collect();
            levels.sort_by(f64::total_cmp);
            levels.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
            for w in levels.windows(2) {
                let (sa, sb) = (w[0], w[1]);
                if sb - sa <= 1e-15 {
                    continue;
                }
                // Fit w(s) = p + q s from two interior levels, away from any
                // edge parallel to the level lines.
                let (m1, m2) = (sa + 0.25 * (sb - sa), sa + 0.75 * (sb - sa));
                let (w1, w2) = (chord(&clipped, m1), chord(&clipped, m2));
                let q = (w2 - w1) / (m2 - m1);
                let p = w1 - q * m1;
                total += if sa == 0.0 {
                    near_centre(q, sb)?
                } else {
                    integrate_adaptive(|s| Ok((p + q * s) * g(s)), sa, sb, RADIAL_TOL, 0.0)?
                };
            }
        }
        Ok(total)
    }

    /// `(∫_{B∞(r)} |∇ū|^2)^{1/2}` and the `L^2` norm of `ū_r` on `B∞(r)`,
    /// where `ū_r` uses the boundary constant `(-log r)^γ`; `r = r0` gives
    /// the norms on the whole square.
    pub fn exact_norms(&self, r: f64) -> Result<(f64, f64)> {
        if !(r > 0.0 && r <= self.r0) {
            return Err(TpfaError::Domain(format!("radius {r} outside (0, {}]", self.r0)));
        }
        let g = self.gamma;
        let l = -r.ln();
        let grad2 = 8.0 * g * g / (1.0 - 2.0 * g) * l.powf(2.0 * g - 1.0);
        let val2 = 2f64.powf(2.0 - 2.0 * g) * upper_incomplete_gamma(2.0 * g + 1.0, 2.0 * l)?
            - 2f64.powf(3.0 - g) * l.powf(g) * upper_incomplete_gamma(g + 1.0, 2.0 * l)?
            + 4.0 * r * r * l.powf(2.0 * g);
        Ok((grad2.sqrt(), val2.max(0.0).sqrt()))
    }
}

/// Width of a convex polygon along the line `x = u`.
fn chord(poly: &[Vector2<f64>], u: f64) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        if (a.x - u) * (b.x - u) <= 0.0 && a.x != b.x {
            let v = a.y + (b.y - a.y) * (u - a.x) / (b.x - a.x);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if hi > lo {
        hi - lo
    } else {
        0.0
    }
}

impl ExactSolution for SingularSolution {
    fn value(&self, x: &Point) -> Result<f64> {
        let (a, b) = local(x);
        let s = a.abs().max(b.abs());
        if s == 0.0 {
            return Err(TpfaError::SingularPoint);
        }
        Ok((-s.ln()).powf(self.gamma) - self.boundary_constant())
    }

    fn gradient(&self, x: &Point) -> Result<Point> {
        let (a, b) = local(x);
        let s = a.abs().max(b.abs());
        if s == 0.0 {
            return Err(TpfaError::SingularPoint);
        }
        if a.abs() == b.abs() {
            return Err(TpfaError::DiagonalPoint);
        }
        // d/ds (-log s)^γ = -γ (-log s)^{γ-1} / s.
        let ds = -self.gamma * (-s.ln()).powf(self.gamma - 1.0) / s;
        Ok(if a.abs() > b.abs() { Point::new(ds * a.signum(), 0.0, 0.0) } else { Point::new(0.0, ds * b.signum(), 0.0) })
    }

    fn cone_normal_flux(&self, apex: &Point, a: &Point, b: &Point, n: &Point) -> Option<Result<f64>> {
        Some(boundary_flux(self, &[*apex, *a, *b], n))
    }

    fn polygon_value_moments(&self, poly: &[Point]) -> Option<Result<(f64, f64)>> {
        let g = self.gamma;
        let c = self.boundary_constant();
        // ∫_0^{s1} s (-log s)^a ds = 2^{-a-1} Γ(a+1, -2 log s1).
        let radial = |a: f64, s1: f64| -> Result<f64> {
            Ok(2f64.powf(-a - 1.0) * upper_incomplete_gamma(a + 1.0, -2.0 * s1.ln())?)
        };
        let m1 = self.sector_integral(poly, &|s| (-s.ln()).powf(g) - c, &|q, s1| {
            Ok(q * (radial(g, s1)? - 0.5 * c * s1 * s1))
        });
        let m2 = self.sector_integral(
            poly,
            &|s| {
                let v = (-s.ln()).powf(g) - c;
                v * v
            },
            &|q, s1| Ok(q * (radial(2.0 * g, s1)? - 2.0 * c * radial(g, s1)? + 0.5 * c * c * s1 * s1)),
        );
        Some(m1.and_then(|m1| Ok((m1, m2?))))
    }

    fn polygon_gradient_moments(&self, poly: &[Point]) -> Option<Result<(Point, f64)>> {
        let g = self.gamma;
        let mean = (0..poly.len()).try_fold(Point::zeros(), |acc, i| {
            let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
            let t = q - p;
            let outward = Point::new(t.y, -t.x, 0.0) / t.norm();
            Ok(acc + outward * self.segment_integral(&p, &q)?)
        });
        let orient = if signed_area(poly) < 0.0 { -1.0 } else { 1.0 };
        // |∇ū|^2 = γ^2 (-log s)^{2γ-2} / s^2; near the centre
        // ∫_0^{s1} q s |∇ū|^2 ds = γ^2 q (-log s1)^{2γ-1} / (1 - 2γ).
        let energy = self.sector_integral(
            poly,
            &|s| g * g * (-s.ln()).powf(2.0 * g - 2.0) / (s * s),
            &|q, s1| Ok(g * g * q * (-s1.ln()).powf(2.0 * g - 1.0) / (1.0 - 2.0 * g)),
        );
        Some(mean.and_then(|m: Point| Ok((m * orient, energy?))))
    }
}

fn signed_area(poly: &[Point]) -> f64 {
    (0..poly.len())
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
        * 0.5
}

/// `∫_P ∇ū·n = ∫_{∂P} ū (n_∂·n) ds` for a triangle `P`.
fn boundary_flux(u: &SingularSolution, tri: &[Point; 3], n: &Point) -> Result<f64> {
    let ccw = signed_area(tri) > 0.0;
    let order = if ccw { [0, 1, 2] } else { [0, 2, 1] };
    let mut total = 0.0;
    for i in 0..3 {
        let (p, q) = (tri[order[i]], tri[order[(i + 1) % 3]]);
        let t = q - p;
        let w = Point::new(t.y, -t.x, 0.0).dot(n) / t.norm();
        if w.abs() < 1e-15 {
            continue;
        }
        total += w * u.segment_integral(&p, &q)?;
    }
    Ok(total)
}

/// Scheme data for the benchmark: `f = 0` and cone means of `F·n = -∇ū·n`.
pub fn rhs_cone_means(mesh: &AdmissibleMesh) -> Result<SteadyProblemData> {
    let g = mean_normal_gradient(&SingularSolution::default(), mesh)?;
    Ok(SteadyProblemData { f: vec![0.0; mesh.n_cells()], flux: g.0.iter().map(|v| -v).collect() })
}

/// One refinement level of the benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkLevel {
    pub cells: usize,
    pub report: ErrorReport,
    pub sandwich: SandwichCheck,
}

/// Header of the benchmark table: `e1 = ‖ū_T - u‖`, `e2 = ‖ū - u‖`,
/// `e3 = ‖𝒢_T ū - G_T u‖`, `e4 = δ_T(ū, u)`, `e5 = δ_T(ū, ū_T)`.
pub const BENCHMARK_HEADER: &str = "h,e1,e2,e3,e4,e5";

/// Solve the benchmark on every mesh and measure all errors.
pub fn run_benchmark(meshes: &[AdmissibleMesh]) -> Result<Vec<BenchmarkLevel>> {
    meshes.iter().map(run_level).collect()
}

pub fn run_level(mesh: &AdmissibleMesh) -> Result<BenchmarkLevel> {
    let exact = SingularSolution::default();
    let data = rhs_cone_means(mesh)?;
    let u = solve(mesh, &assemble_steady(mesh, &data)?)?;
    let report = error_report(&exact, mesh, &u, &data, &ReportOptions::default())?;
    let sandwich = sandwich_check(&report);
    Ok(BenchmarkLevel { cells: mesh.n_cells(), report, sandwich })
}
