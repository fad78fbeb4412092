//! Quadrature rules and small 2D geometry helpers shared by the error
//! functionals.

use nalgebra::{SVector, Vector2};

use crate::error::{Result, TpfaError};
use crate::Point;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre needs at least one node");
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x)? + f(c + x)?;
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Ok((k * h, ((k - g) * h).abs()))
}

/// Globally adaptive Gauss-Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// Stops when the summed error estimate is below `max(abs_tol, rel_tol*|I|)`.
pub fn integrate_adaptive<F>(mut f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    const MAX_INTERVALS: usize = 2000;
    let (v, e) = kronrod15(&mut f, a, b)?;
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(TpfaError::QuadratureFailure(format!(
                "1D adaptive rule on [{a}, {b}]: error {err:e} after {MAX_INTERVALS} intervals"
            )));
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (lo, hi, _, _) = parts.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = kronrod15(&mut f, lo, mid)?;
        let (v2, e2) = kronrod15(&mut f, mid, hi)?;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Degree-5, 7-point symmetric rule on a triangle: barycentric points and weights
/// (weights sum to one).
pub fn dunavant7() -> [([f64; 3], f64); 7] {
    let s15 = 15f64.sqrt();
    let a1 = (9.0 - 2.0 * s15) / 21.0;
    let b1 = (6.0 + s15) / 21.0;
    let a2 = (9.0 + 2.0 * s15) / 21.0;
    let b2 = (6.0 - s15) / 21.0;
    let w1 = (155.0 + s15) / 1200.0;
    let w2 = (155.0 - s15) / 1200.0;
    let t = 1.0 / 3.0;
    [
        ([t, t, t], 0.225),
        ([a1, b1, b1], w1),
        ([b1, a1, b1], w1),
        ([b1, b1, a1], w1),
        ([a2, b2, b2], w2),
        ([b2, a2, b2], w2),
        ([b2, b2, a2], w2),
    ]
}

/// Area of the triangle `abc` (first two coordinates).
pub fn triangle_area(a: &Point, b: &Point, c: &Point) -> f64 {
    0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)).abs()
}

fn triangle_rule<const N: usize, F>(f: &F, a: &Point, b: &Point, c: &Point) -> Result<SVector<f64, N>>
where
    F: Fn(&Point) -> Result<SVector<f64, N>>,
{
    let area = triangle_area(a, b, c);
    let mut acc = SVector::<f64, N>::zeros();
    for (l, w) in dunavant7() {
        let x = a * l[0] + b * l[1] + c * l[2];
        acc += f(&x)? * w;
    }
    Ok(acc * area)
}

/// Adaptive integration over a triangle by uniform 4-way splitting, driven by
/// the difference between the parent rule and the sum over its children.
pub fn integrate_triangle<const N: usize, F>(
    f: &F,
    a: &Point,
    b: &Point,
    c: &Point,
    abs_tol: f64,
) -> Result<SVector<f64, N>>
where
    F: Fn(&Point) -> Result<SVector<f64, N>>,
{
    let coarse = triangle_rule(f, a, b, c)?;
    refine_triangle(f, a, b, c, coarse, abs_tol, 0)
}

const MAX_TRIANGLE_DEPTH: usize = 9;

fn refine_triangle<const N: usize, F>(
    f: &F,
    a: &Point,
    b: &Point,
    c: &Point,
    coarse: SVector<f64, N>,
    tol: f64,
    depth: usize,
) -> Result<SVector<f64, N>>
where
    F: Fn(&Point) -> Result<SVector<f64, N>>,
{
    let ab = (a + b) * 0.5;
    let bc = (b + c) * 0.5;
    let ca = (c + a) * 0.5;
    let kids = [(*a, ab, ca), (ab, *b, bc), (ca, bc, *c), (bc, ca, ab)];
    let mut vals = [SVector::<f64, N>::zeros(); 4];
    let mut fine = SVector::<f64, N>::zeros();
    for (i, (p, q, r)) in kids.iter().enumerate() {
        vals[i] = triangle_rule(f, p, q, r)?;
        fine += vals[i];
    }
    if (fine - coarse).norm() <= tol {
        return Ok(fine);
    }
    if depth >= MAX_TRIANGLE_DEPTH {
        return Err(TpfaError::QuadratureFailure(format!(
            "triangle rule did not settle below {tol:e} at depth {depth}"
        )));
    }
    let mut acc = SVector::<f64, N>::zeros();
    for (i, (p, q, r)) in kids.iter().enumerate() {
        acc += refine_triangle(f, p, q, r, vals[i], tol / 4.0, depth + 1)?;
    }
    Ok(acc)
}

/// Clip a convex polygon to the half-plane `n . x + c >= 0`.
pub fn clip_half_plane(poly: &[Vector2<f64>], n: Vector2<f64>, c: f64) -> Vec<Vector2<f64>> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    if poly.is_empty() {
        return out;
    }
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let sp = n.dot(&p) + c;
        let sq = n.dot(&q) + c;
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            let t = sp / (sp - sq);
            out.push(p + (q - p) * t);
        }
    }
    out
}

/// Signed area of a simple polygon (positive when counter-clockwise).
pub fn polygon_signed_area(poly: &[Vector2<f64>]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        s += p.x * q.y - q.x * p.y;
    }
    0.5 * s
}
