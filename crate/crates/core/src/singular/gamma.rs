//! Gamma and upper incomplete gamma functions.

use crate::error::{Result, TpfaError};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Maximum number of series or continued-fraction terms.
pub const MAX_TERMS: usize = 200;
const EPS: f64 = 1e-16;

/// `Γ(a)` for `a > 0` (Lanczos approximation, reflection below 1/2).
pub fn gamma(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(TpfaError::Domain(format!("gamma needs a > 0, got {a}")));
    }
    Ok(lanczos(a))
}

fn lanczos(a: f64) -> f64 {
    use std::f64::consts::PI;
    if a < 0.5 {
        return PI / ((PI * a).sin() * lanczos(1.0 - a));
    }
    let z = a - 1.0;
    let mut s = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * s
}

/// Upper incomplete gamma `Γ(a, x) = ∫_x^∞ t^{a-1} e^{-t} dt` for `a > 0`,
/// `x >= 0`.
///
/// Below `x = a + 1` the lower function is summed as a power series and
/// subtracted from `Γ(a)`; above it the modified Lentz continued fraction is
/// used directly. `x = +∞` returns 0.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() || !(x >= 0.0) {
        return Err(TpfaError::Domain(format!("upper incomplete gamma needs a > 0, x >= 0, got ({a}, {x})")));
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    if x == 0.0 {
        return Ok(lanczos(a));
    }
    if x < a + 1.0 {
        Ok(lanczos(a) - lower_series(a, x)?)
    } else {
        continued_fraction(a, x)
    }
}

fn prefactor(a: f64, x: f64) -> f64 {
    (a * x.ln() - x).exp()
}

fn lower_series(a: f64, x: f64) -> Result<f64> {
    let mut term = 1.0 / a;
    let mut sum = term;
    for n in 1..=MAX_TERMS {
        term *= x / (a + n as f64);
        sum += term;
        if term.abs() < sum.abs() * EPS {
            return Ok(sum * prefactor(a, x));
        }
    }
    Err(TpfaError::SeriesNonConvergence { what: "incomplete gamma series", terms: MAX_TERMS })
}

fn continued_fraction(a: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_TERMS {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            return Ok(prefactor(a, x) * h);
        }
    }
    Err(TpfaError::SeriesNonConvergence { what: "incomplete gamma continued fraction", terms: MAX_TERMS })
}
