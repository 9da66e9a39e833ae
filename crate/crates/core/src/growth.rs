//! Heuristic growth classification.
//!
//! Independent sequences grow like `n^(log2 3)`; other Stanley sequences are
//! observed to grow like `n^2 / log n`. Nothing here is a proof: the
//! classification is a least-squares comparison over a finite window.

use serde::{Deserialize, Serialize};

use crate::analyzer::certify;
use crate::error::{Error, Result};
use crate::seq::GeneratedSequence;

/// Fewest terms [`classify_growth`] accepts.
pub const MIN_GROWTH_TERMS: usize = 512;

const TYPE1_TOLERANCE: f64 = 0.1;
const TYPE2_TOLERANCE: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthClass {
    Type1,
    Type2,
    Unknown,
}

/// Half-open index range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub classification: GrowthClass,
    /// Slope of the least-squares line through `(ln n, ln a_n)`.
    pub fitted_exponent: f64,
    /// RMS residual of that line, in natural-log units.
    pub fit_residual: f64,
    pub window: Window,
    /// RMS residual of the best fit `ln a_n = ln C + log2(3) ln n`.
    pub type1_residual: f64,
    /// RMS residual of the best fit `ln a_n = ln C + ln(n^2 / ln n)`.
    pub type2_residual: f64,
    /// Slope of `ln(n^2 / ln n)` against `ln n` over the same points.
    pub type2_exponent: f64,
    /// Whether an independence certificate was found in the window.
    pub certified: bool,
}

/// Points per fit. Indices are spread evenly in `ln i` so every octave carries
/// the same weight; within one octave an independent sequence repeats an earlier
/// stretch and its local slope says little about the exponent.
const FIT_POINTS: usize = 256;

fn log_spaced(window: Window) -> impl Iterator<Item = usize> {
    let lo = (window.start as f64).ln();
    let hi = ((window.end - 1) as f64).ln();
    let mut last = None;
    (0..FIT_POINTS).filter_map(move |j| {
        let i = (lo + (hi - lo) * j as f64 / (FIT_POINTS - 1) as f64).exp().round() as usize;
        let i = i.clamp(window.start, window.end - 1);
        (last != Some(i)).then(|| {
            last = Some(i);
            i
        })
    })
}

/// RMS residual of `y - f(x) - c` with the constant `c` chosen optimally.
fn one_parameter_residual(points: &[(f64, f64)], f: impl Fn(f64) -> f64) -> f64 {
    let diffs: Vec<f64> = points.iter().map(|&(x, y)| y - f(x)).collect();
    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
    rms(diffs.iter().map(|d| d - mean))
}

fn rms(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v * v, c + 1));
    (sum / count as f64).sqrt()
}

/// Slope and RMS residual of the least-squares line through `points`.
fn line_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let residual = rms(points.iter().map(|&(x, y)| y - my - slope * (x - mx)));
    (slope, residual)
}

/// Classifies the growth of `seq` over indices `sqrt(n) <= i < n`.
///
/// `type1` when an independence certificate is found or the fitted exponent is
/// within 0.1 of `log2 3`; `type2` when the exponent is within 0.2 of the slope
/// of `n^2 / ln n` over the window (which tends to 2) and that model fits better
/// than `n^(log2 3)`; `unknown` otherwise.
pub fn classify_growth(seq: &GeneratedSequence) -> Result<GrowthReport> {
    let n = seq.len();
    if n < MIN_GROWTH_TERMS {
        return Err(Error::NeedsMoreTerms {
            required: MIN_GROWTH_TERMS,
            available: n,
        });
    }
    // The top half of the window on a log scale: sqrt(n) <= i < n.
    let window = Window {
        start: (n as f64).sqrt().ceil() as usize,
        end: n,
    };
    let points: Vec<(f64, f64)> = log_spaced(window)
        .map(|i| ((i as f64).ln(), (seq.terms()[i] as f64).ln()))
        .collect();
    let (fitted_exponent, fit_residual) = line_fit(&points);
    let log2_3 = 3f64.log2();
    let type1_residual = one_parameter_residual(&points, |x| log2_3 * x);
    let type2_residual = one_parameter_residual(&points, |x| 2.0 * x - x.ln());

    // n^2 / ln n has local exponent 2 - 1/ln n, about 1.85 at a few thousand
    // terms, so the type2 tolerance is centred on the model's own slope.
    let model: Vec<(f64, f64)> = points.iter().map(|&(x, _)| (x, 2.0 * x - x.ln())).collect();
    let type2_exponent = line_fit(&model).0;

    let certified = certify(seq)?.is_some();
    let classification = if certified || (fitted_exponent - log2_3).abs() <= TYPE1_TOLERANCE {
        GrowthClass::Type1
    } else if (fitted_exponent - type2_exponent).abs() <= TYPE2_TOLERANCE
        && type2_residual < type1_residual
    {
        GrowthClass::Type2
    } else {
        GrowthClass::Unknown
    };
    Ok(GrowthReport {
        classification,
        fitted_exponent,
        fit_residual,
        window,
        type1_residual,
        type2_residual,
        type2_exponent,
        certified,
    })
}
