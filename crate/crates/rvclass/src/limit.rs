//! Numerical liminf/limsup machinery: windowed extrema trails and
//! evidence-backed verdicts on the fate of `h(y)` as `y -> infinity`.
//!
//! A verdict is a numerical decision, not a proof; `Inconclusive` is a
//! first-class outcome and nothing is ever coerced into a class verdict.

use serde::Serialize;

use crate::error::Result;
use crate::logfn::GridSpec;

/// Decision tolerances. The defaults reproduce every catalog ground
/// truth; override them through the CLI or `ReportConfig`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    /// Spread below which the last decision windows count as converged.
    pub tol_converge: f64,
    /// Window-to-window extremum change below which a side is stable.
    pub tol_stable: f64,
    /// Number of trailing windows used for the decision.
    pub decision_windows: usize,
    /// Absolute |h| beyond which the fast divergence rule may fire.
    pub diverge_threshold: f64,
    /// Minimum log-log growth slope of a window-extremum trail for the
    /// trend-based divergence rule. Catches slow divergence (e.g. a
    /// y^0.2 envelope) that never reaches `diverge_threshold`.
    pub trend_slope_min: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_converge: 1e-2,
            tol_stable: 1e-2,
            decision_windows: 8,
            diverge_threshold: 1e6,
            trend_slope_min: 0.05,
        }
    }
}

/// Extrema of one probe window.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WindowStat {
    pub y_start: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum VerdictKind {
    Converges { value: f64 },
    DivergesPlus,
    DivergesMinus,
    Oscillates { liminf_est: f64, limsup_est: f64 },
    Inconclusive,
}

/// Outcome of a numerical limit probe with its evidence trail.
#[derive(Debug, Clone, Serialize)]
pub struct LimitVerdict {
    pub kind: VerdictKind,
    pub evidence: Vec<WindowStat>,
    /// limsup_est - liminf_est over the decision windows.
    pub spread: f64,
}

/// Per-window extrema of `h` over the grid.
pub fn window_trail<H>(h: H, grid: &GridSpec) -> Result<Vec<WindowStat>>
where
    H: Fn(f64) -> Result<f64>,
{
    grid.validate()?;
    let mut trail = Vec::new();
    for bounds in grid.window_bounds() {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for y in grid.window_points(bounds) {
            let v = h(y)?;
            min = min.min(v);
            max = max.max(v);
        }
        trail.push(WindowStat {
            y_start: bounds.0,
            min,
            max,
        });
    }
    Ok(trail)
}

/// Estimates of liminf/limsup: the extrema of the final window, with
/// the full per-window trail exposing the trend.
pub fn tail_extrema<H>(h: H, grid: &GridSpec) -> Result<(f64, f64, Vec<WindowStat>)>
where
    H: Fn(f64) -> Result<f64>,
{
    let trail = window_trail(h, grid)?;
    let last = trail.last().expect("grid guarantees at least 2 windows");
    Ok((last.min, last.max, trail))
}

/// Runs the decision rules over the extrema trail of `h`.
pub fn limit_verdict<H>(h: H, grid: &GridSpec, tols: &Tolerances) -> Result<LimitVerdict>
where
    H: Fn(f64) -> Result<f64>,
{
    let trail = window_trail(h, grid)?;
    Ok(decide(&trail, tols))
}

/// Pure decision layer over a precomputed trail.
pub fn decide(trail: &[WindowStat], tols: &Tolerances) -> LimitVerdict {
    let w = tols.decision_windows.min(trail.len());
    let tail = &trail[trail.len() - w..];
    let liminf_est = tail.iter().map(|s| s.min).fold(f64::INFINITY, f64::min);
    let limsup_est = tail.iter().map(|s| s.max).fold(f64::NEG_INFINITY, f64::max);
    let spread = limsup_est - liminf_est;

    let minima: Vec<f64> = tail.iter().map(|s| s.min).collect();
    let maxima: Vec<f64> = tail.iter().map(|s| s.max).collect();
    let starts: Vec<f64> = tail.iter().map(|s| s.y_start).collect();

    let kind = if spread < tols.tol_converge {
        VerdictKind::Converges {
            value: 0.5 * (liminf_est + limsup_est),
        }
    } else if diverges_plus(&minima, &starts, tols) {
        VerdictKind::DivergesPlus
    } else if diverges_minus(&maxima, &starts, tols) {
        VerdictKind::DivergesMinus
    } else if stable(&minima, tols) && stable(&maxima, tols) {
        VerdictKind::Oscillates {
            liminf_est,
            limsup_est,
        }
    } else if grows_positive(&maxima, &starts, tols) && grows_negative(&minima, &starts, tols) {
        // window extrema run away in both directions
        VerdictKind::Oscillates {
            liminf_est,
            limsup_est,
        }
    } else {
        VerdictKind::Inconclusive
    };

    LimitVerdict {
        kind,
        evidence: trail.to_vec(),
        spread,
    }
}

fn diverges_plus(minima: &[f64], starts: &[f64], tols: &Tolerances) -> bool {
    let past_threshold = minima.iter().all(|&v| v > tols.diverge_threshold)
        && minima.windows(2).all(|p| p[1] >= p[0]);
    past_threshold || grows_positive(minima, starts, tols)
}

fn diverges_minus(maxima: &[f64], starts: &[f64], tols: &Tolerances) -> bool {
    let past_threshold = maxima.iter().all(|&v| v < -tols.diverge_threshold)
        && maxima.windows(2).all(|p| p[1] <= p[0]);
    past_threshold || grows_negative(maxima, starts, tols)
}

fn stable(vals: &[f64], tols: &Tolerances) -> bool {
    vals.windows(2).all(|p| (p[1] - p[0]).abs() < tols.tol_stable)
}

/// Trend rule: strictly increasing positive extrema whose log-log
/// slope against the window scale stays above `trend_slope_min`.
pub(crate) fn grows_positive(vals: &[f64], starts: &[f64], tols: &Tolerances) -> bool {
    if vals.len() < 3 {
        return false;
    }
    if !vals.windows(2).all(|p| p[1] > p[0]) {
        return false;
    }
    if !vals.iter().all(|&v| v > 0.0) {
        return false;
    }
    let xs: Vec<f64> = starts.iter().map(|&y| y.max(f64::MIN_POSITIVE).ln()).collect();
    let ys: Vec<f64> = vals.iter().map(|&v| v.ln()).collect();
    ls_slope(&xs, &ys) >= tols.trend_slope_min
}

pub(crate) fn grows_negative(vals: &[f64], starts: &[f64], tols: &Tolerances) -> bool {
    let negated: Vec<f64> = vals.iter().map(|&v| -v).collect();
    grows_positive(&negated, starts, tols)
}

/// Least-squares slope of `ys` against `xs` (with intercept).
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Slope-only least squares, `ys ~ slope * xs` through the origin.
pub fn ls_slope_through_origin(xs: &[f64], ys: &[f64]) -> f64 {
    let sxy: f64 = xs.iter().zip(ys).map(|(&x, &y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|&x| x * x).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}
