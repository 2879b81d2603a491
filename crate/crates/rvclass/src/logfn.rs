//! Log-domain function model.
//!
//! Every function `U` handled by this crate is carried as its log-log
//! transform `l(y) = log U(e^y)`. All asymptotic criteria become affine
//! expressions in `(y, s)` with `x = e^y` and `t = e^s`, which keeps
//! arguments as large as `x = e^{1e9}` representable.

use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Global cap on the log-argument `y`. Probes never exceed it.
pub const Y_CAP: f64 = 1e9;

type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A positive function `U` represented by `l(y) = log U(e^y)`.
///
/// Immutable after construction; evaluation is safe to call from
/// multiple threads.
#[derive(Clone)]
pub struct LogFunction {
    eval: EvalFn,
    y_min: f64,
    y_max: f64,
    label: String,
}

impl LogFunction {
    pub fn new<F>(label: impl Into<String>, y_min: f64, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        LogFunction {
            eval: Arc::new(eval),
            y_min,
            y_max: f64::INFINITY,
            label: label.into(),
        }
    }

    /// Same as [`LogFunction::new`] but with a finite usable domain end,
    /// e.g. for tabulated or empirical functions.
    pub fn with_domain_end<F>(label: impl Into<String>, y_min: f64, y_max: f64, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        LogFunction {
            eval: Arc::new(eval),
            y_min,
            y_max,
            label: label.into(),
        }
    }

    /// Evaluates `l(y)`, rejecting points outside the domain and
    /// non-finite results.
    pub fn eval(&self, y: f64) -> Result<f64> {
        if y < self.y_min {
            return Err(Error::BelowDomain {
                label: self.label.clone(),
                y,
                y_min: self.y_min,
            });
        }
        if y > self.y_max {
            return Err(Error::BeyondDomain {
                label: self.label.clone(),
                y,
                y_max: self.y_max,
            });
        }
        let v = (self.eval)(y);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteEval {
                label: self.label.clone(),
                y,
            })
        }
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `c * U` in the original domain, i.e. `l + log c`.
    pub fn scaled(&self, c: f64) -> Result<LogFunction> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument {
                reason: format!("scale factor must be positive and finite, got {c}"),
            });
        }
        let inner = self.eval.clone();
        let shift = c.ln();
        Ok(LogFunction {
            eval: Arc::new(move |y| inner(y) + shift),
            y_min: self.y_min,
            y_max: self.y_max,
            label: format!("{} * {c}", self.label),
        })
    }
}

impl std::fmt::Debug for LogFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LogFunction")
            .field("label", &self.label)
            .field("y_min", &self.y_min)
            .field("y_max", &self.y_max)
            .finish()
    }
}

/// How window start points advance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum GridMode {
    /// Window starts advance additively: `y_start + w * step`.
    LinearY,
    /// Window starts advance multiplicatively: `y_start * growth^w`,
    /// for doubly-exponential features.
    GeometricY,
}

/// Probe grid: consecutive windows, each sampled at equally spaced
/// points (the right window endpoint belongs to the next window).
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct GridSpec {
    pub y_start: f64,
    /// Additive step (LinearY) or multiplicative factor > 1 (GeometricY).
    pub y_growth: f64,
    pub mode: GridMode,
    pub points_per_window: usize,
    pub window_count: usize,
}

impl GridSpec {
    pub fn linear(y_start: f64, step: f64, windows: usize, points: usize) -> Result<Self> {
        let g = GridSpec {
            y_start,
            y_growth: step,
            mode: GridMode::LinearY,
            points_per_window: points,
            window_count: windows,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn geometric(y_start: f64, growth: f64, windows: usize, points: usize) -> Result<Self> {
        let g = GridSpec {
            y_start,
            y_growth: growth,
            mode: GridMode::GeometricY,
            points_per_window: points,
            window_count: windows,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |reason: String| Err(Error::InvalidGrid { reason });
        if self.window_count < 2 {
            return fail(format!("need at least 2 windows, got {}", self.window_count));
        }
        if self.points_per_window < 4 {
            return fail(format!(
                "need at least 4 points per window, got {}",
                self.points_per_window
            ));
        }
        if !self.y_start.is_finite() {
            return fail(format!("y_start must be finite, got {}", self.y_start));
        }
        match self.mode {
            GridMode::LinearY => {
                if !(self.y_growth > 0.0 && self.y_growth.is_finite()) {
                    return fail(format!("linear step must be positive, got {}", self.y_growth));
                }
            }
            GridMode::GeometricY => {
                if !(self.y_growth > 1.0 && self.y_growth.is_finite()) {
                    return fail(format!(
                        "geometric growth must exceed 1, got {}",
                        self.y_growth
                    ));
                }
                if self.y_start <= 0.0 {
                    return fail(format!(
                        "geometric grids need y_start > 0, got {}",
                        self.y_start
                    ));
                }
            }
        }
        if self.window_bounds().len() < 2 {
            return fail("fewer than 2 windows survive the Y_CAP truncation".to_string());
        }
        Ok(())
    }

    fn window_start(&self, w: usize) -> f64 {
        match self.mode {
            GridMode::LinearY => self.y_start + self.y_growth * w as f64,
            GridMode::GeometricY => self.y_start * self.y_growth.powi(w as i32),
        }
    }

    /// Window `[start, end)` pairs, truncated at [`Y_CAP`].
    pub fn window_bounds(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.window_count);
        for w in 0..self.window_count {
            let a = self.window_start(w);
            let b = self.window_start(w + 1);
            if a >= Y_CAP {
                break;
            }
            out.push((a, b.min(Y_CAP)));
        }
        out
    }

    /// Sample points of one window, half-open at the right.
    pub fn window_points(&self, bounds: (f64, f64)) -> impl Iterator<Item = f64> {
        let (a, b) = bounds;
        let p = self.points_per_window;
        let h = (b - a) / p as f64;
        (0..p).map(move |k| a + h * k as f64)
    }

    /// All grid points in increasing order.
    pub fn points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for w in self.window_bounds() {
            out.extend(self.window_points(w));
        }
        out
    }
}

/// Maps a function with bounded support `(0, x_star)` to one with
/// support extending to infinity via `z = 1/(x_star - x)`, so the
/// asymptotic classifiers apply. `u` evaluates `U(x)` directly.
pub fn finite_support_adapter<F>(label: impl Into<String>, x_star: f64, u: F) -> Result<LogFunction>
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    if !(x_star > 0.0 && x_star.is_finite()) {
        return Err(Error::InvalidArgument {
            reason: format!("endpoint x_star must be positive and finite, got {x_star}"),
        });
    }
    let label = label.into();
    // z = e^w must satisfy x = x_star - 1/z in (0, x_star), i.e. z > 1/x_star.
    let w_min = (1.0 / x_star).ln() + 1e-9;
    let inner_label = label.clone();
    Ok(LogFunction::new(
        format!("adapted({inner_label})"),
        w_min,
        move |w| {
            let z = w.exp();
            let x = x_star - 1.0 / z;
            u(x).ln()
        },
    ))
}

/// Minimum sample count accepted by [`empirical_tail`].
pub const MIN_SAMPLES: usize = 100;

/// Empirical log-survival function `l(y) = log F_n(e^y)` with the
/// strict-exceedance convention `F_n(x) = #{samples > x} / n`.
///
/// The usable domain ends just below the log of the largest sample;
/// beyond it the survival probability is zero.
pub fn empirical_tail(samples: &[f64]) -> Result<LogFunction> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: samples.len(),
            need: MIN_SAMPLES,
        });
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument {
            reason: "samples must be finite".to_string(),
        });
    }
    let mut sorted: Vec<f64> = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let max = sorted[n - 1];
    if sorted[0] == max {
        return Err(Error::DegenerateSamples);
    }
    let y_max = max.ln() - f64::EPSILON.sqrt();
    let sorted = Arc::new(sorted);
    let data = sorted.clone();
    Ok(LogFunction::with_domain_end(
        format!("empirical-tail(n={n})"),
        -700.0,
        y_max,
        move |y| {
            let x = y.exp();
            let exceed = data.len() - data.partition_point(|&v| v <= x);
            (exceed as f64 / data.len() as f64).ln()
        },
    ))
}

/// Loads a tabulated function from a two-column whitespace-separated
/// text file (`x U(x)` per line, strictly increasing `x > 0`, `U > 0`)
/// and interpolates piecewise-linearly in `(y, l)` coordinates.
pub fn load_table_file(path: &Path) -> Result<LogFunction> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: 0,
        reason: e.to_string(),
    })?;
    let mut ys: Vec<f64> = Vec::new();
    let mut ls: Vec<f64> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |tok: Option<&str>, what: &str| -> Result<f64> {
            tok.ok_or_else(|| Error::Parse {
                path: path.display().to_string(),
                line: idx + 1,
                reason: format!("missing {what} column"),
            })?
            .parse::<f64>()
            .map_err(|e| Error::Parse {
                path: path.display().to_string(),
                line: idx + 1,
                reason: format!("bad {what}: {e}"),
            })
        };
        let x = parse(it.next(), "x")?;
        let u = parse(it.next(), "U(x)")?;
        if !(x > 0.0 && u > 0.0 && x.is_finite() && u.is_finite()) {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: idx + 1,
                reason: format!("require x > 0 and U > 0, got x = {x}, U = {u}"),
            });
        }
        let y = x.ln();
        if let Some(&prev) = ys.last() {
            if y <= prev {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line: idx + 1,
                    reason: "x values must be strictly increasing".to_string(),
                });
            }
        }
        ys.push(y);
        ls.push(u.ln());
    }
    if ys.len() < 2 {
        return Err(Error::Parse {
            path: path.display().to_string(),
            line: 0,
            reason: "need at least 2 data rows".to_string(),
        });
    }
    let y_min = ys[0];
    let y_max = *ys.last().unwrap();
    let ys = Arc::new(ys);
    let ls = Arc::new(ls);
    Ok(LogFunction::with_domain_end(
        format!("table({})", path.display()),
        y_min,
        y_max,
        move |y| {
            let i = match ys.binary_search_by(|v| v.partial_cmp(&y).unwrap()) {
                Ok(i) => return ls[i],
                Err(i) => i,
            };
            // domain checks guarantee 1 <= i < ys.len()
            let (y0, y1) = (ys[i - 1], ys[i]);
            let (l0, l1) = (ls[i - 1], ls[i]);
            l0 + (l1 - l0) * (y - y0) / (y1 - y0)
        },
    ))
}

/// Loads a sample file with one number per line.
pub fn load_samples_file(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: 0,
        reason: e.to_string(),
    })?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: idx + 1,
            reason: format!("bad number: {e}"),
        })?;
        out.push(v);
    }
    Ok(out)
}
