//! Class-membership criteria and index estimators built on the limit
//! engine: power orders, ratio extrema, threshold bisection, uniform
//! envelopes, and the orchestrated full report.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::catalog::ClassName;
use crate::error::{Error, Result};
use crate::limit::{
    decide, grows_negative, grows_positive, limit_verdict, ls_slope_through_origin, window_trail,
    LimitVerdict, Tolerances, VerdictKind, WindowStat,
};
use crate::logfn::{GridSpec, LogFunction};

/// Three-valued membership verdict. `Inconclusive` means no decision
/// rule fired; it is never coerced either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict3 {
    In,
    Out,
    Inconclusive,
}

impl Verdict3 {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict3::In => "in",
            Verdict3::Out => "out",
            Verdict3::Inconclusive => "inconclusive",
        }
    }
}

/// Grids, probe sets, and tolerances for a full classification run.
#[derive(Debug, Clone, Serialize)]
pub struct ReportConfig {
    /// Grid for the order limit `l(y)/y`.
    pub orders_grid: GridSpec,
    /// Grid in `y` for ratio increments `l(y+s) - l(y)`.
    pub ratio_grid: GridSpec,
    /// Grid in `s = log t` for scaled-ratio limits as `t -> infinity`.
    pub scaled_grid: GridSpec,
    /// Scale factors `t` probed by the ratio criteria.
    pub t_grid: Vec<f64>,
    /// `y` probe points for the threshold bisection.
    pub probe_ys: Vec<f64>,
    pub tols: Tolerances,
}

impl Default for ReportConfig {
    fn default() -> Self {
        let e = std::f64::consts::E;
        ReportConfig {
            orders_grid: GridSpec::linear(2.0, 25_000.0, 40, 16).unwrap(),
            ratio_grid: GridSpec::linear(2.0, 25_000.0, 40, 16).unwrap(),
            scaled_grid: GridSpec::geometric(1.0, 1.5, 36, 64).unwrap(),
            t_grid: vec![2.0, 4.0, 8.0, e.powi(3), e.powi(4)],
            probe_ys: vec![2.0, 3.0, 4.0],
            tols: Tolerances::default(),
        }
    }
}

/// Calibrated per-entry grids; unknown names get the smooth default.
/// Band entries need geometric windows aligned to their scales and the
/// slowly diverging entries need long geometric reaches.
pub fn recommended_config(name: &str, params: &BTreeMap<String, f64>) -> ReportConfig {
    let e = std::f64::consts::E;
    let mut cfg = ReportConfig::default();
    match name {
        "x_sin" => {
            cfg.orders_grid = GridSpec::linear(5.0, 1.0, 20, 256).unwrap();
            cfg.ratio_grid = GridSpec::linear(5.0, 5.0, 20, 512).unwrap();
        }
        "loglog_cosine" => {
            cfg.orders_grid = GridSpec::geometric(10.0, 1.5, 46, 64).unwrap();
            cfg.ratio_grid = GridSpec::geometric(100.0, 10.0, 7, 32_768).unwrap();
            cfg.scaled_grid = GridSpec::geometric(1.0, 1.5, 52, 64).unwrap();
        }
        "orv_not_m" => {
            // one window per coefficient band; 20 e^17 < Y_CAP keeps
            // every window complete (a truncated window breaks the
            // alternation pattern)
            cfg.orders_grid = GridSpec::geometric(20.0, e, 17, 64).unwrap();
            cfg.ratio_grid = GridSpec::geometric(20.0, e, 17, 64).unwrap();
        }
        "heavy_tail_step" => {
            let a = *params.get("alpha").unwrap_or(&1.0);
            let xa = *params.get("x_a").unwrap_or(&2.0);
            let y1 = xa.ln() * (1.0 + a);
            let windows = ((1e9 / y1).ln() / (1.0 + a).ln()).floor() as usize;
            let windows = windows.clamp(4, 40);
            cfg.orders_grid = GridSpec::geometric(y1, 1.0 + a, windows, 64).unwrap();
            // the ratio probe must sample within log t of each band
            // crossing to see the survival-function jumps, so the ratio
            // grid stops early enough for dense per-window sampling
            let ratio_windows = 12.min(windows);
            cfg.ratio_grid = GridSpec::geometric(y1, 1.0 + a, ratio_windows, 16_384).unwrap();
        }
        "exp_decay" | "exp_growth" => {
            let g = GridSpec::linear(1.0, 20.0, 30, 16).unwrap();
            cfg.orders_grid = g;
            cfg.ratio_grid = g;
            cfg.scaled_grid = g;
        }
        _ => {}
    }
    cfg
}

// ---------------------------------------------------------------------------
// Orders
// ---------------------------------------------------------------------------

/// Lower/upper order estimates: liminf and limsup of
/// `log U(x) / log x`, pooled over the decision windows.
#[derive(Debug, Clone, Serialize)]
pub struct OrdersResult {
    pub mu_hat: f64,
    pub nu_hat: f64,
    pub verdict: LimitVerdict,
}

pub fn orders(u: &LogFunction, grid: &GridSpec, tols: &Tolerances) -> Result<OrdersResult> {
    let verdict = limit_verdict(|y| Ok(u.eval(y)? / y), grid, tols)?;
    let (mu_hat, nu_hat) = pooled_extrema(&verdict.evidence, tols);
    Ok(OrdersResult {
        mu_hat,
        nu_hat,
        verdict,
    })
}

fn pooled_extrema(trail: &[WindowStat], tols: &Tolerances) -> (f64, f64) {
    let w = tols.decision_windows.min(trail.len());
    let tail = &trail[trail.len() - w..];
    let lo = tail.iter().map(|s| s.min).fold(f64::INFINITY, f64::min);
    let hi = tail.iter().map(|s| s.max).fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Membership in the finite-power-order class, decided through the
/// order limit: `In(rho)` iff the orders converge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MVerdict {
    In { rho: f64 },
    Out,
    Inconclusive,
}

pub fn classify_m(orders: &OrdersResult, tols: &Tolerances) -> MVerdict {
    match orders.verdict.kind {
        VerdictKind::Converges { value } => MVerdict::In { rho: value },
        VerdictKind::Oscillates { .. } if orders.verdict.spread > tols.tol_converge => {
            MVerdict::Out
        }
        // diverging orders route to the extreme classes
        _ => MVerdict::Inconclusive,
    }
}

/// Membership in the extreme classes: dominated by (resp. dominating)
/// every power iff the orders diverge to -inf (resp. +inf).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExtremeVerdict {
    MInf,
    MMinusInf,
    Neither,
    Inconclusive,
}

pub fn classify_m_extremes(orders: &OrdersResult) -> ExtremeVerdict {
    match orders.verdict.kind {
        VerdictKind::DivergesMinus => ExtremeVerdict::MInf,
        VerdictKind::DivergesPlus => ExtremeVerdict::MMinusInf,
        VerdictKind::Converges { .. } | VerdictKind::Oscillates { .. } => ExtremeVerdict::Neither,
        VerdictKind::Inconclusive => ExtremeVerdict::Inconclusive,
    }
}

// ---------------------------------------------------------------------------
// Ratio extrema
// ---------------------------------------------------------------------------

/// Fate of one side (liminf or limsup) of a windowed trail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SideEstimate {
    /// Settled finite estimate: the record over the decision windows,
    /// which no earlier window improves on by more than the stability
    /// tolerance.
    Finite(f64),
    DivergesPlus,
    DivergesMinus,
    /// Still moving: neither settled nor on a recognized growth trend.
    Unsettled(f64),
}

impl SideEstimate {
    pub fn is_finite(&self) -> bool {
        matches!(self, SideEstimate::Finite(_))
    }

    pub fn diverges(&self) -> bool {
        matches!(self, SideEstimate::DivergesPlus | SideEstimate::DivergesMinus)
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            SideEstimate::Finite(v) | SideEstimate::Unsettled(v) => Some(*v),
            _ => None,
        }
    }
}

/// Logs of the ratio extrema `U_*(t)` and `U^*(t)` for one `t`:
/// the windowed liminf/limsup of `g(y) = l(y + log t) - l(y)`.
#[derive(Debug, Clone, Serialize)]
pub struct RatioExtrema {
    pub t: f64,
    pub lower: SideEstimate,
    pub upper: SideEstimate,
    pub trail: Vec<WindowStat>,
}

pub fn ratio_extrema(
    u: &LogFunction,
    t: f64,
    x_grid: &GridSpec,
    tols: &Tolerances,
) -> Result<RatioExtrema> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument {
            reason: format!("scale factor t must be positive and finite, got {t}"),
        });
    }
    let s = t.ln();
    let trail = window_trail(|y| Ok(u.eval(y + s)? - u.eval(y)?), x_grid)?;
    let lower = side_estimate(&trail, false, tols);
    let upper = side_estimate(&trail, true, tols);
    Ok(RatioExtrema {
        t,
        lower,
        upper,
        trail,
    })
}

fn side_estimate(trail: &[WindowStat], upper: bool, tols: &Tolerances) -> SideEstimate {
    let vals: Vec<f64> = trail
        .iter()
        .map(|w| if upper { w.max } else { w.min })
        .collect();
    let starts: Vec<f64> = trail.iter().map(|w| w.y_start).collect();
    let w = tols.decision_windows.min(vals.len());
    let tail = &vals[vals.len() - w..];
    let tail_starts = &starts[starts.len() - w..];

    if grows_positive(tail, tail_starts, tols) {
        return SideEstimate::DivergesPlus;
    }
    if grows_negative(tail, tail_starts, tols) {
        return SideEstimate::DivergesMinus;
    }
    if tail.iter().all(|&v| v > tols.diverge_threshold)
        && tail.windows(2).all(|p| p[1] >= p[0])
    {
        return SideEstimate::DivergesPlus;
    }
    if tail.iter().all(|&v| v < -tols.diverge_threshold)
        && tail.windows(2).all(|p| p[1] <= p[0])
    {
        return SideEstimate::DivergesMinus;
    }

    let pooled = if upper {
        tail.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
    } else {
        tail.iter().fold(f64::INFINITY, |a, &b| a.min(b))
    };
    let earlier = &vals[..vals.len() - w];
    let settled = if earlier.is_empty() {
        tail.windows(2).all(|p| (p[1] - p[0]).abs() < tols.tol_stable)
    } else if upper {
        // no new record beyond the stability tolerance
        let record = earlier.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        pooled <= record + tols.tol_stable
    } else {
        let record = earlier.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        pooled >= record - tols.tol_stable
    };
    if settled {
        SideEstimate::Finite(pooled)
    } else {
        SideEstimate::Unsettled(pooled)
    }
}

// ---------------------------------------------------------------------------
// O-RV and RV
// ---------------------------------------------------------------------------

/// Global-bound fit `c^{-1} t^beta <= U(tx)/U(x) <= c t^alpha`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OrvFit {
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub c_hat: f64,
    pub max_residual: f64,
}

/// O-regular variation: every probed ratio extremum finite and
/// settled. Observed divergence on any side decides `Out`.
pub fn classify_orv(
    u: &LogFunction,
    t_grid: &[f64],
    x_grid: &GridSpec,
    tols: &Tolerances,
) -> Result<(Verdict3, Option<OrvFit>, Vec<RatioExtrema>)> {
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument {
            reason: "t_grid must be nonempty".to_string(),
        });
    }
    let mut extrema = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if t < 1.0 {
            return Err(Error::InvalidArgument {
                reason: format!("O-RV probes need t >= 1, got {t}"),
            });
        }
        extrema.push(ratio_extrema(u, t, x_grid, tols)?);
    }
    if extrema
        .iter()
        .any(|re| re.lower.diverges() || re.upper.diverges())
    {
        return Ok((Verdict3::Out, None, extrema));
    }
    if !extrema
        .iter()
        .all(|re| re.lower.is_finite() && re.upper.is_finite())
    {
        return Ok((Verdict3::Inconclusive, None, extrema));
    }
    let ss: Vec<f64> = extrema.iter().map(|re| re.t.ln()).collect();
    let ups: Vec<f64> = extrema.iter().map(|re| re.upper.value().unwrap()).collect();
    let los: Vec<f64> = extrema.iter().map(|re| re.lower.value().unwrap()).collect();
    let alpha_hat = ls_slope_through_origin(&ss, &ups);
    let beta_hat = ls_slope_through_origin(&ss, &los);
    let mut max_residual: f64 = 0.0;
    for i in 0..ss.len() {
        max_residual = max_residual
            .max(ups[i] - alpha_hat * ss[i])
            .max(beta_hat * ss[i] - los[i]);
    }
    let fit = OrvFit {
        alpha_hat,
        beta_hat,
        c_hat: max_residual.exp(),
        max_residual,
    };
    Ok((Verdict3::In, Some(fit), extrema))
}

/// Regular variation: every probed ratio collapses to a point and the
/// common values fit `rho * log t`. The slowly-varying flag is set
/// when the fitted index vanishes.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RvResult {
    pub verdict: Verdict3,
    pub index: Option<f64>,
    pub sv: Verdict3,
}

/// Index magnitude below which an RV member counts as slowly varying.
pub const SV_INDEX_TOL: f64 = 0.02;

pub fn classify_rv(
    u: &LogFunction,
    t_grid: &[f64],
    x_grid: &GridSpec,
    tols: &Tolerances,
) -> Result<RvResult> {
    let (orv_verdict, _, extrema) = classify_orv(u, t_grid, x_grid, tols)?;
    if orv_verdict == Verdict3::Out {
        return Ok(RvResult {
            verdict: Verdict3::Out,
            index: None,
            sv: Verdict3::Out,
        });
    }
    if orv_verdict == Verdict3::Inconclusive {
        return Ok(RvResult {
            verdict: Verdict3::Inconclusive,
            index: None,
            sv: Verdict3::Inconclusive,
        });
    }
    // every side finite; do the per-t bands collapse?
    let collapsed = extrema.iter().all(|re| {
        let (lo, hi) = (re.lower.value().unwrap(), re.upper.value().unwrap());
        hi - lo < tols.tol_converge
    });
    if !collapsed {
        return Ok(RvResult {
            verdict: Verdict3::Out,
            index: None,
            sv: Verdict3::Out,
        });
    }
    let ss: Vec<f64> = extrema.iter().map(|re| re.t.ln()).collect();
    let mids: Vec<f64> = extrema
        .iter()
        .map(|re| 0.5 * (re.lower.value().unwrap() + re.upper.value().unwrap()))
        .collect();
    let rho = ls_slope_through_origin(&ss, &mids);
    let resid = ss
        .iter()
        .zip(&mids)
        .map(|(&s, &m)| (m - rho * s).abs())
        .fold(0.0f64, f64::max);
    if resid < tols.tol_converge {
        let sv = if rho.abs() <= SV_INDEX_TOL {
            Verdict3::In
        } else {
            Verdict3::Out
        };
        Ok(RvResult {
            verdict: Verdict3::In,
            index: Some(rho),
            sv,
        })
    } else {
        Ok(RvResult {
            verdict: Verdict3::Inconclusive,
            index: Some(rho),
            sv: Verdict3::Inconclusive,
        })
    }
}

// ---------------------------------------------------------------------------
// Scaled-ratio limits and the threshold bisection
// ---------------------------------------------------------------------------

/// Verdict for `t^r U(tx)/U(x)` as `t -> infinity` at fixed `x = e^y`,
/// probed in log domain as `h(s) = r s + l(y+s) - l(y)`.
pub fn ratio_scaled_limit(
    u: &LogFunction,
    r: f64,
    y_probe: f64,
    s_grid: &GridSpec,
    tols: &Tolerances,
) -> Result<LimitVerdict> {
    let base = u.eval(y_probe)?;
    limit_verdict(
        |s| Ok(r * s + u.eval(y_probe + s)? - base),
        s_grid,
        tols,
    )
}

/// The original-scale meaning of a log-domain verdict:
/// `h -> -inf` means the ratio tends to 0, `h -> +inf` means it blows up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ScaledLimit {
    Zero,
    Infinite,
    Finite(f64),
    Oscillating,
    Undecided,
}

pub fn scaled_limit_of(verdict: &LimitVerdict) -> ScaledLimit {
    match verdict.kind {
        VerdictKind::DivergesMinus => ScaledLimit::Zero,
        VerdictKind::DivergesPlus => ScaledLimit::Infinite,
        VerdictKind::Converges { value } => ScaledLimit::Finite(value.exp()),
        VerdictKind::Oscillates { .. } => ScaledLimit::Oscillating,
        VerdictKind::Inconclusive => ScaledLimit::Undecided,
    }
}

/// Bracket width at which each bisection stops.
pub const THRESHOLD_WIDTH: f64 = 1e-3;
/// Largest gap tolerated between the edge of the "tends to 0" region
/// and the edge of the "blows up" region. Near the threshold the drift
/// `r s` can be too slow to resolve at desk scale even for clean
/// members, leaving a thin band of undecided probes.
pub const THRESHOLD_COARSE_WIDTH: f64 = 0.02;

/// Bisects the exponent `r` at which `t^r U(tx)/U(x)` flips from
/// tending to 0 to blowing up; the threshold equals `-rho_U` for
/// members of the finite-order class.
///
/// Two one-sided bisections run independently: the upper edge of the
/// exponents driving the ratio to 0 and the lower edge of those
/// blowing it up. If the two edges agree within
/// [`THRESHOLD_COARSE_WIDTH`] the midpoint of the gap is the
/// threshold; a wider gap of oscillating probes means no threshold
/// exists. A probe with a finite nonzero limit pins the threshold
/// exactly and returns immediately.
pub fn scaling_threshold(
    u: &LogFunction,
    y_probe: f64,
    r_bracket: (f64, f64),
    s_grid: &GridSpec,
    tols: &Tolerances,
) -> Result<f64> {
    let (lo, hi) = r_bracket;
    if !(lo < hi) {
        return Err(Error::BadBracket {
            reason: format!("need lo < hi, got [{lo}, {hi}]"),
        });
    }
    let probe = |r: f64| -> Result<ScaledLimit> {
        Ok(scaled_limit_of(&ratio_scaled_limit(u, r, y_probe, s_grid, tols)?))
    };
    match probe(lo)? {
        ScaledLimit::Zero => {}
        ScaledLimit::Finite(_) => return Ok(lo),
        other => {
            return Err(Error::BadBracket {
                reason: format!("lower end r = {lo} does not drive the ratio to 0 (got {other:?})"),
            })
        }
    }
    match probe(hi)? {
        ScaledLimit::Infinite => {}
        ScaledLimit::Finite(_) => return Ok(hi),
        other => {
            return Err(Error::BadBracket {
                reason: format!(
                    "upper end r = {hi} does not drive the ratio to infinity (got {other:?})"
                ),
            })
        }
    }

    // upper edge of the Zero region
    let (mut zlo, mut zhi) = (lo, hi);
    while zhi - zlo > THRESHOLD_WIDTH {
        let mid = 0.5 * (zlo + zhi);
        match probe(mid)? {
            ScaledLimit::Zero => zlo = mid,
            ScaledLimit::Finite(_) => return Ok(mid),
            _ => zhi = mid,
        }
    }
    // lower edge of the Infinite region
    let (mut ilo, mut ihi) = (lo, hi);
    while ihi - ilo > THRESHOLD_WIDTH {
        let mid = 0.5 * (ilo + ihi);
        match probe(mid)? {
            ScaledLimit::Infinite => ihi = mid,
            ScaledLimit::Finite(_) => return Ok(mid),
            _ => ilo = mid,
        }
    }
    let zero_edge = 0.5 * (zlo + zhi);
    let inf_edge = 0.5 * (ilo + ihi);
    if inf_edge - zero_edge <= THRESHOLD_COARSE_WIDTH {
        Ok(0.5 * (zero_edge + inf_edge))
    } else {
        Err(Error::ThresholdNotApplicable)
    }
}

// ---------------------------------------------------------------------------
// Uniform envelope
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EnvelopeMode {
    Sup,
    Inf,
}

/// Verdict of `t^r sup/inf_{x in [c, d]} U(tx)/U(x)` as `t -> infinity`,
/// sampled at `x_resolution` points across `[log c, log d]`. Infinite
/// intervals are rejected by contract.
pub fn uct_envelope(
    u: &LogFunction,
    r: f64,
    c: f64,
    d: f64,
    s_grid: &GridSpec,
    x_resolution: usize,
    mode: EnvelopeMode,
    tols: &Tolerances,
) -> Result<LimitVerdict> {
    if !(1.0 < c && c < d && d.is_finite()) {
        return Err(Error::InvalidArgument {
            reason: format!("need a finite interval 1 < c < d, got [{c}, {d}]"),
        });
    }
    if x_resolution < 2 {
        return Err(Error::InvalidArgument {
            reason: format!("x_resolution must be at least 2, got {x_resolution}"),
        });
    }
    let (lc, ld) = (c.ln(), d.ln());
    let step = (ld - lc) / (x_resolution - 1) as f64;
    let xs: Vec<f64> = (0..x_resolution).map(|i| lc + step * i as f64).collect();
    let bases: Vec<f64> = xs.iter().map(|&lx| u.eval(lx)).collect::<Result<_>>()?;
    limit_verdict(
        |s| {
            let mut env = match mode {
                EnvelopeMode::Sup => f64::NEG_INFINITY,
                EnvelopeMode::Inf => f64::INFINITY,
            };
            for (i, &lx) in xs.iter().enumerate() {
                let v = r * s + u.eval(lx + s)? - bases[i];
                env = match mode {
                    EnvelopeMode::Sup => env.max(v),
                    EnvelopeMode::Inf => env.min(v),
                };
            }
            Ok(env)
        },
        s_grid,
        tols,
    )
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

/// Finite-difference recovery of the index function under the
/// representation integral: `(l(y + h) - l(y)) / h` along the grid.
/// A diagnostic trail, not a verdict.
pub fn index_function_probe(
    u: &LogFunction,
    grid: &GridSpec,
    h_step: f64,
) -> Result<Vec<(f64, f64)>> {
    if !(h_step > 0.0 && h_step.is_finite()) {
        return Err(Error::InvalidArgument {
            reason: format!("h_step must be positive, got {h_step}"),
        });
    }
    grid.validate()?;
    let mut out = Vec::new();
    for y in grid.points() {
        let b = (u.eval(y + h_step)? - u.eval(y)?) / h_step;
        out.push((y, b));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Full report
// ---------------------------------------------------------------------------

/// Everything the toolkit can say about one function, with the
/// evidence behind every verdict. Per-criterion failures are recorded
/// in `errors`, never dropped.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub verdicts: BTreeMap<ClassName, Verdict3>,
    pub rho_hat: Option<f64>,
    pub mu_hat: f64,
    pub nu_hat: f64,
    pub rv_index: Option<f64>,
    pub orv_fit: Option<OrvFit>,
    pub tau_hat: Option<f64>,
    pub trails: BTreeMap<String, LimitVerdict>,
    /// Evaluation failures that prevented a criterion from running.
    pub errors: Vec<String>,
    /// Non-fatal diagnostics (e.g. threshold bisection not applicable).
    pub notes: Vec<String>,
    /// Set for sample-derived tails: verdicts carry no asymptotic claim.
    pub empirical: bool,
}

fn inconclusive_verdicts() -> BTreeMap<ClassName, Verdict3> {
    ClassName::ALL
        .iter()
        .map(|&c| (c, Verdict3::Inconclusive))
        .collect()
}

/// Runs every criterion and assembles a consistent report:
/// the order limit decides M and the extreme classes, ratio extrema
/// decide O-RV and RV, and the established class relations
/// (RV inside M and O-RV; extreme classes disjoint from M and O-RV;
/// O-RV plus converging orders implies M) are applied at the end.
pub fn full_report(u: &LogFunction, config: &ReportConfig) -> ClassificationReport {
    let tols = &config.tols;
    let mut report = ClassificationReport {
        verdicts: inconclusive_verdicts(),
        rho_hat: None,
        mu_hat: f64::NAN,
        nu_hat: f64::NAN,
        rv_index: None,
        orv_fit: None,
        tau_hat: None,
        trails: BTreeMap::new(),
        errors: Vec::new(),
        notes: Vec::new(),
        empirical: false,
    };

    let orders_result = match orders(u, &config.orders_grid, tols) {
        Ok(o) => Some(o),
        Err(e) => {
            report.errors.push(format!("orders: {e}"));
            None
        }
    };

    if let Some(o) = &orders_result {
        report.mu_hat = o.mu_hat;
        report.nu_hat = o.nu_hat;
        report.trails.insert("orders".to_string(), o.verdict.clone());

        match classify_m(o, tols) {
            MVerdict::In { rho } => {
                report.verdicts.insert(ClassName::M, Verdict3::In);
                report.rho_hat = Some(rho);
            }
            MVerdict::Out => {
                report.verdicts.insert(ClassName::M, Verdict3::Out);
            }
            MVerdict::Inconclusive => {}
        }

        match classify_m_extremes(o) {
            ExtremeVerdict::MInf => {
                report.verdicts.insert(ClassName::MInf, Verdict3::In);
                report.verdicts.insert(ClassName::MMinusInf, Verdict3::Out);
                // the extreme classes are disjoint from M and O-RV
                report.verdicts.insert(ClassName::M, Verdict3::Out);
                report.verdicts.insert(ClassName::Rv, Verdict3::Out);
                report.verdicts.insert(ClassName::Sv, Verdict3::Out);
            }
            ExtremeVerdict::MMinusInf => {
                report.verdicts.insert(ClassName::MMinusInf, Verdict3::In);
                report.verdicts.insert(ClassName::MInf, Verdict3::Out);
                report.verdicts.insert(ClassName::M, Verdict3::Out);
                report.verdicts.insert(ClassName::Rv, Verdict3::Out);
                report.verdicts.insert(ClassName::Sv, Verdict3::Out);
            }
            ExtremeVerdict::Neither => {
                report.verdicts.insert(ClassName::MInf, Verdict3::Out);
                report.verdicts.insert(ClassName::MMinusInf, Verdict3::Out);
            }
            ExtremeVerdict::Inconclusive => {}
        }
    }

    match classify_orv(u, &config.t_grid, &config.ratio_grid, tols) {
        Ok((verdict, fit, extrema)) => {
            report.verdicts.insert(ClassName::Orv, verdict);
            report.orv_fit = fit;
            for re in &extrema {
                report.trails.insert(
                    format!("ratio(t={})", re.t),
                    decide(&re.trail, tols),
                );
            }
        }
        Err(e) => report.errors.push(format!("classify_orv: {e}")),
    }

    match classify_rv(u, &config.t_grid, &config.ratio_grid, tols) {
        Ok(rv) => {
            report.verdicts.insert(ClassName::Rv, rv.verdict);
            report.verdicts.insert(ClassName::Sv, rv.sv);
            report.rv_index = rv.index;
        }
        Err(e) => report.errors.push(format!("classify_rv: {e}")),
    }

    // O-RV membership with a converging order limit implies membership
    // in M (and an extreme-class hit implies O-RV exclusion).
    let orv = *report.verdicts.get(&ClassName::Orv).unwrap();
    if orv == Verdict3::In && report.rho_hat.is_some() {
        report.verdicts.insert(ClassName::M, Verdict3::In);
    }
    if report.verdicts[&ClassName::MInf] == Verdict3::In
        || report.verdicts[&ClassName::MMinusInf] == Verdict3::In
    {
        if orv == Verdict3::Inconclusive {
            report.verdicts.insert(ClassName::Orv, Verdict3::Out);
        }
    }

    // RV members sit inside both O-RV and M; demote an RV verdict that
    // the other criteria cannot corroborate.
    if report.verdicts[&ClassName::Rv] == Verdict3::In {
        if report.verdicts[&ClassName::M] == Verdict3::In {
            report.verdicts.insert(ClassName::Orv, Verdict3::In);
        } else {
            report.verdicts.insert(ClassName::Rv, Verdict3::Inconclusive);
        }
    }

    if report.verdicts[&ClassName::M] == Verdict3::In {
        let rho = report.rho_hat.expect("In(M) always carries rho_hat");
        let bracket = (-rho - 1.5, -rho + 1.5);
        match scaling_threshold(u, config.probe_ys[0], bracket, &config.scaled_grid, tols) {
            Ok(tau) => report.tau_hat = Some(tau),
            Err(e) => report.notes.push(format!("tau_hat: {e}")),
        }
    }

    report
}

/// Report for an empirical tail: order estimates only, all membership
/// verdicts left inconclusive — finitely many noisy samples support no
/// asymptotic claim.
pub fn empirical_report(u: &LogFunction, grid: &GridSpec, tols: &Tolerances) -> ClassificationReport {
    let mut report = ClassificationReport {
        verdicts: inconclusive_verdicts(),
        rho_hat: None,
        mu_hat: f64::NAN,
        nu_hat: f64::NAN,
        rv_index: None,
        orv_fit: None,
        tau_hat: None,
        trails: BTreeMap::new(),
        errors: Vec::new(),
        notes: Vec::new(),
        empirical: true,
    };
    match orders(u, grid, tols) {
        Ok(o) => {
            report.mu_hat = o.mu_hat;
            report.nu_hat = o.nu_hat;
            report.trails.insert("orders".to_string(), o.verdict);
        }
        Err(e) => report.errors.push(format!("orders: {e}")),
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::example;
    use std::collections::BTreeMap as Map;

    fn entry(name: &str) -> (LogFunction, ReportConfig) {
        let params = Map::new();
        let (f, _) = example(name, &params).unwrap();
        (f, recommended_config(name, &params))
    }

    fn entry_with(name: &str, kv: &[(&str, f64)]) -> (LogFunction, ReportConfig) {
        let params: Map<String, f64> = kv.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        let (f, _) = example(name, &params).unwrap();
        (f, recommended_config(name, &params))
    }

    #[test]
    fn orders_of_x_over_log_converge_to_one() {
        let (f, cfg) = entry("x_over_log");
        let o = orders(&f, &cfg.orders_grid, &cfg.tols).unwrap();
        assert!((o.mu_hat - 1.0).abs() < 0.01);
        assert!((o.nu_hat - 1.0).abs() < 0.01);
        assert!(matches!(o.verdict.kind, VerdictKind::Converges { .. }));
    }

    #[test]
    fn orders_of_pure_power_are_exact() {
        let (f, cfg) = entry_with("power", &[("rho", -3.0)]);
        let o = orders(&f, &cfg.orders_grid, &cfg.tols).unwrap();
        assert_eq!((o.mu_hat, o.nu_hat), (-3.0, -3.0));
    }

    #[test]
    fn orders_of_heavy_tail_step_hit_band_endpoints() {
        let (f, cfg) = entry("heavy_tail_step");
        let o = orders(&f, &cfg.orders_grid, &cfg.tols).unwrap();
        assert!((o.mu_hat + 1.0).abs() < 0.02, "mu {}", o.mu_hat);
        assert!((o.nu_hat + 0.5).abs() < 0.02, "nu {}", o.nu_hat);
    }

    #[test]
    fn classify_m_on_loglog_cosine_finds_order_zero() {
        let (f, cfg) = entry("loglog_cosine");
        let o = orders(&f, &cfg.orders_grid, &cfg.tols).unwrap();
        match classify_m(&o, &cfg.tols) {
            MVerdict::In { rho } => assert!(rho.abs() < 0.01, "rho {rho}"),
            other => panic!("expected In, got {other:?}"),
        }
    }

    #[test]
    fn classify_m_rejects_band_function_with_wide_spread() {
        let (f, cfg) = entry("orv_not_m");
        let o = orders(&f, &cfg.orders_grid, &cfg.tols).unwrap();
        assert_eq!(classify_m(&o, &cfg.tols), MVerdict::Out);
        assert!(o.verdict.spread >= 0.4, "spread {}", o.verdict.spread);
    }

    #[test]
    fn classify_m_rejects_x_sin() {
        let (f, cfg) = entry("x_sin");
        let o = orders(&f, &cfg.orders_grid, &cfg.tols).unwrap();
        assert_eq!(classify_m(&o, &cfg.tols), MVerdict::Out);
        assert!((o.verdict.spread - 2.0).abs() < 0.01);
    }

    #[test]
    fn extremes_of_exponential_entries() {
        let (f, cfg) = entry("exp_decay");
        let o = orders(&f, &cfg.orders_grid, &cfg.tols).unwrap();
        assert_eq!(classify_m_extremes(&o), ExtremeVerdict::MInf);

        let (f, cfg) = entry("exp_growth");
        let o = orders(&f, &cfg.orders_grid, &cfg.tols).unwrap();
        assert_eq!(classify_m_extremes(&o), ExtremeVerdict::MMinusInf);

        let (f, cfg) = entry_with("power", &[("rho", 5.0)]);
        let o = orders(&f, &cfg.orders_grid, &cfg.tols).unwrap();
        assert_eq!(classify_m_extremes(&o), ExtremeVerdict::Neither);
    }

    #[test]
    fn ratio_extrema_of_pure_power_is_a_point() {
        let (f, cfg) = entry_with("power", &[("rho", 2.0)]);
        let re = ratio_extrema(&f, 2.0, &cfg.ratio_grid, &cfg.tols).unwrap();
        let want = 2.0 * 2.0f64.ln();
        match (re.lower, re.upper) {
            (SideEstimate::Finite(lo), SideEstimate::Finite(hi)) => {
                // l(y+s) - l(y) cancels two numbers of size rho * y
                assert!((lo - want).abs() < 1e-9);
                assert!((hi - want).abs() < 1e-9);
            }
            other => panic!("expected finite pair, got {other:?}"),
        }
    }

    #[test]
    fn ratio_extrema_of_x_sin_diverge_both_ways() {
        let (f, cfg) = entry("x_sin");
        let re = ratio_extrema(&f, std::f64::consts::E, &cfg.ratio_grid, &cfg.tols).unwrap();
        assert_eq!(re.upper, SideEstimate::DivergesPlus);
        assert_eq!(re.lower, SideEstimate::DivergesMinus);
    }

    #[test]
    fn loglog_cosine_upper_ratio_diverges() {
        let (f, cfg) = entry("loglog_cosine");
        let re = ratio_extrema(&f, std::f64::consts::E, &cfg.ratio_grid, &cfg.tols).unwrap();
        assert_eq!(re.upper, SideEstimate::DivergesPlus);
    }

    #[test]
    fn classify_orv_fits_the_band_function() {
        let (f, cfg) = entry("orv_not_m");
        let (verdict, fit, _) = classify_orv(&f, &cfg.t_grid, &cfg.ratio_grid, &cfg.tols).unwrap();
        assert_eq!(verdict, Verdict3::In);
        let fit = fit.unwrap();
        assert!((0.98..=1.02).contains(&fit.alpha_hat), "alpha {}", fit.alpha_hat);
        assert!((-0.02..=0.02).contains(&fit.beta_hat), "beta {}", fit.beta_hat);
        assert!(fit.c_hat <= 1.1, "c {}", fit.c_hat);
    }

    #[test]
    fn classify_orv_rejects_loglog_cosine() {
        let (f, cfg) = entry("loglog_cosine");
        let (verdict, _, _) = classify_orv(&f, &cfg.t_grid, &cfg.ratio_grid, &cfg.tols).unwrap();
        assert_eq!(verdict, Verdict3::Out);
    }

    #[test]
    fn classify_rv_finds_index_of_x_over_log() {
        let (f, cfg) = entry("x_over_log");
        let rv = classify_rv(&f, &cfg.t_grid, &cfg.ratio_grid, &cfg.tols).unwrap();
        assert_eq!(rv.verdict, Verdict3::In);
        assert!((rv.index.unwrap() - 1.0).abs() < 0.01);
        assert_eq!(rv.sv, Verdict3::Out);
    }

    #[test]
    fn classify_rv_flags_slowly_varying_log() {
        let (f, cfg) = entry("sv_log");
        let rv = classify_rv(&f, &cfg.t_grid, &cfg.ratio_grid, &cfg.tols).unwrap();
        assert_eq!(rv.verdict, Verdict3::In);
        assert!(rv.index.unwrap().abs() < 0.01);
        assert_eq!(rv.sv, Verdict3::In);
    }

    #[test]
    fn classify_rv_rejects_band_function() {
        let (f, cfg) = entry("orv_not_m");
        let rv = classify_rv(&f, &cfg.t_grid, &cfg.ratio_grid, &cfg.tols).unwrap();
        assert_eq!(rv.verdict, Verdict3::Out);
    }

    #[test]
    fn scaled_limit_of_power_splits_at_minus_rho() {
        let (f, cfg) = entry_with("power", &[("rho", 2.0)]);
        let z = ratio_scaled_limit(&f, -2.5, 3.0, &cfg.scaled_grid, &cfg.tols).unwrap();
        assert_eq!(scaled_limit_of(&z), ScaledLimit::Zero);
        let z = ratio_scaled_limit(&f, -1.5, 3.0, &cfg.scaled_grid, &cfg.tols).unwrap();
        assert_eq!(scaled_limit_of(&z), ScaledLimit::Infinite);
    }

    #[test]
    fn scaled_limit_of_x_over_log_matches_its_order() {
        let (f, cfg) = entry("x_over_log");
        let z = ratio_scaled_limit(&f, -2.0, 2.0, &cfg.scaled_grid, &cfg.tols).unwrap();
        assert_eq!(scaled_limit_of(&z), ScaledLimit::Zero);
        let z = ratio_scaled_limit(&f, 0.0, 2.0, &cfg.scaled_grid, &cfg.tols).unwrap();
        assert_eq!(scaled_limit_of(&z), ScaledLimit::Infinite);
    }

    #[test]
    fn scaled_limit_of_x_sin_oscillates_for_moderate_exponents() {
        // the oscillating term has amplitude ~ s, so any |r| < 1 leaves
        // both envelope edges running away in opposite directions
        let (f, _) = entry("x_sin");
        let s_grid = GridSpec::linear(1.0, 5.0, 20, 512).unwrap();
        for r in [-0.5, 0.0, 0.5] {
            let z = ratio_scaled_limit(&f, r, 1.0, &s_grid, &Tolerances::default()).unwrap();
            assert_eq!(scaled_limit_of(&z), ScaledLimit::Oscillating, "r = {r}");
        }
    }

    #[test]
    fn threshold_bisection_on_power_and_x_over_log() {
        let (f, cfg) = entry_with("power", &[("rho", 2.0)]);
        let tau =
            scaling_threshold(&f, 3.0, (-3.5, -0.5), &cfg.scaled_grid, &cfg.tols).unwrap();
        assert!((tau + 2.0).abs() <= 1e-3, "tau {tau}");

        let (f, cfg) = entry("x_over_log");
        let tau =
            scaling_threshold(&f, 2.0, (-2.5, 0.5), &cfg.scaled_grid, &cfg.tols).unwrap();
        assert!((tau + 1.0).abs() <= 1e-2, "tau {tau}");
    }

    #[test]
    fn threshold_bisection_accepts_narrow_bracket_on_loglog_cosine() {
        let (f, cfg) = entry("loglog_cosine");
        let tau =
            scaling_threshold(&f, 2.0, (-1.5, 1.5), &cfg.scaled_grid, &cfg.tols).unwrap();
        assert!(tau.abs() <= 1e-2, "tau {tau}");
    }

    #[test]
    fn threshold_bisection_rejects_oscillating_brackets() {
        let (f, _) = entry("x_sin");
        let s_grid = GridSpec::linear(1.0, 5.0, 20, 512).unwrap();
        // an endpoint that oscillates invalidates the bracket outright
        let r = scaling_threshold(&f, 1.0, (-0.5, 0.5), &s_grid, &Tolerances::default());
        assert!(matches!(r, Err(Error::BadBracket { .. })), "{r:?}");
        // valid endpoints but a wide oscillating region in between:
        // no threshold exists
        let r = scaling_threshold(&f, 1.0, (-2.0, 2.0), &s_grid, &Tolerances::default());
        assert!(matches!(r, Err(Error::ThresholdNotApplicable)), "{r:?}");
    }

    #[test]
    fn uct_envelope_of_power_is_independent_of_x() {
        let (f, cfg) = entry_with("power", &[("rho", 1.0)]);
        let v = uct_envelope(
            &f,
            -2.0,
            2.0,
            8.0,
            &cfg.scaled_grid,
            16,
            EnvelopeMode::Sup,
            &cfg.tols,
        )
        .unwrap();
        assert_eq!(scaled_limit_of(&v), ScaledLimit::Zero);
    }

    #[test]
    fn uct_envelope_rejects_bad_intervals() {
        let (f, cfg) = entry_with("power", &[("rho", 1.0)]);
        assert!(uct_envelope(
            &f,
            0.0,
            8.0,
            2.0,
            &cfg.scaled_grid,
            16,
            EnvelopeMode::Sup,
            &cfg.tols
        )
        .is_err());
        assert!(uct_envelope(
            &f,
            0.0,
            2.0,
            f64::INFINITY,
            &cfg.scaled_grid,
            16,
            EnvelopeMode::Sup,
            &cfg.tols
        )
        .is_err());
    }

    #[test]
    fn index_probe_recovers_constant_beta_exactly() {
        use crate::catalog::{build_m, CoefFn, MRepresentation};
        let rep = MRepresentation::new(
            std::f64::consts::E,
            |_| 0.0,
            CoefFn::Constant(3.0),
            |_| 1.0,
            3.0,
        )
        .unwrap();
        let f = build_m(&rep);
        let grid = GridSpec::linear(2.0, 10.0, 5, 8).unwrap();
        for (_, b) in index_function_probe(&f, &grid, 1.0).unwrap() {
            assert!((b - 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn index_probe_tracks_x_over_log_derivative() {
        let (f, _) = entry("x_over_log");
        let grid = GridSpec::linear(1e4, 100.0, 4, 8).unwrap();
        for (_, b) in index_function_probe(&f, &grid, 1.0).unwrap() {
            assert!((b - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn index_probe_on_band_function_alternates() {
        let (f, _) = entry("orv_not_m");
        // probe inside two adjacent bands: [e^6, e^7) has value 1,
        // [e^7, e^8) has value 0
        let inside_even = 0.5 * (6.0f64.exp() + 7.0f64.exp());
        let inside_odd = 0.5 * (7.0f64.exp() + 8.0f64.exp());
        let b_even = (f.eval(inside_even + 1.0).unwrap() - f.eval(inside_even).unwrap()) / 1.0;
        let b_odd = (f.eval(inside_odd + 1.0).unwrap() - f.eval(inside_odd).unwrap()) / 1.0;
        assert_eq!(b_even, 1.0);
        assert_eq!(b_odd, 0.0);
    }

    #[test]
    fn full_report_on_power_two() {
        let (f, cfg) = entry_with("power", &[("rho", 2.0)]);
        let r = full_report(&f, &cfg);
        assert!(r.errors.is_empty(), "{:?}", r.errors);
        assert_eq!(r.verdicts[&ClassName::Rv], Verdict3::In);
        assert_eq!(r.verdicts[&ClassName::Orv], Verdict3::In);
        assert_eq!(r.verdicts[&ClassName::M], Verdict3::In);
        assert_eq!(r.verdicts[&ClassName::MInf], Verdict3::Out);
        assert_eq!(r.verdicts[&ClassName::MMinusInf], Verdict3::Out);
        assert!((r.rho_hat.unwrap() - 2.0).abs() < 1e-9);
        assert!((r.tau_hat.unwrap() + 2.0).abs() < 1e-2);
    }

    #[test]
    fn full_report_separates_the_two_counterexamples() {
        let (f, cfg) = entry("orv_not_m");
        let r = full_report(&f, &cfg);
        assert_eq!(r.verdicts[&ClassName::Orv], Verdict3::In);
        assert_eq!(r.verdicts[&ClassName::M], Verdict3::Out);
        assert_eq!(r.verdicts[&ClassName::Rv], Verdict3::Out);

        let (f, cfg) = entry("loglog_cosine");
        let r = full_report(&f, &cfg);
        assert_eq!(r.verdicts[&ClassName::M], Verdict3::In);
        assert_eq!(r.verdicts[&ClassName::Orv], Verdict3::Out);
        assert_eq!(r.verdicts[&ClassName::Rv], Verdict3::Out);
        assert_eq!(r.verdicts[&ClassName::Sv], Verdict3::Out);
    }

    #[test]
    fn report_invariants_hold_on_every_catalog_entry() {
        for info in crate::catalog::entries() {
            let (f, cfg) = entry(info.name);
            let r = full_report(&f, &cfg);
            assert!(r.mu_hat <= r.nu_hat, "{}: mu > nu", info.name);
            let m_in = r.verdicts[&ClassName::M] == Verdict3::In;
            if m_in {
                let rho = r.rho_hat.expect("In(M) carries rho_hat");
                assert!((rho - r.mu_hat).abs() < cfg.tols.tol_converge);
                assert!((rho - r.nu_hat).abs() < cfg.tols.tol_converge);
                assert_ne!(r.verdicts[&ClassName::MInf], Verdict3::In);
                assert_ne!(r.verdicts[&ClassName::MMinusInf], Verdict3::In);
            }
            if r.verdicts[&ClassName::Rv] == Verdict3::In {
                assert_eq!(r.verdicts[&ClassName::Orv], Verdict3::In);
                assert!(m_in);
            }
        }
    }

    #[test]
    fn scaling_changes_no_verdict() {
        let (f, cfg) = entry("x_over_log");
        let scaled = f.scaled(37.5).unwrap();
        let a = full_report(&f, &cfg);
        let b = full_report(&scaled, &cfg);
        assert_eq!(a.verdicts, b.verdicts);
        // constants decay like c / y across the probe reach
        assert!((a.rho_hat.unwrap() - b.rho_hat.unwrap()).abs() < 1e-5);
    }

    #[test]
    fn empirical_report_makes_no_membership_claim() {
        let samples = crate::catalog::pareto_samples(1234, 100_000, 2.0);
        let tail = crate::logfn::empirical_tail(&samples).unwrap();
        let grid = GridSpec::linear(2.0, 0.3, 8, 16).unwrap();
        let r = empirical_report(&tail, &grid, &Tolerances::default());
        assert!(r.empirical);
        assert!(r.verdicts.values().all(|&v| v == Verdict3::Inconclusive));
        assert!((-2.2..=-1.8).contains(&r.nu_hat), "nu {}", r.nu_hat);
    }
}
