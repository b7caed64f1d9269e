//! Convex and locally convex curves: exact integration in the nilpotent
//! triangular group, numeric integration of orthogonal frames, the
//! southwest minor functions, vanishing-order multiplicity vectors, and
//! itinerary extraction (the finite list of non-open cells a locally
//! convex curve crosses).

use num_traits::Signed;
use serde_json::{json, Value};

use crate::bruhat::{signed_bruhat_decompose, SignedPermMatrix};
use crate::charts::{frak_a, frak_n, h_so, matrix_exp, nilpotent_exp, qr_pos};
use crate::coxeter::{MultVector, Permutation};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Poly, Rat};
use crate::spin::SpinWord;

/// Curvature profile of a locally convex curve at SO level: either a
/// piecewise-constant coefficient table on a breakpoint grid, or one of
/// the named closed forms (the principal rotation flow and the QR image
/// of the principal nilpotent flow), with an orthogonal base frame.
#[derive(Clone, Debug)]
pub enum CurveSpec {
    PiecewiseConstant {
        grid: Vec<f64>,
        kappas: Vec<Vec<f64>>,
        base: Matrix<f64>,
    },
    HCurve {
        base: Matrix<f64>,
    },
    NCurve {
        base: Matrix<f64>,
    },
}

impl CurveSpec {
    pub fn h_curve(np1: usize) -> CurveSpec {
        CurveSpec::HCurve {
            base: Matrix::identity(np1),
        }
    }

    pub fn n_curve(np1: usize) -> CurveSpec {
        CurveSpec::NCurve {
            base: Matrix::identity(np1),
        }
    }

    pub fn piecewise(grid: Vec<f64>, kappas: Vec<Vec<f64>>, np1: usize) -> Result<CurveSpec> {
        let spec = CurveSpec::PiecewiseConstant {
            grid,
            kappas,
            base: Matrix::identity(np1),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_base(self, base: Matrix<f64>) -> Result<CurveSpec> {
        if base.nrows() != self.np1() || !base.is_square() {
            return Err(Error::RankMismatch(base.nrows(), self.np1()));
        }
        Ok(match self {
            CurveSpec::PiecewiseConstant { grid, kappas, .. } => {
                CurveSpec::PiecewiseConstant { grid, kappas, base }
            }
            CurveSpec::HCurve { .. } => CurveSpec::HCurve { base },
            CurveSpec::NCurve { .. } => CurveSpec::NCurve { base },
        })
    }

    pub fn np1(&self) -> usize {
        match self {
            CurveSpec::PiecewiseConstant { kappas, base, .. } => {
                if base.nrows() > 0 {
                    base.nrows()
                } else {
                    kappas.first().map_or(0, |k| k.len() + 1)
                }
            }
            CurveSpec::HCurve { base } | CurveSpec::NCurve { base } => base.nrows(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let CurveSpec::PiecewiseConstant { grid, kappas, base } = self {
            if grid.len() != kappas.len() + 1 || kappas.is_empty() {
                return Err(Error::Invalid(
                    "grid must have one more point than kappa rows".into(),
                ));
            }
            if grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invalid("grid must be strictly increasing".into()));
            }
            let n = base.nrows() - 1;
            for row in kappas {
                if row.len() != n {
                    return Err(Error::Invalid("kappa row length must be the rank".into()));
                }
                if row.iter().any(|&k| k <= 0.0) {
                    return Err(Error::NonPositiveCoefficient);
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        match self {
            CurveSpec::PiecewiseConstant { grid, kappas, base } => json!({
                "grid": grid,
                "kappas": kappas,
                "base": base.to_json(),
            }),
            CurveSpec::HCurve { base } => json!({
                "closed_form": "h",
                "base": base.to_json(),
            }),
            CurveSpec::NCurve { base } => json!({
                "closed_form": "n",
                "base": base.to_json(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<CurveSpec> {
        if let Some(form) = v.get("closed_form") {
            let form = form
                .as_str()
                .ok_or_else(|| Error::Invalid("closed_form must be a string".into()))?;
            let base = match v.get("base") {
                Some(b) => Matrix::<f64>::from_json(b)?,
                None => {
                    let np1 = v
                        .get("n")
                        .and_then(Value::as_u64)
                        .ok_or_else(|| Error::Invalid("need base or n".into()))?
                        as usize
                        + 1;
                    Matrix::identity(np1)
                }
            };
            return match form {
                "h" => Ok(CurveSpec::HCurve { base }),
                "n" => Ok(CurveSpec::NCurve { base }),
                other => Err(Error::Invalid(format!("unknown closed form {other:?}"))),
            };
        }
        let grid: Vec<f64> = serde_json::from_value(
            v.get("grid")
                .cloned()
                .ok_or_else(|| Error::Invalid("missing grid".into()))?,
        )
        .map_err(|e| Error::Invalid(e.to_string()))?;
        let kappas: Vec<Vec<f64>> = serde_json::from_value(
            v.get("kappas")
                .cloned()
                .ok_or_else(|| Error::Invalid("missing kappas".into()))?,
        )
        .map_err(|e| Error::Invalid(e.to_string()))?;
        let np1 = kappas.first().map_or(0, |k| k.len() + 1);
        let base = match v.get("base") {
            Some(b) => Matrix::<f64>::from_json(b)?,
            None => Matrix::identity(np1),
        };
        let spec = CurveSpec::PiecewiseConstant { grid, kappas, base };
        spec.validate()?;
        Ok(spec)
    }
}

/// Frame evaluator with per-breakpoint products precomputed.
pub struct CurveEvaluator {
    spec: CurveSpec,
    // for the piecewise case: frame at each grid point
    checkpoints: Vec<Matrix<f64>>,
    generators: Vec<Matrix<f64>>,
}

impl CurveEvaluator {
    pub fn new(spec: &CurveSpec) -> Result<CurveEvaluator> {
        spec.validate()?;
        let mut checkpoints = Vec::new();
        let mut generators = Vec::new();
        if let CurveSpec::PiecewiseConstant { grid, kappas, base } = spec {
            let np1 = base.nrows();
            let mut cur = base.clone();
            checkpoints.push(cur.clone());
            for (m, row) in kappas.iter().enumerate() {
                let mut gen = Matrix::<f64>::zeros(np1, np1);
                for (j, &k) in row.iter().enumerate() {
                    gen = gen.add(&frak_a::<f64>(np1, j + 1).scale(&k));
                }
                let dt = grid[m + 1] - grid[m];
                cur = cur.mul(&matrix_exp(&gen.scale(&dt)));
                let (q, _) = qr_pos(&cur)?;
                cur = q;
                checkpoints.push(cur.clone());
                generators.push(gen);
            }
        }
        Ok(CurveEvaluator {
            spec: spec.clone(),
            checkpoints,
            generators,
        })
    }

    pub fn np1(&self) -> usize {
        self.spec.np1()
    }

    /// The frame at parameter t.
    pub fn at(&self, t: f64) -> Matrix<f64> {
        match &self.spec {
            CurveSpec::HCurve { base } => {
                let h = h_so::<f64>(base.nrows());
                base.mul(&matrix_exp(&h.scale(&t)))
            }
            CurveSpec::NCurve { base } => {
                let n = frak_n::<f64>(base.nrows());
                let (q, _) = qr_pos(&matrix_exp(&n.scale(&t))).expect("exp is invertible");
                base.mul(&q)
            }
            CurveSpec::PiecewiseConstant { grid, .. } => {
                // clamp to the boundary interval outside the grid
                let m = if t <= grid[0] {
                    0
                } else {
                    grid.iter()
                        .rposition(|&g| g <= t)
                        .unwrap_or(0)
                        .min(self.generators.len() - 1)
                };
                let dt = t - grid[m];
                self.checkpoints[m].mul(&matrix_exp(&self.generators[m].scale(&dt)))
            }
        }
    }
}

/// Numeric integration of a locally convex curve: samples every `step`,
/// exact constant-coefficient exponentials between samples and a QR
/// re-orthonormalization at each step.
pub fn integrate_lc_numeric(
    spec: &CurveSpec,
    q0: &Matrix<f64>,
    t0: f64,
    t1: f64,
    step: f64,
) -> Result<Vec<(f64, Matrix<f64>)>> {
    if step <= 0.0 {
        return Err(Error::BadStep);
    }
    let eval = CurveEvaluator::new(spec)?;
    let base = eval.at(t0);
    // frames relative to the requested start
    let mut out = Vec::new();
    let mut t = t0;
    loop {
        let frame = q0.mul(&base.transpose()).mul(&eval.at(t));
        let (q, _) = qr_pos(&frame)?;
        out.push((t, q));
        if t >= t1 {
            break;
        }
        t = (t + step).min(t1);
    }
    Ok(out)
}

/// Exact convex curve data in the nilpotent lower group: breakpoints
/// and per-interval positive coefficients, all rational.
#[derive(Clone, Debug)]
pub struct ConvexSpecExact {
    pub grid: Vec<Rat>,
    pub betas: Vec<Vec<Rat>>,
}

impl ConvexSpecExact {
    pub fn validate(&self) -> Result<()> {
        if self.grid.len() != self.betas.len() + 1 || self.betas.is_empty() {
            return Err(Error::Invalid(
                "grid must have one more point than beta rows".into(),
            ));
        }
        for w in self.grid.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Invalid("grid must be strictly increasing".into()));
            }
        }
        for row in &self.betas {
            if row.iter().any(|b| !b.is_positive()) {
                return Err(Error::NonPositiveCoefficient);
            }
        }
        Ok(())
    }

    pub fn np1(&self) -> usize {
        self.betas.first().map_or(0, |r| r.len() + 1)
    }

    fn generator(&self, m: usize) -> Matrix<Rat> {
        let np1 = self.np1();
        let mut gen = Matrix::<Rat>::zeros(np1, np1);
        for (j, b) in self.betas[m].iter().enumerate() {
            gen[(j + 1, j)] = b.clone();
        }
        gen
    }

    /// Gamma(t) with Gamma(grid[0]) = I, exactly.
    pub fn value(&self, t: &Rat) -> Result<Matrix<Rat>> {
        self.validate()?;
        if *t < self.grid[0] || *t > *self.grid.last().unwrap() {
            return Err(Error::Invalid("t outside the grid".into()));
        }
        let mut acc = Matrix::<Rat>::identity(self.np1());
        for m in 0..self.betas.len() {
            let (a, b) = (&self.grid[m], &self.grid[m + 1]);
            if *t <= *a {
                break;
            }
            let hi = if *t < *b { t.clone() } else { b.clone() };
            let dt = hi - a.clone();
            acc = acc.mul(&nilpotent_exp(&self.generator(m), &dt)?);
        }
        Ok(acc)
    }

    /// Gamma as a polynomial matrix in t, valid on the final interval.
    pub fn symbolic_last(&self) -> Result<Matrix<Poly>> {
        self.validate()?;
        let last = self.betas.len() - 1;
        let head = self.value(&self.grid[last])?;
        let head_poly = head.map(|x| Poly::constant(x.clone()));
        let t_shift = Poly::var() - Poly::constant(self.grid[last].clone());
        let gen = self.generator(last).map(|x| Poly::constant(x.clone()));
        Ok(head_poly.mul(&nilpotent_exp(&gen, &t_shift)?))
    }
}

/// Southwest j x j minors for j = 1..n of an orthogonal frame; all
/// nonzero exactly on the open cell.
pub fn m_functions_float(q: &Matrix<f64>) -> Vec<f64> {
    let np1 = q.nrows();
    (1..np1)
        .map(|j| {
            let rows: Vec<usize> = (np1 - j..np1).collect();
            let cols: Vec<usize> = (0..j).collect();
            q.minor(&rows, &cols)
        })
        .collect()
}

/// The same minors of a polynomial matrix.
pub fn m_functions_poly(m: &Matrix<Poly>) -> Vec<Poly> {
    let np1 = m.nrows();
    (1..np1)
        .map(|j| {
            let rows: Vec<usize> = (np1 - j..np1).collect();
            let cols: Vec<usize> = (0..j).collect();
            m.minor(&rows, &cols)
        })
        .collect()
}

/// Exact multiplicity vector at a lifted signed permutation point: the
/// vanishing orders at t = 0 of the polynomial southwest minors of
/// Pi(z0) exp(t n), which equal mult(eta sigma_{z0}).
pub fn mult_vector_exact(z0: &SpinWord) -> Result<MultVector> {
    let np1 = z0.rank() + 1;
    let zmat: Matrix<Poly> = z0.pi_so().to_matrix();
    let flow = nilpotent_exp(&frak_n::<Poly>(np1), &Poly::var())?;
    let gamma = zmat.mul(&flow);
    let mut entries = Vec::with_capacity(np1 - 1);
    for p in m_functions_poly(&gamma) {
        let order = p.order_at_zero().ok_or(Error::ZeroPolynomial)?;
        entries.push(order as i64);
    }
    Ok(MultVector::new(entries))
}

/// Least-squares estimate of the multiplicity vector from samples
/// (t, m_1..m_n) near t0: slope of log|m_j| against log|t - t0|,
/// rounded; the confidence is the worst absolute fit residual in log
/// units. Residuals above 0.25 are a hard error.
pub fn mult_vector_numeric(
    t0: f64,
    samples: &[(f64, Vec<f64>)],
) -> Result<(MultVector, f64)> {
    if samples.len() < 3 {
        return Err(Error::Invalid("need at least 3 samples".into()));
    }
    let n = samples[0].1.len();
    let mut entries = Vec::with_capacity(n);
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let pts: Vec<(f64, f64)> = samples
            .iter()
            .filter(|(t, m)| *t != t0 && m[j] != 0.0)
            .map(|(t, m)| ((t - t0).abs().ln(), m[j].abs().ln()))
            .collect();
        if pts.is_empty() {
            // identically zero on samples: treat as order 0 at a zero
            // function; cannot happen for locally convex curves
            return Err(Error::Invalid("minor vanishes on all samples".into()));
        }
        let len = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let denom = len * sxx - sx * sx;
        if denom == 0.0 {
            return Err(Error::Invalid("degenerate sample spacing".into()));
        }
        let slope = (len * sxy - sx * sy) / denom;
        let intercept = (sy - slope * sx) / len;
        let resid = pts
            .iter()
            .map(|p| (p.1 - (intercept + slope * p.0)).abs())
            .fold(0.0f64, f64::max);
        worst = worst.max(resid);
        entries.push(slope.round().max(0.0) as i64);
    }
    if worst > 0.25 {
        return Err(Error::NoisyFit(worst));
    }
    Ok((MultVector::new(entries), worst))
}

/// One crossing of a non-open cell.
#[derive(Clone, Debug)]
pub struct ItineraryEvent {
    pub t: f64,
    /// sigma with Gamma(t) in the cell indexed by eta sigma.
    pub sigma: Permutation,
    /// signed permutation of the crossed cell at SO level.
    pub signs: SignedPermMatrix,
}

#[derive(Clone, Copy, Debug)]
pub struct ItineraryConfig {
    /// sample spacing; default span/4096
    pub step: Option<f64>,
    /// detection floor on the minor functions
    pub detect_eps: f64,
    /// base tolerance for decomposition at refined events
    pub tol: f64,
}

impl Default for ItineraryConfig {
    fn default() -> Self {
        ItineraryConfig {
            step: None,
            detect_eps: 1e-7,
            tol: 1e-9,
        }
    }
}

fn golden_min(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let phi = 0.618_033_988_749_894_9_f64;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
        if b - a < 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
    }
    0.5 * (a + b)
}

/// Extracts the itinerary of a locally convex curve on [t0, t1]: the
/// ordered cell-crossing events. Detection scans the minor functions on
/// a grid for small values or sign changes, refines each cluster by
/// golden-section minimization of min_j |m_j|, merges refined times
/// closer than ten steps, classifies by decomposition at the refined
/// time and cross-checks against the numeric multiplicity fit.
pub fn itinerary(
    spec: &CurveSpec,
    t0: f64,
    t1: f64,
    cfg: &ItineraryConfig,
) -> Result<Vec<ItineraryEvent>> {
    if t1 <= t0 {
        return Err(Error::Invalid("need t0 < t1".into()));
    }
    let eval = CurveEvaluator::new(spec)?;
    let np1 = eval.np1();
    let n = np1 - 1;
    let step = cfg.step.unwrap_or((t1 - t0) / 4096.0);
    if step <= 0.0 {
        return Err(Error::BadStep);
    }
    let count = ((t1 - t0) / step).ceil() as usize;
    let ts: Vec<f64> = (0..=count)
        .map(|i| (t0 + i as f64 * step).min(t1))
        .collect();
    let minors: Vec<Vec<f64>> = ts.iter().map(|&t| m_functions_float(&eval.at(t))).collect();

    // flag samples: small minor or sign change against the previous one
    let mut flagged = vec![false; ts.len()];
    for i in 0..ts.len() {
        let small = minors[i].iter().any(|m| m.abs() < cfg.detect_eps);
        let flipped = i > 0
            && (0..n).any(|j| minors[i][j].signum() != minors[i - 1][j].signum());
        if small || flipped {
            flagged[i] = true;
            if flipped {
                flagged[i - 1] = true;
            }
        }
    }

    // cluster flags and refine
    let min_abs = |t: f64| -> f64 {
        m_functions_float(&eval.at(t))
            .iter()
            .fold(f64::INFINITY, |acc, m| acc.min(m.abs()))
    };
    // golden-section localization first; the minimum of min_j |m_j|
    // bottoms out at the floating noise floor of the highest-order
    // minor, so polish with a tent-model fit on the lowest-order minor:
    // near the event |m_j|^{1/p} is c|t - t*| up to higher order, and
    // two clean samples on either side intersect at t*.
    let refine = |a: f64, b: f64| -> f64 {
        let mut t_star = golden_min(min_abs, a, b, 200);
        // order estimate per minor from clean one-sided offsets
        let offsets: Vec<f64> = (0..6)
            .map(|k| 2.0 * step * (4f64).powf(k as f64 / 5.0))
            .collect();
        let samples: Vec<(f64, Vec<f64>)> = offsets
            .iter()
            .map(|&d| (t_star + d, m_functions_float(&eval.at(t_star + d))))
            .collect();
        let Ok((orders, _)) = mult_vector_numeric(t_star, &samples) else {
            return t_star;
        };
        let Some((j_best, &p)) = orders
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= 1)
            .min_by_key(|(_, &p)| p)
        else {
            return t_star;
        };
        let p = p as f64;
        // keep sample offsets large enough that |m| clears the noise
        let floor = (1e-12f64).powf(1.0 / p);
        let mut delta = 2.0 * step;
        for _ in 0..4 {
            let x1 = (t_star - delta).max(a);
            let x2 = (t_star + delta).min(b);
            let s1 = m_functions_float(&eval.at(x1))[j_best].abs().powf(1.0 / p);
            let s2 = m_functions_float(&eval.at(x2))[j_best].abs().powf(1.0 / p);
            if s1 + s2 == 0.0 {
                break;
            }
            let next = ((x1 * s2 + x2 * s1) / (s1 + s2)).clamp(a, b);
            let moved = (next - t_star).abs();
            t_star = next;
            delta = (4.0 * moved).max(floor).min(2.0 * step);
        }
        t_star
    };
    let mut raw_events: Vec<f64> = Vec::new();
    let mut i = 0;
    while i < ts.len() {
        if !flagged[i] {
            i += 1;
            continue;
        }
        let lo = i;
        while i < ts.len() && flagged[i] {
            i += 1;
        }
        let hi = i - 1;
        let a = if lo == 0 { ts[0] } else { ts[lo - 1] };
        let b = if hi + 1 >= ts.len() { ts[hi] } else { ts[hi + 1] };
        raw_events.push(refine(a, b));
    }

    // merge events closer than ten steps
    raw_events.sort_by(f64::total_cmp);
    let mut merged: Vec<f64> = Vec::new();
    for t in raw_events {
        match merged.last() {
            Some(&prev) if (t - prev).abs() < 10.0 * step => {
                let better = if min_abs(t) < min_abs(prev) { t } else { prev };
                *merged.last_mut().unwrap() = better;
            }
            _ => merged.push(t),
        }
    }

    let eta = Permutation::eta(n);
    let mut events = Vec::new();
    for t_star in merged {
        let unresolved = |msg: String| Error::UnresolvedEvent(t_star - step, t_star + step, msg);
        // numeric multiplicity fit over one decade of forward offsets
        let offsets: Vec<f64> = (0..8)
            .map(|k| 1e-4 * (t1 - t0) * (10f64).powf(k as f64 / 7.0))
            .collect();
        let samples: Vec<(f64, Vec<f64>)> = offsets
            .iter()
            .map(|&d| (t_star + d, m_functions_float(&eval.at(t_star + d))))
            .collect();
        let (fit, _conf) =
            mult_vector_numeric(t_star, &samples).map_err(|e| unresolved(e.to_string()))?;
        if fit.entries().iter().all(|&m| m == 0) {
            // a near-miss dip below the floor, not a crossing
            continue;
        }
        let sigma_event =
            Permutation::from_mult_vector(&fit).map_err(|e| unresolved(e.to_string()))?;
        // decomposition cross-check: the cell permutation must match the
        // fitted multiplicities at some rank tolerance scaled to the
        // residual entry size left by the localization
        let expected_p = eta.compose(&sigma_event)?;
        let mut found = None;
        for tau in [cfg.tol, 1e-10, 1e-8, 1e-6, 3e-5, 3e-4, 1e-3] {
            if let Ok(dec) = signed_bruhat_decompose(&eval.at(t_star), tau) {
                if *dec.p.sigma() == expected_p {
                    found = Some(dec.p);
                    break;
                }
            }
        }
        let signs = found.ok_or_else(|| {
            unresolved(format!(
                "multiplicity fit {fit} (cell {sigma_event}) not confirmed by decomposition"
            ))
        })?;
        events.push(ItineraryEvent {
            t: t_star,
            sigma: sigma_event,
            signs,
        });
    }
    Ok(events)
}

/// Events as JSON: [{t, sigma, signs: {sigma, signs}}].
pub fn itinerary_to_json(events: &[ItineraryEvent]) -> Value {
    Value::Array(
        events
            .iter()
            .map(|e| {
                json!({
                    "t": crate::scalar::round_sig(e.t),
                    "sigma": e.sigma,
                    "signs": e.signs,
                })
            })
            .collect(),
    )
}
