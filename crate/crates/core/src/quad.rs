//! Reusable 1-D quadrature: periodic trapezoid, adaptive Gauss-Kronrod on an
//! interval, and a log-transformed rule for semi-infinite integrals.

use crate::error::{err, ErrorKind, Result};

/// Which rule `integrate` dispatches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    PeriodicTrapezoid,
    AdaptiveInterval,
    TransformedSemiInfinite,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub rule: QuadRule,
    pub abs_tol: f64,
    pub max_nodes: usize,
}

impl QuadratureSpec {
    pub fn new(rule: QuadRule, abs_tol: f64, max_nodes: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || max_nodes < 16 {
            return Err(err!(
                "special_functions",
                "integrate",
                ErrorKind::Config(format!(
                    "abs_tol must be > 0 and max_nodes >= 16 (got {abs_tol}, {max_nodes})"
                ))
            ));
        }
        Ok(QuadratureSpec { rule, abs_tol, max_nodes })
    }

    pub fn periodic(abs_tol: f64) -> Self {
        QuadratureSpec { rule: QuadRule::PeriodicTrapezoid, abs_tol, max_nodes: 1 << 21 }
    }

    pub fn adaptive(abs_tol: f64) -> Self {
        QuadratureSpec { rule: QuadRule::AdaptiveInterval, abs_tol, max_nodes: 1 << 21 }
    }

    pub fn semi_infinite(abs_tol: f64) -> Self {
        QuadratureSpec { rule: QuadRule::TransformedSemiInfinite, abs_tol, max_nodes: 1 << 21 }
    }
}

/// Integration domain. `SemiInfinite` means (0, infinity).
#[derive(Debug, Clone, Copy)]
pub enum Domain {
    Interval(f64, f64),
    SemiInfinite,
}

/// Integrate `f` per the spec, returning (value, error estimate).
pub fn integrate(
    f: impl Fn(f64) -> f64,
    spec: &QuadratureSpec,
    domain: Domain,
) -> Result<(f64, f64)> {
    match (spec.rule, domain) {
        (QuadRule::PeriodicTrapezoid, Domain::Interval(a, b)) => {
            periodic_trapezoid(&f, a, b, spec.abs_tol, spec.max_nodes)
        }
        (QuadRule::AdaptiveInterval, Domain::Interval(a, b)) => {
            adaptive_gk(&f, a, b, spec.abs_tol, spec.max_nodes)
        }
        (QuadRule::TransformedSemiInfinite, Domain::SemiInfinite) => {
            semi_infinite(&f, spec.abs_tol, spec.max_nodes)
        }
        _ => Err(err!(
            "special_functions",
            "integrate",
            ErrorKind::Config("rule/domain combination not supported".into())
        )),
    }
}

/// Trapezoid rule with node doubling; spectrally accurate for periodic
/// analytic integrands on a full period.
pub fn periodic_trapezoid(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_nodes: usize,
) -> Result<(f64, f64)> {
    let width = b - a;
    let mut n: usize = 16;
    let mut sum = 0.0;
    for i in 0..n {
        sum += f(a + width * i as f64 / n as f64);
    }
    let mut value = sum * width / n as f64;
    while n < max_nodes {
        // add midpoints of the current grid
        let mut add = 0.0;
        for i in 0..n {
            add += f(a + width * (i as f64 + 0.5) / n as f64);
        }
        n *= 2;
        sum += add;
        let next = sum * width / n as f64;
        let diff = (next - value).abs();
        value = next;
        if diff < abs_tol {
            return Ok((value, diff));
        }
    }
    Err(err!(
        "special_functions",
        "integrate",
        ErrorKind::QuadratureFailure { best: value, err_est: f64::NAN }
    ))
}

// 15-point Kronrod nodes/weights on [-1,1] with embedded 7-point Gauss.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Gauss-Kronrod 15(7) panel; returns (kronrod, |kronrod - gauss|).
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        resk += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    (resk * h, ((resk - resg) * h).abs())
}

/// Globally adaptive GK15 by worst-panel bisection.
pub fn adaptive_gk(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_nodes: usize,
) -> Result<(f64, f64)> {
    #[derive(Debug)]
    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    let (v, e) = gk15(f, a, b);
    let mut panels = vec![Panel { a, b, value: v, err: e }];
    let mut nodes = 15usize;
    loop {
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        let total: f64 = panels.iter().map(|p| p.value).sum();
        if !total.is_finite() {
            return Err(err!(
                "special_functions",
                "integrate",
                ErrorKind::QuadratureFailure { best: total, err_est: total_err }
            ));
        }
        if total_err < abs_tol {
            return Ok((total, total_err));
        }
        if nodes + 30 > max_nodes {
            return Err(err!(
                "special_functions",
                "integrate",
                ErrorKind::QuadratureFailure { best: total, err_est: total_err }
            ));
        }
        // split the worst panel
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            // interval exhausted at f64 resolution; keep its contribution
            let (v, _) = gk15(f, a, b);
            panels.push(Panel { a, b, value: v, err: 0.0 });
            continue;
        }
        let (v1, e1) = gk15(f, a, m);
        let (v2, e2) = gk15(f, m, b);
        nodes += 30;
        panels.push(Panel { a, b: m, value: v1, err: e1 });
        panels.push(Panel { a: m, b, value: v2, err: e2 });
    }
}

/// Integral over (0, infinity) via u = e^x, trapezoid in x with window
/// expansion and node doubling.
fn semi_infinite(
    f: &impl Fn(f64) -> f64,
    abs_tol: f64,
    max_nodes: usize,
) -> Result<(f64, f64)> {
    let g = |x: f64| {
        let u = x.exp();
        f(u) * u
    };
    // expand the window until both ends are negligible
    let (mut lo, mut hi) = (-8.0f64, 8.0f64);
    let mut peak = 0.0f64;
    for i in 0..=64 {
        peak = peak.max(g(lo + (hi - lo) * i as f64 / 64.0).abs());
    }
    if peak == 0.0 {
        return Ok((0.0, 0.0));
    }
    let floor = peak * 1e-16;
    let mut guard = 0;
    while g(lo).abs() > floor && guard < 100 {
        lo -= 8.0;
        guard += 1;
    }
    let mut guard = 0;
    while g(hi).abs() > floor && guard < 400 {
        hi += 8.0;
        guard += 1;
    }
    periodic_trapezoid(&g, lo, hi, abs_tol, max_nodes)
}
