//! Bessel functions I0 and J0, the cumulant kernel f(u) = log I0(u) with
//! three analytic derivatives, and the prime zeta function.
//!
//! f and its derivatives feed the saddle-point machinery, so they are
//! computed from series/asymptotic expansions rather than finite differences.

use crate::error::{err, ErrorKind, Result};

/// Largest argument for which e^x stays inside f64 range.
const I0_OVERFLOW: f64 = 700.0;
/// Power series / asymptotic switch point for I0-family evaluations.
const I0_SERIES_CUT: f64 = 40.0;

/// Modified Bessel function of order zero, for 0 <= x <= 700.
///
/// Power series (all terms positive) up to the switch point, Hankel-type
/// asymptotic expansion beyond. Relative error below 1e-13.
pub fn bessel_i0(x: f64) -> Result<f64> {
    if !(0.0..=I0_OVERFLOW).contains(&x) {
        return Err(err!(
            "special_functions",
            "bessel_I0",
            if x > I0_OVERFLOW {
                ErrorKind::Overflow(format!("I0({x}) exceeds f64; use log_bessel_i0"))
            } else {
                ErrorKind::Range(format!("I0 requires x >= 0, got {x}"))
            }
        ));
    }
    Ok(if x <= I0_SERIES_CUT {
        i0_series(x)
    } else {
        (x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + i0_asymptotic_log_tail(x)).exp()
    })
}

/// log I0(x) for any x >= 0, safe from overflow.
pub fn log_bessel_i0(x: f64) -> f64 {
    if x <= I0_SERIES_CUT {
        i0_series(x).ln()
    } else {
        x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + i0_asymptotic_log_tail(x)
    }
}

fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..200 {
        term *= q / ((n * n) as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

/// log of the bracketed asymptotic series: I0(x) = e^x/sqrt(2 pi x) * S(x).
fn i0_asymptotic_log_tail(x: f64) -> f64 {
    // S(x) = sum_k c_k / x^k, c_k = ((2k-1)!!)^2 / (k! 8^k)
    let mut c = 1.0;
    let mut sum = 1.0;
    for k in 1u32..20 {
        let odd = (2 * k - 1) as f64;
        c *= odd * odd / (k as f64 * 8.0);
        let t = c / x.powi(k as i32);
        sum += t;
        if t < 1e-17 {
            break;
        }
    }
    sum.ln()
}

// Cephes rational approximations for J0 (double precision, peak error ~4e-16).
const J0_DR1: f64 = 5.783185962946784;
const J0_DR2: f64 = 30.471262343662087;

const J0_RP: [f64; 4] = [
    -4.794432209782018e9,
    1.9561749194655657e12,
    -2.4924834436096772e14,
    9.708622510473064e15,
];
const J0_RQ: [f64; 8] = [
    4.99563147152651e2,
    1.737854016763747e5,
    4.844096583399621e7,
    1.1185553704535683e10,
    2.112775201154892e12,
    3.1051822985742256e14,
    3.1812195594320496e16,
    1.7108629408104315e18,
];
const J0_PP: [f64; 7] = [
    7.969367292973471e-4,
    8.283523921074408e-2,
    1.239533716464143,
    5.447250030587687,
    8.74716500199817,
    5.303240382353949,
    1.0,
];
const J0_PQ: [f64; 7] = [
    9.244088105588637e-4,
    8.562884743544745e-2,
    1.2535274390105895,
    5.470977403304171,
    8.761908832370695,
    5.306052882353947,
    1.0,
];
const J0_QP: [f64; 8] = [
    -1.1366383889846916e-2,
    -1.2825271867050931,
    -1.9553954425773597e1,
    -9.320601521237683e1,
    -1.7768116798048806e2,
    -1.4707750515495118e2,
    -5.141053267665993e1,
    -6.050143506007285,
];
const J0_QQ: [f64; 7] = [
    6.43178256118178e1,
    8.564300259769806e2,
    3.8824018360540163e3,
    7.240467741956525e3,
    5.930727011873169e3,
    2.0620933166032783e3,
    2.420057402402914e2,
];

fn poly(x: f64, coef: &[f64]) -> f64 {
    coef.iter().fold(0.0, |acc, &c| acc * x + c)
}

/// Horner with an implicit leading coefficient of 1.
fn poly1(x: f64, coef: &[f64]) -> f64 {
    coef.iter().fold(1.0, |acc, &c| acc * x + c)
}

/// Bessel function of the first kind, order zero. Even by construction.
pub fn bessel_j0(x: f64) -> Result<f64> {
    let x = x.abs();
    if x > 1e8 {
        return Err(err!(
            "special_functions",
            "bessel_J0",
            ErrorKind::Range(format!("|x| = {x} exceeds 1e8"))
        ));
    }
    if x <= 5.0 {
        let z = x * x;
        if x < 1e-5 {
            return Ok(1.0 - z / 4.0);
        }
        let p = (z - J0_DR1) * (z - J0_DR2);
        return Ok(p * poly(z, &J0_RP) / poly1(z, &J0_RQ));
    }
    let w = 5.0 / x;
    let z = 25.0 / (x * x);
    let p = poly(z, &J0_PP) / poly(z, &J0_PQ);
    let q = poly(z, &J0_QP) / poly1(z, &J0_QQ);
    let xn = x - std::f64::consts::FRAC_PI_4;
    let (s, c) = xn.sin_cos();
    Ok((p * c - w * q * s) * (2.0 / (std::f64::consts::PI * x)).sqrt())
}

/// f(u) = log I0(u) and its first three derivatives.
#[derive(Debug, Clone, Copy)]
pub struct LogI0 {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

/// Coefficients of log I0 as a series in q = u^2/4, via the log-of-series
/// recurrence on a_n = 1/(n!)^2.
fn log_i0_series_coeffs() -> [f64; 18] {
    let mut a = [0.0f64; 18];
    a[0] = 1.0;
    for n in 1..18 {
        a[n] = a[n - 1] / ((n * n) as f64);
    }
    let mut c = [0.0f64; 18];
    for n in 1..18 {
        let mut s = a[n];
        for k in 1..n {
            s -= (k as f64 / n as f64) * c[k] * a[n - k];
        }
        c[n] = s;
    }
    c
}

/// Asymptotic coefficients of f'(u) = I1(u)/I0(u) ~ 1 + sum r_k u^{-k},
/// by series division of the two Hankel expansions.
fn i1_over_i0_asym_coeffs() -> [f64; 14] {
    let mut num = [0.0f64; 14]; // I1 bracket series
    let mut den = [0.0f64; 14]; // I0 bracket series
    num[0] = 1.0;
    den[0] = 1.0;
    let mut cn = 1.0;
    let mut cd = 1.0;
    for k in 1..14u32 {
        let odd = (2 * k - 1) as f64;
        cd *= odd * odd / (k as f64 * 8.0);
        cn *= (odd * odd - 4.0) / (k as f64 * 8.0);
        den[k as usize] = cd;
        num[k as usize] = cn;
    }
    let mut r = [0.0f64; 14];
    for k in 0..14 {
        let mut s = num[k];
        for j in 0..k {
            s -= r[j] * den[k - j];
        }
        r[k] = s;
    }
    r
}

struct LogI0Tables {
    series: [f64; 18],
    asym: [f64; 14],
}

fn tables() -> &'static LogI0Tables {
    use std::sync::OnceLock;
    static T: OnceLock<LogI0Tables> = OnceLock::new();
    T.get_or_init(|| LogI0Tables {
        series: log_i0_series_coeffs(),
        asym: i1_over_i0_asym_coeffs(),
    })
}

/// Evaluate f = log I0 and f', f'', f''' at u >= 0.
pub fn log_i0(u: f64) -> LogI0 {
    debug_assert!(u >= 0.0);
    if u <= 0.5 {
        // series in q = u^2/4; stable at the origin
        let c = &tables().series;
        let q = 0.25 * u * u;
        // Horner for C(q)/q and the derivative polynomials
        let (mut c0, mut cd1, mut cd2, mut cd3) = (0.0, 0.0, 0.0, 0.0);
        for n in (1..18).rev() {
            let nf = n as f64;
            c0 = c0 * q + c[n];
            cd1 = cd1 * q + nf * c[n];
            if n >= 2 {
                cd2 = cd2 * q + nf * (nf - 1.0) * c[n];
            }
            if n >= 3 {
                cd3 = cd3 * q + nf * (nf - 1.0) * (nf - 2.0) * c[n];
            }
        }
        // c0 = C(q)/q, cd1 = C'(q), cd2 = C''(q), cd3 = C'''(q)
        let x1 = 0.5 * u; // dq/du
        LogI0 {
            f: c0 * q,
            d1: cd1 * x1,
            d2: cd2 * x1 * x1 + 0.5 * cd1,
            d3: cd3 * x1 * x1 * x1 + 1.5 * cd2 * x1,
        }
    } else if u <= I0_SERIES_CUT {
        // ratio of positive power series: A = I0(u), B = I1(u)/u
        let q = 0.25 * u * u;
        let mut ta = 1.0;
        let mut a = 1.0;
        let mut tb = 0.5;
        let mut b = 0.5;
        for n in 1..200 {
            let nf = n as f64;
            ta *= q / (nf * nf);
            tb *= q / (nf * (nf + 1.0));
            a += ta;
            b += tb;
            if ta < a * 1e-17 {
                break;
            }
        }
        let fp_over_u = b / a;
        let d1 = u * fp_over_u;
        let d2 = 1.0 - fp_over_u - d1 * d1;
        let d3 = (fp_over_u - d2) / u - 2.0 * d1 * d2;
        LogI0 { f: a.ln(), d1, d2, d3 }
    } else {
        let r = &tables().asym;
        let inv = 1.0 / u;
        let (mut d1, mut d2, mut d3) = (0.0, 0.0, 0.0);
        for k in (1..14).rev() {
            let kf = k as f64;
            d1 = (d1 + r[k]) * inv;
            d2 = (d2 - kf * r[k]) * inv;
            d3 = (d3 + kf * (kf + 1.0) * r[k]) * inv;
        }
        d1 += 1.0; // r[0] = 1
        d2 *= inv;
        d3 *= inv * inv;
        let f = u - 0.5 * (2.0 * std::f64::consts::PI * u).ln() + i0_asymptotic_log_tail(u);
        LogI0 { f, d1, d2, d3 }
    }
}

/// I2/I0 ratio via the recurrence I2 = I0 - 2 I1/u.
pub fn i2_over_i0(u: f64) -> f64 {
    if u <= 1e-4 {
        // I2/I0 = u^2/8 + O(u^4)
        return u * u / 8.0;
    }
    1.0 - 2.0 * log_i0(u).d1 / u
}

/// Moebius function for small n by trial factorization.
fn moebius(mut n: u64) -> i64 {
    let mut factors = 0;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            factors += 1;
        }
        d += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Prime zeta function P(s) = sum_p p^{-s} for s > 1, via
/// P(s) = sum_n mu(n)/n log zeta(ns).
pub fn prime_zeta(s: f64) -> f64 {
    assert!(s > 1.0, "prime zeta needs s > 1");
    let mut sum = 0.0;
    for n in 1..200u64 {
        let ns = s * n as f64;
        if ns > 1076.0 {
            break;
        }
        let mu = moebius(n);
        if mu == 0 {
            continue;
        }
        let lz = if ns > 60.0 {
            // log zeta(x) = 2^{-x} + 3^{-x} + ... ~ 2^{-x} here
            2f64.powf(-ns) + 3f64.powf(-ns)
        } else {
            crate::zeta::zeta_real(ns).ln()
        };
        let term = mu as f64 / n as f64 * lz;
        sum += term;
        if lz < 1e-19 {
            break;
        }
    }
    sum
}
