//! Evaluation of zeta(s), log zeta(sigma+it) with continuously tracked
//! argument, and the Dirichlet polynomial R_Y(sigma+it).
//!
//! The workhorse is Euler-Maclaurin summation with O(|t|) main terms, which
//! gives uniform accuracy on vertical lines away from the half-line. An
//! independent eta-function (alternating series) backend is kept as a
//! cross-check oracle.

use num_complex::Complex64;

use crate::error::{err, ErrorKind, Result};
use crate::primes::PrimeTable;

/// B_{2k}/(2k)! for k = 1..=10.
const EM_COEFF: [f64; 10] = [
    8.333333333333333e-2,
    -1.3888888888888889e-3,
    3.3068783068783067e-5,
    -8.267195767195768e-7,
    2.08767569878681e-8,
    -5.284190138687493e-10,
    1.3382536530684679e-11,
    -3.3896802963225829e-13,
    8.586062056277844e-15,
    -2.1748686985580617e-16,
];

const RE_LO: f64 = 0.4; // extended left edge for contour work
const RE_HI: f64 = 3.0;
const IM_MAX: f64 = 1.0e7;

/// Euler-Maclaurin with explicit term counts; exposed for convergence tests.
pub fn zeta_euler_maclaurin(s: Complex64, n_terms: usize, k_corrections: usize) -> Complex64 {
    let n = n_terms.max(2);
    let k_corrections = k_corrections.min(EM_COEFF.len());
    // main sum, compensated
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for j in 1..n {
        let lnj = (j as f64).ln();
        let (im, re) = (-s.im * lnj).sin_cos();
        let scale = (-s.re * lnj).exp();
        let term = Complex64::new(scale * re, scale * im);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let n_minus_s = (-s * ln_n).exp();
    let mut total = sum + 0.5 * n_minus_s + n_minus_s * nf / (s - 1.0);
    // Bernoulli corrections: C_k * prod_{j=0}^{2k-2}(s+j) * N^{-s-2k+1}
    let mut poch = s;
    let mut npow = n_minus_s / nf; // N^{-s-1}
    let inv_n2 = 1.0 / (nf * nf);
    for (k, &c) in EM_COEFF.iter().enumerate().take(k_corrections) {
        total += c * poch * npow;
        let j = (2 * (k + 1)) as f64;
        poch *= (s + (j - 1.0)) * (s + j);
        npow *= inv_n2;
    }
    total
}

fn window_check(s: Complex64, tol: f64) -> Result<()> {
    if !(RE_LO..=RE_HI).contains(&s.re) || s.im.abs() > IM_MAX || tol < 1e-12 {
        return Err(err!(
            "zeta_eval",
            "zeta",
            ErrorKind::Range(format!(
                "s = {s} (window {RE_LO} <= re <= {RE_HI}, |im| <= {IM_MAX:e}) or tol {tol} < 1e-12"
            ))
        ));
    }
    Ok(())
}

/// zeta(s) on the desk-scale window. Conjugate symmetry holds exactly:
/// negative imaginary parts evaluate through the mirror point.
pub fn zeta(s: Complex64, tol: f64) -> Result<Complex64> {
    window_check(s, tol)?;
    if s.im < 0.0 {
        return Ok(zeta(s.conj(), tol)?.conj());
    }
    if (s - Complex64::new(1.0, 0.0)).norm() < 1e-6 {
        return Err(err!(
            "zeta_eval",
            "zeta",
            ErrorKind::Range("s too close to the pole at 1".into())
        ));
    }
    let n = em_terms(s.im);
    Ok(zeta_euler_maclaurin(s, n, 10))
}

/// Number of main terms used at height t.
fn em_terms(t: f64) -> usize {
    (t.abs().ceil() as usize).max(20)
}

/// Real zeta for s > 0, s != 1 (prime zeta and prediction formulas).
pub fn zeta_real(s: f64) -> f64 {
    assert!(s > 0.0 && s != 1.0);
    if s > 60.0 {
        // 1 + 2^-s + 3^-s dominates to machine precision
        return 1.0 + 2f64.powf(-s) + 3f64.powf(-s) + 4f64.powf(-s);
    }
    zeta_euler_maclaurin(Complex64::new(s, 0.0), 32, 10).re
}

/// Alternating-series (eta function) oracle with repeated averaging of the
/// tail partial sums; independent of the Euler-Maclaurin path.
pub fn zeta_eta_oracle(s: Complex64) -> Complex64 {
    let n0 = ((3.0 * s.im.abs()).ceil() as usize).max(50);
    let levels = 48usize;
    // partial sums S_{n0+j}, j = 0..=levels
    let mut partial = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    let term = |n: usize| -> Complex64 {
        let lnn = (n as f64).ln();
        let (im, re) = (-s.im * lnn).sin_cos();
        let scale = (-s.re * lnn).exp();
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        Complex64::new(sign * scale * re, sign * scale * im)
    };
    for n in 1..=n0 {
        let y = term(n) - comp;
        let t = partial + y;
        comp = (t - partial) - y;
        partial = t;
    }
    let mut sums = Vec::with_capacity(levels + 1);
    sums.push(partial);
    let mut run = partial;
    for j in 1..=levels {
        run += term(n0 + j);
        sums.push(run);
    }
    for _ in 0..levels {
        for i in 0..sums.len() - 1 {
            sums[i] = 0.5 * (sums[i] + sums[i + 1]);
        }
        sums.pop();
    }
    let eta = sums[0];
    let denom = 1.0 - (Complex64::new(1.0, 0.0) - s).exp_ln2();
    eta / denom
}

trait ExpLn2 {
    fn exp_ln2(self) -> Complex64;
}
impl ExpLn2 for Complex64 {
    /// 2^z
    fn exp_ln2(self) -> Complex64 {
        (self * std::f64::consts::LN_2).exp()
    }
}

/// Quality flag for tracked log values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quality {
    Ok,
    NearZero,
    PathRefined,
}

/// log zeta with argument by continuous variation from the anchor at re(s)=3.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct LogZetaValue {
    pub log_modulus: f64,
    pub argument: f64,
    pub quality: Quality,
}

const NEAR_ZERO: f64 = 1e-10;
const ARG_STEP: f64 = 0.25;
const MAX_HALVING: u32 = 20;

/// Continuous-argument tracking along the horizontal segment from 3+it to
/// sigma+it, anchored at the principal value at 3+it.
pub fn log_zeta_line(sigma: f64, t: f64, tol: f64) -> Result<LogZetaValue> {
    if !(0.5 < sigma && sigma <= 1.0) || t < 10.0 {
        return Err(err!(
            "zeta_eval",
            "log_zeta_line",
            ErrorKind::Range(format!("need sigma in (1/2,1] and t >= 10, got ({sigma}, {t})"))
        ));
    }
    let eval = |sig: f64| zeta(Complex64::new(sig, t), tol);
    let mut nodes = vec![3.0];
    let mut x = 3.0;
    while x - ARG_STEP > sigma {
        x -= ARG_STEP;
        nodes.push(x);
    }
    nodes.push(sigma);
    track_along(&eval, &nodes, "log_zeta_line")
}

/// Shared argument tracker: walks `nodes`, accumulating principal-branch
/// increments of the ratio, bisecting any step whose increment reaches pi/2.
pub(crate) fn track_along(
    eval: &dyn Fn(f64) -> Result<Complex64>,
    nodes: &[f64],
    op: &'static str,
) -> Result<LogZetaValue> {
    let first = eval(nodes[0])?;
    check_nonzero(first, nodes[0], op)?;
    let mut arg = first.arg();
    let mut prev = first;
    let mut refined = false;
    for w in nodes.windows(2) {
        let val = eval(w[1])?;
        check_nonzero(val, w[1], op)?;
        let (d, did_refine) = arg_increment(eval, w[0], prev, w[1], val, 0, op)?;
        arg += d;
        refined |= did_refine;
        prev = val;
    }
    Ok(LogZetaValue {
        log_modulus: prev.norm().ln(),
        argument: arg,
        quality: if refined { Quality::PathRefined } else { Quality::Ok },
    })
}

fn check_nonzero(v: Complex64, x: f64, op: &'static str) -> Result<()> {
    if v.norm() < NEAR_ZERO {
        return Err(err!(
            "zeta_eval",
            "log_zeta_line",
            ErrorKind::NearZero(format!("|value| = {:e} at path node {x} in {op}", v.norm()))
        ));
    }
    Ok(())
}

fn arg_increment(
    eval: &dyn Fn(f64) -> Result<Complex64>,
    x0: f64,
    v0: Complex64,
    x1: f64,
    v1: Complex64,
    depth: u32,
    op: &'static str,
) -> Result<(f64, bool)> {
    let d = (v1 / v0).arg();
    if d.abs() < std::f64::consts::FRAC_PI_2 {
        return Ok((d, depth > 0));
    }
    if depth >= MAX_HALVING {
        return Err(err!(
            "zeta_eval",
            "log_zeta_line",
            ErrorKind::NearZero(format!(
                "argument step {d:.3} at [{x0}, {x1}] not resolvable after {MAX_HALVING} halvings in {op}"
            ))
        ));
    }
    let xm = 0.5 * (x0 + x1);
    let vm = eval(xm)?;
    check_nonzero(vm, xm, op)?;
    let (d1, _) = arg_increment(eval, x0, v0, xm, vm, depth + 1, op)?;
    let (d2, _) = arg_increment(eval, xm, vm, x1, v1, depth + 1, op)?;
    Ok((d1 + d2, true))
}

/// Dirichlet polynomial R_Y(sigma+it) = sum_{p^n <= Y} 1/(n p^{n(sigma+it)}),
/// complex sum in ascending p^n order.
pub fn dirichlet_r(sigma: f64, t: f64, y: f64, table: &PrimeTable) -> Result<Complex64> {
    let poly = DirichletPoly::build(sigma, y, table)?;
    Ok(poly.eval(t))
}

/// Prebuilt R_Y evaluator for bulk sampling: fixed weights and log-frequencies.
#[derive(Debug, Clone)]
pub struct DirichletPoly {
    weights: Vec<f64>, // p^{-n sigma}/n
    freqs: Vec<f64>,   // n ln p
}

impl DirichletPoly {
    pub fn build(sigma: f64, y: f64, table: &PrimeTable) -> Result<Self> {
        let pps = table.prime_powers(y).map_err(|mut e| {
            e.op = "dirichlet_R";
            e
        })?;
        let mut weights = Vec::with_capacity(pps.len());
        let mut freqs = Vec::with_capacity(pps.len());
        for pp in pps {
            let lp = (pp.p as f64).ln();
            weights.push((-(pp.n as f64) * sigma * lp).exp() / pp.n as f64);
            freqs.push(pp.n as f64 * lp);
        }
        Ok(DirichletPoly { weights, freqs })
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for (w, f) in self.weights.iter().zip(&self.freqs) {
            let (s, c) = (t * f).sin_cos();
            re += w * c;
            im -= w * s;
        }
        Complex64::new(re, im)
    }
}

/// Batched Euler-Maclaurin evaluation of zeta at several sigmas for the same
/// t, sharing the oscillatory factors. Used by the bulk samplers, where the
/// per-point cost is dominated by sin/cos of t ln n.
pub struct BulkZeta {
    sigmas: Vec<f64>,
    ln_n: Vec<f64>,        // ln n, n = 0 slot unused
    pows: Vec<Vec<f64>>,   // per sigma: n^{-sigma}
    t_max: f64,
}

impl BulkZeta {
    /// `sigmas` are the evaluation abscissas (for tracked lines: the path
    /// grid, descending from 3 to the target).
    pub fn new(sigmas: Vec<f64>, t_max: f64) -> Self {
        let cap = em_terms(t_max) + 2;
        let mut ln_n = vec![0.0; cap];
        for n in 1..cap {
            ln_n[n] = (n as f64).ln();
        }
        let pows = sigmas
            .iter()
            .map(|&sig| {
                let mut v = vec![0.0; cap];
                for n in 1..cap {
                    v[n] = (-sig * ln_n[n]).exp();
                }
                v
            })
            .collect();
        BulkZeta { sigmas, ln_n, pows, t_max }
    }

    /// Path grid from 3.0 down to `sigma` in ARG_STEP steps.
    pub fn path_grid(sigma: f64) -> Vec<f64> {
        let mut nodes = vec![3.0];
        let mut x = 3.0;
        while x - ARG_STEP > sigma {
            x -= ARG_STEP;
            nodes.push(x);
        }
        nodes.push(sigma);
        nodes
    }

    /// zeta at every configured sigma for this t (t >= 0).
    pub fn eval_all(&self, t: f64) -> Vec<Complex64> {
        debug_assert!(t >= 0.0 && t <= self.t_max);
        let n = em_terms(t);
        let ns = self.sigmas.len();
        let mut acc = vec![Complex64::new(0.0, 0.0); ns];
        let mut block = vec![Complex64::new(0.0, 0.0); ns];
        let mut comp = vec![Complex64::new(0.0, 0.0); ns];
        const BLOCK: usize = 8192;
        let mut j = 1usize;
        while j < n {
            let hi = (j + BLOCK).min(n);
            for b in block.iter_mut() {
                *b = Complex64::new(0.0, 0.0);
            }
            for i in j..hi {
                let (s, c) = (t * self.ln_n[i]).sin_cos();
                for (k, b) in block.iter_mut().enumerate() {
                    let w = self.pows[k][i];
                    b.re += w * c;
                    b.im -= w * s;
                }
            }
            for k in 0..ns {
                // Kahan across blocks
                let y = block[k] - comp[k];
                let tt = acc[k] + y;
                comp[k] = (tt - acc[k]) - y;
                acc[k] = tt;
            }
            j = hi;
        }
        let nf = n as f64;
        let ln_nf = nf.ln();
        (0..ns)
            .map(|k| {
                let s = Complex64::new(self.sigmas[k], t);
                let n_minus_s = (-s * ln_nf).exp();
                let mut total = acc[k] + 0.5 * n_minus_s + n_minus_s * nf / (s - 1.0);
                let mut poch = s;
                let mut npow = n_minus_s / nf;
                let inv_n2 = 1.0 / (nf * nf);
                for (kk, &cc) in EM_COEFF.iter().enumerate() {
                    total += cc * poch * npow;
                    let jj = (2 * (kk + 1)) as f64;
                    poch *= (s + (jj - 1.0)) * (s + jj);
                    npow *= inv_n2;
                }
                total
            })
            .collect()
    }

    /// Tracked log zeta at the last configured sigma, using the batched values
    /// along the path and falling back to direct evaluation for refinements.
    pub fn log_zeta_tracked(&self, t: f64, tol: f64) -> Result<LogZetaValue> {
        let values = self.eval_all(t);
        let eval = |sig: f64| zeta(Complex64::new(sig, t), tol);
        let first = values[0];
        check_nonzero(first, self.sigmas[0], "log_zeta_tracked")?;
        let mut arg = first.arg();
        let mut refined = false;
        for k in 1..values.len() {
            check_nonzero(values[k], self.sigmas[k], "log_zeta_tracked")?;
            let (d, r) = arg_increment(
                &eval,
                self.sigmas[k - 1],
                values[k - 1],
                self.sigmas[k],
                values[k],
                0,
                "log_zeta_tracked",
            )?;
            arg += d;
            refined |= r;
        }
        let last = values[values.len() - 1];
        Ok(LogZetaValue {
            log_modulus: last.norm().ln(),
            argument: arg,
            quality: if refined { Quality::PathRefined } else { Quality::Ok },
        })
    }
}
