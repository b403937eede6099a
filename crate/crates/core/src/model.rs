//! Reproducible sampling of the random Euler product: log zeta(sigma, X) and
//! the Dirichlet polynomial R_Y(sigma, X), with quantified truncation error.
//!
//! The product over p <= P is sampled exactly; the omitted tail is a
//! mean-zero sum over p > P that is either dropped or replaced by a centered
//! complex Gaussian carrying the tail's exact per-component covariance
//! (independent real and imaginary parts of equal variance). After
//! compensation the residual error is bounded by the tail's fourth-cumulant
//! scale, which the default cutoff keeps below 1e-5.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{err, ErrorKind, Result};
use crate::primes::PrimeTable;
use crate::rng::CounterRng;
use crate::special::prime_zeta;

/// How the prime tail p > P is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailMode {
    Drop,
    GaussianCompensate,
}

/// One instance of the random model.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModelConfig {
    pub sigma: f64,
    pub prime_cutoff: u64,
    pub master_seed: u64,
    pub tail_mode: TailMode,
}

/// Largest default cutoff; beyond this the Gaussian surrogate carries the
/// tail (its residual stays far below every statistical tolerance in use).
const MAX_DEFAULT_CUTOFF: u64 = 100_000;
const MIN_DEFAULT_CUTOFF: u64 = 1_000;
/// Target for the compensated-tail residual bound (fourth-cumulant scale).
const RESIDUAL_TARGET: f64 = 1e-5;
/// A dropped tail must stay below this standard deviation.
const DROP_SD_LIMIT: f64 = 1e-3;

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.5 && self.sigma <= 1.0) {
            return Err(err!(
                "random_model",
                "config",
                ErrorKind::Config(format!("sigma {} outside (1/2, 1]", self.sigma))
            ));
        }
        if self.prime_cutoff < 2 {
            return Err(err!(
                "random_model",
                "config",
                ErrorKind::Config("prime_cutoff below 2".into())
            ));
        }
        Ok(())
    }

    /// Default cutoff and tail mode for a given sigma. Drop mode is kept when
    /// a cutoff below the cap brings the raw tail sd under 1e-3 (sigma near
    /// 1); otherwise the smallest cutoff whose compensated residual bound
    /// (integral bound on sum_{p>P} p^{-4 sigma}) meets the target is used
    /// with the Gaussian surrogate.
    pub fn default_for(sigma: f64, master_seed: u64) -> Self {
        let mut p_drop = MIN_DEFAULT_CUTOFF;
        while p_drop <= MAX_DEFAULT_CUTOFF
            && sd_bound_first_order(p_drop as f64, sigma) >= DROP_SD_LIMIT
        {
            p_drop = (p_drop as f64 * 1.5).ceil() as u64;
        }
        if p_drop <= MAX_DEFAULT_CUTOFF {
            return ModelConfig {
                sigma,
                prime_cutoff: p_drop,
                master_seed,
                tail_mode: TailMode::Drop,
            };
        }
        let mut p = MIN_DEFAULT_CUTOFF;
        while p < MAX_DEFAULT_CUTOFF && integral_bound(p as f64, 4.0 * sigma) > RESIDUAL_TARGET {
            p = (p as f64 * 1.5).ceil() as u64;
        }
        ModelConfig {
            sigma,
            prime_cutoff: p.min(MAX_DEFAULT_CUTOFF),
            master_seed,
            tail_mode: TailMode::GaussianCompensate,
        }
    }
}

/// Integral bound on sum_{p > x} p^{-s} for s > 1.
fn integral_bound(x: f64, s: f64) -> f64 {
    x.powf(1.0 - s) / ((s - 1.0) * x.ln())
}

/// First-order truncation sd sqrt(1/2 sum_{p>P} p^{-2 sigma}) via the bound.
fn sd_bound_first_order(p: f64, sigma: f64) -> f64 {
    (0.5 * integral_bound(p, 2.0 * sigma)).sqrt()
}

/// A draw of (log modulus, argument) from the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelSample {
    pub log_modulus: f64,
    pub argument: f64,
}

/// Counter slot reserved for the Gaussian tail compensation.
const TAIL_SLOT: u64 = u64::MAX - 7;

/// Prepared sampler: per-prime magnitudes and the exact tail covariance.
#[derive(Debug, Clone)]
pub struct ModelSampler {
    cfg: ModelConfig,
    r: Vec<f64>, // p^{-sigma} for p <= P
    primes: Vec<u64>,
    /// Per-component sd of the dropped tail; also the amplitude of the
    /// compensating Gaussian.
    tail_sd: f64,
    residual_bound: f64, // post-compensation residual scale
}

impl ModelSampler {
    pub fn new(cfg: ModelConfig, table: &PrimeTable) -> Result<Self> {
        cfg.validate()?;
        let primes: Vec<u64> = table
            .primes_upto(cfg.prime_cutoff as f64)
            .map_err(|mut e| {
                e.module = "random_model";
                e.op = "sampler";
                e
            })?
            .to_vec();
        let r: Vec<f64> = primes.iter().map(|&p| (p as f64).powf(-cfg.sigma)).collect();
        // exact per-component tail variance:
        //   1/2 sum_{n>=1} (1/n^2) sum_{p>P} p^{-2 n sigma}
        let mut var = 0.0;
        for n in 1..60u32 {
            let s = 2.0 * cfg.sigma * n as f64;
            let partial: f64 = primes.iter().map(|&p| (p as f64).powf(-s)).sum();
            let tail = (prime_zeta(s) - partial).max(0.0);
            let term = tail / (n as f64 * n as f64);
            var += term;
            if term < 1e-18 * var.max(1e-300) {
                break;
            }
        }
        let residual_bound = integral_bound(cfg.prime_cutoff as f64, 4.0 * cfg.sigma);
        Ok(ModelSampler { cfg, r, primes, tail_sd: (0.5 * var).sqrt(), residual_bound })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.cfg
    }

    /// Per-component sd of the dropped tail (reported in every report).
    pub fn truncation_sd(&self) -> f64 {
        self.tail_sd
    }

    /// Residual error scale after Gaussian compensation.
    pub fn residual_bound(&self) -> f64 {
        self.residual_bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// -sum_{p<=P} Log(1 - X(p) p^{-sigma}) with independent uniform phases,
    /// principal branch per factor, tail handled per the configured mode.
    pub fn sample_log_zeta(&self, stream_index: u64) -> ModelSample {
        let rng = CounterRng::new(self.cfg.master_seed, stream_index);
        let mut lm = 0.0;
        let mut arg = 0.0;
        for (i, &r) in self.r.iter().enumerate() {
            let (c, s) = rng.circle(i as u64);
            let re = 1.0 - r * c;
            let im = -r * s;
            lm -= 0.5 * (re * re + im * im).ln();
            arg -= im.atan2(re);
        }
        let (lm, arg) = self.compensate(rng, lm, arg);
        ModelSample { log_modulus: lm, argument: arg }
    }

    fn compensate(&self, rng: CounterRng, lm: f64, arg: f64) -> (f64, f64) {
        match self.cfg.tail_mode {
            TailMode::Drop => (lm, arg),
            TailMode::GaussianCompensate => {
                let (g1, g2) = rng.gaussian_pair(TAIL_SLOT);
                (lm + self.tail_sd * g1, arg + self.tail_sd * g2)
            }
        }
    }

    /// The model value zeta(sigma, X) itself, as a complex number, through
    /// the running product (argument enters only modulo 2 pi). Same phase
    /// stream as `sample_log_zeta`.
    pub fn sample_zeta_value(&self, stream_index: u64) -> Complex64 {
        let rng = CounterRng::new(self.cfg.master_seed, stream_index);
        let mut w = Complex64::new(1.0, 0.0);
        for (i, &r) in self.r.iter().enumerate() {
            let (c, s) = rng.circle(i as u64);
            w *= Complex64::new(1.0 - r * c, -r * s);
        }
        let z = w.finv();
        match self.cfg.tail_mode {
            TailMode::Drop => z,
            TailMode::GaussianCompensate => {
                let (g1, g2) = rng.gaussian_pair(TAIL_SLOT);
                z * Complex64::new(self.tail_sd * g1, self.tail_sd * g2).exp()
            }
        }
    }

    /// Just the log modulus, through the running product (fast path for
    /// tail-probability counting).
    pub fn sample_log_modulus(&self, stream_index: u64) -> f64 {
        let rng = CounterRng::new(self.cfg.master_seed, stream_index);
        let mut norm_sq = 1.0f64;
        let mut scale = 0.0f64;
        for (i, &r) in self.r.iter().enumerate() {
            let (c, s) = rng.circle(i as u64);
            let re = 1.0 - r * c;
            let im = -r * s;
            norm_sq *= re * re + im * im;
            // renormalize occasionally (sigma near 1/2 can drift far)
            if !(1e-150..=1e150).contains(&norm_sq) {
                scale += norm_sq.ln();
                norm_sq = 1.0;
            }
        }
        let lm = -0.5 * (norm_sq.ln() + scale);
        match self.cfg.tail_mode {
            TailMode::Drop => lm,
            TailMode::GaussianCompensate => {
                let (g1, _) = rng.gaussian_pair(TAIL_SLOT);
                lm + self.tail_sd * g1
            }
        }
    }

    /// R_Y(sigma, X) = sum_{p^n <= Y} X(p)^n/(n p^{n sigma}), common random
    /// numbers with `sample_log_zeta` on the shared primes.
    pub fn sample_r(&self, y: f64, stream_index: u64) -> Result<ModelSample> {
        if y > self.cfg.prime_cutoff as f64 {
            return Err(err!(
                "random_model",
                "sample_R",
                ErrorKind::Config(format!("Y {y} exceeds prime cutoff {}", self.cfg.prime_cutoff))
            ));
        }
        let rng = CounterRng::new(self.cfg.master_seed, stream_index);
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, (&p, &r)) in self.primes.iter().zip(&self.r).enumerate() {
            let pf = p as f64;
            if pf > y {
                break;
            }
            let (c, s) = rng.circle(i as u64);
            // Chebyshev stepping for X(p)^n
            let (mut cn, mut sn) = (c, s);
            let mut rn = r;
            let mut value = pf;
            let mut n = 1u32;
            loop {
                let w = rn / n as f64;
                re += w * cn;
                im += w * sn;
                if value > y / pf {
                    break;
                }
                value *= pf;
                n += 1;
                rn *= r;
                let c2 = cn * c - sn * s;
                sn = cn * s + sn * c;
                cn = c2;
            }
        }
        Ok(ModelSample { log_modulus: re, argument: im })
    }
}

/// Coupled sampling of zeta(sigma_j, X) at several sigmas with one shared
/// phase stream per draw (common random numbers). Product form: arguments
/// enter modulo 2 pi only.
#[derive(Debug, Clone)]
pub struct CoupledSampler {
    sigmas: Vec<f64>,
    master_seed: u64,
    primes: Vec<u64>,
    // rs[j][i] = p_i^{-sigma_j}
    rs: Vec<Vec<f64>>,
    tail_sd: Vec<f64>,
    tail_mode: TailMode,
}

impl CoupledSampler {
    pub fn new(
        sigmas: &[f64],
        prime_cutoff: u64,
        master_seed: u64,
        tail_mode: TailMode,
        table: &PrimeTable,
    ) -> Result<Self> {
        let mut samplers = Vec::new();
        for &sigma in sigmas {
            let cfg = ModelConfig { sigma, prime_cutoff, master_seed, tail_mode };
            samplers.push(ModelSampler::new(cfg, table)?);
        }
        Ok(CoupledSampler {
            sigmas: sigmas.to_vec(),
            master_seed,
            primes: samplers[0].primes.clone(),
            rs: samplers.iter().map(|s| s.r.clone()).collect(),
            tail_sd: samplers.iter().map(|s| s.tail_sd).collect(),
            tail_mode,
        })
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    /// One draw: zeta(sigma_j, X) for every configured sigma.
    pub fn sample_values(&self, stream_index: u64, out: &mut [Complex64]) {
        debug_assert_eq!(out.len(), self.sigmas.len());
        let rng = CounterRng::new(self.master_seed, stream_index);
        let mut w = vec![Complex64::new(1.0, 0.0); self.sigmas.len()];
        for i in 0..self.primes.len() {
            let (c, s) = rng.circle(i as u64);
            for (j, wj) in w.iter_mut().enumerate() {
                let r = self.rs[j][i];
                *wj *= Complex64::new(1.0 - r * c, -r * s);
            }
        }
        let gauss = rng.gaussian_pair(TAIL_SLOT);
        for (j, wj) in w.iter().enumerate() {
            let mut z = wj.finv();
            if self.tail_mode == TailMode::GaussianCompensate {
                z *= Complex64::new(self.tail_sd[j] * gauss.0, self.tail_sd[j] * gauss.1).exp();
            }
            out[j] = z;
        }
    }
}

/// Exact E |sum_{p in set} X(p) p^{-sigma}|^{2k} by brute-force enumeration
/// of index tuples: a term survives iff the two index multisets coincide.
pub fn moment_oracle_small(primes: &[u64], sigma: f64, k: u32) -> Result<f64> {
    if primes.len() > 6 || k > 3 || k == 0 {
        return Err(err!(
            "random_model",
            "moment_oracle_small",
            ErrorKind::ComplexityGuard(format!(
                "need <= 6 primes and 1 <= k <= 3, got {} primes, k = {k}",
                primes.len()
            ))
        ));
    }
    let m = primes.len();
    let k = k as usize;
    let weights: Vec<f64> = primes.iter().map(|&p| (p as f64).powf(-sigma)).collect();
    // enumerate all k-tuples (indices with repetition)
    let tuples: Vec<Vec<usize>> = {
        let mut out = vec![vec![]];
        for _ in 0..k {
            let mut next = Vec::new();
            for t in &out {
                for i in 0..m {
                    let mut t2 = t.clone();
                    t2.push(i);
                    next.push(t2);
                }
            }
            out = next;
        }
        out
    };
    let multiset = |t: &[usize]| {
        let mut counts = [0u32; 6];
        for &i in t {
            counts[i] += 1;
        }
        counts
    };
    let mut total = 0.0;
    for ti in &tuples {
        let mi = multiset(ti);
        let wi: f64 = ti.iter().map(|&i| weights[i]).product();
        for tj in &tuples {
            if multiset(tj) == mi {
                let wj: f64 = tj.iter().map(|&j| weights[j]).product();
                total += wi * wj;
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn table() -> PrimeTable {
        PrimeTable::sieve(200_000).unwrap()
    }

    fn sampler(sigma: f64, cutoff: u64, seed: u64, mode: TailMode) -> ModelSampler {
        let cfg = ModelConfig { sigma, prime_cutoff: cutoff, master_seed: seed, tail_mode: mode };
        ModelSampler::new(cfg, &table()).unwrap()
    }

    #[test]
    fn single_factor_bound() {
        let s = sampler(0.75, 2, 99, TailMode::Drop);
        let cap = -(1.0 - 2f64.powf(-0.75)).ln();
        for i in 0..200 {
            let v = s.sample_log_zeta(i);
            assert!(v.log_modulus.abs() <= cap + 1e-12, "bound broken: {}", v.log_modulus);
        }
    }

    #[test]
    fn determinism_bit_identical() {
        let a = sampler(0.75, 1000, 7, TailMode::GaussianCompensate);
        let b = sampler(0.75, 1000, 7, TailMode::GaussianCompensate);
        for i in [0u64, 1, 99, 12345] {
            assert_eq!(a.sample_log_zeta(i), b.sample_log_zeta(i));
            assert_eq!(a.sample_r(100.0, i).unwrap(), b.sample_r(100.0, i).unwrap());
        }
    }

    #[test]
    fn mean_log_modulus_near_zero() {
        // E log |zeta(sigma, X)| = 0; 3 standard errors at n = 2e5
        let s = sampler(0.75, 2_000, 42, TailMode::GaussianCompensate);
        let n = 200_000u64;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for i in 0..n {
            let v = s.sample_log_zeta(i).log_modulus;
            sum += v;
            sumsq += v * v;
        }
        let mean = sum / n as f64;
        let sd = (sumsq / n as f64 - mean * mean).sqrt();
        let se = sd / (n as f64).sqrt();
        assert!(mean.abs() < 3.0 * se, "mean {mean} vs 3 se {}", 3.0 * se);
    }

    #[test]
    fn second_moment_matches_zeta_of_two_sigma() {
        // E |zeta(sigma,X)|^2 = zeta(2 sigma) via exp(2 log_modulus)
        let sigma = 0.75;
        let s = sampler(sigma, 2_000, 1729, TailMode::GaussianCompensate);
        let n = 200_000u64;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for i in 0..n {
            let v = (2.0 * s.sample_log_modulus(i)).exp();
            sum += v;
            sumsq += v * v;
        }
        let mean = sum / n as f64;
        let se = ((sumsq / n as f64 - mean * mean) / n as f64).sqrt();
        let target = crate::zeta::zeta_real(2.0 * sigma);
        assert!(
            (mean - target).abs() < 3.0 * se,
            "mean {mean} target {target} se {se}"
        );
    }

    #[test]
    fn product_and_log_paths_agree() {
        let s = sampler(0.6, 5_000, 5, TailMode::GaussianCompensate);
        for i in 0..50 {
            let ls = s.sample_log_zeta(i);
            let z = s.sample_zeta_value(i);
            assert_relative_eq!(z.norm().ln(), ls.log_modulus, epsilon = 1e-9);
            // arguments agree modulo 2 pi
            let d = (ls.argument - z.arg()) / (2.0 * std::f64::consts::PI);
            assert!((d - d.round()).abs() < 1e-9, "arg mismatch {d}");
            assert_relative_eq!(s.sample_log_modulus(i), ls.log_modulus, epsilon = 1e-9);
        }
    }

    #[test]
    fn sample_r_single_prime_bound() {
        let s = sampler(0.75, 100, 3, TailMode::Drop);
        for i in 0..100 {
            let v = s.sample_r(2.0, i).unwrap();
            let modulus = (v.log_modulus.powi(2) + v.argument.powi(2)).sqrt();
            assert!(modulus <= 2f64.powf(-0.75) + 1e-12);
        }
    }

    #[test]
    fn sample_r_second_moment() {
        // E |R_Y|^2 = sum_{p^n <= Y} 1/(n^2 p^{2 n sigma})
        let sigma = 0.75;
        let y = 100.0;
        let s = sampler(sigma, 1_000, 77, TailMode::Drop);
        let n = 200_000u64;
        let (mut sum, mut sumsq) = (0.0, 0.0);
        for i in 0..n {
            let v = s.sample_r(y, i).unwrap();
            let m2 = v.log_modulus * v.log_modulus + v.argument * v.argument;
            sum += m2;
            sumsq += m2 * m2;
        }
        let mean = sum / n as f64;
        let se = ((sumsq / n as f64 - mean * mean) / n as f64).sqrt();
        // closed form by direct summation
        let mut target = 0.0;
        for pp in table().prime_powers(y).unwrap() {
            target += 1.0 / ((pp.n as f64).powi(2) * (pp.value as f64).powf(2.0 * sigma));
        }
        assert!((mean - target).abs() < 3.0 * se, "mean {mean} target {target} se {se}");
    }

    #[test]
    fn argument_symmetric_ks() {
        // two-sample KS between arguments and their negation
        let s = sampler(0.75, 2_000, 2024, TailMode::GaussianCompensate);
        let n = 100_000usize;
        let mut args: Vec<f64> = (0..n).map(|i| s.sample_log_zeta(i as u64).argument).collect();
        let mut neg: Vec<f64> = args.iter().map(|&a| -a).collect();
        args.sort_by(|a, b| a.partial_cmp(b).unwrap());
        neg.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (mut i, mut j) = (0usize, 0usize);
        let mut d: f64 = 0.0;
        while i < n && j < n {
            if args[i] <= neg[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 - j as f64).abs() / n as f64);
        }
        assert!(d < 3.0 / (n as f64).sqrt(), "KS distance {d}");
    }

    #[test]
    fn common_random_numbers_coupling() {
        // shared streams at sigma and sigma + h give O(h) differences
        let h = 1e-2;
        let t = table();
        let cs = CoupledSampler::new(&[0.75, 0.75 + h], 2_000, 9, TailMode::GaussianCompensate, &t)
            .unwrap();
        let n = 20_000u64;
        let mut out = [Complex64::new(0.0, 0.0); 2];
        let (mut sum, mut sumsq) = (0.0, 0.0);
        for i in 0..n {
            cs.sample_values(i, &mut out);
            let d = out[1].norm().ln() - out[0].norm().ln();
            sum += d;
            sumsq += d * d;
        }
        let mean = sum / n as f64;
        let sd = (sumsq / n as f64 - mean * mean).sqrt();
        assert!(sd < 10.0 * h, "coupled sd {sd} not O(h)");
    }

    #[test]
    fn oracle_k1_closed_form() {
        let primes = [2u64, 3, 5];
        let sigma = 0.8;
        let v = moment_oracle_small(&primes, sigma, 1).unwrap();
        let s2: f64 = primes.iter().map(|&p| (p as f64).powf(-2.0 * sigma)).sum();
        assert_relative_eq!(v, s2, max_relative = 1e-14);
    }

    #[test]
    fn oracle_k2_closed_form() {
        let primes = [2u64, 3, 5];
        let sigma = 0.75;
        let v = moment_oracle_small(&primes, sigma, 2).unwrap();
        let s2: f64 = primes.iter().map(|&p| (p as f64).powf(-2.0 * sigma)).sum();
        let s4: f64 = primes.iter().map(|&p| (p as f64).powf(-4.0 * sigma)).sum();
        assert_relative_eq!(v, 2.0 * s2 * s2 - s4, max_relative = 1e-12);
    }

    #[test]
    fn oracle_single_prime_k2() {
        let primes = [2u64];
        let sigma = 0.75;
        let v = moment_oracle_small(&primes, sigma, 2).unwrap();
        // E |X|^4 * 2^{-4 sigma} with |X| = 1: the pairing count collapses
        assert_relative_eq!(v, 2f64.powf(-4.0 * sigma), max_relative = 1e-14);
    }

    #[test]
    fn oracle_factorial_bound() {
        for &k in &[1u32, 2, 3] {
            for &sigma in &[0.6, 0.75, 0.9] {
                let primes = [2u64, 3, 5, 7, 11];
                let v = moment_oracle_small(&primes, sigma, k).unwrap();
                let s2: f64 = primes.iter().map(|&p| (p as f64).powf(-2.0 * sigma)).sum();
                let kfact: f64 = (1..=k as u64).product::<u64>() as f64;
                assert!(v <= kfact * s2.powi(k as i32) + 1e-12, "k={k} sigma={sigma}");
            }
        }
    }

    #[test]
    fn oracle_guards() {
        assert!(moment_oracle_small(&[2, 3, 5, 7, 11, 13, 17], 0.75, 2).is_err());
        assert!(moment_oracle_small(&[2, 3], 0.75, 4).is_err());
    }

    #[test]
    fn default_config_policy() {
        // near sigma = 1 the raw tail is already tiny: drop is kept
        let near_one = ModelConfig::default_for(1.0, 1);
        assert_eq!(near_one.tail_mode, TailMode::Drop);
        // at 0.75 the compensating Gaussian carries the tail
        let mid = ModelConfig::default_for(0.75, 1);
        assert_eq!(mid.tail_mode, TailMode::GaussianCompensate);
        assert!(mid.prime_cutoff >= MIN_DEFAULT_CUTOFF);
        // residual bound honored
        let t = PrimeTable::sieve(mid.prime_cutoff + 100).unwrap();
        let s = ModelSampler::new(mid, &t).unwrap();
        assert!(s.residual_bound() < 1e-4, "residual {}", s.residual_bound());
    }
}
