//! Monte Carlo estimation of the decoder error probability and parameter
//! sweeps over SNR or array size.
//!
//! Trial `t` draws its grid index and its noise from streams derived from
//! `(seed, t)`, and error counts are summed as integers, so every result is a
//! pure function of the inputs regardless of the number of worker threads.
//! All points of a sweep share the seed.

use std::fmt::Write as _;
use std::io::{self, Write};

use rand::Rng;
use rayon::prelude::*;

use crate::channel::{
    snr_to_sigma, synthesize_into, trial_rng, ChannelConfig, MatchedFilter, Stream,
};
use crate::codebook::{min_distance, pe_upper_bound, Codebook};
use crate::error::{Error, Result};
use crate::gf::is_prime_power;
use crate::rulers::{bose_chowla, ula, Ruler};

pub const DEFAULT_TRIALS: u64 = 10_000;

/// Empirical error probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeEstimate {
    pub pe: f64,
    pub stderr: f64,
    pub errors: u64,
    pub trials: u64,
}

impl PeEstimate {
    pub fn from_counts(errors: u64, trials: u64) -> Self {
        let pe = errors as f64 / trials as f64;
        let stderr = (pe * (1.0 - pe) / trials as f64).sqrt();
        Self {
            pe,
            stderr,
            errors,
            trials,
        }
    }

    /// One-sided 95% upper limit `1 - 0.05^(1/trials)` for rows with no errors.
    pub fn upper95(&self) -> Option<f64> {
        (self.errors == 0).then(|| 1.0 - 0.05f64.powf(1.0 / self.trials as f64))
    }
}

/// Error rate of the minimum-distance decoder at `snr_db`, with the default
/// source amplitude and a grid index drawn uniformly per trial.
pub fn estimate_pe(cb: &Codebook, snr_db: f64, trials: u64, seed: u64) -> Result<PeEstimate> {
    estimate_pe_with(cb, &ChannelConfig::from_snr_db(snr_db, seed)?, trials)
}

pub fn estimate_pe_with(cb: &Codebook, cfg: &ChannelConfig, trials: u64) -> Result<PeEstimate> {
    if trials == 0 {
        return Err(Error::InvalidConfig(
            "at least one trial is required".into(),
        ));
    }
    let filter = MatchedFilter::new(cb);
    let grid = cb.grid_size();
    let errors = (0..trials)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(cb.sensors()),
            |y, t| {
                let n = trial_rng(cfg.seed(), t, Stream::GridIndex).random_range(0..grid);
                synthesize_into(cb, n, cfg, t, y);
                crate::channel::argmax(&filter.scores_unchecked(y)) != n
            },
        )
        .filter(|&wrong| wrong)
        .count() as u64;
    Ok(PeEstimate::from_counts(errors, trials))
}

/// Array geometry for a fixed-size sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    BoseChowla {
        q: u64,
    },
    /// `n` defaults to `M^2 - 1`.
    Ula {
        m: u64,
        n: Option<u64>,
    },
    Custom(Ruler),
}

impl Geometry {
    pub fn ruler(&self) -> Result<Ruler> {
        match self {
            Geometry::BoseChowla { q } => bose_chowla(*q),
            Geometry::Ula { m, n } => {
                let n =
                    match n {
                        Some(n) => *n,
                        None => m.checked_mul(*m).map(|s| s.saturating_sub(1)).ok_or(
                            Error::TooLarge {
                                what: "M^2",
                                value: *m,
                            },
                        )?,
                    };
                ula(*m, n)
            }
            Geometry::Custom(r) => Ok(r.clone()),
        }
    }
}

/// Geometry family for sweeps over `M` with `N = M^2 - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    BoseChowla,
    Ula,
}

/// Shared Monte Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarlo {
    pub trials: u64,
    pub seed: u64,
    /// Worker thread cap; `None` uses the global pool. Does not affect results.
    pub threads: Option<usize>,
    /// Skip simulation and report only distances and bounds.
    pub bound_only: bool,
}

impl Default for MonteCarlo {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            seed: 0,
            threads: None,
            bound_only: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnrSweepSpec {
    pub geometry: Geometry,
    pub snr_db: Vec<f64>,
    pub mc: MonteCarlo,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MSweepSpec {
    pub family: Family,
    pub m_min: u64,
    pub m_max: u64,
    pub snr_db: f64,
    pub mc: MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Snr,
    M,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub m: u64,
    pub n: u64,
    pub dmin: f64,
    /// Union bound clamped to 1.
    pub bound: f64,
    /// Absent in bound-only sweeps.
    pub pe: Option<PeEstimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
    /// Swept values with no realizable geometry (non-prime-power `M` for Bose-Chowla).
    pub skipped: Vec<u64>,
}

/// `min, min + step, ...` up to and including `max` (within rounding).
pub fn snr_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) || step <= 0.0 || max < min {
        return Err(Error::InvalidConfig(format!(
            "SNR grid needs finite min <= max and step > 0, got {min}..{max} step {step}"
        )));
    }
    let count = ((max - min) / step + 1e-9).floor() as u64 + 1;
    Ok((0..count).map(|i| min + i as f64 * step).collect())
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::InvalidConfig(
            "thread count must be at least 1".into(),
        )),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::InvalidConfig(format!("cannot start thread pool: {e}"))),
    }
}

fn check_mc(mc: &MonteCarlo) -> Result<()> {
    if mc.trials == 0 {
        return Err(Error::InvalidConfig(
            "at least one trial is required".into(),
        ));
    }
    Ok(())
}

fn evaluate_point(
    ruler: &Ruler,
    dmin: f64,
    cb: Option<&Codebook>,
    snr_db: f64,
    mc: &MonteCarlo,
) -> Result<SweepRow> {
    if !snr_db.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "sweep SNR {snr_db} is not finite"
        )));
    }
    let m = ruler.len() as u64;
    let n = ruler.modulus();
    let bound = pe_upper_bound(m, n, snr_to_sigma(snr_db), dmin);
    let pe = match cb {
        Some(cb) => Some(estimate_pe(cb, snr_db, mc.trials, mc.seed)?),
        None => None,
    };
    Ok(SweepRow {
        snr_db,
        m,
        n,
        dmin,
        bound,
        pe,
    })
}

/// One row per SNR point for a fixed geometry; the minimum distance is computed once.
pub fn sweep_snr(spec: &SnrSweepSpec) -> Result<SweepResult> {
    check_mc(&spec.mc)?;
    let ruler = spec.geometry.ruler()?;
    let dmin = min_distance(&ruler).dmin;
    let cb = if spec.mc.bound_only {
        None
    } else {
        Some(Codebook::new(ruler.clone())?)
    };
    let rows = in_pool(spec.mc.threads, || {
        spec.snr_db
            .iter()
            .map(|&snr| evaluate_point(&ruler, dmin, cb.as_ref(), snr, &spec.mc))
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(SweepResult {
        axis: SweepAxis::Snr,
        rows,
        skipped: Vec::new(),
    })
}

/// One row per realizable `M` in `m_min..=m_max` with `N = M^2 - 1`, at a fixed SNR.
pub fn sweep_m(spec: &MSweepSpec) -> Result<SweepResult> {
    check_mc(&spec.mc)?;
    if spec.m_min > spec.m_max {
        return Err(Error::InvalidConfig(format!(
            "empty M range {}..={}",
            spec.m_min, spec.m_max
        )));
    }
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    in_pool(spec.mc.threads, || -> Result<()> {
        for m in spec.m_min..=spec.m_max {
            let ruler = match spec.family {
                Family::BoseChowla if is_prime_power(m) => bose_chowla(m)?,
                Family::Ula if m >= 2 => Geometry::Ula { m, n: None }.ruler()?,
                _ => {
                    skipped.push(m);
                    continue;
                }
            };
            let dmin = min_distance(&ruler).dmin;
            let cb = if spec.mc.bound_only {
                None
            } else {
                Some(Codebook::new(ruler.clone())?)
            };
            rows.push(evaluate_point(
                &ruler,
                dmin,
                cb.as_ref(),
                spec.snr_db,
                &spec.mc,
            )?);
        }
        Ok(())
    })??;
    Ok(SweepResult {
        axis: SweepAxis::M,
        rows,
        skipped,
    })
}

/// Formats with 12 significant digits, fixed notation for exponents in
/// `-4..12` and `<mantissa>e<exp>` otherwise; trailing zeros are dropped.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl SweepResult {
    pub fn bound_only(&self) -> bool {
        self.rows.iter().all(|r| r.pe.is_none())
    }

    pub fn header(&self) -> &'static str {
        match (self.axis, self.bound_only()) {
            (SweepAxis::Snr, false) => "snr_db,dmin,pe,stderr,bound,errors,trials",
            (SweepAxis::M, false) => "M,N,dmin,pe,stderr,bound,errors,trials",
            (SweepAxis::Snr, true) => "snr_db,dmin,bound",
            (SweepAxis::M, true) => "M,N,dmin,bound",
        }
    }

    /// CSV with a header row and `\n` line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(self.header());
        out.push('\n');
        for row in &self.rows {
            let lead = match self.axis {
                SweepAxis::Snr => format_sig(row.snr_db),
                SweepAxis::M => format!("{},{}", row.m, row.n),
            };
            let _ = match row.pe {
                Some(pe) => writeln!(
                    out,
                    "{lead},{},{},{},{},{},{}",
                    format_sig(row.dmin),
                    format_sig(pe.pe),
                    format_sig(pe.stderr),
                    format_sig(row.bound),
                    pe.errors,
                    pe.trials
                ),
                None => writeln!(
                    out,
                    "{lead},{},{}",
                    format_sig(row.dmin),
                    format_sig(row.bound)
                ),
            };
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}
