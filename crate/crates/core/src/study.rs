//! Monte Carlo convergence studies over coupled refinement levels.
//!
//! Every realization `i` draws one noise path. The spatial study solves on
//! each mesh with the first `M(h_k)` modes of that path; the temporal study
//! solves on one mesh with the path summed down to each step size. Adjacent
//! levels are then compared in the L² norm of the finer level.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use crate::cq_kernel::FractionalOrder;
use crate::error::{Error, Result};
use crate::fem::{discrete_l2_norm, prolong, Mesh1D, PiecewiseConstant};
use crate::noise::{coarsen_in_time, mode_count_for, sample_path, NoiseConfig};
use crate::parallel::map_realizations;
use crate::stepper::{Initial, Scheme, SchemeConfig, Source};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    Spatial,
    Temporal,
}

impl StudyKind {
    pub fn name(self) -> &'static str {
        match self {
            StudyKind::Spatial => "spatial",
            StudyKind::Temporal => "temporal",
        }
    }

    fn axis(self) -> &'static str {
        match self {
            StudyKind::Spatial => "h_k",
            StudyKind::Temporal => "tau_k",
        }
    }
}

pub const DEFAULT_SEED: u64 = 20_190_611;

/// One study. `levels` are exponents `k` of the refined axis (`h_k = 2^-k`,
/// or `tau_k = T 2^-k`) and `fixed` is the exponent of the other axis.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub kind: StudyKind,
    pub alpha: FractionalOrder,
    pub horizon: f64,
    pub sigma: f64,
    pub levels: Vec<u32>,
    pub fixed: u32,
    pub realizations: usize,
    pub master_seed: u64,
    /// `None` lets the pool pick; results do not depend on the count.
    pub workers: Option<usize>,
    pub initial: Initial,
    pub source: Source,
}

impl StudyConfig {
    /// Desk-scale spatial study of the reference problem.
    pub fn spatial(alpha: FractionalOrder) -> Self {
        Self::reference(StudyKind::Spatial, alpha, (2..=5).collect(), 12)
    }

    /// Desk-scale temporal study of the reference problem.
    pub fn temporal(alpha: FractionalOrder) -> Self {
        Self::reference(StudyKind::Temporal, alpha, (6..=9).collect(), 8)
    }

    fn reference(kind: StudyKind, alpha: FractionalOrder, levels: Vec<u32>, fixed: u32) -> Self {
        Self {
            kind,
            alpha,
            horizon: 1.0,
            sigma: 1.0,
            levels,
            fixed,
            realizations: 1000,
            master_seed: DEFAULT_SEED,
            workers: None,
            initial: Initial::Function(Arc::new(|x| x * (1.0 - x))),
            source: Source::PiecewiseConstant(PiecewiseConstant::sign_step()),
        }
    }

    /// Full-size setup: `tau = 2^-14` (spatial) or `h = 2^-10` (temporal)
    /// and 10^4 realizations.
    pub fn paper_scale(mut self) -> Self {
        self.fixed = match self.kind {
            StudyKind::Spatial => 14,
            StudyKind::Temporal => 10,
        };
        self.realizations = 10_000;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.len() < 2 {
            return Err(Error::Config("a study needs at least two levels".into()));
        }
        if self.levels.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(Error::Config("levels must refine by a factor of 2 each".into()));
        }
        if self.realizations == 0 {
            return Err(Error::Config("at least one realization is required".into()));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Config(format!("final time must be positive, got {}", self.horizon)));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::Config(format!("sigma must be non-negative, got {}", self.sigma)));
        }
        let (mesh_levels, time_levels): (Vec<u32>, Vec<u32>) = match self.kind {
            StudyKind::Spatial => (self.levels.clone(), vec![self.fixed]),
            StudyKind::Temporal => (vec![self.fixed], self.levels.clone()),
        };
        if mesh_levels.iter().any(|&k| !(1..=20).contains(&k)) {
            return Err(Error::Config("mesh exponents must lie in 1..=20".into()));
        }
        if time_levels.iter().any(|&k| k > 24) {
            return Err(Error::Config("time-step exponents must not exceed 24".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("worker count must be positive".into()));
        }
        Ok(())
    }

    fn scheme(&self, mesh: Mesh1D, steps: usize) -> SchemeConfig {
        SchemeConfig::new(self.alpha, mesh, self.horizon / steps as f64, steps)
            .with_sigma(self.sigma)
            .with_initial(self.initial.clone())
            .with_source(self.source.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelError {
    pub level: u32,
    pub resolution: f64,
    pub error: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoreticalOrders {
    pub spatial: f64,
    pub temporal: f64,
    /// The spatial bound carries a `ln(e + 1/h)^(1/2)` factor.
    pub spatial_log_factor: bool,
}

/// Rates of the error bound in 1D: spatial `1/alpha - 1/2` for
/// `alpha >= 1/2`, else `3/2`; temporal `1/2 - alpha/4`.
pub fn theoretical_orders(alpha: FractionalOrder) -> TheoreticalOrders {
    let a = alpha.value();
    let log = a >= 0.5;
    TheoreticalOrders {
        spatial: if log { 1.0 / a - 0.5 } else { 1.5 },
        temporal: 0.5 - a / 4.0,
        spatial_log_factor: log,
    }
}

/// Pairwise `log2(E_k / E_{k+1})` and their mean.
pub fn estimate_order(errors: &[f64]) -> Result<(Vec<f64>, f64)> {
    if errors.len() < 2 {
        return Err(Error::Config("order estimation needs at least two errors".into()));
    }
    if let Some(&bad) = errors.iter().find(|&&e| !(e > 0.0)) {
        return Err(Error::NonPositiveError(bad));
    }
    let pairwise: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let mean = pairwise.iter().sum::<f64>() / pairwise.len() as f64;
    Ok((pairwise, mean))
}

/// Mean and standard error of per-realization values, summed in order.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub config: StudyConfig,
    /// One entry per compared level (all but the coarsest).
    pub levels: Vec<LevelError>,
    /// `None` when some error is zero.
    pub pairwise_orders: Option<Vec<f64>>,
    pub mean_order: Option<f64>,
    pub theory: TheoreticalOrders,
    pub wall_time_secs: f64,
    pub warnings: Vec<String>,
}

impl ConvergenceReport {
    pub fn errors(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.error).collect()
    }

    pub fn theoretical_order(&self) -> f64 {
        match self.config.kind {
            StudyKind::Spatial => self.theory.spatial,
            StudyKind::Temporal => self.theory.temporal,
        }
    }

    pub fn log_annotation(&self) -> Option<&'static str> {
        (self.config.kind == StudyKind::Spatial && self.theory.spatial_log_factor)
            .then_some("bound includes ln(e + 1/h)^(1/2)")
    }

    /// `level,resolution,error,stderr,pairwise_order`, then a `mean` row.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("level,resolution,error,stderr,pairwise_order\n");
        for (i, l) in self.levels.iter().enumerate() {
            let order = match (&self.pairwise_orders, i) {
                (Some(p), i) if i > 0 => format!("{:.6}", p[i - 1]),
                _ => String::new(),
            };
            let _ = writeln!(s, "{},{:e},{:.6e},{:.6e},{}", l.level, l.resolution, l.error, l.stderr, order);
        }
        let mean = self.mean_order.map(|m| format!("{m:.6}")).unwrap_or_default();
        let _ = writeln!(s, "mean,,,,{mean}");
        s
    }

    /// Table with the observed mean order and the theoretical one in parentheses.
    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "| alpha \\ {} |", self.config.kind.axis());
        for l in &self.levels {
            let _ = write!(s, " 2^-{} |", l.level);
        }
        s.push_str(" order |\n|---|");
        for _ in &self.levels {
            s.push_str("---|");
        }
        s.push_str("---|\n");
        let _ = write!(s, "| alpha={} |", self.config.alpha.value());
        for l in &self.levels {
            let _ = write!(s, " {} |", sci(l.error, 4));
        }
        let observed = self.mean_order.map(|m| format!("{m:.3}")).unwrap_or_else(|| "n/a".into());
        let theory = match self.config.kind {
            StudyKind::Spatial => format!("{:.3}", self.theory.spatial),
            StudyKind::Temporal => format!("{:.4}", self.theory.temporal),
        };
        let _ = writeln!(s, " {observed} ({theory}) |");
        let _ = write!(s, "| stderr |");
        for l in &self.levels {
            let _ = write!(s, " {} |", sci(l.stderr, 1));
        }
        s.push_str(" |\n");
        if let Some(note) = self.log_annotation() {
            let _ = writeln!(s, "\nTheoretical spatial {note}.");
        }
        s
    }

    pub fn to_manifest(&self) -> String {
        let c = &self.config;
        let levels: Vec<String> = c.levels.iter().map(|k| k.to_string()).collect();
        let mut s = String::new();
        let _ = writeln!(s, "crate = {} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "kind = {}", c.kind.name());
        let _ = writeln!(s, "alpha = {}", c.alpha.value());
        let _ = writeln!(s, "final_time = {}", c.horizon);
        let _ = writeln!(s, "sigma = {}", c.sigma);
        let _ = writeln!(s, "levels = {}", levels.join(","));
        let _ = writeln!(s, "fixed_exponent = {}", c.fixed);
        let _ = writeln!(s, "realizations = {}", c.realizations);
        let _ = writeln!(s, "seed = {}", c.master_seed);
        let _ = writeln!(s, "workers = {}", c.workers.map(|w| w.to_string()).unwrap_or_else(|| "auto".into()));
        let _ = writeln!(s, "initial = {:?}", c.initial);
        let _ = writeln!(s, "source = {:?}", c.source);
        let _ = writeln!(s, "parallel_build = {}", crate::parallel::is_parallel());
        let _ = writeln!(s, "wall_time_secs = {:.3}", self.wall_time_secs);
        for w in &self.warnings {
            let _ = writeln!(s, "warning = {w}");
        }
        s
    }

    /// Writes `<stem>.csv`, `<stem>.md` and `<stem>.manifest.txt` into `dir`.
    pub fn write_to_dir(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let stem = format!("{}_alpha{}", self.config.kind.name(), self.config.alpha.value());
        let files = [
            (format!("{stem}.csv"), self.to_csv()),
            (format!("{stem}.md"), self.to_markdown()),
            (format!("{stem}.manifest.txt"), self.to_manifest()),
        ];
        let mut written = Vec::new();
        for (name, body) in files {
            let p = dir.join(name);
            std::fs::write(&p, body)?;
            written.push(p);
        }
        Ok(written)
    }
}

/// `1.1669e-02` style.
fn sci(v: f64, digits: usize) -> String {
    let s = format!("{v:.digits$e}");
    match s.split_once('e') {
        Some((m, e)) => {
            let (sign, exp) = match e.strip_prefix('-') {
                Some(rest) => ('-', rest),
                None => ('+', e),
            };
            format!("{m}e{sign}{exp:0>2}")
        }
        None => s,
    }
}

fn aggregate(config: &StudyConfig, per_realization: Vec<Vec<f64>>, resolution: impl Fn(u32) -> f64) -> Result<Vec<LevelError>> {
    let compared = &config.levels[1..];
    let mut out = Vec::with_capacity(compared.len());
    for (idx, &level) in compared.iter().enumerate() {
        let values: Vec<f64> = per_realization.iter().map(|r| r[idx]).collect();
        let (error, stderr) = mean_and_stderr(&values);
        if !error.is_finite() || !stderr.is_finite() {
            return Err(Error::NonFinite(format!("error at level {level}")));
        }
        out.push(LevelError { level, resolution: resolution(level), error, stderr });
    }
    Ok(out)
}

fn finish(config: &StudyConfig, levels: Vec<LevelError>, start: Instant, warnings: Vec<String>) -> ConvergenceReport {
    let errors: Vec<f64> = levels.iter().map(|l| l.error).collect();
    let (pairwise_orders, mean_order) = match estimate_order(&errors) {
        Ok((p, m)) => (Some(p), Some(m)),
        Err(_) => (None, None),
    };
    ConvergenceReport {
        config: config.clone(),
        levels,
        pairwise_orders,
        mean_order,
        theory: theoretical_orders(config.alpha),
        wall_time_secs: start.elapsed().as_secs_f64(),
        warnings,
    }
}

/// Error between adjacent meshes at the final time, averaged over realizations.
pub fn spatial_study(config: &StudyConfig) -> Result<ConvergenceReport> {
    if config.kind != StudyKind::Spatial {
        return Err(Error::Config("spatial_study needs a spatial config".into()));
    }
    config.validate()?;
    let start = Instant::now();
    let steps = 1usize << config.fixed;
    let tau = config.horizon / steps as f64;
    let meshes: Vec<Mesh1D> = config.levels.iter().map(|&k| Mesh1D::dyadic(k)).collect::<Result<_>>()?;
    let finest = *meshes.last().expect("validated");
    let mut warnings = Vec::new();
    if tau > finest.h() * finest.h() {
        warnings.push(format!(
            "time step {tau:e} exceeds h^2 = {:e} on the finest mesh; temporal error may dominate",
            finest.h() * finest.h()
        ));
    }
    let schemes: Vec<Scheme> = meshes.iter().map(|m| Scheme::new(&config.scheme(*m, steps))).collect::<Result<_>>()?;
    let noisy = config.sigma > 0.0;

    let per_realization = map_realizations(config.realizations, config.workers, |i| {
        let path = if noisy {
            Some(sample_path(&NoiseConfig::for_mesh(&finest, steps, config.horizon, config.master_seed, i)?))
        } else {
            None
        };
        let mut prev: Option<Vec<f64>> = None;
        let mut errs = Vec::with_capacity(schemes.len() - 1);
        for (k, scheme) in schemes.iter().enumerate() {
            let local = match &path {
                Some(p) => Some(p.truncate_modes(mode_count_for(&meshes[k]))?),
                None => None,
            };
            let psi = scheme.run(local.as_ref(), false)?.final_psi;
            if let Some(coarse) = prev {
                let fine_from_coarse = prolong(&coarse, &meshes[k - 1], &meshes[k])?;
                let diff: Vec<f64> = psi.iter().zip(&fine_from_coarse).map(|(a, b)| a - b).collect();
                errs.push(discrete_l2_norm(&diff, scheme.mass())?);
            }
            prev = Some(psi);
        }
        Ok(errs)
    })?;

    let levels = aggregate(config, per_realization, |k| (0.5f64).powi(k as i32))?;
    Ok(finish(config, levels, start, warnings))
}

/// Error between adjacent step sizes on one mesh, averaged over realizations.
pub fn temporal_study(config: &StudyConfig) -> Result<ConvergenceReport> {
    if config.kind != StudyKind::Temporal {
        return Err(Error::Config("temporal_study needs a temporal config".into()));
    }
    config.validate()?;
    let start = Instant::now();
    let mesh = Mesh1D::dyadic(config.fixed)?;
    let finest_level = *config.levels.last().expect("validated");
    let finest_steps = 1usize << finest_level;
    let schemes: Vec<Scheme> = config
        .levels
        .iter()
        .map(|&k| Scheme::new(&config.scheme(mesh, 1usize << k)))
        .collect::<Result<_>>()?;
    let noisy = config.sigma > 0.0;

    let per_realization = map_realizations(config.realizations, config.workers, |i| {
        let fine_path = if noisy {
            Some(sample_path(&NoiseConfig::for_mesh(&mesh, finest_steps, config.horizon, config.master_seed, i)?))
        } else {
            None
        };
        let mut prev: Option<Vec<f64>> = None;
        let mut errs = Vec::with_capacity(schemes.len() - 1);
        for (scheme, &k) in schemes.iter().zip(&config.levels) {
            let local = match &fine_path {
                Some(p) => Some(coarsen_in_time(p, 1usize << (finest_level - k))?),
                None => None,
            };
            let psi = scheme.run(local.as_ref(), false)?.final_psi;
            if let Some(coarse) = prev {
                let diff: Vec<f64> = psi.iter().zip(&coarse).map(|(a, b)| a - b).collect();
                errs.push(discrete_l2_norm(&diff, scheme.mass())?);
            }
            prev = Some(psi);
        }
        Ok(errs)
    })?;

    let horizon = config.horizon;
    let levels = aggregate(config, per_realization, |k| horizon * (0.5f64).powi(k as i32))?;
    Ok(finish(config, levels, start, Vec::new()))
}

/// Dispatches on `config.kind`.
pub fn run_study(config: &StudyConfig) -> Result<ConvergenceReport> {
    match config.kind {
        StudyKind::Spatial => spatial_study(config),
        StudyKind::Temporal => temporal_study(config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::l2_project;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn order_estimation_examples() {
        let (p, m) = estimate_order(&[4e-2, 2e-2, 1e-2]).unwrap();
        assert!(p.iter().all(|v| (v - 1.0).abs() < 1e-14));
        assert!((m - 1.0).abs() < 1e-14);
        let (_, m) = estimate_order(&[1.1669e-2, 3.9124e-3, 1.3519e-3]).unwrap();
        assert!((m - 1.555).abs() < 5e-4, "{m}");
        let (p, m) = estimate_order(&[8.0, 1.0]).unwrap();
        assert_eq!(p, vec![3.0]);
        assert_eq!(m, 3.0);
        assert!(matches!(estimate_order(&[1.0, 0.0]), Err(Error::NonPositiveError(_))));
        assert!(estimate_order(&[1.0]).is_err());
    }

    #[test]
    fn reported_table_orders() {
        // observed orders of the reference tables from their error columns
        let rows: [([f64; 3], f64); 6] = [
            ([1.1669e-02, 3.9124e-03, 1.3519e-03], 1.555),
            ([2.4353e-02, 1.2987e-02, 6.6322e-03], 0.938),
            ([8.3694e-02, 6.7186e-02, 5.4196e-02], 0.314),
            ([2.2103e-03, 1.7275e-03, 1.3454e-03], 0.359),
            ([1.5613e-02, 1.2621e-02, 1.0177e-02], 0.309),
            ([5.0056e-02, 4.4012e-02, 3.8869e-02], 0.183),
        ];
        for (errs, want) in rows {
            let (_, m) = estimate_order(&errs).unwrap();
            assert!((m - want).abs() < 1.5e-3, "{m} vs {want}");
        }
    }

    #[test]
    fn theory_examples() {
        let t = theoretical_orders(order(0.25));
        assert_eq!((t.spatial, t.temporal), (1.5, 0.4375));
        assert!(!t.spatial_log_factor);
        let t = theoretical_orders(order(0.75));
        assert!((t.spatial - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(t.temporal, 0.3125);
        assert!(t.spatial_log_factor);
        let t = theoretical_orders(order(1.25));
        assert!((t.spatial - 0.3).abs() < 1e-15);
        assert_eq!(t.temporal, 0.1875);
        assert_eq!(theoretical_orders(order(0.5)).spatial, 1.5);
        assert_eq!(theoretical_orders(order(0.49999)).spatial, 1.5);
        assert!((theoretical_orders(order(0.5 + 1e-9)).spatial - 1.5).abs() < 1e-8);
    }

    #[test]
    fn mean_of_norms_not_rms() {
        let (m, se) = mean_and_stderr(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - 1.0).abs() < 1e-15);
        // root-mean-square would give sqrt(5)
        assert!((m - 5.0f64.sqrt()).abs() > 0.1);
        assert_eq!(mean_and_stderr(&[0.7]), (0.7, 0.0));
    }

    #[test]
    fn config_validation() {
        let mut c = StudyConfig::spatial(order(0.5));
        c.validate().unwrap();
        c.levels = vec![3];
        assert!(c.validate().is_err());
        c.levels = vec![2, 4];
        assert!(c.validate().is_err());
        c.levels = vec![2, 3];
        c.realizations = 0;
        assert!(c.validate().is_err());
        let p = StudyConfig::temporal(order(0.5)).paper_scale();
        assert_eq!((p.fixed, p.realizations), (10, 10_000));
        assert!(spatial_study(&p).is_err());
    }

    #[test]
    fn deterministic_spatial_is_projection_difference() {
        let mut c = StudyConfig::spatial(order(0.5));
        c.sigma = 0.0;
        c.source = Source::Zero;
        c.fixed = 4;
        c.realizations = 3;
        let r = spatial_study(&c).unwrap();
        for (idx, l) in r.levels.iter().enumerate() {
            let fine = Mesh1D::dyadic(c.levels[idx + 1]).unwrap();
            let coarse = Mesh1D::dyadic(c.levels[idx]).unwrap();
            let pf = l2_project(|x| x * (1.0 - x), &fine).unwrap();
            let pc = prolong(&l2_project(|x| x * (1.0 - x), &coarse).unwrap(), &coarse, &fine).unwrap();
            let d: Vec<f64> = pf.iter().zip(&pc).map(|(a, b)| a - b).collect();
            let want = discrete_l2_norm(&d, &crate::fem::assemble_mass(&fine)).unwrap();
            assert!((l.error - want).abs() <= 1e-13);
            assert!(l.stderr < 1e-13);
        }
    }

    #[test]
    fn deterministic_temporal_is_zero() {
        let mut c = StudyConfig::temporal(order(0.75));
        c.sigma = 0.0;
        c.source = Source::Zero;
        c.fixed = 4;
        c.levels = vec![3, 4, 5];
        c.realizations = 2;
        let r = temporal_study(&c).unwrap();
        assert!(r.levels.iter().all(|l| l.error == 0.0));
        assert!(r.mean_order.is_none());
        assert!(r.to_csv().ends_with("mean,,,,\n"));
    }

    #[test]
    fn csv_and_markdown_layout() {
        let mut c = StudyConfig::spatial(order(0.25));
        c.fixed = 6;
        c.levels = vec![2, 3, 4];
        c.realizations = 4;
        let r = spatial_study(&c).unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "level,resolution,error,stderr,pairwise_order");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("3,1.25e-1,"));
        assert!(lines[1].ends_with(','));
        assert!(lines[3].starts_with("mean,,,,"));
        let md = r.to_markdown();
        assert!(md.contains("| alpha \\ h_k | 2^-3 | 2^-4 |"));
        assert!(md.contains("(1.500)"));
        assert!(!r.warnings.is_empty());
        assert_eq!(sci(1.1669e-2, 4), "1.1669e-02");
        assert_eq!(sci(12.5, 1), "1.2e+01");
    }

    #[test]
    fn repeat_runs_are_identical() {
        let mut c = StudyConfig::temporal(order(1.25));
        c.fixed = 4;
        c.levels = vec![3, 4, 5];
        c.realizations = 1;
        let a = temporal_study(&c).unwrap();
        let b = temporal_study(&c).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
    }
}
