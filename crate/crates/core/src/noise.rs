//! Truncated cylindrical Wiener process: independent Brownian increments for
//! the sine modes `1..=M`.
//!
//! Mode `j` of realization `r` draws from its own ChaCha stream, keyed by
//! `(master_seed, r)` with stream id `j`. Paths are therefore reproducible
//! under any scheduling, and growing `M` or `N` only appends draws.

use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_step, Error, Result};
use crate::fem::Mesh1D;

/// `floor(1/h) + 1`, the number of noise modes kept on a mesh of size `h`.
pub fn mode_count(h: f64) -> usize {
    (1.0 / h).floor() as usize + 1
}

/// [`mode_count`] for a mesh, without going through floating point.
pub fn mode_count_for(mesh: &Mesh1D) -> usize {
    mesh.num_elements() + 1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    pub num_modes: usize,
    pub num_steps: usize,
    pub tau: f64,
    pub master_seed: u64,
    pub realization_index: u64,
}

impl NoiseConfig {
    pub fn new(num_modes: usize, num_steps: usize, tau: f64, master_seed: u64, realization_index: u64) -> Result<Self> {
        check_step(tau)?;
        if num_modes == 0 {
            return Err(Error::Config("noise needs at least one mode".into()));
        }
        Ok(Self { num_modes, num_steps, tau, master_seed, realization_index })
    }

    /// Modes tied to `mesh`, `num_steps` uniform steps over `[0, horizon]`.
    pub fn for_mesh(mesh: &Mesh1D, num_steps: usize, horizon: f64, master_seed: u64, realization_index: u64) -> Result<Self> {
        if num_steps == 0 {
            return Err(Error::Config("noise needs at least one time step".into()));
        }
        Self::new(mode_count_for(mesh), num_steps, horizon / num_steps as f64, master_seed, realization_index)
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for mode `j` (1-based) of one realization.
pub fn mode_stream(master_seed: u64, realization_index: u64, mode: usize) -> ChaCha8Rng {
    let mut mix = realization_index;
    let mut state = master_seed ^ splitmix64(&mut mix);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(mode as u64);
    rng
}

/// Brownian increments, row-major `num_modes x num_steps`; entry `(j, n)` is
/// `W_{j+1}(t_{n+1}) - W_{j+1}(t_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisePath {
    config: NoiseConfig,
    increments: Vec<f64>,
}

impl NoisePath {
    pub fn from_increments(config: NoiseConfig, increments: Vec<f64>) -> Result<Self> {
        crate::error::check_len(config.num_modes * config.num_steps, increments.len())?;
        if let Some(bad) = increments.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("noise increment {bad}")));
        }
        Ok(Self { config, increments })
    }

    pub fn config(&self) -> &NoiseConfig {
        &self.config
    }

    pub fn num_modes(&self) -> usize {
        self.config.num_modes
    }

    pub fn num_steps(&self) -> usize {
        self.config.num_steps
    }

    pub fn tau(&self) -> f64 {
        self.config.tau
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    /// Increments of mode `j` (1-based) over all steps.
    pub fn mode(&self, j: usize) -> &[f64] {
        let n = self.config.num_steps;
        &self.increments[(j - 1) * n..j * n]
    }

    /// Increments of all modes at step `n` (1-based).
    pub fn column(&self, n: usize) -> Vec<f64> {
        let steps = self.config.num_steps;
        (0..self.config.num_modes).map(|j| self.increments[j * steps + n - 1]).collect()
    }

    /// The same path restricted to modes `1..=modes`.
    pub fn truncate_modes(&self, modes: usize) -> Result<Self> {
        if modes == 0 || modes > self.config.num_modes {
            return Err(Error::Config(format!(
                "cannot keep {modes} of {} noise modes",
                self.config.num_modes
            )));
        }
        let config = NoiseConfig { num_modes: modes, ..self.config };
        Ok(Self { config, increments: self.increments[..modes * self.config.num_steps].to_vec() })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { config: self.config, increments: self.increments.iter().map(|v| c * v).collect() }
    }
}

/// Draws a path; every entry is `sqrt(tau) * Z` with `Z` standard normal.
pub fn sample_path(config: &NoiseConfig) -> NoisePath {
    let sd = config.tau.sqrt();
    let mut increments = Vec::with_capacity(config.num_modes * config.num_steps);
    for j in 1..=config.num_modes {
        let mut rng = mode_stream(config.master_seed, config.realization_index, j);
        increments.extend((0..config.num_steps).map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sd * z
        }));
    }
    NoisePath { config: *config, increments }
}

/// Sums `factor` consecutive increments, giving the path at step `factor * tau`.
pub fn coarsen_in_time(path: &NoisePath, factor: usize) -> Result<NoisePath> {
    let steps = path.num_steps();
    if factor == 0 || !steps.is_multiple_of(factor) {
        return Err(Error::NonDivisible { factor, steps });
    }
    let coarse_steps = steps / factor;
    let increments = path
        .increments
        .chunks_exact(factor)
        .map(|c| c.iter().sum::<f64>())
        .collect::<Vec<_>>();
    debug_assert_eq!(increments.len(), path.num_modes() * coarse_steps);
    let config = NoiseConfig { num_steps: coarse_steps, tau: path.tau() * factor as f64, ..path.config };
    Ok(NoisePath { config, increments })
}

const MAGIC: &[u8; 8] = b"CQSPDEWN";
const FORMAT_VERSION: u32 = 1;

/// Little-endian dump: magic, version (u32), M (u64), N (u64), tau (f64),
/// seed (u64), realization (u64), then `M * N` row-major f64 increments.
pub fn write_path<W: Write>(path: &NoisePath, mut out: W) -> Result<()> {
    let c = &path.config;
    out.write_all(MAGIC)?;
    out.write_all(&FORMAT_VERSION.to_le_bytes())?;
    out.write_all(&(c.num_modes as u64).to_le_bytes())?;
    out.write_all(&(c.num_steps as u64).to_le_bytes())?;
    out.write_all(&c.tau.to_le_bytes())?;
    out.write_all(&c.master_seed.to_le_bytes())?;
    out.write_all(&c.realization_index.to_le_bytes())?;
    for v in &path.increments {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_path<R: Read>(mut input: R) -> Result<NoisePath> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let mut b4 = [0u8; 4];
    input.read_exact(&mut b4)?;
    let version = u32::from_le_bytes(b4);
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let mut b8 = [0u8; 8];
    let mut next = |input: &mut R| -> Result<[u8; 8]> {
        input.read_exact(&mut b8)?;
        Ok(b8)
    };
    let modes = u64::from_le_bytes(next(&mut input)?) as usize;
    let steps = u64::from_le_bytes(next(&mut input)?) as usize;
    let tau = f64::from_le_bytes(next(&mut input)?);
    let seed = u64::from_le_bytes(next(&mut input)?);
    let realization = u64::from_le_bytes(next(&mut input)?);
    let config = NoiseConfig::new(modes, steps, tau, seed, realization)?;
    let count = modes
        .checked_mul(steps)
        .ok_or_else(|| Error::Format("header dimensions overflow".into()))?;
    let mut body = Vec::new();
    input.read_to_end(&mut body)?;
    if body.len() != count * 8 {
        return Err(Error::Format(format!("expected {} body bytes, found {}", count * 8, body.len())));
    }
    let increments = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    NoisePath::from_increments(config, increments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mode_count_examples() {
        assert_eq!(mode_count(0.125), 9);
        assert_eq!(mode_count(1.0 / 32.0), 33);
        assert_eq!(mode_count(1.0 / 3.0), 4);
        for k in 1..12 {
            let mesh = Mesh1D::dyadic(k).unwrap();
            assert_eq!(mode_count(mesh.h()), mode_count_for(&mesh));
            assert!(1.0 / mesh.h() <= mode_count_for(&mesh) as f64);
        }
    }

    #[test]
    fn sample_moments() {
        let tau = 0.01;
        let cfg = NoiseConfig::new(10, 10_000, tau, 99, 3).unwrap();
        let p = sample_path(&cfg);
        let n = p.increments().len() as f64;
        let mean = p.increments().iter().sum::<f64>() / n;
        let var = p.increments().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() <= 4.0 * tau.sqrt() / n.sqrt(), "mean {mean}");
        assert!((var / tau - 1.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn deterministic_and_extendable() {
        let a = sample_path(&NoiseConfig::new(5, 64, 0.1, 7, 11).unwrap());
        let b = sample_path(&NoiseConfig::new(5, 64, 0.1, 7, 11).unwrap());
        assert_eq!(a, b);
        let wide = sample_path(&NoiseConfig::new(9, 64, 0.1, 7, 11).unwrap());
        assert_eq!(wide.truncate_modes(5).unwrap().increments(), a.increments());
        let c = sample_path(&NoiseConfig::new(5, 64, 0.1, 7, 12).unwrap());
        assert_ne!(a.increments(), c.increments());
        // longer paths extend shorter ones when tau is held fixed
        let long = sample_path(&NoiseConfig::new(5, 128, 0.1, 7, 11).unwrap());
        for j in 1..=5 {
            assert_eq!(&long.mode(j)[..64], a.mode(j));
        }
        assert_eq!(a.column(3)[2], a.mode(3)[2]);
    }

    #[test]
    fn coarsen_examples() {
        let cfg = NoiseConfig::new(2, 4, 0.25, 0, 0).unwrap();
        let p = NoisePath::from_increments(cfg, vec![1.0, 2.0, 3.0, 4.0, 10.0, 20.0, 30.0, 40.0]).unwrap();
        assert_eq!(coarsen_in_time(&p, 1).unwrap(), p);
        let c = coarsen_in_time(&p, 2).unwrap();
        assert_eq!(c.increments(), &[3.0, 7.0, 30.0, 70.0]);
        assert_eq!(c.tau(), 0.5);
        assert_eq!(c.num_steps(), 2);
        assert!(matches!(coarsen_in_time(&p, 3), Err(Error::NonDivisible { factor: 3, steps: 4 })));
    }

    #[test]
    fn coarsened_variance() {
        let tau = 1e-3;
        let p = sample_path(&NoiseConfig::new(4, 50_000, tau, 5, 0).unwrap());
        let c = coarsen_in_time(&p, 2).unwrap();
        let n = c.increments().len() as f64;
        let var = c.increments().iter().map(|v| v * v).sum::<f64>() / n;
        assert!((var / (2.0 * tau) - 1.0).abs() < 0.05);
    }

    #[test]
    fn binary_round_trip_and_errors() {
        let p = sample_path(&NoiseConfig::new(3, 17, 0.5, 1234, 9).unwrap());
        let mut buf = Vec::new();
        write_path(&p, &mut buf).unwrap();
        assert_eq!(buf.len(), 8 + 4 + 5 * 8 + 3 * 17 * 8);
        assert_eq!(read_path(buf.as_slice()).unwrap(), p);
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(read_path(bad.as_slice()), Err(Error::Format(_))));
        assert!(read_path(&buf[..buf.len() - 1]).is_err());
    }

    proptest! {
        #[test]
        fn coarsening_composes(factor_a in 1usize..4, factor_b in 1usize..4, seed in any::<u64>()) {
            let steps = factor_a * factor_b * 6;
            let p = sample_path(&NoiseConfig::new(3, steps, 0.01, seed, 0).unwrap());
            let two = coarsen_in_time(&coarsen_in_time(&p, factor_a).unwrap(), factor_b).unwrap();
            let one = coarsen_in_time(&p, factor_a * factor_b).unwrap();
            for (a, b) in two.increments().iter().zip(one.increments()) {
                prop_assert!((a - b).abs() <= 1e-14);
            }
        }
    }
}
