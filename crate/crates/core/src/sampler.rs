//! Synthetic quadrature records drawn from a two-mode covariance.

use std::io::{Read, Write};
use std::path::Path;

use nalgebra::Vector4;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::covariance::TwoModeCovariance;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 4] = ["x_a", "p_a", "x_b", "p_b"];
pub const GENERATOR: &str = "chacha8";

/// Simultaneous (x_A, p_A, x_B, p_B) draws in shot-noise units.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSamples {
    pub seed: Option<u64>,
    pub rows: Vec<[f64; 4]>,
}

impl QuadratureSamples {
    pub fn new(rows: Vec<[f64; 4]>, seed: Option<u64>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "need at least 2 samples, got {}",
                rows.len()
            )));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::domain("samples contain non-finite values"));
        }
        Ok(Self { seed, rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(CSV_HEADER)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let header = r.headers()?.clone();
        if header.iter().map(str::trim).ne(CSV_HEADER) {
            return Err(Error::domain(format!(
                "sample file header must be `{}`",
                CSV_HEADER.join(",")
            )));
        }
        let mut rows = Vec::new();
        for (line, record) in r.records().enumerate() {
            let record = record?;
            let mut row = [0.0; 4];
            for (k, field) in record.iter().enumerate().take(4) {
                row[k] = field.trim().parse().map_err(|_| {
                    Error::domain(format!("row {}: cannot parse `{field}` as a number", line + 1))
                })?;
            }
            if record.len() != 4 {
                return Err(Error::domain(format!("row {}: expected 4 columns", line + 1)));
            }
            rows.push(row);
        }
        Self::new(rows, None)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let mut samples = Self::read_csv(std::io::BufReader::new(file))?;
        if let Ok(text) = std::fs::read_to_string(sidecar_path(path)) {
            if let Ok(meta) = serde_json::from_str::<SampleMetadata>(&text) {
                samples.seed = Some(meta.seed);
            }
        }
        Ok(samples)
    }
}

/// Sidecar written next to a sample CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMetadata {
    pub n: usize,
    pub seed: u64,
    pub generator: String,
    pub state: TwoModeCovariance,
    pub version: String,
}

/// `samples.csv` → `samples.csv.json`.
pub fn sidecar_path(csv_path: &Path) -> std::path::PathBuf {
    let mut name = csv_path.as_os_str().to_owned();
    name.push(".json");
    name.into()
}

/// Zero-mean Gaussian draws with covariance `sigma`, generated as L·z with L
/// the Cholesky factor and z standard normal from a seeded ChaCha8 stream.
pub fn sample(sigma: &TwoModeCovariance, n: usize, seed: u64) -> Result<QuadratureSamples> {
    if n < 2 {
        return Err(Error::InsufficientData(format!("need at least 2 samples, got {n}")));
    }
    let chol = sigma
        .to_matrix()
        .cholesky()
        .ok_or(Error::FactorizationFailure)?;
    let l = chol.l();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| {
            let z = Vector4::from_fn(|_, _| StandardNormal.sample(&mut rng));
            let x = l * z;
            [x[0], x[1], x[2], x[3]]
        })
        .collect();
    Ok(QuadratureSamples {
        seed: Some(seed),
        rows,
    })
}

/// Beamsplitter on recorded mode-B values: x_B → √T x_B + √(1−T) v with fresh
/// vacuum draws v.
pub fn attenuate_samples_mode_b(samples: &QuadratureSamples, transmittance: f64, seed: u64) -> Result<QuadratureSamples> {
    if !(0.0..=1.0).contains(&transmittance) {
        return Err(Error::domain(format!(
            "transmittance must lie in [0, 1], got {transmittance}"
        )));
    }
    let keep = transmittance.sqrt();
    let leak = (1.0 - transmittance).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = samples
        .rows
        .iter()
        .map(|row| {
            let vx: f64 = StandardNormal.sample(&mut rng);
            let vp: f64 = StandardNormal.sample(&mut rng);
            [row[0], row[1], keep * row[2] + leak * vx, keep * row[3] + leak * vp]
        })
        .collect();
    QuadratureSamples::new(rows, samples.seed)
}
