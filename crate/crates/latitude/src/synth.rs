//! Planted-model data generation and the synthetic sweep harness.

use crate::baselines::{run_methods, EvalConfig, Method, MethodResult};
use crate::error::{Error, Result};
use crate::matrix::{matmul, maxtimes_product, DenseMatrix};
use crate::model::{alpha_matrix, mixed_product, MixedFactorization, ParamVectors};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthMode {
    /// Planted gate parameters, data from the mixed product.
    Mixed,
    /// Factors multiplied with the max-times product, parameters unused.
    PureSubtropical,
    /// Factors multiplied with the standard product, parameters unused.
    PureNmf,
    /// Standard product scaled by `1 - alpha`, without the subtropical term.
    AlphaScaledNmfOnly,
}

impl std::str::FromStr for SynthMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mixed" => Ok(Self::Mixed),
            "pure-subtropical" | "pure_subtropical" => Ok(Self::PureSubtropical),
            "pure-nmf" | "pure_nmf" => Ok(Self::PureNmf),
            "alpha-nmf" | "alpha_scaled_nmf_only" => Ok(Self::AlphaScaledNmfOnly),
            other => Err(Error::InvalidConfig(format!("unknown synth mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthSpec {
    pub n: usize,
    pub m: usize,
    pub k_true: usize,
    /// Fraction of nonzero factor entries.
    pub density: f64,
    pub noise_sigma: f64,
    /// Half-width of the uniform interval the gate parameters are drawn from.
    pub param_range: f64,
    pub mode: SynthMode,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n: 1000,
            m: 800,
            k_true: 10,
            density: 0.2,
            noise_sigma: 0.01,
            param_range: 5.0,
            mode: SynthMode::Mixed,
            seed: 0,
        }
    }
}

impl SynthSpec {
    /// A reduced-size variant that keeps multi-repeat sweeps fast.
    pub fn desk_scale() -> Self {
        Self {
            n: 200,
            m: 160,
            k_true: 5,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 || self.k_true == 0 {
            return Err(Error::InvalidConfig("dimensions must be at least 1".into()));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "density must be in (0, 1], got {}",
                self.density
            )));
        }
        if self.noise_sigma < 0.0 {
            return Err(Error::InvalidConfig("noise sigma must be >= 0".into()));
        }
        if !(self.param_range > 0.0) {
            return Err(Error::InvalidConfig("parameter range must be positive".into()));
        }
        Ok(())
    }
}

fn sparse_uniform(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> DenseMatrix {
    let values = (0..rows * cols)
        .map(|_| {
            if rng.gen_bool(density) {
                rng.gen::<f64>()
            } else {
                0.0
            }
        })
        .collect();
    DenseMatrix::from_vec(rows, cols, values).unwrap()
}

/// Generates a planted model: clean data, the noisy observation (Gaussian
/// noise truncated at zero) and the ground truth factorization.
pub fn gen_planted(
    spec: &SynthSpec,
) -> Result<(DenseMatrix, DenseMatrix, MixedFactorization)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let b = sparse_uniform(&mut rng, spec.n, spec.k_true, spec.density);
    let c = sparse_uniform(&mut rng, spec.k_true, spec.m, spec.density);

    let draws_params = matches!(spec.mode, SynthMode::Mixed | SynthMode::AlphaScaledNmfOnly);
    let (co, ro): (Vec<f64>, Vec<f64>) = if draws_params {
        let co = (0..spec.n)
            .map(|_| rng.gen_range(-spec.param_range..=spec.param_range))
            .collect();
        let ro = (0..spec.m)
            .map(|_| rng.gen_range(-spec.param_range..=spec.param_range))
            .collect();
        (co, ro)
    } else {
        (vec![0.0; spec.n], vec![0.0; spec.m])
    };
    let params = ParamVectors::new(co, ro, spec.param_range)?;
    let truth = MixedFactorization::new(b.clone(), c.clone(), params)?;

    let a_clean = match spec.mode {
        SynthMode::Mixed => mixed_product(&truth)?,
        SynthMode::PureSubtropical => maxtimes_product(&b, &c)?,
        SynthMode::PureNmf => matmul(&b, &c)?,
        SynthMode::AlphaScaledNmfOnly => {
            let alpha = alpha_matrix(&truth.params);
            let st = matmul(&b, &c)?;
            let mut out = DenseMatrix::zeros(spec.n, spec.m);
            for i in 0..spec.n {
                for j in 0..spec.m {
                    out.set(i, j, (1.0 - alpha.get(i, j)) * st.get(i, j));
                }
            }
            out
        }
    };

    let a_noisy = if spec.noise_sigma > 0.0 {
        let normal = Normal::new(0.0, spec.noise_sigma)
            .map_err(|e| Error::Numerical(e.to_string()))?;
        let values = a_clean
            .values()
            .iter()
            .map(|&v| (v + normal.sample(&mut rng)).max(0.0))
            .collect();
        DenseMatrix::from_vec(spec.n, spec.m, values)?
    } else {
        a_clean.clone()
    };

    Ok((a_clean, a_noisy, truth))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Noise,
    Density,
    Rank,
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noise" => Ok(Self::Noise),
            "density" => Ok(Self::Density),
            "rank" => Ok(Self::Rank),
            other => Err(Error::InvalidConfig(format!("unknown sweep axis `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub axis_value: f64,
    pub repeat: usize,
    pub method: String,
    pub abs_error: f64,
    pub rel_error: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ResultTable {
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub axis_value: f64,
    pub method: String,
    pub mean_rel_error: f64,
    pub std_rel_error: f64,
}

impl ResultTable {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "axis_value,repeat,method,abs_error,rel_error,seconds")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.axis_value, r.repeat, r.method, r.abs_error, r.rel_error, r.seconds
            )?;
        }
        Ok(())
    }

    /// Mean and standard deviation of the relative error per (value, method)
    /// cell, in (value, method) order of first appearance.
    pub fn summarize(&self) -> Vec<SummaryRow> {
        let mut keys: Vec<(f64, String)> = Vec::new();
        for r in &self.rows {
            if !keys.iter().any(|(v, m)| *v == r.axis_value && *m == r.method) {
                keys.push((r.axis_value, r.method.clone()));
            }
        }
        keys.into_iter()
            .map(|(value, method)| {
                let cell: Vec<f64> = self
                    .rows
                    .iter()
                    .filter(|r| r.axis_value == value && r.method == method)
                    .map(|r| r.rel_error)
                    .collect();
                let mean = cell.iter().sum::<f64>() / cell.len() as f64;
                let var =
                    cell.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / cell.len() as f64;
                SummaryRow {
                    axis_value: value,
                    method,
                    mean_rel_error: mean,
                    std_rel_error: var.sqrt(),
                }
            })
            .collect()
    }
}

fn cell_seed(base: u64, value_index: usize, repeat: usize, repeats: usize) -> u64 {
    base.wrapping_add(
        0x9E37_79B9_7F4A_7C15u64.wrapping_mul((value_index * repeats + repeat + 1) as u64),
    )
}

/// Runs every method on freshly generated data for each (value, repeat)
/// cell. Errors are scored against the clean, noise-free matrix.
pub fn sweep(
    spec_base: &SynthSpec,
    axis: SweepAxis,
    values: &[f64],
    methods: &[Method],
    repeats: usize,
    eval: &EvalConfig,
) -> Result<ResultTable> {
    if repeats == 0 {
        return Err(Error::InvalidConfig("repeats must be at least 1".into()));
    }
    let mut table = ResultTable::default();
    for (vi, &value) in values.iter().enumerate() {
        for repeat in 0..repeats {
            let mut spec = spec_base.clone();
            match axis {
                SweepAxis::Noise => spec.noise_sigma = value,
                SweepAxis::Density => spec.density = value,
                SweepAxis::Rank => spec.k_true = value.round() as usize,
            }
            spec.seed = cell_seed(spec_base.seed, vi, repeat, repeats);
            let (a_clean, a_noisy, _) = gen_planted(&spec)?;
            let k = spec.k_true;
            let results: Vec<MethodResult> =
                run_methods(&a_clean, &a_noisy, k, methods, spec.seed, eval)?;
            for r in results {
                table.rows.push(SweepRow {
                    axis_value: value,
                    repeat,
                    method: r.method,
                    abs_error: r.abs_error,
                    rel_error: r.rel_error,
                    seconds: r.wall_seconds,
                });
            }
        }
    }
    Ok(table)
}
