//! Tabular datasets: synthetic generation from the symbolic functions,
//! CSV + JSON-sidecar persistence, and ingestion of external CSV files.
//!
//! A synthetic dataset has `n = m + n_noise` feature columns. The `m`
//! predictive features occupy columns `0..m` and feed the generator
//! function; the remaining columns are irrelevant noise drawn from the same
//! distribution. The target is the function value plus optional Gaussian
//! label noise. Every row carries a train/validation tag.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};
use crate::symfunc::SymbolicFunction;

/// Sidecar schema version.
pub const DATASET_FORMAT_VERSION: u32 = 1;

/// Distribution feature values are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureDist {
    /// Standard normal, mean 0, variance 1.
    StdNormal,
    /// Normal with mean 0 and variance 0.33, clipped to `[-1, 1]`.
    #[default]
    ClippedNormal,
}

impl FeatureDist {
    fn sample(self, rng: &mut crate::rng::SeededRng) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        match self {
            FeatureDist::StdNormal => z,
            FeatureDist::ClippedNormal => (z * 0.33f64.sqrt()).clamp(-1.0, 1.0),
        }
    }
}

/// Noise condition for synthetic data generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Number of irrelevant feature columns appended after the predictive ones.
    pub n_noise: usize,
    #[serde(default)]
    pub feature_dist: FeatureDist,
    /// Standard deviation of additive Gaussian noise on the target.
    pub label_noise_std: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(n_noise: usize, label_noise_std: f64, seed: u64) -> Self {
        Self {
            n_noise,
            feature_dist: FeatureDist::default(),
            label_noise_std,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.label_noise_std >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "label_noise_std must be >= 0, got {}",
                self.label_noise_std
            )));
        }
        Ok(())
    }
}

/// Train/validation tag for one row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Validation,
}

/// A feature matrix with targets, split tags, and predictive-feature
/// annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularDataset {
    n_rows: usize,
    n_cols: usize,
    /// Row-major, `n_rows * n_cols`.
    features: Vec<f64>,
    targets: Vec<f64>,
    /// Ascending indices of the columns that enter the generating function.
    /// Empty for external data with unknown ground truth.
    predictive_indices: Vec<usize>,
    split: Vec<Split>,
    feature_names: Option<Vec<String>>,
    /// Provenance of synthetic datasets, carried through save/load.
    provenance: Option<Provenance>,
}

/// How a synthetic dataset was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub function_id: u8,
    pub noise_spec: NoiseSpec,
    pub split_ratio: f64,
}

impl TabularDataset {
    /// Builds a dataset from parts, validating lengths.
    pub fn from_parts(
        n_cols: usize,
        features: Vec<f64>,
        targets: Vec<f64>,
        predictive_indices: Vec<usize>,
        split: Vec<Split>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if n_cols == 0 {
            return Err(Error::EmptyData("dataset needs at least one column".into()));
        }
        if features.len() % n_cols != 0 {
            return Err(Error::ShapeMismatch {
                expected: n_cols,
                got: features.len(),
            });
        }
        let n_rows = features.len() / n_cols;
        if targets.len() != n_rows || split.len() != n_rows {
            return Err(Error::ShapeMismatch {
                expected: n_rows,
                got: targets.len().min(split.len()),
            });
        }
        if let Some(names) = &feature_names {
            if names.len() != n_cols {
                return Err(Error::ShapeMismatch {
                    expected: n_cols,
                    got: names.len(),
                });
            }
        }
        if predictive_indices.iter().any(|&i| i >= n_cols) {
            return Err(Error::InvalidParameter(
                "predictive index out of column range".into(),
            ));
        }
        Ok(Self {
            n_rows,
            n_cols,
            features,
            targets,
            predictive_indices,
            split,
            feature_names,
            provenance: None,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn target(&self, i: usize) -> f64 {
        self.targets[i]
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn split(&self, i: usize) -> Split {
        self.split[i]
    }

    pub fn predictive_indices(&self) -> &[usize] {
        &self.predictive_indices
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Row indices tagged `Train`.
    pub fn train_indices(&self) -> Vec<usize> {
        (0..self.n_rows)
            .filter(|&i| self.split[i] == Split::Train)
            .collect()
    }

    /// Row indices tagged `Validation`.
    pub fn validation_indices(&self) -> Vec<usize> {
        (0..self.n_rows)
            .filter(|&i| self.split[i] == Split::Validation)
            .collect()
    }

    /// A copy keeping only `columns` (ascending original indices), remapping
    /// predictive annotations onto the new positions.
    pub fn restrict_columns(&self, columns: &[usize]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::EmptyData("column selection is empty".into()));
        }
        if columns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "column selection must be strictly ascending".into(),
            ));
        }
        if *columns.last().unwrap() >= self.n_cols {
            return Err(Error::IndexOutOfRange {
                index: *columns.last().unwrap(),
                len: self.n_cols,
            });
        }
        let mut features = Vec::with_capacity(self.n_rows * columns.len());
        for i in 0..self.n_rows {
            let row = self.row(i);
            features.extend(columns.iter().map(|&c| row[c]));
        }
        let predictive = self
            .predictive_indices
            .iter()
            .filter_map(|p| columns.iter().position(|c| c == p))
            .collect();
        let names = self
            .feature_names
            .as_ref()
            .map(|ns| columns.iter().map(|&c| ns[c].clone()).collect());
        Ok(Self {
            n_rows: self.n_rows,
            n_cols: columns.len(),
            features,
            targets: self.targets.clone(),
            predictive_indices: predictive,
            split: self.split.clone(),
            feature_names: names,
            provenance: None,
        })
    }

    /// Writes the dataset as `<path>` (CSV with header `x0..x{n-1},y`) plus a
    /// JSON sidecar at the same path with extension `.json`.
    pub fn save(&self, csv_path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(csv_path)?);
        let header: Vec<String> = (0..self.n_cols)
            .map(|i| format!("x{i}"))
            .chain(std::iter::once("y".to_string()))
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for i in 0..self.n_rows {
            let mut line = String::new();
            for v in self.row(i) {
                line.push_str(&format!("{v}"));
                line.push(',');
            }
            line.push_str(&format!("{}", self.targets[i]));
            writeln!(w, "{line}")?;
        }
        w.flush()?;

        let sidecar = Sidecar {
            format_version: DATASET_FORMAT_VERSION,
            function_id: self.provenance.as_ref().map(|p| p.function_id),
            m: self.predictive_indices.len(),
            predictive_indices: self.predictive_indices.clone(),
            noise_spec: self.provenance.as_ref().map(|p| p.noise_spec.clone()),
            seed: self.provenance.as_ref().map(|p| p.noise_spec.seed),
            split_ratio: self.provenance.as_ref().map(|p| p.split_ratio),
            split: self.split.iter().map(|s| u8::from(*s == Split::Validation)).collect(),
            feature_names: self.feature_names.clone(),
        };
        let f = BufWriter::new(File::create(sidecar_path(csv_path))?);
        serde_json::to_writer_pretty(f, &sidecar)?;
        Ok(())
    }

    /// Loads a dataset written by [`Self::save`]. The sidecar is required;
    /// use [`load_tabular_csv`] for foreign files without annotations.
    pub fn load(csv_path: &Path) -> Result<Self> {
        let sidecar = sidecar_path(csv_path);
        if !sidecar.exists() {
            return Err(Error::MissingSidecar(sidecar));
        }
        let meta: Sidecar = serde_json::from_reader(BufReader::new(File::open(&sidecar)?))?;
        if meta.format_version != DATASET_FORMAT_VERSION {
            return Err(Error::FormatVersion {
                expected: DATASET_FORMAT_VERSION,
                found: meta.format_version,
            });
        }

        let (features, targets, n_cols, _names) = read_numeric_csv(csv_path, "y")?;
        let n_rows = targets.len();
        if meta.split.len() != n_rows {
            return Err(Error::ShapeMismatch {
                expected: n_rows,
                got: meta.split.len(),
            });
        }
        let split = meta
            .split
            .iter()
            .map(|&tag| if tag == 0 { Split::Train } else { Split::Validation })
            .collect();
        let mut ds = Self::from_parts(
            n_cols,
            features,
            targets,
            meta.predictive_indices,
            split,
            meta.feature_names,
        )?;
        if let (Some(function_id), Some(noise_spec), Some(split_ratio)) =
            (meta.function_id, meta.noise_spec, meta.split_ratio)
        {
            ds.provenance = Some(Provenance {
                function_id,
                noise_spec,
                split_ratio,
            });
        }
        Ok(ds)
    }
}

fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    format_version: u32,
    function_id: Option<u8>,
    m: usize,
    predictive_indices: Vec<usize>,
    noise_spec: Option<NoiseSpec>,
    seed: Option<u64>,
    split_ratio: Option<f64>,
    /// 0 = train, 1 = validation, one entry per row.
    split: Vec<u8>,
    feature_names: Option<Vec<String>>,
}

/// Synthesizes a dataset for one generator function.
///
/// Columns `0..m` are the predictive features, the next `n_noise` columns are
/// irrelevant; all are drawn from `noise.feature_dist`. The target is the
/// function value plus `N(0, label_noise_std^2)`. The first
/// `round(n_samples * split_ratio)` rows are tagged train, the rest
/// validation (rows are i.i.d., so positional splitting is unbiased).
pub fn generate_dataset(
    func: SymbolicFunction,
    noise: &NoiseSpec,
    n_samples: usize,
    split_ratio: f64,
) -> Result<TabularDataset> {
    noise.validate()?;
    if n_samples < 1 {
        return Err(Error::InvalidParameter("n_samples must be >= 1".into()));
    }
    if !(split_ratio > 0.0 && split_ratio < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "split_ratio must lie in (0, 1), got {split_ratio}"
        )));
    }

    let m = func.arity();
    let n_cols = m + noise.n_noise;
    let mut rng = rng_from_seed(noise.seed);
    let mut features = Vec::with_capacity(n_samples * n_cols);
    let mut targets = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let start = features.len();
        for _ in 0..n_cols {
            features.push(noise.feature_dist.sample(&mut rng));
        }
        let y = func.evaluate(&features[start..start + m])?;
        let z: f64 = rng.sample(StandardNormal);
        let target = y + noise.label_noise_std * z;
        if !target.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "non-finite target generated for function {}",
                func.id()
            )));
        }
        targets.push(target);
    }

    let n_train = split_count(n_samples, split_ratio);
    let split = (0..n_samples)
        .map(|i| if i < n_train { Split::Train } else { Split::Validation })
        .collect();

    let mut ds = TabularDataset::from_parts(
        n_cols,
        features,
        targets,
        (0..m).collect(),
        split,
        None,
    )?;
    ds.provenance = Some(Provenance {
        function_id: func.id(),
        noise_spec: noise.clone(),
        split_ratio,
    });
    Ok(ds)
}

/// Train-row count for a ratio, clamped so both splits are nonempty whenever
/// there are at least two rows.
fn split_count(n_rows: usize, split_ratio: f64) -> usize {
    let raw = (n_rows as f64 * split_ratio).round() as usize;
    if n_rows < 2 {
        n_rows
    } else {
        raw.clamp(1, n_rows - 1)
    }
}

/// Column scaling for ingested CSV data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    /// Per-column min-max to `[0, 1]`, with statistics computed on training
    /// rows only. A constant column scales to 0.
    MinMax,
    None,
}

/// Class rebalancing for ingested CSV data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Balance {
    /// Randomly drop majority-class rows until the 0/1 classes are 1:1.
    Undersample,
    None,
}

/// Loads a foreign CSV with a named label column. Rows are undersampled
/// (optionally), shuffled, split, then scaled using training-row statistics.
/// `predictive_indices` is empty: ground truth is unknown for external data.
pub fn load_tabular_csv(
    path: &Path,
    scaling: Scaling,
    balance: Balance,
    label_column: &str,
    split_ratio: f64,
    seed: u64,
) -> Result<TabularDataset> {
    if !(split_ratio > 0.0 && split_ratio < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "split_ratio must lie in (0, 1), got {split_ratio}"
        )));
    }
    let (mut features, mut targets, n_cols, names) = read_numeric_csv(path, label_column)?;
    if targets.is_empty() {
        return Err(Error::EmptyData(format!("{} has no data rows", path.display())));
    }

    if balance == Balance::Undersample {
        let keep = undersample_rows(&targets, derive_seed(seed, 0xB411))?;
        let mut new_feat = Vec::with_capacity(keep.len() * n_cols);
        let mut new_targ = Vec::with_capacity(keep.len());
        for &i in &keep {
            new_feat.extend_from_slice(&features[i * n_cols..(i + 1) * n_cols]);
            new_targ.push(targets[i]);
        }
        features = new_feat;
        targets = new_targ;
    }

    // Shuffle before splitting; external files are often ordered.
    let n_rows = targets.len();
    let mut order: Vec<usize> = (0..n_rows).collect();
    order.shuffle(&mut rng_from_seed(derive_seed(seed, 0x5807)));
    let mut shuffled_feat = Vec::with_capacity(features.len());
    let mut shuffled_targ = Vec::with_capacity(n_rows);
    for &i in &order {
        shuffled_feat.extend_from_slice(&features[i * n_cols..(i + 1) * n_cols]);
        shuffled_targ.push(targets[i]);
    }

    let n_train = split_count(n_rows, split_ratio);
    let split: Vec<Split> = (0..n_rows)
        .map(|i| if i < n_train { Split::Train } else { Split::Validation })
        .collect();

    if scaling == Scaling::MinMax {
        for c in 0..n_cols {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for r in 0..n_train {
                let v = shuffled_feat[r * n_cols + c];
                lo = lo.min(v);
                hi = hi.max(v);
            }
            let range = hi - lo;
            for r in 0..n_rows {
                let v = &mut shuffled_feat[r * n_cols + c];
                *v = if range > 0.0 { (*v - lo) / range } else { 0.0 };
            }
        }
    }

    TabularDataset::from_parts(n_cols, shuffled_feat, shuffled_targ, Vec::new(), split, Some(names))
}

/// Indices to keep for a 1:1 undersample of binary `{0,1}` targets.
fn undersample_rows(targets: &[f64], seed: u64) -> Result<Vec<usize>> {
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    for (i, &y) in targets.iter().enumerate() {
        if y == 0.0 {
            zeros.push(i);
        } else if y == 1.0 {
            ones.push(i);
        } else {
            return Err(Error::InvalidTarget(format!(
                "undersampling needs binary 0/1 labels, found {y} at row {i}"
            )));
        }
    }
    if zeros.is_empty() || ones.is_empty() {
        return Err(Error::InvalidTarget(
            "undersampling needs both classes present".into(),
        ));
    }
    let (mut major, minor) = if zeros.len() >= ones.len() {
        (zeros, ones)
    } else {
        (ones, zeros)
    };
    major.shuffle(&mut rng_from_seed(seed));
    major.truncate(minor.len());
    let mut keep: Vec<usize> = minor.into_iter().chain(major).collect();
    keep.sort_unstable();
    Ok(keep)
}

/// Reads a numeric CSV with a header, returning (features, targets, n_cols,
/// feature names). The label column may be anywhere.
fn read_numeric_csv(path: &Path, label_column: &str) -> Result<(Vec<f64>, Vec<f64>, usize, Vec<String>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::InvalidConfig(format!("label column {label_column:?} not found")))?;
    let names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| h.to_string())
        .collect();
    let n_cols = names.len();
    if n_cols == 0 {
        return Err(Error::EmptyData("no feature columns".into()));
    }

    let mut features = Vec::new();
    let mut targets = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != n_cols + 1 {
            return Err(Error::CsvCell {
                row: row_idx + 1,
                column: format!("(record has {} fields, expected {})", record.len(), n_cols + 1),
                value: String::new(),
            });
        }
        for (col_idx, field) in record.iter().enumerate() {
            let value: f64 = field.trim().parse().map_err(|_| Error::CsvCell {
                row: row_idx + 1,
                column: headers[col_idx].to_string(),
                value: field.to_string(),
            })?;
            if col_idx == label_idx {
                targets.push(value);
            } else {
                features.push(value);
            }
        }
    }
    Ok((features, targets, n_cols, names))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(id: u8) -> SymbolicFunction {
        SymbolicFunction::new(id).unwrap()
    }

    #[test]
    fn shapes_and_annotation() {
        let ds = generate_dataset(f(2), &NoiseSpec::new(10, 0.01, 7), 100, 0.8).unwrap();
        assert_eq!(ds.n_rows(), 100);
        assert_eq!(ds.n_cols(), 11);
        assert_eq!(ds.predictive_indices(), &[0]);
        assert_eq!(ds.train_indices().len(), 80);
        assert_eq!(ds.validation_indices().len(), 20);
    }

    #[test]
    fn noiseless_targets_are_exact() {
        let ds = generate_dataset(f(7), &NoiseSpec::new(3, 0.0, 11), 50, 0.5).unwrap();
        for i in 0..ds.n_rows() {
            let y = f(7).evaluate(&ds.row(i)[..2]).unwrap();
            assert_eq!(ds.target(i), y);
        }
    }

    #[test]
    fn clipped_normal_stays_in_range() {
        let ds = generate_dataset(f(1), &NoiseSpec::new(5, 0.0, 3), 2000, 0.8).unwrap();
        for i in 0..ds.n_rows() {
            assert!(ds.row(i).iter().all(|v| (-1.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn std_normal_exceeds_unit_range() {
        let mut spec = NoiseSpec::new(5, 0.0, 3);
        spec.feature_dist = FeatureDist::StdNormal;
        let ds = generate_dataset(f(1), &spec, 2000, 0.8).unwrap();
        let out_of_range = (0..ds.n_rows())
            .any(|i| ds.row(i).iter().any(|v| v.abs() > 1.0));
        assert!(out_of_range);
    }

    #[test]
    fn generation_is_bit_reproducible() {
        let spec = NoiseSpec::new(4, 0.05, 99);
        let a = generate_dataset(f(10), &spec, 64, 0.75).unwrap();
        let b = generate_dataset(f(10), &spec, 64, 0.75).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn predictive_column_outcorrelates_noise() {
        // For the identity function the predictive column is the target up to
        // label noise, so its |Pearson r| must beat every noise column's.
        let ds = generate_dataset(f(1), &NoiseSpec::new(20, 0.01, 5), 10_000, 0.8).unwrap();
        let corr = |c: usize| -> f64 {
            let n = ds.n_rows() as f64;
            let xs: Vec<f64> = (0..ds.n_rows()).map(|i| ds.row(i)[c]).collect();
            let mx = xs.iter().sum::<f64>() / n;
            let my = ds.targets().iter().sum::<f64>() / n;
            let mut cov = 0.0;
            let mut vx = 0.0;
            let mut vy = 0.0;
            for (x, y) in xs.iter().zip(ds.targets()) {
                cov += (x - mx) * (y - my);
                vx += (x - mx).powi(2);
                vy += (y - my).powi(2);
            }
            (cov / (vx.sqrt() * vy.sqrt())).abs()
        };
        let predictive = corr(0);
        for c in 1..ds.n_cols() {
            assert!(predictive > corr(c), "noise column {c} beats predictive");
        }
    }

    #[test]
    fn save_load_round_trips_bit_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ds.csv");
        let ds = generate_dataset(f(9), &NoiseSpec::new(7, 0.02, 21), 40, 0.8).unwrap();
        ds.save(&path).unwrap();
        let back = TabularDataset::load(&path).unwrap();
        assert_eq!(ds, back);
    }

    #[test]
    fn missing_sidecar_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ds.csv");
        let ds = generate_dataset(f(1), &NoiseSpec::new(2, 0.0, 1), 10, 0.8).unwrap();
        ds.save(&path).unwrap();
        std::fs::remove_file(dir.path().join("ds.json")).unwrap();
        match TabularDataset::load(&path) {
            Err(Error::MissingSidecar(_)) => {}
            other => panic!("expected MissingSidecar, got {other:?}"),
        }
    }

    #[test]
    fn ingest_minmax_and_undersample() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ext.csv");
        let mut w = std::fs::File::create(&path).unwrap();
        writeln!(w, "f_a,f_b,label").unwrap();
        // 12 majority-zero rows, 4 minority-one rows; f_b is constant.
        for i in 0..12 {
            writeln!(w, "{},5.0,0", i as f64).unwrap();
        }
        for i in 0..4 {
            writeln!(w, "{},5.0,1", (i + 12) as f64).unwrap();
        }
        drop(w);

        let ds = load_tabular_csv(&path, Scaling::MinMax, Balance::Undersample, "label", 0.5, 3)
            .unwrap();
        assert_eq!(ds.n_rows(), 8);
        let ones = ds.targets().iter().filter(|&&y| y == 1.0).count();
        assert_eq!(ones, 4);
        assert!(ds.predictive_indices().is_empty());
        assert_eq!(ds.feature_names().unwrap(), &["f_a".to_string(), "f_b".to_string()]);
        // Training rows of every column scaled into [0,1]; constant column to 0.
        for &r in &ds.train_indices() {
            assert!((0.0..=1.0).contains(&ds.row(r)[0]));
            assert_eq!(ds.row(r)[1], 0.0);
        }
    }

    #[test]
    fn ingest_reports_bad_cell() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "a,b,y\n1.0,2.0,3.0\n1.0,oops,3.0\n").unwrap();
        match load_tabular_csv(&path, Scaling::None, Balance::None, "y", 0.5, 0) {
            Err(Error::CsvCell { row, column, value }) => {
                assert_eq!(row, 2);
                assert_eq!(column, "b");
                assert_eq!(value, "oops");
            }
            other => panic!("expected CsvCell error, got {other:?}"),
        }
    }

    #[test]
    fn restrict_columns_remaps_annotations() {
        let ds = generate_dataset(f(7), &NoiseSpec::new(3, 0.0, 2), 20, 0.8).unwrap();
        // Keep predictive column 1 and noise columns 2 and 4.
        let sub = ds.restrict_columns(&[1, 2, 4]).unwrap();
        assert_eq!(sub.n_cols(), 3);
        assert_eq!(sub.predictive_indices(), &[0]);
        for i in 0..ds.n_rows() {
            assert_eq!(sub.row(i), &[ds.row(i)[1], ds.row(i)[2], ds.row(i)[4]]);
        }
    }
}
