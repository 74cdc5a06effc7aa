//! A truncated eigenbasis: retained levels, their energies and the sign
//! matrix, with a JSON record format and an on-disk cache.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::eigenfunction::{level_is_even, Eigenbasis};
use super::levels::{levels_capped, Levels};
use super::sgn::{sgn_matrix, SgnMatrix};
use crate::classical::{EnergyWindow, ModelSystem};
use crate::error::{Error, Result};

/// Bumped whenever numerical results of slice construction change.
pub const SLICE_FORMAT_VERSION: u32 = 2;

#[derive(Debug, Clone)]
pub struct SpectrumSlice {
    model: ModelSystem,
    window: EnergyWindow,
    indices: Vec<usize>,
    energies: Vec<f64>,
    sgn: SgnMatrix,
    basis: Eigenbasis,
}

/// Serialized form: row-major sign matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceRecord {
    pub version: u32,
    pub model: ModelSystem,
    pub window: EnergyWindow,
    pub indices: Vec<usize>,
    pub energies: Vec<f64>,
    pub sgn: Vec<f64>,
}

impl SpectrumSlice {
    /// Levels inside the window.
    pub fn build(model: ModelSystem, window: EnergyWindow) -> Result<Self> {
        Self::build_capped(model, window, None)
    }

    /// Levels inside the window with index ≤ max_index.
    pub fn build_capped(
        model: ModelSystem,
        window: EnergyWindow,
        max_index: Option<usize>,
    ) -> Result<Self> {
        let levels = levels_capped(&model, &window, max_index)?;
        Self::from_levels(model, window, levels)
    }

    /// The lowest levels up to index n_max.
    pub fn lowest(model: ModelSystem, n_max: usize) -> Result<Self> {
        let all = EnergyWindow::new(f64::NEG_INFINITY, f64::INFINITY)?;
        Self::build_capped(model, all, Some(n_max))
    }

    pub fn from_levels(model: ModelSystem, window: EnergyWindow, levels: Levels) -> Result<Self> {
        let top = *levels.indices.last().ok_or(Error::EmptySlice {
            e_min: window.e_min,
            e_max: window.e_max,
        })?;
        let basis = Eigenbasis::new(model, top)?;
        let sgn = sgn_matrix(&basis, &levels.indices)?;
        Ok(Self {
            model,
            window,
            indices: levels.indices,
            energies: levels.energies,
            sgn,
            basis,
        })
    }

    /// Assemble from precomputed parts, checking consistency.
    pub fn from_parts(
        model: ModelSystem,
        window: EnergyWindow,
        indices: Vec<usize>,
        energies: Vec<f64>,
        sgn: SgnMatrix,
    ) -> Result<Self> {
        let dim = indices.len();
        if dim == 0 {
            return Err(Error::EmptySlice {
                e_min: window.e_min,
                e_max: window.e_max,
            });
        }
        if energies.len() != dim || sgn.dim() != dim {
            return Err(Error::InvalidParameter(format!(
                "slice parts disagree: {dim} indices, {} energies, sign matrix of size {}",
                energies.len(),
                sgn.dim()
            )));
        }
        let basis = Eigenbasis::new(model, indices[dim - 1])?;
        Ok(Self {
            model,
            window,
            indices,
            energies,
            sgn,
            basis,
        })
    }

    pub fn model(&self) -> &ModelSystem {
        &self.model
    }

    pub fn window(&self) -> &EnergyWindow {
        &self.window
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn sgn(&self) -> &SgnMatrix {
        &self.sgn
    }

    pub fn basis(&self) -> &Eigenbasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// Slice position of level n.
    pub fn position(&self, n: usize) -> Option<usize> {
        self.indices.binary_search(&n).ok()
    }

    /// Copy with every energy shifted by c.
    pub fn with_energy_shift(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.energies.iter_mut().for_each(|e| *e += c);
        out
    }

    pub fn to_record(&self) -> SliceRecord {
        SliceRecord {
            version: SLICE_FORMAT_VERSION,
            model: self.model,
            window: self.window,
            indices: self.indices.clone(),
            energies: self.energies.clone(),
            sgn: self.sgn.to_dense(),
        }
    }

    pub fn from_record(record: SliceRecord) -> Result<Self> {
        if record.version != SLICE_FORMAT_VERSION {
            return Err(Error::InvalidParameter(format!(
                "slice record version {} (expected {SLICE_FORMAT_VERSION})",
                record.version
            )));
        }
        let dim = record.indices.len();
        if record.sgn.len() != dim * dim {
            return Err(Error::InvalidParameter(
                "sign matrix size does not match indices".into(),
            ));
        }
        let sgn = if record.model.is_parity_even() {
            let (even, odd): (Vec<usize>, Vec<usize>) = (0..dim)
                .partition(|&i| level_is_even(&record.model, record.indices[i]).unwrap_or(false));
            let block = even
                .iter()
                .flat_map(|&i| odd.iter().map(move |&j| (i, j)))
                .map(|(i, j)| record.sgn[i * dim + j])
                .collect();
            SgnMatrix::Bipartite {
                dim,
                even,
                odd,
                block,
            }
        } else {
            SgnMatrix::Dense {
                dim,
                entries: record.sgn,
            }
        };
        Self::from_parts(
            record.model,
            record.window,
            record.indices,
            record.energies,
            sgn,
        )
    }
}

/// Content-addressed slice cache in a directory.
#[derive(Debug, Clone)]
pub struct SliceCache {
    dir: PathBuf,
}

impl SliceCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex SHA-256 of (model, window, index cap, format version).
    pub fn key(model: &ModelSystem, window: &EnergyWindow, max_index: Option<usize>) -> String {
        let descriptor = serde_json::json!({
            "model": model,
            "window": window,
            "max_index": max_index,
            "version": SLICE_FORMAT_VERSION,
        });
        hex::encode(Sha256::digest(descriptor.to_string().as_bytes()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("slice-{key}.json"))
    }

    pub fn get_or_build(
        &self,
        model: ModelSystem,
        window: EnergyWindow,
        max_index: Option<usize>,
    ) -> Result<SpectrumSlice> {
        let path = self.path(&Self::key(&model, &window, max_index));
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(record) = serde_json::from_str::<SliceRecord>(&text) {
                if let Ok(slice) = SpectrumSlice::from_record(record) {
                    return Ok(slice);
                }
            }
        }
        let slice = SpectrumSlice::build_capped(model, window, max_index)?;
        fs::create_dir_all(&self.dir)?;
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string(&slice.to_record())?)?;
        fs::rename(&tmp, &path)?;
        Ok(slice)
    }
}
