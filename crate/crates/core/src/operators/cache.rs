use std::sync::Arc;

use dashmap::DashMap;

use crate::choquet::{ChoquetValue, QuadratureConfig};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct CacheKey {
    func: Arc<str>,
    capacity: String,
    kind: u8,
    a: u64,
    b: u64,
    cfg: [u64; 6],
}

pub(crate) const CELL_MEAN: u8 = 0;
pub(crate) const SIMPLEX_MOMENT: u8 = 1;

impl CacheKey {
    pub(crate) fn new(
        func: &str,
        capacity: String,
        kind: u8,
        a: f64,
        b: f64,
        cfg: &QuadratureConfig,
    ) -> Self {
        Self {
            func: func.into(),
            capacity,
            kind,
            a: a.to_bits(),
            b: b.to_bits(),
            cfg: [
                cfg.abs_tol.to_bits(),
                cfg.rel_tol.to_bits(),
                cfg.max_subdivisions as u64,
                cfg.scan_resolution as u64,
                cfg.level_breaks as u64,
                cfg.grid_cells as u64,
            ],
        }
    }
}

/// Memo of normalized Choquet cell means and simplex moments, keyed by the
/// function label, capacity, cell and quadrature settings.
///
/// Values are deterministic, so concurrent duplicate computation only
/// costs time; a hit returns the same bits as a fresh computation.
#[derive(Debug, Default)]
pub struct CoefficientCache {
    map: DashMap<CacheKey, ChoquetValue>,
}

impl CoefficientCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn clear(&self) {
        self.map.clear();
    }

    pub(crate) fn get_or_try_insert(
        &self,
        key: CacheKey,
        compute: impl FnOnce() -> crate::error::Result<ChoquetValue>,
    ) -> crate::error::Result<ChoquetValue> {
        if let Some(v) = self.map.get(&key) {
            return Ok(*v);
        }
        let v = compute()?;
        self.map.insert(key, v);
        Ok(v)
    }
}
