//! Row-parallel drivers. Results are assembled in index order, so output does
//! not depend on scheduling.

use nlcs_core::metrics::{scan, Metric, ScanRow};
use nlcs_core::state::Component;
use nlcs_core::wigner::{wigner_row, GridRanges, WignerGrid, WignerKernel};
use nlcs_core::{Result, StateVector, SuperpositionSpec};
use rayon::prelude::*;

pub fn wigner_grid(state: &StateVector, ranges: GridRanges, step: f64) -> Result<WignerGrid> {
    ranges.validate(step)?;
    let kernel = WignerKernel::new(state);
    let rows: Vec<Vec<f64>> = ranges.xs(step).par_iter().map(|&x| wigner_row(&kernel, x, &ranges, step)).collect();
    WignerGrid::from_rows(ranges, step, rows)
}

pub fn scan_grid(template: &SuperpositionSpec, alphas: &[f64], metric: Metric, components: &[Component]) -> Vec<ScanRow> {
    alphas.par_iter().flat_map_iter(|&a| scan(template, &[a], metric, components)).collect()
}
