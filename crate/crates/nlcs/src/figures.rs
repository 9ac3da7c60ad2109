//! Parameters of the twelve figure bundles and the code that writes them.

use std::fs;
use std::path::{Path, PathBuf};

use nlcs_core::metrics::{photon_distribution, Metric};
use nlcs_core::state::Component;
use nlcs_core::wigner::GridRanges;
use nlcs_core::{Complex64, NonlinearityFunction, Phase, SuperpositionSpec};

use crate::error::CliError;
use crate::format::{pn_csv, scan_csv, wigner_csv, WignerSummary};
use crate::parallel;
use crate::values::{truncation, ModelSpec, Range};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FigureModel {
    Hs,
    Gp { kappa: f64 },
    Ion { eta: f64 },
}

impl FigureModel {
    pub fn spec(&self) -> ModelSpec {
        match *self {
            FigureModel::Hs => ModelSpec::simple(crate::values::ModelKind::Hs),
            FigureModel::Gp { kappa } => ModelSpec::gp(kappa),
            FigureModel::Ion { eta } => ModelSpec::ion(eta),
        }
    }

    /// Real `alpha` axis of the scans.
    pub fn scan_range(&self) -> Range {
        match self {
            FigureModel::Hs | FigureModel::Gp { .. } => Range { min: 0.01, max: 0.89, step: 0.01 },
            FigureModel::Ion { .. } => Range { min: 0.05, max: 2.5, step: 0.01 },
        }
    }

    /// Half width of the square Wigner window.
    pub fn wigner_half_width(&self) -> f64 {
        match self {
            FigureModel::Ion { .. } => 5.0,
            _ => 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    /// (a) `P(n)` at fixed `alpha` per phase, (b) `g2` against `alpha`.
    PhotonStatistics,
    /// (a) `I1`, (b) `I2` against `alpha`.
    Quadrature,
    /// (a) `I3`, (b) `I4` against `alpha`.
    AmplitudeSquared,
    /// (a) `|alpha, f>`, (b) `|i alpha, f>`, (c) the superposition.
    Wigner,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure {
    pub id: &'static str,
    pub model: FigureModel,
    pub kind: FigureKind,
    /// Fixed amplitude of the `P(n)` and Wigner panels.
    pub alpha: f64,
    pub caption: &'static str,
}

/// Phases drawn in the scan and `P(n)` panels, as fractions of pi.
pub const PHASES: [(i64, u64); 5] = [(0, 1), (1, 4), (1, 2), (1, 1), (3, 2)];
/// Phase of the Wigner superposition panels.
pub const WIGNER_PHASE: (i64, u64) = (1, 3);
pub const WIGNER_STEP: f64 = 0.05;

const GP: FigureModel = FigureModel::Gp { kappa: 1.5 };
const ION: FigureModel = FigureModel::Ion { eta: 0.2 };

pub const FIGURES: [Figure; 12] = [
    Figure {
        id: "fig1",
        model: FigureModel::Hs,
        kind: FigureKind::PhotonStatistics,
        alpha: 0.5,
        caption: "harmonious states: P(n) against n and phi at alpha = 0.5; g2(0) against real alpha",
    },
    Figure {
        id: "fig2",
        model: FigureModel::Hs,
        kind: FigureKind::Quadrature,
        alpha: 0.5,
        caption: "harmonious states: I1 (x quadrature) and I2 (y quadrature) against real alpha",
    },
    Figure {
        id: "fig3",
        model: FigureModel::Hs,
        kind: FigureKind::AmplitudeSquared,
        alpha: 0.5,
        caption: "harmonious states: I3 (X component) and I4 (Y component) against real alpha",
    },
    Figure {
        id: "fig4",
        model: FigureModel::Hs,
        kind: FigureKind::Wigner,
        alpha: 0.5,
        caption: "harmonious states: Wigner function of |alpha,f>, |i alpha,f> and the superposition, alpha = 0.5, phi = pi/3",
    },
    Figure {
        id: "fig5",
        model: GP,
        kind: FigureKind::PhotonStatistics,
        alpha: 0.5,
        caption: "SU(1,1) states, kappa = 3/2: as fig1",
    },
    Figure { id: "fig6", model: GP, kind: FigureKind::Quadrature, alpha: 0.5, caption: "SU(1,1) states, kappa = 3/2: as fig2" },
    Figure {
        id: "fig7",
        model: GP,
        kind: FigureKind::AmplitudeSquared,
        alpha: 0.5,
        caption: "SU(1,1) states, kappa = 3/2: as fig3",
    },
    Figure {
        id: "fig8",
        model: GP,
        kind: FigureKind::Wigner,
        alpha: 0.5,
        caption: "SU(1,1) states: as fig4 with alpha = 0.5 and kappa = 3/2",
    },
    Figure {
        id: "fig9",
        model: ION,
        kind: FigureKind::PhotonStatistics,
        alpha: 2.3,
        caption: "trapped ion: as fig1 with eta = 0.2 and alpha = 2.3",
    },
    Figure { id: "fig10", model: ION, kind: FigureKind::Quadrature, alpha: 2.3, caption: "trapped ion: as fig2 with eta = 0.2" },
    Figure {
        id: "fig11",
        model: ION,
        kind: FigureKind::AmplitudeSquared,
        alpha: 2.3,
        caption: "trapped ion: as fig3 with eta = 0.2",
    },
    Figure {
        id: "fig12",
        model: ION,
        kind: FigureKind::Wigner,
        alpha: 2.3,
        caption: "trapped ion: as fig4 with eta = 0.2 and alpha = 2.3",
    },
];

pub fn lookup(id: &str) -> Option<&'static Figure> {
    FIGURES.iter().find(|f| f.id == id)
}

/// File-name tag of a phase: `0`, `pi_4`, `3pi_2`.
pub fn phase_tag(phi: Phase) -> String {
    phi.to_string().replace('/', "_")
}

fn build_f(figure: &Figure, hard_cap: usize) -> Result<NonlinearityFunction, CliError> {
    figure.model.spec().build(hard_cap).map_err(CliError::Usage)
}

fn write(dir: &Path, name: &str, contents: &str, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    written.push(path);
    Ok(())
}

fn compute(context: &str) -> impl Fn(nlcs_core::Error) -> CliError + '_ {
    move |e| CliError::from_core(context, e)
}

/// Writes every CSV (and Wigner JSON summary) of `figure` into `dir`.
pub fn emit_figure_bundle(figure: &Figure, dir: &Path, hard_cap: usize) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let f = build_f(figure, hard_cap)?;
    let trunc = truncation(&f, None, hard_cap);
    let spec_at = |phi: Phase| {
        SuperpositionSpec::new(Complex64::new(figure.alpha, 0.0), phi, f.clone()).with_truncation(trunc)
    };
    let mut written = Vec::new();
    let id = figure.id;
    let scans = |panel: char, metric: Metric, written: &mut Vec<PathBuf>| -> Result<(), CliError> {
        let alphas = figure.model.scan_range().points();
        let name = metric.name();
        let plus = parallel::scan_grid(&spec_at(Phase::ZERO), &alphas, metric, &[Component::Plus]);
        write(dir, &format!("{id}{panel}_{name}_plus.csv"), &scan_csv(&plus), written)?;
        for (num, den) in PHASES {
            let phi = Phase::pi_fraction(num, den);
            let rows = parallel::scan_grid(&spec_at(phi), &alphas, metric, &[Component::Superposition]);
            write(dir, &format!("{id}{panel}_{name}_phi_{}.csv", phase_tag(phi)), &scan_csv(&rows), written)?;
        }
        Ok(())
    };
    match figure.kind {
        FigureKind::PhotonStatistics => {
            for (num, den) in PHASES {
                let phi = Phase::pi_fraction(num, den);
                let state = spec_at(phi).build(Component::Superposition).map_err(compute(id))?;
                let name = format!("{id}a_pn_phi_{}.csv", phase_tag(phi));
                write(dir, &name, &pn_csv(&photon_distribution(&state)), &mut written)?;
            }
            scans('b', Metric::G2, &mut written)?;
        }
        FigureKind::Quadrature => {
            scans('a', Metric::I1, &mut written)?;
            scans('b', Metric::I2, &mut written)?;
        }
        FigureKind::AmplitudeSquared => {
            scans('a', Metric::I3, &mut written)?;
            scans('b', Metric::I4, &mut written)?;
        }
        FigureKind::Wigner => {
            let spec = spec_at(Phase::pi_fraction(WIGNER_PHASE.0, WIGNER_PHASE.1));
            let ranges = GridRanges::square(figure.model.wigner_half_width());
            for (panel, component) in
                [('a', Component::Plus), ('b', Component::Rotated), ('c', Component::Superposition)]
            {
                let state = spec.build(component).map_err(compute(id))?;
                let grid = parallel::wigner_grid(&state, ranges, WIGNER_STEP).map_err(compute(id))?;
                let stem = format!("{id}{panel}_{}", component.name());
                write(dir, &format!("{stem}.csv"), &wigner_csv(&grid), &mut written)?;
                write(dir, &format!("{stem}.json"), &WignerSummary::of(&grid).to_json(), &mut written)?;
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_covers_all_figures_once() {
        for (i, f) in FIGURES.iter().enumerate() {
            assert_eq!(f.id, format!("fig{}", i + 1));
            assert_eq!(lookup(f.id), Some(f));
        }
        assert_eq!(lookup("fig99"), None);
    }

    #[test]
    fn caption_parameters() {
        let hs = [1, 2, 3, 4].map(|i| FIGURES[i - 1]);
        assert!(hs.iter().all(|f| f.model == FigureModel::Hs && f.alpha == 0.5));
        let gp = [5, 6, 7, 8].map(|i| FIGURES[i - 1]);
        assert!(gp.iter().all(|f| f.model == FigureModel::Gp { kappa: 1.5 } && f.alpha == 0.5));
        let ion = [9, 10, 11, 12].map(|i| FIGURES[i - 1]);
        assert!(ion.iter().all(|f| f.model == FigureModel::Ion { eta: 0.2 } && f.alpha == 2.3));
        // |alpha|^2 = 0.25 and 5.29 in the text
        assert_eq!(FIGURES[0].alpha.powi(2), 0.25);
        assert!((FIGURES[8].alpha.powi(2) - 5.29).abs() < 1e-12);
        let kinds = [FigureKind::PhotonStatistics, FigureKind::Quadrature, FigureKind::AmplitudeSquared, FigureKind::Wigner];
        for (i, f) in FIGURES.iter().enumerate() {
            assert_eq!(f.kind, kinds[i % 4]);
        }
        assert_eq!(Phase::pi_fraction(WIGNER_PHASE.0, WIGNER_PHASE.1).to_string(), "pi/3");
        assert!(FIGURES[3].caption.contains("alpha = 0.5") && FIGURES[3].caption.contains("pi/3"));
        assert!(FIGURES[7].caption.contains("kappa = 3/2"));
        assert!(FIGURES[11].caption.contains("eta = 0.2") && FIGURES[11].caption.contains("alpha = 2.3"));
    }

    #[test]
    fn phase_tags() {
        let tags: Vec<String> = PHASES.iter().map(|&(n, d)| phase_tag(Phase::pi_fraction(n, d))).collect();
        assert_eq!(tags, ["0", "pi_4", "pi_2", "pi", "3pi_2"]);
    }
}
