//! The mode-divergence matrix: which assertion-level rules survive in weak
//! mode, per assertion flavour. HOLDS cells are backed by a random sweep;
//! FAILS cells reproduce a named fixture from the bundled corpus.

use crate::error::ModelError;
use crate::fixtures;
use crate::interp::Mode;
use crate::oracle::gen::GenParams;
use crate::oracle::props::{run_sweep, PropId};

/// The expected verdict of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellVerdict {
    Holds,
    Fails,
}

impl std::fmt::Display for CellVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CellVerdict::Holds => write!(f, "HOLDS"),
            CellVerdict::Fails => write!(f, "FAILS"),
        }
    }
}

/// One (rule, assertion-flavour) cell.
#[derive(Debug, Clone, Copy)]
pub struct Cell {
    pub prop: PropId,
    pub strict: bool,
    pub expected: CellVerdict,
    /// The fixture reproducing a FAILS cell.
    pub fixture: Option<&'static str>,
}

/// The weak-mode matrix.
pub fn weak_cells() -> Vec<Cell> {
    use CellVerdict::*;
    use PropId::*;
    let cell = |prop, strict, expected, fixture| Cell { prop, strict, expected, fixture };
    vec![
        cell(CTransitivity, false, Fails, Some("ce-ctrans-weak-1")),
        cell(CTransitivity, true, Fails, Some("ce-ctrans-weak-2")),
        cell(STransitivityA, false, Fails, Some("ce-strans-weak")),
        cell(STransitivityA, true, Holds, None),
        cell(STransitivityB, false, Holds, None),
        cell(STransitivityB, true, Holds, None),
        cell(LiftExistential, false, Holds, None),
        cell(LiftExistential, true, Fails, Some("ce-liftexists-strong")),
        cell(LiftConjunction, false, Fails, Some("ce-liftconj-weak")),
        cell(LiftConjunction, true, Fails, Some("ce-liftconj-weak")),
        cell(RuleTranslation, false, Holds, None),
        cell(RuleExtrapolation, false, Fails, Some("ce-extrap-weak")),
        cell(RuleExtrapolation, true, Fails, Some("ce-extrap-weak-strict")),
    ]
}

/// The strong-mode matrix: every assertion-level rule holds, standard
/// flavour.
pub fn strong_cells() -> Vec<Cell> {
    use PropId::*;
    [
        Symmetry,
        STransitivityA,
        STransitivityB,
        CTransitivity,
        LiftConjunction,
        LiftExistential,
        RuleTranslation,
        RuleExtrapolation,
    ]
    .into_iter()
    .map(|prop| Cell { prop, strict: false, expected: CellVerdict::Holds, fixture: None })
    .collect()
}

/// A cell with its verification outcome.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub prop: PropId,
    pub strict: bool,
    pub expected: CellVerdict,
    pub fixture: Option<&'static str>,
    /// The verification confirmed the expected verdict.
    pub confirmed: bool,
    pub detail: String,
}

/// The full matrix report.
#[derive(Debug, Clone)]
pub struct MatrixReport {
    pub mode: Mode,
    pub cells: Vec<CellResult>,
}

impl MatrixReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.confirmed)
    }
}

/// Verifies every cell for the mode. HOLDS cells sweep `seeds` generated
/// interpretations; FAILS cells re-run their fixture and require its
/// expected verdicts (premises true, conclusion false) to reproduce.
pub fn run_divergence_matrix(mode: Mode, seeds: u64) -> Result<MatrixReport, ModelError> {
    let cells = match mode {
        Mode::Strong => strong_cells(),
        Mode::Weak => weak_cells(),
    };
    let params = GenParams { mode, ..GenParams::default() };
    let mut out = Vec::new();
    for cell in cells {
        let (confirmed, detail) = match cell.expected {
            CellVerdict::Holds => {
                let sweep = run_sweep(cell.prop, &params, seeds, cell.strict, 3)?;
                (
                    sweep.passed(),
                    format!(
                        "sweep: {} instances, {} with premises, {} violations",
                        sweep.instances,
                        sweep.nonvacuous,
                        sweep.violations.len()
                    ),
                )
            }
            CellVerdict::Fails => {
                let id = cell.fixture.expect("FAILS cells cite a fixture");
                let fixture = fixtures::by_id(id)
                    .ok_or_else(|| ModelError::Invalid(format!("unknown fixture `{id}`")))?;
                let report = fixtures::run(fixture)?;
                (report.passed(), format!("fixture {id} reproduced: {}", report.passed()))
            }
        };
        out.push(CellResult {
            prop: cell.prop,
            strict: cell.strict,
            expected: cell.expected,
            fixture: cell.fixture,
            confirmed,
            detail,
        });
    }
    Ok(MatrixReport { mode, cells: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weak_matrix_smoke() {
        let report = run_divergence_matrix(Mode::Weak, 25).unwrap();
        for cell in &report.cells {
            assert!(
                cell.confirmed,
                "{} ({}) expected {} — {}",
                cell.prop,
                if cell.strict { "strict" } else { "standard" },
                cell.expected,
                cell.detail
            );
        }
    }
}
