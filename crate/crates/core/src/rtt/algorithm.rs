use super::check::{bounded_check, check_rtt, BoundedReport, RttReport, Witness};
use super::filtration::{maximal_filtration, Filtration};
use crate::moves::{collapse_connecting_path, invariant_core_subdivision};
use crate::rep::TopRep;
use crate::trace::{RoundKind, Trace};
use crate::traintrack::{descend, normalize_run, Mode, Run, TtError};

#[derive(Debug, Clone)]
pub struct RttOutcome {
    pub rep: TopRep,
    pub filtration: Filtration,
    pub report: RttReport,
    pub bounded: BoundedReport,
    pub trace: Trace,
}

/// Improve a representative to a relative train track map.
///
/// After normalizing, the EG strata are examined top-down. A failure of EG-i is
/// repaired by an invariant core subdivision, EG-ii by collapsing the connecting
/// path, and EG-iii by a fold descent at the offending turn, which must strictly
/// lower the pf sequence. Each repair is followed by normalization.
pub fn relative_train_track_algorithm(f: &TopRep, budget: usize) -> Result<RttOutcome, TtError> {
    let mut run = Run::new(f, budget);
    normalize_run(&mut run, &Mode::Rebound(None))?;
    let mut stalls = 0;
    loop {
        let filt = maximal_filtration(&run.cur);
        let report = check_rtt(&run.cur, &filt);
        if report.passes() {
            let bounded = bounded_check(&run.cur, &filt);
            return Ok(RttOutcome { rep: run.cur, filtration: filt, report, bounded, trace: run.trace });
        }
        let before = run.trace.steps.len();
        if !report.structure.is_empty() {
            run.cleanup()?;
        }
        for sv in report.strata.iter().rev() {
            if sv.eg_i.is_err() {
                let token = run.trace.open_round();
                if let Some(r) = invariant_core_subdivision(&run.cur, sv.index)? {
                    run.commit(r)?;
                }
                normalize_run(&mut run, &Mode::Relative)?;
                run.trace.close_round(RoundKind::CoreSubdivision, token);
                break;
            }
            if let Err(Witness::ConnectingPath(alpha)) = &sv.eg_ii {
                let token = run.trace.open_round();
                let rs = collapse_connecting_path(&run.cur, alpha)?;
                run.commit_all(rs)?;
                normalize_run(&mut run, &Mode::Relative)?;
                run.trace.close_round(RoundKind::ConnectingPath, token);
                break;
            }
            if let Err(Witness::IllegalTurn { edge, position, turn }) = &sv.eg_iii {
                descend(&mut run, *edge, *position, turn, true)?;
                break;
            }
        }
        if run.trace.steps.len() == before {
            stalls += 1;
            if stalls > 2 {
                return Err(TtError::Stalled(report.describe(&run.cur.graph)));
            }
        } else {
            stalls = 0;
        }
    }
}
