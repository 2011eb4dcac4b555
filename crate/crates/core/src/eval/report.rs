use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::run::EvalReport;

pub const TSV_HEADER: &str =
    "method\tscenario\tmacro_mode\trank\tmicro_p\tmicro_r\tmicro_f1\tmacro_p\tmacro_r\tmacro_f1\tdocs\tempty_preds";

/// Rounds to `decimals` places with halves going up. A tiny nudge absorbs
/// binary representation error so that e.g. 0.0625 -> 0.063.
pub fn round_half_up(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    ((x * scale) + 0.5 + 1e-9).floor() / scale
}

fn cell(x: f64) -> String {
    format!("{:.3}", round_half_up(x, 3))
}

pub fn render_tsv(reports: &[EvalReport<f64>]) -> String {
    let mut out = String::new();
    out.push_str(TSV_HEADER);
    out.push('\n');
    for r in reports {
        for e in &r.entries {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.method,
                r.scenario,
                r.macro_mode,
                e.rank,
                cell(e.micro.precision),
                cell(e.micro.recall),
                cell(e.micro.f1),
                cell(e.macro_.precision),
                cell(e.macro_.recall),
                cell(e.macro_.f1),
                r.counts.docs_evaluated,
                r.counts.empty_predictions,
            );
        }
    }
    out
}

pub fn write_reports_json(path: impl AsRef<Path>, reports: &[EvalReport<f64>]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, reports)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_reports_json(path: impl AsRef<Path>) -> Result<Vec<EvalReport<f64>>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_reader(BufReader::new(file))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{EvalCounts, MacroMode, MatchCounts, MetricTriple, RankEntry, Scenario};
    use crate::prediction::Rank;

    #[test]
    fn half_up_rounding() {
        assert_eq!(round_half_up(0.0625, 3), 0.063);
        assert_eq!(round_half_up(0.2715, 3), 0.272);
        assert_eq!(round_half_up(0.27149, 3), 0.271);
        assert_eq!(cell(1.0), "1.000");
        assert_eq!(cell(0.0), "0.000");
    }

    #[test]
    fn tsv_and_json_round_trip() {
        let report = EvalReport {
            method: "plt5kw".into(),
            scenario: Scenario::MinFreq(10),
            macro_mode: MacroMode::LabelGoldOnly,
            entries: vec![RankEntry {
                rank: Rank::All,
                totals: MatchCounts { tp: 1, fp: 2, fn_: 3 },
                micro: MetricTriple::from_counts(MatchCounts { tp: 1, fp: 2, fn_: 3 }),
                macro_: MetricTriple::from_pr(0.1, 0.2),
                macro_universe: 4,
            }],
            counts: EvalCounts { docs_evaluated: 5, empty_predictions: 1, ..Default::default() },
        };
        let tsv = render_tsv(std::slice::from_ref(&report));
        assert_eq!(
            tsv.lines().nth(1).unwrap(),
            "plt5kw\tmin_freq_10\tlabel_gold_only\tall\t0.333\t0.250\t0.286\t0.100\t0.200\t0.133\t5\t1"
        );
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        write_reports_json(&path, std::slice::from_ref(&report)).unwrap();
        let back = read_reports_json(&path).unwrap();
        assert_eq!(back, vec![report]);
        assert_eq!(render_tsv(&back), tsv);
    }
}
