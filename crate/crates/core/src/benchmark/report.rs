//! CSV exchange formats for benchmark results and summaries.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{FactorSample, MeasureSummary, MoodTestResult, SimulationRecord};
use crate::discrepancy::MeasureKind;
use crate::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct ResultRow {
    sim_id: u64,
    tau: u32,
    n_s: u32,
    d: u32,
    epsilon: u32,
    phi: u32,
    measure: String,
    r: Option<f64>,
    defined: bool,
}

/// One row per `(sim_id, measure)`; undefined `r` is an empty field.
pub fn write_results_csv<W: Write>(records: &[SimulationRecord], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for rec in records {
        let f = &rec.factors;
        for (kind, r) in &rec.r_by_measure {
            wtr.serialize(ResultRow {
                sim_id: f.sim_id,
                tau: f.tau,
                n_s: f.n_s,
                d: f.d,
                epsilon: f.epsilon,
                phi: f.phi,
                measure: kind.to_string(),
                r: *r,
                defined: r.is_some(),
            })?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Reads back a results file. The master seed is not stored and reads as 0.
pub fn read_results_csv<R: Read>(reader: R) -> Result<Vec<SimulationRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut by_sim: BTreeMap<u64, SimulationRecord> = BTreeMap::new();
    for (line, row) in rdr.deserialize::<ResultRow>().enumerate() {
        let row = row.map_err(|e| Error::Domain(format!("results row {}: {e}", line + 2)))?;
        let kind: MeasureKind = row.measure.parse()?;
        let rec = by_sim.entry(row.sim_id).or_insert_with(|| SimulationRecord {
            factors: FactorSample {
                tau: row.tau,
                n_s: row.n_s,
                d: row.d,
                epsilon: row.epsilon,
                phi: row.phi,
                sim_id: row.sim_id,
                master_seed: 0,
            },
            r_by_measure: BTreeMap::new(),
            wall_times: BTreeMap::new(),
        });
        rec.r_by_measure.insert(kind, if row.defined { row.r } else { None });
    }
    Ok(by_sim.into_values().collect())
}

pub fn write_summary_csv<W: Write>(summaries: &[MeasureSummary], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record([
        "measure",
        "median",
        "q1",
        "q3",
        "mean",
        "skewness",
        "frac_negative",
        "frac_undefined",
        "n_defined",
        "n_undefined",
    ])?;
    for s in summaries {
        wtr.write_record([
            s.kind.to_string(),
            s.median.to_string(),
            s.q1.to_string(),
            s.q3.to_string(),
            s.mean.to_string(),
            s.skewness.to_string(),
            s.frac_negative.to_string(),
            s.frac_undefined.to_string(),
            s.n_defined.to_string(),
            s.n_undefined.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Symmetric p-value matrix with a leading `measure` column; the diagonal is 1.
pub fn write_mood_csv<W: Write>(results: &[MoodTestResult], writer: W) -> Result<()> {
    let kinds = MeasureKind::ALL;
    let lookup = |a: MeasureKind, b: MeasureKind| -> f64 {
        if a == b {
            return 1.0;
        }
        results
            .iter()
            .find(|r| r.pair == (a, b) || r.pair == (b, a))
            .map_or(f64::NAN, |r| r.p_value)
    };
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = vec!["measure".to_string()];
    header.extend(kinds.iter().map(|k| k.to_string()));
    wtr.write_record(&header)?;
    for a in kinds {
        let mut row = vec![a.to_string()];
        row.extend(kinds.iter().map(|&b| lookup(a, b).to_string()));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_round_trip_with_undefined() {
        let mut r_by_measure: BTreeMap<MeasureKind, Option<f64>> =
            MeasureKind::ALL.iter().map(|&k| (k, Some(0.125))).collect();
        r_by_measure.insert(MeasureKind::L2, None);
        let rec = SimulationRecord {
            factors: FactorSample { tau: 2, n_s: 40, d: 7, epsilon: 3, phi: 8, sim_id: 5, master_seed: 0 },
            r_by_measure,
            wall_times: BTreeMap::new(),
        };
        let mut buf = Vec::new();
        write_results_csv(std::slice::from_ref(&rec), &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("sim_id,tau,n_s,d,epsilon,phi,measure,r,defined\n"));
        assert!(text.contains("5,2,40,7,3,8,l2,,false"));
        let back = read_results_csv(buf.as_slice()).unwrap();
        assert_eq!(back, vec![rec]);
    }
}
