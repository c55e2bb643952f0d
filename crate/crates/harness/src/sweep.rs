use std::io::Write;

use stego_core::{Error, LanguageModel, Result, Stegosystem};

use crate::audit::audit_distortion;
use crate::capacity::measure_capacity;
use crate::corpus::Corpus;

pub const CSV_HEADER: [&str; 7] = [
    "f",
    "p",
    "bits_per_word",
    "masked_positions",
    "zero_capacity_positions",
    "distortion_rate",
    "errors",
];

/// One grid cell. Measurement fields are `None` when the cell failed, in
/// which case `errors` says why.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepRow {
    pub f: usize,
    pub p: f64,
    pub bits_per_word: Option<f64>,
    pub masked_positions: Option<usize>,
    pub zero_capacity_positions: Option<usize>,
    pub distortion_rate: Option<f64>,
    pub errors: String,
}

impl SweepRow {
    fn record(&self) -> [String; 7] {
        let opt = |v: Option<String>| v.unwrap_or_default();
        [
            self.f.to_string(),
            self.p.to_string(),
            opt(self.bits_per_word.map(|v| format!("{v:.6}"))),
            opt(self.masked_positions.map(|v| v.to_string())),
            opt(self.zero_capacity_positions.map(|v| v.to_string())),
            opt(self.distortion_rate.map(|v| format!("{v:.6}"))),
            self.errors.clone(),
        ]
    }
}

fn cell(
    corpus: &Corpus,
    system: &Stegosystem,
    model: &dyn LanguageModel,
    f: usize,
    p: f64,
    message_bits: usize,
    seed: u64,
) -> Result<SweepRow> {
    let system = system.with_config(system.config().with_interval(f).with_threshold(p))?;
    let capacity = measure_capacity(corpus, &system, model, message_bits, seed)?;
    let distortion = audit_distortion(corpus, &system, model)?;
    let errors = if capacity.documents_skipped > 0 {
        format!("capacity-exhausted in {} of {} documents", capacity.documents_skipped, corpus.len())
    } else {
        String::new()
    };
    Ok(SweepRow {
        f,
        p,
        bits_per_word: Some(capacity.bits_per_word),
        masked_positions: Some(capacity.positions_total),
        zero_capacity_positions: Some(capacity.positions_zero_capacity),
        distortion_rate: Some(distortion.rate),
        errors,
    })
}

/// Measures every `(f, p)` pair, `f` outermost. A failing cell becomes a row
/// with its error instead of aborting the sweep.
pub fn sweep(
    corpus: &Corpus,
    system: &Stegosystem,
    model: &dyn LanguageModel,
    intervals: &[usize],
    thresholds: &[f64],
    message_bits: usize,
    seed: u64,
) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(intervals.len() * thresholds.len());
    for &f in intervals {
        for &p in thresholds {
            rows.push(
                cell(corpus, system, model, f, p, message_bits, seed).unwrap_or_else(|e: Error| SweepRow {
                    f,
                    p,
                    errors: format!("{}: {e}", e.kind()),
                    ..SweepRow::default()
                }),
            );
        }
    }
    rows
}

pub fn write_csv<W: Write>(out: W, rows: &[SweepRow]) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.write_record(row.record())?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let rows = [
            SweepRow {
                f: 2,
                p: 0.05,
                bits_per_word: Some(0.25),
                masked_positions: Some(40),
                zero_capacity_positions: Some(3),
                distortion_rate: Some(0.0125),
                errors: String::new(),
            },
            SweepRow {
                f: 3,
                p: 0.1,
                errors: "backend: boom, again".into(),
                ..SweepRow::default()
            },
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "f,p,bits_per_word,masked_positions,zero_capacity_positions,distortion_rate,errors\n\
             2,0.05,0.250000,40,3,0.012500,\n\
             3,0.1,,,,,\"backend: boom, again\"\n"
        );
    }
}
