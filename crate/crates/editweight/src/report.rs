//! Text tables and CSV exports.

use std::io::Write;

use anyhow::Result;
use editweight_core::metrics::{CorpusScores, EvalReport};
use editweight_core::model::LossCurve;

/// Plain-text table with the column groups of the results table:
/// similarity (SARI, BLEU, ROUGE-L), simplicity (FKGL, difficult words,
/// word count) and edit distance.
pub fn format_table(rows: &[(String, CorpusScores)]) -> String {
    let width = rows
        .iter()
        .map(|r| r.0.chars().count())
        .max()
        .unwrap_or(0)
        .max(5);
    let mut out = String::new();
    out.push_str(&format!(
        "{:width$} | {:^22} | {:^26} |\n",
        "", "Similarity", "Simplicity"
    ));
    out.push_str(&format!(
        "{:width$} | {:>6} {:>6} {:>8} | {:>6} {:>10} {:>8} | {:>13}\n",
        "Model", "SARI", "BLEU", "ROUGE-L", "FKGL", "Difficult", "#words", "Edit distance"
    ));
    out.push_str(&format!("{}\n", "-".repeat(width + 70)));
    for (name, s) in rows {
        out.push_str(&format!(
            "{name:width$} | {:>6.1} {:>6.1} {:>8.1} | {:>6.1} {:>10.1} {:>8.1} | {:>13.1}\n",
            s.sari, s.bleu, s.rouge_l, s.fkgl, s.difficult_words, s.word_count, s.edit_distance
        ));
    }
    out
}

/// One `(edit_distance, sari)` row per sentence.
pub fn write_scatter(report: &EvalReport, w: impl Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["id", "edit_distance", "sari"])?;
    for s in &report.per_sentence {
        csv.write_record([
            s.id.clone(),
            s.edit_distance.to_string(),
            s.sari.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_loss_csv(curve: &LossCurve, w: impl Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["step", "loss"])?;
    for (k, loss) in curve.steps.iter().enumerate() {
        csv.write_record([(k + 1).to_string(), loss.to_string()])?;
    }
    csv.flush()?;
    Ok(())
}

/// Mean and sample standard deviation (0 for fewer than two values).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_std_examples() {
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
        assert!(mean_std(&[]).0.is_nan());
    }

    #[test]
    fn table_has_one_line_per_row() {
        let s = CorpusScores {
            sari: 15.6,
            bleu: 27.0,
            rouge_l: 53.9,
            fkgl: 13.8,
            difficult_words: 8.5,
            word_count: 26.2,
            edit_distance: 0.0,
        };
        let table = format_table(&[("Copy".into(), s)]);
        assert_eq!(table.lines().count(), 4);
        assert!(table.lines().last().unwrap().starts_with("Copy"));
        assert!(table.contains("15.6"));
    }

    #[test]
    fn loss_csv_numbers_steps_from_one() {
        let curve = LossCurve {
            steps: vec![2.5, 1.25],
            epochs: vec![1.875],
        };
        let mut buf = Vec::new();
        write_loss_csv(&curve, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "step,loss\n1,2.5\n2,1.25\n"
        );
    }
}
