//! Ranking metrics: AUROC (Mann–Whitney, ties ½) and average precision.
//!
//! Both are computed exactly.  AUROC keeps the rank arithmetic in doubled
//! integers (so tied-group average ranks stay exact) and divides once at
//! the end; it therefore agrees bit-for-bit with a brute-force count over
//! all positive–negative pairs.  Average precision walks the stable
//! descending sort, so equal scores keep their original index order.

use crate::error::{Error, Result};

fn check_lengths(scores: &[f64], labels: &[bool]) -> Result<()> {
    if scores.len() != labels.len() {
        return Err(Error::Numeric(format!(
            "metric input mismatch: {} scores vs {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if let Some(bad) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::Numeric(format!("metric input contains non-finite score {bad}")));
    }
    Ok(())
}

/// Probability that a uniform positive outranks a uniform negative, ties
/// counted ½.
///
/// Fails unless both classes are present.
pub fn auroc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    check_lengths(scores, labels)?;
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::Numeric(format!(
            "auroc undefined: {n_pos} positives and {n_neg} negatives"
        )));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // Sum of positive ranks (1-based, ascending, tied groups averaged),
    // doubled so the averages stay integral.
    let mut doubled_rank_sum: u64 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // Group occupies ranks i+1 ..= j+1; doubled average = (i+1) + (j+1).
        let doubled_avg = (i + 1 + j + 1) as u64;
        let pos_in_group = order[i..=j].iter().filter(|&&k| labels[k]).count() as u64;
        doubled_rank_sum += doubled_avg * pos_in_group;
        i = j + 1;
    }

    // Mann–Whitney U = R_pos − n_pos(n_pos+1)/2, AUROC = U / (n_pos·n_neg).
    let doubled_u = doubled_rank_sum - (n_pos as u64) * (n_pos as u64 + 1);
    Ok(doubled_u as f64 / (2.0 * n_pos as f64 * n_neg as f64))
}

/// Mean precision at the ranks of the positives, in stable descending-score
/// order (equal scores keep their input order).
///
/// Fails with no positives.
pub fn average_precision(scores: &[f64], labels: &[bool]) -> Result<f64> {
    check_lengths(scores, labels)?;
    let n_pos = labels.iter().filter(|&&l| l).count();
    if n_pos == 0 {
        return Err(Error::Numeric("average precision undefined: no positives".into()));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a])); // stable descending

    let mut seen_pos = 0u64;
    let mut sum = 0.0;
    for (rank0, &k) in order.iter().enumerate() {
        if labels[k] {
            seen_pos += 1;
            sum += seen_pos as f64 / (rank0 as f64 + 1.0);
        }
    }
    Ok(sum / n_pos as f64)
}
