//! Cosine similarity and Spearman rank correlation between temporal patterns.

use serde::{Deserialize, Serialize};

use crate::error::{Result, RpnError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub cosine: f64,
    pub spearman: f64,
}

fn check_lengths(a: &[f64], b: &[f64], min: usize) -> Result<()> {
    if a.len() != b.len() {
        return Err(RpnError::DimensionMismatch {
            expected: format!("{} samples", a.len()),
            actual: format!("{} samples", b.len()),
        });
    }
    if a.len() < min {
        return Err(RpnError::UndefinedSimilarity("input too short"));
    }
    Ok(())
}

/// `a·b / (‖a‖‖b‖)`.
pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64> {
    check_lengths(a, b, 1)?;
    let (mut dot, mut aa, mut bb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        aa += x * x;
        bb += y * y;
    }
    if aa == 0.0 || bb == 0.0 {
        return Err(RpnError::UndefinedSimilarity("zero vector"));
    }
    Ok((dot / (aa * bb).sqrt()).clamp(-1.0, 1.0))
}

/// 1-based fractional ranks; tied values share the mean of their rank block.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end hold ranks start+1..=end.
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        cov += dx * dy;
        va += dx * dx;
        vb += dy * dy;
    }
    if va == 0.0 || vb == 0.0 {
        return None;
    }
    Some((cov / (va * vb).sqrt()).clamp(-1.0, 1.0))
}

/// Pearson correlation of average ranks.
pub fn spearman(a: &[f64], b: &[f64]) -> Result<f64> {
    check_lengths(a, b, 2)?;
    let is_constant = |v: &[f64]| v.iter().all(|x| *x == v[0]);
    if is_constant(a) || is_constant(b) {
        return Err(RpnError::UndefinedSimilarity("constant input"));
    }
    pearson(&average_ranks(a), &average_ranks(b))
        .ok_or(RpnError::UndefinedSimilarity("constant input"))
}

pub fn compare(a: &[f64], b: &[f64]) -> Result<SimilarityReport> {
    Ok(SimilarityReport {
        cosine: cosine(a, b)?,
        spearman: spearman(a, b)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_vectors() {
        let a = [0.5, 2.0, -1.0, 3.0];
        assert!((cosine(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(spearman(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn orthogonal_vectors() {
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn reversed_order() {
        let a: Vec<f64> = (0..9).map(|i| i as f64 * 1.5).collect();
        let b: Vec<f64> = a.iter().rev().copied().collect();
        assert_eq!(spearman(&a, &b).unwrap(), -1.0);
    }

    #[test]
    fn ranks_average_ties() {
        assert_eq!(
            average_ranks(&[3.0, 1.0, 3.0, 0.0, 3.0]),
            vec![4.0, 2.0, 4.0, 1.0, 4.0]
        );
    }

    #[test]
    fn undefined_inputs() {
        assert!(matches!(
            cosine(&[0.0, 0.0], &[1.0, 2.0]),
            Err(RpnError::UndefinedSimilarity(_))
        ));
        assert!(matches!(
            spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(RpnError::UndefinedSimilarity(_))
        ));
        assert!(spearman(&[1.0], &[1.0]).is_err());
        assert!(matches!(
            cosine(&[1.0], &[1.0, 2.0]),
            Err(RpnError::DimensionMismatch { .. })
        ));
    }
}
