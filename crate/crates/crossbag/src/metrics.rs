//! Evaluation measures: concordance correlation coefficient, weighted and
//! unweighted accuracy.

use crate::error::{Error, Result};

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Concordance correlation coefficient with population moments:
/// 2 cov(g, p) / (var(g) + var(p) + (mean(g) - mean(p))^2).
/// Unlike the linear correlation it also penalizes scale and mean shifts.
pub fn ccc(gold: &[f64], pred: &[f64]) -> Result<f64> {
    if gold.len() != pred.len() {
        return Err(Error::data(format!(
            "ccc: series lengths differ ({} vs {})",
            gold.len(),
            pred.len()
        )));
    }
    if gold.len() < 2 {
        return Err(Error::data("ccc: need at least 2 values"));
    }
    if gold.iter().chain(pred).any(|x| !x.is_finite()) {
        return Err(Error::data("ccc: non-finite value"));
    }
    let n = gold.len() as f64;
    let mg = mean(gold);
    let mp = mean(pred);
    let var_g: f64 = gold.iter().map(|x| (x - mg) * (x - mg)).sum::<f64>() / n;
    let var_p: f64 = pred.iter().map(|x| (x - mp) * (x - mp)).sum::<f64>() / n;
    if var_g == 0.0 && var_p == 0.0 {
        return Err(Error::data("ccc: both series are constant"));
    }
    let cov: f64 = gold
        .iter()
        .zip(pred)
        .map(|(g, p)| (g - mg) * (p - mp))
        .sum::<f64>()
        / n;
    Ok(2.0 * cov / (var_g + var_p + (mg - mp) * (mg - mp)))
}

/// Overall fraction of correct predictions.
pub fn weighted_accuracy(gold: &[String], pred: &[String]) -> Result<f64> {
    check_labels(gold, pred)?;
    let correct = gold.iter().zip(pred).filter(|(g, p)| g == p).count();
    Ok(correct as f64 / gold.len() as f64)
}

/// Unweighted mean of per-class recalls over the classes present in gold.
pub fn unweighted_accuracy(gold: &[String], pred: &[String]) -> Result<f64> {
    check_labels(gold, pred)?;
    let mut classes: Vec<&String> = Vec::new();
    for g in gold {
        if !classes.contains(&g) {
            classes.push(g);
        }
    }
    let mut recall_sum = 0.0;
    for class in &classes {
        let total = gold.iter().filter(|g| g == class).count();
        let hit = gold
            .iter()
            .zip(pred)
            .filter(|(g, p)| *g == *class && g == p)
            .count();
        recall_sum += hit as f64 / total as f64;
    }
    Ok(recall_sum / classes.len() as f64)
}

fn check_labels(gold: &[String], pred: &[String]) -> Result<()> {
    if gold.is_empty() {
        return Err(Error::data("accuracy: empty input"));
    }
    if gold.len() != pred.len() {
        return Err(Error::data(format!(
            "accuracy: series lengths differ ({} vs {})",
            gold.len(),
            pred.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn pearson(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mx = mean(x);
        let my = mean(y);
        let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / n;
        let sx = (x.iter().map(|a| (a - mx) * (a - mx)).sum::<f64>() / n).sqrt();
        let sy = (y.iter().map(|b| (b - my) * (b - my)).sum::<f64>() / n).sqrt();
        cov / (sx * sy)
    }

    #[test]
    fn perfect_concordance() {
        let x = [1.0, 2.0, 3.0];
        assert!((ccc(&x, &x).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn perfect_anti_concordance() {
        assert!((ccc(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn shifted_series() {
        // cov 2/3, each var 2/3, mean gap 1 -> (4/3) / (7/3) = 4/7.
        let got = ccc(&[1.0, 2.0, 3.0], &[2.0, 3.0, 4.0]).unwrap();
        assert!((got - 4.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn mean_shift_penalized_but_pearson_blind() {
        let x = [0.3, 1.7, -0.2, 4.4, 2.0];
        let shifted: Vec<f64> = x.iter().map(|v| v + 1.0).collect();
        assert!(ccc(&x, &shifted).unwrap() < 1.0);
        assert!((pearson(&x, &shifted) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ccc_symmetric_and_bounded_by_pearson() {
        let x = [0.1, 0.9, 0.4, 0.7, 0.2, 0.95];
        let y = [0.3, 0.8, 0.35, 0.9, 0.1, 0.7];
        let a = ccc(&x, &y).unwrap();
        let b = ccc(&y, &x).unwrap();
        assert!((a - b).abs() < 1e-15);
        assert!(a.abs() <= pearson(&x, &y).abs() + 1e-15);
        assert!(a.abs() <= 1.0);
    }

    #[test]
    fn ccc_errors() {
        assert!(ccc(&[1.0], &[1.0]).is_err());
        assert!(ccc(&[1.0, 2.0], &[1.0]).is_err());
        assert!(ccc(&[2.0, 2.0], &[5.0, 5.0]).is_err());
        assert!(ccc(&[1.0, f64::NAN], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn accuracies() {
        let gold = labels(&["A", "A", "A", "B"]);
        let pred = labels(&["A", "A", "A", "A"]);
        assert_eq!(weighted_accuracy(&gold, &pred).unwrap(), 0.75);
        assert_eq!(unweighted_accuracy(&gold, &pred).unwrap(), 0.5);
    }

    #[test]
    fn all_correct() {
        let gold = labels(&["x", "y", "z"]);
        assert_eq!(weighted_accuracy(&gold, &gold).unwrap(), 1.0);
        assert_eq!(unweighted_accuracy(&gold, &gold).unwrap(), 1.0);
    }

    #[test]
    fn balanced_classes_agree() {
        let gold = labels(&["A", "B", "A", "B"]);
        let pred = labels(&["A", "A", "B", "B"]);
        let wa = weighted_accuracy(&gold, &pred).unwrap();
        let ua = unweighted_accuracy(&gold, &pred).unwrap();
        assert_eq!(wa, ua);
    }

    #[test]
    fn empty_input_errors() {
        assert!(weighted_accuracy(&[], &[]).is_err());
        assert!(unweighted_accuracy(&[], &[]).is_err());
    }
}
