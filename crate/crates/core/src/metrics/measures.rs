use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::table::{per_class_stats, ContingencyTable};
use super::MetricsError;

// Denominators below this are treated as degenerate.
const DEGENERATE: f64 = 1e-12;

/// The closed set of evaluation measures a booster can be driven by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    #[serde(rename = "accuracy")]
    RandAccuracy,
    #[serde(rename = "kappa")]
    CohenKappa,
    Informedness,
    Markedness,
    #[serde(rename = "matthews")]
    MatthewsCorrelation,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 5] = [
        MeasureKind::RandAccuracy,
        MeasureKind::CohenKappa,
        MeasureKind::Informedness,
        MeasureKind::Markedness,
        MeasureKind::MatthewsCorrelation,
    ];

    /// Lowercase flag name, e.g. `informedness`.
    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::RandAccuracy => "accuracy",
            MeasureKind::CohenKappa => "kappa",
            MeasureKind::Informedness => "informedness",
            MeasureKind::Markedness => "markedness",
            MeasureKind::MatthewsCorrelation => "matthews",
        }
    }

    pub fn is_chance_corrected(self) -> bool {
        self != MeasureKind::RandAccuracy
    }

    pub fn evaluate(self, table: &ContingencyTable) -> f64 {
        match self {
            MeasureKind::RandAccuracy => rand_accuracy(table),
            MeasureKind::CohenKappa => cohen_kappa(table),
            MeasureKind::Informedness => informedness(table),
            MeasureKind::Markedness => markedness(table),
            MeasureKind::MatthewsCorrelation => matthews_correlation(table),
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MeasureKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| MetricsError::UnknownMeasure(s.to_string()))
    }
}

/// Fraction of the total weight on the diagonal.
pub fn rand_accuracy(table: &ContingencyTable) -> f64 {
    (table.trace() / table.total()).clamp(0.0, 1.0)
}

/// Cohen's kappa with the expectation taken from the product of the marginals.
pub fn cohen_kappa(table: &ContingencyTable) -> f64 {
    let observed = rand_accuracy(table);
    let expected: f64 = per_class_stats(table).iter().map(|s| s.prevalence * s.bias).sum();
    let room = 1.0 - expected;
    if room < DEGENERATE {
        return 0.0;
    }
    ((observed - expected) / room).clamp(-1.0, 1.0)
}

/// Bookmaker informedness.
///
/// Each class contributes its one-vs-rest informedness `(recall - bias) / (1 - prevalence)`
/// (equivalently `tpr - fpr`), weighted by how often it is predicted. Classes whose
/// prevalence is 0 or 1 contribute nothing. For two classes this is
/// `recall_0 + recall_1 - 1` whenever both classes are present.
pub fn informedness(table: &ContingencyTable) -> f64 {
    per_class_stats(table)
        .iter()
        .map(|s| {
            let room = 1.0 - s.prevalence;
            if s.prevalence <= 0.0 || room < DEGENERATE {
                0.0
            } else {
                s.bias * (s.recall - s.bias) / room
            }
        })
        .sum::<f64>()
        .clamp(-1.0, 1.0)
}

/// Markedness, the precision/prevalence dual of [`informedness`]: one-vs-rest
/// terms `(precision - prevalence) / (1 - bias)` weighted by prevalence.
pub fn markedness(table: &ContingencyTable) -> f64 {
    per_class_stats(table)
        .iter()
        .map(|s| {
            let room = 1.0 - s.bias;
            if s.bias <= 0.0 || room < DEGENERATE {
                0.0
            } else {
                s.prevalence * (s.precision - s.prevalence) / room
            }
        })
        .sum::<f64>()
        .clamp(-1.0, 1.0)
}

/// Signed geometric mean of informedness and markedness. For a 2x2 table this is
/// the usual Matthews correlation coefficient.
pub fn matthews_correlation(table: &ContingencyTable) -> f64 {
    let inf = informedness(table);
    let mark = markedness(table);
    let sign = if inf != 0.0 { inf.signum() } else { mark.signum() };
    if inf == 0.0 && mark == 0.0 {
        return 0.0;
    }
    (sign * (inf * mark).abs().sqrt()).clamp(-1.0, 1.0)
}

/// Maps a chance-corrected score onto `[0, 1]` as `(accuracy_like, error_like)`,
/// sending chance to one half.
pub fn kappa_rescale(kappa: f64) -> Result<(f64, f64), MetricsError> {
    if !(-1.0..=1.0).contains(&kappa) {
        return Err(MetricsError::KappaOutOfRange(kappa));
    }
    Ok(((kappa + 1.0) / 2.0, (1.0 - kappa) / 2.0))
}

/// Error used by the booster: `1 - accuracy` for Rand accuracy, `(1 - kappa) / 2`
/// for every chance-corrected measure.
pub fn generalized_error(measure: MeasureKind, table: &ContingencyTable) -> f64 {
    match measure {
        MeasureKind::RandAccuracy => 1.0 - rand_accuracy(table),
        other => (1.0 - other.evaluate(table)) / 2.0,
    }
}

/// All five measures of one table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValues {
    pub accuracy: f64,
    pub kappa: f64,
    pub informedness: f64,
    pub markedness: f64,
    pub matthews: f64,
}

impl MeasureValues {
    pub fn of(table: &ContingencyTable) -> Self {
        Self {
            accuracy: rand_accuracy(table),
            kappa: cohen_kappa(table),
            informedness: informedness(table),
            markedness: markedness(table),
            matthews: matthews_correlation(table),
        }
    }

    pub fn get(&self, measure: MeasureKind) -> f64 {
        match measure {
            MeasureKind::RandAccuracy => self.accuracy,
            MeasureKind::CohenKappa => self.kappa,
            MeasureKind::Informedness => self.informedness,
            MeasureKind::Markedness => self.markedness,
            MeasureKind::MatthewsCorrelation => self.matthews,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn reference() -> ContingencyTable {
        ContingencyTable::from_cells(&["0", "1"], &[vec![40.0, 10.0], vec![20.0, 30.0]]).unwrap()
    }

    fn table(cells: &[Vec<f64>]) -> ContingencyTable {
        let labels: Vec<String> = (0..cells.len()).map(|i| i.to_string()).collect();
        ContingencyTable::from_cells(&labels, cells).unwrap()
    }

    #[test]
    fn reference_table_values() {
        let t = reference();
        assert_abs_diff_eq!(rand_accuracy(&t), 0.70, epsilon = 1e-12);
        assert_abs_diff_eq!(cohen_kappa(&t), 0.40, epsilon = 1e-12);
        assert_abs_diff_eq!(informedness(&t), 0.40, epsilon = 1e-12);
        assert_abs_diff_eq!(markedness(&t), 5.0 / 12.0, epsilon = 1e-12);
        assert_abs_diff_eq!(matthews_correlation(&t), (0.40f64 * 5.0 / 12.0).sqrt(), epsilon = 1e-12);
        // determinant form of the 2x2 correlation
        let (a, b, c, d) = (40.0, 10.0, 20.0, 30.0);
        let det = (a * d - b * c) / ((a + b) * (c + d) * (a + c) * (b + d) as f64).sqrt();
        assert_abs_diff_eq!(matthews_correlation(&t), det, epsilon = 1e-12);
    }

    #[test]
    fn diagonal_and_zero_diagonal_accuracy() {
        assert_eq!(rand_accuracy(&table(&[vec![2.0, 0.0], vec![0.0, 3.0]])), 1.0);
        assert_eq!(rand_accuracy(&table(&[vec![0.0, 2.0], vec![3.0, 0.0]])), 0.0);
    }

    #[test]
    fn independence_scores_zero() {
        // rows proportional to the column marginals 1:3
        let t = table(&[vec![1.0, 3.0], vec![2.0, 6.0]]);
        assert_abs_diff_eq!(cohen_kappa(&t), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(informedness(&t), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(markedness(&t), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(matthews_correlation(&t), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(generalized_error(MeasureKind::CohenKappa, &t), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn perfect_diagonals_score_one() {
        for t in [
            table(&[vec![5.0, 0.0], vec![0.0, 1.0]]),
            table(&[vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 3.0]]),
            table(&[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 3.0]]),
        ] {
            for m in MeasureKind::ALL {
                assert_abs_diff_eq!(m.evaluate(&t), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn single_column_scores_zero_informedness() {
        let t = table(&[vec![6.0, 0.0, 0.0], vec![3.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]]);
        assert_eq!(informedness(&t), 0.0);
        assert_eq!(markedness(&t), 0.0);
        assert_eq!(matthews_correlation(&t), 0.0);
        assert_abs_diff_eq!(rand_accuracy(&t), 0.6, epsilon = 1e-12);
    }

    #[test]
    fn rescale_endpoints() {
        assert_eq!(kappa_rescale(0.0).unwrap(), (0.5, 0.5));
        assert_eq!(kappa_rescale(1.0).unwrap(), (1.0, 0.0));
        assert_eq!(kappa_rescale(-1.0).unwrap(), (0.0, 1.0));
        assert!(kappa_rescale(1.5).is_err());
        assert!(kappa_rescale(f64::NAN).is_err());
    }

    #[test]
    fn generalized_error_examples() {
        let t = reference();
        assert_abs_diff_eq!(generalized_error(MeasureKind::RandAccuracy, &t), 0.30, epsilon = 1e-12);
        assert_abs_diff_eq!(generalized_error(MeasureKind::Informedness, &t), 0.30, epsilon = 1e-12);
    }

    #[test]
    fn parses_flag_names() {
        assert_eq!("informedness".parse::<MeasureKind>().unwrap(), MeasureKind::Informedness);
        assert_eq!("kappa".parse::<MeasureKind>().unwrap(), MeasureKind::CohenKappa);
        assert!("gini".parse::<MeasureKind>().is_err());
        for m in MeasureKind::ALL {
            assert_eq!(m.name().parse::<MeasureKind>().unwrap(), m);
        }
    }
}
