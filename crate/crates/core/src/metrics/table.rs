use serde::Serialize;

use super::MetricsError;

/// Weighted K x K confusion counts. Rows are gold classes, columns are
/// predicted classes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContingencyTable {
    labels: Vec<String>,
    cells: Vec<f64>,
    total: f64,
}

/// One-vs-rest marginal statistics for a single class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassStats {
    pub recall: f64,
    pub precision: f64,
    pub prevalence: f64,
    pub bias: f64,
}

impl ContingencyTable {
    /// Builds a table from explicit rows of cells (`cells[gold][predicted]`).
    pub fn from_cells<S: AsRef<str>>(labels: &[S], cells: &[Vec<f64>]) -> Result<Self, MetricsError> {
        let k = labels.len();
        if k < 2 {
            return Err(MetricsError::TooFewClasses(k));
        }
        if cells.len() != k || cells.iter().any(|row| row.len() != k) {
            return Err(MetricsError::ShapeMismatch { expected: k });
        }
        let flat: Vec<f64> = cells.iter().flatten().copied().collect();
        Self::from_flat(labels.iter().map(|l| l.as_ref().to_string()).collect(), flat)
    }

    /// Builds a table from class indices; `gold[i]` and `predicted[i]` must be `< labels.len()`.
    pub fn from_indices<S: AsRef<str>>(
        labels: &[S],
        gold: &[usize],
        predicted: &[usize],
        weights: &[f64],
    ) -> Result<Self, MetricsError> {
        let k = labels.len();
        if k < 2 {
            return Err(MetricsError::TooFewClasses(k));
        }
        if gold.len() != predicted.len() || gold.len() != weights.len() {
            return Err(MetricsError::LengthMismatch {
                gold: gold.len(),
                predicted: predicted.len(),
                weights: weights.len(),
            });
        }
        let mut cells = vec![0.0; k * k];
        for ((&g, &p), &w) in gold.iter().zip(predicted).zip(weights) {
            if g >= k || p >= k {
                return Err(MetricsError::UnknownLabel(g.max(p).to_string()));
            }
            if !(w >= 0.0) || !w.is_finite() {
                return Err(MetricsError::InvalidWeight(w));
            }
            cells[g * k + p] += w;
        }
        Self::from_flat(labels.iter().map(|l| l.as_ref().to_string()).collect(), cells)
    }

    fn from_flat(labels: Vec<String>, cells: Vec<f64>) -> Result<Self, MetricsError> {
        if let Some(&bad) = cells.iter().find(|c| !(**c >= 0.0) || !c.is_finite()) {
            return Err(MetricsError::InvalidWeight(bad));
        }
        let total: f64 = cells.iter().sum();
        if total <= 0.0 {
            return Err(MetricsError::ZeroTotal);
        }
        Ok(Self { labels, cells, total })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_classes(&self) -> usize {
        self.labels.len()
    }

    pub fn cell(&self, gold: usize, predicted: usize) -> f64 {
        self.cells[gold * self.num_classes() + predicted]
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn row_sum(&self, gold: usize) -> f64 {
        let k = self.num_classes();
        self.cells[gold * k..(gold + 1) * k].iter().sum()
    }

    pub fn col_sum(&self, predicted: usize) -> f64 {
        let k = self.num_classes();
        (0..k).map(|g| self.cells[g * k + predicted]).sum()
    }

    pub fn trace(&self) -> f64 {
        (0..self.num_classes()).map(|c| self.cell(c, c)).sum()
    }

    /// Rows of the table as nested vectors, mostly for display and tests.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.cells.chunks(self.num_classes()).map(<[f64]>::to_vec).collect()
    }

    /// Returns a copy with every cell multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self, MetricsError> {
        Self::from_flat(self.labels.clone(), self.cells.iter().map(|c| c * factor).collect())
    }
}

/// Counts weighted (gold, predicted) pairs into a table over `labels`.
pub fn tabulate<S: AsRef<str>>(
    gold: &[S],
    predicted: &[S],
    weights: &[f64],
    labels: &[S],
) -> Result<ContingencyTable, MetricsError> {
    if gold.len() != predicted.len() || gold.len() != weights.len() {
        return Err(MetricsError::LengthMismatch {
            gold: gold.len(),
            predicted: predicted.len(),
            weights: weights.len(),
        });
    }
    if gold.is_empty() {
        return Err(MetricsError::Empty);
    }
    let index_of = |name: &str| -> Result<usize, MetricsError> {
        labels
            .iter()
            .position(|l| l.as_ref() == name)
            .ok_or_else(|| MetricsError::UnknownLabel(name.to_string()))
    };
    let gold_idx = gold.iter().map(|g| index_of(g.as_ref())).collect::<Result<Vec<_>, _>>()?;
    let pred_idx = predicted.iter().map(|p| index_of(p.as_ref())).collect::<Result<Vec<_>, _>>()?;
    ContingencyTable::from_indices(labels, &gold_idx, &pred_idx, weights)
}

/// Recall, precision, prevalence and bias of every class, treating it as the
/// positive class against the rest. Empty rows or columns give 0 recall or
/// precision.
pub fn per_class_stats(table: &ContingencyTable) -> Vec<ClassStats> {
    let total = table.total();
    (0..table.num_classes())
        .map(|c| {
            let hit = table.cell(c, c);
            let row = table.row_sum(c);
            let col = table.col_sum(c);
            ClassStats {
                recall: if row > 0.0 { hit / row } else { 0.0 },
                precision: if col > 0.0 { hit / col } else { 0.0 },
                prevalence: row / total,
                bias: col / total,
            }
        })
        .collect()
}
