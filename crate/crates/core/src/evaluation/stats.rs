use serde::Serialize;

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub sd: f64,
    /// Half-width of a two-standard-error interval.
    pub two_se: f64,
}

pub fn summarize_stats(values: &[f64]) -> Result<Summary, EvalError> {
    let n = values.len();
    if n < 2 {
        return Err(EvalError::TooFewValues(n));
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt();
    Ok(Summary { mean, sd, two_se: 2.0 * sd / nf.sqrt() })
}
