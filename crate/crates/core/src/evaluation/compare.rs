use serde::Serialize;

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Within the band and at least as good as the reference.
    EquiWin,
    /// Better than the reference by more than the band.
    SigBoost,
    /// Worse than the reference by more than the band.
    SigLoss,
    /// Within the band but below the reference.
    Neutral,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::EquiWin => "equi_win",
            Verdict::SigBoost => "sig_boost",
            Verdict::SigLoss => "sig_loss",
            Verdict::Neutral => "neutral",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub equi_wins: usize,
    pub sig_boosts: usize,
    pub sig_losses: usize,
    pub neutral: usize,
}

impl Tally {
    pub fn of(verdicts: &[Verdict]) -> Self {
        let mut t = Tally::default();
        for v in verdicts {
            match v {
                Verdict::EquiWin => t.equi_wins += 1,
                Verdict::SigBoost => t.sig_boosts += 1,
                Verdict::SigLoss => t.sig_losses += 1,
                Verdict::Neutral => t.neutral += 1,
            }
        }
        t
    }
}

/// Compares per-dataset means against a reference with an absolute band.
pub fn equivalence_compare(method: &[f64], reference: &[f64], band: f64) -> Result<Vec<Verdict>, EvalError> {
    if method.len() != reference.len() {
        return Err(EvalError::Misaligned { methods: method.len(), references: reference.len() });
    }
    if !(band >= 0.0 && band.is_finite()) {
        return Err(EvalError::BadBand(band));
    }
    // absorbs rounding in differences such as 0.46 - 0.41
    let slack = 1e-12;
    Ok(method
        .iter()
        .zip(reference)
        .map(|(&m, &r)| {
            let d = m - r;
            if d > band + slack {
                Verdict::SigBoost
            } else if -d > band + slack {
                Verdict::SigLoss
            } else if d >= 0.0 {
                Verdict::EquiWin
            } else {
                Verdict::Neutral
            }
        })
        .collect())
}
