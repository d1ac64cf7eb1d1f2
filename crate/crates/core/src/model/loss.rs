//! Weighted token cross entropy.
//!
//! `loss = Σ_t w_t · (−log softmax(logits_t)[target_t])`. A scalar weight
//! multiplies the unweighted sum instead of each term.

use alloc::vec;
use alloc::vec::Vec;

use crate::Error;

#[derive(Clone, Copy, Debug)]
pub enum LossWeights<'a> {
    Scalar(f64),
    PerToken(&'a [f64]),
}

fn log_softmax_at(row: &[f64], target: usize) -> (f64, f64) {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = row.iter().map(|&v| libm::exp(v - max)).sum();
    let log_z = max + libm::log(z);
    (row[target] - log_z, log_z)
}

fn check(
    logits: &[f64],
    vocab: usize,
    targets: &[usize],
    weights: LossWeights,
) -> Result<(), Error> {
    if vocab == 0 || logits.len() != targets.len() * vocab {
        return Err(Error::LengthMismatch {
            expected: targets.len() * vocab,
            actual: logits.len(),
        });
    }
    if let LossWeights::PerToken(w) = weights {
        if w.len() != targets.len() {
            return Err(Error::LengthMismatch {
                expected: targets.len(),
                actual: w.len(),
            });
        }
    }
    Ok(())
}

/// Weighted cross-entropy sum over positions. `logits` is `targets.len() × vocab`.
pub fn weighted_ce_loss(
    logits: &[f64],
    vocab: usize,
    targets: &[usize],
    weights: LossWeights,
) -> Result<f64, Error> {
    weighted_ce_loss_and_grad(logits, vocab, targets, weights).map(|(l, _)| l)
}

/// Loss and `∂loss/∂logits`. Positions with weight 0 contribute an all-zero
/// gradient row.
pub fn weighted_ce_loss_and_grad(
    logits: &[f64],
    vocab: usize,
    targets: &[usize],
    weights: LossWeights,
) -> Result<(f64, Vec<f64>), Error> {
    check(logits, vocab, targets, weights)?;
    let mut grad = vec![0.0; logits.len()];
    let mut total = 0.0;
    for (t, &target) in targets.iter().enumerate() {
        let row = &logits[t * vocab..(t + 1) * vocab];
        let (logp, log_z) = log_softmax_at(row, target);
        let w = match weights {
            LossWeights::Scalar(_) => 1.0,
            LossWeights::PerToken(ws) => ws[t],
        };
        total += w * -logp;
        let g = &mut grad[t * vocab..(t + 1) * vocab];
        for (gi, &v) in g.iter_mut().zip(row) {
            *gi = w * libm::exp(v - log_z);
        }
        g[target] -= w;
    }
    if let LossWeights::Scalar(c) = weights {
        total *= c;
        for g in &mut grad {
            *g *= c;
        }
    }
    Ok((total, grad))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_logits_give_length_times_log_vocab() {
        let (v, l) = (7, 5);
        let logits = vec![0.25; v * l];
        let targets = [0, 1, 2, 3, 6];
        let loss =
            weighted_ce_loss(&logits, v, &targets, LossWeights::PerToken(&[1.0; 5])).unwrap();
        assert!((loss - l as f64 * libm::log(v as f64)).abs() < 1e-12);
    }

    #[test]
    fn unit_weights_match_scalar_one() {
        let logits = [0.1, -2.0, 0.7, 1.5, 0.0, -0.3];
        let a = weighted_ce_loss_and_grad(&logits, 3, &[2, 0], LossWeights::PerToken(&[1.0, 1.0]))
            .unwrap();
        let b = weighted_ce_loss_and_grad(&logits, 3, &[2, 0], LossWeights::Scalar(1.0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_weight_rows_have_zero_gradient() {
        let logits = [0.1, -2.0, 0.7, 1.5, 0.0, -0.3];
        let (_, g) =
            weighted_ce_loss_and_grad(&logits, 3, &[2, 0], LossWeights::PerToken(&[0.0, 2.0]))
                .unwrap();
        assert!(g[..3].iter().all(|&x| x == 0.0));
        assert!(g[3..].iter().any(|&x| x != 0.0));
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(weighted_ce_loss(&[0.0; 6], 3, &[0], LossWeights::Scalar(1.0)).is_err());
        assert!(weighted_ce_loss(&[0.0; 6], 3, &[0, 1], LossWeights::PerToken(&[1.0])).is_err());
    }
}
