//! The negative-sampling objective shared by the PV-DBOW and Skip-gram
//! passes: one true target word contrasted against sampled noise words,
//!
//!   L = -ln sigma(u_t . v) - sum_n ln sigma(-u_n . v)
//!
//! where `v` is the predicting input vector (a document vector in DBOW, a
//! word vector in Skip-gram) and `u_*` are rows of the shared output matrix.
//! Sharing that output matrix across both passes is what places word and
//! document vectors in one feature space.
//!
//! Generic over the float type so the same code path that trains in `f32`
//! can be checked against finite differences in `f64`.

use std::ops::AddAssign;

use num_traits::Float;

use super::matrix::Matrix;

pub(crate) fn sigmoid<F: Float>(x: F) -> F {
    F::one() / (F::one() + (-x).exp())
}

fn dot<F: Float + AddAssign>(a: &[F], b: &[F]) -> F {
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        acc += *x * *y;
    }
    acc
}

// Floor inside ln() so saturated sigmoids cannot emit an infinite loss.
fn ln_clamped<F: Float>(x: F) -> f64 {
    let x = x.to_f64().unwrap_or(0.0);
    x.max(1e-12).ln()
}

/// Loss of one (input, target, negatives) example at the current parameters,
/// without updating anything.
pub fn negative_sampling_loss<F: Float + AddAssign>(
    input: &[F],
    output: &Matrix<F>,
    target: usize,
    negatives: &[usize],
) -> f64 {
    let mut loss = -ln_clamped(sigmoid(dot(input, output.row(target))));
    for &n in negatives {
        loss -= ln_clamped(sigmoid(-dot(input, output.row(n))));
    }
    loss
}

/// One stochastic gradient step on the negative-sampling objective.
///
/// For each sampled word with label `y` (1 for the target, 0 for noise) the
/// step is `g = lr * (y - sigma(u . v))`, applied as `u += g * v` and
/// `v += sum g * u`, with every gradient evaluated at the pre-update
/// parameters (provided target and negatives are distinct rows). `scratch`
/// must have the vector dimension; it accumulates the input-vector update.
/// Returns the loss at the pre-update parameters.
pub fn negative_sampling_update<F: Float + AddAssign>(
    input: &mut [F],
    output: &mut Matrix<F>,
    target: usize,
    negatives: &[usize],
    lr: F,
    scratch: &mut [F],
) -> f64 {
    let dim = input.len();
    debug_assert_eq!(dim, output.cols());
    debug_assert_eq!(scratch.len(), dim);

    for s in scratch.iter_mut() {
        *s = F::zero();
    }
    let mut loss = 0.0;

    for (k, &row_index) in std::iter::once(&target).chain(negatives).enumerate() {
        let row = output.row_mut(row_index);
        let f = dot(input, row);
        let activation = sigmoid(f);
        // ln(sigma(-f)) rather than ln(1 - sigma(f)): the latter cancels
        // catastrophically once f saturates.
        let (label, example_loss) = if k == 0 {
            (F::one(), -ln_clamped(activation))
        } else {
            (F::zero(), -ln_clamped(sigmoid(-f)))
        };
        loss += example_loss;
        let g = (label - activation) * lr;
        for c in 0..dim {
            scratch[c] += g * row[c];
            row[c] += g * input[c];
        }
    }

    for (v, s) in input.iter_mut().zip(scratch.iter()) {
        *v += *s;
    }
    loss
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn zero_parameters_give_zero_updates_and_known_loss() {
        // sigma(0) = 0.5 everywhere: with both input and outputs zero, every
        // gradient is zero and the loss is -(1 + negatives) * ln(0.5).
        let dim = 8;
        let negatives = [1usize, 2, 3];
        let mut input = vec![0.0f64; dim];
        let mut output = Matrix::zeros(4, dim);
        let mut scratch = vec![0.0f64; dim];
        let loss =
            negative_sampling_update(&mut input, &mut output, 0, &negatives, 0.1, &mut scratch);
        approx::assert_abs_diff_eq!(loss, -4.0 * 0.5f64.ln(), epsilon = 1e-12);
        assert!(input.iter().all(|&v| v == 0.0));
        assert!(output.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        // Quick f64 check here; the acceptance suite runs 100 configurations.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let dim = rng.gen_range(2..10);
            let vocab = rng.gen_range(4..12);
            let input: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let output =
                Matrix::fill_with(vocab, dim, || rng.gen_range(-1.0..1.0));
            let target = rng.gen_range(0..vocab);
            let negatives: Vec<usize> = (0..vocab)
                .filter(|&i| i != target)
                .take(3)
                .collect();
            check_gradient(&input, &output, target, &negatives);
        }
    }

    fn check_gradient(input: &[f64], output: &Matrix<f64>, target: usize, negatives: &[usize]) {
        let dim = input.len();
        let lr = 1.0;
        let mut scratch = vec![0.0f64; dim];

        let mut updated_input = input.to_vec();
        let mut updated_output = output.clone();
        negative_sampling_update(
            &mut updated_input,
            &mut updated_output,
            target,
            negatives,
            lr,
            &mut scratch,
        );

        let h = 1e-6;
        // d(update)/d(lr) at lr -> analytic descent direction = -gradient.
        for c in 0..dim {
            let analytic = -(updated_input[c] - input[c]) / lr;
            let mut plus = input.to_vec();
            let mut minus = input.to_vec();
            plus[c] += h;
            minus[c] -= h;
            let fd = (negative_sampling_loss(&plus, output, target, negatives)
                - negative_sampling_loss(&minus, output, target, negatives))
                / (2.0 * h);
            approx::assert_relative_eq!(analytic, fd, epsilon = 1e-7, max_relative = 1e-5);
        }
    }

    #[test]
    fn repeated_positive_updates_converge() {
        // Driving the same (input, target) pair with positive-only updates
        // must monotonically push sigma(u.v) towards 1.
        let dim = 4;
        let mut input = vec![0.1f32; dim];
        let mut output = Matrix::zeros(2, dim);
        let mut scratch = vec![0.0f32; dim];
        let mut prev = sigmoid(dot(&input, output.row(0)));
        let mut steps = 0;
        while prev <= 0.99 {
            negative_sampling_update(&mut input, &mut output, 0, &[], 0.5, &mut scratch);
            let sig = sigmoid(dot(&input, output.row(0)));
            assert!(sig > prev, "sigma must strictly increase, {sig} vs {prev}");
            prev = sig;
            steps += 1;
            assert!(steps < 10_000, "did not converge");
        }
    }
}
