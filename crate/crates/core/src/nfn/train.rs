//! Online sequential consequent training.
//!
//! Antecedents stay frozen; the consequent vector θ (length `R·(p+1)`) is
//! fitted by recursive least squares on the blended regressor
//! `φ(x) = [w_1·(1,x), …, w_R·(1,x)]`, one sample at a time. The covariance
//! starts at `(1/δ)·I` and is re-symmetrized after every update so rounding
//! cannot drift it away from symmetry. Repeated calls accumulate: training on
//! one batch or on the same samples split across calls is the same recursion.

use super::TskNetwork;

impl TskNetwork {
    /// Builds the blended regressor for `x` into `phi`.
    fn regressor(&self, x: &[f64], weights: &[f64], phi: &mut Vec<f64>) {
        phi.clear();
        for (r, &w) in weights.iter().enumerate() {
            debug_assert!(r < self.n_rules);
            phi.push(w);
            for &xi in x {
                phi.push(w * xi);
            }
        }
    }

    /// One RLS pass over `batch`, updating consequents in place.
    pub fn train_sequential(&mut self, batch: &[(Vec<f64>, f64)]) {
        let p_ext = self.n_rules * (self.n_inputs + 1);
        let mut weights = Vec::with_capacity(self.n_rules);
        let mut phi = Vec::with_capacity(p_ext);
        let mut k_raw = vec![0.0; p_ext];

        for (x, y) in batch {
            debug_assert_eq!(x.len(), self.n_inputs);
            self.firing_weights(x, &mut weights);
            self.regressor(x, &weights, &mut phi);

            // k_raw = P·φ
            for i in 0..p_ext {
                let row = &self.covariance[i * p_ext..(i + 1) * p_ext];
                k_raw[i] = row.iter().zip(&phi).map(|(a, b)| a * b).sum();
            }
            let denom = 1.0 + phi.iter().zip(&k_raw).map(|(a, b)| a * b).sum::<f64>();
            if !denom.is_finite() || denom <= 0.0 {
                // Covariance lost positive-definiteness: restore symmetry and
                // move on without this sample.
                self.resymmetrize();
                continue;
            }

            let err = *y
                - phi.iter().zip(&self.coefficients).map(|(a, b)| a * b).sum::<f64>();
            for i in 0..p_ext {
                self.coefficients[i] += k_raw[i] / denom * err;
            }
            // P ← P − g·k_rawᵀ with g = k_raw/denom
            for i in 0..p_ext {
                let gi = k_raw[i] / denom;
                let row = &mut self.covariance[i * p_ext..(i + 1) * p_ext];
                for j in 0..p_ext {
                    row[j] -= gi * k_raw[j];
                }
            }
            self.resymmetrize();
        }
    }

    fn resymmetrize(&mut self) {
        let n = self.n_rules * (self.n_inputs + 1);
        for i in 0..n {
            for j in (i + 1)..n {
                let a = self.covariance[i * n + j];
                let b = self.covariance[j * n + i];
                let m = 0.5 * (a + b);
                self.covariance[i * n + j] = m;
                self.covariance[j * n + i] = m;
            }
        }
    }

    /// Mean squared error over a batch.
    pub fn mse(&self, batch: &[(Vec<f64>, f64)]) -> f64 {
        if batch.is_empty() {
            return 0.0;
        }
        let se: f64 = batch
            .iter()
            .map(|(x, y)| {
                let e = self.infer(x) - y;
                e * e
            })
            .sum();
        se / batch.len() as f64
    }
}
