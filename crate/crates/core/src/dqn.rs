//! The operator-selection Q-network.
//!
//! A small fully connected net (4 → H → H → 4, ReLU hidden layers) scores the
//! four neighborhood-search operators for a solution's search state. The
//! softmax of the scores is both the selection distribution and the Q-value
//! vector: Q(s,a) is the conditional selection probability of operator `a`,
//! trained by one-step temporal-difference targets `r + γ·max_a Q(s',a)` (or
//! `r` at end of run) over an experience-replay buffer. One shared agent
//! serves the whole population; selection reads a parameter snapshot, training
//! happens at the per-generation sync point.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::defaults::Defaults;
use crate::rng;

pub const N_OPERATORS: usize = 4;

/// Search state of one solution, the four network inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchState {
    /// `f(X)/f_best` (≥ 1 for a minimization incumbent).
    pub f_ratio: f64,
    /// Last generation's objective decrement over `f_best`.
    pub delta_ratio: f64,
    /// Rank within the population, scaled to `(0, 1]`.
    pub rank_norm: f64,
    /// Last applied operator index scaled to `{0.25,…,1}`; 0 before any.
    pub idl_norm: f64,
}

impl SearchState {
    pub fn as_input(&self) -> [f64; 4] {
        [self.f_ratio, self.delta_ratio, self.rank_norm, self.idl_norm]
    }
}

/// One experience: acting with operator `action` in `state` earned `reward`;
/// `next` is absent at the end of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub state: SearchState,
    pub action: usize,
    pub reward: f64,
    pub next: Option<SearchState>,
}

/// Numerically stable softmax over the four operator scores.
pub fn softmax4(scores: [f64; 4]) -> [f64; 4] {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out = [0.0; 4];
    let mut sum = 0.0;
    for (o, s) in out.iter_mut().zip(scores) {
        *o = (s - max).exp();
        sum += *o;
    }
    for o in &mut out {
        *o /= sum;
    }
    out
}

/// TD target: `r + γ·max_a Q(s',a)`, or `r` alone on terminal transitions.
pub fn bellman_target(reward: f64, gamma: f64, next_q: Option<[f64; 4]>) -> f64 {
    match next_q {
        Some(q) => reward + gamma * q.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        None => reward,
    }
}

/// Fixed-capacity ring buffer of transitions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplayBuffer {
    items: Vec<Transition>,
    capacity: usize,
    next: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        Self { items: Vec::with_capacity(capacity), capacity, next: 0 }
    }

    pub fn with_default_capacity() -> Self {
        Self::new(Defaults::get().dqn.replay_capacity)
    }

    pub fn push(&mut self, t: Transition) {
        if self.items.len() < self.capacity {
            self.items.push(t);
        } else {
            self.items[self.next] = t;
        }
        self.next = (self.next + 1) % self.capacity;
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, idx: usize) -> &Transition {
        &self.items[idx]
    }
}

/// Parameter layout of the 4 → H → H → 4 network, flattened into one vector:
/// `[w1 (H×4), b1 (H), w2 (H×H), b2 (H), w3 (4×H), b3 (4)]`.
#[derive(Debug, Clone, Copy)]
struct Layout {
    hidden: usize,
}

impl Layout {
    fn w1(&self) -> usize {
        0
    }
    fn b1(&self) -> usize {
        self.hidden * 4
    }
    fn w2(&self) -> usize {
        self.b1() + self.hidden
    }
    fn b2(&self) -> usize {
        self.w2() + self.hidden * self.hidden
    }
    fn w3(&self) -> usize {
        self.b2() + self.hidden
    }
    fn b3(&self) -> usize {
        self.w3() + 4 * self.hidden
    }
    fn len(&self) -> usize {
        self.b3() + 4
    }
}

/// The Q-network with its Adam moment state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QNetwork {
    hidden: usize,
    params: Vec<f64>,
    adam_m: Vec<f64>,
    adam_v: Vec<f64>,
    adam_t: u64,
    /// Updates rejected because the loss or the update was non-finite.
    pub rejected_updates: u64,
}

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

impl QNetwork {
    /// Glorot-uniform weight initialization, zero biases.
    pub fn init(hidden: usize, seed: u64) -> Self {
        let layout = Layout { hidden };
        let mut params = vec![0.0; layout.len()];
        let mut r = rng::stream(seed, &[rng::tag("dqn-init")]);
        let mut fill = |start: usize, rows: usize, cols: usize, p: &mut Vec<f64>| {
            let bound = (6.0 / (rows + cols) as f64).sqrt();
            for k in 0..rows * cols {
                p[start + k] = r.random_range(-bound..bound);
            }
        };
        fill(layout.w1(), hidden, 4, &mut params);
        fill(layout.w2(), hidden, hidden, &mut params);
        fill(layout.w3(), 4, hidden, &mut params);
        let n = layout.len();
        Self {
            hidden,
            params,
            adam_m: vec![0.0; n],
            adam_v: vec![0.0; n],
            adam_t: 0,
            rejected_updates: 0,
        }
    }

    pub fn with_default_size(seed: u64) -> Self {
        Self::init(Defaults::get().dqn.hidden, seed)
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Raw operator scores (pre-softmax).
    pub fn scores(&self, input: &[f64; 4]) -> [f64; 4] {
        forward(self.hidden, &self.params, input).2
    }

    /// Q-values = selection probabilities: softmax of the scores.
    pub fn q_values(&self, state: &SearchState) -> [f64; 4] {
        softmax4(self.scores(&state.as_input()))
    }

    /// Samples an operator index from the selection distribution.
    pub fn select_operator(&self, state: &SearchState, rng: &mut impl Rng) -> usize {
        let probs = self.q_values(state);
        let u: f64 = rng.random_range(0.0..1.0);
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        N_OPERATORS - 1
    }

    /// One Adam step on the TD loss over a batch of `(input, action, target)`
    /// samples with frozen targets. Returns the batch loss, or `None` if the
    /// step was rejected as non-finite.
    pub fn train_step(
        &mut self,
        batch: &[([f64; 4], usize, f64)],
        learning_rate: f64,
    ) -> Option<f64> {
        let (loss, grad) = loss_and_grad(self.hidden, &self.params, batch);
        if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            self.rejected_updates += 1;
            return None;
        }
        let before = self.params.clone();
        self.adam_t += 1;
        let t = self.adam_t as i32;
        let bc1 = 1.0 - BETA1.powi(t);
        let bc2 = 1.0 - BETA2.powi(t);
        for i in 0..self.params.len() {
            let g = grad[i];
            self.adam_m[i] = BETA1 * self.adam_m[i] + (1.0 - BETA1) * g;
            self.adam_v[i] = BETA2 * self.adam_v[i] + (1.0 - BETA2) * g * g;
            let mhat = self.adam_m[i] / bc1;
            let vhat = self.adam_v[i] / bc2;
            self.params[i] -= learning_rate * mhat / (vhat.sqrt() + ADAM_EPS);
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            self.params = before;
            self.adam_t -= 1;
            self.rejected_updates += 1;
            return None;
        }
        Some(loss)
    }

    pub fn save(&self, path: &std::path::Path) -> crate::Result<()> {
        let json = serde_json::to_string_pretty(self).expect("network serializes");
        crate::io::write_atomic(path, json.as_bytes())
    }

    pub fn load(path: &std::path::Path) -> crate::Result<Self> {
        let text = crate::io::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| crate::Error::Parse { path: path.to_path_buf(), message: e.to_string() })
    }
}

/// Forward pass returning both hidden activations (for backprop) and scores.
#[allow(clippy::type_complexity)]
fn forward(hidden: usize, params: &[f64], input: &[f64; 4]) -> (Vec<f64>, Vec<f64>, [f64; 4]) {
    let lt = Layout { hidden };
    let mut h1 = vec![0.0; hidden];
    for i in 0..hidden {
        let mut acc = params[lt.b1() + i];
        for k in 0..4 {
            acc += params[lt.w1() + i * 4 + k] * input[k];
        }
        h1[i] = acc.max(0.0);
    }
    let mut h2 = vec![0.0; hidden];
    for i in 0..hidden {
        let mut acc = params[lt.b2() + i];
        for k in 0..hidden {
            acc += params[lt.w2() + i * hidden + k] * h1[k];
        }
        h2[i] = acc.max(0.0);
    }
    let mut z = [0.0; 4];
    for (i, zi) in z.iter_mut().enumerate() {
        let mut acc = params[lt.b3() + i];
        for k in 0..hidden {
            acc += params[lt.w3() + i * hidden + k] * h2[k];
        }
        *zi = acc;
    }
    (h1, h2, z)
}

/// Mean TD loss over the batch and its analytic gradient with respect to the
/// parameters: `L = mean (target − Q(s,a))²` with `Q = softmax(scores)` and
/// targets held fixed.
pub fn loss_and_grad(
    hidden: usize,
    params: &[f64],
    batch: &[([f64; 4], usize, f64)],
) -> (f64, Vec<f64>) {
    let lt = Layout { hidden };
    let mut grad = vec![0.0; lt.len()];
    let mut loss = 0.0;
    let scale = 1.0 / batch.len().max(1) as f64;
    for (input, action, target) in batch {
        let (h1, h2, z) = forward(hidden, params, input);
        let q = softmax4(z);
        let err = q[*action] - target;
        loss += err * err * scale;

        // dL/dz_k = 2·err·q_a·(δ_ak − q_k)
        let mut dz = [0.0; 4];
        for k in 0..4 {
            let delta = if k == *action { 1.0 } else { 0.0 };
            dz[k] = 2.0 * err * scale * q[*action] * (delta - q[k]);
        }
        let mut dh2 = vec![0.0; hidden];
        for (i, dzi) in dz.iter().enumerate() {
            grad[lt.b3() + i] += dzi;
            for k in 0..hidden {
                grad[lt.w3() + i * hidden + k] += dzi * h2[k];
                dh2[k] += dzi * params[lt.w3() + i * hidden + k];
            }
        }
        let mut dh1 = vec![0.0; hidden];
        for i in 0..hidden {
            if h2[i] <= 0.0 {
                continue;
            }
            grad[lt.b2() + i] += dh2[i];
            for k in 0..hidden {
                grad[lt.w2() + i * hidden + k] += dh2[i] * h1[k];
                dh1[k] += dh2[i] * params[lt.w2() + i * hidden + k];
            }
        }
        for i in 0..hidden {
            if h1[i] <= 0.0 {
                continue;
            }
            grad[lt.b1() + i] += dh1[i];
            for k in 0..4 {
                grad[lt.w1() + i * 4 + k] += dh1[i] * input[k];
            }
        }
    }
    (loss, grad)
}

/// Appends a transition and, once the buffer holds enough experience, draws a
/// uniform minibatch and takes one gradient step. Targets are computed from
/// the current parameters and then frozen for the step.
pub fn record_and_train(
    net: &mut QNetwork,
    buffer: &mut ReplayBuffer,
    t: Transition,
    gamma: f64,
    rng: &mut impl Rng,
) {
    let d = Defaults::get().dqn;
    buffer.push(t);
    if buffer.len() < d.replay_min {
        return;
    }
    let mut batch = Vec::with_capacity(d.replay_batch);
    for _ in 0..d.replay_batch {
        let tr = buffer.get(rng.random_range(0..buffer.len()));
        let next_q = tr.next.map(|s| net.q_values(&s));
        let target = bellman_target(tr.reward, gamma, next_q);
        batch.push((tr.state.as_input(), tr.action, target));
    }
    net.train_step(&batch, d.learning_rate);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_state() -> SearchState {
        SearchState { f_ratio: 1.0, delta_ratio: 0.0, rank_norm: 0.5, idl_norm: 0.0 }
    }

    #[test]
    fn equal_scores_give_uniform_probabilities() {
        // Zero weights and biases: all scores 0, softmax exactly 1/4.
        let net = QNetwork {
            hidden: 8,
            params: vec![0.0; Layout { hidden: 8 }.len()],
            adam_m: vec![0.0; Layout { hidden: 8 }.len()],
            adam_v: vec![0.0; Layout { hidden: 8 }.len()],
            adam_t: 0,
            rejected_updates: 0,
        };
        let q = net.q_values(&flat_state());
        assert_eq!(q, [0.25; 4]);
    }

    #[test]
    fn softmax_saturates_and_normalizes() {
        let p = softmax4([1.0, -1e6, -1e6, -1e6]);
        assert!(p[0] > 0.999999);
        for probe in [[0.3, -2.0, 5.0, 0.0], [0.0; 4], [-3.0, -3.0, 7.0, 7.0]] {
            let p = softmax4(probe);
            let sum: f64 = p.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sampling_frequency_matches_softmax_mass() {
        // scores (ln 2, 0, 0, 0): operator 0 carries mass 2/(2+3) = 0.4.
        let probs = softmax4([2.0f64.ln(), 0.0, 0.0, 0.0]);
        assert!((probs[0] - 0.4).abs() < 1e-12);
        let mut r = crate::rng::stream(3, &[9]);
        use rand::Rng;
        let mut count = 0usize;
        let n = 10_000;
        for _ in 0..n {
            let u: f64 = r.random_range(0.0..1.0);
            let mut acc = 0.0;
            let mut pick = 3;
            for (i, p) in probs.iter().enumerate() {
                acc += p;
                if u < acc {
                    pick = i;
                    break;
                }
            }
            if pick == 0 {
                count += 1;
            }
        }
        let freq = count as f64 / n as f64;
        assert!((freq - 0.4).abs() < 0.02, "freq {freq}");
    }

    #[test]
    fn bellman_target_arithmetic() {
        let t = bellman_target(0.1, 0.85, Some([0.1, 0.4, 0.2, 0.3]));
        assert!((t - 0.44).abs() < 1e-15);
        // Per-sample loss with Q(s,a) = 0.2: (0.1 + 0.34 − 0.2)² = 0.0576.
        let err: f64 = t - 0.2;
        assert!((err * err - 0.0576).abs() < 1e-15);
        assert_eq!(bellman_target(0.7, 0.85, None), 0.7);
    }

    #[test]
    fn buffer_below_threshold_leaves_parameters_unchanged() {
        let mut net = QNetwork::init(16, 5);
        let before = net.params.clone();
        let mut buffer = ReplayBuffer::with_default_capacity();
        let mut r = crate::rng::stream(1, &[2]);
        for i in 0..Defaults::get().dqn.replay_min - 1 {
            record_and_train(
                &mut net,
                &mut buffer,
                Transition {
                    state: flat_state(),
                    action: i % 4,
                    reward: 0.5,
                    next: Some(flat_state()),
                },
                0.85,
                &mut r,
            );
        }
        assert_eq!(net.params, before);
        // One more crosses the threshold and trains.
        record_and_train(
            &mut net,
            &mut buffer,
            Transition { state: flat_state(), action: 0, reward: 0.5, next: None },
            0.85,
            &mut r,
        );
        assert_ne!(net.params, before);
    }

    #[test]
    fn ring_buffer_overwrites_oldest() {
        let mut b = ReplayBuffer::new(3);
        for k in 0..5 {
            b.push(Transition {
                state: flat_state(),
                action: k % 4,
                reward: k as f64,
                next: None,
            });
        }
        assert_eq!(b.len(), 3);
        let rewards: Vec<f64> = (0..3).map(|i| b.get(i).reward).collect();
        assert_eq!(rewards, vec![3.0, 4.0, 2.0]);
    }

    #[test]
    fn analytic_gradient_matches_central_differences() {
        let net = QNetwork::init(8, 11);
        let mut r = crate::rng::stream(2, &[7]);
        use rand::Rng;
        let batch: Vec<([f64; 4], usize, f64)> = (0..16)
            .map(|_| {
                (
                    [
                        r.random_range(0.5..2.0),
                        r.random_range(-0.5..0.5),
                        r.random_range(0.0..1.0),
                        r.random_range(0.0..1.0),
                    ],
                    r.random_range(0..4),
                    r.random_range(0.0..1.5),
                )
            })
            .collect();
        let (_, analytic) = loss_and_grad(net.hidden, &net.params, &batch);
        let h = 1e-5;
        let mut params = net.params.clone();
        let mut worst: f64 = 0.0;
        for i in 0..params.len() {
            let orig = params[i];
            params[i] = orig + h;
            let (lp, _) = loss_and_grad(net.hidden, &params, &batch);
            params[i] = orig - h;
            let (lm, _) = loss_and_grad(net.hidden, &params, &batch);
            params[i] = orig;
            let fd = (lp - lm) / (2.0 * h);
            let denom = analytic[i].abs().max(fd.abs());
            if denom > 1e-7 {
                worst = worst.max((analytic[i] - fd).abs() / denom);
            } else {
                assert!((analytic[i] - fd).abs() < 1e-8);
            }
        }
        assert!(worst <= 1e-4, "worst relative gradient error {worst}");
    }

    #[test]
    fn training_is_deterministic() {
        let run = || {
            let mut net = QNetwork::with_default_size(3);
            let mut buffer = ReplayBuffer::with_default_capacity();
            let mut r = crate::rng::stream(5, &[1]);
            for k in 0..300u64 {
                let s = SearchState {
                    f_ratio: 1.0 + (k % 7) as f64 * 0.1,
                    delta_ratio: 0.01 * (k % 3) as f64,
                    rank_norm: ((k % 10) + 1) as f64 / 10.0,
                    idl_norm: ((k % 4) + 1) as f64 / 4.0,
                };
                record_and_train(
                    &mut net,
                    &mut buffer,
                    Transition {
                        state: s,
                        action: (k % 4) as usize,
                        reward: if k % 4 == 1 { 0.3 } else { 0.0 },
                        next: Some(s),
                    },
                    0.85,
                    &mut r,
                );
            }
            net
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn bandit_concentrates_on_rewarding_operator() {
        let gamma = Defaults::get().optimizer.gamma;
        for seed in 0..5u64 {
            let mut net = QNetwork::with_default_size(seed);
            let mut buffer = ReplayBuffer::with_default_capacity();
            let mut r = crate::rng::stream(seed, &[rng_tag_bandit()]);
            let mut prob_sum = 0.0;
            let mut prob_count = 0usize;
            let mut state = flat_state();
            for step in 0..2000 {
                let a = net.select_operator(&state, &mut r);
                if step >= 1800 {
                    prob_sum += net.q_values(&state)[2];
                    prob_count += 1;
                }
                let reward = if a == 2 { 1.0 } else { 0.0 };
                let next = SearchState { idl_norm: (a + 1) as f64 / 4.0, ..state };
                record_and_train(
                    &mut net,
                    &mut buffer,
                    Transition { state, action: a, reward, next: Some(next) },
                    gamma,
                    &mut r,
                );
                state = next;
            }
            let avg = prob_sum / prob_count as f64;
            assert!(avg > 0.9, "seed {seed}: mean probability of rewarding arm {avg:.4}");
        }
    }

    fn rng_tag_bandit() -> u64 {
        crate::rng::tag("bandit-test")
    }

    #[test]
    fn checkpoint_round_trip_is_value_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("qnet.json");
        let mut net = QNetwork::with_default_size(9);
        let batch = vec![([1.0, 0.1, 0.5, 0.25], 1usize, 0.6f64)];
        net.train_step(&batch, 1e-3);
        net.save(&path).unwrap();
        let back = QNetwork::load(&path).unwrap();
        assert_eq!(net, back);
    }
}
