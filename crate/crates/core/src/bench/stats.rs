//! Order statistics and the two-sided rank-sum test.

/// Linear-interpolation quantile (the "type 7" convention) over sorted data.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Midranks (average ranks for ties) of the combined samples, returned as
/// (ranks in input order, tie-group sizes).
fn midranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        ties.push(j - i + 1);
        i = j + 1;
    }
    (ranks, ties)
}

/// Two-sided Wilcoxon rank-sum / Mann–Whitney p-value. Exact enumeration of
/// the rank-sum null distribution (conditional on the observed ties) when
/// `n_a + n_b ≤ 12`, otherwise the normal approximation with tie correction
/// and continuity correction.
pub fn rank_sum_test(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let (n_a, n_b) = (a.len(), b.len());
    let combined: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    let (ranks, ties) = midranks(&combined);
    let w_obs: f64 = ranks[..n_a].iter().sum();

    if n_a + n_b <= 12 {
        return exact_two_sided(&ranks, n_a, w_obs);
    }

    let n = (n_a + n_b) as f64;
    let mean = n_a as f64 * (n + 1.0) / 2.0;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum();
    let var = (n_a * n_b) as f64 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if var <= 0.0 {
        return 1.0; // every value identical
    }
    let diff = w_obs - mean;
    let z = (diff.abs() - 0.5).max(0.0) / var.sqrt();
    (2.0 * normal_sf(z)).min(1.0)
}

/// Exact two-sided p: enumerate every assignment of `n_a` of the observed
/// ranks to sample A and fold the tail masses of the rank-sum.
fn exact_two_sided(ranks: &[f64], n_a: usize, w_obs: f64) -> f64 {
    let n = ranks.len();
    let mut le = 0u64;
    let mut ge = 0u64;
    let mut total = 0u64;
    let mut chosen = Vec::with_capacity(n_a);
    enumerate_subsets(ranks, n_a, 0, 0.0, &mut chosen, &mut |w| {
        total += 1;
        let eps = 1e-9;
        if w <= w_obs + eps {
            le += 1;
        }
        if w >= w_obs - eps {
            ge += 1;
        }
    });
    debug_assert_eq!(total, binomial(n as u64, n_a as u64));
    let p_le = le as f64 / total as f64;
    let p_ge = ge as f64 / total as f64;
    (2.0 * p_le.min(p_ge)).min(1.0)
}

fn enumerate_subsets(
    ranks: &[f64],
    k: usize,
    start: usize,
    acc: f64,
    chosen: &mut Vec<usize>,
    visit: &mut impl FnMut(f64),
) {
    if chosen.len() == k {
        visit(acc);
        return;
    }
    let need = k - chosen.len();
    for i in start..=(ranks.len() - need) {
        chosen.push(i);
        enumerate_subsets(ranks, k, i + 1, acc + ranks[i], chosen, visit);
        chosen.pop();
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Upper tail of the standard normal.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z / std::f64::consts::SQRT_2)
}

/// Box-plot summary of one sample.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BoxStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub mean: f64,
    pub q3: f64,
    pub max: f64,
    /// Values outside `[q1 − 1.5·IQR, q3 + 1.5·IQR]`.
    pub outliers: Vec<f64>,
}

pub fn box_stats(values: &[f64]) -> BoxStats {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile(&sorted, 0.25);
    let q3 = quantile(&sorted, 0.75);
    let iqr = q3 - q1;
    let (lo, hi) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    BoxStats {
        min: sorted[0],
        q1,
        median: quantile(&sorted, 0.5),
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        q3,
        max: *sorted.last().unwrap(),
        outliers: sorted.iter().copied().filter(|&v| v < lo || v > hi).collect(),
    }
}
