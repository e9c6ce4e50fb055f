/// A strict local maximum of a sampled curve and its topographic prominence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub value: f64,
    pub prominence: f64,
}

/// All strict interior local maxima with their prominences.
///
/// Prominence: height above the higher of the two minima found by walking
/// outward in each direction until a strictly higher sample (or the edge).
pub fn find_peaks(values: &[f64]) -> Vec<Peak> {
    let n = values.len();
    if n < 3 {
        return Vec::new();
    }
    let mut peaks = Vec::new();
    for i in 1..n - 1 {
        let v = values[i];
        if !(v > values[i - 1] && v > values[i + 1]) {
            continue;
        }
        let mut left_min = v;
        for &w in values[..i].iter().rev() {
            if w > v {
                break;
            }
            left_min = left_min.min(w);
        }
        let mut right_min = v;
        for &w in &values[i + 1..] {
            if w > v {
                break;
            }
            right_min = right_min.min(w);
        }
        peaks.push(Peak {
            index: i,
            value: v,
            prominence: v - left_min.max(right_min),
        });
    }
    peaks
}

/// Number of strict local maxima whose prominence is at least
/// `relative_prominence` times the global maximum of `values`.
pub fn count_peaks(values: &[f64], relative_prominence: f64) -> usize {
    let global_max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(global_max > 0.0) {
        return 0;
    }
    let threshold = relative_prominence * global_max;
    find_peaks(values)
        .into_iter()
        .filter(|p| p.prominence >= threshold)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_humps() {
        let xs: Vec<f64> = (0..201).map(|i| -5.0 + 0.05 * i as f64).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| (-(x - 1.5f64).powi(2)).exp() + (-(x + 1.5f64).powi(2)).exp())
            .collect();
        assert_eq!(count_peaks(&ys, 0.01), 2);
    }

    #[test]
    fn ripples_below_threshold_ignored() {
        let ys: Vec<f64> = (0..400)
            .map(|i| {
                let x = -4.0 + 0.02 * i as f64;
                (-x * x).exp() + 1e-4 * (40.0 * x).sin()
            })
            .collect();
        assert_eq!(count_peaks(&ys, 0.01), 1);
        assert!(find_peaks(&ys).len() > 1);
    }

    #[test]
    fn plateaus_and_edges_are_not_strict_maxima() {
        assert_eq!(count_peaks(&[3.0, 1.0, 2.0, 2.0, 1.0], 0.01), 0);
        assert_eq!(count_peaks(&[0.0, 1.0], 0.01), 0);
        assert_eq!(count_peaks(&[0.0, -1.0, 0.0], 0.01), 0);
    }

    #[test]
    fn prominence_values() {
        let p = find_peaks(&[0.0, 2.0, 1.0, 3.0, 0.5]);
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].prominence, 1.0);
        assert_eq!(p[1].prominence, 2.5);
    }
}
