//! Local-maximum detection on fidelity slices: peak positions, heights, and
//! full widths at half prominence.
//!
//! Prominence is topographic: extend from the peak in each direction until a
//! higher sample or the boundary, take the minimum over each excursion, and
//! measure the peak height above the higher of the two bases. The width is
//! found by walking down both flanks to the half-prominence level with
//! linear interpolation between grid points.

/// One detected peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Grid index of the maximum.
    pub index: usize,
    /// Abscissa of the maximum.
    pub position: f64,
    /// Signal value at the maximum.
    pub height: f64,
    /// Topographic prominence.
    pub prominence: f64,
    /// Full width at half prominence, in abscissa units.
    pub width: f64,
}

/// Detect local maxima above `min_height`, keeping peaks separated by at
/// least `min_separation` grid points (taller peaks win ties). The abscissa
/// grid must be ascending. Returns peaks ordered by position; an empty list
/// is an ordinary outcome.
pub fn track_peaks(
    grid: &[f64],
    values: &[f64],
    min_height: f64,
    min_separation: usize,
) -> Vec<Peak> {
    let n = grid.len().min(values.len());
    if n < 3 {
        return Vec::new();
    }
    let mut candidates: Vec<usize> = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] > min_height {
            // plateau: report its first sample, skip to the descent
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] {
                candidates.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    // enforce separation, tallest first
    let mut by_height = candidates.clone();
    by_height.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
    let mut keep = vec![false; n];
    let mut kept: Vec<usize> = Vec::new();
    for &c in &by_height {
        if kept.iter().all(|&k| c.abs_diff(k) >= min_separation.max(1)) {
            keep[c] = true;
            kept.push(c);
        }
    }
    let mut peaks: Vec<Peak> = candidates
        .into_iter()
        .filter(|&c| keep[c])
        .map(|c| measure(grid, values, n, c))
        .collect();
    peaks.sort_by(|a, b| a.position.partial_cmp(&b.position).unwrap());
    peaks
}

fn measure(grid: &[f64], values: &[f64], n: usize, peak: usize) -> Peak {
    let height = values[peak];
    // left excursion base
    let mut left_base = height;
    let mut k = peak;
    while k > 0 {
        k -= 1;
        if values[k] > height {
            break;
        }
        left_base = left_base.min(values[k]);
    }
    // right excursion base
    let mut right_base = height;
    let mut k = peak;
    while k + 1 < n {
        k += 1;
        if values[k] > height {
            break;
        }
        right_base = right_base.min(values[k]);
    }
    let prominence = height - left_base.max(right_base);
    let level = height - 0.5 * prominence;

    // walk down the flanks to the crossing level
    let left_x = {
        let mut k = peak;
        while k > 0 && values[k - 1] >= level && values[k - 1] <= values[k] {
            k -= 1;
        }
        if k == 0 || values[k - 1] > values[k] {
            grid[k]
        } else {
            let (x0, x1) = (grid[k - 1], grid[k]);
            let (y0, y1) = (values[k - 1], values[k]);
            x0 + (level - y0) / (y1 - y0) * (x1 - x0)
        }
    };
    let right_x = {
        let mut k = peak;
        while k + 1 < n && values[k + 1] >= level && values[k + 1] <= values[k] {
            k += 1;
        }
        if k + 1 == n || values[k + 1] > values[k] {
            grid[k]
        } else {
            let (x0, x1) = (grid[k], grid[k + 1]);
            let (y0, y1) = (values[k], values[k + 1]);
            x0 + (level - y0) / (y1 - y0) * (x1 - x0)
        }
    };
    Peak { index: peak, position: grid[peak], height, prominence, width: right_x - left_x }
}
