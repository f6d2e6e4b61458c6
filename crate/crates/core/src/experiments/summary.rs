use super::sweep::PhaseGrid;
use crate::{Error, Result};

/// Weighted least-squares nonincreasing fit (pool adjacent violators).
pub fn isotonic_nonincreasing(values: &[f64], weights: &[f64]) -> Vec<f64> {
    assert_eq!(values.len(), weights.len());
    // Blocks of (mean, weight, length).
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(values.len());
    for (&v, &w) in values.iter().zip(weights) {
        blocks.push((v, w, 1));
        while blocks.len() > 1 {
            let (v2, w2, n2) = blocks[blocks.len() - 1];
            let (v1, w1, n1) = blocks[blocks.len() - 2];
            if v1 >= v2 {
                break;
            }
            blocks.truncate(blocks.len() - 2);
            let w = w1 + w2;
            blocks.push(((v1 * w1 + v2 * w2) / w, w, n1 + n2));
        }
    }
    blocks.into_iter().flat_map(|(v, _, n)| std::iter::repeat_n(v, n)).collect()
}

/// First `k` where the nonincreasing sequence `rates` (at sorted `ks`) falls
/// to `level`, by linear interpolation.
pub fn crossing(ks: &[f64], rates: &[f64], level: f64) -> Option<f64> {
    if rates.is_empty() || rates[0] < level || *rates.last()? > level {
        return None;
    }
    if rates[0] == level {
        return Some(ks[0]);
    }
    for i in 1..rates.len() {
        if rates[i] <= level {
            let (k0, k1, r0, r1) = (ks[i - 1], ks[i], rates[i - 1], rates[i]);
            return Some(k0 + (r0 - level) / (r0 - r1) * (k1 - k0));
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaSummary {
    pub m: usize,
    pub theta: f64,
    pub phi95: Option<f64>,
    pub phi50: Option<f64>,
    pub phi5: Option<f64>,
    /// `phi5 - phi95`
    pub width: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSummary {
    pub n: usize,
    pub rows: Vec<ThetaSummary>,
    /// Mean width over the rows where it is defined.
    pub mean_width: Option<f64>,
    /// `mean_width * sqrt(n)`
    pub c1: Option<f64>,
    /// `(m, level)` pairs whose crossing the k grid does not bracket.
    pub not_bracketed: Vec<(usize, f64)>,
}

impl PhaseSummary {
    pub fn row(&self, m: usize) -> Option<&ThetaSummary> {
        self.rows.iter().find(|r| r.m == m)
    }

    pub fn issues(&self) -> Vec<Error> {
        self.not_bracketed
            .iter()
            .map(|&(m, level)| Error::CrossingNotBracketed { m, level })
            .collect()
    }
}

/// Isotonic fit of the success rates per `m`, then `phi` at 95%, 50% and 5%.
pub fn summarize_phase(grid: &PhaseGrid) -> Result<PhaseSummary> {
    let mut rows = Vec::new();
    let mut not_bracketed = Vec::new();
    for m in grid.m_values() {
        let mut cells: Vec<_> = grid.cells.iter().filter(|c| c.m == m).collect();
        cells.sort_by_key(|c| c.k);
        if cells.len() < 2 {
            return Err(Error::InvalidParameter(format!("m = {m} has fewer than two k points")));
        }
        let ks: Vec<f64> = cells.iter().map(|c| c.k as f64).collect();
        let rates: Vec<f64> = cells.iter().map(|c| c.success_rate()).collect();
        let weights: Vec<f64> = cells.iter().map(|c| c.trials as f64).collect();
        let fit = isotonic_nonincreasing(&rates, &weights);
        let mut phi = |level: f64| {
            let k = crossing(&ks, &fit, level);
            if k.is_none() {
                not_bracketed.push((m, level));
            }
            k.map(|k| k / m as f64)
        };
        let (phi95, phi50, phi5) = (phi(0.95), phi(0.5), phi(0.05));
        let width = phi5.zip(phi95).map(|(a, b)| a - b);
        rows.push(ThetaSummary { m, theta: m as f64 / grid.n as f64, phi95, phi50, phi5, width });
    }
    let widths: Vec<f64> = rows.iter().filter_map(|r| r.width).collect();
    let mean_width = (!widths.is_empty()).then(|| widths.iter().sum::<f64>() / widths.len() as f64);
    Ok(PhaseSummary {
        n: grid.n,
        c1: mean_width.map(|w| w * (grid.n as f64).sqrt()),
        rows,
        mean_width,
        not_bracketed,
    })
}

#[cfg(test)]
mod tests {
    use super::super::sweep::PhaseCell;
    use super::*;

    #[test]
    fn pava_pools_violators() {
        let fit = isotonic_nonincreasing(&[1.0, 0.6, 0.8, 0.2, 0.3], &[1.0; 5]);
        let want = [1.0, 0.7, 0.7, 0.25, 0.25];
        assert!(fit.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-15), "{fit:?}");
        assert_eq!(isotonic_nonincreasing(&[0.0, 1.0], &[3.0, 1.0]), vec![0.25, 0.25]);
    }

    #[test]
    fn midpoint_example() {
        let cells = [1.0, 1.0, 0.5, 0.0, 0.0]
            .iter()
            .enumerate()
            .map(|(i, &r)| PhaseCell::new(100, 10, i + 1, 100, (r * 100.0) as usize, 0.0, String::new()))
            .collect();
        let grid = PhaseGrid { n: 100, cells };
        let s = summarize_phase(&grid).unwrap();
        let row = s.row(10).unwrap();
        assert!((row.phi50.unwrap() - 0.3).abs() < 1e-12);
        assert!(row.phi95.unwrap() <= row.phi50.unwrap() && row.phi50.unwrap() <= row.phi5.unwrap());
        assert!(s.not_bracketed.is_empty());
    }

    #[test]
    fn unbracketed_levels_are_reported() {
        let cells = vec![
            PhaseCell::new(100, 10, 1, 10, 10, 0.0, String::new()),
            PhaseCell::new(100, 10, 2, 10, 8, 0.0, String::new()),
        ];
        let s = summarize_phase(&PhaseGrid { n: 100, cells }).unwrap();
        assert_eq!(s.not_bracketed, vec![(10, 0.5), (10, 0.05)]);
        assert_eq!(s.mean_width, None);
    }
}
