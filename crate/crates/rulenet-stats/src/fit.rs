use serde::{Deserialize, Serialize};

/// Ordinary least-squares line `y = intercept + slope·x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero with two points or an exact fit.
    pub slope_se: f64,
    pub points: usize,
}

/// `None` with fewer than two points or constant `x`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let k = xs.len().min(ys.len());
    if k < 2 {
        return None;
    }
    let (xs, ys) = (&xs[..k], &ys[..k]);
    let mx = xs.iter().sum::<f64>() / k as f64;
    let my = ys.iter().sum::<f64>() / k as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_se = if k > 2 {
        let rss: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        (rss / (k - 2) as f64 / sxx).sqrt()
    } else {
        0.0
    };
    Some(LineFit {
        slope,
        intercept,
        slope_se,
        points: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_line() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 1.5 - 0.25 * x).collect();
        let f = fit_line(&xs, &ys).unwrap();
        assert_relative_eq!(f.slope, -0.25, max_relative = 1e-12);
        assert_relative_eq!(f.intercept, 1.5, max_relative = 1e-12);
        assert!(f.slope_se < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_line(&[1.0], &[2.0]).is_none());
        assert!(fit_line(&[1.0, 1.0], &[2.0, 3.0]).is_none());
    }

    #[test]
    fn symmetric_noise_keeps_slope() {
        let xs = [0.0, 0.0, 1.0, 1.0, 2.0, 2.0];
        let ys = [0.1, -0.1, 2.1, 1.9, 4.1, 3.9];
        let f = fit_line(&xs, &ys).unwrap();
        assert_relative_eq!(f.slope, 2.0, max_relative = 1e-12);
        assert!(f.slope_se > 0.0);
    }
}
