//! Derivative-free local minimization used to refine grid minima.

/// Nelder–Mead simplex search from `x0` with initial edge length `step`.
/// Stops when the spread of simplex values drops below `ftol` and the simplex
/// diameter below `xtol`, or after `max_iter` iterations.
pub fn nelder_mead<F>(f: F, x0: &[f64], step: f64, ftol: f64, xtol: f64, max_iter: usize) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        simplex.push(x);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| f(x)).collect();
    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        let diameter = simplex[1..]
            .iter()
            .map(|x| {
                x.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if (values[n] - values[0]).abs() <= ftol && diameter <= xtol {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|x| x[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (w - c)).collect() };
        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < values[0] {
            let xe = along(-2.0);
            let fe = f(&xe);
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
        } else {
            let (xc, fc) = if fr < values[n] {
                let x = along(-0.5);
                let v = f(&x);
                (x, v)
            } else {
                let x = along(0.5);
                let v = f(&x);
                (x, v)
            };
            if fc < values[n].min(fr) {
                simplex[n] = xc;
                values[n] = fc;
            } else {
                for i in 1..=n {
                    let x: Vec<f64> = simplex[i]
                        .iter()
                        .zip(&simplex[0])
                        .map(|(a, b)| b + 0.5 * (a - b))
                        .collect();
                    values[i] = f(&x);
                    simplex[i] = x;
                }
            }
        }
    }
    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    (simplex[best].clone(), values[best])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let (x, v) = nelder_mead(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2),
            &[0.0, 0.0],
            0.1,
            1e-20,
            1e-12,
            5000,
        );
        assert!((x[0] - 1.0).abs() < 1e-8 && (x[1] + 0.5).abs() < 1e-8 && v < 1e-15);
    }

    #[test]
    fn finds_cone_vertex() {
        let (x, v) = nelder_mead(
            |x| (x[0] * x[0] + x[1] * x[1]).sqrt(),
            &[0.3, -0.2],
            0.05,
            1e-16,
            1e-14,
            5000,
        );
        assert!(v < 1e-12, "{x:?} {v}");
    }
}
