//! Forward and backward kernels. Activations are `[batch][channel][position]`
//! row-major; fully connected layers use `position = 1`.

pub(crate) const BN_EPS: f64 = 1e-5;
pub(crate) const BN_MOMENTUM: f64 = 0.1;

/// Conv1d, kernel 3, stride 1, zero padding 1.
pub(crate) fn conv_fwd(x: &[f64], b: usize, cin: usize, cout: usize, l: usize, w: &[f64], bias: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; b * cout * l];
    for bi in 0..b {
        for o in 0..cout {
            let row = &mut y[(bi * cout + o) * l..(bi * cout + o + 1) * l];
            row.iter_mut().for_each(|v| *v = bias[o]);
            for i in 0..cin {
                let xs = &x[(bi * cin + i) * l..(bi * cin + i + 1) * l];
                let k = &w[(o * cin + i) * 3..(o * cin + i) * 3 + 3];
                for p in 0..l {
                    let mut s = k[1] * xs[p];
                    if p > 0 {
                        s += k[0] * xs[p - 1];
                    }
                    if p + 1 < l {
                        s += k[2] * xs[p + 1];
                    }
                    row[p] += s;
                }
            }
        }
    }
    y
}

/// Returns `(dx, dw, dbias)`; `dx` is empty when `need_dx` is false.
#[allow(clippy::too_many_arguments)]
pub(crate) fn conv_bwd(
    dy: &[f64],
    x: &[f64],
    b: usize,
    cin: usize,
    cout: usize,
    l: usize,
    w: &[f64],
    need_dx: bool,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut dx = if need_dx { vec![0.0; b * cin * l] } else { Vec::new() };
    let mut dw = vec![0.0; w.len()];
    let mut db = vec![0.0; cout];
    for bi in 0..b {
        for o in 0..cout {
            let g = &dy[(bi * cout + o) * l..(bi * cout + o + 1) * l];
            db[o] += g.iter().sum::<f64>();
            for i in 0..cin {
                let xs = &x[(bi * cin + i) * l..(bi * cin + i + 1) * l];
                let wi = (o * cin + i) * 3;
                for p in 0..l {
                    dw[wi + 1] += g[p] * xs[p];
                    if p > 0 {
                        dw[wi] += g[p] * xs[p - 1];
                    }
                    if p + 1 < l {
                        dw[wi + 2] += g[p] * xs[p + 1];
                    }
                }
                if need_dx {
                    let d = &mut dx[(bi * cin + i) * l..(bi * cin + i + 1) * l];
                    for p in 0..l {
                        d[p] += w[wi + 1] * g[p];
                        if p > 0 {
                            d[p - 1] += w[wi] * g[p];
                        }
                        if p + 1 < l {
                            d[p + 1] += w[wi + 2] * g[p];
                        }
                    }
                }
            }
        }
    }
    (dx, dw, db)
}

/// `y = W x + b` with `W` of shape `[fout][fin]`.
pub(crate) fn linear_fwd(x: &[f64], b: usize, fin: usize, fout: usize, w: &[f64], bias: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; b * fout];
    for bi in 0..b {
        let xs = &x[bi * fin..(bi + 1) * fin];
        for o in 0..fout {
            let row = &w[o * fin..(o + 1) * fin];
            y[bi * fout + o] = bias[o] + row.iter().zip(xs).map(|(a, c)| a * c).sum::<f64>();
        }
    }
    y
}

pub(crate) fn linear_bwd(
    dy: &[f64],
    x: &[f64],
    b: usize,
    fin: usize,
    fout: usize,
    w: &[f64],
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut dx = vec![0.0; b * fin];
    let mut dw = vec![0.0; w.len()];
    let mut db = vec![0.0; fout];
    for bi in 0..b {
        let xs = &x[bi * fin..(bi + 1) * fin];
        let d = &mut dx[bi * fin..(bi + 1) * fin];
        for o in 0..fout {
            let g = dy[bi * fout + o];
            if g == 0.0 {
                continue;
            }
            db[o] += g;
            let row = &w[o * fin..(o + 1) * fin];
            let drow = &mut dw[o * fin..(o + 1) * fin];
            for k in 0..fin {
                drow[k] += g * xs[k];
                d[k] += g * row[k];
            }
        }
    }
    (dx, dw, db)
}

/// Batch statistics kept for the backward pass and running-stat update.
pub(crate) struct BnCache {
    pub xhat: Vec<f64>,
    pub inv_std: Vec<f64>,
    pub mean: Vec<f64>,
    /// Unbiased variance, as tracked by the running estimate.
    pub var_unbiased: Vec<f64>,
}

pub(crate) fn bn_train(x: &[f64], b: usize, c: usize, l: usize, gamma: &[f64], beta: &[f64]) -> (Vec<f64>, BnCache) {
    let m = (b * l) as f64;
    let mut y = vec![0.0; x.len()];
    let mut xhat = vec![0.0; x.len()];
    let mut inv_std = vec![0.0; c];
    let mut mean = vec![0.0; c];
    let mut var_unbiased = vec![0.0; c];
    for ch in 0..c {
        let idx = |bi: usize, p: usize| (bi * c + ch) * l + p;
        let mut s = 0.0;
        for bi in 0..b {
            for p in 0..l {
                s += x[idx(bi, p)];
            }
        }
        let mu = s / m;
        let mut ss = 0.0;
        for bi in 0..b {
            for p in 0..l {
                ss += (x[idx(bi, p)] - mu).powi(2);
            }
        }
        let var = ss / m;
        let is = 1.0 / (var + BN_EPS).sqrt();
        for bi in 0..b {
            for p in 0..l {
                let k = idx(bi, p);
                xhat[k] = (x[k] - mu) * is;
                y[k] = gamma[ch] * xhat[k] + beta[ch];
            }
        }
        inv_std[ch] = is;
        mean[ch] = mu;
        var_unbiased[ch] = if m > 1.0 { ss / (m - 1.0) } else { var };
    }
    (
        y,
        BnCache {
            xhat,
            inv_std,
            mean,
            var_unbiased,
        },
    )
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn bn_eval(
    x: &[f64],
    b: usize,
    c: usize,
    l: usize,
    gamma: &[f64],
    beta: &[f64],
    mean: &[f64],
    var: &[f64],
) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    for bi in 0..b {
        for ch in 0..c {
            let is = 1.0 / (var[ch] + BN_EPS).sqrt();
            for p in 0..l {
                let k = (bi * c + ch) * l + p;
                y[k] = gamma[ch] * (x[k] - mean[ch]) * is + beta[ch];
            }
        }
    }
    y
}

/// Returns `(dx, dgamma, dbeta)`.
pub(crate) fn bn_bwd(
    dy: &[f64],
    cache: &BnCache,
    b: usize,
    c: usize,
    l: usize,
    gamma: &[f64],
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let m = (b * l) as f64;
    let mut dx = vec![0.0; dy.len()];
    let mut dgamma = vec![0.0; c];
    let mut dbeta = vec![0.0; c];
    for ch in 0..c {
        let idx = |bi: usize, p: usize| (bi * c + ch) * l + p;
        let (mut sum_d, mut sum_dx) = (0.0, 0.0);
        for bi in 0..b {
            for p in 0..l {
                let k = idx(bi, p);
                dgamma[ch] += dy[k] * cache.xhat[k];
                dbeta[ch] += dy[k];
                let dxh = dy[k] * gamma[ch];
                sum_d += dxh;
                sum_dx += dxh * cache.xhat[k];
            }
        }
        for bi in 0..b {
            for p in 0..l {
                let k = idx(bi, p);
                let dxh = dy[k] * gamma[ch];
                dx[k] = cache.inv_std[ch] / m * (m * dxh - sum_d - cache.xhat[k] * sum_dx);
            }
        }
    }
    (dx, dgamma, dbeta)
}

pub(crate) fn leaky(x: &mut [f64], slope: f64) {
    x.iter_mut().filter(|v| **v < 0.0).for_each(|v| *v *= slope);
}

/// Gradient through leaky ReLU given the pre-activation.
pub(crate) fn leaky_bwd(dy: &mut [f64], pre: &[f64], slope: f64) {
    dy.iter_mut()
        .zip(pre)
        .filter(|(_, p)| **p < 0.0)
        .for_each(|(d, _)| *d *= slope);
}

pub(crate) fn log_softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = m + logits.iter().map(|x| (x - m).exp()).sum::<f64>().ln();
    logits.iter().map(|x| x - lse).collect()
}
