/// One classical fourth-order Runge–Kutta step for `y' = f(z, y)`.
pub fn rk4_step<const N: usize, F>(f: &F, z: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let axpy = |y: &[f64; N], k: &[f64; N], s: f64| {
        let mut out = *y;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    let k1 = f(z, y);
    let k2 = f(z + 0.5 * h, &axpy(y, &k1, 0.5 * h));
    let k3 = f(z + 0.5 * h, &axpy(y, &k2, 0.5 * h));
    let k4 = f(z + h, &axpy(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourth_order_on_exponential() {
        let f = |_z: f64, y: &[f64; 1]| [y[0]];
        let err = |n: usize| {
            let h = 1.0 / n as f64;
            let mut y = [1.0];
            for i in 0..n {
                y = rk4_step(&f, i as f64 * h, &y, h);
            }
            (y[0] - 1f64.exp()).abs()
        };
        let order = (err(20) / err(40)).log2();
        assert!((order - 4.0).abs() < 0.1, "{order}");
    }
}
