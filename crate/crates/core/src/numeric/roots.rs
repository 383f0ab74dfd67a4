/// Bisection of a function with a sign change on `[lo, hi]`, stopping when
/// the bracket is narrower than `width` or cannot be split further.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, width: f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Bisection in `ln x` for a positive root bracketed by `0 < lo < hi`.
/// Stops once `hi / lo - 1 < rel_width`.
pub fn bisect_log<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, rel_width: f64) -> f64 {
    debug_assert!(lo > 0.0 && hi > lo);
    let root = bisect(|s| f(s.exp()), lo.ln(), hi.ln(), rel_width.ln_1p());
    root.exp()
}
