/// `(√5 − 1) / 2`; `sqrt` is not available without `std`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search on `[lo, hi]` for the point that is best under
/// `better(x, y)` ("x beats y"). Every evaluated point, including both
/// endpoints, is a candidate; the best one seen is returned.
pub(crate) fn golden_section_by<T, F, B>(lo: f64, hi: f64, width: f64, mut eval: F, better: B) -> (f64, T)
where
    T: Clone,
    F: FnMut(f64) -> T,
    B: Fn(&T, &T) -> bool,
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut best = (lo, eval(lo));
    let mut consider = |t: f64, v: &T| {
        if better(v, &best.1) {
            best = (t, v.clone());
        }
    };
    consider(hi, &eval(hi));

    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = eval(c);
    let mut fd = eval(d);
    consider(c, &fc);
    consider(d, &fd);
    // the bracket shrinks by INV_PHI per step; 200 steps outlast f64 spacing
    for _ in 0..200 {
        if hi - lo <= width {
            break;
        }
        if better(&fc, &fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = eval(c);
            consider(c, &fc);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = eval(d);
            consider(d, &fd);
        }
    }
    let mid = 0.5 * (lo + hi);
    consider(mid, &eval(mid));
    best
}
