//! One-dimensional helpers: Brent minimization and adaptive Gauss–Kronrod quadrature.

const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Brent's derivative-free minimizer on `[a, b]`; returns `(x_min, f(x_min))`.
pub fn brent_minimize<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = if a < b { (a, b) } else { (b, a) };
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let (mut d, mut e) = (0.0_f64, 0.0_f64);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let tol1 = tol + 1e-15 * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x < m { b - x } else { a - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u);
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Single 15-point Kronrod panel: `(kronrod, |kronrod - gauss|)`.
pub fn gk15<F, E>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64), E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let fc = f(c)?;
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let dx = hw * XGK[j];
        let s = f(c - dx)? + f(c + dx)?;
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    Ok((rk * hw, ((rk - rg) * hw).abs()))
}

/// Relative error below which a panel is not split: integrands evaluated at
/// absolute coordinates near a singular point carry rounding noise of
/// roughly this relative size, and bisecting cannot reduce it.
const NOISE_FLOOR: f64 = 1e-10;

/// Outcome of an adaptive 1-D integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

/// Adaptive Gauss–Kronrod integration over `[a, b]` split at `breaks`.
///
/// Panels are bisected depth-first until each meets `abs_tol * width / (b - a)`
/// or `max_depth` is reached; the summation order is fixed by the panel tree.
pub fn integrate_adaptive<F, E>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
    max_depth: u32,
) -> Result<Integral, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let mut pts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    pts.push(a);
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    let total = b - a;
    let mut acc = Integral { value: 0.0, error: 0.0, panels: 0 };
    if total <= 0.0 {
        return Ok(acc);
    }
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (v, e) = gk15(&mut f, lo, hi)?;
        acc.panels += 1;
        refine(&mut f, lo, hi, v, e, abs_tol / total, max_depth, &mut acc)?;
    }
    Ok(acc)
}

#[allow(clippy::too_many_arguments)]
fn refine<F, E>(
    f: &mut F,
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    density: f64,
    depth: u32,
    acc: &mut Integral,
) -> Result<(), E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    if err <= (density * (b - a)).max(NOISE_FLOOR * value.abs()) || depth == 0 || (b - a) <= 1e-14 * a.abs().max(b.abs()).max(1e-300) {
        acc.value += value;
        acc.error += err;
        return Ok(());
    }
    let m = 0.5 * (a + b);
    let (v1, e1) = gk15(f, a, m)?;
    let (v2, e2) = gk15(f, m, b)?;
    acc.panels += 2;
    refine(f, a, m, v1, e1, density, depth - 1, acc)?;
    refine(f, m, b, v2, e2, density, depth - 1, acc)
}
