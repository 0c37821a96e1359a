//! The smooth bump `W` supported on `[1/2, 1]` and its Fourier transform
//! `W^(t) = int W(x) e(-t x) dx`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// `int W`, frozen from two quadrature rules that agree to 1e-15.
pub const WINDOW_MASS: f64 = 0.106_104_297_075_640_0;

/// Probe grid used for decay constants: `t = 0, 0.25, ..., 200`.
pub const PROBE_STEP: f64 = 0.25;
pub const PROBE_MAX: f64 = 200.0;

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const GK_KRONROD: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for nodes 1, 3, 5 and the centre.
const GK_GAUSS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// `W(x) = exp(16 - 1/((x - 1/2)(1 - x)))` on `(1/2, 1)`, zero elsewhere.
pub fn window_value(x: f64) -> f64 {
    if x <= 0.5 || x >= 1.0 {
        return 0.0;
    }
    (16.0 - 1.0 / ((x - 0.5) * (1.0 - x))).exp()
}

/// `W(3/4 + u)`; the bump is even about its peak.
#[inline]
fn centred(u: f64) -> f64 {
    let s = 0.0625 - u * u;
    if s <= 0.0 {
        0.0
    } else {
        (16.0 - 1.0 / s).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * GK_KRONROD[7];
    let mut gauss = fc * GK_GAUSS[3];
    for i in 0..7 {
        let dx = h * GK_NODES[i];
        let pair = f(c - dx) + f(c + dx);
        kronrod += GK_KRONROD[i] * pair;
        if i % 2 == 1 {
            gauss += GK_GAUSS[i / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

/// Globally adaptive Gauss-Kronrod (7, 15) on `[a, b]`, starting from
/// `pieces` equal panels.
fn adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    pieces: usize,
    abs_tol: f64,
    max_panels: usize,
) -> std::result::Result<f64, f64> {
    let width = (b - a) / pieces as f64;
    let mut heap: BinaryHeap<Panel> = (0..pieces)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == pieces { b } else { lo + width };
            gauss_kronrod(&f, lo, hi)
        })
        .collect();
    let mut error: f64 = heap.iter().map(|p| p.error).sum();
    loop {
        if error <= abs_tol {
            // the running total drifts; confirm before accepting
            error = heap.iter().map(|p| p.error).sum();
            if error <= abs_tol {
                return Ok(heap.iter().map(|p| p.value).sum());
            }
        }
        if heap.len() >= max_panels {
            return Err(heap.iter().map(|p| p.error).sum());
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod(&f, worst.a, mid);
        let right = gauss_kronrod(&f, mid, worst.b);
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
}

/// Quadrature settings for the Fourier transform of `W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothWindow {
    /// Absolute error target for `W^(t)`.
    pub abs_tol: f64,
    /// Maximum number of Gauss-Kronrod panels.
    pub max_panels: usize,
}

impl Default for SmoothWindow {
    fn default() -> Self {
        SmoothWindow {
            abs_tol: 1e-12,
            max_panels: 1 << 18,
        }
    }
}

impl SmoothWindow {
    pub fn value(&self, x: f64) -> f64 {
        window_value(x)
    }

    /// `W^(t)` by adaptive Gauss-Kronrod.
    ///
    /// Writing `x = 3/4 + u` and using the symmetry of `W` gives
    /// `W^(t) = e(-3t/4) * 2 int_0^{1/4} W(3/4 + u) cos(2 pi t u) du`,
    /// so only a real integral over a quarter-length interval is needed.
    pub fn fourier(&self, t: f64) -> Result<Complex64> {
        let omega = TAU * t;
        let pieces = ((t.abs() / 4.0).ceil() as usize).max(4);
        let half = adaptive(
            |u| centred(u) * (omega * u).cos(),
            0.0,
            0.25,
            pieces,
            self.abs_tol / 2.0,
            self.max_panels.max(pieces + 2),
        )
        .map_err(|estimate| Error::QuadratureBudgetExceeded {
            t,
            target: self.abs_tol,
            estimate: 2.0 * estimate,
            budget: self.max_panels,
        })?;
        Ok(phase(-0.75 * t) * (2.0 * half))
    }

    /// `W^(t)` by the composite trapezoid rule on `[1/2, 1]`, refined by
    /// doubling until consecutive values agree to `1e-15`. `W` vanishes to
    /// all orders at both ends, so the rule converges faster than any power
    /// of the step; it shares no nodes or weights with [`Self::fourier`].
    pub fn fourier_trapezoid(&self, t: f64) -> Complex64 {
        let term = |x: f64| window_value(x) * phase(-t * x);
        let mut n: usize = 64;
        while (n as f64) < 2.0 * t.abs() + 64.0 {
            n *= 2;
        }
        let mut h = 0.5 / n as f64;
        let mut sum: Complex64 = (1..n).map(|i| term(0.5 + h * i as f64)).sum();
        let mut estimate = sum * h;
        while n < 1 << 24 {
            let mids: Complex64 = (0..n).map(|i| term(0.5 + h * (i as f64 + 0.5))).sum();
            sum += mids;
            n *= 2;
            h *= 0.5;
            let next = sum * h;
            let done = (next - estimate).norm() <= 1e-15;
            estimate = next;
            if done {
                break;
            }
        }
        estimate
    }

    /// `W^(m * step)` for `m = 1..=count`, by one trapezoid rule shared by
    /// every frequency.
    ///
    /// For a compactly supported `W` the trapezoid rule with node spacing
    /// `1/H` returns exactly `sum_k W^(t + kH)`, so the error at `t` is the
    /// aliased mass `sum_{k != 0} |W^(t + kH)|`. `H` is the smallest multiple
    /// of 4 for which the decay bound of `profile` puts that mass below
    /// `alias_tol` at every requested frequency. Returns the values and the
    /// certified aliasing bound.
    pub fn fourier_progression(
        &self,
        step: f64,
        count: u64,
        profile: &DecayProfile,
        alias_tol: f64,
    ) -> Result<(Vec<Complex64>, f64)> {
        if !(step > 0.0 && alias_tol > 0.0) || profile.exponent < 2 {
            return Err(Error::InvalidParameter(format!(
                "step {step}, alias_tol {alias_tol}, exponent {}",
                profile.exponent
            )));
        }
        let t_max = step * count as f64;
        let a = profile.exponent as f64;
        // sum_{k >= 1} C (1 + kH - t)^(-A) for both signs of k, bounded by
        // the first term plus an integral.
        let alias = |h: f64| {
            let g = 1.0 + h - t_max;
            2.0 * profile.constant * (g.powf(-a) + g.powf(1.0 - a) / (h * (a - 1.0)))
        };
        let mut gap = 64.0f64;
        while alias(t_max + gap) > alias_tol {
            gap *= 2.0;
        }
        let (mut lo, mut hi) = (gap / 2.0, gap);
        while hi - lo > 4.0 {
            let mid = 0.5 * (lo + hi);
            if alias(t_max + mid) > alias_tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let quarter = ((t_max + hi) / 4.0).ceil() as u64;
        let h = 4 * quarter;
        let bound = alias(h as f64);
        let spacing = 1.0 / h as f64;

        // cosine sums over the symmetric nodes u_j = j / H, |j| <= H/4
        let mut sums = vec![0.5 * centred(0.0); count as usize];
        for j in 1..quarter {
            let u = j as f64 * spacing;
            let w = centred(u);
            if w == 0.0 {
                continue;
            }
            let rotation = phase(step * u);
            let mut z = rotation;
            for (m, acc) in sums.iter_mut().enumerate() {
                *acc += w * z.re;
                // reseed periodically so the recurrence cannot drift
                z = if (m + 1) % 1024 == 0 {
                    phase(step * u * (m + 2) as f64)
                } else {
                    z * rotation
                };
            }
        }
        let values = sums
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                let t = step * (i + 1) as f64;
                phase(-0.75 * t) * (2.0 * spacing * s)
            })
            .collect();
        Ok((values, bound))
    }

    /// `W^(0) = int W`.
    pub fn mass(&self) -> Result<f64> {
        Ok(self.fourier(0.0)?.re)
    }
}

/// `e(x)` with the argument reduced mod 1 first.
#[inline]
fn phase(x: f64) -> Complex64 {
    Complex64::cis(TAU * (x - x.round()))
}

/// `W^(t)` with the default quadrature settings.
pub fn window_fourier(t: f64) -> Result<Complex64> {
    SmoothWindow::default().fourier(t)
}

/// Empirical decay constant `C_A = max_t |W^(t)| (1 + |t|)^A` over a probe grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayProfile {
    pub exponent: u32,
    pub t_max: f64,
    pub step: f64,
    pub constant: f64,
    /// Grid point where the maximum is attained.
    pub argmax: f64,
}

fn probe_grid(t_max: f64) -> Result<Vec<(f64, f64)>> {
    let window = SmoothWindow::default();
    let count = (t_max / PROBE_STEP).floor() as usize;
    (0..=count)
        .map(|i| {
            let t = i as f64 * PROBE_STEP;
            Ok((t, window.fourier(t)?.norm()))
        })
        .collect()
}

fn canonical_grid() -> &'static [(f64, f64)] {
    static GRID: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    GRID.get_or_init(|| probe_grid(PROBE_MAX).expect("default quadrature converges on the probe grid"))
}

/// Decay constants over `t in {0, 0.25, ..., t_max}`. The canonical grid
/// (`t_max = 200`) is computed once per process.
pub fn decay_profile(t_max: f64, exponent: u32) -> Result<DecayProfile> {
    if !(t_max >= 0.0) {
        return Err(Error::InvalidParameter(format!("t_max = {t_max}")));
    }
    let owned;
    let grid: &[(f64, f64)] = if t_max == PROBE_MAX {
        canonical_grid()
    } else {
        owned = probe_grid(t_max)?;
        &owned
    };
    let (argmax, constant) = grid
        .iter()
        .map(|&(t, mag)| (t, mag * (1.0 + t).powi(exponent as i32)))
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .expect("grid contains t = 0");
    Ok(DecayProfile {
        exponent,
        t_max,
        step: PROBE_STEP,
        constant,
        argmax,
    })
}

impl DecayProfile {
    /// `C_A (1 + |t|)^(-A)`.
    pub fn tail_bound(&self, t: f64) -> f64 {
        self.constant * (1.0 + t.abs()).powi(-(self.exponent as i32))
    }

    /// Upper bound for `sum_{|m| > M} C_A (1 + |m| r)^(-A)` with `r = N/q`,
    /// by comparison with the integral.
    pub fn dual_tail(&self, ratio: f64, cutoff: u64) -> f64 {
        let a = self.exponent as f64;
        2.0 * self.constant / (ratio * (a - 1.0)) * (1.0 + cutoff as f64 * ratio).powf(1.0 - a)
    }

    /// Smallest cutoff `M` with `dual_tail(ratio, M) < target`.
    pub fn truncation(&self, ratio: f64, target: f64) -> Result<u64> {
        if self.exponent < 2 {
            return Err(Error::InvalidParameter(format!(
                "decay exponent {} gives no summable tail",
                self.exponent
            )));
        }
        if !(ratio > 0.0 && target > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ratio {ratio}, target {target}"
            )));
        }
        let a = self.exponent as f64;
        let base = (2.0 * self.constant / (ratio * (a - 1.0) * target)).powf(1.0 / (a - 1.0));
        let mut m = (((base - 1.0) / ratio).max(0.0)).ceil() as u64;
        while self.dual_tail(ratio, m) >= target {
            m += 1;
        }
        while m > 0 && self.dual_tail(ratio, m - 1) < target {
            m -= 1;
        }
        Ok(m)
    }
}

/// `|W^(t)| <= W^(0)`, which holds because `W >= 0`.
pub fn fourier_bounded_by_mass(t: f64) -> Result<bool> {
    Ok(window_fourier(t)?.norm() <= window_fourier(0.0)?.re + 1e-12)
}
