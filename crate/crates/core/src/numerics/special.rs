//! Error function, gamma functions and factorial helpers.

use num_complex::Complex64;
use std::f64::consts::PI;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

/// Error function, accurate to about 1e-15 absolute over the real line.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax <= 3.0 {
        erf_series(ax)
    } else if ax < 6.5 {
        1.0 - erfc_continued_fraction(ax)
    } else {
        1.0
    };
    v.copysign(x)
}

/// Complementary error function `1 - erf(x)`, with relative accuracy kept in the tail.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

// erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (2n+1)!!, all terms positive.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

// erfc(x) = exp(-x^2)/sqrt(pi) / (x + 1/2/(x + 1/(x + 3/2/(x + ...)))), modified Lentz.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..20_000 {
        let a = k as f64 * 0.5;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() <= f64::EPSILON {
            break;
        }
    }
    (-x * x).exp() / (f * PI.sqrt())
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for real `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma needs a positive argument");
    if x < 0.5 {
        // reflection keeps the Lanczos sum in its accurate half-plane
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    let t = z + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + a.ln()
}

/// Gamma function for real arguments, including negative non-integers.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    ln_gamma(x).exp()
}

/// `1 / Gamma(x)`, which is entire: zero at the non-positive integers.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x < 0.5 {
        return (PI * x).sin() * gamma(1.0 - x) / PI;
    }
    (-ln_gamma(x)).exp()
}

/// Log-gamma for complex arguments. The imaginary part is defined only modulo 2*pi.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let pi = Complex64::new(PI, 0.0);
        return pi.ln() - (pi * z).sin().ln() - ln_gamma_complex(1.0 - z);
    }
    let z = z - 1.0;
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    let t = z + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + a.ln()
}

/// `1 / Gamma(z)` for complex `z`, zero at the poles of Gamma.
pub fn recip_gamma_complex(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return Complex64::new(recip_gamma(z.re), 0.0);
    }
    (-ln_gamma_complex(z)).exp()
}

/// `ln(n!)`, exact products up to 170 and log-gamma beyond.
pub fn ln_factorial(n: u64) -> f64 {
    if n <= 170 {
        ln_factorial_table()[n as usize]
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

fn ln_factorial_table() -> &'static [f64; 171] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<[f64; 171]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; 171];
        let mut acc = 1.0_f64;
        for (n, slot) in t.iter_mut().enumerate().skip(1) {
            acc *= n as f64;
            *slot = acc.ln();
        }
        t
    })
}

/// Binomial coefficient as a float.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc.round()
}

/// `sin(x)/x` with the removable point at zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}
