use crate::real::Real;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // Γ(x)Γ(1-x) = π / sin(πx)
        let pi = T::PI();
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::lit(i as f64));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    half * (T::lit(2.0) * T::PI()).ln() + (x + half) * t.ln() - t + acc.ln()
}

pub fn ln_beta<T: Real>(a: T, b: T) -> T {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Continued fraction for `I_x(a, b)` by the modified Lentz method.
fn beta_continued_fraction<T: Real>(a: T, b: T, x: T) -> T {
    let max_iter = 10_000;
    let eps = T::epsilon();
    let tiny = T::min_positive_value() / eps;
    let one = T::one();
    let two = T::lit(2.0);

    let qab = a + b;
    let qap = a + one;
    let qam = a - one;
    let mut c = one;
    let mut d = one - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = d.recip();
    let mut h = d;
    for m in 1..=max_iter {
        let m = T::lit(m as f64);
        let m2 = two * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        h = h * d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let del = d * c;
        h = h * del;
        if (del - one).abs() <= eps {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function `I_x(a, b)` for `a, b > 0`, `x` in `[0, 1]`.
pub fn regularized_incomplete_beta<T: Real>(x: T, a: T, b: T) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    if x >= T::one() {
        return T::one();
    }
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b);
    let front = ln_front.exp();
    if x < (a + T::one()) / (a + b + T::lit(2.0)) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        T::one() - front * beta_continued_fraction(b, a, T::one() - x) / b
    }
}

/// Two-sided tail mass `P(|T| >= |t|)` for Student's t with `df` degrees of freedom.
pub(crate) fn student_t_two_sided<T: Real>(t: T, df: T) -> T {
    if t.is_infinite() {
        return T::zero();
    }
    let x = df / (df + t * t);
    regularized_incomplete_beta(x, df / T::lit(2.0), T::lit(0.5))
}

/// CDF of Student's t distribution. Saturates to 0/1 in the far tails.
pub fn student_t_cdf<T: Real>(x: T, df: T) -> T {
    if x.is_nan() || df.is_nan() || df <= T::zero() {
        return T::nan();
    }
    if x == T::zero() {
        return T::lit(0.5);
    }
    let tail = student_t_two_sided(x, df) / T::lit(2.0);
    if x > T::zero() {
        T::one() - tail
    } else {
        tail
    }
}

/// Inverse of [`student_t_cdf`] for `p` in `(0, 1)`.
pub fn student_t_quantile<T: Real>(p: T, df: T) -> T {
    if !(p > T::zero() && p < T::one()) || df.is_nan() || df <= T::zero() {
        return T::nan();
    }
    if p == T::lit(0.5) {
        return T::zero();
    }
    let mut lo = -T::one();
    let mut hi = T::one();
    while student_t_cdf(lo, df) > p {
        lo = lo * T::lit(2.0);
        if lo.is_infinite() {
            return lo;
        }
    }
    while student_t_cdf(hi, df) < p {
        hi = hi * T::lit(2.0);
        if hi.is_infinite() {
            return hi;
        }
    }
    for _ in 0..300 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid == lo || mid == hi {
            break;
        }
        if student_t_cdf(mid, df) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}
