//! Dirichlet-side arithmetic over the rationals: Kronecker symbols,
//! generalized Bernoulli numbers, L-values at non-positive integers,
//! (twisted) divisor sums, Hurwitz and Cohen class numbers, and the
//! classical class-number relation verifiers.

use crate::report::{RelationReport, ReportRow};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::sync::Mutex;

pub fn rat(n: i128) -> BigRational {
    BigRational::from(BigInt::from(n))
}

pub fn frac(n: i128, d: i128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Jacobi symbol (a/n) for odd n > 0.
fn jacobi(mut a: i128, mut n: i128) -> i128 {
    debug_assert!(n > 0 && n % 2 == 1);
    a = a.rem_euclid(n);
    let mut result = 1i128;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Kronecker symbol (a/n), full extension to all integers n.
pub fn kronecker_any(a: i128, n: i128) -> i128 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i128;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut twos = 0u32;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a/2) depends on a mod 8
        if matches!(a.rem_euclid(8), 3 | 5) && twos % 2 == 1 {
            result = -result;
        }
    }
    result * jacobi(a, n)
}

/// The quadratic character attached to a discriminant d (fundamental or 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KroneckerChar {
    pub d: i128,
}

impl KroneckerChar {
    pub fn new(d: i128) -> Result<Self> {
        if d == 1 || d.rem_euclid(4) <= 1 {
            Ok(KroneckerChar { d })
        } else {
            Err(Error::BadDiscriminant(d))
        }
    }

    pub fn eval(&self, n: i128) -> i128 {
        kronecker_any(self.d, n)
    }

    /// Modulus of the character.
    pub fn period(&self) -> i128 {
        self.d.abs()
    }
}

/// Kronecker symbol with the discriminant validity check.
pub fn kronecker(d: i128, n: i128) -> Result<i128> {
    Ok(KroneckerChar::new(d)?.eval(n))
}

static BERNOULLI: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// Bernoulli number B_n with B_1 = -1/2, memoized.
pub fn bernoulli(n: usize) -> BigRational {
    let mut cache = BERNOULLI.lock().unwrap();
    if cache.is_empty() {
        cache.push(BigRational::one());
    }
    while cache.len() <= n {
        let m = cache.len();
        // sum_{j<m} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, b) in cache.iter().enumerate() {
            acc += BigRational::from(binom.clone()) * b;
            binom = binom * BigInt::from(m as i64 + 1 - j as i64) / BigInt::from(j as i64 + 1);
        }
        let b = -acc / BigRational::from(BigInt::from(m as i64 + 1));
        cache.push(b);
    }
    cache[n].clone()
}

/// Bernoulli polynomial B_n(x) = sum C(n,j) B_j x^(n-j).
pub fn bernoulli_poly(n: usize, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    let mut binom = BigInt::one();
    for j in 0..=n {
        // binom = C(n, j); Horner over descending powers of x
        let term = BigRational::from(binom.clone()) * bernoulli(j);
        acc = acc * x + term;
        if j < n {
            binom = binom * BigInt::from((n - j) as i64) / BigInt::from(j as i64 + 1);
        }
    }
    acc
}

/// Generalized Bernoulli number B_{k,chi} for the Kronecker character.
pub fn gen_bernoulli(k: usize, chi: &KroneckerChar) -> BigRational {
    assert!(k >= 1);
    let f = chi.period();
    let mut acc = BigRational::zero();
    for a in 1..=f {
        let c = chi.eval(a);
        if c != 0 {
            acc += rat(c) * bernoulli_poly(k, &frac(a, f));
        }
    }
    let scale = BigRational::from(BigInt::from(f).pow(k as u32 - 1));
    scale * acc
}

/// L(1-k, chi) = -B_{k,chi}/k for k >= 1; the trivial character gives zeta.
pub fn l_neg(chi: &KroneckerChar, s: i64) -> BigRational {
    assert!(s <= 0, "only non-positive arguments");
    let k = (1 - s) as usize;
    -gen_bernoulli(k, chi) / rat(k as i128)
}

/// zeta(1-k) for k >= 1 (zeta(0) = -1/2, zeta(-1) = -1/12, ...).
pub fn zeta_neg(s: i64) -> BigRational {
    l_neg(&KroneckerChar { d: 1 }, s)
}

/// Divisors of n > 0 in increasing order.
pub fn divisors(n: i128) -> Vec<i128> {
    debug_assert!(n > 0);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Moebius function.
pub fn moebius(mut n: i128) -> i128 {
    debug_assert!(n > 0);
    let mut parity = 0u32;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            parity ^= 1;
        }
        p += 1;
    }
    if n > 1 {
        parity ^= 1;
    }
    if parity == 1 {
        -1
    } else {
        1
    }
}

/// sigma_k(n) = sum of d^k over divisors, with sigma_k(0) = zeta(-k)/2.
pub fn sigma(k: u32, n: i128) -> BigRational {
    if n == 0 {
        return zeta_neg(-(k as i64)) / rat(2);
    }
    debug_assert!(n > 0);
    let mut acc = BigInt::zero();
    for d in divisors(n) {
        acc += BigInt::from(d).pow(k);
    }
    BigRational::from(acc)
}

/// sigma_{k,chi}(n) = sum d^k chi(d): the divisor carries the character.
pub fn sigma_chi(n: i128, k: u32, chi: &KroneckerChar) -> BigRational {
    debug_assert!(n >= 1);
    let mut acc = BigInt::zero();
    for d in divisors(n) {
        let c = chi.eval(d);
        if c != 0 {
            acc += BigInt::from(c) * BigInt::from(d).pow(k);
        }
    }
    BigRational::from(acc)
}

/// sigma'_{k,chi}(n) = sum d^k chi(n/d): the codivisor carries the character.
pub fn sigma_chi_prime(n: i128, k: u32, chi: &KroneckerChar) -> BigRational {
    debug_assert!(n >= 1);
    let mut acc = BigInt::zero();
    for d in divisors(n) {
        let c = chi.eval(n / d);
        if c != 0 {
            acc += BigInt::from(c) * BigInt::from(d).pow(k);
        }
    }
    BigRational::from(acc)
}

/// Write m = f^2 * d with d a fundamental discriminant or 1.
/// Exists exactly when m = 0,1 mod 4.
pub fn disc_decompose(m: i128) -> Option<(i128, i128)> {
    debug_assert!(m != 0);
    let mut kernel = 1i128; // squarefree kernel of |m|
    let mut n = m.abs();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e % 2 == 1 {
                kernel *= p;
            }
        }
        p += 1;
    }
    kernel *= n;
    let d0 = kernel * m.signum();
    let d = if d0.rem_euclid(4) == 1 { d0 } else { 4 * d0 };
    if m % d != 0 {
        return None;
    }
    let f2 = m / d;
    let f = crate::field::is_perfect_square(f2)?;
    Some((d, f))
}

/// Hurwitz class number H(N) as an exact rational; zero off 0,3 mod 4.
pub fn hurwitz_h(n: i128) -> BigRational {
    assert!(n >= 0);
    if n == 0 {
        return zeta_neg(-1);
    }
    match disc_decompose(-n) {
        None => BigRational::zero(),
        Some((d, f)) => {
            let chi = KroneckerChar { d };
            let l0 = l_neg(&chi, 0);
            let mut acc = BigRational::zero();
            for e in divisors(f) {
                let mu = moebius(e);
                let c = chi.eval(e);
                if mu != 0 && c != 0 {
                    acc += rat(mu * c) * sigma(1, f / e);
                }
            }
            l0 * acc
        }
    }
}

/// Cohen class number H(r, N): L(1-r, chi_d) against the conductor part,
/// with H(r, 0) = zeta(1-2r) and the perfect-square case running through
/// the trivial character.
pub fn cohen_h(r: u32, n: i128) -> BigRational {
    assert!(r >= 1);
    assert!(n >= 0);
    if n == 0 {
        return zeta_neg(1 - 2 * (r as i64));
    }
    let x = if r % 2 == 0 { n } else { -n };
    match disc_decompose(x) {
        None => BigRational::zero(),
        Some((d, f)) => {
            let chi = KroneckerChar { d };
            let l = l_neg(&chi, 1 - r as i64);
            let mut acc = BigRational::zero();
            for e in divisors(f) {
                let mu = moebius(e);
                let c = chi.eval(e);
                if mu != 0 && c != 0 {
                    acc += rat(mu * c)
                        * BigRational::from(BigInt::from(e).pow(r - 1))
                        * sigma(2 * r - 1, f / e);
                }
            }
            l * acc
        }
    }
}

/// Half the min-divisor sum: (1/2) sum_{d|N} min(d, N/d).
pub fn lambda1(n: i128) -> BigRational {
    assert!(n >= 1);
    let mut acc = 0i128;
    for d in divisors(n) {
        acc += d.min(n / d);
    }
    frac(acc, 2)
}

/// sigma_k at a possibly non-integral or negative argument: 0 off the
/// non-negative integers, the zeta convention at 0.
fn sigma_at(k: u32, num: i128, den: i128) -> BigRational {
    if num < 0 || num % den != 0 {
        BigRational::zero()
    } else {
        sigma(k, num / den)
    }
}

/// The four classical relations, verified exactly.
///
/// * Kronecker:  2 sigma_1(N) = sum_s H(4N - s^2) + 2 lambda_1(N)
/// * Eichler:    sigma_1(N)/3 = sum_s H(N - s^2) + lambda_1(N), N odd
/// * H(2, N) = -(1/5) sum_s sigma_1((N-s^2)/4) - [N/10 when N is a square]
/// * H(4, N) = sum_s sigma_3((N-s^2)/4)
pub fn verify_classical(n_max: i128) -> Vec<RelationReport> {
    let mut reports = Vec::new();

    let mut kron = RelationReport::new("kronecker-hurwitz");
    kron.param("n_max", n_max);
    for n in 1..=n_max {
        let mut rhs = lambda1(n) * rat(2);
        let mut s = 0i128;
        while s * s <= 4 * n {
            let h = hurwitz_h(4 * n - s * s);
            rhs += if s == 0 { h } else { h * rat(2) };
            s += 1;
        }
        let lhs = sigma(1, n) * rat(2);
        kron.push_row(n as i64, &lhs, &rhs);
    }
    reports.push(kron);

    let mut eich = RelationReport::new("eichler");
    eich.param("n_max", n_max);
    let mut n = 1;
    while n <= n_max {
        let mut rhs = lambda1(n);
        let mut s = 0i128;
        while s * s <= n {
            let h = hurwitz_h(n - s * s);
            rhs += if s == 0 { h } else { h * rat(2) };
            s += 1;
        }
        let lhs = sigma(1, n) / rat(3);
        eich.push_row(n as i64, &lhs, &rhs);
        n += 2;
    }
    reports.push(eich);

    let mut c2 = RelationReport::new("cohen-h2");
    c2.param("n_max", n_max.min(100));
    for n in 0..=n_max.min(100) {
        let mut acc = BigRational::zero();
        let mut s = 0i128;
        while s * s <= n {
            let t = sigma_at(1, n - s * s, 4);
            acc += if s == 0 { t } else { t * rat(2) };
            s += 1;
        }
        let mut rhs = -acc / rat(5);
        if n > 0 && crate::field::is_perfect_square(n).is_some() {
            rhs -= frac(n, 10);
        }
        let lhs = cohen_h(2, n);
        c2.push_row(n as i64, &lhs, &rhs);
    }
    reports.push(c2);

    let mut c4 = RelationReport::new("cohen-h4");
    c4.param("n_max", n_max.min(100));
    for n in 0..=n_max.min(100) {
        let mut rhs = BigRational::zero();
        let mut s = 0i128;
        while s * s <= n {
            let t = sigma_at(3, n - s * s, 4);
            rhs += if s == 0 { t } else { t * rat(2) };
            s += 1;
        }
        let lhs = cohen_h(4, n);
        c4.push_row(n as i64, &lhs, &rhs);
    }
    reports.push(c4);

    reports
}

/// Truncated q-expansion of sum_N (sum_s H(r, (N-s^2)/|d|)) q^N, or the
/// odd-s variant with (4N-s^2)/|d|.  Generation only.
pub fn cohen_congruence_series(
    r: u32,
    d: i128,
    prec: usize,
    odd_s: bool,
) -> Result<crate::qseries::QSeries> {
    if d != 1 && (!matches!(d.rem_euclid(4), 0 | 1) || (-1i128).pow(r + 1) * d != d.abs()) {
        return Err(Error::BadDiscriminantParity { r, d });
    }
    let da = d.abs();
    let mut coeffs = vec![BigRational::zero(); prec + 1];
    for (big_n, c) in coeffs.iter_mut().enumerate() {
        let nn = big_n as i128;
        let cap = if odd_s { 4 * nn } else { nn };
        let mut s = if odd_s { 1 } else { 0 };
        while s * s <= cap {
            let arg = if odd_s { 4 * nn - s * s } else { nn - s * s };
            if arg % da == 0 {
                let h = cohen_h(r, arg / da);
                *c += if s == 0 { h } else { h * rat(2) };
            }
            s += if odd_s { 2 } else { 1 };
        }
    }
    Ok(crate::qseries::QSeries::new(coeffs))
}

pub fn rational_str(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("cannot parse rational {s:?}"));
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(BigRational::from(n))
    }
}

pub type Row = ReportRow;
