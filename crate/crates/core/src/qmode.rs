//! Degree-one mode: the same local discriminant/conductor machinery run
//! over the rationals, where ideals are positive integers.  It exists as
//! an independent cross-validation oracle for the quadratic-character and
//! coefficient-table code paths.

use crate::dirichlet::{divisors, l_neg, moebius, rat, KroneckerChar};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

/// Discriminant exponent at 2 for a nonzero rational x, by the same
/// descending square-defect search used in the quadratic field.
fn dyadic_disc_exponent_q(x: i128) -> u32 {
    let v = x.trailing_zeros();
    if v % 2 == 1 {
        return 3; // wild maximum 2e+1 with e = 1
    }
    let u = x >> v;
    // defect level: largest j <= 3 with u = square mod 2^j
    for j in (1..=3u32).rev() {
        let m = 1i128 << (j as i128);
        let found = (0..m).step_by(2).any(|t| {
            let mu = t + 1; // odd residues
            (mu * mu - u).rem_euclid(m) == 0
        });
        if found {
            return match j {
                3 => 0, // local square: trivial extension
                2 => 0, // unramified
                _ => 3 - j,
            };
        }
    }
    unreachable!("every odd integer is 1 mod 2")
}

/// Split x = cond^2 * disc over the rationals via local analysis; the
/// discriminant comes out signed (it is a fundamental discriminant or 1).
pub fn relative_discriminant_q(x: i128) -> Result<(i128, i128)> {
    if x == 0 {
        return Err(Error::ZeroElement);
    }
    let mut disc_abs = 1i128;
    let mut cond = 1i128;
    let mut n = x.abs();
    let mut odd_ramified = Vec::new();
    let mut p = 3i128;
    let v2 = n.trailing_zeros();
    n >>= v2;
    while p * p <= n {
        if n % p == 0 {
            let mut v = 0u32;
            while n % p == 0 {
                n /= p;
                v += 1;
            }
            if v % 2 == 1 {
                odd_ramified.push(p);
                disc_abs *= p;
            }
            cond *= p.pow(v / 2);
        }
        p += 2;
    }
    if n > 1 {
        odd_ramified.push(n);
        disc_abs *= n;
    }
    let d2 = dyadic_disc_exponent_q(x);
    if (v2 as i128) < (d2 as i128) || (v2 - d2) % 2 != 0 {
        return Err(Error::ConductorNotIntegral(x.to_string()));
    }
    disc_abs <<= d2;
    cond <<= (v2 - d2) / 2;
    // sign lives on the discriminant: |x| = cond^2 * disc_abs
    let disc = disc_abs * x.signum();
    debug_assert_eq!(cond * cond * disc, x);
    Ok((disc, cond))
}

/// Coefficient of the degree-one table: the L-value against the conductor
/// divisor sum, mirroring the quadratic-field assembly term by term.
pub fn table_coeff_q(r: u32, n: i128) -> Result<BigRational> {
    if r == 1 {
        return Err(Error::UnsupportedQMode);
    }
    assert!(n >= 0);
    if n == 0 {
        return Ok(crate::dirichlet::zeta_neg(1 - 2 * (r as i64)));
    }
    let x = if r % 2 == 0 { n } else { -n };
    // support: x must be 0 or 1 mod 4
    if !matches!(x.rem_euclid(4), 0 | 1) {
        return Ok(BigRational::zero());
    }
    let (d, f) = relative_discriminant_q(x)?;
    let chi = KroneckerChar { d };
    let l = l_neg(&chi, 1 - r as i64);
    let mut acc = BigRational::zero();
    for e in divisors(f) {
        let mu = moebius(e);
        let c = chi.eval(e);
        if mu != 0 && c != 0 {
            let mut inner = BigRational::zero();
            for t in divisors(f / e) {
                inner += BigRational::from(BigInt::from(t).pow(2 * r - 1));
            }
            acc += rat(mu * c) * BigRational::from(BigInt::from(e).pow(r - 1)) * inner;
        }
    }
    Ok(l * acc)
}
