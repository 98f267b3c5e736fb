//! Quadratic characters of relative quadratic extensions: the relative
//! discriminant and conductor ideals attached to a field element, and
//! evaluation of the associated character at integral ideals.
//!
//! Odd primes are tame: the discriminant exponent is the valuation mod 2.
//! Dyadic primes are decided by exhaustive square testing in the finite
//! rings o/p^m up to the Hensel depth m = v_p(4) + 1.

use crate::field::{FieldElt, RealQuadField};
use crate::ideal::{IdealCharacter, OIdeal, PrimeIdeal};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;

/// The quadratic character attached to x: discriminant and conductor
/// ideals with cond^2 * disc = (x), and enough local data to evaluate.
#[derive(Debug, Clone)]
pub struct FQuadChar {
    pub x: FieldElt,
    pub disc: OIdeal,
    pub cond: OIdeal,
    /// True exactly when x is a square in the field, so the extension is
    /// trivial and the character identically 1.
    pub square_class_flag: bool,
    /// Local discriminant data: (prime, disc exponent, valuation of x).
    locals: Vec<(PrimeIdeal, u32, u32)>,
}

/// All residues of o modulo an ideal, coordinates in [0,a) x [0,c).
fn residues(i: &OIdeal) -> impl Iterator<Item = FieldElt> + '_ {
    (0..i.c).flat_map(move |j| (0..i.a).map(move |k| FieldElt::new(k, j)))
}

/// Valuation of a nonzero element at a prime ideal by exact division.
pub fn elt_valuation(field: &RealQuadField, x: FieldElt, prime: &OIdeal) -> u32 {
    let mut power = *prime;
    let mut v = 0u32;
    loop {
        if !power.contains(x) {
            return v;
        }
        v += 1;
        power = field.ideal_mul(&power, prime);
    }
}

/// A uniformizer at a degree-one prime that avoids the conjugate prime:
/// the HNF generator b + w, shifted by p when it falls into the square.
fn split_uniformizer(field: &RealQuadField, prime: &PrimeIdeal) -> FieldElt {
    let p2 = field.ideal_pow(&prime.ideal, 2);
    let cand = FieldElt::new(prime.ideal.b, 1);
    let pi = if p2.contains(cand) {
        FieldElt::new(prime.ideal.b + prime.p, 1)
    } else {
        cand
    };
    debug_assert!(prime.ideal.contains(pi) && !p2.contains(pi));
    pi
}

/// An element of P^m \ P^(m+1): one of the two HNF generators works.
fn uniformizer_power(field: &RealQuadField, prime: &OIdeal, m: u32) -> FieldElt {
    if m == 0 {
        return FieldElt::one();
    }
    let pm = field.ideal_pow(prime, m);
    let pm1 = field.ideal_mul(&pm, prime);
    for g in pm.gens() {
        if !pm1.contains(g) {
            return g;
        }
    }
    unreachable!("P^m strictly contains P^(m+1)")
}

/// Largest j <= j_max such that x = mu^2 * w^2 mod P^(v+j) for a unit mu,
/// detecting the square defect of the unit part x / w^2.
fn square_defect_level(
    field: &RealQuadField,
    prime: &OIdeal,
    x: FieldElt,
    w: FieldElt,
    v: u32,
    j_max: u32,
) -> u32 {
    let w2 = field.mul(w, w);
    for j in (1..=j_max).rev() {
        let pj = field.ideal_pow(prime, j);
        let pvj = field.ideal_pow(prime, v + j);
        let found = residues(&pj).any(|mu| {
            if prime.contains(mu) {
                return false;
            }
            let t = field.sub(x, field.mul(field.mul(mu, mu), w2));
            pvj.contains(t)
        });
        if found {
            return j;
        }
    }
    0
}

/// Discriminant exponent of the local extension at a dyadic prime, for x
/// of the given valuation with w a valuation-v/2 witness (v even), or the
/// wild maximum 2e+1 when v is odd.
fn dyadic_disc_exponent(
    field: &RealQuadField,
    prime: &PrimeIdeal,
    x: FieldElt,
    v: u32,
) -> (u32, u32) {
    // e = valuation of 2 at this prime
    let e = if prime.ramified { 2 } else { 1 };
    if v % 2 == 1 {
        return (2 * e + 1, e);
    }
    let w = uniformizer_power(field, &prime.ideal, v / 2);
    let j = square_defect_level(field, &prime.ideal, x, w, v, 2 * e + 1);
    debug_assert!(j >= 1, "residue fields of characteristic 2 are perfect");
    if j >= 2 * e {
        (0, e)
    } else {
        (2 * e + 1 - j, e)
    }
}

/// Rational primes dividing the norm of (x); norm fits the factor bound in
/// every workload this crate runs.
fn rational_primes_of(mut n: i128) -> Vec<i128> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Compute the relative discriminant and conductor of x, with
/// cond^2 * disc = (x).
pub fn relative_discriminant(field: &RealQuadField, x: FieldElt) -> Result<FQuadChar> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let square_root = field.sqrt_exact(x);
    let norm = field.norm(x).abs();
    let mut locals = Vec::new();
    let mut disc = OIdeal::unit();
    let mut cond = OIdeal::unit();
    for p in rational_primes_of(norm) {
        for prime in field.primes_above(p) {
            let v = elt_valuation(field, x, &prime.ideal);
            if v == 0 && p != 2 {
                continue;
            }
            let d = if p == 2 {
                dyadic_disc_exponent(field, &prime, x, v).0
            } else {
                v % 2
            };
            if v < d || (v - d) % 2 != 0 {
                return Err(Error::ConductorNotIntegral(x.to_string()));
            }
            if d > 0 {
                disc = field.ideal_mul(&disc, &field.ideal_pow(&prime.ideal, d));
            }
            let fe = (v - d) / 2;
            if fe > 0 {
                cond = field.ideal_mul(&cond, &field.ideal_pow(&prime.ideal, fe));
            }
            if d > 0 || v > 0 {
                locals.push((prime, d, v));
            }
        }
    }
    // dyadic primes not dividing (x) can still ramify, which leaves no
    // room for an integral conductor
    if norm % 2 != 0 {
        for prime in field.primes_above(2) {
            let (d, _) = dyadic_disc_exponent(field, &prime, x, 0);
            if d > 0 {
                return Err(Error::ConductorNotIntegral(x.to_string()));
            }
        }
    }
    debug_assert!(square_root.is_none() || disc.is_unit());
    Ok(FQuadChar {
        x,
        disc,
        cond,
        square_class_flag: square_root.is_some(),
        locals,
    })
}

/// Wrapper that enforces integrality like `relative_discriminant` but keeps
/// the dyadic discriminant data even when the conductor would be fractional.
/// Used by diagnostics; the character itself requires the integral case.
pub fn try_relative_discriminant(field: &RealQuadField, x: FieldElt) -> Result<FQuadChar> {
    relative_discriminant(field, x)
}

fn pow_mod_i128(mut b: i128, mut e: i128, m: i128) -> i128 {
    let mut acc = 1i128;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Legendre symbol in the residue field F_p at a degree-one prime: map
/// w to its root -b mod p and take the power residue.
fn legendre_deg1(prime: &PrimeIdeal, u: FieldElt) -> i128 {
    let p = prime.p;
    let r = (-prime.ideal.b).rem_euclid(p);
    let residue = (u.a + u.b * r).rem_euclid(p);
    debug_assert!(residue != 0);
    let s = pow_mod_i128(residue, (p - 1) / 2, p);
    if s == 1 {
        1
    } else {
        -1
    }
}

/// Power residue in F_{p^2} = F_p[w]: exact square-and-multiply in the
/// quotient ring.
fn legendre_inert(field: &RealQuadField, p: i128, u: FieldElt) -> i128 {
    let t = field.omega_trace().rem_euclid(p);
    let n = field.omega_norm().rem_euclid(p);
    let mul = |x: (i128, i128), y: (i128, i128)| -> (i128, i128) {
        let ww = x.1 * y.1 % p;
        (
            (x.0 * y.0 % p + (p - ww * n % p)) % p,
            (x.0 * y.1 % p + x.1 * y.0 % p + ww * t % p) % p,
        )
    };
    let mut acc = (1i128, 0i128);
    let mut base = (u.a.rem_euclid(p), u.b.rem_euclid(p));
    let mut e = (p * p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    debug_assert_eq!(acc.1, 0);
    if acc.0 == 1 {
        1
    } else {
        debug_assert_eq!(acc.0, p - 1);
        -1
    }
}

impl FQuadChar {
    /// Character value at a prime ideal: 0 on the discriminant, otherwise
    /// +1 or -1 according to whether x is a local square after stripping
    /// even powers of a uniformizer.
    pub fn eval_prime(&self, field: &RealQuadField, prime: &PrimeIdeal) -> i128 {
        if self.square_class_flag {
            return 1;
        }
        if field.ideal_divides(&prime.ideal, &self.disc) && !self.disc.is_unit() {
            // only discriminant primes vanish
        }
        let on_disc = self
            .locals
            .iter()
            .any(|(q, d, _)| q.ideal == prime.ideal && *d > 0);
        if on_disc {
            return 0;
        }
        let v = elt_valuation(field, self.x, &prime.ideal);
        debug_assert_eq!(v % 2, 0, "unramified prime has even valuation");
        if prime.p == 2 {
            // local square test at the Hensel depth
            let e = if prime.ramified { 2 } else { 1 };
            let w = uniformizer_power(field, &prime.ideal, v / 2);
            let j = square_defect_level(field, &prime.ideal, self.x, w, v, 2 * e + 1);
            return if j == 2 * e + 1 { 1 } else { -1 };
        }
        if prime.f == 2 {
            // strip the rational prime directly
            let pk = prime.p.pow(v / 2);
            let u = FieldElt::new(self.x.a / pk, self.x.b / pk);
            return legendre_inert(field, prime.p, u);
        }
        if v == 0 {
            return legendre_deg1(prime, self.x);
        }
        // strip pi^v via the conjugate: x * conj(w)^2 / p^v is a unit at
        // this prime lying in the same square class as x
        let pi = split_uniformizer(field, prime);
        let w = field.pow(pi, v / 2);
        let wbar = field.conj(w);
        let num = field.mul(self.x, field.mul(wbar, wbar));
        // N(pi) = p * m with p not dividing m; x * conj(w)^2 / p^v is integral
        let pv = prime.p.pow(v);
        debug_assert!(num.a % pv == 0 && num.b % pv == 0);
        let u_int = FieldElt::new(num.a / pv, num.b / pv);
        let m = field.norm(pi).abs() / prime.p;
        debug_assert!(m % prime.p != 0);
        let mv = pow_mod_i128(m, v as i128, prime.p);
        let minv = crate::ideal::mod_inverse(mv, prime.p).unwrap();
        let r = (-prime.ideal.b).rem_euclid(prime.p);
        let residue = ((u_int.a + u_int.b * r).rem_euclid(prime.p) * minv).rem_euclid(prime.p);
        debug_assert!(residue != 0);
        if pow_mod_i128(residue, (prime.p - 1) / 2, prime.p) == 1 {
            1
        } else {
            -1
        }
    }

    /// Multiplicative extension over a factorization.
    pub fn eval(&self, field: &RealQuadField, ideal: &OIdeal, bound: i128) -> Result<i128> {
        if ideal.is_unit() {
            return Ok(1);
        }
        let fact = field.factor_ideal(ideal, bound)?;
        let mut acc = 1i128;
        for (prime, e) in fact.factors {
            let v = self.eval_prime(field, &prime);
            if v == 0 {
                return Ok(0);
            }
            if e % 2 == 1 {
                acc *= v;
            }
        }
        Ok(acc)
    }
}

/// Adapter exposing a quadratic character as a general ideal character.
pub struct QuadIdealCharacter<'a> {
    pub chi: &'a FQuadChar,
    pub bound: i128,
}

impl IdealCharacter for QuadIdealCharacter<'_> {
    fn value(&self, field: &RealQuadField, ideal: &OIdeal) -> BigRational {
        BigRational::from(BigInt::from(
            self.chi.eval(field, ideal, self.bound).unwrap_or(0),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::RealQuadField;

    fn f5() -> RealQuadField {
        RealQuadField::new(5).unwrap()
    }

    const B: i128 = 1 << 24;

    #[test]
    fn discriminant_of_minus_two_minus_w() {
        let f = f5();
        let x = FieldElt::new(-2, -1);
        let c = relative_discriminant(&f, x).unwrap();
        let sqrt5 = f.ideal_from_element(FieldElt::new(-1, 2)).unwrap();
        assert_eq!(c.disc, sqrt5);
        assert_eq!(c.cond, OIdeal::unit());
        assert!(!c.square_class_flag);
    }

    #[test]
    fn discriminant_of_minus_four() {
        let f = f5();
        let c = relative_discriminant(&f, FieldElt::new(-4, 0)).unwrap();
        let four = f.ideal_from_element(FieldElt::new(4, 0)).unwrap();
        assert_eq!(c.disc, four);
        assert_eq!(c.cond, OIdeal::unit());
    }

    #[test]
    fn square_class_detection() {
        let f = f5();
        let c = relative_discriminant(&f, FieldElt::new(1, 1)).unwrap();
        assert!(c.square_class_flag);
        assert!(c.disc.is_unit());
        assert!(c.cond.is_unit());
        // 5 = (2w-1)^2: conductor (sqrt 5)
        let c5 = relative_discriminant(&f, FieldElt::new(5, 0)).unwrap();
        assert!(c5.square_class_flag);
        assert!(c5.disc.is_unit());
        assert_eq!(c5.cond.norm(), 5);
    }

    #[test]
    fn conductor_square_times_disc_is_the_ideal() {
        let f = f5();
        // supported elements: lambda^2 + 4 gamma
        let mut checked = 0;
        let mut seed = 0x2468ace0u64;
        let mut rng = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as i128 % 13) - 6
        };
        while checked < 500 {
            let l = FieldElt::new(rng(), rng());
            let g = FieldElt::new(rng(), rng());
            let x = f.add(f.mul(l, l), f.mul_scalar(g, 4));
            if x.is_zero() {
                continue;
            }
            let c = relative_discriminant(&f, x).unwrap();
            let lhs = f.ideal_mul(&f.ideal_mul(&c.cond, &c.cond), &c.disc);
            let rhs = f.ideal_from_element(x).unwrap();
            assert_eq!(lhs, rhs, "x = {x}");
            checked += 1;
        }
    }

    #[test]
    fn character_values() {
        let f = f5();
        let chi = relative_discriminant(&f, FieldElt::new(-4, 0)).unwrap();
        // at (sqrt 5): -4 = 1 mod 5 is a square
        let p5 = f.primes_above(5).pop().unwrap();
        assert_eq!(chi.eval_prime(&f, &p5), 1);
        // at inert (3): -4 is a square in F_9
        let p3 = f.primes_above(3).pop().unwrap();
        assert_eq!(chi.eval_prime(&f, &p3), 1);
        // at the discriminant: 0
        let p2 = f.primes_above(2).pop().unwrap();
        assert_eq!(chi.eval_prime(&f, &p2), 0);
        let four = f.ideal_from_element(FieldElt::new(4, 0)).unwrap();
        assert_eq!(chi.eval(&f, &four, B).unwrap(), 0);
    }

    #[test]
    fn square_class_invariance() {
        let f = f5();
        let x = FieldElt::new(-2, -1);
        let chi = relative_discriminant(&f, x).unwrap();
        // multiply by squares of a few elements coprime to everything
        for t in [FieldElt::new(1, 1), FieldElt::new(3, 1), FieldElt::new(2, -1)] {
            let xt = f.mul(x, f.mul(t, t));
            let chit = relative_discriminant(&f, xt).unwrap();
            for p in [3i128, 7, 11, 13, 19, 23] {
                for prime in f.primes_above(p) {
                    if elt_valuation(&f, xt, &prime.ideal) % 2 == 0
                        && elt_valuation(&f, x, &prime.ideal) % 2 == 0
                        && chi.eval_prime(&f, &prime) != 0
                        && chit.eval_prime(&f, &prime) != 0
                    {
                        assert_eq!(
                            chi.eval_prime(&f, &prime),
                            chit.eval_prime(&f, &prime),
                            "p={p}, t={t}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicativity_on_ideals() {
        let f = f5();
        let chi = relative_discriminant(&f, FieldElt::new(-2, -1)).unwrap();
        let i = f.ideal_from_element(FieldElt::new(3, 0)).unwrap();
        let j = f.ideal_from_element(FieldElt::new(2, 1)).unwrap(); // divides disc
        let k = f.ideal_from_element(FieldElt::new(7, 0)).unwrap();
        let ij = f.ideal_mul(&i, &k);
        assert_eq!(
            chi.eval(&f, &ij, B).unwrap(),
            chi.eval(&f, &i, B).unwrap() * chi.eval(&f, &k, B).unwrap()
        );
        assert_eq!(chi.eval(&f, &j, B).unwrap(), 0);
    }

    #[test]
    fn dyadic_support_consistency() {
        // squares mod 4 always admit an integral conductor, and squares
        // with a dyadic unit value never ramify there
        for d in [5i128, 8, 13, 17] {
            let f = RealQuadField::new(d).unwrap();
            for a in -6..=6i128 {
                for b in -6..=6i128 {
                    let x = FieldElt::new(a, b);
                    if x.is_zero() || !f.is_square_mod4(x) {
                        continue;
                    }
                    let c = relative_discriminant(&f, x)
                        .unwrap_or_else(|e| panic!("D={d} x={x}: {e}"));
                    let lhs = f.ideal_mul(&f.ideal_mul(&c.cond, &c.cond), &c.disc);
                    assert_eq!(lhs, f.ideal_from_element(x).unwrap(), "D={d} x={x}");
                    if f.norm(x).abs() % 2 == 1 {
                        for prime in f.primes_above(2) {
                            assert!(
                                !c.locals
                                    .iter()
                                    .any(|(q, dd, _)| q.ideal == prime.ideal && *dd > 0),
                                "D={d} x={x}: dyadic unit on the support ramified"
                            );
                        }
                    }
                }
            }
        }
    }
}
