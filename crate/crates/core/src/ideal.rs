//! Integral ideals of the ring of integers in Hermite normal form:
//! products, norms, membership, exact quotients, prime factorization
//! through the splitting law, divisor enumeration, the Moebius function,
//! and twisted divisor-norm power sums.

use crate::field::{FieldElt, RealQuadField};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;

/// The lattice Z*a + Z*(b + c*w) with c | a, c | b, 0 <= b < a.
/// Uniqueness of this normal form makes equality structural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OIdeal {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl OIdeal {
    pub fn unit() -> Self {
        OIdeal { a: 1, b: 0, c: 1 }
    }

    pub fn norm(&self) -> i128 {
        self.a * self.c
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    /// Generators as lattice vectors (a, 0) and (b, c).
    pub fn gens(&self) -> [FieldElt; 2] {
        [FieldElt::new(self.a, 0), FieldElt::new(self.b, self.c)]
    }

    pub fn contains(&self, x: FieldElt) -> bool {
        if x.b.rem_euclid(self.c) != 0 {
            return false;
        }
        let k = x.b.div_euclid(self.c);
        (x.a - k * self.b).rem_euclid(self.a) == 0
    }

    /// Reduce an element modulo the lattice to the canonical residue with
    /// coordinates in [0, a) x [0, c).
    pub fn reduce(&self, x: FieldElt) -> FieldElt {
        let j = x.b.rem_euclid(self.c);
        let k = (x.b - j).div_euclid(self.c);
        let i = (x.a - k * self.b).rem_euclid(self.a);
        FieldElt::new(i, j)
    }

    pub fn to_string_bracket(&self) -> String {
        format!("[{}, {}+{}*w]", self.a, self.b, self.c)
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

pub fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

/// Hermite normal form of the full-rank lattice spanned by the given
/// nonzero vectors (x + y*w).  Panics if the span has rank < 2.
fn hnf_lattice(gens: &[(i128, i128)]) -> OIdeal {
    // combine to a single vector carrying the gcd of the w-coordinates
    let mut px = 0i128;
    let mut pc = 0i128;
    for &(x, y) in gens {
        if y == 0 {
            continue;
        }
        if pc == 0 {
            px = x;
            pc = y;
        } else {
            let (g, u, v) = ext_gcd(pc, y);
            px = u * px + v * x;
            pc = g;
        }
        if pc < 0 {
            px = -px;
            pc = -pc;
        }
    }
    assert!(pc != 0, "lattice is not full rank");
    let mut a = 0i128;
    for &(x, y) in gens {
        debug_assert_eq!(y % pc, 0);
        let r = x - (y / pc) * px;
        a = gcd(a, r);
    }
    assert!(a != 0, "lattice is not full rank");
    let b = px.rem_euclid(a);
    OIdeal { a, b, c: pc }
}

impl RealQuadField {
    /// HNF of the ideal generated as an o-module by the given elements.
    pub fn ideal_from_gens(&self, gens: &[FieldElt]) -> OIdeal {
        let w = FieldElt::new(0, 1);
        let mut vecs = Vec::with_capacity(gens.len() * 2);
        for &g in gens {
            vecs.push((g.a, g.b));
            let gw = self.mul(g, w);
            vecs.push((gw.a, gw.b));
        }
        let ideal = hnf_lattice(&vecs);
        debug_assert!(self.is_ideal(&ideal));
        ideal
    }

    /// Closure of the lattice under multiplication by w, checked on the
    /// two HNF generators.
    pub fn is_ideal(&self, i: &OIdeal) -> bool {
        if i.a <= 0 || i.c <= 0 || i.c > i.a {
            return false;
        }
        if i.a % i.c != 0 || i.b % i.c != 0 || !(0..i.a).contains(&i.b) {
            return false;
        }
        let w = FieldElt::new(0, 1);
        i.gens()
            .into_iter()
            .all(|g| i.contains(self.mul(g, w)))
    }

    /// The principal ideal (x).
    pub fn ideal_from_element(&self, x: FieldElt) -> Result<OIdeal> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let ideal = self.ideal_from_gens(&[x]);
        debug_assert_eq!(ideal.norm(), self.norm(x).abs());
        Ok(ideal)
    }

    pub fn ideal_mul(&self, i: &OIdeal, j: &OIdeal) -> OIdeal {
        let gi = i.gens();
        let gj = j.gens();
        let mut prods = Vec::with_capacity(4);
        for &x in &gi {
            for &y in &gj {
                prods.push(self.mul(x, y));
            }
        }
        self.ideal_from_gens(&prods)
    }

    pub fn ideal_pow(&self, i: &OIdeal, e: u32) -> OIdeal {
        let mut acc = OIdeal::unit();
        for _ in 0..e {
            acc = self.ideal_mul(&acc, i);
        }
        acc
    }

    pub fn ideal_conj(&self, i: &OIdeal) -> OIdeal {
        let g: Vec<FieldElt> = i.gens().into_iter().map(|x| self.conj(x)).collect();
        self.ideal_from_gens(&g)
    }

    /// Quotient by a rational integer dividing every coordinate.
    fn ideal_div_int(&self, i: &OIdeal, n: i128) -> Option<OIdeal> {
        (i.a % n == 0 && i.b % n == 0 && i.c % n == 0).then(|| OIdeal {
            a: i.a / n,
            b: i.b / n,
            c: i.c / n,
        })
    }

    /// Exact quotient I / J when J divides I, via I * conj(J) / N(J).
    pub fn ideal_div_exact(&self, i: &OIdeal, j: &OIdeal) -> Option<OIdeal> {
        if i.norm() % j.norm() != 0 {
            return None;
        }
        let prod = self.ideal_mul(i, &self.ideal_conj(j));
        let q = self.ideal_div_int(&prod, j.norm())?;
        // confirm divisibility: the quotient must multiply back
        (self.ideal_mul(&q, j) == *i).then_some(q)
    }

    /// Containment I subset-of J, i.e. J | I.
    pub fn ideal_divides(&self, j: &OIdeal, i: &OIdeal) -> bool {
        i.gens().into_iter().all(|g| j.contains(g))
    }

    pub fn ideal_sum(&self, i: &OIdeal, j: &OIdeal) -> OIdeal {
        let mut g = i.gens().to_vec();
        g.extend(j.gens());
        self.ideal_from_gens(&g)
    }

    pub fn ideals_coprime(&self, i: &OIdeal, j: &OIdeal) -> bool {
        self.ideal_sum(i, j).is_unit()
    }

    /// For coprime I, J: an element m of I with 1 - m in J.
    pub fn coprime_split(&self, i: &OIdeal, j: &OIdeal) -> Option<FieldElt> {
        let [g1, g2] = i.gens();
        let n = j.norm();
        for s in 0..n {
            for t in 0..n {
                let m = self.add(self.mul_scalar(g1, s), self.mul_scalar(g2, t));
                if j.contains(self.sub(FieldElt::one(), m)) {
                    return Some(m);
                }
            }
        }
        None
    }
}

/// A prime ideal above p with residue degree f (2 exactly when inert).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub p: i128,
    pub f: u8,
    pub ideal: OIdeal,
    /// Ramified prime: p divides the field discriminant.
    pub ramified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealFactorization {
    pub factors: Vec<(PrimeIdeal, u32)>,
}

impl IdealFactorization {
    pub fn norm(&self) -> i128 {
        self.factors
            .iter()
            .map(|(p, e)| p.ideal.norm().pow(*e))
            .product()
    }
}

fn pow_mod(mut b: i128, mut e: i128, m: i128) -> i128 {
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

/// Square root mod an odd prime via Tonelli-Shanks; None for non-residues.
fn sqrt_mod_p(n: i128, p: i128) -> Option<i128> {
    let n = n.rem_euclid(p);
    if n == 0 {
        return Some(0);
    }
    if pow_mod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(n, (p + 1) / 4, p));
    }
    // factor p-1 = q * 2^s with q odd
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(n, q, p);
    let mut r = pow_mod(n, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = t2 * t2 % p;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r)
}

/// Roots of x^2 - Tr(w) x + N(w) modulo p, i.e. residues of w.
fn omega_roots_mod_p(field: &RealQuadField, p: i128) -> Vec<i128> {
    let t = field.omega_trace().rem_euclid(p);
    let n = field.omega_norm().rem_euclid(p);
    if p == 2 {
        return (0..2).filter(|&r| (r * r + t * r + n) % 2 == 0).collect();
        // note -t = t mod 2
    }
    // discriminant of the quadratic is the field discriminant
    let disc = (t * t - 4 * n).rem_euclid(p);
    match sqrt_mod_p(disc, p) {
        None => vec![],
        Some(0) => vec![(t * mod_inverse(2, p).unwrap()).rem_euclid(p)],
        Some(s) => {
            let half = mod_inverse(2, p).unwrap();
            let r1 = ((t + s) * half).rem_euclid(p);
            let r2 = ((t - s) * half).rem_euclid(p);
            vec![r1, r2]
        }
    }
}

impl RealQuadField {
    /// The prime ideals above a rational prime.
    pub fn primes_above(&self, p: i128) -> Vec<PrimeIdeal> {
        let symbol = crate::dirichlet::kronecker_any(self.disc(), p);
        // a root r of the minimal polynomial of w gives the prime
        // generated by p and w - r, whose HNF entry is -r mod p
        match symbol {
            1 => omega_roots_mod_p(self, p)
                .into_iter()
                .map(|r| PrimeIdeal {
                    p,
                    f: 1,
                    ideal: OIdeal {
                        a: p,
                        b: (-r).rem_euclid(p),
                        c: 1,
                    },
                    ramified: false,
                })
                .collect(),
            -1 => vec![PrimeIdeal {
                p,
                f: 2,
                ideal: OIdeal { a: p, b: 0, c: p },
                ramified: false,
            }],
            _ => {
                let roots = omega_roots_mod_p(self, p);
                debug_assert_eq!(roots.len(), 1, "double root above a ramified prime");
                vec![PrimeIdeal {
                    p,
                    f: 1,
                    ideal: OIdeal {
                        a: p,
                        b: (-roots[0]).rem_euclid(p),
                        c: 1,
                    },
                    ramified: true,
                }]
            }
        }
    }

    /// Factor an ideal by trial division of its norm; exponents are pinned
    /// by exact ideal division.
    pub fn factor_ideal(&self, i: &OIdeal, bound: i128) -> Result<IdealFactorization> {
        let norm = i.norm();
        if norm > bound {
            return Err(Error::FactorizationOverflow { norm, bound });
        }
        let mut rest = norm;
        let mut rational_primes = Vec::new();
        let mut p = 2;
        while p * p <= rest {
            if rest % p == 0 {
                rational_primes.push(p);
                while rest % p == 0 {
                    rest /= p;
                }
            }
            p += 1;
        }
        if rest > 1 {
            rational_primes.push(rest);
        }
        let mut factors = Vec::new();
        for p in rational_primes {
            for prime in self.primes_above(p) {
                let mut e = 0u32;
                let mut current = *i;
                while let Some(q) = self.ideal_div_exact(&current, &prime.ideal) {
                    current = q;
                    e += 1;
                }
                if e > 0 {
                    factors.push((prime, e));
                }
            }
        }
        let fact = IdealFactorization { factors };
        debug_assert_eq!(fact.norm(), norm, "factorization reproduces the norm");
        Ok(fact)
    }

    /// All divisors from the exponent vectors of a factorization.
    pub fn ideal_divisors(&self, i: &OIdeal, bound: i128) -> Result<Vec<OIdeal>> {
        let f = self.factor_ideal(i, bound)?;
        let mut divs = vec![OIdeal::unit()];
        for (prime, e) in &f.factors {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            for d in &divs {
                let mut acc = *d;
                next.push(acc);
                for _ in 0..*e {
                    acc = self.ideal_mul(&acc, &prime.ideal);
                    next.push(acc);
                }
            }
            divs = next;
        }
        divs.sort();
        Ok(divs)
    }

    /// Moebius function: 0 on non-squarefree ideals, else parity of the
    /// number of prime factors.
    pub fn moebius_ideal(&self, i: &OIdeal, bound: i128) -> Result<i128> {
        let f = self.factor_ideal(i, bound)?;
        if f.factors.iter().any(|(_, e)| *e >= 2) {
            return Ok(0);
        }
        Ok(if f.factors.len() % 2 == 0 { 1 } else { -1 })
    }
}

/// A character on ideals; acceptance workloads use the trivial one, and
/// callers may supply explicit evaluations for nontrivial characters.
pub trait IdealCharacter {
    fn value(&self, field: &RealQuadField, ideal: &OIdeal) -> BigRational;
    fn is_trivial(&self) -> bool {
        false
    }
}

pub struct TrivialCharacter;

impl IdealCharacter for TrivialCharacter {
    fn value(&self, _field: &RealQuadField, _ideal: &OIdeal) -> BigRational {
        BigRational::one()
    }
    fn is_trivial(&self) -> bool {
        true
    }
}

/// Twisted divisor-norm power sum over the divisors of an ideal.
pub fn sigma_ideal(
    field: &RealQuadField,
    i: &OIdeal,
    k: u32,
    chi: &dyn IdealCharacter,
    bound: i128,
) -> Result<BigRational> {
    let mut acc = BigRational::from(BigInt::from(0));
    for d in field.ideal_divisors(i, bound)? {
        let nk = BigRational::from(BigInt::from(d.norm()).pow(k));
        acc += nk * chi.value(field, &d);
    }
    Ok(acc)
}

/// All integral ideals of the given norm.
pub fn ideals_of_norm(field: &RealQuadField, m: i128) -> Vec<OIdeal> {
    debug_assert!(m >= 1);
    let mut out = Vec::new();
    let mut c = 1;
    while c * c <= m {
        if m % (c * c) == 0 {
            let a_prim = m / (c * c);
            for b_prim in 0..a_prim {
                let cand = OIdeal {
                    a: c * a_prim,
                    b: c * b_prim,
                    c,
                };
                if field.is_ideal(&cand) {
                    out.push(cand);
                }
            }
        }
        c += 1;
    }
    out
}

/// Parse "[a, b+c*w]".
pub fn parse_ideal(field: &RealQuadField, s: &str) -> Result<OIdeal> {
    let bad = || Error::Parse(format!("cannot parse ideal {s:?}"));
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(bad)?;
    let (a_str, rest) = inner.split_once(',').ok_or_else(bad)?;
    let a: i128 = a_str.trim().parse().map_err(|_| bad())?;
    let g = crate::field::parse_elt(rest)?;
    let ideal = field.ideal_from_gens(&[FieldElt::new(a, 0), g]);
    Ok(ideal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::RealQuadField;

    fn f5() -> RealQuadField {
        RealQuadField::new(5).unwrap()
    }

    #[test]
    fn principal_ideals() {
        let f = f5();
        let i = f.ideal_from_element(FieldElt::new(2, 1)).unwrap();
        assert_eq!(i.norm(), 5);
        assert_eq!(i, OIdeal { a: 5, b: 2, c: 1 }); // contains 2+w itself
        let u = f.ideal_from_element(FieldElt::new(1, 1)).unwrap();
        assert!(u.is_unit());
        let one = f.ideal_from_element(FieldElt::one()).unwrap();
        assert_eq!(one, OIdeal::unit());
        assert_eq!(f.ideal_from_element(FieldElt::zero()), Err(Error::ZeroElement));
    }

    #[test]
    fn splitting_behaviour() {
        let f = f5();
        let eleven = f.ideal_from_element(FieldElt::new(11, 0)).unwrap();
        let fact = f.factor_ideal(&eleven, 1 << 20).unwrap();
        assert_eq!(fact.factors.len(), 2);
        assert!(fact.factors.iter().all(|(p, e)| p.ideal.norm() == 11 && *e == 1));
        // x^2 - x - 1 has roots 4 and -3 = 2 mod 11... check membership instead
        let two = f.ideal_from_element(FieldElt::new(2, 0)).unwrap();
        let fact2 = f.factor_ideal(&two, 1 << 20).unwrap();
        assert_eq!(fact2.factors.len(), 1);
        assert_eq!(fact2.factors[0].0.f, 2); // inert
        assert_eq!(fact2.factors[0].0.ideal.norm(), 4);
        let sqrt5 = f.ideal_from_element(FieldElt::new(-1, 2)).unwrap();
        let fact5 = f.factor_ideal(&f.ideal_from_element(FieldElt::new(5, 0)).unwrap(), 1 << 20).unwrap();
        assert_eq!(fact5.factors.len(), 1);
        assert!(fact5.factors[0].0.ramified);
        assert_eq!(fact5.factors[0].1, 2);
        assert_eq!(fact5.factors[0].0.ideal, sqrt5);
    }

    #[test]
    fn divisors_and_moebius() {
        let f = f5();
        let b = 1 << 20;
        assert_eq!(f.moebius_ideal(&OIdeal::unit(), b).unwrap(), 1);
        let five = f.ideal_from_element(FieldElt::new(5, 0)).unwrap();
        assert_eq!(f.moebius_ideal(&five, b).unwrap(), 0);
        let eleven = f.ideal_from_element(FieldElt::new(11, 0)).unwrap();
        let divs = f.ideal_divisors(&eleven, b).unwrap();
        assert_eq!(divs.len(), 4);
        assert_eq!(f.moebius_ideal(&eleven, b).unwrap(), 1);
    }

    #[test]
    fn sigma_values() {
        let f = f5();
        let b = 1 << 20;
        let one = OIdeal::unit();
        assert_eq!(sigma_ideal(&f, &one, 1, &TrivialCharacter, b).unwrap(), crate::dirichlet::rat(1));
        let two = f.ideal_from_element(FieldElt::new(2, 0)).unwrap();
        assert_eq!(sigma_ideal(&f, &two, 1, &TrivialCharacter, b).unwrap(), crate::dirichlet::rat(5));
        let eleven = f.ideal_from_element(FieldElt::new(11, 0)).unwrap();
        assert_eq!(
            sigma_ideal(&f, &eleven, 3, &TrivialCharacter, b).unwrap(),
            crate::dirichlet::rat(1774224)
        );
    }

    #[test]
    fn norm_is_multiplicative() {
        let f = f5();
        let xs = [
            FieldElt::new(2, 1),
            FieldElt::new(3, 0),
            FieldElt::new(7, 2),
            FieldElt::new(1, 5),
            FieldElt::new(-4, 3),
        ];
        for x in xs {
            for y in xs {
                let i = f.ideal_from_element(x).unwrap();
                let j = f.ideal_from_element(y).unwrap();
                let prod = f.ideal_mul(&i, &j);
                assert_eq!(prod.norm(), i.norm() * j.norm());
                assert_eq!(f.ideal_div_exact(&prod, &j), Some(i));
            }
        }
    }

    fn is_prime(n: i128) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn splitting_statistics_match_kronecker() {
        for d in [5i128, 8, 13, 17, 24, 29] {
            let f = RealQuadField::new(d).unwrap();
            for p in (2..500).filter(|&p| is_prime(p)) {
                let primes = f.primes_above(p);
                let sym = crate::dirichlet::kronecker_any(d, p);
                match sym {
                    1 => {
                        assert_eq!(primes.len(), 2, "D={d} p={p}");
                        assert!(primes.iter().all(|q| q.f == 1 && !q.ramified));
                        assert_ne!(primes[0].ideal, primes[1].ideal);
                    }
                    -1 => {
                        assert_eq!(primes.len(), 1);
                        assert_eq!(primes[0].f, 2);
                    }
                    _ => {
                        assert_eq!(primes.len(), 1);
                        assert!(primes[0].ramified);
                        // square reproduces (p)
                        let sq = f.ideal_pow(&primes[0].ideal, 2);
                        let p_ideal = f.ideal_from_element(FieldElt::new(p, 0)).unwrap();
                        assert_eq!(sq, p_ideal);
                    }
                }
                // all primes above p really are ideals of the right norm
                for q in &primes {
                    assert!(f.is_ideal(&q.ideal));
                    assert_eq!(q.ideal.norm(), p.pow(q.f as u32));
                }
            }
        }
    }

    #[test]
    fn ideal_enumeration() {
        let f = f5();
        // norms realized by ideals of Z[w], D=5: multiplicative pattern
        assert_eq!(ideals_of_norm(&f, 1), vec![OIdeal::unit()]);
        assert_eq!(ideals_of_norm(&f, 5).len(), 1);
        assert_eq!(ideals_of_norm(&f, 11).len(), 2);
        assert_eq!(ideals_of_norm(&f, 2).len(), 0);
        assert_eq!(ideals_of_norm(&f, 4).len(), 1);
        for m in 1..200 {
            for i in ideals_of_norm(&f, m) {
                assert!(f.is_ideal(&i));
                assert_eq!(i.norm(), m);
            }
        }
    }

    #[test]
    fn coprime_splitting() {
        let f = f5();
        let i = f.ideal_from_element(FieldElt::new(2, 1)).unwrap();
        let j = f.ideal_from_element(FieldElt::new(3, 0)).unwrap();
        let m = f.coprime_split(&i, &j).unwrap();
        assert!(i.contains(m));
        assert!(j.contains(f.sub(FieldElt::one(), m)));
    }

    #[test]
    fn ideal_strings() {
        let f = f5();
        let i = f.ideal_from_element(FieldElt::new(2, 1)).unwrap();
        assert_eq!(i.to_string_bracket(), "[5, 2+1*w]");
        assert_eq!(parse_ideal(&f, "[5, 2+1*w]").unwrap(), i);
    }
}
