//! Exact arithmetic in the ring of integers of a real quadratic field.
//!
//! Elements are written on the basis {1, w} where w = (1+sqrt(D))/2 for
//! D = 1 mod 4 and w = sqrt(D)/2 for D = 0 mod 4.  Total positivity,
//! square classes mod 4, the norm -1 unit found by continued fractions,
//! and the trace-line enumeration used by diagonal restriction all live
//! here.  Every test is an exact integer sign test.

use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::fmt;

/// Which quadratic integer generates the ring: (1+sqrt(D))/2 or sqrt(D)/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaKind {
    HalfOnePlusSqrt,
    HalfSqrt,
}

/// A real quadratic field of fundamental discriminant D > 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealQuadField {
    d: i128,
    omega_kind: OmegaKind,
    omega_trace: i128,
    omega_norm: i128,
}

/// An algebraic integer a + b*w, coordinates on the {1, w} basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElt {
    pub a: i128,
    pub b: i128,
}

impl FieldElt {
    pub const fn new(a: i128, b: i128) -> Self {
        FieldElt { a, b }
    }

    pub const fn zero() -> Self {
        FieldElt { a: 0, b: 0 }
    }

    pub const fn one() -> Self {
        FieldElt { a: 1, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn neg(&self) -> Self {
        FieldElt::new(-self.a, -self.b)
    }
}

impl fmt::Display for FieldElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b < 0 {
            write!(f, "{}-{}*w", self.a, -self.b)
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

/// Parse "a+b*w" / "a-b*w" / "a"; spaces are ignored.
pub fn parse_elt(s: &str) -> Result<FieldElt> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot parse field element {s:?}"));
    if let Some(idx) = t.find("*w") {
        if idx + 2 != t.len() {
            return Err(bad());
        }
        let head = &t[..idx];
        // split at the last sign that separates the two terms
        let mut split = None;
        for (i, c) in head.char_indices().skip(1) {
            if (c == '+' || c == '-') && !matches!(&head[i - 1..i], "+" | "-") {
                split = Some(i);
            }
        }
        let i = split.ok_or_else(bad)?;
        let a: i128 = head[..i].parse().map_err(|_| bad())?;
        let bs = &head[i..];
        let b: i128 = if bs == "+" {
            1
        } else if bs == "-" {
            -1
        } else {
            bs.parse().map_err(|_| bad())?
        };
        Ok(FieldElt::new(a, b))
    } else {
        let a: i128 = t.parse().map_err(|_| bad())?;
        Ok(FieldElt::new(a, 0))
    }
}

/// Integer square root, exact floor.
pub fn isqrt(n: i128) -> i128 {
    assert!(n >= 0);
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128 + 2;
    while x * x > n {
        x -= 1;
    }
    x
}

pub fn is_perfect_square(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

fn is_squarefree(mut n: i128) -> bool {
    assert!(n > 0);
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl RealQuadField {
    /// Validate a fundamental discriminant and fix the basis convention.
    pub fn new(d: i128) -> Result<Self> {
        if d <= 4 {
            return Err(Error::NotFundamentalDiscriminant(d));
        }
        match d.rem_euclid(4) {
            1 => {
                if !is_squarefree(d) {
                    return Err(Error::NotFundamentalDiscriminant(d));
                }
                Ok(RealQuadField {
                    d,
                    omega_kind: OmegaKind::HalfOnePlusSqrt,
                    omega_trace: 1,
                    omega_norm: (1 - d) / 4,
                })
            }
            0 => {
                let m = d / 4;
                if !matches!(m.rem_euclid(4), 2 | 3) || !is_squarefree(m) {
                    return Err(Error::NotFundamentalDiscriminant(d));
                }
                Ok(RealQuadField {
                    d,
                    omega_kind: OmegaKind::HalfSqrt,
                    omega_trace: 0,
                    omega_norm: -m,
                })
            }
            _ => Err(Error::NotFundamentalDiscriminant(d)),
        }
    }

    pub fn disc(&self) -> i128 {
        self.d
    }

    pub fn omega_kind(&self) -> OmegaKind {
        self.omega_kind
    }

    /// Tr(w): 1 or 0.
    pub fn omega_trace(&self) -> i128 {
        self.omega_trace
    }

    /// N(w): (1-D)/4 or -D/4.
    pub fn omega_norm(&self) -> i128 {
        self.omega_norm
    }

    /// sqrt(D) on the {1, w} basis: 2w - Tr(w).
    pub fn sqrt_d(&self) -> FieldElt {
        FieldElt::new(-self.omega_trace, 2)
    }

    pub fn add(&self, x: FieldElt, y: FieldElt) -> FieldElt {
        FieldElt::new(x.a + y.a, x.b + y.b)
    }

    pub fn sub(&self, x: FieldElt, y: FieldElt) -> FieldElt {
        FieldElt::new(x.a - y.a, x.b - y.b)
    }

    /// w^2 = Tr(w)*w - N(w) closes the multiplication.
    pub fn mul(&self, x: FieldElt, y: FieldElt) -> FieldElt {
        let ww = x.b * y.b;
        FieldElt::new(
            x.a * y.a - ww * self.omega_norm,
            x.a * y.b + x.b * y.a + ww * self.omega_trace,
        )
    }

    pub fn mul_scalar(&self, x: FieldElt, k: i128) -> FieldElt {
        FieldElt::new(x.a * k, x.b * k)
    }

    pub fn conj(&self, x: FieldElt) -> FieldElt {
        FieldElt::new(x.a + x.b * self.omega_trace, -x.b)
    }

    pub fn trace(&self, x: FieldElt) -> i128 {
        2 * x.a + x.b * self.omega_trace
    }

    pub fn norm(&self, x: FieldElt) -> i128 {
        x.a * x.a + x.a * x.b * self.omega_trace + x.b * x.b * self.omega_norm
    }

    pub fn pow(&self, x: FieldElt, e: u32) -> FieldElt {
        let mut acc = FieldElt::one();
        for _ in 0..e {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// Exact quotient x/y in the ring, or InexactDivision.
    pub fn div_exact(&self, x: FieldElt, y: FieldElt) -> Result<FieldElt> {
        if y.is_zero() {
            return Err(Error::ZeroElement);
        }
        let n = self.norm(y);
        let t = self.mul(x, self.conj(y));
        if t.a % n != 0 || t.b % n != 0 {
            return Err(Error::InexactDivision);
        }
        Ok(FieldElt::new(t.a / n, t.b / n))
    }

    /// Sign of the chosen embedding: +1 sends w to (Tr(w)+sqrt(D))/2.
    /// Exact: decides A + B*sqrt(D) > 0 for integers A, B.
    pub fn embedding_positive(&self, x: FieldElt, first: bool) -> bool {
        let a2 = 2 * x.a + x.b * self.omega_trace;
        let b = if first { x.b } else { -x.b };
        if b == 0 {
            a2 > 0
        } else if b > 0 {
            a2 >= 0 || a2 * a2 < b * b * self.d
        } else {
            a2 > 0 && a2 * a2 > b * b * self.d
        }
    }

    /// Both embeddings positive; equivalently trace > 0 and norm > 0.
    pub fn is_totally_positive(&self, x: FieldElt) -> bool {
        self.trace(x) > 0 && self.norm(x) > 0
    }

    /// Is x congruent to a square mod 4?  Squares mod 4 depend only on the
    /// residue of the root mod 2, so four candidates decide it.
    pub fn is_square_mod4(&self, x: FieldElt) -> bool {
        for la in 0..2i128 {
            for lb in 0..2i128 {
                let l = FieldElt::new(la, lb);
                let t = self.sub(self.mul(l, l), x);
                if t.a.rem_euclid(4) == 0 && t.b.rem_euclid(4) == 0 {
                    return true;
                }
            }
        }
        false
    }

    /// Exact square root in the ring, if one exists.
    pub fn sqrt_exact(&self, x: FieldElt) -> Option<FieldElt> {
        if x.is_zero() {
            return Some(FieldElt::zero());
        }
        if self.norm(x) < 0 || self.trace(x) <= 0 {
            return None; // a nonzero square is totally positive
        }
        if is_perfect_square(self.norm(x)).is_none() {
            return None;
        }
        // |i_j(y)|^2 = i_j(x) <= Tr(x), so |b(y)| <= 2 sqrt(Tr(x)/D).
        let tr = self.trace(x);
        let bb = 2 * isqrt(tr / self.d + 1) + 2;
        for b in -bb..=bb {
            // match the w-coordinate of y^2 = (a^2 - b^2 N) + (2ab + b^2 T) w
            let a = if b == 0 {
                match is_perfect_square(x.a) {
                    Some(r) => r,
                    None => continue,
                }
            } else {
                let num = x.b - b * b * self.omega_trace;
                if num % (2 * b) != 0 {
                    continue;
                }
                num / (2 * b)
            };
            for cand in [FieldElt::new(a, b), FieldElt::new(-a, -b)] {
                if self.mul(cand, cand) == x {
                    return Some(cand);
                }
            }
        }
        None
    }

    /// Fundamental unit > 1 by the continued fraction of the reduced
    /// quadratic irrational (b0+sqrt(D))/2, together with its norm.
    pub fn fundamental_unit(&self) -> Result<(FieldElt, i128)> {
        let d = self.d;
        let d0 = isqrt(d);
        let b0 = if (d0 - d).rem_euclid(2) == 0 { d0 } else { d0 - 1 };
        debug_assert!(b0 >= 1);
        let (p0, q0) = (b0, 2i128);
        let mut p = p0;
        let mut q = q0;
        // convergent denominators of the purely periodic expansion
        let mut qm1 = BigInt::zero();
        let mut qk = BigInt::one();
        let mut period = 0usize;
        loop {
            let a = (p + d0).div_euclid(q);
            let p_next = a * q - p;
            let q_next = (d - p_next * p_next) / q;
            debug_assert!(q_next > 0, "cycle left the reduced domain");
            period += 1;
            if period > 1 {
                let t = &qm1 + BigInt::from(a) * &qk;
                qm1 = std::mem::replace(&mut qk, t);
            }
            p = p_next;
            q = q_next;
            if (p, q) == (p0, q0) {
                break;
            }
            if period > 100_000 {
                return Err(Error::InvalidParameter(format!(
                    "continued fraction period for D={d} too long"
                )));
            }
        }
        // eps = q_{l-1} * alpha0 + q_{l-2},  alpha0 = (b0 - Tr w)/2 + w
        let c = (b0 - self.omega_trace) / 2;
        let big_to_i128 = |x: &BigInt| -> Result<i128> {
            i128::try_from(x.clone())
                .map_err(|_| Error::InvalidParameter(format!("fundamental unit of D={d} overflows")))
        };
        let ql1 = big_to_i128(&qk)?;
        let ql2 = big_to_i128(&qm1)?;
        let eps = FieldElt::new(ql1 * c + ql2, ql1);
        let norm_sign = if period % 2 == 1 { -1 } else { 1 };
        debug_assert_eq!(self.norm(eps), norm_sign);
        debug_assert!(self.embedding_positive(eps, true));
        Ok((eps, norm_sign))
    }

    /// Smallest totally positive fundamental unit: eps^2 when N(eps) = -1.
    pub fn totally_positive_unit(&self) -> Result<FieldElt> {
        let (eps, n) = self.fundamental_unit()?;
        let u = if n == -1 { self.mul(eps, eps) } else { eps };
        debug_assert!(self.is_totally_positive(u));
        Ok(u)
    }

    /// Exact arithmetic on elements with rational coordinates.
    pub fn qmul(&self, x: &QElt, y: &QElt) -> QElt {
        let t = BigRational::from(BigInt::from(self.omega_trace));
        let n = BigRational::from(BigInt::from(self.omega_norm));
        let ww = &x.b * &y.b;
        QElt {
            a: &x.a * &y.a - &ww * n,
            b: &x.a * &y.b + &x.b * &y.a + ww * t,
        }
    }

    pub fn qconj(&self, x: &QElt) -> QElt {
        let t = BigRational::from(BigInt::from(self.omega_trace));
        QElt {
            a: &x.a + &x.b * t,
            b: -x.b.clone(),
        }
    }

    pub fn qtrace(&self, x: &QElt) -> BigRational {
        let t = BigRational::from(BigInt::from(self.omega_trace));
        BigRational::from(BigInt::from(2)) * &x.a + &x.b * t
    }

    pub fn qnorm(&self, x: &QElt) -> BigRational {
        let c = self.qconj(x);
        self.qmul(x, &c).a
    }

    pub fn qinv(&self, x: &QElt) -> QElt {
        let n = self.qnorm(x);
        assert!(!n.is_zero(), "division by zero element");
        let c = self.qconj(x);
        QElt {
            a: c.a / &n,
            b: c.b / n,
        }
    }
}

/// Field element with rational coordinates a + b*w.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QElt {
    pub a: BigRational,
    pub b: BigRational,
}

impl QElt {
    pub fn from_elt(x: FieldElt) -> Self {
        QElt {
            a: BigRational::from(BigInt::from(x.a)),
            b: BigRational::from(BigInt::from(x.b)),
        }
    }

    pub fn zero() -> Self {
        QElt {
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        QElt {
            a: BigRational::one(),
            b: BigRational::zero(),
        }
    }

    pub fn add(&self, o: &QElt) -> QElt {
        QElt {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    pub fn scale(&self, r: &BigRational) -> QElt {
        QElt {
            a: &self.a * r,
            b: &self.b * r,
        }
    }
}

/// A unit u = alpha + beta*w of norm -1 with trace > 0, and the totally
/// positive generator delta = u*sqrt(D) of the different.  The linear form
/// ell(a+b*w) = a*beta - b*alpha computes Tr(x/delta).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RestrictionUnit {
    pub alpha: i128,
    pub beta: i128,
    pub delta: FieldElt,
}

impl RestrictionUnit {
    pub fn find(field: &RealQuadField) -> Result<Self> {
        let (eps, n) = field.fundamental_unit()?;
        if n != -1 {
            return Err(Error::NoNegativeNormUnit(field.disc()));
        }
        // eps > 1 and N(eps) = -1 force Tr(eps) > 0 already.
        let u = eps;
        debug_assert!(field.trace(u) > 0);
        let delta = field.mul(u, field.sqrt_d());
        debug_assert!(field.is_totally_positive(delta));
        debug_assert_eq!(field.norm(delta), field.disc());
        Ok(RestrictionUnit {
            alpha: u.a,
            beta: u.b,
            delta,
        })
    }

    pub fn unit_elt(&self) -> FieldElt {
        FieldElt::new(self.alpha, self.beta)
    }

    /// The index n of the line containing x: Tr(x/delta) = a*beta - b*alpha.
    pub fn line_index(&self, x: FieldElt) -> i128 {
        x.a * self.beta - x.b * self.alpha
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// All totally positive xi with line_index(xi) = n, in increasing order of
/// the w-coordinate.  For n = 0 only xi = 0 qualifies and it is appended
/// exactly when `include_zero`.
pub fn enumerate_line(
    field: &RealQuadField,
    unit: &RestrictionUnit,
    n: i128,
    include_zero: bool,
) -> Vec<FieldElt> {
    assert!(n >= 0);
    let u = unit.unit_elt();
    // particular solution of a*beta - b*alpha = n
    let (g, x, y) = ext_gcd(unit.beta, unit.alpha);
    debug_assert_eq!(g, 1);
    let xi0 = FieldElt::new(n * x, -n * y);
    debug_assert_eq!(unit.line_index(xi0), n);
    let at = |s: i128| field.add(xi0, field.mul_scalar(u, s));

    // first embedding of xi(s) grows with s, second one decays
    debug_assert!(field.embedding_positive(u, true));
    debug_assert!(!field.embedding_positive(u, false));

    let threshold = |pred: &dyn Fn(i128) -> bool| -> i128 {
        // smallest s with pred(s), pred monotone nondecreasing
        let mut hi = 0i128;
        let mut step = 1i128;
        while !pred(hi) {
            hi += step;
            step *= 2;
        }
        let mut lo = hi; // largest known false is below lo
        step = 1;
        while pred(lo - 1) {
            lo -= step;
            step *= 2;
        }
        // invariant: pred(lo-1) false, pred(hi) true
        let mut lo_false = lo - 1;
        let mut hi_true = hi;
        while lo_false + 1 < hi_true {
            let mid = lo_false + (hi_true - lo_false) / 2;
            if pred(mid) {
                hi_true = mid;
            } else {
                lo_false = mid;
            }
        }
        hi_true
    };

    let s_lo = threshold(&|s| field.embedding_positive(at(s), true));
    // for the decaying embedding, flip the axis
    let s_hi = -threshold(&|s| field.embedding_positive(at(-s), false));

    let mut out = Vec::new();
    if n == 0 && include_zero {
        out.push(FieldElt::zero());
    }
    let mut s = s_lo;
    while s <= s_hi {
        let xi = at(s);
        debug_assert!(field.is_totally_positive(xi));
        out.push(xi);
        s += 1;
    }
    out.sort_by_key(|e| e.b);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> RealQuadField {
        RealQuadField::new(5).unwrap()
    }

    #[test]
    fn field_constants() {
        let f = f5();
        assert_eq!(f.omega_kind(), OmegaKind::HalfOnePlusSqrt);
        assert_eq!(f.omega_trace(), 1);
        assert_eq!(f.omega_norm(), -1);
        let f8 = RealQuadField::new(8).unwrap();
        assert_eq!(f8.omega_kind(), OmegaKind::HalfSqrt);
        assert_eq!(f8.omega_trace(), 0);
        assert_eq!(f8.omega_norm(), -2);
        assert_eq!(RealQuadField::new(7), Err(Error::NotFundamentalDiscriminant(7)));
        assert_eq!(RealQuadField::new(12).unwrap().disc(), 12);
        assert!(RealQuadField::new(20).is_err()); // 4*5, 5 = 1 mod 4
        assert!(RealQuadField::new(9).is_err());
        assert!(RealQuadField::new(45).is_err());
    }

    #[test]
    fn arithmetic() {
        let f = f5();
        let w = FieldElt::new(0, 1);
        assert_eq!(f.mul(w, w), FieldElt::new(1, 1));
        let f13 = RealQuadField::new(13).unwrap();
        assert_eq!(f13.norm(FieldElt::new(1, 1)), -1);
        assert_eq!(f.norm(FieldElt::new(3, 4)), 5);
        // conjugation fixes trace and norm, is involutive and multiplicative
        let x = FieldElt::new(3, -2);
        let y = FieldElt::new(-1, 4);
        assert_eq!(f.conj(f.conj(x)), x);
        assert_eq!(f.norm(f.conj(x)), f.norm(x));
        assert_eq!(f.trace(f.conj(x)), f.trace(x));
        assert_eq!(f.conj(f.mul(x, y)), f.mul(f.conj(x), f.conj(y)));
        assert_eq!(f.norm(f.mul(x, y)), f.norm(x) * f.norm(y));
    }

    #[test]
    fn exact_division() {
        let f = f5();
        let x = FieldElt::new(3, 4);
        let y = FieldElt::new(2, 1);
        let p = f.mul(x, y);
        assert_eq!(f.div_exact(p, y).unwrap(), x);
        assert_eq!(f.div_exact(FieldElt::one(), FieldElt::new(2, 0)), Err(Error::InexactDivision));
    }

    #[test]
    fn total_positivity() {
        let f = f5();
        assert!(!f.is_totally_positive(FieldElt::new(0, 1))); // norm -1
        assert!(f.is_totally_positive(FieldElt::new(2, 1)));
        assert!(!f.is_totally_positive(FieldElt::zero()));
        // closed under product and sum
        let x = FieldElt::new(2, 1);
        let y = FieldElt::new(3, 1);
        assert!(f.is_totally_positive(f.mul(x, y)));
        assert!(f.is_totally_positive(f.add(x, y)));
    }

    #[test]
    fn squares_mod_four() {
        let f = f5();
        assert!(f.is_square_mod4(FieldElt::one()));
        assert!(f.is_square_mod4(FieldElt::new(-2, -1))); // (1+w)^2 = 2+3w = -2-w mod 4
        assert!(!f.is_square_mod4(FieldElt::new(-2, 0)));
        // the four residue classes of squares mod 4 for D=5
        let mut classes = std::collections::BTreeSet::new();
        for a in 0..4i128 {
            for b in 0..4i128 {
                let x = FieldElt::new(a, b);
                if f.is_square_mod4(x) {
                    classes.insert((a, b));
                }
            }
        }
        let expect: std::collections::BTreeSet<(i128, i128)> =
            [(0, 0), (1, 0), (1, 1), (2, 3)].into_iter().collect();
        assert_eq!(classes, expect);
    }

    #[test]
    fn fundamental_units() {
        let f = f5();
        let u = RestrictionUnit::find(&f).unwrap();
        assert_eq!((u.alpha, u.beta), (0, 1));
        assert!(f.is_totally_positive(u.delta));

        let f8 = RealQuadField::new(8).unwrap();
        let u8 = RestrictionUnit::find(&f8).unwrap();
        assert_eq!(u8.unit_elt(), FieldElt::new(1, 1)); // 1 + sqrt 2
        assert_eq!(u8.delta, FieldElt::new(4, 2)); // 4 + 2 sqrt 2

        let f12 = RealQuadField::new(12).unwrap();
        assert_eq!(
            RestrictionUnit::find(&f12).unwrap_err(),
            Error::NoNegativeNormUnit(12)
        );

        let f13 = RealQuadField::new(13).unwrap();
        assert_eq!(RestrictionUnit::find(&f13).unwrap().unit_elt(), FieldElt::new(1, 1));
        let f17 = RealQuadField::new(17).unwrap();
        assert_eq!(f17.fundamental_unit().unwrap(), (FieldElt::new(3, 2), -1));
        let f24 = RealQuadField::new(24).unwrap();
        let (e24, n24) = f24.fundamental_unit().unwrap();
        assert_eq!((e24, n24), (FieldElt::new(5, 2), 1)); // 5 + 2 sqrt 6
    }

    #[test]
    fn line_index_is_trace_over_delta() {
        // Tr(x * conj(delta)) = D * (a*beta - b*alpha), exact in the ring
        for d in [5i128, 8, 13, 17, 29] {
            let f = RealQuadField::new(d).unwrap();
            if let Ok(u) = RestrictionUnit::find(&f) {
                for a in -7..=7i128 {
                    for b in -7..=7i128 {
                        let x = FieldElt::new(a * 131, b * 97);
                        let t = f.mul(x, f.conj(u.delta));
                        assert_eq!(f.trace(t), d * u.line_index(x));
                    }
                }
            }
        }
    }

    #[test]
    fn line_enumeration_d5() {
        let f = f5();
        let u = RestrictionUnit::find(&f).unwrap();
        assert_eq!(enumerate_line(&f, &u, 0, true), vec![FieldElt::zero()]);
        assert_eq!(enumerate_line(&f, &u, 0, false), vec![]);
        assert_eq!(
            enumerate_line(&f, &u, 1, false),
            vec![FieldElt::new(1, 0), FieldElt::new(1, 1)]
        );
        assert_eq!(
            enumerate_line(&f, &u, 2, false),
            vec![
                FieldElt::new(2, -1),
                FieldElt::new(2, 0),
                FieldElt::new(2, 1),
                FieldElt::new(2, 2),
                FieldElt::new(2, 3)
            ]
        );
    }

    #[test]
    fn line_enumeration_complete() {
        // brute-force box scan finds no extra totally positive solutions
        for d in [5i128, 8, 13] {
            let f = RealQuadField::new(d).unwrap();
            let u = RestrictionUnit::find(&f).unwrap();
            for n in 0..=12i128 {
                let line = enumerate_line(&f, &u, n, false);
                let mut brute = Vec::new();
                for a in -250..=250i128 {
                    for b in -250..=250i128 {
                        let x = FieldElt::new(a, b);
                        if u.line_index(x) == n && f.is_totally_positive(x) {
                            brute.push(x);
                        }
                    }
                }
                brute.sort_by_key(|e| e.b);
                assert_eq!(line, brute, "D={d} n={n}");
            }
        }
    }

    #[test]
    fn sqrt_detection() {
        let f = f5();
        for (a, b) in [(2i128, 1i128), (3, -1), (1, 1), (5, 2), (0, 1), (7, 0)] {
            let x = FieldElt::new(a, b);
            let sq = f.mul(x, x);
            let r = f.sqrt_exact(sq).expect("square has a root");
            assert_eq!(f.mul(r, r), sq);
        }
        assert!(f.sqrt_exact(FieldElt::new(2, 0)).is_none());
        assert!(f.sqrt_exact(FieldElt::new(-1, 0)).is_none());
        assert!(f.sqrt_exact(FieldElt::new(5, 0)).is_some()); // (2w-1)^2 = 5
    }

    #[test]
    fn elt_parsing() {
        assert_eq!(parse_elt("3+4*w").unwrap(), FieldElt::new(3, 4));
        assert_eq!(parse_elt("2-1*w").unwrap(), FieldElt::new(2, -1));
        assert_eq!(parse_elt("-2-1*w").unwrap(), FieldElt::new(-2, -1));
        assert_eq!(parse_elt("7").unwrap(), FieldElt::new(7, 0));
        assert_eq!(parse_elt(" -3 + 2*w ").unwrap(), FieldElt::new(-3, 2));
        assert!(parse_elt("w+1").is_err());
        let x = FieldElt::new(-4, 17);
        assert_eq!(parse_elt(&x.to_string()).unwrap(), x);
    }
}
