//! Exact values of partial zeta functions and Hecke L-functions of a real
//! quadratic field at non-positive integers.
//!
//! The totally positive quadrant modulo the totally positive fundamental
//! unit is tiled by a fan of unimodular cones; each ray class contributes
//! a finite shift set per cone, and the value at s = 1-k is a finite sum
//! of Bernoulli-polynomial products with coefficients computed exactly in
//! the field.  Siegel's divisor-sum formulas for zeta(-1) and zeta(-3)
//! serve as independent oracles and are enforced on every zeta call.

use crate::cache::LValueCache;
use crate::dirichlet::{bernoulli, rat, sigma};
use crate::fchar::FQuadChar;
use crate::field::{isqrt, FieldElt, QElt, RealQuadField};
use crate::ideal::{ideals_of_norm, IdealCharacter, OIdeal};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::collections::HashSet;

/// A two-dimensional cone spanned by totally positive lattice generators.
/// Fan cones are unimodular and half-open: the first ray is included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShintaniCone {
    pub v1: FieldElt,
    pub v2: FieldElt,
}

fn det2(u: FieldElt, v: FieldElt) -> i128 {
    u.a * v.b - u.b * v.a
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

/// Unimodular fan from the ray through 1 to the ray through the totally
/// positive fundamental unit: consecutive generators have determinant one,
/// so shift sets stay small for every lattice.
pub fn unit_fan(field: &RealQuadField) -> Result<Vec<ShintaniCone>> {
    let eps = field.totally_positive_unit()?;
    let mut cur = FieldElt::one();
    let mut fan = Vec::new();
    loop {
        let d = det2(cur, eps);
        debug_assert!(d > 0);
        if d == 1 {
            fan.push(ShintaniCone { v1: cur, v2: eps });
            break;
        }
        // w with det(cur, w) = 1, pushed into the cone so det(w, eps) >= 1
        let (g, s, t) = ext_gcd(cur.a, cur.b);
        debug_assert_eq!(g, 1);
        let w0 = FieldElt::new(-t, s);
        debug_assert_eq!(det2(cur, w0), 1);
        let dv0 = det2(w0, eps);
        let target = (dv0 - 1).rem_euclid(d) + 1;
        debug_assert!(target < d, "interior ray exists since eps is primitive");
        let tau = (target - dv0) / d;
        let w = field.add(w0, field.mul_scalar(cur, tau));
        debug_assert_eq!(det2(cur, w), 1);
        debug_assert_eq!(det2(w, eps), target);
        debug_assert!(field.is_totally_positive(w));
        fan.push(ShintaniCone { v1: cur, v2: w });
        cur = w;
    }
    Ok(fan)
}

/// Integer form of d^m B_m(a/d): the homogeneous polynomial
/// den * d^m * B_m(a/d) in (a, d), with its denominator.
struct BernoulliForm {
    coeffs: Vec<BigInt>,
    den: BigInt,
    coeffs_small: Option<Vec<i128>>,
}

fn bernoulli_form(m: usize) -> BernoulliForm {
    // B_m(x) = sum_j C(m,j) B_j x^(m-j)
    let mut terms = Vec::with_capacity(m + 1);
    let mut binom = BigInt::one();
    for j in 0..=m {
        terms.push(BigRational::from(binom.clone()) * bernoulli(j));
        if j < m {
            binom = binom * BigInt::from((m - j) as i64) / BigInt::from(j as i64 + 1);
        }
    }
    let mut den = BigInt::one();
    for t in &terms {
        den = num::integer::lcm(den, t.denom().clone());
    }
    let coeffs: Vec<BigInt> = terms
        .iter()
        .map(|t| t.numer() * (&den / t.denom()))
        .collect();
    let coeffs_small = coeffs
        .iter()
        .map(|c| i128::try_from(c.clone()).ok())
        .collect::<Option<Vec<_>>>();
    BernoulliForm {
        coeffs,
        den,
        coeffs_small,
    }
}

impl BernoulliForm {
    /// den * d^m * B_m(a/d), exact.
    fn eval_big(&self, a: i128, d: i128) -> BigInt {
        let m = self.coeffs.len() - 1;
        let (a, d) = (BigInt::from(a), BigInt::from(d));
        let mut acc = BigInt::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            let mut term = c.clone();
            for _ in 0..(m - j) {
                term *= &a;
            }
            for _ in 0..j {
                term *= &d;
            }
            acc += term;
        }
        acc
    }

    fn eval_i128(&self, a: i128, d: i128) -> Option<i128> {
        let coeffs = self.coeffs_small.as_ref()?;
        let m = coeffs.len() - 1;
        let mut acc = 0i128;
        for (j, c) in coeffs.iter().enumerate() {
            let mut term = *c;
            for _ in 0..(m - j) {
                term = term.checked_mul(a)?;
            }
            for _ in 0..j {
                term = term.checked_mul(d)?;
            }
            acc = acc.checked_add(term)?;
        }
        Some(acc)
    }
}

/// Truncated power series with coefficients in the field.
fn series_mul(field: &RealQuadField, x: &[QElt], y: &[QElt], len: usize) -> Vec<QElt> {
    let mut out = vec![QElt::zero(); len];
    for (i, xi) in x.iter().enumerate().take(len) {
        for (j, yj) in y.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] = out[i + j].add(&field.qmul(xi, yj));
        }
    }
    out
}

/// (v + w*conj(v))^e as a series in w, truncated; e = -1 inverts.
fn embedding_series(field: &RealQuadField, v: FieldElt, e: i32, len: usize) -> Vec<QElt> {
    let v0 = QElt::from_elt(v);
    let v1 = QElt::from_elt(field.conj(v));
    if e >= 0 {
        let mut base = vec![QElt::zero(); len];
        base[0] = v0.clone();
        if len > 1 {
            base[1] = v1.clone();
        }
        let mut acc = vec![QElt::zero(); len];
        acc[0] = QElt::one();
        for _ in 0..e {
            acc = series_mul(field, &acc, &base, len);
        }
        acc
    } else {
        // 1/(v + w conj(v)) = (1/v) sum (-conj(v)/v)^j w^j
        let inv_v = field.qinv(&v0);
        let ratio = field.qmul(
            &QElt {
                a: -v1.a.clone(),
                b: -v1.b.clone(),
            },
            &inv_v,
        );
        let mut out = vec![QElt::zero(); len];
        let mut cur = inv_v;
        for slot in out.iter_mut() {
            *slot = cur.clone();
            cur = field.qmul(&cur, &ratio);
        }
        out
    }
}

fn factorial(n: usize) -> BigRational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i as i64);
    }
    BigRational::from(acc)
}

/// Cone coefficients: the shifted cone zeta at s = 1-k is
/// sum over m1 of Q[m1] * B_{m1}(1-x1) * B_{2k-m1}(1-x2).
fn cone_coefficients(
    field: &RealQuadField,
    t1: FieldElt,
    t2: FieldElt,
    k: usize,
) -> Vec<BigRational> {
    let len = k; // coefficient of w^(k-1) is needed
    let two_k = 2 * k;
    let pre = factorial(k - 1) * factorial(k - 1) / rat(2);
    let mut out = Vec::with_capacity(two_k + 1);
    for m1 in 0..=two_k {
        let m2 = two_k - m1;
        let s1 = embedding_series(field, t1, m1 as i32 - 1, len);
        let s2 = embedding_series(field, t2, m2 as i32 - 1, len);
        let prod = series_mul(field, &s1, &s2, len);
        let tr = field.qtrace(&prod[k - 1]);
        out.push(&pre * tr / (factorial(m1) * factorial(m2)));
    }
    out
}

/// Lattice points of rho + L inside the half-open parallelepiped of
/// (t1, t2), as scaled cone coordinates (u1, u2) with x_i = u_i/det,
/// 0 < u1 <= det, 0 <= u2 < det.
fn coset_shifts(
    t1: FieldElt,
    t2: FieldElt,
    rho: FieldElt,
    l: &OIdeal,
) -> (Vec<(i128, i128)>, i128) {
    let delta = det2(t1, t2);
    debug_assert!(delta > 0);
    let corners = [
        FieldElt::zero(),
        t1,
        t2,
        FieldElt::new(t1.a + t2.a, t1.b + t2.b),
    ];
    let bmin = corners.iter().map(|c| c.b).min().unwrap();
    let bmax = corners.iter().map(|c| c.b).max().unwrap();
    let amin = corners.iter().map(|c| c.a).min().unwrap();
    let amax = corners.iter().map(|c| c.a).max().unwrap();
    let mut shifts = Vec::new();
    let n_lo = (bmin - rho.b).div_euclid(l.c);
    let n_hi = (bmax - rho.b).div_euclid(l.c) + 1;
    for n in n_lo..=n_hi {
        let zb = rho.b + n * l.c;
        if zb < bmin || zb > bmax {
            continue;
        }
        let base = rho.a + n * l.b;
        let m_lo = (amin - base).div_euclid(l.a);
        let m_hi = (amax - base).div_euclid(l.a) + 1;
        for m in m_lo..=m_hi {
            let za = base + m * l.a;
            if za < amin || za > amax {
                continue;
            }
            let u1 = t2.b * za - t2.a * zb;
            let u2 = -t1.b * za + t1.a * zb;
            if 0 < u1 && u1 <= delta && 0 <= u2 && u2 < delta {
                shifts.push((u1, u2));
            }
        }
    }
    (shifts, delta)
}

/// Smallest positive c with c * w inside the lattice.
fn minimal_multiplier(w: FieldElt, l: &OIdeal) -> i128 {
    let c0 = l.c / gcd(w.b, l.c);
    let v = c0 * w.a - (c0 * w.b / l.c) * l.b;
    let c = c0 * (l.a / gcd(l.a, v));
    debug_assert!(l.contains(FieldElt::new(c * w.a, c * w.b)));
    debug_assert!(c > 0);
    c
}

/// A cone scaled into a lattice, with its zeta coefficients: everything
/// that does not depend on the coset.
struct PreparedCone {
    t1: FieldElt,
    t2: FieldElt,
    coeffs: Vec<BigRational>,
}

fn prepare_cone(field: &RealQuadField, cone: &ShintaniCone, l: &OIdeal, k: usize) -> PreparedCone {
    let c1 = minimal_multiplier(cone.v1, l);
    let c2 = minimal_multiplier(cone.v2, l);
    let t1 = field.mul_scalar(cone.v1, c1);
    let t2 = field.mul_scalar(cone.v2, c2);
    let coeffs = cone_coefficients(field, t1, t2, k);
    PreparedCone { t1, t2, coeffs }
}

/// Accumulate the Bernoulli products of one coset into per-degree sums
/// (numerators over the common denominator den1 * den2 * delta^(2k)).
fn accumulate_coset(
    prepared: &PreparedCone,
    rho: FieldElt,
    l: &OIdeal,
    k: usize,
    forms: &[BernoulliForm],
    sums: &mut [BigInt],
) {
    let (shifts, delta) = coset_shifts(prepared.t1, prepared.t2, rho, l);
    if shifts.is_empty() {
        return;
    }
    let two_k = 2 * k;
    for m1 in 0..=two_k {
        let m2 = two_k - m1;
        if prepared.coeffs[m1].is_zero() {
            continue;
        }
        let f1 = &forms[m1];
        let f2 = &forms[m2];
        let mut small_sum: Option<i128> = Some(0);
        for &(u1, u2) in &shifts {
            small_sum = small_sum.and_then(|acc| {
                let p1 = f1.eval_i128(delta - u1, delta)?;
                let p2 = f2.eval_i128(delta - u2, delta)?;
                acc.checked_add(p1.checked_mul(p2)?)
            });
            if small_sum.is_none() {
                break;
            }
        }
        match small_sum {
            Some(s) => sums[m1] += BigInt::from(s),
            None => {
                for &(u1, u2) in &shifts {
                    sums[m1] += f1.eval_big(delta - u1, delta) * f2.eval_big(delta - u2, delta);
                }
            }
        }
    }
}

/// Combine accumulated degree sums with the cone coefficients.
fn cone_total(
    prepared: &PreparedCone,
    k: usize,
    forms: &[BernoulliForm],
    sums: &[BigInt],
) -> BigRational {
    let delta = det2(prepared.t1, prepared.t2);
    let two_k = 2 * k;
    let mut total = BigRational::zero();
    for m1 in 0..=two_k {
        if prepared.coeffs[m1].is_zero() || sums[m1].is_zero() {
            continue;
        }
        let m2 = two_k - m1;
        let den = &forms[m1].den * &forms[m2].den * BigInt::from(delta).pow(two_k as u32);
        total += &prepared.coeffs[m1] * BigRational::new(sums[m1].clone(), den);
    }
    total
}

/// Ray classes modulo an integral ideal together with both infinite
/// places: representatives, the congruence unit data, the group law.
pub struct RayClassContext {
    pub field: RealQuadField,
    pub modulus: OIdeal,
    /// Totally positive fundamental unit.
    pub eps_plus: FieldElt,
    /// Multiplicative order of eps_plus modulo the modulus.
    pub eps_order: u32,
    /// eps_plus^eps_order when it fits machine integers.
    pub eps_mod: Option<FieldElt>,
    /// Integral representatives, identity class first.
    pub reps: Vec<OIdeal>,
    inverse: Vec<usize>,
    pub wide_h: usize,
}

fn signs(field: &RealQuadField, x: FieldElt) -> (bool, bool) {
    (
        field.embedding_positive(x, true),
        field.embedding_positive(x, false),
    )
}

/// Order of the unit-group image inside (o/m)^* x {signs}.
fn unit_image_order(field: &RealQuadField, modulus: &OIdeal, eps: FieldElt) -> u64 {
    type Node = (i128, i128, bool, bool);
    let to_node = |x: FieldElt, s1: bool, s2: bool| -> Node {
        let r = modulus.reduce(x);
        (r.a, r.b, s1, s2)
    };
    let (e1, e2) = signs(field, eps);
    let gens = [
        (FieldElt::new(-1, 0), false, false),
        (eps, e1, e2),
    ];
    let mut seen: HashSet<Node> = HashSet::new();
    seen.insert(to_node(FieldElt::one(), true, true));
    let mut frontier = vec![(modulus.reduce(FieldElt::one()), true, true)];
    while let Some((x, s1, s2)) = frontier.pop() {
        for (g, g1, g2) in gens {
            let y = modulus.reduce(field.mul(x, g));
            let (t1, t2) = (s1 == g1, s2 == g2);
            if seen.insert((y.a, y.b, t1, t2)) {
                frontier.push((y, t1, t2));
            }
        }
    }
    seen.len() as u64
}

/// |(o/m)^*| from the factorization of the modulus.
fn unit_group_order(field: &RealQuadField, modulus: &OIdeal, bound: i128) -> Result<u64> {
    if modulus.is_unit() {
        return Ok(1);
    }
    let fact = field.factor_ideal(modulus, bound)?;
    let mut phi = 1u64;
    for (p, e) in fact.factors {
        let np = p.ideal.norm() as u64;
        phi *= np.pow(e - 1) * (np - 1);
    }
    Ok(phi)
}

/// A generator of a principal ideal: a lattice point whose norm is plus
/// or minus the ideal norm, searched inside the window that one
/// fundamental-unit scaling always reaches.  None when not principal.
fn find_generator(field: &RealQuadField, ideal: &OIdeal) -> Option<FieldElt> {
    let nk = ideal.norm();
    let (eps, _) = field.fundamental_unit().ok()?;
    let tr_eps = field.trace(eps).max(3);
    let d = field.disc();
    let bb = isqrt(4 * nk * tr_eps / d) + 2;
    let aa = isqrt(nk * tr_eps) + bb * (field.omega_trace().abs() + isqrt(d) + 1) / 2 + 2;
    let n_hi = bb / ideal.c + 1;
    for n in -n_hi..=n_hi {
        let base = n * ideal.b;
        let m_lo = (-aa - base).div_euclid(ideal.a);
        let m_hi = (aa - base).div_euclid(ideal.a) + 1;
        for m in m_lo..=m_hi {
            let g = FieldElt::new(base + m * ideal.a, n * ideal.c);
            if !g.is_zero() && field.norm(g).abs() == nk {
                debug_assert!(ideal.contains(g));
                return Some(g);
            }
        }
    }
    None
}

fn totally_positive_associate(field: &RealQuadField, g: FieldElt) -> Option<FieldElt> {
    let (eps, norm_sign) = field.fundamental_unit().ok()?;
    let candidates = if norm_sign == -1 {
        vec![g, g.neg(), field.mul(g, eps), field.mul(g, eps).neg()]
    } else {
        vec![g, g.neg()]
    };
    candidates
        .into_iter()
        .find(|&c| field.is_totally_positive(c))
}

/// The lattice testing g = n mod* modulus for the possibly non-coprime
/// integer n: at each modulus prime the required valuation grows by the
/// valuation of n there (the quotient g/n must be a unit congruent to 1).
fn congruence_lattice(field: &RealQuadField, modulus: &OIdeal, n: i128) -> OIdeal {
    if modulus.is_unit() {
        return OIdeal::unit();
    }
    let fact = field
        .factor_ideal(modulus, crate::DEFAULT_FACTOR_BOUND)
        .expect("modulus factors within the default bound");
    let mut acc = *modulus;
    for (prime, _) in fact.factors {
        let v = crate::fchar::elt_valuation(field, FieldElt::new(n, 0), &prime.ideal);
        if v > 0 {
            acc = field.ideal_mul(&acc, &field.ideal_pow(&prime.ideal, v));
        }
    }
    acc
}

/// Ray equivalence of integral ideals coprime to the modulus: I ~ J iff
/// I * conj(J) has a totally positive generator g with g/N(J) = 1 under
/// the multiplicative congruence, up to totally positive unit powers.
fn ray_equivalent(
    field: &RealQuadField,
    modulus: &OIdeal,
    eps_plus: FieldElt,
    i: &OIdeal,
    j: &OIdeal,
) -> bool {
    let k = field.ideal_mul(i, &field.ideal_conj(j));
    let Some(g0) = find_generator(field, &k) else {
        return false;
    };
    let Some(g) = totally_positive_associate(field, g0) else {
        return false;
    };
    let lattice = congruence_lattice(field, modulus, j.norm());
    let one = lattice.reduce(FieldElt::one());
    let mut orbit = 1u32;
    let mut pw = lattice.reduce(eps_plus);
    while pw != one {
        pw = lattice.reduce(field.mul(pw, eps_plus));
        orbit += 1;
        debug_assert!((orbit as i128) <= 16 * lattice.norm());
    }
    let target = lattice.reduce(FieldElt::new(j.norm(), 0));
    let mut cur = lattice.reduce(g);
    for _ in 0..orbit {
        if cur == target {
            return true;
        }
        cur = lattice.reduce(field.mul(cur, eps_plus));
    }
    false
}

/// Wide class number by Minkowski-bounded enumeration.
fn wide_class_number(field: &RealQuadField) -> usize {
    let bound = isqrt(field.disc()) / 2 + 1;
    let mut reps: Vec<OIdeal> = vec![OIdeal::unit()];
    for m in 2..=bound {
        for cand in ideals_of_norm(field, m) {
            let known = reps.iter().any(|r| {
                let k = field.ideal_mul(&cand, &field.ideal_conj(r));
                find_generator(field, &k).is_some()
            });
            if !known {
                reps.push(cand);
            }
        }
    }
    reps.len()
}

/// Build the ray class context: representatives found by enumerating
/// ideals of increasing norm and classifying them, the expected class
/// count pinned by the unit-image index formula.
pub fn ray_classes(
    field: &RealQuadField,
    modulus: &OIdeal,
    bound: i128,
) -> Result<RayClassContext> {
    let eps_plus = field.totally_positive_unit()?;
    let one = modulus.reduce(FieldElt::one());
    let mut eps_order = 1u32;
    let mut cur = modulus.reduce(eps_plus);
    while cur != one {
        cur = modulus.reduce(field.mul(cur, eps_plus));
        eps_order += 1;
        if eps_order as i128 > 8 * modulus.norm() {
            return Err(Error::EnumerationBoundExceeded(modulus.norm()));
        }
    }
    let eps_mod = {
        let mut acc: Option<FieldElt> = Some(FieldElt::one());
        for _ in 0..eps_order {
            acc = acc.and_then(|x| {
                let prod_a = x.a.checked_mul(eps_plus.a)?;
                let _ = prod_a.checked_mul(4)?;
                let y = field.mul(x, eps_plus);
                (y.a.abs() < i128::MAX / 4 && y.b.abs() < i128::MAX / 4).then_some(y)
            });
        }
        acc
    };
    let wide_h = wide_class_number(field);
    let phi = unit_group_order(field, modulus, bound)?;
    let (eps_fund, _) = field.fundamental_unit()?;
    let s = unit_image_order(field, modulus, eps_fund);
    debug_assert_eq!((wide_h as u64 * phi * 4) % s, 0);
    let expected = (wide_h as u64 * phi * 4) / s;

    let mut reps: Vec<OIdeal> = Vec::new();
    let norm_cap = 1000 + 30 * modulus.norm();
    let mut m = 1i128;
    while (reps.len() as u64) < expected {
        if m > norm_cap {
            return Err(Error::EnumerationBoundExceeded(norm_cap));
        }
        for cand in ideals_of_norm(field, m) {
            if (reps.len() as u64) >= expected {
                break;
            }
            if !field.ideals_coprime(&cand, modulus) {
                continue;
            }
            let known = reps
                .iter()
                .any(|r| ray_equivalent(field, modulus, eps_plus, &cand, r));
            if !known {
                reps.push(cand);
            }
        }
        m += 1;
    }
    debug_assert_eq!(reps[0], OIdeal::unit());

    let mut inverse = Vec::with_capacity(reps.len());
    for i in 0..reps.len() {
        let mut found = None;
        for (j, rj) in reps.iter().enumerate() {
            let prod = field.ideal_mul(&reps[i], rj);
            if ray_equivalent(field, modulus, eps_plus, &prod, &OIdeal::unit()) {
                found = Some(j);
                break;
            }
        }
        inverse.push(found.expect("every class has an inverse"));
    }
    Ok(RayClassContext {
        field: *field,
        modulus: *modulus,
        eps_plus,
        eps_order,
        eps_mod,
        reps,
        inverse,
        wide_h,
    })
}

impl RayClassContext {
    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    /// Index of the class containing a coprime integral ideal.
    pub fn class_of(&self, ideal: &OIdeal) -> Result<usize> {
        for (idx, r) in self.reps.iter().enumerate() {
            if ray_equivalent(&self.field, &self.modulus, self.eps_plus, ideal, r) {
                return Ok(idx);
            }
        }
        Err(Error::EnumerationBoundExceeded(ideal.norm()))
    }

    pub fn inverse_of(&self, class_index: usize) -> usize {
        self.inverse[class_index]
    }

    /// Group law on class indices.
    pub fn mul_class(&self, i: usize, j: usize) -> Result<usize> {
        let prod = self.field.ideal_mul(&self.reps[i], &self.reps[j]);
        self.class_of(&prod)
    }
}

/// Partial zeta value zeta(s, C) at s = 1-k over a ray class, through the
/// cone decomposition; memoized in the supplied cache.
pub fn partial_zeta_neg(
    ctx: &RayClassContext,
    class_index: usize,
    s: i64,
    cache: &LValueCache,
) -> Result<BigRational> {
    assert!(s <= 0, "special values live at non-positive integers");
    let k = (1 - s) as usize;
    let key = LValueCache::key(
        ctx.field.disc(),
        &ctx.modulus.to_string_bracket(),
        class_index,
        s,
    );
    if let Some(v) = cache.get(&key) {
        return Ok(v);
    }
    let field = &ctx.field;
    let b_rep = ctx.reps[ctx.inverse[class_index]];
    let l = field.ideal_mul(&b_rep, &ctx.modulus);
    // rho in the representative ideal with rho = 1 mod modulus
    let rho = if ctx.modulus.is_unit() {
        FieldElt::zero()
    } else {
        let m_elt = field.coprime_split(&ctx.modulus, &b_rep).ok_or_else(|| {
            Error::InvalidParameter("representative not coprime to modulus".into())
        })?;
        field.sub(FieldElt::one(), m_elt)
    };
    debug_assert!(ctx.modulus.is_unit() || b_rep.contains(rho));
    let fan = unit_fan(field)?;
    let forms: Vec<BernoulliForm> = (0..=2 * k).map(bernoulli_form).collect();
    debug_assert_eq!(field.norm(ctx.eps_plus), 1);
    let eps_inv = field.conj(ctx.eps_plus);
    let mut total = BigRational::zero();
    let mut rho_j = l.reduce(rho);
    for _ in 0..ctx.eps_order {
        for cone in &fan {
            total += cone_coset_value(field, cone, rho_j, &l, k, &forms);
        }
        rho_j = l.reduce(field.mul(rho_j, eps_inv));
    }
    // N(a) = N(xi)/N(b) rescales by N(b)^s
    let nb = BigRational::from(BigInt::from(b_rep.norm()).pow((k - 1) as u32));
    let value = total / nb;
    cache.put(key, value.clone());
    Ok(value)
}

/// Siegel's divisor-sum formula for zeta_F(-1).
pub fn siegel_zeta_m1(field: &RealQuadField) -> BigRational {
    let d = field.disc();
    let mut acc = BigRational::zero();
    let mut b = if d % 2 == 0 { 0 } else { 1 };
    while b * b < d {
        let t = sigma(1, (d - b * b) / 4);
        acc += if b == 0 { t } else { t * rat(2) };
        b += 2;
    }
    acc / rat(60)
}

/// Siegel's divisor-sum formula for zeta_F(-3).
pub fn siegel_zeta_m3(field: &RealQuadField) -> BigRational {
    let d = field.disc();
    let mut acc = BigRational::zero();
    let mut b = if d % 2 == 0 { 0 } else { 1 };
    while b * b < d {
        let t = sigma(3, (d - b * b) / 4);
        acc += if b == 0 { t } else { t * rat(2) };
        b += 2;
    }
    acc / rat(120)
}

/// Dedekind zeta value at a non-positive integer, with the Siegel oracle
/// enforced at s = -1 and s = -3.
pub fn zeta_f_neg(
    field: &RealQuadField,
    s: i64,
    cache: &LValueCache,
    bound: i128,
) -> Result<BigRational> {
    let ctx = ray_classes(field, &OIdeal::unit(), bound)?;
    let mut total = BigRational::zero();
    for c in 0..ctx.class_count() {
        total += partial_zeta_neg(&ctx, c, s, cache)?;
    }
    if s == -1 || s == -3 {
        let oracle = if s == -1 {
            siegel_zeta_m1(field)
        } else {
            siegel_zeta_m3(field)
        };
        if total != oracle {
            return Err(Error::OracleMismatch {
                what: format!("zeta_F({s}) for D={}", field.disc()),
                lhs: crate::dirichlet::rational_str(&total),
                rhs: crate::dirichlet::rational_str(&oracle),
            });
        }
    }
    Ok(total)
}

/// A Hecke L-value with its forced-vanishing flag: when the sign pattern
/// of the twisting element disagrees with the weight parity the exact
/// value is zero and the flag records why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LValue {
    pub value: BigRational,
    pub parity_zero: bool,
}

/// L_F(1-k, chi_x * chi') with modulus the relative discriminant together
/// with both infinite places.
pub fn hecke_l_neg(
    field: &RealQuadField,
    chi: &FQuadChar,
    chi_prime: &dyn IdealCharacter,
    k: u32,
    cache: &LValueCache,
    bound: i128,
) -> Result<LValue> {
    assert!(k >= 1);
    let modulus = if chi.square_class_flag {
        OIdeal::unit()
    } else {
        chi.disc
    };
    let ctx = ray_classes(field, &modulus, bound)?;
    let mut total = BigRational::zero();
    for c in 0..ctx.class_count() {
        let rep = ctx.reps[c];
        let chi_val = if chi.square_class_flag {
            1
        } else {
            chi.eval(field, &rep, bound)?
        };
        if chi_val == 0 {
            continue;
        }
        let weight = rat(chi_val) * chi_prime.value(field, &rep);
        if weight.is_zero() {
            continue;
        }
        total += weight * partial_zeta_neg(&ctx, c, 1 - k as i64, cache)?;
    }
    let odd_weight = k % 2 == 1;
    let s1 = field.embedding_positive(chi.x, true);
    let s2 = field.embedding_positive(chi.x, false);
    let parity_zero = !chi.square_class_flag && ((s1 == odd_weight) || (s2 == odd_weight));
    Ok(LValue {
        value: total,
        parity_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::frac;
    use crate::fchar::relative_discriminant;
    use crate::ideal::TrivialCharacter;

    const B: i128 = 1 << 24;

    fn f(d: i128) -> RealQuadField {
        RealQuadField::new(d).unwrap()
    }

    #[test]
    fn fans_are_unimodular_chains() {
        for d in [5i128, 8, 13, 17, 24, 29, 40, 44] {
            let field = f(d);
            let fan = unit_fan(&field).unwrap();
            let eps = field.totally_positive_unit().unwrap();
            assert_eq!(fan[0].v1, FieldElt::one());
            assert_eq!(fan.last().unwrap().v2, eps);
            for w in fan.windows(2) {
                assert_eq!(w[0].v2, w[1].v1);
            }
            for c in &fan {
                assert_eq!(det2(c.v1, c.v2), 1);
                assert!(field.is_totally_positive(c.v2));
            }
        }
    }

    #[test]
    fn zeta_values_match_siegel() {
        let cache = LValueCache::in_memory();
        let expected = [(5, frac(1, 30)), (8, frac(1, 12)), (13, frac(1, 6))];
        for (d, v) in expected {
            assert_eq!(zeta_f_neg(&f(d), -1, &cache, B).unwrap(), v, "D={d}");
        }
        assert_eq!(zeta_f_neg(&f(5), -3, &cache, B).unwrap(), frac(1, 60));
        for d in [17i128, 24, 29] {
            let z = zeta_f_neg(&f(d), -1, &cache, B).unwrap();
            assert_eq!(z, siegel_zeta_m1(&f(d)), "D={d}");
            let z3 = zeta_f_neg(&f(d), -3, &cache, B).unwrap();
            assert_eq!(z3, siegel_zeta_m3(&f(d)), "D={d}");
        }
    }

    #[test]
    fn zeta_vanishes_at_zero() {
        let cache = LValueCache::in_memory();
        let ctx = ray_classes(&f(5), &OIdeal::unit(), B).unwrap();
        let mut total = BigRational::zero();
        for c in 0..ctx.class_count() {
            total += partial_zeta_neg(&ctx, c, 0, &cache).unwrap();
        }
        assert!(total.is_zero());
    }

    #[test]
    fn narrow_class_structure() {
        let ctx5 = ray_classes(&f(5), &OIdeal::unit(), B).unwrap();
        assert_eq!(ctx5.class_count(), 1);
        assert_eq!(ctx5.wide_h, 1);
        // no norm -1 unit for D=24: narrow class number two
        let ctx24 = ray_classes(&f(24), &OIdeal::unit(), B).unwrap();
        assert_eq!(ctx24.class_count(), 2);
        assert_eq!(ctx24.wide_h, 1);
        assert_eq!(ctx24.class_of(&OIdeal::unit()).unwrap(), 0);
        assert_eq!(ctx24.mul_class(1, 1).unwrap(), 0);
        assert_eq!(ctx24.inverse_of(1), 1);
    }

    #[test]
    fn representative_invariance() {
        // the partial zeta value only depends on the class, not on the
        // chosen representative
        let field = f(5);
        let four = field.ideal_from_element(FieldElt::new(4, 0)).unwrap();
        let ctx = ray_classes(&field, &four, B).unwrap();
        let cache1 = LValueCache::in_memory();
        let cache2 = LValueCache::in_memory();
        let before: Vec<BigRational> = (0..ctx.class_count())
            .map(|c| partial_zeta_neg(&ctx, c, -1, &cache1).unwrap())
            .collect();
        // 9 + 4w is totally positive and = 1 mod 4
        let g = FieldElt::new(9, 4);
        assert!(field.is_totally_positive(g));
        assert!(four.contains(field.sub(g, FieldElt::one())));
        let scale = field.ideal_from_element(g).unwrap();
        let mut ctx2 = ctx;
        ctx2.reps = ctx2
            .reps
            .iter()
            .map(|r| field.ideal_mul(r, &scale))
            .collect();
        let after: Vec<BigRational> = (0..ctx2.class_count())
            .map(|c| partial_zeta_neg(&ctx2, c, -1, &cache2).unwrap())
            .collect();
        assert_eq!(before, after);
    }

    #[test]
    fn hecke_value_biquadratic_oracle() {
        // x = -4 over D = 5 factors through the rationals:
        // L(0, chi_{-4}) L(0, chi_{-20}) = (1/2) * 2 = 1
        let field = f(5);
        let cache = LValueCache::in_memory();
        let chi = relative_discriminant(&field, FieldElt::new(-4, 0)).unwrap();
        let l = hecke_l_neg(&field, &chi, &TrivialCharacter, 1, &cache, B).unwrap();
        assert_eq!(l.value, rat(1));
        assert!(!l.parity_zero);
        // x = -3: L(0, chi_{-3}) L(0, chi_{-15}) = (1/3) * 2 = 2/3
        let chi3 = relative_discriminant(&field, FieldElt::new(-3, 0)).unwrap();
        let l3 = hecke_l_neg(&field, &chi3, &TrivialCharacter, 1, &cache, B).unwrap();
        assert_eq!(l3.value, frac(2, 3));
    }

    #[test]
    fn hecke_value_prime_conductor() {
        let field = f(5);
        let cache = LValueCache::in_memory();
        let chi = relative_discriminant(&field, FieldElt::new(-2, -1)).unwrap();
        let l = hecke_l_neg(&field, &chi, &TrivialCharacter, 1, &cache, B).unwrap();
        assert_eq!(l.value, frac(2, 5));
        // -3+w = (-2-w)(w-1)^2 lies in the same square class
        let chi2 = relative_discriminant(&field, FieldElt::new(-3, 1)).unwrap();
        let l2 = hecke_l_neg(&field, &chi2, &TrivialCharacter, 1, &cache, B).unwrap();
        assert_eq!(l2.value, frac(2, 5));
    }

    #[test]
    fn parity_mismatch_vanishes() {
        // a totally positive twist at odd weight vanishes identically
        let field = f(5);
        let cache = LValueCache::in_memory();
        let chi = relative_discriminant(&field, FieldElt::new(5, 1)).unwrap();
        let l = hecke_l_neg(&field, &chi, &TrivialCharacter, 1, &cache, B).unwrap();
        assert!(l.parity_zero);
        assert!(l.value.is_zero());
    }

    #[test]
    fn weight_two_biquadratic_oracles() {
        // rational twists factor into pairs of Dirichlet L-values
        let field = f(5);
        let cache = LValueCache::in_memory();
        let cases = [(12i128, 12i128, 60i128), (8, 8, 40)];
        for (x, d1, d2) in cases {
            let chi = relative_discriminant(&field, FieldElt::new(x, 0)).unwrap();
            let l = hecke_l_neg(&field, &chi, &TrivialCharacter, 2, &cache, B).unwrap();
            let expected = crate::dirichlet::l_neg(&crate::dirichlet::KroneckerChar { d: d1 }, -1)
                * crate::dirichlet::l_neg(&crate::dirichlet::KroneckerChar { d: d2 }, -1);
            assert_eq!(l.value, expected, "x = {x}");
        }
    }

    #[test]
    fn weight_two_prime_conductor() {
        // pinned by the modular decomposition at weight 5 together with
        // the biquadratic oracles above
        let field = f(5);
        let cache = LValueCache::in_memory();
        let chi = relative_discriminant(&field, FieldElt::new(5, 1)).unwrap();
        let l = hecke_l_neg(&field, &chi, &TrivialCharacter, 2, &cache, B).unwrap();
        assert_eq!(l.value, rat(4));
        assert!(!l.parity_zero);
    }

    #[test]
    fn shift_sets_tile_the_cone() {
        // coset points of bounded trace, counted through the cone shift
        // structure, match a direct scan of the fundamental domain
        let field = f(5);
        let l = field.ideal_from_element(FieldElt::new(3, 0)).unwrap();
        let rho = FieldElt::new(1, 0);
        let fan = unit_fan(&field).unwrap();
        let trace_cap = 120i128;
        let mut via_cones = 0u64;
        for cone in &fan {
            let c1 = minimal_multiplier(cone.v1, &l);
            let c2 = minimal_multiplier(cone.v2, &l);
            let t1 = field.mul_scalar(cone.v1, c1);
            let t2 = field.mul_scalar(cone.v2, c2);
            let (shifts, delta) = coset_shifts(t1, t2, rho, &l);
            assert_eq!(shifts.len() as i128, delta / l.norm());
            let (tr1, tr2) = (field.trace(t1), field.trace(t2));
            for &(u1, u2) in &shifts {
                let tr_xi_num = u1 * tr1 + u2 * tr2; // delta * Tr(xi)
                let mut n1 = 0i128;
                loop {
                    let base = tr_xi_num + delta * n1 * tr1;
                    if base > delta * trace_cap {
                        break;
                    }
                    via_cones += ((delta * trace_cap - base) / (delta * tr2) + 1) as u64;
                    n1 += 1;
                }
            }
        }
        let eps = field.totally_positive_unit().unwrap();
        let mut brute = 0u64;
        for a in -200..=200i128 {
            for b in -200..=200i128 {
                let x = FieldElt::new(a, b);
                if !field.is_totally_positive(x) || field.trace(x) > trace_cap {
                    continue;
                }
                if !l.contains(field.sub(x, rho)) {
                    continue;
                }
                // x = s * 1 + t * eps with s > 0, t >= 0
                let den = det2(FieldElt::one(), eps);
                let s_num = det2(x, eps);
                let t_num = det2(FieldElt::one(), x);
                if s_num * den > 0 && t_num * den >= 0 {
                    brute += 1;
                }
            }
        }
        assert_eq!(via_cones, brute);
    }
}
