//! Coefficient tables of the half-integral weight Eisenstein series over
//! a real quadratic field: each supported totally positive index carries
//! an exact rational built from a Hecke L-value and a Moebius-twisted
//! divisor sum over the conductor.

use crate::cache::LValueCache;
use crate::fchar::{relative_discriminant, QuadIdealCharacter};
use crate::field::{enumerate_line, FieldElt, RealQuadField, RestrictionUnit};
use crate::ideal::{sigma_ideal, IdealCharacter, OIdeal};
use crate::shintani::{hecke_l_neg, partial_zeta_neg, ray_classes, zeta_f_neg};
use crate::Result;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;
use std::collections::BTreeMap;

/// The square of a real-valued ideal character.
struct SquaredCharacter<'a>(&'a dyn IdealCharacter);

impl IdealCharacter for SquaredCharacter<'_> {
    fn value(&self, field: &RealQuadField, ideal: &OIdeal) -> BigRational {
        let v = self.0.value(field, ideal);
        &v * &v
    }
    fn is_trivial(&self) -> bool {
        self.0.is_trivial()
    }
}

/// L_F(1-2k, chi'^2): the constant term of the table.  For the trivial
/// character this is the Dedekind zeta value (Siegel-checked).
pub fn table_constant(
    field: &RealQuadField,
    kappa: u32,
    chi_prime: &dyn IdealCharacter,
    cache: &LValueCache,
    bound: i128,
) -> Result<BigRational> {
    let s = 1 - 2 * kappa as i64;
    if chi_prime.is_trivial() {
        return zeta_f_neg(field, s, cache, bound);
    }
    let ctx = ray_classes(field, &OIdeal::unit(), bound)?;
    let mut total = BigRational::zero();
    for c in 0..ctx.class_count() {
        let v = chi_prime.value(field, &ctx.reps[c]);
        total += &v * &v * partial_zeta_neg(&ctx, c, s, cache)?;
    }
    Ok(total)
}

/// Coefficient at a supported index: zero off the support, otherwise the
/// L-value against the Moebius-twisted conductor divisor sum.  Perfect
/// square classes run through the same path: their character is trivial,
/// their conductor is the square-root ideal, and the divisor sum stays in
/// full, exactly as in the degree-one case.
pub fn h_coeff(
    field: &RealQuadField,
    kappa: u32,
    chi_prime: &dyn IdealCharacter,
    xi: FieldElt,
    cache: &LValueCache,
    bound: i128,
) -> Result<BigRational> {
    assert!(kappa >= 1);
    if !field.is_totally_positive(xi) {
        return Ok(BigRational::zero());
    }
    let x = if kappa % 2 == 0 { xi } else { xi.neg() };
    if !field.is_square_mod4(x) {
        return Ok(BigRational::zero());
    }
    let chi_x = relative_discriminant(field, x)?;
    let l = hecke_l_neg(field, &chi_x, chi_prime, kappa, cache, bound)?;
    if l.value.is_zero() {
        return Ok(BigRational::zero());
    }
    let quad = QuadIdealCharacter {
        chi: &chi_x,
        bound,
    };
    let squared = SquaredCharacter(chi_prime);
    let mut sum = BigRational::zero();
    for a in field.ideal_divisors(&chi_x.cond, bound)? {
        let mu = field.moebius_ideal(&a, bound)?;
        if mu == 0 {
            continue;
        }
        let cv = quad.value(field, &a);
        if cv.is_zero() {
            continue;
        }
        let pv = chi_prime.value(field, &a);
        if pv.is_zero() {
            continue;
        }
        let cofactor = field
            .ideal_div_exact(&chi_x.cond, &a)
            .expect("divisor divides the conductor");
        let np = BigRational::from(BigInt::from(a.norm()).pow(kappa - 1));
        sum += crate::dirichlet::rat(mu)
            * cv
            * pv
            * np
            * sigma_ideal(field, &cofactor, 2 * kappa - 1, &squared, bound)?;
    }
    let disc_weight = chi_prime.value(field, &chi_x.disc);
    Ok(disc_weight * l.value * sum)
}

/// Coefficient table of the weight-(kappa + 1/2) Eisenstein series over
/// the trace-bounded support region.
#[derive(Debug, Clone)]
pub struct HilbertCoeffTable {
    pub disc: i128,
    pub kappa: u32,
    pub prec: i128,
    pub unit: RestrictionUnit,
    pub constant: BigRational,
    pub coeffs: BTreeMap<FieldElt, BigRational>,
}

impl HilbertCoeffTable {
    /// Sum of coefficients along the line of the given index.
    pub fn line_sum(&self, field: &RealQuadField, n: i128) -> BigRational {
        let _ = field;
        let mut acc = BigRational::zero();
        for (xi, v) in &self.coeffs {
            if self.unit.line_index(*xi) == n {
                acc += v;
            }
        }
        acc
    }
}

/// Fill the table: enumerate each line up to the precision, filter by the
/// square support condition, evaluate each coefficient.
pub fn coeff_table(
    field: &RealQuadField,
    kappa: u32,
    chi_prime: &dyn IdealCharacter,
    unit: &RestrictionUnit,
    prec: i128,
    cache: &LValueCache,
    bound: i128,
) -> Result<HilbertCoeffTable> {
    assert!(prec >= 0);
    assert!(kappa >= 1);
    let constant = table_constant(field, kappa, chi_prime, cache, bound)?;
    let mut coeffs = BTreeMap::new();
    for n in 1..=prec {
        for xi in enumerate_line(field, unit, n, false) {
            let x = if kappa % 2 == 0 { xi } else { xi.neg() };
            if !field.is_square_mod4(x) {
                continue;
            }
            let v = h_coeff(field, kappa, chi_prime, xi, cache, bound)?;
            coeffs.insert(xi, v);
        }
    }
    Ok(HilbertCoeffTable {
        disc: field.disc(),
        kappa,
        prec,
        unit: *unit,
        constant,
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::frac;
    use crate::ideal::TrivialCharacter;

    const B: i128 = 1 << 24;

    fn f5() -> RealQuadField {
        RealQuadField::new(5).unwrap()
    }

    #[test]
    fn coefficients_on_the_support() {
        let field = f5();
        let cache = LValueCache::in_memory();
        // weight 3/2: the index 2+w carries L_F(0, chi_{-2-w}) = 2/5
        let v = h_coeff(&field, 1, &TrivialCharacter, FieldElt::new(2, 1), &cache, B).unwrap();
        assert_eq!(v, frac(2, 5));
        // weight 5/2 at the square classes 1 and 1+w = w^2: zeta_F(-1)
        let v1 = h_coeff(&field, 2, &TrivialCharacter, FieldElt::new(1, 0), &cache, B).unwrap();
        assert_eq!(v1, frac(1, 30));
        let v2 = h_coeff(&field, 2, &TrivialCharacter, FieldElt::new(1, 1), &cache, B).unwrap();
        assert_eq!(v2, frac(1, 30));
    }

    #[test]
    fn off_support_vanishes() {
        let field = f5();
        let cache = LValueCache::in_memory();
        // 2 is totally positive but -2 is not a square mod 4
        let v = h_coeff(&field, 1, &TrivialCharacter, FieldElt::new(2, 0), &cache, B).unwrap();
        assert!(v.is_zero());
        // w has norm -1: not totally positive
        let v2 = h_coeff(&field, 1, &TrivialCharacter, FieldElt::new(0, 1), &cache, B).unwrap();
        assert!(v2.is_zero());
    }

    #[test]
    fn three_halves_table_lines() {
        let field = f5();
        let unit = RestrictionUnit::find(&field).unwrap();
        let cache = LValueCache::in_memory();
        let table = coeff_table(&field, 1, &TrivialCharacter, &unit, 6, &cache, B).unwrap();
        assert_eq!(table.constant, frac(1, 30));
        // line 1 has no supported indices
        assert!(table.line_sum(&field, 1).is_zero());
        // line 2: the single index 2+w
        assert_eq!(table.line_sum(&field, 2), frac(2, 5));
        // line 4: two copies of L_F(0, chi_{-4}) = 1
        assert_eq!(table.line_sum(&field, 4), crate::dirichlet::rat(2));
        // line 3: 2 L_F(0,chi_{-3}) + 2 L_F(0,chi_{-3+w}) = 4/3 + 4/5
        assert_eq!(table.line_sum(&field, 3), frac(32, 15));
        // line 6: 2 L_F(0,chi_{-3}) + 2 L_F(0,chi_{-6-w}) = 4/3 + 4
        assert_eq!(table.line_sum(&field, 6), frac(16, 3));
    }

    #[test]
    fn five_halves_table_lines() {
        let field = f5();
        let unit = RestrictionUnit::find(&field).unwrap();
        let cache = LValueCache::in_memory();
        let table = coeff_table(&field, 2, &TrivialCharacter, &unit, 5, &cache, B).unwrap();
        assert_eq!(table.constant, frac(1, 60));
        // line 1: the two unit square classes carry zeta_F(-1) each
        assert_eq!(table.line_sum(&field, 1), frac(1, 15));
        // line 5: two unit squares, two conductor-(sqrt 5) squares with
        // their full divisor sums, and the two conjugate prime twists
        let sq5 = h_coeff(&field, 2, &TrivialCharacter, FieldElt::new(5, 0), &cache, B).unwrap();
        assert_eq!(sq5, frac(121, 30));
        assert_eq!(table.line_sum(&field, 5), frac(242, 15));
    }

    #[test]
    fn unit_square_twist_invariance() {
        let field = f5();
        let cache = LValueCache::in_memory();
        // w^2 = 1+w is a totally positive unit square
        let u2 = FieldElt::new(1, 1);
        for (a, b) in [(2i128, 1i128), (3, 0), (4, 0), (5, 0), (3, 3)] {
            let xi = FieldElt::new(a, b);
            let twisted = field.mul(field.mul(xi, u2), u2);
            for kappa in [1u32, 2] {
                let v1 = h_coeff(&field, kappa, &TrivialCharacter, xi, &cache, B).unwrap();
                let v2 = h_coeff(&field, kappa, &TrivialCharacter, twisted, &cache, B).unwrap();
                assert_eq!(v1, v2, "kappa={kappa} xi={xi}");
            }
        }
    }
}
