//! Truncated q-expansions over exact rationals, the classical series
//! (theta and its powers, the two odd-weight Eisenstein series on
//! Gamma_0(4) with the quartic character, the weight-5 cusp form built
//! from Gaussian-integer fourth powers), and the series-level operations
//! used by the verifiers.

use crate::cache::LValueCache;
use crate::cohen::HilbertCoeffTable;
use crate::dirichlet::{l_neg, rat, sigma_chi, sigma_chi_prime, KroneckerChar};
use crate::field::{FieldElt, RealQuadField, RestrictionUnit};
use crate::ideal::TrivialCharacter;
use crate::report::RelationReport;
use crate::shintani::zeta_f_neg;
use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

/// Coefficients 0..=prec of a q-expansion; equality is coefficientwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl QSeries {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty());
        QSeries { coeffs }
    }

    pub fn zero(prec: usize) -> Self {
        QSeries {
            coeffs: vec![BigRational::zero(); prec + 1],
        }
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, v: BigRational) {
        self.coeffs[n] = v;
    }

    pub fn truncate(&self, prec: usize) -> QSeries {
        assert!(prec <= self.prec());
        QSeries {
            coeffs: self.coeffs[..=prec].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Addition truncates to the shorter precision.
    pub fn add(&self, other: &QSeries) -> QSeries {
        let prec = self.prec().min(other.prec());
        QSeries {
            coeffs: (0..=prec)
                .map(|i| &self.coeffs[i] + &other.coeffs[i])
                .collect(),
        }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        let prec = self.prec().min(other.prec());
        QSeries {
            coeffs: (0..=prec)
                .map(|i| &self.coeffs[i] - &other.coeffs[i])
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Cauchy product truncated to the shorter precision.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let prec = self.prec().min(other.prec());
        let mut coeffs = vec![BigRational::zero(); prec + 1];
        for i in 0..=prec.min(self.prec()) {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(prec - i).min(other.prec()) {
                if !other.coeffs[j].is_zero() {
                    coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
                }
            }
        }
        QSeries { coeffs }
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut acc = QSeries {
            coeffs: {
                let mut v = vec![BigRational::zero(); self.prec() + 1];
                v[0] = BigRational::from(BigInt::from(1));
                v
            },
        };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// theta = 1 + 2q + 2q^4 + 2q^9 + ...; coefficient n counts r_1(n).
pub fn theta_q(prec: usize) -> QSeries {
    let mut s = QSeries::zero(prec);
    s.set_coeff(0, rat(1));
    let mut k = 1usize;
    while k * k <= prec {
        s.set_coeff(k * k, rat(2));
        k += 1;
    }
    s
}

/// theta^2; coefficient n is r_2(n), the two-squares representation count.
pub fn theta_sq(prec: usize) -> QSeries {
    let t = theta_q(prec);
    t.mul(&t)
}

/// E_{2k+1} on Gamma_0(4) with the quartic character: constant term
/// L(-2k, chi_{-4})/2, then the chi-twisted divisor sums.
pub fn eisenstein_e(kappa: u32, prec: usize) -> QSeries {
    assert!(kappa >= 1);
    let chi = KroneckerChar { d: -4 };
    let mut s = QSeries::zero(prec);
    s.set_coeff(0, l_neg(&chi, -2 * kappa as i64) / rat(2));
    for n in 1..=prec {
        s.set_coeff(n, sigma_chi(n as i128, 2 * kappa, &chi));
    }
    s
}

/// The companion Eisenstein series with the character on the codivisor;
/// its constant term vanishes.
pub fn eisenstein_f(kappa: u32, prec: usize) -> QSeries {
    assert!(kappa >= 1);
    let chi = KroneckerChar { d: -4 };
    let mut s = QSeries::zero(prec);
    for n in 1..=prec {
        s.set_coeff(n, sigma_chi_prime(n as i128, 2 * kappa, &chi));
    }
    s
}

/// Weight-5 cusp form on Gamma_0(4): coefficient (1/4) sum (a+bi)^4 over
/// a^2 + b^2 = n.  The summands' real parts are a^4 - 6a^2b^2 + b^4.
pub fn s5_series(prec: usize) -> QSeries {
    let mut s = QSeries::zero(prec);
    let mut sums = vec![0i128; prec + 1];
    let bound = crate::field::isqrt(prec as i128);
    for a in -bound..=bound {
        for b in -bound..=bound {
            let n = a * a + b * b;
            if n as usize <= prec {
                sums[n as usize] += a.pow(4) - 6 * a * a * b * b + b.pow(4);
            }
        }
    }
    for (n, v) in sums.into_iter().enumerate() {
        debug_assert_eq!(v % 4, 0);
        s.set_coeff(n, rat(v / 4));
    }
    s
}

/// Result of expressing a series against the two Eisenstein series with a
/// cusp residual: input = c_e * E + c_f * F + residual, exactly.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub c_e: BigRational,
    pub c_f: BigRational,
    pub residual: QSeries,
}

/// Solve for the Eisenstein part.  The constant term pins the first
/// coefficient (only E has one).  Below weight 5 the cusp space is zero
/// and the q^1 coefficient pins the companion; at weight 5 the one-line
/// cusp space is spanned by the known form, so a two-by-two solve
/// separates the companion from the cusp multiple.  Beyond weight 5 no
/// cusp basis is pinned and the q^1 rule is applied as-is: the residual
/// then still contains whatever cusp content shares that coefficient.
pub fn decompose(series: &QSeries, kappa: u32) -> Result<Decomposition> {
    if kappa < 1 {
        return Err(Error::InvalidParameter(
            "decomposition requires weight parameter kappa >= 1".into(),
        ));
    }
    if series.prec() < (kappa + 2) as usize {
        return Err(Error::InvalidParameter(format!(
            "precision {} too low for kappa {} (need at least kappa+2)",
            series.prec(),
            kappa
        )));
    }
    let prec = series.prec();
    let e = eisenstein_e(kappa, prec);
    let f = eisenstein_f(kappa, prec);
    let c_e = series.coeff(0) / e.coeff(0);
    let after_e = series.sub(&e.scale(&c_e));
    let c_f = if kappa == 2 {
        // [F(1) S(1); F(2) S(2)] [c_f; c_s] = [r(1); r(2)]
        let s5 = s5_series(2);
        let det = f.coeff(1) * s5.coeff(2) - f.coeff(2) * s5.coeff(1);
        (after_e.coeff(1) * s5.coeff(2) - after_e.coeff(2) * s5.coeff(1)) / det
    } else {
        after_e.coeff(1) / f.coeff(1)
    };
    let residual = after_e.sub(&f.scale(&c_f));
    debug_assert!(residual.coeff(0).is_zero());
    Ok(Decomposition { c_e, c_f, residual })
}

/// Dimension of the odd-weight-(2k+1) spaces on Gamma_0(4) with the
/// quartic character and of their cusp subspaces.
pub fn dim_formulas(kappa: i64) -> (i64, i64) {
    let dim_m = if kappa < 0 { 0 } else { 1 + kappa };
    let dim_s = if kappa < 2 { 0 } else { kappa - 1 };
    (dim_m, dim_s)
}

/// Diagonal restriction of a coefficient table: coefficient n collects the
/// table entries on the line of index n; the constant passes through.
pub fn restrict(field: &RealQuadField, table: &HilbertCoeffTable) -> QSeries {
    let prec = table.prec as usize;
    let mut out = QSeries::zero(prec);
    out.set_coeff(0, table.constant.clone());
    for (xi, v) in &table.coeffs {
        let n = table.unit.line_index(*xi);
        debug_assert!(n >= 1);
        if (n as usize) <= prec {
            let cur = out.coeff(n as usize) + v;
            out.set_coeff(n as usize, cur);
        }
    }
    let _ = field;
    out
}

/// The positive definite form n = Tr(eta^2 / delta) on the coordinates of
/// eta, as integer coefficients (A, B, C) of A x^2 + B xy + C y^2.
fn restriction_form(field: &RealQuadField, unit: &RestrictionUnit) -> Result<(i128, i128, i128)> {
    let a = unit.beta;
    let b = -2 * unit.alpha;
    let c = -field.omega_norm() * unit.beta - field.omega_trace() * unit.alpha;
    // discriminant is -4 N(u) = 4, so the form is definite; sign fixes it
    if a <= 0 || 4 * a * c - b * b != 4 {
        return Err(Error::NotPositiveDefinite);
    }
    Ok((a, b, c))
}

/// Restriction of the theta series of the field: coefficient n counts the
/// ring elements with Tr(eta^2 / delta) = n.
pub fn restrict_theta_f(
    field: &RealQuadField,
    unit: &RestrictionUnit,
    prec: usize,
) -> Result<QSeries> {
    let (a, b, c) = restriction_form(field, unit)?;
    let mut counts = vec![0i128; prec + 1];
    // A x^2 + B xy + C y^2 = (x sqrt A + ...)^2 + y^2 / A  >= y^2 / A
    let ybound = crate::field::isqrt(prec as i128 * a) + 1;
    for y in -ybound..=ybound {
        // solve A x^2 + B x y + (C y^2 - prec) <= 0 exactly
        let disc = 4 * a * (prec as i128) - 4 * y * y;
        if disc < 0 {
            continue;
        }
        let s = crate::field::isqrt(disc);
        let lo = (-b * y - s - 2 * a + 1).div_euclid(2 * a);
        let hi = (-b * y + s).div_euclid(2 * a) + 1;
        for x in lo..=hi {
            let q = a * x * x + b * x * y + c * y * y;
            if q >= 0 && q as usize <= prec {
                counts[q as usize] += 1;
            }
        }
    }
    Ok(QSeries::new(counts.into_iter().map(rat).collect()))
}

/// k-th power of the restricted theta series: coefficient n is the line
/// sum of the k-variable representation numbers.
pub fn rep_numbers(
    field: &RealQuadField,
    unit: &RestrictionUnit,
    k: u32,
    prec: usize,
) -> Result<QSeries> {
    assert!(k >= 1);
    Ok(restrict_theta_f(field, unit, prec)?.pow(k))
}

/// Representation numbers by direct lattice counting: the map from each
/// sum of k squares of ring elements to its count, truncated by the line
/// index.  Independent of the series route; used as its oracle.
pub fn rep_map_brute(
    field: &RealQuadField,
    unit: &RestrictionUnit,
    k: u32,
    prec: i128,
) -> Result<std::collections::HashMap<FieldElt, u64>> {
    use std::collections::HashMap;
    let (a, b, c) = restriction_form(field, unit)?;
    let mut base: HashMap<FieldElt, u64> = HashMap::new();
    let ybound = crate::field::isqrt(prec * a) + 1;
    for y in -ybound..=ybound {
        let disc = 4 * a * prec - 4 * y * y;
        if disc < 0 {
            continue;
        }
        let s = crate::field::isqrt(disc);
        let lo = (-b * y - s - 2 * a + 1).div_euclid(2 * a);
        let hi = (-b * y + s).div_euclid(2 * a) + 1;
        for x in lo..=hi {
            let q = a * x * x + b * x * y + c * y * y;
            if q >= 0 && q <= prec {
                let eta = FieldElt::new(x, y);
                *base.entry(field.mul(eta, eta)).or_insert(0) += 1;
            }
        }
    }
    let mut acc = base.clone();
    for _ in 1..k {
        let mut next: HashMap<FieldElt, u64> = HashMap::new();
        for (xi1, c1) in &acc {
            for (xi2, c2) in &base {
                let xi = field.add(*xi1, *xi2);
                if unit.line_index(xi) <= prec {
                    *next.entry(xi).or_insert(0) += c1 * c2;
                }
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Restriction constants: the input decomposes against the Eisenstein
/// pair with the stated constant, the companion coefficient matches the
/// weight-parity sign, and the residual is certified cuspidal where the
/// dimension table pins the space (identically zero below weight 5, a
/// multiple of the weight-5 cusp form at weight 5).
pub fn verify_theorem_consts(
    field: &RealQuadField,
    kappa: u32,
    prec: i128,
    cache: &LValueCache,
    bound: i128,
) -> Result<RelationReport> {
    let unit = RestrictionUnit::find(field)?;
    let table = crate::cohen::coeff_table(field, kappa, &TrivialCharacter, &unit, prec, cache, bound)?;
    let series = restrict(field, &table);
    let d = decompose(&series, kappa)?;
    let mut report = RelationReport::new("restriction-constants");
    report.param("disc", field.disc());
    report.param("kappa", kappa);
    report.param("prec", prec);

    // constant from first principles: 2 zeta_F(1-2k) / L(-2k, chi_-4)
    let zf = zeta_f_neg(field, 1 - 2 * kappa as i64, cache, bound)?;
    let l = crate::dirichlet::l_neg(&KroneckerChar { d: -4 }, -2 * (kappa as i64));
    let expected_ce = rat(2) * zf / l;
    report.push_row(-2, &d.c_e, &expected_ce);
    // companion coefficient: (-1)^kappa times the first
    let expected_cf = if kappa % 2 == 0 {
        d.c_e.clone()
    } else {
        -d.c_e.clone()
    };
    report.push_row(-1, &d.c_f, &expected_cf);

    match kappa {
        1 => {
            for n in 0..=series.prec() {
                report.push_row(n as i64, d.residual.coeff(n), &BigRational::zero());
            }
        }
        2 => {
            let s5 = s5_series(series.prec());
            let ratio = d.residual.coeff(1) / s5.coeff(1);
            for n in 0..=series.prec() {
                report.push_row(n as i64, d.residual.coeff(n), &(s5.coeff(n) * &ratio));
            }
        }
        _ => {
            // no cusp basis is pinned beyond weight 5: only the constant
            // term of the residual is certified
            report.push_row(0, d.residual.coeff(0), &BigRational::zero());
        }
    }
    Ok(report)
}

/// Weight-3/2 restriction collapses to the Eisenstein pair alone:
/// every line sum equals -4 zeta_F(-1) (sigma - sigma') exactly.
pub fn verify_corollary_k1(
    field: &RealQuadField,
    prec: i128,
    cache: &LValueCache,
    bound: i128,
) -> Result<RelationReport> {
    let unit = RestrictionUnit::find(field)?;
    let table = crate::cohen::coeff_table(field, 1, &TrivialCharacter, &unit, prec, cache, bound)?;
    let zf = zeta_f_neg(field, -1, cache, bound)?;
    let chi = KroneckerChar { d: -4 };
    let mut report = RelationReport::new("weight-three-halves-lines");
    report.param("disc", field.disc());
    report.param("prec", prec);
    let constant = rat(-4) * zf;
    for n in 1..=prec {
        let lhs = table.line_sum(field, n);
        let rhs = &constant * (sigma_chi(n, 2, &chi) - sigma_chi_prime(n, 2, &chi));
        report.push_row(n as i64, &lhs, &rhs);
    }
    Ok(report)
}

/// Line sums of the k-variable representation numbers against the
/// classical 2k-square counts, both sides by independent routes.
pub fn verify_sum_of_squares(
    field: &RealQuadField,
    k_max: u32,
    prec: i128,
    with_brute: bool,
) -> Result<RelationReport> {
    let unit = RestrictionUnit::find(field)?;
    let mut report = RelationReport::new("sum-of-squares");
    report.param("disc", field.disc());
    report.param("k_max", k_max);
    report.param("prec", prec);
    let theta = theta_q(prec as usize);
    for k in 1..=k_max {
        let rhs_series = theta.pow(2 * k);
        let lines: Vec<BigRational> = if with_brute {
            let map = rep_map_brute(field, &unit, k, prec)?;
            let mut sums = vec![BigRational::zero(); prec as usize + 1];
            for (xi, c) in map {
                let n = unit.line_index(xi);
                if (0..=prec).contains(&n) {
                    sums[n as usize] += rat(c as i128);
                }
            }
            sums
        } else {
            rep_numbers(field, &unit, k, prec as usize)?
                .coeffs()
                .to_vec()
        };
        for n in 0..=prec {
            report.push_row(
                (k as i64) * 1000 + n as i64,
                &lines[n as usize],
                rhs_series.coeff(n as usize),
            );
        }
    }
    Ok(report)
}

/// The restricted theta series equals the two-squares series exactly.
pub fn verify_theta_identity(field: &RealQuadField, prec: i128) -> Result<RelationReport> {
    let unit = RestrictionUnit::find(field)?;
    let lhs = restrict_theta_f(field, &unit, prec as usize)?;
    let rhs = theta_sq(prec as usize);
    let mut report = RelationReport::new("theta-restriction");
    report.param("disc", field.disc());
    report.param("prec", prec);
    for n in 0..=prec as usize {
        report.push_row(n as i64, lhs.coeff(n), rhs.coeff(n));
    }
    Ok(report)
}
