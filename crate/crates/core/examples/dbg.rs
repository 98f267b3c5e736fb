use hq_core::cache::LValueCache;
use hq_core::cohen::coeff_table;
use hq_core::field::{RealQuadField, RestrictionUnit};
use hq_core::ideal::TrivialCharacter;
use hq_core::qseries::*;
use std::time::Instant;

fn main() {
    let b = 1 << 24;
    let field = RealQuadField::new(5).unwrap();
    let unit = RestrictionUnit::find(&field).unwrap();
    let cache = LValueCache::in_memory();
    let t0 = Instant::now();
    let table = coeff_table(&field, 2, &TrivialCharacter, &unit, 30, &cache, b).unwrap();
    let series = restrict(&field, &table);
    let d = decompose(&series, 2).unwrap();
    println!("kappa=2 D=5 prec=30: c_e = {}, c_f = {} ({:?})", d.c_e, d.c_f, t0.elapsed());
    let s5 = s5_series(30);
    let ratio = d.residual.coeff(1) / s5.coeff(1);
    println!("residual ratio at n=1: {}", ratio);
    let mut ok = true;
    for n in 0..=30usize {
        if d.residual.coeff(n) != &(s5.coeff(n) * &ratio) {
            println!("MISMATCH at n={n}: {} vs {}", d.residual.coeff(n), s5.coeff(n) * &ratio);
            ok = false;
        }
    }
    println!("residual proportional to weight-5 cusp form: {ok}");

    for dd in [5i128, 8, 13] {
        let f = RealQuadField::new(dd).unwrap();
        let u = RestrictionUnit::find(&f).unwrap();
        let c = LValueCache::in_memory();
        let t1 = Instant::now();
        let rep = hq_core::qseries::verify_corollary_k1(&f, 50, &c, b).unwrap();
        println!(
            "D={dd} weight-3/2 lines 1..50: pass {} fail {} ({:?})",
            rep.summary.pass,
            rep.summary.fail,
            t1.elapsed()
        );
        if rep.summary.fail > 0 {
            println!("  first failure: {}", rep.first_failure());
        }
        let _ = u;
    }
}
