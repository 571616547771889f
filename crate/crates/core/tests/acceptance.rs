//! Acceptance criteria AC-1 to AC-9. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use holeyhex::check::{check_corollary, check_identity_i, check_identity_ii, check_identity_iii, check_lu_product, dims_up_to};
use holeyhex::closed_form::macmahon;
use holeyhex::correlation::{axis_rhombus, axis_rhombus_pair, correlation_at, correlation_sequence, fit_exponent};
use holeyhex::counting::{count_kenyon, inverse_sign, pair_determinants, sign_from_pairs};
use holeyhex::exact_linalg::permanent_small;
use holeyhex::matching_graph::dual_graph;
use holeyhex::oracle::oracle_count;
use holeyhex::{Error, HexDims, Orientation, Region, TriTriple};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn oracle(r: &Region) -> BigInt {
    oracle_count(r).expect("region within oracle limit").into()
}

fn ac1() -> Outcome {
    for d in dims_up_to(3) {
        let o = oracle(&Region::hexagon(d));
        let m = macmahon(d.a, d.b, d.c);
        if o != m {
            return Err(format!("{d}: oracle {o}, MacMahon {m}"));
        }
    }
    Ok("27 hexagons".into())
}

fn ac2() -> Outcome {
    for d in dims_up_to(2) {
        let a = dual_graph(&Region::hexagon(d)).kasteleyn_matrix();
        let det = a.det().map_err(|e| e.to_string())?;
        let perm = permanent_small(&a).map_err(|e| e.to_string())?;
        let o = oracle(&Region::hexagon(d));
        if det.magnitude() != perm.magnitude() || perm != o {
            return Err(format!("{d}: |det| {det}, permanent {perm}, oracle {o}"));
        }
    }
    Ok("8 hexagons".into())
}

fn ac3() -> Outcome {
    let mut pairs = 0;
    let mut signs = Vec::new();
    for d in dims_up_to(3) {
        let p = pair_determinants(&d).map_err(|e| format!("{d}: {e}"))?;
        let eps = sign_from_pairs(&p).map_err(|e| format!("{d}: {e}"))?;
        signs.push(eps);
        pairs += p.len();
    }
    let plus = signs.iter().filter(|&&e| e == 1).count();
    Ok(format!("{pairs} pairs, epsilon +1 in {plus} of 27 regions, -1 in the rest"))
}

fn ac4() -> Outcome {
    let mut n = 0;
    for d in dims_up_to(3) {
        n += check_lu_product(&d).map_err(|e| e.to_string())?;
    }
    for d in dims_up_to(6) {
        n += check_identity_i(&d).map_err(|e| e.to_string())?;
    }
    for d in dims_up_to(4) {
        n += check_identity_ii(&d).map_err(|e| e.to_string())?;
        n += check_identity_iii(&d).map_err(|e| e.to_string())?;
    }
    Ok(format!("{n} equalities"))
}

fn ac5() -> Outcome {
    for d in dims_up_to(3) {
        inverse_sign(&d).map_err(|e| format!("{d}: {e}"))?;
    }
    Ok("27 hexagons".into())
}

fn ac6() -> Outcome {
    let d = HexDims::new(3, 3, 3).unwrap();
    let blacks = d.triangles_of(Orientation::Left);
    let whites = d.triangles_of(Orientation::Right);
    let mut rhombi = Vec::new();
    let mut bows = Vec::new();
    for b in &blacks {
        for w in &whites {
            if b.shares_edge(w) {
                rhombi.push(vec![*b, *w]);
            } else if b.touches(w) {
                bows.push(vec![*b, *w]);
            }
        }
    }
    let mut doubles = Vec::new();
    for (i, r) in rhombi.iter().enumerate() {
        for s in &rhombi[i + 1..] {
            if r.iter().all(|t| !s.contains(t)) {
                doubles.push([r.clone(), s.clone()].concat());
            }
        }
    }
    let total = rhombi.len() + bows.len() + doubles.len();
    for v in rhombi.iter().chain(&bows).chain(&doubles) {
        let k = count_kenyon(&d, v).map_err(|e| e.to_string())?.count;
        let o = oracle(&Region::new(d, v.iter().copied()).unwrap());
        if k != o {
            let names: Vec<String> = v.iter().map(|t| t.to_string()).collect();
            return Err(format!("holes {names:?}: Kenyon {k}, oracle {o}"));
        }
    }
    Ok(format!(
        "{} rhombi, {} bow ties, {} rhombus pairs ({total} placements)",
        rhombi.len(),
        bows.len(),
        doubles.len()
    ))
}

fn ac7() -> Outcome {
    let mut n = 0;
    for d in dims_up_to(3) {
        n += check_corollary(&d).map_err(|e| e.to_string())?;
    }
    Ok(format!("{n} pairs"))
}

fn ac8() -> Outcome {
    let d = HexDims::new(3, 3, 3).unwrap();
    let all = d.triangles();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut untileable = 0;
    for _ in 0..20 {
        let k = rng.gen_range(1..=8);
        let holes: Vec<TriTriple> = all.choose_multiple(&mut rng, k).copied().collect();
        let r = Region::new(d, holes).unwrap();
        let o = oracle(&r);
        match r.forced_closure() {
            Ok(c) => {
                let oc = oracle(&c);
                if o != oc {
                    return Err(format!("{:?}: oracle {o}, after closure {oc}", r.to_spec()));
                }
            }
            Err(Error::Untileable(_)) => {
                untileable += 1;
                if o != BigInt::from(0) {
                    return Err(format!("{:?}: closure says untileable, oracle {o}", r.to_spec()));
                }
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!("20 hole sets, {untileable} untileable"))
}

fn ac9() -> Outcome {
    let unit = HexDims::new(1, 1, 1).unwrap();
    let empty = correlation_sequence(&unit, &[], 1..=10).map_err(|e| e.to_string())?;
    if empty.len() != 10 || empty.iter().any(|p| p.ratio != BigRational::from_integer(1.into())) {
        return Err("empty hole set: ratio differs from 1".into());
    }
    let rh = axis_rhombus(0).unwrap();
    for p in correlation_sequence(&unit, &rh, 1..=3).map_err(|e| e.to_string())? {
        let d = unit.scaled(p.n).unwrap();
        let want = BigRational::new(oracle(&Region::new(d, rh).unwrap()), macmahon(d.a, d.b, d.c));
        if p.ratio != want {
            return Err(format!("n = {}: Kenyon ratio {}, oracle ratio {want}", p.n, p.ratio));
        }
    }
    let d = unit.scaled(30).unwrap();
    let sets: Vec<Vec<TriTriple>> = [4, 8, 16].iter().map(|&s| axis_rhombus_pair(s).unwrap()).collect();
    let pts = correlation_at(&d, 30, &sets).map_err(|e| e.to_string())?;
    let fit = fit_exponent(&pts).map_err(|e| e.to_string())?;
    if fit.slope.abs() > 0.3 {
        return Err(format!("fitted slope {:.4} exceeds 0.3 in magnitude", fit.slope));
    }
    Ok(format!("slope {:.4}, residual {:.4}", fit.slope, fit.residual))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC-1", ac1, Duration::from_secs(60)),
        ("AC-2", ac2, Duration::from_secs(60)),
        ("AC-3", ac3, Duration::from_secs(600)),
        ("AC-4", ac4, Duration::from_secs(300)),
        ("AC-5", ac5, Duration::from_secs(300)),
        ("AC-6", ac6, Duration::from_secs(600)),
        ("AC-7", ac7, Duration::from_secs(300)),
        ("AC-8", ac8, Duration::from_secs(300)),
        ("AC-9", ac9, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > budget => Err(format!("{msg}; took {took:.1?}, budget {budget:?}")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("{name} PASS ({took:.1?}) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("{name} FAIL ({took:.1?}) {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
