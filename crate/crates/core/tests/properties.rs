use holeyhex::closed_form::macmahon;
use holeyhex::correlation::correlation_point;
use holeyhex::counting::{count, count_kasteleyn, count_kenyon, count_pathmatrix, CountOptions};
use holeyhex::matching_graph::{classify_admissibility, Admissibility};
use holeyhex::oracle::oracle_count;
use holeyhex::{Error, HexDims, Orientation, Region, RegionSpec, RhombusKind, TriTriple};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::sample::Index;

fn dims_strategy(max: i64) -> impl Strategy<Value = HexDims> {
    (1..=max, 1..=max, 1..=max).prop_map(|(a, b, c)| HexDims::new(a, b, c).unwrap())
}

fn holes_from(dims: &HexDims, picks: &[Index]) -> Vec<TriTriple> {
    let all = dims.triangles();
    let mut v: Vec<TriTriple> = picks.iter().map(|i| *i.get(&all)).collect();
    v.sort();
    v.dedup();
    v
}

/// Disjoint rhombi chosen from the picks, skipping overlaps.
fn rhombi_from(dims: &HexDims, picks: &[(Index, usize)]) -> Vec<TriTriple> {
    let lefts = dims.triangles_of(Orientation::Left);
    let mut v: Vec<TriTriple> = Vec::new();
    for (i, k) in picks {
        let b = *i.get(&lefts);
        let w = b.partner(RhombusKind::ALL[k % 3]);
        if dims.contains(&w) && !v.contains(&b) && !v.contains(&w) {
            v.push(b);
            v.push(w);
        }
    }
    v
}

fn oracle(r: &Region) -> BigInt {
    oracle_count(r).unwrap().into()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_is_idempotent_and_keeps_count(d in dims_strategy(3), picks in prop::collection::vec(any::<Index>(), 0..7)) {
        let r = Region::new(d, holes_from(&d, &picks)).unwrap();
        match r.forced_closure() {
            Ok(c) => {
                prop_assert_eq!(c.forced_closure().unwrap(), c.clone());
                prop_assert!(r.holes().is_subset(c.holes()));
                prop_assert_eq!(oracle(&r), oracle(&c));
            }
            Err(Error::Untileable(_)) => prop_assert_eq!(oracle(&r), BigInt::from(0)),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn routes_agree_on_rhombus_holes(d in dims_strategy(3), picks in prop::collection::vec((any::<Index>(), 0usize..3), 0..4)) {
        let v = rhombi_from(&d, &picks);
        let r = Region::new(d, v.iter().copied()).unwrap();
        prop_assert_ne!(classify_admissibility(&r), Admissibility::Neither);
        let o = oracle(&r);
        prop_assert_eq!(&count_kenyon(&d, &v).unwrap().count, &o);
        prop_assert_eq!(&count_kasteleyn(&r).unwrap().count, &o);
        let verified = count(&r, &CountOptions { verify: true, ..Default::default() }).unwrap();
        prop_assert_eq!(verified.count, o);
    }

    #[test]
    fn path_matrix_counts_touching_pairs(d in dims_strategy(3), i in any::<Index>(), j in any::<Index>()) {
        let whites = d.triangles_of(Orientation::Right);
        let w = *i.get(&whites);
        let near: Vec<TriTriple> = d.triangles_of(Orientation::Left).into_iter().filter(|b| b.touches(&w)).collect();
        prop_assume!(!near.is_empty());
        let b = *j.get(&near);
        let r = Region::new(d, [w, b]).unwrap();
        prop_assert_eq!(count_pathmatrix(&d, &w, &b).unwrap().count, oracle(&r));
    }

    #[test]
    fn correlation_ratio_is_tiling_fraction(d in dims_strategy(3), picks in prop::collection::vec((any::<Index>(), 0usize..3), 1..3)) {
        let v = rhombi_from(&d, &picks);
        let r = Region::new(d, v).unwrap();
        let p = correlation_point(&r, 1).unwrap();
        prop_assert_eq!(p.ratio, BigRational::new(oracle(&r), macmahon(d.a, d.b, d.c)));
    }

    #[test]
    fn region_json_round_trip(d in dims_strategy(4), picks in prop::collection::vec(any::<Index>(), 0..6)) {
        let r = Region::new(d, holes_from(&d, &picks)).unwrap();
        let json = serde_json::to_string(&r.to_spec()).unwrap();
        let spec: RegionSpec = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(Region::from_spec(&spec).unwrap(), r);
    }

    #[test]
    fn macmahon_is_symmetric(a in 1i64..6, b in 1i64..6, c in 1i64..6) {
        let m = macmahon(a, b, c);
        prop_assert_eq!(&m, &macmahon(b, a, c));
        prop_assert_eq!(&m, &macmahon(c, b, a));
        prop_assert_eq!(&m, &macmahon(a, c, b));
    }
}
