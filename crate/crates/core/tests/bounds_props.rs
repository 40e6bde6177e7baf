mod common;

use common::{random_sl2z, random_slope};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use curvefill::bounds::{
    collection_bound, cyclic_distances, order_by_slope, pair_bound, stratified_bound, theorem_c_family,
    theorem_d_ratios, BoundParams, CoverFamily, StratifiedTheorem,
};
use curvefill::diagram::SurfaceSignature;
use curvefill::geom::Precision;
use curvefill::slopes::{farey_distance, fibonacci, Sl2z, Slope};

type R = Ratio<i64>;

/// Constants with exact binary expansions so the float results can be
/// compared against rationals.
fn sample_params(rng: &mut impl Rng) -> (BoundParams, R, R) {
    let k1 = R::new(rng.gen_range(4..=40), 4);
    let k0 = R::new(rng.gen_range(0..=40), 8);
    (BoundParams::new(k1.to_f64().unwrap(), k0.to_f64().unwrap()).unwrap(), k1, k0)
}

fn close(x: f64, r: R) -> bool {
    let y = r.to_f64().unwrap();
    (x - y).abs() <= 1e-12 * y.abs().max(1.0)
}

fn clamp(r: R) -> R {
    r.max(R::from_integer(0))
}

#[test]
fn thousand_samples_against_rational_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..1000 {
        let (p, k1, k0) = sample_params(&mut rng);
        let n = rng.gen_range(2..=8);
        let ds: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=50)).collect();
        let sum = R::from_integer(ds.iter().sum::<u64>() as i64);
        let nn = R::from_integer(n as i64);

        let d = ds[0];
        let b = pair_bound(d, p);
        assert!(close(b.lower, clamp(R::from_integer(d as i64) / k1 - k0)));
        assert!(close(b.upper, k1 * R::from_integer(d as i64) + k0));

        let c = collection_bound(&ds, p).unwrap();
        assert!(close(c.lower, clamp(sum / (R::from_integer(2) * k1))));
        assert!(close(c.upper, k1 * sum + nn * k0));

        let s = stratified_bound(&ds, p, StratifiedTheorem::E, false).unwrap();
        assert!(close(s.lower, sum / (nn * k1)));
        assert!(close(s.upper, k1 * sum + nn * k0));
        let f = stratified_bound(&ds, p, StratifiedTheorem::F, true).unwrap();
        assert!(close(f.lower, sum / (R::from_integer(2) * k1)));

        for iv in [b, c, s, f] {
            assert!(iv.lower >= 0.0 && iv.lower <= iv.upper, "{iv:?}");
        }

        // bumping one entry never lowers an endpoint
        let i = rng.gen_range(0..n);
        let mut up = ds.clone();
        up[i] += rng.gen_range(1..=5);
        let (c2, s2) = (collection_bound(&up, p).unwrap(), stratified_bound(&up, p, StratifiedTheorem::E, false).unwrap());
        assert!(c2.lower >= c.lower && c2.upper >= c.upper);
        assert!(s2.lower >= s.lower && s2.upper >= s.upper);
        let b2 = pair_bound(up[0], p);
        let b1 = pair_bound(ds[0], p);
        assert!(b2.lower >= b1.lower && b2.upper >= b1.upper);

        // the two-curve collection is the pair shape doubled
        let pair2 = collection_bound(&[d, d], p).unwrap();
        assert!(close(pair2.lower, R::from_integer(d as i64) / k1));
        assert!(close(pair2.upper, R::from_integer(2) * (k1 * R::from_integer(d as i64) + k0)));
    }
}

#[test]
fn cover_intervals_scale_with_degree() {
    let p = BoundParams::new(1.5, 0.25).unwrap();
    let (k1, k0) = (R::new(3, 2), R::new(1, 4));
    let n = 7;
    let base = theorem_c_family(SurfaceSignature::new(1, 1), n, p).unwrap();
    let d = R::from_integer(base.base_distance as i64);
    for k in 1..=6u32 {
        let r = theorem_c_family(SurfaceSignature::new(1, k), n, p).unwrap();
        let kk = R::from_integer(k as i64);
        assert_eq!(r.degree, k as u64);
        assert!(close(r.interval.upper, kk * (k1 * d + k0)));
        assert!(close(r.interval.lower, kk * clamp(d / k1 - k0)));
        // the degree is the honest sheet count
        assert_eq!(r.crossings, k as usize * base.crossings);
        assert_eq!(r.derived_signature, SurfaceSignature::new(1, k));
        assert!(r.strat.stratifiable);
    }
    for (g, m) in [(2, 0), (2, 1), (3, 0)] {
        let sig = SurfaceSignature::new(g, 2 + g * m);
        let r = theorem_c_family(sig, 5, p).unwrap();
        assert_eq!(r.degree, ((2 + m) * g) as u64);
        let base = theorem_c_family(SurfaceSignature::new(1, 1), 5, p).unwrap();
        assert_eq!(r.crossings as u64, r.degree * base.crossings as u64);
        assert_eq!(r.derived_signature, sig);
    }
}

#[test]
fn cover_connectivity_follows_the_gcd_rule() {
    for k in [2u32, 3, 5] {
        let fam = CoverFamily::Torus { k };
        let mut excluded_disconnected = false;
        for n in 2..=14 {
            let r = theorem_c_family(SurfaceSignature::new(1, k), n, BoundParams::default()).unwrap();
            let coprime = num_integer::gcd(fibonacci(n).to_u64().unwrap(), k as u64) == 1;
            assert_eq!(fam.admits_index(n), coprime);
            assert_eq!(r.beta_components == 1, coprime, "k = {k}, n = {n}");
            excluded_disconnected |= !coprime && r.beta_components > 1;
        }
        assert!(excluded_disconnected, "k = {k}");
    }
}

#[test]
fn slope_order_is_mapping_class_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..200 {
        let count = rng.gen_range(2..=6);
        let slopes: Vec<Slope> = (0..count).map(|_| random_slope(&mut rng, 12)).collect();
        let Ok(ordered) = order_by_slope(&slopes) else { continue };
        let [a, b, c, d] = random_sl2z(&mut rng);
        let m = Sl2z::new(a, b, c, d).unwrap();
        let moved: Vec<Slope> = slopes.iter().map(|s| m.apply(s)).collect();
        let d1 = cyclic_distances(&ordered);
        let d2 = cyclic_distances(&order_by_slope(&moved).unwrap());
        let n = d1.len();
        assert_eq!(n, d2.len());
        assert!((0..n).any(|r| (0..n).all(|i| d1[i] == d2[(i + r) % n])), "{d1:?} vs {d2:?}");
        for (i, w) in ordered.iter().enumerate() {
            assert_eq!(d1[i], farey_distance(w, &ordered[(i + 1) % n]) as u64);
        }
    }
}

#[test]
fn theorem_d_table_shape() {
    let t = theorem_d_ratios(20, BoundParams::default(), Precision::Double).unwrap();
    assert_eq!(t.rows.len(), 18);
    for r in &t.rows {
        // from 1/0 the ladder needs one more step than from 0/1 on even n
        assert_eq!(r.distance, (r.n / 2 + 1) as u64);
        assert!(r.ratio_log_intersection > 0.0 && r.ratio_log_length > 0.0);
        assert!(r.ratio_log_intersection <= r.hempel_ratio);
    }
    assert!(t.bounded);
    assert!(t.stabilized);
}
