#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use curvefill::diagram::{
    cyclic_cover_lift, finger_move, generate_pillowcase_pair, generate_torus_pair, CoverCut, CrossingDiagram, Family,
    SurfaceSignature,
};
use curvefill::slopes::Slope;
use curvefill::strat::{admits_witness, unstratifiable_witness};

pub fn s(text: &str) -> Slope {
    text.parse().unwrap()
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Reduced slope with `|p|, |q| <= h`.
pub fn slope_strategy(h: i64) -> impl Strategy<Value = Slope> {
    (-h..=h, 0..=h)
        .prop_filter("reduced, not 0/0", |&(p, q)| gcd(p, q) == 1 && (q > 0 || p == 1))
        .prop_map(|(p, q)| Slope::new(BigInt::from(p), BigInt::from(q)).unwrap())
}

pub fn random_slope(rng: &mut impl Rng, h: i64) -> Slope {
    loop {
        let (p, q) = (rng.gen_range(-h..=h), rng.gen_range(0..=h));
        if gcd(p, q) == 1 && (q > 0 || p == 1) {
            return Slope::new(BigInt::from(p), BigInt::from(q)).unwrap();
        }
    }
}

/// `[[a, b], [c, d]]` with determinant one and small entries.
pub fn random_sl2z(rng: &mut impl Rng) -> [i64; 4] {
    loop {
        let (a, c) = (rng.gen_range(-6i64..=6), rng.gen_range(-6i64..=6));
        if gcd(a, c) != 1 {
            continue;
        }
        // solve a d - b c = 1, then shear by a random multiple
        let (mut x, mut y, mut r0, mut r1) = (1i64, 0i64, a, c);
        let (mut x1, mut y1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0.div_euclid(r1);
            (r0, r1) = (r1, r0 - q * r1);
            (x, x1) = (x1, x - q * x1);
            (y, y1) = (y1, y - q * y1);
        }
        // a x + c y = r0 = ±1
        let (d, b) = (x * r0, -y * r0);
        let t = rng.gen_range(-3i64..=3);
        let (b, d) = (b + t * a, d + t * c);
        assert_eq!(a * d - b * c, 1);
        return [a, b, c, d];
    }
}

fn puncture_randomly(d: &CrossingDiagram, rng: &mut impl Rng) -> CrossingDiagram {
    let faces = d.faces().len();
    let count = rng.gen_range(1..=3);
    let picks: Vec<usize> = (0..count).map(|_| rng.gen_range(0..faces)).collect();
    d.add_punctures(&picks).unwrap()
}

/// Deterministic sample of generated diagrams of every kind.
pub fn corpus(seed: u64, target: usize) -> Vec<(String, CrossingDiagram)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let witness_sigs: Vec<SurfaceSignature> = [(0, 5), (0, 6), (0, 7), (1, 2), (1, 3), (1, 4), (2, 0), (2, 1), (2, 3), (3, 0)]
        .into_iter()
        .map(|(g, k)| SurfaceSignature::new(g, k))
        .filter(|&sig| admits_witness(sig))
        .collect();
    for sig in &witness_sigs {
        out.push((format!("witness {sig}"), unstratifiable_witness(*sig).unwrap()));
    }
    while out.len() < target {
        let (a, b) = (random_slope(&mut rng, 7), random_slope(&mut rng, 7));
        if a == b {
            continue;
        }
        let kind = rng.gen_range(0..5);
        let (name, d) = match kind {
            0 => (format!("torus {a} {b}"), generate_torus_pair(&a, &b).unwrap()),
            1 => {
                let d = generate_torus_pair(&a, &b).unwrap();
                (format!("punctured torus {a} {b}"), puncture_randomly(&d, &mut rng))
            }
            2 => {
                let d = generate_torus_pair(&a, &b).unwrap();
                let fam = *[Family::Alpha, Family::Beta].choose(&mut rng).unwrap();
                let k = rng.gen_range(2..=4);
                let up = cyclic_cover_lift(&d, &CoverCut::Component(fam, 0), k).unwrap();
                let up = if rng.gen_bool(0.5) { puncture_randomly(&up, &mut rng) } else { up };
                (format!("cover {a} {b} {fam:?} {k}"), up)
            }
            3 => (format!("pillowcase {a} {b}"), generate_pillowcase_pair(&a, &b).unwrap()),
            _ => {
                let d = generate_torus_pair(&a, &b).unwrap();
                let c = rng.gen_range(0..d.crossing_count());
                let f = finger_move(&d, c).unwrap().diagram;
                let f = if rng.gen_bool(0.5) { puncture_randomly(&f, &mut rng) } else { f };
                (format!("finger {a} {b} at {c}"), f)
            }
        };
        out.push((name, d));
    }
    out
}

pub fn random_perm(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
