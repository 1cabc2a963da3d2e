use lincent::braid::{free_reduce, Braid, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Artin's faithful action of B_N on the free group F_N, used as an
/// independent equality oracle. Free-group letters are ±(generator + 1).
fn artin_action(n: usize, word: &Word) -> Vec<Vec<i32>> {
    let mut images: Vec<Vec<i32>> = (1..=n as i32).map(|x| vec![x]).collect();
    let reduce = |w: Vec<i32>| {
        let mut out: Vec<i32> = Vec::with_capacity(w.len());
        for x in w {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        out
    };
    for &(i, s) in word {
        let a = i as i32;
        let b = a + 1;
        // images of x_a and x_b under σ_i^{±1}
        let (ia, ib): (Vec<i32>, Vec<i32>) = if s > 0 {
            (vec![a, b, -a], vec![a])
        } else {
            (vec![b], vec![-b, a, b])
        };
        let subst = |w: &Vec<i32>| {
            let mut out = Vec::new();
            for &x in w {
                let img = if x.abs() == a {
                    &ia
                } else if x.abs() == b {
                    &ib
                } else {
                    out.push(x);
                    continue;
                };
                if x > 0 {
                    out.extend(img.iter().copied());
                } else {
                    out.extend(img.iter().rev().map(|y| -y));
                }
            }
            reduce(out)
        };
        images = images.iter().map(subst).collect();
    }
    images
}

fn random_word(n: usize, len: usize, rng: &mut ChaCha8Rng) -> Word {
    (0..len)
        .map(|_| (rng.gen_range(1..n), if rng.gen() { 1 } else { -1 }))
        .collect()
}

/// Rewrites a word with braid and free-group relations, preserving the braid.
fn rewrite(n: usize, w: &Word, rng: &mut ChaCha8Rng) -> Word {
    let mut w = w.clone();
    for _ in 0..4 {
        let pos = rng.gen_range(0..=w.len());
        match rng.gen_range(0..3) {
            0 => {
                let j = rng.gen_range(1..n);
                w.splice(pos..pos, [(j, 1), (j, -1)]);
            }
            1 if n >= 3 => {
                let j = rng.gen_range(1..n - 1);
                // σ_jσ_{j+1}σ_j ↦ σ_{j+1}σ_jσ_{j+1} around an inserted pair
                w.splice(
                    pos..pos,
                    [(j, 1), (j + 1, 1), (j, 1), (j + 1, -1), (j, -1), (j + 1, -1)],
                );
            }
            _ => {
                if pos + 1 < w.len() && w[pos].0.abs_diff(w[pos + 1].0) >= 2 {
                    w.swap(pos, pos + 1);
                }
            }
        }
    }
    w
}

fn braid_from_seed(n: usize, seed: u64) -> Braid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inf = rng.gen_range(-3..=3);
    let len = rng.gen_range(0..=4);
    Braid::random(n, inf, len, &mut rng)
}

fn valid(b: &Braid) -> bool {
    Braid::from_normal_form(b.n(), b.inf(), b.factors().to_vec()).is_ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_form_agrees_with_artin_action(seed in any::<u64>(), n in 3usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w1 = random_word(n, rng.gen_range(0..8), &mut rng);
        let w2 = if rng.gen() { rewrite(n, &w1, &mut rng) } else { random_word(n, rng.gen_range(0..8), &mut rng) };
        let b1 = Braid::from_word(n, &w1).unwrap();
        let b2 = Braid::from_word(n, &w2).unwrap();
        prop_assert_eq!(b1 == b2, artin_action(n, &w1) == artin_action(n, &w2));
        prop_assert!(valid(&b1));
    }

    #[test]
    fn group_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), n in 3usize..=4) {
        let (x, y, z) = (braid_from_seed(n, a), braid_from_seed(n, b), braid_from_seed(n, c));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert!(x.mul(&x.inv()).is_identity());
        prop_assert!(x.inv().mul(&x).is_identity());
        prop_assert_eq!(x.mul(&Braid::identity(n)), x.clone());
        let xy = x.mul(&y);
        prop_assert!(valid(&xy));
        prop_assert!(valid(&x.inv()));
        // word round trip through the multiplication-free path
        prop_assert_eq!(Braid::from_word(n, &x.to_word()).unwrap(), x.clone());
    }

    #[test]
    fn interval_laws(a in any::<u64>(), b in any::<u64>(), n in 3usize..=5) {
        let (x, y) = (braid_from_seed(n, a), braid_from_seed(n, b));
        let (ix, iy, ixy) = (x.interval(), y.interval(), x.mul(&y).interval());
        prop_assert!(ix.lo + iy.lo <= ixy.lo && ixy.hi <= ix.hi + iy.hi);
        let inv = x.inv().interval();
        prop_assert_eq!((inv.lo, inv.hi), (-ix.hi, -ix.lo));
    }

    #[test]
    fn center_and_conjugation(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), n in 3usize..=4) {
        let (g, x, y) = (braid_from_seed(n, a), braid_from_seed(n, b), braid_from_seed(n, c));
        let d2 = Braid::delta_power(n, 2);
        prop_assert_eq!(d2.mul(&g), g.mul(&d2));
        prop_assert_eq!(g.conj(&d2), g.clone());
        prop_assert_eq!(g.conj(&Braid::identity(n)), g.clone());
        prop_assert_eq!(g.conj(&x).conj(&y), g.conj(&x.mul(&y)));
        let (j, t) = g.central_decompose();
        prop_assert!(t.inf() == 0 || t.inf() == 1);
        prop_assert_eq!(Braid::delta_power(n, 2 * j).mul(&t), g);
    }

    #[test]
    fn artin_relations(n in 3usize..=6, i in 1usize..5) {
        prop_assume!(i + 1 < n);
        let l = Braid::from_word(n, &[(i, 1), (i + 1, 1), (i, 1)]).unwrap();
        let r = Braid::from_word(n, &[(i + 1, 1), (i, 1), (i + 1, 1)]).unwrap();
        prop_assert_eq!(l, r);
        for j in i + 2..n {
            prop_assert_eq!(
                Braid::from_word(n, &[(i, 1), (j, 1)]).unwrap(),
                Braid::from_word(n, &[(j, 1), (i, 1)]).unwrap()
            );
        }
    }

    #[test]
    fn free_reduction_is_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(4, 20, &mut rng);
        let r = free_reduce(&w);
        prop_assert_eq!(free_reduce(&r), r.clone());
        prop_assert_eq!(Braid::from_word(4, &w).unwrap(), Braid::from_word(4, &r).unwrap());
    }
}
