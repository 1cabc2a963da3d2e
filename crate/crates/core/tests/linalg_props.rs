use lincent::ff::{Field, Fp64};
use lincent::linalg::{
    centralizer_basis, combine, double_centralizer_basis, nullspace, solve_conjugacy_system,
    FieldMatrix, Subspace,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f101() -> Fp64 {
    Fp64::new(101).unwrap()
}

/// Random matrix with small entries, so that centralizers are often large.
fn sparse_matrix(ctx: &Fp64, n: usize, rng: &mut ChaCha8Rng) -> FieldMatrix<Fp64> {
    FieldMatrix::from_fn(ctx, n, n, |_, _| {
        if rng.gen_bool(0.4) {
            ctx.from_u64(rng.gen_range(0..3))
        } else {
            ctx.zero()
        }
    })
}

/// Leibniz determinant, used as an independent oracle.
fn leibniz(m: &FieldMatrix<Fp64>) -> u64 {
    fn perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }
    let n = m.rows();
    let p = 101i64;
    let val = |r: usize, c: usize| m.ctx().to_residues(m.get(r, c))[0].to_string().parse::<i64>().unwrap();
    let mut total = 0i64;
    for perm in perms(n) {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let mut term = if inversions % 2 == 0 { 1 } else { p - 1 };
        for (r, &c) in perm.iter().enumerate() {
            term = term * val(r, c) % p;
        }
        total = (total + term) % p;
    }
    total as u64
}

fn as_u64(ctx: &Fp64, e: &u64) -> u64 {
    ctx.to_residues(e)[0].to_string().parse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_matches_leibniz_and_is_multiplicative(seed in any::<u64>(), n in 1usize..=4) {
        let ctx = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sparse_matrix(&ctx, n, &mut rng);
        let b = FieldMatrix::random(&ctx, n, n, &mut rng);
        let det = |m: &FieldMatrix<Fp64>| m.det().unwrap();
        prop_assert_eq!(as_u64(&ctx, &det(&a)), leibniz(&a));
        prop_assert_eq!(det(&a.mul(&b)), ctx.mul(&det(&a), &det(&b)));
        prop_assert_eq!(a.is_invertible(), !ctx.is_zero(&det(&a)));
        if let Ok(ai) = a.inv() {
            prop_assert!(a.mul(&ai).is_identity());
        }
    }

    #[test]
    fn centralizer_of_span_equals_centralizer(seed in any::<u64>(), n in 2usize..=5, k in 1usize..=3) {
        let ctx = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s: Vec<_> = (0..k).map(|_| sparse_matrix(&ctx, n, &mut rng)).collect();
        let span: Vec<_> = (0..k)
            .map(|_| {
                let coeffs: Vec<_> = (0..k).map(|_| ctx.random(&mut rng)).collect();
                combine(&ctx, &s, &coeffs)
            })
            .chain(s.iter().cloned())
            .collect();
        let c = centralizer_basis(&ctx, &s, n);
        prop_assert_eq!(&c, &centralizer_basis(&ctx, &span, n));
        for x in c.matrices() {
            prop_assert!(s.iter().all(|b| b.commutes_with(&x)));
        }
        let cc = double_centralizer_basis(&ctx, &s, n);
        prop_assert!(s.iter().all(|b| cc.contains(b)));
        prop_assert!(cc.contains(&FieldMatrix::identity(&ctx, n)));
        // C(C(S)) commutes with everything in C(S)
        for y in cc.matrices() {
            prop_assert!(c.matrices().iter().all(|x| x.commutes_with(&y)));
        }
    }

    #[test]
    fn conjugacy_solutions_satisfy_constraints(seed in any::<u64>(), n in 2usize..=5, k in 1usize..=3) {
        let ctx = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x0 = FieldMatrix::random_invertible(&ctx, n, &mut rng);
        let x0i = x0.inv().unwrap();
        let pairs: Vec<_> = (0..k)
            .map(|_| {
                let g = sparse_matrix(&ctx, n, &mut rng);
                let h = x0i.mul(&g).mul(&x0);
                (g, h)
            })
            .collect();
        let constraint = Subspace::from_matrices(
            &ctx,
            (n, n),
            &[x0.clone(), FieldMatrix::random(&ctx, n, n, &mut rng), FieldMatrix::identity(&ctx, n)],
        );
        for c in [None, Some(&constraint)] {
            let sol = solve_conjugacy_system(&ctx, n, &pairs, c);
            prop_assert!(sol.contains(&x0));
            for x in sol.matrices() {
                prop_assert!(pairs.iter().all(|(g, h)| g.mul(&x) == x.mul(h)));
                if let Some(c) = c {
                    prop_assert!(c.contains(&x));
                }
            }
        }
    }

    #[test]
    fn nullspace_has_complementary_dimension(seed in any::<u64>(), r in 1usize..=5, c in 1usize..=6) {
        let ctx = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sparse_matrix(&ctx, r.max(c), &mut rng);
        let a = FieldMatrix::from_fn(&ctx, r, c, |i, j| *a.get(i, j));
        let ns = nullspace(&a);
        prop_assert_eq!(ns.dim() + a.rank(), c);
        for v in ns.matrices() {
            prop_assert!(a.mul(&v).entries().iter().all(|e| ctx.is_zero(e)));
        }
    }
}
