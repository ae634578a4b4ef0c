use proptest::prelude::*;
use tnc_core::galois::{Embedding, Field, FieldElement, Poly, PolyMatrix};
use tnc_core::netmodel::{random_leks, random_network, seeded_rng, Channel, LekMode, RandomNetParams, TimeSeries};
use tnc_core::transform::{
    circulant_of, cp_decode, cp_encode, diagonalize, generation_matrices, predicted, reassemble, run_block,
    run_block_matrix, Generations, TransformError, TransformPlan,
};

fn random_block(plan: &TransformPlan, widths: &[usize], seed: u64) -> Vec<Generations> {
    let mut rng = seeded_rng(seed, 9);
    widths
        .iter()
        .map(|&w| {
            (0..plan.n)
                .map(|_| (0..w).map(|_| plan.field().random(&mut rng)).collect())
                .collect()
        })
        .collect()
}

fn random_poly_matrix(field: &Field, rows: usize, cols: usize, deg: usize, seed: u64) -> PolyMatrix {
    let mut rng = seeded_rng(seed, 3);
    PolyMatrix::from_fn(field, rows, cols, |_, _| {
        Poly::from_coeffs((0..=deg).map(|_| field.random(&mut rng)).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn circulant_is_block_diagonalized(seed in 0u64..10_000, rows in 1usize..3, cols in 1usize..3, deg in 0usize..4) {
        let f = Field::new(2, 4, None).unwrap();
        let plan = TransformPlan::in_field(&f, 5, 4).unwrap();
        let m = random_poly_matrix(&f, rows, cols, deg, seed);
        let c = circulant_of(&m, &plan).unwrap();
        let hats = diagonalize(&c, &plan).unwrap();
        for (t, h) in hats.iter().enumerate() {
            prop_assert_eq!(h, &m.eval(plan.point(t)));
        }
        prop_assert_eq!(reassemble(&hats, &plan), c.realized.clone());
        // Q_rows^-1 C Q_cols is block diagonal with M(alpha^k) at block k.
        let d = plan.q_inv(rows).mul(&c.realized).mul(&plan.q(cols));
        for a in 0..plan.n {
            for b in 0..plan.n {
                let blk = d.block(a * rows, b * cols, rows, cols);
                if a == b {
                    prop_assert_eq!(blk, m.eval(f.pow(plan.alpha, a as u64)));
                } else {
                    prop_assert!(blk.is_zero());
                }
            }
        }
    }

    #[test]
    fn pipeline_decodes_per_generation_products(seed in 0u64..10_000) {
        let base = Field::new(2, 2, None).unwrap();
        let ext = Field::new(2, 4, None).unwrap();
        let emb = Embedding::new(&base, &ext).unwrap();
        let alpha = ext.element_of_order(5).unwrap();
        let plan = TransformPlan::new(emb, alpha, 5, 4).unwrap();
        let net = random_network(&RandomNetParams::default(), seed);
        let leks = random_leks(&net, &base, seed, LekMode::Invariant);
        let ch = Channel::new(&net, &base, &leks).unwrap();
        let tr = ch.transfer().unwrap();
        let x = random_block(&plan, &tr.mu_sizes, seed);
        let sim = run_block(&ch, &plan, &x).unwrap();
        let conv = run_block_matrix(&tr, &plan, &x).unwrap();
        prop_assert_eq!(&sim, &conv);
        prop_assert_eq!(sim.decoded, predicted(&tr, &plan, &x).unwrap());
    }
}

#[test]
fn encode_then_decode_without_channel() {
    let f = Field::prime(11).unwrap();
    let plan = TransformPlan::in_field(&f, 5, 2).unwrap();
    let x = random_block(&plan, &[2], 1).remove(0);
    let tx = cp_encode(&plan, &x, 2).unwrap();
    assert_eq!(tx.start, -2);
    assert_eq!(tx.frames.len(), 7);
    // Prefix repeats the tail of the transformed block.
    assert_eq!(tx.frames[0], tx.frames[5]);
    assert_eq!(tx.frames[1], tx.frames[6]);
    assert_eq!(cp_decode(&plan, &tx, 2).unwrap(), x);
}

#[test]
fn window_mismatch() {
    let f = Field::prime(11).unwrap();
    let plan = TransformPlan::in_field(&f, 5, 2).unwrap();
    let y = TimeSeries::zeros(-2, 6, 1);
    assert_eq!(
        cp_decode(&plan, &y, 1),
        Err(TransformError::WindowMismatch { expected: 7, got: 6 })
    );
}

#[test]
fn plan_errors() {
    let f = Field::new(2, 3, None).unwrap();
    assert!(matches!(
        TransformPlan::in_field(&f, 7, 7),
        Err(TransformError::BlockTooLong { d_max: 7, n: 7 })
    ));
    assert!(matches!(TransformPlan::in_field(&f, 4, 1), Err(TransformError::Dft(_))));
    assert!(matches!(
        TransformPlan::in_field(&f, 5, 1),
        Err(TransformError::NoRootOfUnity { n: 5, q: 8 })
    ));
}

#[test]
fn generation_matrices_match_evaluation() {
    let f = Field::new(2, 3, None).unwrap();
    let plan = TransformPlan::in_field(&f, 7, 3).unwrap();
    let net = random_network(&RandomNetParams::default(), 4);
    let leks = random_leks(&net, &f, 4, LekMode::Invariant);
    let tr = Channel::new(&net, &f, &leks).unwrap().transfer().unwrap();
    let g = generation_matrices(&tr, &plan);
    // Generation t sits at alpha^(n-1-t); generation n-1 is M(1).
    assert_eq!(g[6], tr.m.eval(FieldElement::ONE));
    assert_eq!(g[0], tr.m.eval(f.pow(plan.alpha, 6)));
}
