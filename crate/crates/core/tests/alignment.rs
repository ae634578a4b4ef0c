mod common;

use common::{category_network, gadget_network, network_without, random_symbols};
use tnc_core::alignment::{
    align_search, build_instance, build_tv, check_alignment, check_tv, classify, encode_decode, invariant_assignment,
    AlignError, Category, Rate, TvAssignment,
};
use tnc_core::fixtures::load_fixture;
use tnc_core::galois::{Field, FieldElement, FqMatrix};
use tnc_core::netmodel::{
    admissible_positions, seeded_rng, simulate, Channel, KernelSet, LekAssignment, NetworkSpec, TimeSeries,
};
use tnc_core::transform::circulant_of;

fn example2() -> (Channel, Option<FieldElement>) {
    let p = load_fixture("example2").unwrap();
    let ch = Channel::new(p.network.as_ref().unwrap(), &p.field, p.leks.as_ref().unwrap()).unwrap();
    (ch, p.alpha)
}

fn invariant(ch: &Channel) -> KernelSet {
    match &ch.leks {
        LekAssignment::Invariant(k) => k.clone(),
        _ => unreachable!(),
    }
}

#[test]
fn example2_full_rank() {
    let (ch, alpha) = example2();
    let inst = build_instance(&ch, 3, alpha, 0).unwrap();
    assert_eq!(inst.category, Category::Full);
    assert_eq!(inst.field().order(), 64);
    assert_eq!(inst.plan.d_max, 2);
    let rep = check_alignment(&inst);
    assert_eq!(rep.ranks(), vec![7, 7, 7]);
    assert!(rep.identities_hold());
    assert!(rep.passes());
    assert_eq!(rep.precoder_ranks, [4, 3, 3]);
}

#[test]
fn example2_alpha_is_beta_to_the_ninth() {
    let (ch, alpha) = example2();
    let f = &ch.field;
    assert_eq!(alpha, Some(f.pow(f.from_coeffs(&[0, 1]).unwrap(), 9)));
    // Same plan whether alpha is given or derived: beta^9 = g^((q-1)/7).
    let derived = build_instance(&ch, 3, None, 0).unwrap();
    assert_eq!(Some(derived.plan.alpha), alpha);
}

#[test]
fn example2_recovers_every_symbol() {
    let (ch, alpha) = example2();
    let inst = build_instance(&ch, 3, alpha, 0).unwrap();
    for seed in 0..20 {
        let x = random_symbols(&inst, seed);
        let rec = encode_decode(&inst, &x).unwrap();
        assert_eq!(rec.recovered, x, "seed {seed}");
        assert_eq!(rec.channel_uses, 9);
        assert_eq!(rec.throughput, vec![Rate::new(4, 7), Rate::new(3, 7), Rate::new(3, 7)]);
    }
}

#[test]
fn zero_symbols_decode_to_zero() {
    let (ch, alpha) = example2();
    let inst = build_instance(&ch, 3, alpha, 0).unwrap();
    let x: Vec<Vec<FieldElement>> = inst.widths().iter().map(|&w| vec![FieldElement::ZERO; w]).collect();
    assert_eq!(encode_decode(&inst, &x).unwrap().recovered, x);
}

#[test]
fn wrong_input_widths() {
    let (ch, alpha) = example2();
    let inst = build_instance(&ch, 3, alpha, 0).unwrap();
    let x = vec![vec![FieldElement::ZERO; 3]; 3];
    assert!(matches!(encode_decode(&inst, &x), Err(AlignError::InputShape(_))));
}

#[test]
fn distinct_ratios_give_full_column_rank() {
    let (ch, alpha) = example2();
    let inst = build_instance(&ch, 3, alpha, 0).unwrap();
    assert!(inst.distinct_ratios() > inst.n);
    assert_eq!(inst.v[0].rank(), inst.n + 1);
}

/// Example 2's topology without the direct paths: every path has length
/// five, so each block is a constant times `D^5`.
fn equal_delay_network() -> NetworkSpec {
    let mut net = load_fixture("example2").unwrap().network.unwrap();
    net.edges.retain(|e| {
        !["X", "Y"]
            .iter()
            .any(|p| e.tail.starts_with(p) || e.head.starts_with(p))
    });
    net.nodes.retain(|n| !n.starts_with('X') && !n.starts_with('Y'));
    net
}

#[test]
fn equal_delays_collapse_the_precoders() {
    let f = Field::new(2, 6, None).unwrap();
    let net = equal_delay_network();
    let ch = Channel::new(&net, &f, &LekAssignment::Invariant(KernelSet::all_ones(&net))).unwrap();
    let inst = build_instance(&ch, 3, None, 0).unwrap();
    assert_eq!(inst.transfer.d_max, 0);
    for d in [&inst.t, &inst.r, &inst.s] {
        assert!(d.iter().all(|&x| x == d[0]));
    }
    assert_eq!(inst.distinct_ratios(), 1);
    assert_eq!(inst.v[0].rank(), 1);
    let rep = check_alignment(&inst);
    assert!(rep.identities_hold());
    assert!(!rep.passes());
}

#[test]
fn characteristic_dividing_block_is_rejected() {
    let f = Field::prime(3).unwrap();
    let net = category_network(Category::Full);
    let leks = LekAssignment::Invariant(KernelSet::all_ones(&net));
    let ch = Channel::new(&net, &f, &leks).unwrap();
    assert_eq!(
        build_instance(&ch, 1, None, 0).unwrap_err(),
        AlignError::CharacteristicDividesBlock { p: 3, block: 3 }
    );
    assert_eq!(
        align_search(&net, &f, 4, None, 0, 10).unwrap_err(),
        AlignError::CharacteristicDividesBlock { p: 3, block: 9 }
    );
}

#[test]
fn session_min_cut_must_be_one() {
    let mut net = load_fixture("example2").unwrap().network.unwrap();
    net.edges.retain(|e| !(e.tail == "P1" && e.head == "D1"));
    let f = Field::new(2, 6, None).unwrap();
    assert_eq!(
        classify(&net).unwrap_err(),
        AlignError::MinCutViolation { pair: 0, cut: 0 }
    );
    assert_eq!(
        align_search(&net, &f, 3, None, 0, 100).unwrap_err(),
        AlignError::MinCutViolation { pair: 0, cut: 0 }
    );
    // Two parallel routes for session 1.
    let doubled = gadget_network(&[
        (0, 0),
        (0, 0),
        (1, 1),
        (2, 2),
        (0, 1),
        (1, 0),
        (1, 2),
        (2, 1),
        (0, 2),
        (2, 0),
    ]);
    assert!(matches!(
        classify(&doubled),
        Err(AlignError::MinCutViolation { pair: 0, cut: 2 })
    ));
}

#[test]
fn categories_are_detected() {
    for cat in [
        Category::Full,
        Category::Cat1,
        Category::Cat2,
        Category::Cat3,
        Category::Cat4,
    ] {
        let c = classify(&category_network(cat)).unwrap();
        assert_eq!((c.category, c.roles), (cat, [0, 1, 2]));
    }
}

#[test]
fn relabelled_patterns_are_mapped() {
    // Only S1 - D2 cut: category 1 with sessions 1 and 2 swapped.
    let c = classify(&network_without(&[(0, 1)])).unwrap();
    assert_eq!(c.category, Category::Cat1);
    assert_eq!(c.roles, [1, 0, 2]);
    // Category 3's cyclic pattern run the other way round.
    let c = classify(&network_without(&[(1, 0), (2, 1), (0, 2)])).unwrap();
    assert_eq!(c.category, Category::Cat3);
    for &(i, j) in Category::Cat3.zero_pairs() {
        assert!(c.zero_pairs.contains(&(c.roles[i], c.roles[j])));
    }
}

#[test]
fn unlisted_patterns_are_rejected() {
    let two = network_without(&[(1, 0), (2, 1)]);
    assert!(matches!(classify(&two), Err(AlignError::UnsupportedPattern(p)) if p == vec![(1, 0), (2, 1)]));
    let all = network_without(&[(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]);
    assert!(matches!(classify(&all), Err(AlignError::UnsupportedPattern(_))));
}

#[test]
fn empty_budget_is_not_found() {
    let (ch, _) = example2();
    let f = ch.field.clone();
    assert_eq!(
        align_search(&ch.original, &f, 3, None, 42, 0).unwrap_err(),
        AlignError::NotFound { seed: 42, attempts: 0 }
    );
}

#[test]
fn search_finds_example2_style_kernels() {
    let (ch, alpha) = example2();
    let out = align_search(&ch.original, &ch.field, 3, alpha, 1, 100).unwrap();
    assert!(out.report.passes());
    assert!(out.attempts <= 100);
    // Replaying with the same seed gives the same answer.
    let again = align_search(&ch.original, &ch.field, 3, alpha, 1, 100).unwrap();
    assert_eq!(again.leks, out.leks);
    assert_eq!(again.attempts, out.attempts);
    let x = random_symbols(&out.instance, 5);
    assert_eq!(encode_decode(&out.instance, &x).unwrap().recovered, x);
}

#[test]
fn every_category_aligns_and_decodes() {
    let f = Field::new(2, 6, None).unwrap();
    for cat in [
        Category::Full,
        Category::Cat1,
        Category::Cat2,
        Category::Cat3,
        Category::Cat4,
    ] {
        let net = category_network(cat);
        let out = align_search(&net, &f, 3, None, 7, 200).unwrap_or_else(|e| panic!("{cat:?}: {e}"));
        assert_eq!(out.instance.category, cat);
        assert!(out.report.identities_hold());
        for seed in 0..5 {
            let x = random_symbols(&out.instance, seed);
            let rec = encode_decode(&out.instance, &x).unwrap();
            assert_eq!(rec.recovered, x, "{cat:?}");
        }
        if cat == Category::Cat4 {
            assert_eq!(out.instance.widths(), [4, 3, 7]);
        }
    }
}

#[test]
fn relabelled_category_decodes() {
    let f = Field::new(2, 6, None).unwrap();
    let net = network_without(&[(0, 1)]);
    let out = align_search(&net, &f, 3, None, 3, 200).unwrap();
    assert_eq!(out.instance.roles, [1, 0, 2]);
    let x = random_symbols(&out.instance, 0);
    assert_eq!(x[1].len(), 4);
    let rec = encode_decode(&out.instance, &x).unwrap();
    assert_eq!(rec.recovered, x);
    assert_eq!(rec.throughput[1], Rate::new(4, 7));
}

fn constant_schedule(ch: &Channel, n: usize, d_max: usize) -> Channel {
    let k = invariant(ch);
    ch.with_leks(&LekAssignment::periodic(&[k], -(d_max as i64), 2 * n as i64))
        .unwrap()
}

#[test]
fn constant_kernels_give_circulant_blocks() {
    let (ch, alpha) = example2();
    let inst = build_instance(&ch, 3, alpha, 0).unwrap();
    let tv = build_tv(&constant_schedule(&ch, 3, 2), &inst.plan).unwrap();
    assert!(tv.band_violations().is_empty());
    for i in 0..3 {
        for j in 0..3 {
            let block = inst.transfer.block(i, j);
            assert_eq!(tv.m[i][j], circulant_of(&block, &inst.plan).unwrap().realized);
        }
    }
}

#[test]
fn zero_kernels_give_zero_blocks() {
    let (ch, alpha) = example2();
    let inst = build_instance(&ch, 3, alpha, 0).unwrap();
    let zero = ch.with_leks(&LekAssignment::Invariant(KernelSet::default())).unwrap();
    let tv = build_tv(&zero, &inst.plan).unwrap();
    assert!(tv.m.iter().flatten().all(FqMatrix::is_zero));
}

#[test]
fn time_varying_blocks_match_simulation() {
    let (ch, alpha) = example2();
    let inst = build_instance(&ch, 3, alpha, 0).unwrap();
    let f = ch.field.clone();
    let net = ch.original.clone();
    let big = 7usize;
    for seed in 0..4 {
        let mut rng = seeded_rng(seed, 21);
        let sets: Vec<KernelSet> = (0..big + 2 + 3)
            .map(|_| {
                let mut k = KernelSet::default();
                for pos in admissible_positions(&net) {
                    k.set(pos, f.random(&mut rng));
                }
                k
            })
            .collect();
        let sched = LekAssignment::TimeIndexed { start: -2, sets };
        let tvch = ch.with_leks(&sched).unwrap();
        let tv = build_tv(&tvch, &inst.plan).unwrap();
        assert!(tv.band_violations().is_empty());
        // Stacked blocks, newest first; the prefix repeats the last two.
        let x: Vec<Vec<FieldElement>> = (0..3).map(|_| (0..big).map(|_| f.random(&mut rng)).collect()).collect();
        let series: Vec<TimeSeries> = x
            .iter()
            .map(|s| {
                TimeSeries::new(
                    -2,
                    (-2..big as i64)
                        .map(|t| vec![s[big - 1 - t.rem_euclid(big as i64) as usize]])
                        .collect(),
                )
            })
            .collect();
        let out = simulate(tvch.net(), &f, &tvch.leks, &series, -2, big + 2 + 3).unwrap();
        for j in 0..3 {
            let mut want = FqMatrix::zeros(&f, big, 1);
            for i in 0..3 {
                want = want.add(&tv.m[i][j].mul(&FqMatrix::from_fn(&f, big, 1, |r, _| x[i][r])));
            }
            for r in 0..big {
                assert_eq!(
                    out[j].symbol((big - 1 - r + 3) as i64, 0),
                    want.get(r, 0),
                    "seed {seed} sink {j}"
                );
            }
        }
    }
}

#[test]
fn invariant_assignment_passes_time_varying_check() {
    let (ch, alpha) = example2();
    let inst = build_instance(&ch, 3, alpha, 0).unwrap();
    let tv = build_tv(&constant_schedule(&ch, 3, 2), &inst.plan).unwrap();
    let asg = invariant_assignment(&inst).unwrap();
    let v = check_tv(&tv, &asg).unwrap();
    assert!(v.passes(), "{v:?}");
    assert_eq!(v.ranks, [7, 7, 7]);
}

#[test]
fn invariant_assignment_fails_when_alignment_fails() {
    let f = Field::new(2, 6, None).unwrap();
    let net = equal_delay_network();
    let ch = Channel::new(&net, &f, &LekAssignment::Invariant(KernelSet::all_ones(&net))).unwrap();
    let inst = build_instance(&ch, 3, None, 0).unwrap();
    assert!(!check_alignment(&inst).passes());
    let tv = build_tv(&constant_schedule(&ch, 3, 0), &inst.plan).unwrap();
    let v = check_tv(&tv, &invariant_assignment(&inst).unwrap()).unwrap();
    assert!(!v.passes());
}

#[test]
fn random_assignment_breaks_alignment() {
    let (ch, alpha) = example2();
    let inst = build_instance(&ch, 3, alpha, 0).unwrap();
    let tv = build_tv(&constant_schedule(&ch, 3, 2), &inst.plan).unwrap();
    let f = inst.field().clone();
    let mut rng = seeded_rng(9, 1);
    let mut rand = |r, c| FqMatrix::from_fn(&f, r, c, |_, _| f.random(&mut rng));
    let asg = TvAssignment {
        theta: rand(7, 4),
        a: rand(4, 3),
        b: rand(4, 3),
        c: rand(3, 3),
    };
    let v = check_tv(&tv, &asg).unwrap();
    assert!(!v.aligned());
    assert!(v.violations.iter().all(|&(r, c)| r < 7 && c < 3));

    let mut zero = invariant_assignment(&inst).unwrap();
    zero.theta = FqMatrix::zeros(&f, 7, 4);
    let v = check_tv(&tv, &zero).unwrap();
    assert!(v.aligned());
    assert!(v.ranks.iter().all(|&r| r == 0));
    assert!(!v.passes());
}

#[test]
fn single_kernel_mutations_break_alignment() {
    let (ch, alpha) = example2();
    let inst = build_instance(&ch, 3, alpha, 0).unwrap();
    let asg = invariant_assignment(&inst).unwrap();
    let base = invariant(&ch);
    let positions = admissible_positions(&ch.original);
    let f = ch.field.clone();
    let mut rng = seeded_rng(3, 5);
    let mut broken = 0;
    for m in 0..12 {
        let pos = positions[(m * 7) % positions.len()].clone();
        let time = m % 7;
        let mut sets = vec![base.clone(); 9];
        let old = sets[time + 2].get(&pos);
        let new = loop {
            let v = f.random_nonzero(&mut rng);
            if v != old {
                break v;
            }
        };
        sets[time + 2].set(pos, new);
        let tvch = ch.with_leks(&LekAssignment::TimeIndexed { start: -2, sets }).unwrap();
        let tv = build_tv(&tvch, &inst.plan).unwrap();
        match check_tv(&tv, &asg) {
            Ok(v) if !v.aligned() => broken += 1,
            Ok(_) => {}
            Err(AlignError::SingularBlock { .. }) => broken += 1,
            Err(e) => panic!("{e}"),
        }
    }
    assert_eq!(broken, 12);
}
