use rand::Rng;

use super::diag::{self, Diag};
use super::{AlignError, Category};
use crate::feasibility::root_of_unity_degree;
use crate::galois::{Embedding, Field, FieldElement, FqMatrix};
use crate::netmodel::{min_cut, seeded_rng, Channel, NetworkSpec, TransferResult};
use crate::transform::TransformPlan;

const PRECODER_STREAM: u64 = 0x5eed;

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Category of a network and the relabelling that produces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub category: Category,
    /// `roles[k]` is the session (source `k'`, sink `k'`) playing role `k`.
    pub roles: [usize; 3],
    /// Cut cross pairs `(source, sink)` in the network's own labelling.
    pub zero_pairs: Vec<(usize, usize)>,
}

pub(crate) fn check_shape(net: &NetworkSpec) -> Result<(), AlignError> {
    if net.sources.len() != 3 || net.sinks.len() != 3 {
        return Err(AlignError::Shape(format!(
            "{} sources and {} sinks",
            net.sources.len(),
            net.sinks.len()
        )));
    }
    if net.sources.iter().any(|s| s.processes != 1) || net.sinks.iter().any(|s| s.outputs != 1) {
        return Err(AlignError::Shape("every source and sink must carry one process".into()));
    }
    Ok(())
}

/// Checks the session min-cuts and finds the category from the cross-pair
/// min-cuts, relabelling sessions when needed. Relabellings are tried in
/// lexicographic order, identity first.
pub fn classify(net: &NetworkSpec) -> Result<Classification, AlignError> {
    check_shape(net)?;
    for i in 0..3 {
        let cut = min_cut(net, i, i);
        if cut != 1 {
            return Err(AlignError::MinCutViolation { pair: i, cut });
        }
    }
    let zero_pairs: Vec<(usize, usize)> = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && min_cut(net, i, j) == 0)
        .collect();
    let candidates = [
        Category::Full,
        Category::Cat1,
        Category::Cat2,
        Category::Cat3,
        Category::Cat4,
    ];
    for roles in PERMUTATIONS {
        let mut canonical: Vec<(usize, usize)> = (0..3)
            .flat_map(|k| (0..3).map(move |l| (k, l)))
            .filter(|&(k, l)| zero_pairs.contains(&(roles[k], roles[l])))
            .collect();
        canonical.sort();
        for cat in candidates {
            let mut want = cat.zero_pairs().to_vec();
            want.sort();
            if want == canonical {
                return Ok(Classification {
                    category: cat,
                    roles,
                    zero_pairs,
                });
            }
        }
    }
    Err(AlignError::UnsupportedPattern(zero_pairs))
}

/// Plan of length `block` in the smallest extension of `base` holding an
/// element of that order.
pub fn operating_plan(base: &Field, block: usize, d_max: usize) -> Result<TransformPlan, AlignError> {
    let p = base.characteristic();
    let degree =
        root_of_unity_degree(block as u64, base.order()).ok_or(AlignError::CharacteristicDividesBlock { p, block })?;
    let degree = u32::try_from(degree).map_err(|_| crate::galois::FieldError::TooLarge { p, m: u32::MAX })?;
    let emb = Embedding::extend(base, degree)?;
    let alpha = emb.ext().element_of_order(block as u64)?;
    Ok(TransformPlan::new(emb, alpha, block, d_max)?)
}

/// A built alignment problem: eigenvalues of all nine blocks and the
/// precoders.
///
/// Everything is in canonical role order; `roles` maps back to the
/// network's labelling.
#[derive(Debug, Clone)]
pub struct AlignmentInstance {
    pub n: usize,
    pub plan: TransformPlan,
    pub category: Category,
    pub roles: [usize; 3],
    pub channel: Channel,
    pub transfer: TransferResult,
    /// `mhat[i][j]`, source role `i` to sink role `j`: entry `r` is
    /// `M_ij(alpha^r)` of the normalized transfer matrix, row `r` of the
    /// newest-first stacking. All zero for cut pairs.
    pub mhat: [[Diag; 3]; 3],
    /// `a^(r) = M21 M32 M13` and `b^(r) = M31 M23 M12`; full category only.
    pub a: Diag,
    pub b: Diag,
    /// `T = a / b`, `R = M13 / M23`, `S = M12 / M32`; full category only.
    pub t: Diag,
    pub r: Diag,
    pub s: Diag,
    pub v: [FqMatrix; 3],
    /// Mixing matrices of the random constructions: `V2 = M23^-1 M13 V1 A`
    /// and `V3 = M32^-1 M12 V1 B`.
    pub mix_a: Option<FqMatrix>,
    pub mix_b: Option<FqMatrix>,
}

impl AlignmentInstance {
    /// `N = 2n + 1`.
    pub fn block_len(&self) -> usize {
        2 * self.n + 1
    }

    pub fn field(&self) -> &Field {
        self.plan.field()
    }

    /// Information symbols per block for each role.
    pub fn widths(&self) -> [usize; 3] {
        let n = self.n;
        match self.category {
            Category::Cat4 => [n + 1, n, 2 * n + 1],
            _ => [n + 1, n, n],
        }
    }

    pub fn is_cut(&self, i: usize, j: usize) -> bool {
        self.category.zero_pairs().contains(&(i, j))
    }

    /// Number of distinct ratios `a^(r) / b^(r)`; full category only.
    pub fn distinct_ratios(&self) -> usize {
        let mut t = self.t.clone();
        t.sort();
        t.dedup();
        t.len()
    }
}

/// Builds the instance for `channel` with block length `2n + 1`.
///
/// The operating field is the smallest extension of the channel's field
/// with an element of order `2n + 1`, unless `alpha` (in the channel's
/// field) is given. Random precoder entries are drawn from `seed`.
pub fn build_instance(
    channel: &Channel,
    n: usize,
    alpha: Option<FieldElement>,
    seed: u64,
) -> Result<AlignmentInstance, AlignError> {
    let class = classify(&channel.original)?;
    build_with(channel, &class, n, alpha, &mut seeded_rng(seed, PRECODER_STREAM))
}

pub(crate) fn build_with<R: Rng>(
    channel: &Channel,
    class: &Classification,
    n: usize,
    alpha: Option<FieldElement>,
    rng: &mut R,
) -> Result<AlignmentInstance, AlignError> {
    let block = 2 * n + 1;
    let p = channel.field.characteristic();
    if (block as u64).is_multiple_of(p) {
        return Err(AlignError::CharacteristicDividesBlock { p, block });
    }
    let tr = channel.transfer()?;
    let plan = match alpha {
        Some(alpha) => {
            let emb = Embedding::new(&channel.field, &channel.field)?;
            TransformPlan::new(emb, alpha, block, tr.d_max)?
        }
        None => operating_plan(&channel.field, block, tr.d_max)?,
    };
    let field = plan.field().clone();
    let roles = class.roles;
    let points: Vec<FieldElement> = (0..block as u64).map(|r| field.pow(plan.alpha, r)).collect();
    let mhat: [[Diag; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let poly = tr.m.get(roles[j], roles[i]).map_coeffs(|c| plan.lift(c));
            points.iter().map(|&x| poly.eval(&field, x)).collect()
        })
    });
    let category = class.category;
    for (i, row) in mhat.iter().enumerate() {
        for (j, d) in row.iter().enumerate() {
            if !category.zero_pairs().contains(&(i, j)) && d.iter().any(|x| x.is_zero()) {
                return Err(AlignError::SingularBlock {
                    src: roles[i],
                    sink: roles[j],
                });
            }
        }
    }

    let m = |i: usize, j: usize| &mhat[i - 1][j - 1];
    let inv = |d: &Diag| diag::inv(&field, d).expect("blocks checked nonsingular");
    let mut random = |rows: usize, cols: usize| FqMatrix::from_fn(&field, rows, cols, |_, _| field.random(rng));
    let (mut a, mut b, mut t, mut r, mut s) = (vec![], vec![], vec![], vec![], vec![]);
    let (mut mix_a, mut mix_b) = (None, None);
    let ones = vec![FieldElement::ONE; block];
    let v = match category {
        Category::Full => {
            a = diag::mul(&field, &diag::mul(&field, m(2, 1), m(3, 2)), m(1, 3));
            b = diag::mul(&field, &diag::mul(&field, m(3, 1), m(2, 3)), m(1, 2));
            t = diag::mul(&field, &a, &inv(&b));
            r = diag::mul(&field, m(1, 3), &inv(m(2, 3)));
            s = diag::mul(&field, m(1, 2), &inv(m(3, 2)));
            let nn = n as u64;
            [
                diag::krylov(&field, &ones, &t, 0, nn + 1),
                diag::krylov(&field, &r, &t, 0, nn),
                diag::krylov(&field, &s, &t, 1, nn + 1),
            ]
        }
        Category::Cat1 | Category::Cat2 => {
            let v1 = random(block, n + 1);
            let ma = random(n + 1, n);
            let to_sink3 = diag::mul(&field, &inv(m(2, 3)), m(1, 3));
            let v2 = diag::apply(&field, &to_sink3, &v1.mul(&ma));
            let v3 = if category == Category::Cat1 {
                let mb = random(n + 1, n);
                let to_sink2 = diag::mul(&field, &inv(m(3, 2)), m(1, 2));
                let v3 = diag::apply(&field, &to_sink2, &v1.mul(&mb));
                mix_b = Some(mb);
                v3
            } else {
                random(block, n)
            };
            mix_a = Some(ma);
            [v1, v2, v3]
        }
        Category::Cat3 => [random(block, n + 1), random(block, n), random(block, n)],
        Category::Cat4 => [
            random(block, n + 1),
            random(block, n),
            FqMatrix::identity(&field, block),
        ],
        Category::TimeVarying => unreachable!("classify never yields the time-varying category"),
    };
    Ok(AlignmentInstance {
        n,
        plan,
        category,
        roles,
        channel: channel.clone(),
        transfer: tr,
        mhat,
        a,
        b,
        t,
        r,
        s,
        v,
        mix_a,
        mix_b,
    })
}
