use serde::Serialize;

use super::diag::{self, Diag};
use super::instance::AlignmentInstance;
use super::Category;
use crate::galois::FqMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCondition {
    pub name: String,
    pub rank: usize,
    pub required: usize,
}

impl RankCondition {
    pub fn holds(&self) -> bool {
        self.rank == self.required
    }
}

/// An exact matrix equality the construction is supposed to satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Identity {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlignmentReport {
    pub category: Category,
    pub n: usize,
    pub block: usize,
    pub roles: [usize; 3],
    pub precoder_ranks: [usize; 3],
    /// Distinct entries of `T`; full category only.
    pub distinct_ratios: Option<usize>,
    pub identities: Vec<Identity>,
    /// One per sink role, in order.
    pub conditions: Vec<RankCondition>,
}

impl AlignmentReport {
    pub fn ranks(&self) -> Vec<usize> {
        self.conditions.iter().map(|c| c.rank).collect()
    }

    pub fn identities_hold(&self) -> bool {
        self.identities.iter().all(|i| i.holds)
    }

    pub fn passes(&self) -> bool {
        self.identities_hold() && self.conditions.iter().all(RankCondition::holds)
    }
}

struct View<'a> {
    inst: &'a AlignmentInstance,
}

impl View<'_> {
    /// 1-based, source role `i` to sink role `j`.
    fn m(&self, i: usize, j: usize) -> &Diag {
        &self.inst.mhat[i - 1][j - 1]
    }

    fn v(&self, i: usize) -> &FqMatrix {
        &self.inst.v[i - 1]
    }

    /// `M_num V_i`.
    fn mv(&self, num: (usize, usize), i: usize) -> FqMatrix {
        diag::apply(self.inst.field(), self.m(num.0, num.1), self.v(i))
    }

    /// `M_den^-1 M_num V_i`.
    fn ratio_v(&self, den: (usize, usize), num: (usize, usize), i: usize) -> FqMatrix {
        let f = self.inst.field();
        let d = diag::inv(f, self.m(den.0, den.1)).expect("blocks checked nonsingular");
        diag::apply(f, &diag::mul(f, &d, self.m(num.0, num.1)), self.v(i))
    }

    fn identity(name: &str, holds: bool) -> Identity {
        Identity {
            name: name.to_string(),
            holds,
        }
    }

    fn rank(name: &str, m: FqMatrix, required: usize) -> RankCondition {
        RankCondition {
            name: name.to_string(),
            rank: m.rank(),
            required,
        }
    }
}

/// Verifies the construction identities and the rank conditions of the
/// instance's category.
///
/// The identities are checked as exact matrix equalities rather than
/// assumed from the construction.
pub fn check_alignment(inst: &AlignmentInstance) -> AlignmentReport {
    let w = View { inst };
    let n = inst.n;
    let big = inst.block_len();
    let mut identities: Vec<Identity> = inst
        .category
        .zero_pairs()
        .iter()
        .map(|&(i, j)| {
            View::identity(
                &format!("M{}{} = 0", i + 1, j + 1),
                inst.mhat[i][j].iter().all(|x| x.is_zero()),
            )
        })
        .collect();
    let conditions = match inst.category {
        Category::Full => {
            identities.push(View::identity("M21 V2 = M31 V3", w.mv((2, 1), 2) == w.mv((3, 1), 3)));
            identities.push(View::identity(
                "M32 V3 = M12 V1 columns 1..=n",
                w.mv((3, 2), 3) == diag::columns(&w.mv((1, 2), 1), 1, n),
            ));
            identities.push(View::identity(
                "M23 V2 = M13 V1 columns 0..n",
                w.mv((2, 3), 2) == diag::columns(&w.mv((1, 3), 1), 0, n),
            ));
            vec![
                View::rank("[V1 | M11^-1 M21 V2]", w.v(1).hcat(&w.ratio_v((1, 1), (2, 1), 2)), big),
                View::rank("[M12^-1 M22 V2 | V1]", w.ratio_v((1, 2), (2, 2), 2).hcat(w.v(1)), big),
                View::rank("[M13^-1 M33 V3 | V1]", w.ratio_v((1, 3), (3, 3), 3).hcat(w.v(1)), big),
            ]
        }
        Category::Cat1 => {
            let a = inst.mix_a.as_ref().expect("cat1 has A");
            let b = inst.mix_b.as_ref().expect("cat1 has B");
            identities.push(View::identity(
                "M32 V3 = M12 V1 B",
                w.mv((3, 2), 3) == w.mv((1, 2), 1).mul(b),
            ));
            identities.push(View::identity(
                "M23 V2 = M13 V1 A",
                w.mv((2, 3), 2) == w.mv((1, 3), 1).mul(a),
            ));
            vec![
                View::rank("[V1 | M11^-1 M31 V3]", w.v(1).hcat(&w.ratio_v((1, 1), (3, 1), 3)), big),
                View::rank("[M12^-1 M22 V2 | V1]", w.ratio_v((1, 2), (2, 2), 2).hcat(w.v(1)), big),
                View::rank("[M13^-1 M33 V3 | V1]", w.ratio_v((1, 3), (3, 3), 3).hcat(w.v(1)), big),
            ]
        }
        Category::Cat2 => {
            let a = inst.mix_a.as_ref().expect("cat2 has A");
            identities.push(View::identity(
                "M23 V2 = M13 V1 A",
                w.mv((2, 3), 2) == w.mv((1, 3), 1).mul(a),
            ));
            vec![
                // Sink 1 sees no interference; V1 only needs full column rank.
                View::rank("[V1]", w.v(1).clone(), n + 1),
                View::rank("[M32^-1 M22 V2 | V3]", w.ratio_v((3, 2), (2, 2), 2).hcat(w.v(3)), 2 * n),
                View::rank("[M33^-1 M13 V1 | V3]", w.ratio_v((3, 3), (1, 3), 1).hcat(w.v(3)), big),
            ]
        }
        Category::Cat3 => vec![
            View::rank("[V1 | M11^-1 M21 V2]", w.v(1).hcat(&w.ratio_v((1, 1), (2, 1), 2)), big),
            View::rank("[M32^-1 M22 V2 | V3]", w.ratio_v((3, 2), (2, 2), 2).hcat(w.v(3)), 2 * n),
            View::rank("[M33^-1 M13 V1 | V3]", w.ratio_v((3, 3), (1, 3), 1).hcat(w.v(3)), big),
        ],
        Category::Cat4 => vec![
            View::rank("[V1 | M11^-1 M21 V2]", w.v(1).hcat(&w.ratio_v((1, 1), (2, 1), 2)), big),
            View::rank("[M12^-1 M22 V2 | V1]", w.ratio_v((1, 2), (2, 2), 2).hcat(w.v(1)), big),
        ],
        Category::TimeVarying => unreachable!("transform-domain instances are never time-varying"),
    };
    AlignmentReport {
        category: inst.category,
        n,
        block: big,
        roles: inst.roles,
        precoder_ranks: std::array::from_fn(|i| inst.v[i].rank()),
        distinct_ratios: (inst.category == Category::Full).then(|| inst.distinct_ratios()),
        identities,
        conditions,
    }
}
