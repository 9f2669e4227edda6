//! Seeded synthetic scans with known labels.
//!
//! The generated anatomy, in the canonical frame (mm):
//!
//! - BA from the vertebral confluence up to the basilar tip on the midline;
//! - per side a P1 out to the PCA junction, where the PCA tree heads
//!   posterior and the P. Comm. runs anterior to the IC junction;
//! - the IC descends from there to the neck in a vertical, horizontal,
//!   vertical course, and the IC terminal climbs to the carotid terminus;
//! - the terminus feeds the MCA tree (lateral) and the A1, which ends at
//!   the ACA junction where the ACA tree heads anterior and medial.
//!
//! Every edge's base radius is `taper` times its data-tree parent's, and
//! every segment carries independent multiplicative noise. The right side
//! copies the left tree topology, re-drawing each branching decision with
//! probability `asymmetry`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::Vec3;
use crate::swc::{SegmentForest, SegmentId, SwcRecord};
use crate::vessel::{ArteryLabel, EdgeId, Side, VesselGraph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    /// Minimum and maximum depth of each cerebral tree below its attachment.
    pub min_depth: u32,
    pub max_depth: u32,
    /// Probability that a tree node above `max_depth` bifurcates.
    pub branch_prob: f64,
    /// Child edge radius over parent edge radius.
    pub taper: f64,
    /// Target distance between consecutive segments.
    pub step: f64,
    /// Relative amplitude of per-segment radius noise.
    pub noise: f64,
    /// Probability that a right-side branching decision is re-drawn rather
    /// than copied from the left.
    pub asymmetry: f64,
    pub ba_radius: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            min_depth: 2,
            max_depth: 4,
            branch_prob: 0.6,
            taper: 0.85,
            step: 1.0,
            noise: 0.03,
            asymmetry: 0.15,
            ba_radius: 1.6,
        }
    }
}

/// Labels known at generation time, one entry per artery chain keyed by the
/// chain's last record. The list doubles as a label overrides file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundTruth {
    pub chains: Vec<(SegmentId, ArteryLabel)>,
}

impl GroundTruth {
    /// Ground-truth label of every edge of a contracted graph.
    pub fn edge_labels(
        &self,
        graph: &VesselGraph,
    ) -> std::collections::BTreeMap<EdgeId, ArteryLabel> {
        let by_seg: std::collections::BTreeMap<SegmentId, ArteryLabel> =
            self.chains.iter().copied().collect();
        graph
            .edges()
            .iter()
            .filter_map(|e| {
                let last = *e.segment_ids.last()?;
                by_seg.get(&last).map(|l| (e.id, *l))
            })
            .collect()
    }

    /// `s<id> = LABEL` lines.
    pub fn to_overrides_text(&self) -> String {
        let mut out = String::new();
        for (s, l) in &self.chains {
            out.push_str(&format!("s{s} = {l}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticScan {
    pub forest: SegmentForest,
    pub truth: GroundTruth,
}

/// Branching decisions of one cerebral tree below its root edge.
#[derive(Debug, Clone, PartialEq)]
struct Plan {
    split: Option<Box<[Plan; 2]>>,
}

impl Plan {
    fn draw(rng: &mut ChaCha8Rng, depth: u32, p: &SynthParams) -> Plan {
        let split = depth < p.min_depth || (depth < p.max_depth && rng.gen_bool(p.branch_prob));
        Plan {
            split: split
                .then(|| Box::new([Plan::draw(rng, depth + 1, p), Plan::draw(rng, depth + 1, p)])),
        }
    }

    /// Copy with each decision re-drawn with probability `p.asymmetry`.
    fn perturbed(&self, rng: &mut ChaCha8Rng, depth: u32, p: &SynthParams) -> Plan {
        if rng.gen_bool(p.asymmetry) {
            return Plan::draw(rng, depth, p);
        }
        Plan {
            split: self.split.as_ref().map(|kids| {
                Box::new([
                    kids[0].perturbed(rng, depth + 1, p),
                    kids[1].perturbed(rng, depth + 1, p),
                ])
            }),
        }
    }
}

/// Tree plans for one side: PCA, MCA, and the two ACA branches.
#[derive(Debug, Clone)]
struct SidePlans {
    pca: Plan,
    mca: Plan,
    aca: [Plan; 2],
}

struct Builder<'a> {
    rng: ChaCha8Rng,
    params: &'a SynthParams,
    records: Vec<SwcRecord>,
    truth: GroundTruth,
}

impl Builder<'_> {
    fn push(&mut self, parent: Option<SegmentId>, position: Vec3, radius: f64) -> SegmentId {
        let id = self.records.len() as SegmentId + 1;
        self.records.push(SwcRecord {
            id,
            type_code: 0,
            position,
            radius,
            parent_id: parent.map(|p| p as i64).unwrap_or(-1),
        });
        id
    }

    fn noisy(&mut self, radius: f64) -> f64 {
        let n = self.params.noise;
        if n > 0.0 {
            radius * (1.0 + self.rng.gen_range(-n..=n))
        } else {
            radius
        }
    }

    /// Straight runs through `waypoints`, at least six segments in total.
    fn chain(
        &mut self,
        parent: SegmentId,
        waypoints: &[Vec3],
        radius: f64,
        label: ArteryLabel,
    ) -> SegmentId {
        let total: f64 = waypoints.windows(2).map(|w| w[0].distance(w[1])).sum();
        let mut cur = parent;
        for w in waypoints.windows(2) {
            let len = w[0].distance(w[1]);
            let share = (len / total * 6.0).ceil() as usize;
            let n = ((len / self.params.step).ceil() as usize).max(share).max(1);
            for i in 1..=n {
                let t = i as f64 / n as f64;
                let pos = w[0] + (w[1] - w[0]) * t;
                let r = self.noisy(radius);
                cur = self.push(Some(cur), pos, r);
            }
        }
        self.truth.chains.push((cur, label));
        cur
    }

    /// Lays out one tree edge from `from` along `dir` and recurses into the
    /// plan's children in random file order.
    fn grow(
        &mut self,
        parent: SegmentId,
        from: Vec3,
        dir: Vec3,
        spread: Vec3,
        length: f64,
        radius: f64,
        plan: &Plan,
        label: ArteryLabel,
    ) {
        let to = from + dir.normalized() * length;
        let end = self.chain(parent, &[from, to], radius, label);
        if let Some(kids) = &plan.split {
            let mut order = [0usize, 1];
            order.shuffle(&mut self.rng);
            for k in order {
                let sign = if k == 0 { -1.0 } else { 1.0 };
                let child_dir = dir.normalized() + spread * (0.55 * sign);
                let r = radius * self.params.taper;
                self.grow(
                    end,
                    to,
                    child_dir,
                    spread,
                    length * 0.85,
                    r,
                    &kids[k],
                    label,
                );
            }
        }
    }

    fn side(&mut self, tip: SegmentId, tip_pos: Vec3, side: Side, plans: &SidePlans) {
        let s = side.sign();
        let p = *self.params;
        let t = p.taper;
        let v = |x: f64, y: f64, z: f64| Vec3::new(s * x, y, z);

        let r_p1 = p.ba_radius * t;
        let n_p = v(8.0, 1.0, -10.0);
        let p1 = self.chain(tip, &[tip_pos, n_p], r_p1, ArteryLabel::Pca(side));

        let r_child = r_p1 * t;
        let n_ic = v(12.0, 0.0, 8.0);
        let mut branches = [0usize, 1];
        branches.shuffle(&mut self.rng);
        for b in branches {
            if b == 0 {
                self.grow(
                    p1,
                    n_p,
                    v(0.35, 0.45, -1.0),
                    v(1.0, 0.25, 0.0),
                    9.0,
                    r_child,
                    &plans.pca,
                    ArteryLabel::Pca(side),
                );
            } else {
                let pcomm = self.chain(p1, &[n_p, n_ic], r_child, ArteryLabel::PComm(side));
                self.carotid(pcomm, n_ic, r_child * t, side, plans);
            }
        }
    }

    /// IC descent, IC terminal and the anterior circulation.
    fn carotid(
        &mut self,
        pcomm: SegmentId,
        n_ic: Vec3,
        radius: f64,
        side: Side,
        plans: &SidePlans,
    ) {
        let s = side.sign();
        let t = self.params.taper;
        let v = |x: f64, y: f64, z: f64| Vec3::new(s * x, y, z);
        let n_t = v(13.0, 3.0, 10.0);
        let mut order = [0usize, 1];
        order.shuffle(&mut self.rng);
        for o in order {
            if o == 0 {
                // vertical, horizontal, vertical toward the neck
                let waypoints = [
                    n_ic,
                    v(12.0, -18.0, 8.0),
                    v(19.0, -20.0, 7.0),
                    v(19.0, -60.0, 6.0),
                ];
                self.chain(pcomm, &waypoints, radius, ArteryLabel::Ic(side));
            } else {
                let term = self.chain(pcomm, &[n_ic, n_t], radius, ArteryLabel::Ic(side));
                self.terminus(term, n_t, radius * t, side, plans);
            }
        }
    }

    fn terminus(&mut self, term: SegmentId, n_t: Vec3, radius: f64, side: Side, plans: &SidePlans) {
        let s = side.sign();
        let t = self.params.taper;
        let v = |x: f64, y: f64, z: f64| Vec3::new(s * x, y, z);
        let mut order = [0usize, 1];
        order.shuffle(&mut self.rng);
        for o in order {
            if o == 0 {
                self.grow(
                    term,
                    n_t,
                    v(1.0, 0.35, 0.1),
                    v(0.0, 1.0, 0.3),
                    10.0,
                    radius,
                    &plans.mca,
                    ArteryLabel::Mca(side),
                );
            } else {
                let n_a = v(4.0, 4.0, 16.0);
                let a1 = self.chain(term, &[n_t, n_a], radius, ArteryLabel::Aca(side));
                let mut kids = [0usize, 1];
                kids.shuffle(&mut self.rng);
                for k in kids {
                    let dir = if k == 0 {
                        v(0.1, 0.5, 1.0)
                    } else {
                        v(0.3, 1.0, 0.4)
                    };
                    self.grow(
                        a1,
                        n_a,
                        dir,
                        v(0.3, 0.4, 0.5),
                        8.0,
                        radius * t,
                        &plans.aca[k],
                        ArteryLabel::Aca(side),
                    );
                }
            }
        }
    }
}

/// Generates a scan and its ground-truth labels; identical seeds and
/// parameters give identical output.
pub fn generate_synthetic_scan(seed: u64, params: &SynthParams) -> SyntheticScan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let left = SidePlans {
        pca: Plan::draw(&mut rng, 1, params),
        mca: Plan::draw(&mut rng, 1, params),
        aca: [
            Plan::draw(&mut rng, 1, params),
            Plan::draw(&mut rng, 1, params),
        ],
    };
    let right = SidePlans {
        pca: left.pca.perturbed(&mut rng, 1, params),
        mca: left.mca.perturbed(&mut rng, 1, params),
        aca: [
            left.aca[0].perturbed(&mut rng, 1, params),
            left.aca[1].perturbed(&mut rng, 1, params),
        ],
    };
    let mut b = Builder {
        rng,
        params,
        records: Vec::new(),
        truth: GroundTruth::default(),
    };
    let origin = Vec3::new(0.0, -30.0, -14.0);
    let root_r = b.noisy(params.ba_radius);
    let root = b.push(None, origin, root_r);
    let tip_pos = Vec3::new(0.0, 0.0, -12.0);
    let tip = b.chain(root, &[origin, tip_pos], params.ba_radius, ArteryLabel::Ba);
    let mut sides = [Side::Left, Side::Right];
    sides.shuffle(&mut b.rng);
    for side in sides {
        let plans = if side == Side::Left { &left } else { &right };
        b.side(tip, tip_pos, side, plans);
    }
    let forest = SegmentForest::from_records(b.records).expect("generator emits a valid tree");
    SyntheticScan {
        forest,
        truth: b.truth,
    }
}

/// Negates every lateral coordinate.
pub fn mirror_lateral(forest: &SegmentForest) -> SegmentForest {
    forest.map_records(|r| {
        let mut r = r.clone();
        r.position.x = -r.position.x;
        r
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vessel::contract_chains;

    #[test]
    fn same_seed_same_scan() {
        let p = SynthParams::default();
        assert_eq!(
            generate_synthetic_scan(7, &p),
            generate_synthetic_scan(7, &p)
        );
        assert_ne!(
            generate_synthetic_scan(7, &p).forest,
            generate_synthetic_scan(8, &p).forest
        );
    }

    #[test]
    fn binary_tree_edge_count() {
        for seed in 0..20 {
            let scan = generate_synthetic_scan(seed, &SynthParams::default());
            let f = &scan.forest;
            let bifurcations = f
                .records()
                .iter()
                .filter(|r| f.children(r.id).len() == 2)
                .count();
            assert!(f.records().iter().all(|r| f.children(r.id).len() <= 2));
            let g = contract_chains(f);
            assert_eq!(g.edges().len(), 2 * bifurcations + 1);
            assert_eq!(scan.truth.chains.len(), g.edges().len());
        }
    }

    #[test]
    fn child_radius_tapers() {
        let p = SynthParams::default();
        for seed in 0..10 {
            let g = contract_chains(&generate_synthetic_scan(seed, &p).forest);
            for e in g.edges() {
                let Some(parent) = g.parent_edge(e.id) else {
                    continue;
                };
                let ratio = e.mean_radius / g.edge(parent).mean_radius;
                let slack = (1.0 + p.noise) / (1.0 - p.noise);
                assert!(
                    ratio <= p.taper * slack && ratio >= p.taper / slack,
                    "ratio {ratio}"
                );
            }
        }
    }

    #[test]
    fn every_edge_has_six_segments() {
        let g = contract_chains(&generate_synthetic_scan(3, &SynthParams::default()).forest);
        assert!(g.edges().iter().all(|e| e.segment_ids.len() >= 6));
    }
}
