//! Growth, branching number and percolation on truncated trees.
//!
//! The branching number of the infinite tree is approached from above by
//! depth-`D` flow thresholds: the largest λ for which one unit can flow from
//! the root to level `D` when the edge into a level-`n` node has capacity
//! λ^-n. The threshold is non-increasing in `D`, and by max-flow/min-cut
//! every level cut bounds it: threshold_D <= |W_n|^(1/n) for all `n <= D`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::sawtree::TruncatedTree;

/// Slack on feasibility comparisons for double-precision flows.
pub const FLOW_EPS: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct GrowthEstimate {
    /// `(n, |W_n|^(1/n))` over the window.
    pub values: Vec<(usize, f64)>,
    pub lower: f64,
    pub upper: f64,
    pub window: (usize, usize),
}

/// Level-size roots over `n0..=D`. Empty levels end the window.
pub fn growth_estimates(t: &TruncatedTree, n0: usize) -> GrowthEstimate {
    let n0 = n0.max(1);
    let sizes = t.level_sizes();
    let values: Vec<(usize, f64)> = (n0..sizes.len())
        .take_while(|&n| sizes[n] > 0)
        .map(|n| (n, (sizes[n] as f64).powf(1.0 / n as f64)))
        .collect();
    let lower = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let upper = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    let end = values.last().map_or(n0, |v| v.0);
    GrowthEstimate {
        values,
        lower,
        upper,
        window: (n0, end),
    }
}

/// A unit flow from the root to level `D`: `edge_flow[i]` is the flow on the
/// edge into node `i` (zero at the root).
#[derive(Clone, Debug)]
pub struct FlowCertificate {
    pub lambda: f64,
    pub edge_flow: Vec<f64>,
}

fn capacity(lambda: f64, level: u32) -> f64 {
    lambda.powi(-(level as i32))
}

/// Maximum root-to-level-`D` flow. On a tree the optimum is greedy from
/// the leaves: a node passes on the smaller of its edge capacity and what
/// its children can absorb.
fn max_flow(t: &TruncatedTree, lambda: f64) -> Vec<f64> {
    let depth = t.depth() as u32;
    let mut absorb = vec![0.0; t.len()];
    for i in (0..t.len()).rev() {
        let n = t.node(i);
        let below: f64 = if n.level == depth {
            f64::INFINITY
        } else {
            t.children(i).map(|c| absorb[c]).sum()
        };
        absorb[i] = if i == t.root() {
            below
        } else {
            below.min(capacity(lambda, n.level))
        };
    }
    absorb
}

/// Whether a unit flow exists at `lambda`; if so, a certificate routing
/// exactly one unit.
pub fn branching_lower_flow(t: &TruncatedTree, lambda: f64) -> (bool, Option<FlowCertificate>) {
    if t.depth() == 0 {
        let mut edge_flow = vec![0.0; t.len()];
        edge_flow[0] = 1.0;
        return (true, Some(FlowCertificate { lambda, edge_flow }));
    }
    let absorb = max_flow(t, lambda);
    let total = absorb[t.root()];
    if total < 1.0 - FLOW_EPS {
        return (false, None);
    }
    // push one unit down, splitting in proportion to what children absorb
    let mut edge_flow = vec![0.0; t.len()];
    let mut inflow = vec![0.0; t.len()];
    inflow[t.root()] = 1.0;
    for i in 0..t.len() {
        let f = inflow[i];
        if f == 0.0 {
            continue;
        }
        let kids = t.children(i);
        let cap: f64 = kids.clone().map(|c| absorb[c]).sum();
        if cap <= 0.0 {
            continue;
        }
        for c in kids {
            let share = f * absorb[c] / cap;
            edge_flow[c] = share;
            inflow[c] = share;
        }
    }
    (true, Some(FlowCertificate { lambda, edge_flow }))
}

/// Re-checks a certificate: capacities respected, conservation at every
/// node above level `D`, and one unit leaving the root.
pub fn verify_flow(t: &TruncatedTree, cert: &FlowCertificate) -> bool {
    let depth = t.depth() as u32;
    if depth == 0 {
        return true;
    }
    let out_root: f64 = t.children(t.root()).map(|c| cert.edge_flow[c]).sum();
    if (out_root - 1.0).abs() > 1e-9 {
        return false;
    }
    for i in 0..t.len() {
        let n = t.node(i);
        let f = cert.edge_flow[i];
        if f < -FLOW_EPS {
            return false;
        }
        if i != t.root() {
            if f > capacity(cert.lambda, n.level) * (1.0 + 1e-9) + FLOW_EPS {
                return false;
            }
            if n.level < depth {
                let out: f64 = t.children(i).map(|c| cert.edge_flow[c]).sum();
                if (out - f).abs() > 1e-9 * f.max(1.0) {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchingBound {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub depth: usize,
    /// Flow value at `lambda_lo` re-verified by conservation checks.
    pub certificate_verified: bool,
}

impl BranchingBound {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lambda_lo + self.lambda_hi)
    }
}

/// Bisection for the depth-`D` threshold, starting from
/// `[1, max_children + 1]`, until the bracket is at most `tol` wide.
pub fn branching_estimate(t: &TruncatedTree, tol: f64) -> BranchingBound {
    let max_children = (0..t.len()).map(|i| t.children(i).len()).max().unwrap_or(0);
    let mut lo = 1.0;
    let mut hi = (max_children + 1) as f64;
    if t.depth() == 0 || !branching_lower_flow(t, lo).0 {
        // nothing to bracket: a single node, or level D is unreachable
        let ok = t.depth() == 0;
        return BranchingBound {
            lambda_lo: lo,
            lambda_hi: if ok { hi } else { lo },
            depth: t.depth(),
            certificate_verified: ok,
        };
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if branching_lower_flow(t, mid).0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let verified = branching_lower_flow(t, lo)
        .1
        .is_some_and(|c| verify_flow(t, &c));
    BranchingBound {
        lambda_lo: lo,
        lambda_hi: hi,
        depth: t.depth(),
        certificate_verified: verified,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelCut {
    pub n: usize,
    pub level_size: usize,
    pub root: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BrLeGrReport {
    pub threshold: f64,
    pub cuts: Vec<LevelCut>,
    pub holds: bool,
}

/// Finite form of br <= lower growth: at the certified threshold every level
/// cut carries at least one unit, so threshold <= |W_n|^(1/n).
pub fn check_br_le_gr(t: &TruncatedTree, bound: &BranchingBound) -> BrLeGrReport {
    let sizes = t.level_sizes();
    let cuts: Vec<LevelCut> = (1..sizes.len())
        .map(|n| {
            let root = (sizes[n] as f64).powf(1.0 / n as f64);
            LevelCut {
                n,
                level_size: sizes[n],
                root,
                holds: bound.lambda_lo <= root * (1.0 + FLOW_EPS),
            }
        })
        .collect();
    let holds = cuts.iter().all(|c| c.holds);
    BrLeGrReport {
        threshold: bound.lambda_lo,
        cuts,
        holds,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PercolationEstimate {
    /// `(p, survival frequency)` on the grid.
    pub grid: Vec<(f64, f64)>,
    pub pc: f64,
    pub ci: (f64, f64),
    pub seed: u64,
    pub trials: usize,
    pub depth: usize,
}

pub const P_GRID_STEP: f64 = 0.02;
const BOOTSTRAP_RESAMPLES: usize = 400;

/// Per-trial percolation threshold: with uniform edge marks, an open path
/// at `p` to level `D` exists iff the minimum over level-`D` nodes of the
/// maximum mark along the path is at most `p`.
fn trial_threshold(t: &TruncatedTree, rng: &mut ChaCha8Rng) -> f64 {
    let depth = t.depth();
    let mut theta = vec![0.0f64; t.len()];
    for i in 1..t.len() {
        let u: f64 = rng.gen();
        theta[i] = theta[t.node(i).parent as usize].max(u);
    }
    t.level(depth)
        .map(|i| theta[i])
        .fold(f64::INFINITY, f64::min)
}

fn grid_points() -> Vec<f64> {
    let steps = (1.0 / P_GRID_STEP).round() as usize;
    (0..=steps).map(|k| k as f64 * P_GRID_STEP).collect()
}

fn survival_curve(thetas: &[f64], grid: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = thetas.to_vec();
    sorted.sort_by(f64::total_cmp);
    grid.iter()
        .map(|&p| {
            let k = sorted.partition_point(|&x| x <= p);
            (p, k as f64 / sorted.len() as f64)
        })
        .collect()
}

/// The `p` where survival first reaches 1/2, interpolated linearly between
/// grid points.
fn crossing(curve: &[(f64, f64)]) -> f64 {
    for w in curve.windows(2) {
        let ((p0, s0), (p1, s1)) = (w[0], w[1]);
        if s0 < 0.5 && s1 >= 0.5 {
            return p0 + (0.5 - s0) * (p1 - p0) / (s1 - s0);
        }
    }
    if curve.first().is_some_and(|c| c.1 >= 0.5) {
        0.0
    } else {
        1.0
    }
}

/// Monte Carlo bond percolation on the truncated tree. Trial `i` draws from
/// ChaCha8 seeded with `seed` on stream `i`, so the estimate does not depend
/// on scheduling. The interval is a percentile bootstrap (95%).
pub fn percolation_pc_estimate(t: &TruncatedTree, trials: usize, seed: u64) -> PercolationEstimate {
    let trials = trials.max(1);
    let thetas: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            if t.depth() == 0 {
                0.0
            } else {
                trial_threshold(t, &mut rng)
            }
        })
        .collect();
    let grid_p = grid_points();
    let grid = survival_curve(&thetas, &grid_p);
    let pc = crossing(&grid);
    let mut boot: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_b007);
            rng.set_stream(b as u64);
            let sample: Vec<f64> = (0..trials)
                .map(|_| thetas[rng.gen_range(0..trials)])
                .collect();
            crossing(&survival_curve(&sample, &grid_p))
        })
        .collect();
    boot.sort_by(f64::total_cmp);
    let q = |f: f64| boot[((f * (boot.len() - 1) as f64).round() as usize).min(boot.len() - 1)];
    PercolationEstimate {
        grid,
        pc,
        ci: (q(0.025), q(0.975)),
        seed,
        trials,
        depth: t.depth(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub depth: usize,
    pub threshold: f64,
    pub growth: f64,
    pub gap: f64,
}

/// Distance between the depth-`D` flow threshold (bracket midpoint) and
/// |W_D|^(1/D).
pub fn furstenberg_gap(t: &TruncatedTree, tol: f64) -> GapReport {
    let b = branching_estimate(t, tol);
    let d = t.depth();
    let size = t.level(d).len() as f64;
    let growth = if d == 0 {
        1.0
    } else {
        size.powf(1.0 / d as f64)
    };
    GapReport {
        depth: d,
        threshold: b.midpoint(),
        growth,
        gap: (b.midpoint() - growth).abs(),
    }
}
