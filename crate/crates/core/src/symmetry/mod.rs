//! Mass transport, edge reversal and the walk decompositions behind
//! μ = μ^B.

mod decompose;
mod geodesic;

use std::collections::HashMap;
use std::ops::ControlFlow;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::enumerate::{count_extendable, count_saws, enumerate_saws, Mode};
use crate::error::{Error, Result};
use crate::extend::{self, Side};
use crate::graph::{self, Graph, GraphFamily};
use crate::walk::Walk;

pub use decompose::{decompose_walk, CaseTag, Decomposition, Reference, Segment};
pub use geodesic::{
    build_quasi_geodesic, find_geodesic_ray, loop_erase, quasi_geodesic_from_line, QuasiGeodesic,
    ALPHA_DENOMINATOR,
};

fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn require_unimodular(g: &dyn GraphFamily, what: &str) -> Result<()> {
    if g.is_unimodular() {
        Ok(())
    } else {
        Err(Error::NotUnimodular {
            family: g.name().to_string(),
            reason: format!("{what} requires a unimodular automorphism group"),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MassTransport {
    pub n: usize,
    /// Σ_s M(s)^-1 Σ_v m(s, v) as a reduced fraction.
    pub lhs: String,
    /// Σ_s M(s)^-1 Σ_u m(u, s).
    pub rhs: String,
    pub equal: bool,
    /// Per class: (walks leaving s, walks arriving at s).
    pub per_class: Vec<(u128, u128)>,
    #[serde(skip)]
    pub lhs_exact: BigRational,
    #[serde(skip)]
    pub rhs_exact: BigRational,
}

/// Number of forward-extendable `n`-step SAWs of `g` that end at `s`:
/// SAWs from `s` in the reversed graph, read backwards.
pub fn count_forward_arriving(g: &Graph, s: graph::VertexId, n: usize) -> Result<u128> {
    extend::ensure_supported(g.as_ref())?;
    let rev = graph::reverse(g);
    let mut count: u128 = 0;
    let mut failure = None;
    let _ = enumerate_saws(rev.as_ref(), s, n, |w| {
        let mut vertices = w.vertices.to_vec();
        vertices.reverse();
        let walk = match Walk::from_vertices(g.as_ref(), vertices) {
            Ok(walk) => walk,
            Err(e) => {
                failure = Some(e);
                return ControlFlow::Break(());
            }
        };
        match extend::is_extendable(g.as_ref(), walk.as_ref(), Side::Forward) {
            Ok(true) => count += 1,
            Ok(false) => {}
            Err(e) => {
                failure = Some(e);
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(count),
    }
}

/// Both sides of the mass-transport principle for
/// m(u, v) = number of forward-extendable `n`-step SAWs from `u` to `v`.
pub fn mass_transport_check(g: &Graph, n: usize) -> Result<MassTransport> {
    require_unimodular(g.as_ref(), "the mass-transport check")?;
    let mut lhs = BigRational::zero();
    let mut rhs = BigRational::zero();
    let mut per_class = Vec::new();
    for s in g.representatives() {
        let inv = big(g.weight(s)).recip();
        let out = count_extendable(g.as_ref(), s, n, Mode::Forward)?;
        let arriving = count_forward_arriving(g, s, n)?;
        lhs += inv.clone() * BigRational::from_integer(BigInt::from(out));
        rhs += inv * BigRational::from_integer(BigInt::from(arriving));
        per_class.push((out, arriving));
    }
    Ok(MassTransport {
        n,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        equal: lhs == rhs,
        per_class,
        lhs_exact: lhs,
        rhs_exact: rhs,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReverseReport {
    pub n: usize,
    /// σ_n^F(G) = max over classes.
    pub forward: u128,
    /// σ_n^B of the reversed graph.
    pub backward_reversed: u128,
    pub ratio: f64,
    /// The constant C = c|S|, with c the largest weight ratio between
    /// representatives; 1 for transitive families.
    pub c_bound: f64,
    pub exact_required: bool,
    pub holds: bool,
}

/// σ_n^F(G) against σ_n^B(reverse G): equal on transitive unimodular
/// families, within a factor C = c|S| otherwise.
pub fn reverse_count_check(g: &Graph, n: usize) -> Result<ReverseReport> {
    require_unimodular(g.as_ref(), "the reversal identity")?;
    let rev = graph::reverse(g);
    let reps = g.representatives();
    let mut forward = 0;
    let mut backward = 0;
    for &s in &reps {
        forward = forward.max(count_extendable(g.as_ref(), s, n, Mode::Forward)?);
        backward = backward.max(count_extendable(rev.as_ref(), s, n, Mode::Backward)?);
    }
    let weights: Vec<f64> = reps
        .iter()
        .map(|&s| g.weight(s).to_f64().unwrap_or(1.0))
        .collect();
    let wmax = weights.iter().copied().fold(f64::MIN, f64::max);
    let wmin = weights.iter().copied().fold(f64::MAX, f64::min);
    let exact_required = reps.len() == 1;
    let c_bound = if exact_required {
        1.0
    } else {
        (wmax / wmin) * reps.len() as f64
    };
    let ratio = if backward == 0 {
        f64::INFINITY
    } else {
        forward as f64 / backward as f64
    };
    let holds = if exact_required {
        forward == backward
    } else {
        forward as f64 <= c_bound * backward as f64 && backward as f64 <= c_bound * forward as f64
    };
    Ok(ReverseReport {
        n,
        forward,
        backward_reversed: backward,
        ratio,
        c_bound,
        exact_required,
        holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub delta: f64,
    pub alpha: String,
    pub max_degree: usize,
    pub sigma: String,
    pub few_term: String,
    pub tail_term: String,
    pub rhs: String,
    pub holds: bool,
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    r
}

/// The finite form of the counting bound from the decomposition: with
/// sup counts σ_j and σ_j^B,
///
/// σ_n(v0) <= 2 Σ_{k <= δn} C(⌊n/α⌋, k) (2Δ)^k Σ_{j_1+..+j_k = n, j_i >= 1} Π σ^B_{j_i - 1}
///          + 2⌊n/α⌋ Σ_{2αδn <= j <= n} σ^B_j σ_{n-j}.
pub fn bound_inequality(g: &Graph, n: usize, alpha: Rational64, delta: f64) -> Result<BoundReport> {
    let origin = g.origin();
    let sigma_b: Vec<BigUint> = (0..=n)
        .map(|j| {
            Ok(BigUint::from(crate::enumerate::sup_over_classes(
                g.as_ref(),
                j,
                Mode::Backward,
            )?))
        })
        .collect::<Result<_>>()?;
    let sigma: Vec<BigUint> = (0..=n)
        .map(|j| Ok(BigUint::from(crate::enumerate::sigma_sup(g.as_ref(), j)?)))
        .collect::<Result<_>>()?;
    let lhs = BigUint::from(count_saws(g.as_ref(), origin, n)?);
    let n_over_alpha = (Rational64::from_integer(n as i64) / alpha)
        .floor()
        .to_integer() as u64;
    let delta_n = (delta * n as f64 + 1e-9).floor() as usize;
    let delta_n = delta_n.min(n);
    let two_delta = BigUint::from(2 * g.max_degree() as u64);

    // compositions[k][m] = Σ over j_1..j_k >= 1 summing to m of Π σ^B_{j_i - 1}
    let mut compositions: HashMap<(usize, usize), BigUint> = HashMap::new();
    compositions.insert((0, 0), BigUint::one());
    for k in 1..=delta_n {
        for m in 0..=n {
            let mut total = BigUint::zero();
            for j in 1..=m {
                if let Some(prev) = compositions.get(&(k - 1, m - j)) {
                    total += prev * &sigma_b[j - 1];
                }
            }
            compositions.insert((k, m), total);
        }
    }
    let mut few = BigUint::zero();
    for k in 0..=delta_n {
        let comp = compositions.get(&(k, n)).cloned().unwrap_or_default();
        few += binomial(n_over_alpha, k as u64) * two_delta.pow(k as u32) * comp;
    }
    few *= 2u32;
    let alpha_f = alpha.to_f64().unwrap_or(0.0);
    let j_min = (2.0 * alpha_f * delta * n as f64 - 1e-9).ceil().max(0.0) as usize;
    let mut tail = BigUint::zero();
    for j in j_min..=n {
        tail += &sigma_b[j] * &sigma[n - j];
    }
    tail *= BigUint::from(2 * n_over_alpha);
    let rhs = &few + &tail;
    Ok(BoundReport {
        n,
        delta,
        alpha: alpha.to_string(),
        max_degree: g.max_degree(),
        sigma: lhs.to_string(),
        few_term: few.to_string(),
        tail_term: tail.to_string(),
        rhs: rhs.to_string(),
        holds: lhs <= rhs,
    })
}
