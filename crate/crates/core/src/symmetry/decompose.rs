//! Splitting a rooted SAW into backward-extendable pieces along a reference
//! ray or quasi-geodesic.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::geodesic::QuasiGeodesic;
use crate::error::{Error, Result};
use crate::extend::{self, Side};
use crate::graph::{GraphFamily, VertexId};
use crate::walk::Walk;

#[derive(Clone, Copy, Debug)]
pub enum Reference<'a> {
    /// A geodesic ray `v_0, v_1, ...` of an undirected family.
    Ray(&'a [VertexId]),
    Quasi(&'a QuasiGeodesic),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    Geodesic,
    FewPlus,
    FewMinus,
    ManyBoth,
}

impl CaseTag {
    pub fn label(self) -> &'static str {
        match self {
            CaseTag::Geodesic => "geodesic",
            CaseTag::FewPlus => "few-plus",
            CaseTag::FewMinus => "few-minus",
            CaseTag::ManyBoth => "many-both",
        }
    }
}

/// Walk indices `from..=to` of the original walk, and the piece that has
/// to be backward-extendable.
#[derive(Clone, Debug, Serialize)]
pub struct Segment {
    pub from: usize,
    pub to: usize,
    pub piece: Walk,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub case: CaseTag,
    /// `(walk index, reference index)` of every visit to the non-negative
    /// half of the reference, in walk order.
    pub s_plus: Vec<(usize, i64)>,
    pub s_minus: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
    /// Number of pieces coming from the hitting set (0 in the tail case).
    pub k: usize,
    /// Many-both case: `|a - b|` against `α (I_+ + I_-)`.
    pub separation: Option<(usize, f64)>,
    /// Many-both case: the tail length against `2αδn`.
    pub tail: Option<(usize, f64)>,
    pub all_certified: bool,
}

fn certify(g: &dyn GraphFamily, from: usize, to: usize, piece: Walk) -> Result<Segment> {
    let certified = extend::is_extendable(g, piece.as_ref(), Side::Backward)?;
    Ok(Segment {
        from,
        to,
        piece,
        certified,
    })
}

/// Cut `w` at the walk indices in `cuts` (the first is 0). Each piece from
/// one cut to the next, and the last one to the end, loses its final vertex.
fn hitting_pieces(g: &dyn GraphFamily, w: &Walk, cuts: &[usize]) -> Result<Vec<Segment>> {
    let n = w.len();
    let mut out = Vec::new();
    for (x, &t) in cuts.iter().enumerate() {
        let next = cuts.get(x + 1).copied().unwrap_or(n);
        if next == t {
            continue;
        }
        out.push(certify(g, t, next, w.sub_walk(t, next - 1))?);
    }
    Ok(out)
}

/// Decompose a SAW starting at the reference's `v_0`.
///
/// With a ray, let `v_L` be the furthest ray vertex on `w`, visited at step
/// `t`; the pieces are `w_t, ..., w_0` and `w_t, ..., w_n`. With a
/// quasi-geodesic, `S_+` and `S_-` collect the visits to `v_i` with
/// `i >= 0` and `i <= 0`; when one of them has at most `δn` elements the
/// walk is cut there, otherwise the tail after the earlier of the two
/// extreme visits is the piece.
pub fn decompose_walk(
    g: &dyn GraphFamily,
    w: &Walk,
    reference: Reference<'_>,
    delta: f64,
) -> Result<Decomposition> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::Parse(format!(
            "delta must lie in (0, 1/2), got {delta}"
        )));
    }
    w.validate(g)?;
    match reference {
        Reference::Ray(ray) => decompose_on_ray(g, w, ray),
        Reference::Quasi(q) => decompose_on_quasi(g, w, q, delta),
    }
}

fn decompose_on_ray(g: &dyn GraphFamily, w: &Walk, ray: &[VertexId]) -> Result<Decomposition> {
    if ray.first() != Some(&w.start()) {
        return Err(Error::NotRooted);
    }
    let index: HashMap<VertexId, i64> = ray
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as i64))
        .collect();
    let hits: Vec<(usize, i64)> = w
        .vertices
        .iter()
        .enumerate()
        .filter_map(|(t, v)| index.get(v).map(|&i| (t, i)))
        .collect();
    let &(t, _) = hits
        .iter()
        .max_by_key(|&&(_, i)| i)
        .expect("w_0 lies on the ray");
    let mut back = w.vertices[..=t].to_vec();
    back.reverse();
    let minus = Walk::from_vertices(g, back)?;
    let segments = vec![
        certify(g, 0, t, minus)?,
        certify(g, t, w.len(), w.sub_walk(t, w.len()))?,
    ];
    let all_certified = segments.iter().all(|s| s.certified);
    Ok(Decomposition {
        case: CaseTag::Geodesic,
        s_plus: hits,
        s_minus: Vec::new(),
        segments,
        k: 2,
        separation: None,
        tail: None,
        all_certified,
    })
}

fn decompose_on_quasi(
    g: &dyn GraphFamily,
    w: &Walk,
    q: &QuasiGeodesic,
    delta: f64,
) -> Result<Decomposition> {
    if w.start() != q.v(0) {
        return Err(Error::NotRooted);
    }
    let n = w.len();
    let hits: Vec<(usize, i64)> = w
        .vertices
        .iter()
        .enumerate()
        .filter_map(|(t, &v)| q.index_of(v).map(|i| (t, i)))
        .collect();
    let s_plus: Vec<(usize, i64)> = hits.iter().copied().filter(|&(_, i)| i >= 0).collect();
    let s_minus: Vec<(usize, i64)> = hits.iter().copied().filter(|&(_, i)| i <= 0).collect();
    let limit = delta * n as f64;
    let alpha = q.alpha.to_f64().unwrap_or(0.0);
    let few = |set: &[(usize, i64)], case| -> Result<Decomposition> {
        let cuts: Vec<usize> = set.iter().map(|&(t, _)| t).collect();
        let segments = hitting_pieces(g, w, &cuts)?;
        let all_certified = segments.iter().all(|s| s.certified);
        Ok(Decomposition {
            case,
            s_plus: s_plus.clone(),
            s_minus: s_minus.clone(),
            k: segments.len(),
            segments,
            separation: None,
            tail: None,
            all_certified,
        })
    };
    if s_plus.len() as f64 <= limit {
        return few(&s_plus, CaseTag::FewPlus);
    }
    if s_minus.len() as f64 <= limit {
        return few(&s_minus, CaseTag::FewMinus);
    }
    let &(a, i_plus) = s_plus.iter().max_by_key(|&&(_, i)| i).expect("w_0 = v_0");
    let &(b, i_minus) = s_minus.iter().min_by_key(|&&(_, i)| i).expect("w_0 = v_0");
    let m = a.min(b);
    let segment = certify(g, m, n, w.sub_walk(m, n))?;
    let all_certified = segment.certified;
    Ok(Decomposition {
        case: CaseTag::ManyBoth,
        s_plus,
        s_minus,
        segments: vec![segment],
        k: 0,
        separation: Some((a.abs_diff(b), alpha * (i_plus - i_minus) as f64)),
        tail: Some((n - m, 2.0 * alpha * delta * n as f64)),
        all_certified,
    })
}
