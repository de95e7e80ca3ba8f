//! Chain of non-crossing paths through the finite branch points.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default clearance as a fraction of a branch point's nearest-neighbour
/// distance.
pub const DEFAULT_CLEARANCE: f64 = 0.25;

const TWO_OPT_BUDGET: usize = 10_000;
const ARC_CHORDS: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    Segment {
        #[serde(with = "pair")]
        from: Complex64,
        #[serde(with = "pair")]
        to: Complex64,
    },
    /// `center + radius * exp(i (start_angle + s * sweep))`, `s` in `[0, 1]`.
    Arc {
        #[serde(with = "pair")]
        center: Complex64,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
}

mod pair {
    use num_complex::Complex64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([c.re, c.im])
    }
}

impl Piece {
    pub fn point(&self, s: f64) -> Complex64 {
        match *self {
            Piece::Segment { from, to } => from + (to - from) * s,
            Piece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => center + Complex64::from_polar(radius, start_angle + s * sweep),
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        match *self {
            Piece::Segment { to, .. } => to,
            arc => arc.point(1.0),
        }
    }

    /// Polyline approximation, used only for geometric checks.
    fn polyline(&self) -> Vec<Complex64> {
        match self {
            Piece::Segment { from, to } => vec![*from, *to],
            arc => (0..=ARC_CHORDS)
                .map(|k| arc.point(k as f64 / ARC_CHORDS as f64))
                .collect(),
        }
    }

    pub fn distance_to(&self, p: Complex64) -> f64 {
        match *self {
            Piece::Segment { from, to } => point_segment_distance(p, from, to),
            Piece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let d = p - center;
                if d.norm() == 0.0 {
                    return radius;
                }
                let rel = wrap_angle(d.arg() - start_angle);
                let along = if sweep >= 0.0 {
                    rel.rem_euclid(2.0 * PI) <= sweep
                } else {
                    (-rel).rem_euclid(2.0 * PI) <= -sweep
                };
                if along {
                    (d.norm() - radius).abs()
                } else {
                    (p - self.start()).norm().min((p - self.end()).norm())
                }
            }
        }
    }
}

/// Path from `points[from]` to `points[to]` made of consecutive pieces.
#[derive(Debug, Clone, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub pieces: Vec<Piece>,
}

impl Edge {
    pub fn has_detour(&self) -> bool {
        self.pieces.iter().any(|p| matches!(p, Piece::Arc { .. }))
    }

    fn polyline(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::new();
        for piece in &self.pieces {
            let pts = piece.polyline();
            let skip = usize::from(!out.is_empty());
            out.extend(pts.into_iter().skip(skip));
        }
        out
    }
}

/// Branch points in chain order joined by edges `points[i] -> points[i+1]`.
#[derive(Debug, Clone, Serialize)]
pub struct PathSystem {
    #[serde(serialize_with = "serialize_points")]
    pub points: Vec<Complex64>,
    /// `order[i]` is the index in the cover's branch list of `points[i]`.
    pub order: Vec<usize>,
    pub edges: Vec<Edge>,
    pub clearance: f64,
}

fn serialize_points<S: serde::Serializer>(pts: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(pts.iter().map(|c| [c.re, c.im]))
}

pub(crate) fn wrap_angle(a: f64) -> f64 {
    let mut a = a.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

pub fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// True when closed segments `ab` and `cd` share a point.
pub fn segments_intersect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |p: Complex64, q: Complex64, r: Complex64, o: f64| {
        o == 0.0
            && r.re >= p.re.min(q.re)
            && r.re <= p.re.max(q.re)
            && r.im >= p.im.min(q.im)
            && r.im <= p.im.max(q.im)
    };
    on(a, b, c, d1) || on(a, b, d, d2) || on(c, d, a, d3) || on(c, d, b, d4)
}

/// Distance from each point to its nearest neighbour.
pub fn spacings(points: &[Complex64]) -> Vec<f64> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            points
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, q)| (p - q).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Greedy nearest-neighbour chain from the leftmost point, untangled by 2-opt.
pub fn chain_order(points: &[Complex64]) -> Result<Vec<usize>> {
    let n = points.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let start = (0..n)
        .min_by(|&i, &j| {
            points[i]
                .re
                .total_cmp(&points[j].re)
                .then(points[i].im.total_cmp(&points[j].im))
        })
        .unwrap();
    let mut order = vec![start];
    let mut used = vec![false; n];
    used[start] = true;
    while order.len() < n {
        let cur = points[*order.last().unwrap()];
        let next = (0..n)
            .filter(|&j| !used[j])
            .min_by(|&i, &j| (points[i] - cur).norm().total_cmp(&(points[j] - cur).norm()))
            .unwrap();
        used[next] = true;
        order.push(next);
    }

    let mut budget = TWO_OPT_BUDGET;
    'restart: loop {
        for i in 0..n.saturating_sub(1) {
            for j in i + 2..n - 1 {
                let (a, b) = (points[order[i]], points[order[i + 1]]);
                let (c, d) = (points[order[j]], points[order[j + 1]]);
                if segments_intersect(a, b, c, d) {
                    if budget == 0 {
                        return Err(Error::PathConstructionFailed(format!(
                            "2-opt could not untangle chain over {points:?}"
                        )));
                    }
                    budget -= 1;
                    order[i + 1..=j].reverse();
                    continue 'restart;
                }
            }
        }
        break;
    }
    Ok(order)
}

impl PathSystem {
    /// Chain through `points` in the greedy/2-opt order.
    pub fn build(points: &[Complex64], clearance: f64) -> Result<PathSystem> {
        if points.len() < 3 {
            return Err(Error::PathConstructionFailed(format!(
                "need at least 3 finite branch points, got {}",
                points.len()
            )));
        }
        let order = chain_order(points)?;
        PathSystem::with_order(points, &order, clearance)
    }

    /// Chain through `points` in the given order, detouring around any
    /// branch point an edge passes too closely.
    pub fn with_order(points: &[Complex64], order: &[usize], clearance: f64) -> Result<PathSystem> {
        if !(clearance > 0.0 && clearance < 0.5) {
            return Err(Error::InvalidConfig(format!(
                "clearance must lie in (0, 0.5), got {clearance}"
            )));
        }
        let chain: Vec<Complex64> = order.iter().map(|&i| points[i]).collect();
        let spacing = spacings(&chain);
        let n = chain.len();
        let mut edges = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n.saturating_sub(1) {
            let pieces = detoured_segment(&chain, &spacing, i, i + 1, clearance)?;
            edges.push(Edge {
                from: i,
                to: i + 1,
                pieces,
            });
        }
        let ps = PathSystem {
            points: chain,
            order: order.to_vec(),
            edges,
            clearance,
        };
        ps.check()?;
        Ok(ps)
    }

    /// Verifies clearance and that edges meet only at shared endpoints.
    pub fn check(&self) -> Result<()> {
        let spacing = spacings(&self.points);
        for e in &self.edges {
            for (k, &p) in self.points.iter().enumerate() {
                if k == e.from || k == e.to {
                    continue;
                }
                let need = self.clearance * spacing[k];
                let got = e
                    .pieces
                    .iter()
                    .map(|pc| pc.distance_to(p))
                    .fold(f64::INFINITY, f64::min);
                if got < need * (1.0 - 1e-9) {
                    return Err(Error::PathConstructionFailed(format!(
                        "edge {}->{} passes within {got:e} of branch point {k} (need {need:e})",
                        e.from, e.to
                    )));
                }
            }
        }
        let lines: Vec<Vec<Complex64>> = self.edges.iter().map(Edge::polyline).collect();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let shared = (j == i + 1).then(|| self.points[self.edges[j].from]);
                if polylines_cross(&lines[i], &lines[j], shared) {
                    return Err(Error::PathConstructionFailed(format!(
                        "edges {i} and {j} cross"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("path system serializes")
    }
}

fn polylines_cross(a: &[Complex64], b: &[Complex64], shared: Option<Complex64>) -> bool {
    for (ia, sa) in a.windows(2).enumerate() {
        for (ib, sb) in b.windows(2).enumerate() {
            // Consecutive edges touch at their common vertex: the last
            // segment of `a` and the first of `b`.
            if let Some(s) = shared {
                if ia == a.len() - 2 && ib == 0 && sa[1] == s && sb[0] == s {
                    let da = sa[0] - s;
                    let db = sb[1] - s;
                    let collinear_back = cross(da, db).abs() <= 1e-12 * da.norm() * db.norm()
                        && (da.re * db.re + da.im * db.im) > 0.0;
                    if collinear_back {
                        return true;
                    }
                    continue;
                }
            }
            if segments_intersect(sa[0], sa[1], sb[0], sb[1]) {
                return true;
            }
        }
    }
    false
}

/// Straight edge `chain[i] -> chain[j]` with circular detours around every
/// other branch point closer than its clearance radius.
fn detoured_segment(
    chain: &[Complex64],
    spacing: &[f64],
    i: usize,
    j: usize,
    clearance: f64,
) -> Result<Vec<Piece>> {
    let (a, b) = (chain[i], chain[j]);
    let dir = b - a;
    let len2 = dir.norm_sqr();
    let mut offenders: Vec<(f64, usize)> = chain
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .filter(|&(k, &p)| point_segment_distance(p, a, b) < clearance * spacing[k])
        .map(|(k, &p)| (((p - a).re * dir.re + (p - a).im * dir.im) / len2, k))
        .collect();
    offenders.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut pieces = Vec::new();
    let mut cursor = a;
    for &(_, k) in &offenders {
        let p = chain[k];
        let rho = clearance * spacing[k];
        // |a + t dir - p|^2 = rho^2
        let w = a - p;
        let qa = len2;
        let qb = 2.0 * (w.re * dir.re + w.im * dir.im);
        let qc = w.norm_sqr() - rho * rho;
        let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
        let t1 = (-qb - disc) / (2.0 * qa);
        let t2 = (-qb + disc) / (2.0 * qa);
        let p1 = a + dir * t1;
        let p2 = a + dir * t2;
        let phi1 = (p1 - p).arg();
        let phi2 = (p2 - p).arg();
        let mut sweep = wrap_angle(phi2 - phi1);
        let off_line = cross(dir, p - a).abs() / dir.norm();
        if off_line <= 1e-12 * rho.max(f64::MIN_POSITIVE) || sweep.abs() >= PI - 1e-12 {
            sweep = semicircle_side(chain, k, i, j, phi1)?;
        }
        pieces.push(Piece::Segment { from: cursor, to: p1 });
        pieces.push(Piece::Arc {
            center: p,
            radius: rho,
            start_angle: phi1,
            sweep,
        });
        cursor = p2;
    }
    pieces.push(Piece::Segment { from: cursor, to: b });
    Ok(pieces)
}

/// The edge runs straight through `chain[k]`; go around on whichever side
/// the point's own chain edges avoid.
fn semicircle_side(chain: &[Complex64], k: usize, i: usize, j: usize, phi1: f64) -> Result<f64> {
    let p = chain[k];
    let neighbours: Vec<f64> = [k.checked_sub(1), Some(k + 1)]
        .into_iter()
        .flatten()
        .filter(|&m| m < chain.len() && m != i && m != j)
        .map(|m| (chain[m] - p).arg())
        .collect();
    let blocked = |sweep: f64| {
        neighbours.iter().any(|&ang| {
            let rel = if sweep > 0.0 {
                (ang - phi1).rem_euclid(2.0 * PI)
            } else {
                (phi1 - ang).rem_euclid(2.0 * PI)
            };
            rel > 0.0 && rel < PI
        })
    };
    if !blocked(PI) {
        Ok(PI)
    } else if !blocked(-PI) {
        Ok(-PI)
    } else {
        Err(Error::PathConstructionFailed(format!(
            "no free side to detour around branch point {k}"
        )))
    }
}
