//! Exact arc arithmetic on the unit circle.
//!
//! Rotation-alignment questions ("is there a phase z with z*x inside the
//! cone?") reduce to intersecting arcs of feasible phases, one arc per facet.
//! A facet value c != 0 admits exactly the quarter turn of phases z with
//! arg(z c) in [0, pi/2]; a zero facet value admits every phase for the closed
//! question and none for the open one. Working with arcs keeps these queries
//! exact instead of sampling.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::linalg::types::C64;

const DEDUP_EPS: f64 = 1e-12;

/// An arc on the unit circle: phases `start + t` for `t in [0, width]`, with
/// either bound possibly excluded. `start` is normalized to [0, TAU); `width`
/// lies in [0, TAU], and the arc may wrap past TAU.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub start: f64,
    pub width: f64,
    pub open_start: bool,
    pub open_end: bool,
}

fn norm_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

impl Arc {
    /// `None` when the data describes an empty set (negative width, or a
    /// single point with an excluded end).
    pub fn new(start: f64, width: f64, open_start: bool, open_end: bool) -> Option<Arc> {
        if !(start.is_finite() && width.is_finite()) || width < 0.0 {
            return None;
        }
        if width == 0.0 && (open_start || open_end) {
            return None;
        }
        Some(Arc { start: norm_angle(start), width: width.min(TAU), open_start, open_end })
    }

    pub fn closed(start: f64, width: f64) -> Option<Arc> {
        Arc::new(start, width, false, false)
    }

    pub fn open(start: f64, width: f64) -> Option<Arc> {
        Arc::new(start, width, true, true)
    }

    /// Unrolled end coordinate (may exceed TAU).
    pub fn end(&self) -> f64 {
        self.start + self.width
    }

    pub fn midpoint(&self) -> f64 {
        norm_angle(self.start + 0.5 * self.width)
    }

    pub fn contains(&self, theta: f64) -> bool {
        if self.width >= TAU {
            // full circle; a point can still be excluded only when both
            // flags are open AND it is the seam point
            if self.open_start || self.open_end {
                let d = norm_angle(theta - self.start);
                return d != 0.0;
            }
            return true;
        }
        let d = norm_angle(theta - self.start);
        if d == 0.0 {
            return !self.open_start;
        }
        if d < self.width {
            return true;
        }
        // d == width exactly, or outside
        if d == self.width {
            return !self.open_end;
        }
        false
    }
}

/// A finite union of pairwise disjoint arcs, kept in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcSet {
    arcs: Vec<Arc>,
}

impl ArcSet {
    pub fn empty() -> ArcSet {
        ArcSet { arcs: Vec::new() }
    }

    pub fn full() -> ArcSet {
        ArcSet { arcs: vec![Arc { start: 0.0, width: TAU, open_start: false, open_end: false }] }
    }

    pub fn single(arc: Arc) -> ArcSet {
        ArcSet { arcs: vec![arc] }
    }

    /// Builds the union of arbitrary pieces (sorted, deduplicated, merged).
    pub fn union(pieces: Vec<Arc>) -> ArcSet {
        canonicalize(pieces)
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1
            && self.arcs[0].width >= TAU
            && !self.arcs[0].open_start
            && !self.arcs[0].open_end
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Total angular measure.
    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(|a| a.width).sum()
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.arcs.iter().any(|a| a.contains(theta))
    }

    /// The widest member arc; ties go to the smallest start angle.
    pub fn widest(&self) -> Option<&Arc> {
        self.arcs.iter().max_by(|x, y| {
            x.width.total_cmp(&y.width).then(y.start.total_cmp(&x.start))
        })
    }

    pub fn intersect(&self, other: &ArcSet) -> ArcSet {
        let mut pieces = Vec::new();
        for a in &self.arcs {
            for b in &other.arcs {
                intersect_pair(a, b, &mut pieces);
            }
        }
        canonicalize(pieces)
    }
}

/// Intersects two single arcs by unrolling `b` one turn either way.
fn intersect_pair(a: &Arc, b: &Arc, out: &mut Vec<Arc>) {
    for k in [-TAU, 0.0, TAU] {
        let (blo, bhi) = (b.start + k, b.end() + k);
        let lo = a.start.max(blo);
        let hi = a.end().min(bhi);
        if hi < lo {
            continue;
        }
        let open_lo = if blo > a.start {
            b.open_start
        } else if blo < a.start {
            a.open_start
        } else {
            a.open_start || b.open_start
        };
        let open_hi = if bhi < a.end() {
            b.open_end
        } else if bhi > a.end() {
            a.open_end
        } else {
            a.open_end || b.open_end
        };
        if let Some(piece) = Arc::new(lo, hi - lo, open_lo, open_hi) {
            out.push(piece);
        }
    }
}

/// Sorts, deduplicates, and merges overlapping or closed-touching pieces.
fn canonicalize(mut pieces: Vec<Arc>) -> ArcSet {
    if pieces.is_empty() {
        return ArcSet::empty();
    }
    pieces.sort_by(|x, y| x.start.total_cmp(&y.start).then(y.width.total_cmp(&x.width)));
    pieces.dedup_by(|nxt, prev| {
        (nxt.start - prev.start).abs() < DEDUP_EPS
            && (nxt.width - prev.width).abs() < DEDUP_EPS
            && {
                // region duplicates: a closed bound absorbs an open one
                prev.open_start &= nxt.open_start;
                prev.open_end &= nxt.open_end;
                true
            }
    });

    let mut merged: Vec<Arc> = Vec::new();
    for piece in pieces {
        if let Some(last) = merged.last_mut() {
            let gap = piece.start - last.end();
            let touching = gap.abs() < DEDUP_EPS && !(last.open_end && piece.open_start);
            if touching || gap < -DEDUP_EPS {
                if piece.end() > last.end() {
                    last.width = (piece.end() - last.start).min(TAU);
                    last.open_end = piece.open_end;
                }
                continue;
            }
        }
        merged.push(piece);
    }
    // wrap-around merge: last piece spilling past TAU may meet the first
    if merged.len() > 1 {
        let last = *merged.last().expect("nonempty");
        let first = merged[0];
        let spill = last.end() - TAU;
        let gap = first.start - spill;
        if spill > -DEDUP_EPS && (gap < -DEDUP_EPS || (gap.abs() < DEDUP_EPS && !(last.open_end && first.open_start)))
        {
            let new_end = (first.end() + TAU).max(last.end());
            let last_mut = merged.last_mut().expect("nonempty");
            last_mut.width = (new_end - last_mut.start).min(TAU);
            last_mut.open_end = if first.end() + TAU > last.end() {
                first.open_end
            } else {
                last.open_end
            };
            merged.remove(0);
        }
    }
    if merged.len() == 1 && merged[0].width >= TAU - DEDUP_EPS {
        let a = merged[0];
        if !(a.open_start || a.open_end) {
            return ArcSet::full();
        }
    }
    ArcSet { arcs: merged }
}

/// Feasible phases z = e^{i theta} for one facet value `c`: arg(z c) must lie
/// in the first quarter turn, inclusively (closed) or exclusively (open).
/// A zero value imposes no constraint closed, an impossible one open.
pub fn quarter_arc_for(value: C64, open: bool) -> ArcSet {
    if value.norm() == 0.0 {
        return if open { ArcSet::empty() } else { ArcSet::full() };
    }
    let start = -value.arg();
    match Arc::new(start, FRAC_PI_2, open, open) {
        Some(a) => ArcSet::single(a),
        None => ArcSet::empty(),
    }
}

/// Exact phase-feasibility set for a list of facet values: the intersection
/// of the per-value quarter arcs.
pub fn arc_feasible(values: &[C64], open: bool) -> ArcSet {
    let mut set = ArcSet::full();
    for v in values {
        set = set.intersect(&quarter_arc_for(*v, open));
        if set.is_empty() {
            return set;
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::types::c;

    #[test]
    fn arc_contains_respects_open_flags() {
        let a = Arc::new(0.0, FRAC_PI_2, false, true).unwrap();
        assert!(a.contains(0.0));
        assert!(a.contains(0.7));
        assert!(!a.contains(FRAC_PI_2));
        assert!(!a.contains(3.0));
        let w = Arc::new(TAU - 0.1, 0.3, false, false).unwrap(); // wraps
        assert!(w.contains(TAU - 0.05));
        assert!(w.contains(0.1));
        assert!(!w.contains(0.3));
    }

    #[test]
    fn degenerate_arcs() {
        assert!(Arc::new(1.0, 0.0, false, false).is_some()); // closed point
        assert!(Arc::new(1.0, 0.0, true, false).is_none()); // open point = empty
        assert!(Arc::new(1.0, -0.5, false, false).is_none());
    }

    #[test]
    fn intersection_of_overlapping_quarters() {
        let a = ArcSet::single(Arc::closed(0.0, FRAC_PI_2).unwrap());
        let b = ArcSet::single(Arc::closed(FRAC_PI_2 / 2.0, FRAC_PI_2).unwrap());
        let i = a.intersect(&b);
        assert_eq!(i.arcs().len(), 1);
        assert!((i.measure() - FRAC_PI_2 / 2.0).abs() < 1e-14);
        assert!((i.arcs()[0].start - FRAC_PI_2 / 2.0).abs() < 1e-14);
    }

    #[test]
    fn intersection_across_wrap() {
        let a = ArcSet::single(Arc::closed(TAU - 0.2, 0.5).unwrap());
        let b = ArcSet::single(Arc::closed(0.1, 1.0).unwrap());
        let i = a.intersect(&b);
        assert_eq!(i.arcs().len(), 1);
        assert!((i.measure() - 0.2).abs() < 1e-13);
        assert!(i.contains(0.2));
        assert!(!i.contains(TAU - 0.1));
    }

    #[test]
    fn touching_closed_arcs_intersect_in_a_point() {
        let a = ArcSet::single(Arc::closed(0.0, 1.0).unwrap());
        let b = ArcSet::single(Arc::closed(1.0, 1.0).unwrap());
        let i = a.intersect(&b);
        assert_eq!(i.arcs().len(), 1);
        assert_eq!(i.measure(), 0.0);
        assert!(i.contains(1.0));
        // open version vanishes
        let ao = ArcSet::single(Arc::open(0.0, 1.0).unwrap());
        let bo = ArcSet::single(Arc::open(1.0, 1.0).unwrap());
        assert!(ao.intersect(&bo).is_empty());
    }

    #[test]
    fn quarter_arcs_from_facet_values() {
        // value on the positive real axis: feasible phases [0, pi/2]
        let s = quarter_arc_for(c(2.0, 0.0), false);
        assert!(s.contains(0.0) && s.contains(FRAC_PI_2) && !s.contains(2.0));
        // zero value: everything closed, nothing open
        assert!(quarter_arc_for(c(0.0, 0.0), false).is_full());
        assert!(quarter_arc_for(c(0.0, 0.0), true).is_empty());
        // open arcs exclude their endpoints
        let o = quarter_arc_for(c(2.0, 0.0), true);
        assert!(!o.contains(0.0) && o.contains(0.3) && !o.contains(FRAC_PI_2));
    }

    #[test]
    fn feasibility_of_value_lists() {
        // i*c rotates the arc by -pi/2; together with c the overlap is the
        // single phase 0 (closed) and empty (open)
        let vals = [c(1.0, 0.0), c(0.0, 1.0)];
        let closed = arc_feasible(&vals, false);
        assert!((closed.measure() - 0.0).abs() < 1e-14);
        assert!(closed.contains(0.0));
        assert!(arc_feasible(&vals, true).is_empty());
        // incompatible: c and -c
        let bad = [c(1.0, 0.0), c(-1.0, 0.0)];
        assert!(arc_feasible(&bad, false).is_empty());
    }

    #[test]
    fn grid_agreement_random_quarters() {
        use crate::rng::SplitMix64;
        let mut r = SplitMix64::new(99);
        for _ in 0..40 {
            let m = 1 + r.below(4) as usize;
            let vals: Vec<C64> =
                (0..m).map(|_| c(r.uniform(-1.0, 1.0), r.uniform(-1.0, 1.0))).collect();
            for &open in &[false, true] {
                let set = arc_feasible(&vals, open);
                for g in 0..733 {
                    let theta = TAU * g as f64 / 733.0;
                    let brute = vals.iter().all(|v| {
                        let w = c(theta.cos(), theta.sin()) * v;
                        if w.norm() == 0.0 {
                            return !open;
                        }
                        let ang = w.arg();
                        if open {
                            ang > 1e-12 && ang < FRAC_PI_2 - 1e-12
                        } else {
                            (-1e-12..=FRAC_PI_2 + 1e-12).contains(&ang)
                        }
                    });
                    let got = set.contains(theta);
                    // skip points within grid slack of an arc boundary
                    let near_boundary = set
                        .arcs()
                        .iter()
                        .chain(ArcSet::full().arcs())
                        .any(|a| {
                            let d1 = norm_angle(theta - a.start);
                            let d2 = norm_angle(theta - a.end());
                            d1.min(TAU - d1).min(d2.min(TAU - d2)) < 1e-9
                        })
                        || vals.iter().any(|v| {
                            let w = c(theta.cos(), theta.sin()) * v;
                            w.norm() > 0.0
                                && (w.arg().abs() < 1e-9
                                    || (w.arg() - FRAC_PI_2).abs() < 1e-9)
                        });
                    if !near_boundary {
                        assert_eq!(got, brute, "theta={theta} vals={vals:?} open={open}");
                    }
                }
            }
        }
    }
}
