//! Finite unions of arcs on the unit circle.
//!
//! Endpoints are fixed-point fractions of a turn (`TURN` ticks per full
//! circle), so join, meet, complement and measure are exact integer
//! arithmetic. Angles are converted by rounding to the nearest tick.

use std::f64::consts::TAU;

/// Ticks per full turn.
pub const TURN: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ArcSet {
    /// Sorted, disjoint, non-adjacent half-open intervals `[s, e)` in `[0, TURN]`.
    ivs: Vec<(u64, u64)>,
}

pub fn ticks_of_angle(theta: f64) -> u64 {
    let t = theta.rem_euclid(TAU) / TAU;
    ((t * TURN as f64).round() as u64).min(TURN) % TURN
}

pub fn angle_of_ticks(t: u64) -> f64 {
    t as f64 / TURN as f64 * TAU
}

impl ArcSet {
    pub fn empty() -> Self {
        Self { ivs: Vec::new() }
    }

    pub fn full() -> Self {
        Self { ivs: vec![(0, TURN)] }
    }

    /// Counter-clockwise arc from `start` to `end` (radians). Wraps through 0 when `end < start`;
    /// equal endpoints give the empty set.
    pub fn arc(start: f64, end: f64) -> Self {
        Self::arc_ticks(ticks_of_angle(start), ticks_of_angle(end))
    }

    pub fn arc_ticks(s: u64, e: u64) -> Self {
        let (s, e) = (s % TURN, e % TURN);
        if s == e {
            return Self::empty();
        }
        if s < e {
            return Self { ivs: vec![(s, e)] };
        }
        Self::from_intervals(vec![(0, e), (s, TURN)])
    }

    pub fn from_arcs(arcs: &[(f64, f64)]) -> Self {
        arcs.iter().fold(Self::empty(), |acc, &(s, e)| acc.join(&Self::arc(s, e)))
    }

    /// Normalizes arbitrary intervals inside `[0, TURN]`.
    pub fn from_intervals(mut ivs: Vec<(u64, u64)>) -> Self {
        ivs.retain(|&(s, e)| s < e);
        ivs.sort_unstable();
        let mut out: Vec<(u64, u64)> = Vec::with_capacity(ivs.len());
        for (s, e) in ivs {
            assert!(e <= TURN, "interval end beyond a full turn");
            match out.last_mut() {
                Some(last) if s <= last.1 => last.1 = last.1.max(e),
                _ => out.push((s, e)),
            }
        }
        Self { ivs: out }
    }

    /// Cover of the grid cells `[j, j+1) * TURN / g` whose flag is set.
    pub fn from_cells(mask: &[bool]) -> Self {
        let g = mask.len() as u64;
        let ivs = mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| (j as u64 * TURN / g, (j as u64 + 1) * TURN / g))
            .collect();
        Self::from_intervals(ivs)
    }

    pub fn intervals(&self) -> &[(u64, u64)] {
        &self.ivs
    }

    /// Arcs as `(start, end)` angles in radians, with a piece crossing 0 reported once.
    pub fn arcs(&self) -> Vec<(f64, f64)> {
        self.circular_intervals()
            .into_iter()
            .map(|(s, e)| (angle_of_ticks(s), angle_of_ticks(e % TURN)))
            .collect()
    }

    /// Intervals with the piece ending at `TURN` glued to the piece starting at 0; the glued
    /// piece has `e > TURN`.
    pub fn circular_intervals(&self) -> Vec<(u64, u64)> {
        let mut v = self.ivs.clone();
        if v.len() >= 2 && v[0].0 == 0 && v[v.len() - 1].1 == TURN {
            let first = v.remove(0);
            let last = v.last_mut().expect("nonempty");
            last.1 = TURN + first.1;
        }
        v
    }

    pub fn ticks(&self) -> u64 {
        self.ivs.iter().map(|(s, e)| e - s).sum()
    }

    /// Normalized Lebesgue measure.
    pub fn measure(&self) -> f64 {
        self.ticks() as f64 / TURN as f64
    }

    pub fn is_empty(&self) -> bool {
        self.ivs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.ivs == [(0, TURN)]
    }

    pub fn contains_ticks(&self, t: u64) -> bool {
        let t = t % TURN;
        self.ivs.iter().any(|&(s, e)| s <= t && t < e)
    }

    /// Membership in the closure.
    pub fn closure_contains_ticks(&self, t: u64) -> bool {
        let t = t % TURN;
        self.ivs.iter().any(|&(s, e)| s <= t && t <= e) || (t == 0 && self.ivs.last().is_some_and(|l| l.1 == TURN))
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.contains_ticks(ticks_of_angle(theta))
    }

    pub fn join(&self, other: &ArcSet) -> ArcSet {
        let mut v = self.ivs.clone();
        v.extend_from_slice(&other.ivs);
        Self::from_intervals(v)
    }

    pub fn meet(&self, other: &ArcSet) -> ArcSet {
        let (a, b) = (&self.ivs, &other.ivs);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let s = a[i].0.max(b[j].0);
            let e = a[i].1.min(b[j].1);
            if s < e {
                out.push((s, e));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { ivs: out }
    }

    pub fn complement(&self) -> ArcSet {
        let mut out = Vec::with_capacity(self.ivs.len() + 1);
        let mut cur = 0;
        for &(s, e) in &self.ivs {
            if s > cur {
                out.push((cur, s));
            }
            cur = e;
        }
        if cur < TURN {
            out.push((cur, TURN));
        }
        Self { ivs: out }
    }

    pub fn difference(&self, other: &ArcSet) -> ArcSet {
        self.meet(&other.complement())
    }

    pub fn is_subset(&self, other: &ArcSet) -> bool {
        self.difference(other).is_empty()
    }

    /// `m(self \ other) <= tol`.
    pub fn essentially_subset(&self, other: &ArcSet, tol: f64) -> bool {
        self.difference(other).measure() <= tol
    }

    pub fn essentially_equal(&self, other: &ArcSet, tol: f64) -> bool {
        self.essentially_subset(other, tol) && other.essentially_subset(self, tol)
    }
}

/// Join of a family; empty family gives the empty set.
pub fn join_all<'a>(sets: impl IntoIterator<Item = &'a ArcSet>) -> ArcSet {
    sets.into_iter().fold(ArcSet::empty(), |acc, s| acc.join(s))
}

/// Meet of a family; empty family gives the full circle.
pub fn meet_all<'a>(sets: impl IntoIterator<Item = &'a ArcSet>) -> ArcSet {
    sets.into_iter().fold(ArcSet::full(), |acc, s| acc.meet(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn complement_covers_circle() {
        let a = ArcSet::arc(0.0, PI);
        let u = a.join(&a.complement());
        assert!(u.is_full());
        assert_eq!(u.measure(), 1.0);
        assert!(a.meet(&a.complement()).is_empty());
        assert_eq!(a.measure(), 0.5);
    }

    #[test]
    fn nested_meet() {
        let outer = ArcSet::arc(0.5, 2.5);
        let inner = ArcSet::arc(1.0, 2.0);
        assert_eq!(outer.meet(&inner), inner);
    }

    #[test]
    fn wrapping_arc() {
        let a = ArcSet::arc(1.5 * PI, 0.5 * PI);
        assert_eq!(a.measure(), 0.5);
        assert!(a.contains(0.0));
        assert!(!a.contains(PI));
        let c = a.arcs();
        assert_eq!(c.len(), 1);
        assert!((c[0].0 - 1.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn cells_round_trip() {
        let mut mask = vec![false; 16];
        mask[3] = true;
        mask[4] = true;
        mask[15] = true;
        let a = ArcSet::from_cells(&mask);
        assert_eq!(a.ticks(), 3 * TURN / 16);
        assert_eq!(a.intervals().len(), 2);
    }
}
