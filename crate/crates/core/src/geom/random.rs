use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ArcComponent, Component, Config, CsCurve, KappaParams, Point2, SegmentComponent};
use crate::dubins::solve_csc;
use crate::error::{Error, Result};
use crate::validation::validate_cs;

const MAX_ATTEMPTS: usize = 32;
const MIN_PIECE: f64 = 1e-6;

/// Random curve from `x` to `y`: a walk of `complexity_budget - 3` arcs and
/// segments leaving `x` in a random direction, closed up by the minimal CSC
/// word into `y` with a random final heading. Deterministic per seed.
pub fn random_curve(x: Point2, y: Point2, kappa: KappaParams, complexity_budget: usize, seed: u64) -> Result<CsCurve> {
    if complexity_budget < 3 {
        return Err(Error::Precondition(format!("complexity budget must be at least 3, got {complexity_budget}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let start = Config::new(x, rng.gen_range(-PI..PI));
        let mut comps = random_walk(&mut rng, start, complexity_budget - 3, kappa.radius());
        let tail = comps.last().map_or(start, Component::end_config);
        let goal = Config::new(y, rng.gen_range(-PI..PI));
        let Ok(sol) = solve_csc(tail, goal, kappa) else {
            continue;
        };
        let pieces: Vec<_> = sol.best.pieces().into_iter().filter(|c| c.length() >= super::EPS_DEGENERATE).collect();
        // the heading of a very short segment is ill-conditioned, so later
        // surgery on it can tip its joints over the tolerance
        if comps.iter().chain(&pieces).any(|c| c.length() < MIN_PIECE) {
            continue;
        }
        comps.extend(pieces);
        if let Ok(c) = CsCurve::new(kappa, comps) {
            if validate_cs(&c).valid {
                return Ok(c);
            }
        }
    }
    Err(Error::Generation(format!("no closable walk after {MAX_ATTEMPTS} draws")))
}

/// `n` components chained from `start`: arcs of radius `r` with sweeps in
/// `(-pi/2, pi/2)` and segments with lengths in `(0, r)`, chosen evenly.
pub fn random_walk<R: Rng>(rng: &mut R, start: Config, n: usize, r: f64) -> Vec<Component> {
    let mut out = Vec::with_capacity(n);
    let mut at = start;
    for _ in 0..n {
        let c = if rng.gen_bool(0.5) {
            let sweep = rng.gen_range(-FRAC_PI_2..FRAC_PI_2);
            Component::Arc(ArcComponent::from_config(at, r, sweep))
        } else {
            let len = rng.gen_range(0.0..r);
            Component::Segment(SegmentComponent::from_config(at, len))
        };
        at = c.end_config();
        out.push(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use super::*;
    use crate::validation::validate_cs;

    #[test]
    fn deterministic_and_valid() {
        let k = KappaParams::unit();
        let (x, y) = (Point2::ORIGIN, Point2::new(1.0, 0.0));
        for seed in 0..50 {
            let a = random_curve(x, y, k, 7, seed).unwrap();
            let b = random_curve(x, y, k, 7, seed).unwrap();
            assert_eq!(a, b);
            assert!(validate_cs(&a).valid, "seed {seed}");
            assert!(a.start_point().dist(x) < 1e-12);
            assert!(a.end_point().dist(y) < 1e-9);
            assert!(a.complexity() <= 7);
        }
    }

    #[test]
    fn closed_samples_are_at_least_a_circle() {
        let k = KappaParams::unit();
        for seed in 0..300 {
            let c = random_curve(Point2::ORIGIN, Point2::ORIGIN, k, 5, seed).unwrap();
            assert!(c.total_length() >= TAU - 1e-9, "seed {seed}: {}", c.total_length());
        }
    }

    #[test]
    fn budget_below_three_is_rejected() {
        assert!(random_curve(Point2::ORIGIN, Point2::ORIGIN, KappaParams::unit(), 2, 0).is_err());
    }
}
