use std::f64::consts::{PI, TAU};

use kappa_curves::dubins::{csc_chain, normalize, solve_csc, solve_word, WordKind, DEFAULT_LAMBDA};
use kappa_curves::geom::{
    find_parallel_tangents, normalize_angle, random_curve, self_intersections, ArcComponent, Component, Config,
    CsCurve, Curve, KappaParams, Point2, EPS_JOIN,
};
use kappa_curves::homotopy::{canonical_minimizer, move_type1, move_type3, reduce, verify_trace, HomotopyTrace, Side};
use kappa_curves::io::{emit_curve, parse_curve};
use kappa_curves::regions::{
    build_lens, class_count, classify_point, label_unchecked, random_lens_curve, random_outside_curve, ClassLabel,
};
use kappa_curves::validation::{validate, validate_cs, validate_sampled};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point2> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

fn config() -> impl Strategy<Value = Config> {
    (point(), -PI..PI).prop_map(|(p, h)| Config::new(p, h))
}

fn kappa() -> impl Strategy<Value = KappaParams> {
    (0.5..2.0f64).prop_map(|r| KappaParams::from_radius(r).unwrap())
}

fn curve() -> impl Strategy<Value = CsCurve> {
    (point(), point(), kappa(), 3usize..=6, any::<u64>())
        .prop_filter_map("no curve drawn", |(x, y, k, n, s)| random_curve(x, y, k, n, s).ok())
}

/// Chain of arcs with radii on both sides of `r`, valid or not.
fn loose_chain(start: Config, k: KappaParams, arcs: &[(f64, f64)]) -> CsCurve {
    let mut at = start;
    let comps: Vec<Component> = arcs
        .iter()
        .map(|&(scale, sweep)| {
            let c = Component::Arc(ArcComponent::from_config(at, scale * k.radius(), sweep));
            at = c.end_config();
            c
        })
        .collect();
    CsCurve::new(k, comps).unwrap()
}

// ---------------------------------------------------------------------------
// curves

/// Exact crossings between pairs of components, computed independently of
/// the library: circle and line intersection formulas filtered by the
/// component extents, with the joints between neighbours left out.
fn brute_crossings(c: &CsCurve) -> usize {
    let comps = c.components();
    let closed = c.start_point().dist(c.end_point()) <= EPS_JOIN;
    let on = |comp: &Component, q: Point2| -> bool {
        match comp {
            Component::Segment(s) => {
                let d = s.end - s.start;
                let t = (q - s.start).dot(d) / d.dot(d);
                (-1e-12..=1.0 + 1e-12).contains(&t)
            }
            Component::Arc(a) => {
                let ang = (q - a.center).angle();
                let u = (a.sweep.signum() * (ang - a.start_angle)).rem_euclid(TAU);
                u <= a.sweep.abs() + 1e-12 || TAU - u <= 1e-12
            }
        }
    };
    let circle = |comp: &Component| match comp {
        Component::Arc(a) => Some((a.center, a.radius)),
        Component::Segment(_) => None,
    };
    let mut hits: Vec<Point2> = Vec::new();
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            let (a, b) = (&comps[i], &comps[j]);
            let mut cand = Vec::new();
            match (circle(a), circle(b)) {
                (Some((p, r1)), Some((q, r2))) => {
                    let d = p.dist(q);
                    if d > 1e-12 && d <= r1 + r2 && d >= (r1 - r2).abs() {
                        let along = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
                        let h = (r1 * r1 - along * along).max(0.0).sqrt();
                        let e = (q - p) / d;
                        let m = p + e * along;
                        cand.push(m + e.perp() * h);
                        cand.push(m - e.perp() * h);
                    }
                }
                (None, None) => {
                    let (Component::Segment(s), Component::Segment(t)) = (a, b) else { unreachable!() };
                    let (d1, d2) = (s.end - s.start, t.end - t.start);
                    let den = d1.cross(d2);
                    if den.abs() > 1e-14 {
                        let u = (t.start - s.start).cross(d2) / den;
                        cand.push(s.start + d1 * u);
                    }
                }
                (Some((ctr, r)), None) | (None, Some((ctr, r))) => {
                    let s = if let Component::Segment(s) = if circle(a).is_none() { a } else { b } { s } else { unreachable!() };
                    let d = s.end - s.start;
                    let f = s.start - ctr;
                    let (qa, qb, qc) = (d.dot(d), 2.0 * f.dot(d), f.dot(f) - r * r);
                    let disc = qb * qb - 4.0 * qa * qc;
                    if disc >= 0.0 {
                        for sign in [-1.0, 1.0] {
                            cand.push(s.start + d * ((-qb + sign * disc.sqrt()) / (2.0 * qa)));
                        }
                    }
                }
            }
            for q in cand {
                if !(on(a, q) && on(b, q)) {
                    continue;
                }
                let joint = (j == i + 1 && q.dist(a.end_point()) < 1e-9)
                    || (closed && i == 0 && j == comps.len() - 1 && q.dist(c.start_point()) < 1e-9);
                if !joint && !hits.iter().any(|h| h.dist(q) < 1e-7) {
                    hits.push(q);
                }
            }
        }
    }
    hits.len()
}

proptest! {
    #[test]
    fn concatenation_adds_lengths(a in curve(), end in config()) {
        let b = csc_chain(&[a.end_config(), end], a.kappa()).unwrap();
        let ab = a.concatenate(&b).unwrap();
        prop_assert!((ab.total_length() - a.total_length() - b.total_length()).abs() <= 1e-12 * (1.0 + ab.total_length()));
    }

    #[test]
    fn valid_curves_are_tangent_continuous(c in curve()) {
        prop_assert!(validate_cs(&c).valid);
        for w in c.components().windows(2) {
            let (e, s) = (w[0].end_config(), w[1].start_config());
            prop_assert!(e.position.dist(s.position) <= EPS_JOIN);
            prop_assert!(normalize_angle(e.heading - s.heading).abs() <= EPS_JOIN);
        }
    }

    #[test]
    fn turning_past_a_half_turn_has_antiparallel_tangents(c in curve()) {
        prop_assume!(c.total_turning().abs() > PI);
        prop_assert!(!find_parallel_tangents(&Curve::Cs(c)).is_empty());
    }

    #[test]
    fn self_intersections_match_pairwise_count(c in curve()) {
        // arcs of one circle overlap along a whole piece, with no finite count
        let centers: Vec<Point2> = c.components().iter().filter_map(|k| match k {
            Component::Arc(a) => Some(a.center),
            Component::Segment(_) => None,
        }).collect();
        prop_assume!(centers.iter().enumerate().all(|(i, p)| centers[i + 1..].iter().all(|q| p.dist(*q) > 1e-9)));
        prop_assert_eq!(self_intersections(&c).len(), brute_crossings(&c));
    }

    #[test]
    fn tangent_matches_finite_differences(c in curve(), u in 0.0..1.0f64) {
        let h = 1e-5;
        let l = c.total_length();
        let s = h + u * (l - 2.0 * h);
        let fd = (c.evaluate(s + h).unwrap() - c.evaluate(s - h).unwrap()) / (2.0 * h);
        let t = Point2::from_angle(c.tangent(s).unwrap());
        prop_assert!(fd.dist(t) <= 10.0 * h * c.kappa().kappa(), "fd {:?} vs {:?}", fd, t);
    }
}

// ---------------------------------------------------------------------------
// validation

proptest! {
    #[test]
    fn sampled_estimator_agrees_with_exact_validation(c in curve()) {
        let k = c.kappa().kappa();
        let s = c.sample(0.01 * c.kappa().radius()).unwrap();
        let rep = validate_sampled(&s);
        prop_assert!(rep.max_curvature <= k * (1.0 + 1e-3), "{} vs {}", rep.max_curvature, k);
    }

    #[test]
    fn valid_concatenation_has_valid_parts(
        start in config(),
        k in kappa(),
        a in prop::collection::vec((0.7..1.5f64, -2.0..2.0f64), 1..4),
        b in prop::collection::vec((0.7..1.5f64, -2.0..2.0f64), 1..4),
    ) {
        let a = loose_chain(start, k, &a);
        let b = loose_chain(a.end_config(), k, &b);
        if validate_cs(&a.concatenate(&b).unwrap()).valid {
            prop_assert!(validate_cs(&a).valid && validate_cs(&b).valid);
        }
    }
}

// ---------------------------------------------------------------------------
// regions

proptest! {
    #[test]
    fn region_tags_are_mirror_symmetric(x in point(), dir in -PI..PI, d in 0.01..1.99f64, p in point()) {
        let y = x + Point2::from_angle(dir) * d;
        let lens = build_lens(x, y, KappaParams::unit()).unwrap();
        let v = p - x;
        let w = v.rotate(-dir);
        let mirrored = x + Point2::new(w.x, -w.y).rotate(dir);
        prop_assert_eq!(classify_point(&lens, p), classify_point(&lens, mirrored));
    }

    #[test]
    fn class_count_is_invariant_under_motions_and_scaling(
        x in point(), y in point(), k in kappa(), turn in -PI..PI, shift in point(), scale in 0.2..5.0f64,
    ) {
        let ratio = x.dist(y) / k.radius();
        prop_assume!(ratio > 1e-6 && (ratio - 2.0).abs() > 1e-6);
        let moved = |p: Point2| (p.rotate(turn) + shift) * scale;
        let k2 = KappaParams::new(k.kappa() / scale).unwrap();
        prop_assert_eq!(class_count(x, y, k), class_count(moved(x), moved(y), k2));
    }

    #[test]
    fn lens_endpoints_get_one_of_the_two_classes(x in point(), dir in -PI..PI, d in 0.01..1.99f64, n in 3usize..=6, seed in any::<u64>()) {
        let y = x + Point2::from_angle(dir) * d;
        let c = random_curve(x, y, KappaParams::unit(), n, seed).unwrap();
        let label = label_unchecked(&Curve::Cs(c.clone()));
        prop_assert!(matches!(label, ClassLabel::InLens | ClassLabel::NotInLens));
        prop_assert_eq!(label, label_unchecked(&Curve::Cs(c)));
    }

    #[test]
    fn accepted_traces_keep_their_class(c in curve(), z in 0.0..1.0f64, left in any::<bool>(), phi in -TAU..TAU) {
        let side = if left { Side::Left } else { Side::Right };
        if let Ok(t) = move_type1(&c, z * c.total_length(), side, phi, 8) {
            if verify_trace(&t).valid {
                let first = label_unchecked(&Curve::Cs(t.first().clone()));
                prop_assert!(t.frames.iter().all(|f| label_unchecked(&Curve::Cs(f.curve.clone())) == first));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// dubins

proptest! {
    #[test]
    fn words_reach_their_end_configuration(s in config(), e in config(), k in kappa()) {
        for w in WordKind::ALL {
            if let Some(word) = solve_word(w, s, e, k.radius()) {
                let end = word.pieces()[2].end_config();
                prop_assert!(end.position.dist(e.position) <= 1e-9);
                prop_assert!(normalize_angle(end.heading - e.heading).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn best_word_is_no_longer_than_any_candidate(s in config(), e in config(), k in kappa()) {
        let sol = solve_csc(s, e, k).unwrap();
        prop_assert!(sol.candidates.iter().all(|c| sol.best.length() <= c.length()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn normalization_keeps_endpoints_and_class(c in curve()) {
        let n = normalize(&Curve::Cs(c.clone()), DEFAULT_LAMBDA).unwrap();
        prop_assert!(n.start_point().dist(c.start_point()) <= EPS_JOIN);
        prop_assert!(n.end_point().dist(c.end_point()) <= EPS_JOIN);
        prop_assert!(validate_cs(&n).valid, "{:?}", validate_cs(&n).first_violation());
        prop_assert_eq!(label_unchecked(&Curve::Cs(n)), label_unchecked(&Curve::Cs(c)));
    }
}

// ---------------------------------------------------------------------------
// homotopy

fn frames_of<'a>(t: &'a HomotopyTrace, p0: f64, p1: f64) -> impl Iterator<Item = &'a CsCurve> {
    t.frames.iter().filter(move |f| f.p >= p0 && f.p <= p1).map(|f| &f.curve)
}

fn check_reduction(t: &HomotopyTrace) -> Result<(), TestCaseError> {
    for m in &t.moves {
        if m.params.get("escape") == Some(&1.0) {
            continue;
        }
        let lengths: Vec<f64> = frames_of(t, m.p_start, m.p_end).map(CsCurve::total_length).collect();
        for w in lengths.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9, "{:?} move grew {} -> {}", m.kind, w[0], w[1]);
        }
    }
    let label = label_unchecked(&Curve::Cs(t.first().clone()));
    prop_assert!(t.frames.iter().all(|f| label_unchecked(&Curve::Cs(f.curve.clone())) == label));
    Ok(())
}

/// Complexity after each move, from the first move that is not part of the
/// initial normalization.
fn step_complexities(t: &HomotopyTrace) -> Vec<usize> {
    t.moves
        .iter()
        .skip_while(|m| m.kind == kappa_curves::homotopy::MoveKind::FragmentReplacement)
        .map(|m| frames_of(t, m.p_end, m.p_end).next().unwrap().complexity())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lens_reductions_shrink_and_stay_embedded(seed in any::<u64>()) {
        let lens = build_lens(Point2::ORIGIN, Point2::new(1.0, 0.0), KappaParams::unit()).unwrap();
        let t = reduce(&Curve::Cs(random_lens_curve(&lens, seed).unwrap())).unwrap();
        check_reduction(&t)?;
        for f in &t.frames {
            prop_assert!(self_intersections(&f.curve).is_empty());
        }
    }

    #[test]
    fn outside_reductions_shrink_and_keep_class(seed in any::<u64>()) {
        let lens = build_lens(Point2::ORIGIN, Point2::new(1.0, 0.0), KappaParams::unit()).unwrap();
        let t = reduce(&Curve::Cs(random_outside_curve(&lens, 5, seed).unwrap())).unwrap();
        check_reduction(&t)?;
        let n = step_complexities(&t);
        for w in n.windows(2) {
            prop_assert!(w[1] <= w[0], "complexity went {} -> {}", w[0], w[1]);
        }
    }
}

proptest! {
    #[test]
    fn minimizers_are_fixed_points(x in point(), dir in -PI..PI, d in 0.0..3.0f64, k in kappa(), other in any::<bool>()) {
        let y = if d < 0.05 { x } else { x + Point2::from_angle(dir) * d };
        let ratio = x.dist(y) / k.radius();
        prop_assume!((ratio - 2.0).abs() > 1e-3);
        let label = match (ratio, other) {
            (r, _) if r == 0.0 => ClassLabel::Closed,
            (r, _) if r > 2.0 => ClassLabel::Unrestricted,
            (_, false) => ClassLabel::InLens,
            (_, true) => ClassLabel::NotInLens,
        };
        let m = canonical_minimizer(x, y, k, label).unwrap();
        let t = reduce(&Curve::Cs(m.clone())).unwrap();
        prop_assert!(t.last().uniform_distance(&m, 256) <= 1e-9);
        prop_assert!((t.last().total_length() - m.total_length()).abs() <= 1e-9);
    }

    #[test]
    fn stretching_a_circle_adds_twice_the_offset(start in config(), k in kappa(), u in 0.0..1.0f64, ell in 0.0..3.0f64) {
        let circle = CsCurve::arc(k, start, TAU).unwrap();
        let half = PI * k.radius();
        let t1 = u * half;
        let t = move_type3(&circle, t1, t1 + half, ell, 8).unwrap();
        prop_assert!((t.last().total_length() - (circle.total_length() + 2.0 * ell)).abs() <= 1e-9);
    }
}

// ---------------------------------------------------------------------------
// io

proptest! {
    #[test]
    fn parse_inverts_emit(c in curve()) {
        let bytes = emit_curve(&Curve::Cs(c.clone()));
        let Curve::Cs(back) = parse_curve(&bytes).unwrap() else { panic!("kind changed") };
        prop_assert_eq!(back.components(), c.components());
        prop_assert_eq!(emit_curve(&Curve::Cs(back)), bytes);
    }

    #[test]
    fn sampled_documents_round_trip(c in curve()) {
        let s = Curve::Sampled(c.sample(0.05 * c.kappa().radius()).unwrap());
        prop_assume!(validate(&s).valid);
        let bytes = emit_curve(&s);
        prop_assert_eq!(emit_curve(&parse_curve(&bytes).unwrap()), bytes);
    }
}
