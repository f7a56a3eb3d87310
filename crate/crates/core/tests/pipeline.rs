//! Cross-module flows through the public API.

use std::sync::Arc;

use nmds_core::code::{classify, code_of_points, generator_matrix, min_distance, Label};
use nmds_core::curve::{curve_scan, DEFAULT_SCAN_LIMIT};
use nmds_core::extendability::{find_frame, witness_hyperplane};
use nmds_core::geometry::{addable_points, hyperplane_count, secant_histogram, secant_profile};
use nmds_core::parse::{format_matrix, parse_matrix};
use nmds_core::{Budget, EllipticArc, EllipticCurve, Error, Field, ProjSpace};

fn curves(q: u64) -> Vec<EllipticCurve> {
    let field = Arc::new(Field::of_order(q).unwrap());
    curve_scan(&field, DEFAULT_SCAN_LIMIT, |_| true).unwrap()
}

#[test]
fn secant_profile_counts_every_hyperplane() {
    let budget = Budget::unlimited();
    for c in curves(7).iter().step_by(11) {
        for k in 3..=4.min(c.n() - 1) {
            let arc = EllipticArc::new(c, k).unwrap();
            let profile = secant_profile(arc.set(), &budget).unwrap();
            let q = c.field().q();
            assert_eq!(profile.iter().sum::<u64>(), hyperplane_count(q, k));
            // Each point lies on #P^{k-2} hyperplanes.
            let per_point = ProjSpace::new(q, k - 1).count();
            let incidences: u64 = profile.iter().enumerate().map(|(s, &m)| s as u64 * m).sum();
            assert_eq!(incidences, c.n() as u64 * per_point);
        }
    }
}

#[test]
fn adding_an_addable_point_extends_the_code() {
    let budget = Budget::unlimited();
    let mut extended = 0;
    for c in curves(5).into_iter().filter(|c| c.n() > 3) {
        let arc = EllipticArc::new(&c, 3).unwrap();
        let code = generator_matrix(&c, 3).unwrap();
        let d = min_distance(&code, &budget).unwrap();
        for p in addable_points(arc.set(), &budget).unwrap().iter().take(2) {
            let longer = code.extend(p.coords()).unwrap();
            assert_eq!(min_distance(&longer, &budget).unwrap(), d + 1);
            assert_eq!(
                longer.project(code.n()).unwrap().generator(),
                code.generator()
            );
            extended += 1;
        }
    }
    assert!(extended > 0);
}

#[test]
fn non_addable_points_lie_on_full_hyperplanes() {
    let budget = Budget::unlimited();
    let c = &curves(5).into_iter().find(|c| c.n() == 8).unwrap();
    let arc = EllipticArc::new(c, 3).unwrap();
    let addable = addable_points(arc.set(), &budget).unwrap();
    let code = generator_matrix(c, 3).unwrap();
    let d = min_distance(&code, &budget).unwrap();
    for p in ProjSpace::new(c.field().q(), 3).points() {
        if arc.set().contains(&p) || addable.contains(&p) {
            continue;
        }
        let longer = code.extend(p.coords()).unwrap();
        assert_eq!(min_distance(&longer, &budget).unwrap(), d);
    }
}

#[test]
fn code_of_arc_points_is_the_elliptic_code() {
    for c in curves(9).iter().filter(|c| c.n() > 5).step_by(97) {
        let arc = EllipticArc::new(c, 5).unwrap();
        assert_eq!(
            code_of_points(arc.set()).unwrap().generator(),
            generator_matrix(c, 5).unwrap().generator()
        );
    }
}

#[test]
fn matrix_file_preserves_classification() {
    let budget = Budget::unlimited();
    for c in curves(11).iter().step_by(211) {
        let code = generator_matrix(c, 4).unwrap();
        let reread = parse_matrix(&format_matrix(&code))
            .unwrap()
            .to_code()
            .unwrap();
        let (a, b) = (
            classify(&code, &budget).unwrap(),
            classify(&reread, &budget).unwrap(),
        );
        assert_eq!(a, b);
        assert!(matches!(a.label, Label::Mds | Label::Nmds));
    }
}

#[test]
fn max_secant_equals_k_on_the_longest_curve() {
    let budget = Budget::unlimited();
    let c = curves(13).into_iter().find(|c| c.n() == 21).unwrap();
    for k in 3..=5 {
        let arc = EllipticArc::new(&c, k).unwrap();
        let hist = secant_histogram(arc.set(), &budget).unwrap();
        assert_eq!(hist.iter().rposition(|&m| m > 0), Some(k));
    }
}

#[test]
fn witnesses_through_the_public_api() {
    let budget = Budget::unlimited();
    let c = curves(13)
        .into_iter()
        .find(|c| !c.j_invariant().is_zero() && find_frame(c).is_ok())
        .unwrap();
    let (framed, _) = find_frame(&c).unwrap();
    let mut found = 0;
    for k in 3..=5 {
        let arc = EllipticArc::new(&framed, k).unwrap();
        let addable = addable_points(arc.set(), &budget).unwrap();
        let space = ProjSpace::new(13, k);
        for rank in (0..space.count()).step_by(53) {
            let p = space.point(rank);
            if arc.set().contains(&p) || addable.contains(&p) {
                continue;
            }
            match witness_hyperplane(&p, &arc) {
                Ok(w) => {
                    assert_eq!(w.secant_points.len(), k);
                    found += 1;
                }
                // Below q = 121 a recipe may find no qualifying line.
                Err(e) => assert_eq!(e, Error::NoWitnessFound),
            }
        }
    }
    assert!(found > 0);
}
