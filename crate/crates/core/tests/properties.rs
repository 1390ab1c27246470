use core::f64::consts::PI;

use mixspec_core::closed_form::{CanonicalDomain, ModeLabel, ProblemKind, SquarePartition, eigenfunction};
use mixspec_core::fem::{self, assemble, triangulate};
use mixspec_core::geometry::{self, BoundaryCondition::*, DomainSpec, Point2};
use mixspec_core::inequalities::ks_bound;
use mixspec_core::rellich::{EigenfunctionSource, rellich_christianson};
use mixspec_core::specfun::{bessel_j, bessel_j_prime, bessel_j_second};
use proptest::prelude::*;

/// A convex polygon: `n` points on a circle at jittered angles.
fn convex_polygon() -> impl Strategy<Value = Vec<Point2>> {
    (3usize..9, 0.5f64..3.0, -1.0f64..1.0, -1.0f64..1.0).prop_flat_map(|(n, r, cx, cy)| {
        prop::collection::vec(0.0f64..0.6, n).prop_map(move |jitter| {
            (0..n)
                .map(|i| {
                    let t = 2.0 * PI * (i as f64 + jitter[i]) / n as f64;
                    Point2::new(cx + r * t.cos(), cy + r * t.sin())
                })
                .collect()
        })
    })
}

fn centroid(v: &[Point2]) -> Point2 {
    let s = v.iter().fold(Point2::ORIGIN, |a, &b| a + b);
    s * (1.0 / v.len() as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convex_interior_distances_positive(v in convex_polygon(), w in 0.05f64..0.95) {
        let n = v.len();
        let domain = DomainSpec::polygon(v.clone(), vec![Steklov; n]).unwrap();
        let p = v[0] + (centroid(&v) - v[0]) * w;
        let faces = geometry::faces(&domain, p).unwrap();
        let min = faces.iter().map(|f| f.signed_distance).fold(f64::INFINITY, f64::min);
        prop_assert!(faces.iter().all(|f| f.signed_distance > 0.0));
        let c = geometry::geometric_constants(&domain, p, 0.0).unwrap();
        prop_assert!((c.h_min - min).abs() <= 1e-12 * min.max(1.0));
        prop_assert_eq!(c.c0, 2.0);
    }

    #[test]
    fn signed_distance_translation_covariant(v in convex_polygon(), sx in -10.0f64..10.0, sy in -10.0f64..10.0) {
        let n = v.len();
        let shift = Point2::new(sx, sy);
        let a = DomainSpec::polygon(v.clone(), vec![Neumann; n]).unwrap();
        let b = a.translated(shift).unwrap();
        let p = centroid(&v);
        for i in 0..n {
            let d0 = geometry::signed_distance(&a, i, p).unwrap();
            let d1 = geometry::signed_distance(&b, i, p + shift).unwrap();
            prop_assert!((d0 - d1).abs() <= 1e-12 * (1.0 + shift.norm()) * d0.abs().max(1.0));
        }
    }

    #[test]
    fn support_height_constant_on_faces(v in convex_polygon()) {
        let n = v.len();
        let domain = DomainSpec::polygon(v, vec![Neumann; n]).unwrap();
        for (i, seg) in domain.segments().iter().enumerate() {
            let d = geometry::signed_distance(&domain, i, Point2::ORIGIN).unwrap();
            for s in 0..5 {
                let t = s as f64 / 4.0;
                let x = seg.point(t);
                prop_assert!((seg.normal(t).dot(x) - d).abs() <= 1e-12 * (1.0 + x.norm()));
            }
        }
    }

    #[test]
    fn bessel_ode_residual(l in 0u32..=10, x in 0.5f64..50.0) {
        let (j, jp, jpp) = (bessel_j(l, x), bessel_j_prime(l, x), bessel_j_second(l, x));
        let residual = x * x * jpp + x * jp + (x * x - (l * l) as f64) * j;
        prop_assert!(residual.abs() < 1e-9 * x * x);
    }

    #[test]
    fn ks_bound_increasing(v in convex_polygon(), mu in 1e-3f64..1e4, step in 1e-6f64..1.0) {
        let n = v.len();
        let domain = DomainSpec::polygon(v.clone(), vec![Steklov; n]).unwrap();
        let c = geometry::geometric_constants(&domain, centroid(&v), 0.0).unwrap();
        prop_assert!(ks_bound(mu * (1.0 + step), &c) > ks_bound(mu, &c));
    }

    #[test]
    fn closed_form_pde_residual(m in 0u32..=3, n in 0u32..=3, x in 0.01f64..0.99, y in 0.01f64..0.99) {
        let c = CanonicalDomain::unit_square(SquarePartition::OneDirichletSide);
        let v = eigenfunction(ProblemKind::NeumannDirichlet, &c, ModeLabel::HalfShiftedGrid { m, n }).unwrap();
        let p = Point2::new(x, y);
        prop_assert!((v.laplacian(p) + v.eigenvalue() * v.value(p)).abs() < 1e-8 * v.eigenvalue().max(1.0));
    }

    #[test]
    fn half_disk_pde_residual(l in 1u32..=4, m in 1u32..=3, r in 0.05f64..0.95, t in 0.05f64..3.0) {
        let c = CanonicalDomain::HalfDisk { radius: 1.0 };
        let v = eigenfunction(ProblemKind::NeumannDirichlet, &c, ModeLabel::Bessel { l, m }).unwrap();
        let p = Point2::new(r * t.cos(), r * t.sin());
        prop_assert!((v.laplacian(p) + v.eigenvalue() * v.value(p)).abs() < 1e-8 * v.eigenvalue());
    }

    #[test]
    fn christianson_independent_of_base_point(m in 0u32..=3, n in 0u32..=3, px in -2.0f64..3.0, py in -2.0f64..3.0) {
        let c = CanonicalDomain::unit_square(SquarePartition::OneDirichletSide);
        let d = c.to_domain(Neumann);
        let v = eigenfunction(ProblemKind::NeumannDirichlet, &c, ModeLabel::HalfShiftedGrid { m, n }).unwrap();
        let r = rellich_christianson(&d, Point2::new(px, py), EigenfunctionSource::ClosedForm(&v), 32).unwrap();
        prop_assert!(r.residual < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn fem_scaling_covariance(s in 0.2f64..5.0) {
        let d = DomainSpec::unit_square([Dirichlet, Steklov, Dirichlet, Steklov]);
        let base = assemble(triangulate(&d, 0.125).unwrap()).unwrap();
        let scaled = base.scaled(s);
        let mu0 = fem::solve_neumann_dirichlet(&base, 4).unwrap();
        let mu1 = fem::solve_neumann_dirichlet(&scaled, 4).unwrap();
        let st0 = fem::solve_steklov_dirichlet(&base, 4).unwrap();
        let st1 = fem::solve_steklov_dirichlet(&scaled, 4).unwrap();
        let alpha = 2.0;
        let r0 = fem::solve_robin_dirichlet(&base, alpha, 4).unwrap();
        let r1 = fem::solve_robin_dirichlet(&scaled, alpha / s, 4).unwrap();
        for k in 0..4 {
            prop_assert!((mu1[k].eigenvalue * s * s / mu0[k].eigenvalue - 1.0).abs() < 1e-10);
            prop_assert!((st1[k].eigenvalue * s / st0[k].eigenvalue - 1.0).abs() < 1e-10);
            prop_assert!((r1[k].eigenvalue * s * s / r0[k].eigenvalue - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn closed_form_spectra_sorted_and_regenerable() {
    let domains = [
        CanonicalDomain::unit_square(SquarePartition::Mixed),
        CanonicalDomain::unit_square(SquarePartition::OneDirichletSide),
        CanonicalDomain::unit_square(SquarePartition::Dirichlet),
        CanonicalDomain::unit_square(SquarePartition::Neumann),
        CanonicalDomain::HalfDisk { radius: 1.0 },
    ];
    for c in domains {
        for kind in [ProblemKind::NeumannDirichlet, ProblemKind::SteklovDirichlet, ProblemKind::Dirichlet, ProblemKind::Neumann] {
            let Ok(s) = c.spectrum(kind, 12) else { continue };
            assert!(s.is_sorted());
            for e in &s.entries {
                let again = c.eigenvalue(kind, e.label).unwrap();
                assert!((again - e.value).abs() <= 1e-12 * e.value.abs().max(1.0), "{c:?} {kind} {e:?}");
            }
        }
    }
}

#[test]
fn closed_form_min_max_sandwich() {
    let mixed = CanonicalDomain::unit_square(SquarePartition::Mixed);
    let n = CanonicalDomain::unit_square(SquarePartition::Neumann).spectrum(ProblemKind::Neumann, 10).unwrap();
    let d = CanonicalDomain::unit_square(SquarePartition::Dirichlet).spectrum(ProblemKind::Dirichlet, 10).unwrap();
    let m = mixed.spectrum(ProblemKind::NeumannDirichlet, 10).unwrap();
    for k in 1..=10 {
        assert!(n.value(k).unwrap() <= m.value(k).unwrap());
        assert!(m.value(k).unwrap() <= d.value(k).unwrap());
    }
}

#[test]
fn closed_form_unit_norm_by_quadrature() {
    let square = CanonicalDomain::unit_square(SquarePartition::Mixed);
    for m in 0..=3 {
        for n in 1..=3 {
            let v = eigenfunction(ProblemKind::NeumannDirichlet, &square, ModeLabel::Grid { m, n }).unwrap();
            assert!((v.quadrature_l2_norm() - 1.0).abs() < 1e-8);
        }
    }
    let half = CanonicalDomain::HalfDisk { radius: 1.0 };
    for (l, m) in [(1, 1), (2, 1), (1, 2), (4, 3)] {
        let v = eigenfunction(ProblemKind::NeumannDirichlet, &half, ModeLabel::Bessel { l, m }).unwrap();
        assert!((v.quadrature_l2_norm() - 1.0).abs() < 1e-8);
    }
}
