//! The `check` subcommand: a seeded battery over the library's
//! invariants, one report line per suite.

use jetbundle::dynamics::{
    check_f_related, check_trajectory, integrate_picard, integrate_rk4, VectorField,
};
use jetbundle::newton::{
    angular_momentum, hamiltonian_field, lagrangian_field, total_energy, two_body_field,
    two_body_momentum, ConfigState, GravityParams,
};
use jetbundle::smoothmap::compose;
use jetbundle::tangent::{
    canonical_flip, monad_mult, monad_unit, projection, pullback, pushforward_diffeo,
    second_tangent_map, tangent_lift, tangent_map, BasicManifold, Covector, SecondTangent,
    TangentVector,
};
use jetbundle::testing::{
    check_dinaturality, correlate, paths_equivalent, separating_test_search, Path, Test,
};
use jetbundle::vecspace::{check_metric_axioms, check_norm_axioms, NormSpec};
use jetbundle::{Expr, Matrix, SmoothMap, Vector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct CheckLine {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn line(name: &'static str, passed: bool, detail: String) -> CheckLine {
    CheckLine {
        name,
        passed,
        detail,
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e3779b97f4a7c15))
}

fn rand_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vector {
    Vector::from((0..n).map(|_| rng.random_range(lo..hi)).collect::<Vec<_>>())
}

fn sample_maps() -> Vec<SmoothMap> {
    vec![
        SmoothMap::new(
            2,
            Expr::pair(vec![
                Expr::coord(0).sin().mul(Expr::coord(1)),
                Expr::coord(0).add(Expr::coord(1).pow(2)),
            ]),
        )
        .unwrap(),
        SmoothMap::new(
            2,
            Expr::pair(vec![
                Expr::coord(0).mul(Expr::coord(1)),
                Expr::coord(1).cos(),
            ]),
        )
        .unwrap(),
        SmoothMap::new(
            2,
            Expr::pair(vec![
                Expr::window(0, 2).norm().pow(2),
                Expr::coord(0).exp(),
            ]),
        )
        .unwrap(),
    ]
}

pub fn run_battery(seed: u64) -> Vec<CheckLine> {
    let mut report = Vec::new();

    for (name, spec) in [
        ("norm axioms (euclidean)", NormSpec::Euclidean),
        ("norm axioms (p = 3)", NormSpec::p_norm(3.0).unwrap()),
        ("norm axioms (max)", NormSpec::Max),
    ] {
        let r = check_norm_axioms(&spec, 1000, seed).unwrap();
        report.push(line(
            name,
            r.passed(),
            format!("{} trials, {} violations", r.trials, r.violations.len()),
        ));
    }
    let r = check_metric_axioms(&NormSpec::Euclidean, 1000, seed).unwrap();
    report.push(line(
        "metric axioms (euclidean)",
        r.passed(),
        format!("{} trials, {} violations", r.trials, r.violations.len()),
    ));

    // Jets vs central differences.
    {
        let mut rng = rng_for(seed, 1);
        let mut worst = 0.0_f64;
        for map in sample_maps() {
            for _ in 0..100 {
                let u = rand_vec(&mut rng, 2, 0.5, 2.0);
                let e = rand_vec(&mut rng, 2, -1.0, 1.0);
                let exact = map.differential(&u, &e).unwrap();
                let fd = map.fd_oracle(&u, &e, 1e-5).unwrap();
                worst = worst.max(
                    exact.sub(&fd).unwrap().euclidean() / exact.euclidean().max(1.0),
                );
            }
        }
        report.push(line(
            "jet differential vs fd oracle",
            worst <= 1e-6,
            format!("max relative gap {worst:.3e} (tolerance 1e-6)"),
        ));
    }

    // Functoriality of the tangent map.
    {
        let mut rng = rng_for(seed, 2);
        let maps = sample_maps();
        let mut worst = 0.0_f64;
        for k in 0..200 {
            let f = &maps[k % maps.len()];
            let g = &maps[(k + 1) % maps.len()];
            let tv = TangentVector::new(
                rand_vec(&mut rng, 2, 0.5, 2.0),
                rand_vec(&mut rng, 2, -1.0, 1.0),
            )
            .unwrap();
            let joint = tangent_map(&compose(g, f).unwrap(), &tv).unwrap();
            let staged = tangent_map(g, &tangent_map(f, &tv).unwrap()).unwrap();
            worst = worst.max(
                joint
                    .flatten()
                    .sub(&staged.flatten())
                    .unwrap()
                    .euclidean()
                    / joint.flatten().euclidean().max(1.0),
            );
        }
        report.push(line(
            "tangent functoriality",
            worst <= 1e-12,
            format!("max relative deviation {worst:.3e} (tolerance 1e-12)"),
        ));
    }

    // Projection naturality and the cross-section law.
    {
        let mut rng = rng_for(seed, 3);
        let f = &sample_maps()[0];
        let field = VectorField::on_euclidean(
            SmoothMap::new(2, Expr::pair(vec![Expr::coord(1), Expr::coord(0).neg()])).unwrap(),
        )
        .unwrap();
        let mut worst = 0.0_f64;
        for _ in 0..200 {
            let tv = TangentVector::new(
                rand_vec(&mut rng, 2, 0.5, 2.0),
                rand_vec(&mut rng, 2, -1.0, 1.0),
            )
            .unwrap();
            let lhs = projection(&tangent_map(f, &tv).unwrap());
            let rhs = f.evaluate(&projection(&tv)).unwrap();
            worst = worst.max(lhs.sub(&rhs).unwrap().euclidean());
            let x = rand_vec(&mut rng, 2, -2.0, 2.0);
            let sec = field.coalgebra(&x).unwrap();
            worst = worst.max(projection(&sec).sub(&x).unwrap().euclidean());
        }
        report.push(line(
            "bundle projection naturality + cross-section law",
            worst <= 1e-14,
            format!("max deviation {worst:.3e} (tolerance 1e-14)"),
        ));
    }

    // Second tangent map against the double lift, with the flip.
    {
        let mut rng = rng_for(seed, 4);
        let f = &sample_maps()[0];
        let double = tangent_lift(&tangent_lift(f));
        let mut worst_lift = 0.0_f64;
        let mut worst_flip = 0.0_f64;
        for _ in 0..100 {
            let st = SecondTangent::new(
                rand_vec(&mut rng, 2, 0.5, 2.0),
                rand_vec(&mut rng, 2, -1.0, 1.0),
                rand_vec(&mut rng, 2, -1.0, 1.0),
                rand_vec(&mut rng, 2, -1.0, 1.0),
            )
            .unwrap();
            let direct = second_tangent_map(f, &st).unwrap();
            let lifted = double.evaluate(&st.flatten()).unwrap();
            worst_lift = worst_lift.max(direct.flatten().sub(&lifted).unwrap().euclidean());
            let lhs = canonical_flip(&direct);
            let rhs = second_tangent_map(f, &canonical_flip(&st)).unwrap();
            worst_flip =
                worst_flip.max(lhs.flatten().sub(&rhs.flatten()).unwrap().euclidean());
        }
        report.push(line(
            "second tangent map vs double lift",
            worst_lift <= 1e-12 && worst_flip <= 1e-10,
            format!("lift gap {worst_lift:.3e}, flip naturality {worst_flip:.3e}"),
        ));
    }

    // Monad laws on representatives.
    {
        let mut rng = rng_for(seed, 5);
        let m2 = BasicManifold::euclidean(2);
        let zero_section =
            SmoothMap::new(1, Expr::pair(vec![Expr::coord(0), Expr::scalar(0.0)])).unwrap();
        let mu_map = SmoothMap::new(
            4,
            Expr::pair(vec![
                Expr::coord(0),
                Expr::coord(1).add(Expr::coord(2)),
            ]),
        )
        .unwrap();
        let mut worst = 0.0_f64;
        for _ in 0..100 {
            let tv = TangentVector::new(
                rand_vec(&mut rng, 1, -2.0, 2.0),
                rand_vec(&mut rng, 1, -2.0, 2.0),
            )
            .unwrap();
            // Unit laws.
            let eta_tm =
                SecondTangent::from_flat(&monad_unit(&m2, &tv.flatten()).unwrap().flatten())
                    .unwrap();
            worst = worst.max(
                monad_mult(&eta_tm)
                    .flatten()
                    .sub(&tv.flatten())
                    .unwrap()
                    .euclidean(),
            );
            let lifted_eta =
                SecondTangent::from_flat(&tangent_map(&zero_section, &tv).unwrap().flatten())
                    .unwrap();
            worst = worst.max(
                monad_mult(&lifted_eta)
                    .flatten()
                    .sub(&tv.flatten())
                    .unwrap()
                    .euclidean(),
            );
            // Associativity on a third-level point.
            let third = TangentVector::new(
                rand_vec(&mut rng, 4, -2.0, 2.0),
                rand_vec(&mut rng, 4, -2.0, 2.0),
            )
            .unwrap();
            let inner_mu = monad_mult(&SecondTangent::from_flat(&third.flatten()).unwrap());
            let route_a = monad_mult(&SecondTangent::from_flat(&inner_mu.flatten()).unwrap());
            let tmu = tangent_map(&mu_map, &third).unwrap();
            let route_b = monad_mult(&SecondTangent::from_flat(&tmu.flatten()).unwrap());
            worst = worst.max(
                route_a
                    .flatten()
                    .sub(&route_b.flatten())
                    .unwrap()
                    .euclidean(),
            );
        }
        report.push(line(
            "monad unit laws + associativity",
            worst <= 1e-14,
            format!("max deviation {worst:.3e} (tolerance 1e-14)"),
        ));
    }

    // Testing quotient and dinaturality.
    {
        let mut rng = rng_for(seed, 6);
        let mut mismatches = 0usize;
        let mut worst_dinat = 0.0_f64;
        for round in 0..100 {
            let base = rand_vec(&mut rng, 2, -2.0, 2.0);
            let dir = rand_vec(&mut rng, 2, -2.0, 2.0);
            let p1 = Path::line(&base, &dir).unwrap();
            let p2 = if round % 3 == 0 {
                let body = Expr::pair(vec![
                    Expr::scalar(base[0])
                        .add(Expr::coord(0).scale(dir[0]))
                        .add(Expr::coord(0).pow(2).scale(rng.random_range(-1.0..1.0))),
                    Expr::scalar(base[1])
                        .add(Expr::coord(0).scale(dir[1]))
                        .add(Expr::coord(0).pow(3).scale(rng.random_range(-1.0..1.0))),
                ]);
                Path::new(SmoothMap::new(1, body).unwrap(), 1.0).unwrap()
            } else {
                Path::line(
                    &rand_vec(&mut rng, 2, -2.0, 2.0),
                    &rand_vec(&mut rng, 2, -2.0, 2.0),
                )
                .unwrap()
            };
            let eq = paths_equivalent(&p1, &p2, 1e-9).unwrap();
            let sep = separating_test_search(&p1, &p2, 2).unwrap();
            if eq != sep.is_none() {
                mismatches += 1;
            }

            let f = SmoothMap::new(
                2,
                Expr::pair(vec![
                    Expr::coord(0).mul(Expr::coord(1)),
                    Expr::coord(0).sin(),
                ]),
            )
            .unwrap();
            let t = Test::new(
                SmoothMap::new(2, Expr::coord(0).add(Expr::coord(1).pow(2))).unwrap(),
            )
            .unwrap();
            worst_dinat = worst_dinat.max(check_dinaturality(&f, &p1, &t).unwrap());
        }
        report.push(line(
            "testing quotient + dinaturality",
            mismatches == 0 && worst_dinat <= 1e-12,
            format!("{mismatches} quotient mismatches, dinaturality {worst_dinat:.3e}"),
        ));
        // Exercise one correlation value as a sanity anchor.
        let p = Path::line(&Vector::from(vec![0.0, 0.0]), &Vector::from(vec![1.0, 2.0]))
            .unwrap();
        let t = Test::linear(&Vector::from(vec![3.0, 1.0])).unwrap();
        let c = correlate(&p, &t).unwrap();
        report.push(line(
            "correlation pairing anchor",
            (c - 5.0).abs() <= 1e-12,
            format!("<(3,1), (1,2)> observed as {c}"),
        ));
    }

    // Covector transport round-trip.
    {
        let mut rng = rng_for(seed, 7);
        let mut worst = 0.0_f64;
        for _ in 0..100 {
            let mut a = Matrix::identity(2);
            for i in 0..2 {
                for j in 0..2 {
                    a.set(i, j, a.get(i, j) + rng.random_range(-0.3..0.3));
                }
            }
            let b = rand_vec(&mut rng, 2, -1.0, 1.0);
            let f = SmoothMap::new(
                2,
                Expr::linear(a.clone(), Expr::window(0, 2)).add(Expr::Const(b.clone())),
            )
            .unwrap();
            let f_inv = SmoothMap::new(
                2,
                Expr::linear(
                    a.inverse().unwrap(),
                    Expr::window(0, 2).sub(Expr::Const(b)),
                ),
            )
            .unwrap();
            let cv = Covector::new(
                rand_vec(&mut rng, 2, -2.0, 2.0),
                rand_vec(&mut rng, 2, -2.0, 2.0),
            )
            .unwrap();
            let pushed = pushforward_diffeo(&f, &f_inv, &cv).unwrap();
            let back = pullback(&f, &pushed, &cv.base).unwrap();
            worst = worst.max(back.coeffs.sub(&cv.coeffs).unwrap().euclidean());
        }
        report.push(line(
            "covector pushforward/pullback roundtrip",
            worst <= 1e-9,
            format!("max coefficient gap {worst:.3e} (tolerance 1e-9)"),
        ));
    }

    // Integrators on the linear field.
    {
        let field = VectorField::on_euclidean(SmoothMap::identity(1)).unwrap();
        let one = Vector::from(vec![1.0]);
        let e = std::f64::consts::E;
        let endpoint =
            integrate_rk4(&field, &one, 1.0, 1e-3).unwrap().final_state()[0];
        let err = |dt: f64| {
            (integrate_rk4(&field, &one, 1.0, dt).unwrap().final_state()[0] - e).abs()
        };
        let ratio = err(1e-2) / err(5e-3);
        let picard = integrate_picard(&field, &one, 0.5, 256, 100, 1e-10).unwrap();
        let rk4_matching =
            integrate_rk4(&field, &one, 0.5, 0.5 / 256.0).unwrap();
        let mut sup = 0.0_f64;
        for (a, b) in picard.states().iter().zip(rk4_matching.states()) {
            sup = sup.max(a.sub(b).unwrap().euclidean());
        }
        let residual = check_trajectory(&field, &integrate_rk4(&field, &one, 1.0, 1e-2).unwrap())
            .unwrap()
            .max_residual;
        report.push(line(
            "linear field: rk4 accuracy + order, picard agreement",
            (endpoint - e).abs() <= 1e-9
                && (12.0..=20.0).contains(&ratio)
                && sup <= 1e-6
                && residual <= 1e-3,
            format!(
                "endpoint gap {:.3e}, halving ratio {ratio:.1}, picard sup {sup:.3e}",
                (endpoint - e).abs()
            ),
        ));
    }

    // Gravity: conservation, the two views, two bodies.
    {
        let gp = GravityParams::unit();
        let field = lagrangian_field(&gp).unwrap();
        let start = ConfigState::new(
            &gp,
            Vector::from(vec![1.0, 0.0, 0.0]),
            Vector::from(vec![0.0, 1.0, 0.0]),
        )
        .unwrap();
        let tr = integrate_rk4(&field, &start.flatten(), std::f64::consts::TAU, 1e-3).unwrap();
        let e0 = total_energy(&gp, &start).unwrap();
        let l0 = angular_momentum(&start, gp.m2).unwrap();
        let mut e_drift = 0.0_f64;
        let mut l_drift = 0.0_f64;
        for s in tr.states() {
            let (r, v) = s.split(3);
            let cs = ConfigState { r, v };
            e_drift = e_drift.max(((total_energy(&gp, &cs).unwrap() - e0) / e0).abs());
            l_drift = l_drift.max(
                angular_momentum(&cs, gp.m2)
                    .unwrap()
                    .sub(&l0)
                    .unwrap()
                    .euclidean(),
            );
        }
        let return_gap = tr
            .final_state()
            .sub(&start.flatten())
            .unwrap()
            .euclidean();
        report.push(line(
            "circular orbit conservation",
            e_drift <= 1e-7 && l_drift <= 1e-8 && return_gap <= 1e-4,
            format!(
                "energy drift {e_drift:.3e}, L drift {l_drift:.3e}, period return {return_gap:.3e}"
            ),
        ));

        let mut rng = rng_for(seed, 8);
        let to_phase = SmoothMap::new(
            6,
            Expr::pair(vec![Expr::window(0, 3), Expr::window(3, 3).scale(gp.m2)]),
        )
        .unwrap();
        let samples: Vec<Vector> = (0..50)
            .map(|_| {
                rand_vec(&mut rng, 3, 0.6, 2.0).concat(&rand_vec(&mut rng, 3, -1.0, 1.0))
            })
            .collect();
        let residual = check_f_related(
            &to_phase,
            &field,
            &hamiltonian_field(&gp).unwrap(),
            &samples,
        )
        .unwrap();
        report.push(line(
            "lagrangian/hamiltonian relatedness",
            residual <= 1e-12,
            format!("residual {residual:.3e} (tolerance 1e-12)"),
        ));

        let two = two_body_field(1.0, 1.0, 1.0, 1e-9).unwrap();
        let state = Vector::from(vec![
            0.5, 0.0, 0.0, 0.0, 0.5, 0.0, -0.5, 0.0, 0.0, 0.0, -0.5, 0.0,
        ]);
        let tr = integrate_rk4(&two, &state, 1.0, 1e-3).unwrap();
        let p0 = two_body_momentum(1.0, 1.0, &state).unwrap();
        let mut drift = 0.0_f64;
        for s in tr.states() {
            drift = drift.max(
                two_body_momentum(1.0, 1.0, s)
                    .unwrap()
                    .sub(&p0)
                    .unwrap()
                    .euclidean(),
            );
        }
        report.push(line(
            "two-body momentum conservation",
            drift <= 1e-9,
            format!("max drift {drift:.3e} (tolerance 1e-9)"),
        ));
    }

    report
}
