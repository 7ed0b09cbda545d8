use orbivol::complexfn::Cx;
use orbivol::cvolume::{table1_golden, table1_row};
use orbivol::diagram::{generate_j_diagram, parse_pd, KnotDiagram, FIGURE_EIGHT_PD};
use orbivol::jknot::{geometric_lambda, j_potential, JKnotParams};
use orbivol::potential::{build_potential, eval_grad, eval_v, PotentialFunction};
use orbivol::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn shipped() -> Vec<KnotDiagram> {
    let mut out = vec![parse_pd(FIGURE_EIGHT_PD).unwrap()];
    for n in 1..=4 {
        for m in 1..=4 {
            out.push(generate_j_diagram(n, m).unwrap());
        }
    }
    out
}

/// Random z whose ratios stay away from 0, 1 and the cut [1, ∞), so central
/// differences never straddle a branch cut.
fn random_point(pf: &PotentialFunction, rng: &mut ChaCha8Rng) -> Vec<Cx> {
    loop {
        let z: Vec<Cx> = (0..pf.num_segments)
            .map(|_| Cx::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(-PI..PI)))
            .collect();
        let ok = pf.terms.iter().all(|t| {
            let u = z[t.num] / z[t.den];
            (u - 1.0).norm() > 0.05 && !(u.re > 0.9 && u.im.abs() < 0.05)
        });
        if ok {
            return z;
        }
    }
}

fn scaled(z: &[Cx], c: Cx) -> Vec<Cx> {
    z.iter().map(|x| x * c).collect()
}

#[test]
fn term_counts() {
    for d in shipped() {
        let pf = build_potential(&d);
        assert_eq!(pf.terms.len(), 4 * d.crossings().len());
        assert_eq!(pf.terms.len(), 2 * pf.num_segments);
        for k in 0..pf.num_segments {
            assert_eq!(pf.terms.iter().filter(|t| t.num == k).count(), 2);
            assert_eq!(pf.terms.iter().filter(|t| t.den == k).count(), 2);
        }
        assert!(pf.terms.iter().all(|t| t.num != t.den));
    }
}

#[test]
fn degenerate_points_are_rejected() {
    let pf = build_potential(&parse_pd(FIGURE_EIGHT_PD).unwrap());
    let z = vec![Cx::new(1.0, 0.0); 8];
    assert!(matches!(eval_v(&pf, &z), Err(Error::Degenerate(_))));
    assert!(matches!(eval_grad(&pf, &z), Err(Error::Degenerate(_))));
    assert!(matches!(eval_v(&pf, &z[..7]), Err(Error::Precondition(_))));
}

#[test]
fn scale_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for d in shipped() {
        let pf = build_potential(&d);
        for _ in 0..5 {
            let z = random_point(&pf, &mut rng);
            let c = Cx::from_polar(rng.gen_range(0.1..10.0), rng.gen_range(-PI..PI));
            let (v, vs) = (
                eval_v(&pf, &z).unwrap(),
                eval_v(&pf, &scaled(&z, c)).unwrap(),
            );
            assert!((v - vs).norm() <= 1e-10 * v.norm().max(1.0));
            let (g, gs) = (
                eval_grad(&pf, &z).unwrap(),
                eval_grad(&pf, &scaled(&z, c)).unwrap(),
            );
            for (a, b) in g.iter().zip(&gs) {
                assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0));
            }
        }
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let h: f64 = 1e-5;
    let mut worst = 0.0f64;
    for d in shipped() {
        let pf = build_potential(&d);
        for _ in 0..100 {
            let z = random_point(&pf, &mut rng);
            let g = eval_grad(&pf, &z).unwrap();
            let k = rng.gen_range(0..pf.num_segments);
            let mut up = z.clone();
            let mut down = z.clone();
            up[k] *= h.exp();
            down[k] *= (-h).exp();
            let fd = (eval_v(&pf, &up).unwrap() - eval_v(&pf, &down).unwrap()) / (2.0 * h);
            worst = worst.max((fd - g[k]).norm() / g[k].norm().max(1.0));
        }
    }
    assert!(worst <= 1e-6, "worst relative deviation {worst:.2e}");
}

#[test]
fn evaluation_is_linear_over_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for d in shipped() {
        let pf = build_potential(&d);
        let z = random_point(&pf, &mut rng);
        let cut = rng.gen_range(1..pf.terms.len());
        let part = |terms: &[orbivol::potential::DilogTerm]| PotentialFunction {
            terms: terms.to_vec(),
            ..pf.clone()
        };
        let (head, tail) = (part(&pf.terms[..cut]), part(&pf.terms[cut..]));
        let whole = eval_v(&pf, &z).unwrap();
        let sum = eval_v(&head, &z).unwrap() + eval_v(&tail, &z).unwrap();
        assert!((whole - sum).norm() <= 1e-12 * whole.norm().max(1.0));
        let g = eval_grad(&pf, &z).unwrap();
        let (gh, gt) = (eval_grad(&head, &z).unwrap(), eval_grad(&tail, &z).unwrap());
        for k in 0..pf.num_segments {
            assert!((g[k] - gh[k] - gt[k]).norm() <= 1e-12 * g[k].norm().max(1.0));
        }
    }
}

#[test]
fn gradient_at_the_figure_eight_solution() {
    let params = JKnotParams::new(1, 1, 6).unwrap();
    let pf = j_potential(&params).unwrap();
    let z = geometric_lambda(&params).unwrap().solution.z;
    let v = eval_v(&pf, &z).unwrap();
    assert!(v.re.is_finite() && v.im.is_finite());
    let g = eval_grad(&pf, &z).unwrap();
    for (gk, ty) in g.iter().zip(&pf.side_types) {
        // ± 2πi/6 modulo 2πi
        let off = (gk.im - ty.sign() * PI / 3.0) / (2.0 * PI);
        assert!(gk.re.abs() <= 1e-9 && (off - off.round()).abs() <= 1e-9);
    }
    let doubled = eval_grad(&pf, &scaled(&z, Cx::new(2.0, 0.0))).unwrap();
    for (a, b) in g.iter().zip(&doubled) {
        assert!((a - b).norm() <= 1e-12);
    }
}

#[test]
fn gradient_sum_vanishes_on_every_solution() {
    for row in table1_golden() {
        let inv = table1_row(&row.params().unwrap()).unwrap();
        assert!(inv.grad_sum.norm() <= 1e-9, "{row:?}: {}", inv.grad_sum);
    }
}
