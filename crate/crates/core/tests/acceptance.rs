//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod oracle;

use cliffsolve::clifford::ONE;
use cliffsolve::genform::Tetrad;
use cliffsolve::linalg::hermitian_eigenvalues;
use cliffsolve::matrix_rep::{build_gamma, mul_operator, Restriction, Side};
use cliffsolve::models::{
    assemble_dirac_hestenes, assemble_equipped, assemble_model_dirac, dispersion_check, phase_study,
    verify_theorem, CovectorField, DiracModelSpec, EquippedSystemSpec, GenformField, HestenesModelSpec,
    Profile, TheoremOptions,
};
use cliffsolve::sampling;
use cliffsolve::solver::{
    boundary_flux_matrix, cfl_time, energy, validate_friedrichs, CauchySolver, FieldGrid, FirstOrderSystem, Grid,
    StencilOrder,
};
use cliffsolve::spinor_ideals::{canonical, canonical_idempotents, exp_to_g, membership};
use cliffsolve::{Blade, HermitianIdempotent, IdealSet, Multivector, Parity, Signature, C64};
use oracle::{eigenvalues, random_lorentz, random_multivector, Gammas};
use rand::Rng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn sig(r: usize, s: usize) -> Signature {
    Signature::new(r, s).unwrap()
}

fn dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn norm(u: &Multivector) -> f64 {
    u.max_abs().max(1e-300)
}

fn algebra() -> Outcome {
    let mut relations_exact = true;
    let mut naive = 0.0f64;
    let mut assoc = 0.0f64;
    let mut dagger_anti = 0.0f64;
    let mut dagger_twice = 0.0f64;
    let mut rng = sampling::rng(101);
    for s in [sig(1, 1), sig(1, 3)] {
        let n = s.dim();
        for a in 1..=n {
            for b in 1..=n {
                let ea = Multivector::generator(s, a).unwrap();
                let eb = Multivector::generator(s, b).unwrap();
                let anti = &(&ea * &eb) + &(&eb * &ea);
                let target = if a != b {
                    Multivector::zero(s)
                } else {
                    Multivector::scalar(s, C64::new(if a == 1 { 2.0 } else { -2.0 }, 0.0))
                };
                relations_exact &= anti.coeffs() == target.coeffs();
            }
        }
        for _ in 0..1000 {
            let u = random_multivector(s, &mut rng);
            let v = random_multivector(s, &mut rng);
            let w = random_multivector(s, &mut rng);
            let uv = &u * &v;
            naive = naive.max(dist(uv.coeffs(), &oracle::naive_product(&u, &v)) / (norm(&u) * norm(&v)));
            let scale = norm(&u) * norm(&v) * norm(&w);
            assoc = assoc.max((&uv * &w).dist(&(&u * &(&v * &w))) / scale);
            let lhs = uv.hermitian_conjugate().unwrap();
            let rhs = &v.hermitian_conjugate().unwrap() * &u.hermitian_conjugate().unwrap();
            dagger_anti = dagger_anti.max(lhs.dist(&rhs) / (norm(&u) * norm(&v)));
            dagger_twice = dagger_twice.max(u.hermitian_conjugate().unwrap().hermitian_conjugate().unwrap().dist(&u) / norm(&u));
        }
    }
    let worst = naive.max(assoc).max(dagger_anti).max(dagger_twice);
    outcome(
        relations_exact && worst <= 1e-13,
        format!(
            "relations exact={relations_exact} naive={naive:.2e} assoc={assoc:.2e} (UV)†={dagger_anti:.2e} ††={dagger_twice:.2e}"
        ),
    )
}

fn symmetrization() -> Outcome {
    let mut herm = 0.0f64;
    let mut herm_rep = 0.0f64;
    let mut min_gamma = f64::INFINITY;
    let mut oracle_gap = 0.0f64;
    let mut rng = sampling::rng(202);
    for n in [2, 4] {
        let s = Signature::lorentzian(n).unwrap();
        let beta = Multivector::generator(s, 1).unwrap();
        let g = Gammas::new(n);
        for _ in 0..100 {
            let lambda = random_lorentz(n, &mut rng, 1.0);
            let tetrad = Tetrad::new(s, lambda).unwrap();
            for h in tetrad.genvectors() {
                let bh = &beta * &h;
                herm = herm.max(bh.hermitian_conjugate().unwrap().dist(&bh));
                herm_rep = herm_rep.max(oracle::hermitian_residual(&g.rep(&bh)));
            }
            let bh1 = &beta * &tetrad.genvector(1).unwrap();
            let l = mul_operator(&bh1, Side::Left, Restriction::Full).unwrap();
            let lib = hermitian_eigenvalues(&l).unwrap()[0];
            let orc = oracle::hermitian_eigenvalues(&g.rep(&bh1))[0];
            min_gamma = min_gamma.min(lib);
            oracle_gap = oracle_gap.max((lib - orc).abs());
        }
    }
    let mut boost_gap = 0.0f64;
    let s = sig(1, 1);
    for k in 1..=20 {
        let chi = 0.1 * k as f64;
        let tetrad = Tetrad::boost(s, 2, chi).unwrap();
        let bh1 = &Multivector::generator(s, 1).unwrap() * &tetrad.genvector(1).unwrap();
        let l = mul_operator(&bh1, Side::Left, Restriction::Full).unwrap();
        boost_gap = boost_gap.max((hermitian_eigenvalues(&l).unwrap()[0] - (-chi).exp()).abs());
    }
    outcome(
        herm <= 1e-12 && herm_rep <= 1e-12 && min_gamma > 0.0 && oracle_gap <= 1e-10 && boost_gap <= 1e-10,
        format!(
            "(βh)†-βh={herm:.2e} rep={herm_rep:.2e} min γ={min_gamma:.3e} vs oracle {oracle_gap:.2e} e^-χ gap={boost_gap:.2e}"
        ),
    )
}

fn representation() -> Outcome {
    let mut hom = 0.0f64;
    let mut adj = 0.0f64;
    let mut rng = sampling::rng(303);
    for n in [2, 4, 6] {
        let gs = build_gamma(n).unwrap();
        let s = gs.signature();
        for _ in 0..100 {
            let u = random_multivector(s, &mut rng);
            let v = random_multivector(s, &mut rng);
            let ru = gs.rep(&u).unwrap();
            let rv = gs.rep(&v).unwrap();
            let scale = norm(&u) * norm(&v);
            hom = hom.max(oracle::max_abs(&(gs.rep(&(&u * &v)).unwrap() - &ru * &rv)) / scale);
            adj = adj.max(oracle::max_abs(&(gs.rep(&u.hermitian_conjugate().unwrap()).unwrap() - ru.adjoint())) / norm(&u));
        }
    }
    let gs = build_gamma(4).unwrap();
    let size = gs.size() as f64;
    let mut ortho = 0.0f64;
    for a in 0..16 {
        let ra = gs.blade_matrix(Blade::from_mask(a));
        for b in 0..16 {
            let rb = gs.blade_matrix(Blade::from_mask(b));
            let ip = (ra.adjoint() * rb).trace() / size;
            let target = if a == b { 1.0 } else { 0.0 };
            ortho = ortho.max((ip - C64::new(target, 0.0)).norm());
        }
    }
    outcome(
        hom <= 1e-12 && adj <= 1e-12 && ortho <= 1e-12,
        format!("hom={hom:.2e} adjoint={adj:.2e} orthonormality={ortho:.2e} (n=4, 256 pairs)"),
    )
}

fn idempotents() -> Outcome {
    let s = sig(1, 3);
    let g = Gammas::new(4);
    let ts = canonical_idempotents(s).unwrap();
    let mut residual = 0.0f64;
    let mut ranks = Vec::new();
    for t in &ts {
        let e = t.element();
        residual = residual.max((e * e).dist(e)).max(e.hermitian_conjugate().unwrap().dist(e));
        let p = g.rep(e);
        residual = residual.max(oracle::max_abs(&(&p * &p - &p))).max(oracle::hermitian_residual(&p));
        let trace = p.trace().re.round() as usize;
        ranks.push((t.rank(), trace));
    }
    let ranks_ok = ranks.iter().enumerate().all(|(k, (r, tr))| *r == k && *tr == k);
    let one = Multivector::one(s);
    let complement = |k: usize| &one - ts[k].element();
    let unitary_blades: Vec<Multivector> = (0..16)
        .map(|m| Multivector::blade(s, Blade::from_mask(m), ONE))
        .collect();
    let equivalent = |a: &Multivector, b: &Multivector| {
        unitary_blades.iter().any(|x| {
            let xd = x.hermitian_conjugate().unwrap();
            (&xd * x).dist(&one) == 0.0 && (&(&xd * a) * x).dist(b) <= 1e-13
        })
    };
    let duals_ok = complement(0).dist(ts[4].element()) == 0.0
        && complement(4).dist(ts[0].element()) == 0.0
        && equivalent(&complement(1), ts[3].element())
        && equivalent(&complement(3), ts[1].element())
        && equivalent(&complement(2), ts[2].element());

    let mut rng = sampling::rng(404);
    let mut sets = 0.0f64;
    let mut closure = 0.0f64;
    for name in ["t1", "t2", "t3"] {
        let t = canonical(s, name).unwrap();
        let e = t.element();
        for _ in 0..50 {
            let a = random_multivector(s, &mut rng);
            let u = sampling::ideal_element(&t, &mut rng, 1.0);
            let k = &(e * &random_multivector(s, &mut rng)) * e;
            let l1 = sampling::lie_element(&t, &mut rng, 1.0).unwrap();
            let l2 = sampling::lie_element(&t, &mut rng, 1.0).unwrap();
            let g1 = exp_to_g(&l1, &t).unwrap();
            let g2 = exp_to_g(&l2, &t).unwrap();
            for (x, set) in [(&u, IdealSet::I), (&k, IdealSet::K), (&l1, IdealSet::L), (&g1, IdealSet::G)] {
                let m = membership(x, &t, set).unwrap();
                sets = sets.max(if m.member { m.residual / norm(x).max(1.0) } else { f64::INFINITY });
            }
            let au = &a * &u;
            closure = closure.max((&au * e).dist(&au) / (norm(&a) * norm(&u)));
            let uk = &u * &k;
            closure = closure.max((&uk * e).dist(&uk) / (norm(&u) * norm(&k)));
            let bracket = l1.commutator(&l2).unwrap();
            let mb = membership(&bracket, &t, IdealSet::L).unwrap();
            closure = closure.max(if mb.member { mb.residual / norm(&bracket).max(1.0) } else { f64::INFINITY });
            let prod = &g1 * &g2;
            let mg = membership(&prod, &t, IdealSet::G).unwrap();
            closure = closure.max(if mg.member { mg.residual } else { f64::INFINITY });
            let inv = g1.hermitian_conjugate().unwrap();
            closure = closure.max((&inv * &g1).dist(&one)).max((&g1 * &inv).dist(&one));
        }
    }
    outcome(
        residual <= 1e-13 && ranks_ok && duals_ok && sets <= 1e-12 && closure <= 1e-12,
        format!("t²=t,t†=t residual={residual:.2e} ranks={ranks_ok} duals={duals_ok} membership={sets:.2e} closure={closure:.2e}"),
    )
}

fn free_dirac(mass: f64) -> FirstOrderSystem {
    let s = sig(1, 3);
    let spec = DiracModelSpec::free(Tetrad::identity(s), canonical(s, "t2").unwrap(), mass);
    assemble_model_dirac(&spec, None).unwrap().system
}

fn convergence() -> Outcome {
    let sys = free_dirac(1.0);
    let study = phase_study(&sys, 2, 1, 1.0, 0.5, &[128, 256, 512], 0.4, StencilOrder::Second).unwrap();
    let omega = (1.0 + 4.0 * PI * PI).sqrt();
    let min = study.orders.iter().copied().fold(f64::INFINITY, f64::min);
    outcome(
        min >= 1.9 && (study.omega - omega).abs() <= 1e-10,
        format!("L2 errors={} orders={:.4?} ω gap={:.2e}", sci(&study.errors), study.orders, (study.omega - omega).abs()),
    )
}

fn dispersion() -> Outcome {
    let mut rng = sampling::rng(606);
    let mut lib = 0.0f64;
    let mut orc = 0.0f64;
    let mut balanced = true;
    for _ in 0..20 {
        let m = rng.random_range(0.0..2.0);
        let k: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
        let sys = free_dirac(m);
        let r = dispersion_check(&sys, m, &k, 1e-10).unwrap();
        lib = lib.max(r.max_deviation);
        balanced &= r.positive == 8 && r.negative == 8;
        let h1 = &sys.h()[0];
        let mut b = oracle::CMat::zeros(16, 16);
        for (h, ki) in sys.h().iter().skip(1).zip(&k) {
            b += h * C64::new(*ki, 0.0);
        }
        if let cliffsolve::solver::LowerOrder::Constant(mm) = sys.lower() {
            b -= mm * C64::new(0.0, 1.0);
        }
        let expected = (m * m + k.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let a = h1.clone().try_inverse().unwrap() * b;
        for w in eigenvalues(&a) {
            orc = orc.max((w.re.abs() - expected).abs()).max(w.im.abs());
        }
    }
    let hestenes = assemble_dirac_hestenes(&HestenesModelSpec::standard(0.5).unwrap(), None).unwrap().system;
    let study = phase_study(&hestenes, 3, 2, 1.0, 0.25, &[128, 256, 512], 0.4, StencilOrder::Second).unwrap();
    let omega = (0.25 + 16.0 * PI * PI).sqrt();
    let scaled: Vec<f64> = study
        .errors
        .iter()
        .zip(&study.levels)
        .map(|(e, n)| e * (*n as f64).powi(2))
        .collect();
    let spread = scaled.iter().copied().fold(0.0, f64::max) / scaled.iter().copied().fold(f64::INFINITY, f64::min);
    let orders_ok = study.orders.iter().all(|o| *o >= 1.9);
    outcome(
        lib <= 1e-10 && orc <= 1e-10 && balanced && orders_ok && (study.omega - omega).abs() <= 1e-10 && spread <= 1.1,
        format!(
            "eigen deviation lib={lib:.2e} oracle={orc:.2e} ±balanced={balanced}; phase errors·N²={} orders={:.4?}",
            sci(&scaled),
            study.orders
        ),
    )
}

fn gaussian() -> Profile {
    Profile::Gaussian {
        width: 0.05,
        center: None,
    }
}

fn drift_of(sys: &FirstOrderSystem, u0: FieldGrid, grid: &Grid) -> f64 {
    let mut solver = CauchySolver::new(sys, grid).unwrap();
    let e0 = energy(sys, &u0, grid);
    let mut u = u0;
    let mut drift = 0.0f64;
    solver
        .run(&mut u, |f| {
            drift = drift.max((energy(sys, f, grid) - e0).abs() / e0);
            Ok(())
        })
        .unwrap();
    drift
}

fn constant_gauge(t: &HermitianIdempotent, seed: u64) -> Vec<GenformField> {
    let mut rng = sampling::rng(seed);
    (0..4)
        .map(|_| GenformField::constant(sampling::lie_element(t, &mut rng, 1.0).unwrap()))
        .collect()
}

fn energy_conservation() -> Outcome {
    let s = sig(1, 3);
    let t = canonical(s, "t2").unwrap();
    let line = Grid::line(4, 2, 256, 1.0).unwrap();
    let mut drifts = Vec::new();
    let mut antiherm = 0.0f64;
    let free = DiracModelSpec::free(Tetrad::identity(s), t.clone(), 1.0);
    let interacting = DiracModelSpec {
        gauge: constant_gauge(&t, 77),
        ..free.clone()
    };
    for spec in [&free, &interacting] {
        let a = assemble_model_dirac(spec, None).unwrap();
        antiherm = antiherm.max(a.system.lower_antihermiticity());
        let grid = cfl_time(&a.system, line.clone(), 1000).unwrap();
        let psi0 = GenformField {
            profile: gaussian(),
            value: t.element().clone(),
        };
        drifts.push(drift_of(&a.system, a.sample(&psi0, &grid).unwrap(), &grid));
    }
    let h = assemble_dirac_hestenes(&HestenesModelSpec::standard(1.0).unwrap(), None).unwrap();
    antiherm = antiherm.max(h.system.lower_antihermiticity());
    let grid = cfl_time(&h.system, line, 1000).unwrap();
    let psi0 = GenformField {
        profile: gaussian(),
        value: Multivector::parse(s, "e + 0.5*e^12 - 0.25i*e^1234").unwrap(),
    };
    drifts.push(drift_of(&h.system, h.sample(&psi0, &grid).unwrap(), &grid));
    outcome(
        drifts.iter().all(|d| *d <= 1e-6) && antiherm <= 1e-12,
        format!("drift free/interacting/hestenes={} ‖M+M†‖={antiherm:.2e}", sci(&drifts)),
    )
}

fn theorem() -> Outcome {
    let s = sig(1, 3);
    let t = canonical(s, "t2").unwrap();
    let mut gauge = constant_gauge(&t, 88);
    gauge[1].profile = Profile::Cosine {
        mode: vec![1],
        phase: 0.3,
    };
    let psi0 = GenformField {
        profile: gaussian(),
        value: t.element().clone(),
    };
    let mut lines = Vec::new();
    let mut pass = true;
    for (label, gauge) in [("A=0", Vec::new()), ("A∈L(t)", gauge)] {
        let spec = DiracModelSpec {
            tetrad: Tetrad::identity(s),
            idempotent: t.clone(),
            gauge,
            mass: 1.0,
        };
        let line = Grid::line(4, 2, 256, 1.0).unwrap();
        let sys = assemble_model_dirac(&spec, Some(&line)).unwrap();
        let grid = cfl_time(&sys.system, line, 500).unwrap();
        let r = verify_theorem(&spec, &psi0, &grid, &TheoremOptions { seed: 9, ..Default::default() }).unwrap();
        pass &= r.leakage_max <= 1e-12
            && r.restricted_agreement <= 1e-11
            && r.control_residual <= 1e-11
            && r.zero_dual_max <= 1e-12
            && r.equation_residual <= 1e-11
            && r.pass;
        lines.push(format!(
            "{label}: leakage={:.2e} restricted={:.2e} control={:.2e} zero-φ′={:.2e} equation={:.2e}",
            r.leakage_max, r.restricted_agreement, r.control_residual, r.zero_dual_max, r.equation_residual
        ));
    }
    outcome(pass, lines.join("; "))
}

fn zero_data() -> Outcome {
    let s = sig(1, 3);
    let t = canonical(s, "t1").unwrap();
    let line = Grid::line(4, 3, 64, 1.0).unwrap();
    let mut gauge = constant_gauge(&t, 5);
    gauge[0].profile = gaussian();
    let mut systems = vec![
        ("dirac free", assemble_model_dirac(&DiracModelSpec::free(Tetrad::identity(s), t.clone(), 1.0), None).unwrap()),
        (
            "dirac gauge",
            assemble_model_dirac(
                &DiracModelSpec {
                    tetrad: Tetrad::boost(s, 3, 0.4).unwrap(),
                    idempotent: t.clone(),
                    gauge,
                    mass: 0.5,
                },
                Some(&line),
            )
            .unwrap(),
        ),
    ];
    for parity in [Parity::Even, Parity::Odd] {
        let spec = HestenesModelSpec {
            covector: CovectorField {
                profile: Profile::Cosine {
                    mode: vec![2],
                    phase: 0.0,
                },
                components: vec![0.2, 0.1, -0.3, 0.4],
            },
            parity,
            ..HestenesModelSpec::standard(1.0).unwrap()
        };
        systems.push(("hestenes", assemble_dirac_hestenes(&spec, Some(&line)).unwrap()));
    }
    let mut rng = sampling::rng(9);
    let terms = (0..3)
        .map(|_| {
            let a = random_multivector(s, &mut rng).parity_part(Parity::Odd);
            let b = random_multivector(s, &mut rng).parity_part(Parity::Even);
            (a, b)
        })
        .collect();
    let eq = EquippedSystemSpec {
        tetrad: Tetrad::identity(s),
        terms,
        source: GenformField::zero(s),
        parity: Some(Parity::Odd),
    };
    systems.push(("equipped", assemble_equipped(&eq, None).unwrap()));
    let mut worst = 0.0f64;
    for (_, a) in &systems {
        let grid = cfl_time(&a.system, line.clone(), 200).unwrap();
        let mut u = FieldGrid::zeros(&grid, a.system.dim());
        let mut solver = CauchySolver::new(&a.system, &grid).unwrap();
        solver
            .run(&mut u, |f| {
                worst = worst.max(f.max_abs());
                Ok(())
            })
            .unwrap();
    }
    outcome(worst <= 1e-14, format!("{} systems, max |u|={worst:.2e}", systems.len()))
}

fn boundary_flux() -> Outcome {
    let s = sig(1, 1);
    let t = HermitianIdempotent::new(Multivector::parse(s, "0.5*e + 0.5*e^1").unwrap()).unwrap();
    let sys = assemble_model_dirac(&DiracModelSpec::free(Tetrad::identity(s), t, 1.0), None).unwrap().system;
    let gamma = validate_friedrichs(&sys).gamma;
    let (_, along_time) = boundary_flux_matrix(&sys, &[1.0, 0.0]).unwrap();
    let r = 0.5f64.sqrt();
    let (_, characteristic) = boundary_flux_matrix(&sys, &[r, r]).unwrap();
    let g = Gammas::new(2);
    let beta = Multivector::generator(s, 1).unwrap();
    let bh = |mu: usize| g.rep(&(&beta * &Multivector::generator(s, mu).unwrap()));
    let oracle_time = oracle::hermitian_eigenvalues(&bh(1))[0];
    let oracle_char = oracle::hermitian_eigenvalues(&((bh(1) + bh(2)) * C64::new(r, 0.0)))[0];
    outcome(
        (along_time - gamma).abs() <= 1e-10
            && (along_time - oracle_time).abs() <= 1e-10
            && characteristic.abs() <= 1e-10
            && (characteristic - oracle_char).abs() <= 1e-10,
        format!(
            "τ=(1,0): {along_time:.3e} (γ={gamma:.3e}, oracle {oracle_time:.3e}); τ=(1,1)/√2: {characteristic:.2e} (oracle {oracle_char:.2e})"
        ),
    )
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("algebra suite", Duration::from_secs(10), algebra),
        ("symmetrization", Duration::from_secs(30), symmetrization),
        ("representation consistency", Duration::from_secs(30), representation),
        ("idempotent suite", Duration::from_secs(10), idempotents),
        ("solver convergence", Duration::from_secs(120), convergence),
        ("dispersion", Duration::from_secs(60), dispersion),
        ("energy conservation", Duration::from_secs(120), energy_conservation),
        ("ideal preservation", Duration::from_secs(120), theorem),
        ("uniqueness / zero data", Duration::from_secs(30), zero_data),
        ("boundary flux", Duration::from_secs(5), boundary_flux),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check);
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && elapsed <= *budget, o.detail),
            Err(_) => (false, "panicked".to_string()),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<28} {} ({:.2} s / {} s) {}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            detail
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
