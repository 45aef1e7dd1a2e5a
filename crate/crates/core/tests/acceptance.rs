mod common;

use std::f64::consts::PI;
use std::time::Instant;

use rand::Rng;

use common::{assemble, conditioned, nondegenerate, power_bounded, rng, Instance};
use unitary_asymptotes::asymptote::{
    build_asymptote, check_equivalence, commutant_mapping, direct_sum_asymptote, project_summand,
    transport_similarity, UnitaryAsymptote,
};
use unitary_asymptotes::atomset::AtomSet;
use unitary_asymptotes::limit::{cesaro_limit, exact_limit};
use unitary_asymptotes::linalg::{self, c64, cis, op_norm, CMat, CVec};
use unitary_asymptotes::models::toeplitz::ToeplitzParams;
use unitary_asymptotes::models::{
    ac_quasianalytic_check, build_toeplitz_model, build_toeplitz_tuple, ArcSet, WeightedShiftModel,
};
use unitary_asymptotes::norm_control::norm_control;
use unitary_asymptotes::quasi::{is_quasianalytic, split_non_quasianalytic, DEFAULT_RANDOM_SAMPLES};
use unitary_asymptotes::report::Thresholds;
use unitary_asymptotes::reproduce::{example9, reproduce_example, toeplitz_joint_decay, toeplitz_orbit_trend};
use unitary_asymptotes::spectral::{joint_diagonalize, AtomicSpectralMeasure, DEFAULT_CLUSTER_TOL};
use unitary_asymptotes::tuple::{MultiIndex, OperatorTuple};
use unitary_asymptotes::Error;

struct Outcome {
    title: &'static str,
    pass: bool,
    detail: String,
}

fn verdict(title: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { title, pass, detail }
}

fn main() {
    let criteria: [fn() -> Outcome; 12] = [
        criterion_01_intertwiner_norm_control,
        criterion_02_dual_construction,
        criterion_03_kernel_is_stable_subspace,
        criterion_04_quasianalytic_criteria_agree,
        criterion_05_hyperinvariant_split,
        criterion_06_direct_sum_round_trip,
        criterion_07_norm_control_and_commutant_mapping,
        criterion_08_weighted_shift_loc,
        criterion_09_toeplitz_model,
        criterion_10_lattice_laws,
        criterion_11_reproduced_reports,
        criterion_12_spectral_radius_condition,
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = Vec::new();
    for (k, run) in criteria.iter().enumerate() {
        let id = k + 1;
        let tag = format!("criterion_{id:02}");
        if !filter.is_empty() && !filter.iter().any(|f| tag.contains(f.as_str())) {
            continue;
        }
        let out = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome { title: "panicked", pass: false, detail: msg }
        });
        println!("criterion {id:>2} {} {}: {}", if out.pass { "PASS" } else { "FAIL" }, out.title, out.detail);
        if !out.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}

fn pipeline(t: &OperatorTuple) -> (UnitaryAsymptote, Option<AtomicSpectralMeasure>) {
    let a = build_asymptote(t).expect("asymptote");
    if a.is_degenerate() {
        return (a, None);
    }
    let m = joint_diagonalize(a.u(), DEFAULT_CLUSTER_TOL).expect("joint spectrum");
    (a, Some(m))
}

fn criterion_01_intertwiner_norm_control() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut floor_ok = true;
    let mut notes = Vec::new();
    for lambda in [c64(0.0, 1.0), cis(PI / 4.0), c64(-1.0, 0.0)] {
        let e = example9(lambda, 0).expect("reproduction");
        worst = worst.max((e.kappa_op.upper - 1.0).abs());
        floor_ok &= e.z_inv_norm >= e.z_inv_floor * (1.0 - 1e-12) && e.verdict.is_similar();
        notes.push(format!("|Z^-1|={:.4} >= {:.4}", e.z_inv_norm, e.z_inv_floor));
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        "optimal norm-control of (Z, W) equals 1",
        worst < 1e-6 && floor_ok && secs < 1.0,
        format!("max |kappa-1|={worst:.2e}, {}, {secs:.3}s", notes.join(", ")),
    )
}

fn criterion_02_dual_construction() -> Outcome {
    let mut r = rng(2);
    let start = Instant::now();
    let (mut diff, mut iso) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let inst = power_bounded(&mut r);
        let c = match cesaro_limit(&inst.t, unitary_asymptotes::asymptote::DEFAULT_MAX_N, 1e-12) {
            Ok(c) => c,
            Err(Error::HorizonExhausted { best }) => *best,
            Err(e) => panic!("cesaro: {e}"),
        };
        let e = exact_limit(&inst.t).expect("exact");
        let scale = op_norm(&e.a).max(1.0);
        diff = diff.max(op_norm(&(&c.a - &e.a)) / scale);
        iso = iso.max(c.isometry_residual(&inst.t)).max(e.isometry_residual(&inst.t));
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        "Cesaro and exact limits agree",
        diff < 1e-7 && iso < 1e-8 && secs < 60.0,
        format!("max rel diff={diff:.2e}, isometry={iso:.2e}, {secs:.1}s over 200 tuples"),
    )
}

fn criterion_03_kernel_is_stable_subspace() -> Outcome {
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    let mut dims_ok = true;
    for _ in 0..200 {
        let inst = power_bounded(&mut r);
        let a = build_asymptote(&inst.t).expect("asymptote");
        let d = inst.t.dim();
        let ker = if a.is_degenerate() {
            linalg::identity(d)
        } else {
            linalg::nullspace_below(a.x(), 1e-8 * a.x_norm())
        };
        let stable = inst.stable_subspace();
        if ker.ncols() != stable.ncols() {
            dims_ok = false;
            continue;
        }
        if ker.ncols() > 0 {
            worst = worst.max(linalg::max_principal_angle(&ker, &stable));
        }
    }
    verdict(
        "ker X equals the stable subspace",
        dims_ok && worst < 1e-6,
        format!("dimensions match={dims_ok}, max principal angle={worst:.2e}"),
    )
}

/// Single joint point, all unimodular: `X` injective with one atom.
fn single_atom(r: &mut impl Rng, n: usize, d: usize) -> Instance {
    loop {
        let inst = assemble(r, n, d, d, 0.0, 0.0);
        if inst.points.iter().all(|p| p == &inst.points[0]) {
            return inst;
        }
    }
}

fn criterion_04_quasianalytic_criteria_agree() -> Outcome {
    let mut r = rng(4);
    let mut disagreements = Vec::new();
    let mut checked = 0;
    for k in 0..200 {
        let inst = power_bounded(&mut r);
        let (a, m) = pipeline(&inst.t);
        let Some(m) = m else { continue };
        checked += 1;
        match is_quasianalytic(&a, &m, DEFAULT_RANDOM_SAMPLES, k) {
            Ok(_) => {}
            Err(Error::CriteriaDisagree(s)) => disagreements.push(s),
            Err(e) => panic!("instance {k}: {e}"),
        }
    }
    let mut engineered_ok = true;
    for k in 0..20 {
        let n = 1 + k % 3;
        let quasi = single_atom(&mut r, n, 2 + k % 5);
        let (a, m) = pipeline(&quasi.t);
        match is_quasianalytic(&a, &m.unwrap(), DEFAULT_RANDOM_SAMPLES, k as u64) {
            Ok(q) => engineered_ok &= q.quasianalytic && q.injective_x,
            Err(Error::CriteriaDisagree(s)) => disagreements.push(s),
            Err(e) => panic!("engineered quasianalytic {k}: {e}"),
        }
        let d = 3 + k % 6;
        let kernel = assemble(&mut r, n, d, 1 + k % (d - 1), 0.1, 0.8);
        let (a, m) = pipeline(&kernel.t);
        match is_quasianalytic(&a, &m.unwrap(), DEFAULT_RANDOM_SAMPLES, k as u64) {
            Ok(q) => engineered_ok &= !q.quasianalytic && !q.injective_x,
            Err(Error::CriteriaDisagree(s)) => disagreements.push(s),
            Err(e) => panic!("engineered kernel-bearing {k}: {e}"),
        }
    }
    verdict(
        "criteria (i)/(ii)/(iii) agree",
        disagreements.is_empty() && engineered_ok,
        format!(
            "{checked} random + 40 engineered, disagreements={}, engineered verdicts correct={engineered_ok}",
            disagreements.len()
        ),
    )
}

fn criterion_05_hyperinvariant_split() -> Outcome {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    let mut splits = 0;
    for k in 0..200u64 {
        let inst = if k % 2 == 0 { power_bounded(&mut r) } else { nondegenerate(&mut r, 10) };
        let (a, m) = pipeline(&inst.t);
        let Some(m) = m else { continue };
        let q = is_quasianalytic(&a, &m, DEFAULT_RANDOM_SAMPLES, k).expect("quasi");
        if q.quasianalytic {
            continue;
        }
        match split_non_quasianalytic(&inst.t, &a, &m) {
            Ok(s) => {
                splits += 1;
                let dim = s.subspace.dim();
                if dim == 0 || dim == inst.t.dim() {
                    failures.push(format!("instance {k}: trivial M"));
                }
                let comm = inst.t.commutant_basis();
                let res = comm.basis().iter().map(|c| s.subspace.invariance_residual(c)).fold(0.0, f64::max);
                worst = worst.max(res);
            }
            Err(e) => failures.push(format!("instance {k}: {e}")),
        }
    }
    verdict(
        "non-quasianalytic tuples split",
        failures.is_empty() && worst < 1e-8 && splits > 0,
        format!("{splits} splits, max invariance residual={worst:.2e}, failures={failures:?}"),
    )
}

fn criterion_06_direct_sum_round_trip() -> Outcome {
    let mut r = rng(6);
    let mut failures = Vec::new();
    for k in 0..50 {
        let n = r.random_range(1..=3);
        let mk = |r: &mut rand_chacha::ChaCha8Rng| {
            let d = r.random_range(1..=6);
            let u = r.random_range(0..=d);
            assemble(r, n, d, u, 0.05, 0.9)
        };
        let (t1, t2) = (mk(&mut r).t, mk(&mut r).t);
        let sum = t1.direct_sum(&t2).expect("direct sum");
        let a = build_asymptote(&sum).expect("asymptote of sum");
        let a1 = build_asymptote(&t1).expect("asymptote 1");
        let a2 = build_asymptote(&t2).expect("asymptote 2");
        let b = direct_sum_asymptote(&a1, &a2).expect("sum of asymptotes");
        let ok_sum = check_equivalence(&a, &b).map(|e| e.verdict.is_similar()).unwrap_or(false);
        let p1 = project_summand(&a, &t1, 0).expect("project 1");
        let p2 = project_summand(&a, &t2, t1.dim()).expect("project 2");
        let ok1 = check_equivalence(&p1, &a1).map(|e| e.verdict.is_similar()).unwrap_or(false);
        let ok2 = check_equivalence(&p2, &a2).map(|e| e.verdict.is_similar()).unwrap_or(false);
        if !(ok_sum && ok1 && ok2) {
            failures.push(format!("pair {k}: sum={ok_sum} first={ok1} second={ok2}"));
        }
    }
    verdict("direct sum round trip", failures.is_empty(), format!("50 pairs, failures={failures:?}"))
}

fn criterion_07_norm_control_and_commutant_mapping() -> Outcome {
    let mut r = rng(7);
    let (mut kappa_min, mut hom, mut transport) = (f64::INFINITY, 0.0f64, 0.0f64);
    let mut transported_similar = true;
    for k in 0..60u64 {
        let inst = nondegenerate(&mut r, 8);
        let (a, m) = pipeline(&inst.t);
        let m = m.expect("nonzero X");
        let nc = norm_control(&a, &m, 4, k).expect("norm control");
        kappa_min = kappa_min.min(nc.kappa_aop);

        let comm = inst.t.commutant_basis();
        let combo = |r: &mut rand_chacha::ChaCha8Rng| {
            comm.basis().iter().fold(CMat::zeros(inst.t.dim(), inst.t.dim()), |acc, b| {
                acc + b * c64(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5)
            })
        };
        let (c1, c2) = (combo(&mut r), combo(&mut r));
        let g1 = commutant_mapping(&a, &c1).expect("gamma");
        let g2 = commutant_mapping(&a, &c2).expect("gamma");
        let g12 = commutant_mapping(&a, &(&c1 * &c2)).expect("gamma");
        let gi = commutant_mapping(&a, &linalg::identity(inst.t.dim())).expect("gamma");
        let sc = (op_norm(&g1) * op_norm(&g2)).max(f64::MIN_POSITIVE);
        hom = hom
            .max(op_norm(&(&g12 - &g1 * &g2)) / sc)
            .max(op_norm(&(gi - linalg::identity(a.k_dim()))))
            .max(op_norm(&(a.x() * &c1 - &g1 * a.x())) / (op_norm(&g1) * a.x_norm()).max(f64::MIN_POSITIVE));

        let z = conditioned(&mut r, inst.t.dim(), 5.0);
        let tt = inst.t.similar(&z).expect("similar tuple");
        let a2 = build_asymptote(&tt).expect("asymptote of similar tuple");
        let moved = transport_similarity(&a2, &inst.t, &z).expect("transport");
        transport = transport.max(moved.intertwining_residual());
        transported_similar &= check_equivalence(&a, &moved).map(|e| e.verdict.is_similar()).unwrap_or(false);
    }
    verdict(
        "kappa_aop >= 1, gamma homomorphism, transport",
        kappa_min >= 1.0 - 1e-8 && hom < 1e-8 && transport < 1e-8 && transported_similar,
        format!(
            "min kappa_aop={kappa_min:.6}, gamma residual={hom:.2e}, transport residual={transport:.2e}, \
             transported pair similar={transported_similar}"
        ),
    )
}

fn criterion_08_weighted_shift_loc() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for n in [1usize, 2] {
        for big_n in [8usize, 16] {
            let m = WeightedShiftModel::new(n, big_n).expect("window");
            let rep = m.loc_report(8, 0);
            let floor = 2f64.powi(big_n as i32 / 2);
            pass &= rep.loc_deviation == 0.0 && rep.inverse_ratio >= floor;
            lines.push(format!("n={n} N={big_n}: dev={:e} inv={}>={}", rep.loc_deviation, rep.inverse_ratio, floor));
        }
    }
    verdict("weighted shift LOC", pass, lines.join("; "))
}

fn criterion_09_toeplitz_model() -> Outcome {
    let model = build_toeplitz_model(&[ArcSet::arc(0.0, PI)], 256, 4096).expect("model");
    let eps_ok = model.eps() < 1e-3;
    let trend = toeplitz_orbit_trend(&model, 20, 200, 0);
    let q = ac_quasianalytic_check(&model, 50, 0);
    let arcs = [ArcSet::arc(0.2 * PI, 0.8 * PI), ArcSet::arc(1.2 * PI, 1.8 * PI)];
    let two = build_toeplitz_tuple(&arcs, 256, 4096, &ToeplitzParams::default()).expect("two-symbol model");
    let decay = toeplitz_joint_decay(&two, 400, 20, 0);
    let pass = eps_ok && trend.nonincreasing && trend.worst_ratio <= 5.0 && q.agrees && decay < 1e-3;
    verdict(
        "Hardy-space Toeplitz model",
        pass,
        format!(
            "eps={:.2e}, nonincreasing={}, gap/quadrature={:.2} (<=5), pi_a=omega_a={} (missing cells {}), joint decay={:.1e}",
            model.eps(),
            trend.nonincreasing,
            trend.worst_ratio,
            q.agrees,
            q.missing_cells,
            decay
        ),
    )
}

fn random_atomset(r: &mut impl Rng, universe: usize) -> AtomSet {
    let idx: Vec<usize> = (0..universe).filter(|_| r.random::<bool>()).collect();
    AtomSet::from_indices(7, universe, &idx)
}

fn random_arcset(r: &mut impl Rng) -> ArcSet {
    // coarse ticks make coincident endpoints common
    let grid = unitary_asymptotes::models::arcs::TURN / 64;
    let count = r.random_range(0..=3);
    let arcs: Vec<ArcSet> = (0..count)
        .map(|_| ArcSet::arc_ticks(r.random_range(0..64) * grid, r.random_range(0..64) * grid))
        .collect();
    arcs.iter().fold(ArcSet::empty(), |acc, a| acc.join(a))
}

fn criterion_10_lattice_laws() -> Outcome {
    let mut r = rng(10);
    let mut atom_fail = 0;
    for _ in 0..10_000 {
        let u = r.random_range(0..=130);
        let (a, b, c) = (random_atomset(&mut r, u), random_atomset(&mut r, u), random_atomset(&mut r, u));
        let j = |x: &AtomSet, y: &AtomSet| x.join(y).unwrap();
        let m = |x: &AtomSet, y: &AtomSet| x.meet(y).unwrap();
        let full = AtomSet::full(7, u);
        let empty = AtomSet::empty(7, u);
        let ok = j(&a, &b) == j(&b, &a)
            && m(&a, &b) == m(&b, &a)
            && j(&j(&a, &b), &c) == j(&a, &j(&b, &c))
            && m(&m(&a, &b), &c) == m(&a, &m(&b, &c))
            && j(&a, &m(&a, &b)) == a
            && m(&a, &j(&a, &b)) == a
            && m(&a, &j(&b, &c)) == j(&m(&a, &b), &m(&a, &c))
            && j(&a, &m(&b, &c)) == m(&j(&a, &b), &j(&a, &c))
            && j(&a, &a.complement()) == full
            && m(&a, &a.complement()) == empty
            && j(&a, &b).complement() == m(&a.complement(), &b.complement())
            && a.complement().complement() == a
            && a.difference(&b).unwrap() == m(&a, &b.complement())
            && a.is_subset(&j(&a, &b)).unwrap()
            && m(&a, &b).len() + j(&a, &b).len() == a.len() + b.len()
            && a.essentially_equal(&b).unwrap() == (a == b);
        if !ok {
            atom_fail += 1;
        }
    }
    let mut arc_fail = 0;
    for _ in 0..10_000 {
        let (a, b, c) = (random_arcset(&mut r), random_arcset(&mut r), random_arcset(&mut r));
        let ok = a.join(&b) == b.join(&a)
            && a.meet(&b) == b.meet(&a)
            && a.join(&b).join(&c) == a.join(&b.join(&c))
            && a.meet(&b).meet(&c) == a.meet(&b.meet(&c))
            && a.join(&a.meet(&b)) == a
            && a.meet(&a.join(&b)) == a
            && a.meet(&b.join(&c)) == a.meet(&b).join(&a.meet(&c))
            && a.join(&b.meet(&c)) == a.join(&b).meet(&a.join(&c))
            && a.join(&a.complement()).is_full()
            && a.meet(&a.complement()).is_empty()
            && a.join(&b).complement() == a.complement().meet(&b.complement())
            && a.complement().complement() == a
            && a.difference(&b) == a.meet(&b.complement())
            && a.is_subset(&a.join(&b))
            && a.meet(&b).ticks() + a.join(&b).ticks() == a.ticks() + b.ticks();
        if !ok {
            arc_fail += 1;
        }
    }
    verdict(
        "atom-set and arc-set lattice laws",
        atom_fail == 0 && arc_fail == 0,
        format!("10000 cases each, atom failures={atom_fail}, arc failures={arc_fail}"),
    )
}

fn criterion_11_reproduced_reports() -> Outcome {
    let th = Thresholds::default();
    let r14 = reproduce_example("14", 0, &th).expect("doubled shift report");
    let r17 = reproduce_example("17", 0, &th).expect("invertible pair report");
    let names = |r: &unitary_asymptotes::report::Report| {
        r.checks.iter().map(|c| format!("{}={}", c.name, c.pass)).collect::<Vec<_>>().join(", ")
    };
    let has = |r: &unitary_asymptotes::report::Report, n: &str| r.checks.iter().any(|c| c.name == n && c.pass);
    let pass = r14.all_pass()
        && has(&r14, "norm(R^k)=2^k")
        && has(&r14, "X_lambda R = lambda X_lambda")
        && has(&r14, "full Vandermonde rank")
        && r17.all_pass()
        && has(&r17, "zero type certified")
        && has(&r17, "orbit minimum equals norm(h)");
    verdict("doubled shift and invertible pair reports", pass, format!("[{}] [{}]", names(&r14), names(&r17)))
}

fn criterion_12_spectral_radius_condition() -> Outcome {
    let mut r = rng(12);
    let mut min_r = f64::INFINITY;
    let mut inter: f64 = 0.0;
    for k in 0..100 {
        let n = r.random_range(1..=3);
        let d = r.random_range(2..=8);
        let u = r.random_range(1..=d);
        // every third tuple has an expanding remainder
        let (lo, hi) = if k % 3 == 0 { (1.1, 2.0) } else { (0.05, 0.9) };
        let inst = assemble(&mut r, n, d, u, lo, hi);
        let si = linalg::inverse(&inst.s).expect("invertible");
        let x0 = si.rows(0, u).into_owned();
        let mats: Vec<CMat> = (0..n)
            .map(|i| CMat::from_diagonal(&CVec::from_iterator(u, inst.points.iter().map(|p| p[i]))))
            .collect();
        let w = OperatorTuple::with_default_tol(mats).expect("diagonal unitaries");
        inter = inter.max(inst.t.intertwining_residual(&x0, &w) / op_norm(&x0));
        let rep = inst.t.spectral_radius_report(&MultiIndex::box_indices(n, 3)).expect("radii");
        min_r = min_r.min(rep.min_radius());
    }
    verdict(
        "r(T^k) >= 1 with a unitary intertwiner",
        min_r >= 1.0 - 1e-8 && inter < 1e-8,
        format!("min r(T^k)={min_r:.12}, intertwiner residual={inter:.2e}"),
    )
}
