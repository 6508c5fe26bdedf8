//! Acceptance suite: one PASS/FAIL line per item, tolerances fixed here.

use kcontact::cli::{run_case, simulate, Plan};
use kcontact::corpus::{self, CorpusSection, GaugeSel, Params};
use kcontact::dual::{Scalar, D1};
use kcontact::fields::{fd_grad, grad, PhaseFunction, Pt, ScalarField};
use kcontact::geometry::{chi_null_deficiency, ChartSpec, DarbouxPoint, KTangent};
use kcontact::grid::{GridSpec, SolutionMap};
use kcontact::hdw::{
    canonical_at, canonical_kvf, evolution_lift, gauge_basis, ksymplectic_canonical, kvf_residual,
    map_residual, second_order_residual_via, Mode, Residual,
};
use kcontact::hj::{
    hj_zind, project_q, solve_diagonal_c, verify_complete, zdep_pointwise, zdep_terms,
    ProjectedFromField,
};
use kcontact::integrate::{flow_endpoint, integral_section, BaseField, Exact, GenericField};
use kcontact::sampling::SampleBox;
use kcontact::sections::{SectionZDep, ZDependent};

fn report(id: u32, what: &str, pass: bool, detail: String) {
    println!(
        "acceptance {id} {what}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance {id} {what} failed: {detail}");
}

fn in_domain_points(h: &ScalarField, count: usize, seed: u64) -> Vec<DarbouxPoint> {
    let c = h.chart;
    SampleBox::cube(c.dim(), -1.0, 1.0)
        .uniform(20 * count, seed)
        .into_iter()
        .filter(|x| h.in_domain(x))
        .take(count)
        .map(|x| DarbouxPoint::from_flat(c, &x).unwrap())
        .collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn gauge_kernel_dimension() {
    let mut bad = Vec::new();
    for n in 1..=3 {
        for k in 1..=3 {
            let chart = ChartSpec::new(n, k).unwrap();
            let expected = (n + 1) * (k * k - 1);
            assert_eq!(chart.gauge_dimension(), expected);
            for x in SampleBox::cube(chart.dim(), -3.0, 3.0).uniform(20, (10 * n + k) as u64) {
                let pt = DarbouxPoint::from_flat(chart, &x).unwrap();
                let d = chi_null_deficiency(chart, &pt).unwrap();
                if d != expected {
                    bad.push(format!("(n={n},k={k}) got {d}, want {expected}"));
                }
            }
        }
    }
    report(
        1,
        "gauge kernel dimension on 9 charts x 20 points",
        bad.is_empty(),
        format!("{bad:?}"),
    );
}

#[test]
fn telegrapher_classical_and_end_to_end() {
    let ex = corpus::load("telegrapher").unwrap();
    let p = ex.defaults.clone();
    let (kappa, lambda, eps, c) = (p["kappa"], p["lambda"], p["epsilon"], p["c"]);
    // (c^2 - 1/kappa) a^2 + lambda c a + eps = 0, textbook formula
    let (qa, qb, qc) = (c * c - 1.0 / kappa, lambda * c, eps);
    let disc = (qb * qb - 4.0 * qa * qc).sqrt();
    let roots = [(-qb - disc) / (2.0 * qa), (-qb + disc) / (2.0 * qa)];
    let a = roots.into_iter().find(|r| r.abs() > 1e-12).unwrap();
    assert!((a + 2.0 / 3.0).abs() < 1e-15);
    assert!((p["a"] - a).abs() < 1e-15);
    assert_eq!(p["C0"] + c * p["C1"], 0.0);

    let h = ex.hamiltonian(&p).unwrap();
    let samples = SampleBox::cube(1, 0.5, 2.0).uniform(500, 1);
    let sec = |p: &Params| match ex
        .section("ansatz-linear", p, Mode::Standard, GaugeSel::Auto)
        .unwrap()
    {
        CorpusSection::ZInd(g) => g,
        _ => unreachable!(),
    };
    let sup = hj_zind(&h, &sec(&p), Mode::Standard, &samples)
        .unwrap()
        .sup_residual;
    let flipped = ex.params_with(&[("a", -a)]).unwrap();
    let sup_flip = hj_zind(&h, &sec(&flipped), Mode::Standard, &samples)
        .unwrap()
        .sup_residual;

    let case = ex
        .cases
        .iter()
        .find(|c| c.name == "exponential-end-to-end")
        .unwrap();
    let sim = simulate(&Plan::for_case(&ex, case, 7).unwrap()).unwrap();
    let map = sim.map.expect("lifted map");
    assert_eq!(map.grid.counts, vec![50, 50]);
    let mut u_err: f64 = 0.0;
    for (l, x) in map.values.iter().enumerate() {
        let t = map.grid.node(&map.grid.multi_index(l));
        u_err = u_err.max((x[0] - p["u0"] * (a * (c * t[0] - t[1])).exp()).abs());
    }
    let lifted = Residual::sup(&sim.residuals).max();
    let pass = sup <= 1e-10 && sup_flip > 1e-2 && u_err <= 1e-8 && lifted <= 1e-6;
    report(
        2,
        "telegrapher z-independent HJ and end-to-end",
        pass,
        format!("a={a:.6}, sup={sup:.2e}, flipped sup={sup_flip:.2e}, u error={u_err:.2e}, lifted residual={lifted:.2e}"),
    );
}

#[test]
fn complete_families_in_both_modes() {
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, key) in [
        ("telegrapher", "zdep-family"),
        ("hunter-saxton", "zdep-family"),
    ] {
        let ex = corpus::load(name).unwrap();
        let p = ex.defaults.clone();
        let h = ex.hamiltonian(&p).unwrap();
        let fam = ex.family(key, &p).unwrap();
        let params = ex.family_box(key).tensor_grid(5);
        let base = ex.sample_box(key, &p).unwrap().tensor_grid(9);
        assert_eq!((params.len(), base.len()), (25, 729));
        for mode in [Mode::Standard, Mode::Evolution] {
            let r = verify_complete(fam.as_ref(), &h, mode, &params, &base, 1e-10).unwrap();
            let rt = r.roundtrip.unwrap_or(f64::INFINITY);
            let ok = r.hj.sup_residual <= 1e-10 && r.failing.is_empty() && rt <= 1e-12;
            pass &= ok;
            lines.push(format!(
                "{name} {mode}: sup={:.2e} roundtrip={rt:.2e}",
                r.hj.sup_residual
            ));
        }
    }
    report(3, "z-dependent complete families", pass, lines.join("; "));
}

#[test]
fn hunter_saxton_closed_forms() {
    let ex = corpus::load("hunter-saxton").unwrap();
    let p = ex.defaults.clone();
    let h = ex.hamiltonian(&p).unwrap();

    let lin = ex.solution_map("linear", &p, Mode::Standard, None).unwrap();
    let pde = ex.pde_residual(&p, &lin).unwrap().unwrap();
    let pde_sup = pde.iter().fold(0.0f64, |m, v| m.max(*v));
    // oracle: u = u0 - 2 mu (x + c t)
    let mut u_err: f64 = 0.0;
    for (l, x) in lin.values.iter().enumerate() {
        let t = lin.grid.node(&lin.grid.multi_index(l));
        u_err = u_err.max((x[0] - (p["u0"] - 2.0 * p["mu"] * (t[1] + p["c"] * t[0]))).abs());
    }

    let quad = ex
        .solution_map("quadratic", &p, Mode::Evolution, None)
        .unwrap();
    let quad_sup = Residual::sup(&map_residual(&quad, &h, Mode::Evolution).unwrap()).max();

    let mut log_sup: f64 = 0.0;
    for &mode in ex.solution_info("logarithmic").unwrap().modes {
        let m = ex.solution_map("logarithmic", &p, mode, None).unwrap();
        log_sup = log_sup.max(Residual::sup(&map_residual(&m, &h, mode).unwrap()).max());
    }
    let pass = pde_sup <= 1e-10 && u_err <= 1e-12 && quad_sup <= 1e-10 && log_sup <= 1e-6;
    report(
        4,
        "Hunter-Saxton closed forms",
        pass,
        format!("linear PDE={pde_sup:.2e} (u error {u_err:.1e}), quadratic evolution={quad_sup:.2e}, logarithmic={log_sup:.2e}"),
    );
}

fn q_map(ex: &corpus::ExampleSystem, key: &str, p: &Params) -> SolutionMap {
    let m = ex.solution_map(key, p, Mode::Standard, None).unwrap();
    let n = ex.chart.n;
    let values = m.values.iter().map(|x| x[..n].to_vec()).collect();
    SolutionMap::from_values(m.grid.clone(), n, None, values).unwrap()
}

#[test]
fn affine_z_standard_and_evolution_agree() {
    let shared: &[(&str, &[&str])] = &[
        ("telegrapher", &["exponential"]),
        ("membrane", &["separable", "plane-wave"]),
        ("hunter-saxton", &["linear", "quadratic"]),
        ("first-order-dissipative", &[]),
    ];
    let mut pass = true;
    let mut lines = Vec::new();
    for (name, sols) in shared {
        let ex = corpus::load(name).unwrap();
        let p = ex.defaults.clone();
        let h = ex.hamiltonian(&p).unwrap();
        let c = h.chart;
        let pts = in_domain_points(&h, 100, 5);
        assert_eq!(pts.len(), 100);
        let mut qp: f64 = 0.0;
        for pt in &pts {
            let s = canonical_at(&h, Mode::Standard, pt).unwrap().to_flat();
            let e = canonical_at(&h, Mode::Evolution, pt).unwrap().to_flat();
            for a in 0..c.k {
                let off = a * c.dim();
                qp = qp.max(max_diff(
                    &s[off..off + c.z_index(0)],
                    &e[off..off + c.z_index(0)],
                ));
            }
        }
        pass &= qp <= 1e-12;
        let (std_f, evo_f) = (
            canonical_kvf(&h, Mode::Standard),
            canonical_kvf(&h, Mode::Evolution),
        );
        let mut so: f64 = 0.0;
        for key in *sols {
            let qm = q_map(&ex, key, &p);
            let a = second_order_residual_via(&std_f, &h, &qm).unwrap();
            let b = second_order_residual_via(&evo_f, &h, &qm).unwrap();
            so = so.max(max_diff(&a.residual, &b.residual));
        }
        if sols.is_empty() {
            // no closed-form solution: both routes must give the same outcome on a trial map
            let grid = GridSpec::uniform(c.k, 0.0, 0.05, 8).unwrap();
            let vals = grid
                .nodes()
                .iter()
                .map(|t| vec![(0.3 * t[0] - 0.2 * t[1]).exp(); c.n])
                .collect();
            let qm = SolutionMap::from_values(grid, c.n, None, vals).unwrap();
            let a = second_order_residual_via(&std_f, &h, &qm);
            let b = second_order_residual_via(&evo_f, &h, &qm);
            let same = match (&a, &b) {
                (Ok(x), Ok(y)) => max_diff(&x.residual, &y.residual) <= 1e-12,
                (Err(x), Err(y)) => x.exit_code() == y.exit_code(),
                _ => false,
            };
            pass &= same;
            lines.push(format!(
                "{name}: q/p diff={qp:.1e}, second-order outcomes agree={same}"
            ));
        } else {
            pass &= so <= 1e-12;
            lines.push(format!(
                "{name}: q/p diff={qp:.1e}, second-order diff={so:.1e}"
            ));
        }
    }
    report(
        5,
        "affine-in-z standard/evolution equivalence",
        pass,
        lines.join("; "),
    );
}

#[test]
fn gauge_elements_leave_residual_and_projection_unchanged() {
    let mut pass = true;
    let mut worst: f64 = 0.0;
    let mut moved = 0usize;
    for (name, key) in [("telegrapher", "ansatz-linear"), ("membrane", "plane-wave")] {
        let ex = corpus::load(name).unwrap();
        let p = ex.defaults.clone();
        let h = ex.hamiltonian(&p).unwrap();
        let c = h.chart;
        let gamma = match ex.section(key, &p, Mode::Standard, GaugeSel::Auto).unwrap() {
            CorpusSection::ZInd(g) => g,
            _ => unreachable!(),
        };
        let pts = in_domain_points(&h, 10, 21);
        let basis = gauge_basis(c, &pts[0]).unwrap();
        let coeffs = SampleBox::cube(basis.len(), -1.0, 1.0).uniform(50, 99);
        for mode in [Mode::Standard, Mode::Evolution] {
            let x = canonical_kvf(&h, mode);
            let qs = SampleBox::cube(c.n, 0.5, 1.5).uniform(5, 3);
            let base = ProjectedFromField {
                field: x.clone(),
                gamma: gamma.clone(),
            };
            let direct = project_q(&h, &gamma).unwrap();
            for w in &coeffs {
                let mut g = KTangent::zeros(c);
                for (wi, b) in w.iter().zip(&basis) {
                    g = g.add(&b.coeffs.scale(*wi));
                }
                let xg = x.plus_constant(&g);
                for pt in &pts {
                    let r = kvf_residual(&xg, &h, mode, pt).unwrap();
                    worst = worst.max(r.max());
                }
                let shifted = ProjectedFromField {
                    field: xg,
                    gamma: gamma.clone(),
                };
                for q in &qs {
                    let (a, b) = (base.eval(q).unwrap(), shifted.eval(q).unwrap());
                    if a != b || direct.eval(q).unwrap() != a {
                        moved += 1;
                    }
                }
            }
        }
    }
    pass &= worst <= 1e-10 && moved == 0;
    report(
        6,
        "gauge invariance over 50 random gauge elements",
        pass,
        format!("max residual={worst:.2e}, projections changed={moved}"),
    );
}

struct Oscillators;

impl PhaseFunction for Oscillators {
    fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
        // n = 2, k = 2
        let kinetic = (0..4).fold(S::cst(0.0), |s, m| {
            s + x.p(m / 2, m % 2) * x.p(m / 2, m % 2) * 0.5
        });
        kinetic + x.q(0) * x.q(0) * 0.5 + x.q(1) * x.q(1) * 1.5 + x.q(0) * x.q(1) * 0.25
    }
}

struct SineGordon;

impl PhaseFunction for SineGordon {
    fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
        // n = 1, k = 3
        (x.p(0, 0) * x.p(0, 0) - x.p(1, 0) * x.p(1, 0) - x.p(2, 0) * x.p(2, 0)) * 0.5 - x.q(0).cos()
    }
}

#[test]
fn evolution_lift_of_ksymplectic_fields() {
    let hs = [
        ScalarField::new(ChartSpec::new(2, 2).unwrap(), "oscillators", Oscillators),
        ScalarField::new(ChartSpec::new(1, 3).unwrap(), "sine-gordon", SineGordon),
    ];
    let mut eta: f64 = 0.0;
    let mut res: f64 = 0.0;
    for hh in &hs {
        let c = hh.chart;
        let e = evolution_lift(hh, &ksymplectic_canonical(hh)).unwrap();
        for pt in in_domain_points(hh, 50, 8) {
            let kt = e.at(&pt).unwrap();
            for (a, ea) in kt.comp.iter().enumerate() {
                let theta: f64 = (0..c.n).map(|i| pt.p[a][i] * ea.q[i]).sum();
                eta = eta.max((ea.z[a] - theta).abs());
            }
            res = res.max(kvf_residual(&e, hh, Mode::Evolution, &pt).unwrap().max());
        }
    }
    report(
        7,
        "evolution lift of k-symplectic fields",
        eta <= 1e-12 && res <= 1e-10,
        format!("max eta^a(E_a)={eta:.2e}, evolution residual={res:.2e}"),
    );
}

/// Rotation and dilation in the plane; they commute.
struct RotDil;

impl GenericField for RotDil {
    fn dim(&self) -> usize {
        2
    }
    fn k(&self) -> usize {
        2
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<Vec<S>> {
        vec![vec![-x[1], x[0]], vec![x[0], x[1]]]
    }
}

/// Damped contact oscillator with k = 1, n = 1.
struct Contact;

impl PhaseFunction for Contact {
    fn eval<S: Scalar>(&self, x: Pt<'_, S>) -> S {
        (x.p(0, 0) * x.p(0, 0) + x.q(0) * x.q(0)) * 0.5 + x.z(0) * 0.3
    }
}

struct ContactSection;

impl ContactSection {
    fn p<S: Scalar>(q: S, z: S) -> S {
        q * 0.7 + (z * 0.4).sin() + q * z * 0.2
    }
}

impl ZDependent for ContactSection {
    fn n(&self) -> usize {
        1
    }
    fn k(&self) -> usize {
        1
    }
    fn momenta<S: Scalar>(&self, q: &[S], z: &[S]) -> Vec<S> {
        vec![Self::p(q[0], z[0])]
    }
}

#[test]
fn property_suites() {
    // autodiff against central differences
    let mut ad: f64 = 0.0;
    for ex in corpus::all() {
        let h = ex.hamiltonian(&ex.defaults).unwrap();
        for pt in in_domain_points(&h, 30, 13) {
            let (g, f) = (
                grad(&h, &pt).unwrap().to_flat(),
                fd_grad(&h, &pt, 1e-5).unwrap().to_flat(),
            );
            for (x, y) in g.iter().zip(&f) {
                ad = ad.max((x - y).abs() / x.abs().max(1.0));
            }
        }
    }

    // flow-order independence for commuting fields
    let tel = corpus::load("telegrapher").unwrap();
    let tp = tel.defaults.clone();
    let th = tel.hamiltonian(&tp).unwrap();
    let gamma = match tel
        .section("ansatz-linear", &tp, Mode::Standard, GaugeSel::Auto)
        .unwrap()
    {
        CorpusSection::ZInd(g) => g,
        _ => unreachable!(),
    };
    let proj = project_q(&th, &gamma).unwrap();
    let rd = Exact(RotDil);
    let fields: [(&dyn BaseField, Vec<f64>); 2] = [(&proj, vec![1.3]), (&rd, vec![0.8, -0.4])];
    let mut order: f64 = 0.0;
    for (f, x0) in fields {
        let disp = [0.7, -0.5];
        let a = flow_endpoint(f, &x0, &disp, &[0, 1], 200.0).unwrap();
        let b = flow_endpoint(f, &x0, &disp, &[1, 0], 200.0).unwrap();
        order = order.max(max_diff(&a, &b));
    }

    // RK4 convergence against u0 exp(a (c t - x))
    let (a, c, u0) = (tp["a"], tp["c"], 1.3);
    let grid = GridSpec::uniform(2, 0.0, 0.25, 5).unwrap();
    let err = |steps: usize| {
        let s = integral_section(&proj, &[u0], &grid, steps).unwrap();
        s.map
            .values
            .iter()
            .enumerate()
            .map(|(l, x)| {
                let t = grid.node(&grid.multi_index(l));
                (x[0] - u0 * (a * (c * t[0] - t[1])).exp()).abs()
            })
            .fold(0.0f64, f64::max)
    };
    let (e1, e2) = (err(1), err(2));
    let factor = e1 / e2;

    // k = 1 reduction: C = -(h o gamma) and the contact HJ equation
    let h1 = ScalarField::new(ChartSpec::new(1, 1).unwrap(), "contact", Contact);
    let g1 = SectionZDep::new("contact-section", ContactSection).unwrap();
    let mut red: f64 = 0.0;
    for s in SampleBox::cube(2, -1.0, 1.0).uniform(100, 17) {
        let (q, z) = (s[0], s[1]);
        let cm = solve_diagonal_c(&h1, &g1, Mode::Standard, &[q], &[z]).unwrap();
        // h o gamma and its partials, computed with duals directly
        let hg = |q: D1, z: D1| {
            let p = ContactSection::p(q, z);
            (p * p + q * q) * 0.5 + z * 0.3
        };
        let hq = hg(D1::new(q, 1.0), D1::new(z, 0.0));
        let hz = hg(D1::new(q, 0.0), D1::new(z, 1.0));
        let p = ContactSection::p(q, z);
        let pz = ContactSection::p(D1::new(q, 0.0), D1::new(z, 1.0)).eps;
        let contact = hq.eps + p * hz.eps - hq.re * pz;
        let t = zdep_terms(&h1, &g1, &[q], &[z]).unwrap();
        red = red
            .max((cm[0][0] + hq.re).abs())
            .max((zdep_pointwise(&t, &cm)[0] - contact).abs());
    }

    let pass = ad <= 1e-6 && order <= 1e-8 && factor >= 8.0 && red <= 1e-12;
    report(
        8,
        "property suites",
        pass,
        format!("autodiff/FD={ad:.1e}, flow order={order:.1e}, RK4 factor={factor:.2}, k=1 reduction={red:.1e}"),
    );
}

#[test]
fn negative_corpus_cases() {
    let mut total = 0;
    let mut bad = Vec::new();
    for ex in corpus::all() {
        for case in ex.cases.iter().filter(|c| !c.valid()) {
            total += 1;
            let out = run_case(&ex, case, 3).unwrap();
            if out.verdict != case.verdict || out.exit_code != case.exit_code {
                bad.push(format!(
                    "{}/{}: {} exit {}",
                    ex.key, case.name, out.verdict, out.exit_code
                ));
            }
        }
    }
    report(
        9,
        "negative-path corpus",
        total > 0 && bad.is_empty(),
        format!("{total} cases, mismatches {bad:?}"),
    );
}
