use std::path::{Path, PathBuf};

use anyhow::anyhow;
use rtbp::catalog::{self, SUN_JUPITER_MU};
use rtbp::curvegeom::Point;
use rtbp::dynamics::{MassParameter, RotatingState};
use rtbp::integrate::{self, IntegratorConfig};
use rtbp::periodarea::{
    classify_about, classify_case, l4_direction_analysis, verify::verify_classified, Classification, L4Report,
    L4Verdict, QuadratureConfig, VerificationReport,
};
use rtbp::periodicity::{closed_orbit_from, detect_period, ClosedOrbit};

use crate::document::{self, OrbitDocument};
use crate::error::CliError;
use crate::svg::{Panel, render};

/// Where an orbit comes from.
pub enum Source {
    Example(u8),
    File(PathBuf),
    InitialCondition { state: RotatingState, mu: f64, hint: Option<(f64, f64)> },
}

impl Source {
    pub fn from_args(
        file: Option<PathBuf>,
        example: Option<u8>,
        ic: Option<Vec<f64>>,
        mu: Option<f64>,
        t0: f64,
        hint: Option<Vec<f64>>,
    ) -> Result<Self, CliError> {
        let hint = match hint.as_deref() {
            None => None,
            Some([a, b]) => Some((*a, *b)),
            Some(_) => return Err(CliError::Other(anyhow!("--period-hint takes two numbers a,b"))),
        };
        match (file, example, ic) {
            (Some(f), None, None) => Ok(Source::File(f)),
            (None, Some(id), None) => Ok(Source::Example(id)),
            (None, None, Some(v)) => {
                let [y1, y2, v1, v2] = v[..] else {
                    return Err(CliError::Other(anyhow!("--ic takes four numbers y1,y2,v1,v2")));
                };
                Ok(Source::InitialCondition {
                    state: RotatingState::new(y1, y2, v1, v2, t0),
                    mu: mu.unwrap_or(SUN_JUPITER_MU),
                    hint,
                })
            }
            (None, None, None) => Err(CliError::Other(anyhow!("give an orbit file, --example or --ic"))),
            _ => Err(CliError::Other(anyhow!("give only one of an orbit file, --example or --ic"))),
        }
    }

    /// Integrates the orbit: by period detection for initial conditions and
    /// examples, with the stored period for orbit files.
    pub fn orbit(&self, cfg: &IntegratorConfig) -> Result<(ClosedOrbit, String), CliError> {
        match self {
            Source::Example(id) => {
                let r = reference(*id)?;
                let o = detect_period(&r.initial, r.mu(), Some(r.window), cfg)?;
                Ok((o, format!("reference example {id}")))
            }
            Source::File(path) => {
                let doc = OrbitDocument::load(path)?;
                let o = closed_orbit_from(&doc.initial_state(), doc.mass()?, doc.period, cfg)?;
                Ok((o, doc.provenance))
            }
            Source::InitialCondition { state, mu, hint } => {
                let mu = mass(*mu)?;
                let o = detect_period(state, mu, *hint, cfg)?;
                Ok((o, "initial condition".into()))
            }
        }
    }
}

fn mass(mu: f64) -> Result<MassParameter, CliError> {
    MassParameter::new(mu).map_err(|e| CliError::Other(e.into()))
}

fn reference(id: u8) -> Result<&'static catalog::ReferenceOrbit, CliError> {
    catalog::reference_orbit(id).ok_or_else(|| CliError::Other(anyhow!("no example {id}; choose 1 to 4")))
}

/// Six significant digits for the human-readable summaries.
pub fn sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..6).contains(&e) {
        format!("{:.*}", (5 - e).max(0) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

fn integrator(tol: f64) -> IntegratorConfig {
    IntegratorConfig::with_tolerance(tol)
}

fn quadrature(cell_tolerance: Option<f64>) -> QuadratureConfig {
    let mut q = QuadratureConfig::default();
    if let Some(t) = cell_tolerance {
        q.cell_tolerance = t;
    }
    q
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn vertices(o: &ClosedOrbit) -> Vec<Point> {
    let s = o.trajectory.samples();
    s[..s.len() - 1].iter().map(RotatingState::position).collect()
}

fn orbit_plot(o: &ClosedOrbit, cls: Option<&Classification>, title: &str, description: &str) -> String {
    let mut left = Panel::new(title).with_system(o.mu, Some(o.c));
    left.curves.push((vertices(o), "#000000"));
    let mut panels = vec![left];
    if let Some(lift) = cls.and_then(|c| c.lift.as_ref()) {
        let mut right = Panel::new(format!("lifting, n = {}", lift.n));
        right.curves.push((lift.beta.vertices().to_vec(), "#c00000"));
        right.markers.push(crate::svg::Marker { at: lift.center, label: "center".into(), color: "#d08000" });
        panels.push(right);
    }
    render(&panels, description)
}

fn print_report(r: &VerificationReport) {
    println!("case:               {}", r.case);
    println!("period T:           {}", sig(r.period));
    println!("2T:                 {}", sig(r.two_t));
    println!("Jacobi C:           {}", sig(r.jacobi));
    println!("theta change:       {}", sig(r.theta_total_change));
    println!("theta residual:     {}", sig(r.theta_rms_residual));
    println!("boundary flux:      {}", sig(r.boundary_integral));
    if let Some(e) = r.lift_roundtrip_error {
        println!("lift roundtrip:     {}", sig(e));
    }
    match (r.area_integral, r.area_error) {
        (Some(a), Some(e)) => println!("area integral I:    {} (error estimate {})", sig(a), sig(e)),
        _ => println!("area integral I:    unavailable"),
    }
    if let (Some(rhs), Some(res)) = (r.identity_rhs, r.residual_identity) {
        println!("identity:           {}: {} vs {} (residual {})", r.case.statement(), sig(r.two_t), sig(rhs), sig(res));
    }
    if let Some(s) = r.residual_stokes {
        println!("flux vs area:       residual {}", sig(s));
    }
    if let Some(f) = &r.quadrature_failure {
        println!("quadrature failure: {f}");
    }
}

fn pipeline(o: &ClosedOrbit, q: &QuadratureConfig) -> Result<(Classification, VerificationReport), CliError> {
    let cls = classify_case(o)?;
    let report = verify_classified(o, &cls, q)?;
    Ok((cls, report))
}

fn finish(report: &VerificationReport) -> Result<(), CliError> {
    match &report.quadrature_failure {
        Some(f) => Err(CliError::Quadrature(f.clone())),
        None => Ok(()),
    }
}

pub fn example(id: u8, out_dir: &Path, tol: f64, cell_tolerance: Option<f64>) -> Result<(), CliError> {
    let r = reference(id)?;
    let (o, provenance) = Source::Example(id).orbit(&integrator(tol))?;
    let (cls, report) = pipeline(&o, &quadrature(cell_tolerance))?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let stem = out_dir.join(format!("example{id}"));
    let path = |ext: &str| stem.with_extension(ext);
    document::write_json(&path("orbit.json"), &OrbitDocument::from_orbit(&o, provenance))?;
    document::write_json(&path("report.json"), &report)?;
    write_text(&path("csv"), &document::trajectory_csv(o.trajectory.samples()))?;
    write_text(&path("svg"), &orbit_plot(&o, Some(&cls), &format!("example {id}"), r.description))?;
    println!("example {id}: {}", r.description);
    print_report(&report);
    println!("reference:          T = {}, C = {}, I = {}", sig(r.period), sig(r.jacobi), sig(r.area_integral));
    println!("wrote {}.{{orbit.json,report.json,csv,svg}}", stem.display());
    finish(&report)
}

pub struct VerifyOutputs {
    pub json: Option<PathBuf>,
    pub orbit: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

pub fn verify(source: Source, tol: f64, cell_tolerance: Option<f64>, out: VerifyOutputs) -> Result<(), CliError> {
    let (o, provenance) = source.orbit(&integrator(tol))?;
    if let Some(p) = &out.orbit {
        document::write_json(p, &OrbitDocument::from_orbit(&o, provenance))?;
    }
    let (cls, report) = pipeline(&o, &quadrature(cell_tolerance))?;
    print_report(&report);
    if let Some(p) = &out.json {
        document::write_json(p, &report)?;
    }
    if let Some(p) = &out.svg {
        write_text(p, &orbit_plot(&o, Some(&cls), "orbit", &cls.case.to_string()))?;
    }
    finish(&report)
}

pub struct SimulateArgs {
    pub state: RotatingState,
    pub mu: f64,
    pub tmax: f64,
    pub tol: f64,
    pub samples: usize,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

pub fn simulate(a: SimulateArgs) -> Result<(), CliError> {
    let mu = mass(a.mu)?;
    let cfg = IntegratorConfig { dense_samples_per_period: a.samples, ..integrator(a.tol) };
    let traj = integrate::propagate(&a.state, mu, a.state.t + a.tmax, &cfg).map_err(|e| CliError::Other(e.into()))?;
    let end = traj.final_state();
    println!("Jacobi C:           {}", sig(traj.jacobi()));
    println!("steps:              {}", traj.step_count());
    println!(
        "final state:        t = {}, y = ({}, {}), v = ({}, {})",
        sig(end.t),
        sig(end.y1),
        sig(end.y2),
        sig(end.v1),
        sig(end.v2)
    );
    println!("distance to start:  {}", sig(end.phase_distance(&a.state)));
    println!("Jacobi drift:       {}", sig(traj.max_jacobi_drift()));
    if let Some(p) = &a.csv {
        write_text(p, &document::trajectory_csv(traj.samples()))?;
    }
    if let Some(p) = &a.svg {
        let mut panel = Panel::new(format!("trajectory, t in [{}, {}]", sig(a.state.t), sig(end.t)))
            .with_system(mu, Some(traj.jacobi()));
        panel.curves.push((traj.samples().iter().map(RotatingState::position).collect(), "#000000"));
        write_text(p, &render(&[panel], "trajectory"))?;
    }
    Ok(())
}

fn verdict_text(v: L4Verdict) -> &'static str {
    match v {
        L4Verdict::ClockwiseOnly => "clockwise only",
        L4Verdict::NeighborhoodOutsideHillRegion => "neighborhood outside U_C",
        L4Verdict::Inconclusive => "inconclusive",
    }
}

fn print_l4(r: &L4Report) {
    println!("{:?} at ({}, {}), C0 = {}", r.which, sig(r.point[0]), sig(r.point[1]), sig(r.c0));
    if let (Some(exact), Some(at)) = (r.closed_form, r.laplacian_at_point) {
        println!("  laplacian ln f at the point: {} (closed form 3/(C0 - C) = {})", sig(at), sig(exact));
    }
    for row in &r.rows {
        let min = row.min_laplacian.map_or("outside U_C".to_string(), sig);
        println!("  radius {:>8}: min laplacian {:>12}, 2 omega - C in [{}, {}]", sig(row.radius), min, sig(row.min_g), sig(row.max_g));
    }
    match r.radius {
        Some(rad) => println!("  radius: {}", sig(rad)),
        None => println!("  radius: none"),
    }
    println!("  verdict: {}", verdict_text(r.verdict));
}

pub fn l4(mu: f64, jacobi: f64, radii: Option<Vec<f64>>, json: Option<PathBuf>) -> Result<(), CliError> {
    let mu = mass(mu)?;
    let radii = radii.unwrap_or_else(|| rtbp::periodarea::l4::DEFAULT_RADII.to_vec());
    let a = l4_direction_analysis(mu, jacobi, &radii).map_err(|e| CliError::Other(e.into()))?;
    print_l4(&a.l4);
    print_l4(&a.l5);
    if let Some(p) = json {
        document::write_json(&p, &a)?;
    }
    Ok(())
}

pub struct LiftOutputs {
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

pub fn lift(source: Source, center: Option<Vec<f64>>, tol: f64, out: LiftOutputs) -> Result<(), CliError> {
    let (o, _) = source.orbit(&integrator(tol))?;
    let cls = match center.as_deref() {
        None => classify_case(&o)?,
        Some([x, y]) => classify_about(&o, Point::new(*x, *y))?,
        Some(_) => return Err(CliError::Other(anyhow!("--center takes two numbers x,y"))),
    };
    let Some(l) = &cls.lift else {
        return Err(CliError::Other(anyhow!("the orbit is a simple curve ({}); there is nothing to lift", cls.case)));
    };
    println!("case:               {}", cls.case);
    println!("center:             ({}, {})", sig(l.center.x), sig(l.center.y));
    println!("covering index n:   {}", l.n);
    println!("lifted vertices:    {}", l.beta.len());
    println!("roundtrip error:    {}", sig(l.roundtrip_error));
    if let Some(p) = &out.csv {
        let mut text = String::from("x,y\n");
        for v in l.beta.vertices() {
            text.push_str(&format!("{:.16e},{:.16e}\n", v.x, v.y));
        }
        write_text(p, &text)?;
    }
    if let Some(p) = &out.svg {
        write_text(p, &orbit_plot(&o, Some(&cls), "orbit", &cls.case.to_string()))?;
    }
    Ok(())
}
