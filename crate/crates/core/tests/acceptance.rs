//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so each criterion reports its own verdict and timing.

mod common;

use common::{cube_flag_count, cw_euler, glued_curve_count, parallelogram_points, symmetric_restriction_count, suites};
use fanifold_core::bmodel::{chart_diagram, components, limit_census, subalgebra_check, Poly, Relation, Section, ToricDiagram};
use fanifold_core::catalog;
use fanifold_core::fan::{refines, resolve_to_smooth};
use fanifold_core::fanifold::{isomorphic, Fanifold};
use fanifold_core::lattice::{quotient_with_torsion, Lattice};
use fanifold_core::skeleton::{euler_characteristic_c, export_mesh, fltz_pieces, handle_plan, skeleton_model, skeleton_refinement_check};
use std::time::{Duration, Instant};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn census(d: &ToricDiagram, degree: i64) -> Result<usize, String> {
    limit_census(d, degree).map(|c| c.dimension).map_err(|e| e.to_string())
}

fn unigon_ring() -> Check {
    let u = catalog::unigon();
    let d = chart_diagram(&u, u.index_of("D").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    for deg in 0..=6 {
        let (got, want) = (census(&d, deg)?, symmetric_restriction_count(deg));
        ensure(got == want && want as i64 == deg * deg + deg + 1, || format!("D={deg}: census {got}, oracle {want}"))?;
    }
    let top = d.find("p", &[vec![1, 0], vec![0, 1]]).ok_or("no top chart over p")?;
    let gens: Vec<Section> = [
        Poly::from_terms(&[(1, vec![1, 0]), (1, vec![0, 1])]),
        Poly::from_terms(&[(1, vec![1, 1])]),
        Poly::from_terms(&[(1, vec![1, 2])]),
    ]
    .into_iter()
    .map(|p| Section::from_seeds(&d, &[(top, p)]).map_err(|e| e.to_string()))
    .collect::<Result<_, _>>()?;
    // b³ + c² − abc
    let rel = Relation(vec![(1, vec![0, 3, 0]), (1, vec![0, 0, 2]), (-1, vec![1, 1, 1])]);
    let r = subalgebra_check(&d, &gens, &[rel], 6).map_err(|e| e.to_string())?;
    ensure(r.relations[0].holds, || format!("relation fails: {:?}", r.relations[0].counterexample))?;
    ensure(r.spans, || format!("span rank {} of census {}", r.span_rank, r.census_dimension))?;
    Ok(format!("census D²+D+1 for D=0..6, b³+c²=abc holds, spans {} at D=6", r.census_dimension))
}

fn necklaces() -> Check {
    for r in [2usize, 3] {
        let n = catalog::necklace(r);
        let comps = components(&n);
        ensure(comps.len() == r, || format!("r={r}: {} components", comps.len()))?;
        for c in &comps {
            ensure(c.complete && c.dimension == 1 && c.rays == vec![vec![1], vec![-1]], || format!("r={r}: component {} is not the fan of ℙ¹", c.stratum))?;
        }
        let d = ToricDiagram::full(&n).map_err(|e| e.to_string())?;
        let lines = vec![common::projective_line(0); r];
        let cycle: Vec<(usize, usize)> = (0..r).map(|i| (i, (i + 1) % r)).collect();
        for deg in 0..=6 {
            let (got, want) = (census(&d, deg)?, glued_curve_count(&lines, &cycle));
            ensure(got == want && got == 1, || format!("r={r} D={deg}: census {got}, oracle {want}"))?;
        }
    }
    let report = catalog::necklace(1).validate();
    ensure(report.valid && !report.is_poset, || "r=1 should be a valid non-poset diagram".into())?;
    ensure(report.shape.len() == 1 && report.shape[0].count == 2, || format!("r=1 shape {:?}", report.shape))?;
    Ok(format!("r=2,3 give r ℙ¹ components and census 1 for D≤6; r=1 is non-poset with shape {}", report.chain.unwrap_or_default()))
}

fn three_a1() -> Check {
    let phi = catalog::three_a1();
    let comps = components(&phi);
    ensure(comps.len() == 3 && comps.iter().all(|c| c.rays == vec![vec![1]] && !c.complete), || format!("components {comps:?}"))?;
    let d = ToricDiagram::full(&phi).map_err(|e| e.to_string())?;
    for deg in 0..=8 {
        let lines = vec![common::affine_line(deg); 3];
        let (got, want) = (census(&d, deg)?, glued_curve_count(&lines, &[(0, 1), (1, 2)]));
        ensure(got == want && want as i64 == 3 * deg + 1, || format!("D={deg}: census {got}, oracle {want}"))?;
    }
    let model = skeleton_model(&phi).map_err(|e| e.to_string())?;
    let chi = euler_characteristic_c(&model);
    ensure(chi == 1 && cw_euler(&phi) == 1, || format!("χ_c {chi}, cells {}", cw_euler(&phi)))?;
    let mesh = export_mesh(&model, 16).map_err(|e| e.to_string())?;
    // kind of each group is the first `# kind` line after its `g` line
    let mut groups: Vec<(String, Option<String>)> = vec![];
    for line in mesh.lines() {
        if let Some(name) = line.strip_prefix("g ") {
            groups.push((name.to_string(), None));
        } else if let (Some(kind), Some(last)) = (line.strip_prefix("# kind "), groups.last_mut()) {
            last.1.get_or_insert_with(|| kind.to_string());
        }
    }
    let count = |k: &str| groups.iter().filter(|g| g.0 != "boundary" && g.1.as_deref() == Some(k)).count();
    let fibers = groups.iter().filter(|g| g.0 != "boundary").count();
    ensure(fibers == 4 && count("cylinder") == 3 && count("triangle") == 1, || format!("mesh groups {groups:?}"))?;
    let boundary = groups.iter().any(|g| g.0 == "boundary");
    Ok(format!("3 𝔸¹ components, census 3D+1 for D≤8, χ_c = 1, mesh 3 cylinder + 1 triangle groups (boundary group: {boundary})"))
}

fn square() -> Check {
    let phi = catalog::square();
    let report = phi.validate();
    ensure(report.strata == 9 && report.valid && report.is_poset && report.coherent, || format!("{report:?}"))?;
    let plan = handle_plan(&phi).map_err(|e| e.to_string())?;
    ensure(plan.counts == vec![4, 4, 1], || format!("handle counts {:?}", plan.counts))?;
    let model = skeleton_model(&phi).map_err(|e| e.to_string())?;
    let predicted: usize = phi.interior_strata().iter().map(|&f| phi.stratum(f).fan.len()).sum();
    let flags = cube_flag_count(2);
    ensure(model.strata.len() == predicted && predicted == flags, || format!("{} skeleton strata, {predicted} predicted, {flags} flags", model.strata.len()))?;
    Ok(format!("9 strata form a coherent poset, handles (4, 4, 1), {flags} skeleton strata"))
}

fn stacky_quadric() -> Check {
    let fan = catalog::quadric_cone(true);
    let top = (0..fan.len()).find(|&i| fan.cone(i).dim() == 2).ok_or("no 2-cone")?;
    let gens = fan.cone(top).generators().to_vec();
    let q = quotient_with_torsion(Lattice::new(2), &gens).map_err(|e| e.to_string())?;
    let oracle = parallelogram_points(&[gens[0].clone(), gens[1].clone()]);
    ensure(q.torsion == vec![2] && oracle == 2, || format!("isotropy {:?}, parallelogram points {oracle}", q.torsion))?;
    let smooth = resolve_to_smooth(&fan).map_err(|e| e.to_string())?;
    ensure(smooth.properties().smooth, || "resolution is not smooth".into())?;
    ensure(refines(&smooth, &fan).map_err(|e| e.to_string())?, || "resolution does not refine".into())?;
    ensure(skeleton_refinement_check(&fan, &smooth).map_err(|e| e.to_string())?, || "skeleton refinement check fails".into())?;
    let pieces = fltz_pieces(&fan).map_err(|e| e.to_string())?;
    let piece = pieces.iter().find(|p| p.dim == 2).ok_or("no piece for the 2-cone")?;
    ensure(piece.components() == 2, || format!("component group {:?}", piece.component_group))?;
    Ok(format!("isotropy ℤ/2, smooth refinement with {} cones, FLTZ 2-cone piece has 2 components", smooth.len()))
}

fn halfplane_boundary() -> Check {
    let a2 = catalog::affine_space(2);
    let phi = Fanifold::sphere_section(&a2).map_err(|e| e.to_string())?;
    let boundary = Fanifold::from_fan(&a2).and_then(|f| f.ideal_boundary()).map_err(|e| e.to_string())?;
    ensure(isomorphic(&phi, &boundary).map_err(|e| e.to_string())?.is_some(), || "sphere section differs from the ideal boundary".into())?;
    let comps = components(&phi);
    ensure(comps.len() == 2 && comps.iter().all(|c| c.rays == vec![vec![1]]), || format!("components {comps:?}"))?;
    let d = ToricDiagram::full(&phi).map_err(|e| e.to_string())?;
    for deg in 0..=8 {
        let lines = vec![common::affine_line(deg); 2];
        let (got, want) = (census(&d, deg)?, glued_curve_count(&lines, &[(0, 1)]));
        ensure(got == want && want as i64 == 2 * deg + 1, || format!("D={deg}: census {got}, oracle {want}"))?;
    }
    Ok("sphere section of 𝔸² is 𝔸¹ glued to 𝔸¹ at 0, census 2D+1 for D≤8".into())
}

fn property_suites() -> Check {
    let mut summary = vec![];
    for (name, suite) in suites::ALL {
        let cases = suite().map_err(|e| format!("{name}: {e}"))?;
        ensure(cases >= 200, || format!("{name}: only {cases} cases"))?;
        summary.push(format!("{name} ({cases})"));
    }
    Ok(summary.join(", "))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("unigon ring", unigon_ring, Duration::from_secs(5)),
        ("necklaces", necklaces, Duration::from_secs(5)),
        ("3A1", three_a1, Duration::from_secs(5)),
        ("square", square, Duration::from_secs(5)),
        ("stacky quadric", stacky_quadric, Duration::from_secs(5)),
        ("boundary of 𝔸²", halfplane_boundary, Duration::from_secs(5)),
        ("property suites", property_suites, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(detail) if elapsed <= budget => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("over budget of {}s: {detail}", budget.as_secs())),
            Err(e) => ("FAIL", e),
        };
        if verdict.0 == "FAIL" {
            failed += 1;
        }
        println!("criterion {} {} [{name}] {:.2}s: {}", i + 1, verdict.0, elapsed.as_secs_f64(), verdict.1);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
