//! Acceptance suite: one PASS/FAIL line per criterion. Counts and parities
//! are compared exactly; the only tolerance is the 60 s wall-clock budget
//! per catalog certification.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use obstructor_core::certifier::{check_parity, PairSystem};
use obstructor_core::cocycle::{intersection_cochain, obstruction_vanishes, ObstructionClass};
use obstructor_core::constructors::{cone_spec, flores, join_spec, points3, vk, ObstructorSpec};
use obstructor_core::deleted_product::DeletedProduct;
use obstructor_core::geometry::{alternation_predicate, pair_intersections, GeneralPositionMap, Rational};
use obstructor_core::group::{group_bound, out_fn_witness_expr, pure_braid_expr, Bound, Rule};
use obstructor_core::{Complex, Error};
use rand::rngs::StdRng;
use rand::SeedableRng;

const TIME_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn catalog() -> Vec<ObstructorSpec> {
    vec![points3(), vk(2).unwrap(), vk(3).unwrap(), flores(1).unwrap(), flores(2).unwrap()]
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    for (spec, m) in catalog().into_iter().zip([0, 2, 4, 2, 4]) {
        let start = Instant::now();
        let cert = spec.certify(None).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure(spec.m() == m, || format!("{} has m = {}", spec.provenance, spec.m()))?;
        ensure(cert.passed(), || format!("{} does not certify", spec.provenance))?;
        ensure(elapsed < TIME_BUDGET, || format!("{} took {elapsed:?}", spec.provenance))?;
        notes.push(format!("{} {:.0?}", spec.provenance, elapsed));
    }
    Ok(notes.join(", "))
}

fn criterion_2() -> Outcome {
    let count = |spec: &ObstructorSpec, f: Option<&GeneralPositionMap>| {
        check_parity(&spec.complex, &spec.sigma, f).map(|p| p.count).map_err(|e| e.to_string())
    };
    let p3 = count(&points3(), None)?;
    ensure(p3 == 3, || format!("points3 count {p3}"))?;
    let k5 = flores(1).unwrap();
    ensure(k5.sigma == PairSystem::all_pairs(&k5.complex, 2), || "K5 Σ is not all pairs".into())?;
    let c5 = count(&k5, None)?;
    ensure(c5 == 5, || format!("K5 count {c5}"))?;
    let k33 = vk(2).unwrap();
    ensure(k33.sigma.len() == 18, || "K33 Σ size".into())?;
    // One side at parameters 1, 3, 5 and the other at 2, 4, 6.
    let params: Vec<Rational> = [1, 3, 5, 2, 4, 6].iter().map(|&t| Rational::from_integer(t.into())).collect();
    let f = GeneralPositionMap::moment(&k33.complex, 2, Some(&params)).unwrap();
    let c33 = count(&k33, Some(&f))?;
    ensure(c33 == 3, || format!("K33 count {c33} on interleaved parameters"))?;
    let c33_index = count(&k33, None)?;
    ensure(c33_index % 2 == 1, || format!("K33 count {c33_index} on index parameters"))?;
    Ok(format!(
        "points3 = {p3}, K5 = {c5}, K33 = {c33} (interleaved parameters; {c33_index} on t_i = i)"
    ))
}

fn criterion_3() -> Outcome {
    let once = cone_spec(&points3()).map_err(|e| e.to_string())?;
    let twice = cone_spec(&once).map_err(|e| e.to_string())?;
    for (spec, m, size) in [(&once, 1, 6), (&twice, 2, 12)] {
        ensure(spec.m() == m && spec.sigma.len() == size, || {
            format!("{}: m = {}, |Σ| = {}", spec.provenance, spec.m(), spec.sigma.len())
        })?;
        ensure(spec.certify(None).map_err(|e| e.to_string())?.passed(), || {
            format!("{} does not certify", spec.provenance)
        })?;
    }
    Ok("|Σ| 3 -> 6 -> 12, both certify".into())
}

fn criterion_4() -> Outcome {
    let k33 = join_spec(&points3(), &points3()).map_err(|e| e.to_string())?;
    // Independent enumeration of disjoint edge pairs.
    let edges: Vec<_> = k33.complex.simplices_of_dim(1).cloned().collect();
    let mut expected = Vec::new();
    for (i, a) in edges.iter().enumerate() {
        for b in &edges[i + 1..] {
            if a.vertices().iter().all(|v| !b.vertices().contains(v)) {
                expected.push((a.vertices().to_vec(), b.vertices().to_vec()));
            }
        }
    }
    let expected = PairSystem::from_lists(2, &expected).unwrap();
    ensure(k33.sigma == expected && expected.len() == 18, || "join Σ differs from the 18 disjoint edge pairs".into())?;
    let jf = join_spec(&flores(1).unwrap(), &points3()).map_err(|e| e.to_string())?;
    ensure(jf.m() == 4 && jf.certify(None).map_err(|e| e.to_string())?.passed(), || {
        "join(flores(1), points3) does not certify at m = 4".into()
    })?;

    let k = Complex::points(5);
    let even = ObstructorSpec::new(k.clone(), PairSystem::all_pairs(&k, 0), "points5").unwrap();
    let factors = [points3(), cone_spec(&points3()).unwrap(), flores(1).unwrap(), even];
    let parity = |s: &ObstructorSpec| -> Result<u64, String> {
        check_parity(&s.complex, &s.sigma, None).map(|p| p.count % 2).map_err(|e| e.to_string())
    };
    let mut tested = 0;
    for a in &factors {
        for b in &factors {
            let j = join_spec(a, b).map_err(|e| e.to_string())?;
            let (pa, pb, pj) = (parity(a)?, parity(b)?, parity(&j)?);
            ensure(pj == pa * pb, || format!("{}: parity {pj} vs {pa}·{pb}", j.provenance))?;
            tested += 1;
        }
    }
    Ok(format!("18 pairs match, join(flores(1), points3) certifies, parity multiplicative on {tested} joins"))
}

fn criterion_5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20_240_601);
    for spec in [vk(2).unwrap(), flores(1).unwrap()] {
        let baseline = spec.certify(None).map_err(|e| e.to_string())?;
        let parity = baseline.condition2.count % 2;
        let mut done = 0;
        let mut attempts = 0;
        while done < 20 {
            attempts += 1;
            ensure(attempts < 200, || "too many degenerate random maps".into())?;
            let f = GeneralPositionMap::random_moment(&spec.complex, spec.m(), &mut rng);
            let cert = match spec.certify(Some(&f)) {
                Ok(c) => c,
                Err(Error::DegeneratePosition { .. }) => continue,
                Err(e) => return Err(e.to_string()),
            };
            ensure(cert.condition2.count % 2 == parity && cert.verdict == baseline.verdict, || {
                format!("{}: count {} on map {}", spec.provenance, cert.condition2.count, cert.condition2.map_digest)
            })?;
            done += 1;
        }
    }
    Ok("20 random maps each for vk(2), flores(1): parity and verdict unchanged".into())
}

fn criterion_6() -> Outcome {
    let nonzero = [
        ("K5", Complex::simplex_skeleton(5, 1)),
        ("K33", vk(2).unwrap().complex),
    ];
    for (name, k) in &nonzero {
        let r = obstruction_vanishes(k, 2, None).map_err(|e| e.to_string())?;
        ensure(r.is_nonzero(), || format!("{name} vanishes"))?;
    }
    let path = Complex::from_lists(&[vec![0, 1], vec![1, 2]]).unwrap();
    let triangle = Complex::from_lists(&[vec![0, 1, 2]]).unwrap();
    // Vertex 0 between 1 and 2 on the line makes the path's cochain nonzero.
    let params: Vec<Rational> = [1, 0, 2].iter().map(|&t| Rational::from_integer(t.into())).collect();
    let f = GeneralPositionMap::moment(&path, 1, Some(&params)).unwrap();
    let mut notes = Vec::new();
    for (name, k, m, f) in [("path", &path, 1, Some(&f)), ("path (t_i = i)", &path, 1, None), ("solid triangle", &triangle, 2, None)] {
        let r = obstruction_vanishes(k, m, f).map_err(|e| e.to_string())?;
        let ObstructionClass::VanishesMod2 { witness } = &r.result else {
            return Err(format!("{name} reported nonzero"));
        };
        let dp = DeletedProduct::build(k);
        let c = intersection_cochain(k, m, f).map_err(|e| e.to_string())?;
        let applied = if dp.cell_count(m) == 0 {
            c.values().clone()
        } else {
            let x = dp.chain(m - 1, witness.iter()).map_err(|e| e.to_string())?;
            dp.coboundary_matrix(m).unwrap().apply(&x).unwrap()
        };
        ensure(&applied == c.values(), || format!("{name}: δ(witness) differs from the cochain"))?;
        notes.push(format!("{name}: |witness| = {}, weight {}", witness.len(), c.weight()));
    }
    Ok(format!("K5, K33 nonzero; {}", notes.join("; ")))
}

fn criterion_7() -> Outcome {
    let mut complexes: Vec<Complex> = catalog().into_iter().map(|s| s.complex).collect();
    complexes.push(cone_spec(&cone_spec(&points3()).unwrap()).unwrap().complex);
    complexes.push(join_spec(&flores(1).unwrap(), &points3()).unwrap().complex);
    complexes.push(Complex::from_lists(&[vec![0, 1], vec![1, 2]]).unwrap());
    complexes.push(Complex::from_lists(&[vec![0, 1, 2]]).unwrap());
    let mut squares = 0;
    for k in &complexes {
        let dp = DeletedProduct::build(k);
        let top = dp.dimension().unwrap_or(0);
        for d in 2..=top {
            let dd = dp.boundary_matrix(d - 1).unwrap().mul(&dp.boundary_matrix(d).unwrap()).unwrap();
            ensure(dd.is_zero(), || format!("∂∂ ≠ 0 in degree {d} on {} simplices", k.len()))?;
            squares += 1;
        }
    }
    let mut pairs = 0;
    let mut rng = StdRng::seed_from_u64(7);
    for spec in [vk(2).unwrap(), flores(1).unwrap(), vk(3).unwrap()] {
        let dp = DeletedProduct::build(&spec.complex);
        let maps = [
            GeneralPositionMap::moment(&spec.complex, spec.m(), None).unwrap(),
            GeneralPositionMap::random_moment(&spec.complex, spec.m(), &mut rng),
        ];
        for f in &maps {
            for cell in dp.cells(spec.m()) {
                let exact = pair_intersections(cell.first(), cell.second(), f).map_err(|e| e.to_string())?;
                let alt = alternation_predicate(cell.first(), cell.second(), f).map_err(|e| e.to_string())?;
                ensure(alt == (exact == 1), || format!("{}: disagreement on {cell}", spec.provenance))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("∂∂ = 0 on {squares} composable pairs; alternation agrees on {pairs}/{pairs} pairs"))
}

fn criterion_8() -> Outcome {
    let check = |text: &str, want: u64| -> Result<(), String> {
        let d = group_bound(text).map_err(|e| e.to_string())?;
        ensure(d.bound == Bound::Finite(want), || format!("`{text}` gave {} (want {want})", d.bound))
    };
    for n in 1..=5 {
        check(&format!("F2^{n}"), 2 * n)?;
    }
    for n in 2..=6u32 {
        check(&pure_braid_expr(n), 2 * u64::from(n) - 3)?;
    }
    for n in 3..=5u32 {
        check(&out_fn_witness_expr(n), 4 * u64::from(n) - 6)?;
    }
    // A normal factor with obdim 2n and no convexity: the sum 2n + 1 is refused.
    for n in 1..=4u64 {
        let d = group_bound(&format!("H[obdim>={}] >< Z", 2 * n)).map_err(|e| e.to_string())?;
        ensure(d.rule == Rule::SubgroupMonotonicity && d.bound == Bound::Finite(2 * n), || {
            format!("guard failed for obdim(H) = {}", 2 * n)
        })?;
        ensure(!d.diagnostics.is_empty(), || "refusal carries no diagnostic".into())?;
    }
    Ok("F2^n = 2n, P_n = 2n-3, Out(F_n) witness = 4n-6, semidirect guard holds".into())
}

fn criterion_9() -> Outcome {
    let mut specs = catalog();
    specs.push(cone_spec(&points3()).unwrap());
    specs.push(cone_spec(&cone_spec(&points3()).unwrap()).unwrap());
    specs.push(join_spec(&flores(1).unwrap(), &points3()).unwrap());
    specs.push(cone_spec(&flores(1).unwrap()).unwrap());
    let mut n = 0;
    for spec in &specs {
        if !spec.certify(None).map_err(|e| e.to_string())?.passed() {
            continue;
        }
        let r = obstruction_vanishes(&spec.complex, spec.m(), None).map_err(|e| e.to_string())?;
        ensure(r.is_nonzero(), || format!("{} certifies but its class vanishes", spec.provenance))?;
        n += 1;
    }
    ensure(n == specs.len(), || "a suite spec failed to certify".into())?;
    Ok(format!("{n} certified specs, all with nonzero obstruction"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("catalog certification", criterion_1),
        ("exact parities", criterion_2),
        ("cone construction", criterion_3),
        ("join construction", criterion_4),
        ("map independence", criterion_5),
        ("obstruction vanishing", criterion_6),
        ("chain-complex sanity", criterion_7),
        ("group calculus regression", criterion_8),
        ("certificate/obstruction consistency", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name} ({elapsed:.2?}): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
