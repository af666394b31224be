//! Acceptance checks. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line, with its elapsed time and limit.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use subsym::analysis::{is_aperiodic, is_primitive, AperiodicityStatus, AperiodicityWitness};
use subsym::construct::{construct_shell, GroupSpec, WdSubgroupSpec};
use subsym::extsym::{
    admissible_matrices, enumerate_hyperoctahedral, extended_coset_for_matrix, extended_symmetry_group, Admissibility,
    CandidateStatus, CosetOutcome, ExclusionReason, SignedPermMatrix,
};
use subsym::fixtures;
use subsym::oracle::{brute_extended_coset, brute_letter_exchanges, brute_reversors_bry, frequency_eigenvector_check};
use subsym::perm::{closure, parse_cycles, OrderFingerprint, Permutation};
use subsym::report;
use subsym::sample::random_bijective_1d;
use subsym::subst::{box_points, Shape, Substitution};
use subsym::symmetry::{letter_exchange_group, validate_symmetry_group};
use subsym::Bounds;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn names(s: &Substitution, perms: &[Permutation]) -> Vec<String> {
    perms.iter().map(|p| if p.is_identity() { "id".to_string() } else { p.format(s.alphabet()) }).collect()
}

fn coset(outcome: &CosetOutcome) -> Vec<Permutation> {
    match outcome {
        CosetOutcome::Realized(c) => c.elements(),
        CosetOutcome::Empty(_) => Vec::new(),
    }
}

fn cyclic_example() -> Check {
    let s = fixtures::cyclic();
    let c = letter_exchange_group(&s, &Bounds::default()).map_err(err)?;
    let got = names(&s, c.group.elements());
    let want = ["id", "(a b c)", "(a c b)"];
    let got_set: BTreeSet<&str> = got.iter().map(String::as_str).collect();
    ensure!(got_set == want.into_iter().collect(), "C = {got:?}");
    Ok(format!("C = {{{}}}", got.join(", ")))
}

fn quaternion_example() -> Check {
    let b = Bounds::default();
    let s = fixtures::quaternion();
    let c = letter_exchange_group(&s, &b).map_err(err)?;
    ensure!(c.group.order() == 8, "|C| = {}", c.group.order());
    let fp = OrderFingerprint([(1, 1), (2, 1), (4, 6)].into_iter().collect());
    ensure!(c.fingerprint == fp, "fingerprint {:?}", c.fingerprint);
    let pi0 = parse_cycles("(e i -e -i)(j k -j -k)", s.alphabet()).map_err(err)?;
    let pi1 = parse_cycles("(e j -e -j)(i -k -i k)", s.alphabet()).map_err(err)?;
    let generated = closure(8, &[pi0, pi1], b.brute_degree).map_err(err)?;
    ensure!(generated.elements() == c.group.elements(), "⟨π0, π1⟩ differs from C");
    let brute = brute_letter_exchanges(&s, &b).map_err(err)?;
    ensure!(brute == c.group.elements(), "brute search over S_8 found {} elements", brute.len());
    Ok("|C| = 8, fingerprint {1:1, 2:1, 4:6}, ⟨π0, π1⟩ = C = brute".into())
}

fn thue_morse_reversors() -> Check {
    let b = Bounds::default();
    let s = fixtures::thue_morse();
    let k = coset(&extended_coset_for_matrix(&s, &SignedPermMatrix::negation(1), &b).map_err(err)?);
    let bry = brute_reversors_bry(&s, &b).map_err(err)?;
    let shown = names(&s, &k);
    ensure!(shown == ["id", "(a b)"], "K = {shown:?}");
    ensure!(k == bry, "two-word criterion gives {:?}", names(&s, &bry));
    Ok("K = {id, (a b)} = two-word oracle".into())
}

fn periodic_example() -> Check {
    let b = Bounds::default();
    let s = fixtures::periodic();
    let v = is_aperiodic(&s, &b).map_err(err)?;
    ensure!(v.status == AperiodicityStatus::Periodic, "status {:?}", v.status);
    ensure!(matches!(v.witness, AperiodicityWitness::Periodic { .. }), "witness {:?}", v.witness);
    let (r, ext) = report::analyze(&s, &b, "test");
    ensure!(ext.is_none(), "analysis went past the aperiodicity gate");
    ensure!(r.exit_code() == 3, "exit code {}", r.exit_code());
    let summary = r.aperiodicity.map(|a| a.summary).unwrap_or_default();
    ensure!(summary.starts_with("only legal 2-words are ab, ba"), "summary `{summary}`");
    Ok(format!("Periodic: {summary}"))
}

fn square_thue_morse() -> Check {
    let b = Bounds::default();
    let s = fixtures::square_thue_morse();
    let ext = extended_symmetry_group(&s, &b).map_err(err)?;
    let mut d4 = enumerate_hyperoctahedral(2, b.max_dimension).map_err(err)?;
    d4.sort();
    ensure!(ext.quotient.len() == 8, "{} realized", ext.quotient.len());
    ensure!(ext.quotient == d4, "quotient is not all of W_2");
    ensure!(ext.quotient_is_subgroup, "quotient not closed");
    Ok("8 of 8 candidates realized, quotient = D4".into())
}

fn rectangle_2x5() -> Check {
    let b = Bounds::default();
    let shape = Shape::new(vec![2, 5]).map_err(err)?;
    let swapping: Vec<(SignedPermMatrix, Admissibility)> =
        admissible_matrices(&shape, b.max_dimension).map_err(err)?.into_iter().filter(|(a, _)| a.swaps_axes()).collect();
    ensure!(swapping.len() == 4, "{} axis-swapping matrices", swapping.len());
    for (a, adm) in &swapping {
        ensure!(
            matches!(adm, Admissibility::Excluded(ExclusionReason::PrimeFactor { .. })),
            "{a} has admissibility {adm:?}"
        );
    }
    let s = fixtures::rect_2x5();
    let ext = extended_symmetry_group(&s, &b).map_err(err)?;
    for (a, _) in &swapping {
        ensure!(
            matches!(ext.status_of(a), Some(CandidateStatus::Excluded(ExclusionReason::PrimeFactor { .. }))),
            "{a} not excluded by prime factors in the fixture analysis"
        );
    }
    Ok("4 axis-swapping matrices excluded by prime factors".into())
}

fn epsilon_3d() -> Check {
    let b = Bounds::default();
    let s = fixtures::epsilon_3d();
    ensure!(s.n() == 9 && s.dim() == 3, "unexpected fixture");
    let ext = extended_symmetry_group(&s, &b).map_err(err)?;
    let c = &ext.symmetry;
    ensure!(c.group.order() == 3, "|C| = {}", c.group.order());
    ensure!(c.group.elements().iter().all(|p| p.is_identity() || p.order() == 3), "C is not cyclic of order 3");
    let cyc = SignedPermMatrix::coordinate_cycle(3);
    let Some(CandidateStatus::Realized(coset)) = ext.status_of(&cyc) else {
        return Err(format!("{cyc} not realized"));
    };
    let pi = coset.representative();
    ensure!(pi.cycle_type() == [9], "π = {} is not a 9-cycle", pi.format(s.alphabet()));
    let check = ext.order_checks.iter().find(|o| o.matrix == cyc).ok_or("no order check")?;
    ensure!(check.bound == 9 && check.divides && check.orders.iter().all(|o| 9 % o == 0), "order check {check:?}");
    ensure!(check.power_in_c, "π^3 outside C");
    let rotations = [cyc.clone(), cyc.compose(&cyc), SignedPermMatrix::identity(3)];
    ensure!(
        ext.quotient.len() == 3 && rotations.iter().all(|r| ext.quotient.contains(r)),
        "quotient {:?}",
        ext.quotient.iter().map(ToString::to_string).collect::<Vec<_>>()
    );
    let brute = brute_extended_coset(&s, &cyc, &b).map_err(err)?;
    ensure!(brute == coset.elements(), "brute coset over S_9 has {} elements", brute.len());
    Ok(format!("|C| = 3, π = {}, order 9 | 9, brute agrees", pi.format(s.alphabet())))
}

fn s4_cube() -> Check {
    let b = Bounds::default();
    let s = fixtures::s4_cube();
    let ext = extended_symmetry_group(&s, &b).map_err(err)?;
    ensure!(ext.symmetry.group.order() == 1, "|C| = {}", ext.symmetry.group.order());
    ensure!(ext.quotient.len() == 6, "{} realized", ext.quotient.len());
    ensure!(ext.quotient.iter().all(|a| a.signs().iter().all(|&x| x > 0)), "realized matrix with a sign flip");
    ensure!(ext.quotient_is_subgroup, "quotient not closed");
    let abelian = ext.quotient.iter().all(|x| ext.quotient.iter().all(|y| x.compose(y) == y.compose(x)));
    ensure!(!abelian, "quotient is abelian");
    let mirrors: Vec<_> = ext.candidates.iter().filter(|c| c.matrix.is_pure_mirror()).collect();
    ensure!(mirrors.len() == 7, "{} pure mirrors", mirrors.len());
    for m in &mirrors {
        ensure!(matches!(m.status, CandidateStatus::Excluded(_)), "{} is {:?}", m.matrix, m.status);
    }
    Ok("C trivial, quotient = 6 axis permutations (S3), 7 pure mirrors excluded".into())
}

fn constructors() -> Check {
    let b = Bounds::default();
    let cases = [
        (GroupSpec::cyclic(3), "c4", 2),
        (GroupSpec::quaternion(), "v4", 2),
        (GroupSpec::trivial(), "full", 2),
        (GroupSpec::cyclic(2), "pm", 1),
    ];
    let mut done = Vec::new();
    for (g, p, d) in cases {
        let p = WdSubgroupSpec::parse(p, d).map_err(err)?;
        let gens = g.minimal_generators(&b).map_err(err)?;
        let cert = construct_shell(&g, &gens, &p, d, &b).map_err(|e| format!("{} / {p:?}: {e}", g.name))?;
        let group = g.group(&b).map_err(err)?;
        let c = &cert.extended.symmetry;
        ensure!(c.group.order() == group.order(), "{}: |C| = {}", g.name, c.group.order());
        ensure!(c.fingerprint == group.fingerprint(), "{}: fingerprint {:?}", g.name, c.fingerprint);
        ensure!(cert.extended.quotient == p.elements().map_err(err)?, "{}: quotient differs from closure(P)", g.name);
        let s = &cert.substitution;
        let prim = is_primitive(s);
        ensure!(prim.primitive && !prim.generators.is_empty(), "{}: not primitive", g.name);
        let ap = is_aperiodic(s, &b).map_err(err)?;
        ensure!(
            ap.status == AperiodicityStatus::Aperiodic && ap.witness != AperiodicityWitness::None,
            "{}: aperiodicity {:?}",
            g.name,
            ap.status
        );
        done.push(format!("{}/{}", g.name, cert.extended.quotient.len()));
    }
    Ok(format!("certified {}", done.join(", ")))
}

fn random_property_suite() -> Check {
    let b = Bounds::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut found = 0;
    let mut drawn = 0;
    while found < 200 {
        drawn += 1;
        ensure!(drawn < 100_000, "only {found} usable instances");
        let s = random_bijective_1d(&mut rng, 4, 4);
        if !is_primitive(&s).primitive
            || !is_aperiodic(&s, &b).is_ok_and(|v| v.status == AperiodicityStatus::Aperiodic)
        {
            continue;
        }
        found += 1;
        let label = s.to_json().replace(char::is_whitespace, "");
        let c = letter_exchange_group(&s, &b).map_err(err)?;
        ensure!(brute_letter_exchanges(&s, &b).map_err(err)? == c.group.elements(), "(a) {label}");
        let k = coset(&extended_coset_for_matrix(&s, &SignedPermMatrix::negation(1), &b).map_err(err)?);
        ensure!(brute_reversors_bry(&s, &b).map_err(err)? == k, "(b) {label}");
        let checks = validate_symmetry_group(&c, s.n()).map_err(err)?;
        ensure!(checks.free_action && checks.divides_alphabet, "(c) {label}");
        ensure!(s.n() % c.group.order() == 0 && c.group.acts_freely(), "(c) {label}");
        ensure!(frequency_eigenvector_check(&s), "(d) {label}");
        for level in 1..=3 {
            let sides = s.shape().level_lengths(level).expect("small");
            let tiles: Vec<_> =
                (0..s.n()).map(|a| s.supertile(a, level, b.supertile_cells)).collect::<Result<_, _>>().map_err(err)?;
            for (i, x) in box_points(&sides).enumerate() {
                let col = s.power_column(level, &x).map_err(err)?;
                ensure!((0..s.n()).all(|a| tiles[a].cells[i] == col.apply(a)), "(e) level {level} {x:?} {label}");
            }
        }
    }
    Ok(format!("{found} instances from {drawn} draws, no mismatches"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 cyclic letter exchanges", cyclic_example, Duration::from_secs(1)),
        ("2 quaternion letter exchanges", quaternion_example, Duration::from_secs(10)),
        ("3 Thue-Morse reversors", thue_morse_reversors, Duration::from_secs(1)),
        ("4 periodic rejection", periodic_example, Duration::from_secs(1)),
        ("5 square Thue-Morse quotient", square_thue_morse, Duration::from_secs(30)),
        ("6 shape 2x5 exclusions", rectangle_2x5, Duration::from_secs(1)),
        ("7 3D epsilon example", epsilon_3d, Duration::from_secs(60)),
        ("8 S4 cube", s4_cube, Duration::from_secs(30)),
        ("9 constructors", constructors, Duration::from_secs(120)),
        ("10 random 1D property suite", random_property_suite, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; over the time limit")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("{tag} [{name}] {:.3}s (limit {}s): {detail}", elapsed.as_secs_f64(), limit.as_secs());
        failed += outcome.is_err() as usize;
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
