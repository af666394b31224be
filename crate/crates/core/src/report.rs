//! Serializable reports for analysis, oracle runs and constructions.
//!
//! Everything is stored as plain strings and numbers in a fixed order, so
//! a report is byte-identical across runs and survives a JSON round trip.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::{
    is_aperiodic, is_primitive, periodicity_screen, AperiodicityStatus, AperiodicityVerdict, AperiodicityWitness,
    PeriodicityScreen,
};
use crate::config::Bounds;
use crate::construct::ConstructionCertificate;
use crate::error::{Error, ErrorClass};
use crate::extsym::{
    extended_coset_for_matrix, extended_symmetry_group, CandidateStatus, CosetOutcome, ExclusionReason,
    ExtendedReport, Mirroring, SignedPermMatrix,
};
use crate::oracle::{
    brute_extended_coset, brute_letter_exchanges, brute_reversors_bry, frequency_eigenvector_check,
    patch_preservation_check, OracleVerdict,
};
use crate::perm::{symmetric_group, Alphabet, Permutation};
use crate::subst::{box_points, Substitution};
use crate::symmetry::SymmetryReport;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionSummary {
    pub alphabet: Vec<String>,
    pub shape: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitivitySection {
    pub primitive: bool,
    pub n_power: usize,
    pub generators: Vec<String>,
    pub orbit: Vec<String>,
    pub matrix_primitive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AperiodicitySection {
    pub status: String,
    pub witness: String,
    pub patches: Vec<String>,
    pub summary: String,
    pub screen: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetrySection {
    pub order: usize,
    pub fingerprint: String,
    pub elements: Vec<String>,
    pub n_power: usize,
    pub structure_generators: Vec<String>,
    pub free_action: bool,
    pub divides_alphabet: bool,
    pub equal_orbits: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateView {
    pub matrix: String,
    pub status: String,
    pub detail: String,
    pub coset: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderView {
    pub matrix: String,
    pub matrix_order: usize,
    pub c_order: usize,
    pub orders: Vec<usize>,
    pub bound: usize,
    pub divides: bool,
    pub power_in_c: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedSection {
    pub level: usize,
    pub quotient: Vec<String>,
    pub quotient_is_subgroup: bool,
    pub candidates: Vec<CandidateView>,
    pub order_checks: Vec<OrderView>,
    pub max_order: usize,
    pub mirroring: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleOutcome {
    Agreed,
    Mismatch,
    Skipped,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleView {
    pub name: String,
    pub outcome: OracleOutcome,
    pub detail: String,
    pub algorithm: Vec<String>,
    pub oracle: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSection {
    pub kind: String,
    pub claimed_c_order: usize,
    pub claimed_fingerprint: String,
    pub claimed_quotient: Option<Vec<String>>,
    pub claimed_reversor_order: Option<usize>,
    pub exchanges_outside_c: bool,
    pub max_reversor_order: usize,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub stage: String,
    pub class: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input_digest: Option<String>,
    pub bounds: Bounds,
    pub substitution: Option<SubstitutionSummary>,
    pub primitivity: Option<PrimitivitySection>,
    pub aperiodicity: Option<AperiodicitySection>,
    pub symmetry: Option<SymmetrySection>,
    pub extended: Option<ExtendedSection>,
    pub oracles: Vec<OracleView>,
    pub certificate: Option<CertificateSection>,
    pub failure: Option<Failure>,
}

fn names(perms: &[Permutation], alphabet: &Alphabet) -> Vec<String> {
    perms.iter().map(|p| show(p, alphabet)).collect()
}

fn show(p: &Permutation, alphabet: &Alphabet) -> String {
    if p.is_identity() {
        "id".into()
    } else {
        p.format(alphabet)
    }
}

fn class_name(e: &Error) -> &'static str {
    match e.class() {
        ErrorClass::Input => "input",
        ErrorClass::Precondition => "precondition",
        ErrorClass::Internal => "internal",
    }
}

impl Report {
    pub fn new(command: &str, version: &str, bounds: &Bounds) -> Self {
        Report {
            tool: "subsym".into(),
            version: version.into(),
            command: command.into(),
            input_digest: None,
            bounds: bounds.clone(),
            substitution: None,
            primitivity: None,
            aperiodicity: None,
            symmetry: None,
            extended: None,
            oracles: Vec::new(),
            certificate: None,
            failure: None,
        }
    }

    pub fn fail(&mut self, stage: &str, e: &Error) {
        self.failure = Some(Failure { stage: stage.into(), class: class_name(e).into(), message: e.to_string() });
    }

    /// 0 success, 2 input error, 3 precondition failure, 4 oracle mismatch or
    /// failed verification.
    pub fn exit_code(&self) -> i32 {
        if let Some(f) = &self.failure {
            return match f.class.as_str() {
                "input" => 2,
                "precondition" => 3,
                _ => 4,
            };
        }
        if self.oracles.iter().any(|o| o.outcome == OracleOutcome::Mismatch) {
            return 4;
        }
        0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.tool, self.version, self.command);
        if let Some(d) = &self.input_digest {
            let _ = writeln!(out, "input sha256 {d}");
        }
        if let Some(s) = &self.substitution {
            let shape: Vec<String> = s.shape.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "alphabet {} ({} letters), shape {}", s.alphabet.join(" "), s.alphabet.len(), shape.join("x"));
        }
        if let Some(p) = &self.primitivity {
            let _ = writeln!(out, "primitive: {} (N = {}, {} distinct level-N columns)", p.primitive, p.n_power, p.generators.len());
        }
        if let Some(a) = &self.aperiodicity {
            let _ = writeln!(out, "aperiodicity: {} - {}", a.status, a.summary);
            if let Some(screen) = &a.screen {
                let _ = writeln!(out, "  screen: {screen}");
            }
        }
        if let Some(s) = &self.symmetry {
            let _ = writeln!(out, "symmetry: C of order {}, element orders {}", s.order, s.fingerprint);
            let _ = writeln!(out, "  C = {{{}}}", s.elements.join(", "));
            let _ = writeln!(
                out,
                "  free action {}, |C| divides n {}, equal orbits {}",
                s.free_action, s.divides_alphabet, s.equal_orbits
            );
        }
        if let Some(e) = &self.extended {
            let _ = writeln!(out, "extended: level {}, quotient of order {} {{{}}}", e.level, e.quotient.len(), e.quotient.join(" "));
            for c in &e.candidates {
                match c.status.as_str() {
                    "realized" => {
                        let _ = writeln!(out, "  {} realized, coset of {} starting {}", c.matrix, c.coset.len(), c.detail);
                    }
                    _ => {
                        let _ = writeln!(out, "  {} {}: {}", c.matrix, c.status, c.detail);
                    }
                }
            }
            for o in &e.order_checks {
                let orders: Vec<String> = o.orders.iter().map(ToString::to_string).collect();
                let _ = writeln!(
                    out,
                    "  orders for {}: {} (bound {}, divides {}, power in C {})",
                    o.matrix,
                    orders.join(","),
                    o.bound,
                    o.divides,
                    o.power_in_c
                );
            }
            if let Some(m) = &e.mirroring {
                let _ = writeln!(out, "  mirroring {m}");
            }
        }
        for o in &self.oracles {
            let outcome = serde_json::to_value(o.outcome).expect("enum").as_str().unwrap_or_default().to_string();
            let _ = writeln!(out, "oracle {}: {} {}", o.name, outcome, o.detail);
        }
        if let Some(c) = &self.certificate {
            let _ = writeln!(
                out,
                "certificate {}: C order {} {}, verified {}, largest extended order {}",
                c.kind, c.claimed_c_order, c.claimed_fingerprint, c.verified, c.max_reversor_order
            );
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(out, "FAILED at {} ({}): {}", f.stage, f.class, f.message);
        }
        out
    }
}

fn summary(s: &Substitution) -> SubstitutionSummary {
    SubstitutionSummary { alphabet: s.alphabet().letters().to_vec(), shape: s.shape().lengths().to_vec() }
}

pub fn aperiodicity_section(s: &Substitution, v: &AperiodicityVerdict) -> AperiodicitySection {
    let a = s.alphabet();
    let status = match v.status {
        AperiodicityStatus::Aperiodic => "aperiodic",
        AperiodicityStatus::Periodic => "periodic",
        AperiodicityStatus::Unknown => "unknown",
    };
    let (witness, patches, summary) = match &v.witness {
        AperiodicityWitness::SharedLetter { first, second } => {
            let (u, w) = (first.format(a), second.format(a));
            ("shared_letter", vec![u.clone(), w.clone()], format!("legal 2-words {u} and {w} share a letter"))
        }
        AperiodicityWitness::OneCell { first, second } => {
            let (u, w) = (first.format(a), second.format(a));
            ("one_cell", vec![u.clone(), w.clone()], format!("legal blocks {u} and {w} differ in one cell"))
        }
        AperiodicityWitness::HalfSpaces { pairs } => {
            let mut patches = Vec::new();
            let mut parts = Vec::new();
            for (axis, side, u, w) in pairs {
                patches.push(u.format(a));
                patches.push(w.format(a));
                parts.push(format!("axis {} side {side}: {} / {}", axis + 1, u.format(a), w.format(a)));
            }
            ("half_spaces", patches, format!("blocks agreeing on a half-space per axis ({})", parts.join("; ")))
        }
        AperiodicityWitness::Periodic { words, period } => {
            let w: Vec<String> = words.iter().map(|p| p.format(a)).collect();
            let period: String = period.iter().map(|&x| a.letter(x)).collect::<Vec<_>>().join("");
            ("periodic", w.clone(), format!("only legal 2-words are {}; period {period}", w.join(", ")))
        }
        AperiodicityWitness::None => ("none", Vec::new(), "no proximality witness among legal 2-blocks".into()),
    };
    let screen = periodicity_screen(s).ok().map(|screen| match screen {
        PeriodicityScreen::CannotBePeriodic { length, alphabet } => {
            format!("L = {length} divides |A| = {alphabet}, so no periodic hull")
        }
        PeriodicityScreen::Inconclusive => "inconclusive".into(),
    });
    AperiodicitySection { status: status.into(), witness: witness.into(), patches, summary, screen }
}

pub fn symmetry_section(r: &SymmetryReport, alphabet: &Alphabet) -> SymmetrySection {
    SymmetrySection {
        order: r.group.order(),
        fingerprint: r.fingerprint.to_string(),
        elements: names(r.group.elements(), alphabet),
        n_power: r.n_power,
        structure_generators: names(&r.generators, alphabet),
        free_action: r.checks.free_action,
        divides_alphabet: r.checks.divides_alphabet,
        equal_orbits: r.checks.equal_orbits,
    }
}

fn reason_text(r: &ExclusionReason, alphabet: &Alphabet) -> String {
    match r {
        ExclusionReason::PrimeFactor { row, col, prime } => {
            format!("links axes {} and {}, and only one length is divisible by {prime}", row + 1, col + 1)
        }
        ExclusionReason::NonConjugate { x, y } => {
            format!("columns {} and {} are not conjugate", show(x, alphabet), show(y, alphabet))
        }
        ExclusionReason::EmptyIntersection => "the constraint cosets do not intersect".into(),
    }
}

pub fn extended_section(r: &ExtendedReport, alphabet: &Alphabet) -> ExtendedSection {
    let candidates = r
        .candidates
        .iter()
        .map(|c| {
            let (status, detail, coset) = match &c.status {
                CandidateStatus::Realized(coset) => {
                    ("realized", show(coset.representative(), alphabet), names(&coset.elements(), alphabet))
                }
                CandidateStatus::Excluded(reason) => ("excluded", reason_text(reason, alphabet), Vec::new()),
                CandidateStatus::Undecided(why) => ("undecided", why.clone(), Vec::new()),
            };
            CandidateView { matrix: c.matrix.to_string(), status: status.into(), detail, coset }
        })
        .collect();
    let order_checks: Vec<OrderView> = r
        .order_checks
        .iter()
        .map(|o| OrderView {
            matrix: o.matrix.to_string(),
            matrix_order: o.matrix_order,
            c_order: o.c_order,
            orders: o.orders.clone(),
            bound: o.bound,
            divides: o.divides,
            power_in_c: o.power_in_c,
        })
        .collect();
    ExtendedSection {
        level: r.level,
        quotient: r.quotient.iter().map(ToString::to_string).collect(),
        quotient_is_subgroup: r.quotient_is_subgroup,
        max_order: order_checks.iter().flat_map(|o| o.orders.iter().copied()).max().unwrap_or(1),
        candidates,
        order_checks,
        mirroring: r.mirroring.map(|m| match m {
            Mirroring::AboutLetter => "m".into(),
            Mirroring::BetweenLetters => "m'".into(),
        }),
    }
}

/// Validation, primitivity, aperiodicity, symmetry and extended symmetry,
/// stopping at the first failing stage.
pub fn analyze(s: &Substitution, bounds: &Bounds, version: &str) -> (Report, Option<ExtendedReport>) {
    let mut report = Report::new("analyze", version, bounds);
    report.substitution = Some(summary(s));
    let prim = is_primitive(s);
    report.primitivity = Some(PrimitivitySection {
        primitive: prim.primitive,
        n_power: prim.n_power,
        generators: names(&prim.generators, s.alphabet()),
        orbit: prim.orbit.iter().map(|&x| s.alphabet().letter(x).to_string()).collect(),
        matrix_primitive: s.substitution_matrix().is_primitive(),
    });
    if !prim.primitive {
        report.fail("primitivity", &Error::NotPrimitive);
        return (report, None);
    }
    match is_aperiodic(s, bounds) {
        Ok(v) => report.aperiodicity = Some(aperiodicity_section(s, &v)),
        Err(e) => {
            report.fail("aperiodicity", &e);
            return (report, None);
        }
    }
    match extended_symmetry_group(s, bounds) {
        Ok(ext) => {
            report.symmetry = Some(symmetry_section(&ext.symmetry, s.alphabet()));
            report.extended = Some(extended_section(&ext, s.alphabet()));
            (report, Some(ext))
        }
        Err(e) => {
            let stage = if matches!(e, Error::NotAperiodic(_)) { "aperiodicity" } else { "symmetry" };
            report.fail(stage, &e);
            (report, None)
        }
    }
}

fn verdict_view(v: OracleVerdict, detail: String) -> OracleView {
    let outcome = if v.agreed { OracleOutcome::Agreed } else { OracleOutcome::Mismatch };
    let detail = match v.mismatch {
        Some(m) => format!("{detail}; {m}"),
        None => detail,
    };
    OracleView { name: v.name, outcome, detail, algorithm: v.algorithm, oracle: v.oracle }
}

fn simple_view(name: &str, outcome: OracleOutcome, detail: String) -> OracleView {
    OracleView { name: name.into(), outcome, detail, algorithm: Vec::new(), oracle: Vec::new() }
}

fn skipped(name: &str, e: &Error) -> OracleView {
    simple_view(name, OracleOutcome::Skipped, e.to_string())
}

fn coset_elements(outcome: &CosetOutcome) -> Vec<Permutation> {
    match outcome {
        CosetOutcome::Realized(c) => c.elements(),
        CosetOutcome::Empty(_) => Vec::new(),
    }
}

/// Runs every applicable oracle next to the analysis. Oracles that exceed
/// their bounds are reported as skipped.
pub fn verify(s: &Substitution, bounds: &Bounds, version: &str) -> Report {
    let (mut report, ext) = analyze(s, bounds, version);
    report.command = "verify".into();
    let alphabet = s.alphabet();
    report.oracles.push(if frequency_eigenvector_check(s) {
        simple_view("frequency", OracleOutcome::Agreed, "M·1 = |R|·1".into())
    } else {
        simple_view("frequency", OracleOutcome::Mismatch, "row sums of M differ from |R|".into())
    });
    report.oracles.push(supertile_oracle(s, bounds));
    let Some(ext) = ext else { return report };
    report.oracles.push(match brute_letter_exchanges(s, bounds) {
        Ok(brute) => {
            let v = OracleVerdict::compare("letter exchanges", ext.symmetry.group.elements(), &brute, alphabet);
            verdict_view(v, format!("{} elements", brute.len()))
        }
        Err(e) => skipped("letter exchanges", &e),
    });
    if s.dim() == 1 {
        report.oracles.push(match brute_reversors_bry(s, bounds) {
            Ok(bry) => {
                let algo = extended_coset_for_matrix(s, &SignedPermMatrix::negation(1), bounds).map(|o| coset_elements(&o));
                match algo {
                    Ok(algo) => verdict_view(
                        OracleVerdict::compare("reversors (two-word criterion)", &algo, &bry, alphabet),
                        format!("{} elements", bry.len()),
                    ),
                    Err(e) => skipped("reversors (two-word criterion)", &e),
                }
            }
            Err(e) => skipped("reversors (two-word criterion)", &e),
        });
    }
    for cand in &ext.candidates {
        let name = format!("extended coset {}", cand.matrix);
        let algo = match &cand.status {
            CandidateStatus::Realized(c) => c.elements(),
            CandidateStatus::Excluded(ExclusionReason::PrimeFactor { .. }) | CandidateStatus::Undecided(_) => continue,
            CandidateStatus::Excluded(_) => Vec::new(),
        };
        report.oracles.push(match brute_extended_coset(s, &cand.matrix, bounds) {
            Ok(brute) => verdict_view(
                OracleVerdict::compare(&name, &algo, &brute, alphabet),
                format!("{} elements", brute.len()),
            ),
            Err(e) => skipped(&name, &e),
        });
    }
    report.oracles.extend(patch_oracles(s, &ext, bounds));
    report
}

/// `power_column` against explicit rewriting, for every level whose
/// supertiles fit in the cell bound (at most level 3).
fn supertile_oracle(s: &Substitution, bounds: &Bounds) -> OracleView {
    let name = "power columns vs supertiles";
    let mut checked = 0;
    for k in 1..=3 {
        let Some(sides) = s.shape().level_lengths(k) else { break };
        let cells = s.shape().level_volume(k).unwrap_or(u128::MAX);
        if cells.saturating_mul(s.n() as u128) > bounds.supertile_cells {
            break;
        }
        let tiles: Result<Vec<_>, _> = (0..s.n()).map(|a| s.supertile(a, k, bounds.supertile_cells)).collect();
        let Ok(tiles) = tiles else { break };
        for (i, x) in box_points(&sides).enumerate() {
            let col = match s.power_column(k, &x) {
                Ok(c) => c,
                Err(e) => return skipped(name, &e),
            };
            if let Some(a) = (0..s.n()).find(|&a| tiles[a].cells[i] != col.apply(a)) {
                return simple_view(
                    name,
                    OracleOutcome::Mismatch,
                    format!("level {k}, position {x:?}, letter {}", s.alphabet().letter(a)),
                );
            }
        }
        checked = k;
    }
    if checked == 0 {
        simple_view(name, OracleOutcome::Skipped, "level-1 supertiles exceed the cell bound".into())
    } else {
        simple_view(name, OracleOutcome::Agreed, format!("levels 1..={checked}"))
    }
}

/// Realized pairs `(A, π)` must preserve legal patches. For excluded pure
/// mirrors on small alphabets, no `π` at all may preserve them if the
/// patches alone are to confirm the exclusion.
fn patch_oracles(s: &Substitution, ext: &ExtendedReport, bounds: &Bounds) -> Vec<OracleView> {
    let side = if s.dim() >= 3 { 2 } else { bounds.patch_side };
    let mut out = Vec::new();
    for cand in &ext.candidates {
        let name = format!("patches {}", cand.matrix);
        match &cand.status {
            CandidateStatus::Realized(coset) => {
                out.push(match patch_preservation_check(s, &cand.matrix, coset.representative(), side, bounds) {
                    Ok(true) => simple_view(&name, OracleOutcome::Agreed, format!("legal boxes up to side {side} preserved")),
                    Ok(false) => simple_view(&name, OracleOutcome::Mismatch, "a legal box maps to an illegal one".into()),
                    Err(e) => skipped(&name, &e),
                });
            }
            CandidateStatus::Excluded(_) if cand.matrix.is_pure_mirror() && s.n() <= bounds.bry_degree => {
                let mut survivors = 0;
                for pi in symmetric_group(s.n()) {
                    match patch_preservation_check(s, &cand.matrix, &pi, side, bounds) {
                        Ok(true) => survivors += 1,
                        Ok(false) => {}
                        Err(e) => {
                            out.push(skipped(&name, &e));
                            survivors = usize::MAX;
                            break;
                        }
                    }
                }
                if survivors == 0 {
                    out.push(simple_view(&name, OracleOutcome::Agreed, "no letter exchange preserves legal boxes".into()));
                } else if survivors != usize::MAX {
                    out.push(simple_view(
                        &name,
                        OracleOutcome::Inconclusive,
                        format!("{survivors} letter exchanges preserve boxes up to side {side}"),
                    ));
                }
            }
            _ => {}
        }
    }
    out
}

pub fn certificate_report(cert: &ConstructionCertificate, bounds: &Bounds, version: &str) -> Report {
    let mut report = Report::new("construct", version, bounds);
    let s = &cert.substitution;
    report.substitution = Some(summary(s));
    let prim = is_primitive(s);
    report.primitivity = Some(PrimitivitySection {
        primitive: prim.primitive,
        n_power: prim.n_power,
        generators: names(&prim.generators, s.alphabet()),
        orbit: prim.orbit.iter().map(|&x| s.alphabet().letter(x).to_string()).collect(),
        matrix_primitive: s.substitution_matrix().is_primitive(),
    });
    report.aperiodicity = Some(aperiodicity_section(s, &cert.aperiodicity));
    report.symmetry = Some(symmetry_section(&cert.extended.symmetry, s.alphabet()));
    report.extended = Some(extended_section(&cert.extended, s.alphabet()));
    let kind = serde_json::to_value(cert.kind).expect("enum").as_str().unwrap_or_default().to_string();
    report.certificate = Some(CertificateSection {
        kind,
        claimed_c_order: cert.claims.c_order,
        claimed_fingerprint: cert.claims.c_fingerprint.to_string(),
        claimed_quotient: cert.claims.quotient.as_ref().map(|q| q.iter().map(ToString::to_string).collect()),
        claimed_reversor_order: cert.claims.reversor_order,
        exchanges_outside_c: cert.claims.exchanges_outside_c,
        max_reversor_order: cert.max_reversor_order,
        verified: true,
    });
    report
}
