//! The decision procedure: given `(p, v, g)` — or a concrete tessellated
//! surface and `v` — decide whether a uniform lattice in `Aut(I_{p,v})`
//! with that quotient exists.
//!
//! The triple-level procedure evaluates every classification clause,
//! guards against contradictory conclusions, and reports the first
//! applicable clause as the primary reason with the rest as notes:
//!
//! 1. no tessellation (Euler count not integral) → does not exist;
//! 2. `v` even → exists, by the product construction on any tessellation;
//! 3. `4 | F` → exists, by the `±1`-certificate construction with
//!    `b = v - 1`;
//! 4. `F` odd and `v` an odd prime power → does not exist (valuation
//!    obstruction in the unimodularity equation);
//! 5. `F` odd, `v = 3 q^n` with `ord_q(2) ≡ 2 (mod 4)` → does not exist;
//! 6. `v = 3` and `4 ∤ F` → does not exist (`v = 3` forces a `±1`
//!    certificate, which forces `4 | F`);
//! 7. `F = x · y` with `x, y ≥ 2` and some even `b ≤ 64` with
//!    `(b+1)(b²+1) | v` → exists, by the jigsaw `{1,2}`-certificate
//!    construction;
//! 8. otherwise open.
//!
//! For every "exists" verdict a witness complex of groups can be built
//! and re-verified ([`decide_witness`]).

use crate::cog::{self, ComplexOfGroups};
use crate::diophantine::{self, B_SCAN_MAX};
use crate::homology::{self, CertKind, SignSearch};
use crate::surface::TiledSurface;
use crate::tess::{self, Build};

/// Decision outcome; maps onto the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Exists,
    NotExists,
    Unknown,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Exists => 0,
            Outcome::NotExists => 1,
            Outcome::Unknown => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Exists => "exists",
            Outcome::NotExists => "not-exists",
            Outcome::Unknown => "unknown",
        }
    }
}

/// A decision with its primary reason tag and all secondary findings.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Tag of the first applicable clause.
    pub reason: String,
    /// Everything else the procedure established, human-readable.
    pub notes: Vec<String>,
    pub v: u64,
    pub p: Option<u64>,
    pub genus: Option<u64>,
    pub faces: Option<u64>,
}

/// Smallest even `b` in `[2, B_SCAN_MAX]` with `(b^c + 1) | v` for every
/// coefficient `c`.
pub fn b_family_divisor(v: u64, coeffs: &[u64]) -> Option<u64> {
    'outer: for b in (2..=B_SCAN_MAX).step_by(2) {
        for &c in coeffs {
            let pow = match u32::try_from(c).ok().and_then(|c| b.checked_pow(c)) {
                Some(x) => x,
                None => continue 'outer,
            };
            if v % (pow + 1) != 0 {
                continue 'outer;
            }
        }
        return Some(b);
    }
    None
}

/// Coefficient magnitudes of a plain certificate as `u64`, or `None`
/// when some coefficient is too large for any `b` to work.
fn coeff_magnitudes(cert: &homology::CoefficientCertificate) -> Option<Vec<u64>> {
    use num_traits::ToPrimitive;
    cert.coefficients
        .iter()
        .map(|c| {
            let m = if c.sign() == num_bigint::Sign::Minus { -c } else { c.clone() };
            m.to_u64()
        })
        .collect()
}

fn conflict_guard(fired: &[(String, Outcome, String)]) -> Result<(), String> {
    let has_yes = fired.iter().any(|(_, o, _)| *o == Outcome::Exists);
    let has_no = fired.iter().any(|(_, o, _)| *o == Outcome::NotExists);
    if has_yes && has_no {
        let tags: Vec<&str> = fired.iter().map(|(t, _, _)| t.as_str()).collect();
        return Err(format!(
            "internal inconsistency: clauses predict both existence and \
             non-existence: {}",
            tags.join(", ")
        ));
    }
    Ok(())
}

fn assemble(
    fired: Vec<(String, Outcome, String)>,
    open_note: String,
    v: u64,
    p: Option<u64>,
    genus: Option<u64>,
    faces: Option<u64>,
) -> Result<Verdict, String> {
    conflict_guard(&fired)?;
    let mut notes = Vec::new();
    let (outcome, reason) = match fired.first() {
        Some((tag, o, detail)) => {
            if !detail.is_empty() {
                notes.push(detail.clone());
            }
            for (t, _, d) in fired.iter().skip(1) {
                notes.push(if d.is_empty() {
                    format!("also applicable: {}", t)
                } else {
                    format!("also applicable: {} ({})", t, d)
                });
            }
            (*o, tag.clone())
        }
        None => {
            notes.push(open_note);
            (Outcome::Unknown, "open".to_string())
        }
    };
    Ok(Verdict { outcome, reason, notes, v, p, genus, faces })
}

/// Decide the triple `(p, v, g)`: does a tessellation of genus `g` by
/// right-angled `p`-gons carry a complex of groups developing to
/// `I_{p,v}`?
pub fn decide(p: usize, v: u64, g: u64) -> Result<Verdict, String> {
    if p < 5 {
        return Err(format!("p must be at least 5, got {}", p));
    }
    if v < 2 {
        return Err(format!("v must be at least 2, got {}", v));
    }
    let faces = match tess::f_of(p, g) {
        Some(f) => f,
        None => {
            return Ok(Verdict {
                outcome: Outcome::NotExists,
                reason: "euler-no-tiling".into(),
                notes: vec![format!(
                    "no closed tessellation: 8(g-1) = {} is not a positive multiple of p-4 = {}",
                    8 * g.saturating_sub(1),
                    p - 4
                )],
                v,
                p: Some(p as u64),
                genus: Some(g),
                faces: None,
            });
        }
    };

    let mut fired: Vec<(String, Outcome, String)> = Vec::new();
    if v % 2 == 0 {
        fired.push((
            "v-even-product-construction".into(),
            Outcome::Exists,
            format!("product construction with edge groups of order {}", v / 2),
        ));
    }
    if faces % 4 == 0 {
        fired.push((
            "sign-certificate-construction".into(),
            Outcome::Exists,
            format!("4 | F = {}: ±1 certificate with b = v - 1 = {}", faces, v - 1),
        ));
    }
    let k = faces as usize;
    if diophantine::no_solution_prime_power(v, k) {
        let (q, n) = diophantine::odd_prime_power(v).unwrap();
        fired.push((
            "prime-power-obstruction".into(),
            Outcome::NotExists,
            format!("F = {} odd and v = {}^{} an odd prime power", faces, q, n),
        ));
    }
    if let Some(ob) = diophantine::obstruction_3qn(v, k) {
        let mut detail = format!(
            "F = {} odd, v = 3·{}^{} and ord_{}(2) = {} ≡ 2 (mod 4)",
            faces, ob.q, ob.n, ob.q, ob.ord2
        );
        if ob.q_mod8_is_3 {
            detail.push_str(&format!(", with {} ≡ 3 (mod 8)", ob.q));
        }
        fired.push(("order-of-2-obstruction".into(), Outcome::NotExists, detail));
    }
    if v == 3 && faces % 4 != 0 {
        fired.push((
            "v3-requires-f-div4".into(),
            Outcome::NotExists,
            format!("v = 3 needs a ±1 certificate, which needs 4 | F; F = {}", faces),
        ));
    }
    if let Some((x, y)) = tess::jigsaw_factorization(p, faces) {
        if x >= 2 && y >= 2 {
            if let Some(b) = b_family_divisor(v, &[1, 2]) {
                fired.push((
                    "b-family-construction".into(),
                    Outcome::Exists,
                    format!(
                        "F = {}·{} jigsaw with {{1,2}} certificate; b = {}: (b+1)(b²+1) = {} divides v",
                        x,
                        y,
                        b,
                        (b + 1) * (b * b + 1)
                    ),
                ));
            }
        }
    }

    let open_note = format!(
        "open: F = {} with v = {} matches no known construction or obstruction",
        faces, v
    );
    assemble(fired, open_note, v, Some(p as u64), Some(g), Some(faces))
}

/// Build and fully verify a witness for an "exists" verdict of
/// [`decide`].  Returns `Ok(None)` for the other outcomes.
pub fn decide_witness(p: usize, v: u64, g: u64) -> Result<Option<(Build, ComplexOfGroups)>, String> {
    let verdict = decide(p, v, g)?;
    if verdict.outcome != Outcome::Exists {
        return Ok(None);
    }
    let faces = verdict.faces.expect("exists verdicts have a face count");
    let (build, cog) = match verdict.reason.as_str() {
        "v-even-product-construction" => {
            let build = tess::build_any(p, faces)?;
            let cog = cog::build_even_v(&build.ts, v)?;
            (build, cog)
        }
        "sign-certificate-construction" => {
            let (ts, cert) = tess::build_f_div4(p, faces)?;
            let cog = cog::build_from_certificate(&ts, &cert, v - 1, v)?;
            (
                Build {
                    ts,
                    construction: tess::Construction::Div4,
                    certificate: Some(cert),
                },
                cog,
            )
        }
        "b-family-construction" => {
            let (x, y) = tess::jigsaw_factorization(p, faces)
                .ok_or_else(|| "jigsaw factorization vanished".to_string())?;
            let (ts, cert) = tess::build_jigsaw(p, faces, x, y)?;
            let cert = cert.ok_or_else(|| "jigsaw certificate missing".to_string())?;
            let b = b_family_divisor(v, &cert.coefficients)
                .ok_or_else(|| "b-family divisor vanished".to_string())?;
            let cog = cog::build_from_certificate(&ts, &cert, b, v)?;
            (
                Build {
                    ts,
                    construction: tess::Construction::Jigsaw { x, y },
                    certificate: Some(cert),
                },
                cog,
            )
        }
        other => return Err(format!("no witness builder for reason {}", other)),
    };
    Ok(Some((build, cog)))
}

/// Decide over a *fixed* tessellated surface: does this particular
/// quotient shape carry a complex of groups developing to `I_{p,v}`?
///
/// Routes, in order: the product construction for even `v`; a native
/// layered certificate reconstructed from dart labels; the exhaustive
/// sign-pattern search; the integer-kernel scan for a nonzero-coefficient
/// certificate with a matching `b`.  For `v = 3` an exhausted sign search
/// is conclusive non-existence.  A truncated search is reported as such
/// and never treated as exhaustion.
pub fn decide_over_tiling(ts: &TiledSurface, v: u64) -> Result<Verdict, String> {
    if v < 2 {
        return Err(format!("v must be at least 2, got {}", v));
    }
    let report = ts.validate();
    if !report.valid {
        return Err(format!("invalid tessellation: {:?}", report.errors));
    }
    let cells = ts.cells();
    let faces = cells.faces.len() as u64;
    let p = Some(ts.p() as u64);
    let genus = report.genus.map(|g| g as u64);

    let mut fired: Vec<(String, Outcome, String)> = Vec::new();
    let mut extra_notes: Vec<String> = Vec::new();

    if v % 2 == 0 {
        fired.push((
            "v-even-product-construction".into(),
            Outcome::Exists,
            format!("product construction with edge groups of order {}", v / 2),
        ));
    }

    match homology::native_certificate_from_labels(ts) {
        Ok(Some(cert)) => {
            if cert.kind == CertKind::PlusMinusOne {
                fired.push((
                    "sign-certificate-construction".into(),
                    Outcome::Exists,
                    format!("native ±1 certificate from labels; b = v - 1 = {}", v - 1),
                ));
            } else if let Some(b) = b_family_divisor(v, &cert.coefficients) {
                fired.push((
                    "b-family-construction".into(),
                    Outcome::Exists,
                    format!("native {} certificate from labels with b = {}", cert.kind.as_str(), b),
                ));
            } else {
                extra_notes.push(format!(
                    "native {} certificate found, but no even b ≤ {} satisfies the \
                     divisibility for v = {}",
                    cert.kind.as_str(),
                    B_SCAN_MAX,
                    v
                ));
            }
        }
        Ok(None) => {}
        Err(e) => extra_notes.push(format!("native label reconstruction failed: {}", e)),
    }

    // The searches are only needed when the cheap routes found nothing.
    let mut sign_exhausted = false;
    if fired.is_empty() {
        match homology::find_sign_coeffs(ts) {
            SignSearch::Found(cert) => {
                debug_assert_eq!(cert.kind, CertKind::PlusMinusOne);
                fired.push((
                    "sign-certificate-construction".into(),
                    Outcome::Exists,
                    format!("sign search found a ±1 certificate; b = v - 1 = {}", v - 1),
                ));
            }
            SignSearch::Exhausted { patterns } => {
                sign_exhausted = true;
                extra_notes.push(format!(
                    "sign search exhausted all {} patterns without a certificate",
                    patterns
                ));
            }
            SignSearch::Truncated { reason } => {
                extra_notes.push(format!("sign search truncated, not exhausted: {}", reason));
            }
        }
    }
    if fired.is_empty() {
        let nz = homology::find_nonzero_coeffs(ts);
        match nz.certificate {
            Some(cert) => match coeff_magnitudes(&cert).and_then(|cs| b_family_divisor(v, &cs)) {
                Some(b) => {
                    fired.push((
                        "b-family-construction".into(),
                        Outcome::Exists,
                        format!(
                            "nonzero certificate with coefficients {:?} admits b = {}",
                            cert.coefficients, b
                        ),
                    ));
                }
                None => extra_notes.push(format!(
                    "nonzero certificate with coefficients {:?}, but no even b ≤ {} \
                     satisfies the divisibility for v = {}",
                    cert.coefficients, B_SCAN_MAX, v
                )),
            },
            None => extra_notes.push(format!("no nonzero certificate: {}", nz.reason)),
        }
    }
    if fired.is_empty() && v == 3 && sign_exhausted {
        fired.push((
            "v3-no-sign-certificate".into(),
            Outcome::NotExists,
            "v = 3 requires a ±1 certificate and the exhaustive search found none".into(),
        ));
    }

    let open_note = format!(
        "undecided over this tessellation: F = {} with v = {}",
        faces, v
    );
    let mut verdict = assemble(fired, open_note, v, p, genus, Some(faces))?;
    verdict.notes.extend(extra_notes);
    Ok(verdict)
}

/// Witness for an "exists" verdict of [`decide_over_tiling`], on the
/// given tessellation.
pub fn decide_over_tiling_witness(
    ts: &TiledSurface,
    v: u64,
) -> Result<Option<ComplexOfGroups>, String> {
    let verdict = decide_over_tiling(ts, v)?;
    if verdict.outcome != Outcome::Exists {
        return Ok(None);
    }
    match verdict.reason.as_str() {
        "v-even-product-construction" => Ok(Some(cog::build_even_v(ts, v)?)),
        "sign-certificate-construction" => {
            let layered = match homology::native_certificate_from_labels(ts) {
                Ok(Some(c)) if c.kind == CertKind::PlusMinusOne => c,
                _ => match homology::find_sign_coeffs(ts) {
                    SignSearch::Found(cert) => homology::solve_layers(ts, &cert)?,
                    _ => return Err("sign certificate vanished on rebuild".into()),
                },
            };
            Ok(Some(cog::build_from_certificate(ts, &layered, v - 1, v)?))
        }
        "b-family-construction" => {
            let layered = match homology::native_certificate_from_labels(ts) {
                Ok(Some(c)) => c,
                _ => {
                    let nz = homology::find_nonzero_coeffs(ts);
                    let cert = nz
                        .certificate
                        .ok_or_else(|| "nonzero certificate vanished on rebuild".to_string())?;
                    homology::solve_layers(ts, &cert)?
                }
            };
            let b = b_family_divisor(v, &layered.coefficients)
                .ok_or_else(|| "b-family divisor vanished on rebuild".to_string())?;
            Ok(Some(cog::build_from_certificate(ts, &layered, b, v)?))
        }
        other => Err(format!("no witness builder for reason {}", other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clause_examples_from_the_classification() {
        // 4 | F with odd v: the ±1-certificate construction.
        let verdict = decide(5, 7, 2).unwrap();
        assert_eq!(verdict.outcome, Outcome::Exists);
        assert_eq!(verdict.reason, "sign-certificate-construction");
        assert_eq!(verdict.faces, Some(8));

        // Odd F with v an odd prime power.
        let verdict = decide(12, 9, 4).unwrap();
        assert_eq!(verdict.outcome, Outcome::NotExists);
        assert_eq!(verdict.reason, "prime-power-obstruction");
        assert_eq!(verdict.faces, Some(3));

        // v = 33 = 3·11 with ord_11(2) = 10 ≡ 2 (mod 4).
        let verdict = decide(12, 33, 4).unwrap();
        assert_eq!(verdict.outcome, Outcome::NotExists);
        assert_eq!(verdict.reason, "order-of-2-obstruction");
        assert!(verdict.notes.iter().any(|n| n.contains("≡ 3 (mod 8)")), "{:?}", verdict.notes);

        // v = 15 over F = 3: genuinely open.
        let verdict = decide(12, 15, 4).unwrap();
        assert_eq!(verdict.outcome, Outcome::Unknown);
        assert_eq!(verdict.reason, "open");
    }

    #[test]
    fn euler_and_even_and_b_family() {
        // 8(g-1) = 8 not divisible by p-4 = 3.
        let verdict = decide(7, 5, 2).unwrap();
        assert_eq!(verdict.outcome, Outcome::NotExists);
        assert_eq!(verdict.reason, "euler-no-tiling");

        let verdict = decide(5, 4, 2).unwrap();
        assert_eq!(verdict.outcome, Outcome::Exists);
        assert_eq!(verdict.reason, "v-even-product-construction");

        // F = 6 = 2·3 jigsaw, v = 15 = (2+1)(2²+1).
        let verdict = decide(12, 15, 7).unwrap();
        assert_eq!(verdict.outcome, Outcome::Exists);
        assert_eq!(verdict.reason, "b-family-construction");

        // v = 3 over F = 2: not divisible by 4.
        let verdict = decide(12, 3, 3).unwrap();
        assert_eq!(verdict.outcome, Outcome::NotExists);
        assert_eq!(verdict.reason, "v3-requires-f-div4");
    }

    #[test]
    fn witnesses_verify() {
        let (_, cog) = decide_witness(5, 7, 2).unwrap().unwrap();
        assert!(cog.verify(7).unwrap().ok());

        let (_, cog) = decide_witness(12, 15, 7).unwrap().unwrap();
        assert!(cog.verify(15).unwrap().ok());

        let (_, cog) = decide_witness(5, 4, 2).unwrap().unwrap();
        assert!(cog.verify(4).unwrap().ok());

        assert!(decide_witness(12, 9, 4).unwrap().is_none());
    }

    #[test]
    fn tiling_level_frozen_cases() {
        // The 3-piece jigsaw ring: no ±1 certificate exists, so v = 3
        // is conclusively impossible over this tessellation.
        let build = tess::build_any(12, 3).unwrap();
        let verdict = decide_over_tiling(&build.ts, 3).unwrap();
        assert_eq!(verdict.outcome, Outcome::NotExists);
        assert_eq!(verdict.reason, "v3-no-sign-certificate");
        assert!(verdict.notes.iter().any(|n| n.contains("512 patterns")), "{:?}", verdict.notes);

        // Same tessellation, even v: exists.
        let verdict = decide_over_tiling(&build.ts, 6).unwrap();
        assert_eq!(verdict.outcome, Outcome::Exists);
        assert_eq!(verdict.reason, "v-even-product-construction");
        let cog = decide_over_tiling_witness(&build.ts, 6).unwrap().unwrap();
        assert!(cog.verify(6).unwrap().ok());

        // One-face surface: 8 patterns, still no certificate.
        let build = tess::build_any(12, 1).unwrap();
        let verdict = decide_over_tiling(&build.ts, 3).unwrap();
        assert_eq!(verdict.outcome, Outcome::NotExists);

        // Native ±1 labels decide odd v without any search.
        let (ts, _) = tess::build_f_div4(5, 8).unwrap();
        let verdict = decide_over_tiling(&ts, 3).unwrap();
        assert_eq!(verdict.outcome, Outcome::Exists);
        assert_eq!(verdict.reason, "sign-certificate-construction");
        let cog = decide_over_tiling_witness(&ts, 3).unwrap().unwrap();
        assert!(cog.verify(3).unwrap().ok());
    }

    #[test]
    fn tiling_level_b_family() {
        let (ts, _) = tess::build_jigsaw(12, 6, 2, 3).unwrap();
        let verdict = decide_over_tiling(&ts, 15).unwrap();
        assert_eq!(verdict.outcome, Outcome::Exists);
        assert_eq!(verdict.reason, "b-family-construction");
        let cog = decide_over_tiling_witness(&ts, 15).unwrap().unwrap();
        assert!(cog.verify(15).unwrap().ok());

        // Odd v with no matching b over the same tessellation: open.
        let verdict = decide_over_tiling(&ts, 7).unwrap();
        assert_eq!(verdict.outcome, Outcome::Unknown);
    }

    #[test]
    fn b_family_divisor_scan() {
        assert_eq!(b_family_divisor(15, &[1, 2]), Some(2));
        assert_eq!(b_family_divisor(15, &[1]), Some(2)); // 3 | 15
        assert_eq!(b_family_divisor(3, &[1]), Some(2)); // b = v - 1
        assert_eq!(b_family_divisor(7, &[1, 2]), None);
        assert_eq!(b_family_divisor(125, &[1]), Some(4)); // 5 | 125
        assert_eq!(b_family_divisor(125, &[1, 2]), None); // 17 ∤ 125
    }

    #[test]
    fn invalid_inputs_error() {
        assert!(decide(4, 3, 2).is_err());
        assert!(decide(5, 1, 2).is_err());
        assert_eq!(decide(5, 3, 0).unwrap().reason, "euler-no-tiling");
    }
}
