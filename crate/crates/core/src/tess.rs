//! Constructions of right-angled tessellations for every admissible `(p, F)`.
//!
//! Darts are numbered `face * p + side`; `next` is rotation within the
//! face, so only the `twin` table has to be built.  Every edge gets a
//! color label:
//!
//! * **black** — the "superimposition" edges inside a sphere (odd `p`) or
//!   between the two polygons of a sphere (even `p`), or the vertical
//!   column boundaries of a jigsaw;
//! * **red** — the short separating edges (sphere-internal pairings for
//!   odd `p`, diagonal column pairings for jigsaws);
//! * **yellow** — the cuff edges chaining spheres into a cycle, or the
//!   horizontal row boundaries of a jigsaw.
//!
//! Two families:
//!
//! * [`build_f_div4`] — works whenever `4 | F` (and `8 | F` for odd `p`,
//!   which integrality of the genus forces anyway).  The tessellation
//!   decomposes into `F/4` (odd `p`) or `F/2` (even `p`) sphere pieces
//!   chained by yellow cuffs; cutting along any single color separates,
//!   which yields a native certificate with all coefficients `±1`.
//! * [`build_jigsaw`] — works for `p ≡ 0 (mod 4)` and any factorization
//!   `F = x·y` with `y` odd (`x` even when `8 | p`).  Faces sit in a
//!   cyclic `x * y` grid; when `x, y >= 2` the row/column structure yields
//!   a native certificate with coefficients in `{1, 2}`.
//!
//! Both builders validate their output and attach the native certificate
//! recovered from the coloring, so a construction bug cannot escape.

use std::collections::BTreeMap;

use crate::homology::{native_certificate_from_labels, LayeredCertificate};
use crate::surface::TiledSurface;

pub const RED: &str = "red";
pub const BLACK: &str = "black";
pub const YELLOW: &str = "yellow";

/// Number of faces of a genus-`g` tessellation by right-angled `p`-gons:
/// `F (p - 4) = 8 (g - 1)`.  `None` when no integral `F >= 1` exists.
pub fn f_of(p: usize, g: u64) -> Option<u64> {
    if p < 5 || g < 2 {
        return None;
    }
    let num = 8 * (g - 1);
    let den = (p - 4) as u64;
    if num % den == 0 {
        Some(num / den)
    } else {
        None
    }
}

/// Which construction [`build_any`] used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Div4,
    Jigsaw { x: usize, y: usize },
}

/// A built tessellation with the construction that produced it and its
/// native certificate.
#[derive(Clone, Debug)]
pub struct Build {
    pub ts: TiledSurface,
    pub construction: Construction,
    /// Present for every div4 build and for jigsaws with `x, y >= 2`.
    pub certificate: Option<LayeredCertificate>,
}

/// Incremental twin-table builder over darts `face * p + side`.
struct GlueTable {
    p: usize,
    twin: Vec<Option<usize>>,
    labels: BTreeMap<usize, String>,
}

impl GlueTable {
    fn new(p: usize, faces: usize) -> Self {
        GlueTable { p, twin: vec![None; p * faces], labels: BTreeMap::new() }
    }

    fn dart(&self, f: usize, i: isize) -> usize {
        let p = self.p as isize;
        f * self.p + (i.rem_euclid(p)) as usize
    }

    fn glue(&mut self, f1: usize, i1: isize, f2: usize, i2: isize, color: &str) {
        let a = self.dart(f1, i1);
        let b = self.dart(f2, i2);
        assert!(self.twin[a].is_none(), "dart {} glued twice", a);
        assert!(self.twin[b].is_none(), "dart {} glued twice", b);
        assert_ne!(a, b, "cannot glue a dart to itself");
        self.twin[a] = Some(b);
        self.twin[b] = Some(a);
        self.labels.insert(a, color.to_string());
        self.labels.insert(b, color.to_string());
    }

    fn finish(self) -> Result<TiledSurface, String> {
        let n = self.twin.len();
        let mut twin = Vec::with_capacity(n);
        for (d, t) in self.twin.into_iter().enumerate() {
            twin.push(t.ok_or_else(|| format!("dart {} left unglued", d))?);
        }
        let next: Vec<usize> =
            (0..n).map(|d| d / self.p * self.p + (d % self.p + 1) % self.p).collect();
        TiledSurface::from_parts(self.p, next, twin, self.labels)
    }
}

/// The sphere construction.  Requires `4 | F`, and `8 | F` when `p` is
/// odd.  Returns the surface and its native `±1` certificate.
pub fn build_f_div4(p: usize, faces: u64) -> Result<(TiledSurface, LayeredCertificate), String> {
    if p < 5 {
        return Err(format!("p = {} is too small", p));
    }
    let f = faces as usize;
    let ts = if p % 2 == 1 {
        if faces % 8 != 0 {
            return Err(format!("odd p = {} needs 8 | F, got F = {}", p, faces));
        }
        build_div4_odd(p, f)?
    } else {
        if faces % 4 != 0 {
            return Err(format!("even p = {} needs 4 | F, got F = {}", p, faces));
        }
        build_div4_even(p, f)?
    };
    finish_build(ts, true).map(|(ts, cert)| (ts, cert.expect("div4 always yields a certificate")))
}

fn build_div4_odd(p: usize, f: usize) -> Result<TiledSurface, String> {
    // Spheres of four polygons: C_A(s) = 4s, C_B(s) = 4s+1, D_A(s) = 4s+2,
    // D_B(s) = 4s+3.  Red glues pair A with B inside each C/D polygon
    // pair, black glues superimpose C onto D with the side mirror
    // i <-> p - i, and yellow cuffs chain the spheres into a cycle:
    // the long cuff runs forward (sphere s to s+1), all short cuffs run
    // backward, which keeps the cuff circles aligned.
    let s_count = f / 4;
    let pi = p as isize;
    let (ca, cb, da, db) =
        (|s: usize| 4 * s, |s: usize| 4 * s + 1, |s: usize| 4 * s + 2, |s: usize| 4 * s + 3);
    let mut t = GlueTable::new(p, f);
    for s in 0..s_count {
        t.glue(ca(s), 0, cb(s), 0, RED);
        t.glue(da(s), 0, db(s), 0, RED);
        for i in (2..pi).step_by(2) {
            t.glue(ca(s), i, db(s), pi - i, BLACK);
        }
        for i in (1..pi - 1).step_by(2) {
            t.glue(cb(s), i, da(s), pi - i, BLACK);
        }
    }
    for s in (0..s_count).step_by(2) {
        let sn = (s + 1) % s_count;
        let sp = (s + s_count - 1) % s_count;
        t.glue(ca(s), 1, cb(sn), pi - 1, YELLOW);
        t.glue(cb(s), pi - 1, ca(sn), 1, YELLOW);
        t.glue(da(s), 1, db(sn), pi - 1, YELLOW);
        t.glue(db(s), pi - 1, da(sn), 1, YELLOW);
        for i in (3..pi - 1).step_by(2) {
            t.glue(ca(s), i, cb(sp), pi - i, YELLOW);
            t.glue(db(s), pi - i, da(sp), i, YELLOW);
        }
        for i in (2..pi - 2).step_by(2) {
            t.glue(cb(s), i, ca(sp), pi - i, YELLOW);
            t.glue(da(s), pi - i, db(sp), i, YELLOW);
        }
    }
    t.finish()
}

fn build_div4_even(p: usize, f: usize) -> Result<TiledSurface, String> {
    // Spheres of two polygons C(s) = 2s, D(s) = 2s+1, black-glued along
    // all even sides with the mirror i <-> (p - i) % p; yellow cuffs
    // chain spheres with one circle forward and the rest backward.
    let s_count = f / 2;
    let pi = p as isize;
    let (c, d) = (|s: usize| 2 * s, |s: usize| 2 * s + 1);
    let mut t = GlueTable::new(p, f);
    for s in 0..s_count {
        for i in (0..pi).step_by(2) {
            t.glue(c(s), i, d(s), pi - i, BLACK);
        }
    }
    for s in (0..s_count).step_by(2) {
        let sn = (s + 1) % s_count;
        let sp = (s + s_count - 1) % s_count;
        t.glue(c(s), 1, c(sn), 1, YELLOW);
        t.glue(d(s), pi - 1, d(sn), pi - 1, YELLOW);
        for k in (3..pi).step_by(2) {
            let kk = pi + 2 - k;
            t.glue(c(s), k, c(sp), kk, YELLOW);
            t.glue(d(s), pi - k, d(sp), pi - kk, YELLOW);
        }
    }
    t.finish()
}

/// The jigsaw construction on a cyclic `x * y` grid of faces (`y` odd;
/// `x` even when `8 | p`).  Face `(c, r)` is `r * x + c`; side 0 is the
/// left black side, side `p/2` the right one; the bottom interleaves
/// yellow sides `1 + 2t` and red sides `2 + 2t`, mirrored on top.
///
/// Returns the surface and, when `x, y >= 2`, its native certificate with
/// coefficients in `{1, 2}`.
pub fn build_jigsaw(
    p: usize,
    faces: u64,
    x: usize,
    y: usize,
) -> Result<(TiledSurface, Option<LayeredCertificate>), String> {
    if p < 5 || p % 4 != 0 {
        return Err(format!("jigsaw construction needs 4 | p, got p = {}", p));
    }
    if x == 0 || y == 0 || x as u64 * y as u64 != faces {
        return Err(format!("grid {}x{} does not have {} faces", x, y, faces));
    }
    if y % 2 == 0 {
        return Err(format!("jigsaw grid height y = {} must be odd", y));
    }
    if p % 8 == 0 && x % 2 != 0 {
        return Err(format!("jigsaw grid width x = {} must be even when 8 | p", x));
    }
    let m = (p - 4) / 4;
    let pi = p as isize;
    let fidx = |c: isize, r: isize| -> usize {
        (r.rem_euclid(y as isize) as usize) * x + c.rem_euclid(x as isize) as usize
    };
    let mut t = GlueTable::new(p, x * y);
    for c in 0..x as isize {
        for r in 0..y as isize {
            t.glue(fidx(c, r), pi / 2, fidx(c + 1, r), 0, BLACK);
            for k in 0..=m as isize {
                t.glue(fidx(c, r), pi - 1 - 2 * k, fidx(c, r + 1), 1 + 2 * k, YELLOW);
            }
        }
    }
    if p % 8 == 4 {
        let h = (m / 2) as isize;
        for c in 0..x as isize {
            for r in 0..y as isize {
                for k in h..m as isize {
                    t.glue(fidx(c, r), pi - 2 - 2 * k, fidx(c + 1, r), pi - 2 - 2 * (k - h), RED);
                    t.glue(fidx(c, r), 2 + 2 * k, fidx(c + 1, r), 2 + 2 * (k - h), RED);
                }
            }
        }
    } else {
        // 8 | p: red sides pair across alternating columns, forward from
        // the odd columns and backward onto the even ones.
        let fwd_lo = (m - p / 8) as isize;
        let bwd_hi = ((p - 8) / 8) as isize;
        for c in (1..x as isize).step_by(2) {
            for r in 0..y as isize {
                for k in fwd_lo..m as isize {
                    t.glue(
                        fidx(c, r),
                        pi - 2 - 2 * k,
                        fidx(c + 1, r),
                        pi - 2 - 2 * (k - fwd_lo),
                        RED,
                    );
                    t.glue(fidx(c, r), 2 + 2 * k, fidx(c + 1, r), 2 + 2 * (k - fwd_lo), RED);
                }
                for k in 0..bwd_hi {
                    t.glue(
                        fidx(c, r),
                        pi - 2 - 2 * k,
                        fidx(c - 1, r),
                        pi - 2 - 2 * (k + (p / 8) as isize),
                        RED,
                    );
                    t.glue(fidx(c, r), 2 + 2 * k, fidx(c - 1, r), 2 + 2 * (k + (p / 8) as isize), RED);
                }
            }
        }
    }
    let ts = t.finish()?;
    finish_build(ts, x >= 2 && y >= 2)
}

/// Validate a freshly built surface and recover its native certificate
/// from the coloring when one is expected.
fn finish_build(
    ts: TiledSurface,
    expect_certificate: bool,
) -> Result<(TiledSurface, Option<LayeredCertificate>), String> {
    let report = ts.validate();
    if !report.valid {
        return Err(format!("construction produced an invalid surface: {:?}", report.errors));
    }
    let cert = native_certificate_from_labels(&ts)?;
    if expect_certificate && cert.is_none() {
        return Err("construction failed to yield its native certificate".into());
    }
    Ok((ts, cert))
}

/// Choose a jigsaw factorization `F = x * y` (`y` odd, `x` even when
/// `8 | p`): prefer `x, y >= 2`, then `y <= x`, then the largest `y`.
pub fn jigsaw_factorization(p: usize, faces: u64) -> Option<(usize, usize)> {
    let f = faces as usize;
    let mut best: Option<((bool, bool, usize, usize), (usize, usize))> = None;
    for y in (1..=f).filter(|y| f % y == 0 && y % 2 == 1) {
        let x = f / y;
        if p % 8 == 0 && x % 2 != 0 {
            continue;
        }
        let rank = (x >= 2 && y >= 2, y <= x, y, x);
        if best.as_ref().is_none_or(|(r, _)| rank > *r) {
            best = Some((rank, (x, y)));
        }
    }
    best.map(|(_, xy)| xy)
}

/// Build some tessellation with `F` faces of `p` sides: div4 whenever
/// `4 | F` (with the extra `8 | F` constraint for odd `p`, which genus
/// integrality forces), otherwise a jigsaw.  Fails when `(p, F)` admits
/// no closed tessellation.
pub fn build_any(p: usize, faces: u64) -> Result<Build, String> {
    if faces == 0 {
        return Err("need at least one face".into());
    }
    if p < 5 {
        return Err(format!("p = {} is too small", p));
    }
    // Genus integrality: 8 | F (p - 4).
    if (faces as usize * (p - 4)) % 8 != 0 {
        return Err(format!(
            "no tessellation: F (p - 4) = {} * {} is not divisible by 8",
            faces,
            p - 4
        ));
    }
    let div4_ok = if p % 2 == 1 { faces % 8 == 0 } else { faces % 4 == 0 };
    if div4_ok {
        let (ts, cert) = build_f_div4(p, faces)?;
        return Ok(Build { ts, construction: Construction::Div4, certificate: Some(cert) });
    }
    if p % 4 == 0 {
        if let Some((x, y)) = jigsaw_factorization(p, faces) {
            let (ts, cert) = build_jigsaw(p, faces, x, y)?;
            return Ok(Build { ts, construction: Construction::Jigsaw { x, y }, certificate: cert });
        }
    }
    Err(format!("no construction available for p = {}, F = {}", p, faces))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_of_formula() {
        assert_eq!(f_of(5, 2), Some(8));
        assert_eq!(f_of(5, 3), Some(16));
        assert_eq!(f_of(12, 2), Some(1));
        assert_eq!(f_of(12, 7), Some(6));
        assert_eq!(f_of(6, 2), Some(4));
        assert_eq!(f_of(7, 2), None); // 8/3 not integral
        assert_eq!(f_of(7, 4), Some(8));
        assert_eq!(f_of(4, 2), None);
        assert_eq!(f_of(5, 1), None);
    }

    /// Frozen shape oracle: (V, E, geodesic count) for known builds.
    fn shape(ts: &TiledSurface) -> (usize, usize, usize) {
        let r = ts.validate();
        assert!(r.valid, "{:?}", r.errors);
        (r.vertices, r.edges, ts.extract_geodesics().len())
    }

    #[test]
    fn div4_odd_fixtures() {
        let (t, _) = build_f_div4(5, 8).unwrap();
        assert_eq!(shape(&t), (10, 20, 7));
        assert_eq!(t.validate().genus, Some(2));

        let (t, _) = build_f_div4(5, 16).unwrap();
        assert_eq!(t.validate().genus, Some(3));
        assert_eq!(t.extract_geodesics().len(), 12);

        let (t, _) = build_f_div4(7, 8).unwrap();
        assert_eq!(t.validate().genus, Some(4));
        assert_eq!(t.validate().vertices, 14);

        for (p, f) in [(9usize, 8u64), (11, 16), (13, 8)] {
            let (t, _) = build_f_div4(p, f).unwrap();
            let expected_genus = 1 + (f as i64) * ((p as i64) - 4) / 8;
            assert_eq!(t.validate().genus, Some(expected_genus), "p={} F={}", p, f);
        }
    }

    #[test]
    fn div4_even_fixtures() {
        let (t, _) = build_f_div4(6, 8).unwrap();
        assert_eq!(t.validate().genus, Some(3));
        assert_eq!(t.extract_geodesics().len(), 10);

        let (t, _) = build_f_div4(8, 4).unwrap();
        assert_eq!(t.validate().genus, Some(3));

        for (p, f) in [(6usize, 4u64), (6, 16), (8, 16), (10, 4), (10, 12), (12, 8)] {
            let (t, _) = build_f_div4(p, f).unwrap();
            let expected_genus = 1 + (f as i64) * ((p as i64) - 4) / 8;
            assert_eq!(t.validate().genus, Some(expected_genus), "p={} F={}", p, f);
        }
    }

    #[test]
    fn jigsaw_fixtures() {
        let (t, cert) = build_jigsaw(12, 1, 1, 1).unwrap();
        assert_eq!(shape(&t), (3, 6, 4));
        assert_eq!(t.validate().genus, Some(2));
        assert!(cert.is_none(), "1x1 grid has no native certificate");

        let (t, cert) = build_jigsaw(12, 6, 2, 3).unwrap();
        assert_eq!(shape(&t), (18, 36, 17));
        assert_eq!(t.validate().genus, Some(7));
        assert!(cert.is_some());

        let (t, cert) = build_jigsaw(12, 3, 3, 1).unwrap();
        assert_eq!(shape(&t), (9, 18, 10));
        assert_eq!(t.validate().genus, Some(4));
        assert!(cert.is_none());

        let (t, _) = build_jigsaw(8, 2, 2, 1).unwrap();
        assert_eq!(t.validate().genus, Some(2));
        assert_eq!(t.extract_geodesics().len(), 5);

        for (p, f, x, y) in [(12usize, 15u64, 5usize, 3usize), (8, 6, 2, 3), (8, 10, 2, 5), (16, 2, 2, 1), (16, 6, 2, 3)]
        {
            let (t, _) = build_jigsaw(p, f, x, y).unwrap();
            let expected_genus = 1 + (f as i64) * ((p as i64) - 4) / 8;
            assert_eq!(t.validate().genus, Some(expected_genus), "p={} F={}", p, f);
        }
    }

    #[test]
    fn geodesics_are_color_pure() {
        for build in [
            build_any(5, 8).unwrap(),
            build_any(6, 8).unwrap(),
            build_any(12, 3).unwrap(),
            build_any(12, 6).unwrap(),
        ] {
            let ts = build.ts;
            for g in ts.extract_geodesics() {
                let colors: std::collections::BTreeSet<&str> =
                    g.darts.iter().map(|&d| ts.label(d).unwrap()).collect();
                assert_eq!(colors.len(), 1, "geodesic {} mixes colors {:?}", g.id, colors);
            }
        }
    }

    #[test]
    fn jigsaw_red_geodesics_have_length_two() {
        let (t, _) = build_jigsaw(12, 6, 2, 3).unwrap();
        for g in t.extract_geodesics() {
            if t.label(g.darts[0]) == Some(RED) {
                assert_eq!(g.len(), 2);
            }
        }
    }

    #[test]
    fn div4_red_geodesics_have_length_four() {
        let (t, _) = build_f_div4(5, 8).unwrap();
        let reds: Vec<_> = t
            .extract_geodesics()
            .into_iter()
            .filter(|g| t.label(g.darts[0]) == Some(RED))
            .collect();
        assert_eq!(reds.len(), 1); // F/8 red geodesics
        assert!(reds.iter().all(|g| g.len() == 4));
    }

    #[test]
    fn factorization_chooser() {
        assert_eq!(jigsaw_factorization(12, 6), Some((2, 3)));
        assert_eq!(jigsaw_factorization(12, 3), Some((3, 1)));
        assert_eq!(jigsaw_factorization(12, 15), Some((5, 3)));
        assert_eq!(jigsaw_factorization(12, 9), Some((3, 3)));
        assert_eq!(jigsaw_factorization(8, 6), Some((2, 3)));
        assert_eq!(jigsaw_factorization(16, 6), Some((2, 3)));
        assert_eq!(jigsaw_factorization(16, 2), Some((2, 1)));
    }

    #[test]
    fn build_any_dispatch() {
        let b = build_any(5, 8).unwrap();
        assert_eq!(b.construction, Construction::Div4);
        assert!(b.certificate.is_some());

        let b = build_any(12, 6).unwrap();
        assert_eq!(b.construction, Construction::Jigsaw { x: 2, y: 3 });
        assert!(b.certificate.is_some());

        let b = build_any(12, 8).unwrap();
        assert_eq!(b.construction, Construction::Div4);

        assert!(build_any(5, 12).is_err()); // 8 does not divide 12
        assert!(build_any(7, 4).is_err());
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(build_jigsaw(12, 6, 2, 2).is_err()); // wrong area… (2*2 != 6)
        assert!(build_jigsaw(12, 4, 2, 2).is_err()); // y even
        assert!(build_jigsaw(16, 3, 3, 1).is_err()); // x odd with 8 | p
        assert!(build_jigsaw(10, 4, 4, 1).is_err()); // p not divisible by 4
    }
}
