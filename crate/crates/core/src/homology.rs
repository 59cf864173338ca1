//! Integral homology of a tessellated surface and coefficient
//! certificates.
//!
//! The cellular chain complex uses these orientation conventions:
//!
//! * an edge is oriented along its canonical dart `c = min(d, twin d)`;
//! * `∂₂[e][f]` sums `+1` for each canonical and `-1` for each
//!   non-canonical dart of face `f` on edge `e` (faces are
//!   counterclockwise, so this is the usual "left of the dart" rule);
//! * `∂₁` sends the edge `c` to `(source of next c) - (source of c)`,
//!   i.e. head minus tail.
//!
//! A *coefficient certificate* is an integer vector `(c_i)` over the
//! canonical geodesics together with a face 2-chain `Δ` such that
//! `∂₂ Δ = Σ c_i h_i`, where `h_i` is the edge cycle of geodesic `i`.
//! Certificates drive the complex-of-groups constructions: all-`±1`
//! certificates give the `b = v - 1` family, `{1,2}` certificates the
//! jigsaw family, and general nonzero certificates the divisibility
//! family.  A *layered* certificate additionally decomposes `Δ` into 0/1
//! face layers, each bounding full geodesics coherently — exactly the
//! data the group construction consumes.
//!
//! Everything is exact; searches report truncation explicitly and never
//! conflate "none found" with "gave up".

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::snf::{self, IMat, Snf};
use crate::surface::{Cells, DualCircuit, Geodesic, TiledSurface};

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

/// The cellular chain complex of a valid surface.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    /// `V x E` vertex boundary matrix.
    pub d1: IMat,
    /// `E x F` face boundary matrix.
    pub d2: IMat,
    pub n_vertices: usize,
    pub n_edges: usize,
    pub n_faces: usize,
}

/// Build the chain complex of `ts` (which must be valid).
pub fn chain_complex(ts: &TiledSurface) -> ChainComplex {
    let cells = ts.cells();
    let (nv, ne, nf) = (cells.vertices.len(), cells.edges.len(), cells.faces.len());
    let mut d2 = IMat::zero(ne, nf);
    for (f, darts) in cells.faces.iter().enumerate() {
        for &d in darts {
            let e = cells.edge_of[d];
            let s = if d == cells.edges[e] { bi(1) } else { bi(-1) };
            d2[(e, f)] += s;
        }
    }
    let mut d1 = IMat::zero(nv, ne);
    for (e, &c) in cells.edges.iter().enumerate() {
        let head = cells.vertex_of[ts.next(c)];
        let tail = cells.vertex_of[c];
        d1[(head, e)] += bi(1);
        d1[(tail, e)] -= bi(1);
    }
    ChainComplex { d1, d2, n_vertices: nv, n_edges: ne, n_faces: nf }
}

/// The edge cycle of an oriented geodesic: `+1` on edges it traverses
/// along the canonical dart, `-1` against.
pub fn geodesic_cycle(cells: &Cells, g: &[usize]) -> Vec<BigInt> {
    let mut z = vec![BigInt::zero(); cells.edges.len()];
    for &d in g {
        let e = cells.edge_of[d];
        if d == cells.edges[e] {
            z[e] += 1;
        } else {
            z[e] -= 1;
        }
    }
    z
}

/// All canonical geodesic cycles, in geodesic order.
pub fn geodesic_cycles(ts: &TiledSurface) -> (Vec<Geodesic>, Vec<Vec<BigInt>>) {
    let cells = ts.cells();
    let gs = ts.extract_geodesics();
    let zs = gs.iter().map(|g| geodesic_cycle(&cells, &g.darts)).collect();
    (gs, zs)
}

/// Membership oracle and solver for the column space of an integer
/// matrix, with the Smith normal form computed once.
pub struct ImageTester {
    snf: Snf,
    rows: usize,
    cols: usize,
}

impl ImageTester {
    pub fn new(a: &IMat) -> Self {
        ImageTester { snf: snf::smith(a), rows: a.rows, cols: a.cols }
    }

    pub fn rank(&self) -> usize {
        self.snf.rank
    }

    fn transformed(&self, z: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(z.len(), self.rows);
        self.snf.u.apply(z)
    }

    /// Is `z` an integral combination of the columns?
    pub fn contains(&self, z: &[BigInt]) -> bool {
        let w = self.transformed(z);
        for (i, wi) in w.iter().enumerate() {
            if i < self.snf.rank {
                if !(wi % &self.snf.d[(i, i)]).is_zero() {
                    return false;
                }
            } else if !wi.is_zero() {
                return false;
            }
        }
        true
    }

    /// An integral `x` with `a x = z`, if one exists.
    pub fn express(&self, z: &[BigInt]) -> Option<Vec<BigInt>> {
        let w = self.transformed(z);
        let mut y = vec![BigInt::zero(); self.cols];
        for (i, wi) in w.iter().enumerate() {
            if i < self.snf.rank {
                let (q, r) = wi.div_rem(&self.snf.d[(i, i)]);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !wi.is_zero() {
                return None;
            }
        }
        Some(self.snf.v.apply(&y))
    }
}

/// `H_1` of the surface with a fixed free basis, supporting the map from
/// 1-cycles to `Z^{2g}` coordinates.
pub struct H1 {
    /// Kernel basis of `∂₁` (columns).
    kernel: IMat,
    kernel_snf: Snf,
    /// Transform from the Smith normal form of the boundary-image matrix
    /// expressed in kernel coordinates; rows `rank..` give the free part.
    ux: IMat,
    rank: usize,
    pub genus: usize,
}

impl H1 {
    /// Coordinates of the class of a 1-cycle `z` in `Z^{2g}`.
    pub fn class_of(&self, z: &[BigInt]) -> Result<Vec<BigInt>, String> {
        // Solve kernel * y = z; fails iff z is not a cycle.
        let w = self.kernel_snf.u.apply(z);
        let mut y = vec![BigInt::zero(); self.kernel.cols];
        for (i, wi) in w.iter().enumerate() {
            if i < self.kernel_snf.rank {
                let (q, r) = wi.div_rem(&self.kernel_snf.d[(i, i)]);
                if !r.is_zero() {
                    return Err("not an integral cycle".into());
                }
                y[i] = q;
            } else if !wi.is_zero() {
                return Err("not a cycle".into());
            }
        }
        let yk = self.kernel_snf.v.apply(&y);
        let w2 = self.ux.apply(&yk);
        Ok(w2[self.rank..].to_vec())
    }

    /// The free part of the classes of the kernel basis vectors, as a
    /// `2g x dim(ker ∂₁)` matrix (column `b` is the class of basis
    /// cycle `b`).
    pub fn kernel_classes(&self) -> IMat {
        let mut out = IMat::zero(2 * self.genus, self.kernel.cols);
        for b in 0..self.kernel.cols {
            for i in self.rank..self.ux.rows {
                out[(i - self.rank, b)] = self.ux[(i, b)].clone();
            }
        }
        out
    }

    pub fn kernel_basis(&self) -> &IMat {
        &self.kernel
    }
}

/// Construct the `H_1` coordinate system and the classes of all canonical
/// geodesics.  Also checks, as a structural invariant, that `H_1` is
/// torsion-free of rank `2g` matching the Euler characteristic.
pub fn h1_classes(ts: &TiledSurface) -> Result<(H1, Vec<Vec<BigInt>>), String> {
    let cc = chain_complex(ts);
    let kernel = snf::kernel_basis(&cc.d1);
    let kernel_snf = snf::smith(&kernel);
    // Express the image of ∂₂ in kernel coordinates: solve K X = ∂₂.
    let x = snf::solve(&kernel, &cc.d2)
        .ok_or_else(|| "image of the face boundary does not lie in the cycle space".to_string())?;
    let sx = snf::smith(&x);
    for i in 0..sx.rank {
        if sx.d[(i, i)] != bi(1) {
            return Err(format!(
                "H1 has torsion: invariant factor {} in the boundary image",
                sx.d[(i, i)]
            ));
        }
    }
    let free_rank = kernel.cols - sx.rank;
    if free_rank % 2 != 0 {
        return Err(format!("odd H1 rank {}", free_rank));
    }
    let h1 = H1 { kernel, kernel_snf, ux: sx.u, rank: sx.rank, genus: free_rank / 2 };
    let (_, zs) = geodesic_cycles(ts);
    let classes = zs.iter().map(|z| h1.class_of(z)).collect::<Result<Vec<_>, _>>()?;
    Ok((h1, classes))
}

/// The shape of a coefficient certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertKind {
    /// All coefficients in `{+1, -1}`.
    PlusMinusOne,
    /// All coefficients in `{1, 2}` up to orientation.
    Weights12,
    /// All coefficients nonzero.
    NonzeroIntegers,
}

impl CertKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertKind::PlusMinusOne => "PlusMinusOne",
            CertKind::Weights12 => "Weights12",
            CertKind::NonzeroIntegers => "NonzeroIntegers",
        }
    }
}

impl std::str::FromStr for CertKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "PlusMinusOne" => Ok(CertKind::PlusMinusOne),
            "Weights12" => Ok(CertKind::Weights12),
            "NonzeroIntegers" => Ok(CertKind::NonzeroIntegers),
            other => Err(format!("unknown certificate kind {:?}", other)),
        }
    }
}

/// Classify a coefficient vector.
pub fn classify_kind(coefficients: &[BigInt]) -> CertKind {
    let one = bi(1);
    let two = bi(2);
    if coefficients.iter().all(|c| c.abs() == one) {
        CertKind::PlusMinusOne
    } else if coefficients.iter().all(|c| c.abs() == one || c.abs() == two) {
        CertKind::Weights12
    } else {
        CertKind::NonzeroIntegers
    }
}

/// A homological certificate: nonzero integers `c_i` over the canonical
/// geodesics and a face chain `Δ` with `∂₂ Δ = Σ c_i h_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientCertificate {
    pub kind: CertKind,
    pub coefficients: Vec<BigInt>,
    pub delta: Vec<BigInt>,
}

/// Recheck a certificate from scratch: kind matches the coefficients, all
/// coefficients are nonzero, and `∂₂ Δ` equals `Σ c_i h_i` exactly.
pub fn verify_certificate(ts: &TiledSurface, cert: &CoefficientCertificate) -> Result<(), String> {
    let cc = chain_complex(ts);
    let (gs, zs) = geodesic_cycles(ts);
    if cert.coefficients.len() != gs.len() {
        return Err(format!(
            "certificate has {} coefficients for {} geodesics",
            cert.coefficients.len(),
            gs.len()
        ));
    }
    if cert.delta.len() != cc.n_faces {
        return Err(format!(
            "certificate Δ has {} entries for {} faces",
            cert.delta.len(),
            cc.n_faces
        ));
    }
    if cert.coefficients.iter().any(|c| c.is_zero()) {
        return Err("certificate has a zero coefficient".into());
    }
    if classify_kind(&cert.coefficients) != cert.kind
        && !(cert.kind == CertKind::NonzeroIntegers)
        && !(cert.kind == CertKind::Weights12
            && classify_kind(&cert.coefficients) == CertKind::PlusMinusOne)
    {
        return Err(format!(
            "certificate kind {:?} does not match its coefficients",
            cert.kind
        ));
    }
    let mut want = vec![BigInt::zero(); cc.n_edges];
    for (c, z) in cert.coefficients.iter().zip(&zs) {
        for (w, ze) in want.iter_mut().zip(z) {
            *w += c * ze;
        }
    }
    let got = cc.d2.apply(&cert.delta);
    if got != want {
        return Err("∂₂ Δ does not equal Σ c_i h_i".into());
    }
    Ok(())
}

/// Cap on the number of geodesics for the exhaustive sign search.
pub const SIGN_SEARCH_MAX_GEODESICS: usize = 24;

/// Outcome of the exhaustive `±1` search.
#[derive(Clone, Debug)]
pub enum SignSearch {
    /// A certificate was found (first hit in the fixed enumeration order).
    Found(CoefficientCertificate),
    /// The full space of sign patterns was exhausted: provably none.
    Exhausted { patterns: u64 },
    /// The search did not run to completion; nothing is proved.
    Truncated { reason: String },
}

/// Search for coefficients `c_i ∈ {+1, -1}` with `Σ c_i h_i ∈ im ∂₂`.
///
/// The overall sign is irrelevant, so `c_1 = +1` is fixed and patterns
/// are enumerated in binary counting order: bit `t` of the pattern index
/// flips the sign of geodesic `t + 1`.  The first hit is returned and
/// re-verified by explicit multiplication.
pub fn find_sign_coeffs(ts: &TiledSurface) -> SignSearch {
    let cc = chain_complex(ts);
    let (gs, zs) = geodesic_cycles(ts);
    let n = gs.len();
    if n > SIGN_SEARCH_MAX_GEODESICS {
        return SignSearch::Truncated {
            reason: format!(
                "{} geodesics exceed the sign-search bound {}",
                n, SIGN_SEARCH_MAX_GEODESICS
            ),
        };
    }
    let tester = ImageTester::new(&cc.d2);
    // Work in the transformed coordinates: membership of z only looks at
    // the rows of U z beyond the rank (the invariant factors here are all
    // 1 because H_1 is torsion-free, and `express` re-checks anyway).
    let uz: Vec<Vec<BigInt>> = zs.iter().map(|z| tester.snf.u.apply(z)).collect();
    let rank = tester.rank();
    let rows = cc.n_edges;
    let patterns: u64 = 1 << (n - 1);
    for k in 0..patterns {
        let sign = |i: usize| -> i64 {
            if i == 0 {
                1
            } else if (k >> (i - 1)) & 1 == 1 {
                -1
            } else {
                1
            }
        };
        let mut ok = true;
        'rows: for r in rank..rows {
            let mut acc = BigInt::zero();
            for i in 0..n {
                if sign(i) > 0 {
                    acc += &uz[i][r];
                } else {
                    acc -= &uz[i][r];
                }
            }
            if !acc.is_zero() {
                ok = false;
                break 'rows;
            }
        }
        if !ok {
            continue;
        }
        let coefficients: Vec<BigInt> = (0..n).map(|i| bi(sign(i))).collect();
        let mut z = vec![BigInt::zero(); rows];
        for i in 0..n {
            for (ze, zi) in z.iter_mut().zip(&zs[i]) {
                if sign(i) > 0 {
                    *ze += zi;
                } else {
                    *ze -= zi;
                }
            }
        }
        let delta = match tester.express(&z) {
            Some(d) => d,
            None => {
                return SignSearch::Truncated {
                    reason: "membership test and solver disagree (internal error)".into(),
                }
            }
        };
        let cert =
            CoefficientCertificate { kind: CertKind::PlusMinusOne, coefficients, delta };
        if let Err(e) = verify_certificate(ts, &cert) {
            return SignSearch::Truncated { reason: format!("re-verification failed: {}", e) };
        }
        return SignSearch::Found(cert);
    }
    SignSearch::Exhausted { patterns }
}

/// Outcome of the nonzero-coefficient search, with the reason a
/// certificate was or was not produced.
#[derive(Clone, Debug)]
pub struct NonzeroSearch {
    pub certificate: Option<CoefficientCertificate>,
    pub reason: String,
}

/// Largest scan parameter for the nonzero-coefficient search.
pub const NONZERO_SCAN_MAX: u64 = 1000;

/// Search for arbitrary nonzero integer coefficients with
/// `Σ c_i h_i ∈ im ∂₂`.
///
/// The admissible coefficient vectors form the projection onto the
/// `c`-coordinates of the integer kernel of `[Z | ∂₂]` (columns: the
/// geodesic cycles, then the face boundaries).  Three cases:
///
/// * the projection is zero — only `c = 0` works: no certificate;
/// * some coordinate vanishes on the whole projection — every admissible
///   vector has a zero coefficient: no certificate;
/// * otherwise a vector with all coordinates nonzero exists, and scanning
///   `w(t) = v_1 + t v_2 + t² v_3 + …` over the projected basis finds one
///   (each coordinate is a nonzero polynomial in `t`, so only finitely
///   many `t` fail); the result is divided by its gcd.
pub fn find_nonzero_coeffs(ts: &TiledSurface) -> NonzeroSearch {
    let cc = chain_complex(ts);
    let (gs, zs) = geodesic_cycles(ts);
    let n = gs.len();
    let mut m = IMat::zero(cc.n_edges, n + cc.n_faces);
    for (i, z) in zs.iter().enumerate() {
        for (e, ze) in z.iter().enumerate() {
            m[(e, i)] = ze.clone();
        }
    }
    for f in 0..cc.n_faces {
        for e in 0..cc.n_edges {
            m[(e, n + f)] = cc.d2[(e, f)].clone();
        }
    }
    let kernel = snf::kernel_basis(&m);
    let mut proj: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..kernel.cols {
        let v: Vec<BigInt> = (0..n).map(|i| kernel[(i, j)].clone()).collect();
        if v.iter().any(|x| !x.is_zero()) {
            proj.push(v);
        }
    }
    if proj.is_empty() {
        return NonzeroSearch {
            certificate: None,
            reason: "the projection of the relation space onto the coefficients is zero".into(),
        };
    }
    for i in 0..n {
        if proj.iter().all(|v| v[i].is_zero()) {
            return NonzeroSearch {
                certificate: None,
                reason: format!(
                    "coefficient {} vanishes on every admissible vector",
                    i
                ),
            };
        }
    }
    for t in 1..=NONZERO_SCAN_MAX {
        let tb = bi(t as i64);
        let mut w = vec![BigInt::zero(); n];
        let mut tpow = BigInt::one();
        for v in &proj {
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi += &tpow * vi;
            }
            tpow *= &tb;
        }
        if w.iter().any(|x| x.is_zero()) {
            continue;
        }
        let mut g = BigInt::zero();
        for x in &w {
            g = g.gcd(x);
        }
        let coefficients: Vec<BigInt> = w.iter().map(|x| x / &g).collect();
        let mut z = vec![BigInt::zero(); cc.n_edges];
        for (c, zi) in coefficients.iter().zip(&zs) {
            for (ze, zie) in z.iter_mut().zip(zi) {
                *ze += c * zie;
            }
        }
        let tester = ImageTester::new(&cc.d2);
        let delta = tester
            .express(&z)
            .expect("kernel projection vector must be realizable (image is saturated)");
        let cert = CoefficientCertificate {
            kind: classify_kind(&coefficients),
            coefficients,
            delta,
        };
        verify_certificate(ts, &cert).expect("freshly built certificate must verify");
        return NonzeroSearch {
            certificate: Some(cert),
            reason: format!("found at scan parameter t = {}", t),
        };
    }
    NonzeroSearch {
        certificate: None,
        reason: format!("scan exhausted (t <= {})", NONZERO_SCAN_MAX),
    }
}

/// Vertex-type statistics of a `±1` certificate chain `Δ`.
#[derive(Clone, Debug)]
pub struct VertexTypeReport {
    /// False when all geodesic coefficients of `∂Δ` are zero (constant
    /// `Δ`): the typing is vacuous.
    pub typed: bool,
    pub coefficients: Vec<i64>,
    /// Vertices of type `n` (quadrant weights `{n-1, n, n, n+1}`).
    pub a: BTreeMap<i64, u64>,
    /// Faces of weight `n`.
    pub f: BTreeMap<i64, u64>,
}

/// Analyze the vertex types of a face chain `Δ` whose boundary is a sum
/// of full geodesics with coefficients in `{-1, 0, +1}`.
///
/// Checks, in order: the coefficient of `∂Δ` along each geodesic is
/// constant with |c| <= 1; coefficients are either all zero (vacuous) or
/// all nonzero; every vertex sees quadrant weights `{n-1, n, n, n+1}`
/// with the two `n`s on opposite quadrants; and the counts satisfy
/// `a_{n-1} + 2 a_n + a_{n+1} = p f_n` for every `n` in range, with
/// `p | a_n`.
pub fn vertex_types(ts: &TiledSurface, delta: &[BigInt]) -> Result<VertexTypeReport, String> {
    let cc = chain_complex(ts);
    let cells = ts.cells();
    if delta.len() != cc.n_faces {
        return Err(format!("Δ has {} entries for {} faces", delta.len(), cc.n_faces));
    }
    let w = cc.d2.apply(delta);
    let (gs, zs) = geodesic_cycles(ts);
    let mut coefficients = Vec::with_capacity(gs.len());
    for (g, z) in gs.iter().zip(&zs) {
        let mut vals: Vec<BigInt> = Vec::new();
        for (e, ze) in z.iter().enumerate() {
            if !ze.is_zero() {
                vals.push(&w[e] * ze);
            }
        }
        let first = vals.first().cloned().unwrap_or_else(BigInt::zero);
        if vals.iter().any(|v| *v != first) {
            return Err(format!(
                "coefficient of ∂Δ is not constant along geodesic {}",
                g.id
            ));
        }
        let c = first.to_i64().ok_or("coefficient overflow")?;
        if c.abs() > 1 {
            return Err(format!("geodesic {} has coefficient {}, outside {{-1, 0, 1}}", g.id, c));
        }
        coefficients.push(c);
    }
    let zeros = coefficients.iter().filter(|&&c| c == 0).count();
    if zeros == coefficients.len() {
        return Ok(VertexTypeReport {
            typed: false,
            coefficients,
            a: BTreeMap::new(),
            f: BTreeMap::new(),
        });
    }
    if zeros > 0 {
        return Err("mixed zero and nonzero geodesic coefficients".into());
    }

    let dv: Vec<i64> = delta
        .iter()
        .map(|x| x.to_i64().ok_or_else(|| "Δ entry overflow".to_string()))
        .collect::<Result<_, _>>()?;
    let mut a: BTreeMap<i64, u64> = BTreeMap::new();
    let mut f: BTreeMap<i64, u64> = BTreeMap::new();
    for (face, _) in cells.faces.iter().enumerate() {
        *f.entry(dv[face]).or_insert(0) += 1;
    }
    for orbit in &cells.vertices {
        let seq: Vec<i64> = orbit.iter().map(|&d| dv[cells.face_of[d]]).collect();
        let mut sorted = seq.clone();
        sorted.sort_unstable();
        let n = sorted[1];
        if sorted != vec![n - 1, n, n, n + 1] {
            return Err(format!(
                "vertex at dart {} has quadrant weights {:?}, not of type {{n-1, n, n, n+1}}",
                orbit[0], seq
            ));
        }
        if !(seq[0] == seq[2] || seq[1] == seq[3]) {
            return Err(format!(
                "vertex at dart {} has its two middle weights on adjacent quadrants: {:?}",
                orbit[0], seq
            ));
        }
        *a.entry(n).or_insert(0) += 1;
    }
    let lo = a.keys().min().unwrap() - 1;
    let hi = a.keys().max().unwrap() + 1;
    let p = ts.p() as i64;
    for n in lo..=hi {
        let lhs = a.get(&(n - 1)).copied().unwrap_or(0) as i64
            + 2 * a.get(&n).copied().unwrap_or(0) as i64
            + a.get(&(n + 1)).copied().unwrap_or(0) as i64;
        let rhs = p * f.get(&n).copied().unwrap_or(0) as i64;
        if lhs != rhs {
            return Err(format!(
                "corner identity fails at n = {}: a_(n-1) + 2 a_n + a_(n+1) = {} but p f_n = {}",
                n, lhs, rhs
            ));
        }
        if a.get(&n).copied().unwrap_or(0) as i64 % p != 0 {
            return Err(format!("p does not divide a_{} = {}", n, a[&n]));
        }
    }
    Ok(VertexTypeReport { typed: true, coefficients, a, f })
}

/// Algebraic intersection number of a dual circuit with a weighted sum of
/// geodesics (or any 1-cycle): each crossing dart `d` of the circuit
/// contributes `+z_e` when the circuit crosses edge `e = e(d)` from the
/// left of its canonical orientation to the right (`d = twin(canonical)`)
/// and `-z_e` otherwise.
pub fn intersection_pairing(
    ts: &TiledSurface,
    circuit: &DualCircuit,
    weights: &[(usize, BigInt)],
) -> Result<BigInt, String> {
    if !ts.circuit_is_closed(circuit) {
        return Err("dual circuit is not closed".into());
    }
    let cells = ts.cells();
    let (gs, zs) = geodesic_cycles(ts);
    let mut z = vec![BigInt::zero(); cells.edges.len()];
    for &(i, ref c) in weights {
        if i >= gs.len() {
            return Err(format!("geodesic index {} out of range", i));
        }
        for (ze, zie) in z.iter_mut().zip(&zs[i]) {
            *ze += c * zie;
        }
    }
    Ok(pair_circuit_cycle(ts, &cells, circuit, &z))
}

/// The crossing formula against an arbitrary 1-cycle.
pub fn pair_circuit_cycle(
    ts: &TiledSurface,
    cells: &Cells,
    circuit: &DualCircuit,
    z: &[BigInt],
) -> BigInt {
    let mut acc = BigInt::zero();
    for &d in &circuit.darts {
        let e = cells.edge_of[d];
        if d == ts.twin(cells.edges[e]) {
            acc += &z[e];
        } else {
            acc -= &z[e];
        }
    }
    acc
}

/// The same pairing computed through `H_1`: the crossing functional
/// descends to `H_1`, is solved for on the free basis, and is evaluated
/// on the class of the weighted cycle.  Must agree with
/// [`intersection_pairing`]; the redundancy cross-checks both routes.
pub fn pairing_via_h1(
    ts: &TiledSurface,
    circuit: &DualCircuit,
    weights: &[(usize, BigInt)],
) -> Result<BigInt, String> {
    if !ts.circuit_is_closed(circuit) {
        return Err("dual circuit is not closed".into());
    }
    let cells = ts.cells();
    let (h1, _) = h1_classes(ts)?;
    // Pair the circuit with every kernel basis cycle.
    let kb = h1.kernel_basis();
    let w: Vec<BigInt> =
        (0..kb.cols).map(|b| pair_circuit_cycle(ts, &cells, circuit, &kb.col(b))).collect();
    // Solve φ · P = w for the functional φ on the free basis, where
    // column b of P is the class of kernel basis cycle b.
    let p = h1.kernel_classes();
    let phi = snf::solve(&p.transpose(), &IMat::col_vec(&w))
        .ok_or_else(|| "crossing functional does not descend to H1".to_string())?;
    // Evaluate on the class of the weighted cycle.
    let (gs, zs) = geodesic_cycles(ts);
    let mut z = vec![BigInt::zero(); cells.edges.len()];
    for &(i, ref c) in weights {
        if i >= gs.len() {
            return Err(format!("geodesic index {} out of range", i));
        }
        for (ze, zie) in z.iter_mut().zip(&zs[i]) {
            *ze += c * zie;
        }
    }
    let class = h1.class_of(&z)?;
    let mut acc = BigInt::zero();
    for (ci, pi) in class.iter().zip((0..phi.rows).map(|r| phi[(r, 0)].clone())) {
        acc += ci * pi;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------
// Layered certificates.
// ---------------------------------------------------------------------

/// A certificate in construction-ready form: orientations flipped so all
/// coefficients are positive, and `Δ` decomposed into 0/1 face layers,
/// each bounding full geodesics with coefficient `+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredCertificate {
    pub kind: CertKind,
    /// `+1`: canonical orientation; `-1`: reversed.
    pub orientations: Vec<i8>,
    /// Positive coefficient per geodesic: the number of layers it bounds.
    pub coefficients: Vec<u64>,
    /// `Δ[f]` = number of layers containing face `f`; min is 0.
    pub delta: Vec<u64>,
    /// `layers[t][f]`: face `f` belongs to layer `t`.
    pub layers: Vec<Vec<bool>>,
}

impl LayeredCertificate {
    /// The signed coefficient vector relative to canonical orientations.
    pub fn signed_coefficients(&self) -> Vec<BigInt> {
        self.orientations
            .iter()
            .zip(&self.coefficients)
            .map(|(&o, &c)| bi(o as i64) * bi(c as i64))
            .collect()
    }

    /// Downgrade to a plain coefficient certificate.
    pub fn to_coefficient_certificate(&self) -> CoefficientCertificate {
        CoefficientCertificate {
            kind: self.kind,
            coefficients: self.signed_coefficients(),
            delta: self.delta.iter().map(|&x| bi(x as i64)).collect(),
        }
    }
}

/// Assemble and fully validate a layered certificate from raw layers:
/// every layer must bound full geodesics with a coherent sign per
/// geodesic, every geodesic must bound at least one layer, and the total
/// `Δ` must attain 0.
pub fn certificate_from_layers(
    ts: &TiledSurface,
    layers: &[Vec<bool>],
) -> Result<LayeredCertificate, String> {
    let cc = chain_complex(ts);
    let (gs, zs) = geodesic_cycles(ts);
    let n = gs.len();
    let mut orient = vec![0i8; n];
    let mut coeff = vec![0u64; n];
    for (t, layer) in layers.iter().enumerate() {
        if layer.len() != cc.n_faces {
            return Err(format!("layer {} has {} entries for {} faces", t, layer.len(), cc.n_faces));
        }
        let ind: Vec<BigInt> = layer.iter().map(|&b| bi(b as i64)).collect();
        let wl = cc.d2.apply(&ind);
        for (i, z) in zs.iter().enumerate() {
            let mut s: Option<BigInt> = None;
            for (e, ze) in z.iter().enumerate() {
                if ze.is_zero() {
                    continue;
                }
                let val = &wl[e] * ze;
                match &s {
                    None => s = Some(val),
                    Some(prev) if *prev != val => {
                        return Err(format!(
                            "layer {} does not bound geodesic {} coherently",
                            t, i
                        ))
                    }
                    _ => {}
                }
            }
            let s = s.unwrap_or_else(BigInt::zero);
            let sv = s.to_i64().ok_or("layer coefficient overflow")?;
            match sv {
                0 => {}
                1 | -1 => {
                    if orient[i] != 0 && orient[i] != sv as i8 {
                        return Err(format!(
                            "layers disagree on the orientation of geodesic {}",
                            i
                        ));
                    }
                    orient[i] = sv as i8;
                    coeff[i] += 1;
                }
                other => {
                    return Err(format!(
                        "layer {} bounds geodesic {} with coefficient {}, expected ±1",
                        t, i, other
                    ))
                }
            }
        }
    }
    if let Some(i) = coeff.iter().position(|&c| c == 0) {
        return Err(format!("geodesic {} bounds no layer", i));
    }
    let mut delta = vec![0u64; cc.n_faces];
    for layer in layers {
        for (d, &b) in delta.iter_mut().zip(layer.iter()) {
            *d += b as u64;
        }
    }
    if delta.iter().min() != Some(&0) {
        return Err("layer sum does not attain weight 0".into());
    }
    let signed: Vec<BigInt> =
        orient.iter().zip(&coeff).map(|(&o, &c)| bi(o as i64 * c as i64)).collect();
    let cert = LayeredCertificate {
        kind: classify_kind(&signed),
        orientations: orient,
        coefficients: coeff,
        delta,
        layers: layers.to_vec(),
    };
    verify_certificate(ts, &cert.to_coefficient_certificate())?;
    Ok(cert)
}

/// Recover the native certificate of a color-labeled tessellation, if the
/// labels exhibit one of the two construction shapes:
///
/// * **sphere shape**: cutting along red (when present) and along black
///   each leaves exactly two components, and the yellow-cut components
///   form a bipartite adjacency; the three (or two) far-from-face-0
///   pieces are the layers, and all coefficients are `±1`;
/// * **jigsaw shape**: the yellow-cut components form an odd cycle of
///   rows and the black+red-cut components a cycle of columns; the four
///   alternation layers have coefficients in `{1, 2}`.
///
/// Returns `Ok(None)` for unlabeled or unrecognized colorings.
pub fn native_certificate_from_labels(
    ts: &TiledSurface,
) -> Result<Option<LayeredCertificate>, String> {
    let n = ts.n_darts();
    let mut colors = Vec::with_capacity(n);
    for d in 0..n {
        match ts.label(d) {
            Some(c) if c == "red" || c == "black" || c == "yellow" => colors.push(c.to_string()),
            _ => return Ok(None),
        }
    }
    for g in ts.extract_geodesics() {
        let c0 = &colors[g.darts[0]];
        if g.darts.iter().any(|&d| &colors[d] != c0) {
            return Ok(None); // mixed-color geodesic: not a native coloring
        }
    }
    let cells = ts.cells();
    let edge_color = |e: usize| colors[cells.edges[e]].clone();

    if let Some(layers) = sphere_layers(ts, &cells, &edge_color) {
        if let Ok(cert) = certificate_from_layers(ts, &layers) {
            if cert.kind == CertKind::PlusMinusOne {
                return Ok(Some(cert));
            }
        }
    }
    if let Some(layers) = jigsaw_layers(ts, &cells, &edge_color) {
        if let Ok(cert) = certificate_from_layers(ts, &layers) {
            if matches!(cert.kind, CertKind::PlusMinusOne | CertKind::Weights12) {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

fn sphere_layers(
    ts: &TiledSurface,
    cells: &Cells,
    edge_color: &dyn Fn(usize) -> String,
) -> Option<Vec<Vec<bool>>> {
    let nf = cells.faces.len();
    let mut layers: Vec<Vec<bool>> = Vec::new();
    let has_red = (0..cells.edges.len()).any(|e| edge_color(e) == "red");
    for color in ["red", "black"] {
        if color == "red" && !has_red {
            continue;
        }
        let (comp, count) = ts.components_cut_along(cells, |e| edge_color(e) == color);
        if count != 2 {
            return None;
        }
        let far = 1 - comp[0];
        layers.push((0..nf).map(|f| comp[f] == far).collect());
    }
    // Yellow: 2-color the yellow-cut components by yellow adjacency.
    let (comp, count) = ts.components_cut_along(cells, |e| edge_color(e) == "yellow");
    if count < 2 {
        return None;
    }
    let mut side = vec![usize::MAX; count];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); count];
    for (e, &c) in cells.edges.iter().enumerate() {
        if edge_color(e) == "yellow" {
            let a = comp[cells.face_of[c]];
            let b = comp[cells.face_of[ts.twin(c)]];
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut queue = std::collections::VecDeque::new();
    side[comp[0]] = 0;
    queue.push_back(comp[0]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if side[y] == usize::MAX {
                side[y] = 1 - side[x];
                queue.push_back(y);
            } else if side[y] == side[x] {
                return None; // odd cycle of spheres: not the sphere shape
            }
        }
    }
    if side.iter().any(|&s| s == usize::MAX) {
        return None;
    }
    layers.push((0..nf).map(|f| side[comp[f]] == 1).collect());
    Some(layers)
}

/// Order the components of a cut into a cycle starting at the component
/// of face 0, stepping first toward the smaller-index neighbor.
fn cycle_positions(
    comp: &[usize],
    count: usize,
    adjacency: &[Vec<usize>],
) -> Option<Vec<usize>> {
    if count < 2 {
        return None;
    }
    let start = comp[0];
    if count == 2 {
        let mut pos = vec![0usize; 2];
        pos[start] = 0;
        pos[1 - start] = 1;
        return Some(pos);
    }
    let mut pos = vec![usize::MAX; count];
    pos[start] = 0;
    let mut neighbors: Vec<Vec<usize>> = adjacency
        .iter()
        .map(|ns| {
            let mut u: Vec<usize> = ns.clone();
            u.sort_unstable();
            u.dedup();
            u
        })
        .collect();
    if neighbors.iter().any(|ns| ns.len() != 2) {
        return None; // not a single cycle
    }
    let mut prev = start;
    let mut here = neighbors[start][0];
    let mut step = 1;
    while here != start {
        if pos[here] != usize::MAX {
            return None;
        }
        pos[here] = step;
        step += 1;
        let ns = std::mem::take(&mut neighbors[here]);
        let nxt = if ns[0] == prev { ns[1] } else { ns[0] };
        prev = here;
        here = nxt;
    }
    if step != count {
        return None; // disconnected cycle structure
    }
    Some(pos)
}

fn jigsaw_layers(
    ts: &TiledSurface,
    cells: &Cells,
    edge_color: &dyn Fn(usize) -> String,
) -> Option<Vec<Vec<bool>>> {
    let nf = cells.faces.len();
    let mut layers: Vec<Vec<bool>> = Vec::new();
    // Rows: cut along yellow; columns: cut along black and red.
    for cut_colors in [&["yellow"][..], &["black", "red"][..]] {
        let (comp, count) =
            ts.components_cut_along(cells, |e| cut_colors.contains(&edge_color(e).as_str()));
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (e, &c) in cells.edges.iter().enumerate() {
            if cut_colors.contains(&edge_color(e).as_str()) {
                let a = comp[cells.face_of[c]];
                let b = comp[cells.face_of[ts.twin(c)]];
                if a != b {
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
        let pos = cycle_positions(&comp, count, &adj)?;
        // Alternation layer: even positions; base layer: position 0.
        layers.push((0..nf).map(|f| pos[comp[f]] % 2 == 0).collect());
        layers.push((0..nf).map(|f| pos[comp[f]] == 0).collect());
    }
    Some(layers)
}

/// Cap on the number of geodesics for the exact-cover layer solver.
pub const LAYER_SOLVER_MAX_GEODESICS: usize = 20;

/// Decompose a certificate into layers: find 0/1 face chains summing to
/// `Δ` such that each layer bounds full geodesics with `+1` (in the
/// certificate's orientations) and geodesic `i` bounds exactly `c_i` of
/// them.  Candidates are the boundary-realizable geodesic subsets; an
/// exact-cover backtrack assembles them.
pub fn solve_layers(
    ts: &TiledSurface,
    cert: &CoefficientCertificate,
) -> Result<LayeredCertificate, String> {
    let cc = chain_complex(ts);
    let (gs, zs) = geodesic_cycles(ts);
    let n = gs.len();
    if cert.coefficients.len() != n {
        return Err("coefficient count mismatch".into());
    }
    if n > LAYER_SOLVER_MAX_GEODESICS {
        return Err(format!(
            "{} geodesics exceed the layer-solver bound {}",
            n, LAYER_SOLVER_MAX_GEODESICS
        ));
    }
    verify_certificate(ts, cert)?;
    // Normalize: positive coefficients via orientation flips, Δ shifted
    // to attain 0 (the all-faces chain has zero boundary, so shifts are
    // free).
    let mut orient = vec![1i8; n];
    let mut coeff = vec![0u64; n];
    let mut zso: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (i, c) in cert.coefficients.iter().enumerate() {
        if c.is_zero() {
            return Err(format!("coefficient {} is zero", i));
        }
        if c.is_negative() {
            orient[i] = -1;
        }
        coeff[i] = c.abs().to_u64().ok_or("coefficient overflow")?;
        zso.push(zs[i].iter().map(|z| bi(orient[i] as i64) * z).collect());
    }
    let dmin = cert.delta.iter().min().cloned().unwrap_or_else(BigInt::zero);
    let delta: Vec<u64> = cert
        .delta
        .iter()
        .map(|x| (x - &dmin).to_u64().ok_or_else(|| "Δ overflow".to_string()))
        .collect::<Result<_, _>>()?;

    // Candidate layers: subsets of geodesics whose summed cycles bound a
    // 0/1 chain (after the free constant shift).
    let tester = ImageTester::new(&cc.d2);
    let mut candidates: Vec<(u32, Vec<bool>)> = Vec::new();
    for mask in 1u32..(1 << n) {
        let mut z = vec![BigInt::zero(); cc.n_edges];
        for i in 0..n {
            if mask >> i & 1 == 1 {
                for (ze, zie) in z.iter_mut().zip(&zso[i]) {
                    *ze += zie;
                }
            }
        }
        let Some(x) = tester.express(&z) else { continue };
        let xmin = x.iter().min().cloned().unwrap();
        let shifted: Vec<BigInt> = x.iter().map(|v| v - &xmin).collect();
        if shifted.iter().all(|v| v.is_zero() || v.is_one()) {
            candidates.push((mask, shifted.iter().map(|v| v.is_one()).collect()));
        }
    }
    // Exact cover with multiplicities.
    let mut chosen: Vec<usize> = Vec::new();
    let mut c_rem = coeff.clone();
    let mut d_rem = delta.clone();
    if !cover(&candidates, n, &mut c_rem, &mut d_rem, &mut chosen) {
        return Err("certificate admits no layer decomposition".into());
    }
    let layers: Vec<Vec<bool>> = chosen.iter().map(|&ci| candidates[ci].1.clone()).collect();
    let lc = certificate_from_layers(ts, &layers)?;
    // The decomposition must reproduce the certificate.
    if lc.signed_coefficients() != cert.coefficients {
        return Err("layer decomposition changed the coefficients (internal error)".into());
    }
    Ok(lc)
}

fn cover(
    candidates: &[(u32, Vec<bool>)],
    n: usize,
    c_rem: &mut [u64],
    d_rem: &mut [u64],
    chosen: &mut Vec<usize>,
) -> bool {
    let Some(i) = (0..n).find(|&i| c_rem[i] > 0) else {
        return d_rem.iter().all(|&d| d == 0);
    };
    for (ci, (mask, faces)) in candidates.iter().enumerate() {
        if mask >> i & 1 != 1 {
            continue;
        }
        if (0..n).any(|j| mask >> j & 1 == 1 && c_rem[j] == 0) {
            continue;
        }
        if faces.iter().enumerate().any(|(f, &b)| b && d_rem[f] == 0) {
            continue;
        }
        for j in 0..n {
            if mask >> j & 1 == 1 {
                c_rem[j] -= 1;
            }
        }
        for (f, &b) in faces.iter().enumerate() {
            if b {
                d_rem[f] -= 1;
            }
        }
        chosen.push(ci);
        if cover(candidates, n, c_rem, d_rem, chosen) {
            return true;
        }
        chosen.pop();
        for j in 0..n {
            if mask >> j & 1 == 1 {
                c_rem[j] += 1;
            }
        }
        for (f, &b) in faces.iter().enumerate() {
            if b {
                d_rem[f] += 1;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tess;

    #[test]
    fn chain_complex_composes_to_zero() {
        for build in [tess::build_any(5, 8).unwrap(), tess::build_any(12, 6).unwrap()] {
            let cc = chain_complex(&build.ts);
            assert!(cc.d1.mul(&cc.d2).is_zero());
            assert_eq!(cc.n_edges, build.ts.n_darts() / 2);
        }
    }

    #[test]
    fn geodesic_cycles_are_cycles() {
        let (ts, _) = tess::build_f_div4(5, 8).unwrap();
        let cc = chain_complex(&ts);
        let (_, zs) = geodesic_cycles(&ts);
        for z in &zs {
            assert!(cc.d1.apply(z).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn h1_rank_matches_genus() {
        for (p, f, g) in [(5usize, 8u64, 2usize), (12, 6, 7), (12, 3, 4), (12, 1, 2)] {
            let build = tess::build_any(p, f).unwrap();
            let (h1, classes) = h1_classes(&build.ts).unwrap();
            assert_eq!(h1.genus, g, "p={} F={}", p, f);
            assert_eq!(classes.len(), build.ts.extract_geodesics().len());
        }
    }

    #[test]
    fn native_certificates_verify() {
        let (ts, cert) = tess::build_f_div4(5, 8).unwrap();
        assert_eq!(cert.kind, CertKind::PlusMinusOne);
        assert_eq!(cert.layers.len(), 3); // red, black, yellow
        verify_certificate(&ts, &cert.to_coefficient_certificate()).unwrap();
        // Frozen: Δ weights are {0, 1, 2, 3} and Δ[0] = 0.
        assert_eq!(cert.delta.iter().min(), Some(&0));
        assert_eq!(cert.delta.iter().max(), Some(&3));
        assert_eq!(cert.delta[0], 0);

        let (ts6, cert6) = tess::build_jigsaw(12, 6, 2, 3).unwrap();
        let cert6 = cert6.unwrap();
        assert_eq!(cert6.kind, CertKind::Weights12);
        assert_eq!(cert6.layers.len(), 4);
        // Frozen: 6 geodesics of coefficient 1, 11 of coefficient 2.
        let mut counts = std::collections::BTreeMap::new();
        for &c in &cert6.coefficients {
            *counts.entry(c).or_insert(0u32) += 1;
        }
        assert_eq!(counts, std::collections::BTreeMap::from([(1u64, 6u32), (2, 11)]));
        verify_certificate(&ts6, &cert6.to_coefficient_certificate()).unwrap();
    }

    #[test]
    fn sign_search_finds_5_8() {
        let (ts, _) = tess::build_f_div4(5, 8).unwrap();
        match find_sign_coeffs(&ts) {
            SignSearch::Found(cert) => {
                // The all-+1 pattern is valid and is enumerated first.
                assert!(cert.coefficients.iter().all(|c| c == &bi(1)));
                verify_certificate(&ts, &cert).unwrap();
            }
            other => panic!("expected a certificate, got {:?}", other),
        }
    }

    #[test]
    fn sign_search_exhausts_12_3() {
        let (ts, _) = tess::build_jigsaw(12, 3, 3, 1).unwrap();
        match find_sign_coeffs(&ts) {
            SignSearch::Exhausted { patterns } => assert_eq!(patterns, 512),
            other => panic!("expected exhaustion, got {:?}", other),
        }
    }

    #[test]
    fn nonzero_search_frozen_outcomes() {
        // (12,3): the kernel lies in a coordinate hyperplane.
        let (ts, _) = tess::build_jigsaw(12, 3, 3, 1).unwrap();
        let r = find_nonzero_coeffs(&ts);
        assert!(r.certificate.is_none());
        assert!(r.reason.contains("vanishes"), "{}", r.reason);

        // (12,1): four independent classes, empty projection.
        let (ts1, _) = tess::build_jigsaw(12, 1, 1, 1).unwrap();
        let r1 = find_nonzero_coeffs(&ts1);
        assert!(r1.certificate.is_none());
        assert!(r1.reason.contains("zero"), "{}", r1.reason);

        // (5,8) and (12,6): certificates exist.
        let (ts58, _) = tess::build_f_div4(5, 8).unwrap();
        let r58 = find_nonzero_coeffs(&ts58);
        let cert = r58.certificate.expect("certificate expected");
        assert!(cert.coefficients.iter().all(|c| !c.is_zero()));

        let (ts6, _) = tess::build_jigsaw(12, 6, 2, 3).unwrap();
        let r6 = find_nonzero_coeffs(&ts6);
        assert!(r6.certificate.is_some());
    }

    #[test]
    fn vertex_types_frozen_5_8() {
        let (ts, cert) = tess::build_f_div4(5, 8).unwrap();
        let delta: Vec<BigInt> = cert.delta.iter().map(|&x| bi(x as i64)).collect();
        let report = vertex_types(&ts, &delta).unwrap();
        assert!(report.typed);
        assert_eq!(report.a, BTreeMap::from([(1i64, 5u64), (2, 5)]));
        assert_eq!(report.f, BTreeMap::from([(0i64, 1u64), (1, 3), (2, 3), (3, 1)]));
    }

    #[test]
    fn vertex_types_vacuous_and_errors() {
        let (ts, _) = tess::build_f_div4(5, 8).unwrap();
        let zero = vec![BigInt::zero(); 8];
        let report = vertex_types(&ts, &zero).unwrap();
        assert!(!report.typed);

        // A chain whose boundary has coefficient 2 somewhere must error.
        let (ts6, cert6) = tess::build_jigsaw(12, 6, 2, 3).unwrap();
        let delta: Vec<BigInt> =
            cert6.unwrap().delta.iter().map(|&x| bi(x as i64)).collect();
        assert!(vertex_types(&ts6, &delta).is_err());
    }

    #[test]
    fn pairing_routes_agree() {
        let (ts, _) = tess::build_f_div4(5, 8).unwrap();
        let n = ts.extract_geodesics().len();
        let circuits = ts.dual_fundamental_circuits();
        assert!(!circuits.is_empty());
        for circ in &circuits {
            for i in 0..n {
                let w = vec![(i, bi(1))];
                let a = intersection_pairing(&ts, circ, &w).unwrap();
                let b = pairing_via_h1(&ts, circ, &w).unwrap();
                assert_eq!(a, b, "circuit {:?} geodesic {}", circ.darts, i);
            }
        }
    }

    #[test]
    fn pairing_vanishes_on_boundaries() {
        // Σ c_i h_i = ∂Δ pairs to zero with every dual circuit.
        let (ts, cert) = tess::build_f_div4(5, 8).unwrap();
        let signed = cert.signed_coefficients();
        let weights: Vec<(usize, BigInt)> =
            signed.iter().cloned().enumerate().collect();
        for circ in ts.dual_fundamental_circuits() {
            assert_eq!(intersection_pairing(&ts, &circ, &weights).unwrap(), bi(0));
        }
    }

    #[test]
    fn pairing_detects_nonnull_classes() {
        // A single geodesic is never null-homologous here: some dual
        // circuit pairs nontrivially with it.
        let (ts, _) = tess::build_f_div4(5, 8).unwrap();
        let circuits = ts.dual_fundamental_circuits();
        let (_, classes) = h1_classes(&ts).unwrap();
        for (i, class) in classes.iter().enumerate() {
            if class.iter().all(|x| x.is_zero()) {
                continue;
            }
            let w = vec![(i, bi(1))];
            assert!(
                circuits
                    .iter()
                    .any(|c| intersection_pairing(&ts, c, &w).unwrap() != bi(0)),
                "geodesic {} has nonzero class but pairs to zero with every basis circuit",
                i
            );
        }
    }

    #[test]
    fn solver_reproduces_native_layers() {
        // Feed the native (5,8) certificate, stripped of its layers,
        // through the generic solver.
        let (ts, native) = tess::build_f_div4(5, 8).unwrap();
        let plain = native.to_coefficient_certificate();
        let solved = solve_layers(&ts, &plain).unwrap();
        assert_eq!(solved.signed_coefficients(), plain.coefficients);
        verify_certificate(&ts, &solved.to_coefficient_certificate()).unwrap();
    }

    #[test]
    fn solver_handles_search_output() {
        let (ts, _) = tess::build_f_div4(5, 8).unwrap();
        let SignSearch::Found(cert) = find_sign_coeffs(&ts) else { panic!() };
        let solved = solve_layers(&ts, &cert).unwrap();
        assert_eq!(solved.signed_coefficients(), cert.coefficients);
    }

    #[test]
    fn native_reconstruction_matches_builders() {
        // Rebuilding certificates from labels alone equals the attached ones.
        for (p, f) in [(5usize, 8u64), (6, 8), (12, 8)] {
            let b = tess::build_any(p, f).unwrap();
            let rec = native_certificate_from_labels(&b.ts).unwrap();
            assert_eq!(rec, b.certificate, "p={} F={}", p, f);
        }
        let (ts, cert) = tess::build_jigsaw(12, 6, 2, 3).unwrap();
        assert_eq!(native_certificate_from_labels(&ts).unwrap(), cert);
        // Unlabeled surfaces reconstruct to nothing.
        let plain = TiledSurface::from_parts(
            ts.p(),
            ts.next_table().to_vec(),
            ts.twin_table().to_vec(),
            Default::default(),
        )
        .unwrap();
        assert_eq!(native_certificate_from_labels(&plain).unwrap(), None);
    }
}
