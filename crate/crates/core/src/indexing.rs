//! Indexings of the barycentric subdivision `Y'` and the three necessary
//! conditions for a complex of groups whose development is a building:
//! `v`-thickness, parallel transport, and unimodularity.
//!
//! An indexing assigns a positive integer to every edge of `Y'`.  Since
//! each barycentric edge is canonically named by its kind and corner
//! dart, an indexing is stored as three per-dart tables `fe`, `ev`, `fv`.
//!
//! * **`v`-thickness**: at every edge-midpoint the two incoming `FE`
//!   indices (one per side) sum to `v`.
//! * **Parallel transport**: the indexing is constant on each parallelism
//!   class of `FE ∪ EV` edges — equivalently it only depends on the
//!   (geodesic, side) label of the class.
//! * **Unimodularity**: the product of `Ind(a)^{±1}` along every closed
//!   loop of the 1-skeleton of `Y'` is 1, with exponent `+1` when the
//!   loop traverses `a` in its face-to-edge-to-vertex direction.
//!   Multiplicativity on corner compositions is checked first; with it,
//!   a fundamental cycle basis decides all loops.
//!
//! Indexings induced by complexes of finite groups (built in the
//! complex-of-groups module as `Ind(a) = |G_target : ψ_a(G_source)|`)
//! satisfy all three conditions; these functions also accept arbitrary
//! indexings and report violations precisely.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::surface::{BKind, DualCircuit, GSide, TiledSurface};

/// An indexing of `E(Y')`: one positive integer per barycentric edge,
/// addressed by kind and corner dart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Indexing {
    pub fe: Vec<u64>,
    pub ev: Vec<u64>,
    pub fv: Vec<u64>,
}

impl Indexing {
    pub fn from_tables(fe: Vec<u64>, ev: Vec<u64>, fv: Vec<u64>) -> Result<Self, String> {
        if fe.len() != ev.len() || fe.len() != fv.len() {
            return Err(format!(
                "table lengths differ: fe {}, ev {}, fv {}",
                fe.len(),
                ev.len(),
                fv.len()
            ));
        }
        for (name, t) in [("fe", &fe), ("ev", &ev), ("fv", &fv)] {
            if let Some(d) = t.iter().position(|&x| x == 0) {
                return Err(format!("{}[{}] = 0: indices must be positive", name, d));
            }
        }
        Ok(Indexing { fe, ev, fv })
    }

    pub fn constant(n_darts: usize, fe: u64, ev: u64) -> Self {
        Indexing { fe: vec![fe; n_darts], ev: vec![ev; n_darts], fv: vec![ev * fe; n_darts] }
    }

    pub fn n_corners(&self) -> usize {
        self.fe.len()
    }

    pub fn get(&self, kind: BKind, corner: usize) -> u64 {
        match kind {
            BKind::FE => self.fe[corner],
            BKind::EV => self.ev[corner],
            BKind::FV => self.fv[corner],
        }
    }

    /// Build an indexing from per-(geodesic, side) values: `FE` and `EV`
    /// edges take their class value, `FV` diagonals are filled in by
    /// multiplicativity (matching how induced indexings behave).
    pub fn from_geodesic_sides(
        ts: &TiledSurface,
        values: &BTreeMap<(usize, GSide), u64>,
    ) -> Result<Indexing, String> {
        let classes = ts.parallelism_classes()?;
        let n = ts.n_darts();
        let value_of = |kind: BKind, d: usize| -> Result<u64, String> {
            let class = *classes
                .class_of
                .get(&(kind, d))
                .ok_or_else(|| format!("no parallelism class for {:?} edge at dart {}", kind, d))?;
            let label = classes.labels[class];
            let v = *values
                .get(&label)
                .ok_or_else(|| format!("no value for geodesic {} side {:?}", label.0, label.1))?;
            if v == 0 {
                return Err(format!("value for geodesic {} side {:?} is zero", label.0, label.1));
            }
            Ok(v)
        };
        let mut fe = Vec::with_capacity(n);
        let mut ev = Vec::with_capacity(n);
        let mut fv = Vec::with_capacity(n);
        for d in 0..n {
            let f = value_of(BKind::FE, d)?;
            let e = value_of(BKind::EV, d)?;
            fe.push(f);
            ev.push(e);
            fv.push(
                e.checked_mul(f)
                    .ok_or_else(|| format!("index overflow at corner {}", d))?,
            );
        }
        Ok(Indexing { fe, ev, fv })
    }
}

/// Result of the `v`-thickness check.
#[derive(Clone, Debug)]
pub struct VThickness {
    pub ok: bool,
    pub v: u64,
    /// `(edge index, canonical dart, actual sum)` for every failing
    /// edge-midpoint.
    pub violations: Vec<(usize, usize, u64)>,
}

/// Check that at every edge-midpoint the two incoming `FE` indices sum
/// to `v`.
pub fn is_v_thick(ind: &Indexing, ts: &TiledSurface, v: u64) -> Result<VThickness, String> {
    if ind.n_corners() != ts.n_darts() {
        return Err(format!(
            "indexing covers {} corners but the surface has {} darts",
            ind.n_corners(),
            ts.n_darts()
        ));
    }
    let cells = ts.cells();
    let mut violations = Vec::new();
    for (e, &c) in cells.edges.iter().enumerate() {
        let sum = ind.fe[c] + ind.fe[ts.twin(c)];
        if sum != v {
            violations.push((e, c, sum));
        }
    }
    Ok(VThickness { ok: violations.is_empty(), v, violations })
}

/// Result of the parallel-transport check.
#[derive(Clone, Debug)]
pub struct Transport {
    pub ok: bool,
    /// First violating class: its index, its (geodesic, side) label, and
    /// the distinct values observed on it.
    pub violation: Option<(usize, (usize, GSide), Vec<u64>)>,
}

/// Check that the indexing is constant on every parallelism class of
/// `FE ∪ EV` edges.
pub fn has_parallel_transport(ind: &Indexing, ts: &TiledSurface) -> Result<Transport, String> {
    if ind.n_corners() != ts.n_darts() {
        return Err("indexing size mismatch".into());
    }
    let classes = ts.parallelism_classes()?;
    for (ci, class) in classes.classes.iter().enumerate() {
        let mut values: Vec<u64> = class.iter().map(|be| ind.get(be.kind, be.corner)).collect();
        values.sort_unstable();
        values.dedup();
        if values.len() > 1 {
            return Ok(Transport { ok: false, violation: Some((ci, classes.labels[ci], values)) });
        }
    }
    Ok(Transport { ok: true, violation: None })
}

/// One step of a loop in the 1-skeleton of `Y'`: which barycentric edge,
/// and whether it is traversed in its face-to-edge-to-vertex direction.
pub type LoopStep = (BKind, usize, bool);

/// Result of the unimodularity check.
#[derive(Clone, Debug)]
pub enum Unimodularity {
    Unimodular,
    /// `Ind(ab) = Ind(a) Ind(b)` fails at a corner; the cycle-basis
    /// reduction would be invalid, so this is a distinct failure.
    NotMultiplicative { corner: usize, detail: String },
    /// A fundamental-basis loop with `Ind(ℓ) ≠ 1`.
    ViolatingLoop { steps: Vec<LoopStep>, value: BigRational },
}

impl Unimodularity {
    pub fn is_unimodular(&self) -> bool {
        matches!(self, Unimodularity::Unimodular)
    }
}

/// The 1-skeleton of `Y'` as a multigraph: nodes are face, edge, and
/// vertex barycenters; arcs are the 3N barycentric edges directed
/// face→edge, edge→vertex, face→vertex.
struct Skeleton {
    nodes: usize,
    /// (kind, corner, from node, to node)
    arcs: Vec<(BKind, usize, usize, usize)>,
    /// Per node: (arc index, forward?, neighbor).
    adj: Vec<Vec<(usize, bool, usize)>>,
}

fn skeleton(ts: &TiledSurface) -> Skeleton {
    let cells = ts.cells();
    let nf = cells.faces.len();
    let ne = cells.edges.len();
    let nv = cells.vertices.len();
    let nodes = nf + ne + nv;
    let mut arcs = Vec::with_capacity(3 * ts.n_darts());
    for d in 0..ts.n_darts() {
        let f = cells.face_of[d];
        let e = nf + cells.edge_of[d];
        let v = nf + ne + cells.vertex_of[d];
        arcs.push((BKind::FE, d, f, e));
        arcs.push((BKind::EV, d, e, v));
        arcs.push((BKind::FV, d, f, v));
    }
    let mut adj: Vec<Vec<(usize, bool, usize)>> = vec![Vec::new(); nodes];
    for (i, &(_, _, from, to)) in arcs.iter().enumerate() {
        adj[from].push((i, true, to));
        adj[to].push((i, false, from));
    }
    Skeleton { nodes, arcs, adj }
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

/// `∏ Ind(a)^{±1}` along a list of loop steps.
pub fn loop_value(ind: &Indexing, steps: &[LoopStep]) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for &(kind, corner, forward) in steps {
        let v = big(ind.get(kind, corner));
        if forward {
            num *= v;
        } else {
            den *= v;
        }
    }
    BigRational::new(num, den)
}

/// Decide unimodularity: check multiplicativity on both factorizations of
/// every corner diagonal, then evaluate `Ind` on a fundamental cycle
/// basis (BFS tree plus chords) of the 1-skeleton of `Y'`.
pub fn is_unimodular(ind: &Indexing, ts: &TiledSurface) -> Result<Unimodularity, String> {
    let n = ts.n_darts();
    if ind.n_corners() != n {
        return Err("indexing size mismatch".into());
    }
    // Multiplicativity: FV(d) = EV(d) ∘ FE(d) = EV(twin(prev d)) ∘ FE(prev d).
    for d in 0..n {
        let first = ind.ev[d].checked_mul(ind.fe[d]);
        if first != Some(ind.fv[d]) {
            return Ok(Unimodularity::NotMultiplicative {
                corner: d,
                detail: format!(
                    "Ind(FV) = {} but Ind(EV) Ind(FE) = {} * {}",
                    ind.fv[d], ind.ev[d], ind.fe[d]
                ),
            });
        }
        let pd = ts.prev(d);
        let second = ind.ev[ts.twin(pd)].checked_mul(ind.fe[pd]);
        if second != Some(ind.fv[d]) {
            return Ok(Unimodularity::NotMultiplicative {
                corner: d,
                detail: format!(
                    "Ind(FV) = {} but the second factorization gives {} * {}",
                    ind.fv[d],
                    ind.ev[ts.twin(pd)],
                    ind.fe[pd]
                ),
            });
        }
    }
    let sk = skeleton(ts);
    // BFS spanning tree.
    let mut parent: Vec<Option<(usize, bool)>> = vec![None; sk.nodes]; // (arc, arrived forward?)
    let mut depth = vec![usize::MAX; sk.nodes];
    let mut order = std::collections::VecDeque::new();
    depth[0] = 0;
    order.push_back(0);
    let mut tree_arc = vec![false; sk.arcs.len()];
    while let Some(x) = order.pop_front() {
        for &(a, fwd, y) in &sk.adj[x] {
            if depth[y] == usize::MAX {
                depth[y] = depth[x] + 1;
                parent[y] = Some((a, fwd));
                tree_arc[a] = true;
                order.push_back(y);
            }
        }
    }
    if depth.iter().any(|&d| d == usize::MAX) {
        return Err("barycentric 1-skeleton is disconnected".into());
    }
    // Walk from a node to an ancestor at target depth, collecting steps
    // (traversed child-to-parent, so a forward tree arc is walked
    // backward).
    let climb = |mut x: usize, target: usize, steps: &mut Vec<LoopStep>| -> usize {
        while depth[x] > target {
            let (a, fwd) = parent[x].unwrap();
            let (kind, corner, from, to) = sk.arcs[a];
            steps.push((kind, corner, !fwd));
            x = if fwd { from } else { to };
            debug_assert!(from == x || to == x);
        }
        x
    };
    for (a, &(kind, corner, from, to)) in sk.arcs.iter().enumerate() {
        if tree_arc[a] {
            continue;
        }
        // Chord loop: chord forward, then tree path to → from.
        let mut steps: Vec<LoopStep> = vec![(kind, corner, true)];
        let mut up = Vec::new();
        let mut down = Vec::new();
        let (mut x, mut y) = (to, from);
        let common = depth[x].min(depth[y]);
        x = climb(x, common, &mut up);
        y = climb(y, common, &mut down);
        while x != y {
            x = climb(x, depth[x] - 1, &mut up);
            y = climb(y, depth[y] - 1, &mut down);
        }
        steps.extend(up);
        // The downward half is traversed in reverse, with flipped directions.
        steps.extend(down.into_iter().rev().map(|(k, c, f): LoopStep| (k, c, !f)));
        let value = loop_value(ind, &steps);
        if !value.is_one() {
            return Ok(Unimodularity::ViolatingLoop { steps, value });
        }
    }
    Ok(Unimodularity::Unimodular)
}

/// Evaluate `Ind` on `count` pseudorandom closed loops (seeded, so
/// deterministic): a random walk of random length closed up through the
/// BFS tree.  Returns the first loop with `Ind(ℓ) ≠ 1`, if any.
pub fn random_loops_check(
    ind: &Indexing,
    ts: &TiledSurface,
    count: usize,
    seed: u64,
) -> Result<(), (Vec<LoopStep>, BigRational)> {
    let sk = skeleton(ts);
    let mut parent: Vec<Option<(usize, bool)>> = vec![None; sk.nodes];
    let mut depth = vec![usize::MAX; sk.nodes];
    let mut order = std::collections::VecDeque::new();
    depth[0] = 0;
    order.push_back(0);
    while let Some(x) = order.pop_front() {
        for &(a, fwd, y) in &sk.adj[x] {
            if depth[y] == usize::MAX {
                depth[y] = depth[x] + 1;
                parent[y] = Some((a, fwd));
                order.push_back(y);
            }
        }
    }
    let path_to_root = |mut x: usize| -> Vec<LoopStep> {
        let mut steps = Vec::new();
        while let Some((a, fwd)) = parent[x] {
            let (kind, corner, from, to) = sk.arcs[a];
            steps.push((kind, corner, !fwd));
            x = if fwd { from } else { to };
        }
        steps
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let start = rng.gen_range(0..sk.nodes);
        let len = rng.gen_range(1..=40usize);
        let mut steps = Vec::new();
        let mut here = start;
        for _ in 0..len {
            let &(a, fwd, next) = &sk.adj[here][rng.gen_range(0..sk.adj[here].len())];
            let (kind, corner, _, _) = sk.arcs[a];
            steps.push((kind, corner, fwd));
            here = next;
        }
        // Close up: here → root → start through the tree.
        steps.extend(path_to_root(here));
        steps.extend(
            path_to_root(start).into_iter().rev().map(|(k, c, f): LoopStep| (k, c, !f)),
        );
        let value = loop_value(ind, &steps);
        if !value.is_one() {
            return Err((steps, value));
        }
    }
    Ok(())
}

/// `Ind(ℓ)` of a dual circuit: each crossing of an edge contributes the
/// ratio of the `FE` index behind the crossing to the `FE` index ahead of
/// it (the lift of the circuit to `Y'` runs face → edge-midpoint → face).
pub fn dual_circuit_value(
    ind: &Indexing,
    ts: &TiledSurface,
    circuit: &DualCircuit,
) -> Result<BigRational, String> {
    if !ts.circuit_is_closed(circuit) {
        return Err("dual circuit is not closed".into());
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for &d in &circuit.darts {
        num *= big(ind.fe[ts.twin(d)]);
        den *= big(ind.fe[d]);
    }
    Ok(BigRational::new(num, den))
}

/// The unimodularity equation read off one dual circuit: with `a_j` the
/// `FE` index on the entered side of crossing `j` and a `v`-thick
/// indexing, `Ind(ℓ) = 1` becomes `∏ a_j = ∏ (v − a_j)`.
#[derive(Clone, Debug)]
pub struct UnimodEquation {
    pub circuit: DualCircuit,
    pub a: Vec<u64>,
}

impl UnimodEquation {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.a.len() % 2 == 1
    }

    /// Does `∏ a_j = ∏ (v − a_j)` hold (exactly, in big integers)?
    pub fn holds(&self, v: u64) -> bool {
        let mut lhs = BigInt::one();
        let mut rhs = BigInt::one();
        for &a in &self.a {
            lhs *= big(a);
            rhs *= big(v - a.min(v));
        }
        lhs == rhs
    }
}

/// Extract the unimodularity equations of a fundamental dual-circuit
/// basis.  With `F` odd at least one equation has odd length.
pub fn unimodularity_equations(ind: &Indexing, ts: &TiledSurface) -> Vec<UnimodEquation> {
    ts.dual_fundamental_circuits()
        .into_iter()
        .map(|circuit| {
            let a = circuit.darts.iter().map(|&d| ind.fe[d]).collect();
            UnimodEquation { circuit, a }
        })
        .collect()
}
