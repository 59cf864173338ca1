//! The dart model of a tessellated surface.
//!
//! A closed oriented surface tessellated by `p`-gons is stored as a set of
//! darts (oriented edge sides).  Two permutations generate everything:
//!
//! * `next` — the face successor; its orbits are the face boundaries,
//!   read counterclockwise, so the face lies on the *left* of each dart;
//! * `twin` — the fixed-point-free involution matching the two darts of
//!   every edge.
//!
//! Derived permutations: `prev = next^{-1}`, the vertex rotation
//! `rot(d) = next(twin(d))` whose orbits are the darts emanating from a
//! common source vertex, and the straight-line step
//! `geo_next(d) = next(twin(next(d)))`, which at a 4-valent vertex
//! continues a dart straight across.  `geo_next` orbits are the closed
//! geodesics of the tessellation, and they satisfy
//! `geo_next(twin(geo_next(d))) = twin(d)`: the reverse of a geodesic is
//! again a geodesic.
//!
//! A tessellation is *valid* when `twin` is an involution without fixed
//! points, every `next` orbit has length exactly `p >= 5`, every vertex
//! has valence four, the surface is connected, and no geodesic meets its
//! own reverse.  All decision procedures in this crate require validity.
//!
//! Cell indices (faces, edges, vertices) are assigned by first-visit order
//! over ascending dart ids, so they are deterministic functions of
//! `(p, next, twin)`.

use std::collections::{BTreeMap, BTreeSet};

/// A tessellated closed oriented surface in the dart model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiledSurface {
    p: usize,
    next: Vec<usize>,
    prev: Vec<usize>,
    twin: Vec<usize>,
    labels: BTreeMap<usize, String>,
}

impl TiledSurface {
    /// Build a surface from raw permutation tables.  Rejects structurally
    /// malformed input (wrong lengths, out-of-range entries, non-bijective
    /// tables) with positional diagnostics; deeper geometric defects are
    /// reported by [`TiledSurface::validate`].
    pub fn from_parts(
        p: usize,
        next: Vec<usize>,
        twin: Vec<usize>,
        labels: BTreeMap<usize, String>,
    ) -> Result<Self, String> {
        if p < 3 {
            return Err(format!("p = {} is too small for a polygon", p));
        }
        let n = next.len();
        if n == 0 {
            return Err("empty dart set".into());
        }
        if twin.len() != n {
            return Err(format!("next has {} entries but twin has {}", n, twin.len()));
        }
        for (name, table) in [("next", &next), ("twin", &twin)] {
            let mut seen = vec![usize::MAX; n];
            for (d, &x) in table.iter().enumerate() {
                if x >= n {
                    return Err(format!("{}[{}] = {} is out of range (darts: {})", name, d, x, n));
                }
                if seen[x] != usize::MAX {
                    return Err(format!(
                        "{} is not a permutation: value {} appears at positions {} and {}",
                        name, x, seen[x], d
                    ));
                }
                seen[x] = d;
            }
        }
        for (&d, _) in &labels {
            if d >= n {
                return Err(format!("label key {} is out of range (darts: {})", d, n));
            }
        }
        let mut prev = vec![0usize; n];
        for (d, &x) in next.iter().enumerate() {
            prev[x] = d;
        }
        Ok(TiledSurface { p, next, prev, twin, labels })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n_darts(&self) -> usize {
        self.next.len()
    }

    pub fn next(&self, d: usize) -> usize {
        self.next[d]
    }

    pub fn prev(&self, d: usize) -> usize {
        self.prev[d]
    }

    pub fn twin(&self, d: usize) -> usize {
        self.twin[d]
    }

    /// Vertex rotation: the next dart counterclockwise around the source
    /// vertex of `d`.
    pub fn rot(&self, d: usize) -> usize {
        self.next[self.twin[d]]
    }

    /// The straight continuation of `d` across the vertex it points at.
    pub fn geo_next(&self, d: usize) -> usize {
        self.next[self.twin[self.next[d]]]
    }

    pub fn label(&self, d: usize) -> Option<&str> {
        self.labels.get(&d).map(|s| s.as_str())
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    pub fn set_label(&mut self, d: usize, label: &str) {
        assert!(d < self.n_darts());
        self.labels.insert(d, label.to_string());
    }

    pub fn next_table(&self) -> &[usize] {
        &self.next
    }

    pub fn twin_table(&self) -> &[usize] {
        &self.twin
    }

    /// Full validity check.  Collects every defect it can diagnose; later
    /// checks that depend on earlier ones (e.g. valence needs a
    /// fixed-point-free involution) are skipped once a prerequisite fails.
    pub fn validate(&self) -> ValidationReport {
        let n = self.n_darts();
        let mut errors = Vec::new();

        if self.p < 5 {
            errors.push(format!("p = {} < 5: not a right-angled polygon", self.p));
        }

        let mut involution_ok = true;
        for d in 0..n {
            if self.twin[self.twin[d]] != d {
                errors.push(format!(
                    "non-involutive twin: twin[twin[{}]] = {} != {}",
                    d,
                    self.twin[self.twin[d]],
                    d
                ));
                involution_ok = false;
            }
        }
        for d in 0..n {
            if self.twin[d] == d {
                errors.push(format!("boundary dart: twin[{}] = {} leaves the edge unglued", d, d));
                involution_ok = false;
            }
        }

        let mut faces = 0usize;
        {
            let mut seen = vec![false; n];
            for d in 0..n {
                if seen[d] {
                    continue;
                }
                let mut len = 0;
                let mut x = d;
                loop {
                    seen[x] = true;
                    len += 1;
                    x = self.next[x];
                    if x == d {
                        break;
                    }
                }
                faces += 1;
                if len != self.p {
                    errors.push(format!(
                        "face orbit through dart {} has length {}, expected p = {}",
                        d, len, self.p
                    ));
                }
            }
        }

        let edges = n / 2;
        let mut vertices = 0usize;
        if involution_ok {
            let mut seen = vec![false; n];
            for d in 0..n {
                if seen[d] {
                    continue;
                }
                let mut len = 0;
                let mut x = d;
                loop {
                    seen[x] = true;
                    len += 1;
                    x = self.rot(x);
                    if x == d {
                        break;
                    }
                }
                vertices += 1;
                if len != 4 {
                    errors.push(format!(
                        "valence {} at the vertex containing dart {}, expected 4",
                        len, d
                    ));
                }
            }
        }

        {
            let mut uf = UnionFind::new(n);
            for d in 0..n {
                uf.union(d, self.next[d]);
                uf.union(d, self.twin[d]);
            }
            let comps = uf.component_count();
            if comps != 1 {
                errors.push(format!("disconnected: {} components", comps));
            }
        }

        if involution_ok && errors.is_empty() {
            // Geodesic orbits must be disjoint from their own reverses.
            let mut seen = vec![false; n];
            for d in 0..n {
                if seen[d] {
                    continue;
                }
                let mut orbit = Vec::new();
                let mut x = d;
                loop {
                    seen[x] = true;
                    orbit.push(x);
                    x = self.geo_next(x);
                    if x == d {
                        break;
                    }
                }
                let set: BTreeSet<usize> = orbit.iter().copied().collect();
                if let Some(&bad) = orbit.iter().find(|&&y| set.contains(&self.twin[y])) {
                    errors.push(format!(
                        "non-orientable gluing: the geodesic through dart {} meets its own reverse at dart {}",
                        d, bad
                    ));
                } else {
                    for &y in &orbit {
                        seen[self.twin[y]] = true;
                    }
                }
            }
        }

        let euler = vertices as i64 - edges as i64 + faces as i64;
        let genus = if involution_ok && (2 - euler) % 2 == 0 { Some((2 - euler) / 2) } else { None };
        ValidationReport {
            valid: errors.is_empty(),
            errors,
            p: self.p,
            darts: n,
            faces,
            edges,
            vertices,
            euler,
            genus,
        }
    }

    /// Deterministic cell indexing.  Requires a valid surface.
    pub fn cells(&self) -> Cells {
        let n = self.n_darts();
        let mut faces = Vec::new();
        let mut face_of = vec![usize::MAX; n];
        for d in 0..n {
            if face_of[d] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut orbit = Vec::with_capacity(self.p);
            let mut x = d;
            loop {
                face_of[x] = id;
                orbit.push(x);
                x = self.next[x];
                if x == d {
                    break;
                }
            }
            faces.push(orbit);
        }

        let mut edges = Vec::with_capacity(n / 2);
        let mut edge_of = vec![usize::MAX; n];
        for d in 0..n {
            if d < self.twin[d] {
                edge_of[d] = edges.len();
                edge_of[self.twin[d]] = edges.len();
                edges.push(d);
            }
        }

        let mut vertices = Vec::new();
        let mut vertex_of = vec![usize::MAX; n];
        for d in 0..n {
            if vertex_of[d] != usize::MAX {
                continue;
            }
            let id = vertices.len();
            let mut orbit = Vec::with_capacity(4);
            let mut x = d;
            loop {
                vertex_of[x] = id;
                orbit.push(x);
                x = self.rot(x);
                if x == d {
                    break;
                }
            }
            vertices.push(orbit);
        }

        Cells { faces, face_of, edges, edge_of, vertices, vertex_of }
    }

    /// Closed geodesics, one canonical orientation per undirected
    /// geodesic: of the two mutually reverse `geo_next` orbits, the one
    /// containing the smallest dart wins, and it is listed starting there.
    /// Geodesics are sorted by that smallest dart.
    pub fn extract_geodesics(&self) -> Vec<Geodesic> {
        let n = self.n_darts();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for d in 0..n {
            if seen[d] {
                continue;
            }
            // d is the smallest dart of its orbit pair (all smaller darts
            // are marked), so its orbit is the canonical orientation.
            let mut darts = Vec::new();
            let mut x = d;
            loop {
                seen[x] = true;
                darts.push(x);
                x = self.geo_next(x);
                if x == d {
                    break;
                }
            }
            for &y in &darts {
                seen[self.twin[y]] = true;
            }
            let id = out.len();
            out.push(Geodesic { id, darts });
        }
        out
    }

    /// The reverse orientation of a geodesic, as a `geo_next` orbit
    /// starting at the twin of the canonical starting dart.
    pub fn reversed_darts(&self, g: &Geodesic) -> Vec<usize> {
        let mut out = Vec::with_capacity(g.darts.len());
        out.push(self.twin[g.darts[0]]);
        for &d in g.darts.iter().skip(1).rev() {
            out.push(self.twin[d]);
        }
        out
    }

    /// The barycentric subdivision as a set of typed edges, together with
    /// the per-corner composition table.
    pub fn barycentric_subdivision(&self) -> Barycentric {
        let cells = self.cells();
        let n = self.n_darts();
        let mut edges = Vec::with_capacity(3 * n);
        for kind in [BKind::FE, BKind::EV, BKind::FV] {
            for d in 0..n {
                edges.push(self.barycentric_edge(&cells, kind, d));
            }
        }
        let corners = (0..n)
            .map(|d| CornerRelation {
                corner: d,
                a: self.barycentric_edge(&cells, BKind::EV, d),
                b: self.barycentric_edge(&cells, BKind::FE, d),
                c: self.barycentric_edge(&cells, BKind::FV, d),
            })
            .collect();
        Barycentric { edges, corners }
    }

    /// The typed barycentric edge with corner dart `d`.
    ///
    /// * `FE(d)`: face of `d` -> edge of `d`;
    /// * `EV(d)`: edge of `d` -> source vertex of `d`;
    /// * `FV(d)`: face of `d` -> source vertex of `d`.
    pub fn barycentric_edge(&self, cells: &Cells, kind: BKind, d: usize) -> BarycentricEdge {
        let (source, target) = match kind {
            BKind::FE => (cells.face_of[d], cells.edge_of[d]),
            BKind::EV => (cells.edge_of[d], cells.vertex_of[d]),
            BKind::FV => (cells.face_of[d], cells.vertex_of[d]),
        };
        BarycentricEdge { kind, source, target, corner: d }
    }

    /// The second factorization of the corner relation at `d`: the
    /// triangle on the other side of `FV(d)` gives
    /// `FV(d) = EV(twin(prev d)) ∘ FE(prev d)`.
    pub fn second_factorization(
        &self,
        cells: &Cells,
        d: usize,
    ) -> (BarycentricEdge, BarycentricEdge) {
        let pd = self.prev[d];
        (
            self.barycentric_edge(cells, BKind::EV, self.twin[pd]),
            self.barycentric_edge(cells, BKind::FE, pd),
        )
    }

    /// Parallelism classes of the FE and EV barycentric edges: the
    /// union-find closure of the corner relation `a ∥ a'`, `b ∥ b'`
    /// whenever `a b = b' a'` across a corner.  The classes are verified
    /// against the geometric description — one class per side of each
    /// geodesic — and that bijection is returned as `labels`.
    pub fn parallelism_classes(&self) -> Result<ParallelismClasses, String> {
        let n = self.n_darts();
        let cells = self.cells();
        // Node ids: FE(d) -> d, EV(d) -> n + d.
        let mut uf = UnionFind::new(2 * n);
        for d in 0..n {
            let pd = self.prev[d];
            // FV(d) = EV(d) ∘ FE(d) = EV(twin(prev d)) ∘ FE(prev d):
            // parallel pairs pair the EV of one factorization with the FE
            // of the other.
            uf.union(n + d, pd);
            uf.union(d, n + self.twin[pd]);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for node in 0..2 * n {
            groups.entry(uf.find(node)).or_default().push(node);
        }
        let computed: BTreeSet<Vec<usize>> = groups.into_values().collect();

        // Geometric prediction: the left class of an oriented geodesic
        // consists of the FE edges of its darts plus the EV edges of
        // their `next` darts; the right class is the left class of the
        // reverse orientation.
        let geodesics = self.extract_geodesics();
        let mut predicted: Vec<(Vec<usize>, (usize, GSide))> = Vec::new();
        for g in &geodesics {
            for (side, darts) in
                [(GSide::Left, g.darts.clone()), (GSide::Right, self.reversed_darts(g))]
            {
                let mut nodes = Vec::new();
                for &d in &darts {
                    nodes.push(d); // FE(d)
                    nodes.push(n + self.next[d]); // EV(next d)
                }
                nodes.sort_unstable();
                predicted.push((nodes, (g.id, side)));
            }
        }
        let predicted_sets: BTreeSet<Vec<usize>> =
            predicted.iter().map(|(nodes, _)| nodes.clone()).collect();
        if predicted_sets != computed {
            return Err(format!(
                "parallelism classes do not match geodesic sides: {} computed classes vs {} predicted",
                computed.len(),
                predicted_sets.len()
            ));
        }

        // Canonical order: by smallest node id.
        predicted.sort_by_key(|(nodes, _)| nodes[0]);
        let mut classes = Vec::new();
        let mut labels = Vec::new();
        let mut class_of = BTreeMap::new();
        for (idx, (nodes, label)) in predicted.into_iter().enumerate() {
            let mut members = Vec::new();
            for node in nodes {
                let (kind, d) = if node < n { (BKind::FE, node) } else { (BKind::EV, node - n) };
                class_of.insert((kind, d), idx);
                members.push(self.barycentric_edge(&cells, kind, d));
            }
            classes.push(members);
            labels.push(label);
        }
        Ok(ParallelismClasses { classes, class_of, labels })
    }

    /// The dual multigraph: one node per face, one arc per edge.  The
    /// stored direction of an arc is the crossing of its canonical dart
    /// `c`: from the face of `twin(c)` into the face of `c`.
    pub fn dual_graph(&self) -> DualGraph {
        let cells = self.cells();
        let arcs = cells
            .edges
            .iter()
            .enumerate()
            .map(|(e, &c)| DualArc {
                edge: e,
                canonical_dart: c,
                from: cells.face_of[self.twin[c]],
                to: cells.face_of[c],
            })
            .collect();
        DualGraph { faces: cells.faces.len(), arcs }
    }

    /// All simple circuits of length `k` in the dual graph, up to rotation
    /// and reversal.  A circuit is a cyclic dart sequence `d_1, …, d_k`
    /// where step `i` crosses edge `e(d_i)` from the face of `twin(d_i)`
    /// into the face of `d_i`; "simple" means no face and no edge repeats.
    /// Length-1 circuits (an edge glued to the same face twice) and
    /// length-2 circuits through parallel edges are included.
    pub fn dual_circuits(&self, k: usize) -> Vec<DualCircuit> {
        assert!(k >= 1);
        let cells = self.cells();
        let n = self.n_darts();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        // DFS over crossing darts.
        let mut path: Vec<usize> = Vec::with_capacity(k);
        let mut used_edges: BTreeSet<usize> = BTreeSet::new();
        let mut used_faces: BTreeSet<usize> = BTreeSet::new();
        for start in 0..cells.faces.len() {
            dfs_circuits(
                self,
                &cells,
                n,
                start,
                start,
                k,
                &mut path,
                &mut used_edges,
                &mut used_faces,
                &mut found,
            );
        }
        found.into_iter().map(|darts| DualCircuit { darts }).collect()
    }

    /// Check that a dart sequence is a closed dual walk.
    pub fn circuit_is_closed(&self, circuit: &DualCircuit) -> bool {
        let cells = self.cells();
        let k = circuit.darts.len();
        k >= 1
            && (0..k).all(|i| {
                let here = cells.face_of[circuit.darts[i]];
                let nxt = cells.face_of[self.twin[circuit.darts[(i + 1) % k]]];
                here == nxt
            })
    }

    /// A fundamental system of circuits for the dual graph: BFS spanning
    /// tree plus one circuit per chord (loops and parallel arcs included).
    /// Their classes generate the cycle space of the dual graph.
    pub fn dual_fundamental_circuits(&self) -> Vec<DualCircuit> {
        let dual = self.dual_graph();
        let cells = self.cells();
        // BFS tree over faces.
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); dual.faces]; // (arc idx, neighbor)
        for (i, a) in dual.arcs.iter().enumerate() {
            adj[a.from].push((i, a.to));
            adj[a.to].push((i, a.from));
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; dual.faces]; // (arc idx, parent face)
        let mut order = vec![usize::MAX; dual.faces];
        let mut tree_arcs = vec![false; dual.arcs.len()];
        let mut queue = std::collections::VecDeque::new();
        order[0] = 0;
        queue.push_back(0usize);
        let mut visited = 1;
        while let Some(f) = queue.pop_front() {
            for &(ai, nb) in &adj[f] {
                if order[nb] == usize::MAX {
                    order[nb] = visited;
                    visited += 1;
                    parent[nb] = Some((ai, f));
                    tree_arcs[ai] = true;
                    queue.push_back(nb);
                }
            }
        }
        // Tree path from a face up to the root, as a face list.
        let path_to_root = |mut f: usize| -> Vec<usize> {
            let mut path = vec![f];
            while let Some((_, pf)) = parent[f] {
                f = pf;
                path.push(f);
            }
            path
        };
        let mut out = Vec::new();
        for (ai, arc) in dual.arcs.iter().enumerate() {
            if tree_arcs[ai] {
                continue;
            }
            // Circuit: cross the chord from `arc.from` to `arc.to`, then
            // walk back through the tree.
            let pa = path_to_root(arc.to);
            let pb = path_to_root(arc.from);
            // Drop the common tail to get the tree path to -> from.
            let mut ia = pa.len();
            let mut ib = pb.len();
            while ia > 0 && ib > 0 && pa[ia - 1] == pb[ib - 1] {
                ia -= 1;
                ib -= 1;
            }
            let mut darts = vec![arc.canonical_dart]; // crossing into arc.to
            // Walk up from arc.to to the meeting face…
            let mut here = arc.to;
            for _ in 0..ia {
                let (pai, pf) = parent[here].unwrap();
                let c = dual.arcs[pai].canonical_dart;
                // Cross from `here` into `pf`.
                darts.push(if cells.face_of[c] == pf { c } else { self.twin[c] });
                here = pf;
            }
            // …then down to arc.from.
            for j in (0..ib).rev() {
                let child = pb[j];
                let (pai, _) = parent[child].unwrap();
                let c = dual.arcs[pai].canonical_dart;
                darts.push(if cells.face_of[c] == child { c } else { self.twin[c] });
            }
            out.push(DualCircuit { darts });
        }
        out
    }

    /// Component index per face after cutting along the edges selected by
    /// `cut`, plus the number of components.
    pub fn components_cut_along<F: Fn(usize) -> bool>(
        &self,
        cells: &Cells,
        cut: F,
    ) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(cells.faces.len());
        for (e, &c) in cells.edges.iter().enumerate() {
            if !cut(e) {
                uf.union(cells.face_of[c], cells.face_of[self.twin[c]]);
            }
        }
        let mut ids = BTreeMap::new();
        let mut comp = vec![0usize; cells.faces.len()];
        for f in 0..cells.faces.len() {
            let root = uf.find(f);
            let n = ids.len();
            comp[f] = *ids.entry(root).or_insert(n);
        }
        (comp, ids.len())
    }
}

#[allow(clippy::too_many_arguments)]
fn dfs_circuits(
    ts: &TiledSurface,
    cells: &Cells,
    n: usize,
    start: usize,
    here: usize,
    remaining: usize,
    path: &mut Vec<usize>,
    used_edges: &mut BTreeSet<usize>,
    used_faces: &mut BTreeSet<usize>,
    found: &mut BTreeSet<Vec<usize>>,
) {
    if remaining == 0 {
        if here == start {
            found.insert(canonical_circuit(ts, path));
        }
        return;
    }
    for d in 0..n {
        // Candidate crossing dart out of `here`: from f(twin d) = here into f(d).
        if cells.face_of[ts.twin(d)] != here {
            continue;
        }
        let e = cells.edge_of[d];
        if used_edges.contains(&e) {
            continue;
        }
        let to = cells.face_of[d];
        if to != start && (used_faces.contains(&to) || remaining == 1) {
            continue;
        }
        if to == start && remaining > 1 {
            continue;
        }
        used_edges.insert(e);
        used_faces.insert(to);
        path.push(d);
        dfs_circuits(ts, cells, n, start, to, remaining - 1, path, used_edges, used_faces, found);
        path.pop();
        used_faces.remove(&to);
        used_edges.remove(&e);
    }
}

/// Canonical representative of a circuit up to rotation and reversal:
/// the lexicographically smallest dart sequence.
fn canonical_circuit(ts: &TiledSurface, darts: &[usize]) -> Vec<usize> {
    let k = darts.len();
    let mut best: Option<Vec<usize>> = None;
    let fwd = darts.to_vec();
    let mut rev: Vec<usize> = darts.iter().rev().map(|&d| ts.twin(d)).collect();
    // Reversal: crossing the same edges backwards; rotate so the sequence
    // stays aligned (the reverse of steps 1..k is twin(d_k), …, twin(d_1)).
    rev.rotate_left(0);
    for seq in [fwd, rev] {
        for r in 0..k {
            let mut cand = seq.clone();
            cand.rotate_left(r);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

/// Deterministic cell indexing of a valid surface.
#[derive(Clone, Debug)]
pub struct Cells {
    /// Darts of each face in `next` order, starting at the smallest dart.
    pub faces: Vec<Vec<usize>>,
    pub face_of: Vec<usize>,
    /// Canonical dart (`min(d, twin d)`) of each edge, ascending.
    pub edges: Vec<usize>,
    pub edge_of: Vec<usize>,
    /// Rotation orbit of each vertex, starting at the smallest dart.
    pub vertices: Vec<Vec<usize>>,
    /// Vertex of the *source* of each dart.
    pub vertex_of: Vec<usize>,
}

/// Result of [`TiledSurface::validate`].
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub valid: bool,
    pub errors: Vec<String>,
    pub p: usize,
    pub darts: usize,
    pub faces: usize,
    pub edges: usize,
    pub vertices: usize,
    pub euler: i64,
    pub genus: Option<i64>,
}

/// An oriented closed geodesic: a `geo_next` orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geodesic {
    pub id: usize,
    pub darts: Vec<usize>,
}

impl Geodesic {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

/// The type of a barycentric edge: face->edge, edge->vertex, face->vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BKind {
    FE,
    EV,
    FV,
}

impl BKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BKind::FE => "FE",
            BKind::EV => "EV",
            BKind::FV => "FV",
        }
    }
}

impl std::str::FromStr for BKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "FE" => Ok(BKind::FE),
            "EV" => Ok(BKind::EV),
            "FV" => Ok(BKind::FV),
            other => Err(format!("unknown barycentric edge kind {:?}", other)),
        }
    }
}

/// An edge of the barycentric subdivision, identified by its kind and its
/// corner dart; `source` and `target` are cell indices of the appropriate
/// dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BarycentricEdge {
    pub kind: BKind,
    pub source: usize,
    pub target: usize,
    pub corner: usize,
}

/// One corner relation `c = a ∘ b` with `a = EV(d)`, `b = FE(d)`,
/// `c = FV(d)`.
#[derive(Clone, Copy, Debug)]
pub struct CornerRelation {
    pub corner: usize,
    pub a: BarycentricEdge,
    pub b: BarycentricEdge,
    pub c: BarycentricEdge,
}

/// The barycentric subdivision: all `3 n_darts` typed edges plus the
/// corner composition table.
#[derive(Clone, Debug)]
pub struct Barycentric {
    pub edges: Vec<BarycentricEdge>,
    pub corners: Vec<CornerRelation>,
}

/// Which side of an oriented geodesic a parallelism class runs along.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GSide {
    Left,
    Right,
}

/// The partition of the FE and EV barycentric edges into parallelism
/// classes, with the class <-> (geodesic, side) bijection.
#[derive(Clone, Debug)]
pub struct ParallelismClasses {
    pub classes: Vec<Vec<BarycentricEdge>>,
    pub class_of: BTreeMap<(BKind, usize), usize>,
    /// `labels[i]` identifies class `i` as a side of a geodesic.
    pub labels: Vec<(usize, GSide)>,
}

impl ParallelismClasses {
    pub fn count(&self) -> usize {
        self.classes.len()
    }
}

/// The dual multigraph of the tessellation.
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub faces: usize,
    pub arcs: Vec<DualArc>,
}

/// One dual arc per edge; `from`/`to` follow the crossing of the
/// canonical dart.
#[derive(Clone, Copy, Debug)]
pub struct DualArc {
    pub edge: usize,
    pub canonical_dart: usize,
    pub from: usize,
    pub to: usize,
}

/// A closed walk in the dual graph, as crossing darts: step `i` crosses
/// edge `e(d_i)` from the face of `twin(d_i)` into the face of `d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCircuit {
    pub darts: Vec<usize>,
}

impl DualCircuit {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

/// Minimal union-find with path halving and union by size.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn component_count(&mut self) -> usize {
        let n = self.parent.len();
        (0..n).filter(|&x| self.find(x) == x).count()
    }
}
