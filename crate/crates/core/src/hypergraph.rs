//! Hypergraphs with the degree and neighborhood statistics used throughout
//! the crate, plus the two doubling transforms (disjoint copy and mirror
//! closure under a pairing).
//!
//! Vertices are dense indices `0..num_vertices()` with a stable string name
//! per vertex. Edges are stored sorted in a CSR layout so that the large
//! tree-derived boards (millions of vertices) stay compact.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    names: Vec<String>,
    offsets: Vec<usize>,
    members: Vec<u32>,
    allow_duplicates: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeStats {
    pub degrees: Vec<usize>,
    pub max: usize,
    /// Lowest-index vertex attaining the maximum, if any vertex exists.
    pub argmax: Option<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeighborhoodStats {
    pub sizes: Vec<usize>,
    pub max: usize,
    pub argmax: Option<usize>,
}

impl Hypergraph {
    /// Builds a hypergraph from vertex names and index-based edges.
    /// Duplicate edges are rejected.
    pub fn new(names: Vec<String>, edges: Vec<Vec<VertexId>>) -> Result<Self> {
        Self::build(names, edges, false)
    }

    /// As [`Hypergraph::new`] but admits repeated edges; each copy is a
    /// separate edge for every statistic.
    pub fn new_multi(names: Vec<String>, edges: Vec<Vec<VertexId>>) -> Result<Self> {
        Self::build(names, edges, true)
    }

    fn build(names: Vec<String>, edges: Vec<Vec<VertexId>>, allow_duplicates: bool) -> Result<Self> {
        let mut seen_names = HashSet::with_capacity(names.len());
        for name in &names {
            if !seen_names.insert(name.as_str()) {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        drop(seen_names);
        let mut offsets = Vec::with_capacity(edges.len() + 1);
        offsets.push(0);
        let mut members = Vec::with_capacity(edges.iter().map(Vec::len).sum());
        for (i, mut edge) in edges.into_iter().enumerate() {
            if edge.is_empty() {
                return Err(Error::EmptyEdge(i));
            }
            edge.sort_unstable();
            for w in edge.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::RepeatedVertexInEdge {
                        edge: i,
                        vertex: names[w[0]].clone(),
                    });
                }
            }
            if let Some(&v) = edge.iter().find(|&&v| v >= names.len()) {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
            members.extend(edge.iter().map(|&v| v as u32));
            offsets.push(members.len());
        }
        let h = Hypergraph {
            names,
            offsets,
            members,
            allow_duplicates,
        };
        if !allow_duplicates {
            let mut seen: HashSet<&[u32]> = HashSet::with_capacity(h.num_edges());
            for i in 0..h.num_edges() {
                if !seen.insert(h.edge_raw(i)) {
                    return Err(Error::DuplicateEdge(i));
                }
            }
        }
        Ok(h)
    }

    /// Builds a hypergraph from named vertices and named edges.
    pub fn from_named(vertices: Vec<String>, edges: &[Vec<String>], allow_duplicates: bool) -> Result<Self> {
        let index: HashMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut idx_edges = Vec::with_capacity(edges.len());
        for edge in edges {
            let mut e = Vec::with_capacity(edge.len());
            for v in edge {
                e.push(*index.get(v.as_str()).ok_or_else(|| Error::UnknownVertex(v.clone()))?);
            }
            idx_edges.push(e);
        }
        drop(index);
        Self::build(vertices, idx_edges, allow_duplicates)
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn allows_duplicates(&self) -> bool {
        self.allow_duplicates
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Linear scan; build a map yourself for repeated lookups.
    pub fn index_of(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name_index(&self) -> HashMap<&str, VertexId> {
        self.names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()
    }

    fn edge_raw(&self, i: usize) -> &[u32] {
        &self.members[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Vertices of edge `i`, ascending.
    pub fn edge(&self, i: usize) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        self.edge_raw(i).iter().map(|&v| v as usize)
    }

    pub fn edge_vec(&self, i: usize) -> Vec<VertexId> {
        self.edge(i).collect()
    }

    pub fn edge_len(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn edges(&self) -> impl Iterator<Item = Vec<VertexId>> + '_ {
        (0..self.num_edges()).map(|i| self.edge_vec(i))
    }

    /// Edge indices containing each vertex.
    pub fn incidence(&self) -> Vec<Vec<u32>> {
        let mut inc = vec![Vec::new(); self.num_vertices()];
        for i in 0..self.num_edges() {
            for &v in self.edge_raw(i) {
                inc[v as usize].push(i as u32);
            }
        }
        inc
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let mut degrees = vec![0usize; self.num_vertices()];
        for &v in &self.members {
            degrees[v as usize] += 1;
        }
        let (argmax, max) = argmax(&degrees);
        DegreeStats { degrees, max, argmax }
    }

    pub fn max_degree(&self) -> usize {
        self.degree_stats().max
    }

    /// `|N(e)|` for every edge: the number of other edges meeting it.
    pub fn neighborhood_stats(&self) -> NeighborhoodStats {
        let inc = self.incidence();
        let mut stamp = vec![u32::MAX; self.num_edges()];
        let mut sizes = Vec::with_capacity(self.num_edges());
        for i in 0..self.num_edges() {
            let mut count = 0usize;
            stamp[i] = i as u32;
            for &v in self.edge_raw(i) {
                for &f in &inc[v as usize] {
                    if stamp[f as usize] != i as u32 {
                        stamp[f as usize] = i as u32;
                        count += 1;
                    }
                }
            }
            sizes.push(count);
        }
        let (argmax, max) = argmax(&sizes);
        NeighborhoodStats { sizes, max, argmax }
    }

    pub fn is_uniform(&self, n: usize) -> bool {
        (0..self.num_edges()).all(|i| self.edge_len(i) == n)
    }

    /// The common edge size, if all edges have the same size and there is at least one edge.
    pub fn uniformity(&self) -> Option<usize> {
        let first = (self.num_edges() > 0).then(|| self.edge_len(0))?;
        self.is_uniform(first).then_some(first)
    }

    /// `H ⊎ H'`: vertex `v` of the copy is `v + num_vertices()`, the returned
    /// vector maps each original vertex to its copy.
    pub fn disjoint_double(&self) -> (Hypergraph, Vec<VertexId>) {
        let nv = self.num_vertices();
        let mut taken: HashSet<String> = self.names.iter().cloned().collect();
        let mut names = self.names.clone();
        names.reserve(nv);
        for name in &self.names {
            let mut fresh = format!("{name}'");
            while taken.contains(&fresh) {
                fresh.push('\'');
            }
            taken.insert(fresh.clone());
            names.push(fresh);
        }
        let mut offsets = self.offsets.clone();
        let base = *offsets.last().unwrap();
        offsets.extend(self.offsets[1..].iter().map(|o| o + base));
        let mut members = self.members.clone();
        members.extend(self.members.iter().map(|&v| v + nv as u32));
        let copy_map = (nv..2 * nv).collect();
        (
            Hypergraph {
                names,
                offsets,
                members,
                allow_duplicates: self.allow_duplicates,
            },
            copy_map,
        )
    }

    /// `E ∪ { f(e) : e ∈ E }` where `f` swaps the members of each pair.
    /// Mirrored edges already present (including `f(e) = e`) are kept once.
    pub fn mirror_closure(&self, pairing: &Pairing) -> Result<Hypergraph> {
        if pairing.leftover.is_some() {
            return Err(Error::InvalidPairing(
                "mirror closure needs a pairing without leftover vertex".into(),
            ));
        }
        pairing.validate(self.num_vertices())?;
        let partner = pairing.partner_map(self.num_vertices());
        if let Some(v) = partner.iter().position(Option::is_none) {
            return Err(Error::InvalidPairing(format!(
                "vertex `{}` is not paired",
                self.names[v]
            )));
        }
        let mut edges: Vec<Vec<VertexId>> = self.edges().collect();
        let mut present: HashSet<Vec<VertexId>> = edges.iter().cloned().collect();
        for i in 0..self.num_edges() {
            let mut mirrored: Vec<VertexId> = self.edge(i).map(|v| partner[v].unwrap()).collect();
            mirrored.sort_unstable();
            if present.insert(mirrored.clone()) {
                edges.push(mirrored);
            }
        }
        Self::build(self.names.clone(), edges, self.allow_duplicates)
    }

    pub fn to_json(&self, n: Option<usize>, pairing: Option<&PairingStrategy>) -> HypergraphJson {
        HypergraphJson {
            n,
            vertices: self.names.clone(),
            edges: (0..self.num_edges())
                .map(|i| self.edge(i).map(|v| self.names[v].clone()).collect())
                .collect(),
            allow_duplicates: self.allow_duplicates.then_some(true),
            pairing: pairing.map(|p| p.to_json(self)),
        }
    }

    /// Star-expansion DOT rendering: one small point per edge joined to its vertices.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph hypergraph {\n  node [shape=circle, fontsize=10];\n");
        for (i, name) in self.names.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{}\"];", dot_escape(display_name(name)));
        }
        for e in 0..self.num_edges() {
            let _ = writeln!(out, "  e{e} [shape=point, label=\"\", xlabel=\"e{e}\"];");
            for v in self.edge(e) {
                let _ = writeln!(out, "  e{e} -- v{v};");
            }
        }
        out.push_str("}\n");
        out
    }
}

fn argmax(values: &[usize]) -> (Option<usize>, usize) {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|b| v > values[b]) {
            best = Some(i);
        }
    }
    (best, best.map_or(0, |b| values[b]))
}

pub(crate) fn display_name(name: &str) -> &str {
    if name.is_empty() {
        "root"
    } else {
        name
    }
}

pub(crate) fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Disjoint unordered pairs of vertices, plus at most one unpaired vertex.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Pairing {
    pub pairs: Vec<(VertexId, VertexId)>,
    pub leftover: Option<VertexId>,
}

impl Pairing {
    pub fn new(pairs: Vec<(VertexId, VertexId)>, leftover: Option<VertexId>) -> Self {
        Pairing { pairs, leftover }
    }

    /// Pairs are disjoint, no vertex is paired with itself, the leftover is
    /// not paired, and every id is below `num_vertices`.
    pub fn validate(&self, num_vertices: usize) -> Result<()> {
        let mut used = vec![false; num_vertices];
        let mut mark = |v: VertexId| -> Result<()> {
            if v >= num_vertices {
                return Err(Error::InvalidPairing(format!("vertex #{v} out of range")));
            }
            if std::mem::replace(&mut used[v], true) {
                return Err(Error::InvalidPairing(format!("vertex #{v} used twice")));
            }
            Ok(())
        };
        for &(a, b) in &self.pairs {
            if a == b {
                return Err(Error::InvalidPairing(format!("vertex #{a} paired with itself")));
            }
            mark(a)?;
            mark(b)?;
        }
        if let Some(l) = self.leftover {
            mark(l)?;
        }
        Ok(())
    }

    /// The involution `f`; `None` for unpaired vertices.
    pub fn partner_map(&self, num_vertices: usize) -> Vec<Option<VertexId>> {
        let mut f = vec![None; num_vertices];
        for &(a, b) in &self.pairs {
            f[a] = Some(b);
            f[b] = Some(a);
        }
        f
    }

    /// Number of vertices touched by the pairing (pairs and leftover).
    pub fn covered(&self) -> usize {
        2 * self.pairs.len() + usize::from(self.leftover.is_some())
    }
}

/// Maker's pairing strategy: an optional first move followed by a pairing of
/// the remaining vertices. Without a first move it is a pure pairing strategy
/// (Breaker starts).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PairingStrategy {
    pub first_move: Option<VertexId>,
    pub pairing: Pairing,
}

impl PairingStrategy {
    pub fn pure(pairing: Pairing) -> Self {
        PairingStrategy {
            first_move: None,
            pairing,
        }
    }

    /// Every vertex is the first move, in a pair, or the leftover, exactly once.
    pub fn validate(&self, num_vertices: usize) -> Result<()> {
        self.pairing.validate(num_vertices)?;
        let f = self.pairing.partner_map(num_vertices);
        if let Some(m) = self.first_move {
            if m >= num_vertices {
                return Err(Error::InvalidPairing(format!("first move #{m} out of range")));
            }
            if f[m].is_some() || self.pairing.leftover == Some(m) {
                return Err(Error::InvalidPairing("first move is also paired".into()));
            }
        }
        let covered = self.pairing.covered() + usize::from(self.first_move.is_some());
        if covered != num_vertices {
            return Err(Error::InvalidPairing(format!(
                "strategy covers {covered} of {num_vertices} vertices"
            )));
        }
        Ok(())
    }

    pub fn to_json(&self, h: &Hypergraph) -> PairingJson {
        PairingJson {
            first_move: self.first_move.map(|v| h.name(v).to_string()),
            pairs: self
                .pairing
                .pairs
                .iter()
                .map(|&(a, b)| [h.name(a).to_string(), h.name(b).to_string()])
                .collect(),
            leftover: self.pairing.leftover.map(|v| h.name(v).to_string()),
        }
    }

    pub fn from_json(json: &PairingJson, h: &Hypergraph) -> Result<Self> {
        let index = h.name_index();
        let look = |n: &String| index.get(n.as_str()).copied().ok_or_else(|| Error::UnknownVertex(n.clone()));
        let strategy = PairingStrategy {
            first_move: json.first_move.as_ref().map(look).transpose()?,
            pairing: Pairing {
                pairs: json
                    .pairs
                    .iter()
                    .map(|[a, b]| Ok((look(a)?, look(b)?)))
                    .collect::<Result<_>>()?,
                leftover: json.leftover.as_ref().map(look).transpose()?,
            },
        };
        strategy.validate(h.num_vertices())?;
        Ok(strategy)
    }
}

/// On-disk hypergraph format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub vertices: Vec<String>,
    pub edges: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allow_duplicates: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_move: Option<String>,
    pub pairs: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leftover: Option<String>,
}

impl HypergraphJson {
    /// Parses the hypergraph and, when present, its pairing strategy. The
    /// declared uniformity `n` is enforced.
    pub fn into_hypergraph(self) -> Result<(Hypergraph, Option<PairingStrategy>)> {
        let h = Hypergraph::from_named(self.vertices, &self.edges, self.allow_duplicates.unwrap_or(false))?;
        if let Some(n) = self.n {
            if !h.is_uniform(n) {
                return Err(Error::NotUniform(n));
            }
        }
        let p = self.pairing.as_ref().map(|p| PairingStrategy::from_json(p, &h)).transpose()?;
        Ok((h, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    fn path_pair() -> Hypergraph {
        Hypergraph::new(names(&["a", "b", "c"]), vec![vec![0, 1], vec![1, 2]]).unwrap()
    }

    #[test]
    fn degrees_of_a_path() {
        let d = path_pair().degree_stats();
        assert_eq!(d.degrees, vec![1, 2, 1]);
        assert_eq!(d.max, 2);
        assert_eq!(d.argmax, Some(1));
    }

    #[test]
    fn single_edge_has_empty_neighborhood() {
        let h = Hypergraph::new(names(&["a", "b"]), vec![vec![0, 1]]).unwrap();
        assert_eq!(h.neighborhood_stats().max, 0);
    }

    #[test]
    fn uniformity() {
        let h = Hypergraph::new(names(&["a", "b", "c", "d"]), vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        assert!(h.is_uniform(3));
        let h = Hypergraph::new(names(&["a", "b", "c"]), vec![vec![0, 1], vec![0, 1, 2]]).unwrap();
        assert!(!h.is_uniform(2));
        assert_eq!(h.uniformity(), None);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            Hypergraph::new(names(&["a", "b"]), vec![vec![0, 0]]),
            Err(Error::RepeatedVertexInEdge { .. })
        ));
        assert!(matches!(
            Hypergraph::new(names(&["a", "b"]), vec![vec![0, 1], vec![1, 0]]),
            Err(Error::DuplicateEdge(1))
        ));
        assert!(matches!(Hypergraph::new(names(&["a"]), vec![vec![]]), Err(Error::EmptyEdge(0))));
        assert!(matches!(
            Hypergraph::from_named(names(&["a"]), &[names(&["a", "z"])], false),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(
            Hypergraph::new(names(&["a", "a"]), vec![]),
            Err(Error::DuplicateVertex(_))
        ));
    }

    #[test]
    fn duplicates_count_separately_when_admitted() {
        let h = Hypergraph::new_multi(names(&["a", "b"]), vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(h.neighborhood_stats().sizes, vec![1, 1]);
        assert_eq!(h.max_degree(), 2);
    }

    #[test]
    fn doubling_one_edge() {
        let h = Hypergraph::new(names(&["a", "b"]), vec![vec![0, 1]]).unwrap();
        let (d, map) = h.disjoint_double();
        assert_eq!(d.num_vertices(), 4);
        assert_eq!(d.num_edges(), 2);
        assert_eq!(map, vec![2, 3]);
        assert_eq!(d.name(2), "a'");
        assert_eq!(d.edge_vec(1), vec![2, 3]);
    }

    #[test]
    fn doubling_avoids_name_clashes() {
        let h = Hypergraph::new(names(&["a", "a'"]), vec![vec![0, 1]]).unwrap();
        let (d, _) = h.disjoint_double();
        assert_eq!(d.name(2), "a''");
        assert_eq!(d.name(3), "a'''");
        assert_eq!(d.names().iter().collect::<HashSet<_>>().len(), 4);
    }

    #[test]
    fn mirror_adds_partner_edge() {
        let h = Hypergraph::new(names(&["a", "b", "c", "d"]), vec![vec![0, 1]]).unwrap();
        let p = Pairing::new(vec![(0, 2), (1, 3)], None);
        let m = h.mirror_closure(&p).unwrap();
        assert_eq!(m.edges().collect::<Vec<_>>(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn mirror_of_self_paired_edge_is_kept_once() {
        let h = Hypergraph::new(names(&["a", "b"]), vec![vec![0, 1]]).unwrap();
        let p = Pairing::new(vec![(0, 1)], None);
        let m = h.mirror_closure(&p).unwrap();
        assert_eq!(m.num_edges(), 1);
    }

    #[test]
    fn mirror_rejects_leftover_and_partial_pairings() {
        let h = Hypergraph::new(names(&["a", "b", "c"]), vec![vec![0, 1]]).unwrap();
        assert!(h.mirror_closure(&Pairing::new(vec![(0, 1)], Some(2))).is_err());
        assert!(h.mirror_closure(&Pairing::new(vec![(0, 1)], None)).is_err());
        assert!(h.mirror_closure(&Pairing::new(vec![(0, 1), (1, 2)], None)).is_err());
    }

    #[test]
    fn json_round_trip_with_pairing() {
        let h = path_pair();
        let s = PairingStrategy {
            first_move: Some(1),
            pairing: Pairing::new(vec![(0, 2)], None),
        };
        let json = serde_json::to_string(&h.to_json(Some(2), Some(&s))).unwrap();
        let back: HypergraphJson = serde_json::from_str(&json).unwrap();
        let (h2, s2) = back.into_hypergraph().unwrap();
        assert_eq!(h2, h);
        assert_eq!(s2, Some(s));
    }

    #[test]
    fn json_enforces_declared_uniformity() {
        let j = HypergraphJson {
            n: Some(3),
            vertices: names(&["a", "b"]),
            edges: vec![names(&["a", "b"])],
            allow_duplicates: None,
            pairing: None,
        };
        assert_eq!(j.into_hypergraph().unwrap_err(), Error::NotUniform(3));
    }

    #[test]
    fn dot_mentions_every_incidence() {
        let dot = path_pair().to_dot();
        assert_eq!(dot.matches(" -- ").count(), 4);
        assert!(dot.starts_with("graph hypergraph {"));
    }
}
