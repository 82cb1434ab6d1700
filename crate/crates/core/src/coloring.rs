//! Proper, halving and pairing-respecting 2-colorings, found by exact
//! backtracking search, and the local-lemma style degree predicates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Pairing, PairingStrategy, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "R")]
    Red,
    #[serde(rename = "B")]
    Blue,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoColoring {
    pub colors: Vec<Color>,
}

impl TwoColoring {
    pub fn count(&self, c: Color) -> usize {
        self.colors.iter().filter(|&&x| x == c).count()
    }

    /// `{"vertex": "R" | "B", …}` keyed by vertex name.
    pub fn to_json(&self, h: &Hypergraph) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .colors
            .iter()
            .enumerate()
            .map(|(v, c)| (h.name(v).to_string(), serde_json::to_value(c).expect("color serializes")))
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn from_json(value: &serde_json::Value, h: &Hypergraph) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Json("coloring must be an object".into()))?;
        let mut colors = Vec::with_capacity(h.num_vertices());
        for name in h.names() {
            let c = obj
                .get(name)
                .ok_or_else(|| Error::UnknownVertex(format!("{name} (no color)")))?;
            colors.push(serde_json::from_value(c.clone())?);
        }
        Ok(TwoColoring { colors })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringReport {
    pub proper: bool,
    pub monochromatic_edges: Vec<usize>,
    pub red: usize,
    pub blue: usize,
    /// `|red − blue| ≤ 1`.
    pub halving: bool,
    /// `None` when no pairing was given.
    pub pairing_respected: Option<bool>,
}

/// Direct edge scan of a coloring.
pub fn check_coloring(h: &Hypergraph, c: &TwoColoring, pairing: Option<&Pairing>) -> ColoringReport {
    let monochromatic_edges: Vec<usize> = (0..h.num_edges())
        .filter(|&e| {
            let mut it = h.edge(e).map(|v| c.colors[v]);
            let first = it.next();
            first.is_some() && it.all(|x| Some(x) == first)
        })
        .collect();
    let red = c.count(Color::Red);
    let blue = c.count(Color::Blue);
    ColoringReport {
        proper: monochromatic_edges.is_empty(),
        monochromatic_edges,
        red,
        blue,
        halving: red.abs_diff(blue) <= 1,
        pairing_respected: pairing.map(|p| p.pairs.iter().all(|&(a, b)| c.colors[a] != c.colors[b])),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringLimits {
    pub max_vertices: usize,
    /// Search nodes before giving up with an error.
    pub max_nodes: u64,
}

impl Default for ColoringLimits {
    fn default() -> Self {
        ColoringLimits {
            max_vertices: 4096,
            max_nodes: 50_000_000,
        }
    }
}

/// Searches for a coloring with no monochromatic edge; with a pairing,
/// paired vertices get different colors; with `halving`, the color classes
/// differ by at most one. `Ok(None)` means none exists.
pub fn find_proper_2coloring(
    h: &Hypergraph,
    pairing: Option<&Pairing>,
    halving: bool,
    limits: ColoringLimits,
) -> Result<Option<TwoColoring>> {
    let nv = h.num_vertices();
    if nv > limits.max_vertices {
        return Err(Error::LimitExceeded {
            what: "coloring vertices".into(),
            needed: nv.to_string(),
            limit: limits.max_vertices.to_string(),
        });
    }
    let partner = match pairing {
        Some(p) => {
            if p.leftover.is_some() || p.covered() != nv {
                return Err(Error::InvalidPairing("coloring pairing must cover every vertex".into()));
            }
            p.validate(nv)?;
            p.partner_map(nv)
        }
        None => vec![None; nv],
    };
    let mut s = Search {
        h,
        inc: h.incidence(),
        partner,
        color: vec![None; nv],
        count: vec![[0u32; 2]; h.num_edges()],
        used: [0, 0],
        cap: if halving { nv.div_ceil(2) } else { nv },
        nodes: 0,
        max_nodes: limits.max_nodes,
        trail: Vec::new(),
    };
    if nv == 0 {
        return Ok(Some(TwoColoring { colors: Vec::new() }));
    }
    // Swapping colors maps solutions to solutions: fix vertex 0 red.
    let found = s.assign(0, Color::Red) && s.search()?;
    if !found {
        return Ok(None);
    }
    let coloring = TwoColoring {
        colors: s.color.iter().map(|c| c.expect("all assigned")).collect(),
    };
    let report = check_coloring(h, &coloring, pairing);
    if !report.proper || report.pairing_respected == Some(false) || (halving && !report.halving) {
        return Err(Error::Precondition("coloring search returned an invalid coloring".into()));
    }
    Ok(Some(coloring))
}

struct Search<'a> {
    h: &'a Hypergraph,
    inc: Vec<Vec<u32>>,
    partner: Vec<Option<VertexId>>,
    color: Vec<Option<Color>>,
    /// Per edge: red and blue vertices so far.
    count: Vec<[u32; 2]>,
    used: [usize; 2],
    cap: usize,
    nodes: u64,
    max_nodes: u64,
    trail: Vec<VertexId>,
}

fn idx(c: Color) -> usize {
    match c {
        Color::Red => 0,
        Color::Blue => 1,
    }
}

impl Search<'_> {
    /// Colors `v` (and its partner); false if an edge turns monochromatic
    /// or a class exceeds its cap. Partial work stays on the trail.
    fn assign(&mut self, v: VertexId, c: Color) -> bool {
        match self.color[v] {
            Some(x) => return x == c,
            None => {}
        }
        self.color[v] = Some(c);
        self.trail.push(v);
        self.used[idx(c)] += 1;
        let mut ok = self.used[idx(c)] <= self.cap;
        for &e in &self.inc[v] {
            let e = e as usize;
            self.count[e][idx(c)] += 1;
            if self.count[e][idx(c)] as usize == self.h.edge_len(e) {
                ok = false;
            }
        }
        if !ok {
            return false;
        }
        match self.partner[v] {
            Some(p) => self.assign(p, c.flip()),
            None => true,
        }
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let v = self.trail.pop().unwrap();
            let c = self.color[v].take().unwrap();
            self.used[idx(c)] -= 1;
            for &e in &self.inc[v] {
                self.count[e as usize][idx(c)] -= 1;
            }
        }
    }

    /// The most constrained edge: one color only so far, fewest free
    /// vertices. Branch on its lowest free vertex, opposite color first.
    fn pick(&self) -> Option<(VertexId, Color)> {
        let mut best: Option<(usize, usize, Color)> = None;
        for e in 0..self.h.num_edges() {
            let [r, b] = self.count[e];
            if (r > 0) == (b > 0) {
                continue;
            }
            let free = self.h.edge_len(e) - (r + b) as usize;
            if best.is_none_or(|(f, _, _)| free < f) {
                let c = if r > 0 { Color::Blue } else { Color::Red };
                best = Some((free, e, c));
            }
        }
        if let Some((_, e, c)) = best {
            let v = self.h.edge(e).find(|&v| self.color[v].is_none()).unwrap();
            return Some((v, c));
        }
        self.color.iter().position(Option::is_none).map(|v| (v, Color::Red))
    }

    fn search(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::LimitExceeded {
                what: "coloring search nodes".into(),
                needed: format!("> {}", self.max_nodes),
                limit: self.max_nodes.to_string(),
            });
        }
        let Some((v, c)) = self.pick() else {
            return Ok(true);
        };
        for c in [c, c.flip()] {
            let mark = self.trail.len();
            if self.assign(v, c) && self.search()? {
                return Ok(true);
            }
            self.undo_to(mark);
        }
        Ok(false)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LllReport {
    /// Uniformity; `None` for a board without edges.
    pub n: Option<usize>,
    pub max_degree: usize,
    pub max_neighborhood: usize,
    /// `2^(n−2) / (e·n)`.
    pub degree_threshold: Option<f64>,
    /// `Δ ≤ 2^(n−2)/(e·n)`: a proper halving 2-coloring exists.
    pub degree_hypothesis: bool,
    /// `2^(n−3)`.
    pub neighborhood_threshold: Option<f64>,
    pub neighborhood_hypothesis: bool,
    /// `2^(n−4) / n`.
    pub halving_neighborhood_threshold: Option<f64>,
    pub halving_neighborhood_hypothesis: bool,
}

/// The numeric hypotheses only; nothing is proved here.
pub fn lll_halving_predicate(h: &Hypergraph) -> Result<LllReport> {
    let max_degree = h.max_degree();
    let max_neighborhood = h.neighborhood_stats().max;
    if h.num_edges() == 0 {
        return Ok(LllReport {
            n: None,
            max_degree,
            max_neighborhood,
            degree_threshold: None,
            degree_hypothesis: true,
            neighborhood_threshold: None,
            neighborhood_hypothesis: true,
            halving_neighborhood_threshold: None,
            halving_neighborhood_hypothesis: true,
        });
    }
    let n = h
        .uniformity()
        .ok_or_else(|| Error::Precondition("hypergraph is not uniform".into()))?;
    let nf = n as f64;
    let deg_t = 2f64.powi(n as i32 - 2) / (std::f64::consts::E * nf);
    let nb_t = 2f64.powi(n as i32 - 3);
    let half_t = 2f64.powi(n as i32 - 4) / nf;
    Ok(LllReport {
        n: Some(n),
        max_degree,
        max_neighborhood,
        degree_threshold: Some(deg_t),
        degree_hypothesis: max_degree as f64 <= deg_t,
        neighborhood_threshold: Some(nb_t),
        neighborhood_hypothesis: max_neighborhood as f64 <= nb_t,
        halving_neighborhood_threshold: Some(half_t),
        halving_neighborhood_hypothesis: max_neighborhood as f64 <= half_t,
    })
}

/// `F′ = F ∪ { f(e) }` with `f` the pairing involution, and the pure pairing
/// strategy of `P` on it. No `P`-coloring of `F` is proper exactly when this
/// pairing strategy wins on `F′`.
#[derive(Clone, Debug)]
pub struct AppendixReduction {
    pub hypergraph: Hypergraph,
    pub strategy: PairingStrategy,
}

pub fn appendix_reduction(h: &Hypergraph, p: &Pairing) -> Result<AppendixReduction> {
    Ok(AppendixReduction {
        hypergraph: h.mirror_closure(p)?,
        strategy: PairingStrategy::pure(p.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn single_edge_colorable() {
        let h = Hypergraph::new(names(3), vec![vec![0, 1, 2]]).unwrap();
        let c = find_proper_2coloring(&h, None, false, ColoringLimits::default())
            .unwrap()
            .unwrap();
        assert!(check_coloring(&h, &c, None).proper);
        let c = find_proper_2coloring(&h, None, true, ColoringLimits::default())
            .unwrap()
            .unwrap();
        assert!(check_coloring(&h, &c, None).halving);
    }

    #[test]
    fn sign_patterns_have_no_pairing_coloring() {
        // Vertices 2i and 2i+1 paired; edges pick one member of each pair in every way.
        for k in 1..=3 {
            let edges = (0..1usize << k)
                .map(|mask| (0..k).map(|i| 2 * i + (mask >> i & 1)).collect())
                .collect();
            let h = Hypergraph::new(names(2 * k), edges).unwrap();
            let p = Pairing::new((0..k).map(|i| (2 * i, 2 * i + 1)).collect(), None);
            assert_eq!(find_proper_2coloring(&h, Some(&p), false, ColoringLimits::default()).unwrap(), None);
        }
    }

    #[test]
    fn pairing_forces_exact_halving() {
        let h = Hypergraph::new(names(6), vec![vec![0, 2, 4], vec![1, 3, 5]]).unwrap();
        let p = Pairing::new(vec![(0, 1), (2, 3), (4, 5)], None);
        let c = find_proper_2coloring(&h, Some(&p), false, ColoringLimits::default())
            .unwrap()
            .unwrap();
        let r = check_coloring(&h, &c, Some(&p));
        assert!(r.proper && r.pairing_respected == Some(true));
        assert_eq!(r.red, 3);
    }

    #[test]
    fn limits_refuse_rather_than_answer() {
        let h = Hypergraph::new(names(3), vec![vec![0, 1, 2]]).unwrap();
        let lim = ColoringLimits {
            max_vertices: 2,
            max_nodes: 10,
        };
        assert!(find_proper_2coloring(&h, None, false, lim).is_err());
    }

    #[test]
    fn lll_thresholds() {
        let edges = vec![(0..8).collect(), (8..16).collect()];
        let h = Hypergraph::new(names(16), edges).unwrap();
        let r = lll_halving_predicate(&h).unwrap();
        assert!((r.degree_threshold.unwrap() - 64.0 / (8.0 * std::f64::consts::E)).abs() < 1e-12);
        assert!(r.degree_hypothesis);
        let empty = Hypergraph::new(names(2), vec![]).unwrap();
        assert!(lll_halving_predicate(&empty).unwrap().degree_hypothesis);
    }

    #[test]
    fn appendix_single_edge() {
        let h = Hypergraph::new(names(4), vec![vec![0, 2]]).unwrap();
        let p = Pairing::new(vec![(0, 1), (2, 3)], None);
        let r = appendix_reduction(&h, &p).unwrap();
        assert_eq!(r.hypergraph.num_edges(), 2);
        assert!(find_proper_2coloring(&h, Some(&p), false, ColoringLimits::default())
            .unwrap()
            .is_some());
    }

    #[test]
    fn coloring_json_round_trip() {
        let h = Hypergraph::new(names(2), vec![vec![0, 1]]).unwrap();
        let c = TwoColoring {
            colors: vec![Color::Red, Color::Blue],
        };
        let j = c.to_json(&h);
        assert_eq!(j.to_string(), r#"{"v0":"R","v1":"B"}"#);
        assert_eq!(TwoColoring::from_json(&j, &h).unwrap(), c);
    }
}
