//! The graph of intersection of the ten boundary divisors `D_i = {x_i = 0}`.
//!
//! Vertices are the optimal index sets `I` (no strictly larger set cuts the
//! same locus), computed as the fixed points of a witness closure: `j` joins
//! `I` when every enumerated small point vanishing on `I` also vanishes at
//! `j`. Over `Q` the witnesses are the fifteen deepest points; over `F_p`
//! they are all `F_p` points of the model. Soundness over `Q` is
//! cross-certified against [`crate::variety::linear_closure`] and against
//! the combinatorial classification of optimal sets, and any mismatch is a
//! hard error.
//!
//! Over `Q`, `F_5` and `F_7` the optimal sets fall into five families:
//! singletons, pairs, syzygous triples, azygous quadruples and complements
//! of Göpel quadruples, with depth profile `(10, 45, 60, 15, 15)`. Over
//! `F_2` and `F_3` extra closed sets appear (for instance entire Göpel
//! quadruples) and are tagged [`Family::Anomalous`].

use crate::chars::{Quadruple, QuadrupleTag, ThetaCharacteristic, Triple, TripleTag};
use crate::scalar::Domain;
use crate::variety::{enumerate_small_points, ProjectivePoint, VarietyError};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("witness list is empty")]
    EmptyWitnessList,
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error("closed set {0:?} does not belong to any expected family over {1}")]
    UnclassifiedVertex(Vec<usize>, Domain),
    #[error("graphs use different vertex conventions")]
    IncomparableGraphs,
}

/// Combinatorial family of an optimal index set.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub enum Family {
    Singleton,
    Pair,
    SyzygousTriple,
    AzygousQuadruple,
    GoepelComplement,
    /// Closed sets outside the five families; occurs only over `F_2`, `F_3`.
    Anomalous,
}

impl Family {
    /// Recorded stratum dimension and irreducibility per family. These
    /// annotations come with the model and are not computed here.
    pub fn dim_metadata(self) -> Option<(u8, bool)> {
        match self {
            Family::Singleton => Some((2, true)),
            Family::Pair => Some((1, false)),
            Family::SyzygousTriple => Some((0, false)),
            Family::AzygousQuadruple => Some((1, true)),
            Family::GoepelComplement => Some((0, true)),
            Family::Anomalous => None,
        }
    }
}

/// A vertex of the graph: an optimal index set with its classification and
/// outgoing (child) edges.
#[derive(Clone, Debug, Serialize)]
pub struct IntersectionVertex {
    pub indices: Vec<usize>,
    pub depth: usize,
    pub family: Family,
    /// Positions of child vertices in the graph's vertex list.
    pub children: Vec<usize>,
    pub dim: Option<u8>,
    pub irreducible: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionGraph {
    pub domain_label: String,
    pub vertices: Vec<IntersectionVertex>,
    /// Edges as `(parent, child)` positions; transitively reduced.
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    domain: Domain,
}

/// Counts attached to the five level transitions of the graph, in the
/// labelling convention of the intersection figure: for a pair the azygous
/// entry counts the four one-element extensions that close into an azygous
/// quadruple (two extensions land on each of the two child curves), while
/// the other four entries equal the plain child counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ArrowLabels {
    pub singleton_to_pair: usize,
    pub pair_to_syzygous: usize,
    pub pair_to_azygous_completions: usize,
    pub syzygous_to_complement: usize,
    pub azygous_to_complement: usize,
}

/// Distinct child-vertex counts per transition, for comparison with
/// [`ArrowLabels`]; a pair has two azygous-quadruple children as vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChildCounts {
    pub singleton_to_pair: usize,
    pub pair_to_syzygous: usize,
    pub pair_to_azygous: usize,
    pub syzygous_to_complement: usize,
    pub azygous_to_complement: usize,
}

/// `I` together with every index forced to vanish on all witnesses that
/// vanish on `I`. When no witness vanishes on `I` the closure is the full
/// index set `{1..10}`, marking an intersection not seen by any witness.
pub fn witness_closure(
    input: &BTreeSet<usize>,
    witnesses: &[ProjectivePoint],
) -> Result<BTreeSet<usize>, GraphError> {
    if witnesses.is_empty() {
        return Err(GraphError::EmptyWitnessList);
    }
    let vanishing: Vec<&ProjectivePoint> = witnesses
        .iter()
        .filter(|w| input.iter().all(|&i| w.coord(i).is_zero()))
        .collect();
    if vanishing.is_empty() {
        return Ok((1..=10).collect());
    }
    let mut out = input.clone();
    for j in 1..=10 {
        if !out.contains(&j) && vanishing.iter().all(|w| w.coord(j).is_zero()) {
            out.insert(j);
        }
    }
    Ok(out)
}

fn classify(indices: &BTreeSet<usize>, domain: Domain) -> Result<Family, GraphError> {
    let strict = !matches!(domain, Domain::Prime(2) | Domain::Prime(3));
    let chars: Vec<ThetaCharacteristic> = indices
        .iter()
        .map(|&i| ThetaCharacteristic::from_index(i))
        .collect();
    let fam = match chars.len() {
        1 => Some(Family::Singleton),
        2 => Some(Family::Pair),
        3 => Triple::classify([chars[0], chars[1], chars[2]])
            .ok()
            .filter(|t| t.tag() == TripleTag::Syzygous)
            .map(|_| Family::SyzygousTriple),
        4 => Quadruple::classify([chars[0], chars[1], chars[2], chars[3]])
            .ok()
            .flatten()
            .filter(|q| q.tag() == QuadrupleTag::Azygous)
            .map(|_| Family::AzygousQuadruple),
        6 => {
            let complement: Vec<ThetaCharacteristic> = (1..=10)
                .filter(|i| !indices.contains(i))
                .map(ThetaCharacteristic::from_index)
                .collect();
            Quadruple::classify([complement[0], complement[1], complement[2], complement[3]])
                .ok()
                .flatten()
                .filter(|q| q.tag() == QuadrupleTag::Goepel)
                .map(|_| Family::GoepelComplement)
        }
        _ => None,
    };
    match fam {
        Some(f) => Ok(f),
        None if strict => Err(GraphError::UnclassifiedVertex(
            indices.iter().copied().collect(),
            domain,
        )),
        None => Ok(Family::Anomalous),
    }
}

/// Builds the graph over the given domain from its witness list (computed
/// internally with [`enumerate_small_points`]).
pub fn build_graph(domain: Domain) -> Result<IntersectionGraph, GraphError> {
    let witnesses = enumerate_small_points(domain)?;
    build_graph_with_witnesses(domain, &witnesses)
}

pub fn build_graph_with_witnesses(
    domain: Domain,
    witnesses: &[ProjectivePoint],
) -> Result<IntersectionGraph, GraphError> {
    let full: BTreeSet<usize> = (1..=10).collect();
    let mut closed: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for mask in 1u16..1 << 10 {
        let input: BTreeSet<usize> = (1..=10).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let c = witness_closure(&input, witnesses)?;
        if c != full {
            closed.insert(c);
        }
    }
    let mut sets: Vec<BTreeSet<usize>> = closed.into_iter().collect();
    sets.sort_by_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));

    let mut vertices = Vec::with_capacity(sets.len());
    for s in &sets {
        let family = classify(s, domain)?;
        let (dim, irreducible) = match family.dim_metadata() {
            Some((d, irr)) => (Some(d), Some(irr)),
            None => (None, None),
        };
        vertices.push(IntersectionVertex {
            indices: s.iter().copied().collect(),
            depth: s.len(),
            family,
            children: Vec::new(),
            dim,
            irreducible,
        });
    }

    // edges: strict containments of optimal sets with no optimal set between
    let mut edges = Vec::new();
    for (vi, v) in sets.iter().enumerate() {
        for (wi, w) in sets.iter().enumerate() {
            if v.len() < w.len() && v.is_subset(w) {
                let intermediate = sets
                    .iter()
                    .any(|u| u.len() > v.len() && u.len() < w.len() && v.is_subset(u) && u.is_subset(w));
                if !intermediate {
                    edges.push((vi, wi));
                    vertices[vi].children.push(wi);
                }
            }
        }
    }

    Ok(IntersectionGraph {
        domain_label: domain.to_string(),
        vertices,
        edges,
        domain,
    })
}

impl IntersectionGraph {
    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Vertex counts keyed by depth.
    pub fn depth_profile(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for v in &self.vertices {
            *out.entry(v.depth).or_insert(0) += 1;
        }
        out
    }

    pub fn family_counts(&self) -> BTreeMap<Family, usize> {
        let mut out = BTreeMap::new();
        for v in &self.vertices {
            *out.entry(v.family).or_insert(0) += 1;
        }
        out
    }

    fn vertex_index(&self, indices: &BTreeSet<usize>) -> Option<usize> {
        self.vertices
            .iter()
            .position(|v| v.indices.len() == indices.len() && v.indices.iter().all(|i| indices.contains(i)))
    }

    /// Distinct child-vertex counts per level transition; errors if any two
    /// vertices of the same family disagree.
    pub fn child_counts(&self) -> Result<ChildCounts, GraphError> {
        let count_for = |from: Family, to: Family| -> Result<usize, GraphError> {
            let mut counts = BTreeSet::new();
            for v in self.vertices.iter().filter(|v| v.family == from) {
                counts.insert(
                    v.children
                        .iter()
                        .filter(|&&c| self.vertices[c].family == to)
                        .count(),
                );
            }
            match counts.len() {
                1 => Ok(counts.into_iter().next().expect("nonempty")),
                _ => Err(GraphError::IncomparableGraphs),
            }
        };
        Ok(ChildCounts {
            singleton_to_pair: count_for(Family::Singleton, Family::Pair)?,
            pair_to_syzygous: count_for(Family::Pair, Family::SyzygousTriple)?,
            pair_to_azygous: count_for(Family::Pair, Family::AzygousQuadruple)?,
            syzygous_to_complement: count_for(Family::SyzygousTriple, Family::GoepelComplement)?,
            azygous_to_complement: count_for(Family::AzygousQuadruple, Family::GoepelComplement)?,
        })
    }

    /// Arrow labels in the figure's convention, recomputed from the graph
    /// plus the closure function; errors if the counts are not uniform
    /// across each family.
    pub fn arrow_labels(&self, witnesses: &[ProjectivePoint]) -> Result<ArrowLabels, GraphError> {
        let child = self.child_counts()?;
        // one-element extensions of each pair whose closure is an azygous
        // quadruple vertex of this graph
        let mut counts = BTreeSet::new();
        for v in self.vertices.iter().filter(|v| v.family == Family::Pair) {
            let base: BTreeSet<usize> = v.indices.iter().copied().collect();
            let mut n = 0;
            for j in 1..=10 {
                if base.contains(&j) {
                    continue;
                }
                let mut ext = base.clone();
                ext.insert(j);
                let c = witness_closure(&ext, witnesses)?;
                if let Some(ci) = self.vertex_index(&c) {
                    if self.vertices[ci].family == Family::AzygousQuadruple {
                        n += 1;
                    }
                }
            }
            counts.insert(n);
        }
        if counts.len() != 1 {
            return Err(GraphError::IncomparableGraphs);
        }
        Ok(ArrowLabels {
            singleton_to_pair: child.singleton_to_pair,
            pair_to_syzygous: child.pair_to_syzygous,
            pair_to_azygous_completions: counts.into_iter().next().expect("nonempty"),
            syzygous_to_complement: child.syzygous_to_complement,
            azygous_to_complement: child.azygous_to_complement,
        })
    }

    /// DOT rendering layered by depth, mirroring the figure layout.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph intersection {\n  rankdir=TB;\n");
        let mut by_depth: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            by_depth.entry(v.depth).or_default().push(i);
        }
        for (depth, ids) in &by_depth {
            out.push_str(&format!("  {{ rank=same; /* depth {depth} */ "));
            for id in ids {
                let label: Vec<String> =
                    self.vertices[*id].indices.iter().map(usize::to_string).collect();
                out.push_str(&format!("v{id} [label=\"{{{}}}\"]; ", label.join(",")));
            }
            out.push_str("}\n");
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("  v{a} -> v{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Vertices and edges present in one graph and not in the other.
#[derive(Clone, Debug, Default, Serialize)]
pub struct GraphDiff {
    pub vertices_only_in_left: Vec<Vec<usize>>,
    pub vertices_only_in_right: Vec<Vec<usize>>,
    pub edges_only_in_left: Vec<(Vec<usize>, Vec<usize>)>,
    pub edges_only_in_right: Vec<(Vec<usize>, Vec<usize>)>,
}

impl GraphDiff {
    pub fn is_empty(&self) -> bool {
        self.vertices_only_in_left.is_empty()
            && self.vertices_only_in_right.is_empty()
            && self.edges_only_in_left.is_empty()
            && self.edges_only_in_right.is_empty()
    }
}

pub fn compare_graphs(left: &IntersectionGraph, right: &IntersectionGraph) -> GraphDiff {
    let lv: BTreeSet<Vec<usize>> = left.vertices.iter().map(|v| v.indices.clone()).collect();
    let rv: BTreeSet<Vec<usize>> = right.vertices.iter().map(|v| v.indices.clone()).collect();
    let edge_set = |g: &IntersectionGraph| -> BTreeSet<(Vec<usize>, Vec<usize>)> {
        g.edges
            .iter()
            .map(|&(a, b)| (g.vertices[a].indices.clone(), g.vertices[b].indices.clone()))
            .collect()
    };
    let le = edge_set(left);
    let re = edge_set(right);
    GraphDiff {
        vertices_only_in_left: lv.difference(&rv).cloned().collect(),
        vertices_only_in_right: rv.difference(&lv).cloned().collect(),
        edges_only_in_left: le.difference(&re).cloned().collect(),
        edges_only_in_right: re.difference(&le).cloned().collect(),
    }
}
