//! Brute-force dimer model on small Aztec diamonds: exact partition
//! functions and face statistics by enumerating every perfect matching.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::octahedron::{evolve_t, InitialData};
use crate::rings::{integer, Rational};

/// Largest size accepted by the enumerator.
pub const MAX_ENUMERATION_SIZE: usize = 6;

/// A point of `(ℤ + ½)²` stored as doubled integer coordinates (both odd).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfPoint {
    pub x2: i64,
    pub y2: i64,
}

impl HalfPoint {
    pub fn to_f64(self) -> (f64, f64) {
        (self.x2 as f64 / 2.0, self.y2 as f64 / 2.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub ends: [usize; 2],
    /// The two faces on either side, both in the closed diamond.
    pub faces: [(i64, i64); 2],
}

/// The Aztec diamond `A_{j,k,n}` of size `n - 1` centered at face `(j, k)`.
#[derive(Clone, Debug)]
pub struct AztecGraph {
    center: (i64, i64),
    n: i64,
    vertices: Vec<HalfPoint>,
    black: Vec<bool>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, usize)>>,
    closure: Vec<(i64, i64)>,
    face_edges: HashMap<(i64, i64), Vec<usize>>,
}

pub fn build_aztec(center: (i64, i64), n: i64) -> Result<AztecGraph> {
    if n <= 0 {
        return Err(Error::InvalidArgument(format!("Aztec diamond needs n >= 1, got {n}")));
    }
    let size = n - 1;
    let (j0, k0) = center;
    let mut vertices = Vec::new();
    // Relative doubled coordinates are odd with |x2| + |y2| <= 2 size.
    for x2 in (-2 * size + 1..2 * size).step_by(2) {
        for y2 in (-2 * size + 1..2 * size).step_by(2) {
            if x2.abs() + y2.abs() <= 2 * size {
                vertices.push(HalfPoint {
                    x2: 2 * j0 + x2,
                    y2: 2 * k0 + y2,
                });
            }
        }
    }
    let index: HashMap<HalfPoint, usize> = vertices.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let black = vertices
        .iter()
        .map(|p| ((p.x2 - 2 * j0 + p.y2 - 2 * k0) / 2 - size).rem_euclid(2) == 0)
        .collect();

    let mut edges = Vec::new();
    let mut adjacency = vec![Vec::new(); vertices.len()];
    for (i, &p) in vertices.iter().enumerate() {
        let right = HalfPoint { x2: p.x2 + 2, y2: p.y2 };
        let up = HalfPoint { x2: p.x2, y2: p.y2 + 2 };
        if let Some(&r) = index.get(&right) {
            let fx = (p.x2 + 1) / 2;
            edges.push(Edge {
                ends: [i, r],
                faces: [(fx, (p.y2 + 1) / 2), (fx, (p.y2 - 1) / 2)],
            });
        }
        if let Some(&u) = index.get(&up) {
            let fy = (p.y2 + 1) / 2;
            edges.push(Edge {
                ends: [i, u],
                faces: [((p.x2 + 1) / 2, fy), ((p.x2 - 1) / 2, fy)],
            });
        }
    }
    for (e, edge) in edges.iter().enumerate() {
        adjacency[edge.ends[0]].push((edge.ends[1], e));
        adjacency[edge.ends[1]].push((edge.ends[0], e));
    }

    let mut closure = Vec::new();
    for de in -(n - 1)..=(n - 1) {
        let half = n - 1 - de.abs();
        for dh in -half..=half {
            closure.push((j0 + de, k0 + dh));
        }
    }
    let mut face_edges: HashMap<(i64, i64), Vec<usize>> = closure.iter().map(|&f| (f, Vec::new())).collect();
    for (e, edge) in edges.iter().enumerate() {
        for f in edge.faces {
            face_edges.get_mut(&f).expect("edge faces lie in the closure").push(e);
        }
    }
    Ok(AztecGraph {
        center,
        n,
        vertices,
        black,
        edges,
        adjacency,
        closure,
        face_edges,
    })
}

impl AztecGraph {
    pub fn center(&self) -> (i64, i64) {
        self.center
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// `n - 1`.
    pub fn size(&self) -> usize {
        (self.n - 1) as usize
    }

    pub fn vertices(&self) -> &[HalfPoint] {
        &self.vertices
    }

    pub fn is_black(&self, v: usize) -> bool {
        self.black[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    /// Faces of the closed diamond `Ā`.
    pub fn closure(&self) -> &[(i64, i64)] {
        &self.closure
    }

    pub fn in_closure(&self, face: (i64, i64)) -> bool {
        self.face_edges.contains_key(&face)
    }

    /// Faces of the open diamond, each bounded by four edges of the graph.
    pub fn inner_faces(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let (j0, k0) = self.center;
        let limit = self.n - 2;
        self.closure
            .iter()
            .copied()
            .filter(move |&(e, h)| (e - j0).abs() + (h - k0).abs() <= limit)
    }

    pub fn edges_around(&self, face: (i64, i64)) -> &[usize] {
        self.face_edges.get(&face).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Where a set of edge weights came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightScheme {
    FromFaceData,
    TwoPeriodicFixed,
    SizeDependent,
    Custom,
}

#[derive(Clone, Debug)]
pub struct WeightedDimerInstance {
    pub graph: AztecGraph,
    pub weights: Vec<Rational>,
    pub scheme: WeightScheme,
}

/// `ν̂_e = 1 / (t_f t_f')` over the two faces adjacent to each edge.
pub fn weights_from_faces(graph: &AztecGraph, init: &InitialData) -> WeightedDimerInstance {
    let weights = graph
        .edges
        .iter()
        .map(|e| (init.t(e.faces[0].0, e.faces[0].1) * init.t(e.faces[1].0, e.faces[1].1)).recip())
        .collect();
    WeightedDimerInstance {
        graph: graph.clone(),
        weights,
        scheme: WeightScheme::FromFaceData,
    }
}

/// The face of an edge whose coordinate sum is odd.
fn odd_face(edge: &Edge) -> (i64, i64) {
    let [f, g] = edge.faces;
    if (f.0 + f.1).rem_euclid(2) == 1 {
        f
    } else {
        g
    }
}

fn scheme_weights(graph: &AztecGraph, a: &Rational, heavy: impl Fn(i64) -> bool, scheme: WeightScheme) -> WeightedDimerInstance {
    let weights = graph
        .edges
        .iter()
        .map(|e| if heavy(odd_face(e).0) { a.clone() } else { Rational::one() })
        .collect();
    WeightedDimerInstance {
        graph: graph.clone(),
        weights,
        scheme,
    }
}

/// Size-independent weights: `a` on edges whose odd face has odd `j`, else `1`.
pub fn two_periodic_fixed_weights(graph: &AztecGraph, a: &Rational) -> WeightedDimerInstance {
    scheme_weights(graph, a, |j| j.rem_euclid(2) == 1, WeightScheme::TwoPeriodicFixed)
}

/// Weights that depend on the size `N` of the diamond: `a` when the odd face
/// has even `j` and `N ≡ 1, 2 (mod 4)`, or odd `j` and `N ≡ 3, 0 (mod 4)`.
pub fn size_dependent_weights(graph: &AztecGraph, a: &Rational) -> WeightedDimerInstance {
    let odd_sizes = matches!(graph.size() % 4, 1 | 2);
    scheme_weights(
        graph,
        a,
        move |j| (j.rem_euclid(2) == 1) != odd_sizes,
        WeightScheme::SizeDependent,
    )
}

impl WeightedDimerInstance {
    /// Multiplies every edge weight at `vertex` by `factor`.
    pub fn gauge(&self, vertex: usize, factor: &Rational) -> Self {
        let mut out = self.clone();
        for &(_, e) in self.graph.neighbors(vertex) {
            out.weights[e] = &out.weights[e] * factor;
        }
        out.scheme = WeightScheme::Custom;
        out
    }

    /// Alternating product `ν_top ν_bottom / (ν_left ν_right)` around an inner face.
    pub fn face_weight(&self, face: (i64, i64)) -> Result<Rational> {
        let (e, h) = face;
        let mut horizontal = Rational::one();
        let mut vertical = Rational::one();
        let edges = self.graph.edges_around(face);
        if edges.len() != 4 {
            return Err(Error::FaceOutsideDiamond(e, h));
        }
        for &id in edges {
            let edge = &self.graph.edges[id];
            let other = if edge.faces[0] == face { edge.faces[1] } else { edge.faces[0] };
            if other.0 == e {
                horizontal *= &self.weights[id];
            } else {
                vertical *= &self.weights[id];
            }
        }
        Ok(horizontal / vertical)
    }

    pub fn face_weights(&self) -> Vec<((i64, i64), Rational)> {
        self.graph
            .inner_faces()
            .map(|f| (f, self.face_weight(f).expect("inner face")))
            .collect()
    }
}

/// Exact sums over all perfect matchings.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub partition_function: Rational,
    /// `Σ_{M ∋ e} w(M)` for every edge.
    pub edge_mass: Vec<Rational>,
    pub matchings: u64,
}

fn check_guard(size: usize) -> Result<()> {
    if size > MAX_ENUMERATION_SIZE {
        let exponent = size * (size + 1) / 2;
        let count = BigUint::one() << exponent;
        return Err(Error::EnumerationGuard {
            size,
            limit: MAX_ENUMERATION_SIZE,
            configurations: count.to_string(),
        });
    }
    Ok(())
}

/// Calls `visit(edges, weight)` for every perfect matching.
pub fn for_each_matching(instance: &WeightedDimerInstance, mut visit: impl FnMut(&[usize], &Rational)) -> Result<()> {
    check_guard(instance.graph.size())?;
    let count = instance.graph.vertices.len();
    let mut matched = vec![false; count];
    let mut chosen = Vec::with_capacity(count / 2);
    search(instance, 0, &mut matched, &mut chosen, Rational::one(), &mut visit);
    Ok(())
}

fn search(
    instance: &WeightedDimerInstance,
    start: usize,
    matched: &mut [bool],
    chosen: &mut Vec<usize>,
    weight: Rational,
    visit: &mut impl FnMut(&[usize], &Rational),
) {
    let Some(v) = (start..matched.len()).find(|&i| !matched[i]) else {
        visit(chosen, &weight);
        return;
    };
    matched[v] = true;
    for &(u, e) in instance.graph.neighbors(v) {
        if matched[u] {
            continue;
        }
        matched[u] = true;
        chosen.push(e);
        search(instance, v + 1, matched, chosen, &weight * &instance.weights[e], visit);
        chosen.pop();
        matched[u] = false;
    }
    matched[v] = false;
}

pub fn enumerate(instance: &WeightedDimerInstance) -> Result<Enumeration> {
    let mut partition_function = Rational::zero();
    let mut edge_mass = vec![Rational::zero(); instance.graph.edges.len()];
    let mut matchings = 0u64;
    for_each_matching(instance, |edges, w| {
        partition_function += w;
        for &e in edges {
            edge_mass[e] += w;
        }
        matchings += 1;
    })?;
    Ok(Enumeration {
        partition_function,
        edge_mass,
        matchings,
    })
}

pub fn enumerate_z(instance: &WeightedDimerInstance) -> Result<Rational> {
    Ok(enumerate(instance)?.partition_function)
}

impl Enumeration {
    /// `E[1 - D]` where `D` is the number of matched edges around `face`.
    pub fn one_minus_d(&self, graph: &AztecGraph, face: (i64, i64)) -> Result<Rational> {
        if !graph.in_closure(face) {
            return Err(Error::FaceOutsideDiamond(face.0, face.1));
        }
        let mass = graph
            .edges_around(face)
            .iter()
            .fold(Rational::zero(), |acc, &e| acc + &self.edge_mass[e]);
        Ok(Rational::one() - mass / &self.partition_function)
    }
}

pub fn expect_one_minus_d(instance: &WeightedDimerInstance, face: (i64, i64)) -> Result<Rational> {
    enumerate(instance)?.one_minus_d(&instance.graph, face)
}

/// `E[1 - D]` for every face of the closed diamond.
pub fn face_statistics(instance: &WeightedDimerInstance) -> Result<Vec<((i64, i64), Rational)>> {
    let stats = enumerate(instance)?;
    instance
        .graph
        .closure
        .iter()
        .map(|&f| stats.one_minus_d(&instance.graph, f).map(|v| (f, v)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TzComparison {
    pub t: Rational,
    pub z: Rational,
    pub face_product: Rational,
    pub equal: bool,
}

/// Compares the octahedron value at `(center, n)` with `Z · ∏_Ā t`.
pub fn check_t_equals_z(init: &InitialData, center: (i64, i64), n: i64) -> Result<TzComparison> {
    let graph = build_aztec(center, n)?;
    let z = enumerate_z(&weights_from_faces(&graph, init))?;
    let face_product = graph
        .closure
        .iter()
        .fold(Rational::one(), |acc, &(e, h)| acc * init.t(e, h));
    let t = evolve_t(init, center, n)?.get(center.0, center.1, n)?.clone();
    let equal = t == &z * &face_product;
    Ok(TzComparison {
        t,
        z,
        face_product,
        equal,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

impl OracleCheck {
    pub fn new(name: impl Into<String>, lhs: &Rational, rhs: &Rational) -> Self {
        Self {
            name: name.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            equal: lhs == rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub n: i64,
    pub center: (i64, i64),
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.equal)
    }
}

/// `T = Z ∏t` and `f_(ε,η) = E[1 - D]` for every face of `A_{center, n}`
/// under the two-periodic data `(1, 1, 1, 1/a)`.
pub fn oracle_report(a: &Rational, center: (i64, i64), n: i64) -> Result<OracleReport> {
    use crate::wavefield::{FundamentalSet, ResidueClass};

    let init = InitialData::two_periodic(a)?;
    let mut checks = Vec::new();
    let tz = check_t_equals_z(&init, center, n)?;
    checks.push(OracleCheck::new("T=Z*prod(t)", &tz.t, &(&tz.z * &tz.face_product)));

    let graph = build_aztec(center, n)?;
    let stats = enumerate(&weights_from_faces(&graph, &init))?;
    let fields = FundamentalSet::<Rational>::new(a, n)?;
    for &(e, h) in graph.closure() {
        let class = ResidueClass::of(e, h);
        let value = fields.field(class).get(center.0 - (e - class.eps), center.1 - (h - class.eta), n)?;
        let expected = stats.one_minus_d(&graph, (e, h))?;
        checks.push(OracleCheck::new(format!("f=E[1-D] face ({e},{h})"), &value, &expected));
    }
    Ok(OracleReport { n, center, checks })
}

/// `2^{m(m+1)/2}`, the number of matchings of the size-`m` diamond.
pub fn matching_count(size: usize) -> Rational {
    num_traits::pow(integer(2), size * (size + 1) / 2)
}
