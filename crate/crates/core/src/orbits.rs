//! Grid scans, strata and orbit labels.
//!
//! A stratum is a grid-connected set of probe-regular nodes sharing the same
//! `(k_1, …, k_{n+2})`. Inside a stratum an orbit is grown from a seed node
//! through grid neighbours whose invariants (`𝒟^0K … 𝒟^nK` and the matching
//! observable blocks) agree with the seed's. Probes use a radius of one grid
//! cell.

use std::collections::VecDeque;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frame::FrameSpec;
use crate::killing::{
    homogeneity_from_invariants, killing_spaces, probe_around, HomogeneityReport,
};
use crate::numerics::{relative_close, Numerics};

/// A regular grid over a box, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub bounds: Vec<(f64, f64)>,
    pub resolution: Vec<usize>,
}

impl Grid {
    pub fn new(bounds: Vec<(f64, f64)>, resolution: Vec<usize>) -> Result<Grid> {
        if bounds.len() != resolution.len() {
            return Err(Error::DimensionMismatch {
                expected: bounds.len(),
                got: resolution.len(),
            });
        }
        if let Some(r) = resolution.iter().find(|&&r| r < 3) {
            return Err(Error::InsufficientSamples(format!(
                "grid resolution {r} per axis; need at least 3"
            )));
        }
        if let Some((lo, hi)) = bounds
            .iter()
            .find(|(lo, hi)| lo.partial_cmp(hi) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::InvalidSpec(format!(
                "empty grid interval [{lo}, {hi}]"
            )));
        }
        Ok(Grid { bounds, resolution })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Multi-index of node `flat`; the first axis varies slowest.
    pub fn index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for axis in (0..self.dim()).rev() {
            idx[axis] = flat % self.resolution[axis];
            flat /= self.resolution[axis];
        }
        idx
    }

    pub fn flat(&self, index: &[usize]) -> usize {
        index
            .iter()
            .zip(&self.resolution)
            .fold(0, |acc, (i, r)| acc * r + i)
    }

    /// Smallest node spacing over all axes.
    pub fn cell(&self) -> f64 {
        self.bounds
            .iter()
            .zip(&self.resolution)
            .map(|(&(lo, hi), &r)| (hi - lo) / (r - 1) as f64)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn point(&self, index: &[usize]) -> Vec<f64> {
        index
            .iter()
            .zip(&self.bounds)
            .zip(&self.resolution)
            .map(|((&i, &(lo, hi)), &r)| lo + (hi - lo) * i as f64 / (r - 1) as f64)
            .collect()
    }

    /// Axis-aligned neighbours, in a fixed order.
    pub fn neighbours(&self, flat: usize) -> Vec<usize> {
        let idx = self.index(flat);
        let mut out = Vec::with_capacity(2 * self.dim());
        for axis in 0..self.dim() {
            if idx[axis] > 0 {
                let mut j = idx.clone();
                j[axis] -= 1;
                out.push(self.flat(&j));
            }
            if idx[axis] + 1 < self.resolution[axis] {
                let mut j = idx.clone();
                j[axis] += 1;
                out.push(self.flat(&j));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridNode {
    pub index: Vec<usize>,
    pub point: Vec<f64>,
    /// `(k_1, …, k_{n+2})`.
    pub dims: Vec<usize>,
    pub stabilization: usize,
    /// Passed the integrability probe.
    pub regular: bool,
    /// Flattened blocks `0..=n` of the derived curvature and observables.
    pub features: Vec<f64>,
    /// Flattened blocks `0..=n+1`, for the homogeneity test.
    pub invariants: Vec<f64>,
}

impl GridNode {
    /// Dimension of the local Killing algebra, hence of the orbit, `k_{n+1}`.
    pub fn orbit_dim(&self) -> usize {
        self.dims[self.dims.len() - 2]
    }
}

/// Evaluate every grid node. Nodes come back in flat order regardless of how
/// the work was scheduled.
pub fn scan_grid(spec: &FrameSpec, grid: &Grid, numerics: &Numerics) -> Result<Vec<GridNode>> {
    let n = spec.dim();
    if grid.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: grid.dim(),
        });
    }
    let count = numerics.probe_count(n);
    let radius = grid.cell();
    (0..grid.len())
        .into_par_iter()
        .map(|flat| {
            let index = grid.index(flat);
            let point = grid.point(&index);
            let filtration = killing_spaces(spec, &point, n + 2, numerics)?;
            let dims = filtration.dims().to_vec();
            // Probes that fail to evaluate mark the node as singular.
            let regular = probe_around(spec, &point, &dims, radius, count, numerics)
                .map(|p| p.in_domain)
                .unwrap_or(false);
            let features = filtration.curvature().truncated(n).flatten();
            let invariants = filtration.curvature().truncated(n + 1).flatten();
            Ok(GridNode {
                index,
                point,
                dims,
                stabilization: filtration.stabilization_order(),
                regular,
                features,
                invariants,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stratum {
    pub id: usize,
    pub dims: Vec<usize>,
    pub orbit_dim: usize,
    pub nodes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub id: usize,
    pub stratum: usize,
    pub dim: usize,
    pub nodes: Vec<usize>,
    /// Other orbits of the same stratum whose seed invariants match this
    /// one's; they may be one orbit that the grid failed to connect.
    pub possibly_same: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitAtlas {
    pub grid: Grid,
    pub nodes: Vec<GridNode>,
    pub strata: Vec<Stratum>,
    pub orbits: Vec<Orbit>,
    /// Per node: stratum id, `None` for singular nodes.
    pub node_stratum: Vec<Option<usize>>,
    pub node_orbit: Vec<Option<usize>>,
    pub feature_tol: f64,
    /// Set when the atlas comes from a scan rather than from given nodes.
    pub scan: Option<ScanInfo>,
}

/// How the nodes were evaluated, and what they say about homogeneity.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanInfo {
    pub probe_radius: f64,
    pub probe_count: usize,
    /// Over every grid node.
    pub homogeneity: HomogeneityReport,
}

/// Connected components of regular nodes with equal dimension vectors.
pub fn stratify(grid: &Grid, nodes: &[GridNode]) -> (Vec<Stratum>, Vec<Option<usize>>) {
    let mut label: Vec<Option<usize>> = vec![None; nodes.len()];
    let mut strata = Vec::new();
    for seed in 0..nodes.len() {
        if !nodes[seed].regular || label[seed].is_some() {
            continue;
        }
        let id = strata.len();
        let members = grow(grid, seed, &mut label, id, |j| {
            nodes[j].regular && nodes[j].dims == nodes[seed].dims
        });
        strata.push(Stratum {
            id,
            dims: nodes[seed].dims.clone(),
            orbit_dim: nodes[seed].orbit_dim(),
            nodes: members,
        });
    }
    (strata, label)
}

fn grow(
    grid: &Grid,
    seed: usize,
    label: &mut [Option<usize>],
    id: usize,
    accept: impl Fn(usize) -> bool,
) -> Vec<usize> {
    let mut members = vec![seed];
    label[seed] = Some(id);
    let mut queue = VecDeque::from([seed]);
    while let Some(i) = queue.pop_front() {
        for j in grid.neighbours(i) {
            if label[j].is_none() && accept(j) {
                label[j] = Some(id);
                members.push(j);
                queue.push_back(j);
            }
        }
    }
    members.sort_unstable();
    members
}

fn features_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| relative_close(*x, *y, tol))
}

/// Label orbits inside each stratum.
pub fn classify_orbits(grid: Grid, nodes: Vec<GridNode>, feature_tol: f64) -> OrbitAtlas {
    let (strata, node_stratum) = stratify(&grid, &nodes);
    let mut node_orbit: Vec<Option<usize>> = vec![None; nodes.len()];
    let mut orbits: Vec<Orbit> = Vec::new();
    let mut seeds = Vec::new();
    for stratum in &strata {
        for &seed in &stratum.nodes {
            if node_orbit[seed].is_some() {
                continue;
            }
            let id = orbits.len();
            let members = grow(&grid, seed, &mut node_orbit, id, |j| {
                node_stratum[j] == Some(stratum.id)
                    && features_close(&nodes[seed].features, &nodes[j].features, feature_tol)
            });
            orbits.push(Orbit {
                id,
                stratum: stratum.id,
                dim: stratum.orbit_dim,
                nodes: members,
                possibly_same: Vec::new(),
            });
            seeds.push(seed);
        }
    }
    for a in 0..orbits.len() {
        for b in 0..orbits.len() {
            if a != b
                && orbits[a].stratum == orbits[b].stratum
                && features_close(
                    &nodes[seeds[a]].features,
                    &nodes[seeds[b]].features,
                    feature_tol,
                )
            {
                orbits[a].possibly_same.push(b);
            }
        }
    }
    for (o, &seed) in orbits.iter().zip(&seeds) {
        for &j in &o.nodes {
            assert!(
                features_close(&nodes[seed].features, &nodes[j].features, feature_tol),
                "orbit {} holds node {j} whose features differ from its seed",
                o.id
            );
        }
    }
    OrbitAtlas {
        grid,
        nodes,
        strata,
        orbits,
        node_stratum,
        node_orbit,
        feature_tol,
        scan: None,
    }
}

/// Scan, stratify and label in one go.
pub fn orbit_atlas(spec: &FrameSpec, grid: Grid, numerics: &Numerics) -> Result<OrbitAtlas> {
    let nodes = scan_grid(spec, &grid, numerics)?;
    let n = spec.dim();
    let homogeneity = homogeneity_from_invariants(
        n,
        nodes.iter().map(|v| v.point.clone()).collect(),
        &nodes
            .iter()
            .map(|v| v.invariants.clone())
            .collect::<Vec<_>>(),
        nodes.iter().map(GridNode::orbit_dim).collect(),
        numerics,
    );
    let scan = ScanInfo {
        probe_radius: grid.cell(),
        probe_count: numerics.probe_count(n),
        homogeneity,
    };
    let mut atlas = classify_orbits(grid, nodes, numerics.feature_tol);
    atlas.scan = Some(scan);
    Ok(atlas)
}

impl OrbitAtlas {
    /// Per-node table in grid order: coordinates, `k_r`, probe regularity,
    /// stratum, orbit (`-1` for singular nodes), orbit dimension, then the
    /// feature vector.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let io = |e: csv::Error| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        let mut w = csv::Writer::from_path(path).map_err(io)?;
        let n = self.grid.dim();
        let features = self.nodes.first().map_or(0, |v| v.features.len());
        let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        header.extend((1..=n + 2).map(|r| format!("k{r}")));
        header.extend(["in_int", "stratum", "orbit", "orbit_dim"].map(String::from));
        header.extend((1..=features).map(|i| format!("f{i}")));
        w.write_record(&header).map_err(io)?;
        let id = |v: Option<usize>| v.map_or_else(|| "-1".to_string(), |v| v.to_string());
        for (flat, node) in self.nodes.iter().enumerate() {
            let mut row: Vec<String> = node.point.iter().map(|v| format!("{v:.10}")).collect();
            row.extend(node.dims.iter().map(usize::to_string));
            row.push(u8::from(node.regular).to_string());
            row.push(id(self.node_stratum[flat]));
            row.push(id(self.node_orbit[flat]));
            row.push(node.orbit_dim().to_string());
            // `+ 0.0` folds negative zeros.
            row.extend(node.features.iter().map(|v| format!("{:.12e}", v + 0.0)));
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    /// Plain-text summary of strata and orbits.
    pub fn write_summary(&self, out: &mut impl Write) -> std::io::Result<()> {
        let singular = self.node_stratum.iter().filter(|s| s.is_none()).count();
        writeln!(out, "nodes: {}  singular: {}", self.nodes.len(), singular)?;
        if singular == self.nodes.len() {
            writeln!(out, "integrability domain empty at this resolution")?;
        }
        writeln!(
            out,
            "feature_tol: {:e} (relative, per component)",
            self.feature_tol
        )?;
        if let Some(scan) = &self.scan {
            writeln!(
                out,
                "probe: radius {} (one grid cell), {} directions per shell",
                scan.probe_radius, scan.probe_count
            )?;
            let h = &scan.homogeneity;
            writeln!(
                out,
                "homogeneity: {} (D^{}K deviation {:.3e}, const_tol {:e}; k_{} = n at every node: {})",
                h.verdict.describe(),
                h.order,
                h.max_deviation,
                h.const_tol,
                h.order,
                h.generators_full_rank
            )?;
        }
        writeln!(out, "strata: {}", self.strata.len())?;
        for s in &self.strata {
            let orbits = self.orbits.iter().filter(|o| o.stratum == s.id).count();
            writeln!(
                out,
                "  stratum {}: {} nodes, k = {:?}, k_{} = {}, orbit dimension {}, {} orbits",
                s.id,
                s.nodes.len(),
                s.dims,
                s.dims.len() - 1,
                s.orbit_dim,
                s.orbit_dim,
                orbits
            )?;
        }
        writeln!(out, "orbits: {}", self.orbits.len())?;
        for o in &self.orbits {
            write!(
                out,
                "  orbit {}: stratum {}, dimension {}, {} nodes",
                o.id,
                o.stratum,
                o.dim,
                o.nodes.len()
            )?;
            if !o.possibly_same.is_empty() {
                write!(out, ", possibly same orbit as {:?}", o.possibly_same)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
