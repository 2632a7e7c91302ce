mod common;

use common::{affine, flat, frame, heisenberg, quadratic};
use parsym_core::frame::derived_curvature;
use parsym_core::killing::killing_spaces;
use parsym_core::orbits::{classify_orbits, orbit_atlas, scan_grid, GridNode};
use parsym_core::{FrameSpec, Grid, Numerics};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn square(half: f64, res: usize) -> Grid {
    Grid::new(vec![(-half, half); 2], vec![res; 2]).unwrap()
}

#[test]
fn quadratic_atlas_has_three_column_strata() {
    let atlas = orbit_atlas(&quadratic(), square(3.0, 61), &Numerics::default()).unwrap();
    assert_eq!(atlas.strata.len(), 3);
    for (flat, node) in atlas.nodes.iter().enumerate() {
        let on_wall = (node.point[0].abs() - 1.0).abs() < 1e-9;
        assert_eq!(atlas.node_stratum[flat].is_none(), on_wall, "{node:?}");
    }
    for s in &atlas.strata {
        assert_eq!(s.orbit_dim, 1);
        assert_eq!(s.dims[2], 1);
    }
    assert_eq!(atlas.orbits.len(), 59);
    for o in &atlas.orbits {
        assert_eq!(o.dim, 1);
        assert_eq!(o.nodes.len(), 61);
        let column = atlas.nodes[o.nodes[0]].index[0];
        assert!(o.nodes.iter().all(|&j| atlas.nodes[j].index[0] == column));
    }
    // x ↦ -x is a symmetry of the frame, so mirrored columns look alike.
    assert!(atlas.orbits.iter().all(|o| o.possibly_same.len() <= 1));
}

#[test]
fn orbits_are_tangent_to_killing_fields() {
    let spec = quadratic();
    let nm = Numerics::default();
    let atlas = orbit_atlas(&spec, square(2.5, 21), &nm).unwrap();
    let mut checked = 0;
    for o in &atlas.orbits {
        for pair in o.nodes.windows(2) {
            let (a, b) = (&atlas.nodes[pair[0]], &atlas.nodes[pair[1]]);
            let step = [b.point[0] - a.point[0], b.point[1] - a.point[1]];
            for gen in killing_spaces(&spec, &a.point, 4, &nm)
                .unwrap()
                .basis_vectors(3)
            {
                let v = spec.frame_velocity(&a.point, &gen).unwrap();
                let cross = v[0] * step[1] - v[1] * step[0];
                let scale = (v[0].hypot(v[1])) * step[0].hypot(step[1]);
                assert!(cross.abs() <= 1e-9 * scale, "{a:?} -> {b:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 300);
}

#[test]
fn observable_rows_on_flat_plane() {
    let spec = frame(&[&["1", "0"], &["0", "1"]], &["y"], 3.0);
    let atlas = orbit_atlas(&spec, square(3.0, 31), &Numerics::default()).unwrap();
    assert_eq!(atlas.strata.len(), 1);
    assert_eq!(atlas.orbits.len(), 31);
    for o in &atlas.orbits {
        assert_eq!(o.dim, 1);
        let row = atlas.nodes[o.nodes[0]].index[1];
        assert_eq!(o.nodes.len(), 31);
        assert!(o.nodes.iter().all(|&j| atlas.nodes[j].index[1] == row));
        assert!(o.possibly_same.is_empty());
    }
}

#[test]
fn homogeneous_frames_form_one_orbit() {
    for (spec, dim) in [(flat(2), 2), (affine(), 2)] {
        let atlas = orbit_atlas(&spec, square(2.0, 9), &Numerics::default()).unwrap();
        assert_eq!(atlas.strata.len(), 1);
        assert_eq!(atlas.orbits.len(), 1);
        assert_eq!(atlas.orbits[0].dim, dim);
        assert_eq!(atlas.orbits[0].nodes.len(), 81);
    }
}

#[test]
fn scan_is_schedule_independent() {
    let spec = quadratic();
    let grid = square(3.0, 15);
    let nm = Numerics::default();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| scan_grid(&spec, &grid, &nm).unwrap())
    };
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for (k, threads) in [1, 4].into_iter().enumerate() {
        let nodes = run(threads);
        let atlas = classify_orbits(grid.clone(), nodes, nm.feature_tol);
        let path = dir.path().join(format!("atlas{k}.csv"));
        atlas.write_csv(&path).unwrap();
        bytes.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
}

#[test]
fn stratification_splits_on_dimension_jumps() {
    let grid = Grid::new(vec![(0.0, 6.0)], vec![7]).unwrap();
    let node = |i: usize, dims: Vec<usize>, regular: bool, feature: f64| GridNode {
        index: vec![i],
        point: vec![i as f64],
        dims,
        stabilization: 1,
        regular,
        features: vec![feature],
        invariants: vec![feature],
    };
    let nodes = vec![
        node(0, vec![1, 1, 1], true, 0.0),
        node(1, vec![1, 1, 1], true, 5.0),
        node(2, vec![1, 1, 1], true, 0.0),
        node(3, vec![2, 1, 1], false, 0.0),
        node(4, vec![1, 1, 1], true, 0.0),
        node(5, vec![1, 0, 0], true, 0.0),
        node(6, vec![1, 0, 0], true, 0.0),
    ];
    let atlas = classify_orbits(grid, nodes, 1e-6);
    assert_eq!(atlas.strata.len(), 3);
    assert_eq!(
        atlas.node_stratum,
        vec![Some(0), Some(0), Some(0), None, Some(1), Some(2), Some(2)]
    );
    assert_eq!(
        atlas.node_orbit,
        vec![Some(0), Some(1), Some(2), None, Some(3), Some(4), Some(4)]
    );
    assert_eq!(atlas.orbits[0].possibly_same, vec![2]);
    assert_eq!(atlas.orbits[2].possibly_same, vec![0]);
    assert!(atlas.orbits[1].possibly_same.is_empty() && atlas.orbits[3].possibly_same.is_empty());
    assert_eq!(atlas.orbits[4].dim, 0);
}

/// Finite-difference derivative of the orbit features along every direction
/// `F(x)·A`, `A ∈ Kill^{n+1}(x)`.
fn feature_drift(spec: &FrameSpec, x: &[f64], h: f64) -> f64 {
    let n = spec.dim();
    let nm = Numerics::default();
    let features = |p: &[f64]| derived_curvature(spec, p, n).unwrap().flatten();
    let mut worst: f64 = 0.0;
    for a in killing_spaces(spec, x, n + 2, &nm)
        .unwrap()
        .basis_vectors(n + 1)
    {
        let v = spec.frame_velocity(x, &a).unwrap();
        let shifted = |s: f64| -> Vec<f64> { x.iter().zip(&v).map(|(p, d)| p + s * d).collect() };
        let (plus, minus) = (features(&shifted(h)), features(&shifted(-h)));
        let grad: Vec<f64> = plus
            .iter()
            .zip(&minus)
            .map(|(p, m)| (p - m) / (2.0 * h))
            .collect();
        worst = worst.max(grad.iter().map(|g| g * g).sum::<f64>().sqrt());
    }
    worst
}

#[test]
fn killing_directions_preserve_features() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (spec, dim) in [(quadratic(), 2), (affine(), 2), (heisenberg(), 3)] {
        let nm = Numerics::default();
        let mut checked = 0;
        while checked < 10 {
            let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.5..2.5)).collect();
            let dims = killing_spaces(&spec, &x, dim + 2, &nm).unwrap();
            let probe =
                parsym_core::killing::integrability_probe(&spec, &x, 0.1, nm.probe_count(dim), &nm)
                    .unwrap();
            if !probe.in_domain {
                continue;
            }
            assert!(dims.dim(dim + 1) > 0);
            let drift = feature_drift(&spec, &x, 1e-4);
            assert!(drift < 1e-5, "{x:?}: {drift:e}");
            checked += 1;
        }
    }
}

#[test]
fn flat_scan_is_uniform() {
    let atlas = orbit_atlas(&flat(2), square(1.0, 21), &Numerics::default()).unwrap();
    assert!(atlas
        .nodes
        .iter()
        .all(|v| v.regular && v.features.iter().all(|&f| f == 0.0)));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.csv");
    atlas.write_csv(&path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(
        &header[..10],
        &[
            "x1",
            "x2",
            "k1",
            "k2",
            "k3",
            "k4",
            "in_int",
            "stratum",
            "orbit",
            "orbit_dim"
        ]
    );
    assert_eq!(header.len(), 10 + atlas.nodes[0].features.len());
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 441);
    assert!(rows
        .iter()
        .all(|r| r[6] == "1" && r[8] == "0" && r[9] == "2"));
    let mut summary = Vec::new();
    atlas.write_summary(&mut summary).unwrap();
    let summary = String::from_utf8(summary).unwrap();
    assert!(
        summary.contains("locally homogeneous (both tests)"),
        "{summary}"
    );
    assert!(summary.contains("feature_tol: 1e-6"), "{summary}");
}

#[test]
fn affine_features_are_constant() {
    let atlas = orbit_atlas(&affine(), square(2.0, 7), &Numerics::default()).unwrap();
    let first = &atlas.nodes[0].features;
    assert!(first.iter().any(|&f| f != 0.0));
    for v in &atlas.nodes {
        assert!(v
            .features
            .iter()
            .zip(first)
            .all(|(a, b)| (a - b).abs() < 1e-12));
    }
}

#[test]
fn empty_integrability_domain_still_exports() {
    let grid = Grid::new(vec![(0.0, 2.0)], vec![3]).unwrap();
    let nodes = (0..3)
        .map(|i| GridNode {
            index: vec![i],
            point: vec![i as f64],
            dims: vec![1, 0, 0],
            stabilization: 2,
            regular: false,
            features: vec![i as f64],
            invariants: vec![i as f64],
        })
        .collect();
    let atlas = classify_orbits(grid, nodes, 1e-6);
    assert!(atlas.strata.is_empty() && atlas.orbits.is_empty());
    let mut summary = Vec::new();
    atlas.write_summary(&mut summary).unwrap();
    assert!(String::from_utf8(summary)
        .unwrap()
        .contains("integrability domain empty at this resolution"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    atlas.write_csv(&path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(
        text.lines().skip(1).all(|l| l.contains(",0,-1,-1,0,")),
        "{text}"
    );
}
