use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secpath_core::validate::brute_delaunay_edges;
use secpath_core::{Diagram, Point, RobustnessConfig, SiteId};

fn random_points(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point::new(rng.gen::<f64>(), rng.gen::<f64>())).collect()
}

#[test]
fn point_diagram_matches_brute_force_delaunay() {
    for seed in 0..50 {
        let n = 20 + (seed as usize % 21);
        let pts = random_points(n, seed);
        let d = Diagram::build(&pts, &[], RobustnessConfig::default().with_seed(seed)).unwrap();
        d.check_topology().unwrap();
        let got: Vec<(usize, usize)> = d.edges().into_iter().map(|(a, b)| (a.index(), b.index())).collect();
        let want = brute_delaunay_edges(&pts).unwrap();
        assert_eq!(got, want, "seed {seed}");
    }
}

#[test]
fn large_point_diagram_is_consistent() {
    let pts = random_points(3000, 7);
    let d = Diagram::build(&pts, &[], RobustnessConfig::default()).unwrap();
    d.check_topology().unwrap();
    assert_eq!(d.live_count(), 3000);
    assert!(d.max_empty_circle_violation() < 1e-9);
    for i in 0..3000 {
        assert!(!d.neighbors(SiteId(i)).unwrap().is_empty());
    }
}

#[test]
fn weighted_insertions_keep_diagram_consistent() {
    use secpath_core::{Disk, SiteKind};
    for seed in 0..20u64 {
        let pts = random_points(200, seed);
        let mut d = Diagram::build(&pts, &[], RobustnessConfig::default().with_seed(seed)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 1000);
        let mut hint = SiteId(0);
        for k in 0..300 {
            let c = Point::new(rng.gen::<f64>(), rng.gen::<f64>());
            let r = rng.gen::<f64>() * 0.05;
            let ins = d
                .insert(Disk::new(c, r), SiteKind::Inserted { generation: 1, parent: SiteId(0) }, hint)
                .unwrap_or_else(|e| panic!("seed {seed} step {k}: {e}"));
            if let Some(id) = ins.inserted() {
                hint = id;
            }
            if let Err(e) = d.check_topology() {
                panic!("seed {seed} step {k}: {e}");
            }
        }
        let v = d.max_empty_circle_violation();
        assert!(v < 1e-9, "seed {seed}: violation {v}");
    }
}
