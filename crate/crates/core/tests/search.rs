mod oracles;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secpath_core::bfs::bfs_baseline;
use secpath_core::validate::{brute_delaunay_edges, verifier_config, verify_chain};
use secpath_core::wavefront::solve;
use secpath_core::{Diagram, Point, RobustnessConfig, SiteId, SiteKind};

fn random_points(seed: u64, n: usize) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect()
}

fn square_frame(per_side: usize) -> Vec<Point> {
    let mut out = Vec::new();
    for i in 0..per_side {
        let t = -0.5 + 2.0 * i as f64 / per_side as f64;
        out.extend([Point::new(t, -0.5), Point::new(1.5, t), Point::new(1.0 - t, 1.5), Point::new(-0.5, 1.0 - t)]);
    }
    out
}

#[test]
fn bfs_matches_brute_force_hops() {
    let cfg = RobustnessConfig { perturbation: 0.0, ..RobustnessConfig::default() };
    for seed in 0..30 {
        let pts = random_points(seed, 40);
        let d = Diagram::build(&pts, &[], cfg).unwrap();
        let edges = brute_delaunay_edges(&pts).unwrap();
        let hops = oracles::hop_distances(pts.len(), &edges, 0);
        for (t, hop) in hops.iter().enumerate().skip(1) {
            let r = bfs_baseline(&d, SiteId(0), SiteId(t as u32)).unwrap();
            assert_eq!(Some(r.intermediates() + 1), *hop, "seed {seed} target {t}");
        }
    }
}

#[test]
fn wavefront_never_beats_itself_and_never_loses_to_bfs() {
    for seed in 0..15 {
        let pts = random_points(100 + seed, 300);
        let frame = square_frame(8);
        let cfg = RobustnessConfig::default().with_seed(seed);
        let mut d = Diagram::build(&pts, &frame, cfg).unwrap();
        let (s, t) = (SiteId(0), SiteId(1));
        let bfs = bfs_baseline(&d, s, t).unwrap().intermediates();
        let before: Vec<Point> = (0..pts.len() + frame.len()).map(|i| d.site(SiteId(i as u32)).unwrap().disk.center).collect();
        let sol = solve(&mut d, s, t).unwrap();
        assert!(sol.cost() <= bfs, "seed {seed}: {} > {bfs}", sol.cost());
        d.check_topology().unwrap();

        // Each chain disk's parent is the previous one, and generations count up.
        let mut cur = sol.last;
        let mut g = sol.cost() as u32;
        while g > 0 {
            let rec = d.site(cur).unwrap();
            let SiteKind::Inserted { generation, parent } = rec.kind else { panic!() };
            assert_eq!(generation, g);
            let p = d.site(parent).unwrap().disk;
            let gap = rec.disk.center.distance(p.center) - rec.disk.radius - p.radius;
            assert!(gap.abs() < 1e-6, "seed {seed}: gap {gap}");
            cur = parent;
            g -= 1;
        }
        assert_eq!(cur, s);

        let others: Vec<Point> = before[2..pts.len()].to_vec();
        let fr = before[pts.len()..].to_vec();
        let rep = verify_chain(&others, &fr, before[0], before[1], &sol.path.tangencies, verifier_config(&cfg)).unwrap();
        assert!(rep.valid, "seed {seed}: {rep:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_weighted_insertions_keep_topology(seed in any::<u64>(), n in 5usize..60) {
        let pts = random_points(seed, 20);
        let mut d = Diagram::build(&pts, &square_frame(4), RobustnessConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for _ in 0..n {
            let disk = secpath_core::Disk::new(Point::new(rng.gen(), rng.gen()), rng.gen_range(0.0..0.05));
            let hint = d.sites().find(|(_, r)| r.is_live()).map(|(id, _)| id).unwrap();
            d.insert(disk, SiteKind::Input, hint).unwrap();
        }
        prop_assert_eq!(d.check_topology(), Ok(()));
        prop_assert!(d.max_empty_circle_violation() <= 1e-7);
    }

    #[test]
    fn bfs_is_symmetric(seed in any::<u64>(), a in 0usize..50, b in 0usize..50) {
        prop_assume!(a != b);
        let pts = random_points(seed, 50);
        let d = Diagram::build(&pts, &[], RobustnessConfig::default()).unwrap();
        let ab = bfs_baseline(&d, SiteId(a as u32), SiteId(b as u32)).unwrap();
        let ba = bfs_baseline(&d, SiteId(b as u32), SiteId(a as u32)).unwrap();
        prop_assert_eq!(ab.intermediates(), ba.intermediates());
    }
}
