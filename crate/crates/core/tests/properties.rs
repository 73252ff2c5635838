use proptest::prelude::*;

use sarkisov_core::cones::{classify_position, sort_rays_clockwise, Cone2, Position, Weight};
use sarkisov_core::cox::CoxData;
use sarkisov_core::poly::{monomials_of_degree, SparsePoly};

fn grading() -> impl Strategy<Value = Vec<Weight>> {
    prop::collection::vec((1i64..=8, -3i64..=3), 3..8).prop_map(|ws| {
        let mut out = vec![Weight::new(0, 1)];
        out.extend(ws.into_iter().map(|(a, b)| Weight::new(a, b)));
        out
    })
}

fn cox_of(ws: &[Weight]) -> Option<CoxData> {
    let names = (0..ws.len()).map(|i| format!("v{i}")).collect();
    CoxData::new(names, ws.to_vec()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, max_global_rejects: 20_000, ..ProptestConfig::default() })]

    #[test]
    fn chambers_tile_the_mobile_cone(ws in grading()) {
        let cox = cox_of(&ws);
        prop_assume!(cox.is_some());
        let cox = cox.unwrap();
        let mob = cox.mobile_cone();
        prop_assume!(mob.is_ok());
        let mob = mob.unwrap();
        let chambers = cox.git_chambers().unwrap();
        prop_assert!(!chambers.is_empty());
        prop_assert_eq!(chambers[0].cone.r1, mob.cone.r1);
        prop_assert_eq!(chambers.last().unwrap().cone.r2, mob.cone.r2);
        for pair in chambers.windows(2) {
            prop_assert_eq!(pair[0].cone.r2, pair[1].cone.r1);
        }
        for c in &chambers {
            // clockwise and full dimensional
            prop_assert!(c.cone.r1.cross(c.cone.r2) < 0);
            for r in [c.cone.r1, c.cone.r2] {
                prop_assert_ne!(classify_position(&mob.cone, r).unwrap(), Position::Outside);
            }
            let mut all: Vec<usize> = c.left.iter().chain(&c.right).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..cox.len()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn classify_ignores_scale_and_ray_order(
        a in (-9i64..=9, -9i64..=9),
        b in (-9i64..=9, -9i64..=9),
        w in (-9i64..=9, -9i64..=9),
        k in 1i64..=6,
        l in 1i64..=6,
    ) {
        let (r1, r2, w) = (Weight::new(a.0, a.1), Weight::new(b.0, b.1), Weight::new(w.0, w.1));
        prop_assume!(!r1.is_zero() && !r2.is_zero() && !w.is_zero());
        let cone = Cone2::new(r1, r2);
        prop_assume!(cone.is_ok());
        let cone = cone.unwrap();
        let scaled = Cone2::new(Weight::new(k * r1.a, k * r1.b), Weight::new(l * r2.a, l * r2.b)).unwrap();
        let swapped = Cone2::new(r2, r1).unwrap();
        let base = classify_position(&cone, w).unwrap();
        prop_assert_eq!(classify_position(&scaled, w).unwrap(), base);
        prop_assert_eq!(classify_position(&swapped, w).unwrap(), base);
        prop_assert_eq!(classify_position(&cone, Weight::new(k * w.a, k * w.b)).unwrap(), base);
    }

    #[test]
    fn ray_sort_ignores_input_order(ws in grading(), seed in any::<u64>()) {
        let sorted = sort_rays_clockwise(&ws);
        prop_assume!(sorted.is_ok());
        let sorted = sorted.unwrap();
        let mut perm: Vec<usize> = (0..ws.len()).collect();
        let mut s = seed;
        for i in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let shuffled: Vec<Weight> = perm.iter().map(|&i| ws[i]).collect();
        let again = sort_rays_clockwise(&shuffled).unwrap();
        prop_assert_eq!(
            sorted.iter().map(|g| g.ray).collect::<Vec<_>>(),
            again.iter().map(|g| g.ray).collect::<Vec<_>>()
        );
    }

    #[test]
    fn generated_supports_are_homogeneous(ws in prop::collection::vec(1i64..=5, 2..5), d in 1i64..=9) {
        let support = monomials_of_degree(&ws, d);
        let p = SparsePoly::generic(ws.len(), support);
        let grading: Vec<Weight> = ws.iter().map(|&w| Weight::new(w, 0)).collect();
        if !p.is_zero() {
            prop_assert_eq!(p.bidegree(&grading).unwrap(), Weight::new(d, 0));
            let sq = p.mul(&p);
            prop_assert_eq!(sq.bidegree(&grading).unwrap(), Weight::new(2 * d, 0));
        }
    }
}
