use cat0_core::treespace::*;
use proptest::prelude::*;

/// Standard Petersen labeling: outer cycle 0..5, inner pentagram 5..10, spokes.
fn petersen() -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((5 + i, 5 + (i + 2) % 5));
        e.push((i, 5 + i));
    }
    e
}

fn isomorphic(a: &[Vec<bool>], b: &[Vec<bool>]) -> bool {
    fn extend(a: &[Vec<bool>], b: &[Vec<bool>], map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let k = map.len();
        if k == a.len() {
            return true;
        }
        for t in 0..b.len() {
            if used[t] || (0..k).any(|i| a[k][i] != b[t][map[i]]) {
                continue;
            }
            used[t] = true;
            map.push(t);
            if extend(a, b, map, used) {
                return true;
            }
            map.pop();
            used[t] = false;
        }
        false
    }
    a.len() == b.len() && extend(a, b, &mut Vec::new(), &mut vec![false; b.len()])
}

fn adjacency(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for (u, v) in edges {
        m[u][v] = true;
        m[v][u] = true;
    }
    m
}

#[test]
fn link_is_petersen() {
    let t5 = build_t5();
    let g = &t5.link;
    assert_eq!((g.nodes.len(), g.arcs.len()), (10, 15));
    assert!((0..10).all(|n| g.degree(n) == 3));
    let link = adjacency(10, g.arcs.iter().map(|a| (a.ends[0], a.ends[1])));
    assert!(isomorphic(&link, &adjacency(10, petersen())));

    // Also the Kneser graph on 2-subsets: compatible exactly when small sides are disjoint.
    let splits = Split::all();
    for (i, a) in splits.iter().enumerate() {
        for (j, b) in splits.iter().enumerate() {
            if i != j {
                let ri = t5.ray_index(&a.to_string()).unwrap();
                let rj = t5.ray_index(&b.to_string()).unwrap();
                let ni = g.nodes.iter().position(|&r| r == ri).unwrap();
                let nj = g.nodes.iter().position(|&r| r == rj).unwrap();
                assert_eq!(link[ni][nj], a.small_side() & b.small_side() == 0);
            }
        }
    }
}

#[test]
fn t5_is_not_planar() {
    let t5 = build_t5();
    assert_eq!(girth(&t5.link), Some(5));
    let w = nonplanarity_witness(&t5.link).unwrap();
    assert_eq!(w.edges, 15);
    assert!((w.planar_bound - 40.0 / 3.0).abs() < 1e-12);
}

#[test]
fn girth_of_small_graphs() {
    let c = cat0_core::single_vertex::SingleVertexComplex::new(
        vec!["a".into(), "b".into(), "c".into(), "d".into()],
        vec![
            ("ab".into(), ["a".into(), "b".into()], 2.0),
            ("bc".into(), ["b".into(), "c".into()], 2.0),
            ("cd".into(), ["c".into(), "d".into()], 2.0),
            ("da".into(), ["d".into(), "a".into()], 2.0),
        ],
    )
    .unwrap();
    assert_eq!(girth(&c.link), Some(4));
    assert!(nonplanarity_witness(&c.link).is_none());
}

fn split_strategy() -> impl Strategy<Value = Split> {
    (0..10usize).prop_map(|i| Split::all()[i])
}

fn tree_strategy() -> impl Strategy<Value = Tree5> {
    (split_strategy(), split_strategy(), 0.0..3.0f64, 0.0..3.0f64).prop_map(|(a, b, la, lb)| {
        if a != b && splits_compatible(a, b).unwrap() {
            Tree5 { splits: vec![(a, la), (b, lb)] }
        } else {
            Tree5 { splits: vec![(a, la)] }
        }
    })
}

fn norm(t: &Tree5) -> f64 {
    t.splits.iter().map(|s| s.1 * s.1).sum::<f64>().sqrt()
}

proptest! {
    #[test]
    fn bhv_is_a_metric(a in tree_strategy(), b in tree_strategy(), c in tree_strategy()) {
        let t5 = build_t5();
        let ab = bhv_distance(&t5, &a, &b).unwrap();
        let ba = bhv_distance(&t5, &b, &a).unwrap();
        let bc = bhv_distance(&t5, &b, &c).unwrap();
        let ac = bhv_distance(&t5, &a, &c).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!(ac <= ab + bc + 1e-9);
        prop_assert!(bhv_distance(&t5, &a, &a).unwrap() < 1e-12);
        prop_assert!(ab <= norm(&a) + norm(&b) + 1e-9);
        prop_assert!(ab >= (norm(&a) - norm(&b)).abs() - 1e-9);
    }

    #[test]
    fn single_split_trees(a in split_strategy(), b in split_strategy(), la in 0.1..3.0f64, lb in 0.1..3.0f64) {
        prop_assume!(a != b);
        let t5 = build_t5();
        let d = bhv_distance(&t5, &Tree5 { splits: vec![(a, la)] }, &Tree5 { splits: vec![(b, lb)] }).unwrap();
        // Compatible splits span a quadrant; otherwise link distance is at least π.
        let want = if splits_compatible(a, b).unwrap() { la.hypot(lb) } else { la + lb };
        prop_assert!((d - want).abs() < 1e-12);
    }
}

#[test]
fn rejects_bad_trees() {
    let t5 = build_t5();
    let a: Split = "12|345".parse().unwrap();
    let b: Split = "45|123".parse().unwrap();
    assert!(tree_to_point(&t5, &Tree5 { splits: vec![(a, -1.0)] }).is_err());
    assert!(tree_to_point(&t5, &Tree5 { splits: vec![(a, 1.0), (b, 1.0), (a, 1.0)] }).is_err());
    assert!(tree_to_point(&t5, &Tree5 { splits: vec![(a, 1.0), (a, 2.0)] }).is_err());
    assert_eq!(tree_to_point(&t5, &Tree5 { splits: vec![(a, 0.0), (b, 0.0)] }).unwrap(), cat0_core::single_vertex::ConePoint::Origin);
}

#[test]
fn quadrant_to_quadrant_across_origin() {
    // 12|345+34|125 and 13|245+25|134 have no split in common and lie at link distance ≥ π.
    let t5 = build_t5();
    let t = |a: &str, b: &str| Tree5 { splits: vec![(a.parse().unwrap(), 1.0), (b.parse().unwrap(), 1.0)] };
    let d = bhv_distance(&t5, &t("12|345", "34|125"), &t("13|245", "25|134")).unwrap();
    assert!((d - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    // Sharing a split: the path runs through the shared ray's two quadrants.
    let d = bhv_distance(&t5, &t("12|345", "34|125"), &t("12|345", "35|124")).unwrap();
    assert!((d - 2.0).abs() < 1e-12);
}
