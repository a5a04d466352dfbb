//! Slice-wise operations against literal soft-element materializations,
//! exhaustively over small universes.

use std::sync::Arc;

use softtopo::maps::SoftFunction;
use softtopo::{oracle, SoftSet, Universe};

/// Φ̃ followed by every full-support soft set.
fn s_members(u: &Arc<Universe>) -> Vec<SoftSet> {
    let nonempty = u.full_mask() as usize;
    let total = nonempty.pow(u.param_count() as u32);
    let mut out = vec![SoftSet::null(u)];
    for mut code in 0..total {
        let masks = (0..u.param_count())
            .map(|_| {
                let m = (code % nonempty) as u64 + 1;
                code /= nonempty;
                m
            })
            .collect();
        out.push(SoftSet::from_masks(u, masks).unwrap());
    }
    out
}

fn all_sets(u: &Arc<Universe>) -> Vec<SoftSet> {
    let width = u.full_mask() as usize + 1;
    (0..width.pow(u.param_count() as u32))
        .map(|mut code| {
            let masks = (0..u.param_count())
                .map(|_| {
                    let m = (code % width) as u64;
                    code /= width;
                    m
                })
                .collect();
            SoftSet::from_masks(u, masks).unwrap()
        })
        .collect()
}

fn check_pairs(u: &Arc<Universe>) -> usize {
    let members = s_members(u);
    for f in &members {
        assert_eq!(f.e_complement().unwrap(), oracle::e_complement(f).unwrap(), "complement of {f}");
        for g in &members {
            assert_eq!(f.e_union(g).unwrap(), oracle::e_union(f, g).unwrap(), "{f} ∪ {g}");
            assert_eq!(f.e_intersection(g).unwrap(), oracle::e_intersection(f, g).unwrap(), "{f} ∩ {g}");
        }
    }
    members.len()
}

#[test]
fn three_points_two_params() {
    let u = Universe::indexed(3, 2).unwrap();
    assert_eq!(check_pairs(&u), 50);
}

#[test]
fn three_points_three_params() {
    let u = Universe::indexed(3, 3).unwrap();
    assert_eq!(check_pairs(&u), 344);
}

#[test]
fn two_points_four_params() {
    let u = Universe::indexed(2, 4).unwrap();
    assert_eq!(check_pairs(&u), 82);
}

#[test]
fn images_and_preimages() {
    let dom = Universe::indexed(3, 2).unwrap();
    let cod = Universe::new(["q0", "q1"], dom.params().to_vec()).unwrap();
    let sources = all_sets(&dom);
    let targets = all_sets(&cod);
    let point_maps: Vec<Vec<usize>> = (0..8).map(|c| (0..3).map(|i| c >> i & 1).collect()).collect();
    for a in &point_maps {
        for b in &point_maps {
            let f = SoftFunction::from_indices(&dom, &cod, vec![a.clone(), b.clone()]).unwrap();
            for s in &sources {
                assert_eq!(f.image(s).unwrap(), oracle::image(&f, s).unwrap());
            }
            for t in &targets {
                let slicewise = f.preimage(t).unwrap().collapse();
                assert_eq!(slicewise, oracle::preimage(&f, t).unwrap());
            }
        }
    }
}
