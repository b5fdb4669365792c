mod common;

use common::{naive_support, small_models};
use inqlab::algebra::{is_fcgw, validate, AlgebraHom, Flavour};
use inqlab::corpus::random_corpus;
use inqlab::duality::{
    canonical_core_valuation, canonical_frame_valuation, dual_algebra, dual_map, dual_truth_set, round_trip_check,
};
use inqlab::team::{check_map, enumerate_frames, FrameMap, MapRole, TeamEvaluator};
use inqlab::{Frame, Team};

const FLAVOURS: [Flavour; 2] = [Flavour::Inq, Flavour::Dep];

/// Nonempty families of upsets closed under subsets, counted by brute force.
fn count_nonempty_downsets(f: &Frame) -> usize {
    let ups = f.upsets();
    let n = ups.len();
    (1u64..1 << n)
        .filter(|&fam| {
            (0..n)
                .filter(|&i| fam >> i & 1 == 1)
                .all(|i| (0..n).all(|j| !ups[j].is_subset(ups[i]) || fam >> j & 1 == 1))
        })
        .count()
}

#[test]
fn dual_algebras_have_the_right_size_and_validate() {
    for f in enumerate_frames(3, true) {
        for flavour in FLAVOURS {
            let d = dual_algebra(&f, flavour).unwrap();
            assert_eq!(d.algebra.len(), count_nonempty_downsets(&f));
            assert_eq!(validate(&d.algebra, flavour), Ok(()), "{:?}", f.canonical_code());
            assert!(is_fcgw(&d.algebra));
        }
    }
}

#[test]
fn principal_downsets_are_the_core_in_order() {
    for f in enumerate_frames(4, true) {
        let d = dual_algebra(&f, Flavour::Inq).unwrap();
        let a = &d.algebra;
        let ups = f.upsets();
        let images: Vec<usize> = ups.iter().map(|&t| d.principal(t)).collect();
        let mut sorted = images.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, a.core(), "core is exactly the principal downsets");
        for (i, &s) in ups.iter().enumerate() {
            for (j, &t) in ups.iter().enumerate() {
                assert_eq!(s.is_subset(t), a.leq(images[i], images[j]));
            }
        }
    }
}

#[test]
fn every_element_joins_its_maximal_upsets() {
    for f in enumerate_frames(3, true) {
        let d = dual_algebra(&f, Flavour::Dep).unwrap();
        let a = &d.algebra;
        for e in a.elems() {
            let joined = d
                .maximal_upsets(e)
                .into_iter()
                .map(|t| d.principal(t))
                .fold(a.zero(), |x, y| a.join(x, y));
            assert_eq!(joined, e);
        }
    }
}

#[test]
fn tensor_of_principals_is_the_union() {
    for f in enumerate_frames(3, true) {
        let d = dual_algebra(&f, Flavour::Dep).unwrap();
        for &s in &f.upsets() {
            for &t in &f.upsets() {
                assert_eq!(
                    d.algebra.tensor(d.principal(s), d.principal(t)),
                    Some(d.principal(s.union(t)))
                );
            }
        }
    }
}

fn total_maps(src: &Frame, tgt: &Frame) -> Vec<Vec<Option<usize>>> {
    let k = tgt.size();
    (0..k.pow(src.size() as u32))
        .map(|mut code| {
            (0..src.size())
                .map(|_| {
                    let c = code % k;
                    code /= k;
                    Some(c)
                })
                .collect()
        })
        .collect()
}

fn pmorphisms(src: &Frame, tgt: &Frame) -> Vec<FrameMap> {
    total_maps(src, tgt)
        .into_iter()
        .map(|map| FrameMap {
            source: src.clone(),
            target: tgt.clone(),
            map,
            role: MapRole::PMorphism,
        })
        .filter(|p| check_map(p).is_ok())
        .collect()
}

#[test]
fn dualisation_is_contravariantly_functorial() {
    let frames = enumerate_frames(3, true);
    for flavour in FLAVOURS {
        for f in &frames {
            let id = dual_map(&FrameMap::identity(f, MapRole::PMorphism), flavour).unwrap();
            assert_eq!(id.hom.map, AlgebraHom::identity(&id.domain.algebra, flavour).map);
        }
        for f in frames.iter().filter(|f| f.size() <= 2) {
            for g in &frames {
                for h in frames.iter().filter(|h| h.size() <= 2) {
                    for p in pmorphisms(f, g) {
                        for q in pmorphisms(g, h) {
                            let whole = dual_map(&q.compose(&p), flavour).unwrap();
                            let dp = dual_map(&p, flavour).unwrap();
                            let dq = dual_map(&q, flavour).unwrap();
                            assert_eq!(whole.hom.map, dp.hom.compose(&dq.hom).map);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn dual_truth_sets_are_the_supporting_upsets() {
    let corpus = random_corpus(7, 60);
    for m in small_models(3, &["p", "q"]) {
        let ups = m.frame().upsets();
        for phi in &corpus {
            for flavour in FLAVOURS {
                if flavour == Flavour::Inq && !phi.is_intuitionistic() {
                    continue;
                }
                let got = dual_truth_set(&m, phi, flavour).unwrap();
                let want: Vec<Team> = ups
                    .iter()
                    .copied()
                    .filter(|t| naive_support(&m, &t.worlds().collect::<Vec<_>>(), phi))
                    .collect();
                assert_eq!(got, want, "{phi}");
            }
        }
    }
}

#[test]
fn canonical_valuations_round_trip() {
    let corpus = random_corpus(13, 40);
    for m in small_models(3, &["p", "q"]) {
        for flavour in FLAVOURS {
            let (d, mu) = canonical_core_valuation(&m, flavour).unwrap();
            let back = canonical_frame_valuation(&d.algebra, &mu).unwrap();
            let iso = round_trip_check(m.frame(), flavour).unwrap();
            for p in ["p", "q"] {
                for w in 0..m.frame().size() {
                    assert_eq!(m.truth(p).contains(w), back.truth(p).contains(iso[w]));
                }
            }
            for phi in corpus
                .iter()
                .filter(|f| flavour == Flavour::Dep || f.is_intuitionistic())
            {
                let mut ev = TeamEvaluator::new(&m, phi);
                let mut ev2 = TeamEvaluator::new(&back, phi);
                for t in m.frame().full_team().subsets() {
                    let image = Team::from_worlds(t.worlds().map(|w| iso[w]));
                    assert_eq!(ev.supports(t).unwrap(), ev2.supports(image).unwrap(), "{phi}");
                }
            }
        }
    }
}
