mod common;

use common::{naive_support, small_models};
use inqlab::corpus::{random_corpus, standard_corpus, DEFAULT_SEED};
use inqlab::team::{
    check_map, countermodel_search, enumerate_frames, eval_team, flatness_check, frames_with_worlds, FrameMap, MapRole,
    SearchOptions, SearchOutcome, Team, TeamEvaluator,
};
use inqlab::{parse, Formula, Frame};

#[test]
fn evaluator_matches_naive_clauses() {
    let corpus = random_corpus(11, 60);
    for m in small_models(2, &["p", "q"]) {
        for phi in &corpus {
            let mut ev = TeamEvaluator::new(&m, phi);
            for t in m.frame().full_team().subsets() {
                let ws: Vec<usize> = t.worlds().collect();
                assert_eq!(ev.supports(t).unwrap(), naive_support(&m, &ws, phi), "{phi} at {ws:?}");
            }
        }
    }
}

#[test]
fn downward_closure_and_empty_team() {
    let corpus = standard_corpus(DEFAULT_SEED);
    for m in small_models(2, &["p", "q"]) {
        let f = m.frame();
        for phi in corpus.iter().step_by(3) {
            let mut ev = TeamEvaluator::new(&m, phi);
            assert!(ev.supports(Team::EMPTY).unwrap());
            for t in f.full_team().subsets() {
                if ev.supports(t).unwrap() {
                    for s in f.r_image(t).unwrap().subsets() {
                        assert!(ev.supports(s).unwrap(), "{phi}");
                    }
                }
            }
        }
    }
}

#[test]
fn support_only_depends_on_the_generated_upset() {
    let corpus = random_corpus(5, 80);
    for m in small_models(3, &["p"]) {
        let f = m.frame();
        for phi in &corpus {
            let mut ev = TeamEvaluator::new(&m, phi);
            for t in f.full_team().subsets() {
                let up = f.r_image(t).unwrap();
                assert_eq!(ev.supports(t).unwrap(), ev.supports(up).unwrap(), "{phi}");
            }
        }
    }
}

#[test]
fn standard_formulas_are_flat() {
    for m in small_models(3, &["p", "q"]) {
        for phi in standard_corpus(DEFAULT_SEED).iter().filter(|f| f.is_standard()) {
            assert!(flatness_check(&m, phi), "{phi}");
        }
    }
}

#[test]
fn team_outside_frame_is_rejected() {
    let m = small_models(1, &["p"]).remove(0);
    assert!(eval_team(&m, Team(0b10), &parse("p").unwrap()).is_err());
}

#[test]
fn enumeration_counts_are_cumulative() {
    let exact: Vec<usize> = (1..=4).map(|n| frames_with_worlds(n, true).len()).collect();
    assert_eq!(exact, vec![1, 2, 5, 16]);
    assert_eq!(enumerate_frames(4, true).len(), 24);
    assert_eq!(frames_with_worlds(3, false).len(), 19);
}

#[test]
fn search_is_independent_of_jobs() {
    for text in ["~~p -> p", "p \\/ ~p", "(p -> q) \\/ (q -> p)", "dep(p;q)"] {
        let phi = parse(text).unwrap();
        let mut opts = SearchOptions::new(3);
        let seq = countermodel_search(&phi, &opts);
        opts.jobs = Some(3);
        assert_eq!(countermodel_search(&phi, &opts), seq, "{text}");
    }
}

#[test]
fn classical_search_only_sees_discrete_frames() {
    let mut opts = SearchOptions::new(3);
    opts.classical = true;
    let phi = parse("~~p -> p").unwrap();
    assert_eq!(countermodel_search(&phi, &opts), SearchOutcome::ValidUpTo(3));
    let phi = parse("p \\/ ~p").unwrap();
    let found = countermodel_search(&phi, &opts);
    let (m, _) = found.countermodel().unwrap();
    assert!(m.frame().is_discrete());
}

#[test]
fn countermodels_are_real() {
    for phi in random_corpus(21, 40) {
        if let SearchOutcome::Countermodel { model, team } = countermodel_search(&phi, &SearchOptions::new(2)) {
            let ws: Vec<usize> = team.worlds().collect();
            assert!(!naive_support(&model, &ws, &phi), "{phi}");
        }
    }
}

fn all_maps(src: &Frame, tgt: &Frame, partial: bool) -> Vec<Vec<Option<usize>>> {
    let choices = tgt.size() + usize::from(partial);
    let mut out = Vec::new();
    let total = choices.pow(src.size() as u32);
    for mut code in 0..total {
        let mut map = Vec::new();
        for _ in 0..src.size() {
            let c = code % choices;
            code /= choices;
            map.push((c < tgt.size()).then_some(c));
        }
        out.push(map);
    }
    out
}

#[test]
fn pmorphisms_compose() {
    let frames = enumerate_frames(2, true);
    for f in &frames {
        for g in &frames {
            for h in &frames {
                for m1 in all_maps(f, g, false) {
                    let p = FrameMap {
                        source: f.clone(),
                        target: g.clone(),
                        map: m1,
                        role: MapRole::PMorphism,
                    };
                    if check_map(&p).is_err() {
                        continue;
                    }
                    for m2 in all_maps(g, h, false) {
                        let q = FrameMap {
                            source: g.clone(),
                            target: h.clone(),
                            map: m2,
                            role: MapRole::PMorphism,
                        };
                        if check_map(&q).is_ok() {
                            assert_eq!(check_map(&q.compose(&p)), Ok(()));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn kohler_maps_with_the_empty_map() {
    let f = Frame::chain(2);
    let g = Frame::discrete(2);
    assert_eq!(check_map(&FrameMap::empty(&f, &g)), Ok(()));
    let count = all_maps(&f, &g, true)
        .into_iter()
        .filter(|m| {
            check_map(&FrameMap {
                source: f.clone(),
                target: g.clone(),
                map: m.clone(),
                role: MapRole::Kohler,
            })
            .is_ok()
        })
        .count();
    assert!(count >= 1);
}

#[test]
fn disjunction_entails_tensor() {
    // a team supporting p is covered by itself and the empty team
    let f: Formula = parse("(p \\/ q) -> (p (*) q)").unwrap();
    for m in small_models(2, &["p", "q"]) {
        let ws: Vec<usize> = m.frame().full_team().worlds().collect();
        assert!(naive_support(&m, &ws, &f));
    }
}
