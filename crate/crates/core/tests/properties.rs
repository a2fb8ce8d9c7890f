mod common;

use acg_core::catalog::{self, load_catalog};
use acg_core::resolve::apply_log;
use acg_core::{Command, Engine, HandSelection, MatchState, Phase, Player, Step, TurnPlan};
use common::*;
use proptest::prelude::*;

fn garbage_command(e: &Engine, rng: &mut Lcg) -> Command {
    let cat = e.catalog();
    let player = if rng.below(2) == 0 { Player::A } else { Player::B };
    let any_move = |rng: &mut Lcg| {
        if rng.below(8) == 0 {
            "bogus".to_string()
        } else {
            cat.moves[rng.below(cat.moves.len())].id.clone()
        }
    };
    match rng.below(9) {
        0 => Command::SelectHand {
            player,
            selection: HandSelection {
                prompt_id: cat.prompts[rng.below(cat.prompts.len())].id.clone(),
                archetype_id: cat.archetypes[rng.below(cat.archetypes.len())].id.clone(),
                first_move_id: any_move(rng),
                premade_ids: [
                    cat.premade_cards[rng.below(3)].id.clone(),
                    cat.premade_cards[rng.below(3)].id.clone(),
                ],
            },
        },
        1 => Command::SelectRoundMove {
            player,
            move_id: any_move(rng),
        },
        2 => Command::AttachIllustration {
            player,
            round: rng.below(5) as u8,
            asset: art("junk"),
        },
        3 => Command::ExpireIllustration {
            round: rng.below(5) as u8,
        },
        4 => {
            let mut plan = TurnPlan::pass();
            for _ in 0..rng.below(4) {
                let target = if rng.below(3) == 0 { None } else { Some(rng.below(4) as u8) };
                plan = plan.with(rng.below(4) as u8, any_move(rng), target);
            }
            Command::SubmitPlan { player, plan }
        }
        5 => Command::ResolveTurn,
        6 => Command::ConcludeRound,
        7 => Command::DeclareTie { player },
        _ => Command::Forfeit { player },
    }
}

fn battle_round(phase: Phase) -> Option<u8> {
    match phase {
        Phase::AwaitPlans { round, .. } | Phase::RoundOver { round } => Some(round),
        _ => None,
    }
}

fn check_invariants(e: &Engine, prev: &MatchState, next: &MatchState, log: Option<&acg_core::ResolutionLog>) {
    for (side, prev_side) in next.players.iter().zip(&prev.players) {
        if next.phase != Phase::Setup {
            assert_eq!(side.hand.len(), 3);
        }
        for (card, before) in side.hand.iter().zip(&prev_side.hand) {
            assert!(card.hp <= card.max_hp);
            if battle_round(prev.phase).is_some() && battle_round(prev.phase) == battle_round(next.phase) {
                assert!(card.hp <= before.hp, "healing inside a round");
            }
        }
        if let Some(custom) = side.custom_card() {
            let expected = match next.phase {
                Phase::Customize { round } => round as usize - 1..=round as usize,
                Phase::Setup => 1..=1,
                _ => next.round() as usize..=next.round() as usize,
            };
            assert!(expected.contains(&custom.moves.len()), "{} moves in {}", custom.moves.len(), next.phase);
            if matches!(next.phase, Phase::AwaitPlans { .. } | Phase::RoundOver { .. }) {
                assert!(custom.moves.iter().all(|m| m.cover_art.is_some()));
            }
        }
    }
    let wins: usize = next.players.iter().map(|p| p.round_wins as usize).sum();
    assert!(wins + next.drawn_rounds() <= 3);
    assert_eq!(next.phase == Phase::MatchOver, next.result.is_some());
    if let Some(log) = log {
        for step in &log.steps {
            let (card, move_id) = match step {
                Step::DiceRolled { card, move_id, .. } => (*card, move_id),
                Step::DamageDealt { from, to, move_id, reflected, .. } => {
                    (if *reflected { *to } else { *from }, move_id)
                }
                Step::AttackFizzled { attacker, move_id, .. } => (*attacker, move_id),
                _ => continue,
            };
            let owned = prev.card(card).unwrap().moves.iter().find(|m| &m.move_id == move_id).unwrap();
            assert!(owned.activation_round <= log.round, "gating violated");
        }
        assert_eq!(&apply_log(prev, log), next);
    }
    let _ = e;
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_command_streams_keep_every_invariant(seed in any::<u64>(), driver in any::<u64>(), noise in 0usize..4) {
        let e = engine();
        let mut rng = Lcg(driver);
        let mut s = e.new_match(seed);
        let mut accepted = Vec::new();
        for _ in 0..400 {
            let cmd = if rng.below(4) < noise {
                garbage_command(&e, &mut rng)
            } else {
                match random_legal_command(&e, &s, &mut rng) {
                    Some(c) => c,
                    None => break,
                }
            };
            let before = s.clone();
            match e.apply(&s, &cmd) {
                Ok(applied) => {
                    check_invariants(&e, &s, &applied.state, applied.log.as_ref());
                    accepted.push(cmd);
                    s = applied.state;
                }
                Err(_) => prop_assert_eq!(&s, &before),
            }
        }
        prop_assert_eq!(e.replay(seed, &accepted).unwrap(), s);
    }

    #[test]
    fn opponent_projection_ignores_plan_content(seed in any::<u64>(), driver in any::<u64>(), turns in 0usize..6) {
        let e = engine();
        let mut rng = Lcg(driver);
        let mut s = battle_ready(&e, seed, &sel_a(), &sel_b());
        for _ in 0..turns {
            let a = random_plan(&e, &s, Player::A, &mut rng);
            let b = random_plan(&e, &s, Player::B, &mut rng);
            let (next, _) = e.resolve_turn(&submit_both(&e, &s, &a, &b)).unwrap();
            if !matches!(next.phase, Phase::AwaitPlans { .. }) {
                break;
            }
            s = next;
        }
        prop_assume!(matches!(s.phase, Phase::AwaitPlans { .. }));
        let p1 = random_plan(&e, &s, Player::A, &mut rng);
        let p2 = random_plan(&e, &s, Player::A, &mut rng);
        let s1 = e.submit_plan(&s, Player::A, &p1).unwrap();
        let s2 = e.submit_plan(&s, Player::A, &p2).unwrap();
        let v1 = serde_json::to_vec(&e.project(&s1, Player::B)).unwrap();
        let v2 = serde_json::to_vec(&e.project(&s2, Player::B)).unwrap();
        prop_assert_eq!(v1, v2);
    }

    #[test]
    fn submit_accepts_exactly_the_enumerated_plans(seed in any::<u64>(), driver in any::<u64>(), hp in proptest::collection::vec(0u32..4, 6)) {
        let e = engine();
        let mut rng = Lcg(driver);
        let mut s = battle_ready(&e, seed, &sel_a(), &sel_b());
        set_hp(&mut s, Player::A, [hp[0], hp[1], hp[2]]);
        set_hp(&mut s, Player::B, [hp[3], hp[4], hp[5]]);
        let legal = e.legal_plans(&s, Player::A);
        let all_moves: Vec<String> = e.catalog().moves.iter().map(|m| m.id.clone()).collect();
        for _ in 0..50 {
            let mut plan = TurnPlan::pass();
            for _ in 0..rng.below(4) {
                let slot = rng.below(3) as u8;
                let card = &s.side(Player::A).hand[slot as usize];
                let mv = if rng.below(3) == 0 {
                    all_moves[rng.below(all_moves.len())].clone()
                } else {
                    card.moves[rng.below(card.moves.len())].move_id.clone()
                };
                let target = if rng.below(4) == 0 { None } else { Some(rng.below(3) as u8) };
                plan = plan.with(slot, mv, target);
            }
            let accepted = e.submit_plan(&s, Player::A, &plan).is_ok();
            prop_assert_eq!(accepted, legal.allows(&plan), "{:?}", plan);
        }
    }

    #[test]
    fn catalog_json_round_trips(hp_bump in 0u32..10, window in 1u8..=10, magnitude in 1u32..20) {
        let mut c = catalog::builtin_catalog();
        c.archetypes[0].base_hp += hp_bump;
        for m in &mut c.moves {
            if m.kind.is_defense() { m.dice_window = window } else { m.magnitude = magnitude }
        }
        let back = load_catalog(c.to_json().as_bytes()).unwrap();
        prop_assert_eq!(back, c);
    }
}
