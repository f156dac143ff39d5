mod support;

use editcodes::balls::*;
use editcodes::BitSeq;
use proptest::prelude::*;
use support::*;

fn budgets(max: usize) -> Vec<ChannelBudget> {
    let mut v = Vec::new();
    for i in 0..=max {
        for d in 0..=max - i {
            for s in 0..=max - i - d {
                v.push(ChannelBudget::of(i, d, s));
            }
        }
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_ball_matches_closure_longer_words(w in 0u128..(1 << 12), n in 9usize..=12) {
        let x = BitSeq::from_word(w & ((1 << n) - 1), n).unwrap();
        let s = to_str(&x);
        for b in budgets(2) {
            let got: Vec<String> = mixed_ball(&x, &b).unwrap().iter().map(to_str).collect();
            let want: Vec<String> = bfs_ball(&s, b.ins, b.del, b.sub).into_iter().collect();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn edit_ball_matches_closure(w in 0u128..(1 << 10), n in 2usize..=10) {
        let x = BitSeq::from_word(w & ((1 << n) - 1), n).unwrap();
        let got: std::collections::BTreeSet<String> = edit_ball(&x, EditBudget(2)).unwrap().iter().map(to_str).collect();
        let want = bfs_edit_ball(&to_str(&x), 2);
        prop_assert_eq!(got, want);
    }
}

#[test]
fn three_error_budgets_match_closure() {
    for n in 0..=6 {
        for s in strings(n) {
            let x = from_str(&s);
            for b in budgets(3) {
                if b.del > n {
                    continue;
                }
                let got: Vec<String> = mixed_ball(&x, &b).unwrap().iter().map(to_str).collect();
                let want: Vec<String> = bfs_ball(&s, b.ins, b.del, b.sub).into_iter().collect();
                assert_eq!(got, want, "{s} {b}");
            }
        }
    }
}

#[test]
fn two_edit_ball_lengths() {
    for x in BitSeq::all(7) {
        let lens: std::collections::BTreeSet<usize> =
            edit_ball(&x, EditBudget(2)).unwrap().iter().map(|z| z.len()).collect();
        assert_eq!(lens.into_iter().collect::<Vec<_>>(), vec![5, 6, 7, 8, 9]);
    }
}

#[test]
fn channel_output_in_ball_over_many_seeds() {
    let x = from_str("0110100111");
    let budgets = [
        ChannelBudget::of(0, 0, 0),
        ChannelBudget::of(0, 2, 0),
        ChannelBudget::of(1, 1, 1),
        ChannelBudget::of(2, 0, 0),
        ChannelBudget::of(0, 1, 1),
    ];
    let balls: Vec<Ball> = budgets.iter().map(|b| mixed_ball(&x, b).unwrap()).collect();
    for seed in 0..10_000u64 {
        let b = &budgets[(seed % 5) as usize];
        let out = simulate_channel(&x, b, seed).unwrap();
        assert!(balls[(seed % 5) as usize].contains(&out.received));
        assert_eq!(apply_ops(&x, &out.ops).unwrap(), out.received);
    }
    assert_eq!(simulate_channel(&x, &budgets[0], 7).unwrap().received, x);
}

#[test]
fn balls_intersect_examples() {
    let b = ChannelBudget::of(0, 2, 0);
    assert!(balls_intersect(&from_str("001001"), &from_str("000110"), &b).unwrap());
    assert!(!balls_intersect(&from_str("0000"), &from_str("1111"), &ChannelBudget::of(0, 1, 0)).unwrap());
    assert!(balls_intersect(&from_str("0101"), &from_str("0101"), &ChannelBudget::of(0, 1, 0)).unwrap());
    assert!(balls_intersect(&from_str("0101"), &from_str("010"), &b).is_err());
}
