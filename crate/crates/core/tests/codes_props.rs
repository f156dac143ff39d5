use std::sync::Arc;

use editcodes::codes::*;
use editcodes::BitSeq;
use num_rational::Ratio;
use proptest::prelude::*;

fn relaxed() -> LayoutOptions {
    LayoutOptions {
        ell: Some(4),
        eps: Some(Ratio::new(1, 4)),
        block: Some(3),
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn anchored_class_contains_anchor(w in any::<u64>(), n in 8usize..=60, which in 0usize..9) {
        let x = BitSeq::from_word(w as u128 & ((1u128 << n) - 1), n).unwrap();
        let c = Construction::ALL[which];
        let opts = match c {
            Construction::C2dBounded | Construction::CdsBounded => LayoutOptions { block: Some(5), ..Default::default() },
            _ => LayoutOptions::default(),
        };
        let l = Arc::new(CodeLayout::new(c, n, opts).unwrap());
        if let Some(sig) = l.signature(&x) {
            let spec = l.with_residues(sig).unwrap();
            prop_assert!(spec.member(&x));
            prop_assert!(spec.member(&x));
            prop_assert!(spec.breakdown(&x).iter().all(|r| r.ok));
            let again: CodeSpec = spec.to_kv().parse().unwrap();
            prop_assert_eq!(again, spec);
        } else {
            prop_assert_eq!(c, Construction::CdsList);
            prop_assert!(x.is_constant());
        }
    }

    #[test]
    fn c2e_implies_c2s(w in any::<u64>(), n in 6usize..=40) {
        let x = BitSeq::from_word(w as u128 & ((1u128 << n) - 1), n).unwrap();
        let l = Arc::new(CodeLayout::new(Construction::C2e, n, LayoutOptions::default()).unwrap());
        let spec = l.anchored(&x).unwrap();
        let b = [spec.residue("a0").unwrap(), spec.residue("a1").unwrap(), spec.residue("a2").unwrap()];
        prop_assert!(c2s_member(&x, b).unwrap());
    }
}

#[test]
fn lev_classes_partition() {
    for n in 1..=12 {
        let l = CodeLayout::new(Construction::Lev, n, LayoutOptions::default()).unwrap();
        let cls = classes(&l, 20).unwrap();
        assert_eq!(cls.iter().map(|c| c.1.len()).sum::<usize>(), 1 << n);
    }
}

#[test]
fn every_construction_partitions_eligible_words() {
    for c in Construction::ALL {
        let opts = match c {
            Construction::Lev | Construction::C2s | Construction::CdsList => LayoutOptions::default(),
            Construction::C2dBounded | Construction::CdsBounded => LayoutOptions { block: Some(3), ..Default::default() },
            _ => relaxed(),
        };
        let l = CodeLayout::new(c, 9, opts).unwrap();
        let stats = partition_stats(&l, 20).unwrap();
        let eligible = BitSeq::all(9).filter(|x| l.eligible(x)).count() as u64;
        assert_eq!(stats.eligible, eligible, "{c}");
        assert_eq!(stats.histogram.values().sum::<u128>(), stats.residue_tuples, "{c}");
        assert!(stats.max_size >= 1);
    }
}

#[test]
fn enumeration_limit() {
    let spec: CodeSpec = "code=LEV n=25 a=0".parse().unwrap();
    assert!(enumerate_code(&spec).is_err());
    let empty: CodeSpec = "code=C2S n=3 b0=4 b1=0 b2=0".parse().unwrap();
    assert!(enumerate_code(&empty).unwrap().is_empty());
}

#[test]
fn paper_mode_is_recorded() {
    let spec: CodeSpec = "code=CDS n=16 a0=0 a1=0 b0=0 b1=0 b2=0 c1=0 c2=0 c3=0 c1p=0 c2p=0 c3p=0"
        .parse()
        .unwrap();
    let kv = spec.to_kv();
    assert!(kv.contains("mode=paper"));
    assert!(kv.contains("ell=5184"));
    assert!(kv.contains("P=31122"));
    let relaxed: CodeSpec = "code=CDS n=16 P=4 a0=0 a1=0 b0=0 b1=0 b2=0 c1=0 c2=0 c3=0 c1p=0 c2p=0 c3p=0"
        .parse()
        .unwrap();
    assert!(relaxed.to_kv().contains("mode=relaxed"));
}
