use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use fibtree::counting::{cache, check_identity, count_pair, seq_a11, Counter, Identity, Sequences};
use fibtree::tree::Oracle;
use fibtree::{Error, Pair};

#[test]
fn published_small_values() {
    let mut c = Counter::new();
    let a: Vec<BigInt> = (0..6).map(|n| c.a11(n)).collect();
    assert_eq!(a, [1, 5, 27, 152, 879, 5181].map(BigInt::from));
    let d: Vec<BigInt> = (0..5).map(|n| c.d(n)).collect();
    assert_eq!(d, [-3, -13, -64, -337, -1851].map(BigInt::from));
    let s: Vec<BigInt> = (0..6).map(|n| c.s(n)).collect();
    assert_eq!(s, [0, 5, 2, 7, 30, 143].map(BigInt::from));
    let b: Vec<BigInt> = (0..6).map(|n| c.b(n)).collect();
    assert_eq!(b, [1, 1, 3, 12, 55, 273].map(BigInt::from));
}

#[test]
fn nested_sequences_up_to_2000() {
    let seqs = Sequences::with_len(2000);
    for n in 2..=2000 {
        assert!(
            seqs.s(n) <= seqs.b(n) && seqs.b(n) <= seqs.a11(n),
            "n = {n}"
        );
    }
}

#[test]
fn ratios_increase_up_to_2000() {
    let seqs = Sequences::with_len(2002);
    for n in 2..2000 {
        assert!(
            seqs.s(n + 1) * seqs.s(n + 1) < seqs.s(n) * seqs.s(n + 2),
            "S at {n}"
        );
    }
    for n in 1..2000 {
        assert!(
            seqs.a11(n + 1) * seqs.a11(n + 1) < seqs.a11(n) * seqs.a11(n + 2),
            "A at {n}"
        );
    }
}

#[test]
fn family_support_is_exactly_reachable_depths() {
    let mut c = Counter::new();
    for k in 0..=12 {
        for n in 0..=20 {
            let v = c.ak(k, n);
            let reachable = 3 * n + k % 3 >= k;
            assert_eq!(v.is_positive(), reachable, "A_{k}({n}) = {v}");
            assert!(!v.is_negative());
        }
    }
}

#[test]
fn family_rows_match_convolution_up_to_40() {
    let mut c = Counter::new();
    for n in 0..=40 {
        assert!(
            c.check_identity(Identity::CoprimePair3, n).unwrap(),
            "n = {n}"
        );
    }
}

#[test]
fn family_matches_oracle_for_a_few_pairs() {
    let oracle = Oracle::new(21);
    for p in [
        Pair::new(1, 2),
        Pair::new(2, 1),
        Pair::new(3, 2),
        Pair::new(5, 3),
        Pair::new(3, 7),
    ] {
        for n in 0..=6u32 {
            let m = fibtree::tree::parity_class(p).unwrap().m();
            if 3 * n + m > 21 {
                continue;
            }
            let brute = oracle.count(p, n).unwrap();
            assert_eq!(
                count_pair(p, n as usize).unwrap(),
                BigInt::from(brute),
                "{p} at {n}"
            );
        }
    }
}

#[test]
fn counting_rejects_bad_pairs() {
    assert!(matches!(
        count_pair(Pair::new(4, 6), 3),
        Err(Error::NotCoprime(_))
    ));
    assert!(matches!(
        count_pair(Pair::new(0, 1), 3),
        Err(Error::DegeneratePair(_))
    ));
}

#[test]
fn identities_by_name() {
    assert!(check_identity("lemma61", 0).unwrap());
    assert!(check_identity("AbFormula", 2).unwrap());
    assert!(check_identity("eqn11", 17).unwrap());
    assert!(matches!(
        check_identity("lemma99", 1),
        Err(Error::UnknownIdentity(_))
    ));
}

#[test]
fn a11_reaches_ten_thousand() {
    let v = seq_a11(10_000);
    // About 8,300 decimal digits.
    let digits = v.to_string().len();
    assert!((8_200..8_400).contains(&digits), "{digits} digits");
}

#[test]
fn cache_file_roundtrip_and_tamper_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fibtree.cache");
    let seqs = Sequences::with_len(500);
    cache::save(&seqs, &path).unwrap();
    let back = cache::load(&path).unwrap();
    assert_eq!(back.a11(500), seqs.a11(500));
    assert_eq!(back.d(499), seqs.d(499));

    let mut bytes = std::fs::read(&path).unwrap();
    let last = bytes.len() - 40;
    bytes[last] ^= 1;
    std::fs::write(&path, &bytes).unwrap();
    assert!(matches!(cache::load(&path), Err(Error::Cache(_))));
    assert!(cache::load(&dir.path().join("missing")).is_err());
}

#[test]
fn d_is_negative() {
    let seqs = Sequences::with_len(300);
    for n in 0..=300 {
        assert!(seqs.d(n) < &BigInt::zero(), "D({n})");
    }
}
