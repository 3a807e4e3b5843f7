use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use fibtree::asymptotics::{
    ratio_cn, robbins_bounds, s_by_recurrence, t_closed, CertId, CertificateRecord, Certifier,
    Verdict,
};
use fibtree::counting::Counter;
use fibtree::interval::Dyadic;

fn factorial(n: u64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

#[test]
fn robbins_brackets_small_factorials() {
    for n in [1u64, 10] {
        let (lo, hi) = robbins_bounds(n as usize, 128).unwrap();
        let f = Dyadic::from_int(factorial(n));
        assert!(lo.hi() < &f && &f < hi.lo(), "n = {n}: {lo} {hi}");
    }
    let mut cert = Certifier::default();
    assert_eq!(
        cert.certify(CertId::Robbins, 500).unwrap().verdict,
        Verdict::Holds
    );
}

#[test]
fn t_vanishes_for_large_k() {
    let bound = BigRational::new(BigInt::from(1), BigInt::from(1_000_000));
    for k in 90..=150 {
        assert!(t_closed(k).abs() < bound, "t_{k}");
    }
}

#[test]
fn s_recurrence_is_stable_prefix() {
    let long = s_by_recurrence(30);
    let short = s_by_recurrence(12);
    assert_eq!(&long[..=12], &short[..]);
}

#[test]
fn c1_is_five_over_27_quarters() {
    let mut c = Counter::new();
    let iv = ratio_cn(&mut c, 1, 1e-20).unwrap();
    let exact = 5.0 / 6.75;
    assert!((iv.mid_f64() - exact).abs() < 1e-15, "{iv}");
}

#[test]
fn cn_stays_inside_theorem_a_envelope() {
    // C_n / C against the relative envelope 1 - 1387/(72n) ... + 5548/(9n^2).
    let mut cert = Certifier::default();
    let mut counter = Counter::new();
    for n in [100usize, 101, 250, 1000, 2500, 5000] {
        let c = cert.certify(CertId::ThmA, n).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
        let cn = ratio_cn(&mut counter, n, 1e-12).unwrap().mid_f64();
        let base = 243.0 / (4.0 * (3.0 * std::f64::consts::PI).sqrt());
        let nf = n as f64;
        let lo = base * (1.0 - 1387.0 / (72.0 * nf));
        let hi = base * (1.0 - 1387.0 / (72.0 * nf) + 5548.0 / (9.0 * nf * nf));
        assert!(lo < cn && cn < hi, "n = {n}: {lo} < {cn} < {hi}");
    }
}

#[test]
fn raising_precision_never_flips_a_verdict() {
    for id in [CertId::Binom3n, CertId::Cor31S, CertId::DIneq, CertId::A12] {
        for n in [100usize, 400, 1500] {
            let base = Certifier::default().certify(id, n).unwrap();
            for start in [256, 1024] {
                let hi = Certifier::default()
                    .with_start_precision(start)
                    .certify(id, n)
                    .unwrap();
                if base.verdict != Verdict::Undecided {
                    assert_eq!(hi.verdict, base.verdict, "{id} at {n} from {start} bits");
                }
            }
        }
    }
}

#[test]
fn precision_cap_yields_undecided_not_silence() {
    // 16 bits cannot separate A11(n) from the tight upper bound near n = 5000.
    let mut cert = Certifier::new(16).with_start_precision(16);
    let c = cert.certify(CertId::ThmA, 5000).unwrap();
    assert_eq!(c.verdict, Verdict::Undecided);
    assert_eq!(c.precision, 16);
}

#[test]
fn diagnostic_envelope_holds_in_range() {
    let mut cert = Certifier::default();
    assert!(CertId::Cor41.is_diagnostic());
    for c in cert.certify_range(CertId::Cor41, 1, 200).unwrap() {
        assert_eq!(c.verdict, Verdict::Holds, "n = {}", c.n);
    }
}

#[test]
fn records_render_both_formats() {
    let mut cert = Certifier::default();
    let c = cert.certify(CertId::Cor31B, 120).unwrap();
    let rec = c.record(20);
    let row = rec.csv_row();
    assert_eq!(
        row.split(',').count(),
        CertificateRecord::CSV_HEADER.split(',').count()
    );
    assert!(row.starts_with("cor31b,120,holds,"));
    let json = serde_json::to_value(&rec).unwrap();
    assert_eq!(json["verdict"], "holds");
    assert_eq!(json["id"], "cor31b");
    let lhs: f64 = rec.lhs_lo.parse().unwrap();
    let b120 = Counter::new().b(120).to_f64().unwrap();
    assert!((lhs / b120 - 1.0).abs() < 1e-15);
}

#[test]
fn a12_upper_bound_breaks_beyond_1310() {
    // The published second-order window for A_(1,2) is too narrow: the upper
    // bound holds through n = 1310 and fails from 1311 on.
    let mut cert = Certifier::default();
    assert_eq!(
        cert.certify(CertId::A12, 1310).unwrap().verdict,
        Verdict::Holds
    );
    let c = cert.certify(CertId::A12, 1311).unwrap();
    assert_eq!(c.verdict, Verdict::Fails);
    assert!(c.upper.unwrap().hi() < c.value.lo());
}
