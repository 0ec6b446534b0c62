use proptest::prelude::*;

use qlab::filling::vankampen::{cyclic_reduce, free_reduce, inverse, vankampen_area, Presentation};
use qlab::report::{Cell, Format, RawTable, Table};
use qlab::{GaussianRational as Q, GroupElement, Kernel, MarkedGroup};

const GROUPS: [&str; 6] = ["Z^1", "Z^2", "F2", "F3", "H3", "Z/7"];

fn element(g: &MarkedGroup, picks: &[usize]) -> GroupElement {
    let letters = g.letters();
    g.normal_form(&picks.iter().map(|i| letters[i % letters.len()]).collect::<Vec<_>>())
}

fn kernel(g: &MarkedGroup, terms: &[(Vec<usize>, i64, i64)]) -> Kernel<Q> {
    Kernel::from_entries(g, terms.iter().map(|(w, re, im)| (element(g, w), Q::from_parts(*re, *im, 3))))
}

fn word() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..16, 0..7)
}

fn terms() -> impl Strategy<Value = Vec<(Vec<usize>, i64, i64)>> {
    prop::collection::vec((word(), -4i64..=4, -4i64..=4), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn group_axioms(gi in 0usize..GROUPS.len(), a in word(), b in word(), c in word()) {
        let g = MarkedGroup::parse(GROUPS[gi]).unwrap();
        let (x, y, z) = (element(&g, &a), element(&g, &b), element(&g, &c));
        prop_assert_eq!(g.multiply(&g.multiply(&x, &y), &z), g.multiply(&x, &g.multiply(&y, &z)));
        prop_assert_eq!(g.multiply(&x, &g.inverse(&x)), g.identity());
        prop_assert_eq!(g.multiply(&g.identity(), &x), x.clone());
        // word metric: symmetric, triangle inequality, bounded by the word that built it
        prop_assert_eq!(g.word_length(&x), g.word_length(&g.inverse(&x)));
        prop_assert!(g.word_length(&g.multiply(&x, &y)) <= g.word_length(&x) + g.word_length(&y));
        prop_assert!(g.word_length(&x) as usize <= a.len());
        prop_assert_eq!(g.normal_form(&g.to_word(&x)), x.clone());
        // normal-form words are geodesic except on H3, where the naive form is longer
        let nf = g.to_word(&x).len() as u32;
        prop_assert!(nf >= g.word_length(&x));
        if GROUPS[gi] != "H3" {
            prop_assert_eq!(nf, g.word_length(&x));
        }
        prop_assert_eq!(g.parse_element(&g.format_element(&x)).unwrap(), x);
    }

    #[test]
    fn convolution_is_associative_and_adjoint_reverses(gi in 0usize..GROUPS.len(), a in terms(), b in terms(), c in terms()) {
        let g = MarkedGroup::parse(GROUPS[gi]).unwrap();
        let (a, b, c) = (kernel(&g, &a), kernel(&g, &b), kernel(&g, &c));
        let ab = a.convolve(&b).unwrap();
        prop_assert_eq!(ab.convolve(&c).unwrap(), a.convolve(&b.convolve(&c).unwrap()).unwrap());
        prop_assert_eq!(ab.adjoint(), b.adjoint().convolve(&a.adjoint()).unwrap());
        prop_assert!(ab.propagation() <= a.propagation() + b.propagation());
        prop_assert!(ab.l1_norm() <= a.l1_norm() * b.l1_norm() * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn free_reduction_is_idempotent(w in prop::collection::vec(prop_oneof![-2i32..=-1, 1i32..=2], 0..16)) {
        let r = free_reduce(&w);
        prop_assert_eq!(free_reduce(&r), r.clone());
        prop_assert!(r.windows(2).all(|p| p[0] != -p[1]));
        prop_assert_eq!(free_reduce(&inverse(&r)), inverse(&r));
        let c = cyclic_reduce(&w);
        prop_assert!(c.len() <= r.len());
        prop_assert!(c.len() < 2 || c[0] != -c[c.len() - 1]);
    }

    #[test]
    fn conjugates_and_inverses_share_area(a in 0i32..3, b in 0i32..3, conj in prop::collection::vec(prop_oneof![-2i32..=-1, 1i32..=2], 0..3)) {
        let p = Presentation::parse("<a,b|[a,b]>").unwrap();
        let w = p.parse_word(&format!("[a^{},b^{}]", a + 1, b + 1)).unwrap();
        let expected = Some(((a + 1) * (b + 1)) as u32);
        prop_assert_eq!(vankampen_area(&p, &w, 9).unwrap(), expected);
        prop_assert_eq!(vankampen_area(&p, &inverse(&w), 9).unwrap(), expected);
        let wrapped: Vec<i32> = conj.iter().copied().chain(w.iter().copied()).chain(inverse(&conj)).collect();
        prop_assert_eq!(vankampen_area(&p, &wrapped, 9).unwrap(), expected);
    }

    #[test]
    fn reports_round_trip(rows in prop::collection::vec((0i64..50, -1e6f64..1e6, any::<bool>()), 0..30)) {
        let mut t = Table::new(&["k", "x", "ok"], &["k"]);
        t.set_meta("command", "test");
        for (k, x, ok) in &rows {
            t.push(vec![Cell::Int(*k), Cell::Float(*x), Cell::Bool(*ok)]).unwrap();
        }
        let csv = RawTable::parse(&t.render(Format::Csv).unwrap(), Format::Csv).unwrap();
        let json = RawTable::parse(&t.render(Format::Json).unwrap(), Format::Json).unwrap();
        prop_assert_eq!(&csv.rows, &json.rows);
        prop_assert_eq!(csv.sorted_metadata(), json.sorted_metadata());
        let mut parsed: Vec<f64> = csv.rows.iter().map(|r| r[1].parse().unwrap()).collect();
        let mut original: Vec<f64> = rows.iter().map(|r| r.1).collect();
        parsed.sort_by(f64::total_cmp);
        original.sort_by(f64::total_cmp);
        prop_assert_eq!(parsed, original);
    }
}
