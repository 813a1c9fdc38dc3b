use colored_homology::complex::rouquier_complex;
use colored_homology::exactalg::LaurentQ;
use colored_homology::hecke::{braid_image, complex_class, homfly_at};
use colored_homology::hochschild::{e2_of_complex_with, Arithmetic};
use colored_homology::knotio::{parse_braid, BraidWord};
use colored_homology::symalg::Composition;
use proptest::prelude::*;

fn word_on(strands: usize, max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    let g = (1..strands as i64, any::<bool>()).prop_map(|(i, pos)| if pos { i } else { -i });
    prop::collection::vec(g, 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn class_is_the_braid_image(word in word_on(3, 3)) {
        let w = BraidWord::new(Composition::ones(3), word).unwrap();
        let class = complex_class(&rouquier_complex(&w, 4).unwrap()).unwrap();
        let expected = braid_image(&w).unwrap().scale(&LaurentQ::q_half(w.writhe()));
        prop_assert_eq!(class, expected);
    }

    #[test]
    fn printing_round_trips(colors in prop::collection::vec(1usize..4, 1..4), seed in word_on(4, 5)) {
        let n = colors.len();
        let word: Vec<i64> = seed.into_iter().filter(|g| (g.unsigned_abs() as usize) < n).collect();
        let w = BraidWord::new(Composition::new(colors).unwrap(), word).unwrap();
        prop_assert_eq!(parse_braid(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn homfly_is_conjugation_invariant(word in word_on(3, 4), g in 1i64..3, s in 2i64..9, a in 2i64..9) {
        let w = BraidWord::new(Composition::ones(3), word.clone()).unwrap();
        let mut conj = vec![g];
        conj.extend(&word);
        conj.push(-g);
        let c = BraidWord::new(Composition::ones(3), conj).unwrap();
        let (s, a) = (colored_homology::exactalg::q_int(s), colored_homology::exactalg::q_int(a));
        prop_assert_eq!(homfly_at(&w, &s, &a).unwrap(), homfly_at(&c, &s, &a).unwrap());
    }
}

#[test]
fn modular_and_rational_ranks_agree() {
    for s in ["colors: 1 1 ; word: 1 1 1", "colors: 1 1 ; word: 1 -1", "colors: 2 ; word:", "colors: 1 1 1 ; word: 1 -2"] {
        let w = parse_braid(s).unwrap();
        let c = rouquier_complex(&w, 8).unwrap();
        let exact = e2_of_complex_with(&c, 8, Arithmetic::Rational).unwrap();
        let modular = e2_of_complex_with(&c, 8, Arithmetic::Modular).unwrap();
        assert_eq!(exact, modular, "{s}");
    }
}
