//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the report is printed in
//! order; the process fails if any criterion fails.

use std::time::Instant;

use colored_homology::bimod::{hom_space, soergel_m, PresentedBimodule, Shifted};
use colored_homology::complex::{rouquier_complex_with, RouquierOptions};
use colored_homology::exactalg::{q_frac, q_int, LaurentQ, Q};
use colored_homology::hecke::{
    braid_image, homfly_at, jones_ocneanu_trace, wedge_idempotent, HeckeElement, TracePolynomial,
};
use colored_homology::hochschild::{e2_from_complex, e2_invariant, euler_prediction, hochschild_homology};
use colored_homology::knotio::{parse_braid, BraidWord};
use colored_homology::symalg::{q_binomial, Composition};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn braid(s: &str) -> BraidWord {
    parse_braid(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// `(n choose k)_q` as integer coefficients, from the product formula.
fn binomial_by_products(n: usize, k: usize) -> Vec<i128> {
    let mul = |p: &[i128], e: usize, sign: i128| {
        // p * (1 + sign q^e)
        let mut out = vec![0; p.len() + e];
        for (i, c) in p.iter().enumerate() {
            out[i] += c;
            out[i + e] += sign * c;
        }
        out
    };
    let mut num = vec![1i128];
    for i in 0..k {
        num = mul(&num, n - i, -1);
    }
    let mut den = vec![1i128];
    for i in 1..=k {
        den = mul(&den, i, -1);
    }
    // exact division by a polynomial with constant term 1
    let mut quo = vec![0i128; num.len() + 1 - den.len()];
    let mut rem = num;
    for i in 0..quo.len() {
        let c = rem[i];
        quo[i] = c;
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    assert!(rem.iter().all(|c| *c == 0));
    quo
}

fn criterion_1() -> Outcome {
    for j in 0..=12usize {
        let mut sum = LaurentQ::zero();
        for i in 0..=j {
            let b = q_binomial(j, i);
            let oracle = binomial_by_products(j, i);
            let ours: Vec<Q> = (0..oracle.len()).map(|e| b.coeff(2 * e as i64)).collect();
            check(ours.iter().zip(&oracle).all(|(a, b)| *a == q_int(*b as i64)), || {
                format!("(q-binomial {j} {i}) = {b}")
            })?;
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let term = LaurentQ::monomial((i * i.saturating_sub(1)) as i64, q_int(sign));
            sum = &sum + &(&term * &b);
        }
        let expected = if j == 0 { LaurentQ::one() } else { LaurentQ::zero() };
        check(sum == expected, || format!("j = {j}: sum is {sum}"))?;
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let bound = 16;
    for (m, n) in [(1usize, 1usize), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2)] {
        for i in 0..m.min(n) {
            let lo = Shifted { module: soergel_m(m, n, i).map_err(|e| e.to_string())?, shift: (i * i) as i64 };
            let hi = Shifted {
                module: soergel_m(m, n, i + 1).map_err(|e| e.to_string())?,
                shift: ((i + 1) * (i + 1)) as i64,
            };
            for (name, s, t) in [("up", &lo, &hi), ("down", &hi, &lo)] {
                for d in (-bound + 1..=1).step_by(2) {
                    let dim = hom_space(s, t, d, bound).map_err(|e| e.to_string())?.len();
                    let want = usize::from(d == 1);
                    check(dim == want, || format!("({m},{n}) i={i} {name}: degree {d} has dimension {dim}"))?;
                }
            }
        }
    }
    Ok(())
}

fn euler_matches(s: &str, bound: i64) -> Outcome {
    let w = braid(s);
    let chi = e2_invariant(&w, bound).map_err(|e| e.to_string())?.euler_characteristic();
    let expected = euler_prediction(&w, bound).map_err(|e| e.to_string())?;
    check(chi == expected, || format!("{w}: homology gives {chi}, polynomial gives {expected}"))
}

fn criterion_3() -> Outcome {
    for s in [
        "colors: 1 ; word:",
        "colors: 2 ; word:",
        "colors: 1 1 ; word:",
        "colors: 1 1 ; word: 1 1",
        "colors: 1 1 ; word: 1 1 1",
    ] {
        euler_matches(s, 16)?;
    }
    Ok(())
}

fn same_invariant(x: &str, y: &str, bound: i64) -> Outcome {
    let a = e2_invariant(&braid(x), bound).map_err(|e| e.to_string())?;
    let b = e2_invariant(&braid(y), bound).map_err(|e| e.to_string())?;
    check(a == b, || format!("[{x}] gives\n{a}but [{y}] gives\n{b}"))
}

fn criterion_4() -> Outcome {
    let d = 12;
    same_invariant("colors: 1 1 1 ; word: 1 2 1", "colors: 1 1 1 ; word: 2 1 2", d)?;
    same_invariant("colors: 1 1 1 ; word: 1 1 2", "colors: 1 1 1 ; word: 2 1 1 2 -2", d)?;
    same_invariant("colors: 1 1 1 ; word: 1 -2", "colors: 1 1 1 ; word: 1 1 -2 -1", d)?;
    same_invariant("colors: 2 1 ; word: 1 1", "colors: 1 2 ; word: 1 1 1 -1", d)?;
    same_invariant("colors: 1 ; word:", "colors: 1 1 ; word: 1", d)?;
    same_invariant("colors: 1 ; word:", "colors: 1 1 ; word: -1", d)?;
    same_invariant("colors: 1 1 ; word: 1 1 1", "colors: 1 1 1 ; word: 1 1 1 2", d)?;
    same_invariant("colors: 1 1 ; word: 1 1 1", "colors: 1 1 1 ; word: 1 1 1 -2", d)?;
    Ok(())
}

fn criterion_5() -> Outcome {
    same_invariant("colors: 1 1 ; word:", "colors: 1 1 ; word: 1 -1", 16)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `HH_k` of a polynomial ring in `vars` degree-2 variables is a free module
/// over the ring on `k`-th exterior powers of degree-2 generators.
fn koszul_oracle(vars: usize, k: i64, q: i64) -> usize {
    let rest = q - 2 * k;
    if k < 0 || k as usize > vars || rest < 0 || rest % 2 != 0 {
        return 0;
    }
    let monomials = binomial((rest / 2) as usize + vars - 1, vars - 1);
    binomial(vars, k as usize) * monomials
}

fn criterion_6() -> Outcome {
    let bound = 20;
    for parts in [vec![1], vec![1, 1]] {
        let vars = parts.len();
        let m = PresentedBimodule::regular(&Composition::new(parts).map_err(|e| e.to_string())?);
        let hh = hochschild_homology(&m, bound).map_err(|e| e.to_string())?;
        for k in 0..=vars as i64 + 1 {
            for q in 0..=bound {
                let got = hh.get(&(k, q)).copied().unwrap_or(0);
                let want = koszul_oracle(vars, k, q);
                check(got == want, || format!("{vars} variables: HH_{k} in degree {q} is {got}, expected {want}"))?;
            }
        }
        check(hh.keys().all(|(k, q)| *k <= vars as i64 && *q <= bound), || "stray cells".into())?;
    }
    Ok(())
}

fn all_perms(n: u8) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn random_element(rng: &mut StdRng, n: u8) -> HeckeElement {
    let mut x = HeckeElement::zero(n as usize);
    for w in all_perms(n) {
        let mut c = LaurentQ::zero();
        for _ in 0..2 {
            c.add_term(rng.gen_range(-3..=3), q_int(rng.gen_range(-4..=4)));
        }
        x.add_term(w, c);
    }
    x
}

fn criterion_7() -> Outcome {
    let err = |e: colored_homology::Error| e.to_string();
    let mut rng = StdRng::seed_from_u64(7);
    let k = &LaurentQ::q_half(-1) - &LaurentQ::q_half(1);
    for i in 1..=3 {
        let s = HeckeElement::generator(4, i);
        let lhs = s.multiply(&s).map_err(err)?;
        let rhs = s.scale(&k).add(&HeckeElement::one(4)).map_err(err)?;
        check(lhs == rhs, || format!("quadratic relation fails for generator {i}"))?;
    }
    for _ in 0..5 {
        let x = random_element(&mut rng, 3);
        let y = random_element(&mut rng, 3);
        let tx = jones_ocneanu_trace(&x);
        let up = jones_ocneanu_trace(&x.extend(4).mul_generator(3));
        check(up == tx.shift_z(1), || format!("Tr(x s_3) != z Tr(x) for x = {x}"))?;
        let down = jones_ocneanu_trace(&x.extend(4).multiply(&HeckeElement::inverse_generator(4, 3)).map_err(err)?);
        let expected: TracePolynomial = tx.shift_z(1).add(&tx.scale(&-&k));
        check(down == expected, || format!("Tr(x s_3^-1) wrong for x = {x}"))?;
        check(jones_ocneanu_trace(&x.extend(4)) == tx, || "trace changes under inclusion".into())?;
        let xy = jones_ocneanu_trace(&x.multiply(&y).map_err(err)?);
        let yx = jones_ocneanu_trace(&y.multiply(&x).map_err(err)?);
        check(xy == yx, || "trace is not central".into())?;
    }
    for parts in [vec![2], vec![3], vec![2, 1]] {
        let p = Composition::new(parts.clone()).map_err(err)?;
        let (num, qp) = wedge_idempotent(&p);
        let sq = num.multiply(&num).map_err(err)?;
        check(sq == num.scale(&qp), || format!("wedge idempotent for {parts:?} is not idempotent"))?;
    }
    // a P(L+) - a^{-1} P(L-) = (s - s^{-1}) P(L0) for trefoil, unknot, Hopf
    let plus = braid("colors: 1 1 ; word: 1 1 1");
    let minus = braid("colors: 1 1 ; word: 1");
    let zero = braid("colors: 1 1 ; word: 1 1");
    for _ in 0..5 {
        let s = q_frac(rng.gen_range(2..50), rng.gen_range(1..50));
        let a = q_frac(rng.gen_range(2..50), rng.gen_range(51..100));
        let lhs = &a * homfly_at(&plus, &s, &a).map_err(err)? - a.recip() * homfly_at(&minus, &s, &a).map_err(err)?;
        let rhs = (&s - s.recip()) * homfly_at(&zero, &s, &a).map_err(err)?;
        check(lhs == rhs, || format!("skein relation fails at s = {s}, a = {a}"))?;
    }
    check(braid_image(&minus).is_ok(), || "braid image".into())
}

fn criterion_8() -> Outcome {
    let bound = 12;
    let w = braid("colors: 1 1 ; word: 1 1 1");
    let reference = e2_invariant(&w, bound).map_err(|e| e.to_string())?;
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..2 {
        let scales: Vec<Q> = (0..3)
            .map(|_| {
                let n: i64 = rng.gen_range(1..40) * if rng.gen_bool(0.5) { 1 } else { -1 };
                q_frac(n, rng.gen_range(1..40))
            })
            .collect();
        let opts = RouquierOptions { minimize: false, scales: scales.clone() };
        let c = rouquier_complex_with(&w, bound, &opts).map_err(|e| e.to_string())?;
        let got = e2_from_complex(&w, &c, bound).map_err(|e| e.to_string())?;
        check(got == reference, || format!("rescaling by {scales:?} changes the invariant"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("q-binomial identity, j <= 12", criterion_1),
        ("hom dimension law, m + n <= 4, D = 16", criterion_2),
        ("Euler characteristic equals colored HOMFLYPT, D = 16", criterion_3),
        ("braid relation, conjugation and Markov invariance, D = 12", criterion_4),
        ("Reidemeister II, D = 16", criterion_5),
        ("Hochschild homology of R_(1) and R_(1,1), D = 20", criterion_6),
        ("Hecke relations, trace, idempotents and skein", criterion_7),
        ("rescaled differentials, D = 12", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("PASS {} {name} ({secs:.1}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.1}s): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
