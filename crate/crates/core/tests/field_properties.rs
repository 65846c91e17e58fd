//! Field-level properties of the Rédei data, checked over ranges of
//! discriminants and against the class group tables.

use redei8_core::bqf::{genus_character, two_power_ranks, BQForm, ClassGroupTable};
use redei8_core::gf2::BitVector;
use redei8_core::quadform::{FormType, QuadForm};
use redei8_core::redei::{
    b_matrix, eight_rank_report, extended_redei_matrix, fields_up_to, find_primitive_solution, in_v0, pairing_value,
    primitive_solutions, qb_quartic, redei_matrix, v0_elements, validate_field, Divisor, FieldSpec,
};
use redei8_core::symbols::{gcd, jacobi, xi};

const RANGE: u64 = 50_000;

fn multi_prime_fields() -> Vec<FieldSpec> {
    fields_up_to(RANGE, None).into_iter().filter(|f| f.t() >= 2).collect()
}

#[test]
fn m4_is_symmetric() {
    for f in multi_prime_fields() {
        let m = redei_matrix(&f);
        assert_eq!(m, m.transpose(), "delta {}", f.delta());
    }
}

#[test]
fn extended_matrix_rows_sum_to_zero() {
    // Product formula: (p_i, Δ) is trivial at 2 and ∞, so each row over all
    // t primes sums to zero and the last column is the sum of the others.
    for f in fields_up_to(RANGE, None) {
        let m = extended_redei_matrix(&f);
        for i in 0..f.t() {
            let row = m.row(i).unwrap();
            assert_eq!(row.bits().count_ones() % 2, 0, "delta {} row {i}", f.delta());
        }
    }
}

#[test]
fn kernel_of_m4_is_v0() {
    for f in multi_prime_fields() {
        let m = redei_matrix(&f);
        let r = f.t() - 1;
        for mask in 0..1u64 << r {
            let d = Divisor::from_mask(&f, mask).unwrap();
            let v = BitVector::from_bits(r, mask).unwrap();
            let in_kernel = m.transpose().matvec(&v).unwrap().bits() == 0;
            assert_eq!(in_kernel, in_v0(&f, &d), "delta {} D {}", f.delta(), d.value());
        }
    }
}

#[test]
fn primitive_solutions_satisfy_the_equation() {
    for f in multi_prime_fields() {
        let delta = f.delta() as i128;
        let report = eight_rank_report(&f).unwrap();
        for (_, d) in v0_elements(&f, &report.redei.v0_basis) {
            let dv = d.value();
            for s in primitive_solutions(f.delta(), dv, 4).unwrap() {
                let (x, y, z) = (s.x as i128, s.y as i128, s.z as i128);
                assert_eq!(x * x, delta * y * y + 4 * dv as i128 * z * z, "delta {delta} D {dv}");
                assert_eq!(s.x % dv, 0, "delta {delta} D {dv} x {}", s.x);
            }
        }
    }
}

#[test]
fn pairing_does_not_depend_on_the_solution() {
    for f in multi_prime_fields() {
        let report = eight_rank_report(&f).unwrap();
        let v0 = v0_elements(&f, &report.redei.v0_basis);
        for (_, d) in &v0 {
            let sols = primitive_solutions(f.delta(), d.value(), 6).unwrap();
            assert!(!sols.is_empty());
            for (_, col) in &v0 {
                let first = pairing_value(&f, sols[0].z, col);
                for s in &sols[1..] {
                    assert_eq!(
                        pairing_value(&f, s.z, col),
                        first,
                        "delta {} row {} col {} z {} vs {}",
                        f.delta(),
                        d.value(),
                        col.value(),
                        sols[0].z,
                        s.z
                    );
                }
            }
        }
    }
}

#[test]
fn form_values_match_quartic_symbols_on_all_of_v0() {
    for f in multi_prime_fields() {
        let report = eight_rank_report(&f).unwrap();
        for (coords, d) in v0_elements(&f, &report.redei.v0_basis) {
            assert_eq!(
                report.qb.evaluate(&coords).unwrap(),
                qb_quartic(&f, &d).unwrap(),
                "delta {} D {}",
                f.delta(),
                d.value()
            );
        }
    }
}

#[test]
fn pairing_agrees_with_genus_characters_of_square_roots() {
    // 𝔅(D, D') is χ_{D'} evaluated on any class whose square is the ambiguous
    // class of norm D.
    for f in multi_prime_fields().into_iter().filter(|f| f.abs_delta() <= 15_000) {
        let delta = f.delta();
        let table = ClassGroupTable::build(delta).unwrap();
        let report = eight_rank_report(&f).unwrap();
        let basis = &report.redei.v0_basis;
        for (i, d) in basis.iter().enumerate() {
            let dv = d.value() as i64;
            let ambiguous = BQForm::new(dv, dv, (dv * dv - delta) / (4 * dv)).reduce();
            let target = table.index_of(&ambiguous).unwrap();
            let roots: Vec<usize> = (0..table.h()).filter(|&c| table.square_idx(c) == target).collect();
            assert!(!roots.is_empty(), "delta {delta}: {dv} is not a square");
            for (j, col) in basis.iter().enumerate() {
                for &c in &roots {
                    let chi = genus_character(&table.forms()[c], col, delta).unwrap();
                    assert_eq!(
                        xi(chi),
                        u8::from(report.b_matrix.get(i, j).unwrap()),
                        "delta {delta} row {dv} col {}",
                        col.value()
                    );
                }
            }
        }
    }
}

/// `(primes, type of Q_𝔅, rank of Q_𝔅, predicted, r8, 2-part)`.
type WorkedExample = (&'static [u64], FormType, usize, &'static [usize], usize, &'static [u64]);

/// Class group structures and `Q_𝔅` for four fields with `M₄ = 0` and
/// `r₄ = 2`, each confirmed by the class group table.
#[test]
fn worked_examples_with_two_split_primes() {
    let cases: [WorkedExample; 4] = [
        (&[37, 157, 3], FormType::Type21, 0, &[0, 2], 0, &[4, 4]),
        (&[29, 109, 7], FormType::Type21, 0, &[0, 2], 2, &[8, 16]),
        (&[13, 61, 3], FormType::Type1, 1, &[0, 1], 0, &[4, 4]),
        (&[5, 89, 11], FormType::Type1, 1, &[0, 1], 1, &[4, 16]),
    ];
    for (primes, form_type, rank, predicted, r8, two_part) in cases {
        let f = validate_field(primes).unwrap();
        let report = eight_rank_report(&f).unwrap();
        assert!(report.redei.m4.is_zero());
        assert_eq!(report.r4(), 2);
        assert_eq!(report.classification.form_type, form_type, "{primes:?}");
        assert_eq!(report.classification.rank, rank, "{primes:?}");
        assert_eq!(report.predicted.iter().copied().collect::<Vec<_>>(), predicted, "{primes:?}");
        assert_eq!(report.r8, r8, "{primes:?}");
        let ranks = two_power_ranks(&ClassGroupTable::build(f.delta()).unwrap());
        assert_eq!(ranks.r8(), r8, "{primes:?}");
        assert_eq!(ranks.elementary_divisors_2part(), two_part, "{primes:?}");
    }
}

#[test]
fn quartic_values_of_worked_examples() {
    // (-61·3 | 13)₄ = -1 and (-13·3 | 61)₄ = 1.
    let f = validate_field(&[13, 61, 3]).unwrap();
    assert_eq!(qb_quartic(&f, &Divisor::from_value(&f, 13).unwrap()).unwrap(), 1);
    assert_eq!(qb_quartic(&f, &Divisor::from_value(&f, 61).unwrap()).unwrap(), 0);
    // (-89·11 | 5)₄ = 1 and (-5·11 | 89)₄ = -1.
    let f = validate_field(&[5, 89, 11]).unwrap();
    assert_eq!(qb_quartic(&f, &Divisor::from_value(&f, 5).unwrap()).unwrap(), 0);
    assert_eq!(qb_quartic(&f, &Divisor::from_value(&f, 89).unwrap()).unwrap(), 1);
    // (-157·3 | 37)₄ = (-37·3 | 157)₄ = 1, so Q_𝔅 vanishes for -37·157·3.
    let f = validate_field(&[37, 157, 3]).unwrap();
    for d in [37, 157, 37 * 157] {
        assert_eq!(qb_quartic(&f, &Divisor::from_value(&f, d).unwrap()).unwrap(), 0);
    }
}

#[test]
fn r8_never_exceeds_r4_and_parity_holds_for_zero_forms() {
    for f in fields_up_to(RANGE, None) {
        let r = eight_rank_report(&f).unwrap();
        assert!(r.r8 <= r.r4());
        assert!(r.predicted.contains(&r.r8), "delta {}", f.delta());
        if r.qb.is_zero() {
            assert_eq!(r.r8 % 2, r.r4() % 2, "delta {}", f.delta());
        }
    }
}

#[test]
fn pairing_matches_jacobi_when_coprime() {
    for f in multi_prime_fields() {
        let report = eight_rank_report(&f).unwrap();
        let v0 = v0_elements(&f, &report.redei.v0_basis);
        for (_, d) in &v0 {
            let z = find_primitive_solution(f.delta(), d.value()).unwrap().z;
            for (_, col) in &v0 {
                if gcd(z, col.value()) == 1 {
                    assert_eq!(pairing_value(&f, z, col), xi(jacobi(z as i64, col.value()).unwrap()));
                }
            }
        }
    }
}

#[test]
fn b_rank_does_not_depend_on_the_basis() {
    for f in multi_prime_fields() {
        let report = eight_rank_report(&f).unwrap();
        let basis = &report.redei.v0_basis;
        if basis.len() < 2 {
            continue;
        }
        // Partial sums, then reversed: an invertible change of basis.
        let mut other: Vec<Divisor> = basis
            .iter()
            .scan(Divisor::one(), |acc, d| {
                *acc = acc.add(d);
                Some(*acc)
            })
            .collect();
        other.reverse();
        let b = b_matrix(&f, &other).unwrap();
        assert_eq!(b.rank(), report.b_matrix.rank(), "delta {}", f.delta());
        let q = QuadForm::from_bilinear(&b).unwrap();
        assert_eq!(q.classify(), report.classification, "delta {}", f.delta());
    }
}
