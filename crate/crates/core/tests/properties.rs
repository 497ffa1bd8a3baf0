use convmc::grs::GrsCode;
use convmc::laurent::{seq_mul_matrix, BlockSequence, LaurentMatrix};
use convmc::{Field, Matrix};
use proptest::prelude::*;

const Q: u32 = 16;

fn laurent(rows: usize, cols: usize) -> impl Strategy<Value = LaurentMatrix> {
    (-2i32..=2, prop::collection::vec(prop::collection::vec(0..Q as u16, rows * cols), 0..4)).prop_map(
        move |(lo, mats)| {
            let f = Field::with_order(Q).unwrap();
            let coeffs = mats.into_iter().map(|d| Matrix::from_vec(rows, cols, d)).collect();
            LaurentMatrix::from_coeffs(&f, rows, cols, lo, coeffs)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative(a in laurent(2, 3), b in laurent(3, 2), c in laurent(2, 3)) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn product_distributes(a in laurent(2, 3), b in laurent(3, 3), c in laurent(3, 3)) {
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn sequence_product_matches_matrix_product(
        blocks in prop::collection::vec(prop::collection::vec(0..Q as u16, 3), 1..5),
        m in laurent(3, 4),
    ) {
        let f = Field::with_order(Q).unwrap();
        let v = BlockSequence::new(3, blocks);
        let via_seq = seq_mul_matrix(&v, &m).unwrap().to_row_matrix(&f);
        let via_mat = v.to_row_matrix(&f).mul(&m).unwrap();
        prop_assert_eq!(via_seq, via_mat);
    }

    #[test]
    fn grs_corrects_up_to_t(
        k in 2usize..20,
        u_seed in prop::collection::vec(0..64u16, 20),
        positions in prop::collection::btree_set(0usize..40, 0..=10),
        values in prop::collection::vec(1..64u16, 10),
    ) {
        let f = Field::with_order(64).unwrap();
        let n = 40;
        let alpha: Vec<u16> = (1..=n as u16).collect();
        let x: Vec<u16> = (0..n as u16).map(|i| 1 + (i * 5) % 63).collect();
        let code = GrsCode::new(&f, k, alpha, x).unwrap();
        let t = code.t();
        let u = &u_seed[..k];
        let mut y = code.encode(u).unwrap();
        let errs: Vec<usize> = positions.into_iter().take(t).collect();
        for (&p, &v) in errs.iter().zip(&values) {
            y[p] = f.add(y[p], v);
        }
        let d = code.decode(&y).unwrap();
        prop_assert_eq!(&d.message[..], u);
        prop_assert_eq!(d.error_weight(), errs.len());
    }
}
