//! Single-qubit Pauli basis `{I, X, Y, Z}` indexed 0..4.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::numeric::ComplexMatrix;

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn build(i: usize) -> ComplexMatrix {
    let data = match i {
        0 => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        1 => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        2 => [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        3 => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        _ => panic!("Pauli index {i} out of range"),
    };
    ComplexMatrix::from_row_major(2, 2, data.to_vec()).expect("finite Pauli entries")
}

/// The four Pauli matrices, built once.
pub fn paulis() -> &'static [ComplexMatrix; 4] {
    static P: OnceLock<[ComplexMatrix; 4]> = OnceLock::new();
    P.get_or_init(|| [build(0), build(1), build(2), build(3)])
}

pub fn pauli(i: usize) -> &'static ComplexMatrix {
    &paulis()[i]
}

/// `sigma_i (x) sigma_j` on two qubits, system first.
pub fn pauli_pair(i: usize, j: usize) -> &'static ComplexMatrix {
    static PAIRS: OnceLock<Vec<ComplexMatrix>> = OnceLock::new();
    let pairs = PAIRS.get_or_init(|| (0..16).map(|k| pauli(k / 4).kron(pauli(k % 4))).collect());
    &pairs[4 * i + j]
}

/// `Tr[a b]` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}
