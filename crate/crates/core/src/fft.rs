//! Forward discrete Fourier transforms, `X_k = sum_n x_n exp(-2 pi i k n / N)`.

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::Scalar;

/// In-place iterative radix-2 transform; `data.len()` must be a power of two.
pub fn fft_in_place<T: Scalar>(data: &mut [Complex<T>]) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fft length {n} is not a power of two");
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = -T::TAU() / T::from_usize_lossy(len);
        let half = len / 2;
        // twiddles from the exact angle, not by repeated multiplication
        let tw: Vec<Complex<T>> =
            (0..half).map(|k| Complex::from_polar(T::one(), ang * T::from_usize_lossy(k))).collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let u = data[start + k];
                let v = data[start + k + half] * tw[k];
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
}

/// O(N^2) reference transform of any length.
pub fn dft_naive<T: Scalar>(data: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = data.len();
    let nt = T::from_usize_lossy(n);
    (0..n)
        .map(|k| {
            data.iter().enumerate().fold(Complex::<T>::zero(), |acc, (m, x)| {
                let ang = -T::TAU() * T::from_usize_lossy((k * m) % n) / nt;
                acc + *x * Complex::from_polar(T::one(), ang)
            })
        })
        .collect()
}

/// Two-dimensional transform of a row-major `n x n` array.
pub fn fft2_in_place<T: Scalar>(data: &mut [Complex<T>], n: usize) {
    assert_eq!(data.len(), n * n);
    for row in data.chunks_mut(n) {
        fft_in_place(row);
    }
    let mut col = vec![Complex::<T>::zero(); n];
    for c in 0..n {
        for r in 0..n {
            col[r] = data[r * n + c];
        }
        fft_in_place(&mut col);
        for r in 0..n {
            data[r * n + c] = col[r];
        }
    }
}

pub fn dft2_naive<T: Scalar>(data: &[Complex<T>], n: usize) -> Vec<Complex<T>> {
    assert_eq!(data.len(), n * n);
    let mut out: Vec<Complex<T>> = data.chunks(n).flat_map(dft_naive).collect();
    for c in 0..n {
        let col: Vec<_> = (0..n).map(|r| out[r * n + c]).collect();
        for (r, v) in dft_naive(&col).into_iter().enumerate() {
            out[r * n + c] = v;
        }
    }
    out
}
