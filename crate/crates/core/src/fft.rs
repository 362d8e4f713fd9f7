//! Complex discrete Fourier transforms for square periodic fields.
//!
//! Power-of-two lengths take an iterative radix-2 path; every other length
//! goes through a recursive mixed-radix decomposition with a direct DFT at
//! prime factors, so any even grid size is supported. The twiddle table is
//! mirrored so that `tw[n - j] == conj(tw[j])` holds bit-exactly, which keeps
//! transforms of real data conjugate-symmetric down to roundoff.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Fft {
    n: usize,
    /// tw[j] = exp(-2 pi i j / n), j in 0..n.
    tw: Vec<Complex64>,
    pow2: bool,
}

impl Fft {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut tw = Vec::with_capacity(n);
        for j in 0..=n / 2 {
            let angle = -2.0 * PI * (j as f64) / (n as f64);
            tw.push(Complex64::new(libm::cos(angle), libm::sin(angle)));
        }
        for j in n / 2 + 1..n {
            let mirror = tw[n - j].conj();
            tw.push(mirror);
        }
        // Pin the axis roots exactly.
        tw[0] = Complex64::new(1.0, 0.0);
        if n % 2 == 0 {
            tw[n / 2] = Complex64::new(-1.0, 0.0);
        }
        if n % 4 == 0 {
            tw[n / 4] = Complex64::new(0.0, -1.0);
            tw[3 * n / 4] = Complex64::new(0.0, 1.0);
        }
        Fft { n, tw, pow2: n.is_power_of_two() }
    }

    #[inline]
    fn twiddle(&self, idx: usize, inverse: bool) -> Complex64 {
        let w = self.tw[idx % self.n];
        if inverse {
            w.conj()
        } else {
            w
        }
    }

    /// Unnormalized 1-D transform of `data` (length n). `row_src` and
    /// `scratch` are caller-provided workspaces of length n.
    fn transform_row(
        &self,
        data: &mut [Complex64],
        row_src: &mut [Complex64],
        scratch: &mut [Complex64],
        inverse: bool,
    ) {
        debug_assert_eq!(data.len(), self.n);
        if self.pow2 {
            self.pow2_in_place(data, inverse);
        } else {
            row_src.copy_from_slice(data);
            self.mixed(row_src, 1, data, self.n, 1, inverse, scratch);
        }
    }

    fn pow2_in_place(&self, a: &mut [Complex64], inverse: bool) {
        let n = self.n;
        // Bit-reversal permutation.
        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let step = n / len;
            for base in (0..n).step_by(len) {
                for k in 0..half {
                    let w = self.twiddle(k * step, inverse);
                    let t = w * a[base + half + k];
                    let u = a[base + k];
                    a[base + k] = u + t;
                    a[base + half + k] = u - t;
                }
            }
            len <<= 1;
        }
    }

    /// Recursive mixed-radix DFT: reads the strided sequence
    /// `src[0], src[stride], ..., src[(len-1)*stride]` and writes its DFT of
    /// size `len` into `dst[0..len]`. `tw_step * len * stride == n` holds at
    /// every level, so twiddle indices always refer to the shared table.
    fn mixed(
        &self,
        src: &[Complex64],
        stride: usize,
        dst: &mut [Complex64],
        len: usize,
        tw_step: usize,
        inverse: bool,
        scratch: &mut [Complex64],
    ) {
        if len == 1 {
            dst[0] = src[0];
            return;
        }
        let p = smallest_prime_factor(len);
        if p == len {
            // Direct DFT at a prime factor.
            for k in 0..len {
                let mut acc = ZERO;
                for j in 0..len {
                    acc += self.twiddle(j * k * tw_step, inverse) * src[j * stride];
                }
                scratch[k] = acc;
            }
            dst[..len].copy_from_slice(&scratch[..len]);
            return;
        }
        let m = len / p;
        for r in 0..p {
            self.mixed(&src[r * stride..], stride * p, &mut dst[r * m..(r + 1) * m], m, tw_step * p, inverse, scratch);
        }
        for s in 0..p {
            for q in 0..m {
                let k = s * m + q;
                let mut acc = ZERO;
                for r in 0..p {
                    acc += self.twiddle(r * k * tw_step, inverse) * dst[r * m + q];
                }
                scratch[k] = acc;
            }
        }
        dst[..len].copy_from_slice(&scratch[..len]);
    }

    /// Unnormalized 2-D transform of a row-major n x n array, in place.
    pub fn transform_2d(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.n;
        debug_assert_eq!(data.len(), n * n);
        let mut row_src = vec![ZERO; n];
        let mut scratch = vec![ZERO; n];
        for r in 0..n {
            self.transform_row(&mut data[r * n..(r + 1) * n], &mut row_src, &mut scratch, inverse);
        }
        transpose_square(data, n);
        for r in 0..n {
            self.transform_row(&mut data[r * n..(r + 1) * n], &mut row_src, &mut scratch, inverse);
        }
        transpose_square(data, n);
    }
}

fn smallest_prime_factor(n: usize) -> usize {
    if n % 2 == 0 {
        return 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n % p == 0 {
            return p;
        }
        p += 2;
    }
    n
}

fn transpose_square(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn direct_dft(x: &[Complex64], inverse: bool) -> Vec<Complex64> {
        let n = x.len();
        let sign = if inverse { 1.0 } else { -1.0 };
        (0..n)
            .map(|k| {
                let mut acc = ZERO;
                for (j, &v) in x.iter().enumerate() {
                    let angle = sign * 2.0 * PI * (j * k % n) as f64 / n as f64;
                    acc += v * Complex64::new(libm::cos(angle), libm::sin(angle));
                }
                acc
            })
            .collect()
    }

    fn pseudo_random(len: usize, seed: u64) -> Vec<Complex64> {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        (0..len).map(|_| Complex64::new(next(), next())).collect()
    }

    #[test]
    fn matches_direct_dft_for_assorted_sizes() {
        for &n in &[2usize, 4, 8, 12, 16, 20, 30, 40, 134] {
            let fft = Fft::new(n);
            let x = pseudo_random(n, 7 + n as u64);
            let mut y = x.clone();
            let mut row_src = vec![ZERO; n];
            let mut scratch = vec![ZERO; n];
            fft.transform_row(&mut y, &mut row_src, &mut scratch, false);
            let want = direct_dft(&x, false);
            for (a, b) in y.iter().zip(&want) {
                assert!((a - b).norm() < 1e-10 * n as f64, "n={n}");
            }
            // Inverse round trip.
            fft.transform_row(&mut y, &mut row_src, &mut scratch, true);
            for (a, b) in y.iter().zip(&x) {
                assert!((a / n as f64 - b).norm() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn two_dimensional_round_trip() {
        for &n in &[8usize, 12, 16] {
            let fft = Fft::new(n);
            let x = pseudo_random(n * n, 99);
            let mut y = x.clone();
            fft.transform_2d(&mut y, false);
            fft.transform_2d(&mut y, true);
            let scale = (n * n) as f64;
            for (a, b) in y.iter().zip(&x) {
                assert!((a / scale - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn twiddle_table_is_exactly_mirrored() {
        for &n in &[8usize, 12, 40] {
            let fft = Fft::new(n);
            for j in 1..n {
                assert_eq!(fft.tw[n - j], fft.tw[j].conj(), "n={n} j={j}");
            }
        }
    }
}
