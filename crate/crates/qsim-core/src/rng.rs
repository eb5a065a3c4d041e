use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{CMat, CoreError};

/// A reproducible random stream: identical `(seed, stream)` pairs reproduce
/// identical sample sequences. Monte Carlo trials derive their own stream via
/// [`RngStream::substream`], so aggregation order never affects the numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Derives a child stream; the FNV-style mix keeps nested derivations
    /// from colliding for any realistic trial count.
    pub fn substream(&self, id: u64) -> Self {
        Self {
            seed: self.seed,
            stream: self
                .stream
                .wrapping_mul(0x100000001b3)
                .wrapping_add(id)
                .wrapping_add(0x9e3779b97f4a7c15),
        }
    }

    /// Instantiates the generator at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream);
        r
    }
}

/// Complex standard-normal (Ginibre) matrix: entries `(x + iy)/sqrt(2)`.
pub fn ginibre(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMat {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the R-diagonal
/// phases normalized away.
pub fn haar_unitary(dim: usize, stream: &RngStream) -> Result<CMat, CoreError> {
    if dim == 0 {
        return Err(CoreError::NotPowerOfTwo { dim });
    }
    let mut rng = stream.rng();
    Ok(haar_unitary_with(dim, &mut rng))
}

/// Same as [`haar_unitary`] but drawing from an already instantiated generator.
pub fn haar_unitary_with(dim: usize, rng: &mut ChaCha8Rng) -> CMat {
    let g = ginibre(dim, dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    // scale column j of Q by r_jj/|r_jj| so the distribution is exactly Haar
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::ONE
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}
