//! Correlated impulsive noise.
//!
//! With probability `1 - phi` a pixel is kept. Otherwise exactly one channel
//! is replaced (red, green or blue with conditional probabilities `phi1`,
//! `phi2`, `phi3`) or, with the remaining conditional probability
//! `1 - phi1 - phi2 - phi3`, all three channels are replaced. Replacement
//! values are drawn independently per corrupted channel.
//!
//! The random stream is ChaCha8 seeded from the 64-bit seed, and pixels are
//! visited in row-major order, so a seed reproduces the same noisy image on
//! every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::image::{ColorVector, RasterImage};

/// Distribution of the replacement value of a corrupted channel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ImpulseDistribution {
    /// Integer uniform on `0..=255`.
    #[default]
    Uniform,
    /// `0` or `255` with equal probability.
    SaltPepper,
}

impl core::str::FromStr for ImpulseDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(ImpulseDistribution::Uniform),
            "salt-pepper" | "saltpepper" => Ok(ImpulseDistribution::SaltPepper),
            _ => Err(Error::param(
                "impulse",
                alloc::format!("unknown distribution `{s}`"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams {
    /// Probability that a pixel is corrupted.
    pub phi: f64,
    /// Conditional probabilities of corrupting only red, green, blue.
    pub channel: [f64; 3],
    pub impulse: ImpulseDistribution,
    pub seed: u64,
}

impl NoiseParams {
    pub const DEFAULT_CHANNEL: f64 = 0.25;

    pub fn new(phi: f64, seed: u64) -> Self {
        NoiseParams {
            phi,
            channel: [Self::DEFAULT_CHANNEL; 3],
            impulse: ImpulseDistribution::Uniform,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        if !unit(self.phi) {
            return Err(Error::param("phi", "must lie in [0, 1]"));
        }
        if !self.channel.iter().all(|&p| unit(p)) {
            return Err(Error::param(
                "channel",
                "channel probabilities must lie in [0, 1]",
            ));
        }
        if self.channel.iter().sum::<f64>() > 1.0 + 1e-12 {
            return Err(Error::param(
                "channel",
                "channel probabilities must sum to at most 1",
            ));
        }
        Ok(())
    }

    /// Unconditional probabilities of the five branches, in [`NoiseBranch`]
    /// order.
    pub fn branch_probabilities(&self) -> [f64; 5] {
        let [p1, p2, p3] = self.channel;
        let all = (1.0 - p1 - p2 - p3).max(0.0);
        [
            1.0 - self.phi,
            self.phi * p1,
            self.phi * p2,
            self.phi * p3,
            self.phi * all,
        ]
    }
}

impl Default for NoiseParams {
    fn default() -> Self {
        NoiseParams::new(0.10, 0)
    }
}

/// Which branch of the noise model produced a pixel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NoiseBranch {
    Clean,
    Red,
    Green,
    Blue,
    All,
}

impl NoiseBranch {
    pub const ALL: [NoiseBranch; 5] = [
        NoiseBranch::Clean,
        NoiseBranch::Red,
        NoiseBranch::Green,
        NoiseBranch::Blue,
        NoiseBranch::All,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Per-branch pixel counts of one corruption run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BranchCounts(pub [u64; 5]);

impl BranchCounts {
    pub fn get(&self, branch: NoiseBranch) -> u64 {
        self.0[branch.index()]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn corrupted(&self) -> u64 {
        self.total() - self.get(NoiseBranch::Clean)
    }
}

/// Random stream for the noise model.
pub fn noise_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn impulse<R: Rng + ?Sized>(dist: ImpulseDistribution, rng: &mut R) -> f64 {
    match dist {
        ImpulseDistribution::Uniform => f64::from(rng.random_range(0..=255u8)),
        ImpulseDistribution::SaltPepper => {
            if rng.random::<bool>() {
                255.0
            } else {
                0.0
            }
        }
    }
}

/// Applies the noise model to one pixel and reports the branch taken.
///
/// Every pixel consumes two uniform draws (corruption event, branch) plus
/// one impulse draw per replaced channel.
pub fn corrupt_pixel_traced<R: Rng + ?Sized>(
    o: ColorVector,
    params: &NoiseParams,
    rng: &mut R,
) -> (ColorVector, NoiseBranch) {
    let event: f64 = rng.random();
    let pick: f64 = rng.random();
    if event >= params.phi {
        return (o, NoiseBranch::Clean);
    }
    let [p1, p2, p3] = params.channel;
    let branch = if pick < p1 {
        NoiseBranch::Red
    } else if pick < p1 + p2 {
        NoiseBranch::Green
    } else if pick < p1 + p2 + p3 {
        NoiseBranch::Blue
    } else {
        NoiseBranch::All
    };
    let mut x = o;
    match branch {
        NoiseBranch::Red => x.0[0] = impulse(params.impulse, rng),
        NoiseBranch::Green => x.0[1] = impulse(params.impulse, rng),
        NoiseBranch::Blue => x.0[2] = impulse(params.impulse, rng),
        NoiseBranch::All => {
            for c in &mut x.0 {
                *c = impulse(params.impulse, rng);
            }
        }
        NoiseBranch::Clean => unreachable!(),
    }
    (x, branch)
}

pub fn corrupt_pixel<R: Rng + ?Sized>(
    o: ColorVector,
    params: &NoiseParams,
    rng: &mut R,
) -> ColorVector {
    corrupt_pixel_traced(o, params, rng).0
}

/// Corrupts every pixel in row-major order with a stream seeded from
/// `params.seed`, returning the branch counts as well.
pub fn corrupt_image_with_stats(
    img: &RasterImage,
    params: &NoiseParams,
) -> Result<(RasterImage, BranchCounts)> {
    params.validate()?;
    let mut rng = noise_rng(params.seed);
    let mut counts = BranchCounts::default();
    let mut out = img.clone();
    for px in out.pixels_mut() {
        let (x, branch) = corrupt_pixel_traced(*px, params, &mut rng);
        *px = x;
        counts.0[branch.index()] += 1;
    }
    Ok((out, counts))
}

pub fn corrupt_image(img: &RasterImage, params: &NoiseParams) -> Result<RasterImage> {
    corrupt_image_with_stats(img, params).map(|(out, _)| out)
}
