use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::real::Real;

/// Labels of the independent random streams used by one replication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StreamId {
    ArrivalsGeneral,
    ArrivalsAdvisory,
    ArrivalsPhone,
    ServiceReception,
    ServiceAdvisor,
    Behavior,
}

impl StreamId {
    pub const ALL: [StreamId; 6] = [
        StreamId::ArrivalsGeneral,
        StreamId::ArrivalsAdvisory,
        StreamId::ArrivalsPhone,
        StreamId::ServiceReception,
        StreamId::ServiceAdvisor,
        StreamId::Behavior,
    ];

    /// Stable numeric tag; part of the seeding contract, never renumber.
    pub const fn tag(self) -> u64 {
        match self {
            StreamId::ArrivalsGeneral => 1,
            StreamId::ArrivalsAdvisory => 2,
            StreamId::ArrivalsPhone => 3,
            StreamId::ServiceReception => 4,
            StreamId::ServiceAdvisor => 5,
            StreamId::Behavior => 6,
        }
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive hash of a sequence of words (SplitMix64 chaining).
///
/// `mix_seed(&[a, b]) != mix_seed(&[b, a])` in general, and every prefix
/// length produces a different value.
pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut h = splitmix64(parts.len() as u64);
    for &p in parts {
        h = splitmix64(h ^ splitmix64(p));
    }
    h
}

/// A deterministic uniform source for one `(master_seed, replication, stream)` triple.
///
/// The ChaCha8 key comes from `mix_seed([master_seed, replication_index])`;
/// the stream label selects the ChaCha stream, so streams of one replication
/// never share keystream.
#[derive(Clone, Debug)]
pub struct RngStream {
    id: StreamId,
    rng: ChaCha8Rng,
    draws: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, replication_index: u64, id: StreamId) -> Self {
        let base = mix_seed(&[master_seed, replication_index]);
        let mut key = [0u8; 32];
        for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
            chunk.copy_from_slice(
                &splitmix64(base ^ (i as u64).wrapping_mul(0xA24B_AED4_963E_E407)).to_le_bytes(),
            );
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(id.tag());
        Self { id, rng, draws: 0 }
    }

    pub fn id(&self) -> StreamId {
        self.id
    }

    /// Number of uniforms drawn so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform_f64(&mut self) -> f64 {
        self.draws += 1;
        self.rng.random::<f64>()
    }

    pub fn uniform<T: Real>(&mut self) -> T {
        T::unit_from_f64(self.uniform_f64())
    }
}
