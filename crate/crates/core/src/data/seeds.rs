/// Purpose of a random stream. Each purpose gets its own seed so that, for
/// example, changing the noise draw leaves the graph unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stream {
    Graph,
    Coefficients,
    Noise,
    Latent,
    Init,
    Episode,
}

impl Stream {
    fn tag(self) -> u64 {
        match self {
            Stream::Graph => 1,
            Stream::Coefficients => 2,
            Stream::Noise => 3,
            Stream::Latent => 4,
            Stream::Init => 5,
            Stream::Episode => 6,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for stream `stream`, item `index` (replication, episode, ...).
pub fn derive_seed(master: u64, stream: Stream, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ stream.tag()) ^ index)
}
