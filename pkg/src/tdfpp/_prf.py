"""Counter-based pseudorandom function shared by both kernel backends.

Every random quantity in the package is a pure function of a 64-bit key
built by chaining splitmix64 over (seed, stream tag, integer words...).
The Cython core re-implements exactly this arithmetic, so the two backends
see bit-identical environments.
"""

MASK64 = (1 << 64) - 1

# stream tags
TAG_ETA = 0x45544131  # per-(edge, regime) field values
TAG_OFFSET = 0x4F464653  # block offset a
TAG_RENEWAL = 0x52454E57  # poisson gaps
TAG_REPLICATE = 0x5245504C  # replicate seed derivation
TAG_SAMPLE = 0x53414D50  # verification instance draws

_INV_2_53 = 1.0 / (1 << 53)
_INV_2_52 = 1.0 / (1 << 52)


def splitmix64(x):
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def hash_words(seed, tag, *words):
    h = splitmix64((seed & MASK64) ^ tag)
    for w in words:
        h = splitmix64(h ^ (w & MASK64))
    return h


def unit_float(h):
    """Map a 64-bit word to [0, 1) using the top 53 bits."""
    return (h >> 11) * _INV_2_53


def open_unit_float(h):
    """Map a 64-bit word to the open interval (0, 1)."""
    return ((h >> 12) + 0.5) * _INV_2_52


def derive_seed(base, index):
    """Seed of replicate ``index`` under ``base``; stable across versions."""
    return hash_words(base, TAG_REPLICATE, index)


def edge_key(seed, base, axis, regime):
    return hash_words(seed, TAG_ETA, *base, axis, regime)
