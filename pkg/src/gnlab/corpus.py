"""Deterministic test-function corpus.

Reproducibility across platforms matters more here than statistical
quality, so randomness comes from an explicit SplitMix64 generator
rather than numpy's: state advances by the 64-bit golden-ratio constant
and is finalized by the standard xor-shift/multiply mix.  Sample i draws
from its own stream, seeded as seed XOR (i+1) * 0x9E3779B97F4A7C15, so
corpora are stable under changes of n_samples.

Conventions (all documented because they are part of reproducibility):
uniforms take the top 53 bits / 2^53; normals are Box-Muller using the
cosine branch with u1 shifted away from zero; integers in [0, n) reduce
by modulo (the bias is irrelevant at these sizes); signs come from the
top bit.  Draws that normalize to the zero function (e.g. a ball
indicator that covers the whole space) are discarded and the stream
simply continues — this keeps every kept sample a pure function of
(seed, stream index).
"""

import math

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

KINDS = (
    "smoothed_noise",
    "ball_indicator",
    "distance_bump",
    "eigenvector",
    "rademacher",
)


class SplitMix64:
    def __init__(self, state):
        self.state = state & _MASK

    def next_u64(self):
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z ^= z >> 30
        z = (z * 0xBF58476D1CE4E5B9) & _MASK
        z ^= z >> 27
        z = (z * 0x94D049BB133111EB) & _MASK
        z ^= z >> 31
        return z

    def uniform(self):
        return (self.next_u64() >> 11) * 2.0**-53

    def normal(self):
        u1 = ((self.next_u64() >> 11) + 1) * 2.0**-53
        u2 = (self.next_u64() >> 11) * 2.0**-53
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def randint(self, n):
        return self.next_u64() % n

    def sign(self):
        return 1.0 if (self.next_u64() >> 63) == 0 else -1.0


def stream(seed, i):
    """Independent generator for sample i of a corpus with this seed."""
    return SplitMix64((seed ^ (((i + 1) * _GOLDEN) & _MASK)) & _MASK)


class Corpus:
    """Generated sample functions plus the recipe that made them."""

    def __init__(self, functions, labels, seed, space_name):
        self.functions = functions
        self.labels = labels
        self.seed = seed
        self.space_name = space_name

    def __len__(self):
        return len(self.functions)

    def __iter__(self):
        return iter(self.functions)

    def to_csv(self, space, path):
        with open(path, "w") as fh:
            fh.write("vertex," + ",".join(self.labels) + "\n")
            mat = np.stack(self.functions, axis=1)
            for vid, row in zip(space.ids, mat):
                fh.write(vid + "," + ",".join(repr(float(v)) for v in row) + "\n")


def _draw(kind, space, rng, sg):
    n = space.n
    diam = max(space.diameter, 1)
    if kind == "smoothed_noise":
        g = np.array([rng.normal() for _ in range(n)])
        return sg.apply(g, 1.0)
    if kind == "ball_indicator":
        x = rng.randint(n)
        r = 1 + rng.randint(max(1, diam // 2))
        f = (space.dist[x] <= r).astype(np.float64)
        return f - np.dot(space.mu, f) / space.total_measure
    if kind == "distance_bump":
        x = rng.randint(n)
        r = 1 + rng.randint(diam)
        return np.clip(r - space.dist[x], 0.0, None).astype(np.float64)
    if kind == "eigenvector":
        if not sg.dense:
            raise ValueError("eigenvector samples need the dense spectral form")
        i = 1 + rng.randint(min(8, n - 1))
        return sg.Phi[:, n - 1 - i].copy()
    if kind == "rademacher":
        return np.array([rng.sign() for _ in range(n)])
    raise ValueError("unknown corpus kind %r" % kind)


def generate(
    space,
    n_samples,
    seed,
    kinds=KINDS,
    mean_zero=True,
    sup_one=True,
    sg=None,
):
    """Build a corpus of n_samples functions, cycling through ``kinds``.

    Normalization (applied in this order) is part of the recipe:
    mean_zero subtracts the mu-average, sup_one rescales to unit sup
    norm.  A semigroup is built lazily when a kind needs one; pass
    ``sg`` to reuse an existing one.
    """
    kinds = tuple(kinds)
    if not kinds:
        raise ValueError("kinds must be non-empty")
    for k in kinds:
        if k not in KINDS:
            raise ValueError("unknown corpus kind %r" % k)
    if sg is None and any(k in ("smoothed_noise", "eigenvector") for k in kinds):
        from .heat import Semigroup

        sg = Semigroup(space)

    functions = []
    labels = []
    for i in range(n_samples):
        kind = kinds[i % len(kinds)]
        rng = stream(seed, i)
        f = None
        for _ in range(1000):
            cand = _draw(kind, space, rng, sg)
            if mean_zero:
                cand = cand - np.dot(space.mu, cand) / space.total_measure
            peak = float(np.abs(cand).max())
            if peak <= 1e-13:
                continue  # degenerate draw: keep pulling from the stream
            if sup_one:
                cand = cand / peak
            f = cand
            break
        if f is None:
            raise RuntimeError(
                "stream %d kept producing degenerate %s samples" % (i, kind)
            )
        functions.append(f)
        labels.append("%s_%03d" % (kind, i))
    return Corpus(functions, labels, seed, space.name)
