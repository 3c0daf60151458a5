"""
Reproducible random streams.

Uniforms come from numpy's counter-based Philox generator. The 128-bit key is
(seed, stream): the low word is the integer seed and the high word selects an
independent stream, so component means (MEANS_STREAM) and samples
(SAMPLE_STREAM) drawn under the same seed never share uniforms. Normals use
the Box-Muller transform on those uniforms, so a given seed yields the same
sample on every platform:

    u1 = 1 - U  (in (0, 1]),  u2 = U'
    z0 = sqrt(-2 log u1) cos(2 pi u2),  z1 = sqrt(-2 log u1) sin(2 pi u2)
"""
import numpy as np

from common.exceptions import ConfigurationError

RNG_NAME = 'philox-boxmuller-v1'
MAX_SEED = 2 ** 64 - 1

SAMPLE_STREAM = 0
MEANS_STREAM = 1


class RandomStream:
    """philox-boxmuller-v1 스트림"""

    name = RNG_NAME

    def __init__(self, seed, stream=SAMPLE_STREAM):
        seed = int(seed)
        if not 0 <= seed <= MAX_SEED:
            raise ConfigurationError(f"seed must be in [0, 2^64), got {seed}")
        if not 0 <= int(stream) <= MAX_SEED:
            raise ConfigurationError(f"stream must be in [0, 2^64), got {stream}")
        self.seed = seed
        self.stream = int(stream)
        self._generator = np.random.Generator(np.random.Philox(key=seed + (self.stream << 64)))

    def uniform(self, size=None, low=0.0, high=1.0):
        return low + (high - low) * self._generator.random(size)

    def normal(self, size):
        """Box-Muller 표준정규 난수 (행 우선 순서로 채움)"""
        shape = (size,) if np.isscalar(size) else tuple(size)
        count = int(np.prod(shape))
        pairs = (count + 1) // 2
        u1 = 1.0 - self._generator.random(pairs)
        u2 = self._generator.random(pairs)
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        z = np.empty(2 * pairs)
        z[0::2] = radius * np.cos(angle)
        z[1::2] = radius * np.sin(angle)
        return z[:count].reshape(shape)

    def choice(self, n, size):
        """0..n-1 에서 비복원 추출 (정렬하지 않은 순서)"""
        return self._generator.permutation(n)[:size]
