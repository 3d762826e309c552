import numpy as np
import pytest

from gbslocc.weyl import GbsSet

# {X^(2mu) Z^(2nu)} at d = 4: not F-equivalent, one-way distinguishable
KLEIN4 = GbsSet.of([(0, 0), (0, 2), (2, 0), (2, 2)], 4)
# lexicographically first 5-subset at d = 5 with no F-equivalence witness (brute-force scan)
D5_NO_WITNESS = GbsSet.of([(0, 0), (0, 1), (0, 2), (1, 0), (1, 2)], 5)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def random_set(rng, d, ell):
    idx = rng.choice(d * d, size=ell, replace=False)
    return GbsSet.of([divmod(int(i), d) for i in idx], d)


def random_f_type(rng, d, ell):
    ms = rng.choice(d, size=ell, replace=False)
    ns = rng.integers(0, d, size=ell)
    return GbsSet.of(zip(ms.tolist(), ns.tolist()), d)
