import numpy as np

from divrel import DiscreteDistribution


def random_pair(rng, n, strict=True):
    """Random pair on a shared n-atom support; strictly positive if strict."""
    support = tuple(float(i) for i in range(n))
    if strict:
        p = rng.dirichlet(np.ones(n))
        q = rng.dirichlet(np.ones(n))
    else:
        # sparse masses with occasional zeros
        p = rng.dirichlet(np.full(n, 0.4))
        q = rng.dirichlet(np.full(n, 0.4))
    return (
        DiscreteDistribution(support, tuple(p)),
        DiscreteDistribution(support, tuple(q)),
    )
