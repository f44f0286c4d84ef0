import random

import pytest

from boxdim import ConvexPrimitive, Dyadic, GeoSet, Point
from boxdim.generators import bradley_stage, reference_prefractal, PrefractalSpec


def D(num, exp=0):
    return Dyadic(num, exp)


def P(x, y):
    return Point(Dyadic.from_fraction(x), Dyadic.from_fraction(y))


def random_primitive(rng: random.Random, exp=5, span=32):
    """A random point, segment or convex polygon with coordinates k/2^exp in [0, span/2^exp]."""
    def coord():
        return Dyadic(rng.randint(0, span), exp)

    kind = rng.choice(("point", "segment", "poly", "poly"))
    if kind == "point":
        return ConvexPrimitive([(coord(), coord())])
    if kind == "segment":
        while True:
            a, b = (coord(), coord()), (coord(), coord())
            if a != b:
                return ConvexPrimitive([a, b])
    from boxdim.geometry import convex_hull
    while True:
        pts = [(coord(), coord()) for _ in range(rng.randint(3, 6))]
        try:
            hull = convex_hull(pts)
        except Exception:
            continue
        if hull.kind == "polygon":
            return hull


def random_union(seed, n=None):
    rng = random.Random(seed)
    n = n or rng.randint(1, 6)
    return GeoSet(f"random-{seed}", tuple(random_primitive(rng) for _ in range(n)))


def corpus():
    """The mesh-inequality corpus: spiral stages, calibration sets, random unions."""
    sets = [bradley_stage(k)[0] for k in range(1, 11)]
    sets.append(reference_prefractal(PrefractalSpec("filled-square")))
    sets.append(reference_prefractal(PrefractalSpec("segment")))
    sets += [reference_prefractal(PrefractalSpec("sierpinski", d)) for d in range(1, 6)]
    sets += [random_union(seed) for seed in range(50)]
    return sets


@pytest.fixture(scope="session")
def mesh_corpus():
    return corpus()
