import random
from fractions import Fraction

import pytest

from germforge.jets import EXACT, GermJets, Jet2
from germforge.normal_form import NormalFormCoeffs


def rand_fraction(rng, max_num=9, max_den=5, nonzero=False):
    while True:
        f = Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))
        if f or not nonzero:
            return f


def rand_jet(rng, order, mode=EXACT, density=0.6, max_num=9, max_den=5):
    terms = {}
    for d in range(order + 1):
        for i in range(d + 1):
            if rng.random() < density:
                c = rand_fraction(rng, max_num, max_den)
                if c:
                    terms[(i, d - i)] = c if mode == EXACT else float(c)
    return Jet2(order, terms, mode)


def make_nf(order=6, mode=EXACT, a=None, b=None):
    """Build NormalFormCoeffs from {(i,j): value} / {i: value} dicts."""
    a = dict(a or {})
    b = dict(b or {})
    if mode == EXACT:
        a = {k: Fraction(v) for k, v in a.items()}
        b = {k: Fraction(v) for k, v in b.items()}
    else:
        a = {k: float(v) for k, v in a.items()}
        b = {k: float(v) for k, v in b.items()}
    return NormalFormCoeffs(order, mode, a, b)


def germ_from_strings(components, order, mode=EXACT):
    from germforge.germ_io import parse_polynomial

    jets = [parse_polynomial(c, ("u", "v"), order, mode) for c in components]
    return GermJets(*jets)


@pytest.fixture
def rng():
    return random.Random(20240817)
