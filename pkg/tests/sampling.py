"""Parameter generators shared by the test modules."""

import numpy as np
from hypothesis import strategies as st

from kidnapgame import ModelParams

P_STAR = dict(a=0.5, q0=0.2, q1=0.6, w1=100.0, w2=60.0, x=40.0, y=10.0, z=50.0)


def random_params(rng, q_order=None):
    """Draw a valid parameter set: a, q in (0.05, 0.95), money in (1, 200), z >= x.

    ``q_order`` is ``"q1>=q0"``, ``"q0>q1"`` or None.
    """
    a = rng.uniform(0.05, 0.95)
    q0, q1 = rng.uniform(0.05, 0.95, 2)
    if q_order == "q1>=q0":
        q0, q1 = min(q0, q1), max(q0, q1)
    elif q_order == "q0>q1":
        q0, q1 = max(q0, q1), min(q0, q1)
    w1, w2, x, y, z = rng.uniform(1.0, 200.0, 5)
    x, z = min(x, z), max(x, z)
    return ModelParams(a=a, q0=q0, q1=q1, w1=w1, w2=w2, x=x, y=y, z=z)


probabilities = st.floats(0.05, 0.95)
money = st.floats(1.0, 200.0)


@st.composite
def params(draw, q_order=None, beta=False):
    a = draw(probabilities)
    q0, q1 = draw(probabilities), draw(probabilities)
    if q_order == "q1>=q0":
        q0, q1 = min(q0, q1), max(q0, q1)
    w1, w2, x, y, z = (draw(money) for _ in range(5))
    x, z = min(x, z), max(x, z)
    b = draw(st.floats(0.0, 2.0)) if beta else None
    return ModelParams(a=a, q0=q0, q1=q1, w1=w1, w2=w2, x=x, y=y, z=z, beta=b)


@st.composite
def offers(draw, p=None):
    """(C, D) with D > 0 and 0 <= C <= D."""
    d = draw(st.floats(0.5, 400.0))
    frac = draw(st.floats(0.0, 1.0))
    return min(frac * d, d), d


def rel_err(approx, exact):
    return abs(approx - exact) / abs(exact)


def grid_argmax(f, lo, hi, n):
    xs = np.linspace(lo, hi, n)
    values = np.array([f(v) for v in xs])
    return xs[int(np.argmax(values))], xs[1] - xs[0]
