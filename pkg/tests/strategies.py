"""
Hypothesis strategies for laws and horizons.
"""
from hypothesis import strategies as st

from core.distributions import FiniteDist, make_finite_dist


@st.composite
def finite_dists(draw, min_atoms: int = 1, max_atoms: int = 6, low: float = 1e-2, high: float = 1e2) -> FiniteDist:
    """Laws with distinct positive atoms and weights bounded away from 0."""
    atoms = draw(st.lists(
        st.floats(min_value=low, max_value=high, allow_nan=False, allow_infinity=False),
        min_size=min_atoms, max_size=max_atoms,
        unique_by=lambda x: round(x, 3),
    ))
    weights = draw(st.lists(
        st.floats(min_value=0.05, max_value=1.0),
        min_size=len(atoms), max_size=len(atoms),
    ))
    return make_finite_dist(atoms, weights)


horizons = st.floats(min_value=0.05, max_value=20.0, allow_nan=False)
