"""Bundled matrix descriptions used by the CLI and the test suite."""

from .dsl import parse_spec

O2 = """\
# all-ones 2x2
universe finite 1 2
default 1
"""

GOLDEN_MEAN = """\
# [[1,1],[1,0]]
universe finite 1 2
default 1
except 2 2 value 0
"""

PERMUTATION2 = """\
# 2x2 cyclic permutation
universe finite 1 2
default 0
except 1 2 value 1
except 2 1 value 1
"""

ALL_ONES_INFINITE = """\
# countably infinite, every entry 1
universe tracks g
default 1
"""

THREE_TRACKS = """\
# descending x-chain feeding an infinite y-fan into an ascending z-ray
universe tracks x y z
default 0
diag row x[n+1] col x[n] for n>=1 value 1
rect rows {x[1]} cols y[*] value 1
rect rows y[*] cols {z[1]} value 1
diag row z[n] col z[n+1] for n>=1 value 1
"""

FIXTURES = {
    "o2": O2,
    "golden_mean": GOLDEN_MEAN,
    "permutation2": PERMUTATION2,
    "all_ones_infinite": ALL_ONES_INFINITE,
    "three_tracks": THREE_TRACKS,
}


def load(name: str):
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; have {sorted(FIXTURES)}")
    return parse_spec(FIXTURES[name])
