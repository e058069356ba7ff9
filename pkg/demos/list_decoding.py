"""Locating the centre when most of the data are contamination.

Run with ``python3 demos/list_decoding.py``.
"""
# %%
import numpy as np

from huberband.empirical import SortedSample
from huberband.list_decodable import confidence_set

rng = np.random.default_rng(7)
n = 10_000

# %% [markdown]
# Ninety percent of the points come from N(50, 1) and only ten percent from the clean N(0, 1).  No
# single interval can be trusted here, but a short list of candidates can still contain a point
# near 0, and the union of windows around them forms a confidence set.

# %%
m = rng.binomial(n, 0.9)
x = SortedSample.from_values(np.concatenate([rng.normal(size=n - m), rng.normal(50.0, 1.0, m)]))
cs = confidence_set(x, 0.05)
print("candidates:", [round(c, 3) for c in cs.candidates])
print("components:", [(round(a, 3), round(b, 3)) for a, b in cs.intervals])
print("volume:", round(cs.volume, 3), " contains 0:", cs.contains(0.0))
