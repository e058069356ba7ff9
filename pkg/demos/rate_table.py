"""Separation rates for several shape families as the sample size grows.

Run with ``python3 demos/rate_table.py``.
"""
# %%
from huberband.general_arci import r_up, theoretical_rate

alpha, eps_max = 0.05, 0.05

# %% [markdown]
# ``r_up`` is the separation that the general adaptive interval can certify.  Dividing twice its
# value by the closed-form rate shape shows how much of the growth the shape explains.

# %%
for family in ("gengauss:2", "t:3", "bates:3"):
    print(family)
    for n in (10 ** 4, 10 ** 5, 10 ** 6, 10 ** 7):
        up = r_up(family, 0.0, n, alpha, eps_max)
        print(f"  n={n:>9d}  r_up={up:.4f}  2 r_up / rate={2 * up / theoretical_rate(family, n, 0.0):.3f}")
