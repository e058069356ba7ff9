"""Contamination distributions that make two locations hard to tell apart.

Run with ``python3 demos/least_favourable_pairs.py``.
"""
# %%
import math

from huberband.adversarial import build_adversary

# %% [markdown]
# Each pair consists of two contamination densities q0 and q1.  Mixing q0 into data centred at
# theta gives (almost) the same law as mixing q1 into data centred at theta - r.  The certificate
# records the masses of q0 and q1, their smallest value and the total variation between the two
# mixtures.

# %%
for kind, family in [("laplace-exact", "laplace"), ("gaussian-truncated", "gaussian"),
                     ("unknown-variance", "gaussian")]:
    pair = build_adversary(kind, family)
    c = pair.certificate()
    print(f"{kind:20s} r={pair.r:.6f} (limit {pair.max_valid_r:.6f})  tv={c['tv']:.2e}  "
          f"masses=({c['mass0']:.8f}, {c['mass1']:.8f})")

# %% [markdown]
# Past the admissible separation the construction breaks down: for the Laplace pair the
# would-be density q0 turns negative somewhere.

# %%
too_far = build_adversary("laplace-exact", "laplace", r=1.01 * math.log(20 / 19), strict=False)
print("smallest q0 value beyond the limit:", too_far.validity.min_density)
