"""Size caps and search budgets.

``CCEXT_CAP_ORDER`` in the environment overrides the group-order cap used
for Cayley-table construction and the equivalence step of ``classify``.
"""

import os

# exhaustive associativity check up to this order; larger tables are sampled
ASSOC_CAP = 512
SAMPLE_FACTOR = 10
SAMPLE_SEED = 0

SKEW_ENUM_CAP = 12
AUT_ENUM_CAP = 128
EPF_BUDGET = 10**7
# brute-force EPF enumeration over all value vectors is kept for tiny groups
EPF_BRUTE_CAP = 6

DEFAULT_ORDER_CAP = 4096
DEFAULT_SEED = 20240501


def order_cap():
    raw = os.environ.get("CCEXT_CAP_ORDER")
    if raw is None or raw == "":
        return DEFAULT_ORDER_CAP
    return int(raw)
