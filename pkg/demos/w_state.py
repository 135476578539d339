"""The W state as the limit of product states and of a bond-2 ring.

Run: python3 demos/w_state.py [L]
"""

import sys

from bordertn.conversions import analyze_degeneration
from bordertn.interpolation import interpolate_at_zero, make_plan
from bordertn.structures import w_state
from bordertn.zoo import symbolic_w_trace, w_border_mps, w_product_state


def show(trace):
    """Render ``{a: {b: c}}`` as a sum of ``c eps^a w^b`` terms."""
    terms = [f"{c} eps^{a}" + (f" w^{b}" if b else "") for a, row in sorted(trace.items()) for b, c in row.items()]
    return " + ".join(terms) or "0"


def main(L=5):
    target = w_state(L)
    value, _ = interpolate_at_zero(lambda x: w_product_state(L, x), make_plan(L - 1, "real"))
    print(f"W({L}) from {L} product states: error {(value - target).norm():.2e}")

    family, ring = w_border_mps(L)
    cert = analyze_degeneration(ring.tensor(), family, target.relabel({p: f"v{p}" for p in range(L)}))
    print(f"bond-2 ring degenerates with d={cert.d}, e={cert.e}")

    for m in range(L + 1):
        word = [0] * (L - m) + [1] * m
        print(f"  tr(M0^{L - m} M1^{m}) = {show(symbolic_w_trace(word, L))}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:2]))
