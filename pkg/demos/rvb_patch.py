"""Sampled bond-2 contractions of a kagome RVB patch versus the exact bond-3 network.

Run: python3 demos/rvb_patch.py [rows] [cols]
"""

import sys

import numpy as np

from bordertn.boundary import contract_kagome, expectation_by_boundary, rvb_exact_peps
from bordertn.interpolation import dense_expectation, make_plan, reconstruct_state
from bordertn.zoo import rvb_border_family


def main(rows=1, cols=2, seed=0):
    structure, family, target = rvb_border_family(rows, cols)
    rec = reconstruct_state(structure.tensor(), family, make_plan(family.degree, "complex"))
    err = (rec.state - target).norm() / target.norm()
    print(f"patch {rows}x{cols}: {structure.faces} faces, {len(rec.summands)} bond-2 summands, "
          f"state error {err:.2e}")

    exact = contract_kagome(rvb_exact_peps(rows, cols))
    print(f"exact bond-3 norm {exact.value.real:.6f} ({exact.multiply_count} multiplies)")

    rng = np.random.default_rng(seed)
    ops = {}
    for leg in target.legs:
        a = rng.normal(size=(leg.dim, leg.dim)) + 1j * rng.normal(size=(leg.dim, leg.dim))
        ops[leg.id] = a + a.conj().T
    plan = make_plan(2 * family.degree, "complex")
    res, reports = expectation_by_boundary(structure, family, ops, plan)
    ref = dense_expectation(target, target, ops)
    print(f"<O> from {len(reports)} sampled contractions: {res.value.real:.10g} "
          f"(dense {ref.real:.10g}, rel. error {abs(res.value - ref) / abs(ref):.2e})")
    print(f"sampled multiplies {sum(r.multiply_count for r in reports)}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:3]))
