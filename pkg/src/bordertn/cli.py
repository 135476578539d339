"""Command-line front end. Every command prints one JSON report.

Failures print ``{"error": {"type": ..., "message": ...}}`` and exit nonzero.
Output depends only on the arguments (and ``--seed``), never on timing.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import boundary, cost, interpolation, io, zoo
from .conversions import (CertificateError, DegenerationCertificate, LocalMapFamily, ScaledFamily,
                          analyze_degeneration)
from .structures import (EntanglementStructure, LatticeDescriptor, PlaquetteSpec, lattice_structure,
                         w_state)
from .tensor import DenseTensor, apply_local_maps

DENSE_LIMIT = 1 << 16
REVERIFY_POINT = 0.37 + 0.21j


class CliError(Exception):
    """Reported as structured JSON with exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error("usage", message, None)
        sys.exit(2)


def _emit_error(kind: str, message: str, out: Optional[str]) -> None:
    text = io.dumps({"error": {"type": kind, "message": message}})
    print(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def parse_size(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.lower().split("x"))
    except ValueError:
        raise CliError(f"malformed size {text!r}; expected e.g. 4 or 2x3") from None


def parse_plaquette(text: Optional[str]) -> Optional[PlaquetteSpec]:
    """``lambda``, ``mamu:2,2,2``, ``max_entangled:2`` or ``ghz:3,2`` (parties, levels)."""
    if text is None:
        return None
    kind, _, args = text.partition(":")
    nums = [int(x) for x in args.split(",") if x]
    if kind == "lambda":
        return PlaquetteSpec.lam()
    if kind == "mamu":
        return PlaquetteSpec.mamu(*nums)
    if kind == "max_entangled":
        return PlaquetteSpec.max_entangled(*nums)
    if kind == "ghz":
        return PlaquetteSpec.ghz(*nums)
    raise CliError(f"unknown plaquette {text!r}")


def load_structure(text: str, plaquette: Optional[str] = None) -> EntanglementStructure:
    """A JSON file written by ``build`` or a descriptor ``kind:size`` such as ``kagome:1x2``."""
    if text.endswith(".json"):
        obj = _read(text)
        return EntanglementStructure.from_dict(obj.get("structure", obj))
    kind, _, size = text.partition(":")
    if not size:
        raise CliError(f"structure {text!r} needs a size, e.g. {kind}:4")
    return lattice_structure(LatticeDescriptor(kind, parse_size(size)), parse_plaquette(plaquette))


def _read(path: str):
    try:
        return io.load_json(path)
    except FileNotFoundError:
        raise CliError(f"no such file: {path}") from None
    except ValueError as exc:
        raise CliError(f"malformed JSON in {path}: {exc}") from None


@dataclass
class Pipeline:
    """Source tensor, scaled family and the dense state it should reproduce."""

    name: str
    source: DenseTensor
    family: ScaledFamily
    target: Optional[DenseTensor]
    structure: Optional[EntanglementStructure] = None


def resolve_pipeline(text: str) -> Pipeline:
    """``rvb:RxC``, ``lambda:RxC``, ``w:L`` or a JSON file with source, family and target."""
    kind, _, size = text.partition(":")
    if kind in ("rvb", "lambda") and size:
        rows, cols = parse_size(size)
        st, fam, target = zoo.rvb_border_family(rows, cols, project=(kind == "rvb"))
        return Pipeline(text, st.tensor(), fam, target, st)
    if kind == "w" and size:
        L = parse_size(size)[0]
        fam, st = zoo.w_border_mps(L)
        target = w_state(L).relabel({p: f"v{p}" for p in range(L)})
        return Pipeline(text, st.tensor(), ScaledFamily(fam, fam.approx_degree), target, st)
    if text.endswith(".json"):
        obj = _read(text)
        try:
            source = io.tensor_from_dict(obj["source"])
            # JSON object keys are strings; match them to the source leg ids
            by_name = {str(leg.id): leg.id for leg in source.legs}
            fam = LocalMapFamily.from_dict(obj["family"], key_type=lambda k: by_name.get(k, k))
            d = obj.get("prefactor_exponent", fam.approx_degree)
            target = io.tensor_from_dict(obj["target"]) if "target" in obj else None
        except KeyError as exc:
            raise CliError(f"{text} lacks key {exc}") from None
        if d is None:
            raise CliError("family file needs prefactor_exponent or approx_degree")
        return Pipeline(text, source, ScaledFamily(fam, int(d)), target)
    raise CliError(f"unknown family {text!r}; use rvb:RxC, lambda:RxC, w:L or a JSON file")


def parse_observable(text: Optional[str], legs, seed: int) -> Optional[Dict]:
    """``identity``, ``random`` (random Hermitian product, seeded) or a JSON file ``{leg: matrix}``."""
    if text is None or text == "identity":
        return None
    if text == "random":
        rng = np.random.default_rng(seed)
        out = {}
        for leg in legs:
            a = rng.normal(size=(leg.dim, leg.dim)) + 1j * rng.normal(size=(leg.dim, leg.dim))
            out[leg.id] = a + a.conj().T
        return out
    if text.endswith(".json"):
        obj = _read(text)
        by_name = {str(leg.id): leg.id for leg in legs}
        try:
            return {by_name[k]: io.matrix_from_json(v) for k, v in obj.items()}
        except KeyError as exc:
            raise CliError(f"observable acts on unknown leg {exc}") from None
    raise CliError(f"unknown observable {text!r}")


def _complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _rel(a, b) -> float:
    if isinstance(a, DenseTensor):
        return (a - b).norm() / max(b.norm(), 1e-300)
    return abs(a - b) / max(abs(b), 1e-300)


def _mode(args, default: str = "real") -> str:
    return args.mode or default


def _plan(args, degree: int, default_mode: str = "real"):
    return interpolation.make_plan(degree, _mode(args, default_mode), args.radius, args.points)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def reverify(source: DenseTensor, family: LocalMapFamily, cert: DegenerationCertificate,
             target: DenseTensor, tol: float) -> None:
    """Independent check of a certificate before it leaves the process.

    The certified expansion must agree with a direct evaluation of the maps at
    a generic point, and its lowest term must be proportional to the target.
    """
    eps = REVERIFY_POINT
    direct = apply_local_maps(source, family.evaluate(eps))
    terms = {cert.d: cert.leading, **cert.residual_terms}
    series = None
    for k in sorted(terms):
        t = terms[k] * (eps ** k)
        series = t if series is None else series + t
    scale = max(direct.norm(), 1e-300)
    if (series - direct).norm() / scale > max(tol, 1e-9):
        raise CertificateError("certificate expansion disagrees with direct evaluation")
    if (cert.leading - target * cert.proportionality).norm() > tol * max(cert.leading.norm(), 1e-300):
        raise CertificateError("leading term is not proportional to the target")


def certificate_report(name: str, cert: DegenerationCertificate, label: str) -> dict:
    c = complex(cert.proportionality)
    out = cert.to_dict()
    out.update({
        "name": name,
        "leading": label,
        "proportionality": c.real if abs(c.imag) <= 1e-12 * max(abs(c), 1.0) else [c.real, c.imag],
        "warnings": list(cert.warnings),
        "verified": True,
    })
    return out


def certify_entry(entry: zoo.ZooEntry, tol: float) -> dict:
    cert = entry.certify(tol)
    reverify(entry.source, entry.family, cert, entry.target, tol)
    report = certificate_report(entry.name, cert, entry.target_label)
    report["description"] = entry.description
    report.update({k: v for k, v in entry.extra.items() if k not in report})
    return report


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_build(args) -> dict:
    st = load_structure(args.structure, args.plaquette)
    out = {
        "structure": st.to_dict(),
        "faces": st.faces,
        "vertex_dims": st.vertex_dims(),
        "bond_dimension": st.bond_dimension(),
    }
    size = int(np.prod(list(st.vertex_dims().values())))
    if args.tensor:
        if size > DENSE_LIMIT:
            raise CliError(f"dense tensor has {size} entries (limit {DENSE_LIMIT})")
        out["tensor"] = io.tensor_to_dict(st.tensor())
    return out


def cmd_zoo(args) -> dict:
    if args.family:
        return certify_entry(zoo.zoo_entry(args.family), args.tol)
    return {"entries": {name: certify_entry(zoo.zoo_entry(name), args.tol) for name in sorted(zoo.ZOO)}}


def cmd_verify(args) -> dict:
    if args.family is None:
        raise CliError("verify needs --family")
    if args.family in zoo.ZOO:
        return certify_entry(zoo.zoo_entry(args.family), args.tol)
    pipe = resolve_pipeline(args.family)
    if pipe.target is None:
        raise CliError("family file has no target tensor to certify against")
    fam = pipe.family.family
    cert = analyze_degeneration(pipe.source, fam, pipe.target, args.tol)
    reverify(pipe.source, fam, cert, pipe.target, args.tol)
    return certificate_report(pipe.name, cert, "target")


def cmd_reconstruct(args) -> dict:
    pipe = resolve_pipeline(_need(args.family, "--family"))
    plan = _plan(args, pipe.family.degree)
    rec = interpolation.reconstruct_state(pipe.source, pipe.family, plan, holdout_tol=args.holdout_tol)
    out = {
        "family": pipe.name,
        "degree": pipe.family.degree,
        "plan": plan.to_dict(),
        "holdout_error": rec.holdout_error,
        "summands": len(rec.summands),
    }
    if pipe.target is not None:
        out["relative_error"] = _rel(rec.state, pipe.target)
    if args.tensor:
        out["state"] = io.tensor_to_dict(rec.state)
    return out


def cmd_expect(args) -> dict:
    pipe = resolve_pipeline(_need(args.family, "--family"))
    legs = pipe.target.legs if pipe.target is not None else pipe.family.apply(pipe.source, 0.5).legs
    ops = parse_observable(args.observable, legs, args.seed)
    plan = _plan(args, 2 * pipe.family.degree)
    out = {"family": pipe.name, "observable": args.observable or "identity"}
    if args.chi is not None or args.boundary:
        if pipe.structure is None:
            raise CliError("boundary contraction needs a lattice family such as rvb:RxC")
        res, reports = boundary.expectation_by_boundary(pipe.structure, pipe.family, ops, plan, chi=args.chi)
        out["contractions"] = [r.to_dict() for r in reports]
    else:
        task = interpolation.ExpectationTask(pipe.source, pipe.family, ops)
        run = interpolation.expectation_real if _mode(args) == "real" else interpolation.expectation_complex
        res = run(task, plan, args.holdout_tol)
    out.update(res.to_dict())
    if pipe.target is not None and pipe.target.size <= DENSE_LIMIT:
        ref = interpolation.dense_expectation(pipe.target, pipe.target, ops)
        out["dense_value"] = _complex(ref)
        out["relative_error"] = _rel(res.value, ref)
    return out


def _network_from_args(args) -> boundary.PepsNetwork:
    if args.family:
        kind, _, size = args.family.partition(":")
        if kind not in ("rvb", "lambda") or not size:
            raise CliError("contract --family accepts rvb:RxC or lambda:RxC")
        rows, cols = parse_size(size)
        return boundary.rvb_exact_peps(rows, cols, project=(kind == "rvb"))
    if args.square:
        Lx, Ly = _two(parse_size(args.square))
        return boundary.square_peps(Lx, Ly, args.D1, args.D2, args.d, seed=args.seed)
    if args.kagome:
        rows, cols = _two(parse_size(args.kagome))
        K = (args.K1 or args.D1, args.K2 or args.D2, args.K3 or args.D3 or args.D1)
        D = (args.D1, args.D2, args.D3 or args.D1)
        return boundary.kagome_peps(rows, cols, K, D, args.d, seed=args.seed)
    raise CliError("contract needs --square LxxLy, --kagome RxC or --family")


def _two(size: tuple) -> tuple:
    if len(size) != 2:
        raise CliError("lattice size must look like 4x4")
    return size


def cmd_contract(args) -> dict:
    net = _network_from_args(args)
    chi = None if args.exact else args.chi
    if chi is None and not args.exact:
        raise CliError("contract needs --chi or --exact")
    rep = boundary.boundary_contract(net, None, chi)
    out = rep.to_dict()
    out["sites"] = len(net.sites)
    if args.dense:
        ref = boundary.dense_contract(net)
        out["dense_value"] = _complex(ref)
        out["relative_error"] = _rel(rep.value, ref)
    return out


def cmd_cost(args) -> dict:
    if args.rvb is not None:
        ex = cost.cost_exact_rvb(args.rvb, 3, args.d)
        bd = cost.cost_exact_rvb(args.rvb, 2, args.d)
        return {"L": args.rvb, "exact_D3": ex["exact"], "degeneration_D2": bd["degeneration"],
                "samples": bd["samples"], "ratio": ex["exact"] / bd["degeneration"]}
    chi = _need(args.chi, "--chi")
    if args.square:
        value = cost.cost_square(chi, args.D1, args.D2, args.d, args.Cmm, args.Csvd)
        return {"schedule": "square", "cost": value}
    if args.kagome:
        D = (args.D1, args.D2, args.D3 or args.D1)
        K = (args.K1 or D[0], args.K2 or D[1], args.K3 or D[2])
        value = cost.cost_kagome(chi, args.d, D, None, K, None, args.Cmm, args.Csvd)
        return {"schedule": "kagome", "cost": value}
    raise CliError("cost needs --square, --kagome or --rvb L")


def cmd_demo_rvb(args) -> dict:
    """Degeneration certificate, lattice lift, reconstruction and expectations on an RVB patch."""
    rows, cols = _two(parse_size(args.size))
    tol = args.tol
    entry = zoo.zoo_entry("lambda_degeneration_222")
    cert = certify_entry(entry, tol)
    pipe = resolve_pipeline(f"rvb:{rows}x{cols}")
    F = pipe.structure.faces
    rec = interpolation.reconstruct_state(pipe.source, pipe.family, _plan(args, pipe.family.degree, "complex"))
    exact = boundary.contract_kagome(boundary.rvb_exact_peps(rows, cols))
    ops = parse_observable("random", pipe.target.legs, args.seed)
    res, reports = boundary.expectation_by_boundary(pipe.structure, pipe.family, ops,
                                                    _plan(args, 2 * pipe.family.degree, "complex"), chi=args.chi)
    ref = interpolation.dense_expectation(pipe.target, pipe.target, ops)
    return {
        "patch": [rows, cols],
        "faces": F,
        "certificate": cert,
        "reconstruction": {"samples": len(rec.summands), "relative_error": _rel(rec.state, pipe.target)},
        "norm_exact_bond3": _complex(exact.value),
        "norm_dense": pipe.target.norm() ** 2,
        "expectation": {
            "samples": len(reports),
            "value": _complex(res.value),
            "dense_value": _complex(ref),
            "relative_error": _rel(res.value, ref),
            "sample_multiply_count": sum(r.multiply_count for r in reports),
            "exact_multiply_count": exact.multiply_count,
        },
    }


def cmd_demo_w(args) -> dict:
    """W(L) from the product-state family and from the bond-2 ring, plus exact trace identities."""
    L = args.L
    target = w_state(L)
    plan = _plan(args, L - 1)
    state, _ = interpolation.interpolate_at_zero(lambda eps: zoo.w_product_state(L, eps), plan)
    pipe = resolve_pipeline(f"w:{L}")
    rec = interpolation.reconstruct_state(pipe.source, pipe.family, _plan(args, pipe.family.degree))
    traces = {
        "tr(M0^L)": zoo.symbolic_w_trace([0] * L, L),
        **{f"tr(M0^{L - m} M1^{m})": zoo.symbolic_w_trace([0] * (L - m) + [1] * m, L) for m in range(1, L)},
    }
    return {
        "L": L,
        "product_family_error": _rel(state, target),
        "ring_family_error": _rel(rec.state, pipe.target),
        "traces": {k: {str(a): {str(b): c for b, c in v.items()} for a, v in t.items()} for k, t in traces.items()},
    }


def _need(value, flag: str):
    if value is None:
        raise CliError(f"missing required option {flag}")
    return value


COMMANDS = {
    "build": cmd_build,
    "zoo": cmd_zoo,
    "verify": cmd_verify,
    "reconstruct": cmd_reconstruct,
    "expect": cmd_expect,
    "contract": cmd_contract,
    "cost": cmd_cost,
    "demo-rvb": cmd_demo_rvb,
    "demo-w": cmd_demo_w,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="also write the JSON report to this path")
    common.add_argument("--tol", type=float, default=1e-10)

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--mode", choices=("real", "complex"), help="sample points (default real; demo-rvb complex)")
    sampling.add_argument("--points", type=int, help="number of sample points (more than degree+1 oversamples)")
    sampling.add_argument("--radius", type=float)
    sampling.add_argument("--holdout-tol", type=float, default=interpolation.HOLDOUT_TOL)

    lattice = argparse.ArgumentParser(add_help=False)
    lattice.add_argument("--chi", type=int)
    lattice.add_argument("--D1", type=int, default=2)
    lattice.add_argument("--D2", type=int, default=2)
    lattice.add_argument("--D3", type=int)
    lattice.add_argument("--K1", type=int)
    lattice.add_argument("--K2", type=int)
    lattice.add_argument("--K3", type=int)
    lattice.add_argument("--d", type=int, default=2)

    p = _Parser(prog="bordertn", description="Border-rank tensor network toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", parents=[common], help="build an entanglement structure")
    b.add_argument("--structure", required=True, help="kind:size (cycle:4, kagome:1x2, ...) or JSON")
    b.add_argument("--plaquette", help="lambda | mamu:2,2,2 | max_entangled:2 | ghz:P,L")
    b.add_argument("--tensor", action="store_true", help="include the dense structure tensor")

    z = sub.add_parser("zoo", parents=[common], help="certify the catalogue of conversions")
    z.add_argument("--family", choices=sorted(zoo.ZOO))

    v = sub.add_parser("verify", parents=[common], help="certify one degeneration")
    v.add_argument("--family", help="zoo name, rvb:RxC, lambda:RxC, w:L or JSON file")

    r = sub.add_parser("reconstruct", parents=[common, sampling], help="rebuild a state from samples")
    r.add_argument("--family")
    r.add_argument("--tensor", action="store_true", help="include the reconstructed tensor")

    e = sub.add_parser("expect", parents=[common, sampling], help="interpolated expectation value")
    e.add_argument("--family")
    e.add_argument("--observable", help="identity | random | JSON file {leg: matrix}")
    e.add_argument("--chi", type=int, help="contract samples with boundary MPS at this chi")
    e.add_argument("--boundary", action="store_true", help="use exact boundary MPS for samples")

    c = sub.add_parser("contract", parents=[common, lattice], help="boundary-MPS contraction")
    c.add_argument("--square", metavar="LXxLY", help="random square PEPS of this size")
    c.add_argument("--kagome", metavar="ROWSxCOLS", help="random kagome PEPS of this size")
    c.add_argument("--family", help="rvb:RxC or lambda:RxC exact bond-3 network")
    c.add_argument("--exact", action="store_true", help="no truncation")
    c.add_argument("--dense", action="store_true", help="also report the dense oracle")

    k = sub.add_parser("cost", parents=[common, lattice], help="evaluate the cost models")
    k.add_argument("--square", action="store_true", help="square-lattice bulk step")
    k.add_argument("--kagome", action="store_true", help="kagome upper bound over the three step types")
    k.add_argument("--Cmm", type=float, default=1.0)
    k.add_argument("--Csvd", type=float, default=1.0)
    k.add_argument("--rvb", type=int, metavar="L", help="exact vs sampled RVB cost at size L")

    dr = sub.add_parser("demo-rvb", parents=[common, sampling], help="end-to-end RVB border PEPS")
    dr.add_argument("--size", default="1x2")
    dr.add_argument("--chi", type=int)

    dw = sub.add_parser("demo-w", parents=[common, sampling], help="W-state border MPS")
    dw.add_argument("--L", type=int, default=4)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except (CliError, CertificateError, interpolation.DegreeError) as exc:
        _emit_error(type(exc).__name__, str(exc), args.out)
        return 1
    except MemoryError as exc:
        _emit_error("BudgetExceeded", str(exc), args.out)
        return 1
    except (ValueError, KeyError) as exc:
        _emit_error(type(exc).__name__, str(exc).strip("'\""), args.out)
        return 1
    text = io.dumps(report)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
