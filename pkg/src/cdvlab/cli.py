"""Command-line orchestration: every pipeline behind one deterministic tool.

Exit codes: 0 success/holds, 3 obstruction found, 4 resource cap or
degeneracy, 5 input error.  All randomness is seeded, so a fixed config
reproduces byte-identical artifacts.  CDVLAB_THREADS caps inner
parallelism (the current evaluation loops are sequential, which honors
any cap).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import esr, polytopal, projplane, schrodinger, sigma5, signcells
from .graphs import (
    CapExceededError,
    DisconnectedError,
    Graph,
    graph_from_graph6,
    graph_from_text,
    graph_to_text,
)
from .linalg import kernel_basis, matrix_from_json
from .signcells import DimGuardExceededError

EXIT_OK = 0
EXIT_OBSTRUCTION = 3
EXIT_RESOURCE = 4
EXIT_INPUT = 5


@dataclass
class RunConfig:
    command: str
    graph_path: str | None = None
    matrix_path: str | None = None
    cert_path: str | None = None
    q: int | None = None
    k: int | None = None
    mode: str | None = None
    kind: str = "semivalid"
    edges_f: str | None = None
    cap_cycles: int = 100_000
    dim_guard: int = signcells.DEFAULT_DIM_GUARD
    polytope_dim_guard: int = polytopal.DEFAULT_POLYTOPE_DIM_GUARD
    samples: int = 0
    seed: int = 0
    out: str | None = None
    threads: int = field(default_factory=lambda: int(os.environ.get("CDVLAB_THREADS", "1")))


def _load_graph(path: str) -> Graph:
    with open(path) as fh:
        text = fh.read()
    try:
        return graph_from_text(text)
    except (ValueError, IndexError):
        return graph_from_graph6(text.strip().splitlines()[0])


def _load_matrix(path: str):
    with open(path) as fh:
        return matrix_from_json(json.load(fh))


def _parse_edges(spec: str) -> list[tuple[int, int]]:
    edges = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        u, v = part.split("-")
        edges.append((int(u), int(v)))
    return edges


def _emit(config: RunConfig, payload: dict, human: list[str]) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    for line in human:
        print(line)
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
        print(f"wrote {config.out}")
    else:
        sys.stdout.write(text)


def _cmd_mu_bounds(config: RunConfig) -> int:
    G = _load_graph(config.graph_path)
    S = None
    if config.matrix_path:
        S = schrodinger.validate_membership(G, _load_matrix(config.matrix_path))
    report = schrodinger.bounds_report(G, S)
    human = [f"n={G.n} m={G.m} muUpper={report['muUpper']}"]
    if S is not None:
        human.append(
            f"corank={report['corank']} sah={report['sah']['holds']} muLower={report['muLower']}"
        )
    _emit(config, report, human)
    return EXIT_OK


def _cmd_eta_certify(config: RunConfig) -> int:
    G = _load_graph(config.graph_path)
    S = schrodinger.validate_membership(G, _load_matrix(config.matrix_path))
    F = _parse_edges(config.edges_f) if config.edges_f else []
    cert = signcells.eta_lower_bound(G, S, F, dim_guard=config.dim_guard)
    payload = {
        "etaLower": cert.bound,
        "method": cert.method,
        "edges": [list(e) for e in cert.edge_set],
        "corank": S.corank(),
        "subspaceDim": cert.subspace.dim,
    }
    _emit(config, payload, [f"eta >= {cert.bound} via {cert.method}"])
    return EXIT_OK


def _cmd_sigma5(config: RunConfig) -> int:
    G = _load_graph(config.graph_path)
    verdict = sigma5.decide_sigma_le_5(G, cap=config.cap_cycles, seed=config.seed)
    payload = {
        "sigmaLe5": verdict.sigma_le_5,
        "generators": verdict.generators,
        "kernelDim": verdict.kernel_dim,
        "iValues": list(verdict.i_values),
    }
    if verdict.certificate is not None:
        payload["certificate"] = sigma5.certificate_to_json(verdict.certificate)
    human = [
        f"generators={verdict.generators} kernelDim={verdict.kernel_dim} "
        f"verdict={'sigma<=5' if verdict.sigma_le_5 else 'sigma>5'}"
    ]
    _emit(config, payload, human)
    return EXIT_OK if verdict.sigma_le_5 else EXIT_OBSTRUCTION


def _cmd_verify_cert(config: RunConfig) -> int:
    G = _load_graph(config.graph_path)
    with open(config.cert_path) as fh:
        data = json.load(fh)
    if "certificate" in data:
        data = data["certificate"]
    cert = sigma5.certificate_from_json(data)
    ok, reason = sigma5.verify_certificate(cert, G)
    _emit(config, {"valid": ok, "reason": reason}, [f"certificate valid: {ok} ({reason})"])
    return EXIT_OK if ok else EXIT_INPUT


def _cmd_projplane(config: RunConfig) -> int:
    report = projplane.separation_report(config.q, config.mode, dim_guard=config.dim_guard)
    keys = [k for k in ("muUpper", "etaLower", "lambdaLower", "sigmaLower") if k in report]
    human = [f"q={config.q} mode={config.mode} " + " ".join(f"{k}={report[k]}" for k in keys)]
    _emit(config, report, human)
    return EXIT_OK


def _cmd_fan(config: RunConfig) -> int:
    G = _load_graph(config.graph_path)
    L = kernel_basis(_load_matrix(config.matrix_path))
    if config.samples > 0:
        verdict = signcells.verify_representation_sampled(
            L, G, config.kind, samples=config.samples, seed=config.seed
        )
        payload = signcells.verdict_to_json(verdict)
        _emit(config, payload, [f"sampled verdict holds={verdict.holds} over {verdict.cells_checked} samples"])
        return EXIT_OK
    fan = signcells.classify_cells(signcells.enumerate_cells(L, config.dim_guard), G)
    verdict = signcells.verify_representation(L, G, config.kind, dim_guard=config.dim_guard)
    payload = {
        "fan": signcells.fan_to_json(fan),
        "verdict": signcells.verdict_to_json(verdict),
    }
    if verdict.holds and config.kind == "semivalid":
        sanity = signcells.fan_sanity(fan, G)
        payload["sanity"] = {"brokenCount": sanity.broken_count, "ok": sanity.ok}
    _emit(
        config,
        payload,
        [f"cells={len(fan.cells)} broken={len(fan.broken or ())} holds={verdict.holds}"],
    )
    return EXIT_OK


def _cmd_polytopal(config: RunConfig) -> int:
    G = _load_graph(config.graph_path)
    L = kernel_basis(_load_matrix(config.matrix_path))
    P = polytopal.build_polytopal_representation(L, G, dim_guard=config.polytope_dim_guard)
    cmap = polytopal.build_cellular_map(P, G)
    report = polytopal.verify_disjointness(P, cmap)
    payload = {
        "lattice": polytopal.lattice_to_json(P),
        "map": polytopal.map_to_json(P, cmap),
        "disjoint": report.ok,
        "antipodalPairs": report.pairs_checked,
    }
    _emit(
        config,
        payload,
        [
            f"vertices={len(P.vertex_coords)} faces={len(P.faces)} "
            f"antipodal pairs={report.pairs_checked} disjoint={report.ok}"
        ],
    )
    return EXIT_OK if report.ok else EXIT_OBSTRUCTION


def _cmd_esr_emit(config: RunConfig) -> int:
    G = _load_graph(config.graph_path)
    layout, ast = esr.build_phi(G, config.k)
    script = esr.serialize_smtlib(ast)
    stats = esr.formula_stats(ast)
    if config.out:
        with open(config.out + ".smt2", "w") as fh:
            fh.write(script)
        with open(config.out + ".ast.json", "w") as fh:
            json.dump(esr.ast_to_json(ast), fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {config.out}.smt2 and {config.out}.ast.json")
    else:
        sys.stdout.write(script)
    print(f"vars={stats['vars']} atoms={stats['atoms']} termSize={stats['totalTermSize']}")
    return EXIT_OK


_COMMANDS = {
    "mu-bounds": _cmd_mu_bounds,
    "eta-certify": _cmd_eta_certify,
    "sigma5": _cmd_sigma5,
    "verify-cert": _cmd_verify_cert,
    "projplane": _cmd_projplane,
    "fan": _cmd_fan,
    "polytopal": _cmd_polytopal,
    "esr-emit": _cmd_esr_emit,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdvlab",
        description="exact certificates for corank, sign-cell and embedding-obstruction bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph=True, matrix=False, matrix_required=False, out=True):
        if graph:
            p.add_argument(
                "--graph", dest="graph_path", required=True, help="graph file (text or graph6)"
            )
        if matrix:
            p.add_argument(
                "--matrix", dest="matrix_path", required=matrix_required, help="matrix JSON file"
            )
        if out:
            p.add_argument("--out", help="write the JSON payload here")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("mu-bounds", help="edge upper bound and corank/SAH lower certificate")
    common(p, matrix=True)

    p = sub.add_parser("eta-certify", help="eta lower bound via a constrained kernel")
    common(p, matrix=True, matrix_required=True)
    p.add_argument("--edges-F", dest="edges_f", default="", help="edges like 0-13,2-5")
    p.add_argument("--dim-guard", dest="dim_guard", type=int, default=signcells.DEFAULT_DIM_GUARD)

    p = sub.add_parser("sigma5", help="decide sigma <= 5, emit certificate when violated")
    common(p)
    p.add_argument("--cap-cycles", dest="cap_cycles", type=int, default=100_000)

    p = sub.add_parser("verify-cert", help="independently verify an obstruction certificate")
    common(p)
    p.add_argument("--cert", dest="cert_path", required=True)

    p = sub.add_parser("projplane", help="projective-plane separation reports")
    common(p, graph=False)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mode", required=True, choices=["prop_9_11", "thm_gap", "asymptotic"])
    p.add_argument("--dim-guard", dest="dim_guard", type=int, default=signcells.DEFAULT_DIM_GUARD)

    p = sub.add_parser("fan", help="enumerate/classify sign cells, verify representation clauses")
    common(p, matrix=True, matrix_required=True)
    p.add_argument("--kind", default="semivalid", choices=["valid", "semivalid"])
    p.add_argument("--dim-guard", dest="dim_guard", type=int, default=signcells.DEFAULT_DIM_GUARD)
    p.add_argument("--samples", type=int, default=0, help="use the sampled verifier instead")

    p = sub.add_parser("polytopal", help="build the polytopal representation and cellular map")
    common(p, matrix=True, matrix_required=True)
    p.add_argument(
        "--dim-guard",
        dest="polytope_dim_guard",
        type=int,
        default=polytopal.DEFAULT_POLYTOPE_DIM_GUARD,
    )

    p = sub.add_parser("esr-emit", help="emit the existential real-arithmetic sentence")
    common(p)
    p.add_argument("--k", type=int, required=True)
    return parser


def run(config: RunConfig) -> int:
    try:
        return _COMMANDS[config.command](config)
    except (CapExceededError, DimGuardExceededError, sigma5.DegeneratePositionError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (
        OSError,
        ValueError,
        KeyError,
        DisconnectedError,
        json.JSONDecodeError,
    ) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    fields = {k: v for k, v in vars(ns).items() if v is not None}
    config = RunConfig(**{k: v for k, v in fields.items() if k in RunConfig.__dataclass_fields__})
    code = run(config)
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    sys.exit(main())
