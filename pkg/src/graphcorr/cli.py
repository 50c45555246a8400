"""Command-line front end.

Exit status: 0 on pass/accept, 1 on a mathematical rejection, 2 on I/O or
schema errors. Pass ``-`` as a file name to read standard input.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .complexla import TOL_RANK, TOL_VAL
from .correspondence import (
    Correspondence,
    CorrespondenceMorphism,
    dimension_matrix,
    graph_correspondence,
    sigma_correspondence,
    validate_correspondence,
    validate_correspondence_morphism,
)
from .errors import GraphcorrError, SchemaError
from .functor import (
    build_graph,
    essential_fullness,
    gamma_image_preimage,
    gamma_on_morphism,
    is_isomorphism,
    recover_graph_isomorphism,
)
from .graph import (
    DirectedGraph,
    GraphMorphism,
    adjacency_matrix,
    functional_graph,
    is_vertex_fixing_isomorphism,
    to_dot,
    validate_graph_morphism,
)
from .reports import Report

OK, REJECT, IO_ERROR = 0, 1, 2


class Rejection(Exception):
    """Raised by a command to emit ``documents`` and exit with status 1."""

    def __init__(self, documents):
        self.documents = documents


def report_dict(report: Report, **extra) -> dict:
    out = {
        "subject": report.subject,
        "status": "pass" if report.accepted else "fail",
        "violations": [{"clause": v.clause, "message": v.message, "indices": list(v.indices),
                        "residual": v.residual} for v in report.violations],
        "residuals": dict(report.residuals),
    }
    out.update(extra)
    return out


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str, kind: str):
    docs = io.parse_documents(_read(path))
    for d in docs:
        if d.kind == kind:
            return d.value
    found = sorted({d.kind for d in docs})
    raise SchemaError(f"expected a {kind} document, found {found}", "kind")


def _base(args) -> dict:
    return {"tol_val": args.tol_val, "tol_rank": args.tol_rank, "seed": args.seed}


def _check_correspondence(X: Correspondence, args, label="correspondence"):
    rep = validate_correspondence(X, args.tol_val)
    if not rep.accepted:
        raise Rejection([report_dict(rep, role=label, **_base(args))])


def _check_morphism(psi: CorrespondenceMorphism, args):
    _check_correspondence(psi.domain, args, "domain")
    _check_correspondence(psi.codomain, args, "codomain")
    rep = validate_correspondence_morphism(psi, args.tol_val)
    if not rep.accepted:
        raise Rejection([report_dict(rep, **_base(args))])


def cmd_validate(args):
    reports = []
    for doc in io.parse_documents(_read(args.file)):
        if doc.kind == "graph":
            reports.append(report_dict(Report("graph"), **_base(args)))
        elif doc.kind == "correspondence":
            reports.append(report_dict(validate_correspondence(doc.value, args.tol_val), **_base(args)))
        elif doc.kind == "graph_morphism":
            reports.append(report_dict(validate_graph_morphism(doc.value), **_base(args)))
        elif doc.kind == "correspondence_morphism":
            psi = doc.value
            for role, X in (("domain", psi.domain), ("codomain", psi.codomain)):
                reports.append(report_dict(validate_correspondence(X, args.tol_val), role=role, **_base(args)))
            reports.append(report_dict(validate_correspondence_morphism(psi, args.tol_val), **_base(args)))
    if not reports:
        raise SchemaError("no validatable document found", "kind")
    out = reports[0] if len(reports) == 1 else reports
    if any(r["status"] != "pass" for r in reports):
        raise Rejection(out)
    return out


def cmd_graph_to_corr(args):
    return graph_correspondence(_load(args.file, "graph"))


def cmd_sigma(args):
    vertices, sigma = io.parse_sigma(_read(args.file))
    return [functional_graph(sigma, vertices), sigma_correspondence(sigma, vertices)]


def _basis_report(result, X, args) -> dict:
    witness_rep = validate_correspondence_morphism(result.witness, args.tol_val)
    blocks = []
    for (u, v), vecs in result.basis.blocks.items():
        if vecs:
            blocks.append({"range": u, "source": v, "vectors": [io.encode_vector(b) for b in vecs]})
    ok = witness_rep.accepted and adjacency_matrix(result.graph) == dimension_matrix(X, args.tol_rank)
    return {
        "subject": "characterization",
        "status": "pass" if ok else "fail",
        "blocks": blocks,
        "dimension_matrix": dimension_matrix(X, args.tol_rank).to_dict(),
        "witness_residual": witness_rep.max_residual,
        "basis_residual": result.basis.residual(),
        "edges": list(result.graph.edge_ids),
        **_base(args),
    }


def cmd_corr_to_graph(args):
    X = _load(args.file, "correspondence")
    _check_correspondence(X, args)
    result = build_graph(X, args.tol_rank, args.tol_val)
    out = [result.graph, result.witness, _basis_report(result, X, args)]
    if out[-1]["status"] != "pass":
        raise Rejection(out)
    return out


def cmd_roundtrip(args):
    F: DirectedGraph = _load(args.file, "graph")
    phi = recover_graph_isomorphism(F, args.tol_rank)
    ok = is_vertex_fixing_isomorphism(phi) and adjacency_matrix(phi.domain) == adjacency_matrix(F)
    rep = {"subject": "roundtrip", "status": "pass" if ok else "fail",
           "adjacency": adjacency_matrix(F).to_dict(), **_base(args)}
    if not ok:
        raise Rejection([phi, rep])
    return [phi, rep]


def cmd_functor(args):
    phi: GraphMorphism = _load(args.file, "graph_morphism")
    rep = validate_graph_morphism(phi)
    if not rep.accepted:
        raise Rejection(report_dict(rep, **_base(args)))
    return gamma_on_morphism(phi)


def cmd_gamma_preimage(args):
    psi = _load(args.file, "correspondence_morphism")
    try:
        phi = gamma_image_preimage(psi, args.tol_val)
    except GraphcorrError as exc:
        raise Rejection({"subject": "gamma_preimage", "status": "fail", "preimage": "error",
                         "message": str(exc), **_base(args)})
    if phi is None:
        raise Rejection({"subject": "gamma_preimage", "status": "fail", "preimage": "absent", **_base(args)})
    return [phi, {"subject": "gamma_preimage", "status": "pass", "preimage": "found", **_base(args)}]


def cmd_essential_fullness(args):
    psi = _load(args.file, "correspondence_morphism")
    _check_morphism(psi, args)
    sq = essential_fullness(psi, args.tol_rank, args.tol_val)
    ue = is_isomorphism(sq.upsilon_E, args.tol_val)
    uf = is_isomorphism(sq.upsilon_F, args.tol_val)
    residual = sq.residual
    ok = ue and uf and residual <= 10 * args.tol_val
    rep = {
        "subject": "essential_fullness",
        "status": "pass" if ok else "fail",
        "square_residual": residual,
        "upsilon_E_isomorphism": ue,
        "upsilon_F_isomorphism": uf,
        "upsilon_E_residual": validate_correspondence_morphism(sq.upsilon_E, args.tol_val).max_residual,
        "upsilon_F_residual": validate_correspondence_morphism(sq.upsilon_F, args.tol_val).max_residual,
        **_base(args),
    }
    out = [sq.E, sq.F, sq.phi, sq.upsilon_E, sq.upsilon_F, rep]
    if not ok:
        raise Rejection(out)
    return out


def cmd_dim_matrix(args):
    X = _load(args.file, "correspondence")
    _check_correspondence(X, args)
    return {"subject": "dimension_matrix", "status": "pass",
            "dimension_matrix": dimension_matrix(X, args.tol_rank).to_dict(), **_base(args)}


def cmd_dot(args):
    return to_dot(_load(args.file, "graph"))


COMMANDS = {
    "validate": (cmd_validate, "validate any document"),
    "graph-to-corr": (cmd_graph_to_corr, "graph correspondence of a graph"),
    "sigma": (cmd_sigma, "functional graph and correspondence of a self-map of V"),
    "corr-to-graph": (cmd_corr_to_graph, "extract a graph, isomorphism witness and block bases"),
    "roundtrip": (cmd_roundtrip, "rebuild a graph from its correspondence and pair it with the original"),
    "functor": (cmd_functor, "image of a graph morphism under the functor"),
    "gamma-preimage": (cmd_gamma_preimage, "decide whether a morphism comes from a graph morphism"),
    "essential-fullness": (cmd_essential_fullness, "complete a morphism to a commuting square"),
    "dim-matrix": (cmd_dim_matrix, "block dimension matrix of a correspondence"),
    "dot": (cmd_dot, "Graphviz export of a graph"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-val", type=float, default=TOL_VAL, help="validation tolerance (default %(default)g)")
    common.add_argument("--tol-rank", type=float, default=TOL_RANK, help="rank cutoff (default %(default)g)")
    common.add_argument("--seed", type=int, default=0, help="seed recorded in reports (default 0)")
    common.add_argument("-o", "--output", default="-", help="output file (default stdout)")
    parser = argparse.ArgumentParser(prog="graphcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (func, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("file", help="input file, or - for stdin")
        p.set_defaults(func=func)
    return parser


def _emit(result, path: str):
    text = result if isinstance(result, str) else io.dumps(result)
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return IO_ERROR if exc.code else OK
    try:
        try:
            result, status = args.func(args), OK
        except Rejection as rej:
            result, status = rej.documents, REJECT
        except SchemaError:
            raise
        except GraphcorrError as exc:
            print(f"graphcorr {args.command}: {exc}", file=sys.stderr)
            return REJECT
        _emit(result, args.output)
        return status
    except (SchemaError, OSError, UnicodeDecodeError) as exc:
        print(f"graphcorr {args.command}: {exc}", file=sys.stderr)
        return IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
