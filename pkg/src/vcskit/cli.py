"""Command-line surface: construct, verify, bound, search, encrypt, stack.

Exit status 0 on success, 1 on invalid input, 2 when a verification or
certificate check rejects (the report still goes to standard output).
Search progress is reported on standard error so stdout stays parseable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bounds, constructions, graphs, imaging, search
from .access import AccessStructure, Graph, from_graph
from .matrices import scheme_from_dict
from .verify import verify_scheme

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_REJECTED = 2


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path} is not valid JSON: {exc}") from exc


def _load_structure(path: str) -> AccessStructure:
    return AccessStructure.from_dict(_load_json(path))


def _load_graph(path: str) -> Graph:
    return Graph.from_dict(_load_json(path))


def _load_scheme(spec: str):
    if spec.startswith("builtin:"):
        return constructions.builtin(spec.split(":", 1)[1])
    return scheme_from_dict(_load_json(spec))


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _component_bicliques(g: Graph) -> list[constructions.Biclique]:
    """Connected components as bicliques (sides from a 2-coloring)."""
    out = []
    seen: set[int] = set()
    for start in range(1, g.vertex_count + 1):
        if start in seen or not g.neighbors(start):
            continue
        color = {start: 0}
        queue = [start]
        seen.add(start)
        while queue:
            v = queue.pop(0)
            for u in g.neighbors(v):
                if u not in color:
                    color[u] = 1 - color[v]
                    seen.add(u)
                    queue.append(u)
                elif color[u] == color[v]:
                    raise ValueError("a connected component is not bipartite, so not a biclique")
        left = tuple(v for v, c in sorted(color.items()) if c == 0)
        right = tuple(v for v, c in sorted(color.items()) if c == 1)
        out.append(constructions.Biclique(left, right))
    return out


def _cmd_construct(args) -> int:
    method = args.method
    if method == "k-of-k":
        if args.k is None:
            raise ValueError("k-of-k needs --k")
        scheme = constructions.k_out_of_k(args.k)
    elif method == "builtin":
        if args.name is None:
            raise ValueError("builtin needs --name")
        scheme = constructions.builtin(args.name)
    else:
        if args.graph is None:
            raise ValueError(f"{method} needs --graph")
        g = _load_graph(args.graph)
        if method == "lemma2":
            scheme = constructions.biclique_blocks_vcs4(g, _component_bicliques(g))
        elif method == "theorem5":
            coloring = graphs.strong_edge_coloring(g)
            scheme = constructions.compose_strong_layers(g, constructions.coloring_layers(coloring))
        elif method == "theorem6":
            covering = graphs.strong_biclique_covering(g)
            scheme = constructions.compose_strong_layers(g, covering)
        elif method == "biclique-cover":
            cover = graphs.biclique_cover(g)
            scheme = constructions.biclique_cover_vcs2(g, cover.bicliques)
        else:
            raise ValueError(f"unknown construction {method!r}")
    payload = scheme.to_dict()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        _emit(payload)
    return EXIT_OK


def _cmd_verify(args) -> int:
    gamma = _load_structure(args.structure)
    scheme = _load_scheme(args.scheme)
    report = verify_scheme(gamma, scheme, strict_direction=args.strict_direction)
    _emit(report.to_dict())
    return EXIT_OK if report.valid else EXIT_REJECTED


def _cmd_bound(args) -> int:
    gamma = _load_structure(args.structure)
    if args.check:
        cert = bounds.BoundCertificate.from_dict(_load_json(args.check))
        accepted = bounds.recheck(gamma, cert)
        _emit({"accepted": accepted, "certificate": cert.to_dict()})
        return EXIT_OK if accepted else EXIT_REJECTED
    if args.model is None:
        raise ValueError("bound search needs --model")
    cert = bounds.best_lower_bound(gamma, args.model, max_family=args.max_family)
    _emit(cert.to_dict())
    return EXIT_OK


def _cmd_search(args) -> int:
    gamma = _load_structure(args.structure)

    def progress(info: dict) -> None:
        print(" ".join(f"{k}={v}" for k, v in info.items()), file=sys.stderr)

    outcome = search.optimal_pixel_expansion(
        gamma, args.model, args.max_m, progress=progress if args.progress else None
    )
    _emit(outcome.to_dict())
    return EXIT_OK


def _cmd_encrypt(args) -> int:
    gamma = _load_structure(args.structure)
    scheme = _load_scheme(args.scheme)
    image = imaging.read_pbm(args.image)
    shares = imaging.encrypt_image(gamma, scheme, image, args.seed, layout=args.layout)
    os.makedirs(args.out_dir, exist_ok=True)
    paths = []
    for i, share in enumerate(shares.shares, start=1):
        path = os.path.join(args.out_dir, f"share_{i}.pbm")
        imaging.write_pbm(share, path)
        paths.append(path)
    _emit(
        {
            "shares": paths,
            "n": scheme.n,
            "m": scheme.m,
            "seed": args.seed,
            "layout": args.layout,
        }
    )
    return EXIT_OK


def _cmd_stack(args) -> int:
    images = [imaging.read_pbm(p) for p in args.shares]
    stacked = imaging.stack_images(images)
    if args.out:
        imaging.write_pbm(stacked, args.out)
        _emit({"out": args.out, "width": stacked.width, "height": stacked.height})
    else:
        sys.stdout.write(imaging.format_pbm(stacked))
    return EXIT_OK


def _cmd_graph(args) -> int:
    g = _load_graph(args.graph)
    if args.tool == "coloring":
        _emit(graphs.strong_edge_coloring(g).to_dict())
    elif args.tool == "matching":
        _emit(graphs.max_induced_matching(g).to_dict())
    elif args.tool == "cover":
        _emit(graphs.biclique_cover(g).to_dict())
    elif args.tool == "strong-cover":
        _emit(graphs.strong_biclique_covering(g).to_dict())
    elif args.tool == "hom":
        if args.target is None:
            raise ValueError("hom needs --target")
        h = _load_graph(args.target)
        sigma = graphs.find_onto_edge_homomorphism(g, h)
        _emit({"sigma": None if sigma is None else {str(k): v for k, v in sigma.items()}})
    else:
        raise ValueError(f"unknown graph tool {args.tool!r}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vcskit",
        description="Visual cryptography schemes: construct, verify, bound, search, encrypt.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a scheme")
    p.add_argument(
        "method",
        choices=["k-of-k", "lemma2", "theorem5", "theorem6", "biclique-cover", "builtin"],
    )
    p.add_argument("--k", type=int)
    p.add_argument("--graph")
    p.add_argument("--name")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_construct)

    p = sub.add_parser("verify", help="verify a scheme against a structure")
    p.add_argument("--structure", required=True)
    p.add_argument("--scheme", required=True, help="scheme JSON file or builtin:NAME")
    p.add_argument("--strict-direction", action="store_true")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("bound", help="search or check lower-bound certificates")
    p.add_argument("--structure", required=True)
    p.add_argument("--model", type=int, choices=[2, 3, 5])
    p.add_argument("--check", help="certificate JSON file to re-validate")
    p.add_argument("--max-family", type=int, default=bounds.DEFAULT_MAX_FAMILY)
    p.set_defaults(handler=_cmd_bound)

    p = sub.add_parser("search", help="exhaustive optimal pixel expansion")
    p.add_argument("--structure", required=True)
    p.add_argument("--model", type=int, choices=[2, 3, 5], required=True)
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--progress", action="store_true")
    p.set_defaults(handler=_cmd_search)

    p = sub.add_parser("encrypt", help="encrypt a PBM image into shares")
    p.add_argument("--structure", required=True)
    p.add_argument("--scheme", required=True)
    p.add_argument("--image", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--layout", choices=list(imaging.LAYOUTS), default=imaging.STRIP)
    p.set_defaults(handler=_cmd_encrypt)

    p = sub.add_parser("stack", help="stack (OR) share images")
    p.add_argument("shares", nargs="+")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_stack)

    p = sub.add_parser("graph", help="graph tools feeding the constructions")
    p.add_argument("tool", choices=["coloring", "matching", "cover", "strong-cover", "hom"])
    p.add_argument("--graph", required=True)
    p.add_argument("--target")
    p.set_defaults(handler=_cmd_graph)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
