"""Command line: ``ncf4 gb PROBLEM`` and ``ncf4 verify PROBLEM --basis FILE CERTFILE``.

Exit codes: 0 complete basis (or every certificate verified), 2 truncated, 1 error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from .arena import MonomialStore, PolynomialStore
from .f4 import GBConfig, compute_gb
from .io import ParseError, format_poly, parse_poly, parse_problem
from .proof import CertificateError, format_certificate, parse_certificate, verify

EXIT_OK, EXIT_ERROR, EXIT_TRUNCATED = 0, 1, 2


def _positive(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def _on_off(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncf4", description="Noncommutative F4 Groebner bases over Z_p and Q.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log per-iteration statistics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    gb = sub.add_parser("gb", help="compute a (possibly truncated) Groebner basis")
    gb.add_argument("problem", type=Path)
    gb.add_argument("--degbound", type=_positive, metavar="N")
    gb.add_argument("--maxiter", type=_positive, metavar="N")
    gb.add_argument("--threads", type=int, default=1, metavar="T")
    gb.add_argument("--tracer", type=_on_off, default=True, metavar="on|off")
    gb.add_argument("--gm", type=_on_off, default=False, metavar="on|off")
    gb.add_argument("--proof", choices=("none", "incremental", "full"), default="none")
    gb.add_argument("--output", type=Path, metavar="PATH", help="basis file (default: stdout)")
    gb.add_argument("--proof-output", type=Path, metavar="PATH",
                    help="certificate file (default: PATH of --output with suffix .cert, else stderr)")

    ver = sub.add_parser("verify", help="check certificates against a problem and a basis file")
    ver.add_argument("problem", type=Path)
    ver.add_argument("--basis", type=Path, required=True, metavar="FILE")
    ver.add_argument("certificates", type=Path)
    return parser


@contextmanager
def _sink(path: Path | None, fallback):
    if path is None:
        yield fallback
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def run_gb(args) -> int:
    problem = parse_problem(args.problem.read_text(encoding="utf-8"))
    if args.threads < 1:
        raise ValueError("--threads must be at least 1")
    fld = problem.field
    monos = MonomialStore(len(problem.varnames), problem.ordering.key)
    polys = PolynomialStore(monos, fld)
    inputs = [polys.intern([(c, monos.intern(w)) for w, c in p.items()]) for p in problem.polys]
    config = GBConfig(degree_bound=args.degbound, max_iterations=args.maxiter, gm_filter=args.gm,
                      proof_mode=args.proof, thread_count=args.threads, tracer_enabled=args.tracer)
    result = compute_gb(polys, inputs, config)

    with _sink(args.output, sys.stdout) as out:
        for g in result.basis:
            terms = [(c, monos.word(m)) for c, m in polys.terms(g)]
            out.write(format_poly(terms, problem.varnames, fld) + "\n")
    if result.certificates is not None:
        cert_path = args.proof_output
        if cert_path is None and args.output is not None:
            cert_path = args.output.with_suffix(".cert")
        with _sink(cert_path, sys.stderr) as out:
            for cert in result.certificates:
                out.write(format_certificate(cert, problem.varnames, fld) + "\n")
    logging.getLogger(__name__).info("%s after %d iterations, %d elements", result.status,
                                     result.stats["iterations"], len(result.basis))
    return EXIT_OK if result.complete else EXIT_TRUNCATED


def run_verify(args) -> int:
    problem = parse_problem(args.problem.read_text(encoding="utf-8"))
    fld = problem.field
    names = {v: i + 1 for i, v in enumerate(problem.varnames)}
    basis = []
    for lineno, line in enumerate(args.basis.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            basis.append({} if line == "0" else parse_poly(line, names, fld, lineno))
    ok = True
    for lineno, line in enumerate(args.certificates.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        cert = parse_certificate(line, problem.varnames, fld, lineno)
        good = verify(cert, problem.polys, basis, fld)
        print(f"{'OK' if good else 'FAIL'} g{cert.index}")
        ok &= good
    return EXIT_OK if ok else EXIT_ERROR


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run_gb(args) if args.command == "gb" else run_verify(args)
    except (ParseError, CertificateError, OSError, ValueError) as exc:
        print(f"ncf4: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
