"""Command-line front end.

Exit codes: 0 every checked claim holds, 2 input error, 3 cover hypothesis
not met, 4 a claim was falsified.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .complex_core import ComplexError, FilteredComplex, format_complex, format_subcomplex, load_complex, load_subcomplex
from .excision import excise_barcodes, verify_persistent_excision, workload
from .gf_linalg import is_prime
from .homology import InducedMapError
from .persistence import barcode, reduce
from .sequences import (
    CHAIN_ONLY,
    EXACT,
    CoverViolation,
    SequenceContext,
    classify,
    derive_mv_from_excision,
    module_sequence,
    mv_persistent,
    mv_stage,
    pair_persistent,
    pair_stage,
)

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_FALSIFIED = 0, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    field: int = 2
    max_dim: int = 3
    complex: Optional[str] = None
    sub_a: Optional[str] = None
    sub_b: Optional[str] = None
    i: Optional[int] = None
    j: Optional[int] = None
    seed: int = 0
    sweep: int = 10_000
    fmt: str = "text"
    claim: Optional[str] = None
    target: str = "mv"
    out: Optional[str] = None
    repeat: int = 5

    def check(self) -> None:
        if not is_prime(self.field):
            raise ComplexError(f"--field must be prime, got {self.field}")
        if self.max_dim < 0:
            raise ComplexError("--max-dim must be non-negative")
        for path in (self.complex, self.sub_a, self.sub_b):
            if path is not None and not Path(path).exists():
                raise ComplexError(f"no such file: {path}")


def _emit(cfg: RunConfig, text: str, doc) -> None:
    if cfg.fmt == "structured":
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text)


def _load(cfg: RunConfig, need_a: bool = False, need_b: bool = False):
    if cfg.complex is None:
        raise ComplexError("--complex is required")
    X = load_complex(cfg.complex)
    if need_a and cfg.sub_a is None:
        raise ComplexError("--sub-a is required")
    if need_b and cfg.sub_b is None:
        raise ComplexError("--sub-b is required")
    A = load_subcomplex(cfg.sub_a, X) if cfg.sub_a else None
    B = load_subcomplex(cfg.sub_b, X) if cfg.sub_b else None
    return X, A, B


def _level_pairs(cfg: RunConfig, X: FilteredComplex) -> list:
    if cfg.i is not None or cfg.j is not None:
        i = cfg.i if cfg.i is not None else 0
        j = cfg.j if cfg.j is not None else X.n
        if not 0 <= i <= j <= X.n:
            raise ComplexError(f"need 0 <= i <= j <= {X.n}, got i={i} j={j}")
        return [(i, j)]
    return [(i, j) for i in range(X.n + 1) for j in range(i, X.n + 1)]


def cmd_compute(cfg: RunConfig) -> int:
    X, A, _ = _load(cfg)
    R = reduce(X, A, p=cfg.field)
    bcs = [barcode(R, k) for k in range(cfg.max_dim + 1)]
    text = "".join(bc.to_text() for bc in bcs)
    _emit(cfg, text, {"relative": A is not None, "field": cfg.field, "barcodes": [bc.to_dict() for bc in bcs]})
    return EXIT_OK


def _verify_excision(cfg, X, A, B):
    rep = verify_persistent_excision(X, A, B, range(cfg.max_dim + 1), p=cfg.field)
    return rep.holds, rep.to_text(), rep.to_dict()


def _verify_rows(cfg, X, A, B, kind):
    ctx = SequenceContext(X, A, B if kind == "mv" else None, p=cfg.field)
    ok = True
    chunks, docs = [], []
    levels = sorted({i for pair in _level_pairs(cfg, X) for i in pair})
    for i in levels:
        row = (mv_stage(X, A, B, i, cfg.max_dim, p=cfg.field, ctx=ctx) if kind == "mv"
               else pair_stage(X, A, i, cfg.max_dim, p=cfg.field, ctx=ctx))
        rep = classify(row, f"{kind} stage row i={i}")
        ok &= rep.verdict == EXACT
        chunks.append(rep.to_text())
        docs.append(rep.to_dict())
    for i, j in _level_pairs(cfg, X):
        rep = (mv_persistent(X, A, B, i, j, cfg.max_dim, p=cfg.field, ctx=ctx) if kind == "mv"
               else pair_persistent(X, A, i, j, cfg.max_dim, p=cfg.field, ctx=ctx))
        ok &= rep.verdict in (EXACT, CHAIN_ONLY)
        chunks.append(rep.to_text())
        docs.append(rep.to_dict())
    return ok, "".join(chunks), docs


def _verify_modules(cfg, X, A, B):
    reps = [module_sequence("pair", X, A, None, cfg.max_dim, p=cfg.field)]
    if B is not None:
        reps.append(module_sequence("mv", X, A, B, cfg.max_dim, p=cfg.field))
    ok = all(r.verdict == EXACT for r in reps)
    return ok, "".join(r.to_text() for r in reps), [r.to_dict() for r in reps]


def _verify_derive(cfg, X, A, B):
    ctx = SequenceContext(X, A, B, p=cfg.field)
    chunks, docs = [], []
    for i, j in _level_pairs(cfg, X):
        rep = derive_mv_from_excision(X, A, B, i, j, cfg.max_dim, p=cfg.field, ctx=ctx)
        chunks.append(rep.to_text())
        docs.append(rep.to_dict())
    return True, "".join(chunks), docs


def cmd_verify(cfg: RunConfig) -> int:
    claim = cfg.claim
    needs_b = claim in ("excision", "mv", "derive")
    X, A, B = _load(cfg, need_a=True, need_b=needs_b)
    try:
        if claim == "excision":
            ok, text, doc = _verify_excision(cfg, X, A, B)
        elif claim in ("mv", "pair"):
            ok, text, doc = _verify_rows(cfg, X, A, B, claim)
        elif claim == "modules":
            ok, text, doc = _verify_modules(cfg, X, A, B)
        elif claim == "derive":
            ok, text, doc = _verify_derive(cfg, X, A, B)
        else:
            raise ComplexError(f"unknown claim {claim!r}")
    except (AssertionError, InducedMapError) as e:
        sys.stdout.write(f"claim falsified: {e}\n")
        return EXIT_FALSIFIED
    _emit(cfg, text + f"result {'holds' if ok else 'FALSIFIED'}\n", {"claim": claim, "holds": ok, "report": doc})
    return EXIT_OK if ok else EXIT_FALSIFIED


def cmd_bench(cfg: RunConfig) -> int:
    X, A, B = _load(cfg, need_a=True, need_b=True)
    sizes = workload(X, A, B)
    degrees = range(cfg.max_dim + 1)

    def direct():
        R = reduce(X, A, p=cfg.field)
        return [barcode(R, k) for k in degrees]

    def excised():
        return excise_barcodes(X, A, B, cfg.max_dim, p=cfg.field, check=False)

    # cover and equality are checked before anything is timed or reported
    d, e = direct(), excise_barcodes(X, A, B, cfg.max_dim, p=cfg.field)
    if d != e:
        sys.stdout.write("claim falsified: excised barcodes differ from direct ones\n")
        return EXIT_FALSIFIED
    times = {}
    for name, fn in (("direct", direct), ("excised", excised)):
        best = float("inf")
        for _ in range(max(1, cfg.repeat)):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        times[name] = best
    text = (
        f"{'pair':<12}{'simplices':>10}{'quotient':>10}{'seconds':>12}\n"
        f"{'(X,A)':<12}{sizes['direct']:>10}{sizes['quotient_direct']:>10}{times['direct']:>12.6f}\n"
        f"{'(B,A∩B)':<12}{sizes['excised']:>10}{sizes['quotient_excised']:>10}{times['excised']:>12.6f}\n"
        f"saved {sizes['direct'] - sizes['excised']} simplices; barcodes equal\n"
    )
    _emit(cfg, text, {"sizes": sizes, "seconds": times, "barcodes_equal": True})
    return EXIT_OK


def cmd_generate(cfg: RunConfig, args) -> int:
    from .oracle import InstanceParams, generate

    params = InstanceParams(
        seed=cfg.seed, max_vertices=args.max_vertices, max_dim=min(args.simplex_dim, 3),
        n_levels=args.n_levels, cover_bias=args.cover_bias, min_excised=args.min_excised,
    )
    X, A, B = generate(params)
    header = [f"generated seed={cfg.seed}"]
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "X.txt").write_text(format_complex(X, header), encoding="utf-8")
        (out / "A.txt").write_text(format_subcomplex(A, "X.txt", header), encoding="utf-8")
        (out / "B.txt").write_text(format_subcomplex(B, "X.txt", header), encoding="utf-8")
    else:
        sys.stdout.write(format_complex(X, header))
        sys.stdout.write("# A\n" + format_subcomplex(A, "X.txt"))
        sys.stdout.write("# B\n" + format_subcomplex(B, "X.txt"))
    return EXIT_OK


def cmd_search(cfg: RunConfig) -> int:
    from .oracle import save_witness, search_nonexact, shrink_witness

    w = search_nonexact(range(cfg.seed, cfg.seed + cfg.sweep), cfg.target, k_max=min(cfg.max_dim, 1), p=cfg.field)
    if w is None:
        sys.stdout.write(f"no witness in {cfg.sweep} seeds\n")
        return EXIT_OK
    w = shrink_witness(w)
    sys.stdout.write(w.header()[0] + "\n")
    if cfg.out:
        save_witness(w, cfg.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, default=2, help="prime characteristic of the coefficient field")
    common.add_argument("--max-dim", type=int, default=3, help="largest homology degree")
    common.add_argument("--complex", help="filtered-complex file")
    common.add_argument("--sub-a", help="subcomplex file for A")
    common.add_argument("--sub-b", help="subcomplex file for B")
    common.add_argument("--i", type=int)
    common.add_argument("--j", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--sweep", type=int, default=10_000)
    common.add_argument("--format", dest="fmt", choices=("text", "structured"), default="text")

    parser = argparse.ArgumentParser(prog="persexc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("compute", parents=[common], help="barcodes of X or of the pair (X, A)")
    v = sub.add_parser("verify", parents=[common], help="check excision / sequence claims")
    v.add_argument("claim", choices=("excision", "mv", "pair", "modules", "derive"))
    b = sub.add_parser("bench", parents=[common], help="direct vs excised relative barcodes")
    b.add_argument("--repeat", type=int, default=5)
    g = sub.add_parser("generate", parents=[common], help="random cover triple")
    g.add_argument("--out")
    g.add_argument("--max-vertices", type=int, default=7)
    g.add_argument("--simplex-dim", type=int, default=2)
    g.add_argument("--n-levels", type=int, default=4)
    g.add_argument("--cover-bias", type=float, default=0.6)
    g.add_argument("--min-excised", type=int, default=0)
    s = sub.add_parser("search", parents=[common], help="look for a non-exact persistent sequence")
    s.add_argument("--target", choices=("mv", "pair"), default="mv")
    s.add_argument("--out")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command, field=args.field, max_dim=args.max_dim, complex=args.complex,
        sub_a=args.sub_a, sub_b=args.sub_b, i=args.i, j=args.j, seed=args.seed, sweep=args.sweep,
        fmt=args.fmt, claim=getattr(args, "claim", None), target=getattr(args, "target", "mv"),
        out=getattr(args, "out", None), repeat=getattr(args, "repeat", 5),
    )
    try:
        cfg.check()
        if cfg.command == "compute":
            return cmd_compute(cfg)
        if cfg.command == "verify":
            return cmd_verify(cfg)
        if cfg.command == "bench":
            return cmd_bench(cfg)
        if cfg.command == "generate":
            return cmd_generate(cfg, args)
        if cfg.command == "search":
            return cmd_search(cfg)
    except CoverViolation as e:
        offending = " ".join("{" + ",".join(map(str, s)) + "}" for s in e.offending)
        sys.stderr.write(f"hypothesis not met: {e}\n  uncovered: {offending}\n")
        return EXIT_HYPOTHESIS
    except (ComplexError, OSError) as e:
        sys.stderr.write(f"input error: {e}\n")
        return EXIT_INPUT
    parser.error(f"unknown command {cfg.command}")
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
