"""Rewrite the golden fixtures from the rank oracle and the generator.

Only run this deliberately: the tests compare against these files.
"""

import json
from pathlib import Path

from persexc.complex_core import format_complex, format_subcomplex, induced_filtration, intersect
from persexc.complex_core import load_complex, load_subcomplex
from persexc.oracle import InstanceParams, generate, oracle_betti

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def bars_from_betti(beta, n: int) -> list:
    """Interval multiplicities by inclusion-exclusion on persistent Betti numbers."""
    def b(i, j):
        return beta(i, j) if 0 <= i <= j <= n else 0

    out = []
    for birth in range(n + 1):
        for death in range(birth + 1, n + 1):
            m = b(birth, death - 1) - b(birth - 1, death - 1) - b(birth, death) + b(birth - 1, death)
            if m:
                out.append(f"{birth} {death} {m}")
        m = b(birth, n) - b(birth - 1, n)
        if m:
            out.append(f"{birth} inf {m}")
    return out


def e3() -> None:
    d = FIXTURES / "e3"
    X = load_complex(d / "X.txt")
    A = load_subcomplex(d / "A.txt", X)
    B = load_subcomplex(d / "B.txt", X)
    AB = intersect(A, B)
    Bc = induced_filtration(B)
    ABc = Bc.sub(AB.members)
    windows = [(i, j) for i in range(X.n + 1) for j in range(i, X.n + 1)]
    golden = {
        "beta_1_XA": {f"{i},{j}": oracle_betti(X, A, 1, i, j) for i, j in windows},
        "beta_1_BAB": {f"{i},{j}": oracle_betti(Bc, ABc, 1, i, j) for i, j in windows},
    }
    (d / "golden_betti.json").write_text(json.dumps(golden, indent=2, sort_keys=True) + "\n")
    bars = bars_from_betti(lambda i, j: oracle_betti(X, A, 1, i, j), X.n)
    (d / "golden_barcode_rel_k1.txt").write_text("degree 1\n" + "".join(b + "\n" for b in bars))


def seed42() -> None:
    X, A, B = generate(InstanceParams(seed=42))
    header = ["generated seed=42"]
    d = FIXTURES / "gen_seed42"
    d.mkdir(exist_ok=True)
    (d / "X.txt").write_text(format_complex(X, header))
    (d / "A.txt").write_text(format_subcomplex(A, "X.txt", header))
    (d / "B.txt").write_text(format_subcomplex(B, "X.txt", header))


if __name__ == "__main__":
    e3()
    seed42()
    print(f"goldens written under {FIXTURES}")
