"""Generators for the reversible benchmark families used in the regression suite.

The circuits are rebuilt from their textbook constructions (Toffoli ladders,
ripple-carry adders, Mastrovito-style field multipliers) rather than copied
from a distributed archive; ``data/`` holds the generated ``.qc`` files.
"""

from __future__ import annotations

from .circuit import Circuit

__all__ = [
    "GF_POLYNOMIALS",
    "barenco_tof",
    "gf_mult",
    "mod5_4",
    "nc_tof",
    "rc_adder",
    "vbe_adder_3",
    "all_benchmarks",
    "write_corpus",
]

# exponents of the low terms of the reduction polynomial x^n + ...
GF_POLYNOMIALS = {4: (1, 0), 5: (2, 0), 6: (1, 0), 7: (1, 0), 8: (4, 3, 1, 0)}


def mod5_4() -> Circuit:
    """e ^= [abcd (binary) divisible by 5], i.e. (1+a+c)(1+b+d) over GF(2)."""
    c = Circuit(list("abcde"))
    c.add("X", "e")
    for w in "abcd":
        c.add("CNOT", w, "e")
    for x, y in (("a", "b"), ("a", "d"), ("c", "b"), ("c", "d")):
        c.add("CCNOT", x, y, "e")
    return c


def nc_tof(n: int) -> Circuit:
    """n-control Toffoli via a compute/uncompute ladder on n-2 clean ancillas."""
    if n < 3:
        raise ValueError("nc_tof needs at least 3 controls")
    ctrl = [f"c{i}" for i in range(n)]
    anc = [f"a{i}" for i in range(n - 2)]
    c = Circuit(ctrl + anc + ["t"])
    ladder = [(ctrl[0], ctrl[1], anc[0])]
    ladder += [(ctrl[i], anc[i - 2], anc[i - 1]) for i in range(2, n - 1)]
    for g in ladder:
        c.add("CCNOT", *g)
    c.add("CCNOT", ctrl[-1], anc[-1], "t")
    for g in reversed(ladder):
        c.add("CCNOT", *g)
    return c


def barenco_tof(n: int) -> Circuit:
    """n-control Toffoli with n-2 dirty ancillas (Barenco et al. construction)."""
    if n < 3:
        raise ValueError("barenco_tof needs at least 3 controls")
    ctrl = [f"c{i}" for i in range(n)]
    anc = [f"a{i}" for i in range(n - 2)]
    c = Circuit(ctrl + anc + ["t"])
    # ladder from the target down: tof(c_{k+2}, a_k, a_{k+1}) with a_{n-2} := t
    tgt = anc + ["t"]

    def down():
        return [(ctrl[k + 2], tgt[k], tgt[k + 1]) for k in reversed(range(n - 2))]

    def up():
        return [(ctrl[k + 2], tgt[k], tgt[k + 1]) for k in range(1, n - 2)]
    base = (ctrl[0], ctrl[1], tgt[0])
    for _ in range(2):
        for g in down():
            c.add("CCNOT", *g)
        c.add("CCNOT", *base)
        for g in up():
            c.add("CCNOT", *g)
    return c


def _carry(c: Circuit, ci, a, b, co, inverse=False):
    seq = [("CCNOT", a, b, co), ("CNOT", a, b), ("CCNOT", ci, b, co)]
    for g in (reversed(seq) if inverse else seq):
        c.add(g[0], *g[1:])


def _sum(c: Circuit, ci, a, b):
    c.add("CNOT", a, b)
    c.add("CNOT", ci, b)


def vbe_adder_3() -> Circuit:
    """3-bit Vedral-Barenco-Ekert ripple adder: b <- a + b, carries restored."""
    names = []
    for i in range(3):
        names += [f"c{i}", f"a{i}", f"b{i}"]
    names.append("b3")
    c = Circuit(names)
    _carry(c, "c0", "a0", "b0", "c1")
    _carry(c, "c1", "a1", "b1", "c2")
    _carry(c, "c2", "a2", "b2", "b3")
    c.add("CNOT", "a2", "b2")
    _sum(c, "c2", "a2", "b2")
    _carry(c, "c1", "a1", "b1", "c2", inverse=True)
    _sum(c, "c1", "a1", "b1")
    _carry(c, "c0", "a0", "b0", "c1", inverse=True)
    _sum(c, "c0", "a0", "b0")
    return c


def gf_mult(n: int) -> Circuit:
    """c ^= a*b in GF(2^n), polynomial basis, reduction polynomial from GF_POLYNOMIALS.

    High partial products are accumulated first, folded into the low degrees by
    the linear map "multiply by x^n mod P" (a CNOT network), then the low
    partial products are added.
    """
    if n not in GF_POLYNOMIALS:
        raise ValueError(f"no reduction polynomial configured for n={n}")
    low = GF_POLYNOMIALS[n]
    a = [f"a{i}" for i in range(n)]
    b = [f"b{i}" for i in range(n)]
    cc = [f"c{i}" for i in range(n)]
    c = Circuit(a + b + cc)
    # register c is first used to hold coefficients of x^n .. x^{2n-2} (shifted by n)
    for i in range(n):
        for j in range(n):
            if i + j >= n:
                c.add("CCNOT", a[i], b[j], cc[i + j - n])
    for g in _times_xn_network(n, low):
        c.add("CNOT", cc[g[0]], cc[g[1]])
    for i in range(n):
        for j in range(n):
            if i + j < n:
                c.add("CCNOT", a[i], b[j], cc[i + j])
    return c


def _times_xn_network(n: int, low: tuple[int, ...]) -> list[tuple[int, int]]:
    """CNOTs (control, target) realising h(x) -> x^n h(x) mod P on n bits, in place.

    Built by Gaussian elimination of the (invertible) matrix of the map.
    """
    # column j: image of x^j; reduce x^{n+j} mod P
    def reduce(deg):
        v = 1 << deg
        for d in range(2 * n, n - 1, -1):
            if v >> d & 1:
                v ^= 1 << d
                for e in low:
                    v ^= 1 << (d - n + e)
        return v
    cols = [reduce(n + j) for j in range(n)]
    # rows[r] = bitmask of input coordinates feeding output r
    rows = [sum(((cols[j] >> r) & 1) << j for j in range(n)) for r in range(n)]
    from .cldcl import synthesize_affine
    gates = synthesize_affine(rows, [0] * n)
    return [g.wires for g in gates]


def rc_adder(n: int) -> Circuit:
    """Cuccaro-style n-bit ripple-carry adder (MAJ/UMA chain) with carry in and out."""
    names = ["cin"] + [w for i in range(n) for w in (f"a{i}", f"b{i}")] + ["cout"]
    c = Circuit(names)

    def maj(x, y, z):
        c.add("CNOT", z, y)
        c.add("CNOT", z, x)
        c.add("CCNOT", x, y, z)

    def uma(x, y, z):
        c.add("CCNOT", x, y, z)
        c.add("CNOT", z, x)
        c.add("CNOT", x, y)
    prev = "cin"
    for i in range(n):
        maj(prev, f"b{i}", f"a{i}")
        prev = f"a{i}"
    c.add("CNOT", f"a{n - 1}", "cout")
    for i in reversed(range(n)):
        uma("cin" if i == 0 else f"a{i - 1}", f"b{i}", f"a{i}")
    return c


def all_benchmarks() -> dict[str, Circuit]:
    """Name -> circuit for every generated benchmark, in table order."""
    out = {
        "mod5_4": mod5_4(),
        "barenco_tof_3": barenco_tof(3),
        "barenco_tof_4": barenco_tof(4),
        "barenco_tof_5": barenco_tof(5),
        "nc_tof_3": nc_tof(3),
        "nc_tof_4": nc_tof(4),
        "nc_tof_5": nc_tof(5),
        "nc_tof_10": nc_tof(10),
        "vbe_adder_3": vbe_adder_3(),
        "rc_adder_6": rc_adder(6),
    }
    for n in (4, 5, 6, 7, 8):
        out[f"gf2^{n}_mult"] = gf_mult(n)
    return out


def write_corpus(directory) -> list:
    """Write every benchmark as ``<name>.qc`` into ``directory``; returns the paths."""
    from pathlib import Path

    from .circuit import write_qc

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, c in all_benchmarks().items():
        path = d / f"{name}.qc"
        path.write_text(write_qc(c, [f"{name}: generated by phage_opt.benchmarks"]))
        paths.append(path)
    return paths
