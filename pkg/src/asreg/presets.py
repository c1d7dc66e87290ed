"""Canonical presentation texts used across tests and docs."""

from __future__ import annotations


def truncated_poly(power: int = 3, field: str = "Q") -> str:
    """K[x]/(x^power) on a one-loop quiver, finite mode."""
    word = ".".join(["x"] * power)
    return (
        f"field {field}\n"
        "vertices v\n"
        "arrow x : v -> v\n"
        "mode finite\n"
        f"rel {word}\n"
    )


def kronecker(n: int = 2, field: str = "Q") -> str:
    """The n-Kronecker quiver 1 => 2 with no relations."""
    arrows = "\n".join(f"arrow a{i} : 1 -> 2" for i in range(1, n + 1))
    return f"field {field}\nvertices 1 2\n{arrows}\nmode finite\n"


def b_algebra(n: int = 2, cap: int = 8, field: str = "Q") -> str:
    """K<x1..xn>/(sum of squares), graded."""
    arrows = "\n".join(f"arrow x{i} : v -> v" for i in range(1, n + 1))
    rel = " + ".join(f"x{i}.x{i}" for i in range(1, n + 1))
    return f"field {field}\nvertices v\n{arrows}\nmode graded cap {cap}\nrel {rel}\n"


def a_algebra(n: int = 2, cap: int = 8, field: str = "Q") -> str:
    """K[x1..xn]/({xi xj}_{i!=j}, {xi^2 - x2^2}_{i!=2}), graded; dims (1, n, 1)."""
    arrows = "\n".join(f"arrow x{i} : v -> v" for i in range(1, n + 1))
    rels = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                rels.append(f"rel x{i}.x{j}")
    for i in range(1, n + 1):
        if i != 2:
            rels.append(f"rel x{i}.x{i} + -1*x2.x2")
    body = "\n".join(rels)
    return f"field {field}\nvertices v\n{arrows}\nmode graded cap {cap}\n{body}\n"


def exterior2(cap: int = 8, field: str = "Q") -> str:
    """Exterior algebra on two generators, graded."""
    return (
        f"field {field}\n"
        "vertices v\n"
        "arrow x : v -> v\n"
        "arrow y : v -> v\n"
        f"mode graded cap {cap}\n"
        "rel x.x\n"
        "rel y.y\n"
        "rel x.y + y.x\n"
    )


def zigzag_cycle(field: str = "Q") -> str:
    """K(1 <-> 2)/(aba, bab): the Frobenius Yoneda algebra of the
    Auslander-algebra example."""
    return (
        f"field {field}\n"
        "vertices 1 2\n"
        "arrow a : 1 -> 2\n"
        "arrow b : 2 -> 1\n"
        "mode finite\n"
        "rel a.b.a\n"
        "rel b.a.b\n"
    )


def semisimple(t: int = 2, field: str = "Q") -> str:
    verts = " ".join(str(i) for i in range(1, t + 1))
    return f"field {field}\nvertices {verts}\nmode finite\n"
