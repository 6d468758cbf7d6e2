"""Built-in example lattices."""

from __future__ import annotations

from .errors import InvalidInput
from .lattice import LieLattice


def abelian(p: int, dim: int = 2) -> LieLattice:
    return LieLattice(f"abelian{dim}", p, dim, {}, tuple(f"a{i}" for i in range(dim)))


def heisenberg(p: int) -> LieLattice:
    # [x, y] = z
    return LieLattice("heisenberg", p, 3, {(0, 1): (0, 0, 1)}, ("x", "y", "z"))


def heisenberg_powerful(p: int) -> LieLattice:
    # [x, y] = p z, powerful for odd p
    return LieLattice("heisenberg_powerful", p, 3, {(0, 1): (0, 0, p)}, ("x", "y", "z"))


def sl2(p: int) -> LieLattice:
    # basis (e, h, f): [h, e] = 2e, [h, f] = -2f, [e, f] = h
    return LieLattice(
        "sl2", p, 3,
        {(0, 1): (-2, 0, 0), (0, 2): (0, 1, 0), (1, 2): (0, 0, -2)},
        ("e", "h", "f"),
    )


def so3(p: int) -> LieLattice:
    # [e1, e2] = e3 and cyclic permutations
    return LieLattice(
        "so3", p, 3,
        {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (0, 2): (0, -1, 0)},
        ("e1", "e2", "e3"),
    )


def sl2_plus_sl2(p: int) -> LieLattice:
    br = {(0, 1): (-2, 0, 0, 0, 0, 0), (0, 2): (0, 1, 0, 0, 0, 0), (1, 2): (0, 0, -2, 0, 0, 0),
          (3, 4): (0, 0, 0, -2, 0, 0), (3, 5): (0, 0, 0, 0, 1, 0), (4, 5): (0, 0, 0, 0, 0, -2)}
    return LieLattice("sl2_plus_sl2", p, 6, br, ("e", "h", "f", "e'", "h'", "f'"))


CATALOG = {
    "abelian": abelian,
    "heisenberg": heisenberg,
    "heisenberg_powerful": heisenberg_powerful,
    "sl2": sl2,
    "so3": so3,
    "sl2_plus_sl2": sl2_plus_sl2,
}


def builtin(name: str, p: int, **params) -> LieLattice:
    try:
        ctor = CATALOG[name]
    except KeyError:
        raise InvalidInput(f"unknown built-in lattice {name!r}; choose from {sorted(CATALOG)}") from None
    if name == "abelian":
        dim = int(params.pop("dim", 2))
        if params:
            raise InvalidInput(f"unexpected parameters {sorted(params)}")
        return ctor(p, dim)
    if params:
        raise InvalidInput(f"{name} takes no parameters")
    return ctor(p)
