"""Two-player one-round games: domain types, canonical catalog, transformations.

A game is given by finite input sets X, Y and output sets A, B (all handled as
0-based integer ranges), a predicate table lam(x, y, a, b) with values in
[0, 1] deciding which answer pairs win, and an input distribution pi(x, y).
Multi-coordinate inputs/outputs (e.g. from parallel repetition) are packed
into single indices with row-major mixed-radix encoding: the first coordinate
is the most significant digit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DISTRIBUTION_TOL = 1e-12

# Caps keep the exact algorithms within sane memory/time budgets.
DEFAULT_TABLE_CAP = 1 << 24


class GameFormatError(ValueError):
    """A game document or table violates the format contract."""


class SizeCapError(ValueError):
    """A construction would exceed the configured size cap."""


@dataclass(frozen=True)
class Game:
    """An immutable two-player game.

    predicate has shape (nx, ny, na, nb) with entries in [0, 1];
    distribution has shape (nx, ny), is non-negative and sums to 1.
    """

    name: str
    nx: int
    ny: int
    na: int
    nb: int
    predicate: np.ndarray
    distribution: np.ndarray

    def __post_init__(self):
        lam = np.ascontiguousarray(np.asarray(self.predicate, dtype=float).reshape(
            self.nx, self.ny, self.na, self.nb))
        pi = np.ascontiguousarray(np.asarray(self.distribution, dtype=float).reshape(
            self.nx, self.ny))
        if min(self.nx, self.ny, self.na, self.nb) < 1:
            raise GameFormatError("all set sizes must be positive")
        if np.any(lam < 0.0) or np.any(lam > 1.0):
            raise GameFormatError("predicate: entries must lie in [0, 1]")
        if np.any(pi < 0.0):
            raise GameFormatError("distribution: entries must be non-negative")
        if abs(pi.sum() - 1.0) > DISTRIBUTION_TOL:
            raise GameFormatError(
                f"distribution not normalized: sums to {pi.sum()!r}")
        lam.flags.writeable = False
        pi.flags.writeable = False
        object.__setattr__(self, "predicate", lam)
        object.__setattr__(self, "distribution", pi)

    @property
    def k(self) -> int:
        """Number of input pairs |X x Y|."""
        return self.nx * self.ny

    def is_boolean(self) -> bool:
        """True when every predicate entry is exactly 0 or 1."""
        lam = self.predicate
        return bool(np.all((lam == 0.0) | (lam == 1.0)))

    def is_uniform(self) -> bool:
        """True when the input distribution is exactly uniform."""
        return bool(np.all(self.distribution == 1.0 / self.k))

    def winning_quadruples(self) -> list[tuple[int, int, int, int]]:
        """All (x, y, a, b) with a strictly positive predicate value, in
        lexicographic order."""
        idx = np.argwhere(self.predicate > 0.0)
        return [tuple(int(v) for v in q) for q in idx]


def eval_predicate(g: Game, x: int, y: int, a: int, b: int) -> float:
    """Predicate value for one question/answer quadruple."""
    if not (0 <= x < g.nx and 0 <= y < g.ny and 0 <= a < g.na and 0 <= b < g.nb):
        raise IndexError(
            f"quadruple ({x},{y},{a},{b}) out of range for sizes "
            f"{g.nx},{g.ny},{g.na},{g.nb}")
    return float(g.predicate[x, y, a, b])


@dataclass(frozen=True)
class ClassicalStrategy:
    """A deterministic strategy pair: answer tables indexed by the inputs."""

    fa: tuple[int, ...]
    fb: tuple[int, ...]

    def validate(self, g: Game) -> None:
        if len(self.fa) != g.nx or len(self.fb) != g.ny:
            raise ValueError("strategy tables do not match the input set sizes")
        if any(not 0 <= a < g.na for a in self.fa):
            raise ValueError("strategy output out of range for player A")
        if any(not 0 <= b < g.nb for b in self.fb):
            raise ValueError("strategy output out of range for player B")


def strategy_value(g: Game, s: ClassicalStrategy) -> float:
    """Winning probability of a deterministic strategy pair."""
    s.validate(g)
    total = 0.0
    for x in range(g.nx):
        for y in range(g.ny):
            total += g.distribution[x, y] * g.predicate[x, y, s.fa[x], s.fb[y]]
    return total


def uniform_distribution(nx: int, ny: int) -> np.ndarray:
    return np.full((nx, ny), 1.0 / (nx * ny))


# ---------------------------------------------------------------------------
# Catalog games


def chsh() -> Game:
    """The CHSH game: binary inputs and outputs, win iff a xor b == x and y."""
    lam = np.zeros((2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            for a in range(2):
                for b in range(2):
                    lam[x, y, a, b] = 1.0 if (a ^ b) == (x & y) else 0.0
    return Game("chsh", 2, 2, 2, 2, lam, uniform_distribution(2, 2))


def _row_bits(a: int) -> tuple[int, int, int]:
    # a encodes the first two bits; third bit completes to even parity
    b0, b1 = a & 1, (a >> 1) & 1
    return b0, b1, b0 ^ b1


def _col_bits(b: int) -> tuple[int, int, int]:
    # third bit completes to odd parity
    b0, b1 = b & 1, (b >> 1) & 1
    return b0, b1, b0 ^ b1 ^ 1


def magic_square() -> Game:
    """The 3x3 magic square game.

    Alice fills row x with bits of even parity, Bob fills column y with bits
    of odd parity; answers a, b in {0..3} encode the first two bits with the
    parity bit implied.  They win iff the two fillings agree at cell (x, y).
    """
    lam = np.zeros((3, 3, 4, 4))
    for x in range(3):
        for y in range(3):
            for a in range(4):
                for b in range(4):
                    if _row_bits(a)[y] == _col_bits(b)[x]:
                        lam[x, y, a, b] = 1.0
    return Game("magic-square", 3, 3, 4, 4, lam, uniform_distribution(3, 3))


def xor_game(f: np.ndarray, distribution: np.ndarray | None = None,
             name: str = "xor") -> Game:
    """XOR game for a boolean table f: win iff a xor b == f(x, y)."""
    f = np.asarray(f)
    if f.ndim != 2:
        raise GameFormatError("xor game table must be two-dimensional")
    if not np.all((f == 0) | (f == 1)):
        raise GameFormatError("xor game table entries must be 0 or 1")
    nx, ny = f.shape
    lam = np.zeros((nx, ny, 2, 2))
    for x in range(nx):
        for y in range(ny):
            for a in range(2):
                for b in range(2):
                    lam[x, y, a, b] = 1.0 if (a ^ b) == int(f[x, y]) else 0.0
    if distribution is None:
        distribution = uniform_distribution(nx, ny)
    return Game(name, nx, ny, 2, 2, lam, distribution)


def all_ones(nx: int, ny: int, na: int, nb: int) -> Game:
    """The trivial game in which every answer pair wins."""
    return Game("all-ones", nx, ny, na, nb,
                np.ones((nx, ny, na, nb)), uniform_distribution(nx, ny))


def parallel_repetition(g: Game, n: int, table_cap: int = DEFAULT_TABLE_CAP) -> Game:
    """n-fold parallel repetition: product predicate, product distribution.

    Inputs/outputs of the repeated game are n-tuples packed row-major (first
    coordinate most significant), so index i decodes to digits of i in base
    nx (resp. ny, na, nb).
    """
    if n < 1:
        raise ValueError("repetition count must be >= 1")
    size = (g.nx * g.ny * g.na * g.nb) ** n
    if size > table_cap:
        raise SizeCapError(
            f"repeated predicate table would hold {size} entries (cap {table_cap})")
    lam, pi = g.predicate, g.distribution
    lam_rep, pi_rep = lam, pi
    for _ in range(n - 1):
        # tensor product, then regroup axes so each of x, y, a, b is contiguous
        lam_rep = np.einsum("xyab,uvcd->xuyvacbd", lam_rep, lam).reshape(
            lam_rep.shape[0] * g.nx, lam_rep.shape[1] * g.ny,
            lam_rep.shape[2] * g.na, lam_rep.shape[3] * g.nb)
        pi_rep = np.einsum("xy,uv->xuyv", pi_rep, pi).reshape(
            pi_rep.shape[0] * g.nx, pi_rep.shape[1] * g.ny)
    return Game(f"{g.name}-rep{n}" if n > 1 else g.name,
                g.nx ** n, g.ny ** n, g.na ** n, g.nb ** n, lam_rep, pi_rep)


def independent_set_game(adjacency, t: int, name: str | None = None) -> Game:
    """The independent-set game with parameter t on a graph.

    Both players are asked for one of the t members of a claimed independent
    set.  They lose when x == y but the named vertices differ, or when x != y
    and the named vertices are equal or adjacent.

    ``adjacency`` is anything with ``n`` and ``has_edge(i, j)`` (see
    gamegraph.Graph) or a square 0/1 array.
    """
    if t < 1:
        raise ValueError("parameter t must be >= 1")
    if hasattr(adjacency, "has_edge"):
        nv = adjacency.n
        has_edge = adjacency.has_edge
    else:
        mat = np.asarray(adjacency)
        nv = mat.shape[0]
        has_edge = lambda i, j: bool(mat[i, j])
    lam = np.ones((t, t, nv, nv))
    for x in range(t):
        for y in range(t):
            for v in range(nv):
                for w in range(nv):
                    if x == y:
                        if v != w:
                            lam[x, y, v, w] = 0.0
                    elif v == w or has_edge(v, w):
                        lam[x, y, v, w] = 0.0
    return Game(name or f"isg-t{t}", t, t, nv, nv, lam, uniform_distribution(t, t))
