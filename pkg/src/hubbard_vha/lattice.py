"""Square-lattice geometry, Jordan-Wigner site ordering and term grouping.

Sites are numbered row-major starting at 1; the spin-up orbital of site ``j``
is qubit number ``j`` and the spin-down orbital is ``j + M``. Qubit numbers
are 1-based here; the simulator works with 0-based bit positions
(``qubit - 1``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

__all__ = [
    "Direction",
    "Edge",
    "LatticeSpec",
    "Spin",
    "TermGroup",
    "enumerate_edges",
    "site_index",
    "term_groups",
    "GROUP_LABELS",
]

GROUP_LABELS = ("horizontal-odd", "horizontal-even", "vertical-odd", "vertical-even", "onsite")


class Spin(str, Enum):
    UP = "up"
    DOWN = "down"


class Direction(str, Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


@dataclass(frozen=True)
class LatticeSpec:
    """Rectangular Hubbard lattice with open boundaries.

    Parameters
    ----------
    ncols, nrows : int
        Lattice extent.
    t : float
        Nearest-neighbour hopping amplitude (the energy unit).
    U : float
        On-site interaction.
    """

    ncols: int
    nrows: int
    t: float = 1.0
    U: float = 2.0

    def __post_init__(self):
        if int(self.ncols) != self.ncols or int(self.nrows) != self.nrows:
            raise ValueError("lattice dimensions must be integers")
        if self.ncols < 1 or self.nrows < 1:
            raise ValueError(f"lattice dimensions must be positive, got {self.ncols}x{self.nrows}")
        if not self.t > 0:
            raise ValueError(f"hopping t must be positive, got {self.t}")

    @property
    def M(self) -> int:
        return self.ncols * self.nrows

    @property
    def n_qubits(self) -> int:
        return 2 * self.M

    @property
    def label(self) -> str:
        return f"{self.ncols}x{self.nrows}"

    def with_couplings(self, t: float | None = None, U: float | None = None) -> "LatticeSpec":
        return LatticeSpec(self.ncols, self.nrows, self.t if t is None else t, self.U if U is None else U)

    @classmethod
    def parse(cls, text: str, t: float = 1.0, U: float = 2.0) -> "LatticeSpec":
        """Build from a ``"CxR"`` string such as ``"3x2"``."""
        try:
            c, r = text.lower().split("x")
            return cls(int(c), int(r), t, U)
        except ValueError as exc:
            raise ValueError(f"lattice must look like 'CxR', got {text!r}") from exc


@dataclass(frozen=True)
class Edge:
    j: int
    jprime: int
    direction: Direction
    parity: str  # "odd" | "even"


@dataclass(frozen=True)
class TermGroup:
    alpha: int
    label: str
    edges: tuple[Edge, ...] = ()
    sites: tuple[int, ...] = field(default=())

    @property
    def is_onsite(self) -> bool:
        return self.alpha == 5

    def __len__(self) -> int:
        return len(self.sites) if self.is_onsite else len(self.edges)


def site_index(lattice: LatticeSpec, col: int, row: int, spin: Spin | str = Spin.UP) -> int:
    """Return the 1-based qubit number of orbital ``(col, row, spin)``."""
    spin = Spin(spin)
    if not (1 <= col <= lattice.ncols and 1 <= row <= lattice.nrows):
        raise ValueError(f"site ({col}, {row}) outside {lattice.label} lattice")
    j = (row - 1) * lattice.ncols + col
    return j if spin is Spin.UP else j + lattice.M


def _parity(k: int) -> str:
    return "odd" if k % 2 == 1 else "even"


def enumerate_edges(lattice: LatticeSpec) -> list[Edge]:
    """All nearest-neighbour bonds, horizontal first, each with ``j < jprime``."""
    edges = []
    for row in range(1, lattice.nrows + 1):
        for col in range(1, lattice.ncols):
            edges.append(Edge(site_index(lattice, col, row), site_index(lattice, col + 1, row),
                              Direction.HORIZONTAL, _parity(col)))
    for row in range(1, lattice.nrows):
        for col in range(1, lattice.ncols + 1):
            edges.append(Edge(site_index(lattice, col, row), site_index(lattice, col, row + 1),
                              Direction.VERTICAL, _parity(row)))
    return edges


def term_groups(lattice: LatticeSpec) -> list[TermGroup]:
    """Split the Hamiltonian terms into the five mutually commuting groups.

    Order: horizontal-odd, horizontal-even, vertical-odd, vertical-even, on-site.
    Empty groups are kept so there are always five.
    """
    edges = enumerate_edges(lattice)
    groups = []
    alpha = 1
    for direction in (Direction.HORIZONTAL, Direction.VERTICAL):
        for parity in ("odd", "even"):
            members = tuple(sorted((e for e in edges if e.direction is direction and e.parity == parity),
                                   key=lambda e: (e.j, e.jprime)))
            groups.append(TermGroup(alpha, GROUP_LABELS[alpha - 1], edges=members))
            alpha += 1
    groups.append(TermGroup(5, GROUP_LABELS[4], sites=tuple(range(1, lattice.M + 1))))
    return groups
