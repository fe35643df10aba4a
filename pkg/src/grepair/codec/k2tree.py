"""k²-trees with k = 2, without leaf compression.

The matrix is padded with zeros to a power-of-two side. The bits of every
level are concatenated in breadth-first order; children of a node are the
four quadrants left to right, top to bottom. There is no bit for the root
itself, so an all-zero matrix is a single block of zeros.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def padded_side(rows: int, cols: int) -> int:
    side = 2
    while side < max(rows, cols):
        side *= 2
    return side


@dataclass(frozen=True)
class K2Tree:
    rows: int
    cols: int
    side: int
    tree: tuple[int, ...]   # internal levels
    leaves: tuple[int, ...]

    @property
    def bits(self) -> tuple[int, ...]:
        return self.tree + self.leaves

    def levels(self) -> list[tuple[int, ...]]:
        """Bits split per level, the last one being the leaf level."""
        out = []
        bits = self.bits
        i, width, side = 0, 4, self.side
        while i < len(bits):
            out.append(bits[i:i + width])
            ones = sum(bits[i:i + width])
            i += width
            width = 4 * ones
            side //= 2
        return out

    def cell(self, r: int, c: int) -> int:
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(f"cell ({r}, {c}) outside {self.rows}x{self.cols}")
        return _cell(self, r, c)

    def row(self, r: int) -> list[int]:
        """Columns set in row r (out-neighbours)."""
        if not 0 <= r < self.rows:
            raise IndexError(r)
        return sorted(c for rr, c in _walk(self, row=r))

    def column(self, c: int) -> list[int]:
        """Rows set in column c (in-neighbours)."""
        if not 0 <= c < self.cols:
            raise IndexError(c)
        return sorted(rr for rr, cc in _walk(self, col=c))

    def cells(self) -> list[tuple[int, int]]:
        return sorted(_walk(self))

    def to_matrix(self) -> list[list[int]]:
        m = [[0] * self.cols for _ in range(self.rows)]
        for r, c in _walk(self):
            m[r][c] = 1
        return m


def _rank1(tree: Sequence[int]) -> list[int]:
    out = [0]
    for b in tree:
        out.append(out[-1] + b)
    return out


def _cell(t: K2Tree, r: int, c: int) -> int:
    tree, leaves = t.tree, t.leaves
    rank = _rank1(tree)
    side = t.side // 2
    idx = 2 * (r // side) + (c // side)   # position among the root's children
    r, c = r % side, c % side
    while True:
        if idx >= len(tree):
            return leaves[idx - len(tree)]
        if not tree[idx]:
            return 0
        base = 4 * rank[idx + 1]
        side //= 2
        idx = base + 2 * (r // side) + (c // side)
        r, c = r % side, c % side


def _walk(t: K2Tree, row: int | None = None, col: int | None = None):
    tree, leaves = t.tree, t.leaves
    rank = _rank1(tree)
    nt = len(tree)
    stack = [(0, 0, 0, t.side // 2)]  # (first child index, row offset, col offset, child side)
    while stack:
        base, r0, c0, side = stack.pop()
        for q in range(4):
            r1, c1 = r0 + (q // 2) * side, c0 + (q % 2) * side
            if row is not None and not r1 <= row < r1 + side:
                continue
            if col is not None and not c1 <= col < c1 + side:
                continue
            idx = base + q
            if idx >= nt:
                if leaves[idx - nt] and r1 < t.rows and c1 < t.cols:
                    yield r1, c1
            elif tree[idx]:
                stack.append((4 * rank[idx + 1], r1, c1, side // 2))


def k2_encode(cells: Iterable[tuple[int, int]], rows: int, cols: int | None = None) -> K2Tree:
    """Encode the 0/1 matrix given by its set cells (0-based)."""
    cols = rows if cols is None else cols
    if rows < 1 or cols < 1:
        raise ValueError("matrix must be nonempty")
    side = padded_side(rows, cols)
    cells = sorted(set(cells))
    for r, c in cells:
        if not (0 <= r < rows and 0 <= c < cols):
            raise ValueError(f"cell ({r}, {c}) outside {rows}x{cols}")
    levels: list[list[int]] = []
    frontier = [(0, 0, cells)]
    s = side
    while frontier:
        s //= 2
        bits, nxt = [], []
        for r0, c0, pts in frontier:
            quads: list[list] = [[], [], [], []]
            for r, c in pts:
                quads[2 * ((r - r0) // s) + (c - c0) // s].append((r, c))
            for q in range(4):
                bits.append(1 if quads[q] else 0)
                if quads[q] and s > 1:
                    nxt.append((r0 + (q // 2) * s, c0 + (q % 2) * s, quads[q]))
        levels.append(bits)
        frontier = nxt
    if s > 1:
        # stopped early: everything below is zero
        return K2Tree(rows, cols, side, tuple(b for lv in levels for b in lv), ())
    return K2Tree(rows, cols, side, tuple(b for lv in levels[:-1] for b in lv), tuple(levels[-1]))


def k2_from_matrix(m: Sequence[Sequence[int]]) -> K2Tree:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    return k2_encode(((r, c) for r in range(rows) for c in range(cols) if m[r][c]), rows, cols)


def _scan(bits: Sequence[int], rows: int, cols: int) -> tuple[int, int | None]:
    """(bit length of the tree, start of its leaf level or None)."""
    s = padded_side(rows, cols) // 2
    i, width = 0, 4
    while True:
        if i + width > len(bits):
            raise ValueError("k2-tree runs past end of data")
        if s == 1:
            return i + width, i
        ones = sum(bits[i:i + width])
        i += width
        if ones == 0:
            return i, None
        width = 4 * ones
        s //= 2


def k2_from_bits(bits: Sequence[int], rows: int, cols: int) -> K2Tree:
    bits = tuple(bits)
    n, leaf = _scan(bits, rows, cols)
    if n != len(bits):
        raise ValueError("k2-tree bit count inconsistent with its shape")
    if leaf is None:
        return K2Tree(rows, cols, padded_side(rows, cols), bits, ())
    return K2Tree(rows, cols, padded_side(rows, cols), bits[:leaf], bits[leaf:])


def k2_length(bits: Sequence[int], rows: int, cols: int) -> int:
    return _scan(bits, rows, cols)[0]
