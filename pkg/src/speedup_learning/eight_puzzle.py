"""The Eight Puzzle: boards, moves, solvability, subgoal search, teacher.

A board is a tuple of 9 feature values, one per tile (tile 0 is the blank),
each value a position 0..8.  Position 0 is the center; positions 1..8 ring
the border clockwise from the top-left:

        1 2 3
        8 0 4
        7 6 5

The goal places tile i at position i (blank in the center).  Moves are
named for the direction the *tile* slides: "r" moves the tile left of the
blank rightward into it, and so on.  Operator indices are r=1, l=2, u=3,
d=4, which is also the search tie-break order.
"""

from __future__ import annotations

import random
from collections import deque
from typing import Optional, Sequence

from .core import DomainSpec
from .errors import MoveError, ParameterError
from .macro_tables import FeatureOrdering, MacroTable

N_TILES = 9
N_POSITIONS = 9
GOAL = tuple(range(9))

# position -> (row, col)
COORD = {
    0: (1, 1),
    1: (0, 0), 2: (0, 1), 3: (0, 2),
    4: (1, 2), 8: (1, 0),
    7: (2, 0), 6: (2, 1), 5: (2, 2),
}
_POS_AT = {rc: p for p, rc in COORD.items()}

MOVE_LETTERS = "rlud"
_REVERSE = {"r": "l", "l": "r", "u": "d", "d": "u"}
# Where the moving tile comes from, relative to the blank's (row, col).
_SOURCE_DELTA = {"r": (0, -1), "l": (0, 1), "u": (1, 0), "d": (-1, 0)}

# blank position -> move letter -> source position (or absent if illegal)
_MOVE_SRC = {}
for _p, (_r, _c) in COORD.items():
    _MOVE_SRC[_p] = {}
    for _m, (_dr, _dc) in _SOURCE_DELTA.items():
        _src = _POS_AT.get((_r + _dr, _c + _dc))
        if _src is not None:
            _MOVE_SRC[_p][_m] = _src


def apply_move(board: tuple, move: str) -> tuple:
    src = _MOVE_SRC[board[0]].get(move)
    if src is None:
        raise MoveError(f"move {move!r} not applicable with blank at {board[0]}")
    tile = board.index(src)
    out = list(board)
    out[tile] = board[0]
    out[0] = src
    return tuple(out)


def apply_moves(board: tuple, moves: str) -> tuple:
    for m in moves:
        board = apply_move(board, m)
    return board


def macro_to_letters(macro: Sequence[int]) -> str:
    return "".join(MOVE_LETTERS[op - 1] for op in macro)


def letters_to_macro(letters: str) -> tuple:
    try:
        return tuple(MOVE_LETTERS.index(m) + 1 for m in letters)
    except ValueError:
        raise ParameterError(f"bad move letter in {letters!r}") from None


def board_to_text(board: tuple) -> str:
    """9 digits in position order: character p is the tile at position p."""
    at = [None] * 9
    for tile, pos in enumerate(board):
        at[pos] = tile
    return "".join(str(t) for t in at)


def text_to_board(text: str) -> tuple:
    if len(text) != 9 or sorted(text) != list("012345678"):
        raise ParameterError(f"board text must be a permutation of 0-8: {text!r}")
    board = [0] * 9
    for pos, ch in enumerate(text):
        board[int(ch)] = pos
    return tuple(board)


def _permutation_sign(board: tuple) -> int:
    seen = [False] * 9
    sign = 1
    for start in range(9):
        if seen[start]:
            continue
        length = 0
        t = start
        while not seen[t]:
            seen[t] = True
            t = board[t]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def manhattan(pos_a: int, pos_b: int) -> int:
    (ra, ca), (rb, cb) = COORD[pos_a], COORD[pos_b]
    return abs(ra - rb) + abs(ca - cb)


def is_solvable(board: tuple) -> bool:
    """Parity test: each move flips the permutation's sign and changes the
    blank's Manhattan distance from the center by one, so reachable boards
    have sign equal to (-1)^distance.  Validated against BFS in the tests."""
    dist = manhattan(board[0], GOAL[0])
    return _permutation_sign(board) == (1 if dist % 2 == 0 else -1)


def random_solvable(rng: random.Random) -> tuple:
    while True:
        board = tuple(rng.sample(range(9), 9))
        if is_solvable(board):
            return board


def bfs_reachable(start: tuple = GOAL):
    """All boards reachable from start (the 181 440 solvable boards)."""
    seen = {start}
    frontier = deque([start])
    while frontier:
        b = frontier.popleft()
        for m in MOVE_LETTERS:
            try:
                nb = apply_move(b, m)
            except MoveError:
                continue
            if nb not in seen:
                seen.add(nb)
                frontier.append(nb)
    return seen


def all_solvable_boards():
    return bfs_reachable(GOAL)


def domain_spec() -> DomainSpec:
    def make_mover(m):
        return lambda state, loc: apply_move(state, m)

    return DomainSpec(
        state_size=N_TILES,
        goal_test=lambda b: b == GOAL,
        operators=tuple(make_mover(m) for m in MOVE_LETTERS),
    )


def blank_first_ordering() -> FeatureOrdering:
    return FeatureOrdering(tuple(range(9)))


def blank_last_ordering() -> FeatureOrdering:
    return FeatureOrdering(tuple(range(1, 9)) + (0,))


# ---------------------------------------------------------------------------
# IDA* subgoal search
# ---------------------------------------------------------------------------

# The search outcome depends only on the subgoal tiles' positions: move
# applicability depends on the blank (always in the subgoal under a
# blank-first ordering) and effects on subgoal tiles depend on nothing
# else.  Results are therefore cached globally across teachers and trials.
_subgoal_cache: dict = {}


def _heuristic(board, tiles, goal):
    return sum(manhattan(board[t], goal[t]) for t in tiles if t != 0)


def ida_star_subgoal(board: tuple, i: int, ordering: FeatureOrdering,
                     goal: tuple = GOAL) -> tuple:
    """Shortest move sequence bringing ordered features 1..i to their goal
    values, as operator indices.  Deterministic: IDA* with the Manhattan
    heuristic over the non-blank subgoal tiles, move order r<l<u<d, and
    parent-reversal pruning.
    """
    tiles = tuple(ordering.feature(p) for p in range(1, i + 1))
    key = (ordering.perm, i, tuple(board[t] for t in tiles), goal)
    hit = _subgoal_cache.get(key)
    if hit is not None:
        return hit

    def satisfied(b):
        return all(b[t] == goal[t] for t in tiles)

    INF = float("inf")

    def search(b, g, bound, last, path):
        h = _heuristic(b, tiles, goal)
        f = g + h
        if f > bound:
            return f, None
        if satisfied(b):
            return f, tuple(path)
        nxt = INF
        for op, m in enumerate(MOVE_LETTERS, start=1):
            if last is not None and m == _REVERSE[last]:
                continue
            src = _MOVE_SRC[b[0]].get(m)
            if src is None:
                continue
            nb = list(b)
            nb[b.index(src)] = b[0]
            nb[0] = src
            path.append(op)
            t, found = search(tuple(nb), g + 1, bound, m, path)
            path.pop()
            if found is not None:
                return t, found
            if t < nxt:
                nxt = t
        return nxt, None

    bound = _heuristic(board, tiles, goal)
    while True:
        bound, found = search(board, 0, bound, None, [])
        if found is not None:
            _subgoal_cache[key] = found
            return found
        if bound == INF:
            raise ParameterError("subgoal unreachable; board is not solvable")


def bfs_subgoal(board: tuple, i: int, ordering: FeatureOrdering,
                goal: tuple = GOAL) -> tuple:
    """Breadth-first subgoal solver; optimality oracle for ida_star_subgoal."""
    tiles = tuple(ordering.feature(p) for p in range(1, i + 1))

    def satisfied(b):
        return all(b[t] == goal[t] for t in tiles)

    if satisfied(board):
        return ()
    seen = {board}
    frontier = deque([(board, ())])
    while frontier:
        b, path = frontier.popleft()
        for op, m in enumerate(MOVE_LETTERS, start=1):
            try:
                nb = apply_move(b, m)
            except MoveError:
                continue
            if nb in seen:
                continue
            npath = path + (op,)
            if satisfied(nb):
                return npath
            seen.add(nb)
            frontier.append((nb, npath))
    raise ParameterError("subgoal unreachable; board is not solvable")


# ---------------------------------------------------------------------------
# Teachers and tables
# ---------------------------------------------------------------------------


def integrated_teacher(board: tuple, table: MacroTable,
                       domain: Optional[DomainSpec] = None) -> tuple:
    """Solve by columns, reusing the table's macros and searching (then
    inserting) for unfilled cells.  Every solution it emits is generable
    from the single table it is growing."""
    solution = []
    for i in range(1, table.n + 1):
        j = board[table.ordering.feature(i)]
        macro = table.get(j, i)
        if macro is None:
            macro = ida_star_subgoal(board, i, table.ordering, table.goal)
            table.insert(j, i, macro)
        for op in macro:
            board = apply_move(board, MOVE_LETTERS[op - 1])
            solution.append((op, None))
    return tuple(solution)


def _canonical_state(i: int, j: int, ordering: FeatureOrdering,
                     goal: tuple = GOAL) -> Optional[tuple]:
    """A solvable board with ordered features 1..i-1 at goal and feature i
    at value j, or None when no such board exists."""
    board = [None] * 9
    used = set()
    for p in range(1, i):
        t = ordering.feature(p)
        board[t] = goal[t]
        used.add(goal[t])
    t_i = ordering.feature(i)
    if j in used:
        return None
    board[t_i] = j
    used.add(j)
    rest_tiles = [t for t in range(9) if board[t] is None]
    rest_positions = [p for p in range(9) if p not in used]
    for t, p in zip(rest_tiles, rest_positions):
        board[t] = p
    if is_solvable(tuple(board)):
        return tuple(board)
    if len(rest_tiles) >= 2:
        a, b = rest_tiles[-2], rest_tiles[-1]
        board[a], board[b] = board[b], board[a]
        return tuple(board)
    return None  # parity forces the remaining tiles; value j is unreachable


def build_exhaustive_table(ordering: Optional[FeatureOrdering] = None) -> MacroTable:
    """Fill every reachable cell by per-cell subgoal search.

    Serial decomposability makes one canonical state per cell sufficient:
    the macro's effect on the constrained features is the same for every
    state matching the cell's precondition.
    """
    if ordering is None:
        ordering = blank_first_ordering()
    table = MacroTable(N_TILES, N_POSITIONS, GOAL, ordering)
    for i in range(1, N_TILES + 1):
        for j in range(N_POSITIONS):
            state = _canonical_state(i, j, ordering)
            if state is None:
                continue
            table.insert(j, i, ida_star_subgoal(state, i, ordering))
    return table


def table_trajectory(table: MacroTable, board: tuple):
    """The cells macro_solve would use on this board, with the solution.

    Returns (cells, solution) where cells is a list of (j, i); assumes the
    table has every needed cell (use with a fully built table).
    """
    cells = []
    solution = []
    for i in range(1, table.n + 1):
        j = board[table.ordering.feature(i)]
        macro = table.get(j, i)
        if macro is None:
            raise ParameterError(f"table is missing cell ({j}, {i})")
        cells.append((j, i))
        for op in macro:
            board = apply_move(board, MOVE_LETTERS[op - 1])
            solution.append((op, None))
    return cells, tuple(solution)
