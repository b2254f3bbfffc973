"""Walk through the Eight Puzzle macro-table machinery.

Builds the exhaustive 9x9 macro table, shows the classic blank-centering
walkthrough, and learns a table from teacher solutions by serial parsing.

Run:  python3 demos/eight_puzzle_walkthrough.py
"""

import random

from speedup_learning import eight_puzzle as ep
from speedup_learning.core import Example
from speedup_learning.macro_tables import MacroTable, macro_solve, serial_parse_into


def show_board(board):
    text = ep.board_to_text(board)
    # positions: 1 2 3 / 8 0 4 / 7 6 5 around the center
    rows = [(1, 2, 3), (8, 0, 4), (7, 6, 5)]
    for row in rows:
        print("   " + " ".join(text[p] for p in row))


def main():
    print("== the walkthrough board: blank at 5, tile 1 at 2 ==")
    board = [None] * 9
    board[0], board[1] = 5, 2
    for t, p in zip(range(2, 9), (0, 1, 3, 4, 6, 7, 8)):
        board[t] = p
    if not ep.is_solvable(tuple(board)):
        board[7], board[8] = board[8], board[7]
    board = tuple(board)
    show_board(board)
    centered = ep.apply_moves(board, "dr")
    print('after "dr" (blank centered):')
    show_board(centered)
    macro = ep.ida_star_subgoal(centered, 2, ep.blank_first_ordering())
    print(f"tile-1 subgoal macro: {ep.macro_to_letters(macro)}\n")

    print("== exhaustive macro table (rows: value j, columns: position i) ==")
    table = ep.build_exhaustive_table()
    print(table.dump(op_letters=ep.MOVE_LETTERS))
    print(f"filled cells: {table.filled_count()}, "
          f"nonempty macros: {table.nonempty_count()}\n")

    print("== learning a table from 20 teacher solutions ==")
    rng = random.Random(0)
    dom = ep.domain_spec()
    ordering = ep.blank_first_ordering()
    teacher_table = MacroTable(9, 9, ep.GOAL, ordering)
    learned = MacroTable(9, 9, ep.GOAL, ordering)
    for t in range(1, 21):
        b = ep.random_solvable(rng)
        solution = ep.integrated_teacher(b, teacher_table)
        serial_parse_into(learned, dom, Example(b, solution))
        if t % 5 == 0:
            print(f"after {t:>2} examples: {learned.filled_count()} cells filled")
    print()

    hits = 0
    test_rng = random.Random(1)
    for _ in range(100):
        q = ep.random_solvable(test_rng)
        hits += macro_solve(learned, dom, q) == macro_solve(table, dom, q)
    print(f"learned table matches the target on {hits}/100 fresh boards")


if __name__ == "__main__":
    main()
