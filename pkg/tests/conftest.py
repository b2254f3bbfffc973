"""Shared session fixtures for the expensive Eight Puzzle artifacts."""

import pytest

from speedup_learning import eight_puzzle


@pytest.fixture(scope="session")
def all_boards():
    return eight_puzzle.all_solvable_boards()


@pytest.fixture(scope="session")
def exhaustive_table():
    return eight_puzzle.build_exhaustive_table()
