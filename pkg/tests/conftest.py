import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pwlent.catalog import tent
from pwlent.pwl import identity_map


@pytest.fixture
def t2():
    return tent(2)


@pytest.fixture
def t32():
    from pwlent.rationals import rat

    return tent(rat(3, 2))


@pytest.fixture
def ident():
    return identity_map()
