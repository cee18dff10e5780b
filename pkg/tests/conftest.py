import pytest

from steakhouse import parse_layout

# Open 5x5 room, no stations except the border; good for pure geometry tests.
OPEN_ROOM = """orders: 1
horizon: 50
XXXXXXX
X     X
X     X
X  H  X
X     X
X R   X
XXXXXXX
"""

# Compact kitchen with every station adjacent to a small open area.
MICRO_KITCHEN = """orders: 1
horizon: 120
XMGSX
XH  D
X  RX
XOBPX
"""


@pytest.fixture
def open_room():
    return parse_layout(OPEN_ROOM, name="open_room")


@pytest.fixture
def micro_kitchen():
    return parse_layout(MICRO_KITCHEN, name="micro_kitchen")
