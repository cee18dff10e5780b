"""Kitchen layouts: ASCII grid format, validation, and static geometry.

Grid chars: ``X`` counter, space floor, ``G`` grill, ``S`` sink, ``B``
chopping board, ``O`` onion dispenser, ``M`` meat dispenser, ``P`` plate
dispenser, ``D`` serving counter, ``H``/``R`` human/robot start (floor,
facing N). Header lines ``orders: <n>`` and ``horizon: <n>`` precede the
grid.

A layout may have at most one grill, sink, and board (the world state
tracks a single slot for each). Parsing is strict about unknown characters
and agent starts; ``parse_layout(layout_text(l)) == l`` for any valid ``l``.
"""

from __future__ import annotations

from .actions import Cell, Heading

FLOOR = " "
COUNTER = "X"
GRILL = "G"
SINK = "S"
BOARD = "B"
ONION_DISPENSER = "O"
MEAT_DISPENSER = "M"
PLATE_DISPENSER = "P"
SERVING = "D"

STATION_TILES = frozenset({COUNTER, GRILL, SINK, BOARD, ONION_DISPENSER,
                           MEAT_DISPENSER, PLATE_DISPENSER, SERVING})
UNIQUE_STATIONS = (GRILL, SINK, BOARD)
TILE_CHARS = STATION_TILES | {FLOOR}
START_CHARS = frozenset({"H", "R"})

_NEIGHBOR_OFFSETS = ((0, -1), (0, 1), (-1, 0), (1, 0))


class LayoutError(ValueError):
    pass


class Layout:
    """Immutable kitchen map plus precomputed geometry.

    Equality and hashing cover the map content only (rows, starts, orders,
    horizon), not the display name, so a parsed round-trip compares equal.
    """

    def __init__(self, rows: tuple[str, ...], human_start: tuple[Cell, Heading],
                 robot_start: tuple[Cell, Heading], orders: int, horizon: int,
                 name: str = "custom"):
        self.rows = rows
        self.height = len(rows)
        self.width = len(rows[0]) if rows else 0
        self.human_start = human_start
        self.robot_start = robot_start
        self.orders = orders
        self.horizon = horizon
        self.name = name

        self.floor_cells: frozenset[Cell] = frozenset(
            (x, y) for y, row in enumerate(rows)
            for x, ch in enumerate(row) if ch == FLOOR)
        self.stations: dict[str, tuple[Cell, ...]] = {}
        for y, row in enumerate(rows):
            for x, ch in enumerate(row):
                if ch in STATION_TILES and ch != COUNTER:
                    self.stations.setdefault(ch, ())
                    self.stations[ch] += ((x, y),)
        self.grill_cell = self._only(GRILL)
        self.sink_cell = self._only(SINK)
        self.board_cell = self._only(BOARD)
        self.counter_cells: tuple[Cell, ...] = tuple(sorted(
            (x, y) for y, row in enumerate(rows)
            for x, ch in enumerate(row) if ch == COUNTER))
        # KB-tracked features in canonical order; the robot occupies one
        # extra pending slot after these.
        tracked: list[tuple[str, Cell]] = []
        if self.grill_cell is not None:
            tracked.append((GRILL, self.grill_cell))
        if self.sink_cell is not None:
            tracked.append((SINK, self.sink_cell))
        if self.board_cell is not None:
            tracked.append((BOARD, self.board_cell))
        tracked.extend((COUNTER, c) for c in self.counter_cells)
        self.tracked_features: tuple[tuple[str, Cell], ...] = tuple(tracked)
        self.tracked_index: dict[Cell, int] = {
            cell: i for i, (_, cell) in enumerate(self.tracked_features)}

        self._validate()
        # mutable caches, filled lazily by pathing/perception/planner helpers
        self._dist_cache: dict = {}
        self._vis_cache: dict = {}
        self._value_cache: dict = {}
        self._key = (rows, human_start, robot_start, orders, horizon)

    def _only(self, tile: str) -> Cell | None:
        cells = self.stations.get(tile, ())
        return cells[0] if cells else None

    def _validate(self) -> None:
        if self.orders < 1:
            raise LayoutError("orders must be >= 1")
        if self.horizon < 1:
            raise LayoutError("horizon must be >= 1")
        if not self.rows or self.width == 0:
            raise LayoutError("empty grid")
        for start, who in ((self.human_start, "human"), (self.robot_start, "robot")):
            if start[0] not in self.floor_cells:
                raise LayoutError(f"{who} start is not on a floor cell")
        if self.human_start[0] == self.robot_start[0]:
            raise LayoutError("human and robot start on the same cell")
        for tile in UNIQUE_STATIONS:
            if len(self.stations.get(tile, ())) > 1:
                raise LayoutError(f"duplicate station {tile!r}")
        # Plain counters may sit in walls/corners; functional stations must
        # be workable from at least one adjacent floor cell.
        for tile, cells in self.stations.items():
            for cell in cells:
                if not self.adjacent_floor(cell):
                    raise LayoutError(f"unreachable station {tile!r} at {cell}")

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def tile_at(self, cell: Cell) -> str:
        return self.rows[cell[1]][cell[0]]

    def is_floor(self, cell: Cell) -> bool:
        return cell in self.floor_cells

    def adjacent_floor(self, cell: Cell) -> tuple[Cell, ...]:
        x, y = cell
        return tuple((x + dx, y + dy) for dx, dy in _NEIGHBOR_OFFSETS
                     if (x + dx, y + dy) in self.floor_cells)

    def all_cells(self) -> list[Cell]:
        return [(x, y) for y in range(self.height) for x in range(self.width)]

    def station_cells(self, tile: str) -> tuple[Cell, ...]:
        if tile == COUNTER:
            return self.counter_cells
        return self.stations.get(tile, ())

    def __eq__(self, other) -> bool:
        return isinstance(other, Layout) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Layout({self.name!r}, {self.width}x{self.height}, orders={self.orders})"


def parse_layout(text: str, name: str = "custom") -> Layout:
    """Parse the ASCII layout format; raises LayoutError on any defect."""
    orders: int | None = None
    horizon: int | None = None
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        stripped = lines[i].strip()
        if ":" in stripped:
            key, _, value = stripped.partition(":")
            key = key.strip().lower()
            if key not in ("orders", "horizon"):
                raise LayoutError(f"malformed header line: {lines[i]!r}")
            try:
                parsed = int(value.strip())
            except ValueError as exc:
                raise LayoutError(f"malformed header line: {lines[i]!r}") from exc
            if key == "orders":
                orders = parsed
            else:
                horizon = parsed
            i += 1
        elif stripped == "":
            i += 1
        else:
            break
    grid_lines = lines[i:]
    while grid_lines and grid_lines[-1].strip() == "":
        grid_lines.pop()
    if not grid_lines:
        raise LayoutError("no grid found")

    width = max(len(line) for line in grid_lines)
    human_start = None
    robot_start = None
    rows: list[str] = []
    for y, line in enumerate(grid_lines):
        padded = line.ljust(width)
        row_chars = []
        for x, ch in enumerate(padded):
            if ch == "H":
                if human_start is not None:
                    raise LayoutError("duplicate human start")
                human_start = ((x, y), Heading.N)
                ch = FLOOR
            elif ch == "R":
                if robot_start is not None:
                    raise LayoutError("duplicate robot start")
                robot_start = ((x, y), Heading.N)
                ch = FLOOR
            elif ch not in TILE_CHARS:
                raise LayoutError(f"unknown character {ch!r} at {(x, y)}")
            row_chars.append(ch)
        rows.append("".join(row_chars))
    if human_start is None:
        raise LayoutError("missing human start (H)")
    if robot_start is None:
        raise LayoutError("missing robot start (R)")

    return Layout(tuple(rows), human_start, robot_start,
                  orders if orders is not None else 1,
                  horizon if horizon is not None else 200,
                  name=name)


def packaged_layout_names() -> list[str]:
    from importlib import resources
    root = resources.files(__package__) / "layouts"
    return sorted(p.name[:-len(".layout")] for p in root.iterdir()
                  if p.name.endswith(".layout"))


def load_packaged_layout(name: str) -> Layout:
    from importlib import resources
    path = resources.files(__package__) / "layouts" / f"{name}.layout"
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise LayoutError(
            f"no packaged layout {name!r}; available: {packaged_layout_names()}")
    return parse_layout(text, name=name)


def layout_text(layout: Layout) -> str:
    """Serialize back to the ASCII format (inverse of parse_layout)."""
    grid = [list(row) for row in layout.rows]
    hx, hy = layout.human_start[0]
    rx, ry = layout.robot_start[0]
    grid[hy][hx] = "H"
    grid[ry][rx] = "R"
    lines = [f"orders: {layout.orders}", f"horizon: {layout.horizon}"]
    lines.extend("".join(row) for row in grid)
    return "\n".join(lines) + "\n"
