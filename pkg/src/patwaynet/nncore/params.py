"""Parameter containers and corridor masking for the additive pathway model.

The sequential cell's weight matrices are stored gate-packed: columns hold
the four gates side by side in the order [forget, input, output, candidate],
each block H wide. A corridor is a contiguous block of m hidden columns owned
by one sequential feature (or by one interaction pair); binary masks keep
every weight that would let information cross corridors at exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

GATES = ("forget", "input", "output", "candidate")


@dataclass(frozen=True)
class Corridor:
    name: str
    members: tuple[int, ...]  # sequential channel indices feeding this corridor


@dataclass(frozen=True)
class CorridorTable:
    corridors: tuple[Corridor, ...]
    width: int  # m: hidden units per corridor

    @property
    def hidden_size(self) -> int:
        return self.width * len(self.corridors)

    def block(self, c: int) -> slice:
        return slice(c * self.width, (c + 1) * self.width)

    def input_mask(self, n_inputs: int) -> np.ndarray:
        """(p, H) ones where input row r feeds corridor column c's owner."""
        mask = np.zeros((n_inputs, self.hidden_size), dtype=np.float64)
        for c, corr in enumerate(self.corridors):
            for r in corr.members:
                mask[r, self.block(c)] = 1.0
        return mask

    def recurrent_mask(self) -> np.ndarray:
        """(H, H) block diagonal: hidden state never crosses corridors."""
        mask = np.zeros((self.hidden_size, self.hidden_size), dtype=np.float64)
        for c in range(len(self.corridors)):
            mask[self.block(c), self.block(c)] = 1.0
        return mask


def corridor_table_for(
    n_channels: int,
    width: int,
    channel_names: list[str] | None = None,
    interactions: list[tuple[int, int]] | None = None,
) -> CorridorTable:
    """One corridor per sequential channel, then one per interaction pair."""
    names = channel_names or [f"seq_{j}" for j in range(n_channels)]
    corridors = [Corridor(names[j], (j,)) for j in range(n_channels)]
    for j, k in interactions or []:
        if not (0 <= j < n_channels and 0 <= k < n_channels and j != k):
            raise ValueError(f"bad interaction pair ({j}, {k})")
        corridors.append(Corridor(f"{names[j]} x {names[k]}", (j, k)))
    return CorridorTable(tuple(corridors), width)


def unrestricted_table(n_channels: int, hidden_size: int) -> CorridorTable:
    """Single corridor over the whole hidden space: a plain LSTM cell."""
    return CorridorTable((Corridor("sequence", tuple(range(n_channels))),), hidden_size)


@dataclass
class PatWayNetParams:
    """All tensors of the model. Masked entries are exactly 0 at all times."""

    # static module: one 1-hidden-layer net (tanh) per static column
    static_w1: np.ndarray  # (q, h_stat)
    static_b1: np.ndarray  # (q, h_stat)
    static_w2: np.ndarray  # (q, h_stat)
    static_b2: np.ndarray  # (q,)
    # sequential module, gate-packed
    wx: np.ndarray  # (p, 4H)
    wh: np.ndarray  # (H, 4H)
    b: np.ndarray  # (4H,)
    mask_x: np.ndarray  # (p, H), constant
    mask_h: np.ndarray  # (H, H), constant
    corridors: CorridorTable
    # connection layer
    conn_static: np.ndarray  # (q,)
    conn_seq: np.ndarray  # (H,)
    conn_bias: np.ndarray  # ()
    head: str  # "sigmoid" | "identity"

    @property
    def n_static(self) -> int:
        return int(self.static_w1.shape[0])

    @property
    def n_channels(self) -> int:
        return int(self.wx.shape[0])

    @property
    def hidden_size(self) -> int:
        return int(self.wh.shape[0])

    @property
    def h_stat(self) -> int:
        return int(self.static_w1.shape[1])

    def gate_mask_x(self) -> np.ndarray:
        return np.tile(self.mask_x, (1, len(GATES)))

    def gate_mask_h(self) -> np.ndarray:
        return np.tile(self.mask_h, (1, len(GATES)))

    def tensors(self) -> list[tuple[str, np.ndarray]]:
        """Trainable tensors in a fixed order (masks are constants)."""
        return [
            ("static_w1", self.static_w1),
            ("static_b1", self.static_b1),
            ("static_w2", self.static_w2),
            ("static_b2", self.static_b2),
            ("wx", self.wx),
            ("wh", self.wh),
            ("b", self.b),
            ("conn_static", self.conn_static),
            ("conn_seq", self.conn_seq),
            ("conn_bias", self.conn_bias),
        ]

    def grad_mask(self, name: str) -> np.ndarray | None:
        if name == "wx":
            return self.gate_mask_x()
        if name == "wh":
            return self.gate_mask_h()
        return None

    def copy(self) -> "PatWayNetParams":
        return replace(
            self,
            **{name: arr.copy() for name, arr in self.tensors()},
        )


def init_params(
    n_static: int,
    n_channels: int,
    h_stat: int,
    corridors: CorridorTable,
    head: str = "sigmoid",
    seed: int = 0,
) -> PatWayNetParams:
    """Uniform +-1/sqrt(fan_in) weights, zero biases, masked entries zeroed.

    The full tensor is drawn before masking so RNG consumption does not
    depend on the corridor layout.
    """
    if head not in ("sigmoid", "identity"):
        raise ValueError(f"unknown head {head!r}")
    rng = np.random.default_rng(seed)
    H = corridors.hidden_size

    def draw(shape, fan_in):
        bound = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-bound, bound, size=shape)

    mask_x = corridors.input_mask(n_channels)
    mask_h = corridors.recurrent_mask()
    params = PatWayNetParams(
        static_w1=draw((n_static, h_stat), 1),
        static_b1=np.zeros((n_static, h_stat)),
        static_w2=draw((n_static, h_stat), h_stat),
        static_b2=np.zeros(n_static),
        wx=draw((n_channels, 4 * H), n_channels) * np.tile(mask_x, (1, 4)),
        wh=draw((H, 4 * H), H) * np.tile(mask_h, (1, 4)),
        b=np.zeros(4 * H),
        mask_x=mask_x,
        mask_h=mask_h,
        corridors=corridors,
        conn_static=draw(n_static, n_static + H),
        conn_seq=draw(H, n_static + H),
        conn_bias=np.zeros(()),
        head=head,
    )
    return params
