"""Meshes on [0, L] aligned with impulse points, and piecewise grid functions.

A mesh splits [0, L] at the impulse points into smooth pieces and puts a
uniform node grid on each piece, so every impulse point is a mesh node
bitwise. A :class:`GridFunction` stores one sample array per piece; an
impulse node therefore carries two samples, the left limit as the last
entry of the preceding piece and the right limit as the first entry of
the following piece. Plain evaluation at an impulse node returns the
left limit.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


class Mesh:
    """Partition of [0, interval_end] whose nodes include every impulse point.

    Immutable after construction (all arrays are write-protected). Instances
    also own a read-mostly cache of quadrature weight matrices keyed by
    kernel exponent; see :mod:`fracsl.frac_ops`.
    """

    def __init__(self, interval_end: float, impulse_points, nodes_per_subinterval: int):
        interval_end = float(interval_end)
        if not np.isfinite(interval_end) or interval_end <= 0.0:
            raise ValidationError("interval end must be positive and finite", field="interval_end")
        if int(nodes_per_subinterval) != nodes_per_subinterval or nodes_per_subinterval < 4:
            raise ValidationError("need at least 4 cells per subinterval", field="nodes_per_subinterval")
        pts = np.asarray([float(t) for t in impulse_points], dtype=float)
        if pts.size and (not np.all(np.isfinite(pts))):
            raise ValidationError("impulse points must be finite", field="impulse_points")
        if pts.size and not np.all(np.diff(pts) > 0.0):
            raise ValidationError("impulse points must be strictly increasing", field="impulse_points")
        if pts.size and (pts[0] <= 0.0 or pts[-1] >= interval_end):
            raise ValidationError("impulse points must lie strictly inside (0, interval_end)", field="impulse_points")

        self.interval_end = interval_end
        self.impulse_points = pts
        self.nodes_per_subinterval = int(nodes_per_subinterval)

        bounds = np.concatenate(([0.0], pts, [interval_end]))
        m = self.nodes_per_subinterval
        # linspace pins both endpoints exactly, which keeps impulse points
        # bitwise equal to mesh nodes on both neighbouring pieces
        self.piece_nodes = tuple(
            np.linspace(bounds[q], bounds[q + 1], m + 1) for q in range(len(bounds) - 1)
        )
        self.boundaries = bounds
        nodes = [self.piece_nodes[0]]
        nodes.extend(p[1:] for p in self.piece_nodes[1:])
        self.nodes = np.concatenate(nodes)

        for arr in (*self.piece_nodes, self.boundaries, self.nodes, self.impulse_points):
            arr.setflags(write=False)
        self._op_cache: dict = {}

    @property
    def n_pieces(self) -> int:
        return len(self.piece_nodes)

    @property
    def n_impulses(self) -> int:
        return len(self.impulse_points)

    @property
    def flat_size(self) -> int:
        return sum(len(p) for p in self.piece_nodes)

    @property
    def flat_nodes(self) -> np.ndarray:
        """Node abscissae in flat storage order (impulse nodes duplicated)."""
        cached = self._op_cache.get("flat_nodes")
        if cached is None:
            cached = np.concatenate(self.piece_nodes)
            cached.setflags(write=False)
            self._op_cache["flat_nodes"] = cached
        return cached

    def piece_offset(self, q: int) -> int:
        return q * (self.nodes_per_subinterval + 1)

    def locate(self, t: float, side: str = "left") -> tuple[int, int]:
        """Locate node ``t`` as ``(piece, index)``.

        At an impulse node ``side`` picks the sample: ``"left"`` returns the
        last index of the preceding piece (the value plain evaluation uses),
        ``"right"`` the first index of the following piece.
        """
        for q, s in enumerate(self.piece_nodes):
            i = np.searchsorted(s, t)
            if i < len(s) and s[i] == t:
                if side == "right" and i == len(s) - 1 and q + 1 < self.n_pieces:
                    return q + 1, 0
                if side == "left" and i == 0 and q > 0:
                    return q - 1, self.nodes_per_subinterval
                return q, int(i)
        raise ValidationError(f"{t!r} is not a mesh node", field="t")

    def spacing(self, q: int) -> float:
        s = self.piece_nodes[q]
        return (s[-1] - s[0]) / self.nodes_per_subinterval

    def __repr__(self):
        return (
            f"Mesh(interval_end={self.interval_end!r}, impulses={list(self.impulse_points)!r}, "
            f"nodes_per_subinterval={self.nodes_per_subinterval})"
        )


def build_mesh(interval_end: float, impulse_points, nodes_per_subinterval: int) -> Mesh:
    """Build a mesh on [0, interval_end] with the impulse points as exact nodes."""
    return Mesh(interval_end, impulse_points, nodes_per_subinterval)


class GridFunction:
    """Piecewise-continuous function sampled on a :class:`Mesh`.

    ``values`` holds one array per smooth piece; impulse nodes are stored
    twice (left limit in the preceding piece, right limit in the following
    one). ``derivative_values`` optionally carries samples of y' in the same
    layout. Instances are immutable.
    """

    def __init__(self, mesh: Mesh, values, derivative_values=None):
        self.mesh = mesh
        self.values = tuple(np.array(v, dtype=float) for v in values)
        if len(self.values) != mesh.n_pieces:
            raise ValidationError("one value array per smooth piece required", field="values")
        for q, v in enumerate(self.values):
            if v.shape != mesh.piece_nodes[q].shape:
                raise ValidationError(f"piece {q}: {v.shape} samples for {mesh.piece_nodes[q].shape} nodes", field="values")
        if derivative_values is not None:
            self.derivative_values = tuple(np.array(v, dtype=float) for v in derivative_values)
            if len(self.derivative_values) != mesh.n_pieces:
                raise ValidationError("one derivative array per smooth piece required", field="derivative_values")
            for q, v in enumerate(self.derivative_values):
                if v.shape != mesh.piece_nodes[q].shape:
                    raise ValidationError(f"piece {q}: derivative sample count mismatch", field="derivative_values")
        else:
            self.derivative_values = None
        for v in self.values:
            v.setflags(write=False)
        if self.derivative_values is not None:
            for v in self.derivative_values:
                v.setflags(write=False)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, mesh: Mesh, with_derivative: bool = True) -> "GridFunction":
        vals = [np.zeros_like(p) for p in mesh.piece_nodes]
        dvals = [np.zeros_like(p) for p in mesh.piece_nodes] if with_derivative else None
        return cls(mesh, vals, dvals)

    @classmethod
    def from_callable(cls, mesh: Mesh, fn, dfn=None) -> "GridFunction":
        """Sample a (continuous) callable at every node, both sides alike."""
        vals = [np.array([fn(t) for t in p]) for p in mesh.piece_nodes]
        dvals = None
        if dfn is not None:
            dvals = [np.array([dfn(t) for t in p]) for p in mesh.piece_nodes]
        return cls(mesh, vals, dvals)

    @classmethod
    def from_flat(cls, mesh: Mesh, flat, flat_derivative=None) -> "GridFunction":
        m = mesh.nodes_per_subinterval + 1
        vals = [np.asarray(flat[q * m : (q + 1) * m], dtype=float) for q in range(mesh.n_pieces)]
        dvals = None
        if flat_derivative is not None:
            dvals = [np.asarray(flat_derivative[q * m : (q + 1) * m], dtype=float) for q in range(mesh.n_pieces)]
        return cls(mesh, vals, dvals)

    # -- access -------------------------------------------------------------

    @property
    def flat(self) -> np.ndarray:
        return np.concatenate(self.values)

    @property
    def flat_derivative(self) -> np.ndarray:
        if self.derivative_values is None:
            raise ValidationError("derivative samples were not stored", field="derivative_values")
        return np.concatenate(self.derivative_values)

    def left_value(self, k: int) -> float:
        """y(t_k^-) at impulse index k (1-based). This is y(t_k)."""
        self._check_impulse_index(k)
        return float(self.values[k - 1][-1])

    def right_value(self, k: int) -> float:
        """y(t_k^+) at impulse index k (1-based)."""
        self._check_impulse_index(k)
        return float(self.values[k][0])

    def value_at(self, t: float) -> float:
        """Value at a mesh node; at an impulse node the left limit."""
        q, i = self.mesh.locate(t, side="left")
        return float(self.values[q][i])

    def _check_impulse_index(self, k: int):
        if not 1 <= k <= self.mesh.n_impulses:
            raise ValidationError(f"impulse index {k} out of range 1..{self.mesh.n_impulses}", field="k")


def pc_norm(y: GridFunction) -> float:
    """Sup norm over all stored samples, both one-sided limits included."""
    return max(float(np.max(np.abs(v))) if v.size else 0.0 for v in y.values)


def jump_at(y: GridFunction, k: int) -> tuple[float, float]:
    """Value and derivative jumps at impulse index k (1-based)."""
    y._check_impulse_index(k)
    dy = y.right_value(k) - y.left_value(k)
    if y.derivative_values is None:
        raise ValidationError("derivative jump requested but derivative samples are absent", field="derivative_values")
    dyp = float(y.derivative_values[k][0] - y.derivative_values[k - 1][-1])
    return dy, dyp
