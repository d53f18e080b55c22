"""
Operator words over qutrit (x) qubit edges and the small dense states they act on.

A state over n edges is a tensor of shape (3, 2) * n: axis 2i is the qutrit of edge i and
axis 2i+1 its qubit. Words are written in matrix-product order and applied right to left.
Exponents may be conditioned on the product of sigma^Z over a set of edges, which is how the
decorated D(S3) stabilizers couple the two layers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from anyonsim.errors import SupportMismatchError

OMEGA = np.exp(2j * np.pi / 3)
MAX_EDGES = 8

ORDERS = {'X': 3, 'Z': 3, 'sx': 2, 'sz': 2, 'K': 2, 'phase': 3}


@dataclass(frozen=True)
class Factor:
    kind: str
    edge: tuple | None = None
    power: int = 1
    cond: tuple = ()

    def inverse(self) -> Factor:
        if self.kind in ('X', 'Z', 'phase'):
            return Factor(self.kind, self.edge, -self.power, self.cond)
        return self

    def edges(self) -> set:
        found = set(self.cond)
        if self.edge is not None:
            found.add(self.edge)
        return found

    def describe(self) -> str:
        label = {'sx': 'σX', 'sz': 'σZ'}.get(self.kind, self.kind)
        power = '' if self.power == 1 or self.kind in ('sx', 'sz', 'K') else f'^{self.power}'
        cond = f'^σZ{list(self.cond)}' if self.cond else ''
        return f'{label}{power}{cond}@{self.edge}' if self.edge is not None else f'ω{power}[{list(self.cond)}]'


@dataclass(frozen=True)
class OperatorWord:
    factors: tuple = ()

    def __matmul__(self, other: OperatorWord) -> OperatorWord:
        return OperatorWord(self.factors + other.factors)

    def dagger(self) -> OperatorWord:
        return OperatorWord(tuple(f.inverse() for f in reversed(self.factors)))

    def power(self, n: int) -> OperatorWord:
        return OperatorWord(self.factors * n)

    def support(self) -> set:
        found = set()
        for f in self.factors:
            found |= f.edges()
        return found

    def simplified(self) -> OperatorWord:
        """Merge adjacent factors of one kind on one edge and drop identities."""
        merged = []
        for f in self.factors:
            if merged and (merged[-1].kind, merged[-1].edge, merged[-1].cond) == (f.kind, f.edge, f.cond):
                last = merged.pop()
                f = Factor(f.kind, f.edge, last.power + f.power, f.cond)
            power = f.power % ORDERS[f.kind]
            if power:
                merged.append(Factor(f.kind, f.edge, power, f.cond))
        return OperatorWord(tuple(merged))

    def describe(self) -> str:
        return ' '.join(f.describe() for f in self.factors) or '1'


IDENTITY = OperatorWord()


@dataclass(frozen=True)
class LinearCombination:
    terms: tuple = field(default_factory=tuple)

    def dagger(self) -> LinearCombination:
        return LinearCombination(tuple((np.conj(c), w.dagger()) for c, w in self.terms))

    def support(self) -> set:
        found = set()
        for _, w in self.terms:
            found |= w.support()
        return found

    def describe(self) -> str:
        return ' + '.join(f'({c:.3g})·[{w.describe()}]' for c, w in self.terms)


def X(edge, power=1, cond=()):
    return OperatorWord((Factor('X', edge, power, tuple(cond)),))


def Z(edge, power=1, cond=()):
    return OperatorWord((Factor('Z', edge, power, tuple(cond)),))


def sigma_x(edge):
    return OperatorWord((Factor('sx', edge),))


def sigma_z(edge):
    return OperatorWord((Factor('sz', edge),))


def K(edge):
    return OperatorWord((Factor('K', edge),))


def phase(power, cond):
    """ω^power on the sector where the product of sigma^Z over `cond` is -1."""
    return OperatorWord((Factor('phase', None, power, tuple(cond)),))


def product(words: Iterable[OperatorWord]) -> OperatorWord:
    result = IDENTITY
    for w in words:
        result = result @ w
    return result


def commutator(v: OperatorWord, w: OperatorWord) -> OperatorWord:
    """Group commutator V W V^-1 W^-1."""
    return v @ w @ v.dagger() @ w.dagger()


@dataclass
class SmallState:
    edges: tuple
    tensor: np.ndarray

    def __post_init__(self):
        if len(self.edges) > MAX_EDGES:
            msg = f"states are limited to {MAX_EDGES} edges, got {len(self.edges)}"
            raise SupportMismatchError(msg)
        self.axis = {edge: i for i, edge in enumerate(self.edges)}

    @property
    def dimension(self) -> int:
        return 6 ** len(self.edges)

    def norm(self) -> float:
        return float(np.linalg.norm(self.tensor))

    def normalized(self) -> SmallState:
        return SmallState(self.edges, self.tensor / self.norm())

    def copy(self) -> SmallState:
        return SmallState(self.edges, self.tensor.copy())

    def vector(self) -> np.ndarray:
        return self.tensor.reshape(-1)


def random_state(edges, rng) -> SmallState:
    """Haar-random normalized state on the given edges."""
    edges = tuple(edges)
    shape = (3, 2) * len(edges)
    tensor = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return SmallState(edges, tensor).normalized()


def basis_state(edges, levels: dict | None = None) -> SmallState:
    """|l, m> on every edge; `levels` maps edge -> (l, m), missing edges are |0, 0>."""
    edges = tuple(edges)
    tensor = np.zeros((3, 2) * len(edges), dtype=complex)
    index = []
    for edge in edges:
        index.extend((levels or {}).get(edge, (0, 0)))
    tensor[tuple(index)] = 1.0
    return SmallState(edges, tensor)


def apply(word, state: SmallState) -> SmallState:
    """Act with an OperatorWord or LinearCombination on a state."""
    missing = word.support() - set(state.edges)
    if missing:
        msg = f"word acts on edges {sorted(missing)} absent from the state"
        raise SupportMismatchError(msg)
    if isinstance(word, LinearCombination):
        total = np.zeros_like(state.tensor)
        for coefficient, term in word.terms:
            total = total + coefficient * _apply_word(term, state.tensor, state.axis)
        return SmallState(state.edges, total)
    return SmallState(state.edges, _apply_word(word, state.tensor, state.axis))


def _apply_word(word: OperatorWord, tensor, axis):
    for f in reversed(word.factors):
        tensor = _apply_factor(f, tensor, axis)
    return tensor


def _sign(tensor, axis, cond):
    """Product of sigma^Z over `cond`, broadcastable against the tensor."""
    sign = np.ones((1,) * tensor.ndim)
    for edge in cond:
        shape = [1] * tensor.ndim
        shape[2 * axis[edge] + 1] = 2
        sign = sign * np.array([1, -1]).reshape(shape)
    return sign


def _apply_factor(f: Factor, tensor, axis):
    if f.kind == 'phase':
        sign = _sign(tensor, axis, f.cond)
        return tensor * np.where(sign < 0, OMEGA ** f.power, 1.0)

    qutrit, qubit = 2 * axis[f.edge], 2 * axis[f.edge] + 1
    if f.kind == 'X':
        forward = np.roll(tensor, f.power, axis=qutrit)
        if not f.cond:
            return forward
        backward = np.roll(tensor, -f.power, axis=qutrit)
        sign = np.broadcast_to(_sign(tensor, axis, f.cond), tensor.shape)
        return np.where(sign > 0, forward, backward)
    if f.kind == 'Z':
        shape = [1] * tensor.ndim
        shape[qutrit] = 3
        level = np.arange(3).reshape(shape)
        sign = _sign(tensor, axis, f.cond)
        return tensor * OMEGA ** ((f.power * sign * level) % 3)
    if f.kind == 'sx':
        return np.flip(tensor, axis=qubit)
    if f.kind == 'sz':
        shape = [1] * tensor.ndim
        shape[qubit] = 2
        return tensor * np.array([1, -1]).reshape(shape)
    if f.kind == 'K':
        return np.take(tensor, [0, 2, 1], axis=qutrit)
    msg = f"unknown factor kind {f.kind!r}"
    raise ValueError(msg)
