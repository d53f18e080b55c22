"""
Decorated D(S3) stabilizers on small periodic lattices.

Sites follow anyonsim.components.lattice: vertex (x, y) touches N=V(x,y), E=H(x,y),
S=V(x,y-1), W=H(x-1,y); plaquette (x, y) is bounded by S=H(x,y), N=H(x,y+1), W=V(x,y),
E=V(x+1,y) and has its south-west corner at vertex (x, y). F and G pair a plaquette
with its south-west corner vertex.
"""
from __future__ import annotations

from dataclasses import dataclass

from anyonsim.components.lattice import Torus
from anyonsim.errors import LatticeError, UnknownStabilizerError

from .operators import (IDENTITY, MAX_EDGES, K, LinearCombination, OperatorWord, X, Z, product, sigma_x,
                        sigma_z)

VERTEX_KINDS = ('alpha', 'A', 'S_v', 'A_Z3')
PLAQUETTE_KINDS = ('beta', 'B', 'S_p', 'B_Z3', 'F', 'G')
KINDS = VERTEX_KINDS + PLAQUETTE_KINDS

ALIASES = {
    'α': 'alpha', 'β': 'beta', 'A_v': 'A', 'B_p': 'B',
    'A^Z3': 'A_Z3', 'B^Z3': 'B_Z3', 'F_vp': 'F', 'G_vp': 'G',
}


@dataclass(frozen=True)
class SmallLattice:
    name: str
    L: int

    @property
    def torus(self) -> Torus:
        return Torus(self.L)

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        return [self.torus.edge_coords(i) for i in range(self.torus.n_edges)]

    @property
    def sites(self) -> list[tuple[int, int]]:
        return [(x, y) for y in range(self.L) for x in range(self.L)]


LATTICES = {
    '2x2': SmallLattice('2x2', 2),
    '3x3-patch': SmallLattice('3x3-patch', 3),
}


def get_lattice(name: str | SmallLattice) -> SmallLattice:
    if isinstance(name, SmallLattice):
        return name
    try:
        return LATTICES[name]
    except KeyError:
        msg = f"unknown lattice {name!r}; choose from {sorted(LATTICES)}"
        raise LatticeError(msg) from None


def normalize_kind(kind: str) -> str:
    kind = ALIASES.get(kind, kind)
    if kind not in KINDS:
        msg = f"unknown stabilizer kind {kind!r}"
        raise UnknownStabilizerError(msg)
    return kind


def alpha_word(torus: Torus, x: int, y: int) -> OperatorWord:
    e = torus.vertex_edges(x, y)
    return product([K(e['N']), sigma_x(e['N']), K(e['E']), sigma_x(e['E']), sigma_x(e['S']), sigma_x(e['W'])])


def beta_word(torus: Torus, x: int, y: int) -> OperatorWord:
    e = torus.plaquette_edges(x, y)
    return product(sigma_z(e[d]) for d in ('N', 'E', 'S', 'W'))


def vertex_word(torus: Torus, x: int, y: int, gauged: bool = True) -> OperatorWord:
    """A_v; with gauged=False the clean Z3 toric-code form X X X^-1 X^-1."""
    e = torus.vertex_edges(x, y)
    gamma = (e['W'],) if gauged else ()
    delta = (e['S'],) if gauged else ()
    return X(e['N']) @ X(e['E']) @ X(e['S'], -1, delta) @ X(e['W'], -1, gamma)


def plaquette_word(torus: Torus, x: int, y: int, gauged: bool = True, kappa: str = 'beta') -> OperatorWord:
    """
    B_p = Z_N^xi Z_E^-kappa Z_S^-lambda Z_W

    kappa is either the product sigma^Z_W sigma^Z_N sigma^Z_E ('product') or sigma^Z_S beta_p ('beta').
    """
    e = torus.plaquette_edges(x, y)
    if not gauged:
        return Z(e['N']) @ Z(e['E'], -1) @ Z(e['S'], -1) @ Z(e['W'])
    beta = (e['N'], e['E'], e['S'], e['W'])
    if kappa == 'beta':
        kappa_cond = (e['S'],) + beta
    elif kappa == 'product':
        kappa_cond = (e['W'], e['N'], e['E'])
    else:
        msg = f"unknown kappa form {kappa!r}"
        raise ValueError(msg)
    return Z(e['N'], 1, (e['W'],)) @ Z(e['E'], -1, kappa_cond) @ Z(e['S'], -1, beta) @ Z(e['W'])


def hermitian_part(word: OperatorWord) -> LinearCombination:
    return LinearCombination(((0.5, word), (0.5, word.dagger())))


def parafermion_terms(a: OperatorWord, b: OperatorWord, kind: str) -> LinearCombination:
    if kind == 'F':
        pair = (a.dagger() @ b, a @ b.dagger())
    else:
        pair = (a @ b, a.dagger() @ b.dagger())
    return LinearCombination(((0.5, IDENTITY), (-0.5, pair[0]), (-0.5, pair[1])))


def build_stabilizer(kind: str, site: tuple[int, int], lattice: str | SmallLattice = '3x3-patch'):
    """
    Build a stabilizer word on a small periodic lattice

    Args:
        kind (str): one of KINDS (aliases such as 'α' or 'A_v' are accepted)
        site (tuple): vertex or plaquette coordinate; for F and G the plaquette, paired with its SW corner
        lattice (str | SmallLattice): '2x2' or '3x3-patch'

    Returns:
        OperatorWord | LinearCombination
    """
    kind = normalize_kind(kind)
    lattice = get_lattice(lattice)
    x, y = site
    if not (0 <= x < lattice.L and 0 <= y < lattice.L):
        msg = f"site {site} outside the {lattice.name} lattice"
        raise LatticeError(msg)
    torus = lattice.torus

    if kind == 'alpha':
        word = alpha_word(torus, x, y)
    elif kind == 'beta':
        word = beta_word(torus, x, y)
    elif kind in ('A', 'A_Z3'):
        word = vertex_word(torus, x, y, gauged=kind == 'A')
    elif kind in ('B', 'B_Z3'):
        word = plaquette_word(torus, x, y, gauged=kind == 'B')
    elif kind == 'S_v':
        word = hermitian_part(vertex_word(torus, x, y))
    elif kind == 'S_p':
        word = hermitian_part(plaquette_word(torus, x, y))
    else:
        word = parafermion_terms(vertex_word(torus, x, y), plaquette_word(torus, x, y), kind)

    if len(word.support()) > MAX_EDGES:
        msg = f"{kind} at {site} needs {len(word.support())} edges"
        raise LatticeError(msg)
    return word


def restrict_to_qubits(word, qubits: dict):
    """
    Substitute fixed sigma^Z values into the conditional exponents.
    Only valid for words without sigma^X/sigma^Z/K factors (A, B and their combinations).
    """
    if isinstance(word, LinearCombination):
        return LinearCombination(tuple((c, restrict_to_qubits(w, qubits)) for c, w in word.terms))
    factors = []
    for f in word.factors:
        if f.kind not in ('X', 'Z'):
            msg = f"cannot restrict a word containing {f.kind}"
            raise ValueError(msg)
        sign = 1
        for edge in f.cond:
            sign *= -1 if qubits.get(edge, 0) else 1
        factors.append(type(f)(f.kind, f.edge, f.power * sign, ()))
    return OperatorWord(tuple(factors))
