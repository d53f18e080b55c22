"""
Exact checks of the qutrit (x) qubit stabilizer algebra on desk-scale lattices
"""
from __future__ import annotations

import itertools
import logging
from functools import lru_cache

import numpy as np

from anyonsim.anyon_algebra import PARAFERMION_CONVENTION
from anyonsim.errors import InconsistentOutcomeError, LatticeError

from .operators import (IDENTITY, MAX_EDGES, OMEGA, K, LinearCombination, SmallState, apply, basis_state,
                        commutator, phase, product, random_state)
from .stabilizers import (KINDS, alpha_word, beta_word, build_stabilizer, get_lattice, plaquette_word,
                          normalize_kind, restrict_to_qubits, vertex_word)

logger = logging.getLogger(__name__)

TOL = 1e-10
DENSE_EDGES = 4


def _rng(rng):
    return rng if rng is not None else np.random.default_rng()


def eigenprojector(word, k=0):
    """Projector onto the ω^k eigenspace of an order-3 unitary word."""
    return LinearCombination(tuple((OMEGA ** (-j * k) / 3, word.power(j)) for j in range(3)))


def plus_projector(word):
    return LinearCombination(((0.5, IDENTITY), (0.5, word)))


def check_identity(lhs, rhs, trials=20, rng=None, edges=None):
    """Largest ‖(lhs - rhs)ψ‖ over `trials` Haar-random states on the joint support."""
    rng = _rng(rng)
    edges = tuple(sorted(lhs.support() | rhs.support())) if edges is None else tuple(edges)
    if len(edges) > MAX_EDGES:
        msg = f"identity support has {len(edges)} edges"
        raise LatticeError(msg)
    worst = 0.0
    for _ in range(trials):
        state = random_state(edges, rng)
        diff = apply(lhs, state).tensor - apply(rhs, state).tensor
        worst = max(worst, float(np.linalg.norm(diff)))
    return worst


# =============================================================================
# Spectra
# =============================================================================

def _dense_matrix(word, edges, qubit_dim=2):
    n = len(edges)
    dim = (3 * qubit_dim) ** n
    basis = np.eye(dim, dtype=complex).reshape((3, qubit_dim) * n + (dim,))
    return apply(word, SmallState(edges, basis)).tensor.reshape(dim, dim)


def _distinct(values):
    values = np.asarray(values)
    if np.all(np.abs(values.imag) < 1e-8):
        return sorted({round(float(v.real), 8) + 0.0 for v in values})
    return sorted({(round(float(v.real), 8) + 0.0, round(float(v.imag), 8) + 0.0) for v in values})


def _reading(kind, raw):
    if kind in ('alpha', 'beta'):
        return sorted({int(round(v)) for v in raw})
    if kind in ('S_v', 'S_p'):
        return sorted({1 if abs(v - 1) < 1e-6 else -1 for v in raw})
    if kind in ('F', 'G'):
        return sorted({int(round((2 * v + 1) / 3)) for v in raw})
    exponents = set()
    for re, im in raw:
        exponents.add(int(round(np.angle(re + 1j * im) / (2 * np.pi / 3))) % 3)
    return sorted(exponents)


EXPECTED_READINGS = {
    'alpha': [-1, 1], 'beta': [-1, 1], 'S_v': [-1, 1], 'S_p': [-1, 1],
    'F': [0, 1], 'G': [0, 1],
    'A': [0, 1, 2], 'B': [0, 1, 2], 'A_Z3': [0, 1, 2], 'B_Z3': [0, 1, 2],
}


def check_spectrum(kind, site=(0, 0), lattice='3x3-patch'):
    """
    Distinct eigenvalues of a stabilizer, raw and as a measurement reading

    Supports of up to four edges are diagonalized densely. F and G are diagonalized per
    fixed qubit configuration on the β_p = +1 sector, where A_v and B_p commute.

    Returns:
        dict: kind, site, raw, reading, expected, pass and discrepancy flag
    """
    word = build_stabilizer(kind, site, lattice)
    kind = normalize_kind(kind)
    edges = tuple(sorted(word.support()))
    hermitian = kind not in ('A', 'B', 'A_Z3', 'B_Z3')

    if len(edges) <= DENSE_EDGES:
        matrix = _dense_matrix(word, edges)
        values = np.linalg.eigvalsh(matrix) if hermitian else np.linalg.eigvals(matrix)
    else:
        torus = get_lattice(lattice).torus
        beta_edges = set(torus.plaquette_edges(*site).values())
        values = []
        for bits in itertools.product((0, 1), repeat=len(edges)):
            qubits = dict(zip(edges, bits))
            if sum(qubits[e] for e in beta_edges) % 2:
                continue
            matrix = _dense_matrix(restrict_to_qubits(word, qubits), edges, qubit_dim=1)
            values.extend(np.linalg.eigvalsh((matrix + matrix.conj().T) / 2))
    raw = _distinct(np.asarray(values, dtype=complex))
    reading = _reading(kind, raw)
    expected = EXPECTED_READINGS[kind]
    return {
        'kind': kind,
        'site': list(site),
        'raw': raw,
        'reading': reading,
        'expected': expected,
        'pass': reading == expected,
        'discrepancy': hermitian and raw != [float(v) for v in expected],
    }


# =============================================================================
# Global conjugation
# =============================================================================

def sigma_x_counts(torus, vertices):
    """How often σ^X hits each edge joining two of the given vertices in the product of their α."""
    vertices = {torus.wrap(*v) for v in vertices}
    counts = {}
    for v in vertices:
        for f in alpha_word(torus, *v).factors:
            if f.kind != 'sx':
                continue
            tail, head = torus.edge_endpoints(*f.edge)
            if tail in vertices and head in vertices:
                counts[f.edge] = counts.get(f.edge, 0) + 1
    return counts


def check_global_conjugation(lattice='2x2', trials=5, rng=None):
    """Product of every α_u against the product of K on every edge."""
    rng = _rng(rng)
    lattice = get_lattice(lattice)
    torus = lattice.torus
    everything = product(alpha_word(torus, *v) for v in lattice.sites)
    conjugation = product(K(e) for e in lattice.edges)
    residual = check_identity(everything, conjugation, trials, rng)
    beta_residual = max(check_identity(everything @ beta_word(torus, *p) @ everything.dagger(),
                                       beta_word(torus, *p), trials, rng)
                        for p in lattice.sites)

    patch_torus = get_lattice('3x3-patch').torus
    corners = [(1, 1), (2, 1), (1, 2), (2, 2)]
    counts = sigma_x_counts(patch_torus, corners)
    patch_even = len(counts) == 4 and all(c % 2 == 0 for c in counts.values())
    return {
        'lattice': lattice.name,
        'residual': residual,
        'beta_invariance': beta_residual,
        'patch_sigma_x_counts': {str(e): c for e, c in sorted(counts.items())},
        'patch_even': patch_even,
        'pass': residual < TOL and beta_residual < TOL and patch_even,
    }


# =============================================================================
# Ground state, ungauging and regauging
# =============================================================================

def _project(projector, state):
    image = apply(projector, state)
    norm = image.norm()
    if norm < 1e-12:
        msg = "projection annihilated the reference state"
        raise LatticeError(msg)
    return SmallState(image.edges, image.tensor / norm)


@lru_cache(maxsize=2)
def _ground_state(name):
    lattice = get_lattice(name)
    if len(lattice.edges) > MAX_EDGES:
        msg = f"{name} has {len(lattice.edges)} edges, too many for a dense ground state"
        raise LatticeError(msg)
    torus = lattice.torus
    state = basis_state(lattice.edges)
    for p in lattice.sites:
        state = _project(plus_projector(beta_word(torus, *p)), state)
    for v in lattice.sites:
        state = _project(eigenprojector(vertex_word(torus, *v)), state)
    for p in lattice.sites:
        state = _project(eigenprojector(plaquette_word(torus, *p)), state)
    for v in lattice.sites:
        state = _project(plus_projector(alpha_word(torus, *v)), state)
    logger.debug("prepared %s ground state over %d edges", name, len(lattice.edges))
    return state


def prepare_ground_state(lattice='2x2'):
    """Joint +1 state of every α, β, A and B, by sequential projection of |0...0>."""
    return _ground_state(get_lattice(lattice).name).copy()


def _outcome_edges(torus, outcomes):
    return {torus.edge(*e) for e in outcomes}


def odd_plaquettes(lattice, flipped):
    torus = lattice.torus
    return [p for p in lattice.sites
            if sum(e in flipped for e in torus.plaquette_edges(*p).values()) % 2]


def conjugation_set(lattice, flipped):
    """Vertex set S whose coboundary is the flipped edge set, or None for a winding pattern."""
    torus = lattice.torus
    for mask in range(2 ** len(lattice.sites)):
        chosen = {v for i, v in enumerate(lattice.sites) if mask >> i & 1}
        boundary = set()
        for e in lattice.edges:
            tail, head = torus.edge_endpoints(*e)
            if (tail in chosen) != (head in chosen):
                boundary.add(e)
        if boundary == flipped:
            return sorted(chosen)
    return None


def _qutrit_part(state, flipped):
    index = []
    for e in state.edges:
        index.extend((slice(None), 1 if e in flipped else 0))
    qutrits = state.tensor[tuple(index)]
    return SmallState(state.edges, qutrits.reshape((3, 1) * len(state.edges)))


def _residual(word, state):
    return float(np.linalg.norm(apply(word, state).tensor - state.tensor))


def _ungauge(lattice, outcomes):
    torus = lattice.torus
    flipped = _outcome_edges(torus, outcomes)
    odd = odd_plaquettes(lattice, flipped)
    if odd:
        msg = f"outcome pattern has an odd boundary at plaquettes {odd}"
        raise InconsistentOutcomeError(msg)

    qutrits = _qutrit_part(prepare_ground_state(lattice), flipped)
    weight = qutrits.norm()
    report = {
        'lattice': lattice.name,
        'outcomes': sorted(flipped),
        'closed_loops': True,
        'realised': weight > 1e-9,
    }
    if not report['realised']:
        report['pass'] = False
        return report, None

    qutrits = qutrits.normalized()
    qubits = {e: 1 for e in flipped}
    forms, worst = [], 0.0
    for builder, label in ((vertex_word, 'A'), (plaquette_word, 'B')):
        for site in lattice.sites:
            word = restrict_to_qubits(builder(lattice.torus, *site), qubits).simplified()
            residual = _residual(word, qutrits)
            worst = max(worst, residual)
            forms.append({'stabilizer': label, 'site': list(site), 'form': word.describe(), 'residual': residual})

    chosen = conjugation_set(lattice, flipped)
    corrected = qutrits
    if chosen:
        tails = [e for e in lattice.edges if torus.edge_endpoints(*e)[0] in chosen]
        corrected = apply(product(K(e) for e in tails), qutrits)
    clean = max(_residual(builder(torus, *site, gauged=False), corrected)
                for builder in (vertex_word, plaquette_word) for site in lattice.sites)

    report.update({
        'modified_stabilizers': forms,
        'modified_residual': worst,
        'conjugation_set': chosen,
        'clean_residual': clean,
        'pass': worst < TOL and clean < TOL,
    })
    return report, corrected


def check_ungauge_projection(outcomes=(), lattice='2x2'):
    """
    Measure every qubit of the ground state in σ^Z and inspect the qutrit state left behind

    Args:
        outcomes (iterable): edges (d, x, y) whose σ^Z outcome is -1
        lattice (str): small torus carrying the ground state

    Returns:
        dict: modified stabilizer forms with residuals, the conjugation set that cleans them, pass flag
    """
    report, _ = _ungauge(get_lattice(lattice), outcomes)
    return report


def check_gauging_round_trip(outcomes=(), lattice='2x2'):
    """Ungauge, clean the qutrits, reset the qubits to |0> and project back onto every α_v."""
    lattice = get_lattice(lattice)
    torus = lattice.torus
    report, corrected = _ungauge(lattice, outcomes)
    if corrected is None:
        return {'ungauge': report, 'pass': False}

    n = len(lattice.edges)
    tensor = np.zeros((3, 2) * n, dtype=complex)
    tensor[tuple(slice(None) if axis % 2 == 0 else 0 for axis in range(2 * n))] = corrected.tensor.reshape((3,) * n)
    state = SmallState(lattice.edges, tensor)
    for v in lattice.sites:
        state = _project(plus_projector(alpha_word(torus, *v)), state)

    residuals = {}
    for kind, builder in (('alpha', alpha_word), ('beta', beta_word), ('A', vertex_word), ('B', plaquette_word)):
        residuals[kind] = max(_residual(builder(torus, *s), state) for s in lattice.sites)
    worst = max(residuals.values())
    return {'ungauge': report, 'regauge_residuals': residuals, 'pass': report['pass'] and worst < TOL}


# =============================================================================
# Further consistency checks
# =============================================================================

def check_kappa_forms(lattice='3x3-patch', trials=5, rng=None):
    """Both ways of writing κ(p) give the same plaquette operator at every placement."""
    rng = _rng(rng)
    lattice = get_lattice(lattice)
    records = []
    for p in lattice.sites:
        residual = check_identity(plaquette_word(lattice.torus, *p, kappa='beta'),
                                  plaquette_word(lattice.torus, *p, kappa='product'), trials, rng)
        records.append({'placement': f'p={p}', 'residual': residual, 'pass': residual < TOL})
    return records


def check_mutual_commutation(lattice='2x2', kinds=('alpha', 'beta', 'S_v', 'S_p')):
    """Eigenvalue and pairwise-commutation residuals of the stabilizers on the projected ground state."""
    lattice = get_lattice(lattice)
    state = prepare_ground_state(lattice)
    operators = [(kind, site, build_stabilizer(kind, site, lattice)) for kind in kinds for site in lattice.sites]
    images = [apply(op, state) for _, _, op in operators]
    eigen = max(float(np.linalg.norm(image.tensor - state.tensor)) for image in images)
    pairwise = 0.0
    for (i, (_, _, a)), (j, (_, _, b)) in itertools.combinations(enumerate(operators), 2):
        ab = apply(a, images[j]).tensor
        ba = apply(b, images[i]).tensor
        pairwise = max(pairwise, float(np.linalg.norm(ab - ba)))
    return {'lattice': lattice.name, 'operators': len(operators), 'eigen_residual': eigen,
            'pairwise_residual': pairwise, 'pass': eigen < TOL and pairwise < TOL}


def _normalized_projector(state, word):
    return (2 * apply(word, state).tensor + state.tensor) / 3


def check_projector_completeness(site=(1, 1), lattice='3x3-patch', trials=5, rng=None):
    """
    Completeness of the F/G distinction and the micro-charge labels it fixes

    On β_p = +1 states with nonzero A_v and B_p charge, the normalized F and G projectors add to
    one. On every β_p = +1 state the F projector and the A_v B_p† = 1 projector add to one.
    """
    rng = _rng(rng)
    lattice = get_lattice(lattice)
    torus = lattice.torus
    a, b = vertex_word(torus, *site), plaquette_word(torus, *site)
    f_word, g_word = build_stabilizer('F', site, lattice), build_stabilizer('G', site, lattice)
    beta = plus_projector(beta_word(torus, *site))
    edges = tuple(sorted(f_word.support()))

    both_charged, with_diagonal = 0.0, 0.0
    for _ in range(trials):
        state = apply(beta, random_state(edges, rng))
        diagonal = apply(eigenprojector(a @ b.dagger()), state).tensor
        with_diagonal = max(with_diagonal, float(np.linalg.norm(
            _normalized_projector(state, f_word) + diagonal - state.tensor)))

        for word in (a, b):
            state = SmallState(edges, state.tensor - apply(eigenprojector(word), state).tensor)
        state = state.normalized()
        both_charged = max(both_charged, float(np.linalg.norm(
            _normalized_projector(state, f_word) + _normalized_projector(state, g_word) - state.tensor)))

    labels, label_ok = {}, True
    for ea, eb in itertools.product((1, 2), repeat=2):
        state = random_state(edges, rng)
        for projector in (beta, eigenprojector(a, ea), eigenprojector(b, eb)):
            state = _project(projector, state)
        f_weight = float(np.vdot(state.vector(), _normalized_projector(state, f_word).reshape(-1)).real)
        label = 'f' if f_weight > 0.5 else 'g'
        labels[f'{ea},{eb}'] = label
        label_ok &= label == PARAFERMION_CONVENTION[(ea, eb)].value and abs(f_weight - round(f_weight)) < 1e-8

    return {
        'site': list(site),
        'f_plus_g_residual': both_charged,
        'f_plus_diagonal_residual': with_diagonal,
        'micro_charge_labels': labels,
        'pass': both_charged < TOL and with_diagonal < TOL and label_ok,
    }


# =============================================================================
# Suite
# =============================================================================

def identity_cases(lattice):
    """(identity, placement, V, W, expected) for every relative placement around one anchor site."""
    lattice = get_lattice(lattice)
    torus = lattice.torus
    anchor = (1 % lattice.L, 1 % lattice.L)

    def beta_edges(p):
        return tuple(torus.plaquette_edges(*p).values())

    a0, b0 = vertex_word(torus, *anchor), plaquette_word(torus, *anchor)
    for s in lattice.sites:
        a, b = vertex_word(torus, *s), plaquette_word(torus, *s)
        alpha, beta = alpha_word(torus, *s), beta_word(torus, *s)
        yield 'A-B', f'v={anchor} p={s}', a0, b, phase(1, beta_edges(s)) if s == anchor else IDENTITY
        yield 'alpha-B', f'v={anchor} p={s}', alpha_word(torus, *anchor), b, b if s == anchor else IDENTITY
        yield 'alpha-A', f'u={s} v={anchor}', alpha, a0, a0 if s == anchor else IDENTITY
        if s != anchor:
            yield 'A-A', f'u={s} v={anchor}', a, a0, IDENTITY
            yield 'B-B', f'p={s} q={anchor}', b, b0, IDENTITY
        yield 'beta-beta', f'p={s} q={anchor}', beta, beta_word(torus, *anchor), IDENTITY
        yield 'beta-A', f'p={s} v={anchor}', beta, a0, IDENTITY
        yield 'beta-B', f'p={s} q={anchor}', beta, b0, IDENTITY
        yield 'beta-alpha', f'p={s} v={anchor}', beta, alpha_word(torus, *anchor), IDENTITY


def run_stabilizer_suite(lattice='3x3-patch', trials=20, seed=0, extras=True):
    """
    Every commutator identity at every placement, plus spectra and the gauging checks

    Placements whose two operators act on disjoint edges commute exactly and are recorded
    without sampling.
    """
    rng = np.random.default_rng(seed)
    lattice = get_lattice(lattice)
    records = []
    for name, placement, v, w, expected in identity_cases(lattice):
        if v.support().isdisjoint(w.support()):
            residual, method = 0.0, 'disjoint-support'
        else:
            residual, method = check_identity(commutator(v, w), expected, trials, rng), 'random-states'
        records.append({'identity': name, 'placement': placement, 'residual': residual,
                        'method': method, 'pass': residual < TOL})
    logger.info("checked %d commutator placements on %s", len(records), lattice.name)

    report = {'suite': 'stabilizers', 'lattice': lattice.name, 'trials': trials, 'seed': seed,
              'identities': records}
    report['spectra'] = [check_spectrum(kind, (0, 0), '3x3-patch') for kind in KINDS]
    if extras:
        torus = get_lattice('2x2').torus
        star = list(torus.vertex_edges(0, 0).values())
        report['kappa_forms'] = check_kappa_forms('3x3-patch', min(trials, 5), rng)
        report['global_conjugation'] = check_global_conjugation('2x2', min(trials, 3), rng)
        report['ungauge'] = [check_ungauge_projection((), '2x2'), check_ungauge_projection(star, '2x2')]
        try:
            check_ungauge_projection(star[:1], '2x2')
            open_string = {'outcomes': star[:1], 'rejected': False, 'pass': False}
        except InconsistentOutcomeError:
            open_string = {'outcomes': star[:1], 'rejected': True, 'pass': True}
        report['ungauge'].append(open_string)
        report['round_trip'] = [check_gauging_round_trip((), '2x2'), check_gauging_round_trip(star, '2x2')]
        report['mutual_commutation'] = check_mutual_commutation('2x2')
        report['projector_completeness'] = check_projector_completeness((1, 1), '3x3-patch', min(trials, 5), rng)

    passed = all(r['pass'] for r in records) and all(s['pass'] for s in report['spectra'])
    if extras:
        passed = passed and all(r['pass'] for r in report['kappa_forms'])
        passed = passed and all(r['pass'] for r in report['ungauge'] + report['round_trip'])
        for key in ('global_conjugation', 'mutual_commutation', 'projector_completeness'):
            passed = passed and report[key]['pass']
    report['passed'] = passed
    return report
