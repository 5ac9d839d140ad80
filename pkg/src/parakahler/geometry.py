"""Symplectic forms, almost para-complex structures, and their interplay:
compatibility, integrability, the induced metric, nilpotency of J, and the
structural orthogonality checks on distinguished subspaces."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DimensionMismatchError,
    InternalConsistencyError,
    UndecidablePivotError,
)
from .liealg import IdealChain, LieAlgebra
from .linalg import Matrix, Subspace, determinant, kernel, rref
from .scalars import EMPTY_FACTS, Scalar, as_scalar


class TwoForm:
    """Antisymmetric bilinear form given by its n x n coefficient matrix."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        if not matrix.is_antisymmetric():
            raise DimensionMismatchError("two-form matrix must be antisymmetric")
        self.matrix = matrix

    @staticmethod
    def from_wedges(dim, wedges):
        """Build sum of c * e^i ^ e^j from 1-based (i, j, c) triples."""
        entries = [[Scalar.zero() for _ in range(dim)] for _ in range(dim)]
        for i, j, c in wedges:
            c = as_scalar(c)
            entries[i - 1][j - 1] = entries[i - 1][j - 1].add(c)
            entries[j - 1][i - 1] = entries[j - 1][i - 1].sub(c)
        return TwoForm(Matrix.from_rows(entries))

    @property
    def dim(self):
        return self.matrix.rows

    def value(self, x, y):
        """omega(x, y) on coordinate vectors."""
        row = self.matrix.apply(tuple(as_scalar(v) for v in y))
        acc = Scalar.zero()
        for xi, wy in zip(x, row):
            acc = acc.add(as_scalar(xi).mul(wy))
        return acc

    def __eq__(self, other):
        return isinstance(other, TwoForm) and self.matrix == other.matrix

    def __repr__(self):
        return f"TwoForm({self.matrix})"


class Endomorphism:
    """Linear operator J with matrix J^i_j (row = upper index)."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        if matrix.rows != matrix.cols:
            raise DimensionMismatchError("endomorphism matrix must be square")
        self.matrix = matrix

    @staticmethod
    def diagonal(values):
        return Endomorphism(Matrix.diagonal(values))

    @property
    def dim(self):
        return self.matrix.rows

    def apply(self, x):
        return self.matrix.apply(tuple(as_scalar(v) for v in x))

    def substitute(self, bindings, facts=EMPTY_FACTS):
        return Endomorphism(self.matrix.substitute(bindings, facts))

    def __eq__(self, other):
        return isinstance(other, Endomorphism) and self.matrix == other.matrix

    def __repr__(self):
        return f"Endomorphism({self.matrix})"


class SymBilinear:
    """Symmetric bilinear form (a metric candidate)."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        if not matrix.is_symmetric():
            raise DimensionMismatchError("metric matrix must be symmetric")
        self.matrix = matrix

    @property
    def dim(self):
        return self.matrix.rows

    def value(self, x, y):
        row = self.matrix.apply(tuple(as_scalar(v) for v in y))
        acc = Scalar.zero()
        for xi, gy in zip(x, row):
            acc = acc.add(as_scalar(xi).mul(gy))
        return acc

    def __eq__(self, other):
        return isinstance(other, SymBilinear) and self.matrix == other.matrix

    def __repr__(self):
        return f"SymBilinear({self.matrix})"


# ---------------------------------------------------------------------------
# Symplectic checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymplecticReport:
    closed: bool
    nondegenerate: bool
    failing_triples: tuple = ()  # 1-based (i, j, k) where the cocycle fails


def cocycle_value(L, omega, i, j, k):
    """omega([e_i,e_j],e_k) - omega([e_i,e_k],e_j) + omega([e_j,e_k],e_i),
    0-based indices."""
    e = [_basis_vector(L.dim, t) for t in range(L.dim)]
    total = omega.value(L.basis_bracket(i, j), e[k])
    total = total.sub(omega.value(L.basis_bracket(i, k), e[j]))
    total = total.add(omega.value(L.basis_bracket(j, k), e[i]))
    return total


def check_symplectic(L, omega):
    """Closedness via the cocycle identity on basis triples; nondegeneracy via
    a certified-nonzero determinant."""
    if omega.dim != L.dim:
        raise DimensionMismatchError("form dimension mismatch")
    failing = []
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            for k in range(j + 1, L.dim):
                if not cocycle_value(L, omega, i, j, k).is_zero():
                    failing.append((i + 1, j + 1, k + 1))
    det = determinant(omega.matrix)
    if det.is_zero():
        nondeg = False
    elif L.nonzero_facts.certifies_scalar(det):
        nondeg = True
    else:
        raise UndecidablePivotError(det, "(determinant of the two-form)")
    return SymplecticReport(closed=not failing, nondegenerate=nondeg,
                            failing_triples=tuple(failing))


# ---------------------------------------------------------------------------
# Almost para-complex structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParacomplexReport:
    involutive: bool
    rank_plus: int | None
    rank_minus: int | None
    ranks_decidable: bool = True

    @property
    def almost_paracomplex(self):
        n_half = None
        if self.rank_plus is not None and self.rank_minus is not None:
            n_half = self.rank_plus == self.rank_minus
        return bool(self.involutive and n_half)


def check_almost_paracomplex(J, facts=EMPTY_FACTS):
    """Involutivity is an exact matrix identity.  Eigen-distribution ranks are
    computed from kernels when pivots are decidable; for a certified involution
    with rational trace they follow from the trace instead (J is then
    diagonalizable with eigenvalues +-1)."""
    n = J.dim
    involutive = (J.matrix * J.matrix) == Matrix.identity(n)
    rank_plus = rank_minus = None
    decidable = True
    try:
        rank_plus = kernel(Matrix.identity(n) - J.matrix, facts).dim
        rank_minus = kernel(Matrix.identity(n) + J.matrix, facts).dim
    except UndecidablePivotError:
        if involutive:
            tr = J.matrix.trace()
            if tr.is_rational():
                t = tr.as_rational()
                if (n + t) % 2 == 0:
                    rank_plus = int((n + t) / 2)
                    rank_minus = int((n - t) / 2)
        decidable = rank_plus is not None
    return ParacomplexReport(involutive, rank_plus, rank_minus, decidable)


def eigenspace(J, sign, facts=EMPTY_FACTS):
    """ker(J - sign * Id)."""
    n = J.dim
    m = J.matrix - Matrix.identity(n) if sign > 0 else J.matrix + Matrix.identity(n)
    return kernel(m, facts)


# ---------------------------------------------------------------------------
# Nijenhuis tensor and integrability
# ---------------------------------------------------------------------------

class NijenhuisTensor:
    """Components N^k_ij of the torsion of J, antisymmetric in (i, j)."""

    __slots__ = ("dim", "_data")

    def __init__(self, dim, data):
        self.dim = dim
        self._data = data  # dict (i, j, k) 0-based with i < j -> Scalar

    def component(self, i, j, k):
        """N^k_ij with 1-based indices, honoring antisymmetry."""
        i, j, k = i - 1, j - 1, k - 1
        if i == j:
            return Scalar.zero()
        if i < j:
            return self._data.get((i, j, k), Scalar.zero())
        return self._data.get((j, i, k), Scalar.zero()).neg()

    def is_zero(self):
        return all(v.is_zero() for v in self._data.values())

    def nonzero_components(self):
        """Sorted 1-based ((i, j, k), value) with i < j."""
        out = []
        for (i, j, k), v in sorted(self._data.items()):
            if not v.is_zero():
                out.append(((i + 1, j + 1, k + 1), v))
        return out


def nijenhuis(L, J):
    """Coordinate Nijenhuis tensor
    N^k_ij = J^l_i J^m_j C^k_lm - J^l_i J^k_m C^m_lj - J^l_j J^k_m C^m_il + C^k_ij."""
    n = L.dim
    if J.dim != n:
        raise DimensionMismatchError("operator dimension mismatch")
    jm = J.matrix
    data = {}
    for i in range(n):
        for j in range(i + 1, n):
            # [Je_i, Je_j] + [e_i, e_j] - J[Je_i, e_j] - J[e_i, Je_j]
            ji = jm.col(i)
            jj = jm.col(j)
            term1 = L.bracket(ji, jj)
            term2 = L.basis_bracket(i, j)
            inner1 = L.bracket(ji, _basis_vector(n, j))
            inner2 = L.bracket(_basis_vector(n, i), jj)
            term3 = jm.apply(inner1)
            term4 = jm.apply(inner2)
            for k in range(n):
                val = term1[k].add(term2[k]).sub(term3[k]).sub(term4[k])
                if not val.is_zero():
                    data[(i, j, k)] = val
    return NijenhuisTensor(n, data)


@dataclass(frozen=True)
class IntegrabilityReport:
    nijenhuis_zero: bool
    plus_subalgebra: bool
    minus_subalgebra: bool

    @property
    def integrable(self):
        return self.nijenhuis_zero


def is_integrable(L, J, facts=None):
    """Both integrability criteria, computed independently; they must agree."""
    facts = L.nonzero_facts if facts is None else facts
    nz = nijenhuis(L, J).is_zero()
    plus = eigenspace(J, +1, facts)
    minus = eigenspace(J, -1, facts)
    plus_closed = plus.contains(L.subspace_bracket(plus, plus), facts)
    minus_closed = minus.contains(L.subspace_bracket(minus, minus), facts)
    if nz != (plus_closed and minus_closed):
        raise InternalConsistencyError(
            "Nijenhuis-zero and eigen-subalgebra criteria disagree: "
            f"N=0 is {nz}, closures are ({plus_closed}, {minus_closed})")
    return IntegrabilityReport(nz, plus_closed, minus_closed)


# ---------------------------------------------------------------------------
# Compatibility and metric
# ---------------------------------------------------------------------------

def check_compatible(omega, J):
    """The bilinear identity omega_kj J^k_i + omega_ik J^k_j = 0 for all i, j
    (equivalent to omega(JX, JY) = -omega(X, Y) for involutive J)."""
    if omega.dim != J.dim:
        raise DimensionMismatchError("dimension mismatch")
    m = J.matrix.transpose() * omega.matrix + omega.matrix * J.matrix
    return m.is_zero()


def metric_from(omega, J):
    """g(X, Y) = omega(X, JY); result must come out symmetric, which certifies
    the inputs were a compatible involutive pair."""
    g = omega.matrix * J.matrix
    if not g.is_symmetric():
        raise InternalConsistencyError(
            "omega(X, JY) is not symmetric; (omega, J) are not compatible-involutive")
    return SymBilinear(g)


# ---------------------------------------------------------------------------
# J-invariant ideal chain
# ---------------------------------------------------------------------------

def j_invariant_chain(L, J, facts=None):
    """Chain a_k: a_0 = 0, a_k = {X : [X, g] and [JX, g] lie in a_{k-1}}.
    Each link is checked to be J-invariant."""
    facts = L.nonzero_facts if facts is None else facts
    n = L.dim
    links = [Subspace.zero(n)]
    ads = [L.ad_right_matrix(j) for j in range(n)]
    while True:
        prev = links[-1]
        q = prev.constraints(facts)
        rows = []
        if q.rows:
            for B in ads:
                rows.extend((q * B).row_list())
                rows.extend((q * B * J.matrix).row_list())
        nxt = Subspace.full(n) if not rows else kernel(Matrix.from_rows(rows), facts)
        _assert_j_invariant(nxt, J, facts)
        links.append(nxt)
        if nxt == prev:
            break
    return IdealChain("j_invariant", tuple(links))


def _assert_j_invariant(space, J, facts):
    for row in space.basis_rows():
        if not space.contains_vector(J.apply(row), facts):
            raise InternalConsistencyError(
                "chain link is not J-invariant; inputs are inconsistent")


@dataclass(frozen=True)
class JNilpotencyReport:
    nilpotent: bool
    steps: int | None
    chain: IdealChain


def is_nilpotent_j(L, J, facts=None):
    chain = j_invariant_chain(L, J, facts)
    reaches = chain.stabilized().dim == L.dim
    steps = len(chain.links_stabilized()) - 1 if reaches else None
    return JNilpotencyReport(reaches, steps, chain)


# ---------------------------------------------------------------------------
# Subspace relations (isotropy, duality, structural orthogonality)
# ---------------------------------------------------------------------------

def is_isotropic(omega, W):
    return all(
        omega.value(u, v).is_zero()
        for a, u in enumerate(W.basis_rows())
        for v in W.basis_rows()[a:])


def omega_orthogonal(omega, U, V):
    """True when omega(U, V) = 0."""
    return all(omega.value(u, v).is_zero()
               for u in U.basis_rows() for v in V.basis_rows())


def is_lagrangian(omega, W, facts=EMPTY_FACTS):
    """Isotropic and maximal: omega(W, u) = 0 forces u into W."""
    if not is_isotropic(omega, W):
        return False
    if W.dim == 0:
        return omega.dim == 0
    pairing = Matrix.from_rows(
        [list(omega.matrix.apply(row)) for row in W.basis_rows()])
    return kernel(pairing, facts) == W


def omega_dual(omega, U, V, facts=EMPTY_FACTS):
    """Every nonzero vector of U pairs nontrivially with V and vice versa."""
    if U.dim == 0 or V.dim == 0:
        return U.dim == 0 and V.dim == 0
    pairing = Matrix.from_rows([
        [omega.value(u, v) for v in V.basis_rows()] for u in U.basis_rows()])
    _, rank, _ = rref(pairing, facts)
    return rank == U.dim and rank == V.dim


def restricted_nondegenerate(omega, W, facts=EMPTY_FACTS):
    if W.dim == 0:
        return True
    pairing = Matrix.from_rows([
        [omega.value(u, v) for v in W.basis_rows()] for u in W.basis_rows()])
    det = determinant(pairing)
    if det.is_zero():
        return False
    if facts.certifies_scalar(det):
        return True
    raise UndecidablePivotError(det, "(restricted two-form determinant)")


@dataclass(frozen=True)
class SubspaceRelationsReport:
    checks: tuple  # of (name, bool)

    def passed(self):
        return all(ok for _, ok in self.checks)

    def get(self, name):
        for n, ok in self.checks:
            if n == name:
                return ok
        raise KeyError(name)


def check_subspace_relations(L, omega, J=None, facts=None):
    """Structural orthogonality identities on the canonical subspaces.

    For closed omega, omega(C1 g, Z(g)) = 0 is a theorem; a violation with a
    closed form signals an internal bug and raises.  With J supplied, also
    checks omega(C1 g + J(C1 g), a_1(J)) = 0 and isotropy facts about the
    eigenspaces.
    """
    facts = L.nonzero_facts if facts is None else facts
    sym = check_symplectic(L, omega)
    derived = L.derived_ideal()
    center = L.center()
    checks = []
    d_vs_z = omega_orthogonal(omega, derived, center)
    if sym.closed and not d_vs_z:
        raise InternalConsistencyError(
            "omega(C1 g, Z(g)) != 0 for a closed form; this cannot happen")
    checks.append(("omega(derived, center) = 0", d_vs_z))
    if J is not None:
        chain = j_invariant_chain(L, J, facts)
        a1 = chain.links[1]
        j_derived = Subspace.from_spanning_rows(
            L.dim, [list(J.apply(r)) for r in derived.basis_rows()], facts)
        span = derived.sum_with(j_derived, facts)
        checks.append(("omega(derived + J derived, a1) = 0",
                       omega_orthogonal(omega, span, a1)))
        if check_compatible(omega, J):
            plus = eigenspace(J, +1, facts)
            minus = eigenspace(J, -1, facts)
            checks.append(("eigenspace(+1) isotropic", is_isotropic(omega, plus)))
            checks.append(("eigenspace(-1) isotropic", is_isotropic(omega, minus)))
    return SubspaceRelationsReport(tuple(checks))


def _basis_vector(n, i):
    return tuple(Scalar.one() if t == i else Scalar.zero() for t in range(n))
