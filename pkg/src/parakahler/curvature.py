"""Levi-Civita connection, curvature, Ricci tensor, and the structural
checkers for adapted three-block decompositions of six-dimensional symplectic
nilpotent algebras.

Index conventions: Gamma^k_ij is the e_k-component of nabla_{e_i} e_j, and
R^l_ijk is the e_l-component of R(e_i, e_j) e_k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatchError, InternalConsistencyError
from .geometry import (
    Endomorphism,
    SymBilinear,
    check_compatible,
    is_nilpotent_j,
    is_isotropic,
    metric_from,
    omega_dual,
    omega_orthogonal,
    restricted_nondegenerate,
)
from .linalg import Matrix, Subspace, invert
from .scalars import EMPTY_FACTS, Scalar, as_scalar


class Connection:
    """Christoffel symbols Gamma^k_ij of a left-invariant connection."""

    __slots__ = ("dim", "gamma")

    def __init__(self, dim, gamma):
        self.dim = dim
        self.gamma = gamma  # dict (i, j, k) 0-based -> Scalar, sparse

    def component(self, i, j, k):
        """Gamma^k_ij, 0-based."""
        return self.gamma.get((i, j, k), Scalar.zero())

    def derivative_basis(self, i, j):
        """nabla_{e_i} e_j as a coordinate vector, 0-based."""
        return tuple(self.component(i, j, k) for k in range(self.dim))

    def derivative(self, x, y):
        """Bilinear extension to coordinate vectors."""
        out = [Scalar.zero()] * self.dim
        for i in range(self.dim):
            xi = as_scalar(x[i])
            if xi.is_zero():
                continue
            for j in range(self.dim):
                yj = as_scalar(y[j])
                if yj.is_zero():
                    continue
                w = xi.mul(yj)
                for k in range(self.dim):
                    c = self.component(i, j, k)
                    if not c.is_zero():
                        out[k] = out[k].add(w.mul(c))
        return tuple(out)

    def nonzero_components(self):
        out = []
        for (i, j, k), v in sorted(self.gamma.items()):
            if not v.is_zero():
                out.append(((i + 1, j + 1, k + 1), v))
        return out


def levi_civita(L, g, facts=None):
    """Solve 2 g(nabla_{e_i} e_j, e_k) = g([e_i,e_j],e_k) + g([e_k,e_i],e_j)
    + g([e_k,e_j],e_i) for the Christoffel symbols; the result is checked to
    be torsion-free and metric."""
    facts = L.nonzero_facts if facts is None else facts
    n = L.dim
    if g.dim != n:
        raise DimensionMismatchError("metric dimension mismatch")
    ginv = invert(g.matrix, facts)
    half = Scalar.rational(Fraction(1, 2))
    basis = [_basis_vector(n, t) for t in range(n)]
    gamma = {}
    for i in range(n):
        for j in range(n):
            rhs = []
            for k in range(n):
                val = g.value(L.basis_bracket(i, j), basis[k])
                val = val.add(g.value(L.basis_bracket(k, i), basis[j]))
                val = val.add(g.value(L.basis_bracket(k, j), basis[i]))
                rhs.append(val.mul(half))
            coords = ginv.apply(rhs)
            for k in range(n):
                if not coords[k].is_zero():
                    gamma[(i, j, k)] = coords[k]
    conn = Connection(n, gamma)
    _assert_torsion_free(L, conn)
    _assert_metric(L, g, conn)
    return conn


def _assert_torsion_free(L, conn):
    for i in range(L.dim):
        for j in range(L.dim):
            bracket = L.basis_bracket(i, j)
            for k in range(L.dim):
                lhs = conn.component(i, j, k).sub(conn.component(j, i, k))
                if lhs != bracket[k]:
                    raise InternalConsistencyError(
                        f"connection has torsion at ({i + 1},{j + 1},{k + 1})")


def _assert_metric(L, g, conn):
    basis = [_basis_vector(L.dim, t) for t in range(L.dim)]
    for i in range(L.dim):
        for j in range(L.dim):
            for k in range(j, L.dim):
                v = g.value(conn.derivative_basis(i, j), basis[k])
                v = v.add(g.value(basis[j], conn.derivative_basis(i, k)))
                if not v.is_zero():
                    raise InternalConsistencyError(
                        f"connection is not metric at ({i + 1},{j + 1},{k + 1})")


class CurvatureTensor:
    """Components R^l_ijk of R(e_i, e_j) e_k."""

    __slots__ = ("dim", "_data")

    def __init__(self, dim, data):
        self.dim = dim
        self._data = data  # dict (i, j, k, l) 0-based, i < j -> Scalar

    def component(self, i, j, k, l):
        """R^l_ijk with 1-based indices, honoring antisymmetry in (i, j)."""
        i, j, k, l = i - 1, j - 1, k - 1, l - 1
        if i == j:
            return Scalar.zero()
        if i < j:
            return self._data.get((i, j, k, l), Scalar.zero())
        return self._data.get((j, i, k, l), Scalar.zero()).neg()

    def apply(self, x, y, z):
        """R(x, y) z on coordinate vectors (multilinear extension)."""
        out = [Scalar.zero()] * self.dim
        for (i, j, k, l), v in self._data.items():
            w = as_scalar(x[i]).mul(as_scalar(y[j])).sub(
                as_scalar(x[j]).mul(as_scalar(y[i])))
            w = w.mul(as_scalar(z[k]))
            if not w.is_zero():
                out[l] = out[l].add(w.mul(v))
        return tuple(out)

    def is_zero(self):
        return all(v.is_zero() for v in self._data.values())

    def nonzero_components(self):
        """Sorted 1-based ((i, j, k, l), value) with i < j."""
        out = []
        for (i, j, k, l), v in sorted(self._data.items()):
            if not v.is_zero():
                out.append(((i + 1, j + 1, k + 1, l + 1), v))
        return out


def curvature_tensor(L, conn):
    """R(X, Y) = [nabla_X, nabla_Y] - nabla_{[X,Y]} on basis vectors; the
    first Bianchi identity is asserted before returning."""
    n = L.dim
    data = {}
    basis = [_basis_vector(n, t) for t in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                first = conn.derivative(basis[i], conn.derivative_basis(j, k))
                second = conn.derivative(basis[j], conn.derivative_basis(i, k))
                third = conn.derivative(L.basis_bracket(i, j), basis[k])
                for l in range(n):
                    val = first[l].sub(second[l]).sub(third[l])
                    if not val.is_zero():
                        data[(i, j, k, l)] = val
    R = CurvatureTensor(n, data)
    _assert_first_bianchi(R, basis)
    return R


def _assert_first_bianchi(R, basis):
    n = R.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                total = [Scalar.zero()] * n
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    term = R.apply(basis[a], basis[b], basis[c])
                    total = [p.add(q) for p, q in zip(total, term)]
                if any(not t.is_zero() for t in total):
                    raise InternalConsistencyError(
                        f"first Bianchi identity fails at ({i + 1},{j + 1},{k + 1})")


def ricci(R):
    """Ric_jk = R^i_ijk (trace on the first lower and the upper index);
    symmetry is asserted."""
    n = R.dim
    entries = []
    for j in range(n):
        for k in range(n):
            acc = Scalar.zero()
            for i in range(n):
                acc = acc.add(R.component(i + 1, j + 1, k + 1, i + 1))
            entries.append(acc)
    m = Matrix(n, n, entries)
    if not m.is_symmetric():
        raise InternalConsistencyError("Ricci tensor came out non-symmetric")
    return SymBilinear(m)


def check_parakahler_identity(g, J, R):
    """g(R(X,Y)Z, W) = -g(R(X,Y)JZ, JW) as an exact component check."""
    n = R.dim
    basis = [_basis_vector(n, t) for t in range(n)]
    jcols = [J.matrix.col(t) for t in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rz = [R.apply(basis[i], basis[j], basis[k]) for k in range(n)]
            for k in range(n):
                rjz = R.apply(basis[i], basis[j], jcols[k])
                for w in range(n):
                    lhs = g.value(rz[k], basis[w])
                    rhs = g.value(rjz, jcols[w])
                    if not lhs.add(rhs).is_zero():
                        return False
    return True


# ---------------------------------------------------------------------------
# Adapted three-block decomposition checker
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartitionReport:
    """Hypotheses and conclusions for an adapted decomposition g = A + B + C
    (all three 2-dimensional, C central), with a compatible nilpotent J that
    leaves B and C invariant."""

    hypotheses: tuple            # ordered (name, bool)
    conclusions: tuple           # ordered (name, bool)
    ricci_flat: bool | None
    curvature_pattern_ok: bool | None

    def first_failing_hypothesis(self):
        for name, ok in self.hypotheses:
            if not ok:
                return name
        return None

    def hypotheses_pass(self):
        return all(ok for _, ok in self.hypotheses)

    def all_pass(self):
        return (self.hypotheses_pass()
                and all(ok for _, ok in self.conclusions)
                and bool(self.ricci_flat) and bool(self.curvature_pattern_ok))


def check_adapted_partition(L, omega, J, partition, facts=None):
    """Verify the decomposition hypotheses, then the connection-location
    conclusions, the curvature vanishing for arguments in B + C, the central
    curvature component pattern, and Ricci flatness.

    partition: (A, B, C) as index triples (1-based) or Subspaces.
    """
    facts = L.nonzero_facts if facts is None else facts
    n = L.dim
    A, B, C = (_as_subspace(n, p) for p in partition)
    if A.sum_with(B, facts).sum_with(C, facts).dim != A.dim + B.dim + C.dim \
            or A.dim + B.dim + C.dim != n:
        raise DimensionMismatchError("partition is not a direct-sum decomposition")
    BC = B.sum_with(C, facts)
    center = L.center()

    hypotheses = []
    hypotheses.append(("C central", center.contains(C, facts)))
    hypotheses.append(("[A,A] in B+C", BC.contains(L.subspace_bracket(A, A), facts)))
    hypotheses.append(("[A,B] in C", C.contains(L.subspace_bracket(A, B), facts)))
    hypotheses.append(("B+C abelian", L.subspace_bracket(BC, BC).dim == 0))
    hypotheses.append(("A isotropic", is_isotropic(omega, A)))
    hypotheses.append(("C isotropic", is_isotropic(omega, C)))
    hypotheses.append(("A, C omega-dual", omega_dual(omega, A, C, facts)))
    hypotheses.append(("omega nondegenerate on B",
                       restricted_nondegenerate(omega, B, facts)))
    hypotheses.append(("omega(B+C, C) = 0", omega_orthogonal(omega, BC, C)))
    hypotheses.append(("J compatible with omega", check_compatible(omega, J)))
    hypotheses.append(("J involutive",
                       (J.matrix * J.matrix) == Matrix.identity(n)))
    hypotheses.append(("B J-invariant", _invariant(B, J, facts)))
    hypotheses.append(("C J-invariant", _invariant(C, J, facts)))
    jn = is_nilpotent_j(L, J, facts)
    hypotheses.append(("J nilpotent", jn.nilpotent))
    if not all(ok for _, ok in hypotheses):
        return PartitionReport(tuple(hypotheses), (), None, None)

    # C is automatically inside a_1(J); anything else is an internal bug
    if not jn.chain.links[1].contains(C, facts):
        raise InternalConsistencyError("C not inside a_1(J) despite hypotheses")

    g = metric_from(omega, J)
    conn = levi_civita(L, g, facts)
    basis = [_basis_vector(n, t) for t in range(n)]

    conclusions = []
    conclusions.append((
        "nabla(g, g) in B+C",
        all(BC.contains_vector(conn.derivative(x, y), facts)
            for x in basis for y in basis)))
    conclusions.append((
        "nabla(g, B+C) and nabla(B+C, g) in C",
        all(C.contains_vector(conn.derivative(x, y), facts)
            and C.contains_vector(conn.derivative(y, x), facts)
            for x in basis for y in BC.basis_rows())))
    conclusions.append((
        "nabla(B+C, B+C) = 0",
        all(all(s.is_zero() for s in conn.derivative(x, y))
            for x in BC.basis_rows() for y in BC.basis_rows())))

    R = curvature_tensor(L, conn)
    conclusions.append((
        "R(X, ., .) = R(., ., X) = 0 for X in B+C",
        _curvature_vanishes_on(R, BC, basis, facts)))

    a_idx = _coordinate_indices(A)
    c_idx = _coordinate_indices(C)
    pattern_ok = None
    if a_idx is not None and c_idx is not None:
        pattern_ok = all(
            l in c_idx and i in a_idx and j in a_idx and k in a_idx
            for ((i, j, k, l), _v) in R.nonzero_components())
    ric = ricci(R)
    return PartitionReport(tuple(hypotheses), tuple(conclusions),
                           ric.matrix.is_zero(), pattern_ok)


def _curvature_vanishes_on(R, space, basis, facts):
    for x in space.basis_rows():
        for y in basis:
            for z in basis:
                if any(not s.is_zero() for s in R.apply(x, y, z)):
                    return False
                if any(not s.is_zero() for s in R.apply(z, y, x)):
                    return False
    return True


def _invariant(space, J, facts):
    return all(space.contains_vector(J.apply(r), facts) for r in space.basis_rows())


def _coordinate_indices(space):
    """1-based coordinate indices when the subspace is a coordinate span."""
    idx = set()
    for row in space.basis_rows():
        hits = [t for t, v in enumerate(row) if not v.is_zero()]
        if len(hits) != 1 or not row[hits[0]] == Scalar.one():
            return None
        idx.add(hits[0] + 1)
    return idx


def _as_subspace(n, p):
    if isinstance(p, Subspace):
        return p
    return Subspace.coordinate(n, list(p))


def _basis_vector(n, i):
    return tuple(Scalar.one() if t == i else Scalar.zero() for t in range(n))
